from octic_monodromy.cli import main

if __name__ == "__main__":
    main()

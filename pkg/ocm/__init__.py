"""Short-name launcher package for octic-monodromy."""

from octic_monodromy.version import __version__

"""Monodromy, nilpotent cones and fan verification for the mirror octic two-parameter family."""

from .version import __version__

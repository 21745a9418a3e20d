"""Computational verification toolkit for branched double covers of knots,
quaternionic space-form groups, and weighted circle actions on the 3-sphere."""

__version__ = "0.1.0"

"""Symbolic-numeric lab for conformal flux-tube geometry and kinematic dynamo checks."""

__version__ = "0.1.0"

"""Exact derivations, Jordan derivations and anti-derivations of path algebras
and their dual / generalized one-point extensions."""

__version__ = "0.1.0"

"""Exact Igusa zeta integrals over Q_p and the unextendability calculus built on them."""

__version__ = "0.1.0"

"""Exact Alexander polynomial and theta invariant of knots from PD codes."""

__version__ = "0.1.0"

"""Certified solver for small values of x^2 + y^2 - alpha z^2 at integer points."""

from __future__ import annotations

__version__ = "0.1.0"

"""Homogeneous factorisations of complete graphs over finite fields."""

from __future__ import annotations

__version__ = "0.1.0"

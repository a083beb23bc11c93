"""Exact six-vertex model toolkit: classification, planar evaluation, oracles."""

from .scalar import Scalar, parse_scalar, format_scalar

__all__ = ["Scalar", "parse_scalar", "format_scalar"]

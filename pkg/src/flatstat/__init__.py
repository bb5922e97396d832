"""Exact intersection statistics of affine flats in F_2^n."""

__version__ = "0.1.0"

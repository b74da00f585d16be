"""Exact algebra for Witt vectors and the Weyl algebra over Z/p^n."""

__version__ = "0.1.0"

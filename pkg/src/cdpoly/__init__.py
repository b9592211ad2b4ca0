"""Cayley-Dickson algebras, their polynomials, and numerical zero sets."""
from .algebra import CDNumber, make, mul, conj, inverse, scalar_product

__version__ = "0.1.0"

__all__ = ["CDNumber", "make", "mul", "conj", "inverse", "scalar_product", "__version__"]

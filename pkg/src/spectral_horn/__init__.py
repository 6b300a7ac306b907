"""Eigenvalues of Hermitian matrices whose sum is positive semidefinite of bounded rank."""

__version__ = "0.1.0"

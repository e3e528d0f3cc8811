"""Constructive cycle embeddings in finite projective spaces PG(n, q)."""

__version__ = "0.1.0"

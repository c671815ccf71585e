"""Embeddings of sentence-trees into word-trees, and projection complexes."""

__version__ = "0.1.0"

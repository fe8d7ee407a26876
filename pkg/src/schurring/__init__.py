"""S-rings and Cayley schemes over finite abelian groups."""

__version__ = "0.1.0"

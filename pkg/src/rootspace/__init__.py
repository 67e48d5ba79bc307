"""Root-and-pattern morphology with an embedding-space hypothesis bench."""

__version__ = "0.1.0"

"""Search for small induced universal graphs of graph and tree families."""

__version__ = "0.1.0"

"""Source-normalized journal citation indicators."""

__version__ = "0.1.0"

"""Free-group computations around Whitehead's algorithm and a Klein-bottle cover."""

__version__ = "0.1.0"

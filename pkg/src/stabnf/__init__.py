"""Normal forms for stabilizer (Clifford) circuits."""

__version__ = "0.1.0"

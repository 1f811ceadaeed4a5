"""Width-s weak moonshine for finite groups."""

__version__ = "0.1.0"

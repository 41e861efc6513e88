"""Static figure rendering for benchmark plot-series files."""

__version__ = "0.1.0"

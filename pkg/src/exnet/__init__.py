"""Excellence networks: statistics and visualization data for institutional
co-authorship networks."""

__version__ = "0.1.0"

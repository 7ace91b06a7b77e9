"""toricchow - Chow groups of toric schemes over a discrete valuation ring."""

__version__ = "0.1.0"

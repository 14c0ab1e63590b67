"""wallcross: exact and numeric toolkit for toric GIT wall-crossings,
relative hypergeometric series, and analytic-continuation checks."""

__version__ = "0.1.0"

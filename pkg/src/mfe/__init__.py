"""Trace statistics of block-extracted Brownian motion on U(N,K).

Exact finite-dimension computation on coloured diagram bases, exact
large-dimension limits (free and amalgamated cumulants), and a Monte-Carlo
group-SDE simulator cross-validating both.
"""

__version__ = "0.1.0"

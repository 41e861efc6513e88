"""Temporal-clause benchmark toolchain.

Generates a deterministic catalogue of liveness/safety clause formulas,
encodes them for external theorem provers, runs measured solver campaigns,
cross-checks small instances with a built-in oracle, and aggregates the
results into tables and plot series.
"""

__version__ = "0.1.0"

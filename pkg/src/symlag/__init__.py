"""Desk-scale reproduction of a bulk-deformed superpotential computation
for a two-component Lagrangian link in S^2 x S^2."""

__version__ = "0.1.0"

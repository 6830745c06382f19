"""Exact diagonals, products, integrality and modularity of D-finite series."""

"""Diagnostics module: patch tests, ghost forces, convergence studies, energies and structural checks."""

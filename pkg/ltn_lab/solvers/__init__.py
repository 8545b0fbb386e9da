"""Solvers module."""

"""Operators module: assembly of local, nonlocal and coupled discrete operators."""

"""Unit tests for ltn_lab."""

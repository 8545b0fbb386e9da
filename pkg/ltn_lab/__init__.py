"""Allows access to submodules from ltn_lab namespace."""

from __future__ import annotations

from importlib.metadata import version

__version__ = version("ltn-lab")

from ltn_lab.lab import Lab  # noqa: F401 (unused-import)

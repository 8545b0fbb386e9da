"""Models module."""

from ltn_lab.models.grid import Grid1D, Interval  # noqa: F401 (unused-import)
from ltn_lab.models.run_config import RunConfig  # noqa: F401 (unused-import)

"""Execution settings shared by every service of a Lab."""

import logging
import os

from ltn_lab.errors import ConfigValidationError

_logger = logging.getLogger(__name__)

THREADS_VARIABLE = "LTN_LAB_THREADS"


class Settings:
    """Execution settings.

    Parameters
    ----------
    threads: worker threads for independent cases of a study; `0` runs them serially.
    progress_bar: Visualise a progress bar if True.

    Examples
    --------
    ```python
    settings = Settings.from_env(progress_bar=True)
    ```
    """

    def __init__(self, threads: int = 0, progress_bar: bool = False) -> None:
        if threads < 0:
            raise ConfigValidationError(f"{THREADS_VARIABLE}: must be non-negative, found {threads}")
        self.threads = threads
        self.progress_bar = progress_bar

    def __repr__(self) -> str:
        """Class representation."""
        return f"{self.__class__.__name__}(threads={self.threads}, progress_bar={self.progress_bar})"

    def __str__(self) -> str:
        """Class string formatting."""
        return self.__repr__()

    @classmethod
    def from_env(cls, progress_bar: bool = False) -> "Settings":
        """Read the thread cap from `LTN_LAB_THREADS`; unset or empty means serial.

        Raises
        ------
        ConfigValidationError
            The variable is not a non-negative integer.
        """
        raw = os.environ.get(THREADS_VARIABLE, "").strip()
        try:
            threads = int(raw) if raw else 0
        except ValueError as err:
            raise ConfigValidationError(f"{THREADS_VARIABLE}: expected an integer, found {raw!r}") from err
        _logger.debug(dict(threads=threads))
        return cls(threads, progress_bar)

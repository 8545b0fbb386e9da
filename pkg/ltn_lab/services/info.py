"""Class for handling version information."""

from ltn_lab import __version__ as version
from ltn_lab.settings import Settings


class Info:
    """Class for handling version information."""

    def __init__(self, settings: Settings) -> None:
        self.settings = settings

    def __repr__(self) -> str:
        """Class representation."""
        return f"{self.__class__.__name__}({self.settings!r})"

    def __str__(self) -> str:
        """Class string formatting."""
        return f"{self.__class__.__name__}(settings={self.settings!r})"

    def version(self) -> str:
        """Return the version of the ltn-lab python library."""
        return version

"""Class composition of the services, to access the pipelines with syntactic sugar."""

from ltn_lab.services.info import Info
from ltn_lab.services.runner import Runner
from ltn_lab.settings import Settings


class Lab:
    """Collection of ltn-lab services."""

    def __init__(self, threads: int | None = None, progress_bar: bool = False) -> None:
        """Create the services around one set of execution settings.

        Parameters
        ----------
        threads:
            worker threads for independent cases; read from `LTN_LAB_THREADS` when `None`.
        progress_bar:
            if `True`, will show a progress bar.

        Examples
        --------
        ```python
        from ltn_lab import Lab

        lab = Lab(threads=4)
        lab.runner.execute("configs/qnl_converge.json")
        ```
        """
        if threads is None:
            self.settings = Settings.from_env(progress_bar)
        else:
            self.settings = Settings(threads, progress_bar)
        self.info = Info(self.settings)
        self.runner = Runner(self.settings)

    def __repr__(self) -> str:
        """Class representation."""
        return f"{self.__class__.__name__}({self.settings!r})"

    def __str__(self) -> str:
        """Class string formatting."""
        return f"""Instance of ltn_lab.{self.__class__.__name__} composed with: {self.settings!s}"""

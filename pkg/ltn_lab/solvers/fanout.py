"""Run independent cases serially or on a thread pool, with an optional progress bar."""

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from tqdm import tqdm

_logger = logging.getLogger(__name__)

Case = TypeVar("Case")
Result = TypeVar("Result")


def map_cases(
    function: Callable[[Case], Result],
    cases: Sequence[Case],
    threads: int = 0,
    progress_bar: bool = False,
    desc: str | None = None,
) -> list[Result]:
    """Apply `function` to every case and return the results in case order.

    Parameters
    ----------
    function:
        Called once per case. It must not mutate shared state.
    cases:
        The inputs.
    threads:
        Worker threads; `0` runs the cases in the calling thread.
    progress_bar:
        Show a `tqdm` progress bar.
    desc:
        Progress bar label.

    Returns
    -------
    list
        `function(case)` for each case. The first exception raised by a case propagates.
    """
    _logger.debug(dict(cases=len(cases), threads=threads))
    if threads <= 0:
        return [function(case) for case in tqdm(cases, desc=desc, disable=not progress_bar, maxinterval=0.5, miniters=1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(function, case) for case in cases]
        return [
            future.result()
            for future in tqdm(futures, desc=desc, disable=not progress_bar, maxinterval=0.5, miniters=1)
        ]

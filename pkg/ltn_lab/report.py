"""Writers for reports, solution fields, triplet exports and run manifests."""

import hashlib
import json
import logging
import math
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pandas as pd

from ltn_lab import __version__
from ltn_lab.errors import IoFailure, UnreachableError
from ltn_lab.models.fields import SolutionField
from ltn_lab.models.reports import ConvergenceReport, Report
from ltn_lab.models.run_config import OutputFormat
from ltn_lab.models.systems import LinearSystem

_logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _json_text(value: object) -> str:
    """JSON text with sorted keys, 17 significant digits for floats and `null` for non-finite numbers."""
    match value:
        case None:
            return "null"
        case bool() | np.bool_():
            return "true" if value else "false"
        case int() | np.integer():
            return str(int(value))
        case float() | np.floating():
            return FLOAT_FORMAT % value if math.isfinite(value) else "null"
        case str():
            return json.dumps(value)
        case dict():
            items = ", ".join(f"{json.dumps(str(key))}: {_json_text(value[key])}" for key in sorted(value, key=str))
            return "{" + items + "}"
        case list() | tuple() | np.ndarray():
            return "[" + ", ".join(_json_text(item) for item in value) + "]"
        case _:
            return json.dumps(str(value))


def canonical_json(value: object) -> str:
    """Serialize to the canonical JSON text used by every written artifact."""
    return _json_text(value) + "\n"


def config_hash(document: dict) -> str:
    """SHA-256 of the canonical JSON text of a configuration document."""
    return hashlib.sha256(canonical_json(document).encode()).hexdigest()


def _write(path: Path, write: Callable[[Path], object]) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        write(path)
    except OSError as err:
        raise IoFailure(f"cannot write {path}: {err}") from err
    _logger.debug(dict(path=str(path)))
    return path


def report_frame(report: Report) -> pd.DataFrame:
    """The tabular form of a report; a convergence table ends with a `slope` row.

    Boolean columns are written `true` / `false` as in the JSON form.
    """
    frame = report.to_frame()
    for column in frame.columns[frame.dtypes == bool]:
        frame[column] = frame[column].map({True: "true", False: "false"})
    if isinstance(report, ConvergenceReport):
        deltas = [FLOAT_FORMAT % delta for delta in report.deltas] + ["slope"]
        slopes = pd.DataFrame({"l2_error": [report.l2_slope], "h1_error": [report.h1_slope]})
        frame = pd.concat([frame.drop(columns="delta"), slopes], ignore_index=True)
        frame.insert(0, "delta", deltas)
    return frame


def emit_report(report: Report, output_format: OutputFormat | str, path: str | Path) -> Path:
    """Write a report as JSON or CSV.

    Output is byte-identical for identical reports: keys are sorted and floats carry 17 significant digits.

    Parameters
    ----------
    report:
        Any diagnostic report.
    output_format:
        `json` for the full report, `csv` for its table.
    path:
        Destination file; parent directories are created.

    Returns
    -------
    Path
        The written file.

    Raises
    ------
    IoFailure
        The file cannot be written.

    Examples
    --------
    ```python
    emit_report(report, "csv", "out/report.csv")
    ```
    """
    path = Path(path)
    match OutputFormat(output_format):
        case OutputFormat.JSON:
            text = canonical_json(report.build())
            return _write(path, lambda target: target.write_text(text))
        case OutputFormat.CSV:
            frame = report_frame(report)
            return _write(path, lambda target: frame.to_csv(target, index=False, float_format=FLOAT_FORMAT))
        case _:
            raise UnreachableError(f"unknown output format {output_format}")


def write_solution(field: SolutionField, path: str | Path) -> Path:
    """Write the plot-ready columns `x, u, region` of a field as CSV."""
    frame = field.to_frame()
    return _write(Path(path), lambda target: frame.to_csv(target, index=False, float_format=FLOAT_FORMAT))


def export_triplets(system: LinearSystem, path: str | Path) -> Path:
    """Write the nonzero entries of an assembled matrix as whitespace-separated `row col value` lines."""
    rows, columns = np.nonzero(system.matrix)
    frame = pd.DataFrame({"row": rows, "col": columns, "value": system.matrix[rows, columns]})
    return _write(
        Path(path), lambda target: frame.to_csv(target, sep=" ", index=False, header=False, float_format=FLOAT_FORMAT)
    )


def write_manifest(document: dict, wall_time: float, path: str | Path) -> Path:
    """Write the run manifest: configuration hash, library version and wall time in seconds."""
    manifest = {"config_sha256": config_hash(document), "version": __version__, "wall_time": wall_time}
    text = canonical_json(manifest)
    return _write(Path(path), lambda target: target.write_text(text))

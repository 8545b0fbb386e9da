"""Per-method patch-test tolerances."""

import logging

from ltn_lab.errors import InvalidDegreeError
from ltn_lab.models.method_spec import Method

_logger = logging.getLogger(__name__)

DEGREES = (1, 2, 3)

MACHINE = 1e-10
MACHINE_CUBIC = 1e-9
APPROXIMATE = 5e-2
SHRINKING = 1e-1
# a symmetric, linearly consistent energy leaves a quadratic defect with a fixed nonzero first moment
QNL_QUADRATIC = 1e-3
WEAK_LINEAR = 1e-6

_EXACT_TO_CUBIC = (Method.SPLICE, Method.OBM, Method.PARTITIONED, Method.LOCAL_ONLY, Method.NONLOCAL_ONLY)
_EXACT_TO_QUADRATIC = (Method.BLENDED, Method.PARTIAL_STRESS)


def patch_tolerance(method: Method | str, degree: int) -> tuple[float, bool]:
    """Return the sup-norm tolerance of a patch test and whether it is a machine-precision one.

    Parameters
    ----------
    method:
        The method under test.
    degree:
        Polynomial degree, 1, 2 or 3.

    Returns
    -------
    tuple[float, bool]
        `(tolerance, strict)`. Methods that reproduce the polynomial only approximately get an engineering
        tolerance with `strict=False`.

    Raises
    ------
    InvalidDegreeError

    Examples
    --------
    ```python
    patch_tolerance("splice", 3)
    # (1e-09, True)
    ```
    """
    if degree not in DEGREES:
        raise InvalidDegreeError(f"patch tests are defined for degrees {DEGREES}, found {degree}")
    method = Method(method)
    if method in _EXACT_TO_CUBIC:
        return (MACHINE if degree <= 2 else MACHINE_CUBIC), True
    if method in _EXACT_TO_QUADRATIC:
        return (MACHINE, True) if degree <= 2 else (APPROXIMATE, False)
    if method is Method.QNL:
        return ((MACHINE, True), (QNL_QUADRATIC, False), (APPROXIMATE, False))[degree - 1]
    if method is Method.ARLEQUIN and degree == 1:
        return WEAK_LINEAR, False
    if method is Method.SHRINKING_HORIZON:
        return SHRINKING, False
    return APPROXIMATE, False

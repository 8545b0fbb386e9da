"""Enumerated errors for the failures that may arise while building, assembling and solving coupled problems.

??? note
    Every error derives from either `LtnLabValidationError` (bad input, the CLI exits with status 2)
    or `LtnLabSolverError` (a numerical failure, the CLI exits with status 3).
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ltn_lab.models.fields import IterationTrace


class LtnLabValidationError(Exception):
    """Base class of every error raised while validating inputs."""


class LtnLabSolverError(Exception):
    """Base class of every error raised while solving an assembled problem."""


class UnreachableError(Exception):
    """Indicates a section of code was reached that should be unreachable."""


# grid_config


class GridError(LtnLabValidationError):
    """Raised when a Grid1D is malformed (`n_nodes < 3`, `x_hi <= x_lo` or a non-integer node count)."""


class OverlapTooSmall(LtnLabValidationError):
    """Raised when the overlap width is smaller than the horizon the mode or method requires."""


class InconsistentIntervals(LtnLabValidationError):
    """Raised when decomposition intervals fall outside the domain, are empty or intersect illegally."""


class BlendingFunctionError(LtnLabValidationError):
    """Raised when a BlendingFunction has an empty or inverted support interval."""


# kernels


class KernelError(LtnLabValidationError):
    """Raised when a Kernel has a non-positive horizon or Young's modulus."""


class ZeroBond(LtnLabValidationError):
    """Raised when an inverse-distance kernel is evaluated on a bond of zero length."""


class HorizonNotResolved(LtnLabValidationError):
    """Raised when the horizon is not an integer multiple `m >= 2` of the grid spacing."""


class HorizonFunctionError(LtnLabValidationError):
    """Raised when a HorizonFunction is missing a parameter its kind requires or has an invalid value."""


# operators


class RegionTooSmall(LtnLabValidationError):
    """Raised when a region holds fewer than 3 nodes."""


class MissingBoundaryLayer(LtnLabValidationError):
    """Raised when a nonlocal neighbourhood leaves the grid."""


class ModeMismatch(LtnLabValidationError):
    """Raised when the decomposition mode does not match the coupling method."""


class MethodSpecError(LtnLabValidationError):
    """Raised when a MethodSpec is missing a parameter its method requires."""


class IllPosedCoupling(LtnLabValidationError):
    """Raised when the Arlequin coupling parameters do not give a well-posed saddle point problem (`kappa1 == 0`)."""


class IncompleteVolumeConstraint(LtnLabValidationError):
    """Raised when a nonlocal volume constraint layer is thinner than the horizon."""


class InvalidRobin(LtnLabValidationError):
    """Raised when a Robin coefficient is negative or both coefficients are zero."""


# diagnostics and cli


class InvalidDegreeError(LtnLabValidationError):
    """Raised when a patch test degree is not one of 1, 2 or 3."""


class InvalidConvergenceStudy(LtnLabValidationError):
    """Raised when a convergence study has fewer than 3 horizons or they are not strictly decreasing."""


class UnknownFunctionError(LtnLabValidationError):
    """Raised when a configuration references a function that is not in the registry."""


class ConfigValidationError(LtnLabValidationError):
    """Raised when a run configuration does not validate; the message names the offending fields."""


# solvers


class SingularSystem(LtnLabSolverError):
    """Raised when a linear system is singular or its solution misses the residual bound."""


class RankDeficientCoupling(LtnLabSolverError):
    """Raised when the Arlequin coupling operator does not have full row rank."""


class ReducedSystemSingular(LtnLabSolverError):
    """Raised when the reduced optimization-based system is not positive definite (overlap too small)."""


class NotConverged(LtnLabSolverError):
    """Raised when a partitioned iteration reaches `max_iter` before meeting its tolerance."""

    def __init__(self, max_iter: int, trace: IterationTrace) -> None:
        super().__init__(f"partitioned iteration did not converge within {max_iter} iterations")
        self.max_iter = max_iter
        self.trace = trace


class IoFailure(LtnLabSolverError):
    """Raised when a report or artifact cannot be written."""

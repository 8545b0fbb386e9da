"""Shared fixtures: grids, kernels and run documents on small problems."""

import copy

import pytest

from ltn_lab.models.grid import Grid1D
from ltn_lab.models.kernel import Kernel
from ltn_lab.models.run_config import RunConfig

SPLICE_DOCUMENT = {
    "problem": {
        "domain": [-0.05, 1.0],
        "h": 0.0125,
        "f": {"name": "const", "value": 0.0},
        "g": {"name": "polynomial", "coefficients": [1.0, 1.0]},
    },
    "decomposition": {"mode": "sharp_interface", "interface": 0.5},
    "method": {"name": "splice"},
    "kernel": {"family": "constant", "model": "diffusion", "delta": 0.05},
    "diagnostic": {"kind": "patch_test", "degree": 1},
    "output": {"directory": "out", "format": "json"},
    "seed": 0,
}

OVERLAP_DOCUMENT = {
    "problem": {
        "domain": [-0.05, 1.0],
        "h": 0.0125,
        "f": {"name": "sin", "amplitude": 1.0, "frequency": 1.0, "phase": 0.0},
        "g": {"name": "const", "value": 0.0},
    },
    "decomposition": {"mode": "overlap", "overlap": [0.4, 0.6]},
    "method": {"name": "obm"},
    "kernel": {"family": "constant", "model": "diffusion", "delta": 0.05},
    "solver": {"tol": 1e-12, "max_iter": 500},
    "output": {"directory": "out", "format": "json"},
    "seed": 0,
}

BLENDED_DOCUMENT = {
    "problem": {
        "domain": [-0.05, 1.0],
        "h": 0.0125,
        "f": {"name": "const", "value": 0.0},
        "g": {"name": "polynomial", "coefficients": [1.0, 1.0]},
    },
    "decomposition": {"mode": "blended_transition", "blend": [0.4, 0.6]},
    "method": {"name": "blended", "blending": {"shape": "piecewise_linear", "support": [0.4, 0.6]}},
    "kernel": {"family": "constant", "model": "diffusion", "delta": 0.05},
    "seed": 0,
}

QNL_DOCUMENT = {
    "problem": {
        "domain": [-0.05, 1.0],
        "h": 0.0125,
        "f": {"name": "const", "value": 0.0},
        "g": {"name": "polynomial", "coefficients": [1.0, 1.0]},
    },
    "decomposition": {"mode": "blended_transition", "interface": 0.5},
    "method": {"name": "qnl"},
    "kernel": {"family": "constant", "model": "diffusion", "delta": 0.05},
    "seed": 7,
}

SHRINKING_DOCUMENT = {
    "problem": {
        "domain": [-0.15, 1.0],
        "h": 0.0125,
        "f": {"name": "const", "value": 0.0},
        "g": {"name": "polynomial", "coefficients": [1.0, 1.0]},
    },
    "decomposition": {"mode": "variable_horizon", "interface": 0.5, "transition_width": 0.4},
    "method": {
        "name": "shrinking_horizon",
        "horizon": {"kind": "smooth_c2", "delta_max": 0.1, "interface": 0.5, "ramp_width": 0.4},
    },
    "kernel": {"family": "constant", "model": "diffusion", "delta": 0.1},
    "seed": 0,
}


DOCUMENTS = {
    "splice": SPLICE_DOCUMENT,
    "overlap": OVERLAP_DOCUMENT,
    "blended": BLENDED_DOCUMENT,
    "qnl": QNL_DOCUMENT,
    "shrinking": SHRINKING_DOCUMENT,
}


@pytest.fixture(name="documents")
def get_documents() -> dict[str, dict]:
    """Fresh copies of the run documents, safe to edit in a test."""
    return copy.deepcopy(DOCUMENTS)


@pytest.fixture(name="grid", scope="module")
def get_grid() -> Grid1D:
    return Grid1D.from_spacing(-0.05, 1.0, 0.0125)


@pytest.fixture(name="kernel", scope="module")
def get_kernel() -> Kernel:
    return Kernel("constant", 0.05)


@pytest.fixture(name="splice_config", scope="module")
def get_splice_config() -> RunConfig:
    return RunConfig.from_dict(copy.deepcopy(SPLICE_DOCUMENT))


@pytest.fixture(name="overlap_config", scope="module")
def get_overlap_config() -> RunConfig:
    return RunConfig.from_dict(copy.deepcopy(OVERLAP_DOCUMENT))


@pytest.fixture(name="blended_config", scope="module")
def get_blended_config() -> RunConfig:
    return RunConfig.from_dict(copy.deepcopy(BLENDED_DOCUMENT))


@pytest.fixture(name="qnl_config", scope="module")
def get_qnl_config() -> RunConfig:
    return RunConfig.from_dict(copy.deepcopy(QNL_DOCUMENT))


@pytest.fixture(name="shrinking_config", scope="module")
def get_shrinking_config() -> RunConfig:
    return RunConfig.from_dict(copy.deepcopy(SHRINKING_DOCUMENT))

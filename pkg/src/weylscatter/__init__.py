"""Scattering matrices from boundary-triple Weyl functions.

The package evaluates operator-valued Weyl functions of exactly solvable
Schroedinger pairs, takes their boundary values on the real axis and turns
them into scattering matrices.  Independent oracles (partial waves, transfer
matrices, truncated resolvents, a stationary representation) check the
results.
"""

__version__ = "0.1.0"

from .errors import WeylScatterError
from .weyl import (
    SpectralPoint,
    ChannelTruncation,
    WeylSample,
    BoundaryLimit,
    RiggingWeights,
    EpsSchedule,
    evaluate_weyl,
    boundary_limit,
    nevanlinna_audit,
)
from .engine import (
    ScatteringMatrixSample,
    smatrix,
    smatrix_sweep,
    robin_form_smatrix,
    eigenphase_report,
)
from .models import make_model, MODEL_IDS

__all__ = [
    "__version__",
    "WeylScatterError",
    "SpectralPoint",
    "ChannelTruncation",
    "WeylSample",
    "BoundaryLimit",
    "RiggingWeights",
    "EpsSchedule",
    "evaluate_weyl",
    "boundary_limit",
    "nevanlinna_audit",
    "ScatteringMatrixSample",
    "smatrix",
    "smatrix_sweep",
    "robin_form_smatrix",
    "eigenphase_report",
    "make_model",
    "MODEL_IDS",
]

"""Concrete operator pairs with closed-form Weyl functions."""

from ..errors import ConfigurationError
from .base import AlphaProfile, ConstantWeyl, ModeSymbolTable, RobinModel, WeylModel, parse_complex
from .jacobi import JacobiHalfLine, TruncatedChain, free_m_boundary, free_m_function
from .line import DeltaLine
from .radial import (
    CircleDeltaShell,
    CircleDirichletFree,
    CircleNeumannFree,
    DiskDirichletRobin,
    DiskNeumannRobin,
    SphereDeltaShell,
)

_REGISTRY = {
    cls.kind: cls
    for cls in (
        DeltaLine,
        JacobiHalfLine,
        DiskDirichletRobin,
        DiskNeumannRobin,
        CircleDirichletFree,
        CircleNeumannFree,
        CircleDeltaShell,
        SphereDeltaShell,
    )
}

MODEL_IDS = tuple(_REGISTRY)

_ACCEPTED = {
    "delta_line": ("alpha",),
    "jacobi_halfline": ("alpha",),
    "disk_dirichlet_robin": ("radius", "alpha", "rigging"),
    "disk_neumann_robin": ("radius", "alpha"),
    "circle_dirichlet_free": ("radius", "v0", "rigging"),
    "circle_neumann_free": ("radius", "v0", "rigging"),
    "circle_delta_shell": ("radius", "alpha", "v0"),
    "sphere_delta_shell": ("radius", "alpha", "v0"),
}


def normalize_id(model_id):
    return str(model_id).strip().lower().replace("-", "_")


def make_model(model_id, **params):
    """Build a model by id (hyphens or underscores), ignoring None parameters.

    Raises
    ------
    ConfigurationError
        Unknown id or a parameter the model does not take.
    """
    key = normalize_id(model_id)
    if key not in _REGISTRY:
        raise ConfigurationError(f"unknown model {model_id!r}; choose from {', '.join(MODEL_IDS)}")
    given = {k: v for k, v in params.items() if v is not None}
    extra = set(given) - set(_ACCEPTED[key])
    if extra:
        raise ConfigurationError(f"model {key} does not take {sorted(extra)}")
    try:
        return _REGISTRY[key](**given)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from exc


__all__ = [
    "AlphaProfile", "ConstantWeyl", "ModeSymbolTable", "RobinModel", "WeylModel",
    "parse_complex", "JacobiHalfLine", "TruncatedChain", "free_m_boundary",
    "free_m_function", "DeltaLine", "CircleDeltaShell", "CircleDirichletFree",
    "CircleNeumannFree", "DiskDirichletRobin", "DiskNeumannRobin",
    "SphereDeltaShell", "MODEL_IDS", "make_model", "normalize_id",
]

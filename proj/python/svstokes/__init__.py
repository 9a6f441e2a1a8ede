"""Scott-Vogelius divergence analysis on planar triangulations."""

import json

from . import _core
from ._core import (
    ConstructionError,
    InvariantViolation,
    NumericalIndeterminacy,
    divergence_matrix,
    generate,
    render_svg,
)

__version__ = _core.__version__


def analyze(mesh, **kwargs):
    """Report dict with keys mesh, vertices, trees, divergence, spline, meta."""
    return json.loads(_core.analyze(mesh, **kwargs))


def verify_fields(mesh, samples=10, seed=1):
    return json.loads(_core.verify_fields(mesh, samples=samples, seed=seed))


__all__ = [
    "ConstructionError",
    "InvariantViolation",
    "NumericalIndeterminacy",
    "analyze",
    "divergence_matrix",
    "generate",
    "render_svg",
    "verify_fields",
]

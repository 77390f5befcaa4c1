"""Numerical Lorentzian and torsionful geometry.

Spacetimes are plain text documents (metric, optional torsion, optional
frame, all as coordinate expressions). The module evaluates connection
and curvature data pointwise, integrates autoparallels, builds adapted
charts and transported frames, and tests inertial-frame predicates.
"""

from ._core import (
    DocumentParseError,
    DocumentValidationError,
    NormalChart,
    Spacetime,
    __version__,
    autoparallel,
    catalog,
    catalog_keys,
    check_antisymmetry,
    check_irf,
    check_nacs,
    check_pirf,
    decompose,
    exponential_map,
    inertial_moving_frame,
    load_file,
    normal_chart,
    ricci_obstruction,
)

__all__ = [
    "DocumentParseError",
    "DocumentValidationError",
    "NormalChart",
    "Spacetime",
    "__version__",
    "autoparallel",
    "catalog",
    "catalog_keys",
    "check_antisymmetry",
    "check_irf",
    "check_nacs",
    "check_pirf",
    "decompose",
    "exponential_map",
    "inertial_moving_frame",
    "load_file",
    "normal_chart",
    "ricci_obstruction",
]

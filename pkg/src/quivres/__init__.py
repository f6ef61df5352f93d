"""Locally projective crepant resolutions of quiver varieties by exact enumeration."""

from __future__ import annotations

__version__ = "0.1.0"

from .catalog import get_example, star
from .classifier import (
    SignFunction,
    census,
    extend_sign_function,
    monte_carlo_nonprojective,
    multiset_certificate_search,
    realizable,
    realizable_fm,
)
from .errors import QuiverError
from .leaves import enumerate_phi, local_quiver, phi_for
from .quiver import Instance, Quiver, build_quiver, double, framed_to_unframed, is_positive_root

__all__ = [
    "Instance", "Quiver", "QuiverError", "SignFunction", "build_quiver", "census", "double",
    "enumerate_phi", "extend_sign_function", "framed_to_unframed", "get_example",
    "is_positive_root", "local_quiver", "monte_carlo_nonprojective", "multiset_certificate_search",
    "phi_for", "realizable", "realizable_fm", "star",
]

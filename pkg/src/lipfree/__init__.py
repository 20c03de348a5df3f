"""Geometry of Lipschitz-free spaces over finite pointed metric spaces."""

from .arith import Arithmetic, arithmetic, current
from .certify import NonroughCertificate, certify, search_certificate
from .freenorm import free_norm, norm_one_cyclic_check
from .metric import FiniteMetricSpace, FreeElement, MoleculeCombination, validate_metric
from .slices import SliceSpec, slice_diameter, wstar_bdp_scan

__all__ = [
    "Arithmetic",
    "arithmetic",
    "current",
    "NonroughCertificate",
    "certify",
    "search_certificate",
    "free_norm",
    "norm_one_cyclic_check",
    "FiniteMetricSpace",
    "FreeElement",
    "MoleculeCombination",
    "validate_metric",
    "SliceSpec",
    "slice_diameter",
    "wstar_bdp_scan",
]

"""Bergman, Szego and Green kernels on planar domains, the minimal-point
disk classification, and the two-variable Reinhardt obstruction."""
from .bergman import OrthonormalBasis, kernel, orthonormalize
from .errors import DomainError, GuardBandWarning, IllConditionedBasisWarning, NumericalFailure, NumericalFailureWarning
from .geometry import Annulus, Disk, Membership, PuncturedDisk, ReinhardtProfile2, SmoothDomain, UnboundedDomain, build_smooth
from .kernels import BACKEND
from .potential import green, robin, suita_margin
from .rigidity import classify
from .szego import szego_kernel

__version__ = "0.1.0"

__all__ = [
    "Annulus",
    "BACKEND",
    "Disk",
    "DomainError",
    "GuardBandWarning",
    "IllConditionedBasisWarning",
    "Membership",
    "NumericalFailure",
    "NumericalFailureWarning",
    "OrthonormalBasis",
    "PuncturedDisk",
    "ReinhardtProfile2",
    "SmoothDomain",
    "UnboundedDomain",
    "build_smooth",
    "classify",
    "green",
    "kernel",
    "orthonormalize",
    "robin",
    "suita_margin",
    "szego_kernel",
]

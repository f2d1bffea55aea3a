"""Computation engine for finite involutive quantaloids.

Desk-scale constructions and decision procedures: sup-lattices, quantaloid
predicates and idempotent splitting, enriched categories and distributors,
presheaf completions, closed-crible quantaloids over finite sites, and the
Grothendieck-quantaloid certificates, all checkable against brute-force
oracles.
"""

from .errors import (CapabilityError, CompositionError, InputError,
                     InternalConsistencyError, QuantalibError,
                     ResourceLimitError)
from .lattice import FiniteSupLattice
from .quantaloid import FiniteQuantaloid, Morphism
from .qcat import Distributor, Functor, QCategory, QTypedSet
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "FiniteSupLattice", "FiniteQuantaloid", "Morphism",
    "QCategory", "QTypedSet", "Functor", "Distributor", "Report",
    "QuantalibError", "InputError", "CompositionError", "CapabilityError",
    "ResourceLimitError", "InternalConsistencyError",
]

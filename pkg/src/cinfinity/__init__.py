"""Exact A-infinity / C-infinity algebra toolkit over the rationals."""
from .ainf import (AInfMorphism, AInfStructure, MultiOp, NotIso, SourceTargetMismatch, Verdict,
                   bar_differential, check_cinf, check_morphism, check_shuffle_derivation,
                   check_stasheff, compose,
                   identity_morphism, invert_iso, is_weak_equivalence)
from .graded import GradedBasis, GradedMap, koszul_sign
from .transfer import (BoundTooSmall, CorrectionUnsolvable, DgAlgebra, InvalidAlgebra,
                       TransferData, build_transfer_data, transfer_ainf, transfer_cinf)

__version__ = "0.1.0"

"""Exact computations with the small quantum group u_q(sl2) and its adjoint representation."""

from .cyclotomic import Cyc, CyclotomicField, SignInconclusive, field
from .decomp import Decomposition, decompose, decompose_adjoint, casimir_block_filtration, decompose_N_j
from .modcat import GradedModule, ModuleLabel, dual, is_isomorphic, projective, simple, verma
from .smallqg import SmallQuantumGroup, small_quantum_group
from .verify import InvalidL, Report, expected_multiplicities, run_verification

__version__ = "0.1.0"

__all__ = [
    "Cyc",
    "CyclotomicField",
    "SignInconclusive",
    "field",
    "SmallQuantumGroup",
    "small_quantum_group",
    "GradedModule",
    "ModuleLabel",
    "simple",
    "projective",
    "verma",
    "dual",
    "is_isomorphic",
    "Decomposition",
    "decompose",
    "decompose_adjoint",
    "casimir_block_filtration",
    "decompose_N_j",
    "InvalidL",
    "Report",
    "expected_multiplicities",
    "run_verification",
]

"""Exact 1- and 2-body reduced density matrices of fermionic N-particle
states, with numerical certificates for their Hilbert-Schmidt, operator
norm and entropy bounds."""

from ._kernels import BACKEND
from .certificates import CertificateReport, CoefficientTensor4, certify_state
from .extremal import ExtremalResult, OptimizerConfig, maximize
from .fock_basis import SectorBasis, enumerate_sector, operator_matrix
from .rdm import exchange_matrix, gamma1, gamma2, gamma2_truncated
from .spectral import Spectrum, eig_hermitian, entropy, norms
from .states import SectorVector, near_slater, random_state, slater, yang_pairing

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CertificateReport",
    "CoefficientTensor4",
    "ExtremalResult",
    "OptimizerConfig",
    "SectorBasis",
    "SectorVector",
    "Spectrum",
    "certify_state",
    "eig_hermitian",
    "entropy",
    "enumerate_sector",
    "exchange_matrix",
    "gamma1",
    "gamma2",
    "gamma2_truncated",
    "maximize",
    "near_slater",
    "norms",
    "operator_matrix",
    "random_state",
    "slater",
    "yang_pairing",
]

"""Dirac operators with general point interactions.

Exact spectra and resolvents of ``D_0 + A delta``, their non-local
regularizations, the non-relativistic limit, and brute-force oracles.
"""

from ._backend import BACKEND
from .approximation import (alpha1, approx_eigenvalues, approx_resolvent_kernel, eta_epsilon,
                            hs_distance, nonexpansion_threshold, spectral_enclosure)
from .errors import *  # noqa: F401,F403
from .nonrelativistic import (K_A_matrix, krein_identity_check, nonrel_limit_distance,
                              scale_coupling, schrodinger_eigenvalues,
                              schrodinger_resolvent_kernel)
from .point_interaction import (CaseLabel, CouplingMatrix, EigenvalueRecord, PointSpectrumKind,
                                SpectralClassification, adjoint_coupling, cayley_of,
                                classify_spectrum, eigenvalue_residual, is_self_adjoint,
                                point_spectrum, resolvent_kernel)
from .profiles import Box, Sampled, Triangle, TruncatedGaussian, profile_from_spec

__version__ = "0.1.0"

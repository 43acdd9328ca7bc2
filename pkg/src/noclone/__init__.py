"""No-cloning bounds, teleportation fidelity thresholds, and quantum
non-Gaussianity measures for continuous-variable states.
"""

from .cloner import (BoundResult, ClassicalBound, CloneKernel,
                     FockSolverParams, GridSolverParams, apply_clone_operator,
                     build_clone_kernel, classical_bound, fock_clone_kernel,
                     fock_ncb_matrix_element, gaussian_cloner_fidelity,
                     gaussian_ncb, kernel_for_state, ncb_ultimate,
                     truncation_sweep)
from .errors import (AccuracyError, ConvergenceError, DimensionMismatchError,
                     DomainError, GridExtentError, NocloneError,
                     PreconditionError, TruncationError,
                     UnreachableBoundError)
from .grids import Grid, GridWavefunction, inner
from .iteration import (AnsatzState, IterationResult, analytic_ansatz_fidelity,
                        ansatz, default_z_edges, optimal_ansatz_r,
                        power_iterate, pz_profile, rayleigh_quotient)
from .qng import (PURE_FAMILIES, QngRecord, delta_pure, scatter_mixed,
                  scatter_qng_vs_ncb, wigner_negativity)
from .states import (CharFnPolyGauss, FockDensity, FockVector, GaussianRef,
                     State, abs_squared_coeffs, apply_displacement,
                     apply_squeeze, as_density, char_fn, char_fn_operator,
                     make_cat, make_coherent, make_coherent_mixture, make_fock,
                     make_superposition, normalized_overlap, overlap_trace,
                     purity, reference_gaussian, sample_random_density,
                     sample_random_pure, state_from_json, state_to_json,
                     trim_state, wigner)
from .teleport import (PNESResource, PnesOptimum, TMSVResource,
                       TeleportOperatorBlock, block_comparison,
                       critical_squeezing, pnes_frontier, pnes_optimize,
                       required_photon_number, resource_fidelity,
                       teleport_operator_block, tmsv_fidelity)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

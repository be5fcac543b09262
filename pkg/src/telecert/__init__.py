"""Simulation and certification of non-classical qubit teleportation.

Channel states with tunable singlet content, partial Bell-state measurement,
the one-parameter teleportation witness family, average-fidelity and PPT
benchmarks, Poissonian count simulation and noise-parameter fitting.
"""

from .benchmarks import (
    average_fidelity,
    classical_bound,
    fidelity_ideal_closed_form,
    gamma_entanglement_threshold,
    ppt_min_eigenvalue,
)
from .linalg import DensityMatrix, hermitian_eigenvalues, kron, partial_trace, partial_transpose
from .optics import (
    NoiseParams,
    alpha_from_gamma,
    constructive_pipeline,
    gamma_from_alpha,
    noisy_channel_state,
)
from .states import channel_state_ideal, input_states, pauli
from .teleport import Assemblage, Measurement, assemblage, partial_bsm
from .witness import (
    evaluate_witness,
    minimize_witness_numeric,
    theta_min_noisy,
    witness_ideal_closed_form,
    witness_min_ideal,
    witness_noisy_closed_form,
    witness_operators,
)

__version__ = "0.1.0"

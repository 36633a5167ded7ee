"""Propagation of generalized Pauli error statistics through qudit Clifford
circuits, with an analytic error model for one-way qudit repeater lines."""

from .channels import Axis, PauliChannelTable, axis_depolarizing, depolarizing
from .clifford import (
    CliffordAutomorphism,
    Direction,
    GateSpec,
    automorphism_of,
    compose,
    cpauli_sequence,
    cx,
    cz,
    fourier,
    multiply,
    pauli_gate,
    verify_conjugation,
)
from .entanglement import BellDiagonalState, density_matrix, fidelity, log_negativity
from .ept import (
    CosetReduction,
    ErrorProbabilityTensor,
    MeasuredTensor,
    StabilizerBasis,
    bell_stabilizer,
    coset_reduce,
    identity_tensor,
)
from .pauli import PauliLabel, PhasedPauli, commutation_phase, format_label, to_matrix
from .qpcode import (
    QuantumPolynomialCode,
    codeword_state,
    erasure_recover,
    logical_operators,
    parity_check_matrix,
    stabilizer_generators,
)
from .repeater import (
    CosetStatistics,
    Encoding,
    RepeaterScenario,
    absorption_probability,
    count_accepted_configurations,
    distribution_probability,
    encoded_final_statistics,
    pauli_frame_targets,
    station_measurement_stats,
    stepwise_oracle_statistics,
    unencoded_final_statistics,
)

__version__ = "0.1.0"

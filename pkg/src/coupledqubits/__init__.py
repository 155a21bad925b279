"""Entangled-state generation in exchange-coupled qubits driven by shaped pulses."""
from .dynamics import TrajectoryRecord, analytic_constant_amplitude, analytic_two_level, integrate
from .entanglement import (TargetState, amplitudes_to_product_basis, fidelity, log_negativity,
                           partial_trace, partial_transpose, state_negativity)
from .model import (QubitSystem, build_bare_hamiltonian, build_lab_frame_hamiltonian,
                    three_qubit_effective_scheme, two_qubit_effective_scheme)
from .protocols import ProtocolResult, ProtocolSpec, preset, run_protocol
from .pulses import DetuningProfile, PulseSequence, PulseShape, pulse_area
from .spectrum import diagonalize_bare, w_state_energies

__version__ = "0.1.0"

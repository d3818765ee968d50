"""Post-selected photon entanglement generated by free-space propagation."""
from .qstate import (
    PureState, DensityMatrix, ZeroStateError,
    HADAMARD, PHASE, PHASE_DAGGER, IDENTITY,
    basis_state, superposition, single_qubit, w_state,
    tensor_product, apply_gate, apply_gate_all, apply_local,
    normalize, inner, fidelity_upto_phase, partial_trace,
)
from .entanglement import (
    TwoPhotonAmplitudes, PinholePair, TangleReport, DegenerateError,
    concurrence_pure, concurrence_mixed, concurrence_farfield, concurrence_pinhole,
    three_tangle, hyperdeterminant_tangle,
)
from .scene import (
    Scene, EmitterModel, SuperradiantModel,
    build_two_source_scene, build_array_scene, far_field_ratio, is_far_field,
    radial_factor, transfer_block, transfer_blocks, farfield_phase,
    superradiant_eigs, superradiant_model,
)
from .postselect import (
    DetectedState, BeamSplitterConvention,
    detected_state, farfield_symmetrize, symmetrized_amplitudes,
    farfield_two_photon_state, pinhole_farfield_state, beamsplitter_postselect,
)
from .ghz import (
    magic_product_state, ghz_target, decode_ghz, ghz_fidelity, verify_conditions,
    cotangent_identity, viete_polynomial, coincidence_probability, ghz_target_spec,
    amplitude_closed_form,
)

__version__ = "0.1.0"

//! Applications built on the discrimination solvers: device-independent
//! dimension witnessing, state exclusion, unitary channel discrimination,
//! no-signaling decompositions with steering, randomness quantification, and
//! accessible-information bounds.

pub mod exclusion;
pub mod info;
pub mod nosignaling;
pub mod unitary;
pub mod witness;

pub use exclusion::{pbr_ensemble, solve_exclusion, ExclusionOptions, ExclusionResult};
pub use info::{holevo_chi, mutual_information, mutual_information_of};
pub use nosignaling::{
    dual_weight_sum, min_entropy, nosignaling_decomposition, steering_ensemble, MinEntropyReport,
    NoSignalingReport,
};
pub use unitary::{
    discriminate_unitaries, eigenphases, no_ancilla_search, unitary_repetition_n, UnitaryResult,
};
pub use witness::{
    dimension_witness, pairwise_helstrom_table, quantum_bound, WitnessResult,
};

//! Gluing multipartite qudit pure states.
//!
//! Two states are glued by applying an entangling two-qudit gate across one
//! party of each and then measuring two, one or none of those parties:
//! [`glue_star_star`] (entanglement swapping), [`glue_star`] and [`glue`].
//! Repeated `⋄⋆` gluing against fresh Bell pairs is captured by
//! [`RecursionMatrix`] products, and [`analysis`] checks k-uniformity and
//! average purity of the results.

pub mod analysis;
pub mod builders;
pub mod density;
pub mod error;
pub mod gates;
pub mod gluing;
pub mod json;
pub mod operator;
pub mod recursion;
pub mod state;

pub use analysis::{
    average_purity, equal_up_to_phase, fidelity, is_k_uniform, lu_correctable, max_uniformity,
    AnalysisReport,
};
pub use density::{reduced_density, DensityMatrix};
pub use error::{QGlueError, Result};
pub use gates::{gate_from_basis, generalized_bell_basis, Builtin, TwoQuditGate};
pub use gluing::{glue, glue_star, glue_star_star, GlueOutcome, GluePoint};
pub use operator::Operator;
pub use recursion::{assemble, compose, expand, power, recursion_from_gate, CoeffStates, RecursionMatrix};
pub use state::{Measurement, PureState};

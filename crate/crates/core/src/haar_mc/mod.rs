//! Monte Carlo oracle over Haar-random pure states.

pub mod density;
pub mod ensemble;
pub mod gellmann;
pub mod ks;
pub mod linalg;
pub mod rng;
pub mod stats;

pub use density::{
    entanglement_entropy, entropies, partial_trace, permute_ab, sample_state,
    tripartite_mutual_information, Entropies, PureState, ReducedDensity,
};
pub use ensemble::{mi_ensemble, run_ensemble, EnsembleStats, MiEnsemble};
pub use gellmann::{bloch_components, gellmann_basis, GellMannBasis, Generator, GeneratorFamily};
pub use ks::{ks_critical_value, ks_distance, ks_statistic, ks_test, KsMethod, KsResult};
pub use linalg::{hermitian_eigenvalues, CMatrix};
pub use rng::SampleStream;
pub use stats::{Histogram, Moments};

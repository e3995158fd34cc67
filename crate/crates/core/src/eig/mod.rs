//! Spectra of the finite chain and the consistency-condition machinery.

pub mod consistency;
pub mod delta;
pub mod dense;
pub mod eigvec;
pub mod extended;
pub mod spectrum;

pub use consistency::{consistency_residual, ConsistencyForm, ConsistencyPoint};
pub use delta::{delta_map, DeltaForm, DeltaMap};
pub use dense::{eig_dense, eig_dense_certified, DenseEigen};
pub use eigvec::reconstruct_eigenvector;
pub use extended::emin_root;
pub use spectrum::{select_emin, spectrum_record, EminSource, SpectrumRecord};

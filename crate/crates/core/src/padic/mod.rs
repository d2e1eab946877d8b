//! The local field `Q_p`: exact scalars and matrices, Iwasawa
//! decompositions, the additive character `theta`, lattice chains and Haar
//! measure bookkeeping.

pub mod iwasawa;
pub mod lattice;
pub mod matrix;
pub mod measure;
pub mod scalar;
pub mod theta;

pub use iwasawa::{iwasawa_nak, iwasawa_pzk, Nak, Pzk};
pub use lattice::LatticeChain;
pub use matrix::PadicMatrix;
pub use measure::{splitting_report, Ambient, MeasureContext, SplittingReport, Subset};
pub use scalar::PadicScalar;
pub use theta::theta_eval;

//! Finite fields, `GL_n(F_q)` and the coset machinery of its mirabolic
//! subgroup.

pub mod conjugacy;
pub mod field;
pub mod matrix;
pub mod mirabolic;

pub use conjugacy::{
    classify_conjugacy, conjugacy_invariant, ConjClassLabel, ConjInvariant, Gl2Classifier,
};
pub use field::{Elem, FieldExtension, FiniteField, FiniteFieldTower};
pub use matrix::{enumerate_group, enumerate_group_range, group_order, FiniteMatrix};
pub use mirabolic::{mirabolic_coset_reps, unipotent_mirabolic_reps};

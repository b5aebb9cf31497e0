//! Elliptic fibrations: Kodaira fibres, the Shioda height pairing and exact
//! checks of linear relations among curves.

mod fibre;
mod relation;
mod spec;

pub use fibre::{local_contribution, FibreKind, KodairaFibre};
pub use relation::{
    fibre_relations, formal_gram, generators, in_radical, integral_vector, relation_residual,
    verify_divisibility_relation, verify_relation, FormalDivisor, Relation,
};
pub use spec::{validate_fibration, Check, FibrationSpec, SectionIncidence, ValidationReport};

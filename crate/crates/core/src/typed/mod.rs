//! Type D structures over a path algebra: structure checks, morphisms and
//! homotopies, mapping cones, cancellation, and equivalence decisions.

mod coeffmap;
mod morphism;
mod reduce;
mod structure;

pub use coeffmap::CoeffMap;
pub use morphism::{
    closed_morphisms, compose_morphisms, cone, direct_sum, homotopy_check, homotopy_inverse,
    identity_morphism, HomotopyInverse, TypeDMorphism,
};
pub use reduce::{
    equivalent, is_contractible, is_homotopy_equivalence, reduce, Equivalence, Reduction,
    EQUIVALENCE_SEARCH_DIM,
};
pub use structure::{check_structure, idempotent_slice, Generator, TypeDStructure};

pub(crate) use morphism::{cone_unchecked, differential, map_slots};
pub(crate) use structure::check_bounds;

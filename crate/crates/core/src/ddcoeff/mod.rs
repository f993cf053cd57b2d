//! DD bimodules over an algebra and the torus algebra, their coefficient
//! maps, and the search for generalized coefficient maps.

mod bimodule;
mod coefficients;
mod semiextend;

pub use bimodule::{dd_check, dd_morphism, DDBimodule, DDGenerator};
pub use coefficients::{
    check_generalized, from_coefficients, to_coefficients, CoefficientSystem, CyclicInterval,
    GeneralizedCoefficientSystem, IntervalMaps,
};
pub use semiextend::{semi_extend, semi_extend_coefficients};

pub(crate) use bimodule::right_label;

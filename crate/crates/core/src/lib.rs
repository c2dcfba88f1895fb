//! Discriminant forms from genus symbols, the span of isotropic lifts in the group algebra,
//! the Weil representation and the small-type classification.

pub mod arith;
pub mod classify;
pub mod cyclotomic;
pub mod error;
pub mod form;
pub mod genus;
pub mod graph;
pub mod lift;
pub mod linalg;
pub mod rational;
pub mod weil;

pub use classify::{
    contains_isotropic_elementary, max_isotropic_elementary_rank, max_isotropic_rank,
    no_cube_catalog_check, small_type, PrimeVerdict, SmallTypeVerdict,
};
pub use cyclotomic::{Cyclotomic, CyclotomicField};
pub use error::{Error, Result};
pub use form::{build_form, DiscriminantForm, Elem, QuotientMap, Subgroup};
pub use genus::{enumerate_symbols, parse_symbol, GenusSymbol, JordanComponent, Parity, Sign};
pub use graph::{build_isotropy_graph, gamma_in_image_by_graph, IsotropyGraph};
pub use lift::{
    e_gamma_in_image, full_image_analysis, image_analysis, image_rank, isotropic_subgroups,
    lift_matrix, Bounds, ImageAnalysis, LiftMap, LiftTerm,
};
pub use rational::RationalMod1;
pub use weil::{
    check_lift_equivariance, check_relations, rho_s_scaled, rho_t, RelationReport,
    ScaledWeilMatrix,
};

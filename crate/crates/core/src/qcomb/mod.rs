//! Exact `Z[q]` polynomial identities: Gaussian binomials, group orders,
//! parabolic indices and the dimension identities of the stable ranges.

mod groups;
mod identities;
mod poly;
mod registry;

pub use groups::{projective_points, ClassicalGroup};
pub use identities::{
    decomposition_dimension, gaussian_binomial, halving_sides, hom_dimension_identity, lemma_identity_check,
    lemma_sides, theorem_dimension_check, tranche_sides, DualPair, HomIdentity, TheoremCheck,
};
pub use poly::IntPolynomial;
pub use registry::{find_identity, identity_registry, Identity, IdentityRow};

//! Rational proper holomorphic maps between unit balls `B_n -> B_N`.
//!
//! A map `f = p / g` is stored as a vector of sparse complex polynomials over
//! a common denominator. Properness, lowest terms, the normal form and the
//! symmetry groups are all read off the underlying real form
//! `|g|^2 - ||p||^2`, kept as a Hermitian coefficient matrix over a graded
//! monomial basis.

pub mod ball_map;
pub mod constructions;
pub mod error;
pub mod normal_form;
pub mod poly;
pub mod real_form;
pub mod symmetry;
pub mod unitary;

pub use ball_map::{
    compose_source_automorphism, compose_target_automorphism, is_proper, lowest_terms_check, sphere_tensor,
    tensor_components, underlying_form, BallAutomorphism, LowestTerms, LowestTermsReport, PropernessReport,
    RationalBallMap,
};
pub use constructions::{
    combine_invariants, construct_even_quartic, construct_invariant_map, construct_with_denominator, example_map,
    ConstructionResult, InvariantPolynomialSpec,
};
pub use error::{Error, Result};
pub use normal_form::{
    is_normal_form, lambda_critical_point, lambda_eval, normalize, sigma_invariants, LambdaFunction,
    NormalFormReport, NormalizationCertificate, Normalized, SigmaInvariants,
};
pub use poly::{Complex, Multiindex, PolyMap, Polynomial};
pub use real_form::{
    form_from_squares, DegreeSpec, HolomorphicDecomposition, MonomialBasis, PsdReport, RealForm, Signature,
};
pub use symmetry::{
    containment_audit, enumerate_members, membership, sigma_group_structure, t_group_search, CandidateFamily,
    ContainmentReport, GroupId, GroupVerdict, SigmaGroupStructure,
};
pub use unitary::UnitaryElement;

//! Exact symbolic summation for extended multiple harmonic sums
//! `H_n(-p, k₂, …, k_r) = Σ_{n ≥ n₁ > … > n_r > 0} n₁^p / (n₂^{k₂} ⋯ n_r^{k_r})`.
//!
//! Every such sum reduces to a combination of proper multiple harmonic sums
//! with polynomial coefficients in `n`; [`reduce`] computes it, and
//! [`spiess`] builds sums of polynomials against powers of harmonic numbers
//! on top of it.

pub mod bernoulli;
pub mod closed_form;
pub mod composition;
pub mod error;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod reducer;
pub mod spiess;
pub mod stuffle;

pub use bernoulli::{bernoulli, check_two_bs, umbral_eval, BernoulliTable, Convention};
pub use closed_form::{ClosedForm, Format};
pub use composition::Composition;
pub use error::{Error, Result};
pub use oracle::{harmonic, mhs_eval, mhs_prefix};
pub use parse::parse_poly;
pub use poly::Polynomial;
pub use rational::Rational;
pub use reducer::{
    c_poly, d_poly, d_umbral, faulhaber, faulhaber_minus_form, reduce, reduce_via_theorem,
    reduce_with, CIndex, Method,
};
pub use spiess::{
    spiess_form, spiess_form_shifted, structure_check, structured_to_closed, sum_power,
    sum_power_shifted, sum_product, sum_product_shifted, LeadingBlock, SpiessKind,
    StructureReport, StructuredForm,
};
pub use stuffle::{expand_power, product_combinations, stuffle, MhsCombination};

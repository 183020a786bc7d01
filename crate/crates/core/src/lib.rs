//! Equilibrium states, Gibbs and conformal measures, pressure and language
//! combinatorics on one-dimensional subshifts.
//!
//! Every shift is presented through [`SubshiftOracle`]. Concrete families live
//! in their own modules: one-step SFTs ([`sft`]), β-shifts ([`beta`]), the
//! Dyck shift ([`dyck`]), Kalikow-type walk/scenery shifts ([`kalikow`]) and a
//! shift whose measure of maximal entropy is not Gibbs ([`counterexample`]).

pub mod acceptance;
pub mod beta;
pub mod counterexample;
pub mod dyck;
pub mod error;
pub mod gibbsrel;
pub mod kalikow;
pub mod language;
pub mod measure;
pub mod oracle;
pub mod potential;
pub mod sft;
pub mod stats;
pub mod word;

pub use error::{Error, Result};
pub use language::{
    count_words, empirical_cylinder_weight, entropy_estimate, enumerate_language, language_table, pressure_estimate,
    LanguageTable, DEFAULT_CAP,
};
pub use measure::{BernoulliMeasure, CylinderWeight};
pub use oracle::{FullShift, SubshiftOracle};
pub use potential::{log_cocycle, sv_norm, variation, FinitePair, LocalPotential};
pub use sft::{MarkovMeasure, Sft, TransitionMatrix};
pub use word::{Cylinder, Symbol, Word};
pub use beta::BetaShift;
pub use counterexample::counterexample_oracle;
pub use dyck::{dyck_oracle, DyckParams, DyckSitePotential};
pub use kalikow::{kalikow_oracle, KalikowConfig};

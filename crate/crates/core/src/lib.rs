//! Exact symbolic algebra for bounded complex sequences on Z.
//!
//! The crate models the pointwise algebra of bounded sequences together
//! with the boundary behavior visible through eventually-periodic sets:
//!
//! * [`setalg`] — the computable Boolean algebra of eventually-periodic
//!   subsets of Z, with canonical forms and decidable queries;
//! * [`seqalg`] — step-plus-decaying-tail sequences with exact arithmetic,
//!   threshold sets, sign splits, and certified Schwartz seminorms;
//! * [`decomp`] — the greedy dyadic projection expansion with geometric
//!   remainder bounds, and the unique disjoint level-set form;
//! * [`filters`] — filters and ultrafilter traces on the definable algebra,
//!   trace/point round-trips, and exact limits along boundary directions;
//! * [`smooth`] — the rapid-vanishing smoothness criterion, the function
//!   space hierarchy classifier, chain certificates, and ideal checks;
//! * [`windows`] — numeric windowed evaluation for sequences outside the
//!   exact representation, with empirical profiles and seminorms.

pub mod decomp;
pub mod error;
pub mod filters;
pub mod num;
pub mod poly;
pub mod sample;
pub mod seqalg;
pub mod setalg;
pub mod smooth;
pub mod windows;

pub use error::{Error, Result};
pub use num::GaussianRational;
pub use seqalg::{SeminormValue, SymbolicSequence, TailTerm};
pub use setalg::{DefinableSet, Sign};

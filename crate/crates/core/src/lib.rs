//! Equitable partitions and the quotient graphs they induce.
//!
//! The crate computes coarsest equitable partitions by color refinement,
//! combinatorial and symmetrized quotients, decides fractional isomorphism
//! and the weaker "common quotient" relations with explicit matrix
//! witnesses, balances nonnegative matrices by diagonal scaling, relates
//! pseudo-equitable partitions to nonnegative projectors, and checks perfect
//! state transfer of continuous-time quantum walks through shared quotients.
//!
//! Two numeric backends are supported through [`Scalar`]: exact rationals
//! ([`Rational`]) and binary64. Binary64 comparisons take an explicit
//! tolerance, [`DEFAULT_TOL`] unless stated otherwise.
//!
//! ```
//! use equiquot::{families, quotient::quotient, refine::coarsest_equitable, Rational};
//!
//! let star = families::star::<Rational>(4);
//! let pi = coarsest_equitable(star.adj(), None, 0.0).unwrap().partition;
//! assert_eq!(pi.len(), 2);
//! let b = quotient(star.adj(), &pi, 0.0).unwrap();
//! assert_eq!(b.cell_sizes, vec![1, 4]);
//! ```

pub mod balance;
pub mod error;
pub mod fraciso;
pub mod graph;
pub mod matrix;
pub mod numeric;
pub mod partition;
pub mod pseudo;
pub mod quotient;
pub mod qwalk;
pub mod refine;
pub mod symquot;

pub use error::{Error, Result};
pub use graph::{collapsed_cube, families, Graph};
pub use matrix::Matrix;
pub use numeric::{Rational, Scalar, DEFAULT_TOL};
pub use partition::Partition;
pub use quotient::{QuotientGraph, QuotientKind};

//! Exact finite kernels in four composition regimes, their possibilistic
//! supports, guarded-choice terms over symmetric tricocycloids, and an
//! executable checker for the distributive-law structure that ties
//! subdistributions, partial distributions, and normalization together.
//!
//! Everything is exact: weights are arbitrary-precision rationals and every
//! law is checked with `==`.
//!
//! ```
//! use sesqui::dist::SubDist;
//! use sesqui::rational::q;
//!
//! let observed = SubDist::new([("ML", q(1, 6)), ("RL", q(1, 3))], q(1, 2)).unwrap();
//! let posterior = observed.normalize().unwrap();
//! assert_eq!(posterior.weight(&"RL"), q(2, 3));
//! ```

pub mod dist;
pub mod error;
pub mod finset;
pub mod json;
pub mod kernel;
pub mod laws;
pub mod monad;
pub mod possibilistic;
pub mod random;
pub mod rational;
pub mod show;
pub mod tricocycloid;

pub use dist::{Dist, MaybeDist, SubDist};
pub use error::{Error, Result};
pub use finset::FinSet;
pub use kernel::{AssocTree, Kernel, KernelFlavor};
pub use possibilistic::{RelFlavor, Relation};
pub use rational::Rational;

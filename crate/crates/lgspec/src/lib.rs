//! Exact and arbitrary-precision verification of the enumerative data attached
//! to a Landau-Ginzburg pair `(W, <J>)` of general type.
//!
//! The modules build on each other bottom-up:
//!
//! * [`exact`]: rationals, the cyclotomic field `Q(zeta_d)`, multiprecision
//!   complex numbers and Gamma at positive rationals.
//! * [`weights`]: weight systems, narrow sectors, Hodge gradings, `tau(t)` and
//!   the principal eigenvalue `T`.
//! * [`classes`]: Chern characters of `C(l)^st`, Gamma classes, asymptotic
//!   classes and the three pairings.
//! * [`gram`]: the polynomial `P(x) = prod(1 - x^w)`, partition counts, Gram
//!   matrix, its inverse and the Stokes coefficients.
//! * [`hyper`]: hypergeometric index data, the small I-function and its ODE,
//!   Barnes Q-functions and their exponential asymptotics.
//! * [`quantum`]: quantum multiplication matrices and spectrum verdicts.
//! * [`report`]: JSON/text reports and the command pipelines behind the CLI.

pub mod classes;
pub mod error;
pub mod exact;
pub mod gram;
pub mod hyper;
pub mod quantum;
pub mod report;
pub mod weights;

pub use error::{Error, Result};
pub use exact::{ApComplex, Cyclotomic, Rational};
pub use weights::{FamilySpec, WeightSystem};

//! Lifting genus-2 L-polynomials from their reduction mod p.
//!
//! Given y^2 = f(x) over F_p and L(T) mod p, [`lift()`] recovers the integer
//! coefficients a1, a2 of L(T) = p^2 T^4 + p a1 T^3 + a2 T^2 + a1 T + 1.
//! [`oracle`] computes the same polynomial by point counting for small p.

pub mod batch;
pub mod curve;
pub mod error;
pub mod exec;
pub mod field;
pub mod jacobian;
pub mod lift;
pub mod oracle;
pub mod poly;

pub use batch::{process_prime, run_range, Outcome, RangeConfig, RangeOutput, Record, Source};
pub use curve::{CurveFp, CurveQ, Provenance};
pub use error::{Error, LiftError, Result, Stage};
pub use exec::Exec;
pub use field::{Fp, Fp2, PrimeModulus};
pub use jacobian::{JacElement, Jacobian, Model};
pub use lift::{lift, lift_seeded, LPolynomial, LiftReport, ModPInput};
pub use oracle::{enumerate_group, exact_lpoly, OracleResult};
pub use poly::Poly;

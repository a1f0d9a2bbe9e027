//! Exact arithmetic: rationals, `Q(zeta_d)`, multiprecision complex values and
//! Gamma at rational arguments.

mod complex;
mod cyclotomic;
mod gamma;
mod poly;

pub use complex::{decimal_digits, float_to_decimal, ApComplex};
pub use cyclotomic::{cyc_arith, field, root_of_unity, CycOp, CycloField, Cyclotomic};
pub use gamma::{factorial, gamma_eval, gamma_rational, gamma_real, rising};
pub use poly::{cyclotomic_polynomial, euler_phi, gcd_u64, Poly};
pub use rug::{Float, Integer, Rational};

use rug::float::Constant;

/// `pi` at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `2 pi` at the given precision.
pub fn two_pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi) * 2u32
}

/// Shorthand for the rational `n / d`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Fractional part `{r} = r - floor(r)`.
pub fn frac(r: &Rational) -> Rational {
    r.clone() - r.clone().floor()
}

/// `floor(r)` as a machine integer.
pub fn floor_i64(r: &Rational) -> i64 {
    r.clone().floor().numer().to_i64().expect("floor out of range")
}

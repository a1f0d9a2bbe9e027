use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

/// Arbitrary-precision complex number.
///
/// Real and imaginary parts share one binary precision. Binary operations
/// produce a result at the smaller of the two operand precisions, so that a
/// value never claims more accuracy than its least accurate input.
#[derive(Clone, PartialEq)]
pub struct ApComplex(Complex);

impl ApComplex {
    pub const MIN_PRECISION: u32 = 32;

    fn clamp(prec: u32) -> u32 {
        prec.max(Self::MIN_PRECISION)
    }

    pub fn zero(prec: u32) -> Self {
        ApComplex(Complex::new(Self::clamp(prec)))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(Float::with_val(Self::clamp(prec), 1))
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let prec = Self::clamp(re.prec().min(im.prec()));
        ApComplex(Complex::with_val(prec, (re, im)))
    }

    pub fn from_real(re: Float) -> Self {
        let prec = Self::clamp(re.prec());
        ApComplex(Complex::with_val(prec, (re, 0)))
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        ApComplex(Complex::with_val(Self::clamp(prec), (r, 0)))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ApComplex(Complex::with_val(Self::clamp(prec), (re, im)))
    }

    pub fn from_complex(c: Complex) -> Self {
        let prec = Self::clamp(c.prec().0.min(c.prec().1));
        ApComplex(Complex::with_val(prec, c))
    }

    /// `exp(i * pi * x)` for rational `x`.
    pub fn exp_i_pi(x: &Rational, prec: u32) -> Self {
        let work = Self::clamp(prec) + 16;
        let angle = Float::with_val(work, Constant::Pi) * Float::with_val(work, x);
        let (s, c) = angle.sin_cos(Float::new(work));
        ApComplex::from_floats(c, s).with_precision(prec)
    }

    /// `exp(i * t)` for real `t`.
    pub fn cis(t: &Float) -> Self {
        let (s, c) = t.clone().sin_cos(Float::new(t.prec()));
        ApComplex::from_floats(c, s)
    }

    pub fn precision(&self) -> u32 {
        self.0.prec().0
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        ApComplex(Complex::with_val(Self::clamp(prec), &self.0))
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn as_complex(&self) -> &Complex {
        &self.0
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.precision(), self.0.abs_ref())
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.precision(), self.0.arg_ref())
    }

    pub fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }

    pub fn exp(&self) -> Self {
        ApComplex(self.0.clone().exp())
    }

    pub fn ln(&self) -> Self {
        ApComplex(self.0.clone().ln())
    }

    pub fn conj(&self) -> Self {
        ApComplex(self.0.clone().conj())
    }

    pub fn scale(&self, f: &Float) -> Self {
        let prec = self.precision().min(f.prec());
        ApComplex(Complex::with_val(prec, &self.0 * f))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        ApComplex(Complex::with_val(self.precision(), &self.0 * r))
    }

    pub fn powu(&self, n: u32) -> Self {
        ApComplex(Complex::with_val(self.precision(), (&self.0).pow(n)))
    }

    /// Distance `|self - other|` at the smaller precision.
    pub fn dist(&self, other: &Self) -> Float {
        (self - other).abs()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.0.real().to_f64(), self.0.imag().to_f64())
    }

    /// Decimal strings for both parts with `digits` significant digits.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (
            float_to_decimal(self.0.real(), digits),
            float_to_decimal(self.0.imag(), digits),
        )
    }
}

/// Digits that a value of `bits` binary precision carries.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

/// Decimal rendering with a fixed number of significant digits.
pub fn float_to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

fn min_prec(a: &ApComplex, b: &ApComplex) -> u32 {
    a.precision().min(b.precision())
}

impl Add for &ApComplex {
    type Output = ApComplex;
    fn add(self, rhs: Self) -> ApComplex {
        ApComplex(Complex::with_val(min_prec(self, rhs), &self.0 + &rhs.0))
    }
}

impl Sub for &ApComplex {
    type Output = ApComplex;
    fn sub(self, rhs: Self) -> ApComplex {
        ApComplex(Complex::with_val(min_prec(self, rhs), &self.0 - &rhs.0))
    }
}

impl Mul for &ApComplex {
    type Output = ApComplex;
    fn mul(self, rhs: Self) -> ApComplex {
        ApComplex(Complex::with_val(min_prec(self, rhs), &self.0 * &rhs.0))
    }
}

impl Div for &ApComplex {
    type Output = ApComplex;
    fn div(self, rhs: Self) -> ApComplex {
        ApComplex(Complex::with_val(min_prec(self, rhs), &self.0 / &rhs.0))
    }
}

impl Neg for &ApComplex {
    type Output = ApComplex;
    fn neg(self) -> ApComplex {
        ApComplex(Complex::with_val(self.precision(), -&self.0))
    }
}

impl fmt::Debug for ApComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ApComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal_pair(decimal_digits(self.precision()).min(20));
        write!(f, "({re}, {im})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_precision_propagates() {
        let a = ApComplex::from_f64(1.5, 2.0, 200);
        let b = ApComplex::from_f64(0.5, -1.0, 64);
        assert_eq!((&a + &b).precision(), 64);
        assert_eq!((&a * &b).precision(), 64);
        assert_eq!(ApComplex::zero(8).precision(), ApComplex::MIN_PRECISION);
    }

    #[test]
    fn exp_i_pi_quarter() {
        let z = ApComplex::exp_i_pi(&Rational::from((1, 2)), 128);
        assert!(z.re().clone().abs() < 1e-35);
        assert!(Float::with_val(128, z.im() - 1u32).abs() < 1e-35);
    }

    #[test]
    fn decimal_rendering() {
        let z = ApComplex::from_f64(0.125, -2.0, 64);
        let (re, im) = z.to_decimal_pair(6);
        assert_eq!(re.parse::<f64>().unwrap(), 0.125);
        assert_eq!(im.parse::<f64>().unwrap(), -2.0);
    }
}

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::complex::ApComplex;
use super::poly::{cyclotomic_polynomial, Poly};
use crate::error::{Error, Result};

/// Shared data for `Q(zeta_d)`: the modulus `Phi_d` and the reductions of
/// `x^k` for every exponent that products or root-of-unity sums produce.
#[derive(Debug)]
pub struct CycloField {
    order: u32,
    phi: Vec<Integer>,
    powers: Vec<Vec<Integer>>,
}

impl CycloField {
    fn new(order: u32) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let span = (order as usize).max(2 * deg);
        let mut powers: Vec<Vec<Integer>> = Vec::with_capacity(span);
        let mut cur = vec![Integer::new(); deg];
        if deg > 0 {
            cur[0] = Integer::from(1);
        }
        for _ in 0..span {
            powers.push(cur.clone());
            // multiply by x and reduce the overflow with x^deg = -(phi_0 + ... )
            let top = cur.pop().unwrap_or_default();
            cur.insert(0, Integer::new());
            if top != 0 {
                for (c, p) in cur.iter_mut().zip(&phi) {
                    *c -= Integer::from(&top * p);
                }
            }
        }
        CycloField { order, phi, powers }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(d)`, the dimension of the field over Q.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn modulus(&self) -> &[Integer] {
        &self.phi
    }
}

/// Interned field data, one per order.
pub fn field(order: u32) -> Arc<CycloField> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("field cache poisoned").get(&order) {
        return f.clone();
    }
    let f = Arc::new(CycloField::new(order));
    cache
        .lock()
        .expect("field cache poisoned")
        .entry(order)
        .or_insert(f)
        .clone()
}

/// Exact element of `Q(zeta_d) = Q[x]/(Phi_d)` in the power basis.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        let field = field(order);
        let coeffs = vec![Rational::new(); field.degree()];
        Cyclotomic { field, coeffs }
    }

    pub fn from_rational(order: u32, r: Rational) -> Self {
        let mut z = Cyclotomic::zero(order);
        z.coeffs[0] = r;
        z
    }

    pub fn one(order: u32) -> Self {
        Cyclotomic::from_rational(order, Rational::from(1))
    }

    /// `zeta_d^k`, periodic in `k` modulo `d`.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let field = field(order);
        let e = k.rem_euclid(order as i64) as usize;
        let coeffs = field.powers[e].iter().map(Rational::from).collect();
        Cyclotomic { field, coeffs }
    }

    /// `sum_k c[k] zeta_d^k` for integer coefficients on `Z[x]/(x^d - 1)`.
    ///
    /// This is the cheap route for root-of-unity sums whose terms are all
    /// integral: accumulate exponents modulo `d`, reduce modulo `Phi_d` once.
    pub fn from_cyclic_integers(order: u32, c: &[i128]) -> Self {
        let field = field(order);
        assert_eq!(c.len(), order as usize, "cyclic vector has wrong length");
        let mut acc = vec![Integer::new(); field.degree()];
        for (k, ck) in c.iter().enumerate() {
            if *ck == 0 {
                continue;
            }
            let ck = Integer::from(*ck);
            for (a, p) in acc.iter_mut().zip(&field.powers[k]) {
                *a += Integer::from(&ck * p);
            }
        }
        let coeffs = acc.into_iter().map(Rational::from).collect();
        Cyclotomic { field, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// The value as a rational, if every non-constant coefficient vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| *c == 0) {
            Some(self.coeffs.first().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    /// The value as an integer, if it is a rational integer.
    pub fn as_integer(&self) -> Option<Integer> {
        self.as_rational()
            .filter(|r| *r.denom() == 1)
            .map(|r| r.into_numer_denom().0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| Rational::from(a + b))
            .collect();
        Ok(Cyclotomic { field: self.field.clone(), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| Rational::from(a - b))
            .collect();
        Ok(Cyclotomic { field: self.field.clone(), coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let mut prod = vec![Rational::new(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if *b != 0 {
                    prod[i + j] += Rational::from(a * b);
                }
            }
        }
        Ok(self.reduce(prod))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Phi_d`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let modulus = Poly::from_integers(self.field.phi.iter().cloned());
        let a = Poly::new(self.coeffs.clone());
        // invariant: r_i = s_i * a (mod modulus)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while r1.degree().unwrap_or(0) > 0 {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        // r1 is a nonzero constant because Phi_d is irreducible
        let c = r1.coeff(0);
        let inv_c = Rational::from(c.recip_ref());
        let s = s1.scale(&inv_c);
        let mut coeffs = s.into_coeffs();
        coeffs.resize(self.coeffs.len(), Rational::new());
        Ok(self.reduce(coeffs))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| Rational::from(c * r)).collect();
        Cyclotomic { field: self.field.clone(), coeffs }
    }

    fn reduce(&self, c: Vec<Rational>) -> Self {
        let n = self.field.degree();
        let mut out = vec![Rational::new(); n];
        for (k, ck) in c.into_iter().enumerate() {
            if ck == 0 {
                continue;
            }
            if k < n {
                out[k] += ck;
            } else {
                for (o, p) in out.iter_mut().zip(&self.field.powers[k]) {
                    if *p != 0 {
                        *o += Rational::from(&ck * p);
                    }
                }
            }
        }
        Cyclotomic { field: self.field.clone(), coeffs: out }
    }

    /// Numeric value under `zeta_d -> exp(2 pi i / d)`.
    pub fn embed(&self, precision: u32) -> ApComplex {
        let prec = precision.max(ApComplex::MIN_PRECISION);
        let work = prec + 32;
        let two_pi = Float::with_val(work, Constant::Pi) * 2u32;
        let mut re = Float::new(work);
        let mut im = Float::new(work);
        let d = self.order();
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let angle = Float::with_val(work, &two_pi * k as u32) / d;
            let (s, co) = angle.sin_cos(Float::new(work));
            let cf = Float::with_val(work, c);
            re += Float::with_val(work, &cf * &co);
            im += cf * s;
        }
        ApComplex::from_floats(re, im).with_precision(prec)
    }
}

/// Field arithmetic dispatch used by callers that pick the operation at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn cyc_arith(a: &Cyclotomic, b: &Cyclotomic, op: CycOp) -> Result<Cyclotomic> {
    match op {
        CycOp::Add => a.checked_add(b),
        CycOp::Sub => a.checked_sub(b),
        CycOp::Mul => a.checked_mul(b),
        CycOp::Div => a.checked_div(b),
    }
}

pub fn root_of_unity(d: u32, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(d, k)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.order(), self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator forms panic on mismatched orders; library code that mixes orders
// from untrusted input goes through the checked methods.
impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Self) -> Cyclotomic {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Self) -> Cyclotomic {
        self.checked_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Self) -> Cyclotomic {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(&Rational::from(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(d: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(d, k)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(z(4, 2), Cyclotomic::from_rational(4, q(-1, 1)));
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_rational(3, q(-1, 1)));
        assert_eq!(&z(18, 7) * &z(18, 11), Cyclotomic::one(18));
        assert_eq!(z(7, 3), z(7, 10));
        assert_eq!(z(7, -4), z(7, 3));
        let mut s = Cyclotomic::zero(18);
        for k in 0..18 {
            s = &s + &z(18, k);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn inverse() {
        let a = &Cyclotomic::one(9) - &z(9, 2);
        assert_eq!(&a * &a.inv().unwrap(), Cyclotomic::one(9));
        // 1/(1 - w) = (2 + w)/3 for w a primitive cube root
        let b = &Cyclotomic::one(3) - &z(3, 1);
        let expected = (&Cyclotomic::from_rational(3, q(2, 1)) + &z(3, 1)).scale(&q(1, 3));
        assert_eq!(Cyclotomic::one(3).checked_div(&b).unwrap(), expected);
        assert_eq!(Cyclotomic::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn order_mismatch_is_rejected() {
        let r = cyc_arith(&z(3, 1), &z(4, 1), CycOp::Add);
        assert_eq!(r, Err(Error::OrderMismatch(3, 4)));
    }

    #[test]
    fn cyclic_sums_match_field_arithmetic() {
        let d = 12;
        let c: Vec<i128> = (0..d as i128).map(|k| (k * 7 % 5) - 2).collect();
        let mut direct = Cyclotomic::zero(d);
        for (k, ck) in c.iter().enumerate() {
            direct = &direct + &z(d, k as i64).scale(&Rational::from(*ck as i64));
        }
        assert_eq!(Cyclotomic::from_cyclic_integers(d, &c), direct);
    }

    #[test]
    fn embedding() {
        let prec = 128;
        let e = z(8, 1).embed(prec);
        let half_sqrt2 = Float::with_val(prec, 2).sqrt() / 2u32;
        assert!(Float::with_val(prec, e.re() - &half_sqrt2).abs() < Float::with_val(prec, 1e-35));
        assert!(Float::with_val(prec, e.im() - &half_sqrt2).abs() < Float::with_val(prec, 1e-35));
        let one = Cyclotomic::one(1).embed(prec);
        assert_eq!(*one.re(), 1);
    }
}

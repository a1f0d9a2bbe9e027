use std::fmt;

use rug::{Integer, Rational};

/// Dense univariate polynomial over Q, coefficients stored low degree first.
///
/// The zero polynomial has no coefficients; every other value has a nonzero
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Rational::new(); n + 1];
        coeffs[n] = Rational::from(1);
        Poly { coeffs }
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = Integer>>(it: I) -> Self {
        Poly::new(it.into_iter().map(Rational::from).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::new(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = Rational::from(&rem[k + dd] / &lead);
            if c != 0 {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= Rational::from(&c * b);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = Rational::from(l.recip_ref());
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * k as u64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Multiplicity of the root `0` and the cofactor `self / x^k`.
    pub fn split_zero_root(&self) -> (usize, Poly) {
        let k = self.coeffs.iter().take_while(|c| **c == 0).count();
        (k, Poly::new(self.coeffs[k..].to_vec()))
    }

    /// Square-free decomposition (Yun): returns `(f_i, i)` with
    /// `self = c * prod f_i^i`, each `f_i` monic, square-free and pairwise coprime.
    pub fn square_free_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = abs != 1 || k == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{k}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// The d-th cyclotomic polynomial, coefficients low degree first.
///
/// Computed by exact division of `x^d - 1` by every `Phi_e` with `e | d`,
/// `e < d`.
pub fn cyclotomic_polynomial(d: u32) -> Vec<Integer> {
    assert!(d >= 1, "cyclotomic order must be positive");
    let mut num = vec![Integer::new(); d as usize + 1];
    num[0] = Integer::from(-1);
    num[d as usize] = Integer::from(1);
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        num = div_exact_monic(&num, &cyclotomic_polynomial(e));
    }
    num
}

/// Exact quotient of integer polynomials where the divisor is monic.
fn div_exact_monic(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![Integer::new(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c != 0 {
            for (j, b) in den.iter().enumerate() {
                rem[k + j] -= Integer::from(&c * b);
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|r| *r == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(d: u32) -> u32 {
    (1..=d).filter(|k| gcd_u64(*k as u64, d as u64) == 1).count() as u32
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
    }

    #[test]
    fn product_of_cyclotomics_is_xd_minus_one() {
        for d in 1..=30u32 {
            let mut prod = Poly::one();
            for e in (1..=d).filter(|e| d % e == 0) {
                prod = prod.mul(&Poly::from_integers(cyclotomic_polynomial(e)));
            }
            let target = Poly::monomial(d as usize).sub(&Poly::one());
            assert_eq!(prod, target, "d = {d}");
            assert_eq!(
                cyclotomic_polynomial(d).len() as u32 - 1,
                euler_phi(d),
                "degree of Phi_{d}"
            );
        }
    }

    #[test]
    fn division_and_gcd() {
        // (x - 1/2)(x + 3)^2
        let a = Poly::new(vec![q(-1, 2), q(1, 1)]);
        let b = Poly::new(vec![q(3, 1), q(1, 1)]);
        let f = a.mul(&b).mul(&b);
        let (qt, r) = f.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(qt, a.mul(&b));
        assert_eq!(f.gcd(&f.derivative()), b);
    }

    #[test]
    fn yun_decomposition() {
        let x = Poly::monomial(1);
        let a = Poly::new(vec![q(-1, 5), q(0, 1), q(0, 1), q(0, 1), q(1, 1)]);
        let f = x.mul(&x).mul(&x).mul(&a);
        let (k, rest) = f.split_zero_root();
        assert_eq!(k, 3);
        assert_eq!(rest, a);
        let b = Poly::new(vec![q(2, 1), q(1, 1)]);
        let g = a.mul(&b).mul(&b);
        let dec = g.square_free_decomposition();
        assert_eq!(dec, vec![(a.clone(), 1), (b.clone(), 2)]);
    }

    #[test]
    fn display() {
        let p = Poly::new(vec![q(-1, 5), q(0, 1), q(1, 1)]);
        assert_eq!(p.to_string(), "x^2 - 1/5");
    }
}

use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::{Complete, Float, Integer, Rational};

use super::complex::ApComplex;
use crate::error::{Error, Result};

/// Rising factorial `a (a+1) ... (a+n-1)`, exact.
pub fn rising(a: &Rational, n: u64) -> Rational {
    let mut acc = Rational::from(1);
    let mut x = a.clone();
    for _ in 0..n {
        acc *= &x;
        x += 1u32;
    }
    acc
}

pub fn factorial(n: u64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// Even-index Bernoulli numbers `B_0, B_2, B_4, ...`, grown on demand.
fn bernoulli_even(count: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut cache = CACHE
        .get_or_init(|| Mutex::new(vec![Rational::from(1)]))
        .lock()
        .expect("bernoulli cache poisoned");
    while cache.len() < count {
        // sum_{k=0}^{n} C(n+1, k) B_k = 0 with n even, B_1 = -1/2, odd B_k = 0 beyond
        let n = 2 * cache.len() as u32;
        let mut s = Rational::from(Integer::from(n + 1)) * Rational::from((-1, 2));
        for (i, b) in cache.iter().enumerate() {
            let k = 2 * i as u32;
            s += Rational::from(Integer::binomial_u(n + 1, k).complete()) * b;
        }
        let b = -s / Rational::from(n + 1);
        cache.push(b);
    }
    cache[..count].to_vec()
}

/// `ln Gamma(y)` for real `y >= 8` by Stirling's series.
///
/// For real positive arguments the remainder after any number of terms is
/// bounded by the first omitted term, which is the stopping criterion.
fn ln_gamma_stirling(y: &Float, work: u32) -> Float {
    let eps = Float::with_val(work, Float::i_exp(1, -(work as i32)));
    let half = Float::with_val(work, 0.5);
    let ln_2pi = Float::with_val(work, Float::with_val(work, Constant::Pi) * 2u32).ln();
    let mut acc = Float::with_val(work, y - &half) * Float::with_val(work, y.ln_ref());
    acc -= y;
    acc += ln_2pi / 2u32;
    let y2 = Float::with_val(work, y * y);
    let mut ypow = y.clone();
    let mut need = 16usize;
    let mut k = 1usize;
    loop {
        if k >= need {
            need *= 2;
        }
        let b = &bernoulli_even(need)[k];
        let denom = Integer::from(2 * k as u64 * (2 * k as u64 - 1));
        let term = Float::with_val(work, b) / Float::with_val(work, &denom) / &ypow;
        acc += &term;
        if term.abs() < eps {
            break;
        }
        ypow *= &y2;
        k += 1;
        assert!(k < 100_000, "Stirling series failed to reach tolerance");
    }
    acc
}

/// `Gamma(r)` for rational `r > 0` with relative error below `2^(8 - prec)`.
///
/// The argument is shifted up by an exact rising factorial until Stirling's
/// series converges to the working precision.
pub fn gamma_real(r: &Rational, prec: u32) -> Result<Float> {
    if *r <= 0 {
        return Err(Error::NonPositiveArgument(r.to_string()));
    }
    let prec = prec.max(ApComplex::MIN_PRECISION);
    if *r.denom() == 1 && *r.numer() <= 171 {
        let n = r.numer().to_u32().expect("small integer");
        return Ok(Float::with_val(prec, factorial(n as u64 - 1)));
    }
    let work = prec + 48 + (32 - prec.leading_zeros());
    let y0 = ((work + 16) / 4).max(10) as u64;
    let floor = r.clone().floor().numer().to_u64().unwrap_or(u64::MAX);
    let shift = y0.saturating_sub(floor);
    let y = Float::with_val(work, Rational::from(r + shift));
    let lg = ln_gamma_stirling(&y, work);
    let shifted = lg.exp();
    let den = rising(r, shift);
    Ok(Float::with_val(prec, shifted / Float::with_val(work, &den)))
}

/// `Gamma(r)` as a complex value for rational `r > 0`.
pub fn gamma_eval(r: &Rational, prec: u32) -> Result<ApComplex> {
    Ok(ApComplex::from_real(gamma_real(r, prec)?))
}

/// `Gamma(r)` for any rational that is not a non-positive integer, via
/// `Gamma(r) Gamma(1 - r) = pi / sin(pi r)` for `r <= 0`.
pub fn gamma_rational(r: &Rational, prec: u32) -> Result<Float> {
    if *r > 0 {
        return gamma_real(r, prec);
    }
    if *r.denom() == 1 {
        return Err(Error::NonPositiveArgument(r.to_string()));
    }
    let work = prec.max(ApComplex::MIN_PRECISION) + 32;
    let pi = Float::with_val(work, Constant::Pi);
    let one_minus = Rational::from(1) - r;
    let g = gamma_real(&one_minus, work)?;
    // reduce r modulo 2 before the sine to keep the argument small
    let rr = r.clone() - (r.clone() / 2u32).floor() * 2u32;
    let s = Float::with_val(work, &pi * Float::with_val(work, &rr)).sin();
    Ok(Float::with_val(prec, pi / (s * g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn rel_err(a: &Float, b: &Float) -> f64 {
        let p = a.prec().max(b.prec());
        (Float::with_val(p, a - b) / b).abs().to_f64()
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_even(5);
        assert_eq!(b[1], q(1, 6));
        assert_eq!(b[2], q(-1, 30));
        assert_eq!(b[3], q(1, 42));
        assert_eq!(b[4], q(-1, 30));
    }

    #[test]
    fn factorials_and_half() {
        assert_eq!(gamma_real(&q(1, 1), 128).unwrap(), 1);
        assert_eq!(gamma_real(&q(5, 1), 128).unwrap(), 24);
        let prec = 256;
        let g = gamma_real(&q(1, 2), prec).unwrap();
        let pi = Float::with_val(prec, Constant::Pi);
        assert!(rel_err(&Float::with_val(prec, &g * &g), &pi) < 2f64.powi(-(prec as i32) + 10));
    }

    #[test]
    fn agrees_with_mpfr() {
        for prec in [64u32, 128, 333, 700] {
            for r in [q(1, 3), q(7, 12), q(41, 9), q(1, 60), q(97, 2), q(3, 1000)] {
                let ours = gamma_real(&r, prec).unwrap();
                let oracle = Float::with_val(prec + 64, Float::with_val(prec + 64, &r).gamma());
                assert!(
                    rel_err(&ours, &oracle) <= 2f64.powi(-(prec as i32) + 8),
                    "Gamma({r}) at {prec} bits"
                );
            }
        }
    }

    #[test]
    fn reflection_for_negative_arguments() {
        let prec = 128;
        for r in [q(-1, 3), q(-7, 4), q(-13, 12)] {
            let ours = gamma_rational(&r, prec).unwrap();
            let oracle = Float::with_val(prec + 64, &r).gamma();
            assert!(rel_err(&ours, &oracle) < 2f64.powi(-(prec as i32) + 10), "Gamma({r})");
        }
        assert!(gamma_rational(&q(-2, 1), 64).is_err());
        assert!(gamma_real(&q(0, 1), 64).is_err());
    }

    #[test]
    fn rising_factorial() {
        assert_eq!(rising(&q(1, 3), 3), q(1, 3) * q(4, 3) * q(7, 3));
        assert_eq!(rising(&q(5, 2), 0), q(1, 1));
    }
}

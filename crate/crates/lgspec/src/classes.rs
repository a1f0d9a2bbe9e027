//! Narrow state-space vectors, Chern characters of `C(l)^st`, the Gamma map,
//! the asymptotic classes `A_l` and the narrow, PV and non-symmetric pairings.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::{gamma_real, two_pi, ApComplex, Cyclotomic};
use crate::weights::{sector_data, WeightSystem};

/// Guard bits carried by every numeric class computation.
pub const GUARD_BITS: u32 = 64;

/// Narrow vector with exact coefficients in `Q(zeta_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NarrowVectorExact {
    ws: WeightSystem,
    coeffs: BTreeMap<u32, Cyclotomic>,
}

/// Narrow vector with multiprecision complex coefficients.
#[derive(Clone, Debug)]
pub struct NarrowVectorNumeric {
    ws: WeightSystem,
    coeffs: BTreeMap<u32, ApComplex>,
    precision: u32,
}

/// A narrow vector of either flavor.
#[derive(Clone, Debug)]
pub enum NarrowVector {
    Exact(NarrowVectorExact),
    Numeric(NarrowVectorNumeric),
}

/// Result of a pairing in the flavor of its inputs.
#[derive(Clone, Debug)]
pub enum PairingValue {
    Exact(Cyclotomic),
    Numeric(ApComplex),
}

fn check_narrow(ws: &WeightSystem, keys: impl Iterator<Item = u32>) -> Result<()> {
    for m in keys {
        if !ws.is_narrow(m) {
            return Err(Error::UnsupportedBroad(m));
        }
    }
    Ok(())
}

impl NarrowVectorExact {
    /// Keys must be narrow indices; coefficients must live in `Q(zeta_d)`.
    pub fn new(ws: &WeightSystem, coeffs: BTreeMap<u32, Cyclotomic>) -> Result<Self> {
        check_narrow(ws, coeffs.keys().copied())?;
        if let Some(c) = coeffs.values().find(|c| c.order() != ws.d()) {
            return Err(Error::OrderMismatch(c.order(), ws.d()));
        }
        Ok(NarrowVectorExact { ws: ws.clone(), coeffs })
    }

    /// The standard generator `e_m`.
    pub fn basis(ws: &WeightSystem, m: u32) -> Result<Self> {
        Self::new(ws, BTreeMap::from([(m, Cyclotomic::one(ws.d()))]))
    }

    pub fn ws(&self) -> &WeightSystem {
        &self.ws
    }

    /// Coefficient of `e_m`; zero when absent.
    pub fn get(&self, m: u32) -> Cyclotomic {
        self.coeffs.get(&m).cloned().unwrap_or_else(|| Cyclotomic::zero(self.ws.d()))
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Cyclotomic> {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ws != other.ws {
            return Err(Error::FlavorMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        for (m, c) in &other.coeffs {
            let cur = self.get(*m);
            coeffs.insert(*m, &cur + c);
        }
        Ok(NarrowVectorExact { ws: self.ws.clone(), coeffs })
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let coeffs = self.coeffs.iter().map(|(m, v)| (*m, v * c)).collect();
        NarrowVectorExact { ws: self.ws.clone(), coeffs }
    }

    pub fn embed(&self, precision: u32) -> NarrowVectorNumeric {
        let coeffs = self.coeffs.iter().map(|(m, c)| (*m, c.embed(precision))).collect();
        NarrowVectorNumeric { ws: self.ws.clone(), coeffs, precision }
    }
}

impl NarrowVectorNumeric {
    pub fn new(ws: &WeightSystem, coeffs: BTreeMap<u32, ApComplex>, precision: u32) -> Result<Self> {
        check_narrow(ws, coeffs.keys().copied())?;
        let coeffs = coeffs.into_iter().map(|(m, c)| (m, c.with_precision(precision))).collect();
        Ok(NarrowVectorNumeric { ws: ws.clone(), coeffs, precision })
    }

    pub fn ws(&self) -> &WeightSystem {
        &self.ws
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn get(&self, m: u32) -> ApComplex {
        self.coeffs.get(&m).cloned().unwrap_or_else(|| ApComplex::zero(self.precision))
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, ApComplex> {
        &self.coeffs
    }

    /// `max_m |u_m - v_m|`.
    pub fn dist_inf(&self, other: &Self) -> Result<Float> {
        if self.ws != other.ws {
            return Err(Error::FlavorMismatch);
        }
        let prec = self.precision.min(other.precision);
        let mut worst = Float::new(prec);
        for &m in self.ws.nar() {
            let e = self.get(m).dist(&other.get(m));
            if e > worst {
                worst = e;
            }
        }
        Ok(worst)
    }
}

/// Cyclic vector of `zeta^(-l m) prod_j (1 - zeta^(w_j m))` in `Z[x]/(x^d - 1)`.
fn chern_cyclic(ws: &WeightSystem, ell: i64, m: u32) -> Vec<i128> {
    let d = ws.d() as usize;
    let mut p = vec![0i128; d];
    p[(-(ell * m as i64)).rem_euclid(d as i64) as usize] = 1;
    for &w in ws.weights() {
        let s = (w as usize * m as usize) % d;
        let mut next = p.clone();
        for k in 0..d {
            next[(k + s) % d] -= p[k];
        }
        p = next;
    }
    p
}

/// `ch(C(l)^st) = sum_m zeta^(-l m) prod_j (1 - zeta^(w_j m)) e_m`.
pub fn chern_stab(ws: &WeightSystem, ell: i64) -> NarrowVectorExact {
    let coeffs = ws
        .nar()
        .iter()
        .map(|&m| (m, Cyclotomic::from_cyclic_integers(ws.d(), &chern_cyclic(ws, ell, m))))
        .collect();
    NarrowVectorExact { ws: ws.clone(), coeffs }
}

/// Gamma factor `exp(-i pi mu(J^m)) prod_j Gamma(1 - theta_j)` of sector `m`.
pub fn gamma_factor(ws: &WeightSystem, m: u32, precision: u32) -> Result<ApComplex> {
    let s = sector_data(ws, m)?;
    let work = precision + GUARD_BITS;
    let mut g = Float::with_val(work, 1);
    for t in &s.thetas {
        g *= gamma_real(&(Rational::from(1) - t), work)?;
    }
    let phase = ApComplex::exp_i_pi(&Rational::from(-&s.mu), work);
    Ok(phase.scale(&g))
}

/// Apply the Gamma map sector by sector.
pub fn gamma_map(v: &NarrowVectorExact, precision: u32) -> Result<NarrowVectorNumeric> {
    let work = precision + GUARD_BITS;
    let mut coeffs = BTreeMap::new();
    for (m, c) in &v.coeffs {
        let g = gamma_factor(&v.ws, *m, precision)?;
        coeffs.insert(*m, (&c.embed(work) * &g).with_precision(precision));
    }
    Ok(NarrowVectorNumeric { ws: v.ws.clone(), coeffs, precision })
}

/// The Gamma class of `C(l)^st`.
pub fn gamma_class(ws: &WeightSystem, ell: i64, precision: u32) -> Result<NarrowVectorNumeric> {
    gamma_map(&chern_stab(ws, ell), precision)
}

/// `A_l = sum_m zeta^(-l m) prod_j 2 pi / Gamma({w_j m / d}) e_m`.
pub fn asymptotic_class(ws: &WeightSystem, ell: i64, precision: u32) -> Result<NarrowVectorNumeric> {
    let work = precision + GUARD_BITS;
    let tp = two_pi(work);
    let mut coeffs = BTreeMap::new();
    for &m in ws.nar() {
        let mut g = Float::with_val(work, 1);
        for t in ws.thetas(m) {
            g *= Float::with_val(work, &tp / gamma_real(&t, work)?);
        }
        let root = Cyclotomic::root_of_unity(ws.d(), -ell * m as i64).embed(work);
        coeffs.insert(m, root.scale(&g).with_precision(precision));
    }
    Ok(NarrowVectorNumeric { ws: ws.clone(), coeffs, precision })
}

/// `<u, v> = sum_m u_m v_(d-m)`, exact flavor.
pub fn narrow_pairing_exact(u: &NarrowVectorExact, v: &NarrowVectorExact) -> Result<Cyclotomic> {
    if u.ws != v.ws {
        return Err(Error::FlavorMismatch);
    }
    let d = u.ws.d();
    let mut acc = Cyclotomic::zero(d);
    for (m, c) in &u.coeffs {
        if let Some(o) = v.coeffs.get(&(d - m)) {
            acc = &acc + &(c * o);
        }
    }
    Ok(acc)
}

/// `<u, v> = sum_m u_m v_(d-m)`, numeric flavor.
pub fn narrow_pairing_numeric(u: &NarrowVectorNumeric, v: &NarrowVectorNumeric) -> Result<ApComplex> {
    if u.ws != v.ws {
        return Err(Error::FlavorMismatch);
    }
    let d = u.ws.d();
    let mut acc = ApComplex::zero(u.precision.min(v.precision));
    for (m, c) in &u.coeffs {
        if let Some(o) = v.coeffs.get(&(d - m)) {
            acc = &acc + &(c * o);
        }
    }
    Ok(acc)
}

/// The narrow pairing on either flavor; mixing flavors is an error.
pub fn narrow_pairing(u: &NarrowVector, v: &NarrowVector) -> Result<PairingValue> {
    match (u, v) {
        (NarrowVector::Exact(a), NarrowVector::Exact(b)) => narrow_pairing_exact(a, b).map(PairingValue::Exact),
        (NarrowVector::Numeric(a), NarrowVector::Numeric(b)) => {
            narrow_pairing_numeric(a, b).map(PairingValue::Numeric)
        }
        _ => Err(Error::FlavorMismatch),
    }
}

/// PV canonical pairing with the per-sector weights `1 / det(1 - J^m)`
/// precomputed, for repeated evaluation on one weight system.
#[derive(Clone, Debug)]
pub struct PvForm {
    ws: WeightSystem,
    inv_det: BTreeMap<u32, Cyclotomic>,
}

impl PvForm {
    pub fn new(ws: &WeightSystem) -> Result<Self> {
        let d = ws.d() as usize;
        let mut inv_det = BTreeMap::new();
        for &m in ws.nar() {
            let mut p = vec![0i128; d];
            p[0] = 1;
            for &w in ws.weights() {
                let s = (w as usize * m as usize) % d;
                let mut next = p.clone();
                for k in 0..d {
                    next[(k + s) % d] -= p[k];
                }
                p = next;
            }
            inv_det.insert(m, Cyclotomic::from_cyclic_integers(ws.d(), &p).inv()?);
        }
        Ok(PvForm { ws: ws.clone(), inv_det })
    }

    /// `(1/d) sum_m u_(d-m) v_m / prod_j (1 - zeta^(w_j m))`.
    pub fn pair(&self, u: &NarrowVectorExact, v: &NarrowVectorExact) -> Result<Cyclotomic> {
        if u.ws != self.ws || v.ws != self.ws {
            return Err(Error::FlavorMismatch);
        }
        let d = self.ws.d();
        let mut acc = Cyclotomic::zero(d);
        for (m, vm) in &v.coeffs {
            if let Some(ud) = u.coeffs.get(&(d - m)) {
                acc = &acc + &(&(ud * vm) * &self.inv_det[m]);
            }
        }
        Ok(acc.scale(&Rational::from((1, d))))
    }
}

pub fn pv_pairing(u: &NarrowVectorExact, v: &NarrowVectorExact) -> Result<Cyclotomic> {
    PvForm::new(&u.ws)?.pair(u, v)
}

/// `[u, v) = (1/d) sum_m exp(-i pi mu(J^m)) / (2 pi)^N u_(d-m) v_m`.
pub fn nonsym_pairing(u: &NarrowVectorNumeric, v: &NarrowVectorNumeric) -> Result<ApComplex> {
    if u.ws != v.ws {
        return Err(Error::FlavorMismatch);
    }
    let ws = &u.ws;
    let prec = u.precision.min(v.precision);
    let work = prec + GUARD_BITS;
    let d = ws.d();
    let norm = Float::with_val(work, two_pi(work).pow(ws.n_vars() as u32) * d);
    let mut acc = ApComplex::zero(work);
    for (m, vm) in &v.coeffs {
        if let Some(ud) = u.coeffs.get(&(d - m)) {
            let mu = sector_data(ws, *m)?.mu;
            let phase = ApComplex::exp_i_pi(&Rational::from(-&mu), work);
            acc = &acc + &(&phase * &(ud * vm));
        }
    }
    let inv = Float::with_val(work, norm.recip_ref());
    Ok(acc.scale(&inv).with_precision(prec))
}

/// Named pass/fail results for the Gamma-structure identities of one system.
pub fn classes_checks(ws: &WeightSystem, precision: u32) -> Result<Vec<(String, bool, String)>> {
    let d = ws.d() as i64;
    let mut out = Vec::new();
    let tol_gamma = Float::with_val(precision, Float::i_exp(1, 24 - precision as i32));
    let mut worst = Float::new(precision);
    let mut gammas = Vec::new();
    for ell in 0..d {
        let g = gamma_class(ws, ell, precision + 32)?;
        let a = asymptotic_class(ws, ell, precision + 32)?;
        let e = g.dist_inf(&a)?;
        if e > worst {
            worst = e;
        }
        gammas.push(g);
    }
    out.push((
        "classes.gamma_equals_asymptotic".into(),
        worst <= tol_gamma,
        format!("max error {:.3e}", worst.to_f64()),
    ));

    let pv = PvForm::new(ws)?;
    let chs: Vec<NarrowVectorExact> = (0..d).map(|l| chern_stab(ws, l)).collect();
    let tol_hrr = Float::with_val(precision, Float::i_exp(1, 32 - precision as i32));
    let mut integral = true;
    let mut worst = Float::new(precision);
    for i in 0..d as usize {
        for j in 0..d as usize {
            let exact = pv.pair(&chs[i], &chs[j])?;
            integral &= exact.as_integer().is_some();
            let numeric = nonsym_pairing(&gammas[i], &gammas[j])?;
            let e = numeric.dist(&exact.embed(precision + 32));
            if e > worst {
                worst = e;
            }
        }
    }
    out.push(("classes.pv_integrality".into(), integral, String::new()));
    out.push((
        "classes.hrr_compatibility".into(),
        worst <= tol_hrr,
        format!("max error {:.3e}", worst.to_f64()),
    ));
    let periodic = (0..d).all(|l| chern_stab(ws, l) == chern_stab(ws, l + d) && chern_stab(ws, -l) == chern_stab(ws, d - l));
    out.push(("classes.periodicity".into(), periodic, String::new()));

    if ws.nu() > 0 {
        let m = crate::gram::gram_matrix(ws)?;
        let nu = m.len();
        let mut agree = true;
        for i in 0..nu {
            for j in 0..nu {
                let v = pv.pair(&chs[(d as usize - i) % d as usize], &chs[(d as usize - j) % d as usize])?;
                agree &= v.as_integer().is_some_and(|x| x == m[i][j]);
            }
        }
        out.push(("classes.pv_equals_gram".into(), agree, "(ch C(-i), ch C(-j)) = M[i][j]".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{pi, q};

    fn ws(s: &str) -> WeightSystem {
        s.parse().unwrap()
    }

    fn close(a: &ApComplex, b: &ApComplex, bits: i32) -> bool {
        a.dist(b) < Float::with_val(a.precision(), Float::i_exp(1, -bits))
    }

    #[test]
    fn chern_characters() {
        let w = ws("3;1");
        let ch = chern_stab(&w, 0);
        let one = Cyclotomic::one(3);
        assert_eq!(ch.get(1), &one - &Cyclotomic::root_of_unity(3, 1));
        assert_eq!(ch.get(2), &one - &Cyclotomic::root_of_unity(3, 2));
        let e7 = ws("9;2,3");
        let c = chern_stab(&e7, 0).get(1);
        let one = Cyclotomic::one(9);
        let expect = &(&one - &Cyclotomic::root_of_unity(9, 2)) * &(&one - &Cyclotomic::root_of_unity(9, 3));
        assert_eq!(c, expect);
        assert_eq!(chern_stab(&e7, 4), chern_stab(&e7, 13));
    }

    #[test]
    fn gamma_class_values() {
        let prec = 128;
        let w = ws("3;1");
        let g = gamma_class(&w, 0, prec).unwrap().get(1);
        let expect = Float::with_val(prec, two_pi(prec) / gamma_real(&q(1, 3), prec).unwrap());
        assert!(close(&g, &ApComplex::from_real(expect), 110));
        assert!((g.re().to_f64() - 2.3448).abs() < 1e-3);

        let e7 = ws("9;2,3");
        let g = gamma_class(&e7, 0, prec).unwrap();
        for &m in e7.nar() {
            let mut modulus = Float::with_val(prec, 1);
            for t in e7.thetas(m) {
                modulus *= Float::with_val(prec, two_pi(prec) / gamma_real(&t, prec).unwrap());
            }
            let e = Float::with_val(prec, g.get(m).abs() - &modulus).abs();
            assert!(e < Float::with_val(prec, Float::i_exp(1, -100)));
        }
    }

    #[test]
    fn asymptotic_e6_component() {
        let prec = 128;
        let w = ws("12;4,3");
        let a = asymptotic_class(&w, 1, prec).unwrap().get(5);
        let tp = two_pi(prec);
        let g = Float::with_val(prec, gamma_real(&q(2, 3), prec).unwrap() * gamma_real(&q(1, 4), prec).unwrap());
        let modulus = Float::with_val(prec, Float::with_val(prec, &tp * &tp) / g);
        let expect = Cyclotomic::root_of_unity(12, -5).embed(prec).scale(&modulus);
        assert!(close(&a, &expect, 110));
    }

    #[test]
    fn pairings() {
        let e7 = ws("9;2,3");
        let e2 = NarrowVectorExact::basis(&e7, 2).unwrap();
        let e7v = NarrowVectorExact::basis(&e7, 7).unwrap();
        assert_eq!(narrow_pairing_exact(&e2, &e7v).unwrap(), Cyclotomic::one(9));
        assert!(narrow_pairing_exact(&e2, &e2).unwrap().is_zero());
        assert_eq!(NarrowVectorExact::basis(&e7, 3), Err(Error::UnsupportedBroad(3)));

        let a3 = ws("3;1");
        let ch = chern_stab(&a3, 0);
        assert_eq!(pv_pairing(&ch, &ch).unwrap(), Cyclotomic::one(3));
        let v = pv_pairing(&chern_stab(&e7, 1), &chern_stab(&e7, 0)).unwrap();
        assert!(v.is_zero());
        let zero = NarrowVectorExact::new(&e7, BTreeMap::new()).unwrap();
        assert!(pv_pairing(&zero, &ch_e(&e7)).unwrap().is_zero());

        let mixed = narrow_pairing(
            &NarrowVector::Exact(e2.clone()),
            &NarrowVector::Numeric(e2.embed(64)),
        );
        assert!(matches!(mixed, Err(Error::FlavorMismatch)));
    }

    fn ch_e(w: &WeightSystem) -> NarrowVectorExact {
        chern_stab(w, 0)
    }

    #[test]
    fn hrr_small_cases() {
        let prec = 128;
        for (s, ell) in [("5;1", 0i64), ("9;2,3", -1), ("7;1,1,1", 2)] {
            let w = ws(s);
            let a = gamma_class(&w, 0, prec).unwrap();
            let b = gamma_class(&w, ell, prec).unwrap();
            let lhs = nonsym_pairing(&a, &b).unwrap();
            let rhs = pv_pairing(&chern_stab(&w, 0), &chern_stab(&w, ell)).unwrap().embed(prec);
            assert!(close(&lhs, &rhs, 96), "{s}: {lhs} vs {rhs}");
        }
        let w = ws("5;1");
        let g = gamma_class(&w, 0, prec).unwrap();
        let one = ApComplex::one(prec);
        assert!(close(&nonsym_pairing(&g, &g).unwrap(), &one, 96));
        let _ = pi(64);
    }

    #[test]
    fn all_class_checks() {
        for s in ["5;1", "9;2,3", "12;4,3", "8;1,4", "7;1,1,1"] {
            for (name, ok, detail) in classes_checks(&ws(s), 128).unwrap() {
                assert!(ok, "{s}: {name} {detail}");
            }
        }
    }
}

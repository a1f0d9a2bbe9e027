//! Hypergeometric side: the index data `(alpha_P, rho_Q)`, the small
//! I-function and its differential equations, generalized hypergeometric
//! series, Barnes Q-functions, the constants `Upsilon(m)` and the exponential
//! asymptotics of the Barnes combinations.

use std::collections::{BTreeMap, HashMap};

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{factorial, gamma_rational, gamma_real, q, rising, two_pi, ApComplex, Cyclotomic};
use crate::weights::{t_base, tau_coefficients, WeightSystem};

/// Guard bits added on top of every requested precision.
pub const GUARD_BITS: u32 = 64;

/// Bound on series length before giving up.
const MAX_TERMS: usize = 200_000;

/// Bound on escalated working precision.
const MAX_WORK_BITS: u32 = 1 << 16;

/// Index data of the generalized hypergeometric equation of a weight system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeomSystem {
    ws: WeightSystem,
    nmap: BTreeMap<u32, usize>,
    rho: Vec<Rational>,
    alpha: Vec<Rational>,
    p: usize,
    q: usize,
}

impl HypergeomSystem {
    pub fn ws(&self) -> &WeightSystem {
        &self.ws
    }

    /// `rho_0 = 1, rho_1, ..., rho_q`, strictly decreasing.
    pub fn rho(&self) -> &[Rational] {
        &self.rho
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// The reindexing `N(m)`.
    pub fn index_of(&self, m: u32) -> Result<usize> {
        self.nmap.get(&m).copied().ok_or(Error::NotNarrow(m))
    }

    pub fn nmap(&self) -> &BTreeMap<u32, usize> {
        &self.nmap
    }
}

/// `rho_N(m) = 1/d + 1 - m/d`; `alpha` is `{1/d + k/w_j}` with `(n+1)/d`
/// removed once for every non-narrow `n` in `0..d`.
pub fn build_hg_system(ws: &WeightSystem) -> Result<HypergeomSystem> {
    let nu = ws.require_general_type()? as usize;
    let d = ws.d() as i64;
    let nar = ws.nar();
    if nar.len() < nu {
        return Err(Error::CheckFailed(format!("|Nar| = {} < nu = {nu}", nar.len())));
    }
    let nmap: BTreeMap<u32, usize> = nar.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let rho: Vec<Rational> = nar.iter().map(|&m| q(1 + d - m as i64, d)).collect();
    let mut alpha: Vec<Rational> = Vec::new();
    for &w in ws.weights() {
        for k in 0..w as i64 {
            alpha.push(q(1, d) + q(k, w as i64));
        }
    }
    for n in (0..d as u32).filter(|n| !ws.is_narrow(*n)) {
        let target = q(n as i64 + 1, d);
        let pos = alpha
            .iter()
            .position(|a| *a == target)
            .ok_or_else(|| Error::CheckFailed(format!("{target} missing from alpha-tilde")))?;
        alpha.remove(pos);
    }
    alpha.sort();
    let hs = HypergeomSystem { ws: ws.clone(), nmap, p: alpha.len(), q: rho.len() - 1, rho, alpha };
    check_structure(&hs)?;
    Ok(hs)
}

fn is_integer(r: &Rational) -> bool {
    *r.denom() == 1
}

fn check_structure(hs: &HypergeomSystem) -> Result<()> {
    let fail = |m: &str| Err(Error::CheckFailed(m.to_string()));
    let nu = hs.ws.nu() as usize;
    if hs.q + 1 != hs.ws.nar().len() || hs.q + 1 - hs.p != nu {
        return fail("q + 1 - p != nu");
    }
    if hs.rho[0] != 1 || hs.rho.windows(2).any(|w| w[0] <= w[1]) {
        return fail("rho is not strictly decreasing from 1");
    }
    for (i, a) in hs.rho.iter().enumerate() {
        for b in &hs.rho[i + 1..] {
            if is_integer(&Rational::from(a - b)) {
                return fail("two rho differ by an integer");
            }
        }
    }
    if hs.alpha.iter().any(|a| hs.rho.contains(a)) {
        return fail("alpha meets rho");
    }
    let lhs: Rational = hs.alpha.iter().sum::<Rational>() - hs.rho[1..].iter().sum::<Rational>();
    if lhs != sum_identity_rhs(&hs.ws, &Rational::from(1)) {
        return fail("sum(alpha) - sum(rho) identity");
    }
    Ok(())
}

/// `-nu (1/2 + m/d) + (3 - N)/2`.
fn sum_identity_rhs(ws: &WeightSystem, m: &Rational) -> Rational {
    let nu = Rational::from(ws.nu());
    let n = ws.n_vars() as i64;
    -nu * (q(1, 2) + Rational::from(m / ws.d())) + q(3 - n, 2)
}

/// `(alpha^(m), rho^(m))`: shift by `1 - rho_N(m)` and drop the unit entry.
pub fn shifted_tuples(hs: &HypergeomSystem, m: u32) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let r = hs.index_of(m)?;
    let shift = Rational::from(1) - &hs.rho[r];
    let alpha: Vec<Rational> = hs.alpha.iter().map(|a| Rational::from(a + &shift)).collect();
    let rho: Vec<Rational> = hs
        .rho
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, x)| Rational::from(x + &shift))
        .collect();
    let lhs: Rational = alpha.iter().sum::<Rational>() - rho.iter().sum::<Rational>();
    if lhs != sum_identity_rhs(&hs.ws, &Rational::from(m)) {
        return Err(Error::CheckFailed(format!("shifted sum identity fails at m = {m}")));
    }
    Ok((alpha, rho))
}

/// `theta = [(1 - nu)/2 + sum_j (1 - rho_j) - sum_i (1 - alpha_i)] / nu`,
/// checked against `(2 - N)/(2 nu) - 1/d`.
pub fn theta_exponent(hs: &HypergeomSystem) -> Result<Rational> {
    let nu = hs.ws.nu();
    let one = Rational::from(1);
    let mut s = q(1 - nu, 2);
    for r in &hs.rho {
        s += Rational::from(&one - r);
    }
    for a in &hs.alpha {
        s -= Rational::from(&one - a);
    }
    let theta = s / Rational::from(nu);
    let closed = q(2 - hs.ws.n_vars() as i64, 2 * nu) - q(1, hs.ws.d() as i64);
    if theta != closed {
        return Err(Error::CheckFailed(format!("theta {theta} != {closed}")));
    }
    Ok(theta)
}

/// One term `coeff * t^t_power * z^z_power * e_m` of the small I-function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTerm {
    pub m: u32,
    pub ell: u32,
    pub coeff: Rational,
    /// `D = d l + m`.
    pub t_power: u64,
    /// `1 - (D - 1) + sum_j floor(w_j D / d)`.
    pub z_power: i64,
    /// Exponent of `z` after passing to the modified I-function: `-nu (D - 1)/d`.
    pub modified_z_exp: Rational,
}

/// All terms with `d l + m <= t_order`.
pub fn i_series(ws: &WeightSystem, t_order: u64) -> Vec<SeriesTerm> {
    let d = ws.d() as u64;
    let mut out = Vec::new();
    for &m in ws.nar() {
        let thetas = ws.thetas(m);
        let mut ell = 0u64;
        while d * ell + m as u64 <= t_order {
            let big = d * ell + m as u64;
            let mut coeff = Rational::from((Integer::from(1), factorial(big - 1)));
            for (t, &w) in thetas.iter().zip(ws.weights()) {
                coeff *= rising(t, w as u64 * big / d);
            }
            out.push(SeriesTerm {
                m,
                ell: ell as u32,
                coeff,
                t_power: big,
                z_power: 1 - (big as i64 - 1) + ws.floor_sum(big),
                modified_z_exp: q(-ws.nu() * (big as i64 - 1), d as i64),
            });
            ell += 1;
        }
    }
    out
}

/// The `z^0` layer of the I-function divided by `t`, keyed by sector, with
/// the t-exponent of each coefficient.
pub fn z0_layer(ws: &WeightSystem, t_order: u64) -> BTreeMap<u32, (Rational, u64)> {
    i_series(ws, t_order)
        .into_iter()
        .filter(|s| s.z_power == 0)
        .map(|s| (s.m, (s.coeff, s.t_power - 1)))
        .collect()
}

/// Outcome of [`verify_i_ode`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeReport {
    pub t_order: u64,
    pub reduced_monomials: usize,
    pub unreduced_monomials: usize,
}

type Monomials = HashMap<(u64, i64), Rational>;

fn add_mono(map: &mut Monomials, key: (u64, i64), c: Rational) {
    *map.entry(key).or_default() += c;
}

fn cancel(l1: Monomials, l2: Monomials, d: u64, t_order: u64) -> Result<usize> {
    let mut all = l1;
    for (k, v) in l2 {
        *all.entry(k).or_default() -= v;
    }
    let mut keys: Vec<_> = all.keys().copied().filter(|(t, _)| *t <= t_order).collect();
    keys.sort();
    for k in &keys {
        if all[k] != 0 {
            let (t, _) = *k;
            return Err(Error::CancellationFailure { m: (t % d) as u32, l: (t / d) as u32 });
        }
    }
    Ok(keys.len())
}

/// Apply the reduced operator
/// `t^d z^p prod(w^w/d^w) prod_i (theta + alpha_i d - 1) - z^(q+1) prod_j (theta + (rho_j - 1) d - 1)`
/// and the unreduced operator
/// `t^d prod_j prod_c z (w_j theta / d + c) / (z theta) - prod_{c=1}^{d-1} z (theta - c)`
/// term by term and require exact cancellation of every monomial of t-degree
/// at most `t_order`.
pub fn verify_i_ode(ws: &WeightSystem, t_order: u64) -> Result<OdeReport> {
    let hs = build_hg_system(ws)?;
    let d = ws.d() as u64;
    if t_order < 2 * d {
        return Err(Error::InvalidParameter(format!("t_order must be at least 2d = {}", 2 * d)));
    }
    let terms = i_series(ws, t_order);
    let k = {
        let mut k = Rational::from(1);
        for &w in ws.weights() {
            k *= Rational::from((Integer::from(Integer::u_pow_u(w, w)), Integer::from(Integer::u_pow_u(ws.d(), w))));
        }
        k
    };
    let (p, qq) = (hs.p as i64, hs.q as i64);
    let sw: i64 = ws.weights().iter().map(|&w| w as i64).sum();

    let (mut r1, mut r2, mut u1, mut u2) = (Monomials::new(), Monomials::new(), Monomials::new(), Monomials::new());
    for s in &terms {
        let big = Rational::from(s.t_power);
        if s.t_power + d <= t_order {
            let mut c = Rational::from(&k * &s.coeff);
            for a in &hs.alpha {
                c *= (&big + Rational::from(a * d)) - 1u32;
            }
            add_mono(&mut r1, (s.t_power + d, s.z_power + p), c);

            let mut c = s.coeff.clone();
            for &w in ws.weights() {
                let base = q(w as i64 * s.t_power as i64, d as i64);
                for cc in 0..w {
                    c *= Rational::from(&base + cc);
                }
            }
            c /= &big;
            add_mono(&mut u1, (s.t_power + d, s.z_power + sw - 1), c);
        }
        let mut c = s.coeff.clone();
        for r in &hs.rho {
            c *= (&big + (Rational::from(r - 1u32) * d)) - 1u32;
        }
        add_mono(&mut r2, (s.t_power, s.z_power + qq + 1), c);

        let mut c = s.coeff.clone();
        for cc in 1..d {
            c *= Rational::from(&big - cc);
        }
        add_mono(&mut u2, (s.t_power, s.z_power + d as i64 - 1), c);
    }
    let reduced_monomials = cancel(r1, r2, d, t_order)?;
    let unreduced_monomials = cancel(u1, u2, d, t_order)?;
    Ok(OdeReport { t_order, reduced_monomials, unreduced_monomials })
}

/// `x = d^-d prod w^w z^-nu`: the constant `K` of the change of variables.
pub fn change_of_variable_constant(ws: &WeightSystem) -> Rational {
    t_base(ws)
}

/// Exact check that consecutive I-function coefficients follow the pFq term
/// ratio: `c(m, l+1) / c(m, l) = K prod(alpha^(m) + l) / (prod(rho^(m) + l) (l + 1))`.
pub fn check_series_ratios(hs: &HypergeomSystem, lmax: u32) -> Result<()> {
    let ws = &hs.ws;
    let d = ws.d() as u64;
    let terms = i_series(ws, d * (lmax as u64 + 1) + d);
    let k = change_of_variable_constant(ws);
    for &m in ws.nar() {
        let (alpha, rho) = shifted_tuples(hs, m)?;
        let coeffs: Vec<&Rational> = terms.iter().filter(|s| s.m == m).map(|s| &s.coeff).collect();
        for ell in 0..lmax as usize {
            let lhs = Rational::from(coeffs[ell + 1] / coeffs[ell]);
            let l = Rational::from(ell as u64);
            let mut rhs = k.clone() / Rational::from(ell as u64 + 1);
            for a in &alpha {
                rhs *= Rational::from(a + &l);
            }
            for r in &rho {
                rhs /= Rational::from(r + &l);
            }
            if lhs != rhs {
                return Err(Error::CheckFailed(format!("series ratio mismatch at m = {m}, l = {ell}")));
            }
        }
    }
    Ok(())
}

fn rat_f(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

/// `b^r` for `b > 0`.
fn rpow(b: &Float, r: &Rational, prec: u32) -> Float {
    (Float::with_val(prec, b.ln_ref()) * rat_f(r, prec)).exp()
}

fn log2_abs(x: &ApComplex) -> f64 {
    let a = x.abs();
    if a.is_zero() {
        f64::NEG_INFINITY
    } else {
        a.log2().to_f64()
    }
}

struct PfqPass {
    sum: ApComplex,
    max_term_log2: f64,
}

fn pfq_pass(alphas: &[Rational], rhos: &[Rational], x: &ApComplex, work: u32) -> Result<PfqPass> {
    let x = x.with_precision(work);
    let x_abs = x.abs().to_f64();
    let mut term = ApComplex::one(work);
    let mut sum = ApComplex::one(work);
    let mut max_term = 0.0f64;
    let mut max_partial = 0.0f64;
    let mut small_run = 0;
    let cutoff = -(work as f64);
    for k in 0..MAX_TERMS {
        let kk = Rational::from(k as u64);
        let mut ratio = Rational::from((1, k as u64 + 1));
        for a in alphas {
            ratio *= Rational::from(a + &kk);
        }
        for r in rhos {
            ratio /= Rational::from(r + &kk);
        }
        if ratio == 0 {
            return Ok(PfqPass { sum, max_term_log2: max_term });
        }
        let ratio_f = ratio.to_f64().abs();
        term = (&term * &x).scale(&rat_f(&ratio, work));
        sum = &sum + &term;
        let lt = log2_abs(&term);
        let ls = log2_abs(&sum);
        max_term = max_term.max(lt);
        max_partial = max_partial.max(ls);
        // only count as small once the terms are shrinking for good
        if lt < max_partial + cutoff && ratio_f * x_abs < 0.5 {
            small_run += 1;
            if small_run >= 5 {
                return Ok(PfqPass { sum, max_term_log2: max_term });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::PrecisionBudgetExceeded(format!("pFq needed more than {MAX_TERMS} terms")))
}

/// `pFq(alphas; rhos; x)` with `p <= q`, accurate to about `precision` bits.
///
/// The working precision is raised automatically when the largest term
/// exceeds the result by more than the guard bits.
pub fn pfq(alphas: &[Rational], rhos: &[Rational], x: &ApComplex, precision: u32) -> Result<ApComplex> {
    if alphas.len() > rhos.len() {
        return Err(Error::InvalidParameter("pFq needs p <= q".into()));
    }
    if let Some(r) = rhos.iter().find(|r| **r <= 0 && is_integer(r)) {
        return Err(Error::InvalidParameter(format!("lower parameter {r} is a non-positive integer")));
    }
    let mut work = precision + GUARD_BITS;
    loop {
        let pass = pfq_pass(alphas, rhos, x, work)?;
        let loss = pass.max_term_log2 - log2_abs(&pass.sum);
        if !loss.is_finite() {
            return Ok(pass.sum.with_precision(precision));
        }
        let needed = precision + GUARD_BITS + loss.max(0.0).ceil() as u32;
        if work + 16 >= needed {
            return Ok(pass.sum.with_precision(precision));
        }
        if needed > MAX_WORK_BITS {
            return Err(Error::PrecisionBudgetExceeded(format!("pFq lost {loss:.0} bits")));
        }
        work = needed + 16;
    }
}

/// A point of the universal cover of `C*`: modulus and an unreduced argument.
#[derive(Clone, Debug)]
pub struct BranchedX {
    pub abs: Float,
    pub arg: Float,
}

impl BranchedX {
    pub fn positive(x: &Float) -> Self {
        BranchedX { abs: x.clone(), arg: Float::new(x.prec()) }
    }

    pub fn new(abs: Float, arg: Float) -> Self {
        BranchedX { abs, arg }
    }

    /// `x e^(2 pi i k)`, a different point of the cover with the same value.
    pub fn rotate(&self, k: i64) -> Self {
        let prec = self.abs.prec();
        let arg = Float::with_val(prec, &self.arg + two_pi(prec) * Float::with_val(prec, k));
        BranchedX { abs: self.abs.clone(), arg }
    }

    pub fn value(&self, prec: u32) -> ApComplex {
        ApComplex::cis(&Float::with_val(prec, &self.arg)).scale(&Float::with_val(prec, &self.abs))
    }

    /// `x^r = exp(r (ln|x| + i arg))`.
    pub fn pow(&self, r: &Rational, prec: u32) -> ApComplex {
        let rf = rat_f(r, prec);
        let modulus = Float::with_val(prec, Float::with_val(prec, self.abs.ln_ref()) * &rf).exp();
        let angle = Float::with_val(prec, &self.arg * &rf);
        ApComplex::cis(&angle).scale(&modulus)
    }
}

/// Barnes' `Q_N(m)(x)`, branch taken from the recorded argument of `x`.
pub fn barnes_q(hs: &HypergeomSystem, m: u32, x: &BranchedX, precision: u32) -> Result<ApComplex> {
    let r = hs.index_of(m)?;
    let work = precision + GUARD_BITS;
    let rr = &hs.rho[r];
    let mut pre = Float::with_val(work, 1);
    for (i, ri) in hs.rho.iter().enumerate() {
        if i == r {
            continue;
        }
        let arg = Rational::from(rr - ri);
        if arg <= 0 && is_integer(&arg) {
            return Err(Error::PoleInPrefactor(arg.to_string()));
        }
        pre *= gamma_rational(&arg, work)?;
    }
    for a in &hs.alpha {
        let arg = Rational::from(rr - a);
        if arg <= 0 && is_integer(&arg) {
            return Err(Error::PoleInPrefactor(arg.to_string()));
        }
        pre /= gamma_rational(&arg, work)?;
    }
    let (alpha, rho) = shifted_tuples(hs, m)?;
    let mut y = x.value(work);
    if hs.ws.nu() % 2 == 1 {
        y = -&y;
    }
    let f = pfq(&alpha, &rho, &y, work)?;
    let power = x.pow(&(Rational::from(1) - rr), work);
    Ok((&power * &f).scale(&pre).with_precision(precision))
}

/// How [`upsilon`] evaluates the constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpsilonMethod {
    GammaProduct,
    RootOfUnity,
}

/// `Upsilon(m)`, either as
/// `exp(i pi nu (1 - rho)) Gamma(a)Gamma(1-a) / (Gamma(r)Gamma(1-r))` over the
/// shifted tuples, or as `d (2 pi)^(1-nu) e^(i pi(-nu/d - 1 - N/2)) / prod(1 - zeta^(m w_j))`.
pub fn upsilon(hs: &HypergeomSystem, m: u32, precision: u32, method: UpsilonMethod) -> Result<ApComplex> {
    let ws = &hs.ws;
    let work = precision + GUARD_BITS;
    let nu = ws.nu();
    match method {
        UpsilonMethod::GammaProduct => {
            let r = hs.index_of(m)?;
            let (alpha, rho) = shifted_tuples(hs, m)?;
            let phase = ApComplex::exp_i_pi(&((Rational::from(1) - &hs.rho[r]) * Rational::from(nu)), work);
            let mut g = Float::with_val(work, 1);
            let one = Rational::from(1);
            for a in &alpha {
                g *= gamma_rational(a, work)?;
                g *= gamma_rational(&Rational::from(&one - a), work)?;
            }
            for b in &rho {
                g /= gamma_rational(b, work)?;
                g /= gamma_rational(&Rational::from(&one - b), work)?;
            }
            Ok(phase.scale(&g).with_precision(precision))
        }
        UpsilonMethod::RootOfUnity => {
            hs.index_of(m)?;
            let d = ws.d();
            let mut den = Cyclotomic::one(d);
            for &w in ws.weights() {
                den = &den * &(&Cyclotomic::one(d) - &Cyclotomic::root_of_unity(d, m as i64 * w as i64));
            }
            let inv = den.inv()?.embed(work);
            let expo = q(-nu, d as i64) - 1u32 - q(ws.n_vars() as i64, 2);
            let phase = ApComplex::exp_i_pi(&expo, work);
            let tp = two_pi(work);
            let scale = rpow(&tp, &Rational::from(1 - nu), work) * d;
            Ok((&phase * &inv).scale(&scale).with_precision(precision))
        }
    }
}

/// `ceil(2 nu x^(1/nu) log2(e)) + 64`: bits lost to the cancellation between
/// Barnes functions growing like `exp(nu x^(1/nu))` and a combination decaying
/// like `exp(-nu x^(1/nu))`.
pub fn cancellation_budget(nu: u32, x_abs: &Float) -> u32 {
    let xf = x_abs.to_f64().max(0.0);
    let lost = 2.0 * nu as f64 * xf.powf(1.0 / nu as f64) * std::f64::consts::LOG2_E;
    lost.ceil() as u32 + 64
}

/// `sum_m zeta^(l m) Q_N(m)(x)`, evaluated with the cancellation budget.
pub fn barnes_combination(hs: &HypergeomSystem, ell: i64, x: &BranchedX, precision: u32) -> Result<ApComplex> {
    let nu = hs.ws.require_general_type()?;
    let work = precision + cancellation_budget(nu, &x.abs);
    let d = hs.ws.d();
    let mut acc = ApComplex::zero(work);
    for &m in hs.ws.nar() {
        let qv = barnes_q(hs, m, x, work)?;
        let root = Cyclotomic::root_of_unity(d, ell * m as i64).embed(work);
        acc = &acc + &(&root * &qv);
    }
    Ok(acc.with_precision(precision))
}

/// Leading term
/// `e^((2-N) pi i l / nu) (2 pi)^((nu-1)/2) nu^(-1/2) exp(-nu (x e^(2 pi i l))^(1/nu)) x^theta`.
pub fn barnes_leading(hs: &HypergeomSystem, ell: i64, x: &BranchedX, precision: u32) -> Result<ApComplex> {
    let nu = hs.ws.require_general_type()?;
    let work = precision + GUARD_BITS;
    let theta = theta_exponent(hs)?;
    let n = hs.ws.n_vars() as i64;
    let phase = ApComplex::exp_i_pi(&q((2 - n) * ell, nu as i64), work);
    let tp = two_pi(work);
    let scale = rpow(&tp, &q(nu as i64 - 1, 2), work)
        / Float::with_val(work, Float::with_val(work, nu).sqrt());
    let rotated = x.rotate(ell);
    let root = rotated.pow(&q(1, nu as i64), work);
    let expo = root.scale(&Float::with_val(work, -(nu as i32))).exp();
    let xt = x.pow(&theta, work);
    Ok((&(&phase * &expo) * &xt).scale(&scale).with_precision(precision))
}

/// The combination divided by its leading asymptotic term, at `|x|` on the
/// ray `arg x = -2 pi l`, i.e. with `arg(x e^(2 pi i l)) = 0`.
pub fn barnes_ratio(hs: &HypergeomSystem, ell: i64, x_abs: &Float, precision: u32) -> Result<ApComplex> {
    let prec = x_abs.prec().max(precision + GUARD_BITS);
    let x = BranchedX::positive(&Float::with_val(prec, x_abs)).rotate(-ell);
    barnes_ratio_branched(hs, ell, &x, precision)
}

/// Ratio at an arbitrary point of the cover.
pub fn barnes_ratio_branched(hs: &HypergeomSystem, ell: i64, x: &BranchedX, precision: u32) -> Result<ApComplex> {
    let comb = barnes_combination(hs, ell, x, precision + GUARD_BITS)?;
    let lead = barnes_leading(hs, ell, x, precision + GUARD_BITS)?;
    Ok((&comb / &lead).with_precision(precision))
}

/// Numeric comparison of the two forms of the modified I-function at `t = 1`,
/// sector `m`, and a real `z > 0`: the term-by-term series against
/// `C prod Gamma(alpha^(m)) / prod Gamma(rho^(m)) x^((m-1)/d) pFq(alpha^(m); rho^(m); x) / prod Gamma({w m/d})`.
pub fn i_function_numeric_gap(hs: &HypergeomSystem, m: u32, z: &Rational, precision: u32) -> Result<Float> {
    let ws = &hs.ws;
    let work = precision + GUARD_BITS;
    let d = ws.d() as i64;
    let nu = ws.nu();
    let zf = rat_f(z, work);
    let k = change_of_variable_constant(ws);
    let x = Float::with_val(work, rat_f(&k, work) / rpow(&zf, &Rational::from(nu), work));
    // z^(-nu/d)
    let z_step = (Float::with_val(work, zf.ln_ref()) * rat_f(&q(-nu, d), work)).exp();
    // series side: sum_l c(m, l) z^(-nu (D - 1)/d)
    let mut series = Float::with_val(work, 0);
    let mut ell = 0u64;
    let eps = Float::with_val(work, Float::i_exp(1, -(work as i32)));
    loop {
        let terms = i_series(ws, d as u64 * (ell + 1) + m as u64);
        let t = terms.iter().find(|s| s.m == m && s.ell as u64 == ell).expect("term present");
        let w = rpow(&z_step, &Rational::from(t.t_power - 1), work) * rat_f(&t.coeff, work);
        series += &w;
        if ell > 2 && w.abs() < Float::with_val(work, &series * &eps).abs() {
            break;
        }
        ell += 1;
        if ell > 4000 {
            return Err(Error::PrecisionBudgetExceeded("I-series did not converge".into()));
        }
    }
    // hypergeometric side
    let (alpha, rho) = shifted_tuples(hs, m)?;
    let f = pfq(&alpha, &rho, &ApComplex::from_real(x.clone()), work)?;
    let mut pre = Float::with_val(work, 1);
    for a in &alpha {
        pre *= gamma_rational(a, work)?;
    }
    for r in &rho {
        pre /= gamma_rational(r, work)?;
    }
    for t in ws.thetas(m) {
        pre /= gamma_real(&t, work)?;
    }
    let n = ws.n_vars() as i64;
    let tp = two_pi(work);
    let mut c = rpow(&tp, &q(n + nu - 1, 2), work);
    c /= Float::with_val(work, d).sqrt();
    for &w in ws.weights() {
        let e = q(w as i64, d) - q(1, 2);
        c *= Float::with_val(work, Float::with_val(work, w).ln() * rat_f(&e, work)).exp();
    }
    let xp = Float::with_val(work, Float::with_val(work, x.ln_ref()) * rat_f(&q(m as i64 - 1, d), work)).exp();
    let hyp = Float::with_val(work, f.re() * &pre) * &c * &xp;
    let gap = Float::with_val(work, &series - &hyp).abs() / series.abs();
    Ok(Float::with_val(precision, gap))
}

/// Named pass/fail results for every hypergeometric identity of one system.
///
/// Barnes decay is evaluated only when `barnes_grid` is non-empty.
pub fn hyper_checks(ws: &WeightSystem, precision: u32, barnes_grid: &[u32]) -> Result<Vec<(String, bool, String)>> {
    let mut out = Vec::new();
    let hs = match build_hg_system(ws) {
        Ok(hs) => hs,
        Err(e) => {
            out.push(("hyper.structure".into(), false, e.to_string()));
            return Ok(out);
        }
    };
    out.push(("hyper.structure".into(), true, format!("p = {}, q = {}", hs.p, hs.q)));
    let shifted = ws.nar().iter().try_for_each(|&m| shifted_tuples(&hs, m).map(|_| ()));
    out.push(("hyper.shifted_sum_identity".into(), shifted.is_ok(), err_text(&shifted)));
    let th = theta_exponent(&hs);
    out.push(("hyper.theta".into(), th.is_ok(), th.map(|t| t.to_string()).unwrap_or_else(|e| e.to_string())));
    let ratios = check_series_ratios(&hs, 10);
    out.push(("hyper.series_ratio".into(), ratios.is_ok(), err_text(&ratios)));

    let tau = tau_coefficients(ws)?;
    let layer = z0_layer(ws, ws.d() as u64 + 1);
    let tau_ok = tau.len() == layer.len()
        && tau.iter().all(|(m, c)| layer.get(m).is_some_and(|(lc, _)| lc == c));
    out.push(("hyper.z0_layer_is_tau".into(), tau_ok, String::new()));

    let ode = verify_i_ode(ws, 3 * ws.d() as u64);
    out.push((
        "hyper.ode".into(),
        ode.is_ok(),
        match &ode {
            Ok(r) => format!("{} + {} monomials cancelled", r.reduced_monomials, r.unreduced_monomials),
            Err(e) => e.to_string(),
        },
    ));

    let tol = Float::with_val(precision, Float::i_exp(1, 32 - precision as i32));
    let mut worst = Float::new(precision);
    for &m in ws.nar() {
        let a = upsilon(&hs, m, precision + 32, UpsilonMethod::GammaProduct)?;
        let b = upsilon(&hs, m, precision + 32, UpsilonMethod::RootOfUnity)?;
        let e = Float::with_val(precision, a.dist(&b) / b.abs());
        if e > worst {
            worst = e;
        }
    }
    out.push(("hyper.upsilon".into(), worst <= tol, format!("max relative gap {:.3e}", worst.to_f64())));

    let tol40 = Float::with_val(precision, Float::i_exp(1, 40 - precision as i32));
    let mut worst = Float::new(precision);
    for &m in ws.nar() {
        let g = i_function_numeric_gap(&hs, m, &q(3, 2), precision)?;
        if g > worst {
            worst = g;
        }
    }
    out.push((
        "hyper.series_equals_hypergeometric".into(),
        worst <= tol40,
        format!("max relative gap {:.3e} at z = 3/2", worst.to_f64()),
    ));

    let x = BranchedX::positive(&Float::with_val(precision + GUARD_BITS, 2));
    let mut worst = Float::new(precision);
    for &m in ws.nar() {
        let lhs = barnes_q(&hs, m, &x, precision + 32)?;
        let ups = upsilon(&hs, m, precision + 32, UpsilonMethod::GammaProduct)?;
        let r = hs.index_of(m)?;
        let (alpha, rho) = shifted_tuples(&hs, m)?;
        let work = precision + GUARD_BITS;
        let mut g = Float::with_val(work, 1);
        for a in &alpha {
            g *= gamma_rational(a, work)?;
        }
        for b in &rho {
            g /= gamma_rational(b, work)?;
        }
        // f((-1)^nu x) with (-1)^nu = exp(i pi nu) on the branch of Upsilon
        let mut y = x.value(work);
        if ws.nu() % 2 == 1 {
            y = -&y;
        }
        let shift = Rational::from(1) - &hs.rho[r];
        let f = &ApComplex::exp_i_pi(&(shift.clone() * Rational::from(ws.nu())), work)
            * &(&x.pow(&shift, work) * &pfq(&alpha, &rho, &y, work)?);
        let rhs = (&f / &ups).scale(&g);
        let e = Float::with_val(precision, lhs.dist(&rhs) / lhs.abs());
        if e > worst {
            worst = e;
        }
    }
    out.push(("hyper.barnes_upsilon_scaling".into(), worst <= tol, format!("max relative gap {:.3e}", worst.to_f64())));

    let mut branch_ok = true;
    let x = BranchedX::positive(&Float::with_val(precision + GUARD_BITS, 3));
    for &m in ws.nar() {
        let r = hs.index_of(m)?;
        for k in [-2i64, 1, 3] {
            let lhs = barnes_q(&hs, m, &x.rotate(k), precision)?;
            let phase = ApComplex::exp_i_pi(&((Rational::from(1) - &hs.rho[r]) * Rational::from(2 * k)), precision + 32);
            let rhs = &phase * &barnes_q(&hs, m, &x, precision + 32)?;
            branch_ok &= Float::with_val(precision, lhs.dist(&rhs) / rhs.abs()) <= tol;
        }
    }
    out.push(("hyper.barnes_branch_rule".into(), branch_ok, String::new()));

    if !barnes_grid.is_empty() {
        let (ok, detail) = barnes_decay(&hs, barnes_grid, precision)?;
        out.push(("hyper.barnes_decay".into(), ok, detail));
    }
    Ok(out)
}

fn err_text<T>(r: &Result<T>) -> String {
    r.as_ref().err().map(|e| e.to_string()).unwrap_or_default()
}

/// One sample of the Barnes decay test.
#[derive(Clone, Debug)]
pub struct BarnesSample {
    pub ell: i64,
    pub x: u32,
    pub ratio: ApComplex,
    pub deviation: f64,
    pub bound: f64,
    pub working_precision: u32,
}

/// `|ratio - 1|` against `5 x^(-1/nu)` for every `l in 1-nu..=0` and grid point.
pub fn barnes_samples(hs: &HypergeomSystem, grid: &[u32], precision: u32) -> Result<Vec<BarnesSample>> {
    use rayon::prelude::*;
    let nu = hs.ws.require_general_type()? as i64;
    let jobs: Vec<(i64, u32)> = (1 - nu..=0).flat_map(|l| grid.iter().map(move |&x| (l, x))).collect();
    jobs.par_iter()
        .map(|&(ell, x)| {
            let xf = Float::with_val(precision + GUARD_BITS, x);
            let ratio = barnes_ratio(hs, ell, &xf, precision)?;
            let one = ApComplex::one(precision);
            let deviation = ratio.dist(&one).to_f64();
            Ok(BarnesSample {
                ell,
                x,
                deviation,
                bound: 5.0 * (x as f64).powf(-1.0 / nu as f64),
                working_precision: precision + GUARD_BITS + cancellation_budget(nu as u32, &xf),
                ratio,
            })
        })
        .collect()
}

fn barnes_decay(hs: &HypergeomSystem, grid: &[u32], precision: u32) -> Result<(bool, String)> {
    let samples = barnes_samples(hs, grid, precision)?;
    let worst = samples
        .iter()
        .map(|s| s.deviation / s.bound)
        .fold(0.0f64, f64::max);
    let ok = samples.iter().all(|s| s.deviation <= s.bound);
    Ok((ok, format!("max |ratio - 1| / bound = {worst:.3}")))
}

/// `pi` used by callers that want the constant at the module's precision.
pub fn pi_at(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

//! Acceptance criteria 1-10. Each test prints one `criterion N: PASS|FAIL`
//! line to stderr (bypassing the test harness capture) before asserting.
//!
//! Expected values are computed here from closed forms or brute force, not
//! through the library routine under test.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Complete, Float, Integer, Rational};

use lgspec::classes::classes_checks;
use lgspec::exact::ApComplex;
use lgspec::gram::{euler_pairing_entry, gram_inverse, gram_matrix, stokes_coefficients};
use lgspec::hyper::{barnes_ratio, build_hg_system, upsilon, verify_i_ode, UpsilonMethod};
use lgspec::quantum::{build_quantum_algebra, check_spectrum_conjecture, eigenvalues, verify_quantum_relation};
use lgspec::weights::{family, mir_set, tau_coefficients};
use lgspec::{FamilySpec, WeightSystem};

fn line(k: u32, title: &str, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {k:>2}: {tag}  {title}  ({detail})");
}

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn ws(s: &str) -> WeightSystem {
    s.parse().unwrap()
}

fn named() -> Vec<FamilySpec> {
    vec![
        FamilySpec::A(5),
        FamilySpec::DT(4),
        FamilySpec::DT(5),
        FamilySpec::E6,
        FamilySpec::E7,
        FamilySpec::E8,
        FamilySpec::Fermat { d: 7, n: 3 },
    ]
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v
}

#[test]
fn criterion_01_index_data() {
    let start = Instant::now();
    // (family, Nar, p, q, alpha, rho_1..rho_q); E6 rho from the defining formula
    let over = |d: i64, v: &[i64]| v.iter().map(|&k| q(k, d)).collect::<Vec<_>>();
    let rows: Vec<(FamilySpec, Vec<u32>, usize, usize, Vec<Rational>, Vec<Rational>)> = vec![
        (FamilySpec::A(5), vec![1, 2, 3, 4], 0, 3, vec![], over(5, &[4, 3, 2])),
        (FamilySpec::DT(4), vec![1, 3, 5, 7], 1, 3, vec![q(1, 8)], over(4, &[1, 2, 3])),
        (FamilySpec::DT(5), vec![1, 3, 5, 7, 9], 1, 4, vec![q(1, 10)], over(5, &[1, 2, 3, 4])),
        (FamilySpec::E6, vec![1, 2, 5, 7, 10, 11], 1, 5, vec![q(1, 12)], over(12, &[11, 8, 6, 3, 2])),
        (FamilySpec::E7, vec![1, 2, 4, 5, 7, 8], 2, 5, vec![q(1, 9), q(1, 9) + q(1, 2)], over(9, &[8, 6, 5, 3, 2])),
        (
            FamilySpec::E8,
            vec![1, 2, 4, 7, 8, 11, 13, 14],
            1,
            7,
            vec![q(1, 15)],
            over(15, &[14, 12, 9, 8, 5, 3, 2]),
        ),
        (FamilySpec::Fermat { d: 7, n: 3 }, (1..7).collect(), 2, 5, vec![q(1, 7), q(1, 7)], over(7, &[6, 5, 4, 3, 2])),
    ];
    let mut bad = Vec::new();
    for (spec, nar, p, qq, alpha, rho) in rows {
        let w = family(&spec).unwrap();
        let hs = build_hg_system(&w).unwrap();
        let ok = w.nar() == &nar[..]
            && hs.p() == p
            && hs.q() == qq
            && sorted(hs.alpha().to_vec()) == sorted(alpha)
            && sorted(hs.rho()[1..].to_vec()) == sorted(rho)
            && hs.rho()[0] == 1;
        if !ok {
            bad.push(spec.to_string());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = bad.is_empty() && secs < 1.0;
    line(1, "hypergeometric index data", ok, &format!("mismatches {bad:?}, {secs:.3} s"));
    assert!(ok);
}

/// `c^(1/k)` with guard bits over 128.
fn root(c: &Rational, k: u32) -> Float {
    Float::with_val(160, c).root(k)
}

fn closed_spectrum(spec: &FamilySpec) -> Vec<(ApComplex, usize)> {
    // (prefactor, base, nu, zero multiplicity)
    let (pre, base, nu, zeros) = match spec {
        FamilySpec::A(5) => (q(4, 5), q(1, 5), 4, 0),
        FamilySpec::E6 => (q(5, 12), q(1, 5184), 5, 1),
        FamilySpec::E7 => (q(4, 9), q(4, 2187), 4, 3),
        FamilySpec::E8 => (q(7, 15), q(1, 30375), 7, 1),
        FamilySpec::DT(4) => (q(3, 8), Rational::from((Integer::from(4).pow(4), Integer::from(8).pow(5))), 3, 2),
        FamilySpec::Fermat { d: 7, n: 3 } => {
            // 4 * 7^(-7/4) = (4/7)(7^-3)^(1/4); zeros: 2 narrow plus broad tuples
            let mut broad = 0;
            for a in 0..6 {
                for b in 0..6 {
                    for c in 0..6 {
                        if (a + b + c + 3) % 7 == 0 {
                            broad += 1;
                        }
                    }
                }
            }
            (q(4, 7), q(1, 343), 4, 2 + broad)
        }
        _ => unreachable!(),
    };
    let t = Float::with_val(160, root(&base, nu) * Float::with_val(160, &pre));
    let mut out = Vec::new();
    if zeros > 0 {
        out.push((ApComplex::zero(160), zeros));
    }
    for j in 0..nu {
        let angle = Float::with_val(160, rug::float::Constant::Pi) * 2u32 * j / nu;
        out.push((ApComplex::cis(&angle).scale(&t), 1));
    }
    out
}

#[test]
fn criterion_02_closed_form_spectra() {
    let start = Instant::now();
    let specs = [
        FamilySpec::A(5),
        FamilySpec::E6,
        FamilySpec::E7,
        FamilySpec::E8,
        FamilySpec::DT(4),
        FamilySpec::Fermat { d: 7, n: 3 },
    ];
    let mut bad = Vec::new();
    let mut moduli = Vec::new();
    for spec in &specs {
        let qa = build_quantum_algebra(spec).unwrap();
        let got = eigenvalues(&qa, 128).unwrap();
        let want = closed_spectrum(spec);
        let scale = want.iter().map(|(z, _)| z.abs().to_f64()).fold(0.0, f64::max);
        moduli.push(format!("{spec} {scale:.7}"));
        let matches = got.len() == want.len()
            && want.iter().all(|(w, m)| {
                got.iter().any(|(g, k)| k == m && g.dist(&w.with_precision(128)).to_f64() <= 1e-12 * scale)
            });
        let total: usize = got.iter().map(|(_, m)| *m).sum();
        if !matches || total as u64 != qa.total_dimension() {
            bad.push(spec.to_string());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = bad.is_empty() && secs < 5.0;
    line(2, "closed-form spectra", ok, &format!("{}; mismatches {bad:?}; {secs:.2} s", moduli.join(", ")));
    assert!(ok);
}

#[test]
fn criterion_03_conjecture_sweep() {
    let mut bad = Vec::new();
    let mut count = 0;
    for spec in FamilySpec::sweep() {
        let w = family(&spec).unwrap();
        if w.nu() <= 1 {
            continue;
        }
        count += 1;
        let qa = build_quantum_algebra(&spec).unwrap();
        let r = check_spectrum_conjecture(&qa, 128, 1e-9).unwrap();
        if !(r.max_modulus_ok && r.root_of_unity_set_ok && r.multiplicity_one_ok && r.closure_ok) {
            bad.push(spec.to_string());
        }
    }
    let ok = bad.is_empty();
    line(3, "spectrum conjecture over the family sweep", ok, &format!("{count} instances, failures {bad:?}"));
    assert!(ok);
}

/// Coefficients of `prod(1 - x^w)` by direct expansion.
fn product_coeffs(weights: &[u32]) -> Vec<i128> {
    let mut p = vec![1i128];
    for &w in weights {
        let mut next = vec![0i128; p.len() + w as usize];
        for (i, c) in p.iter().enumerate() {
            next[i] += c;
            next[i + w as usize] -= c;
        }
        p = next;
    }
    p
}

/// Partition counts by dynamic programming over parts.
fn partitions(weights: &[u32], nmax: usize) -> Vec<i128> {
    let mut l = vec![0i128; nmax + 1];
    l[0] = 1;
    for &w in weights {
        for n in w as usize..=nmax {
            l[n] += l[n - w as usize];
        }
    }
    l
}

fn random_systems(count: usize) -> Vec<WeightSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=5usize);
        let d = rng.gen_range(2..=60u32);
        let w: Vec<u32> = (0..n).map(|_| rng.gen_range(1..d)).collect();
        if w.iter().sum::<u32>() >= d || w.iter().fold(0u32, |g, &x| gcd(g, x)) != 1 {
            continue;
        }
        out.push(WeightSystem::new(d, w).unwrap());
    }
    out
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gram_ok(w: &WeightSystem) -> Result<(), String> {
    let d = w.d() as usize;
    let nu = w.nu() as usize;
    let sign = if w.n_vars().is_multiple_of(2) { 1 } else { -1 };
    let a = product_coeffs(w.weights());
    let at = |n: usize| a.get(n).copied().unwrap_or(0);
    for n in 0..d {
        if euler_pairing_entry(w, n as u32).map_err(|e| e.to_string())? != at(n) {
            return Err(format!("magic identity at n = {n}"));
        }
    }
    let m = gram_matrix(w).map_err(|e| e.to_string())?;
    let inv = gram_inverse(w).map_err(|e| e.to_string())?;
    let l = partitions(w.weights(), nu);
    for i in 0..nu {
        for j in 0..nu {
            let prod: i128 = (0..nu).map(|k| m[i][k] * inv[k][j]).sum();
            if prod != (i == j) as i128 {
                return Err("M M^-1 != I".into());
            }
            if j >= i && inv[i][j] != l[j - i] {
                return Err(format!("M^-1[{i}][{j}] != L({})", j - i));
            }
        }
    }
    let dh = stokes_coefficients(w).map_err(|e| e.to_string())?;
    for j in 0..nu {
        let s: i128 = (0..=j).map(|i| at(i) * dh[nu - j + i - 1]).sum();
        if s != (j == 0) as i128 {
            return Err(format!("Stokes recursion at j = {j}"));
        }
    }
    let top = d - nu;
    if (0..=top).any(|n| at(top - n) != sign * at(n)) {
        return Err("symmetry".into());
    }
    if w.n_vars() == 1 && d <= 10 {
        for i in 0..nu {
            for j in 0..nu {
                let cartan = match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                };
                if m[i][j] + m[j][i] != cartan {
                    return Err("Cartan".into());
                }
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_04_gram_identities() {
    let start = Instant::now();
    let mut systems = random_systems(200);
    systems.extend(FamilySpec::sweep().iter().map(|s| family(s).unwrap()));
    systems.extend((2..=10).map(|d| WeightSystem::new(d, vec![1]).unwrap()));
    let failures: Vec<String> = systems
        .iter()
        .filter_map(|w| gram_ok(w).err().map(|e| format!("{w}: {e}")))
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let ok = failures.is_empty() && secs < 30.0;
    line(4, "exact Gram identities", ok, &format!("{} systems, failures {failures:?}, {secs:.2} s", systems.len()));
    assert!(ok);
}

#[test]
fn criterion_05_gamma_structure() {
    let mut failures = Vec::new();
    for spec in named() {
        let w = family(&spec).unwrap();
        for (name, pass, detail) in classes_checks(&w, 128).unwrap() {
            if !pass {
                failures.push(format!("{spec} {name} {detail}"));
            }
        }
    }
    let ok = failures.is_empty();
    line(5, "Gamma classes, HRR and PV integrality", ok, &format!("failures {failures:?}"));
    assert!(ok);
}

#[test]
fn criterion_06_i_function_ode() {
    let mut detail = Vec::new();
    let mut ok = true;
    for s in ["5;1", "9;2,3", "12;4,3", "7;1,1,1"] {
        let w = ws(s);
        match verify_i_ode(&w, 3 * w.d() as u64) {
            Ok(r) => detail.push(format!("{s}: {}+{}", r.reduced_monomials, r.unreduced_monomials)),
            Err(e) => {
                ok = false;
                detail.push(format!("{s}: {e}"));
            }
        }
    }
    line(6, "I-function ODE to t-order 3d", ok, &detail.join(", "));
    assert!(ok);
}

#[test]
fn criterion_07_upsilon() {
    let tol = 2f64.powi(-96);
    let mut worst = 0.0f64;
    for spec in named() {
        let hs = build_hg_system(&family(&spec).unwrap()).unwrap();
        for &m in hs.ws().nar() {
            let a = upsilon(&hs, m, 128, UpsilonMethod::GammaProduct).unwrap();
            let b = upsilon(&hs, m, 128, UpsilonMethod::RootOfUnity).unwrap();
            worst = worst.max((a.dist(&b) / b.abs()).to_f64());
        }
    }
    let ok = worst <= tol;
    line(7, "two formulas for Upsilon(m)", ok, &format!("max relative gap {worst:.3e}"));
    assert!(ok);
}

#[test]
fn criterion_08_barnes_asymptotics() {
    let start = Instant::now();
    let specs = [FamilySpec::A(3), FamilySpec::A(5), FamilySpec::E6, FamilySpec::DT(4), FamilySpec::Fermat { d: 7, n: 3 }];
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for spec in &specs {
        let hs = build_hg_system(&family(spec).unwrap()).unwrap();
        let nu = hs.ws().nu();
        for ell in 1 - nu..=0 {
            for x in [25u32, 50, 100, 200] {
                let r = barnes_ratio(&hs, ell, &Float::with_val(192, x), 128).unwrap();
                let dev = r.dist(&ApComplex::one(128)).to_f64();
                let bound = 5.0 * (x as f64).powf(-1.0 / nu as f64);
                worst = worst.max(dev / bound);
                if dev > bound {
                    failures.push(format!("{spec} l={ell} x={x}: {dev:.3e}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failures.is_empty() && secs < 120.0;
    line(8, "Barnes combinations decay", ok, &format!("max dev/bound {worst:.3}, failures {failures:?}, {secs:.1} s"));
    assert!(ok);
}

#[test]
fn criterion_09_tau_and_mir() {
    let mut failures = Vec::new();
    for d in 2..=12u32 {
        for n in 1..d {
            let w = WeightSystem::new(d, vec![1; n as usize]).unwrap();
            let tau = tau_coefficients(&w).unwrap();
            let mut want = std::collections::BTreeMap::new();
            if d > n + 1 {
                want.insert(2, Rational::from(1));
            } else if d > 2 {
                want.insert(2, Rational::from(1));
                want.insert(1, Rational::from((1, Integer::factorial(d).complete() * Integer::from(d).pow(n))));
            } else {
                want.insert(1, q(1, 4));
            }
            if tau != want {
                failures.push(format!("Fermat({d},{n})"));
            }
        }
    }
    let q11 = ws("18;7,4,6");
    let mir = mir_set(&q11).unwrap();
    // 18 | 7m, 4m or 6m exactly when 3 | m
    let nar: Vec<u32> = (1..18).filter(|m| m % 3 != 0).collect();
    let want: Vec<u32> = nar.iter().copied().filter(|&m| m != 17).collect();
    let mir_ok = q11.nar() == &nar[..] && mir == want;
    if !mir_ok {
        failures.push(format!("Mir(18;7,4,6) = {mir:?}"));
    }
    let ok = failures.is_empty();
    line(9, "tau(t) for Fermat and Mir of 18;7,4,6", ok, &format!("failures {failures:?}"));
    assert!(ok);
}

#[test]
fn criterion_10_quantum_relations() {
    let mut failures = Vec::new();
    let mut count = 0;
    for spec in FamilySpec::sweep() {
        let qa = build_quantum_algebra(&spec).unwrap();
        match verify_quantum_relation(&qa) {
            Ok(rels) => count += rels.len(),
            Err(e) => failures.push(format!("{spec}: {e}")),
        }
    }
    let ok = failures.is_empty();
    line(10, "quantum relations", ok, &format!("{count} relations, failures {failures:?}"));
    assert!(ok);
}


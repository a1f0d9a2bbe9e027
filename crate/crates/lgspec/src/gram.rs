//! The polynomial `P(x) = prod_j (1 - x^(w_j))`, partition counts, the Gram
//! matrix of the exceptional collection `C(l)^st`, its inverse and the Stokes
//! coefficients of exponential type. Everything here is exact.

use rug::Integer;

use crate::error::{Error, Result};
use crate::exact::Cyclotomic;
use crate::weights::WeightSystem;

/// All Gram-side data of a weight system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramData {
    pub a: Vec<i128>,
    pub partitions: Vec<i128>,
    pub m: Vec<Vec<i128>>,
    pub m_inv: Vec<Vec<i128>>,
    pub stokes: Vec<i128>,
}

/// Coefficients `a(0..=d-nu)` of `prod_j (1 - x^(w_j))`.
pub fn aw_coefficients(ws: &WeightSystem) -> Result<Vec<i128>> {
    ws.require_general_type()?;
    let deg: usize = ws.weights().iter().map(|&w| w as usize).sum();
    let mut a = vec![0i128; deg + 1];
    a[0] = 1;
    for &w in ws.weights() {
        let w = w as usize;
        for k in (w..=deg).rev() {
            a[k] -= a[k - w];
        }
    }
    Ok(a)
}

/// `a(n)` for any `n >= 0`, zero past the degree.
fn a_at(a: &[i128], n: usize) -> i128 {
    a.get(n).copied().unwrap_or(0)
}

/// `L_w(0..=nmax)` by inverting `P` as a power series.
pub fn partition_counts(ws: &WeightSystem, nmax: usize) -> Vec<i128> {
    let deg: usize = ws.weights().iter().map(|&w| w as usize).sum();
    let mut a = vec![0i128; deg + 1];
    a[0] = 1;
    for &w in ws.weights() {
        for k in (w as usize..=deg).rev() {
            a[k] -= a[k - w as usize];
        }
    }
    let mut l = vec![0i128; nmax + 1];
    l[0] = 1;
    for n in 1..=nmax {
        let s: i128 = (1..=n.min(deg)).map(|i| a[i] * l[n - i]).sum();
        l[n] = -s;
    }
    l
}

/// `L_w(n)` by listing every `(k_1, ..., k_N)` with `sum k_j w_j = n`.
pub fn partition_count_enumerated(weights: &[u32], n: u64) -> u64 {
    fn go(ws: &[u32], rest: u64) -> u64 {
        match ws.split_first() {
            None => (rest == 0) as u64,
            Some((&w, tail)) => (0..=rest / w as u64).map(|k| go(tail, rest - k * w as u64)).sum(),
        }
    }
    go(weights, n)
}

/// The cyclic vectors of `prod_j (1 - zeta^(-w_j m))` in `Z[x]/(x^d - 1)`,
/// one per narrow index.
fn narrow_products(ws: &WeightSystem) -> Vec<(u32, Vec<i128>)> {
    let d = ws.d() as usize;
    ws.nar()
        .iter()
        .map(|&m| {
            let mut p = vec![0i128; d];
            p[0] = 1;
            for &w in ws.weights() {
                let s = (d - (w as usize * m as usize) % d) % d;
                let mut next = p.clone();
                for k in 0..d {
                    next[(k + s) % d] -= p[k];
                }
                p = next;
            }
            (m, p)
        })
        .collect()
}

fn pairing_from_products(ws: &WeightSystem, prods: &[(u32, Vec<i128>)], n: u32) -> Result<i128> {
    let d = ws.d() as usize;
    let mut acc = vec![0i128; d];
    for (m, p) in prods {
        let shift = (n as usize * *m as usize) % d;
        for (k, c) in p.iter().enumerate() {
            acc[(k + shift) % d] += c;
        }
    }
    let value = Cyclotomic::from_cyclic_integers(ws.d(), &acc);
    let r = value
        .as_rational()
        .map(|r| r / Integer::from(ws.d()))
        .filter(|r| *r.denom() == 1)
        .ok_or_else(|| Error::NonIntegerResult(value.to_string()))?;
    r.numer()
        .to_i128()
        .ok_or_else(|| Error::NonIntegerResult(r.to_string()))
}

/// `(1/d) sum_{m in Nar} zeta^(n m) prod_j (1 - zeta^(-w_j m))` evaluated
/// exactly in `Q(zeta_d)`, required to be a rational integer.
pub fn euler_pairing_entry(ws: &WeightSystem, n: u32) -> Result<i128> {
    if n >= ws.d() {
        return Err(Error::InvalidParameter(format!("n = {n} must be below d = {}", ws.d())));
    }
    pairing_from_products(ws, &narrow_products(ws), n)
}

/// Every entry `0 <= n < d` at once, sharing the per-sector products.
pub fn euler_pairing_entries(ws: &WeightSystem) -> Result<Vec<i128>> {
    let prods = narrow_products(ws);
    (0..ws.d()).map(|n| pairing_from_products(ws, &prods, n)).collect()
}

/// `M[j][j+n] = a(n)`, zero below the diagonal.
pub fn gram_matrix(ws: &WeightSystem) -> Result<Vec<Vec<i128>>> {
    let nu = ws.require_general_type()? as usize;
    let a = aw_coefficients(ws)?;
    Ok((0..nu)
        .map(|i| (0..nu).map(|j| if j >= i { a_at(&a, j - i) } else { 0 }).collect())
        .collect())
}

/// Exact inverse of an upper unitriangular integer matrix.
fn unitriangular_inverse(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    let mut inv = vec![vec![0i128; n]; n];
    for col in 0..n {
        for row in (0..=col).rev() {
            let mut s: i128 = if row == col { 1 } else { 0 };
            for k in row + 1..=col {
                s -= m[row][k] * inv[k][col];
            }
            inv[row][col] = s;
        }
    }
    inv
}

/// `M^-1`, checked entrywise against the partition counts.
pub fn gram_inverse(ws: &WeightSystem) -> Result<Vec<Vec<i128>>> {
    let m = gram_matrix(ws)?;
    let inv = unitriangular_inverse(&m);
    let l = partition_counts(ws, m.len());
    for (i, row) in inv.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expect = if j >= i { l[j - i] } else { 0 };
            if *v != expect {
                return Err(Error::CheckFailed(format!("M^-1[{i}][{j}] = {v}, L = {expect}")));
            }
        }
    }
    Ok(inv)
}

/// `d_h = L_w(nu - h)` for `h = 1..=nu`, checked against the recursion
/// `sum_{i=0}^{j} a(i) d_(nu-j+i) = delta_(j,0)`.
pub fn stokes_coefficients(ws: &WeightSystem) -> Result<Vec<i128>> {
    let nu = ws.require_general_type()? as usize;
    let l = partition_counts(ws, nu);
    let a = aw_coefficients(ws)?;
    let dh: Vec<i128> = (1..=nu).map(|h| l[nu - h]).collect();
    let d_at = |h: usize| dh[h - 1];
    for j in 0..nu {
        let s: i128 = (0..=j).map(|i| a_at(&a, i) * d_at(nu - j + i)).sum();
        if s != (j == 0) as i128 {
            return Err(Error::CheckFailed(format!("Stokes recursion fails at j = {j}")));
        }
    }
    if d_at(nu) != 1 {
        return Err(Error::CheckFailed("d_nu != 1".into()));
    }
    Ok(dh)
}

pub fn gram_data(ws: &WeightSystem) -> Result<GramData> {
    let nu = ws.require_general_type()? as usize;
    Ok(GramData {
        a: aw_coefficients(ws)?,
        partitions: partition_counts(ws, nu.saturating_sub(1)),
        m: gram_matrix(ws)?,
        m_inv: gram_inverse(ws)?,
        stokes: stokes_coefficients(ws)?,
    })
}

/// Named pass/fail results for every Gram identity.
pub fn gram_checks(ws: &WeightSystem) -> Result<Vec<(String, bool, String)>> {
    let nu = ws.require_general_type()? as usize;
    let d = ws.d() as usize;
    let a = aw_coefficients(ws)?;
    let mut out = Vec::new();

    let entries = euler_pairing_entries(ws)?;
    let bad: Vec<usize> = (0..d).filter(|&n| entries[n] != a_at(&a, n)).collect();
    out.push(("gram.magic_identity".into(), bad.is_empty(), format!("mismatched n: {bad:?}")));

    let sign: i128 = if ws.n_vars().is_multiple_of(2) { 1 } else { -1 };
    let top = d - nu;
    let sym = (0..=top).all(|n| a[top - n] == sign * a[n]);
    out.push(("gram.symmetry".into(), sym, format!("a(d-nu-n) = (-1)^N a(n), d-nu = {top}")));
    out.push(("gram.a0_top".into(), a[0] == 1 && a[top] == sign, String::new()));

    let m = gram_matrix(ws)?;
    let inv = gram_inverse(ws);
    let identity = match &inv {
        Ok(inv) => (0..nu).all(|i| {
            (0..nu).all(|j| (0..nu).map(|k| m[i][k] * inv[k][j]).sum::<i128>() == (i == j) as i128)
        }),
        Err(_) => false,
    };
    out.push(("gram.inverse_identity".into(), identity, String::new()));
    out.push((
        "gram.inverse_partitions".into(),
        inv.is_ok(),
        inv.err().map(|e| e.to_string()).unwrap_or_default(),
    ));
    let stokes = stokes_coefficients(ws);
    out.push((
        "gram.stokes_recursion".into(),
        stokes.is_ok(),
        stokes.as_ref().err().map(|e| e.to_string()).unwrap_or_default(),
    ));

    let series = partition_counts(ws, 20);
    let enumerated = (0..=20u64)
        .all(|n| series[n as usize] == partition_count_enumerated(ws.weights(), n) as i128);
    out.push(("gram.partition_enumeration".into(), enumerated, "n <= 20".into()));

    if ws.n_vars() == 1 {
        out.push(("gram.cartan".into(), cartan_check(ws)?, format!("A_{}", d - 1)));
    }
    if let Some(ok) = p0_transformation_check(ws)? {
        out.push(("gram.p0_transformation".into(), ok, String::new()));
    }
    Ok(out)
}

/// For `(d; 1)`: `M + M^T` is the Cartan matrix of `A_(d-1)`.
pub fn cartan_check(ws: &WeightSystem) -> Result<bool> {
    let m = gram_matrix(ws)?;
    let n = m.len();
    Ok((0..n).all(|i| {
        (0..n).all(|j| {
            let expect = match i.abs_diff(j) {
                0 => 2,
                1 => -1,
                _ => 0,
            };
            m[i][j] + m[j][i] == expect
        })
    }))
}

/// When `p = |Nar| - nu = 0`: `sum_h d_h zeta^(-h m) = (-1)^N` for every
/// narrow `m`. Returns `None` when `p > 0`.
pub fn p0_transformation_check(ws: &WeightSystem) -> Result<Option<bool>> {
    let nu = ws.require_general_type()? as usize;
    if ws.nar().len() != nu {
        return Ok(None);
    }
    let dh = stokes_coefficients(ws)?;
    let d = ws.d() as usize;
    let sign: i64 = if ws.n_vars().is_multiple_of(2) { 1 } else { -1 };
    let target = Cyclotomic::from_rational(ws.d(), rug::Rational::from(sign));
    for &m in ws.nar() {
        let mut acc = vec![0i128; d];
        for h in 1..=nu {
            acc[(d * h - (h * m as usize) % d) % d] += dh[h - 1];
        }
        if Cyclotomic::from_cyclic_integers(ws.d(), &acc) != target {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(s: &str) -> WeightSystem {
        s.parse().unwrap()
    }

    #[test]
    fn coefficients() {
        assert_eq!(aw_coefficients(&ws("9;2,3")).unwrap(), vec![1, 0, -1, -1, 0, 1]);
        assert_eq!(aw_coefficients(&ws("12;4,3")).unwrap(), vec![1, 0, 0, -1, -1, 0, 0, 1]);
        assert_eq!(aw_coefficients(&ws("7;1")).unwrap(), vec![1, -1]);
    }

    #[test]
    fn partitions() {
        assert_eq!(partition_counts(&ws("9;2,3"), 4), vec![1, 0, 1, 1, 1]);
        assert_eq!(partition_counts(&ws("12;4,3"), 4), vec![1, 0, 0, 1, 1]);
        assert_eq!(partition_counts(&ws("7;1"), 6), vec![1; 7]);
        assert_eq!(partition_count_enumerated(&[2, 3], 12), 3);
    }

    #[test]
    fn magic_identity_entries() {
        assert_eq!(euler_pairing_entry(&ws("3;1,1"), 0).unwrap(), 1);
        assert_eq!(euler_pairing_entry(&ws("9;2,3"), 2).unwrap(), -1);
        let w = ws("12;4,3");
        assert_eq!(euler_pairing_entries(&w).unwrap()[..8], aw_coefficients(&w).unwrap()[..]);
        for n in 8..12 {
            assert_eq!(euler_pairing_entry(&w, n).unwrap(), 0);
        }
    }

    #[test]
    fn gram_e7() {
        let w = ws("9;2,3");
        assert_eq!(
            gram_matrix(&w).unwrap(),
            vec![vec![1, 0, -1, -1], vec![0, 1, 0, -1], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]
        );
        assert_eq!(
            gram_inverse(&w).unwrap(),
            vec![vec![1, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]
        );
        assert_eq!(stokes_coefficients(&w).unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(stokes_coefficients(&ws("12;4,3")).unwrap(), vec![1, 1, 0, 0, 1]);
        assert_eq!(gram_inverse(&ws("12;4,3")).unwrap()[0], vec![1, 0, 0, 1, 1]);
    }

    #[test]
    fn r_spin() {
        for d in 2..=10 {
            let w = WeightSystem::new(d, vec![1]).unwrap();
            assert!(cartan_check(&w).unwrap());
            assert_eq!(stokes_coefficients(&w).unwrap(), vec![1; d as usize - 1]);
            assert_eq!(p0_transformation_check(&w).unwrap(), Some(true));
            let inv = gram_inverse(&w).unwrap();
            assert!(inv.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, v)| *v == (j >= i) as i128)));
        }
        assert_eq!(p0_transformation_check(&ws("9;2,3")).unwrap(), None);
    }

    #[test]
    fn all_checks_pass_on_named() {
        for s in ["9;2,3", "12;4,3", "15;5,3", "8;1,4", "7;1,1,1", "18;7,4,6"] {
            for (name, ok, detail) in gram_checks(&ws(s)).unwrap() {
                assert!(ok, "{s}: {name} {detail}");
            }
        }
    }
}

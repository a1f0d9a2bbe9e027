//! Weight systems `(d; w_1, ..., w_N)` and the combinatorics they determine:
//! narrow sectors, Hodge gradings, the coefficients of `tau(t)` and the
//! principal eigenvalue `T`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{factorial, frac, gcd_u64, q, rising};

/// A quasi-homogeneous weight system with its derived invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    d: u32,
    weights: Vec<u32>,
    nu: i64,
    c_hat: Rational,
    nar: Vec<u32>,
    mir: Vec<u32>,
    combinatorics_only: bool,
}

/// Hodge data of the narrow sector `J^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorData {
    pub m: u32,
    pub thetas: Vec<Rational>,
    pub mu: Rational,
    pub deg: Rational,
}

/// Named families of invertible polynomials.
///
/// `A(n)` is `x^n`, `DT(n)` is `x^n y + y^2`, `Fermat(d, N)` is
/// `x_1^d + ... + x_N^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilySpec {
    A(u32),
    DT(u32),
    E6,
    E7,
    E8,
    Fermat { d: u32, n: u32 },
    Custom,
}

impl WeightSystem {
    /// Validate and derive. Custom systems are flagged combinatorics-only,
    /// since nondegeneracy of `W` cannot be read off the weights.
    pub fn new(d: u32, weights: Vec<u32>) -> Result<Self> {
        Self::build(d, weights, true)
    }

    fn build(d: u32, weights: Vec<u32>, combinatorics_only: bool) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if d == 0 || weights.contains(&0) {
            return Err(Error::Parse("degree and weights must be positive".into()));
        }
        let g = weights.iter().fold(0u64, |g, &w| gcd_u64(g, w as u64));
        if g != 1 {
            return Err(Error::GcdViolation(g));
        }
        let sum: i64 = weights.iter().map(|&w| w as i64).sum();
        let nu = d as i64 - sum;
        let n = weights.len() as i64;
        let c_hat = Rational::from(n) - Rational::from((2 * sum, d as i64));
        let nar: Vec<u32> = (1..d)
            .filter(|m| weights.iter().all(|&w| !(w as u64 * *m as u64).is_multiple_of(d as u64)))
            .collect();
        let mut ws = WeightSystem { d, weights, nu, c_hat, nar, mir: Vec::new(), combinatorics_only };
        if nu > 0 {
            ws.mir = ws.compute_mir();
        }
        Ok(ws)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of variables `N`.
    pub fn n_vars(&self) -> usize {
        self.weights.len()
    }

    pub fn nu(&self) -> i64 {
        self.nu
    }

    pub fn c_hat(&self) -> &Rational {
        &self.c_hat
    }

    pub fn nar(&self) -> &[u32] {
        &self.nar
    }

    pub fn is_narrow(&self, m: u32) -> bool {
        self.nar.binary_search(&m).is_ok()
    }

    pub fn combinatorics_only(&self) -> bool {
        self.combinatorics_only
    }

    /// `nu` as an unsigned value, or `NotGeneralType`.
    pub fn require_general_type(&self) -> Result<u32> {
        if self.nu <= 0 {
            return Err(Error::NotGeneralType(self.nu));
        }
        Ok(self.nu as u32)
    }

    /// `{w m / d}` for each weight.
    pub fn thetas(&self, m: u32) -> Vec<Rational> {
        self.weights
            .iter()
            .map(|&w| frac(&q(w as i64 * m as i64, self.d as i64)))
            .collect()
    }

    /// `sum_j floor(w_j m / d)`.
    pub fn floor_sum(&self, m: u64) -> i64 {
        self.weights
            .iter()
            .map(|&w| (w as u64 * m / self.d as u64) as i64)
            .sum()
    }

    fn compute_mir(&self) -> Vec<u32> {
        let mut mir: Vec<u32> = self
            .nar
            .iter()
            .copied()
            .filter(|&m| m >= 2 && m as i64 - 1 - self.floor_sum(m as u64) == 1)
            .collect();
        if self.nu == 1 {
            mir.insert(0, 1);
        }
        mir
    }
}

/// Parse `d;w1,w2,...,wN`. Whitespace around tokens is ignored.
pub fn parse_weight_system(text: &str) -> Result<WeightSystem> {
    let (d, ws) = text
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("expected `d;w1,...,wN`, got `{text}`")))?;
    let d: u32 = d
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree `{}`", d.trim())))?;
    if ws.trim().is_empty() {
        return Err(Error::EmptyWeights);
    }
    let weights = ws
        .split(',')
        .map(|w| {
            w.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad weight `{}`", w.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightSystem::new(d, weights)
}

impl FromStr for WeightSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_weight_system(s)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "{};{}", self.d, ws.join(","))
    }
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            FamilySpec::A(n) if n < 2 => bad(format!("A:{n} needs n >= 2 (W = x^n of general type)")),
            FamilySpec::DT(n) if n < 3 => bad(format!("DT:{n} needs n >= 3")),
            FamilySpec::Fermat { d, n } if n == 0 || d <= n => {
                bad(format!("Fermat:{d},{n} needs 1 <= N < d"))
            }
            FamilySpec::Custom => Err(Error::UnsupportedFamily("custom weight systems have no family data".into())),
            _ => Ok(()),
        }
    }

    /// Sweep instances used by the verification suite.
    pub fn sweep() -> Vec<FamilySpec> {
        let mut out: Vec<FamilySpec> = (2..=12).map(FamilySpec::A).collect();
        out.extend((3..=10).map(FamilySpec::DT));
        out.extend([FamilySpec::E6, FamilySpec::E7, FamilySpec::E8]);
        for d in 3..=12 {
            for n in 2..d {
                out.push(FamilySpec::Fermat { d, n });
            }
        }
        out
    }
}

/// The weight system of a named family.
pub fn family(spec: &FamilySpec) -> Result<WeightSystem> {
    spec.validate()?;
    let (d, w) = match *spec {
        FamilySpec::A(n) => (n, vec![1]),
        FamilySpec::DT(n) => (2 * n, vec![1, n]),
        FamilySpec::E6 => (12, vec![4, 3]),
        FamilySpec::E7 => (9, vec![2, 3]),
        FamilySpec::E8 => (15, vec![5, 3]),
        FamilySpec::Fermat { d, n } => (d, vec![1; n as usize]),
        FamilySpec::Custom => unreachable!("rejected by validate"),
    };
    WeightSystem::build(d, w, false)
}

impl FromStr for FamilySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad family parameter `{t}`")))
        };
        let spec = match s.split_once(':') {
            None => match s {
                "E6" => FamilySpec::E6,
                "E7" => FamilySpec::E7,
                "E8" => FamilySpec::E8,
                _ => return Err(Error::Parse(format!("unknown family `{s}`"))),
            },
            Some(("A", n)) => FamilySpec::A(num(n)?),
            Some(("DT", n)) => FamilySpec::DT(num(n)?),
            Some(("Fermat", rest)) => {
                let (d, n) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("expected `Fermat:d,N`, got `{s}`")))?;
                FamilySpec::Fermat { d: num(d)?, n: num(n)? }
            }
            Some((tag, _)) => return Err(Error::Parse(format!("unknown family `{tag}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::A(n) => write!(f, "A:{n}"),
            FamilySpec::DT(n) => write!(f, "DT:{n}"),
            FamilySpec::E6 => write!(f, "E6"),
            FamilySpec::E7 => write!(f, "E7"),
            FamilySpec::E8 => write!(f, "E8"),
            FamilySpec::Fermat { d, n } => write!(f, "Fermat:{d},{n}"),
            FamilySpec::Custom => write!(f, "Custom"),
        }
    }
}

/// Parse either a family tag or a raw weight system.
pub fn parse_input(text: &str) -> Result<(WeightSystem, Option<FamilySpec>)> {
    let t = text.trim();
    if t.contains(';') {
        return Ok((parse_weight_system(t)?, None));
    }
    let spec: FamilySpec = t.parse()?;
    Ok((family(&spec)?, Some(spec)))
}

pub fn narrow_indices(ws: &WeightSystem) -> Vec<u32> {
    ws.nar.clone()
}

/// Thetas, `mu` and `deg` of the sector `J^m`.
///
/// For `m` in Mir with `m > 1` the identity `1 - deg = nu (m - 1)/d` is
/// checked on the way out.
pub fn sector_data(ws: &WeightSystem, m: u32) -> Result<SectorData> {
    if !ws.is_narrow(m) {
        return Err(Error::NotNarrow(m));
    }
    let thetas = ws.thetas(m);
    let n = ws.n_vars() as i64;
    let mu = thetas.iter().fold(q(-n, 2), |acc, t| acc + t);
    let deg = Rational::from(ws.c_hat() / 2u32) + &mu;
    if m > 1 && ws.mir.contains(&m) {
        let expect = q(ws.nu * (m as i64 - 1), ws.d as i64);
        if Rational::from(1) - &deg != expect {
            return Err(Error::CheckFailed(format!("1 - deg(e_{m}) != nu(m-1)/d")));
        }
    }
    Ok(SectorData { m, thetas, mu, deg })
}

pub fn mir_set(ws: &WeightSystem) -> Result<Vec<u32>> {
    ws.require_general_type()?;
    Ok(ws.mir.clone())
}

/// Exact `tau_m` with `tau(t) = sum_m tau_m t^(m-1) e_m` (`t^d` for `m = 1`).
///
/// Each Gamma ratio `Gamma(w m/d) / Gamma({w m/d})` is the rising factorial
/// `({w m/d})_(floor(w m/d))`.
pub fn tau_coefficients(ws: &WeightSystem) -> Result<BTreeMap<u32, Rational>> {
    ws.require_general_type()?;
    let mut out = BTreeMap::new();
    for &m in &ws.mir {
        // m = 1 enters through the term d + 1 of the I-function
        let big = if m == 1 { ws.d as u64 + 1 } else { m as u64 };
        let mut c = Rational::from((Integer::from(1), factorial(big - 1)));
        for &w in &ws.weights {
            let x = q(w as i64 * m as i64, ws.d as i64);
            let big_floor = (w as u64 * big) / ws.d as u64;
            c *= rising(&frac(&x), big_floor);
        }
        if c == 0 {
            return Err(Error::CheckFailed(format!("tau_{m} vanishes although m is in Mir")));
        }
        out.insert(m, c);
    }
    Ok(out)
}

/// Exponent of `t` in `tau_m(t)`.
pub fn tau_t_power(ws: &WeightSystem, m: u32) -> u32 {
    if m == 1 {
        ws.d
    } else {
        m - 1
    }
}

/// `tau'(1)`: derivative of `tau(t)` at `t = 1`, keyed by sector.
pub fn tau_prime(ws: &WeightSystem) -> Result<BTreeMap<u32, Rational>> {
    Ok(tau_coefficients(ws)?
        .into_iter()
        .map(|(m, c)| (m, c * tau_t_power(ws, m)))
        .collect())
}

/// `prod_j w_j^(w_j) / d^d`, the base of `T`.
pub fn t_base(ws: &WeightSystem) -> Rational {
    let mut num = Integer::from(1);
    for &w in &ws.weights {
        num *= Integer::from(w).pow(w);
    }
    Rational::from((num, Integer::from(ws.d).pow(ws.d)))
}

/// `T = nu (d^(-d) prod w_j^(w_j))^(1/nu)`.
pub fn principal_t(ws: &WeightSystem, precision: u32) -> Result<Float> {
    let nu = ws.require_general_type()?;
    let work = precision + 32;
    let base = Float::with_val(work, &t_base(ws));
    let root = base.root(nu);
    Ok(Float::with_val(precision, root * nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(s: &str) -> WeightSystem {
        s.parse().unwrap()
    }

    #[test]
    fn parse_e7() {
        let w = ws("9;2,3");
        assert_eq!(w.nu(), 4);
        assert_eq!(*w.c_hat(), q(8, 9));
        assert_eq!(w.nar(), &[1, 2, 4, 5, 7, 8]);
        assert_eq!(ws("5;1").nar(), &[1, 2, 3, 4]);
        assert_eq!(parse_weight_system("6;2,4"), Err(Error::GcdViolation(2)));
        assert_eq!(parse_weight_system("6;"), Err(Error::EmptyWeights));
        assert!(matches!(parse_weight_system("6,2"), Err(Error::Parse(_))));
        assert_eq!(ws(" 9 ; 2 , 3 "), w);
    }

    #[test]
    fn families() {
        let e8 = family(&FamilySpec::E8).unwrap();
        assert_eq!((e8.d(), e8.weights()), (15, &[5, 3][..]));
        assert_eq!(e8.nar(), &[1, 2, 4, 7, 8, 11, 13, 14]);
        let dt = family(&FamilySpec::DT(4)).unwrap();
        assert_eq!(dt.nar(), &[1, 3, 5, 7]);
        let f = family(&FamilySpec::Fermat { d: 7, n: 3 }).unwrap();
        assert_eq!(f.nu(), 4);
        assert!(family(&FamilySpec::A(1)).is_err());
        for s in ["A:5", "DT:4", "E6", "E7", "E8", "Fermat:7,3"] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("Fermat:3,3".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn sectors() {
        let w = ws("9;2,3");
        let s = sector_data(&w, 2).unwrap();
        assert_eq!(s.thetas, vec![q(4, 9), q(6, 9)]);
        assert_eq!(s.mu, q(1, 9));
        assert_eq!(s.deg, q(5, 9));
        let s1 = sector_data(&w, 1).unwrap();
        assert_eq!(s1.deg, q(0, 1));
        assert_eq!(s1.mu, -Rational::from(w.c_hat() / 2u32));
        assert_eq!(sector_data(&w, 3), Err(Error::NotNarrow(3)));
    }

    #[test]
    fn mir_and_tau() {
        let q11 = ws("18;7,4,6");
        let mut expect = q11.nar().to_vec();
        expect.retain(|&m| m != 17);
        assert_eq!(mir_set(&q11).unwrap(), expect);
        let f = family(&FamilySpec::Fermat { d: 7, n: 3 }).unwrap();
        let tau = tau_coefficients(&f).unwrap();
        assert_eq!(tau.into_iter().collect::<Vec<_>>(), vec![(2, q(1, 1))]);
        let f = family(&FamilySpec::Fermat { d: 4, n: 3 }).unwrap();
        let tau = tau_coefficients(&f).unwrap();
        assert_eq!(tau[&2], q(1, 1));
        assert_eq!(tau[&1], q(1, 24 * 64));
        let dt = family(&FamilySpec::DT(5)).unwrap();
        assert_eq!(tau_prime(&dt).unwrap()[&3], q(1, 2));
    }

    #[test]
    fn principal_values() {
        let t = principal_t(&ws("5;1"), 128).unwrap().to_f64();
        assert!((t - 4.0 * 5f64.powf(-1.25)).abs() < 1e-15);
        let t = principal_t(&ws("9;2,3"), 128).unwrap().to_f64();
        assert!((t - 4.0 / 9.0 * (4.0f64 / 2187.0).powf(0.25)).abs() < 1e-15);
        assert!((t - 0.0919116).abs() < 1e-7);
        assert!(principal_t(&ws("3;1,1,1"), 64).is_err());
    }
}

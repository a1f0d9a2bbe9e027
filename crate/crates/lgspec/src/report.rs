//! Reports (schema version 1) and the pipelines behind each CLI subcommand.
//!
//! Numbers are rendered as strings: exact rationals as `p/q`, floats with
//! the decimal digits their precision carries, complex values as `[re, im]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classes::{asymptotic_class, chern_stab, classes_checks, gamma_class, NarrowVectorNumeric};
use crate::error::{Error, Result};
use crate::exact::{decimal_digits, float_to_decimal, ApComplex};
use crate::gram::{gram_checks, gram_data};
use crate::hyper::{
    barnes_samples, build_hg_system, hyper_checks, shifted_tuples, theta_exponent, HypergeomSystem,
};
use crate::quantum::{build_quantum_algebra, char_poly, check_spectrum_conjecture, verify_quantum_relation};
use crate::weights::{mir_set, parse_input, principal_t, sector_data, tau_coefficients, tau_prime, FamilySpec};

pub const SCHEMA_VERSION: &str = "1";

/// Default grid for the Barnes decay check.
pub const DEFAULT_X_GRID: [u32; 4] = [25, 50, 100, 200];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(rename = "schemaVersion")]
    pub schema_version: String,
    pub input: String,
    pub sections: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, Verdict>,
}

impl Report {
    pub fn new(input: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            input: input.into(),
            sections: BTreeMap::new(),
            verdicts: BTreeMap::new(),
        }
    }

    pub fn section(&mut self, name: &str, v: Value) {
        self.sections.insert(name.to_string(), v);
    }

    pub fn verdict(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.verdicts.insert(name.into(), Verdict { status, detail: detail.into() });
    }

    fn absorb(&mut self, checks: Vec<(String, bool, String)>) {
        for (name, ok, detail) in checks {
            self.verdict(name, ok, detail);
        }
    }

    /// Record a failed computation as a failing verdict.
    fn absorb_result(&mut self, name: &str, r: Result<Vec<(String, bool, String)>>) {
        match r {
            Ok(c) => self.absorb(c),
            Err(e) => self.verdict(name, false, e.to_string()),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|v| v.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input: {}", self.input);
        for (name, v) in &self.sections {
            let _ = writeln!(out, "\n[{name}]");
            render_text(&mut out, v);
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(out, "\n[verdicts]");
            let width = self.verdicts.keys().map(|k| k.len()).max().unwrap_or(0);
            for (name, v) in &self.verdicts {
                let tag = if v.status == Status::Pass { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{tag}  {name:<width$}  {}", v.detail);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Text => r.to_text(),
        Format::Json => r.to_json(),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = a.iter().map(scalar_text).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn render_text(out: &mut String, v: &Value) {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, x) in map {
                if is_matrix(x) {
                    let _ = writeln!(out, "{k}:");
                    render_matrix(out, x);
                } else {
                    let _ = writeln!(out, "{k:<width$}  {}", scalar_text(x));
                }
            }
        }
        x if is_matrix(x) => render_matrix(out, x),
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for x in a {
                let _ = writeln!(out, "{}", scalar_text(x));
            }
        }
        x => {
            let _ = writeln!(out, "{}", scalar_text(x));
        }
    }
}

fn is_matrix(v: &Value) -> bool {
    matches!(v, Value::Array(rows) if !rows.is_empty()
        && rows.iter().all(|r| matches!(r, Value::Array(c) if c.iter().all(|x| x.is_string()))))
}

fn render_matrix(out: &mut String, v: &Value) {
    let rows: Vec<Vec<String>> = v
        .as_array()
        .map(|rows| rows.iter().map(|r| r.as_array().map(|c| c.iter().map(scalar_text).collect()).unwrap_or_default()).collect())
        .unwrap_or_default();
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.len()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let cells: Vec<String> = r.iter().enumerate().map(|(j, s)| format!("{s:>w$}", w = widths[j])).collect();
        let _ = writeln!(out, "  {}", cells.join("  "));
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn float(x: &Float) -> Value {
    Value::String(float_to_decimal(x, decimal_digits(x.prec())))
}

pub fn complex(z: &ApComplex) -> Value {
    json!([float(z.re()), float(z.im())])
}

pub fn int_matrix(m: &[Vec<i128>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect())
}

pub fn ints<T: ToString>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn numeric_vector(v: &NarrowVectorNumeric) -> Value {
    Value::Object(v.coeffs().iter().map(|(m, z)| (format!("e{m}"), complex(z))).collect())
}

/// Options shared by every pipeline.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub precision: u32,
    pub tol: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { precision: 128, tol: 1e-9 }
    }
}

/// Whether an error stems from the input rather than from a computation.
pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::GcdViolation(_)
            | Error::EmptyWeights
            | Error::InvalidParameter(_)
            | Error::UnsupportedFamily(_)
            | Error::NotGeneralType(_)
            | Error::NotNarrow(_)
    )
}

fn parse_family(text: &str) -> Result<FamilySpec> {
    let (_, spec) = parse_input(text)?;
    spec.ok_or_else(|| Error::UnsupportedFamily(format!("`{text}` is not a named family")))
}

pub fn run_info(input: &str, opts: &RunOptions) -> Result<Report> {
    let (ws, spec) = parse_input(input)?;
    let mut r = Report::new(input.trim());
    let mut info = serde_json::Map::new();
    info.insert("system".into(), Value::String(ws.to_string()));
    if let Some(s) = &spec {
        info.insert("family".into(), Value::String(s.to_string()));
    }
    info.insert("nu".into(), Value::String(ws.nu().to_string()));
    info.insert("c_hat".into(), rat(ws.c_hat()));
    info.insert("nar".into(), ints(ws.nar()));
    info.insert("combinatorics_only".into(), Value::String(ws.combinatorics_only().to_string()));
    if ws.nu() > 0 {
        info.insert("mir".into(), ints(&mir_set(&ws)?));
        info.insert("T".into(), float(&principal_t(&ws, opts.precision)?));
        let tau = tau_coefficients(&ws)?;
        r.section("tau", Value::Object(tau.iter().map(|(m, c)| (format!("e{m}"), rat(c))).collect()));
        let tp = tau_prime(&ws)?;
        r.section("tau_prime", Value::Object(tp.iter().map(|(m, c)| (format!("e{m}"), rat(c))).collect()));
    }
    r.section("info", Value::Object(info));
    let mut rows = vec![ints(&["m", "mu", "deg"])];
    for &m in ws.nar() {
        let s = sector_data(&ws, m)?;
        rows.push(json!([m.to_string(), s.mu.to_string(), s.deg.to_string()]));
    }
    r.section("sectors", Value::Array(rows));
    Ok(r)
}

fn hg_section(hs: &HypergeomSystem) -> Result<Value> {
    let mut shifted = serde_json::Map::new();
    for &m in hs.ws().nar() {
        let (a, b) = shifted_tuples(hs, m)?;
        shifted.insert(format!("m{m:02}"), json!({"alpha": rats(&a), "rho": rats(&b)}));
    }
    Ok(json!({
        "p": hs.p().to_string(),
        "q": hs.q().to_string(),
        "alpha": rats(hs.alpha()),
        "rho": rats(hs.rho()),
        "theta": rat(&theta_exponent(hs)?),
        "shifted": Value::Object(shifted),
    }))
}

pub fn run_hypergeom(input: &str, opts: &RunOptions) -> Result<Report> {
    let (ws, _) = parse_input(input)?;
    let hs = build_hg_system(&ws)?;
    let mut r = Report::new(input.trim());
    r.section("hypergeom", hg_section(&hs)?);
    r.absorb(hyper_checks(&ws, opts.precision, &[])?);
    Ok(r)
}

pub fn run_gram(input: &str, _opts: &RunOptions) -> Result<Report> {
    let (ws, _) = parse_input(input)?;
    ws.require_general_type()?;
    let g = gram_data(&ws)?;
    let mut r = Report::new(input.trim());
    r.section("a", ints(&g.a));
    r.section("partitions", ints(&g.partitions));
    r.section("gram_matrix", int_matrix(&g.m));
    r.section("gram_inverse", int_matrix(&g.m_inv));
    r.section("stokes", ints(&g.stokes));
    r.absorb(gram_checks(&ws)?);
    Ok(r)
}

pub fn run_gamma(input: &str, ell: i64, opts: &RunOptions) -> Result<Report> {
    let (ws, _) = parse_input(input)?;
    ws.require_general_type()?;
    let prec = opts.precision;
    let mut r = Report::new(input.trim());
    let ch = chern_stab(&ws, ell);
    r.section("chern", Value::Object(ch.coeffs().iter().map(|(m, c)| (format!("e{m}"), Value::String(c.to_string()))).collect()));
    let g = gamma_class(&ws, ell, prec + 32)?;
    let a = asymptotic_class(&ws, ell, prec + 32)?;
    let gap = g.dist_inf(&a)?;
    r.section("gamma_class", numeric_vector(&gamma_class(&ws, ell, prec)?));
    r.section("asymptotic_class", numeric_vector(&asymptotic_class(&ws, ell, prec)?));
    let tol = Float::with_val(prec, Float::i_exp(1, 24 - prec as i32));
    r.verdict("classes.gamma_equals_asymptotic.ell", gap <= tol, format!("sup distance {:.3e} at l = {ell}", gap.to_f64()));
    r.absorb(classes_checks(&ws, prec)?);
    Ok(r)
}

pub fn run_spectrum(input: &str, opts: &RunOptions) -> Result<Report> {
    let spec = parse_family(input)?;
    let qa = build_quantum_algebra(&spec)?;
    let mut r = Report::new(input.trim());
    let rep = check_spectrum_conjecture(&qa, opts.precision, opts.tol)?;
    let mat: Vec<Value> = qa.mat_x.iter().map(|row| rats(row)).collect();
    r.section("basis", ints(&qa.basis_labels));
    r.section("matrix", Value::Array(mat));
    r.section(
        "spectrum",
        json!({
            "scale": rat(&qa.scale),
            "char_poly": char_poly(&qa).to_string(),
            "T": float(&rep.t),
            "principal": rep.principal().map(complex).unwrap_or(Value::Null),
            "broad_zero_count": qa.broad_zero_count.to_string(),
            "total_dimension": rep.total_dimension.to_string(),
            "informational": rep.informational.to_string(),
            "tolerance": format!("{:e}", rep.tolerance),
        }),
    );
    let eig: Vec<Value> = rep
        .eigenvalues
        .iter()
        .map(|(z, m)| json!({"value": complex(z), "multiplicity": m.to_string()}))
        .collect();
    r.section("eigenvalues", Value::Array(eig));
    let note = if rep.informational { "informational" } else { "" };
    r.verdict("spectrum.max_modulus", rep.max_modulus_ok || rep.informational, note);
    r.verdict("spectrum.root_of_unity_set", rep.root_of_unity_set_ok || rep.informational, note);
    r.verdict("spectrum.multiplicity_one", rep.multiplicity_one_ok || rep.informational, note);
    r.verdict("spectrum.rotation_closure", rep.closure_ok || rep.informational, note);
    match verify_quantum_relation(&qa) {
        Ok(rels) => {
            for rel in rels {
                r.verdict(format!("relation.{}", rel.name), true, rel.statement);
            }
        }
        Err(e) => r.verdict("relation", false, e.to_string()),
    }
    Ok(r)
}

pub fn run_asymptotics(input: &str, ell: Option<i64>, grid: &[u32], opts: &RunOptions) -> Result<Report> {
    let (ws, _) = parse_input(input)?;
    let hs = build_hg_system(&ws)?;
    let nu = ws.nu();
    if let Some(l) = ell {
        if l > 0 || l <= -nu {
            return Err(Error::InvalidParameter(format!("l must lie in {}..=0", 1 - nu)));
        }
    }
    let mut r = Report::new(input.trim());
    let samples = barnes_samples(&hs, grid, opts.precision)?;
    let mut rows = Vec::new();
    let mut max_work = 0;
    for s in samples.iter().filter(|s| ell.is_none_or(|l| s.ell == l)) {
        max_work = max_work.max(s.working_precision);
        rows.push(json!({
            "l": s.ell.to_string(),
            "x": s.x.to_string(),
            "ratio": complex(&s.ratio),
            "deviation": format!("{:.6e}", s.deviation),
            "bound": format!("{:.6e}", s.bound),
            "working_precision": s.working_precision.to_string(),
        }));
        r.verdict(format!("barnes.decay.l{}.x{}", s.ell, s.x), s.deviation <= s.bound, format!("|ratio - 1| = {:.3e}", s.deviation));
    }
    r.section("barnes", Value::Array(rows));
    r.section("precision", json!({"requested": opts.precision.to_string(), "max_working": max_work.to_string()}));
    Ok(r)
}

/// Every applicable check for a weight system or family.
pub fn run_verify(input: &str, opts: &RunOptions) -> Result<Report> {
    let (ws, spec) = parse_input(input)?;
    let mut r = Report::new(input.trim());
    let prec = opts.precision;
    r.section("info", json!({"system": ws.to_string(), "nu": ws.nu().to_string()}));
    ws.require_general_type()?;
    let sectors: Result<Vec<_>> = ws.nar().iter().map(|&m| sector_data(&ws, m)).collect();
    r.verdict("weights.sector_grading", sectors.is_ok(), sectors.err().map(|e| e.to_string()).unwrap_or_default());
    let tau = tau_coefficients(&ws);
    r.verdict("weights.tau_nonzero", tau.is_ok(), tau.err().map(|e| e.to_string()).unwrap_or_default());
    r.absorb_result("gram", gram_checks(&ws));
    r.absorb_result("classes", classes_checks(&ws, prec));
    r.absorb_result("hyper", hyper_checks(&ws, prec, &DEFAULT_X_GRID));
    if let Some(spec) = spec.filter(|s| *s != FamilySpec::Custom) {
        match run_spectrum(&spec.to_string(), opts) {
            Ok(sr) => {
                for (k, v) in sr.verdicts {
                    r.verdicts.insert(k, v);
                }
            }
            Err(e) => r.verdict("spectrum", false, e.to_string()),
        }
    }
    Ok(r)
}

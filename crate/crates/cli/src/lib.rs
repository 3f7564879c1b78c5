//! Input parsing, output shaping, and the command implementations behind the
//! torsolve binary. Documents are JSON: an ambient dimension `n`, an optional
//! list of polynomials given term by term with exact rational coefficients,
//! and an optional distinguished torsion point. Reports serialize
//! deterministically (sorted object keys, canonical term order), so equal
//! inputs produce byte-identical output.

use std::collections::BTreeSet;
use std::str::FromStr;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use torsolve_core::{
    analytic_cutoff, brute_force_torsion, coset_certificate, decompose, order_bound, solve,
    LaurentPolynomial, SolveOptions, TorsionCoset, TorsionDecomposition, TorsionPoint,
    TorsionReport, VarietySystem,
};

/// A user-input problem: what was wrong and where. Always exits with code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub context: String,
    pub message: String,
}

impl CliError {
    pub fn new(context: impl Into<String>, message: impl Into<String>) -> Self {
        CliError {
            context: context.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.context, self.message)
    }
}

impl std::error::Error for CliError {}

fn fail<T>(context: impl Into<String>, message: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::new(context, message))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Parsed input document.
#[derive(Debug)]
pub struct Document {
    pub nvars: usize,
    pub system: Option<VarietySystem>,
    pub point: Option<TorsionPoint>,
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| CliError::new("input", format!("invalid JSON: {e}")))?;
    let Value::Object(obj) = &root else {
        return fail("input", "expected a JSON object");
    };
    for key in obj.keys() {
        if !matches!(key.as_str(), "n" | "polynomials" | "point") {
            return fail(key.clone(), "unknown field");
        }
    }
    let nvars = match obj.get("n").and_then(Value::as_u64) {
        Some(v) if v >= 1 => v as usize,
        _ => return fail("n", "required integer, at least 1"),
    };
    let system = match obj.get("polynomials") {
        None => None,
        Some(value) => Some(parse_system(nvars, value)?),
    };
    let point = match obj.get("point") {
        None => None,
        Some(value) => Some(parse_point(nvars, value)?),
    };
    Ok(Document {
        nvars,
        system,
        point,
    })
}

fn parse_system(nvars: usize, value: &Value) -> Result<VarietySystem, CliError> {
    let Value::Array(entries) = value else {
        return fail("polynomials", "expected an array");
    };
    if entries.is_empty() {
        return fail("polynomials", "needs at least one polynomial");
    }
    let mut polys = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        let path = format!("polynomials[{i}]");
        let Value::Object(obj) = entry else {
            return fail(path, "expected an object");
        };
        let Some(Value::Array(terms)) = obj.get("terms") else {
            return fail(format!("{path}.terms"), "required array of terms");
        };
        let mut poly = LaurentPolynomial::new(nvars);
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        for (j, term) in terms.iter().enumerate() {
            let tpath = format!("{path}.terms[{j}]");
            let Value::Object(tobj) = term else {
                return fail(tpath, "expected an object");
            };
            let coeff = parse_coefficient(&format!("{tpath}.coeff"), tobj.get("coeff"))?;
            let exps = parse_int_array(&format!("{tpath}.exps"), nvars, tobj.get("exps"))?;
            if !seen.insert(exps.clone()) {
                return fail(tpath, "duplicate exponent");
            }
            poly.insert(exps, coeff)
                .map_err(|e| CliError::new(&tpath, e.to_string()))?;
        }
        if poly.is_zero() {
            return fail(path, "polynomial is zero");
        }
        polys.push(poly);
    }
    VarietySystem::new(nvars, polys)
        .map_err(|e| CliError::new("polynomials", e.to_string()))
}

fn parse_coefficient(path: &str, value: Option<&Value>) -> Result<BigRational, CliError> {
    match value {
        Some(Value::Number(num)) => match num.as_i64() {
            Some(v) => Ok(BigRational::from_integer(BigInt::from(v))),
            None => fail(path, "integer out of range; use a string like \"p/q\""),
        },
        Some(Value::String(text)) => {
            let (numer, denom) = match text.split_once('/') {
                Some((a, b)) => (a, b),
                None => (text.as_str(), "1"),
            };
            let numer = BigInt::from_str(numer.trim())
                .map_err(|_| CliError::new(path, format!("bad numerator in {text:?}")))?;
            let denom = BigInt::from_str(denom.trim())
                .map_err(|_| CliError::new(path, format!("bad denominator in {text:?}")))?;
            if denom.is_zero() {
                return fail(path, "zero denominator");
            }
            Ok(BigRational::new(numer, denom))
        }
        _ => fail(path, "required integer or rational string like \"3/7\""),
    }
}

fn parse_int_array(path: &str, expected: usize, value: Option<&Value>) -> Result<Vec<i64>, CliError> {
    let Some(Value::Array(entries)) = value else {
        return fail(path, format!("required array of {expected} integers"));
    };
    if entries.len() != expected {
        return fail(
            path,
            format!("expected {expected} entries, found {}", entries.len()),
        );
    }
    entries
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_i64()
                .ok_or_else(|| CliError::new(format!("{path}[{i}]"), "expected an integer"))
        })
        .collect()
}

fn parse_point(nvars: usize, value: &Value) -> Result<TorsionPoint, CliError> {
    let Value::Object(obj) = value else {
        return fail("point", "expected an object");
    };
    let order = match obj.get("order").and_then(Value::as_u64) {
        Some(v) if v >= 1 => v,
        _ => return fail("point.order", "required integer, at least 1"),
    };
    let exps = parse_int_array("point.exponents", nvars, obj.get("exponents"))?;
    TorsionPoint::canonicalize(order, &exps)
        .map_err(|e| CliError::new("point", e.to_string()))
}

pub fn point_value(p: &TorsionPoint) -> Value {
    json!({ "order": p.order(), "exponents": p.exponents() })
}

/// Direction matrix with one row per torus coordinate; the core stores the
/// basis column by column.
fn direction_rows(c: &TorsionCoset) -> Vec<Vec<i64>> {
    let cols = c.directions();
    (0..c.ambient_dim())
        .map(|i| cols.iter().map(|col| col[i]).collect())
        .collect()
}

pub fn coset_value(c: &TorsionCoset) -> Value {
    json!({
        "translate": point_value(c.translate()),
        "directions": direction_rows(c),
    })
}

pub fn report_value(r: &TorsionReport) -> Value {
    json!({
        "isolated_points": r.isolated_points.iter().map(point_value).collect::<Vec<_>>(),
        "cosets": r.cosets.iter().map(coset_value).collect::<Vec<_>>(),
        "scanned_cap": r.scanned_cap,
        "certified_bound": r.certified_bound,
        "complete": r.complete,
        "budget_exceeded": r.budget_exceeded,
        "diagnostic": r.diagnostic,
    })
}

pub fn system_value(s: &VarietySystem) -> Value {
    let polys: Vec<Value> = s
        .polynomials()
        .iter()
        .map(|p| {
            let terms: Vec<Value> = p
                .terms()
                .map(|(exps, coeff)| {
                    json!({ "coeff": rational_string(coeff), "exps": exps })
                })
                .collect();
            json!({ "terms": terms })
        })
        .collect();
    json!({ "n": s.nvars(), "polynomials": polys })
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn point_text(p: &TorsionPoint) -> String {
    let exps: Vec<String> = p.exponents().iter().map(u64::to_string).collect();
    format!("order {}, exponents ({})", p.order(), exps.join(", "))
}

fn coset_text(c: &TorsionCoset) -> String {
    let rows: Vec<String> = direction_rows(c)
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!(
        "translate {}; directions {}",
        point_text(c.translate()),
        rows.join(" ")
    )
}

pub fn report_text(r: &TorsionReport) -> String {
    let mut lines = Vec::new();
    lines.push(format!("isolated points: {}", r.isolated_points.len()));
    for p in &r.isolated_points {
        lines.push(format!("  {}", point_text(p)));
    }
    lines.push(format!("cosets: {}", r.cosets.len()));
    for c in &r.cosets {
        lines.push(format!("  {}", coset_text(c)));
    }
    lines.push(format!(
        "scanned orders up to {}; certified bound {}; {}",
        r.scanned_cap,
        r.certified_bound,
        if r.complete { "complete" } else { "incomplete" }
    ));
    if let Some(diag) = &r.diagnostic {
        lines.push(format!("note: {diag}"));
    }
    lines.join("\n")
}

fn render(format: OutputFormat, value: Value, text: String) -> String {
    match format {
        OutputFormat::Json => value.to_string(),
        OutputFormat::Text => text,
    }
}

fn require_system<'a>(doc: &'a Document, command: &str) -> Result<&'a VarietySystem, CliError> {
    doc.system
        .as_ref()
        .ok_or_else(|| CliError::new(command, "input document must contain \"polynomials\""))
}

fn require_point<'a>(doc: &'a Document, command: &str) -> Result<&'a TorsionPoint, CliError> {
    doc.point
        .as_ref()
        .ok_or_else(|| CliError::new(command, "input document must contain \"point\""))
}

pub fn cmd_solve(
    doc: &Document,
    options: &SolveOptions,
    format: OutputFormat,
) -> Result<(String, i32), CliError> {
    let system = require_system(doc, "solve")?;
    let report = solve(system, options).map_err(|e| CliError::new("solve", e.to_string()))?;
    let code = if report.budget_exceeded { 3 } else { 0 };
    let out = render(format, report_value(&report), report_text(&report));
    Ok((out, code))
}

pub fn cmd_enumerate(
    doc: &Document,
    cap: u64,
    format: OutputFormat,
) -> Result<(String, i32), CliError> {
    let system = require_system(doc, "enumerate")?;
    let points = brute_force_torsion(system, cap)
        .map_err(|e| CliError::new("enumerate", e.to_string()))?;
    let value = json!({
        "cap": cap,
        "points": points.iter().map(point_value).collect::<Vec<_>>(),
    });
    let mut lines = vec![format!("torsion points up to order {cap}: {}", points.len())];
    for p in &points {
        lines.push(format!("  {}", point_text(p)));
    }
    Ok((render(format, value, lines.join("\n")), 0))
}

pub fn cmd_certify(doc: &Document, format: OutputFormat) -> Result<(String, i32), CliError> {
    let system = require_system(doc, "certify")?;
    let point = require_point(doc, "certify")?;
    let certificate =
        coset_certificate(system, point).map_err(|e| CliError::new("certify", e.to_string()))?;
    let value = json!({
        "point": point_value(point),
        "certificate": certificate.as_ref().map(coset_value),
    });
    let text = match &certificate {
        Some(c) => format!("certified coset: {}", coset_text(c)),
        None => "no coset certificate; the point may be isolated".to_string(),
    };
    Ok((render(format, value, text), 0))
}

fn decomposition_value(dec: &TorsionDecomposition) -> Value {
    json!({
        "modulus": dec.modulus,
        "translate_order": dec.translate_order,
        "unit": dec.unit,
        "directions": dec.directions,
        "translate": dec.translate,
    })
}

pub fn cmd_decompose(doc: &Document, format: OutputFormat) -> Result<(String, i32), CliError> {
    let point = require_point(doc, "decompose")?;
    if point.order() < 2 {
        return fail("decompose", "point must have order at least 2");
    }
    let dec = decompose(&point.signed_exponents(), point.order())
        .map_err(|e| CliError::new("decompose", e.to_string()))?;
    let text = format!(
        "order {} splits as translate {:?} of order {} and direction {:?} with unit {}",
        dec.modulus, dec.translate, dec.translate_order, dec.directions, dec.unit
    );
    Ok((render(format, decomposition_value(&dec), text), 0))
}

pub fn cmd_bound(doc: &Document, format: OutputFormat) -> Result<(String, i32), CliError> {
    let system = require_system(doc, "bound")?;
    let bound = order_bound(system.nvars(), system.degree_max())
        .map_err(|e| CliError::new("bound", e.to_string()))?;
    let cutoff = analytic_cutoff(system.nvars(), system.degree_max())
        .map_err(|e| CliError::new("bound", e.to_string()))?;
    let value = json!({
        "nvars": system.nvars(),
        "degree_max": system.degree_max(),
        "certified_bound": bound,
        "analytic_cutoff": cutoff,
    });
    let text = format!(
        "certified bound {bound} for dimension {} and degree {} (scan cutoff {cutoff})",
        system.nvars(),
        system.degree_max()
    );
    Ok((render(format, value, text), 0))
}

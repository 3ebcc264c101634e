//! Interchange formats: CSV for gridded/sampled data, JSON for models
//! and reports.
//!
//! All floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every finite f64 exactly; files are diff-able and
//! language-neutral. This module is pure string codecs — callers own the
//! filesystem so that parse failures and I/O failures stay distinct.
//!
//! Formats:
//! * sample set CSV: header `n,x`, one row per index
//! * sampled values CSV: header `n,x,re,im`
//! * correlator grid CSV: header `omega,c,re,im,abs`, row-major over (ω, c)
//! * sampled function CSV: header `t,re,im`, uniform `t` grid
//! * chirp polynomial JSON: `[{"amp_re", "amp_im", "omega", "rate", "offset"}, …]`
//! * nonlinear chirp JSON: `{"amp_re", "amp_im", "phase_coeffs": [p0, …, pm]}`
//! * reconstruction report JSON: `{"components": [{"amp_re", "amp_im",
//!   "omega0", "rate"}, …], "residual_peak", "epsilon", "iterations",
//!   "converged"}`

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chirp_model::{
    CanonicalChirp, ChirpComponent, ChirpPolynomial, NonlinearChirp, PolynomialPhase,
};
use crate::correlator::CorrelatorGrid;
use crate::frft::SampledFunction;
use crate::reconstruction::ReconstructionReport;
use crate::sampling::{SamplePoint, SampleSet, SamplingConfig};
use crate::{Error, Result};

/// 17-significant-digit decimal; round-trip exact for f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("line {line}: bad float {field:?}: {e}")))
}

fn parse_i64(field: &str, line: usize) -> Result<i64> {
    field
        .trim()
        .parse::<i64>()
        .map_err(|e| Error::Parse(format!("line {line}: bad integer {field:?}: {e}")))
}

fn split_row<const N: usize>(row: &str, line: usize) -> Result<[&str; N]> {
    let fields: Vec<&str> = row.split(',').collect();
    fields.try_into().map_err(|_| {
        Error::Parse(format!(
            "line {line}: expected {N} comma-separated fields, got {row:?}"
        ))
    })
}

fn expect_header(content: &str, header: &str) -> Result<()> {
    match content.lines().next() {
        Some(first) if first.trim() == header => Ok(()),
        other => Err(Error::Parse(format!(
            "expected header {header:?}, got {other:?}"
        ))),
    }
}

// ── sample set CSV ──────────────────────────────────────────────────

pub fn sample_set_to_csv(samples: &SampleSet) -> String {
    let mut out = String::from("n,x\n");
    for p in &samples.points {
        out.push_str(&format!("{},{}\n", p.index, format_f64(p.location)));
    }
    out
}

/// Parse a sample CSV. Indices must run `−L … L` contiguously; λ is
/// estimated from the mean spacing (it only feeds grid-resolution
/// heuristics downstream) and the seed is unknown, recorded as 0.
pub fn sample_set_from_csv(content: &str) -> Result<SampleSet> {
    expect_header(content, "n,x")?;
    let mut points = Vec::new();
    for (k, row) in content.lines().enumerate().skip(1) {
        if row.trim().is_empty() {
            continue;
        }
        let [n, x] = split_row::<2>(row, k + 1)?;
        points.push(SamplePoint {
            index: parse_i64(n, k + 1)?,
            location: parse_f64(x, k + 1)?,
        });
    }
    sample_set_from_points(points)
}

pub(crate) fn sample_set_from_points(points: Vec<SamplePoint>) -> Result<SampleSet> {
    if points.is_empty() {
        return Err(Error::Parse("sample CSV has no rows".into()));
    }
    if points.len() % 2 == 0 {
        return Err(Error::Parse(format!(
            "expected an odd point count (indices -L..L), got {}",
            points.len()
        )));
    }
    let l = (points.len() / 2) as i64;
    for (k, p) in points.iter().enumerate() {
        let expect = k as i64 - l;
        if p.index != expect {
            return Err(Error::Parse(format!(
                "sample indices must run {}..{} in order; row {} has index {}",
                -l,
                l,
                k + 2,
                p.index
            )));
        }
    }
    let lambda = if points.len() > 1 {
        (points[points.len() - 1].location - points[0].location) / (points.len() - 1) as f64
    } else {
        1.0
    };
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Parse(format!(
            "sample locations imply a non-positive spacing {lambda}"
        )));
    }
    Ok(SampleSet {
        config: SamplingConfig {
            lambda,
            seed: 0,
            half_window: l as u32,
        },
        points,
    })
}

// ── sampled values CSV ──────────────────────────────────────────────

pub fn values_to_csv(samples: &SampleSet, values: &[Complex64]) -> Result<String> {
    if values.len() != samples.len() {
        return Err(Error::Alignment {
            values: values.len(),
            samples: samples.len(),
        });
    }
    let mut out = String::from("n,x,re,im\n");
    for (p, v) in samples.points.iter().zip(values) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.index,
            format_f64(p.location),
            format_f64(v.re),
            format_f64(v.im)
        ));
    }
    Ok(out)
}

pub fn values_from_csv(content: &str) -> Result<(SampleSet, Vec<Complex64>)> {
    expect_header(content, "n,x,re,im")?;
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (k, row) in content.lines().enumerate().skip(1) {
        if row.trim().is_empty() {
            continue;
        }
        let [n, x, re, im] = split_row::<4>(row, k + 1)?;
        points.push(SamplePoint {
            index: parse_i64(n, k + 1)?,
            location: parse_f64(x, k + 1)?,
        });
        values.push(Complex64::new(parse_f64(re, k + 1)?, parse_f64(im, k + 1)?));
    }
    Ok((sample_set_from_points(points)?, values))
}

// ── correlator grid CSV ─────────────────────────────────────────────

pub fn grid_to_csv(grid: &CorrelatorGrid) -> String {
    let mut out = String::from("omega,c,re,im,abs\n");
    for i in 0..grid.omega_axis.count {
        for j in 0..grid.rate_axis.count {
            let p = grid.probe(i, j);
            let v = grid.value(i, j);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                format_f64(p.omega),
                format_f64(p.rate),
                format_f64(v.re),
                format_f64(v.im),
                format_f64(v.norm())
            ));
        }
    }
    out
}

// ── sampled function CSV ────────────────────────────────────────────

pub fn sampled_function_to_csv(f: &SampledFunction) -> String {
    let mut out = String::from("t,re,im\n");
    for (k, v) in f.values.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            format_f64(f.grid_point(k)),
            format_f64(v.re),
            format_f64(v.im)
        ));
    }
    out
}

pub fn sampled_function_from_csv(content: &str) -> Result<SampledFunction> {
    expect_header(content, "t,re,im")?;
    let mut ts = Vec::new();
    let mut values = Vec::new();
    for (k, row) in content.lines().enumerate().skip(1) {
        if row.trim().is_empty() {
            continue;
        }
        let [t, re, im] = split_row::<3>(row, k + 1)?;
        ts.push(parse_f64(t, k + 1)?);
        values.push(Complex64::new(parse_f64(re, k + 1)?, parse_f64(im, k + 1)?));
    }
    if ts.len() < 2 {
        return Err(Error::Parse("sampled function needs at least two rows".into()));
    }
    let step = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
    if !(step > 0.0) {
        return Err(Error::Parse(format!("grid is not increasing: step {step}")));
    }
    for (k, &t) in ts.iter().enumerate() {
        let expect = ts[0] + k as f64 * step;
        if (t - expect).abs() > 1e-9 * step.max(t.abs()) {
            return Err(Error::Parse(format!(
                "grid is not uniform at row {}: {t} vs expected {expect}",
                k + 2
            )));
        }
    }
    SampledFunction::new(ts[0], step, values)
}

// ── model JSON ──────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ComponentJson {
    amp_re: f64,
    amp_im: f64,
    omega: f64,
    rate: f64,
    offset: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct NonlinearJson {
    amp_re: f64,
    amp_im: f64,
    phase_coeffs: Vec<f64>,
}

/// A synthesizable signal model: linear chirp polynomial or one
/// polynomial-phase chirp.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalModel {
    Linear(ChirpPolynomial),
    Nonlinear(NonlinearChirp),
}

impl SignalModel {
    pub fn evaluate(&self, x: f64) -> Complex64 {
        match self {
            SignalModel::Linear(poly) => poly.evaluate(x),
            SignalModel::Nonlinear(nc) => nc.evaluate(x),
        }
    }
}

/// Accepts either model flavour: a JSON array is a chirp polynomial, an
/// object with `phase_coeffs` is a nonlinear chirp.
pub fn model_from_json(content: &str) -> Result<SignalModel> {
    let value: serde_json::Value =
        serde_json::from_str(content).map_err(|e| Error::Parse(format!("bad model JSON: {e}")))?;
    if value.is_array() {
        let comps: Vec<ComponentJson> = serde_json::from_value(value)
            .map_err(|e| Error::Parse(format!("bad chirp polynomial JSON: {e}")))?;
        let components = comps
            .into_iter()
            .map(|c| ChirpComponent::new(Complex64::new(c.amp_re, c.amp_im), c.omega, c.rate, c.offset))
            .collect();
        Ok(SignalModel::Linear(ChirpPolynomial::new(components)))
    } else if value.get("phase_coeffs").is_some() {
        let nc: NonlinearJson = serde_json::from_value(value)
            .map_err(|e| Error::Parse(format!("bad nonlinear chirp JSON: {e}")))?;
        Ok(SignalModel::Nonlinear(NonlinearChirp::new(
            Complex64::new(nc.amp_re, nc.amp_im),
            PolynomialPhase::new(nc.phase_coeffs)?,
        )))
    } else {
        Err(Error::Parse(
            "model JSON must be a component array or an object with phase_coeffs".into(),
        ))
    }
}

pub fn model_to_json(model: &SignalModel) -> String {
    match model {
        SignalModel::Linear(poly) => {
            let comps: Vec<ComponentJson> = poly
                .components
                .iter()
                .map(|c| ComponentJson {
                    amp_re: c.amplitude.re,
                    amp_im: c.amplitude.im,
                    omega: c.omega,
                    rate: c.rate,
                    offset: c.offset,
                })
                .collect();
            serde_json::to_string_pretty(&comps).expect("serializable")
        }
        SignalModel::Nonlinear(nc) => serde_json::to_string_pretty(&NonlinearJson {
            amp_re: nc.amplitude.re,
            amp_im: nc.amplitude.im,
            phase_coeffs: nc.phase.coefficients().to_vec(),
        })
        .expect("serializable"),
    }
}

// ── reconstruction report JSON ──────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CanonicalJson {
    amp_re: f64,
    amp_im: f64,
    omega0: f64,
    rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ReportJson {
    components: Vec<CanonicalJson>,
    residual_peak: f64,
    epsilon: f64,
    iterations: usize,
    converged: bool,
}

pub fn report_to_json(report: &ReconstructionReport) -> String {
    let json = ReportJson {
        components: report
            .components
            .iter()
            .map(|c| CanonicalJson {
                amp_re: c.amplitude.re,
                amp_im: c.amplitude.im,
                omega0: c.omega0,
                rate: c.rate,
            })
            .collect(),
        residual_peak: report.residual_peak,
        epsilon: report.epsilon,
        iterations: report.iterations,
        converged: report.converged,
    };
    serde_json::to_string_pretty(&json).expect("serializable")
}

pub fn report_from_json(content: &str) -> Result<ReconstructionReport> {
    let json: ReportJson =
        serde_json::from_str(content).map_err(|e| Error::Parse(format!("bad report JSON: {e}")))?;
    Ok(ReconstructionReport {
        components: json
            .components
            .iter()
            .map(|c| CanonicalChirp::new(Complex64::new(c.amp_re, c.amp_im), c.omega0, c.rate))
            .collect(),
        residual_peak: json.residual_peak,
        epsilon: json.epsilon,
        iterations: json.iterations,
        converged: json.converged,
        residual_trace: Vec::new(),
    })
}

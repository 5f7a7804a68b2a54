//! Subcommand implementations over the library API.
//!
//! Each command produces a typed payload that the output module renders.
//! Errors are surfaced as strings; the caller maps them to the config-error
//! exit code.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use disk_cauchy::{
    c_q, c_q_parts, run_suite, DiskIntegral, DiskPoint, Error, GridResolution, ScalarField,
    SuiteResult,
};

/// A transform of a density evaluated at one disk point.
pub type PointOp = fn(&ScalarField, DiskPoint, f64) -> Result<DiskIntegral, Error>;

pub enum Payload {
    Constants(ConstantsResult),
    Curve(CurveResult),
    Samples(SampleResult),
    Verify(SuiteResult),
}

#[derive(Serialize)]
pub struct ConstantsResult {
    pub q: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C_q")]
    pub c_q: f64,
    pub tail_bound: f64,
}

#[derive(Serialize)]
pub struct CurveRow {
    pub q: f64,
    #[serde(rename = "C_q")]
    pub c_q: f64,
    pub tail_bound: f64,
}

#[derive(Serialize)]
pub struct CurveResult {
    pub rows: Vec<CurveRow>,
}

#[derive(Serialize)]
pub struct GridMeta {
    pub radial: usize,
    pub angular: usize,
}

#[derive(Serialize)]
pub struct SampleRow {
    pub r: f64,
    pub theta: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize)]
pub struct SampleResult {
    pub grid: GridMeta,
    pub rows: Vec<SampleRow>,
}

pub fn constants(q: f64, tol: f64) -> Result<ConstantsResult, String> {
    let report = c_q(q, tol).map_err(|e| e.to_string())?;
    let (a, b) = c_q_parts(q, tol).map_err(|e| e.to_string())?;
    Ok(ConstantsResult {
        q,
        a: a.value,
        b: b.value,
        c_q: report.exact_value,
        tail_bound: report.tail_bound,
    })
}

pub fn cq_curve(from: f64, to: f64, steps: usize, tol: f64) -> Result<CurveResult, String> {
    if steps == 0 {
        return Err("steps must be at least 1".to_string());
    }
    if !(from <= to) {
        return Err(format!("empty exponent range: from={from}, to={to}"));
    }
    // Pin the endpoints exactly so the policy window check cannot trip on
    // the rounding of from + (to - from).
    let exponents: Vec<f64> = (0..steps)
        .map(|i| {
            if i == steps - 1 {
                to
            } else {
                from + (to - from) * i as f64 / (steps - 1).max(1) as f64
            }
        })
        .collect();
    let rows: Vec<Result<CurveRow, Error>> = exponents
        .into_par_iter()
        .map(|q| {
            let report = c_q(q, tol)?;
            Ok(CurveRow {
                q,
                c_q: report.exact_value,
                tail_bound: report.tail_bound,
            })
        })
        .collect();
    let rows = rows
        .into_iter()
        .collect::<Result<Vec<CurveRow>, Error>>()
        .map_err(|e| e.to_string())?;
    Ok(CurveResult { rows })
}

pub fn sample_grid(g: &str, grid: &str, tol: f64, op: PointOp) -> Result<SampleResult, String> {
    let field = ScalarField::from_id(g).map_err(|e| e.to_string())?;
    let (radial, angular) = parse_grid(grid)?;
    let resolution = GridResolution { radial, angular };
    let mut nodes = Vec::with_capacity(radial * angular);
    for r in resolution.radii() {
        for j in 0..angular {
            nodes.push((r, TAU * j as f64 / angular as f64));
        }
    }
    let values: Vec<Result<Complex64, Error>> = nodes
        .par_iter()
        .map(|&(r, theta)| {
            let z = DiskPoint::new(Complex64::from_polar(r, theta))?;
            Ok(op(&field, z, tol)?.value)
        })
        .collect();
    let mut rows = Vec::with_capacity(nodes.len());
    for ((r, theta), value) in nodes.into_iter().zip(values) {
        let value = value.map_err(|e| e.to_string())?;
        rows.push(SampleRow {
            r,
            theta,
            re: value.re,
            im: value.im,
        });
    }
    Ok(SampleResult {
        grid: GridMeta { radial, angular },
        rows,
    })
}

pub fn verify(suite: &str, samples: usize, seed: u64, tol: f64) -> Result<SuiteResult, String> {
    run_suite(suite, samples, seed, tol).map_err(|e| e.to_string())
}

fn parse_grid(grid: &str) -> Result<(usize, usize), String> {
    let bad = || format!("grid must look like 64x128, got {grid:?}");
    let (radial, angular) = grid.split_once('x').ok_or_else(bad)?;
    let radial: usize = radial.trim().parse().map_err(|_| bad())?;
    let angular: usize = angular.trim().parse().map_err(|_| bad())?;
    if radial == 0 || angular == 0 {
        return Err("grid resolution must be positive in both directions".to_string());
    }
    Ok((radial, angular))
}

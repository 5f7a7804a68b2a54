//! Artifact rendering.
//!
//! Every run emits exactly one artifact, a JSON document or a CSV table,
//! and the artifact embeds the fully resolved run configuration. An output
//! can therefore be reproduced from its own header, and two runs with the
//! same configuration produce byte-identical artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use disk_cauchy::{CheckStatus, SuiteResult};

use crate::commands::{ConstantsResult, CurveResult, Payload, SampleResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn id(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// The resolved configuration of a run: command, named parameters, and the
/// global options after defaulting. Echoed verbatim into every artifact.
#[derive(Serialize)]
pub struct RunConfig {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub output_path: String,
    pub format: String,
    pub seed: u64,
    pub tolerance: f64,
}

pub fn render(config: &RunConfig, payload: &Payload, format: Format) -> String {
    match format {
        Format::Json => render_json(config, payload),
        Format::Csv => render_csv(config, payload),
    }
}

pub fn write_artifact(path: Option<&Path>, rendered: &str) -> io::Result<()> {
    match path {
        Some(path) => fs::write(path, rendered),
        None => io::stdout().write_all(rendered.as_bytes()),
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    config: &'a RunConfig,
    result: &'a T,
}

fn json_document<T: Serialize>(config: &RunConfig, result: &T) -> String {
    let mut text = serde_json::to_string_pretty(&Document { config, result })
        .expect("artifact serialization is infallible");
    text.push('\n');
    text
}

fn render_json(config: &RunConfig, payload: &Payload) -> String {
    match payload {
        Payload::Constants(result) => json_document(config, result),
        Payload::Curve(result) => json_document(config, result),
        Payload::Samples(result) => json_document(config, result),
        Payload::Verify(result) => json_document(config, result),
    }
}

fn render_csv(config: &RunConfig, payload: &Payload) -> String {
    let mut out = String::new();
    push_config_lines(config, &mut out);
    match payload {
        Payload::Constants(result) => push_constants_csv(result, &mut out),
        Payload::Curve(result) => push_curve_csv(result, &mut out),
        Payload::Samples(result) => push_samples_csv(result, &mut out),
        Payload::Verify(result) => push_verify_csv(result, &mut out),
    }
    out
}

/// Comment lines mirror the `RunConfig` fields in declaration order, with
/// the parameter map flattened to sorted `parameters.<key>` entries.
fn push_config_lines(config: &RunConfig, out: &mut String) {
    out.push_str(&format!("#command={}\n", config.command));
    for (key, value) in &config.parameters {
        out.push_str(&format!("#parameters.{key}={value}\n"));
    }
    out.push_str(&format!("#output_path={}\n", config.output_path));
    out.push_str(&format!("#format={}\n", config.format));
    out.push_str(&format!("#seed={}\n", config.seed));
    out.push_str(&format!("#tolerance={}\n", config.tolerance));
}

fn push_constants_csv(result: &ConstantsResult, out: &mut String) {
    out.push_str("q,A,B,C_q,tail_bound\n");
    out.push_str(&format!(
        "{},{},{},{},{}\n",
        result.q, result.a, result.b, result.c_q, result.tail_bound
    ));
}

fn push_curve_csv(result: &CurveResult, out: &mut String) {
    out.push_str("q,C_q,tail_bound\n");
    for row in &result.rows {
        out.push_str(&format!("{},{},{}\n", row.q, row.c_q, row.tail_bound));
    }
}

fn push_samples_csv(result: &SampleResult, out: &mut String) {
    out.push_str("r,theta,re,im\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.r, row.theta, row.re, row.im
        ));
    }
}

fn push_verify_csv(result: &SuiteResult, out: &mut String) {
    out.push_str(&format!("#suite_id={}\n", result.suite_id));
    out.push_str(&format!("#suite_seed={}\n", result.seed));
    for note in &result.notes {
        out.push_str(&format!("#note={note}\n"));
    }
    out.push_str("id,description,status,measured,target,tolerance\n");
    for check in &result.checks {
        let status = match check.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_field(&check.id),
            csv_field(&check.description),
            status,
            check.measured,
            check.target,
            check.tolerance
        ));
    }
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline,
/// doubling embedded quotes.
fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Certificate, DecompositionReport, MotiveExpression, ZeroCycleSource};

/// Output format of [`Render::render`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Deterministic serialization to text or pretty-printed JSON.
pub trait Render {
    fn render(&self, format: Format) -> String;
}

impl Render for MotiveExpression {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Json => serde_json::to_string_pretty(self).expect("serializable"),
        }
    }
}

impl Render for DecompositionReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable"),
            Format::Text => render_report_text(self),
        }
    }
}

fn source_text(source: ZeroCycleSource) -> &'static str {
    match source {
        ZeroCycleSource::NotAssumed => "not asserted",
        ZeroCycleSource::Caller => "asserted by the caller",
        ZeroCycleSource::Flag => "asserted by --assume-zero-cycle",
        ZeroCycleSource::InputFile => "asserted by the input file",
    }
}

fn render_report_text(r: &DecompositionReport) -> String {
    let mut out = String::new();
    let res = &r.resolution;
    let _ = writeln!(out, "verdict: {}", r.verdict);
    let _ = writeln!(out, "invertible: {}", r.invertible);
    let _ = writeln!(out, "zero-cycle of degree 1: {}", source_text(r.zero_cycle.source));
    let _ = writeln!(
        out,
        "resolution ({}): P = {} (subgroup orders {:?}), rank P = {}, rank C = {}, checks {}",
        res.construction,
        res.permutation_parts.describe(),
        res.part_orders,
        res.p_rank,
        res.c_rank,
        if res.check.all_green() { "passed" } else { "FAILED" }
    );
    let _ = writeln!(out, "E = {} (algebra of P)", r.etale.label("E"));
    match &r.certificate {
        Certificate::Section { matrix } => {
            let _ = writeln!(out, "section: {matrix}");
        }
        Certificate::Obstruction { obstruction } => {
            let _ = writeln!(out, "obstruction: {obstruction}");
        }
    }
    if let Some(c) = &r.complement {
        let _ = writeln!(
            out,
            "complement N: rank {}, permutation lattice: {}{}",
            c.rank,
            c.permutation.verdict,
            c.permutation
                .descriptor
                .as_ref()
                .map(|d| format!(" ({})", d.describe()))
                .unwrap_or_default()
        );
    }
    let _ = writeln!(out, "Pic permutation lattice: {}", r.picard_permutation.verdict);
    if let Some(s) = &r.summand_statement {
        let _ = writeln!(out, "summand: {} is a direct summand of {}", s.left, s.right);
    }
    if let Some(m) = &r.middle_relation {
        let _ = writeln!(out, "middle part: {} ~= {}", m.left, m.right);
    }
    if let Some(t) = &r.theorem {
        let _ = writeln!(out, "isomorphism: {} ~= {}", t.left, t.right);
    }
    out
}

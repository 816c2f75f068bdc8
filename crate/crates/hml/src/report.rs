//! Inequality reports: named quantities, pairwise verdicts with slack, and
//! byte-stable JSON/CSV serialization.
//!
//! Reports are written by a hand-rolled emitter rather than a generic
//! serializer so that every float carries exactly 17 significant digits and
//! the field order is fixed; identical inputs produce identical bytes no
//! matter the thread count.

use crate::matrix::WeightConstraint;

/// Hybrid comparison rule: `left <= right*(1 + rel) + abs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance { rel: 1e-7, abs: 1e-12 };

    pub fn new(rel: f64, abs: f64) -> Self {
        assert!(rel > 0.0 && abs > 0.0, "tolerances must be positive");
        Self { rel, abs }
    }

    /// True when `left <= right` up to this tolerance.
    pub fn leq(&self, left: f64, right: f64) -> bool {
        left <= right * (1.0 + self.rel) + self.abs
    }
}

/// One comparison between two named quantities; slack is `right - left`.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub left: String,
    pub right: String,
    pub pass: bool,
    pub slack: f64,
}

/// Everything needed to regenerate a trial instance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceDigest {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub k: Option<usize>,
    pub density: f64,
    pub weight_constraint: Option<WeightConstraint>,
    pub weights: Vec<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

/// Ordered chain (or pair list) of quantities with comparison verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub suite: String,
    pub digest: InstanceDigest,
    pub quantities: Vec<(String, f64)>,
    pub verdicts: Vec<Verdict>,
    pub tolerance: Tolerance,
}

impl InequalityReport {
    pub fn new(suite: &str, digest: InstanceDigest, tolerance: Tolerance) -> Self {
        Self {
            suite: suite.to_string(),
            digest,
            quantities: Vec::new(),
            verdicts: Vec::new(),
            tolerance,
        }
    }

    pub fn quantity(&mut self, label: &str, value: f64) {
        debug_assert!(
            self.quantities.iter().all(|(l, _)| l != label),
            "duplicate quantity label {label}"
        );
        self.quantities.push((label.to_string(), value));
    }

    pub fn value(&self, label: &str) -> f64 {
        self.quantities
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, v)| v)
            .unwrap_or_else(|| panic!("unknown quantity label {label}"))
    }

    /// Compares two already-recorded quantities with the report tolerance.
    pub fn link(&mut self, left: &str, right: &str) {
        let l = self.value(left);
        let r = self.value(right);
        self.verdicts.push(Verdict {
            left: left.to_string(),
            right: right.to_string(),
            pass: self.tolerance.leq(l, r),
            slack: r - l,
        });
    }

    /// Adjacent links along a chain of labels.
    pub fn chain(&mut self, labels: &[&str]) {
        for pair in labels.windows(2) {
            self.link(pair[0], pair[1]);
        }
    }

    /// An equality link checked as two inequalities.
    pub fn link_equal(&mut self, left: &str, right: &str) {
        self.link(left, right);
        self.link(right, left);
    }

    /// Records an externally computed verdict (entrywise checks).
    pub fn push_verdict(&mut self, left: &str, right: &str, pass: bool, slack: f64) {
        self.verdicts.push(Verdict {
            left: left.to_string(),
            right: right.to_string(),
            pass,
            slack,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// A batch of trials of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: Vec<InequalityReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.trials.iter().filter(|t| t.all_pass()).count()
    }

    pub fn failed(&self) -> usize {
        self.trials.len() - self.passed()
    }

    pub fn first_failure(&self) -> Option<&InequalityReport> {
        self.trials.iter().find(|t| !t.all_pass())
    }
}

/// 17-significant-digit float rendering used in every emitted file.
pub fn fmt_f64(v: f64) -> String {
    debug_assert!(v.is_finite(), "reports only carry finite values");
    // Normalize -0.0 so byte output does not depend on sign-of-zero.
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn digest_json(d: &InstanceDigest, out: &mut String) {
    out.push_str("{\"seed\":");
    out.push_str(&d.seed.to_string());
    out.push_str(",\"n\":");
    out.push_str(&d.n.to_string());
    out.push_str(",\"m\":");
    out.push_str(&d.m.to_string());
    if let Some(k) = d.k {
        out.push_str(",\"k\":");
        out.push_str(&k.to_string());
    }
    out.push_str(",\"density\":");
    out.push_str(&fmt_f64(d.density));
    if let Some(c) = d.weight_constraint {
        out.push_str(",\"weight_mode\":\"");
        out.push_str(c.tag());
        out.push('"');
    }
    if !d.weights.is_empty() {
        out.push_str(",\"weights\":[");
        for (i, w) in d.weights.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(*w));
        }
        out.push(']');
    }
    if let Some(a) = d.alpha {
        out.push_str(",\"alpha\":");
        out.push_str(&fmt_f64(a));
    }
    if let Some(b) = d.beta {
        out.push_str(",\"beta\":");
        out.push_str(&fmt_f64(b));
    }
    out.push('}');
}

fn trial_json(t: &InequalityReport, out: &mut String) {
    out.push_str("{\"digest\":");
    digest_json(&t.digest, out);
    out.push_str(",\"quantities\":[");
    for (i, (label, value)) in t.quantities.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("[\"");
        out.push_str(&json_escape(label));
        out.push_str("\",");
        out.push_str(&fmt_f64(*value));
        out.push(']');
    }
    out.push_str("],\"verdicts\":[");
    for (i, v) in t.verdicts.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("[\"");
        out.push_str(&json_escape(&v.left));
        out.push_str("\",\"");
        out.push_str(&json_escape(&v.right));
        out.push_str("\",");
        out.push_str(if v.pass { "true" } else { "false" });
        out.push(',');
        out.push_str(&fmt_f64(v.slack));
        out.push(']');
    }
    out.push_str("]}");
}

/// JSON for one suite batch:
/// `{"suite": ..., "trials": [...], "summary": {"pass": ..., "fail": ...}}`.
pub fn suite_report_json(r: &SuiteReport) -> String {
    let mut out = String::new();
    suite_report_json_into(r, &mut out);
    out.push('\n');
    out
}

fn suite_report_json_into(r: &SuiteReport, out: &mut String) {
    out.push_str("{\"suite\":\"");
    out.push_str(&json_escape(&r.suite));
    out.push_str("\",\"trials\":[");
    for (i, t) in r.trials.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        trial_json(t, out);
    }
    out.push_str("],\"summary\":{\"pass\":");
    out.push_str(&r.passed().to_string());
    out.push_str(",\"fail\":");
    out.push_str(&r.failed().to_string());
    out.push_str("}}");
}

/// JSON array of suite batches, one element per suite in the given order.
pub fn multi_suite_json(reports: &[SuiteReport]) -> String {
    let mut out = String::from("[");
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        suite_report_json_into(r, &mut out);
    }
    out.push_str("]\n");
    out
}

/// Per-level CSV for grid refinements: one row per grid size, one column
/// per quantity label (labels taken from the first level).
pub fn levels_csv(levels: &[(usize, InequalityReport)]) -> String {
    let mut out = String::new();
    let Some((_, first)) = levels.first() else {
        return out;
    };
    out.push_str("grid_n");
    for (label, _) in &first.quantities {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    for (grid, report) in levels {
        out.push_str(&grid.to_string());
        for (label, _) in &first.quantities {
            out.push(',');
            out.push_str(&fmt_f64(report.value(label)));
        }
        out.push('\n');
    }
    out
}

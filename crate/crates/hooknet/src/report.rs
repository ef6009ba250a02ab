//! Report assembly and rendering for analysis, simulation, and verification.
//!
//! Three output styles share one data source: `json` serializes the full
//! document, `csv` emits flat per-entry rows for external plotting, and
//! `table` prints an aligned human-readable summary. No renderer embeds
//! wall-clock or host information, so identical inputs produce byte-identical
//! reports at any parallelism level.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::laws::DegreeLawReport;
use crate::matrix::RatMatrix;
use crate::profile::DegreeProfile;
use crate::ratio::decimal_string;
use crate::seed::SeedSpec;
use crate::sim::{Mode, RunOutput};
use crate::stats::{RunStats, VerifyReport};
use crate::urn::UrnModel;
use crate::{Error, Result};

/// Significant digits used when an exact rational is echoed as a decimal.
const DECIMAL_DIGITS: usize = 12;

/// Output format selector shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Aligned human-readable text.
    Table,
    /// One serialized document.
    Json,
    /// Flat per-entry rows.
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parameter(format!(
                "unknown format \"{other}\" (expected json, csv, or table)"
            ))),
        }
    }
}

/// Seed facts echoed at the top of an analysis report.
#[derive(Debug, Clone, Serialize)]
pub struct SeedSummary {
    pub vertices: usize,
    /// Proper edges between distinct vertices.
    pub edges: usize,
    /// Total self-loop count over all vertices.
    pub loops: u64,
    pub hook: String,
    pub hook_degree: u64,
}

impl SeedSummary {
    fn new(seed: &SeedSpec) -> SeedSummary {
        SeedSummary {
            vertices: seed.vertices.len(),
            edges: seed.edges.len(),
            loops: seed.loops.values().map(|&c| u64::from(c)).sum(),
            hook: seed.hook.clone(),
            hook_degree: seed.hook_degree(),
        }
    }
}

/// Complete exact analysis of one seed at one arity: the urn model, its
/// spectrum with an independent determinant verification, and every limit
/// law the model determines.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub seed: SeedSummary,
    pub model: UrnModel,
    pub spectrum: crate::spectrum::Spectrum,
    pub spectrum_verification: crate::spectrum::SpectrumVerification,
    /// Limiting covariance of the urn colors themselves (the history-resolved
    /// slot counts), before the linear map onto degrees.
    pub color_covariance: RatMatrix,
    /// The covariance solution was re-substituted into its defining equation
    /// and the residual came back exactly zero.
    pub covariance_residual_zero: bool,
    pub laws: DegreeLawReport,
}

impl Analysis {
    /// Runs the full exact pipeline for a seed at arity `m`.
    pub fn derive(seed: &SeedSpec, m: u32) -> Result<Analysis> {
        let profile = DegreeProfile::new(seed, m)?;
        let model = UrnModel::build(&profile);
        let spectrum = crate::spectrum::principal_eigenvector(&model)?;
        let verification = crate::spectrum::verify_spectrum(&model, &spectrum.eigenvalues);
        let (cov, laws) = crate::laws::derive_laws(&model, &spectrum)?;
        Ok(Analysis {
            seed: SeedSummary::new(seed),
            model,
            spectrum,
            spectrum_verification: verification,
            color_covariance: cov.q,
            covariance_residual_zero: cov.residual_zero,
            laws,
        })
    }
}

/// Checks that a JSON analysis document has the expected shape: the required
/// sections are present and every exact value uses the `{"num", "den"}`
/// string encoding. Used by round-trip tests and available to consumers.
pub fn validate_analysis_json(text: &str) -> Result<()> {
    let doc: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Parameter(format!("analysis document is not JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parameter("analysis document must be a JSON object".into()))?;
    for key in [
        "seed",
        "model",
        "spectrum",
        "spectrum_verification",
        "color_covariance",
        "covariance_residual_zero",
        "laws",
    ] {
        if !obj.contains_key(key) {
            return Err(Error::Parameter(format!("analysis document lacks \"{key}\"")));
        }
    }
    let v1 = doc
        .pointer("/spectrum/v1")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parameter("spectrum.v1 must be an array".into()))?;
    for entry in v1 {
        let ok = entry.get("num").map_or(false, serde_json::Value::is_string)
            && entry.get("den").map_or(false, serde_json::Value::is_string);
        if !ok {
            return Err(Error::Parameter(
                "exact values must use the {\"num\", \"den\"} string encoding".into(),
            ));
        }
    }
    if doc.pointer("/laws/sigma/0/0/num").map_or(true, |v| !v.is_string()) {
        return Err(Error::Parameter(
            "laws.sigma must be rows of {\"num\", \"den\"} entries".into(),
        ));
    }
    Ok(())
}

/// Formats a rational as `p/q`, or a bare integer when the denominator is 1.
fn rat_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn dec_str(r: &BigRational) -> String {
    decimal_string(r, DECIMAL_DIGITS)
}

/// Renders a rational matrix as integer rows with a pulled-out common factor:
/// `(1/L) *` followed by aligned integers, where L is the least common
/// denominator. A matrix of integers prints without the factor line.
fn matrix_lines(mat: &RatMatrix, indent: &str) -> Vec<String> {
    let mut lcm = BigInt::one();
    for row in mat.to_rows() {
        for e in &row {
            lcm = lcm.lcm(e.denom());
        }
    }
    let scaled: Vec<Vec<BigInt>> = mat
        .to_rows()
        .iter()
        .map(|row| row.iter().map(|e| e.numer() * (&lcm / e.denom())).collect())
        .collect();
    let width = scaled
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    let mut lines = Vec::new();
    if !lcm.is_one() {
        lines.push(format!("{indent}(1/{lcm}) *"));
    }
    for row in &scaled {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
        lines.push(format!("{indent}[ {} ]", cells.join("  ")));
    }
    lines
}

fn int_matrix_lines(rows: &[Vec<i64>], indent: &str) -> Vec<String> {
    let width = rows
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    rows.iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            format!("{indent}[ {} ]", cells.join("  "))
        })
        .collect()
}

/// Aligns rows of cells into columns, left-justifying the first column and
/// right-justifying the rest.
fn aligned(rows: &[Vec<String>]) -> Vec<String> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            widths[c] = widths[c].max(cell.len());
        }
    }
    rows.iter()
        .map(|row| {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(c, cell)| {
                    if c == 0 {
                        format!("{cell:<w$}", w = widths[c])
                    } else {
                        format!("{cell:>w$}", w = widths[c])
                    }
                })
                .collect();
            format!("  {}", cells.join("  ").trim_end())
        })
        .collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

/// Escapes a CSV cell (labels and diagnostics only; numbers never need it).
fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a full analysis in the requested format. `verbose` adds the
/// unscaled active-class limit variant next to the corrected strong law so
/// the two scalings can be compared directly.
pub fn render_analysis(a: &Analysis, format: Format, verbose: bool) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(a).expect("analysis serializes");
            s.push('\n');
            s
        }
        Format::Csv => analysis_csv(a, verbose),
        Format::Table => analysis_table(a, verbose),
    }
}

fn analysis_csv(a: &Analysis, verbose: bool) -> String {
    let mut out = String::from("section,i,j,label,exact,decimal\n");
    let mut push = |section: &str, i: String, j: String, label: &str, exact: String, dec: String| {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            section,
            i,
            j,
            csv_cell(label),
            csv_cell(&exact),
            dec
        ));
    };
    let labels = &a.laws.labels;
    for (i, (lambda, mult)) in a.spectrum.eigenvalues.iter().enumerate() {
        push(
            "eigenvalue",
            i.to_string(),
            String::new(),
            "multiplicity",
            lambda.to_string(),
            mult.to_string(),
        );
    }
    for (r, row) in a.model.a.to_rows().iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            push(
                "replacement_matrix",
                r.to_string(),
                c.to_string(),
                "",
                v.to_string(),
                v.to_string(),
            );
        }
    }
    for (i, v) in a.model.x0.iter().enumerate() {
        push(
            "initial_composition",
            i.to_string(),
            String::new(),
            &labels[i],
            v.to_string(),
            v.to_string(),
        );
    }
    for (i, e) in a.spectrum.v1.iter().enumerate() {
        push(
            "v1",
            i.to_string(),
            String::new(),
            &labels[i],
            rat_str(&e.0),
            dec_str(&e.0),
        );
    }
    for (i, e) in a.laws.strong_law.d_star.iter().enumerate() {
        push(
            "degree_limit",
            i.to_string(),
            String::new(),
            &labels[i],
            rat_str(&e.0),
            dec_str(&e.0),
        );
    }
    if verbose {
        for (i, e) in a.laws.strong_law.unscaled_active_variant.iter().enumerate() {
            push(
                "unscaled_active_variant",
                i.to_string(),
                String::new(),
                &labels[i],
                rat_str(&e.0),
                dec_str(&e.0),
            );
        }
    }
    for (section, mat) in [
        ("color_covariance", &a.color_covariance),
        ("degree_covariance", &a.laws.sigma),
    ] {
        for (r, row) in mat.to_rows().iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                push(
                    section,
                    r.to_string(),
                    c.to_string(),
                    "",
                    rat_str(v),
                    dec_str(v),
                );
            }
        }
    }
    for (i, (d, e)) in a
        .laws
        .plain_degrees
        .iter()
        .zip(a.laws.plain_d_star.iter())
        .enumerate()
    {
        push(
            "plain_degree_limit",
            i.to_string(),
            String::new(),
            &format!("d{d}"),
            rat_str(&e.0),
            dec_str(&e.0),
        );
    }
    for (r, row) in a.laws.plain_sigma.to_rows().iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            push(
                "plain_covariance",
                r.to_string(),
                c.to_string(),
                "",
                rat_str(v),
                dec_str(v),
            );
        }
    }
    out
}

fn analysis_table(a: &Analysis, verbose: bool) -> String {
    let p = &a.model.profile;
    let mut out = Vec::new();
    out.push(format!(
        "seed: {} vertices, {} edges, {} loops, hook \"{}\" (degree {})",
        a.seed.vertices, a.seed.edges, a.seed.loops, a.seed.hook, a.seed.hook_degree
    ));
    out.push(format!(
        "arity m = {}, seed order tau0 = {}, degree classes k = {}, balance factor lambda1 = {}",
        p.m,
        p.tau0(),
        p.k(),
        a.model.lambda1
    ));
    out.push(format!(
        "network flags: degenerate = {}, invertible = {}",
        yes_no(a.spectrum.degenerate),
        yes_no(a.spectrum.invertible)
    ));
    if a.spectrum.degenerate {
        out.push(
            "note: the hook is alone in its degree class, so its class empties and \
             the Gaussian fluctuation law does not apply"
                .into(),
        );
    }
    out.push(String::new());

    out.push("degree classes (seed degree, vertex count):".into());
    let mut rows = Vec::new();
    for (j, (&d, &c)) in p.degrees.iter().zip(p.counts.iter()).enumerate() {
        let mark = if j == p.hook_index { "(hook class)" } else { "" };
        rows.push(vec![format!("d{d}"), format!("x{c}"), mark.into()]);
    }
    out.extend(aligned(&rows));
    out.push(String::new());

    out.push(format!(
        "replacement matrix A ({mk} x {mk}, every row adds to {l}):",
        mk = a.model.a.rows,
        l = a.model.lambda1
    ));
    out.extend(int_matrix_lines(&a.model.a.to_rows(), "  "));
    out.push(format!(
        "initial composition X0 = [{}]",
        a.model
            .x0
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push(String::new());

    let eig = a
        .spectrum
        .eigenvalues
        .iter()
        .map(|(l, m)| format!("{l} (x{m})"))
        .collect::<Vec<_>>()
        .join(", ");
    out.push(format!("eigenvalues: {eig}"));
    out.push("determinant checks (det(A - lambda I) = 0 at each claimed eigenvalue):".into());
    let mut rows = Vec::new();
    for c in &a.spectrum_verification.eigenvalue_checks {
        rows.push(vec![
            format!("lambda = {}", c.lambda),
            format!("det = {}", c.determinant),
            pass_fail(c.pass).into(),
        ]);
    }
    for c in &a.spectrum_verification.probe_checks {
        rows.push(vec![
            format!("probe  = {}", c.lambda),
            format!("det = {}", c.determinant),
            format!("nonzero {}", pass_fail(c.pass)),
        ]);
    }
    out.extend(aligned(&rows));
    out.push(format!(
        "multiplicities account for the full dimension: {}",
        pass_fail(a.spectrum_verification.multiplicity_accounting)
    ));
    out.push(String::new());

    out.push("principal eigenvector v1 (ball-share limits, sums to 1):".into());
    let mut rows = Vec::new();
    for (i, e) in a.spectrum.v1.iter().enumerate() {
        rows.push(vec![a.laws.labels[i].clone(), rat_str(&e.0), dec_str(&e.0)]);
    }
    out.extend(aligned(&rows));
    out.push(String::new());

    out.push(format!(
        "almost-sure degree limits D*/n (sum = tau0 - 1 = {}):",
        p.tau0() - 1
    ));
    let mut rows = Vec::new();
    if verbose {
        rows.push(vec![
            "label".into(),
            "limit".into(),
            "decimal".into(),
            "unscaled variant".into(),
        ]);
        for (i, e) in a.laws.strong_law.d_star.iter().enumerate() {
            rows.push(vec![
                a.laws.labels[i].clone(),
                rat_str(&e.0),
                dec_str(&e.0),
                rat_str(&a.laws.strong_law.unscaled_active_variant[i].0),
            ]);
        }
    } else {
        for (i, e) in a.laws.strong_law.d_star.iter().enumerate() {
            rows.push(vec![a.laws.labels[i].clone(), rat_str(&e.0), dec_str(&e.0)]);
        }
    }
    out.extend(aligned(&rows));
    if verbose {
        out.push(
            "  (the unscaled variant divides no active class by its remaining slots; \
             its entries sum past tau0 - 1, which is why the scaled form is emitted)"
                .into(),
        );
    }
    out.push(String::new());

    out.push(format!(
        "color covariance Q ({n} x {n}, fluctuations of the slot counts):",
        n = a.color_covariance.rows
    ));
    out.extend(matrix_lines(&a.color_covariance, "  "));
    out.push(format!(
        "  residual of the defining covariance equation is exactly zero: {}",
        pass_fail(a.covariance_residual_zero)
    ));
    out.push(String::new());

    out.push(format!(
        "degree covariance Sigma ({n} x {n}, Gaussian fluctuations of (D - nD*)/sqrt(n)):",
        n = a.laws.sigma.rows
    ));
    out.extend(matrix_lines(&a.laws.sigma, "  "));
    out.push(String::new());

    out.push("plain-degree limits (history classes merged per carried degree):".into());
    let mut rows = Vec::new();
    for (d, e) in a.laws.plain_degrees.iter().zip(a.laws.plain_d_star.iter()) {
        rows.push(vec![format!("d{d}"), rat_str(&e.0), dec_str(&e.0)]);
    }
    out.extend(aligned(&rows));
    out.push(format!(
        "plain-degree covariance ({n} x {n}):",
        n = a.laws.plain_sigma.rows
    ));
    out.extend(matrix_lines(&a.laws.plain_sigma, "  "));
    out.push(format!(
        "central limit theorem applicable: {}",
        yes_no(a.laws.clt_applicable)
    ));
    out.push(String::new());
    out.join("\n")
}

/// One simulation run plus the labeling context needed to read it.
#[derive(Debug, Clone, Serialize)]
pub struct RunDocument {
    pub color_labels: Vec<String>,
    pub degree_labels: Vec<String>,
    pub run: RunOutput,
}

impl RunDocument {
    pub fn new(model: &UrnModel, run: RunOutput) -> RunDocument {
        let ledger = model.profile.ledger();
        let colors = model.colors();
        let all: Vec<String> = (0..ledger.len())
            .map(|i| ledger.label_name(i, &model.profile))
            .collect();
        RunDocument {
            color_labels: all[..colors].to_vec(),
            degree_labels: all,
            run,
        }
    }
}

/// Renders a simulation run in the requested format.
pub fn render_run(doc: &RunDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("run serializes");
            s.push('\n');
            s
        }
        Format::Csv => run_csv(doc),
        Format::Table => run_table(doc),
    }
}

fn run_csv(doc: &RunDocument) -> String {
    let mut header: Vec<String> = vec!["step".into()];
    header.extend(doc.color_labels.iter().map(|l| format!("x_{l}")));
    header.extend(doc.degree_labels.iter().map(|l| format!("d_{l}")));
    let mut out = header.join(",");
    out.push('\n');
    let mut emit = |step: u64, x: &[i64], d: &[i64]| {
        let mut row: Vec<String> = vec![step.to_string()];
        row.extend(x.iter().map(ToString::to_string));
        row.extend(d.iter().map(ToString::to_string));
        out.push_str(&row.join(","));
        out.push('\n');
    };
    for cp in &doc.run.checkpoints {
        emit(cp.step, &cp.x, &cp.degrees);
    }
    let last_is_final = doc
        .run
        .checkpoints
        .last()
        .is_some_and(|cp| cp.step == doc.run.steps);
    if !last_is_final {
        emit(doc.run.steps, &doc.run.final_x, &doc.run.degrees);
    }
    out
}

fn run_table(doc: &RunDocument) -> String {
    let r = &doc.run;
    let mut out = Vec::new();
    let mode = match r.mode {
        Mode::Urn => "urn",
        Mode::Graph => "graph",
        Mode::Coupled => "coupled",
    };
    out.push(format!("simulation: {} steps, mode = {}", r.steps, mode));
    out.push(format!("final node count = {}", r.node_count));
    if !r.checkpoints.is_empty() {
        out.push("checkpoints:".into());
        let mut rows = Vec::new();
        let mut header = vec!["step".to_string()];
        header.extend(doc.degree_labels.iter().cloned());
        rows.push(header);
        for cp in &r.checkpoints {
            let mut row = vec![cp.step.to_string()];
            row.extend(cp.degrees.iter().map(ToString::to_string));
            rows.push(row);
        }
        out.extend(aligned(&rows));
    }
    out.push("final degree counts:".into());
    let mut rows = Vec::new();
    for (label, v) in doc.degree_labels.iter().zip(r.degrees.iter()) {
        rows.push(vec![label.clone(), v.to_string()]);
    }
    out.extend(aligned(&rows));
    out.push(format!(
        "final urn composition X = [{}]",
        r.final_x
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    ));
    if let Some(held) = r.coupling_held {
        out.push(format!("coupling held: {held}"));
    }
    out.push(String::new());
    out.join("\n")
}

/// A verification verdict plus the statistics it was judged on.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyDocument {
    pub labels: Vec<String>,
    pub stats: RunStats,
    pub verdict: VerifyReport,
}

impl VerifyDocument {
    pub fn new(laws: &DegreeLawReport, stats: RunStats, verdict: VerifyReport) -> VerifyDocument {
        VerifyDocument {
            labels: laws.labels.clone(),
            stats,
            verdict,
        }
    }
}

/// Renders a verification verdict in the requested format.
pub fn render_verify(doc: &VerifyDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("verdict serializes");
            s.push('\n');
            s
        }
        Format::Csv => verify_csv(doc),
        Format::Table => verify_table(doc),
    }
}

fn verify_csv(doc: &VerifyDocument) -> String {
    let mut out = String::from("section,i,j,label,theory,empirical,deviation\n");
    for (i, row) in doc.verdict.mean_rows.iter().enumerate() {
        out.push_str(&format!(
            "mean,{},,{},{},{},{}\n",
            i,
            csv_cell(&row.label),
            csv_cell(&row.theory),
            row.empirical,
            row.abs_dev
        ));
    }
    for (r, row) in doc.stats.empirical_cov.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            out.push_str(&format!("empirical_covariance,{r},{c},,,{v},\n"));
        }
    }
    for (r, row) in doc.stats.plain_cov.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            out.push_str(&format!("empirical_plain_covariance,{r},{c},,,{v},\n"));
        }
    }
    let v = &doc.verdict;
    out.push_str(&format!(
        "summary,,,max_mean_deviation,{},{},{}\n",
        v.policy.mean_tol,
        v.max_mean_dev,
        pass_fail(v.mean_pass)
    ));
    out.push_str(&format!(
        "summary,,,covariance_relative_deviation,{},{},{}\n",
        v.policy.cov_tol,
        v.cov_rel_dev,
        pass_fail(v.cov_pass)
    ));
    out.push_str(&format!(
        "summary,,,zero_rows_max_abs,{},{},{}\n",
        v.policy.zero_tol,
        v.max_zero_dev,
        pass_fail(v.zero_pass)
    ));
    if let (Some(dev), Some(pass)) = (v.plain_cov_rel_dev, v.plain_cov_pass) {
        out.push_str(&format!(
            "summary,,,plain_covariance_relative_deviation,{},{},{}\n",
            v.policy.cov_tol,
            dev,
            pass_fail(pass)
        ));
    }
    out.push_str(&format!("summary,,,verdict,,,{}\n", pass_fail(v.pass)));
    out
}

fn verify_table(doc: &VerifyDocument) -> String {
    let s = &doc.stats;
    let v = &doc.verdict;
    let mut out = Vec::new();
    out.push(format!(
        "verification: n = {}, replicates = {}, base seed = {}, rng = {}",
        s.n, s.replicates, s.base_seed, s.rng_algorithm
    ));
    out.push(String::new());
    out.push("empirical mean of D/n against the almost-sure limit:".into());
    let mut rows = vec![vec![
        "label".to_string(),
        "limit".to_string(),
        "empirical".to_string(),
        "|deviation|".to_string(),
    ]];
    for row in &v.mean_rows {
        rows.push(vec![
            row.label.clone(),
            row.theory.clone(),
            format!("{:.6}", row.empirical),
            format!("{:.2e}", row.abs_dev),
        ]);
    }
    out.extend(aligned(&rows));
    out.push(String::new());
    out.push(format!(
        "max mean deviation      = {:.6}  (tolerance {}): {}",
        v.max_mean_dev,
        v.policy.mean_tol,
        pass_fail(v.mean_pass)
    ));
    out.push(format!(
        "covariance deviation    = {:.6}  (Frobenius-relative, tolerance {}): {}",
        v.cov_rel_dev,
        v.policy.cov_tol,
        pass_fail(v.cov_pass)
    ));
    if v.zero_rows.is_empty() {
        out.push("structurally zero rows  = none".into());
    } else {
        out.push(format!(
            "structurally zero rows  = [{}], max |entry| = {:.2e}  (tolerance {}): {}",
            v.zero_rows.join(", "),
            v.max_zero_dev,
            v.policy.zero_tol,
            pass_fail(v.zero_pass)
        ));
    }
    if let (Some(dev), Some(pass)) = (v.plain_cov_rel_dev, v.plain_cov_pass) {
        out.push(format!(
            "plain-degree covariance = {:.6}  (Frobenius-relative, tolerance {}): {}",
            dev,
            v.policy.cov_tol,
            pass_fail(pass)
        ));
    }
    for w in &v.warnings {
        out.push(format!("warning: {w}"));
    }
    out.push(String::new());
    out.push(format!("verdict: {}", if v.pass { "PASS" } else { "FAIL" }));
    out.push(String::new());
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SeedSpec;

    fn fig2() -> SeedSpec {
        let doc = r#"{
            "vertices": ["hook", "x", "y", "z"],
            "edges": [["hook","x"],["hook","y"],["hook","z"],["x","y"],["x","z"],["y","z"]],
            "loops": {"y": 2},
            "hook": "hook"
        }"#;
        SeedSpec::parse(doc).unwrap()
    }

    #[test]
    fn json_analysis_validates() {
        let a = Analysis::derive(&fig2(), 2).unwrap();
        let text = render_analysis(&a, Format::Json, false);
        validate_analysis_json(&text).unwrap();
    }

    #[test]
    fn tampered_json_is_rejected() {
        let a = Analysis::derive(&fig2(), 2).unwrap();
        let text = render_analysis(&a, Format::Json, false);
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        doc.as_object_mut().unwrap().remove("spectrum");
        assert!(validate_analysis_json(&doc.to_string()).is_err());
    }

    #[test]
    fn table_contains_key_lines() {
        let a = Analysis::derive(&fig2(), 2).unwrap();
        let text = render_analysis(&a, Format::Table, false);
        assert!(text.contains("balance factor lambda1 = 5"));
        assert!(text.contains("degenerate = no"));
        assert!(text.contains("(1/882) *"));
        assert!(!text.contains("unscaled variant"));
        let verbose = render_analysis(&a, Format::Table, true);
        assert!(verbose.contains("unscaled variant"));
    }

    #[test]
    fn csv_has_exact_strong_law_rows() {
        let a = Analysis::derive(&fig2(), 2).unwrap();
        let text = render_analysis(&a, Format::Csv, false);
        assert!(text.contains("degree_limit,0,,d3,10/7,"));
        assert!(text.contains("plain_degree_limit,"));
    }

    #[test]
    fn factored_matrix_prints_common_denominator() {
        let m = RatMatrix::from_rows(vec![
            vec![crate::ratio::rat(1, 2), crate::ratio::rat(-1, 3)],
            vec![crate::ratio::rat(-1, 3), crate::ratio::rat(1, 2)],
        ]);
        let lines = matrix_lines(&m, "");
        assert_eq!(lines[0], "(1/6) *");
        assert_eq!(lines[1], "[  3  -2 ]");
    }

    #[test]
    fn run_csv_lists_checkpoints_then_final() {
        use rand::SeedableRng;
        let a = Analysis::derive(&fig2(), 2).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let run = crate::sim::run(&a.model, 10, &mut rng, Mode::Urn, &[5], false).unwrap();
        let doc = RunDocument::new(&a.model, run);
        let text = render_run(&doc, Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "step,x_d3,x_d7,x_d3+1h,x_d7+1h,d_d3,d_d7,d_d3+1h,d_d7+1h,d_d3+2h,d_d7+2h");
        assert!(lines[1].starts_with("5,"));
        assert!(lines[2].starts_with("10,"));
    }
}

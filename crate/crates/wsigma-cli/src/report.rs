//! Report assembly and serialization: JSON (versioned schema), RFC-4180
//! CSV, and plain text. Identical inputs produce byte-identical output.

use serde::Serialize;
use wsigma::audit::{normative_failures, IdentityReport};
use wsigma::classical::EllipticInvariants;
use wsigma::{Complex64, Lattice};

pub const SCHEMA_VERSION: u32 = 1;

/// Resolved run configuration, echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Basis as (re ω₁, im ω₁, re ω₂, im ω₂); absent for panel commands
    /// that ignore the configured lattice.
    pub lattice: Option<[f64; 4]>,
    pub max_shell: u32,
    pub target_tol: f64,
    pub quad_order: u32,
    pub r_max: u32,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

#[derive(Debug, Serialize)]
struct IdentityJson {
    identity_id: String,
    lattice_label: String,
    lhs: ComplexJson,
    rhs: ComplexJson,
    ratio: Option<ComplexJson>,
    abs_residual: f64,
    tol: f64,
    verdict: &'static str,
    note: String,
}

impl From<&IdentityReport> for IdentityJson {
    fn from(r: &IdentityReport) -> Self {
        IdentityJson {
            identity_id: r.identity_id.clone(),
            lattice_label: r.lattice_label.clone(),
            lhs: r.lhs.into(),
            rhs: r.rhs.into(),
            ratio: r.ratio.map(ComplexJson::from),
            abs_residual: r.abs_residual,
            tol: r.tol,
            verdict: r.verdict.as_str(),
            note: r.note.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct AuditEnvelope<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    results: Vec<IdentityJson>,
}

/// One row of the three-route coefficient comparison.
#[derive(Debug, Clone)]
pub struct CoeffRow {
    pub r: u32,
    pub recursion: Complex64,
    pub series: Complex64,
    pub integral: Option<Complex64>,
    pub dev_recursion_series: f64,
    pub dev_recursion_integral: Option<f64>,
    pub dev_series_integral: Option<f64>,
}

#[derive(Debug, Serialize)]
struct CoeffRowJson {
    r: u32,
    w_recursion: ComplexJson,
    w_series: ComplexJson,
    w_integral: Option<ComplexJson>,
    dev_recursion_series: f64,
    dev_recursion_integral: Option<f64>,
    dev_series_integral: Option<f64>,
}

#[derive(Debug, Serialize)]
struct CoeffEnvelope<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    coefficients: Vec<CoeffRowJson>,
}

#[derive(Debug, Serialize)]
struct InvariantsJson {
    cell_area: f64,
    nu: f64,
    mu: ComplexJson,
    eta1: ComplexJson,
    eta2: ComplexJson,
    g2: ComplexJson,
    g3: ComplexJson,
    eisenstein: Vec<(u32, ComplexJson)>,
    legendre_residual: f64,
    theta_space_dimension: f64,
}

#[derive(Debug, Serialize)]
struct InvariantsEnvelope<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    invariants: InvariantsJson,
}

/// One row of the exact coefficient table dump.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub m: u32,
    pub n: u32,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug, Serialize)]
struct TableRowJson {
    m: u32,
    n: u32,
    numerator: String,
    denominator: String,
}

#[derive(Debug, Serialize)]
struct TableEnvelope<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    table: Vec<TableRowJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

fn csv_string<F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>>(fill: F) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).expect("in-memory CSV writes cannot fail");
    String::from_utf8(w.into_inner().expect("flush")).expect("CSV output is UTF-8")
}

fn fmt_c(z: Complex64) -> String {
    format!("{} {:+}i", z.re, z.im)
}

pub fn render_audit(config: &RunConfig, reports: &[IdentityReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let env = AuditEnvelope {
                schema_version: SCHEMA_VERSION,
                config,
                results: reports.iter().map(IdentityJson::from).collect(),
            };
            serde_json::to_string_pretty(&env).expect("static schema serializes") + "\n"
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record([
                "identity_id",
                "lattice_label",
                "lhs_re",
                "lhs_im",
                "rhs_re",
                "rhs_im",
                "ratio_re",
                "ratio_im",
                "abs_residual",
                "tol",
                "verdict",
                "note",
            ])?;
            for r in reports {
                let (ratio_re, ratio_im) = match r.ratio {
                    Some(q) => (q.re.to_string(), q.im.to_string()),
                    None => (String::new(), String::new()),
                };
                w.write_record([
                    r.identity_id.as_str(),
                    r.lattice_label.as_str(),
                    &r.lhs.re.to_string(),
                    &r.lhs.im.to_string(),
                    &r.rhs.re.to_string(),
                    &r.rhs.im.to_string(),
                    &ratio_re,
                    &ratio_im,
                    &r.abs_residual.to_string(),
                    &r.tol.to_string(),
                    r.verdict.as_str(),
                    r.note.as_str(),
                ])?;
            }
            Ok(())
        }),
        OutputFormat::Text => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&format!(
                    "{:<22} {:<10} {:<13} residual {:>10.3e}  tol {:>8.1e}  {}\n",
                    r.identity_id,
                    r.lattice_label,
                    r.verdict.as_str(),
                    r.abs_residual,
                    r.tol,
                    r.note
                ));
            }
            let fails = normative_failures(reports);
            out.push_str(&format!(
                "{} reports; normative failures: {}\n",
                reports.len(),
                fails
            ));
            out
        }
    }
}

pub fn render_invariants(
    config: &RunConfig,
    lat: &Lattice,
    inv: &EllipticInvariants,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Json => {
            let env = InvariantsEnvelope {
                schema_version: SCHEMA_VERSION,
                config,
                invariants: InvariantsJson {
                    cell_area: lat.cell_area(),
                    nu: inv.nu,
                    mu: inv.mu.into(),
                    eta1: inv.eta1.into(),
                    eta2: inv.eta2.into(),
                    g2: inv.g2.into(),
                    g3: inv.g3.into(),
                    eisenstein: inv
                        .eisenstein
                        .iter()
                        .map(|(&k, &v)| (k, ComplexJson::from(v)))
                        .collect(),
                    legendre_residual: inv.legendre_residual(lat),
                    theta_space_dimension: lat.theta_space_dimension(),
                },
            };
            serde_json::to_string_pretty(&env).expect("static schema serializes") + "\n"
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["quantity", "re", "im"])?;
            let mut row = |name: &str, z: Complex64| {
                w.write_record([name, &z.re.to_string(), &z.im.to_string()])
            };
            row("cell_area", Complex64::new(lat.cell_area(), 0.0))?;
            row("nu", Complex64::new(inv.nu, 0.0))?;
            row("mu", inv.mu)?;
            row("eta1", inv.eta1)?;
            row("eta2", inv.eta2)?;
            row("g2", inv.g2)?;
            row("g3", inv.g3)?;
            for (&k, &v) in &inv.eisenstein {
                w.write_record([&format!("G{k}"), &v.re.to_string(), &v.im.to_string()])?;
            }
            w.write_record([
                "legendre_residual",
                &inv.legendre_residual(lat).to_string(),
                "0",
            ])?;
            Ok(())
        }),
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("cell area S        = {}\n", lat.cell_area()));
            out.push_str(&format!("nu = pi/S          = {}\n", inv.nu));
            out.push_str(&format!("mu                 = {}\n", fmt_c(inv.mu)));
            out.push_str(&format!("eta1               = {}\n", fmt_c(inv.eta1)));
            out.push_str(&format!("eta2               = {}\n", fmt_c(inv.eta2)));
            out.push_str(&format!("g2 = 60 G4         = {}\n", fmt_c(inv.g2)));
            out.push_str(&format!("g3 = 140 G6        = {}\n", fmt_c(inv.g3)));
            for (&k, &v) in &inv.eisenstein {
                out.push_str(&format!("G{k:<2}                = {}\n", fmt_c(v)));
            }
            out.push_str(&format!(
                "Legendre residual  = {:.3e}\n",
                inv.legendre_residual(lat)
            ));
            out.push_str(&format!(
                "theta space dim    = {}\n",
                lat.theta_space_dimension()
            ));
            out
        }
    }
}

pub fn render_coeffs(config: &RunConfig, rows: &[CoeffRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let env = CoeffEnvelope {
                schema_version: SCHEMA_VERSION,
                config,
                coefficients: rows
                    .iter()
                    .map(|r| CoeffRowJson {
                        r: r.r,
                        w_recursion: r.recursion.into(),
                        w_series: r.series.into(),
                        w_integral: r.integral.map(ComplexJson::from),
                        dev_recursion_series: r.dev_recursion_series,
                        dev_recursion_integral: r.dev_recursion_integral,
                        dev_series_integral: r.dev_series_integral,
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&env).expect("static schema serializes") + "\n"
        }
        OutputFormat::Csv => csv_string(|w| {
            w.write_record([
                "r",
                "w_recursion_re",
                "w_recursion_im",
                "w_series_re",
                "w_series_im",
                "w_integral_re",
                "w_integral_im",
                "dev_recursion_series",
                "dev_recursion_integral",
                "dev_series_integral",
            ])?;
            for row in rows {
                let (ire, iim) = match row.integral {
                    Some(z) => (z.re.to_string(), z.im.to_string()),
                    None => (String::new(), String::new()),
                };
                let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                w.write_record([
                    &row.r.to_string(),
                    &row.recursion.re.to_string(),
                    &row.recursion.im.to_string(),
                    &row.series.re.to_string(),
                    &row.series.im.to_string(),
                    &ire,
                    &iim,
                    &row.dev_recursion_series.to_string(),
                    &opt(row.dev_recursion_integral),
                    &opt(row.dev_series_integral),
                ])?;
            }
            Ok(())
        }),
        OutputFormat::Text => {
            let mut out = String::from(
                "  r  W_recursion                 W_series                    W_integral                  max pairwise dev\n",
            );
            for row in rows {
                let max_dev = row
                    .dev_recursion_series
                    .max(row.dev_recursion_integral.unwrap_or(0.0))
                    .max(row.dev_series_integral.unwrap_or(0.0));
                out.push_str(&format!(
                    "{:>3}  {:<27} {:<27} {:<27} {:.3e}\n",
                    row.r,
                    fmt_c(row.recursion),
                    fmt_c(row.series),
                    row.integral.map(fmt_c).unwrap_or_else(|| "-".into()),
                    max_dev
                ));
            }
            out
        }
    }
}

pub fn render_table(config: &RunConfig, rows: &[TableRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let env = TableEnvelope {
                schema_version: SCHEMA_VERSION,
                config,
                table: rows
                    .iter()
                    .map(|r| TableRowJson {
                        m: r.m,
                        n: r.n,
                        numerator: r.numerator.clone(),
                        denominator: r.denominator.clone(),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&env).expect("static schema serializes") + "\n"
        }
        OutputFormat::Csv | OutputFormat::Text => csv_string(|w| {
            w.write_record(["m", "n", "numerator", "denominator"])?;
            for r in rows {
                w.write_record([
                    &r.m.to_string(),
                    &r.n.to_string(),
                    &r.numerator,
                    &r.denominator,
                ])?;
            }
            Ok(())
        }),
    }
}

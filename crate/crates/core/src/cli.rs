//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure, 2 when
//! an input violates a precondition or fails validation, 3 when a file cannot
//! be read or parsed.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::gauge::{gauge_equivalize, gauge_transform, GaugeElement, GaugeError};
use crate::io::{series_document, series_to_json, Document, IoError};
use crate::lie::{validate, Automorphism, Casimir, LieAlgebra, LieError};
use crate::moduli::{solve_extension, ModuliError, ModuliPoint};
use crate::rmatrix::{construct_am, construct_twisted, verify, RMatrixError, ResidualCheck, VerifyReport};
use crate::scalar::{Cyclotomic, FieldKind, Rational, Scalar};
use crate::series::SeriesMap;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dynr", version, about = "Exact construction and verification of classical dynamical r-matrices")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Algebra document (algebra, subalgebra, omega or form, automorphism)
    #[arg(long, global = true)]
    pub algebra: Option<PathBuf>,
    /// Truncation K: series are computed through degree K and verified through K − 1
    #[arg(long, global = true, default_value_t = 6)]
    pub degree: usize,
    /// rational or cyclotomic:N with N in 3, 4, 5, 6, 8, 12
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Output document
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the report as JSON to this path
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Lie axioms, conditions i) and ii) and the automorphism
    Validate {
        /// Automorphism document, overriding the one in the algebra file
        #[arg(long)]
        automorphism: Option<PathBuf>,
    },
    /// Build r_AM or the twisted r_B and verify it
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        automorphism: Option<PathBuf>,
    },
    /// Verify an r-matrix series document
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Apply the gauge e^χ to an r-matrix
    Gauge {
        #[arg(long)]
        input: PathBuf,
        /// χ series document
        #[arg(long)]
        chi: PathBuf,
    },
    /// Extend a moduli point to the unique block-form r-matrix
    Solve {
        /// Document with a "point" tensor
        #[arg(long)]
        point: PathBuf,
    },
    /// Find a gauge taking one r-matrix to another with the same base point
    Equivalize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Am,
    Twisted,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub field: String,
    pub checks: Vec<ReportCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
    pub elapsed_ms: u128,
}

impl Report {
    fn new(command: &str, field: FieldKind) -> Self {
        Report {
            command: command.to_string(),
            field: field.to_string(),
            checks: Vec::new(),
            verify: None,
            error: None,
            exit_code: EXIT_PASS,
            elapsed_ms: 0,
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: Option<String>) {
        self.checks.push(ReportCheck { name: name.to_string(), passed, detail });
    }

    fn set_verify(&mut self, v: VerifyReport) {
        if !v.passed() {
            self.exit_code = self.exit_code.max(EXIT_VERIFY);
        }
        self.verify = Some(v);
    }

    pub fn render(&self) -> String {
        let mut out = format!("dynr {} over {}\n", self.command, self.field);
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => out.push_str(&format!("{status} {}: {d}\n", c.name)),
                None => out.push_str(&format!("{status} {}\n", c.name)),
            }
        }
        if let Some(v) = &self.verify {
            for c in v.checks() {
                out.push_str(&render_residual(c));
            }
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        out
    }
}

fn render_residual(c: &ResidualCheck) -> String {
    match &c.first_failure {
        None => format!("PASS {} through degree {}\n", c.name, c.through_degree),
        Some(f) => format!(
            "FAIL {} at degree {}: coefficient of {} at [{}] = {} (nonzeros by degree {:?})\n",
            c.name,
            f.degree,
            f.monomial,
            f.labels.join(", "),
            f.value,
            c.nonzeros_by_degree
        ),
    }
}

/// A failure that ends the command with a given exit code.
#[derive(Debug)]
struct Abort {
    code: i32,
    message: String,
}

impl Abort {
    fn precondition(message: impl Into<String>) -> Self {
        Abort { code: EXIT_PRECONDITION, message: message.into() }
    }
}

impl From<IoError> for Abort {
    fn from(e: IoError) -> Self {
        let code = match e {
            IoError::Lie(_) => EXIT_PRECONDITION,
            _ => EXIT_PARSE,
        };
        Abort { code, message: e.to_string() }
    }
}

impl From<LieError> for Abort {
    fn from(e: LieError) -> Self {
        Abort::precondition(e.to_string())
    }
}

impl From<RMatrixError> for Abort {
    fn from(e: RMatrixError) -> Self {
        Abort::precondition(e.to_string())
    }
}

impl From<GaugeError> for Abort {
    fn from(e: GaugeError) -> Self {
        let code = match e {
            GaugeError::NotEquivalent { .. } => EXIT_VERIFY,
            _ => EXIT_PRECONDITION,
        };
        Abort { code, message: e.to_string() }
    }
}

impl From<ModuliError> for Abort {
    fn from(e: ModuliError) -> Self {
        let code = match e {
            ModuliError::NotModuliPoint(_) | ModuliError::Precondition(_) | ModuliError::Lie(_) | ModuliError::RMatrix(_) => {
                EXIT_PRECONDITION
            }
            _ => EXIT_VERIFY,
        };
        Abort { code, message: e.to_string() }
    }
}

fn read(path: &std::path::Path) -> Result<Document, Abort> {
    Ok(Document::read(&path.to_string_lossy())?)
}

fn write(path: &Option<PathBuf>, doc: &Document) -> Result<(), Abort> {
    if let Some(p) = path {
        std::fs::write(p, doc.to_pretty())
            .map_err(|e| Abort { code: EXIT_PRECONDITION, message: format!("{}: {e}", p.display()) })?;
    }
    Ok(())
}

/// Algebra, `Ω` and automorphism for a command. A series document that
/// carries its own algebra section takes precedence over `--algebra`.
struct Context<F: Scalar> {
    doc: Document,
    alg: LieAlgebra<F>,
    casimir: Option<Casimir<F>>,
}

impl<F: Scalar> Context<F> {
    fn load(common: &Common, input: Option<&Document>) -> Result<Self, Abort> {
        let doc = match (input.filter(|d| d.has("algebra")), &common.algebra) {
            (Some(d), _) => d.clone(),
            (None, Some(p)) => read(p)?,
            (None, None) => return Err(Abort { code: EXIT_PARSE, message: "no algebra given (use --algebra)".into() }),
        };
        let alg: LieAlgebra<F> = doc.algebra()?;
        let casimir = doc.casimir(alg.dim())?;
        Ok(Context { doc, alg, casimir })
    }

    fn casimir(&self) -> Result<&Casimir<F>, Abort> {
        self.casimir.as_ref().ok_or_else(|| Abort::precondition("the algebra document has no omega or form"))
    }

    fn automorphism(&self, path: &Option<PathBuf>) -> Result<Option<Automorphism<F>>, Abort> {
        match path {
            Some(p) => Ok(read(p)?.automorphism(self.alg.dim())?),
            None => Ok(self.doc.automorphism(self.alg.dim())?),
        }
    }
}

fn require_degree(k: usize) -> Result<(), Abort> {
    if k == 0 {
        return Err(Abort::precondition("--degree must be at least 1"));
    }
    Ok(())
}

fn shape_check<F: Scalar>(alg: &LieAlgebra<F>, s: &SeriesMap<F>, legs: u32, what: &str) -> Result<(), Abort> {
    if s.num_vars() != alg.num_vars() || s.target_dim() != alg.dim().pow(legs) {
        return Err(Abort::precondition(format!(
            "{what} has {} variables and {} components; the algebra needs {} and {}",
            s.num_vars(),
            s.target_dim(),
            alg.num_vars(),
            alg.dim().pow(legs)
        )));
    }
    Ok(())
}

fn run_field<F: Scalar>(cli: &Cli, report: &mut Report) -> Result<(), Abort> {
    let c = &cli.common;
    match &cli.command {
        Command::Validate { automorphism } => {
            let ctx = Context::<F>::load(c, None)?;
            let b = ctx.automorphism(automorphism)?;
            let v = validate(&ctx.alg, ctx.casimir.as_ref(), b.as_ref());
            for chk in &v.checks {
                report.check(&chk.name, chk.passed, chk.witness.clone());
            }
            if !v.all_passed() {
                report.exit_code = EXIT_PRECONDITION;
            }
        }
        Command::Construct { kind, automorphism } => {
            require_degree(c.degree)?;
            let ctx = Context::<F>::load(c, None)?;
            let cas = ctx.casimir()?;
            let (alg, casimir, series) = match kind {
                ConstructKind::Am => {
                    let r = construct_am(&ctx.alg, cas, c.degree)?;
                    (ctx.alg.clone(), cas.clone(), r.into_series())
                }
                ConstructKind::Twisted => {
                    let b = ctx
                        .automorphism(automorphism)?
                        .ok_or_else(|| Abort::precondition("twisted construction needs an automorphism"))?;
                    if b.order() > 2 && F::root_of_unity(b.order(), 1).is_none() {
                        return Err(Abort::precondition(format!(
                            "order-{} automorphism needs --field cyclotomic:{}",
                            b.order(),
                            b.order()
                        )));
                    }
                    let tw = construct_twisted(&ctx.alg, cas, &b, c.degree)?;
                    report.check("respects_grading", tw.respects_grading(), None);
                    (tw.setup.algebra.clone(), tw.setup.casimir.clone(), tw.rmatrix.into_series())
                }
            };
            report.set_verify(verify(&alg, casimir.omega(), &series));
            let d = alg.dim();
            write(&c.out, &series_document(&alg, Some(&casimir), &series, &[d, d]))?;
        }
        Command::Verify { input } => {
            let doc = read(input)?;
            let ctx = Context::<F>::load(c, Some(&doc))?;
            let r: SeriesMap<F> = doc.series()?;
            shape_check(&ctx.alg, &r, 2, "the series")?;
            if r.trunc() == 0 {
                return Err(Abort::precondition("the series must be known through degree at least 1"));
            }
            report.set_verify(verify(&ctx.alg, ctx.casimir()?.omega(), &r));
        }
        Command::Gauge { input, chi } => {
            let doc = read(input)?;
            let ctx = Context::<F>::load(c, Some(&doc))?;
            let r: SeriesMap<F> = doc.series()?;
            shape_check(&ctx.alg, &r, 2, "the series")?;
            let chi: SeriesMap<F> = read(chi)?.series()?;
            shape_check(&ctx.alg, &chi, 1, "chi")?;
            let g = GaugeElement::new(&ctx.alg, chi)?;
            // a χ file is a polynomial, so a zero χ is the exact identity
            let rg = if g.is_identity() { r.clone() } else { gauge_transform(&ctx.alg, &r, &g) };
            if rg.trunc() >= 1 {
                report.set_verify(verify(&ctx.alg, ctx.casimir()?.omega(), &rg));
            }
            let d = ctx.alg.dim();
            let mut out = doc.clone();
            out.insert("series", series_to_json(&rg, &[d, d]));
            write(&c.out, &out)?;
        }
        Command::Solve { point } => {
            require_degree(c.degree)?;
            let pdoc = read(point)?;
            let ctx = Context::<F>::load(c, Some(&pdoc))?;
            let cas = ctx.casimir()?;
            let x = pdoc.tensor2::<F>("point", ctx.alg.dim())?;
            let x = ModuliPoint::new(&ctx.alg, cas, x)?;
            report.check("moduli_point", true, None);
            let ext = solve_extension(&ctx.alg, cas, &x, c.degree)?;
            report.set_verify(ext.report.clone());
            let d = ctx.alg.dim();
            write(&c.out, &series_document(&ctx.alg, Some(cas), ext.rmatrix.series(), &[d, d]))?;
        }
        Command::Equivalize { input, target } => {
            let doc = read(input)?;
            let ctx = Context::<F>::load(c, Some(&doc))?;
            let r: SeriesMap<F> = doc.series()?;
            let rho: SeriesMap<F> = read(target)?.series()?;
            shape_check(&ctx.alg, &r, 2, "the input series")?;
            shape_check(&ctx.alg, &rho, 2, "the target series")?;
            let g = gauge_equivalize(&ctx.alg, &r, &rho)?;
            let through = r.trunc().min(rho.trunc()).saturating_sub(1);
            report.check("equivalent", true, Some(format!("r^g = rho through degree {through}")));
            let d = ctx.alg.dim();
            let mut out = crate::io::algebra_document(&ctx.alg, ctx.casimir.as_ref());
            out.insert("series", series_to_json(g.chi(), &[d]));
            write(&c.out, &out)?;
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Construct { .. } => "construct",
        Command::Verify { .. } => "verify",
        Command::Gauge { .. } => "gauge",
        Command::Solve { .. } => "solve",
        Command::Equivalize { .. } => "equivalize",
    }
}

/// The session field: `--field`, else the algebra document's `field`, else rational.
fn session_field(cli: &Cli) -> Result<FieldKind, Abort> {
    if let Some(f) = &cli.common.field {
        return f.parse().map_err(|e: crate::scalar::ScalarError| Abort { code: EXIT_PARSE, message: e.to_string() });
    }
    if let Some(p) = &cli.common.algebra {
        if let Ok(doc) = Document::read(&p.to_string_lossy()) {
            if let Some(k) = doc.field()? {
                return Ok(k);
            }
        }
    }
    Ok(FieldKind::Rational)
}

fn dispatch(cli: &Cli, field: FieldKind, report: &mut Report) -> Result<(), Abort> {
    match field {
        FieldKind::Rational => run_field::<Rational>(cli, report),
        FieldKind::Cyclotomic(1) | FieldKind::Cyclotomic(2) => run_field::<Rational>(cli, report),
        FieldKind::Cyclotomic(3) => run_field::<Cyclotomic<3>>(cli, report),
        FieldKind::Cyclotomic(4) => run_field::<Cyclotomic<4>>(cli, report),
        FieldKind::Cyclotomic(5) => run_field::<Cyclotomic<5>>(cli, report),
        FieldKind::Cyclotomic(6) => run_field::<Cyclotomic<6>>(cli, report),
        FieldKind::Cyclotomic(8) => run_field::<Cyclotomic<8>>(cli, report),
        FieldKind::Cyclotomic(12) => run_field::<Cyclotomic<12>>(cli, report),
        FieldKind::Cyclotomic(n) => Err(Abort::precondition(format!("cyclotomic:{n} is not built in (use 3, 4, 5, 6, 8 or 12)"))),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("DYNR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization (tests running in one process) is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs a parsed command and returns the report; the report's exit code is
/// the process exit code.
pub fn execute(cli: &Cli) -> Report {
    configure_threads();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let mut report = match session_field(cli) {
        Ok(field) => {
            let mut report = Report::new(name, field);
            if let Err(a) = dispatch(cli, field, &mut report) {
                report.exit_code = a.code;
                report.error = Some(a.message);
            }
            report
        }
        Err(a) => {
            let mut report = Report::new(name, FieldKind::Rational);
            report.exit_code = a.code;
            report.error = Some(a.message);
            report
        }
    };
    report.elapsed_ms = start.elapsed().as_millis();
    if let Some(p) = &cli.common.report {
        let text = serde_json::to_string_pretty(&json!(report)).expect("report serializes");
        if let Err(e) = std::fs::write(p, text + "\n") {
            report.error = Some(format!("{}: {e}", p.display()));
            report.exit_code = report.exit_code.max(EXIT_PRECONDITION);
        }
    }
    report
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let report = execute(&cli);
    print!("{}", report.render());
    report.exit_code
}

//! Commands behind the `skewhom` binary. Every command produces a
//! [`SuiteReport`]; the binary only parses flags, renders and picks the exit
//! code.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use skewhom::algebra::{CheckReport, Verdict};
use skewhom::cohomology::{check_d_squared_with, d_squared, Cochain, Coboundary};
use skewhom::constructions::{
    ad_alpha_squared_counterexample_with, alpha_theta, alpha_zero, block_diagonal, build_gl_alpha, build_r3_cross,
    build_semi_euclidean, check_pseudo_adjoint_identity, rotation_e3, ConstructionError, GlContext,
};
use skewhom::io::{cochain_to_json, load_algebra, load_representation, parse_cochain, DynAlgebra, DynRepresentation, IoError, ScalarText};
use skewhom::representation::Representation;
use skewhom::scalar::{format_rational, int, parse_rational, QuadExt, Rational, Scalar};
use skewhom::semi_euclidean::{check_vstar_closure, nullspace_table};
use skewhom::{HomAlgebra, Matrix, Strategy};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Failed(String),
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

impl CheckOutcome {
    pub fn from_report<S: Scalar>(name: impl Into<String>, r: &CheckReport<S>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: r.passed,
            witness: r.witness.as_ref().map(|w| w.describe()),
            note: r.note.clone(),
            millis: None,
        }
    }

    pub fn new(name: impl Into<String>, passed: bool, note: Option<String>) -> Self {
        CheckOutcome { name: name.into(), passed, witness: None, note, millis: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub command: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    /// Extra rendered material such as residual tables.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl SuiteReport {
    pub fn new(command: impl Into<String>, checks: Vec<CheckOutcome>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { command: command.into(), passed, checks, details: Vec::new() }
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

pub fn render(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Text => render_text(report),
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Csv => render_csv(report),
    }
}

fn render_text(report: &SuiteReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        out.push_str(if c.passed { "PASS  " } else { "FAIL  " });
        out.push_str(&c.name);
        if let Some(ms) = c.millis {
            out.push_str(&format!("  ({ms:.1} ms)"));
        }
        out.push('\n');
        if let Some(note) = &c.note {
            out.push_str(&format!("      {note}\n"));
        }
        if let Some(w) = &c.witness {
            out.push_str(&format!("      witness: {w}\n"));
        }
    }
    for d in &report.details {
        out.push_str(d);
        out.push('\n');
    }
    out.push_str(&format!(
        "{}: {} checks, {} failed\n",
        report.command,
        report.checks.len(),
        report.failed()
    ));
    out
}

fn render_csv(report: &SuiteReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "passed", "witness", "note", "millis"]).expect("in-memory write");
    for c in &report.checks {
        let ms = c.millis.map(|m| format!("{m:.3}")).unwrap_or_default();
        w.write_record([
            c.name.as_str(),
            if c.passed { "true" } else { "false" },
            c.witness.as_deref().unwrap_or(""),
            c.note.as_deref().unwrap_or(""),
            ms.as_str(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
}

/// Options for [`run_verify`].
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub thetas: Vec<Rational>,
    pub ks: Vec<usize>,
    pub ss: Vec<usize>,
    pub seed: u64,
    pub samples: usize,
    pub strategy: Strategy,
    pub timing: bool,
    /// Alters one structure constant of every semi-Euclidean algebra.
    pub mutate: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            thetas: vec![int(0), int(1), Rational::new(1.into(), 2.into())],
            ks: vec![1, 2],
            ss: vec![0, 1, 2],
            seed: 0,
            samples: 200,
            strategy: Strategy::default(),
            timing: false,
            mutate: false,
        }
    }
}

pub fn parse_theta_list(items: &[String]) -> Result<Vec<Rational>, CliError> {
    let thetas = items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_rational(s).map_err(|e| CliError::Usage(format!("bad theta {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if thetas.is_empty() {
        return Err(CliError::Usage("theta list is empty".into()));
    }
    Ok(thetas)
}

struct Registry {
    timing: bool,
    checks: Vec<CheckOutcome>,
}

impl Registry {
    fn run(&mut self, f: impl FnOnce() -> CheckOutcome) {
        let start = Instant::now();
        let mut outcome = f();
        if self.timing {
            outcome.millis = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        self.checks.push(outcome);
    }
}

fn verdict_check<S: Scalar>(name: String, g: &HomAlgebra<S>, expected: &[Verdict]) -> CheckOutcome {
    let c = g.classify();
    let mut out = CheckOutcome::new(name, expected.contains(&c.verdict), Some(format!("verdict {:?}", c.verdict)));
    out.witness = c.witness.as_ref().map(|w| w.describe());
    out
}

fn pseudo_adjoint_check<S: Scalar>(name: String, g: &HomAlgebra<S>) -> CheckOutcome {
    match check_pseudo_adjoint_identity(g) {
        Ok(r) => CheckOutcome::from_report(name, &r),
        Err(e) => CheckOutcome::new(name, false, Some(e.to_string())),
    }
}

fn counterexample_check<S: Scalar>(name: String, ctx: &GlContext<S>, strategy: Strategy) -> CheckOutcome {
    match ad_alpha_squared_counterexample_with(ctx, strategy) {
        Ok(c) => {
            let res: Vec<String> = c.residual.iter().map(ToString::to_string).collect();
            CheckOutcome::new(name, true, Some(format!("triple {:?}, residual [{}]", c.triple, res.join(", "))))
        }
        Err(e) => CheckOutcome::new(name, false, Some(e.to_string())),
    }
}

/// The full verification suite over the builtin families.
pub fn run_verify(cfg: &SuiteConfig) -> Result<SuiteReport, CliError> {
    if cfg.thetas.is_empty() {
        return Err(CliError::Usage("theta list is empty".into()));
    }
    if cfg.samples == 0 {
        return Err(CliError::Usage("samples must be at least 1".into()));
    }
    let mut reg = Registry { timing: cfg.timing, checks: Vec::new() };
    let st = cfg.strategy;
    for theta in &cfg.thetas {
        let t = format_rational(theta);
        let (mut g, _) = build_semi_euclidean(theta)?;
        if cfg.mutate {
            let bumped = g.bracket(0, 1)[2].clone() + QuadExt::from_int(1, g.ctx());
            g = g.with_structure_constant(0, 1, 2, bumped).map_err(|e| CliError::Failed(e.to_string()))?;
        }
        reg.run(|| verdict_check(format!("se4[{t}].classify"), &g, &[Verdict::SkewHomLie]));
        reg.run(|| match check_vstar_closure(theta, cfg.samples, cfg.seed, st) {
            Ok(r) => CheckOutcome::from_report(format!("se4[{t}].vstar_closure"), &r),
            Err(e) => CheckOutcome::new(format!("se4[{t}].vstar_closure"), false, Some(e.to_string())),
        });
        reg.run(|| {
            let r = (1..=3).map(|m| g.check_power_sign_law(m)).fold(CheckReport::pass(), CheckReport::and);
            CheckOutcome::from_report(format!("se4[{t}].power_sign"), &r)
        });
        reg.run(|| pseudo_adjoint_check(format!("se4[{t}].pseudo_adjoint"), &g));
        let rep = Representation::zero(g.clone(), Matrix::identity(4, g.ctx())).expect("identity is invertible");
        for &k in &cfg.ks {
            for &s in &cfg.ss {
                reg.run(|| CheckOutcome::from_report(format!("se4[{t}].d2[k={k},s={s}]"), &check_d_squared_with(&rep, k, s, st)));
            }
        }
        let gl = GlContext::new(alpha_theta(theta))?;
        let h = build_gl_alpha(&gl)?;
        reg.run(|| verdict_check(format!("gl2[{t}].classify"), &h, &[Verdict::SkewHomLie]));
        reg.run(|| {
            let ad = gl.ad_matrix();
            CheckOutcome::new(format!("gl2[{t}].ad_involution"), ad.mul(&ad).map(|m| m.is_identity()).unwrap_or(false), None)
        });
        reg.run(|| counterexample_check(format!("gl2[{t}].ad_squared_counterexample"), &gl, st));
    }
    let gl4 = GlContext::new(block_diagonal(&alpha_zero::<Rational>(&()), 2))?;
    reg.run(|| counterexample_check("gl4[0].ad_squared_counterexample".into(), &gl4, st));
    let diag = Matrix::<Rational>::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]], &()).expect("3x3");
    let r3 = [
        ("r3[diag(1,1,-1)].classify", diag, vec![Verdict::SkewHomLie]),
        ("r3[id].classify", Matrix::identity(3, &()), vec![Verdict::Lie, Verdict::HomLie]),
        ("r3[rot90].classify", rotation_e3(&()), vec![Verdict::HomLie]),
    ];
    for (name, a, expected) in r3 {
        let g = build_r3_cross(&a)?;
        reg.run(|| verdict_check(name.into(), &g, &expected));
    }
    let gl0 = GlContext::new(alpha_zero::<Rational>(&()))?;
    let h0 = build_gl_alpha(&gl0)?;
    reg.run(|| pseudo_adjoint_check("gl2[0].pseudo_adjoint".into(), &h0));
    let neg = Representation::negated_identity(&gl0).map_err(|e| CliError::Failed(e.to_string()))?;
    reg.run(|| CheckOutcome::from_report("gl2[0].rho=-id.representation", &neg.check_representation()));
    for &k in &cfg.ks {
        for &s in &cfg.ss {
            reg.run(|| CheckOutcome::from_report(format!("gl2[0].rho=-id.d2[k={k},s={s}]"), &check_d_squared_with(&neg, k, s, st)));
        }
    }
    Ok(SuiteReport::new("verify", reg.checks))
}

/// Loads a file or builtin and classifies it.
pub fn run_check_algebra(arg: &str) -> Result<SuiteReport, CliError> {
    let g = load_algebra(arg)?;
    let checks = skewhom::with_algebra!(&g, g => algebra_checks(g));
    Ok(SuiteReport::new(format!("check-algebra {arg}"), checks))
}

fn algebra_checks<S: Scalar>(g: &HomAlgebra<S>) -> Vec<CheckOutcome> {
    let c = g.classify();
    let sign = match c.twist_sign {
        Some(e) => format!("twist sign {e:+}"),
        None => "no twist sign".into(),
    };
    let mut classify = CheckOutcome::new(
        "classify",
        c.verdict != Verdict::Neither,
        Some(format!("verdict {:?}, regular {}, {sign}", c.verdict, c.regular)),
    );
    classify.witness = c.witness.as_ref().map(|w| w.describe());
    vec![classify, CheckOutcome::from_report("hom_jacobi", &g.check_hom_jacobi())]
}

/// `d^s∘d^s = 0` on every basis cochain, plus `d^s η` and `d^s d^s η` for a
/// supplied cochain.
pub fn run_cohomology(
    algebra: &str,
    rep: Option<&Path>,
    cochain: Option<&Path>,
    k: usize,
    s: usize,
    strategy: Strategy,
) -> Result<SuiteReport, CliError> {
    let g = load_algebra(algebra)?;
    let rep = match rep {
        Some(p) => load_representation(p, Some(&g))?,
        None => zero_representation(&g)?,
    };
    let eta_text = cochain
        .map(|p| std::fs::read_to_string(p).map_err(|e| IoError::Io { path: p.display().to_string(), message: e.to_string() }))
        .transpose()?;
    let mut report = match &rep {
        DynRepresentation::Rational(r) => cohomology_report(r, k, s, eta_text.as_deref(), strategy)?,
        DynRepresentation::Quadratic(r) => cohomology_report(r, k, s, eta_text.as_deref(), strategy)?,
        DynRepresentation::Float(r) => cohomology_report(r, k, s, eta_text.as_deref(), strategy)?,
    };
    report.command = format!("cohomology {algebra} k={k} s={s}");
    Ok(report)
}

fn zero_representation(g: &DynAlgebra) -> Result<DynRepresentation, CliError> {
    let fail = |e: skewhom::representation::RepresentationError| CliError::Failed(e.to_string());
    Ok(match g {
        DynAlgebra::Rational(g) => {
            DynRepresentation::Rational(Representation::zero(g.clone(), Matrix::identity(g.dim(), g.ctx())).map_err(fail)?)
        }
        DynAlgebra::Quadratic(g, _) => {
            DynRepresentation::Quadratic(Representation::zero(g.clone(), Matrix::identity(g.dim(), g.ctx())).map_err(fail)?)
        }
        DynAlgebra::Float(g) => {
            DynRepresentation::Float(Representation::zero(g.clone(), Matrix::identity(g.dim(), g.ctx())).map_err(fail)?)
        }
    })
}

fn cohomology_report<S: ScalarText>(
    rep: &Representation<S>,
    k: usize,
    s: usize,
    eta: Option<&str>,
    strategy: Strategy,
) -> Result<SuiteReport, CliError> {
    let (n, m) = (rep.algebra().dim(), rep.m());
    let mut checks = vec![CheckOutcome::new("representation", rep.check_representation().passed, None)];
    checks[0].note = Some(format!("n = {n}, m = {m}"));
    checks.push(CheckOutcome::from_report("d2", &check_d_squared_with(rep, k, s, strategy)));
    let mut details = Vec::new();
    if let Some(text) = eta {
        let eta: Cochain<S> = parse_cochain(text, n, m, rep.ctx())?;
        let failed = |e: skewhom::cohomology::CohomologyError| CliError::Failed(e.to_string());
        let d = Coboundary::new(rep, s).apply(&eta).map_err(failed)?;
        let dd = d_squared(&eta, rep, s).map_err(failed)?;
        details.push(format!("d^{s} eta =\n{}", cochain_to_json(&d)));
        details.push(format!("d^{s} d^{s} eta =\n{}", cochain_to_json(&dd)));
        checks.push(CheckOutcome::new("d2(eta)", dd.is_zero(), Some(format!("degree {} input", eta.degree()))));
    } else {
        details.push(format!("residual table (degree {k} basis cochains, d^{s} d^{s} eta):"));
        let d = Coboundary::with_strategy(rep, s, strategy);
        for t in skewhom::cohomology::increasing_tuples(n, k) {
            for c in 0..m {
                let eta = Cochain::basis(k, n, m, t.clone(), c, rep.ctx()).expect("valid basis cochain");
                let dd = d.apply(&eta).and_then(|x| d.apply(&x)).map_err(|e| CliError::Failed(e.to_string()))?;
                let nonzero = dd.entries().filter(|(_, v)| v.iter().any(|x| !x.is_zero_in(rep.ctx()))).count();
                details.push(format!("  eta{t:?}=e{c}: {}", if nonzero == 0 { "0".into() } else { format!("{nonzero} nonzero entries") }));
            }
        }
    }
    let mut report = SuiteReport::new("cohomology", checks);
    report.details = details;
    Ok(report)
}

/// Membership table as CSV.
pub fn run_nullspace(theta: &Rational, samples: usize, seed: u64, strategy: Strategy) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in nullspace_table(theta, samples, seed, strategy) {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
}

/// `gl2` or `gl4` (block `α`), at the given `θ`.
pub fn run_counterexample(family: &str, theta: &Rational, strategy: Strategy) -> Result<SuiteReport, CliError> {
    let blocks = match family {
        "gl2" => 1,
        "gl4" => 2,
        other => return Err(CliError::Usage(format!("unknown family {other:?}, expected gl2 or gl4"))),
    };
    let ctx = GlContext::new(block_diagonal(&alpha_theta(theta), blocks))?;
    let t = format_rational(theta);
    let check = counterexample_check(format!("{family}[{t}].ad_squared_counterexample"), &ctx, strategy);
    Ok(SuiteReport::new(format!("counterexample {family}"), vec![check]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig { ks: vec![1], ss: vec![0], samples: 20, ..SuiteConfig::default() }
    }

    #[test]
    fn verify_fails_only_on_gl2_counterexamples() {
        let r = run_verify(&quick()).unwrap();
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["gl2[0].ad_squared_counterexample", "gl2[1].ad_squared_counterexample", "gl2[1/2].ad_squared_counterexample"]);
        assert!(!r.passed);
        assert!(r.checks.iter().any(|c| c.name == "gl4[0].ad_squared_counterexample" && c.passed));
    }

    #[test]
    fn mutation_is_reported_with_witness() {
        let r = run_verify(&SuiteConfig { mutate: true, thetas: vec![int(1)], ..quick() }).unwrap();
        let c = r.checks.iter().find(|c| c.name == "se4[1].classify").unwrap();
        assert!(!c.passed);
        assert!(c.witness.is_some());
    }

    #[test]
    fn empty_theta_is_usage_error() {
        assert!(matches!(run_verify(&SuiteConfig { thetas: vec![], ..quick() }), Err(CliError::Usage(_))));
        assert!(matches!(parse_theta_list(&["".into()]), Err(CliError::Usage(_))));
        assert!(matches!(parse_theta_list(&["x".into()]), Err(CliError::Usage(_))));
    }

    #[test]
    fn report_json_round_trip() {
        let r = run_verify(&SuiteConfig { timing: true, ..quick() }).unwrap();
        let text = render(&r, Format::Json);
        assert_eq!(serde_json::from_str::<SuiteReport>(&text).unwrap(), r);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = render(&run_verify(&quick()).unwrap(), Format::Json);
        let b = render(&run_verify(&SuiteConfig { strategy: Strategy::Sequential, ..quick() }).unwrap(), Format::Json);
        assert_eq!(a, b);
    }

    #[test]
    fn csv_has_one_row_per_check() {
        let r = run_counterexample("gl4", &int(0), Strategy::default()).unwrap();
        let text = render(&r, Format::Csv);
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("name,passed,witness,note,millis"));
    }

    #[test]
    fn cohomology_builtins() {
        let r = run_cohomology("se4:theta=1", None, None, 1, 0, Strategy::default()).unwrap();
        assert!(r.passed);
        let r = run_cohomology("gl2:theta=0", None, None, 2, 1, Strategy::default()).unwrap();
        assert!(r.passed);
        let r = run_cohomology("se4:theta=1", None, None, 4, 0, Strategy::default()).unwrap();
        assert!(r.passed);
    }
}

use std::path::Path;

use hicat_core::coeff::{base_pairs, covariance_match, Assignment, CoefficientSystem, MatchResult};
use hicat_core::conjugation::{validate_conjugation, verify_folding_laws};
use hicat_core::convolution::{validate_embedded_category, ConvolutionAlgebra, PositivityOutcome, Section};
use hicat_core::cstar::{
    cstar_suite, eh_collapse_all, norm_equivalence, op_norm, CheckConfig, CstarReport, EquivalenceReport,
};
use hicat_core::hypermatrix::{hinvol, hmul, hnorm, Hypermatrix};
use hicat_core::involutive::validate_family;
use hicat_core::linalg::CMat;
use hicat_core::ncat::{
    check_exchange, check_nc_exchange, validate_full_depth, validate_globular, validate_partial_category, LevelSet,
    MultiCategory,
};
use hicat_core::sampling::{rng_from_seed, structured_matrix};
use hicat_core::{Complex64, HyperError};
use rayon::prelude::*;
use serde::Serialize;

use crate::catfile::{load_category, parse_level_set, write_category, Base, CategoryFile, ParseError};
use crate::coeffs::{parse_dims, AnyCoeff};
use crate::output::{self, fmt_num, json, CheckResult, NamedExchangeWitness, Outcome, RunConfig};
use crate::secfile::{parse_section, write_section};
use crate::{AlgebraArgs, Cli, Command, CompArgs, ExchangeMode, Format, HyperCommand, SampleSet, SuiteCommand, Target};

/// Failures that stop a command before it can produce a verdict (exit 2).
enum Failure {
    Parse(ParseError),
    Input(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

type Res = Result<Outcome, Failure>;

struct Ctx {
    command: &'static str,
    format: Format,
    config: RunConfig,
}

impl Ctx {
    fn check(&self) -> CheckConfig {
        CheckConfig { tol: self.config.tol, samples: self.config.samples, seed: self.config.seed, ..Default::default() }
    }

    /// Prints the report and exits 0 when `ok`, 1 otherwise.
    fn verdict<T: Serialize>(&self, ok: bool, body: T, text: impl FnOnce() -> String) -> Outcome {
        let stdout = match self.format {
            Format::Json => json(self.command, ok, self.config, body),
            Format::Text => text(),
        };
        Outcome { code: if ok { 0 } else { 1 }, stdout, stderr: String::new() }
    }

    fn failure(&self, f: Failure) -> Outcome {
        let (kind, parse, message) = match &f {
            Failure::Parse(p) => ("parse", Some(p), p.to_string()),
            Failure::Input(m) => ("input", None, m.clone()),
        };
        let stdout = match self.format {
            Format::Json => output::error_json(self.command, self.config, kind, parse, &message),
            Format::Text => format!("error: {message}\n"),
        };
        Outcome { code: 2, stdout, stderr: format!("hicat {}: {message}\n", self.command) }
    }

    /// Writes `data` to `out` and reports, or prints `data`.
    fn emit(&self, data: String, out: Option<&Path>, what: &str) -> Res {
        match out {
            None => Ok(Outcome::ok(data)),
            Some(path) => {
                std::fs::write(path, &data).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
                #[derive(Serialize)]
                struct Written<'a> {
                    output: String,
                    kind: &'a str,
                }
                let p = path.display().to_string();
                Ok(self.verdict(true, Written { output: p.clone(), kind: what }, || format!("wrote {what} to {p}\n")))
            }
        }
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    use Format::*;
    let (command, default) = match &cli.command {
        Command::Validate { .. } => ("validate", Json),
        Command::Convolve { .. } => ("convolve", Text),
        Command::Involve { .. } => ("involve", Text),
        Command::Norm { .. } => ("norm", Text),
        Command::Hyper(HyperCommand::Mul { .. }) => ("hyper mul", Text),
        Command::Hyper(HyperCommand::Invol { .. }) => ("hyper invol", Text),
        Command::Hyper(HyperCommand::Norm { .. }) => ("hyper norm", Text),
        Command::Suite(SuiteCommand::Cstar { .. }) => ("suite cstar", Json),
        Command::Suite(SuiteCommand::Collapse { .. }) => ("suite collapse", Json),
        Command::Suite(SuiteCommand::Equivalence { .. }) => ("suite equivalence", Json),
        Command::Suite(SuiteCommand::Positivity { .. }) => ("suite positivity", Json),
        Command::Embed { .. } => ("embed", Text),
        Command::Export { .. } => ("export", Text),
    };
    let ctx = Ctx {
        command,
        format: cli.report.unwrap_or(default),
        config: RunConfig { seed: cli.seed, tol: cli.tol, samples: cli.samples },
    };
    if !(cli.tol > 0.0) {
        return ctx.failure(Failure::Input("--tol must be positive".into()));
    }
    let result = match &cli.command {
        Command::Validate { file, exchange, conjugation, hermitian } => validate(&ctx, file, *exchange, *conjugation, *hermitian),
        Command::Convolve { alg, comp, a, b, out } => convolve(&ctx, alg, comp, a, b, out.as_deref()),
        Command::Involve { alg, involution, a, out } => involve(&ctx, alg, involution.as_deref(), a, out.as_deref()),
        Command::Norm { alg, comp, a } => norm(&ctx, alg, comp, a),
        Command::Hyper(h) => hyper(&ctx, h),
        Command::Suite(SuiteCommand::Cstar { target }) => suite_cstar(&ctx, target),
        Command::Suite(SuiteCommand::Collapse { file }) => suite_collapse(&ctx, file),
        Command::Suite(SuiteCommand::Equivalence { target }) => suite_equivalence(&ctx, target),
        Command::Suite(SuiteCommand::Positivity { target }) => suite_positivity(&ctx, target),
        Command::Embed { alg, sample, out } => embed(&ctx, alg, *sample, out.as_deref()),
        Command::Export { file, out } => {
            load_category(file).map_err(Failure::from).and_then(|cf| ctx.emit(write_category(&cf), out.as_deref(), "category"))
        }
    };
    result.unwrap_or_else(|f| ctx.failure(f))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::Parse(ParseError { file: path.display().to_string(), line: 0, message: format!("cannot read: {e}") })
    })
}

#[derive(Serialize)]
struct ValidateBody {
    file: String,
    kind: &'static str,
    cells: usize,
    compositions: usize,
    involutions: Vec<String>,
    checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exchange_witness: Option<NamedExchangeWitness>,
}

fn validate(ctx: &Ctx, file: &Path, exchange: Option<ExchangeMode>, conjugation: bool, hermitian: bool) -> Res {
    let cf = load_category(file)?;
    let base = &cf.base;
    let mut checks = Vec::new();
    match base {
        Base::Globular(c) => {
            checks.push(CheckResult::new("category", base, &validate_partial_category(c)));
            checks.push(CheckResult::new("globular", base, &validate_globular(c)));
        }
        Base::FullDepth(c) => checks.push(CheckResult::new("full-depth", base, &validate_full_depth(c))),
    }
    let mut family = cf.family();
    if hermitian {
        for s in &mut family {
            s.hermitian = true;
        }
    }
    if !family.is_empty() {
        let r = validate_family(base, &family).map_err(|e| Failure::Input(e.to_string()))?;
        checks.push(CheckResult::new("involutions", base, &r));
    }
    let mut exchange_witness = None;
    if let Some(mode) = exchange {
        let c = base.as_globular().ok_or_else(|| Failure::Input("exchange checks need a globular category".into()))?;
        match mode {
            ExchangeMode::Full => exchange_witness = check_exchange(c).map(|w| NamedExchangeWitness::new(base, &w)),
            ExchangeMode::Nc => checks.push(CheckResult::new("nc-exchange", base, &check_nc_exchange(c))),
        }
    }
    if conjugation {
        let c = base.as_globular().filter(|c| c.depth() >= 2);
        let c = c.ok_or_else(|| Failure::Input("conjugation checks need a globular category of depth at least 2".into()))?;
        let spec = cf.conjugation.as_ref().ok_or_else(|| Failure::Input("the category file has no [conjugation] section".into()))?;
        let r = validate_conjugation(c, &spec.data, spec.flags).map_err(|e| Failure::Input(e.to_string()))?;
        checks.push(CheckResult::new("conjugation", base, &r));
        let r = verify_folding_laws(c, &spec.data, spec.flags).map_err(|e| Failure::Input(e.to_string()))?;
        checks.push(CheckResult::new("folding", base, &r));
    }
    let ok = checks.iter().all(|c| c.ok) && exchange_witness.is_none();
    let body = ValidateBody {
        file: file.display().to_string(),
        kind: base.kind(),
        cells: base.cell_count(),
        compositions: base.composition_count(),
        involutions: cf.involutions.iter().map(|i| i.name.clone()).collect(),
        checks,
        exchange_witness,
    };
    let text = || {
        let mut s = format!("{} ({} cells, {} compositions): {}\n", body.file, body.cells, body.compositions, if ok { "ok" } else { "FAILED" });
        for c in &body.checks {
            s.push_str(&format!("  {}: {}\n", c.check, if c.ok { "ok".to_string() } else { format!("{} violations", c.violations.len() + c.suppressed) }));
            for v in &c.violations {
                s.push_str(&format!("    {} at {}: {}\n", v.law, v.scope, v.witness.join(" ")));
            }
        }
        if let Some(w) = &body.exchange_witness {
            s.push_str(&format!(
                "  exchange fails: q={} p={} x={} y={} w={} z={}: {} vs {}\n",
                w.q, w.p, w.x, w.y, w.w, w.z, w.lhs, w.rhs.as_deref().unwrap_or("undefined")
            ));
        }
        s
    };
    let text = text();
    Ok(ctx.verdict(ok, &body, || text))
}

type Algebra = ConvolutionAlgebra<Base, AnyCoeff>;

fn comp_index(base: &Base, comp: &CompArgs) -> Result<usize, Failure> {
    match (base, comp.depth, comp.subset.as_deref()) {
        (Base::Globular(c), Some(p), None) if p < c.depth() => Ok(p),
        (Base::Globular(c), Some(p), None) => Err(Failure::Input(format!("depth {p} out of range, the base has depth {}", c.depth()))),
        (Base::FullDepth(c), None, Some(s)) => Ok(parse_level_set(s, c.directions()).map_err(Failure::Input)?.0 as usize),
        (_, None, None) => Ok(0),
        (Base::Globular(_), _, Some(_)) => Err(Failure::Input("--subset needs a full-depth base; use --depth".into())),
        (Base::FullDepth(_), Some(_), _) => Err(Failure::Input("--depth needs a globular base; use --subset".into())),
    }
}

fn product_index(coeff: &AnyCoeff, s: &str) -> Result<usize, Failure> {
    let idx = match (coeff, s.parse::<usize>()) {
        (AnyCoeff::Hyper(h), _) if s.contains('{') || s == "none" || s == "full" => {
            let g = parse_level_set(s, h.dims.len()).map_err(Failure::Input)?;
            h.products.iter().position(|&p| p == g).unwrap_or(usize::MAX)
        }
        (_, Ok(k)) => k,
        _ => usize::MAX,
    };
    if idx < coeff.product_count() {
        Ok(idx)
    } else {
        Err(Failure::Input(format!("`{s}` is not a product of {}", coeff.label())))
    }
}

/// The algebra with the least covariance-preserving assignment. When none
/// exists and the involutions are not needed, every composition uses
/// product 0.
fn build_algebra(cf: &CategoryFile, spec: &str, need_involutions: bool, product: Option<(usize, &str)>) -> Result<Algebra, Failure> {
    let coeff = AnyCoeff::parse(spec).map_err(Failure::Input)?;
    let family = cf.family();
    let count = cf.base.composition_count();
    let pairs = base_pairs(count, &family);
    let mut assignment = match covariance_match(&pairs, count, family.len(), &coeff) {
        MatchResult::Found(a) => a,
        MatchResult::Blocked { pair } if need_involutions => {
            let name = &cf.involutions[pair.involution].name;
            return Err(Failure::Input(format!(
                "no covariance-preserving assignment into {}: involution `{name}` is {} for composition {}",
                coeff.label(),
                if pair.contravariant { "contravariant" } else { "covariant" },
                cf.base.composition_label(pair.composition),
            )));
        }
        MatchResult::Blocked { .. } => Assignment::trivial(count, family.len()),
    };
    if let Some((k, p)) = product {
        assignment.products[k] = product_index(&coeff, p)?;
    }
    ConvolutionAlgebra::with_assignment(cf.base.clone(), coeff, family, assignment).map_err(|e| Failure::Input(e.to_string()))
}

fn load_section(alg: &Algebra, path: &Path) -> Result<Section<CMat>, Failure> {
    let text = read(path)?;
    Ok(parse_section(&text, &path.display().to_string(), alg.base(), alg.coeff().side())?)
}

fn convolve(ctx: &Ctx, args: &AlgebraArgs, comp: &CompArgs, a: &Path, b: &Path, out: Option<&Path>) -> Res {
    let cf = load_category(&args.base)?;
    let k = comp_index(&cf.base, comp)?;
    let alg = build_algebra(&cf, &args.coeff, false, comp.product.as_deref().map(|p| (k, p)))?;
    let (sa, sb) = (load_section(&alg, a)?, load_section(&alg, b)?);
    let c = alg.convolve(k, &sa, &sb).map_err(|e| Failure::Input(e.to_string()))?;
    ctx.emit(write_section(&c, alg.base()), out, "section")
}

fn involve(ctx: &Ctx, args: &AlgebraArgs, name: Option<&str>, a: &Path, out: Option<&Path>) -> Res {
    let cf = load_category(&args.base)?;
    let index = match name {
        Some(n) => cf.involution(n).ok_or_else(|| Failure::Input(format!("no involution named `{n}`")))?,
        None if cf.involutions.is_empty() => return Err(Failure::Input("the base has no involutions".into())),
        None => 0,
    };
    let alg = build_algebra(&cf, &args.coeff, true, None)?;
    let s = alg.involve(index, &load_section(&alg, a)?).map_err(|e| Failure::Input(e.to_string()))?;
    ctx.emit(write_section(&s, alg.base()), out, "section")
}

#[derive(Serialize)]
struct Value {
    value: f64,
}

fn number(ctx: &Ctx, v: f64) -> Outcome {
    ctx.verdict(v.is_finite(), Value { value: v }, || format!("{}\n", fmt_num(v)))
}

fn norm(ctx: &Ctx, args: &AlgebraArgs, comp: &CompArgs, a: &Path) -> Res {
    let cf = load_category(&args.base)?;
    let k = comp_index(&cf.base, comp)?;
    let alg = build_algebra(&cf, &args.coeff, false, comp.product.as_deref().map(|p| (k, p)))?;
    let v = alg.conv_norm(k, &load_section(&alg, a)?).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(number(ctx, v))
}

fn load_hyper(path: &Path) -> Result<Hypermatrix, Failure> {
    let text = read(path)?;
    let file = path.display().to_string();
    Hypermatrix::parse(&text).map_err(|e| match e {
        HyperError::Parse { line, msg } => Failure::Parse(ParseError { file, line, message: msg }),
        other => Failure::Parse(ParseError { file, line: 1, message: other.to_string() }),
    })
}

fn hyper_gamma(s: &str, n: usize) -> Result<LevelSet, Failure> {
    parse_level_set(s, n).map_err(Failure::Input)
}

fn hyper(ctx: &Ctx, cmd: &HyperCommand) -> Res {
    let input = |e: HyperError| Failure::Input(e.to_string());
    match cmd {
        HyperCommand::Mul { gamma, a, b, out } => {
            let (x, y) = (load_hyper(a)?, load_hyper(b)?);
            let z = hmul(hyper_gamma(gamma, x.levels())?, &x, &y).map_err(input)?;
            ctx.emit(z.to_text(), out.as_deref(), "hypermatrix")
        }
        HyperCommand::Invol { gamma, a, out } => {
            let x = load_hyper(a)?;
            let z = hinvol(hyper_gamma(gamma, x.levels())?, &x).map_err(input)?;
            ctx.emit(z.to_text(), out.as_deref(), "hypermatrix")
        }
        HyperCommand::Norm { gamma, a } => {
            let x = load_hyper(a)?;
            let v = hnorm(hyper_gamma(gamma, x.levels())?, &x).map_err(input)?;
            Ok(number(ctx, v))
        }
    }
}

enum Suite {
    Hyper { dims: Vec<usize>, gammas: Vec<LevelSet> },
    Matrix(usize),
    Conv { alg: Box<Algebra>, k: usize, involution: usize },
}

fn suite_target(t: &Target, need_involution: bool) -> Result<Suite, Failure> {
    if let Some(d) = &t.hyper {
        let dims = parse_dims(d).ok_or_else(|| Failure::Input(format!("bad dims `{d}`")))?;
        Hypermatrix::zeros(&dims).map_err(|e| Failure::Input(e.to_string()))?;
        let gammas = if t.gamma == "all" {
            LevelSet::all_subsets(dims.len()).collect()
        } else {
            vec![parse_level_set(&t.gamma, dims.len()).map_err(Failure::Input)?]
        };
        return Ok(Suite::Hyper { dims, gammas });
    }
    if let Some(d) = t.matrix {
        if d == 0 || d > 64 {
            return Err(Failure::Input("--matrix needs 1 <= d <= 64".into()));
        }
        return Ok(Suite::Matrix(d));
    }
    if let (Some(base), Some(coeff)) = (&t.base, &t.coeff) {
        let cf = load_category(base)?;
        let k = comp_index(&cf.base, &t.comp)?;
        let involution = match t.involution.as_deref() {
            Some(n) => cf.involution(n).ok_or_else(|| Failure::Input(format!("no involution named `{n}`")))?,
            None if cf.involutions.is_empty() && need_involution => {
                return Err(Failure::Input("the base has no involutions".into()))
            }
            None => 0,
        };
        let alg = build_algebra(&cf, coeff, need_involution, t.comp.product.as_deref().map(|p| (k, p)))?;
        return Ok(Suite::Conv { alg: Box::new(alg), k, involution });
    }
    Err(Failure::Input("choose a target: --hyper DIMS, --matrix D or --base FILE --coeff SPEC".into()))
}

fn hyper_sample(dims: &[usize]) -> impl FnMut(&mut hicat_core::sampling::SampleRng, usize) -> Hypermatrix + '_ {
    let side: usize = dims.iter().product();
    move |rng, i| Hypermatrix::from_vec(dims, structured_matrix(rng, side, i).data().to_vec()).expect("checked dims")
}

#[derive(Serialize)]
struct CstarRun {
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<String>,
    report: CstarReport,
}

#[derive(Serialize)]
struct CstarBody {
    target: String,
    worst_slack: f64,
    runs: Vec<CstarRun>,
}

fn suite_cstar(ctx: &Ctx, t: &Target) -> Res {
    let cfg = ctx.check();
    let (target, runs) = match suite_target(t, true)? {
        Suite::Hyper { dims, gammas } => {
            let runs = gammas
                .into_iter()
                .map(|g| CstarRun {
                    gamma: Some(g.to_string()),
                    report: cstar_suite(
                        |a: &Hypermatrix, b: &Hypermatrix| hmul(g, a, b).expect("same dims"),
                        |a: &Hypermatrix| hinvol(g, a).expect("same dims"),
                        |a: &Hypermatrix| hnorm(g, a).expect("same dims"),
                        hyper_sample(&dims),
                        &cfg,
                    ),
                })
                .collect();
            (format!("hypermatrix {dims:?}"), runs)
        }
        Suite::Matrix(d) => {
            let report = cstar_suite(
                |a: &CMat, b: &CMat| a.matmul(b),
                |a: &CMat| a.adjoint(),
                |a: &CMat| op_norm(a).unwrap_or(f64::NAN),
                |rng, i| structured_matrix(rng, d, i),
                &cfg,
            );
            (format!("matrix {d}"), vec![CstarRun { gamma: None, report }])
        }
        Suite::Conv { alg, k, involution } => {
            let report = cstar_suite(
                |a: &Section<CMat>, b: &Section<CMat>| alg.convolve(k, a, b).expect("checked algebra"),
                |a: &Section<CMat>| alg.involve(involution, a).expect("checked algebra"),
                |a: &Section<CMat>| alg.conv_norm(k, a).unwrap_or(f64::NAN),
                |rng, i| alg.random_section(rng, i),
                &cfg,
            );
            let label = format!("convolution over {} cells with {} coefficients, composition {}", alg.base().cell_count(), alg.coeff().label(), alg.base().composition_label(k));
            (label, vec![CstarRun { gamma: None, report }])
        }
    };
    let ok = runs.iter().all(|r| r.report.passed);
    let worst_slack = runs.iter().map(|r| r.report.worst_slack).fold(0.0, f64::max);
    let body = CstarBody { target, worst_slack, runs };
    let text = {
        let mut s = format!("{}: {} (worst slack {:e})\n", body.target, if ok { "passed" } else { "FAILED" }, worst_slack);
        for r in &body.runs {
            for l in &r.report.laws {
                let g = r.gamma.as_deref().map(|g| format!(" gamma={g}")).unwrap_or_default();
                s.push_str(&format!("  {}{g}: {} (slack {:e})\n", l.law, if l.passed { "ok" } else { "FAILED" }, l.worst_slack));
            }
        }
        s
    };
    Ok(ctx.verdict(ok, &body, || text))
}

#[derive(Serialize)]
struct CollapseEntry {
    object: String,
    q: usize,
    p: usize,
    block: usize,
    full_exchange: bool,
    agree: bool,
    commutative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    disagreement: Option<(usize, usize, String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    noncommuting: Option<(usize, String, String)>,
    collapse: Option<bool>,
}

#[derive(Serialize)]
struct CollapseBody {
    file: String,
    full_exchange: bool,
    confirmed: usize,
    failed: usize,
    not_asserted: usize,
    blocks: Vec<CollapseEntry>,
}

fn suite_collapse(ctx: &Ctx, file: &Path) -> Res {
    let cf = load_category(file)?;
    let cat = cf.base.as_globular().ok_or_else(|| Failure::Input("collapse checks need a globular category".into()))?;
    let n = |c: hicat_core::CellId| cat.cell_name(c).to_string();
    let blocks: Vec<CollapseEntry> = eh_collapse_all(cat)
        .into_iter()
        .map(|r| CollapseEntry {
            object: n(r.object),
            q: r.q,
            p: r.p,
            block: r.block.len(),
            full_exchange: r.full_exchange,
            agree: r.agree,
            commutative: r.commutative,
            disagreement: r.disagreement.map(|(a, b, x, y)| (a, b, n(x), n(y))),
            noncommuting: r.noncommuting.map(|(k, x, y)| (k, n(x), n(y))),
            collapse: r.collapse,
        })
        .collect();
    let count = |want: Option<bool>| blocks.iter().filter(|b| b.collapse == want).count();
    let body = CollapseBody {
        file: file.display().to_string(),
        full_exchange: check_exchange(cat).is_none(),
        confirmed: count(Some(true)),
        failed: count(Some(false)),
        not_asserted: count(None),
        blocks,
    };
    let ok = body.failed == 0;
    let text = format!(
        "{}: full exchange {}; {} blocks confirmed, {} failed, {} not asserted\n",
        body.file,
        if body.full_exchange { "holds" } else { "fails" },
        body.confirmed,
        body.failed,
        body.not_asserted
    );
    Ok(ctx.verdict(ok, &body, || text))
}

type HyperNorm<'a> = Box<dyn Fn(&Hypermatrix) -> f64 + Sync + 'a>;
type MatrixNorm<'a> = Box<dyn Fn(&CMat) -> f64 + Sync + 'a>;

fn suite_equivalence(ctx: &Ctx, t: &Target) -> Res {
    let cfg = ctx.check();
    let report: EquivalenceReport = match suite_target(t, false)? {
        Suite::Hyper { dims, .. } => {
            // ratios are only meaningful across all the norms at once
            let gammas: Vec<LevelSet> = LevelSet::all_subsets(dims.len()).collect();
            let norms: Vec<(String, HyperNorm)> = gammas
                .iter()
                .map(|&g| (g.to_string(), Box::new(move |x: &Hypermatrix| hnorm(g, x).unwrap_or(f64::NAN)) as HyperNorm))
                .collect();
            // ‖x‖_γ ≤ ∏_{k∈γ} N_k · max|x| ≤ ∏_{k∈γ} N_k · ‖x‖_δ
            let bound = |i: usize, _j: usize| Some(gammas[i].iter().map(|k| dims[k] as f64).product());
            norm_equivalence(&norms, bound, hyper_sample(&dims), &cfg)
        }
        Suite::Matrix(d) => {
            let norms: Vec<(String, MatrixNorm)> = vec![
                ("op".into(), Box::new(|m: &CMat| op_norm(m).unwrap_or(f64::NAN))),
                ("max".into(), Box::new(|m: &CMat| m.max_abs())),
            ];
            let bound = move |i: usize, j: usize| match (i, j) {
                (0, 1) => Some(d as f64),
                _ => Some(1.0),
            };
            norm_equivalence(&norms, bound, |rng, i| structured_matrix(rng, d, i), &cfg)
        }
        Suite::Conv { .. } => return Err(Failure::Input("equivalence supports --hyper and --matrix targets".into())),
    };
    let ok = report.passed;
    let text = {
        let mut s = format!("norm equivalence: {}\n", if ok { "passed" } else { "FAILED" });
        for (i, a) in report.names.iter().enumerate() {
            for (j, b) in report.names.iter().enumerate() {
                if i != j {
                    let bound = report.bounds[i][j].map(fmt_num).unwrap_or_else(|| "-".into());
                    s.push_str(&format!("  {a} / {b}: {} (bound {bound})\n", fmt_num(report.ratios[i][j])));
                }
            }
        }
        s
    };
    #[derive(Serialize)]
    struct Body {
        report: EquivalenceReport,
    }
    Ok(ctx.verdict(ok, Body { report }, || text))
}

#[derive(Serialize)]
struct PositivityFailure {
    sample: usize,
    kind: &'static str,
    value: f64,
}

#[derive(Serialize)]
struct PositivityBody {
    target: String,
    max_adjoint_defect: f64,
    worst_relative_eigenvalue: f64,
    failures: Vec<PositivityFailure>,
}

fn suite_positivity(ctx: &Ctx, t: &Target) -> Res {
    let cfg = ctx.check();
    let Suite::Conv { alg, k, involution } = suite_target(t, true)? else {
        return Err(Failure::Input("positivity needs --base FILE --coeff SPEC".into()));
    };
    let mut rng = rng_from_seed(cfg.seed);
    let sections: Vec<Section<CMat>> = (0..cfg.samples).map(|i| alg.random_section(&mut rng, i)).collect();
    let results: Vec<(f64, Option<(bool, f64)>)> = sections
        .par_iter()
        .map(|s| {
            let defect = alg.adjoint_defect(k, involution, s).unwrap_or(f64::NAN);
            let scale = alg.conv_norm(k, s).unwrap_or(f64::NAN).max(1.0);
            let pos = match alg.positivity(k, involution, s, &cfg) {
                Ok(PositivityOutcome::Checked(p)) => Some((p.positive, p.min_eigenvalue / p.norm.max(cfg.floor))),
                _ => None,
            };
            (defect / scale, pos)
        })
        .collect();
    let mut failures = Vec::new();
    let mut max_defect: f64 = 0.0;
    let mut worst_eig = f64::INFINITY;
    for (i, (defect, pos)) in results.iter().enumerate() {
        max_defect = max_defect.max(*defect);
        if !(*defect <= 1e-10) {
            failures.push(PositivityFailure { sample: i, kind: "adjoint-defect", value: *defect });
        }
        match pos {
            Some((positive, rel)) => {
                worst_eig = worst_eig.min(*rel);
                if !positive {
                    failures.push(PositivityFailure { sample: i, kind: "negative-eigenvalue", value: *rel });
                }
            }
            None => failures.push(PositivityFailure { sample: i, kind: "not-applicable", value: *defect }),
        }
    }
    failures.truncate(hicat_core::report::WITNESS_CAP);
    let ok = failures.is_empty();
    let body = PositivityBody {
        target: format!("convolution with {} coefficients, composition {}", alg.coeff().label(), alg.base().composition_label(k)),
        max_adjoint_defect: max_defect,
        worst_relative_eigenvalue: if worst_eig.is_finite() { worst_eig } else { 0.0 },
        failures,
    };
    let text = format!(
        "{}: {} (max adjoint defect {:e}, worst eigenvalue/norm {:e})\n",
        body.target,
        if ok { "passed" } else { "FAILED" },
        body.max_adjoint_defect,
        body.worst_relative_eigenvalue
    );
    Ok(ctx.verdict(ok, &body, || text))
}

fn embed(ctx: &Ctx, args: &AlgebraArgs, set: SampleSet, out: Option<&Path>) -> Res {
    let cf = load_category(&args.base)?;
    let alg = build_algebra(&cf, &args.coeff, false, None)?;
    let d = alg.coeff().side();
    if let AnyCoeff::Hyper(_) = alg.coeff() {
        return Err(Failure::Input("embed supports C and M<d> coefficients".into()));
    }
    let mut sample = vec![CMat::zeros(d, d)];
    match set {
        SampleSet::Units => {
            for i in 0..d {
                for j in 0..d {
                    sample.push(CMat::unit(d, i, j));
                }
            }
        }
        SampleSet::Signs => {
            for z in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)] {
                sample.push(CMat::identity(d).scale(z));
            }
        }
    }
    let cat = match &cf.base {
        Base::Globular(c) => c.clone(),
        Base::FullDepth(_) => return Err(Failure::Input("embed needs a globular base".into())),
    };
    let galg = ConvolutionAlgebra::with_assignment(cat, alg.coeff().clone(), vec![], Assignment { products: alg.assignment().products.clone(), involutions: vec![] })
        .map_err(|e| Failure::Input(e.to_string()))?;
    let rep = validate_embedded_category(&galg, &sample).map_err(|e| Failure::Input(e.to_string()))?;
    let embedded = CategoryFile { base: Base::Globular(rep.category.clone()), involutions: vec![], conjugation: None, pair_dims: None, pair_size: None };
    let mut text = format!(
        "# cells a·δ^x of {} coefficients over {}; aK is coefficient K below\n",
        alg.coeff().label(),
        args.base.file_name().map(|f| f.to_string_lossy()).unwrap_or_default()
    );
    for (i, m) in rep.coefficients.iter().enumerate() {
        let entries: Vec<String> = m.data().iter().map(|z| format!("{}{}{}i", fmt_num(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_num(z.im.abs()))).collect();
        text.push_str(&format!("# a{i} = [{}]\n", entries.join(" ")));
    }
    text.push_str(&write_category(&embedded));
    let mut outcome = ctx.emit(text, out, "category")?;
    if !rep.report.is_ok() {
        outcome.code = 1;
        outcome.stderr = format!("embedded category has {} violations\n", rep.report.violations.len());
    }
    Ok(outcome)
}

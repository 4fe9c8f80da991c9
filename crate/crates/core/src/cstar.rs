//! Numerical C*-checks: operator norms, positivity, C*-identity and
//! submultiplicativity suites, norm equivalence, Eckmann–Hilton collapse.

use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::NumericError;
use crate::linalg::CMat;
use crate::ncat::{check_exchange, CellId, FiniteGlobularCategory, MultiCategory};
use crate::sampling::{rng_from_seed, SampleRng};

/// Tolerances and sampling parameters shared by the numeric suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckConfig {
    /// Relative tolerance.
    pub tol: f64,
    /// Absolute floor used when a reference norm is tiny.
    pub floor: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { tol: 1e-9, floor: 1e-12, samples: 200, seed: 0 }
    }
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> Result<f64, NumericError> {
    if !m.is_finite() {
        return Err(NumericError::NonFinite);
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    if m.rows() == 1 || m.cols() == 1 {
        // a single row or column: the Euclidean norm, computed directly
        let s: f64 = m.data().iter().map(|z| z.norm_sqr()).sum();
        return Ok(s.sqrt());
    }
    let svd = m.to_nalgebra().svd(false, false);
    Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Positivity {
    pub positive: bool,
    pub hermitian: bool,
    pub min_eigenvalue: f64,
    pub norm: f64,
}

/// Hermitian with every eigenvalue at least `-tol·‖m‖`.
pub fn is_positive(m: &CMat, cfg: &CheckConfig) -> Result<Positivity, NumericError> {
    let norm = op_norm(m)?;
    if !m.is_square() {
        return Ok(Positivity { positive: false, hermitian: false, min_eigenvalue: f64::NAN, norm });
    }
    let scale = norm.max(cfg.floor);
    let hermitian = m.max_abs_diff(&m.adjoint()) <= cfg.tol * scale;
    let sym = m.add(&m.adjoint()).scale(num_complex::Complex64::new(0.5, 0.0));
    let min_eigenvalue = if m.rows() == 0 {
        0.0
    } else {
        SymmetricEigen::new(sym.to_nalgebra())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    let positive = hermitian && min_eigenvalue >= -cfg.tol * scale;
    Ok(Positivity { positive, hermitian, min_eigenvalue, norm })
}

/// The worst sample seen by a check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlackWitness {
    pub sample: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// Outcome of one law in a suite: the largest relative slack over all
/// samples and the sample that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawOutcome {
    pub law: String,
    pub passed: bool,
    pub worst_slack: f64,
    pub witness: Option<SlackWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CstarReport {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub passed: bool,
    pub worst_slack: f64,
    pub laws: Vec<LawOutcome>,
}

fn outcome(law: &str, tol: f64, rows: &[(f64, f64, f64)]) -> LawOutcome {
    let mut worst: Option<SlackWitness> = None;
    for (i, &(lhs, rhs, slack)) in rows.iter().enumerate() {
        let better = match &worst {
            None => true,
            Some(w) => slack > w.slack || slack.is_nan(),
        };
        if better {
            worst = Some(SlackWitness { sample: i, lhs, rhs, slack });
        }
    }
    let worst_slack = worst.as_ref().map_or(0.0, |w| w.slack);
    LawOutcome {
        law: law.to_string(),
        passed: worst_slack <= tol,
        worst_slack,
        witness: worst,
    }
}

/// Checks `‖x*x‖ = ‖x‖²`, `‖xy‖ ≤ ‖x‖‖y‖` and `‖x*‖ = ‖x‖` on seeded
/// samples. Samples are drawn sequentially from the seed, then evaluated in
/// parallel; results are reduced in sample order.
pub fn cstar_suite<T, P, I, N, S>(
    product: P,
    involution: I,
    norm: N,
    mut sampler: S,
    cfg: &CheckConfig,
) -> CstarReport
where
    T: Send + Sync,
    P: Fn(&T, &T) -> T + Sync,
    I: Fn(&T) -> T + Sync,
    N: Fn(&T) -> f64 + Sync,
    S: FnMut(&mut SampleRng, usize) -> T,
{
    let mut rng = rng_from_seed(cfg.seed);
    let xs: Vec<T> = (0..cfg.samples).map(|i| sampler(&mut rng, i)).collect();
    let ys: Vec<T> = (0..cfg.samples).map(|i| sampler(&mut rng, i)).collect();
    let floor = cfg.floor;
    let rows: Vec<[(f64, f64, f64); 3]> = xs
        .par_iter()
        .zip(ys.par_iter())
        .map(|(x, y)| {
            let nx = norm(x);
            let ny = norm(y);
            let xs = involution(x);
            let cstar = norm(&product(&xs, x));
            let c = (cstar, nx * nx, (cstar - nx * nx).abs() / (nx * nx).max(floor));
            let nxy = norm(&product(x, y));
            let s = (nxy, nx * ny, ((nxy - nx * ny) / (nx * ny).max(floor)).max(0.0));
            let nxs = norm(&xs);
            let i = (nxs, nx, (nxs - nx).abs() / nx.max(floor));
            [c, s, i]
        })
        .collect();
    let pick = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let laws = vec![
        outcome("cstar-identity", cfg.tol, &pick(0)),
        outcome("submultiplicativity", cfg.tol, &pick(1)),
        outcome("isometric-involution", cfg.tol, &pick(2)),
    ];
    let passed = laws.iter().all(|l| l.passed);
    let worst_slack = laws.iter().map(|l| l.worst_slack).fold(0.0, f64::max);
    CstarReport { seed: cfg.seed, samples: cfg.samples, tol: cfg.tol, passed, worst_slack, laws }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub seed: u64,
    pub samples: usize,
    pub names: Vec<String>,
    /// `ratios[i][j]` is the largest observed `‖x‖_i / ‖x‖_j`.
    pub ratios: Vec<Vec<f64>>,
    /// Analytic bounds where known.
    pub bounds: Vec<Vec<Option<f64>>>,
    pub all_finite: bool,
    pub within_bounds: bool,
    pub passed: bool,
}

/// Largest pairwise ratios of several norms over seeded samples, compared
/// against optional analytic bounds.
pub fn norm_equivalence<T, S>(
    norms: &[(String, Box<dyn Fn(&T) -> f64 + Sync + '_>)],
    bound: impl Fn(usize, usize) -> Option<f64>,
    mut sampler: S,
    cfg: &CheckConfig,
) -> EquivalenceReport
where
    T: Send + Sync,
    S: FnMut(&mut SampleRng, usize) -> T,
{
    let mut rng = rng_from_seed(cfg.seed);
    let xs: Vec<T> = (0..cfg.samples).map(|i| sampler(&mut rng, i)).collect();
    let k = norms.len();
    let values: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|x| norms.iter().map(|(_, f)| f(x)).collect())
        .collect();
    let mut ratios = vec![vec![0.0f64; k]; k];
    for v in &values {
        for i in 0..k {
            for j in 0..k {
                if v[j] > cfg.floor {
                    ratios[i][j] = ratios[i][j].max(v[i] / v[j]);
                }
            }
        }
    }
    let bounds: Vec<Vec<Option<f64>>> = (0..k).map(|i| (0..k).map(|j| bound(i, j)).collect()).collect();
    let all_finite = ratios.iter().flatten().all(|r| r.is_finite());
    let within_bounds = (0..k).all(|i| {
        (0..k).all(|j| bounds[i][j].is_none_or(|b| ratios[i][j] <= b * (1.0 + cfg.tol)))
    });
    EquivalenceReport {
        seed: cfg.seed,
        samples: cfg.samples,
        names: norms.iter().map(|(n, _)| n.clone()).collect(),
        ratios,
        bounds,
        all_finite,
        within_bounds,
        passed: all_finite && within_bounds,
    }
}

/// Result of an Eckmann–Hilton check on one diagonal block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EhReport {
    pub object: CellId,
    pub q: usize,
    pub p: usize,
    pub block: Vec<CellId>,
    pub full_exchange: bool,
    /// All compositions `∘_q .. ∘_p` agree on the block.
    pub agree: bool,
    pub commutative: bool,
    /// First pair of block cells where two compositions differ.
    pub disagreement: Option<(usize, usize, CellId, CellId)>,
    /// First non-commuting pair in the block.
    pub noncommuting: Option<(usize, CellId, CellId)>,
    /// `Some(true)` when full exchange holds and the collapse is confirmed,
    /// `Some(false)` when full exchange holds but the collapse fails, `None`
    /// when full exchange fails and the collapse is not asserted.
    pub collapse: Option<bool>,
}

/// Restricts `∘_q .. ∘_p` to the cells whose `k`-source and `k`-target are
/// the `q`-identity `o` for every `k` in `q..=p`, and checks that these
/// compositions agree and commute there.
pub fn eh_collapse_check(cat: &FiniteGlobularCategory, o: CellId, q: usize, p: usize) -> EhReport {
    assert!(q <= p && p < cat.depth(), "need q <= p < depth");
    let block: Vec<CellId> = cat
        .cells()
        .filter(|&x| (q..=p).all(|k| cat.source(k, x) == o && cat.target(k, x) == o))
        .collect();
    let mut disagreement = None;
    let mut noncommuting = None;
    'outer: for &x in &block {
        for &y in &block {
            for k in q..=p {
                if disagreement.is_none() && cat.compose(k, x, y) != cat.compose(q, x, y) {
                    disagreement = Some((q, k, x, y));
                }
                if noncommuting.is_none() && cat.compose(k, x, y) != cat.compose(k, y, x) {
                    noncommuting = Some((k, x, y));
                }
            }
            if disagreement.is_some() && noncommuting.is_some() {
                break 'outer;
            }
        }
    }
    let full_exchange = check_exchange(cat).is_none();
    let agree = disagreement.is_none();
    let commutative = noncommuting.is_none();
    EhReport {
        object: o,
        q,
        p,
        block,
        full_exchange,
        agree,
        commutative,
        disagreement,
        noncommuting,
        collapse: full_exchange.then_some(agree && commutative),
    }
}

/// Runs [`eh_collapse_check`] on every diagonal block with `q < p`.
pub fn eh_collapse_all(cat: &FiniteGlobularCategory) -> Vec<EhReport> {
    let mut out = Vec::new();
    for p in 0..cat.depth() {
        for q in 0..p {
            for o in cat.cells().filter(|&o| cat.is_identity(q, o)) {
                out.push(eh_collapse_check(cat, o, q, p));
            }
        }
    }
    out
}

//! Convolution algebras of sections over a finite base.
//!
//! A section assigns a coefficient to every cell. For composition `p`,
//! `(σ ∘̂_p ρ)_z = Σ_{x ∘_p y = z} σ_x · ρ_y` with the coefficient product
//! assigned to `p`, summed in ascending `(x, y)` order. An involution `*` of
//! the base gives `(σ^)_z = (σ_{z*})†` with its assigned coefficient
//! involution.

use serde::Serialize;

use crate::catalog::from_closures;
use crate::coeff::{base_pairs, covariance_match, is_commutative, AlgebraCheckConfig, Assignment, CoefficientSystem, MatchResult};
use crate::cstar::{is_positive, op_norm, CheckConfig, Positivity};
use crate::error::ConvolutionError;
use crate::involutive::InvolutionSpec;
use crate::linalg::CMat;
use crate::ncat::{
    check_exchange, check_nc_exchange, validate_globular, validate_partial_category, CellId,
    ExchangeWitness, FiniteGlobularCategory, MultiCategory,
};
use crate::report::{Law, Scope, ValidationReport};
use crate::sampling::SampleRng;

/// A coefficient for every cell of the base.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section<E> {
    pub values: Vec<E>,
}

impl<E> Section<E> {
    pub fn new(values: Vec<E>) -> Self {
        Section { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub struct ConvolutionAlgebra<B: MultiCategory, A: CoefficientSystem> {
    base: B,
    coeff: A,
    involutions: Vec<InvolutionSpec>,
    assignment: Assignment,
    defined: Vec<Vec<(CellId, CellId, CellId)>>,
}

impl<B: MultiCategory, A: CoefficientSystem> ConvolutionAlgebra<B, A> {
    /// Picks the least covariance-preserving assignment for the family.
    pub fn new(base: B, coeff: A, involutions: Vec<InvolutionSpec>) -> Result<Self, ConvolutionError> {
        let count = base.composition_count();
        let pairs = base_pairs(count, &involutions);
        match covariance_match(&pairs, count, involutions.len(), &coeff) {
            MatchResult::Found(assignment) => Self::with_assignment(base, coeff, involutions, assignment),
            MatchResult::Blocked { pair } => Err(ConvolutionError::NoAssignment {
                composition: pair.composition,
                involution: pair.involution,
            }),
        }
    }

    /// Uses the given assignment without checking covariance.
    pub fn with_assignment(
        base: B,
        coeff: A,
        involutions: Vec<InvolutionSpec>,
        assignment: Assignment,
    ) -> Result<Self, ConvolutionError> {
        for k in 0..base.composition_count() {
            match assignment.products.get(k) {
                Some(&f) if f < coeff.product_count() => {}
                _ => return Err(ConvolutionError::UnassignedProduct { k }),
            }
        }
        let defined = (0..base.composition_count()).map(|k| base.table(k).defined()).collect();
        Ok(ConvolutionAlgebra { base, coeff, involutions, assignment, defined })
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn coeff(&self) -> &A {
        &self.coeff
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn involutions(&self) -> &[InvolutionSpec] {
        &self.involutions
    }

    fn product_of(&self, k: usize) -> Result<usize, ConvolutionError> {
        self.assignment
            .products
            .get(k)
            .copied()
            .ok_or(ConvolutionError::UnassignedProduct { k })
    }

    fn check_len(&self, s: &Section<A::Elem>) -> Result<(), ConvolutionError> {
        if s.len() != self.base.cell_count() {
            return Err(ConvolutionError::SectionLength { got: s.len(), cells: self.base.cell_count() });
        }
        Ok(())
    }

    pub fn zero(&self) -> Section<A::Elem> {
        Section::new(vec![self.coeff.zero(); self.base.cell_count()])
    }

    /// `a·δ^x`.
    pub fn embed(&self, a: A::Elem, x: CellId) -> Section<A::Elem> {
        let mut s = self.zero();
        s.values[x.0] = a;
        s
    }

    /// `δ^x` with the unit of the product assigned to composition `k`.
    pub fn delta_for(&self, k: usize, x: CellId) -> Result<Section<A::Elem>, ConvolutionError> {
        Ok(self.embed(self.coeff.unit(self.product_of(k)?), x))
    }

    /// `δ^x` with the unit of the product assigned to composition 0.
    pub fn delta(&self, x: CellId) -> Section<A::Elem> {
        self.embed(self.coeff.unit(self.assignment.products[0]), x)
    }

    /// The sum of `δ^e` over the identities of composition `k`, the unit of
    /// `∘̂_k` when the base is finite.
    pub fn unit_section(&self, k: usize) -> Result<Section<A::Elem>, ConvolutionError> {
        let u = self.coeff.unit(self.product_of(k)?);
        let t = self.base.table(k);
        let mut s = self.zero();
        for e in self.base.cells().filter(|&e| t.is_identity(e)) {
            s.values[e.0] = u.clone();
        }
        Ok(s)
    }

    pub fn add(&self, a: &Section<A::Elem>, b: &Section<A::Elem>) -> Section<A::Elem> {
        Section::new(a.values.iter().zip(&b.values).map(|(x, y)| self.coeff.add(x, y)).collect())
    }

    pub fn scale(&self, c: num_complex::Complex64, a: &Section<A::Elem>) -> Section<A::Elem> {
        Section::new(a.values.iter().map(|x| self.coeff.scale(c, x)).collect())
    }

    pub fn convolve(
        &self,
        k: usize,
        sigma: &Section<A::Elem>,
        rho: &Section<A::Elem>,
    ) -> Result<Section<A::Elem>, ConvolutionError> {
        let f = self.product_of(k)?;
        self.check_len(sigma)?;
        self.check_len(rho)?;
        let mut out = self.zero();
        for &(x, y, z) in &self.defined[k] {
            let term = self.coeff.mul(f, &sigma.values[x.0], &rho.values[y.0]);
            out.values[z.0] = self.coeff.add(&out.values[z.0], &term);
        }
        Ok(out)
    }

    pub fn involve(&self, index: usize, sigma: &Section<A::Elem>) -> Result<Section<A::Elem>, ConvolutionError> {
        self.check_len(sigma)?;
        let spec = self
            .involutions
            .get(index)
            .ok_or(ConvolutionError::UnassignedVariance { index })?;
        let j = *self
            .assignment
            .involutions
            .get(index)
            .ok_or(ConvolutionError::UnassignedVariance { index })?;
        if j >= self.coeff.involution_count() {
            return Err(ConvolutionError::UnassignedVariance { index });
        }
        Ok(Section::new(
            self.base
                .cells()
                .map(|z| self.coeff.involve(j, &sigma.values[spec.apply(z).0]))
                .collect(),
        ))
    }

    /// Largest coefficient distance over all cells.
    pub fn distance(&self, a: &Section<A::Elem>, b: &Section<A::Elem>) -> f64 {
        a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| self.coeff.distance(x, y))
            .fold(0.0, f64::max)
    }

    pub fn random_section(&self, rng: &mut SampleRng, index: usize) -> Section<A::Elem> {
        Section::new(self.base.cells().map(|_| self.coeff.sample(rng, index)).collect())
    }

    pub fn integer_section(&self, rng: &mut SampleRng) -> Section<A::Elem> {
        Section::new(self.base.cells().map(|_| self.coeff.integer_sample(rng)).collect())
    }

    /// Left multiplication by `σ` under `∘̂_k` on `⊕_z F`, where `F` is the
    /// fiber the coefficients act on. Block `(z, y)` is the sum of `σ_x` over
    /// `x ∘_k y = z`.
    pub fn left_regular_rep(&self, k: usize, sigma: &Section<A::Elem>) -> Result<CMat, ConvolutionError> {
        let f = self.product_of(k)?;
        self.check_len(sigma)?;
        let probe = self
            .coeff
            .left_matrix(f, &self.coeff.zero())
            .ok_or(ConvolutionError::UnsupportedCoefficient)?;
        let d = probe.rows();
        let n = self.base.cell_count();
        let mut out = CMat::zeros(n * d, n * d);
        for &(x, y, z) in &self.defined[k] {
            let m = self
                .coeff
                .left_matrix(f, &sigma.values[x.0])
                .ok_or(ConvolutionError::UnsupportedCoefficient)?;
            let cur = out.block(z.0 * d, y.0 * d, d, d);
            out.set_block(z.0 * d, y.0 * d, &cur.add(&m));
        }
        Ok(out)
    }

    /// Operator norm of the left regular representation.
    pub fn conv_norm(&self, k: usize, sigma: &Section<A::Elem>) -> Result<f64, ConvolutionError> {
        let m = self.left_regular_rep(k, sigma)?;
        op_norm(&m).map_err(|_| ConvolutionError::UnsupportedCoefficient)
    }

    /// Largest entry of `λ_k(σ^) - λ_k(σ)†`.
    pub fn adjoint_defect(&self, k: usize, index: usize, sigma: &Section<A::Elem>) -> Result<f64, ConvolutionError> {
        let l = self.left_regular_rep(k, sigma)?;
        let ls = self.left_regular_rep(k, &self.involve(index, sigma)?)?;
        Ok(ls.max_abs_diff(&l.adjoint()))
    }

    /// Positivity of `λ_k(σ^ ∘̂_k σ)`. Only meaningful where the
    /// representation intertwines the involution with the adjoint; otherwise
    /// the result is [`PositivityOutcome::NotApplicable`].
    pub fn positivity(
        &self,
        k: usize,
        index: usize,
        sigma: &Section<A::Elem>,
        cfg: &CheckConfig,
    ) -> Result<PositivityOutcome, ConvolutionError> {
        let defect = self.adjoint_defect(k, index, sigma)?;
        let scale = self.conv_norm(k, sigma)?.max(cfg.floor);
        if defect > 1e-10 * scale.max(1.0) {
            return Ok(PositivityOutcome::NotApplicable { adjoint_defect: defect });
        }
        let prod = self.convolve(k, &self.involve(index, sigma)?, sigma)?;
        let m = self.left_regular_rep(k, &prod)?;
        let p = is_positive(&m, cfg).map_err(|_| ConvolutionError::UnsupportedCoefficient)?;
        Ok(PositivityOutcome::Checked(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PositivityOutcome {
    Checked(Positivity),
    NotApplicable { adjoint_defect: f64 },
}

/// The bundle of embedded cells `a·δ^x` for `a` in a finite coefficient set,
/// viewed as a globular category in its own right.
#[derive(Debug, Clone)]
pub struct EmbeddedReport<E> {
    /// Cell `i·|X| + x` is `coefficients[i]·δ^x`.
    pub category: FiniteGlobularCategory,
    pub coefficients: Vec<E>,
    /// Convolution of embedded cells against the predicted embedded cell.
    pub closure: ValidationReport,
    /// Category, globular and non-commutative exchange laws.
    pub laws: ValidationReport,
    pub exchange_witness: Option<ExchangeWitness>,
    /// Some product of the coefficient system does not commute.
    pub noncommutative: bool,
    /// Everything above, plus a violation if a noncommutative coefficient
    /// system failed to produce an exchange counterexample.
    pub report: ValidationReport,
}

/// Builds the embedded category over `sample` (closed under the assigned
/// products once the units are added) and checks closure of convolution on
/// embedded cells, the category laws and non-commutative exchange. Over a
/// noncommutative coefficient system a full-exchange counterexample is
/// expected whenever the base has depth at least 2.
pub fn validate_embedded_category<A: CoefficientSystem>(
    alg: &ConvolutionAlgebra<FiniteGlobularCategory, A>,
    sample: &[A::Elem],
) -> Result<EmbeddedReport<A::Elem>, ConvolutionError> {
    let a = alg.coeff();
    let base = alg.base();
    let depth = base.depth();
    let tol = a.tolerance();
    let same = |x: &A::Elem, y: &A::Elem| a.distance(x, y) <= tol * a.magnitude(x).max(1.0);

    let mut coeffs: Vec<A::Elem> = Vec::new();
    let units: Vec<A::Elem> = (0..depth).map(|k| a.unit(alg.assignment().products[k])).collect();
    for c in sample.iter().chain(&units) {
        if !coeffs.iter().any(|d| same(c, d)) {
            coeffs.push(c.clone());
        }
    }
    let find = |c: &A::Elem| coeffs.iter().position(|d| same(c, d));
    let m = coeffs.len();
    let mut mul = vec![vec![vec![0usize; m]; m]; depth];
    for k in 0..depth {
        let f = alg.assignment().products[k];
        for i in 0..m {
            for j in 0..m {
                mul[k][i][j] = find(&a.mul(f, &coeffs[i], &coeffs[j]))
                    .ok_or(ConvolutionError::NotClosed { product: f })?;
            }
        }
    }
    let unit_idx: Vec<usize> = units.iter().map(|u| find(u).expect("units were added")).collect();

    let n = base.len();
    let names = (0..m * n)
        .map(|c| format!("a{}@{}", c / n, base.names()[c % n]))
        .collect();
    let category = from_closures(
        names,
        depth,
        |k, c| c / n == unit_idx[k] && base.is_identity(k, CellId(c % n)),
        |k, c, d| {
            let z = base.compose(k, CellId(c % n), CellId(d % n))?;
            Some(mul[k][c / n][d / n] * n + z.0)
        },
    )
    .map_err(|_| ConvolutionError::NotClosed { product: 0 })?;

    let mut closure = ValidationReport::new();
    for k in 0..depth {
        for c in 0..m * n {
            for d in 0..m * n {
                let (x, y) = (CellId(c % n), CellId(d % n));
                let got = alg.convolve(k, &alg.embed(coeffs[c / n].clone(), x), &alg.embed(coeffs[d / n].clone(), y))?;
                let want = match base.compose(k, x, y) {
                    Some(z) => alg.embed(coeffs[mul[k][c / n][d / n]].clone(), z),
                    None => alg.zero(),
                };
                if alg.distance(&got, &want) > tol {
                    closure.push(Law::Closure, Scope::Depth { p: k }, vec![CellId(c), CellId(d)]);
                }
            }
        }
    }

    let mut laws = validate_partial_category(&category);
    laws.merge(validate_globular(&category));
    laws.merge(check_nc_exchange(&category));
    let exchange_witness = check_exchange(&category);
    let cfg = AlgebraCheckConfig::default();
    let noncommutative = (0..depth)
        .any(|k| is_commutative(a, alg.assignment().products[k], &cfg).is_some());

    let mut report = closure.clone();
    report.merge(laws.clone());
    if noncommutative && depth >= 2 && exchange_witness.is_none() {
        report.push(Law::EmbeddedExchangeMissing, Scope::Global, vec![]);
    }
    Ok(EmbeddedReport {
        category,
        coefficients: coeffs,
        closure,
        laws,
        exchange_witness,
        noncommutative,
        report,
    })
}

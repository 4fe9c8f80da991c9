//! Coefficient *-algebras: a complex vector space with several associative
//! products and several conjugate-linear involutions, each involution being
//! declared covariant and/or contravariant for each product.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt::Debug;

use crate::involutive::InvolutionSpec;
use crate::linalg::CMat;
use crate::report::Law;
use crate::sampling::{self, rng_from_seed, SampleRng};

/// How an involution interacts with a product: covariant means
/// `(ab)† = a†b†`, contravariant means `(ab)† = b†a†`. Both hold for
/// commutative products; neither may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Covariance {
    pub covariant: bool,
    pub contravariant: bool,
}

impl Covariance {
    pub const COVARIANT: Covariance = Covariance { covariant: true, contravariant: false };
    pub const CONTRAVARIANT: Covariance = Covariance { covariant: false, contravariant: true };
    pub const BOTH: Covariance = Covariance { covariant: true, contravariant: true };
    pub const NEITHER: Covariance = Covariance { covariant: false, contravariant: false };

    pub fn allows(self, contravariant: bool) -> bool {
        if contravariant {
            self.contravariant
        } else {
            self.covariant
        }
    }
}

/// A coefficient system. Products may have different units.
pub trait CoefficientSystem {
    type Elem: Clone + Debug + PartialEq;

    fn label(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn unit(&self, product: usize) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: Complex64, a: &Self::Elem) -> Self::Elem;

    fn product_count(&self) -> usize;
    fn mul(&self, product: usize, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn involution_count(&self) -> usize;
    fn involve(&self, involution: usize, a: &Self::Elem) -> Self::Elem;

    /// Declared covariance of an involution with respect to a product.
    fn covariance(&self, product: usize, involution: usize) -> Covariance;

    /// Largest entrywise modulus of `a - b`.
    fn distance(&self, a: &Self::Elem, b: &Self::Elem) -> f64;
    /// Largest entrywise modulus.
    fn magnitude(&self, a: &Self::Elem) -> f64;

    /// A spanning set on which products are exact (matrix units).
    fn basis(&self) -> Vec<Self::Elem>;
    /// A random element; `index` selects structured samples.
    fn sample(&self, rng: &mut SampleRng, index: usize) -> Self::Elem;
    /// A random element with small Gaussian-integer entries.
    fn integer_sample(&self, rng: &mut SampleRng) -> Self::Elem;

    /// Left multiplication by `a` under `product` as a matrix acting on the
    /// fiber, when such a finite representation exists.
    fn left_matrix(&self, _product: usize, _a: &Self::Elem) -> Option<CMat> {
        None
    }

    fn tolerance(&self) -> f64 {
        1e-12
    }
}

/// The complex numbers with complex conjugation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComplexField;

impl CoefficientSystem for ComplexField {
    type Elem = Complex64;

    fn label(&self) -> String {
        "C".into()
    }
    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn unit(&self, _product: usize) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn scale(&self, c: Complex64, a: &Complex64) -> Complex64 {
        c * a
    }
    fn product_count(&self) -> usize {
        1
    }
    fn mul(&self, _product: usize, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn involution_count(&self) -> usize {
        1
    }
    fn involve(&self, _involution: usize, a: &Complex64) -> Complex64 {
        a.conj()
    }
    fn covariance(&self, _product: usize, _involution: usize) -> Covariance {
        Covariance::BOTH
    }
    fn distance(&self, a: &Complex64, b: &Complex64) -> f64 {
        (a - b).norm()
    }
    fn magnitude(&self, a: &Complex64) -> f64 {
        a.norm()
    }
    fn basis(&self) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
    }
    fn sample(&self, rng: &mut SampleRng, _index: usize) -> Complex64 {
        sampling::gaussian(rng)
    }
    fn integer_sample(&self, rng: &mut SampleRng) -> Complex64 {
        sampling::integer_vec(rng, 1, 3)[0]
    }
    fn left_matrix(&self, _product: usize, a: &Complex64) -> Option<CMat> {
        Some(CMat::scalar(*a))
    }
}

/// `d × d` complex matrices with the conjugate transpose. The declared
/// covariance defaults to contravariant and can be overridden to test the
/// validator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixAlgebra {
    pub d: usize,
    pub declared: Covariance,
}

impl MatrixAlgebra {
    pub fn new(d: usize) -> Self {
        assert!(d >= 1, "matrix size must be positive");
        MatrixAlgebra { d, declared: Covariance::CONTRAVARIANT }
    }

    pub fn with_declared(d: usize, declared: Covariance) -> Self {
        MatrixAlgebra { d, declared }
    }
}

impl CoefficientSystem for MatrixAlgebra {
    type Elem = CMat;

    fn label(&self) -> String {
        format!("M{}", self.d)
    }
    fn zero(&self) -> CMat {
        CMat::zeros(self.d, self.d)
    }
    fn unit(&self, _product: usize) -> CMat {
        CMat::identity(self.d)
    }
    fn add(&self, a: &CMat, b: &CMat) -> CMat {
        a.add(b)
    }
    fn scale(&self, c: Complex64, a: &CMat) -> CMat {
        a.scale(c)
    }
    fn product_count(&self) -> usize {
        1
    }
    fn mul(&self, _product: usize, a: &CMat, b: &CMat) -> CMat {
        a.matmul(b)
    }
    fn involution_count(&self) -> usize {
        1
    }
    fn involve(&self, _involution: usize, a: &CMat) -> CMat {
        a.adjoint()
    }
    fn covariance(&self, _product: usize, _involution: usize) -> Covariance {
        if self.d == 1 {
            Covariance::BOTH
        } else {
            self.declared
        }
    }
    fn distance(&self, a: &CMat, b: &CMat) -> f64 {
        a.max_abs_diff(b)
    }
    fn magnitude(&self, a: &CMat) -> f64 {
        a.max_abs()
    }
    fn basis(&self) -> Vec<CMat> {
        let d = self.d;
        (0..d * d).map(|k| CMat::unit(d, k / d, k % d)).collect()
    }
    fn sample(&self, rng: &mut SampleRng, index: usize) -> CMat {
        sampling::structured_matrix(rng, self.d, index)
    }
    fn integer_sample(&self, rng: &mut SampleRng) -> CMat {
        sampling::integer_matrix(rng, self.d, self.d, 3)
    }
    fn left_matrix(&self, _product: usize, a: &CMat) -> Option<CMat> {
        Some(a.clone())
    }
}

/// Sampling parameters for the algebraic checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraCheckConfig {
    pub seed: u64,
    pub samples: usize,
    /// Relative tolerance for floating-point samples.
    pub tol: f64,
    /// Also require all products to share one unit.
    pub require_common_unit: bool,
}

impl Default for AlgebraCheckConfig {
    fn default() -> Self {
        AlgebraCheckConfig { seed: 0, samples: 32, tol: 1e-12, require_common_unit: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraViolation {
    pub law: Law,
    pub product: Option<usize>,
    pub involution: Option<usize>,
    /// `basis` for exact checks, `sample N` for random ones.
    pub origin: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub seed: u64,
    pub violations: Vec<AlgebraViolation>,
}

impl AlgebraReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}

struct Checker<'a, A: CoefficientSystem> {
    a: &'a A,
    report: AlgebraReport,
}

impl<A: CoefficientSystem> Checker<'_, A> {
    /// `exact` compares bitwise-equal up to representation; otherwise the
    /// residual is scaled by the operand magnitude.
    fn expect(
        &mut self,
        law: Law,
        product: Option<usize>,
        involution: Option<usize>,
        origin: &str,
        lhs: &A::Elem,
        rhs: &A::Elem,
        scale: f64,
        tol: Option<f64>,
    ) {
        let residual = self.a.distance(lhs, rhs);
        let bad = match tol {
            None => residual != 0.0,
            Some(t) => !(residual <= t * scale.max(1.0)),
        };
        if bad && self.report.violations.len() < crate::report::WITNESS_CAP {
            self.report.violations.push(AlgebraViolation {
                law,
                product,
                involution,
                origin: origin.to_string(),
                residual,
            });
        }
    }

    fn check_elems(&mut self, elems: &[A::Elem], origin: &str, tol: Option<f64>, triples: bool) {
        let a = self.a;
        let mag = |x: &A::Elem| a.magnitude(x);
        for k in 0..a.product_count() {
            let u = a.unit(k);
            for x in elems {
                self.expect(Law::Unit, Some(k), None, origin, &a.mul(k, &u, x), x, mag(x), tol);
                self.expect(Law::Unit, Some(k), None, origin, &a.mul(k, x, &u), x, mag(x), tol);
            }
        }
        for j in 0..a.involution_count() {
            for x in elems {
                let xx = a.involve(j, &a.involve(j, x));
                self.expect(Law::Involutive, None, Some(j), origin, &xx, x, mag(x), tol);
                let i = Complex64::new(0.0, 1.0);
                let lhs = a.involve(j, &a.scale(i, x));
                let rhs = a.scale(i.conj(), &a.involve(j, x));
                self.expect(Law::ConjugateLinearity, None, Some(j), origin, &lhs, &rhs, mag(x), tol);
            }
        }
        for x in elems {
            for y in elems {
                let (mx, my) = (mag(x), mag(y));
                for j in 0..a.involution_count() {
                    let lhs = a.involve(j, &a.add(x, y));
                    let rhs = a.add(&a.involve(j, x), &a.involve(j, y));
                    self.expect(Law::Involutive, None, Some(j), origin, &lhs, &rhs, mx + my, tol);
                }
                for k in 0..a.product_count() {
                    let xy = a.mul(k, x, y);
                    for j in 0..a.involution_count() {
                        let c = a.covariance(k, j);
                        let lhs = a.involve(j, &xy);
                        let (xs, ys) = (a.involve(j, x), a.involve(j, y));
                        if c.covariant {
                            let rhs = a.mul(k, &xs, &ys);
                            self.expect(Law::Covariance, Some(k), Some(j), origin, &lhs, &rhs, mx * my, tol);
                        }
                        if c.contravariant {
                            let rhs = a.mul(k, &ys, &xs);
                            self.expect(Law::Contravariance, Some(k), Some(j), origin, &lhs, &rhs, mx * my, tol);
                        }
                    }
                    if triples {
                        for z in elems {
                            let mz = mag(z);
                            let l = a.mul(k, &xy, z);
                            let r = a.mul(k, x, &a.mul(k, y, z));
                            self.expect(Law::Associativity, Some(k), None, origin, &l, &r, mx * my * mz, tol);
                            let l = a.mul(k, x, &a.add(y, z));
                            let r = a.add(&xy, &a.mul(k, x, z));
                            self.expect(Law::Distributivity, Some(k), None, origin, &l, &r, mx * (my + mz), tol);
                        }
                    }
                }
            }
        }
    }
}

/// Checks the *-algebra laws and the declared covariance table: exhaustively
/// and exactly on the basis, then on seeded random samples with a relative
/// tolerance.
pub fn validate_star_algebra<A: CoefficientSystem>(a: &A, cfg: &AlgebraCheckConfig) -> AlgebraReport {
    let mut ch = Checker { a, report: AlgebraReport { seed: cfg.seed, violations: Vec::new() } };
    let basis = a.basis();
    ch.check_elems(&basis, "basis", None, true);
    let mut rng = rng_from_seed(cfg.seed);
    let samples: Vec<A::Elem> = (0..cfg.samples).map(|i| a.sample(&mut rng, i)).collect();
    // triples over all samples would be cubic; use consecutive windows
    ch.check_elems(&samples, "samples", Some(cfg.tol), false);
    for w in samples.windows(3) {
        ch.check_elems(w, "sample triple", Some(cfg.tol), true);
    }
    if cfg.require_common_unit {
        let u0 = a.unit(0);
        for k in 1..a.product_count() {
            ch.expect(Law::Unit, Some(k), None, "common unit", &a.unit(k), &u0, 1.0, None);
        }
    }
    ch.report
}

/// Returns a non-commuting pair for `product`, or `None` when the product
/// commutes on the basis and on seeded samples.
pub fn is_commutative<A: CoefficientSystem>(
    a: &A,
    product: usize,
    cfg: &AlgebraCheckConfig,
) -> Option<(A::Elem, A::Elem)> {
    let basis = a.basis();
    for x in &basis {
        for y in &basis {
            if a.distance(&a.mul(product, x, y), &a.mul(product, y, x)) != 0.0 {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    let mut rng = rng_from_seed(cfg.seed);
    let samples: Vec<A::Elem> = (0..cfg.samples).map(|i| a.sample(&mut rng, i)).collect();
    for w in samples.windows(2) {
        let (x, y) = (&w[0], &w[1]);
        let d = a.distance(&a.mul(product, x, y), &a.mul(product, y, x));
        if d > cfg.tol * (a.magnitude(x) * a.magnitude(y)).max(1.0) {
            return Some((x.clone(), y.clone()));
        }
    }
    None
}

/// A (composition, involution) pair of the base with its variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasePair {
    pub composition: usize,
    pub involution: usize,
    pub contravariant: bool,
}

/// Every pair formed by a family of involutions over a base with `count`
/// compositions; exempt compositions are skipped.
pub fn base_pairs(count: usize, family: &[InvolutionSpec]) -> Vec<BasePair> {
    let mut out = Vec::new();
    for (i, spec) in family.iter().enumerate() {
        for k in (0..count).filter(|k| !spec.exempt.contains(k)) {
            out.push(BasePair { composition: k, involution: i, contravariant: spec.is_contravariant(k) });
        }
    }
    out
}

/// Which coefficient product serves each base composition and which
/// coefficient involution serves each base involution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub products: Vec<usize>,
    pub involutions: Vec<usize>,
}

impl Assignment {
    /// Everything onto product 0 and involution 0.
    pub fn trivial(compositions: usize, involutions: usize) -> Self {
        Assignment { products: vec![0; compositions], involutions: vec![0; involutions] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MatchResult {
    Found(Assignment),
    /// No assignment exists; `pair` is where the deepest search attempt failed.
    Blocked { pair: BasePair },
}

impl MatchResult {
    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            MatchResult::Found(a) => Some(a),
            MatchResult::Blocked { .. } => None,
        }
    }
}

/// Finds the lexicographically least assignment (products first, then
/// involutions) under which every base pair has a coefficient pair with the
/// same variance.
pub fn covariance_match<A: CoefficientSystem>(
    pairs: &[BasePair],
    compositions: usize,
    involutions: usize,
    a: &A,
) -> MatchResult {
    let vars = compositions + involutions;
    let domain = |v: usize| if v < compositions { a.product_count() } else { a.involution_count() };
    let mut values = vec![0usize; vars];
    let mut deepest: (usize, Option<BasePair>) = (0, None);

    // pairs become checkable once both of their variables are assigned
    let ready_at = |p: &BasePair| p.composition.max(compositions + p.involution);

    fn search<A: CoefficientSystem>(
        depth: usize,
        vars: usize,
        compositions: usize,
        values: &mut Vec<usize>,
        pairs: &[BasePair],
        domain: &dyn Fn(usize) -> usize,
        ready_at: &dyn Fn(&BasePair) -> usize,
        deepest: &mut (usize, Option<BasePair>),
        a: &A,
    ) -> bool {
        if depth == vars {
            return true;
        }
        for val in 0..domain(depth) {
            values[depth] = val;
            let failed = pairs.iter().find(|p| {
                ready_at(p) == depth
                    && !a
                        .covariance(values[p.composition], values[compositions + p.involution])
                        .allows(p.contravariant)
            });
            match failed {
                Some(p) => {
                    if deepest.1.is_none() || depth > deepest.0 {
                        *deepest = (depth, Some(*p));
                    }
                }
                None => {
                    if search(depth + 1, vars, compositions, values, pairs, domain, ready_at, deepest, a) {
                        return true;
                    }
                }
            }
        }
        false
    }

    if search(0, vars, compositions, &mut values, pairs, &domain, &ready_at, &mut deepest, a) {
        MatchResult::Found(Assignment {
            products: values[..compositions].to_vec(),
            involutions: values[compositions..].to_vec(),
        })
    } else {
        let pair = deepest.1.unwrap_or(BasePair { composition: 0, involution: 0, contravariant: false });
        MatchResult::Blocked { pair }
    }
}

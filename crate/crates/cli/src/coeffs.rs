//! Coefficient systems selectable from the command line, all represented by
//! square matrices: `C` as 1×1, `M<d>` as d×d and `H<N_1,..,N_n>` as the
//! `∏N_k × ∏N_k` matrix of a hypermatrix.

use hicat_core::coeff::{CoefficientSystem, ComplexField, Covariance, MatrixAlgebra};
use hicat_core::hypermatrix::{Hypermatrix, HypermatrixSystem};
use hicat_core::linalg::CMat;
use hicat_core::sampling::SampleRng;
use hicat_core::Complex64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyCoeff {
    Scalar,
    Matrix(MatrixAlgebra),
    Hyper(HypermatrixSystem),
}

impl AnyCoeff {
    pub fn parse(spec: &str) -> Result<AnyCoeff, String> {
        let s = spec.trim();
        if s.eq_ignore_ascii_case("c") {
            return Ok(AnyCoeff::Scalar);
        }
        let bad = || format!("unknown coefficients `{spec}`; use C, M<d> or H<N1,N2,..>");
        if let Some(d) = s.strip_prefix(['M', 'm']) {
            return match d.parse::<usize>() {
                Ok(d) if (1..=64).contains(&d) => Ok(AnyCoeff::Matrix(MatrixAlgebra::new(d))),
                _ => Err(bad()),
            };
        }
        if let Some(dims) = s.strip_prefix(['H', 'h']) {
            let dims = parse_dims(dims).ok_or_else(bad)?;
            return HypermatrixSystem::new(&dims).map(AnyCoeff::Hyper).map_err(|e| e.to_string());
        }
        Err(bad())
    }

    /// Side length of the matrices representing elements.
    pub fn side(&self) -> usize {
        match self {
            AnyCoeff::Scalar => 1,
            AnyCoeff::Matrix(m) => m.d,
            AnyCoeff::Hyper(h) => h.dims.iter().product(),
        }
    }

    fn hyper(&self, h: &HypermatrixSystem, m: &CMat) -> Hypermatrix {
        Hypermatrix::from_vec(&h.dims, m.data().to_vec()).expect("side matches dims")
    }
}

/// `2,2` or `2x2` into `[2, 2]`.
pub fn parse_dims(s: &str) -> Option<Vec<usize>> {
    let dims: Option<Vec<usize>> = s.split([',', 'x']).map(|t| t.trim().parse().ok()).collect();
    dims.filter(|d| !d.is_empty() && d.iter().all(|&n| n > 0))
}

fn from_hyper(h: Hypermatrix) -> CMat {
    h.as_matrix()
}

impl CoefficientSystem for AnyCoeff {
    type Elem = CMat;

    fn label(&self) -> String {
        match self {
            AnyCoeff::Scalar => ComplexField.label(),
            AnyCoeff::Matrix(m) => m.label(),
            AnyCoeff::Hyper(h) => h.label(),
        }
    }
    fn zero(&self) -> CMat {
        let d = self.side();
        CMat::zeros(d, d)
    }
    fn unit(&self, product: usize) -> CMat {
        match self {
            AnyCoeff::Scalar => CMat::identity(1),
            AnyCoeff::Matrix(m) => m.unit(product),
            AnyCoeff::Hyper(h) => from_hyper(h.unit(product)),
        }
    }
    fn add(&self, a: &CMat, b: &CMat) -> CMat {
        a.add(b)
    }
    fn scale(&self, c: Complex64, a: &CMat) -> CMat {
        a.scale(c)
    }
    fn product_count(&self) -> usize {
        match self {
            AnyCoeff::Scalar => 1,
            AnyCoeff::Matrix(m) => m.product_count(),
            AnyCoeff::Hyper(h) => h.product_count(),
        }
    }
    fn mul(&self, product: usize, a: &CMat, b: &CMat) -> CMat {
        match self {
            AnyCoeff::Scalar | AnyCoeff::Matrix(_) => a.matmul(b),
            AnyCoeff::Hyper(h) => from_hyper(h.mul(product, &self.hyper(h, a), &self.hyper(h, b))),
        }
    }
    fn involution_count(&self) -> usize {
        match self {
            AnyCoeff::Scalar => 1,
            AnyCoeff::Matrix(m) => m.involution_count(),
            AnyCoeff::Hyper(h) => h.involution_count(),
        }
    }
    fn involve(&self, involution: usize, a: &CMat) -> CMat {
        match self {
            AnyCoeff::Scalar | AnyCoeff::Matrix(_) => a.adjoint(),
            AnyCoeff::Hyper(h) => from_hyper(h.involve(involution, &self.hyper(h, a))),
        }
    }
    fn covariance(&self, product: usize, involution: usize) -> Covariance {
        match self {
            AnyCoeff::Scalar => ComplexField.covariance(product, involution),
            AnyCoeff::Matrix(m) => m.covariance(product, involution),
            AnyCoeff::Hyper(h) => h.covariance(product, involution),
        }
    }
    fn distance(&self, a: &CMat, b: &CMat) -> f64 {
        a.max_abs_diff(b)
    }
    fn magnitude(&self, a: &CMat) -> f64 {
        a.max_abs()
    }
    fn basis(&self) -> Vec<CMat> {
        match self {
            AnyCoeff::Scalar => ComplexField.basis().into_iter().map(CMat::scalar).collect(),
            AnyCoeff::Matrix(m) => m.basis(),
            AnyCoeff::Hyper(h) => h.basis().into_iter().map(from_hyper).collect(),
        }
    }
    fn sample(&self, rng: &mut SampleRng, index: usize) -> CMat {
        match self {
            AnyCoeff::Scalar => CMat::scalar(ComplexField.sample(rng, index)),
            AnyCoeff::Matrix(m) => m.sample(rng, index),
            AnyCoeff::Hyper(h) => from_hyper(h.sample(rng, index)),
        }
    }
    fn integer_sample(&self, rng: &mut SampleRng) -> CMat {
        match self {
            AnyCoeff::Scalar => CMat::scalar(ComplexField.integer_sample(rng)),
            AnyCoeff::Matrix(m) => m.integer_sample(rng),
            AnyCoeff::Hyper(h) => from_hyper(h.integer_sample(rng)),
        }
    }
    fn left_matrix(&self, product: usize, a: &CMat) -> Option<CMat> {
        match self {
            AnyCoeff::Scalar | AnyCoeff::Matrix(_) => Some(a.clone()),
            AnyCoeff::Hyper(h) => h.left_matrix(product, &self.hyper(h, a)),
        }
    }
}

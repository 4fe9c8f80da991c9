//! Hypermatrices: arrays indexed by `(i_1..i_n; j_1..j_n)` with
//! `1 <= i_k, j_k <= N_k` (stored 0-based, row-major in that order).
//!
//! For a level set `γ`, the product `•_γ` multiplies as matrices at the
//! levels in `γ` and entrywise (Schur) at the others; `⋆_γ` conjugates every
//! entry and transposes the levels in `γ`; `‖·‖_γ` is the largest operator
//! norm of the `γ`-level matrices obtained by fixing the other levels.

use num_complex::Complex64;
use serde::Serialize;
use std::fmt::Write as _;

use crate::coeff::{CoefficientSystem, Covariance};
use crate::convolution::Section;
use crate::cstar::op_norm;
use crate::error::HyperError;
use crate::involutive::InvolutionSpec;
use crate::linalg::CMat;
use crate::ncat::{CellId, FullDepthCategory, LevelSet, MultiCategory};
use crate::sampling::{self, SampleRng};

/// Largest number of entries `∏ N_k²` a hypermatrix may have.
pub const ENTRY_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypermatrix {
    dims: Vec<usize>,
    data: Vec<Complex64>,
}

fn side(dims: &[usize]) -> usize {
    dims.iter().product()
}

fn check_dims(dims: &[usize]) -> Result<usize, HyperError> {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(HyperError::EmptyDims);
    }
    let r = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .and_then(|r| r.checked_mul(r));
    match r {
        Some(total) if total <= ENTRY_BUDGET => Ok(total),
        _ => Err(HyperError::TooLarge { dims: dims.to_vec(), budget: ENTRY_BUDGET }),
    }
}

fn check_levels(gamma: LevelSet, n: usize) -> Result<(), HyperError> {
    if gamma.is_subset(LevelSet::all(n)) {
        Ok(())
    } else {
        Err(HyperError::BadLevels { gamma: gamma.to_string(), levels: n })
    }
}

/// Splits a flat row index into per-level indices, first level most
/// significant.
fn split(mut r: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = r % dims[k];
        r /= dims[k];
    }
}

fn join(parts: &[usize], dims: &[usize]) -> usize {
    parts.iter().zip(dims).fold(0, |acc, (&p, &d)| acc * d + p)
}

impl Hypermatrix {
    pub fn zeros(dims: &[usize]) -> Result<Self, HyperError> {
        let total = check_dims(dims)?;
        Ok(Hypermatrix { dims: dims.to_vec(), data: vec![Complex64::new(0.0, 0.0); total] })
    }

    pub fn from_vec(dims: &[usize], data: Vec<Complex64>) -> Result<Self, HyperError> {
        let total = check_dims(dims)?;
        if data.len() != total {
            return Err(HyperError::DimMismatch(dims.to_vec(), vec![data.len()]));
        }
        Ok(Hypermatrix { dims: dims.to_vec(), data })
    }

    /// Entry function over 0-based `(i, j)` multi-indices.
    pub fn from_fn(dims: &[usize], f: impl Fn(&[usize], &[usize]) -> Complex64) -> Result<Self, HyperError> {
        let mut h = Hypermatrix::zeros(dims)?;
        let r = side(dims);
        let n = dims.len();
        let (mut i, mut j) = (vec![0; n], vec![0; n]);
        for a in 0..r {
            split(a, dims, &mut i);
            for b in 0..r {
                split(b, dims, &mut j);
                h.data[a * r + b] = f(&i, &j);
            }
        }
        Ok(h)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn levels(&self) -> usize {
        self.dims.len()
    }

    /// `∏ N_k`, the number of row (and column) multi-indices.
    pub fn side(&self) -> usize {
        side(&self.dims)
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: &[usize], j: &[usize]) -> Complex64 {
        self.data[join(i, &self.dims) * self.side() + join(j, &self.dims)]
    }

    pub fn set(&mut self, i: &[usize], j: &[usize], v: Complex64) {
        let r = self.side();
        self.data[join(i, &self.dims) * r + join(j, &self.dims)] = v;
    }

    pub fn add(&self, other: &Hypermatrix) -> Hypermatrix {
        Hypermatrix {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Hypermatrix {
        Hypermatrix { dims: self.dims.clone(), data: self.data.iter().map(|z| c * z).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Hypermatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// The whole hypermatrix as a `∏N_k × ∏N_k` matrix.
    pub fn as_matrix(&self) -> CMat {
        let r = self.side();
        CMat::from_vec(r, r, self.data.clone())
    }

    /// Parses the text format: a header `hyper n N_1 .. N_n`, then lines
    /// `i_1 .. i_n j_1 .. j_n re im` with 1-based indices. Absent entries
    /// are zero; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Hypermatrix, HyperError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line: usize, msg: &str| HyperError::Parse { line, msg: msg.to_string() };
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.first() != Some(&"hyper") || toks.len() < 2 {
            return Err(err(hl, "header must be `hyper n N_1 .. N_n`"));
        }
        let n: usize = toks[1].parse().map_err(|_| err(hl, "bad level count"))?;
        if toks.len() != n + 2 {
            return Err(err(hl, "header must list one size per level"));
        }
        let dims: Vec<usize> = toks[2..]
            .iter()
            .map(|t| t.parse().map_err(|_| err(hl, "bad level size")))
            .collect::<Result<_, _>>()?;
        let mut h = Hypermatrix::zeros(&dims)?;
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 * n + 2 {
                return Err(err(ln, "entry line needs 2n indices and a complex value"));
            }
            let mut idx = Vec::with_capacity(2 * n);
            for (k, t) in toks[..2 * n].iter().enumerate() {
                let v: usize = t.parse().map_err(|_| err(ln, "bad index"))?;
                let bound = dims[k % n];
                if v == 0 || v > bound {
                    return Err(err(ln, "index out of range"));
                }
                idx.push(v - 1);
            }
            let re: f64 = toks[2 * n].parse().map_err(|_| err(ln, "bad real part"))?;
            let im: f64 = toks[2 * n + 1].parse().map_err(|_| err(ln, "bad imaginary part"))?;
            h.set(&idx[..n], &idx[n..], Complex64::new(re, im));
        }
        Ok(h)
    }

    /// Writes the text format, listing the nonzero entries.
    pub fn to_text(&self) -> String {
        let n = self.levels();
        let mut out = String::new();
        write!(out, "hyper {n}").unwrap();
        for d in &self.dims {
            write!(out, " {d}").unwrap();
        }
        out.push('\n');
        let r = self.side();
        let (mut i, mut j) = (vec![0; n], vec![0; n]);
        for a in 0..r {
            split(a, &self.dims, &mut i);
            for b in 0..r {
                let v = self.data[a * r + b];
                if v.re == 0.0 && v.im == 0.0 {
                    continue;
                }
                split(b, &self.dims, &mut j);
                for k in i.iter().chain(j.iter()) {
                    write!(out, "{} ", k + 1).unwrap();
                }
                writeln!(out, "{} {}", v.re, v.im).unwrap();
            }
        }
        out
    }
}

fn same_dims(x: &Hypermatrix, y: &Hypermatrix) -> Result<(), HyperError> {
    if x.dims != y.dims {
        Err(HyperError::DimMismatch(x.dims.clone(), y.dims.clone()))
    } else {
        Ok(())
    }
}

/// `x •_γ y`: matrix product at the levels in `γ`, Schur product elsewhere.
/// Each entry sums over the contracted indices in lexicographic order,
/// first level most significant, starting from zero.
pub fn hmul(gamma: LevelSet, x: &Hypermatrix, y: &Hypermatrix) -> Result<Hypermatrix, HyperError> {
    same_dims(x, y)?;
    let n = x.levels();
    check_levels(gamma, n)?;
    let dims = &x.dims;
    let r = x.side();
    let contracted: Vec<usize> = gamma.iter().collect();
    let inner: usize = contracted.iter().map(|&k| dims[k]).product();
    let cdims: Vec<usize> = contracted.iter().map(|&k| dims[k]).collect();
    let mut out = Hypermatrix::zeros(dims)?;
    let (mut i, mut j, mut o) = (vec![0; n], vec![0; n], vec![0; contracted.len()]);
    let (mut xi, mut yj) = (vec![0; n], vec![0; n]);
    for a in 0..r {
        split(a, dims, &mut i);
        for b in 0..r {
            split(b, dims, &mut j);
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..inner {
                split(c, &cdims, &mut o);
                xi.copy_from_slice(&j);
                yj.copy_from_slice(&i);
                for (t, &k) in contracted.iter().enumerate() {
                    xi[k] = o[t];
                    yj[k] = o[t];
                }
                let xv = x.data[a * r + join(&xi, dims)];
                let yv = y.data[join(&yj, dims) * r + b];
                acc += xv * yv;
            }
            out.data[a * r + b] = acc;
        }
    }
    Ok(out)
}

/// `x^{⋆_γ}`: conjugate every entry and swap `i_k`, `j_k` for `k ∈ γ`.
pub fn hinvol(gamma: LevelSet, x: &Hypermatrix) -> Result<Hypermatrix, HyperError> {
    let n = x.levels();
    check_levels(gamma, n)?;
    let dims = &x.dims;
    let r = x.side();
    let mut out = Hypermatrix::zeros(dims)?;
    let (mut i, mut j) = (vec![0; n], vec![0; n]);
    for a in 0..r {
        split(a, dims, &mut i);
        for b in 0..r {
            split(b, dims, &mut j);
            for k in gamma.iter() {
                std::mem::swap(&mut i[k], &mut j[k]);
            }
            out.data[a * r + b] = x.data[join(&i, dims) * r + join(&j, dims)].conj();
            split(a, dims, &mut i);
        }
    }
    Ok(out)
}

/// `‖x‖_γ`: the largest operator norm of the `γ`-level slices. `γ = ∅`
/// gives the largest entry modulus, `γ` = all levels the operator norm of
/// the whole hypermatrix. Non-finite entries give `NaN`.
pub fn hnorm(gamma: LevelSet, x: &Hypermatrix) -> Result<f64, HyperError> {
    let n = x.levels();
    check_levels(gamma, n)?;
    let dims = &x.dims;
    let inside: Vec<usize> = gamma.iter().collect();
    let outside: Vec<usize> = (0..n).filter(|&k| !gamma.contains(k)).collect();
    let idims: Vec<usize> = inside.iter().map(|&k| dims[k]).collect();
    let odims: Vec<usize> = outside.iter().flat_map(|&k| [dims[k], dims[k]]).collect();
    let m: usize = idims.iter().product();
    let slices: usize = odims.iter().product();
    let (mut i, mut j) = (vec![0; n], vec![0; n]);
    let mut oi = vec![0; odims.len()];
    let (mut ra, mut ca) = (vec![0; inside.len()], vec![0; inside.len()]);
    let mut best = 0.0f64;
    for s in 0..slices {
        split(s, &odims, &mut oi);
        for (t, &k) in outside.iter().enumerate() {
            i[k] = oi[2 * t];
            j[k] = oi[2 * t + 1];
        }
        let mut slice = CMat::zeros(m, m);
        for r in 0..m {
            split(r, &idims, &mut ra);
            for c in 0..m {
                split(c, &idims, &mut ca);
                for (t, &k) in inside.iter().enumerate() {
                    i[k] = ra[t];
                    j[k] = ca[t];
                }
                slice[(r, c)] = x.get(&i, &j);
            }
        }
        match op_norm(&slice) {
            Ok(v) => best = best.max(v),
            Err(_) => return Ok(f64::NAN),
        }
    }
    Ok(best)
}

/// The unit of `•_γ`: `∏_{k∈γ} δ(i_k, j_k)`.
pub fn unit(dims: &[usize], gamma: LevelSet) -> Result<Hypermatrix, HyperError> {
    check_levels(gamma, dims.len())?;
    Hypermatrix::from_fn(dims, |i, j| {
        if gamma.iter().all(|k| i[k] == j[k]) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn check_product_base(fdc: &FullDepthCategory, dims: &[usize]) -> Result<(), HyperError> {
    let want: Vec<usize> = dims.iter().map(|d| d * d).collect();
    match fdc.factor_sizes() {
        Some(s) if s == want.as_slice() && fdc.directions() == dims.len() => Ok(()),
        _ => Err(HyperError::BaseMismatch(dims.to_vec())),
    }
}

/// Reads a hypermatrix as a section over the product of pair groupoids on
/// `{1..N_k}`: cell `((i_1,j_1), .., (i_n,j_n))` carries entry `x(i; j)`.
pub fn to_section(x: &Hypermatrix, fdc: &FullDepthCategory) -> Result<Section<Complex64>, HyperError> {
    check_product_base(fdc, &x.dims)?;
    let n = x.levels();
    let mut values = vec![Complex64::new(0.0, 0.0); fdc.cell_count()];
    let (mut i, mut j) = (vec![0; n], vec![0; n]);
    for c in fdc.cells() {
        let parts = fdc.components(c).expect("product base");
        for k in 0..n {
            i[k] = parts[k] / x.dims[k];
            j[k] = parts[k] % x.dims[k];
        }
        values[c.0] = x.get(&i, &j);
    }
    Ok(Section::new(values))
}

pub fn from_section(
    s: &Section<Complex64>,
    fdc: &FullDepthCategory,
    dims: &[usize],
) -> Result<Hypermatrix, HyperError> {
    check_product_base(fdc, dims)?;
    if s.len() != fdc.cell_count() {
        return Err(HyperError::DimMismatch(dims.to_vec(), vec![s.len()]));
    }
    let n = dims.len();
    let mut h = Hypermatrix::zeros(dims)?;
    let (mut i, mut j) = (vec![0; n], vec![0; n]);
    for c in fdc.cells() {
        let parts = fdc.components(c).expect("product base");
        for k in 0..n {
            i[k] = parts[k] / dims[k];
            j[k] = parts[k] % dims[k];
        }
        h.set(&i, &j, s.values[c.0]);
    }
    Ok(h)
}

/// The involution of a product of pair groupoids that inverts the
/// components in `gamma`. Composition `comp_h` composes the directions
/// outside `h`; the involution reverses it when all of those lie in
/// `gamma`, preserves it when none do, and is exempt from it otherwise.
pub fn product_inversion(fdc: &FullDepthCategory, dims: &[usize], gamma: LevelSet) -> Result<InvolutionSpec, HyperError> {
    check_product_base(fdc, dims)?;
    let n = dims.len();
    let map = fdc
        .cells()
        .map(|c| {
            let mut parts = fdc.components(c).expect("product base");
            for k in gamma.iter() {
                let (i, j) = (parts[k] / dims[k], parts[k] % dims[k]);
                parts[k] = j * dims[k] + i;
            }
            fdc.from_components(&parts).expect("product base")
        })
        .collect::<Vec<CellId>>();
    let mut contra = Vec::new();
    let mut exempt = Vec::new();
    for held in LevelSet::all_subsets(n) {
        let composed = held.complement(n);
        if composed.is_empty() || composed.intersection(gamma).is_empty() {
            continue;
        }
        if composed.is_subset(gamma) {
            contra.push(held.0 as usize);
        } else {
            exempt.push(held.0 as usize);
        }
    }
    Ok(InvolutionSpec::new(map, contra).with_exempt(exempt))
}

/// Hypermatrices of fixed dims with all `2^n` involutions, indexed by their
/// level-set masks, and a list of products. By default every product is
/// present and product `k` is `•_δ` for the mask `δ = k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypermatrixSystem {
    pub dims: Vec<usize>,
    pub products: Vec<LevelSet>,
}

impl HypermatrixSystem {
    pub fn new(dims: &[usize]) -> Result<Self, HyperError> {
        check_dims(dims)?;
        let products = LevelSet::all_subsets(dims.len()).collect();
        Ok(HypermatrixSystem { dims: dims.to_vec(), products })
    }

    /// Only the listed products, in that order.
    pub fn with_products(dims: &[usize], products: Vec<LevelSet>) -> Result<Self, HyperError> {
        check_dims(dims)?;
        for &g in &products {
            check_levels(g, dims.len())?;
        }
        Ok(HypermatrixSystem { dims: dims.to_vec(), products })
    }

    fn n(&self) -> usize {
        self.dims.len()
    }
}

impl CoefficientSystem for HypermatrixSystem {
    type Elem = Hypermatrix;

    fn label(&self) -> String {
        let d: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        format!("H{}", d.join(","))
    }
    fn zero(&self) -> Hypermatrix {
        Hypermatrix::zeros(&self.dims).expect("checked dims")
    }
    fn unit(&self, product: usize) -> Hypermatrix {
        unit(&self.dims, self.products[product]).expect("checked dims")
    }
    fn add(&self, a: &Hypermatrix, b: &Hypermatrix) -> Hypermatrix {
        a.add(b)
    }
    fn scale(&self, c: Complex64, a: &Hypermatrix) -> Hypermatrix {
        a.scale(c)
    }
    fn product_count(&self) -> usize {
        self.products.len()
    }
    fn mul(&self, product: usize, a: &Hypermatrix, b: &Hypermatrix) -> Hypermatrix {
        hmul(self.products[product], a, b).expect("matching dims")
    }
    fn involution_count(&self) -> usize {
        1 << self.n()
    }
    fn involve(&self, involution: usize, a: &Hypermatrix) -> Hypermatrix {
        hinvol(LevelSet(involution as u32), a).expect("matching dims")
    }
    /// `⋆_γ` reverses `•_δ` when `δ ⊆ γ` and preserves it when `δ ∩ γ = ∅`.
    fn covariance(&self, product: usize, involution: usize) -> Covariance {
        let (delta, gamma) = (self.products[product], LevelSet(involution as u32));
        Covariance {
            covariant: delta.intersection(gamma).is_empty(),
            contravariant: delta.is_subset(gamma),
        }
    }
    fn distance(&self, a: &Hypermatrix, b: &Hypermatrix) -> f64 {
        a.max_abs_diff(b)
    }
    fn magnitude(&self, a: &Hypermatrix) -> f64 {
        a.max_abs()
    }
    fn basis(&self) -> Vec<Hypermatrix> {
        let total = side(&self.dims).pow(2);
        (0..total)
            .map(|k| {
                let mut h = self.zero();
                h.data[k] = Complex64::new(1.0, 0.0);
                h
            })
            .collect()
    }
    fn sample(&self, rng: &mut SampleRng, index: usize) -> Hypermatrix {
        let r = side(&self.dims);
        let m = sampling::structured_matrix(rng, r, index);
        Hypermatrix::from_vec(&self.dims, m.data().to_vec()).expect("checked dims")
    }
    fn integer_sample(&self, rng: &mut SampleRng) -> Hypermatrix {
        let total = side(&self.dims).pow(2);
        Hypermatrix::from_vec(&self.dims, sampling::integer_vec(rng, total, 3)).expect("checked dims")
    }
    /// Left multiplication under `•_δ` on the entries, as a matrix.
    fn left_matrix(&self, product: usize, a: &Hypermatrix) -> Option<CMat> {
        let total = side(&self.dims).pow(2);
        let mut out = CMat::zeros(total, total);
        for k in 0..total {
            let mut e = self.zero();
            e.data[k] = Complex64::new(1.0, 0.0);
            let col = self.mul(product, a, &e);
            for (row, v) in col.data.iter().enumerate() {
                out[(row, k)] = *v;
            }
        }
        Some(out)
    }
}

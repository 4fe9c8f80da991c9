//! Conjugates of 1-cells in a 2-category, folding maps and daggers.
//!
//! Notation: `a ⊗ b` is `b ∘_0 a` (diagrammatic order) and `∘` is `∘_1`.
//! A 1-cell is its own identity 2-cell and an object is its own identity
//! 1-cell, so `ι²(x)` and `ι¹(A)` are just `x` and `A`.
//!
//! For a 1-cell `x: A → B` with conjugate `x̄: B → A` the units are
//! `R_x: ι¹(B) ⇒ x̄ ⊗ x` and `R̄_x: ι¹(A) ⇒ x ⊗ x̄`. For a 2-cell
//! `Φ: x ⇒ y`:
//!
//! ```text
//! Φ_• = (x̄ ⊗ R̄*_y) ∘ (x̄ ⊗ Φ ⊗ ȳ) ∘ (R_x ⊗ ȳ)
//! _•Φ = (R*_y ⊗ x̄) ∘ (ȳ ⊗ Φ ⊗ x̄) ∘ (ȳ ⊗ R̄_x)
//! Φ^† = (Φ*)_•,   Φ^‡ = _•(Φ*)
//! ```

use serde::Serialize;

use crate::error::InvolutionError;
use crate::involutive::{validate_involution, InvolutionSpec};
use crate::ncat::{CellId, FiniteGlobularCategory, MultiCategory};
use crate::report::{Law, Scope, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conjugate {
    pub bar: CellId,
    pub r: CellId,
    pub rbar: CellId,
}

/// Conjugates for the 1-cells of a 2-category together with the involution
/// over 1-arrows used to form `R*` and `Φ*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationData {
    pub star: Vec<CellId>,
    /// Indexed by cell; must be present for every 1-cell.
    pub conjugates: Vec<Option<Conjugate>>,
}

impl ConjugationData {
    pub fn conjugate(&self, x: CellId) -> Option<Conjugate> {
        self.conjugates.get(x.0).copied().flatten()
    }

    /// Replaces `R_x`, for mutation experiments.
    pub fn with_r(mut self, x: CellId, r: CellId) -> Self {
        if let Some(c) = self.conjugates[x.0].as_mut() {
            c.r = r;
        }
        self
    }

    pub fn with_rbar(mut self, x: CellId, rbar: CellId) -> Self {
        if let Some(c) = self.conjugates[x.0].as_mut() {
            c.rbar = rbar;
        }
        self
    }
}

/// Optional conditions checked on top of the conjugate equations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConjugationFlags {
    pub unital: bool,
    pub involutive: bool,
    pub tensorial: bool,
    pub traciable: bool,
    /// Accepted for completeness; unitarity is not checked.
    pub unitary: bool,
}

impl ConjugationFlags {
    pub fn all() -> Self {
        ConjugationFlags {
            unital: true,
            involutive: true,
            tensorial: true,
            traciable: true,
            unitary: false,
        }
    }
}

struct Ctx<'a> {
    cat: &'a FiniteGlobularCategory,
    data: &'a ConjugationData,
}

impl Ctx<'_> {
    fn tensor(&self, a: CellId, b: CellId) -> Option<CellId> {
        self.cat.compose(0, b, a)
    }

    fn tensor3(&self, a: CellId, b: CellId, c: CellId) -> Option<CellId> {
        self.tensor(self.tensor(a, b)?, c)
    }

    fn vc(&self, a: CellId, b: CellId) -> Option<CellId> {
        self.cat.compose(1, a, b)
    }

    fn star(&self, a: CellId) -> CellId {
        self.data.star[a.0]
    }

    fn conj(&self, x: CellId) -> Option<Conjugate> {
        self.data.conjugate(x)
    }

    fn ends(&self, phi: CellId) -> (CellId, CellId) {
        (self.cat.source(1, phi), self.cat.target(1, phi))
    }

    fn fold_right(&self, phi: CellId) -> Option<CellId> {
        let (x, y) = self.ends(phi);
        let (cx, cy) = (self.conj(x)?, self.conj(y)?);
        let a = self.tensor(cx.r, cy.bar)?;
        let b = self.tensor3(cx.bar, phi, cy.bar)?;
        let c = self.tensor(cx.bar, self.star(cy.rbar))?;
        self.vc(c, self.vc(b, a)?)
    }

    fn fold_left(&self, phi: CellId) -> Option<CellId> {
        let (x, y) = self.ends(phi);
        let (cx, cy) = (self.conj(x)?, self.conj(y)?);
        let a = self.tensor(cy.bar, cx.rbar)?;
        let b = self.tensor3(cy.bar, phi, cx.bar)?;
        let c = self.tensor(self.star(cy.r), cx.bar)?;
        self.vc(c, self.vc(b, a)?)
    }
}

fn check_shape(cat: &FiniteGlobularCategory, data: &ConjugationData) -> Result<(), InvolutionError> {
    if cat.depth() != 2 {
        return Err(InvolutionError::NotTwoCategory { depth: cat.depth() });
    }
    if data.star.len() != cat.len() || data.star.iter().any(|c| c.0 >= cat.len()) {
        return Err(InvolutionError::MapLength { got: data.star.len(), cells: cat.len() });
    }
    for x in cat.cells().filter(|&x| cat.is_identity(1, x)) {
        match data.conjugate(x) {
            None => return Err(InvolutionError::MissingConjugate { cell: x.0 }),
            Some(c) if [c.bar, c.r, c.rbar].iter().any(|v| v.0 >= cat.len()) => {
                return Err(InvolutionError::MapLength { got: data.conjugates.len(), cells: cat.len() })
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// `Φ_•`, or an error when a composite along the way is undefined.
pub fn fold_right(
    cat: &FiniteGlobularCategory,
    data: &ConjugationData,
    phi: CellId,
) -> Result<CellId, InvolutionError> {
    check_shape(cat, data)?;
    Ctx { cat, data }
        .fold_right(phi)
        .ok_or(InvolutionError::FoldingUndefined { cell: phi.0 })
}

/// `_•Φ`.
pub fn fold_left(
    cat: &FiniteGlobularCategory,
    data: &ConjugationData,
    phi: CellId,
) -> Result<CellId, InvolutionError> {
    check_shape(cat, data)?;
    Ctx { cat, data }
        .fold_left(phi)
        .ok_or(InvolutionError::FoldingUndefined { cell: phi.0 })
}

/// `Φ^† = (Φ*)_•`.
pub fn dagger(
    cat: &FiniteGlobularCategory,
    data: &ConjugationData,
    phi: CellId,
) -> Result<CellId, InvolutionError> {
    check_shape(cat, data)?;
    fold_right(cat, data, data.star[phi.0])
}

/// `Φ^‡ = _•(Φ*)`.
pub fn ddagger(
    cat: &FiniteGlobularCategory,
    data: &ConjugationData,
    phi: CellId,
) -> Result<CellId, InvolutionError> {
    check_shape(cat, data)?;
    fold_left(cat, data, data.star[phi.0])
}

/// Checks the involution over 1-arrows, the shapes of `x̄`, `R_x`, `R̄_x`,
/// both conjugate equations, and whichever optional conditions are flagged.
pub fn validate_conjugation(
    cat: &FiniteGlobularCategory,
    data: &ConjugationData,
    flags: ConjugationFlags,
) -> Result<ValidationReport, InvolutionError> {
    check_shape(cat, data)?;
    let ctx = Ctx { cat, data };
    let mut report = validate_involution(cat, &InvolutionSpec::new(data.star.clone(), [1]))?;
    let scope = Scope::Depth { p: 1 };
    let one_cells: Vec<CellId> = cat.cells().filter(|&x| cat.is_identity(1, x)).collect();

    for &x in &one_cells {
        let c = ctx.conj(x).expect("checked above");
        let (a, b) = (cat.source(0, x), cat.target(0, x));
        let bar_ok = cat.is_identity(1, c.bar) && cat.source(0, c.bar) == b && cat.target(0, c.bar) == a;
        let r_ok = cat.source(1, c.r) == b && Some(cat.target(1, c.r)) == ctx.tensor(c.bar, x);
        let rbar_ok = cat.source(1, c.rbar) == a && Some(cat.target(1, c.rbar)) == ctx.tensor(x, c.bar);
        if !(bar_ok && r_ok && rbar_ok) {
            report.push(Law::ConjugateShape, scope, vec![x, c.bar, c.r, c.rbar]);
        }
        let first = ctx
            .tensor(ctx.star(c.rbar), x)
            .zip(ctx.tensor(x, c.r))
            .and_then(|(l, r)| ctx.vc(l, r));
        if first != Some(x) {
            report.push_note(Law::ConjugateEquation, scope, vec![x], Some("first".into()));
        }
        let second = ctx
            .tensor(ctx.star(c.r), c.bar)
            .zip(ctx.tensor(c.bar, c.rbar))
            .and_then(|(l, r)| ctx.vc(l, r));
        if second != Some(c.bar) {
            report.push_note(Law::ConjugateEquation, scope, vec![x], Some("second".into()));
        }
    }

    if flags.unital {
        for &x in one_cells.iter().filter(|&&x| cat.is_identity(0, x)) {
            let c = ctx.conj(x).expect("checked above");
            if c.r != x || c.rbar != x || c.bar != x {
                report.push(Law::Unitality, scope, vec![x]);
            }
        }
    }
    if flags.involutive {
        for &x in &one_cells {
            let c = ctx.conj(x).expect("checked above");
            match ctx.conj(c.bar) {
                Some(cb) if cb.bar == x && cb.rbar == c.r && cb.r == c.rbar => {}
                _ => report.push(Law::Involutivity, scope, vec![x]),
            }
        }
    }
    if flags.tensorial {
        for &x in &one_cells {
            for &y in &one_cells {
                let Some(xy) = ctx.tensor(x, y) else { continue };
                let (cx, cy) = (ctx.conj(x).unwrap(), ctx.conj(y).unwrap());
                let Some(cxy) = ctx.conj(xy) else { continue };
                let r = ctx.tensor3(cy.bar, cx.r, y).and_then(|m| ctx.vc(m, cy.r));
                let rbar = ctx.tensor3(x, cy.rbar, cx.bar).and_then(|m| ctx.vc(m, cx.rbar));
                if r != Some(cxy.r) || rbar != Some(cxy.rbar) {
                    report.push(Law::Tensoriality, scope, vec![x, y]);
                }
            }
        }
    }
    if flags.traciable {
        for phi in cat.cells() {
            let (l, r) = (ctx.fold_right(phi), ctx.fold_left(phi));
            if l.is_none() || l != r {
                report.push(Law::Traciability, scope, vec![phi]);
            }
        }
    }
    Ok(report)
}

/// Checks the consequences of the conjugate equations on the folding maps
/// and daggers: `∘`-contravariance of both foldings, `∘`-covariance of `†`
/// and `‡`, `(Φ_•)* = _•(Φ*)` and `(Φ^†)* = (Φ*)^‡`. Under the involutive
/// flag the foldings must be mutually inverse and the daggers involutive;
/// under the tensorial flag the foldings must reverse `⊗` and conjugation
/// must satisfy `(x ⊗ y)‾ = ȳ ⊗ x̄`.
pub fn verify_folding_laws(
    cat: &FiniteGlobularCategory,
    data: &ConjugationData,
    flags: ConjugationFlags,
) -> Result<ValidationReport, InvolutionError> {
    check_shape(cat, data)?;
    let ctx = Ctx { cat, data };
    let mut report = ValidationReport::new();
    let scope = Scope::Depth { p: 1 };
    let n = cat.len();
    let right: Vec<Option<CellId>> = cat.cells().map(|c| ctx.fold_right(c)).collect();
    let left: Vec<Option<CellId>> = cat.cells().map(|c| ctx.fold_left(c)).collect();
    let dag: Vec<Option<CellId>> = cat.cells().map(|c| right[ctx.star(c).0]).collect();
    let ddag: Vec<Option<CellId>> = cat.cells().map(|c| left[ctx.star(c).0]).collect();
    let get = |v: &[Option<CellId>], c: Option<CellId>| c.and_then(|c| v[c.0]);

    for (phi, psi, comp) in cat.tables()[1].defined() {
        let (p, q) = (Some(phi), Some(psi));
        let vc = |a: Option<CellId>, b: Option<CellId>| a.zip(b).and_then(|(a, b)| ctx.vc(a, b));
        let checks = [
            (Law::FoldingContravariance, right[comp.0], vc(get(&right, q), get(&right, p))),
            (Law::FoldingContravariance, left[comp.0], vc(get(&left, q), get(&left, p))),
            (Law::DaggerCovariance, dag[comp.0], vc(get(&dag, p), get(&dag, q))),
            (Law::DaggerCovariance, ddag[comp.0], vc(get(&ddag, p), get(&ddag, q))),
        ];
        for (law, lhs, rhs) in checks {
            if lhs.is_none() || lhs != rhs {
                report.push(law, scope, vec![phi, psi]);
            }
        }
    }
    for phi in (0..n).map(CellId) {
        let lhs = right[phi.0].map(|c| ctx.star(c));
        if lhs.is_none() || lhs != left[ctx.star(phi).0] {
            report.push(Law::FoldingStar, scope, vec![phi]);
        }
        let lhs = dag[phi.0].map(|c| ctx.star(c));
        if lhs.is_none() || lhs != ddag[ctx.star(phi).0] {
            report.push(Law::DaggerStar, scope, vec![phi]);
        }
        if flags.involutive {
            let p = Some(phi);
            if get(&left, right[phi.0]) != p || get(&right, left[phi.0]) != p {
                report.push(Law::FoldingInverse, scope, vec![phi]);
            }
            if get(&dag, dag[phi.0]) != p || get(&ddag, ddag[phi.0]) != p {
                report.push(Law::DaggerInvolutive, scope, vec![phi]);
            }
        }
    }
    if flags.tensorial {
        for phi in (0..n).map(CellId) {
            for psi in (0..n).map(CellId) {
                let Some(t) = ctx.tensor(phi, psi) else { continue };
                let (p, q) = (Some(phi), Some(psi));
                let tensor = |a: Option<CellId>, b: Option<CellId>| a.zip(b).and_then(|(a, b)| ctx.tensor(a, b));
                if right[t.0].is_none() || right[t.0] != tensor(get(&right, q), get(&right, p)) {
                    report.push(Law::TensorContravariance, scope, vec![phi, psi]);
                }
                if left[t.0].is_none() || left[t.0] != tensor(get(&left, q), get(&left, p)) {
                    report.push(Law::TensorContravariance, scope, vec![phi, psi]);
                }
            }
        }
        let one_cells: Vec<CellId> = cat.cells().filter(|&x| cat.is_identity(1, x)).collect();
        for &x in &one_cells {
            for &y in &one_cells {
                let Some(xy) = ctx.tensor(x, y) else { continue };
                let bars = ctx.conj(y).zip(ctx.conj(x)).and_then(|(cy, cx)| ctx.tensor(cy.bar, cx.bar));
                if ctx.conj(xy).map(|c| c.bar) != bars || bars.is_none() {
                    report.push(Law::ConjugateTensor, scope, vec![x, y]);
                }
            }
        }
    }
    Ok(report)
}

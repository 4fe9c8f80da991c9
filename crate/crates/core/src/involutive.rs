//! Involutions over arrows, families of commuting involutions, functors and
//! 1-transfors.

use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::InvolutionError;
use crate::ncat::{CellId, FiniteGlobularCategory, MultiCategory};
use crate::report::{Law, Scope, ValidationReport};

/// A candidate involution: a cell map that should be contravariant for the
/// compositions in `contravariant`, covariant for the others, and ignores
/// the compositions in `exempt`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionSpec {
    pub map: Vec<CellId>,
    pub contravariant: BTreeSet<usize>,
    pub exempt: BTreeSet<usize>,
    pub hermitian: bool,
}

impl InvolutionSpec {
    pub fn new(map: Vec<CellId>, contravariant: impl IntoIterator<Item = usize>) -> Self {
        InvolutionSpec {
            map,
            contravariant: contravariant.into_iter().collect(),
            exempt: BTreeSet::new(),
            hermitian: false,
        }
    }

    pub fn identity(cells: usize) -> Self {
        InvolutionSpec::new((0..cells).map(CellId).collect(), [])
    }

    pub fn with_hermitian(mut self, flag: bool) -> Self {
        self.hermitian = flag;
        self
    }

    pub fn with_exempt(mut self, exempt: impl IntoIterator<Item = usize>) -> Self {
        self.exempt = exempt.into_iter().collect();
        self
    }

    #[inline]
    pub fn apply(&self, x: CellId) -> CellId {
        self.map[x.0]
    }

    pub fn is_contravariant(&self, k: usize) -> bool {
        self.contravariant.contains(&k)
    }
}

fn check_map<C: MultiCategory + ?Sized>(cat: &C, map: &[CellId]) -> Result<(), InvolutionError> {
    let n = cat.cell_count();
    if map.len() != n || map.iter().any(|c| c.0 >= n) {
        return Err(InvolutionError::MapLength { got: map.len(), cells: n });
    }
    Ok(())
}

/// Checks that `spec` is an involution with the declared variance.
pub fn validate_involution<C: MultiCategory + ?Sized>(
    cat: &C,
    spec: &InvolutionSpec,
) -> Result<ValidationReport, InvolutionError> {
    check_map(cat, &spec.map)?;
    let count = cat.composition_count();
    if let Some(&k) = spec.contravariant.iter().chain(&spec.exempt).find(|&&k| k >= count) {
        return Err(InvolutionError::CompositionOutOfRange { k, count });
    }
    let mut report = ValidationReport::new();
    for x in cat.cells() {
        if spec.apply(spec.apply(x)) != x {
            report.push(Law::Involutive, Scope::Global, vec![x]);
        }
    }
    for k in (0..count).filter(|k| !spec.exempt.contains(k)) {
        let t = cat.table(k);
        let scope = Scope::Composition { k };
        let contra = spec.is_contravariant(k);
        for (x, y, z) in t.defined() {
            let (fx, fy) = (spec.apply(x), spec.apply(y));
            let image = if contra { t.compose(fy, fx) } else { t.compose(fx, fy) };
            if image != Some(spec.apply(z)) {
                let law = if contra { Law::Contravariance } else { Law::Covariance };
                report.push(law, scope, vec![x, y]);
            }
        }
        for x in cat.cells().filter(|&x| t.is_identity(x)) {
            if !t.is_identity(spec.apply(x)) {
                report.push(Law::IdentityPreservation, scope, vec![x]);
            }
            if spec.hermitian && contra && spec.apply(x) != x {
                report.push(Law::Hermitian, scope, vec![x]);
            }
        }
    }
    Ok(report)
}

/// Validates every member of a family and their pairwise commutation.
pub fn validate_family<C: MultiCategory + ?Sized>(
    cat: &C,
    family: &[InvolutionSpec],
) -> Result<ValidationReport, InvolutionError> {
    let mut report = ValidationReport::new();
    for (i, spec) in family.iter().enumerate() {
        let sub = validate_involution(cat, spec)?;
        for v in sub.violations {
            report.push_note(v.law, v.scope, v.witness, Some(format!("involution {i}")));
        }
    }
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            for x in cat.cells() {
                let (fa, fb) = (&family[a], &family[b]);
                if fa.apply(fb.apply(x)) != fb.apply(fa.apply(x)) {
                    report.push_note(
                        Law::FamilyCommutation,
                        Scope::Involution { index: a },
                        vec![x],
                        Some(format!("with involution {b}")),
                    );
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// The group of involutions generated by a commuting family, indexed by
/// variance set; multiplication is symmetric difference of the sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionGroup {
    pub elements: Vec<InvolutionSpec>,
    /// `table[a][b]` is the index of `elements[a] ∘ elements[b]`.
    pub table: Vec<Vec<usize>>,
}

impl InvolutionGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn find(&self, contravariant: &BTreeSet<usize>) -> Option<usize> {
        self.elements.iter().position(|e| &e.contravariant == contravariant)
    }
}

fn compose_specs(a: &InvolutionSpec, b: &InvolutionSpec) -> InvolutionSpec {
    InvolutionSpec {
        map: b.map.iter().map(|&x| a.apply(x)).collect(),
        contravariant: a
            .contravariant
            .symmetric_difference(&b.contravariant)
            .copied()
            .collect(),
        exempt: a.exempt.union(&b.exempt).copied().collect(),
        hermitian: false,
    }
}

/// Closes a pairwise commuting family under composition. Fails when two
/// members do not commute, or when two different maps end up with the same
/// variance set.
pub fn generated_involution_group<C: MultiCategory + ?Sized>(
    cat: &C,
    family: &[InvolutionSpec],
) -> Result<InvolutionGroup, InvolutionError> {
    for spec in family {
        check_map(cat, &spec.map)?;
    }
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            if let Some(x) = cat
                .cells()
                .find(|&x| family[a].apply(family[b].apply(x)) != family[b].apply(family[a].apply(x)))
            {
                return Err(InvolutionError::NonCommutingFamily { a, b, cell: x.0 });
            }
        }
    }
    let mut elements = vec![InvolutionSpec::identity(cat.cell_count())];
    let mut frontier = 0;
    while frontier < elements.len() {
        for g in family {
            let next = compose_specs(&elements[frontier], g);
            match elements.iter().find(|e| e.contravariant == next.contravariant) {
                Some(e) if e.map != next.map => {
                    return Err(InvolutionError::ConflictingFamily {
                        variance: format!("{:?}", next.contravariant),
                    })
                }
                Some(_) => {}
                None => elements.push(next),
            }
        }
        frontier += 1;
    }
    let mut table = vec![vec![0; elements.len()]; elements.len()];
    for a in 0..elements.len() {
        for b in 0..elements.len() {
            let prod = compose_specs(&elements[a], &elements[b]);
            let idx = elements
                .iter()
                .position(|e| e.contravariant == prod.contravariant && e.map == prod.map)
                .ok_or_else(|| InvolutionError::ConflictingFamily {
                    variance: format!("{:?}", prod.contravariant),
                })?;
            table[a][b] = idx;
        }
    }
    // keep the generators' hermitian flags on their own entries
    for g in family {
        if let Some(e) = elements
            .iter_mut()
            .find(|e| e.contravariant == g.contravariant && e.map == g.map)
        {
            e.hermitian = g.hermitian;
        }
    }
    Ok(InvolutionGroup { elements, table })
}

/// Checks that `map` is a functor `src → dst`, contravariant for the
/// compositions in `contravariant` and covariant for the others.
pub fn validate_functor<C, D>(
    src: &C,
    dst: &D,
    map: &[CellId],
    contravariant: &BTreeSet<usize>,
) -> Result<ValidationReport, InvolutionError>
where
    C: MultiCategory + ?Sized,
    D: MultiCategory + ?Sized,
{
    if map.len() != src.cell_count() || map.iter().any(|c| c.0 >= dst.cell_count()) {
        return Err(InvolutionError::MapLength { got: map.len(), cells: src.cell_count() });
    }
    if src.composition_count() != dst.composition_count() {
        return Err(InvolutionError::CompositionOutOfRange {
            k: src.composition_count(),
            count: dst.composition_count(),
        });
    }
    let mut report = ValidationReport::new();
    for k in 0..src.composition_count() {
        let (ts, td) = (src.table(k), dst.table(k));
        let scope = Scope::Composition { k };
        let contra = contravariant.contains(&k);
        for (x, y, z) in ts.defined() {
            let (fx, fy) = (map[x.0], map[y.0]);
            let image = if contra { td.compose(fy, fx) } else { td.compose(fx, fy) };
            if image != Some(map[z.0]) {
                let law = if contra { Law::Contravariance } else { Law::Covariance };
                report.push(law, scope, vec![x, y]);
            }
        }
        for x in src.cells().filter(|&x| ts.is_identity(x)) {
            if !td.is_identity(map[x.0]) {
                report.push(Law::IdentityPreservation, scope, vec![x]);
            }
        }
    }
    Ok(report)
}

/// Checks a 1-transfor `Ξ: Φ ⇒ Ψ` between covariant functors. `xi[A]` must
/// be given for every 0-identity `A` of `src` and be a 1-cell `Φ(A) → Ψ(A)`;
/// naturality is `Ψ(x) ∘_0 Ξ(s_0 x) = Ξ(t_0 x) ∘_0 Φ(x)` for every cell.
pub fn validate_transfor1(
    src: &FiniteGlobularCategory,
    dst: &FiniteGlobularCategory,
    phi: &[CellId],
    psi: &[CellId],
    xi: &[Option<CellId>],
) -> Result<ValidationReport, InvolutionError> {
    let n = src.len();
    for m in [phi, psi] {
        if m.len() != n || m.iter().any(|c| c.0 >= dst.len()) {
            return Err(InvolutionError::MapLength { got: m.len(), cells: n });
        }
    }
    if xi.len() != n || xi.iter().flatten().any(|c| c.0 >= dst.len()) {
        return Err(InvolutionError::MapLength { got: xi.len(), cells: n });
    }
    let mut report = ValidationReport::new();
    let scope = Scope::Depth { p: 0 };
    let is_one_cell = |c: CellId| dst.depth() < 2 || dst.is_identity(1, c);
    for a in src.cells().filter(|&a| src.is_identity(0, a)) {
        match xi[a.0] {
            Some(e)
                if is_one_cell(e)
                    && dst.source(0, e) == phi[a.0]
                    && dst.target(0, e) == psi[a.0] => {}
            _ => report.push(Law::TransforShape, scope, vec![a]),
        }
    }
    if !report.is_ok() {
        return Ok(report);
    }
    for x in src.cells() {
        let (s, t) = (src.source(0, x), src.target(0, x));
        let (Some(xs), Some(xt)) = (xi[s.0], xi[t.0]) else {
            report.push(Law::TransforShape, scope, vec![x]);
            continue;
        };
        let lhs = dst.compose(0, psi[x.0], xs);
        let rhs = dst.compose(0, xt, phi[x.0]);
        if lhs.is_none() || lhs != rhs {
            report.push(Law::Naturality, scope, vec![x]);
        }
    }
    Ok(report)
}

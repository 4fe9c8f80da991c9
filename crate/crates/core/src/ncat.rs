//! Finite strict n-categories given by explicit composition tables.
//!
//! A category is a flat set of cells `0..n` with, for every composition
//! index, an identity flag, a source map, a target map and a partial
//! composition table. `compose(x, y)` is defined iff `source(x) == target(y)`
//! and then has source `source(y)` and target `target(x)`.

use serde::Serialize;
use std::fmt;

use crate::error::CategoryError;
use crate::report::{Law, Scope, ValidationReport};

/// Default upper bound on the number of cells a category may have.
pub const DEFAULT_CELL_BUDGET: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CellId(pub usize);

impl CellId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of the directions (levels) `1..=n`, stored as a bitmask with bit
/// `k` standing for direction `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct LevelSet(pub u32);

impl LevelSet {
    pub const EMPTY: LevelSet = LevelSet(0);

    pub fn all(n: usize) -> Self {
        assert!(n <= 31, "at most 31 levels are supported");
        LevelSet(((1u64 << n) - 1) as u32)
    }

    /// Builds a set from 1-based level numbers.
    pub fn from_levels(levels: &[usize]) -> Self {
        let mut bits = 0u32;
        for &l in levels {
            assert!((1..=31).contains(&l), "level {l} out of range");
            bits |= 1 << (l - 1);
        }
        LevelSet(bits)
    }

    /// Contains the 0-based direction `k`.
    #[inline]
    pub fn contains(self, k: usize) -> bool {
        k < 32 && self.0 & (1 << k) != 0
    }

    #[inline]
    pub fn is_subset(self, other: LevelSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn complement(self, n: usize) -> LevelSet {
        LevelSet(!self.0 & LevelSet::all(n).0)
    }

    #[inline]
    pub fn intersection(self, other: LevelSet) -> LevelSet {
        LevelSet(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: LevelSet) -> LevelSet {
        LevelSet(self.0 | other.0)
    }

    #[inline]
    pub fn symmetric_difference(self, other: LevelSet) -> LevelSet {
        LevelSet(self.0 ^ other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 0-based directions in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&k| self.contains(k))
    }

    /// Every subset of `{1..=n}` in ascending mask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = LevelSet> {
        (0..(1u32 << n)).map(LevelSet)
    }
}

impl fmt::Display for LevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, k) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", k + 1)?;
        }
        write!(f, "}}")
    }
}

/// Identity flags, source/target maps and partial composition for one
/// composition of a category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionTable {
    identity: Vec<bool>,
    source: Vec<CellId>,
    target: Vec<CellId>,
    comp: Vec<Option<CellId>>,
}

impl CompositionTable {
    /// A table over `n` cells with nothing defined and every cell its own
    /// source and target.
    pub fn empty(n: usize) -> Self {
        CompositionTable {
            identity: vec![false; n],
            source: (0..n).map(CellId).collect(),
            target: (0..n).map(CellId).collect(),
            comp: vec![None; n * n],
        }
    }

    /// Assembles a table from raw parts. Only shapes and index ranges are
    /// checked; use the validators for the category laws.
    pub fn from_parts(
        identity: Vec<bool>,
        source: Vec<CellId>,
        target: Vec<CellId>,
        comp: Vec<Option<CellId>>,
    ) -> Result<Self, CategoryError> {
        let n = identity.len();
        if source.len() != n || target.len() != n || comp.len() != n * n {
            return Err(CategoryError::Shape(format!(
                "table over {n} cells needs {n} sources, {n} targets and {} composition entries",
                n * n
            )));
        }
        let check = |c: CellId| {
            if c.0 < n {
                Ok(())
            } else {
                Err(CategoryError::CellOutOfRange { cell: c.0, cells: n })
            }
        };
        for &c in source.iter().chain(target.iter()) {
            check(c)?;
        }
        for c in comp.iter().flatten() {
            check(*c)?;
        }
        Ok(CompositionTable {
            identity,
            source,
            target,
            comp,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.identity.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.identity.is_empty()
    }

    #[inline]
    pub fn compose(&self, x: CellId, y: CellId) -> Option<CellId> {
        self.comp[x.0 * self.len() + y.0]
    }

    #[inline]
    pub fn is_identity(&self, x: CellId) -> bool {
        self.identity[x.0]
    }

    #[inline]
    pub fn source(&self, x: CellId) -> CellId {
        self.source[x.0]
    }

    #[inline]
    pub fn target(&self, x: CellId) -> CellId {
        self.target[x.0]
    }

    pub fn set_composition(&mut self, x: CellId, y: CellId, z: Option<CellId>) {
        let n = self.len();
        self.comp[x.0 * n + y.0] = z;
    }

    pub fn set_identity(&mut self, x: CellId, flag: bool) {
        self.identity[x.0] = flag;
    }

    pub fn set_source(&mut self, x: CellId, s: CellId) {
        self.source[x.0] = s;
    }

    pub fn set_target(&mut self, x: CellId, t: CellId) {
        self.target[x.0] = t;
    }

    pub fn identities(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.len()).map(CellId).filter(|&x| self.is_identity(x))
    }

    /// All defined compositions `(x, y, x∘y)` in ascending `(x, y)` order.
    pub fn defined(&self) -> Vec<(CellId, CellId, CellId)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if let Some(z) = self.comp[x * n + y] {
                    out.push((CellId(x), CellId(y), z));
                }
            }
        }
        out
    }

    /// Fills in sources and targets from the composition table: the source
    /// of `x` is the least identity `e` with `x∘e = x`, the target the least
    /// identity `e` with `e∘x = x`. Cells without one keep their old value.
    pub fn derive_source_target(&mut self) {
        let n = self.len();
        let ids: Vec<CellId> = self.identities().collect();
        for x in (0..n).map(CellId) {
            if let Some(&e) = ids.iter().find(|&&e| self.compose(x, e) == Some(x)) {
                self.source[x.0] = e;
            }
            if let Some(&e) = ids.iter().find(|&&e| self.compose(e, x) == Some(x)) {
                self.target[x.0] = e;
            }
        }
    }

    /// Checks the partial-monoid laws of a 1-category and appends violations.
    pub fn validate_into(&self, scope: Scope, report: &mut ValidationReport) {
        let n = self.len();
        let cells = || (0..n).map(CellId);
        for x in cells() {
            let (s, t) = (self.source(x), self.target(x));
            if !self.is_identity(s) || !self.is_identity(t) {
                report.push(Law::SourceTarget, scope, vec![x]);
            }
            if self.is_identity(x) && (s != x || t != x) {
                report.push(Law::SourceTarget, scope, vec![x]);
            }
        }
        // composability criterion: x∘y defined iff s(x) = t(y)
        for x in cells() {
            for y in cells() {
                let defined = self.compose(x, y);
                let expected = self.source(x) == self.target(y);
                if defined.is_some() != expected {
                    report.push(Law::SourceTarget, scope, vec![x, y]);
                } else if let Some(z) = defined {
                    if self.source(z) != self.source(y) || self.target(z) != self.target(x) {
                        report.push(Law::SourceTarget, scope, vec![x, y, z]);
                    }
                }
            }
        }
        for e in cells().filter(|&e| self.is_identity(e)) {
            for x in cells() {
                if let Some(z) = self.compose(e, x) {
                    if z != x {
                        report.push(Law::LeftIdentity, scope, vec![e, x]);
                    }
                }
                if let Some(z) = self.compose(x, e) {
                    if z != x {
                        report.push(Law::RightIdentity, scope, vec![x, e]);
                    }
                }
            }
        }
        self.associativity_into(scope, report);
    }

    fn associativity_into(&self, scope: Scope, report: &mut ValidationReport) {
        let n = self.len();
        // (x∘y)∘z and x∘(y∘z) must be defined together, and exactly when
        // both x∘y and y∘z are, with equal values
        let partners: Vec<Vec<CellId>> = (0..n)
            .map(|y| {
                (0..n)
                    .map(CellId)
                    .filter(|&z| self.compose(CellId(y), z).is_some())
                    .collect()
            })
            .collect();
        for x in (0..n).map(CellId) {
            for y in (0..n).map(CellId) {
                let xy = self.compose(x, y);
                let mut zs: Vec<CellId> = partners[y.0].clone();
                if let Some(a) = xy {
                    zs.extend_from_slice(&partners[a.0]);
                    zs.sort_unstable();
                    zs.dedup();
                }
                for z in zs {
                    let yz = self.compose(y, z);
                    let left = xy.and_then(|a| self.compose(a, z));
                    let right = yz.and_then(|b| self.compose(x, b));
                    let both = xy.is_some() && yz.is_some();
                    if left.is_some() != both || right.is_some() != both || left != right {
                        report.push(Law::Associativity, scope, vec![x, y, z]);
                    }
                }
            }
        }
    }
}

/// Anything made of several composition tables over one cell set.
pub trait MultiCategory {
    fn cell_count(&self) -> usize;
    fn composition_count(&self) -> usize;
    fn table(&self, k: usize) -> &CompositionTable;
    fn cell_name(&self, x: CellId) -> &str;
    /// Human-readable label of composition `k`.
    fn composition_label(&self, k: usize) -> String;

    fn cells(&self) -> std::iter::Map<std::ops::Range<usize>, fn(usize) -> CellId> {
        (0..self.cell_count()).map(CellId as fn(usize) -> CellId)
    }

    fn find_cell(&self, name: &str) -> Option<CellId> {
        self.cells().find(|&c| self.cell_name(c) == name)
    }
}

fn check_budget(cells: usize, budget: usize) -> Result<(), CategoryError> {
    if cells > budget {
        Err(CategoryError::TooLarge { cells, budget })
    } else {
        Ok(())
    }
}

/// A finite globular strict n-category: compositions `∘_0 .. ∘_{n-1}` over a
/// common cell set, with `∘_p`-identities nested upwards in `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGlobularCategory {
    names: Vec<String>,
    tables: Vec<CompositionTable>,
}

impl FiniteGlobularCategory {
    pub fn new(names: Vec<String>, tables: Vec<CompositionTable>) -> Result<Self, CategoryError> {
        Self::with_budget(names, tables, DEFAULT_CELL_BUDGET)
    }

    pub fn with_budget(
        names: Vec<String>,
        tables: Vec<CompositionTable>,
        budget: usize,
    ) -> Result<Self, CategoryError> {
        if tables.is_empty() {
            return Err(CategoryError::ZeroDepth);
        }
        let n = names.len();
        check_budget(n, budget)?;
        if tables.iter().any(|t| t.len() != n) {
            return Err(CategoryError::Shape(format!(
                "every table must cover the {n} named cells"
            )));
        }
        Ok(FiniteGlobularCategory { names, tables })
    }

    pub fn depth(&self) -> usize {
        self.tables.len()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn compose(&self, p: usize, x: CellId, y: CellId) -> Option<CellId> {
        self.tables[p].compose(x, y)
    }

    pub fn try_compose(&self, p: usize, x: CellId, y: CellId) -> Result<CellId, CategoryError> {
        if p >= self.depth() {
            return Err(CategoryError::DepthOutOfRange { p, depth: self.depth() });
        }
        self.compose(p, x, y)
            .ok_or(CategoryError::NotComposable { p, x: x.0, y: y.0 })
    }

    pub fn is_identity(&self, p: usize, x: CellId) -> bool {
        self.tables[p].is_identity(x)
    }

    pub fn source(&self, p: usize, x: CellId) -> CellId {
        self.tables[p].source(x)
    }

    pub fn target(&self, p: usize, x: CellId) -> CellId {
        self.tables[p].target(x)
    }

    pub fn tables(&self) -> &[CompositionTable] {
        &self.tables
    }

    /// Returns a copy with one composition entry replaced.
    pub fn with_entry(mut self, p: usize, x: CellId, y: CellId, z: Option<CellId>) -> Self {
        self.tables[p].set_composition(x, y, z);
        self
    }

    pub fn table_mut(&mut self, p: usize) -> &mut CompositionTable {
        &mut self.tables[p]
    }
}

impl MultiCategory for FiniteGlobularCategory {
    fn cell_count(&self) -> usize {
        self.names.len()
    }
    fn composition_count(&self) -> usize {
        self.tables.len()
    }
    fn table(&self, k: usize) -> &CompositionTable {
        &self.tables[k]
    }
    fn cell_name(&self, x: CellId) -> &str {
        &self.names[x.0]
    }
    fn composition_label(&self, k: usize) -> String {
        format!("{k}")
    }
}

/// Checks that every `(cells, ∘_p)` is a 1-category.
pub fn validate_partial_category(cat: &FiniteGlobularCategory) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (p, t) in cat.tables.iter().enumerate() {
        t.validate_into(Scope::Depth { p }, &mut report);
    }
    report
}

/// Checks identity nesting, closure of identities under lower compositions,
/// and globularity of sources and targets.
pub fn validate_globular(cat: &FiniteGlobularCategory) -> ValidationReport {
    let mut report = ValidationReport::new();
    let d = cat.depth();
    for p in 0..d {
        for q in 0..p {
            let scope = Scope::Depths { q, p };
            for x in cat.cells() {
                if cat.is_identity(q, x) && !cat.is_identity(p, x) {
                    report.push(Law::IdentityNesting, scope, vec![x]);
                }
            }
            for x in cat.cells().filter(|&x| cat.is_identity(p, x)) {
                for y in cat.cells().filter(|&y| cat.is_identity(p, y)) {
                    if let Some(z) = cat.compose(q, x, y) {
                        if !cat.is_identity(p, z) {
                            report.push(Law::IdentityClosure, scope, vec![x, y, z]);
                        }
                    }
                }
            }
            for x in cat.cells() {
                let (sp, tp) = (cat.source(p, x), cat.target(p, x));
                if cat.source(q, sp) != cat.source(q, tp) || cat.target(q, sp) != cat.target(q, tp) {
                    report.push(Law::Globularity, scope, vec![x]);
                }
            }
        }
    }
    report
}

/// A failure of the full exchange law: `(x∘_p y)∘_q(w∘_p z)` exists but
/// `(x∘_q w)∘_p(y∘_q z)` is undefined or different.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExchangeWitness {
    pub q: usize,
    pub p: usize,
    pub x: CellId,
    pub y: CellId,
    pub w: CellId,
    pub z: CellId,
    pub lhs: CellId,
    pub rhs: Option<CellId>,
}

impl ExchangeWitness {
    pub fn cells(&self) -> Vec<CellId> {
        vec![self.x, self.y, self.w, self.z]
    }
}

/// Searches for a counterexample to the full exchange law, scanning
/// `(q, p)` ascending and then `(x, y, w, z)` lexicographically.
pub fn check_exchange(cat: &FiniteGlobularCategory) -> Option<ExchangeWitness> {
    for p in 0..cat.depth() {
        let pairs = cat.tables[p].defined();
        for q in 0..p {
            for &(x, y, a) in &pairs {
                for &(w, z, b) in &pairs {
                    let Some(lhs) = cat.compose(q, a, b) else { continue };
                    let rhs = match (cat.compose(q, x, w), cat.compose(q, y, z)) {
                        (Some(xw), Some(yz)) => cat.compose(p, xw, yz),
                        _ => None,
                    };
                    if rhs != Some(lhs) {
                        return Some(ExchangeWitness { q, p, x, y, w, z, lhs, rhs });
                    }
                }
            }
        }
    }
    None
}

/// Checks that for every `p`-identity `ι` and `q < p` the whiskerings
/// `ι∘_q −` and `−∘_q ι` are homomorphisms of `(cells, ∘_p)`.
pub fn check_nc_exchange(cat: &FiniteGlobularCategory) -> ValidationReport {
    let mut report = ValidationReport::new();
    for p in 0..cat.depth() {
        for q in 0..p {
            whiskering_into(
                cat,
                &cat.tables[q],
                &cat.tables[p],
                Scope::Depths { q, p },
                &mut report,
            );
        }
    }
    report
}

/// Shared by the globular and full-depth checks: `outer` is the composition
/// whose identities whisker, `inner` is the one used to whisker (`∘_q`).
fn whiskering_into<C: MultiCategory + ?Sized>(
    cat: &C,
    inner: &CompositionTable,
    outer: &CompositionTable,
    scope: Scope,
    report: &mut ValidationReport,
) {
    let pairs = outer.defined();
    for iota in cat.cells().filter(|&i| outer.is_identity(i)) {
        for left in [true, false] {
            let f = |x: CellId| {
                if left {
                    inner.compose(iota, x)
                } else {
                    inner.compose(x, iota)
                }
            };
            for x in cat.cells() {
                if outer.is_identity(x) {
                    if let Some(fx) = f(x) {
                        if !outer.is_identity(fx) {
                            report.push(Law::NcExchange, scope, vec![iota, x]);
                        }
                    }
                }
            }
            for &(x, y, xy) in &pairs {
                let (Some(fx), Some(fy)) = (f(x), f(y)) else { continue };
                let image = outer.compose(fx, fy);
                if image.is_none() || image != f(xy) {
                    report.push(Law::NcExchange, scope, vec![iota, x, y]);
                }
            }
        }
    }
}

/// The pair groupoid on `{1..N}`: cells `(i,j)` with source `(j,j)`,
/// target `(i,i)` and `(i,j)∘(j,k) = (i,k)`.
pub fn build_pair_groupoid(n: usize) -> Result<FiniteGlobularCategory, CategoryError> {
    if n == 0 {
        return Err(CategoryError::Shape("pair groupoid needs N >= 1".into()));
    }
    check_budget(n * n, DEFAULT_CELL_BUDGET)?;
    let cells = n * n;
    let id = |i: usize, j: usize| CellId(i * n + j);
    let mut t = CompositionTable::empty(cells);
    let mut names = Vec::with_capacity(cells);
    for i in 0..n {
        for j in 0..n {
            names.push(format!("({},{})", i + 1, j + 1));
            let x = id(i, j);
            t.set_identity(x, i == j);
            t.set_source(x, id(j, j));
            t.set_target(x, id(i, i));
            for k in 0..n {
                t.set_composition(x, id(j, k), Some(id(i, k)));
            }
        }
    }
    FiniteGlobularCategory::new(names, vec![t])
}

/// The terminal n-category: one cell, identity at every depth.
pub fn build_terminal(depth: usize) -> Result<FiniteGlobularCategory, CategoryError> {
    let mut t = CompositionTable::empty(1);
    t.set_identity(CellId(0), true);
    t.set_composition(CellId(0), CellId(0), Some(CellId(0)));
    FiniteGlobularCategory::new(vec!["*".into()], vec![t; depth])
}

/// A cubical category with one composition per subset `γ ⊆ {1..n}` of
/// directions. `comp_γ(x, y)` keeps the components in `γ` (which must agree)
/// and composes the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullDepthCategory {
    directions: usize,
    names: Vec<String>,
    tables: Vec<CompositionTable>,
    factor_sizes: Option<Vec<usize>>,
}

impl FullDepthCategory {
    pub fn new(
        directions: usize,
        names: Vec<String>,
        tables: Vec<CompositionTable>,
    ) -> Result<Self, CategoryError> {
        Self::with_budget(directions, names, tables, DEFAULT_CELL_BUDGET)
    }

    pub fn with_budget(
        directions: usize,
        names: Vec<String>,
        tables: Vec<CompositionTable>,
        budget: usize,
    ) -> Result<Self, CategoryError> {
        if directions == 0 {
            return Err(CategoryError::ZeroDepth);
        }
        if directions > 16 {
            return Err(CategoryError::Shape("at most 16 directions are supported".into()));
        }
        if tables.len() != 1 << directions {
            return Err(CategoryError::Shape(format!(
                "{directions} directions need {} composition tables, got {}",
                1usize << directions,
                tables.len()
            )));
        }
        let n = names.len();
        check_budget(n, budget)?;
        if tables.iter().any(|t| t.len() != n) {
            return Err(CategoryError::Shape(format!(
                "every table must cover the {n} named cells"
            )));
        }
        Ok(FullDepthCategory {
            directions,
            names,
            tables,
            factor_sizes: None,
        })
    }

    pub fn directions(&self) -> usize {
        self.directions
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Cell counts of the factors when built by [`build_product`]; cell
    /// indices are then mixed-radix with the first factor most significant.
    pub fn factor_sizes(&self) -> Option<&[usize]> {
        self.factor_sizes.as_deref()
    }

    pub fn comp(&self, gamma: LevelSet) -> &CompositionTable {
        &self.tables[gamma.0 as usize]
    }

    pub fn compose(&self, gamma: LevelSet, x: CellId, y: CellId) -> Option<CellId> {
        self.comp(gamma).compose(x, y)
    }

    pub fn is_identity(&self, gamma: LevelSet, x: CellId) -> bool {
        self.comp(gamma).is_identity(x)
    }

    pub fn with_entry(mut self, gamma: LevelSet, x: CellId, y: CellId, z: Option<CellId>) -> Self {
        self.tables[gamma.0 as usize].set_composition(x, y, z);
        self
    }

    /// Splits a cell index into factor cell indices.
    pub fn components(&self, x: CellId) -> Option<Vec<usize>> {
        let sizes = self.factor_sizes.as_ref()?;
        let mut rest = x.0;
        let mut out = vec![0; sizes.len()];
        for k in (0..sizes.len()).rev() {
            out[k] = rest % sizes[k];
            rest /= sizes[k];
        }
        Some(out)
    }

    pub fn from_components(&self, parts: &[usize]) -> Option<CellId> {
        let sizes = self.factor_sizes.as_ref()?;
        Some(CellId(mixed_radix(parts, sizes)))
    }
}

fn mixed_radix(parts: &[usize], sizes: &[usize]) -> usize {
    parts.iter().zip(sizes).fold(0, |acc, (&p, &s)| acc * s + p)
}

impl MultiCategory for FullDepthCategory {
    fn cell_count(&self) -> usize {
        self.names.len()
    }
    fn composition_count(&self) -> usize {
        self.tables.len()
    }
    fn table(&self, k: usize) -> &CompositionTable {
        &self.tables[k]
    }
    fn cell_name(&self, x: CellId) -> &str {
        &self.names[x.0]
    }
    fn composition_label(&self, k: usize) -> String {
        LevelSet(k as u32).to_string()
    }
}

/// Full-depth product of 1-categories. Cell indices are mixed-radix in the
/// factor indices, first factor most significant.
pub fn build_product(factors: &[FiniteGlobularCategory]) -> Result<FullDepthCategory, CategoryError> {
    build_product_with_budget(factors, DEFAULT_CELL_BUDGET)
}

pub fn build_product_with_budget(
    factors: &[FiniteGlobularCategory],
    budget: usize,
) -> Result<FullDepthCategory, CategoryError> {
    let n = factors.len();
    if n == 0 {
        return Err(CategoryError::ZeroDepth);
    }
    for (i, f) in factors.iter().enumerate() {
        if f.depth() != 1 {
            return Err(CategoryError::NotOneCategory { factor: i, depth: f.depth() });
        }
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .unwrap_or(usize::MAX);
    check_budget(total, budget)?;

    let split = |mut x: usize| {
        let mut out = vec![0; n];
        for k in (0..n).rev() {
            out[k] = x % sizes[k];
            x /= sizes[k];
        }
        out
    };
    let parts: Vec<Vec<usize>> = (0..total).map(split).collect();
    let names: Vec<String> = parts
        .iter()
        .map(|p| {
            let inner: Vec<&str> = p
                .iter()
                .enumerate()
                .map(|(k, &c)| factors[k].names()[c].as_str())
                .collect();
            format!("[{}]", inner.join(";"))
        })
        .collect();

    let mut tables = Vec::with_capacity(1 << n);
    for gamma in LevelSet::all_subsets(n) {
        let mut t = CompositionTable::empty(total);
        for x in 0..total {
            let px = &parts[x];
            let mut id = true;
            let mut s = vec![0; n];
            let mut tg = vec![0; n];
            for k in 0..n {
                let f = factors[k].table(0);
                if gamma.contains(k) {
                    s[k] = px[k];
                    tg[k] = px[k];
                } else {
                    id &= f.is_identity(CellId(px[k]));
                    s[k] = f.source(CellId(px[k])).0;
                    tg[k] = f.target(CellId(px[k])).0;
                }
            }
            t.set_identity(CellId(x), id);
            t.set_source(CellId(x), CellId(mixed_radix(&s, &sizes)));
            t.set_target(CellId(x), CellId(mixed_radix(&tg, &sizes)));
        }
        for x in 0..total {
            'pair: for y in 0..total {
                let (px, py) = (&parts[x], &parts[y]);
                let mut z = vec![0; n];
                for k in 0..n {
                    if gamma.contains(k) {
                        if px[k] != py[k] {
                            continue 'pair;
                        }
                        z[k] = px[k];
                    } else {
                        match factors[k].compose(0, CellId(px[k]), CellId(py[k])) {
                            Some(c) => z[k] = c.0,
                            None => continue 'pair,
                        }
                    }
                }
                t.set_composition(CellId(x), CellId(y), Some(CellId(mixed_radix(&z, &sizes))));
            }
        }
        tables.push(t);
    }
    let mut fdc = FullDepthCategory::with_budget(n, names, tables, budget)?;
    fdc.factor_sizes = Some(sizes);
    Ok(fdc)
}

/// Checks the full-depth axioms. Directions in `γ` are held fixed by
/// `comp_γ`, so larger `γ` plays the role of higher depth: for `β ⊆ α`,
/// `β`-identities are `α`-identities, `α`-identities are closed under
/// `comp_β`, and `ι comp_β −`, `− comp_β ι` are functorial on `comp_α` for
/// every `α`-identity `ι`.
pub fn validate_full_depth(cat: &FullDepthCategory) -> ValidationReport {
    let mut report = ValidationReport::new();
    let n = cat.directions();
    for gamma in LevelSet::all_subsets(n) {
        cat.comp(gamma).validate_into(Scope::Subset { gamma }, &mut report);
    }
    for alpha in LevelSet::all_subsets(n) {
        for beta in LevelSet::all_subsets(n) {
            if beta == alpha || !beta.is_subset(alpha) {
                continue;
            }
            let scope = Scope::Subsets { inner: beta, outer: alpha };
            let (tb, ta) = (cat.comp(beta), cat.comp(alpha));
            for x in cat.cells() {
                if tb.is_identity(x) && !ta.is_identity(x) {
                    report.push(Law::IdentityNesting, scope, vec![x]);
                }
            }
            for x in cat.cells().filter(|&x| ta.is_identity(x)) {
                for y in cat.cells().filter(|&y| ta.is_identity(y)) {
                    if let Some(z) = tb.compose(x, y) {
                        if !ta.is_identity(z) {
                            report.push(Law::IdentityClosure, scope, vec![x, y, z]);
                        }
                    }
                }
            }
            whiskering_into(cat, tb, ta, scope, &mut report);
        }
    }
    report
}

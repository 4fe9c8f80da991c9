//! Small named categories used as fixtures: delooped groups, 2-groups and
//! monoid deloopings.

use crate::conjugation::{Conjugate, ConjugationData};
use crate::error::CategoryError;
use crate::involutive::InvolutionSpec;
use crate::ncat::{CellId, CompositionTable, FiniteGlobularCategory};

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub names: Vec<String>,
    /// `mul[a][b]` is the index of `a·b`.
    pub mul: Vec<Vec<usize>>,
}

impl Group {
    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        (0..self.order())
            .find(|&e| (0..self.order()).all(|a| self.mul[e][a] == a && self.mul[a][e] == a))
            .expect("group has an identity")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let e = self.identity();
        (0..self.order())
            .find(|&b| self.mul[a][b] == e)
            .expect("group element has an inverse")
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn cyclic(m: usize) -> Group {
        assert!(m >= 1);
        Group {
            names: (0..m).map(|i| format!("{i}")).collect(),
            mul: (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect(),
        }
    }

    /// The symmetric group on three letters; element 0 is the identity.
    pub fn symmetric3() -> Group {
        // permutations of (0,1,2) as images, in lexicographic order
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    // (a·b)(i) = a(b(i))
                    .map(|b| index([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        Group {
            names: perms
                .iter()
                .map(|p| format!("{}{}{}", p[0] + 1, p[1] + 1, p[2] + 1))
                .collect(),
            mul,
        }
    }
}

/// Builds a globular category from closures, deriving sources and targets
/// from the identities.
pub fn from_closures(
    names: Vec<String>,
    depth: usize,
    identity: impl Fn(usize, usize) -> bool,
    compose: impl Fn(usize, usize, usize) -> Option<usize>,
) -> Result<FiniteGlobularCategory, CategoryError> {
    let n = names.len();
    let mut tables = Vec::with_capacity(depth);
    for p in 0..depth {
        let mut t = CompositionTable::empty(n);
        for x in 0..n {
            t.set_identity(CellId(x), identity(p, x));
            for y in 0..n {
                t.set_composition(CellId(x), CellId(y), compose(p, x, y).map(CellId));
            }
        }
        t.derive_source_target();
        tables.push(t);
    }
    FiniteGlobularCategory::new(names, tables)
}

/// A group as a one-object 1-category.
pub fn group_category(g: &Group) -> Result<FiniteGlobularCategory, CategoryError> {
    let e = g.identity();
    from_closures(g.names.clone(), 1, |_, x| x == e, |_, x, y| Some(g.mul[x][y]))
}

/// The 2-category with one object, the group elements as 1-cells and only
/// identity 2-cells. `∘_0` is the group product.
pub fn delooped_group(g: &Group) -> Result<FiniteGlobularCategory, CategoryError> {
    let e = g.identity();
    from_closures(
        g.names.clone(),
        2,
        |p, x| p == 1 || x == e,
        |p, x, y| match p {
            0 => Some(g.mul[x][y]),
            _ => (x == y).then_some(x),
        },
    )
}

/// The 2-groupoid with one object, the group elements as 1-cells and exactly
/// one 2-cell `s ⇒ t` between any two of them. Cell `(t, s)` has index
/// `t·|G| + s`; `∘_0` multiplies componentwise.
pub fn codiscrete_two_group(g: &Group) -> Result<FiniteGlobularCategory, CategoryError> {
    let n = g.order();
    let e = g.identity();
    let names = (0..n * n)
        .map(|c| format!("{}<={}", g.names[c / n], g.names[c % n]))
        .collect();
    from_closures(
        names,
        2,
        |p, c| {
            let (t, s) = (c / n, c % n);
            if p == 0 {
                t == e && s == e
            } else {
                t == s
            }
        },
        |p, x, y| {
            let (tx, sx) = (x / n, x % n);
            let (ty, sy) = (y / n, y % n);
            if p == 0 {
                Some(g.mul[tx][ty] * n + g.mul[sx][sy])
            } else {
                (sx == ty).then_some(tx * n + sy)
            }
        },
    )
}

/// The two generating involutions of [`codiscrete_two_group`]: `*_0`
/// inverts both 1-cells and is contravariant for `∘_0`, `*_1` swaps source
/// and target and is contravariant for `∘_1`.
pub fn codiscrete_two_group_involutions(g: &Group) -> Vec<InvolutionSpec> {
    let n = g.order();
    let star0 = (0..n * n)
        .map(|c| CellId(g.inverse(c / n) * n + g.inverse(c % n)))
        .collect();
    let star1 = (0..n * n).map(|c| CellId((c % n) * n + c / n)).collect();
    vec![
        InvolutionSpec::new(star0, [0]).with_hermitian(true),
        InvolutionSpec::new(star1, [1]).with_hermitian(true),
    ]
}

/// The 2-group with 1-cells `G` and 2-cells `(g, a)`, `a ∈ Z_m`, each an
/// endomorphism of `g`. Both compositions add the `Z_m` labels; `∘_0`
/// multiplies the 1-cells. Cell `(g, a)` has index `g·m + a`.
pub fn abelian_two_group(g: &Group, m: usize) -> Result<FiniteGlobularCategory, CategoryError> {
    assert!(m >= 1);
    let n = g.order();
    let e = g.identity();
    let names = (0..n * m)
        .map(|c| format!("{}:{}", g.names[c / m], c % m))
        .collect();
    from_closures(
        names,
        2,
        |p, c| {
            let (h, a) = (c / m, c % m);
            a == 0 && (p == 1 || h == e)
        },
        |p, x, y| {
            let (gx, ax) = (x / m, x % m);
            let (gy, ay) = (y / m, y % m);
            let a = (ax + ay) % m;
            if p == 0 {
                Some(g.mul[gx][gy] * m + a)
            } else {
                (gx == gy).then_some(gx * m + a)
            }
        },
    )
}

/// The depth-`n` delooping of `Z_m`: cells `0..m`, every composition is
/// addition, and `0` is the only identity.
pub fn cyclic_delooping(m: usize, depth: usize) -> Result<FiniteGlobularCategory, CategoryError> {
    assert!(m >= 1);
    from_closures(
        (0..m).map(|i| format!("{i}")).collect(),
        depth,
        |_, x| x == 0,
        |_, x, y| Some((x + y) % m),
    )
}

/// Conjugation data on [`delooped_group`]: `ḡ = g⁻¹`, trivial units and the
/// identity as involution over 1-arrows.
pub fn delooped_group_conjugation(g: &Group) -> ConjugationData {
    let e = CellId(g.identity());
    ConjugationData {
        star: (0..g.order()).map(CellId).collect(),
        conjugates: (0..g.order())
            .map(|x| {
                Some(Conjugate {
                    bar: CellId(g.inverse(x)),
                    r: e,
                    rbar: e,
                })
            })
            .collect(),
    }
}

/// Conjugation data on [`codiscrete_two_group`]: `ḡ = g⁻¹`, trivial units,
/// and `(t ⇐ s)* = (s ⇐ t)`.
pub fn codiscrete_two_group_conjugation(g: &Group) -> ConjugationData {
    let n = g.order();
    let e = g.identity();
    let unit = CellId(e * n + e);
    ConjugationData {
        star: (0..n * n).map(|c| CellId((c % n) * n + c / n)).collect(),
        conjugates: (0..n * n)
            .map(|c| {
                let (t, s) = (c / n, c % n);
                (t == s).then(|| {
                    let inv = g.inverse(t);
                    Conjugate {
                        bar: CellId(inv * n + inv),
                        r: unit,
                        rbar: unit,
                    }
                })
            })
            .collect(),
    }
}

/// Conjugation data on [`abelian_two_group`]: `ḡ = g⁻¹`, `(g, a)* = (g, -a)`,
/// and every `R_x = (e, r)`, `R̄_x = (e, rbar)`. The conjugate equations hold
/// iff `r = rbar`.
pub fn abelian_two_group_conjugation(g: &Group, m: usize, r: usize, rbar: usize) -> ConjugationData {
    let n = g.order();
    let e = g.identity();
    ConjugationData {
        star: (0..n * m)
            .map(|c| CellId((c / m) * m + (m - c % m) % m))
            .collect(),
        conjugates: (0..n * m)
            .map(|c| {
                let (h, a) = (c / m, c % m);
                (a == 0).then(|| Conjugate {
                    bar: CellId(g.inverse(h) * m),
                    r: CellId(e * m + r % m),
                    rbar: CellId(e * m + rbar % m),
                })
            })
            .collect(),
    }
}

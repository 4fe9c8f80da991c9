//! Validation reports shared by every checker in the crate.

use serde::Serialize;
use std::fmt;

use crate::ncat::{CellId, LevelSet};

/// Maximum number of witnesses kept per report; the rest are only counted.
pub const WITNESS_CAP: usize = 256;

/// The law a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Associativity,
    LeftIdentity,
    RightIdentity,
    SourceTarget,
    IdentityNesting,
    IdentityClosure,
    Globularity,
    Exchange,
    NcExchange,
    Involutive,
    Covariance,
    Contravariance,
    IdentityPreservation,
    Hermitian,
    FamilyCommutation,
    ConjugateShape,
    ConjugateEquation,
    Unitality,
    Involutivity,
    Tensoriality,
    Traciability,
    FoldingContravariance,
    DaggerCovariance,
    FoldingStar,
    DaggerStar,
    FoldingInverse,
    DaggerInvolutive,
    TensorContravariance,
    ConjugateTensor,
    Naturality,
    TransforShape,
    Distributivity,
    Unit,
    ConjugateLinearity,
    Closure,
    EmbeddedExchangeMissing,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json_key(*self);
        f.write_str(&s)
    }
}

fn serde_json_key(law: Law) -> String {
    // kebab-case rendering of the variant name, identical to the serde form
    let raw = format!("{law:?}");
    let mut out = String::new();
    for (i, ch) in raw.chars().enumerate() {
        if ch.is_ascii_uppercase() {
            if i > 0 {
                out.push('-');
            }
            out.push(ch.to_ascii_lowercase());
        } else {
            out.push(ch);
        }
    }
    out
}

/// Where in the structure a violation was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scope {
    Global,
    Depth { p: usize },
    Depths { q: usize, p: usize },
    Subset { gamma: LevelSet },
    Subsets { inner: LevelSet, outer: LevelSet },
    Composition { k: usize },
    Involution { index: usize },
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Global => write!(f, "global"),
            Scope::Depth { p } => write!(f, "depth {p}"),
            Scope::Depths { q, p } => write!(f, "depths {q}<{p}"),
            Scope::Subset { gamma } => write!(f, "subset {gamma}"),
            Scope::Subsets { inner, outer } => write!(f, "subsets {inner}<={outer}"),
            Scope::Composition { k } => write!(f, "composition {k}"),
            Scope::Involution { index } => write!(f, "involution {index}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: Law,
    pub scope: Scope,
    pub witness: Vec<CellId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A list of law violations with witnesses. Empty means every checked law holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Violations found beyond [`WITNESS_CAP`].
    pub suppressed: usize,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty() && self.suppressed == 0
    }

    pub fn len(&self) -> usize {
        self.violations.len() + self.suppressed
    }

    pub fn is_empty(&self) -> bool {
        self.is_ok()
    }

    pub fn push(&mut self, law: Law, scope: Scope, witness: Vec<CellId>) {
        self.push_note(law, scope, witness, None);
    }

    pub fn push_note(&mut self, law: Law, scope: Scope, witness: Vec<CellId>, note: Option<String>) {
        if self.violations.len() < WITNESS_CAP {
            self.violations.push(Violation {
                law,
                scope,
                witness,
                note,
            });
        } else {
            self.suppressed += 1;
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for v in other.violations {
            self.push_note(v.law, v.scope, v.witness, v.note);
        }
        self.suppressed += other.suppressed;
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn first(&self, law: Law) -> Option<&Violation> {
        self.violations.iter().find(|v| v.law == law)
    }
}

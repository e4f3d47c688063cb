//! Finite fusion rings: labels, vacuum, duality and 3-point ranks.
//!
//! A [`FusionData`] may hold data that violates the ring axioms; [`validate`]
//! reports every violation it finds. [`load_fusion`] only hands back rings
//! that validate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A weight label, identified by a non-empty string id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn new(id: impl Into<String>) -> Self {
        Label(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(s)
    }
}

/// Structural problems that prevent a ring from being represented at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FusionError {
    #[error("fusion JSON parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("fusion ring has no labels")]
    NoLabels,
    #[error("empty label id")]
    EmptyLabel,
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("dual map has no entry for label {0:?}")]
    MissingDual(String),
    #[error("triple ({0}, {1}, {2}) given more than once with different ranks")]
    ConflictingTriple(String, String, String),
    #[error("fusion ring fails validation: {0}")]
    Invalid(ValidationReport),
}

/// One violated ring axiom, with the labels that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DualNotInvolution { label: Label, dual: Label, dual_of_dual: Label },
    VacuumNotSelfDual { dual: Label },
    VacuumRule { a: Label, b: Label, expected: i64, found: i64 },
    NegativeRank { triple: [Label; 3], rank: i64 },
    NotSymmetric { triple: [Label; 3] },
    NotAssociative { labels: [Label; 4], left: i64, right: i64 },
}

impl Violation {
    /// Short name of the violated invariant.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::DualNotInvolution { .. } => "dual-involution",
            Violation::VacuumNotSelfDual { .. } => "vacuum-self-dual",
            Violation::VacuumRule { .. } => "vacuum-rule",
            Violation::NegativeRank { .. } => "nonnegativity",
            Violation::NotSymmetric { .. } => "symmetry",
            Violation::NotAssociative { .. } => "associativity",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DualNotInvolution { label, dual, dual_of_dual } => write!(
                f,
                "dual-involution: dual({label}) = {dual} but dual({dual}) = {dual_of_dual}"
            ),
            Violation::VacuumNotSelfDual { dual } => write!(f, "vacuum-self-dual: dual(vacuum) = {dual}"),
            Violation::VacuumRule { a, b, expected, found } => write!(
                f,
                "vacuum-rule: n3({a}, {b}, vacuum) = {found}, expected {expected}"
            ),
            Violation::NegativeRank { triple: [a, b, c], rank } => {
                write!(f, "nonnegativity: n3({a}, {b}, {c}) = {rank}")
            }
            Violation::NotSymmetric { triple: [a, b, c] } => {
                write!(f, "symmetry: n3({a}, {b}, {c}) depends on argument order")
            }
            Violation::NotAssociative { labels: [a, b, c, d], left, right } => write!(
                f,
                "associativity: ({a}, {b}, {c}, {d}) gives {left} vs {right}"
            ),
        }
    }
}

/// Outcome of [`validate`]; an empty violation list means the ring passes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Fusion-ring data over labels indexed `0..len()`.
///
/// `n3` is keyed on unordered triples, so the dense table is symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionData {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    vacuum: usize,
    dual: Vec<usize>,
    n3: Vec<i64>,
}

impl FusionData {
    /// Builds a ring from label ids. Triples not listed have rank 0. The
    /// result is not validated.
    pub fn new<L: Into<Label>>(
        labels: impl IntoIterator<Item = L>,
        vacuum: impl Into<Label>,
        dual: impl IntoIterator<Item = (L, L)>,
        n3: impl IntoIterator<Item = ([L; 3], i64)>,
    ) -> Result<Self, FusionError> {
        let labels: Vec<Label> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(FusionError::NoLabels);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.0.is_empty() {
                return Err(FusionError::EmptyLabel);
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(FusionError::DuplicateLabel(l.0.clone()));
            }
        }
        let lookup = |l: &Label| index.get(l).copied().ok_or_else(|| FusionError::UnknownLabel(l.0.clone()));

        let vacuum = lookup(&vacuum.into())?;
        let k = labels.len();
        let mut dual_idx = vec![None; k];
        for (a, b) in dual {
            let (a, b) = (lookup(&a.into())?, lookup(&b.into())?);
            dual_idx[a] = Some(b);
        }
        let dual = dual_idx
            .iter()
            .enumerate()
            .map(|(i, d)| d.ok_or_else(|| FusionError::MissingDual(labels[i].0.clone())))
            .collect::<Result<Vec<_>, _>>()?;

        let mut sparse: BTreeMap<[usize; 3], i64> = BTreeMap::new();
        for (triple, rank) in n3 {
            let [a, b, c] = triple.map(Into::into);
            let mut key = [lookup(&a)?, lookup(&b)?, lookup(&c)?];
            key.sort_unstable();
            if let Some(prev) = sparse.insert(key, rank) {
                if prev != rank {
                    return Err(FusionError::ConflictingTriple(a.0, b.0, c.0));
                }
            }
        }
        let mut table = vec![0i64; k * k * k];
        for ([a, b, c], rank) in sparse {
            for [x, y, z] in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                table[(x * k + y) * k + z] = rank;
            }
        }
        Ok(FusionData { labels, index, vacuum, dual, n3: table })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn vacuum(&self) -> usize {
        self.vacuum
    }

    pub fn vacuum_label(&self) -> &Label {
        &self.labels[self.vacuum]
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    /// 3-point rank on label indices.
    #[inline]
    pub fn n3(&self, a: usize, b: usize, c: usize) -> i64 {
        let k = self.labels.len();
        self.n3[(a * k + b) * k + c]
    }

    /// 3-point rank on label ids.
    pub fn n3_labels(&self, a: &Label, b: &Label, c: &Label) -> Result<i64, FusionError> {
        let idx = |l: &Label| self.index_of(l).ok_or_else(|| FusionError::UnknownLabel(l.0.clone()));
        Ok(self.n3(idx(a)?, idx(b)?, idx(c)?))
    }

    /// Multiplicities of `a ⊗ b`, read as `c ↦ n3(a, b, dual(c))`.
    pub fn product(&self, a: usize, b: usize) -> Vec<i64> {
        (0..self.len()).map(|c| self.n3(a, b, self.dual[c])).collect()
    }

    /// The JSON document accepted by [`load_fusion`].
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("fusion document serializes")
    }

    fn to_document(&self) -> FusionDocument {
        let k = self.len();
        let mut n3 = Vec::new();
        for a in 0..k {
            for b in a..k {
                for c in b..k {
                    let rank = self.n3(a, b, c);
                    if rank != 0 {
                        n3.push(TripleEntry {
                            triple: [a, b, c].map(|i| self.labels[i].0.clone()),
                            rank,
                        });
                    }
                }
            }
        }
        FusionDocument {
            labels: self.labels.iter().map(|l| l.0.clone()).collect(),
            vacuum: self.labels[self.vacuum].0.clone(),
            dual: (0..k)
                .map(|i| (self.labels[i].0.clone(), self.labels[self.dual[i]].0.clone()))
                .collect(),
            n3,
        }
    }
}

/// The g₂ level-1 ring: labels `0` and `mu`, both self-dual, with
/// `μ ⊗ μ = 0 ⊕ μ`.
pub fn builtin_g2_level1() -> FusionData {
    FusionData::new(
        ["0", "mu"],
        "0",
        [("0", "0"), ("mu", "mu")],
        [(["0", "0", "0"], 1), (["0", "mu", "mu"], 1), (["mu", "mu", "mu"], 1)],
    )
    .expect("builtin ring is well formed")
}

/// Checks every ring axiom and collects the violations.
pub fn validate(ring: &FusionData) -> ValidationReport {
    let k = ring.len();
    let lab = |i: usize| ring.labels[i].clone();
    let mut violations = Vec::new();

    for a in 0..k {
        let d = ring.dual[a];
        if ring.dual[d] != a {
            violations.push(Violation::DualNotInvolution { label: lab(a), dual: lab(d), dual_of_dual: lab(ring.dual[d]) });
        }
    }
    let v = ring.vacuum;
    if ring.dual[v] != v {
        violations.push(Violation::VacuumNotSelfDual { dual: lab(ring.dual[v]) });
    }

    for a in 0..k {
        for b in a..k {
            for c in b..k {
                let rank = ring.n3(a, b, c);
                if rank < 0 {
                    violations.push(Violation::NegativeRank { triple: [lab(a), lab(b), lab(c)], rank });
                }
                let perms = [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
                if perms.iter().any(|&[x, y, z]| ring.n3(x, y, z) != rank) {
                    violations.push(Violation::NotSymmetric { triple: [lab(a), lab(b), lab(c)] });
                }
            }
        }
    }

    for a in 0..k {
        for b in 0..k {
            let expected = i64::from(b == ring.dual[a]);
            let found = ring.n3(a, b, v);
            if found != expected {
                violations.push(Violation::VacuumRule { a: lab(a), b: lab(b), expected, found });
            }
        }
    }

    // (a ⊗ b) ⊗ c versus a ⊗ (b ⊗ c), coefficient of d.
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    let dd = ring.dual[d];
                    let (mut left, mut right) = (0i64, 0i64);
                    for e in 0..k {
                        let de = ring.dual[e];
                        left += ring.n3(a, b, de) * ring.n3(e, c, dd);
                        right += ring.n3(b, c, de) * ring.n3(a, e, dd);
                    }
                    if left != right {
                        violations.push(Violation::NotAssociative {
                            labels: [lab(a), lab(b), lab(c), lab(d)],
                            left,
                            right,
                        });
                    }
                }
            }
        }
    }

    ValidationReport { violations }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleEntry {
    triple: [String; 3],
    rank: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FusionDocument {
    labels: Vec<String>,
    vacuum: String,
    dual: BTreeMap<String, String>,
    n3: Vec<TripleEntry>,
}

/// Parses a fusion-ring JSON document and validates it.
pub fn load_fusion(document: &str) -> Result<FusionData, FusionError> {
    let doc: FusionDocument = serde_json::from_str(document).map_err(|e| FusionError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let ring = FusionData::new(
        doc.labels,
        doc.vacuum,
        doc.dual,
        doc.n3.into_iter().map(|t| (t.triple, t.rank)),
    )?;
    let report = validate(&ring);
    if report.passed() {
        Ok(ring)
    } else {
        Err(FusionError::Invalid(report))
    }
}

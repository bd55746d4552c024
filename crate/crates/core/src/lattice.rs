//! Finite posets and complete lattices over dense element ids.
//!
//! Elements are `usize` ids in `0..size` with a parallel label table. The
//! order is kept as per-element up-sets and down-sets; binary meet and join
//! are tabulated once at construction. Every finite lattice is complete, so
//! meets and joins of arbitrary subsets are folds of the binary tables, with
//! the usual conventions `meet(∅) = ⊤` and `join(∅) = ⊥`.

use std::fmt;

use thiserror::Error;

use crate::bitset::BitSet;

/// Upper bound on explicit lattice size unless overridden by `MUCOFIX_CAP`.
pub const DEFAULT_EXPLICIT_CAP: usize = 4096;

/// Largest ground set for which [`powerset_lattice`] materializes tables.
pub const POWERSET_EXPLICIT_MAX: usize = 5;

/// The explicit-lattice size cap in effect for this process.
pub fn explicit_cap() -> usize {
    std::env::var("MUCOFIX_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&c: &usize| c > 0)
        .unwrap_or(DEFAULT_EXPLICIT_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Glb,
    Lub,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Glb => "glb",
            Bound::Lub => "lub",
        })
    }
}

/// Which partial-order axiom failed, with the lowest-indexed witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosetViolation {
    Reflexivity { x: String },
    Antisymmetry { x: String, y: String },
    Transitivity { x: String, y: String, z: String },
}

impl fmt::Display for PosetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetViolation::Reflexivity { x } => write!(f, "not reflexive at {x}"),
            PosetViolation::Antisymmetry { x, y } => {
                write!(f, "not antisymmetric: {x} <= {y} and {y} <= {x}")
            }
            PosetViolation::Transitivity { x, y, z } => {
                write!(f, "not transitive: {x} <= {y} <= {z} but not {x} <= {z}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty carrier: a lattice needs at least one element")]
    Empty,
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("order relation is not a {0}x{0} matrix")]
    Shape(usize),
    #[error("NotAPoset: {0}")]
    NotAPoset(PosetViolation),
    #[error("NotALattice: {{{a},{b}}} lacks {missing}")]
    NotALattice { a: String, b: String, missing: Bound },
    #[error("element id {id} out of range for lattice of size {size}")]
    OutOfRange { id: usize, size: usize },
    #[error("size {requested} exceeds explicit cap {cap}")]
    Capacity { requested: usize, cap: usize },
    #[error("subset handle belongs to a different lattice")]
    ForeignSubset,
}

/// A finite partially ordered set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

fn check_labels(labels: &[String]) -> Result<(), LatticeError> {
    if labels.is_empty() {
        return Err(LatticeError::Empty);
    }
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(LatticeError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

impl FinitePoset {
    /// Builds a poset from a full relation matrix, checking the axioms in the
    /// order reflexivity, antisymmetry, transitivity.
    pub fn new(labels: Vec<String>, leq: &[Vec<bool>]) -> Result<Self, LatticeError> {
        check_labels(&labels)?;
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(LatticeError::Shape(n));
        }
        let up: Vec<BitSet> = leq
            .iter()
            .map(|row| BitSet::from_ids(n, (0..n).filter(|&j| row[j])))
            .collect();
        Self::from_up_sets(labels, up)
    }

    /// Builds a poset from `(lower, upper)` edges, taking the
    /// reflexive-transitive closure. Only antisymmetry can fail.
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, LatticeError> {
        check_labels(&labels)?;
        let n = labels.len();
        let mut up: Vec<BitSet> = (0..n).map(|i| BitSet::from_ids(n, [i])).collect();
        for &(lo, hi) in edges {
            for id in [lo, hi] {
                if id >= n {
                    return Err(LatticeError::OutOfRange { id, size: n });
                }
            }
            up[lo].insert(hi);
        }
        // Warshall on up-sets.
        for k in 0..n {
            let via = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&via);
                }
            }
        }
        Self::from_up_sets(labels, up)
    }

    fn from_up_sets(labels: Vec<String>, up: Vec<BitSet>) -> Result<Self, LatticeError> {
        let n = labels.len();
        let name = |i: usize| labels[i].clone();
        if let Some(x) = (0..n).find(|&i| !up[i].contains(i)) {
            return Err(LatticeError::NotAPoset(PosetViolation::Reflexivity { x: name(x) }));
        }
        for i in 0..n {
            if let Some(j) = up[i].iter().find(|&j| j > i && up[j].contains(i)) {
                return Err(LatticeError::NotAPoset(PosetViolation::Antisymmetry {
                    x: name(i),
                    y: name(j),
                }));
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                let mut escape = up[j].clone();
                for k in up[i].iter() {
                    escape.remove(k);
                }
                if let Some(k) = escape.first() {
                    return Err(LatticeError::NotAPoset(PosetViolation::Transitivity {
                        x: name(i),
                        y: name(j),
                        z: name(k),
                    }));
                }
            }
        }
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (i, row) in up.iter().enumerate() {
            for j in row {
                down[j].insert(i);
            }
        }
        Ok(FinitePoset { labels, up, down })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// `{y | x <= y}`
    pub fn up_set(&self, x: usize) -> &BitSet {
        &self.up[x]
    }

    /// `{y | y <= x}`
    pub fn down_set(&self, x: usize) -> &BitSet {
        &self.down[x]
    }

    /// Element ids sorted so that every element comes after everything
    /// strictly below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.size()).collect();
        ids.sort_by_key(|&i| (self.down[i].count(), i));
        ids
    }

    /// Hasse-diagram edges `(lower, upper)`, lexicographic.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.up[a].iter() {
                if a == b {
                    continue;
                }
                let between = self.up[a]
                    .iter()
                    .any(|c| c != a && c != b && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn dual(&self) -> FinitePoset {
        FinitePoset {
            labels: self.labels.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }
}

/// A finite (hence complete) lattice with tabulated binary meet and join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

/// Finds the glb (or, on the dual, lub) of `{a, b}`: the member `m` of the
/// common lower set whose own down-set covers that whole set.
fn greatest_of(poset: &FinitePoset, lower: &BitSet) -> Option<usize> {
    lower.iter().find(|&m| lower.is_subset(poset.down_set(m)))
}

/// Checks that every pair has a lub and a glb and builds the lattice.
///
/// On failure, reports the lexicographically first pair, testing lub before
/// glb for each pair.
pub fn validate_lattice(p: FinitePoset) -> Result<FiniteLattice, LatticeError> {
    let n = p.size();
    let cap = explicit_cap();
    if n > cap {
        return Err(LatticeError::Capacity { requested: n, cap });
    }
    let dual = p.dual();
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for a in 0..n {
        meet[a * n + a] = a as u32;
        join[a * n + a] = a as u32;
        for b in a + 1..n {
            let uppers = p.up_set(a).intersection(p.up_set(b));
            let lub = greatest_of(&dual, &uppers).ok_or_else(|| LatticeError::NotALattice {
                a: p.label(a).to_owned(),
                b: p.label(b).to_owned(),
                missing: Bound::Lub,
            })?;
            let lowers = p.down_set(a).intersection(p.down_set(b));
            let glb = greatest_of(&p, &lowers).ok_or_else(|| LatticeError::NotALattice {
                a: p.label(a).to_owned(),
                b: p.label(b).to_owned(),
                missing: Bound::Glb,
            })?;
            meet[a * n + b] = glb as u32;
            meet[b * n + a] = glb as u32;
            join[a * n + b] = lub as u32;
            join[b * n + a] = lub as u32;
        }
    }
    let bottom = (0..n)
        .find(|&x| p.up_set(x).count() == n)
        .expect("pairwise glbs imply a least element");
    let top = (0..n)
        .find(|&x| p.down_set(x).count() == n)
        .expect("pairwise lubs imply a greatest element");
    Ok(FiniteLattice {
        poset: p,
        meet,
        join,
        bottom,
        top,
    })
}

/// A subset of a particular lattice's elements.
#[derive(Debug, Clone)]
pub struct Subset<'a> {
    parent: &'a FiniteLattice,
    members: BitSet,
}

impl<'a> Subset<'a> {
    pub fn parent(&self) -> &'a FiniteLattice {
        self.parent
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl FiniteLattice {
    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn labels(&self) -> &[String] {
        self.poset.labels()
    }

    pub fn label(&self, x: usize) -> &str {
        self.poset.label(x)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.poset.index_of(label)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn check_elem(&self, id: usize) -> Result<usize, LatticeError> {
        if id < self.size() {
            Ok(id)
        } else {
            Err(LatticeError::OutOfRange {
                id,
                size: self.size(),
            })
        }
    }

    /// Order test; panics on ids outside the lattice.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn try_leq(&self, a: usize, b: usize) -> Result<bool, LatticeError> {
        Ok(self.leq(self.check_elem(a)?, self.check_elem(b)?))
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b] as usize
    }

    /// Meet of any collection of ids; `⊤` for an empty one.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, ids: I) -> usize {
        ids.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of any collection of ids; `⊥` for an empty one.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, ids: I) -> usize {
        ids.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, ids: I) -> Result<Subset<'_>, LatticeError> {
        let mut members = BitSet::new(self.size());
        for id in ids {
            members.insert(self.check_elem(id)?);
        }
        Ok(Subset {
            parent: self,
            members,
        })
    }

    pub fn subset_of_bits(&self, members: BitSet) -> Result<Subset<'_>, LatticeError> {
        if members.universe() != self.size() {
            return Err(LatticeError::ForeignSubset);
        }
        Ok(Subset {
            parent: self,
            members,
        })
    }

    fn own<'s>(&self, s: &'s Subset<'_>) -> Result<&'s BitSet, LatticeError> {
        if std::ptr::eq(self, s.parent) {
            Ok(&s.members)
        } else {
            Err(LatticeError::ForeignSubset)
        }
    }

    pub fn meet_set(&self, s: &Subset<'_>) -> Result<usize, LatticeError> {
        Ok(self.meet_all(self.own(s)?.iter()))
    }

    pub fn join_set(&self, s: &Subset<'_>) -> Result<usize, LatticeError> {
        Ok(self.join_all(self.own(s)?.iter()))
    }

    /// Nonempty and closed under binary meets and joins. For finite sets this
    /// is closure under meets and joins of every nonempty subset.
    pub fn is_closed(&self, members: &BitSet) -> bool {
        if members.is_empty() {
            return false;
        }
        members.iter().all(|a| {
            members
                .iter()
                .filter(|&b| b > a)
                .all(|b| members.contains(self.meet(a, b)) && members.contains(self.join(a, b)))
        })
    }

    pub fn is_complete_sublattice(&self, s: &Subset<'_>) -> bool {
        match self.own(s) {
            Ok(m) => self.is_closed(m),
            Err(_) => false,
        }
    }

    /// The same carrier with the order reversed.
    pub fn dual(&self) -> FiniteLattice {
        FiniteLattice {
            poset: self.poset.dual(),
            meet: self.join.clone(),
            join: self.meet.clone(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// Plain-text Hasse dump: `elements: a b c; covers: a<b b<c`.
    pub fn describe(&self) -> String {
        let covers: Vec<String> = self
            .poset
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.label(a), self.label(b)))
            .collect();
        format!(
            "elements: {}; covers: {}",
            self.labels().join(" "),
            covers.join(" ")
        )
    }

    /// Builds from up-sets and operation tables already known to be correct.
    fn from_tables(
        labels: Vec<String>,
        up: Vec<BitSet>,
        meet: Vec<u32>,
        join: Vec<u32>,
        bottom: usize,
        top: usize,
    ) -> FiniteLattice {
        let n = labels.len();
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (i, row) in up.iter().enumerate() {
            for j in row {
                down[j].insert(i);
            }
        }
        FiniteLattice {
            poset: FinitePoset { labels, up, down },
            meet,
            join,
            bottom,
            top,
        }
    }
}

/// The chain `0 < 1 < … < n-1`.
pub fn chain(n: usize) -> Result<FiniteLattice, LatticeError> {
    if n == 0 {
        return Err(LatticeError::Empty);
    }
    let cap = explicit_cap();
    if n > cap {
        return Err(LatticeError::Capacity { requested: n, cap });
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    let up = (0..n).map(|i| BitSet::from_ids(n, i..n)).collect();
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            meet[a * n + b] = a.min(b) as u32;
            join[a * n + b] = a.max(b) as u32;
        }
    }
    Ok(FiniteLattice::from_tables(labels, up, meet, join, 0, n - 1))
}

/// Componentwise product; element `(a, b)` has id `a * |B| + b`.
pub fn product(a: &FiniteLattice, b: &FiniteLattice) -> Result<FiniteLattice, LatticeError> {
    let (na, nb) = (a.size(), b.size());
    let n = na.saturating_mul(nb);
    let cap = explicit_cap();
    if n > cap {
        return Err(LatticeError::Capacity { requested: n, cap });
    }
    let id = |x: usize, y: usize| x * nb + y;
    let mut labels = Vec::with_capacity(n);
    let mut up = Vec::with_capacity(n);
    for x in 0..na {
        for y in 0..nb {
            labels.push(format!("({},{})", a.label(x), b.label(y)));
            let mut row = BitSet::new(n);
            for ux in a.poset.up_set(x) {
                for uy in b.poset.up_set(y) {
                    row.insert(id(ux, uy));
                }
            }
            up.push(row);
        }
    }
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for x1 in 0..na {
        for y1 in 0..nb {
            for x2 in 0..na {
                for y2 in 0..nb {
                    let k = id(x1, y1) * n + id(x2, y2);
                    meet[k] = id(a.meet(x1, x2), b.meet(y1, y2)) as u32;
                    join[k] = id(a.join(x1, x2), b.join(y1, y2)) as u32;
                }
            }
        }
    }
    Ok(FiniteLattice::from_tables(
        labels,
        up,
        meet,
        join,
        id(a.bottom, b.bottom),
        id(a.top, b.top),
    ))
}

/// Subsets of `{0..n}` under inclusion. Element ids are the bitmasks
/// themselves, so `∩`/`∪` are `&`/`|` on ids.
pub fn powerset_lattice(n: usize) -> Result<FiniteLattice, LatticeError> {
    let cap = explicit_cap();
    if n > POWERSET_EXPLICIT_MAX || (1usize << n) > cap {
        return Err(LatticeError::Capacity {
            requested: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
            cap: cap.min(1 << POWERSET_EXPLICIT_MAX),
        });
    }
    let size = 1usize << n;
    let labels = (0..size).map(|m| mask_label(m, n)).collect();
    let up = (0..size)
        .map(|m| BitSet::from_ids(size, (0..size).filter(|&s| s & m == m)))
        .collect();
    let mut meet = vec![0u32; size * size];
    let mut join = vec![0u32; size * size];
    for a in 0..size {
        for b in 0..size {
            meet[a * size + b] = (a & b) as u32;
            join[a * size + b] = (a | b) as u32;
        }
    }
    Ok(FiniteLattice::from_tables(labels, up, meet, join, 0, size - 1))
}

fn mask_label(mask: usize, n: usize) -> String {
    let parts: Vec<String> = (0..n)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Validates a lattice given by names and `(lower, upper)` edges.
pub fn lattice_from_edges(names: &[&str], edges: &[(&str, &str)]) -> Result<FiniteLattice, LatticeError> {
    let labels: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let pos = |s: &str| names.iter().position(|n| *n == s).expect("edge names a listed element");
    let edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (pos(a), pos(b))).collect();
    validate_lattice(FinitePoset::from_edges(labels, &edges)?)
}

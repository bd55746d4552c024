//! Mutual generator pairs `F: O → P`, `G: P → O` as total tables, their
//! compositions, and decision procedures for monotonicity and continuity.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{Bound, FiniteLattice, LatticeError};

/// Which subsets a continuity check quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ContinuityMode {
    /// Binary meets/joins only, i.e. all nonempty finite subsets.
    #[default]
    BinaryReduction,
    /// Binary plus the empty subset, so `⊤ ↦ ⊤` and `⊥ ↦ ⊥` are required too.
    WithEmpty,
    /// Every nonempty subset with at most this many members (at least 2).
    ExhaustiveCapped(usize),
}

impl ContinuityMode {
    pub fn capped(cap: usize) -> Result<Self, GenFunError> {
        if cap < 2 {
            Err(GenFunError::CapTooSmall(cap))
        } else {
            Ok(ContinuityMode::ExhaustiveCapped(cap))
        }
    }
}

impl fmt::Display for ContinuityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuityMode::BinaryReduction => f.write_str("binary"),
            ContinuityMode::WithEmpty => f.write_str("with-empty"),
            ContinuityMode::ExhaustiveCapped(n) => write!(f, "capped:{n}"),
        }
    }
}

impl FromStr for ContinuityMode {
    type Err = GenFunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binary" => Ok(ContinuityMode::BinaryReduction),
            "with-empty" => Ok(ContinuityMode::WithEmpty),
            _ => {
                let cap = s
                    .strip_prefix("capped:")
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| GenFunError::UnknownMode(s.to_owned()))?;
                ContinuityMode::capped(cap)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenFunError {
    #[error("table has {found} entries, domain has {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("image {image} of element {index} is outside a codomain of size {size}")]
    ImageOutOfRange { index: usize, image: usize, size: usize },
    #[error("exhaustive continuity cap must be at least 2, got {0}")]
    CapTooSmall(usize),
    #[error("unknown continuity mode `{0}` (expected binary, with-empty or capped:N)")]
    UnknownMode(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Names one side of a mutual pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    F,
    G,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::F => "F",
            Generator::G => "G",
        })
    }
}

/// A borrowed total map between two lattices.
#[derive(Debug, Clone, Copy)]
pub struct MapView<'a> {
    pub from: &'a FiniteLattice,
    pub to: &'a FiniteLattice,
    pub table: &'a [usize],
}

impl MapView<'_> {
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }
}

fn check_table(from: &FiniteLattice, to: &FiniteLattice, table: &[usize]) -> Result<(), GenFunError> {
    if table.len() != from.size() {
        return Err(GenFunError::TableLength {
            expected: from.size(),
            found: table.len(),
        });
    }
    if let Some((index, &image)) = table.iter().enumerate().find(|(_, &y)| y >= to.size()) {
        return Err(GenFunError::ImageOutOfRange {
            index,
            image,
            size: to.size(),
        });
    }
    Ok(())
}

/// A total self-map of one lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoFn {
    dom: Arc<FiniteLattice>,
    table: Vec<usize>,
}

impl EndoFn {
    pub fn new(dom: Arc<FiniteLattice>, table: Vec<usize>) -> Result<Self, GenFunError> {
        check_table(&dom, &dom, &table)?;
        Ok(EndoFn { dom, table })
    }

    pub fn identity(dom: Arc<FiniteLattice>) -> Self {
        let table = dom.elements().collect();
        EndoFn { dom, table }
    }

    pub fn dom(&self) -> &Arc<FiniteLattice> {
        &self.dom
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn view(&self) -> MapView<'_> {
        MapView {
            from: &self.dom,
            to: &self.dom,
            table: &self.table,
        }
    }
}

/// Mutual generators `F: O → P` and `G: P → O`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutualPair {
    o: Arc<FiniteLattice>,
    p: Arc<FiniteLattice>,
    f: Vec<usize>,
    g: Vec<usize>,
}

impl MutualPair {
    pub fn new(
        o: Arc<FiniteLattice>,
        p: Arc<FiniteLattice>,
        f: Vec<usize>,
        g: Vec<usize>,
    ) -> Result<Self, GenFunError> {
        check_table(&o, &p, &f)?;
        check_table(&p, &o, &g)?;
        Ok(MutualPair { o, p, f, g })
    }

    pub fn dom_o(&self) -> &FiniteLattice {
        &self.o
    }

    pub fn dom_p(&self) -> &FiniteLattice {
        &self.p
    }

    pub fn shared_o(&self) -> &Arc<FiniteLattice> {
        &self.o
    }

    pub fn shared_p(&self) -> &Arc<FiniteLattice> {
        &self.p
    }

    pub fn f_table(&self) -> &[usize] {
        &self.f
    }

    pub fn g_table(&self) -> &[usize] {
        &self.g
    }

    #[inline]
    pub fn apply_f(&self, o: usize) -> usize {
        self.f[o]
    }

    #[inline]
    pub fn apply_g(&self, p: usize) -> usize {
        self.g[p]
    }

    pub fn try_apply_f(&self, o: usize) -> Result<usize, GenFunError> {
        Ok(self.f[self.o.check_elem(o)?])
    }

    pub fn try_apply_g(&self, p: usize) -> Result<usize, GenFunError> {
        Ok(self.g[self.p.check_elem(p)?])
    }

    pub fn f_view(&self) -> MapView<'_> {
        MapView {
            from: &self.o,
            to: &self.p,
            table: &self.f,
        }
    }

    pub fn g_view(&self) -> MapView<'_> {
        MapView {
            from: &self.p,
            to: &self.o,
            table: &self.g,
        }
    }

    /// `G ∘ F` on `O`.
    pub fn compose_gf(&self) -> EndoFn {
        EndoFn {
            dom: Arc::clone(&self.o),
            table: self.f.iter().map(|&p| self.g[p]).collect(),
        }
    }

    /// `F ∘ G` on `P`.
    pub fn compose_fg(&self) -> EndoFn {
        EndoFn {
            dom: Arc::clone(&self.p),
            table: self.g.iter().map(|&o| self.f[o]).collect(),
        }
    }

    /// One-line dump of both lattices and both tables, by label.
    pub fn describe(&self) -> String {
        let table = |from: &FiniteLattice, to: &FiniteLattice, t: &[usize]| {
            t.iter()
                .enumerate()
                .map(|(x, &y)| format!("{}->{}", from.label(x), to.label(y)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "O[{}] P[{}] F[{}] G[{}]",
            self.o.describe(),
            self.p.describe(),
            table(&self.o, &self.p, &self.f),
            table(&self.p, &self.o, &self.g)
        )
    }
}

/// First comparable pair `a <= b` (lexicographic) with `f(a) ⋢ f(b)`.
pub fn monotone_violation(m: MapView<'_>) -> Option<(usize, usize)> {
    m.from.elements().find_map(|a| {
        m.from
            .poset()
            .up_set(a)
            .iter()
            .find(|&b| !m.to.leq(m.apply(a), m.apply(b)))
            .map(|b| (a, b))
    })
}

pub fn is_monotone(m: MapView<'_>) -> bool {
    monotone_violation(m).is_none()
}

/// Lexicographic `k`-combinations of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let next = {
            let c = cur.as_mut().unwrap();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for j in i + 1..k {
                        c[j] = c[j - 1] + 1;
                    }
                    break Some(());
                }
            }
        };
        if next.is_none() {
            cur = None;
        }
        Some(out)
    })
}

/// Subsets admitted by `mode`, smallest cardinality first, lexicographic
/// within a cardinality. Singletons are skipped: every map preserves their
/// bounds.
fn admitted_subsets(n: usize, mode: ContinuityMode) -> impl Iterator<Item = Vec<usize>> {
    let (with_empty, max) = match mode {
        ContinuityMode::BinaryReduction => (false, 2),
        ContinuityMode::WithEmpty => (true, 2),
        ContinuityMode::ExhaustiveCapped(cap) => (false, cap),
    };
    let empty = with_empty.then(Vec::new);
    empty
        .into_iter()
        .chain((2..=max.min(n)).flat_map(move |k| combinations(n, k)))
}

fn preservation_violation(m: MapView<'_>, mode: ContinuityMode, bound: Bound) -> Option<Vec<usize>> {
    admitted_subsets(m.from.size(), mode).find(|subset| {
        let images = subset.iter().map(|&x| m.apply(x));
        let (of_images, image_of) = match bound {
            Bound::Glb => (
                m.to.meet_all(images),
                m.apply(m.from.meet_all(subset.iter().copied())),
            ),
            Bound::Lub => (
                m.to.join_all(images),
                m.apply(m.from.join_all(subset.iter().copied())),
            ),
        };
        of_images != image_of
    })
}

/// Minimal witness subset `M` with `⊓f(M) ≠ f(∧M)`, if any.
pub fn meet_continuity_violation(m: MapView<'_>, mode: ContinuityMode) -> Option<Vec<usize>> {
    preservation_violation(m, mode, Bound::Glb)
}

/// Minimal witness subset `M` with `⊔f(M) ≠ f(∨M)`, if any.
pub fn join_continuity_violation(m: MapView<'_>, mode: ContinuityMode) -> Option<Vec<usize>> {
    preservation_violation(m, mode, Bound::Lub)
}

pub fn is_meet_continuous(m: MapView<'_>, mode: ContinuityMode) -> bool {
    meet_continuity_violation(m, mode).is_none()
}

pub fn is_join_continuous(m: MapView<'_>, mode: ContinuityMode) -> bool {
    join_continuity_violation(m, mode).is_none()
}

pub fn is_continuous(m: MapView<'_>, mode: ContinuityMode) -> bool {
    is_meet_continuous(m, mode) && is_join_continuous(m, mode)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityViolation {
    pub generator: Generator,
    /// `Glb` for a failed meet, `Lub` for a failed join.
    pub bound: Bound,
    pub subset: Vec<usize>,
}

/// All failing (generator, bound) combinations, in the order F-meet,
/// F-join, G-meet, G-join.
pub fn continuity_violations(mp: &MutualPair, mode: ContinuityMode) -> Vec<ContinuityViolation> {
    let mut out = Vec::new();
    for (generator, view) in [(Generator::F, mp.f_view()), (Generator::G, mp.g_view())] {
        for bound in [Bound::Glb, Bound::Lub] {
            if let Some(subset) = preservation_violation(view, mode, bound) {
                out.push(ContinuityViolation {
                    generator,
                    bound,
                    subset,
                });
            }
        }
    }
    out
}

pub fn is_continuous_pair(mp: &MutualPair, mode: ContinuityMode) -> bool {
    is_continuous(mp.f_view(), mode) && is_continuous(mp.g_view(), mode)
}

pub fn is_monotone_pair(mp: &MutualPair) -> bool {
    is_monotone(mp.f_view()) && is_monotone(mp.g_view())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::diamond;
    use crate::lattice::chain;

    fn c2() -> Arc<FiniteLattice> {
        Arc::new(chain(2).unwrap())
    }

    fn id2() -> MutualPair {
        MutualPair::new(c2(), c2(), vec![0, 1], vec![0, 1]).unwrap()
    }

    fn k1() -> MutualPair {
        MutualPair::new(c2(), c2(), vec![0, 1], vec![1, 1]).unwrap()
    }

    fn swap() -> MutualPair {
        let d = Arc::new(diamond());
        MutualPair::new(d.clone(), d, vec![0, 2, 1, 3], vec![0, 2, 1, 3]).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(id2().apply_f(0), 0);
        assert_eq!(k1().apply_g(0), 1);
        let s = swap();
        let (a, b) = (s.dom_o().index_of("a").unwrap(), s.dom_p().index_of("b").unwrap());
        assert_eq!(s.apply_f(a), b);
        assert!(id2().try_apply_f(2).is_err());
    }

    #[test]
    fn compose_examples() {
        assert_eq!(id2().compose_gf().table(), &[0, 1]);
        assert_eq!(k1().compose_gf().table(), &[1, 1]);
        assert_eq!(swap().compose_gf().table(), &[0, 1, 2, 3]);
        assert_eq!(swap().compose_fg().table(), &[0, 1, 2, 3]);
    }

    #[test]
    fn table_validation() {
        assert_eq!(
            MutualPair::new(c2(), c2(), vec![0], vec![0, 1]).unwrap_err(),
            GenFunError::TableLength { expected: 2, found: 1 }
        );
        assert!(matches!(
            MutualPair::new(c2(), c2(), vec![0, 2], vec![0, 1]),
            Err(GenFunError::ImageOutOfRange { index: 1, image: 2, .. })
        ));
    }

    #[test]
    fn monotone_examples() {
        assert!(is_monotone(id2().f_view()));
        let c = chain(2).unwrap();
        let flip = [1, 0];
        let v = MapView { from: &c, to: &c, table: &flip };
        assert_eq!(monotone_violation(v), Some((0, 1)));
        assert!(is_monotone(swap().f_view()));
    }

    #[test]
    fn continuity_examples() {
        let k = k1();
        let g = k.g_view();
        assert!(is_join_continuous(g, ContinuityMode::BinaryReduction));
        assert_eq!(
            join_continuity_violation(g, ContinuityMode::WithEmpty),
            Some(vec![])
        );
        let id = id2();
        for mode in [
            ContinuityMode::BinaryReduction,
            ContinuityMode::WithEmpty,
            ContinuityMode::ExhaustiveCapped(4),
        ] {
            assert!(is_continuous_pair(&id, mode));
        }

        let d = diamond();
        let c = chain(2).unwrap();
        let f = [0, 1, 1, 1];
        let v = MapView { from: &d, to: &c, table: &f };
        assert_eq!(meet_continuity_violation(v, ContinuityMode::BinaryReduction), Some(vec![1, 2]));
    }

    #[test]
    fn pair_continuity_examples() {
        assert!(is_continuous_pair(&id2(), ContinuityMode::BinaryReduction));
        assert!(is_continuous_pair(&swap(), ContinuityMode::ExhaustiveCapped(4)));
        assert!(is_continuous_pair(&swap(), ContinuityMode::WithEmpty));
        assert!(!is_continuous_pair(&k1(), ContinuityMode::WithEmpty));
        let v = continuity_violations(&k1(), ContinuityMode::WithEmpty);
        assert_eq!(
            v,
            vec![ContinuityViolation {
                generator: Generator::G,
                bound: Bound::Lub,
                subset: vec![]
            }]
        );
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("binary".parse(), Ok(ContinuityMode::BinaryReduction));
        assert_eq!("with-empty".parse(), Ok(ContinuityMode::WithEmpty));
        assert_eq!("capped:3".parse(), Ok(ContinuityMode::ExhaustiveCapped(3)));
        assert_eq!("capped:1".parse::<ContinuityMode>(), Err(GenFunError::CapTooSmall(1)));
        assert!("loose".parse::<ContinuityMode>().is_err());
        assert_eq!(ContinuityMode::ExhaustiveCapped(5).to_string(), "capped:5");
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = combinations(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(5, 5).count(), 1);
    }
}

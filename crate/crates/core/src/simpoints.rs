//! Simultaneous pre-fixed, post-fixed and fixed points of a mutual pair,
//! their fibers, and the component sets.
//!
//! Everything here is an exhaustive scan over `O × P`. The scans are the
//! reference semantics the solvers are checked against.

use std::fmt;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::genfun::MutualPair;

/// Largest `|O|·|P|` the pair scans will visit.
pub const SCAN_CAP: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("pair scan of {requested} points exceeds cap {cap}")]
    Capacity { requested: usize, cap: usize },
}

/// A candidate pair `(o, p)` with `o ∈ O`, `p ∈ P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPoint {
    pub o: usize,
    pub p: usize,
}

impl PairPoint {
    pub fn new(o: usize, p: usize) -> Self {
        PairPoint { o, p }
    }
}

impl fmt::Display for PairPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.o, self.p)
    }
}

/// `F(o) ⊑ p` and `G(p) ≤ o`.
pub fn is_sim_prefixed(mp: &MutualPair, pt: PairPoint) -> bool {
    mp.dom_p().leq(mp.apply_f(pt.o), pt.p) && mp.dom_o().leq(mp.apply_g(pt.p), pt.o)
}

/// `p ⊑ F(o)` and `o ≤ G(p)`.
pub fn is_sim_postfixed(mp: &MutualPair, pt: PairPoint) -> bool {
    mp.dom_p().leq(pt.p, mp.apply_f(pt.o)) && mp.dom_o().leq(pt.o, mp.apply_g(pt.p))
}

/// `F(o) = p` and `G(p) = o`.
pub fn is_sim_fixed(mp: &MutualPair, pt: PairPoint) -> bool {
    mp.apply_f(pt.o) == pt.p && mp.apply_g(pt.p) == pt.o
}

/// Which lattice a fiber's anchor lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    O,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberKind {
    Pre,
    Post,
}

/// The partners of one anchor: for an `O`-anchor `o` and kind `Pre`, the set
/// `{p | (o, p) simultaneously pre-fixed}`; members live in the opposite
/// lattice. An empty fiber is a normal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSet {
    pub anchor: usize,
    pub side: Side,
    pub kind: FiberKind,
    pub members: BitSet,
}

impl FiberSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn point_of(side: Side, anchor: usize, partner: usize) -> PairPoint {
    match side {
        Side::O => PairPoint::new(anchor, partner),
        Side::P => PairPoint::new(partner, anchor),
    }
}

fn fiber(mp: &MutualPair, anchor: usize, side: Side, kind: FiberKind) -> FiberSet {
    let width = match side {
        Side::O => mp.dom_p().size(),
        Side::P => mp.dom_o().size(),
    };
    let test = match kind {
        FiberKind::Pre => is_sim_prefixed,
        FiberKind::Post => is_sim_postfixed,
    };
    let members = BitSet::from_ids(
        width,
        (0..width).filter(|&partner| test(mp, point_of(side, anchor, partner))),
    );
    FiberSet {
        anchor,
        side,
        kind,
        members,
    }
}

/// `PreFP_{F,G}(o)` for `side = O`, `PreFP_{G,F}(p)` for `side = P`.
pub fn prefp_fiber(mp: &MutualPair, anchor: usize, side: Side) -> FiberSet {
    fiber(mp, anchor, side, FiberKind::Pre)
}

/// `PostFP_{F,G}(o)` for `side = O`, `PostFP_{G,F}(p)` for `side = P`.
pub fn postfp_fiber(mp: &MutualPair, anchor: usize, side: Side) -> FiberSet {
    fiber(mp, anchor, side, FiberKind::Post)
}

/// Projections of the simultaneous pre-fixed pairs (`c` on `O`, `d` on `P`)
/// and post-fixed pairs (`e` on `O`, `f` on `P`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSets {
    pub c: BitSet,
    pub d: BitSet,
    pub e: BitSet,
    pub f: BitSet,
}

fn check_scan(mp: &MutualPair) -> Result<(), ScanError> {
    let requested = mp.dom_o().size().saturating_mul(mp.dom_p().size());
    if requested > SCAN_CAP {
        Err(ScanError::Capacity {
            requested,
            cap: SCAN_CAP,
        })
    } else {
        Ok(())
    }
}

fn all_points(mp: &MutualPair) -> impl Iterator<Item = PairPoint> + '_ {
    mp.dom_o()
        .elements()
        .flat_map(move |o| mp.dom_p().elements().map(move |p| PairPoint::new(o, p)))
}

/// Every simultaneous pre-fixed pair, lexicographic in `(o, p)`.
pub fn enumerate_sim_prefixed(mp: &MutualPair) -> Result<Vec<PairPoint>, ScanError> {
    check_scan(mp)?;
    Ok(all_points(mp).filter(|&pt| is_sim_prefixed(mp, pt)).collect())
}

/// Every simultaneous post-fixed pair, lexicographic in `(o, p)`.
pub fn enumerate_sim_postfixed(mp: &MutualPair) -> Result<Vec<PairPoint>, ScanError> {
    check_scan(mp)?;
    Ok(all_points(mp).filter(|&pt| is_sim_postfixed(mp, pt)).collect())
}

/// Every simultaneous fixed pair, lexicographic in `(o, p)`. Each `o` and
/// each `p` occurs at most once.
pub fn enumerate_sim_fixed(mp: &MutualPair) -> Result<Vec<PairPoint>, ScanError> {
    check_scan(mp)?;
    let fixed: Vec<PairPoint> = all_points(mp).filter(|&pt| is_sim_fixed(mp, pt)).collect();
    debug_assert!(fixed.windows(2).all(|w| w[0].o != w[1].o));
    debug_assert!({
        let mut ps: Vec<usize> = fixed.iter().map(|pt| pt.p).collect();
        ps.sort_unstable();
        ps.windows(2).all(|w| w[0] != w[1])
    });
    Ok(fixed)
}

pub fn component_sets(mp: &MutualPair) -> Result<ComponentSets, ScanError> {
    check_scan(mp)?;
    let (no, np) = (mp.dom_o().size(), mp.dom_p().size());
    let mut cs = ComponentSets {
        c: BitSet::new(no),
        d: BitSet::new(np),
        e: BitSet::new(no),
        f: BitSet::new(np),
    };
    for pt in all_points(mp) {
        if is_sim_prefixed(mp, pt) {
            cs.c.insert(pt.o);
            cs.d.insert(pt.p);
        }
        if is_sim_postfixed(mp, pt) {
            cs.e.insert(pt.o);
            cs.f.insert(pt.p);
        }
    }
    Ok(cs)
}

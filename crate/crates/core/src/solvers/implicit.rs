//! Kleene iteration over lattices given by operations rather than tables.
//!
//! Used for products of explicit lattices and for powersets of relations that
//! are far too large to tabulate.

use std::collections::VecDeque;

use crate::bitset::BitSet;
use crate::lattice::FiniteLattice;

use super::{Direction, SolveError};

/// Iteration budget when the caller does not pick one.
pub const DEFAULT_BUDGET: usize = 10_000;

/// Number of serialized iterates kept at the end of a run.
pub const TRACE_TAIL: usize = 64;

/// A lattice known only through its bounds and binary operations.
///
/// The operations must satisfy the lattice laws on every element the
/// iteration reaches; [`spot_check_laws`] tests this on samples.
pub trait ImplicitLattice {
    type Elem: Clone + PartialEq;

    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.equal(&self.meet(a, b), a)
    }

    fn serialize(&self, a: &Self::Elem) -> String;
}

impl<L: ImplicitLattice + ?Sized> ImplicitLattice for &L {
    type Elem = L::Elem;

    fn bottom(&self) -> Self::Elem {
        (**self).bottom()
    }
    fn top(&self) -> Self::Elem {
        (**self).top()
    }
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (**self).meet(a, b)
    }
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (**self).join(a, b)
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        (**self).equal(a, b)
    }
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        (**self).leq(a, b)
    }
    fn serialize(&self, a: &Self::Elem) -> String {
        (**self).serialize(a)
    }
}

impl ImplicitLattice for FiniteLattice {
    type Elem = usize;

    fn bottom(&self) -> usize {
        FiniteLattice::bottom(self)
    }
    fn top(&self) -> usize {
        FiniteLattice::top(self)
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        FiniteLattice::meet(self, *a, *b)
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        FiniteLattice::join(self, *a, *b)
    }
    fn leq(&self, a: &usize, b: &usize) -> bool {
        FiniteLattice::leq(self, *a, *b)
    }
    fn serialize(&self, a: &usize) -> String {
        self.label(*a).to_owned()
    }
}

/// Componentwise product of two implicit lattices.
#[derive(Debug, Clone, Copy)]
pub struct ProductLattice<A, B>(pub A, pub B);

impl<A: ImplicitLattice, B: ImplicitLattice> ImplicitLattice for ProductLattice<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn bottom(&self) -> Self::Elem {
        (self.0.bottom(), self.1.bottom())
    }
    fn top(&self) -> Self::Elem {
        (self.0.top(), self.1.top())
    }
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.0.meet(&a.0, &b.0), self.1.meet(&a.1, &b.1))
    }
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.0.join(&a.0, &b.0), self.1.join(&a.1, &b.1))
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.0.equal(&a.0, &b.0) && self.1.equal(&a.1, &b.1)
    }
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.0.leq(&a.0, &b.0) && self.1.leq(&a.1, &b.1)
    }
    fn serialize(&self, a: &Self::Elem) -> String {
        format!("({},{})", self.0.serialize(&a.0), self.1.serialize(&a.1))
    }
}

/// Subsets of `0..width` under inclusion, e.g. relations over a finite
/// universe flattened to `width = n * n` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowersetLattice {
    pub width: usize,
}

impl ImplicitLattice for PowersetLattice {
    type Elem = BitSet;

    fn bottom(&self) -> BitSet {
        BitSet::new(self.width)
    }
    fn top(&self) -> BitSet {
        BitSet::full(self.width)
    }
    fn meet(&self, a: &BitSet, b: &BitSet) -> BitSet {
        a.intersection(b)
    }
    fn join(&self, a: &BitSet, b: &BitSet) -> BitSet {
        a.union(b)
    }
    fn leq(&self, a: &BitSet, b: &BitSet) -> bool {
        a.is_subset(b)
    }
    fn serialize(&self, a: &BitSet) -> String {
        let ids: Vec<String> = a.iter().map(|i| i.to_string()).collect();
        format!("{{{}}}", ids.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct KleeneOutcome<E> {
    pub limit: E,
    /// Number of step applications, including the one that confirmed the limit.
    pub iterations: usize,
    /// Serialized distinct iterates, oldest first, at most [`TRACE_TAIL`].
    pub tail: VecDeque<String>,
}

/// Iterates `step` from `⊥` (`Least`) or `⊤` (`Greatest`) until it returns
/// its argument. `step` must be monotone on the reached elements.
pub fn kleene_implicit<L, S>(
    lat: &L,
    step: S,
    direction: Direction,
    budget: usize,
) -> Result<KleeneOutcome<L::Elem>, SolveError>
where
    L: ImplicitLattice,
    S: FnMut(&L::Elem) -> L::Elem,
{
    kleene_observed(lat, step, direction, budget, |_| {})
}

/// As [`kleene_implicit`], calling `observe` on every distinct iterate
/// (starting point included).
pub fn kleene_observed<L, S, O>(
    lat: &L,
    mut step: S,
    direction: Direction,
    budget: usize,
    mut observe: O,
) -> Result<KleeneOutcome<L::Elem>, SolveError>
where
    L: ImplicitLattice,
    S: FnMut(&L::Elem) -> L::Elem,
    O: FnMut(&L::Elem),
{
    let mut cur = match direction {
        Direction::Least => lat.bottom(),
        Direction::Greatest => lat.top(),
    };
    let mut tail = VecDeque::with_capacity(TRACE_TAIL);
    let record = |tail: &mut VecDeque<String>, e: &L::Elem| {
        if tail.len() == TRACE_TAIL {
            tail.pop_front();
        }
        tail.push_back(lat.serialize(e));
    };
    observe(&cur);
    record(&mut tail, &cur);
    let mut iterations = 0;
    loop {
        if iterations == budget {
            return Err(SolveError::NonTermination { budget });
        }
        let next = step(&cur);
        iterations += 1;
        if lat.equal(&next, &cur) {
            return Ok(KleeneOutcome {
                limit: cur,
                iterations,
                tail,
            });
        }
        observe(&next);
        record(&mut tail, &next);
        cur = next;
    }
}

/// Checks the lattice laws on every triple drawn from `samples`, plus the
/// bound identities. Returns a description of the first failure.
pub fn spot_check_laws<L: ImplicitLattice>(lat: &L, samples: &[L::Elem]) -> Result<(), String> {
    let (bot, top) = (lat.bottom(), lat.top());
    let eq = |a: &L::Elem, b: &L::Elem| lat.equal(a, b);
    let show = |a: &L::Elem| lat.serialize(a);
    for a in samples {
        if !eq(&lat.meet(a, a), a) || !eq(&lat.join(a, a), a) {
            return Err(format!("idempotence fails at {}", show(a)));
        }
        if !eq(&lat.join(a, &bot), a) || !eq(&lat.meet(a, &top), a) {
            return Err(format!("bound identity fails at {}", show(a)));
        }
        for b in samples {
            if !eq(&lat.meet(a, b), &lat.meet(b, a)) || !eq(&lat.join(a, b), &lat.join(b, a)) {
                return Err(format!("commutativity fails at {}, {}", show(a), show(b)));
            }
            if !eq(&lat.meet(a, &lat.join(a, b)), a) || !eq(&lat.join(a, &lat.meet(a, b)), a) {
                return Err(format!("absorption fails at {}, {}", show(a), show(b)));
            }
            for c in samples {
                let m1 = lat.meet(&lat.meet(a, b), c);
                let m2 = lat.meet(a, &lat.meet(b, c));
                let j1 = lat.join(&lat.join(a, b), c);
                let j2 = lat.join(a, &lat.join(b, c));
                if !eq(&m1, &m2) || !eq(&j1, &j2) {
                    return Err(format!(
                        "associativity fails at {}, {}, {}",
                        show(a),
                        show(b),
                        show(c)
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::n5;

    #[test]
    fn trivial_powerset_is_immediately_fixed() {
        let lat = PowersetLattice { width: 0 };
        let out = kleene_implicit(&lat, |s: &BitSet| s.clone(), Direction::Least, 10).unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.tail.len(), 1);
    }

    #[test]
    fn closure_under_one_implies_two() {
        // Powerset of {1,2} as bits 0 and 1; rule: 1 present ⇒ add 2.
        let lat = PowersetLattice { width: 2 };
        let rule = |seed: Option<usize>| {
            move |s: &BitSet| {
                let mut next = s.clone();
                if let Some(x) = seed {
                    next.insert(x);
                }
                if next.contains(0) {
                    next.insert(1);
                }
                next
            }
        };
        let out = kleene_implicit(&lat, rule(None), Direction::Least, 10).unwrap();
        assert!(out.limit.is_empty());
        let out = kleene_implicit(&lat, rule(Some(0)), Direction::Least, 10).unwrap();
        assert_eq!(out.limit.iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(Vec::from(out.tail), vec!["{}", "{0,1}"]);
    }

    #[test]
    fn budget_exhaustion() {
        let lat = n5();
        // Not monotone: bounces between two elements forever.
        let err = kleene_implicit(&lat, |&x: &usize| if x == 0 { 4 } else { 0 }, Direction::Least, 7)
            .unwrap_err();
        assert_eq!(err, SolveError::NonTermination { budget: 7 });
        let err = kleene_implicit(&lat, |&x: &usize| x, Direction::Least, 0).unwrap_err();
        assert_eq!(err, SolveError::NonTermination { budget: 0 });
    }

    #[test]
    fn tail_is_bounded() {
        let lat = crate::lattice::chain(200).unwrap();
        let out = kleene_implicit(&lat, |&x: &usize| (x + 1).min(199), Direction::Least, 1000).unwrap();
        assert_eq!(out.limit, 199);
        assert_eq!(out.iterations, 200);
        assert_eq!(out.tail.len(), TRACE_TAIL);
        assert_eq!(out.tail.back().map(String::as_str), Some("199"));
    }

    #[test]
    fn laws_hold_on_tabulated_and_product() {
        let l = n5();
        let all: Vec<usize> = l.elements().collect();
        spot_check_laws(&l, &all).unwrap();
        let prod = ProductLattice(&l, PowersetLattice { width: 3 });
        let samples: Vec<(usize, BitSet)> = all
            .iter()
            .map(|&x| (x, BitSet::from_ids(3, (0..3).filter(|b| (x >> b) & 1 == 1))))
            .collect();
        spot_check_laws(&prod, &samples).unwrap();
    }

    #[test]
    fn broken_operations_are_caught() {
        struct Bad;
        impl ImplicitLattice for Bad {
            type Elem = u8;
            fn bottom(&self) -> u8 {
                0
            }
            fn top(&self) -> u8 {
                3
            }
            fn meet(&self, a: &u8, b: &u8) -> u8 {
                a.wrapping_sub(*b) & 3
            }
            fn join(&self, a: &u8, b: &u8) -> u8 {
                a | b
            }
            fn serialize(&self, a: &u8) -> String {
                a.to_string()
            }
        }
        assert!(spot_check_laws(&Bad, &[1, 2, 3]).is_err());
    }
}

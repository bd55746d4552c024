//! Nominal subtyping with interval type arguments.
//!
//! A generic class takes one argument, an interval `[lower, upper]` of
//! types. Subtyping between types and containment between intervals are
//! defined in terms of each other, so the pair is the simultaneous fixed
//! point of two monotone maps over powersets of relations:
//!
//! * `F(S)`: `[l1,u1] ⊆ [l2,u2]` when `u1 <: u2` and `l2 <: l1` hold in `S`;
//! * `G(R)`: `t1 <: t2` when the classes are related and, for two generic
//!   types, their arguments are contained in `R`. `Null` is below and
//!   `Object` above everything.
//!
//! Types are cut off at a nesting depth `k` to keep the universe finite.

use std::fmt;

use indexmap::{IndexMap, IndexSet};

use crate::bitset::BitSet;
use crate::solvers::implicit::{kleene_implicit, ImplicitLattice, ProductLattice, DEFAULT_BUDGET};
use crate::solvers::Direction;

use super::DemoError;

pub const OBJECT: &str = "Object";
pub const NULL: &str = "Null";
/// Default limit on the number of types in a universe.
pub const DEFAULT_TYPE_CAP: usize = 40;
pub const DEFAULT_DEPTH: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub generic: bool,
    /// `None` only for `Object` and `Null`.
    pub superclass: Option<String>,
}

impl ClassDecl {
    pub fn new(name: &str, generic: bool, superclass: &str) -> Self {
        ClassDecl {
            name: name.to_owned(),
            generic,
            superclass: Some(superclass.to_owned()),
        }
    }
}

/// Classes with their inheritance, always containing `Object` and `Null`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    names: Vec<String>,
    generic: Vec<bool>,
    /// `inherits[a][b]`: `a` equals `b` or transitively extends it.
    inherits: Vec<Vec<bool>>,
}

impl ClassTable {
    /// Builds a table from user declarations. `Object` and `Null` are added
    /// if absent; declaring them is allowed as long as they are plain
    /// non-generic roots.
    pub fn new(decls: &[ClassDecl]) -> Result<Self, DemoError> {
        let bad = |m: String| Err(DemoError::InvalidClassTable(m));
        let mut supers: IndexMap<String, (bool, Option<String>)> = IndexMap::new();
        supers.insert(OBJECT.into(), (false, None));
        supers.insert(NULL.into(), (false, None));
        for d in decls {
            if d.name == OBJECT || d.name == NULL {
                if d.generic || d.superclass.is_some() {
                    return bad(format!("{} is built in and cannot be generic or extend a class", d.name));
                }
                continue;
            }
            if d.name.is_empty() || d.name.contains(['<', '>', '[', ']', ',', ' ']) {
                return bad(format!("invalid class name `{}`", d.name));
            }
            let Some(sup) = &d.superclass else {
                return bad(format!("class {} has no superclass", d.name));
            };
            if supers.insert(d.name.clone(), (d.generic, Some(sup.clone()))).is_some() {
                return bad(format!("class {} declared twice", d.name));
            }
        }
        let n = supers.len();
        let mut inherits = vec![vec![false; n]; n];
        for (i, (name, _)) in supers.iter().enumerate() {
            let mut cur = i;
            let mut steps = 0;
            loop {
                inherits[i][cur] = true;
                let (_, sup) = &supers[cur];
                let Some(sup) = sup else { break };
                if sup == NULL {
                    return bad(format!("class {name} extends Null"));
                }
                cur = match supers.get_index_of(sup.as_str()) {
                    Some(j) => j,
                    None => return bad(format!("unknown superclass {sup} of {}", supers.get_index(cur).unwrap().0)),
                };
                steps += 1;
                if steps > n {
                    return bad(format!("inheritance cycle through {name}"));
                }
            }
            if cur != 0 && name != NULL {
                return bad(format!("class {name} does not reach Object"));
            }
        }
        Ok(ClassTable {
            names: supers.keys().cloned().collect(),
            generic: supers.values().map(|(g, _)| *g).collect(),
            inherits,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn is_generic(&self, c: usize) -> bool {
        self.generic[c]
    }

    pub fn object(&self) -> usize {
        0
    }

    pub fn null(&self) -> usize {
        1
    }

    /// `Null` is below and `Object` above every class; otherwise inheritance.
    pub fn is_subclass(&self, a: usize, b: usize) -> bool {
        a == self.null() || b == self.object() || self.inherits[a][b]
    }
}

/// A class applied to its argument, if generic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundType {
    pub class: usize,
    /// Interval id; present exactly when the class is generic.
    pub arg: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalType {
    pub lower: usize,
    pub upper: usize,
}

/// The depth-`k` types and intervals of a class table.
#[derive(Debug, Clone)]
pub struct Universe {
    pub table: ClassTable,
    pub depth: usize,
    types: IndexSet<GroundType>,
    intervals: IndexSet<IntervalType>,
}

impl Universe {
    /// `T0` holds the non-generic classes; `I_j` is every pair over `T_j`;
    /// `T_{j+1}` adds `C<i>` for generic `C` and `i ∈ I_j`. Returns `T_k`, `I_k`.
    pub fn build(table: ClassTable, depth: usize, cap: usize) -> Result<Self, DemoError> {
        let mut types: IndexSet<GroundType> = (0..table.len())
            .filter(|&c| !table.is_generic(c))
            .map(|class| GroundType { class, arg: None })
            .collect();
        let mut intervals: IndexSet<IntervalType> = IndexSet::new();
        let check = |n: usize| {
            if n > cap {
                Err(DemoError::UniverseCap { size: n, cap })
            } else {
                Ok(())
            }
        };
        check(types.len())?;
        let add_intervals = |types: &IndexSet<GroundType>, intervals: &mut IndexSet<IntervalType>| {
            for lower in 0..types.len() {
                for upper in 0..types.len() {
                    intervals.insert(IntervalType { lower, upper });
                }
            }
        };
        add_intervals(&types, &mut intervals);
        for _ in 0..depth {
            let before = types.len();
            for class in (0..table.len()).filter(|&c| table.is_generic(c)) {
                for arg in 0..intervals.len() {
                    types.insert(GroundType { class, arg: Some(arg) });
                    check(types.len())?;
                }
            }
            add_intervals(&types, &mut intervals);
            if types.len() == before {
                break;
            }
        }
        Ok(Universe {
            table,
            depth,
            types,
            intervals,
        })
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn ground(&self, t: usize) -> GroundType {
        self.types[t]
    }

    pub fn interval(&self, i: usize) -> IntervalType {
        self.intervals[i]
    }

    pub fn type_name(&self, t: usize) -> String {
        let g = self.types[t];
        let c = self.table.name(g.class);
        match g.arg {
            None => c.to_owned(),
            Some(i) => format!("{c}<{}>", self.interval_name(i)),
        }
    }

    pub fn interval_name(&self, i: usize) -> String {
        let iv = self.intervals[i];
        format!("[{},{}]", self.type_name(iv.lower), self.type_name(iv.upper))
    }

    pub fn type_id(&self, name: &str) -> Result<usize, DemoError> {
        let name: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        (0..self.type_count())
            .find(|&t| self.type_name(t) == name)
            .ok_or(DemoError::UnknownType(name))
    }

    pub fn interval_id(&self, name: &str) -> Result<usize, DemoError> {
        let name: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        (0..self.interval_count())
            .find(|&i| self.interval_name(i) == name)
            .ok_or(DemoError::UnknownType(name))
    }
}

/// The two relation generators over a fixed universe.
#[derive(Debug, Clone)]
pub struct SubtypeGenerators<'u> {
    pub universe: &'u Universe,
}

impl<'u> SubtypeGenerators<'u> {
    pub fn new(universe: &'u Universe) -> Self {
        SubtypeGenerators { universe }
    }

    /// Containment from subtyping: covariant in the upper bound,
    /// contravariant in the lower one.
    pub fn f(&self, s: &BitSet) -> BitSet {
        let u = self.universe;
        let (n, m) = (u.type_count(), u.interval_count());
        let mut r = BitSet::new(m * m);
        for a in 0..m {
            let ia = u.interval(a);
            for b in 0..m {
                let ib = u.interval(b);
                if s.contains(ia.upper * n + ib.upper) && s.contains(ib.lower * n + ia.lower) {
                    r.insert(a * m + b);
                }
            }
        }
        r
    }

    /// Subtyping from containment. Types of mixed arity relate only through
    /// `Null` and `Object`.
    pub fn g(&self, r: &BitSet) -> BitSet {
        let u = self.universe;
        let ct = &u.table;
        let (n, m) = (u.type_count(), u.interval_count());
        let mut s = BitSet::new(n * n);
        for a in 0..n {
            let ta = u.ground(a);
            for b in 0..n {
                let tb = u.ground(b);
                let holds = ta.class == ct.null()
                    || tb.class == ct.object()
                    || (ct.is_subclass(ta.class, tb.class)
                        && match (ta.arg, tb.arg) {
                            (None, None) => true,
                            (Some(i), Some(j)) => r.contains(i * m + j),
                            _ => false,
                        });
                if holds {
                    s.insert(a * n + b);
                }
            }
        }
        s
    }
}

/// Relations as bitsets, reported by size only in traces.
#[derive(Debug, Clone, Copy)]
struct RelationLattice {
    width: usize,
}

impl ImplicitLattice for RelationLattice {
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
        format!("#{}", a.count())
    }
}

/// Solved subtyping and containment relations.
#[derive(Debug, Clone)]
pub struct RelationPairState {
    pub universe: Universe,
    pub direction: Direction,
    pub subtypes: BitSet,
    pub containments: BitSet,
    pub iterations: usize,
}

impl RelationPairState {
    pub fn is_subtype(&self, t1: &str, t2: &str) -> Result<bool, DemoError> {
        let (a, b) = (self.universe.type_id(t1)?, self.universe.type_id(t2)?);
        Ok(self.subtypes.contains(a * self.universe.type_count() + b))
    }

    pub fn is_contained(&self, i1: &str, i2: &str) -> Result<bool, DemoError> {
        let (a, b) = (self.universe.interval_id(i1)?, self.universe.interval_id(i2)?);
        Ok(self.containments.contains(a * self.universe.interval_count() + b))
    }

    /// Subtype pairs as names, in universe order.
    pub fn subtype_pairs(&self) -> Vec<(String, String)> {
        let n = self.universe.type_count();
        self.subtypes
            .iter()
            .map(|x| (self.universe.type_name(x / n), self.universe.type_name(x % n)))
            .collect()
    }

    /// First violation of reflexivity or transitivity, if any.
    pub fn preorder_violation(&self) -> Option<String> {
        let n = self.universe.type_count();
        let s = |a: usize, b: usize| self.subtypes.contains(a * n + b);
        let name = |t| self.universe.type_name(t);
        if let Some(t) = (0..n).find(|&t| !s(t, t)) {
            return Some(format!("{} <: {} missing", name(t), name(t)));
        }
        for a in 0..n {
            for b in (0..n).filter(|&b| s(a, b)) {
                if let Some(c) = (0..n).find(|&c| s(b, c) && !s(a, c)) {
                    return Some(format!("{} <: {} <: {} but not {0} <: {2}", name(a), name(b), name(c)));
                }
            }
        }
        None
    }
}

impl fmt::Display for RelationPairState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = &self.universe;
        let dir = match self.direction {
            Direction::Least => "lfp",
            Direction::Greatest => "gfp",
        };
        writeln!(
            f,
            "{dir} at depth {}: {} types, {} intervals, {} iterations",
            u.depth,
            u.type_count(),
            u.interval_count(),
            self.iterations
        )?;
        writeln!(
            f,
            "subtype pairs: {}, containment pairs: {}",
            self.subtypes.count(),
            self.containments.count()
        )?;
        for (a, b) in self.subtype_pairs() {
            writeln!(f, "  {a} <: {b}")?;
        }
        Ok(())
    }
}

/// Kleene iteration of `(S, R) ↦ (G(R), F(S))`, up from empty relations for
/// the least solution and down from full ones for the greatest. The result
/// must be a preorder.
pub fn solve_subtyping(universe: Universe, direction: Direction) -> Result<RelationPairState, DemoError> {
    let gens = SubtypeGenerators::new(&universe);
    let (n, m) = (universe.type_count(), universe.interval_count());
    let lat = ProductLattice(RelationLattice { width: n * n }, RelationLattice { width: m * m });
    let out = kleene_implicit(&lat, |(s, r): &(BitSet, BitSet)| (gens.g(r), gens.f(s)), direction, DEFAULT_BUDGET)?;
    let (subtypes, containments) = out.limit;
    let state = RelationPairState {
        universe,
        direction,
        subtypes,
        containments,
        iterations: out.iterations,
    };
    if let Some(v) = state.preorder_violation() {
        return Err(DemoError::NotPreorder(v));
    }
    Ok(state)
}

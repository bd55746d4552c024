//! Least and greatest simultaneous fixed points, by three independent
//! routes, and the mutual induction / coinduction checks built on them.
//!
//! * `direct`: glb (lub) of the component sets of all simultaneous pre-
//!   (post-) fixed pairs.
//! * `product`: Kleene iteration of `H(o, p) = (G(p), F(o))` on `O × P`.
//! * `tarski`: materialize `O × P`, tabulate `H`, and take the glb of its
//!   pre-fixed points (lub of post-fixed points). Shares no code with the
//!   other two beyond the lattice tables.
//!
//! Only monotonicity is required of the generators; it is checked on entry.

pub mod implicit;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::genfun::{monotone_violation, EndoFn, Generator, MutualPair};
use crate::lattice::{product, FiniteLattice, LatticeError};
use crate::simpoints::{component_sets, is_sim_postfixed, is_sim_prefixed, PairPoint, ScanError};

use implicit::{kleene_observed, ProductLattice, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("NotMonotone: {generator} maps {lower} <= {upper} to incomparable or reversed images")]
    NotMonotone {
        generator: Generator,
        lower: String,
        upper: String,
    },
    #[error("NonTermination: no fixed point within {budget} iterations")]
    NonTermination { budget: usize },
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Direct,
    Product,
    Tarski,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Direct => "direct",
            Strategy::Product => "product",
            Strategy::Tarski => "tarski",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Least fixed points, iterating up from `⊥`.
    Least,
    /// Greatest fixed points, iterating down from `⊤`.
    Greatest,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Least => "least",
            Direction::Greatest => "greatest",
        })
    }
}

/// Tabulated or operation-only product lattice for the `product` strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Explicit,
    Implicit,
}

/// One extremal simultaneous fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremum {
    pub point: PairPoint,
    pub strategy: Strategy,
    pub direction: Direction,
    /// Distinct iterates from the starting point on; empty for non-iterative
    /// strategies.
    pub trace: Vec<PairPoint>,
    /// `H` applications for `product`; points scanned otherwise.
    pub iterations: usize,
}

/// Both extremal simultaneous fixed points from one strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub mu_f: usize,
    pub mu_g: usize,
    pub nu_f: usize,
    pub nu_g: usize,
    pub strategy: Strategy,
    pub least_trace: Vec<PairPoint>,
    pub greatest_trace: Vec<PairPoint>,
    pub iterations: usize,
}

impl SolveResult {
    pub fn least(&self) -> PairPoint {
        PairPoint::new(self.mu_f, self.mu_g)
    }

    pub fn greatest(&self) -> PairPoint {
        PairPoint::new(self.nu_f, self.nu_g)
    }
}

pub fn require_monotone(mp: &MutualPair) -> Result<(), SolveError> {
    for (generator, view) in [(Generator::F, mp.f_view()), (Generator::G, mp.g_view())] {
        if let Some((a, b)) = monotone_violation(view) {
            return Err(SolveError::NotMonotone {
                generator,
                lower: view.from.label(a).to_owned(),
                upper: view.from.label(b).to_owned(),
            });
        }
    }
    Ok(())
}

fn assert_sim_fixed(mp: &MutualPair, pt: PairPoint) {
    assert_eq!(mp.apply_f(pt.o), pt.p, "F(o) = p must hold at an extremal point");
    assert_eq!(mp.apply_g(pt.p), pt.o, "G(p) = o must hold at an extremal point");
}

fn direct(mp: &MutualPair, direction: Direction) -> Result<Extremum, SolveError> {
    require_monotone(mp)?;
    let cs = component_sets(mp)?;
    let (o, p) = (mp.dom_o(), mp.dom_p());
    let point = match direction {
        Direction::Least => PairPoint::new(o.meet_all(cs.c.iter()), p.meet_all(cs.d.iter())),
        Direction::Greatest => PairPoint::new(o.join_all(cs.e.iter()), p.join_all(cs.f.iter())),
    };
    assert_sim_fixed(mp, point);
    Ok(Extremum {
        point,
        strategy: Strategy::Direct,
        direction,
        trace: Vec::new(),
        iterations: o.size() * p.size(),
    })
}

/// `μ_F = ∧ℂ`, `μ_G = ⊓𝔻` over the pre-fixed component sets.
pub fn lsfp_direct(mp: &MutualPair) -> Result<Extremum, SolveError> {
    direct(mp, Direction::Least)
}

/// `ν_F = ∨𝔼`, `ν_G = ⊔𝔽` over the post-fixed component sets.
pub fn gsfp_direct(mp: &MutualPair) -> Result<Extremum, SolveError> {
    direct(mp, Direction::Greatest)
}

fn product_kleene(mp: &MutualPair, direction: Direction, engine: Engine) -> Result<Extremum, SolveError> {
    require_monotone(mp)?;
    let (lo, lp) = (mp.dom_o(), mp.dom_p());
    let h = |pt: PairPoint| PairPoint::new(mp.apply_g(pt.p), mp.apply_f(pt.o));
    let (trace, iterations) = match engine {
        Engine::Explicit => {
            let bound = lo.size() * lp.size();
            let mut cur = match direction {
                Direction::Least => PairPoint::new(lo.bottom(), lp.bottom()),
                Direction::Greatest => PairPoint::new(lo.top(), lp.top()),
            };
            let mut trace = vec![cur];
            let mut iterations = 0;
            loop {
                if iterations == bound {
                    return Err(SolveError::NonTermination { budget: bound });
                }
                let next = h(cur);
                iterations += 1;
                if next == cur {
                    break;
                }
                trace.push(next);
                cur = next;
            }
            (trace, iterations)
        }
        Engine::Implicit => {
            let lat = ProductLattice(lo, lp);
            let mut trace = Vec::new();
            let out = kleene_observed(
                &lat,
                |&(o, p): &(usize, usize)| (mp.apply_g(p), mp.apply_f(o)),
                direction,
                DEFAULT_BUDGET,
                |&(o, p)| trace.push(PairPoint::new(o, p)),
            )?;
            (trace, out.iterations)
        }
    };
    let point = *trace.last().expect("trace holds the starting point");
    assert_sim_fixed(mp, point);
    Ok(Extremum {
        point,
        strategy: Strategy::Product,
        direction,
        trace,
        iterations,
    })
}

/// Kleene iteration of `H` from `(⊥, ⊥)`.
pub fn lsfp_product(mp: &MutualPair, engine: Engine) -> Result<Extremum, SolveError> {
    product_kleene(mp, Direction::Least, engine)
}

/// Kleene iteration of `H` from `(⊤, ⊤)`.
pub fn gsfp_product(mp: &MutualPair, engine: Engine) -> Result<Extremum, SolveError> {
    product_kleene(mp, Direction::Greatest, engine)
}

/// Least pre-fixed point of a self-map by brute force: `∧{x | f(x) ≤ x}`.
pub fn standard_least_prefixed(f: &EndoFn) -> usize {
    let l = f.dom();
    l.meet_all(l.elements().filter(|&x| l.leq(f.apply(x), x)))
}

/// Greatest post-fixed point by brute force: `∨{x | x ≤ f(x)}`.
pub fn standard_greatest_postfixed(f: &EndoFn) -> usize {
    let l = f.dom();
    l.join_all(l.elements().filter(|&x| l.leq(x, f.apply(x))))
}

/// `H` tabulated over the materialized product `O × P`.
fn product_generator(mp: &MutualPair) -> Result<EndoFn, SolveError> {
    require_monotone(mp)?;
    let prod = product(mp.dom_o(), mp.dom_p())?;
    let np = mp.dom_p().size();
    let table = prod
        .elements()
        .map(|id| {
            let (o, p) = (id / np, id % np);
            mp.apply_g(p) * np + mp.apply_f(o)
        })
        .collect();
    Ok(EndoFn::new(Arc::new(prod), table).expect("H maps the product into itself"))
}

fn decode(mp: &MutualPair, id: usize) -> PairPoint {
    let np = mp.dom_p().size();
    PairPoint::new(id / np, id % np)
}

/// Independent oracle: glb of all pre-fixed points of `H` on `O × P`.
pub fn lsfp_tarski_oracle(mp: &MutualPair) -> Result<PairPoint, SolveError> {
    let h = product_generator(mp)?;
    Ok(decode(mp, standard_least_prefixed(&h)))
}

/// Independent oracle: lub of all post-fixed points of `H` on `O × P`.
pub fn gsfp_tarski_oracle(mp: &MutualPair) -> Result<PairPoint, SolveError> {
    let h = product_generator(mp)?;
    Ok(decode(mp, standard_greatest_postfixed(&h)))
}

fn tarski(mp: &MutualPair, direction: Direction) -> Result<Extremum, SolveError> {
    let point = match direction {
        Direction::Least => lsfp_tarski_oracle(mp)?,
        Direction::Greatest => gsfp_tarski_oracle(mp)?,
    };
    Ok(Extremum {
        point,
        strategy: Strategy::Tarski,
        direction,
        trace: Vec::new(),
        iterations: mp.dom_o().size() * mp.dom_p().size(),
    })
}

/// One extremal point by the chosen strategy (`product` uses the explicit
/// engine).
pub fn solve_one(mp: &MutualPair, strategy: Strategy, direction: Direction) -> Result<Extremum, SolveError> {
    match strategy {
        Strategy::Direct => direct(mp, direction),
        Strategy::Product => product_kleene(mp, direction, Engine::Explicit),
        Strategy::Tarski => tarski(mp, direction),
    }
}

/// Least and greatest simultaneous fixed points by one strategy.
pub fn solve(mp: &MutualPair, strategy: Strategy) -> Result<SolveResult, SolveError> {
    let least = solve_one(mp, strategy, Direction::Least)?;
    let greatest = solve_one(mp, strategy, Direction::Greatest)?;
    Ok(SolveResult {
        mu_f: least.point.o,
        mu_g: least.point.p,
        nu_f: greatest.point.o,
        nu_g: greatest.point.p,
        strategy,
        iterations: least.iterations + greatest.iterations,
        least_trace: least.trace,
        greatest_trace: greatest.trace,
    })
}

/// Outcome of applying a proof principle to a candidate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// The pair does not meet the principle's hypothesis.
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "Pass",
            Verdict::Fail => "Fail",
            Verdict::NotApplicable => "NotApplicable",
        })
    }
}

/// Mutual induction: a simultaneous pre-fixed pair dominates `(μ_F, μ_G)`.
pub fn check_mutual_induction(mp: &MutualPair, pt: PairPoint) -> Result<Verdict, SolveError> {
    if !is_sim_prefixed(mp, pt) {
        return Ok(Verdict::NotApplicable);
    }
    let mu = lsfp_direct(mp)?.point;
    let holds = mp.dom_o().leq(mu.o, pt.o) && mp.dom_p().leq(mu.p, pt.p);
    Ok(if holds { Verdict::Pass } else { Verdict::Fail })
}

/// Mutual coinduction: a simultaneous post-fixed pair lies below `(ν_F, ν_G)`.
pub fn check_mutual_coinduction(mp: &MutualPair, pt: PairPoint) -> Result<Verdict, SolveError> {
    if !is_sim_postfixed(mp, pt) {
        return Ok(Verdict::NotApplicable);
    }
    let nu = gsfp_direct(mp)?.point;
    let holds = mp.dom_o().leq(pt.o, nu.o) && mp.dom_p().leq(pt.p, nu.p);
    Ok(if holds { Verdict::Pass } else { Verdict::Fail })
}

/// Standard (co)induction as the special case `O = P`, `F = f`, `G = id`.
pub fn standard_embed(f: &EndoFn) -> MutualPair {
    let dom: Arc<FiniteLattice> = Arc::clone(f.dom());
    let id = dom.elements().collect();
    MutualPair::new(Arc::clone(&dom), dom, f.table().to_vec(), id).expect("tables are total over one lattice")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::diamond;
    use crate::lattice::chain;

    fn c(n: usize) -> Arc<FiniteLattice> {
        Arc::new(chain(n).unwrap())
    }

    fn id2() -> MutualPair {
        MutualPair::new(c(2), c(2), vec![0, 1], vec![0, 1]).unwrap()
    }

    fn k1() -> MutualPair {
        MutualPair::new(c(2), c(2), vec![0, 1], vec![1, 1]).unwrap()
    }

    fn swap() -> MutualPair {
        let d = Arc::new(diamond());
        MutualPair::new(d.clone(), d, vec![0, 2, 1, 3], vec![0, 2, 1, 3]).unwrap()
    }

    fn pt(o: usize, p: usize) -> PairPoint {
        PairPoint::new(o, p)
    }

    #[test]
    fn direct_examples() {
        assert_eq!(lsfp_direct(&id2()).unwrap().point, pt(0, 0));
        assert_eq!(lsfp_direct(&k1()).unwrap().point, pt(1, 1));
        assert_eq!(lsfp_direct(&swap()).unwrap().point, pt(0, 0));
        assert_eq!(gsfp_direct(&id2()).unwrap().point, pt(1, 1));
        assert_eq!(gsfp_direct(&k1()).unwrap().point, pt(1, 1));
        assert_eq!(gsfp_direct(&swap()).unwrap().point, pt(3, 3));
    }

    #[test]
    fn product_examples() {
        for engine in [Engine::Explicit, Engine::Implicit] {
            let r = lsfp_product(&id2(), engine).unwrap();
            assert_eq!((r.point, r.iterations, r.trace.clone()), (pt(0, 0), 1, vec![pt(0, 0)]));

            let r = lsfp_product(&k1(), engine).unwrap();
            assert_eq!(r.trace, vec![pt(0, 0), pt(1, 0), pt(1, 1)]);
            assert_eq!(r.iterations, 3);

            assert_eq!(lsfp_product(&swap(), engine).unwrap().trace, vec![pt(0, 0)]);
            assert_eq!(gsfp_product(&id2(), engine).unwrap().point, pt(1, 1));
            let r = gsfp_product(&k1(), engine).unwrap();
            assert_eq!((r.point, r.iterations), (pt(1, 1), 1));
            assert_eq!(gsfp_product(&swap(), engine).unwrap().point, pt(3, 3));
        }
    }

    #[test]
    fn tarski_examples() {
        assert_eq!(lsfp_tarski_oracle(&id2()).unwrap(), pt(0, 0));
        assert_eq!(lsfp_tarski_oracle(&k1()).unwrap(), pt(1, 1));
        assert_eq!(gsfp_tarski_oracle(&swap()).unwrap(), pt(3, 3));
    }

    #[test]
    fn not_monotone_is_rejected() {
        let mp = MutualPair::new(c(2), c(2), vec![1, 0], vec![0, 1]).unwrap();
        let err = lsfp_direct(&mp).unwrap_err();
        assert_eq!(
            err,
            SolveError::NotMonotone {
                generator: Generator::F,
                lower: "0".into(),
                upper: "1".into()
            }
        );
        assert!(lsfp_product(&mp, Engine::Explicit).is_err());
        assert!(lsfp_tarski_oracle(&mp).is_err());
    }

    #[test]
    fn induction_examples() {
        assert_eq!(check_mutual_induction(&id2(), pt(1, 1)).unwrap(), Verdict::Pass);
        assert_eq!(check_mutual_induction(&k1(), pt(1, 1)).unwrap(), Verdict::Pass);
        assert_eq!(check_mutual_induction(&k1(), pt(0, 1)).unwrap(), Verdict::NotApplicable);
        for mp in [id2(), k1(), swap()] {
            assert_eq!(check_mutual_coinduction(&mp, pt(0, 0)).unwrap(), Verdict::Pass);
        }
        assert_eq!(check_mutual_coinduction(&k1(), pt(1, 0)).unwrap(), Verdict::Pass);
        assert_eq!(check_mutual_coinduction(&id2(), pt(1, 0)).unwrap(), Verdict::NotApplicable);
    }

    #[test]
    fn embedding_examples() {
        let cases: [(Arc<FiniteLattice>, Vec<usize>, usize); 3] = [
            (c(2), vec![0, 1], 0),
            (c(2), vec![1, 1], 1),
            (c(3), vec![1, 1, 2], 1),
        ];
        for (lat, table, expected) in cases {
            let f = EndoFn::new(lat, table).unwrap();
            assert_eq!(standard_least_prefixed(&f), expected);
            let mp = standard_embed(&f);
            assert_eq!(lsfp_direct(&mp).unwrap().point, pt(expected, expected));
        }
    }

    #[test]
    fn solve_collects_both_directions() {
        let r = solve(&k1(), Strategy::Product).unwrap();
        assert_eq!((r.mu_f, r.mu_g, r.nu_f, r.nu_g), (1, 1, 1, 1));
        assert_eq!(r.iterations, 4);
        assert_eq!(r.least_trace.len(), 3);
    }
}

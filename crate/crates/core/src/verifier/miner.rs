//! Bounded search for counterexamples to three open questions about
//! monotone but not necessarily continuous generators.
//!
//! Small lattices are searched exhaustively (every monotone pair of tables),
//! then an optional seeded random phase covers larger ones. Any hit is
//! re-checked with a separate brute-force scan before it is reported.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::fixtures::{all_small_lattices, EXHAUSTIVE_LATTICE_MAX};
use crate::genfun::{is_continuous_pair, is_monotone_pair, ContinuityMode, MutualPair};
use crate::lattice::FiniteLattice;
use crate::simpoints::{component_sets, enumerate_sim_prefixed, prefp_fiber, Side};

use super::gen::{gen_lattice, gen_monotone_pair, instance_seed, rng_for, GenError, LatticeFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Question {
    /// A nonempty pre-fixed fiber that is not a complete sublattice, for a
    /// monotone pair that is not continuous.
    Q1,
    /// A pre-fixed point of `G∘F` that is not the `O`-part of any
    /// simultaneous pre-fixed pair.
    Q2,
    /// A pre-fixed component set `ℂ` that is not a complete sublattice.
    Q3,
}

impl Question {
    pub const ALL: [Question; 3] = [Question::Q1, Question::Q2, Question::Q3];

    pub fn description(self) -> &'static str {
        match self {
            Question::Q1 => "non-closed nonempty pre-fixed fiber of a monotone, non-continuous pair",
            Question::Q2 => "pre-fixed point of G.F outside the pre-fixed component set C",
            Question::Q3 => "pre-fixed component set C that is not a complete sublattice",
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Question {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        Question::ALL
            .into_iter()
            .find(|q| q.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| GenError::InvalidSpec(format!("unknown question `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MineSpec {
    /// Largest lattice size searched; the exhaustive phase stops at 5.
    pub max_size: usize,
    /// Total instances (exhaustive plus random) the search may examine.
    pub budget: usize,
    /// Random instances tried after the exhaustive phase.
    pub random: usize,
    pub seed: u64,
    pub mode: ContinuityMode,
}

impl MineSpec {
    pub fn new(max_size: usize) -> Self {
        MineSpec {
            max_size,
            budget: 1_000_000,
            random: 0,
            seed: 0,
            mode: ContinuityMode::BinaryReduction,
        }
    }
}

/// What a hit looks like before re-validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Fiber { side: Side, anchor: usize, members: BitSet },
    Orphan { o: usize },
    ComponentSet { c: BitSet },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub pair: MutualPair,
    pub witness: Witness,
}

impl Counterexample {
    pub fn explain(&self) -> String {
        let (o, p) = (self.pair.dom_o(), self.pair.dom_p());
        let names = |l: &FiniteLattice, s: &BitSet| s.iter().map(|x| l.label(x).to_owned()).collect::<Vec<_>>().join(",");
        match &self.witness {
            Witness::Fiber { side: Side::O, anchor, members } => {
                format!("PreFP({}) = {{{}}} is not closed in P", o.label(*anchor), names(p, members))
            }
            Witness::Fiber { side: Side::P, anchor, members } => {
                format!("PreFP({}) = {{{}}} is not closed in O", p.label(*anchor), names(o, members))
            }
            Witness::Orphan { o: x } => format!("G(F({0})) <= {0} but no p pairs with {0}", o.label(*x)),
            Witness::ComponentSet { c } => format!("C = {{{}}} is not closed in O", names(o, c)),
        }
    }
}

/// Outcome of one question's search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub question: Question,
    pub instances_tried: usize,
    /// Largest size `s` such that every lattice pair of size at most `s` was
    /// searched completely.
    pub exhaustive_up_to: Option<usize>,
    pub random_tried: usize,
    pub budget_exhausted: bool,
    pub counterexample: Option<Counterexample>,
    /// Candidate hits that the independent re-check rejected.
    pub rejected_hits: usize,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "question {}: {}", self.question, self.question.description())?;
        match &self.counterexample {
            Some(cx) => {
                writeln!(f, "found after {} instances", self.instances_tried)?;
                writeln!(f, "instance: {}", cx.pair.describe())?;
                write!(f, "witness: {}", cx.explain())
            }
            None if self.budget_exhausted || self.exhaustive_up_to.is_none() => {
                write!(f, "none found, {} instances tried", self.instances_tried)?;
                if let Some(s) = self.exhaustive_up_to {
                    write!(f, " (exhaustive up to size {s})")?;
                }
                Ok(())
            }
            None => {
                write!(
                    f,
                    "none found (exhaustive up to size {})",
                    self.exhaustive_up_to.expect("checked above")
                )?;
                if self.random_tried > 0 {
                    write!(f, ", plus {} random instances", self.random_tried)?;
                }
                Ok(())
            }
        }
    }
}

/// Every monotone table `from → to`, in lexicographic order of the table
/// read along a fixed linear extension.
pub fn monotone_maps(from: &FiniteLattice, to: &FiniteLattice) -> Vec<Vec<usize>> {
    let order = from.poset().linear_extension();
    let mut out = Vec::new();
    let mut table = vec![usize::MAX; from.size()];
    fn go(
        k: usize,
        order: &[usize],
        from: &FiniteLattice,
        to: &FiniteLattice,
        table: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == order.len() {
            out.push(table.clone());
            return;
        }
        let x = order[k];
        let floor = to.join_all(from.poset().down_set(x).iter().filter(|&y| y != x).map(|y| table[y]));
        for v in to.poset().up_set(floor).iter() {
            table[x] = v;
            go(k + 1, order, from, to, table, out);
        }
        table[x] = usize::MAX;
    }
    go(0, &order, from, to, &mut table, &mut out);
    out
}

/// Fast search on one pair.
pub fn search(question: Question, mp: &MutualPair, mode: ContinuityMode) -> Option<Witness> {
    match question {
        Question::Q1 => {
            if is_continuous_pair(mp, mode) {
                return None;
            }
            let o_side = mp.dom_o().elements().map(|o| (prefp_fiber(mp, o, Side::O), mp.dom_p()));
            let p_side = mp.dom_p().elements().map(|p| (prefp_fiber(mp, p, Side::P), mp.dom_o()));
            o_side
                .chain(p_side)
                .find(|(fb, lat)| !fb.is_empty() && !lat.is_closed(&fb.members))
                .map(|(fb, _)| Witness::Fiber {
                    side: fb.side,
                    anchor: fb.anchor,
                    members: fb.members,
                })
        }
        Question::Q2 => {
            let o = mp.dom_o();
            let gf = mp.compose_gf();
            o.elements()
                .filter(|&x| o.leq(gf.apply(x), x))
                .find(|&x| prefp_fiber(mp, x, Side::O).is_empty())
                .map(|x| Witness::Orphan { o: x })
        }
        Question::Q3 => {
            let cs = component_sets(mp).ok()?;
            (!mp.dom_o().is_closed(&cs.c)).then_some(Witness::ComponentSet { c: cs.c })
        }
    }
}

/// Closure by brute force: every nonempty subset's meet and join stay inside.
fn closed_exhaustive(l: &FiniteLattice, s: &BitSet) -> bool {
    let ids: Vec<usize> = s.iter().collect();
    if ids.is_empty() || ids.len() > 20 {
        return !ids.is_empty() && l.is_closed(s);
    }
    (1u32..(1u32 << ids.len())).all(|mask| {
        let pick = ids.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &x)| x);
        s.contains(l.meet_all(pick.clone())) && s.contains(l.join_all(pick))
    })
}

/// Independent re-check of a hit from a fresh pair scan.
pub fn revalidate(question: Question, mp: &MutualPair, witness: &Witness, mode: ContinuityMode) -> bool {
    if !is_monotone_pair(mp) {
        return false;
    }
    let Ok(pre) = enumerate_sim_prefixed(mp) else {
        return false;
    };
    let (o, p) = (mp.dom_o(), mp.dom_p());
    match (question, witness) {
        (Question::Q1, Witness::Fiber { side, anchor, members }) => {
            let (lat, fresh) = match side {
                Side::O => (p, BitSet::from_ids(p.size(), pre.iter().filter(|pt| pt.o == *anchor).map(|pt| pt.p))),
                Side::P => (o, BitSet::from_ids(o.size(), pre.iter().filter(|pt| pt.p == *anchor).map(|pt| pt.o))),
            };
            !is_continuous_pair(mp, mode) && fresh == *members && !fresh.is_empty() && !closed_exhaustive(lat, &fresh)
        }
        (Question::Q2, Witness::Orphan { o: x }) => {
            o.leq(mp.apply_g(mp.apply_f(*x)), *x) && pre.iter().all(|pt| pt.o != *x)
        }
        (Question::Q3, Witness::ComponentSet { c }) => {
            let fresh = BitSet::from_ids(o.size(), pre.iter().map(|pt| pt.o));
            fresh == *c && !closed_exhaustive(o, &fresh)
        }
        _ => false,
    }
}

/// Searches for a counterexample to `question` within the spec's bounds.
pub fn mine_counterexample(question: Question, spec: &MineSpec) -> Finding {
    let mut finding = Finding {
        question,
        instances_tried: 0,
        exhaustive_up_to: None,
        random_tried: 0,
        budget_exhausted: false,
        counterexample: None,
        rejected_hits: 0,
    };
    let try_pair = |mp: MutualPair, finding: &mut Finding| -> bool {
        finding.instances_tried += 1;
        if let Some(w) = search(question, &mp, spec.mode) {
            if revalidate(question, &mp, &w, spec.mode) {
                finding.counterexample = Some(Counterexample { pair: mp, witness: w });
                return true;
            }
            finding.rejected_hits += 1;
        }
        false
    };

    let exhaustive_max = spec.max_size.min(EXHAUSTIVE_LATTICE_MAX);
    let lattices: Vec<Arc<FiniteLattice>> = all_small_lattices(exhaustive_max)
        .into_iter()
        .map(|(_, l)| Arc::new(l))
        .collect();
    'sizes: for s in 1..=exhaustive_max {
        for lo in &lattices {
            for lp in &lattices {
                if lo.size().max(lp.size()) != s {
                    continue;
                }
                let fs = monotone_maps(lo, lp);
                let gs = monotone_maps(lp, lo);
                for f in &fs {
                    for g in &gs {
                        if finding.instances_tried >= spec.budget {
                            finding.budget_exhausted = true;
                            break 'sizes;
                        }
                        let mp = MutualPair::new(Arc::clone(lo), Arc::clone(lp), f.clone(), g.clone())
                            .expect("enumerated tables are total");
                        if try_pair(mp, &mut finding) {
                            return finding;
                        }
                    }
                }
            }
        }
        finding.exhaustive_up_to = Some(s);
    }

    if finding.budget_exhausted || spec.max_size < 2 {
        return finding;
    }
    for i in 0..spec.random {
        if finding.instances_tried >= spec.budget {
            finding.budget_exhausted = true;
            break;
        }
        let mut rng = rng_for(instance_seed(spec.seed, i as u64));
        let pick = |rng: &mut _| {
            gen_lattice(LatticeFamily::Mixed, 2, spec.max_size, rng).map(Arc::new)
        };
        let (Ok(lo), Ok(lp)) = (pick(&mut rng), pick(&mut rng)) else {
            continue;
        };
        let mp = gen_monotone_pair(lo, lp, &mut rng);
        finding.random_tried += 1;
        if try_pair(mp, &mut finding) {
            return finding;
        }
    }
    finding
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::chain;

    #[test]
    fn monotone_map_counts() {
        let c2 = chain(2).unwrap();
        let c3 = chain(3).unwrap();
        assert_eq!(monotone_maps(&c2, &c2).len(), 3);
        // Monotone maps between chains: C(m+n-1, n).
        assert_eq!(monotone_maps(&c3, &c3).len(), 10);
        assert_eq!(monotone_maps(&chain(5).unwrap(), &chain(5).unwrap()).len(), 126);
        let d4 = fixtures::diamond();
        // Monotone self-maps of the 2x2 grid, counted by hand.
        let by_brute = (0..256usize)
            .filter(|code| {
                let t: Vec<usize> = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
                (0..4).all(|a| (0..4).all(|b| !d4.leq(a, b) || d4.leq(t[a], t[b])))
            })
            .count();
        assert_eq!(monotone_maps(&d4, &d4).len(), by_brute);
    }

    #[test]
    fn q2_on_c2_is_exhausted_quickly() {
        let f = mine_counterexample(Question::Q2, &MineSpec::new(2));
        assert!(f.counterexample.is_none());
        assert_eq!(f.exhaustive_up_to, Some(2));
        assert!(f.to_string().ends_with("none found (exhaustive up to size 2)"));
    }

    #[test]
    fn zero_budget() {
        let spec = MineSpec {
            budget: 0,
            ..MineSpec::new(3)
        };
        let f = mine_counterexample(Question::Q1, &spec);
        assert_eq!(f.instances_tried, 0);
        assert!(f.to_string().ends_with("none found, 0 instances tried"));
    }

    #[test]
    fn revalidation_rejects_fabricated_hits() {
        let c2 = Arc::new(chain(2).unwrap());
        let mp = MutualPair::new(c2.clone(), c2, vec![0, 1], vec![0, 1]).unwrap();
        assert!(!revalidate(Question::Q2, &mp, &Witness::Orphan { o: 0 }, ContinuityMode::BinaryReduction));
        let c = BitSet::from_ids(2, [1]);
        assert!(!revalidate(Question::Q3, &mp, &Witness::ComponentSet { c }, ContinuityMode::BinaryReduction));
    }

    #[test]
    fn questions_parse() {
        assert_eq!("q3".parse::<Question>().unwrap(), Question::Q3);
        assert!("Q4".parse::<Question>().is_err());
    }
}

//! Executable forms of the structural lemmas and the existence theorem,
//! checked over seeded random instances.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::genfun::{is_continuous, is_continuous_pair, is_monotone, is_monotone_pair, monotone_violation, ContinuityMode, MutualPair};
use crate::lattice::FiniteLattice;
use crate::simpoints::{
    component_sets, enumerate_sim_fixed, enumerate_sim_postfixed, enumerate_sim_prefixed, is_sim_fixed,
    is_sim_postfixed, is_sim_prefixed, postfp_fiber, prefp_fiber, FiberSet, PairPoint, Side,
};
use crate::solvers::{
    gsfp_direct, gsfp_product, gsfp_tarski_oracle, lsfp_direct, lsfp_product, lsfp_tarski_oracle, Engine,
};

use super::gen::{gen_instance, FunctionClass, GenError, InstanceGenSpec};

/// Lattices above this size get the interval-only sublattice check in L4.
const SUBSET_ENUM_MAX: usize = 12;

/// Failures kept verbatim in a report; the rest are only counted.
const REPORTED_FAILURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    L7,
    Sfp,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        LemmaId::L1,
        LemmaId::L2,
        LemmaId::L3,
        LemmaId::L4,
        LemmaId::L5,
        LemmaId::L6,
        LemmaId::L7,
        LemmaId::Sfp,
    ];

    pub fn title(self) -> &'static str {
        match self {
            LemmaId::L1 => "continuous generators are monotone",
            LemmaId::L2 => "compositions inherit monotonicity and continuity",
            LemmaId::L3 => "simultaneous points project to standard points of G.F and F.G",
            LemmaId::L4 => "continuous images of complete sublattices are complete sublattices",
            LemmaId::L5 => "nonempty fibers are complete sublattices with extremum F(o) or G(p)",
            LemmaId::L6 => "component sets are complete sublattices containing the right bound",
            LemmaId::L7 => "simultaneous points are closed under componentwise meets and joins",
            LemmaId::Sfp => "least and greatest simultaneous fixed points exist and agree",
        }
    }

    /// What the premise asks of the generators.
    pub fn premise(self) -> FunctionClass {
        match self {
            LemmaId::L1 | LemmaId::L4 | LemmaId::L5 | LemmaId::L6 => FunctionClass::Continuous,
            LemmaId::L2 | LemmaId::L3 | LemmaId::L7 | LemmaId::Sfp => FunctionClass::Monotone,
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaId::Sfp => f.write_str("SFP"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl FromStr for LemmaId {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| GenError::InvalidSpec(format!("unknown lemma `{s}`")))
    }
}

/// Whether `mp` satisfies the premise of `lemma`.
pub fn premise_holds(lemma: LemmaId, mp: &MutualPair, mode: ContinuityMode) -> bool {
    match lemma.premise() {
        FunctionClass::Continuous => is_continuous_pair(mp, mode),
        FunctionClass::Monotone => is_monotone_pair(mp),
        FunctionClass::Arbitrary => true,
    }
}

fn lab(l: &FiniteLattice, x: usize) -> &str {
    l.label(x)
}

fn set_labels(l: &FiniteLattice, s: &BitSet) -> String {
    let names: Vec<&str> = s.iter().map(|x| l.label(x)).collect();
    format!("{{{}}}", names.join(","))
}

fn pair_labels(mp: &MutualPair, pt: PairPoint) -> String {
    format!("({},{})", lab(mp.dom_o(), pt.o), lab(mp.dom_p(), pt.p))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_l1(mp: &MutualPair) -> Result<(), String> {
    for (name, view) in [("F", mp.f_view()), ("G", mp.g_view())] {
        if let Some((a, b)) = monotone_violation(view) {
            return Err(format!(
                "{name} not monotone: {} <= {} but images {} and {}",
                lab(view.from, a),
                lab(view.from, b),
                lab(view.to, view.apply(a)),
                lab(view.to, view.apply(b))
            ));
        }
    }
    Ok(())
}

fn check_l2(mp: &MutualPair, mode: ContinuityMode) -> Result<(), String> {
    let gf = mp.compose_gf();
    let fg = mp.compose_fg();
    ensure(is_monotone(gf.view()), || "G.F not monotone".into())?;
    ensure(is_monotone(fg.view()), || "F.G not monotone".into())?;
    if is_continuous_pair(mp, mode) {
        ensure(is_continuous(gf.view(), mode), || "G.F not continuous".into())?;
        ensure(is_continuous(fg.view(), mode), || "F.G not continuous".into())?;
    }
    Ok(())
}

fn check_l3(mp: &MutualPair) -> Result<(), String> {
    let (o, p) = (mp.dom_o(), mp.dom_p());
    let gf = mp.compose_gf();
    let fg = mp.compose_fg();
    for x in o.elements() {
        for y in p.elements() {
            let pt = PairPoint::new(x, y);
            let (gfx, fgy) = (gf.apply(x), fg.apply(y));
            if is_sim_prefixed(mp, pt) {
                ensure(o.leq(gfx, x) && p.leq(fgy, y), || {
                    format!("pre-fixed {} does not project to pre-fixed points", pair_labels(mp, pt))
                })?;
            }
            if is_sim_postfixed(mp, pt) {
                ensure(o.leq(x, gfx) && p.leq(y, fgy), || {
                    format!("post-fixed {} does not project to post-fixed points", pair_labels(mp, pt))
                })?;
            }
            if is_sim_fixed(mp, pt) {
                ensure(gfx == x && fgy == y, || {
                    format!("fixed {} does not project to fixed points", pair_labels(mp, pt))
                })?;
            }
        }
    }
    Ok(())
}

/// Complete sublattices of `l`: all of them for small lattices, intervals
/// otherwise.
fn complete_sublattices(l: &FiniteLattice) -> Vec<BitSet> {
    let n = l.size();
    if n <= SUBSET_ENUM_MAX {
        (1u64..(1u64 << n))
            .map(|mask| BitSet::from_ids(n, (0..n).filter(|i| mask & (1 << i) != 0)))
            .filter(|s| l.is_closed(s))
            .collect()
    } else {
        let mut out = Vec::new();
        for a in l.elements() {
            for b in l.poset().up_set(a).iter() {
                out.push(l.poset().up_set(a).intersection(l.poset().down_set(b)));
            }
        }
        out
    }
}

fn check_l4(mp: &MutualPair) -> Result<(), String> {
    for (name, from, to, table) in [
        ("F", mp.dom_o(), mp.dom_p(), mp.f_table()),
        ("G", mp.dom_p(), mp.dom_o(), mp.g_table()),
    ] {
        for m in complete_sublattices(from) {
            let image = BitSet::from_ids(to.size(), m.iter().map(|x| table[x]));
            ensure(to.is_closed(&image), || {
                format!(
                    "{name} maps {} to {}, which is not closed",
                    set_labels(from, &m),
                    set_labels(to, &image)
                )
            })?;
        }
    }
    Ok(())
}

fn check_fiber(mp: &MutualPair, fiber: &FiberSet, expected: usize) -> Result<(), String> {
    if fiber.is_empty() {
        return Ok(());
    }
    let (anchor_lat, member_lat) = match fiber.side {
        Side::O => (mp.dom_o(), mp.dom_p()),
        Side::P => (mp.dom_p(), mp.dom_o()),
    };
    let what = || {
        format!(
            "{:?} fiber of {} = {}",
            fiber.kind,
            lab(anchor_lat, fiber.anchor),
            set_labels(member_lat, &fiber.members)
        )
    };
    ensure(member_lat.is_closed(&fiber.members), || format!("{} is not closed", what()))?;
    let extremum = match fiber.kind {
        crate::simpoints::FiberKind::Pre => member_lat.meet_all(fiber.members.iter()),
        crate::simpoints::FiberKind::Post => member_lat.join_all(fiber.members.iter()),
    };
    ensure(extremum == expected, || {
        format!(
            "{} has extremum {}, expected {}",
            what(),
            lab(member_lat, extremum),
            lab(member_lat, expected)
        )
    })
}

fn check_l5(mp: &MutualPair) -> Result<(), String> {
    for o in mp.dom_o().elements() {
        check_fiber(mp, &prefp_fiber(mp, o, Side::O), mp.apply_f(o))?;
        check_fiber(mp, &postfp_fiber(mp, o, Side::O), mp.apply_f(o))?;
    }
    for p in mp.dom_p().elements() {
        check_fiber(mp, &prefp_fiber(mp, p, Side::P), mp.apply_g(p))?;
        check_fiber(mp, &postfp_fiber(mp, p, Side::P), mp.apply_g(p))?;
    }
    Ok(())
}

fn check_l6(mp: &MutualPair) -> Result<(), String> {
    let cs = component_sets(mp).map_err(|e| e.to_string())?;
    let (o, p) = (mp.dom_o(), mp.dom_p());
    for (name, lat, set, bound) in [
        ("C", o, &cs.c, o.top()),
        ("D", p, &cs.d, p.top()),
        ("E", o, &cs.e, o.bottom()),
        ("F", p, &cs.f, p.bottom()),
    ] {
        ensure(lat.is_closed(set), || format!("{name} = {} is not closed", set_labels(lat, set)))?;
        ensure(set.contains(bound), || {
            format!("{name} = {} misses {}", set_labels(lat, set), lab(lat, bound))
        })?;
    }
    Ok(())
}

fn check_l7(mp: &MutualPair) -> Result<(), String> {
    let (o, p) = (mp.dom_o(), mp.dom_p());
    let pre = enumerate_sim_prefixed(mp).map_err(|e| e.to_string())?;
    for (i, a) in pre.iter().enumerate() {
        for b in &pre[i + 1..] {
            let m = PairPoint::new(o.meet(a.o, b.o), p.meet(a.p, b.p));
            ensure(is_sim_prefixed(mp, m), || {
                format!(
                    "meet of pre-fixed {} and {} is {}, not pre-fixed",
                    pair_labels(mp, *a),
                    pair_labels(mp, *b),
                    pair_labels(mp, m)
                )
            })?;
        }
    }
    let post = enumerate_sim_postfixed(mp).map_err(|e| e.to_string())?;
    for (i, a) in post.iter().enumerate() {
        for b in &post[i + 1..] {
            let j = PairPoint::new(o.join(a.o, b.o), p.join(a.p, b.p));
            ensure(is_sim_postfixed(mp, j), || {
                format!(
                    "join of post-fixed {} and {} is {}, not post-fixed",
                    pair_labels(mp, *a),
                    pair_labels(mp, *b),
                    pair_labels(mp, j)
                )
            })?;
        }
    }
    Ok(())
}

fn check_sfp(mp: &MutualPair) -> Result<(), String> {
    let (o, p) = (mp.dom_o(), mp.dom_p());
    let err = |e: crate::solvers::SolveError| e.to_string();
    let mu = lsfp_direct(mp).map_err(err)?.point;
    let nu = gsfp_direct(mp).map_err(err)?.point;
    let others = [
        ("product", lsfp_product(mp, Engine::Explicit).map_err(err)?.point, gsfp_product(mp, Engine::Explicit).map_err(err)?.point),
        ("product-implicit", lsfp_product(mp, Engine::Implicit).map_err(err)?.point, gsfp_product(mp, Engine::Implicit).map_err(err)?.point),
        ("tarski", lsfp_tarski_oracle(mp).map_err(err)?, gsfp_tarski_oracle(mp).map_err(err)?),
    ];
    for (name, least, greatest) in others {
        ensure(least == mu && greatest == nu, || {
            format!(
                "{name} gives {} / {}, direct gives {} / {}",
                pair_labels(mp, least),
                pair_labels(mp, greatest),
                pair_labels(mp, mu),
                pair_labels(mp, nu)
            )
        })?;
    }
    for pt in [mu, nu] {
        ensure(is_sim_fixed(mp, pt), || format!("{} is not fixed", pair_labels(mp, pt)))?;
    }
    ensure(o.leq(mu.o, nu.o) && p.leq(mu.p, nu.p), || "least point is not below greatest".into())?;
    for pt in enumerate_sim_prefixed(mp).map_err(|e| e.to_string())? {
        ensure(o.leq(mu.o, pt.o) && p.leq(mu.p, pt.p), || {
            format!("pre-fixed {} is not above the least point", pair_labels(mp, pt))
        })?;
        // The step used to show minimality: G(μ_G) and F(μ_F) are lower bounds.
        ensure(o.leq(mp.apply_g(mu.p), pt.o) && p.leq(mp.apply_f(mu.o), pt.p), || {
            format!("images of the least point are not below {}", pair_labels(mp, pt))
        })?;
    }
    for pt in enumerate_sim_postfixed(mp).map_err(|e| e.to_string())? {
        ensure(o.leq(pt.o, nu.o) && p.leq(pt.p, nu.p), || {
            format!("post-fixed {} is not below the greatest point", pair_labels(mp, pt))
        })?;
    }
    for pt in enumerate_sim_fixed(mp).map_err(|e| e.to_string())? {
        ensure(o.leq(mu.o, pt.o) && o.leq(pt.o, nu.o), || {
            format!("fixed {} lies outside [least, greatest]", pair_labels(mp, pt))
        })?;
    }
    Ok(())
}

/// The lemma's conclusion on one instance; `Err` carries a witness.
pub fn check_conclusion(lemma: LemmaId, mp: &MutualPair, mode: ContinuityMode) -> Result<(), String> {
    match lemma {
        LemmaId::L1 => check_l1(mp),
        LemmaId::L2 => check_l2(mp, mode),
        LemmaId::L3 => check_l3(mp),
        LemmaId::L4 => check_l4(mp),
        LemmaId::L5 => check_l5(mp),
        LemmaId::L6 => check_l6(mp),
        LemmaId::L7 => check_l7(mp),
        LemmaId::Sfp => check_sfp(mp),
    }
}

/// A failed instance with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub index: usize,
    pub instance: String,
    pub witness: String,
}

/// Aggregate outcome of checking one lemma over a generated run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub mode: ContinuityMode,
    pub class: FunctionClass,
    pub seed: u64,
    pub instances: usize,
    /// Instances whose premise held and whose conclusion was checked.
    pub checked: usize,
    pub premise_not_met: usize,
    pub generation_exhausted: usize,
    pub rejections: usize,
    pub fallbacks: usize,
    pub failures: Vec<Failure>,
    pub failure_count: usize,
    /// Conclusion failures on instances that violated the premise. These are
    /// expected and never count against the lemma.
    pub premise_violations: Vec<Failure>,
    pub premise_violation_count: usize,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lemma {}: {}", self.lemma, self.lemma.title())?;
        writeln!(f, "  seed {} class {} mode {}", self.seed, self.class, self.mode)?;
        writeln!(
            f,
            "  instances {} checked {} premise-not-met {} generation-exhausted {}",
            self.instances, self.checked, self.premise_not_met, self.generation_exhausted
        )?;
        if self.class == FunctionClass::Continuous {
            writeln!(f, "  rejected candidates {} curated fallbacks {}", self.rejections, self.fallbacks)?;
        }
        if self.premise_violation_count > 0 {
            writeln!(
                f,
                "  conclusion failures outside premise {} (not counted)",
                self.premise_violation_count
            )?;
            for v in &self.premise_violations {
                writeln!(f, "    #{} {}: {}", v.index, v.instance, v.witness)?;
            }
        }
        for fl in &self.failures {
            writeln!(f, "  FAIL #{} {}: {}", fl.index, fl.instance, fl.witness)?;
        }
        if self.failure_count > self.failures.len() {
            writeln!(f, "  ... {} more failures", self.failure_count - self.failures.len())?;
        }
        write!(
            f,
            "  verdict: {}",
            if self.passed() {
                "PASS".to_owned()
            } else {
                format!("FAIL ({} of {})", self.failure_count, self.checked)
            }
        )
    }
}

enum Outcome {
    Exhausted,
    Checked {
        premise: bool,
        result: Result<(), String>,
        instance: String,
        rejections: usize,
        fallback: bool,
    },
}

/// Checks `lemma` on `spec.count` generated instances.
///
/// With `class = None` the lemma's own premise class is generated. Instances
/// are produced and checked in parallel; the report is assembled in index
/// order, so it is identical for a given spec.
pub fn check_lemma(lemma: LemmaId, spec: &InstanceGenSpec) -> Result<LemmaReport, GenError> {
    spec.validate()?;
    let outcomes: Vec<Outcome> = (0..spec.count)
        .into_par_iter()
        .map(|i| match gen_instance(spec, i) {
            Err(GenError::Exhausted { .. }) => Ok(Outcome::Exhausted),
            Err(e) => Err(e),
            Ok(inst) => {
                let mp = &inst.pair;
                Ok(Outcome::Checked {
                    premise: premise_holds(lemma, mp, spec.mode),
                    result: check_conclusion(lemma, mp, spec.mode),
                    instance: mp.describe(),
                    rejections: inst.draw.rejections,
                    fallback: inst.draw.fallback,
                })
            }
        })
        .collect::<Result<_, _>>()?;

    let mut report = LemmaReport {
        lemma,
        mode: spec.mode,
        class: spec.function_class,
        seed: spec.seed,
        instances: spec.count,
        checked: 0,
        premise_not_met: 0,
        generation_exhausted: 0,
        rejections: 0,
        fallbacks: 0,
        failures: Vec::new(),
        failure_count: 0,
        premise_violations: Vec::new(),
        premise_violation_count: 0,
    };
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Exhausted => report.generation_exhausted += 1,
            Outcome::Checked {
                premise,
                result,
                instance,
                rejections,
                fallback,
            } => {
                report.rejections += rejections;
                report.fallbacks += usize::from(fallback);
                if premise {
                    report.checked += 1;
                } else {
                    report.premise_not_met += 1;
                }
                if let Err(witness) = result {
                    let failure = Failure {
                        index,
                        instance,
                        witness,
                    };
                    let (list, count) = if premise {
                        (&mut report.failures, &mut report.failure_count)
                    } else {
                        (&mut report.premise_violations, &mut report.premise_violation_count)
                    };
                    *count += 1;
                    if list.len() < REPORTED_FAILURES {
                        list.push(failure);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Runs every lemma, each with its own premise class.
pub fn check_all(spec: &InstanceGenSpec) -> Result<Vec<LemmaReport>, GenError> {
    LemmaId::ALL
        .into_iter()
        .map(|l| {
            let s = InstanceGenSpec {
                function_class: l.premise(),
                ..spec.clone()
            };
            check_lemma(l, &s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::chain;
    use std::sync::Arc;

    fn d4() -> Arc<FiniteLattice> {
        Arc::new(fixtures::diamond())
    }

    #[test]
    fn lemma_ids_round_trip() {
        for l in LemmaId::ALL {
            assert_eq!(l.to_string().parse::<LemmaId>().unwrap(), l);
        }
        assert_eq!("sfp".parse::<LemmaId>().unwrap(), LemmaId::Sfp);
        assert!("L9".parse::<LemmaId>().is_err());
    }

    #[test]
    fn swap_satisfies_everything() {
        let s = MutualPair::new(d4(), d4(), vec![0, 2, 1, 3], vec![0, 2, 1, 3]).unwrap();
        for l in LemmaId::ALL {
            assert!(premise_holds(l, &s, ContinuityMode::BinaryReduction));
            assert_eq!(check_conclusion(l, &s, ContinuityMode::BinaryReduction), Ok(()), "{l}");
        }
    }

    #[test]
    fn non_monotone_pair_fails_l1() {
        let c2 = Arc::new(chain(2).unwrap());
        let mp = MutualPair::new(c2.clone(), c2, vec![1, 0], vec![0, 1]).unwrap();
        assert!(!premise_holds(LemmaId::L2, &mp, ContinuityMode::BinaryReduction));
        assert!(check_l1(&mp).unwrap_err().starts_with("F not monotone"));
    }

    #[test]
    fn l4_detects_non_closed_image() {
        // Monotone but not join-preserving: a, b -> bot while top -> top.
        let mp = MutualPair::new(d4(), d4(), vec![0, 0, 0, 3], vec![0, 1, 2, 3]).unwrap();
        assert!(!premise_holds(LemmaId::L4, &mp, ContinuityMode::BinaryReduction));
        assert!(check_l4(&mp).is_ok());
        // D4 into the powerset of {0,1,2}: a -> {0}, b -> {1}, top -> {0,1,2}.
        let p3 = Arc::new(crate::lattice::powerset_lattice(3).unwrap());
        let bad = MutualPair::new(d4(), p3, vec![0, 1, 2, 7], vec![0; 8]).unwrap();
        assert!(is_monotone_pair(&bad));
        assert!(check_l4(&bad).unwrap_err().starts_with("F maps"));
    }

    #[test]
    fn complete_sublattices_of_c2() {
        let c2 = chain(2).unwrap();
        assert_eq!(complete_sublattices(&c2).len(), 3);
    }

    #[test]
    fn report_is_deterministic_and_passes() {
        let spec = InstanceGenSpec {
            count: 30,
            ..InstanceGenSpec::new(5)
        };
        let a = check_all(&spec).unwrap();
        let b = check_all(&spec).unwrap();
        assert_eq!(a, b);
        for r in &a {
            assert!(r.passed(), "{r}");
            assert_eq!(r.instances, 30);
        }
        let text: Vec<String> = a.iter().map(ToString::to_string).collect();
        assert!(text[0].starts_with("lemma L1:"));
    }

    #[test]
    fn premise_violations_are_kept_apart() {
        // Monotone instances fed to a continuity lemma.
        let spec = InstanceGenSpec {
            count: 60,
            function_class: FunctionClass::Monotone,
            ..InstanceGenSpec::new(9)
        };
        let r = check_lemma(LemmaId::L6, &spec).unwrap();
        assert!(r.passed());
        assert!(r.premise_not_met > 0);
        assert_eq!(r.checked + r.premise_not_met + r.generation_exhausted, 60);
    }
}

//! Seeded generation of lattices and generator pairs.
//!
//! Every instance is a pure function of `(master seed, index)`, so runs can
//! be fanned out and still reproduce exactly.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fixtures;
use crate::genfun::{is_continuous_pair, is_monotone_pair, ContinuityMode, MutualPair};
use crate::lattice::{
    chain, explicit_cap, powerset_lattice, product, validate_lattice, FiniteLattice, FinitePoset,
    LatticeError, POWERSET_EXPLICIT_MAX,
};

/// Rejection-sampling attempts before falling back to curated continuous pairs.
pub const CONTINUOUS_RETRY_CAP: usize = 64;

/// Ground set used by the random-closed family.
const CLOSED_GROUND: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generation spec: {0}")]
    InvalidSpec(String),
    #[error("no lattice of family {family} has size in {min}..={max}")]
    NoCandidate {
        family: LatticeFamily,
        min: usize,
        max: usize,
    },
    #[error("GenerationExhausted: no continuous pair after {attempts} attempts and curated fallbacks")]
    Exhausted { attempts: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeFamily {
    Chains,
    Powersets,
    Products,
    RandomClosed,
    Corpus,
    /// A uniformly chosen family per lattice.
    Mixed,
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeFamily::Chains => "chains",
            LatticeFamily::Powersets => "powersets",
            LatticeFamily::Products => "products",
            LatticeFamily::RandomClosed => "random-closed",
            LatticeFamily::Corpus => "corpus",
            LatticeFamily::Mixed => "mixed",
        })
    }
}

impl FromStr for LatticeFamily {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        Ok(match s {
            "chains" => LatticeFamily::Chains,
            "powersets" => LatticeFamily::Powersets,
            "products" => LatticeFamily::Products,
            "random-closed" => LatticeFamily::RandomClosed,
            "corpus" => LatticeFamily::Corpus,
            "mixed" => LatticeFamily::Mixed,
            other => return Err(GenError::InvalidSpec(format!("unknown family `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionClass {
    Monotone,
    Continuous,
    Arbitrary,
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionClass::Monotone => "monotone",
            FunctionClass::Continuous => "continuous",
            FunctionClass::Arbitrary => "arbitrary",
        })
    }
}

impl FromStr for FunctionClass {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        Ok(match s {
            "monotone" => FunctionClass::Monotone,
            "continuous" => FunctionClass::Continuous,
            "arbitrary" => FunctionClass::Arbitrary,
            other => return Err(GenError::InvalidSpec(format!("unknown function class `{other}`"))),
        })
    }
}

/// What to generate and how much of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceGenSpec {
    pub seed: u64,
    /// Inclusive element-count range for each generated lattice.
    pub min_size: usize,
    pub max_size: usize,
    pub family: LatticeFamily,
    pub function_class: FunctionClass,
    pub count: usize,
    pub mode: ContinuityMode,
}

impl InstanceGenSpec {
    /// 200 monotone instances on mixed lattices of size 2..=8.
    pub fn new(seed: u64) -> Self {
        InstanceGenSpec {
            seed,
            min_size: 2,
            max_size: 8,
            family: LatticeFamily::Mixed,
            function_class: FunctionClass::Monotone,
            count: 200,
            mode: ContinuityMode::BinaryReduction,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.count == 0 {
            return Err(GenError::InvalidSpec("count must be at least 1".into()));
        }
        if self.min_size == 0 || self.min_size > self.max_size {
            return Err(GenError::InvalidSpec(format!(
                "size range {}..={} is empty or starts at 0",
                self.min_size, self.max_size
            )));
        }
        let cap = explicit_cap();
        if self.max_size > cap {
            return Err(GenError::InvalidSpec(format!(
                "max size {} exceeds explicit cap {cap}",
                self.max_size
            )));
        }
        if let ContinuityMode::ExhaustiveCapped(c) = self.mode {
            if c < 2 {
                return Err(GenError::InvalidSpec("continuity cap must be at least 2".into()));
            }
        }
        Ok(())
    }
}

/// Per-instance seed derived from the master seed (splitmix64 finalizer).
pub fn instance_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_chain<R: Rng>(min: usize, max: usize, rng: &mut R) -> Result<FiniteLattice, GenError> {
    Ok(chain(rng.gen_range(min..=max))?)
}

fn random_powerset<R: Rng>(min: usize, max: usize, rng: &mut R) -> Result<FiniteLattice, GenError> {
    let ks: Vec<usize> = (0..=POWERSET_EXPLICIT_MAX)
        .filter(|k| (min..=max).contains(&(1 << k)))
        .collect();
    let k = *ks.choose(rng).ok_or(GenError::NoCandidate {
        family: LatticeFamily::Powersets,
        min,
        max,
    })?;
    Ok(powerset_lattice(k)?)
}

fn random_product<R: Rng>(min: usize, max: usize, rng: &mut R) -> Result<FiniteLattice, GenError> {
    let factors = || -> Vec<FiniteLattice> {
        vec![
            chain(1).expect("C1"),
            chain(2).expect("C2"),
            chain(3).expect("C3"),
            chain(4).expect("C4"),
            fixtures::diamond(),
            fixtures::m3(),
            fixtures::n5(),
        ]
    };
    let fs = factors();
    let mut candidates = Vec::new();
    for (i, a) in fs.iter().enumerate() {
        for (j, b) in fs.iter().enumerate() {
            if (min..=max).contains(&(a.size() * b.size())) {
                candidates.push((i, j));
            }
        }
    }
    // Prefer genuine products when there are any.
    let proper: Vec<(usize, usize)> = candidates
        .iter()
        .copied()
        .filter(|&(i, j)| fs[i].size() > 1 && fs[j].size() > 1)
        .collect();
    let pool = if proper.is_empty() { &candidates } else { &proper };
    let &(i, j) = pool.choose(rng).ok_or(GenError::NoCandidate {
        family: LatticeFamily::Products,
        min,
        max,
    })?;
    Ok(product(&fs[i], &fs[j])?)
}

/// Closes a family of subset masks under `∩` and `∪`.
fn close_masks(mut masks: Vec<usize>) -> Vec<usize> {
    masks.sort_unstable();
    masks.dedup();
    loop {
        let mut grown = masks.clone();
        for (i, &a) in masks.iter().enumerate() {
            for &b in &masks[i + 1..] {
                grown.push(a & b);
                grown.push(a | b);
            }
        }
        grown.sort_unstable();
        grown.dedup();
        if grown.len() == masks.len() {
            return masks;
        }
        masks = grown;
    }
}

fn lattice_of_masks(masks: &[usize]) -> Result<FiniteLattice, GenError> {
    let labels = masks
        .iter()
        .map(|&m| {
            let parts: Vec<String> = (0..CLOSED_GROUND)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| i.to_string())
                .collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let leq: Vec<Vec<bool>> = masks
        .iter()
        .map(|&a| masks.iter().map(|&b| a & b == a).collect())
        .collect();
    Ok(validate_lattice(FinitePoset::new(labels, &leq)?)?)
}

fn random_closed<R: Rng>(min: usize, max: usize, rng: &mut R) -> Result<FiniteLattice, GenError> {
    let universe = 1usize << CLOSED_GROUND;
    if min > universe {
        return Err(GenError::NoCandidate {
            family: LatticeFamily::RandomClosed,
            min,
            max,
        });
    }
    for _ in 0..64 {
        let k = rng.gen_range(1..=max.min(universe));
        let masks: Vec<usize> = (0..k).map(|_| rng.gen_range(0..universe)).collect();
        let closed = close_masks(masks);
        if (min..=max).contains(&closed.len()) {
            return lattice_of_masks(&closed);
        }
    }
    random_chain(min, max, rng)
}

fn random_corpus<R: Rng>(min: usize, max: usize, rng: &mut R) -> Result<FiniteLattice, GenError> {
    let pool: Vec<FiniteLattice> = fixtures::corpus()
        .into_iter()
        .map(|(_, l)| l)
        .filter(|l| (min..=max).contains(&l.size()))
        .collect();
    pool.choose(rng).cloned().ok_or(GenError::NoCandidate {
        family: LatticeFamily::Corpus,
        min,
        max,
    })
}

/// Draws one lattice with `min..=max` elements from `family`.
///
/// For `Powersets` the ground-set size is chosen so the lattice fits the
/// range. `RandomClosed` samples masks in the powerset of a 4-element set
/// and closes them under `∩`/`∪`.
pub fn gen_lattice<R: Rng>(
    family: LatticeFamily,
    min: usize,
    max: usize,
    rng: &mut R,
) -> Result<FiniteLattice, GenError> {
    if min == 0 || min > max {
        return Err(GenError::InvalidSpec(format!("size range {min}..={max}")));
    }
    match family {
        LatticeFamily::Chains => random_chain(min, max, rng),
        LatticeFamily::Powersets => random_powerset(min, max, rng),
        LatticeFamily::Products => random_product(min, max, rng),
        LatticeFamily::RandomClosed => random_closed(min, max, rng),
        LatticeFamily::Corpus => random_corpus(min, max, rng),
        LatticeFamily::Mixed => {
            let picks = [
                LatticeFamily::Chains,
                LatticeFamily::Powersets,
                LatticeFamily::Products,
                LatticeFamily::RandomClosed,
                LatticeFamily::Corpus,
            ];
            let pick = *picks.choose(rng).expect("nonempty");
            match gen_lattice(pick, min, max, rng) {
                Err(GenError::NoCandidate { .. }) => random_chain(min, max, rng),
                other => other,
            }
        }
    }
}

/// A single lattice from a spec's seed, family and size range.
pub fn gen_lattice_from_spec(spec: &InstanceGenSpec) -> Result<FiniteLattice, GenError> {
    spec.validate()?;
    gen_lattice(spec.family, spec.min_size, spec.max_size, &mut rng_for(spec.seed))
}

/// A monotone table `from → to`: elements are visited in a linear extension
/// and each image is drawn uniformly from the up-set of the join of the
/// images already fixed below it.
pub fn gen_monotone_map<R: Rng>(from: &FiniteLattice, to: &FiniteLattice, rng: &mut R) -> Vec<usize> {
    let mut table = vec![usize::MAX; from.size()];
    for x in from.poset().linear_extension() {
        let forced = to.join_all(
            from.poset()
                .down_set(x)
                .iter()
                .filter(|&y| y != x)
                .map(|y| table[y]),
        );
        let choices: Vec<usize> = to.poset().up_set(forced).iter().collect();
        table[x] = *choices.choose(rng).expect("up-set contains its base");
    }
    table
}

pub fn gen_monotone_pair<R: Rng>(o: Arc<FiniteLattice>, p: Arc<FiniteLattice>, rng: &mut R) -> MutualPair {
    let f = gen_monotone_map(&o, &p, rng);
    let g = gen_monotone_map(&p, &o, rng);
    let mp = MutualPair::new(o, p, f, g).expect("generated tables are total");
    assert!(is_monotone_pair(&mp), "monotone generation produced a non-monotone pair");
    mp
}

pub fn gen_arbitrary_pair<R: Rng>(o: Arc<FiniteLattice>, p: Arc<FiniteLattice>, rng: &mut R) -> MutualPair {
    let f = (0..o.size()).map(|_| rng.gen_range(0..p.size())).collect();
    let g = (0..p.size()).map(|_| rng.gen_range(0..o.size())).collect();
    MutualPair::new(o, p, f, g).expect("generated tables are total")
}

/// How a continuous pair was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ContinuousDraw {
    /// Monotone candidates rejected before acceptance.
    pub rejections: usize,
    /// Whether the pair came from the curated fallback list.
    pub fallback: bool,
}

fn curated_continuous(o: &Arc<FiniteLattice>, p: &Arc<FiniteLattice>, mode: ContinuityMode) -> Option<MutualPair> {
    let pair = |f: Vec<usize>, g: Vec<usize>| MutualPair::new(Arc::clone(o), Arc::clone(p), f, g).ok();
    let mut candidates = Vec::new();
    if o == p {
        let id: Vec<usize> = o.elements().collect();
        candidates.push(pair(id.clone(), id));
    }
    for (c, d) in [(p.top(), o.top()), (p.bottom(), o.bottom()), (p.top(), o.bottom())] {
        candidates.push(pair(vec![c; o.size()], vec![d; p.size()]));
    }
    candidates
        .into_iter()
        .flatten()
        .find(|mp| is_continuous_pair(mp, mode))
}

/// Rejection sampling over monotone pairs, then curated fallbacks.
pub fn gen_continuous_pair<R: Rng>(
    o: Arc<FiniteLattice>,
    p: Arc<FiniteLattice>,
    mode: ContinuityMode,
    rng: &mut R,
) -> Result<(MutualPair, ContinuousDraw), GenError> {
    for attempt in 0..CONTINUOUS_RETRY_CAP {
        let mp = gen_monotone_pair(Arc::clone(&o), Arc::clone(&p), rng);
        if is_continuous_pair(&mp, mode) {
            return Ok((
                mp,
                ContinuousDraw {
                    rejections: attempt,
                    fallback: false,
                },
            ));
        }
    }
    curated_continuous(&o, &p, mode)
        .map(|mp| {
            (
                mp,
                ContinuousDraw {
                    rejections: CONTINUOUS_RETRY_CAP,
                    fallback: true,
                },
            )
        })
        .ok_or(GenError::Exhausted {
            attempts: CONTINUOUS_RETRY_CAP,
        })
}

/// One generated instance of a run.
#[derive(Debug, Clone)]
pub struct Instance {
    pub index: usize,
    pub pair: MutualPair,
    pub draw: ContinuousDraw,
}

/// Instance `index` of the run described by `spec`.
pub fn gen_instance(spec: &InstanceGenSpec, index: usize) -> Result<Instance, GenError> {
    let mut rng = rng_for(instance_seed(spec.seed, index as u64));
    let o = Arc::new(gen_lattice(spec.family, spec.min_size, spec.max_size, &mut rng)?);
    let p = Arc::new(gen_lattice(spec.family, spec.min_size, spec.max_size, &mut rng)?);
    let (pair, draw) = match spec.function_class {
        FunctionClass::Monotone => (gen_monotone_pair(o, p, &mut rng), ContinuousDraw::default()),
        FunctionClass::Arbitrary => (gen_arbitrary_pair(o, p, &mut rng), ContinuousDraw::default()),
        FunctionClass::Continuous => gen_continuous_pair(o, p, spec.mode, &mut rng)?,
    };
    Ok(Instance { index, pair, draw })
}

//! Randomized and exhaustive checking of the lattice results.

pub mod gen;
pub mod lemmas;
pub mod miner;

pub use gen::{
    gen_continuous_pair, gen_instance, gen_lattice, gen_lattice_from_spec, gen_monotone_pair, instance_seed,
    ContinuousDraw, FunctionClass, GenError, Instance, InstanceGenSpec, LatticeFamily,
};
pub use lemmas::{check_all, check_conclusion, check_lemma, premise_holds, Failure, LemmaId, LemmaReport};
pub use miner::{mine_counterexample, monotone_maps, Counterexample, Finding, MineSpec, Question, Witness};

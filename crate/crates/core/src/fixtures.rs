//! Named lattices used by tests, the verifier, and the miner.

use crate::lattice::{chain, lattice_from_edges, powerset_lattice, product, FiniteLattice};

/// `⊥ < a, b < ⊤` with `a`, `b` incomparable.
pub fn diamond() -> FiniteLattice {
    lattice_from_edges(
        &["bot", "a", "b", "top"],
        &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
    )
    .expect("diamond is a lattice")
}

/// Three pairwise incomparable atoms; modular but not distributive.
pub fn m3() -> FiniteLattice {
    lattice_from_edges(
        &["bot", "a", "b", "c", "top"],
        &[
            ("bot", "a"),
            ("bot", "b"),
            ("bot", "c"),
            ("a", "top"),
            ("b", "top"),
            ("c", "top"),
        ],
    )
    .expect("M3 is a lattice")
}

/// The pentagon `⊥ < a < c < ⊤`, `⊥ < b < ⊤`; not modular.
pub fn n5() -> FiniteLattice {
    lattice_from_edges(
        &["bot", "a", "b", "c", "top"],
        &[("bot", "a"), ("a", "c"), ("c", "top"), ("bot", "b"), ("b", "top")],
    )
    .expect("N5 is a lattice")
}

/// The diamond with a fresh top adjoined above its old top `m`.
pub fn diamond_with_top() -> FiniteLattice {
    lattice_from_edges(
        &["bot", "a", "b", "m", "top"],
        &[("bot", "a"), ("bot", "b"), ("a", "m"), ("b", "m"), ("m", "top")],
    )
    .expect("lifted diamond is a lattice")
}

/// The diamond with a fresh bottom adjoined below its old bottom `m`.
pub fn diamond_with_bottom() -> FiniteLattice {
    lattice_from_edges(
        &["bot", "m", "a", "b", "top"],
        &[("bot", "m"), ("m", "a"), ("m", "b"), ("a", "top"), ("b", "top")],
    )
    .expect("lifted diamond is a lattice")
}

fn c(n: usize) -> FiniteLattice {
    chain(n).expect("small chain")
}

/// The shipped corpus: chains, diamond, M3, N5, powersets 1..=4 and a few
/// products.
pub fn corpus() -> Vec<(String, FiniteLattice)> {
    let mut out: Vec<(String, FiniteLattice)> = vec![
        ("C2".into(), c(2)),
        ("C3".into(), c(3)),
        ("C4".into(), c(4)),
        ("D4".into(), diamond()),
        ("M3".into(), m3()),
        ("N5".into(), n5()),
    ];
    for n in 1..=4 {
        out.push((format!("P{n}"), powerset_lattice(n).expect("small powerset")));
    }
    let prods = [
        ("C2xC3", c(2), c(3)),
        ("C2xD4", c(2), diamond()),
        ("C3xC3", c(3), c(3)),
        ("D4xD4", diamond(), diamond()),
        ("N5xC2", n5(), c(2)),
    ];
    for (name, a, b) in prods {
        out.push((name.into(), product(&a, &b).expect("small product")));
    }
    out
}

/// Every lattice with at most `max` elements, up to isomorphism, smallest
/// first. Complete for `max <= 5`; larger requests are clamped.
pub fn all_small_lattices(max: usize) -> Vec<(String, FiniteLattice)> {
    let all: Vec<(&str, FiniteLattice)> = vec![
        ("C1", c(1)),
        ("C2", c(2)),
        ("C3", c(3)),
        ("C4", c(4)),
        ("D4", diamond()),
        ("C5", c(5)),
        ("M3", m3()),
        ("N5", n5()),
        ("D4+top", diamond_with_top()),
        ("bot+D4", diamond_with_bottom()),
    ];
    all.into_iter()
        .filter(|(_, l)| l.size() <= max)
        .map(|(n, l)| (n.to_string(), l))
        .collect()
}

/// Largest size for which [`all_small_lattices`] is exhaustive.
pub const EXHAUSTIVE_LATTICE_MAX: usize = 5;

use mucofix::fixtures::{all_small_lattices, diamond};
use mucofix::lattice::{chain, powerset_lattice, product, validate_lattice};
use mucofix::{FiniteLattice, FinitePoset, LatticeError};
use proptest::prelude::*;

/// Reflexive-transitive closure of an edge list, computed naively.
fn closure(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        r[a][b] = true;
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if r[a][b] && r[b][c] && !r[a][c] {
                        r[a][c] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

/// Least upper bound by scanning upper bounds, if one exists.
fn brute_lub(r: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = r.len();
    let ups: Vec<usize> = (0..n).filter(|&u| r[a][u] && r[b][u]).collect();
    ups.iter().copied().find(|&u| ups.iter().all(|&v| r[u][v]))
}

fn brute_glb(r: &[Vec<bool>], a: usize, b: usize) -> Option<usize> {
    let n = r.len();
    let downs: Vec<usize> = (0..n).filter(|&d| r[d][a] && r[d][b]).collect();
    downs.iter().copied().find(|&d| downs.iter().all(|&v| r[v][d]))
}

fn dag() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let k = pairs.len();
        (Just(n), proptest::sample::subsequence(pairs, 0..=k))
    })
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Finds an order isomorphism by trying every permutation.
fn isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    a.size() == b.size()
        && perms(a.size()).into_iter().any(|pi| {
            a.elements()
                .all(|x| a.elements().all(|y| a.leq(x, y) == b.leq(pi[x], pi[y])))
        })
}

proptest! {
    #[test]
    fn lattice_iff_all_bounds_exist((n, edges) in dag()) {
        let r = closure(n, &edges);
        let poset = FinitePoset::from_edges(labels(n), &edges).unwrap();
        for (a, row) in r.iter().enumerate() {
            for (b, &le) in row.iter().enumerate() {
                prop_assert_eq!(poset.leq(a, b), le);
            }
        }
        let all_bounds = (0..n).all(|a| (0..n).all(|b| brute_lub(&r, a, b).is_some() && brute_glb(&r, a, b).is_some()));
        match validate_lattice(poset) {
            Ok(l) => {
                prop_assert!(all_bounds);
                for a in 0..n {
                    for b in 0..n {
                        prop_assert_eq!(Some(l.join(a, b)), brute_lub(&r, a, b));
                        prop_assert_eq!(Some(l.meet(a, b)), brute_glb(&r, a, b));
                    }
                }
            }
            Err(LatticeError::NotALattice { .. }) => prop_assert!(!all_bounds),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn lattice_laws(idx in 0usize..10, a in 0usize..6, b in 0usize..6, c in 0usize..6) {
        let lats = all_small_lattices(5);
        let l = &lats[idx % lats.len()].1;
        let (a, b, c) = (a % l.size(), b % l.size(), c % l.size());
        prop_assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
        prop_assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
        prop_assert_eq!(l.meet(a, l.join(a, b)), a);
        prop_assert_eq!(l.join(a, l.meet(a, b)), a);
        prop_assert_eq!(l.leq(a, b), l.meet(a, b) == a);
        prop_assert!(l.leq(l.bottom(), a) && l.leq(a, l.top()));
        let d = l.dual();
        prop_assert_eq!(d.leq(a, b), l.leq(b, a));
        prop_assert_eq!(d.meet(a, b), l.join(a, b));
    }

    #[test]
    fn closed_sets_match_exhaustive_definition(idx in 0usize..10, mask in 1u32..32) {
        let lats = all_small_lattices(5);
        let l = &lats[idx % lats.len()].1;
        let ids: Vec<usize> = l.elements().filter(|&x| mask & (1 << x) != 0).collect();
        prop_assume!(!ids.is_empty());
        let s = mucofix::BitSet::from_ids(l.size(), ids.iter().copied());
        let exhaustive = (1u32..(1 << ids.len())).all(|sub| {
            let pick: Vec<usize> = ids.iter().enumerate().filter(|(i, _)| sub & (1 << i) != 0).map(|(_, &x)| x).collect();
            s.contains(l.meet_all(pick.iter().copied())) && s.contains(l.join_all(pick))
        });
        prop_assert_eq!(l.is_closed(&s), exhaustive);
    }
}

#[test]
fn product_of_chains_is_the_diamond() {
    let c2 = chain(2).unwrap();
    let p = product(&c2, &c2).unwrap();
    assert!(isomorphic(&p, &diamond()));
    assert!(isomorphic(&powerset_lattice(2).unwrap(), &diamond()));
    assert!(!isomorphic(&chain(4).unwrap(), &diamond()));
}

#[test]
fn product_order_is_componentwise() {
    let (a, b) = (chain(3).unwrap(), diamond());
    let p = product(&a, &b).unwrap();
    for x in p.elements() {
        for y in p.elements() {
            let (xa, xb) = (x / b.size(), x % b.size());
            let (ya, yb) = (y / b.size(), y % b.size());
            assert_eq!(p.leq(x, y), a.leq(xa, ya) && b.leq(xb, yb));
        }
    }
}

#[test]
fn powerset_order_is_inclusion() {
    let p = powerset_lattice(3).unwrap();
    for x in p.elements() {
        for y in p.elements() {
            assert_eq!(p.leq(x, y), x & y == x);
        }
    }
    assert!(matches!(powerset_lattice(6), Err(LatticeError::Capacity { .. })));
}

#[test]
fn small_lattice_list_has_no_duplicates() {
    let lats = all_small_lattices(5);
    for (i, (na, a)) in lats.iter().enumerate() {
        for (nb, b) in &lats[i + 1..] {
            assert!(!isomorphic(a, b), "{na} and {nb} are isomorphic");
        }
    }
}

use std::collections::BTreeSet;

use mucofix::demos::{solve_subtyping, ClassDecl, ClassTable, SubtypeGenerators, Universe, DEFAULT_TYPE_CAP};
use mucofix::{BitSet, Direction};
use proptest::prelude::*;

/// Types written out as strings, the universe rebuilt by hand.
#[derive(Clone)]
struct Ty {
    class: String,
    arg: Option<(String, String)>,
}

fn name(t: &Ty) -> String {
    match &t.arg {
        None => t.class.clone(),
        Some((l, u)) => format!("{}<[{l},{u}]>", t.class),
    }
}

/// `a` equals `b` or reaches it through `extends` edges.
fn inherits(decls: &[(&str, bool, &str)], a: &str, b: &str) -> bool {
    let mut cur = a.to_owned();
    loop {
        if cur == b {
            return true;
        }
        match decls.iter().find(|d| d.0 == cur) {
            Some(d) => cur = d.2.to_owned(),
            None => return false,
        }
    }
}

/// Applies single rule instances one at a time until nothing new appears.
fn oracle(decls: &[(&str, bool, &str)], depth: usize) -> BTreeSet<(String, String)> {
    let mut types: Vec<Ty> = vec![
        Ty { class: "Object".into(), arg: None },
        Ty { class: "Null".into(), arg: None },
    ];
    types.extend(decls.iter().filter(|d| !d.1).map(|d| Ty { class: d.0.into(), arg: None }));
    for _ in 0..depth {
        let names: Vec<String> = types.iter().map(name).collect();
        for d in decls.iter().filter(|d| d.1) {
            for l in &names {
                for u in &names {
                    let t = Ty { class: d.0.into(), arg: Some((l.clone(), u.clone())) };
                    if !types.iter().any(|x| name(x) == name(&t)) {
                        types.push(t);
                    }
                }
            }
        }
    }
    let names: Vec<String> = types.iter().map(name).collect();
    let mut sub: BTreeSet<(String, String)> = BTreeSet::new();
    let mut changed = true;
    while changed {
        changed = false;
        for a in &types {
            for b in &types {
                let pair = (name(a), name(b));
                if sub.contains(&pair) {
                    continue;
                }
                let ok = a.class == "Null"
                    || b.class == "Object"
                    || (inherits(decls, &a.class, &b.class)
                        && match (&a.arg, &b.arg) {
                            (None, None) => true,
                            (Some((l1, u1)), Some((l2, u2))) => {
                                sub.contains(&(u1.clone(), u2.clone())) && sub.contains(&(l2.clone(), l1.clone()))
                            }
                            _ => false,
                        });
                if ok {
                    sub.insert(pair);
                    changed = true;
                }
            }
        }
    }
    assert!(sub.iter().all(|(a, b)| names.contains(a) && names.contains(b)));
    sub
}

fn solved(decls: &[(&str, bool, &str)], depth: usize, dir: Direction) -> BTreeSet<(String, String)> {
    let ct = ClassTable::new(&decls.iter().map(|d| ClassDecl::new(d.0, d.1, d.2)).collect::<Vec<_>>()).unwrap();
    let u = Universe::build(ct, depth, DEFAULT_TYPE_CAP).unwrap();
    solve_subtyping(u, dir).unwrap().subtype_pairs().into_iter().collect()
}

type Decls = &'static [(&'static str, bool, &'static str)];

const FIXTURES: &[(Decls, usize)] = &[
    (&[], 0),
    (&[("A", false, "Object")], 0),
    (&[("A", false, "Object")], 1),
    (&[("A", false, "Object"), ("B", false, "A")], 0),
    (&[("List", true, "Object")], 1),
    (&[("A", false, "Object"), ("List", true, "Object")], 1),
    (&[("Box", true, "Object"), ("Cell", true, "Box")], 1),
];

#[test]
fn least_solution_matches_rule_oracle() {
    for (decls, k) in FIXTURES {
        assert_eq!(solved(decls, *k, Direction::Least), oracle(decls, *k), "{decls:?} at depth {k}");
    }
}

#[test]
fn least_below_greatest() {
    for (decls, k) in FIXTURES {
        let lo = solved(decls, *k, Direction::Least);
        let hi = solved(decls, *k, Direction::Greatest);
        assert!(lo.is_subset(&hi), "{decls:?}");
    }
}

#[test]
fn interval_variance() {
    let ct = ClassTable::new(&[ClassDecl::new("A", false, "Object"), ClassDecl::new("L", true, "Object")]).unwrap();
    let st = solve_subtyping(Universe::build(ct, 1, DEFAULT_TYPE_CAP).unwrap(), Direction::Least).unwrap();
    assert!(st.is_subtype("L<[A,A]>", "L<[Null,Object]>").unwrap());
    assert!(!st.is_subtype("L<[Null,Object]>", "L<[A,A]>").unwrap());
    // Wider upper bound is a supertype, wider lower bound too.
    assert!(st.is_subtype("L<[A,A]>", "L<[A,Object]>").unwrap());
    assert!(st.is_subtype("L<[A,A]>", "L<[Null,A]>").unwrap());
    // Mixed arity relates only through Null and Object.
    assert!(!st.is_subtype("L<[A,A]>", "A").unwrap());
    assert!(st.is_subtype("Null", "L<[A,A]>").unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relation_generators_are_monotone(bits in proptest::collection::vec(any::<bool>(), 36), extra in proptest::collection::vec(any::<bool>(), 36), rbits in proptest::collection::vec(any::<u8>(), 0..64)) {
        let ct = ClassTable::new(&[ClassDecl::new("A", false, "Object"), ClassDecl::new("L", true, "Object")]).unwrap();
        let u = Universe::build(ct, 0, DEFAULT_TYPE_CAP).unwrap();
        let g = SubtypeGenerators::new(&u);
        let n = u.type_count();
        let s = BitSet::from_ids(n * n, (0..n * n).filter(|&i| bits[i]));
        let s2 = s.union(&BitSet::from_ids(n * n, (0..n * n).filter(|&i| extra[i])));
        prop_assert!(g.f(&s).is_subset(&g.f(&s2)));
        let m = u.interval_count();
        let r = BitSet::from_ids(m * m, rbits.iter().map(|&b| b as usize % (m * m)));
        let r2 = r.union(&BitSet::from_ids(m * m, (0..m * m).filter(|i| i % 3 == 0)));
        prop_assert!(g.g(&r).is_subset(&g.g(&r2)));
    }
}

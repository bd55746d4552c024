//! The subcommands. Reports are plain text, one fact per line, and depend
//! only on the inputs and flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mucofix::demos::{paulson_trio_with_budget, solve_subtyping, ClassDecl, ClassTable, Trio, Universe, OBJECT};
use mucofix::genfun::{continuity_violations, is_continuous_pair, monotone_violation, MapView};
use mucofix::lattice::validate_lattice;
use mucofix::num_bigint::BigInt;
use mucofix::solvers::{solve_one, SolveError};
use mucofix::verifier::{check_lemma, mine_counterexample, InstanceGenSpec, LemmaId, MineSpec};
use mucofix::{ContinuityMode, Direction, Extremum, MutualPair, PairPoint, Strategy};

use crate::formats::{load_pair, parse_class_table, parse_document, read, Document};
use crate::{CliError, DemoCommand, DirectionArg, MineArgs, Outcome, StrategyArg, VerifyArgs, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};

fn directions(d: Option<DirectionArg>) -> Vec<Direction> {
    match d {
        Some(DirectionArg::Least) => vec![Direction::Least],
        Some(DirectionArg::Greatest) => vec![Direction::Greatest],
        None => vec![Direction::Least, Direction::Greatest],
    }
}

fn monotone_line(name: &str, view: MapView<'_>) -> (bool, String) {
    match monotone_violation(view) {
        None => (true, format!("{name} monotone: ok")),
        Some((a, b)) => (
            false,
            format!(
                "{name} monotone: no, {} <= {} but {name}({}) = {} and {name}({}) = {}",
                view.from.label(a),
                view.from.label(b),
                view.from.label(a),
                view.to.label(view.apply(a)),
                view.from.label(b),
                view.to.label(view.apply(b))
            ),
        ),
    }
}

fn check_pair(mp: &MutualPair, mode: ContinuityMode, require_continuous: bool, out: &mut String) -> bool {
    let mut ok = true;
    for (name, view) in [("F", mp.f_view()), ("G", mp.g_view())] {
        let (good, line) = monotone_line(name, view);
        ok &= good;
        writeln!(out, "{line}").unwrap();
    }
    if is_continuous_pair(mp, mode) {
        writeln!(out, "continuous ({mode}): yes").unwrap();
    } else {
        writeln!(out, "continuous ({mode}): no").unwrap();
        for v in continuity_violations(mp, mode) {
            let from = match v.generator {
                mucofix::Generator::F => mp.dom_o(),
                mucofix::Generator::G => mp.dom_p(),
            };
            let names: Vec<&str> = v.subset.iter().map(|&x| from.label(x)).collect();
            writeln!(out, "  {} does not preserve the {} of {{{}}}", v.generator, v.bound, names.join(",")).unwrap();
        }
        ok &= !require_continuous;
    }
    ok
}

/// Validates each document. Exit 1 if any order, lattice, monotonicity
/// (or, on request, continuity) check fails; exit 2 on unreadable input.
pub fn cmd_check(paths: &[PathBuf], mode: ContinuityMode, require_continuous: bool) -> Outcome {
    let mut out = String::new();
    let mut ok = true;
    for path in paths {
        if paths.len() > 1 {
            writeln!(out, "== {}", path.display()).unwrap();
        }
        let doc = match read(path).and_then(|t| parse_document(&t)) {
            Ok(d) => d,
            Err(e) => return Outcome::new(EXIT_INPUT, format!("{out}{}: {e}", path.display())),
        };
        match doc {
            Document::Lattice(doc) => {
                let poset = match doc.poset() {
                    Ok(p) => p,
                    Err(e) => return Outcome::input_error(e),
                };
                match poset {
                    Err(e) => {
                        ok = false;
                        writeln!(out, "poset: {e}").unwrap();
                    }
                    Ok(p) => match validate_lattice(p) {
                        Ok(l) => writeln!(out, "poset: ok, lattice: ok\nelements: {}", l.size()).unwrap(),
                        Err(e) => {
                            ok = false;
                            writeln!(out, "poset: ok, lattice: {e}").unwrap();
                        }
                    },
                }
            }
            Document::Pair(doc) => match doc.pair() {
                Ok(mp) => {
                    writeln!(out, "O: lattice ok, P: lattice ok").unwrap();
                    ok &= check_pair(&mp, mode, require_continuous, &mut out);
                }
                Err(e) => return Outcome::new(EXIT_INPUT, format!("{out}{}: {e}", path.display())),
            },
        }
    }
    Outcome::new(if ok { EXIT_OK } else { EXIT_CHECK_FAILED }, out)
}

fn label(mp: &MutualPair, pt: PairPoint) -> String {
    format!("({},{})", mp.dom_o().label(pt.o), mp.dom_p().label(pt.p))
}

fn extremum_line(mp: &MutualPair, e: &Extremum) -> String {
    let (f, g) = (mp.dom_o().label(e.point.o), mp.dom_p().label(e.point.p));
    let head = match e.direction {
        Direction::Least => format!("muF={f} muG={g}"),
        Direction::Greatest => format!("nuF={f} nuG={g}"),
    };
    match e.strategy {
        Strategy::Product => format!("{head}, {} iterations", e.iterations),
        _ => format!("{head}, {} points scanned", e.iterations),
    }
}

fn solve_err(e: SolveError) -> Outcome {
    let code = match e {
        SolveError::NotMonotone { .. } | SolveError::NonTermination { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_INPUT,
    };
    Outcome::new(code, e.to_string())
}

/// Solves a pair with one strategy or, for `all`, every strategy plus an
/// agreement verdict.
pub fn cmd_solve(path: &Path, strategy: StrategyArg, direction: Option<DirectionArg>, trace: bool) -> Outcome {
    let mp = match load_pair(path) {
        Ok(mp) => mp,
        Err(e) => return Outcome::input_error(e),
    };
    let strategies = match strategy {
        StrategyArg::Direct => vec![Strategy::Direct],
        StrategyArg::Product => vec![Strategy::Product],
        StrategyArg::Tarski => vec![Strategy::Tarski],
        StrategyArg::All => vec![Strategy::Direct, Strategy::Product, Strategy::Tarski],
    };
    let multi = strategies.len() > 1;
    let mut out = String::new();
    let mut agree = true;
    for dir in directions(direction) {
        let mut first: Option<PairPoint> = None;
        for &s in &strategies {
            let e = match solve_one(&mp, s, dir) {
                Ok(e) => e,
                Err(err) => return solve_err(err),
            };
            let prefix = if multi { format!("{s}: ") } else { String::new() };
            writeln!(out, "{prefix}{}", extremum_line(&mp, &e)).unwrap();
            if trace && !e.trace.is_empty() {
                let steps: Vec<String> = e.trace.iter().map(|&pt| label(&mp, pt)).collect();
                writeln!(out, "{prefix}trace: {}", steps.join(" -> ")).unwrap();
            }
            match first {
                None => first = Some(e.point),
                Some(p) => agree &= p == e.point,
            }
        }
    }
    if multi {
        writeln!(out, "{}", if agree { "AGREE" } else { "DISAGREE" }).unwrap();
    }
    Outcome::new(if agree { EXIT_OK } else { EXIT_CHECK_FAILED }, out)
}

/// Runs the lemma suite; exit 1 on any genuine failure.
pub fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let lemmas: Vec<LemmaId> = match args.lemma {
        Some(l) => vec![l],
        None => LemmaId::ALL.to_vec(),
    };
    let mut out = String::new();
    writeln!(
        out,
        "verify seed={} count={} mode={} family={} sizes={}..={}",
        args.seed, args.count, args.mode, args.family, args.min_size, args.max_size
    )
    .unwrap();
    let mut passed = 0;
    for &l in &lemmas {
        let spec = InstanceGenSpec {
            seed: args.seed,
            min_size: args.min_size,
            max_size: args.max_size,
            family: args.family,
            function_class: l.premise(),
            count: args.count,
            mode: args.mode,
        };
        match check_lemma(l, &spec) {
            Ok(r) => {
                passed += usize::from(r.passed());
                writeln!(out, "{r}").unwrap();
            }
            Err(e) => return Outcome::new(EXIT_INPUT, format!("{out}{e}")),
        }
    }
    writeln!(out, "lemmas passed: {passed}/{}", lemmas.len()).unwrap();
    Outcome::new(if passed == lemmas.len() { EXIT_OK } else { EXIT_CHECK_FAILED }, out)
}

/// Reports the miner's finding. Finding a counterexample is a result, not a
/// failure, so the exit code is 0 either way.
pub fn cmd_mine(args: &MineArgs) -> Outcome {
    let spec = MineSpec {
        max_size: args.max_size,
        budget: args.budget,
        random: args.random,
        seed: args.seed,
        mode: args.mode,
    };
    Outcome::new(EXIT_OK, mine_counterexample(args.question, &spec).to_string())
}

fn parse_int(name: &str, s: &str) -> Result<BigInt, CliError> {
    s.parse().map_err(|_| CliError::Input(format!("--{name}: `{s}` is not an integer")))
}

fn default_classes() -> ClassTable {
    ClassTable::new(&[ClassDecl::new("A", false, OBJECT), ClassDecl::new("List", true, OBJECT)])
        .expect("built-in table is valid")
}

pub fn cmd_demo(demo: &DemoCommand) -> Outcome {
    match demo {
        DemoCommand::Paulson { x, y, z, budget } => {
            let start = match (parse_int("x", x), parse_int("y", y), parse_int("z", z)) {
                (Ok(x), Ok(y), Ok(z)) => Trio { x, y, z },
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Outcome::input_error(e),
            };
            match paulson_trio_with_budget(start, *budget) {
                Ok(t) => Outcome::new(EXIT_OK, t.to_string()),
                Err(e) => Outcome::new(EXIT_CHECK_FAILED, e.to_string()),
            }
        }
        DemoCommand::Subtype {
            classes,
            depth,
            direction,
            cap,
            query,
        } => {
            let table = match classes {
                None => default_classes(),
                Some(p) => match read(p).and_then(|t| parse_class_table(&t)) {
                    Ok(t) => t,
                    Err(e) => return Outcome::input_error(e),
                },
            };
            let universe = match Universe::build(table, *depth, *cap) {
                Ok(u) => u,
                Err(e) => return Outcome::new(EXIT_INPUT, e.to_string()),
            };
            let mut queries = Vec::new();
            for q in query {
                match q.split_once("<:") {
                    Some((a, b)) => queries.push((a.trim().to_owned(), b.trim().to_owned())),
                    None => return Outcome::new(EXIT_INPUT, format!("query `{q}` is not of the form T1<:T2")),
                }
            }
            let mut out = String::new();
            let mut solved = Vec::new();
            for dir in directions(*direction) {
                let st = match solve_subtyping(universe.clone(), dir) {
                    Ok(st) => st,
                    Err(e) => return Outcome::new(EXIT_CHECK_FAILED, format!("{out}{e}")),
                };
                write!(out, "{st}").unwrap();
                for (a, b) in &queries {
                    match st.is_subtype(a, b) {
                        Ok(v) => writeln!(out, "query {a} <: {b}: {v}").unwrap(),
                        Err(e) => return Outcome::new(EXIT_INPUT, format!("{out}{e}")),
                    }
                }
                solved.push(st);
            }
            if let [lo, hi] = solved.as_slice() {
                let sub = lo.subtypes.is_subset(&hi.subtypes) && lo.containments.is_subset(&hi.containments);
                writeln!(out, "lfp within gfp: {}", if sub { "yes" } else { "no" }).unwrap();
                if !sub {
                    return Outcome::new(EXIT_CHECK_FAILED, out);
                }
            }
            Outcome::new(EXIT_OK, out)
        }
    }
}

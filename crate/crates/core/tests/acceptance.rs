//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wordeq::graph::{build, verdict, Budget, BuildStatus, NodeKind, Verdict};
use wordeq::oracle::{brute_solutions, gen_instance, GenParams, InstanceClass};
use wordeq::solutions::{accepted_programs, enumerate_solutions, min_witness, path_solution};
use wordeq::word::{
    system_letters, system_vars, Equation, Letter, Narrowing, NarrowingProgram, SystemState, Var,
    Word,
};
use wordeq::{verify, Scheme};

struct Check {
    claims: Vec<(String, bool)>,
}

impl Check {
    fn new() -> Check {
        Check { claims: Vec::new() }
    }

    fn claim(&mut self, what: impl Into<String>, ok: bool) {
        self.claims.push((what.into(), ok));
    }

    fn passed(&self) -> bool {
        self.claims.iter().all(|(_, ok)| *ok)
    }

    fn summary(&self) -> String {
        self.claims
            .iter()
            .map(|(what, ok)| format!("{what} [{}]", if *ok { "ok" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn eq(l: &str, r: &str) -> Equation {
    Equation::parse(l, r).unwrap()
}

fn letters(s: &str) -> BTreeSet<Letter> {
    s.chars().map(|c| Letter::new(c).unwrap()).collect()
}

fn budget(nodes: usize) -> Budget {
    Budget::new(nodes, 10_000).unwrap()
}

/// Substitutes composed values with leftover variables erased and compares
/// both sides of every equation.
fn holds_textually(p: &NarrowingProgram, system: &[Equation]) -> bool {
    let vars = system_vars(system);
    let ground = |x: Var| {
        vars.contains(&x)
            .then(|| p.compose_value(x).substitute(|_| Some(Word::empty())))
    };
    system.iter().all(|e| e.holds_under(ground))
}

fn figure_graph() -> Check {
    let mut c = Check::new();
    let t = Instant::now();
    let out = build(&[eq("Axy", "xyA")], Scheme::Base, Budget::default()).unwrap();
    let elapsed = t.elapsed();
    let g = &out.graph;
    let internal = g.count_kind(NodeKind::Internal);
    let tleaves = g.count_kind(NodeKind::TLeaf);
    c.claim(format!("internal nodes {internal} == 2"), internal == 2);
    c.claim(format!("T leaves {tleaves} == 2"), tleaves == 2);
    c.claim(
        format!("back edges {} == 2", g.back_edges.len()),
        g.back_edges.len() == 2,
    );
    c.claim(
        format!("verdict {}", verdict(&out)),
        verdict(&out) == Verdict::Sat,
    );
    let golden = include_str!("golden/axy_base.dot");
    c.claim("DOT matches golden", g.to_dot() == golden);
    c.claim(
        format!("{elapsed:?} < 1s"),
        elapsed < Duration::from_secs(1),
    );
    c
}

fn fig5_triptych() -> Check {
    let mut c = Check::new();
    let system = [eq("xxAyBz", "Axxzy")];

    let t = Instant::now();
    let base = build(&system, Scheme::Base, budget(10_000)).unwrap();
    let ok_time = t.elapsed() < Duration::from_secs(1);
    c.claim(
        format!("base {} ({:?})", verdict(&base), base.status),
        verdict(&base) == Verdict::Unknown(wordeq::Exhaustion::NodeLimit) && ok_time,
    );

    let t = Instant::now();
    let split = build(&system, Scheme::Split, Budget::default()).unwrap();
    let ok_time = t.elapsed() < Duration::from_secs(1);
    let loop_label = SystemState::Eqs(vec![eq("yBz", "zy"), eq("xxA", "Axx")]);
    let g = &split.graph;
    let loop_fold = g
        .back_edges
        .iter()
        .any(|l| g.node(l.to).label == loop_label);
    c.claim(
        format!(
            "split complete with {} nodes, fold onto the yBz=zy list",
            g.len()
        ),
        split.status == BuildStatus::Complete && loop_fold && ok_time,
    );

    let t = Instant::now();
    let count = build(&system, Scheme::Count, Budget::default()).unwrap();
    let ok_time = t.elapsed() < Duration::from_secs(1);
    c.claim(
        format!("count {} with {} nodes", verdict(&count), count.graph.len()),
        verdict(&count) == Verdict::Unsat && count.graph.len() <= 3 && ok_time,
    );
    c
}

fn hard_unsat() -> Check {
    let mut c = Check::new();
    for scheme in [Scheme::Split, Scheme::Count] {
        let t = Instant::now();
        let out = build(&[eq("ABxxyy", "xxyyBA")], scheme, budget(10_000)).unwrap();
        let elapsed = t.elapsed();
        c.claim(
            format!(
                "{scheme}: {} in {} nodes, {elapsed:?}",
                verdict(&out),
                out.graph.len()
            ),
            verdict(&out) == Verdict::Unsat && elapsed < Duration::from_secs(5),
        );
    }
    c
}

fn quadratic_sat() -> Check {
    let mut c = Check::new();
    let system = [eq("xyzABABAB", "AAABBByzx")];
    let t = Instant::now();
    let out = build(&system, Scheme::Base, Budget::default()).unwrap();
    let v = verdict(&out);
    c.claim(
        format!("base verdict {v} ({} nodes)", out.graph.len()),
        v == Verdict::Sat,
    );
    match min_witness(&out.graph) {
        Some(w) => {
            c.claim("witness verifies", verify(&w, &system, Scheme::Base));
            let s = path_solution(&w, &system_vars(&system));
            let ground = s.instantiate(
                &s.residual_free
                    .iter()
                    .map(|&x| (x, Word::empty()))
                    .collect(),
            );
            let oracle = brute_solutions(&system, &letters("AB"), 6);
            let fits = ground.assignment.values().all(|w| w.len() <= 6);
            c.claim(
                format!("oracle confirms {ground}"),
                !fits || oracle.contains(&ground),
            );
        }
        None => {
            let oracle = brute_solutions(&system, &letters("AB"), 6);
            c.claim("witness exists", false);
            c.claim(
                format!("oracle solutions up to length 6: {}", oracle.len()),
                !oracle.is_empty(),
            );
        }
    }
    c.claim(
        format!("{:?} < 10s", t.elapsed()),
        t.elapsed() < Duration::from_secs(10),
    );
    c
}

fn termination_suites() -> Check {
    let mut c = Check::new();
    let suites = [
        (
            "quadratic/base",
            InstanceClass::Quadratic,
            Scheme::Base,
            GenParams {
                vars: 3,
                letters: 2,
                side_len: 8,
                equations: 1,
            },
        ),
        (
            "sro/split",
            InstanceClass::SroRep,
            Scheme::Split,
            GenParams {
                vars: 3,
                letters: 2,
                side_len: 6,
                equations: 1,
            },
        ),
        (
            "one-variable/count",
            InstanceClass::OneVariable,
            Scheme::Count,
            GenParams {
                vars: 1,
                letters: 2,
                side_len: 12,
                equations: 1,
            },
        ),
    ];
    for (name, class, scheme, params) in suites {
        let mut exhausted = 0;
        let mut slow = 0;
        let mut max_nodes = 0;
        for seed in 0..200 {
            let system = gen_instance(class, seed, params);
            let t = Instant::now();
            let out = build(&system, scheme, budget(100_000)).unwrap();
            if t.elapsed() >= Duration::from_secs(5) {
                slow += 1;
            }
            if out.status != BuildStatus::Complete {
                exhausted += 1;
            }
            max_nodes = max_nodes.max(out.graph.len());
        }
        c.claim(
            format!("{name}: {exhausted} exhausted, {slow} slow, max {max_nodes} nodes"),
            exhausted == 0 && slow == 0,
        );
    }
    c
}

fn oracle_equivalence() -> Check {
    let mut c = Check::new();
    let alphabet = letters("AB");
    let mut completed = 0;
    let mut mismatches = Vec::new();
    for seed in 0..500u64 {
        let params = GenParams {
            vars: 3,
            letters: 2,
            side_len: 6,
            equations: 1 + (seed % 2) as usize,
        };
        let system = gen_instance(InstanceClass::Random, seed, params);
        let out = build(&system, Scheme::Count, budget(10_000)).unwrap();
        if out.status != BuildStatus::Complete {
            continue;
        }
        completed += 1;
        let found = enumerate_solutions(&out.graph, 2, 24, &alphabet);
        if found != brute_solutions(&system, &alphabet, 2) {
            mismatches.push(seed);
        }
    }
    c.claim(
        format!(
            "{completed}/500 completed, {} mismatches {:?}",
            mismatches.len(),
            &mismatches[..mismatches.len().min(5)]
        ),
        mismatches.is_empty() && completed > 0,
    );
    c
}

fn nielsen_gap() -> Check {
    let mut c = Check::new();
    let x = Var::new('x').unwrap();
    let y = Var::new('y').unwrap();
    for scheme in Scheme::ALL {
        let out = build(&[eq("xy", "yx")], scheme, Budget::default()).unwrap();
        let found = enumerate_solutions(&out.graph, 1, 8, &letters("A"));
        let hit = found.iter().any(|s| {
            s.value(x) == Some(&Word::parse("A").unwrap()) && s.value(y) == Some(&Word::empty())
        });
        c.claim(format!("{scheme}: x=A, y= found"), hit);
    }
    c
}

fn random_narrowing(rng: &mut ChaCha8Rng, vars: &[Var], alphabet: &[Letter]) -> Narrowing {
    let x = vars[rng.gen_range(0..vars.len())];
    match rng.gen_range(0..3) {
        0 => Narrowing::to_eps(x),
        1 => Narrowing::to_letter(x, alphabet[rng.gen_range(0..alphabet.len())]),
        _ => {
            let others: Vec<Var> = vars.iter().copied().filter(|&v| v != x).collect();
            if others.is_empty() {
                Narrowing::to_eps(x)
            } else {
                Narrowing::to_var(x, others[rng.gen_range(0..others.len())]).unwrap()
            }
        }
    }
}

fn witness_round_trip() -> Check {
    let mut c = Check::new();
    let mut cases: Vec<(Vec<Equation>, Scheme)> = vec![
        (vec![eq("Axy", "xyA")], Scheme::Base),
        (vec![eq("xy", "yx")], Scheme::Split),
        (vec![eq("xAy", "yAx")], Scheme::Count),
        (vec![eq("xAyB", "Axxx")], Scheme::Split),
    ];
    for seed in 0..200u64 {
        let system = gen_instance(
            InstanceClass::Random,
            seed,
            GenParams {
                vars: 3,
                letters: 2,
                side_len: 5,
                equations: 1 + (seed % 2) as usize,
            },
        );
        let out = build(&system, Scheme::Count, budget(10_000)).unwrap();
        if out.status == BuildStatus::Complete && verdict(&out) == Verdict::Sat {
            cases.push((system, Scheme::Count));
        }
        if cases.len() >= 24 {
            break;
        }
    }

    let mut accepted = 0;
    let mut accepted_bad = 0;
    let mut pool: Vec<(usize, NarrowingProgram)> = Vec::new();
    for (i, (system, scheme)) in cases.iter().enumerate() {
        let out = build(system, *scheme, Budget::default()).unwrap();
        for p in accepted_programs(&out.graph, 10).into_iter().take(200) {
            accepted += 1;
            if !verify(&p, system, *scheme) || !holds_textually(&p, system) {
                accepted_bad += 1;
            }
            if !p.is_empty() {
                pool.push((i, p));
            }
        }
    }
    c.claim(
        format!("{accepted} extracted programs, {accepted_bad} rejected"),
        accepted > 0 && accepted_bad == 0,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut still_true, mut inconsistent) = (0, 0);
    for _ in 0..1000 {
        let (i, p) = &pool[rng.gen_range(0..pool.len())];
        let (system, scheme) = &cases[*i];
        let vars: Vec<Var> = system_vars(system).into_iter().collect();
        let mut alphabet: Vec<Letter> = system_letters(system).into_iter().collect();
        if alphabet.is_empty() {
            alphabet.push(Letter::new('A').unwrap());
        }
        let mut steps = p.steps().to_vec();
        let at = rng.gen_range(0..steps.len());
        let mut replacement = random_narrowing(&mut rng, &vars, &alphabet);
        while replacement == steps[at] {
            replacement = random_narrowing(&mut rng, &vars, &alphabet);
        }
        steps[at] = replacement;
        let mutant = NarrowingProgram::new(steps);
        if verify(&mutant, system, *scheme) {
            still_true += 1;
            if !holds_textually(&mutant, system) {
                inconsistent += 1;
            }
        }
    }
    c.claim(
        format!(
            "1000 mutants, {still_true} accepted, {inconsistent} inconsistent with substitution"
        ),
        inconsistent == 0,
    );
    c
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 figure graph of Axy=xyA", figure_graph),
        ("2 xxAyBz=Axxzy under three schemes", fig5_triptych),
        ("3 ABxxyy=xxyyBA unsat", hard_unsat),
        ("4 quadratic xyzABABAB=AAABBByzx sat", quadratic_sat),
        ("5 termination suites", termination_suites),
        ("6 oracle equivalence", oracle_equivalence),
        ("7 xy=yx finds x=A, y=", nielsen_gap),
        ("8 witness round trip", witness_round_trip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let line = match panic::catch_unwind(AssertUnwindSafe(run)) {
            Ok(check) => {
                let verdict = if check.passed() { "PASS" } else { "FAIL" };
                if !check.passed() {
                    failed += 1;
                }
                format!(
                    "{verdict} criterion {name}: {} ({:.2?})",
                    check.summary(),
                    t.elapsed()
                )
            }
            Err(_) => {
                failed += 1;
                format!("FAIL criterion {name}: panicked")
            }
        };
        println!("{line}");
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Brute-force solving and seeded instance generators for tests and benches.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::solutions::Solution;
use crate::word::{system_vars, Equation, Letter, Term, Var, Word};

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &BTreeSet<Letter>, max_len: usize) -> Vec<Word> {
    let letters: Vec<Term> = alphabet.iter().map(|&a| Term::Letter(a)).collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let next: Vec<Word> = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |&t| {
                    let mut terms = w.terms().to_vec();
                    terms.push(t);
                    Word::from_terms(terms)
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All assignments of words up to `max_value_len` that satisfy every
/// equation textually.
pub fn brute_solutions(
    system: &[Equation],
    alphabet: &BTreeSet<Letter>,
    max_value_len: usize,
) -> BTreeSet<Solution> {
    let vars: Vec<Var> = system_vars(system).into_iter().collect();
    let pool = words_up_to(alphabet, max_value_len);
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; vars.len()];
    loop {
        let value_of = |x: Var| {
            vars.iter()
                .position(|&v| v == x)
                .map(|i| pool[choice[i]].clone())
        };
        if system.iter().all(|e| e.holds_under(value_of)) {
            let assignment: BTreeMap<Var, Word> = vars
                .iter()
                .enumerate()
                .map(|(i, &x)| (x, pool[choice[i]].clone()))
                .collect();
            out.insert(Solution::ground(assignment));
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < pool.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

pub fn brute_sat(system: &[Equation], alphabet: &BTreeSet<Letter>, max_value_len: usize) -> bool {
    !brute_solutions(system, alphabet, max_value_len).is_empty()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceClass {
    /// Every variable occurs at most twice.
    Quadratic,
    /// Letters erased, both sides are the same variable sequence.
    SroRep,
    /// A single variable.
    OneVariable,
    /// No structural restriction.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    /// Distinct variables to draw from.
    pub vars: usize,
    /// Letters to draw from, starting at `A`.
    pub letters: usize,
    /// Upper bound on the length of each side.
    pub side_len: usize,
    /// Equations per system (used by `Random` only).
    pub equations: usize,
}

impl Default for GenParams {
    fn default() -> GenParams {
        GenParams {
            vars: 3,
            letters: 2,
            side_len: 6,
            equations: 1,
        }
    }
}

fn var(i: usize) -> Var {
    Var::new((b"xyzuvwabcdefghijklmnopqrst"[i % 26]) as char).expect("lowercase")
}

fn letter(i: usize) -> Letter {
    Letter::new((b'A' + (i % 26) as u8) as char).expect("uppercase")
}

fn random_letter(rng: &mut ChaCha8Rng, p: &GenParams) -> Term {
    Term::Letter(letter(rng.gen_range(0..p.letters.max(1))))
}

/// A seeded system of the requested class. The class predicate is asserted.
pub fn gen_instance(class: InstanceClass, seed: u64, p: GenParams) -> Vec<Equation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let system = match class {
        InstanceClass::Quadratic => vec![gen_quadratic(&mut rng, &p)],
        InstanceClass::SroRep => vec![gen_sro_rep(&mut rng, &p)],
        InstanceClass::OneVariable => vec![gen_one_variable(&mut rng, &p)],
        InstanceClass::Random => (0..p.equations.max(1))
            .map(|_| gen_random(&mut rng, &p))
            .collect(),
    };
    for e in &system {
        let c = e.classify();
        let ok = match class {
            InstanceClass::Quadratic => c.quadratic,
            InstanceClass::SroRep => c.strictly_regular_ordered_rep,
            InstanceClass::OneVariable => c.one_variable,
            InstanceClass::Random => true,
        };
        assert!(ok, "generator produced {e} outside {class:?}");
    }
    system
}

/// Variable occurrences are dealt to the two sides, then letters pad each
/// side up to a random length.
fn gen_quadratic(rng: &mut ChaCha8Rng, p: &GenParams) -> Equation {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..p.vars.max(1) {
        for _ in 0..rng.gen_range(1..=2) {
            if rng.gen_bool(0.5) {
                lhs.push(Term::Var(var(i)));
            } else {
                rhs.push(Term::Var(var(i)));
            }
        }
    }
    pad_and_shuffle(rng, p, &mut lhs);
    pad_and_shuffle(rng, p, &mut rhs);
    Equation::new(Word::from_terms(lhs), Word::from_terms(rhs))
}

fn pad_and_shuffle(rng: &mut ChaCha8Rng, p: &GenParams, side: &mut Vec<Term>) {
    let target = rng.gen_range(side.len()..=p.side_len.max(side.len()));
    while side.len() < target {
        side.push(random_letter(rng, p));
    }
    side.shuffle(rng);
}

/// One variable sequence, with letters inserted independently on each side.
fn gen_sro_rep(rng: &mut ChaCha8Rng, p: &GenParams) -> Equation {
    let n_vars = rng.gen_range(1..=p.side_len.max(1));
    let seq: Vec<Term> = (0..n_vars)
        .map(|_| Term::Var(var(rng.gen_range(0..p.vars.max(1)))))
        .collect();
    let side = |rng: &mut ChaCha8Rng| {
        let mut terms = seq.clone();
        for _ in 0..rng.gen_range(0..=p.side_len) {
            let at = rng.gen_range(0..=terms.len());
            terms.insert(at, random_letter(rng, p));
        }
        Word::from_terms(terms)
    };
    let lhs = side(rng);
    let rhs = side(rng);
    Equation::new(lhs, rhs)
}

fn gen_one_variable(rng: &mut ChaCha8Rng, p: &GenParams) -> Equation {
    let x = Term::Var(var(0));
    let side = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=p.side_len.max(1));
        Word::from_terms(
            (0..len)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        x
                    } else {
                        random_letter(rng, p)
                    }
                })
                .collect(),
        )
    };
    let lhs = side(rng);
    let rhs = side(rng);
    Equation::new(lhs, rhs)
}

fn gen_random(rng: &mut ChaCha8Rng, p: &GenParams) -> Equation {
    let side = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..=p.side_len);
        Word::from_terms(
            (0..len)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Term::Var(var(rng.gen_range(0..p.vars.max(1))))
                    } else {
                        random_letter(rng, p)
                    }
                })
                .collect(),
        )
    };
    let lhs = side(rng);
    let rhs = side(rng);
    Equation::new(lhs, rhs)
}

/// A named benchmark system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchInstance {
    pub name: String,
    pub system: Vec<Equation>,
}

/// Fifty systems in five families of ten: quadratic, strictly
/// regular-ordered, one-variable, two-equation quadratic lists, and
/// unrestricted random equations.
pub fn benchmark_families(seed: u64) -> Vec<BenchInstance> {
    let mut out = Vec::with_capacity(50);
    let families: [(&str, InstanceClass, GenParams); 5] = [
        (
            "quadratic",
            InstanceClass::Quadratic,
            GenParams {
                vars: 3,
                letters: 2,
                side_len: 6,
                equations: 1,
            },
        ),
        (
            "sro",
            InstanceClass::SroRep,
            GenParams {
                vars: 2,
                letters: 2,
                side_len: 4,
                equations: 1,
            },
        ),
        (
            "onevar",
            InstanceClass::OneVariable,
            GenParams {
                vars: 1,
                letters: 2,
                side_len: 8,
                equations: 1,
            },
        ),
        (
            "system",
            InstanceClass::Quadratic,
            GenParams {
                vars: 2,
                letters: 2,
                side_len: 4,
                equations: 1,
            },
        ),
        (
            "random",
            InstanceClass::Random,
            GenParams {
                vars: 3,
                letters: 2,
                side_len: 5,
                equations: 1,
            },
        ),
    ];
    for (f, (name, class, params)) in families.iter().enumerate() {
        for i in 0..10u64 {
            let s = seed.wrapping_mul(1_000).wrapping_add(f as u64 * 100 + i);
            let system = if *name == "system" {
                let mut a = gen_instance(*class, s, *params);
                a.extend(gen_instance(*class, s.wrapping_add(7_919), *params));
                a
            } else {
                gen_instance(*class, s, *params)
            };
            out.push(BenchInstance {
                name: format!("{name}_{i:02}"),
                system,
            });
        }
    }
    out
}

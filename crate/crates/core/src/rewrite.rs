//! Simplification schemes applied after every narrowing step.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::word::{Equation, SystemState, Term, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Reduce a single equation.
    Base,
    /// Reduce and left-split every equation of the list.
    Split,
    /// Split on both ends, then reject equations failing the counting check.
    Count,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Base, Scheme::Split, Scheme::Count];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Base => "base",
            Scheme::Split => "split",
            Scheme::Count => "count",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Scheme, String> {
        match s.to_ascii_lowercase().as_str() {
            "base" => Ok(Scheme::Base),
            "split" => Ok(Scheme::Split),
            "count" => Ok(Scheme::Count),
            other => Err(format!(
                "unknown scheme '{other}' (expected base, split or count)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Reduced(Equation),
    ContradictionFound,
}

/// Strips the longest common prefix, then the longest common suffix.
pub fn reduce(e: &Equation) -> Reduction {
    let l = e.lhs.terms();
    let r = e.rhs.terms();
    let pre = l.iter().zip(r).take_while(|(a, b)| a == b).count();
    let (l, r) = (&l[pre..], &r[pre..]);
    let suf = l
        .iter()
        .rev()
        .zip(r.iter().rev())
        .take_while(|(a, b)| a == b)
        .count();
    let (l, r) = (&l[..l.len() - suf], &r[..r.len() - suf]);

    let clash = |a: Option<&Term>, b: Option<&Term>| matches!((a, b), (Some(Term::Letter(x)), Some(Term::Letter(y))) if x != y);
    if clash(l.first(), r.first()) || clash(l.last(), r.last()) {
        return Reduction::ContradictionFound;
    }
    Reduction::Reduced(Equation::new(
        Word::from_terms(l.to_vec()),
        Word::from_terms(r.to_vec()),
    ))
}

/// Length of the shortest non-empty var-permutated prefix pair (suffix pair
/// when `from_end`). Pairs made only of letters count only when letter-wise
/// equal.
fn shortest_permutated(a: &[Term], b: &[Term], from_end: bool) -> Option<usize> {
    let n = a.len().min(b.len());
    let at = |w: &[Term], i: usize| if from_end { w[w.len() - 1 - i] } else { w[i] };
    let mut diff = [0i32; 26];
    let mut unbalanced = 0usize;
    let bump = |diff: &mut [i32; 26], t: Term, delta: i32, unbalanced: &mut usize| {
        if let Term::Var(v) = t {
            let slot = &mut diff[v.index()];
            let before = *slot;
            *slot += delta;
            match (before == 0, *slot == 0) {
                (true, false) => *unbalanced += 1,
                (false, true) => *unbalanced -= 1,
                _ => {}
            }
        }
    };
    let mut letters_only = true;
    let mut letters_equal = true;
    for i in 0..n {
        let (s, t) = (at(a, i), at(b, i));
        bump(&mut diff, s, 1, &mut unbalanced);
        bump(&mut diff, t, -1, &mut unbalanced);
        letters_only &= s.is_letter() && t.is_letter();
        letters_equal &= s == t;
        if unbalanced == 0 && !(letters_only && !letters_equal) {
            return Some(i + 1);
        }
    }
    None
}

/// Splits off the shortest var-permutated prefixes: `(prefix, remainder)`.
pub fn left_split(e: &Equation) -> Option<(Equation, Equation)> {
    let k = shortest_permutated(e.lhs.terms(), e.rhs.terms(), false)?;
    let prefix = Equation::new(e.lhs.slice(0, k), e.rhs.slice(0, k));
    let rest = Equation::new(e.lhs.slice(k, e.lhs.len()), e.rhs.slice(k, e.rhs.len()));
    Some((prefix, rest))
}

/// Splits off the shortest proper var-permutated suffixes:
/// `(remainder, suffix)`. A whole var-permutated equation is left alone.
pub fn right_split(e: &Equation) -> Option<(Equation, Equation)> {
    let k = shortest_permutated(e.lhs.terms(), e.rhs.terms(), true)?;
    let (nl, nr) = (e.lhs.len(), e.rhs.len());
    if k == nl && k == nr {
        return None;
    }
    let rest = Equation::new(e.lhs.slice(0, nl - k), e.rhs.slice(0, nr - k));
    let suffix = Equation::new(e.lhs.slice(nl - k, nl), e.rhs.slice(nr - k, nr));
    Some((rest, suffix))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitOutcome {
    /// Reduced pieces; possibly containing `ε = ε`.
    Pieces(Vec<Equation>),
    Contradiction,
}

fn reduced(e: &Equation) -> Option<Equation> {
    match reduce(e) {
        Reduction::Reduced(r) => Some(r),
        Reduction::ContradictionFound => None,
    }
}

/// Left-splits until no split applies: `[remainder, prefix1, .., prefixk]`.
pub fn exhaustive_left_split(e: &Equation) -> SplitOutcome {
    let Some(mut rest) = reduced(e) else {
        return SplitOutcome::Contradiction;
    };
    let mut prefixes = Vec::new();
    while let Some((prefix, tail)) = left_split(&rest) {
        let (Some(prefix), Some(tail)) = (reduced(&prefix), reduced(&tail)) else {
            return SplitOutcome::Contradiction;
        };
        prefixes.push(prefix);
        rest = tail;
    }
    let mut pieces = vec![rest];
    pieces.extend(prefixes);
    SplitOutcome::Pieces(pieces)
}

/// Splits on both ends to a fixpoint:
/// `[remainder, suffixes in discovery order, prefixes in discovery order]`.
pub fn exhaustive_split(e: &Equation) -> SplitOutcome {
    let Some(mut rest) = reduced(e) else {
        return SplitOutcome::Contradiction;
    };
    let mut suffixes = Vec::new();
    let mut prefixes = Vec::new();
    loop {
        let (piece, tail, into_prefixes) = if let Some((p, t)) = left_split(&rest) {
            (p, t, true)
        } else if let Some((t, s)) = right_split(&rest) {
            (s, t, false)
        } else {
            break;
        };
        // Shortest pieces admit no further split on either end.
        let (Some(piece), Some(tail)) = (reduced(&piece), reduced(&tail)) else {
            return SplitOutcome::Contradiction;
        };
        if into_prefixes {
            prefixes.push(piece);
        } else {
            suffixes.push(piece);
        }
        rest = tail;
    }
    let mut pieces = vec![rest];
    pieces.extend(suffixes);
    pieces.extend(prefixes);
    SplitOutcome::Pieces(pieces)
}

/// One side dominates the other in every variable count and has strictly
/// more letters.
pub fn count_unsat(e: &Equation) -> bool {
    fn dominates(a: &Word, b: &Word) -> bool {
        let mut counts = [0i32; 26];
        for v in a.vars() {
            counts[v.index()] += 1;
        }
        for v in b.vars() {
            counts[v.index()] -= 1;
        }
        counts.iter().all(|&c| c >= 0) && a.letter_count() > b.letter_count()
    }
    dominates(&e.lhs, &e.rhs) || dominates(&e.rhs, &e.lhs)
}

/// Normalizes a state under `scheme`. Terminal states are returned unchanged.
pub fn simplify(scheme: Scheme, s: &SystemState) -> Result<SystemState, Error> {
    let eqs = match s {
        SystemState::Eqs(eqs) => eqs,
        terminal => return Ok(terminal.clone()),
    };
    let mut out = Vec::new();
    match scheme {
        Scheme::Base => {
            let [e] = eqs.as_slice() else {
                return Err(Error::BaseArity(eqs.len()));
            };
            match reduce(e) {
                Reduction::ContradictionFound => return Ok(SystemState::Contradiction),
                Reduction::Reduced(r) => out.push(r),
            }
        }
        Scheme::Split | Scheme::Count => {
            for e in eqs {
                let outcome = if scheme == Scheme::Split {
                    exhaustive_left_split(e)
                } else {
                    exhaustive_split(e)
                };
                match outcome {
                    SplitOutcome::Contradiction => return Ok(SystemState::Contradiction),
                    SplitOutcome::Pieces(pieces) => out.extend(pieces),
                }
            }
        }
    }
    out.retain(|e| !e.is_trivial());
    if scheme == Scheme::Count && out.iter().any(count_unsat) {
        return Ok(SystemState::Contradiction);
    }
    if out.is_empty() {
        Ok(SystemState::Accepted)
    } else {
        Ok(SystemState::Eqs(out))
    }
}

//! Terms, words, equations and the elementary narrowings applied to them.
//!
//! Letters are uppercase ASCII characters and variables are lowercase ASCII
//! characters, so the two namespaces never overlap and every term prints as a
//! single character.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

/// A constant of the alphabet (`A`..`Z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(char);

impl Letter {
    pub fn new(c: char) -> Result<Letter, Error> {
        if c.is_ascii_uppercase() {
            Ok(Letter(c))
        } else {
            Err(Error::InvalidLetter(c))
        }
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

/// A string variable (`a`..`z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(char);

impl Var {
    pub fn new(c: char) -> Result<Var, Error> {
        if c.is_ascii_lowercase() {
            Ok(Var(c))
        } else {
            Err(Error::InvalidVar(c))
        }
    }

    pub fn as_char(self) -> char {
        self.0
    }

    pub(crate) fn index(self) -> usize {
        (self.0 as u8 - b'a') as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Letter(Letter),
    Var(Var),
}

impl Term {
    /// Classifies a character by case. Anything else is rejected.
    pub fn from_char(c: char) -> Option<Term> {
        if c.is_ascii_uppercase() {
            Some(Term::Letter(Letter(c)))
        } else if c.is_ascii_lowercase() {
            Some(Term::Var(Var(c)))
        } else {
            None
        }
    }

    pub fn is_letter(self) -> bool {
        matches!(self, Term::Letter(_))
    }

    pub fn as_var(self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::Letter(_) => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Term::Letter(l) => l.0,
            Term::Var(v) => v.0,
        }
    }
}

impl From<Letter> for Term {
    fn from(l: Letter) -> Term {
        Term::Letter(l)
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Term {
        Term::Var(v)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A finite sequence of terms. Words order shortest-first, then
/// lexicographically term by term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Term>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_terms(terms: Vec<Term>) -> Word {
        Word(terms)
    }

    /// Builds a word from compact text such as `"xAy"`; whitespace is skipped.
    pub fn parse(text: &str) -> Result<Word, Error> {
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| Term::from_char(c).ok_or(Error::InvalidTerm(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Term> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Term> {
        self.0.last().copied()
    }

    /// Number of positions holding `t`.
    pub fn count(&self, t: Term) -> usize {
        self.0.iter().filter(|&&u| u == t).count()
    }

    pub fn count_var(&self, x: Var) -> usize {
        self.count(Term::Var(x))
    }

    /// Number of positions holding any letter.
    pub fn letter_count(&self) -> usize {
        self.0.iter().filter(|t| t.is_letter()).count()
    }

    pub fn is_ground(&self) -> bool {
        self.0.iter().all(|t| t.is_letter())
    }

    /// The subsequence of variable terms.
    pub fn erase_letters(&self) -> Word {
        Word(self.0.iter().copied().filter(|t| !t.is_letter()).collect())
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().filter_map(|t| t.as_var())
    }

    pub fn contains_var(&self, x: Var) -> bool {
        self.0.contains(&Term::Var(x))
    }

    /// Replaces every occurrence of the narrowed variable by its image.
    pub fn apply(&self, n: &Narrowing) -> Word {
        let x = Term::Var(n.var());
        let mut out = Vec::with_capacity(self.len() + self.count(x));
        for &t in &self.0 {
            if t == x {
                if let Some(head) = n.head() {
                    out.push(head);
                    out.push(x);
                }
            } else {
                out.push(t);
            }
        }
        Word(out)
    }

    /// Substitutes every variable that `value_of` maps; others stay in place.
    pub fn substitute(&self, mut value_of: impl FnMut(Var) -> Option<Word>) -> Word {
        let mut out = Vec::with_capacity(self.len());
        for &t in &self.0 {
            match t {
                Term::Var(v) => match value_of(v) {
                    Some(w) => out.extend(w.0),
                    None => out.push(t),
                },
                Term::Letter(_) => out.push(t),
            }
        }
        Word(out)
    }

    pub(crate) fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Term> for Word {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

/// Terms separated by single spaces; the empty word prints as nothing.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// True iff both words have the same length and every variable occurs
/// equally often in each. Letters may sit anywhere.
pub fn is_var_permutated(a: &Word, b: &Word) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut diff = [0i32; 26];
    for v in a.vars() {
        diff[v.index()] += 1;
    }
    for v in b.vars() {
        diff[v.index()] -= 1;
    }
    diff.iter().all(|&d| d == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equation {
    pub lhs: Word,
    pub rhs: Word,
}

/// Membership flags for the equation classes with known termination results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquationClass {
    /// Every variable occurs at most twice in the whole equation.
    pub quadratic: bool,
    /// Erasing letters leaves textually equal sides.
    pub strictly_regular_ordered_rep: bool,
    /// At most one distinct variable occurs.
    pub one_variable: bool,
    /// Every variable occurs at most once.
    pub linear: bool,
}

impl Equation {
    pub fn new(lhs: Word, rhs: Word) -> Equation {
        Equation { lhs, rhs }
    }

    /// Compact constructor for tests and examples: `Equation::parse("xAy", "yAx")`.
    pub fn parse(lhs: &str, rhs: &str) -> Result<Equation, Error> {
        Ok(Equation::new(Word::parse(lhs)?, Word::parse(rhs)?))
    }

    pub fn trivial() -> Equation {
        Equation::new(Word::empty(), Word::empty())
    }

    /// Both sides empty.
    pub fn is_trivial(&self) -> bool {
        self.lhs.is_empty() && self.rhs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    pub fn swapped(&self) -> Equation {
        Equation::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn apply(&self, n: &Narrowing) -> Equation {
        Equation::new(self.lhs.apply(n), self.rhs.apply(n))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.lhs.vars().chain(self.rhs.vars()).collect()
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.lhs
            .terms()
            .iter()
            .chain(self.rhs.terms())
            .filter_map(|t| match t {
                Term::Letter(l) => Some(*l),
                Term::Var(_) => None,
            })
            .collect()
    }

    pub fn total_count(&self, x: Var) -> usize {
        self.lhs.count_var(x) + self.rhs.count_var(x)
    }

    pub fn classify(&self) -> EquationClass {
        let vars = self.vars();
        let max_count = vars.iter().map(|&x| self.total_count(x)).max().unwrap_or(0);
        EquationClass {
            quadratic: max_count <= 2,
            strictly_regular_ordered_rep: self.lhs.erase_letters() == self.rhs.erase_letters(),
            one_variable: vars.len() <= 1,
            linear: max_count <= 1,
        }
    }

    /// Whether the substitution makes both sides textually equal. Variables
    /// without a value are kept as symbols.
    pub fn holds_under(&self, value_of: impl Fn(Var) -> Option<Word>) -> bool {
        self.lhs.substitute(&value_of) == self.rhs.substitute(&value_of)
    }
}

/// `lhs = rhs` with single spaces; `=` alone for the trivial equation.
impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lhs.is_empty(), self.rhs.is_empty()) {
            (true, true) => f.write_str("="),
            (true, false) => write!(f, "= {}", self.rhs),
            (false, true) => write!(f, "{} =", self.lhs),
            (false, false) => write!(f, "{} = {}", self.lhs, self.rhs),
        }
    }
}

pub fn system_vars(system: &[Equation]) -> BTreeSet<Var> {
    system.iter().flat_map(|e| e.vars()).collect()
}

pub fn system_letters(system: &[Equation]) -> BTreeSet<Letter> {
    system.iter().flat_map(|e| e.letters()).collect()
}

/// A node label: an ordered equation list, or one of the two terminal states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SystemState {
    Eqs(Vec<Equation>),
    Contradiction,
    Accepted,
}

impl SystemState {
    pub fn equations(&self) -> Option<&[Equation]> {
        match self {
            SystemState::Eqs(eqs) => Some(eqs),
            _ => None,
        }
    }

    /// Applies the narrowing to both sides of every equation, keeping order.
    /// No simplification happens here.
    pub fn apply(&self, n: &Narrowing) -> Result<SystemState, Error> {
        match self {
            SystemState::Eqs(eqs) => Ok(SystemState::Eqs(eqs.iter().map(|e| e.apply(n)).collect())),
            other => Err(Error::NotAnEquationList(other.kind_name())),
        }
    }

    pub(crate) fn kind_name(&self) -> &'static str {
        match self {
            SystemState::Eqs(_) => "equation list",
            SystemState::Contradiction => "contradiction",
            SystemState::Accepted => "accepted state",
        }
    }
}

impl fmt::Display for SystemState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemState::Eqs(eqs) => {
                for (i, e) in eqs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("\n")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            SystemState::Contradiction => f.write_str("F"),
            SystemState::Accepted => f.write_str("T"),
        }
    }
}

/// What an elementary narrowing puts in front of its variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NarrowingKind {
    /// `x ↦ ε`
    ToEps,
    /// `x ↦ a x`
    ToLetter(Letter),
    /// `x ↦ y x`, with `y ≠ x`
    ToVar(Var),
}

/// An elementary substitution `x ↦ ε`, `x ↦ a x` or `x ↦ y x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Narrowing {
    var: Var,
    kind: NarrowingKind,
}

impl Narrowing {
    pub fn to_eps(x: Var) -> Narrowing {
        Narrowing {
            var: x,
            kind: NarrowingKind::ToEps,
        }
    }

    pub fn to_letter(x: Var, a: Letter) -> Narrowing {
        Narrowing {
            var: x,
            kind: NarrowingKind::ToLetter(a),
        }
    }

    pub fn to_var(x: Var, y: Var) -> Result<Narrowing, Error> {
        if x == y {
            return Err(Error::SelfPrepend(x));
        }
        Ok(Narrowing {
            var: x,
            kind: NarrowingKind::ToVar(y),
        })
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn kind(&self) -> NarrowingKind {
        self.kind
    }

    /// The term placed before the variable, `None` for erasure.
    pub fn head(&self) -> Option<Term> {
        match self.kind {
            NarrowingKind::ToEps => None,
            NarrowingKind::ToLetter(a) => Some(Term::Letter(a)),
            NarrowingKind::ToVar(y) => Some(Term::Var(y)),
        }
    }
}

/// `.nar` line syntax: `x ->`, `x -> A x`, `x -> y x`.
impl fmt::Display for Narrowing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.head() {
            None => write!(f, "{} ->", self.var),
            Some(h) => write!(f, "{} -> {} {}", self.var, h, self.var),
        }
    }
}

/// A finite sequence of narrowings, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NarrowingProgram(pub Vec<Narrowing>);

impl NarrowingProgram {
    pub fn new(steps: Vec<Narrowing>) -> NarrowingProgram {
        NarrowingProgram(steps)
    }

    pub fn steps(&self) -> &[Narrowing] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x σ1 … σm`: the value the program composes for `x`.
    pub fn compose_value(&self, x: Var) -> Word {
        self.0
            .iter()
            .fold(Word::from_terms(vec![Term::Var(x)]), |w, n| w.apply(n))
    }
}

impl fmt::Display for NarrowingProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

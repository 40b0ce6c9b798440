//! Compatible narrowings of a state and single search steps.

use crate::error::Error;
use crate::rewrite::{simplify, Scheme};
use crate::word::{Narrowing, SystemState, Term};

/// Narrowings generated by the leading terms of the first equation, in a
/// fixed order: erasures first, left variable before right variable.
///
/// Two leading letters, or a letter facing an empty side, yield no
/// narrowing; the state is a dead end.
pub fn compatible_narrowings(s: &SystemState) -> Result<Vec<Narrowing>, Error> {
    let eqs = match s {
        SystemState::Eqs(eqs) => eqs,
        other => return Err(Error::NotAnEquationList(other.kind_name())),
    };
    let first = eqs
        .first()
        .ok_or(Error::NarrowingPrecondition("the equation list is empty"))?;
    let out = match (first.lhs.first(), first.rhs.first()) {
        (None, None) => {
            return Err(Error::NarrowingPrecondition(
                "the first equation is trivial",
            ))
        }
        (Some(Term::Var(x)), Some(Term::Letter(a)))
        | (Some(Term::Letter(a)), Some(Term::Var(x))) => {
            vec![Narrowing::to_eps(x), Narrowing::to_letter(x, a)]
        }
        (Some(Term::Var(x)), Some(Term::Var(y))) => {
            if x == y {
                return Err(Error::NarrowingPrecondition(
                    "the first equation is not reduced",
                ));
            }
            vec![
                Narrowing::to_eps(x),
                Narrowing::to_eps(y),
                Narrowing::to_var(x, y)?,
                Narrowing::to_var(y, x)?,
            ]
        }
        (Some(Term::Var(x)), None) | (None, Some(Term::Var(x))) => vec![Narrowing::to_eps(x)],
        (Some(Term::Letter(_)), Some(Term::Letter(_)))
        | (Some(Term::Letter(_)), None)
        | (None, Some(Term::Letter(_))) => Vec::new(),
    };
    Ok(out)
}

/// Applies `n` and simplifies, after checking that `n` is compatible.
pub fn step(s: &SystemState, n: &Narrowing, scheme: Scheme) -> Result<SystemState, Error> {
    if !compatible_narrowings(s)?.contains(n) {
        return Err(Error::Incompatible(n.to_string()));
    }
    step_unchecked(s, n, scheme)
}

/// `step` without the compatibility check, for callers that enumerate
/// `compatible_narrowings` themselves.
pub fn step_unchecked(
    s: &SystemState,
    n: &Narrowing,
    scheme: Scheme,
) -> Result<SystemState, Error> {
    simplify(scheme, &s.apply(n)?)
}

//! Checks whether a narrowing program drives a system to the accepted state.

use crate::narrow::{compatible_narrowings, step_unchecked};
use crate::rewrite::{simplify, Scheme};
use crate::word::{Equation, NarrowingProgram, SystemState};

/// True iff every step is compatible with the simplified state it meets and
/// the last state is accepted. All failures, including a base-scheme system
/// of the wrong size, yield `false`.
pub fn verify(p: &NarrowingProgram, system: &[Equation], scheme: Scheme) -> bool {
    if system.is_empty() {
        return p.is_empty();
    }
    let Ok(mut state) = simplify(scheme, &SystemState::Eqs(system.to_vec())) else {
        return false;
    };
    for n in p.steps() {
        match compatible_narrowings(&state) {
            Ok(allowed) if allowed.contains(n) => {}
            _ => return false,
        }
        match step_unchecked(&state, n, scheme) {
            Ok(next) => state = next,
            Err(_) => return false,
        }
    }
    state == SystemState::Accepted
}

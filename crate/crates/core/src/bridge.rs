//! Conversions between terms and machine big integers.
//!
//! This is the I/O boundary of the library and the oracle the test suites
//! check tree arithmetic against. No tree operation goes through here.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use thiserror::Error;

use crate::term::Term;

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

/// Default limit on the bit length of values produced by [`to_nat`].
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("value needs more than {budget} bits")]
    OverBudget { budget: u64 },
    #[error("negative value {0} has no term")]
    Negative(String),
    #[error("invalid natural number literal {0:?}")]
    InvalidNat(String),
}

/// Builds the term denoting `i`.
///
/// For `i > 0`, `i = 2^h * (2t + 1)` where `h` counts trailing zero bits; the
/// result is `C(from_nat(h), from_nat(t))`.
pub fn from_nat(i: &Nat) -> Term {
    enum Step {
        Build(Nat),
        Combine,
    }
    let mut steps = vec![Step::Build(i.clone())];
    let mut values: Vec<Term> = Vec::new();
    while let Some(step) = steps.pop() {
        match step {
            Step::Build(n) => {
                if n.is_zero() {
                    values.push(Term::T);
                } else {
                    let h = n.trailing_zeros().expect("nonzero");
                    let t = n >> (h + 1);
                    steps.push(Step::Combine);
                    steps.push(Step::Build(t));
                    steps.push(Step::Build(Nat::from(h)));
                }
            }
            Step::Combine => {
                let r = values.pop().expect("right child");
                let l = values.pop().expect("left child");
                values.push(Term::c(l, r));
            }
        }
    }
    values.pop().expect("one value")
}

/// Denotation of a term, within [`DEFAULT_BIT_BUDGET`] bits.
pub fn to_nat(t: &Term) -> Result<Nat, BridgeError> {
    to_nat_with_budget(t, DEFAULT_BIT_BUDGET)
}

/// Denotation of a term, refusing any intermediate value longer than
/// `budget` bits.
pub fn to_nat_with_budget(t: &Term, budget: u64) -> Result<Nat, BridgeError> {
    let over = BridgeError::OverBudget { budget };
    t.try_fold(Nat::zero, |shift, odd| {
        let odd: Nat = (odd << 1u8) + 1u8;
        let shift = u64::try_from(&shift).map_err(|_| over.clone())?;
        match shift.checked_add(odd.bits()) {
            Some(bits) if bits <= budget => Ok(odd << shift),
            _ => Err(over.clone()),
        }
    })
}

/// Alias of [`from_nat`].
pub fn term(n: &Nat) -> Term {
    from_nat(n)
}

/// Alias of [`to_nat`].
pub fn nat(t: &Term) -> Result<Nat, BridgeError> {
    to_nat(t)
}

/// Convenience for small literals.
pub fn term_u64(n: u64) -> Term {
    from_nat(&Nat::from(n))
}

/// Parses a decimal natural: ASCII digits only, no sign or separators.
pub fn parse_nat(s: &str) -> Result<Nat, BridgeError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(BridgeError::InvalidNat(s.to_string()));
    }
    Nat::from_str(s).map_err(|_| BridgeError::InvalidNat(s.to_string()))
}

/// Bit length of the value a term denotes, if it fits the budget.
pub fn bit_length(t: &Term, budget: u64) -> Result<u64, BridgeError> {
    to_nat_with_budget(t, budget).map(|n| n.bits())
}

/// Builds a term from a signed integer, rejecting negatives.
pub fn from_int(i: &BigInt) -> Result<Term, BridgeError> {
    i.to_biguint()
        .map(|n| from_nat(&n))
        .ok_or_else(|| BridgeError::Negative(i.to_string()))
}

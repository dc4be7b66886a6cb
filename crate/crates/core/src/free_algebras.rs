//! The unary (`U | S x`) and bijective base-2 (`B | O x | I x`) free
//! algebras, their folds, and the isomorphisms tying them to [`Term`].
//!
//! These exist as witnesses and cross-check oracles; no arithmetic is done
//! on them directly. Both are linear structures, so their folds iterate.

use std::fmt;

use thiserror::Error;

use crate::gcons::{digit, make_i, make_o, view_s, Digit};
use crate::term::Term;

/// Default largest value [`t_to_u`] will expand into unary form.
pub const DEFAULT_UNARY_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("value exceeds the unary bound {bound}")]
pub struct UnaryBoundError {
    pub bound: u64,
}

/// Peano numerals.
pub enum UTerm {
    U,
    Su(Box<UTerm>),
}

impl UTerm {
    pub fn su(prev: UTerm) -> UTerm {
        UTerm::Su(Box::new(prev))
    }

    /// Number of `Su` constructors.
    pub fn count(&self) -> u64 {
        fold_unary(self, 0u64, |n| n + 1)
    }
}

impl Drop for UTerm {
    fn drop(&mut self) {
        let mut cur = match self {
            UTerm::U => return,
            UTerm::Su(next) => std::mem::replace(&mut **next, UTerm::U),
        };
        while let UTerm::Su(next) = &mut cur {
            let inner = std::mem::replace(&mut **next, UTerm::U);
            cur = inner;
        }
    }
}

impl Clone for UTerm {
    fn clone(&self) -> Self {
        fold_unary(self, UTerm::U, UTerm::su)
    }
}

impl PartialEq for UTerm {
    fn eq(&self, other: &Self) -> bool {
        self.count() == other.count()
    }
}

impl Eq for UTerm {}

impl fmt::Display for UTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^{}", self.count())
    }
}

impl fmt::Debug for UTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Bijective base-2 numerals, least significant digit outermost.
pub enum BTerm {
    B,
    Ob(Box<BTerm>),
    Ib(Box<BTerm>),
}

impl BTerm {
    pub fn ob(rest: BTerm) -> BTerm {
        BTerm::Ob(Box::new(rest))
    }

    pub fn ib(rest: BTerm) -> BTerm {
        BTerm::Ib(Box::new(rest))
    }

    /// Digits from the outermost constructor inwards.
    fn digits(&self) -> Vec<bool> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                BTerm::B => return out,
                BTerm::Ob(r) => {
                    out.push(false);
                    cur = r;
                }
                BTerm::Ib(r) => {
                    out.push(true);
                    cur = r;
                }
            }
        }
    }

    /// Builds from a string over `{o, i}`, outermost digit first.
    pub fn from_digits(s: &str) -> Option<BTerm> {
        let mut acc = BTerm::B;
        for c in s.chars().rev() {
            acc = match c {
                'o' => BTerm::ob(acc),
                'i' => BTerm::ib(acc),
                _ => return None,
            };
        }
        Some(acc)
    }
}

impl Drop for BTerm {
    fn drop(&mut self) {
        let mut cur = match self {
            BTerm::B => return,
            BTerm::Ob(r) | BTerm::Ib(r) => std::mem::replace(&mut **r, BTerm::B),
        };
        loop {
            let inner = match &mut cur {
                BTerm::B => break,
                BTerm::Ob(r) | BTerm::Ib(r) => std::mem::replace(&mut **r, BTerm::B),
            };
            cur = inner;
        }
    }
}

impl Clone for BTerm {
    fn clone(&self) -> Self {
        fold_binary(self, BTerm::B, BTerm::ob, BTerm::ib)
    }
}

impl PartialEq for BTerm {
    fn eq(&self, other: &Self) -> bool {
        let (mut a, mut b) = (self, other);
        loop {
            match (a, b) {
                (BTerm::B, BTerm::B) => return true,
                (BTerm::Ob(x), BTerm::Ob(y)) | (BTerm::Ib(x), BTerm::Ib(y)) => {
                    a = x;
                    b = y;
                }
                _ => return false,
            }
        }
    }
}

impl Eq for BTerm {}

impl fmt::Display for BTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            f.write_str(if d { "i" } else { "o" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BTerm({:?})", self.to_string())
    }
}

/// The unique morphism from terms into `(X, leaf, node)`.
pub fn fold_magma<X: Clone>(t: &Term, leaf: X, mut node: impl FnMut(X, X) -> X) -> X {
    match t.try_fold(
        || leaf.clone(),
        |l, r| Ok::<X, std::convert::Infallible>(node(l, r)),
    ) {
        Ok(x) => x,
        Err(never) => match never {},
    }
}

/// The unique morphism from unary numerals into `(X, base, step)`.
pub fn fold_unary<X>(u: &UTerm, base: X, mut step: impl FnMut(X) -> X) -> X {
    let mut depth = 0u64;
    let mut cur = u;
    while let UTerm::Su(prev) = cur {
        depth += 1;
        cur = prev;
    }
    let mut acc = base;
    for _ in 0..depth {
        acc = step(acc);
    }
    acc
}

/// The unique morphism from base-2 numerals into `(X, base, o_fn, i_fn)`.
pub fn fold_binary<X>(
    b: &BTerm,
    base: X,
    mut o_fn: impl FnMut(X) -> X,
    mut i_fn: impl FnMut(X) -> X,
) -> X {
    let digits = b.digits();
    let mut acc = base;
    for d in digits.into_iter().rev() {
        acc = if d { i_fn(acc) } else { o_fn(acc) };
    }
    acc
}

/// Reads a term as a base-2 numeral through the O/I views.
pub fn t_to_b(t: &Term) -> BTerm {
    let mut digits = Vec::new();
    let mut cur = t.clone();
    loop {
        match digit(&cur) {
            Digit::Zero => break,
            Digit::O(x) => {
                digits.push(false);
                cur = x;
            }
            Digit::I(x) => {
                digits.push(true);
                cur = x;
            }
        }
    }
    let mut acc = BTerm::B;
    for d in digits.into_iter().rev() {
        acc = if d { BTerm::ib(acc) } else { BTerm::ob(acc) };
    }
    acc
}

pub fn b_to_t(b: &BTerm) -> Term {
    fold_binary(b, Term::T, |x| make_o(&x), |x| make_i(&x))
}

/// Unary form of a term, refusing values above [`DEFAULT_UNARY_BOUND`].
pub fn t_to_u(t: &Term) -> Result<UTerm, UnaryBoundError> {
    t_to_u_bounded(t, DEFAULT_UNARY_BOUND)
}

pub fn t_to_u_bounded(t: &Term, bound: u64) -> Result<UTerm, UnaryBoundError> {
    let mut count = 0u64;
    let mut cur = t.clone();
    while let Some(prev) = view_s(&cur) {
        count += 1;
        if count > bound {
            return Err(UnaryBoundError { bound });
        }
        cur = prev;
    }
    let mut acc = UTerm::U;
    for _ in 0..count {
        acc = UTerm::su(acc);
    }
    Ok(acc)
}

pub fn u_to_t(u: &UTerm) -> Term {
    fold_unary(u, Term::T, |x| x.succ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::term_u64;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn magma_folds() {
        let x = t("C(C(T,T),T)");
        assert_eq!(fold_magma(&x, Term::T, Term::c), x);
        assert_eq!(fold_magma(&x, 1u32, |a, b| a + b), 3);
        assert_eq!(fold_magma(&Term::T, 7u32, |a, b| a * b), 7);
    }

    #[test]
    fn unary_folds() {
        let two = UTerm::su(UTerm::su(UTerm::U));
        assert_eq!(fold_unary(&two, 0, |n| n + 1), 2);
        let three = UTerm::su(two.clone());
        assert_eq!(fold_unary(&three, Term::T, |x| x.succ()), t("C(T,C(T,T))"));
        assert_eq!(fold_unary(&UTerm::U, 42, |n| n * 3), 42);
        assert_eq!(three.to_string(), "S^3");
        assert_eq!(UTerm::U.to_string(), "S^0");
    }

    #[test]
    fn binary_folds() {
        let o = |n: u64| 2 * n + 1;
        let i = |n: u64| 2 * n + 2;
        assert_eq!(fold_binary(&BTerm::ib(BTerm::B), 0, o, i), 2);
        let oi = BTerm::ob(BTerm::ib(BTerm::B));
        assert_eq!(fold_binary(&oi, 0, o, i), 5);
        assert_eq!(oi.to_string(), "oi");
        assert_eq!(BTerm::from_digits("oi"), Some(oi));
        assert_eq!(BTerm::from_digits("ox"), None);
        assert_eq!(b_to_t(&BTerm::from_digits("oi").unwrap()), term_u64(5));
    }

    #[test]
    fn term_to_binary() {
        assert_eq!(t_to_b(&Term::T), BTerm::B);
        assert_eq!(t_to_b(&t("C(T,C(T,T))")), BTerm::ob(BTerm::ob(BTerm::B)));
        for n in 0..300 {
            let x = term_u64(n);
            let b = t_to_b(&x);
            assert_eq!(b_to_t(&b), x);
            assert_eq!(fold_binary(&b, 0, |k| 2 * k + 1, |k| 2 * k + 2), n);
        }
    }

    #[test]
    fn term_to_unary() {
        assert_eq!(u_to_t(&UTerm::U), Term::T);
        assert_eq!(t_to_u(&t("C(T,T)")).unwrap(), UTerm::su(UTerm::U));
        assert_eq!(
            t_to_u_bounded(&term_u64(11), 10),
            Err(UnaryBoundError { bound: 10 })
        );
        assert_eq!(t_to_u_bounded(&term_u64(10), 10).unwrap().count(), 10);
    }

    #[test]
    fn long_numerals_drop_without_overflow() {
        let u = t_to_u(&term_u64(DEFAULT_UNARY_BOUND)).unwrap();
        assert_eq!(u.count(), DEFAULT_UNARY_BOUND);
        drop(u);
        let mut b = BTerm::B;
        for k in 0..500_000 {
            b = if k % 3 == 0 {
                BTerm::ib(b)
            } else {
                BTerm::ob(b)
            };
        }
        assert_eq!(b.clone(), b);
    }
}

//! Generalized constructors: make/view pairs that let computed operations be
//! used both to build terms and to take them apart.
//!
//! | pair | make          | view matches          |
//! |------|---------------|-----------------------|
//! | S    | `n + 1`       | every `C` node        |
//! | D    | `2n`, `n > 0` | even positive terms   |
//! | O    | `2n + 1`      | odd terms             |
//! | I    | `2n + 2`      | even positive terms   |
//!
//! For each pair `view(make(x)) == Some(x)`, and `view(y) == Some(x)` implies
//! `make(x) == y`. Every term is exactly one of `T`, an `O` or an `I`, which
//! is the bijective base-2 reading of the tree.

use crate::term::{apply, Prim, Term, TermError};

pub fn make_s(x: &Term) -> Term {
    x.succ()
}

pub fn view_s(t: &Term) -> Option<Term> {
    t.pred().ok()
}

pub fn make_d(x: &Term) -> Result<Term, TermError> {
    x.double()
}

pub fn view_d(t: &Term) -> Option<Term> {
    if t.is_even_positive() {
        t.half().ok()
    } else {
        None
    }
}

pub fn make_o(x: &Term) -> Term {
    Term::c(Term::T, x.clone())
}

pub fn view_o(t: &Term) -> Option<Term> {
    match t.node() {
        Some((l, r)) if l.is_t() => Some(r.clone()),
        _ => None,
    }
}

pub fn make_i(x: &Term) -> Term {
    make_s(&make_o(x))
}

pub fn view_i(t: &Term) -> Option<Term> {
    if t.is_even_positive() {
        // p(h(t)) in one evaluation
        apply(t, Prim::Half, &[Prim::Pred]).ok()
    } else {
        None
    }
}

/// One bijective base-2 digit peeled off a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Digit {
    /// The term is `T`.
    Zero,
    /// `2n + 1`, carrying `n`.
    O(Term),
    /// `2n + 2`, carrying `n`.
    I(Term),
}

/// Classifies a term through the O/I views.
pub fn digit(t: &Term) -> Digit {
    if t.is_t() {
        Digit::Zero
    } else if let Some(x) = view_o(t) {
        Digit::O(x)
    } else {
        Digit::I(view_i(t).expect("even positive term has an I view"))
    }
}

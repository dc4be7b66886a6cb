//! Natural-number arithmetic carried out directly on terms.
//!
//! Comparison, addition and subtraction recurse digit by digit through the
//! O/I views; multiplication splits `C(hx, tx) * C(hy, ty)` into
//! `C(hx + hy, tx + ty + 2 tx ty)`; division repeatedly doubles the divisor.
//! The linear recursions are unrolled onto heap stacks so that inputs with
//! hundreds of thousands of bits do not exhaust the native stack.

use thiserror::Error;

use crate::gcons::{digit, make_d, make_i, make_o, make_s, Digit};
use crate::term::{compose, Prim};
use crate::term::{Ord3, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("subtraction underflow")]
    Underflow,
    #[error("division by zero")]
    DivisionByZero,
}

/// Numeric comparison of two terms.
pub fn cmp(u: &Term, v: &Term) -> Ord3 {
    let mut u = u.clone();
    let mut v = v.clone();
    // Digits are least significant first, so the innermost disagreement wins;
    // `pending` is the verdict of the deepest mixed O/I digit pair seen so far.
    let mut pending = Ord3::Eq;
    loop {
        let base = match (u.is_t(), v.is_t()) {
            (true, true) => Ord3::Eq,
            (true, false) => Ord3::Lt,
            (false, true) => Ord3::Gt,
            (false, false) => {
                let (x, y, from) = match (digit(&u), digit(&v)) {
                    (Digit::O(x), Digit::O(y)) | (Digit::I(x), Digit::I(y)) => (x, y, None),
                    (Digit::O(x), Digit::I(y)) => (x, y, Some(Ord3::Lt)),
                    (Digit::I(x), Digit::O(y)) => (x, y, Some(Ord3::Gt)),
                    _ => unreachable!("both terms are positive"),
                };
                if let Some(from) = from {
                    pending = from;
                }
                u = x;
                v = y;
                continue;
            }
        };
        return strengthen(base, pending);
    }
}

fn strengthen(rel: Ord3, from: Ord3) -> Ord3 {
    match rel {
        Ord3::Eq => from,
        _ => rel,
    }
}

enum Carry {
    OO,
    Mixed,
    II,
}

pub fn add(u: &Term, v: &Term) -> Term {
    let mut u = u.clone();
    let mut v = v.clone();
    let mut carries = Vec::new();
    let mut acc = loop {
        if u.is_t() {
            break v;
        }
        if v.is_t() {
            break u;
        }
        let (x, y, c) = match (digit(&u), digit(&v)) {
            (Digit::O(x), Digit::O(y)) => (x, y, Carry::OO),
            (Digit::O(x), Digit::I(y)) | (Digit::I(x), Digit::O(y)) => (x, y, Carry::Mixed),
            (Digit::I(x), Digit::I(y)) => (x, y, Carry::II),
            _ => unreachable!("both terms are positive"),
        };
        carries.push(c);
        u = x;
        v = y;
    };
    while let Some(c) = carries.pop() {
        acc = match c {
            Carry::OO => make_i(&acc),
            Carry::Mixed => compose(acc, &[Prim::Succ, Prim::Odd]).expect("total"),
            Carry::II => compose(acc, &[Prim::Succ, Prim::Odd, Prim::Succ]).expect("total"),
        };
    }
    acc
}

enum Borrow {
    OO,
    OI,
    IO,
    II,
}

/// `u - v`; fails with [`ArithError::Underflow`] when `u < v`.
pub fn sub(u: &Term, v: &Term) -> Result<Term, ArithError> {
    if cmp(u, v) == Ord3::Lt {
        return Err(ArithError::Underflow);
    }
    let mut u = u.clone();
    let mut v = v.clone();
    let mut borrows = Vec::new();
    let mut acc = loop {
        if v.is_t() {
            break u;
        }
        let (x, y, b) = match (digit(&u), digit(&v)) {
            (Digit::O(x), Digit::O(y)) => (x, y, Borrow::OO),
            (Digit::O(x), Digit::I(y)) => (x, y, Borrow::OI),
            (Digit::I(x), Digit::O(y)) => (x, y, Borrow::IO),
            (Digit::I(x), Digit::I(y)) => (x, y, Borrow::II),
            _ => return Err(ArithError::Underflow),
        };
        borrows.push(b);
        u = x;
        v = y;
    };
    while let Some(b) = borrows.pop() {
        let steps: &[Prim] = match b {
            Borrow::OO | Borrow::II => &[Prim::Odd, Prim::Pred],
            Borrow::OI => &[Prim::Odd, Prim::Pred, Prim::Pred],
            Borrow::IO => &[Prim::Odd],
        };
        acc = compose(acc, steps).map_err(|_| ArithError::Underflow)?;
    }
    Ok(acc)
}

pub fn multiply(u: &Term, v: &Term) -> Term {
    let mut u = u.clone();
    let mut v = v.clone();
    let mut frames = Vec::new();
    loop {
        match (u.node(), v.node()) {
            (Some((hx, tx)), Some((hy, ty))) => {
                let (hx, tx, hy, ty) = (hx.clone(), tx.clone(), hy.clone(), ty.clone());
                u = tx.clone();
                v = ty.clone();
                frames.push((hx, tx, hy, ty));
            }
            _ => break,
        }
    }
    let mut acc = Term::T;
    while let Some((hx, tx, hy, ty)) = frames.pop() {
        let sum = add(&tx, &ty);
        let twice = make_o(&acc).pred().expect("odd term has a predecessor");
        acc = Term::c(add(&hx, &hy), add(&sum, &twice));
    }
    acc
}

/// `2^x`, a single constructor application.
pub fn exp2(x: &Term) -> Term {
    Term::c(x.clone(), Term::T)
}

pub fn pow(u: &Term, v: &Term) -> Term {
    let mut base = u.clone();
    let mut v = v.clone();
    // Each frame holds the factor to multiply in on the way back up.
    let mut factors = Vec::new();
    loop {
        match digit(&v) {
            Digit::Zero => break,
            Digit::O(y) => {
                factors.push(base.clone());
                base = multiply(&base, &base);
                v = y;
            }
            Digit::I(y) => {
                let sq = multiply(&base, &base);
                factors.push(sq.clone());
                base = sq;
                v = y;
            }
        }
    }
    let mut acc = Term::one();
    while let Some(f) = factors.pop() {
        acc = multiply(&f, &acc);
    }
    acc
}

/// Quotient and remainder, `x = q*y + r` with `r < y`.
pub fn div_and_rem(x: &Term, y: &Term) -> Result<(Term, Term), ArithError> {
    if y.is_t() {
        return Err(ArithError::DivisionByZero);
    }
    let mut x = x.clone();
    let mut shifts = Vec::new();
    let rem = loop {
        if cmp(&x, y) == Ord3::Lt {
            break x;
        }
        let (q, r) = divstep(&x, y);
        shifts.push(q);
        x = r;
    };
    let mut quot = Term::T;
    while let Some(qt) = shifts.pop() {
        quot = add(&exp2(&qt), &quot);
    }
    Ok((quot, rem))
}

// Largest k with y * 2^k <= x, given y <= x.
fn try_to_double(x: &Term, y: &Term) -> Term {
    let mut y = y.clone();
    let mut k = Term::T;
    while cmp(x, &y) != Ord3::Lt {
        y = make_d(&y).expect("divisor is positive");
        k = make_s(&k);
    }
    k.pred().expect("at least one doubling fits")
}

fn divstep(n: &Term, m: &Term) -> (Term, Term) {
    let q = try_to_double(n, m);
    let p = multiply(&exp2(&q), m);
    let r = sub(n, &p).expect("m * 2^q <= n");
    (q, r)
}

pub fn divide(x: &Term, y: &Term) -> Result<Term, ArithError> {
    div_and_rem(x, y).map(|(q, _)| q)
}

pub fn remainder(x: &Term, y: &Term) -> Result<Term, ArithError> {
    div_and_rem(x, y).map(|(_, r)| r)
}

/// Euclid's algorithm. `gcd(x, T) = x`, so `gcd(T, T) = T`.
pub fn gcd(x: &Term, y: &Term) -> Term {
    let mut x = x.clone();
    let mut y = y.clone();
    while !y.is_t() {
        let r = remainder(&x, &y).expect("divisor is nonzero");
        x = y;
        y = r;
    }
    x
}

/// Least common multiple; `lcm(T, T)` fails because the gcd is zero.
pub fn lcm(x: &Term, y: &Term) -> Result<Term, ArithError> {
    let g = gcd(x, y);
    Ok(multiply(&divide(x, &g)?, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: u32) -> Term {
        let mut t = Term::T;
        for _ in 0..k {
            t = t.succ();
        }
        t
    }

    #[test]
    fn cmp_small() {
        assert_eq!(cmp(&Term::T, &Term::T), Ord3::Eq);
        assert_eq!(cmp(&Term::T, &n(1)), Ord3::Lt);
        for a in 0..40 {
            for b in 0..40 {
                assert_eq!(cmp(&n(a), &n(b)), a.cmp(&b).into(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn add_sub_mul_small() {
        for a in 0..30 {
            for b in 0..30 {
                assert_eq!(add(&n(a), &n(b)), n(a + b));
                assert_eq!(multiply(&n(a), &n(b)), n(a * b));
                if a >= b {
                    assert_eq!(sub(&n(a), &n(b)).unwrap(), n(a - b));
                } else {
                    assert_eq!(sub(&n(a), &n(b)), Err(ArithError::Underflow));
                }
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(add(&n(2), &n(3)), n(5));
        assert_eq!(sub(&n(7), &n(3)).unwrap(), n(4));
        assert_eq!(sub(&n(2), &n(5)), Err(ArithError::Underflow));
        assert_eq!(multiply(&Term::T, &n(9)), Term::T);
        assert_eq!(multiply(&n(6), &n(7)), n(42));
        assert_eq!(exp2(&Term::T), Term::one());
        assert_eq!(exp2(&n(10)), n(1024));
        assert_eq!(pow(&n(9), &Term::T), Term::one());
        assert_eq!(pow(&Term::T, &Term::T), Term::one());
        assert_eq!(pow(&n(3), &n(5)), n(243));
        assert_eq!(div_and_rem(&n(7), &n(2)).unwrap(), (n(3), n(1)));
        assert_eq!(div_and_rem(&n(3), &n(8)).unwrap(), (Term::T, n(3)));
        assert_eq!(
            div_and_rem(&n(3), &Term::T),
            Err(ArithError::DivisionByZero)
        );
        assert_eq!(divide(&n(42), &n(6)).unwrap(), n(7));
        assert_eq!(remainder(&n(42), &n(5)).unwrap(), n(2));
        assert_eq!(gcd(&n(6), &n(4)), n(2));
        assert_eq!(gcd(&Term::T, &Term::T), Term::T);
        assert_eq!(gcd(&n(5), &Term::T), n(5));
        assert_eq!(lcm(&n(4), &n(6)).unwrap(), n(12));
        assert_eq!(lcm(&Term::T, &Term::T), Err(ArithError::DivisionByZero));
        assert_eq!(lcm(&n(5), &Term::T).unwrap(), Term::T);
    }

    #[test]
    fn division_small() {
        for a in 0..60 {
            for b in 1..20 {
                let (q, r) = div_and_rem(&n(a), &n(b)).unwrap();
                assert_eq!((q, r), (n(a / b), n(a % b)), "{a} / {b}");
            }
        }
    }
}

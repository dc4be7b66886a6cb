//! Signed exact rationals over terms, indexed by the Calkin-Wilf tree.
//!
//! A term read as a base-2 numeral is a path from the root `1/1`: an `O`
//! digit steps to the left child `x/(x+y)`, an `I` digit to the right child
//! `(x+y)/y`. Signs ride on parity: zero is `T`, negatives are odd, positives
//! are even. Every canonical rational has exactly one code and vice versa.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{add, cmp, divide, gcd, multiply, sub, ArithError};
use crate::bridge::{from_nat, to_nat, BridgeError, Nat};
use crate::gcons::{digit, make_i, make_o, Digit};
use crate::term::{Ord3, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("fraction component is zero")]
    ZeroComponent,
    #[error("fraction components are not co-prime")]
    NotCoprime,
    #[error("subtraction underflow")]
    Underflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error(transparent)]
    Bridge(#[from] BridgeError),
}

impl From<ArithError> for RationalError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::Underflow => RationalError::Underflow,
            ArithError::DivisionByZero => RationalError::DivisionByZero,
        }
    }
}

/// A positive rational as a co-prime `(numerator, denominator)` pair of
/// nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PQ {
    num: Term,
    den: Term,
}

impl PQ {
    pub fn num(&self) -> &Term {
        &self.num
    }

    pub fn den(&self) -> &Term {
        &self.den
    }

    pub fn one() -> PQ {
        PQ {
            num: Term::one(),
            den: Term::one(),
        }
    }

    /// Reduces `(num, den)` to lowest terms.
    pub fn new(num: Term, den: Term) -> Result<PQ, RationalError> {
        pqsimpl(&num, &den)
    }

    /// Accepts a pair only if it is already canonical.
    pub fn from_coprime(num: Term, den: Term) -> Result<PQ, RationalError> {
        if num.is_t() || den.is_t() {
            return Err(RationalError::ZeroComponent);
        }
        if gcd(&num, &den) != Term::one() {
            return Err(RationalError::NotCoprime);
        }
        Ok(PQ { num, den })
    }
}

/// A signed rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Q {
    Z,
    P(PQ),
    M(PQ),
}

/// A conventional fraction with the sign on the numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: BigInt,
    pub den: BigUint,
}

impl Fraction {
    /// Normalizes a negative denominator onto the numerator; rejects zero
    /// denominators. The result is not reduced.
    pub fn new(num: BigInt, den: BigInt) -> Result<Fraction, RationalError> {
        if den.is_zero() {
            return Err(RationalError::DivisionByZero);
        }
        let num = if den.is_negative() { -num } else { num };
        Ok(Fraction {
            num,
            den: den.magnitude().clone(),
        })
    }

    pub fn integer(n: BigInt) -> Fraction {
        Fraction {
            num: n,
            den: BigUint::one(),
        }
    }

    /// Text with the denominator always present, e.g. `-3/1`.
    pub fn to_machine_string(&self) -> String {
        format!("{}/{}", self.num, self.den)
    }
}

impl fmt::Display for Fraction {
    /// Drops a unit denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid fraction {0:?}")]
pub struct ParseFractionError(pub String);

impl FromStr for Fraction {
    type Err = ParseFractionError;

    /// `[-]digits[/digits]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseFractionError(s.to_string());
        let digits = |p: &str| -> Result<BigUint, ParseFractionError> {
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            p.parse().map_err(|_| bad())
        };
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (n, d) = match body.split_once('/') {
            Some((n, d)) => (digits(n)?, digits(d)?),
            None => (digits(body)?, BigUint::one()),
        };
        if d.is_zero() {
            return Err(bad());
        }
        let sign = if neg { Sign::Minus } else { Sign::Plus };
        Ok(Fraction {
            num: BigInt::from_biguint(sign, n),
            den: d,
        })
    }
}

/// Walks the Calkin-Wilf tree along the digits of `u`.
pub fn t2pq(u: &Term) -> PQ {
    let mut moves = Vec::new();
    let mut cur = u.clone();
    loop {
        match digit(&cur) {
            Digit::Zero => break,
            Digit::O(n) => {
                moves.push(false);
                cur = n;
            }
            Digit::I(n) => {
                moves.push(true);
                cur = n;
            }
        }
    }
    let (mut x, mut y) = (Term::one(), Term::one());
    for right in moves.into_iter().rev() {
        if right {
            x = add(&x, &y);
        } else {
            y = add(&x, &y);
        }
    }
    PQ { num: x, den: y }
}

/// Position of a canonical fraction in the Calkin-Wilf tree.
pub fn pq2t(uv: &PQ) -> Result<Term, RationalError> {
    pq2t_pair(&uv.num, &uv.den)
}

/// [`pq2t`] on a raw pair, rejecting zero or non-co-prime components.
pub fn pq2t_pair(a: &Term, b: &Term) -> Result<Term, RationalError> {
    if a.is_t() || b.is_t() {
        return Err(RationalError::ZeroComponent);
    }
    if gcd(a, b) != Term::one() {
        return Err(RationalError::NotCoprime);
    }
    let one = Term::one();
    let mut moves = Vec::new();
    let (mut a, mut b) = (a.clone(), b.clone());
    while !(a == one && b == one) {
        match cmp(&a, &b) {
            Ord3::Gt => {
                a = sub(&a, &b)?;
                moves.push(true);
            }
            Ord3::Lt => {
                b = sub(&b, &a)?;
                moves.push(false);
            }
            Ord3::Eq => return Err(RationalError::NotCoprime),
        }
    }
    let mut acc = Term::T;
    for right in moves.into_iter().rev() {
        acc = if right { make_i(&acc) } else { make_o(&acc) };
    }
    Ok(acc)
}

/// Decodes a term as a signed rational: odd is negative, even positive.
pub fn from_t(t: &Term) -> Q {
    match digit(t) {
        Digit::Zero => Q::Z,
        Digit::O(x) => Q::M(t2pq(&x)),
        Digit::I(x) => Q::P(t2pq(&x)),
    }
}

pub fn to_t(q: &Q) -> Result<Term, RationalError> {
    Ok(match q {
        Q::Z => Term::T,
        Q::M(x) => make_o(&pq2t(x)?),
        Q::P(x) => make_i(&pq2t(x)?),
    })
}

pub fn nat2rat(n: &Nat) -> Q {
    from_t(&from_nat(n))
}

pub fn rat2nat(q: &Q) -> Result<Nat, RationalError> {
    Ok(to_nat(&to_t(q)?)?)
}

/// Divides both components by their gcd.
pub fn pqsimpl(x: &Term, y: &Term) -> Result<PQ, RationalError> {
    if x.is_t() || y.is_t() {
        return Err(RationalError::ZeroComponent);
    }
    let z = gcd(x, y);
    Ok(PQ {
        num: divide(x, &z)?,
        den: divide(y, &z)?,
    })
}

pub fn fraq2pq(n: &Nat, d: &Nat) -> Result<PQ, RationalError> {
    pqsimpl(&from_nat(n), &from_nat(d))
}

pub fn pq2fraq(nd: &PQ) -> Result<(Nat, Nat), RationalError> {
    Ok((to_nat(&nd.num)?, to_nat(&nd.den)?))
}

/// Shared body of [`pqadd`] and [`pqsub`]: `f(x v', u y') / (z y' v')` with
/// `z = gcd(y, v)`, `y' = y / z`, `v' = v / z`, then reduced.
pub fn pqop<F>(f: F, xy: &PQ, uv: &PQ) -> Result<PQ, RationalError>
where
    F: Fn(&Term, &Term) -> Result<Term, ArithError>,
{
    let (x, y) = (&xy.num, &xy.den);
    let (u, v) = (&uv.num, &uv.den);
    let z = gcd(y, v);
    let y1 = divide(y, &z)?;
    let v1 = divide(v, &z)?;
    let num = f(&multiply(x, &v1), &multiply(u, &y1))?;
    let den = multiply(&z, &multiply(&y1, &v1));
    pqsimpl(&num, &den)
}

pub fn pqadd(a: &PQ, b: &PQ) -> PQ {
    pqop(|x, y| Ok(add(x, y)), a, b).expect("sum of positive rationals is positive")
}

/// `a - b`, defined only when `a > b`.
pub fn pqsub(a: &PQ, b: &PQ) -> Result<PQ, RationalError> {
    pqop(sub, a, b)
}

pub fn pqcmp(xy: &PQ, uv: &PQ) -> Ord3 {
    cmp(&multiply(&xy.num, &uv.den), &multiply(&xy.den, &uv.num))
}

pub fn pqmultiply(a: &PQ, b: &PQ) -> PQ {
    pqsimpl(&multiply(&a.num, &b.num), &multiply(&a.den, &b.den))
        .expect("product of positive rationals is positive")
}

pub fn pqinverse(a: &PQ) -> PQ {
    PQ {
        num: a.den.clone(),
        den: a.num.clone(),
    }
}

pub fn pqdivide(a: &PQ, b: &PQ) -> PQ {
    pqmultiply(a, &pqinverse(b))
}

pub fn ropposite(x: &Q) -> Q {
    match x {
        Q::Z => Q::Z,
        Q::M(a) => Q::P(a.clone()),
        Q::P(a) => Q::M(a.clone()),
    }
}

pub fn radd(a: &Q, b: &Q) -> Q {
    match (a, b) {
        (Q::Z, y) => y.clone(),
        (x, Q::Z) => x.clone(),
        (Q::M(x), Q::M(y)) => Q::M(pqadd(x, y)),
        (Q::P(x), Q::P(y)) => Q::P(pqadd(x, y)),
        (Q::P(x), Q::M(y)) => match pqcmp(x, y) {
            Ord3::Lt => Q::M(pqsub(y, x).expect("ordered operands")),
            Ord3::Eq => Q::Z,
            Ord3::Gt => Q::P(pqsub(x, y).expect("ordered operands")),
        },
        (Q::M(x), Q::P(y)) => ropposite(&radd(&Q::P(x.clone()), &Q::M(y.clone()))),
    }
}

pub fn rsub(a: &Q, b: &Q) -> Q {
    radd(a, &ropposite(b))
}

pub fn rmultiply(a: &Q, b: &Q) -> Q {
    match (a, b) {
        (Q::Z, _) | (_, Q::Z) => Q::Z,
        (Q::M(x), Q::M(y)) | (Q::P(x), Q::P(y)) => Q::P(pqmultiply(x, y)),
        (Q::M(x), Q::P(y)) | (Q::P(x), Q::M(y)) => Q::M(pqmultiply(x, y)),
    }
}

pub fn rinverse(a: &Q) -> Result<Q, RationalError> {
    match a {
        Q::Z => Err(RationalError::DivisionByZero),
        Q::M(x) => Ok(Q::M(pqinverse(x))),
        Q::P(x) => Ok(Q::P(pqinverse(x))),
    }
}

pub fn rdivide(a: &Q, b: &Q) -> Result<Q, RationalError> {
    Ok(rmultiply(a, &rinverse(b)?))
}

pub fn to_fraq(q: &Q) -> Result<Fraction, RationalError> {
    Ok(match q {
        Q::Z => Fraction::integer(BigInt::zero()),
        Q::M(x) => {
            let (n, d) = pq2fraq(x)?;
            Fraction {
                num: -BigInt::from(n),
                den: d,
            }
        }
        Q::P(x) => {
            let (n, d) = pq2fraq(x)?;
            Fraction {
                num: BigInt::from(n),
                den: d,
            }
        }
    })
}

/// Imports a fraction, reducing it.
pub fn from_fraq(f: &Fraction) -> Result<Q, RationalError> {
    if f.den.is_zero() {
        return Err(RationalError::DivisionByZero);
    }
    let pq = || fraq2pq(f.num.magnitude(), &f.den);
    Ok(match f.num.sign() {
        Sign::NoSign => Q::Z,
        Sign::Plus => Q::P(pq()?),
        Sign::Minus => Q::M(pq()?),
    })
}

impl Q {
    /// The non-negative integer a natural-valued term denotes.
    pub fn from_term(n: &Term) -> Q {
        if n.is_t() {
            Q::Z
        } else {
            Q::P(PQ {
                num: n.clone(),
                den: Term::one(),
            })
        }
    }

    /// The term for this value if it is a non-negative integer.
    pub fn as_natural(&self) -> Option<Term> {
        match self {
            Q::Z => Some(Term::T),
            Q::P(x) if x.den == Term::one() => Some(x.num.clone()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::term_u64;

    fn pq(n: u64, d: u64) -> PQ {
        PQ::from_coprime(term_u64(n), term_u64(d)).unwrap()
    }

    fn frac(s: &str) -> Q {
        from_fraq(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn tree_walk() {
        assert_eq!(t2pq(&Term::T), pq(1, 1));
        assert_eq!(t2pq(&term_u64(1)), pq(1, 2));
        assert_eq!(t2pq(&term_u64(2)), pq(2, 1));
        assert_eq!(t2pq(&term_u64(4)), pq(3, 2));
        assert_eq!(t2pq(&term_u64(5)), pq(2, 3));
        assert_eq!(t2pq(&term_u64(6)), pq(3, 1));
        assert_eq!(pq2t(&pq(1, 1)).unwrap(), Term::T);
        assert_eq!(
            pq2t_pair(&term_u64(2), &term_u64(2)),
            Err(RationalError::NotCoprime)
        );
        assert_eq!(
            pq2t_pair(&Term::T, &term_u64(2)),
            Err(RationalError::ZeroComponent)
        );
        for n in 0..500 {
            assert_eq!(pq2t(&t2pq(&term_u64(n))).unwrap(), term_u64(n));
        }
    }

    #[test]
    fn signed_codes() {
        assert_eq!(from_t(&Term::T), Q::Z);
        assert_eq!(from_t(&term_u64(1)), Q::M(pq(1, 1)));
        assert_eq!(from_t(&term_u64(2)), Q::P(pq(1, 1)));
        assert_eq!(from_t(&term_u64(3)), Q::M(pq(1, 2)));
        assert_eq!(from_t(&term_u64(4)), Q::P(pq(1, 2)));
        assert_eq!(to_t(&Q::Z).unwrap(), Term::T);
        assert_eq!(to_t(&Q::M(pq(1, 1))).unwrap(), term_u64(1));
        assert_eq!(nat2rat(&Nat::zero()), Q::Z);
        assert_eq!(nat2rat(&Nat::from(4u8)), Q::P(pq(1, 2)));
        for n in 0..500u32 {
            assert_eq!(rat2nat(&nat2rat(&Nat::from(n))).unwrap(), Nat::from(n));
        }
    }

    #[test]
    fn simplification() {
        assert_eq!(pqsimpl(&term_u64(4), &term_u64(6)).unwrap(), pq(2, 3));
        assert_eq!(pqsimpl(&term_u64(1), &term_u64(7)).unwrap(), pq(1, 7));
        assert_eq!(pqsimpl(&term_u64(5), &term_u64(5)).unwrap(), PQ::one());
        assert_eq!(
            pqsimpl(&Term::T, &term_u64(5)),
            Err(RationalError::ZeroComponent)
        );
        assert_eq!(fraq2pq(&Nat::from(6u8), &Nat::from(4u8)).unwrap(), pq(3, 2));
        assert_eq!(fraq2pq(&Nat::one(), &Nat::one()).unwrap(), PQ::one());
        assert_eq!(
            PQ::from_coprime(term_u64(4), term_u64(6)),
            Err(RationalError::NotCoprime)
        );
        assert_eq!(PQ::new(term_u64(4), term_u64(6)).unwrap(), pq(2, 3));
    }

    #[test]
    fn positive_ops() {
        assert_eq!(pqadd(&pq(1, 2), &pq(1, 3)), pq(5, 6));
        assert_eq!(pqadd(&pq(1, 6), &pq(1, 6)), pq(1, 3));
        assert_eq!(pqadd(&pq(3, 2), &pq(3, 2)), pq(3, 1));
        assert_eq!(pqsub(&pq(2, 3), &pq(1, 3)).unwrap(), pq(1, 3));
        assert_eq!(pqsub(&pq(1, 3), &pq(2, 3)), Err(RationalError::Underflow));
        assert_eq!(
            pqsub(&pq(1, 2), &pq(1, 2)),
            Err(RationalError::ZeroComponent)
        );
        assert_eq!(pqcmp(&pq(1, 2), &pq(2, 3)), Ord3::Lt);
        assert_eq!(pqcmp(&pq(5, 7), &pq(5, 7)), Ord3::Eq);
        assert_eq!(pqmultiply(&pq(2, 3), &pq(3, 4)), pq(1, 2));
        assert_eq!(pqinverse(&pqinverse(&pq(5, 9))), pq(5, 9));
        assert_eq!(pqdivide(&pq(5, 9), &pq(5, 9)), PQ::one());
    }

    #[test]
    fn signed_ops() {
        assert_eq!(ropposite(&Q::Z), Q::Z);
        assert_eq!(ropposite(&frac("1/2")), frac("-1/2"));
        assert_eq!(radd(&frac("1/2"), &frac("-1/2")), Q::Z);
        assert_eq!(radd(&frac("1/2"), &frac("1/3")), frac("5/6"));
        assert_eq!(radd(&frac("1/3"), &frac("-1/2")), frac("-1/6"));
        assert_eq!(radd(&frac("-1/3"), &frac("1/2")), frac("1/6"));
        assert_eq!(radd(&frac("-1/3"), &frac("-1/2")), frac("-5/6"));
        assert_eq!(rsub(&frac("1/3"), &frac("1/2")), frac("-1/6"));
        assert_eq!(rmultiply(&Q::Z, &frac("7/3")), Q::Z);
        assert_eq!(rmultiply(&frac("-2/3"), &frac("-3/4")), frac("1/2"));
        assert_eq!(rdivide(&frac("1/2"), &frac("-3/4")).unwrap(), frac("-2/3"));
        assert_eq!(rinverse(&Q::Z), Err(RationalError::DivisionByZero));
        assert_eq!(
            rdivide(&frac("1/2"), &Q::Z),
            Err(RationalError::DivisionByZero)
        );
    }

    #[test]
    fn fractions() {
        assert_eq!(to_fraq(&Q::Z).unwrap().to_machine_string(), "0/1");
        assert_eq!(to_fraq(&Q::P(pq(3, 2))).unwrap().to_machine_string(), "3/2");
        assert_eq!(
            to_fraq(&Q::M(pq(1, 4))).unwrap().to_machine_string(),
            "-1/4"
        );
        assert_eq!(to_fraq(&frac("-6/2")).unwrap().to_string(), "-3");
        assert_eq!(frac("0/5"), Q::Z);
        assert_eq!(frac("-0"), Q::Z);
        let f = Fraction::new(BigInt::from(3), BigInt::from(-4)).unwrap();
        assert_eq!(f.to_string(), "-3/4");
        assert!(Fraction::new(BigInt::one(), BigInt::zero()).is_err());
        for bad in [
            "", "-", "1/", "/2", "1/0", "1/-2", "+1", "1.5", "1/2/3", " 1",
        ] {
            assert!(bad.parse::<Fraction>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn integer_view() {
        assert_eq!(frac("6/3").as_natural(), Some(term_u64(2)));
        assert_eq!(Q::Z.as_natural(), Some(Term::T));
        assert_eq!(frac("1/3").as_natural(), None);
        assert_eq!(frac("-2").as_natural(), None);
        assert_eq!(Q::from_term(&term_u64(9)), frac("9"));
    }
}

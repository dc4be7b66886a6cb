//! The free algebra `{T/0, C/2}` of ordered rooted binary trees.
//!
//! `T` denotes 0 and `C(x, y)` denotes `2^x * (2y + 1)`. Every finite tree is a
//! valid term and distinct trees denote distinct naturals, so structural
//! equality is numeric equality.
//!
//! Trees can be very deep (the right spine of `2^k - 1` has `k` nodes), so
//! every traversal in this module, including `Drop`, uses an explicit stack.

use std::cell::Cell;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Three-valued comparison result, ordered `Lt < Eq < Gt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ord3 {
    Lt,
    Eq,
    Gt,
}

impl Ord3 {
    /// Integer view used at text boundaries: -1, 0, 1.
    pub fn to_int(self) -> i8 {
        match self {
            Ord3::Lt => -1,
            Ord3::Eq => 0,
            Ord3::Gt => 1,
        }
    }

    pub fn reverse(self) -> Ord3 {
        match self {
            Ord3::Lt => Ord3::Gt,
            Ord3::Eq => Ord3::Eq,
            Ord3::Gt => Ord3::Lt,
        }
    }
}

impl From<Ord3> for std::cmp::Ordering {
    fn from(o: Ord3) -> Self {
        match o {
            Ord3::Lt => std::cmp::Ordering::Less,
            Ord3::Eq => std::cmp::Ordering::Equal,
            Ord3::Gt => std::cmp::Ordering::Greater,
        }
    }
}

impl From<std::cmp::Ordering> for Ord3 {
    fn from(o: std::cmp::Ordering) -> Self {
        match o {
            std::cmp::Ordering::Less => Ord3::Lt,
            std::cmp::Ordering::Equal => Ord3::Eq,
            std::cmp::Ordering::Greater => Ord3::Gt,
        }
    }
}

/// Errors raised by the partial primitives on terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("predecessor of zero")]
    PredOfZero,
    #[error("double is undefined on zero")]
    DoubleOfZero,
    #[error("half is only defined on even positive terms")]
    HalfOfOddOrZero,
}

struct Node {
    left: Term,
    right: Term,
}

/// A term of the free algebra: either the leaf `T` or a node `C(left, right)`.
///
/// Terms are immutable and cheap to clone; children are reference counted.
pub struct Term(Option<Arc<Node>>);

impl Term {
    /// The leaf, denoting zero.
    pub const T: Term = Term(None);

    /// The node constructor `C(left, right)`.
    pub fn c(left: Term, right: Term) -> Term {
        Term(Some(Arc::new(Node { left, right })))
    }

    pub fn is_t(&self) -> bool {
        self.0.is_none()
    }

    /// The children of a `C` node, or `None` for `T`.
    pub fn node(&self) -> Option<(&Term, &Term)> {
        self.0.as_deref().map(|n| (&n.left, &n.right))
    }

    pub fn left(&self) -> Option<&Term> {
        self.node().map(|(l, _)| l)
    }

    pub fn right(&self) -> Option<&Term> {
        self.node().map(|(_, r)| r)
    }

    /// `C(T, T)`, denoting one.
    pub fn one() -> Term {
        Term::c(Term::T, Term::T)
    }

    /// Odd terms have the shape `C(T, _)`.
    pub fn is_odd(&self) -> bool {
        matches!(self.node(), Some((l, _)) if l.is_t())
    }

    /// Even positive terms have the shape `C(C(_, _), _)`.
    pub fn is_even_positive(&self) -> bool {
        matches!(self.node(), Some((l, _)) if !l.is_t())
    }

    /// Number of `C` constructors in the tree; leaves are not counted.
    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let Some((l, r)) = t.node() {
                count += 1;
                stack.push(l);
                stack.push(r);
            }
        }
        count
    }

    /// Length of the longest root-to-leaf path counted in `C` nodes.
    pub fn depth(&self) -> usize {
        let mut max = 0;
        let mut stack = vec![(self, 0usize)];
        while let Some((t, d)) = stack.pop() {
            match t.node() {
                Some((l, r)) => {
                    stack.push((l, d + 1));
                    stack.push((r, d + 1));
                }
                None => max = max.max(d),
            }
        }
        max
    }

    /// Post-order fold over the tree, short-circuiting on the first error.
    ///
    /// This is the unique morphism into `(X, leaf, node)`; the traversal keeps
    /// its own stack, so depth is bounded only by memory.
    pub fn try_fold<X, E>(
        &self,
        mut leaf: impl FnMut() -> X,
        mut node: impl FnMut(X, X) -> Result<X, E>,
    ) -> Result<X, E> {
        enum Step<'a> {
            Visit(&'a Term),
            Combine,
        }
        let mut steps = vec![Step::Visit(self)];
        let mut values: Vec<X> = Vec::new();
        while let Some(step) = steps.pop() {
            match step {
                Step::Visit(t) => match t.node() {
                    None => values.push(leaf()),
                    Some((l, r)) => {
                        steps.push(Step::Combine);
                        steps.push(Step::Visit(r));
                        steps.push(Step::Visit(l));
                    }
                },
                Step::Combine => {
                    let r = values.pop().expect("fold stack underflow");
                    let l = values.pop().expect("fold stack underflow");
                    values.push(node(l, r)?);
                }
            }
        }
        Ok(values.pop().expect("fold produced no value"))
    }

    /// Successor.
    pub fn succ(&self) -> Term {
        run(Call::Succ(Open::of(self))).expect("successor is total")
    }

    /// Predecessor; fails on `T`.
    pub fn pred(&self) -> Result<Term, TermError> {
        run(Call::Pred(Open::of(self)))
    }

    /// `2n`; fails on `T`.
    pub fn double(&self) -> Result<Term, TermError> {
        run(Call::Double(Open::of(self)))
    }

    /// `n / 2` for even positive `n`.
    pub fn half(&self) -> Result<Term, TermError> {
        run(Call::Half(Open::of(self)))
    }
}

// The four primitives are mutually recursive:
//
//   s(T)       = C(T,T)          p(C(T,T)) = T
//   s(C(T,y))  = d(s(y))         p(C(T,y)) = d(y)
//   s(even z)  = C(T, h(z))      p(even z) = C(T, p(h(z)))
//   d(C(x,y))  = C(s(x), y)      h(C(x,y)) = C(p(x), y)
//
// `run` evaluates them with an explicit continuation stack.

/// A primitive step for [`compose`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Prim {
    Succ,
    Pred,
    Half,
    /// `x -> C(T, x)`.
    Odd,
}

/// Applies `steps` left to right in a single evaluation.
pub(crate) fn compose(x: Term, steps: &[Prim]) -> Result<Term, TermError> {
    let mut value = x;
    let mut rest = steps;
    while let [Prim::Odd, tail @ ..] = rest {
        value = Term::c(Term::T, value);
        rest = tail;
    }
    let Some((first, tail)) = rest.split_first() else {
        return Ok(value);
    };
    let call = match first {
        Prim::Succ => Call::Succ(Open::take(value)),
        Prim::Pred => Call::Pred(Open::take(value)),
        Prim::Half => Call::Half(Open::take(value)),
        Prim::Odd => unreachable!("leading wraps were applied above"),
    };
    run_with(call, tail)
}

// A term with its root node held unboxed, so values built inside the machine
// only reach the heap if they outlive the evaluation.
enum Open {
    Leaf,
    Node(Term, Term),
}

impl Open {
    fn of(t: &Term) -> Open {
        match t.node() {
            None => Open::Leaf,
            Some((l, r)) => Open::Node(l.clone(), r.clone()),
        }
    }

    #[inline]
    fn take(mut t: Term) -> Open {
        match t.0.take() {
            None => Open::Leaf,
            Some(arc) => match Arc::try_unwrap(arc) {
                Ok(node) => Open::Node(node.left, node.right),
                Err(shared) => Open::Node(shared.left.clone(), shared.right.clone()),
            },
        }
    }

    #[inline]
    fn close(self) -> Term {
        match self {
            Open::Leaf => Term::T,
            Open::Node(l, r) => Term::c(l, r),
        }
    }
}

/// Applies `first` and then `then` to a borrowed term.
pub(crate) fn apply(x: &Term, first: Prim, then: &[Prim]) -> Result<Term, TermError> {
    let call = match first {
        Prim::Succ => Call::Succ(Open::of(x)),
        Prim::Pred => Call::Pred(Open::of(x)),
        Prim::Half => Call::Half(Open::of(x)),
        Prim::Odd => return compose(Term::c(Term::T, x.clone()), then),
    };
    run_with(call, then)
}

enum Call {
    Succ(Open),
    Pred(Open),
    Double(Open),
    Half(Open),
}

enum Cont {
    /// Apply `s` to the value.
    Succ,
    /// Apply `p` to the value.
    Pred,
    /// Apply `h` to the value.
    Half,
    /// Apply `d` to the value.
    Double,
    /// `C(value, right)`.
    Left(Term),
    /// `C(T, value)`.
    Odd,
    /// `C(T, C(value, right))`.
    OddOver(Term),
    /// Call `p(C(value, right))`.
    PredOver(Term),
}

thread_local! {
    // Reused between evaluations; always left empty.
    static STACK: Cell<Vec<Cont>> = const { Cell::new(Vec::new()) };
}

fn run(first: Call) -> Result<Term, TermError> {
    run_with(first, &[])
}

// Evaluates `first`, then applies `then` to the result in order.
fn run_with(first: Call, then: &[Prim]) -> Result<Term, TermError> {
    let mut stack = STACK.take();
    stack.extend(then.iter().rev().map(|p| match p {
        Prim::Succ => Cont::Succ,
        Prim::Pred => Cont::Pred,
        Prim::Half => Cont::Half,
        Prim::Odd => Cont::Odd,
    }));
    let out = eval(first, &mut stack);
    stack.clear();
    if stack.capacity() > 1 << 12 {
        stack = Vec::new();
    }
    STACK.set(stack);
    out
}

fn eval(first: Call, stack: &mut Vec<Cont>) -> Result<Term, TermError> {
    let mut call = first;
    loop {
        let mut value = match call {
            Call::Succ(Open::Leaf) => Open::Node(Term::T, Term::T),
            Call::Succ(Open::Node(l, r)) => {
                if l.is_t() {
                    stack.push(Cont::Double);
                    call = Call::Succ(Open::take(r));
                } else {
                    stack.push(Cont::OddOver(r));
                    call = Call::Pred(Open::take(l));
                }
                continue;
            }
            Call::Pred(Open::Leaf) => return Err(TermError::PredOfZero),
            Call::Pred(Open::Node(l, r)) => match pred_node(l, r, stack) {
                Some(next) => {
                    call = next;
                    continue;
                }
                None => Open::Leaf,
            },
            Call::Double(Open::Leaf) => return Err(TermError::DoubleOfZero),
            Call::Double(Open::Node(l, r)) => {
                stack.push(Cont::Left(r));
                call = Call::Succ(Open::take(l));
                continue;
            }
            Call::Half(Open::Node(l, r)) if !l.is_t() => {
                stack.push(Cont::Left(r));
                call = Call::Pred(Open::take(l));
                continue;
            }
            Call::Half(_) => return Err(TermError::HalfOfOddOrZero),
        };

        call = loop {
            match stack.pop() {
                None => return Ok(value.close()),
                Some(Cont::Double) => break Call::Double(value),
                Some(Cont::Succ) => break Call::Succ(value),
                Some(Cont::Pred) => break Call::Pred(value),
                Some(Cont::Half) => break Call::Half(value),
                Some(Cont::Left(r)) => value = Open::Node(value.close(), r),
                Some(Cont::Odd) => value = Open::Node(Term::T, value.close()),
                Some(Cont::OddOver(r)) => {
                    value = Open::Node(Term::T, Term::c(value.close(), r));
                }
                Some(Cont::PredOver(r)) => match value {
                    // p(C(v, r)) without building the node first
                    Open::Node(..) => {
                        stack.push(Cont::Odd);
                        stack.push(Cont::PredOver(r));
                        break Call::Pred(value);
                    }
                    Open::Leaf => match pred_node(Term::T, r, stack) {
                        Some(next) => break next,
                        None => value = Open::Leaf,
                    },
                },
            }
        };
    }
}

// One step of `p(C(l, r))`; `None` means the result is `T`.
#[inline]
fn pred_node(l: Term, r: Term, stack: &mut Vec<Cont>) -> Option<Call> {
    if !l.is_t() {
        stack.push(Cont::Odd);
        stack.push(Cont::PredOver(r));
        Some(Call::Pred(Open::take(l)))
    } else if r.is_t() {
        None
    } else {
        Some(Call::Double(Open::take(r)))
    }
}

impl Clone for Term {
    fn clone(&self) -> Self {
        Term(self.0.clone())
    }
}

impl Default for Term {
    fn default() -> Self {
        Term::T
    }
}

// Detaches the node if this is its last reference; otherwise just releases
// the reference.
fn take_unique(t: &mut Term) -> Option<Node> {
    Arc::into_inner(t.0.take()?)
}

impl Drop for Term {
    #[inline]
    fn drop(&mut self) {
        if let Some(node) = take_unique(self) {
            drop_nodes(node);
        }
    }
}

// Frees a detached tree without recursing on the native stack.
fn drop_nodes(mut node: Node) {
    let mut pending: Vec<Node> = Vec::new();
    loop {
        let l = take_unique(&mut node.left);
        let r = take_unique(&mut node.right);
        // `node` now has leaf children, so replacing it frees it in O(1).
        node = match (l, r) {
            (Some(l), Some(r)) => {
                pending.push(l);
                r
            }
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => match pending.pop() {
                Some(n) => n,
                None => return,
            },
        };
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        let mut stack = vec![(self, other)];
        while let Some((a, b)) = stack.pop() {
            match (&a.0, &b.0) {
                (None, None) => {}
                (Some(x), Some(y)) => {
                    if Arc::ptr_eq(x, y) {
                        continue;
                    }
                    stack.push((&x.left, &y.left));
                    stack.push((&x.right, &y.right));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t.node() {
                None => state.write_u8(0),
                Some((l, r)) => {
                    state.write_u8(1);
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Piece<'a> {
            Term(&'a Term),
            Text(&'static str),
        }
        let mut stack = vec![Piece::Term(self)];
        while let Some(p) = stack.pop() {
            match p {
                Piece::Text(s) => f.write_str(s)?,
                Piece::Term(t) => match t.node() {
                    None => f.write_str("T")?,
                    Some((l, r)) => {
                        f.write_str("C(")?;
                        stack.push(Piece::Text(")"));
                        stack.push(Piece::Term(r));
                        stack.push(Piece::Text(","));
                        stack.push(Piece::Term(l));
                    }
                },
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Failure to parse the `T | C(term,term)` text format.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid term at byte {offset}: expected {expected}")]
pub struct ParseTermError {
    pub offset: usize,
    pub expected: &'static str,
}

impl FromStr for Term {
    type Err = ParseTermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        enum Pending {
            Left,
            Right(Term),
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let err = |offset, expected| Err(ParseTermError { offset, expected });

        let mut pending: Vec<Pending> = Vec::new();
        loop {
            skip_ws(&mut pos);
            let mut value = match bytes.get(pos) {
                Some(b'T') => {
                    pos += 1;
                    Term::T
                }
                Some(b'C') => {
                    pos += 1;
                    skip_ws(&mut pos);
                    if bytes.get(pos) != Some(&b'(') {
                        return err(pos, "'('");
                    }
                    pos += 1;
                    pending.push(Pending::Left);
                    continue;
                }
                _ => return err(pos, "'T' or 'C'"),
            };
            loop {
                skip_ws(&mut pos);
                match pending.pop() {
                    None => {
                        return if pos == bytes.len() {
                            Ok(value)
                        } else {
                            err(pos, "end of input")
                        };
                    }
                    Some(Pending::Left) => {
                        if bytes.get(pos) != Some(&b',') {
                            return err(pos, "','");
                        }
                        pos += 1;
                        pending.push(Pending::Right(value));
                        break;
                    }
                    Some(Pending::Right(left)) => {
                        if bytes.get(pos) != Some(&b')') {
                            return err(pos, "')'");
                        }
                        pos += 1;
                        value = Term::c(left, value);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    // Reference denotation on machine words, independent of the term code.
    fn denote(t: &Term) -> u128 {
        match t.node() {
            None => 0,
            Some((l, r)) => (1u128 << denote(l)) * (2 * denote(r) + 1),
        }
    }

    #[test]
    fn succ_examples() {
        assert_eq!(Term::T.succ(), t("C(T,T)"));
        assert_eq!(t("C(T,T)").succ(), t("C(C(T,T),T)"));
        assert_eq!(t("C(C(T,T),T)").succ(), t("C(T,C(T,T))"));
        assert_eq!(denote(&t("C(T,C(T,T))")), 3);
    }

    #[test]
    fn pred_examples() {
        assert_eq!(t("C(T,T)").pred().unwrap(), Term::T);
        assert_eq!(t("C(T,C(T,T))").pred().unwrap(), t("C(C(T,T),T)"));
        assert_eq!(Term::T.pred(), Err(TermError::PredOfZero));
    }

    #[test]
    fn double_and_half() {
        assert_eq!(t("C(T,T)").double().unwrap(), t("C(C(T,T),T)"));
        let four = t("C(C(T,T),T)").double().unwrap();
        assert_eq!(four, Term::c(t("C(T,T)").succ(), Term::T));
        assert_eq!(denote(&four), 4);
        assert_eq!(t("C(C(T,T),T)").half().unwrap(), t("C(T,T)"));
        assert_eq!(Term::T.double(), Err(TermError::DoubleOfZero));
        assert_eq!(t("C(T,T)").half(), Err(TermError::HalfOfOddOrZero));
        assert_eq!(Term::T.half(), Err(TermError::HalfOfOddOrZero));
    }

    #[test]
    fn counting_up_matches_denotation() {
        let mut x = Term::T;
        for n in 0..2000u128 {
            assert_eq!(denote(&x), n);
            let next = x.succ();
            assert_eq!(next.pred().unwrap(), x);
            if n > 0 {
                assert_eq!(denote(&x.double().unwrap()), 2 * n);
            }
            if n > 0 && n % 2 == 0 {
                assert_eq!(denote(&x.half().unwrap()), n / 2);
            }
            x = next;
        }
    }

    #[test]
    fn text_format() {
        let x = t("C( T, C(C(T,T),T))");
        assert_eq!(x.to_string(), "C(T,C(C(T,T),T))");
        assert_eq!("T".parse::<Term>().unwrap(), Term::T);
        let e = "C(T,)".parse::<Term>().unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!("C(T,T)x".parse::<Term>().unwrap_err().offset, 6);
        assert_eq!("".parse::<Term>().unwrap_err().offset, 0);
        assert_eq!("C(T T)".parse::<Term>().unwrap_err().offset, 4);
    }

    #[test]
    fn deep_spine_is_stack_safe() {
        let mut x = Term::T;
        for _ in 0..200_000 {
            x = Term::c(Term::T, x);
        }
        let y = x.clone();
        assert_eq!(x, y);
        assert_eq!(x.node_count(), 200_000);
        let text = x.to_string();
        assert_eq!(text.parse::<Term>().unwrap(), x);
        // 2^200000 - 1 plus one is 2^200000.
        let up = x.succ();
        assert_eq!(up.right(), Some(&Term::T));
        assert!(up.node_count() < 40);
        assert_eq!(up.pred().unwrap(), x);
        drop(x);
        drop(y);
    }

    #[test]
    fn composed_steps() {
        let three = t("C(T,C(T,T))");
        // O(S(3)) = 2*4+1 = 9, I(S(3)) = S(O(S(3))) = 10, p(p(O(3))) = 5.
        let nine = compose(three.clone(), &[Prim::Succ, Prim::Odd]).unwrap();
        assert_eq!(denote(&nine), 9);
        let ten = compose(three.clone(), &[Prim::Succ, Prim::Odd, Prim::Succ]).unwrap();
        assert_eq!(denote(&ten), 10);
        let five = compose(three.clone(), &[Prim::Odd, Prim::Pred, Prim::Pred]).unwrap();
        assert_eq!(denote(&five), 5);
        assert_eq!(compose(three.clone(), &[]).unwrap(), three);
        assert_eq!(compose(Term::T, &[Prim::Pred]), Err(TermError::PredOfZero));
        let two = compose(t("C(C(T,T),C(T,T))"), &[Prim::Half, Prim::Pred]).unwrap();
        assert_eq!(denote(&two), 2);
    }

    #[test]
    fn ord3_mapping() {
        assert!(Ord3::Lt < Ord3::Eq && Ord3::Eq < Ord3::Gt);
        assert_eq!(Ord3::Lt.to_int(), -1);
        assert_eq!(Ord3::Gt.reverse(), Ord3::Lt);
        assert_eq!(
            std::cmp::Ordering::from(Ord3::Eq),
            std::cmp::Ordering::Equal
        );
    }
}

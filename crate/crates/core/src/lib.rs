//! Exact arithmetic on the free algebra of ordered rooted binary trees.
//!
//! A [`Term`] is either the leaf `T` (zero) or a node `C(x, y)` denoting
//! `2^x * (2y + 1)`. Natural-number arithmetic runs directly on these trees,
//! and signed rationals are indexed by terms through the Calkin-Wilf tree.
//!
//! ```
//! use treearith::{arith, bridge};
//!
//! let six = bridge::term_u64(6);
//! let seven = bridge::term_u64(7);
//! let product = arith::multiply(&six, &seven);
//! assert_eq!(bridge::to_nat(&product).unwrap(), 42u32.into());
//! ```

pub mod arith;
pub mod bridge;
pub mod free_algebras;
pub mod gcons;
pub mod random;
pub mod rational;
pub mod term;

pub use arith::ArithError;
pub use bridge::{BridgeError, Nat};
pub use rational::{Fraction, RationalError, PQ, Q};
pub use term::{Ord3, ParseTermError, Term, TermError};

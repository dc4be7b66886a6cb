//! Random terms and naturals for property tests and benchmarks.

use num_bigint::{BigUint, RandBigInt};
use rand::Rng;

use crate::term::Term;

/// Shape-biased random term generator.
///
/// Each position is `T`, odd or even-positive with roughly equal weight, and
/// the tree never exceeds `max_nodes` constructors. Left children (the
/// exponents) are drawn with at most `max_left_nodes` constructors so the
/// denoted values stay within reach of the big-integer oracle.
#[derive(Clone, Copy, Debug)]
pub struct TermGen {
    pub max_nodes: usize,
    pub max_left_nodes: usize,
}

impl Default for TermGen {
    fn default() -> Self {
        TermGen {
            max_nodes: 24,
            max_left_nodes: 4,
        }
    }
}

impl TermGen {
    pub fn new(max_nodes: usize) -> Self {
        TermGen {
            max_nodes,
            ..Default::default()
        }
    }

    pub fn term<R: Rng + ?Sized>(&self, rng: &mut R) -> Term {
        let budget = rng.gen_range(0..=self.max_nodes);
        self.grow(rng, budget, self.max_left_nodes)
    }

    /// A term that is not `T`.
    pub fn positive<R: Rng + ?Sized>(&self, rng: &mut R) -> Term {
        loop {
            let t = self.term(rng);
            if !t.is_t() {
                return t;
            }
        }
    }

    // Builds the right spine iteratively; only left children recurse, and
    // those are capped at `left_cap` nodes.
    fn grow<R: Rng + ?Sized>(&self, rng: &mut R, mut budget: usize, left_cap: usize) -> Term {
        let mut lefts = Vec::new();
        while budget > 0 {
            match rng.gen_range(0..3) {
                0 => break,
                1 => {
                    lefts.push(Term::T);
                    budget -= 1;
                }
                _ => {
                    let cap = left_cap.min(budget - 1);
                    if cap == 0 {
                        lefts.push(Term::T);
                        budget -= 1;
                        continue;
                    }
                    let size = rng.gen_range(1..=cap);
                    let left = loop {
                        let l = self.grow(rng, size, left_cap);
                        if !l.is_t() {
                            break l;
                        }
                    };
                    budget -= 1 + left.node_count();
                    lefts.push(left);
                }
            }
        }
        let mut acc = Term::T;
        while let Some(l) = lefts.pop() {
            acc = Term::c(l, acc);
        }
        acc
    }
}

/// Uniform natural below `2^bits`.
pub fn nat_below_bits<R: Rng + ?Sized>(rng: &mut R, bits: u64) -> BigUint {
    rng.gen_biguint(bits)
}

/// Natural with a uniformly chosen bit length in `0..=max_bits`, so small
/// and large magnitudes are both common.
pub fn nat_up_to_bits<R: Rng + ?Sized>(rng: &mut R, max_bits: u64) -> BigUint {
    let bits = rng.gen_range(0..=max_bits);
    rng.gen_biguint(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_bounds_and_covers_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let gen = TermGen::new(30);
        let (mut zero, mut odd, mut even) = (0, 0, 0);
        for _ in 0..2000 {
            let t = gen.term(&mut rng);
            assert!(t.node_count() <= 30);
            if t.is_t() {
                zero += 1;
            } else if t.is_odd() {
                odd += 1;
            } else {
                even += 1;
            }
            assert!(crate::bridge::to_nat(&t).is_ok());
        }
        assert!(zero > 50 && odd > 300 && even > 300, "{zero} {odd} {even}");
    }
}

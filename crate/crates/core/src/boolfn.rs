//! Truth-table representation of Boolean functions f: {0,1}^l x {0,1}^m -> {0,1}.

use crate::alphabet::BitString;
use crate::error::{Error, Result};

/// A Boolean function of an Alice input of `alice_bits` bits and a Bob input
/// of `bob_bits` bits, stored as a dense truth table.
///
/// The table is indexed by (x, y) in lexicographic order: entry
/// `x.index() * 2^m + y.index()` with big-endian bit strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    alice_bits: usize,
    bob_bits: usize,
    truth: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(alice_bits: usize, bob_bits: usize, truth: Vec<bool>) -> Result<Self> {
        let want = 1usize << (alice_bits + bob_bits);
        if truth.len() != want {
            return Err(Error::TruthTableLength {
                got: truth.len(),
                want,
            });
        }
        Ok(Self {
            alice_bits,
            bob_bits,
            truth,
        })
    }

    pub fn from_fn<F>(alice_bits: usize, bob_bits: usize, mut f: F) -> Self
    where
        F: FnMut(&BitString, &BitString) -> bool,
    {
        let truth = (0..1usize << (alice_bits + bob_bits))
            .map(|i| {
                let x = BitString::from_index(i >> bob_bits, alice_bits);
                let y = BitString::from_index(i & ((1 << bob_bits) - 1), bob_bits);
                f(&x, &y)
            })
            .collect();
        Self {
            alice_bits,
            bob_bits,
            truth,
        }
    }

    /// The constant function with the given value.
    pub fn constant(alice_bits: usize, bob_bits: usize, value: bool) -> Self {
        Self {
            alice_bits,
            bob_bits,
            truth: vec![value; 1 << (alice_bits + bob_bits)],
        }
    }

    /// Single-bit AND, the function realized by one PR box.
    pub fn and() -> Self {
        Self {
            alice_bits: 1,
            bob_bits: 1,
            truth: vec![false, false, false, true],
        }
    }

    pub fn alice_bits(&self) -> usize {
        self.alice_bits
    }

    pub fn bob_bits(&self) -> usize {
        self.bob_bits
    }

    /// Number of Alice inputs, 2^l.
    pub fn x_count(&self) -> usize {
        1 << self.alice_bits
    }

    /// Number of Bob inputs, 2^m.
    pub fn y_count(&self) -> usize {
        1 << self.bob_bits
    }

    pub fn truth_table(&self) -> &[bool] {
        &self.truth
    }

    /// Evaluation by input indices.
    pub fn eval_index(&self, xi: usize, yi: usize) -> bool {
        debug_assert!(xi < self.x_count() && yi < self.y_count());
        self.truth[xi * self.y_count() + yi]
    }

    /// Evaluation on bit strings; lengths must match the declared widths.
    pub fn eval(&self, x: &BitString, y: &BitString) -> Result<bool> {
        if x.len() != self.alice_bits {
            return Err(Error::BitLength {
                got: x.len(),
                want: self.alice_bits,
            });
        }
        if y.len() != self.bob_bits {
            return Err(Error::BitLength {
                got: y.len(),
                want: self.bob_bits,
            });
        }
        Ok(self.eval_index(x.index(), y.index()))
    }

    /// Pointwise negation.
    pub fn negated(&self) -> Self {
        Self {
            alice_bits: self.alice_bits,
            bob_bits: self.bob_bits,
            truth: self.truth.iter().map(|&v| !v).collect(),
        }
    }

    /// The same function with the party roles swapped:
    /// `g(y, x) = f(x, y)`.
    pub fn transposed(&self) -> Self {
        Self::from_fn(self.bob_bits, self.alice_bits, |y, x| {
            self.eval_index(x.index(), y.index())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_truth_table() {
        let f = BooleanFunction::and();
        for xi in 0..2 {
            for yi in 0..2 {
                assert_eq!(f.eval_index(xi, yi), xi == 1 && yi == 1);
            }
        }
    }

    #[test]
    fn length_is_validated() {
        assert!(matches!(
            BooleanFunction::new(1, 1, vec![false; 3]),
            Err(Error::TruthTableLength { got: 3, want: 4 })
        ));
    }

    #[test]
    fn eval_validates_widths() {
        let f = BooleanFunction::and();
        let x1: BitString = "1".parse().unwrap();
        let long: BitString = "10".parse().unwrap();
        assert!(f.eval(&x1, &x1).unwrap());
        assert!(matches!(
            f.eval(&long, &x1),
            Err(Error::BitLength { got: 2, want: 1 })
        ));
    }

    #[test]
    fn index_order_is_lexicographic_in_x_then_y() {
        // f(x, y) = x1 (first bit of x), l = 2, m = 1.
        let f = BooleanFunction::from_fn(2, 1, |x, _| x.bit(0));
        assert_eq!(
            f.truth_table(),
            [false, false, false, false, true, true, true, true]
        );
    }

    #[test]
    fn transpose_swaps_roles() {
        let f = BooleanFunction::from_fn(2, 1, |x, y| x.bit(1) ^ y.bit(0));
        let t = f.transposed();
        assert_eq!(t.alice_bits(), 1);
        assert_eq!(t.bob_bits(), 2);
        for xi in 0..4 {
            for yi in 0..2 {
                assert_eq!(f.eval_index(xi, yi), t.eval_index(yi, xi));
            }
        }
    }
}

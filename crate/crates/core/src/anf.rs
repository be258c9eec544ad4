//! Algebraic normal form of f over one party's variables, with the other
//! party's input kept as a coefficient argument.
//!
//! Decomposing over Bob gives f(x, y) = XOR_S g_S(x) * y^S, where S ranges
//! over subsets of Bob's bit positions and y^S is the AND of the selected
//! bits. Coefficients come from the GF(2) Moebius transform.

use crate::boolfn::BooleanFunction;

/// Subset masks live in y-index space: bit j of a mask is the 2^j place of
/// the big-endian value of y, so y^S = 1 iff (y.index() & mask) == mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnfForm {
    alice_bits: usize,
    bob_bits: usize,
    /// coeffs[mask][x_index] = g_S(x) for the subset with that mask.
    coeffs: Vec<Vec<bool>>,
}

impl AnfForm {
    pub fn alice_bits(&self) -> usize {
        self.alice_bits
    }

    pub fn bob_bits(&self) -> usize {
        self.bob_bits
    }

    /// Coefficient truth table over x for the given subset mask.
    pub fn coefficient(&self, mask: usize) -> &[bool] {
        &self.coeffs[mask]
    }

    /// Masks whose coefficient is not identically zero, ascending; includes
    /// mask 0 (the y-free term) when present.
    pub fn nonzero_masks(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&mask| self.coeffs[mask].iter().any(|&b| b))
            .collect()
    }

    /// Evaluates the form: XOR of g_S(x) over all S contained in y.
    pub fn eval_index(&self, xi: usize, yi: usize) -> bool {
        let mut acc = false;
        for (mask, table) in self.coeffs.iter().enumerate() {
            if yi & mask == mask {
                acc ^= table[xi];
            }
        }
        acc
    }
}

/// Moebius transform over Bob's variables: for every x,
/// g_S(x) = XOR_{z subset of S} f(x, z).
pub fn anf_decompose(f: &BooleanFunction) -> AnfForm {
    let m = f.bob_bits();
    let ny = f.y_count();
    let mut coeffs = vec![vec![false; f.x_count()]; ny];
    for xi in 0..f.x_count() {
        let mut row: Vec<bool> = (0..ny).map(|yi| f.eval_index(xi, yi)).collect();
        for bit in 0..m {
            let step = 1usize << bit;
            for z in 0..ny {
                if z & step != 0 {
                    row[z] ^= row[z ^ step];
                }
            }
        }
        for (mask, coeff) in coeffs.iter_mut().enumerate() {
            coeff[xi] = row[mask];
        }
    }
    AnfForm {
        alice_bits: f.alice_bits(),
        bob_bits: m,
        coeffs,
    }
}

//! Finite-dimensional quantum strategies and the boxes they induce.
//!
//! Strategies carry a shared state vector and per-input projective
//! measurements; probabilities come from Born-rule inner products in
//! floating point and are converted to exact rationals by
//! bounded-denominator approximation followed by exact per-slice
//! renormalization, so the resulting box honors the exact-rational
//! contract of the rest of the crate.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::alphabet::Alphabet;
use crate::boxes::BipartiteBox;
use crate::error::{Error, Result};
use crate::ratio::best_rational;

/// Entrywise tolerance for state and measurement validity checks.
pub const VALIDITY_TOL: f64 = 1e-12;

/// Denominator cap used when rationalizing Born-rule probabilities.
pub const RATIONALIZATION_DENOMINATOR_CAP: u64 = 1_000_000;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            *m.at_mut(i, i) = Complex64::ONE;
        }
        m
    }

    /// Rank-one projector onto cos(theta)|0> + sin(theta)|1>.
    pub fn projector_from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(
            2,
            vec![
                Complex64::new(c * c, 0.0),
                Complex64::new(c * s, 0.0),
                Complex64::new(s * c, 0.0),
                Complex64::new(s * s, 0.0),
            ],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut Complex64 {
        &mut self.data[row * self.dim + col]
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let lhs = self.at(i, k);
                if lhs == Complex64::ZERO {
                    continue;
                }
                for j in 0..self.dim {
                    *out.at_mut(i, j) += lhs * rhs.at(k, j);
                }
            }
        }
        out
    }

    fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(l, r)| (l - r).norm())
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// A bipartite quantum strategy: shared pure state plus one projective
/// measurement per input on each side.
#[derive(Debug, Clone)]
pub struct QuantumStrategy {
    dim_a: usize,
    dim_b: usize,
    state: Vec<Complex64>,
    meas_a: Vec<Vec<CMatrix>>,
    meas_b: Vec<Vec<CMatrix>>,
}

impl QuantumStrategy {
    /// Validates the state norm and, for every input, that the projectors
    /// are Hermitian, idempotent, mutually orthogonal, and complete, all
    /// within [`VALIDITY_TOL`] entrywise.
    pub fn new(
        dim_a: usize,
        dim_b: usize,
        state: Vec<Complex64>,
        meas_a: Vec<Vec<CMatrix>>,
        meas_b: Vec<Vec<CMatrix>>,
    ) -> Result<Self> {
        assert_eq!(state.len(), dim_a * dim_b, "state length must be dim_a * dim_b");
        assert!(!meas_a.is_empty() && !meas_b.is_empty());
        let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > VALIDITY_TOL {
            return Err(Error::BadStateNorm((norm - 1.0).abs()));
        }
        Self::validate_measurements("alice", dim_a, &meas_a)?;
        Self::validate_measurements("bob", dim_b, &meas_b)?;
        let outcomes_a = meas_a[0].len();
        let outcomes_b = meas_b[0].len();
        assert!(
            meas_a.iter().all(|m| m.len() == outcomes_a)
                && meas_b.iter().all(|m| m.len() == outcomes_b),
            "every input of a party must have the same outcome count"
        );
        Ok(Self {
            dim_a,
            dim_b,
            state,
            meas_a,
            meas_b,
        })
    }

    fn validate_measurements(
        party: &'static str,
        dim: usize,
        meas: &[Vec<CMatrix>],
    ) -> Result<()> {
        for (input, projectors) in meas.iter().enumerate() {
            assert!(!projectors.is_empty());
            let mut sum = CMatrix::zeros(dim);
            for p in projectors {
                assert_eq!(p.dim(), dim, "projector dimension mismatch");
                let herm = p.hermiticity_defect();
                if herm > VALIDITY_TOL {
                    return Err(Error::InvalidMeasurement {
                        party,
                        input,
                        reason: "projector is not Hermitian",
                        deviation: herm,
                    });
                }
                let idem = p.mul(p).max_abs_diff(p);
                if idem > VALIDITY_TOL {
                    return Err(Error::InvalidMeasurement {
                        party,
                        input,
                        reason: "projector is not idempotent",
                        deviation: idem,
                    });
                }
                for i in 0..dim {
                    for j in 0..dim {
                        *sum.at_mut(i, j) += p.at(i, j);
                    }
                }
            }
            for (i, p) in projectors.iter().enumerate() {
                for q in &projectors[i + 1..] {
                    let cross = p.mul(q).max_abs();
                    if cross > VALIDITY_TOL {
                        return Err(Error::InvalidMeasurement {
                            party,
                            input,
                            reason: "projectors are not mutually orthogonal",
                            deviation: cross,
                        });
                    }
                }
            }
            let complete = sum.max_abs_diff(&CMatrix::identity(dim));
            if complete > VALIDITY_TOL {
                return Err(Error::InvalidMeasurement {
                    party,
                    input,
                    reason: "projectors do not sum to the identity",
                    deviation: complete,
                });
            }
        }
        Ok(())
    }

    /// The standard optimal CHSH strategy: maximally entangled two-qubit
    /// state, Alice measures at angles {0, pi/4}, Bob at {pi/8, -pi/8}.
    /// Attains the CHSH value (2 + sqrt 2)/4.
    pub fn optimal_chsh() -> Self {
        use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};
        let state = vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ];
        let basis = |theta: f64| {
            vec![
                CMatrix::projector_from_angle(theta),
                CMatrix::projector_from_angle(theta + std::f64::consts::FRAC_PI_2),
            ]
        };
        Self::new(
            2,
            2,
            state,
            vec![basis(0.0), basis(FRAC_PI_4)],
            vec![basis(FRAC_PI_8), basis(-FRAC_PI_8)],
        )
        .expect("textbook strategy is valid")
    }

    pub fn num_inputs_a(&self) -> usize {
        self.meas_a.len()
    }

    pub fn num_inputs_b(&self) -> usize {
        self.meas_b.len()
    }

    pub fn num_outputs_a(&self) -> usize {
        self.meas_a[0].len()
    }

    pub fn num_outputs_b(&self) -> usize {
        self.meas_b[0].len()
    }

    /// Born-rule probability <psi| A_x^a (x) B_y^b |psi> in floating point.
    pub fn probability(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        let pa = &self.meas_a[x][a];
        let pb = &self.meas_b[y][b];
        // (A (x) B) psi, with psi indexed i * dim_b + j.
        let mut image = vec![Complex64::ZERO; self.state.len()];
        for i in 0..self.dim_a {
            for j in 0..self.dim_b {
                let mut acc = Complex64::ZERO;
                for k in 0..self.dim_a {
                    let aik = pa.at(i, k);
                    if aik == Complex64::ZERO {
                        continue;
                    }
                    for l in 0..self.dim_b {
                        acc += aik * pb.at(j, l) * self.state[k * self.dim_b + l];
                    }
                }
                image[i * self.dim_b + j] = acc;
            }
        }
        let inner: Complex64 = self
            .state
            .iter()
            .zip(&image)
            .map(|(s, v)| s.conj() * v)
            .sum();
        debug_assert!(inner.im.abs() < 1e-9);
        inner.re
    }

    /// Floating-point value of a game whose alphabets match this strategy's
    /// input/outcome counts, before any rationalization.
    pub fn float_game_value(&self, game: &crate::games::BellGame) -> f64 {
        use num_traits::ToPrimitive;
        let mut total = 0.0;
        for xi in 0..game.inputs_a().len() {
            for yi in 0..game.inputs_b().len() {
                let pi = game.input_prob_idx(xi, yi).to_f64().unwrap_or(0.0);
                for ai in 0..game.outputs_a().len() {
                    for bi in 0..game.outputs_b().len() {
                        if game.predicate_idx(xi, yi, ai, bi) {
                            total += pi * self.probability(xi, yi, ai, bi);
                        }
                    }
                }
            }
        }
        total
    }
}

/// Summary of the float-to-rational conversion done by [`box_from_quantum`].
#[derive(Debug, Clone, Copy)]
pub struct RationalizationReport {
    /// Largest |float - rational| over all table entries, before
    /// renormalization.
    pub max_error: f64,
    pub denominator_cap: u64,
}

/// Converts the strategy into an exact-rational box.
///
/// Each Born-rule probability is approximated by the best rational with
/// denominator at most [`RATIONALIZATION_DENOMINATOR_CAP`]; entries must
/// land within `tolerance` of their float values, and small negative
/// floats (at least -`tolerance`) are clamped to zero. Every (x, y) slice
/// is then renormalized exactly, restoring Sum = 1 as a rational identity.
pub fn box_from_quantum(
    strategy: &QuantumStrategy,
    tolerance: f64,
) -> Result<(BipartiteBox, RationalizationReport)> {
    use num_traits::ToPrimitive;
    let nx = strategy.num_inputs_a();
    let ny = strategy.num_inputs_b();
    let na = strategy.num_outputs_a();
    let nb = strategy.num_outputs_b();

    let mut slices: Vec<Vec<BigRational>> = Vec::with_capacity(nx * ny);
    let mut max_error = 0.0f64;
    for x in 0..nx {
        for y in 0..ny {
            let mut slice = Vec::with_capacity(na * nb);
            for a in 0..na {
                for b in 0..nb {
                    let p = strategy.probability(x, y, a, b);
                    if p < -tolerance {
                        return Err(Error::NegativeProbability {
                            value: p,
                            x,
                            y,
                            a,
                            b,
                        });
                    }
                    let clamped = p.max(0.0);
                    let rational = best_rational(clamped, RATIONALIZATION_DENOMINATOR_CAP);
                    let err = (rational.to_f64().unwrap_or(f64::NAN) - clamped).abs();
                    assert!(
                        err <= tolerance,
                        "rationalization error {err} exceeds tolerance {tolerance}"
                    );
                    max_error = max_error.max(err);
                    slice.push(rational);
                }
            }
            let total: BigRational = slice.iter().cloned().sum();
            assert!(!total.is_zero(), "conditional slice has zero mass");
            for entry in &mut slice {
                *entry /= total.clone();
            }
            slices.push(slice);
        }
    }

    let inputs_a = Alphabet::indexed(nx)?;
    let inputs_b = Alphabet::indexed(ny)?;
    let outputs_a = Alphabet::indexed(na)?;
    let outputs_b = Alphabet::indexed(nb)?;
    let mut flat = Vec::with_capacity(nx * ny * na * nb);
    for slice in slices {
        flat.extend(slice);
    }
    let mut it = flat.into_iter();
    let bx = BipartiteBox::from_fn(inputs_a, inputs_b, outputs_a, outputs_b, |_, _, _, _| {
        it.next().expect("exact table size")
    });
    Ok((
        bx,
        RationalizationReport {
            max_error,
            denominator_cap: RATIONALIZATION_DENOMINATOR_CAP,
        },
    ))
}

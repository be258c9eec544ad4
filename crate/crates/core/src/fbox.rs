//! Function boxes: no-signalling computation of a Boolean function.
//!
//! The exact f-box outputs uniformly random shares a, b with
//! a xor b = f(x, y); the noisy variant gets the XOR right with a fixed
//! per-input-pair probability p. Sampling follows the operational picture:
//! draw a uniform mask bit r, hand Alice a = r and Bob b = r xor f(x, y).

use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use crate::alphabet::{Alphabet, BitString};
use crate::boolfn::BooleanFunction;
use crate::boxes::{mix, BipartiteBox};
use crate::error::{Error, Result};
use crate::ratio::{bernoulli, format_ratio, rat};

/// The exact function box for f: P[a,b|x,y] = 1/2 when a xor b = f(x,y),
/// 0 otherwise. No-signalling holds exactly and all single-party marginals
/// are 1/2.
pub fn make_fbox(f: &BooleanFunction) -> BipartiteBox {
    BipartiteBox::from_fn(
        Alphabet::bitstrings(f.alice_bits()),
        Alphabet::bitstrings(f.bob_bits()),
        Alphabet::bit(),
        Alphabet::bit(),
        |x, y, a, b| {
            let xi = x.parse::<BitString>().expect("alphabet label").index();
            let yi = y.parse::<BitString>().expect("alphabet label").index();
            if (a == "1") ^ (b == "1") == f.eval_index(xi, yi) {
                rat(1, 2)
            } else {
                rat(0, 1)
            }
        },
    )
}

/// One draw from the f-box: r uniform, a = r, b = r xor f(x, y), so that
/// a xor b = f(x, y) on every draw.
pub fn sample_fbox<R: Rng + ?Sized>(
    f: &BooleanFunction,
    x: &BitString,
    y: &BitString,
    rng: &mut R,
) -> Result<(bool, bool)> {
    let value = f.eval(x, y)?;
    let r = rng.random::<u64>() & 1 == 1;
    Ok((r, r ^ value))
}

/// A function together with a per-input-pair correctness probability p,
/// strictly between 1/2 and 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoisyBoxSpec {
    f: BooleanFunction,
    p: BigRational,
}

impl NoisyBoxSpec {
    pub fn new(f: BooleanFunction, p: BigRational) -> Result<Self> {
        if p <= rat(1, 2) || p >= BigRational::one() {
            return Err(Error::CorrectnessOutOfRange(format_ratio(&p)));
        }
        Ok(Self { f, p })
    }

    pub fn function(&self) -> &BooleanFunction {
        &self.f
    }

    pub fn correctness(&self) -> &BigRational {
        &self.p
    }
}

/// The noisy f-box: P[a,b|x,y] = p/2 when a xor b = f(x,y), (1-p)/2
/// otherwise. Equals the (p, 1-p) mixture of the f-box and the not-f box,
/// so Pr[a xor b = f(x,y)] = p for every input pair.
pub fn make_noisy_fbox(spec: &NoisyBoxSpec) -> BipartiteBox {
    let correct = make_fbox(&spec.f);
    let flipped = make_fbox(&spec.f.negated());
    let q = BigRational::one() - &spec.p;
    mix(&[(&correct, spec.p.clone()), (&flipped, q)])
        .expect("weights p, 1-p are a convex combination by construction")
}

/// One draw from the noisy box: with probability exactly p run the f-box,
/// otherwise the not-f box.
pub fn sample_noisy_fbox<R: Rng + ?Sized>(
    spec: &NoisyBoxSpec,
    x: &BitString,
    y: &BitString,
    rng: &mut R,
) -> Result<(bool, bool)> {
    let correct = bernoulli(&spec.p, rng);
    if correct {
        sample_fbox(&spec.f, x, y, rng)
    } else {
        sample_fbox(&spec.f.negated(), x, y, rng)
    }
}

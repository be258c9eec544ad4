//! Bell games and their values under classical and general box strategies.
//!
//! A game is an input distribution plus a winning predicate; its value
//! against a box is the exact winning probability. The classical value is
//! the maximum over all deterministic local strategies, which suffices
//! because shared randomness mixes deterministic strategies linearly.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::alphabet::Alphabet;
use crate::boxes::BipartiteBox;
use crate::error::{Error, Result};
use crate::ratio::{format_ratio, rat};

/// Cap on the number of deterministic strategy pairs `classical_value`
/// will enumerate.
pub const STRATEGY_ENUMERATION_GUARD: u128 = 1 << 24;

/// A bipartite game: input distribution pi(x, y) and winning predicate
/// V(a, b, x, y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellGame {
    inputs_a: Alphabet,
    inputs_b: Alphabet,
    outputs_a: Alphabet,
    outputs_b: Alphabet,
    /// pi, indexed x * |Y| + y.
    input_dist: Vec<BigRational>,
    /// V, indexed ((x * |Y| + y) * |A| + a) * |B| + b.
    predicate: Vec<bool>,
}

impl BellGame {
    pub fn from_fns<D, P>(
        inputs_a: Alphabet,
        inputs_b: Alphabet,
        outputs_a: Alphabet,
        outputs_b: Alphabet,
        mut dist: D,
        mut predicate: P,
    ) -> Result<Self>
    where
        D: FnMut(&str, &str) -> BigRational,
        P: FnMut(&str, &str, &str, &str) -> bool,
    {
        let mut input_dist = Vec::with_capacity(inputs_a.len() * inputs_b.len());
        for x in inputs_a.labels() {
            for y in inputs_b.labels() {
                input_dist.push(dist(x, y));
            }
        }
        let mut pred = Vec::new();
        for x in inputs_a.labels() {
            for y in inputs_b.labels() {
                for a in outputs_a.labels() {
                    for b in outputs_b.labels() {
                        pred.push(predicate(a, b, x, y));
                    }
                }
            }
        }
        Self::from_parts(inputs_a, inputs_b, outputs_a, outputs_b, input_dist, pred)
    }

    /// Assembles a game from dense tables, validating the distribution.
    pub fn from_parts(
        inputs_a: Alphabet,
        inputs_b: Alphabet,
        outputs_a: Alphabet,
        outputs_b: Alphabet,
        input_dist: Vec<BigRational>,
        predicate: Vec<bool>,
    ) -> Result<Self> {
        assert_eq!(input_dist.len(), inputs_a.len() * inputs_b.len());
        assert_eq!(
            predicate.len(),
            inputs_a.len() * inputs_b.len() * outputs_a.len() * outputs_b.len()
        );
        let mut sum = BigRational::zero();
        for p in &input_dist {
            if p.is_negative() {
                return Err(Error::NegativeInputProb(format_ratio(p)));
            }
            sum += p;
        }
        if !sum.is_one() {
            return Err(Error::InputDistSum(format_ratio(&sum)));
        }
        Ok(Self {
            inputs_a,
            inputs_b,
            outputs_a,
            outputs_b,
            input_dist,
            predicate,
        })
    }

    pub fn inputs_a(&self) -> &Alphabet {
        &self.inputs_a
    }

    pub fn inputs_b(&self) -> &Alphabet {
        &self.inputs_b
    }

    pub fn outputs_a(&self) -> &Alphabet {
        &self.outputs_a
    }

    pub fn outputs_b(&self) -> &Alphabet {
        &self.outputs_b
    }

    pub fn input_prob_idx(&self, xi: usize, yi: usize) -> &BigRational {
        &self.input_dist[xi * self.inputs_b.len() + yi]
    }

    pub fn predicate_idx(&self, xi: usize, yi: usize, ai: usize, bi: usize) -> bool {
        self.predicate
            [((xi * self.inputs_b.len() + yi) * self.outputs_a.len() + ai) * self.outputs_b.len()
                + bi]
    }

    pub fn predicate(&self, a: &str, b: &str, x: &str, y: &str) -> Result<bool> {
        let xi = self.inputs_a.require(x, "input x")?;
        let yi = self.inputs_b.require(y, "input y")?;
        let ai = self.outputs_a.require(a, "output a")?;
        let bi = self.outputs_b.require(b, "output b")?;
        Ok(self.predicate_idx(xi, yi, ai, bi))
    }

    fn matches_box(&self, b: &BipartiteBox) -> bool {
        self.inputs_a == *b.inputs_a()
            && self.inputs_b == *b.inputs_b()
            && self.outputs_a == *b.outputs_a()
            && self.outputs_b == *b.outputs_b()
    }
}

/// The canonical CHSH game: uniform binary inputs, win when
/// a xor b = x and y. Classical value 3/4, no-signalling value 1.
pub fn chsh_game() -> BellGame {
    BellGame::from_fns(
        Alphabet::bit(),
        Alphabet::bit(),
        Alphabet::bit(),
        Alphabet::bit(),
        |_, _| rat(1, 4),
        |a, b, x, y| ((a == "1") ^ (b == "1")) == (x == "1" && y == "1"),
    )
    .expect("uniform distribution over four pairs")
}

/// Exact winning probability of `game` when played with `strategy_box`.
pub fn game_value(game: &BellGame, strategy_box: &BipartiteBox) -> Result<BigRational> {
    if !game.matches_box(strategy_box) {
        return Err(Error::AlphabetMismatch("game vs box"));
    }
    if !strategy_box.check_normalized() {
        return Err(Error::NotNormalized);
    }
    let mut value = BigRational::zero();
    for xi in 0..game.inputs_a.len() {
        for yi in 0..game.inputs_b.len() {
            let pi = game.input_prob_idx(xi, yi);
            if pi.is_zero() {
                continue;
            }
            let mut win = BigRational::zero();
            for ai in 0..game.outputs_a.len() {
                for bi in 0..game.outputs_b.len() {
                    if game.predicate_idx(xi, yi, ai, bi) {
                        win += strategy_box.prob_idx(xi, yi, ai, bi);
                    }
                }
            }
            value += pi * win;
        }
    }
    Ok(value)
}

/// A deterministic local strategy: output indices a = g(x), b = h(y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    /// Output index of Alice per input index.
    pub alice: Vec<usize>,
    /// Output index of Bob per input index.
    pub bob: Vec<usize>,
}

impl DeterministicStrategy {
    /// The induced deterministic box over the game's alphabets.
    pub fn to_box(&self, game: &BellGame) -> BipartiteBox {
        let (alice, bob) = (self.alice.clone(), self.bob.clone());
        let (ia, ib) = (game.inputs_a().clone(), game.inputs_b().clone());
        BipartiteBox::from_fn(
            game.inputs_a().clone(),
            game.inputs_b().clone(),
            game.outputs_a().clone(),
            game.outputs_b().clone(),
            |x, y, a, b| {
                let xi = ia.index_of(x).expect("own label");
                let yi = ib.index_of(y).expect("own label");
                let ai = game.outputs_a().index_of(a).expect("own label");
                let bi = game.outputs_b().index_of(b).expect("own label");
                if alice[xi] == ai && bob[yi] == bi {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            },
        )
    }

    /// Human-readable rendering against the game's labels.
    pub fn describe(&self, game: &BellGame) -> String {
        let g = self
            .alice
            .iter()
            .enumerate()
            .map(|(xi, &ai)| {
                format!("x={} -> a={}", game.inputs_a().label(xi), game.outputs_a().label(ai))
            })
            .collect::<Vec<_>>()
            .join(", ");
        let h = self
            .bob
            .iter()
            .enumerate()
            .map(|(yi, &bi)| {
                format!("y={} -> b={}", game.inputs_b().label(yi), game.outputs_b().label(bi))
            })
            .collect::<Vec<_>>()
            .join(", ");
        format!("g: {g}\nh: {h}")
    }
}

impl fmt::Display for DeterministicStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={:?}, h={:?}", self.alice, self.bob)
    }
}

/// Steps `digits` through all functions from a domain of `len` points to a
/// codomain of `base` values, in lexicographic order of the digit tuple.
fn next_assignment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Maximum game value over all deterministic local strategies, together
/// with the lexicographically first maximizer.
///
/// Enumerates all |A|^|X| * |B|^|Y| pairs; instances beyond the guard of
/// 2^24 pairs are rejected.
pub fn classical_value(game: &BellGame) -> Result<(BigRational, DeterministicStrategy)> {
    let count = strategy_count(game)?;
    debug_assert!(count <= STRATEGY_ENUMERATION_GUARD);

    let mut best: Option<(BigRational, DeterministicStrategy)> = None;
    let mut g = vec![0usize; game.inputs_a.len()];
    loop {
        let mut h = vec![0usize; game.inputs_b.len()];
        loop {
            let mut value = BigRational::zero();
            for (xi, &ai) in g.iter().enumerate() {
                for (yi, &bi) in h.iter().enumerate() {
                    if game.predicate_idx(xi, yi, ai, bi) {
                        value += game.input_prob_idx(xi, yi);
                    }
                }
            }
            let better = match &best {
                None => true,
                Some((best_value, _)) => value > *best_value,
            };
            if better {
                best = Some((
                    value,
                    DeterministicStrategy {
                        alice: g.clone(),
                        bob: h.clone(),
                    },
                ));
            }
            if !next_assignment(&mut h, game.outputs_b.len()) {
                break;
            }
        }
        if !next_assignment(&mut g, game.outputs_a.len()) {
            break;
        }
    }
    Ok(best.expect("alphabets are non-empty"))
}

fn strategy_count(game: &BellGame) -> Result<u128> {
    let pow = |base: usize, exp: usize| -> Option<u128> {
        (base as u128).checked_pow(u32::try_from(exp).ok()?)
    };
    let count = pow(game.outputs_a.len(), game.inputs_a.len())
        .zip(pow(game.outputs_b.len(), game.inputs_b.len()))
        .and_then(|(ga, hb)| ga.checked_mul(hb));
    match count {
        Some(c) if c <= STRATEGY_ENUMERATION_GUARD => Ok(c),
        Some(c) => Err(Error::StrategySpaceTooLarge { count: c }),
        None => Err(Error::StrategySpaceTooLarge { count: u128::MAX }),
    }
}

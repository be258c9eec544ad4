//! Two-party run transcripts, the later-time reconciliation step, and
//! majority-vote amplification of noisy boxes.
//!
//! During the box phase the parties never exchange messages; the event
//! vocabulary has no message kind, so communication is impossible to even
//! record. Reconciliation happens once both outputs exist and appends the
//! XOR of the two output bits, the value the box computed.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::alphabet::BitString;
use crate::boxes::Party;
use crate::error::{Error, Result};
use crate::fbox::{sample_noisy_fbox, NoisyBoxSpec};
use crate::ratio::{format_ratio, rat};

/// What a party did at one step of a run. There is deliberately no
/// `message` kind: the harness cannot represent cross-party communication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    LocalCompute,
    BoxCall,
    Output,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventKind::LocalCompute => write!(f, "local_compute"),
            EventKind::BoxCall => write!(f, "box_call"),
            EventKind::Output => write!(f, "output"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub party: Party,
    pub kind: EventKind,
    pub payload: String,
}

/// The record appended by [`reconcile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reconciliation {
    pub a: bool,
    pub b: bool,
    pub xor: bool,
}

/// Ordered event log of one two-party run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    events: Vec<Event>,
    output_a: Option<bool>,
    output_b: Option<bool>,
    reconciliation: Option<Reconciliation>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, party: Party, kind: EventKind, payload: String) {
        debug_assert!(
            self.reconciliation.is_none(),
            "no events may follow reconciliation"
        );
        self.events.push(Event {
            party,
            kind,
            payload,
        });
    }

    /// Records a party's final output bit.
    pub fn record_output(&mut self, party: Party, bit: bool) {
        let label = match party {
            Party::Alice => "a",
            Party::Bob => "b",
        };
        self.record(party, EventKind::Output, format!("{label} = {}", u8::from(bit)));
        match party {
            Party::Alice => self.output_a = Some(bit),
            Party::Bob => self.output_b = Some(bit),
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn output(&self, party: Party) -> Option<bool> {
        match party {
            Party::Alice => self.output_a,
            Party::Bob => self.output_b,
        }
    }

    pub fn reconciliation(&self) -> Option<Reconciliation> {
        self.reconciliation
    }

    /// Line-oriented export: `party<TAB>kind<TAB>payload`, one event per
    /// line, with the reconciliation line last.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&format!("{}\t{}\t{}\n", e.party, e.kind, e.payload));
        }
        if let Some(r) = self.reconciliation {
            out.push_str(&format!(
                "joint\treconcile\ta = {}, b = {}, a^b = {}\n",
                u8::from(r.a),
                u8::from(r.b),
                u8::from(r.xor)
            ));
        }
        out
    }
}

/// The "meet later" step: XOR the two recorded outputs, append the record,
/// and return the computed bit. Both outputs must exist.
pub fn reconcile(transcript: &mut Transcript) -> Result<bool> {
    let a = transcript
        .output(Party::Alice)
        .ok_or(Error::MissingOutput("alice"))?;
    let b = transcript
        .output(Party::Bob)
        .ok_or(Error::MissingOutput("bob"))?;
    let xor = a ^ b;
    transcript.reconciliation = Some(Reconciliation { a, b, xor });
    Ok(xor)
}

/// One run of the noisy f-box protocol at (x, y): a single box call per
/// party, then outputs. The returned transcript is ready to reconcile.
pub fn run_noisy_fbox<R: Rng + ?Sized>(
    spec: &NoisyBoxSpec,
    x: &BitString,
    y: &BitString,
    rng: &mut R,
) -> Result<Transcript> {
    let (a, b) = sample_noisy_fbox(spec, x, y, rng)?;
    let mut t = Transcript::new();
    t.record(
        Party::Alice,
        EventKind::BoxCall,
        format!("noisy box <- x = {x}, -> {}", u8::from(a)),
    );
    t.record(
        Party::Bob,
        EventKind::BoxCall,
        format!("noisy box <- y = {y}, -> {}", u8::from(b)),
    );
    t.record_output(Party::Alice, a);
    t.record_output(Party::Bob, b);
    Ok(t)
}

/// Probability that the majority of k independent Bernoulli(p) draws is a
/// success: Sum_{i > k/2} C(k, i) p^i (1-p)^(k-i), exact.
pub fn majority_correctness(p: &BigRational, k: usize) -> BigRational {
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    // Running binomial coefficient C(k, i).
    let mut binom = BigInt::one();
    for i in 0..=k {
        if 2 * i > k {
            let term = BigRational::from(binom.clone())
                * p.pow(i as i32)
                * q.pow((k - i) as i32);
            total += term;
        }
        if i < k {
            binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
        }
    }
    total
}

/// Smallest odd k whose exact majority correctness reaches 1 - epsilon.
pub fn choose_k(p: &BigRational, epsilon: &BigRational) -> Result<usize> {
    validate_p(p)?;
    validate_epsilon(epsilon)?;
    let target = BigRational::one() - epsilon;
    let mut k = 1;
    loop {
        if majority_correctness(p, k) >= target {
            return Ok(k);
        }
        k += 2;
    }
}

fn validate_p(p: &BigRational) -> Result<()> {
    if *p <= rat(1, 2) || *p >= BigRational::one() {
        return Err(Error::CorrectnessOutOfRange(format_ratio(p)));
    }
    Ok(())
}

fn validate_epsilon(epsilon: &BigRational) -> Result<()> {
    if *epsilon <= BigRational::zero() || *epsilon >= rat(1, 2) {
        return Err(Error::EpsilonOutOfRange(format_ratio(epsilon)));
    }
    Ok(())
}

/// A noisy-box spec plus an odd repetition count and the failure target the
/// count was chosen against.
#[derive(Debug, Clone)]
pub struct AmplificationPlan {
    spec: NoisyBoxSpec,
    repetitions: usize,
    epsilon: BigRational,
}

impl AmplificationPlan {
    pub fn new(spec: NoisyBoxSpec, repetitions: usize, epsilon: BigRational) -> Result<Self> {
        if repetitions == 0 || repetitions.is_multiple_of(2) {
            return Err(Error::BadRepetitionCount(repetitions));
        }
        validate_epsilon(&epsilon)?;
        Ok(Self {
            spec,
            repetitions,
            epsilon,
        })
    }

    /// Picks the smallest adequate odd repetition count for the target.
    pub fn for_target(spec: NoisyBoxSpec, epsilon: BigRational) -> Result<Self> {
        let k = choose_k(spec.correctness(), &epsilon)?;
        Self::new(spec, k, epsilon)
    }

    pub fn spec(&self) -> &NoisyBoxSpec {
        &self.spec
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    /// Exact correctness of the k-fold majority at this plan's parameters.
    pub fn achieved_correctness(&self) -> BigRational {
        majority_correctness(self.spec.correctness(), self.repetitions)
    }
}

/// Runs the noisy f-box protocol k times independently and returns the
/// majority of the reconciled bits together with the exact correctness of
/// that majority.
///
/// Repetitions consume the caller's generator sequentially, so identical
/// seeds give identical outputs while each repetition still sees a fresh
/// generator state.
pub fn amplify<R: Rng + ?Sized>(
    plan: &AmplificationPlan,
    x: &BitString,
    y: &BitString,
    rng: &mut R,
) -> Result<(bool, BigRational)> {
    let mut ones = 0usize;
    for _ in 0..plan.repetitions {
        let mut t = run_noisy_fbox(&plan.spec, x, y, rng)?;
        if reconcile(&mut t)? {
            ones += 1;
        }
    }
    let majority = 2 * ones > plan.repetitions;
    Ok((majority, plan.achieved_correctness()))
}

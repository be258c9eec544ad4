//! Compiles a Boolean function into a protocol that consumes one PR box
//! per mixed monomial, after van Dam's construction.
//!
//! With f decomposed over Bob's variables as
//! f(x, y) = g_empty(x) xor XOR_S g_S(x) * y^S, each nonzero term S gets a
//! fresh PR box fed g_S(x) by Alice and y^S by Bob; the box hands back
//! additive shares of the product. Alice folds the y-free term into her
//! XOR accumulator, so the final outputs satisfy a xor b = f(x, y) while
//! each party's plan reads nothing but its own input.

use std::fmt;

use rand::Rng;

use crate::alphabet::BitString;
use crate::anf::anf_decompose;
use crate::boolfn::BooleanFunction;
use crate::boxes::Party;
use crate::error::{Error, Result};
use crate::fbox::sample_fbox;
use crate::harness::{EventKind, Transcript};

/// Which party's variables the compiler decomposes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Alice,
    Bob,
    /// Whichever side needs fewer boxes; ties go to Bob.
    Min,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Alice => write!(f, "alice"),
            Side::Bob => write!(f, "bob"),
            Side::Min => write!(f, "min"),
        }
    }
}

/// One mixed monomial: a subset mask over the decomposed party's input bits
/// and the other party's coefficient truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub mask: usize,
    pub coeff: Vec<bool>,
}

/// A bit computed from a party's own input only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BitSource {
    /// AND of the party's own input bits selected by `mask` (index space).
    OwnMonomial { mask: usize },
    /// Lookup of the party's own input index in a truth table.
    OwnTable { table: Vec<bool> },
}

/// One interpretable instruction of a party's plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanStep {
    Compute { slot: usize, source: BitSource },
    CallBox {
        box_id: usize,
        input_slot: usize,
        output_slot: usize,
    },
    /// Emit the XOR of the listed slots as the party's output bit.
    Output { slots: Vec<usize> },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartyPlan {
    pub steps: Vec<PlanStep>,
}

/// A compiled protocol: the source function, the decomposition, and the
/// two per-party instruction lists. Instruction lists are data and never
/// reference the remote party's input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledProtocol {
    f: BooleanFunction,
    decomposed_over: Party,
    /// Coefficient of the empty monomial, a table over the coefficient
    /// party's input (possibly all zero).
    const_coeff: Vec<bool>,
    /// Nonzero mixed terms in ascending mask order; one PR box each.
    terms: Vec<Term>,
    alice_plan: PartyPlan,
    bob_plan: PartyPlan,
}

impl CompiledProtocol {
    pub fn function(&self) -> &BooleanFunction {
        &self.f
    }

    pub fn decomposed_over(&self) -> Party {
        self.decomposed_over
    }

    pub fn box_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn const_coeff(&self) -> &[bool] {
        &self.const_coeff
    }

    pub fn alice_plan(&self) -> &PartyPlan {
        &self.alice_plan
    }

    pub fn bob_plan(&self) -> &PartyPlan {
        &self.bob_plan
    }
}

/// Compiles `f` for the requested decomposition side.
pub fn compile(f: &BooleanFunction, side: Side) -> CompiledProtocol {
    match side {
        Side::Bob => compile_over(f, Party::Bob),
        Side::Alice => compile_over(f, Party::Alice),
        Side::Min => {
            let bob = compile_over(f, Party::Bob);
            let alice = compile_over(f, Party::Alice);
            if bob.box_count() <= alice.box_count() {
                bob
            } else {
                alice
            }
        }
    }
}

fn compile_over(f: &BooleanFunction, decomposed_over: Party) -> CompiledProtocol {
    // Decomposing over Alice is the Bob-side compilation of the transposed
    // function with the party roles swapped back afterwards.
    let anf = match decomposed_over {
        Party::Bob => anf_decompose(f),
        Party::Alice => anf_decompose(&f.transposed()),
    };
    let const_coeff = anf.coefficient(0).to_vec();
    let terms: Vec<Term> = anf
        .nonzero_masks()
        .into_iter()
        .filter(|&mask| mask != 0)
        .map(|mask| Term {
            mask,
            coeff: anf.coefficient(mask).to_vec(),
        })
        .collect();

    let coeff_plan = build_coeff_plan(&terms, &const_coeff);
    let monomial_plan = build_monomial_plan(&terms);
    let (alice_plan, bob_plan) = match decomposed_over {
        Party::Bob => (coeff_plan, monomial_plan),
        Party::Alice => (monomial_plan, coeff_plan),
    };
    CompiledProtocol {
        f: f.clone(),
        decomposed_over,
        const_coeff,
        terms,
        alice_plan,
        bob_plan,
    }
}

/// Plan for the party holding the coefficient tables; it also folds the
/// empty-monomial term into its output.
fn build_coeff_plan(terms: &[Term], const_coeff: &[bool]) -> PartyPlan {
    let mut steps = Vec::new();
    let mut output_slots = Vec::new();
    for (box_id, term) in terms.iter().enumerate() {
        let input_slot = 2 * box_id;
        let output_slot = 2 * box_id + 1;
        steps.push(PlanStep::Compute {
            slot: input_slot,
            source: BitSource::OwnTable {
                table: term.coeff.clone(),
            },
        });
        steps.push(PlanStep::CallBox {
            box_id,
            input_slot,
            output_slot,
        });
        output_slots.push(output_slot);
    }
    if const_coeff.iter().any(|&b| b) {
        let slot = 2 * terms.len();
        steps.push(PlanStep::Compute {
            slot,
            source: BitSource::OwnTable {
                table: const_coeff.to_vec(),
            },
        });
        output_slots.push(slot);
    }
    steps.push(PlanStep::Output {
        slots: output_slots,
    });
    PartyPlan { steps }
}

/// Plan for the party whose variables were decomposed; it computes one
/// monomial bit per box.
fn build_monomial_plan(terms: &[Term]) -> PartyPlan {
    let mut steps = Vec::new();
    let mut output_slots = Vec::new();
    for (box_id, term) in terms.iter().enumerate() {
        let input_slot = 2 * box_id;
        let output_slot = 2 * box_id + 1;
        steps.push(PlanStep::Compute {
            slot: input_slot,
            source: BitSource::OwnMonomial { mask: term.mask },
        });
        steps.push(PlanStep::CallBox {
            box_id,
            input_slot,
            output_slot,
        });
        output_slots.push(output_slot);
    }
    steps.push(PlanStep::Output {
        slots: output_slots,
    });
    PartyPlan { steps }
}

/// Per-party interpreter state; holds nothing but the party's own input
/// and locally computed bits, so cross-party reads cannot be expressed.
struct PartyExec {
    party: Party,
    input: BitString,
    slots: Vec<Option<bool>>,
    /// (input_bit, output_slot) per box id.
    box_calls: Vec<Option<(bool, usize)>>,
    output_slots: Option<Vec<usize>>,
    compute_events: Vec<String>,
}

impl PartyExec {
    fn new(party: Party, input: BitString) -> Self {
        Self {
            party,
            input,
            slots: Vec::new(),
            box_calls: Vec::new(),
            output_slots: None,
            compute_events: Vec::new(),
        }
    }

    fn slot(&self, slot: usize) -> Result<bool> {
        self.slots
            .get(slot)
            .copied()
            .flatten()
            .ok_or_else(|| Error::ProtocolState(format!("{} read of unset slot {slot}", self.party)))
    }

    fn set_slot(&mut self, slot: usize, bit: bool) {
        if self.slots.len() <= slot {
            self.slots.resize(slot + 1, None);
        }
        self.slots[slot] = Some(bit);
    }

    fn eval_source(&self, source: &BitSource) -> Result<bool> {
        let idx = self.input.index();
        match source {
            BitSource::OwnMonomial { mask } => Ok(idx & mask == *mask),
            BitSource::OwnTable { table } => table.get(idx).copied().ok_or_else(|| {
                Error::ProtocolState(format!(
                    "{} coefficient table too short for input {idx}",
                    self.party
                ))
            }),
        }
    }

    /// Walks the local phase of the plan, deferring box calls.
    fn run_local(&mut self, plan: &PartyPlan) -> Result<()> {
        for step in &plan.steps {
            match step {
                PlanStep::Compute { slot, source } => {
                    let bit = self.eval_source(source)?;
                    self.set_slot(*slot, bit);
                    let what = match source {
                        BitSource::OwnMonomial { mask } => format!(
                            "monomial {} of {}",
                            BitString::from_index(*mask, self.input.len()),
                            self.input
                        ),
                        BitSource::OwnTable { .. } => format!("table[{}]", self.input),
                    };
                    self.compute_events
                        .push(format!("slot {slot} = {what} = {}", u8::from(bit)));
                }
                PlanStep::CallBox {
                    box_id,
                    input_slot,
                    output_slot,
                } => {
                    let bit = self.slot(*input_slot)?;
                    if self.box_calls.len() <= *box_id {
                        self.box_calls.resize(*box_id + 1, None);
                    }
                    if self.box_calls[*box_id].is_some() {
                        return Err(Error::ProtocolState(format!(
                            "{} calls box {box_id} twice",
                            self.party
                        )));
                    }
                    self.box_calls[*box_id] = Some((bit, *output_slot));
                }
                PlanStep::Output { slots } => {
                    if self.output_slots.is_some() {
                        return Err(Error::ProtocolState(format!(
                            "{} has more than one output step",
                            self.party
                        )));
                    }
                    self.output_slots = Some(slots.clone());
                }
            }
        }
        if self.output_slots.is_none() {
            return Err(Error::ProtocolState(format!(
                "{} plan has no output step",
                self.party
            )));
        }
        Ok(())
    }

    fn output_bit(&self) -> Result<bool> {
        let slots = self.output_slots.as_ref().expect("checked in run_local");
        let mut acc = false;
        for &slot in slots {
            acc ^= self.slot(slot)?;
        }
        Ok(acc)
    }
}

/// Executes a compiled protocol at inputs (x, y).
///
/// Alice's and Bob's plans run as two independent local processes whose
/// only coupling is the bank of PR boxes, each realized by one draw of the
/// AND-function box. Returns both output bits and the full transcript;
/// a xor b = f(x, y) on every run.
pub fn run_compiled<R: Rng + ?Sized>(
    protocol: &CompiledProtocol,
    x: &BitString,
    y: &BitString,
    rng: &mut R,
) -> Result<(bool, bool, Transcript)> {
    if x.len() != protocol.f.alice_bits() {
        return Err(Error::BitLength {
            got: x.len(),
            want: protocol.f.alice_bits(),
        });
    }
    if y.len() != protocol.f.bob_bits() {
        return Err(Error::BitLength {
            got: y.len(),
            want: protocol.f.bob_bits(),
        });
    }

    let mut alice = PartyExec::new(Party::Alice, x.clone());
    let mut bob = PartyExec::new(Party::Bob, y.clone());
    alice.run_local(&protocol.alice_plan)?;
    bob.run_local(&protocol.bob_plan)?;

    let mut transcript = Transcript::new();
    for (party, exec) in [(Party::Alice, &alice), (Party::Bob, &bob)] {
        for payload in &exec.compute_events {
            transcript.record(party, EventKind::LocalCompute, payload.clone());
        }
    }

    // Box phase: every box must be fed by both parties exactly once.
    let pr = BooleanFunction::and();
    if alice.box_calls.len() != protocol.box_count() || bob.box_calls.len() != protocol.box_count()
    {
        return Err(Error::ProtocolState(format!(
            "expected {} box calls per party, alice made {}, bob made {}",
            protocol.box_count(),
            alice.box_calls.len(),
            bob.box_calls.len()
        )));
    }
    for box_id in 0..protocol.box_count() {
        let (a_in, a_slot) = alice.box_calls[box_id]
            .ok_or_else(|| Error::ProtocolState(format!("alice skipped box {box_id}")))?;
        let (b_in, b_slot) = bob.box_calls[box_id]
            .ok_or_else(|| Error::ProtocolState(format!("bob skipped box {box_id}")))?;
        let a_bits = BitString::new(vec![a_in]);
        let b_bits = BitString::new(vec![b_in]);
        let (a_out, b_out) = sample_fbox(&pr, &a_bits, &b_bits, rng)?;
        transcript.record(
            Party::Alice,
            EventKind::BoxCall,
            format!("pr box {box_id} <- {} -> slot {a_slot} = {}", u8::from(a_in), u8::from(a_out)),
        );
        transcript.record(
            Party::Bob,
            EventKind::BoxCall,
            format!("pr box {box_id} <- {} -> slot {b_slot} = {}", u8::from(b_in), u8::from(b_out)),
        );
        alice.set_slot(a_slot, a_out);
        bob.set_slot(b_slot, b_out);
    }

    let a = alice.output_bit()?;
    let b = bob.output_bit()?;
    transcript.record_output(Party::Alice, a);
    transcript.record_output(Party::Bob, b);
    Ok((a, b, transcript))
}

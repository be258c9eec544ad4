//! Step-bounded halting over a tiny four-register counter machine, and the
//! function box it induces.
//!
//! The unbounded halting predicate is uncomputable and is represented
//! nowhere in this crate as data; everything here is the computable
//! truncation "does program x halt on input y within T steps", over finite
//! input widths. Any finite table of this kind is such a truncation.

use std::fmt;
use std::str::FromStr;

use crate::alphabet::BitString;
use crate::boolfn::BooleanFunction;
use crate::boxes::BipartiteBox;
use crate::error::{Error, Result};
use crate::fbox::make_fbox;

pub const REGISTER_COUNT: usize = 4;

/// Machine instructions. `Dec` saturates at zero; jump targets may equal
/// the program length, which is the halt position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instruction {
    Inc(usize),
    Dec(usize),
    /// Jump to the address when the register is zero, else fall through.
    Jz(usize, usize),
    Jmp(usize),
    Halt,
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Inc(r) => write!(f, "INC r{r}"),
            Instruction::Dec(r) => write!(f, "DEC r{r}"),
            Instruction::Jz(r, addr) => write!(f, "JZ r{r} {addr}"),
            Instruction::Jmp(addr) => write!(f, "JMP {addr}"),
            Instruction::Halt => write!(f, "HALT"),
        }
    }
}

/// A program for the counter machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TinyProgram {
    instructions: Vec<Instruction>,
}

impl TinyProgram {
    pub fn new(instructions: Vec<Instruction>) -> Result<Self> {
        let len = instructions.len();
        for instr in &instructions {
            match *instr {
                Instruction::Inc(r) | Instruction::Dec(r) => {
                    if r >= REGISTER_COUNT {
                        return Err(Error::BadRegister(r));
                    }
                }
                Instruction::Jz(r, addr) => {
                    if r >= REGISTER_COUNT {
                        return Err(Error::BadRegister(r));
                    }
                    if addr > len {
                        return Err(Error::BadJumpTarget { target: addr, len });
                    }
                }
                Instruction::Jmp(addr) => {
                    if addr > len {
                        return Err(Error::BadJumpTarget { target: addr, len });
                    }
                }
                Instruction::Halt => {}
            }
        }
        Ok(Self { instructions })
    }

    /// The canonical single-instruction HALT program, the decode target for
    /// invalid encodings.
    pub fn halt() -> Self {
        Self {
            instructions: vec![Instruction::Halt],
        }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    /// Total decode map from bit strings to programs.
    ///
    /// The string is consumed as consecutive 4-bit words, high bits first:
    /// `00rr` INC, `01rr` DEC, `10aa` JMP to absolute address aa, and
    /// `11rr` JZ on register rr skipping the next instruction (target
    /// clamped to the program end). Trailing bits that do not fill a word
    /// are ignored. Encodings that yield no instructions or an out-of-range
    /// JMP decode to the single-instruction HALT program.
    pub fn decode(bits: &BitString) -> Self {
        let words = bits.len() / 4;
        let len = words;
        let mut instructions = Vec::with_capacity(words);
        for w in 0..words {
            let field = |offset: usize| -> usize {
                usize::from(bits.bit(4 * w + offset)) << 1 | usize::from(bits.bit(4 * w + offset + 1))
            };
            let opcode = field(0);
            let operand = field(2);
            let instr = match opcode {
                0 => Instruction::Inc(operand),
                1 => Instruction::Dec(operand),
                2 => {
                    if operand > len {
                        return Self::halt();
                    }
                    Instruction::Jmp(operand)
                }
                3 => Instruction::Jz(operand, (w + 2).min(len)),
                _ => unreachable!(),
            };
            instructions.push(instr);
        }
        if instructions.is_empty() {
            return Self::halt();
        }
        Self::new(instructions).expect("decoded instructions are range-checked")
    }
}

impl fmt::Display for TinyProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, instr) in self.instructions.iter().enumerate() {
            writeln!(f, "{i}: {instr}")?;
        }
        Ok(())
    }
}

impl FromStr for TinyProgram {
    type Err = Error;

    /// One instruction per line; registers are `r0`..`r3`, addresses are
    /// decimal integers. Blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut instructions = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse(format!("line {}: {msg}: `{line}`", lineno + 1));
            let mut parts = line.split_whitespace();
            let op = parts.next().ok_or_else(|| bad("missing opcode"))?;
            let reg = |tok: Option<&str>| -> Result<usize> {
                let tok = tok.ok_or_else(|| bad("missing register"))?;
                let idx = tok
                    .strip_prefix('r')
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| bad("expected register r0..r3"))?;
                Ok(idx)
            };
            let addr = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or_else(|| bad("missing address"))?
                    .parse::<usize>()
                    .map_err(|_| bad("expected address"))
            };
            let instr = match op.to_ascii_uppercase().as_str() {
                "INC" => Instruction::Inc(reg(parts.next())?),
                "DEC" => Instruction::Dec(reg(parts.next())?),
                "JZ" => {
                    let r = reg(parts.next())?;
                    let a = addr(parts.next())?;
                    Instruction::Jz(r, a)
                }
                "JMP" => Instruction::Jmp(addr(parts.next())?),
                "HALT" => Instruction::Halt,
                _ => return Err(bad("unknown opcode")),
            };
            if parts.next().is_some() {
                return Err(bad("trailing tokens"));
            }
            instructions.push(instr);
        }
        TinyProgram::new(instructions)
    }
}

/// Result of a bounded run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The machine halted, executing `steps` instructions (HALT included).
    Halted { steps: u64 },
    /// The step bound was exhausted first.
    Running,
}

impl Verdict {
    pub fn halted(&self) -> bool {
        matches!(self, Verdict::Halted { .. })
    }
}

/// Runs the program for at most `step_bound` executed instructions.
///
/// The input's big-endian value is loaded into r0, the other registers
/// start at zero. The machine halts when it executes HALT or when the
/// program counter moves past the last instruction.
pub fn interpret(program: &TinyProgram, input: &BitString, step_bound: u64) -> Verdict {
    let mut regs = [0u64; REGISTER_COUNT];
    regs[0] = input.index() as u64;
    let mut pc = 0usize;
    let mut steps = 0u64;
    loop {
        if pc >= program.len() {
            return Verdict::Halted { steps };
        }
        if steps == step_bound {
            return Verdict::Running;
        }
        steps += 1;
        match program.instructions[pc] {
            Instruction::Inc(r) => {
                regs[r] = regs[r].saturating_add(1);
                pc += 1;
            }
            Instruction::Dec(r) => {
                regs[r] = regs[r].saturating_sub(1);
                pc += 1;
            }
            Instruction::Jz(r, addr) => {
                pc = if regs[r] == 0 { addr } else { pc + 1 };
            }
            Instruction::Jmp(addr) => pc = addr,
            Instruction::Halt => return Verdict::Halted { steps },
        }
    }
}

/// Parameters of a bounded-halting table: program and input widths plus
/// the step bound. Width sum is capped at 16 to keep the table desk-scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedHaltingSpec {
    program_bits: usize,
    input_bits: usize,
    step_bound: u64,
}

impl BoundedHaltingSpec {
    pub fn new(program_bits: usize, input_bits: usize, step_bound: u64) -> Result<Self> {
        let total = program_bits + input_bits;
        if total > 16 {
            return Err(Error::WidthGuard(total));
        }
        if step_bound == 0 {
            return Err(Error::ZeroStepBound);
        }
        Ok(Self {
            program_bits,
            input_bits,
            step_bound,
        })
    }

    pub fn program_bits(&self) -> usize {
        self.program_bits
    }

    pub fn input_bits(&self) -> usize {
        self.input_bits
    }

    pub fn step_bound(&self) -> u64 {
        self.step_bound
    }
}

/// The truncated halting predicate as a Boolean function:
/// f(x, y) = [decode(x) halts on y within the step bound].
pub fn bounded_halting_function(spec: &BoundedHaltingSpec) -> BooleanFunction {
    BooleanFunction::from_fn(spec.program_bits, spec.input_bits, |x, y| {
        interpret(&TinyProgram::decode(x), y, spec.step_bound).halted()
    })
}

/// The function box of the truncated halting predicate.
pub fn bounded_halting_fbox(spec: &BoundedHaltingSpec) -> BipartiteBox {
    make_fbox(&bounded_halting_function(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    /// Countdown loop: decrement r0 to zero, then halt.
    fn countdown() -> TinyProgram {
        TinyProgram::new(vec![
            Instruction::Jz(0, 3),
            Instruction::Dec(0),
            Instruction::Jmp(0),
            Instruction::Halt,
        ])
        .unwrap()
    }

    #[test]
    fn halt_program_halts_immediately() {
        let v = interpret(&TinyProgram::halt(), &bits("101"), 1);
        assert_eq!(v, Verdict::Halted { steps: 1 });
    }

    #[test]
    fn jmp_zero_never_halts() {
        let p = TinyProgram::new(vec![Instruction::Jmp(0)]).unwrap();
        assert_eq!(interpret(&p, &bits("0"), 10_000), Verdict::Running);
    }

    #[test]
    fn countdown_halts_at_the_oracle_step_count() {
        // Run the interpreter itself to find the halting time, then confirm
        // both the time and the verdict with the independent interpreter.
        let p = countdown();
        let input = bits("101"); // r0 = 5
        let v = interpret(&p, &input, 1_000);
        let steps = match v {
            Verdict::Halted { steps } => steps,
            Verdict::Running => panic!("countdown must halt"),
        };
        assert_eq!(oracle_run(&p, &input, 1_000), Some(steps));
        // 5 iterations of (JZ, DEC, JMP), the final JZ, and the HALT.
        assert_eq!(steps, 17);
        // Exactly at the bound it halts; one step short it does not.
        assert_eq!(interpret(&p, &input, steps), Verdict::Halted { steps });
        assert_eq!(interpret(&p, &input, steps - 1), Verdict::Running);
    }

    /// Second, structurally different interpreter: an immutable state
    /// record advanced by a pure transition function. Returns the halting
    /// step count within the bound, or None.
    fn oracle_run(program: &TinyProgram, input: &BitString, bound: u64) -> Option<u64> {
        #[derive(Clone)]
        struct State {
            pc: usize,
            regs: Vec<u64>,
        }
        fn advance(program: &TinyProgram, s: &State) -> Option<State> {
            let instr = program.instructions().get(s.pc)?;
            let mut next = s.clone();
            match *instr {
                Instruction::Inc(r) => {
                    next.regs[r] += 1;
                    next.pc += 1;
                }
                Instruction::Dec(r) => {
                    next.regs[r] = next.regs[r].max(1) - 1;
                    next.pc += 1;
                }
                Instruction::Jz(r, addr) => {
                    next.pc = if s.regs[r] == 0 { addr } else { s.pc + 1 }
                }
                Instruction::Jmp(addr) => next.pc = addr,
                Instruction::Halt => return None,
            }
            Some(next)
        }
        let mut state = State {
            pc: 0,
            regs: {
                let mut r = vec![0u64; REGISTER_COUNT];
                r[0] = input.index() as u64;
                r
            },
        };
        for step in 0..bound {
            if state.pc >= program.len() {
                return Some(step);
            }
            match advance(program, &state) {
                Some(next) => state = next,
                // HALT consumed one more step.
                None => return Some(step + 1),
            }
        }
        if state.pc >= program.len() {
            Some(bound)
        } else {
            None
        }
    }

    #[test]
    fn interpreters_agree_on_all_four_bit_programs() {
        for code in 0..16usize {
            let x = BitString::from_index(code, 4);
            let p = TinyProgram::decode(&x);
            for value in 0..4usize {
                let y = BitString::from_index(value, 2);
                let mine = interpret(&p, &y, 100);
                let oracle = oracle_run(&p, &y, 100);
                match mine {
                    Verdict::Halted { steps } => assert_eq!(oracle, Some(steps), "program {p}"),
                    Verdict::Running => assert_eq!(oracle, None, "program {p}"),
                }
            }
        }
    }

    #[test]
    fn halting_is_monotone_in_the_step_bound() {
        for code in 0..16usize {
            let p = TinyProgram::decode(&BitString::from_index(code, 4));
            for value in 0..4usize {
                let y = BitString::from_index(value, 2);
                let mut halted_before = false;
                for bound in [1u64, 2, 5, 10, 100, 1_000] {
                    let now = interpret(&p, &y, bound).halted();
                    assert!(!halted_before || now, "halting must persist as T grows");
                    halted_before = now;
                }
            }
        }
    }

    #[test]
    fn decode_is_total_and_normalizes_invalid_jumps() {
        // JMP 2 in a one-instruction program jumps out of range.
        assert_eq!(TinyProgram::decode(&bits("1010")), TinyProgram::halt());
        // Width below one word decodes to HALT.
        assert_eq!(TinyProgram::decode(&bits("101")), TinyProgram::halt());
        // Trailing bits beyond the last word are ignored.
        assert_eq!(
            TinyProgram::decode(&bits("0001 11".replace(' ', "").as_str())),
            TinyProgram::new(vec![Instruction::Inc(1)]).unwrap()
        );
        for code in 0..16usize {
            let p = TinyProgram::decode(&BitString::from_index(code, 4));
            assert!(!p.is_empty());
        }
    }

    #[test]
    fn eight_bit_programs_can_depend_on_the_input() {
        // 1100 1000: JZ r0 -> end, else fall into JMP 0. Halts iff r0 = 0.
        let p = TinyProgram::decode(&bits("11001000"));
        assert_eq!(
            p.instructions(),
            &[Instruction::Jz(0, 2), Instruction::Jmp(0)]
        );
        assert!(interpret(&p, &bits("00"), 100).halted());
        assert!(!interpret(&p, &bits("01"), 100).halted());
        assert!(!interpret(&p, &bits("11"), 100).halted());
    }

    #[test]
    fn program_text_round_trip() {
        let p = countdown();
        let text = "JZ r0 3\nDEC r0\nJMP 0\nHALT\n";
        let parsed: TinyProgram = text.parse().unwrap();
        assert_eq!(parsed, p);
        let pretty = p.to_string();
        assert!(pretty.contains("0: JZ r0 3"));
        assert!(pretty.contains("3: HALT"));
        // Comments and blank lines are tolerated.
        let commented = "# countdown\nJZ r0 3\n\nDEC r0 # decrement\nJMP 0\nHALT\n";
        assert_eq!(commented.parse::<TinyProgram>().unwrap(), p);
    }

    #[test]
    fn program_text_errors_carry_line_numbers() {
        let err = "INC r9".parse::<TinyProgram>().unwrap_err();
        assert!(matches!(err, Error::BadRegister(9)));
        let err = "FOO r0".parse::<TinyProgram>().unwrap_err();
        assert!(err.to_string().contains("line 1"));
        let err = "JMP 7".parse::<TinyProgram>().unwrap_err();
        assert!(matches!(err, Error::BadJumpTarget { target: 7, len: 1 }));
    }

    #[test]
    fn spec_guard_rejects_wide_tables() {
        assert!(matches!(
            BoundedHaltingSpec::new(12, 5, 100),
            Err(Error::WidthGuard(17))
        ));
        assert!(matches!(
            BoundedHaltingSpec::new(4, 2, 0),
            Err(Error::ZeroStepBound)
        ));
    }

    #[test]
    fn all_halt_widths_give_the_constant_one_function() {
        // Width 2 leaves no full instruction word: every encoding decodes
        // to HALT, so the predicate is identically 1.
        let spec = BoundedHaltingSpec::new(2, 1, 10).unwrap();
        let f = bounded_halting_function(&spec);
        assert_eq!(f, BooleanFunction::constant(2, 1, true));
        assert_eq!(bounded_halting_fbox(&spec), make_fbox(&f));
    }

    #[test]
    fn four_bit_table_is_no_signalling_and_non_constant() {
        let spec = BoundedHaltingSpec::new(4, 2, 100).unwrap();
        let f = bounded_halting_function(&spec);
        let truth = f.truth_table();
        assert!(truth.iter().any(|&b| b));
        assert!(truth.iter().any(|&b| !b), "JMP 0 must appear as non-halting");
        assert!(bounded_halting_fbox(&spec)
            .check_no_signalling()
            .unwrap()
            .holds);
    }
}

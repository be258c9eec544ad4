//! On-disk formats: JSON documents for boxes, games, and compiled
//! protocols, and the plain-text truth-table format.
//!
//! Rationals are serialized as `num/den` decimal-digit strings, bit-exact.
//! Truth tables and coefficient tables use big-endian lexicographic index
//! order throughout, matching [`crate::alphabet::BitString`].

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, BitString};
use crate::boolfn::BooleanFunction;
use crate::boxes::{BipartiteBox, Party, TableEntry};
use crate::error::{Error, Result};
use crate::games::BellGame;
use crate::ratio::{format_ratio, parse_ratio};
use crate::vandam::{compile, CompiledProtocol, Side, Term};

#[derive(Serialize, Deserialize)]
struct BoxFile {
    inputs_a: Vec<String>,
    inputs_b: Vec<String>,
    outputs_a: Vec<String>,
    outputs_b: Vec<String>,
    table: Vec<BoxFileEntry>,
}

#[derive(Serialize, Deserialize)]
struct BoxFileEntry {
    x: String,
    y: String,
    a: String,
    b: String,
    p: String,
}

/// Serializes a box with its table in lexicographic product order.
pub fn box_to_json(bx: &BipartiteBox) -> String {
    let file = BoxFile {
        inputs_a: bx.inputs_a().labels().to_vec(),
        inputs_b: bx.inputs_b().labels().to_vec(),
        outputs_a: bx.outputs_a().labels().to_vec(),
        outputs_b: bx.outputs_b().labels().to_vec(),
        table: bx
            .iter_lex()
            .map(|(x, y, a, b, p)| BoxFileEntry {
                x: x.to_string(),
                y: y.to_string(),
                a: a.to_string(),
                b: b.to_string(),
                p: format_ratio(p),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn box_from_json(text: &str) -> Result<BipartiteBox> {
    let file: BoxFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("box file: {e}")))?;
    let entries = file
        .table
        .into_iter()
        .map(|e| {
            Ok(TableEntry {
                x: e.x,
                y: e.y,
                a: e.a,
                b: e.b,
                p: parse_ratio(&e.p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BipartiteBox::from_entries(
        Alphabet::new(file.inputs_a)?,
        Alphabet::new(file.inputs_b)?,
        Alphabet::new(file.outputs_a)?,
        Alphabet::new(file.outputs_b)?,
        &entries,
    )
}

#[derive(Serialize, Deserialize)]
struct GameFile {
    inputs_a: Vec<String>,
    inputs_b: Vec<String>,
    outputs_a: Vec<String>,
    outputs_b: Vec<String>,
    input_dist: Vec<GameDistEntry>,
    /// Satisfied predicate tuples only.
    predicate: Vec<GamePredEntry>,
}

#[derive(Serialize, Deserialize)]
struct GameDistEntry {
    x: String,
    y: String,
    p: String,
}

#[derive(Serialize, Deserialize)]
struct GamePredEntry {
    a: String,
    b: String,
    x: String,
    y: String,
}

pub fn game_to_json(game: &BellGame) -> String {
    let mut input_dist = Vec::new();
    for (xi, x) in game.inputs_a().labels().iter().enumerate() {
        for (yi, y) in game.inputs_b().labels().iter().enumerate() {
            input_dist.push(GameDistEntry {
                x: x.clone(),
                y: y.clone(),
                p: format_ratio(game.input_prob_idx(xi, yi)),
            });
        }
    }
    let mut predicate = Vec::new();
    for (xi, x) in game.inputs_a().labels().iter().enumerate() {
        for (yi, y) in game.inputs_b().labels().iter().enumerate() {
            for (ai, a) in game.outputs_a().labels().iter().enumerate() {
                for (bi, b) in game.outputs_b().labels().iter().enumerate() {
                    if game.predicate_idx(xi, yi, ai, bi) {
                        predicate.push(GamePredEntry {
                            a: a.clone(),
                            b: b.clone(),
                            x: x.clone(),
                            y: y.clone(),
                        });
                    }
                }
            }
        }
    }
    let file = GameFile {
        inputs_a: game.inputs_a().labels().to_vec(),
        inputs_b: game.inputs_b().labels().to_vec(),
        outputs_a: game.outputs_a().labels().to_vec(),
        outputs_b: game.outputs_b().labels().to_vec(),
        input_dist,
        predicate,
    };
    let mut out = serde_json::to_string_pretty(&file).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn game_from_json(text: &str) -> Result<BellGame> {
    let file: GameFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("game file: {e}")))?;
    let inputs_a = Alphabet::new(file.inputs_a)?;
    let inputs_b = Alphabet::new(file.inputs_b)?;
    let outputs_a = Alphabet::new(file.outputs_a)?;
    let outputs_b = Alphabet::new(file.outputs_b)?;

    let mut dist = vec![None; inputs_a.len() * inputs_b.len()];
    for e in &file.input_dist {
        let xi = inputs_a.require(&e.x, "input x")?;
        let yi = inputs_b.require(&e.y, "input y")?;
        let slot = &mut dist[xi * inputs_b.len() + yi];
        if slot.is_some() {
            return Err(Error::Parse(format!(
                "duplicate input_dist entry for (x={}, y={})",
                e.x, e.y
            )));
        }
        *slot = Some(parse_ratio(&e.p)?);
    }
    let dist = dist
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| {
                let xi = i / inputs_b.len();
                let yi = i % inputs_b.len();
                Error::Parse(format!(
                    "missing input_dist entry for (x={}, y={})",
                    inputs_a.label(xi),
                    inputs_b.label(yi)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pred =
        vec![false; inputs_a.len() * inputs_b.len() * outputs_a.len() * outputs_b.len()];
    for e in &file.predicate {
        let xi = inputs_a.require(&e.x, "input x")?;
        let yi = inputs_b.require(&e.y, "input y")?;
        let ai = outputs_a.require(&e.a, "output a")?;
        let bi = outputs_b.require(&e.b, "output b")?;
        pred[((xi * inputs_b.len() + yi) * outputs_a.len() + ai) * outputs_b.len() + bi] = true;
    }
    BellGame::from_parts(inputs_a, inputs_b, outputs_a, outputs_b, dist, pred)
}

/// Truth-table text: header line `l m`, then the 2^(l+m) bits in
/// lexicographic (x, y) order, contiguous or whitespace-separated.
pub fn truth_table_to_text(f: &BooleanFunction) -> String {
    let bits: String = f
        .truth_table()
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    format!("{} {}\n{bits}\n", f.alice_bits(), f.bob_bits())
}

pub fn truth_table_from_text(text: &str) -> Result<BooleanFunction> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("truth table: empty file".into()))?;
    let mut parts = header.split_whitespace();
    let parse_width = |tok: Option<&str>, name: &str| -> Result<usize> {
        tok.ok_or_else(|| Error::Parse(format!("truth table: header missing {name}")))?
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("truth table: invalid {name} in header `{header}`")))
    };
    let l = parse_width(parts.next(), "l")?;
    let m = parse_width(parts.next(), "m")?;
    if parts.next().is_some() {
        return Err(Error::Parse(format!(
            "truth table: trailing tokens in header `{header}`"
        )));
    }
    let mut bits = Vec::new();
    for (lineno, line) in lines.enumerate() {
        for tok in line.split_whitespace() {
            for c in tok.chars() {
                match c {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    other => {
                        return Err(Error::Parse(format!(
                            "truth table line {}: invalid bit `{other}`",
                            lineno + 2
                        )))
                    }
                }
            }
        }
    }
    BooleanFunction::new(l, m, bits)
}

#[derive(Serialize, Deserialize)]
struct ProtocolFile {
    l: usize,
    m: usize,
    /// Which party's variables were decomposed: "alice" or "bob".
    decomposed_over: String,
    /// f's truth table as a 0/1 string in lexicographic (x, y) order.
    truth_table: String,
    /// Coefficient of the empty monomial over the coefficient party's input.
    const_coeff: String,
    /// Mixed terms in execution order; box ids follow array order.
    terms: Vec<ProtocolTerm>,
}

#[derive(Serialize, Deserialize)]
struct ProtocolTerm {
    /// Monomial as a 0/1 mask string aligned with the decomposed party's
    /// input bit string.
    mask: String,
    coeff: String,
}

fn bools_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn string_to_bools(s: &str, what: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("{what}: invalid bit `{other}`"))),
        })
        .collect()
}

pub fn protocol_to_json(protocol: &CompiledProtocol) -> String {
    let mask_width = match protocol.decomposed_over() {
        Party::Bob => protocol.function().bob_bits(),
        Party::Alice => protocol.function().alice_bits(),
    };
    let file = ProtocolFile {
        l: protocol.function().alice_bits(),
        m: protocol.function().bob_bits(),
        decomposed_over: protocol.decomposed_over().to_string(),
        truth_table: bools_to_string(protocol.function().truth_table()),
        const_coeff: bools_to_string(protocol.const_coeff()),
        terms: protocol
            .terms()
            .iter()
            .map(|t| ProtocolTerm {
                mask: BitString::from_index(t.mask, mask_width).to_string(),
                coeff: bools_to_string(&t.coeff),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("plain data serializes");
    out.push('\n');
    out
}

/// Loads a protocol by recompiling its truth table and verifying that the
/// stored decomposition matches the recompilation bit for bit.
pub fn protocol_from_json(text: &str) -> Result<CompiledProtocol> {
    let file: ProtocolFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("protocol file: {e}")))?;
    let truth = string_to_bools(&file.truth_table, "protocol truth_table")?;
    let f = BooleanFunction::new(file.l, file.m, truth)?;
    let side = match file.decomposed_over.as_str() {
        "bob" => Side::Bob,
        "alice" => Side::Alice,
        other => {
            return Err(Error::Parse(format!(
                "protocol file: unknown decomposition side `{other}`"
            )))
        }
    };
    let protocol = compile(&f, side);
    let mask_width = match protocol.decomposed_over() {
        Party::Bob => file.m,
        Party::Alice => file.l,
    };
    let stored_terms = file
        .terms
        .iter()
        .map(|t| {
            Ok(Term {
                mask: t.mask.parse::<BitString>()?.index(),
                coeff: string_to_bools(&t.coeff, "protocol term coeff")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let stored_const = string_to_bools(&file.const_coeff, "protocol const_coeff")?;
    let recompiled_masks: Vec<String> = protocol
        .terms()
        .iter()
        .map(|t| BitString::from_index(t.mask, mask_width).to_string())
        .collect();
    if stored_terms != protocol.terms() || stored_const != protocol.const_coeff() {
        return Err(Error::Parse(format!(
            "protocol file: stored terms do not match the recompiled decomposition \
             (expected masks {recompiled_masks:?})"
        )));
    }
    Ok(protocol)
}

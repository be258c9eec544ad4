//! Ordered finite alphabets and fixed-width bit strings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Ordered finite set of distinct symbols.
///
/// The label order is fixed at construction and stable across runs; every
/// table, report, and file produced by this crate iterates in this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from explicit labels, preserving their order.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// All bit strings of the given width in lexicographic order.
    ///
    /// Width 0 yields the single empty string, which models a degenerate
    /// one-symbol input set.
    pub fn bitstrings(width: usize) -> Self {
        let labels = (0..1usize << width)
            .map(|v| BitString::from_index(v, width).to_string())
            .collect();
        Self { labels }
    }

    /// The single-bit alphabet {"0", "1"}.
    pub fn bit() -> Self {
        Self::bitstrings(1)
    }

    /// Decimal labels "0" .. "n-1"; used for boxes induced by measurements
    /// with arbitrary outcome counts.
    pub fn indexed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Self {
            labels: (0..n).map(|i| i.to_string()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction forbids empty alphabets
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Index lookup that reports the offending symbol and its role.
    pub fn require(&self, label: &str, role: &'static str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownSymbol {
            role,
            symbol: label.to_string(),
        })
    }
}

/// Fixed-width bit string; the leftmost character is the most significant
/// bit of its index (big-endian).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// The bit string of `width` bits whose big-endian value is `index`.
    pub fn from_index(index: usize, width: usize) -> Self {
        debug_assert!(width >= usize::BITS as usize || index < 1usize << width);
        Self((0..width).map(|i| index >> (width - 1 - i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Big-endian value of the string.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| acc << 1 | usize::from(b))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit `{other}` in `{s}`"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Self)
    }
}

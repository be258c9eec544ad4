//! Exact-rational helpers: `num/den` parsing and formatting, decimal
//! rendering, exact Bernoulli draws, and bounded-denominator
//! rationalization of floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Rational from two machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a `num/den` string; a bare integer is read as `n/1`.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let trimmed = s.trim();
    let (num_s, den_s) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational `{trimmed}`")))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational `{trimmed}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{trimmed}`")));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `num/den` rendering, always reduced, denominator always present.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Fixed-point decimal rendering with `digits` places, rounded half away
/// from zero. Exact integer arithmetic, so output is byte-stable.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits);
    // round(|r| * 10^digits) = floor((2 * num * 10^digits + den) / (2 * den))
    let rounded = (abs.numer() * &scale * 2u32 + abs.denom()) / (abs.denom() * 2u32);
    let int_part = &rounded / &scale;
    let frac_part = &rounded % &scale;
    format!(
        "{sign}{int_part}.{frac:0>width$}",
        frac = frac_part.to_string(),
        width = digits as usize
    )
}

/// Exact Bernoulli(p) draw for rational p in [0, 1].
///
/// Walks the binary expansions of p and of a lazily drawn uniform real,
/// consuming one random bit per round; expected two rounds per call.
pub fn bernoulli<R: Rng + ?Sized>(p: &BigRational, rng: &mut R) -> bool {
    debug_assert!(!p.is_negative() && *p <= BigRational::one());
    let mut num = p.numer().clone();
    let den = p.denom();
    loop {
        if num.is_zero() {
            return false;
        }
        if num == *den {
            return true;
        }
        num *= 2;
        let p_bit = num >= *den;
        if p_bit {
            num -= den;
        }
        let u_bit = rng.random::<u64>() & 1 == 1;
        if u_bit != p_bit {
            // First differing bit decides: U < p iff U's bit is 0 and p's is 1.
            return p_bit;
        }
    }
}

/// Best rational approximation to `x` with denominator at most `max_den`.
///
/// Runs the continued-fraction expansion of the exact binary value of `x`
/// in integer arithmetic; when the next convergent would overshoot the
/// denominator cap, compares the last convergent against the largest
/// admissible semiconvergent and returns the closer of the two.
pub fn best_rational(x: f64, max_den: u64) -> BigRational {
    assert!(x.is_finite(), "cannot rationalize a non-finite value");
    assert!(max_den >= 1);
    let exact = BigRational::from_float(x).expect("finite float");
    let target = exact.abs();
    let negative = x < 0.0;
    let cap = BigInt::from(max_den);

    let mut n = target.numer().clone();
    let mut d = target.denom().clone();
    // Convergent recurrence state: h/k is one step behind the loop.
    let (mut h_prev, mut k_prev) = (BigInt::zero(), BigInt::one());
    let (mut h_cur, mut k_cur) = (BigInt::one(), BigInt::zero());

    let result = loop {
        if d.is_zero() {
            break BigRational::new(h_cur, k_cur);
        }
        let a = &n / &d;
        let h_next = &a * &h_cur + &h_prev;
        let k_next = &a * &k_cur + &k_prev;
        if k_next > cap {
            // k_cur >= 1 here: the very first convergent has k = 1 <= cap.
            let t = (&cap - &k_prev) / &k_cur;
            let conv = BigRational::new(h_cur.clone(), k_cur.clone());
            if t.is_zero() {
                break conv;
            }
            let semi = BigRational::new(&t * &h_cur + &h_prev, &t * &k_cur + &k_prev);
            let err_conv = (&conv - &target).abs();
            let err_semi = (&semi - &target).abs();
            break if err_semi < err_conv { semi } else { conv };
        }
        let r = n % &d;
        n = std::mem::replace(&mut d, r);
        h_prev = std::mem::replace(&mut h_cur, h_next);
        k_prev = std::mem::replace(&mut k_cur, k_next);
    };
    if negative {
        -result
    } else {
        result
    }
}

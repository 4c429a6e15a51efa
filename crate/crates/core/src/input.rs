//! Synthetic payloads and size arguments.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("bad size `{0}` (expected e.g. 512, 12kb, 16mb)")]
    BadSize(String),
    #[error("bad size range `{0}` (expected A..B:N)")]
    BadRange(String),
    #[error("bad fill `{0}` (expected ascii, zero or random:SEED)")]
    BadFill(String),
}

/// How synthetic data is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fill {
    /// Printable ASCII (0x20..=0x7e), never a zero byte.
    Ascii,
    Zero,
    Random(u64),
}

const ASCII_SEED: u64 = 0x6761_736c_6564_6765;

impl FromStr for Fill {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Fill::Ascii),
            "zero" => Ok(Fill::Zero),
            _ => s
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(Fill::Random)
                .ok_or_else(|| InputError::BadFill(s.to_string())),
        }
    }
}

impl fmt::Display for Fill {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fill::Ascii => f.write_str("ascii"),
            Fill::Zero => f.write_str("zero"),
            Fill::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

pub fn synthesize_input(size: usize, fill: Fill) -> Vec<u8> {
    match fill {
        Fill::Zero => vec![0; size],
        Fill::Ascii => {
            let mut rng = ChaCha8Rng::seed_from_u64(ASCII_SEED);
            (0..size).map(|_| rng.gen_range(0x20u8..=0x7e)).collect()
        }
        Fill::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = vec![0; size];
            rng.fill(&mut out[..]);
            out
        }
    }
}

/// Parses `512`, `1b`, `12kb`, `16mb` (binary multiples).
pub fn parse_size(s: &str) -> Result<usize, InputError> {
    let lower = s.trim().to_ascii_lowercase();
    let split = lower.find(|c: char| !c.is_ascii_digit()).unwrap_or(lower.len());
    let (digits, unit) = lower.split_at(split);
    let n: usize = digits.parse().map_err(|_| InputError::BadSize(s.to_string()))?;
    let mult = match unit {
        "" | "b" => 1,
        "k" | "kb" | "kib" => 1 << 10,
        "m" | "mb" | "mib" => 1 << 20,
        "g" | "gb" | "gib" => 1 << 30,
        _ => return Err(InputError::BadSize(s.to_string())),
    };
    n.checked_mul(mult).ok_or_else(|| InputError::BadSize(s.to_string()))
}

/// `count` sizes evenly spaced over `[lo, hi]`, endpoints included, rounded to
/// the nearest byte.
pub fn size_grid(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let steps = (count - 1) as u128;
            let span = hi.saturating_sub(lo) as u128;
            (0..count as u128).map(|k| lo + ((k * span + steps / 2) / steps) as usize).collect()
        }
    }
}

/// Parses `A..B:N` into a grid, or a comma-separated list of sizes.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, InputError> {
    if let Some((range, count)) = s.split_once(':') {
        let (lo, hi) = range.split_once("..").ok_or_else(|| InputError::BadRange(s.to_string()))?;
        let count: usize = count.trim().parse().map_err(|_| InputError::BadRange(s.to_string()))?;
        let (lo, hi) = (parse_size(lo)?, parse_size(hi)?);
        if lo > hi || count == 0 {
            return Err(InputError::BadRange(s.to_string()));
        }
        return Ok(size_grid(lo, hi, count));
    }
    if s.contains("..") {
        return Err(InputError::BadRange(s.to_string()));
    }
    s.split(',').map(parse_size).collect()
}

//! ABI encoding, function selectors, and transaction payload pricing.
//!
//! Only the five value types the storage experiments need are supported:
//! `uint256`, `bool`, `address`, `string` and `bytes`.

use std::fmt;
use std::str::FromStr;

use primitive_types::U256;
use serde::Serialize;
use thiserror::Error;

use crate::hash::keccak256;
use crate::schedule::GasSchedule;

/// Solidity refuses to compile functions with more parameters than this
/// ("stack too deep").
pub const MAX_PARAMS: usize = 16;

const WORD: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbiError {
    #[error("too many parameters: {0} (at most {MAX_PARAMS} fit on the stack)")]
    TooManyParameters(usize),
    #[error("argument {index} does not match declared type {expected}")]
    TypeMismatch { index: usize, expected: AbiType },
    #[error("expected {expected} arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },
    #[error("unsupported ABI type `{0}`")]
    UnsupportedType(String),
    #[error("malformed signature `{0}`")]
    MalformedSignature(String),
    #[error("invalid value for {ty}: {reason}")]
    InvalidValue { ty: AbiType, reason: String },
    #[error("decode error: {0}")]
    Decode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AbiType {
    Uint256,
    Bool,
    Address,
    String,
    Bytes,
}

impl AbiType {
    pub fn canonical(self) -> &'static str {
        match self {
            AbiType::Uint256 => "uint256",
            AbiType::Bool => "bool",
            AbiType::Address => "address",
            AbiType::String => "string",
            AbiType::Bytes => "bytes",
        }
    }

    pub fn is_dynamic(self) -> bool {
        matches!(self, AbiType::String | AbiType::Bytes)
    }
}

impl fmt::Display for AbiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical())
    }
}

impl FromStr for AbiType {
    type Err = AbiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "uint256" | "uint" => Ok(AbiType::Uint256),
            "bool" => Ok(AbiType::Bool),
            "address" => Ok(AbiType::Address),
            "string" => Ok(AbiType::String),
            "bytes" => Ok(AbiType::Bytes),
            other => Err(AbiError::UnsupportedType(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbiValue {
    Uint256(U256),
    Bool(bool),
    Address([u8; 20]),
    StringVal(Vec<u8>),
    BytesVal(Vec<u8>),
}

impl AbiValue {
    pub fn uint(v: u64) -> Self {
        AbiValue::Uint256(U256::from(v))
    }

    pub fn string(s: impl AsRef<[u8]>) -> Self {
        AbiValue::StringVal(s.as_ref().to_vec())
    }

    pub fn bytes(b: impl AsRef<[u8]>) -> Self {
        AbiValue::BytesVal(b.as_ref().to_vec())
    }

    pub fn abi_type(&self) -> AbiType {
        match self {
            AbiValue::Uint256(_) => AbiType::Uint256,
            AbiValue::Bool(_) => AbiType::Bool,
            AbiValue::Address(_) => AbiType::Address,
            AbiValue::StringVal(_) => AbiType::String,
            AbiValue::BytesVal(_) => AbiType::Bytes,
        }
    }

    /// Builds a value of type `ty` from its JSON form: numbers or decimal/hex
    /// strings for `uint256`, hex strings for `address` and `bytes`.
    pub fn from_json(ty: AbiType, value: &serde_json::Value) -> Result<Self, AbiError> {
        use serde_json::Value;
        let invalid = |reason: &str| AbiError::InvalidValue { ty, reason: reason.to_string() };
        match (ty, value) {
            (AbiType::Uint256, Value::Number(n)) => {
                n.as_u64().map(AbiValue::uint).ok_or_else(|| invalid("expected a non-negative integer"))
            }
            (AbiType::Uint256, Value::String(s)) => parse_uint(s).map(AbiValue::Uint256).ok_or_else(|| invalid(s)),
            (AbiType::Bool, Value::Bool(b)) => Ok(AbiValue::Bool(*b)),
            (AbiType::Address, Value::String(s)) => {
                let raw = decode_hex(s).ok_or_else(|| invalid("expected hex"))?;
                let addr: [u8; 20] = raw.try_into().map_err(|_| invalid("expected 20 bytes"))?;
                Ok(AbiValue::Address(addr))
            }
            (AbiType::String, Value::String(s)) => Ok(AbiValue::string(s)),
            (AbiType::Bytes, Value::String(s)) => {
                decode_hex(s).map(AbiValue::BytesVal).ok_or_else(|| invalid("expected hex"))
            }
            _ => Err(invalid(&format!("unexpected JSON value {value}"))),
        }
    }
}

fn parse_uint(s: &str) -> Option<U256> {
    match s.strip_prefix("0x") {
        Some(h) => U256::from_str_radix(h, 16).ok(),
        None => U256::from_dec_str(s).ok(),
    }
}

fn decode_hex(s: &str) -> Option<Vec<u8>> {
    hex::decode(s.strip_prefix("0x").unwrap_or(s)).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionSignature {
    pub name: String,
    pub params: Vec<AbiType>,
}

impl FunctionSignature {
    pub fn new(name: impl Into<String>, params: Vec<AbiType>) -> Self {
        FunctionSignature { name: name.into(), params }
    }

    /// `name(type1,type2,...)`
    pub fn canonical(&self) -> String {
        let params: Vec<&str> = self.params.iter().map(|t| t.canonical()).collect();
        format!("{}({})", self.name, params.join(","))
    }
}

impl fmt::Display for FunctionSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for FunctionSignature {
    type Err = AbiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || AbiError::MalformedSignature(s.to_string());
        let s = s.trim();
        let open = s.find('(').ok_or_else(malformed)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(malformed)?;
        let name = s[..open].trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$') {
            return Err(malformed());
        }
        let params = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner.split(',').map(str::parse).collect::<Result<_, _>>()?
        };
        Ok(FunctionSignature::new(name, params))
    }
}

pub type Selector = [u8; 4];

pub fn selector(sig: &FunctionSignature) -> Selector {
    let h = keccak256(sig.canonical().as_bytes());
    [h[0], h[1], h[2], h[3]]
}

fn word_from_u256(v: U256) -> [u8; WORD] {
    let mut w = [0u8; WORD];
    v.to_big_endian(&mut w);
    w
}

fn push_padded(out: &mut Vec<u8>, data: &[u8]) {
    out.extend_from_slice(data);
    let rem = data.len() % WORD;
    if rem != 0 {
        out.resize(out.len() + WORD - rem, 0);
    }
}

fn static_word(value: &AbiValue) -> Option<[u8; WORD]> {
    match value {
        AbiValue::Uint256(v) => Some(word_from_u256(*v)),
        AbiValue::Bool(b) => Some(word_from_u256(U256::from(*b as u8))),
        AbiValue::Address(a) => {
            let mut w = [0u8; WORD];
            w[12..].copy_from_slice(a);
            Some(w)
        }
        AbiValue::StringVal(_) | AbiValue::BytesVal(_) => None,
    }
}

/// Length in bytes of `abi_encode(values)` without building it.
pub fn encoded_len(values: &[AbiValue]) -> usize {
    values
        .iter()
        .map(|v| match v {
            AbiValue::StringVal(b) | AbiValue::BytesVal(b) => 2 * WORD + b.len().div_ceil(WORD) * WORD,
            _ => WORD,
        })
        .sum()
}

/// Standard head/tail tuple encoding.
pub fn abi_encode(values: &[AbiValue]) -> Vec<u8> {
    let head_len = values.len() * WORD;
    let mut head = Vec::with_capacity(head_len);
    let mut tail = Vec::new();
    for value in values {
        match static_word(value) {
            Some(word) => head.extend_from_slice(&word),
            None => {
                let data = match value {
                    AbiValue::StringVal(b) | AbiValue::BytesVal(b) => b,
                    _ => unreachable!(),
                };
                head.extend_from_slice(&word_from_u256(U256::from(head_len + tail.len())));
                tail.extend_from_slice(&word_from_u256(U256::from(data.len())));
                push_padded(&mut tail, data);
            }
        }
    }
    head.extend_from_slice(&tail);
    head
}

pub fn abi_decode(types: &[AbiType], data: &[u8]) -> Result<Vec<AbiValue>, AbiError> {
    let word_at = |offset: usize| -> Result<&[u8], AbiError> {
        data.get(offset..offset + WORD).ok_or_else(|| AbiError::Decode(format!("truncated word at {offset}")))
    };
    let as_usize = |w: &[u8]| -> Result<usize, AbiError> {
        let v = U256::from_big_endian(w);
        if v > U256::from(data.len()) {
            return Err(AbiError::Decode(format!("offset/length {v} out of range")));
        }
        Ok(v.as_usize())
    };
    let mut out = Vec::with_capacity(types.len());
    for (i, ty) in types.iter().enumerate() {
        let w = word_at(i * WORD)?;
        let value = match ty {
            AbiType::Uint256 => AbiValue::Uint256(U256::from_big_endian(w)),
            AbiType::Bool => match U256::from_big_endian(w) {
                v if v.is_zero() => AbiValue::Bool(false),
                v if v == U256::one() => AbiValue::Bool(true),
                v => return Err(AbiError::Decode(format!("bool word {v}"))),
            },
            AbiType::Address => {
                if w[..12].iter().any(|b| *b != 0) {
                    return Err(AbiError::Decode("dirty address padding".into()));
                }
                AbiValue::Address(w[12..].try_into().unwrap())
            }
            AbiType::String | AbiType::Bytes => {
                let offset = as_usize(w)?;
                let len = as_usize(word_at(offset)?)?;
                let start = offset + WORD;
                let bytes = data
                    .get(start..start + len)
                    .ok_or_else(|| AbiError::Decode("truncated dynamic value".into()))?
                    .to_vec();
                if *ty == AbiType::String {
                    AbiValue::StringVal(bytes)
                } else {
                    AbiValue::BytesVal(bytes)
                }
            }
        };
        out.push(value);
    }
    Ok(out)
}

/// Checks `args` against `sig`'s parameter list without encoding anything.
pub fn check_call(sig: &FunctionSignature, args: &[AbiValue]) -> Result<(), AbiError> {
    if sig.params.len() > MAX_PARAMS || args.len() > MAX_PARAMS {
        return Err(AbiError::TooManyParameters(sig.params.len().max(args.len())));
    }
    if sig.params.len() != args.len() {
        return Err(AbiError::ArgumentCount { expected: sig.params.len(), got: args.len() });
    }
    for (index, (ty, arg)) in sig.params.iter().zip(args).enumerate() {
        if arg.abi_type() != *ty {
            return Err(AbiError::TypeMismatch { index, expected: *ty });
        }
    }
    Ok(())
}

/// `selector(sig) ‖ abi_encode(args)`.
pub fn encode_call(sig: &FunctionSignature, args: &[AbiValue]) -> Result<Vec<u8>, AbiError> {
    check_call(sig, args)?;
    let mut out = selector(sig).to_vec();
    out.extend(abi_encode(args));
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PayloadStats {
    pub zero_bytes: u64,
    pub nonzero_bytes: u64,
}

impl PayloadStats {
    pub fn len(&self) -> u64 {
        self.zero_bytes + self.nonzero_bytes
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn payload_stats(payload: &[u8]) -> PayloadStats {
    let zero_bytes = payload.iter().filter(|b| **b == 0).count() as u64;
    PayloadStats { zero_bytes, nonzero_bytes: payload.len() as u64 - zero_bytes }
}

pub fn intrinsic_gas(stats: PayloadStats, schedule: &GasSchedule) -> u64 {
    schedule.tx_base
        + schedule.calldata_zero_byte * stats.zero_bytes
        + schedule.calldata_nonzero_byte * stats.nonzero_bytes
}

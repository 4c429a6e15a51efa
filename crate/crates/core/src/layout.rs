//! Storage slots occupied by Solidity dynamic `string`/`bytes` values.
//!
//! A value of at most 31 bytes is packed together with its length into the
//! base slot `p`. Longer values keep `2·len + 1` in `p` and their data in
//! `⌈len/32⌉` consecutive slots starting at `keccak256(p)`, where `p` is
//! hashed as a 32-byte big-endian word.

use std::fmt;
use std::str::FromStr;

use primitive_types::U256;
use serde::{Serialize, Serializer};

use crate::hash::keccak256;

/// Largest byte length stored in place alongside the length byte.
pub const IN_PLACE_MAX: usize = 31;

pub const WORD: usize = 32;

/// A 256-bit storage key. Arithmetic wraps modulo 2^256.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SlotAddress(pub U256);

impl SlotAddress {
    pub const fn zero() -> Self {
        SlotAddress(U256::zero())
    }

    pub fn from_u64(v: u64) -> Self {
        SlotAddress(U256::from(v))
    }

    pub fn from_be_bytes(bytes: [u8; 32]) -> Self {
        SlotAddress(U256::from_big_endian(&bytes))
    }

    pub fn to_be_bytes(self) -> [u8; 32] {
        let mut out = [0u8; 32];
        self.0.to_big_endian(&mut out);
        out
    }

    pub fn wrapping_add(self, n: u64) -> Self {
        SlotAddress(self.0.overflowing_add(U256::from(n)).0)
    }

    pub fn wrapping_sub(self, other: SlotAddress) -> U256 {
        self.0.overflowing_sub(other.0).0
    }

    /// `keccak256` of the big-endian word, i.e. where a long value's data begins.
    pub fn data_start(self) -> Self {
        SlotAddress::from_be_bytes(keccak256(&self.to_be_bytes()))
    }
}

impl fmt::Display for SlotAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", hex::encode(self.to_be_bytes()))
    }
}

impl FromStr for SlotAddress {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(h) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            U256::from_str_radix(h, 16).map(SlotAddress).map_err(|e| format!("bad hex slot `{s}`: {e}"))
        } else {
            U256::from_dec_str(s).map(SlotAddress).map_err(|e| format!("bad slot `{s}`: {e:?}"))
        }
    }
}

impl Serialize for SlotAddress {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The slots a dynamic value of a given length occupies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StorageLayoutPlan {
    pub base_slot: SlotAddress,
    pub in_place: bool,
    pub length_slot: Option<SlotAddress>,
    pub data_slots: Vec<SlotAddress>,
    pub byte_length: usize,
}

impl StorageLayoutPlan {
    /// Every slot a full write of the value touches, length slot first.
    pub fn touched_slots(&self) -> Vec<SlotAddress> {
        let mut slots = Vec::with_capacity(self.data_slots.len() + 1);
        slots.extend(self.length_slot);
        slots.extend(self.data_slots.iter().copied());
        slots
    }

    pub fn touched_count(&self) -> usize {
        self.length_slot.is_some() as usize + self.data_slots.len()
    }
}

/// `⌈byte_length / 32⌉`.
pub fn data_slot_count(byte_length: usize) -> usize {
    byte_length.div_ceil(WORD)
}

pub fn layout_dynamic(base_slot: SlotAddress, byte_length: usize) -> StorageLayoutPlan {
    if byte_length <= IN_PLACE_MAX {
        return StorageLayoutPlan {
            base_slot,
            in_place: true,
            length_slot: Some(base_slot),
            data_slots: Vec::new(),
            byte_length,
        };
    }
    let start = base_slot.data_start();
    let data_slots = (0..data_slot_count(byte_length) as u64).map(|i| start.wrapping_add(i)).collect();
    StorageLayoutPlan { base_slot, in_place: false, length_slot: Some(base_slot), data_slots, byte_length }
}

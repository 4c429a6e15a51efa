//! Event declarations, the log entries they produce, and LOG pricing.

use serde::Serialize;
use thiserror::Error;

use crate::abi::{encoded_len, AbiError, AbiType, AbiValue};
use crate::hash::keccak256;
use crate::layout::SlotAddress;
use crate::schedule::{Fork, GasSchedule, MAX_LOG_TOPICS};
use crate::storage::{SlotWrite, StorageMeter};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogError {
    #[error("event `{name}` declares {indexed} indexed parameters (limit {limit})")]
    TooManyIndexed { name: String, indexed: usize, limit: usize },
    #[error(transparent)]
    Abi(#[from] AbiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EventParam {
    pub ty: AbiType,
    pub indexed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventDecl {
    pub name: String,
    pub params: Vec<EventParam>,
    pub anonymous: bool,
}

/// The three event declarations compared in the logging experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventVariant {
    /// `(uint indexed id, string data)`
    Indexed,
    /// `(uint id, string data)`
    NonIndexed,
    /// `(uint indexed id, string data) anonymous`
    AnonymousIndexed,
}

impl EventVariant {
    pub const ALL: [EventVariant; 3] =
        [EventVariant::Indexed, EventVariant::NonIndexed, EventVariant::AnonymousIndexed];
}

impl std::str::FromStr for EventVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "indexed" => Ok(EventVariant::Indexed),
            "non-indexed" => Ok(EventVariant::NonIndexed),
            "anonymous-indexed" | "anonymous" => Ok(EventVariant::AnonymousIndexed),
            other => Err(format!("unknown event variant `{other}`")),
        }
    }
}

impl EventDecl {
    pub fn new(name: impl Into<String>, params: Vec<EventParam>, anonymous: bool) -> Self {
        EventDecl { name: name.into(), params, anonymous }
    }

    /// An `(id, data)` event shaped like `variant`, with `data` of type `data_ty`.
    pub fn id_and_data(name: impl Into<String>, variant: EventVariant, data_ty: AbiType) -> Self {
        let indexed_id = variant != EventVariant::NonIndexed;
        EventDecl::new(
            name,
            vec![EventParam { ty: AbiType::Uint256, indexed: indexed_id }, EventParam { ty: data_ty, indexed: false }],
            variant == EventVariant::AnonymousIndexed,
        )
    }

    pub fn signature(&self) -> String {
        let types: Vec<&str> = self.params.iter().map(|p| p.ty.canonical()).collect();
        format!("{}({})", self.name, types.join(","))
    }

    /// `keccak256(signature)`, absent for anonymous events.
    pub fn topic0(&self) -> Option<[u8; 32]> {
        (!self.anonymous).then(|| keccak256(self.signature().as_bytes()))
    }

    pub fn indexed_count(&self) -> usize {
        self.params.iter().filter(|p| p.indexed).count()
    }

    pub fn indexed_limit(&self) -> usize {
        if self.anonymous {
            MAX_LOG_TOPICS
        } else {
            MAX_LOG_TOPICS - 1
        }
    }

    pub fn validate(&self) -> Result<(), LogError> {
        let indexed = self.indexed_count();
        if indexed > self.indexed_limit() {
            return Err(LogError::TooManyIndexed { name: self.name.clone(), indexed, limit: self.indexed_limit() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LogShape {
    pub topic_count: usize,
    pub data_byte_len: usize,
}

pub fn log_shape(decl: &EventDecl, args: &[AbiValue]) -> Result<LogShape, LogError> {
    decl.validate()?;
    if args.len() != decl.params.len() {
        return Err(AbiError::ArgumentCount { expected: decl.params.len(), got: args.len() }.into());
    }
    for (index, (param, arg)) in decl.params.iter().zip(args).enumerate() {
        if arg.abi_type() != param.ty {
            return Err(AbiError::TypeMismatch { index, expected: param.ty }.into());
        }
    }
    let data: Vec<AbiValue> =
        decl.params.iter().zip(args).filter(|(p, _)| !p.indexed).map(|(_, a)| a.clone()).collect();
    Ok(LogShape { topic_count: usize::from(!decl.anonymous) + decl.indexed_count(), data_byte_len: encoded_len(&data) })
}

pub fn log_gas(shape: LogShape, schedule: &GasSchedule) -> u64 {
    schedule.log_base
        + schedule.log_topic * shape.topic_count as u64
        + schedule.log_data_byte * shape.data_byte_len as u64
}

/// Reads the event counter, reads it again and writes it back incremented.
///
/// Returns the labeled charges; they land on `meter`'s access set.
pub fn charge_counter(meter: &mut StorageMeter, counter_slot: SlotAddress) -> Vec<(&'static str, u64)> {
    vec![
        ("counter read for event id", meter.sload(counter_slot)),
        ("counter read for increment", meter.sload(counter_slot)),
        ("counter increment", meter.sstore(SlotWrite::update(counter_slot)).gas_charged),
    ]
}

/// Per-transaction cost of keeping an event id counter in storage.
pub fn counter_overhead(fork: Fork) -> u64 {
    let mut meter = StorageMeter::for_fork(fork);
    charge_counter(&mut meter, SlotAddress::zero()).iter().map(|(_, g)| g).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::schedule_for;

    fn args(data_len: usize) -> Vec<AbiValue> {
        vec![AbiValue::uint(1), AbiValue::string(vec![b'a'; data_len])]
    }

    fn shape(variant: EventVariant, data_len: usize) -> LogShape {
        log_shape(&EventDecl::id_and_data("DataStored", variant, AbiType::String), &args(data_len)).unwrap()
    }

    #[test]
    fn table_shapes_with_32_byte_string() {
        assert_eq!(shape(EventVariant::Indexed, 32), LogShape { topic_count: 2, data_byte_len: 96 });
        assert_eq!(shape(EventVariant::NonIndexed, 32), LogShape { topic_count: 1, data_byte_len: 128 });
        assert_eq!(shape(EventVariant::AnonymousIndexed, 32), LogShape { topic_count: 1, data_byte_len: 96 });
    }

    #[test]
    fn gas_examples() {
        let s = schedule_for(Fork::PreBerlin);
        assert_eq!(log_gas(LogShape { topic_count: 2, data_byte_len: 96 }, &s), 1893);
        assert_eq!(log_gas(LogShape { topic_count: 0, data_byte_len: 0 }, &s), 375);
    }

    #[test]
    fn encoded_bool_costs_256() {
        let s = schedule_for(Fork::Berlin);
        let bare = EventDecl::new("E", vec![], false);
        let with_bool = EventDecl::new("E", vec![EventParam { ty: AbiType::Bool, indexed: false }], false);
        let a = log_gas(log_shape(&bare, &[]).unwrap(), &s);
        let b = log_gas(log_shape(&with_bool, &[AbiValue::Bool(true)]).unwrap(), &s);
        assert_eq!(b - a, 256);
    }

    #[test]
    fn counter_overhead_per_fork() {
        assert_eq!(counter_overhead(Fork::PreBerlin), 6600);
        assert_eq!(counter_overhead(Fork::Berlin), 5100);
        assert_eq!(counter_overhead(Fork::Berlin) as i64 - counter_overhead(Fork::PreBerlin) as i64, -1500);
    }

    #[test]
    fn indexed_limits() {
        let p = EventParam { ty: AbiType::Uint256, indexed: true };
        let four = EventDecl::new("E", vec![p; 4], false);
        assert!(matches!(
            log_shape(&four, &vec![AbiValue::uint(0); 4]),
            Err(LogError::TooManyIndexed { indexed: 4, limit: 3, .. })
        ));
        let anon = EventDecl::new("E", vec![p; 4], true);
        assert_eq!(log_shape(&anon, &vec![AbiValue::uint(0); 4]).unwrap().topic_count, 4);
        let anon5 = EventDecl::new("E", vec![p; 5], true);
        assert!(anon5.validate().is_err());
    }

    #[test]
    fn topic0_only_for_named_events() {
        let named = EventDecl::id_and_data("DataStored", EventVariant::Indexed, AbiType::String);
        assert_eq!(named.signature(), "DataStored(uint256,string)");
        assert!(named.topic0().is_some());
        let anon = EventDecl::id_and_data("DataStored", EventVariant::AnonymousIndexed, AbiType::String);
        assert!(anon.topic0().is_none());
    }

    #[test]
    fn argument_mismatch() {
        let decl = EventDecl::id_and_data("E", EventVariant::Indexed, AbiType::String);
        assert!(matches!(log_shape(&decl, &[AbiValue::uint(1)]), Err(LogError::Abi(_))));
        assert!(matches!(
            log_shape(&decl, &[AbiValue::uint(1), AbiValue::uint(2)]),
            Err(LogError::Abi(AbiError::TypeMismatch { index: 1, .. }))
        ));
    }

    #[test]
    fn anonymity_discount_and_constant_spread() {
        let s = schedule_for(Fork::PreBerlin);
        for len in [1, 31, 32, 33, 1000, 12_288] {
            let g = |v| log_gas(shape(v, len), &s);
            assert_eq!(g(EventVariant::Indexed) - g(EventVariant::AnonymousIndexed), 375);
            assert_eq!(g(EventVariant::Indexed) - g(EventVariant::NonIndexed), 119);
        }
    }
}

//! Fork-parameterized gas constants.
//!
//! Every gas number the crate charges lives here. Other modules read them
//! through a [`GasSchedule`] obtained from [`schedule_for`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Ropsten-era block gas limit used as the default ceiling for estimates.
pub const DEFAULT_BLOCK_GAS_LIMIT: u64 = 8_000_000;

/// Maximum number of topics a single log entry may carry.
pub const MAX_LOG_TOPICS: usize = 4;

/// The hard forks whose storage pricing differs for the modeled strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fork {
    /// Istanbul-era pricing: flat SLOAD, EIP-2200 SSTORE.
    PreBerlin,
    /// EIP-2929 warm/cold storage access pricing.
    Berlin,
}

impl Fork {
    pub const ALL: [Fork; 2] = [Fork::PreBerlin, Fork::Berlin];

    pub fn as_str(self) -> &'static str {
        match self {
            Fork::PreBerlin => "pre-berlin",
            Fork::Berlin => "berlin",
        }
    }
}

impl fmt::Display for Fork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Fork {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "pre-berlin" | "preberlin" | "istanbul" => Ok(Fork::PreBerlin),
            "berlin" => Ok(Fork::Berlin),
            other => Err(format!("unknown fork `{other}` (expected pre-berlin or berlin)")),
        }
    }
}

/// Complete table of gas constants for one fork.
///
/// Fork-specific entries are `Option`s: `sload_flat` is only present before
/// Berlin, `cold_sload`/`warm_access` only from Berlin on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GasSchedule {
    pub fork: Fork,
    pub tx_base: u64,
    pub calldata_zero_byte: u64,
    pub calldata_nonzero_byte: u64,
    pub log_base: u64,
    pub log_topic: u64,
    pub log_data_byte: u64,
    pub sstore_set: u64,
    pub sstore_reset: u64,
    pub sload_flat: Option<u64>,
    pub cold_sload: Option<u64>,
    pub warm_access: Option<u64>,
    pub refund_clear: u64,
    /// Solidity dispatcher prologue up to the short-calldata check.
    pub dispatch_precheck: u64,
    /// Loading and shifting the first four calldata bytes.
    pub dispatch_selector_load: u64,
    /// One `dup1 push4 eq push2 jumpi` comparison block.
    pub dispatch_compare: u64,
    /// Jump into the fallback after every comparison missed.
    pub dispatch_fallback_jump: u64,
}

const PRE_BERLIN: GasSchedule = GasSchedule {
    fork: Fork::PreBerlin,
    tx_base: 21_000,
    calldata_zero_byte: 4,
    calldata_nonzero_byte: 16,
    log_base: 375,
    log_topic: 375,
    log_data_byte: 8,
    sstore_set: 20_000,
    sstore_reset: 5_000,
    sload_flat: Some(800),
    cold_sload: None,
    warm_access: None,
    refund_clear: 15_000,
    dispatch_precheck: 65,
    dispatch_selector_load: 12,
    dispatch_compare: 22,
    dispatch_fallback_jump: 10,
};

const BERLIN: GasSchedule =
    GasSchedule { fork: Fork::Berlin, sload_flat: None, cold_sload: Some(2_100), warm_access: Some(100), ..PRE_BERLIN };

/// Returns the gas table for `fork`.
pub fn schedule_for(fork: Fork) -> GasSchedule {
    match fork {
        Fork::PreBerlin => PRE_BERLIN,
        Fork::Berlin => BERLIN,
    }
}

impl GasSchedule {
    /// Cost of an SLOAD before Berlin.
    ///
    /// Panics when called on a Berlin schedule; callers branch on `fork` first.
    pub(crate) fn flat_sload(&self) -> u64 {
        self.sload_flat.expect("flat SLOAD price requested on a warm/cold schedule")
    }

    pub(crate) fn cold(&self) -> u64 {
        self.cold_sload.expect("cold SLOAD price requested on a pre-Berlin schedule")
    }

    pub(crate) fn warm(&self) -> u64 {
        self.warm_access.expect("warm access price requested on a pre-Berlin schedule")
    }

    /// Flat key → value view of the schedule, omitting entries the fork does not use.
    pub fn to_map(&self) -> BTreeMap<&'static str, u64> {
        let mut map = BTreeMap::new();
        map.insert("tx_base", self.tx_base);
        map.insert("calldata_zero_byte", self.calldata_zero_byte);
        map.insert("calldata_nonzero_byte", self.calldata_nonzero_byte);
        map.insert("log_base", self.log_base);
        map.insert("log_topic", self.log_topic);
        map.insert("log_data_byte", self.log_data_byte);
        map.insert("sstore_set", self.sstore_set);
        map.insert("sstore_reset", self.sstore_reset);
        map.insert("refund_clear", self.refund_clear);
        map.insert("dispatch_precheck", self.dispatch_precheck);
        map.insert("dispatch_selector_load", self.dispatch_selector_load);
        map.insert("dispatch_compare", self.dispatch_compare);
        map.insert("dispatch_fallback_jump", self.dispatch_fallback_jump);
        if let Some(v) = self.sload_flat {
            map.insert("sload_flat", v);
        }
        if let Some(v) = self.cold_sload {
            map.insert("cold_sload", v);
        }
        if let Some(v) = self.warm_access {
            map.insert("warm_access", v);
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pre_berlin_flat_sload() {
        let s = schedule_for(Fork::PreBerlin);
        assert_eq!(s.sload_flat, Some(800));
        assert_eq!(s.cold_sload, None);
        assert_eq!(s.warm_access, None);
    }

    #[test]
    fn berlin_warm_cold() {
        let s = schedule_for(Fork::Berlin);
        assert_eq!(s.cold_sload, Some(2100));
        assert_eq!(s.warm_access, Some(100));
        assert_eq!(s.sload_flat, None);
    }

    #[test]
    fn tx_base_is_fork_independent() {
        for fork in Fork::ALL {
            assert_eq!(schedule_for(fork).tx_base, 21_000);
        }
    }

    #[test]
    fn deterministic() {
        for fork in Fork::ALL {
            assert_eq!(schedule_for(fork), schedule_for(fork));
        }
    }

    #[test]
    fn update_identity() {
        let s = schedule_for(Fork::Berlin);
        assert_eq!(s.cold() + (s.sstore_reset - s.cold()), s.sstore_reset);
        assert_eq!(s.sstore_reset, 5000);
    }

    #[test]
    fn map_omits_unused_entries() {
        let pre = schedule_for(Fork::PreBerlin).to_map();
        assert!(pre.contains_key("sload_flat"));
        assert!(!pre.contains_key("cold_sload"));
        let berlin = schedule_for(Fork::Berlin).to_map();
        assert!(!berlin.contains_key("sload_flat"));
        assert_eq!(berlin["warm_access"], 100);
    }

    #[test]
    fn fork_parsing() {
        assert_eq!("berlin".parse::<Fork>().unwrap(), Fork::Berlin);
        assert_eq!("Pre-Berlin".parse::<Fork>().unwrap(), Fork::PreBerlin);
        assert_eq!("pre_berlin".parse::<Fork>().unwrap(), Fork::PreBerlin);
        assert!("london".parse::<Fork>().is_err());
    }
}

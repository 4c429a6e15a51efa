//! End-to-end gas estimates for each way of putting data on Ethereum.
//!
//! Every estimate is an itemized list of charges. Contract calls are priced as
//! intrinsic gas over the ABI-encoded call, the Solidity selector dispatch,
//! the storage and log operations the function performs, and a calibration
//! term for the remaining execution (zero unless configured). Absolute totals
//! therefore understate a real transaction by that remaining execution; the
//! differences between strategies and forks are exact.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::abi::{self, payload_stats, AbiError, AbiType, AbiValue, FunctionSignature, Selector};
use crate::content::{self, build_tree, ChunkTree, ChunkerConfig, CidVersion, ContentError, Platform};
use crate::layout::{layout_dynamic, SlotAddress};
use crate::logs::{self, EventDecl, EventParam, EventVariant, LogError};
use crate::schedule::{schedule_for, Fork, GasSchedule, DEFAULT_BLOCK_GAS_LIMIT};
use crate::storage::{GasReceipt, SlotState, SlotWrite, StorageMeter};

/// Slot of the contract's `string` (or `bytes`) state variable.
pub const VALUE_SLOT: u64 = 0;
/// Slot of the event id counter.
pub const COUNTER_SLOT: u64 = 1;
/// Slot of the state word the setter reads twice when overwriting a value.
pub const STATE_READ_SLOT: u64 = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EstimateError {
    #[error("no function selector matches and the contract has no fallback; the transaction reverts")]
    NoDispatchTarget,
    #[error("dispatch table contains duplicate selector 0x{}", hex::encode(.0))]
    DuplicateSelector(Selector),
    #[error("growing requires new size {new} > old size {old}")]
    NotGrowing { old: usize, new: usize },
    #[error(transparent)]
    Abi(#[from] AbiError),
    #[error(transparent)]
    Log(#[from] LogError),
    #[error(transparent)]
    Content(#[from] ContentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    ScStoreClean,
    ScGrowDouble,
    ScUpdateSameSize,
    EventIndexed,
    EventNonIndexed,
    EventAnonymousIndexed,
    TxPayloadEoaToEoa,
    TxPayloadFallback,
    UnusedParamPlain,
    UnusedParamWithEvent,
    HybridSwarm,
    HybridIpfs,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 12] = [
        StrategyKind::ScStoreClean,
        StrategyKind::ScGrowDouble,
        StrategyKind::ScUpdateSameSize,
        StrategyKind::EventIndexed,
        StrategyKind::EventNonIndexed,
        StrategyKind::EventAnonymousIndexed,
        StrategyKind::TxPayloadEoaToEoa,
        StrategyKind::TxPayloadFallback,
        StrategyKind::UnusedParamPlain,
        StrategyKind::UnusedParamWithEvent,
        StrategyKind::HybridSwarm,
        StrategyKind::HybridIpfs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyKind::ScStoreClean => "sc-store-clean",
            StrategyKind::ScGrowDouble => "sc-grow-double",
            StrategyKind::ScUpdateSameSize => "sc-update-same-size",
            StrategyKind::EventIndexed => "event-indexed",
            StrategyKind::EventNonIndexed => "event-non-indexed",
            StrategyKind::EventAnonymousIndexed => "event-anonymous-indexed",
            StrategyKind::TxPayloadEoaToEoa => "tx-payload-eoa-to-eoa",
            StrategyKind::TxPayloadFallback => "tx-payload-fallback",
            StrategyKind::UnusedParamPlain => "unused-param-plain",
            StrategyKind::UnusedParamWithEvent => "unused-param-with-event",
            StrategyKind::HybridSwarm => "hybrid-swarm",
            StrategyKind::HybridIpfs => "hybrid-ipfs",
        }
    }

    pub fn is_hybrid(self) -> bool {
        matches!(self, StrategyKind::HybridSwarm | StrategyKind::HybridIpfs)
    }

    fn event_variant(self) -> Option<EventVariant> {
        match self {
            StrategyKind::EventIndexed => Some(EventVariant::Indexed),
            StrategyKind::EventNonIndexed => Some(EventVariant::NonIndexed),
            StrategyKind::EventAnonymousIndexed => Some(EventVariant::AnonymousIndexed),
            _ => None,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown strategy `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    Intrinsic,
    Dispatch,
    StateRead,
    Storage,
    Counter,
    Log,
    Execution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub label: String,
    pub kind: ComponentKind,
    pub gas: u64,
    /// Derived from a bytecode-level model rather than measured.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub modeled: bool,
}

/// Structure of the off-chain object behind a hybrid estimate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffchainStats {
    pub platform: HybridPlatform,
    pub chunk_count: usize,
    pub node_count: usize,
    pub depth: usize,
    pub identifier_len: usize,
    /// Zero bytes inside the identifier; each one is cheaper calldata.
    pub identifier_zero_bytes: usize,
    /// Gas with every identifier byte priced as non-zero calldata. Depends
    /// only on the identifier length, not on the hash it happens to contain.
    pub nominal_anchor_gas: u64,
    pub identifier_hex: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Estimate {
    pub strategy: StrategyKind,
    pub fork: Fork,
    pub data_size: usize,
    pub gas_total: u64,
    pub breakdown: Vec<Component>,
    pub refund: u64,
    pub exceeds_block_limit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offchain: Option<OffchainStats>,
}

impl Estimate {
    /// Sum of the breakdown entries of one kind.
    pub fn gas_of(&self, kind: ComponentKind) -> u64 {
        self.breakdown.iter().filter(|c| c.kind == kind).map(|c| c.gas).sum()
    }

    /// Charged gas minus the refund, capped at half the charge.
    pub fn net_gas(&self) -> u64 {
        self.gas_total - self.refund.min(self.gas_total / 2)
    }
}

/// Function selectors deployed on a contract, and whether it has a fallback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispatchConfig {
    selectors: Vec<Selector>,
    pub has_fallback: bool,
}

impl DispatchConfig {
    pub fn new(mut selectors: Vec<Selector>, has_fallback: bool) -> Result<Self, EstimateError> {
        selectors.sort_unstable();
        if let Some(w) = selectors.windows(2).find(|w| w[0] == w[1]) {
            return Err(EstimateError::DuplicateSelector(w[0]));
        }
        Ok(DispatchConfig { selectors, has_fallback })
    }

    pub fn from_functions<'a>(
        functions: impl IntoIterator<Item = &'a FunctionSignature>,
        has_fallback: bool,
    ) -> Result<Self, EstimateError> {
        Self::new(functions.into_iter().map(abi::selector).collect(), has_fallback)
    }

    /// Selectors in the order the dispatcher compares them (hex-ascending).
    pub fn selectors(&self) -> &[Selector] {
        &self.selectors
    }

    /// 1-based position of `sel` in comparison order.
    pub fn rank(&self, sel: &Selector) -> Option<usize> {
        self.selectors.binary_search(sel).ok().map(|i| i + 1)
    }
}

/// Gas the Solidity dispatcher spends before control reaches a function body
/// or the fallback, relative to a plain value transfer.
///
/// Short payloads fall through to the fallback after the length check. Longer
/// ones load the selector and compare it against each deployed selector in
/// ascending order; a miss on every comparison costs one more jump.
pub fn dispatch_cost(payload: &[u8], cfg: &DispatchConfig, schedule: &GasSchedule) -> Result<u64, EstimateError> {
    if payload.len() < 4 {
        return if cfg.has_fallback { Ok(schedule.dispatch_precheck) } else { Err(EstimateError::NoDispatchTarget) };
    }
    let sel: Selector = payload[..4].try_into().unwrap();
    let base = schedule.dispatch_precheck + schedule.dispatch_selector_load;
    match cfg.rank(&sel) {
        Some(rank) => Ok(base + schedule.dispatch_compare * rank as u64),
        None if cfg.has_fallback => {
            Ok(base + schedule.dispatch_compare * cfg.selectors.len() as u64 + schedule.dispatch_fallback_jump)
        }
        None => Err(EstimateError::NoDispatchTarget),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PayloadTarget {
    EoaToEoa,
    EoaToContract,
}

impl FromStr for PayloadTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eoa" | "eoa-to-eoa" => Ok(PayloadTarget::EoaToEoa),
            "contract" | "eoa-to-contract" => Ok(PayloadTarget::EoaToContract),
            other => Err(format!("unknown payload target `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HybridPlatform {
    Swarm,
    SwarmEncrypted,
    IpfsCidV0,
    IpfsCidV1,
}

impl HybridPlatform {
    pub const ALL: [HybridPlatform; 4] =
        [HybridPlatform::Swarm, HybridPlatform::SwarmEncrypted, HybridPlatform::IpfsCidV0, HybridPlatform::IpfsCidV1];

    pub fn chunk_platform(self) -> Platform {
        match self {
            HybridPlatform::Swarm => Platform::Swarm,
            HybridPlatform::SwarmEncrypted => Platform::SwarmEncrypted,
            HybridPlatform::IpfsCidV0 | HybridPlatform::IpfsCidV1 => Platform::Ipfs,
        }
    }

    pub fn cid_version(self) -> CidVersion {
        match self {
            HybridPlatform::IpfsCidV1 => CidVersion::V1,
            _ => CidVersion::V0,
        }
    }

    fn strategy(self) -> StrategyKind {
        match self {
            HybridPlatform::Swarm | HybridPlatform::SwarmEncrypted => StrategyKind::HybridSwarm,
            HybridPlatform::IpfsCidV0 | HybridPlatform::IpfsCidV1 => StrategyKind::HybridIpfs,
        }
    }
}

impl FromStr for HybridPlatform {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "swarm" => Ok(HybridPlatform::Swarm),
            "swarm-encrypted" => Ok(HybridPlatform::SwarmEncrypted),
            "ipfs" | "ipfs-v0" | "ipfs-cidv0" => Ok(HybridPlatform::IpfsCidV0),
            "ipfs-v1" | "ipfs-cidv1" => Ok(HybridPlatform::IpfsCidV1),
            other => Err(format!("unknown hybrid platform `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnchorStrategy {
    /// Identifier written to a `bytes` state variable.
    ScStorage,
    /// Identifier emitted in an indexed-id event.
    EventLog,
}

impl FromStr for AnchorStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "storage" | "sc-storage" => Ok(AnchorStrategy::ScStorage),
            "event" | "event-log" => Ok(AnchorStrategy::EventLog),
            other => Err(format!("unknown anchor strategy `{other}`")),
        }
    }
}

fn sig(s: &str) -> FunctionSignature {
    s.parse().expect("built-in signature")
}

/// Accumulates components for one estimate.
struct Ledger {
    breakdown: Vec<Component>,
    refund: u64,
}

impl Ledger {
    fn new() -> Self {
        Ledger { breakdown: Vec::new(), refund: 0 }
    }

    fn push(&mut self, label: impl Into<String>, kind: ComponentKind, gas: u64) {
        self.breakdown.push(Component { label: label.into(), kind, gas, modeled: false });
    }

    fn push_modeled(&mut self, label: impl Into<String>, kind: ComponentKind, gas: u64) {
        self.breakdown.push(Component { label: label.into(), kind, gas, modeled: true });
    }

    fn push_receipt(&mut self, label: impl Into<String>, receipt: GasReceipt) {
        self.push(label, ComponentKind::Storage, receipt.gas_charged);
        self.refund += receipt.refund_accrued;
    }
}

/// Prices strategies for one fork and one contract model.
#[derive(Debug, Clone)]
pub struct Estimator {
    schedule: GasSchedule,
    block_gas_limit: u64,
    execution_overhead: u64,
    auxiliary_functions: Vec<FunctionSignature>,
    fallback_contract: DispatchConfig,
    hybrid_anchor: AnchorStrategy,
    hybrid_ipfs_cid: CidVersion,
}

impl Estimator {
    /// Contracts expose their entry point plus `reset()` and the public
    /// getter `data()`; the fallback target deploys `store(string)`,
    /// `reset()` and `data()`.
    pub fn new(fork: Fork) -> Self {
        let auxiliary_functions = vec![sig("reset()"), sig("data()")];
        let fallback_functions = [sig("store(string)"), sig("reset()"), sig("data()")];
        Estimator {
            schedule: schedule_for(fork),
            block_gas_limit: DEFAULT_BLOCK_GAS_LIMIT,
            execution_overhead: 0,
            auxiliary_functions,
            fallback_contract: DispatchConfig::from_functions(&fallback_functions, true)
                .expect("distinct built-in selectors"),
            hybrid_anchor: AnchorStrategy::ScStorage,
            hybrid_ipfs_cid: CidVersion::V0,
        }
    }

    pub fn with_block_gas_limit(mut self, limit: u64) -> Self {
        self.block_gas_limit = limit;
        self
    }

    /// Flat charge added to every contract call for execution the model does
    /// not itemize (stack shuffling, memory expansion, copying).
    pub fn with_execution_overhead(mut self, gas: u64) -> Self {
        self.execution_overhead = gas;
        self
    }

    /// Functions deployed next to each strategy's entry point.
    pub fn with_auxiliary_functions(mut self, functions: Vec<FunctionSignature>) -> Self {
        self.auxiliary_functions = functions;
        self
    }

    pub fn with_fallback_contract(mut self, cfg: DispatchConfig) -> Self {
        self.fallback_contract = cfg;
        self
    }

    /// Anchor used for the hybrid strategies in comparisons.
    pub fn with_hybrid_anchor(mut self, anchor: AnchorStrategy, ipfs_cid: CidVersion) -> Self {
        self.hybrid_anchor = anchor;
        self.hybrid_ipfs_cid = ipfs_cid;
        self
    }

    pub fn fork(&self) -> Fork {
        self.schedule.fork
    }

    pub fn schedule(&self) -> &GasSchedule {
        &self.schedule
    }

    pub fn block_gas_limit(&self) -> u64 {
        self.block_gas_limit
    }

    pub fn fallback_contract(&self) -> &DispatchConfig {
        &self.fallback_contract
    }

    fn finish(&self, strategy: StrategyKind, data_size: usize, ledger: Ledger) -> Estimate {
        let gas_total = ledger.breakdown.iter().map(|c| c.gas).sum();
        Estimate {
            strategy,
            fork: self.fork(),
            data_size,
            gas_total,
            breakdown: ledger.breakdown,
            refund: ledger.refund,
            exceeds_block_limit: gas_total > self.block_gas_limit,
            offchain: None,
        }
    }

    fn entry_dispatch(&self, entry: &FunctionSignature) -> Result<DispatchConfig, EstimateError> {
        let mut functions = vec![entry];
        functions.extend(self.auxiliary_functions.iter().filter(|f| *f != entry));
        DispatchConfig::from_functions(functions, false)
    }

    /// Intrinsic gas, dispatch and execution overhead of calling `entry(args)`.
    fn call_prologue(&self, entry: &FunctionSignature, args: &[AbiValue]) -> Result<Ledger, EstimateError> {
        let calldata = abi::encode_call(entry, args)?;
        let mut ledger = Ledger::new();
        ledger.push(
            "intrinsic gas",
            ComponentKind::Intrinsic,
            abi::intrinsic_gas(payload_stats(&calldata), &self.schedule),
        );
        let dispatch = dispatch_cost(&calldata, &self.entry_dispatch(entry)?, &self.schedule)?;
        ledger.push_modeled(format!("dispatch to {entry}"), ComponentKind::Dispatch, dispatch);
        ledger.push("unmodeled execution (calibration)", ComponentKind::Execution, self.execution_overhead);
        Ok(ledger)
    }

    fn charge_state_reads(&self, meter: &mut StorageMeter, ledger: &mut Ledger) {
        let slot = SlotAddress::from_u64(STATE_READ_SLOT);
        let gas = meter.sload(slot) + meter.sload(slot);
        ledger.push("state reads (2 x SLOAD)", ComponentKind::StateRead, gas);
    }

    fn charge_counter(&self, meter: &mut StorageMeter, ledger: &mut Ledger) {
        for (label, gas) in logs::charge_counter(meter, SlotAddress::from_u64(COUNTER_SLOT)) {
            ledger.push(label, ComponentKind::Counter, gas);
        }
    }

    /// Storage charges for writing `len` bytes into a reset (all-zero) value.
    fn charge_clean_store(&self, meter: &mut StorageMeter, ledger: &mut Ledger, len: usize) {
        let plan = layout_dynamic(SlotAddress::from_u64(VALUE_SLOT), len);
        let base = plan.base_slot;
        if plan.in_place {
            let write = if len == 0 { SlotWrite::no_op(base, SlotState::Zero) } else { SlotWrite::initialize(base) };
            ledger.push_receipt("value slot (in place) initialize", meter.sstore(write));
            return;
        }
        let mut data = GasReceipt::default();
        for slot in &plan.data_slots {
            data += meter.sstore(SlotWrite::initialize(*slot));
        }
        ledger.push_receipt(format!("data slots initialize x{}", plan.data_slots.len()), data);
        ledger.push_receipt("length slot initialize", meter.sstore(SlotWrite::initialize(base)));
    }

    fn store_entry(ty: AbiType) -> FunctionSignature {
        FunctionSignature::new("store", vec![ty])
    }

    /// Writes `data` into a previously reset string variable.
    pub fn sc_store(&self, data: &[u8]) -> Result<Estimate, EstimateError> {
        let mut ledger = self.call_prologue(&Self::store_entry(AbiType::String), &[AbiValue::string(data)])?;
        let mut meter = StorageMeter::new(self.schedule);
        self.charge_clean_store(&mut meter, &mut ledger, data.len());
        Ok(self.finish(StrategyKind::ScStoreClean, data.len(), ledger))
    }

    /// Overwrites an existing value of the same length with different content.
    /// The length word is left untouched.
    pub fn sc_update(&self, data: &[u8]) -> Result<Estimate, EstimateError> {
        let mut ledger = self.call_prologue(&Self::store_entry(AbiType::String), &[AbiValue::string(data)])?;
        let mut meter = StorageMeter::new(self.schedule);
        self.charge_state_reads(&mut meter, &mut ledger);
        let plan = layout_dynamic(SlotAddress::from_u64(VALUE_SLOT), data.len());
        if plan.in_place {
            let write = if data.is_empty() {
                SlotWrite::no_op(plan.base_slot, SlotState::Zero)
            } else {
                SlotWrite::update(plan.base_slot)
            };
            ledger.push_receipt("value slot (in place) update", meter.sstore(write));
        } else {
            let mut receipt = GasReceipt::default();
            for slot in &plan.data_slots {
                receipt += meter.sstore(SlotWrite::update(*slot));
            }
            ledger.push_receipt(format!("data slots update x{}", plan.data_slots.len()), receipt);
        }
        Ok(self.finish(StrategyKind::ScUpdateSameSize, data.len(), ledger))
    }

    /// Replaces a value of `old_size` bytes with the longer `new_data`.
    pub fn sc_grow(&self, old_size: usize, new_data: &[u8]) -> Result<Estimate, EstimateError> {
        if new_data.len() <= old_size {
            return Err(EstimateError::NotGrowing { old: old_size, new: new_data.len() });
        }
        if old_size == 0 {
            let mut est = self.sc_store(new_data)?;
            est.strategy = StrategyKind::ScGrowDouble;
            return Ok(est);
        }
        let mut ledger = self.call_prologue(&Self::store_entry(AbiType::String), &[AbiValue::string(new_data)])?;
        let mut meter = StorageMeter::new(self.schedule);
        self.charge_state_reads(&mut meter, &mut ledger);
        let old = layout_dynamic(SlotAddress::from_u64(VALUE_SLOT), old_size);
        let new = layout_dynamic(SlotAddress::from_u64(VALUE_SLOT), new_data.len());
        let base = new.base_slot;
        if new.in_place {
            ledger.push_receipt("value slot (in place) update", meter.sstore(SlotWrite::update(base)));
            return Ok(self.finish(StrategyKind::ScGrowDouble, new_data.len(), ledger));
        }
        let reused = old.data_slots.len();
        let mut updated = GasReceipt::default();
        for slot in &new.data_slots[..reused] {
            updated += meter.sstore(SlotWrite::update(*slot));
        }
        let mut initialized = GasReceipt::default();
        for slot in &new.data_slots[reused..] {
            initialized += meter.sstore(SlotWrite::initialize(*slot));
        }
        if reused > 0 {
            ledger.push_receipt(format!("data slots update x{reused}"), updated);
        }
        ledger.push_receipt(format!("data slots initialize x{}", new.data_slots.len() - reused), initialized);
        let length_label = if old.in_place { "value slot becomes length slot, update" } else { "length slot update" };
        ledger.push_receipt(length_label, meter.sstore(SlotWrite::update(base)));
        Ok(self.finish(StrategyKind::ScGrowDouble, new_data.len(), ledger))
    }

    /// Sends `data` as raw transaction payload.
    pub fn tx_payload(&self, data: &[u8], target: PayloadTarget) -> Result<Estimate, EstimateError> {
        let mut ledger = Ledger::new();
        ledger.push("intrinsic gas", ComponentKind::Intrinsic, abi::intrinsic_gas(payload_stats(data), &self.schedule));
        let strategy = match target {
            PayloadTarget::EoaToEoa => StrategyKind::TxPayloadEoaToEoa,
            PayloadTarget::EoaToContract => {
                let gas = dispatch_cost(data, &self.fallback_contract, &self.schedule)?;
                ledger.push_modeled("dispatch to fallback", ComponentKind::Dispatch, gas);
                StrategyKind::TxPayloadFallback
            }
        };
        Ok(self.finish(strategy, data.len(), ledger))
    }

    /// Passes `args` to a function that ignores them, optionally emitting an
    /// event carrying only an indexed id.
    pub fn unused_param(&self, args: &[AbiValue], with_event: bool) -> Result<Estimate, EstimateError> {
        let entry = FunctionSignature::new("store", args.iter().map(AbiValue::abi_type).collect());
        let mut ledger = self.call_prologue(&entry, args)?;
        if with_event {
            let mut meter = StorageMeter::new(self.schedule);
            self.charge_counter(&mut meter, &mut ledger);
            let decl = EventDecl::new("Stored", vec![EventParam { ty: AbiType::Uint256, indexed: true }], false);
            let shape = logs::log_shape(&decl, &[AbiValue::uint(0)])?;
            ledger.push("log (id topic, no data)", ComponentKind::Log, logs::log_gas(shape, &self.schedule));
        }
        let strategy = if with_event { StrategyKind::UnusedParamWithEvent } else { StrategyKind::UnusedParamPlain };
        let size = abi::encoded_len(args);
        Ok(self.finish(strategy, size, ledger))
    }

    fn emit_with_counter(
        &self,
        ledger: &mut Ledger,
        variant: EventVariant,
        name: &str,
        payload: AbiValue,
    ) -> Result<(), EstimateError> {
        let mut meter = StorageMeter::new(self.schedule);
        self.charge_counter(&mut meter, ledger);
        let decl = EventDecl::id_and_data(name, variant, payload.abi_type());
        let shape = logs::log_shape(&decl, &[AbiValue::uint(0), payload])?;
        ledger.push(
            format!("log ({} topics, {} data bytes)", shape.topic_count, shape.data_byte_len),
            ComponentKind::Log,
            logs::log_gas(shape, &self.schedule),
        );
        Ok(())
    }

    /// Emits `data` in one of the three `(id, data)` event declarations.
    pub fn event(&self, variant: EventVariant, data: &[u8]) -> Result<Estimate, EstimateError> {
        let arg = AbiValue::string(data);
        let mut ledger = self.call_prologue(&Self::store_entry(AbiType::String), std::slice::from_ref(&arg))?;
        self.emit_with_counter(&mut ledger, variant, "DataStored", arg)?;
        let strategy = match variant {
            EventVariant::Indexed => StrategyKind::EventIndexed,
            EventVariant::NonIndexed => StrategyKind::EventNonIndexed,
            EventVariant::AnonymousIndexed => StrategyKind::EventAnonymousIndexed,
        };
        Ok(self.finish(strategy, data.len(), ledger))
    }

    /// Chunks `data` for `platform` and anchors the resulting identifier.
    pub fn hybrid(
        &self,
        data: &[u8],
        platform: HybridPlatform,
        anchor: AnchorStrategy,
    ) -> Result<Estimate, EstimateError> {
        let chunk_platform = platform.chunk_platform();
        let tree = build_tree(data, chunk_platform, &ChunkerConfig::default_for(chunk_platform))?;
        self.hybrid_from_tree(&tree, platform, anchor)
    }

    /// As [`Estimator::hybrid`], reusing an already built tree.
    pub fn hybrid_from_tree(
        &self,
        tree: &ChunkTree,
        platform: HybridPlatform,
        anchor: AnchorStrategy,
    ) -> Result<Estimate, EstimateError> {
        if tree.platform != platform.chunk_platform() {
            return Err(
                ContentError::PlatformMismatch { built: tree.platform, requested: platform.chunk_platform() }.into()
            );
        }
        let id = content::identifier_bytes(tree, platform.cid_version())?;
        let arg = AbiValue::bytes(&id);
        let entry = FunctionSignature::new("anchor", vec![AbiType::Bytes]);
        let mut ledger = self.call_prologue(&entry, std::slice::from_ref(&arg))?;
        match anchor {
            AnchorStrategy::ScStorage => {
                let mut meter = StorageMeter::new(self.schedule);
                self.charge_clean_store(&mut meter, &mut ledger, id.len());
            }
            AnchorStrategy::EventLog => self.emit_with_counter(&mut ledger, EventVariant::Indexed, "Anchored", arg)?,
        }
        let mut est = self.finish(platform.strategy(), tree.data_len, ledger);
        let zeros = id.iter().filter(|b| **b == 0).count();
        let discount = self.schedule.calldata_nonzero_byte - self.schedule.calldata_zero_byte;
        est.offchain = Some(OffchainStats {
            identifier_zero_bytes: zeros,
            nominal_anchor_gas: est.gas_total + discount * zeros as u64,
            platform,
            chunk_count: tree.chunk_count,
            node_count: tree.node_count,
            depth: tree.depth,
            identifier_len: id.len(),
            identifier_hex: hex::encode(&id),
        });
        Ok(est)
    }

    /// Estimates `strategy` for `data` using the comparison conventions: growth
    /// starts from half the size, unused parameters carry `data` as one string,
    /// hybrids use the configured anchor.
    pub fn estimate(&self, strategy: StrategyKind, data: &[u8]) -> Result<Estimate, EstimateError> {
        if let Some(variant) = strategy.event_variant() {
            return self.event(variant, data);
        }
        match strategy {
            StrategyKind::ScStoreClean => self.sc_store(data),
            StrategyKind::ScGrowDouble => self.sc_grow(data.len() / 2, data),
            StrategyKind::ScUpdateSameSize => self.sc_update(data),
            StrategyKind::TxPayloadEoaToEoa => self.tx_payload(data, PayloadTarget::EoaToEoa),
            StrategyKind::TxPayloadFallback => self.tx_payload(data, PayloadTarget::EoaToContract),
            StrategyKind::UnusedParamPlain | StrategyKind::UnusedParamWithEvent => {
                let mut est =
                    self.unused_param(&[AbiValue::string(data)], strategy == StrategyKind::UnusedParamWithEvent)?;
                est.data_size = data.len();
                Ok(est)
            }
            StrategyKind::HybridSwarm => self.hybrid(data, HybridPlatform::Swarm, self.hybrid_anchor),
            StrategyKind::HybridIpfs => {
                let platform = match self.hybrid_ipfs_cid {
                    CidVersion::V0 => HybridPlatform::IpfsCidV0,
                    CidVersion::V1 => HybridPlatform::IpfsCidV1,
                };
                self.hybrid(data, platform, self.hybrid_anchor)
            }
            _ => unreachable!("event strategies handled above"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ascii(n: usize) -> Vec<u8> {
        crate::input::synthesize_input(n, crate::input::Fill::Ascii)
    }

    fn three_selector_cfg() -> DispatchConfig {
        DispatchConfig::new(vec![[0x10, 0, 0, 0], [0x20, 0, 0, 0], [0x30, 0, 0, 0]], true).unwrap()
    }

    #[test]
    fn dispatch_paths() {
        let s = schedule_for(Fork::PreBerlin);
        let cfg = three_selector_cfg();
        assert_eq!(dispatch_cost(&[0xff, 1, 2, 3, 4], &cfg, &s).unwrap(), 153);
        assert_eq!(dispatch_cost(&[0xff, 1], &cfg, &s).unwrap(), 65);
        assert_eq!(dispatch_cost(&[0x10, 0, 0, 0], &cfg, &s).unwrap(), 65 + 12 + 22);
        assert_eq!(dispatch_cost(&[0x30, 0, 0, 0, 9], &cfg, &s).unwrap(), 65 + 12 + 66);
    }

    #[test]
    fn dispatch_without_fallback_reverts() {
        let s = schedule_for(Fork::Berlin);
        let cfg = DispatchConfig::new(vec![[1, 2, 3, 4]], false).unwrap();
        assert_eq!(dispatch_cost(&[9, 9, 9, 9], &cfg, &s), Err(EstimateError::NoDispatchTarget));
        assert_eq!(dispatch_cost(&[], &cfg, &s), Err(EstimateError::NoDispatchTarget));
        assert_eq!(dispatch_cost(&[1, 2, 3, 4], &cfg, &s).unwrap(), 99);
    }

    #[test]
    fn duplicate_selectors_rejected() {
        assert!(matches!(
            DispatchConfig::new(vec![[1; 4], [2; 4], [1; 4]], true),
            Err(EstimateError::DuplicateSelector([1, 1, 1, 1]))
        ));
    }

    #[test]
    fn rank_is_hex_ascending() {
        let cfg = DispatchConfig::new(vec![[0x30, 0, 0, 0], [0x10, 0, 0, 0], [0x20, 0, 0, 0]], true).unwrap();
        assert_eq!(cfg.rank(&[0x10, 0, 0, 0]), Some(1));
        assert_eq!(cfg.rank(&[0x30, 0, 0, 0]), Some(3));
        assert_eq!(cfg.rank(&[0x40, 0, 0, 0]), None);
    }

    #[test]
    fn twelve_kib_clean_store() {
        let data = ascii(12_288);
        let berlin = Estimator::new(Fork::Berlin).sc_store(&data).unwrap();
        assert_eq!(berlin.gas_of(ComponentKind::Storage), 8_508_500);
        assert!(berlin.exceeds_block_limit);
        let pre = Estimator::new(Fork::PreBerlin).sc_store(&data).unwrap();
        assert_eq!(pre.gas_of(ComponentKind::Storage), 7_700_000);
        assert!(!pre.exceeds_block_limit);
        assert!(pre.gas_total < 8_000_000);
    }

    #[test]
    fn one_byte_store_is_one_slot() {
        for fork in Fork::ALL {
            let est = Estimator::new(fork).sc_store(b"x").unwrap();
            let init = if fork == Fork::Berlin { 22_100 } else { 20_000 };
            assert_eq!(est.gas_of(ComponentKind::Storage), init);
        }
    }

    #[test]
    fn update_components() {
        let data = ascii(64);
        let pre = Estimator::new(Fork::PreBerlin).sc_update(&data).unwrap();
        assert_eq!(pre.gas_of(ComponentKind::Storage), 10_000);
        assert_eq!(pre.gas_of(ComponentKind::StateRead), 1_600);
        let berlin = Estimator::new(Fork::Berlin).sc_update(&data).unwrap();
        assert_eq!(berlin.gas_of(ComponentKind::Storage), 10_000);
        assert_eq!(berlin.gas_of(ComponentKind::StateRead), 2_200);
        assert_eq!(berlin.gas_total - pre.gas_total, 600);
    }

    #[test]
    fn grow_components() {
        let data = ascii(64);
        let pre = Estimator::new(Fork::PreBerlin).sc_grow(32, &data).unwrap();
        assert_eq!(pre.gas_of(ComponentKind::Storage), 5_000 + 20_000 + 5_000);
        let berlin = Estimator::new(Fork::Berlin).sc_grow(32, &data).unwrap();
        assert_eq!(berlin.gas_of(ComponentKind::Storage), 5_000 + 22_100 + 5_000);
    }

    #[test]
    fn grow_from_empty_delegates_to_store() {
        let e = Estimator::new(Fork::Berlin);
        let data = ascii(100);
        let grow = e.sc_grow(0, &data).unwrap();
        let store = e.sc_store(&data).unwrap();
        assert_eq!(grow.strategy, StrategyKind::ScGrowDouble);
        assert_eq!(grow.gas_total, store.gas_total);
        assert_eq!(e.sc_grow(10, &data[..10]), Err(EstimateError::NotGrowing { old: 10, new: 10 }));
    }

    #[test]
    fn grow_out_of_place() {
        let pre = Estimator::new(Fork::PreBerlin).sc_grow(16, &ascii(64)).unwrap();
        assert_eq!(pre.gas_of(ComponentKind::Storage), 2 * 20_000 + 5_000);
        let small = Estimator::new(Fork::PreBerlin).sc_grow(8, &ascii(16)).unwrap();
        assert_eq!(small.gas_of(ComponentKind::Storage), 5_000);
    }

    #[test]
    fn payload_targets() {
        let e = Estimator::new(Fork::PreBerlin);
        assert_eq!(e.tx_payload(&[], PayloadTarget::EoaToEoa).unwrap().gas_total, 21_000);
        assert_eq!(e.tx_payload(&[1; 1000], PayloadTarget::EoaToEoa).unwrap().gas_total, 37_000);
        let data = ascii(500);
        let eoa = e.tx_payload(&data, PayloadTarget::EoaToEoa).unwrap();
        let ca = e.tx_payload(&data, PayloadTarget::EoaToContract).unwrap();
        assert_eq!(ca.gas_total - eoa.gas_total, 153);
    }

    #[test]
    fn payload_to_contract_without_fallback_fails() {
        let cfg = DispatchConfig::new(vec![[1; 4]], false).unwrap();
        let e = Estimator::new(Fork::Berlin).with_fallback_contract(cfg);
        assert_eq!(e.tx_payload(b"hello", PayloadTarget::EoaToContract), Err(EstimateError::NoDispatchTarget));
    }

    #[test]
    fn unused_param_event_flag() {
        let e = Estimator::new(Fork::PreBerlin);
        let args = [AbiValue::string(ascii(100))];
        let plain = e.unused_param(&args, false).unwrap();
        assert_eq!(plain.gas_of(ComponentKind::Log), 0);
        assert!(plain.breakdown.iter().all(|c| c.kind != ComponentKind::Log));
        let logged = e.unused_param(&args, true).unwrap();
        assert_eq!(logged.gas_of(ComponentKind::Log), 375 + 2 * 375);
        assert_eq!(logged.gas_of(ComponentKind::Counter), 6600);
    }

    #[test]
    fn unused_param_too_many() {
        let e = Estimator::new(Fork::PreBerlin);
        let args = vec![AbiValue::uint(1); 17];
        assert_eq!(e.unused_param(&args, false), Err(EstimateError::Abi(AbiError::TooManyParameters(17))));
    }

    #[test]
    fn unused_param_gap_to_indexed_event_grows_with_data() {
        let e = Estimator::new(Fork::PreBerlin);
        let gap = |n: usize| {
            let data = ascii(n);
            e.event(EventVariant::Indexed, &data).unwrap().gas_total
                - e.unused_param(&[AbiValue::string(&data)], true).unwrap().gas_total
        };
        assert_eq!(gap(64) - gap(32), 8 * 32);
        assert_eq!(gap(3200) - gap(32), 8 * 3168);
    }

    #[test]
    fn fewer_logged_args_are_cheaper() {
        let e = Estimator::new(Fork::PreBerlin);
        let mut args = vec![AbiValue::uint(7), AbiValue::Bool(true), AbiValue::Address([0x11; 20])];
        args.extend((0..4).map(|i| AbiValue::string(ascii(40 + i))));
        let schedule = e.schedule();
        let decl_all = EventDecl::new(
            "Logged",
            args.iter().map(|a| EventParam { ty: a.abi_type(), indexed: false }).collect(),
            false,
        );
        let decl_one = EventDecl::new("Logged", vec![EventParam { ty: AbiType::Uint256, indexed: false }], false);
        let all = logs::log_gas(logs::log_shape(&decl_all, &args).unwrap(), schedule);
        let one = logs::log_gas(logs::log_shape(&decl_one, &args[..1]).unwrap(), schedule);
        let omitted = abi::encoded_len(&args[1..]) as u64 * schedule.log_data_byte;
        assert_eq!(all - one, omitted);
    }

    #[test]
    fn event_deltas() {
        for n in [1, 32, 1000] {
            let data = ascii(n);
            for fork in Fork::ALL {
                let e = Estimator::new(fork);
                let g = |v| e.event(v, &data).unwrap().gas_total;
                assert_eq!(g(EventVariant::Indexed) - g(EventVariant::AnonymousIndexed), 375);
                assert_eq!(g(EventVariant::Indexed) - g(EventVariant::NonIndexed), 119);
            }
            let pre = Estimator::new(Fork::PreBerlin).event(EventVariant::Indexed, &data).unwrap();
            let berlin = Estimator::new(Fork::Berlin).event(EventVariant::Indexed, &data).unwrap();
            assert_eq!(berlin.gas_total as i64 - pre.gas_total as i64, -1500);
        }
    }

    #[test]
    fn hybrid_identifier_lengths_drive_cost() {
        let data = ascii(10_000);
        for fork in Fork::ALL {
            let e = Estimator::new(fork);
            for anchor in [AnchorStrategy::ScStorage, AnchorStrategy::EventLog] {
                let g = |p| e.hybrid(&data, p, anchor).unwrap();
                let swarm = g(HybridPlatform::Swarm);
                assert_eq!(swarm.offchain.as_ref().unwrap().identifier_len, 32);
                assert_eq!(swarm.offchain.as_ref().unwrap().chunk_count, 3);
                assert!(g(HybridPlatform::SwarmEncrypted).gas_total > swarm.gas_total);
                assert!(g(HybridPlatform::IpfsCidV1).gas_total > g(HybridPlatform::IpfsCidV0).gas_total);
            }
        }
    }

    #[test]
    fn hybrid_rejects_wrong_tree() {
        let tree = build_tree(b"abc", Platform::Swarm, &ChunkerConfig::swarm()).unwrap();
        let e = Estimator::new(Fork::Berlin);
        assert!(e.hybrid_from_tree(&tree, HybridPlatform::IpfsCidV0, AnchorStrategy::EventLog).is_err());
    }

    #[test]
    fn totals_are_breakdown_sums() {
        let e = Estimator::new(Fork::Berlin).with_execution_overhead(1234);
        for strategy in StrategyKind::ALL {
            let est = e.estimate(strategy, &ascii(333)).unwrap();
            assert_eq!(est.gas_total, est.breakdown.iter().map(|c| c.gas).sum::<u64>(), "{strategy}");
            assert_eq!(est.exceeds_block_limit, est.gas_total > 8_000_000);
        }
    }

    #[test]
    fn execution_overhead_shifts_contract_calls_only() {
        let data = ascii(100);
        let base = Estimator::new(Fork::PreBerlin);
        let calibrated = Estimator::new(Fork::PreBerlin).with_execution_overhead(500);
        let diff = |s| calibrated.estimate(s, &data).unwrap().gas_total - base.estimate(s, &data).unwrap().gas_total;
        assert_eq!(diff(StrategyKind::ScStoreClean), 500);
        assert_eq!(diff(StrategyKind::TxPayloadFallback), 0);
    }

    #[test]
    fn block_limit_is_configurable() {
        let e = Estimator::new(Fork::PreBerlin).with_block_gas_limit(30_000);
        assert!(e.tx_payload(&[1; 1000], PayloadTarget::EoaToEoa).unwrap().exceeds_block_limit);
    }

    #[test]
    fn net_gas_caps_refund_at_half() {
        let mut est = Estimator::new(Fork::PreBerlin).tx_payload(&[], PayloadTarget::EoaToEoa).unwrap();
        est.refund = 15_000;
        assert_eq!(est.net_gas(), 21_000 - 10_500);
        est.refund = 1_000;
        assert_eq!(est.net_gas(), 20_000);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in StrategyKind::ALL {
            assert_eq!(s.as_str().parse::<StrategyKind>().unwrap(), s);
        }
    }
}

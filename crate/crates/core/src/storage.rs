//! SLOAD/SSTORE metering with EIP-2929 access tracking.
//!
//! Writes are reduced to four classes (initialize, update, no-op, clear).
//! Refunds from clearing are accrued next to the charge, never netted here.

use std::collections::HashSet;

use serde::Serialize;

use crate::layout::SlotAddress;
use crate::schedule::{Fork, GasSchedule};

/// Slots already touched in the current simulated transaction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AccessSet {
    touched: HashSet<SlotAddress>,
}

impl AccessSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, slot: &SlotAddress) -> bool {
        self.touched.contains(slot)
    }

    /// Marks `slot` as accessed; returns true if it was cold.
    pub fn touch(&mut self, slot: SlotAddress) -> bool {
        self.touched.insert(slot)
    }

    pub fn len(&self) -> usize {
        self.touched.len()
    }

    pub fn is_empty(&self) -> bool {
        self.touched.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlotState {
    Zero,
    NonZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WriteClass {
    Initialize,
    Update,
    NoOp,
    Clear,
}

/// One SSTORE, described by the value classes before and after.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotWrite {
    slot: SlotAddress,
    old_state: SlotState,
    new_state: SlotState,
    same_value: bool,
}

impl SlotWrite {
    /// Returns `None` when `same_value` is set but the states differ.
    pub fn new(slot: SlotAddress, old_state: SlotState, new_state: SlotState, same_value: bool) -> Option<Self> {
        if same_value && old_state != new_state {
            return None;
        }
        Some(SlotWrite {
            slot,
            old_state,
            new_state,
            // zero over zero can only ever be the same value
            same_value: same_value || (old_state == SlotState::Zero && new_state == SlotState::Zero),
        })
    }

    pub fn initialize(slot: SlotAddress) -> Self {
        SlotWrite { slot, old_state: SlotState::Zero, new_state: SlotState::NonZero, same_value: false }
    }

    pub fn update(slot: SlotAddress) -> Self {
        SlotWrite { slot, old_state: SlotState::NonZero, new_state: SlotState::NonZero, same_value: false }
    }

    pub fn no_op(slot: SlotAddress, state: SlotState) -> Self {
        SlotWrite { slot, old_state: state, new_state: state, same_value: true }
    }

    pub fn clear(slot: SlotAddress) -> Self {
        SlotWrite { slot, old_state: SlotState::NonZero, new_state: SlotState::Zero, same_value: false }
    }

    pub fn slot(&self) -> SlotAddress {
        self.slot
    }

    pub fn old_state(&self) -> SlotState {
        self.old_state
    }

    pub fn new_state(&self) -> SlotState {
        self.new_state
    }

    pub fn same_value(&self) -> bool {
        self.same_value
    }

    pub fn class(&self) -> WriteClass {
        if self.same_value {
            return WriteClass::NoOp;
        }
        match (self.old_state, self.new_state) {
            (SlotState::Zero, SlotState::NonZero) => WriteClass::Initialize,
            (SlotState::NonZero, SlotState::NonZero) => WriteClass::Update,
            (SlotState::NonZero, SlotState::Zero) => WriteClass::Clear,
            (SlotState::Zero, SlotState::Zero) => WriteClass::NoOp,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GasReceipt {
    pub gas_charged: u64,
    pub refund_accrued: u64,
}

impl std::ops::AddAssign for GasReceipt {
    fn add_assign(&mut self, rhs: Self) {
        self.gas_charged += rhs.gas_charged;
        self.refund_accrued += rhs.refund_accrued;
    }
}

pub fn charge_sload(slot: SlotAddress, access: &mut AccessSet, schedule: &GasSchedule) -> u64 {
    match schedule.fork {
        Fork::PreBerlin => schedule.flat_sload(),
        Fork::Berlin => {
            if access.touch(slot) {
                schedule.cold()
            } else {
                schedule.warm()
            }
        }
    }
}

pub fn charge_sstore(write: SlotWrite, access: &mut AccessSet, schedule: &GasSchedule) -> GasReceipt {
    let class = write.class();
    let gas_charged = match schedule.fork {
        Fork::PreBerlin => match class {
            WriteClass::Initialize => schedule.sstore_set,
            WriteClass::Update | WriteClass::Clear => schedule.sstore_reset,
            WriteClass::NoOp => schedule.flat_sload(),
        },
        Fork::Berlin => {
            let cold = access.touch(write.slot);
            let cold_surcharge = if cold { schedule.cold() } else { 0 };
            match class {
                WriteClass::Initialize => cold_surcharge + schedule.sstore_set,
                WriteClass::Update | WriteClass::Clear => cold_surcharge + (schedule.sstore_reset - schedule.cold()),
                WriteClass::NoOp => cold_surcharge + schedule.warm(),
            }
        }
    };
    let refund_accrued = if class == WriteClass::Clear { schedule.refund_clear } else { 0 };
    GasReceipt { gas_charged, refund_accrued }
}

/// Per-transaction meter: one schedule, one access set, running totals.
#[derive(Debug, Clone)]
pub struct StorageMeter {
    schedule: GasSchedule,
    access: AccessSet,
    total: GasReceipt,
}

impl StorageMeter {
    pub fn new(schedule: GasSchedule) -> Self {
        StorageMeter { schedule, access: AccessSet::new(), total: GasReceipt::default() }
    }

    pub fn for_fork(fork: Fork) -> Self {
        Self::new(crate::schedule::schedule_for(fork))
    }

    pub fn sload(&mut self, slot: SlotAddress) -> u64 {
        let gas = charge_sload(slot, &mut self.access, &self.schedule);
        self.total.gas_charged += gas;
        gas
    }

    pub fn sstore(&mut self, write: SlotWrite) -> GasReceipt {
        let receipt = charge_sstore(write, &mut self.access, &self.schedule);
        self.total += receipt;
        receipt
    }

    pub fn total(&self) -> GasReceipt {
        self.total
    }

    pub fn access(&self) -> &AccessSet {
        &self.access
    }
}

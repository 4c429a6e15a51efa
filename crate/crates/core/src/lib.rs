//! Gas cost models for the ways a DApp can put data on Ethereum.
//!
//! The crate prices contract storage, event logs, raw transaction payload,
//! unused function parameters and hybrid anchoring of Swarm/IPFS content
//! identifiers, under pre-Berlin and Berlin (EIP-2929) gas rules. All
//! figures are exact integers derived from a per-fork [`GasSchedule`].
//!
//! ```
//! use gasledger::{Estimator, Fork};
//!
//! let berlin = Estimator::new(Fork::Berlin);
//! let data = vec![b'a'; 12 * 1024];
//! let est = berlin.sc_store(&data).unwrap();
//! assert!(est.exceeds_block_limit);
//! ```
//!
//! Module map:
//! - [`schedule`]: gas constants per fork
//! - [`layout`]: storage slots of dynamic `string`/`bytes` values
//! - [`storage`]: SLOAD/SSTORE metering with warm/cold access sets
//! - [`abi`]: ABI codec, selectors, intrinsic gas
//! - [`logs`]: event shapes and LOG pricing
//! - [`content`]: Swarm BMT addresses, chunk trees, CIDs
//! - [`estimate`]: per-strategy estimates and selector dispatch
//! - [`report`]: comparison matrices
//! - [`cli`]: the `gasledger` command line

pub mod abi;
pub mod cli;
pub mod content;
pub mod estimate;
pub mod hash;
pub mod input;
pub mod layout;
pub mod logs;
pub mod report;
pub mod schedule;
pub mod storage;

pub use abi::{AbiType, AbiValue, FunctionSignature, PayloadStats};
pub use content::{ChunkTree, ChunkerConfig, Cid, CidVersion, Platform, SwarmAddress};
pub use estimate::{
    AnchorStrategy, ComponentKind, DispatchConfig, Estimate, EstimateError, Estimator, HybridPlatform, PayloadTarget,
    StrategyKind,
};
pub use input::Fill;
pub use layout::{SlotAddress, StorageLayoutPlan};
pub use logs::{EventDecl, EventVariant, LogShape};
pub use report::{compare, ComparisonReport};
pub use schedule::{schedule_for, Fork, GasSchedule};
pub use storage::{AccessSet, GasReceipt, SlotWrite, StorageMeter};

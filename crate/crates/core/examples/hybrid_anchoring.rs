// Chunks a file for Swarm and IPFS, then anchors each identifier on chain
// in storage or in an event.

use std::error::Error;

use gasledger::content::build_tree;
use gasledger::input::{synthesize_input, Fill};
use gasledger::{AnchorStrategy, ChunkerConfig, Estimator, Fork, HybridPlatform};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let data = synthesize_input(1 << 20, Fill::Random(1));
    let est = Estimator::new(Fork::Berlin);
    for platform in HybridPlatform::ALL {
        let chunk_platform = platform.chunk_platform();
        let tree = build_tree(&data, chunk_platform, &ChunkerConfig::default_for(chunk_platform))?;
        for anchor in [AnchorStrategy::ScStorage, AnchorStrategy::EventLog] {
            let e = est.hybrid_from_tree(&tree, platform, anchor)?;
            let off = e.offchain.as_ref().expect("hybrid estimates carry off-chain stats");
            println!(
                "{platform:?}/{anchor:?}: {} chunks, depth {}, {}-byte id, gas {}",
                off.chunk_count, off.depth, off.identifier_len, e.gas_total
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

// Meters a sequence of SLOAD/SSTORE operations under both forks, showing
// the cold/warm split and the refund for clearing a slot.

use std::error::Error;

use gasledger::{Fork, SlotAddress, SlotWrite, StorageMeter};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = SlotAddress::from_u64(0);
    let b = SlotAddress::from_u64(1);
    for fork in Fork::ALL {
        let mut meter = StorageMeter::for_fork(fork);
        let steps = [
            ("sload a", meter.sload(a)),
            ("sload a again", meter.sload(a)),
            ("initialize a", meter.sstore(SlotWrite::initialize(a)).gas_charged),
            ("update b", meter.sstore(SlotWrite::update(b)).gas_charged),
            ("clear b", meter.sstore(SlotWrite::clear(b)).gas_charged),
        ];
        println!("{fork}");
        for (label, gas) in steps {
            println!("  {label:<14} {gas:>6}");
        }
        let total = meter.total();
        println!("  charged {} refund {}", total.gas_charged, total.refund_accrued);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

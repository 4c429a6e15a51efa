// Where a Solidity `string` lives in storage as it grows.

use std::error::Error;

use gasledger::layout::layout_dynamic;
use gasledger::SlotAddress;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let base = SlotAddress::zero();
    for len in [0, 31, 32, 100, 12 * 1024] {
        let plan = layout_dynamic(base, len);
        let first = plan.data_slots.first().map_or("-".to_string(), |s| s.to_string());
        println!(
            "{len:>6} bytes: in_place={:<5} data_slots={:<4} touched={:<4} first data slot {first}",
            plan.in_place,
            plan.data_slots.len(),
            plan.touched_count()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

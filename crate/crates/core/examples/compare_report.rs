// Runs every strategy over a 1 B - 12 KB grid and prints the matrix and
// the cheapest strategy at each size.

use std::error::Error;

use gasledger::estimate::StrategyKind;
use gasledger::input::size_grid;
use gasledger::{compare, Estimator, Fill, Fork};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let report = compare(&Estimator::new(Fork::Berlin), &size_grid(1, 12 * 1024, 6), &StrategyKind::ALL, Fill::Ascii)?;
    print!("{}", report.to_table());
    for r in &report.rankings {
        println!("{:>6} B cheapest: {}", r.size_bytes, r.order[0]);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

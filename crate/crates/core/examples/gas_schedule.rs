// Prints the two fork schedules side by side and the SSTORE/SLOAD prices
// that differ between them.

use std::error::Error;

use gasledger::{schedule_for, Fork};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let pre = schedule_for(Fork::PreBerlin).to_map();
    let berlin = schedule_for(Fork::Berlin).to_map();
    println!("{:<24} {:>11} {:>11}", "parameter", "pre-berlin", "berlin");
    for (name, value) in &pre {
        let b = berlin.get(name).map_or("-".to_string(), u64::to_string);
        println!("{name:<24} {value:>11} {b:>11}");
    }
    for (name, value) in berlin.iter().filter(|(k, _)| !pre.contains_key(*k)) {
        println!("{name:<24} {:>11} {value:>11}", "-");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

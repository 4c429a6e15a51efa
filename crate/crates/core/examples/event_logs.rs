// Compares the three `(id, data)` event declarations and the cost of the
// counter that produces the id.

use std::error::Error;

use gasledger::logs::{counter_overhead, log_gas, log_shape};
use gasledger::{schedule_for, AbiType, AbiValue, EventDecl, EventVariant, Fork};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let data = AbiValue::string(vec![b'x'; 1000]);
    let schedule = schedule_for(Fork::Berlin);
    for variant in EventVariant::ALL {
        let decl = EventDecl::id_and_data("DataStored", variant, AbiType::String);
        let shape = log_shape(&decl, &[AbiValue::uint(7), data.clone()])?;
        println!(
            "{:<46} topics={} data={:>5} B  log gas {}",
            format!("{variant:?} {}", decl.signature()),
            shape.topic_count,
            shape.data_byte_len,
            log_gas(shape, &schedule)
        );
    }
    for fork in Fork::ALL {
        println!("counter overhead on {fork}: {}", counter_overhead(fork));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

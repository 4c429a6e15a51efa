// Raw payload sent to an account versus to a contract whose fallback has
// to reject every known selector first.

use std::error::Error;

use gasledger::{ComponentKind, Estimator, Fork, PayloadTarget};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let est = Estimator::new(Fork::Berlin);
    for payload in [&b"hi"[..], b"a longer note that is not a function call"] {
        let eoa = est.tx_payload(payload, PayloadTarget::EoaToEoa)?;
        let sc = est.tx_payload(payload, PayloadTarget::EoaToContract)?;
        println!(
            "{:>3} bytes: to account {:>6}, to contract {:>6} (dispatch {})",
            payload.len(),
            eoa.gas_total,
            sc.gas_total,
            sc.gas_of(ComponentKind::Dispatch)
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

// Encodes a call, decodes it back and prices it as calldata.

use std::error::Error;

use gasledger::abi::{abi_decode, encode_call, intrinsic_gas, payload_stats, selector};
use gasledger::{schedule_for, AbiValue, Fork, FunctionSignature};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let sig: FunctionSignature = "store(uint256,string)".parse()?;
    let args = [AbiValue::uint(42), AbiValue::string("hello, chain")];
    let payload = encode_call(&sig, &args)?;
    println!("{sig} selector 0x{}", hex::encode(selector(&sig)));
    for word in payload[4..].chunks(32) {
        println!("  {}", hex::encode(word));
    }
    let decoded = abi_decode(&sig.params, &payload[4..])?;
    assert_eq!(decoded, args);
    let stats = payload_stats(&payload);
    println!(
        "{} bytes ({} zero, {} non-zero), intrinsic gas {}",
        payload.len(),
        stats.zero_bytes,
        stats.nonzero_bytes,
        intrinsic_gas(stats, &schedule_for(Fork::Berlin))
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

//! Byte-exact comparison against vectors produced by independent reference
//! implementations (see `fixtures/gen_oracle.py`).

use gasledger::abi::{abi_decode, abi_encode, selector};
use gasledger::content::{bmt_address, make_cid, CidVersion};
use gasledger::logs::EventParam;
use gasledger::{AbiType, AbiValue, EventDecl, FunctionSignature};
use serde_json::Value;

fn oracle() -> Value {
    serde_json::from_str(include_str!("fixtures/oracle.json")).unwrap()
}

fn vectors(key: &str) -> Vec<Value> {
    oracle()[key].as_array().unwrap_or_else(|| panic!("fixture `{key}` missing")).clone()
}

fn unhex(v: &Value) -> Vec<u8> {
    hex::decode(v.as_str().unwrap()).unwrap()
}

#[test]
fn function_selectors() {
    for v in vectors("selectors") {
        let sig: FunctionSignature = v["signature"].as_str().unwrap().parse().unwrap();
        assert_eq!(hex::encode(selector(&sig)), v["selector"].as_str().unwrap(), "{sig}");
    }
}

#[test]
fn event_topics() {
    for v in vectors("event_topics") {
        let text = v["signature"].as_str().unwrap();
        let sig: FunctionSignature = text.parse().unwrap();
        let params = sig.params.iter().map(|ty| EventParam { ty: *ty, indexed: false }).collect();
        let decl = EventDecl::new(sig.name.clone(), params, false);
        assert_eq!(decl.signature(), text);
        assert_eq!(hex::encode(decl.topic0().unwrap()), v["topic"].as_str().unwrap(), "{text}");
    }
}

#[test]
fn abi_encodings_round_trip() {
    for v in vectors("abi") {
        let types: Vec<AbiType> =
            v["types"].as_array().unwrap().iter().map(|t| t.as_str().unwrap().parse().unwrap()).collect();
        let values: Vec<AbiValue> = types
            .iter()
            .zip(v["values"].as_array().unwrap())
            .map(|(ty, raw)| AbiValue::from_json(*ty, raw).unwrap())
            .collect();
        let expected = unhex(&v["encoded"]);
        assert_eq!(hex::encode(abi_encode(&values)), hex::encode(&expected), "{types:?}");
        assert_eq!(abi_decode(&types, &expected).unwrap(), values, "{types:?}");
    }
}

#[test]
fn bmt_addresses() {
    let cases = vectors("bmt");
    assert!(cases.len() >= 5);
    for v in cases {
        let addr = bmt_address(&unhex(&v["chunk"]), v["span"].as_u64().unwrap()).unwrap();
        assert_eq!(hex::encode(addr.address), v["address"].as_str().unwrap(), "{}", v["name"]);
        assert_eq!(addr.len(), 32);
        assert_eq!(addr.with_synthetic_key().len(), 64);
    }
}

#[test]
fn cid_strings_and_bytes() {
    let cases = vectors("cid");
    assert!(cases.len() >= 5);
    for v in cases {
        let digest = unhex(&v["digest"]);
        let v0 = make_cid(&digest, CidVersion::V0).unwrap();
        let v1 = make_cid(&digest, CidVersion::V1).unwrap();
        assert_eq!(v0.to_text(), v["v0_text"].as_str().unwrap());
        assert_eq!(v1.to_text(), v["v1_text"].as_str().unwrap());
        assert_eq!(v0.to_bytes(), unhex(&v["v0_binary"]));
        assert_eq!(v1.to_bytes(), unhex(&v["v1_binary"]));
        assert!(v0.to_text().starts_with("Qm") && v0.to_text().len() == 46);
        assert!(v1.to_text().starts_with('b') && v1.to_text().len() == 59);
    }
}

use std::process::{Command, Output};

fn gasledger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gasledger")).args(args).env_remove("GASLEDGER_FORK").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn estimate_json() {
    let o = gasledger(&["estimate", "--method", "sc-store", "--size", "12kb", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["strategy"], "sc-store-clean");
    assert_eq!(v["fork"], "berlin");
    assert_eq!(v["exceeds_block_limit"], true);
}

#[test]
fn fork_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gasledger"))
        .args(["estimate", "--method", "sc-store", "--size", "12kb", "--format", "csv"])
        .env("GASLEDGER_FORK", "pre-berlin")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with("sc-store-clean,pre-berlin,12288,"));
    assert!(text.trim_end().ends_with(",false"));
}

#[test]
fn compare_csv_grid() {
    let o = gasledger(&["compare", "--strategies", "tx-payload-eoa-to-eoa,event-indexed", "--format", "csv", "--net"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 2 * 14);
    assert!(text.starts_with("strategy,fork,size_bytes,gas_total,refund,exceeds_block_limit,net_gas\n"));
}

#[test]
fn hybrid_table_mentions_identifier() {
    let o =
        gasledger(&["estimate", "--method", "hybrid", "--size", "64kb", "--platform", "ipfs-v1", "--anchor", "event"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("identifier 36 bytes"));
}

#[test]
fn encode_transfer() {
    let o = gasledger(&[
        "encode",
        "--signature",
        "transfer(address,uint256)",
        "--args",
        r#"["0x1111111111111111111111111111111111111111", 1]"#,
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["selector"], "0xa9059cbb");
    assert_eq!(v["length"], 68);
}

#[test]
fn chunk_ipfs_cid() {
    let o = gasledger(&["chunk", "--platform", "ipfs", "--size", "1mb", "--fill", "zero", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["chunk_count"], 4);
    assert_eq!(v["depth"], 2);
    assert!(v["root_text"].as_str().unwrap().starts_with("Qm"));
}

#[test]
fn exit_codes() {
    assert_eq!(gasledger(&["estimate", "--method", "sc-store"]).status.code(), Some(1));
    assert_eq!(gasledger(&["estimate", "--method", "sc-store", "--size", "1", "--input", "x"]).status.code(), Some(1));
    assert_eq!(
        gasledger(&["estimate", "--method", "sc-store", "--fork", "london", "--size", "1"]).status.code(),
        Some(1)
    );
    let missing = gasledger(&["estimate", "--method", "sc-store", "--input", "/nonexistent/payload.bin"]);
    assert_eq!(missing.status.code(), Some(2));
    let too_many = gasledger(&[
        "encode",
        "--signature",
        "f(bool,bool,bool,bool,bool,bool,bool,bool,bool,bool,bool,bool,bool,bool,bool,bool,bool)",
        "--args",
        "[]",
    ]);
    assert_eq!(too_many.status.code(), Some(3));
    assert_eq!(gasledger(&["--help"]).status.code(), Some(0));
}

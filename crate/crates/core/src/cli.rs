//! The `gasledger` command line.
//!
//! Exit codes: 0 ok, 1 usage, 2 I/O, 3 domain error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::abi::{self, AbiValue, FunctionSignature};
use crate::content::{build_tree, tree_cid, ChunkerConfig, CidVersion, Platform};
use crate::estimate::{AnchorStrategy, Estimate, Estimator, HybridPlatform, PayloadTarget, StrategyKind};
use crate::input::{parse_size, parse_sizes, synthesize_input, Fill};
use crate::layout::{layout_dynamic, SlotAddress};
use crate::logs::EventVariant;
use crate::report::{compare, write_csv_row, CSV_HEADER};
use crate::schedule::{schedule_for, Fork};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "gasledger", version, about = "Gas cost models for storing data on Ethereum")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate one storage strategy for one payload.
    Estimate(EstimateArgs),
    /// Estimate many strategies over a grid of sizes.
    Compare(CompareArgs),
    /// Show the storage slots a dynamic value occupies.
    Layout(LayoutArgs),
    /// ABI-encode a call and price it as transaction payload.
    Encode(EncodeArgs),
    /// Chunk data and compute its content identifier.
    Chunk(ChunkArgs),
    /// Print the gas schedule of a fork.
    Schedule(ScheduleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ForkArg {
    /// pre-berlin or berlin
    #[arg(long, env = "GASLEDGER_FORK", default_value = "berlin")]
    fork: Fork,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputSource {
    /// Synthetic payload size, e.g. 512, 12kb, 16mb
    #[arg(long, value_parser = parse_size)]
    size: Option<usize>,
    /// Read the payload from a file
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InputArgs {
    #[command(flatten)]
    source: InputSource,
    /// ascii, zero or random:SEED
    #[arg(long, default_value = "ascii")]
    fill: Fill,
}

impl InputArgs {
    fn load(&self) -> Result<Vec<u8>, CliError> {
        match (&self.source.size, &self.source.input) {
            (Some(size), _) => Ok(synthesize_input(*size, self.fill)),
            (None, Some(path)) => {
                std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
            }
            (None, None) => Err(CliError::Usage("one of --size or --input is required".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    ScStore,
    ScUpdate,
    ScGrow,
    Event,
    TxPayload,
    UnusedParam,
    Hybrid,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    fork: ForkArg,
    /// Event declaration: indexed, non-indexed, anonymous-indexed
    #[arg(long, default_value = "indexed")]
    variant: EventVariant,
    /// Payload recipient: eoa or contract
    #[arg(long, default_value = "eoa")]
    target: PayloadTarget,
    /// Size of the value being grown (default: half the new size)
    #[arg(long, value_parser = parse_size)]
    old_size: Option<usize>,
    /// Emit an id event from the unused-parameter function
    #[arg(long)]
    with_event: bool,
    /// Signature for unused-param, e.g. "store(uint256,string)"; needs --args
    #[arg(long, requires = "args")]
    signature: Option<FunctionSignature>,
    /// JSON array of arguments for --signature
    #[arg(long, requires = "signature")]
    args: Option<String>,
    /// swarm, swarm-encrypted, ipfs-v0, ipfs-v1
    #[arg(long, default_value = "swarm")]
    platform: HybridPlatform,
    /// storage or event
    #[arg(long, default_value = "storage")]
    anchor: AnchorStrategy,
    #[command(flatten)]
    common: CommonEstimateArgs,
}

#[derive(Debug, Args)]
struct CommonEstimateArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long, default_value_t = crate::schedule::DEFAULT_BLOCK_GAS_LIMIT)]
    block_gas_limit: u64,
    /// Flat gas added to every contract call for unitemized execution
    #[arg(long, default_value_t = 0)]
    execution_overhead: u64,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// A..B:N grid or comma-separated sizes
    #[arg(long, default_value = "1b..12kb:14", value_parser = parse_size_list)]
    sizes: SizeList,
    /// Comma-separated strategy names, or `all`
    #[arg(long, default_value = "all")]
    strategies: String,
    #[command(flatten)]
    fork: ForkArg,
    #[arg(long, default_value = "ascii")]
    fill: Fill,
    /// Append a refund-capped net gas column
    #[arg(long)]
    net: bool,
    /// Anchor used by the hybrid strategies: storage or event
    #[arg(long, default_value = "storage")]
    hybrid_anchor: AnchorStrategy,
    /// CID version anchored by hybrid-ipfs
    #[arg(long, default_value = "0")]
    hybrid_cid: CidVersion,
    #[command(flatten)]
    common: CommonEstimateArgs,
}

#[derive(Debug, Clone)]
struct SizeList(Vec<usize>);

fn parse_size_list(s: &str) -> Result<SizeList, crate::input::InputError> {
    parse_sizes(s).map(SizeList)
}

#[derive(Debug, Args)]
struct LayoutArgs {
    /// Base slot p, decimal or 0x-hex
    #[arg(long, default_value = "0")]
    slot: SlotAddress,
    /// Byte length of the value, e.g. 64 or 12kb
    #[arg(long, value_parser = parse_size)]
    length: usize,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    /// Canonical signature, e.g. "store(string)"
    #[arg(long)]
    signature: FunctionSignature,
    /// JSON array of arguments
    #[arg(long, default_value = "[]")]
    args: String,
    #[command(flatten)]
    fork: ForkArg,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct ChunkArgs {
    #[command(flatten)]
    input: InputArgs,
    /// swarm, swarm-encrypted or ipfs
    #[arg(long, default_value = "swarm")]
    platform: Platform,
    #[arg(long, default_value = "0")]
    cid_version: CidVersion,
    #[arg(long, value_parser = parse_size)]
    chunk_size: Option<usize>,
    #[arg(long)]
    fanout: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    #[command(flatten)]
    fork: ForkArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// writes its output. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(source) => {
                let _ = writeln!(err, "gasledger: <stdout>: {source}");
                EXIT_IO
            }
        },
        Err(e) => {
            let _ = writeln!(err, "gasledger: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Layout(args) => cmd_layout(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Chunk(args) => cmd_chunk(args),
        Command::Schedule(args) => cmd_schedule(args),
    }
}

fn estimator(fork: Fork, common: &CommonEstimateArgs) -> Estimator {
    Estimator::new(fork).with_block_gas_limit(common.block_gas_limit).with_execution_overhead(common.execution_overhead)
}

fn parse_json_args(sig: &FunctionSignature, raw: &str) -> Result<Vec<AbiValue>, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(raw).map_err(|e| CliError::Usage(format!("--args is not valid JSON: {e}")))?;
    let items = value.as_array().ok_or_else(|| CliError::Usage("--args must be a JSON array".into()))?;
    if items.len() > abi::MAX_PARAMS || sig.params.len() > abi::MAX_PARAMS {
        return Err(domain(abi::AbiError::TooManyParameters(items.len().max(sig.params.len()))));
    }
    if items.len() != sig.params.len() {
        return Err(domain(abi::AbiError::ArgumentCount { expected: sig.params.len(), got: items.len() }));
    }
    sig.params.iter().zip(items).map(|(ty, v)| AbiValue::from_json(*ty, v).map_err(domain)).collect()
}

fn cmd_estimate(args: EstimateArgs) -> Result<String, CliError> {
    let data = args.input.load()?;
    let est = estimator(args.fork.fork, &args.common);
    let estimate = match args.method {
        Method::ScStore => est.sc_store(&data),
        Method::ScUpdate => est.sc_update(&data),
        Method::ScGrow => est.sc_grow(args.old_size.unwrap_or(data.len() / 2), &data),
        Method::Event => est.event(args.variant, &data),
        Method::TxPayload => est.tx_payload(&data, args.target),
        Method::UnusedParam => match (&args.signature, &args.args) {
            (Some(sig), Some(raw)) => {
                let values = parse_json_args(sig, raw)?;
                abi::check_call(sig, &values).map_err(domain)?;
                est.unused_param(&values, args.with_event)
            }
            _ => est.unused_param(&[AbiValue::string(&data)], args.with_event).map(|mut e| {
                e.data_size = data.len();
                e
            }),
        },
        Method::Hybrid => est.hybrid(&data, args.platform, args.anchor),
    }
    .map_err(domain)?;
    Ok(render_estimate(&estimate, args.common.format))
}

fn render_estimate(e: &Estimate, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(e).expect("estimate serializes")),
        Format::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            write_csv_row(&mut out, e, false);
            out
        }
        Format::Table => {
            let mut out = format!("{} ({}, {} bytes)\n", e.strategy, e.fork, e.data_size);
            let width = e.breakdown.iter().map(|c| c.label.len()).max().unwrap_or(0).max(5);
            for c in &e.breakdown {
                let note = if c.modeled { "  (modeled)" } else { "" };
                let _ = writeln!(out, "  {:<width$} {:>12}{note}", c.label, c.gas);
            }
            let _ = writeln!(out, "  {:<width$} {:>12}", "total", e.gas_total);
            if e.refund > 0 {
                let _ = writeln!(out, "  {:<width$} {:>12}", "refund", e.refund);
            }
            if e.exceeds_block_limit {
                out.push_str("  exceeds block gas limit\n");
            }
            if let Some(off) = &e.offchain {
                let _ = writeln!(
                    out,
                    "  off-chain: {} chunks, {} nodes, depth {}, identifier {} bytes 0x{}",
                    off.chunk_count, off.node_count, off.depth, off.identifier_len, off.identifier_hex
                );
                let _ =
                    writeln!(out, "  nominal anchor gas (all identifier bytes non-zero): {}", off.nominal_anchor_gas);
            }
            out
        }
    }
}

fn cmd_compare(args: CompareArgs) -> Result<String, CliError> {
    let strategies: Vec<StrategyKind> = if args.strategies == "all" {
        StrategyKind::ALL.to_vec()
    } else {
        args.strategies.split(',').map(|s| s.trim().parse().map_err(CliError::Usage)).collect::<Result<_, _>>()?
    };
    let est = estimator(args.fork.fork, &args.common).with_hybrid_anchor(args.hybrid_anchor, args.hybrid_cid);
    let report = compare(&est, &args.sizes.0, &strategies, args.fill).map_err(domain)?;
    Ok(match args.common.format {
        Format::Csv => report.to_csv(args.net),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("json")),
        Format::Table => report.to_table(),
    })
}

fn render_pairs(pairs: &[(&str, String)], format: Format) -> String {
    match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                pairs.iter().map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone()))).collect();
            format!("{}\n", serde_json::to_string_pretty(&map).expect("json"))
        }
        Format::Csv => {
            let mut out = String::from("field,value\n");
            for (k, v) in pairs {
                let _ = writeln!(out, "{k},{v}");
            }
            out
        }
        Format::Table => {
            let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            pairs.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
        }
    }
}

fn cmd_layout(args: LayoutArgs) -> Result<String, CliError> {
    let plan = layout_dynamic(args.slot, args.length);
    Ok(match args.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "base_slot": plan.base_slot,
                "in_place": plan.in_place,
                "length_slot": plan.length_slot,
                "data_slots": plan.data_slots,
                "byte_length": plan.byte_length,
                "data_slot_count": plan.data_slots.len(),
                "touched_slot_count": plan.touched_count(),
            }))
            .expect("json")
        ),
        Format::Csv => {
            let mut out = String::from("role,index,slot\n");
            if let Some(len) = plan.length_slot {
                let role = if plan.in_place { "value+length" } else { "length" };
                let _ = writeln!(out, "{role},,{len}");
            }
            for (i, s) in plan.data_slots.iter().enumerate() {
                let _ = writeln!(out, "data,{i},{s}");
            }
            out
        }
        Format::Table => {
            let mut out = format!(
                "byte length {}: {} ({} data slots, {} touched)\n",
                plan.byte_length,
                if plan.in_place { "in place" } else { "hashed data region" },
                plan.data_slots.len(),
                plan.touched_count()
            );
            if let Some(len) = plan.length_slot {
                let _ = writeln!(out, "  {:<8} {len}", if plan.in_place { "value" } else { "length" });
            }
            for (i, s) in plan.data_slots.iter().enumerate() {
                let _ = writeln!(out, "  data[{i}] {s}");
            }
            out
        }
    })
}

fn cmd_encode(args: EncodeArgs) -> Result<String, CliError> {
    let values = parse_json_args(&args.signature, &args.args)?;
    let payload = abi::encode_call(&args.signature, &values).map_err(domain)?;
    let stats = abi::payload_stats(&payload);
    let gas = abi::intrinsic_gas(stats, &schedule_for(args.fork.fork));
    let pairs = [
        ("signature", args.signature.canonical()),
        ("selector", format!("0x{}", hex::encode(abi::selector(&args.signature)))),
        ("payload", format!("0x{}", hex::encode(&payload))),
        ("length", payload.len().to_string()),
        ("zero_bytes", stats.zero_bytes.to_string()),
        ("nonzero_bytes", stats.nonzero_bytes.to_string()),
        ("fork", args.fork.fork.to_string()),
        ("intrinsic_gas", gas.to_string()),
    ];
    if args.format == Format::Json {
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "signature": pairs[0].1,
                "selector": pairs[1].1,
                "payload": pairs[2].1,
                "length": payload.len(),
                "zero_bytes": stats.zero_bytes,
                "nonzero_bytes": stats.nonzero_bytes,
                "fork": args.fork.fork,
                "intrinsic_gas": gas,
            }))
            .expect("json")
        ));
    }
    Ok(render_pairs(&pairs, args.format))
}

fn cmd_chunk(args: ChunkArgs) -> Result<String, CliError> {
    let data = args.input.load()?;
    let defaults = ChunkerConfig::default_for(args.platform);
    let cfg = ChunkerConfig {
        chunk_size: args.chunk_size.unwrap_or(defaults.chunk_size),
        fanout: args.fanout.unwrap_or(defaults.fanout),
    };
    let tree = build_tree(&data, args.platform, &cfg).map_err(domain)?;
    let id = crate::content::identifier_bytes(&tree, args.cid_version).map_err(domain)?;
    let text = match args.platform {
        Platform::Ipfs => tree_cid(&tree, args.cid_version).map_err(domain)?.to_text(),
        _ => hex::encode(&id),
    };
    if args.format == Format::Json {
        return Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "platform": tree.platform,
                "data_len": tree.data_len,
                "chunk_size": cfg.chunk_size,
                "fanout": cfg.fanout,
                "chunk_count": tree.chunk_count,
                "node_count": tree.node_count,
                "depth": tree.depth,
                "root_hex": hex::encode(&id),
                "root_text": text,
                "identifier_len": id.len(),
            }))
            .expect("json")
        ));
    }
    let pairs = [
        ("platform", format!("{:?}", tree.platform).to_lowercase()),
        ("data_len", tree.data_len.to_string()),
        ("chunk_size", cfg.chunk_size.to_string()),
        ("fanout", cfg.fanout.to_string()),
        ("chunk_count", tree.chunk_count.to_string()),
        ("node_count", tree.node_count.to_string()),
        ("depth", tree.depth.to_string()),
        ("root_hex", hex::encode(&id)),
        ("root_text", text),
        ("identifier_len", id.len().to_string()),
    ];
    Ok(render_pairs(&pairs, args.format))
}

fn cmd_schedule(args: ScheduleArgs) -> Result<String, CliError> {
    let map = schedule_for(args.fork.fork).to_map();
    Ok(match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&map).expect("json")),
        _ => {
            let pairs: Vec<(&str, String)> = map.iter().map(|(k, v)| (*k, v.to_string())).collect();
            render_pairs(&pairs, args.format)
        }
    })
}

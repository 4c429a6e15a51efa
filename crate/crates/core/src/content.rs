//! Content addressing for the off-chain half of hybrid storage.
//!
//! Swarm chunks are addressed with a keccak256 binary Merkle tree over 128
//! 32-byte segments, prefixed by the little-endian span. IPFS-style trees
//! hash raw chunk bytes with sha2-256 and expose the root digest as a CID.
//! Both group child identifiers `fanout` at a time until one root remains.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::hash::{keccak256, keccak256_concat, sha256};

pub const SWARM_CHUNK_SIZE: usize = 4096;
pub const SWARM_FANOUT: usize = 128;
pub const IPFS_CHUNK_SIZE: usize = 256 * 1024;
pub const IPFS_FANOUT: usize = 174;

const SEGMENT: usize = 32;
const SWARM_REF: usize = 32;

/// multicodec / multihash codes used in CIDs.
pub const CODEC_DAG_PB: u64 = 0x70;
pub const CODEC_RAW: u64 = 0x55;
pub const HASH_SHA2_256: u64 = 0x12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContentError {
    #[error("chunk of {0} bytes exceeds the {SWARM_CHUNK_SIZE}-byte BMT capacity")]
    ChunkTooLarge(usize),
    #[error("digest must be 32 bytes, got {0}")]
    BadDigestLength(usize),
    #[error("invalid chunker config: {0}")]
    InvalidConfig(String),
    #[error("tree was built for {built:?}, not {requested:?}")]
    PlatformMismatch { built: Platform, requested: Platform },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Platform {
    Swarm,
    SwarmEncrypted,
    Ipfs,
}

impl std::str::FromStr for Platform {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "swarm" => Ok(Platform::Swarm),
            "swarm-encrypted" => Ok(Platform::SwarmEncrypted),
            "ipfs" => Ok(Platform::Ipfs),
            other => Err(format!("unknown platform `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChunkerConfig {
    pub chunk_size: usize,
    pub fanout: usize,
}

impl ChunkerConfig {
    pub const fn swarm() -> Self {
        ChunkerConfig { chunk_size: SWARM_CHUNK_SIZE, fanout: SWARM_FANOUT }
    }

    pub const fn ipfs() -> Self {
        ChunkerConfig { chunk_size: IPFS_CHUNK_SIZE, fanout: IPFS_FANOUT }
    }

    pub fn default_for(platform: Platform) -> Self {
        match platform {
            Platform::Swarm | Platform::SwarmEncrypted => Self::swarm(),
            Platform::Ipfs => Self::ipfs(),
        }
    }

    pub fn validate(&self, platform: Platform) -> Result<(), ContentError> {
        if self.chunk_size == 0 {
            return Err(ContentError::InvalidConfig("chunk_size must be at least 1".into()));
        }
        if self.fanout < 2 {
            return Err(ContentError::InvalidConfig("fanout must be at least 2".into()));
        }
        if platform != Platform::Ipfs {
            if self.chunk_size > SWARM_CHUNK_SIZE {
                return Err(ContentError::ChunkTooLarge(self.chunk_size));
            }
            if self.fanout * SWARM_REF > SWARM_CHUNK_SIZE {
                return Err(ContentError::InvalidConfig(format!(
                    "swarm intermediate chunks hold at most {} references",
                    SWARM_CHUNK_SIZE / SWARM_REF
                )));
            }
        }
        Ok(())
    }
}

/// Splits `data` into `chunk_size` pieces. Empty input yields one empty chunk.
pub fn split<'a>(data: &'a [u8], cfg: &ChunkerConfig) -> Vec<&'a [u8]> {
    if data.is_empty() {
        return vec![data];
    }
    data.chunks(cfg.chunk_size.max(1)).collect()
}

/// Root of the binary Merkle tree over a zero-padded 4096-byte chunk.
pub fn bmt_root(chunk: &[u8]) -> Result<[u8; 32], ContentError> {
    if chunk.len() > SWARM_CHUNK_SIZE {
        return Err(ContentError::ChunkTooLarge(chunk.len()));
    }
    let mut level: Vec<[u8; 32]> = (0..SWARM_CHUNK_SIZE / SEGMENT)
        .map(|i| {
            let mut seg = [0u8; SEGMENT];
            let start = (i * SEGMENT).min(chunk.len());
            let end = ((i + 1) * SEGMENT).min(chunk.len());
            seg[..end - start].copy_from_slice(&chunk[start..end]);
            seg
        })
        .collect();
    while level.len() > 1 {
        level = level.chunks(2).map(|pair| keccak256_concat(&[&pair[0], &pair[1]])).collect();
    }
    Ok(level[0])
}

/// A Swarm reference: the chunk address, plus a decryption key when encrypted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwarmAddress {
    pub address: [u8; 32],
    pub key: Option<[u8; 32]>,
}

impl SwarmAddress {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.address.to_vec();
        if let Some(key) = self.key {
            out.extend_from_slice(&key);
        }
        out
    }

    pub fn len(&self) -> usize {
        if self.key.is_some() {
            64
        } else {
            32
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Extends a plain reference with a placeholder key derived from the address.
    ///
    /// Nothing is encrypted; the key only models the reference length.
    pub fn with_synthetic_key(self) -> Self {
        SwarmAddress { key: Some(keccak256(&self.address)), ..self }
    }
}

impl fmt::Display for SwarmAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.to_bytes()))
    }
}

/// `keccak256(span_le64 ‖ bmt_root(chunk))`.
pub fn bmt_address(chunk: &[u8], span: u64) -> Result<SwarmAddress, ContentError> {
    let root = bmt_root(chunk)?;
    Ok(SwarmAddress { address: keccak256_concat(&[&span.to_le_bytes(), &root]), key: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CidVersion {
    V0,
    V1,
}

impl std::str::FromStr for CidVersion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim_start_matches(['v', 'V']) {
            "0" => Ok(CidVersion::V0),
            "1" => Ok(CidVersion::V1),
            other => Err(format!("unknown CID version `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cid {
    pub version: CidVersion,
    pub codec: u64,
    pub hash_fn: u64,
    pub digest: [u8; 32],
}

/// CIDv0 (dag-pb, base58btc) or CIDv1 (raw leaves, base32) over a sha2-256 digest.
pub fn make_cid(digest: &[u8], version: CidVersion) -> Result<Cid, ContentError> {
    let digest: [u8; 32] = digest.try_into().map_err(|_| ContentError::BadDigestLength(digest.len()))?;
    let codec = match version {
        CidVersion::V0 => CODEC_DAG_PB,
        CidVersion::V1 => CODEC_RAW,
    };
    Ok(Cid { version, codec, hash_fn: HASH_SHA2_256, digest })
}

impl Cid {
    fn multihash(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(34);
        // every code and length used here is below 0x80, so each varint is one byte
        out.push(self.hash_fn as u8);
        out.push(self.digest.len() as u8);
        out.extend_from_slice(&self.digest);
        out
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        match self.version {
            CidVersion::V0 => self.multihash(),
            CidVersion::V1 => {
                let mut out = vec![0x01, self.codec as u8];
                out.extend(self.multihash());
                out
            }
        }
    }

    pub fn to_text(&self) -> String {
        match self.version {
            CidVersion::V0 => bs58::encode(self.multihash()).into_string(),
            CidVersion::V1 => {
                let b32 = data_encoding::BASE32_NOPAD.encode(&self.to_bytes()).to_ascii_lowercase();
                format!("b{b32}")
            }
        }
    }
}

impl fmt::Display for Cid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Counts of a content tree, independent of the hashes inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeShape {
    pub chunk_count: usize,
    pub node_count: usize,
    pub depth: usize,
}

/// Shape of the tree `build_tree` produces for `data_len` bytes.
pub fn tree_shape(data_len: usize, cfg: &ChunkerConfig) -> TreeShape {
    let chunk_count = data_len.div_ceil(cfg.chunk_size.max(1)).max(1);
    let mut level = chunk_count;
    let mut node_count = level;
    let mut depth = 1;
    while level > 1 {
        level = level.div_ceil(cfg.fanout);
        node_count += level;
        depth += 1;
    }
    TreeShape { chunk_count, node_count, depth }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChunkTree {
    pub platform: Platform,
    /// Swarm reference bytes (32 or 64), or the sha2-256 root digest for IPFS.
    #[serde(serialize_with = "hex_bytes")]
    pub root_id: Vec<u8>,
    pub chunk_count: usize,
    pub node_count: usize,
    pub depth: usize,
    pub data_len: usize,
}

fn hex_bytes<S: serde::Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&hex::encode(bytes))
}

impl ChunkTree {
    pub fn shape(&self) -> TreeShape {
        TreeShape { chunk_count: self.chunk_count, node_count: self.node_count, depth: self.depth }
    }
}

fn swarm_root(data: &[u8], cfg: &ChunkerConfig) -> Result<(SwarmAddress, TreeShape), ContentError> {
    let mut level: Vec<(SwarmAddress, u64)> = split(data, cfg)
        .into_iter()
        .map(|c| bmt_address(c, c.len() as u64).map(|a| (a, c.len() as u64)))
        .collect::<Result<_, _>>()?;
    let chunk_count = level.len();
    let mut node_count = level.len();
    let mut depth = 1;
    while level.len() > 1 {
        level = level
            .chunks(cfg.fanout)
            .map(|group| {
                let span: u64 = group.iter().map(|(_, s)| s).sum();
                let refs: Vec<u8> = group.iter().flat_map(|(a, _)| a.address).collect();
                bmt_address(&refs, span).map(|a| (a, span))
            })
            .collect::<Result<_, _>>()?;
        node_count += level.len();
        depth += 1;
    }
    Ok((level[0].0, TreeShape { chunk_count, node_count, depth }))
}

fn ipfs_root(data: &[u8], cfg: &ChunkerConfig) -> ([u8; 32], TreeShape) {
    let mut level: Vec<[u8; 32]> = split(data, cfg).into_iter().map(sha256).collect();
    let chunk_count = level.len();
    let mut node_count = level.len();
    let mut depth = 1;
    while level.len() > 1 {
        level = level
            .chunks(cfg.fanout)
            .map(|group| {
                let links: Vec<u8> =
                    group.iter().flat_map(|d| [HASH_SHA2_256 as u8, 32].into_iter().chain(d.iter().copied())).collect();
                sha256(&links)
            })
            .collect();
        node_count += level.len();
        depth += 1;
    }
    (level[0], TreeShape { chunk_count, node_count, depth })
}

pub fn build_tree(data: &[u8], platform: Platform, cfg: &ChunkerConfig) -> Result<ChunkTree, ContentError> {
    cfg.validate(platform)?;
    let (root_id, shape) = match platform {
        Platform::Swarm => {
            let (root, shape) = swarm_root(data, cfg)?;
            (root.to_bytes(), shape)
        }
        Platform::SwarmEncrypted => {
            let (root, shape) = swarm_root(data, cfg)?;
            (root.with_synthetic_key().to_bytes(), shape)
        }
        Platform::Ipfs => {
            let (root, shape) = ipfs_root(data, cfg);
            (root.to_vec(), shape)
        }
    };
    Ok(ChunkTree {
        platform,
        root_id,
        chunk_count: shape.chunk_count,
        node_count: shape.node_count,
        depth: shape.depth,
        data_len: data.len(),
    })
}

/// Root CID of an IPFS tree.
pub fn tree_cid(tree: &ChunkTree, version: CidVersion) -> Result<Cid, ContentError> {
    if tree.platform != Platform::Ipfs {
        return Err(ContentError::PlatformMismatch { built: tree.platform, requested: Platform::Ipfs });
    }
    make_cid(&tree.root_id, version)
}

/// The bytes a contract would store to anchor `tree`: the Swarm reference, or
/// the binary CID for IPFS (`cid_version` is ignored for Swarm trees).
pub fn identifier_bytes(tree: &ChunkTree, cid_version: CidVersion) -> Result<Vec<u8>, ContentError> {
    match tree.platform {
        Platform::Swarm | Platform::SwarmEncrypted => Ok(tree.root_id.clone()),
        Platform::Ipfs => Ok(tree_cid(tree, cid_version)?.to_bytes()),
    }
}

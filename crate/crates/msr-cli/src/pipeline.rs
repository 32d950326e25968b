//! Shard-level plumbing between raw bytes and containers.
//!
//! A file is padded with zero bytes to a whole number of shards of
//! k·N symbols; each shard is encoded independently (one byte maps to
//! one symbol, which is why byte-mode fields are primes of at least
//! 257). Shards fan out across threads; output ordering is fixed by the
//! shard index.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rayon::prelude::*;

use msr_core::codec::{Encoder, Reconstructor};
use msr_core::{Code, Codeword, Vector};

use crate::container::{Container, Header};

/// Separates parameter/property failures from corrupt container content,
/// so the CLI can exit with the right code.
#[derive(Debug)]
pub enum PipelineError {
    Core(msr_core::Error),
    Corrupt(String),
}

impl From<msr_core::Error> for PipelineError {
    fn from(e: msr_core::Error) -> Self {
        PipelineError::Core(e)
    }
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PipelineError::Core(e) => write!(f, "{e}"),
            PipelineError::Corrupt(m) => write!(f, "{m}"),
        }
    }
}

type Result<T> = std::result::Result<T, PipelineError>;

/// Encodes a byte stream into the node-major symbol payload.
pub fn encode_bytes(code: &dyn Code, header: Header, data: &[u8]) -> Result<Container> {
    let f = code.field();
    let (n, k, n_sub) = (
        code.node_count(),
        code.data_node_count(),
        code.sub_packetization(),
    );
    let shard_bytes = k * n_sub;
    let shards = data.len().div_ceil(shard_bytes);
    assert_eq!(header.shards as usize, shards, "header shard count");

    let encoder = Encoder::new(code)?;
    let shard_outputs: std::result::Result<Vec<Vec<u16>>, msr_core::Error> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut vectors = Vec::with_capacity(k);
            for i in 0..k {
                let mut vals = vec![0u64; n_sub];
                for (j, slot) in vals.iter_mut().enumerate() {
                    let idx = s * shard_bytes + i * n_sub + j;
                    if idx < data.len() {
                        *slot = data[idx] as u64;
                    }
                }
                vectors.push(Vector::from_values(f.clone(), &vals));
            }
            let cw = encoder.encode(&vectors)?;
            let mut flat = Vec::with_capacity(n * n_sub);
            for node in cw.nodes() {
                flat.extend(node.as_slice().iter().map(|e| e.value()));
            }
            Ok(flat)
        })
        .collect();
    let shard_outputs = shard_outputs?;

    // transpose shard-major results into the node-major payload
    let per_node = n_sub * shards;
    let mut symbols = vec![0u16; n * per_node];
    for (s, flat) in shard_outputs.iter().enumerate() {
        for node in 0..n {
            let src = &flat[node * n_sub..(node + 1) * n_sub];
            let dst = node * per_node + s * n_sub;
            symbols[dst..dst + n_sub].copy_from_slice(src);
        }
    }
    Ok(Container::new(header, symbols))
}

fn shard_codeword(code: &dyn Code, container: &Container, shard: usize) -> Codeword {
    let f = code.field();
    let nodes = (0..code.node_count())
        .map(|i| {
            let vals: Vec<u64> = container
                .node_shard(i, shard)
                .iter()
                .map(|&v| v as u64)
                .collect();
            Vector::from_values(f.clone(), &vals)
        })
        .collect();
    Codeword::new(f.clone(), nodes)
}

/// Rebuilds the original bytes from the given nodes of a container.
pub fn decode_bytes(
    code: &dyn Code,
    container: &Container,
    available: &BTreeSet<usize>,
) -> Result<Vec<u8>> {
    let (k, n_sub) = (code.data_node_count(), code.sub_packetization());
    let shards = container.header.shards as usize;
    let shard_bytes = k * n_sub;

    let reconstructor = Reconstructor::new(code, available)?;
    let decoded: std::result::Result<Vec<Vec<u8>>, PipelineError> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let nodes: BTreeMap<usize, Vector> = available
                .iter()
                .map(|&i| {
                    let vals: Vec<u64> = container
                        .node_shard(i, s)
                        .iter()
                        .map(|&v| v as u64)
                        .collect();
                    (i, Vector::from_values(code.field().clone(), &vals))
                })
                .collect();
            let cw = reconstructor.reconstruct(&nodes)?;
            let mut bytes = Vec::with_capacity(shard_bytes);
            for i in 0..k {
                for &sym in cw.node(i).as_slice() {
                    let v = sym.value();
                    if v > 0xff {
                        return Err(PipelineError::Corrupt(format!(
                            "shard {s}: recovered symbol {v} is not a byte"
                        )));
                    }
                    bytes.push(v as u8);
                }
            }
            Ok(bytes)
        })
        .collect();
    let decoded = decoded?;

    let mut out: Vec<u8> = decoded.into_iter().flatten().collect();
    if out.len() < container.header.original_len as usize {
        return Err(PipelineError::Corrupt(
            "container shorter than its recorded length".into(),
        ));
    }
    out.truncate(container.header.original_len as usize);
    Ok(out)
}

/// Aggregate bandwidth accounting for a whole-container repair.
pub struct RepairSummary {
    pub failed: usize,
    pub helpers: Vec<usize>,
    pub shards: usize,
    /// Symbols downloaded per helper in one shard.
    pub downloads_per_shard: BTreeMap<usize, usize>,
    /// Symbols downloaded in one shard.
    pub bandwidth_per_shard: usize,
    /// Cut-set bound per shard.
    pub optimal_per_shard: usize,
    pub epsilon: Ratio<u64>,
    /// True when every recovered shard matched the stored content.
    pub matches_stored: bool,
}

impl RepairSummary {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(
            self.bandwidth_per_shard as u64,
            self.optimal_per_shard as u64,
        )
    }
}

/// Recomputes one node for every shard and swaps it into the container.
pub fn repair_container(
    code: &dyn Code,
    container: &mut Container,
    failed: usize,
    helpers: &[usize],
) -> Result<RepairSummary> {
    let shards = container.header.shards as usize;

    // validate the helper set once, independent of shard count
    let probe = code.repair(&Codeword::zero(code), failed, helpers)?;

    let snapshot = &*container;
    let results: std::result::Result<Vec<(Vec<u16>, bool)>, msr_core::Error> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let cw = shard_codeword(code, snapshot, s);
            let report = code.repair(&cw, failed, helpers)?;
            let recovered: Vec<u16> = report
                .recovered
                .as_slice()
                .iter()
                .map(|e| e.value())
                .collect();
            let matches = recovered == snapshot.node_shard(failed, s);
            Ok((recovered, matches))
        })
        .collect();
    let results = results?;

    let mut matches_stored = true;
    for (s, (recovered, matched)) in results.iter().enumerate() {
        matches_stored &= matched;
        container.set_node_shard(failed, s, recovered);
    }

    Ok(RepairSummary {
        failed,
        helpers: probe.helpers,
        shards,
        downloads_per_shard: probe.downloads,
        bandwidth_per_shard: probe.bandwidth,
        optimal_per_shard: probe.optimal,
        epsilon: probe.epsilon,
        matches_stored,
    })
}

/// Parity residual of every shard; returns the indices of invalid shards.
pub fn invalid_shards(code: &dyn Code, container: &Container) -> Result<Vec<usize>> {
    let shards = container.header.shards as usize;
    let bad: std::result::Result<Vec<Option<usize>>, msr_core::Error> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let cw = shard_codeword(code, container, s);
            let residual = msr_core::codec::parity_residual(code, &cw)?;
            Ok((!residual.is_zero()).then_some(s))
        })
        .collect();
    Ok(bad?.into_iter().flatten().collect())
}

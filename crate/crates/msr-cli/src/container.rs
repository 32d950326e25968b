//! The on-disk container: a fixed little-endian header followed by the
//! node payloads.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! offset size  field
//! 0      4     magic "MSRC"
//! 4      1     version (1)
//! 5      1     construction flag (1 = c1, 2 = c2)
//! 6      2     p   field characteristic
//! 8      1     e   extension degree (q = p^e)
//! 9      2     n   node count (for c2: s * n')
//! 11     2     k   data node count
//! 13     2     d   repair degree
//! 15     2     s   replication factor (1 for c1)
//! 17     8     original byte length
//! 25     4     shard count
//! 29     ...   n payloads of N * shard_count symbols, node-major,
//!              each symbol one 16-bit integer
//! ```
//!
//! The header is self-consistent: N is recomputed from (n, k, d, s), and
//! a flag-1 container with odd n denotes a shortened code. Symbols are
//! always serialized as 16 bits regardless of q.

use std::path::Path;

use msr_core::code::{CodeParams, CodeRegistry};
use msr_core::Code;

pub const MAGIC: &[u8; 4] = b"MSRC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 29;

pub const FLAG_C1: u8 = 1;
pub const FLAG_C2: u8 = 2;

/// Anything that stops a container from being read or trusted.
#[derive(Debug)]
pub struct ContainerError(pub String);

impl std::fmt::Display for ContainerError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ContainerError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ContainerError> {
    Err(ContainerError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub construction: u8,
    pub p: u16,
    pub e: u8,
    pub n: u16,
    pub k: u16,
    pub d: u16,
    pub s: u16,
    pub original_len: u64,
    pub shards: u32,
}

impl Header {
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e as u32)
    }

    /// Recomputes N = w^m from the stored parameters.
    pub fn sub_packetization(&self) -> Result<usize, ContainerError> {
        let (n, k, d, s) = (
            self.n as usize,
            self.k as usize,
            self.d as usize,
            self.s as usize,
        );
        if k == 0 || d <= k || d >= n {
            return err(format!("inconsistent parameters n={n} k={k} d={d}"));
        }
        let w = d - k + 1;
        let m = match self.construction {
            FLAG_C1 => n.div_ceil(2), // odd n means a shortened code over n+1 nodes
            FLAG_C2 => {
                if s == 0 || n % s != 0 {
                    return err(format!("replication {s} does not divide n={n}"));
                }
                let n_base = n / s;
                if n_base % 2 != 0 {
                    return err(format!("base length {n_base} must be even"));
                }
                if d != n - 1 {
                    return err("flag-2 containers require d = n-1".to_string());
                }
                n_base / 2
            }
            f => return err(format!("unknown construction flag {f}")),
        };
        w.checked_pow(m as u32)
            .ok_or_else(|| ContainerError("sub-packetization overflow".into()))
    }

    /// Registry parameters equivalent to this header.
    pub fn code_params(&self) -> Result<(&'static str, CodeParams), ContainerError> {
        let (n, k, d, s) = (
            self.n as usize,
            self.k as usize,
            self.d as usize,
            self.s as usize,
        );
        self.sub_packetization()?; // runs the consistency checks
        match self.construction {
            FLAG_C1 => {
                if s != 1 {
                    return err(format!("flag-1 containers require s = 1, got {s}"));
                }
                let name = if n % 2 == 0 { "c1" } else { "c1-shortened" };
                Ok((name, CodeParams::new(n, k, d).with_q(self.q())))
            }
            FLAG_C2 => {
                let n_base = n / s;
                let r = n - k;
                if r >= n_base {
                    return err(format!("inconsistent parameters: r={r} >= n'={n_base}"));
                }
                let k_base = n_base - r;
                Ok((
                    "c2",
                    CodeParams::new(n_base, k_base, n_base - 1)
                        .with_s(s)
                        .with_q(self.q()),
                ))
            }
            f => err(format!("unknown construction flag {f}")),
        }
    }

    pub fn build_code(&self, registry: &CodeRegistry) -> Result<Box<dyn Code>, ContainerError> {
        let (name, params) = self.code_params()?;
        registry
            .build(name, &params)
            .map_err(|e| ContainerError(format!("header does not describe a valid code: {e}")))
    }
}

/// A parsed container: header plus the node-major symbol payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub header: Header,
    /// n * N * shards symbols, node-major: node i occupies the i-th run
    /// of N * shards symbols, shard-major within the run.
    pub symbols: Vec<u16>,
}

impl Container {
    pub fn new(header: Header, symbols: Vec<u16>) -> Self {
        Container { header, symbols }
    }

    /// The N symbols of one node in one shard.
    pub fn node_shard(&self, node: usize, shard: usize) -> &[u16] {
        let n_sub = self
            .header
            .sub_packetization()
            .expect("validated at construction");
        let per_node = n_sub * self.header.shards as usize;
        let start = node * per_node + shard * n_sub;
        &self.symbols[start..start + n_sub]
    }

    pub fn set_node_shard(&mut self, node: usize, shard: usize, values: &[u16]) {
        let n_sub = self
            .header
            .sub_packetization()
            .expect("validated at construction");
        let per_node = n_sub * self.header.shards as usize;
        let start = node * per_node + shard * n_sub;
        self.symbols[start..start + n_sub].copy_from_slice(values);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(HEADER_LEN + 2 * self.symbols.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(h.construction);
        out.extend_from_slice(&h.p.to_le_bytes());
        out.push(h.e);
        out.extend_from_slice(&h.n.to_le_bytes());
        out.extend_from_slice(&h.k.to_le_bytes());
        out.extend_from_slice(&h.d.to_le_bytes());
        out.extend_from_slice(&h.s.to_le_bytes());
        out.extend_from_slice(&h.original_len.to_le_bytes());
        out.extend_from_slice(&h.shards.to_le_bytes());
        for &sym in &self.symbols {
            out.extend_from_slice(&sym.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ContainerError> {
        if bytes.len() < HEADER_LEN {
            return err("truncated header");
        }
        if &bytes[0..4] != MAGIC {
            return err("bad magic");
        }
        if bytes[4] != VERSION {
            return err(format!("unsupported version {}", bytes[4]));
        }
        let u16_at = |o: usize| u16::from_le_bytes([bytes[o], bytes[o + 1]]);
        let header = Header {
            construction: bytes[5],
            p: u16_at(6),
            e: bytes[8],
            n: u16_at(9),
            k: u16_at(11),
            d: u16_at(13),
            s: u16_at(15),
            original_len: u64::from_le_bytes(bytes[17..25].try_into().unwrap()),
            shards: u32::from_le_bytes(bytes[25..29].try_into().unwrap()),
        };
        let n_sub = header.sub_packetization()?;
        let expected = header.n as usize * n_sub * header.shards as usize;
        let body = &bytes[HEADER_LEN..];
        if body.len() != 2 * expected {
            return err(format!(
                "payload is {} bytes, header implies {}",
                body.len(),
                2 * expected
            ));
        }
        let q = header.q();
        let mut symbols = Vec::with_capacity(expected);
        for pair in body.chunks_exact(2) {
            let sym = u16::from_le_bytes([pair[0], pair[1]]);
            if sym as u64 >= q {
                return err(format!("symbol {sym} outside GF({q})"));
            }
            symbols.push(sym);
        }
        Ok(Container { header, symbols })
    }

    pub fn write_to(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_bytes())
    }

    pub fn read_from(path: &Path) -> Result<Self, ContainerLoadError> {
        let bytes = std::fs::read(path).map_err(ContainerLoadError::Io)?;
        Self::from_bytes(&bytes).map_err(ContainerLoadError::Malformed)
    }
}

/// Distinguishes I/O failures (exit 3) from corrupt contents (exit 4).
#[derive(Debug)]
pub enum ContainerLoadError {
    Io(std::io::Error),
    Malformed(ContainerError),
}

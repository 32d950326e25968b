//! The common surface every code construction sits behind, and the
//! name-keyed registry the CLI dispatches on.
//!
//! A construction only has to say what its parity-check blocks are and
//! how it repairs one node; encoding, any-k reconstruction, residual
//! checks, and MDS verification are generic over the trait ([`crate::codec`]).

use std::sync::Arc;

use num_rational::Ratio;

use crate::codec::{Codeword, RepairReport};
use crate::gf::FieldSpec;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// An (n, k) MDS array code in block parity-check form.
///
/// Implementations are immutable after construction and safe to share
/// across threads.
pub trait Code: Send + Sync {
    /// Short, stable identifier ("c1", "c2", ...), also used by the CLI.
    fn name(&self) -> &'static str;

    fn field(&self) -> &Arc<FieldSpec>;

    /// Total number of nodes n.
    fn node_count(&self) -> usize;

    /// Number of data nodes k (nodes 0..k hold data verbatim).
    fn data_node_count(&self) -> usize;

    /// Number of helpers contacted to repair one node.
    fn repair_degree(&self) -> usize;

    /// Symbols stored per node (N).
    fn sub_packetization(&self) -> usize;

    fn parity_node_count(&self) -> usize {
        self.node_count() - self.data_node_count()
    }

    /// The N x N block of the parity-check matrix at group t, node i.
    fn parity_block(&self, t: usize, i: usize) -> Matrix;

    /// Recovers node `failed` from the helpers' downloads.
    ///
    /// `helpers` must name exactly `repair_degree()` distinct surviving
    /// nodes; constructions with d = n-1 accept only the full survivor
    /// set. Only the helper columns of `codeword` are read.
    fn repair(&self, codeword: &Codeword, failed: usize, helpers: &[usize])
        -> Result<RepairReport>;

    /// Cut-set lower bound d·N/(d-k+1) on single-node repair bandwidth.
    fn optimal_repair_bandwidth(&self) -> usize {
        let d = self.repair_degree();
        let w = d - self.data_node_count() + 1;
        debug_assert_eq!(self.sub_packetization() % w, 0);
        d * self.sub_packetization() / w
    }

    /// Guaranteed repair overhead: actual bandwidth = (1 + epsilon) * optimal.
    fn epsilon(&self) -> Ratio<u64> {
        Ratio::from_integer(0)
    }
}

/// Runtime parameters a construction is built from.
///
/// For "c1" these are the code's own (n, k, d) and `s` must be 1. For
/// "c2" they are the base code's (n', k', d' = n'-1) plus the replication
/// factor `s`; the resulting code has s·n' nodes. `q` overrides the
/// automatically selected field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub s: usize,
    pub q: Option<u64>,
}

impl CodeParams {
    pub fn new(n: usize, k: usize, d: usize) -> Self {
        CodeParams {
            n,
            k,
            d,
            s: 1,
            q: None,
        }
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = s;
        self
    }

    pub fn with_q(mut self, q: u64) -> Self {
        self.q = Some(q);
        self
    }
}

type BuilderFn = fn(&CodeParams) -> Result<Box<dyn Code>>;

/// Name-keyed registry of code constructions.
///
/// Ships with the built-in families and accepts external registrations;
/// lookup is linear, registration order is preserved for listings.
pub struct CodeRegistry {
    entries: Vec<(&'static str, BuilderFn)>,
}

fn build_c1(p: &CodeParams) -> Result<Box<dyn Code>> {
    if p.s != 1 {
        return Err(Error::BadReplication(p.s));
    }
    Ok(Box::new(crate::c1::C1Code::new(p.n, p.k, p.d, p.q)?))
}

fn build_c1_shortened(p: &CodeParams) -> Result<Box<dyn Code>> {
    if p.s != 1 {
        return Err(Error::BadReplication(p.s));
    }
    let base = crate::c1::C1Code::new(p.n + 1, p.k + 1, p.d + 1, p.q)?;
    Ok(Box::new(crate::codec::shorten(base)))
}

fn build_c2(p: &CodeParams) -> Result<Box<dyn Code>> {
    Ok(Box::new(crate::c2::C2Code::new(p.n, p.k, p.s, p.q)?))
}

impl CodeRegistry {
    /// Registry with the built-in constructions: "c1", "c1-shortened", "c2".
    pub fn builtin() -> Self {
        CodeRegistry {
            entries: vec![
                ("c1", build_c1 as BuilderFn),
                ("c1-shortened", build_c1_shortened as BuilderFn),
                ("c2", build_c2 as BuilderFn),
            ],
        }
    }

    pub fn register(&mut self, name: &'static str, builder: BuilderFn) {
        self.entries.retain(|(n, _)| *n != name);
        self.entries.push((name, builder));
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn build(&self, name: &str, params: &CodeParams) -> Result<Box<dyn Code>> {
        let (_, builder) = self
            .entries
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownConstruction(name.to_string()))?;
        builder(params)
    }
}

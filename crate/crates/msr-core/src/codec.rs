//! Construction-independent codec machinery: systematic encoding, any-k
//! reconstruction, parity residuals, exhaustive MDS verification, and
//! shortening.
//!
//! Everything here reaches a construction only through [`Code`], so c1,
//! c2, and shortened views all share one encoder and verifier.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::Code;
use crate::gf::FieldSpec;
use crate::linalg::{assemble_blocks, Matrix, Vector};
use crate::{Error, Result};

/// Above this many r-subsets, MDS verification samples instead of
/// enumerating.
pub const MDS_SUBSET_CAP: u64 = 100_000;

/// One stored codeword: n node columns of N symbols each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    field: Arc<FieldSpec>,
    nodes: Vec<Vector>,
}

impl Codeword {
    pub fn new(field: Arc<FieldSpec>, nodes: Vec<Vector>) -> Self {
        let len = nodes.first().map_or(0, Vector::len);
        assert!(
            nodes.iter().all(|v| v.len() == len),
            "all nodes must store the same number of symbols"
        );
        Codeword { field, nodes }
    }

    pub fn zero(code: &dyn Code) -> Self {
        let field = code.field().clone();
        let nodes = (0..code.node_count())
            .map(|_| Vector::zeros(field.clone(), code.sub_packetization()))
            .collect();
        Codeword { field, nodes }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, i: usize) -> &Vector {
        &self.nodes[i]
    }

    pub fn node_mut(&mut self, i: usize) -> &mut Vector {
        &mut self.nodes[i]
    }

    pub fn nodes(&self) -> &[Vector] {
        &self.nodes
    }
}

/// Outcome of one single-node repair.
#[derive(Debug, Clone)]
pub struct RepairReport {
    pub failed: usize,
    pub helpers: Vec<usize>,
    pub recovered: Vector,
    /// Symbols downloaded from each helper.
    pub downloads: BTreeMap<usize, usize>,
    /// Total downloaded symbols; equals the sum of `downloads`.
    pub bandwidth: usize,
    /// Cut-set bound d·N/(d-k+1) for these parameters.
    pub optimal: usize,
    /// Guaranteed overhead: bandwidth = (1 + epsilon) * optimal, exact.
    pub epsilon: Ratio<u64>,
    /// Projections of the bypassed nodes recovered as a side effect.
    pub byproducts: BTreeMap<usize, Vector>,
}

impl RepairReport {
    /// bandwidth / optimal as an exact rational.
    pub fn bandwidth_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.bandwidth as u64, self.optimal as u64)
    }
}

/// Reusable systematic encoder: factors the parity block system once and
/// then encodes any number of codewords.
pub struct Encoder<'a> {
    code: &'a dyn Code,
    /// A_{t,i} for data nodes i < k, indexed [t][i].
    data_blocks: Vec<Vec<Matrix>>,
    /// Inverse of the stacked parity-node block matrix.
    parity_inverse: Matrix,
}

impl<'a> Encoder<'a> {
    pub fn new(code: &'a dyn Code) -> Result<Self> {
        let (n, k, r) = (
            code.node_count(),
            code.data_node_count(),
            code.parity_node_count(),
        );
        let data_blocks: Vec<Vec<Matrix>> = (0..r)
            .map(|t| (0..k).map(|i| code.parity_block(t, i)).collect())
            .collect();
        let parity_grid: Vec<Vec<Matrix>> = (0..r)
            .map(|t| (k..n).map(|i| code.parity_block(t, i)).collect())
            .collect();
        let parity_inverse = assemble_blocks(&parity_grid)?
            .inverse()
            .map_err(|_| Error::Internal("parity block system is singular".into()))?;
        Ok(Encoder {
            code,
            data_blocks,
            parity_inverse,
        })
    }

    /// Encodes k data vectors of length N into a full codeword; data
    /// nodes hold the input verbatim.
    pub fn encode(&self, data: &[Vector]) -> Result<Codeword> {
        let code = self.code;
        let f = code.field();
        let (n, k, r) = (
            code.node_count(),
            code.data_node_count(),
            code.parity_node_count(),
        );
        let big_n = code.sub_packetization();
        if data.len() != k || data.iter().any(|v| v.len() != big_n) {
            return Err(Error::DimensionMismatch(format!(
                "encode expects {k} vectors of length {big_n}"
            )));
        }
        let mut rhs = Vector::zeros(f.clone(), r * big_n);
        for t in 0..r {
            let mut acc = Vector::zeros(f.clone(), big_n);
            for i in 0..k {
                acc = acc.add(&self.data_blocks[t][i].mul_vec(&data[i])?)?;
            }
            for (row, &v) in acc.as_slice().iter().enumerate() {
                rhs.set(t * big_n + row, f.neg(v));
            }
        }
        let stacked = self.parity_inverse.mul_vec(&rhs)?;
        let mut nodes: Vec<Vector> = data.to_vec();
        for i in 0..n - k {
            let elems = stacked.as_slice()[i * big_n..(i + 1) * big_n].to_vec();
            nodes.push(Vector::new(f.clone(), elems));
        }
        Ok(Codeword::new(f.clone(), nodes))
    }
}

/// One-shot systematic encode; see [`Encoder`] for batch use.
pub fn encode(code: &dyn Code, data: &[Vector]) -> Result<Codeword> {
    Encoder::new(code)?.encode(data)
}

/// The stacked parity value over all r groups; zero iff the codeword is
/// valid.
pub fn parity_residual(code: &dyn Code, cw: &Codeword) -> Result<Vector> {
    let f = code.field();
    let (n, r) = (code.node_count(), code.parity_node_count());
    let big_n = code.sub_packetization();
    if cw.node_count() != n || cw.nodes().iter().any(|v| v.len() != big_n) {
        return Err(Error::DimensionMismatch("codeword shape".into()));
    }
    let mut out = Vector::zeros(f.clone(), r * big_n);
    for t in 0..r {
        let mut acc = Vector::zeros(f.clone(), big_n);
        for i in 0..n {
            acc = acc.add(&code.parity_block(t, i).mul_vec(cw.node(i))?)?;
        }
        for (row, &v) in acc.as_slice().iter().enumerate() {
            out.set(t * big_n + row, v);
        }
    }
    Ok(out)
}

/// Reusable any-k reconstructor for a fixed set of available nodes.
pub struct Reconstructor<'a> {
    code: &'a dyn Code,
    available: Vec<usize>,
    /// Missing nodes padded with available ones up to r, ascending.
    solve_set: Vec<usize>,
    /// Blocks of the non-solve-set nodes, indexed [t][position].
    known_blocks: Vec<Vec<Matrix>>,
    known_nodes: Vec<usize>,
    solver: Matrix,
}

impl<'a> Reconstructor<'a> {
    pub fn new(code: &'a dyn Code, available: &BTreeSet<usize>) -> Result<Self> {
        let (n, k, r) = (
            code.node_count(),
            code.data_node_count(),
            code.parity_node_count(),
        );
        if available.iter().any(|&i| i >= n) {
            return Err(Error::DimensionMismatch("node index out of range".into()));
        }
        if available.len() < k {
            return Err(Error::InsufficientNodes {
                have: available.len(),
                need: k,
            });
        }
        let missing: Vec<usize> = (0..n).filter(|i| !available.contains(i)).collect();
        let mut solve_set = missing.clone();
        for &i in available.iter() {
            if solve_set.len() == r {
                break;
            }
            solve_set.push(i);
        }
        solve_set.sort_unstable();
        let known_nodes: Vec<usize> = (0..n).filter(|i| !solve_set.contains(i)).collect();
        let grid: Vec<Vec<Matrix>> = (0..r)
            .map(|t| solve_set.iter().map(|&i| code.parity_block(t, i)).collect())
            .collect();
        // non-singular for every r-subset by the MDS property; failure
        // here is a property violation worth surfacing verbatim
        let solver = assemble_blocks(&grid)?.inverse()?;
        let known_blocks: Vec<Vec<Matrix>> = (0..r)
            .map(|t| {
                known_nodes
                    .iter()
                    .map(|&i| code.parity_block(t, i))
                    .collect()
            })
            .collect();
        Ok(Reconstructor {
            code,
            available: available.iter().copied().collect(),
            solve_set,
            known_blocks,
            known_nodes,
            solver,
        })
    }

    pub fn reconstruct(&self, nodes: &BTreeMap<usize, Vector>) -> Result<Codeword> {
        let code = self.code;
        let f = code.field();
        let (n, r) = (code.node_count(), code.parity_node_count());
        let big_n = code.sub_packetization();
        for &i in &self.available {
            let v = nodes
                .get(&i)
                .ok_or_else(|| Error::DimensionMismatch(format!("node {i} missing")))?;
            if v.len() != big_n {
                return Err(Error::DimensionMismatch(format!("node {i} length")));
            }
        }
        let mut rhs = Vector::zeros(f.clone(), r * big_n);
        for t in 0..r {
            let mut acc = Vector::zeros(f.clone(), big_n);
            for (pos, &i) in self.known_nodes.iter().enumerate() {
                acc = acc.add(&self.known_blocks[t][pos].mul_vec(&nodes[&i])?)?;
            }
            for (row, &v) in acc.as_slice().iter().enumerate() {
                rhs.set(t * big_n + row, f.neg(v));
            }
        }
        let stacked = self.solver.mul_vec(&rhs)?;
        let mut out: Vec<Option<Vector>> = vec![None; n];
        for (pos, &i) in self.solve_set.iter().enumerate() {
            let elems = stacked.as_slice()[pos * big_n..(pos + 1) * big_n].to_vec();
            out[i] = Some(Vector::new(f.clone(), elems));
        }
        // provided nodes win over solved values, so the output agrees
        // with the input on every available node
        for &i in &self.available {
            out[i] = Some(nodes[&i].clone());
        }
        let nodes = out
            .into_iter()
            .map(|v| v.expect("every node either provided or solved"))
            .collect();
        Ok(Codeword::new(f.clone(), nodes))
    }
}

/// Rebuilds the full codeword from any >= k available nodes.
pub fn reconstruct(code: &dyn Code, available: &BTreeMap<usize, Vector>) -> Result<Codeword> {
    let keys: BTreeSet<usize> = available.keys().copied().collect();
    Reconstructor::new(code, &keys)?.reconstruct(available)
}

/// Result of sweeping r-subsets of parity block columns.
#[derive(Debug, Clone)]
pub struct MdsReport {
    /// Subsets actually tested.
    pub checked: u64,
    /// Total number of r-subsets for these parameters.
    pub total: u128,
    /// False when `checked < total` (sampled verification).
    pub exhaustive: bool,
    /// Subsets whose block submatrix was singular.
    pub failures: Vec<Vec<usize>>,
}

impl MdsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn binomial(n: u64, r: u64) -> u128 {
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Checks non-singularity of the r x r block submatrix for every
/// r-subset of nodes, enumerating exhaustively up to `cap` subsets and
/// sampling uniformly (seeded, reproducible) beyond it.
pub fn verify_mds_with(code: &dyn Code, cap: u64, seed: u64) -> MdsReport {
    let (n, r) = (code.node_count(), code.parity_node_count());
    let blocks: Vec<Vec<Matrix>> = (0..r)
        .map(|t| (0..n).map(|i| code.parity_block(t, i)).collect())
        .collect();
    let check = |subset: &[usize]| -> bool {
        let grid: Vec<Vec<Matrix>> = (0..r)
            .map(|t| subset.iter().map(|&i| blocks[t][i].clone()).collect())
            .collect();
        assemble_blocks(&grid)
            .map(|m| m.is_nonsingular())
            .unwrap_or(false)
    };
    let total = binomial(n as u64, r as u64);
    let mut failures = Vec::new();
    let mut checked = 0u64;
    if total <= cap as u128 {
        for subset in (0..n).combinations(r) {
            checked += 1;
            if !check(&subset) {
                failures.push(subset);
            }
        }
        MdsReport {
            checked,
            total,
            exhaustive: true,
            failures,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cap {
            let mut pool: Vec<usize> = (0..n).collect();
            let mut subset = Vec::with_capacity(r);
            for _ in 0..r {
                let pick = rng.gen_range(0..pool.len());
                subset.push(pool.swap_remove(pick));
            }
            subset.sort_unstable();
            checked += 1;
            if !check(&subset) {
                failures.push(subset);
            }
        }
        failures.sort();
        failures.dedup();
        MdsReport {
            checked,
            total,
            exhaustive: false,
            failures,
        }
    }
}

pub fn verify_mds(code: &dyn Code) -> MdsReport {
    verify_mds_with(code, MDS_SUBSET_CAP, 0)
}

/// A shortened view of a c1 code: node 0 of the base is pinned to zero
/// and hidden, turning an (n+1, k+1) code with repair degree d+1 into an
/// (n, k) code with repair degree d at the same sub-packetization.
pub struct ShortenedCode {
    base: crate::c1::C1Code,
}

/// Shortens a c1 code by one node.
pub fn shorten(base: crate::c1::C1Code) -> ShortenedCode {
    ShortenedCode { base }
}

impl ShortenedCode {
    pub fn base(&self) -> &crate::c1::C1Code {
        &self.base
    }

    fn lift(&self, cw: &Codeword) -> Codeword {
        let f = self.base.field().clone();
        let mut nodes = Vec::with_capacity(cw.node_count() + 1);
        nodes.push(Vector::zeros(f.clone(), self.base.sub_packetization()));
        nodes.extend(cw.nodes().iter().cloned());
        Codeword::new(f, nodes)
    }
}

impl Code for ShortenedCode {
    fn name(&self) -> &'static str {
        "c1-shortened"
    }

    fn field(&self) -> &Arc<FieldSpec> {
        self.base.field()
    }

    fn node_count(&self) -> usize {
        self.base.node_count() - 1
    }

    fn data_node_count(&self) -> usize {
        self.base.data_node_count() - 1
    }

    fn repair_degree(&self) -> usize {
        self.base.repair_degree() - 1
    }

    fn sub_packetization(&self) -> usize {
        self.base.sub_packetization()
    }

    fn parity_block(&self, t: usize, i: usize) -> Matrix {
        assert!(i < self.node_count());
        self.base.parity_block(t, i + 1)
    }

    fn repair(
        &self,
        codeword: &Codeword,
        failed: usize,
        helpers: &[usize],
    ) -> Result<RepairReport> {
        if failed >= self.node_count() {
            return Err(Error::BadHelperSet(format!(
                "failed node {failed} out of range"
            )));
        }
        if helpers.len() != self.repair_degree() {
            return Err(Error::BadHelperSet(format!(
                "need {} distinct helpers, got {}",
                self.repair_degree(),
                helpers.len()
            )));
        }
        // delegate with the pinned node as an extra, zero-cost helper
        let mut base_helpers: Vec<usize> = helpers.iter().map(|&j| j + 1).collect();
        base_helpers.push(0);
        let base_cw = self.lift(codeword);
        let mut report = self.base.repair(&base_cw, failed + 1, &base_helpers)?;

        let pinned_cost = report.downloads.remove(&0).unwrap_or(0);
        report.bandwidth -= pinned_cost;
        report.failed = failed;
        report.helpers = helpers.iter().copied().sorted().collect();
        report.downloads = report
            .downloads
            .into_iter()
            .map(|(j, c)| (j - 1, c))
            .collect();
        report.byproducts = report
            .byproducts
            .into_iter()
            .map(|(j, v)| (j - 1, v))
            .collect();
        report.optimal = self.optimal_repair_bandwidth();
        Ok(report)
    }
}

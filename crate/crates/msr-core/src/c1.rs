//! The "c1" construction: an (n = 2m, k) MSR code with sub-packetization
//! N = w^m that repairs any node from any d = k+w-1 helpers at the
//! cut-set bandwidth d·N/w.
//!
//! The parity-check matrix is built from n block columns of N x N upper
//! triangular matrices. Block column i < m carries, per row a, the
//! diagonal coefficient lambda_{i, a_i}^t plus cross terms
//! (lambda_{i,0}^t - lambda_{i,u}^t) into the rows whose i-th digit is u;
//! block column i >= m is purely diagonal on digit i-m. Repair of node i
//! projects every parity group through one partition selection of digit
//! i % m and solves a small block system whose unknown is the failed
//! node's w projections plus one projection per bypassed node.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::code::Code;
use crate::codec::{Codeword, RepairReport};
use crate::gf::{self, make_field, Construction, FieldElement, FieldSpec, SymbolMode};
use crate::indexing::DigitSpace;
use crate::linalg::{assemble_blocks, Matrix, Vector};
use crate::{Error, Result};

/// Validated parameters of a c1 code, with every derived quantity fixed.
#[derive(Debug, Clone)]
pub struct C1Params {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Parity node count r = n - k.
    pub r: usize,
    /// Partition width w = d - k + 1 (2 <= w <= r).
    pub w: usize,
    /// Digit count m = n / 2.
    pub m: usize,
    /// Sub-packetization N = w^m.
    pub sub_packetization: usize,
    pub field: Arc<FieldSpec>,
}

impl C1Params {
    /// Derives (r, w, m, N) and selects the field.
    ///
    /// Without an override the field is the smallest prime power above
    /// the coefficient-assignment threshold; an override must still clear
    /// that threshold.
    pub fn new(n: usize, k: usize, d: usize, q_override: Option<u64>) -> Result<Self> {
        let threshold = gf::field_threshold(Construction::C1, n, k, d, 1)?;
        let q = match q_override {
            Some(q) => {
                if q <= threshold {
                    return Err(Error::FieldTooSmall { q, threshold });
                }
                q
            }
            None => gf::smallest_valid_q(Construction::C1, n, k, d, 1, SymbolMode::Symbol)?,
        };
        let field = make_field(q)?;
        let r = n - k;
        let w = d - k + 1;
        let m = n / 2;
        let sub_packetization = w
            .checked_pow(m as u32)
            .ok_or_else(|| Error::Internal(format!("sub-packetization {w}^{m} overflows")))?;
        Ok(C1Params {
            n,
            k,
            d,
            r,
            w,
            m,
            sub_packetization,
            field,
        })
    }
}

/// The per-node coefficient table lambda_{i,u}, i in [0,n), u in [0,w).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaTable {
    values: Vec<Vec<FieldElement>>,
}

impl LambdaTable {
    pub fn new(values: Vec<Vec<FieldElement>>) -> Self {
        LambdaTable { values }
    }

    pub fn get(&self, i: usize, u: usize) -> FieldElement {
        self.values[i][u]
    }

    /// Overwrite one entry. Downstream guarantees only hold for tables
    /// that pass [`validate_lambdas`]; this exists so diagnostics can
    /// plant violations on purpose.
    pub fn set(&mut self, i: usize, u: usize, value: FieldElement) {
        self.values[i][u] = value;
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn width(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }
}

/// Builds the canonical coefficient table from powers of the primitive
/// element. The exponent layout depends on whether w is 2, strictly
/// between 2 and r, or equal to r; the w = r branch reuses each node's
/// values on its partner node m positions away, which is what lets the
/// field stay at q > mw.
pub fn assign_lambdas(params: &C1Params) -> LambdaTable {
    let f = &params.field;
    let (w, r, m) = (params.w as u64, params.r as u64, params.m);
    let mut values = vec![Vec::with_capacity(params.w); params.n];
    for i in 0..m as u64 {
        for u in 0..w {
            let (first, second) = if w == r {
                (i * w + u, i * w + (u + 1) % r)
            } else if w == 2 {
                (i * (w + 2) + u, i * (w + 2) + w + u)
            } else {
                let second = if u == 0 {
                    i * (w + 1) + w
                } else {
                    i * (w + 1) + u % (w - 1) + 1
                };
                (i * (w + 1) + u, second)
            };
            values[i as usize].push(f.primitive_power(first));
            values[i as usize + m].push(f.primitive_power(second));
        }
    }
    LambdaTable::new(values)
}

/// Which distinctness requirement a coefficient table breaks.
///
/// The first two guard the MDS property, the last three guard repair;
/// `RepairZeroPair` only applies when w < r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaCondition {
    /// lambda_{i,u} = lambda_{j,v} although i and j differ mod m.
    MdsCrossFamily,
    /// lambda_{i,u} = lambda_{i+m,u}.
    MdsHalfPair,
    /// lambda_{i,u} = lambda_{i,v} for u != v.
    RepairWithinNode,
    /// Same clash as `MdsCrossFamily`, required again for repair.
    RepairCrossFamily,
    /// lambda_{i,0} = lambda_{i+m,u} or lambda_{i,u} = lambda_{i+m,0}.
    RepairZeroPair,
}

/// A single broken requirement: lambda_{i,u} collided with lambda_{j,v}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaViolation {
    pub condition: LambdaCondition,
    pub i: usize,
    pub u: usize,
    pub j: usize,
    pub v: usize,
}

/// Checks all five distinctness conditions and returns every witness.
pub fn validate_lambdas(params: &C1Params, table: &LambdaTable) -> Vec<LambdaViolation> {
    let (n, m, w) = (params.n, params.m, params.w);
    assert_eq!(table.node_count(), n, "table shape mismatch");
    assert_eq!(table.width(), w, "table shape mismatch");
    let mut out = Vec::new();
    let mut push = |condition, i, u, j, v| {
        out.push(LambdaViolation {
            condition,
            i,
            u,
            j,
            v,
        })
    };
    for i in 0..n {
        for j in i + 1..n {
            if i % m == j % m {
                continue;
            }
            for u in 0..w {
                for v in 0..w {
                    if table.get(i, u) == table.get(j, v) {
                        push(LambdaCondition::MdsCrossFamily, i, u, j, v);
                        push(LambdaCondition::RepairCrossFamily, i, u, j, v);
                    }
                }
            }
        }
    }
    for i in 0..m {
        for u in 0..w {
            if table.get(i, u) == table.get(i + m, u) {
                push(LambdaCondition::MdsHalfPair, i, u, i + m, u);
            }
        }
    }
    for i in 0..n {
        for u in 0..w {
            for v in u + 1..w {
                if table.get(i, u) == table.get(i, v) {
                    push(LambdaCondition::RepairWithinNode, i, u, i, v);
                }
            }
        }
    }
    if params.w < params.r {
        for i in 0..m {
            for u in 0..w {
                if table.get(i, 0) == table.get(i + m, u) {
                    push(LambdaCondition::RepairZeroPair, i, 0, i + m, u);
                }
                // the u = 0 case of this arm coincides with the one above
                if u > 0 && table.get(i, u) == table.get(i + m, 0) {
                    push(LambdaCondition::RepairZeroPair, i, u, i + m, 0);
                }
            }
        }
    }
    out
}

/// Helper and bypass bookkeeping for one repair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairContext {
    /// The failed node.
    pub node: usize,
    /// The d contacted nodes, ascending.
    pub helpers: Vec<usize>,
    /// The r - w surviving nodes not contacted, ascending.
    pub bypass: Vec<usize>,
    /// Rows selected from each parity group (N/w).
    pub delta: usize,
}

/// A fully built c1 code.
pub struct C1Code {
    params: C1Params,
    lambdas: LambdaTable,
    space: DigitSpace,
    subspace: DigitSpace,
}

impl C1Code {
    pub fn new(n: usize, k: usize, d: usize, q_override: Option<u64>) -> Result<Self> {
        let params = C1Params::new(n, k, d, q_override)?;
        let lambdas = assign_lambdas(&params);
        Self::from_table(params, lambdas)
    }

    /// Wraps a caller-supplied coefficient table, rejecting any table
    /// that breaks a distinctness condition.
    pub fn from_table(params: C1Params, lambdas: LambdaTable) -> Result<Self> {
        let violations = validate_lambdas(&params, &lambdas);
        if let Some(v) = violations.first() {
            return Err(Error::Internal(format!(
                "coefficient table violates {:?} at (i={}, u={}, j={}, v={})",
                v.condition, v.i, v.u, v.j, v.v
            )));
        }
        Ok(Self::from_table_unchecked(params, lambdas))
    }

    /// Like [`Self::from_table`] but skips validation, so broken tables
    /// can be driven through the verification machinery on purpose.
    pub fn from_table_unchecked(params: C1Params, lambdas: LambdaTable) -> Self {
        let space = DigitSpace::new(params.w, params.m);
        let subspace = DigitSpace::new(params.w, params.m - 1);
        C1Code {
            params,
            lambdas,
            space,
            subspace,
        }
    }

    pub fn params(&self) -> &C1Params {
        &self.params
    }

    pub fn lambdas(&self) -> &LambdaTable {
        &self.lambdas
    }

    pub fn lambda(&self, i: usize, u: usize) -> FieldElement {
        self.lambdas.get(i, u)
    }

    /// Digit space of node indices, N = w^m.
    pub fn space(&self) -> &DigitSpace {
        &self.space
    }

    /// lambda_{node,0}^t - lambda_{node,u}^t
    fn cross_coeff(&self, node: usize, u: usize, t: usize) -> FieldElement {
        let f = &self.params.field;
        f.sub(
            f.pow(self.lambda(node, 0), t as u64),
            f.pow(self.lambda(node, u), t as u64),
        )
    }

    /// Shared layout of parity and factorization blocks: diagonal entry
    /// lambda_{node, a_digit}^t per row a, and, when `cross` is set, the
    /// entry lambda_{node,0}^t - lambda_{node,u}^t at column a(digit, u)
    /// for every row with a_digit = 0.
    fn structured_block(
        &self,
        space: &DigitSpace,
        t: usize,
        node: usize,
        digit: usize,
        cross: bool,
    ) -> Matrix {
        let f = &self.params.field;
        let n_rows = space.size();
        let mut out = Matrix::zeros(f.clone(), n_rows, n_rows);
        for a in 0..n_rows {
            let a_digit = space.digit(a, digit);
            out[(a, a)] = f.pow(self.lambda(node, a_digit), t as u64);
            if cross && a_digit == 0 {
                for u in 1..self.params.w {
                    let b = space.replace_digit(a, digit, u).expect("digit in range");
                    out[(a, b)] = self.cross_coeff(node, u, t);
                }
            }
        }
        out
    }

    /// Parity-check block A_{t,i} (N x N, upper triangular).
    pub fn parity_block(&self, t: usize, i: usize) -> Matrix {
        assert!(t < self.params.r && i < self.params.n);
        let m = self.params.m;
        if i < m {
            self.structured_block(&self.space, t, i, i, true)
        } else {
            self.structured_block(&self.space, t, i, i - m, false)
        }
    }

    /// Select matrix S_{i,t}; the same (N/w) x N matrix serves every
    /// parity group t, and doubles as the repair matrix R_{i,j} for
    /// every helper j.
    pub fn select_matrix(&self, i: usize) -> Matrix {
        assert!(i < self.params.n);
        let f = &self.params.field;
        let m = self.params.m;
        if i < m {
            self.space.partition_matrix(i, 0, f)
        } else {
            let mut acc = self.space.partition_matrix(i - m, 0, f);
            for u in 1..self.params.w {
                acc = acc
                    .add(&self.space.partition_matrix(i - m, u, f))
                    .expect("same shape");
            }
            acc
        }
    }

    /// Repair matrix R_{i,j}; identical for every helper j.
    pub fn repair_matrix(&self, i: usize) -> Matrix {
        self.select_matrix(i)
    }

    /// The (N/w) x (N/w) factor B_{t,j,i} with S_{i,t} A_{t,j} = B_{t,j,i} R_{i,j}.
    ///
    /// Defined for every pair; it is the factorization witness only when
    /// j != i.
    pub fn b_matrix(&self, t: usize, j: usize, i: usize) -> Matrix {
        let (n, m) = (self.params.n, self.params.m);
        assert!(t < self.params.r && i < n && j < n);
        let f = &self.params.field;
        let i_red = i % m;
        if j % m == i_red {
            let scalar = f.pow(self.lambda(j, 0), t as u64);
            return Matrix::identity(f.clone(), self.subspace.size()).scale(scalar);
        }
        if j < m {
            let digit = if j < i_red { j } else { j - 1 };
            self.structured_block(&self.subspace, t, j, digit, true)
        } else {
            let digit = if j - m < i_red { j - m } else { j - m - 1 };
            self.structured_block(&self.subspace, t, j, digit, false)
        }
    }

    /// Validates a helper set and derives the bypass set.
    pub fn repair_context(&self, node: usize, helpers: &[usize]) -> Result<RepairContext> {
        let n = self.params.n;
        if node >= n {
            return Err(Error::BadHelperSet(format!(
                "failed node {node} out of range"
            )));
        }
        let mut sorted = helpers.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != helpers.len() || sorted.len() != self.params.d {
            return Err(Error::BadHelperSet(format!(
                "need {} distinct helpers, got {}",
                self.params.d,
                helpers.len()
            )));
        }
        if sorted.iter().any(|&j| j >= n) {
            return Err(Error::BadHelperSet("helper out of range".into()));
        }
        if sorted.binary_search(&node).is_ok() {
            return Err(Error::BadHelperSet(format!(
                "failed node {node} cannot help itself"
            )));
        }
        let bypass = (0..n)
            .filter(|&j| j != node && sorted.binary_search(&j).is_err())
            .collect();
        Ok(RepairContext {
            node,
            helpers: sorted,
            bypass,
            delta: self.params.sub_packetization / self.params.w,
        })
    }

    /// Scalar coefficient of node i's u-th projection in parity group t:
    /// projecting through the select matrix turns S_{i,t} A_{t,i} into a
    /// combination of the w partition selections with these coefficients.
    pub fn projection_coeff(&self, i: usize, u: usize, t: usize) -> FieldElement {
        let f = &self.params.field;
        if i < self.params.m {
            if u == 0 {
                f.pow(self.lambda(i, 0), t as u64)
            } else {
                self.cross_coeff(i, u, t)
            }
        } else {
            f.pow(self.lambda(i, u), t as u64)
        }
    }

    fn repair_impl(&self, cw: &Codeword, ctx: &RepairContext) -> Result<RepairReport> {
        let p = &self.params;
        let f = &p.field;
        let delta = ctx.delta;
        let i = ctx.node;

        // downloads: the same projection of every helper
        let repair_mat = self.repair_matrix(i);
        let mut downloads: BTreeMap<usize, Vector> = BTreeMap::new();
        for &j in &ctx.helpers {
            downloads.insert(j, repair_mat.mul_vec(cw.node(j))?);
        }

        // block system over the failed node's w projections plus one
        // bypass projection per unconnected node
        let unknown_blocks = p.w + ctx.bypass.len();
        debug_assert_eq!(unknown_blocks, p.r);
        let mut grid: Vec<Vec<Matrix>> = Vec::with_capacity(p.r);
        let mut rhs = Vector::zeros(f.clone(), p.r * delta);
        for t in 0..p.r {
            let mut row: Vec<Matrix> = Vec::with_capacity(unknown_blocks);
            for u in 0..p.w {
                let coeff = self.projection_coeff(i, u, t);
                row.push(Matrix::identity(f.clone(), delta).scale(coeff));
            }
            for &l in &ctx.bypass {
                row.push(self.b_matrix(t, l, i));
            }
            grid.push(row);

            let mut acc = Vector::zeros(f.clone(), delta);
            for &j in &ctx.helpers {
                let term = self.b_matrix(t, j, i).mul_vec(&downloads[&j])?;
                acc = acc.add(&term)?;
            }
            for (row_idx, &v) in acc.as_slice().iter().enumerate() {
                rhs.set(t * delta + row_idx, f.neg(v));
            }
        }
        let system = assemble_blocks(&grid)?;
        let solution = system.solve(&rhs)?;

        // stitch the w projections back into one node via the partition
        let mut recovered = Vector::zeros(f.clone(), p.sub_packetization);
        let digit = i % p.m;
        for u in 0..p.w {
            for (a, &target) in self.space.partition_map(digit, u).iter().enumerate() {
                recovered.set(target, solution.get(u * delta + a));
            }
        }

        let mut byproducts = BTreeMap::new();
        for (x, &l) in ctx.bypass.iter().enumerate() {
            let start = (p.w + x) * delta;
            let elems = solution.as_slice()[start..start + delta].to_vec();
            byproducts.insert(l, Vector::new(f.clone(), elems));
        }

        let download_counts: BTreeMap<usize, usize> =
            ctx.helpers.iter().map(|&j| (j, delta)).collect();
        Ok(RepairReport {
            failed: i,
            helpers: ctx.helpers.clone(),
            recovered,
            downloads: download_counts,
            bandwidth: p.d * delta,
            optimal: self.optimal_repair_bandwidth(),
            epsilon: num_rational::Ratio::from_integer(0),
            byproducts,
        })
    }
}

impl Code for C1Code {
    fn name(&self) -> &'static str {
        "c1"
    }

    fn field(&self) -> &Arc<FieldSpec> {
        &self.params.field
    }

    fn node_count(&self) -> usize {
        self.params.n
    }

    fn data_node_count(&self) -> usize {
        self.params.k
    }

    fn repair_degree(&self) -> usize {
        self.params.d
    }

    fn sub_packetization(&self) -> usize {
        self.params.sub_packetization
    }

    fn parity_block(&self, t: usize, i: usize) -> Matrix {
        C1Code::parity_block(self, t, i)
    }

    fn repair(
        &self,
        codeword: &Codeword,
        failed: usize,
        helpers: &[usize],
    ) -> Result<RepairReport> {
        let ctx = self.repair_context(failed, helpers)?;
        self.repair_impl(codeword, &ctx)
    }
}

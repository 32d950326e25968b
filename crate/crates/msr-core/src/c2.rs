//! The "c2" construction: replicate a d' = n'-1 base code s times and
//! scale copy v of parity group t by x^t with x = c^(v·m·r).
//!
//! The result is an (n = s·n', k = n - r) MDS code with the base code's
//! sub-packetization and repair degree n-1. Repairing node i downloads
//! the usual N/r projection from helpers in other positions but the full
//! content of the s-1 helpers congruent to i mod n', landing at exactly
//! (1 + (s-1)(r-1)/(n-1)) times the cut-set bound.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;

use crate::c1::C1Code;
use crate::code::Code;
use crate::codec::{Codeword, RepairReport};
use crate::gf::{self, Construction, FieldElement, FieldSpec, SymbolMode};
use crate::linalg::{assemble_blocks, Matrix, Vector};
use crate::{Error, Result};

/// A replicated-and-scaled code over a c1 base with d' = n'-1.
pub struct C2Code {
    base: C1Code,
    s: usize,
    n: usize,
    k: usize,
    /// Per-node scalars; block (t, i) of the parity-check matrix is
    /// xs[i]^t times base block (t, i mod n').
    xs: Vec<FieldElement>,
}

/// Which distinctness requirement the scaled coefficients break.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum C2Condition {
    /// x_i·lambda_{i',u} = x_j·lambda_{j',v} although i, j differ mod m.
    CrossFamily,
    /// x_i·lambda_{i',u} = x_j·lambda_{j',u} for distinct i = j mod m.
    ScaledHalfPair,
    /// lambda_{i',u} = lambda_{i',v} for u != v in the base table.
    WithinNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct C2Violation {
    pub condition: C2Condition,
    pub i: usize,
    pub u: usize,
    pub j: usize,
    pub v: usize,
}

impl C2Code {
    /// Builds from base parameters (n', k', implicit d' = n'-1) and the
    /// replication factor s. The shared field must exceed s·m·r.
    pub fn new(n_base: usize, k_base: usize, s: usize, q_override: Option<u64>) -> Result<Self> {
        if n_base == 0 {
            return Err(Error::BadDegree {
                n: n_base,
                k: k_base,
                d: 0,
            });
        }
        let d_base = n_base - 1;
        let threshold = gf::field_threshold(Construction::C2, n_base, k_base, d_base, s)?;
        let q = match q_override {
            Some(q) => {
                if q <= threshold {
                    return Err(Error::FieldTooSmall { q, threshold });
                }
                q
            }
            None => gf::smallest_valid_q(
                Construction::C2,
                n_base,
                k_base,
                d_base,
                s,
                SymbolMode::Symbol,
            )?,
        };
        let base = C1Code::new(n_base, k_base, d_base, Some(q))?;
        let code = Self::from_base_unchecked(base, s);
        let violations = code.validate_conditions();
        if let Some(v) = violations.first() {
            return Err(Error::Internal(format!(
                "scaled coefficients violate {:?} at (i={}, u={}, j={}, v={})",
                v.condition, v.i, v.u, v.j, v.v
            )));
        }
        Ok(code)
    }

    /// Assembles the replicated code without re-checking the field bound
    /// or the distinctness conditions, so undersized fields can be driven
    /// through [`Self::validate_conditions`] on purpose.
    pub fn from_base_unchecked(base: C1Code, s: usize) -> Self {
        assert!(s >= 1, "need at least one copy");
        let p = base.params();
        assert_eq!(p.d, p.n - 1, "base repair degree must be n'-1");
        let f = p.field.clone();
        let n_base = p.n;
        let n = s * n_base;
        let k = n - p.r;
        let stride = (p.m * p.r) as u64;
        let xs = (0..n)
            .map(|i| f.primitive_power((i / n_base) as u64 * stride))
            .collect();
        C2Code { base, s, n, k, xs }
    }

    /// Like [`Self::from_base_unchecked`] but with caller-chosen scalars.
    pub fn with_xs_unchecked(base: C1Code, s: usize, xs: Vec<FieldElement>) -> Self {
        let mut code = Self::from_base_unchecked(base, s);
        assert_eq!(xs.len(), code.n);
        code.xs = xs;
        code
    }

    pub fn base(&self) -> &C1Code {
        &self.base
    }

    pub fn replication(&self) -> usize {
        self.s
    }

    pub fn scalar(&self, i: usize) -> FieldElement {
        self.xs[i]
    }

    /// Checks the three distinctness conditions on {x_i·lambda} and
    /// returns every witness.
    pub fn validate_conditions(&self) -> Vec<C2Violation> {
        let p = self.base.params();
        let f = &p.field;
        let (n_base, m, r) = (p.n, p.m, p.r);
        let scaled = |i: usize, u: usize| f.mul(self.xs[i], self.base.lambda(i % n_base, u));
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if i % m != j % m {
                    for u in 0..r {
                        for v in 0..r {
                            if scaled(i, u) == scaled(j, v) {
                                out.push(C2Violation {
                                    condition: C2Condition::CrossFamily,
                                    i,
                                    u,
                                    j,
                                    v,
                                });
                            }
                        }
                    }
                } else {
                    for u in 0..r {
                        if scaled(i, u) == scaled(j, u) {
                            out.push(C2Violation {
                                condition: C2Condition::ScaledHalfPair,
                                i,
                                u,
                                j,
                                v: u,
                            });
                        }
                    }
                }
            }
        }
        for i in 0..n_base {
            for u in 0..r {
                for v in u + 1..r {
                    if self.base.lambda(i, u) == self.base.lambda(i, v) {
                        out.push(C2Violation {
                            condition: C2Condition::WithinNode,
                            i,
                            u,
                            j: i,
                            v,
                        });
                    }
                }
            }
        }
        out
    }

    fn repair_impl(&self, cw: &Codeword, failed: usize) -> Result<RepairReport> {
        let p = self.base.params();
        let f = &p.field;
        let (n_base, r, big_n) = (p.n, p.r, p.sub_packetization);
        let delta = big_n / r;
        let i_base = failed % n_base;
        let xi = self.xs[failed];

        // download phase: the s-1 congruent helpers in full, one
        // projection from everyone else
        let repair_mat = self.base.repair_matrix(i_base);
        let mut downloads: BTreeMap<usize, usize> = BTreeMap::new();
        let mut projected: BTreeMap<usize, Vector> = BTreeMap::new();
        for j in 0..self.n {
            if j == failed {
                continue;
            }
            if j % n_base == i_base {
                downloads.insert(j, big_n);
            } else {
                downloads.insert(j, delta);
                projected.insert(j, repair_mat.mul_vec(cw.node(j))?);
            }
        }

        // unknowns: the r projections of the failed node onto the digit
        // partition of i_base
        let mut grid: Vec<Vec<Matrix>> = Vec::with_capacity(r);
        let mut rhs = Vector::zeros(f.clone(), r * delta);
        let select = self.base.select_matrix(i_base);
        for t in 0..r {
            let xi_t = f.pow(xi, t as u64);
            let row: Vec<Matrix> = (0..r)
                .map(|u| {
                    let coeff = f.mul(xi_t, self.base.projection_coeff(i_base, u, t));
                    Matrix::identity(f.clone(), delta).scale(coeff)
                })
                .collect();
            grid.push(row);

            // congruent helpers are fully known, so their projected
            // self-product moves to the right-hand side verbatim
            let self_product = select.mat_mul(&self.base.parity_block(t, i_base))?;
            let mut acc = Vector::zeros(f.clone(), delta);
            for j in 0..self.n {
                if j == failed {
                    continue;
                }
                let xj_t = f.pow(self.xs[j], t as u64);
                let term = if j % n_base == i_base {
                    self_product.mul_vec(cw.node(j))?
                } else {
                    self.base
                        .b_matrix(t, j % n_base, i_base)
                        .mul_vec(&projected[&j])?
                };
                acc = acc.add(&term.scale(xj_t))?;
            }
            for (row_idx, &v) in acc.as_slice().iter().enumerate() {
                rhs.set(t * delta + row_idx, f.neg(v));
            }
        }
        let solution = assemble_blocks(&grid)?.solve(&rhs)?;

        let mut recovered = Vector::zeros(f.clone(), big_n);
        let digit = i_base % p.m;
        for u in 0..r {
            for (a, &target) in self.base.space().partition_map(digit, u).iter().enumerate() {
                recovered.set(target, solution.get(u * delta + a));
            }
        }

        let bandwidth = (self.s - 1) * big_n + (self.n - self.s) * delta;
        let helpers: Vec<usize> = (0..self.n).filter(|&j| j != failed).collect();
        Ok(RepairReport {
            failed,
            helpers,
            recovered,
            downloads,
            bandwidth,
            optimal: self.optimal_repair_bandwidth(),
            epsilon: self.epsilon(),
            byproducts: BTreeMap::new(),
        })
    }
}

impl Code for C2Code {
    fn name(&self) -> &'static str {
        "c2"
    }

    fn field(&self) -> &Arc<FieldSpec> {
        self.base.field()
    }

    fn node_count(&self) -> usize {
        self.n
    }

    fn data_node_count(&self) -> usize {
        self.k
    }

    fn repair_degree(&self) -> usize {
        self.n - 1
    }

    fn sub_packetization(&self) -> usize {
        self.base.sub_packetization()
    }

    fn parity_block(&self, t: usize, i: usize) -> Matrix {
        assert!(i < self.n);
        let p = self.base.params();
        let block = self.base.parity_block(t, i % p.n);
        if self.xs[i] == p.field.one() {
            block
        } else {
            block.scale(p.field.pow(self.xs[i], t as u64))
        }
    }

    fn repair(
        &self,
        codeword: &Codeword,
        failed: usize,
        helpers: &[usize],
    ) -> Result<RepairReport> {
        if failed >= self.n {
            return Err(Error::BadHelperSet(format!(
                "failed node {failed} out of range"
            )));
        }
        let mut sorted = helpers.to_vec();
        sorted.sort_unstable();
        let survivors: Vec<usize> = (0..self.n).filter(|&j| j != failed).collect();
        if sorted != survivors {
            return Err(Error::BadHelperSet(
                "repair degree is n-1: helpers must be all surviving nodes".into(),
            ));
        }
        self.repair_impl(codeword, failed)
    }

    fn epsilon(&self) -> Ratio<u64> {
        let r = self.base.params().r as u64;
        Ratio::new((self.s as u64 - 1) * (r - 1), self.n as u64 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{encode, parity_residual, verify_mds, Codeword};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn example_code() -> C2Code {
        C2Code::new(4, 2, 2, None).unwrap()
    }

    fn random_data(code: &dyn Code, rng: &mut StdRng) -> Vec<Vector> {
        let f = code.field();
        let q = f.order();
        (0..code.data_node_count())
            .map(|_| {
                let vals: Vec<u64> = (0..code.sub_packetization())
                    .map(|_| rng.gen_range(0..q))
                    .collect();
                Vector::from_values(f.clone(), &vals)
            })
            .collect()
    }

    #[test]
    fn params_example() {
        let code = example_code();
        assert_eq!((code.node_count(), code.data_node_count()), (8, 6));
        assert_eq!(code.sub_packetization(), 4);
        assert_eq!(code.repair_degree(), 7);
        assert_eq!(code.field().order(), 9);
    }

    #[test]
    fn scalars_follow_copy_index() {
        let code = example_code();
        let f = code.field();
        for i in 0..4 {
            assert_eq!(code.scalar(i), f.one());
        }
        for i in 4..8 {
            assert_eq!(code.scalar(i), f.primitive_power(4));
        }
    }

    #[test]
    fn undersized_field_rejected() {
        assert_eq!(
            C2Code::new(4, 2, 2, Some(7)).err().unwrap(),
            Error::FieldTooSmall { q: 7, threshold: 8 }
        );
        assert_eq!(
            C2Code::new(4, 2, 2, Some(8)).err().unwrap(),
            Error::FieldTooSmall { q: 8, threshold: 8 }
        );
    }

    #[test]
    fn parity_blocks_scale_the_base() {
        let code = example_code();
        let f = code.field().clone();
        // first copy is the base code verbatim
        for t in 0..2 {
            for i in 0..4 {
                assert_eq!(code.parity_block(t, i), code.base().parity_block(t, i));
            }
        }
        // second copy scales group t by c^(4t)
        for t in 0..2u64 {
            let scale = f.pow(f.primitive_power(4), t);
            for i in 4..8 {
                let expect = code.base().parity_block(t as usize, i - 4).scale(scale);
                assert_eq!(code.parity_block(t as usize, i), expect);
            }
        }
        // t = 0 blocks equal the base block for every node
        for i in 0..8 {
            assert_eq!(code.parity_block(0, i), code.base().parity_block(0, i % 4));
        }
    }

    #[test]
    fn conditions_validate_clean() {
        assert!(example_code().validate_conditions().is_empty());
        let bigger = C2Code::new(6, 3, 3, None).unwrap();
        assert!(bigger.validate_conditions().is_empty());
    }

    #[test]
    fn forced_scalar_collision_caught() {
        let base = C1Code::new(4, 2, 3, Some(9)).unwrap();
        let f = base.field().clone();
        let mut xs: Vec<FieldElement> = Vec::new();
        for i in 0..8usize {
            xs.push(if i < 4 { f.one() } else { f.primitive_power(4) });
        }
        xs[4] = f.one(); // clone of x_0
        let code = C2Code::with_xs_unchecked(base, 2, xs);
        let violations = code.validate_conditions();
        assert!(violations
            .iter()
            .any(|v| v.condition == C2Condition::ScaledHalfPair && v.i == 0 && v.j == 4));
    }

    #[test]
    fn exact_threshold_field_fails_conditions() {
        // at q = s·m·r the scalar exponents wrap around the group order
        let base = C1Code::new(4, 2, 3, Some(8)).unwrap();
        let code = C2Code::from_base_unchecked(base, 2);
        assert!(!code.validate_conditions().is_empty());
    }

    #[test]
    fn mds_exhaustive() {
        let report = verify_mds(&example_code());
        assert_eq!((report.checked, report.total), (28, 28));
        assert!(report.passed());
    }

    #[test]
    fn repair_every_node_at_guaranteed_bandwidth() {
        let code = example_code();
        let mut rng = StdRng::seed_from_u64(31);
        let cw = encode(&code, &random_data(&code, &mut rng)).unwrap();
        assert!(parity_residual(&code, &cw).unwrap().is_zero());
        for failed in 0..8usize {
            let helpers: Vec<usize> = (0..8).filter(|&j| j != failed).collect();
            let report = code.repair(&cw, failed, &helpers).unwrap();
            assert_eq!(&report.recovered, cw.node(failed), "node {failed}");
            assert_eq!(report.bandwidth, 16);
            assert_eq!(report.optimal, 14);
            assert_eq!(report.bandwidth_ratio(), Ratio::new(8, 7));
            assert_eq!(
                Ratio::from_integer(1) + report.epsilon,
                report.bandwidth_ratio()
            );
            // full download from the congruent helper, one projection
            // from everyone else
            let congruent = (failed + 4) % 8;
            assert_eq!(report.downloads[&congruent], 4);
            for (&j, &count) in &report.downloads {
                if j != congruent {
                    assert_eq!(count, 2, "helper {j}");
                }
            }
        }
    }

    #[test]
    fn reconstruct_from_any_k_subset() {
        use crate::codec::reconstruct;
        use itertools::Itertools;
        use std::collections::BTreeMap;

        let code = example_code();
        let mut rng = StdRng::seed_from_u64(35);
        let cw = encode(&code, &random_data(&code, &mut rng)).unwrap();
        for keep in (0..8usize).combinations(6) {
            let available: BTreeMap<usize, Vector> =
                keep.iter().map(|&i| (i, cw.node(i).clone())).collect();
            assert_eq!(reconstruct(&code, &available).unwrap(), cw, "kept {keep:?}");
        }
    }

    #[test]
    fn repair_requires_all_survivors() {
        let code = example_code();
        let cw = Codeword::zero(&code);
        let err = code.repair(&cw, 0, &[1, 2, 3, 4, 5, 6]).unwrap_err();
        assert!(matches!(err, Error::BadHelperSet(_)));
        let err = code.repair(&cw, 0, &[0, 1, 2, 3, 4, 5, 6]).unwrap_err();
        assert!(matches!(err, Error::BadHelperSet(_)));
    }

    #[test]
    fn repair_zero_codeword() {
        let code = example_code();
        let cw = Codeword::zero(&code);
        let helpers: Vec<usize> = (1..8).collect();
        let report = code.repair(&cw, 0, &helpers).unwrap();
        assert!(report.recovered.is_zero());
        assert_eq!(report.bandwidth, 16);
    }

    #[test]
    fn three_copies() {
        // (4,2) base with s = 3: n = 12, bandwidth 2*4 + 9*2 = 26 against
        // the 22-symbol bound, ratio 13/11
        let code = C2Code::new(4, 2, 3, None).unwrap();
        assert_eq!((code.node_count(), code.data_node_count()), (12, 10));
        assert_eq!(code.field().order(), 13);
        let mut rng = StdRng::seed_from_u64(33);
        let cw = encode(&code, &random_data(&code, &mut rng)).unwrap();
        for failed in [0usize, 3, 5, 8, 11] {
            let helpers: Vec<usize> = (0..12).filter(|&j| j != failed).collect();
            let report = code.repair(&cw, failed, &helpers).unwrap();
            assert_eq!(&report.recovered, cw.node(failed));
            assert_eq!(report.bandwidth, 26);
            assert_eq!(report.optimal, 22);
            assert_eq!(report.bandwidth_ratio(), Ratio::new(13, 11));
            assert_eq!(Ratio::from_integer(1) + report.epsilon, Ratio::new(13, 11));
        }
        assert!(verify_mds(&code).passed());
    }

    #[test]
    fn wider_base_code() {
        // base (6,3) has w = r = 3 and N = 27; replicated twice
        let code = C2Code::new(6, 3, 2, None).unwrap();
        assert_eq!((code.node_count(), code.data_node_count()), (12, 9));
        assert!(code.validate_conditions().is_empty());
        let mut rng = StdRng::seed_from_u64(34);
        let cw = encode(&code, &random_data(&code, &mut rng)).unwrap();
        assert!(parity_residual(&code, &cw).unwrap().is_zero());
        for failed in [0usize, 4, 7, 11] {
            let helpers: Vec<usize> = (0..12).filter(|&j| j != failed).collect();
            let report = code.repair(&cw, failed, &helpers).unwrap();
            assert_eq!(&report.recovered, cw.node(failed));
            // (s-1)N + (n-s)N/r = 27 + 10*9
            assert_eq!(report.bandwidth, 117);
            assert_eq!(report.optimal, 99);
        }
    }

    #[test]
    fn single_copy_degenerates_to_base() {
        let code = C2Code::new(4, 2, 1, None).unwrap();
        let base = C1Code::new(4, 2, 3, None).unwrap();
        assert_eq!(code.field().order(), base.field().order());
        for t in 0..2 {
            for i in 0..4 {
                assert_eq!(code.parity_block(t, i), base.parity_block(t, i));
            }
        }
        let mut rng = StdRng::seed_from_u64(32);
        let data = random_data(&code, &mut rng);
        let cw_c2 = encode(&code, &data).unwrap();
        let cw_c1 = encode(&base, &data).unwrap();
        assert_eq!(cw_c2, cw_c1);
        assert_eq!(code.epsilon(), Ratio::from_integer(0));
    }

    #[test]
    fn scaled_diagonal_keeps_power_law() {
        // scaling by x^t preserves upper triangularity and the diagonal
        // power law, so the structural hypotheses stay checkable
        let code = example_code();
        let f = code.field().clone();
        for i in 0..8 {
            let base = code.parity_block(1, i);
            for t in 0..2 {
                let block = code.parity_block(t, i);
                for row in 0..4 {
                    for col in 0..row {
                        assert_eq!(block[(row, col)], f.zero());
                    }
                    assert_eq!(block[(row, row)], f.pow(base[(row, row)], t as u64));
                }
            }
        }
    }
}

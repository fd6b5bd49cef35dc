//! The finite model space and the operators living on it.
//!
//! With inner function z^N times the identity on C^d, the model space is the
//! space of C^d-valued polynomials of degree at most N - 1, written as N
//! coefficient blocks. Operators on it are N x N grids of d x d blocks, and
//! the compression of multiplication by a banded symbol is the block Toeplitz
//! grid with block (i, j) equal to the symbol coefficient at i - j. Under
//! this convention the compressed shift is the grid with identity blocks on
//! the first subdiagonal, the analytic half of a symbol fills the strict
//! lower triangle, and the coanalytic half fills the strict upper triangle.
//!
//! Tall maps (one block column, a map from C^d into the model space) are the
//! bookkeeping device behind the product criteria: products of two tall maps
//! with an adjoint in between produce exactly the rank-one-in-blocks
//! operators the criteria compare.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{vec_norm, ComplexMatrix, Conjugation};
use crate::symbols::LaurentSymbol;

/// Shape of the model space: polynomials of degree <= N - 1 with
/// coefficients in C^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelSpaceSpec {
    model_degree: usize,
    dim: usize,
}

impl ModelSpaceSpec {
    /// N >= 2 so that the shifted model space (where the canonical
    /// conjugation lives) is nontrivial.
    pub fn new(model_degree: usize, dim: usize) -> Result<Self> {
        if model_degree < 2 || dim < 1 {
            return Err(Error::InvalidConfig(format!(
                "model space needs N >= 2 and d >= 1, got N = {model_degree}, d = {dim}"
            )));
        }
        Ok(ModelSpaceSpec { model_degree, dim })
    }

    pub fn model_degree(&self) -> usize {
        self.model_degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Complex dimension N * d of the whole space.
    pub fn total_dim(&self) -> usize {
        self.model_degree * self.dim
    }

    pub fn matches_symbol(&self, s: &LaurentSymbol) -> bool {
        self.model_degree == s.model_degree() && self.dim == s.dim()
    }
}

/// Element of the model space: N coefficient blocks in C^d.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "VectorWire", into = "VectorWire")]
pub struct ModelVector {
    spec: ModelSpaceSpec,
    blocks: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct VectorWire {
    #[serde(rename = "N")]
    n: usize,
    d: usize,
    blocks: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<VectorWire> for ModelVector {
    type Error = Error;

    fn try_from(w: VectorWire) -> Result<Self> {
        let spec = ModelSpaceSpec::new(w.n, w.d)?;
        if w.blocks.len() != w.n || w.blocks.iter().any(|b| b.len() != w.d) {
            return Err(Error::DimensionMismatch {
                context: "model vector wire format",
                expected: format!("{} blocks of length {}", w.n, w.d),
                got: format!("{} blocks", w.blocks.len()),
            });
        }
        let blocks = w
            .blocks
            .iter()
            .map(|b| b.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        let v = ModelVector { spec, blocks };
        for (k, b) in v.blocks.iter().enumerate() {
            for (i, z) in b.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: k, col: i });
                }
            }
        }
        Ok(v)
    }
}

impl From<ModelVector> for VectorWire {
    fn from(v: ModelVector) -> Self {
        VectorWire {
            n: v.spec.model_degree,
            d: v.spec.dim,
            blocks: v
                .blocks
                .iter()
                .map(|b| b.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl ModelVector {
    pub fn zero(spec: ModelSpaceSpec) -> Self {
        ModelVector {
            spec,
            blocks: vec![vec![Complex64::ZERO; spec.dim]; spec.model_degree],
        }
    }

    pub fn from_blocks(spec: ModelSpaceSpec, blocks: Vec<Vec<Complex64>>) -> Result<Self> {
        if blocks.len() != spec.model_degree || blocks.iter().any(|b| b.len() != spec.dim) {
            return Err(Error::DimensionMismatch {
                context: "model vector",
                expected: format!("{} blocks of length {}", spec.model_degree, spec.dim),
                got: format!("{} blocks", blocks.len()),
            });
        }
        Ok(ModelVector { spec, blocks })
    }

    pub fn random<R: Rng + ?Sized>(spec: ModelSpaceSpec, rng: &mut R) -> Self {
        let blocks = (0..spec.model_degree)
            .map(|_| {
                (0..spec.dim)
                    .map(|_| {
                        Complex64::new(
                            2.0 * rng.random::<f64>() - 1.0,
                            2.0 * rng.random::<f64>() - 1.0,
                        )
                    })
                    .collect()
            })
            .collect();
        ModelVector { spec, blocks }
    }

    /// Random element of the shifted model space: block 0 is exactly zero.
    pub fn random_shifted<R: Rng + ?Sized>(spec: ModelSpaceSpec, rng: &mut R) -> Self {
        let mut v = Self::random(spec, rng);
        v.blocks[0] = vec![Complex64::ZERO; spec.dim];
        v
    }

    pub fn spec(&self) -> ModelSpaceSpec {
        self.spec
    }

    pub fn block(&self, k: usize) -> &[Complex64] {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut Vec<Complex64> {
        &mut self.blocks[k]
    }

    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.spec, other.spec, "model vector spec mismatch");
        ModelVector {
            spec: self.spec,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        }
    }
}

/// N x N grid of d x d blocks acting on the model space; block (i, j) maps
/// input block j to a contribution at output block i.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "OperatorWire", into = "OperatorWire")]
pub struct BlockOperator {
    spec: ModelSpaceSpec,
    blocks: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct OperatorWire {
    #[serde(rename = "N")]
    n: usize,
    d: usize,
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl TryFrom<OperatorWire> for BlockOperator {
    type Error = Error;

    fn try_from(w: OperatorWire) -> Result<Self> {
        let spec = ModelSpaceSpec::new(w.n, w.d)?;
        let shape_ok = w.blocks.len() == w.n
            && w.blocks.iter().all(|row| {
                row.len() == w.n && row.iter().all(|m| m.rows() == w.d && m.cols() == w.d)
            });
        if !shape_ok {
            return Err(Error::DimensionMismatch {
                context: "block operator wire format",
                expected: format!("{0}x{0} grid of {1}x{1} blocks", w.n, w.d),
                got: "ragged or mis-sized grid".into(),
            });
        }
        Ok(BlockOperator {
            spec,
            blocks: w.blocks.into_iter().flatten().collect(),
        })
    }
}

impl From<BlockOperator> for OperatorWire {
    fn from(a: BlockOperator) -> Self {
        let n = a.spec.model_degree;
        OperatorWire {
            n,
            d: a.spec.dim,
            blocks: (0..n)
                .map(|i| (0..n).map(|j| a.block(i, j).clone()).collect())
                .collect(),
        }
    }
}

impl BlockOperator {
    pub fn zeros(spec: ModelSpaceSpec) -> Self {
        let n = spec.model_degree;
        BlockOperator {
            spec,
            blocks: vec![ComplexMatrix::zeros(spec.dim, spec.dim); n * n],
        }
    }

    pub fn identity(spec: ModelSpaceSpec) -> Self {
        let mut a = Self::zeros(spec);
        for i in 0..spec.model_degree {
            *a.block_mut(i, i) = ComplexMatrix::identity(spec.dim);
        }
        a
    }

    /// The compressed shift: identity blocks on the first subdiagonal.
    pub fn shift(spec: ModelSpaceSpec) -> Self {
        let mut a = Self::zeros(spec);
        for i in 1..spec.model_degree {
            *a.block_mut(i, i - 1) = ComplexMatrix::identity(spec.dim);
        }
        a
    }

    /// Projection onto the constant block: identity at (0, 0), which equals
    /// I - shift * shift^*.
    pub fn proj_const(spec: ModelSpaceSpec) -> Self {
        let mut a = Self::zeros(spec);
        *a.block_mut(0, 0) = ComplexMatrix::identity(spec.dim);
        a
    }

    /// Projection onto the top-degree block: identity at (N-1, N-1), which
    /// equals I - shift^* * shift.
    pub fn proj_dstar(spec: ModelSpaceSpec) -> Self {
        let n = spec.model_degree;
        let mut a = Self::zeros(spec);
        *a.block_mut(n - 1, n - 1) = ComplexMatrix::identity(spec.dim);
        a
    }

    pub fn random<R: Rng + ?Sized>(spec: ModelSpaceSpec, rng: &mut R) -> Self {
        let n = spec.model_degree;
        let d = spec.dim;
        BlockOperator {
            spec,
            blocks: (0..n * n)
                .map(|_| ComplexMatrix::random(d, d, rng))
                .collect(),
        }
    }

    pub fn spec(&self) -> ModelSpaceSpec {
        self.spec
    }

    pub fn block(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[i * self.spec.model_degree + j]
    }

    pub fn block_mut(&mut self, i: usize, j: usize) -> &mut ComplexMatrix {
        &mut self.blocks[i * self.spec.model_degree + j]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.spec.model_degree;
        let mut out = Self::zeros(self.spec);
        for i in 0..n {
            for j in 0..n {
                *out.block_mut(j, i) = self.block(i, j).adjoint();
            }
        }
        out
    }

    /// The defect A - shift * A * shift^*, computed by the index rule:
    /// block (i, j) of the result is A(i, j) - A(i-1, j-1), with out-of-range
    /// indices contributing zero. A is block Toeplitz exactly when the
    /// result vanishes on the corner i >= 1, j >= 1.
    pub fn delta(&self) -> Self {
        let n = self.spec.model_degree;
        let mut out = Self::zeros(self.spec);
        for i in 0..n {
            for j in 0..n {
                *out.block_mut(i, j) = if i >= 1 && j >= 1 {
                    self.block(i, j) - self.block(i - 1, j - 1)
                } else {
                    self.block(i, j).clone()
                };
            }
        }
        out
    }

    pub fn apply(&self, v: &ModelVector) -> ModelVector {
        assert_eq!(self.spec, v.spec(), "operator/vector spec mismatch");
        let n = self.spec.model_degree;
        let mut out = ModelVector::zero(self.spec);
        for i in 0..n {
            let mut acc = vec![Complex64::ZERO; self.spec.dim];
            for j in 0..n {
                let contrib = self.block(i, j).matvec(v.block(j));
                for (a, c) in acc.iter_mut().zip(contrib) {
                    *a += c;
                }
            }
            *out.block_mut(i) = acc;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| {
                let f = m.frobenius_norm();
                f * f
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Flattens to the dense (N d) x (N d) matrix.
    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.spec.model_degree;
        let d = self.spec.dim;
        ComplexMatrix::from_fn(n * d, n * d, |r, c| {
            self.block(r / d, c / d)[(r % d, c % d)]
        })
    }

    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.bitwise_eq(b))
    }
}

impl Add for &BlockOperator {
    type Output = BlockOperator;

    fn add(self, rhs: &BlockOperator) -> BlockOperator {
        assert_eq!(self.spec, rhs.spec, "operator spec mismatch");
        BlockOperator {
            spec: self.spec,
            blocks: self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &BlockOperator {
    type Output = BlockOperator;

    fn sub(self, rhs: &BlockOperator) -> BlockOperator {
        assert_eq!(self.spec, rhs.spec, "operator spec mismatch");
        BlockOperator {
            spec: self.spec,
            blocks: self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &BlockOperator {
    type Output = BlockOperator;

    fn mul(self, rhs: &BlockOperator) -> BlockOperator {
        assert_eq!(self.spec, rhs.spec, "operator spec mismatch");
        let n = self.spec.model_degree;
        let mut out = BlockOperator::zeros(self.spec);
        for i in 0..n {
            for k in 0..n {
                let a = self.block(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.block(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    *out.block_mut(i, j) = out.block(i, j) + &(a * b);
                }
            }
        }
        out
    }
}

/// Compression of multiplication by the symbol: the block Toeplitz grid with
/// block (i, j) equal to the coefficient at i - j.
pub fn build_mtto(s: &LaurentSymbol) -> Result<BlockOperator> {
    let spec = ModelSpaceSpec::new(s.model_degree(), s.dim())?;
    let n = spec.model_degree();
    let mut a = BlockOperator::zeros(spec);
    for (idx, m) in s.coeffs() {
        for i in 0..n {
            let j = i as i64 - idx;
            if (0..n as i64).contains(&j) {
                *a.block_mut(i, j as usize) = m.clone();
            }
        }
    }
    Ok(a)
}

/// One block column: a map from C^d into the model space, block r carrying
/// the coefficient of z^r.
#[derive(Clone, Debug)]
pub struct TallMap {
    spec: ModelSpaceSpec,
    blocks: Vec<ComplexMatrix>,
}

impl TallMap {
    pub fn zero(spec: ModelSpaceSpec) -> Self {
        TallMap {
            spec,
            blocks: vec![ComplexMatrix::zeros(spec.dim, spec.dim); spec.model_degree],
        }
    }

    /// x -> s(z) x for an analytic symbol: block r is the coefficient at r.
    /// Coanalytic coefficients have nowhere to go in a single column, so
    /// they are rejected.
    pub fn from_analytic(s: &LaurentSymbol) -> Result<Self> {
        let spec = ModelSpaceSpec::new(s.model_degree(), s.dim())?;
        let mut t = Self::zero(spec);
        for (idx, m) in s.coeffs() {
            if idx < 0 {
                return Err(Error::NotAnalytic { index: idx });
            }
            t.blocks[idx as usize] = m.clone();
        }
        Ok(t)
    }

    /// x -> z h(z) x for an analytic half h given by its coefficient list:
    /// block 0 is zero and block r is half[r - 1]. This is the column map of
    /// the shifted analytic half z Phi_plus.
    pub fn from_shifted_half(spec: ModelSpaceSpec, half: &[ComplexMatrix]) -> Result<Self> {
        Self::check_half(spec, half)?;
        let mut t = Self::zero(spec);
        for (k, m) in half.iter().enumerate() {
            t.blocks[k + 1] = m.clone();
        }
        Ok(t)
    }

    /// The column map of the canonical conjugate of the shifted half: block
    /// 0 is zero and block N-1-k is sandwich(half[k]). The shifted half
    /// z h(z) lives in the shifted model space blockwise, and the canonical
    /// conjugation reverses block order while sandwiching each coefficient;
    /// under compatibility the blocks reduce to adjoints of the half.
    pub fn from_shifted_half_conjugated(
        spec: ModelSpaceSpec,
        g: &Conjugation,
        half: &[ComplexMatrix],
    ) -> Result<Self> {
        Self::check_half(spec, half)?;
        if g.dim() != spec.dim {
            return Err(Error::DimensionMismatch {
                context: "conjugated half column",
                expected: format!("conjugation on C^{}", spec.dim),
                got: format!("conjugation on C^{}", g.dim()),
            });
        }
        let n = spec.model_degree;
        let mut t = Self::zero(spec);
        for (k, m) in half.iter().enumerate() {
            t.blocks[n - 1 - k] = g.sandwich(m);
        }
        Ok(t)
    }

    fn check_half(spec: ModelSpaceSpec, half: &[ComplexMatrix]) -> Result<()> {
        if half.len() != spec.model_degree - 1
            || half
                .iter()
                .any(|m| m.rows() != spec.dim || m.cols() != spec.dim)
        {
            return Err(Error::DimensionMismatch {
                context: "half coefficient list",
                expected: format!(
                    "{} blocks of shape {1}x{1}",
                    spec.model_degree - 1,
                    spec.dim
                ),
                got: format!("{} blocks", half.len()),
            });
        }
        Ok(())
    }

    /// Embedding of the constants: identity at block 0.
    pub fn constants_embedding(spec: ModelSpaceSpec) -> Self {
        let mut t = Self::zero(spec);
        t.blocks[0] = ComplexMatrix::identity(spec.dim);
        t
    }

    /// Isometry onto the top-degree block: identity at block N-1.
    pub fn top_embedding(spec: ModelSpaceSpec) -> Self {
        let n = spec.model_degree;
        let mut t = Self::zero(spec);
        t.blocks[n - 1] = ComplexMatrix::identity(spec.dim);
        t
    }

    pub fn spec(&self) -> ModelSpaceSpec {
        self.spec
    }

    pub fn block(&self, r: usize) -> &ComplexMatrix {
        &self.blocks[r]
    }

    pub fn apply(&self, x: &[Complex64]) -> ModelVector {
        assert_eq!(x.len(), self.spec.dim, "tall map input dimension");
        let mut v = ModelVector::zero(self.spec);
        for (r, m) in self.blocks.iter().enumerate() {
            *v.block_mut(r) = m.matvec(x);
        }
        v
    }

    /// self composed with the adjoint of other, an operator on the model
    /// space: block (i, j) is self[i] * other[j]^*.
    pub fn compose_adjoint(&self, other: &TallMap) -> BlockOperator {
        assert_eq!(self.spec, other.spec, "tall map spec mismatch");
        let n = self.spec.model_degree;
        let other_adj: Vec<ComplexMatrix> =
            other.blocks.iter().map(ComplexMatrix::adjoint).collect();
        let mut out = BlockOperator::zeros(self.spec);
        for i in 0..n {
            for (j, adj) in other_adj.iter().enumerate() {
                *out.block_mut(i, j) = &self.blocks[i] * adj;
            }
        }
        out
    }

    /// The d x d composition other^* . self, i.e. sum of other[r]^* self[r].
    pub fn gram_with(&self, other: &TallMap) -> ComplexMatrix {
        assert_eq!(self.spec, other.spec, "tall map spec mismatch");
        let d = self.spec.dim;
        let mut acc = ComplexMatrix::zeros(d, d);
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            acc = &acc + &(&b.adjoint() * a);
        }
        acc
    }
}

/// The canonical conjugation on the shifted model space: for
/// f = sum_{k>=1} a_k z^k the image has block N - k equal to Gamma(a_k).
/// Inputs with a nonzero constant block are outside the domain and are
/// rejected rather than projected.
pub fn canonical_conjugation_apply(g: &Conjugation, f: &ModelVector) -> Result<ModelVector> {
    let spec = f.spec();
    if g.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            context: "canonical conjugation",
            expected: format!("conjugation on C^{}", spec.dim()),
            got: format!("conjugation on C^{}", g.dim()),
        });
    }
    let head = vec_norm(f.block(0));
    if head != 0.0 {
        return Err(Error::OutsideShiftedModelSpace { norm: head });
    }
    let n = spec.model_degree();
    let mut out = ModelVector::zero(spec);
    for k in 1..n {
        *out.block_mut(n - k) = g.apply(f.block(k));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn c1(re: f64, im: f64) -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![c(re, im)]])
    }

    fn scalar_symbol(model_degree: usize, entries: &[(i64, f64, f64)]) -> LaurentSymbol {
        let mut s = LaurentSymbol::zero(model_degree, 1);
        for &(n, re, im) in entries {
            s.set_coeff(n, c1(re, im)).unwrap();
        }
        s
    }

    fn scalar_entries(a: &BlockOperator) -> Vec<Vec<Complex64>> {
        let n = a.spec().model_degree();
        (0..n)
            .map(|i| (0..n).map(|j| a.block(i, j)[(0, 0)]).collect())
            .collect()
    }

    /// Independent route to the compression: multiply the symbol against the
    /// input polynomial as Laurent series, then drop coefficients outside
    /// 0..N-1. Exercises none of the block-grid indexing.
    fn multiply_and_project(s: &LaurentSymbol, v: &ModelVector) -> ModelVector {
        let spec = v.spec();
        let n = spec.model_degree() as i64;
        let mut out = ModelVector::zero(spec);
        for (idx, m) in s.coeffs() {
            for j in 0..n {
                let target = idx + j;
                if (0..n).contains(&target) {
                    let contrib = m.matvec(v.block(j as usize));
                    for (acc, z) in out.block_mut(target as usize).iter_mut().zip(contrib) {
                        *acc += z;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn compression_matches_hand_example() {
        let s = scalar_symbol(2, &[(-1, 0.0, 3.0), (0, 1.0, 0.0), (1, 2.0, 0.0)]);
        let a = build_mtto(&s).unwrap();
        let e = scalar_entries(&a);
        assert_eq!(e[0], vec![c(1.0, 0.0), c(0.0, 3.0)]);
        assert_eq!(e[1], vec![c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn compression_of_constant_identity_is_identity() {
        let s = LaurentSymbol::monomial(4, 3, 0, ComplexMatrix::identity(3)).unwrap();
        let a = build_mtto(&s).unwrap();
        assert!(a.bitwise_eq(&BlockOperator::identity(a.spec())));
    }

    #[test]
    fn shift_symbol_gives_the_shift_and_halves_land_in_triangles() {
        let spec = ModelSpaceSpec::new(3, 1).unwrap();
        let s = build_mtto(&LaurentSymbol::shift(3, 1)).unwrap();
        assert!(s.bitwise_eq(&BlockOperator::shift(spec)));
        let e = scalar_entries(&s);
        assert_eq!(e[0], vec![c(0.0, 0.0); 3]);
        assert_eq!(e[1], vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(e[2], vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);

        // First analytic coefficient at block (1, 0), first coanalytic
        // (adjointed) coefficient at block (0, 1).
        let t = scalar_symbol(3, &[(1, 5.0, 0.0), (-1, 7.0, 0.0)]);
        let a = build_mtto(&t).unwrap();
        assert_eq!(a.block(1, 0)[(0, 0)], c(5.0, 0.0));
        assert_eq!(a.block(0, 1)[(0, 0)], c(7.0, 0.0));
    }

    #[test]
    fn projections_are_the_shift_defects() {
        for (n, d) in [(2, 1), (3, 2), (5, 3)] {
            let spec = ModelSpaceSpec::new(n, d).unwrap();
            let id = BlockOperator::identity(spec);
            let s = BlockOperator::shift(spec);
            let p0 = &id - &(&s * &s.adjoint());
            assert!(p0.bitwise_eq(&BlockOperator::proj_const(spec)));
            let pd = &id - &(&s.adjoint() * &s);
            assert!(pd.bitwise_eq(&BlockOperator::proj_dstar(spec)));
        }
    }

    #[test]
    fn delta_by_indices_equals_delta_by_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1FF);
        for _ in 0..50 {
            let n = 2 + (rng.random::<u32>() as usize) % 6;
            let d = 1 + (rng.random::<u32>() as usize) % 3;
            let spec = ModelSpaceSpec::new(n, d).unwrap();
            let a = BlockOperator::random(spec, &mut rng);
            let s = BlockOperator::shift(spec);
            let via_ops = &a - &(&(&s * &a) * &s.adjoint());
            let diff = (&a.delta().to_dense() - &via_ops.to_dense()).frobenius_norm();
            assert!(diff == 0.0, "index rule must match S A S* exactly");
        }
    }

    #[test]
    fn delta_of_known_operators() {
        let spec = ModelSpaceSpec::new(3, 2).unwrap();
        let id = BlockOperator::identity(spec);
        assert!(id.delta().bitwise_eq(&BlockOperator::proj_const(spec)));

        let s = BlockOperator::shift(spec);
        let ds = s.delta();
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) == (1, 0) {
                    assert!(ds.block(i, j).bitwise_eq(&ComplexMatrix::identity(2)));
                } else {
                    assert!(ds.block(i, j).is_zero(), "unexpected block at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn delta_of_a_compression_lives_on_the_border() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xB0DE);
        let s = LaurentSymbol::random(5, 2, &mut rng);
        let dec = s.decompose();
        let da = build_mtto(&s).unwrap().delta();
        let n = 5;
        for i in 0..n {
            for j in 0..n {
                let expected = match (i, j) {
                    (0, 0) => dec.phi0.clone(),
                    (i, 0) => dec.plus[i - 1].clone(),
                    (0, j) => dec.minus[j - 1].adjoint(),
                    _ => ComplexMatrix::zeros(2, 2),
                };
                assert!(da.block(i, j).bitwise_eq(&expected), "block ({i},{j})");
            }
        }
    }

    #[test]
    fn apply_matches_polynomial_multiplication_then_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xAB1DE);
        for _ in 0..50 {
            let n = 2 + (rng.random::<u32>() as usize) % 6;
            let d = 1 + (rng.random::<u32>() as usize) % 4;
            let s = LaurentSymbol::random(n, d, &mut rng);
            let spec = ModelSpaceSpec::new(n, d).unwrap();
            let v = ModelVector::random(spec, &mut rng);
            let via_blocks = build_mtto(&s).unwrap().apply(&v);
            let via_poly = multiply_and_project(&s, &v);
            let diff = via_blocks.sub(&via_poly).norm();
            assert!(diff <= 1e-12 * v.norm().max(1.0), "diff {diff}");
        }
    }

    #[test]
    fn compression_respects_adjoints_and_commutes_with_shift_when_analytic() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xAD01);
        for _ in 0..40 {
            let n = 2 + (rng.random::<u32>() as usize) % 5;
            let d = 1 + (rng.random::<u32>() as usize) % 3;
            let s = LaurentSymbol::random(n, d, &mut rng);
            let a = build_mtto(&s).unwrap();
            assert!(a
                .adjoint()
                .bitwise_eq(&build_mtto(&s.adjoint_symbol()).unwrap()));

            // Restrict to the analytic part; its compression commutes with
            // the shift, and exactly so at the block level.
            let mut analytic = LaurentSymbol::zero(n, d);
            for (idx, m) in s.coeffs() {
                if idx >= 0 {
                    analytic.set_coeff(idx, m.clone()).unwrap();
                }
            }
            let b = build_mtto(&analytic).unwrap();
            let shift = BlockOperator::shift(b.spec());
            assert!((&b * &shift).bitwise_eq(&(&shift * &b)));
        }

        // The coanalytic shift does not commute: S S* != S* S.
        let spec = ModelSpaceSpec::new(3, 1).unwrap();
        let s = BlockOperator::shift(spec);
        let zbar = build_mtto(&scalar_symbol(3, &[(-1, 1.0, 0.0)])).unwrap();
        assert!(!(&zbar * &s).bitwise_eq(&(&s * &zbar)));
    }

    #[test]
    fn column_maps_place_coefficients() {
        let spec = ModelSpaceSpec::new(3, 1).unwrap();
        let half = vec![c1(2.0, 0.0), c1(1.0, 0.0)];
        let t = TallMap::from_shifted_half(spec, &half).unwrap();
        assert!(t.block(0).is_zero());
        assert!(t.block(1).bitwise_eq(&c1(2.0, 0.0)));
        assert!(t.block(2).bitwise_eq(&c1(1.0, 0.0)));

        // Applying to 1 gives the polynomial 2z + z^2.
        let v = t.apply(&[c(1.0, 0.0)]);
        assert_eq!(v.block(0)[0], c(0.0, 0.0));
        assert_eq!(v.block(1)[0], c(2.0, 0.0));
        assert_eq!(v.block(2)[0], c(1.0, 0.0));

        // Conjugated: half (i, 2) lands as blocks (0, 2, -i).
        let g = Conjugation::standard(1);
        let half2 = vec![c1(0.0, 1.0), c1(2.0, 0.0)];
        let u = TallMap::from_shifted_half_conjugated(spec, &g, &half2).unwrap();
        assert!(u.block(0).is_zero());
        assert!(u.block(1).bitwise_eq(&c1(2.0, 0.0)));
        assert!(u.block(2).bitwise_eq(&c1(0.0, -1.0)));

        let zero = TallMap::from_shifted_half_conjugated(
            spec,
            &g,
            &[ComplexMatrix::zeros(1, 1), ComplexMatrix::zeros(1, 1)],
        )
        .unwrap();
        assert!((0..3).all(|r| zero.block(r).is_zero()));

        assert!(TallMap::from_shifted_half(spec, &half2[..1]).is_err());

        let coanalytic = scalar_symbol(3, &[(-1, 1.0, 0.0)]);
        assert!(matches!(
            TallMap::from_analytic(&coanalytic),
            Err(Error::NotAnalytic { index: -1 })
        ));
    }

    #[test]
    fn embeddings_satisfy_their_gram_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE4B);
        for (n, d) in [(2, 1), (3, 2), (6, 4)] {
            let spec = ModelSpaceSpec::new(n, d).unwrap();
            let j0 = TallMap::constants_embedding(spec);
            let v = TallMap::top_embedding(spec);
            assert!(j0.gram_with(&j0).bitwise_eq(&ComplexMatrix::identity(d)));
            assert!(v.gram_with(&v).bitwise_eq(&ComplexMatrix::identity(d)));
            assert!(j0
                .compose_adjoint(&j0)
                .bitwise_eq(&BlockOperator::proj_const(spec)));
            assert!(v
                .compose_adjoint(&v)
                .bitwise_eq(&BlockOperator::proj_dstar(spec)));

            // Column-map identities for a random analytic symbol s:
            // J_s J0^* = A_s P0 and J0 J_s^* = P0 A_s^*.
            let mut analytic = LaurentSymbol::zero(n, d);
            for idx in 0..n as i64 {
                analytic
                    .set_coeff(idx, ComplexMatrix::random(d, d, &mut rng))
                    .unwrap();
            }
            let js = TallMap::from_analytic(&analytic).unwrap();
            let a = build_mtto(&analytic).unwrap();
            let p0 = BlockOperator::proj_const(spec);
            assert!(js.compose_adjoint(&j0).bitwise_eq(&(&a * &p0)));
            assert!(j0.compose_adjoint(&js).bitwise_eq(&(&p0 * &a.adjoint())));
        }
    }

    #[test]
    fn canonical_conjugation_reverses_and_conjugates_blocks() {
        let spec = ModelSpaceSpec::new(3, 1).unwrap();
        let g = Conjugation::standard(1);
        let f = ModelVector::from_blocks(
            spec,
            vec![vec![c(0.0, 0.0)], vec![c(1.0, 2.0)], vec![c(3.0, -4.0)]],
        )
        .unwrap();
        let out = canonical_conjugation_apply(&g, &f).unwrap();
        assert_eq!(out.block(0)[0], c(0.0, 0.0));
        assert_eq!(out.block(1)[0], c(3.0, 4.0));
        assert_eq!(out.block(2)[0], c(1.0, -2.0));

        let bad = ModelVector::from_blocks(
            spec,
            vec![vec![c(1.0, 0.0)], vec![c(0.0, 0.0)], vec![c(0.0, 0.0)]],
        )
        .unwrap();
        assert!(matches!(
            canonical_conjugation_apply(&g, &bad),
            Err(Error::OutsideShiftedModelSpace { .. })
        ));
    }

    #[test]
    fn canonical_conjugation_is_an_isometric_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x15C);
        for _ in 0..100 {
            let n = 2 + (rng.random::<u32>() as usize) % 7;
            let d = 1 + (rng.random::<u32>() as usize) % 4;
            let spec = ModelSpaceSpec::new(n, d).unwrap();
            let g = Conjugation::random(d, &mut rng);
            let f = ModelVector::random_shifted(spec, &mut rng);
            let once = canonical_conjugation_apply(&g, &f).unwrap();
            assert!((once.norm() - f.norm()).abs() <= 1e-12 * f.norm().max(1.0));
            let twice = canonical_conjugation_apply(&g, &once).unwrap();
            assert!(twice.sub(&f).norm() <= 1e-12 * f.norm().max(1.0));
        }
    }

    #[test]
    fn operator_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let spec = ModelSpaceSpec::new(3, 2).unwrap();
        let a = BlockOperator::random(spec, &mut rng);
        let text = serde_json::to_string(&a).unwrap();
        let back: BlockOperator = serde_json::from_str(&text).unwrap();
        assert!(a.bitwise_eq(&back));

        let v = ModelVector::random(spec, &mut rng);
        let vtext = serde_json::to_string(&v).unwrap();
        let vback: ModelVector = serde_json::from_str(&vtext).unwrap();
        assert!(v.sub(&vback).norm() == 0.0);
    }
}

//! Dense complex matrices and conjugations on C^d.
//!
//! Everything downstream works with small dense blocks: coefficient matrices
//! of operator symbols, the d x d blocks of an N x N block operator, the
//! unitary defining a conjugation. The representation is a row-major
//! `Vec<Complex64>`; block sizes stay in the single digits and the only
//! genuinely hot path (the FFT apply) runs on scalar columns anyway.
//!
//! A conjugation on C^d is an antilinear involution Gamma(x) = U conj(x),
//! which forces U to be unitary and symmetric. Conjugations act on matrices
//! through the sandwich M -> U conj(M) conj(U), the matrix of Gamma M Gamma.
//! A matrix M is called Gamma-compatible when the sandwich of M equals M^*;
//! for U = I that is plain complex symmetry.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major dense matrix over the complex numbers.
///
/// Serializes as `{"rows": r, "cols": c, "entries": [[re, im], ...]}` with
/// entries in row-major order.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixWire", into = "MatrixWire")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixWire> for ComplexMatrix {
    type Error = Error;

    fn try_from(w: MatrixWire) -> Result<Self> {
        if w.entries.len() != w.rows * w.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix wire format",
                expected: format!(
                    "{} entries for a {}x{} matrix",
                    w.rows * w.cols,
                    w.rows,
                    w.cols
                ),
                got: format!("{} entries", w.entries.len()),
            });
        }
        let data = w
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let m = ComplexMatrix {
            rows: w.rows,
            cols: w.cols,
            data,
        };
        m.check_finite()?;
        Ok(m)
    }
}

impl From<ComplexMatrix> for MatrixWire {
    fn from(m: ComplexMatrix) -> Self {
        MatrixWire {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Builds from nested rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged rows in matrix literal"
        );
        ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Entries with both parts uniform in [-1, 1].
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| {
            Complex64::new(
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
            )
        })
    }

    /// Random unitary via modified Gram-Schmidt on a random matrix. At the
    /// sizes used here (n <= 4) the random columns are independent with
    /// overwhelming margin, so no rank-deficiency retry is needed.
    pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let m = Self::random(n, n, rng);
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| (0..n).map(|i| m[(i, j)]).collect())
            .collect();
        for j in 0..n {
            let (settled, rest) = cols.split_at_mut(j);
            let col = &mut rest[0];
            for q in settled.iter() {
                let dot: Complex64 = q.iter().zip(col.iter()).map(|(q, v)| q.conj() * v).sum();
                for (v, q) in col.iter_mut().zip(q) {
                    *v -= dot * q;
                }
            }
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for entry in col.iter_mut() {
                *entry /= norm;
            }
        }
        Self::from_fn(n, n, |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.cols == 0 {
            return Ok(());
        }
        for (idx, z) in self.data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / self.cols,
                    col: idx % self.cols,
                });
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, z: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|w| w * z).collect(),
        }
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, x)| a * x).sum()
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Exact equality of shape and every entry under f64 `==`.
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "add shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "sub shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-Complex64::ONE)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Residual relative to max(1, scale). Scales below one degrade to an
/// absolute comparison instead of amplifying noise near zero.
pub fn rel_residual(residual: f64, scale: f64) -> f64 {
    residual / scale.max(1.0)
}

/// Frobenius norm of AB - BA relative to ||A|| * ||B||.
pub fn commutation_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let comm = &(a * b) - &(b * a);
    rel_residual(
        comm.frobenius_norm(),
        a.frobenius_norm() * b.frobenius_norm(),
    )
}

pub fn commutes(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    commutation_residual(a, b) <= tol
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Antilinear involution Gamma(x) = U conj(x) on C^d.
///
/// Construction validates that U is unitary and that Gamma squares to the
/// identity (equivalently, U is symmetric). Serializes as `{"d": .., "U": ..}`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "ConjugationWire", into = "ConjugationWire")]
pub struct Conjugation {
    d: usize,
    u: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct ConjugationWire {
    d: usize,
    #[serde(rename = "U")]
    u: ComplexMatrix,
}

impl TryFrom<ConjugationWire> for Conjugation {
    type Error = Error;

    fn try_from(w: ConjugationWire) -> Result<Self> {
        if w.u.rows() != w.d || w.u.cols() != w.d {
            return Err(Error::DimensionMismatch {
                context: "conjugation wire format",
                expected: format!("{0}x{0} matrix U", w.d),
                got: format!("{}x{}", w.u.rows(), w.u.cols()),
            });
        }
        Conjugation::new(w.u)
    }
}

impl From<Conjugation> for ConjugationWire {
    fn from(g: Conjugation) -> Self {
        ConjugationWire { d: g.d, u: g.u }
    }
}

impl Conjugation {
    /// Defect tolerance accepted by [`Conjugation::new`]. Far looser than
    /// machine precision so that conjugations built numerically (random
    /// unitaries, JSON round trips through decimal) still validate, yet tight
    /// enough that nothing passes which is not an involution for all
    /// practical purposes.
    pub const VALIDATION_TOL: f64 = 1e-10;

    pub fn new(u: ComplexMatrix) -> Result<Self> {
        if !u.is_square() || u.rows() == 0 {
            return Err(Error::DimensionMismatch {
                context: "conjugation",
                expected: "nonempty square U".into(),
                got: format!("{}x{}", u.rows(), u.cols()),
            });
        }
        u.check_finite()?;
        let d = u.rows();
        let eye = ComplexMatrix::identity(d);
        let unitary_defect = (&(&u * &u.adjoint()) - &eye).frobenius_norm();
        if unitary_defect > Self::VALIDATION_TOL {
            return Err(Error::NotConjugation {
                reason: "U is not unitary",
                residual: unitary_defect,
            });
        }
        // For unitary U, involutivity of x -> U conj(x) is exactly
        // U conj(U) = I, which is in turn equivalent to U being symmetric.
        let involution_defect = (&(&u * &u.conj()) - &eye).frobenius_norm();
        if involution_defect > Self::VALIDATION_TOL {
            return Err(Error::NotConjugation {
                reason: "U conj(U) != I, the map does not square to the identity",
                residual: involution_defect,
            });
        }
        Ok(Conjugation { d, u })
    }

    /// The componentwise conjugation x -> conj(x), U = I.
    pub fn standard(d: usize) -> Self {
        Conjugation {
            d,
            u: ComplexMatrix::identity(d),
        }
    }

    /// Random conjugation: U = V V^T for a random unitary V, which is
    /// symmetric and unitary by construction.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let v = ComplexMatrix::random_unitary(d, rng);
        let u = &v * &v.transpose();
        Conjugation::new(u).expect("V V^T is a symmetric unitary")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    /// Gamma(x) = U conj(x).
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let conjugated: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        self.u.matvec(&conjugated)
    }

    /// Matrix of Gamma M Gamma, namely U conj(M) conj(U). The sandwich is
    /// conjugate-linear, multiplicative, involutive, and commutes with the
    /// adjoint.
    pub fn sandwich(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.u * &m.conj()) * &self.u.conj()
    }

    /// Nearest Gamma-compatible matrix in the averaging sense:
    /// (M + sandwich(M^*)) / 2. Fixed points are exactly the compatible
    /// matrices. For U = I this is symmetrization (M + M^T) / 2.
    pub fn symmetrize(&self, m: &ComplexMatrix) -> ComplexMatrix {
        (m + &self.sandwich(&m.adjoint())).scale(Complex64::new(0.5, 0.0))
    }

    /// Relative defect of sandwich(M) = M^*.
    pub fn compatibility_residual(&self, m: &ComplexMatrix) -> f64 {
        let defect = (&self.sandwich(m) - &m.adjoint()).frobenius_norm();
        rel_residual(defect, m.frobenius_norm())
    }

    pub fn is_compatible(&self, m: &ComplexMatrix, tol: f64) -> bool {
        self.compatibility_residual(m) <= tol
    }
}

impl fmt::Debug for Conjugation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Conjugation(d = {}, U = {:?})", self.d, self.u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_a() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, -1.0)],
        ])
    }

    #[test]
    fn matmul_matches_hand_computation() {
        let a = sample_a();
        let b = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(3.0, 0.0), c(0.0, 0.0)],
        ]);
        let prod = &a * &b;
        let expected = ComplexMatrix::from_rows(vec![
            vec![c(7.0, 1.0), c(-1.0, 1.0)],
            vec![c(3.0, -3.0), c(0.0, 0.0)],
        ]);
        assert!(prod.bitwise_eq(&expected), "got {prod:?}");
    }

    #[test]
    fn adjoint_matches_hand_computation() {
        let a = sample_a();
        let expected = ComplexMatrix::from_rows(vec![
            vec![c(1.0, -1.0), c(0.0, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 1.0)],
        ]);
        assert!(a.adjoint().bitwise_eq(&expected));
        assert_eq!(a.frobenius_norm(), 8.0_f64.sqrt());
    }

    #[test]
    fn json_round_trip_is_bitwise() {
        let a = sample_a();
        let text = serde_json::to_string(&a).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert!(a.bitwise_eq(&back));

        let frozen = r#"{"rows":2,"cols":2,"entries":[[1,1],[2,0],[0,0],[1,-1]]}"#;
        let parsed: ComplexMatrix = serde_json::from_str(frozen).unwrap();
        assert!(parsed.bitwise_eq(&a));
    }

    #[test]
    fn json_rejects_wrong_entry_count() {
        let bad = r#"{"rows":2,"cols":2,"entries":[[1,0]]}"#;
        let err = serde_json::from_str::<ComplexMatrix>(bad);
        assert!(err.is_err());
    }

    #[test]
    fn conjugation_accepts_symmetric_unitaries_only() {
        assert!(Conjugation::new(ComplexMatrix::identity(3)).is_ok());

        // diag(1, i) is symmetric unitary, hence a valid conjugation.
        let diag = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 1.0)],
        ]);
        assert!(Conjugation::new(diag).is_ok());

        // A rotation is unitary but not symmetric: the map fails to square
        // to the identity.
        let rot = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!(matches!(
            Conjugation::new(rot),
            Err(Error::NotConjugation { .. })
        ));

        let shear = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(matches!(
            Conjugation::new(shear),
            Err(Error::NotConjugation { .. })
        ));
    }

    #[test]
    fn random_conjugations_are_involutions_on_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1409);
        for _ in 0..200 {
            let d = 1 + (rng.random::<u32>() as usize) % 4;
            let g = Conjugation::random(d, &mut rng);
            let v: Vec<Complex64> = (0..d)
                .map(|_| {
                    c(
                        2.0 * rng.random::<f64>() - 1.0,
                        2.0 * rng.random::<f64>() - 1.0,
                    )
                })
                .collect();
            let twice = g.apply(&g.apply(&v));
            let defect = vec_norm(&vec_sub(&twice, &v));
            assert!(defect <= 1e-12 * vec_norm(&v).max(1.0), "defect {defect}");
        }
    }

    #[test]
    fn sandwich_is_multiplicative_involutive_and_star_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x2718);
        for _ in 0..100 {
            let d = 1 + (rng.random::<u32>() as usize) % 4;
            let g = Conjugation::random(d, &mut rng);
            let a = ComplexMatrix::random(d, d, &mut rng);
            let b = ComplexMatrix::random(d, d, &mut rng);

            let lhs = g.sandwich(&(&a * &b));
            let rhs = &g.sandwich(&a) * &g.sandwich(&b);
            assert!((&lhs - &rhs).frobenius_norm() <= 1e-12);

            let back = g.sandwich(&g.sandwich(&a));
            assert!((&back - &a).frobenius_norm() <= 1e-12);

            // sandwich(M^*) = sandwich(M)^* relies on U being symmetric.
            let star = g.sandwich(&a.adjoint());
            assert!((&star - &g.sandwich(&a).adjoint()).frobenius_norm() <= 1e-12);

            // Conjugate-linearity in the scalar.
            let z = c(0.7, -1.3);
            let scaled = g.sandwich(&a.scale(z));
            assert!((&scaled - &g.sandwich(&a).scale(z.conj())).frobenius_norm() <= 1e-12);
        }
    }

    #[test]
    fn symmetrize_lands_on_compatible_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x31415);
        for _ in 0..100 {
            let d = 1 + (rng.random::<u32>() as usize) % 4;
            let g = Conjugation::random(d, &mut rng);
            let m = ComplexMatrix::random(d, d, &mut rng);
            let s = g.symmetrize(&m);
            assert!(g.is_compatible(&s, 1e-12));
            // Fixed point: symmetrizing again changes nothing beyond rounding.
            let again = g.symmetrize(&s);
            assert!((&again - &s).frobenius_norm() <= 1e-13);
        }

        // For U = I compatibility is complex symmetry.
        let g = Conjugation::standard(2);
        let sym = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(3.0, -1.0)],
            vec![c(3.0, -1.0), c(0.0, 5.0)],
        ]);
        assert!(g.is_compatible(&sym, 0.0));
        let asym = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(!g.is_compatible(&asym, 1e-9));
    }

    #[test]
    fn commutation_check_on_known_pairs() {
        let id = ComplexMatrix::identity(2);
        let a = sample_a();
        assert!(commutes(&id, &a, 1e-15));

        let nilpotent = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        let diag = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ]);
        assert!(!commutes(&nilpotent, &diag, 1e-9));
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=4 {
            let v = ComplexMatrix::random_unitary(d, &mut rng);
            let defect = (&(&v * &v.adjoint()) - &ComplexMatrix::identity(d)).frobenius_norm();
            assert!(defect <= 1e-13, "d = {d}, defect {defect}");
        }
    }

    proptest! {
        #[test]
        fn adjoint_is_involutive_and_antimultiplicative(
            rows in 1_usize..5,
            inner in 1_usize..5,
            cols in 1_usize..5,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = ComplexMatrix::random(rows, inner, &mut rng);
            let b = ComplexMatrix::random(inner, cols, &mut rng);
            // Conjugate transpose twice only flips sign bits back.
            prop_assert!(a.adjoint().adjoint().bitwise_eq(&a));
            let lhs = (&a * &b).adjoint();
            let rhs = &b.adjoint() * &a.adjoint();
            prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-12);
        }

        #[test]
        fn frobenius_norm_is_submultiplicative(
            n in 1_usize..5,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = ComplexMatrix::random(n, n, &mut rng);
            let b = ComplexMatrix::random(n, n, &mut rng);
            let prod = (&a * &b).frobenius_norm();
            prop_assert!(prod <= a.frobenius_norm() * b.frobenius_norm() * (1.0 + 1e-12));
        }
    }
}

//! FFT-based application of a block Toeplitz operator to a model-space
//! vector, with a dense reference path and a benchmark harness.
//!
//! The operator is embedded in a block circulant of power-of-two size
//! L >= 2N, whose action is diagonal in the Fourier basis: apply costs
//! O(d L log L + d^2 L) against O(d^2 N^2) for the direct sum. Neither path
//! materializes the N x N block matrix.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{rel_residual, ComplexMatrix};
use crate::model::{ModelSpaceSpec, ModelVector};
use crate::symbols::LaurentSymbol;

/// Radix-2 iterative FFT with twiddles precomputed for one length.
pub struct Fft {
    len: usize,
    // twiddles[k] = exp(-2 pi i k / len) for k < len / 2.
    twiddles: Vec<Complex64>,
}

impl Fft {
    pub fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "FFT length must be a power of two");
        let twiddles = (0..len / 2)
            .map(|k| {
                let angle = -2.0 * std::f64::consts::PI * k as f64 / len as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        Fft { len, twiddles }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
        let inv = 1.0 / self.len as f64;
        for z in data.iter_mut() {
            *z *= inv;
        }
    }

    fn transform(&self, data: &mut [Complex64], invert: bool) {
        assert_eq!(data.len(), self.len, "buffer length must match the plan");
        // Bit-reversal permutation, then in-place butterflies per stage.
        let mut j = 0usize;
        for i in 1..self.len {
            let mut bit = self.len >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                data.swap(i, j);
            }
        }
        let mut span = 2usize;
        while span <= self.len {
            let half = span / 2;
            let stride = self.len / span;
            for start in (0..self.len).step_by(span) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if invert {
                        w = w.conj();
                    }
                    let t = w * data[start + k + half];
                    let u = data[start + k];
                    data[start + k] = u + t;
                    data[start + k + half] = u - t;
                }
            }
            span <<= 1;
        }
    }
}

/// Frequency-domain form of one symbol's circulant embedding.
///
/// `hat[f]` is the d x d matrix of f-th DFT coefficients of the first block
/// column of the circulant, so applying the operator is one forward FFT per
/// coordinate, a d x d matvec per frequency, and one inverse FFT per
/// coordinate.
pub struct FastToeplitzPlan {
    spec: ModelSpaceSpec,
    fft: Fft,
    hat: Vec<ComplexMatrix>,
}

/// Builds the circulant-embedding plan for one symbol.
pub fn plan(s: &LaurentSymbol) -> Result<FastToeplitzPlan> {
    let spec = ModelSpaceSpec::new(s.model_degree(), s.dim())?;
    let n = spec.model_degree();
    let d = spec.dim();
    let len = (2 * n).next_power_of_two();
    let fft = Fft::new(len);

    // First block column of the circulant: coefficient m at slot m for
    // m >= 0, coefficient -m at slot len - m. The slack between 2N - 1 and
    // len stays zero, which is what keeps the convolution from wrapping.
    let mut column = vec![ComplexMatrix::zeros(d, d); len];
    for (idx, m) in s.coeffs() {
        let slot = if idx >= 0 {
            idx as usize
        } else {
            len - (-idx) as usize
        };
        column[slot] = m.clone();
    }

    let mut hat = vec![ComplexMatrix::zeros(d, d); len];
    let mut scratch = vec![Complex64::ZERO; len];
    for p in 0..d {
        for q in 0..d {
            for (slot, block) in column.iter().enumerate() {
                scratch[slot] = block[(p, q)];
            }
            fft.forward(&mut scratch);
            for (f, z) in scratch.iter().enumerate() {
                hat[f][(p, q)] = *z;
            }
        }
    }
    Ok(FastToeplitzPlan { spec, fft, hat })
}

impl FastToeplitzPlan {
    pub fn spec(&self) -> ModelSpaceSpec {
        self.spec
    }

    pub fn fft_len(&self) -> usize {
        self.fft.len()
    }

    /// Applies the planned operator to a model-space vector.
    pub fn apply(&self, v: &ModelVector) -> Result<ModelVector> {
        if v.spec() != self.spec {
            return Err(Error::DimensionMismatch {
                context: "fast apply",
                expected: format!("N = {}, d = {}", self.spec.model_degree(), self.spec.dim()),
                got: format!("N = {}, d = {}", v.spec().model_degree(), v.spec().dim()),
            });
        }
        let n = self.spec.model_degree();
        let d = self.spec.dim();
        let len = self.fft.len();

        // One scalar signal per coordinate, zero padded past N.
        let mut signals = vec![vec![Complex64::ZERO; len]; d];
        for j in 0..n {
            let block = v.block(j);
            for (p, signal) in signals.iter_mut().enumerate() {
                signal[j] = block[p];
            }
        }
        for signal in signals.iter_mut() {
            self.fft.forward(signal);
        }

        // Pointwise block multiply in the frequency domain.
        let mut out = vec![vec![Complex64::ZERO; len]; d];
        for f in 0..len {
            let hat = &self.hat[f];
            for p in 0..d {
                let mut acc = Complex64::ZERO;
                for (q, signal) in signals.iter().enumerate() {
                    acc += hat[(p, q)] * signal[f];
                }
                out[p][f] = acc;
            }
        }
        for signal in out.iter_mut() {
            self.fft.inverse(signal);
        }

        let blocks = (0..n)
            .map(|i| (0..d).map(|p| out[p][i]).collect())
            .collect();
        ModelVector::from_blocks(self.spec, blocks)
    }
}

/// Reference path: y_i = sum_j coeff(i - j) v_j computed straight from the
/// symbol's coefficient band, one d x d matvec per present coefficient.
pub fn dense_apply(s: &LaurentSymbol, v: &ModelVector) -> Result<ModelVector> {
    let spec = ModelSpaceSpec::new(s.model_degree(), s.dim())?;
    if v.spec() != spec {
        return Err(Error::DimensionMismatch {
            context: "dense apply",
            expected: format!("N = {}, d = {}", spec.model_degree(), spec.dim()),
            got: format!("N = {}, d = {}", v.spec().model_degree(), v.spec().dim()),
        });
    }
    let n = spec.model_degree();
    let d = spec.dim();
    // Band lookup indexed by i - j + (N - 1); absent coefficients stay None
    // and cost nothing in the inner loop.
    let mut band: Vec<Option<&ComplexMatrix>> = vec![None; 2 * n - 1];
    for (idx, m) in s.coeffs() {
        band[(idx + n as i64 - 1) as usize] = Some(m);
    }
    let mut result = ModelVector::zero(spec);
    for i in 0..n {
        let mut acc = vec![Complex64::ZERO; d];
        for j in 0..n {
            if let Some(m) = band[i + n - 1 - j] {
                let x = v.block(j);
                for (p, slot) in acc.iter_mut().enumerate() {
                    let mut s = Complex64::ZERO;
                    for (q, xq) in x.iter().enumerate() {
                        s += m[(p, q)] * xq;
                    }
                    *slot += s;
                }
            }
        }
        *result.block_mut(i) = acc;
    }
    Ok(result)
}

/// Timing and accuracy comparison of the two paths on one symbol.
#[derive(Clone, Debug)]
pub struct BenchResult {
    pub model_degree: usize,
    pub dim: usize,
    pub reps: usize,
    /// Average nanoseconds per dense application.
    pub dense_ns: u64,
    /// Average nanoseconds per planned application (plan built once, outside
    /// the timed loop).
    pub fast_ns: u64,
    /// Largest relative deviation between the two paths over all reps.
    pub max_rel_err: f64,
}

/// Runs both paths `reps` times on deterministic random vectors.
pub fn bench_one(s: &LaurentSymbol, reps: usize, seed: u64) -> Result<BenchResult> {
    if reps == 0 {
        return Err(Error::InvalidConfig("bench needs reps >= 1".into()));
    }
    let spec = ModelSpaceSpec::new(s.model_degree(), s.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<ModelVector> = (0..reps)
        .map(|_| ModelVector::random(spec, &mut rng))
        .collect();

    let p = plan(s)?;
    let start = Instant::now();
    let fast: Vec<ModelVector> = vectors.iter().map(|v| p.apply(v)).collect::<Result<_>>()?;
    let fast_ns = (start.elapsed().as_nanos() / reps as u128) as u64;

    let start = Instant::now();
    let dense: Vec<ModelVector> = vectors
        .iter()
        .map(|v| dense_apply(s, v))
        .collect::<Result<_>>()?;
    let dense_ns = (start.elapsed().as_nanos() / reps as u128) as u64;

    let max_rel_err = fast
        .iter()
        .zip(&dense)
        .map(|(f, d)| rel_residual(f.sub(d).norm(), d.norm()))
        .fold(0.0, f64::max);

    Ok(BenchResult {
        model_degree: spec.model_degree(),
        dim: spec.dim(),
        reps,
        dense_ns,
        fast_ns,
        max_rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;
    use crate::model::build_mtto;
    use rand::Rng;

    #[test]
    fn fft_matches_a_naive_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xFF7);
        let len = 16;
        let fft = Fft::new(len);
        let input: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let naive: Vec<Complex64> = (0..len)
            .map(|f| {
                (0..len)
                    .map(|t| {
                        let angle = -2.0 * std::f64::consts::PI * (f * t) as f64 / len as f64;
                        input[t] * Complex64::new(angle.cos(), angle.sin())
                    })
                    .sum()
            })
            .collect();
        let mut data = input.clone();
        fft.forward(&mut data);
        for (a, b) in data.iter().zip(&naive) {
            assert!((a - b).norm() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn fft_round_trip_and_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xF00);
        let len = 1024;
        let fft = Fft::new(len);
        let input: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let mut data = input.clone();
        fft.forward(&mut data);
        fft.inverse(&mut data);
        let err = vec_norm(
            &data
                .iter()
                .zip(&input)
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        assert!(err <= 1e-12 * vec_norm(&input).max(1.0));

        // The transform of a unit impulse only ever adds and subtracts
        // exact zeros and ones, so the spectrum is exactly flat.
        let mut delta = vec![Complex64::ZERO; 8];
        delta[0] = Complex64::ONE;
        Fft::new(8).forward(&mut delta);
        assert!(delta.iter().all(|z| *z == Complex64::ONE));
    }

    #[test]
    fn planned_identity_and_shift_act_as_expected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1D);
        let spec = ModelSpaceSpec::new(8, 2).unwrap();
        let v = ModelVector::random(spec, &mut rng);

        let id = LaurentSymbol::monomial(8, 2, 0, ComplexMatrix::identity(2)).unwrap();
        let out = plan(&id).unwrap().apply(&v).unwrap();
        assert!(out.sub(&v).norm() <= 1e-13 * v.norm());

        let shift = LaurentSymbol::shift(8, 2);
        let out = plan(&shift).unwrap().apply(&v).unwrap();
        assert!(vec_norm(out.block(0)) <= 1e-13);
        for i in 1..8 {
            let diff: Vec<Complex64> = out
                .block(i)
                .iter()
                .zip(v.block(i - 1))
                .map(|(a, b)| a - b)
                .collect();
            assert!(vec_norm(&diff) <= 1e-13);
        }
    }

    #[test]
    fn fast_path_matches_dense_and_operator_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xFA57);
        for _ in 0..20 {
            let n = 2 + (rng.random::<u32>() as usize) % 63;
            let d = 1 + (rng.random::<u32>() as usize) % 2;
            let spec = ModelSpaceSpec::new(n, d).unwrap();
            let s = LaurentSymbol::random(n, d, &mut rng);
            let v = ModelVector::random(spec, &mut rng);

            let dense = dense_apply(&s, &v).unwrap();
            let via_operator = build_mtto(&s).unwrap().apply(&v);
            assert!(dense.sub(&via_operator).norm() <= 1e-12 * via_operator.norm().max(1.0));

            let fast = plan(&s).unwrap().apply(&v).unwrap();
            assert!(
                fast.sub(&dense).norm() <= 1e-12 * dense.norm().max(1.0),
                "N = {n}, d = {d}"
            );
        }
    }

    #[test]
    fn apply_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x11EA);
        let spec = ModelSpaceSpec::new(16, 2).unwrap();
        let s = LaurentSymbol::random(16, 2, &mut rng);
        let p = plan(&s).unwrap();
        let x = ModelVector::random(spec, &mut rng);
        let y = ModelVector::random(spec, &mut rng);
        let alpha = Complex64::new(0.3, -1.7);

        let mut combo = ModelVector::zero(spec);
        for k in 0..16 {
            *combo.block_mut(k) = x
                .block(k)
                .iter()
                .zip(y.block(k))
                .map(|(a, b)| alpha * a + b)
                .collect();
        }
        let lhs = p.apply(&combo).unwrap();
        let px = p.apply(&x).unwrap();
        let py = p.apply(&y).unwrap();
        let mut rhs = ModelVector::zero(spec);
        for k in 0..16 {
            *rhs.block_mut(k) = px
                .block(k)
                .iter()
                .zip(py.block(k))
                .map(|(a, b)| alpha * a + b)
                .collect();
        }
        assert!(lhs.sub(&rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn bench_smoke_and_input_validation() {
        let s = LaurentSymbol::random(16, 1, &mut ChaCha8Rng::seed_from_u64(1));
        let b = bench_one(&s, 2, 7).unwrap();
        assert_eq!((b.model_degree, b.dim, b.reps), (16, 1, 2));
        assert!(b.max_rel_err <= 1e-10);
        assert!(matches!(bench_one(&s, 0, 7), Err(Error::InvalidConfig(_))));

        let wrong = ModelVector::zero(ModelSpaceSpec::new(4, 1).unwrap());
        assert!(plan(&s).unwrap().apply(&wrong).is_err());
        assert!(dense_apply(&s, &wrong).is_err());
    }
}

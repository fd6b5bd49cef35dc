//! Conjugations on C^d and the canonical conjugation they induce on the
//! shifted part of the model space: antilinear, involutive, isometric maps
//! that decide which symbols the product criterion applies to.
//!
//! Run with `cargo run --example conjugations`.

use mtto::linalg::{ComplexMatrix, Conjugation};
use mtto::model::{canonical_conjugation_apply, ModelSpaceSpec, ModelVector};
use mtto::symbols::{gamma_compatibility_residual, LaurentSymbol};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mtto::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // Any unitary U with U conj(U) = I (equivalently, symmetric unitary)
    // defines a conjugation x -> U conj(x). The identity always works; a
    // random one comes from V V^T with V unitary.
    let standard = Conjugation::standard(2);
    let random = Conjugation::random(2, &mut rng);
    println!("random conjugation matrix: {:?}", random.matrix());

    // The sandwich M -> U conj(M) conj(U) is the matrix form of conjugating
    // an operator; a matrix is compatible when the sandwich equals its
    // adjoint.
    let symmetric = ComplexMatrix::from_rows(vec![
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)],
        vec![Complex64::new(0.0, 2.0), Complex64::new(3.0, 0.0)],
    ]);
    let lopsided = ComplexMatrix::from_rows(vec![
        vec![Complex64::ZERO, Complex64::ONE],
        vec![Complex64::ZERO, Complex64::ZERO],
    ]);
    println!(
        "compatibility residual of a complex symmetric matrix: {:.1e}",
        standard.compatibility_residual(&symmetric)
    );
    println!(
        "compatibility residual of a non-symmetric matrix:     {:.1e}",
        standard.compatibility_residual(&lopsided)
    );
    println!(
        "symmetrize() projects onto the compatible part:       {:.1e}",
        standard.compatibility_residual(&standard.symmetrize(&lopsided))
    );

    // Symbols inherit the notion coefficientwise.
    let symbol = LaurentSymbol::monomial(4, 2, 1, symmetric)?;
    println!(
        "symbol compatibility residual: {:.1e}",
        gamma_compatibility_residual(&symbol, &standard)?
    );

    // On the shifted subspace (vanishing constant block) the canonical
    // conjugation reverses block order, conjugates entries, and applies U.
    let spec = ModelSpaceSpec::new(5, 2)?;
    let v = ModelVector::random_shifted(spec, &mut rng);
    let w = canonical_conjugation_apply(&random, &v)?;
    let back = canonical_conjugation_apply(&random, &w)?;
    println!(
        "canonical conjugation: |v| = {:.6}, |Cv| = {:.6}, |C(Cv) - v| = {:.1e}",
        v.norm(),
        w.norm(),
        back.sub(&v).norm()
    );

    // Vectors with a nonzero constant block are outside its domain.
    let outside = ModelVector::random(spec, &mut rng);
    println!(
        "applying to a vector outside the shifted subspace: {:?}",
        canonical_conjugation_apply(&random, &outside).err()
    );
    Ok(())
}

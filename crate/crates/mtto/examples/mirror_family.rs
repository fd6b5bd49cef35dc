//! Mirror symbols: a constructive supply of pairs whose operator products
//! are block Toeplitz. The analytic half is a fixed matrix C times the
//! conjugated reflection of the coanalytic half; with C drawn from the
//! commutant of the family generator, products land back in the class.
//!
//! Run with `cargo run --example mirror_family`.

use mtto::analysis::product_condition;
use mtto::linalg::{ComplexMatrix, Conjugation};
use mtto::symbols::{gen_mirror_pair, mirror_pair_generator, poly_in};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mtto::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d = 3;
    let gamma = Conjugation::random(d, &mut rng);
    let seed = 41;

    // Scalar factors always satisfy the hypotheses.
    let alpha = ComplexMatrix::identity(d).scale(Complex64::new(0.8, -0.6));
    let (phi, psi) = gen_mirror_pair(seed, 6, d, &gamma, &alpha)?;
    let report = product_condition(&phi, &psi, &gamma, 1e-9)?;
    println!(
        "scalar factor: criterion {} (residual {:.2e}), oracle {:?}",
        report.verdict, report.residual, report.oracle_verdict
    );

    // Matrix factors must commute with the generator behind the pair and be
    // compatible with the conjugation. Polynomials in the generator do both.
    let generator = mirror_pair_generator(seed, d, &gamma);
    let factor = poly_in(
        &generator,
        &[
            Complex64::new(0.3, 0.4),
            Complex64::new(-1.0, 0.2),
            Complex64::new(0.0, 0.9),
        ],
    );
    let (phi, psi) = gen_mirror_pair(seed, 6, d, &gamma, &factor)?;
    let report = product_condition(&phi, &psi, &gamma, 1e-9)?;
    println!(
        "polynomial factor: criterion {} (residual {:.2e}), oracle {:?}",
        report.verdict, report.residual, report.oracle_verdict
    );

    // An arbitrary matrix factor almost surely fails the commutation
    // hypothesis and is rejected up front.
    let bad = ComplexMatrix::random(d, d, &mut rng);
    println!(
        "random factor: {:?}",
        gen_mirror_pair(seed, 6, d, &gamma, &bad).err()
    );
    Ok(())
}

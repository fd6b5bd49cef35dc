//! The product criterion in action: decide whether A_phi A_psi stays block
//! Toeplitz without forming the product, then cross-check against the
//! brute-force oracle that does form it.
//!
//! Run with `cargo run --example product_criterion`.

use mtto::analysis::{coefficient_criteria, product_condition};
use mtto::linalg::{ComplexMatrix, Conjugation};
use mtto::symbols::{gen_family_with_gamma, LaurentSymbol};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mtto::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // A commuting, conjugation-compatible pair: coefficients are polynomials
    // in one shared compatible generator.
    let gamma = Conjugation::random(3, &mut rng);
    let fam = gen_family_with_gamma(99, 5, 3, 3, 2, gamma.clone())?;
    let (phi, psi) = (fam.member(0), fam.member(1));

    // Generic pairs rarely keep the product in the class; what matters is
    // that criterion and oracle reach the same verdict.
    let report = product_condition(phi, psi, &gamma, 1e-9)?;
    println!(
        "random admissible pair: criterion {} (residual {:.2e}), oracle {:?}, agree {:?}",
        report.verdict, report.residual, report.oracle_verdict, report.agree
    );

    // The same decision, stated coefficientwise: an (N-1) x (N-1) grid of
    // matrix identities between the analytic half of one symbol and the
    // conjugated coanalytic half of the other.
    let grid = coefficient_criteria(phi, psi, &gamma, 1e-9)?;
    println!(
        "coefficient grid gives the identical verdict: {} (residual {:.2e})",
        grid.verdict, grid.residual
    );

    // A pair that always fails: the shift times its conjugate. The product
    // is a projection with a jump on the block diagonal, and the criterion
    // names the offending blocks.
    let z = LaurentSymbol::shift(4, 1);
    let zbar = LaurentSymbol::monomial(4, 1, -1, ComplexMatrix::identity(1))?;
    let report = product_condition(&z, &zbar, &Conjugation::standard(1), 1e-9)?;
    println!(
        "shift pair: criterion {} oracle {:?}; witness blocks {:?}",
        report.verdict,
        report.oracle_verdict,
        report
            .witnesses
            .as_ref()
            .map(|ws| ws.iter().map(|w| (w.i, w.j)).collect::<Vec<_>>())
    );

    // Hypothesis violations are errors, not verdicts: the criterion says
    // nothing about non-commuting pairs.
    let a = LaurentSymbol::monomial(
        4,
        2,
        1,
        ComplexMatrix::from_rows(vec![
            vec![num_complex::Complex64::ZERO, num_complex::Complex64::ONE],
            vec![num_complex::Complex64::ZERO, num_complex::Complex64::ZERO],
        ]),
    )?;
    let b = LaurentSymbol::monomial(
        4,
        2,
        -1,
        ComplexMatrix::from_rows(vec![
            vec![num_complex::Complex64::ONE, num_complex::Complex64::ZERO],
            vec![
                num_complex::Complex64::ZERO,
                num_complex::Complex64::new(2.0, 0.0),
            ],
        ]),
    )?;
    println!(
        "non-commuting pair: {:?}",
        product_condition(&a, &b, &Conjugation::standard(2), 1e-9).err()
    );
    Ok(())
}

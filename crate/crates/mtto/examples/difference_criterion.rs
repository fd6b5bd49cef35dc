//! The difference criterion: when is A_phi A_psi - A_chi A_zeta block
//! Toeplitz? Setting the second pair to zero recovers the product criterion
//! bit for bit.
//!
//! Run with `cargo run --example difference_criterion`.

use mtto::analysis::{difference_condition, product_condition};
use mtto::linalg::Conjugation;
use mtto::symbols::{gen_family_with_gamma, LaurentSymbol};

fn main() -> mtto::Result<()> {
    let gamma = Conjugation::standard(2);
    let fam = gen_family_with_gamma(7, 5, 2, 3, 4, gamma.clone())?;
    let (phi, psi, chi, zeta) = (fam.member(0), fam.member(1), fam.member(2), fam.member(3));

    let report = difference_condition(phi, psi, chi, zeta, &gamma, 1e-9)?;
    println!(
        "quadruple: criterion {} (residual {:.2e}), oracle {:?}, agree {:?}",
        report.verdict, report.residual, report.oracle_verdict, report.agree
    );

    // Commutator probe: the difference of the two orderings of one pair.
    // The operators A_phi and A_psi need not commute even though the symbols
    // do, so either verdict can come up; criterion and oracle move together.
    let report = difference_condition(phi, psi, psi, phi, &gamma, 1e-9)?;
    println!(
        "commutator A_phi A_psi - A_psi A_phi: criterion {} (residual {:.2e}), oracle {:?}",
        report.verdict, report.residual, report.oracle_verdict
    );

    // Degenerate second pair: the difference report carries exactly the
    // product report's numbers.
    let zero = LaurentSymbol::zero(5, 2);
    let degenerate = difference_condition(phi, psi, &zero, &zero, &gamma, 1e-9)?;
    let product = product_condition(phi, psi, &gamma, 1e-9)?;
    println!(
        "degenerate difference residual {:e} == product residual {:e}: {}",
        degenerate.residual,
        product.residual,
        degenerate.residual == product.residual
    );
    Ok(())
}

//! Build the block Toeplitz operator of a matrix symbol and look at its
//! structure: constant block diagonals, and a defect map that vanishes off
//! the first row and column.
//!
//! Run with `cargo run --example build_operator`.

use mtto::analysis::{is_mtto_via_delta, oracle_is_block_toeplitz};
use mtto::linalg::ComplexMatrix;
use mtto::model::build_mtto;
use mtto::symbols::LaurentSymbol;
use num_complex::Complex64;

fn main() -> mtto::Result<()> {
    // A 2x2 matrix symbol on the degree-4 model space, with coefficients at
    // powers -2, 0, and 1 of the variable.
    let mut symbol = LaurentSymbol::zero(4, 2);
    symbol.set_coeff(
        -2,
        ComplexMatrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::ZERO],
            vec![Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)],
        ]),
    )?;
    symbol.set_coeff(0, ComplexMatrix::identity(2))?;
    symbol.set_coeff(
        1,
        ComplexMatrix::from_rows(vec![
            vec![Complex64::ZERO, Complex64::new(0.0, 3.0)],
            vec![Complex64::new(1.0, 1.0), Complex64::ZERO],
        ]),
    )?;

    let operator = build_mtto(&symbol)?;
    println!(
        "operator on the N = {}, d = {} model space ({} x {} complex entries)",
        symbol.model_degree(),
        symbol.dim(),
        operator.spec().total_dim(),
        operator.spec().total_dim()
    );

    // Block (i, j) is the symbol coefficient at i - j; walking down any
    // diagonal shows the same block.
    for diag in [-2i64, 0, 1] {
        let (i, j) = if diag >= 0 {
            (diag as usize, 0)
        } else {
            (0, (-diag) as usize)
        };
        println!(
            "block ({i}, {j}) repeats along diagonal {diag}: {:?}",
            operator.block(i, j)
        );
    }

    let toeplitz = oracle_is_block_toeplitz(&operator, 1e-12);
    let defect = is_mtto_via_delta(&operator, 1e-12);
    println!(
        "block Toeplitz: {} (residual {:.1e}); defect corner residual {:.1e}",
        toeplitz.verdict, toeplitz.residual, defect.residual
    );

    // The defect map A - S A S^* of a built operator is supported on the
    // first row and column only.
    let delta = operator.delta();
    let corner_norm: f64 = (1..4)
        .flat_map(|i| (1..4).map(move |j| (i, j)))
        .map(|(i, j)| delta.block(i, j).frobenius_norm())
        .fold(0.0, f64::max);
    println!("largest defect block outside row/column zero: {corner_norm:.1e}");
    Ok(())
}

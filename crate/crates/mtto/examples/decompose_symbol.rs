//! Split a symbol into its constant, analytic, and coanalytic parts, and
//! reassemble it bit for bit. The decomposition stores the coanalytic side
//! through adjoints, which is the form the product criterion consumes.
//!
//! Run with `cargo run --example decompose_symbol`.

use mtto::linalg::ComplexMatrix;
use mtto::symbols::LaurentSymbol;
use num_complex::Complex64;

fn main() -> mtto::Result<()> {
    let mut symbol = LaurentSymbol::zero(3, 1);
    for (n, v) in [(-2i64, 2.0), (-1, 1.0), (0, 0.5), (1, 2.0), (2, 1.0)] {
        symbol.set_coeff(
            n,
            ComplexMatrix::from_rows(vec![vec![Complex64::new(v, 0.0)]]),
        )?;
    }

    let dec = symbol.decompose();
    println!("constant part: {:?}", dec.phi0);
    for (k, m) in dec.plus.iter().enumerate() {
        println!("plus[{k}]  (coefficient at power {}): {:?}", k + 1, m);
    }
    for (k, m) in dec.minus.iter().enumerate() {
        // minus[k] is the adjoint of the coefficient at power -(k + 1).
        println!(
            "minus[{k}] (adjoint of coefficient at power {}): {:?}",
            -(k as i64 + 1),
            m
        );
    }

    let back = dec.recompose();
    println!(
        "recompose is bitwise identical: {}",
        back.bitwise_eq(&symbol)
    );

    // Both shapes serialize to stable JSON wire formats.
    println!(
        "\nsymbol wire format:\n{}",
        serde_json::to_string_pretty(&symbol)?
    );
    println!(
        "\ndecomposition wire format:\n{}",
        serde_json::to_string_pretty(&dec)?
    );
    Ok(())
}

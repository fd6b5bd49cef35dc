//! Applying a block Toeplitz operator without building it: circulant
//! embedding plus FFT, compared against the direct banded sum.
//!
//! Run with `cargo run --release --example fast_apply`.

use mtto::fast::{bench_one, dense_apply, plan};
use mtto::model::{ModelSpaceSpec, ModelVector};
use mtto::symbols::LaurentSymbol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mtto::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    // Accuracy on a mid-size space.
    let spec = ModelSpaceSpec::new(512, 2)?;
    let symbol = LaurentSymbol::random(512, 2, &mut rng);
    let v = ModelVector::random(spec, &mut rng);
    let p = plan(&symbol)?;
    println!(
        "N = 512, d = 2: circulant length {} ({} frequencies)",
        p.fft_len(),
        p.fft_len()
    );
    let fast = p.apply(&v)?;
    let dense = dense_apply(&symbol, &v)?;
    println!(
        "relative deviation between FFT and direct paths: {:.2e}",
        fast.sub(&dense).norm() / dense.norm()
    );

    // Timing across sizes. The dense path scales like N^2, the planned path
    // like N log N.
    println!("\n  N     d   dense/apply   fast/apply   speedup   max rel err");
    for (n, d) in [(64usize, 1usize), (256, 1), (1024, 1), (4096, 1), (4096, 2)] {
        let symbol = LaurentSymbol::random(n, d, &mut rng);
        let b = bench_one(&symbol, 3, 17)?;
        println!(
            "{:5} {:3} {:10} ns {:9} ns {:8.1}x   {:.2e}",
            n,
            d,
            b.dense_ns,
            b.fast_ns,
            b.dense_ns as f64 / b.fast_ns as f64,
            b.max_rel_err
        );
    }
    Ok(())
}

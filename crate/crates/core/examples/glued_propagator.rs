//! Builds a propagator on a two-block complex from propagators on the blocks.

use oneloop::exactlin::Matrix;
use oneloop::propagator::{glue_propagator, off_diagonal_residuals, random_blocked_complex, verify_propagator, RandomParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let r = random_blocked_complex(seed, RandomParams::default(), false);
    println!("a dims {:?}, b dims {:?}", r.complex.a.dims(), r.complex.b.dims());

    let glued = glue_propagator(&r.complex, &r.ga, &r.gb)?;
    for (k, m) in glued.cross.iter().enumerate().filter(|(_, m)| m.rows() * m.cols() > 0) {
        println!("G^ab_{k} = {m}");
    }
    let total = r.complex.total()?;
    println!("{}", verify_propagator(&total, &glued.total));
    let off = off_diagonal_residuals(&r.complex, &r.ga, &r.gb, &glued.cross);
    println!("off-diagonal identity holds: {}", off.iter().all(Matrix::is_zero));
    Ok(())
}

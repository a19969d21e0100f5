//! Contracts random acyclic complexes and checks `∂G + G∂ = 1` and `G² = 0`.
//!
//! `cargo run --example propagator_contraction -- <seed>`

use oneloop::propagator::{contraction, random_acyclic_complex, random_propagator, rng_from_seed, verify_propagator, RandomParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let mut rng = rng_from_seed(seed);
    let c = random_acyclic_complex(&mut rng, RandomParams::default());
    println!("complex dims {:?}", c.dims());
    for i in 1..c.dims().len() as isize {
        println!("∂_{i} = {}", c.boundary(i));
    }
    let g = contraction(&c)?;
    for (i, gi) in g.degrees.iter().enumerate() {
        println!("G_{i} = {gi}");
    }
    println!("{}", verify_propagator(&c, &g));

    let other = random_propagator(&c, &mut rng, 2)?;
    println!("conjugated choice verifies: {}", verify_propagator(&c, &other).verdict);
    Ok(())
}

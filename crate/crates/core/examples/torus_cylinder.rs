//! One-loop class of the torus times an interval, for a chosen fibre dimension.
//!
//! `cargo run --example torus_cylinder -- 2`

use oneloop::invariant::{d_equal, d_invariant};
use oneloop::localsys::HomChain;
use oneloop::morse::morse_complex;
use oneloop::scenario::{build_torus_cylinder, default_cylinder_holonomies};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let (a, b) = default_cylinder_holonomies(n);
    let s = build_torus_cylinder(&a, &b)?;

    let mc = morse_complex(&s.model, &s.representation, &s.morse)?;
    println!("Morse complex dims {:?}", mc.complex.dims());
    for (deg, names) in mc.basis_names(&s.morse).iter().enumerate() {
        println!("  C_{deg}: {}", names.join(" "));
    }

    let d = d_invariant(&s.model, &s.representation, &s.morse)?;
    for (e, m) in d.representative.coefficients.iter().enumerate().filter(|(_, m)| !m.is_zero()) {
        println!("representative on edge {e}: {m}");
    }
    let zero = HomChain::zero(n, s.model.edges.len());
    match d_equal(&s.model, &s.representation, &d.representative, &zero)? {
        Some(cert) => println!("class is zero; lattice coefficients {:?}", cert.n),
        None => println!("class is nonzero"),
    }
    Ok(())
}

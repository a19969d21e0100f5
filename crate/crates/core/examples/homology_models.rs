//! Cellular and Morse Betti numbers of the shipped models, with V and Hom(V, V) coefficients.

use oneloop::localsys::{adjoint_system, homology_dims, rational_complex, twisted_complex};
use oneloop::morse::morse_complex;
use oneloop::scenario::{build_torus_cylinder, default_cylinder_holonomies, default_torus3, homology_consistency};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = default_cylinder_holonomies(2);
    let cyl = build_torus_cylinder(&a, &b)?;
    for s in [cyl.clone(), cyl.mirrored()?, default_torus3(1)?] {
        println!("{} ({:?})", s.name, s.morse_type);
        println!("  rational  {:?}", homology_dims(&rational_complex(&s.model)?)?);
        let adj = adjoint_system(&s.representation)?;
        for (label, rep) in [("V", &s.representation), ("Hom", &adj)] {
            let cell = homology_dims(&twisted_complex(&s.model, rep)?)?;
            let morse = homology_dims(&morse_complex(&s.model, rep, &s.morse)?.complex)?;
            println!("  {label:<4} cellular {cell:?}  Morse {morse:?}");
        }
        println!("  consistent: {}", homology_consistency(&s)?.verdict);
    }
    Ok(())
}

//! Recomputes the class with random propagators and shifted c_f.

use oneloop::scenario::{build_torus_cylinder, choice_independence, default_cylinder_holonomies};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = default_cylinder_holonomies(2);
    let s = build_torus_cylinder(&a, &b)?;
    let report = choice_independence(&s, 11, 5, 3)?;
    println!("{report}");
    Ok(())
}

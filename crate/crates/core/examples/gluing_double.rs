//! Doubles a scenario along its boundary and checks the gluing formula.
//!
//! `cargo run --example gluing_double -- [cylinder|torus3] [n]`

use oneloop::invariant::{double, glue, verify_gluing};
use oneloop::localsys::homology_dims;
use oneloop::scenario::{build_torus_cylinder, default_cylinder_holonomies, default_torus3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let which = args.next().unwrap_or_else(|| "cylinder".into());
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let s = match which.as_str() {
        "torus3" => default_torus3(n)?,
        _ => {
            let (a, b) = default_cylinder_holonomies(n);
            build_torus_cylinder(&a, &b)?
        }
    };
    let gs = double(&s)?;
    let g = glue(&gs)?;
    let m = &g.scenario.model;
    println!(
        "{}: {} vertices, {} edges, {} faces, {} 3-cells, {} cross trajectories",
        g.scenario.name,
        m.vertices,
        m.edges.len(),
        m.faces.len(),
        m.cells3.len(),
        gs.cross.len()
    );
    println!("rational Betti {:?}", homology_dims(&oneloop::localsys::rational_complex(m)?)?);
    let report = verify_gluing(&gs);
    println!("{report}");
    std::process::exit(if report.verdict { 0 } else { 1 });
}

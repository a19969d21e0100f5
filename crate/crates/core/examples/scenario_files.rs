//! Writes scenarios to a directory, reads them back, and compares invariants from files.
//!
//! `cargo run --example scenario_files -- <dir>`

use std::path::PathBuf;

use oneloop::invariant::{d_equal, d_invariant, double};
use oneloop::scenario::{
    build_torus_cylinder, default_cylinder_holonomies, load_glued, load_invariant, load_scenario, save_glued,
    save_scenario, to_json, write_atomic, InvariantFile,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("oneloop").display().to_string()));
    std::fs::create_dir_all(&dir)?;

    let (a, b) = default_cylinder_holonomies(1);
    let s = build_torus_cylinder(&a, &b)?;
    let path = dir.join("torus_cylinder.json");
    save_scenario(&path, &s)?;
    let back = load_scenario(&path)?;
    println!("round trip ok: {}", back == s);

    let glued = save_glued(&dir, "double_cylinder", &double(&s)?)?;
    println!("glued file {} has {} cross trajectories", glued.display(), load_glued(&glued)?.cross.len());

    let d = d_invariant(&back.model, &back.representation, &back.morse)?;
    let inv = dir.join("torus_cylinder.invariant.json");
    write_atomic(&inv, &to_json(&InvariantFile { scenario: back, c_f: d.c_f, representative: d.representative }))?;
    let x = load_invariant(&inv)?;
    let same = d_equal(&x.scenario.model, &x.scenario.representation, &x.representative, &x.representative)?;
    println!("invariant file compares equal to itself: {}", same.is_some());
    Ok(())
}

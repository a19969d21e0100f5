use oneloop::exactlin::{frac, int, Matrix};
use oneloop::invariant::{
    blocked_from_glued, d_equal, d_invariant, double, glue, i_circle, integral_cycle_lattice, verify_gluing,
    CrossTrajectory, GluedScenario, InvariantError, Pairing,
};
use oneloop::localsys::{CwModel, Edge, Face, HomChain, Representation, Step};
use oneloop::morse::{morse_complex, MorseData};
use oneloop::propagator::contraction;
use oneloop::scenario::*;

fn torus() -> CwModel {
    CwModel {
        vertices: 1,
        edges: vec![Edge { init: 0, term: 0 }, Edge { init: 0, term: 0 }],
        faces: vec![Face { base: 0, word: vec![Step::fwd(0), Step::fwd(1), Step::back(0), Step::back(1)] }],
        cells3: vec![],
    }
}

fn scalar_rep(vals: &[i64]) -> Representation {
    Representation { fiber_dim: 1, holonomy: vals.iter().map(|&v| Matrix::scalar(int(v))).collect() }
}

fn chain1(vals: &[oneloop::exactlin::Scalar]) -> HomChain {
    HomChain { fiber_dim: 1, coefficients: vals.iter().map(|v| Matrix::scalar(v.clone())).collect() }
}

fn cylinder(n: usize) -> Scenario {
    let (a, b) = default_cylinder_holonomies(n);
    build_torus_cylinder(&a, &b).unwrap()
}

// Hand evaluation with the reference propagator: the NP→p pair contributes
// -a(1-a)⁻¹ on the middle x-loop, the q→SP pair -a⁻¹(1-a⁻¹)⁻¹, summing to 1.
#[test]
fn cylinder_reference_chain_is_x_loop() {
    for n in [1, 2] {
        let s = cylinder(n);
        let (a, _) = default_cylinder_holonomies(n);
        let g = cylinder_reference_propagator(&a).unwrap();
        let z = i_circle(&s.model, &s.representation, &s.morse, &g, &s.c_f().unwrap()).unwrap();
        let mut expected = HomChain::zero(n, s.model.edges.len());
        expected.coefficients[0] = Matrix::identity(n);
        assert_eq!(z, expected);
    }
}

#[test]
fn mirrored_cylinder_chain_is_minus_x_loop() {
    let s = cylinder(1).mirrored().unwrap();
    let d = d_invariant(&s.model, &s.representation, &s.morse).unwrap();
    let mut expected = HomChain::zero(1, s.model.edges.len());
    expected.coefficients[0] = Matrix::scalar(int(-1));
    assert_eq!(d.representative, expected);
}

#[test]
fn empty_data_gives_zero_chain() {
    let model = torus();
    let rep = scalar_rep(&[2, 3]);
    let md = MorseData::default();
    let g = contraction(&morse_complex(&model, &rep, &md).unwrap().complex).unwrap();
    assert!(i_circle(&model, &rep, &md, &g, &[0, 0]).unwrap().is_zero());
}

#[test]
fn lattice_examples() {
    let circle = CwModel { vertices: 1, edges: vec![Edge { init: 0, term: 0 }], faces: vec![], cells3: vec![] };
    assert_eq!(integral_cycle_lattice(&circle).len(), 1);
    let l = integral_cycle_lattice(&torus());
    assert_eq!(l.len(), 2);
    let segment = CwModel { vertices: 2, edges: vec![Edge { init: 0, term: 1 }], faces: vec![], cells3: vec![] };
    assert!(integral_cycle_lattice(&segment).is_empty());
}

#[test]
fn d_equal_torus_examples() {
    let (model, rep) = (torus(), scalar_rep(&[2, 3]));
    let zero = chain1(&[int(0), int(0)]);
    assert!(d_equal(&model, &rep, &chain1(&[int(-1), int(0)]), &zero).unwrap().is_some());
    assert!(d_equal(&model, &rep, &chain1(&[frac(1, 2), int(0)]), &zero).unwrap().is_none());
    let z = chain1(&[frac(3, 7), int(5)]);
    let cert = d_equal(&model, &rep, &z, &z).unwrap().unwrap();
    assert!(cert.w.is_zero() && cert.n.iter().all(|x| x == "0"));
}

#[test]
fn d_equal_absorbs_boundaries() {
    let s = cylinder(2);
    let d = d_invariant(&s.model, &s.representation, &s.morse).unwrap();
    let adj = oneloop::localsys::adjoint_system(&s.representation).unwrap();
    let c = oneloop::localsys::twisted_complex(&s.model, &adj).unwrap();
    let w = Matrix::column((0..c.dim(2)).map(|i| frac(i as i64 - 3, 5)).collect());
    let shift = HomChain::from_vector(2, &(&c.boundary(2) * &w)).unwrap();
    let z = d.representative.add(&shift).unwrap();
    assert!(d_equal(&s.model, &s.representation, &z, &d.representative).unwrap().is_some());
}

#[test]
fn d_equal_rejects_non_cycles() {
    let model = CwModel { vertices: 2, edges: vec![Edge { init: 0, term: 1 }], faces: vec![], cells3: vec![] };
    let rep = scalar_rep(&[1]);
    let r = d_equal(&model, &rep, &chain1(&[int(1)]), &chain1(&[int(0)]));
    assert!(matches!(r, Err(InvariantError::NotCycle { .. })));
}

#[test]
fn double_of_cylinder_is_three_torus() {
    let g = glue(&double(&cylinder(1)).unwrap()).unwrap();
    let m = &g.scenario.model;
    assert_eq!((m.vertices, m.edges.len(), m.faces.len(), m.cells3.len()), (4, 12, 12, 4));
    let betti = oneloop::localsys::homology_dims(&oneloop::localsys::rational_complex(m).unwrap()).unwrap();
    assert_eq!(betti, vec![1, 3, 3, 1]);
    assert!(g.scenario.boundary.is_none());
}

#[test]
fn double_of_cylinder_has_cross_block() {
    let gs = double(&cylinder(1)).unwrap();
    assert!(!gs.cross.is_empty());
    let g = glue(&gs).unwrap();
    let parts = |s: &Scenario| morse_complex(&s.model, &s.representation, &s.morse).unwrap().complex;
    let bc = blocked_from_glued(&parts(&gs.a), &parts(&gs.b), &parts(&g.scenario)).unwrap();
    assert!(bc.cross.iter().any(|m| !m.is_zero()));
}

#[test]
fn mirrored_part_validates() {
    let gs = double(&cylinder(2)).unwrap();
    assert!(gs.b.check().is_ok());
}

#[test]
fn double_of_closed_scenario_is_block_diagonal() {
    let s = default_torus3(1).unwrap();
    let gs = double(&s).unwrap();
    assert!(gs.cross.is_empty() && gs.pairing == Pairing::default());
    let g = glue(&gs).unwrap();
    let parts = |s: &Scenario| morse_complex(&s.model, &s.representation, &s.morse).unwrap().complex;
    let bc = blocked_from_glued(&parts(&gs.a), &parts(&gs.b), &parts(&g.scenario)).unwrap();
    assert!(bc.cross.iter().all(Matrix::is_zero));
    assert!(verify_gluing(&gs).verdict);
}

#[test]
fn mismatched_holonomy_rejected() {
    let a = cylinder(1);
    let b = build_torus_cylinder(&Matrix::scalar(int(3)), &Matrix::scalar(int(3))).unwrap().mirrored().unwrap();
    let mut gs = double(&a).unwrap();
    gs.b = b;
    gs.cross.clear();
    assert!(matches!(glue(&gs), Err(InvariantError::HolonomyMismatch { .. })));
}

#[test]
fn backward_cross_trajectory_rejected() {
    let s = default_torus3(1).unwrap();
    let gs = GluedScenario {
        a: s.clone(),
        b: s.mirrored().unwrap(),
        pairing: Pairing::default(),
        cross: vec![CrossTrajectory { source: "nonexistent".into(), target: "e".into(), sign: 1, path: vec![] }],
    };
    assert!(matches!(glue(&gs), Err(InvariantError::CrossDirection(0))));
}

#[test]
fn corrupted_sign_fails_verification() {
    let mut gs = double(&cylinder(1)).unwrap();
    gs.a.morse.trajectories[1].sign = 1;
    let r = verify_gluing(&gs);
    assert!(!r.verdict);
    assert_eq!(r.checks[0].name, "glue");
}

#[test]
fn n2_double_verifies() {
    let r = verify_gluing(&double(&cylinder(2)).unwrap());
    assert!(r.verdict, "{r}");
}

#[test]
fn torus3_class_is_integral() {
    let s = default_torus3(2).unwrap();
    let d = d_invariant(&s.model, &s.representation, &s.morse).unwrap();
    let zero = HomChain::zero(2, 3);
    assert!(d_equal(&s.model, &s.representation, &d.representative, &zero).unwrap().is_some());
}

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use oneloop::exactlin::{
    frac, hermite_normal_form, int, inverse, lattice_membership, rank_and_solve, IntMatrix, Matrix, Scalar,
};
use oneloop::invariant::d_equal;
use oneloop::localsys::{
    adjoint_system, conjugation_operator, hom_boundary, path_holonomy, push_path, rational_complex,
    twisted_complex, CwModel, Edge, Face, HomChain, PathWord, Representation, Step,
};
use oneloop::propagator::{
    contraction, glue_propagator, off_diagonal_residuals, propagator_residuals, random_acyclic_complex,
    random_blocked_complex, random_bases, random_invertible, random_propagator, rng_from_seed, RandomParams,
};

fn matrix(rows: usize, cols: usize, max: i64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-max..=max, rows * cols)
        .prop_map(move |v| Matrix::from_vec(rows, cols, v.into_iter().map(int).collect()).unwrap())
}

fn sized_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| matrix(r, c, 4))
}

/// A random graph on `vertices` vertices.
fn graph() -> impl Strategy<Value = CwModel> {
    (1usize..4).prop_flat_map(|v| {
        prop::collection::vec((0..v, 0..v), 1..5).prop_map(move |es| CwModel {
            vertices: v,
            edges: es.into_iter().map(|(init, term)| Edge { init, term }).collect(),
            faces: vec![],
            cells3: vec![],
        })
    })
}

/// Walks from `base`, each choice picking one of the steps leaving the current vertex.
fn walk(model: &CwModel, base: usize, choices: &[usize]) -> (PathWord, usize) {
    let mut at = base;
    let mut steps = Vec::new();
    for &c in choices {
        let options: Vec<(Step, usize)> = model
            .edges
            .iter()
            .enumerate()
            .flat_map(|(i, e)| {
                let mut o = Vec::new();
                if e.init == at {
                    o.push((Step::fwd(i), e.term));
                }
                if e.term == at {
                    o.push((Step::back(i), e.init));
                }
                o
            })
            .collect();
        if options.is_empty() {
            break;
        }
        let (s, next) = options[c % options.len()];
        steps.push(s);
        at = next;
    }
    (PathWord::new(base, steps), at)
}

fn random_rep(model: &CwModel, n: usize, seed: u64) -> Representation {
    let mut rng = rng_from_seed(seed);
    Representation { fiber_dim: n, holonomy: (0..model.edges.len()).map(|_| random_invertible(&mut rng, n, 2).0).collect() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_returns_solution(a in sized_matrix(4), seed in any::<u64>()) {
        let x0 = oneloop::propagator::random_matrix(&mut rng_from_seed(seed), a.cols(), 1, 3);
        let b = &a * &x0;
        let s = rank_and_solve(&a, Some(&b)).unwrap();
        let x = s.solution.expect("b is in the column space");
        prop_assert_eq!(&a * &x, b);
        prop_assert_eq!(s.rank + s.kernel.len(), a.cols());
        for k in &s.kernel {
            prop_assert!((&a * k).is_zero());
        }
    }

    #[test]
    fn inverse_is_two_sided(a in (1usize..5).prop_flat_map(|n| matrix(n, n, 3))) {
        match inverse(&a).unwrap() {
            Some(inv) => {
                prop_assert!((&inv * &a).is_identity());
                prop_assert!((&a * &inv).is_identity());
            }
            None => prop_assert!(rank_and_solve(&a, None).unwrap().rank < a.rows()),
        }
    }

    #[test]
    fn hnf_transform_is_unimodular(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5)) {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = IntMatrix::from_i64(&refs);
        let (h, u) = hermite_normal_form(&m);
        prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
        prop_assert!(u.determinant().unwrap().abs() == BigInt::from(1));
        // Echelon: leading entries strictly move right and are positive.
        let mut last: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..h.rows() {
            match (0..h.cols()).find(|&c| !h.get(r, c).is_zero()) {
                Some(c) => {
                    prop_assert!(!seen_zero);
                    prop_assert!(last.is_none_or(|l| c > l));
                    prop_assert!(h.get(r, c).is_positive());
                    last = Some(c);
                }
                None => seen_zero = true,
            }
        }
    }

    #[test]
    fn lattice_membership_matches_search(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..3),
        den in 1i64..3,
        target in prop::collection::vec(-4i64..=4, 2),
    ) {
        let g: Vec<Vec<Scalar>> = gens.iter().map(|v| v.iter().map(|&x| frac(x, den)).collect()).collect();
        let t: Vec<Scalar> = target.iter().map(|&x| int(x)).collect();
        let combo = |c: &[i64]| -> Vec<Scalar> {
            (0..2).map(|j| g.iter().zip(c).map(|(v, &k)| &v[j] * int(k)).sum()).collect()
        };
        let found = lattice_membership(&g, &t);
        if let Some(c) = &found {
            let c: Vec<i64> = c.iter().map(|x| i64::try_from(x).unwrap()).collect();
            prop_assert_eq!(combo(&c), t.clone());
        }
        let r = -12i64..=12;
        let brute = match g.len() {
            1 => r.clone().any(|a| combo(&[a]) == t),
            _ => r.clone().any(|a| r.clone().any(|b| combo(&[a, b]) == t)),
        };
        if brute {
            prop_assert!(found.is_some());
        }
    }

    #[test]
    fn holonomy_is_functorial(
        model in graph(),
        n in 1usize..3,
        seed in any::<u64>(),
        c1 in prop::collection::vec(any::<usize>(), 0..5),
        c2 in prop::collection::vec(any::<usize>(), 0..5),
    ) {
        let rep = random_rep(&model, n, seed);
        let (p, mid) = walk(&model, 0, &c1);
        let (q, end) = walk(&model, mid, &c2);
        let hp = path_holonomy(&rep, &model, &p).unwrap();
        let hq = path_holonomy(&rep, &model, &q).unwrap();
        prop_assert_eq!(path_holonomy(&rep, &model, &p.then(&q)).unwrap(), &hq * &hp);
        let back = path_holonomy(&rep, &model, &p.then(&q).reversed(end)).unwrap();
        prop_assert!((&back * &(&hq * &hp)).is_identity());
    }

    #[test]
    fn pushed_path_has_endpoint_boundary(
        model in graph(),
        n in 1usize..3,
        seed in any::<u64>(),
        choices in prop::collection::vec(any::<usize>(), 0..6),
        x in (1usize..3).prop_flat_map(|n| matrix(n, n, 3)),
    ) {
        let rep = random_rep(&model, n, seed);
        let x = x.block(0, 0, n.min(x.rows()), n.min(x.rows()));
        prop_assume!(x.rows() == n);
        let (p, end) = walk(&model, 0, &choices);
        let chain = push_path(&rep, &model, &p, &x).unwrap();
        let t = path_holonomy(&rep, &model, &p).unwrap();
        let t_inv = inverse(&t).unwrap().unwrap();
        let mut expected = vec![Matrix::zeros(n, n); model.vertices];
        expected[end] = &(&t * &x) * &t_inv;
        expected[0] = &expected[0] - &x;
        prop_assert_eq!(hom_boundary(&rep, &model, &chain).unwrap(), expected);
    }

    #[test]
    fn conjugation_fixes_identity(g in (1usize..4).prop_flat_map(|n| matrix(n, n, 3))) {
        prop_assume!(inverse(&g).unwrap().is_some());
        let n = g.rows();
        let id = Matrix::identity(n).vectorize();
        prop_assert_eq!(&conjugation_operator(&g).unwrap() * &id, id);
    }

    #[test]
    fn scalar_adjoint_complex_is_rational(a in 1i64..6, b in 1i64..6) {
        let model = CwModel {
            vertices: 1,
            edges: vec![Edge { init: 0, term: 0 }, Edge { init: 0, term: 0 }],
            faces: vec![Face { base: 0, word: vec![Step::fwd(0), Step::fwd(1), Step::back(0), Step::back(1)] }],
            cells3: vec![],
        };
        let rep = Representation { fiber_dim: 1, holonomy: vec![Matrix::scalar(int(a)), Matrix::scalar(frac(1, b))] };
        let adj = adjoint_system(&rep).unwrap();
        prop_assert_eq!(twisted_complex(&model, &adj).unwrap(), rational_complex(&model).unwrap());
    }

    #[test]
    fn scalar_torus_class_is_zero_iff_integral(p in -6i64..=6, q in 1i64..4, r in -6i64..=6, s in 1i64..4) {
        let model = CwModel {
            vertices: 1,
            edges: vec![Edge { init: 0, term: 0 }, Edge { init: 0, term: 0 }],
            faces: vec![Face { base: 0, word: vec![Step::fwd(0), Step::fwd(1), Step::back(0), Step::back(1)] }],
            cells3: vec![],
        };
        let rep = Representation { fiber_dim: 1, holonomy: vec![Matrix::scalar(int(2)), Matrix::scalar(int(3))] };
        let z = HomChain { fiber_dim: 1, coefficients: vec![Matrix::scalar(frac(p, q)), Matrix::scalar(frac(r, s))] };
        let integral = p % q == 0 && r % s == 0;
        let zero = HomChain::zero(1, 2);
        prop_assert_eq!(d_equal(&model, &rep, &z, &zero).unwrap().is_some(), integral);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn contraction_satisfies_identity(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let c = random_acyclic_complex(&mut rng, RandomParams::default());
        let g = contraction(&c).unwrap();
        prop_assert!(propagator_residuals(&c, &g).unwrap().iter().all(Matrix::is_zero));
        let g2 = random_propagator(&c, &mut rng, 2).unwrap();
        prop_assert!(propagator_residuals(&c, &g2).unwrap().iter().all(Matrix::is_zero));
    }

    #[test]
    fn contraction_is_equivariant_under_change_of_basis(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let c = random_acyclic_complex(&mut rng, RandomParams::default());
        let (p, p_inv) = random_bases(&mut rng, &c, 2);
        let g = contraction(&c.change_basis(&p, &p_inv)).unwrap().conjugate(&p, &p_inv);
        prop_assert!(propagator_residuals(&c, &g).unwrap().iter().all(Matrix::is_zero));
    }

    #[test]
    fn glued_propagator_identities(seed in any::<u64>(), zero_y in any::<bool>()) {
        let r = random_blocked_complex(seed, RandomParams::default(), zero_y);
        let glued = glue_propagator(&r.complex, &r.ga, &r.gb).unwrap();
        let total = r.complex.total().unwrap();
        prop_assert!(propagator_residuals(&total, &glued.total).unwrap().iter().all(Matrix::is_zero));
        prop_assert!(off_diagonal_residuals(&r.complex, &r.ga, &r.gb, &glued.cross).iter().all(Matrix::is_zero));
    }
}

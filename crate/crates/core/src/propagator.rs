//! Combinatorial propagators (chain contractions) and their gluing along a
//! lower-triangular block decomposition.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, int, LinError, Matrix};
use crate::localsys::{homology_dims, SystemError, TwistedComplex};
use crate::report::Report;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropagatorError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("complex is not acyclic: H_{degree} has dimension {dim}")]
    NotAcyclic { degree: usize, dim: usize },
    #[error("propagator shape mismatch: {0}")]
    Shape(String),
    #[error("blocked complex: {0}")]
    Blocked(String),
}

/// `G_i : C_{i-1} → C_i` for every degree of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Propagator {
    pub degrees: Vec<Matrix>,
}

impl Propagator {
    /// `G_i`, the zero map of the right shape outside the stored range.
    pub fn g(&self, c: &TwistedComplex, i: isize) -> Matrix {
        if i >= 0 && (i as usize) < self.degrees.len() {
            self.degrees[i as usize].clone()
        } else {
            Matrix::zeros(c.dim(i), c.dim(i - 1))
        }
    }

    pub fn zero(c: &TwistedComplex) -> Self {
        let degrees = (0..c.dims().len() as isize).map(|i| Matrix::zeros(c.dim(i), c.dim(i - 1))).collect();
        Propagator { degrees }
    }

    /// Block `G_{p,q}` between fibre slots: rows of `p` in degree `i`,
    /// columns of `q` in degree `i - 1`.
    pub fn block(&self, i: usize, row: usize, col: usize, n: usize) -> Matrix {
        self.degrees[i].block(row, col, n, n)
    }

    pub fn check_shape(&self, c: &TwistedComplex) -> Result<(), PropagatorError> {
        if self.degrees.len() != c.dims().len() {
            return Err(PropagatorError::Shape(format!(
                "{} degrees for a complex with {}",
                self.degrees.len(),
                c.dims().len()
            )));
        }
        for (i, g) in self.degrees.iter().enumerate() {
            let want = (c.dim(i as isize), c.dim(i as isize - 1));
            if g.shape() != want {
                return Err(PropagatorError::Shape(format!(
                    "G_{i} is {}x{}, expected {}x{}",
                    g.rows(),
                    g.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(())
    }

    /// `P_i⁻¹ G_i P_{i-1}` for per-degree bases.
    pub fn conjugate(&self, p: &[Matrix], p_inv: &[Matrix]) -> Propagator {
        let degrees = self
            .degrees
            .iter()
            .enumerate()
            .map(|(i, g)| if i == 0 { &p_inv[0] * g } else { &(&p_inv[i] * g) * &p[i - 1] })
            .collect();
        Propagator { degrees }
    }
}

/// Fails with the lowest degree carrying homology.
pub fn check_acyclic(c: &TwistedComplex) -> Result<(), PropagatorError> {
    for (degree, &dim) in homology_dims(c)?.iter().enumerate() {
        if dim != 0 {
            return Err(PropagatorError::NotAcyclic { degree, dim });
        }
    }
    Ok(())
}

/// A propagator of an acyclic complex built from pivot columns.
///
/// In degree `i - 1` the basis `{∂_i e_j : j pivot of ∂_i} ∪ {e_k : k pivot
/// of ∂_{i-1}}` is used; `G_i` sends `∂_i e_j ↦ e_j` and the rest to zero.
pub fn contraction(c: &TwistedComplex) -> Result<Propagator, PropagatorError> {
    check_acyclic(c)?;
    let len = c.dims().len() as isize;
    let pivots: Vec<Vec<usize>> = (0..=len).map(|i| exactlin::rref(&c.boundary(i)).1).collect();
    let mut degrees = Vec::new();
    for i in 0..len {
        let (lo, hi) = (c.dim(i - 1), c.dim(i));
        if lo == 0 {
            degrees.push(Matrix::zeros(hi, 0));
            continue;
        }
        let d = c.boundary(i);
        let mut basis = Matrix::zeros(lo, lo);
        let mut target = Matrix::zeros(hi, lo);
        let mut k = 0;
        for &j in &pivots[i as usize] {
            basis.set_block(0, k, &d.col(j));
            target.set(j, k, int(1));
            k += 1;
        }
        if i >= 1 {
            for &j in &pivots[i as usize - 1] {
                basis.set(j, k, int(1));
                k += 1;
            }
        }
        debug_assert_eq!(k, lo);
        let inv = exactlin::inverse(&basis)?.ok_or_else(|| PropagatorError::NotAcyclic { degree: i as usize - 1, dim: lo - k })?;
        degrees.push(&target * &inv);
    }
    Ok(Propagator { degrees })
}

/// `∂_{i+1} G_{i+1} + G_i ∂_i - id` for every degree.
pub fn propagator_residuals(c: &TwistedComplex, g: &Propagator) -> Result<Vec<Matrix>, PropagatorError> {
    g.check_shape(c)?;
    Ok((0..c.dims().len() as isize)
        .map(|i| {
            let lhs = &(&c.boundary(i + 1) * &g.g(c, i + 1)) + &(&g.g(c, i) * &c.boundary(i));
            &lhs - &Matrix::identity(c.dim(i))
        })
        .collect())
}

/// One check per degree; failing checks carry the exact residual.
pub fn verify_propagator(c: &TwistedComplex, g: &Propagator) -> Report {
    let mut report = Report::new("propagator");
    match propagator_residuals(c, g) {
        Err(e) => report.fail("shape", e.to_string()),
        Ok(res) => {
            for (i, r) in res.iter().enumerate() {
                let name = format!("degree {i}: ∂G + G∂ = id");
                if r.is_zero() {
                    report.pass(name, "");
                } else {
                    report.fail(name, format!("residual {r}"));
                }
            }
        }
    }
    report
}

/// Two complexes of equal length and cross maps `∂^{ab}_k : C^a_k → C^b_{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockedComplex {
    pub a: TwistedComplex,
    pub b: TwistedComplex,
    /// `cross[k]` is `∂^{ab}_k`; index 0 is the zero map.
    pub cross: Vec<Matrix>,
}

impl BlockedComplex {
    pub fn new(a: TwistedComplex, b: TwistedComplex, cross: Vec<Matrix>) -> Result<Self, PropagatorError> {
        let len = a.dims().len().max(b.dims().len());
        let a = pad(&a, len)?;
        let b = pad(&b, len)?;
        let mut full = cross;
        full.resize_with(len, || Matrix::zeros(0, 0));
        for (k, m) in full.iter_mut().enumerate() {
            let want = (b.dim(k as isize - 1), a.dim(k as isize));
            if m.shape() == (0, 0) && want != (0, 0) {
                *m = Matrix::zeros(want.0, want.1);
            }
            if m.shape() != want {
                return Err(PropagatorError::Blocked(format!(
                    "∂^ab_{k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        let bc = BlockedComplex { a, b, cross: full };
        for k in 1..len {
            let k = k as isize;
            let r = &(&bc.b.boundary(k) * &bc.cross(k + 1)) + &(&bc.cross(k) * &bc.a.boundary(k + 1));
            if !r.is_zero() {
                return Err(PropagatorError::Blocked(format!("∂^b ∂^ab + ∂^ab ∂^a ≠ 0 in degree {k}")));
            }
        }
        Ok(bc)
    }

    pub fn len(&self) -> usize {
        self.cross.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cross.is_empty()
    }

    pub fn cross(&self, k: isize) -> Matrix {
        if k >= 0 && (k as usize) < self.cross.len() {
            self.cross[k as usize].clone()
        } else {
            Matrix::zeros(self.b.dim(k - 1), self.a.dim(k))
        }
    }

    /// The total complex with `∂_k = [[∂^a_k, 0], [∂^ab_k, ∂^b_k]]`.
    pub fn total(&self) -> Result<TwistedComplex, PropagatorError> {
        let len = self.len() as isize;
        let dims = (0..len).map(|i| self.a.dim(i) + self.b.dim(i)).collect();
        let higher = (1..len)
            .map(|k| {
                Matrix::blocks2(
                    &self.a.boundary(k),
                    &Matrix::zeros(self.a.dim(k - 1), self.b.dim(k)),
                    &self.cross(k),
                    &self.b.boundary(k),
                )
            })
            .collect::<Result<_, _>>()?;
        Ok(TwistedComplex::new(dims, higher)?)
    }
}

fn pad(c: &TwistedComplex, len: usize) -> Result<TwistedComplex, PropagatorError> {
    if c.dims().len() == len {
        return Ok(c.clone());
    }
    let dims: Vec<usize> = (0..len as isize).map(|i| c.dim(i)).collect();
    let higher = (1..len as isize).map(|i| c.boundary(i)).collect();
    Ok(TwistedComplex::new(dims, higher)?)
}

/// Output of [`glue_propagator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedPropagator {
    pub total: Propagator,
    /// `G^{ab}_k : C^a_{k-1} → C^b_k`.
    pub cross: Vec<Matrix>,
}

/// Builds `G^{ab}` degree by degree from `G^{ab}_0 = 0` via
/// `G^{ab}_{k+1} = -(G^b ∂^{ab} G^a + G^b G^{ab}_k ∂^a + G^b G^b_k ∂^{ab}_k)`
/// and assembles the lower-triangular total propagator.
pub fn glue_propagator(bc: &BlockedComplex, ga: &Propagator, gb: &Propagator) -> Result<GluedPropagator, PropagatorError> {
    ga.check_shape(&bc.a)?;
    gb.check_shape(&bc.b)?;
    let len = bc.len() as isize;
    let mut cross = vec![Matrix::zeros(bc.b.dim(0), bc.a.dim(-1))];
    for k in 0..len - 1 {
        let gb1 = gb.g(&bc.b, k + 1);
        let t1 = &(&gb1 * &bc.cross(k + 1)) * &ga.g(&bc.a, k + 1);
        let t2 = &(&gb1 * &cross[k as usize]) * &bc.a.boundary(k);
        let t3 = &(&gb1 * &gb.g(&bc.b, k)) * &bc.cross(k);
        cross.push(-&(&(&t1 + &t2) + &t3));
    }
    let degrees = (0..len)
        .map(|k| {
            Matrix::blocks2(
                &ga.g(&bc.a, k),
                &Matrix::zeros(bc.a.dim(k), bc.b.dim(k - 1)),
                &cross[k as usize],
                &gb.g(&bc.b, k),
            )
        })
        .collect::<Result<_, _>>()?;
    Ok(GluedPropagator { total: Propagator { degrees }, cross })
}

/// `∂^{ab}_{k+1} G^a_{k+1} + ∂^b_{k+1} G^{ab}_{k+1} + G^{ab}_k ∂^a_k + G^b_k ∂^{ab}_k`
/// for every degree `k`; all vanish for a correct gluing.
pub fn off_diagonal_residuals(bc: &BlockedComplex, ga: &Propagator, gb: &Propagator, gab: &[Matrix]) -> Vec<Matrix> {
    let len = bc.len() as isize;
    let cross_g = |k: isize| {
        if k >= 0 && k < gab.len() as isize {
            gab[k as usize].clone()
        } else {
            Matrix::zeros(bc.b.dim(k), bc.a.dim(k - 1))
        }
    };
    (0..len)
        .map(|k| {
            let t1 = &bc.cross(k + 1) * &ga.g(&bc.a, k + 1);
            let t2 = &bc.b.boundary(k + 1) * &cross_g(k + 1);
            let t3 = &cross_g(k) * &bc.a.boundary(k);
            let t4 = &gb.g(&bc.b, k) * &bc.cross(k);
            &(&(&t1 + &t2) + &t3) + &t4
        })
        .collect()
}

/// Size limits for the random generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    /// Highest degree of the generated complexes.
    pub top: usize,
    /// Number of elementary `[V → V]` summands, each contributing two cells.
    pub max_pieces: usize,
    pub max_fiber: usize,
    /// Entries of random matrices are drawn from `-max_entry..=max_entry`.
    pub max_entry: i64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { top: 3, max_pieces: 4, max_fiber: 3, max_entry: 3 }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut impl Rng, max: i64) -> i64 {
    rng.gen_range(-max..=max)
}

/// A random integer matrix.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, max: i64) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, int(small(rng, max)));
        }
    }
    m
}

/// A random invertible matrix `L U` with unit lower `L` and upper `U`
/// whose diagonal lies in `{1, -1, 2}`; returns it with its inverse.
pub fn random_invertible(rng: &mut impl Rng, n: usize, max: i64) -> (Matrix, Matrix) {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            if c < r {
                l.set(r, c, int(small(rng, max)));
            } else if c > r {
                u.set(r, c, int(small(rng, max)));
            } else {
                u.set(r, c, int([1, -1, 2][rng.gen_range(0..3)]));
            }
        }
    }
    let p = &l * &u;
    let inv = exactlin::inverse(&p).expect("square").expect("LU with nonzero diagonal is invertible");
    (p, inv)
}

/// Per-degree random bases for a complex.
pub fn random_bases(rng: &mut impl Rng, c: &TwistedComplex, max: i64) -> (Vec<Matrix>, Vec<Matrix>) {
    c.dims().iter().map(|&d| random_invertible(rng, d, max)).unzip()
}

/// A random acyclic complex: a sum of `[V → V]` pieces with random
/// invertible maps, seen through a random change of basis.
pub fn random_acyclic_complex(rng: &mut impl Rng, params: RandomParams) -> TwistedComplex {
    let top = params.top.max(1);
    let n = rng.gen_range(1..=params.max_fiber.max(1));
    let pieces: Vec<(usize, Matrix)> = (0..rng.gen_range(1..=params.max_pieces.max(1)))
        .map(|_| (rng.gen_range(1..=top), random_invertible(rng, n, params.max_entry).0))
        .collect();
    let mut dims = vec![0usize; top + 1];
    for (deg, _) in &pieces {
        dims[*deg] += n;
        dims[*deg - 1] += n;
    }
    let mut higher: Vec<Matrix> = (1..=top).map(|i| Matrix::zeros(dims[i - 1], dims[i])).collect();
    let mut fill = vec![0usize; top + 1];
    for (deg, m) in &pieces {
        let (lo, hi) = (*deg - 1, *deg);
        higher[hi - 1].set_block(fill[lo], fill[hi], m);
        fill[lo] += n;
        fill[hi] += n;
    }
    let c = TwistedComplex::new(dims, higher).expect("direct sum of two-term complexes");
    let (p, p_inv) = random_bases(rng, &c, params.max_entry);
    c.change_basis(&p, &p_inv)
}

/// A random blocked complex with acyclic diagonal parts, their contraction
/// propagators, and the degree-0 map `Y` with `∂^{ab} = ∂^b Y - Y ∂^a`.
#[derive(Debug, Clone)]
pub struct RandomBlocked {
    pub complex: BlockedComplex,
    pub ga: Propagator,
    pub gb: Propagator,
    pub y: Vec<Matrix>,
}

pub fn random_blocked_complex(seed: u64, params: RandomParams, zero_y: bool) -> RandomBlocked {
    let mut rng = rng_from_seed(seed);
    let a = random_acyclic_complex(&mut rng, params);
    let b = random_acyclic_complex(&mut rng, params);
    let len = a.dims().len().max(b.dims().len()) as isize;
    let y: Vec<Matrix> = (0..len)
        .map(|k| {
            let (r, c) = (b.dim(k), a.dim(k));
            if zero_y {
                Matrix::zeros(r, c)
            } else {
                random_matrix(&mut rng, r, c, params.max_entry)
            }
        })
        .collect();
    let y_at = |k: isize| if k >= 0 && k < len { y[k as usize].clone() } else { Matrix::zeros(b.dim(k), a.dim(k)) };
    let cross = (0..len).map(|k| &(&b.boundary(k) * &y_at(k)) - &(&y_at(k - 1) * &a.boundary(k))).collect();
    let ga = contraction(&a).expect("generated complex is acyclic");
    let gb = contraction(&b).expect("generated complex is acyclic");
    let complex = BlockedComplex::new(a, b, cross).expect("telescoping cross map");
    RandomBlocked { complex, ga, gb, y }
}

/// `P⁻¹ · contraction(P ∂ P⁻¹) · P` for a random per-degree basis `P`.
pub fn random_propagator(c: &TwistedComplex, rng: &mut impl Rng, max_entry: i64) -> Result<Propagator, PropagatorError> {
    let (p, p_inv) = random_bases(rng, c, max_entry);
    let g = contraction(&c.change_basis(&p, &p_inv))?;
    Ok(g.conjugate(&p, &p_inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(m: Matrix) -> TwistedComplex {
        let n = m.rows();
        TwistedComplex::new(vec![n, n], vec![m]).unwrap()
    }

    #[test]
    fn identity_cone_contracts_to_identity() {
        let c = two_term(Matrix::identity(2));
        let g = contraction(&c).unwrap();
        assert_eq!(g.degrees[1], Matrix::identity(2));
        assert!(verify_propagator(&c, &g).verdict);
    }

    #[test]
    fn zero_propagator_fails_with_minus_identity() {
        let c = two_term(Matrix::identity(1));
        let res = propagator_residuals(&c, &Propagator::zero(&c)).unwrap();
        assert_eq!(res[0], Matrix::scalar(int(-1)));
        assert!(!verify_propagator(&c, &Propagator::zero(&c)).verdict);
    }

    #[test]
    fn non_acyclic_rejected() {
        let c = two_term(Matrix::zeros(1, 1));
        assert_eq!(contraction(&c), Err(PropagatorError::NotAcyclic { degree: 0, dim: 1 }));
    }

    #[test]
    fn glue_one_dimensional_example() {
        let a = two_term(Matrix::identity(1));
        let b = two_term(Matrix::identity(1));
        let y = int(5);
        let bc = BlockedComplex::new(a, b, vec![Matrix::zeros(0, 1), Matrix::scalar(y.clone())]).unwrap();
        let ga = contraction(&bc.a).unwrap();
        let gb = contraction(&bc.b).unwrap();
        let glued = glue_propagator(&bc, &ga, &gb).unwrap();
        assert_eq!(glued.cross[1], Matrix::scalar(-y));
        assert!(verify_propagator(&bc.total().unwrap(), &glued.total).verdict);
        assert!(off_diagonal_residuals(&bc, &ga, &gb, &glued.cross).iter().all(Matrix::is_zero));
    }

    #[test]
    fn zero_cross_gives_zero_glue() {
        let r = random_blocked_complex(7, RandomParams::default(), true);
        assert!(r.complex.cross.iter().all(Matrix::is_zero));
        let glued = glue_propagator(&r.complex, &r.ga, &r.gb).unwrap();
        assert!(glued.cross.iter().all(Matrix::is_zero));
    }

    #[test]
    fn random_blocked_is_reproducible() {
        let p = RandomParams::default();
        let (x, y) = (random_blocked_complex(3, p, false), random_blocked_complex(3, p, false));
        assert_eq!(x.complex, y.complex);
    }

    #[test]
    fn random_propagator_verifies() {
        let mut rng = rng_from_seed(11);
        let c = random_acyclic_complex(&mut rng, RandomParams::default());
        let g = random_propagator(&c, &mut rng, 2).unwrap();
        assert!(verify_propagator(&c, &g).verdict);
    }
}

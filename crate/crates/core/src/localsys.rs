//! Cell models, flat local systems and twisted cellular chain complexes.
//!
//! Conventions used throughout the crate:
//!
//! * A path is walked step by step and transport composes left to right:
//!   the holonomy of `σ` followed by `τ` is `hol(τ) * hol(σ)`.
//! * A 1-chain coefficient lives in the fibre over the initial vertex of
//!   its edge.
//! * The Hom system `Hom(V, V)` is vectorized row-major; transport along an
//!   edge with holonomy `g` acts as `X ↦ g X g⁻¹`.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, int, IntMatrix, LinError, Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("{0}")]
    Lin(#[from] LinError),
    #[error("path not composable at step {step}: edge {edge} does not start at vertex {at}")]
    NotComposable { step: usize, edge: usize, at: usize },
    #[error("edge {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("face {0} out of range")]
    FaceOutOfRange(usize),
    #[error("boundary word not closed: face {0}")]
    OpenFace(usize),
    #[error("holonomy not invertible: edge {0}")]
    NotInvertible(usize),
    #[error("holonomy of edge {edge} is {rows}x{cols}, expected {n}x{n}")]
    BadHolonomy { edge: usize, rows: usize, cols: usize, n: usize },
    #[error("representation has {got} holonomies for {expected} edges")]
    HolonomyCount { got: usize, expected: usize },
    #[error("representation is not flat around face {0}")]
    NotFlat(usize),
    #[error("boundary of degree {0} composed with degree {1} is nonzero")]
    BoundarySquare(usize, usize),
    #[error("3-cell {0} boundary entry refers to a path that does not end at its face base")]
    BadCellPath(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    #[serde(rename = "+")]
    Forward,
    #[serde(rename = "-")]
    Backward,
}

/// One step of a path: traverse `edge` forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, Dir)", into = "(usize, Dir)")]
pub struct Step {
    pub edge: usize,
    pub dir: Dir,
}

impl Step {
    pub fn fwd(edge: usize) -> Self {
        Step { edge, dir: Dir::Forward }
    }

    pub fn back(edge: usize) -> Self {
        Step { edge, dir: Dir::Backward }
    }

    pub fn reversed(self) -> Self {
        let dir = match self.dir {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        };
        Step { edge: self.edge, dir }
    }
}

impl From<(usize, Dir)> for Step {
    fn from((edge, dir): (usize, Dir)) -> Self {
        Step { edge, dir }
    }
}

impl From<Step> for (usize, Dir) {
    fn from(s: Step) -> Self {
        (s.edge, s.dir)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub init: usize,
    pub term: usize,
}

/// A based edge path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWord {
    pub base: usize,
    pub steps: Vec<Step>,
}

impl PathWord {
    pub fn new(base: usize, steps: Vec<Step>) -> Self {
        PathWord { base, steps }
    }

    pub fn empty(base: usize) -> Self {
        PathWord { base, steps: Vec::new() }
    }

    /// The reverse path, based at `end`.
    pub fn reversed(&self, end: usize) -> Self {
        PathWord { base: end, steps: self.steps.iter().rev().map(|s| s.reversed()).collect() }
    }

    pub fn then(&self, other: &PathWord) -> PathWord {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        PathWord { base: self.base, steps }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub base: usize,
    pub word: Vec<Step>,
}

/// One term `sign * face` of a 3-cell boundary; `path` runs from the
/// 3-cell's base vertex to the face's base vertex and carries the fibre.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFace {
    pub face: usize,
    pub sign: i64,
    #[serde(default)]
    pub path: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell3 {
    pub base: usize,
    pub boundary: Vec<CellFace>,
}

/// Combinatorial cell model of a manifold (up to homotopy).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwModel {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    #[serde(default)]
    pub cells3: Vec<Cell3>,
}

impl CwModel {
    /// Checks ranges, composability of every face word and 3-cell path,
    /// and that face words are closed.
    pub fn validate(&self) -> Result<(), SystemError> {
        for e in &self.edges {
            for v in [e.init, e.term] {
                if v >= self.vertices {
                    return Err(SystemError::VertexOutOfRange(v));
                }
            }
        }
        for (i, f) in self.faces.iter().enumerate() {
            let end = self.path_end(&PathWord::new(f.base, f.word.clone()))?;
            if end != f.base {
                return Err(SystemError::OpenFace(i));
            }
        }
        for (i, c) in self.cells3.iter().enumerate() {
            for cf in &c.boundary {
                let face = self.faces.get(cf.face).ok_or(SystemError::FaceOutOfRange(cf.face))?;
                let end = self.path_end(&PathWord::new(c.base, cf.path.clone()))?;
                if end != face.base {
                    return Err(SystemError::BadCellPath(i));
                }
            }
        }
        Ok(())
    }

    /// End vertex of a path, checking composability.
    pub fn path_end(&self, path: &PathWord) -> Result<usize, SystemError> {
        if path.base >= self.vertices {
            return Err(SystemError::VertexOutOfRange(path.base));
        }
        let mut at = path.base;
        for (i, s) in path.steps.iter().enumerate() {
            let e = self.edges.get(s.edge).ok_or(SystemError::EdgeOutOfRange(s.edge))?;
            let (from, to) = match s.dir {
                Dir::Forward => (e.init, e.term),
                Dir::Backward => (e.term, e.init),
            };
            if from != at {
                return Err(SystemError::NotComposable { step: i, edge: s.edge, at });
            }
            at = to;
        }
        Ok(at)
    }

    /// Integral cellular boundary `∂₁` as a `vertices x edges` matrix.
    pub fn integral_boundary1(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.vertices, self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            let t = m.get(e.term, j) + BigInt::one();
            m.set(e.term, j, t);
            let s = m.get(e.init, j) - BigInt::one();
            m.set(e.init, j, s);
        }
        m
    }

    /// Integral 1-chain traced by a path (forward steps +1, backward -1).
    pub fn path_chain(&self, path: &PathWord) -> Vec<i64> {
        let mut c = vec![0; self.edges.len()];
        for s in &path.steps {
            c[s.edge] += match s.dir {
                Dir::Forward => 1,
                Dir::Backward => -1,
            };
        }
        c
    }

    /// A shortest edge path from `from` to `to` (breadth-first, edges in
    /// index order, forward before backward).
    pub fn find_path(&self, from: usize, to: usize) -> Option<PathWord> {
        let mut prev: Vec<Option<(usize, Step)>> = vec![None; self.vertices];
        let mut seen = vec![false; self.vertices];
        let mut queue = std::collections::VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for (i, e) in self.edges.iter().enumerate() {
                for (src, dst, step) in [(e.init, e.term, Step::fwd(i)), (e.term, e.init, Step::back(i))] {
                    if src == v && !seen[dst] {
                        seen[dst] = true;
                        prev[dst] = Some((v, step));
                        queue.push_back(dst);
                    }
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut steps = Vec::new();
        let mut at = to;
        while let Some((p, s)) = prev[at] {
            steps.push(s);
            at = p;
        }
        steps.reverse();
        Some(PathWord::new(from, steps))
    }
}

/// A representation given by one invertible holonomy matrix per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub fiber_dim: usize,
    pub holonomy: Vec<Matrix>,
}

impl Representation {
    pub fn trivial(fiber_dim: usize, edges: usize) -> Self {
        Representation { fiber_dim, holonomy: vec![Matrix::identity(fiber_dim); edges] }
    }

    /// Checks the number, shapes and invertibility of the holonomies.
    pub fn check_invertible(&self, model: &CwModel) -> Result<(), SystemError> {
        if self.holonomy.len() != model.edges.len() {
            return Err(SystemError::HolonomyCount {
                got: self.holonomy.len(),
                expected: model.edges.len(),
            });
        }
        let n = self.fiber_dim;
        for (i, h) in self.holonomy.iter().enumerate() {
            if h.shape() != (n, n) {
                return Err(SystemError::BadHolonomy { edge: i, rows: h.rows(), cols: h.cols(), n });
            }
            if exactlin::inverse(h)?.is_none() {
                return Err(SystemError::NotInvertible(i));
            }
        }
        Ok(())
    }

    /// Checks shapes, invertibility and flatness around every face.
    pub fn validate(&self, model: &CwModel) -> Result<(), SystemError> {
        self.check_invertible(model)?;
        for i in 0..model.faces.len() {
            if !self.is_flat_at(model, i)? {
                return Err(SystemError::NotFlat(i));
            }
        }
        Ok(())
    }

    pub fn is_flat_at(&self, model: &CwModel, face: usize) -> Result<bool, SystemError> {
        let f = &model.faces[face];
        Ok(path_holonomy(self, model, &PathWord::new(f.base, f.word.clone()))?.is_identity())
    }

    fn edge_inverse(&self, edge: usize) -> Result<Matrix, SystemError> {
        exactlin::inverse(&self.holonomy[edge])?.ok_or(SystemError::NotInvertible(edge))
    }

    /// The dual representation `g ↦ (g⁻¹)ᵀ`.
    pub fn dual(&self) -> Result<Representation, SystemError> {
        let holonomy = (0..self.holonomy.len())
            .map(|e| Ok(self.edge_inverse(e)?.transpose()))
            .collect::<Result<_, SystemError>>()?;
        Ok(Representation { fiber_dim: self.fiber_dim, holonomy })
    }
}

/// Transport along a path: backward steps use the inverse matrix, later
/// steps multiply on the left.
pub fn path_holonomy(rep: &Representation, model: &CwModel, path: &PathWord) -> Result<Matrix, SystemError> {
    model.path_end(path)?;
    let mut t = Matrix::identity(rep.fiber_dim);
    for s in &path.steps {
        let h = match s.dir {
            Dir::Forward => rep.holonomy[s.edge].clone(),
            Dir::Backward => rep.edge_inverse(s.edge)?,
        };
        t = &h * &t;
    }
    Ok(t)
}

/// The matrix of `X ↦ g X g⁻¹` on row-major vectorized `n x n` matrices.
pub fn conjugation_operator(g: &Matrix) -> Result<Matrix, SystemError> {
    let inv = exactlin::inverse(g)?.ok_or(SystemError::NotInvertible(usize::MAX))?;
    Ok(g.kron(&inv.transpose()))
}

/// The Hom local system `Hom(V, V)` with fibre dimension `n²`.
pub fn adjoint_system(rep: &Representation) -> Result<Representation, SystemError> {
    let holonomy = rep
        .holonomy
        .iter()
        .enumerate()
        .map(|(i, g)| {
            conjugation_operator(g).map_err(|e| match e {
                SystemError::NotInvertible(_) => SystemError::NotInvertible(i),
                other => other,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Representation { fiber_dim: rep.fiber_dim * rep.fiber_dim, holonomy })
}

/// A finite chain complex of rational vector spaces, degrees `0..=top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedComplex {
    dims: Vec<usize>,
    // boundaries[i] is ∂_i : C_i → C_{i-1}; boundaries[0] is 0 x dims[0].
    boundaries: Vec<Matrix>,
}

impl TwistedComplex {
    /// Builds a complex from `∂_1, ..., ∂_top`; checks shapes and `∂∂ = 0`.
    pub fn new(dims: Vec<usize>, higher: Vec<Matrix>) -> Result<Self, SystemError> {
        let c = Self::new_unchecked(dims, higher)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Like [`TwistedComplex::new`] but only checks shapes.
    pub fn new_unchecked(dims: Vec<usize>, higher: Vec<Matrix>) -> Result<Self, SystemError> {
        if dims.is_empty() {
            if !higher.is_empty() {
                return Err(LinError::Shape("boundaries for an empty complex".into()).into());
            }
            return Ok(TwistedComplex { dims, boundaries: Vec::new() });
        }
        if higher.len() + 1 != dims.len() {
            return Err(LinError::Shape(format!(
                "{} boundary maps for {} degrees",
                higher.len(),
                dims.len()
            ))
            .into());
        }
        for (i, d) in higher.iter().enumerate() {
            let deg = i + 1;
            if d.shape() != (dims[deg - 1], dims[deg]) {
                return Err(LinError::Shape(format!(
                    "∂_{deg} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[deg - 1],
                    dims[deg]
                ))
                .into());
            }
        }
        let mut boundaries = vec![Matrix::zeros(0, dims[0])];
        boundaries.extend(higher);
        Ok(TwistedComplex { dims, boundaries })
    }

    pub fn zero() -> Self {
        TwistedComplex { dims: Vec::new(), boundaries: Vec::new() }
    }

    /// Index of the highest degree, or `None` for the empty complex.
    pub fn top(&self) -> Option<usize> {
        self.dims.len().checked_sub(1)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension of `C_i`; zero outside the stored range.
    pub fn dim(&self, i: isize) -> usize {
        if i < 0 {
            0
        } else {
            self.dims.get(i as usize).copied().unwrap_or(0)
        }
    }

    /// `∂_i : C_i → C_{i-1}`, the zero map of the right shape out of range.
    pub fn boundary(&self, i: isize) -> Matrix {
        if i >= 1 && (i as usize) < self.boundaries.len() {
            self.boundaries[i as usize].clone()
        } else {
            Matrix::zeros(self.dim(i - 1), self.dim(i))
        }
    }

    pub fn check_square_zero(&self) -> Result<(), SystemError> {
        for i in 2..self.dims.len() {
            let i = i as isize;
            if !(&self.boundary(i - 1) * &self.boundary(i)).is_zero() {
                return Err(SystemError::BoundarySquare(i as usize - 1, i as usize));
            }
        }
        Ok(())
    }

    /// Conjugates by per-degree invertible matrices: `∂'_i = P_{i-1} ∂_i P_i⁻¹`.
    pub fn change_basis(&self, p: &[Matrix], p_inv: &[Matrix]) -> TwistedComplex {
        let higher = (1..self.dims.len())
            .map(|i| &(&p[i - 1] * &self.boundaries[i]) * &p_inv[i])
            .collect();
        TwistedComplex::new_unchecked(self.dims.clone(), higher).expect("shapes preserved")
    }
}

fn offsets(counts: usize, n: usize) -> impl Fn(usize) -> usize {
    move |cell| {
        debug_assert!(cell < counts);
        cell * n
    }
}

/// Pushes `coeff` (a fibre vector at the path's base) along the path as a
/// twisted 1-chain, returned as a vector of length `edges * n`.
///
/// A forward step through `e` adds `e ⊗ T(coeff)` and then advances the
/// running transport `T`; a backward step first advances `T` through `e⁻¹`
/// and then adds `-e ⊗ T(coeff)`.
pub fn push_vector(
    rep: &Representation,
    model: &CwModel,
    path: &PathWord,
    coeff: &Matrix,
) -> Result<Matrix, SystemError> {
    model.path_end(path)?;
    let n = rep.fiber_dim;
    if coeff.shape() != (n, 1) {
        return Err(LinError::Shape(format!("coefficient must be {n}x1")).into());
    }
    let at = offsets(model.edges.len(), n);
    let mut out = Matrix::zeros(model.edges.len() * n, 1);
    let mut current = coeff.clone();
    for s in &path.steps {
        match s.dir {
            Dir::Forward => {
                out.add_block(at(s.edge), 0, &current);
                current = &rep.holonomy[s.edge] * &current;
            }
            Dir::Backward => {
                current = &rep.edge_inverse(s.edge)? * &current;
                out.add_block(at(s.edge), 0, &-&current);
            }
        }
    }
    Ok(out)
}

/// Twisted cellular chain complex of `model` with coefficients in `rep`,
/// degrees 0 to 2 (or 3 when the model carries 3-cells).
pub fn twisted_complex(model: &CwModel, rep: &Representation) -> Result<TwistedComplex, SystemError> {
    model.validate()?;
    rep.validate(model)?;
    let n = rep.fiber_dim;
    let (nv, ne, nf) = (model.vertices, model.edges.len(), model.faces.len());

    let mut d1 = Matrix::zeros(nv * n, ne * n);
    for (j, e) in model.edges.iter().enumerate() {
        d1.add_block(e.term * n, j * n, &rep.holonomy[j]);
        d1.add_block(e.init * n, j * n, &-&Matrix::identity(n));
    }

    let mut d2 = Matrix::zeros(ne * n, nf * n);
    for (j, f) in model.faces.iter().enumerate() {
        let path = PathWord::new(f.base, f.word.clone());
        for k in 0..n {
            let mut e = Matrix::zeros(n, 1);
            e.set(k, 0, Scalar::one());
            let col = push_vector(rep, model, &path, &e)?;
            d2.add_block(0, j * n + k, &col);
        }
    }

    let mut dims = vec![nv * n, ne * n, nf * n];
    let mut higher = vec![d1, d2];
    if !model.cells3.is_empty() {
        let nc = model.cells3.len();
        let mut d3 = Matrix::zeros(nf * n, nc * n);
        for (j, c) in model.cells3.iter().enumerate() {
            for cf in &c.boundary {
                let t = path_holonomy(rep, model, &PathWord::new(c.base, cf.path.clone()))?;
                d3.add_block(cf.face * n, j * n, &t.scale(&int(cf.sign)));
            }
        }
        dims.push(nc * n);
        higher.push(d3);
    }
    TwistedComplex::new(dims, higher)
}

/// Betti numbers `dim ker ∂_i - rank ∂_{i+1}` per degree.
pub fn homology_dims(c: &TwistedComplex) -> Result<Vec<usize>, SystemError> {
    c.check_square_zero()?;
    let top = match c.top() {
        Some(t) => t as isize,
        None => return Ok(Vec::new()),
    };
    let ranks: Vec<usize> = (0..=top + 1).map(|i| exactlin::rank(&c.boundary(i))).collect();
    Ok((0..=top)
        .map(|i| c.dim(i) - ranks[i as usize] - ranks[i as usize + 1])
        .collect())
}

/// A preimage `w` with `∂_{i+1} w = z`, if `z` is a boundary.
pub fn boundary_membership(c: &TwistedComplex, degree: usize, z: &Matrix) -> Result<Option<Matrix>, SystemError> {
    let d = c.boundary(degree as isize + 1);
    if z.shape() != (d.rows(), 1) {
        return Err(LinError::Shape(format!(
            "chain of length {} in degree {degree} of dimension {}",
            z.rows(),
            d.rows()
        ))
        .into());
    }
    Ok(exactlin::rank_and_solve(&d, Some(z))?.solution)
}

/// A twisted 1-chain with `Hom(V, V)` coefficients, one `n x n` matrix per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomChain {
    pub fiber_dim: usize,
    pub coefficients: Vec<Matrix>,
}

impl HomChain {
    pub fn zero(fiber_dim: usize, edges: usize) -> Self {
        HomChain { fiber_dim, coefficients: vec![Matrix::zeros(fiber_dim, fiber_dim); edges] }
    }

    pub fn edges(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Matrix::is_zero)
    }

    /// Integer chain times the identity section.
    pub fn from_integral(fiber_dim: usize, chain: &[i64]) -> Self {
        let id = Matrix::identity(fiber_dim);
        HomChain { fiber_dim, coefficients: chain.iter().map(|&k| id.scale(&int(k))).collect() }
    }

    pub fn from_integral_big(fiber_dim: usize, chain: &[BigInt]) -> Self {
        let id = Matrix::identity(fiber_dim);
        HomChain {
            fiber_dim,
            coefficients: chain
                .iter()
                .map(|k| id.scale(&Scalar::from_integer(k.clone())))
                .collect(),
        }
    }

    /// Row-major vectorization, matching the adjoint twisted complex basis.
    pub fn to_vector(&self) -> Matrix {
        let n2 = self.fiber_dim * self.fiber_dim;
        let mut v = Matrix::zeros(self.edges() * n2, 1);
        for (e, m) in self.coefficients.iter().enumerate() {
            v.set_block(e * n2, 0, &m.vectorize());
        }
        v
    }

    pub fn from_vector(fiber_dim: usize, v: &Matrix) -> Result<Self, SystemError> {
        let n2 = fiber_dim * fiber_dim;
        if n2 == 0 || v.cols() != 1 || !v.rows().is_multiple_of(n2) {
            return Err(LinError::Shape("vector length is not a multiple of n²".into()).into());
        }
        let coefficients = (0..v.rows() / n2)
            .map(|e| Matrix::unvectorize(&v.block(e * n2, 0, n2, 1), fiber_dim, fiber_dim))
            .collect::<Result<_, _>>()?;
        Ok(HomChain { fiber_dim, coefficients })
    }

    pub fn add(&self, other: &HomChain) -> Result<HomChain, SystemError> {
        self.check_compatible(other)?;
        Ok(HomChain {
            fiber_dim: self.fiber_dim,
            coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &HomChain) -> Result<HomChain, SystemError> {
        self.check_compatible(other)?;
        Ok(HomChain {
            fiber_dim: self.fiber_dim,
            coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a - b).collect(),
        })
    }

    fn check_compatible(&self, other: &HomChain) -> Result<(), SystemError> {
        if self.fiber_dim != other.fiber_dim || self.edges() != other.edges() {
            return Err(LinError::Shape(format!(
                "chains over {} edges (n={}) and {} edges (n={})",
                self.edges(),
                self.fiber_dim,
                other.edges(),
                other.fiber_dim
            ))
            .into());
        }
        Ok(())
    }

    /// Pushes forward along an edge map (`edge_map[e]` is the image edge).
    pub fn push_forward(&self, edge_map: &[usize], target_edges: usize) -> HomChain {
        let mut out = HomChain::zero(self.fiber_dim, target_edges);
        for (e, m) in self.coefficients.iter().enumerate() {
            out.coefficients[edge_map[e]] = &out.coefficients[edge_map[e]] + m;
        }
        out
    }
}

/// Pushes a Hom-valued coefficient along a path in the Hom system of `rep`.
pub fn push_path(
    rep: &Representation,
    model: &CwModel,
    path: &PathWord,
    coeff: &Matrix,
) -> Result<HomChain, SystemError> {
    let n = rep.fiber_dim;
    if coeff.shape() != (n, n) {
        return Err(LinError::Shape(format!("coefficient must be {n}x{n}")).into());
    }
    let adj = adjoint_system(rep)?;
    let v = push_vector(&adj, model, path, &coeff.vectorize())?;
    HomChain::from_vector(n, &v)
}

/// Twisted boundary `∂₁` of a Hom-valued chain, one `n x n` matrix per vertex.
pub fn hom_boundary(rep: &Representation, model: &CwModel, chain: &HomChain) -> Result<Vec<Matrix>, SystemError> {
    let n = rep.fiber_dim;
    let mut out = vec![Matrix::zeros(n, n); model.vertices];
    for (e, x) in chain.coefficients.iter().enumerate() {
        let edge = model.edges.get(e).ok_or(SystemError::EdgeOutOfRange(e))?;
        let g = &rep.holonomy[e];
        let inv = rep.edge_inverse(e)?;
        out[edge.term] = &out[edge.term] + &(&(g * x) * &inv);
        out[edge.init] = &out[edge.init] - x;
    }
    Ok(out)
}

/// Whether a Hom-valued chain is a twisted cycle.
pub fn is_hom_cycle(rep: &Representation, model: &CwModel, chain: &HomChain) -> Result<bool, SystemError> {
    Ok(hom_boundary(rep, model, chain)?.iter().all(Matrix::is_zero))
}

/// Untwisted rational cellular complex.
pub fn rational_complex(model: &CwModel) -> Result<TwistedComplex, SystemError> {
    twisted_complex(model, &Representation::trivial(1, model.edges.len()))
}

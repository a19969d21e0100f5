//! Combinatorial Morse data and the twisted Morse–Smale complex.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, int, Matrix, Scalar};
use crate::localsys::{path_holonomy, CwModel, PathWord, Representation, Step, SystemError, TwistedComplex};
use crate::report::Report;

/// Highest Morse index of a 3-manifold.
pub const TOP_INDEX: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("unknown critical point {0:?}")]
    UnknownPoint(String),
    #[error("duplicate critical point name {0:?}")]
    DuplicateName(String),
    #[error("critical point {name:?} has index {index} (must be at most 3)")]
    IndexRange { name: String, index: usize },
    #[error("critical point {name:?} sits at vertex {vertex}, out of range")]
    VertexRange { name: String, vertex: usize },
    #[error("trajectory {0} does not lower the index by one")]
    NotAdjacent(usize),
    #[error("trajectory {0} path does not run between its critical points")]
    PathMismatch(usize),
    #[error("trajectory {0} sign must be +1 or -1")]
    BadSign(usize),
    #[error("Morse boundary does not square to zero in degree {0}")]
    BoundarySquare(usize),
    #[error("c_f has {got} entries for {expected} edges")]
    CfLength { got: usize, expected: usize },
    #[error("no integral c_f: {0}")]
    CfObstruction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub name: String,
    pub index: usize,
    pub vertex: usize,
}

/// A gradient trajectory from `source` down to `target`; `path` starts at
/// the source's vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub source: String,
    pub target: String,
    pub sign: i64,
    pub path: Vec<Step>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseData {
    pub critical_points: Vec<CriticalPoint>,
    pub trajectories: Vec<Trajectory>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_f: Option<Vec<i64>>,
}

impl MorseData {
    pub fn point(&self, name: &str) -> Result<&CriticalPoint, MorseError> {
        self.critical_points
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| MorseError::UnknownPoint(name.to_string()))
    }

    fn lookup(&self) -> Result<HashMap<&str, usize>, MorseError> {
        let mut map = HashMap::new();
        for (i, p) in self.critical_points.iter().enumerate() {
            if map.insert(p.name.as_str(), i).is_some() {
                return Err(MorseError::DuplicateName(p.name.clone()));
            }
        }
        Ok(map)
    }

    /// Checks names, index range, vertices, signs, adjacency and path
    /// endpoints, in that order.
    pub fn check_structure(&self, model: &CwModel) -> Result<(), MorseError> {
        let map = self.lookup()?;
        for p in &self.critical_points {
            if p.index > TOP_INDEX {
                return Err(MorseError::IndexRange { name: p.name.clone(), index: p.index });
            }
            if p.vertex >= model.vertices {
                return Err(MorseError::VertexRange { name: p.name.clone(), vertex: p.vertex });
            }
        }
        for (t, tr) in self.trajectories.iter().enumerate() {
            let (s, q) = self.endpoints(&map, tr)?;
            if tr.sign != 1 && tr.sign != -1 {
                return Err(MorseError::BadSign(t));
            }
            if s.index != q.index + 1 {
                return Err(MorseError::NotAdjacent(t));
            }
            match model.path_end(&self.trajectory_path(tr, s)) {
                Ok(end) if end == q.vertex => {}
                _ => return Err(MorseError::PathMismatch(t)),
            }
        }
        Ok(())
    }

    fn endpoints<'a>(
        &'a self,
        map: &HashMap<&str, usize>,
        tr: &Trajectory,
    ) -> Result<(&'a CriticalPoint, &'a CriticalPoint), MorseError> {
        let get = |name: &str| {
            map.get(name)
                .map(|&i| &self.critical_points[i])
                .ok_or_else(|| MorseError::UnknownPoint(name.to_string()))
        };
        Ok((get(&tr.source)?, get(&tr.target)?))
    }

    fn trajectory_path(&self, tr: &Trajectory, source: &CriticalPoint) -> PathWord {
        PathWord::new(source.vertex, tr.path.clone())
    }

    /// The based path of trajectory `t`.
    pub fn path_of(&self, t: usize) -> Result<PathWord, MorseError> {
        let tr = &self.trajectories[t];
        Ok(self.trajectory_path(tr, self.point(&tr.source)?))
    }

    /// Critical point indices grouped by Morse index, in declaration order.
    pub fn by_index(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); TOP_INDEX + 1];
        for (i, p) in self.critical_points.iter().enumerate() {
            if p.index <= TOP_INDEX {
                out[p.index].push(i);
            }
        }
        out
    }

    /// The 0-chain `Σ (-1)^{ind p} vertex(p)`.
    pub fn signed_critical_chain(&self, model: &CwModel) -> Vec<i64> {
        let mut b = vec![0i64; model.vertices];
        for p in &self.critical_points {
            if p.vertex < model.vertices {
                b[p.vertex] += if p.index % 2 == 0 { 1 } else { -1 };
            }
        }
        b
    }

    /// The supplied `c_f`, or a solved one.
    pub fn c_f_or_solve(&self, model: &CwModel) -> Result<Vec<i64>, MorseError> {
        match &self.c_f {
            Some(c) => {
                check_cf(model, self, c)?;
                Ok(c.clone())
            }
            None => solve_cf(model, self),
        }
    }

    /// Data of the opposite function: index `i ↦ 3 - i`, every trajectory
    /// reversed with the same sign, and `c_f ↦ -c_f`.
    pub fn mirrored(&self, model: &CwModel) -> Result<MorseData, MorseError> {
        let map = self.lookup()?;
        let critical_points = self
            .critical_points
            .iter()
            .map(|p| {
                if p.index > TOP_INDEX {
                    return Err(MorseError::IndexRange { name: p.name.clone(), index: p.index });
                }
                Ok(CriticalPoint { name: p.name.clone(), index: TOP_INDEX - p.index, vertex: p.vertex })
            })
            .collect::<Result<_, _>>()?;
        let trajectories = self
            .trajectories
            .iter()
            .map(|tr| {
                let (s, q) = self.endpoints(&map, tr)?;
                let path = self.trajectory_path(tr, s).reversed(q.vertex);
                model.path_end(&path)?;
                Ok(Trajectory { source: tr.target.clone(), target: tr.source.clone(), sign: tr.sign, path: path.steps })
            })
            .collect::<Result<_, MorseError>>()?;
        let c_f = self.c_f.as_ref().map(|c| c.iter().map(|x| -x).collect());
        Ok(MorseData { critical_points, trajectories, c_f })
    }
}

/// The twisted Morse complex with its basis labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseComplex {
    pub complex: TwistedComplex,
    /// Critical point indices (into `MorseData::critical_points`) spanning each degree.
    pub labels: Vec<Vec<usize>>,
    pub fiber_dim: usize,
}

impl MorseComplex {
    /// Degree and row offset of the block belonging to critical point `p`.
    pub fn position(&self, p: usize) -> Option<(usize, usize)> {
        self.labels.iter().enumerate().find_map(|(deg, pts)| {
            pts.iter().position(|&q| q == p).map(|k| (deg, k * self.fiber_dim))
        })
    }

    /// Basis labels "name[k]" per degree.
    pub fn basis_names(&self, md: &MorseData) -> Vec<Vec<String>> {
        self.labels
            .iter()
            .map(|pts| {
                pts.iter()
                    .flat_map(|&p| (0..self.fiber_dim).map(move |k| format!("{}[{k}]", md.critical_points[p].name)))
                    .collect()
            })
            .collect()
    }
}

/// Builds `C_i = ⊕ V_p` with block `(q, p)` equal to the signed sum of
/// trajectory holonomies from `p` to `q`.
pub fn morse_complex(model: &CwModel, rep: &Representation, md: &MorseData) -> Result<MorseComplex, MorseError> {
    md.check_structure(model)?;
    let n = rep.fiber_dim;
    if md.critical_points.is_empty() {
        return Ok(MorseComplex { complex: TwistedComplex::zero(), labels: Vec::new(), fiber_dim: n });
    }
    let labels = md.by_index();
    let mut slot = vec![0usize; md.critical_points.len()];
    for pts in &labels {
        for (k, &p) in pts.iter().enumerate() {
            slot[p] = k * n;
        }
    }
    let dims: Vec<usize> = labels.iter().map(|pts| pts.len() * n).collect();
    let mut higher: Vec<Matrix> = (1..dims.len()).map(|i| Matrix::zeros(dims[i - 1], dims[i])).collect();
    let map = md.lookup()?;
    for tr in &md.trajectories {
        let (si, ti) = (map[tr.source.as_str()], map[tr.target.as_str()]);
        let src = &md.critical_points[si];
        let hol = path_holonomy(rep, model, &md.trajectory_path(tr, src))?;
        higher[src.index - 1].add_block(slot[ti], slot[si], &hol.scale(&int(tr.sign)));
    }
    let complex = TwistedComplex::new(dims, higher).map_err(|e| match e {
        SystemError::BoundarySquare(_, d) => MorseError::BoundarySquare(d),
        other => other.into(),
    })?;
    Ok(MorseComplex { complex, labels, fiber_dim: n })
}

fn check_cf(model: &CwModel, md: &MorseData, c: &[i64]) -> Result<(), MorseError> {
    if c.len() != model.edges.len() {
        return Err(MorseError::CfLength { got: c.len(), expected: model.edges.len() });
    }
    let target = md.signed_critical_chain(model);
    if integral_boundary(model, c) != target {
        return Err(MorseError::CfObstruction(format!(
            "∂c_f = {:?} but the signed critical chain is {:?}",
            integral_boundary(model, c),
            target
        )));
    }
    Ok(())
}

/// Untwisted integral `∂₁` of a 1-chain.
pub fn integral_boundary(model: &CwModel, c: &[i64]) -> Vec<i64> {
    let mut b = vec![0i64; model.vertices];
    for (e, &k) in model.edges.iter().zip(c) {
        b[e.term] += k;
        b[e.init] -= k;
    }
    b
}

/// An integral 1-chain with `∂c_f = Σ (-1)^{ind p} vertex(p)`.
pub fn solve_cf(model: &CwModel, md: &MorseData) -> Result<Vec<i64>, MorseError> {
    let target: Vec<Scalar> = md.signed_critical_chain(model).into_iter().map(int).collect();
    let d1 = model.integral_boundary1();
    let generators: Vec<Vec<Scalar>> = (0..model.edges.len())
        .map(|j| (0..model.vertices).map(|v| Scalar::from_integer(d1.get(v, j).clone())).collect())
        .collect();
    let coeffs = exactlin::lattice_membership(&generators, &target).ok_or_else(|| {
        MorseError::CfObstruction("signed critical-point count is nonzero on some component".into())
    })?;
    let c = coeffs
        .iter()
        .map(|x| x.to_i64().ok_or_else(|| MorseError::CfObstruction("coefficient overflows i64".into())))
        .collect::<Result<Vec<_>, _>>()?;
    check_cf(model, md, &c)?;
    Ok(c)
}

/// The five side conditions on Morse data, each reported separately.
pub fn validate(model: &CwModel, rep: &Representation, md: &MorseData) -> Report {
    let mut report = Report::new("validate");
    let model_ok = match model.validate() {
        Ok(()) => true,
        Err(e) => {
            report.fail("model", e.to_string());
            false
        }
    };

    let map = md.lookup();
    let mut adjacency = Vec::new();
    let mut endpoints = Vec::new();
    match &map {
        Err(e) => {
            report.fail("critical points", e.to_string());
        }
        Ok(map) => {
            for p in &md.critical_points {
                if p.index > TOP_INDEX || p.vertex >= model.vertices {
                    endpoints.push(format!("critical point {:?} out of range", p.name));
                }
            }
            for (t, tr) in md.trajectories.iter().enumerate() {
                let (s, q) = match md.endpoints(map, tr) {
                    Ok(x) => x,
                    Err(e) => {
                        endpoints.push(format!("trajectory {t}: {e}"));
                        continue;
                    }
                };
                if s.index != q.index + 1 {
                    adjacency.push(format!("trajectory {t}: {} (index {}) → {} (index {})", s.name, s.index, q.name, q.index));
                }
                if tr.sign != 1 && tr.sign != -1 {
                    endpoints.push(format!("trajectory {t}: sign {}", tr.sign));
                }
                match model.path_end(&md.trajectory_path(tr, s)) {
                    Ok(end) if end == q.vertex => {}
                    Ok(end) => endpoints.push(format!("trajectory {t}: path ends at vertex {end}, target at {}", q.vertex)),
                    Err(e) => endpoints.push(format!("trajectory {t}: {e}")),
                }
            }
        }
    }
    report.push("index adjacency", adjacency.is_empty(), adjacency.join("; "));
    report.push("path endpoints", endpoints.is_empty(), endpoints.join("; "));

    let flat = match rep.validate(model) {
        Ok(()) => Ok(()),
        Err(e) => Err(e.to_string()),
    };

    if adjacency.is_empty() && endpoints.is_empty() && map.is_ok() && model_ok && flat.is_ok() {
        match morse_complex(model, rep, md) {
            Ok(_) => report.pass("boundary squares to zero", ""),
            Err(e) => report.fail("boundary squares to zero", e.to_string()),
        }
    } else {
        report.fail("boundary squares to zero", "not evaluated: earlier checks failed");
    }

    if model_ok {
        match &md.c_f {
            Some(c) => match check_cf(model, md, c) {
                Ok(()) => report.pass("c_f boundary", "supplied"),
                Err(e) => report.fail("c_f boundary", e.to_string()),
            },
            None => match solve_cf(model, md) {
                Ok(c) => report.pass("c_f boundary", format!("solved: {c:?}")),
                Err(e) => report.fail("c_f boundary", e.to_string()),
            },
        }
    } else {
        report.fail("c_f boundary", "not evaluated: invalid model");
    }

    match flat {
        Ok(()) => report.pass("flatness", ""),
        Err(e) => report.fail("flatness", e),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localsys::{Edge, Face};

    fn one_vertex_circle() -> CwModel {
        CwModel { vertices: 1, edges: vec![Edge { init: 0, term: 0 }], faces: vec![], cells3: vec![] }
    }

    fn pt(name: &str, index: usize, vertex: usize) -> CriticalPoint {
        CriticalPoint { name: name.into(), index, vertex }
    }

    fn traj(s: &str, t: &str, sign: i64, path: Vec<Step>) -> Trajectory {
        Trajectory { source: s.into(), target: t.into(), sign, path }
    }

    // Circle with one max and one min: ∂ = 1 - a.
    fn circle_data() -> MorseData {
        MorseData {
            critical_points: vec![pt("max", 1, 0), pt("min", 0, 0)],
            trajectories: vec![traj("max", "min", 1, vec![]), traj("max", "min", -1, vec![Step::fwd(0)])],
            c_f: Some(vec![0]),
        }
    }

    #[test]
    fn circle_morse_complex() {
        let rep = Representation { fiber_dim: 1, holonomy: vec![Matrix::scalar(int(2))] };
        let mc = morse_complex(&one_vertex_circle(), &rep, &circle_data()).unwrap();
        assert_eq!(mc.complex.boundary(1), Matrix::scalar(int(-1)));
        assert_eq!(mc.complex.dims(), &[1, 1, 0, 0]);
        assert_eq!(mc.position(0), Some((1, 0)));
        assert!(validate(&one_vertex_circle(), &rep, &circle_data()).verdict);
    }

    #[test]
    fn empty_data_gives_zero_complex() {
        let rep = Representation::trivial(1, 1);
        let mc = morse_complex(&one_vertex_circle(), &rep, &MorseData::default()).unwrap();
        assert_eq!(mc.complex.top(), None);
    }

    #[test]
    fn non_adjacent_trajectory_reported() {
        let md = MorseData {
            critical_points: vec![pt("a", 3, 0), pt("b", 1, 0)],
            trajectories: vec![traj("a", "b", 1, vec![])],
            c_f: None,
        };
        let r = validate(&one_vertex_circle(), &Representation::trivial(1, 1), &md);
        assert!(!r.verdict);
        assert!(r.checks.iter().any(|c| c.name == "index adjacency" && !c.pass));
    }

    #[test]
    fn nonzero_signed_sum_reported() {
        let seg = CwModel { vertices: 2, edges: vec![Edge { init: 0, term: 1 }], faces: vec![], cells3: vec![] };
        let md = MorseData { critical_points: vec![pt("m", 0, 0), pt("n", 0, 1)], trajectories: vec![], c_f: Some(vec![0]) };
        let r = validate(&seg, &Representation::trivial(1, 1), &md);
        assert!(r.checks.iter().any(|c| c.name == "c_f boundary" && !c.pass));
    }

    #[test]
    fn solve_cf_examples() {
        let torus = CwModel {
            vertices: 1,
            edges: vec![Edge { init: 0, term: 0 }, Edge { init: 0, term: 0 }],
            faces: vec![Face { base: 0, word: vec![Step::fwd(0), Step::fwd(1), Step::back(0), Step::back(1)] }],
            cells3: vec![],
        };
        let md = MorseData {
            critical_points: vec![pt("NP", 3, 0), pt("p", 2, 0), pt("q", 2, 0), pt("SP", 1, 0)],
            trajectories: vec![],
            c_f: None,
        };
        assert_eq!(solve_cf(&torus, &md).unwrap(), vec![0, 0]);

        let seg = CwModel { vertices: 2, edges: vec![Edge { init: 1, term: 0 }], faces: vec![], cells3: vec![] };
        let md = MorseData { critical_points: vec![pt("min", 0, 0), pt("s", 1, 1)], trajectories: vec![], c_f: None };
        // ∂c = v0 - v1 is the edge 1 → 0 traversed forwards.
        assert_eq!(solve_cf(&seg, &md).unwrap(), vec![1]);

        let md = MorseData { critical_points: vec![pt("min", 0, 0)], trajectories: vec![], c_f: None };
        assert!(matches!(solve_cf(&seg, &md), Err(MorseError::CfObstruction(_))));
    }

    #[test]
    fn inconsistent_signs_fail_square_zero() {
        // Two points of index 2 and 0 with nothing between breaks nothing; use a
        // three-level chain with a nonzero composite instead.
        let md = MorseData {
            critical_points: vec![pt("c", 2, 0), pt("b", 1, 0), pt("a", 0, 0)],
            trajectories: vec![traj("c", "b", 1, vec![]), traj("b", "a", 1, vec![])],
            c_f: None,
        };
        let err = morse_complex(&one_vertex_circle(), &Representation::trivial(1, 1), &md).unwrap_err();
        assert_eq!(err, MorseError::BoundarySquare(2));
    }

    #[test]
    fn mirrored_circle_is_valid() {
        let rep = Representation { fiber_dim: 1, holonomy: vec![Matrix::scalar(int(2))] };
        let m = circle_data().mirrored(&one_vertex_circle()).unwrap();
        assert_eq!(m.point("max").unwrap().index, 2);
        let mc = morse_complex(&one_vertex_circle(), &rep, &m).unwrap();
        // min → max reversed: 1 - a⁻¹.
        assert_eq!(mc.complex.boundary(3), Matrix::scalar(exactlin::frac(1, 2)));
    }
}

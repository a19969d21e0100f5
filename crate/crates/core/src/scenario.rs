//! Scenario files, example generators and file-level workflows.

use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, int, Matrix, Scalar};
use crate::invariant::{
    d_equal, d_invariant_with, i_circle, integral_cycle_lattice, CrossTrajectory, GluedScenario, InvariantError,
    Pairing,
};
use crate::localsys::{
    adjoint_system, homology_dims, twisted_complex, Cell3, CellFace, CwModel, Edge, Face, HomChain, Representation,
    Step, SystemError,
};
use crate::morse::{self, morse_complex, CriticalPoint, MorseData, MorseError, Trajectory, TOP_INDEX};
use crate::propagator::{contraction, random_propagator, rng_from_seed, Propagator};
use crate::report::Report;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("scenario fails validation:\n{0}")]
    Invalid(Report),
    #[error("{0}")]
    Build(String),
}

/// Whether the Morse data computes homology of `N` or of `(N, ∂N)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorseType {
    #[default]
    Absolute,
    Relative,
}

impl MorseType {
    pub fn flipped(self) -> Self {
        match self {
            MorseType::Absolute => MorseType::Relative,
            MorseType::Relative => MorseType::Absolute,
        }
    }
}

/// Cells of the model forming the boundary.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
}

impl Boundary {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty() && self.faces.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub model: CwModel,
    pub representation: Representation,
    #[serde(flatten)]
    pub morse: MorseData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    #[serde(default)]
    pub morse_type: MorseType,
}

impl Scenario {
    /// Structural checks in load order, then the Morse side conditions.
    pub fn check(&self) -> Result<(), ScenarioError> {
        self.model.validate()?;
        self.representation.validate(&self.model)?;
        if let Some(b) = &self.boundary {
            self.boundary_model(b)?;
        }
        let report = morse::validate(&self.model, &self.representation, &self.morse);
        if !report.verdict {
            return Err(ScenarioError::Invalid(report));
        }
        Ok(())
    }

    /// The same manifold with mirrored Morse data.
    pub fn mirrored(&self) -> Result<Scenario, MorseError> {
        Ok(Scenario {
            name: format!("{}_mirror", self.name),
            seed: self.seed,
            model: self.model.clone(),
            representation: self.representation.clone(),
            morse: self.morse.mirrored(&self.model)?,
            boundary: self.boundary.clone(),
            morse_type: self.morse_type.flipped(),
        })
    }

    /// The boundary as a model of its own, with the restricted representation.
    pub fn boundary_model(&self, b: &Boundary) -> Result<(CwModel, Representation), SystemError> {
        let vpos = |v: usize| b.vertices.iter().position(|&x| x == v);
        let epos = |e: usize| b.edges.iter().position(|&x| x == e);
        let mut edges = Vec::new();
        let mut holonomy = Vec::new();
        for &e in &b.edges {
            let edge = self.model.edges.get(e).ok_or(SystemError::EdgeOutOfRange(e))?;
            let (init, term) = match (vpos(edge.init), vpos(edge.term)) {
                (Some(i), Some(t)) => (i, t),
                _ => return Err(SystemError::VertexOutOfRange(edge.init)),
            };
            edges.push(Edge { init, term });
            holonomy.push(self.representation.holonomy[e].clone());
        }
        let mut faces = Vec::new();
        for &f in &b.faces {
            let face = self.model.faces.get(f).ok_or(SystemError::FaceOutOfRange(f))?;
            let word = face
                .word
                .iter()
                .map(|s| epos(s.edge).map(|edge| Step { edge, dir: s.dir }).ok_or(SystemError::EdgeOutOfRange(s.edge)))
                .collect::<Result<_, _>>()?;
            let base = vpos(face.base).ok_or(SystemError::VertexOutOfRange(face.base))?;
            faces.push(Face { base, word });
        }
        let model = CwModel { vertices: b.vertices.len(), edges, faces, cells3: Vec::new() };
        model.validate()?;
        Ok((model, Representation { fiber_dim: self.representation.fiber_dim, holonomy }))
    }

    /// A message when the boundary carries twisted homology.
    pub fn boundary_acyclicity_warning(&self) -> Result<Option<String>, SystemError> {
        let Some(b) = self.boundary.as_ref().filter(|b| !b.is_empty()) else {
            return Ok(None);
        };
        let (model, rep) = self.boundary_model(b)?;
        let betti = homology_dims(&twisted_complex(&model, &rep)?)?;
        Ok(betti.iter().any(|&d| d != 0).then(|| format!("boundary twisted Betti numbers {betti:?}")))
    }

    pub fn c_f(&self) -> Result<Vec<i64>, MorseError> {
        self.morse.c_f_or_solve(&self.model)
    }

    /// Propagator of the Morse complex by contraction.
    pub fn propagator(&self) -> Result<Propagator, ScenarioError> {
        let mc = morse_complex(&self.model, &self.representation, &self.morse)?;
        contraction(&mc.complex).map_err(|e| InvariantError::from(e).into())
    }
}

fn read(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Writes `text` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), ScenarioError> {
    let io = |source| ScenarioError::Io { path: path.to_path_buf(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, text).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Parses a scenario and checks the model and the holonomy matrices, but
/// not flatness or the Morse side conditions.
pub fn load_scenario_unvalidated(path: &Path) -> Result<Scenario, ScenarioError> {
    let s: Scenario = parse(path, &read(path)?)?;
    s.model.validate()?;
    s.representation.check_invertible(&s.model)?;
    Ok(s)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let s = load_scenario_unvalidated(path)?;
    s.check()?;
    Ok(s)
}

pub fn save_scenario(path: &Path, s: &Scenario) -> Result<(), ScenarioError> {
    write_atomic(path, &to_json(s))
}

/// On-disk form of a glued scenario; parts are paths relative to the file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedFile {
    pub name: String,
    pub a: String,
    pub b: String,
    pub pairing: Pairing,
    #[serde(default)]
    pub cross: Vec<CrossTrajectory>,
}

pub fn load_glued(path: &Path) -> Result<GluedScenario, ScenarioError> {
    let f: GluedFile = parse(path, &read(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(GluedScenario {
        a: load_scenario(&dir.join(&f.a))?,
        b: load_scenario(&dir.join(&f.b))?,
        pairing: f.pairing,
        cross: f.cross,
    })
}

/// Writes `gs` as a glued file plus its two part files in `dir`.
pub fn save_glued(dir: &Path, name: &str, gs: &GluedScenario) -> Result<PathBuf, ScenarioError> {
    let (fa, fb) = (format!("{}.json", gs.a.name), format!("{}.json", gs.b.name));
    save_scenario(&dir.join(&fa), &gs.a)?;
    save_scenario(&dir.join(&fb), &gs.b)?;
    let file = GluedFile { name: name.into(), a: fa, b: fb, pairing: gs.pairing.clone(), cross: gs.cross.clone() };
    let path = dir.join(format!("{name}.json"));
    write_atomic(&path, &to_json(&file))?;
    Ok(path)
}

/// A scenario together with an invariant representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantFile {
    pub scenario: Scenario,
    pub c_f: Vec<i64>,
    pub representative: HomChain,
}

pub fn load_invariant(path: &Path) -> Result<InvariantFile, ScenarioError> {
    let f: InvariantFile = parse(path, &read(path)?)?;
    f.scenario.check()?;
    Ok(f)
}

fn check_square(m: &Matrix, what: &str) -> Result<Matrix, ScenarioError> {
    if !m.is_square() || m.rows() == 0 {
        return Err(ScenarioError::Build(format!("{what} must be a nonempty square matrix")));
    }
    exactlin::inverse(m)
        .expect("square")
        .ok_or_else(|| ScenarioError::Build(format!("{what} is not invertible")))
}

// Vertices, edges and faces of the cylinder model, by role.
const V_MINUS: usize = 0;
const V_MID: usize = 1;
const V_PLUS: usize = 2;
const X0: usize = 0;
const Y0: usize = 1;
const X_MINUS: usize = 2;
const Y_MINUS: usize = 3;
const X_PLUS: usize = 4;
const Y_PLUS: usize = 5;
const T_MINUS: usize = 6;
const T_PLUS: usize = 7;

fn commutator(x: usize, y: usize) -> Vec<Step> {
    vec![Step::fwd(x), Step::fwd(y), Step::back(x), Step::back(y)]
}

fn annulus(x: usize, t: usize, x_far: usize) -> Vec<Step> {
    vec![Step::fwd(x), Step::fwd(t), Step::back(x_far), Step::back(t)]
}

fn cf(face: usize, sign: i64, path: Vec<Step>) -> CellFace {
    CellFace { face, sign, path }
}

/// Cell model of `[-1, 1] × T²`: three tori `T_-, T_0, T_+` joined by two
/// collars, each collar filled by one 3-cell.
pub fn cylinder_model() -> CwModel {
    let edges = vec![
        Edge { init: V_MID, term: V_MID },
        Edge { init: V_MID, term: V_MID },
        Edge { init: V_MINUS, term: V_MINUS },
        Edge { init: V_MINUS, term: V_MINUS },
        Edge { init: V_PLUS, term: V_PLUS },
        Edge { init: V_PLUS, term: V_PLUS },
        Edge { init: V_MINUS, term: V_MID },
        Edge { init: V_MID, term: V_PLUS },
    ];
    let faces = vec![
        Face { base: V_MID, word: commutator(X0, Y0) },
        Face { base: V_MINUS, word: commutator(X_MINUS, Y_MINUS) },
        Face { base: V_PLUS, word: commutator(X_PLUS, Y_PLUS) },
        Face { base: V_MINUS, word: annulus(X_MINUS, T_MINUS, X0) },
        Face { base: V_MINUS, word: annulus(Y_MINUS, T_MINUS, Y0) },
        Face { base: V_MID, word: annulus(X0, T_PLUS, X_PLUS) },
        Face { base: V_MID, word: annulus(Y0, T_PLUS, Y_PLUS) },
    ];
    let collar = |base, inner: usize, outer: usize, t: usize, ax: usize, ay: usize, x: usize, y: usize| Cell3 {
        base,
        boundary: vec![
            cf(outer, 1, vec![Step::fwd(t)]),
            cf(inner, -1, vec![]),
            cf(ax, 1, vec![]),
            cf(ay, 1, vec![Step::fwd(x)]),
            cf(ax, -1, vec![Step::fwd(y)]),
            cf(ay, -1, vec![]),
        ],
    };
    let cells3 = vec![
        collar(V_MINUS, 1, 0, T_MINUS, 3, 4, X_MINUS, Y_MINUS),
        collar(V_MID, 0, 2, T_PLUS, 5, 6, X0, Y0),
    ];
    CwModel { vertices: 3, edges, faces, cells3 }
}

fn point(name: &str, index: usize, vertex: usize) -> CriticalPoint {
    CriticalPoint { name: name.into(), index, vertex }
}

fn traj(source: &str, target: &str, sign: i64, path: Vec<Step>) -> Trajectory {
    Trajectory { source: source.into(), target: target.into(), sign, path }
}

/// The cylinder `[-1, 1] × T²` with holonomy `a` along the first circle and
/// `b` along the second, and Morse data with points `NP, p, q, SP` of
/// indices 3, 2, 2, 1 on the middle torus.
pub fn build_torus_cylinder(a: &Matrix, b: &Matrix) -> Result<Scenario, ScenarioError> {
    let a_inv = check_square(a, "a")?;
    check_square(b, "b")?;
    let n = a.rows();
    if b.shape() != a.shape() {
        return Err(ScenarioError::Build("a and b differ in size".into()));
    }
    if a * b != b * a {
        return Err(ScenarioError::Build("a and b do not commute".into()));
    }
    let id = Matrix::identity(n);
    if exactlin::inverse(&(&id - a)).expect("square").is_none() {
        return Err(ScenarioError::Build("1 - a is singular".into()));
    }
    if exactlin::inverse(&(&id - &a_inv)).expect("square").is_none() {
        return Err(ScenarioError::Build("1 - a⁻¹ is singular".into()));
    }
    let model = cylinder_model();
    let mut holonomy = vec![id.clone(); model.edges.len()];
    for e in [X0, X_MINUS, X_PLUS] {
        holonomy[e] = a.clone();
    }
    for e in [Y0, Y_MINUS, Y_PLUS] {
        holonomy[e] = b.clone();
    }
    let representation = Representation { fiber_dim: n, holonomy };
    let morse = MorseData {
        critical_points: vec![point("NP", 3, V_MID), point("p", 2, V_MID), point("q", 2, V_MID), point("SP", 1, V_MID)],
        trajectories: vec![
            traj("NP", "p", 1, vec![]),
            traj("NP", "p", -1, vec![Step::fwd(X0)]),
            traj("NP", "q", 1, vec![]),
            traj("NP", "q", -1, vec![Step::fwd(Y0)]),
            traj("p", "SP", 1, vec![Step::back(X0)]),
            traj("p", "SP", -1, vec![Step::back(X0), Step::fwd(Y0)]),
            traj("q", "SP", 1, vec![]),
            traj("q", "SP", -1, vec![Step::back(X0)]),
        ],
        c_f: Some(vec![0; model.edges.len()]),
    };
    let s = Scenario {
        name: "torus_cylinder".into(),
        seed: 0,
        model,
        representation,
        morse,
        boundary: Some(Boundary {
            vertices: vec![V_MINUS, V_PLUS],
            edges: vec![X_MINUS, Y_MINUS, X_PLUS, Y_PLUS],
            faces: vec![1, 2],
        }),
        morse_type: MorseType::Relative,
    };
    s.check()?;
    let mc = morse_complex(&s.model, &s.representation, &s.morse)?;
    if let Err(e) = crate::propagator::check_acyclic(&mc.complex) {
        return Err(ScenarioError::Build(format!("Morse complex: {e}")));
    }
    Ok(s)
}

/// The propagator with `G_{NP,p} = (1 - a)⁻¹`, `G_{q,SP} = (1 - a⁻¹)⁻¹`
/// and all other blocks zero, for the cylinder scenario.
pub fn cylinder_reference_propagator(a: &Matrix) -> Result<Propagator, ScenarioError> {
    let a_inv = check_square(a, "a")?;
    let n = a.rows();
    let id = Matrix::identity(n);
    let inv = |m: Matrix| exactlin::inverse(&m).expect("square").ok_or_else(|| ScenarioError::Build("singular block".into()));
    let mut g3 = Matrix::zeros(n, 2 * n);
    g3.set_block(0, 0, &inv(&id - a)?);
    let mut g2 = Matrix::zeros(2 * n, n);
    g2.set_block(n, 0, &inv(&id - &a_inv)?);
    Ok(Propagator { degrees: vec![Matrix::zeros(0, 0), Matrix::zeros(n, 0), g2, g3] })
}

/// Holonomies used by the example generator for fibre dimension `n`.
pub fn default_cylinder_holonomies(n: usize) -> (Matrix, Matrix) {
    if n == 1 {
        return (Matrix::scalar(int(2)), Matrix::scalar(int(3)));
    }
    let a: Vec<Scalar> = (0..n as i64).map(|i| int(i + 2)).collect();
    let b: Vec<Scalar> = (0..n as i64).map(|i| int(2 * i + 5)).collect();
    (Matrix::diag(&a), Matrix::diag(&b))
}

/// The 3-torus with commuting holonomies `a, b, c` and the product Morse
/// data of three circles: points `e_S` for `S ⊆ {1, 2, 3}` of index `|S|`.
pub fn build_torus3(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<Scenario, ScenarioError> {
    let gens = [a, b, c];
    for (g, name) in gens.iter().zip(["a", "b", "c"]) {
        check_square(g, name)?;
    }
    let n = a.rows();
    let (x, y, z) = (0, 1, 2);
    let model = CwModel {
        vertices: 1,
        edges: vec![Edge { init: 0, term: 0 }; 3],
        faces: vec![
            Face { base: 0, word: commutator(x, y) },
            Face { base: 0, word: commutator(y, z) },
            Face { base: 0, word: commutator(x, z) },
        ],
        cells3: vec![Cell3 {
            base: 0,
            boundary: vec![
                cf(1, 1, vec![Step::fwd(x)]),
                cf(1, -1, vec![]),
                cf(2, -1, vec![Step::fwd(y)]),
                cf(2, 1, vec![]),
                cf(0, 1, vec![Step::fwd(z)]),
                cf(0, -1, vec![]),
            ],
        }],
    };
    let name = |s: u8| -> String {
        let digits: String = (0..3).filter(|i| s & (1 << i) != 0).map(|i| char::from(b'1' + i)).collect();
        format!("e{digits}")
    };
    let mut subsets: Vec<u8> = (0..8).collect();
    subsets.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
    let critical_points = subsets.iter().map(|&s| point(&name(s), s.count_ones() as usize, 0)).collect();
    let mut trajectories = Vec::new();
    for &s in &subsets {
        for i in 0..3u8 {
            if s & (1 << i) == 0 {
                continue;
            }
            let before = (s & ((1 << i) - 1)).count_ones();
            let sigma = if before % 2 == 0 { 1 } else { -1 };
            let t = name(s & !(1 << i));
            trajectories.push(traj(&name(s), &t, sigma, vec![]));
            trajectories.push(traj(&name(s), &t, -sigma, vec![Step::fwd(i as usize)]));
        }
    }
    let s = Scenario {
        name: "torus3".into(),
        seed: 0,
        model,
        representation: Representation { fiber_dim: n, holonomy: gens.iter().map(|g| (*g).clone()).collect() },
        morse: MorseData { critical_points, trajectories, c_f: Some(vec![0; 3]) },
        boundary: None,
        morse_type: MorseType::Absolute,
    };
    s.check()?;
    Ok(s)
}

pub fn default_torus3(n: usize) -> Result<Scenario, ScenarioError> {
    let d = |k: i64| Matrix::diag(&(0..n as i64).map(|i| int(k + i)).collect::<Vec<_>>());
    build_torus3(&d(2), &d(3), &d(5))
}

fn pad(v: Vec<usize>, len: usize) -> Vec<usize> {
    let mut v = v;
    v.resize(len.max(v.len()), 0);
    v
}

/// Betti numbers of the Morse complex against those of the cell model,
/// for coefficients in `V` and in `Hom(V, V)`. Relative data is compared
/// with the cell model in complementary degree and dual coefficients.
pub fn homology_consistency(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut report = Report::new("homology");
    let adj = adjoint_system(&s.representation)?;
    for (label, rep) in [("V", s.representation.clone()), ("Hom", adj)] {
        let morse_betti = pad(homology_dims(&morse_complex(&s.model, &rep, &s.morse)?.complex)?, TOP_INDEX + 1);
        let cell = |r: &Representation| -> Result<Vec<usize>, ScenarioError> {
            Ok(pad(homology_dims(&twisted_complex(&s.model, r)?)?, TOP_INDEX + 1))
        };
        let (expected, how) = match s.morse_type {
            MorseType::Absolute => (cell(&rep)?, "cellular"),
            MorseType::Relative => {
                let mut d = cell(&rep.dual()?)?;
                d.reverse();
                (d, "cellular with dual coefficients, reversed")
            }
        };
        report.push(
            format!("{label}: Morse Betti = {how}"),
            morse_betti == expected,
            format!("Morse {morse_betti:?}, {how} {expected:?}"),
        );
    }
    Ok(report)
}

/// Representatives from 10 random propagators and shifted `c_f` choices,
/// each compared with the contraction representative.
pub fn choice_independence(s: &Scenario, seed: u64, propagators: usize, c_f_shifts: usize) -> Result<Report, ScenarioError> {
    let mut report = Report::new("choice-independence");
    let mut rng = rng_from_seed(seed);
    let (model, rep, md) = (&s.model, &s.representation, &s.morse);
    let mc = morse_complex(model, rep, md)?;
    let g0 = s.propagator()?;
    let c0 = s.c_f()?;
    let base = d_invariant_with(model, rep, md, &g0, &c0)?.representative;
    for k in 0..propagators {
        let g = random_propagator(&mc.complex, &mut rng, 2).map_err(InvariantError::from)?;
        let z = i_circle(model, rep, md, &g, &c0)?;
        let same = d_equal(model, rep, &z, &base)?.is_some();
        report.push(format!("random propagator {k}"), same, "");
    }
    let lattice = integral_cycle_lattice(model);
    for k in 0..c_f_shifts {
        let mut c = c0.clone();
        for cycle in &lattice {
            let m: i64 = rng.gen_range(-3..=3);
            for (ci, x) in c.iter_mut().zip(cycle) {
                *ci += m * i64::try_from(x).expect("small cycle entries");
            }
        }
        let z = i_circle(model, rep, md, &g0, &c)?;
        let same = d_equal(model, rep, &z, &base)?.is_some();
        report.push(format!("alternative c_f {k}"), same, format!("{c:?}"));
    }
    Ok(report)
}

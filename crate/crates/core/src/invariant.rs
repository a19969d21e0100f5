//! The invariant chain `I_∘`, its class modulo boundaries and integral
//! cycles, and gluing of scenarios along boundary subcomplexes.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{self, int, Matrix, Scalar};
use crate::localsys::{
    adjoint_system, hom_boundary, push_path, twisted_complex, Cell3, CellFace, CwModel, Dir, Edge, Face, HomChain,
    PathWord, Representation, Step, SystemError,
};
use crate::morse::{morse_complex, validate, CriticalPoint, MorseData, MorseError, Trajectory};
use crate::propagator::{
    contraction, glue_propagator, off_diagonal_residuals, verify_propagator, BlockedComplex, Propagator,
    PropagatorError,
};
use crate::report::Report;
use crate::scenario::{Boundary, Scenario};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
    #[error(transparent)]
    Lin(#[from] exactlin::LinError),
    #[error("{what} is not a twisted cycle; boundary {residual}")]
    NotCycle { what: String, residual: String },
    #[error("identified edges a:{a} and b:{b} carry different holonomies")]
    HolonomyMismatch { a: usize, b: usize },
    #[error("cross trajectory {0} does not run from part a to part b")]
    CrossDirection(usize),
    #[error("invalid pairing: {0}")]
    Pairing(String),
    #[error("glued scenario fails validation: {0}")]
    GluedInvalid(String),
}

/// A representative of `d(M, ρ)` together with the data it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DInvariant {
    pub representative: HomChain,
    pub c_f: Vec<i64>,
}

/// Sign attached to trajectories leaving a point of index `i`.
fn index_sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// `I_∘ = -c_f ⊗ 1 + Σ_γ (-1)^{ind p + 1} push(γ, G_{p,q} ε(γ) γ_*)`.
///
/// The index sign makes the chain a cycle for every propagator; the
/// result is checked to be one.
pub fn i_circle(
    model: &CwModel,
    rep: &Representation,
    md: &MorseData,
    g: &Propagator,
    c_f: &[i64],
) -> Result<HomChain, InvariantError> {
    let mc = morse_complex(model, rep, md)?;
    let n = rep.fiber_dim;
    if c_f.len() != model.edges.len() {
        return Err(MorseError::CfLength { got: c_f.len(), expected: model.edges.len() }.into());
    }
    if !md.critical_points.is_empty() {
        g.check_shape(&mc.complex)?;
    }
    let mut chain = HomChain::from_integral(n, &c_f.iter().map(|x| -x).collect::<Vec<_>>());
    for (t, tr) in md.trajectories.iter().enumerate() {
        let p = md.critical_points.iter().position(|c| c.name == tr.source).expect("validated");
        let q = md.critical_points.iter().position(|c| c.name == tr.target).expect("validated");
        let (deg, row) = mc.position(p).expect("labelled");
        let (_, col) = mc.position(q).expect("labelled");
        let path = md.path_of(t)?;
        let hol = crate::localsys::path_holonomy(rep, model, &path)?;
        let k = &g.block(deg, row, col, n) * &hol.scale(&int(tr.sign * index_sign(deg)));
        chain = chain.add(&push_path(rep, model, &path, &k)?)?;
    }
    check_cycle(rep, model, &chain, "I_∘")?;
    Ok(chain)
}

fn check_cycle(rep: &Representation, model: &CwModel, chain: &HomChain, what: &str) -> Result<(), InvariantError> {
    let b = hom_boundary(rep, model, chain)?;
    if b.iter().all(Matrix::is_zero) {
        Ok(())
    } else {
        let residual = b.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ");
        Err(InvariantError::NotCycle { what: what.into(), residual })
    }
}

/// A ℤ-basis of the integral 1-cycles of the model.
pub fn integral_cycle_lattice(model: &CwModel) -> Vec<Vec<BigInt>> {
    exactlin::integer_kernel(&model.integral_boundary1())
}

/// Representative from the contraction propagator and the supplied (or
/// solved) `c_f`.
pub fn d_invariant(model: &CwModel, rep: &Representation, md: &MorseData) -> Result<DInvariant, InvariantError> {
    let mc = morse_complex(model, rep, md)?;
    let g = contraction(&mc.complex)?;
    let c_f = md.c_f_or_solve(model)?;
    d_invariant_with(model, rep, md, &g, &c_f)
}

pub fn d_invariant_with(
    model: &CwModel,
    rep: &Representation,
    md: &MorseData,
    g: &Propagator,
    c_f: &[i64],
) -> Result<DInvariant, InvariantError> {
    Ok(DInvariant { representative: i_circle(model, rep, md, g, c_f)?, c_f: c_f.to_vec() })
}

/// Witness for `z1 - z2 = ∂₂ w + Σ n_i (γ_i ⊗ 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// 2-chain in the Hom system, row-major per face.
    pub w: Matrix,
    /// Coefficients on [`integral_cycle_lattice`].
    pub n: Vec<String>,
}

/// Decides whether two Hom-valued cycles define the same class modulo
/// boundaries and integral cycles with identity coefficients.
pub fn d_equal(
    model: &CwModel,
    rep: &Representation,
    z1: &HomChain,
    z2: &HomChain,
) -> Result<Option<Certificate>, InvariantError> {
    check_cycle(rep, model, z1, "first chain")?;
    check_cycle(rep, model, z2, "second chain")?;
    let n = rep.fiber_dim;
    let adj = adjoint_system(rep)?;
    let c = twisted_complex(model, &adj)?;
    let d2 = c.boundary(2);
    let z = z1.sub(z2)?.to_vector();

    // Rows of q span the annihilator of im ∂₂, so ker q = im ∂₂.
    let q_rows = exactlin::rank_and_solve(&d2.transpose(), None)?.kernel;
    let project = |v: &Matrix| -> Vec<Scalar> {
        q_rows.iter().map(|r| (0..v.rows()).map(|i| r.get(i, 0) * v.get(i, 0)).sum()).collect()
    };
    let lattice = integral_cycle_lattice(model);
    let gens: Vec<Matrix> = lattice.iter().map(|cyc| HomChain::from_integral_big(n, cyc).to_vector()).collect();
    let coeffs = match exactlin::lattice_membership(&gens.iter().map(project).collect::<Vec<_>>(), &project(&z)) {
        Some(c) => c,
        None => return Ok(None),
    };
    let mut rest = z;
    for (k, g) in coeffs.iter().zip(&gens) {
        rest = &rest - &g.scale(&Scalar::from_integer(k.clone()));
    }
    let w = exactlin::rank_and_solve(&d2, Some(&rest))?
        .solution
        .expect("projection vanishes exactly on the image of ∂₂");
    Ok(Some(Certificate { w, n: coeffs.iter().map(BigInt::to_string).collect() }))
}

/// Side of a glued scenario a cross-trajectory step lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

/// A path step on one of the two parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(Side, usize, Dir)", into = "(Side, usize, Dir)")]
pub struct SideStep {
    pub side: Side,
    pub step: Step,
}

impl From<(Side, usize, Dir)> for SideStep {
    fn from((side, edge, dir): (Side, usize, Dir)) -> Self {
        SideStep { side, step: Step { edge, dir } }
    }
}

impl From<SideStep> for (Side, usize, Dir) {
    fn from(s: SideStep) -> Self {
        (s.side, s.step.edge, s.step.dir)
    }
}

/// A trajectory from a critical point of part a to one of part b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossTrajectory {
    pub source: String,
    pub target: String,
    pub sign: i64,
    pub path: Vec<SideStep>,
}

/// Pairs `(cell of a, cell of b)` that are identified.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub vertices: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedScenario {
    pub a: Scenario,
    pub b: Scenario,
    pub pairing: Pairing,
    pub cross: Vec<CrossTrajectory>,
}

/// Where the cells of one part land in the glued model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMap {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
    pub cells3: Vec<usize>,
}

impl CellMap {
    fn identity(model: &CwModel) -> Self {
        CellMap {
            vertices: (0..model.vertices).collect(),
            edges: (0..model.edges.len()).collect(),
            faces: (0..model.faces.len()).collect(),
            cells3: (0..model.cells3.len()).collect(),
        }
    }

    fn step(&self, s: Step) -> Step {
        Step { edge: self.edges[s.edge], dir: s.dir }
    }

    fn steps(&self, s: &[Step]) -> Vec<Step> {
        s.iter().map(|&x| self.step(x)).collect()
    }

    pub fn push_chain(&self, chain: &HomChain, target_edges: usize) -> HomChain {
        chain.push_forward(&self.edges, target_edges)
    }

    fn push_integral(&self, c: &[i64], target_edges: usize) -> Vec<i64> {
        let mut out = vec![0; target_edges];
        for (e, &k) in c.iter().enumerate() {
            out[self.edges[e]] += k;
        }
        out
    }
}

/// The glued scenario with the inclusions of both parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Glued {
    pub scenario: Scenario,
    pub iota_a: CellMap,
    pub iota_b: CellMap,
}

fn pairing_map(pairs: &[(usize, usize)], len_a: usize, len_b: usize, what: &str) -> Result<Vec<Option<usize>>, InvariantError> {
    let mut map = vec![None; len_b];
    let mut used = vec![false; len_a];
    for &(a, b) in pairs {
        if a >= len_a || b >= len_b {
            return Err(InvariantError::Pairing(format!("{what} pair ({a}, {b}) out of range")));
        }
        if map[b].is_some() || used[a] {
            return Err(InvariantError::Pairing(format!("{what} pair ({a}, {b}) repeats a cell")));
        }
        map[b] = Some(a);
        used[a] = true;
    }
    Ok(map)
}

/// The quotient model, the inclusions, and the glued representation.
pub fn glue_models(
    a: &Scenario,
    b: &Scenario,
    pairing: &Pairing,
) -> Result<(CwModel, Representation, CellMap, CellMap), InvariantError> {
    let (ma, mb) = (&a.model, &b.model);
    if a.representation.fiber_dim != b.representation.fiber_dim {
        return Err(InvariantError::Pairing("fibre dimensions differ".into()));
    }
    let vmap = pairing_map(&pairing.vertices, ma.vertices, mb.vertices, "vertex")?;
    let emap = pairing_map(&pairing.edges, ma.edges.len(), mb.edges.len(), "edge")?;
    let fmap = pairing_map(&pairing.faces, ma.faces.len(), mb.faces.len(), "face")?;

    let iota_a = CellMap::identity(ma);
    let mut next = ma.vertices;
    let vertices: Vec<usize> = vmap
        .iter()
        .map(|m| {
            m.unwrap_or_else(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    let mut model = CwModel { vertices: next, edges: ma.edges.clone(), faces: ma.faces.clone(), cells3: ma.cells3.clone() };
    let mut holonomy = a.representation.holonomy.clone();

    let mut edges = Vec::with_capacity(mb.edges.len());
    for (j, e) in mb.edges.iter().enumerate() {
        let mapped = Edge { init: vertices[e.init], term: vertices[e.term] };
        match emap[j] {
            Some(i) => {
                if model.edges[i] != mapped {
                    return Err(InvariantError::Pairing(format!("edge pair ({i}, {j}) has unmatched endpoints")));
                }
                if a.representation.holonomy[i] != b.representation.holonomy[j] {
                    return Err(InvariantError::HolonomyMismatch { a: i, b: j });
                }
                edges.push(i);
            }
            None => {
                edges.push(model.edges.len());
                model.edges.push(mapped);
                holonomy.push(b.representation.holonomy[j].clone());
            }
        }
    }
    let mut iota_b = CellMap { vertices, edges, faces: Vec::new(), cells3: Vec::new() };

    for (j, f) in mb.faces.iter().enumerate() {
        let mapped = Face { base: iota_b.vertices[f.base], word: iota_b.steps(&f.word) };
        match fmap[j] {
            Some(i) => {
                if model.faces[i] != mapped {
                    return Err(InvariantError::Pairing(format!("face pair ({i}, {j}) has unmatched words")));
                }
                iota_b.faces.push(i);
            }
            None => {
                iota_b.faces.push(model.faces.len());
                model.faces.push(mapped);
            }
        }
    }
    for c in &mb.cells3 {
        iota_b.cells3.push(model.cells3.len());
        model.cells3.push(Cell3 {
            base: iota_b.vertices[c.base],
            boundary: c
                .boundary
                .iter()
                .map(|cf| CellFace { face: iota_b.faces[cf.face], sign: cf.sign, path: iota_b.steps(&cf.path) })
                .collect(),
        });
    }
    let rep = Representation { fiber_dim: a.representation.fiber_dim, holonomy };
    Ok((model, rep, iota_a, iota_b))
}

fn prefixed(side: Side, name: &str) -> String {
    match side {
        Side::A => format!("a.{name}"),
        Side::B => format!("b.{name}"),
    }
}

fn map_morse(md: &MorseData, side: Side, iota: &CellMap) -> (Vec<CriticalPoint>, Vec<Trajectory>) {
    let points = md
        .critical_points
        .iter()
        .map(|p| CriticalPoint { name: prefixed(side, &p.name), index: p.index, vertex: iota.vertices[p.vertex] })
        .collect();
    let trajs = md
        .trajectories
        .iter()
        .map(|t| Trajectory {
            source: prefixed(side, &t.source),
            target: prefixed(side, &t.target),
            sign: t.sign,
            path: iota.steps(&t.path),
        })
        .collect();
    (points, trajs)
}

/// `M = N_a ∪ N_b`: quotient model, union Morse data (points renamed
/// `a.*` / `b.*`), cross trajectories and `c_f = ι_a c_a + ι_b c_b`.
pub fn glue(gs: &GluedScenario) -> Result<Glued, InvariantError> {
    let (model, rep, iota_a, iota_b) = glue_models(&gs.a, &gs.b, &gs.pairing)?;
    let (mut points, mut trajs) = map_morse(&gs.a.morse, Side::A, &iota_a);
    let (pb, tb) = map_morse(&gs.b.morse, Side::B, &iota_b);
    points.extend(pb);
    trajs.extend(tb);
    for (k, ct) in gs.cross.iter().enumerate() {
        if gs.a.morse.point(&ct.source).is_err() || gs.b.morse.point(&ct.target).is_err() {
            return Err(InvariantError::CrossDirection(k));
        }
        let path = ct
            .path
            .iter()
            .map(|s| match s.side {
                Side::A => iota_a.step(s.step),
                Side::B => iota_b.step(s.step),
            })
            .collect();
        trajs.push(Trajectory {
            source: prefixed(Side::A, &ct.source),
            target: prefixed(Side::B, &ct.target),
            sign: ct.sign,
            path,
        });
    }
    let ca = gs.a.morse.c_f_or_solve(&gs.a.model)?;
    let cb = gs.b.morse.c_f_or_solve(&gs.b.model)?;
    let ne = model.edges.len();
    let c_f: Vec<i64> = iota_a.push_integral(&ca, ne).iter().zip(iota_b.push_integral(&cb, ne)).map(|(x, y)| x + y).collect();

    let boundary = glued_boundary(gs, &iota_a, &iota_b);
    let md = MorseData { critical_points: points, trajectories: trajs, c_f: Some(c_f) };
    let report = validate(&model, &rep, &md);
    if !report.verdict {
        let msg = report.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join("; ");
        return Err(InvariantError::GluedInvalid(msg));
    }
    let scenario = Scenario {
        name: format!("{} ∪ {}", gs.a.name, gs.b.name),
        seed: gs.a.seed,
        model,
        representation: rep,
        morse: md,
        boundary,
        morse_type: gs.b.morse_type,
    };
    Ok(Glued { scenario, iota_a, iota_b })
}

fn glued_boundary(gs: &GluedScenario, iota_a: &CellMap, iota_b: &CellMap) -> Option<Boundary> {
    let mut out = Boundary::default();
    let p = &gs.pairing;
    if let Some(ba) = &gs.a.boundary {
        out.vertices.extend(ba.vertices.iter().filter(|v| !p.vertices.iter().any(|x| x.0 == **v)).map(|&v| iota_a.vertices[v]));
        out.edges.extend(ba.edges.iter().filter(|v| !p.edges.iter().any(|x| x.0 == **v)).map(|&v| iota_a.edges[v]));
        out.faces.extend(ba.faces.iter().filter(|v| !p.faces.iter().any(|x| x.0 == **v)).map(|&v| iota_a.faces[v]));
    }
    if let Some(bb) = &gs.b.boundary {
        out.vertices.extend(bb.vertices.iter().filter(|v| !p.vertices.iter().any(|x| x.1 == **v)).map(|&v| iota_b.vertices[v]));
        out.edges.extend(bb.edges.iter().filter(|v| !p.edges.iter().any(|x| x.1 == **v)).map(|&v| iota_b.edges[v]));
        out.faces.extend(bb.faces.iter().filter(|v| !p.faces.iter().any(|x| x.1 == **v)).map(|&v| iota_b.faces[v]));
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// `N ∪ -N`: the second copy carries the mirrored Morse data, boundary
/// cells are identified by the identity pairing, and cross trajectories
/// realize `∂^{ab} = ∂^b Y - Y ∂^a` where `Y` joins the first points of
/// each index on the two sides along a shortest path.
pub fn double(s: &Scenario) -> Result<GluedScenario, InvariantError> {
    let mirror = s.mirrored()?;
    let pairing = match &s.boundary {
        Some(b) if !b.is_empty() => Pairing {
            vertices: b.vertices.iter().map(|&v| (v, v)).collect(),
            edges: b.edges.iter().map(|&e| (e, e)).collect(),
            faces: b.faces.iter().map(|&f| (f, f)).collect(),
        },
        _ => Pairing::default(),
    };
    let mut gs = GluedScenario { a: s.clone(), b: mirror, pairing, cross: Vec::new() };
    if gs.pairing.vertices.is_empty() {
        return Ok(gs);
    }
    let (model, _, iota_a, iota_b) = glue_models(&gs.a, &gs.b, &gs.pairing)?;
    let back = |e: usize| -> SideStep {
        if e < gs.a.model.edges.len() {
            SideStep { side: Side::A, step: Step::fwd(e) }
        } else {
            let j = iota_b.edges.iter().position(|&x| x == e).expect("every glued edge comes from a part");
            SideStep { side: Side::B, step: Step::fwd(j) }
        }
    };
    let to_side = |p: &PathWord| -> Vec<SideStep> {
        p.steps
            .iter()
            .map(|s| {
                let mut t = back(s.edge);
                t.step.dir = s.dir;
                t
            })
            .collect()
    };

    let (ma, mb) = (&gs.a.morse, &gs.b.morse);
    let (ia, ib) = (ma.by_index(), mb.by_index());
    // y[k] = (a point, b point, side-tagged path) for index k.
    let y: Vec<Option<(usize, usize, Vec<SideStep>)>> = (0..ia.len())
        .map(|k| {
            let (&x, &yb) = (ia[k].first()?, ib[k].first()?);
            let from = iota_a.vertices[ma.critical_points[x].vertex];
            let to = iota_b.vertices[mb.critical_points[yb].vertex];
            let path = model.find_path(from, to)?;
            Some((x, yb, to_side(&path)))
        })
        .collect();
    let side = |s: Side, steps: &[Step]| steps.iter().map(|&step| SideStep { side: s, step }).collect::<Vec<_>>();

    let mut cross = Vec::new();
    for k in 0..y.len() {
        if let Some((x, yb, pi)) = &y[k] {
            let yname = &mb.critical_points[*yb].name;
            for t in mb.trajectories.iter().filter(|t| &t.source == yname) {
                let mut path = pi.clone();
                path.extend(side(Side::B, &t.path));
                cross.push(CrossTrajectory {
                    source: ma.critical_points[*x].name.clone(),
                    target: t.target.clone(),
                    sign: t.sign,
                    path,
                });
            }
        }
        if k == 0 {
            continue;
        }
        if let Some((x_low, y_low, pi_low)) = &y[k - 1] {
            let xname = &ma.critical_points[*x_low].name;
            for t in ma.trajectories.iter().filter(|t| &t.target == xname) {
                let mut path = side(Side::A, &t.path);
                path.extend(pi_low.iter().copied());
                cross.push(CrossTrajectory {
                    source: t.source.clone(),
                    target: mb.critical_points[*y_low].name.clone(),
                    sign: -t.sign,
                    path,
                });
            }
        }
    }
    gs.cross = cross;
    Ok(gs)
}

/// The four gluing assertions plus propagator and well-formedness checks.
pub fn verify_gluing(gs: &GluedScenario) -> Report {
    let mut report = Report::new("verify-gluing");
    if let Err(e) = verify_gluing_into(gs, &mut report) {
        report.fail("evaluation", e.to_string());
    }
    report
}

fn verify_gluing_into(gs: &GluedScenario, report: &mut Report) -> Result<(), InvariantError> {
    let glued = match glue(gs) {
        Ok(g) => {
            report.pass("glue", "glued scenario passes validation");
            g
        }
        Err(e) => {
            report.fail("glue", e.to_string());
            return Ok(());
        }
    };
    let m = &glued.scenario;
    let ne = m.model.edges.len();

    for (label, part) in [("a", &gs.a), ("b", &gs.b)] {
        if let Some(warning) = part.boundary_acyclicity_warning()? {
            report.pass(format!("part {label}: boundary system acyclic"), format!("warning: {warning}"));
        } else {
            report.pass(format!("part {label}: boundary system acyclic"), "");
        }
    }

    let mca = morse_complex(&gs.a.model, &gs.a.representation, &gs.a.morse)?;
    let mcb = morse_complex(&gs.b.model, &gs.b.representation, &gs.b.morse)?;
    let mcm = morse_complex(&m.model, &m.representation, &m.morse)?;
    let ga = contraction(&mca.complex)?;
    let gb = contraction(&mcb.complex)?;

    let bc = match blocked_from_glued(&mca.complex, &mcb.complex, &mcm.complex) {
        Ok(bc) => bc,
        Err(e) => {
            report.fail("block structure", e.to_string());
            return Ok(());
        }
    };
    report.pass("block structure", "∂ = [[∂^a, 0], [∂^ab, ∂^b]]");
    let gp = glue_propagator(&bc, &ga, &gb)?;
    let pv = verify_propagator(&mcm.complex, &gp.total);
    report.push(
        "(i) glued propagator",
        pv.verdict,
        pv.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join("; "),
    );
    let off = off_diagonal_residuals(&bc, &ga, &gb, &gp.cross);
    report.push("(i) off-diagonal identity", off.iter().all(Matrix::is_zero), "");

    let ca = gs.a.morse.c_f_or_solve(&gs.a.model)?;
    let cb = gs.b.morse.c_f_or_solve(&gs.b.model)?;
    let cm = m.morse.c_f_or_solve(&m.model)?;
    let parts = (
        i_circle(&gs.a.model, &gs.a.representation, &gs.a.morse, &ga, &ca),
        i_circle(&gs.b.model, &gs.b.representation, &gs.b.morse, &gb, &cb),
    );
    let (ia, ib) = match parts {
        (Ok(ia), Ok(ib)) => {
            report.pass("(iii) part chains are cycles", "");
            (ia, ib)
        }
        (ra, rb) => {
            let msg = [ra.err(), rb.err()].into_iter().flatten().map(|e| e.to_string()).collect::<Vec<_>>().join("; ");
            report.fail("(iii) part chains are cycles", msg);
            return Ok(());
        }
    };
    let sum = glued.iota_a.push_chain(&ia, ne).add(&glued.iota_b.push_chain(&ib, ne))?;
    let im = i_circle(&m.model, &m.representation, &m.morse, &gp.total, &cm)?;
    let diff = im.sub(&sum)?;
    report.push(
        "(ii) chain identity I_M = ι_a I_a + ι_b I_b",
        diff.is_zero(),
        if diff.is_zero() { String::new() } else { format!("difference {:?}", diff.coefficients.iter().map(|x| x.to_string()).collect::<Vec<_>>()) },
    );

    let independent = contraction(&mcm.complex)?;
    let im2 = i_circle(&m.model, &m.representation, &m.morse, &independent, &cm)?;
    match d_equal(&m.model, &m.representation, &im2, &sum)? {
        Some(cert) => report.pass("(iv) class identity d(M) = ι_a d_a + ι_b d_b", format!("lattice coefficients {:?}", cert.n)),
        None => report.fail("(iv) class identity d(M) = ι_a d_a + ι_b d_b", "difference is not in the boundary + lattice subgroup"),
    }
    Ok(())
}

/// Splits a glued Morse complex whose bases list part a before part b in
/// every degree.
pub fn blocked_from_glued(
    a: &crate::localsys::TwistedComplex,
    b: &crate::localsys::TwistedComplex,
    m: &crate::localsys::TwistedComplex,
) -> Result<BlockedComplex, PropagatorError> {
    let len = m.dims().len() as isize;
    let mut cross = Vec::new();
    for k in 0..len {
        let d = m.boundary(k);
        let (ra, ca) = (a.dim(k - 1), a.dim(k));
        let (rb, cb) = (b.dim(k - 1), b.dim(k));
        if d.shape() != (ra + rb, ca + cb) {
            return Err(PropagatorError::Blocked(format!("degree {k} dimensions do not split")));
        }
        if d.block(0, 0, ra, ca) != a.boundary(k) || d.block(ra, ca, rb, cb) != b.boundary(k) {
            return Err(PropagatorError::Blocked(format!("diagonal blocks of ∂_{k} differ from the parts")));
        }
        if !d.block(0, ca, ra, cb).is_zero() {
            return Err(PropagatorError::Blocked(format!("∂_{k} has trajectories from b to a")));
        }
        cross.push(d.block(ra, 0, rb, ca));
    }
    BlockedComplex::new(a.clone(), b.clone(), cross)
}

/// A chain with every coefficient zero except `value` on `edge`.
pub fn single_edge_chain(n: usize, edges: usize, edge: usize, value: &Matrix) -> HomChain {
    let mut c = HomChain::zero(n, edges);
    c.coefficients[edge] = value.clone();
    c
}

/// `true` if every lattice coefficient in a certificate is zero.
pub fn certificate_is_trivial(c: &Certificate) -> bool {
    c.w.is_zero() && c.n.iter().all(|x| x.parse::<BigInt>().map(|v| v.is_zero()).unwrap_or(false))
}

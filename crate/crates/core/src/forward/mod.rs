//! Exterior Helmholtz scattering synthesis: combined-field Nystrom solver
//! for sound-soft and impedance obstacles, scattered/far-field evaluation,
//! the analytic disk oracle, and survey dataset synthesis.
//!
//! The scattered field is represented as a combined double/single layer
//! potential u^s = (D - i eta_c S) phi with coupling eta_c = k, which keeps
//! the boundary system uniquely solvable at every wavenumber. Boundary
//! systems over all curves are assembled jointly and solved by dense LU.

pub mod assemble;
pub mod disk;
pub mod kress;

use crate::error::{Error, Result};
use crate::geometry::{quadrature_size, ParametricCurve, SurveyGeometry};
use crate::matrix::Matrix;
use crate::point::Point2;
use crate::specfun;
use assemble::{assemble_operators, CurvePanel, SceneMesh, SceneOperators};
use nalgebra::{DMatrix, DVector, Dyn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C64 = Complex64;

const I4: C64 = C64::new(0.0, 0.25);

/// Default boundary sampling density (quadrature points per wavelength).
pub const POINTS_PER_WAVELENGTH: f64 = 10.0;

// ---------------------------------------------------------------------------
// Incident fields
// ---------------------------------------------------------------------------

/// Anything that can drive a scattering solve: supplies values and gradients
/// of the incoming field on the boundary.
pub trait SourceField: Sync {
    fn value(&self, k: f64, x: Point2) -> C64;
    fn gradient(&self, k: f64, x: Point2) -> [C64; 2];
}

/// The two probe waves used for synthesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum IncidentField {
    /// Point source: u^i(x) = Phi(x, location).
    PointSource { location: Point2 },
    /// Unit-amplitude plane wave exp(i k x . direction).
    PlaneWave { direction: Point2 },
}

impl IncidentField {
    pub fn point_source(location: Point2) -> Self {
        IncidentField::PointSource { location }
    }

    /// Normalizes the direction; fails on a zero vector.
    pub fn plane_wave(direction: Point2) -> Result<Self> {
        let n = direction.norm();
        if !(n > 1e-12) {
            return Err(Error::Domain("plane-wave direction must be nonzero".into()));
        }
        Ok(IncidentField::PlaneWave { direction: direction.scale(1.0 / n) })
    }
}

impl SourceField for IncidentField {
    fn value(&self, k: f64, x: Point2) -> C64 {
        match self {
            IncidentField::PointSource { location } => {
                let r = x.dist(*location);
                I4 * specfun::h0_fast(k * r)
            }
            IncidentField::PlaneWave { direction } => C64::cis(k * x.dot(*direction)),
        }
    }

    fn gradient(&self, k: f64, x: Point2) -> [C64; 2] {
        match self {
            IncidentField::PointSource { location } => {
                let d = x.sub(*location);
                let r = d.norm();
                let coef = -C64::new(0.0, 0.25 * k) * specfun::h1_fast(k * r) / r;
                [coef * d.x, coef * d.y]
            }
            IncidentField::PlaneWave { direction } => {
                let v = C64::new(0.0, k) * C64::cis(k * x.dot(*direction));
                [v * direction.x, v * direction.y]
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Boundary conditions
// ---------------------------------------------------------------------------

/// Piecewise-constant impedance in the boundary parameter; eta = 0 is the
/// sound-hard wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceProfile {
    segments: Vec<ImpedanceSegment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpedanceSegment {
    pub theta_from: f64,
    pub theta_to: f64,
    pub value: f64,
}

impl ImpedanceProfile {
    pub fn constant(value: f64) -> Result<Self> {
        Self::piecewise(vec![ImpedanceSegment { theta_from: 0.0, theta_to: 2.0 * PI, value }])
    }

    /// Segments must tile [0, 2 pi) contiguously with nonnegative values.
    pub fn piecewise(mut segments: Vec<ImpedanceSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Domain("impedance profile needs at least one segment".into()));
        }
        segments.sort_by(|a, b| a.theta_from.total_cmp(&b.theta_from));
        let mut cursor = 0.0;
        for seg in &segments {
            if !(seg.value >= 0.0) || !seg.value.is_finite() {
                return Err(Error::Domain(format!(
                    "impedance value {} must be finite and >= 0",
                    seg.value
                )));
            }
            if (seg.theta_from - cursor).abs() > 1e-12 {
                return Err(Error::Domain(
                    "impedance segments must tile [0, 2pi) without gaps".into(),
                ));
            }
            if seg.theta_to <= seg.theta_from {
                return Err(Error::Domain("impedance segment must have theta_to > theta_from".into()));
            }
            cursor = seg.theta_to;
        }
        if (cursor - 2.0 * PI).abs() > 1e-12 {
            return Err(Error::Domain("impedance segments must reach 2pi".into()));
        }
        Ok(Self { segments })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(2.0 * PI);
        for seg in &self.segments {
            if t >= seg.theta_from && t < seg.theta_to {
                return seg.value;
            }
        }
        self.segments.last().unwrap().value
    }

    /// Some(value) when the profile is a single constant.
    pub fn constant_value(&self) -> Option<f64> {
        if self.segments.len() == 1 {
            Some(self.segments[0].value)
        } else {
            None
        }
    }

    pub fn describe(&self) -> String {
        match self.constant_value() {
            Some(v) => format!("eta={v}"),
            None => {
                let parts: Vec<String> = self
                    .segments
                    .iter()
                    .map(|s| format!("eta={}on[{:.3},{:.3})", s.value, s.theta_from, s.theta_to))
                    .collect();
                parts.join("+")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    Dirichlet,
    Impedance(ImpedanceProfile),
}

impl BoundaryCondition {
    pub fn describe(&self) -> String {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet".to_string(),
            BoundaryCondition::Impedance(p) => format!("impedance({})", p.describe()),
        }
    }
}

/// One scatterer: a closed boundary plus its boundary condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub curve: ParametricCurve,
    pub bc: BoundaryCondition,
}

impl Obstacle {
    pub fn sound_soft(curve: ParametricCurve) -> Self {
        Self { curve, bc: BoundaryCondition::Dirichlet }
    }

    pub fn impedance(curve: ParametricCurve, profile: ImpedanceProfile) -> Self {
        Self { curve, bc: BoundaryCondition::Impedance(profile) }
    }
}

// ---------------------------------------------------------------------------
// Scene solver
// ---------------------------------------------------------------------------

/// Assembled and factorized boundary system for one scene at one
/// wavenumber; solves for any number of incident fields.
pub struct SceneSolver {
    mesh: SceneMesh,
    ops: SceneOperators,
    bcs: Vec<BoundaryCondition>,
    eta_nodes: Vec<f64>,
    k: f64,
    coupling: f64,
    lu: nalgebra::LU<C64, Dyn, Dyn>,
}

fn check_disjoint(curves: &[ParametricCurve]) -> Result<()> {
    for a in 0..curves.len() {
        for b in (a + 1)..curves.len() {
            let sa = curves[a].sample(512);
            let min = sa
                .iter()
                .map(|p| curves[b].distance_to(*p))
                .fold(f64::INFINITY, f64::min);
            if min < 1e-6 {
                return Err(Error::Geometry(format!(
                    "curves {a} and {b} touch (separation {min:.3e})"
                )));
            }
            if curves[b].contains(sa[0]) || curves[a].contains(curves[b].point(0.0)) {
                return Err(Error::Geometry(format!("curve {a} and {b} overlap")));
            }
        }
    }
    Ok(())
}

impl SceneSolver {
    /// Standard sampling: ten quadrature points per wavelength.
    pub fn new(obstacles: &[Obstacle], k: f64) -> Result<Self> {
        Self::with_points_per_wavelength(obstacles, k, POINTS_PER_WAVELENGTH)
    }

    pub fn with_points_per_wavelength(
        obstacles: &[Obstacle],
        k: f64,
        ppw: f64,
    ) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Domain(format!("wavenumber {k} must be positive")));
        }
        if obstacles.is_empty() {
            return Err(Error::Geometry("scene has no obstacles".into()));
        }
        let curves: Vec<ParametricCurve> = obstacles.iter().map(|o| o.curve.clone()).collect();
        check_disjoint(&curves)?;
        let panels = obstacles
            .iter()
            .map(|o| CurvePanel::new(o.curve.clone(), quadrature_size(&o.curve, k, ppw)))
            .collect::<Result<Vec<_>>>()?;
        let mesh = SceneMesh::new(panels);
        let ops = assemble_operators(&mesh, k);
        let coupling = k;
        let bcs: Vec<BoundaryCondition> = obstacles.iter().map(|o| o.bc.clone()).collect();

        let mut eta_nodes = vec![0.0; mesh.total];
        for (c, panel) in mesh.panels.iter().enumerate() {
            if let BoundaryCondition::Impedance(profile) = &bcs[c] {
                for j in 0..panel.n {
                    eta_nodes[mesh.offsets[c] + j] = profile.eval(panel.theta[j]);
                }
            }
        }

        let system = build_system(&mesh, &ops, &bcs, &eta_nodes, k, coupling);
        let lu = system.lu();
        // nalgebra's LU panics on nothing; singularity shows up at solve time
        Ok(Self { mesh, ops, bcs, eta_nodes, k, coupling, lu })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.mesh.total
    }

    fn check_point_source_placement(&self, source: &IncidentField) -> Result<()> {
        if let IncidentField::PointSource { location } = source {
            for panel in &self.mesh.panels {
                if panel.curve.contains(*location) {
                    return Err(Error::Geometry(format!(
                        "point source {location} lies inside an obstacle"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Right-hand side for one source field: the boundary data of -u^i in
    /// the form matching each curve's boundary condition.
    fn rhs_for(&self, source: &dyn SourceField) -> DVector<C64> {
        let mut rhs = DVector::zeros(self.mesh.total);
        for (c, panel) in self.mesh.panels.iter().enumerate() {
            let off = self.mesh.offsets[c];
            match &self.bcs[c] {
                BoundaryCondition::Dirichlet => {
                    for j in 0..panel.n {
                        rhs[off + j] = -source.value(self.k, panel.point[j]);
                    }
                }
                BoundaryCondition::Impedance(_) => {
                    for j in 0..panel.n {
                        let g = source.gradient(self.k, panel.point[j]);
                        let dn = g[0] * panel.normal[j].x + g[1] * panel.normal[j].y;
                        let eta = self.eta_nodes[off + j];
                        rhs[off + j] = -(dn
                            + C64::new(0.0, self.k * eta) * source.value(self.k, panel.point[j]));
                    }
                }
            }
        }
        rhs
    }

    fn density_to_solution(&self, density: DVector<C64>) -> BoundarySolution {
        let half = C64::new(0.5, 0.0);
        let ieta = C64::new(0.0, self.coupling);
        let trace_op = &self.ops.double * &density - (&self.ops.single * &density) * ieta;
        let nd_op = &self.ops.hyper * &density
            - (&self.ops.adjoint * &density - &density * half) * ieta;
        let trace: Vec<C64> = (0..self.mesh.total)
            .map(|i| trace_op[i] + half * density[i])
            .collect();
        let normal_derivative: Vec<C64> = (0..self.mesh.total).map(|i| nd_op[i]).collect();
        BoundarySolution {
            k: self.k,
            coupling: self.coupling,
            mesh: self.mesh.clone(),
            boundary_conditions: self.bcs.clone(),
            density: density.iter().copied().collect(),
            trace,
            normal_derivative,
        }
    }

    /// Solve for an arbitrary source field.
    pub fn solve_source(&self, source: &dyn SourceField) -> Result<BoundarySolution> {
        let rhs = self.rhs_for(source);
        let density = self
            .lu
            .solve(&rhs)
            .ok_or_else(|| Error::Solver("boundary system is singular".into()))?;
        Ok(self.density_to_solution(density))
    }

    /// Solve for a standard incident wave.
    pub fn solve(&self, incident: &IncidentField) -> Result<BoundarySolution> {
        self.check_point_source_placement(incident)?;
        self.solve_source(incident)
    }

    /// Solve for many point sources sharing one factorization; returns the
    /// densities column per source.
    fn solve_point_sources(&self, sources: &[Point2]) -> Result<DMatrix<C64>> {
        let mut rhs = DMatrix::zeros(self.mesh.total, sources.len());
        for (s, xs) in sources.iter().enumerate() {
            let field = IncidentField::point_source(*xs);
            self.check_point_source_placement(&field)?;
            let col = self.rhs_for(&field);
            rhs.set_column(s, &col);
        }
        self.lu
            .solve(&rhs)
            .ok_or_else(|| Error::Solver("boundary system is singular".into()))
    }

    pub(crate) fn mesh(&self) -> &SceneMesh {
        &self.mesh
    }

    pub fn boundary_conditions(&self) -> &[BoundaryCondition] {
        &self.bcs
    }
}

fn build_system(
    mesh: &SceneMesh,
    ops: &SceneOperators,
    bcs: &[BoundaryCondition],
    eta_nodes: &[f64],
    k: f64,
    coupling: f64,
) -> DMatrix<C64> {
    let n = mesh.total;
    let ieta = C64::new(0.0, coupling);
    let mut system = DMatrix::zeros(n, n);
    for (c, panel) in mesh.panels.iter().enumerate() {
        let off = mesh.offsets[c];
        match &bcs[c] {
            BoundaryCondition::Dirichlet => {
                for i in 0..panel.n {
                    let gi = off + i;
                    for j in 0..n {
                        system[(gi, j)] = ops.double[(gi, j)] - ieta * ops.single[(gi, j)];
                    }
                    system[(gi, gi)] += 0.5;
                }
            }
            BoundaryCondition::Impedance(_) => {
                for i in 0..panel.n {
                    let gi = off + i;
                    let ik_eta = C64::new(0.0, k * eta_nodes[gi]);
                    for j in 0..n {
                        let trace_part =
                            ops.double[(gi, j)] - ieta * ops.single[(gi, j)];
                        system[(gi, j)] = ops.hyper[(gi, j)] - ieta * ops.adjoint[(gi, j)]
                            + ik_eta * trace_part;
                    }
                    system[(gi, gi)] += ieta * 0.5 + ik_eta * 0.5;
                }
            }
        }
    }
    system
}

/// Solve a sound-soft (Dirichlet) scattering problem on one or more curves.
pub fn solve_dirichlet(
    curves: &[ParametricCurve],
    k: f64,
    incident: &IncidentField,
) -> Result<BoundarySolution> {
    let obstacles: Vec<Obstacle> =
        curves.iter().map(|c| Obstacle::sound_soft(c.clone())).collect();
    SceneSolver::new(&obstacles, k)?.solve(incident)
}

/// Solve an impedance scattering problem; one profile per curve.
pub fn solve_impedance(
    curves: &[ParametricCurve],
    k: f64,
    incident: &IncidentField,
    eta: &[ImpedanceProfile],
) -> Result<BoundarySolution> {
    if curves.len() != eta.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} curves but {} impedance profiles",
            curves.len(),
            eta.len()
        )));
    }
    let obstacles: Vec<Obstacle> = curves
        .iter()
        .zip(eta)
        .map(|(c, p)| Obstacle::impedance(c.clone(), p.clone()))
        .collect();
    SceneSolver::new(&obstacles, k)?.solve(incident)
}

// ---------------------------------------------------------------------------
// Boundary solution and field evaluation
// ---------------------------------------------------------------------------

/// A solved boundary system: combined-layer density plus the boundary trace
/// and normal derivative of the represented scattered field.
pub struct BoundarySolution {
    pub k: f64,
    coupling: f64,
    mesh: SceneMesh,
    /// Boundary condition of each curve, in scene order.
    pub boundary_conditions: Vec<BoundaryCondition>,
    pub density: Vec<C64>,
    pub trace: Vec<C64>,
    pub normal_derivative: Vec<C64>,
}

/// One quadrature node with its physical weight.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryNode {
    pub curve_index: usize,
    pub theta: f64,
    pub point: Point2,
    pub normal: Point2,
    /// Arc-length weight ds_j.
    pub ds: f64,
}

impl BoundarySolution {
    pub fn node_count(&self) -> usize {
        self.mesh.total
    }

    pub fn nodes(&self) -> Vec<BoundaryNode> {
        let mut out = Vec::with_capacity(self.mesh.total);
        for (c, panel) in self.mesh.panels.iter().enumerate() {
            for j in 0..panel.n {
                out.push(BoundaryNode {
                    curve_index: c,
                    theta: panel.theta[j],
                    point: panel.point[j],
                    normal: panel.normal[j],
                    ds: panel.ds(j),
                });
            }
        }
        out
    }

    /// Minimum distance at which exterior evaluation is in contract:
    /// twice the largest node spacing.
    pub fn min_evaluation_distance(&self) -> f64 {
        2.0 * self
            .mesh
            .panels
            .iter()
            .map(|p| p.node_spacing())
            .fold(0.0_f64, f64::max)
    }

    fn check_exterior(&self, x: Point2) -> Result<()> {
        let min = self.min_evaluation_distance();
        for panel in &self.mesh.panels {
            // cheap reject: far outside the curve's bounding circle
            let bound = panel
                .point
                .iter()
                .map(|p| p.dist(panel.curve.center))
                .fold(0.0_f64, f64::max);
            if x.dist(panel.curve.center) > bound + min {
                continue;
            }
            if panel.curve.contains(x) {
                return Err(Error::Geometry(format!("evaluation point {x} inside an obstacle")));
            }
            let dist = panel.curve.distance_to(x);
            if dist < min {
                return Err(Error::NearBoundary { dist, min });
            }
        }
        Ok(())
    }

    /// Scattered field at an exterior point via the layer representation.
    pub fn evaluate_scattered(&self, x: Point2) -> Result<C64> {
        self.check_exterior(x)?;
        Ok(self.evaluate_scattered_unchecked(x))
    }

    pub(crate) fn evaluate_scattered_unchecked(&self, x: Point2) -> C64 {
        let ieta = C64::new(0.0, self.coupling);
        let mut acc = C64::new(0.0, 0.0);
        for (c, panel) in self.mesh.panels.iter().enumerate() {
            let off = self.mesh.offsets[c];
            let w = panel.dtheta();
            for j in 0..panel.n {
                let rvec = x.sub(panel.point[j]);
                let r = rvec.norm();
                let t = self.k * r;
                let (j0, j1, y0, y1) = specfun::jy01_fast(t);
                let h0 = C64::new(j0, y0);
                let h1 = C64::new(j1, y1);
                // dPhi/dnu(y) = (ik/4) H1(kr) (x-y).nu / r
                let dl = C64::new(0.0, 0.25 * self.k) * h1 * rvec.dot(panel.normal[j]) / r;
                let sl = I4 * h0;
                acc += w * panel.speed[j] * (dl - ieta * sl) * self.density[off + j];
            }
        }
        acc
    }

    /// Far-field pattern from the boundary trace and normal derivative:
    /// w_inf(xhat) = gamma_m int [ w d/dnu e^{-ik xhat.y} - dw/dnu e^{-ik xhat.y} ] ds.
    pub fn evaluate_far_field(&self, direction: Point2) -> Result<C64> {
        let n = direction.norm();
        if !(n > 1e-12) {
            return Err(Error::Domain("far-field direction must be nonzero".into()));
        }
        let xhat = direction.scale(1.0 / n);
        let gamma = C64::from_polar(1.0 / (8.0 * PI * self.k).sqrt(), PI / 4.0);
        let mut acc = C64::new(0.0, 0.0);
        for (c, panel) in self.mesh.panels.iter().enumerate() {
            let off = self.mesh.offsets[c];
            let w = panel.dtheta();
            for j in 0..panel.n {
                let phase = C64::cis(-self.k * xhat.dot(panel.point[j]));
                let dncoef = C64::new(0.0, -self.k * xhat.dot(panel.normal[j]));
                acc += w
                    * panel.speed[j]
                    * (self.trace[off + j] * dncoef - self.normal_derivative[off + j])
                    * phase;
            }
        }
        Ok(gamma * acc)
    }

    /// -Im int_Gamma w conj(dw/dnu) ds, the boundary energy flux of the
    /// scattered field.
    pub fn boundary_energy_flux(&self) -> f64 {
        let mut acc = 0.0;
        for (node, (w, dn)) in self
            .nodes()
            .iter()
            .zip(self.trace.iter().zip(self.normal_derivative.iter()))
        {
            acc -= (w * dn.conj()).im * node.ds;
        }
        acc
    }

    /// Total far-field energy k int_{S^1} |w_inf|^2 by an n-point trapezoid.
    pub fn far_field_energy(&self, n_dirs: usize) -> Result<f64> {
        let mut acc = 0.0;
        for m in 0..n_dirs {
            let a = 2.0 * PI * m as f64 / n_dirs as f64;
            acc += self.evaluate_far_field(Point2::from_polar(1.0, a))?.norm_sqr();
        }
        Ok(self.k * acc * 2.0 * PI / n_dirs as f64)
    }

    // -- Nystrom extension to off-node boundary parameters ------------------

    /// Trace of the represented scattered field at an arbitrary boundary
    /// parameter of one curve (Nystrom-extended operators, not mere
    /// interpolation of node traces).
    pub fn boundary_trace_at(&self, curve_index: usize, t: f64) -> C64 {
        let ieta = C64::new(0.0, self.coupling);
        let (kval, sval, _, _) = self.layer_traces_at(curve_index, t);
        let phi_t = self.density_at(curve_index, t);
        0.5 * phi_t + kval - ieta * sval
    }

    /// Normal derivative of the represented scattered field at an arbitrary
    /// boundary parameter.
    pub fn boundary_normal_derivative_at(&self, curve_index: usize, t: f64) -> C64 {
        let ieta = C64::new(0.0, self.coupling);
        let (_, _, kpval, tval) = self.layer_traces_at(curve_index, t);
        let phi_t = self.density_at(curve_index, t);
        tval - ieta * (kpval - 0.5 * phi_t)
    }

    fn density_at(&self, curve_index: usize, t: f64) -> C64 {
        let off = self.mesh.offsets[curve_index];
        let n = self.mesh.panels[curve_index].n;
        kress::interpolate(&self.density[off..off + n], t)
    }

    /// (K phi, S phi, K' phi, T phi) at boundary parameter t of the given
    /// curve: the Nystrom extension of every operator, with the product
    /// quadrature evaluated at the off-node target. T uses the Maue form,
    /// whose tangential-derivative factor is differentiated analytically in
    /// the target parameter.
    fn layer_traces_at(&self, curve_index: usize, t: f64) -> (C64, C64, C64, C64) {
        let k = self.k;
        let (x, xd1, _) = self.mesh.panels[curve_index].curve.jet(t);
        let speed_t = xd1.norm();
        let nu_t = Point2::new(xd1.y / speed_t, -xd1.x / speed_t);

        let mut s_acc = C64::new(0.0, 0.0);
        let mut k_acc = C64::new(0.0, 0.0);
        let mut kp_acc = C64::new(0.0, 0.0);
        let mut t1 = C64::new(0.0, 0.0); // d/dt [A phi_theta](t)
        let mut t2 = C64::new(0.0, 0.0); // nu-weighted single layer

        for (c, panel) in self.mesh.panels.iter().enumerate() {
            let off = self.mesh.offsets[c];
            let w = panel.dtheta();
            let same = c == curve_index;
            // spectral derivative of the density on the source panel
            let phi_theta: Vec<C64> = (0..panel.n)
                .map(|i| {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..panel.n {
                        acc += kress::diff_entry(panel.n, i, j) * self.density[off + j];
                    }
                    acc
                })
                .collect();
            for j in 0..panel.n {
                let phi_j = self.density[off + j];
                let rvec = x.sub(panel.point[j]);
                let r = rvec.norm();
                let (j0, j1, y0, y1) = specfun::jy01_fast(k * r);
                let h0 = C64::new(j0, y0);
                let h1 = C64::new(j1, y1);
                let wy = panel.speed[j];
                let base = C64::new(0.0, 0.25 * k) * h1 / r;
                let cfac = rvec.x * panel.d1[j].y - rvec.y * panel.d1[j].x;
                let cfac_adj = rvec.dot(nu_t) * wy;
                let nn = nu_t.dot(panel.normal[j]);
                let s_full = I4 * h0 * wy;
                let k_full = base * cfac;
                let kp_full = -base * cfac_adj;
                // d/dt A(t, tau_j) = -(ik/4) H1(kr) (x'(t).rvec)/r
                let da_full = -base * rvec.dot(xd1);
                if same {
                    let rw = kress::log_weight(panel.n, t, panel.theta[j]);
                    let drw = kress::log_weight_derivative(panel.n, t, panel.theta[j]);
                    let u = t - panel.theta[j];
                    let lg = (4.0 * (0.5 * u).sin().powi(2)).ln();
                    let dlg = 1.0 / (0.5 * u).tan();
                    let s1 = C64::new(-j0 * wy / (4.0 * PI), 0.0);
                    let k1 = C64::new(-k / (4.0 * PI) * j1 / r * cfac, 0.0);
                    let kp1 = C64::new(k / (4.0 * PI) * j1 / r * cfac_adj, 0.0);
                    let a1 = C64::new(-j0 / (4.0 * PI), 0.0);
                    let da1 = C64::new(k / (4.0 * PI) * j1 / r * rvec.dot(xd1), 0.0);
                    let s_q = rw * s1 + w * (s_full - s1 * lg);
                    s_acc += s_q * phi_j;
                    k_acc += (rw * k1 + w * (k_full - k1 * lg)) * phi_j;
                    kp_acc += (rw * kp1 + w * (kp_full - kp1 * lg)) * phi_j;
                    t2 += nn * s_q * phi_j;
                    t1 += (drw * a1 + rw * da1 + w * (da_full - da1 * lg - a1 * dlg))
                        * phi_theta[j];
                } else {
                    s_acc += w * s_full * phi_j;
                    k_acc += w * k_full * phi_j;
                    kp_acc += w * kp_full * phi_j;
                    t2 += nn * w * s_full * phi_j;
                    t1 += w * da_full * phi_theta[j];
                }
            }
        }
        let t_acc = t1 / speed_t + k * k * t2;
        (k_acc, s_acc, kp_acc, t_acc)
    }
}

// ---------------------------------------------------------------------------
// Dataset synthesis
// ---------------------------------------------------------------------------

/// Where a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Synthesized,
    Ingested,
}

/// Survey data: the N_r x N_s total-field table (optionally complex) at one
/// wavenumber.
#[derive(Debug, Clone)]
pub struct ScatteringDataset {
    pub survey: SurveyGeometry,
    pub k: f64,
    /// Complex total field u(x_r, x_s); present only when the phase was kept.
    pub total: Option<Matrix<C64>>,
    /// |u(x_r, x_s)|; always present.
    pub magnitude: Matrix<f64>,
    pub provenance: Provenance,
    pub bc_desc: String,
    pub obstacle_desc: String,
}

impl ScatteringDataset {
    /// Incident field u^i(x_r, x_s) = Phi(x_r, x_s) for one survey pair.
    pub fn incident(k: f64, receiver: Point2, source: Point2) -> C64 {
        I4 * specfun::h0_fast(k * receiver.dist(source))
    }

    /// Scattered part u - u^i; requires phase.
    pub fn scattered(&self) -> Result<Matrix<C64>> {
        let total = self.total.as_ref().ok_or(Error::MissingPhase)?;
        let receivers = self.survey.receivers();
        let sources = self.survey.sources();
        let mut out = Matrix::filled(self.survey.n_receiver, self.survey.n_source, C64::new(0.0, 0.0));
        for (r, xr) in receivers.iter().enumerate() {
            for (s, xs) in sources.iter().enumerate() {
                out[(r, s)] =
                    total[(r, s)] - Self::incident(self.k, *xr, *xs);
            }
        }
        Ok(out)
    }
}

/// Synthesize the phaseless (and optionally complex) total-field dataset for
/// a scene: one boundary solve per source against a shared factorization.
pub fn synthesize_dataset(
    obstacles: &[Obstacle],
    k: f64,
    survey: &SurveyGeometry,
    keep_phase: bool,
) -> Result<ScatteringDataset> {
    let inner = survey.r_source.min(survey.r_receiver);
    for (idx, o) in obstacles.iter().enumerate() {
        let max_r = o.curve.sample(512).iter().map(|p| p.norm()).fold(0.0_f64, f64::max);
        if max_r >= inner {
            return Err(Error::Geometry(format!(
                "obstacle {idx} reaches radius {max_r:.3} but the arrays sit at {inner:.3}"
            )));
        }
    }
    let sources = survey.sources();
    let receivers = survey.receivers();
    let n_r = survey.n_receiver;
    let n_s = survey.n_source;

    let mut total = Matrix::filled(n_r, n_s, C64::new(0.0, 0.0));
    if obstacles.is_empty() {
        for (r, xr) in receivers.iter().enumerate() {
            for (s, xs) in sources.iter().enumerate() {
                total[(r, s)] = ScatteringDataset::incident(k, *xr, *xs);
            }
        }
    } else {
        let solver = SceneSolver::new(obstacles, k)?;
        let densities = solver.solve_point_sources(&sources)?;
        // receiver evaluation kernel: rows = receivers, cols = nodes
        let mesh = solver.mesh();
        let ieta = C64::new(0.0, solver.coupling);
        let mut kernel = DMatrix::zeros(n_r, mesh.total);
        for (r, xr) in receivers.iter().enumerate() {
            for (c, panel) in mesh.panels.iter().enumerate() {
                let off = mesh.offsets[c];
                let w = panel.dtheta();
                for j in 0..panel.n {
                    let rvec = xr.sub(panel.point[j]);
                    let dist = rvec.norm();
                    let t = k * dist;
                    let (j0, j1, y0, y1) = specfun::jy01_fast(t);
                    let h0 = C64::new(j0, y0);
                    let h1 = C64::new(j1, y1);
                    let dl = C64::new(0.0, 0.25 * k) * h1 * rvec.dot(panel.normal[j]) / dist;
                    kernel[(r, off + j)] = w * panel.speed[j] * (dl - ieta * I4 * h0);
                }
            }
        }
        let scattered = kernel * densities;
        for (r, xr) in receivers.iter().enumerate() {
            for (s, xs) in sources.iter().enumerate() {
                total[(r, s)] =
                    scattered[(r, s)] + ScatteringDataset::incident(k, *xr, *xs);
            }
        }
    }

    let magnitude = total.map(|v| v.norm());
    let bc_desc = if obstacles.is_empty() {
        "none".to_string()
    } else {
        obstacles.iter().map(|o| o.bc.describe()).collect::<Vec<_>>().join(";")
    };
    let obstacle_desc = if obstacles.is_empty() {
        "none".to_string()
    } else {
        obstacles.iter().map(|o| o.curve.describe()).collect::<Vec<_>>().join(";")
    };
    Ok(ScatteringDataset {
        survey: survey.clone(),
        k,
        total: if keep_phase { Some(total) } else { None },
        magnitude,
        provenance: Provenance::Synthesized,
        bc_desc,
        obstacle_desc,
    })
}

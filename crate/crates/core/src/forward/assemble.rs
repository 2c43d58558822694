//! Discretized boundaries and Nystrom assembly of the four boundary
//! operators (single layer, double layer, its adjoint, hypersingular).
//!
//! Diagonal blocks use the product quadrature for the logarithmic
//! singularity; off-diagonal blocks (disjoint curves) are smooth and use the
//! trapezoidal rule. The hypersingular operator is regularized through
//! integration by parts: T = d/ds S d/ds + k^2 nu . S nu, so only weakly
//! singular kernels are ever evaluated.

use crate::error::{Error, Result};
use crate::geometry::ParametricCurve;
use crate::point::Point2;
use crate::specfun;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

type C64 = Complex64;

/// One closed curve sampled at an even number of parameter nodes.
#[derive(Debug, Clone)]
pub struct CurvePanel {
    pub curve: ParametricCurve,
    pub n: usize,
    pub theta: Vec<f64>,
    pub point: Vec<Point2>,
    pub d1: Vec<Point2>,
    pub d2: Vec<Point2>,
    pub speed: Vec<f64>,
    pub normal: Vec<Point2>,
}

impl CurvePanel {
    pub fn new(curve: ParametricCurve, n: usize) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::Domain(format!("panel needs an even node count >= 8, got {n}")));
        }
        let mut theta = Vec::with_capacity(n);
        let mut point = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        let mut speed = Vec::with_capacity(n);
        let mut normal = Vec::with_capacity(n);
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let (p, v1, v2) = curve.jet(t);
            let s = v1.norm();
            if s < 1e-12 {
                return Err(Error::Geometry(format!("degenerate tangent at theta = {t}")));
            }
            theta.push(t);
            point.push(p);
            d1.push(v1);
            d2.push(v2);
            speed.push(s);
            normal.push(Point2::new(v1.y / s, -v1.x / s));
        }
        Ok(Self { curve, n, theta, point, d1, d2, speed, normal })
    }

    /// Trapezoid weight of the parameter grid.
    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Physical arc length attached to node j.
    pub fn ds(&self, j: usize) -> f64 {
        self.dtheta() * self.speed[j]
    }

    /// Mean physical node spacing.
    pub fn node_spacing(&self) -> f64 {
        self.curve.length() / self.n as f64
    }
}

/// All panels of a scene, concatenated into one global index space.
#[derive(Debug, Clone)]
pub struct SceneMesh {
    pub panels: Vec<CurvePanel>,
    pub offsets: Vec<usize>,
    pub total: usize,
}

impl SceneMesh {
    pub fn new(panels: Vec<CurvePanel>) -> Self {
        let mut offsets = Vec::with_capacity(panels.len());
        let mut total = 0;
        for p in &panels {
            offsets.push(total);
            total += p.n;
        }
        Self { panels, offsets, total }
    }

    pub fn panel_of(&self, global: usize) -> (usize, usize) {
        for (c, p) in self.panels.iter().enumerate() {
            if global < self.offsets[c] + p.n {
                return (c, global - self.offsets[c]);
            }
        }
        unreachable!("index out of range")
    }
}

/// Assembled boundary operators on the global node space.
pub struct SceneOperators {
    /// Weighted single layer S.
    pub single: DMatrix<C64>,
    /// Double layer K.
    pub double: DMatrix<C64>,
    /// Adjoint double layer K'.
    pub adjoint: DMatrix<C64>,
    /// Hypersingular T (Maue-regularized).
    pub hyper: DMatrix<C64>,
}

/// Kernel values of S, K, K' and the unweighted single layer A for one
/// (target, source) node pair, split into log part and smooth remainder
/// when `log_split` is set.
struct KernelEntry {
    s: C64,
    k: C64,
    kp: C64,
    a: C64,
}

fn smooth_kernels(
    k_wave: f64,
    x: Point2,
    nx: Point2,
    y: Point2,
    d1y: Point2,
) -> KernelEntry {
    let rvec = x.sub(y);
    let r = rvec.norm();
    let t = k_wave * r;
    let (j0, j1, y0, y1) = specfun::jy01_fast(t);
    let h0 = C64::new(j0, y0);
    let h1 = C64::new(j1, y1);
    let wy = d1y.norm();
    let i4 = C64::new(0.0, 0.25);
    let base = C64::new(0.0, 0.25 * k_wave) * h1 / r; // (ik/4) H1(kr)/r
    let cfac = rvec.x * d1y.y - rvec.y * d1y.x; // rvec . (y2', -y1')
    let cfac_adj = rvec.dot(nx) * wy;
    KernelEntry {
        s: i4 * h0 * wy,
        k: base * cfac,
        kp: -base * cfac_adj,
        a: i4 * h0,
    }
}

/// Same as [`smooth_kernels`], but returns (log coefficient, remainder) for
/// the Kress product rule, evaluated at distinct parameters on one panel.
#[allow(clippy::too_many_arguments)]
fn split_kernels(
    k_wave: f64,
    panel: &CurvePanel,
    i: usize,
    j: usize,
) -> (KernelEntry, KernelEntry) {
    let x = panel.point[i];
    let y = panel.point[j];
    let rvec = x.sub(y);
    let r = rvec.norm();
    let t = k_wave * r;
    let (j0, j1, y0, y1) = specfun::jy01_fast(t);
    let h0 = C64::new(j0, y0);
    let h1 = C64::new(j1, y1);
    let wy = panel.speed[j];
    let i4 = C64::new(0.0, 0.25);
    let base = C64::new(0.0, 0.25 * k_wave) * h1 / r;
    let cfac = rvec.x * panel.d1[j].y - rvec.y * panel.d1[j].x;
    let cfac_adj = rvec.dot(panel.normal[i]) * wy;
    let lg = {
        let u = panel.theta[i] - panel.theta[j];
        (4.0 * (0.5 * u).sin().powi(2)).ln()
    };
    let log_coef = KernelEntry {
        s: C64::new(-j0 * wy / (4.0 * PI), 0.0),
        k: C64::new(-k_wave / (4.0 * PI) * j1 / r * cfac, 0.0),
        kp: C64::new(k_wave / (4.0 * PI) * j1 / r * cfac_adj, 0.0),
        a: C64::new(-j0 / (4.0 * PI), 0.0),
    };
    let full = KernelEntry {
        s: i4 * h0 * wy,
        k: base * cfac,
        kp: -base * cfac_adj,
        a: i4 * h0,
    };
    let remainder = KernelEntry {
        s: full.s - log_coef.s * lg,
        k: full.k - log_coef.k * lg,
        kp: full.kp - log_coef.kp * lg,
        a: full.a - log_coef.a * lg,
    };
    (log_coef, remainder)
}

/// Diagonal (coincident-point) limits of the split kernels.
fn diagonal_kernels(k_wave: f64, panel: &CurvePanel, i: usize) -> (KernelEntry, KernelEntry) {
    let w = panel.speed[i];
    // x1'' x2' - x2'' x1' = -(x' x x'')
    let curl = -(panel.d1[i].cross(panel.d2[i]));
    let a2 = C64::new(
        -EULER_GAMMA / (2.0 * PI) - (0.5 * k_wave * w).ln() / (2.0 * PI),
        0.25,
    );
    let dl_diag = C64::new(curl / (4.0 * PI * w * w), 0.0);
    let log_coef = KernelEntry {
        s: C64::new(-w / (4.0 * PI), 0.0),
        k: C64::new(0.0, 0.0),
        kp: C64::new(0.0, 0.0),
        a: C64::new(-1.0 / (4.0 * PI), 0.0),
    };
    let remainder = KernelEntry { s: a2 * w, k: dl_diag, kp: dl_diag, a: a2 };
    (log_coef, remainder)
}

/// Assemble the four global operators.
pub fn assemble_operators(mesh: &SceneMesh, k_wave: f64) -> SceneOperators {
    let n = mesh.total;
    let mut single = DMatrix::zeros(n, n);
    let mut double = DMatrix::zeros(n, n);
    let mut adjoint = DMatrix::zeros(n, n);
    let mut aux = DMatrix::zeros(n, n); // unweighted single layer
    for (tc, tp) in mesh.panels.iter().enumerate() {
        for (sc, sp) in mesh.panels.iter().enumerate() {
            let to = mesh.offsets[tc];
            let so = mesh.offsets[sc];
            if tc == sc {
                let table = crate::forward::kress::log_weights_table(tp.n);
                let wtrap = tp.dtheta();
                for i in 0..tp.n {
                    for j in 0..tp.n {
                        let rw = table[(i + tp.n - j) % tp.n];
                        let (lc, rem) = if i == j {
                            diagonal_kernels(k_wave, tp, i)
                        } else {
                            split_kernels(k_wave, tp, i, j)
                        };
                        single[(to + i, so + j)] = rw * lc.s + wtrap * rem.s;
                        double[(to + i, so + j)] = rw * lc.k + wtrap * rem.k;
                        adjoint[(to + i, so + j)] = rw * lc.kp + wtrap * rem.kp;
                        aux[(to + i, so + j)] = rw * lc.a + wtrap * rem.a;
                    }
                }
            } else {
                let wtrap = sp.dtheta();
                for i in 0..tp.n {
                    for j in 0..sp.n {
                        let e = smooth_kernels(
                            k_wave,
                            tp.point[i],
                            tp.normal[i],
                            sp.point[j],
                            sp.d1[j],
                        );
                        single[(to + i, so + j)] = wtrap * e.s;
                        double[(to + i, so + j)] = wtrap * e.k;
                        adjoint[(to + i, so + j)] = wtrap * e.kp;
                        aux[(to + i, so + j)] = wtrap * e.a;
                    }
                }
            }
        }
    }

    // T = 1/|x'| d/dt [ A d/dtau ] + k^2 (nu_i . nu_j) (.) S
    let mut hyper = DMatrix::zeros(n, n);
    let diff: Vec<DMatrix<C64>> = mesh
        .panels
        .iter()
        .map(|p| {
            DMatrix::from_fn(p.n, p.n, |i, j| {
                C64::new(crate::forward::kress::diff_entry(p.n, i, j), 0.0)
            })
        })
        .collect();
    for (tc, tp) in mesh.panels.iter().enumerate() {
        for (sc, sp) in mesh.panels.iter().enumerate() {
            let to = mesh.offsets[tc];
            let so = mesh.offsets[sc];
            let a_block = aux.view((to, so), (tp.n, sp.n)).into_owned();
            let t1 = &diff[tc] * a_block * &diff[sc];
            for i in 0..tp.n {
                for j in 0..sp.n {
                    let nn = tp.normal[i].dot(sp.normal[j]);
                    hyper[(to + i, so + j)] = t1[(i, j)] / tp.speed[i]
                        + k_wave * k_wave * nn * single[(to + i, so + j)];
                }
            }
        }
    }

    SceneOperators { single, double, adjoint, hyper }
}

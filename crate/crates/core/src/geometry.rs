//! Obstacle boundary parameterizations, survey array placement and imaging
//! grids.

use crate::error::{Error, Result};
use crate::point::Point2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Canonical closed boundary shapes, each parameterized counterclockwise
/// over theta in [0, 2pi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Circle { radius: f64 },
    Kite,
    PLeaf { p: u32, amplitude: f64 },
    Peanut,
    RoundedSquare,
}

/// A closed obstacle boundary: a canonical shape plus a rigid placement
/// (rotation about the shape origin, then translation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricCurve {
    pub kind: CurveKind,
    pub center: Point2,
    pub rotation: f64,
}

pub const DEFAULT_LEAF_AMPLITUDE: f64 = 0.2;

impl ParametricCurve {
    pub fn new(kind: CurveKind) -> Result<Self> {
        if let CurveKind::PLeaf { p, amplitude } = &kind {
            if *p < 2 {
                return Err(Error::Domain(format!("p-leaf requires p >= 2, got {p}")));
            }
            if !(*amplitude >= 0.0 && *amplitude < 1.0) {
                return Err(Error::Domain(format!(
                    "p-leaf amplitude {amplitude} outside [0, 1)"
                )));
            }
        }
        if let CurveKind::Circle { radius } = &kind {
            if !(*radius > 0.0) {
                return Err(Error::Domain(format!("circle radius {radius} must be positive")));
            }
        }
        Ok(Self { kind, center: Point2::ORIGIN, rotation: 0.0 })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::new(CurveKind::Circle { radius })
    }

    pub fn kite() -> Self {
        Self::new(CurveKind::Kite).unwrap()
    }

    pub fn p_leaf(p: u32, amplitude: f64) -> Result<Self> {
        Self::new(CurveKind::PLeaf { p, amplitude })
    }

    pub fn peanut() -> Self {
        Self::new(CurveKind::Peanut).unwrap()
    }

    pub fn rounded_square() -> Self {
        Self::new(CurveKind::RoundedSquare).unwrap()
    }

    pub fn at(mut self, center: Point2) -> Self {
        self.center = center;
        self
    }

    pub fn rotated(mut self, rotation: f64) -> Self {
        self.rotation = rotation;
        self
    }

    /// Canonical parameterization and its first two derivatives, before the
    /// placement transform.
    fn canonical_jet(&self, theta: f64) -> (Point2, Point2, Point2) {
        let (s, c) = theta.sin_cos();
        match self.kind {
            CurveKind::Circle { radius } => (
                Point2::new(radius * c, radius * s),
                Point2::new(-radius * s, radius * c),
                Point2::new(-radius * c, -radius * s),
            ),
            CurveKind::Kite => {
                let (s2, c2) = (2.0 * theta).sin_cos();
                (
                    Point2::new(c + 0.65 * c2 - 0.65, 1.5 * s),
                    Point2::new(-s - 1.3 * s2, 1.5 * c),
                    Point2::new(-c - 2.6 * c2, -1.5 * s),
                )
            }
            CurveKind::PLeaf { p, amplitude } => {
                let pf = f64::from(p);
                let (sp, cp) = (pf * theta).sin_cos();
                let r = 1.0 + amplitude * cp;
                let dr = -amplitude * pf * sp;
                let ddr = -amplitude * pf * pf * cp;
                (
                    Point2::new(r * c, r * s),
                    Point2::new(dr * c - r * s, dr * s + r * c),
                    Point2::new(ddr * c - 2.0 * dr * s - r * c, ddr * s + 2.0 * dr * c - r * s),
                )
            }
            CurveKind::Peanut => {
                let (s3, c3) = (3.0 * theta).sin_cos();
                (
                    Point2::new(c + 0.2 * c3, s + 0.2 * s3),
                    Point2::new(-s - 0.6 * s3, c + 0.6 * c3),
                    Point2::new(-c - 1.8 * c3, -s - 1.8 * s3),
                )
            }
            CurveKind::RoundedSquare => {
                // x = cos^3 + cos, y = sin^3 + sin
                (
                    Point2::new(c * c * c + c, s * s * s + s),
                    Point2::new(-s * (3.0 * c * c + 1.0), c * (3.0 * s * s + 1.0)),
                    Point2::new(
                        -c * (3.0 * c * c + 1.0) + 6.0 * c * s * s,
                        -s * (3.0 * s * s + 1.0) + 6.0 * s * c * c,
                    ),
                )
            }
        }
    }

    /// Point on the placed curve.
    pub fn point(&self, theta: f64) -> Point2 {
        self.jet(theta).0
    }

    /// Point, first and second theta-derivatives of the placed curve.
    pub fn jet(&self, theta: f64) -> (Point2, Point2, Point2) {
        let (p, d1, d2) = self.canonical_jet(theta);
        (
            p.rotate(self.rotation).add(self.center),
            d1.rotate(self.rotation),
            d2.rotate(self.rotation),
        )
    }

    /// Outward unit normal (curves are counterclockwise, so the outward
    /// normal is (y', -x')/|x'|).
    pub fn outward_normal(&self, theta: f64) -> Result<Point2> {
        let (_, d1, _) = self.jet(theta);
        let speed = d1.norm();
        if speed < 1e-12 {
            return Err(Error::Geometry(format!(
                "degenerate tangent |x'({theta})| = {speed:.3e}"
            )));
        }
        Ok(Point2::new(d1.y / speed, -d1.x / speed))
    }

    /// Curve length by 1024-point trapezoidal rule on |x'| (spectrally
    /// accurate for these periodic integrands).
    pub fn length(&self) -> f64 {
        let n = 1024;
        let mut acc = 0.0;
        for j in 0..n {
            let theta = 2.0 * PI * j as f64 / n as f64;
            acc += self.jet(theta).1.norm();
        }
        acc * 2.0 * PI / n as f64
    }

    /// Dense point sample of the curve (for distance queries and overlap
    /// checks).
    pub fn sample(&self, n: usize) -> Vec<Point2> {
        (0..n).map(|j| self.point(2.0 * PI * j as f64 / n as f64)).collect()
    }

    /// Winding-number test against a dense polygonal approximation of the
    /// curve.
    pub fn contains(&self, z: Point2) -> bool {
        let poly = self.sample(1024);
        let mut winding = 0i32;
        for i in 0..poly.len() {
            let a = poly[i];
            let b = poly[(i + 1) % poly.len()];
            if a.y <= z.y {
                if b.y > z.y && b.sub(a).cross(z.sub(a)) > 0.0 {
                    winding += 1;
                }
            } else if b.y <= z.y && b.sub(a).cross(z.sub(a)) < 0.0 {
                winding -= 1;
            }
        }
        winding != 0
    }

    /// Distance from `z` to the curve by dense sampling.
    pub fn distance_to(&self, z: Point2) -> f64 {
        self.sample(2048)
            .iter()
            .map(|p| p.dist(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Short human-readable description (used in dataset headers).
    pub fn describe(&self) -> String {
        let base = match &self.kind {
            CurveKind::Circle { radius } => format!("circle(r={radius})"),
            CurveKind::Kite => "kite".to_string(),
            CurveKind::PLeaf { p, amplitude } => format!("{p}-leaf(a={amplitude})"),
            CurveKind::Peanut => "peanut".to_string(),
            CurveKind::RoundedSquare => "rounded-square".to_string(),
        };
        if self.center == Point2::ORIGIN && self.rotation == 0.0 {
            base
        } else {
            format!(
                "{base}@({},{})rot{}",
                self.center.x, self.center.y, self.rotation
            )
        }
    }
}

/// Smallest even node count >= 32 that puts `min_per_wavelength` quadrature
/// points on each wavelength along the boundary.
pub fn quadrature_size(curve: &ParametricCurve, k: f64, min_per_wavelength: f64) -> usize {
    let length = curve.length();
    let needed = (min_per_wavelength * length * k / (2.0 * PI)).ceil() as usize;
    let n = needed.max(32);
    if n % 2 == 1 {
        n + 1
    } else {
        n
    }
}

// ---------------------------------------------------------------------------
// Survey geometry
// ---------------------------------------------------------------------------

/// Concentric source/receiver circles: N_s emitters uniformly on the radius
/// R_s circle, N_r receivers uniformly on the radius R_r circle with an
/// angular offset so receivers never coincide with sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyGeometry {
    pub r_source: f64,
    pub n_source: usize,
    pub r_receiver: f64,
    pub n_receiver: usize,
    pub receiver_offset: f64,
}

impl SurveyGeometry {
    /// Standard survey with the default receiver offset pi/N_r.
    pub fn new(r_source: f64, n_source: usize, r_receiver: f64, n_receiver: usize) -> Result<Self> {
        let offset = PI / n_receiver as f64;
        Self::with_offset(r_source, n_source, r_receiver, n_receiver, offset)
    }

    pub fn with_offset(
        r_source: f64,
        n_source: usize,
        r_receiver: f64,
        n_receiver: usize,
        receiver_offset: f64,
    ) -> Result<Self> {
        if !(r_source > 0.0) || !(r_receiver > 0.0) {
            return Err(Error::Domain("survey radii must be positive".into()));
        }
        if n_source == 0 || n_receiver == 0 {
            return Err(Error::Domain("survey needs at least one source and receiver".into()));
        }
        let survey = Self { r_source, n_source, r_receiver, n_receiver, receiver_offset };
        if r_receiver < r_source {
            log::warn!(
                "receiver radius {r_receiver} < source radius {r_source}: outside the analyzed regime R_r = tau R_s, tau >= 1"
            );
        }
        let min_gap = survey.min_source_receiver_distance();
        if min_gap < 1e-12 * r_source.max(r_receiver) {
            return Err(Error::Geometry(format!(
                "source and receiver arrays share a point (min separation {min_gap:.3e})"
            )));
        }
        Ok(survey)
    }

    pub fn sources(&self) -> Vec<Point2> {
        place_sources(self)
    }

    pub fn receivers(&self) -> Vec<Point2> {
        place_receivers(self)
    }

    pub fn min_source_receiver_distance(&self) -> f64 {
        let sources = self.sources();
        let receivers = self.receivers();
        let mut min = f64::INFINITY;
        for s in &sources {
            for r in &receivers {
                min = min.min(s.dist(*r));
            }
        }
        min
    }
}

/// x_s = R_s (cos theta_s, sin theta_s), theta_s = 2 pi (s-1)/N_s.
pub fn place_sources(survey: &SurveyGeometry) -> Vec<Point2> {
    (0..survey.n_source)
        .map(|s| {
            Point2::from_polar(survey.r_source, 2.0 * PI * s as f64 / survey.n_source as f64)
        })
        .collect()
}

/// x_r = R_r (cos theta_r, sin theta_r), theta_r = 2 pi (r-1)/N_r + offset.
pub fn place_receivers(survey: &SurveyGeometry) -> Vec<Point2> {
    (0..survey.n_receiver)
        .map(|r| {
            Point2::from_polar(
                survey.r_receiver,
                2.0 * PI * r as f64 / survey.n_receiver as f64 + survey.receiver_offset,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Imaging grid
// ---------------------------------------------------------------------------

/// Rectangular sampling grid with real values stored row-major, y outer
/// (index iy * nx + ix). Node (0,0) sits at (x_min, y_min) and both
/// endpoints are included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

/// Uniform grid over [x_min, x_max] x [y_min, y_max] with zeroed values.
pub fn build_grid(
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
) -> Result<ImageGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::Domain(format!("grid needs nx, ny >= 2, got {nx} x {ny}")));
    }
    if !(x_max > x_min) || !(y_max > y_min) {
        return Err(Error::Domain("grid bounds must satisfy max > min".into()));
    }
    Ok(ImageGrid { x_min, x_max, y_min, y_max, nx, ny, values: vec![0.0; nx * ny] })
}

impl ImageGrid {
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn node(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(
            self.x_min + self.dx() * ix as f64,
            self.y_min + self.dy() * iy as f64,
        )
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn same_shape(&self, other: &ImageGrid) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && self.x_min == other.x_min
            && self.x_max == other.x_max
            && self.y_min == other.y_min
            && self.y_max == other.y_max
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_point_and_normal() {
        let c = ParametricCurve::circle(1.0).unwrap();
        let p = c.point(0.0);
        assert!((p.x - 1.0).abs() < 1e-15 && p.y.abs() < 1e-15);
        let n = c.outward_normal(0.0).unwrap();
        assert!((n.x - 1.0).abs() < 1e-15 && n.y.abs() < 1e-15);
        // outward everywhere on the disk
        for i in 0..64 {
            let theta = 2.0 * PI * i as f64 / 64.0;
            let n = c.outward_normal(theta).unwrap();
            assert!(n.dot(c.point(theta)) > 0.0);
        }
    }

    #[test]
    fn kite_and_leaf_reference_points() {
        let kite = ParametricCurve::kite();
        let p = kite.point(0.0);
        assert!((p.x - 1.0).abs() < 1e-15 && p.y.abs() < 1e-15);
        let leaf = ParametricCurve::p_leaf(5, DEFAULT_LEAF_AMPLITUDE).unwrap();
        let q = leaf.point(0.0);
        assert!((q.x - 1.2).abs() < 1e-15 && q.y.abs() < 1e-15);
    }

    fn all_shapes() -> Vec<ParametricCurve> {
        vec![
            ParametricCurve::circle(1.0).unwrap(),
            ParametricCurve::kite(),
            ParametricCurve::p_leaf(5, 0.2).unwrap(),
            ParametricCurve::peanut(),
            ParametricCurve::rounded_square(),
            ParametricCurve::kite().at(Point2::new(1.5, -2.0)).rotated(0.7),
        ]
    }

    #[test]
    fn jet_derivatives_match_finite_differences() {
        let h = 1e-5;
        for curve in all_shapes() {
            for i in 0..64 {
                let theta = 2.0 * PI * i as f64 / 64.0 + 0.013;
                let (_, d1, d2) = curve.jet(theta);
                let fd1 = curve.point(theta + h).sub(curve.point(theta - h)).scale(1.0 / (2.0 * h));
                let fd2 = curve
                    .jet(theta + h)
                    .1
                    .sub(curve.jet(theta - h).1)
                    .scale(1.0 / (2.0 * h));
                assert!(fd1.sub(d1).norm() <= 1e-6 * d1.norm().max(1.0), "{curve:?} d1 at {theta}");
                assert!(fd2.sub(d2).norm() <= 1e-6 * d2.norm().max(1.0), "{curve:?} d2 at {theta}");
            }
        }
    }

    #[test]
    fn normals_are_unit_and_orthogonal() {
        let kite = ParametricCurve::kite();
        for i in 0..256 {
            let theta = 2.0 * PI * i as f64 / 256.0;
            let n = kite.outward_normal(theta).unwrap();
            let (_, d1, _) = kite.jet(theta);
            assert!((n.norm() - 1.0).abs() < 1e-14);
            assert!(n.dot(d1).abs() < 1e-12 * d1.norm());
        }
    }

    #[test]
    fn curves_are_counterclockwise() {
        // positive signed (shoelace) area over a dense sample
        for curve in all_shapes() {
            let pts = curve.sample(4096);
            let mut area = 0.0;
            for i in 0..pts.len() {
                let a = pts[i];
                let b = pts[(i + 1) % pts.len()];
                area += a.cross(b);
            }
            assert!(area > 0.0, "{curve:?} not counterclockwise");
        }
    }

    #[test]
    fn outward_normal_points_away_on_convex_shapes() {
        for curve in [ParametricCurve::circle(1.3).unwrap(), ParametricCurve::peanut()] {
            let centroid = {
                let pts = curve.sample(512);
                let mut c = Point2::ORIGIN;
                for p in &pts {
                    c = c.add(*p);
                }
                c.scale(1.0 / 512.0)
            };
            for i in 0..128 {
                let theta = 2.0 * PI * i as f64 / 128.0;
                let n = curve.outward_normal(theta).unwrap();
                assert!(n.dot(curve.point(theta).sub(centroid)) > 0.0);
            }
        }
    }

    #[test]
    fn containment_and_distance() {
        let c = ParametricCurve::circle(1.0).unwrap().at(Point2::new(2.0, 0.0));
        assert!(c.contains(Point2::new(2.0, 0.0)));
        assert!(!c.contains(Point2::new(0.0, 0.0)));
        let d = c.distance_to(Point2::new(4.0, 0.0));
        assert!((d - 1.0).abs() < 1e-4);
    }

    #[test]
    fn source_placement() {
        let survey = SurveyGeometry::new(10.0, 4, 10.0, 4).unwrap();
        let s = survey.sources();
        let expected = [(10.0, 0.0), (0.0, 10.0), (-10.0, 0.0), (0.0, -10.0)];
        for (p, (ex, ey)) in s.iter().zip(expected) {
            assert!((p.x - ex).abs() < 1e-12 && (p.y - ey).abs() < 1e-12);
        }
        // first receiver at angle pi/4
        let r = survey.receivers();
        let angle = r[0].y.atan2(r[0].x);
        assert!((angle - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn arrays_on_circles_and_disjoint() {
        let survey = SurveyGeometry::new(10.0, 128, 10.0, 128).unwrap();
        for p in survey.sources().iter().chain(survey.receivers().iter()) {
            assert!((p.norm() - 10.0).abs() <= 1e-12 * 10.0);
        }
        assert!(survey.min_source_receiver_distance() > 0.0);
    }

    #[test]
    fn coincident_arrays_rejected() {
        // zero offset puts every receiver on top of a source
        let bad = SurveyGeometry::with_offset(10.0, 8, 10.0, 8, 0.0);
        assert!(matches!(bad, Err(Error::Geometry(_))));
        // offset pi/N_r can still collide when the source grid is twice as fine
        let sneaky = SurveyGeometry::new(10.0, 256, 10.0, 128);
        assert!(sneaky.is_err());
    }

    #[test]
    fn grid_construction() {
        let g = build_grid(-3.0, 3.0, -3.0, 3.0, 201, 201).unwrap();
        assert!((g.dx() - 0.03).abs() < 1e-15);
        assert!((g.dy() - 0.03).abs() < 1e-15);
        let corner = g.node(0, 0);
        assert_eq!((corner.x, corner.y), (-3.0, -3.0));

        let tiny = build_grid(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        assert_eq!(tiny.len(), 4);
        assert!(build_grid(0.0, 1.0, 0.0, 1.0, 1, 2).is_err());
        assert!(build_grid(1.0, 0.0, 0.0, 1.0, 4, 4).is_err());
    }

    #[test]
    fn quadrature_rule_values() {
        let c = ParametricCurve::circle(1.0).unwrap();
        let k = 4.0 * PI;
        assert_eq!(quadrature_size(&c, k, 10.0), 126);
        assert_eq!(quadrature_size(&c, 1e-3, 10.0), 32);
        for shape in all_shapes() {
            assert_eq!(quadrature_size(&shape, k, 10.0) % 2, 0);
        }
    }

    #[test]
    fn circle_length() {
        let c = ParametricCurve::circle(2.5).unwrap();
        assert!((c.length() - 5.0 * PI).abs() < 1e-10);
    }
}

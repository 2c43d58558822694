//! Phaseless reverse-time-migration imaging: corrected-data construction,
//! back-propagation, the cross-correlation imaging functional, its
//! full-phase baseline, the resolution-theory reference image, and
//! multi-frequency stacking.
//!
//! The imaging value at a sampling point z is
//!
//!   I(z) = -k^2 Im{ (2 pi)^2 R_s R_r / (N_s N_r)
//!                    sum_s sum_r Phi(z, x_s) Phi(x_r, z) D(x_r, x_s) }
//!
//! with D the corrected data (|u|^2 - |u^i|^2)/u^i built from intensity
//! measurements alone. Identical sums with D replaced by conj(u^s) give the
//! full-phase baseline. Summation order is fixed (receivers inner,
//! ascending; sources outer, ascending) so images are bit-reproducible
//! under any work partition.

use crate::error::{Error, Result};
use crate::forward::{
    BoundaryCondition, Obstacle, ScatteringDataset, SceneSolver, SourceField,
};
use crate::geometry::{ImageGrid, SurveyGeometry};
use crate::matrix::Matrix;
use crate::point::Point2;
use crate::specfun;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C64 = Complex64;

const I4: C64 = C64::new(0.0, 0.25);

/// Phi(a, b) without domain checks; survey geometry guarantees a != b.
fn phi(k: f64, a: Point2, b: Point2) -> C64 {
    I4 * specfun::h0_fast(k * a.dist(b))
}

// ---------------------------------------------------------------------------
// Corrected data
// ---------------------------------------------------------------------------

/// Back-propagation input built from intensity-only measurements:
/// D(x_r, x_s) = (|u|^2 - |u^i|^2) / u^i with u^i = Phi(x_r, x_s) known
/// analytically.
#[derive(Debug, Clone)]
pub struct CorrectedData {
    pub survey: SurveyGeometry,
    pub k: f64,
    pub delta: Matrix<C64>,
}

pub fn corrected_data(dataset: &ScatteringDataset) -> Result<CorrectedData> {
    let survey = dataset.survey.clone();
    let k = dataset.k;
    let receivers = survey.receivers();
    let sources = survey.sources();
    let mut delta =
        Matrix::filled(survey.n_receiver, survey.n_source, C64::new(0.0, 0.0));
    for (r, xr) in receivers.iter().enumerate() {
        for (s, xs) in sources.iter().enumerate() {
            let ui = phi(k, *xr, *xs);
            if ui.norm() < 1e-14 {
                return Err(Error::Singularity(ui.norm()));
            }
            let mag = dataset.magnitude[(r, s)];
            delta[(r, s)] = (mag * mag - ui.norm_sqr()) / ui;
        }
    }
    Ok(CorrectedData { survey, k, delta })
}

/// Corrected data built from an arbitrary weight matrix (used by the
/// decomposition identities and tests).
pub fn corrected_from_weights(
    survey: &SurveyGeometry,
    k: f64,
    delta: Matrix<C64>,
) -> Result<CorrectedData> {
    if delta.rows() != survey.n_receiver || delta.cols() != survey.n_source {
        return Err(Error::ShapeMismatch(format!(
            "weights are {}x{}, survey wants {}x{}",
            delta.rows(),
            delta.cols(),
            survey.n_receiver,
            survey.n_source
        )));
    }
    Ok(CorrectedData { survey: survey.clone(), k, delta })
}

/// Back-propagated field of one source:
/// v_b(z, x_s) = -(2 pi R_r / N_r) sum_r Phi(x_r, z) D(x_r, x_s).
pub fn backpropagate(data: &CorrectedData, z: Point2, source_index: usize) -> C64 {
    let receivers = data.survey.receivers();
    let mut acc = C64::new(0.0, 0.0);
    for (r, xr) in receivers.iter().enumerate() {
        acc += phi(data.k, *xr, z) * data.delta[(r, source_index)];
    }
    -(2.0 * PI * data.survey.r_receiver / data.survey.n_receiver as f64) * acc
}

// ---------------------------------------------------------------------------
// Images
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageVariant {
    Phaseless,
    FullPhase,
    Theoretical,
    Stacked,
}

/// A real-valued image of the sampling domain plus the metadata needed to
/// interpret it.
#[derive(Debug, Clone)]
pub struct RtmImage {
    pub grid: ImageGrid,
    pub wavenumbers: Vec<f64>,
    pub variant: ImageVariant,
    /// Free-form description of where the data came from.
    pub source: String,
}

impl RtmImage {
    /// Wavenumber used for resolution-scale quantities (tube width of the
    /// localization score): the mean over contributing frequencies.
    pub fn reference_wavenumber(&self) -> f64 {
        let n = self.wavenumbers.len().max(1) as f64;
        self.wavenumbers.iter().sum::<f64>() / n
    }

    pub fn max_abs(&self) -> f64 {
        self.grid.max_abs()
    }

    /// Copy with values scaled by 1/max|I| (no-op on an all-zero image).
    pub fn max_normalized(&self) -> RtmImage {
        let m = self.max_abs();
        let mut out = self.clone();
        if m > 0.0 {
            for v in &mut out.grid.values {
                *v /= m;
            }
        }
        out
    }
}

/// The imaging sum at a single sampling point for an arbitrary weight
/// matrix (receivers inner ascending, sources outer ascending).
fn kernel_value(
    k: f64,
    sources: &[Point2],
    receivers: &[Point2],
    scale: f64,
    weights: &Matrix<C64>,
    z: Point2,
) -> f64 {
    let n_s = sources.len();
    let n_r = receivers.len();
    let a: Vec<C64> = receivers.iter().map(|xr| phi(k, *xr, z)).collect();
    let mut acc = C64::new(0.0, 0.0);
    for (s, xs) in sources.iter().enumerate().take(n_s) {
        let mut inner = C64::new(0.0, 0.0);
        for (r, ar) in a.iter().enumerate().take(n_r) {
            inner += ar * weights[(r, s)];
        }
        acc += phi(k, z, *xs) * inner;
    }
    -k * k * scale * acc.im
}

fn survey_scale(survey: &SurveyGeometry) -> f64 {
    (2.0 * PI) * (2.0 * PI) * survey.r_source * survey.r_receiver
        / (survey.n_source as f64 * survey.n_receiver as f64)
}

/// Evaluate the weighted imaging functional on a grid (parallel over nodes,
/// bit-reproducible regardless of worker count).
pub fn rtm_image_with_weights(
    survey: &SurveyGeometry,
    k: f64,
    weights: &Matrix<C64>,
    grid: &ImageGrid,
    variant: ImageVariant,
    source: &str,
) -> RtmImage {
    let sources = survey.sources();
    let receivers = survey.receivers();
    let scale = survey_scale(survey);
    let mut out = grid.clone();
    out.values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let ix = idx % grid.nx;
            let iy = idx / grid.nx;
            kernel_value(k, &sources, &receivers, scale, weights, grid.node(ix, iy))
        })
        .collect();
    RtmImage {
        grid: out,
        wavenumbers: vec![k],
        variant,
        source: source.to_string(),
    }
}

/// Phaseless imaging functional on a grid.
pub fn rtm_image_phaseless(data: &CorrectedData, grid: &ImageGrid) -> RtmImage {
    rtm_image_with_weights(
        &data.survey,
        data.k,
        &data.delta,
        grid,
        ImageVariant::Phaseless,
        "phaseless corrected data",
    )
}

/// Phaseless imaging functional at a single point.
pub fn phaseless_value(data: &CorrectedData, z: Point2) -> f64 {
    kernel_value(
        data.k,
        &data.survey.sources(),
        &data.survey.receivers(),
        survey_scale(&data.survey),
        &data.delta,
        z,
    )
}

/// Full-phase reverse-time migration: the same kernel driven by
/// conj(u^s) instead of the corrected data. Requires the dataset phase.
pub fn rtm_image_fullphase(dataset: &ScatteringDataset, grid: &ImageGrid) -> Result<RtmImage> {
    let weights = fullphase_weights(dataset)?;
    Ok(rtm_image_with_weights(
        &dataset.survey,
        dataset.k,
        &weights,
        grid,
        ImageVariant::FullPhase,
        "conjugated scattered field",
    ))
}

/// conj(u^s) weight matrix of a with-phase dataset.
pub fn fullphase_weights(dataset: &ScatteringDataset) -> Result<Matrix<C64>> {
    let scattered = dataset.scattered()?;
    Ok(scattered.map(|v| v.conj()))
}

// ---------------------------------------------------------------------------
// Theoretical image (resolution theory reference)
// ---------------------------------------------------------------------------

/// Incoming field Im Phi(x, z) = J_0(k |x - z|)/4 used as boundary data of
/// the reference problem; smooth everywhere, including x = z.
struct ImPhiSource {
    z: Point2,
}

impl SourceField for ImPhiSource {
    fn value(&self, k: f64, x: Point2) -> C64 {
        C64::new(0.25 * specfun::j0_fast(k * x.dist(self.z)), 0.0)
    }

    fn gradient(&self, k: f64, x: Point2) -> [C64; 2] {
        let d = x.sub(self.z);
        let r = d.norm();
        if r < 1e-14 {
            return [C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        }
        let coef = -0.25 * k * specfun::j1_fast(k * r) / r;
        [C64::new(coef * d.x, 0.0), C64::new(coef * d.y, 0.0)]
    }
}

/// Number of far-field directions in the theoretical image quadrature.
pub const THEORETICAL_IMAGE_DIRECTIONS: usize = 512;

/// Predicted imaging value at z from the resolution theory: solve the
/// exterior problem whose boundary data is -Im Phi(., z) and integrate the
/// far-field energy; impedance obstacles add the weighted boundary term
/// k int eta |psi + Im Phi|^2 ds.
pub fn theoretical_image(obstacles: &[Obstacle], k: f64, z: Point2) -> Result<f64> {
    let solver = SceneSolver::new(obstacles, k)?;
    theoretical_image_with_solver(&solver, z)
}

/// Same, reusing an assembled scene (the factorization is z-independent).
pub fn theoretical_image_with_solver(solver: &SceneSolver, z: Point2) -> Result<f64> {
    let k = solver.k();
    let psi = solver.solve_source(&ImPhiSource { z })?;
    let mut value = psi.far_field_energy(THEORETICAL_IMAGE_DIRECTIONS)?;
    // impedance boundary term
    let has_impedance = psi
        .boundary_conditions
        .iter()
        .any(|bc| matches!(bc, BoundaryCondition::Impedance(_)));
    if has_impedance {
        let nodes = psi.nodes();
        for (j, node) in nodes.iter().enumerate() {
            if let BoundaryCondition::Impedance(profile) =
                &psi.boundary_conditions[node.curve_index]
            {
                let eta = profile.eval(node.theta);
                if eta == 0.0 {
                    continue;
                }
                let im_phi = 0.25 * specfun::j0_fast(k * node.point.dist(z));
                let total = psi.trace[j] + C64::new(im_phi, 0.0);
                value += k * eta * total.norm_sqr() * node.ds;
            }
        }
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Multi-frequency stacking
// ---------------------------------------------------------------------------

/// Pointwise mean of per-frequency images, each max-normalized first so no
/// single frequency dominates the stack.
pub fn multifrequency_stack(images: &[RtmImage]) -> Result<RtmImage> {
    let first = images
        .first()
        .ok_or_else(|| Error::Domain("stack needs at least one image".into()))?;
    for img in images.iter().skip(1) {
        if !img.grid.same_shape(&first.grid) {
            return Err(Error::GridMismatch(
                "stacked images must share one grid".into(),
            ));
        }
    }
    let mut out = first.grid.clone();
    out.values = vec![0.0; first.grid.len()];
    for img in images {
        let m = img.max_abs();
        let scale = if m > 0.0 { 1.0 / m } else { 0.0 };
        for (o, v) in out.values.iter_mut().zip(img.grid.values.iter()) {
            *o += v * scale;
        }
    }
    let n = images.len() as f64;
    for v in &mut out.values {
        *v /= n;
    }
    Ok(RtmImage {
        grid: out,
        wavenumbers: images.iter().flat_map(|i| i.wavenumbers.clone()).collect(),
        variant: ImageVariant::Stacked,
        source: format!("stack of {} images", images.len()),
    })
}

// ---------------------------------------------------------------------------
// Image files (CSV and PGM)
// ---------------------------------------------------------------------------

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV image dump: header `x,y,value`, then nx*ny rows in row-major order
/// with y outer, 17 significant digits.
pub fn write_image_csv(grid: &ImageGrid, path: &std::path::Path) -> Result<()> {
    let mut out = String::with_capacity(grid.len() * 60 + 16);
    out.push_str("x,y,value\n");
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let p = grid.node(ix, iy);
            out.push_str(&fmt17(p.x));
            out.push(',');
            out.push_str(&fmt17(p.y));
            out.push(',');
            out.push_str(&fmt17(grid.values[grid.index(ix, iy)]));
            out.push('\n');
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// ASCII PGM (P2) dump: values affinely mapped from [min, max] to
/// [0, 65535]; the exact range is recorded in a comment line.
pub fn write_image_pgm(grid: &ImageGrid, path: &std::path::Path) -> Result<()> {
    let min = grid.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = grid.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let mut out = String::with_capacity(grid.len() * 6 + 64);
    out.push_str("P2\n");
    out.push_str(&format!("# min={} max={}\n", fmt17(min), fmt17(max)));
    out.push_str(&format!("{} {}\n65535\n", grid.nx, grid.ny));
    let mut on_line = 0;
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let v = grid.values[grid.index(ix, iy)];
            let px = if span > 0.0 {
                (((v - min) / span * 65535.0).round() as i64).clamp(0, 65535)
            } else {
                0
            };
            out.push_str(&px.to_string());
            on_line += 1;
            if on_line == 12 {
                out.push('\n');
                on_line = 0;
            } else {
                out.push(' ');
            }
        }
    }
    if on_line != 0 {
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::synthesize_dataset;
    use crate::geometry::build_grid;

    fn tiny_survey(n_s: usize, n_r: usize) -> SurveyGeometry {
        SurveyGeometry::new(10.0, n_s, 10.0, n_r).unwrap()
    }

    #[test]
    fn corrected_data_arithmetic() {
        // single entry with |u|^2 = 2, |u^i|^2 = 1, u^i = 1 gives 1;
        // we emulate it through the formula directly
        let ui = C64::new(1.0, 0.0);
        let mag2 = 2.0;
        let delta = (mag2 - ui.norm_sqr()) / ui;
        assert_eq!(delta, C64::new(1.0, 0.0));
    }

    #[test]
    fn no_obstacle_gives_zero_delta_and_zero_image() {
        let survey = tiny_survey(3, 5);
        let k = 2.0 * PI;
        let ds = synthesize_dataset(&[], k, &survey, false).unwrap();
        let data = corrected_data(&ds).unwrap();
        for r in 0..5 {
            for s in 0..3 {
                assert!(data.delta[(r, s)].norm() < 1e-13);
            }
        }
        let grid = build_grid(-1.0, 1.0, -1.0, 1.0, 3, 3).unwrap();
        let img = rtm_image_phaseless(&data, &grid);
        for v in &img.grid.values {
            assert!(v.abs() < 1e-12);
        }
        // |u| stored as sqrt(|u|^2) re-squares to |u^i|^2 only up to rounding
        assert!(backpropagate(&data, Point2::new(0.3, 0.2), 1).norm() < 1e-15);
    }

    #[test]
    fn backpropagate_single_entry() {
        let survey = tiny_survey(3, 5);
        let k = 3.0;
        let mut delta = Matrix::filled(5, 3, C64::new(0.0, 0.0));
        delta[(2, 1)] = C64::new(1.0, 0.0);
        let data = corrected_from_weights(&survey, k, delta).unwrap();
        let z = Point2::new(0.4, -0.7);
        let got = backpropagate(&data, z, 1);
        let expected =
            -(2.0 * PI * 10.0 / 5.0) * phi(k, survey.receivers()[2], z);
        assert!((got - expected).norm() < 1e-15);
        // other source columns are empty
        assert_eq!(backpropagate(&data, z, 0).norm(), 0.0);
    }

    #[test]
    fn backpropagate_matches_reversed_summation() {
        let survey = tiny_survey(3, 7);
        let k = 2.5;
        let mut delta = Matrix::filled(7, 3, C64::new(0.0, 0.0));
        for r in 0..7 {
            for s in 0..3 {
                delta[(r, s)] = C64::new((r as f64).sin() + 0.3, (s as f64) - 0.5);
            }
        }
        let data = corrected_from_weights(&survey, k, delta.clone()).unwrap();
        let z = Point2::new(-0.2, 0.9);
        let forward = backpropagate(&data, z, 1);
        // independent re-summation in the opposite order
        let receivers = survey.receivers();
        let mut acc = C64::new(0.0, 0.0);
        for r in (0..7).rev() {
            acc += phi(k, receivers[r], z) * delta[(r, 1)];
        }
        let reference = -(2.0 * PI * 10.0 / 7.0) * acc;
        assert!((forward - reference).norm() <= 1e-14 * reference.norm().max(1.0));
    }

    #[test]
    fn image_matches_brute_force_quadruple_loop() {
        let survey = tiny_survey(2, 2);
        let k = 2.0;
        let mut delta = Matrix::filled(2, 2, C64::new(0.0, 0.0));
        delta[(0, 0)] = C64::new(0.7, -0.2);
        delta[(0, 1)] = C64::new(-0.1, 0.4);
        delta[(1, 0)] = C64::new(0.0, 1.1);
        delta[(1, 1)] = C64::new(0.3, 0.3);
        let data = corrected_from_weights(&survey, k, delta.clone()).unwrap();
        let grid = build_grid(-1.0, 1.0, -1.0, 1.0, 4, 3).unwrap();
        let img = rtm_image_phaseless(&data, &grid);

        let sources = survey.sources();
        let receivers = survey.receivers();
        for iy in 0..3 {
            for ix in 0..4 {
                let z = grid.node(ix, iy);
                // brute force, written independently of the kernel code
                let mut acc = C64::new(0.0, 0.0);
                for s in 0..2 {
                    for r in 0..2 {
                        acc += phi(k, z, sources[s])
                            * phi(k, receivers[r], z)
                            * delta[(r, s)];
                    }
                }
                let c = (2.0 * PI) * (2.0 * PI) * 10.0 * 10.0 / 4.0;
                let expected = -k * k * c * acc.im;
                let got = img.grid.values[grid.index(ix, iy)];
                assert!(
                    (got - expected).abs() <= 1e-13 * expected.abs().max(1.0),
                    "({ix},{iy}): {got} vs {expected}"
                );
                // composition route: scor1 with the back-propagated field
                let mut comp = C64::new(0.0, 0.0);
                for s in 0..2 {
                    comp += phi(k, z, sources[s]) * backpropagate(&data, z, s);
                }
                let composed = k * k * (2.0 * PI * 10.0 / 2.0) * comp.im;
                assert!((got - composed).abs() <= 1e-13 * composed.abs().max(1.0));
            }
        }
    }

    #[test]
    fn imaging_is_linear_in_weights() {
        let survey = tiny_survey(3, 3);
        let k = 1.5;
        let mut delta = Matrix::filled(3, 3, C64::new(0.0, 0.0));
        for r in 0..3 {
            for s in 0..3 {
                delta[(r, s)] = C64::new(0.1 * (r * 3 + s) as f64, -0.2 * r as f64);
            }
        }
        let alpha = 3.7;
        let scaled = delta.map(|v| v * alpha);
        let grid = build_grid(-1.0, 1.0, -1.0, 1.0, 3, 3).unwrap();
        let base = rtm_image_with_weights(&survey, k, &delta, &grid, ImageVariant::Phaseless, "t");
        let big = rtm_image_with_weights(&survey, k, &scaled, &grid, ImageVariant::Phaseless, "t");
        for (a, b) in base.grid.values.iter().zip(big.grid.values.iter()) {
            assert!((b - alpha * a).abs() <= 1e-12 * a.abs().max(1e-12));
        }
    }

    #[test]
    fn stack_rules() {
        let grid = build_grid(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        let mut img = RtmImage {
            grid: grid.clone(),
            wavenumbers: vec![2.0],
            variant: ImageVariant::Phaseless,
            source: "t".into(),
        };
        img.grid.values = vec![1.0, 2.0, -4.0, 0.5];
        let single = multifrequency_stack(std::slice::from_ref(&img)).unwrap();
        for (a, b) in single.grid.values.iter().zip(img.grid.values.iter()) {
            assert!((a - b / 4.0).abs() < 1e-15); // normalized by max=4
        }
        let double = multifrequency_stack(&[img.clone(), img.clone()]).unwrap();
        for (a, b) in double.grid.values.iter().zip(single.grid.values.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
        let other = RtmImage {
            grid: build_grid(0.0, 1.0, 0.0, 1.0, 3, 2).unwrap(),
            wavenumbers: vec![2.0],
            variant: ImageVariant::Phaseless,
            source: "t".into(),
        };
        assert!(matches!(
            multifrequency_stack(&[img.clone(), other]),
            Err(Error::GridMismatch(_))
        ));
        assert!(multifrequency_stack(&[]).is_err());
    }

    #[test]
    fn image_files_roundtrip() {
        let dir = std::env::temp_dir().join("rtm2d_imgio_test");
        std::fs::create_dir_all(&dir).unwrap();
        let mut grid = build_grid(0.0, 1.0, 0.0, 2.0, 3, 2).unwrap();
        grid.values = vec![0.0, 0.5, -1.0, 2.0, 0.25, 1.0 / 3.0];
        let csv_path = dir.join("img.csv");
        write_image_csv(&grid, &csv_path).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x,y,value");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0].parse::<f64>().unwrap(), 0.0);
        // 17 significant digits reparse exactly
        let third: Vec<&str> = text.lines().nth(6).unwrap().split(',').collect();
        assert_eq!(third[2].parse::<f64>().unwrap(), 1.0 / 3.0);

        let pgm_path = dir.join("img.pgm");
        write_image_pgm(&grid, &pgm_path).unwrap();
        let pgm = std::fs::read_to_string(&pgm_path).unwrap();
        let mut it = pgm.lines();
        assert_eq!(it.next().unwrap(), "P2");
        let comment = it.next().unwrap();
        assert!(comment.starts_with("# min=-1"));
        assert_eq!(it.next().unwrap(), "3 2");
        assert_eq!(it.next().unwrap(), "65535");
        let pix: Vec<i64> = it
            .flat_map(|l| l.split_whitespace().map(|w| w.parse::<i64>().unwrap()))
            .collect();
        assert_eq!(pix.len(), 6);
        assert_eq!(pix[2], 0); // min maps to 0
        assert_eq!(pix[3], 65535); // max maps to full scale
    }
}

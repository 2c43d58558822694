//! Python bindings: the main types and operations of the toolkit, with
//! plain tuples/lists at the boundary so no numpy dependency is needed.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rtm2d_core::error::Error;
use rtm2d_core::forward;
use rtm2d_core::geometry;
use rtm2d_core::harness;
use rtm2d_core::imaging;
use rtm2d_core::matrix::Matrix;
use rtm2d_core::point::Point2;
use rtm2d_core::specfun;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn order(n: u32) -> PyResult<specfun::CylinderOrder> {
    specfun::CylinderOrder::new(n).map_err(err)
}

/// Bessel function of the first kind J_n(t).
#[pyfunction]
fn bessel_j(n: u32, t: f64) -> PyResult<f64> {
    specfun::bessel_j(order(n)?, t).map_err(err)
}

/// Bessel function of the second kind Y_n(t).
#[pyfunction]
fn bessel_y(n: u32, t: f64) -> PyResult<f64> {
    specfun::bessel_y(order(n)?, t).map_err(err)
}

/// Hankel function of the first kind H^(1)_n(t).
#[pyfunction]
fn hankel1(n: u32, t: f64) -> PyResult<Complex64> {
    specfun::hankel1(order(n)?, t).map_err(err)
}

/// Outgoing Helmholtz point-source field (i/4) H_0(k |x - y|).
#[pyfunction]
fn fundamental_solution(k: f64, x: (f64, f64), y: (f64, f64)) -> PyResult<Complex64> {
    specfun::fundamental_solution(k, Point2::new(x.0, x.1), Point2::new(y.0, y.1)).map_err(err)
}

/// A closed obstacle boundary.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Curve {
    inner: geometry::ParametricCurve,
}

#[pymethods]
impl Curve {
    #[staticmethod]
    fn circle(radius: f64) -> PyResult<Curve> {
        Ok(Curve { inner: geometry::ParametricCurve::circle(radius).map_err(err)? })
    }

    #[staticmethod]
    fn kite() -> Curve {
        Curve { inner: geometry::ParametricCurve::kite() }
    }

    #[staticmethod]
    #[pyo3(signature = (p, amplitude = 0.2))]
    fn p_leaf(p: u32, amplitude: f64) -> PyResult<Curve> {
        Ok(Curve { inner: geometry::ParametricCurve::p_leaf(p, amplitude).map_err(err)? })
    }

    #[staticmethod]
    fn peanut() -> Curve {
        Curve { inner: geometry::ParametricCurve::peanut() }
    }

    #[staticmethod]
    fn rounded_square() -> Curve {
        Curve { inner: geometry::ParametricCurve::rounded_square() }
    }

    /// Copy with the given center.
    fn at(&self, x: f64, y: f64) -> Curve {
        Curve { inner: self.inner.clone().at(Point2::new(x, y)) }
    }

    /// Copy rotated by `angle` radians.
    fn rotated(&self, angle: f64) -> Curve {
        Curve { inner: self.inner.clone().rotated(angle) }
    }

    fn point(&self, theta: f64) -> (f64, f64) {
        let p = self.inner.point(theta);
        (p.x, p.y)
    }

    fn normal(&self, theta: f64) -> PyResult<(f64, f64)> {
        let n = self.inner.outward_normal(theta).map_err(err)?;
        Ok((n.x, n.y))
    }

    fn length(&self) -> f64 {
        self.inner.length()
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        self.inner.contains(Point2::new(x, y))
    }

    fn distance_to(&self, x: f64, y: f64) -> f64 {
        self.inner.distance_to(Point2::new(x, y))
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.inner.describe())
    }
}

/// Source/receiver array geometry.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Survey {
    inner: geometry::SurveyGeometry,
}

#[pymethods]
impl Survey {
    #[new]
    fn new(r_source: f64, n_source: usize, r_receiver: f64, n_receiver: usize) -> PyResult<Survey> {
        Ok(Survey {
            inner: geometry::SurveyGeometry::new(r_source, n_source, r_receiver, n_receiver)
                .map_err(err)?,
        })
    }

    fn sources(&self) -> Vec<(f64, f64)> {
        self.inner.sources().iter().map(|p| (p.x, p.y)).collect()
    }

    fn receivers(&self) -> Vec<(f64, f64)> {
        self.inner.receivers().iter().map(|p| (p.x, p.y)).collect()
    }
}

fn scene_from(curves: Vec<Curve>, eta: Option<f64>) -> PyResult<Vec<forward::Obstacle>> {
    curves
        .into_iter()
        .map(|c| {
            Ok(match eta {
                None => forward::Obstacle::sound_soft(c.inner),
                Some(v) => forward::Obstacle::impedance(
                    c.inner,
                    forward::ImpedanceProfile::constant(v).map_err(err)?,
                ),
            })
        })
        .collect()
}

fn rows_to_matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix<f64>> {
    let n_r = rows.len();
    if n_r == 0 {
        return Err(PyValueError::new_err("matrix must be nonempty"));
    }
    let n_s = rows[0].len();
    if rows.iter().any(|r| r.len() != n_s) {
        return Err(PyValueError::new_err("rows have unequal lengths"));
    }
    Ok(Matrix::from_vec(n_r, n_s, rows.into_iter().flatten().collect()))
}

/// Synthesize |u(x_r, x_s)| for a scene; `eta = None` means sound-soft
/// obstacles, a float applies that constant impedance to every curve.
/// Returns one row per receiver.
#[pyfunction]
#[pyo3(signature = (curves, k, survey, eta = None))]
fn synthesize_magnitude(
    curves: Vec<Curve>,
    k: f64,
    survey: &Survey,
    eta: Option<f64>,
) -> PyResult<Vec<Vec<f64>>> {
    let scene = scene_from(curves, eta)?;
    let ds = forward::synthesize_dataset(&scene, k, &survey.inner, false).map_err(err)?;
    let n_r = survey.inner.n_receiver;
    let n_s = survey.inner.n_source;
    Ok((0..n_r)
        .map(|r| (0..n_s).map(|s| ds.magnitude[(r, s)]).collect())
        .collect())
}

/// Phaseless RTM image from a magnitude table; returns ny rows of nx values
/// (y outer, ascending).
#[pyfunction]
#[pyo3(signature = (magnitude, k, survey, bounds, nx, ny))]
fn phaseless_image(
    magnitude: Vec<Vec<f64>>,
    k: f64,
    survey: &Survey,
    bounds: (f64, f64, f64, f64),
    nx: usize,
    ny: usize,
) -> PyResult<Vec<Vec<f64>>> {
    let mag = rows_to_matrix(magnitude)?;
    if mag.rows() != survey.inner.n_receiver || mag.cols() != survey.inner.n_source {
        return Err(PyValueError::new_err("magnitude shape does not match the survey"));
    }
    let ds = forward::ScatteringDataset {
        survey: survey.inner.clone(),
        k,
        total: None,
        magnitude: mag,
        provenance: forward::Provenance::Ingested,
        bc_desc: "ingested".into(),
        obstacle_desc: "ingested".into(),
    };
    let data = imaging::corrected_data(&ds).map_err(err)?;
    let grid = geometry::build_grid(bounds.0, bounds.1, bounds.2, bounds.3, nx, ny).map_err(err)?;
    let img = imaging::rtm_image_phaseless(&data, &grid);
    Ok((0..ny)
        .map(|iy| (0..nx).map(|ix| img.grid.values[img.grid.index(ix, iy)]).collect())
        .collect())
}

/// Resolution-theory reference value at a sampling point.
#[pyfunction]
#[pyo3(signature = (curves, k, z, eta = None))]
fn theoretical_image(curves: Vec<Curve>, k: f64, z: (f64, f64), eta: Option<f64>) -> PyResult<f64> {
    let scene = scene_from(curves, eta)?;
    imaging::theoretical_image(&scene, k, Point2::new(z.0, z.1)).map_err(err)
}

/// Fraction of top-quantile image nodes within half a wavelength of the
/// boundary.
#[pyfunction]
#[pyo3(signature = (image, bounds, curves, k, quantile = 0.99))]
fn localization_score(
    image: Vec<Vec<f64>>,
    bounds: (f64, f64, f64, f64),
    curves: Vec<Curve>,
    k: f64,
    quantile: f64,
) -> PyResult<f64> {
    let ny = image.len();
    let nx = image.first().map(|r| r.len()).unwrap_or(0);
    let mut grid =
        geometry::build_grid(bounds.0, bounds.1, bounds.2, bounds.3, nx, ny).map_err(err)?;
    grid.values = image.into_iter().flatten().collect();
    let img = imaging::RtmImage {
        grid,
        wavenumbers: vec![k],
        variant: imaging::ImageVariant::Phaseless,
        source: "python".into(),
    };
    let shapes: Vec<geometry::ParametricCurve> = curves.into_iter().map(|c| c.inner).collect();
    harness::localization_score(&img, &shapes, quantile).map_err(err)
}

/// Additive Gaussian noise |u| + mu max|u| eps with a deterministic seed.
#[pyfunction]
fn add_noise(magnitude: Vec<Vec<f64>>, mu: f64, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    let mag = rows_to_matrix(magnitude)?;
    let mut rng = harness::NoiseRng::new(seed);
    let noisy = harness::add_noise(&mag, mu, &mut rng).map_err(err)?;
    Ok((0..noisy.rows())
        .map(|r| (0..noisy.cols()).map(|s| noisy[(r, s)]).collect())
        .collect())
}

#[pymodule]
fn rtm2d(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_y, m)?)?;
    m.add_function(wrap_pyfunction!(hankel1, m)?)?;
    m.add_function(wrap_pyfunction!(fundamental_solution, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_magnitude, m)?)?;
    m.add_function(wrap_pyfunction!(phaseless_image, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_image, m)?)?;
    m.add_function(wrap_pyfunction!(localization_score, m)?)?;
    m.add_function(wrap_pyfunction!(add_noise, m)?)?;
    m.add_class::<Curve>()?;
    m.add_class::<Survey>()?;
    Ok(())
}

//! Experiment configuration: JSON files with a strict schema (unknown keys
//! rejected), converted into domain objects on load.

use crate::error::{Error, Result};
use crate::forward::{BoundaryCondition, ImpedanceProfile, ImpedanceSegment, Obstacle};
use crate::geometry::{build_grid, ImageGrid, ParametricCurve, SurveyGeometry};
use crate::point::Point2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Synthesize a dataset file.
    Synth,
    /// Produce a phaseless image (from a dataset file or by synthesis).
    Image,
    /// Phaseless vs full-phase images plus decomposition metrics.
    Compare,
    /// Imaging values against the resolution-theory reference at probe points.
    Oracle,
    /// Imaging across a list of noise levels with a noise report table.
    NoiseSweep,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle { radius: f64 },
    Kite,
    PLeaf {
        p: u32,
        #[serde(default = "default_leaf_amplitude")]
        amplitude: f64,
    },
    Peanut,
    RoundedSquare,
}

fn default_leaf_amplitude() -> f64 {
    crate::geometry::DEFAULT_LEAF_AMPLITUDE
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub from: f64,
    pub to: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EtaSpec {
    Constant(f64),
    Piecewise(Vec<SegmentSpec>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcSpec {
    Dirichlet,
    Impedance(EtaSpec),
}

fn default_bc() -> BcSpec {
    BcSpec::Dirichlet
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    pub shape: CurveSpec,
    #[serde(default)]
    pub center: Option<[f64; 2]>,
    #[serde(default)]
    pub rotation: Option<f64>,
    #[serde(default = "default_bc")]
    pub bc: BcSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveySpec {
    pub r_source: f64,
    pub n_source: usize,
    pub r_receiver: f64,
    pub n_receiver: usize,
    #[serde(default)]
    pub receiver_offset: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub mu: Vec<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<ImageFormat>,
    #[serde(default = "default_dataset_name")]
    pub dataset: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
            formats: default_formats(),
            dataset: default_dataset_name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    Csv,
    Pgm,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<ImageFormat> {
    vec![ImageFormat::Csv, ImageFormat::Pgm]
}

fn default_dataset_name() -> String {
    "dataset.txt".to_string()
}

/// One experiment: scene, probe frequency or frequencies, survey, grid,
/// noise model, outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// Free-form remark carried along (e.g. provenance of guessed scene
    /// placements); never interpreted.
    #[serde(default)]
    pub notes: Option<String>,
    #[serde(default)]
    pub obstacles: Vec<ObstacleSpec>,
    #[serde(default)]
    pub k: Option<f64>,
    #[serde(default)]
    pub wavelengths: Option<Vec<f64>>,
    pub survey: SurveySpec,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub outputs: OutputSpec,
    /// Retain the complex total field when synthesizing.
    #[serde(default)]
    pub keep_phase: bool,
    /// Image mode: read this dataset file instead of synthesizing.
    #[serde(default)]
    pub dataset_in: Option<PathBuf>,
    /// Oracle mode: probe points for the theoretical comparison.
    #[serde(default)]
    pub probe_points: Option<Vec<[f64; 2]>>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn obstacles(&self) -> Result<Vec<Obstacle>> {
        self.obstacles.iter().map(obstacle_from_spec).collect()
    }

    /// The probe wavenumbers: `k` directly, or `2 pi / lambda` for each
    /// entry of `wavelengths`. Exactly one of the two must be present.
    pub fn wavenumbers(&self) -> Result<Vec<f64>> {
        match (&self.k, &self.wavelengths) {
            (Some(k), None) => {
                if !(*k > 0.0) {
                    return Err(Error::Config(format!("k = {k} must be positive")));
                }
                Ok(vec![*k])
            }
            (None, Some(ls)) => {
                if ls.is_empty() {
                    return Err(Error::Config("wavelengths list is empty".into()));
                }
                ls.iter()
                    .map(|l| {
                        if *l > 0.0 {
                            Ok(2.0 * PI / l)
                        } else {
                            Err(Error::Config(format!("wavelength {l} must be positive")))
                        }
                    })
                    .collect()
            }
            (Some(_), Some(_)) => {
                Err(Error::Config("give either k or wavelengths, not both".into()))
            }
            (None, None) => Err(Error::Config("one of k or wavelengths is required".into())),
        }
    }

    pub fn survey(&self) -> Result<SurveyGeometry> {
        let s = &self.survey;
        match s.receiver_offset {
            Some(off) => SurveyGeometry::with_offset(
                s.r_source,
                s.n_source,
                s.r_receiver,
                s.n_receiver,
                off,
            ),
            None => SurveyGeometry::new(s.r_source, s.n_source, s.r_receiver, s.n_receiver),
        }
        .map_err(|e| Error::Config(format!("survey: {e}")))
    }

    pub fn grid(&self) -> Result<ImageGrid> {
        let g = self
            .grid
            .as_ref()
            .ok_or_else(|| Error::Config("this mode requires a grid".into()))?;
        build_grid(g.x_min, g.x_max, g.y_min, g.y_max, g.nx, g.ny)
            .map_err(|e| Error::Config(format!("grid: {e}")))
    }

    pub fn noise(&self) -> NoiseSpec {
        self.noise.clone().unwrap_or(NoiseSpec { mu: Vec::new(), seed: default_seed() })
    }
}

fn obstacle_from_spec(spec: &ObstacleSpec) -> Result<Obstacle> {
    let mut curve = match &spec.shape {
        CurveSpec::Circle { radius } => ParametricCurve::circle(*radius)?,
        CurveSpec::Kite => ParametricCurve::kite(),
        CurveSpec::PLeaf { p, amplitude } => ParametricCurve::p_leaf(*p, *amplitude)?,
        CurveSpec::Peanut => ParametricCurve::peanut(),
        CurveSpec::RoundedSquare => ParametricCurve::rounded_square(),
    };
    if let Some([x, y]) = spec.center {
        curve = curve.at(Point2::new(x, y));
    }
    if let Some(rot) = spec.rotation {
        curve = curve.rotated(rot);
    }
    let bc = match &spec.bc {
        BcSpec::Dirichlet => BoundaryCondition::Dirichlet,
        BcSpec::Impedance(EtaSpec::Constant(v)) => {
            BoundaryCondition::Impedance(ImpedanceProfile::constant(*v)?)
        }
        BcSpec::Impedance(EtaSpec::Piecewise(segs)) => {
            let segments = segs
                .iter()
                .map(|s| ImpedanceSegment {
                    theta_from: s.from,
                    theta_to: s.to,
                    value: s.value,
                })
                .collect();
            BoundaryCondition::Impedance(ImpedanceProfile::piecewise(segments)?)
        }
    };
    Ok(Obstacle { curve, bc })
}

//! Experiment harness: configuration, noise model, metrics, and the five
//! reproduction modes (synth, image, compare, oracle, noise-sweep).

pub mod config;
pub mod metrics;
pub mod noise;

pub use config::{ExperimentConfig, ImageFormat, Mode};
pub use metrics::{
    localization_score, max_normalized_difference, normalized_cross_correlation,
    quantile_threshold,
};
pub use noise::{add_noise, noise_metrics, NoiseReport, NoiseRng};

use crate::dataset::{read_dataset, write_dataset};
use crate::error::{Error, Result};
use crate::forward::{synthesize_dataset, ScatteringDataset, SceneSolver};
use crate::geometry::ImageGrid;
use crate::imaging::{
    self, corrected_data, multifrequency_stack, phaseless_value, rtm_image_fullphase,
    rtm_image_phaseless, rtm_image_with_weights, theoretical_image_with_solver, ImageVariant,
};
use crate::matrix::Matrix;
use crate::point::Point2;
use num_complex::Complex64;
use std::path::{Path, PathBuf};

/// What a run produced: written files plus scalar metrics, mirroring the
/// stdout summary.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub mode: Mode,
    pub files: Vec<PathBuf>,
    pub metrics: Vec<(String, f64)>,
}

impl RunSummary {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

fn write_image_files(
    grid: &ImageGrid,
    dir: &Path,
    stem: &str,
    formats: &[ImageFormat],
) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for fmt in formats {
        let path = match fmt {
            ImageFormat::Csv => dir.join(format!("{stem}.csv")),
            ImageFormat::Pgm => dir.join(format!("{stem}.pgm")),
        };
        match fmt {
            ImageFormat::Csv => imaging::write_image_csv(grid, &path)?,
            ImageFormat::Pgm => imaging::write_image_pgm(grid, &path)?,
        }
        files.push(path);
    }
    Ok(files)
}

fn dataset_file_name(base: &str, idx: usize, many: bool) -> String {
    if !many {
        return base.to_string();
    }
    match base.rsplit_once('.') {
        Some((stem, ext)) => format!("{stem}_f{idx}.{ext}"),
        None => format!("{base}_f{idx}"),
    }
}

fn with_noisy_magnitude(ds: &ScatteringDataset, noisy: Matrix<f64>) -> ScatteringDataset {
    let mut out = ds.clone();
    out.magnitude = noisy;
    out.total = None;
    out
}

/// Run one experiment; writes artifacts under the configured output
/// directory and prints a short summary per step.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let dir = cfg.outputs.dir.clone();
    std::fs::create_dir_all(&dir)?;
    match cfg.mode {
        Mode::Synth => run_synth(cfg, &dir),
        Mode::Image => run_image(cfg, &dir),
        Mode::Compare => run_compare(cfg, &dir),
        Mode::Oracle => run_oracle(cfg, &dir),
        Mode::NoiseSweep => run_noise_sweep(cfg, &dir),
    }
}

fn run_synth(cfg: &ExperimentConfig, dir: &Path) -> Result<RunSummary> {
    let ks = cfg.wavenumbers()?;
    let survey = cfg.survey()?;
    let obstacles = cfg.obstacles()?;
    let mut summary = RunSummary { mode: Mode::Synth, files: Vec::new(), metrics: Vec::new() };
    for (i, &k) in ks.iter().enumerate() {
        let ds = synthesize_dataset(&obstacles, k, &survey, cfg.keep_phase)?;
        let name = dataset_file_name(&cfg.outputs.dataset, i, ks.len() > 1);
        let path = dir.join(name);
        write_dataset(&ds, &path)?;
        let max_mag = ds.magnitude.max_abs();
        println!(
            "synth: k={k:.6} N_r x N_s = {} x {} max|u| = {max_mag:.6e} -> {}",
            survey.n_receiver,
            survey.n_source,
            path.display()
        );
        summary.metrics.push((format!("max_magnitude_f{i}"), max_mag));
        summary.files.push(path);
    }
    Ok(summary)
}

fn run_image(cfg: &ExperimentConfig, dir: &Path) -> Result<RunSummary> {
    let grid = cfg.grid()?;
    let noise_spec = cfg.noise();
    let mu = noise_spec.mu.first().copied().unwrap_or(0.0);
    let mut rng = NoiseRng::new(noise_spec.seed);
    let mut summary = RunSummary { mode: Mode::Image, files: Vec::new(), metrics: Vec::new() };

    let datasets: Vec<ScatteringDataset> = if let Some(path) = &cfg.dataset_in {
        vec![read_dataset(path)?]
    } else {
        let ks = cfg.wavenumbers()?;
        let survey = cfg.survey()?;
        let obstacles = cfg.obstacles()?;
        ks.iter()
            .map(|&k| synthesize_dataset(&obstacles, k, &survey, false))
            .collect::<Result<Vec<_>>>()?
    };

    let mut per_freq = Vec::new();
    for ds in &datasets {
        let working = if mu > 0.0 {
            with_noisy_magnitude(ds, add_noise(&ds.magnitude, mu, &mut rng)?)
        } else {
            ds.clone()
        };
        let data = corrected_data(&working)?;
        per_freq.push(rtm_image_phaseless(&data, &grid));
    }
    let many = per_freq.len() > 1;
    if many {
        for (i, img) in per_freq.iter().enumerate() {
            summary
                .files
                .extend(write_image_files(&img.grid, dir, &format!("image_f{i}"), &cfg.outputs.formats)?);
        }
    }
    let final_img = if many {
        multifrequency_stack(&per_freq)?
    } else {
        per_freq.into_iter().next().expect("one image per frequency")
    };
    summary
        .files
        .extend(write_image_files(&final_img.grid, dir, "image", &cfg.outputs.formats)?);
    println!(
        "image: {} frequencies, mu={mu}, max|I| = {:.6e}",
        datasets.len(),
        final_img.max_abs()
    );
    summary.metrics.push(("max_image".into(), final_img.max_abs()));
    if !cfg.obstacles.is_empty() {
        let curves: Vec<_> = cfg.obstacles()?.into_iter().map(|o| o.curve).collect();
        let score = localization_score(&final_img, &curves, 0.99)?;
        println!("image: localization score (q=0.99) = {score:.4}");
        summary.metrics.push(("localization".into(), score));
    }
    Ok(summary)
}

fn run_compare(cfg: &ExperimentConfig, dir: &Path) -> Result<RunSummary> {
    let ks = cfg.wavenumbers()?;
    if ks.len() != 1 {
        return Err(Error::Config("compare mode is single-frequency".into()));
    }
    let k = ks[0];
    let survey = cfg.survey()?;
    let obstacles = cfg.obstacles()?;
    let grid = cfg.grid()?;
    let ds = synthesize_dataset(&obstacles, k, &survey, true)?;

    let data = corrected_data(&ds)?;
    let phaseless = rtm_image_phaseless(&data, &grid);
    let fullphase = rtm_image_fullphase(&ds, &grid)?;

    // correction-term images of the exact decomposition of the corrected
    // data: conj(u^s) + |u^s|^2/u^i + u^s conj(u^i)/u^i
    let receivers = survey.receivers();
    let sources = survey.sources();
    let total = ds.total.as_ref().expect("synthesized with phase");
    let mut w1 = Matrix::filled(survey.n_receiver, survey.n_source, Complex64::new(0.0, 0.0));
    let mut w2 = w1.clone();
    for (r, xr) in receivers.iter().enumerate() {
        for (s, xs) in sources.iter().enumerate() {
            let ui = ScatteringDataset::incident(k, *xr, *xs);
            let us = total[(r, s)] - ui;
            w1[(r, s)] = us.norm_sqr() / ui;
            w2[(r, s)] = us * ui.conj() / ui;
        }
    }
    let corr1 = rtm_image_with_weights(&survey, k, &w1, &grid, ImageVariant::Phaseless, "corr1");
    let corr2 = rtm_image_with_weights(&survey, k, &w2, &grid, ImageVariant::Phaseless, "corr2");

    let mut diff = phaseless.grid.clone();
    for (d, (a, b)) in diff
        .values
        .iter_mut()
        .zip(phaseless.grid.values.iter().zip(fullphase.grid.values.iter()))
    {
        *d = a - b;
    }

    let mut decomposition_residual = 0.0_f64;
    for i in 0..grid.len() {
        let recomposed =
            fullphase.grid.values[i] + corr1.grid.values[i] + corr2.grid.values[i];
        decomposition_residual =
            decomposition_residual.max((phaseless.grid.values[i] - recomposed).abs());
    }
    let scale = phaseless.max_abs();
    let ncc = normalized_cross_correlation(&phaseless, &fullphase)?;
    let nd = max_normalized_difference(&phaseless, &fullphase)?;

    let mut summary = RunSummary { mode: Mode::Compare, files: Vec::new(), metrics: Vec::new() };
    summary.files.extend(write_image_files(&phaseless.grid, dir, "image_phaseless", &cfg.outputs.formats)?);
    summary.files.extend(write_image_files(&fullphase.grid, dir, "image_fullphase", &cfg.outputs.formats)?);
    summary.files.extend(write_image_files(&diff, dir, "image_diff", &cfg.outputs.formats)?);

    summary.metrics.push(("ncc".into(), ncc));
    summary.metrics.push(("max_normalized_difference".into(), nd));
    summary
        .metrics
        .push(("decomposition_residual_rel".into(), decomposition_residual / scale));
    if !obstacles.is_empty() {
        let curves: Vec<_> = obstacles.iter().map(|o| o.curve.clone()).collect();
        summary
            .metrics
            .push(("localization_phaseless".into(), localization_score(&phaseless, &curves, 0.99)?));
        summary
            .metrics
            .push(("localization_fullphase".into(), localization_score(&fullphase, &curves, 0.99)?));
    }

    let mut report = String::new();
    for (name, value) in &summary.metrics {
        report.push_str(&format!("{name}={value:.17e}\n"));
        println!("compare: {name} = {value:.6e}");
    }
    let metrics_path = dir.join("metrics.txt");
    std::fs::write(&metrics_path, report)?;
    summary.files.push(metrics_path);
    Ok(summary)
}

fn run_oracle(cfg: &ExperimentConfig, dir: &Path) -> Result<RunSummary> {
    let ks = cfg.wavenumbers()?;
    if ks.len() != 1 {
        return Err(Error::Config("oracle mode is single-frequency".into()));
    }
    let k = ks[0];
    let survey = cfg.survey()?;
    let obstacles = cfg.obstacles()?;
    if obstacles.is_empty() {
        return Err(Error::Config("oracle mode needs obstacles".into()));
    }
    let points: Vec<Point2> = match (&cfg.probe_points, &cfg.grid) {
        (Some(pts), _) => pts.iter().map(|p| Point2::new(p[0], p[1])).collect(),
        (None, Some(_)) => {
            let grid = cfg.grid()?;
            let mut out = Vec::with_capacity(grid.len());
            for iy in 0..grid.ny {
                for ix in 0..grid.nx {
                    out.push(grid.node(ix, iy));
                }
            }
            out
        }
        (None, None) => {
            return Err(Error::Config("oracle mode needs probe_points or a grid".into()))
        }
    };

    let ds = synthesize_dataset(&obstacles, k, &survey, false)?;
    let data = corrected_data(&ds)?;
    let rtm: Vec<f64> = points.iter().map(|z| phaseless_value(&data, *z)).collect();
    let solver = SceneSolver::new(&obstacles, k)?;
    let theo: Vec<f64> = points
        .iter()
        .map(|z| theoretical_image_with_solver(&solver, *z))
        .collect::<Result<Vec<_>>>()?;

    let max_rtm = rtm.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let max_theo = theo.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0_f64;
    let mut out = String::from("x,y,rtm,theoretical,rtm_normalized,theoretical_normalized\n");
    for (p, (r, t)) in points.iter().zip(rtm.iter().zip(theo.iter())) {
        let rn = r / max_rtm;
        let tn = t / max_theo;
        worst = worst.max((rn - tn).abs());
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            p.x, p.y, r, t, rn, tn
        ));
    }
    let argmax_rtm = rtm.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let argmax_theo = theo.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;

    let path = dir.join("oracle.csv");
    std::fs::write(&path, out)?;
    println!(
        "oracle: {} probe points, max normalized gap = {worst:.4}, argmax rtm/theory = {argmax_rtm}/{argmax_theo}",
        points.len()
    );
    Ok(RunSummary {
        mode: Mode::Oracle,
        files: vec![path],
        metrics: vec![
            ("max_normalized_gap".into(), worst),
            ("argmax_rtm".into(), argmax_rtm as f64),
            ("argmax_theoretical".into(), argmax_theo as f64),
        ],
    })
}

fn run_noise_sweep(cfg: &ExperimentConfig, dir: &Path) -> Result<RunSummary> {
    let ks = cfg.wavenumbers()?;
    let survey = cfg.survey()?;
    let obstacles = cfg.obstacles()?;
    let grid = cfg.grid()?;
    let noise_spec = cfg.noise();
    if noise_spec.mu.is_empty() {
        return Err(Error::Config("noise-sweep needs a nonempty mu list".into()));
    }
    let curves: Vec<_> = obstacles.iter().map(|o| o.curve.clone()).collect();

    let clean: Vec<ScatteringDataset> = ks
        .iter()
        .map(|&k| synthesize_dataset(&obstacles, k, &survey, false))
        .collect::<Result<Vec<_>>>()?;
    let max_all = clean.iter().map(|d| d.magnitude.max_abs()).fold(0.0_f64, f64::max);
    let n_entries: usize = clean
        .iter()
        .map(|d| d.magnitude.rows() * d.magnitude.cols())
        .sum();

    let mut summary =
        RunSummary { mode: Mode::NoiseSweep, files: Vec::new(), metrics: Vec::new() };
    let mut table = String::from("mu sigma data_norm noise_norm score\n");
    for (mi, &mu) in noise_spec.mu.iter().enumerate() {
        let mut rng = NoiseRng::new(noise_spec.seed.wrapping_add(mi as u64));
        // concatenated norms across frequencies
        let sigma = mu * max_all;
        let mut sq_data = 0.0;
        let mut sq_noise = 0.0;
        let mut per_freq = Vec::new();
        for ds in &clean {
            let mut noisy = ds.magnitude.clone();
            for r in 0..noisy.rows() {
                for s in 0..noisy.cols() {
                    let eps = rng.standard_normal();
                    let v = noisy[(r, s)] + sigma * eps;
                    sq_noise += (v - noisy[(r, s)]) * (v - noisy[(r, s)]);
                    sq_data += noisy[(r, s)] * noisy[(r, s)];
                    noisy[(r, s)] = v;
                }
            }
            let working = with_noisy_magnitude(ds, noisy);
            let data = corrected_data(&working)?;
            per_freq.push(rtm_image_phaseless(&data, &grid));
        }
        let img = if per_freq.len() > 1 {
            multifrequency_stack(&per_freq)?
        } else {
            per_freq.into_iter().next().expect("one image per frequency")
        };
        let data_norm = (sq_data / n_entries as f64).sqrt();
        let noise_norm = (sq_noise / n_entries as f64).sqrt();
        let score = if curves.is_empty() {
            f64::NAN
        } else {
            localization_score(&img, &curves, 0.99)?
        };
        let tag = format!("mu{:02}", (mu * 100.0).round() as i64);
        summary.files.extend(write_image_files(&img.grid, dir, &format!("image_{tag}"), &cfg.outputs.formats)?);
        table.push_str(&format!(
            "{mu:.3} {sigma:.16e} {data_norm:.16e} {noise_norm:.16e} {score:.6}\n"
        ));
        println!(
            "noise-sweep: mu={mu:.2} sigma={sigma:.6e} |u|={data_norm:.6e} |nu|={noise_norm:.6e} score={score:.4}"
        );
        summary.metrics.push((format!("sigma_{tag}"), sigma));
        summary.metrics.push((format!("noise_norm_{tag}"), noise_norm));
        summary.metrics.push((format!("data_norm_{tag}"), data_norm));
        summary.metrics.push((format!("score_{tag}"), score));
    }
    let report_path = dir.join("noise_report.txt");
    std::fs::write(&report_path, table)?;
    summary.files.push(report_path);
    Ok(summary)
}

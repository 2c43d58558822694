//! Image quality metrics: boundary localization of the top quantile and
//! normalized cross-correlation between images.

use crate::error::{Error, Result};
use crate::geometry::ParametricCurve;
use crate::imaging::RtmImage;
use std::f64::consts::PI;

/// Nearest-rank quantile of the image values.
pub fn quantile_threshold(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

/// Fraction of grid nodes at or above the image's q-quantile that lie
/// within half a wavelength (pi/k) of the obstacle boundary. Distances use
/// a dense polygonal sample of each curve. The threshold is inclusive so
/// plateau images (indicators) keep their full hot set; constant images are
/// rejected separately.
pub fn localization_score(
    image: &RtmImage,
    curves: &[ParametricCurve],
    quantile: f64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&quantile) {
        return Err(Error::Domain(format!("quantile {quantile} outside [0,1)")));
    }
    if curves.is_empty() {
        return Err(Error::Domain("localization needs at least one curve".into()));
    }
    let grid = &image.grid;
    let first = grid.values[0];
    if grid.values.iter().all(|v| *v == first) {
        return Err(Error::ConstantImage);
    }
    let tube = PI / image.reference_wavenumber();
    let threshold = quantile_threshold(&grid.values, quantile);
    let samples: Vec<Vec<crate::point::Point2>> =
        curves.iter().map(|c| c.sample(4096)).collect();
    let mut hot = 0usize;
    let mut inside = 0usize;
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let v = grid.values[grid.index(ix, iy)];
            if v < threshold {
                continue;
            }
            hot += 1;
            let z = grid.node(ix, iy);
            let mut dist = f64::INFINITY;
            for pts in &samples {
                for p in pts {
                    let d = p.dist(z);
                    if d < dist {
                        dist = d;
                    }
                }
            }
            if dist <= tube {
                inside += 1;
            }
        }
    }
    if hot == 0 {
        return Err(Error::ConstantImage);
    }
    Ok(inside as f64 / hot as f64)
}

/// Pearson normalized cross-correlation of two images on the same grid.
pub fn normalized_cross_correlation(a: &RtmImage, b: &RtmImage) -> Result<f64> {
    if !a.grid.same_shape(&b.grid) {
        return Err(Error::GridMismatch("images live on different grids".into()));
    }
    let n = a.grid.len() as f64;
    let mean_a = a.grid.values.iter().sum::<f64>() / n;
    let mean_b = b.grid.values.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in a.grid.values.iter().zip(b.grid.values.iter()) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::ConstantImage);
    }
    Ok(cov / (var_a * var_b).sqrt())
}

/// Largest pointwise gap between the two images after each is scaled by its
/// own maximum magnitude.
pub fn max_normalized_difference(a: &RtmImage, b: &RtmImage) -> Result<f64> {
    if !a.grid.same_shape(&b.grid) {
        return Err(Error::GridMismatch("images live on different grids".into()));
    }
    let ma = a.max_abs();
    let mb = b.max_abs();
    if ma == 0.0 || mb == 0.0 {
        return Err(Error::ConstantImage);
    }
    let mut worst = 0.0_f64;
    for (x, y) in a.grid.values.iter().zip(b.grid.values.iter()) {
        worst = worst.max((x / ma - y / mb).abs());
    }
    Ok(worst)
}

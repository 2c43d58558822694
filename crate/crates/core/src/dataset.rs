//! Text dataset format: a `key=value` header terminated by `---`, then one
//! record per receiver/source pair in receiver-major order with 1-based
//! indices and 17-significant-digit values. Round-trips bit-exactly.

use crate::error::{Error, Result};
use crate::forward::{Provenance, ScatteringDataset};
use crate::geometry::SurveyGeometry;
use crate::matrix::Matrix;
use num_complex::Complex64;
use std::io::Write;
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_dataset(dataset: &ScatteringDataset, path: &Path) -> Result<()> {
    let survey = &dataset.survey;
    let has_phase = dataset.total.is_some();
    let mut out = String::new();
    out.push_str(&format!("format_version={FORMAT_VERSION}\n"));
    out.push_str(&format!("k={}\n", fmt17(dataset.k)));
    out.push_str(&format!("R_s={}\n", fmt17(survey.r_source)));
    out.push_str(&format!("R_r={}\n", fmt17(survey.r_receiver)));
    out.push_str(&format!("N_s={}\n", survey.n_source));
    out.push_str(&format!("N_r={}\n", survey.n_receiver));
    out.push_str(&format!("receiver_offset={}\n", fmt17(survey.receiver_offset)));
    out.push_str(&format!("has_phase={}\n", u8::from(has_phase)));
    out.push_str(&format!("bc={}\n", sanitize(&dataset.bc_desc)));
    out.push_str(&format!("obstacle={}\n", sanitize(&dataset.obstacle_desc)));
    out.push_str("---\n");
    for r in 0..survey.n_receiver {
        for s in 0..survey.n_source {
            if let Some(total) = &dataset.total {
                let v = total[(r, s)];
                out.push_str(&format!("{} {} {} {}\n", r + 1, s + 1, fmt17(v.re), fmt17(v.im)));
            } else {
                out.push_str(&format!(
                    "{} {} {}\n",
                    r + 1,
                    s + 1,
                    fmt17(dataset.magnitude[(r, s)])
                ));
            }
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

fn sanitize(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

struct Header {
    k: Option<f64>,
    r_s: Option<f64>,
    r_r: Option<f64>,
    n_s: Option<usize>,
    n_r: Option<usize>,
    receiver_offset: Option<f64>,
    has_phase: Option<bool>,
    bc: String,
    obstacle: String,
}

pub fn read_dataset(path: &Path) -> Result<ScatteringDataset> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let mut header = Header {
        k: None,
        r_s: None,
        r_r: None,
        n_s: None,
        n_r: None,
        receiver_offset: None,
        has_phase: None,
        bc: String::new(),
        obstacle: String::new(),
    };
    let bad = |line: usize, msg: String| Error::Format(format!("line {}: {msg}", line + 1));

    let mut version_seen = false;
    for (idx, line) in lines.by_ref() {
        if line == "---" {
            break;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(idx, format!("expected key=value, got {line:?}")))?;
        let parse_f = |v: &str| {
            v.parse::<f64>().map_err(|_| bad(idx, format!("bad float {v:?} for {key}")))
        };
        let parse_u = |v: &str| {
            v.parse::<usize>().map_err(|_| bad(idx, format!("bad integer {v:?} for {key}")))
        };
        match key {
            "format_version" => {
                let v: u32 = value
                    .parse()
                    .map_err(|_| bad(idx, format!("bad version {value:?}")))?;
                if v != FORMAT_VERSION {
                    return Err(bad(idx, format!("unsupported format_version {v}")));
                }
                version_seen = true;
            }
            "k" => header.k = Some(parse_f(value)?),
            "R_s" => header.r_s = Some(parse_f(value)?),
            "R_r" => header.r_r = Some(parse_f(value)?),
            "N_s" => header.n_s = Some(parse_u(value)?),
            "N_r" => header.n_r = Some(parse_u(value)?),
            "receiver_offset" => header.receiver_offset = Some(parse_f(value)?),
            "has_phase" => {
                header.has_phase = Some(match value {
                    "0" => false,
                    "1" => true,
                    other => return Err(bad(idx, format!("has_phase must be 0/1, got {other:?}"))),
                })
            }
            "bc" => header.bc = value.to_string(),
            "obstacle" => header.obstacle = value.to_string(),
            other => return Err(bad(idx, format!("unknown header key {other:?}"))),
        }
    }
    if !version_seen {
        return Err(Error::Format("missing format_version".into()));
    }
    let missing = |k: &str| Error::Format(format!("missing header key {k}"));
    let k = header.k.ok_or_else(|| missing("k"))?;
    let r_s = header.r_s.ok_or_else(|| missing("R_s"))?;
    let r_r = header.r_r.ok_or_else(|| missing("R_r"))?;
    let n_s = header.n_s.ok_or_else(|| missing("N_s"))?;
    let n_r = header.n_r.ok_or_else(|| missing("N_r"))?;
    let offset = header.receiver_offset.ok_or_else(|| missing("receiver_offset"))?;
    let has_phase = header.has_phase.ok_or_else(|| missing("has_phase"))?;

    let survey = SurveyGeometry::with_offset(r_s, n_s, r_r, n_r, offset)
        .map_err(|e| Error::Format(format!("invalid survey in header: {e}")))?;

    let mut total = if has_phase {
        Some(Matrix::filled(n_r, n_s, Complex64::new(0.0, 0.0)))
    } else {
        None
    };
    let mut magnitude = Matrix::filled(n_r, n_s, 0.0);

    let mut expect_r = 1usize;
    let mut expect_s = 1usize;
    let mut count = 0usize;
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let want = if has_phase { 4 } else { 3 };
        if fields.len() != want {
            return Err(bad(idx, format!("expected {want} fields, got {}", fields.len())));
        }
        let r: usize = fields[0].parse().map_err(|_| bad(idx, "bad receiver index".into()))?;
        let s: usize = fields[1].parse().map_err(|_| bad(idx, "bad source index".into()))?;
        if r != expect_r || s != expect_s {
            return Err(bad(
                idx,
                format!("records out of order: expected ({expect_r},{expect_s}), got ({r},{s})"),
            ));
        }
        if has_phase {
            let re: f64 = fields[2].parse().map_err(|_| bad(idx, "bad real part".into()))?;
            let im: f64 = fields[3].parse().map_err(|_| bad(idx, "bad imaginary part".into()))?;
            let v = Complex64::new(re, im);
            total.as_mut().unwrap()[(r - 1, s - 1)] = v;
            magnitude[(r - 1, s - 1)] = v.norm();
        } else {
            let mag: f64 = fields[2].parse().map_err(|_| bad(idx, "bad magnitude".into()))?;
            magnitude[(r - 1, s - 1)] = mag;
        }
        count += 1;
        expect_s += 1;
        if expect_s > n_s {
            expect_s = 1;
            expect_r += 1;
        }
    }
    if count != n_r * n_s {
        return Err(Error::Format(format!(
            "expected {} records, found {count}",
            n_r * n_s
        )));
    }

    Ok(ScatteringDataset {
        survey,
        k,
        total,
        magnitude,
        provenance: Provenance::Ingested,
        bc_desc: header.bc,
        obstacle_desc: header.obstacle,
    })
}

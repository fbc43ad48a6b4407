//! Embedding of a product chart into `(R^3, ker(cos w du + sin w dv))`.
//!
//! With `beta = bx dx + by dy` (no `dz` term) write
//! `beta = |beta| (cos f dx + sin f dy)`; the map `(x, y, z) -> (x, y, f)`
//! pushes `ker beta` onto the standard structure. `f` is the angle of
//! `(bx, by)`, lifted continuously along each z-line so that it may wind past
//! `+-pi/2` and beyond. Orientation convention: `sign(df/dz) = sign(V)` with
//! `V` from [`crate::pullback::contact_volume`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use serde::Serialize;

use crate::algebra::{ContactData, StructureConstants};
use crate::classify::{classify, CaseTag, ClassificationResult};
use crate::error::{Error, Result};
use crate::frame::canonical_frame;
use crate::pullback::{beta_at, volume_of, SecondKindChart};

const MAX_REFINEMENT_DEPTH: u32 = 40;

/// Uniform cube grid: `n` points per axis on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
}

impl GridSpec {
    pub fn new(n: usize, lo: f64, hi: f64) -> Result<Self> {
        if n == 0 || !(lo.is_finite() && hi.is_finite()) || (n > 1 && hi <= lo) {
            return Err(Error::InvalidInput(format!(
                "bad grid: n = {n}, box = [{lo}, {hi}]"
            )));
        }
        Ok(Self { n, lo, hi })
    }

    pub fn axis(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingSample {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub bx: f64,
    pub by: f64,
    /// Lifted angle of `(bx, by)`, radians.
    pub f: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    #[serde(rename = "V")]
    pub volume: f64,
    /// `|bx sin f - by cos f| / |beta|`.
    pub residual: f64,
}

/// Wraps an angle difference into `(-pi, pi]`.
fn wrap(d: f64) -> f64 {
    let r = d.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn principal_angle(chart: &SecondKindChart, x: f64, y: f64, z: f64) -> Result<f64> {
    let b = beta_at(chart, x, y, z);
    if b.norm() == 0.0 {
        return Err(Error::NotContact { scalar: 0.0 });
    }
    Ok(b.by.atan2(b.bx))
}

/// Angular speed `df/dz = V / |beta|^2`.
fn angular_rate(chart: &SecondKindChart, x: f64, y: f64, z: f64) -> f64 {
    let b = beta_at(chart, x, y, z);
    volume_of(&b) / (b.bx * b.bx + b.by * b.by)
}

/// Continues the lift from `(z_from, f_from)` to `z_to`, bisecting whenever a
/// single step would move the angle by `pi/2` or more, either as observed or
/// as predicted by the angular speed at the endpoints.
fn continue_lift(
    chart: &SecondKindChart,
    x: f64,
    y: f64,
    z_from: f64,
    f_from: f64,
    z_to: f64,
    depth: u32,
) -> Result<f64> {
    let raw = principal_angle(chart, x, y, z_to)?;
    let candidate = f_from + wrap(raw - f_from);
    let dz = (z_to - z_from).abs();
    let rate = angular_rate(chart, x, y, z_from)
        .abs()
        .max(angular_rate(chart, x, y, z_to).abs());
    if (candidate - f_from).abs() < FRAC_PI_2 && rate * dz < FRAC_PI_2 {
        return Ok(candidate);
    }
    if depth >= MAX_REFINEMENT_DEPTH {
        return Err(Error::StepResolution { z: z_to, depth });
    }
    let mid = 0.5 * (z_from + z_to);
    let f_mid = continue_lift(chart, x, y, z_from, f_from, mid, depth + 1)?;
    continue_lift(chart, x, y, mid, f_mid, z_to, depth + 1)
}

/// Lifted angle along a strictly increasing z-grid at fixed `(x, y)`; the
/// first value is the principal angle.
pub fn angle_lift(chart: &SecondKindChart, x: f64, y: f64, z_grid: &[f64]) -> Result<Vec<f64>> {
    if z_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("z grid must be strictly increasing".into()));
    }
    let Some(&z0) = z_grid.first() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(z_grid.len());
    out.push(principal_angle(chart, x, y, z0)?);
    for w in z_grid.windows(2) {
        let prev = *out.last().unwrap();
        out.push(continue_lift(chart, x, y, w[0], prev, w[1], 0)?);
    }
    Ok(out)
}

/// `(x, y, f(x, y, z))`, with `f` lifted from its principal value at `z = 0`.
pub fn phi(chart: &SecondKindChart, x: f64, y: f64, z: f64) -> Result<[f64; 3]> {
    let f0 = principal_angle(chart, x, y, 0.0)?;
    let f = if z == 0.0 {
        f0
    } else {
        continue_lift(chart, x, y, 0.0, f0, z, 0)?
    };
    Ok([x, y, f])
}

/// Samples the embedding over the grid; one lift per `(x, y)` line.
pub fn embed_grid(chart: &SecondKindChart, grid: &GridSpec) -> Result<Vec<EmbeddingSample>> {
    let axis = grid.axis();
    let mut samples = Vec::with_capacity(axis.len().pow(3));
    for &x in &axis {
        for &y in &axis {
            let fs = angle_lift(chart, x, y, &axis)?;
            for (&z, &f) in axis.iter().zip(&fs) {
                let b = beta_at(chart, x, y, z);
                samples.push(EmbeddingSample {
                    x,
                    y,
                    z,
                    bx: b.bx,
                    by: b.by,
                    f,
                    u: x,
                    v: y,
                    w: f,
                    volume: volume_of(&b),
                    residual: alignment_residual(b.bx, b.by, f),
                });
            }
        }
    }
    Ok(samples)
}

pub fn alignment_residual(bx: f64, by: f64, f: f64) -> f64 {
    let (s, c) = f.sin_cos();
    (bx * s - by * c).abs() / bx.hypot(by)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Failure {
    Alignment { index: usize, residual: f64 },
    Volume { index: usize, volume: f64 },
    VolumeSign { index: usize, volume: f64 },
    NonMonotone { index: usize },
    Duplicate { first: usize, second: usize, distance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushforwardReport {
    pub points: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub min_abs_volume: f64,
    /// +1 or -1 when all volumes share a sign, 0 otherwise.
    pub volume_sign: i8,
    pub min_image_separation: f64,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

const MAX_LISTED_FAILURES: usize = 1000;

/// Checks alignment, contact volume, monotonicity of `f` along z-lines and
/// injectivity of the images. Samples on a common z-line must be consecutive
/// and in increasing `z`, as produced by [`embed_grid`].
pub fn verify_samples(samples: &[EmbeddingSample], tol: f64) -> PushforwardReport {
    let mut failures = Vec::new();
    let mut push = |f: Failure| {
        if failures.len() < MAX_LISTED_FAILURES {
            failures.push(f);
        }
    };
    let mut max_residual: f64 = 0.0;
    let mut min_abs_volume = f64::INFINITY;
    let reference_sign = samples.first().map(|s| s.volume.signum()).unwrap_or(0.0);
    let mut mixed = false;
    for (i, s) in samples.iter().enumerate() {
        let r = alignment_residual(s.bx, s.by, s.f);
        max_residual = max_residual.max(r);
        if !(r <= tol) {
            push(Failure::Alignment { index: i, residual: r });
        }
        min_abs_volume = min_abs_volume.min(s.volume.abs());
        if !(s.volume.abs() >= tol) {
            push(Failure::Volume { index: i, volume: s.volume });
        }
        if s.volume.signum() != reference_sign {
            mixed = true;
            push(Failure::VolumeSign { index: i, volume: s.volume });
        }
    }
    for (i, pair) in samples.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        if a.x == b.x && a.y == b.y && b.z > a.z {
            let df = b.f - a.f;
            if !(df * a.volume.signum() > 0.0) {
                push(Failure::NonMonotone { index: i + 1 });
            }
        }
    }
    // injectivity: sweep images sorted by u
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| samples[i].u.total_cmp(&samples[j].u));
    let mut min_sep = f64::INFINITY;
    for (k, &i) in order.iter().enumerate() {
        let p = &samples[i];
        for &j in &order[k + 1..] {
            let q = &samples[j];
            if q.u - p.u > tol.max(min_sep) {
                break;
            }
            let d = ((p.u - q.u).powi(2) + (p.v - q.v).powi(2) + (p.w - q.w).powi(2)).sqrt();
            min_sep = min_sep.min(d);
            if d <= tol {
                push(Failure::Duplicate {
                    first: i.min(j),
                    second: i.max(j),
                    distance: d,
                });
            }
        }
    }
    PushforwardReport {
        points: samples.len(),
        tolerance: tol,
        max_residual,
        min_abs_volume,
        volume_sign: if mixed || samples.is_empty() { 0 } else { reference_sign as i8 },
        min_image_separation: min_sep,
        pass: failures.is_empty(),
        failures,
    }
}

pub fn verify_pushforward(chart: &SecondKindChart, grid: &GridSpec, tol: f64) -> Result<PushforwardReport> {
    Ok(verify_samples(&embed_grid(chart, grid)?, tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub classification: ClassificationResult,
    pub chart: SecondKindChart,
    pub samples: Vec<EmbeddingSample>,
    pub report: PushforwardReport,
}

/// Full pipeline: canonical frame, classification, chart, pulled-back form,
/// lifted angle, and verification of the samples.
pub fn psi_embedding(
    c: &StructureConstants,
    data: &ContactData,
    grid: &GridSpec,
    tol: f64,
) -> Result<Embedding> {
    let cf = canonical_frame(c, data)?;
    let classification = classify(&cf)?;
    if classification.case_tag == CaseTag::Su2 {
        return Err(Error::Unsupported(
            "algebra is isomorphic to su(2); the embedding requires g not isomorphic to su(2)"
                .into(),
        ));
    }
    let chart = SecondKindChart::from_classification(&classification)?;
    let samples = embed_grid(&chart, grid)?;
    let report = verify_samples(&samples, tol);
    Ok(Embedding {
        classification,
        chart,
        samples,
        report,
    })
}

/// CSV with header `x,y,z,bx,by,f,u,v,w,V,residual`.
pub fn write_csv<W: Write>(samples: &[EmbeddingSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(())
}

//! Check suites shared by the command line tool and the acceptance tests.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{is_contact, validate_jacobi, ContactData, Mat3, StructureConstants, Vec3, DEFAULT_TOL};
use crate::classify::{classify, su2_normalize, CaseTag, ChartGenerators, ClassificationResult};
use crate::embedding::{verify_samples, embed_grid, GridSpec, PushforwardReport};
use crate::error::{Error, Result};
use crate::frame::{canonical_frame, off_pattern_residual};
use crate::geodesic::{euler_arnold_rhs, geodesic_criterion, integrate_geodesic, GEODESIC_TOL};
use crate::models::{
    heis_factorize, model_beta_oracle, random_heisenberg, random_sl2, rotation, sl2_factorize,
    sl2_tilde_lift, MatrixModel,
};
use crate::presets::{self, Preset};
use crate::pullback::{beta_at, beta_z, SecondKindChart};

pub const OFF_PATTERN_TOL: f64 = 1e-10;
pub const BETA_Z_TOL: f64 = 1e-12;
pub const MIN_VOLUME: f64 = 1e-6;
pub const DERIVATIVE_TOL: f64 = 1e-6;
pub const FD_STEP: f64 = 1e-5;
pub const FACTOR_TOL: f64 = 1e-12;
pub const CROSS_ORACLE_TOL: f64 = 1e-9;
pub const ENERGY_TOL: f64 = 1e-10;
pub const DRIFT_TOL: f64 = 1e-8;
pub const GEODESIC_T: f64 = 10.0;
pub const GEODESIC_DT: f64 = 1e-3;
/// Largest accepted condition number for random basis changes.
pub const MAX_CONDITION: f64 = 100.0;

pub fn classify_preset(p: &Preset) -> Result<ClassificationResult> {
    classify(&canonical_frame(&p.constants, &p.contact)?)
}

/// Random matrix with entries in `[-1, 1]`, redrawn until its condition
/// number is at most [`MAX_CONDITION`].
pub fn random_basis<R: Rng>(rng: &mut R) -> Mat3 {
    loop {
        let p = Mat3::from_fn(|_, _| rng.random_range(-1.0..=1.0));
        let s = p.singular_values();
        if s.min() > 0.0 && s.max() / s.min() <= MAX_CONDITION {
            return p;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub preset: String,
    pub trials: usize,
    pub reference_tag: CaseTag,
    pub max_off_pattern: f64,
    /// Trials whose tag differs from the reference.
    pub tag_changes: usize,
    /// Trials that took the Heisenberg branch.
    pub heisenberg_branches: usize,
    pub errors: Vec<String>,
    pub pass: bool,
}

/// Canonical frame and classification after `trials` random basis changes.
pub fn basis_change_stability(p: &Preset, trials: usize, seed: u64) -> Result<StabilityReport> {
    stability_of(p.name, &p.constants, &p.contact, trials, seed)
}

pub fn stability_of(
    name: &str,
    constants: &StructureConstants,
    contact: &ContactData,
    trials: usize,
    seed: u64,
) -> Result<StabilityReport> {
    let reference_tag = classify(&canonical_frame(constants, contact)?)?.case_tag;
    let heis = reference_tag == CaseTag::Case3Heis;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_off, mut tag_changes, mut heis_count) = (0.0f64, 0, 0);
    let mut errors = Vec::new();
    for trial in 0..trials {
        let q = random_basis(&mut rng);
        let run = || -> Result<_> {
            let c = constants.change_basis(&q)?;
            let data = contact.change_basis(&q)?;
            let cf = canonical_frame(&c, &data)?;
            let tag = classify(&cf)?.case_tag;
            Ok((cf, tag))
        };
        match run() {
            Ok((cf, tag)) => {
                max_off = max_off.max(off_pattern_residual(&cf.constants(), cf.heisenberg_branch));
                max_off = max_off.max(cf.off_pattern_residual);
                if tag != reference_tag {
                    tag_changes += 1;
                }
                if cf.heisenberg_branch {
                    heis_count += 1;
                }
            }
            Err(e) => errors.push(format!("trial {trial}: {e}")),
        }
    }
    let branch_ok = !heis || heis_count == trials;
    Ok(StabilityReport {
        preset: name.to_string(),
        trials,
        reference_tag,
        max_off_pattern: max_off,
        tag_changes,
        heisenberg_branches: heis_count,
        pass: errors.is_empty() && tag_changes == 0 && max_off <= OFF_PATTERN_TOL && branch_ok,
        errors,
    })
}

/// Largest deviation of the analytic z-derivatives of `beta` from central
/// differences, relative to `max(|derivative|, 1)`.
pub fn derivative_error(chart: &SecondKindChart, grid: &GridSpec) -> f64 {
    let axis = grid.axis();
    let mut worst = 0.0f64;
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                let b = beta_at(chart, x, y, z);
                let p = beta_at(chart, x, y, z + FD_STEP);
                let m = beta_at(chart, x, y, z - FD_STEP);
                let fx = (p.bx - m.bx) / (2.0 * FD_STEP);
                let fy = (p.by - m.by) / (2.0 * FD_STEP);
                worst = worst
                    .max((fx - b.dbx_dz).abs() / b.dbx_dz.abs().max(1.0))
                    .max((fy - b.dby_dz).abs() / b.dby_dz.abs().max(1.0));
            }
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridChecks {
    pub points: usize,
    /// `max |theta0(C)|`-derived `beta(d/dz)` over the grid.
    pub max_beta_z: f64,
    pub min_abs_volume: f64,
    pub volume_sign: i8,
    pub max_derivative_error: f64,
    pub pushforward: PushforwardReport,
    pub pass: bool,
}

pub fn grid_checks(chart: &SecondKindChart, grid: &GridSpec, tol: f64) -> Result<GridChecks> {
    let axis = grid.axis();
    let max_beta_z = axis.iter().map(|&z| beta_z(chart, z).abs()).fold(0.0, f64::max);
    let samples = embed_grid(chart, grid)?;
    let pushforward = verify_samples(&samples, tol);
    let max_derivative_error = derivative_error(chart, grid);
    let min_abs_volume = pushforward.min_abs_volume;
    let volume_sign = pushforward.volume_sign;
    Ok(GridChecks {
        points: samples.len(),
        max_beta_z,
        min_abs_volume,
        volume_sign,
        max_derivative_error,
        pass: pushforward.pass
            && max_beta_z <= BETA_Z_TOL
            && min_abs_volume >= MIN_VOLUME
            && volume_sign != 0
            && max_derivative_error <= DERIVATIVE_TOL,
        pushforward,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionCheck {
    pub index: usize,
    pub geodesic: bool,
    pub residual: [f64; 3],
    pub rhs_norm: f64,
    /// Criterion and Euler-Arnold test agree.
    pub equivalent: bool,
    /// Integrated drift, for geodesic directions.
    pub drift: Option<f64>,
    pub energy_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicSuite {
    pub directions: Vec<DirectionCheck>,
    pub pass: bool,
}

/// Criterion, Euler-Arnold residual and integration for the three frame
/// directions of orthonormal constants `c`.
pub fn geodesic_suite(c: &StructureConstants) -> Result<GeodesicSuite> {
    let mut directions = Vec::new();
    for i in 0..3 {
        let check = geodesic_criterion(c, i);
        let e = StructureConstants::basis(i);
        let rhs_norm = euler_arnold_rhs(c, &e).amax();
        let tr = integrate_geodesic(c, &e, GEODESIC_T, GEODESIC_DT)?;
        directions.push(DirectionCheck {
            index: i,
            geodesic: check.geodesic,
            residual: check.residual,
            rhs_norm,
            equivalent: check.geodesic == (rhs_norm <= GEODESIC_TOL),
            drift: check.geodesic.then_some(tr.drift),
            energy_error: tr.energy_error,
        });
    }
    let pass = directions.iter().all(|d| {
        d.equivalent && d.drift.is_none_or(|x| x <= DRIFT_TOL) && d.energy_error <= ENERGY_TOL
    });
    Ok(GeodesicSuite { directions, pass })
}

/// Chart of a model's preset in its classified frame, together with the
/// chart generators and contact form expressed in the model basis.
pub fn model_chart(model: MatrixModel) -> Result<(SecondKindChart, ChartGenerators, Vec3)> {
    let name = match model {
        MatrixModel::Heisenberg => "heisenberg",
        MatrixModel::Sl2 => "sl2",
    };
    let res = classify_preset(&presets::get(name)?)?;
    let chart = SecondKindChart::from_classification(&res)?;
    let p = res.frame.p;
    let g = chart.generators;
    let gens = ChartGenerators {
        a: p * g.a,
        b: p * g.b,
        c: p * g.c,
    };
    let theta0 = res.coframe.row(0).transpose();
    Ok((chart, gens, theta0))
}

/// `max |beta - beta_oracle|` over the grid, pulled-back form versus
/// conjugation in the matrix model.
pub fn cross_oracle(model: MatrixModel, grid: &GridSpec) -> Result<f64> {
    let (chart, gens, theta0) = model_chart(model)?;
    let axis = grid.axis();
    let mut worst = 0.0f64;
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                let b = beta_at(&chart, x, y, z);
                let (ox, oy) = model_beta_oracle(model, &gens, &theta0, x, y, z);
                worst = worst.max((b.bx - ox).abs()).max((b.by - oy).abs());
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub model: MatrixModel,
    pub samples: usize,
    pub max_residual: f64,
    /// Lifted rotation angle after one full loop (`SL(2)` only).
    pub winding: Option<f64>,
    pub pass: bool,
}

pub fn factorization_check(model: MatrixModel, samples: usize, seed: u64) -> Result<FactorizationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    for _ in 0..samples {
        let r = match model {
            MatrixModel::Heisenberg => heis_factorize(&random_heisenberg(&mut rng))?.residual,
            MatrixModel::Sl2 => sl2_factorize(&random_sl2(&mut rng))?.residual,
        };
        max_residual = max_residual.max(r);
    }
    let winding = match model {
        MatrixModel::Heisenberg => None,
        MatrixModel::Sl2 => {
            let path: Vec<_> = (0..=256).map(|i| rotation(2.0 * PI * i as f64 / 256.0)).collect();
            sl2_tilde_lift(&path)?.last().copied()
        }
    };
    let pass = max_residual <= FACTOR_TOL && winding.is_none_or(|w| (w - 2.0 * PI).abs() <= 1e-12);
    Ok(FactorizationReport {
        model,
        samples,
        max_residual,
        winding,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Su2Report {
    pub planes: usize,
    pub max_plane_residual: f64,
    pub max_bracket_residual: f64,
    pub pass: bool,
}

/// `su2_normalize` on random planes: the image plane must be
/// `span{e1, e2}` and brackets must be preserved.
pub fn su2_normalization_check(planes: usize, seed: u64) -> Result<Su2Report> {
    let su2 = presets::get("su2")?.constants;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_vec = |rng: &mut ChaCha8Rng| Vec3::from_fn(|_, _| rng.random_range(-1.0..=1.0));
    let (mut plane, mut bracket) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < planes {
        let u = [rand_vec(&mut rng), rand_vec(&mut rng)];
        if u[0].cross(&u[1]).norm() < 1e-3 * u[0].norm() * u[1].norm() {
            continue;
        }
        done += 1;
        let q = su2_normalize(u)?;
        for v in &u {
            let w = q * v;
            plane = plane.max(w[0].abs() / w.norm());
        }
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (StructureConstants::basis(i), StructureConstants::basis(j));
                let lhs = q * su2.bracket(&x, &y);
                let rhs = su2.bracket(&(q * x), &(q * y));
                bracket = bracket.max((lhs - rhs).amax());
            }
        }
    }
    Ok(Su2Report {
        planes,
        max_plane_residual: plane,
        max_bracket_residual: bracket,
        pass: plane <= 1e-12 && bracket <= 1e-12,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresetReport {
    pub preset: String,
    pub jacobi_residual: f64,
    pub contact_scalar: f64,
    pub case_tag: CaseTag,
    /// Absent for `su(2)`.
    pub grid: Option<GridChecks>,
    pub geodesics: GeodesicSuite,
    pub pass: bool,
}

/// Every per-algebra check for one set of constants and contact data.
pub fn algebra_report(
    name: &str,
    c: &StructureConstants,
    data: &ContactData,
    grid: &GridSpec,
    tol: f64,
) -> Result<PresetReport> {
    let jacobi = validate_jacobi(c, DEFAULT_TOL)?;
    let contact = is_contact(c, data)?;
    if !contact.contact {
        return Err(Error::NotContact {
            scalar: contact.scalar,
        });
    }
    let res = classify(&canonical_frame(c, data)?)?;
    let grid_report = match res.case_tag {
        CaseTag::Su2 => None,
        _ => Some(grid_checks(&SecondKindChart::from_classification(&res)?, grid, tol)?),
    };
    let geodesics = geodesic_suite(&res.constants())?;
    let pass = jacobi.pass && grid_report.as_ref().is_none_or(|g| g.pass) && geodesics.pass;
    Ok(PresetReport {
        preset: name.to_string(),
        jacobi_residual: jacobi.max_residual,
        contact_scalar: contact.scalar,
        case_tag: res.case_tag,
        grid: grid_report,
        geodesics,
        pass,
    })
}

pub fn preset_report(name: &str, grid: &GridSpec, tol: f64) -> Result<PresetReport> {
    let p = presets::get(name)?;
    algebra_report(p.name, &p.constants, &p.contact, grid, tol)
}

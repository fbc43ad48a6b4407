//! Left-invariant metric `theta0^2 + theta1^2 + theta2^2` in the canonical
//! frame: geodesic test for frame fields, Euler-Arnold flow, and sampled
//! witnesses for the normal exponential map.

use serde::Serialize;

use crate::algebra::{Mat3, StructureConstants, Vec3};
use crate::classify::{ChartGenerators, ClassificationResult};
use crate::embedding::GridSpec;
use crate::error::{Error, Result};
use crate::models::MatrixModel;

pub const GEODESIC_TOL: f64 = 1e-12;

/// The metric making the canonical frame orthonormal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeftInvariantMetric {
    /// Coframe `(theta0, theta1, theta2)` as rows, in the input basis.
    #[serde(serialize_with = "crate::io::ser_mat3")]
    pub frame: Mat3,
    #[serde(serialize_with = "crate::io::ser_mat3")]
    pub gram: Mat3,
}

impl LeftInvariantMetric {
    pub fn from_classification(result: &ClassificationResult) -> Self {
        Self {
            frame: result.coframe,
            gram: Mat3::identity(),
        }
    }

    /// Inner product of two vectors given in canonical-frame coordinates.
    pub fn inner(&self, u: &Vec3, v: &Vec3) -> f64 {
        u.dot(&(self.gram * v))
    }

    /// Inner product of two vectors given in the input basis.
    pub fn inner_input(&self, u: &Vec3, v: &Vec3) -> f64 {
        self.inner(&(self.frame * u), &(self.frame * v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicCheck {
    pub index: usize,
    pub geodesic: bool,
    /// Component of `[v_i, v_j]` along `v_i`, for `j = 0, 1, 2`.
    pub residual: [f64; 3],
}

/// `v_i` is geodesic iff `<[v_i, v_j], v_i> = 0` for every `j`.
pub fn geodesic_criterion(c: &StructureConstants, i: usize) -> GeodesicCheck {
    let residual = [0, 1, 2].map(|j| c.c[i][i][j]);
    GeodesicCheck {
        index: i,
        geodesic: residual.iter().all(|r| r.abs() <= GEODESIC_TOL),
        residual,
    }
}

/// `rhs_k = <u, [u, v_k]>` in the orthonormal frame.
pub fn euler_arnold_rhs(c: &StructureConstants, u: &Vec3) -> Vec3 {
    Vec3::from_fn(|k, _| u.dot(&c.bracket(u, &StructureConstants::basis(k))))
}

/// Residual of a general left-invariant field `u`: `|rhs(u)|`.
pub fn geodesic_residual(c: &StructureConstants, u: &Vec3) -> f64 {
    euler_arnold_rhs(c, u).amax()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub dt: f64,
    pub states: Vec<[f64; 3]>,
    /// `sup_t |u(t) - u(0)|`.
    pub drift: f64,
    /// `sup_t | |u(t)| - |u(0)| |`.
    pub energy_error: f64,
}

/// Fixed-step RK4 for `u' = euler_arnold_rhs(u)` on `[0, t]`.
pub fn integrate_geodesic(c: &StructureConstants, u0: &Vec3, t: f64, dt: f64) -> Result<Trajectory> {
    let max = 1e-3 * t;
    if !(dt > 0.0 && dt <= max * (1.0 + 1e-12)) {
        return Err(Error::StepSize { dt, max });
    }
    let steps = (t / dt).round() as usize;
    let f = |u: &Vec3| euler_arnold_rhs(c, u);
    let mut u = *u0;
    let mut states = Vec::with_capacity(steps + 1);
    states.push([u[0], u[1], u[2]]);
    let (mut drift, mut energy_error) = (0.0f64, 0.0f64);
    let n0 = u0.norm();
    for _ in 0..steps {
        let k1 = f(&u);
        let k2 = f(&(u + k1 * (dt / 2.0)));
        let k3 = f(&(u + k2 * (dt / 2.0)));
        let k4 = f(&(u + k3 * dt));
        u += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        drift = drift.max((u - u0).norm());
        energy_error = energy_error.max((u.norm() - n0).abs());
        states.push([u[0], u[1], u[2]]);
    }
    Ok(Trajectory {
        dt,
        states,
        drift,
        energy_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalExpReport {
    pub model: MatrixModel,
    pub points: usize,
    pub min_abs_det: f64,
    pub max_abs_det: f64,
    pub min_separation: f64,
    pub singular: usize,
    pub duplicates: usize,
    pub pass: bool,
}

pub const SINGULAR_DET: f64 = 1e-10;
pub const DUPLICATE_SEPARATION: f64 = 1e-9;

/// Samples `(s, t, z) -> exp(s h1) exp(t h2) exp(z X)` with `gens = (h1, h2, X)`
/// given in the model's basis coordinates. The Jacobian is left-trivialized
/// (`g^-1 dg` projected onto the algebra) and taken by central differences.
pub fn normal_exponential(model: MatrixModel, gens: &ChartGenerators, grid: &GridSpec) -> NormalExpReport {
    let axis = grid.axis();
    let map = |p: [f64; 3]| model.chart_point(gens, p[0], p[1], p[2]);
    let h = 1e-6;
    let mut images = Vec::with_capacity(axis.len().pow(3));
    let (mut min_det, mut max_det, mut singular) = (f64::INFINITY, 0.0f64, 0);
    for &s in &axis {
        for &t in &axis {
            for &z in &axis {
                let p = [s, t, z];
                let g = map(p);
                let g_inv = g.clone().try_inverse().expect("group elements are invertible");
                let jac = Mat3::from_fn(|_, _| 0.0);
                let mut jac = jac;
                for k in 0..3 {
                    let (mut plus, mut minus) = (p, p);
                    plus[k] += h;
                    minus[k] -= h;
                    let d = (map(plus) - map(minus)) / (2.0 * h);
                    jac.set_column(k, &model.coords(&(&g_inv * d)));
                }
                let det = jac.determinant().abs();
                min_det = min_det.min(det);
                max_det = max_det.max(det);
                if det < SINGULAR_DET {
                    singular += 1;
                }
                images.push(g);
            }
        }
    }
    let mut min_sep = f64::INFINITY;
    let mut duplicates = 0;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let d = (&images[i] - &images[j]).norm();
            min_sep = min_sep.min(d);
            if d < DUPLICATE_SEPARATION {
                duplicates += 1;
            }
        }
    }
    NormalExpReport {
        model,
        points: images.len(),
        min_abs_det: min_det,
        max_abs_det: max_det,
        min_separation: min_sep,
        singular,
        duplicates,
        pass: singular == 0 && duplicates == 0,
    }
}

/// Default generators for [`normal_exponential`]: for the Heisenberg model
/// `h = span{v0, v2}` with the geodesic normal `v1`; for `SL(2)` the
/// second-kind chart `exp(x v0) exp(y (v2 - v0)) exp(z v1)`.
pub fn default_normal_generators(model: MatrixModel) -> ChartGenerators {
    match model {
        MatrixModel::Heisenberg => ChartGenerators {
            a: Vec3::x(),
            b: Vec3::z(),
            c: Vec3::y(),
        },
        MatrixModel::Sl2 => ChartGenerators {
            a: Vec3::x(),
            b: Vec3::new(-1.0, 0.0, 1.0),
            c: Vec3::y(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn criterion_examples() {
        let heis = presets::get("heisenberg").unwrap().constants;
        assert!(geodesic_criterion(&heis, 1).geodesic);
        let case1 = presets::get("case1").unwrap().constants;
        let r = geodesic_criterion(&case1, 1);
        assert!(!r.geodesic);
        assert_eq!(r.residual, [0.0, 0.0, 1.0]);
        assert!(geodesic_criterion(&case1, 2).geodesic);
    }

    #[test]
    fn rhs_matches_residual() {
        let case1 = presets::get("case1").unwrap().constants;
        assert_eq!(euler_arnold_rhs(&case1, &Vec3::zeros()), Vec3::zeros());
        let rhs = euler_arnold_rhs(&case1, &Vec3::y());
        assert_eq!(rhs, Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(geodesic_residual(&case1, &Vec3::z()), 0.0);
    }

    #[test]
    fn integration() {
        let abelian = StructureConstants::zero();
        let u0 = Vec3::new(0.3, -1.0, 2.0);
        let tr = integrate_geodesic(&abelian, &u0, 10.0, 1e-2).unwrap();
        assert_eq!(tr.drift, 0.0);
        let heis = presets::get("heisenberg").unwrap().constants;
        let tr = integrate_geodesic(&heis, &Vec3::y(), 10.0, 1e-2).unwrap();
        assert!(tr.drift <= 1e-8);
        let case1 = presets::get("case1").unwrap().constants;
        let tr = integrate_geodesic(&case1, &Vec3::y(), 10.0, 1e-2).unwrap();
        assert!(tr.drift > 1e-3);
        assert!(tr.energy_error <= 1e-10);
        assert!(matches!(
            integrate_geodesic(&case1, &Vec3::y(), 10.0, 0.1),
            Err(Error::StepSize { .. })
        ));
    }

    #[test]
    fn normal_exponential_heisenberg_is_volume_preserving() {
        let grid = GridSpec::new(5, -1.0, 1.0).unwrap();
        let r = normal_exponential(
            MatrixModel::Heisenberg,
            &default_normal_generators(MatrixModel::Heisenberg),
            &grid,
        );
        assert!(r.pass);
        assert!((r.min_abs_det - 1.0).abs() < 1e-6 && (r.max_abs_det - 1.0).abs() < 1e-6);
    }

    #[test]
    fn metric_orthonormal_in_frame() {
        let p = presets::get("case1").unwrap();
        let cf = crate::frame::canonical_frame(&p.constants, &p.contact).unwrap();
        let res = crate::classify::classify(&cf).unwrap();
        let m = LeftInvariantMetric::from_classification(&res);
        for i in 0..3 {
            for j in 0..3 {
                let ip = m.inner_input(&res.frame.p.column(i).into(), &res.frame.p.column(j).into());
                assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}

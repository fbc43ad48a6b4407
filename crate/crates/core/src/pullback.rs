//! The contact form pulled back to the product chart
//! `(x, y, z) -> exp(xA) exp(yB) exp(zC)`.
//!
//! With `g = exp(xA) exp(yB) exp(zC)` the left Maurer–Cartan form gives
//!
//! ```text
//! g^-1 dg/dx = Ad(exp(-zC)) Ad(exp(-yB)) A = exp(-z ad C) exp(-y ad B) A
//! g^-1 dg/dy = exp(-z ad C) B
//! g^-1 dg/dz = C
//! ```
//!
//! so `beta = theta_0(g^-1 dg)` needs only adjoint matrices and their
//! exponentials. Since `C` lies in the contact plane, `beta(d/dz) = 0`.

use serde::Serialize;

use crate::algebra::{Mat3, StructureConstants, Vec3};
use crate::classify::{ChartGenerators, ClassificationResult};
use crate::error::{Error, Result};
use crate::expm::expm3;

#[derive(Debug, Clone, PartialEq)]
pub struct SecondKindChart {
    pub generators: ChartGenerators,
    /// Contact form; its kernel is the contact plane.
    pub theta0: Vec3,
    pub constants: StructureConstants,
    ad_b: Mat3,
    ad_c: Mat3,
}

impl SecondKindChart {
    pub fn new(constants: StructureConstants, generators: ChartGenerators, theta0: Vec3) -> Result<Self> {
        let ChartGenerators { a, b, c } = generators;
        let scale = theta0.norm() * c.norm();
        if scale == 0.0 {
            return Err(Error::InvalidChart("zero contact form or generator".into()));
        }
        let tangency = theta0.dot(&c).abs();
        if tangency > 1e-12 * scale {
            return Err(Error::InvalidChart(format!(
                "C is not tangent to the contact plane (theta0(C) = {tangency:e})"
            )));
        }
        let det = Mat3::from_columns(&[a, b, c]).determinant();
        if det.abs() <= 1e-12 * a.norm() * b.norm() * c.norm() {
            return Err(Error::InvalidChart("generators are linearly dependent".into()));
        }
        let ad_b = constants.ad_matrix(&b);
        let ad_c = constants.ad_matrix(&c);
        Ok(Self {
            generators,
            theta0,
            constants,
            ad_b,
            ad_c,
        })
    }

    /// Chart of a classified algebra, in the result's frame with
    /// `theta_0 = (1, 0, 0)`.
    pub fn from_classification(result: &ClassificationResult) -> Result<Self> {
        Self::new(result.constants(), result.chart_generators()?, Vec3::x())
    }
}

/// `beta(d/dx)`, `beta(d/dy)` and their z-derivatives at a chart point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaValue {
    pub bx: f64,
    pub by: f64,
    pub dbx_dz: f64,
    pub dby_dz: f64,
}

impl BetaValue {
    pub fn norm(&self) -> f64 {
        self.bx.hypot(self.by)
    }
}

/// Pulled-back form at `(x, y, z)`. The value does not depend on `x`
/// (left invariance); the argument is kept for symmetry with the chart.
pub fn beta_at(chart: &SecondKindChart, _x: f64, y: f64, z: f64) -> BetaValue {
    let ChartGenerators { a, b, .. } = chart.generators;
    let ec = expm3(&chart.ad_c, -z);
    let eb = expm3(&chart.ad_b, -y);
    let ux = ec * (eb * a);
    let uy = ec * b;
    BetaValue {
        bx: chart.theta0.dot(&ux),
        by: chart.theta0.dot(&uy),
        dbx_dz: -chart.theta0.dot(&(chart.ad_c * ux)),
        dby_dz: -chart.theta0.dot(&(chart.ad_c * uy)),
    }
}

/// `beta(d/dz)` evaluated as `theta_0(exp(-z ad C) C)`.
pub fn beta_z(chart: &SecondKindChart, z: f64) -> f64 {
    chart
        .theta0
        .dot(&(expm3(&chart.ad_c, -z) * chart.generators.c))
}

/// `V = bx dby/dz - by dbx/dz = (bx^2 + by^2) df/dz` for `f` the angle of
/// `(bx, by)`. Nonzero exactly where `beta` is contact.
pub fn contact_volume(chart: &SecondKindChart, x: f64, y: f64, z: f64) -> f64 {
    volume_of(&beta_at(chart, x, y, z))
}

pub fn volume_of(b: &BetaValue) -> f64 {
    b.bx * b.dby_dz - b.by * b.dbx_dz
}

/// Contact-degeneracy diagnostic: errors when `|V| < tol`.
pub fn checked_contact_volume(chart: &SecondKindChart, x: f64, y: f64, z: f64, tol: f64) -> Result<f64> {
    let v = contact_volume(chart, x, y, z);
    if v.abs() < tol {
        return Err(Error::NotContact { scalar: v });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis_chart() -> SecondKindChart {
        SecondKindChart::new(
            StructureConstants::canonical(0.0, 0.0, 0.0, 0.0),
            ChartGenerators {
                a: Vec3::x(),
                b: Vec3::y(),
                c: Vec3::z(),
            },
            Vec3::x(),
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_closed_form() {
        let chart = heis_chart();
        for &z in &[-2.0, -0.5, 0.0, 1.25, 3.0] {
            let b = beta_at(&chart, 0.7, -1.3, z);
            assert_eq!(b.bx, 1.0);
            assert!((b.by + z).abs() <= 1e-15);
            assert_eq!(b.dbx_dz, 0.0);
            assert_eq!(b.dby_dz, -1.0);
            assert_eq!(volume_of(&b), -1.0);
        }
    }

    #[test]
    fn origin_slice_reads_generators() {
        let c = StructureConstants::canonical(0.0, 1.0, 1.0, 0.0);
        let g = ChartGenerators {
            a: Vec3::new(1.0, 0.5, 0.0),
            b: Vec3::new(-2.0, 1.0, 0.0),
            c: Vec3::z(),
        };
        let chart = SecondKindChart::new(c, g, Vec3::x()).unwrap();
        let b = beta_at(&chart, 3.0, 0.0, 0.0);
        assert_eq!((b.bx, b.by), (1.0, -2.0));
    }

    #[test]
    fn rotation_keeps_beta_on_a_circle() {
        // su(2): ad e0 rotates span{e1,e2}; pull back along C = e0 with
        // theta = e1^*, which is a valid chart for this computation only
        // because theta(C) = 0.
        let c = StructureConstants::canonical(-1.0, 1.0, 0.0, 0.0);
        let g = ChartGenerators {
            a: Vec3::y(),
            b: Vec3::z(),
            c: Vec3::x(),
        };
        let chart = SecondKindChart::new(c, g, Vec3::y()).unwrap();
        for i in 0..20 {
            let z = -3.0 + 0.3 * i as f64;
            let b = beta_at(&chart, 0.0, 0.0, z);
            assert!((b.norm() - 1.0).abs() < 1e-13);
            assert!((volume_of(&b).abs() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn doubling_a_and_b_scales_volume_by_four() {
        let c = StructureConstants::canonical(0.0, 1.0, 1.0, 0.0);
        let g = ChartGenerators {
            a: Vec3::x(),
            b: Vec3::y(),
            c: Vec3::z(),
        };
        let g2 = ChartGenerators {
            a: 2.0 * g.a,
            b: 2.0 * g.b,
            c: g.c,
        };
        let ch1 = SecondKindChart::new(c.clone(), g, Vec3::x()).unwrap();
        let ch2 = SecondKindChart::new(c, g2, Vec3::x()).unwrap();
        for &(y, z) in &[(0.0, 0.0), (0.4, -1.1), (-1.5, 1.7)] {
            // exp(-y ad 2B) = exp(-(2y) ad B)
            let v1 = contact_volume(&ch1, 0.0, 2.0 * y, z);
            let v2 = contact_volume(&ch2, 0.0, y, z);
            assert!((v2 - 4.0 * v1).abs() < 1e-12 * v2.abs().max(1.0));
            assert!(v1.signum() == v2.signum());
        }
    }

    #[test]
    fn chart_rejects_transverse_c() {
        let e = SecondKindChart::new(
            StructureConstants::zero(),
            ChartGenerators {
                a: Vec3::y(),
                b: Vec3::z(),
                c: Vec3::x(),
            },
            Vec3::x(),
        );
        assert!(matches!(e, Err(Error::InvalidChart(_))));
    }

    #[test]
    fn degenerate_volume_is_reported() {
        let chart = SecondKindChart::new(
            StructureConstants::zero(),
            ChartGenerators {
                a: Vec3::x(),
                b: Vec3::y(),
                c: Vec3::z(),
            },
            Vec3::x(),
        )
        .unwrap();
        assert!(matches!(
            checked_contact_volume(&chart, 0.0, 0.0, 0.0, 1e-6),
            Err(Error::NotContact { .. })
        ));
    }
}

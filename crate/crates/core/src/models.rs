//! Matrix models of the Heisenberg group, `SL(2)` and `SU(2)`.
//!
//! These serve two purposes: closed-form factorizations
//! `g = h1 h2 h3` into one-parameter subgroups, and an oracle for the
//! pulled-back contact form computed by conjugation inside the matrix group,
//! independent of the adjoint-exponential route in [`crate::pullback`].

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, Matrix2};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{Mat3, StructureConstants, Vec3};
use crate::classify::ChartGenerators;
use crate::error::{Error, Result};

pub type Mat2 = Matrix2<f64>;

/// Parameters with `g = psi1(t1) psi2(t2) psi3(t3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Factorization {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    /// `max |psi1(t1) psi2(t2) psi3(t3) - g|`.
    pub residual: f64,
}

// ---------------------------------------------------------------------------
// Heisenberg

/// `exp(t1 v0) exp(t2 v2) exp(t3 v1)` with `v0 = -E13`, `v1 = E12`,
/// `v2 = E23`, i.e. `[[1, t3, -t1], [0, 1, t2], [0, 0, 1]]`.
pub fn heis_compose(t1: f64, t2: f64, t3: f64) -> Mat3 {
    let z = Mat3::new(1.0, 0.0, -t1, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
    let y = Mat3::new(1.0, 0.0, 0.0, 0.0, 1.0, t2, 0.0, 0.0, 1.0);
    let x = Mat3::new(1.0, t3, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
    z * y * x
}

/// Closed-form inverse of [`heis_compose`].
pub fn heis_factorize(g: &Mat3) -> Result<Factorization> {
    let defect = [(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0), (1, 0, 0.0), (2, 0, 0.0), (2, 1, 0.0)]
        .iter()
        .map(|&(i, j, v)| (g[(i, j)] - v).abs())
        .fold(0.0, f64::max);
    if !(defect <= 1e-12) || g.iter().any(|x| !x.is_finite()) {
        return Err(Error::MalformedMatrix(format!(
            "not unit upper-triangular (defect {defect:e})"
        )));
    }
    let (t1, t2, t3) = (-g[(0, 2)], g[(1, 2)], g[(0, 1)]);
    let residual = (heis_compose(t1, t2, t3) - g).amax();
    Ok(Factorization { t1, t2, t3, residual })
}

pub fn random_heisenberg<R: Rng>(rng: &mut R) -> Mat3 {
    let mut g = Mat3::identity();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        g[(i, j)] = rng.random_range(-5.0..=5.0);
    }
    g
}

// ---------------------------------------------------------------------------
// SL(2)

pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

pub fn unipotent(v: f64) -> Matrix2<f64> {
    Matrix2::new(1.0, v, 0.0, 1.0)
}

pub fn diagonal(u: f64) -> Matrix2<f64> {
    Matrix2::new(u.exp(), 0.0, 0.0, (-u).exp())
}

/// `O h2 h3` with `O = rotation(theta)`, `h2 = unipotent(v)`, `h3 = diagonal(u)`.
pub fn sl2_compose(theta: f64, v: f64, u: f64) -> Matrix2<f64> {
    rotation(theta) * unipotent(v) * diagonal(u)
}

/// Unique factorization `A = O h2 h3`: `O^-1` turns the first column of `A`
/// onto the positive x-axis, leaving `[[e^u, b], [0, e^-u]]` with
/// `v = b e^u`. Returns `(t1, t2, t3) = (theta, v, u)`.
pub fn sl2_factorize(a: &Matrix2<f64>) -> Result<Factorization> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::MalformedMatrix("non-finite entry".into()));
    }
    let det = a.determinant();
    if !((det - 1.0).abs() <= 1e-9 * a.amax().powi(2).max(1.0)) {
        return Err(Error::MalformedMatrix(format!("determinant {det} is not 1")));
    }
    let theta = a[(1, 0)].atan2(a[(0, 0)]);
    let upper = rotation(-theta) * a;
    let r = upper[(0, 0)];
    assert!(r > 0.0, "first column of a unimodular matrix cannot vanish");
    let u = r.ln();
    let v = upper[(0, 1)] * r;
    let residual = (sl2_compose(theta, v, u) - a).amax();
    Ok(Factorization {
        t1: theta,
        t2: v,
        t3: u,
        residual,
    })
}

/// Product of four random rotation, unipotent and diagonal factors with
/// parameters in `[-2, 2]`.
pub fn random_sl2<R: Rng>(rng: &mut R) -> Matrix2<f64> {
    let mut m = Matrix2::identity();
    for _ in 0..4 {
        let t = rng.random_range(-2.0..=2.0);
        m *= match rng.random_range(0..3) {
            0 => rotation(t),
            1 => unipotent(t),
            _ => diagonal(t),
        };
    }
    m
}

/// Continuous lift of the rotation angle of each element's first column
/// along a path, i.e. the `SO(2)` factor in the universal cover.
pub fn sl2_tilde_lift(path: &[Matrix2<f64>]) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = Vec::with_capacity(path.len());
    for (i, a) in path.iter().enumerate() {
        let raw = a[(1, 0)].atan2(a[(0, 0)]);
        match out.last() {
            None => out.push(raw),
            Some(&prev) => {
                let size = (a - path[i - 1]).amax();
                if !(size < 0.5) {
                    return Err(Error::PathStep { index: i, size });
                }
                let d = (raw - prev).rem_euclid(2.0 * PI);
                let d = if d > PI { d - 2.0 * PI } else { d };
                out.push(prev + d);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Matrix models of Lie algebras

/// Linear matrix models with a fixed algebra basis `(v0, v1, v2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatrixModel {
    /// `v0 = -E13`, `v1 = E12`, `v2 = E23`: `[v1, v2] = -v0`.
    Heisenberg,
    /// `v1 = diag(1,-1)/2`, `v2 = [[0,1],[1,0]]/2`, `v0 = [[0,-1],[1,0]]/2`.
    Sl2,
}

impl MatrixModel {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "heisenberg" => Ok(Self::Heisenberg),
            "sl2" => Ok(Self::Sl2),
            other => Err(Error::InvalidInput(format!(
                "unknown model `{other}` (expected heisenberg or sl2)"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Heisenberg => 3,
            Self::Sl2 => 2,
        }
    }

    pub fn basis(&self) -> [DMatrix<f64>; 3] {
        match self {
            Self::Heisenberg => {
                let e = |i: usize, j: usize, s: f64| {
                    let mut m = DMatrix::zeros(3, 3);
                    m[(i, j)] = s;
                    m
                };
                [e(0, 2, -1.0), e(0, 1, 1.0), e(1, 2, 1.0)]
            }
            Self::Sl2 => {
                let m = |a: f64, b: f64, c: f64, d: f64| DMatrix::from_row_slice(2, 2, &[a, b, c, d]) * 0.5;
                [m(0.0, -1.0, 1.0, 0.0), m(1.0, 0.0, 0.0, -1.0), m(0.0, 1.0, 1.0, 0.0)]
            }
        }
    }

    pub fn element(&self, v: &Vec3) -> DMatrix<f64> {
        let b = self.basis();
        &b[0] * v[0] + &b[1] * v[1] + &b[2] * v[2]
    }

    /// Coordinates of an algebra element (least squares on the basis).
    pub fn coords(&self, m: &DMatrix<f64>) -> Vec3 {
        let b = self.basis();
        let n = self.dim() * self.dim();
        let cols: Vec<f64> = b.iter().flat_map(|x| x.iter().copied()).collect();
        let design = DMatrix::from_column_slice(n, 3, &cols);
        let rhs = DMatrix::from_column_slice(n, 1, m.as_slice());
        let gram = design.transpose() * &design;
        let sol = gram.try_inverse().expect("model basis is independent") * design.transpose() * rhs;
        Vec3::new(sol[0], sol[1], sol[2])
    }

    /// Exponential in closed form: truncated series for the nilpotent
    /// Heisenberg model, `cosh`/`cos` formula for traceless 2x2 matrices.
    pub fn exp(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.dim();
        let id = DMatrix::<f64>::identity(n, n);
        match self {
            Self::Heisenberg => &id + x + (x * x) * 0.5,
            Self::Sl2 => {
                let s2 = -(x[(0, 0)] * x[(1, 1)] - x[(0, 1)] * x[(1, 0)]);
                let (c, sinc) = if s2 > 1e-300 {
                    let s = s2.sqrt();
                    (s.cosh(), s.sinh() / s)
                } else if s2 < -1e-300 {
                    let s = (-s2).sqrt();
                    (s.cos(), s.sin() / s)
                } else {
                    (1.0, 1.0)
                };
                id * c + x * sinc
            }
        }
    }

    /// Structure constants from matrix commutators of the basis.
    pub fn structure_constants(&self) -> StructureConstants {
        let b = self.basis();
        let mut c = StructureConstants::zero();
        for i in 0..3 {
            for j in 0..3 {
                let comm = &b[i] * &b[j] - &b[j] * &b[i];
                let w = self.coords(&comm);
                for k in 0..3 {
                    c.c[k][i][j] = w[k];
                }
            }
        }
        c
    }

    /// `exp(xA) exp(yB) exp(zC)`.
    pub fn chart_point(&self, g: &ChartGenerators, x: f64, y: f64, z: f64) -> DMatrix<f64> {
        self.exp(&(self.element(&g.a) * x))
            * self.exp(&(self.element(&g.b) * y))
            * self.exp(&(self.element(&g.c) * z))
    }
}

/// `(beta(d/dx), beta(d/dy))` from `g^-1 dg` evaluated by conjugation in the
/// matrix model: `g^-1 dg/dx = e^{-zC} e^{-yB} A e^{yB} e^{zC}` and
/// `g^-1 dg/dy = e^{-zC} B e^{zC}`.
pub fn model_beta_oracle(
    model: MatrixModel,
    gens: &ChartGenerators,
    theta0: &Vec3,
    _x: f64,
    y: f64,
    z: f64,
) -> (f64, f64) {
    let a = model.element(&gens.a);
    let b = model.element(&gens.b);
    let c = model.element(&gens.c);
    let ey = model.exp(&(&b * y));
    let ey_inv = model.exp(&(&b * -y));
    let ez = model.exp(&(&c * z));
    let ez_inv = model.exp(&(&c * -z));
    let ux = &ez_inv * &ey_inv * a * &ey * &ez;
    let uy = &ez_inv * b * &ez;
    (theta0.dot(&model.coords(&ux)), theta0.dot(&model.coords(&uy)))
}

// ---------------------------------------------------------------------------
// SU(2)

/// The basis `e0, e1, e2` of `su(2)` as complex 2x2 matrices.
pub fn su2_basis_matrices() -> [Matrix2<Complex<f64>>; 3] {
    let r = |x: f64| Complex::new(x, 0.0);
    let i = |x: f64| Complex::new(0.0, x);
    [
        Matrix2::new(i(-0.5), r(0.0), r(0.0), i(0.5)),
        Matrix2::new(r(0.0), r(0.5), r(-0.5), r(0.0)),
        Matrix2::new(r(0.0), i(0.5), i(0.5), r(0.0)),
    ]
}

/// Coordinates in `e0, e1, e2`, orthonormal for `-2 Re tr(X Y)`.
pub fn su2_coords(m: &Matrix2<Complex<f64>>) -> Vec3 {
    let b = su2_basis_matrices();
    Vec3::from_fn(|k, _| -2.0 * (m * b[k]).trace().re)
}

/// Adjoint matrices of `e0, e1, e2`: column `j` of entry `i` holds the
/// coordinates of `[e_i, e_j]`.
pub fn su2_standard_frame() -> [Mat3; 3] {
    let b = su2_basis_matrices();
    [0, 1, 2].map(|i| {
        Mat3::from_fn(|k, j| su2_coords(&(b[i] * b[j] - b[j] * b[i]))[k])
    })
}

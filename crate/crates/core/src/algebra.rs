//! Three-dimensional real Lie algebras given by structure constants, together
//! with left-invariant contact data.
//!
//! Convention: `[v_i, v_j] = sum_k C[k][i][j] v_k`. Vectors are coordinate
//! columns in the basis `(v_0, v_1, v_2)`; covectors are stored as the
//! coefficient vector of their action, so `alpha(u) = alpha.dot(&u)`.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default absolute tolerance for structural checks.
pub const DEFAULT_TOL: f64 = 1e-12;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Structure constants of a 3-dimensional Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    /// `c[k][i][j]` is the coefficient of `v_k` in `[v_i, v_j]`.
    pub c: [[[f64; 3]; 3]; 3],
    pub labels: [String; 3],
}

fn default_labels() -> [String; 3] {
    ["v0".to_string(), "v1".to_string(), "v2".to_string()]
}

impl StructureConstants {
    pub fn zero() -> Self {
        Self {
            c: [[[0.0; 3]; 3]; 3],
            labels: default_labels(),
        }
    }

    /// Builds the antisymmetric completion of the three independent brackets
    /// `[v0,v1]`, `[v0,v2]` and `[v1,v2]`.
    pub fn from_brackets(b01: [f64; 3], b02: [f64; 3], b12: [f64; 3]) -> Self {
        let mut s = Self::zero();
        for (i, j, b) in [(0, 1, b01), (0, 2, b02), (1, 2, b12)] {
            for k in 0..3 {
                s.c[k][i][j] = b[k];
                s.c[k][j][i] = -b[k];
            }
        }
        s
    }

    /// Brackets of the canonical-frame pattern
    /// `[v0,v1] = a v2`, `[v0,v2] = b v1`, `[v1,v2] = m1 v1 + m2 v2 - v0`.
    pub fn canonical(a: f64, b: f64, m1: f64, m2: f64) -> Self {
        Self::from_brackets([0.0, 0.0, a], [0.0, b, 0.0], [-1.0, m1, m2])
    }

    pub fn with_labels(mut self, labels: [&str; 3]) -> Self {
        self.labels = labels.map(str::to_string);
        self
    }

    /// The three independent brackets, in the order `01`, `02`, `12`.
    pub fn independent_brackets(&self) -> [[f64; 3]; 3] {
        let col = |i: usize, j: usize| [self.c[0][i][j], self.c[1][i][j], self.c[2][i][j]];
        [col(0, 1), col(0, 2), col(1, 2)]
    }

    pub fn bracket(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        let mut out = Vec3::zeros();
        for k in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += self.c[k][i][j] * u[i] * v[j];
                }
            }
            out[k] = s;
        }
        out
    }

    /// Basis vector `v_i`.
    pub fn basis(i: usize) -> Vec3 {
        let mut e = Vec3::zeros();
        e[i] = 1.0;
        e
    }

    /// Matrix of `ad_v = [v, .]`; column `j` holds `[v, v_j]`.
    pub fn ad_matrix(&self, v: &Vec3) -> Mat3 {
        let mut m = Mat3::zeros();
        for k in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for i in 0..3 {
                    s += self.c[k][i][j] * v[i];
                }
                m[(k, j)] = s;
            }
        }
        m
    }

    /// Largest `|C[k][i][j] + C[k][j][i]|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    d = d.max((self.c[k][i][j] + self.c[k][j][i]).abs());
                }
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.c
            .iter()
            .flatten()
            .flatten()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Largest Jacobi residual `|J^m_{ijl}|` over all index triples.
    pub fn jacobi_residual(&self) -> f64 {
        let c = &self.c;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    for m in 0..3 {
                        let mut s = 0.0;
                        for k in 0..3 {
                            s += c[k][i][j] * c[m][k][l]
                                + c[k][j][l] * c[m][k][i]
                                + c[k][l][i] * c[m][k][j];
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Re-expresses the constants in the basis whose vectors are the columns
    /// of `p` (coordinates in the current basis).
    pub fn change_basis(&self, p: &Mat3) -> Result<Self> {
        let det = p.determinant();
        if det.abs() <= 1e-12 {
            return Err(Error::Singular { det });
        }
        let lu = p.lu();
        let mut out = Self::zero();
        out.labels = self.labels.clone();
        for i in 0..3 {
            for j in 0..3 {
                let w = lu
                    .solve(&self.bracket(&p.column(i).into(), &p.column(j).into()))
                    .ok_or(Error::Singular { det })?;
                for k in 0..3 {
                    out.c[k][i][j] = w[k];
                }
            }
        }
        Ok(out)
    }

    pub fn killing_form(&self) -> KillingForm {
        let ads: Vec<Mat3> = (0..3).map(|i| self.ad_matrix(&Self::basis(i))).collect();
        let mut k = Mat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                k[(i, j)] = (ads[i] * ads[j]).trace();
            }
        }
        KillingForm { matrix: k }
    }
}

/// Outcome of [`validate_jacobi`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiReport {
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks the Jacobi identity. Non-antisymmetric input is a structural error,
/// reported separately from a failing Jacobi check.
pub fn validate_jacobi(c: &StructureConstants, tol: f64) -> Result<JacobiReport> {
    let defect = c.antisymmetry_defect();
    if defect > tol {
        return Err(Error::NotAntisymmetric { defect });
    }
    let max_residual = c.jacobi_residual();
    Ok(JacobiReport {
        max_residual,
        tolerance: tol,
        pass: max_residual <= tol,
    })
}

/// Killing form `K(x, y) = tr(ad_x ad_y)` as a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingForm {
    pub matrix: Mat3,
}

/// Inertia of a symmetric form: counts of positive, negative and zero
/// eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl KillingForm {
    pub fn eval(&self, x: &Vec3, y: &Vec3) -> f64 {
        (x.transpose() * self.matrix * y)[(0, 0)]
    }

    /// Eigenvalues below `tol * max|eigenvalue|` count as zero.
    pub fn signature(&self, tol: f64) -> Signature {
        let eig = self.matrix.symmetric_eigenvalues();
        let scale = eig.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let cut = tol * scale.max(f64::MIN_POSITIVE);
        let mut s = Signature {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        for &l in eig.iter() {
            if scale == 0.0 || l.abs() <= cut {
                s.zero += 1;
            } else if l > 0.0 {
                s.positive += 1;
            } else {
                s.negative += 1;
            }
        }
        s
    }

    pub fn is_negative_definite(&self, tol: f64) -> bool {
        self.signature(tol).negative == 3
    }

    pub fn symmetry_defect(&self) -> f64 {
        (self.matrix - self.matrix.transpose()).amax()
    }

    /// Largest `|K([z,x],y) + K(x,[z,y])|` over basis triples.
    pub fn invariance_residual(&self, c: &StructureConstants) -> f64 {
        let mut worst: f64 = 0.0;
        for z in 0..3 {
            let ez = StructureConstants::basis(z);
            for x in 0..3 {
                let ex = StructureConstants::basis(x);
                for y in 0..3 {
                    let ey = StructureConstants::basis(y);
                    let r = self.eval(&c.bracket(&ez, &ex), &ey)
                        + self.eval(&ex, &c.bracket(&ez, &ey));
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }
}

/// Contact plane, contact form and a coframe whose first covector is the form.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactData {
    pub xi: [Vec3; 2],
    pub alpha: Vec3,
    /// Rows are covectors `theta_0 = alpha, theta_1, theta_2`, dual to the
    /// frame `(n, xi[0], xi[1])` with `alpha(n) = 1`.
    pub coframe: Mat3,
}

impl ContactData {
    pub fn new(xi: [Vec3; 2], alpha: Vec3) -> Result<Self> {
        let normal = xi[0].cross(&xi[1]);
        if normal.norm() <= 1e-12 * (xi[0].norm() * xi[1].norm()).max(f64::MIN_POSITIVE) {
            return Err(Error::DegeneratePlane);
        }
        let an = alpha.norm();
        if an == 0.0 {
            return Err(Error::InvalidInput("contact form is zero".into()));
        }
        let defect = xi
            .iter()
            .map(|u| alpha.dot(u).abs() / (an * u.norm()))
            .fold(0.0_f64, f64::max);
        if defect > 1e-10 {
            return Err(Error::FormNotAnnihilating { defect });
        }
        let n = alpha / (an * an);
        let frame = Mat3::from_columns(&[n, xi[0], xi[1]]);
        let coframe = frame
            .try_inverse()
            .ok_or(Error::Singular { det: frame.determinant() })?;
        Ok(Self { xi, alpha, coframe })
    }

    /// Contact data with `alpha = u1 x u2` (up to scale the unique annihilator).
    pub fn from_plane(xi: [Vec3; 2]) -> Result<Self> {
        Self::new(xi, xi[0].cross(&xi[1]))
    }

    /// The same geometric data in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Mat3) -> Result<Self> {
        let p_inv = p
            .try_inverse()
            .ok_or(Error::Singular { det: p.determinant() })?;
        Self::new([p_inv * self.xi[0], p_inv * self.xi[1]], p.transpose() * self.alpha)
    }
}

/// Result of [`is_contact`]: `scalar = alpha([u1, u2])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactCheck {
    pub contact: bool,
    pub scalar: f64,
}

/// A left-invariant plane field is contact iff `alpha([u1,u2]) != 0`.
pub fn is_contact(c: &StructureConstants, data: &ContactData) -> Result<ContactCheck> {
    if data.xi[0].cross(&data.xi[1]).norm() == 0.0 {
        return Err(Error::DegeneratePlane);
    }
    let scalar = data.alpha.dot(&c.bracket(&data.xi[0], &data.xi[1]));
    Ok(ContactCheck {
        contact: scalar != 0.0,
        scalar,
    })
}

/// Reeb vector: `alpha(R) = 1` and `alpha([R, u]) = 0` for `u` in the plane.
///
/// Uses `d alpha(X, Y) = -alpha([X, Y])` for left-invariant forms.
pub fn reeb_vector(c: &StructureConstants, data: &ContactData) -> Result<Vec3> {
    let mut sys = Mat3::zeros();
    sys.set_row(0, &data.alpha.transpose());
    for (row, u) in data.xi.iter().enumerate() {
        // alpha([R, u]) = sum_i R_i * alpha([v_i, u])
        for i in 0..3 {
            sys[(row + 1, i)] = data.alpha.dot(&c.bracket(&StructureConstants::basis(i), u));
        }
    }
    let det = sys.determinant();
    let scale = sys.amax().powi(3).max(f64::MIN_POSITIVE);
    if det.abs() <= 1e-14 * scale {
        return Err(Error::NotContact { scalar: det });
    }
    sys.lu()
        .solve(&Vec3::new(1.0, 0.0, 0.0))
        .ok_or(Error::Singular { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn heis() -> StructureConstants {
        StructureConstants::canonical(0.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn abelian_passes_jacobi() {
        let r = validate_jacobi(&StructureConstants::zero(), DEFAULT_TOL).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn jacobi_failure_is_detected() {
        let c = StructureConstants::from_brackets([0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]);
        let r = validate_jacobi(&c, DEFAULT_TOL).unwrap();
        assert!(!r.pass);
        assert_eq!(r.max_residual, 1.0);
    }

    #[test]
    fn non_antisymmetric_is_structural_error() {
        let mut c = StructureConstants::zero();
        c.c[0][1][2] = 1.0;
        assert!(matches!(
            validate_jacobi(&c, DEFAULT_TOL),
            Err(Error::NotAntisymmetric { .. })
        ));
    }

    #[test]
    fn heisenberg_is_contact_with_scalar_minus_one() {
        let data = ContactData::new([Vec3::y(), Vec3::z()], Vec3::x()).unwrap();
        let r = is_contact(&heis(), &data).unwrap();
        assert!(r.contact);
        assert_eq!(r.scalar, -1.0);
    }

    #[test]
    fn abelian_is_never_contact() {
        let data = ContactData::from_plane([Vec3::new(1.0, 2.0, 0.0), Vec3::new(0.0, 1.0, 3.0)])
            .unwrap();
        let r = is_contact(&StructureConstants::zero(), &data).unwrap();
        assert!(!r.contact);
        assert_eq!(r.scalar, 0.0);
    }

    #[test]
    fn dependent_plane_rejected() {
        let e = ContactData::new([Vec3::y(), 2.0 * Vec3::y()], Vec3::x());
        assert_eq!(e, Err(Error::DegeneratePlane));
    }

    #[test]
    fn reeb_of_heisenberg_and_su2() {
        let data = ContactData::new([Vec3::y(), Vec3::z()], Vec3::x()).unwrap();
        let r = reeb_vector(&heis(), &data).unwrap();
        assert!((r - Vec3::x()).amax() < 1e-15);
        let su2 = presets::get("su2").unwrap();
        let r = reeb_vector(&su2.constants, &su2.contact).unwrap();
        assert!((r - Vec3::x()).amax() < 1e-15);
    }

    #[test]
    fn reeb_is_scaled_by_form() {
        // alpha = 2 theta0 on the canonical Case1 algebra: R = v0 / 2.
        let c = StructureConstants::canonical(0.0, 1.0, 1.0, 0.0);
        let data = ContactData::new([Vec3::y(), Vec3::z()], 2.0 * Vec3::x()).unwrap();
        let r = reeb_vector(&c, &data).unwrap();
        assert!((r - 0.5 * Vec3::x()).amax() < 1e-15);
    }

    #[test]
    fn killing_forms_of_semisimple_presets() {
        assert_eq!(StructureConstants::zero().killing_form().matrix, Mat3::zeros());
        let su2 = presets::get("su2").unwrap().constants.killing_form();
        assert!((su2.matrix + 2.0 * Mat3::identity()).amax() < 1e-15);
        assert!(su2.is_negative_definite(1e-12));
        let sl2 = presets::get("sl2").unwrap().constants.killing_form();
        let sig = sl2.signature(1e-12);
        assert_eq!((sig.positive, sig.negative, sig.zero), (2, 1, 0));
    }

    #[test]
    fn change_basis_identity_and_reciprocal_scaling() {
        let h = heis();
        assert_eq!(h.change_basis(&Mat3::identity()).unwrap(), h);
        let s = 3.7;
        let p = Mat3::from_diagonal(&Vec3::new(1.0, s, 1.0 / s));
        let h2 = h.change_basis(&p).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert!((h2.c[k][i][j] - h.c[k][i][j]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn change_basis_rejects_singular() {
        let p = Mat3::new(1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 1.0);
        assert!(matches!(heis().change_basis(&p), Err(Error::Singular { .. })));
    }

    #[test]
    fn ad_matrix_columns_are_brackets() {
        let h = heis();
        let ad = h.ad_matrix(&Vec3::y());
        // [v1, v2] = -v0 is the only nonzero column.
        assert_eq!(ad, Mat3::new(0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(h.ad_matrix(&Vec3::zeros()), Mat3::zeros());
    }
}

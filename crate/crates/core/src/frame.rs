//! Canonical frames of contact Lie algebras.
//!
//! A canonical frame is a basis `(v0, v1, v2)` with `v1, v2` in the contact
//! plane and brackets
//!
//! ```text
//! [v0, v1] = a v2,   [v0, v2] = b v1,   [v1, v2] = m1 v1 + m2 v2 - v0.
//! ```
//!
//! When `ad v0` vanishes on the plane the frame is further reduced to the
//! pattern `[v0, v1] = [v0, v2] = 0`, `[v1, v2] = m2 v2 - v0`.
//!
//! Construction: take `w0` = Reeb vector, write `M = ad w0` restricted to the
//! plane (it is traceless), bring `M` to zero diagonal, then rescale `w0` so
//! that `theta_0([v1, v2]) = -1`. Nonzero `a`, `b` are finally scaled to
//! `+-1` by rescaling `v1`, `v2` independently.

use nalgebra::Vector2;
use serde::Serialize;

use crate::algebra::{is_contact, reeb_vector, ContactData, Mat3, StructureConstants, Vec3};
use crate::error::{Error, Result};

/// Relative tolerances used by [`canonical_frame_with`]. Each is multiplied by
/// `max(1, max |C|)` of the constants in the Reeb-adapted basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTolerances {
    pub trace: f64,
    pub zero: f64,
    pub discriminant: f64,
}

impl Default for FrameTolerances {
    fn default() -> Self {
        Self {
            trace: 1e-10,
            zero: 1e-10,
            discriminant: 1e-10,
        }
    }
}

/// Which normal form was used for `ad w0` on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HollowBranch {
    /// `ad w0 = 0` on the plane.
    Zero,
    /// Real eigenvalues `+-lambda`.
    Real,
    /// Imaginary eigenvalues `+-i mu`.
    Complex,
    /// Nonzero nilpotent.
    Nilpotent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalFrame {
    /// Columns are `v0, v1, v2` in the input basis.
    #[serde(serialize_with = "crate::io::ser_mat3")]
    pub p: Mat3,
    /// `[v0, v1] = a v2`
    pub a: f64,
    /// `[v0, v2] = b v1`
    pub b: f64,
    pub m1: f64,
    pub m2: f64,
    pub heisenberg_branch: bool,
    pub branch: HollowBranch,
    /// Largest bracket component outside the canonical pattern.
    pub off_pattern_residual: f64,
}

impl CanonicalFrame {
    /// A frame given directly by its constants, with `P = I`.
    pub fn from_constants(a: f64, b: f64, m1: f64, m2: f64) -> Self {
        let heis = a == 0.0 && b == 0.0 && m1 == 0.0;
        let branch = match (a == 0.0, b == 0.0) {
            (true, true) => HollowBranch::Zero,
            (false, false) if a * b > 0.0 => HollowBranch::Real,
            (false, false) => HollowBranch::Complex,
            _ => HollowBranch::Nilpotent,
        };
        Self {
            p: Mat3::identity(),
            a,
            b,
            m1,
            m2,
            heisenberg_branch: heis,
            branch,
            off_pattern_residual: 0.0,
        }
    }

    /// Constants of the frame itself, rebuilt from `(a, b, m1, m2)`.
    pub fn constants(&self) -> StructureConstants {
        StructureConstants::canonical(self.a, self.b, self.m1, self.m2)
    }
}

/// Largest deviation of `c` from the canonical pattern, with `(a,b,m1,m2)`
/// read off from `c` itself. With `heisenberg`, `a`, `b`, `m1` must vanish too.
pub fn off_pattern_residual(c: &StructureConstants, heisenberg: bool) -> f64 {
    let k = &c.c;
    let mut r = [
        k[0][0][1].abs(),
        k[1][0][1].abs(),
        k[0][0][2].abs(),
        k[2][0][2].abs(),
        (k[0][1][2] + 1.0).abs(),
    ]
    .into_iter()
    .fold(0.0_f64, f64::max);
    if heisenberg {
        r = r.max(k[2][0][1].abs()).max(k[1][0][2].abs()).max(k[1][1][2].abs());
    }
    r
}

pub fn canonical_frame(c: &StructureConstants, data: &ContactData) -> Result<CanonicalFrame> {
    canonical_frame_with(c, data, &FrameTolerances::default())
}

pub fn canonical_frame_with(
    c: &StructureConstants,
    data: &ContactData,
    tol: &FrameTolerances,
) -> Result<CanonicalFrame> {
    let check = is_contact(c, data)?;
    let cscale = c.max_abs().max(1.0) * data.alpha.norm() * data.xi[0].norm() * data.xi[1].norm();
    if check.scalar.abs() <= 1e-12 * cscale {
        return Err(Error::NotContact {
            scalar: check.scalar,
        });
    }
    let reeb = reeb_vector(c, data)?;
    let w = Mat3::from_columns(&[reeb, data.xi[0], data.xi[1]]);
    let cw = c.change_basis(&w)?;
    let scale = cw.max_abs().max(1.0);

    // ad w0 on the plane, in the basis (w1, w2).
    let m = nalgebra::Matrix2::new(cw.c[1][0][1], cw.c[1][0][2], cw.c[2][0][1], cw.c[2][0][2]);
    let trace = m.trace();
    if trace.abs() > tol.trace * scale {
        return Err(Error::Inconsistent(format!(
            "ad of the Reeb vector has trace {trace:e} on the plane"
        )));
    }

    let (pw, branch) = if m.amax() <= tol.zero * scale {
        (zero_branch(&cw, tol.zero * scale)?, HollowBranch::Zero)
    } else {
        let (p1, p2, branch) = hollow_basis(&m, tol.discriminant);
        let v1 = Vec3::new(0.0, p1[0], p1[1]);
        let v2 = Vec3::new(0.0, p2[0], p2[1]);
        let c0 = cw.bracket(&v1, &v2)[0];
        let v0 = Vec3::new(-c0, 0.0, 0.0);
        (Mat3::from_columns(&[v0, v1, v2]), branch)
    };

    let mut p = w * pw;
    let mut cc = c.change_basis(&p)?;
    if branch != HollowBranch::Zero {
        // scale nonzero a, b to +-1: v1 -> s v1, v2 -> t v2, v0 -> s t v0
        // gives a -> s^2 a, b -> t^2 b.
        let cut = tol.zero * cc.max_abs().max(1.0);
        let a = cc.c[2][0][1];
        let b = cc.c[1][0][2];
        let s = if a.abs() > cut { 1.0 / a.abs().sqrt() } else { 1.0 };
        let t = if b.abs() > cut { 1.0 / b.abs().sqrt() } else { 1.0 };
        p = p * Mat3::from_diagonal(&Vec3::new(s * t, s, t));
        cc = c.change_basis(&p)?;
    }

    let heis = branch == HollowBranch::Zero;
    let off = off_pattern_residual(&cc, heis);
    let (mut a, mut b, mut m1) = (cc.c[2][0][1], cc.c[1][0][2], cc.c[1][1][2]);
    if heis {
        a = 0.0;
        b = 0.0;
        m1 = 0.0;
    }
    Ok(CanonicalFrame {
        p,
        a,
        b,
        m1,
        m2: cc.c[2][1][2],
        heisenberg_branch: heis,
        branch,
        off_pattern_residual: off,
    })
}

/// `ad w0 = 0` on the plane: `[w1, w2] = a1 w1 + a2 w2 + a0 w0`. Returns the
/// new basis in `w` coordinates with `[v1, v2] = m2 v2 - v0`.
pub(crate) fn zero_branch(cw: &StructureConstants, cut: f64) -> Result<Mat3> {
    let a0 = cw.c[0][1][2];
    let a1 = cw.c[1][1][2];
    let a2 = cw.c[2][1][2];
    if a0.abs() <= cut {
        return Err(Error::NotContact { scalar: a0 });
    }
    let v0 = Vec3::new(-a0, 0.0, 0.0);
    let (v1, v2) = if a1.abs().max(a2.abs()) <= cut {
        (Vec3::y(), Vec3::z())
    } else if a2.abs() >= a1.abs() {
        (Vec3::new(0.0, 1.0 / a2, 0.0), Vec3::new(0.0, a1, a2))
    } else {
        (Vec3::new(0.0, 0.0, -1.0 / a1), Vec3::new(0.0, a1, 0.0))
    };
    Ok(Mat3::from_columns(&[v0, v1, v2]))
}

/// Basis `(p1, p2)` of the plane with `M p1 = a p2`, `M p2 = b p1` for a
/// traceless nonzero `M`.
fn hollow_basis(
    m: &nalgebra::Matrix2<f64>,
    disc_tol: f64,
) -> (Vector2<f64>, Vector2<f64>, HollowBranch) {
    let p = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let q = m[(0, 1)];
    let r = m[(1, 0)];
    let delta = p * p + q * r;
    let norm2 = m.amax().powi(2);
    if delta > disc_tol * norm2 {
        let lambda = delta.sqrt();
        let eig = |mu: f64| {
            let u = Vector2::new(q, mu - p);
            let v = Vector2::new(mu + p, r);
            let e = if u.norm() >= v.norm() { u } else { v };
            e / e.norm()
        };
        let (ep, em) = (eig(lambda), eig(-lambda));
        (ep + em, ep - em, HollowBranch::Real)
    } else if delta < -disc_tol * norm2 {
        let mu = (-delta).sqrt();
        if q.abs() >= r.abs() {
            (Vector2::new(q, -p), Vector2::new(0.0, mu), HollowBranch::Complex)
        } else {
            (Vector2::new(p, r), Vector2::new(mu, 0.0), HollowBranch::Complex)
        }
    } else {
        // v1 spans the image, v2 is a preimage: M v2 = v1, M v1 = 0.
        let k = if m.column(0).norm() >= m.column(1).norm() { 0 } else { 1 };
        let pre = if k == 0 { Vector2::x() } else { Vector2::y() };
        (m * pre, pre, HollowBranch::Nilpotent)
    }
}

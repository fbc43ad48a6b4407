//! Case analysis of canonical frames.
//!
//! Non-semisimple contact algebras split into three zero patterns of the
//! canonical constants; each comes with an abelian subalgebra `h`, a geodesic
//! plane field `X` orthogonal to `h`, and chart generators `A, B, C = X` for
//! the product chart `(x, y, z) -> exp(xA) exp(yB) exp(zC)`. Semisimple
//! algebras are told apart by the Killing form: definite means `su(2)`, which
//! admits no such chart, indefinite means `sl(2)`, whose chart is the
//! rotation/unipotent/diagonal factorization.

use nalgebra::{Matrix2, Rotation3, Unit};
use serde::Serialize;

use crate::algebra::{KillingForm, Mat3, StructureConstants, Vec3};
use crate::error::{Error, Result};
use crate::frame::{zero_branch, CanonicalFrame, HollowBranch};
use crate::io::{ser_mat3, ser_vec3, ser_vec3_pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    Su2,
    Sl2Tilde,
    Case1,
    Case2,
    Case3Heis,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Su2 => "Su2",
            CaseTag::Sl2Tilde => "Sl2Tilde",
            CaseTag::Case1 => "Case1",
            CaseTag::Case2 => "Case2",
            CaseTag::Case3Heis => "Case3Heis",
        }
    }
}

/// Generators of the three one-parameter subgroups, in frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartGenerators {
    #[serde(serialize_with = "ser_vec3")]
    pub a: Vec3,
    #[serde(serialize_with = "ser_vec3")]
    pub b: Vec3,
    /// The plane field `X`; `C` is tangent to the contact plane.
    #[serde(serialize_with = "ser_vec3")]
    pub c: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub case_tag: CaseTag,
    /// Frame all vectors below are expressed in. Differs from the input frame
    /// only when a Heisenberg-type frame had to be reduced further.
    pub frame: CanonicalFrame,
    pub generators: Option<ChartGenerators>,
    /// Two vectors spanning the subgroup used by the factorization.
    #[serde(serialize_with = "ser_vec3_pair")]
    pub h_span: Option<[Vec3; 2]>,
    /// Rows are `theta_0, theta_1, theta_2` in input coordinates; the metric
    /// is `theta_0^2 + theta_1^2 + theta_2^2`.
    #[serde(serialize_with = "ser_mat3")]
    pub coframe: Mat3,
}

impl ClassificationResult {
    /// Constants in the result's frame.
    pub fn constants(&self) -> StructureConstants {
        self.frame.constants()
    }

    pub fn chart_generators(&self) -> Result<ChartGenerators> {
        self.generators.ok_or_else(|| {
            Error::Unsupported(
                "su(2): the product factorization requires an algebra not isomorphic to su(2)"
                    .into(),
            )
        })
    }
}

/// Relative tolerance for vanishing canonical constants; a frame computed
/// after a basis change carries roundoff of order `cond(P) * eps`.
pub const CLASSIFY_TOL: f64 = 1e-10;

pub fn classify(cf: &CanonicalFrame) -> Result<ClassificationResult> {
    classify_with(cf, CLASSIFY_TOL)
}

/// `tol` is relative to the largest canonical constant (at least 1).
pub fn classify_with(cf: &CanonicalFrame, tol: f64) -> Result<ClassificationResult> {
    let scale = [cf.a, cf.b, cf.m1, cf.m2]
        .iter()
        .fold(1.0_f64, |m, x| m.max(x.abs()));
    let cut = tol * scale;
    let constraint = (cf.a * cf.m1).abs().max((cf.b * cf.m2).abs());
    if constraint > cut * scale {
        return Err(Error::ConstraintViolated {
            residual: constraint,
        });
    }
    let zero = |x: f64| x.abs() <= cut;
    let e = StructureConstants::basis;

    let (case_tag, frame, generators, h_span) = if zero(cf.a) && zero(cf.b) {
        let frame = if zero(cf.m1) {
            CanonicalFrame {
                a: 0.0,
                b: 0.0,
                m1: 0.0,
                heisenberg_branch: true,
                ..cf.clone()
            }
        } else {
            reduce_to_heisenberg_pattern(cf)?
        };
        let g = ChartGenerators {
            a: e(0),
            b: e(2),
            c: e(1),
        };
        (CaseTag::Case3Heis, frame, Some(g), Some([g.a, g.b]))
    } else if zero(cf.a) && zero(cf.m2) {
        let g = ChartGenerators {
            a: e(0),
            b: e(1),
            c: e(2),
        };
        (CaseTag::Case1, cf.clone(), Some(g), Some([g.a, g.b]))
    } else if zero(cf.b) && zero(cf.m1) {
        let g = ChartGenerators {
            a: e(0),
            b: e(2),
            c: e(1),
        };
        (CaseTag::Case2, cf.clone(), Some(g), Some([g.a, g.b]))
    } else {
        let c = cf.constants();
        let killing = c.killing_form();
        let sig = killing.signature(1e-9);
        if sig.negative == 3 {
            (CaseTag::Su2, cf.clone(), None, None)
        } else if sig.positive == 2 && sig.negative == 1 {
            let std = sl2_standardize_in_plane(&c, [e(1), e(2)])?;
            let s0: Vec3 = std.q.column(0).into();
            let s1: Vec3 = std.q.column(1).into();
            let s2: Vec3 = std.q.column(2).into();
            let g = ChartGenerators {
                a: s0,
                b: s2 - s0,
                c: s1,
            };
            (CaseTag::Sl2Tilde, cf.clone(), Some(g), Some([g.b, g.c]))
        } else {
            return Err(Error::ConstraintViolated {
                residual: constraint,
            });
        }
    };
    let coframe = frame
        .p
        .try_inverse()
        .ok_or(Error::Singular {
            det: frame.p.determinant(),
        })?;
    Ok(ClassificationResult {
        case_tag,
        frame,
        generators,
        h_span,
        coframe,
    })
}

/// Frame with `a = b = 0` but `m1 != 0`: redo the zero-branch substitution so
/// that the `v1` component of `[v1, v2]` vanishes.
fn reduce_to_heisenberg_pattern(cf: &CanonicalFrame) -> Result<CanonicalFrame> {
    let c = StructureConstants::canonical(0.0, 0.0, cf.m1, cf.m2);
    let q = zero_branch(&c, 1e-12)?;
    let cc = c.change_basis(&q)?;
    Ok(CanonicalFrame {
        p: cf.p * q,
        a: 0.0,
        b: 0.0,
        m1: 0.0,
        m2: cc.c[2][1][2],
        heisenberg_branch: true,
        branch: HollowBranch::Zero,
        off_pattern_residual: crate::frame::off_pattern_residual(&cc, true),
    })
}

/// Basis `(s0, s1, s2)` of an `sl(2)` with
/// `[s1,s0] = -s2`, `[s2,s0] = s1`, `[s2,s1] = s0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sl2StandardBasis {
    /// Columns `s0, s1, s2` in input coordinates.
    #[serde(serialize_with = "ser_mat3")]
    pub q: Mat3,
    /// Largest deviation of the transformed constants from the target pattern.
    pub residual: f64,
}

/// Target constants of [`Sl2StandardBasis`].
pub fn sl2_standard_constants() -> StructureConstants {
    StructureConstants::canonical(1.0, -1.0, 0.0, 0.0)
}

fn pattern_residual(c: &StructureConstants, target: &StructureConstants) -> f64 {
    let mut r: f64 = 0.0;
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                r = r.max((c.c[k][i][j] - target.c[k][i][j]).abs());
            }
        }
    }
    r
}

fn require_sl2(killing: &KillingForm) -> Result<()> {
    let sig = killing.signature(1e-9);
    if sig.positive == 2 && sig.negative == 1 {
        Ok(())
    } else {
        Err(Error::NotSl2(format!(
            "Killing form signature is ({}, {}, {})",
            sig.positive, sig.negative, sig.zero
        )))
    }
}

fn sign_normalized(v: Vec3) -> Vec3 {
    if v[v.iamax()] < 0.0 {
        -v
    } else {
        v
    }
}

fn finish_standard_basis(c: &StructureConstants, s0: Vec3, s1: Vec3) -> Result<Sl2StandardBasis> {
    let s2 = c.bracket(&s0, &s1);
    let q = Mat3::from_columns(&[s0, s1, s2]);
    let residual = pattern_residual(&c.change_basis(&q)?, &sl2_standard_constants());
    if residual > 1e-10 {
        return Err(Error::NotSl2(format!("standard basis residual {residual:e}")));
    }
    Ok(Sl2StandardBasis { q, residual })
}

/// Standard `sl(2)` basis: the timelike Killing direction becomes the
/// elliptic generator `s0`; `s1` is the Killing-orthogonal projection of the
/// input basis vector with the largest projected norm; `s2 = [s0, s1]`.
pub fn sl2_standardize(c: &StructureConstants) -> Result<Sl2StandardBasis> {
    let killing = c.killing_form();
    require_sl2(&killing)?;
    let eig = killing.matrix.symmetric_eigen();
    let neg = eig.eigenvalues.imin();
    let t: Vec3 = eig.eigenvectors.column(neg).into();
    let s0 = sign_normalized(t * (2.0 / -killing.eval(&t, &t)).sqrt());
    let mut best: Option<(f64, Vec3)> = None;
    for j in [1, 2, 0] {
        let ej = StructureConstants::basis(j);
        let proj = ej + s0 * (killing.eval(&ej, &s0) / 2.0);
        let n = killing.eval(&proj, &proj);
        if best.is_none_or(|(bn, _)| n > bn * (1.0 + 1e-9)) {
            best = Some((n, proj));
        }
    }
    let (n, proj) = best.unwrap();
    let s1 = proj * (2.0 / n).sqrt();
    finish_standard_basis(c, s0, s1)
}

/// Standard `sl(2)` basis with `s1` in the given plane, so that the diagonal
/// subgroup generated by `s1` is tangent to it. Requires a contact plane,
/// i.e. one on which the Killing form is nondegenerate.
pub fn sl2_standardize_in_plane(c: &StructureConstants, xi: [Vec3; 2]) -> Result<Sl2StandardBasis> {
    let killing = c.killing_form();
    require_sl2(&killing)?;
    let gram = Matrix2::new(
        killing.eval(&xi[0], &xi[0]),
        killing.eval(&xi[0], &xi[1]),
        killing.eval(&xi[1], &xi[0]),
        killing.eval(&xi[1], &xi[1]),
    );
    let eig = gram.symmetric_eigen();
    let (lo, hi) = (eig.eigenvalues.min(), eig.eigenvalues.max());
    let scale = lo.abs().max(hi.abs());
    if scale == 0.0 || lo.abs().min(hi.abs()) <= 1e-10 * scale {
        return Err(Error::NotSl2("plane is degenerate for the Killing form".into()));
    }
    let plane = |coef: nalgebra::Vector2<f64>| xi[0] * coef[0] + xi[1] * coef[1];
    if lo > 0.0 {
        // spacelike plane: s0 is its Killing-orthogonal line
        let kinv = killing
            .matrix
            .try_inverse()
            .ok_or(Error::NotSl2("degenerate Killing form".into()))?;
        let n = kinv * xi[0].cross(&xi[1]);
        let s0 = sign_normalized(n * (2.0 / -killing.eval(&n, &n)).sqrt());
        let s1 = xi[0] * (2.0 / gram[(0, 0)]).sqrt();
        finish_standard_basis(c, s0, s1)
    } else if hi > 0.0 {
        // Lorentzian plane: spacelike s1 and timelike s0 both in the plane
        let c1 = if gram[(0, 0)] > 1e-6 * scale {
            nalgebra::Vector2::x()
        } else if gram[(1, 1)] > 1e-6 * scale {
            nalgebra::Vector2::y()
        } else {
            eig.eigenvectors.column(eig.eigenvalues.imax()).into_owned()
        };
        let g = gram * c1;
        let c0 = nalgebra::Vector2::new(-g[1], g[0]);
        let s1 = plane(c1);
        let s0 = plane(c0);
        let s1 = s1 * (2.0 / killing.eval(&s1, &s1)).sqrt();
        let s0 = sign_normalized(s0 * (2.0 / -killing.eval(&s0, &s0)).sqrt());
        finish_standard_basis(c, s0, s1)
    } else {
        Err(Error::NotSl2("plane is timelike for the Killing form".into()))
    }
}

/// Automorphism of `su(2)` (standard basis `e0, e1, e2`) taking the plane
/// onto `span{e1, e2}`: the rotation carrying the plane's unit normal to
/// `e0`. Rotations are exactly the bracket-preserving maps here since
/// `[x, y] = -x × y` in this basis.
pub fn su2_normalize(xi: [Vec3; 2]) -> Result<Mat3> {
    let n = xi[0].cross(&xi[1]);
    let scale = xi[0].norm() * xi[1].norm();
    if scale == 0.0 || n.norm() <= 1e-12 * scale {
        return Err(Error::DegeneratePlane);
    }
    let mut n = n / n.norm();
    if n[0] < 0.0 {
        n = -n;
    }
    let e0 = Vec3::x();
    let axis = n.cross(&e0);
    let s = axis.norm();
    if s == 0.0 {
        return Ok(Mat3::identity());
    }
    let angle = s.atan2(n.dot(&e0));
    let rot = Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle);
    Ok(*rot.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::canonical_frame;
    use crate::presets;

    fn classify_preset(name: &str) -> ClassificationResult {
        let p = presets::get(name).unwrap();
        classify(&canonical_frame(&p.constants, &p.contact).unwrap()).unwrap()
    }

    #[test]
    fn heisenberg_is_case3() {
        let r = classify_preset("heisenberg");
        assert_eq!(r.case_tag, CaseTag::Case3Heis);
        let g = r.generators.unwrap();
        assert_eq!(g.c, Vec3::y());
        let c = r.constants();
        assert_eq!(c.bracket(&g.a, &g.b), Vec3::zeros());
    }

    #[test]
    fn direct_frames() {
        let case1 = classify(&CanonicalFrame::from_constants(0.0, 1.0, 1.0, 0.0)).unwrap();
        assert_eq!(case1.case_tag, CaseTag::Case1);
        assert_eq!(case1.generators.unwrap().c, Vec3::z());
        let case2 = classify(&CanonicalFrame::from_constants(1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(case2.case_tag, CaseTag::Case2);
        assert_eq!(case2.generators.unwrap().c, Vec3::y());
        // [v0,v1] = -v2, [v0,v2] = v1: the su(2) pattern
        let su2 = classify(&CanonicalFrame::from_constants(-1.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(su2.case_tag, CaseTag::Su2);
        assert!(su2.generators.is_none());
        assert!(matches!(su2.chart_generators(), Err(Error::Unsupported(_))));
        for (a, b) in [(1.0, -1.0), (1.0, 1.0), (-1.0, -1.0)] {
            let r = classify(&CanonicalFrame::from_constants(a, b, 0.0, 0.0)).unwrap();
            assert_eq!(r.case_tag, CaseTag::Sl2Tilde, "a={a} b={b}");
        }
    }

    #[test]
    fn heisenberg_pattern_with_m1_is_reduced() {
        let r = classify(&CanonicalFrame::from_constants(0.0, 0.0, 2.0, 3.0)).unwrap();
        assert_eq!(r.case_tag, CaseTag::Case3Heis);
        assert_eq!(r.frame.m1, 0.0);
        let c = StructureConstants::canonical(0.0, 0.0, 2.0, 3.0).change_basis(&r.frame.p).unwrap();
        assert!(crate::frame::off_pattern_residual(&c, true) < 1e-14);
    }

    #[test]
    fn constraint_violation_rejected() {
        let e = classify(&CanonicalFrame::from_constants(1.0, 0.0, 1.0, 0.0));
        assert!(matches!(e, Err(Error::ConstraintViolated { .. })));
    }

    #[test]
    fn standardize_fixed_point_and_hyperbolic() {
        let s = sl2_standardize(&sl2_standard_constants()).unwrap();
        assert!((s.q - Mat3::identity()).amax() < 1e-14);

        let hyp = presets::get("sl2_hyperbolic").unwrap().constants;
        let s = sl2_standardize(&hyp).unwrap();
        assert!(s.residual < 1e-12);

        // doubling every basis vector doubles every constant
        let scaled = sl2_standard_constants()
            .change_basis(&(2.0 * Mat3::identity()))
            .unwrap();
        let s = sl2_standardize(&scaled).unwrap();
        assert!(s.residual < 1e-13);
    }

    #[test]
    fn standardize_rejects_su2() {
        let su2 = presets::get("su2").unwrap().constants;
        assert!(matches!(sl2_standardize(&su2), Err(Error::NotSl2(_))));
    }

    #[test]
    fn su2_normalize_examples() {
        let (e0, e1, e2) = (Vec3::x(), Vec3::y(), Vec3::z());
        assert_eq!(su2_normalize([e1, e2]).unwrap(), Mat3::identity());
        let t = su2_normalize([e0, e2]).unwrap();
        let quarter = Rotation3::from_axis_angle(&Vec3::z_axis(), std::f64::consts::FRAC_PI_2);
        assert!((t - quarter.matrix()).amax() < 1e-15);
        let t = su2_normalize([e0, e1]).unwrap();
        assert!((t * e2 - e0).amax() < 1e-15);
        assert_eq!(su2_normalize([e1, 2.0 * e1]), Err(Error::DegeneratePlane));
    }
}

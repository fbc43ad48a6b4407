use contact_groups::algebra::{is_contact, reeb_vector, validate_jacobi, Mat3, StructureConstants, Vec3};
use contact_groups::frame::{canonical_frame, off_pattern_residual};
use contact_groups::presets;
use proptest::prelude::*;

fn conditioned(max: f64) -> impl Strategy<Value = Mat3> {
    prop::array::uniform9(-1.0f64..1.0)
        .prop_map(|a| Mat3::from_row_slice(&a))
        .prop_filter("condition number bound", move |p| {
            let s = p.singular_values();
            s.min() > 0.0 && s.max() / s.min() <= max
        })
}

fn well_conditioned() -> impl Strategy<Value = Mat3> {
    conditioned(100.0)
}

fn preset_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(presets::NAMES.to_vec())
}

/// Bracket of basis vectors straight from the definition of a basis change:
/// `[P e_i, P e_j]` expanded in the old basis, then solved in the new one.
fn oracle_change(c: &StructureConstants, p: &Mat3) -> [[[f64; 3]; 3]; 3] {
    let inv = p.try_inverse().unwrap();
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut w = Vec3::zeros();
            for a in 0..3 {
                for b in 0..3 {
                    for k in 0..3 {
                        w[k] += p[(a, i)] * p[(b, j)] * c.c[k][a][b];
                    }
                }
            }
            let w = inv * w;
            for k in 0..3 {
                out[k][i][j] = w[k];
            }
        }
    }
    out
}

fn max_diff(a: &[[[f64; 3]; 3]; 3], b: &[[[f64; 3]; 3]; 3]) -> f64 {
    let mut m = 0.0f64;
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((a[k][i][j] - b[k][i][j]).abs());
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn change_basis_round_trip(name in preset_name(), p in conditioned(20.0)) {
        let c = presets::get(name).unwrap().constants;
        let there = c.change_basis(&p).unwrap();
        let back = there.change_basis(&p.try_inverse().unwrap()).unwrap();
        prop_assert!(max_diff(&back.c, &c.c) <= 1e-12);
        prop_assert!(max_diff(&there.c, &oracle_change(&c, &p)) <= 1e-12 * there.max_abs().max(1.0));
    }

    #[test]
    fn jacobi_contact_and_killing_survive_basis_change(name in preset_name(), p in well_conditioned()) {
        let pr = presets::get(name).unwrap();
        let c = pr.constants.change_basis(&p).unwrap();
        let data = pr.contact.change_basis(&p).unwrap();
        let scale = c.max_abs().max(1.0);
        prop_assert!(validate_jacobi(&c, 1e-12 * scale * scale).unwrap().pass);
        prop_assert!(is_contact(&c, &data).unwrap().contact);
        let k = c.killing_form();
        prop_assert!(k.invariance_residual(&c) <= 1e-12 * scale.powi(3));
        prop_assert!(k.symmetry_defect() <= 1e-12 * scale * scale);
    }

    #[test]
    fn canonical_frame_pattern(name in preset_name(), p in well_conditioned()) {
        let pr = presets::get(name).unwrap();
        let c = pr.constants.change_basis(&p).unwrap();
        let data = pr.contact.change_basis(&p).unwrap();
        let cf = canonical_frame(&c, &data).unwrap();
        let actual = c.change_basis(&cf.p).unwrap();
        prop_assert!(off_pattern_residual(&actual, cf.heisenberg_branch) <= 1e-10);
        // [v1, v2] has v0-component -1
        prop_assert!((actual.c[0][1][2] + 1.0).abs() <= 1e-10);
        // ad of the Reeb field is traceless on the plane
        let r = reeb_vector(&c, &data).unwrap();
        let ad = c.ad_matrix(&r);
        let m = cf.p.try_inverse().unwrap() * ad * cf.p;
        prop_assert!((m[(1, 1)] + m[(2, 2)]).abs() <= 1e-10 * ad.amax().max(1.0));
        prop_assert!((cf.a * cf.m1).abs() <= 1e-10 && (cf.b * cf.m2).abs() <= 1e-10);
    }
}

#[test]
fn killing_invariance_on_presets() {
    for p in presets::all() {
        assert!(p.constants.killing_form().invariance_residual(&p.constants) <= 1e-12, "{}", p.name);
    }
}

#[test]
fn killing_form_of_canonical_pattern() {
    // diag(2ab, 2a, -2b), from the trace of ad-products worked out by hand
    for &(a, b) in &[(1.0, -1.0), (-1.0, 1.0), (2.0, 3.0), (0.0, 1.0)] {
        let k = StructureConstants::canonical(a, b, 0.0, 0.0).killing_form();
        let expected = Mat3::from_diagonal(&Vec3::new(2.0 * a * b, 2.0 * a, -2.0 * b));
        assert!((k.matrix - expected).amax() <= 1e-15, "a={a} b={b}");
    }
}

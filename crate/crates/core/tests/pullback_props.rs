use contact_groups::algebra::{Mat3, Vec3};
use contact_groups::classify::CaseTag;
use contact_groups::embedding::GridSpec;
use contact_groups::presets;
use contact_groups::pullback::{beta_at, beta_z, contact_volume, SecondKindChart};
use contact_groups::verify::{classify_preset, derivative_error};
use proptest::prelude::*;

fn charts() -> Vec<(&'static str, SecondKindChart)> {
    presets::all()
        .into_iter()
        .filter_map(|p| {
            let res = classify_preset(&p).unwrap();
            (res.case_tag != CaseTag::Su2)
                .then(|| (p.name, SecondKindChart::from_classification(&res).unwrap()))
        })
        .collect()
}

/// `exp(t M) v` by plain Taylor summation.
fn taylor_apply(m: &Mat3, t: f64, v: &Vec3) -> Vec3 {
    let mut term = *v;
    let mut sum = *v;
    for k in 1..80 {
        term = m * term * (t / k as f64);
        sum += term;
    }
    sum
}

fn oracle_beta(chart: &SecondKindChart, y: f64, z: f64) -> (f64, f64) {
    let c = &chart.constants;
    let g = chart.generators;
    let ad_b = c.ad_matrix(&g.b);
    let ad_c = c.ad_matrix(&g.c);
    let ux = taylor_apply(&ad_c, -z, &taylor_apply(&ad_b, -y, &g.a));
    let uy = taylor_apply(&ad_c, -z, &g.b);
    (chart.theta0.dot(&ux), chart.theta0.dot(&uy))
}

proptest! {
    #[test]
    fn beta_matches_series_oracle(x in -2.0f64..2.0, y in -2.0f64..2.0, z in -2.0f64..2.0) {
        for (name, chart) in charts() {
            let b = beta_at(&chart, x, y, z);
            let (ox, oy) = oracle_beta(&chart, y, z);
            let scale = ox.abs().max(oy.abs()).max(1.0);
            prop_assert!((b.bx - ox).abs() <= 1e-12 * scale, "{}: {} vs {}", name, b.bx, ox);
            prop_assert!((b.by - oy).abs() <= 1e-12 * scale, "{}: {} vs {}", name, b.by, oy);
        }
    }
}

#[test]
fn z_component_vanishes() {
    for (name, chart) in charts() {
        for z in GridSpec::new(41, -2.0, 2.0).unwrap().axis() {
            assert_eq!(beta_z(&chart, z), 0.0, "{name}");
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let grid = GridSpec::new(5, -2.0, 2.0).unwrap();
    for (name, chart) in charts() {
        let e = derivative_error(&chart, &grid);
        assert!(e <= 1e-6, "{name}: {e:e}");
    }
}

#[test]
fn volume_sign_constant_and_beta_nonzero() {
    let axis = GridSpec::new(9, -2.0, 2.0).unwrap().axis();
    for (name, chart) in charts() {
        let sign = contact_volume(&chart, 0.0, 0.0, 0.0).signum();
        for &x in &axis {
            for &y in &axis {
                for &z in &axis {
                    let b = beta_at(&chart, x, y, z);
                    assert!(b.bx * b.bx + b.by * b.by >= 1e-12, "{name}");
                    let v = contact_volume(&chart, x, y, z);
                    assert!(v.abs() >= 1e-6 && v.signum() == sign, "{name} at ({x},{y},{z})");
                }
            }
        }
    }
}

use contact_groups::classify::CaseTag;
use contact_groups::embedding::{angle_lift, embed_grid, psi_embedding, verify_samples, write_csv, Failure, GridSpec};
use contact_groups::presets;
use contact_groups::pullback::{contact_volume, SecondKindChart};
use contact_groups::verify::classify_preset;
use contact_groups::Error;

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

#[test]
fn every_non_su2_preset_embeds() {
    let grid = GridSpec::new(6, -2.0, 2.0).unwrap();
    for p in presets::all() {
        match psi_embedding(&p.constants, &p.contact, &grid, 1e-9) {
            Ok(e) => {
                assert!(e.report.pass, "{}: {:?}", p.name, e.report.failures);
                assert!(e.report.max_residual <= 1e-9);
                assert_eq!(e.samples.len(), 216);
            }
            Err(Error::Unsupported(_)) => assert_eq!(p.name, "su2"),
            Err(e) => panic!("{}: {e}", p.name),
        }
    }
}

#[test]
fn lift_is_monotone_with_the_sign_of_the_volume() {
    let zs = GridSpec::new(81, -4.0, 4.0).unwrap().axis();
    for (name, chart) in charts() {
        for &(x, y) in &[(0.0, 0.0), (1.5, -0.7), (-2.0, 2.0)] {
            let f = angle_lift(&chart, x, y, &zs).unwrap();
            let s = contact_volume(&chart, x, y, 0.0).signum();
            assert!(f.windows(2).all(|w| (w[1] - w[0]) * s > 0.0), "{name}");
        }
    }
}

#[test]
fn lift_is_refinement_stable() {
    let coarse = GridSpec::new(21, -3.0, 3.0).unwrap().axis();
    let fine = GridSpec::new(41, -3.0, 3.0).unwrap().axis();
    for (name, chart) in charts() {
        let a = angle_lift(&chart, 0.4, -1.1, &coarse).unwrap();
        let b = angle_lift(&chart, 0.4, -1.1, &fine).unwrap();
        for (i, fa) in a.iter().enumerate() {
            assert!((fa - b[2 * i]).abs() <= 1e-9, "{name}");
        }
    }
}

#[test]
fn sampled_images_are_distinct() {
    let grid = GridSpec::new(7, -2.0, 2.0).unwrap();
    for (name, chart) in charts() {
        let samples = embed_grid(&chart, &grid).unwrap();
        let r = verify_samples(&samples, 1e-9);
        assert!(!r.failures.iter().any(|f| matches!(f, Failure::Duplicate { .. })), "{name}");
        assert!(r.min_image_separation >= 1e-9);
    }
}

#[test]
fn csv_round_trip() {
    let chart = &charts()[0].1;
    let samples = embed_grid(chart, &GridSpec::new(3, -1.0, 1.0).unwrap()).unwrap();
    let mut buf = Vec::new();
    write_csv(&samples, &mut buf).unwrap();
    let mut rdr = csv::Reader::from_reader(buf.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header, ["x", "y", "z", "bx", "by", "f", "u", "v", "w", "V", "residual"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), samples.len());
    for (row, s) in rows.iter().zip(&samples) {
        assert_eq!(row[5].parse::<f64>().unwrap(), s.f);
        assert_eq!(row[2].parse::<f64>().unwrap(), s.z);
    }
}

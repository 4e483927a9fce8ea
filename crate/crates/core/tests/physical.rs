//! Global profile, physical reconstruction and file formats.

use std::sync::OnceLock;

use proptest::prelude::*;
use yahil::integrate::{Profile, Sample};
use yahil::io;
use yahil::model::{self, FlowState};
use yahil::physical::{physical_fields, ProfileInterp};
use yahil::shoot::{self, ShootOptions};
use yahil::PolytropicIndex;

fn gamma() -> PolytropicIndex {
    PolytropicIndex::new(1.2).unwrap()
}

fn profile() -> &'static Profile {
    static P: OnceLock<Profile> = OnceLock::new();
    P.get_or_init(|| {
        let opts = ShootOptions::default();
        let r = shoot::find_critical(gamma(), &opts).unwrap();
        shoot::assemble_global(&r, &opts).unwrap().0
    })
}

#[test]
fn local_mass_matches_quadrature() {
    let s = &profile().samples;
    let g = gamma();
    // Inside the first sample the density is flat to O(y^2).
    let mut integral = s[0].rho * s[0].y.powi(3) / 3.0;
    let mut worst: f64 = 0.0;
    for w in s.windows(2) {
        // rho taken as a power law across each step, integrated exactly.
        let (y0, y1) = (w[0].y, w[1].y);
        let p = (w[1].rho / w[0].rho).ln() / (y1 / y0).ln();
        integral += w[0].rho * y0.powi(3) * ((y1 / y0).powf(3.0 + p) - 1.0) / (3.0 + p);
        if y1 > 1e-2 && y1 < 1e3 {
            let m = model::local_mass(y1, w[1].state(), g);
            worst = worst.max(((integral - m) / m).abs());
        }
    }
    assert!(worst < 1e-4, "worst relative mismatch {worst:e}");
}

#[test]
fn profile_is_monotone_with_one_sonic_point() {
    let p = profile();
    let rep = shoot::verify_invariants(p, gamma(), &ShootOptions::default());
    assert!(rep.all_pass(), "{:?}", rep.checks);
    assert!(p.samples.windows(2).all(|w| w[1].y > w[0].y));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fields_are_covariant_under_scaling(lam in 0.3f64..5.0, t in -10.0f64..-0.1, kappa in 0.2f64..5.0) {
        let g = gamma();
        let ip = ProfileInterp::new(&profile().samples, g).unwrap();
        let b = g.two_m();
        let radii: Vec<f64> = (0..40).map(|i| 10f64.powf(-1.0 + 2.0 * i as f64 / 39.0)).collect();
        let base = physical_fields(&ip, t, kappa, &radii).unwrap();
        let inner: Vec<f64> = radii.iter().map(|r| r / lam).collect();
        let moved = physical_fields(&ip, t / lam.powf(1.0 / b), kappa, &inner).unwrap();
        for (a, m) in base.iter().zip(&moved) {
            let rho = lam.powf(-2.0 / b) * m.rho_phys;
            let u = lam.powf(-g.gm1() / b) * m.u_phys;
            let mass = lam.powf(g.four_m() / b) * m.m_phys;
            prop_assert!(((a.rho_phys - rho) / rho).abs() < 1e-9);
            prop_assert!(((a.u_phys - u) / u).abs() < 1e-9);
            prop_assert!(((a.m_phys - mass) / mass).abs() < 1e-9);
        }
    }

    #[test]
    fn profile_csv_round_trips(rows in prop::collection::vec((1e-6f64..1e6, 1e-12f64..1e3, -1.0f64..2.0), 1..50)) {
        let g = gamma();
        let samples: Vec<Sample> = rows.iter().map(|&(y, r, w)| Sample::new(y, FlowState::new(r, w), g)).collect();
        let bytes = io::profile_csv(&samples).unwrap();
        let header = std::str::from_utf8(&bytes).unwrap().lines().next().unwrap().to_string();
        prop_assert_eq!(header, io::PROFILE_HEADER.join(","));
        let back = io::parse_profile_csv(&bytes).unwrap();
        prop_assert_eq!(back.len(), samples.len());
        for (a, b) in samples.iter().zip(&back) {
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn atomic_write_replaces_whole_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let g = gamma();
    let s: Vec<Sample> = (1..5)
        .map(|i| Sample::new(i as f64, model::far_field_state(i as f64, g), g))
        .collect();
    io::write_profile_csv(&path, &s).unwrap();
    io::write_profile_csv(&path, &s[..2]).unwrap();
    assert_eq!(io::read_profile_csv(&path).unwrap().len(), 2);
    assert_eq!(
        std::fs::read_dir(dir.path()).unwrap().count(),
        1,
        "no temporary files left behind"
    );
}

#[test]
fn json_carries_the_schema_version() {
    let body = serde_json::json!({ "y_star_bar": 2.3 });
    let v: serde_json::Value = serde_json::from_slice(&io::json_bytes(&body).unwrap()).unwrap();
    assert_eq!(v["schema_version"], io::SCHEMA_VERSION);
    assert_eq!(v["y_star_bar"], 2.3);
}

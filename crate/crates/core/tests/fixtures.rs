use torsionlab::fixtures::{load_fixture, run_fixture_claims, FIXTURE_NAMES};

#[test]
fn every_fixture_claim_passes() {
    let mut failures = Vec::new();
    for name in FIXTURE_NAMES {
        let started = std::time::Instant::now();
        let report = run_fixture_claims(&load_fixture(name).unwrap());
        eprintln!("{name}: {}/{} in {:.2?}", report.passed, report.claims.len(), started.elapsed());
        for c in report.claims.iter().filter(|c| !c.passed) {
            failures.push(format!("{name}/{}: expected {:?}, got {:?} {:?}", c.id, c.expected, c.computed, c.error));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn reports_are_reproducible() {
    for name in FIXTURE_NAMES.iter().filter(|n| **n != "ex5_sin2_genfunc") {
        let s = load_fixture(name).unwrap();
        let a = run_fixture_claims(&s);
        let b = run_fixture_claims(&load_fixture(name).unwrap());
        assert_eq!(format!("{a:?}"), format!("{b:?}"), "{name}");
    }
}

#[test]
fn pinned_profiles_meet_their_constraints() {
    use torsionlab::fixtures::ex5::phi_direct;
    assert!(torsionlab::fixtures::ex4_phi_constraints_hold(10_000));
    assert!(torsionlab::fixtures::ex5_phi_constraints_hold(10_000));
    // Zero mean by plain quadrature of the closed form.
    let n = 20_000;
    let h = 1.0 / n as f64;
    let mean: f64 = (0..n).map(|k| phi_direct((k as f64 + 0.5) * h)).sum::<f64>() * h;
    assert!(mean.abs() < 1e-8, "{mean}");
}

#[test]
fn escape_samples_follow_the_closed_form() {
    use torsionlab::rotation::rotation_samples;
    use torsionlab::Vec2;
    let iso = load_fixture("ex3_annulus_escape").unwrap().system.isotopy.unwrap();
    for u in [0.05, 0.025] {
        let samples = rotation_samples(&iso, Vec2::ZERO, u, u / 4.0, 3, 32).unwrap();
        assert!(!samples.is_empty());
        for s in samples {
            // On the cover y = −|z|, so ρ_n = −1/y.
            assert!((s.rho - 1.0 / s.start.norm()).abs() < 1e-9);
        }
    }
}

use deltashock::presets::PRESETS;
use deltashock::verify::*;
use deltashock::*;

fn profiles() -> Vec<(&'static str, System, Profile)> {
    PRESETS
        .iter()
        .map(|p| {
            let spec: System = p.spec();
            let profile = build_profile(&spec, p.left, p.right).unwrap();
            (p.name, spec, profile)
        })
        .collect()
}

#[test]
fn mass_balance_is_exact_on_every_preset() {
    for (name, spec, profile) in profiles() {
        for (a, b, t) in [(-10.0, 10.0, 1.0), (-3.0, 4.0, 0.5), (-7.0, 7.0, 2.0)] {
            let r = mass_balance_residual(&profile, &spec, a, b, t, 1e-3).unwrap();
            assert!(r.residual < 1e-10, "{name}: {r:?}");
        }
    }
}

#[test]
fn mass_balance_rejects_intervals_that_miss_a_wave() {
    let (_, spec, profile) = profiles().remove(1);
    let err = mass_balance_residual(&profile, &spec, -1.0, 1.0, 1.0, 1e-3);
    assert!(matches!(err, Err(VerifyError::IntervalTooNarrow { .. })));
    assert!(mass_balance_residual(&profile, &spec, -1.0, 5.0, 1.0, 2.0).is_err());
}

#[test]
fn mass_balance_sees_rate_errors_one_to_one() {
    for (name, spec, profile) in profiles() {
        let base = mass_balance_residual(&profile, &spec, -10.0, 10.0, 1.0, 1e-3)
            .unwrap()
            .residual;
        for index in 0..profile.atoms.len() {
            for eps in [1e-6, 1e-3, 0.1] {
                let mut p = profile.clone();
                p.atoms[index].rate += eps;
                let r = mass_balance_residual(&p, &spec, -10.0, 10.0, 1.0, 1e-3)
                    .unwrap()
                    .residual;
                assert!((r - base - eps).abs() < 1e-10, "{name}: ε = {eps}, Δ = {}", r - base);
            }
        }
    }
}

#[test]
fn weak_residual_vanishes_on_every_preset() {
    for (name, spec, profile) in profiles() {
        let tests = BumpTest::family_for(&profile);
        let r = weak_residual(&profile, &spec, &tests, 512).unwrap();
        assert!(r.max() < 1e-6, "{name}: {r:?}");
    }
}

#[test]
fn deleting_an_atom_breaks_the_weak_form() {
    for (name, spec, profile) in profiles() {
        let tests = BumpTest::family_for(&profile);
        for index in 0..profile.atoms.len() {
            if profile.atoms[index].rate == 0.0 {
                continue;
            }
            let mut p = profile.clone();
            p.atoms.remove(index);
            let r = weak_residual(&p, &spec, &tests, 512).unwrap();
            assert!(r.v > 1e-2, "{name}: atom {index}: {r:?}");
        }
    }
}

#[test]
fn weak_residual_converges_at_fourth_order() {
    for (name, spec, profile) in profiles() {
        let tests = BumpTest::family_for(&profile);
        let ns = [32usize, 64, 128, 256, 512];
        let pts: Vec<(f64, f64)> = ns
            .iter()
            .map(|&n| {
                let r = weak_residual(&profile, &spec, &tests, n).unwrap().max();
                ((n as f64).ln(), r.ln())
            })
            .collect();
        let m = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / m, b + p.1 / m));
        let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), p| {
            (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx) * (p.0 - mx))
        });
        let order = -sxy / sxx;
        assert!((order - 4.0).abs() < 0.8, "{name}: order {order}");
    }
}

#[test]
fn residual_rejects_odd_powers_and_early_support() {
    let (_, spec, profile) = profiles().remove(0);
    let mut odd = BumpTest::new(0.0, 1.0, 1.0, 0.5);
    odd.power = 3;
    assert!(weak_residual(&profile, &spec, &[odd], 64).is_err());
    let early = BumpTest::new(0.0, 1.0, 0.5, 0.6);
    assert!(weak_residual(&profile, &spec, &[early], 64).is_err());
}

#[test]
fn profiles_are_exactly_self_similar() {
    for (name, _, profile) in profiles() {
        assert_eq!(self_similarity_check(&profile, 4096, 7), 0.0, "{name}");
    }
}

struct Drifting;

impl SpaceTimeField<f64> for Drifting {
    fn u(&self, x: f64, t: f64) -> f64 {
        if x < 0.5 * t + 0.1 {
            1.0
        } else {
            0.0
        }
    }
    fn v(&self, _: f64, _: f64) -> f64 {
        0.0
    }
}

#[test]
fn self_similarity_check_detects_a_shifted_front() {
    assert!(self_similarity_check(&Drifting, 4096, 7) > 0.5);
}

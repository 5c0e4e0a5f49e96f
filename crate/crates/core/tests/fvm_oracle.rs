use deltashock::fvm::*;
use deltashock::presets::{preset, DOUBLE_WELL_STATE};
use deltashock::*;

const CFL: f64 = 0.45;

fn late_samples() -> Vec<f64> {
    (0..=20).map(|i| 0.5 + 0.025 * f64::from(i)).collect()
}

struct Run {
    grid: Grid,
    profile: Profile,
    evolution: Evolution<f64>,
}

fn run(name: &str, cells: usize) -> Run {
    let p = preset(name).unwrap();
    let spec: System = p.spec();
    let profile = build_profile(&spec, p.left, p.right).unwrap();
    let grid = Grid::new(p.domain.0, p.domain.1, cells, CFL, 1.0).unwrap();
    grid.check_speeds(&profile.breakpoints(), 20.0 * grid.dx()).unwrap();
    let u = UField::riemann(spec.u_flux.clone(), p.left.u, p.right.u, &grid);
    let evolution = evolve_v(u, spec.v_flux, p.left.v, p.right.v, &grid, &late_samples()).unwrap();
    Run {
        grid,
        profile,
        evolution,
    }
}

fn rate(run: &Run, atom: usize, background: Background<'_, f64>) -> f64 {
    let sigma = run.profile.atoms[atom].speed;
    let window = default_window_cells(run.grid.cells);
    measure_spike(&run.evolution, sigma, background, window)
        .unwrap()
        .fitted_rate
}

fn within(measured: f64, expected: f64, rel: f64) -> bool {
    (measured - expected).abs() <= rel * expected.abs()
}

#[test]
fn burgers_shock_lands_at_average_speed() {
    let grid = Grid::new(-1.0, 3.0, 2000, CFL, 1.0).unwrap();
    let e = evolve_u(&Flux::burgers(), 2.0, -1.0, &grid, &[]).unwrap();
    let x = crossing_positions(&grid, &e.last().u, 0.5);
    assert_eq!(x.len(), 1);
    assert!((x[0] - 1.0).abs() <= 2.0 * grid.dx(), "{x:?}");
}

#[test]
fn constant_state_is_preserved_exactly() {
    let grid = Grid::new(-2.0, 2.0, 400, CFL, 1.0).unwrap();
    let u = UField::riemann(Flux::double_well(), 0.3, 0.3, &grid);
    let e = evolve_v(u, VFluxKind::LinearInV, -1.5, -1.5, &grid, &[]).unwrap();
    assert!(e.last().u.iter().all(|&c| c == 0.3));
    assert!(e.last().v.as_ref().unwrap().iter().all(|&c| c == -1.5));
}

#[test]
fn double_well_u_matches_the_exact_fan() {
    let p = preset("doublewell-fig2").unwrap();
    let spec: System = p.spec();
    let grid = Grid::new(-2.0, 2.0, 4000, CFL, 1.0).unwrap();
    let e = evolve_u(&spec.u_flux, p.left.u, p.right.u, &grid, &[]).unwrap();
    let u = &e.last().u;
    let level = (DOUBLE_WELL_STATE + 0.5) / 2.0;
    let left = crossing_positions(&grid, u, level);
    let right = crossing_positions(&grid, u, -level);
    assert_eq!((left.len(), right.len()), (1, 1));
    assert!((left[0] + 1.0).abs() <= 2.0 * grid.dx(), "{left:?}");
    assert!((right[0] - 1.0).abs() <= 2.0 * grid.dx(), "{right:?}");
    let l1 = l1_distance(&grid, u, -0.95, 0.95, |x| -x / 2.0);
    assert!(l1 < 1e-2, "{l1}");
}

#[test]
fn korchinski_mass_changes_only_through_the_boundaries() {
    let grid = Grid::new(-2.0, 2.0, 2000, CFL, 1.0).unwrap();
    let u = UField::riemann(Flux::burgers(), 1.0, -1.0, &grid);
    let e = evolve_v(u, VFluxKind::LinearInV, 1.0, 1.0, &grid, &[]).unwrap();
    assert!(e.max_defect_u < 1e-12 && e.max_defect_v < 1e-12);
    // initial mass 4, inflow G(U_L) − G(U_R) = 2 per unit time
    let total = total_mass(&grid, e.last().v.as_ref().unwrap());
    assert!((total - 6.0).abs() < 1e-12, "{total}");
}

#[test]
fn conservation_defect_stays_below_roundoff_on_every_preset() {
    for name in ["korchinski-fig1-left", "mod-transitional-fig1-right", "doublewell-fig2", "mod-stationary-null"] {
        let r = run(name, 1000);
        assert!(r.evolution.max_defect_u < 1e-12, "{name}");
        assert!(r.evolution.max_defect_v < 1e-12, "{name}");
    }
}

#[test]
fn one_lax_fan_region_approaches_the_ramp() {
    let r = run("mod-1lax-fig1-center", 1000);
    let v = r.evolution.last().v.clone().unwrap();
    // start past the spike window so the atom itself is not counted
    let w = (default_window_cells(1000) / 2) as f64 * r.grid.dx();
    let l1 = l1_distance(&r.grid, &v, 1.0 + w, 1.5, |x| -x / 2.0);
    assert!(l1 < 2e-2, "{l1}");
}

#[test]
fn korchinski_spike_grows_at_the_balance_rate() {
    let r = run("korchinski-fig1-left", 4000);
    for bg in [Background::Exact(&r.profile), Background::Plateau { cells: 4 }] {
        let k = rate(&r, 0, bg);
        assert!(within(k, 2.0, 0.1), "{k}");
        assert!(!within(k, -2.0, 0.1));
    }
}

#[test]
fn one_lax_spike_grows_at_the_closed_form_rate() {
    let r = run("mod-1lax-fig1-center", 1000);
    let exact = rate(&r, 0, Background::Exact(&r.profile));
    let plateau = rate(&r, 0, Background::Plateau { cells: 4 });
    assert!(within(exact, 0.75, 0.1), "{exact}");
    assert!(within(plateau, 0.75, 0.1), "{plateau}");
    assert!(within(plateau, exact, 0.1));
}

#[test]
fn two_lax_spike_grows_at_the_closed_form_rate() {
    let r = run("mod-2lax-mirrored", 1000);
    let k = rate(&r, 0, Background::Exact(&r.profile));
    assert!(within(k, 1.875, 0.1), "{k}");
}

#[test]
fn stationary_null_case_grows_no_spike() {
    let r = run("mod-stationary-null", 4000);
    for bg in [Background::Exact(&r.profile), Background::Plateau { cells: 4 }] {
        let k = rate(&r, 0, bg);
        assert!(k.abs() < 0.05 * 0.75, "{k}");
    }
}

#[test]
fn spike_error_shrinks_with_resolution() {
    let errs: Vec<f64> = [1000, 2000, 4000, 8000]
        .iter()
        .map(|&n| {
            let r = run("korchinski-fig1-left", n);
            (rate(&r, 0, Background::Exact(&r.profile)) - 2.0).abs()
        })
        .collect();
    for pair in errs.windows(2) {
        assert!(pair[1] <= pair[0] + 0.05 * 2.0, "{errs:?}");
    }
    let errs: Vec<f64> = [200, 400, 800]
        .iter()
        .map(|&n| {
            let r = run("mod-1lax-fig1-center", n);
            (rate(&r, 0, Background::Exact(&r.profile)) - 0.75).abs()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn window_touching_the_boundary_is_reported() {
    let r = run("korchinski-fig1-left", 400);
    let err = measure_spike(&r.evolution, 0.0, Background::Exact(&r.profile), 404);
    assert!(matches!(err, Err(FvmError::WindowClipped { .. })));
    let err = measure_spike(&r.evolution, 1.95, Background::Exact(&r.profile), 20);
    assert!(matches!(err, Err(FvmError::WindowClipped { .. })));
}

#[test]
fn invalid_grids_and_unbounded_speeds_are_rejected() {
    assert!(matches!(Grid::new(-1.0, 1.0, 99, CFL, 1.0), Err(FvmError::InvalidGrid(_))));
    assert!(Grid::new(-1.0, 1.0, 1000, 1.0, 1.0).is_err());
    assert!(Grid::new(-1.0, 1.0, 1000, CFL, 0.0).is_err());
    let grid = Grid::new(-1.0, 1.0, 200, CFL, 1.0).unwrap();
    assert!(grid.check_speeds(&[1.0], 0.0).is_err());
    let u = UField::riemann(Flux::burgers(), 2.0, -1.0, &grid);
    let err = evolve_v(u, VFluxKind::QuadraticInV, f64::MAX, 0.0, &grid, &[]);
    assert!(matches!(err, Err(FvmError::CflViolation { .. })));
}

/// The upwind scheme converges to the delta-free solution of the double-well
/// problem: `v` crosses both `u`-shocks (characteristics of speed `u` pass
/// through them) and piles up as `C·|ξ|^{-1/3}` inside the fan, with
/// `C = 2(u_L + 1)/3` fixed by mass balance.
#[test]
fn double_well_upwind_limit_is_the_delta_free_solution() {
    let r = run("doublewell-fig2", 4000);
    let c = 2.0 * (DOUBLE_WELL_STATE + 1.0) / 3.0;
    let v = r.evolution.last().v.clone().unwrap();
    let reference = |x: f64| c * x.abs().powf(-1.0 / 3.0);
    let l1 = l1_distance(&r.grid, &v, -0.9, -0.1, reference)
        + l1_distance(&r.grid, &v, 0.1, 0.9, reference);
    assert!(l1 < 2e-2, "{l1}");
    for atom in 0..2 {
        let k = rate(&r, atom, Background::Exact(&r.profile));
        assert!(k.abs() < 0.05, "{k}");
    }
}

/// The transitional data admit a classical solution: a `v`-shock from 1/8 to
/// `(1 − √3)/4` in the `u = 2` region, then an ordinary `u`-shock at σ = 1
/// satisfying `σ[v] = [u v²]`. The scheme selects it.
#[test]
fn transitional_upwind_limit_is_the_classical_solution() {
    let r = run("mod-transitional-fig1-right", 1600);
    let plateau = (1.0 - 3f64.sqrt()) / 4.0;
    // σ[v] = [u v²] across the u-shock with v₊ = −1/2
    assert!(((-0.5 - plateau) - (-0.25 - 2.0 * plateau * plateau)).abs() < 1e-15);
    let v_shock = 2.0 * (0.125 + plateau);
    let v = r.evolution.last().v.clone().unwrap();
    let l1 = l1_distance(&r.grid, &v, v_shock + 0.05, 0.95, |_| plateau);
    assert!(l1 < 5e-3, "{l1}");
    let k = rate(&r, 0, Background::Exact(&r.profile));
    assert!(k.abs() < 0.01, "{k}");
}

#[test]
#[ignore = "fails: the scheme converges to the delta-free solution (see the test above)"]
fn double_well_spikes_grow_at_the_closed_form_rate() {
    let r = run("doublewell-fig2", 4000);
    for atom in 0..2 {
        let k = rate(&r, atom, Background::Exact(&r.profile));
        assert!(within(k, 1.0 + DOUBLE_WELL_STATE, 0.1), "atom {atom}: {k}");
    }
    let v = r.evolution.last().v.clone().unwrap();
    let w = default_window_cells(4000) as f64 * r.grid.dx();
    let l1 = l1_distance(&r.grid, &v, -1.0 + w, 1.0 - w, |_| 0.0);
    assert!(l1 < 2e-2, "{l1}");
}

#[test]
#[ignore = "fails: the scheme converges to the classical solution (see the test above)"]
fn transitional_spike_grows_at_the_closed_form_rate() {
    let r = run("mod-transitional-fig1-right", 1000);
    let k = rate(&r, 0, Background::Exact(&r.profile));
    assert!(within(k, -0.375, 0.1), "{k}");
}

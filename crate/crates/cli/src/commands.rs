//! Command bodies. Each returns the report text and whether every check passed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use deltashock::fvm::{self, Background, Grid1D, UField};
use deltashock::presets::{self, PRESETS};
use deltashock::scalar::tangency_points;
use deltashock::verify::{self, BumpTest};
use deltashock::{
    build_profile, oleinik_check, transport_speeds, ElementaryWave, Profile, System, VBranch,
};

use crate::scenario::{BackgroundName, FvmSpec, Scenario};

pub struct Outcome {
    pub report: String,
    pub passed: bool,
}

/// Fixed 17-significant-digit rendering used in every table.
pub fn num(x: f64) -> String {
    // collapse -0.0 so stationary waves print the same either way
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn solve_profile(scenario: &Scenario) -> Result<(System, Profile)> {
    let spec = scenario.system_spec()?;
    let profile = build_profile(&spec, scenario.left_state(), scenario.right_state())
        .context("no supported solution for this scenario")?;
    Ok((spec, profile))
}

/// Half-width in `ξ` that contains every wave, with room to spare.
fn xi_extent(profile: &Profile) -> f64 {
    let widest = profile
        .breakpoints()
        .iter()
        .fold(0.0f64, |m, &xi| m.max(xi.abs()));
    (1.5 * widest).max(1.0)
}

fn write_header(out: &mut String, scenario: &Scenario, spec: &System) {
    if let Some(name) = &scenario.name {
        let _ = writeln!(out, "scenario {name}");
    }
    let _ = writeln!(
        out,
        "system {} (v-flux {})",
        format!("{:?}", scenario.system).to_lowercase(),
        spec.v_flux.name()
    );
    let _ = writeln!(out, "left  u {} v {}", num(scenario.left.u), num(scenario.left.v));
    let _ = writeln!(out, "right u {} v {}", num(scenario.right.u), num(scenario.right.v));
}

fn sample_table(profile: &Profile, t: f64, samples: usize) -> Vec<(f64, f64, f64)> {
    let half = xi_extent(profile) * t;
    (0..samples)
        .map(|i| {
            let x = -half + 2.0 * half * i as f64 / (samples - 1) as f64;
            (x, profile.u_at_point(x, t), profile.v_at_point(x, t))
        })
        .collect()
}

pub fn solve(scenario: &Scenario, time: Option<f64>, out_dir: Option<&Path>) -> Result<Outcome> {
    let (spec, profile) = solve_profile(scenario)?;
    let t = time.unwrap_or(scenario.output.time);
    anyhow::ensure!(t > 0.0, "--time must be positive");
    let mut out = String::new();
    write_header(&mut out, scenario, &spec);

    let _ = writeln!(out, "\n[u-fan]");
    if profile.u_fan.is_empty() {
        let _ = writeln!(out, "constant");
    }
    for wave in profile.u_fan.waves() {
        match *wave {
            ElementaryWave::Shock { left, right, speed } => {
                let _ = writeln!(out, "shock       {} -> {} speed {}", num(left), num(right), num(speed));
            }
            ElementaryWave::Rarefaction {
                left,
                right,
                from_speed,
                to_speed,
                ..
            } => {
                let _ = writeln!(
                    out,
                    "rarefaction {} -> {} speeds {} .. {}",
                    num(left),
                    num(right),
                    num(from_speed),
                    num(to_speed)
                );
            }
        }
    }
    for tp in tangency_points(&spec.u_flux, &profile.u_fan) {
        let _ = writeln!(
            out,
            "tangency    state {} slope {} chord-end {}",
            num(tp.state),
            num(tp.slope),
            num(tp.endpoint)
        );
    }

    let _ = writeln!(out, "\n[v-branches]");
    for seg in &profile.v_segments {
        let branch = match seg.branch {
            VBranch::Constant(c) => format!("constant {}", num(c)),
            VBranch::Ramp { u } => format!("ramp xi/(2u), u = {}", num(u)),
            VBranch::Zero => "zero".to_string(),
        };
        let _ = writeln!(out, "{} < xi <= {}: {branch}", num(seg.from), num(seg.to));
    }

    let lambda_l = spec.v_flux.g_v(scenario.left.u, scenario.left.v);
    let lambda_r = spec.v_flux.g_v(scenario.right.u, scenario.right.v);
    let _ = writeln!(out, "\n[atoms]");
    for atom in &profile.atoms {
        let _ = writeln!(
            out,
            "speed {} rate {} class {}",
            num(atom.speed),
            num(atom.rate),
            atom.class
        );
        let _ = writeln!(
            out,
            "  traces left ({}, {}) right ({}, {})",
            num(atom.left_trace.u),
            num(atom.left_trace.v),
            num(atom.right_trace.u),
            num(atom.right_trace.v)
        );
        let sl = transport_speeds(atom.left_trace, &spec.u_flux, spec.v_flux);
        let sr = transport_speeds(atom.right_trace, &spec.u_flux, spec.v_flux);
        let _ = writeln!(
            out,
            "  trace speeds left (v {}, u {}) right (v {}, u {})",
            num(sl.v_family),
            num(sl.u_family),
            num(sr.v_family),
            num(sr.u_family)
        );
        let cmp = |a: f64, b: f64| if a < b { "<" } else if a > b { ">" } else { "=" };
        let _ = writeln!(
            out,
            "  thresholds lambda_L {} {} sigma, lambda_R {} {} sigma",
            num(lambda_l),
            cmp(lambda_l, atom.speed),
            num(lambda_r),
            cmp(lambda_r, atom.speed)
        );
    }
    if profile.atoms.is_empty() {
        let _ = writeln!(out, "none");
    }

    let _ = writeln!(out, "\n[profile t = {}]", num(t));
    let _ = writeln!(out, "x u v");
    let rows = sample_table(&profile, t, scenario.output.samples.min(41));
    for (x, u, v) in rows {
        let _ = writeln!(out, "{} {} {}", num(x), num(u), num(v));
    }

    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("solve.txt"), &out)?;
    }
    Ok(Outcome {
        report: out,
        passed: true,
    })
}

pub fn verify(scenario: &Scenario, tol: Option<f64>, out_dir: Option<&Path>) -> Result<Outcome> {
    let (spec, profile) = solve_profile(scenario)?;
    let mut tols = scenario.tolerances();
    if let Some(x) = tol {
        tols.weak = x;
    }
    let mut out = String::new();
    let mut all = true;
    write_header(&mut out, scenario, &spec);
    let _ = writeln!(out);

    let t = scenario.output.time;
    let half = xi_extent(&profile) * 2.0 * t + 1.0;
    let balance = verify::mass_balance_residual(&profile, &spec, -half, half, t, 1e-3 * t)?;
    let ok = balance.residual < tols.balance;
    all &= ok;
    let _ = writeln!(
        out,
        "mass balance on [{}, {}] at t {}: residual {} (tol {}) {}",
        num(-half),
        num(half),
        num(t),
        num(balance.residual),
        num(tols.balance),
        verdict(ok)
    );

    let tests = BumpTest::family_for(&profile);
    let weak = verify::weak_residual(&profile, &spec, &tests, tols.weak_points)?;
    let ok = weak.max() < tols.weak;
    all &= ok;
    let _ = writeln!(
        out,
        "weak residual (n {}, {} test functions): u {} v {} (tol {}) {}",
        tols.weak_points,
        tests.len(),
        num(weak.u),
        num(weak.v),
        num(tols.weak),
        verdict(ok)
    );

    for (index, atom) in profile.atoms.iter().enumerate() {
        if atom.rate == 0.0 {
            let _ = writeln!(out, "atom {index} has zero rate; removal check skipped");
            continue;
        }
        let mut stripped = profile.clone();
        stripped.atoms.remove(index);
        let r = verify::weak_residual(&stripped, &spec, &tests, tols.weak_points)?.max();
        let ok = r > tols.atom_removal;
        all &= ok;
        let _ = writeln!(
            out,
            "without atom {index}: weak residual {} (must exceed {}) {}",
            num(r),
            num(tols.atom_removal),
            verdict(ok)
        );
    }

    let similarity = verify::self_similarity_check(&profile, 4096, 0);
    let ok = similarity == 0.0;
    all &= ok;
    let _ = writeln!(out, "self-similarity defect {} {}", num(similarity), verdict(ok));

    let oleinik = oleinik_check(&spec.u_flux, &profile.u_fan);
    all &= oleinik.passed;
    let _ = writeln!(
        out,
        "oleinik condition ({} samples) {}",
        oleinik.samples,
        verdict(oleinik.passed)
    );

    let rh = profile
        .u_fan
        .shocks()
        .map(|w| w.rankine_hugoniot_defect(&spec.u_flux))
        .fold(0.0f64, f64::max);
    let ok = rh < 1e-12;
    all &= ok;
    let _ = writeln!(out, "rankine-hugoniot defect {} {}", num(rh), verdict(ok));
    let _ = writeln!(out, "overall {}", verdict(all));

    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("verify.txt"), &out)?;
    }
    Ok(Outcome {
        report: out,
        passed: all,
    })
}

pub fn fvm(
    scenario: &Scenario,
    cells: Option<usize>,
    time: Option<f64>,
    tol: Option<f64>,
    out_dir: Option<&Path>,
) -> Result<Outcome> {
    let (spec, profile) = solve_profile(scenario)?;
    let mut cfg = scenario.fvm.clone().unwrap_or_default();
    if let Some(n) = cells {
        cfg.cells = vec![n];
    }
    if let Some(t) = time {
        cfg.end_time = t;
    }
    let rate_tol = tol.unwrap_or(scenario.tolerances().rate);
    let mut out = String::new();
    let mut all = true;
    write_header(&mut out, scenario, &spec);

    let mut series = String::new();
    let mut errors: Vec<Vec<f64>> = vec![Vec::new(); profile.atoms.len()];
    for &n in &cfg.cells {
        let grid = grid_for(&cfg, &profile, n)?;
        let samples: Vec<f64> = (0..=20)
            .map(|i| cfg.end_time * (0.5 + 0.025 * f64::from(i)))
            .collect();
        let u = UField::riemann(spec.u_flux.clone(), scenario.left.u, scenario.right.u, &grid);
        let evolution =
            fvm::evolve_v(u, spec.v_flux, scenario.left.v, scenario.right.v, &grid, &samples)?;
        let _ = writeln!(
            out,
            "\ngrid [{}, {}] cells {} cfl {} T {} steps {}",
            num(grid.a),
            num(grid.b),
            grid.cells,
            num(grid.cfl),
            num(grid.end_time),
            evolution.steps
        );
        let ok = evolution.max_defect_u < 1e-12 && evolution.max_defect_v < 1e-12;
        all &= ok;
        let _ = writeln!(
            out,
            "conservation defect per step u {} v {} {}",
            num(evolution.max_defect_u),
            num(evolution.max_defect_v),
            verdict(ok)
        );
        let window = cfg
            .window_cells
            .unwrap_or_else(|| fvm::default_window_cells(n));
        for (index, atom) in profile.atoms.iter().enumerate() {
            let background = match cfg.background {
                BackgroundName::Exact => Background::Exact(&profile),
                BackgroundName::Plateau => Background::Plateau { cells: 4 },
            };
            let m = fvm::measure_spike(&evolution, atom.speed, background, window)?;
            let err = if atom.rate == 0.0 {
                m.fitted_rate.abs()
            } else {
                (m.fitted_rate - atom.rate).abs() / atom.rate.abs()
            };
            errors[index].push(err);
            let ok = err <= rate_tol;
            all &= ok;
            let _ = writeln!(
                out,
                "atom {index} speed {} rate {} fitted {} error {} (tol {}) {}",
                num(atom.speed),
                num(atom.rate),
                num(m.fitted_rate),
                num(err),
                num(rate_tol),
                verdict(ok)
            );
            for (t, mass) in m.times.iter().zip(&m.masses) {
                let _ = writeln!(series, "{n} {index} {} {}", num(*t), num(*mass));
            }
        }
    }
    if cfg.cells.len() > 1 {
        let _ = writeln!(out, "\n[convergence]");
        let _ = writeln!(out, "atom cells error");
        for (index, errs) in errors.iter().enumerate() {
            for (n, e) in cfg.cells.iter().zip(errs) {
                let _ = writeln!(out, "{index} {n} {}", num(*e));
            }
        }
    }
    let _ = writeln!(out, "overall {}", verdict(all));

    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("fvm.txt"), &out)?;
        fs::write(dir.join("spike_mass.dat"), format!("# cells atom t mass\n{series}"))?;
    }
    Ok(Outcome {
        report: out,
        passed: all,
    })
}

fn grid_for(cfg: &FvmSpec, profile: &Profile, cells: usize) -> Result<Grid1D<f64>> {
    let half = xi_extent(profile) * cfg.end_time + 0.5;
    let a = cfg.a.unwrap_or(-half);
    let b = cfg.b.unwrap_or(half);
    let grid = Grid1D::new(a, b, cells, cfg.cfl, cfg.end_time)?;
    grid.check_speeds(&profile.breakpoints(), 10.0 * grid.dx())?;
    Ok(grid)
}

pub fn figure(scenario: &Scenario, time: Option<f64>, out_dir: &Path) -> Result<Outcome> {
    let (_, profile) = solve_profile(scenario)?;
    let t = time.unwrap_or(scenario.output.time);
    anyhow::ensure!(t > 0.0, "--time must be positive");
    let mut table = String::from("# x u v\n");
    for (x, u, v) in sample_table(&profile, t, scenario.output.samples) {
        let _ = writeln!(table, "{} {} {}", num(x), num(u), num(v));
    }
    let mut atoms = String::from("# x mass\n");
    for atom in &profile.atoms {
        let mass = atom.mass_at(t)?;
        let _ = writeln!(atoms, "{} {}", num(atom.position_at(t)), num(mass));
    }
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("profile.dat"), &table)?;
    fs::write(out_dir.join("atoms.dat"), &atoms)?;
    Ok(Outcome {
        report: format!(
            "wrote {} and {}\n",
            out_dir.join("profile.dat").display(),
            out_dir.join("atoms.dat").display()
        ),
        passed: true,
    })
}

pub fn list_presets(out_dir: Option<&Path>) -> Result<Outcome> {
    let mut out = String::from("[presets]\n");
    for p in &PRESETS {
        let _ = writeln!(out, "{:28} {}", p.name, p.description);
    }
    let _ = writeln!(out, "\n[constants]");
    for (name, value) in presets::constants() {
        let _ = writeln!(out, "{name:32} {}", num(value));
    }
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        for p in &PRESETS {
            fs::write(
                dir.join(format!("{}.toml", p.name)),
                Scenario::from_preset(p).to_toml(),
            )?;
        }
        let _ = writeln!(out, "\nscenario files written to {}", dir.display());
    }
    Ok(Outcome {
        report: out,
        passed: true,
    })
}

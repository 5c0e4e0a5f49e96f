//! Finite-volume cross-check of delta-shock locations and growth rates.
//!
//! `u` is advanced with the Godunov scheme in its min/max form, valid for
//! nonconvex fluxes: the interface flux is `min f` on `[u_l, u_r]` when
//! `u_l ≤ u_r` and `max f` on `[u_r, u_l]` otherwise. `v` is advanced with the
//! same time step using the Godunov interface state `u*` (the extremizer):
//! upwinding by the sign of `u*` for `G = u·v`, local Lax–Friedrichs for
//! `G = u·v²`. Boundaries are transmissive, so boundary fluxes equal the
//! fluxes of the far-field data for as long as waves stay inside the domain.

use crate::error::FvmError;
use crate::flux::{PiecewiseQuadraticFlux, VFluxKind};
use crate::profile::SolutionProfile;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D<T> {
    pub a: T,
    pub b: T,
    pub cells: usize,
    pub cfl: T,
    pub end_time: T,
}

impl<T: Real> Grid1D<T> {
    /// Validates the grid. `x = 0` must fall on a cell edge so the Riemann
    /// jump is sharp.
    pub fn new(a: T, b: T, cells: usize, cfl: T, end_time: T) -> Result<Self, FvmError> {
        if cells < 100 {
            return Err(FvmError::InvalidGrid(format!("{cells} cells; need at least 100")));
        }
        if !(a < T::zero() && b > T::zero()) {
            return Err(FvmError::InvalidGrid("domain must straddle x = 0".into()));
        }
        if !(cfl > T::zero() && cfl < T::one()) {
            return Err(FvmError::InvalidGrid("cfl must lie in (0, 1)".into()));
        }
        if !(end_time > T::zero()) {
            return Err(FvmError::InvalidGrid("end time must be positive".into()));
        }
        let grid = Self {
            a,
            b,
            cells,
            cfl,
            end_time,
        };
        let k = -a / grid.dx();
        if (k - k.round()).abs() > T::lit(1e-9) * (T::one() + k) {
            return Err(FvmError::InvalidGrid(
                "x = 0 is not a cell edge for this domain and cell count".into(),
            ));
        }
        Ok(grid)
    }

    #[inline]
    pub fn dx(&self) -> T {
        (self.b - self.a) / T::of_usize(self.cells)
    }

    #[inline]
    pub fn center(&self, i: usize) -> T {
        self.a + self.dx() * (T::of_usize(i) + T::lit(0.5))
    }

    #[inline]
    pub fn edge(&self, i: usize) -> T {
        self.a + self.dx() * T::of_usize(i)
    }

    /// Index of the first cell right of `x = 0`.
    pub fn origin_cell(&self) -> usize {
        (-self.a / self.dx()).round().to_usize().expect("origin inside grid")
    }

    /// Checks that every wave speed keeps its front at least `margin` away
    /// from the boundaries up to the end time.
    pub fn check_speeds(&self, speeds: &[T], margin: T) -> Result<(), FvmError> {
        for &s in speeds {
            let x = s * self.end_time;
            if !(x > self.a + margin && x < self.b - margin) {
                return Err(FvmError::InvalidGrid(format!(
                    "a wave of speed {} reaches x = {} outside [{}, {}] (margin {})",
                    s.to_f64_lossy(),
                    x.to_f64_lossy(),
                    self.a.to_f64_lossy(),
                    self.b.to_f64_lossy(),
                    margin.to_f64_lossy()
                )));
            }
        }
        Ok(())
    }
}

/// Cell averages of `u` together with the flux they evolve under.
#[derive(Debug, Clone)]
pub struct UField<T> {
    pub flux: PiecewiseQuadraticFlux<T>,
    pub cells: Vec<T>,
}

impl<T: Real> UField<T> {
    /// Sharp Riemann data, jump on the cell edge at `x = 0`.
    pub fn riemann(flux: PiecewiseQuadraticFlux<T>, u_l: T, u_r: T, grid: &Grid1D<T>) -> Self {
        Self {
            flux,
            cells: riemann_cells(u_l, u_r, grid),
        }
    }

    /// Godunov interface state and flux between `ul` and `ur`.
    #[inline]
    pub fn godunov(&self, ul: T, ur: T) -> (T, T) {
        if ul <= ur {
            self.flux.extremum(ul, ur, false)
        } else {
            self.flux.extremum(ur, ul, true)
        }
    }

    /// Bound on `|f'|` over the range spanned by the cells.
    pub fn max_speed(&self) -> T {
        let (lo, hi) = min_max(&self.cells);
        let mut s = self
            .flux
            .derivative(lo)
            .abs()
            .max(self.flux.derivative(hi).abs())
            .max(self.flux.derivative_left(lo).abs())
            .max(self.flux.derivative_left(hi).abs());
        for bp in self.flux.breakpoints() {
            if bp > lo && bp < hi {
                s = s
                    .max(self.flux.derivative(bp).abs())
                    .max(self.flux.derivative_left(bp).abs());
            }
        }
        s
    }
}

fn riemann_cells<T: Real>(left: T, right: T, grid: &Grid1D<T>) -> Vec<T> {
    let split = grid.origin_cell();
    (0..grid.cells)
        .map(|i| if i < split { left } else { right })
        .collect()
}

fn min_max<T: Real>(xs: &[T]) -> (T, T) {
    xs.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub time: T,
    pub u: Vec<T>,
    pub v: Option<Vec<T>>,
}

#[derive(Debug, Clone)]
pub struct Evolution<T> {
    pub grid: Grid1D<T>,
    pub snapshots: Vec<Snapshot<T>>,
    pub steps: usize,
    /// Largest per-step `|Δ(total u) + dt·(F_b − F_a)|`.
    pub max_defect_u: T,
    /// Same for `v`; zero when `v` was not evolved.
    pub max_defect_v: T,
}

impl<T: Real> Evolution<T> {
    pub fn last(&self) -> &Snapshot<T> {
        self.snapshots.last().expect("evolution records the end time")
    }
}

/// Advances `u` alone to the grid end time, recording snapshots at
/// `sample_times` (the end time is always recorded).
pub fn evolve_u<T: Real>(
    flux: &PiecewiseQuadraticFlux<T>,
    u_l: T,
    u_r: T,
    grid: &Grid1D<T>,
    sample_times: &[T],
) -> Result<Evolution<T>, FvmError> {
    let u = UField::riemann(flux.clone(), u_l, u_r, grid);
    run(u, None, grid, sample_times)
}

/// Advances `u` (from `u_field`) and `v` together with a shared time step.
pub fn evolve_v<T: Real>(
    u_field: UField<T>,
    v_flux: VFluxKind,
    v_l: T,
    v_r: T,
    grid: &Grid1D<T>,
    sample_times: &[T],
) -> Result<Evolution<T>, FvmError> {
    if u_field.cells.len() != grid.cells {
        return Err(FvmError::InvalidGrid("u field does not match the grid".into()));
    }
    let v = riemann_cells(v_l, v_r, grid);
    run(u_field, Some((v_flux, v)), grid, sample_times)
}

fn run<T: Real>(
    mut u: UField<T>,
    mut v: Option<(VFluxKind, Vec<T>)>,
    grid: &Grid1D<T>,
    sample_times: &[T],
) -> Result<Evolution<T>, FvmError> {
    let n = grid.cells;
    let dx = grid.dx();
    let mut targets: Vec<T> = sample_times
        .iter()
        .copied()
        .filter(|&s| s > T::zero() && s < grid.end_time)
        .collect();
    targets.push(grid.end_time);
    targets.sort_by(|a, b| a.partial_cmp(b).expect("finite sample times"));
    targets.dedup();

    let mut ustar = vec![T::zero(); n + 1];
    let mut fu = vec![T::zero(); n + 1];
    let mut fv = vec![T::zero(); n + 1];
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut t = T::zero();
    let mut steps = 0usize;
    let mut max_defect_u = T::zero();
    let mut max_defect_v = T::zero();
    let mut next = 0usize;

    while next < targets.len() {
        for i in 0..=n {
            let ul = u.cells[i.saturating_sub(1)];
            let ur = u.cells[i.min(n - 1)];
            let (s, f) = u.godunov(ul, ur);
            ustar[i] = s;
            fu[i] = f;
        }
        let mut speed = u.max_speed();
        if let Some((kind, vc)) = &v {
            for i in 0..=n {
                let vl = vc[i.saturating_sub(1)];
                let vr = vc[i.min(n - 1)];
                let s = ustar[i];
                let (flux, alpha) = match kind {
                    VFluxKind::LinearInV => {
                        let upwind = if s >= T::zero() { vl } else { vr };
                        (s * upwind, s.abs())
                    }
                    VFluxKind::QuadraticInV => {
                        let alpha = kind.g_v(s, vl).abs().max(kind.g_v(s, vr).abs());
                        let central = (kind.g(s, vl) + kind.g(s, vr)) * T::lit(0.5);
                        (central - alpha * (vr - vl) * T::lit(0.5), alpha)
                    }
                };
                fv[i] = flux;
                speed = speed.max(alpha);
            }
        }
        let target = targets[next];
        let mut dt = grid.cfl * dx / speed.max(T::epsilon());
        let mut hit = false;
        if t + dt >= target {
            dt = target - t;
            hit = true;
        }
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(FvmError::CflViolation {
                t: t.to_f64_lossy(),
                dt: dt.to_f64_lossy(),
            });
        }
        let ratio = dt / dx;
        max_defect_u = max_defect_u.max(apply(&mut u.cells, &fu, ratio, dx, dt));
        if let Some((_, vc)) = &mut v {
            max_defect_v = max_defect_v.max(apply(vc, &fv, ratio, dx, dt));
        }
        t = if hit { target } else { t + dt };
        steps += 1;
        if hit {
            snapshots.push(Snapshot {
                time: t,
                u: u.cells.clone(),
                v: v.as_ref().map(|(_, vc)| vc.clone()),
            });
            next += 1;
        }
    }
    Ok(Evolution {
        grid: *grid,
        snapshots,
        steps,
        max_defect_u,
        max_defect_v,
    })
}

/// Conservative update; returns the conservation defect of the step.
fn apply<T: Real>(cells: &mut [T], flux: &[T], ratio: T, dx: T, dt: T) -> T {
    let mut change = T::zero();
    for (i, c) in cells.iter_mut().enumerate() {
        let old = *c;
        *c = old - ratio * (flux[i + 1] - flux[i]);
        change += *c - old;
    }
    let boundary = dt * (flux[0] - flux[cells.len()]);
    (change * dx - boundary).abs()
}

/// How the regular part of `v` is removed from the window mass.
#[derive(Debug, Clone, Copy)]
pub enum Background<'a, T> {
    /// Exact regular profile, integrated in closed form over the window.
    Exact(&'a SolutionProfile<T>),
    /// Straight lines fitted to `cells` cells just outside each end of the
    /// window and extrapolated up to the spike position.
    Plateau { cells: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpikeMeasurement<T> {
    pub times: Vec<T>,
    pub masses: Vec<T>,
    pub fitted_rate: T,
    pub intercept: T,
    /// RMS deviation of the masses from the fitted line.
    pub fit_residual: T,
    pub window_cells: usize,
}

/// Default window width in cells: about 1% of the domain, within `[6, 5%]`.
pub fn default_window_cells(cells: usize) -> usize {
    let w = (cells / 100).clamp(6, (cells / 20).max(6));
    w + (w % 2)
}

/// Excess `v`-mass around `x = σt` in every snapshot with `t ∈ [T/2, T]`, and
/// its least-squares growth rate.
pub fn measure_spike<T: Real>(
    evolution: &Evolution<T>,
    sigma: T,
    background: Background<'_, T>,
    window_cells: usize,
) -> Result<SpikeMeasurement<T>, FvmError> {
    let grid = &evolution.grid;
    let dx = grid.dx();
    let half = window_cells.max(6) / 2;
    let t_end = grid.end_time;
    let mut times = Vec::new();
    let mut masses = Vec::new();
    for snap in &evolution.snapshots {
        if snap.time < t_end * T::lit(0.5) - T::epsilon() {
            continue;
        }
        let Some(v) = &snap.v else {
            return Err(FvmError::TooFewSamples(0));
        };
        let t = snap.time;
        let x_spike = sigma * t;
        let center = ((x_spike - grid.a) / dx).floor();
        let first = center - T::of_usize(half);
        let last = center + T::of_usize(half);
        let pad = match background {
            Background::Exact(_) => 0,
            Background::Plateau { cells } => cells,
        };
        let lo_idx = first - T::of_usize(pad);
        let hi_idx = last + T::of_usize(pad);
        if lo_idx < T::zero() || hi_idx >= T::of_usize(grid.cells) {
            return Err(FvmError::WindowClipped {
                lo: (grid.a + first * dx).to_f64_lossy(),
                hi: (grid.a + (last + T::one()) * dx).to_f64_lossy(),
                a: grid.a.to_f64_lossy(),
                b: grid.b.to_f64_lossy(),
            });
        }
        let first = first.to_usize().expect("checked above");
        let last = last.to_usize().expect("checked above");
        let x_lo = grid.edge(first);
        let x_hi = grid.edge(last + 1);
        let raw = v[first..=last].iter().fold(T::zero(), |acc, &c| acc + c) * dx;
        let regular = match background {
            Background::Exact(profile) => profile.regular_v_mass(x_lo, x_hi, t),
            Background::Plateau { cells } => {
                let left: Vec<(T, T)> = (first - cells..first)
                    .map(|i| (grid.center(i), v[i]))
                    .collect();
                let right: Vec<(T, T)> = (last + 1..=last + cells)
                    .map(|i| (grid.center(i), v[i]))
                    .collect();
                integrate_line(fit_line(&left), x_lo, x_spike)
                    + integrate_line(fit_line(&right), x_spike, x_hi)
            }
        };
        times.push(t);
        masses.push(raw - regular);
    }
    if times.len() < 2 {
        return Err(FvmError::TooFewSamples(times.len()));
    }
    let pts: Vec<(T, T)> = times.iter().copied().zip(masses.iter().copied()).collect();
    let (intercept, slope) = fit_line(&pts);
    let rss = pts.iter().fold(T::zero(), |acc, &(t, m)| {
        let r = m - (intercept + slope * t);
        acc + r * r
    });
    Ok(SpikeMeasurement {
        fit_residual: (rss / T::of_usize(pts.len())).sqrt(),
        times,
        masses,
        fitted_rate: slope,
        intercept,
        window_cells: 2 * half + 1,
    })
}

/// Least-squares line `y = c0 + c1·x`; a constant when all `x` coincide.
fn fit_line<T: Real>(pts: &[(T, T)]) -> (T, T) {
    let n = T::of_usize(pts.len());
    let (sx, sy) = pts
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxx, sxy) = pts.iter().fold((T::zero(), T::zero()), |(a, b), &(x, y)| {
        (a + (x - mx) * (x - mx), b + (x - mx) * (y - my))
    });
    if sxx == T::zero() {
        return (my, T::zero());
    }
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

fn integrate_line<T: Real>((c0, c1): (T, T), x0: T, x1: T) -> T {
    c0 * (x1 - x0) + c1 * (x1 * x1 - x0 * x0) * T::lit(0.5)
}

/// `Σ dx·|v_i − v_exact(x_i)|` over cells whose centres lie in `(x0, x1)`.
pub fn l1_distance<T: Real>(
    grid: &Grid1D<T>,
    cells: &[T],
    x0: T,
    x1: T,
    exact: impl Fn(T) -> T,
) -> T {
    let dx = grid.dx();
    (0..grid.cells)
        .map(|i| (grid.center(i), cells[i]))
        .filter(|&(x, _)| x > x0 && x < x1)
        .fold(T::zero(), |acc, (x, c)| acc + (c - exact(x)).abs() * dx)
}

/// Total mass `dx·Σ c_i`.
pub fn total_mass<T: Real>(grid: &Grid1D<T>, cells: &[T]) -> T {
    cells.iter().fold(T::zero(), |acc, &c| acc + c) * grid.dx()
}

/// Positions where the piecewise-linear interpolant of the cell averages
/// crosses `level`, in increasing order.
pub fn crossing_positions<T: Real>(grid: &Grid1D<T>, cells: &[T], level: T) -> Vec<T> {
    let mut out = Vec::new();
    for i in 0..cells.len().saturating_sub(1) {
        let (a, b) = (cells[i] - level, cells[i + 1] - level);
        if (a < T::zero()) != (b < T::zero()) && a != b {
            let s = a / (a - b);
            out.push(grid.center(i) + grid.dx() * s);
        }
    }
    out
}

/// Midpoints of runs of cells whose neighbour difference exceeds `threshold`.
pub fn jump_positions<T: Real>(grid: &Grid1D<T>, cells: &[T], threshold: T) -> Vec<T> {
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < cells.len() {
        if (cells[i + 1] - cells[i]).abs() > threshold {
            // group consecutive steep cells into one front, report its mid edge
            let start = i;
            while i + 1 < cells.len() && (cells[i + 1] - cells[i]).abs() > threshold {
                i += 1;
            }
            let mid = (start + i + 1) as f64 * 0.5;
            out.push(grid.a + grid.dx() * T::lit(mid));
        }
        i += 1;
    }
    out
}

//! Independent checks of a [`SolutionProfile`]: interval mass balance,
//! distributional (weak-form) residuals and self-similarity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::VerifyError;
use crate::flux::{State, SystemSpec};
use crate::profile::SolutionProfile;
use crate::real::Real;

/// Mass balance of `v` on `[a, b]` around time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport<T> {
    pub a: T,
    pub b: T,
    /// `t − dt`, `t`, `t + dt`.
    pub times: [T; 3],
    /// Central-difference estimate of `d/dt ∫_a^b v dx` (atoms included).
    pub lhs: T,
    /// `G(U(a)) − G(U(b))`.
    pub rhs: T,
    pub residual: T,
}

/// Total `v`-mass on `[a, b]` at time `t`: regular branches integrated in
/// closed form plus every atom inside.
pub fn total_v_mass<T: Real>(profile: &SolutionProfile<T>, a: T, b: T, t: T) -> T {
    profile.regular_v_mass(a, b, t) + profile.atom_mass_between(a, b, t)
}

pub fn mass_balance_residual<T: Real>(
    profile: &SolutionProfile<T>,
    spec: &SystemSpec<T>,
    a: T,
    b: T,
    t: T,
    dt: T,
) -> Result<BalanceReport<T>, VerifyError> {
    if !(dt > T::zero() && t - dt > T::zero() && a < b) {
        return Err(VerifyError::InvalidInput(
            "need a < b, dt > 0 and t − dt > 0".into(),
        ));
    }
    let t_hi = t + dt;
    for xi in profile.breakpoints() {
        let position = xi * t_hi;
        if !(position > a && position < b) {
            return Err(VerifyError::IntervalTooNarrow {
                a: a.to_f64_lossy(),
                b: b.to_f64_lossy(),
                t: t_hi.to_f64_lossy(),
                position: position.to_f64_lossy(),
            });
        }
    }
    let lhs = (total_v_mass(profile, a, b, t + dt) - total_v_mass(profile, a, b, t - dt))
        / (dt + dt);
    let at = |x: T| State::new(profile.u_at_point(x, t), profile.v_at_point(x, t));
    let rhs = spec.g(at(a)) - spec.g(at(b));
    Ok(BalanceReport {
        a,
        b,
        times: [t - dt, t, t + dt],
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// Smooth compactly supported test function
/// `φ(x, t) = B((x − x_c)/h_x)·B((t − t_c)/h_t)` with `B(s) = (1 − s²)^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpTest<T> {
    pub x_center: T,
    pub x_half_width: T,
    pub t_center: T,
    pub t_half_width: T,
    /// Even exponent `p`; `φ` is `C^{p−1}`.
    pub power: u32,
}

impl<T: Real> BumpTest<T> {
    pub fn new(x_center: T, x_half_width: T, t_center: T, t_half_width: T) -> Self {
        Self {
            x_center,
            x_half_width,
            t_center,
            t_half_width,
            power: 4,
        }
    }

    fn b(&self, s: T) -> T {
        if s.abs() >= T::one() {
            return T::zero();
        }
        (T::one() - s * s).powi(self.power as i32)
    }

    fn db(&self, s: T) -> T {
        if s.abs() >= T::one() {
            return T::zero();
        }
        let p = T::lit(f64::from(self.power));
        -(p + p) * s * (T::one() - s * s).powi(self.power as i32 - 1)
    }

    pub fn value(&self, x: T, t: T) -> T {
        self.b((x - self.x_center) / self.x_half_width)
            * self.b((t - self.t_center) / self.t_half_width)
    }

    /// `(φ_x, φ_t)`.
    pub fn gradient(&self, x: T, t: T) -> (T, T) {
        let sx = (x - self.x_center) / self.x_half_width;
        let st = (t - self.t_center) / self.t_half_width;
        (
            self.db(sx) * self.b(st) / self.x_half_width,
            self.b(sx) * self.db(st) / self.t_half_width,
        )
    }

    pub fn x_support(&self) -> (T, T) {
        (
            self.x_center - self.x_half_width,
            self.x_center + self.x_half_width,
        )
    }

    pub fn t_support(&self) -> (T, T) {
        (
            self.t_center - self.t_half_width,
            self.t_center + self.t_half_width,
        )
    }

    /// A family probing every atom path, every fan interior and the origin.
    pub fn family_for(profile: &SolutionProfile<T>) -> Vec<Self> {
        let half = T::lit(0.5);
        let one = T::one();
        let mut out = Vec::new();
        for atom in &profile.atoms {
            out.push(Self::new(atom.speed, half, one, half));
        }
        for seg in &profile.v_segments {
            if seg.from.is_finite() && seg.to.is_finite() {
                let mid = (seg.from + seg.to) * half;
                out.push(Self::new(mid * T::lit(1.1), half, T::lit(1.1), T::lit(0.4)));
            }
        }
        out.push(Self::new(T::lit(0.3), T::lit(1.7), T::lit(1.05), T::lit(0.6)));
        out
    }
}

/// Weak-form residuals of the two equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakResidual<T> {
    pub u: T,
    pub v: T,
}

impl<T: Real> WeakResidual<T> {
    pub fn max(&self) -> T {
        self.u.abs().max(self.v.abs())
    }
}

/// Gauss–Legendre 2-point nodes on `[-1, 1]`.
fn gauss2<T: Real>() -> [T; 2] {
    let g = T::one() / T::lit(3.0).sqrt();
    [-g, g]
}

/// Splits `[lo, hi]` at `cuts` and distributes `panels` among the pieces in
/// proportion to their length (at least one each). Returns panel edges.
fn aligned_panels<T: Real>(lo: T, hi: T, cuts: &[T], panels: usize) -> Vec<(T, T)> {
    let mut edges = vec![lo];
    let mut inner: Vec<T> = cuts.iter().copied().filter(|&c| c > lo && c < hi).collect();
    inner.sort_by(|a, b| a.partial_cmp(b).expect("finite cuts"));
    edges.extend(inner);
    edges.push(hi);
    edges.dedup();
    let length = hi - lo;
    let mut out = Vec::with_capacity(panels + edges.len());
    for e in edges.windows(2) {
        let share = ((e[1] - e[0]) / length * T::of_usize(panels))
            .round()
            .to_usize()
            .unwrap_or(1)
            .max(1);
        let h = (e[1] - e[0]) / T::of_usize(share);
        for k in 0..share {
            let a = e[0] + h * T::of_usize(k);
            let b = if k + 1 == share { e[1] } else { a + h };
            out.push((a, b));
        }
    }
    out
}

/// Signed weak-form residuals for one test function with `n` quadrature
/// points per axis (composite 2-point Gauss–Legendre, breakpoint aligned):
///
/// `∬ (u φ_t + f(u) φ_x) dx dt` and
/// `∬ (v φ_t + G(u, v) φ_x) dx dt + Σ ∫ k(t)·(φ_t + σ φ_x)(σt, t) dt`.
pub fn weak_residual_single<T: Real>(
    profile: &SolutionProfile<T>,
    spec: &SystemSpec<T>,
    test: &BumpTest<T>,
    n: usize,
) -> WeakResidual<T> {
    let panels = (n / 2).max(1);
    let (x_lo, x_hi) = test.x_support();
    let (t_lo, t_hi) = test.t_support();
    let speeds = profile.breakpoints();
    let mut t_cuts = Vec::new();
    for &xi in &speeds {
        if xi != T::zero() {
            t_cuts.push(x_lo / xi);
            t_cuts.push(x_hi / xi);
        }
    }
    let nodes = gauss2::<T>();
    let half = T::lit(0.5);
    let mut res_u = T::zero();
    let mut res_v = T::zero();
    for (ta, tb) in aligned_panels(t_lo, t_hi, &t_cuts, panels) {
        let tw = (tb - ta) * half;
        let tm = (ta + tb) * half;
        for &gt in &nodes {
            let t = tm + tw * gt;
            let x_cuts: Vec<T> = speeds.iter().map(|&xi| xi * t).collect();
            let mut inner_u = T::zero();
            let mut inner_v = T::zero();
            for (xa, xb) in aligned_panels(x_lo, x_hi, &x_cuts, panels) {
                let xw = (xb - xa) * half;
                let xm = (xa + xb) * half;
                for &gx in &nodes {
                    let x = xm + xw * gx;
                    let (phi_x, phi_t) = test.gradient(x, t);
                    let xi = x / t;
                    let u = profile.u_at(xi);
                    let v = profile.v_at(xi);
                    inner_u += xw * (u * phi_t + spec.u_flux.value(u) * phi_x);
                    inner_v += xw * (v * phi_t + spec.v_flux.g(u, v) * phi_x);
                }
            }
            let mut line = T::zero();
            for atom in &profile.atoms {
                let (phi_x, phi_t) = test.gradient(atom.speed * t, t);
                line += atom.rate * t * (phi_t + atom.speed * phi_x);
            }
            res_u += tw * inner_u;
            res_v += tw * (inner_v + line);
        }
    }
    WeakResidual { u: res_u, v: res_v }
}

/// Largest absolute residuals over a family of test functions.
pub fn weak_residual<T: Real>(
    profile: &SolutionProfile<T>,
    spec: &SystemSpec<T>,
    tests: &[BumpTest<T>],
    n: usize,
) -> Result<WeakResidual<T>, VerifyError> {
    let mut worst = WeakResidual {
        u: T::zero(),
        v: T::zero(),
    };
    for test in tests {
        if !(test.t_support().0 > T::zero()) || test.power % 2 != 0 || test.power < 2 {
            return Err(VerifyError::InvalidInput(
                "test functions need t-support in t > 0 and an even power".into(),
            ));
        }
        let r = weak_residual_single(profile, spec, test, n);
        worst.u = worst.u.max(r.u.abs());
        worst.v = worst.v.max(r.v.abs());
    }
    Ok(worst)
}

/// A field that can be sampled at `(x, t)`.
pub trait SpaceTimeField<T> {
    fn u(&self, x: T, t: T) -> T;
    fn v(&self, x: T, t: T) -> T;
}

impl<T: Real> SpaceTimeField<T> for SolutionProfile<T> {
    fn u(&self, x: T, t: T) -> T {
        self.u_at_point(x, t)
    }
    fn v(&self, x: T, t: T) -> T {
        self.v_at_point(x, t)
    }
}

/// Largest `|w(x, t) − w(s·x, s·t)|` over `n` random samples of `u` and `v`.
///
/// Scalings are powers of two so that `x/t` is reproduced bit-for-bit and any
/// deviation reflects genuine dependence on `t` beyond `ξ`.
pub fn self_similarity_check<T: Real, F: SpaceTimeField<T>>(field: &F, n: usize, seed: u64) -> T {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = T::zero();
    for _ in 0..n.max(10) {
        let x = T::lit(rng.gen_range(-5.0..5.0));
        let t = T::lit(rng.gen_range(0.01..5.0));
        let s = T::lit(2f64.powi(rng.gen_range(-20..=20)));
        let du = (field.u(x, t) - field.u(x * s, t * s)).abs();
        let dv = (field.v(x, t) - field.v(x * s, t * s)).abs();
        worst = worst.max(du).max(dv);
    }
    worst
}

//! Full `(u, v)` self-similar profiles: regular branches plus Dirac atoms.

use std::fmt;

use crate::error::ProfileError;
use crate::fan::WaveFan;
use crate::flux::State;
use crate::real::Real;

/// Closed-form description of the regular part of `v` on one `ξ`-interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VBranch<T> {
    Constant(T),
    /// `v = ξ / (2u)`: a fan of `v_t + (u v²)_x = 0` at frozen `u`.
    Ramp { u: T },
    Zero,
}

impl<T: Real> VBranch<T> {
    #[inline]
    pub fn value(&self, xi: T) -> T {
        match *self {
            VBranch::Constant(c) => c,
            VBranch::Ramp { u } => xi / (u + u),
            VBranch::Zero => T::zero(),
        }
    }

    /// An antiderivative in `ξ`.
    #[inline]
    pub fn antiderivative(&self, xi: T) -> T {
        match *self {
            VBranch::Constant(c) => c * xi,
            VBranch::Ramp { u } => xi * xi / (T::lit(4.0) * u),
            VBranch::Zero => T::zero(),
        }
    }

    /// `∫ v(x/t) dx` over `[x0, x1]` at time `t > 0`, exact.
    pub fn integrate_x(&self, x0: T, x1: T, t: T) -> T {
        match *self {
            VBranch::Constant(c) => c * (x1 - x0),
            VBranch::Ramp { u } => (x1 * x1 - x0 * x0) / (T::lit(4.0) * u * t),
            VBranch::Zero => T::zero(),
        }
    }
}

/// A branch on `(from, to]` in `ξ`; `from = −∞` and `to = +∞` at the extremes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VSegment<T> {
    pub from: T,
    pub to: T,
    pub branch: VBranch<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ShockClass {
    Overcompressive,
    OneLax,
    TwoLax,
    Transitional,
    /// Fewer than one characteristic impinges from some side.
    NonCompressive,
    /// A speed comparison fell within tolerance of equality.
    Degenerate(String),
}

impl ShockClass {
    pub fn label(&self) -> &'static str {
        match self {
            ShockClass::Overcompressive => "overcompressive",
            ShockClass::OneLax => "1-lax",
            ShockClass::TwoLax => "2-lax",
            ShockClass::Transitional => "transitional",
            ShockClass::NonCompressive => "non-compressive",
            ShockClass::Degenerate(_) => "degenerate",
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, ShockClass::Degenerate(_))
    }
}

impl fmt::Display for ShockClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShockClass::Degenerate(why) => write!(f, "degenerate ({why})"),
            other => f.write_str(other.label()),
        }
    }
}

/// A delta shock `k'·t·δ(x − σt)` riding on a `u`-shock.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaAtom<T> {
    pub speed: T,
    pub rate: T,
    pub left_trace: State<T>,
    pub right_trace: State<T>,
    pub class: ShockClass,
}

impl<T: Real> DeltaAtom<T> {
    /// Mass `k'·t`; zero at `t = 0`.
    pub fn mass_at(&self, t: T) -> Result<T, ProfileError> {
        if t < T::zero() {
            return Err(ProfileError::NegativeTime(t.to_f64_lossy()));
        }
        Ok(self.rate * t)
    }

    pub fn position_at(&self, t: T) -> T {
        self.speed * t
    }
}

pub fn atom_mass_at<T: Real>(atom: &DeltaAtom<T>, t: T) -> Result<T, ProfileError> {
    atom.mass_at(t)
}

/// A complete self-similar solution of a Riemann problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionProfile<T> {
    pub left: State<T>,
    pub right: State<T>,
    pub u_fan: WaveFan<T>,
    pub v_segments: Vec<VSegment<T>>,
    pub atoms: Vec<DeltaAtom<T>>,
}

impl<T: Real> SolutionProfile<T> {
    /// `u` at `ξ` (left limit at discontinuities).
    pub fn u_at(&self, xi: T) -> T {
        self.u_fan.eval(xi)
    }

    /// Regular part of `v` at `ξ` (left limit at discontinuities).
    pub fn v_at(&self, xi: T) -> T {
        self.segment_at(xi).branch.value(xi)
    }

    /// Right limit of the regular part of `v` at `ξ`.
    pub fn v_right_limit(&self, xi: T) -> T {
        let seg = self
            .v_segments
            .iter()
            .find(|s| xi < s.to)
            .unwrap_or_else(|| self.v_segments.last().expect("profile has segments"));
        seg.branch.value(xi)
    }

    /// Segment whose half-open interval `(from, to]` contains `ξ`.
    pub fn segment_at(&self, xi: T) -> &VSegment<T> {
        self.v_segments
            .iter()
            .find(|s| xi <= s.to)
            .unwrap_or_else(|| self.v_segments.last().expect("profile has segments"))
    }

    pub fn u_at_point(&self, x: T, t: T) -> T {
        self.u_at(x / t)
    }

    pub fn v_at_point(&self, x: T, t: T) -> T {
        self.v_at(x / t)
    }

    /// Exact `∫ v_reg(x, t) dx` over `[x0, x1]`, atoms excluded.
    pub fn regular_v_mass(&self, x0: T, x1: T, t: T) -> T {
        let mut total = T::zero();
        for seg in &self.v_segments {
            let lo = x0.max(seg.from * t);
            let hi = x1.min(seg.to * t);
            if hi > lo {
                total += seg.branch.integrate_x(lo, hi, t);
            }
        }
        total
    }

    /// Atom mass located inside `(x0, x1)` at time `t`.
    pub fn atom_mass_between(&self, x0: T, x1: T, t: T) -> T {
        self.atoms
            .iter()
            .filter(|a| {
                let p = a.position_at(t);
                p > x0 && p < x1
            })
            .fold(T::zero(), |acc, a| acc + a.rate * t)
    }

    /// Every finite similarity speed where `u`, `v` or an atom is singular.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut out = self.u_fan.breakpoints();
        for s in &self.v_segments {
            for e in [s.from, s.to] {
                if e.is_finite() {
                    out.push(e);
                }
            }
        }
        out.extend(self.atoms.iter().map(|a| a.speed));
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite speeds"));
        out.dedup();
        out
    }
}

/// Regular part of `v` at `ξ` (left limit at discontinuities).
pub fn eval_v<T: Real>(profile: &SolutionProfile<T>, xi: T) -> T {
    profile.v_at(xi)
}

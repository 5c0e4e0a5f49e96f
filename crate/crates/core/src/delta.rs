//! Delta-shock profiles: `v`-branches, one-sided traces, amplitude rates and
//! Lax-type classification of every atom.
//!
//! Amplitudes come from the mass balance across a moving discontinuity,
//! `k' = σ·(v₊ − v₋) − (G(u₊, v₊) − G(u₋, v₋))`, evaluated with the one-sided
//! traces adjacent to the shock. Every closed-form amplitude in the supported
//! catalog is a special case of this single relation.

use crate::error::SolveError;
use crate::fan::{ElementaryWave, WaveFan};
use crate::flux::{PiecewiseQuadraticFlux, State, SystemSpec, VFluxKind};
use crate::profile::{DeltaAtom, ShockClass, SolutionProfile, VBranch, VSegment};
use crate::real::Real;
use crate::scalar::solve_scalar;

/// Tolerance for the `λ` versus `σ` comparisons that insert `v`-rarefactions.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// Default tolerance of [`classify`] inside [`build_profile`].
pub const CLASSIFY_TOL: f64 = 1e-10;

/// One-sided limits of `(u, v)` adjacent to a discontinuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePair<T> {
    pub u_left: T,
    pub v_left: T,
    pub u_right: T,
    pub v_right: T,
}

impl<T: Real> TracePair<T> {
    pub fn new(left: State<T>, right: State<T>) -> Self {
        Self {
            u_left: left.u,
            v_left: left.v,
            u_right: right.u,
            v_right: right.v,
        }
    }

    pub fn left(&self) -> State<T> {
        State::new(self.u_left, self.v_left)
    }

    pub fn right(&self) -> State<T> {
        State::new(self.u_right, self.v_right)
    }
}

/// Characteristic speeds at a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportSpeeds<T> {
    /// `G_v(u, v)`.
    pub v_family: T,
    /// `f'(u)`.
    pub u_family: T,
}

impl<T: Real> TransportSpeeds<T> {
    /// `(λ₁, λ₂)` with `λ₁ ≤ λ₂`.
    pub fn ordered(&self) -> (T, T) {
        (
            self.v_family.min(self.u_family),
            self.v_family.max(self.u_family),
        )
    }
}

pub fn transport_speeds<T: Real>(
    s: State<T>,
    u_flux: &PiecewiseQuadraticFlux<T>,
    v_flux: VFluxKind,
) -> TransportSpeeds<T> {
    TransportSpeeds {
        v_family: v_flux.g_v(s.u, s.v),
        u_family: u_flux.derivative(s.u),
    }
}

/// Growth rate `k'` of the delta mass carried by a discontinuity of speed `σ`.
pub fn amplitude_rate<T: Real>(sigma: T, traces: &TracePair<T>, v_flux: VFluxKind) -> T {
    let g_minus = v_flux.g(traces.u_left, traces.v_left);
    let g_plus = v_flux.g(traces.u_right, traces.v_right);
    sigma * (traces.v_right - traces.v_left) - (g_plus - g_minus)
}

/// Lax-type label of a discontinuity from the characteristic speeds on each
/// side. Any comparison within `tol` of equality yields `Degenerate`.
pub fn classify<T: Real>(sigma: T, left: (T, T), right: (T, T), tol: T) -> ShockClass {
    let (l1, l2) = if left.0 <= left.1 { left } else { (left.1, left.0) };
    let (r1, r2) = if right.0 <= right.1 { right } else { (right.1, right.0) };
    let named = [("λ1(U_L)", l1), ("λ2(U_L)", l2), ("λ1(U_R)", r1), ("λ2(U_R)", r2)];
    for (name, speed) in named {
        if (speed - sigma).abs() <= tol {
            return ShockClass::Degenerate(format!("{name} = σ within {:e}", tol.to_f64_lossy()));
        }
    }
    let left_in = usize::from(l1 > sigma) + usize::from(l2 > sigma);
    let right_in = usize::from(r1 < sigma) + usize::from(r2 < sigma);
    match (left_in, right_in) {
        (2, 2) => ShockClass::Overcompressive,
        (2, 1) => ShockClass::OneLax,
        (1, 2) => ShockClass::TwoLax,
        (1, 1) => ShockClass::Transitional,
        _ => ShockClass::NonCompressive,
    }
}

/// Bounded self-similar `v` inside a `u`-rarefaction for `v_t + (u v)_x = 0`.
///
/// With `u(ξ) = αξ + β` the profile equation `(u − ξ)·v' + u'·v = 0` has the
/// solutions `C·|ξ − ξ*|^{α/(1−α)}` with `ξ* = β/(1 − α)`. When `ξ*` lies in
/// the fan and the exponent is negative, only `v ≡ 0` is bounded. A
/// zero-width fan passes `edge_value` through.
pub fn middle_branch_v<T: Real>(
    wave: &ElementaryWave<T>,
    v_flux: VFluxKind,
    edge_value: T,
) -> Result<VBranch<T>, SolveError> {
    let ElementaryWave::Rarefaction {
        from_speed,
        to_speed,
        branch,
        ..
    } = *wave
    else {
        return Err(SolveError::UnsupportedScenario(
            "middle branch requested for a shock".into(),
        ));
    };
    if to_speed - from_speed <= T::geometric_tol() {
        return Ok(VBranch::Constant(edge_value));
    }
    if v_flux != VFluxKind::LinearInV {
        return Err(SolveError::UnsupportedScenario(
            "v inside a u-rarefaction is only resolved for G = u·v".into(),
        ));
    }
    let alpha = T::one() / branch.curvature();
    let beta = -branch.b * alpha;
    let span = (from_speed.to_f64_lossy(), to_speed.to_f64_lossy());
    let one = T::one();
    if (alpha - one).abs() <= T::geometric_tol() {
        if beta.abs() <= T::geometric_tol() {
            return Ok(VBranch::Zero);
        }
        return Err(SolveError::NonzeroBoundedSolution {
            from: span.0,
            to: span.1,
            family: format!("C·exp(−ξ/{})", beta.to_f64_lossy()),
        });
    }
    let singular = beta / (one - alpha);
    let exponent = alpha / (one - alpha);
    let inside = singular >= from_speed && singular <= to_speed;
    if inside && exponent < T::zero() {
        Ok(VBranch::Zero)
    } else {
        Err(SolveError::NonzeroBoundedSolution {
            from: span.0,
            to: span.1,
            family: format!(
                "C·|ξ − {}|^{}",
                singular.to_f64_lossy(),
                exponent.to_f64_lossy()
            ),
        })
    }
}

/// Builds the full self-similar solution of the Riemann problem `(left, right)`.
///
/// Supported catalog:
/// * `u_L = u_R`: `v` solves its own Riemann problem at frozen `u`, no atoms;
/// * `u_L > u_R`, `G = u·v`: any fan of shocks separated by rarefactions, with
///   `v` constant outside and the bounded branch inside each rarefaction; an
///   atom on every shock;
/// * `u_L > u_R`, `G = u·v²`: a single `u`-shock with `v`-rarefactions inserted
///   where `λ_L < σ` or `λ_R > σ`, and one atom.
pub fn build_profile<T: Real>(
    spec: &SystemSpec<T>,
    left: State<T>,
    right: State<T>,
) -> Result<SolutionProfile<T>, SolveError> {
    if !(left.is_finite() && right.is_finite()) {
        return Err(SolveError::UnsupportedScenario("non-finite data".into()));
    }
    let fan = solve_scalar(&spec.u_flux, left.u, right.u)?;
    if fan.is_empty() {
        return frozen_u_profile(spec, left, right, fan);
    }
    if left.u < right.u {
        return Err(SolveError::UnsupportedScenario(
            "delta-shock profiles require u_L > u_R".into(),
        ));
    }
    match spec.v_flux {
        VFluxKind::LinearInV => linear_transport_profile(spec, left, right, fan),
        VFluxKind::QuadraticInV => quadratic_single_shock_profile(spec, left, right, fan),
    }
}

fn frozen_u_profile<T: Real>(
    spec: &SystemSpec<T>,
    left: State<T>,
    right: State<T>,
    fan: WaveFan<T>,
) -> Result<SolutionProfile<T>, SolveError> {
    let u = left.u;
    let v_flux = PiecewiseQuadraticFlux::quadratic(
        match spec.v_flux {
            VFluxKind::LinearInV => T::zero(),
            VFluxKind::QuadraticInV => u,
        },
        match spec.v_flux {
            VFluxKind::LinearInV => u,
            VFluxKind::QuadraticInV => T::zero(),
        },
        T::zero(),
    );
    let v_fan = solve_scalar(&v_flux, left.v, right.v)?;
    let mut segments = Vec::new();
    let mut from = T::neg_infinity();
    let mut current = left.v;
    for w in v_fan.waves() {
        match *w {
            ElementaryWave::Shock { right, speed, .. } => {
                segments.push(VSegment {
                    from,
                    to: speed,
                    branch: VBranch::Constant(current),
                });
                from = speed;
                current = right;
            }
            ElementaryWave::Rarefaction {
                right,
                from_speed,
                to_speed,
                ..
            } => {
                segments.push(VSegment {
                    from,
                    to: from_speed,
                    branch: VBranch::Constant(current),
                });
                segments.push(VSegment {
                    from: from_speed,
                    to: to_speed,
                    branch: VBranch::Ramp { u },
                });
                from = to_speed;
                current = right;
            }
        }
    }
    segments.push(VSegment {
        from,
        to: T::infinity(),
        branch: VBranch::Constant(current),
    });
    Ok(SolutionProfile {
        left,
        right,
        u_fan: fan,
        v_segments: segments,
        atoms: Vec::new(),
    })
}

fn linear_transport_profile<T: Real>(
    spec: &SystemSpec<T>,
    left: State<T>,
    right: State<T>,
    fan: WaveFan<T>,
) -> Result<SolutionProfile<T>, SolveError> {
    let waves = fan.waves();
    let tol = T::geometric_tol();
    // regular v on each region between and inside waves, plus which region
    // boundaries carry a shock
    let mut segments: Vec<VSegment<T>> = Vec::new();
    let mut from = T::neg_infinity();
    let mut current = VBranch::Constant(left.v);
    for (i, w) in waves.iter().enumerate() {
        if w.is_shock() && waves.get(i + 1).is_some_and(|n| n.is_shock()) {
            return Err(SolveError::UnsupportedScenario(
                "consecutive u-shocks leave an intermediate state whose v is undetermined".into(),
            ));
        }
        match *w {
            ElementaryWave::Shock { speed, .. } => {
                segments.push(VSegment {
                    from,
                    to: speed,
                    branch: current,
                });
                from = speed;
                current = VBranch::Constant(right.v);
            }
            ElementaryWave::Rarefaction {
                from_speed,
                to_speed,
                ..
            } => {
                let inner = middle_branch_v(w, spec.v_flux, current.value(from_speed))?;
                let start = from_speed.max(from);
                segments.push(VSegment {
                    from,
                    to: start,
                    branch: current,
                });
                segments.push(VSegment {
                    from: start,
                    to: to_speed,
                    branch: inner,
                });
                from = to_speed;
                // continue the fan's edge value up to a following tangential shock
                current = VBranch::Constant(inner.value(to_speed));
            }
        }
    }
    segments.push(VSegment {
        from,
        to: T::infinity(),
        branch: VBranch::Constant(right.v),
    });
    segments.retain(|s| s.to > s.from);

    // jumps in v are only admissible where a u-shock can host the defect
    let shock_speeds: Vec<T> = fan.shocks().map(|w| w.start_speed()).collect();
    for pair in segments.windows(2) {
        let at = pair[0].to;
        let hosted = shock_speeds
            .iter()
            .any(|&s| (s - at).abs() <= tol * (T::one() + s.abs()));
        let jump = pair[1].branch.value(at) - pair[0].branch.value(at);
        if !hosted && jump.abs() > tol * (T::one() + pair[0].branch.value(at).abs()) {
            return Err(SolveError::InconsistentFan(format!(
                "v jumps by {} at ξ = {} where u has no shock",
                jump.to_f64_lossy(),
                at.to_f64_lossy()
            )));
        }
    }

    let mut profile = SolutionProfile {
        left,
        right,
        u_fan: fan,
        v_segments: segments,
        atoms: Vec::new(),
    };
    attach_atoms(spec, &mut profile)?;
    Ok(profile)
}

fn quadratic_single_shock_profile<T: Real>(
    spec: &SystemSpec<T>,
    left: State<T>,
    right: State<T>,
    fan: WaveFan<T>,
) -> Result<SolutionProfile<T>, SolveError> {
    let sigma = match fan.waves() {
        [ElementaryWave::Shock { speed, .. }] => *speed,
        _ => {
            return Err(SolveError::UnsupportedScenario(
                "G = u·v² is supported for a single u-shock only".into(),
            ))
        }
    };
    let tol = T::lit(THRESHOLD_TOL);
    let lambda_l = spec.v_flux.g_v(left.u, left.v);
    let lambda_r = spec.v_flux.g_v(right.u, right.v);
    let mut segments = Vec::with_capacity(4);
    if lambda_l < sigma - tol {
        segments.push(VSegment {
            from: T::neg_infinity(),
            to: lambda_l,
            branch: VBranch::Constant(left.v),
        });
        segments.push(VSegment {
            from: lambda_l,
            to: sigma,
            branch: VBranch::Ramp { u: left.u },
        });
    } else {
        segments.push(VSegment {
            from: T::neg_infinity(),
            to: sigma,
            branch: VBranch::Constant(left.v),
        });
    }
    if lambda_r > sigma + tol {
        segments.push(VSegment {
            from: sigma,
            to: lambda_r,
            branch: VBranch::Ramp { u: right.u },
        });
        segments.push(VSegment {
            from: lambda_r,
            to: T::infinity(),
            branch: VBranch::Constant(right.v),
        });
    } else {
        segments.push(VSegment {
            from: sigma,
            to: T::infinity(),
            branch: VBranch::Constant(right.v),
        });
    }
    let mut profile = SolutionProfile {
        left,
        right,
        u_fan: fan,
        v_segments: segments,
        atoms: Vec::new(),
    };
    attach_atoms(spec, &mut profile)?;
    Ok(profile)
}

/// Adds one atom per `u`-shock with rate from [`amplitude_rate`] and label
/// from [`classify`].
///
/// Classification reads speeds at the adjacent trace on each side, except
/// where the adjacent region is a `v`-rarefaction: there the constant state
/// the fan emanates from is used, since every point of such a fan is
/// characteristic at its own speed.
fn attach_atoms<T: Real>(
    spec: &SystemSpec<T>,
    profile: &mut SolutionProfile<T>,
) -> Result<(), SolveError> {
    let shocks: Vec<(T, T, T)> = profile
        .u_fan
        .shocks()
        .map(|w| (w.left(), w.right(), w.start_speed()))
        .collect();
    if shocks.is_empty() {
        return Err(SolveError::InconsistentFan(
            "no u-shock to host a delta".into(),
        ));
    }
    let mut atoms = Vec::with_capacity(shocks.len());
    for (u_minus, u_plus, sigma) in shocks {
        let left_seg = *profile.segment_at(sigma);
        let right_seg = *profile
            .v_segments
            .iter()
            .find(|s| sigma < s.to)
            .unwrap_or(&left_seg);
        let traces = TracePair {
            u_left: u_minus,
            v_left: left_seg.branch.value(sigma),
            u_right: u_plus,
            v_right: right_seg.branch.value(sigma),
        };
        let rate = amplitude_rate(sigma, &traces, spec.v_flux);
        let class_left = match left_seg.branch {
            VBranch::Ramp { .. } => profile.left,
            _ => traces.left(),
        };
        let class_right = match right_seg.branch {
            VBranch::Ramp { .. } => profile.right,
            _ => traces.right(),
        };
        let sl = transport_speeds(class_left, &spec.u_flux, spec.v_flux);
        let sr = transport_speeds(class_right, &spec.u_flux, spec.v_flux);
        let class = classify(sigma, sl.ordered(), sr.ordered(), T::lit(CLASSIFY_TOL));
        atoms.push(DeltaAtom {
            speed: sigma,
            rate,
            left_trace: traces.left(),
            right_trace: traces.right(),
            class,
        });
    }
    profile.atoms = atoms;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::QuadraticPiece;

    fn st(u: f64, v: f64) -> State<f64> {
        State::new(u, v)
    }

    #[test]
    fn transport_speed_examples() {
        let burgers = PiecewiseQuadraticFlux::burgers();
        let s = transport_speeds(st(2.0, 1.0), &burgers, VFluxKind::QuadraticInV);
        assert_eq!(s.v_family, 4.0);
        assert_eq!(s.u_family, 4.0);
        let s = transport_speeds(st(-0.7, 3.0), &burgers, VFluxKind::LinearInV);
        assert_eq!(s.v_family, -0.7);
        let s = transport_speeds(st(5.0, 0.0), &burgers, VFluxKind::QuadraticInV);
        assert_eq!(s.v_family, 0.0);
    }

    #[test]
    fn amplitude_rate_examples() {
        let kor = TracePair::new(st(1.0, 1.0), st(-1.0, 1.0));
        assert_eq!(amplitude_rate(0.0, &kor, VFluxKind::LinearInV), 2.0);

        let one_lax = TracePair::new(st(2.0, 1.0), st(-1.0, -0.5));
        assert_eq!(amplitude_rate(1.0, &one_lax, VFluxKind::QuadraticInV), 0.75);

        let transitional = TracePair::new(st(2.0, 0.25), st(-1.0, -0.5));
        assert_eq!(
            amplitude_rate(1.0, &transitional, VFluxKind::QuadraticInV),
            -0.375
        );

        // stationary shock, antisymmetric traces σ/(2u) = 0 on both sides
        let stationary = TracePair::new(st(1.0, 0.0), st(-1.0, 0.0));
        assert_eq!(amplitude_rate(0.0, &stationary, VFluxKind::QuadraticInV), 0.0);
        assert_eq!(amplitude_rate(0.0, &stationary, VFluxKind::LinearInV), 0.0);
    }

    #[test]
    fn classification_patterns() {
        assert_eq!(
            classify(0.0, (2.0, 1.0), (-2.0, -1.0), 1e-10),
            ShockClass::Overcompressive
        );
        assert_eq!(
            classify(1.0, (4.0, 4.0), (-2.0, 1.5), 1e-10),
            ShockClass::OneLax
        );
        assert_eq!(
            classify(1.0, (4.0, 0.5), (-2.0, 1.5), 1e-10),
            ShockClass::Transitional
        );
        assert_eq!(
            classify(1.0, (4.0, 0.5), (-2.0, -2.0), 1e-10),
            ShockClass::TwoLax
        );
        assert_eq!(
            classify(1.0, (0.5, 0.2), (-2.0, -2.0), 1e-10),
            ShockClass::NonCompressive
        );
        assert!(classify(1.0, (4.0, 1.0 + 1e-12), (-2.0, 1.5), 1e-10).is_degenerate());
    }

    #[test]
    fn middle_branch_cases() {
        let middle = ElementaryWave::Rarefaction {
            left: 0.5,
            right: -0.5,
            from_speed: -1.0,
            to_speed: 1.0,
            branch: QuadraticPiece::new(-1.0, 0.0, 1.0),
        };
        assert_eq!(
            middle_branch_v(&middle, VFluxKind::LinearInV, 7.0).unwrap(),
            VBranch::Zero
        );

        let flat = ElementaryWave::Rarefaction {
            left: 0.5,
            right: 0.5,
            from_speed: 1.0,
            to_speed: 1.0,
            branch: QuadraticPiece::new(1.0, 0.0, 0.0),
        };
        assert_eq!(
            middle_branch_v(&flat, VFluxKind::LinearInV, 3.0).unwrap(),
            VBranch::Constant(3.0)
        );

        // u = ξ/2 from the convex u² fan: v = C·ξ is bounded, which is reported
        let convex = ElementaryWave::Rarefaction {
            left: -1.0,
            right: 2.0,
            from_speed: -2.0,
            to_speed: 4.0,
            branch: QuadraticPiece::new(1.0, 0.0, 0.0),
        };
        assert!(matches!(
            middle_branch_v(&convex, VFluxKind::LinearInV, 1.0),
            Err(SolveError::NonzeroBoundedSolution { .. })
        ));
    }

    #[test]
    fn constant_u_data_have_no_atoms() {
        let p = build_profile(&SystemSpec::korchinski(), st(1.0, 2.0), st(1.0, 2.0)).unwrap();
        assert!(p.u_fan.is_empty() && p.atoms.is_empty());
        assert_eq!(p.v_at(0.3), 2.0);

        // contact in v at speed u
        let p = build_profile(&SystemSpec::korchinski(), st(0.5, 2.0), st(0.5, -1.0)).unwrap();
        assert!(p.atoms.is_empty());
        assert_eq!(p.v_at(0.4), 2.0);
        assert_eq!(p.v_at(0.6), -1.0);

        // u·v² at frozen u = 1 with increasing v: rarefaction v = ξ/2
        let p = build_profile(&SystemSpec::modified(), st(1.0, -1.0), st(1.0, 1.0)).unwrap();
        assert!(p.atoms.is_empty());
        assert_eq!(p.v_at(1.0), 0.5);
    }

    #[test]
    fn rejects_out_of_catalog_data() {
        let err = build_profile(&SystemSpec::korchinski(), st(-1.0, 1.0), st(1.0, 1.0));
        assert!(matches!(err, Err(SolveError::UnsupportedScenario(_))));
        // a pure rarefaction of the double well cannot host the jump in v
        let err = build_profile(&SystemSpec::double_well(), st(0.5, 1.0), st(-0.5, 1.0));
        assert!(matches!(err, Err(SolveError::InconsistentFan(_))));
    }
}

//! Entropy solutions of scalar Riemann problems for piecewise-quadratic fluxes.
//!
//! The fan is read off the Oleinik envelope of the flux between the data: the
//! upper concave envelope on `[u_R, u_L]` when `u_L > u_R`, the lower convex
//! envelope on `[u_L, u_R]` otherwise. Straight envelope segments are shocks
//! and arcs of the flux are rarefactions. The concave case is handled by
//! reflecting the flux (`w = −u`, `h(w) = −f(−w)`) so that a single
//! lower-envelope walker serves both.
//!
//! The walker is a gift-wrapping sweep over curves. From a contact point `x`
//! it computes the least chord slope to any state in `(x, hi]`; candidates are
//! piece ends and closed-form tangency points, so no sampling is involved. If
//! the flux curls upward faster than every chord, it follows the current
//! convex arc until the first departure point: a tangent from a later point or
//! a bitangent with a later convex piece.

use crate::error::FanError;
use crate::fan::{ElementaryWave, WaveFan};
use crate::flux::{PiecewiseQuadraticFlux, QuadraticPiece};
use crate::real::Real;

/// Contact between a shock chord and the flux graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangencyPoint<T> {
    /// State where the chord touches tangentially.
    pub state: T,
    /// `f'(state)`, equal to the chord slope.
    pub slope: T,
    /// The other end of the chord.
    pub endpoint: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum HullPart<T> {
    Segment(T, T),
    Arc(T, T),
}

const MAX_NEWTON: usize = 12;

/// Solves `u_t + f(u)_x = 0` with Riemann data `(u_l, u_r)`.
pub fn solve_scalar<T: Real>(
    flux: &PiecewiseQuadraticFlux<T>,
    u_l: T,
    u_r: T,
) -> Result<WaveFan<T>, FanError> {
    if !(u_l.is_finite() && u_r.is_finite()) {
        return Err(FanError::NonFinite);
    }
    if (u_l - u_r).abs() < T::lit(1e-14) {
        return Ok(WaveFan::constant(u_l));
    }
    let waves = if u_l < u_r {
        lower_envelope(flux, u_l, u_r)?
            .into_iter()
            .map(|part| to_wave(flux, part, false))
            .collect()
    } else {
        let reflected = flux.reflected();
        lower_envelope(&reflected, -u_l, -u_r)?
            .into_iter()
            .map(|part| to_wave(flux, part, true))
            .collect()
    };
    WaveFan::new(u_l, u_r, waves)
}

fn to_wave<T: Real>(
    flux: &PiecewiseQuadraticFlux<T>,
    part: HullPart<T>,
    reflected: bool,
) -> ElementaryWave<T> {
    let map = |w: T| if reflected { -w } else { w };
    match part {
        HullPart::Segment(a, b) => {
            let (left, right) = (map(a), map(b));
            ElementaryWave::Shock {
                left,
                right,
                speed: flux.chord_slope(left, right),
            }
        }
        HullPart::Arc(a, b) => {
            let (left, right) = (map(a), map(b));
            let mid = (left + right) * T::lit(0.5);
            let branch = *flux.piece(flux.piece_index(mid));
            ElementaryWave::Rarefaction {
                left,
                right,
                from_speed: branch.slope(left),
                to_speed: branch.slope(right),
                branch,
            }
        }
    }
}

/// Walks the lower convex envelope of `flux` on `[lo, hi]` from left to right.
fn lower_envelope<T: Real>(
    flux: &PiecewiseQuadraticFlux<T>,
    lo: T,
    hi: T,
) -> Result<Vec<HullPart<T>>, FanError> {
    let scale = T::one().max(lo.abs()).max(hi.abs());
    let xtol = T::epsilon() * T::lit(64.0) * scale;
    let mut parts = Vec::new();
    let mut x = lo;
    let max_iter = 8 * (flux.len() + 2) + 16;
    for _ in 0..max_iter {
        if hi - x <= xtol {
            return Ok(parts);
        }
        x = snap_to_breakpoint(flux, x, xtol);
        let fx = flux.value(x);
        let (m, w_far) = min_chord(flux, x, fx, hi, xtol);
        let p = flux.piece_index(x);
        let piece = flux.piece(p);
        let stol = T::geometric_tol() * (T::one() + m.abs());
        if piece.a > T::zero() && piece.slope(x) < m - stol {
            let y = departure(flux, p, x, hi, xtol);
            if y - x > xtol {
                parts.push(HullPart::Arc(x, y));
            }
            x = y;
        } else {
            parts.push(HullPart::Segment(x, w_far));
            x = w_far;
        }
    }
    Err(FanError::NoProgress)
}

fn snap_to_breakpoint<T: Real>(flux: &PiecewiseQuadraticFlux<T>, x: T, xtol: T) -> T {
    flux.breakpoints()
        .find(|&b| (b - x).abs() <= xtol)
        .unwrap_or(x)
}

/// Least chord slope from `(x, f(x))` to the graph over `(x, hi]`, and the
/// farthest state attaining it.
fn min_chord<T: Real>(flux: &PiecewiseQuadraticFlux<T>, x: T, fx: T, hi: T, xtol: T) -> (T, T) {
    let mut cands: Vec<T> = Vec::with_capacity(3 * flux.len());
    for q in flux.piece_index(x)..=flux.piece_index(hi) {
        let (l, r) = flux.interval(q);
        let lo_q = l.max(x);
        let hi_q = r.min(hi);
        if hi_q <= x + xtol {
            continue;
        }
        if lo_q > x + xtol {
            cands.push(lo_q);
        }
        cands.push(hi_q);
        let quad = flux.piece(q);
        if quad.a != T::zero() {
            let disc = (quad.value(x) - fx) / quad.a;
            if disc > T::zero() {
                let w = polish_tangent(quad, x, fx, x + disc.sqrt());
                if w > lo_q && w < hi_q && w > x + xtol {
                    cands.push(w);
                }
            }
        }
    }
    let slope = |w: T| (flux.value(w) - fx) / (w - x);
    let m = cands
        .iter()
        .map(|&w| slope(w))
        .fold(T::infinity(), T::min);
    let stol = T::geometric_tol() * (T::one() + m.abs());
    let w_far = cands
        .iter()
        .copied()
        .filter(|&w| slope(w) <= m + stol)
        .fold(T::neg_infinity(), T::max);
    (m, w_far)
}

/// Newton iteration on `q(w) − f_x − q'(w)(w − x) = 0`: the tangent to `q`
/// through the external point `(x, f_x)`.
fn polish_tangent<T: Real>(q: &QuadraticPiece<T>, x: T, fx: T, guess: T) -> T {
    let mut w = guess;
    let scale = T::one().max(fx.abs()).max(q.value(w).abs());
    for _ in 0..MAX_NEWTON {
        let r = q.value(w) - fx - q.slope(w) * (w - x);
        if r.abs() <= T::newton_tol() * scale {
            break;
        }
        let dr = -q.curvature() * (w - x);
        if dr == T::zero() {
            break;
        }
        w -= r / dr;
    }
    w
}

/// First state `y > x` on convex piece `p` whose tangent touches the graph
/// again to the right; the piece end (clipped to `hi`) if none does.
fn departure<T: Real>(flux: &PiecewiseQuadraticFlux<T>, p: usize, x: T, hi: T, xtol: T) -> T {
    let qp = *flux.piece(p);
    let (_, r_p) = flux.interval(p);
    let r = r_p.min(hi);
    let mut best = r;

    let mut targets: Vec<T> = flux
        .breakpoints()
        .filter(|&b| b > r + xtol && b < hi)
        .collect();
    if hi > r + xtol {
        targets.push(hi);
    }
    for target in targets {
        let ft = flux.value(target);
        let disc = (qp.value(target) - ft) / qp.a;
        if disc >= T::zero() {
            let y = polish_tangent(&qp, target, ft, target - disc.sqrt());
            if y > x + xtol && y < best {
                best = y;
            }
        }
    }

    for q in (p + 1)..=flux.piece_index(hi) {
        let qq = *flux.piece(q);
        if qq.a <= T::zero() {
            continue;
        }
        let (l_q, r_q) = flux.interval(q);
        let zlo = l_q.max(r);
        let zhi = r_q.min(hi);
        for s in bitangent_slopes(&qp, &qq) {
            let y = qp.state_at_speed(s);
            let z = qq.state_at_speed(s);
            if y > x + xtol && y < best && z > y && z >= zlo - xtol && z <= zhi + xtol {
                best = y;
            }
        }
    }
    best
}

/// Slopes of lines tangent to both parabolas (both with `a > 0`).
fn bitangent_slopes<T: Real>(p: &QuadraticPiece<T>, q: &QuadraticPiece<T>) -> Vec<T> {
    // tangent of slope s to a·u²+b·u+c has intercept c − (s − b)²/(4a)
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let qa = p.a - q.a;
    let qb = two * q.a * p.b - two * p.a * q.b;
    let qc = p.a * q.b * q.b - q.a * p.b * p.b + four * p.a * q.a * (p.c - q.c);
    solve_quadratic(qa, qb, qc)
}

fn solve_quadratic<T: Real>(a: T, b: T, c: T) -> Vec<T> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == T::zero() {
        return Vec::new();
    }
    if a.abs() <= T::epsilon() * scale {
        return if b != T::zero() { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - T::lit(4.0) * a * c;
    if disc < T::zero() {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let qv = -(b + b.signum() * sq) * T::lit(0.5);
    if qv == T::zero() {
        return vec![T::zero()];
    }
    vec![qv / a, c / qv]
}

/// Tangency points of every shock chord with the flux graph.
pub fn tangency_points<T: Real>(
    flux: &PiecewiseQuadraticFlux<T>,
    fan: &WaveFan<T>,
) -> Vec<TangencyPoint<T>> {
    let mut out = Vec::new();
    for wave in fan.waves() {
        if let ElementaryWave::Shock { left, right, speed } = *wave {
            let tol = T::geometric_tol() * (T::one() + speed.abs());
            for (state, endpoint) in [(left, right), (right, left)] {
                let d_right = flux.derivative(state);
                let d_left = flux.derivative_left(state);
                let slope = if (d_right - speed).abs() <= tol {
                    Some(d_right)
                } else if (d_left - speed).abs() <= tol {
                    Some(d_left)
                } else {
                    None
                };
                if let Some(slope) = slope {
                    out.push(TangencyPoint {
                        state,
                        slope,
                        endpoint,
                    });
                }
            }
        }
    }
    out
}

/// First sample where the Oleinik condition fails.
#[derive(Debug, Clone, PartialEq)]
pub struct OleinikViolation<T> {
    pub wave: usize,
    pub state: T,
    pub chord_slope: T,
    pub speed: T,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OleinikReport<T> {
    pub passed: bool,
    pub samples: usize,
    /// Smallest slack `min(S(u_l, w) − σ, σ − S(w, u_r))` observed; zero at tangency.
    pub min_margin: T,
    pub violation: Option<OleinikViolation<T>>,
}

/// Interior samples per shock in [`oleinik_check`].
pub const OLEINIK_SAMPLES: usize = 1024;

/// Checks the Oleinik E-condition `S(u_l, w) ≥ σ ≥ S(w, u_r)` at interior
/// samples of every shock, and monotonicity of speeds across the fan.
pub fn oleinik_check<T: Real>(
    flux: &PiecewiseQuadraticFlux<T>,
    fan: &WaveFan<T>,
) -> OleinikReport<T> {
    let mut report = OleinikReport {
        passed: true,
        samples: 0,
        min_margin: T::infinity(),
        violation: None,
    };
    let mut last = T::neg_infinity();
    for (index, wave) in fan.waves().iter().enumerate() {
        let start = wave.start_speed();
        if start < last - T::geometric_tol() * (T::one() + last.abs()) {
            report.passed = false;
            report.violation = Some(OleinikViolation {
                wave: index,
                state: wave.left(),
                chord_slope: start,
                speed: last,
                reason: "wave speeds decrease",
            });
            return report;
        }
        last = wave.end_speed();
        let ElementaryWave::Shock { left, right, speed } = *wave else {
            continue;
        };
        let tol = T::geometric_tol() * (T::one() + speed.abs());
        let fl = flux.value(left);
        let fr = flux.value(right);
        let denom = T::of_usize(OLEINIK_SAMPLES + 1);
        for k in 1..=OLEINIK_SAMPLES {
            let w = left + (right - left) * T::of_usize(k) / denom;
            let fw = flux.value(w);
            let from_left = (fw - fl) / (w - left);
            let to_right = (fr - fw) / (right - w);
            report.samples += 1;
            let margin = (from_left - speed).min(speed - to_right);
            report.min_margin = report.min_margin.min(margin);
            if margin < -tol {
                report.passed = false;
                report.violation = Some(OleinikViolation {
                    wave: index,
                    state: w,
                    chord_slope: if from_left - speed < speed - to_right {
                        from_left
                    } else {
                        to_right
                    },
                    speed,
                    reason: "chord crosses the shock speed",
                });
                return report;
            }
        }
    }
    report
}

/// Piecewise-linear envelope of `n` uniform flux samples between the data.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledEnvelope<T> {
    /// Hull vertices in fan order (starting at `u_L`).
    pub vertices: Vec<(T, T)>,
    pub spacing: T,
}

impl<T: Real> SampledEnvelope<T> {
    /// `(left, right)` states of every hull edge longer than 1.5 sample
    /// spacings, in fan order. These approximate the shocks.
    pub fn shock_states(&self) -> Vec<(T, T)> {
        let long = self.spacing * T::lit(1.5);
        self.vertices
            .windows(2)
            .filter(|e| (e[1].0 - e[0].0).abs() > long)
            .map(|e| (e[0].0, e[1].0))
            .collect()
    }

    /// Endpoints of the straight segments, flattened in fan order.
    pub fn contact_states(&self) -> Vec<T> {
        self.shock_states()
            .into_iter()
            .flat_map(|(a, b)| [a, b])
            .collect()
    }

    /// Envelope value at `u` by linear interpolation.
    pub fn value(&self, u: T) -> T {
        for e in self.vertices.windows(2) {
            let (a, b) = if e[0].0 <= e[1].0 { (e[0], e[1]) } else { (e[1], e[0]) };
            if u >= a.0 && u <= b.0 {
                if b.0 == a.0 {
                    return a.1;
                }
                return a.1 + (b.1 - a.1) * (u - a.0) / (b.0 - a.0);
            }
        }
        T::nan()
    }
}

/// Brute-force Oleinik envelope from `n` uniform samples (monotone chain).
///
/// Independent of [`solve_scalar`]: no tangency algebra, only orientation tests.
pub fn sampled_envelope_oracle<T: Real>(
    flux: &PiecewiseQuadraticFlux<T>,
    u_l: T,
    u_r: T,
    n: usize,
) -> SampledEnvelope<T> {
    let n = n.max(2);
    let (lo, hi) = if u_l <= u_r { (u_l, u_r) } else { (u_r, u_l) };
    let upper = u_l > u_r;
    let spacing = (hi - lo) / T::of_usize(n - 1);
    let mut hull: Vec<(T, T)> = Vec::with_capacity(n);
    for i in 0..n {
        let u = if i + 1 == n {
            hi
        } else {
            lo + spacing * T::of_usize(i)
        };
        let p = (u, flux.value(u));
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            let pop = if upper {
                cross >= T::zero()
            } else {
                cross <= T::zero()
            };
            if pop {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    if upper {
        hull.reverse();
    }
    SampledEnvelope {
        vertices: hull,
        spacing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dw_data() -> (f64, f64) {
        let ul = (3.0 + 2f64.sqrt()) / 2.0;
        (ul, -ul)
    }

    #[test]
    fn burgers_decreasing_data_is_one_shock() {
        let f = PiecewiseQuadraticFlux::burgers();
        let fan = solve_scalar(&f, 2.0, -1.0).unwrap();
        assert_eq!(fan.waves().len(), 1);
        match fan.waves()[0] {
            ElementaryWave::Shock { left, right, speed } => {
                assert_eq!((left, right), (2.0, -1.0));
                assert_eq!(speed, 1.0);
            }
            _ => panic!("expected a shock"),
        }
    }

    #[test]
    fn equal_data_gives_empty_fan() {
        let f = PiecewiseQuadraticFlux::burgers();
        assert!(solve_scalar(&f, 3.0, 3.0).unwrap().is_empty());
        assert!(solve_scalar(&f, 3.0, 3.0 + 1e-15).unwrap().is_empty());
    }

    #[test]
    fn burgers_increasing_data_is_one_rarefaction() {
        let f = PiecewiseQuadraticFlux::burgers();
        let fan = solve_scalar(&f, -1.0, 2.0).unwrap();
        assert_eq!(fan.waves().len(), 1);
        assert!(!fan.waves()[0].is_shock());
        assert_eq!(fan.eval(1.0), 0.5);
        assert_eq!(fan.eval(-5.0), -1.0);
        assert_eq!(fan.eval(5.0), 2.0);
    }

    #[test]
    fn double_well_composite_fan() {
        let f = PiecewiseQuadraticFlux::double_well();
        let (ul, ur) = dw_data();
        let fan = solve_scalar(&f, ul, ur).unwrap();
        let w = fan.waves();
        assert_eq!(w.len(), 3);
        let ElementaryWave::Shock { left, right, speed } = w[0] else {
            panic!("expected shock first")
        };
        assert_eq!(left, ul);
        assert!((right - 0.5).abs() < 1e-12);
        assert!((speed + 1.0).abs() < 1e-12);
        let ElementaryWave::Rarefaction {
            left,
            right,
            from_speed,
            to_speed,
            branch,
        } = w[1]
        else {
            panic!("expected rarefaction")
        };
        assert!((left - 0.5).abs() < 1e-12 && (right + 0.5).abs() < 1e-12);
        assert!((from_speed + 1.0).abs() < 1e-12 && (to_speed - 1.0).abs() < 1e-12);
        assert_eq!(branch, QuadraticPiece::new(-1.0, 0.0, 1.0));
        let ElementaryWave::Shock { left, right, speed } = w[2] else {
            panic!("expected shock last")
        };
        assert!((left + 0.5).abs() < 1e-12);
        assert_eq!(right, ur);
        assert!((speed - 1.0).abs() < 1e-12);

        assert!(fan.eval(0.0).abs() < 1e-15);
        assert!((fan.eval(-2.0) - ul).abs() < 1e-15);
        assert!((fan.eval(0.4) + 0.2).abs() < 1e-12);
    }

    #[test]
    fn tangency_matches_closed_form() {
        let f = PiecewiseQuadraticFlux::double_well();
        let (ul, ur) = dw_data();
        let fan = solve_scalar(&f, ul, ur).unwrap();
        let tp = tangency_points(&f, &fan);
        assert_eq!(tp.len(), 2);
        let closed = ul - (ul * ul + f.value(ul) - 1.0).sqrt();
        assert!((tp[0].state - closed).abs() < 1e-12);
        for t in &tp {
            let chord = f.chord_slope(t.state, t.endpoint);
            assert!((chord - t.slope).abs() < 1e-10);
        }
    }

    #[test]
    fn oleinik_accepts_entropy_fans_and_rejects_expansion_shock() {
        let burgers = PiecewiseQuadraticFlux::burgers();
        let fan = solve_scalar(&burgers, 1.0, -1.0).unwrap();
        assert!(oleinik_check(&burgers, &fan).passed);

        let dw = PiecewiseQuadraticFlux::double_well();
        let (ul, ur) = dw_data();
        let fan = solve_scalar(&dw, ul, ur).unwrap();
        let report = oleinik_check(&dw, &fan);
        assert!(report.passed);
        assert!(report.samples >= 2000);
        assert!(report.min_margin.abs() < 1e-5, "tangency gives zero slack");

        let expansion = WaveFan::new(
            -1.0,
            1.0,
            vec![ElementaryWave::Shock {
                left: -1.0,
                right: 1.0,
                speed: 0.0,
            }],
        )
        .unwrap();
        let report = oleinik_check(&burgers, &expansion);
        assert!(!report.passed);
        let v = report.violation.unwrap();
        assert_eq!(v.wave, 0);
        assert!(v.state > -1.0 && v.state < 1.0);
    }

    #[test]
    fn oracle_on_convex_flux() {
        let burgers = PiecewiseQuadraticFlux::<f64>::burgers();
        let env = sampled_envelope_oracle(&burgers, 1.5, -0.5, 1000);
        assert_eq!(env.vertices.len(), 2);
        assert_eq!(env.shock_states(), vec![(1.5, -0.5)]);

        let env = sampled_envelope_oracle(&burgers, -1.0, 2.0, 1000);
        assert_eq!(env.vertices.len(), 1000);
        assert!(env.shock_states().is_empty());
        for k in 0..50 {
            let u = -1.0 + 3.0 * k as f64 / 49.0;
            assert!((env.value(u) - u * u).abs() < 1e-5);
        }
    }

    #[test]
    fn oracle_finds_double_well_contacts() {
        let f = PiecewiseQuadraticFlux::double_well();
        let (ul, ur) = dw_data();
        let env = sampled_envelope_oracle(&f, ul, ur, 100_000);
        let c = env.contact_states();
        assert_eq!(c.len(), 4);
        let expected = [ul, 0.5, -0.5, ur];
        for (got, want) in c.iter().zip(expected) {
            assert!((got - want).abs() < 1e-4, "{got} vs {want}");
        }
    }

    #[test]
    fn bitangent_between_two_wells() {
        // two convex wells joined by a concave cap; increasing data spanning
        // both wells gives rarefaction, bitangent shock, rarefaction
        let f = PiecewiseQuadraticFlux::<f64>::new(vec![
            (f64::NEG_INFINITY, QuadraticPiece::new(1.0, 4.0, 3.0)),
            (-1.0, QuadraticPiece::new(-1.0, 0.0, 1.0)),
            (1.0, QuadraticPiece::new(1.0, -4.0, 3.0)),
        ])
        .unwrap();
        let fan = solve_scalar(&f, -3.0, 3.0).unwrap();
        let kinds: Vec<bool> = fan.waves().iter().map(|w| w.is_shock()).collect();
        assert_eq!(kinds, vec![false, true, false]);
        let ElementaryWave::Shock { left, right, speed } = fan.waves()[1] else {
            unreachable!()
        };
        // the common tangent of the two wells is the horizontal line f = −1
        assert!((left + 2.0).abs() < 1e-12 && (right - 2.0).abs() < 1e-12);
        assert!(speed.abs() < 1e-12);
        let env = sampled_envelope_oracle(&f, -3.0, 3.0, 100_000);
        let c = env.contact_states();
        assert!((c[0] + 2.0).abs() < 1e-3 && (c[1] - 2.0).abs() < 1e-3);
    }
}

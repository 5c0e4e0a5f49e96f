//! States, the scalar flux catalog and the weakly coupled system specification.

use crate::error::FluxError;
use crate::real::Real;

/// A point `(u, v)` in state space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State<T> {
    pub u: T,
    pub v: T,
}

impl<T: Real> State<T> {
    pub fn new(u: T, v: T) -> Self {
        Self { u, v }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }
}

/// `a·u² + b·u + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPiece<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> QuadraticPiece<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Self { a, b, c }
    }

    #[inline]
    pub fn value(&self, u: T) -> T {
        (self.a * u + self.b) * u + self.c
    }

    #[inline]
    pub fn slope(&self, u: T) -> T {
        (self.a + self.a) * u + self.b
    }

    #[inline]
    pub fn curvature(&self) -> T {
        self.a + self.a
    }

    /// Inverse of the derivative: the state whose characteristic speed is `xi`.
    /// Only meaningful for `a != 0`.
    #[inline]
    pub fn state_at_speed(&self, xi: T) -> T {
        (xi - self.b) / (self.a + self.a)
    }

    /// `-f(-w)`: the piece seen through the reflection used for concave envelopes.
    pub fn reflected(&self) -> Self {
        Self::new(-self.a, self.b, -self.c)
    }
}

/// One piece of a [`PiecewiseQuadraticFlux`], valid on `[lower, next lower)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxPiece<T> {
    pub lower: T,
    pub quad: QuadraticPiece<T>,
}

/// Continuous scalar flux built from quadratic pieces on consecutive intervals.
///
/// Piece `i` governs `[lower_i, lower_{i+1})`; the first piece extends to −∞.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseQuadraticFlux<T> {
    pieces: Vec<FluxPiece<T>>,
}

impl<T: Real> PiecewiseQuadraticFlux<T> {
    /// Builds a flux from `(lower bound, piece)` pairs. The first lower bound
    /// must be `-inf`; the others must be finite and strictly increasing, and
    /// adjacent pieces must agree at each breakpoint.
    pub fn new(pieces: Vec<(T, QuadraticPiece<T>)>) -> Result<Self, FluxError> {
        if pieces.is_empty() {
            return Err(FluxError::NoPieces);
        }
        if pieces[0].0 != T::neg_infinity() {
            return Err(FluxError::FirstBoundNotUnbounded);
        }
        for (i, (lower, q)) in pieces.iter().enumerate() {
            if !(q.a.is_finite() && q.b.is_finite() && q.c.is_finite()) {
                return Err(FluxError::NonFinite { index: i });
            }
            if i > 0 && !lower.is_finite() {
                return Err(FluxError::NonFinite { index: i });
            }
        }
        for i in 1..pieces.len() {
            let lower = pieces[i].0;
            if i > 1 && lower <= pieces[i - 1].0 {
                return Err(FluxError::BreakpointsNotIncreasing { index: i });
            }
            let left = pieces[i - 1].1.value(lower);
            let right = pieces[i].1.value(lower);
            let scale = T::one().max(left.abs()).max(right.abs());
            if (left - right).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) * scale {
                return Err(FluxError::Discontinuous {
                    at: lower.to_f64_lossy(),
                    jump: (right - left).to_f64_lossy(),
                });
            }
        }
        Ok(Self {
            pieces: pieces
                .into_iter()
                .map(|(lower, quad)| FluxPiece { lower, quad })
                .collect(),
        })
    }

    /// A single quadratic on the whole line.
    pub fn quadratic(a: T, b: T, c: T) -> Self {
        Self {
            pieces: vec![FluxPiece {
                lower: T::neg_infinity(),
                quad: QuadraticPiece::new(a, b, c),
            }],
        }
    }

    /// `f(u) = u²`.
    pub fn burgers() -> Self {
        Self::quadratic(T::one(), T::zero(), T::zero())
    }

    /// The double-well flux `(u+2)²−1 | −u²+1 | (u−2)²−1` with breakpoints at ∓1.
    ///
    /// The middle piece is the concave `−u² + 1`; with it the flux is C¹ and the
    /// two-delta Riemann fan has speeds ∓1 and tangency states ±1/2.
    pub fn double_well() -> Self {
        let one = T::one();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        Self::new(vec![
            (T::neg_infinity(), QuadraticPiece::new(one, two + two, three)),
            (-one, QuadraticPiece::new(-one, T::zero(), one)),
            (one, QuadraticPiece::new(one, -(two + two), three)),
        ])
        .expect("double well is continuous")
    }

    pub fn pieces(&self) -> &[FluxPiece<T>] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn piece(&self, index: usize) -> &QuadraticPiece<T> {
        &self.pieces[index].quad
    }

    /// Finite breakpoints in increasing order.
    pub fn breakpoints(&self) -> impl Iterator<Item = T> + '_ {
        self.pieces.iter().skip(1).map(|p| p.lower)
    }

    /// Interval `[lower, upper)` governed by piece `index`.
    pub fn interval(&self, index: usize) -> (T, T) {
        let lower = self.pieces[index].lower;
        let upper = self
            .pieces
            .get(index + 1)
            .map_or(T::infinity(), |p| p.lower);
        (lower, upper)
    }

    /// Index of the piece governing `u` (right-continuous at breakpoints).
    pub fn piece_index(&self, u: T) -> usize {
        // pieces are few; a linear scan beats binary search bookkeeping here
        let mut idx = 0;
        for (i, p) in self.pieces.iter().enumerate().skip(1) {
            if u >= p.lower {
                idx = i;
            } else {
                break;
            }
        }
        idx
    }

    /// Index of the piece governing a left neighbourhood of `u`.
    pub fn piece_index_left(&self, u: T) -> usize {
        let mut idx = 0;
        for (i, p) in self.pieces.iter().enumerate().skip(1) {
            if u > p.lower {
                idx = i;
            } else {
                break;
            }
        }
        idx
    }

    #[inline]
    pub fn value(&self, u: T) -> T {
        self.piece(self.piece_index(u)).value(u)
    }

    /// Right derivative `f'(u+)`.
    #[inline]
    pub fn derivative(&self, u: T) -> T {
        self.piece(self.piece_index(u)).slope(u)
    }

    /// Left derivative `f'(u−)`.
    #[inline]
    pub fn derivative_left(&self, u: T) -> T {
        self.piece(self.piece_index_left(u)).slope(u)
    }

    /// Chord slope between two distinct states.
    #[inline]
    pub fn chord_slope(&self, u0: T, u1: T) -> T {
        (self.value(u1) - self.value(u0)) / (u1 - u0)
    }

    /// The flux `w ↦ −f(−w)`, whose lower convex envelope is the reflected
    /// upper concave envelope of `f`.
    pub fn reflected(&self) -> Self {
        let n = self.pieces.len();
        let mut pieces = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let (_, upper) = self.interval(i);
            pieces.push(FluxPiece {
                lower: -upper,
                quad: self.pieces[i].quad.reflected(),
            });
        }
        Self { pieces }
    }

    /// Minimum (`want_max = false`) or maximum of `f` on `[lo, hi]` together
    /// with a state attaining it. Ties resolve to the first candidate in the
    /// order: `lo`, `hi`, interior critical points and breakpoints.
    pub fn extremum(&self, lo: T, hi: T, want_max: bool) -> (T, T) {
        let better = |cand: T, best: T| if want_max { cand > best } else { cand < best };
        let mut arg = lo;
        let mut best = self.value(lo);
        let mut consider = |u: T| {
            let fu = self.value(u);
            if better(fu, best) {
                best = fu;
                arg = u;
            }
        };
        consider(hi);
        let first = self.piece_index(lo);
        let last = self.piece_index(hi);
        for i in first..=last {
            let (l, r) = self.interval(i);
            let q = self.piece(i);
            if q.a != T::zero() {
                let crit = -q.b / q.curvature();
                if crit > lo && crit < hi && crit >= l && crit < r {
                    consider(crit);
                }
            }
            if i > first && l > lo && l < hi {
                consider(l);
            }
        }
        (arg, best)
    }
}

/// The two admissible `v`-fluxes: `G = u·v` and `G = u·v²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VFluxKind {
    LinearInV,
    QuadraticInV,
}

impl VFluxKind {
    #[inline]
    pub fn g<T: Real>(self, u: T, v: T) -> T {
        match self {
            VFluxKind::LinearInV => u * v,
            VFluxKind::QuadraticInV => u * v * v,
        }
    }

    /// `∂G/∂v`, the characteristic speed of the `v`-family.
    #[inline]
    pub fn g_v<T: Real>(self, u: T, v: T) -> T {
        match self {
            VFluxKind::LinearInV => u,
            VFluxKind::QuadraticInV => (u + u) * v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VFluxKind::LinearInV => "linear",
            VFluxKind::QuadraticInV => "quadratic",
        }
    }
}

/// A weakly coupled system `u_t + f(u)_x = 0`, `v_t + G(u, v)_x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec<T> {
    pub u_flux: PiecewiseQuadraticFlux<T>,
    pub v_flux: VFluxKind,
}

impl<T: Real> SystemSpec<T> {
    pub fn new(u_flux: PiecewiseQuadraticFlux<T>, v_flux: VFluxKind) -> Self {
        Self { u_flux, v_flux }
    }

    /// `(u², u·v)`: the overcompressive delta-shock system.
    pub fn korchinski() -> Self {
        Self::new(PiecewiseQuadraticFlux::burgers(), VFluxKind::LinearInV)
    }

    /// `(u², u·v²)`: delta shocks next to rarefaction fans.
    pub fn modified() -> Self {
        Self::new(PiecewiseQuadraticFlux::burgers(), VFluxKind::QuadraticInV)
    }

    /// `(double well, u·v)`: two delta shocks around a middle rarefaction.
    pub fn double_well() -> Self {
        Self::new(PiecewiseQuadraticFlux::double_well(), VFluxKind::LinearInV)
    }

    #[inline]
    pub fn g(&self, s: State<T>) -> T {
        self.v_flux.g(s.u, s.v)
    }
}

//! Self-similar scalar wave fans in the similarity coordinate `ξ = x/t`.

use crate::error::FanError;
use crate::flux::{PiecewiseQuadraticFlux, QuadraticPiece};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum ElementaryWave<T> {
    /// Jump from `left` to `right` travelling at `speed`.
    Shock { left: T, right: T, speed: T },
    /// Centred fan on `[from_speed, to_speed]` inverting the derivative of `branch`.
    Rarefaction {
        left: T,
        right: T,
        from_speed: T,
        to_speed: T,
        branch: QuadraticPiece<T>,
    },
}

impl<T: Real> ElementaryWave<T> {
    pub fn left(&self) -> T {
        match *self {
            ElementaryWave::Shock { left, .. } | ElementaryWave::Rarefaction { left, .. } => left,
        }
    }

    pub fn right(&self) -> T {
        match *self {
            ElementaryWave::Shock { right, .. } | ElementaryWave::Rarefaction { right, .. } => right,
        }
    }

    /// Slowest similarity speed occupied by the wave.
    pub fn start_speed(&self) -> T {
        match *self {
            ElementaryWave::Shock { speed, .. } => speed,
            ElementaryWave::Rarefaction { from_speed, .. } => from_speed,
        }
    }

    pub fn end_speed(&self) -> T {
        match *self {
            ElementaryWave::Shock { speed, .. } => speed,
            ElementaryWave::Rarefaction { to_speed, .. } => to_speed,
        }
    }

    pub fn is_shock(&self) -> bool {
        matches!(self, ElementaryWave::Shock { .. })
    }

    /// Rankine–Hugoniot defect `|σ·(u_r − u_l) − (f(u_r) − f(u_l))|`; zero for
    /// rarefactions.
    pub fn rankine_hugoniot_defect(&self, flux: &PiecewiseQuadraticFlux<T>) -> T {
        match *self {
            ElementaryWave::Shock { left, right, speed } => {
                (speed * (right - left) - (flux.value(right) - flux.value(left))).abs()
            }
            ElementaryWave::Rarefaction { .. } => T::zero(),
        }
    }
}

/// Ordered elementary waves connecting `left` to `right`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFan<T> {
    left: T,
    right: T,
    waves: Vec<ElementaryWave<T>>,
}

impl<T: Real> WaveFan<T> {
    /// Validates adjacency, shock/rarefaction well-formedness and speed order.
    pub fn new(left: T, right: T, waves: Vec<ElementaryWave<T>>) -> Result<Self, FanError> {
        if !(left.is_finite() && right.is_finite()) {
            return Err(FanError::NonFinite);
        }
        let tol = T::geometric_tol();
        let mut current = left;
        let mut last_speed = T::neg_infinity();
        for (index, wave) in waves.iter().enumerate() {
            let scale = T::one().max(current.abs());
            if (wave.left() - current).abs() > tol * scale {
                return Err(FanError::NotAdjacent { index });
            }
            match *wave {
                ElementaryWave::Shock { left, right, .. } => {
                    if left == right {
                        return Err(FanError::Malformed {
                            index,
                            reason: "shock without a jump".into(),
                        });
                    }
                }
                ElementaryWave::Rarefaction {
                    left,
                    right,
                    from_speed,
                    to_speed,
                    branch,
                } => {
                    if branch.a == T::zero() || !(from_speed < to_speed) {
                        return Err(FanError::Malformed {
                            index,
                            reason: "rarefaction needs a curved branch and increasing speeds".into(),
                        });
                    }
                    let ends_ok = (branch.state_at_speed(from_speed) - left).abs() <= tol * scale
                        && (branch.state_at_speed(to_speed) - right).abs()
                            <= tol * T::one().max(right.abs());
                    if !ends_ok {
                        return Err(FanError::Malformed {
                            index,
                            reason: "rarefaction end states do not match its speeds".into(),
                        });
                    }
                }
            }
            let start = wave.start_speed();
            if start < last_speed - tol * T::one().max(last_speed.abs()) {
                return Err(FanError::NonMonotone {
                    index,
                    previous: last_speed.to_f64_lossy(),
                    next: start.to_f64_lossy(),
                });
            }
            last_speed = wave.end_speed();
            current = wave.right();
        }
        if (current - right).abs() > tol * T::one().max(right.abs()) {
            return Err(FanError::NotAdjacent {
                index: waves.len(),
            });
        }
        Ok(Self { left, right, waves })
    }

    /// The constant solution.
    pub fn constant(u: T) -> Self {
        Self {
            left: u,
            right: u,
            waves: Vec::new(),
        }
    }

    pub fn left_state(&self) -> T {
        self.left
    }

    pub fn right_state(&self) -> T {
        self.right
    }

    pub fn waves(&self) -> &[ElementaryWave<T>] {
        &self.waves
    }

    pub fn is_empty(&self) -> bool {
        self.waves.is_empty()
    }

    pub fn shocks(&self) -> impl Iterator<Item = &ElementaryWave<T>> {
        self.waves.iter().filter(|w| w.is_shock())
    }

    /// `u` at similarity coordinate `xi`; left limit at shocks.
    pub fn eval(&self, xi: T) -> T {
        let mut current = self.left;
        for wave in &self.waves {
            match *wave {
                ElementaryWave::Shock { right, speed, .. } => {
                    if xi <= speed {
                        return current;
                    }
                    current = right;
                }
                ElementaryWave::Rarefaction {
                    right,
                    from_speed,
                    to_speed,
                    branch,
                    ..
                } => {
                    if xi <= from_speed {
                        return current;
                    }
                    if xi < to_speed {
                        return branch.state_at_speed(xi);
                    }
                    current = right;
                }
            }
        }
        current
    }

    /// Finite similarity speeds at which the solution is not smooth.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for w in &self.waves {
            for s in [w.start_speed(), w.end_speed()] {
                if out.last().is_none_or(|&p| p != s) {
                    out.push(s);
                }
            }
        }
        out
    }
}

/// `u` at similarity coordinate `xi` (left limit at shocks).
pub fn eval_u<T: Real>(fan: &WaveFan<T>, xi: T) -> T {
    fan.eval(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn korchinski_fan() -> WaveFan<f64> {
        WaveFan::new(
            1.0,
            -1.0,
            vec![ElementaryWave::Shock {
                left: 1.0,
                right: -1.0,
                speed: 0.0,
            }],
        )
        .unwrap()
    }

    #[test]
    fn pure_jump_and_left_limit() {
        let fan = korchinski_fan();
        assert_eq!(fan.eval(-0.5), 1.0);
        assert_eq!(fan.eval(0.5), -1.0);
        assert_eq!(fan.eval(0.0), 1.0);
    }

    #[test]
    fn rejects_broken_fans() {
        let bad = WaveFan::new(
            1.0,
            -1.0,
            vec![ElementaryWave::Shock {
                left: 0.5,
                right: -1.0,
                speed: 0.0,
            }],
        );
        assert!(matches!(bad, Err(FanError::NotAdjacent { index: 0 })));
        let middle = QuadraticPiece::new(-1.0, 0.0, 1.0);
        let reversed = WaveFan::new(
            2.0,
            -2.0,
            vec![
                ElementaryWave::Shock {
                    left: 2.0,
                    right: 0.5,
                    speed: 2.0,
                },
                ElementaryWave::Rarefaction {
                    left: 0.5,
                    right: -0.5,
                    from_speed: -1.0,
                    to_speed: 1.0,
                    branch: middle,
                },
                ElementaryWave::Shock {
                    left: -0.5,
                    right: -2.0,
                    speed: 1.5,
                },
            ],
        );
        assert!(matches!(reversed, Err(FanError::NonMonotone { index: 1, .. })));
    }
}

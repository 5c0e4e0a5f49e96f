//! Scalar abstraction shared by every solver in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the solvers are written against (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Tolerance for geometric decisions: tangency, speed ordering, continuity.
    fn geometric_tol() -> Self;

    /// Residual target for Newton polishing of tangency points.
    fn newton_tol() -> Self;

    /// Converts an `f64` literal. Panics only if the target cannot represent it,
    /// which never happens for the finite literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("representable count")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn geometric_tol() -> Self {
        1e-9
    }
    fn newton_tol() -> Self {
        1e-13
    }
}

impl Real for f32 {
    fn geometric_tol() -> Self {
        1e-4
    }
    fn newton_tol() -> Self {
        1e-6
    }
}

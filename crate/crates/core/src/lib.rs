//! Exact Riemann solutions for weakly coupled 2×2 conservation laws
//!
//! ```text
//! u_t + f(u)_x = 0,    v_t + G(u, v)_x = 0,
//! ```
//!
//! with piecewise-quadratic `f` and `G ∈ {u·v, u·v²}`. The `u`-equation is
//! solved by the lower/upper convex envelope of `f` between the data; the
//! `v`-profile is then assembled from closed-form branches plus Dirac atoms
//! riding on the `u`-shocks, with masses fixed by mass balance.
//!
//! Independent checks live alongside: a sampled-hull scalar oracle, exact
//! mass-balance and weak-form residuals, and a first-order finite-volume
//! solver that measures spike growth directly.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a < b)` deliberately rejects NaN

pub mod delta;
pub mod error;
pub mod fan;
pub mod flux;
pub mod fvm;
pub mod presets;
pub mod profile;
pub mod real;
pub mod scalar;
pub mod verify;

pub use delta::{amplitude_rate, build_profile, classify, transport_speeds, TracePair};
pub use error::{FanError, FluxError, FvmError, ProfileError, SolveError, VerifyError};
pub use fan::{ElementaryWave, WaveFan};
pub use flux::{PiecewiseQuadraticFlux, QuadraticPiece, State, SystemSpec, VFluxKind};
pub use profile::{DeltaAtom, ShockClass, SolutionProfile, VBranch, VSegment};
pub use real::Real;
pub use scalar::{oleinik_check, sampled_envelope_oracle, solve_scalar, tangency_points};

pub type Flux = flux::PiecewiseQuadraticFlux<f64>;
pub type Fan = fan::WaveFan<f64>;
pub type Wave = fan::ElementaryWave<f64>;
pub type System = flux::SystemSpec<f64>;
pub type Point = flux::State<f64>;
pub type Profile = profile::SolutionProfile<f64>;
pub type Atom = profile::DeltaAtom<f64>;
pub type Grid = fvm::Grid1D<f64>;

//! Named Riemann problems with known closed-form solutions.

use crate::flux::{State, SystemSpec};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Korchinski,
    Modified,
    DoubleWell,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Korchinski => "korchinski",
            SystemKind::Modified => "modified",
            SystemKind::DoubleWell => "doublewell",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "korchinski" => Some(SystemKind::Korchinski),
            "modified" => Some(SystemKind::Modified),
            "doublewell" => Some(SystemKind::DoubleWell),
            _ => None,
        }
    }

    pub fn spec<T: Real>(self) -> SystemSpec<T> {
        match self {
            SystemKind::Korchinski => SystemSpec::korchinski(),
            SystemKind::Modified => SystemSpec::modified(),
            SystemKind::DoubleWell => SystemSpec::double_well(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub system: SystemKind,
    pub left: State<f64>,
    pub right: State<f64>,
    /// Finite-volume domain that keeps every wave and spike window inside
    /// up to `t = 1`, with `x = 0` on a cell edge for cell counts divisible by 4.
    pub domain: (f64, f64),
}

impl Preset {
    pub fn spec<T: Real>(&self) -> SystemSpec<T> {
        self.system.spec()
    }

    pub fn left_as<T: Real>(&self) -> State<T> {
        State::new(T::lit(self.left.u), T::lit(self.left.v))
    }

    pub fn right_as<T: Real>(&self) -> State<T> {
        State::new(T::lit(self.right.u), T::lit(self.right.v))
    }
}

/// `(3 + √2)/2`, the double-well state whose tangent lines touch the central
/// hump at `∓1/2` with slopes `∓1`.
pub const DOUBLE_WELL_STATE: f64 = 2.207_106_781_186_547_5;

pub const PRESETS: [Preset; 6] = [
    Preset {
        name: "korchinski-fig1-left",
        description: "u^2, uv: stationary overcompressive delta shock",
        system: SystemKind::Korchinski,
        left: State { u: 1.0, v: 1.0 },
        right: State { u: -1.0, v: 1.0 },
        domain: (-2.0, 2.0),
    },
    Preset {
        name: "mod-1lax-fig1-center",
        description: "u^2, uv^2: 1-Lax delta shock with a trailing v-rarefaction",
        system: SystemKind::Modified,
        left: State { u: 2.0, v: 1.0 },
        right: State { u: -1.0, v: -0.75 },
        domain: (-1.0, 3.0),
    },
    Preset {
        name: "mod-transitional-fig1-right",
        description: "u^2, uv^2: transitional delta shock between two v-rarefactions",
        system: SystemKind::Modified,
        left: State { u: 2.0, v: 0.125 },
        right: State { u: -1.0, v: -0.75 },
        domain: (-1.0, 3.0),
    },
    Preset {
        name: "doublewell-fig2",
        description: "double-well flux, uv: two delta shocks around a central rarefaction",
        system: SystemKind::DoubleWell,
        left: State {
            u: DOUBLE_WELL_STATE,
            v: 1.0,
        },
        right: State {
            u: -DOUBLE_WELL_STATE,
            v: 1.0,
        },
        domain: (-2.0, 2.0),
    },
    Preset {
        name: "mod-2lax-mirrored",
        description: "u^2, uv^2: 2-Lax delta shock, both v-characteristics slower than the shock",
        system: SystemKind::Modified,
        left: State { u: 2.0, v: 0.125 },
        right: State { u: -1.0, v: 1.0 },
        domain: (-1.0, 3.0),
    },
    Preset {
        name: "mod-stationary-null",
        description: "u^2, uv^2: stationary shock that carries no delta",
        system: SystemKind::Modified,
        left: State { u: 1.0, v: -0.5 },
        right: State { u: -1.0, v: -0.5 },
        domain: (-2.0, 2.0),
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

/// High-precision constants used by the bundled scenarios.
pub fn constants() -> Vec<(&'static str, f64)> {
    let s = DOUBLE_WELL_STATE;
    vec![
        ("doublewell-state (3+sqrt2)/2", s),
        ("doublewell-rate (5+sqrt2)/2", s + 1.0),
        ("doublewell-tangency", 0.5),
        ("sqrt2", std::f64::consts::SQRT_2),
    ]
}

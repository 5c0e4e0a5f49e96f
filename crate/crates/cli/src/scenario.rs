//! Scenario files: TOML with a fixed, canonical field order.

use anyhow::{bail, Context, Result};
use deltashock::presets::{Preset, SystemKind};
use deltashock::{Flux, Point, QuadraticPiece, System, VFluxKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemName {
    Korchinski,
    Modified,
    Doublewell,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VFluxName {
    Uv,
    Uv2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackgroundName {
    Exact,
    Plateau,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub u: f64,
    pub v: f64,
}

/// Piecewise-quadratic `f` for `system = "custom"`: `pieces[i] = [a, b, c]`
/// is `a u² + b u + c` on `[breakpoints[i-1], breakpoints[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomFlux {
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<[f64; 3]>,
    pub g: VFluxName,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub time: f64,
    pub samples: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            time: 1.0,
            samples: 401,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FvmSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    pub cells: Vec<usize>,
    pub cfl: f64,
    pub end_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_cells: Option<usize>,
    pub background: BackgroundName,
}

impl Default for FvmSpec {
    fn default() -> Self {
        Self {
            a: None,
            b: None,
            cells: vec![1000],
            cfl: 0.45,
            end_time: 1.0,
            window_cells: None,
            background: BackgroundName::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub balance: f64,
    pub weak: f64,
    pub weak_points: usize,
    pub atom_removal: f64,
    /// Relative error allowed on FV spike rates (absolute when `k' = 0`).
    pub rate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            balance: 1e-10,
            weak: 1e-6,
            weak_points: 512,
            atom_removal: 1e-2,
            rate: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub system: SystemName,
    pub left: StateSpec,
    pub right: StateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux: Option<CustomFlux>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fvm: Option<FvmSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let scenario: Scenario = toml::from_str(text).context("invalid scenario")?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenarios always serialize")
    }

    pub fn from_preset(p: &Preset) -> Self {
        let system = match p.system {
            SystemKind::Korchinski => SystemName::Korchinski,
            SystemKind::Modified => SystemName::Modified,
            SystemKind::DoubleWell => SystemName::Doublewell,
        };
        Self {
            name: Some(p.name.to_string()),
            system,
            left: StateSpec {
                u: p.left.u,
                v: p.left.v,
            },
            right: StateSpec {
                u: p.right.u,
                v: p.right.v,
            },
            flux: None,
            output: OutputSpec::default(),
            fvm: Some(FvmSpec {
                a: Some(p.domain.0),
                b: Some(p.domain.1),
                ..FvmSpec::default()
            }),
            tolerances: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, x) in [
            ("left.u", self.left.u),
            ("left.v", self.left.v),
            ("right.u", self.right.u),
            ("right.v", self.right.v),
            ("output.time", self.output.time),
        ] {
            if !x.is_finite() {
                bail!("field `{field}` must be finite, got {x}");
            }
        }
        if self.output.time <= 0.0 {
            bail!("field `output.time` must be positive");
        }
        if self.output.samples < 2 {
            bail!("field `output.samples` must be at least 2");
        }
        match (self.system, &self.flux) {
            (SystemName::Custom, None) => bail!("`system = \"custom\"` needs a [flux] table"),
            (SystemName::Custom, Some(_)) => {
                self.system_spec()?;
            }
            (_, Some(_)) => bail!("[flux] is only allowed with `system = \"custom\"`; named systems pin their fluxes"),
            _ => {}
        }
        if let Some(fvm) = &self.fvm {
            if fvm.cells.is_empty() {
                bail!("field `fvm.cells` must list at least one grid size");
            }
            if !(fvm.cfl > 0.0 && fvm.cfl < 1.0) {
                bail!("field `fvm.cfl` must lie in (0, 1)");
            }
            if !fvm.end_time.is_finite() || fvm.end_time <= 0.0 {
                bail!("field `fvm.end_time` must be positive and finite");
            }
        }
        Ok(())
    }

    pub fn system_spec(&self) -> Result<System> {
        Ok(match self.system {
            SystemName::Korchinski => System::korchinski(),
            SystemName::Modified => System::modified(),
            SystemName::Doublewell => System::double_well(),
            SystemName::Custom => {
                let custom = self.flux.as_ref().context("missing [flux] table")?;
                if custom.pieces.len() != custom.breakpoints.len() + 1 {
                    bail!(
                        "field `flux.pieces` needs one more entry than `flux.breakpoints` ({} vs {})",
                        custom.pieces.len(),
                        custom.breakpoints.len()
                    );
                }
                let lowers = std::iter::once(f64::NEG_INFINITY).chain(custom.breakpoints.iter().copied());
                let pieces = lowers
                    .zip(&custom.pieces)
                    .map(|(lo, &[a, b, c])| (lo, QuadraticPiece::new(a, b, c)))
                    .collect();
                let flux = Flux::new(pieces).context("field `flux`")?;
                let g = match custom.g {
                    VFluxName::Uv => VFluxKind::LinearInV,
                    VFluxName::Uv2 => VFluxKind::QuadraticInV,
                };
                System::new(flux, g)
            }
        })
    }

    pub fn left_state(&self) -> Point {
        Point::new(self.left.u, self.left.v)
    }

    pub fn right_state(&self) -> Point {
        Point::new(self.right.u, self.right.v)
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.clone().unwrap_or_default()
    }
}

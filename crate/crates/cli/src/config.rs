//! Run configuration: JSON schema, validation and conversion into library
//! objects.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use fuzzcyl::partial_bijection::Expr;
use fuzzcyl::subalgebra::ProfileKind;
use fuzzcyl::{BijectionFamily, CrossedProductElement, Cylinder, FamilyKind, Interval, SupportedFunction};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Rep,
    AlgebraCheck,
    PoissonLimit,
    Subalgebra,
    Oracle,
    Orbit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDesc {
    pub kind: FamilyKind,
    pub carrier: Interval<f64>,
    /// Forward and inverse expressions in `x` and `h` for custom families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
}

impl Default for FamilyDesc {
    fn default() -> Self {
        FamilyDesc { kind: FamilyKind::Shift, carrier: Interval::closed(0.0, 1.0), forward: None, inverse: None }
    }
}

impl FamilyDesc {
    pub fn build(&self) -> Result<BijectionFamily<f64>> {
        Ok(match self.kind {
            FamilyKind::Custom => {
                let parse = |s: &Option<String>, what: &str| -> Result<Expr> {
                    s.as_deref()
                        .ok_or_else(|| anyhow!("custom family needs a `{what}` expression"))?
                        .parse()
                        .map_err(|e| anyhow!("{what}: {e}"))
                };
                BijectionFamily::custom(self.carrier, parse(&self.forward, "forward")?, parse(&self.inverse, "inverse")?, None)?
            }
            kind => BijectionFamily::new(kind, self.carrier)?,
        })
    }
}

/// A coefficient function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDesc {
    /// `Σ c_k x^k`, coefficients as `[re, im]`.
    Polynomial { coeffs: Vec<[f64; 2]> },
    ExpIkx { k: f64 },
    /// `√(a x + b)`.
    SqrtAffine { a: f64, b: f64 },
    Indicator { interval: Interval<f64> },
    Constant { value: [f64; 2] },
    Product { factors: Vec<FunctionDesc> },
}

impl FunctionDesc {
    pub fn build(&self, carrier: Interval<f64>) -> Result<SupportedFunction<f64>> {
        let c = |z: &[f64; 2]| Complex::new(z[0], z[1]);
        Ok(match self {
            FunctionDesc::Polynomial { coeffs } => SupportedFunction::polynomial(carrier, coeffs.iter().map(c).collect()),
            FunctionDesc::ExpIkx { k } => SupportedFunction::exp_ikx(carrier, *k),
            FunctionDesc::SqrtAffine { a, b } => SupportedFunction::sqrt_affine(carrier, *a, *b),
            FunctionDesc::Indicator { interval } => SupportedFunction::partial_identity(*interval, carrier),
            FunctionDesc::Constant { value } => SupportedFunction::constant(carrier, c(value)),
            FunctionDesc::Product { factors } => {
                let mut acc = SupportedFunction::constant(carrier, Complex::new(1.0, 0.0));
                for f in factors {
                    acc = acc.multiply(&f.build(carrier)?);
                }
                acc
            }
        })
    }
}

/// One term `f δ_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDesc {
    pub n: i64,
    #[serde(rename = "fn")]
    pub f: FunctionDesc,
}

/// A crossed-product element `Σ f_n δ_n`.
pub type ElementDesc = Vec<TermDesc>;

pub fn build_element(cyl: &Arc<Cylinder<f64>>, desc: &ElementDesc) -> Result<CrossedProductElement<f64>> {
    let terms = desc
        .iter()
        .map(|t| Ok((t.n, t.f.build(cyl.carrier())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossedProductElement::from_terms(cyl, terms))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { residual: 1e-9 }
    }
}

fn default_grid() -> usize {
    101
}

fn default_truncation() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub family: FamilyDesc,
    #[serde(default)]
    pub elements: Vec<ElementDesc>,
    #[serde(default)]
    pub hbar: Vec<f64>,
    #[serde(default = "default_grid")]
    pub grid_size: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    /// Random elements (or instances) drawn by randomized suites.
    #[serde(default)]
    pub samples: usize,
    /// Orbit base points for `rep` and `orbit`.
    #[serde(default)]
    pub base_points: Vec<f64>,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    /// Commutator profile for `subalgebra`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileKind>,
    /// `C(u)` for the custom profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_c: Option<String>,
    /// Left end `a` of `[a, ∞)` for plane profiles (default `−ℏ/2`), or of
    /// the carrier of a custom profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Set size for `oracle`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        serde_json::from_value(serde_json::json!({ "command": command })).expect("defaults are valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.hbar.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            bail!("every hbar must be finite and positive, got {:?}", self.hbar);
        }
        if self.grid_size < 2 {
            bail!("grid_size must be at least 2");
        }
        if !(self.tolerances.residual >= 0.0) {
            bail!("tolerances.residual must be nonnegative");
        }
        if self.truncation == 0 {
            bail!("truncation must be positive");
        }
        if self.size.is_some_and(|m| m == 0 || m > 16) {
            bail!("oracle size must lie in 1..=16");
        }
        if self.profile == Some(ProfileKind::Custom) && self.custom_c.is_none() {
            bail!("the custom profile needs `custom_c`");
        }
        Ok(())
    }

    /// The first deformation parameter, or `default`.
    pub fn hbar_or(&self, default: f64) -> f64 {
        self.hbar.first().copied().unwrap_or(default)
    }

    pub fn cylinder(&self, default_hbar: f64) -> Result<Arc<Cylinder<f64>>> {
        let fam = self.family.build().context("family")?;
        Ok(Cylinder::from_family(&fam, self.hbar_or(default_hbar))?)
    }
}

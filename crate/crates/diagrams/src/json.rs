//! JSON form of diagrams and closed forms. Floats are written with 17
//! significant digits.

use cfield::{c64, FieldExponent};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::closed::{ClosedFormFactor, GammaFactor, MomentumPower};
use crate::diagram::{Diagram, Edge, ExternalVertex, Position, Wave};
use crate::DiagramError;

/// `f64` serialized as `{:.16e}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite number"));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Num)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ExternalJson {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z_re: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z_im: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub momentum: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    pub m: i32,
    pub w_re: Num,
    pub w_im: Num,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct WaveJson {
    pub vertex: String,
    pub momentum: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GammaJson {
    pub m: i32,
    pub w_re: Num,
    pub w_im: Num,
    pub mult: i32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MomentumJson {
    pub symbol: String,
    pub m: i32,
    pub w_re: Num,
    pub w_im: Num,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FactorJson {
    pub pi_power: i32,
    pub phase_quarter_turns: i32,
    pub sign: i32,
    pub gamma_factors: Vec<GammaJson>,
    pub momentum_powers: Vec<MomentumJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DiagramJson {
    pub external: Vec<ExternalJson>,
    pub internal: Vec<String>,
    pub edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub waves: Vec<WaveJson>,
    #[serde(default)]
    pub prefactor: Option<FactorJson>,
}

fn exponent(m: i32, re: Num, im: Num) -> FieldExponent {
    FieldExponent::from_mw(m, c64(re.0, im.0))
}

impl From<&ClosedFormFactor> for FactorJson {
    fn from(f: &ClosedFormFactor) -> Self {
        Self {
            pi_power: f.pi_power,
            phase_quarter_turns: f.phase_quarter_turns,
            sign: f.sign,
            gamma_factors: f
                .gamma_factors
                .iter()
                .map(|g| GammaJson {
                    m: g.u.m(),
                    w_re: Num(g.u.w().re),
                    w_im: Num(g.u.w().im),
                    mult: g.mult,
                })
                .collect(),
            momentum_powers: f
                .momentum_powers
                .iter()
                .map(|p| MomentumJson {
                    symbol: p.symbol.clone(),
                    m: p.alpha.m(),
                    w_re: Num(p.alpha.w().re),
                    w_im: Num(p.alpha.w().im),
                })
                .collect(),
        }
    }
}

impl TryFrom<FactorJson> for ClosedFormFactor {
    type Error = DiagramError;

    fn try_from(f: FactorJson) -> Result<Self, DiagramError> {
        if f.sign != 1 && f.sign != -1 {
            return Err(DiagramError::Json(format!("sign must be ±1, got {}", f.sign)));
        }
        Ok(ClosedFormFactor {
            pi_power: f.pi_power,
            phase_quarter_turns: f.phase_quarter_turns,
            sign: f.sign,
            gamma_factors: f
                .gamma_factors
                .into_iter()
                .map(|g| GammaFactor {
                    u: exponent(g.m, g.w_re, g.w_im),
                    mult: g.mult,
                })
                .collect(),
            momentum_powers: f
                .momentum_powers
                .into_iter()
                .map(|p| MomentumPower {
                    alpha: exponent(p.m, p.w_re, p.w_im),
                    symbol: p.symbol,
                })
                .collect(),
        })
    }
}

impl From<&Diagram> for DiagramJson {
    fn from(d: &Diagram) -> Self {
        Self {
            external: d
                .external
                .iter()
                .map(|e| match &e.position {
                    Position::Point(z) => ExternalJson {
                        label: e.label.clone(),
                        z_re: Some(Num(z.re)),
                        z_im: Some(Num(z.im)),
                        momentum: None,
                    },
                    Position::Momentum(s) => ExternalJson {
                        label: e.label.clone(),
                        z_re: None,
                        z_im: None,
                        momentum: Some(s.clone()),
                    },
                })
                .collect(),
            internal: d.internal.clone(),
            edges: d
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    m: e.alpha.m(),
                    w_re: Num(e.alpha.w().re),
                    w_im: Num(e.alpha.w().im),
                })
                .collect(),
            waves: d
                .waves
                .iter()
                .map(|w| WaveJson {
                    vertex: w.vertex.clone(),
                    momentum: w.momentum.clone(),
                })
                .collect(),
            prefactor: Some(FactorJson::from(&d.prefactor)),
        }
    }
}

impl TryFrom<DiagramJson> for Diagram {
    type Error = DiagramError;

    fn try_from(j: DiagramJson) -> Result<Self, DiagramError> {
        let mut external = Vec::new();
        for e in j.external {
            let position = match (e.z_re, e.z_im, e.momentum) {
                (Some(re), im, None) => Position::Point(c64(re.0, im.map_or(0.0, |x| x.0))),
                (None, None, Some(s)) => Position::Momentum(s),
                _ => {
                    return Err(DiagramError::Json(format!(
                        "external vertex {} needs either z_re/z_im or momentum",
                        e.label
                    )))
                }
            };
            external.push(ExternalVertex { label: e.label, position });
        }
        let d = Diagram {
            external,
            internal: j.internal,
            edges: j
                .edges
                .into_iter()
                .map(|e| Edge {
                    alpha: exponent(e.m, e.w_re, e.w_im),
                    from: e.from,
                    to: e.to,
                })
                .collect(),
            waves: j
                .waves
                .into_iter()
                .map(|w| Wave {
                    vertex: w.vertex,
                    momentum: w.momentum,
                })
                .collect(),
            prefactor: match j.prefactor {
                Some(f) => f.try_into()?,
                None => ClosedFormFactor::one(),
            },
        };
        d.validate()?;
        Ok(d)
    }
}

pub fn diagram_to_json(d: &Diagram) -> Result<String, DiagramError> {
    Ok(serde_json::to_string_pretty(&DiagramJson::from(d))?)
}

pub fn diagram_from_json(s: &str) -> Result<Diagram, DiagramError> {
    let j: DiagramJson = serde_json::from_str(s)?;
    j.try_into()
}

pub fn factor_to_json(f: &ClosedFormFactor) -> Result<String, DiagramError> {
    Ok(serde_json::to_string_pretty(&FactorJson::from(f))?)
}

pub fn factor_from_json(s: &str) -> Result<ClosedFormFactor, DiagramError> {
    let j: FactorJson = serde_json::from_str(s)?;
    j.try_into()
}

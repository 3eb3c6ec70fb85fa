//! JSON scene files (`"version": 1`) and their canonical printing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::doublecomplex::DoubleComplexSpec;
use crate::equivariant::MomentData;
use crate::error::{Error, Result};
use crate::examples::{Quotient, Scene};
use crate::gcs::deform::{Deformation, EpsTerm};
use crate::gcs::{standard_complex, standard_omega};
use crate::linalg::QMatrix;
use crate::polyforms::{parse_form, parse_function, TwistData};
use crate::scalars::parse::parse_scalar;
use crate::scalars::{Point, Qi, Var};
use crate::spinor::{Chart, ChartKind, QVector};

pub const SCENE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub kind: ChartKind,
    /// Complex dimension (complex charts).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Real dimension (real charts).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsSpec {
    pub coeff: String,
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub weights: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSpec {
    pub f: Vec<String>,
    pub eta: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuotientKind {
    Projective,
    BlownUpProjective,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSpec {
    pub kind: QuotientKind,
    pub n: usize,
}

/// On-disk layout. Optional fields fall back to the standard structures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub version: Option<u32>,
    #[serde(default)]
    pub name: String,
    pub chart: ChartSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub epsilon: Vec<EpsSpec>,
    #[serde(default = "one")]
    pub scale: String,
    #[serde(rename = "H", default = "zero")]
    pub h: String,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    pub action: ActionSpec,
    pub moment: MomentSpec,
    #[serde(default)]
    pub level: Vec<String>,
    #[serde(default)]
    pub points: Vec<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub double_complex: Option<DoubleComplexSpec>,
}

fn one() -> String {
    "1".into()
}

fn zero() -> String {
    "0".into()
}

/// Line and column (1-based) of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Parser over the raw text so that expression errors point into the file.
struct Loader<'a> {
    text: &'a str,
}

impl Loader<'_> {
    fn relocate(&self, field: &str, src: &str, e: Error) -> Error {
        let Error::Parse { column, token, message, .. } = e else {
            return e;
        };
        let quoted = serde_json::to_string(src).unwrap_or_default();
        match self.text.find(&quoted) {
            Some(off) => {
                let (line, col) = position(self.text, off);
                Error::Parse { line, column: col + column, token, message: format!("{field}: {message}") }
            }
            None => Error::Parse { line: 0, column, token, message: format!("{field}: {message}") },
        }
    }

    fn scalar(&self, field: &str, src: &str) -> Result<Qi> {
        parse_scalar(src).map_err(|e| self.relocate(field, src, e))
    }

    fn scalars(&self, field: &str, v: &[String]) -> Result<Vec<Qi>> {
        v.iter().map(|s| self.scalar(field, s)).collect()
    }

    fn matrix(&self, field: &str, rows: &[Vec<String>], m: usize) -> Result<QMatrix> {
        let parsed = rows.iter().map(|r| self.scalars(field, r)).collect::<Result<Vec<_>>>()?;
        if parsed.len() != m || parsed.iter().any(|r| r.len() != m) {
            return Err(Error::Scene(format!("{field} must be a {m}×{m} matrix")));
        }
        Ok(QMatrix::from_rows(parsed))
    }

    fn token(&self, chart: &Chart, field: &str, tok: &str) -> Result<QVector> {
        let m = chart.m;
        if let Some(a) = chart.parse_vector_token(tok) {
            return Ok(QVector::unit(m, a));
        }
        if let Some(a) = chart.parse_form_token(tok) {
            return Ok(QVector::unit(m, m + a));
        }
        let off = self.text.find(&format!("\"{tok}\"")).unwrap_or(0);
        let (line, column) = position(self.text, off + 1);
        Err(Error::Parse {
            line,
            column,
            token: tok.into(),
            message: format!("{field}: expected a token like d/dz0 or dzb0"),
        })
    }
}

fn token_of(chart: &Chart, v: &QVector) -> Result<String> {
    let m = chart.m;
    let nz: Vec<usize> = (0..2 * m).filter(|&a| !v.c[a].is_zero()).collect();
    match nz.as_slice() {
        [a] if v.c[*a].is_one() && *a < m => Ok(chart.vector_token(*a)),
        [a] if v.c[*a].is_one() => Ok(chart.form_token(*a - m)),
        _ => Err(Error::Scene("ε factors must be coordinate vectors or covectors".into())),
    }
}

fn matrix_strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(Qi::to_string).collect()).collect()
}

impl SceneFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let (line, column) = (e.line(), e.column());
            let token = text
                .lines()
                .nth(line.saturating_sub(1))
                .map(|l| l.chars().skip(column.saturating_sub(1)).take(12).collect::<String>())
                .unwrap_or_default();
            Error::Parse { line, column, token, message: e.to_string() }
        })
    }

    /// Converts to a validated [`Scene`]; `text` is the source used for error positions.
    pub fn to_scene(&self, text: &str) -> Result<Scene> {
        match self.version {
            Some(SCENE_VERSION) => {}
            Some(v) => return Err(Error::Scene(format!("unsupported scene version {v}"))),
            None => return Err(Error::Scene("missing mandatory field \"version\"".into())),
        }
        let ld = Loader { text };
        let chart = match (self.chart.kind, self.chart.n, self.chart.m) {
            (ChartKind::Complex, Some(n), None) if (1..=15).contains(&n) => Chart::complex(n),
            (ChartKind::Real, None, Some(m)) if m % 2 == 0 && (2..=30).contains(&m) => Chart::real(m),
            _ => return Err(Error::Scene("chart needs {kind: complex, n ≤ 15} or {kind: real, m even ≤ 30}".into())),
        };
        let m = chart.m;
        let omega = match &self.omega {
            Some(rows) => ld.matrix("omega", rows, m)?,
            None => standard_omega(&chart),
        };
        let complex = match &self.complex {
            Some(rows) => ld.matrix("complex", rows, m)?,
            None => standard_complex(&chart),
        };
        let mut epsilon = Deformation::zero();
        for e in &self.epsilon {
            let coeff = parse_function(&chart, &e.coeff).map_err(|x| ld.relocate("epsilon.coeff", &e.coeff, x))?;
            epsilon.terms.push(EpsTerm {
                coeff,
                u: ld.token(&chart, "epsilon.first", &e.first)?,
                w: ld.token(&chart, "epsilon.second", &e.second)?,
            });
        }
        let form = |field: &str, src: &str| parse_form(&chart, src).map_err(|x| ld.relocate(field, src, x));
        let tw = TwistData::new(&chart, form("H", &self.h)?)?;
        let b = self.b.as_ref().map(|s| form("B", s)).transpose()?;
        let weights = self.action.weights.iter().map(|w| ld.scalars("action.weights", w)).collect::<Result<Vec<_>>>()?;
        let f = self
            .moment
            .f
            .iter()
            .map(|s| parse_function(&chart, s).map_err(|x| ld.relocate("moment.f", s, x)))
            .collect::<Result<Vec<_>>>()?;
        let eta = self.moment.eta.iter().map(|s| form("moment.eta", s)).collect::<Result<Vec<_>>>()?;
        let level = ld.scalars("level", &self.level)?;
        let mut points = Vec::new();
        for p in &self.points {
            let mut pt = Point::new();
            for (k, v) in p {
                let var = Var::parse(k)
                    .filter(|v| chart.index_of(*v).is_some())
                    .ok_or_else(|| Error::UnknownVariable(k.clone()))?;
                pt.insert(var, ld.scalar("points", v)?);
            }
            points.push(pt);
        }
        let scene = Scene {
            name: self.name.clone(),
            chart,
            omega,
            complex,
            epsilon,
            scale: ld.scalar("scale", &self.scale)?,
            tw,
            b,
            weights,
            moment: MomentData { f, eta },
            level,
            points,
            circle: self.circle.as_ref().map(|c| ld.scalars("circle", c)).transpose()?,
            quotient: self.quotient.as_ref().map(|q| match q.kind {
                QuotientKind::Projective => Quotient::Projective(q.n),
                QuotientKind::BlownUpProjective => Quotient::BlownUpProjective(q.n),
            }),
            double_complex: self.double_complex.clone(),
        };
        validate(&scene)?;
        Ok(scene)
    }

    pub fn from_scene(s: &Scene) -> Result<Self> {
        let chart = &s.chart;
        let epsilon = s
            .epsilon
            .terms
            .iter()
            .map(|t| {
                Ok(EpsSpec { coeff: t.coeff.to_string(), first: token_of(chart, &t.u)?, second: token_of(chart, &t.w)? })
            })
            .collect::<Result<Vec<_>>>()?;
        let strs = |v: &[Qi]| v.iter().map(Qi::to_string).collect::<Vec<_>>();
        Ok(SceneFile {
            version: Some(SCENE_VERSION),
            name: s.name.clone(),
            chart: match chart.kind {
                ChartKind::Complex => ChartSpec { kind: chart.kind, n: Some(chart.n()), m: None },
                ChartKind::Real => ChartSpec { kind: chart.kind, n: None, m: Some(chart.m) },
            },
            omega: Some(matrix_strings(&s.omega)),
            complex: Some(matrix_strings(&s.complex)),
            epsilon,
            scale: s.scale.to_string(),
            h: chart.fmt_form(&s.tw.h),
            b: s.b.as_ref().map(|b| chart.fmt_form(b)),
            action: ActionSpec { weights: s.weights.iter().map(|w| strs(w)).collect() },
            moment: MomentSpec {
                f: s.moment.f.iter().map(|f| f.to_string()).collect(),
                eta: s.moment.eta.iter().map(|e| chart.fmt_form(e)).collect(),
            },
            level: strs(&s.level),
            points: s
                .points
                .iter()
                .map(|p| p.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
                .collect(),
            circle: s.circle.as_ref().map(|c| strs(c)),
            quotient: s.quotient.map(|q| match q {
                Quotient::Projective(n) => QuotientSpec { kind: QuotientKind::Projective, n },
                Quotient::BlownUpProjective(n) => QuotientSpec { kind: QuotientKind::BlownUpProjective, n },
            }),
            double_complex: s.double_complex.clone(),
        })
    }
}

/// Like `to_string_pretty`, but arrays of scalars stay on one line.
fn pretty(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                pretty(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                pretty(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

/// Component-level invariants every scene must satisfy.
pub fn validate(s: &Scene) -> Result<()> {
    let r = s.weights.len();
    s.j_omega()?;
    s.eps_frame()?;
    let eq = s.equivariant()?;
    if !s.level.is_empty() && s.level.len() != r {
        return Err(Error::Scene(format!("level has {} entries but the torus has rank {r}", s.level.len())));
    }
    if let Some(c) = &s.circle {
        if c.len() != s.chart.n() {
            return Err(Error::Scene("circle weights must match the chart".into()));
        }
    }
    if let Some(b) = &s.b {
        if !eq.is_invariant_form(b) {
            return Err(Error::BNotClosedOrNotInvariant);
        }
    }
    for p in &s.points {
        s.complete(p)?;
    }
    if let Some(dc) = &s.double_complex {
        dc.build()?;
    }
    Ok(())
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Self> {
        SceneFile::from_json(text)?.to_scene(text)
    }

    /// Canonical pretty printing; reparses to an equal scene.
    pub fn to_json(&self) -> Result<String> {
        let f = SceneFile::from_scene(self)?;
        let v = serde_json::to_value(&f).map_err(|e| Error::Scene(e.to_string()))?;
        let mut out = String::new();
        pretty(&v, 0, &mut out);
        Ok(out)
    }

    /// sha256 of the canonical compact printing.
    pub fn content_hash(&self) -> Result<String> {
        let f = SceneFile::from_scene(self)?;
        let compact = serde_json::to_string(&f).map_err(|e| Error::Scene(e.to_string()))?;
        Ok(hex::encode(Sha256::digest(compact.as_bytes())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{build_blowup, build_cpn};

    #[test]
    fn round_trip() {
        for s in [build_cpn(3, &Qi::from_frac(1, 100)).unwrap(), build_blowup(3, None, &Qi::from_frac(1, 100)).unwrap()] {
            let text = s.to_json().unwrap();
            let back = Scene::from_json(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.content_hash().unwrap(), s.content_hash().unwrap());
        }
    }

    #[test]
    fn version_is_mandatory() {
        let s = build_cpn(3, &Qi::one()).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&s.to_json().unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("version");
        let e = Scene::from_json(&v.to_string()).unwrap_err();
        assert!(matches!(e, Error::Scene(_)));
    }

    #[test]
    fn parse_errors_point_into_the_file() {
        let text = "{\n  \"version\": 1,\n  \"chart\": {\"kind\": \"complex\", \"n\": 2},\n  \"action\": {\"weights\": []},\n  \"moment\": {\"f\": [], \"eta\": []},\n  \"H\": \"dz0∧dz1 + @\"\n}";
        match Scene::from_json(text).unwrap_err() {
            Error::Parse { line, token, .. } => {
                assert_eq!(line, 6);
                assert_eq!(token, "@");
            }
            e => panic!("{e:?}"),
        }
        match Scene::from_json("{\"version\": 1,\n \"chart\": }").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (2, 11)),
            e => panic!("{e:?}"),
        }
    }
}

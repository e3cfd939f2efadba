//! JSON and CSV file formats.
//!
//! Complex numbers are `[re, im]` pairs of doubles, always written with 17
//! significant digits so that parsing the output reproduces every bit.

use std::io::Write;
use std::path::Path;

use cxell::bodies::{
    ellipsoid_oracle, hull_oracle, lp_ball_oracle, BallProduct, BodyOracle, PerturbedEllipsoid, RealEllipsoidBody,
};
use cxell::characterize::Witness;
use cxell::{CMatrix, ComplexEllipsoid, ComplexVector, HermitianShape, C64};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::CliError;

pub type Pair = [f64; 2];

pub fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

pub fn pairs(v: &ComplexVector) -> Vec<Pair> {
    v.iter().map(|z| pair(*z)).collect()
}

pub fn matrix_pairs(m: &CMatrix) -> Vec<Pair> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(pair(m[(i, j)]));
        }
    }
    out
}

fn vector(field: &str, v: &[Pair]) -> Result<ComplexVector, CliError> {
    if v.is_empty() {
        return Err(CliError::input(field, "empty vector"));
    }
    Ok(ComplexVector::from(v.iter().map(|p| C64::new(p[0], p[1])).collect::<Vec<_>>()))
}

fn square(field: &str, data: &[Pair], n: usize) -> Result<CMatrix, CliError> {
    if data.len() != n * n {
        return Err(CliError::input(field, format!("expected {} entries for a {n}×{n} matrix, found {}", n * n, data.len())));
    }
    CMatrix::from_row_major(n, n, data.iter().map(|p| C64::new(p[0], p[1])).collect())
        .map_err(|e| CliError::input(field, e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<Vec<Pair>>,
}

impl PointCloud {
    pub fn from_points(points: &[ComplexVector]) -> Self {
        Self { dim: points.first().map_or(0, ComplexVector::dim), points: points.iter().map(pairs).collect() }
    }

    pub fn to_points(&self) -> Result<Vec<ComplexVector>, CliError> {
        if self.points.is_empty() {
            return Err(CliError::input("points", "no points"));
        }
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.len() != self.dim {
                    return Err(CliError::input(
                        &format!("points[{i}]"),
                        format!("expected {} coordinates (dim), found {}", self.dim, p.len()),
                    ));
                }
                vector(&format!("points[{i}]"), p)
            })
            .collect()
    }

    /// Lexicographic order on the coordinates `(re₁, im₁, re₂, …)`.
    pub fn canonicalize(&mut self) {
        self.points.sort_by(|a, b| {
            a.iter()
                .flatten()
                .zip(b.iter().flatten())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(a.len().cmp(&b.len()))
        });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidRecord {
    pub center: Vec<Pair>,
    /// Row-major entries of the shape matrix.
    pub shape: Vec<Pair>,
}

impl EllipsoidRecord {
    pub fn from_ellipsoid(e: &ComplexEllipsoid) -> Self {
        Self { center: pairs(e.center()), shape: matrix_pairs(e.shape().matrix()) }
    }

    pub fn to_ellipsoid(&self) -> Result<ComplexEllipsoid, CliError> {
        let center = vector("center", &self.center)?;
        let shape = square("shape", &self.shape, center.dim())?;
        let shape = HermitianShape::new(shape).map_err(|e| CliError::input("shape", e))?;
        ComplexEllipsoid::new(center, shape).map_err(|e| CliError::input("shape", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Slab {
    pub a: Vec<Pair>,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlabFile {
    pub slabs: Vec<Slab>,
}

impl SlabFile {
    pub fn to_slabs(&self) -> Result<Vec<(ComplexVector, f64)>, CliError> {
        if self.slabs.is_empty() {
            return Err(CliError::input("slabs", "no slabs"));
        }
        let n = self.slabs[0].a.len();
        self.slabs
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let field = format!("slabs[{i}]");
                if s.a.len() != n {
                    return Err(CliError::input(&format!("{field}.a"), format!("expected {n} coordinates, found {}", s.a.len())));
                }
                if !(s.b > 0.0) {
                    return Err(CliError::input(&format!("{field}.b"), format!("half-width must be positive, found {}", s.b)));
                }
                Ok((vector(&format!("{field}.a"), &s.a)?, s.b))
            })
            .collect()
    }
}

/// A convex body described by its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ellipsoid {
        center: Vec<Pair>,
        shape: Vec<Pair>,
    },
    LpBall {
        p: f64,
        dim: usize,
    },
    /// Ellipsoid plus `eps·(Re a†y)⁴` in its defining function.
    Perturbed {
        center: Vec<Pair>,
        shape: Vec<Pair>,
        direction: Vec<Pair>,
        eps: f64,
    },
    Hull {
        points: Vec<Vec<Pair>>,
    },
    /// `{x : (x−c)ᵀS(x−c) ≤ 1}` in interleaved real coordinates; `shape` is
    /// row-major `2n × 2n`.
    RealEllipsoid {
        center: Vec<Pair>,
        shape: Vec<f64>,
    },
    BallProduct {
        blocks: Vec<usize>,
    },
}

impl BodySpec {
    pub fn from_ellipsoid(e: &ComplexEllipsoid) -> Self {
        let r = EllipsoidRecord::from_ellipsoid(e);
        Self::Ellipsoid { center: r.center, shape: r.shape }
    }

    pub fn from_perturbed(body: &PerturbedEllipsoid) -> Self {
        let r = EllipsoidRecord::from_ellipsoid(body.base());
        Self::Perturbed { center: r.center, shape: r.shape, direction: pairs(body.direction()), eps: body.eps() }
    }

    pub fn from_real_ellipsoid(body: &RealEllipsoidBody) -> Self {
        let s = body.shape();
        let shape = (0..s.nrows()).flat_map(|i| (0..s.ncols()).map(move |j| s[(i, j)])).collect();
        Self::RealEllipsoid { center: pairs(body.center()), shape }
    }

    pub fn to_body(&self) -> Result<Box<dyn BodyOracle>, CliError> {
        Ok(match self {
            Self::Ellipsoid { center, shape } => {
                let rec = EllipsoidRecord { center: center.clone(), shape: shape.clone() };
                Box::new(ellipsoid_oracle(&rec.to_ellipsoid()?))
            }
            Self::LpBall { p, dim } => {
                if *dim == 0 {
                    return Err(CliError::input("dim", "must be at least 1"));
                }
                Box::new(lp_ball_oracle(*p, *dim).map_err(|e| CliError::input("p", e))?)
            }
            Self::Perturbed { center, shape, direction, eps } => {
                let rec = EllipsoidRecord { center: center.clone(), shape: shape.clone() };
                let a = vector("direction", direction)?;
                Box::new(PerturbedEllipsoid::new(rec.to_ellipsoid()?, &a, *eps).map_err(|e| CliError::input("direction", e))?)
            }
            Self::Hull { points } => {
                let dim = points.first().map_or(0, Vec::len);
                let cloud = PointCloud { dim, points: points.clone() };
                Box::new(hull_oracle(&cloud.to_points()?).map_err(|e| CliError::input("points", e))?)
            }
            Self::RealEllipsoid { center, shape } => {
                let c = vector("center", center)?;
                let d = 2 * c.dim();
                if shape.len() != d * d {
                    return Err(CliError::input("shape", format!("expected {} entries, found {}", d * d, shape.len())));
                }
                let s = DMatrix::from_row_slice(d, d, shape);
                Box::new(RealEllipsoidBody::new(c, s).map_err(|e| CliError::input("shape", e))?)
            }
            Self::BallProduct { blocks } => Box::new(BallProduct::new(blocks.clone()).map_err(|e| CliError::input("blocks", e))?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessRecord {
    Line { base: Vec<Pair>, direction: Vec<Pair> },
    Direction { direction: Vec<Pair> },
    Plane { base: Vec<Pair>, frame: Vec<Pair> },
}

impl WitnessRecord {
    pub fn from_witness(w: &Witness) -> Option<Self> {
        match w {
            Witness::None => None,
            Witness::Line { base, direction } => Some(Self::Line { base: pairs(base), direction: pairs(direction) }),
            Witness::Direction(d) => Some(Self::Direction { direction: pairs(d) }),
            Witness::Plane { base, frame } => Some(Self::Plane { base: pairs(base), frame: matrix_pairs(frame) }),
        }
    }
}

/// Writes every float as `d.dddddddddddddddde±x`: 17 significant digits.
struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value.into())
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats);
    value.serialize(&mut ser).map_err(|e| CliError::Output(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Output(e.to_string()))
}

/// Parses JSON, reporting the path of the offending field together with the
/// line and column of the offending token.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Input { field: path, message: e.into_inner().to_string() }
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input("--input", format!("{}: {e}", path.display())))?;
    from_json(&text)
}

/// Replaces `path` in one step: the text goes to a temporary file in the
/// same directory, which is then renamed.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::Output(e.to_string()))?;
    tmp.write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))?;
    tmp.persist(path).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(())
}

fn flatten_scalars(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten_scalars(&key(k), x, out);
            }
        }
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Array(_) | Value::Null => {}
    }
}

/// CSV with the scalar fields of a JSON report (nested keys joined by `.`).
/// A report with a `theorems` array gets one row per theorem instead.
pub fn to_csv(json: &str) -> Result<String, CliError> {
    let value: Value = serde_json::from_str(json).map_err(|e| CliError::Output(e.to_string()))?;
    let mut rows: Vec<Vec<(String, String)>> = Vec::new();
    if let Some(Value::Array(items)) = value.get("theorems") {
        for item in items {
            let mut row = Vec::new();
            flatten_scalars("", item, &mut row);
            rows.push(row);
        }
    } else {
        let mut row = Vec::new();
        flatten_scalars("", &value, &mut row);
        rows.push(row);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        w.write_record(first.iter().map(|(k, _)| k)).map_err(|e| CliError::Output(e.to_string()))?;
    }
    for row in &rows {
        w.write_record(row.iter().map(|(_, v)| v)).map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

//! JSON and CSV encodings of specs, point sets and reports.
//!
//! Scalars are JSON integers over `F_p` and strings (`"n"` or `"n/d"`) over
//! ℚ. Fields are `{"kind":"prime","p":13}` or `{"kind":"rational"}`.

use std::path::Path;

use bisector_core::geom::{CanonLine, Carrier, Circle, Point};
use bisector_core::{ConfigSpec, FieldSpec, Isometry, IsometryClass, PointSet, Scalar};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` needs parameter `{param}`")]
    MissingParam { family: String, param: &'static str },
    #[error("bad field `{0}`; expected `prime:<p>` or `rational`")]
    BadField(String),
    #[error("line {line}: {msg}")]
    PointList { line: usize, msg: String },
    #[error("input is neither a spec, a point set nor a point list: {0}")]
    Unrecognized(String),
    #[error(transparent)]
    Core(#[from] bisector_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

pub fn parse_field(s: &str) -> Result<FieldSpec> {
    let s = s.trim();
    if s == "rational" {
        return Ok(FieldSpec::Rational);
    }
    let p = s
        .strip_prefix("prime:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| FormatError::BadField(s.to_string()))?;
    Ok(FieldSpec::prime(p)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldJson {
    Text(String),
    Object { kind: String, p: Option<u64> },
}

impl FieldJson {
    fn resolve(self) -> Result<FieldSpec> {
        match self {
            FieldJson::Text(s) => parse_field(&s),
            FieldJson::Object { kind, p } => match (kind.as_str(), p) {
                ("rational", _) => Ok(FieldSpec::Rational),
                ("prime", Some(p)) => Ok(FieldSpec::prime(p)?),
                _ => Err(FormatError::BadField(kind)),
            },
        }
    }
}

#[derive(Deserialize)]
struct SpecJson {
    family: String,
    n: Option<u32>,
    p: Option<u32>,
    s: Option<u32>,
    seed: Option<u64>,
    field: Option<FieldJson>,
}

/// Fallbacks for spec parameters not given in the JSON itself.
#[derive(Clone, Copy, Debug)]
pub struct SpecDefaults {
    pub field: FieldSpec,
    pub seed: u64,
}

impl Default for SpecDefaults {
    fn default() -> Self {
        SpecDefaults { field: FieldSpec::Rational, seed: 0 }
    }
}

fn spec_from_json(raw: SpecJson, defaults: SpecDefaults) -> Result<ConfigSpec> {
    let family = raw.family.clone();
    let need = |v: Option<u32>, param| v.ok_or_else(|| FormatError::MissingParam { family: family.clone(), param });
    let field = match raw.field {
        Some(f) => f.resolve()?,
        None => defaults.field,
    };
    Ok(match raw.family.as_str() {
        "collinear" => ConfigSpec::Collinear { field, n: need(raw.n, "n")? },
        "grid" => ConfigSpec::Grid { p: need(raw.p, "p")?, s: need(raw.s, "s")? },
        "circle_rational" => ConfigSpec::CircleRational { n: need(raw.n, "n")? },
        "circle_subgroup" => ConfigSpec::CircleSubgroup { p: need(raw.p, "p")? },
        "random" => ConfigSpec::Random { field, n: need(raw.n, "n")?, seed: raw.seed.unwrap_or(defaults.seed) },
        other => return Err(FormatError::UnknownFamily(other.to_string())),
    })
}

pub fn parse_spec(value: Value, defaults: SpecDefaults) -> Result<ConfigSpec> {
    spec_from_json(serde_json::from_value(value)?, defaults)
}

pub fn parse_specs(value: Value, defaults: SpecDefaults) -> Result<Vec<ConfigSpec>> {
    match value {
        Value::Array(items) => items.into_iter().map(|v| parse_spec(v, defaults)).collect(),
        other => Ok(vec![parse_spec(other, defaults)?]),
    }
}

pub fn spec_json(spec: &ConfigSpec) -> Value {
    match *spec {
        ConfigSpec::Collinear { field, n } => json!({"family": "collinear", "field": field_json(field), "n": n}),
        ConfigSpec::Grid { p, s } => json!({"family": "grid", "p": p, "s": s}),
        ConfigSpec::CircleRational { n } => json!({"family": "circle_rational", "n": n}),
        ConfigSpec::CircleSubgroup { p } => json!({"family": "circle_subgroup", "p": p}),
        ConfigSpec::Random { field, n, seed } => {
            json!({"family": "random", "field": field_json(field), "n": n, "seed": seed})
        }
    }
}

/// Either inline JSON or the contents of a file.
pub fn read_input(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else {
        Ok(std::fs::read_to_string(Path::new(arg))?)
    }
}

/// What a `stats` input turned out to be.
pub enum Input {
    Spec(ConfigSpec),
    Points(PointSet),
}

/// Accepts a spec JSON, a point-set JSON (`{"field":…,"points":[[x,y],…]}`)
/// or a point list with one `x,y` per line.
pub fn parse_input(text: &str, defaults: SpecDefaults) -> Result<Input> {
    if let Ok(value) = serde_json::from_str::<Value>(text) {
        if value.get("family").is_some() {
            return Ok(Input::Spec(parse_spec(value, defaults)?));
        }
        if value.get("points").is_some() {
            return Ok(Input::Points(parse_point_set(&value, defaults.field)?));
        }
        return Err(FormatError::Unrecognized(String::from("JSON without `family` or `points`")));
    }
    Ok(Input::Points(parse_point_list(text, defaults.field)?))
}

fn scalar_from_json(field: FieldSpec, v: &Value) -> Option<Scalar> {
    match v {
        Value::Number(n) => field.parse(&n.to_string()).ok(),
        Value::String(s) => field.parse(s).ok(),
        _ => None,
    }
}

pub fn parse_point_set(value: &Value, default_field: FieldSpec) -> Result<PointSet> {
    let field = match value.get("field") {
        Some(f) => serde_json::from_value::<FieldJson>(f.clone())?.resolve()?,
        None => default_field,
    };
    let bad = |i: usize| FormatError::PointList { line: i + 1, msg: String::from("expected [x, y]") };
    let points = value
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| FormatError::Unrecognized(String::from("`points` is not an array")))?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let xy = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad(i))?;
            let x = scalar_from_json(field, &xy[0]).ok_or_else(|| bad(i))?;
            let y = scalar_from_json(field, &xy[1]).ok_or_else(|| bad(i))?;
            Ok(Point::new(x, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PointSet::new(field, points)?)
}

pub fn parse_point_list(text: &str, field: FieldSpec) -> Result<PointSet> {
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| FormatError::PointList { line: i + 1, msg };
        let (x, y) = line.split_once(',').ok_or_else(|| err(String::from("expected `x,y`")))?;
        let x = field.parse(x.trim()).map_err(|e| err(e.to_string()))?;
        let y = field.parse(y.trim()).map_err(|e| err(e.to_string()))?;
        points.push(Point::new(x, y));
    }
    Ok(PointSet::new(field, points)?)
}

pub fn field_json(field: FieldSpec) -> Value {
    match field.modulus() {
        Some(p) => json!({"kind": "prime", "p": p}),
        None => json!({"kind": "rational"}),
    }
}

pub fn scalar_json(s: &Scalar) -> Value {
    match s.as_residue() {
        Some(v) => json!(v),
        None => json!(s.to_string()),
    }
}

pub fn point_json(p: &Point) -> Value {
    json!([scalar_json(&p.x), scalar_json(&p.y)])
}

pub fn point_set_json(set: &PointSet) -> Value {
    json!({
        "field": field_json(set.field()),
        "n": set.len(),
        "points": set.points().iter().map(point_json).collect::<Vec<_>>(),
    })
}

pub fn line_json(l: &CanonLine) -> Value {
    json!([scalar_json(l.alpha()), scalar_json(l.beta()), scalar_json(l.gamma())])
}

pub fn circle_json(c: &Circle) -> Value {
    json!({"center": point_json(c.center()), "r2": scalar_json(c.r2()), "degenerate": c.is_degenerate()})
}

pub fn carrier_json(c: &Carrier) -> Value {
    match c {
        Carrier::Line(l) => json!({"line": line_json(l)}),
        Carrier::Circle(c) => json!({"circle": circle_json(c)}),
    }
}

pub fn isometry_json(iso: &Isometry) -> Value {
    let m = iso.linear();
    let fixed = match iso.class() {
        IsometryClass::Rotation { fixed_point } => point_json(fixed_point),
        _ => Value::Null,
    };
    json!({
        "matrix": [[scalar_json(&m[0][0]), scalar_json(&m[0][1])], [scalar_json(&m[1][0]), scalar_json(&m[1][1])]],
        "shift": point_json(iso.shift()),
        "class": iso.class().name(),
        "fixed_point": fixed,
    })
}

/// Big counts go out as JSON numbers while they fit in `u64`.
pub fn u128_json(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(v) => json!(v),
        Err(_) => json!(v.to_string()),
    }
}

/// Non-finite floats become `null`.
pub fn float_json(v: Option<f64>) -> Value {
    match v {
        Some(x) if x.is_finite() => json!(x),
        _ => Value::Null,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_strings() {
        assert_eq!(parse_field("rational").unwrap(), FieldSpec::Rational);
        assert_eq!(parse_field("prime:13").unwrap(), FieldSpec::prime(13).unwrap());
        assert!(matches!(parse_field("prime:2"), Err(FormatError::Core(bisector_core::Error::CharacteristicTwo))));
        assert!(matches!(parse_field("real"), Err(FormatError::BadField(_))));
    }

    #[test]
    fn spec_round_trip() {
        let d = SpecDefaults::default();
        let specs = [
            ConfigSpec::Collinear { field: FieldSpec::prime(7).unwrap(), n: 4 },
            ConfigSpec::Grid { p: 5, s: 5 },
            ConfigSpec::CircleRational { n: 9 },
            ConfigSpec::CircleSubgroup { p: 13 },
            ConfigSpec::Random { field: FieldSpec::Rational, n: 10, seed: 7 },
        ];
        for spec in specs {
            assert_eq!(parse_spec(spec_json(&spec), d).unwrap(), spec);
        }
        let grid: Value = serde_json::from_str(r#"{"family":"grid","p":5,"s":5}"#).unwrap();
        assert_eq!(parse_spec(grid, d).unwrap(), ConfigSpec::Grid { p: 5, s: 5 });
        let bad: Value = serde_json::from_str(r#"{"family":"grid","p":5}"#).unwrap();
        assert!(matches!(parse_spec(bad, d), Err(FormatError::MissingParam { .. })));
    }

    #[test]
    fn point_list_and_set() {
        let q = FieldSpec::Rational;
        let set = parse_point_list("0,0\n1/2, 3\n\n# note\n-1,2/4\n", q).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.get(2), &Point::new(q.int(-1), q.ratio(1, 2).unwrap()));
        let back = parse_point_set(&point_set_json(&set), FieldSpec::prime(5).unwrap()).unwrap();
        assert_eq!(back, set);
        assert!(matches!(parse_point_list("1;2", q), Err(FormatError::PointList { line: 1, .. })));

        let f5 = FieldSpec::prime(5).unwrap();
        let set = parse_point_list("7,1/2\n", f5).unwrap();
        assert_eq!(set.get(0), &Point::from_ints(f5, 2, 3));
        assert_eq!(point_set_json(&set)["points"], json!([[2, 3]]));
    }
}

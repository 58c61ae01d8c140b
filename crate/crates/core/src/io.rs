//! File formats, run configuration and report serialization.
//!
//! Numbers in reports are written with 17 significant digits so every `f64`
//! survives a round trip exactly.

use std::io;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointCloud, Tolerance, DEFAULT_POINT_CAP};
use crate::thick::{IfsModel, SimilarityMap};

/// `{"dim": d, "points": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudFile {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
}

impl CloudFile {
    pub fn into_cloud(self, tol: Tolerance) -> Result<PointCloud> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("dim must be positive".into()));
        }
        for (i, row) in self.points.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::InvalidParameter(format!(
                    "point {i} has {} coordinates, expected {}",
                    row.len(),
                    self.dim
                )));
            }
        }
        let pts = self
            .points
            .into_iter()
            .map(Point::new)
            .collect::<Result<Vec<_>>>()?;
        PointCloud::with_tolerance(pts, tol)
    }

    pub fn from_cloud(cloud: &PointCloud) -> Self {
        CloudFile {
            dim: cloud.dim(),
            points: cloud.points().iter().map(|p| p.coords().to_vec()).collect(),
        }
    }
}

/// `{"coeffs": [[...], ...]}`, one row of convex weights per cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffsFile {
    pub coeffs: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub ratio: f64,
    pub offset: Vec<f64>,
    #[serde(default)]
    pub orthogonal: Option<Vec<Vec<f64>>>,
}

/// `{"dim": d, "maps": [{"ratio": r, "offset": [...]}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfsFile {
    pub dim: usize,
    pub maps: Vec<MapFile>,
}

impl IfsFile {
    pub fn into_model(self) -> Result<IfsModel> {
        let maps = self
            .maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                if m.offset.len() != self.dim {
                    return Err(Error::InvalidParameter(format!(
                        "map {i} offset has {} coordinates, expected {}",
                        m.offset.len(),
                        self.dim
                    )));
                }
                SimilarityMap::new(m.ratio, Point::new(m.offset)?, m.orthogonal)
            })
            .collect::<Result<Vec<_>>>()?;
        IfsModel::new(maps)
    }
}

/// Reads and parses a JSON file: missing or unreadable files give
/// [`Error::Io`], parse and schema errors give [`Error::Malformed`] with the
/// line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, source_name: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed {
        source_name: source_name.into(),
        detail: format!("line {} column {}: {e}", e.line(), e.column()),
    })
}

pub fn read_cloud(path: &Path, tol: Tolerance) -> Result<PointCloud> {
    let f: CloudFile = read_json(path)?;
    f.into_cloud(tol).map_err(|e| Error::Malformed {
        source_name: path.display().to_string(),
        detail: e.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerance: f64,
    pub point_cap: usize,
    pub sum_cap: usize,
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            tolerance: Tolerance::DEFAULT,
            point_cap: DEFAULT_POINT_CAP,
            sum_cap: DEFAULT_POINT_CAP,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<Tolerance> {
        if self.point_cap == 0 || self.sum_cap == 0 {
            return Err(Error::InvalidParameter("caps must be positive".into()));
        }
        Tolerance::new(self.tolerance)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub config: RunConfig,
    pub status: Status,
    pub results: serde_json::Value,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

/// Pretty JSON with 17 significant digits for every float.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    write_json(&mut out, value).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn write_json<W: io::Write, T: Serialize + ?Sized>(w: W, value: &T) -> io::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(w, PreciseFormatter::default());
    value.serialize(&mut ser).map_err(io::Error::other)
}

/// Pretty-printing formatter that writes floats in scientific notation with
/// 17 significant digits.
#[derive(Default)]
pub struct PreciseFormatter {
    pretty: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.pretty.$name(w $(, $arg)*)
            }
        )*
    };
}

impl serde_json::ser::Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", f64::from(value))
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = to_json_string(&serde_json::json!({"x": 0.1, "n": 3, "v": [1.0 / 3.0]}));
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"n\": 3"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["v"][0].as_f64().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn report_round_trip() {
        let r = Report {
            command: vec!["threshold".into(), "--c".into(), "1".into()],
            config: RunConfig::default(),
            status: Status::Pass,
            results: serde_json::json!({"n_main": 3.0 + 2.0 * 2f64.sqrt(), "gap": 1e-300}),
            wall_time_ms: 0.25,
        };
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn ragged_cloud_rejected() {
        let f: CloudFile = parse_json(r#"{"dim": 2, "points": [[0, 1], [2]]}"#, "t").unwrap();
        assert!(f.into_cloud(Tolerance::default()).is_err());
    }

    #[test]
    fn malformed_reports_position() {
        let e =
            parse_json::<CloudFile>("{\n  \"dim\": 2,\n  \"points\": [[0, 1],, ]\n}", "bad.json")
                .unwrap_err();
        match e {
            Error::Malformed {
                source_name,
                detail,
            } => {
                assert_eq!(source_name, "bad.json");
                assert!(detail.starts_with("line 3"), "{detail}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ifs_file() {
        let f: IfsFile = parse_json(
            r#"{"dim": 1, "maps": [{"ratio": 0.3333333333333333, "offset": [0]}, {"ratio": 0.3333333333333333, "offset": [0.6666666666666666]}]}"#,
            "c",
        )
        .unwrap();
        let m = f.into_model().unwrap();
        assert_eq!(m.maps.len(), 2);
    }
}

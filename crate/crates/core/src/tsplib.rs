//! TSPLIB reader for TSP and ATSP files, plus the circuit-to-path split.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::instance::{Instance, InstanceKind, FORBIDDEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightType {
    Explicit,
    Euc2d,
    Ceil2d,
    Att,
    Geo,
}

impl WeightType {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "EXPLICIT" => WeightType::Explicit,
            "EUC_2D" => WeightType::Euc2d,
            "CEIL_2D" => WeightType::Ceil2d,
            "ATT" => WeightType::Att,
            "GEO" => WeightType::Geo,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WeightType::Explicit => "EXPLICIT",
            WeightType::Euc2d => "EUC_2D",
            WeightType::Ceil2d => "CEIL_2D",
            WeightType::Att => "ATT",
            WeightType::Geo => "GEO",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightFormat {
    FullMatrix,
    UpperRow,
    LowerRow,
    UpperDiagRow,
    LowerDiagRow,
}

impl WeightFormat {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "FULL_MATRIX" => WeightFormat::FullMatrix,
            "UPPER_ROW" => WeightFormat::UpperRow,
            "LOWER_ROW" => WeightFormat::LowerRow,
            "UPPER_DIAG_ROW" => WeightFormat::UpperDiagRow,
            "LOWER_DIAG_ROW" => WeightFormat::LowerDiagRow,
            _ => return None,
        })
    }

    fn entry_count(self, d: usize) -> usize {
        match self {
            WeightFormat::FullMatrix => d * d,
            WeightFormat::UpperRow | WeightFormat::LowerRow => d * (d.saturating_sub(1)) / 2,
            WeightFormat::UpperDiagRow | WeightFormat::LowerDiagRow => d * (d + 1) / 2,
        }
    }
}

/// A parsed TSPLIB file: a circuit instance over `dimension` cities.
#[derive(Debug, Clone, PartialEq)]
pub struct RawInstance {
    pub name: String,
    pub kind: InstanceKind,
    pub dimension: usize,
    pub weight_type: WeightType,
    pub weight_format: Option<WeightFormat>,
    /// Row-major `dimension x dimension` matrix; the diagonal is [`FORBIDDEN`].
    pub matrix: Vec<i64>,
}

impl RawInstance {
    pub fn cost(&self, u: usize, v: usize) -> i64 {
        self.matrix[u * self.dimension + v]
    }
}

pub fn read_tsplib(path: impl AsRef<Path>) -> Result<RawInstance> {
    let text = std::fs::read_to_string(path)?;
    parse_tsplib(&text)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_tsplib(text: &str) -> Result<RawInstance> {
    let mut name = String::new();
    let mut kind = None;
    let mut dimension = None;
    let mut weight_type = None;
    let mut weight_format = None;
    let mut weights: Option<Vec<i64>> = None;
    let mut coords: Option<Vec<(f64, f64)>> = None;

    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let lineno = i + 1;
        let line = lines[i].trim();
        i += 1;
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (line, ""),
        };
        match key {
            "NAME" => name = value.to_string(),
            "TYPE" => {
                kind = Some(match value {
                    "TSP" => InstanceKind::Symmetric,
                    "ATSP" => InstanceKind::Asymmetric,
                    other => return Err(Error::Unsupported(format!("problem type {other}"))),
                })
            }
            "COMMENT" | "DISPLAY_DATA_TYPE" | "NODE_COORD_TYPE" | "CAPACITY" => {}
            "DIMENSION" => {
                let d: usize = value.parse().map_err(|_| parse_err(lineno, format!("bad DIMENSION `{value}`")))?;
                dimension = Some(d);
            }
            "EDGE_WEIGHT_TYPE" => {
                weight_type = Some(
                    WeightType::parse(value).ok_or_else(|| Error::Unsupported(format!("EDGE_WEIGHT_TYPE {value}")))?,
                )
            }
            "EDGE_WEIGHT_FORMAT" => {
                weight_format = Some(
                    WeightFormat::parse(value)
                        .ok_or_else(|| Error::Unsupported(format!("EDGE_WEIGHT_FORMAT {value}")))?,
                )
            }
            "EDGE_WEIGHT_SECTION" => {
                let d = dimension.ok_or_else(|| parse_err(lineno, "EDGE_WEIGHT_SECTION before DIMENSION"))?;
                let fmt = weight_format.ok_or_else(|| parse_err(lineno, "EDGE_WEIGHT_SECTION without EDGE_WEIGHT_FORMAT"))?;
                let want = fmt.entry_count(d);
                let mut vals = Vec::with_capacity(want);
                while vals.len() < want {
                    let ln = i + 1;
                    let Some(raw) = lines.get(i) else {
                        return Err(parse_err(ln, format!("EDGE_WEIGHT_SECTION ended after {} of {want} entries", vals.len())));
                    };
                    i += 1;
                    for tok in raw.split_whitespace() {
                        if vals.len() == want {
                            return Err(parse_err(ln, "too many entries in EDGE_WEIGHT_SECTION"));
                        }
                        vals.push(parse_number(tok).ok_or_else(|| parse_err(ln, format!("bad weight `{tok}`")))?);
                    }
                }
                weights = Some(vals);
            }
            "NODE_COORD_SECTION" => {
                let d = dimension.ok_or_else(|| parse_err(lineno, "NODE_COORD_SECTION before DIMENSION"))?;
                let mut pts = vec![None; d];
                let mut read = 0;
                while read < d {
                    let ln = i + 1;
                    let Some(raw) = lines.get(i) else {
                        return Err(parse_err(ln, format!("NODE_COORD_SECTION ended after {read} of {d} nodes")));
                    };
                    i += 1;
                    if raw.trim().is_empty() {
                        continue;
                    }
                    let toks: Vec<&str> = raw.split_whitespace().collect();
                    if toks.len() < 3 {
                        return Err(parse_err(ln, "expected `id x y`"));
                    }
                    let id: usize = toks[0].parse().map_err(|_| parse_err(ln, format!("bad node id `{}`", toks[0])))?;
                    if id == 0 || id > d {
                        return Err(parse_err(ln, format!("node id {id} out of range")));
                    }
                    let x: f64 = toks[1].parse().map_err(|_| parse_err(ln, format!("bad coordinate `{}`", toks[1])))?;
                    let y: f64 = toks[2].parse().map_err(|_| parse_err(ln, format!("bad coordinate `{}`", toks[2])))?;
                    pts[id - 1] = Some((x, y));
                    read += 1;
                }
                let pts: Option<Vec<_>> = pts.into_iter().collect();
                coords = Some(pts.ok_or_else(|| parse_err(i, "duplicate node ids in NODE_COORD_SECTION"))?);
            }
            "DISPLAY_DATA_SECTION" | "FIXED_EDGES_SECTION" | "DEPOT_SECTION" | "DEMAND_SECTION" => {
                // Skip until the next keyword line.
                while i < lines.len() {
                    let t = lines[i].trim();
                    if t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
                        break;
                    }
                    i += 1;
                }
            }
            other => return Err(parse_err(lineno, format!("unknown keyword `{other}`"))),
        }
    }

    let kind = kind.ok_or_else(|| parse_err(0, "missing TYPE"))?;
    let d = dimension.ok_or_else(|| parse_err(0, "missing DIMENSION"))?;
    let wt = weight_type.ok_or_else(|| parse_err(0, "missing EDGE_WEIGHT_TYPE"))?;
    let mut matrix = vec![0i64; d * d];
    match wt {
        WeightType::Explicit => {
            let vals = weights.ok_or_else(|| parse_err(0, "missing EDGE_WEIGHT_SECTION"))?;
            let fmt = weight_format.expect("checked with section");
            fill_explicit(&mut matrix, d, fmt, &vals);
        }
        _ => {
            let pts = coords.ok_or_else(|| parse_err(0, "missing NODE_COORD_SECTION"))?;
            for u in 0..d {
                for v in 0..d {
                    matrix[u * d + v] = coord_distance(wt, pts[u], pts[v]);
                }
            }
        }
    }
    for u in 0..d {
        matrix[u * d + u] = FORBIDDEN;
    }
    Ok(RawInstance { name, kind, dimension: d, weight_type: wt, weight_format, matrix })
}

fn parse_number(tok: &str) -> Option<i64> {
    tok.parse::<i64>().ok().or_else(|| tok.parse::<f64>().ok().filter(|x| x.is_finite()).map(|x| x.round() as i64))
}

fn fill_explicit(m: &mut [i64], d: usize, fmt: WeightFormat, vals: &[i64]) {
    let mut it = vals.iter().copied();
    let mut put = |u: usize, v: usize, w: i64| {
        m[u * d + v] = w;
        m[v * d + u] = w;
    };
    match fmt {
        WeightFormat::FullMatrix => m.copy_from_slice(vals),
        WeightFormat::UpperRow => {
            for u in 0..d {
                for v in u + 1..d {
                    put(u, v, it.next().unwrap());
                }
            }
        }
        WeightFormat::LowerRow => {
            for u in 0..d {
                for v in 0..u {
                    put(u, v, it.next().unwrap());
                }
            }
        }
        WeightFormat::UpperDiagRow => {
            for u in 0..d {
                for v in u..d {
                    put(u, v, it.next().unwrap());
                }
            }
        }
        WeightFormat::LowerDiagRow => {
            for u in 0..d {
                for v in 0..=u {
                    put(u, v, it.next().unwrap());
                }
            }
        }
    }
}

/// TSPLIB `nint`.
fn nint(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

pub fn coord_distance(wt: WeightType, a: (f64, f64), b: (f64, f64)) -> i64 {
    let (dx, dy) = (a.0 - b.0, a.1 - b.1);
    match wt {
        WeightType::Euc2d => nint((dx * dx + dy * dy).sqrt()),
        WeightType::Ceil2d => (dx * dx + dy * dy).sqrt().ceil() as i64,
        WeightType::Att => {
            let r = ((dx * dx + dy * dy) / 10.0).sqrt();
            let t = nint(r);
            if (t as f64) < r {
                t + 1
            } else {
                t
            }
        }
        WeightType::Geo => geo_distance(a, b),
        WeightType::Explicit => unreachable!("explicit weights have no coordinates"),
    }
}

fn geo_radians(x: f64) -> f64 {
    #[allow(clippy::approx_constant)]
    const PI: f64 = 3.141592;
    let deg = x.trunc();
    let min = x - deg;
    PI * (deg + 5.0 * min / 3.0) / 180.0
}

fn geo_distance(a: (f64, f64), b: (f64, f64)) -> i64 {
    const RRR: f64 = 6378.388;
    let (lat_a, lon_a) = (geo_radians(a.0), geo_radians(a.1));
    let (lat_b, lon_b) = (geo_radians(b.0), geo_radians(b.1));
    let q1 = (lon_a - lon_b).cos();
    let q2 = (lat_a - lat_b).cos();
    let q3 = (lat_a + lat_b).cos();
    (RRR * (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).acos() + 1.0) as i64
}

/// Splits city `home` into a start `s` (same id, keeps the outgoing costs)
/// and a new end node `e = dimension` that inherits the incoming costs.
pub fn circuit_to_path(raw: &RawInstance, home: usize) -> Instance {
    let d = raw.dimension;
    assert!(home < d, "home {home} out of range for dimension {d}");
    let n = d + 1;
    let e = d;
    let mut costs = vec![FORBIDDEN; n * n];
    for u in 0..d {
        for v in 0..d {
            if u != v && v != home {
                costs[u * n + v] = raw.cost(u, v);
            }
        }
        if u != home {
            costs[u * n + e] = raw.cost(u, home);
        }
    }
    Instance::from_matrix(raw.name.clone(), n, home, e, costs).with_metadata(raw.kind, d, raw.weight_type.as_str())
}

/// Inverse of [`circuit_to_path`]: merges `e` into `s`. Node ids other
/// than `e` keep their relative order. Absent arcs stay [`FORBIDDEN`].
pub fn path_to_circuit(inst: &Instance) -> RawInstance {
    let (n, s, e) = (inst.n, inst.s, inst.e);
    let ids: Vec<usize> = (0..n).filter(|&v| v != e).collect();
    let d = ids.len();
    let mut matrix = vec![FORBIDDEN; d * d];
    for (i, &u) in ids.iter().enumerate() {
        for (j, &v) in ids.iter().enumerate() {
            if i != j {
                matrix[i * d + j] = inst.raw_cost(u, if v == s { e } else { v });
            }
        }
    }
    RawInstance {
        name: inst.name.clone(),
        kind: InstanceKind::Asymmetric,
        dimension: d,
        weight_type: WeightType::Explicit,
        weight_format: Some(WeightFormat::FullMatrix),
        matrix,
    }
}

/// Writes `raw` back as an explicit FULL_MATRIX file. Diagonal entries are
/// written as 0.
pub fn write_full_matrix(raw: &RawInstance) -> String {
    let d = raw.dimension;
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {}", raw.name);
    let _ = writeln!(out, "TYPE: {}", if raw.kind == InstanceKind::Symmetric { "TSP" } else { "ATSP" });
    let _ = writeln!(out, "DIMENSION: {d}");
    out.push_str("EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n");
    for u in 0..d {
        let row: Vec<String> = (0..d)
            .map(|v| if u == v { "0".to_string() } else { raw.cost(u, v).to_string() })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push_str("EOF\n");
    out
}

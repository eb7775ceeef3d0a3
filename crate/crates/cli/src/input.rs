//! File formats read by the commands.

use std::fs;
use std::path::Path;

use ppersist::diagram::{Diagram, DiagramRep, Edge, EdgeKind};
use ppersist::filtration::{DiGraph, GraphFamily, WeightedPointCloud};
use ppersist::linalg::{parse_rational, FieldSpec, Matrix, Rational};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn csv_records(path: &Path) -> Result<Vec<Vec<String>>, CliError> {
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|r| {
            r.map(|rec| rec.iter().map(str::to_string).collect::<Vec<_>>())
                .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
        })
        .filter(|r| !matches!(r, Ok(fields) if fields.iter().all(String::is_empty)))
        .collect()
}

fn rational(s: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::validation(format!("{what}: {e}")))
}

/// `x1,...,xd,p` per line; a first line that is not numeric is a header.
pub fn read_cloud(path: &Path) -> Result<WeightedPointCloud, CliError> {
    let mut records = csv_records(path)?;
    if records.first().is_some_and(|r| r.iter().all(|f| parse_rational(f).is_err())) {
        records.remove(0);
    }
    let mut points = Vec::with_capacity(records.len());
    let mut probs = Vec::with_capacity(records.len());
    for (line, rec) in records.iter().enumerate() {
        if rec.len() < 2 {
            return Err(CliError::validation(format!("point {line}: need at least one coordinate and a probability")));
        }
        let (coords, p) = rec.split_at(rec.len() - 1);
        points.push(coords.iter().map(|c| rational(c, &format!("point {line}"))).collect::<Result<Vec<_>, _>>()?);
        probs.push(rational(&p[0], &format!("point {line} probability"))?);
    }
    Ok(WeightedPointCloud::new(points, probs)?)
}

/// First line `n`, then `n` rows of `n` element indices.
pub fn read_table(path: &Path) -> Result<Vec<Vec<usize>>, CliError> {
    let records = csv_records(path)?;
    let index =
        |s: &str| s.parse::<usize>().map_err(|_| CliError::validation(format!("`{s}` is not an element index")));
    let (head, rows) = records.split_first().ok_or_else(|| CliError::validation("empty semigroup table"))?;
    if head.len() != 1 {
        return Err(CliError::validation("first line must hold the order n"));
    }
    let n = index(&head[0])?;
    if rows.len() != n {
        return Err(CliError::validation(format!("expected {n} rows, found {}", rows.len())));
    }
    rows.iter().map(|r| r.iter().map(|s| index(s)).collect()).collect()
}

pub type MatrixJson = Vec<Vec<String>>;

/// Row-major matrix of rational strings with the expected shape.
pub fn parse_matrix(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    m: &MatrixJson,
    what: &str,
) -> Result<Matrix, CliError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(CliError::validation(format!("{what}: expected a {rows}x{cols} matrix")));
    }
    let entries = m
        .iter()
        .map(|r| r.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(field, cols, entries)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub simplices: Vec<Vec<usize>>,
    pub values: Vec<String>,
    #[serde(default)]
    pub subcomplex: Vec<Vec<usize>>,
}

impl ComplexJson {
    pub fn values(&self) -> Result<Vec<Rational>, CliError> {
        self.values.iter().enumerate().map(|(v, s)| rational(s, &format!("value of vertex {v}"))).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub g: GraphJson,
    pub h: GraphJson,
    pub label: Vec<usize>,
}

impl FamilyJson {
    pub fn into_family(self) -> GraphFamily {
        GraphFamily {
            g: DiGraph { n: self.g.n, edges: self.g.edges },
            h: DiGraph { n: self.h.n, edges: self.h.edges },
            label: self.label,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub vertex_map: Vec<usize>,
    pub lipschitz_k: String,
}

impl MorphismJson {
    pub fn lipschitz(&self) -> Result<Rational, CliError> {
        rational(&self.lipschitz_k, "lipschitz_k")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub source: usize,
    pub target: usize,
    pub matrix: MatrixJson,
}

fn yes() -> bool {
    true
}

/// A diagram with a representation: vertex dimensions and one matrix per
/// edge. Identity loops are appended unless `identities` is false.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub spaces: Vec<usize>,
    pub edges: Vec<EdgeJson>,
    #[serde(default = "yes")]
    pub identities: bool,
}

impl DiagramJson {
    pub fn build(&self, field: FieldSpec) -> Result<(Diagram<()>, DiagramRep), CliError> {
        let n = self.spaces.len();
        let edges: Vec<Edge> =
            self.edges.iter().map(|e| Edge { source: e.source, target: e.target, kind: EdgeKind::Plain }).collect();
        let mut d = Diagram::new(vec![(); n], edges)?;
        let mut maps = Vec::with_capacity(self.edges.len() + n);
        for (i, e) in self.edges.iter().enumerate() {
            let (rows, cols) = (self.spaces[e.target], self.spaces[e.source]);
            maps.push(parse_matrix(field, rows, cols, &e.matrix, &format!("edge {i}"))?);
        }
        if self.identities {
            d = d.with_identities();
            maps.extend(self.spaces.iter().map(|&k| Matrix::identity(field, k)));
        }
        let rep = DiagramRep::new(&d, self.spaces.clone(), maps, field)?;
        Ok((d, rep))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageMapJson {
    pub from: (i64, i64),
    pub matrix: MatrixJson,
}

/// A spectral page: `spaces` lists `[p, q, dim]` (missing entries are zero)
/// and `maps` the differentials by source; missing differentials are zero.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageJson {
    pub r: usize,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    #[serde(default)]
    pub spaces: Vec<(i64, i64, usize)>,
    #[serde(default)]
    pub maps: Vec<PageMapJson>,
}

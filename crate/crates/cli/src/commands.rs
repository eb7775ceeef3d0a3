use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use ppersist::diagram::{build_spectral_page, end_ring, validate_spectral_rep, DiagramRep};
use ppersist::filtration::{
    graph_sublevel_family, induced_vr_map, sublevel_filtration, vr_bifiltration, vr_filtration, DatasetMorphism,
    LambdaMode, WeightedPointCloud,
};
use ppersist::linalg::{format_rational, parse_rational, FieldSpec, Matrix, Rational};
use ppersist::persistence::{filtration_barcode, module_from_filtration, persistent_range};
use ppersist::poset::FinitePoset;
use ppersist::semigroup::FiniteSemigroup;
use ppersist::simplicial::{map_between, HomologyBasis, Pair, SimplicialComplex};
use serde::Serialize;

use crate::cli::{Command, HomologyArgs, OrderArg};
use crate::error::CliError;
use crate::input::{self, ComplexJson, DiagramJson, FamilyJson, MorphismJson, PageJson};
use crate::output::{barcode_json, barcode_svg, matrix_json, to_pretty, Scale};

/// What a command produced: the JSON document and any extra files.
pub struct Artifacts {
    pub json: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Artifacts {
    fn json<T: Serialize>(value: &T) -> Self {
        Artifacts { json: to_pretty(value), files: Vec::new() }
    }
}

pub fn run(command: &Command, field: FieldSpec) -> Result<Artifacts, CliError> {
    match command {
        Command::VrBarcode { cloud, homology, lambda, emit_svg } => {
            vr_barcode(cloud, homology, lambda.as_deref(), emit_svg.as_deref(), field)
        }
        Command::BifiltrationRank { cloud, homology, t2, lambda, shift, to_lambda } => {
            bifiltration_rank(cloud, homology, t2, lambda, shift, to_lambda.as_deref(), field)
        }
        Command::VrMap { source, target, map, homology, t2, lambda, paper_mode_mlambda } => {
            let mode = if *paper_mode_mlambda { LambdaMode::MinFiberMultiple } else { LambdaMode::Safe };
            vr_map(source, target, map, homology, t2, lambda, mode, field)
        }
        Command::SublevelBarcode { complex, degree, emit_svg } => {
            sublevel_barcode(complex, *degree, emit_svg.as_deref(), field)
        }
        Command::GraphPersist { family } => graph_persist(family, field),
        Command::SemigroupOrder { table, order } => semigroup_order(table, *order),
        Command::EndRing { diagram } => end_ring_cmd(diagram, field),
        Command::SpectralCheck { page } => spectral_check(page, field),
    }
}

fn rational_flag(s: &str, flag: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::validation(format!("--{flag}: {e}")))
}

fn check_dims(h: &HomologyArgs) -> Result<(), CliError> {
    if h.max_dim() < h.degree + 1 {
        return Err(CliError::validation(format!(
            "--max-dim {} is too small for degree {}; need at least {}",
            h.max_dim(),
            h.degree,
            h.degree + 1
        )));
    }
    Ok(())
}

fn above_threshold(cloud: &WeightedPointCloud, lambda: &Rational) -> Result<WeightedPointCloud, CliError> {
    let keep: Vec<usize> = (0..cloud.len()).filter(|&i| &cloud.probs()[i] >= lambda).collect();
    if keep.is_empty() {
        return Err(CliError::validation(format!("no point has probability at least {}", format_rational(lambda))));
    }
    Ok(WeightedPointCloud::new(
        keep.iter().map(|&i| cloud.points()[i].clone()).collect(),
        keep.iter().map(|&i| cloud.probs()[i].clone()).collect(),
    )?)
}

fn vr_barcode(
    path: &Path,
    h: &HomologyArgs,
    lambda: Option<&str>,
    svg: Option<&Path>,
    field: FieldSpec,
) -> Result<Artifacts, CliError> {
    check_dims(h)?;
    let mut cloud = input::read_cloud(path)?;
    if let Some(l) = lambda {
        cloud = above_threshold(&cloud, &rational_flag(l, "lambda")?)?;
    }
    let fp = vr_filtration(&cloud, h.max_dim(), None)?;
    let barcode = filtration_barcode(&fp, h.degree, field, true)?;
    let mut out = Artifacts::json(&barcode_json(&barcode, field, Scale::Squared));
    if let Some(p) = svg {
        out.files.push((p.to_path_buf(), barcode_svg(&barcode, field, Scale::Squared)));
    }
    Ok(out)
}

#[derive(Serialize)]
struct GridPointJson {
    t2: String,
    lambda: String,
    /// Grid values the query snapped to; absent when the complex is empty.
    grid: Option<(String, String)>,
}

#[derive(Serialize)]
struct RankJson {
    degree: usize,
    field: String,
    source: GridPointJson,
    target: GridPointJson,
    rank: usize,
}

fn bifiltration_rank(
    path: &Path,
    h: &HomologyArgs,
    t2: &str,
    lambda: &str,
    shift: &str,
    to_lambda: Option<&str>,
    field: FieldSpec,
) -> Result<Artifacts, CliError> {
    check_dims(h)?;
    let (t2, lambda, shift) =
        (rational_flag(t2, "t2")?, rational_flag(lambda, "lambda")?, rational_flag(shift, "shift")?);
    let to_lambda = to_lambda.map_or(Ok(lambda.clone()), |l| rational_flag(l, "to-lambda"))?;
    if shift < Rational::from_integer(0.into()) {
        return Err(CliError::validation("--shift must be nonnegative"));
    }
    if to_lambda > lambda {
        return Err(CliError::validation("--to-lambda must not exceed --lambda"));
    }
    let to_t2 = &t2 + &shift;
    let cloud = input::read_cloud(path)?;
    let bi = vr_bifiltration(&cloud, h.max_dim(), None)?;
    let m = bi.prob_axis().values().len();
    let grid = |id: Option<usize>| {
        id.map(|id| {
            (format_rational(&bi.scale_axis().values()[id / m]), format_rational(&bi.prob_axis().values()[id % m]))
        })
    };
    let (from, to) = (bi.locate(&t2, &lambda), bi.locate(&to_t2, &to_lambda));
    let rank = match (from, to) {
        (Some(s), Some(s2)) => persistent_range(bi.filtered(), h.degree, s, s2, field)?.rank,
        _ => 0,
    };
    Ok(Artifacts::json(&RankJson {
        degree: h.degree,
        field: field.to_string(),
        source: GridPointJson { t2: format_rational(&t2), lambda: format_rational(&lambda), grid: grid(from) },
        target: GridPointJson { t2: format_rational(&to_t2), lambda: format_rational(&to_lambda), grid: grid(to) },
        rank,
    }))
}

#[derive(Serialize)]
struct LevelJson {
    t2: String,
    lambda: String,
    rank: usize,
}

#[derive(Serialize)]
struct VrMapJson {
    degree: usize,
    field: String,
    mode: &'static str,
    vertex_map: Vec<(usize, usize)>,
    source: LevelJson,
    target: LevelJson,
    matrix: Vec<Vec<String>>,
    rank: usize,
}

#[allow(clippy::too_many_arguments)]
fn vr_map(
    source: &Path,
    target: &Path,
    map: &Path,
    h: &HomologyArgs,
    t2: &str,
    lambda: &str,
    mode: LambdaMode,
    field: FieldSpec,
) -> Result<Artifacts, CliError> {
    check_dims(h)?;
    let (t2, lambda) = (rational_flag(t2, "t2")?, rational_flag(lambda, "lambda")?);
    let (src, tgt) = (input::read_cloud(source)?, input::read_cloud(target)?);
    let spec: MorphismJson = input::read_json(map)?;
    let morphism = DatasetMorphism { lipschitz_k: spec.lipschitz()?, vertex_map: spec.vertex_map };
    let eta = induced_vr_map(&morphism, &src, &tgt, &t2, &lambda, mode)?;
    let (from, to) = eta.complexes(&src, &tgt, h.max_dim())?;
    let sb = HomologyBasis::compute(&Pair::absolute(from), h.degree, field);
    let tb = HomologyBasis::compute(&Pair::absolute(to), h.degree, field);
    let matrix = map_between(&sb, &tb, &|v| eta.vertex_map[&v])?;
    Ok(Artifacts::json(&VrMapJson {
        degree: h.degree,
        field: field.to_string(),
        mode: match mode {
            LambdaMode::Safe => "safe",
            LambdaMode::MinFiberMultiple => "min-fiber-multiple",
        },
        vertex_map: eta.vertex_map.iter().map(|(&x, &y)| (x, y)).collect(),
        source: LevelJson {
            t2: format_rational(&eta.source_t2),
            lambda: format_rational(&eta.source_lambda),
            rank: sb.rank(),
        },
        target: LevelJson {
            t2: format_rational(&eta.target_t2),
            lambda: format_rational(&eta.target_lambda),
            rank: tb.rank(),
        },
        rank: matrix.rank(),
        matrix: matrix_json(&matrix),
    }))
}

fn sublevel_barcode(path: &Path, degree: usize, svg: Option<&Path>, field: FieldSpec) -> Result<Artifacts, CliError> {
    let spec: ComplexJson = input::read_json(path)?;
    let values = spec.values()?;
    let distinct: Vec<Rational> = values.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let f: BTreeMap<usize, usize> = values
        .iter()
        .enumerate()
        .map(|(v, q)| (v, distinct.binary_search(q).expect("value is in the sorted list")))
        .collect();
    let x = SimplicialComplex::from_maximal(spec.simplices.clone());
    let y = SimplicialComplex::from_maximal(spec.subcomplex.clone());
    let fp = sublevel_filtration(Pair::new(x, y)?, &f, FinitePoset::labeled_chain(distinct)?)?;
    let barcode = filtration_barcode(&fp, degree, field, true)?;
    let mut out = Artifacts::json(&barcode_json(&barcode, field, Scale::Plain));
    if let Some(p) = svg {
        out.files.push((p.to_path_buf(), barcode_svg(&barcode, field, Scale::Plain)));
    }
    Ok(out)
}

#[derive(Serialize)]
struct GraphVertexJson {
    vertex: usize,
    h0: usize,
    h1: usize,
}

#[derive(Serialize)]
struct GraphCoverJson {
    from: usize,
    to: usize,
    h0_rank: usize,
    h1_rank: usize,
}

#[derive(Serialize)]
struct GraphJsonOut {
    field: String,
    vertices: Vec<GraphVertexJson>,
    covers: Vec<GraphCoverJson>,
}

fn graph_persist(path: &Path, field: FieldSpec) -> Result<Artifacts, CliError> {
    let spec: FamilyJson = input::read_json(path)?;
    let fp = graph_sublevel_family(&spec.into_family())?;
    let (h0, h1) = rayon::join(|| module_from_filtration(&fp, 0, field), || module_from_filtration(&fp, 1, field));
    let (h0, h1) = (h0?, h1?);
    let vertices = (0..fp.index().len()).map(|v| GraphVertexJson { vertex: v, h0: h0.dim(v), h1: h1.dim(v) }).collect();
    let covers = fp
        .index()
        .covers()
        .into_iter()
        .map(|(a, b)| {
            Ok(GraphCoverJson {
                from: a,
                to: b,
                h0_rank: h0.structure_map(a, b)?.rank(),
                h1_rank: h1.structure_map(a, b)?.rank(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(Artifacts::json(&GraphJsonOut { field: field.to_string(), vertices, covers }))
}

#[derive(Serialize)]
struct OrderJson {
    order: &'static str,
    n: usize,
    idempotents: Vec<usize>,
    /// Strict relations `a < b`.
    relations: Vec<(usize, usize)>,
    covers: Vec<(usize, usize)>,
    /// `sublevels[s]` is `{a : a <= s}`.
    sublevels: Vec<Vec<usize>>,
}

fn semigroup_order(path: &Path, kind: OrderArg) -> Result<Artifacts, CliError> {
    let s = FiniteSemigroup::from_table(input::read_table(path)?)?;
    let order = match kind {
        OrderArg::Mitsch => s.mitsch_order()?,
        OrderArg::Nambooripad => s.nambooripad_order()?,
    };
    let n = s.len();
    let relations = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| order.poset.lt(a, b)).collect();
    let sublevels =
        (0..n).map(|e| s.sublevel(e, &order).map(|set| set.into_iter().collect())).collect::<Result<_, _>>()?;
    Ok(Artifacts::json(&OrderJson {
        order: match kind {
            OrderArg::Mitsch => "mitsch",
            OrderArg::Nambooripad => "nambooripad",
        },
        n,
        idempotents: s.idempotents().into_iter().collect(),
        relations,
        covers: order.poset.covers(),
        sublevels,
    }))
}

#[derive(Serialize)]
struct EndRingJson {
    field: String,
    spaces: Vec<usize>,
    dimension: usize,
    /// One block per vertex for each basis element.
    basis: Vec<Vec<Vec<Vec<String>>>>,
}

fn end_ring_cmd(path: &Path, field: FieldSpec) -> Result<Artifacts, CliError> {
    let spec: DiagramJson = input::read_json(path)?;
    if let Some(e) = spec.edges.iter().position(|e| e.source >= spec.spaces.len() || e.target >= spec.spaces.len()) {
        return Err(CliError::validation(format!("edge {e} joins a missing vertex")));
    }
    let (d, rep) = spec.build(field)?;
    let ring = end_ring(&d, &rep)?;
    Ok(Artifacts::json(&EndRingJson {
        field: field.to_string(),
        spaces: ring.spaces.clone(),
        dimension: ring.dimension(),
        basis: ring.basis.iter().map(|blocks| blocks.iter().map(matrix_json).collect()).collect(),
    }))
}

#[derive(Serialize)]
struct SpectralJson {
    valid: bool,
    witnesses: Vec<(i64, i64)>,
}

fn spectral_check(path: &Path, field: FieldSpec) -> Result<Artifacts, CliError> {
    let spec: PageJson = input::read_json(path)?;
    let d = build_spectral_page(spec.r, &spec.p, &spec.q);
    let position = |p: i64, q: i64| d.vertices().iter().position(|v| v.p == p && v.q == q);
    let mut spaces = vec![0; d.vertices().len()];
    for &(p, q, dim) in &spec.spaces {
        let v = position(p, q).ok_or_else(|| CliError::validation(format!("space ({p}, {q}) is outside the page")))?;
        spaces[v] = dim;
    }
    let mut given: BTreeMap<usize, &input::MatrixJson> = BTreeMap::new();
    for m in &spec.maps {
        let (p, q) = m.from;
        let v =
            position(p, q).ok_or_else(|| CliError::validation(format!("map from ({p}, {q}) is outside the page")))?;
        if given.insert(v, &m.matrix).is_some() {
            return Err(CliError::validation(format!("two maps from ({p}, {q})")));
        }
    }
    let mut maps = Vec::with_capacity(d.edges().len());
    for (i, e) in d.edges().iter().enumerate() {
        let (rows, cols) = (spaces[e.target], spaces[e.source]);
        maps.push(if d.is_identity(i) {
            Matrix::identity(field, rows)
        } else if let Some(m) = given.remove(&e.source) {
            let v = d.vertices()[e.source];
            input::parse_matrix(field, rows, cols, m, &format!("map from ({}, {})", v.p, v.q))?
        } else {
            Matrix::zeros(field, rows, cols)
        });
    }
    if let Some(&v) = given.keys().next() {
        let v = d.vertices()[v];
        return Err(CliError::validation(format!("({}, {}) has no outgoing differential on this page", v.p, v.q)));
    }
    let rep = DiagramRep::new(&d, spaces, maps, field)?;
    let check = validate_spectral_rep(&d, &rep)?;
    Ok(Artifacts::json(&SpectralJson { valid: check.valid, witnesses: check.witnesses }))
}

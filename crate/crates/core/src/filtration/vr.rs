use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use super::{FilteredPair, FiltrationError};
use crate::linalg::{format_rational, Rational};
use crate::poset::GridAxis;
use crate::simplicial::{check_simplicial_pair_map, Pair, Simplex, SimplicialComplex, VertexMap};

/// Points in `Q^d` with a reliability weight in `[0, 1]` each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPointCloud {
    points: Vec<Vec<Rational>>,
    probs: Vec<Rational>,
}

impl WeightedPointCloud {
    pub fn new(points: Vec<Vec<Rational>>, probs: Vec<Rational>) -> Result<Self, FiltrationError> {
        let bad = |m: String| Err(FiltrationError::BadCloud(m));
        if points.is_empty() {
            return bad("no points".into());
        }
        if points.len() != probs.len() {
            return bad(format!("{} points but {} probabilities", points.len(), probs.len()));
        }
        let d = points[0].len();
        if let Some(i) = points.iter().position(|p| p.len() != d) {
            return bad(format!("point {i} has dimension {}, expected {d}", points[i].len()));
        }
        if let Some(i) = probs.iter().position(|p| p < &Rational::zero() || p > &Rational::one()) {
            return bad(format!("probability of point {i} is {} (outside [0, 1])", format_rational(&probs[i])));
        }
        Ok(WeightedPointCloud { points, probs })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn dist2(&self, i: usize, j: usize) -> Rational {
        self.points[i].iter().zip(&self.points[j]).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    /// Largest pairwise squared distance within `simplex` (zero for a vertex).
    pub fn diameter2(&self, simplex: &Simplex) -> Rational {
        let v = simplex.vertices();
        let mut best = Rational::zero();
        for (a, &i) in v.iter().enumerate() {
            for &j in &v[a + 1..] {
                let d = self.dist2(i, j);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    pub fn min_prob(&self, simplex: &Simplex) -> Rational {
        simplex.vertices().iter().map(|&v| self.probs[v].clone()).min().expect("simplices are nonempty")
    }
}

/// All cliques of size at most `max_dim + 1` in the graph on `vertices` with
/// an edge whenever `adjacent` holds.
fn clique_complex(vertices: &[usize], max_dim: usize, adjacent: impl Fn(usize, usize) -> bool) -> SimplicialComplex {
    fn grow(
        current: &mut Vec<usize>,
        candidates: &[usize],
        max_len: usize,
        adjacent: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Simplex>,
    ) {
        for (i, &v) in candidates.iter().enumerate() {
            current.push(v);
            out.push(Simplex::new(current.clone()));
            if current.len() < max_len {
                let next: Vec<usize> = candidates[i + 1..].iter().copied().filter(|&w| adjacent(v, w)).collect();
                grow(current, &next, max_len, adjacent, out);
            }
            current.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), vertices, max_dim + 1, &adjacent, &mut out);
    SimplicialComplex::from_simplices(out).expect("cliques are closed under faces")
}

/// Rips complex at squared scale `t2` on the points with probability `>= lambda`.
pub fn vr_complex(cloud: &WeightedPointCloud, t2: &Rational, lambda: &Rational, max_dim: usize) -> SimplicialComplex {
    let kept: Vec<usize> = (0..cloud.len()).filter(|&i| &cloud.probs[i] >= lambda).collect();
    clique_complex(&kept, max_dim, |i, j| &cloud.dist2(i, j) <= t2)
}

fn distinct(values: impl IntoIterator<Item = Rational>) -> Vec<Rational> {
    values.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn scale_values(cloud: &WeightedPointCloud) -> Vec<Rational> {
    let n = cloud.len();
    distinct(
        std::iter::once(Rational::zero())
            .chain((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| cloud.dist2(i, j))),
    )
}

/// The two-parameter Rips filtration over (squared scale) x (probability
/// threshold, reversed).
#[derive(Clone, Debug)]
pub struct VrBifiltration {
    filtered: FilteredPair,
    scale: GridAxis,
    prob: GridAxis,
}

impl VrBifiltration {
    pub fn filtered(&self) -> &FilteredPair {
        &self.filtered
    }

    pub fn scale_axis(&self) -> &GridAxis {
        &self.scale
    }

    pub fn prob_axis(&self) -> &GridAxis {
        &self.prob
    }

    /// Index id of the grid point `(scale[a], prob[b])`.
    pub fn grid_id(&self, a: usize, b: usize) -> usize {
        a * self.prob.values().len() + b
    }

    /// Grid point whose sub-pair equals the Rips pair at `(t2, lambda)`:
    /// the largest scale `<= t2` and the smallest probability `>= lambda`.
    pub fn locate(&self, t2: &Rational, lambda: &Rational) -> Option<usize> {
        let a = self.scale.values().iter().rposition(|v| v <= t2)?;
        let b = self.prob.values().iter().position(|v| v >= lambda)?;
        Some(self.grid_id(a, b))
    }
}

/// Rips bifiltration of `cloud`; `marked` selects the sub-cloud spanning `Y`.
pub fn vr_bifiltration(
    cloud: &WeightedPointCloud,
    max_dim: usize,
    marked: Option<&BTreeSet<usize>>,
) -> Result<VrBifiltration, FiltrationError> {
    let scale = GridAxis::new(scale_values(cloud), false)?;
    let prob = GridAxis::new(distinct(cloud.probs.iter().cloned()), true)?;
    let index = scale.to_poset().product(&prob.to_poset());
    let all: Vec<usize> = (0..cloud.len()).collect();
    let x = clique_complex(&all, max_dim, |_, _| true);
    let m = prob.values().len();
    let entry: Vec<(Simplex, usize)> = x
        .iter()
        .map(|s| {
            let a = scale.position(&cloud.diameter2(s)).expect("diameters are on the scale axis");
            let b = prob.position(&cloud.min_prob(s)).expect("probabilities are on the axis");
            (s.clone(), a * m + b)
        })
        .collect();
    let y = marked.map_or_else(SimplicialComplex::empty, |set| x.induced(set));
    let filtered = FilteredPair::from_entries(Pair::new(x, y)?, index, entry)?;
    Ok(VrBifiltration { filtered, scale, prob })
}

/// One-parameter Rips filtration by squared scale on all points, labeled by
/// the critical squared distances.
pub fn vr_filtration(
    cloud: &WeightedPointCloud,
    max_dim: usize,
    marked: Option<&BTreeSet<usize>>,
) -> Result<FilteredPair, FiltrationError> {
    let scale = GridAxis::new(scale_values(cloud), false)?;
    let all: Vec<usize> = (0..cloud.len()).collect();
    let x = clique_complex(&all, max_dim, |_, _| true);
    let entry: Vec<(Simplex, usize)> = x
        .iter()
        .map(|s| (s.clone(), scale.position(&cloud.diameter2(s)).expect("diameters are on the scale axis")))
        .collect();
    let y = marked.map_or_else(SimplicialComplex::empty, |set| x.induced(set));
    FilteredPair::from_entries(Pair::new(x, y)?, scale.to_poset(), entry)
}

/// A map of weighted datasets: a vertex map pushing probabilities forward,
/// with a declared Lipschitz constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetMorphism {
    pub vertex_map: Vec<usize>,
    pub lipschitz_k: Rational,
}

impl DatasetMorphism {
    pub fn identity(n: usize) -> Self {
        DatasetMorphism { vertex_map: (0..n).collect(), lipschitz_k: Rational::one() }
    }

    /// `next ∘ self`, with the product Lipschitz constant.
    pub fn then(&self, next: &DatasetMorphism) -> DatasetMorphism {
        DatasetMorphism {
            vertex_map: self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
            lipschitz_k: &self.lipschitz_k * &next.lipschitz_k,
        }
    }

    /// Checks the pushforward identity and the Lipschitz bound on squared
    /// distances.
    pub fn verify(&self, source: &WeightedPointCloud, target: &WeightedPointCloud) -> Result<(), FiltrationError> {
        if self.vertex_map.len() != source.len() {
            return Err(FiltrationError::BadMorphism(format!(
                "vertex map has {} entries for {} source points",
                self.vertex_map.len(),
                source.len()
            )));
        }
        if let Some(&v) = self.vertex_map.iter().find(|&&v| v >= target.len()) {
            return Err(FiltrationError::BadMorphism(format!("target point {v} out of range")));
        }
        if self.lipschitz_k <= Rational::zero() {
            return Err(FiltrationError::BadMorphism("Lipschitz constant must be positive".into()));
        }
        let mut pushed = vec![Rational::zero(); target.len()];
        for (x, &y) in self.vertex_map.iter().enumerate() {
            pushed[y] += &source.probs[x];
        }
        for (y, p) in pushed.iter().enumerate() {
            if p != &target.probs[y] {
                return Err(FiltrationError::Pushforward {
                    target: y,
                    expected: format_rational(p),
                    found: format_rational(&target.probs[y]),
                });
            }
        }
        let k2 = &self.lipschitz_k * &self.lipschitz_k;
        for i in 0..source.len() {
            for j in i + 1..source.len() {
                if target.dist2(self.vertex_map[i], self.vertex_map[j]) > &k2 * source.dist2(i, j) {
                    return Err(FiltrationError::Lipschitz(i, j));
                }
            }
        }
        Ok(())
    }

    /// Smallest fiber size over the image.
    pub fn min_fiber(&self) -> usize {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &y in &self.vertex_map {
            *counts.entry(y).or_default() += 1;
        }
        counts.values().copied().min().unwrap_or(0)
    }
}

/// Which probability threshold the target of an induced Rips map uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LambdaMode {
    /// `Λ_out = Λ`, always valid.
    #[default]
    Safe,
    /// `Λ_out = m·Λ` with `m` the smallest fiber size; checked per point.
    MinFiberMultiple,
}

/// The simplicial map `VR(source, t2, Λ) -> VR(target, K²t2, Λ_out)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedVrMap {
    pub vertex_map: VertexMap,
    pub source_t2: Rational,
    pub source_lambda: Rational,
    pub target_t2: Rational,
    pub target_lambda: Rational,
}

impl InducedVrMap {
    /// Source and target complexes, after checking the map is simplicial.
    pub fn complexes(
        &self,
        source: &WeightedPointCloud,
        target: &WeightedPointCloud,
        max_dim: usize,
    ) -> Result<(SimplicialComplex, SimplicialComplex), FiltrationError> {
        let from = vr_complex(source, &self.source_t2, &self.source_lambda, max_dim);
        let to = vr_complex(target, &self.target_t2, &self.target_lambda, max_dim);
        check_simplicial_pair_map(&self.vertex_map, &Pair::absolute(from.clone()), &Pair::absolute(to.clone()))?;
        Ok((from, to))
    }
}

pub fn induced_vr_map(
    m: &DatasetMorphism,
    source: &WeightedPointCloud,
    target: &WeightedPointCloud,
    t2: &Rational,
    lambda: &Rational,
    mode: LambdaMode,
) -> Result<InducedVrMap, FiltrationError> {
    m.verify(source, target)?;
    let target_lambda = match mode {
        LambdaMode::Safe => lambda.clone(),
        LambdaMode::MinFiberMultiple => lambda * Rational::from_integer(m.min_fiber().into()),
    };
    let mut vertex_map = VertexMap::new();
    for x in (0..source.len()).filter(|&x| &source.probs[x] >= lambda) {
        let y = m.vertex_map[x];
        if target.probs[y] < target_lambda {
            return Err(FiltrationError::LambdaEscape {
                source_point: x,
                target_point: y,
                prob: format_rational(&source.probs[x]),
                target_prob: format_rational(&target.probs[y]),
                threshold: format_rational(&target_lambda),
            });
        }
        vertex_map.insert(x, y);
    }
    let k2 = &m.lipschitz_k * &m.lipschitz_k;
    Ok(InducedVrMap {
        vertex_map,
        source_t2: t2.clone(),
        source_lambda: lambda.clone(),
        target_t2: k2 * t2,
        target_lambda,
    })
}

/// Checks `η_to ∘ j = j' ∘ η_from` simplex by simplex for the grid step
/// `(t2, Λ) <= (t2', Λ')`, i.e. `t2 <= t2'` and `Λ >= Λ'`.
#[allow(clippy::too_many_arguments)]
pub fn naturality_square(
    m: &DatasetMorphism,
    source: &WeightedPointCloud,
    target: &WeightedPointCloud,
    from: (&Rational, &Rational),
    to: (&Rational, &Rational),
    mode: LambdaMode,
    max_dim: usize,
) -> Result<(), FiltrationError> {
    let eta_from = induced_vr_map(m, source, target, from.0, from.1, mode)?;
    let eta_to = induced_vr_map(m, source, target, to.0, to.1, mode)?;
    let (src_from, tgt_from) = eta_from.complexes(source, target, max_dim)?;
    let (src_to, tgt_to) = eta_to.complexes(source, target, max_dim)?;
    for s in src_from.iter() {
        // j then η
        if !src_to.contains(s) {
            return Err(FiltrationError::Naturality(s.clone()));
        }
        let upper = s.image_set(|v| eta_to.vertex_map[&v]);
        // η then j'
        let lower = s.image_set(|v| eta_from.vertex_map[&v]);
        if upper != lower || !tgt_from.contains(&lower) || !tgt_to.contains(&upper) {
            return Err(FiltrationError::Naturality(s.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::parse_rational;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn cloud(points: &[&[&str]], probs: &[&str]) -> WeightedPointCloud {
        WeightedPointCloud::new(
            points.iter().map(|p| p.iter().map(|c| r(c)).collect()).collect(),
            probs.iter().map(|p| r(p)).collect(),
        )
        .unwrap()
    }

    fn triangle() -> WeightedPointCloud {
        // pairwise squared distance 1; no such triangle exists in Q^2
        cloud(&[&["1/2", "1/2", "0", "0"], &["1/2", "-1/2", "0", "0"], &["1", "0", "1/2", "1/2"]], &["1", "1", "1"])
    }

    fn square() -> WeightedPointCloud {
        cloud(&[&["0", "0"], &["1", "0"], &["1", "1"], &["0", "1"]], &["1", "1", "1", "1"])
    }

    #[test]
    fn cloud_validation() {
        assert!(WeightedPointCloud::new(vec![], vec![]).is_err());
        assert!(WeightedPointCloud::new(vec![vec![r("0")]], vec![r("3/2")]).is_err());
        assert!(WeightedPointCloud::new(vec![vec![r("0")], vec![r("0"), r("1")]], vec![r("1"), r("1")]).is_err());
    }

    #[test]
    fn vr_complex_examples() {
        let c = cloud(&[&["0"], &["1"], &["2"]], &["1", "1/2", "1"]);
        assert_eq!(vr_complex(&c, &r("1/4"), &r("0"), 2).len(), 3);
        assert_eq!(vr_complex(&c, &r("4"), &r("0"), 2).count(2), 1);
        let cut = vr_complex(&c, &r("4"), &r("3/5"), 2);
        assert_eq!(cut.vertices(), vec![0, 2]);

        let t = triangle();
        assert!((0..3).all(|i| (i + 1..3).all(|j| t.dist2(i, j) == r("1"))));
        assert_eq!(vr_complex(&t, &r("1/4"), &r("0"), 2).len(), 3);
        let full = vr_complex(&t, &r("1"), &r("0"), 2);
        assert_eq!(full, SimplicialComplex::from_maximal([vec![0, 1, 2]]));
        assert_eq!(vr_complex(&t, &r("1"), &r("0"), 1).dim(), Some(1));
    }

    #[test]
    fn bifiltration_examples() {
        let two = cloud(&[&["0"], &["1"]], &["1", "1"]);
        let bf = vr_bifiltration(&two, 1, None).unwrap();
        assert_eq!(bf.scale_axis().values(), &[r("0"), r("1")]);
        assert_eq!(bf.prob_axis().values(), &[r("1")]);
        assert_eq!(bf.filtered().entry(&Simplex::new(vec![0, 1])), Some(&[bf.grid_id(1, 0)][..]));

        let one = cloud(&[&["5"]], &["1/3"]);
        let bf = vr_bifiltration(&one, 2, None).unwrap();
        assert_eq!(bf.filtered().entry(&Simplex::vertex(0)), Some(&[0][..]));

        let sq = vr_bifiltration(&square(), 2, None).unwrap();
        let f = sq.filtered();
        assert_eq!(f.entry(&Simplex::new(vec![0, 1])), Some(&[sq.grid_id(1, 0)][..]));
        assert_eq!(f.entry(&Simplex::new(vec![0, 2])), Some(&[sq.grid_id(2, 0)][..]));
    }

    #[test]
    fn bifiltration_matches_vr_complex_at_every_grid_point() {
        let c = cloud(&[&["0", "0"], &["2", "0"], &["0", "1"], &["3", "3"]], &["1", "1/2", "1/4", "1/2"]);
        let bf = vr_bifiltration(&c, 2, Some(&BTreeSet::from([0, 1]))).unwrap();
        for (a, t2) in bf.scale_axis().values().iter().enumerate() {
            for (b, lambda) in bf.prob_axis().values().iter().enumerate() {
                let sub = bf.filtered().sub_pair(bf.grid_id(a, b)).unwrap();
                let direct = vr_complex(&c, t2, lambda, 2);
                assert_eq!(sub.x(), &direct);
                assert_eq!(sub.y(), &direct.induced(&BTreeSet::from([0, 1])));
                assert_eq!(bf.locate(t2, lambda), Some(bf.grid_id(a, b)));
            }
        }
    }

    #[test]
    fn one_parameter_criticals() {
        let two = cloud(&[&["0"], &["3"]], &["1", "1"]);
        let fp = vr_filtration(&two, 1, None).unwrap();
        assert_eq!(super::super::critical_values(&fp).unwrap(), vec![r("0"), r("9")]);
        let sq = vr_filtration(&square(), 2, None).unwrap();
        assert_eq!(super::super::critical_values(&sq).unwrap(), vec![r("0"), r("1"), r("2")]);
    }

    #[test]
    fn identity_and_scaling_morphisms() {
        let t = triangle();
        let id = DatasetMorphism::identity(3);
        let map = induced_vr_map(&id, &t, &t, &r("1"), &r("1/2"), LambdaMode::Safe).unwrap();
        assert_eq!(map.vertex_map, (0..3).map(|v| (v, v)).collect());
        assert_eq!((map.target_t2.clone(), map.target_lambda.clone()), (r("1"), r("1/2")));

        let small = cloud(&[&["0"], &["1"]], &["1/2", "1/2"]);
        let big = cloud(&[&["0"], &["2"]], &["1/2", "1/2"]);
        let double = DatasetMorphism { vertex_map: vec![0, 1], lipschitz_k: r("2") };
        let map = induced_vr_map(&double, &small, &big, &r("1"), &r("0"), LambdaMode::Safe).unwrap();
        assert_eq!(map.target_t2, r("4"));
        let (from, to) = map.complexes(&small, &big, 1).unwrap();
        assert_eq!(from.count(1), 1);
        assert_eq!(to.count(1), 1);
        let too_small = DatasetMorphism { vertex_map: vec![0, 1], lipschitz_k: r("3/2") };
        assert_eq!(too_small.verify(&small, &big), Err(FiltrationError::Lipschitz(0, 1)));
    }

    #[test]
    fn collapse_modes() {
        let src = cloud(&[&["0"], &["1"]], &["1/2", "1/2"]);
        let tgt = cloud(&[&["0"]], &["1"]);
        let collapse = DatasetMorphism { vertex_map: vec![0, 0], lipschitz_k: r("1") };
        let safe = induced_vr_map(&collapse, &src, &tgt, &r("1"), &r("1/2"), LambdaMode::Safe).unwrap();
        assert_eq!(safe.target_lambda, r("1/2"));
        let paper = induced_vr_map(&collapse, &src, &tgt, &r("1"), &r("1/2"), LambdaMode::MinFiberMultiple).unwrap();
        assert_eq!(paper.target_lambda, r("1"));

        let bad_tgt = cloud(&[&["0"]], &["3/4"]);
        assert!(matches!(collapse.verify(&src, &bad_tgt), Err(FiltrationError::Pushforward { target: 0, .. })));
    }

    #[test]
    fn paper_mode_escape_witness() {
        let src = cloud(&[&["0"], &["0"], &["5"], &["5"]], &["2/5", "0", "3/10", "3/10"]);
        let tgt = cloud(&[&["0"], &["5"]], &["2/5", "3/5"]);
        let m = DatasetMorphism { vertex_map: vec![0, 0, 1, 1], lipschitz_k: r("1") };
        assert!(induced_vr_map(&m, &src, &tgt, &r("0"), &r("2/5"), LambdaMode::Safe).is_ok());
        let err = induced_vr_map(&m, &src, &tgt, &r("0"), &r("2/5"), LambdaMode::MinFiberMultiple).unwrap_err();
        assert_eq!(
            err,
            FiltrationError::LambdaEscape {
                source_point: 0,
                target_point: 0,
                prob: "2/5".into(),
                target_prob: "2/5".into(),
                threshold: "4/5".into(),
            }
        );
    }

    #[test]
    fn naturality_and_composition() {
        let src = cloud(&[&["0", "0"], &["1", "0"], &["0", "2"]], &["1/4", "1/4", "1/2"]);
        let mid = cloud(&[&["0", "0"], &["0", "3"]], &["1/2", "1/2"]);
        let tgt = cloud(&[&["0"]], &["1"]);
        let f = DatasetMorphism { vertex_map: vec![0, 0, 1], lipschitz_k: r("3/2") };
        let g = DatasetMorphism { vertex_map: vec![0, 0], lipschitz_k: r("1") };
        f.verify(&src, &mid).unwrap();
        let gf = f.then(&g);
        gf.verify(&src, &tgt).unwrap();
        for (t2, t2b) in [("0", "1"), ("1", "4"), ("1/2", "5")] {
            naturality_square(&f, &src, &mid, (&r(t2), &r("1/2")), (&r(t2b), &r("1/4")), LambdaMode::Safe, 2).unwrap();
        }
        let a = induced_vr_map(&f, &src, &mid, &r("4"), &r("0"), LambdaMode::Safe).unwrap();
        let b = induced_vr_map(&g, &mid, &tgt, &a.target_t2, &a.target_lambda, LambdaMode::Safe).unwrap();
        let c = induced_vr_map(&gf, &src, &tgt, &r("4"), &r("0"), LambdaMode::Safe).unwrap();
        let composed: VertexMap = a.vertex_map.iter().map(|(&x, y)| (x, b.vertex_map[y])).collect();
        assert_eq!(composed, c.vertex_map);
        assert_eq!(b.target_t2, c.target_t2);
    }
}

use super::{Diagram, DiagramError, DiagramRep, Edge, EdgeKind};

/// The object `E_r^{p,q}` of a spectral-sequence page.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectralVertex {
    pub p: i64,
    pub q: i64,
    pub r: usize,
}

/// Page `r` over the given ranges: a differential `(p, q) -> (p + r, q - r + 1)`
/// whenever the target is in range, plus identities.
pub fn build_spectral_page(r: usize, p_range: &[i64], q_range: &[i64]) -> Diagram<SpectralVertex> {
    let vertices: Vec<SpectralVertex> =
        p_range.iter().flat_map(|&p| q_range.iter().map(move |&q| SpectralVertex { p, q, r })).collect();
    let find = |p: i64, q: i64| vertices.iter().position(|v| v.p == p && v.q == q);
    let step = r as i64;
    let edges = vertices
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            let target = find(v.p + step, v.q - step + 1)?;
            Some(Edge { source: i, target, kind: EdgeKind::Differential })
        })
        .collect();
    Diagram::new(vertices, edges).expect("edges join existing vertices").with_identities()
}

/// Outcome of checking `d ∘ d = 0`; `witnesses` lists the `(p, q)` whose
/// outgoing differential composes nontrivially with the next one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralCheck {
    pub valid: bool,
    pub witnesses: Vec<(i64, i64)>,
}

pub fn validate_spectral_rep(d: &Diagram<SpectralVertex>, rep: &DiagramRep) -> Result<SpectralCheck, DiagramError> {
    let rep = DiagramRep::new(d, rep.spaces.clone(), rep.edge_maps.clone(), rep.field)?;
    let differential_from = |v: usize| d.edges().iter().position(|e| e.source == v && e.kind == EdgeKind::Differential);
    let mut witnesses = Vec::new();
    for (i, e) in d.edges().iter().enumerate() {
        if e.kind != EdgeKind::Differential {
            continue;
        }
        let Some(next) = differential_from(e.target) else {
            continue;
        };
        let composite = rep.edge_maps[next].mul(&rep.edge_maps[i]).expect("shapes were checked");
        if !composite.is_zero() {
            let v = d.vertices()[e.source];
            witnesses.push((v.p, v.q));
        }
    }
    Ok(SpectralCheck { valid: witnesses.is_empty(), witnesses })
}

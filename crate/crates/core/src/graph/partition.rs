use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeId, Multigraph, VertexId};

/// Which endpoint of an edge has to land in `X1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSide {
    /// The given endpoint must be in `X1`, the other in `X2`.
    X1At(VertexId),
    /// Either endpoint may be in `X1` (equal entries in the shadow).
    Either,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCut {
    pub x1: Vec<VertexId>,
    pub x2: Vec<VertexId>,
    /// Edges with their required endpoint in `X1` and the other in `X2`.
    pub selected: Vec<EdgeId>,
}

impl PartitionCut {
    pub fn in_x1(&self, v: VertexId) -> bool {
        self.x1.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Place {
    Unset,
    One,
    Two,
}

/// Twice the probability that `v` is on the requested side.
fn weight(place: Place, want_one: bool) -> u32 {
    match (place, want_one) {
        (Place::Unset, _) => 1,
        (Place::One, true) | (Place::Two, false) => 2,
        _ => 0,
    }
}

/// Four times the conditional probability that the edge is correctly sided.
fn edge_score(places: &BTreeMap<VertexId, Place>, u: VertexId, v: VertexId, side: EdgeSide) -> u32 {
    let (pu, pv) = (places[&u], places[&v]);
    match side {
        EdgeSide::X1At(x) => {
            let (a, b) = if x == u { (pu, pv) } else { (pv, pu) };
            weight(a, true) * weight(b, false)
        }
        EdgeSide::Either => weight(pu, true) * weight(pv, false) + weight(pu, false) * weight(pv, true),
    }
}

/// Splits the vertices into `X1`, `X2` so that at least `ceil(|E|/4)` edges
/// are correctly sided.
///
/// A uniformly random split sides each edge correctly with probability at
/// least 1/4. Vertices are fixed one at a time (in vertex order) on the side
/// that keeps the conditional expectation highest, ties going to `X1`, so the
/// final count is at least that expectation.
pub fn choose_partition(g: &Multigraph, sides: &[EdgeSide]) -> PartitionCut {
    assert_eq!(sides.len(), g.edge_count(), "one side marker per edge");
    let mut places: BTreeMap<VertexId, Place> = g.vertices().iter().map(|&v| (v, Place::Unset)).collect();
    let mut incident: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        incident.entry(e.u).or_default().push(i);
        incident.entry(e.v).or_default().push(i);
    }
    for &v in g.vertices() {
        let edges = incident.get(&v).map(Vec::as_slice).unwrap_or(&[]);
        let mut score = |p: Place| -> u32 {
            places.insert(v, p);
            edges
                .iter()
                .map(|&i| {
                    let e = g.edges()[i];
                    edge_score(&places, e.u, e.v, sides[i])
                })
                .sum()
        };
        let one = score(Place::One);
        let two = score(Place::Two);
        places.insert(v, if one >= two { Place::One } else { Place::Two });
    }
    let x1: BTreeSet<VertexId> = places.iter().filter(|(_, &p)| p == Place::One).map(|(&v, _)| v).collect();
    let selected = g
        .edges()
        .iter()
        .zip(sides)
        .filter(|(e, side)| match side {
            EdgeSide::X1At(x) => x1.contains(x) && !x1.contains(&e.other(*x)),
            EdgeSide::Either => x1.contains(&e.u) != x1.contains(&e.v),
        })
        .map(|(e, _)| e.id)
        .collect();
    PartitionCut {
        x1: x1.iter().copied().collect(),
        x2: g.vertices().iter().copied().filter(|v| !x1.contains(v)).collect(),
        selected,
    }
}

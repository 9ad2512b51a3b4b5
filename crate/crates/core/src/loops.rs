//! Reduction to a system of loops: a minimum spanning tree of the polygon
//! graph is contracted, which turns the fundamental polygon into a
//! topological polygon with `4g` sides whose vertices all lie over a single
//! point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::DiskPoint;
use crate::map::{End, FundamentalPolygon, Gluing};
use crate::tolerance::Tolerances;
use crate::word::{same_element, Word};

/// An undirected multigraph edge `(u, v, weight)`.
pub type WeightedEdge = (usize, usize, f64);

/// Kruskal's algorithm; ties are broken by edge index. Returns the indices
/// of the tree edges in the order they were added.
pub fn minimum_spanning_tree(n: usize, edges: &[WeightedEdge]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edges[a].2.total_cmp(&edges[b].2).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = Vec::new();
    for e in order {
        let (u, v, _) = edges[e];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            tree.push(e);
        }
    }
    tree
}

/// For every vertex, the tree edge towards `root` and the vertex at its
/// other end.
pub fn tree_parents(n: usize, edges: &[WeightedEdge], tree: &[usize], root: usize) -> Vec<Option<(usize, usize)>> {
    let mut parents = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &e in tree {
            let (u, v, _) = edges[e];
            let y = if u == x {
                v
            } else if v == x {
                u
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                parents[y] = Some((x, e));
                stack.push(y);
            }
        }
    }
    parents
}

/// Oriented edge: `(index, forward)`; `forward` follows `edges[index]` from
/// its first to its second vertex.
pub type PathStep = (usize, bool);

fn path_to_root(edges: &[WeightedEdge], parents: &[Option<(usize, usize)>], mut x: usize) -> Vec<PathStep> {
    let mut path = Vec::new();
    while let Some((up, e)) = parents[x] {
        path.push((e, edges[e].0 == x));
        x = up;
    }
    path
}

/// The closed path from the root through the non-tree edge `e` and back,
/// following tree edges on both sides.
pub fn contraction_path(edges: &[WeightedEdge], parents: &[Option<(usize, usize)>], e: usize) -> Vec<PathStep> {
    let (u, v, _) = edges[e];
    let mut path: Vec<PathStep> = path_to_root(edges, parents, u).into_iter().rev().map(|(i, f)| (i, !f)).collect();
    path.push((e, true));
    path.extend(path_to_root(edges, parents, v));
    path
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanningTree {
    /// Pair indices of the tree edges.
    pub edges: Vec<usize>,
    pub in_tree: Vec<bool>,
    /// Vertex orbit at the root.
    pub root: usize,
    /// Polygon side chosen as the first edge; its source is the root lift.
    pub start_side: usize,
    /// Per orbit: the parent orbit and the pair index of the tree edge.
    pub parents: Vec<Option<(usize, usize)>>,
    pub weight: f64,
}

/// Graph of the polygon on the surface: one vertex per orbit, one edge per
/// pair, weighted by side length.
pub fn polygon_graph(map: &FundamentalPolygon) -> Vec<WeightedEdge> {
    map.representatives().iter().map(|&r| (map.orbit(r), map.orbit(r + 1), map.side_length(r))).collect()
}

pub fn spanning_tree(map: &FundamentalPolygon) -> SpanningTree {
    let graph = polygon_graph(map);
    let edges = minimum_spanning_tree(map.orbit_count(), &graph);
    let mut in_tree = vec![false; graph.len()];
    for &e in &edges {
        in_tree[e] = true;
    }
    let free = |s: usize| !in_tree[map.edges()[s].generator];
    let sides = map.side_count();
    let mut root = map.orbit(0);
    let start_side = match (0..sides).find(|&s| free(s) && map.orbit(s) == root) {
        Some(s) => s,
        None => {
            let s = (0..sides).find(|&s| free(s)).expect("2g pairs are not in the tree");
            root = map.orbit(s);
            s
        }
    };
    let parents = tree_parents(map.orbit_count(), &graph, &edges, root);
    let weight = edges.iter().map(|&e| graph[e].2).sum();
    SpanningTree { edges, in_tree, root, start_side, parents, weight }
}

/// One side of the topological polygon: the lift of a contraction path.
#[derive(Debug, Clone, Serialize)]
pub struct ChainSide {
    /// The non-tree polygon side this chain runs through.
    pub polygon_side: usize,
    /// Consecutive vertices of the lifted path.
    pub chain: Vec<DiskPoint>,
}

impl ChainSide {
    pub fn chain_length(&self) -> f64 {
        self.chain.windows(2).map(|w| w[0].dist(w[1])).sum()
    }

    pub fn chord_length(&self) -> f64 {
        self.chain[0].dist(*self.chain.last().expect("chains are nonempty"))
    }
}

/// A side pairing `(side, partner, word)`: `word` maps `partner` onto
/// `side` with endpoints reversed.
#[derive(Debug, Clone, Serialize)]
pub struct SidePairing {
    pub side: usize,
    pub partner: usize,
    pub word: Word,
}

/// The polygon obtained by contracting the spanning tree. Side `k` runs from
/// vertex `k` to vertex `k + 1`; vertex `k` is `table[k] · basepoint`.
#[derive(Debug, Clone, Serialize)]
pub struct TopologicalPolygon {
    pub basepoint: DiskPoint,
    pub sides: Vec<ChainSide>,
    pub table: Vec<Word>,
    pub vertices: Vec<DiskPoint>,
    pub pairings: Vec<SidePairing>,
    #[serde(skip)]
    pub gluing: Gluing,
    pub tree: SpanningTree,
    /// Elementary map accesses made by the walk.
    pub accesses: usize,
}

impl TopologicalPolygon {
    pub fn side_count(&self) -> usize {
        self.sides.len()
    }

    pub fn chord_length(&self, k: usize) -> f64 {
        self.sides[k].chord_length()
    }
}

struct VertexLift {
    /// `ρ` with the tree path from the vertex ending at `ρ · b̂`.
    word: Word,
    path: Vec<DiskPoint>,
}

/// Lifts the tree path from polygon vertex `k` to the root orbit by turning
/// around each vertex met until the tree edge to the parent shows up.
fn lift_to_root(map: &FundamentalPolygon, tree: &SpanningTree, k: usize) -> Result<VertexLift> {
    let gens = map.generators();
    let mut w = Word::identity();
    let mut cur = k;
    let mut path = vec![map.vertex(k)];
    while let Some((_, tree_edge)) = tree.parents[map.orbit(cur)] {
        let star = map.incident_edges(cur, End::Source)?;
        let entry = star
            .entries
            .iter()
            .find(|s| map.edges()[s.edge].generator == tree_edge)
            .ok_or(Error::LiftNotFound { edge: tree_edge, vertex: cur })?;
        let other = match entry.end {
            End::Source => (entry.edge + 1) % map.side_count(),
            End::Target => entry.edge,
        };
        w = w.compose(&entry.word);
        cur = other;
        path.push(w.resolved().apply(map.vertex(cur)));
    }
    let start = &map.vertices()[tree.start_side].word;
    let word = w.compose(&map.vertices()[cur].word).compose(&start.inverse()).refreshed(gens);
    Ok(VertexLift { word, path })
}

/// Walks the tiling to build the topological polygon: one chain per
/// non-tree side of the input, in the order of the input polygon starting
/// from the first edge of the tree.
pub fn build_topological_polygon(
    map: &FundamentalPolygon,
    tree: &SpanningTree,
    tol: &Tolerances,
) -> Result<TopologicalPolygon> {
    map.gluing().reset_accesses();
    let sides = map.side_count();
    let base = map.vertex(tree.start_side);
    let lifts = (0..sides).map(|k| lift_to_root(map, tree, k)).collect::<Result<Vec<_>>>()?;
    let order: Vec<usize> = (0..sides)
        .map(|d| (tree.start_side + d) % sides)
        .filter(|&s| !tree.in_tree[map.edges()[s].generator])
        .collect();
    let mut index_of = vec![usize::MAX; sides];
    for (i, &s) in order.iter().enumerate() {
        index_of[s] = i;
    }

    let mut chain_sides = Vec::with_capacity(order.len());
    let mut table = Vec::with_capacity(order.len());
    for &s in &order {
        let (from, to) = (&lifts[s], &lifts[(s + 1) % sides]);
        let mut chain: Vec<DiskPoint> = from.path.iter().rev().copied().collect();
        chain.extend(to.path.iter().copied());
        for (lift, end) in [(from, chain[0]), (to, *chain.last().expect("nonempty"))] {
            let d = lift.word.resolved().apply(base).dist(end);
            if d > tol.geom {
                return Err(Error::WordMismatch(format!("chain of side {s} ends {d:e} away from its table word")));
            }
        }
        chain_sides.push(ChainSide { polygon_side: s, chain });
        table.push(from.word.clone());
    }
    for (i, &s) in order.iter().enumerate() {
        let next = order[(i + 1) % order.len()];
        if !same_element(lifts[(s + 1) % sides].word.resolved(), lifts[next].word.resolved(), tol.norm) {
            return Err(Error::WordMismatch(format!("chains {i} and {} do not connect", (i + 1) % order.len())));
        }
    }

    let pair: Vec<usize> = order.iter().map(|&s| index_of[map.edges()[s].pair]).collect();
    let onto_self: Vec<Word> = order.iter().map(|&s| map.onto_self(s).clone()).collect();
    let mut pairings = Vec::new();
    for (a, &s) in order.iter().enumerate() {
        let b = pair[a];
        let p = map.edges()[s].pair;
        let gamma = onto_self[a].resolved();
        let head = gamma.compose(lifts[p].word.resolved());
        let tail = gamma.compose(lifts[(p + 1) % sides].word.resolved());
        if !same_element(&head, lifts[(s + 1) % sides].word.resolved(), tol.norm)
            || !same_element(&tail, lifts[s].word.resolved(), tol.norm)
        {
            return Err(Error::WordMismatch(format!("pairing of chains {a} and {b} is inconsistent")));
        }
        if a < b {
            pairings.push(SidePairing { side: a, partner: b, word: onto_self[a].clone() });
        }
    }
    let vertices = table.iter().map(|w| w.resolved().apply(base)).collect();
    let accesses = map.gluing().accesses();
    Ok(TopologicalPolygon {
        basepoint: base,
        sides: chain_sides,
        table,
        vertices,
        pairings,
        gluing: Gluing::new(pair, onto_self),
        tree: tree.clone(),
        accesses,
    })
}

/// Spanning tree and topological polygon in one call.
pub fn reduce(map: &FundamentalPolygon, tol: &Tolerances) -> Result<TopologicalPolygon> {
    let tree = spanning_tree(map);
    build_topological_polygon(map, &tree, tol)
}

//! Immutable simple undirected graphs on dense vertex ids.
//!
//! Every downstream module (cover solvers, game solver, reductions, strategy
//! synthesis) works on [`Graph`] through the neighborhood, component and
//! distance primitives defined here. Neighbor lists and component lists are
//! kept sorted so that all tie-breaking further down is reproducible.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Distance sentinel for unreachable pairs.
pub const INF: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    /// Builds a graph on `n` vertices, rejecting self-loops, duplicate edges
    /// (in either orientation) and out-of-range ids.
    pub fn build(n: usize, edge_list: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, adj, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// `true` when `u == v` or the two are adjacent: the legal single-move relation.
    pub fn is_move(&self, from: Vertex, to: Vertex) -> bool {
        from == to || self.has_edge(from, to)
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn closed_neighborhood(&self, v: Vertex) -> Result<VertexSet> {
        self.check(v)?;
        let mut members = self.adj[v].clone();
        let pos = members.binary_search(&v).unwrap_err();
        members.insert(pos, v);
        Ok(VertexSet {
            members,
            universe: self.n,
        })
    }

    /// Connected components of the subgraph induced by `restrict`, each
    /// sorted, the list ordered by smallest member.
    pub fn components(&self, restrict: &VertexSet) -> Vec<VertexSet> {
        let mask = restrict.to_mask();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in restrict.iter() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if mask[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(VertexSet {
                members: comp,
                universe: self.n,
            });
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components(&VertexSet::full(self.n)).len() == 1
    }

    /// BFS distances from `src`, optionally confined to vertices where `mask` is
    /// set. Vertices outside the mask (and `src` itself if masked out) get [`INF`].
    pub fn bfs(&self, src: Vertex, mask: Option<&[bool]>) -> Vec<u32> {
        let mut dist = vec![INF; self.n];
        if mask.is_some_and(|m| !m[src]) {
            return dist;
        }
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == INF && mask.is_none_or(|m| m[w]) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn all_pairs_distances(&self) -> DistanceMatrix {
        self.distances_within(None)
    }

    /// All-pairs distances in the subgraph induced by `mask`.
    pub fn distances_within(&self, mask: Option<&[bool]>) -> DistanceMatrix {
        let mut d = Vec::with_capacity(self.n * self.n);
        for s in 0..self.n {
            d.extend(self.bfs(s, mask));
        }
        DistanceMatrix { n: self.n, d }
    }

    /// A shortest `from`–`to` path inside `mask`, choosing the lowest-id
    /// neighbor at each step.
    pub fn shortest_path(&self, from: Vertex, to: Vertex, mask: Option<&[bool]>) -> Option<Vec<Vertex>> {
        let dist = self.bfs(to, mask);
        if dist[from] == INF {
            return None;
        }
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = *self.adj[cur]
                .iter()
                .find(|&&w| dist[w] != INF && dist[w] + 1 == dist[cur])
                .expect("bfs layers are consistent");
            path.push(cur);
        }
        Some(path)
    }

    pub fn is_isometric(&self, path: &Path) -> Result<bool> {
        path.validate(self)?;
        let vs = path.vertices();
        let (first, last) = (vs[0], vs[vs.len() - 1]);
        Ok(self.bfs(first, None)[last] as usize == path.len())
    }

    /// Induced subgraph on `vertices`, relabelled to `0..k` in increasing order.
    /// Returns the subgraph and the local-to-global id map.
    pub fn induced(&self, vertices: &VertexSet) -> (Graph, Vec<Vertex>) {
        let globals = vertices.members.clone();
        let mut local = vec![usize::MAX; self.n];
        for (i, &g) in globals.iter().enumerate() {
            local[g] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        let g = Graph::build(globals.len(), &edges).expect("induced subgraph of a simple graph is simple");
        (g, globals)
    }
}

impl fmt::Display for Graph {
    /// Edge-list text: header `n m`, then one `u v` line per edge.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    /// Raw distance, [`INF`] when unreachable.
    pub fn raw(&self, u: Vertex, v: Vertex) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<u32> {
        Some(self.raw(u, v)).filter(|&d| d != INF)
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Sorted, duplicate-free set of vertex ids below `universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    members: Vec<Vertex>,
    universe: usize,
}

impl VertexSet {
    pub fn new(universe: usize, members: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut members: Vec<_> = members.into_iter().collect();
        if let Some(&v) = members.iter().find(|&&v| v >= universe) {
            return Err(Error::VertexOutOfRange { vertex: v, n: universe });
        }
        members.sort_unstable();
        members.dedup();
        Ok(VertexSet { members, universe })
    }

    pub fn empty(universe: usize) -> Self {
        VertexSet {
            members: Vec::new(),
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet {
            members: (0..universe).collect(),
            universe,
        }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet {
            members: (0..mask.len()).filter(|&v| mask[v]).collect(),
            universe: mask.len(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.members
    }

    pub fn to_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self.iter().filter(|&v| other.contains(v)).collect(),
            universe: self.universe,
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self.iter().filter(|&v| !other.contains(v)).collect(),
            universe: self.universe,
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A simple path: consecutive vertices adjacent, no vertex repeated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(graph: &Graph, vertices: Vec<Vertex>) -> Result<Self> {
        let p = Path { vertices };
        p.validate(graph)?;
        Ok(p)
    }

    fn validate(&self, graph: &Graph) -> Result<()> {
        let vs = &self.vertices;
        if vs.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        for &v in vs {
            graph.check(v)?;
        }
        if let Some(w) = vs.windows(2).find(|w| !graph.has_edge(w[0], w[1])) {
            return Err(Error::InvalidPath(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        let mut sorted = vs.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath("repeated vertex".into()));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edge count.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, "-")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Named graph families used by tests, examples and the corpus tooling.
pub mod families {
    use super::{Graph, Vertex};

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::build(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Graph::build(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::build(n, &edges).unwrap()
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::build(leaves + 1, &edges).unwrap()
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph::build(n, &[]).unwrap()
    }

    /// Outer 5-cycle 0..4, inner pentagram 5..9, spokes i–(i+5).
    pub fn petersen() -> Graph {
        let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Graph::build(10, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    fn set(n: usize, vs: &[Vertex]) -> VertexSet {
        VertexSet::new(n, vs.iter().copied()).unwrap()
    }

    #[test]
    fn build_examples() {
        let p3 = Graph::build(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p3.degree(1), 2);
        assert_eq!(p3.edge_count(), 2);
        let k1 = Graph::build(1, &[]).unwrap();
        assert_eq!(k1.n(), 1);
        assert_eq!(Graph::build(3, &[(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(Graph::build(3, &[(0, 1), (1, 0)]), Err(Error::DuplicateEdge(0, 1)));
        assert_eq!(
            Graph::build(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = Graph::build(5, &[(4, 0), (2, 0), (3, 1), (1, 0)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 4]);
        for (u, v) in g.edges().iter().copied() {
            assert!(g.has_edge(u, v) && g.has_edge(v, u));
        }
    }

    #[test]
    fn closed_neighborhood_examples() {
        assert_eq!(path(3).closed_neighborhood(1).unwrap(), set(3, &[0, 1, 2]));
        assert_eq!(path(1).closed_neighborhood(0).unwrap(), set(1, &[0]));
        assert_eq!(cycle(4).closed_neighborhood(0).unwrap(), set(4, &[0, 1, 3]));
        assert!(path(3).closed_neighborhood(3).is_err());
    }

    #[test]
    fn components_examples() {
        let p5 = path(5);
        assert_eq!(
            p5.components(&set(5, &[0, 1, 3, 4])),
            vec![set(5, &[0, 1]), set(5, &[3, 4])]
        );
        assert!(p5.components(&VertexSet::empty(5)).is_empty());
        assert_eq!(cycle(6).components(&VertexSet::full(6)), vec![VertexSet::full(6)]);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(path(5).all_pairs_distances().get(0, 4), Some(4));
        assert_eq!(edgeless(2).all_pairs_distances().get(0, 1), None);
        assert_eq!(cycle(6).all_pairs_distances().get(0, 3), Some(3));
    }

    #[test]
    fn isometric_examples() {
        let c6 = cycle(6);
        let p = Path::new(&c6, vec![0, 1, 2, 3]).unwrap();
        assert!(c6.is_isometric(&p).unwrap());
        let p = Path::new(&c6, vec![0, 1, 2, 3, 4]).unwrap();
        assert!(!c6.is_isometric(&p).unwrap());
        let p = Path::new(&c6, vec![2]).unwrap();
        assert!(c6.is_isometric(&p).unwrap());
        assert!(Path::new(&c6, vec![0, 2]).is_err());
        assert!(Path::new(&c6, vec![0, 1, 0]).is_err());
    }

    #[test]
    fn shortest_path_prefers_low_ids() {
        let c6 = cycle(6);
        assert_eq!(c6.shortest_path(0, 3, None), Some(vec![0, 1, 2, 3]));
        let mask = set(6, &[0, 5, 4, 3]).to_mask();
        assert_eq!(c6.shortest_path(0, 3, Some(&mask)), Some(vec![0, 5, 4, 3]));
        assert_eq!(edgeless(2).shortest_path(0, 1, None), None);
    }

    #[test]
    fn induced_relabels_in_order() {
        let c6 = cycle(6);
        let (h, map) = c6.induced(&set(6, &[1, 2, 3, 5]));
        assert_eq!(map, vec![1, 2, 3, 5]);
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn petersen_is_cubic() {
        let g = petersen();
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert_eq!(
            (0..10).flat_map(|u| (0..10).map(move |v| (u, v))).map(|(u, v)| g.all_pairs_distances().raw(u, v)).max(),
            Some(2)
        );
    }
}

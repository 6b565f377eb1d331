//! Exhaustive application of the three cover-shrinking rules to `(G, U)`.
//!
//! * RR1: a vertex outside `U` with at least three `U`-neighbors gets a cop and
//!   its closed neighborhood is deleted.
//! * RR2: a vertex of `U` with at least two `U`-neighbors, same treatment.
//! * RR3: an isometric path carrying at least three `U`-vertices gets a path
//!   guard and is deleted.
//!
//! Deleted vertices stay in the graph for the cops; the engine only shrinks the
//! set of robber-accessible ("active") vertices, and every rule is evaluated in
//! the subgraph induced by the active set.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path, Vertex, VertexSet, INF};
use crate::params::verify_cover;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Rr1,
    Rr2,
    Rr3,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::Rr1 => "RR1",
            RuleKind::Rr2 => "RR2",
            RuleKind::Rr3 => "RR3",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Anchor {
    Vertex(Vertex),
    Path(Path),
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anchor::Vertex(v) => write!(f, "{v}"),
            Anchor::Path(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: RuleKind,
    pub anchor: Anchor,
    pub deleted: VertexSet,
    pub u_removed: VertexSet,
    /// Robber-accessible vertices just before this step.
    pub active_before: VertexSet,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} anchor={} deleted={} u_removed={}",
            self.kind, self.anchor, self.deleted, self.u_removed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub cover: VertexSet,
    pub residual_active: VertexSet,
    pub u_prime: VertexSet,
}

impl ReductionTrace {
    pub fn r(&self) -> usize {
        self.steps.len()
    }

    /// Components `H` of the residual graph paired with `U'_H`.
    pub fn components(&self, graph: &Graph) -> Vec<(VertexSet, VertexSet)> {
        graph
            .components(&self.residual_active)
            .into_iter()
            .map(|h| {
                let uh = h.intersection(&self.u_prime);
                (h, uh)
            })
            .collect()
    }

    /// `|U'| <= |U| - 3r` together with the per-step `>= 3` removal.
    pub fn satisfies_cover_drop(&self) -> bool {
        self.steps.iter().all(|s| s.u_removed.len() >= 3)
            && self.u_prime.len() + 3 * self.r() <= self.cover.len()
    }

    /// Line-oriented log: one line per step, then summary lines.
    pub fn log(&self, graph: &Graph) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&format!("{s}\n"));
        }
        out.push_str(&format!("r={}\n", self.r()));
        out.push_str(&format!("u={}\n", self.cover));
        out.push_str(&format!("u_prime={}\n", self.u_prime));
        out.push_str(&format!("residual={}\n", self.residual_active));
        for (h, uh) in self.components(graph) {
            out.push_str(&format!("component {h} u_prime_h={uh}\n"));
        }
        out
    }
}

fn u_neighbors(graph: &Graph, v: Vertex, active: &[bool], cover: &[bool]) -> usize {
    graph
        .neighbors(v)
        .iter()
        .filter(|&&w| active[w] && cover[w])
        .count()
}

fn neighborhood_step(
    graph: &Graph,
    kind: RuleKind,
    v: Vertex,
    active: &VertexSet,
    cover: &VertexSet,
) -> ReductionStep {
    let deleted = graph.closed_neighborhood(v).unwrap().intersection(active);
    let u_removed = deleted.intersection(cover);
    ReductionStep {
        kind,
        anchor: Anchor::Vertex(v),
        deleted,
        u_removed,
        active_before: active.clone(),
    }
}

pub fn find_rr1(graph: &Graph, active: &VertexSet, cover: &VertexSet) -> Option<ReductionStep> {
    let (am, cm) = (active.to_mask(), cover.to_mask());
    active
        .iter()
        .find(|&v| !cm[v] && u_neighbors(graph, v, &am, &cm) >= 3)
        .map(|v| neighborhood_step(graph, RuleKind::Rr1, v, active, cover))
}

pub fn find_rr2(graph: &Graph, active: &VertexSet, cover: &VertexSet) -> Option<ReductionStep> {
    let (am, cm) = (active.to_mask(), cover.to_mask());
    active
        .iter()
        .find(|&v| cm[v] && u_neighbors(graph, v, &am, &cm) >= 2)
        .map(|v| neighborhood_step(graph, RuleKind::Rr2, v, active, cover))
}

/// Looks for cover vertices `u < v` and `w` with `d(u,w) + d(w,v) = d(u,v)` in
/// the active graph and returns the shortest `u`–`v` path through `w`.
pub fn find_rr3(graph: &Graph, active: &VertexSet, cover: &VertexSet) -> Option<ReductionStep> {
    let am = active.to_mask();
    let live: Vec<Vertex> = cover.iter().filter(|&v| am[v]).collect();
    if live.len() < 3 {
        return None;
    }
    let dist: Vec<Vec<u32>> = live.iter().map(|&s| graph.bfs(s, Some(&am))).collect();
    for (i, &u) in live.iter().enumerate() {
        for (j, &v) in live.iter().enumerate().skip(i + 1) {
            let duv = dist[i][v];
            if duv == INF {
                continue;
            }
            for (l, &w) in live.iter().enumerate() {
                if l == i || l == j {
                    continue;
                }
                let (duw, dwv) = (dist[i][w], dist[l][v]);
                if duw == INF || dwv == INF || duw + dwv != duv {
                    continue;
                }
                let mut vertices = graph.shortest_path(u, w, Some(&am)).unwrap();
                vertices.extend(graph.shortest_path(w, v, Some(&am)).unwrap().into_iter().skip(1));
                let path = Path::new(graph, vertices).expect("concatenated geodesics form a shortest path");
                let deleted = VertexSet::new(graph.n(), path.vertices().iter().copied()).unwrap();
                let u_removed = deleted.intersection(cover);
                return Some(ReductionStep {
                    kind: RuleKind::Rr3,
                    anchor: Anchor::Path(path),
                    deleted,
                    u_removed,
                    active_before: active.clone(),
                });
            }
        }
    }
    None
}

fn next_step(graph: &Graph, active: &VertexSet, cover: &VertexSet) -> Option<ReductionStep> {
    find_rr1(graph, active, cover)
        .or_else(|| find_rr2(graph, active, cover))
        .or_else(|| find_rr3(graph, active, cover))
}

/// Applies RR1 > RR2 > RR3 until none fires. `cover` must be a 2-coc cover.
pub fn reduce(graph: &Graph, cover: &VertexSet) -> Result<ReductionTrace> {
    if cover.universe() != graph.n() || !verify_cover(graph, cover, 2) {
        return Err(Error::InvalidCover);
    }
    let mut active = VertexSet::full(graph.n());
    let mut steps = Vec::new();
    while let Some(step) = next_step(graph, &active, cover) {
        active = active.difference(&step.deleted);
        steps.push(step);
    }
    let u_prime = cover.intersection(&active);
    Ok(ReductionTrace {
        steps,
        cover: cover.clone(),
        residual_active: active,
        u_prime,
    })
}

/// `true` when none of the three rules fires on `(active, cover)`.
pub fn is_fixed_point(graph: &Graph, active: &VertexSet, cover: &VertexSet) -> bool {
    next_step(graph, active, cover).is_none()
}

/// Every pair of `u_prime_h` is within distance 3 in `h`, through a shortest
/// path whose interior avoids `u_prime_h` (the only cover vertices left in `h`).
pub fn lemma1_check(graph: &Graph, h: &VertexSet, u_prime_h: &VertexSet) -> bool {
    let hm = h.to_mask();
    let cm = u_prime_h.to_mask();
    let us: Vec<_> = u_prime_h.iter().collect();
    for (i, &u) in us.iter().enumerate() {
        let d = graph.bfs(u, Some(&hm));
        let d_free = bfs_cover_free(graph, u, &hm, &cm);
        for &v in &us[i + 1..] {
            if d[v] == INF || d[v] > 3 || d_free[v] != d[v] {
                return false;
            }
        }
    }
    true
}

/// BFS from `src` inside `mask` that never expands through cover vertices
/// other than the source; cover vertices are still reached as endpoints.
fn bfs_cover_free(graph: &Graph, src: Vertex, mask: &[bool], cover: &[bool]) -> Vec<u32> {
    let mut dist = vec![INF; graph.n()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        if x != src && cover[x] {
            continue;
        }
        for &w in graph.neighbors(x) {
            if mask[w] && dist[w] == INF {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Diameter of the subgraph induced by `h`, `None` if it is disconnected.
pub fn component_diameter(graph: &Graph, h: &VertexSet) -> Option<u32> {
    let hm = h.to_mask();
    let mut best = 0;
    for s in h.iter() {
        let d = graph.bfs(s, Some(&hm));
        for t in h.iter() {
            if d[t] == INF {
                return None;
            }
            best = best.max(d[t]);
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn set(n: usize, vs: &[Vertex]) -> VertexSet {
        VertexSet::new(n, vs.iter().copied()).unwrap()
    }

    #[test]
    fn rr1_examples() {
        let g = star(3);
        let s = find_rr1(&g, &VertexSet::full(4), &set(4, &[1, 2, 3])).unwrap();
        assert_eq!(s.anchor, Anchor::Vertex(0));
        assert_eq!(s.deleted, set(4, &[0, 1, 2, 3]));
        assert_eq!(s.u_removed.len(), 3);

        assert!(find_rr1(&path(3), &VertexSet::full(3), &set(3, &[0, 2])).is_none());
        assert!(find_rr1(&complete(5), &VertexSet::full(5), &VertexSet::empty(5)).is_none());
    }

    #[test]
    fn rr2_examples() {
        let s = find_rr2(&path(3), &VertexSet::full(3), &VertexSet::full(3)).unwrap();
        assert_eq!(s.anchor, Anchor::Vertex(1));
        assert_eq!(s.deleted, VertexSet::full(3));
        assert!(find_rr2(&cycle(5), &VertexSet::full(5), &set(5, &[0, 2])).is_none());
        let s = find_rr2(&complete(3), &VertexSet::full(3), &VertexSet::full(3)).unwrap();
        assert_eq!(s.anchor, Anchor::Vertex(0));
    }

    #[test]
    fn rr3_examples() {
        let p7 = path(7);
        let s = find_rr3(&p7, &VertexSet::full(7), &set(7, &[0, 3, 6])).unwrap();
        match &s.anchor {
            Anchor::Path(p) => assert_eq!(p.vertices(), &[0, 1, 2, 3, 4, 5, 6]),
            other => panic!("unexpected anchor {other:?}"),
        }
        assert_eq!(s.u_removed, set(7, &[0, 3, 6]));
        assert!(find_rr3(&p7, &VertexSet::full(7), &set(7, &[2, 5])).is_none());
        assert!(find_rr3(&complete(3), &VertexSet::full(3), &set(3, &[0])).is_none());
    }

    #[test]
    fn rules_respect_the_active_set() {
        // C6 with every vertex in U: RR2 fires at 0, then at 3 on what is left
        let g = cycle(6);
        let t = reduce(&g, &VertexSet::full(6)).unwrap();
        assert_eq!(t.r(), 2);
        assert_eq!(t.steps[1].anchor, Anchor::Vertex(3));
        assert_eq!(t.steps[1].deleted, set(6, &[2, 3, 4]));
        assert!(t.residual_active.is_empty());
    }

    #[test]
    fn reduce_examples() {
        let t = reduce(&star(3), &set(4, &[1, 2, 3])).unwrap();
        assert_eq!(t.r(), 1);
        assert!(t.u_prime.is_empty());
        assert!(t.satisfies_cover_drop());

        let t = reduce(&path(7), &set(7, &[2, 5])).unwrap();
        assert_eq!(t.r(), 0);
        assert_eq!(t.u_prime, set(7, &[2, 5]));

        let t = reduce(&edgeless(3), &VertexSet::empty(3)).unwrap();
        assert_eq!(t.r(), 0);

        assert_eq!(reduce(&path(7), &set(7, &[2])), Err(Error::InvalidCover));
    }

    #[test]
    fn lemma1_examples() {
        let p7 = path(7);
        assert!(lemma1_check(&p7, &VertexSet::full(7), &set(7, &[2, 5])));
        assert!(lemma1_check(&p7, &VertexSet::full(7), &set(7, &[4])));
        // d(0, 6) = 6 breaks the distance bound
        assert!(!lemma1_check(&p7, &VertexSet::full(7), &set(7, &[0, 6])));
        // the only 0-4 geodesic runs through cover vertex 2
        assert!(!lemma1_check(&path(5), &VertexSet::full(5), &set(5, &[0, 2, 4])));
        assert_eq!(component_diameter(&p7, &VertexSet::full(7)), Some(6));
    }

    #[test]
    fn log_lists_steps_then_summary() {
        let g = star(3);
        let t = reduce(&g, &set(4, &[1, 2, 3])).unwrap();
        let log = t.log(&g);
        let lines: Vec<_> = log.lines().collect();
        assert_eq!(lines[0], "RR1 anchor=0 deleted={0,1,2,3} u_removed={1,2,3}");
        assert_eq!(lines[1], "r=1");
    }
}

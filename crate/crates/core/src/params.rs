//! Exact ℓ-component order connectivity.
//!
//! A set `U` is an ℓ-cover when every component of `G - U` has at most ℓ
//! vertices; ℓ = 1 gives vertex covers. [`coc`] finds a minimum cover by
//! (ℓ+1)-way branching on connected (ℓ+1)-vertex sets that survive outside the
//! partial cover, and returns the lexicographically smallest minimum cover.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocCover {
    pub ell: usize,
    pub cover: VertexSet,
}

impl CocCover {
    pub fn size(&self) -> usize {
        self.cover.len()
    }
}

pub fn verify_cover(graph: &Graph, cover: &VertexSet, ell: usize) -> bool {
    let rest = VertexSet::full(graph.n()).difference(cover);
    graph.components(&rest).iter().all(|c| c.len() <= ell)
}

pub fn vcn(graph: &Graph) -> CocCover {
    coc(graph, 1).expect("ell = 1 is valid")
}

pub fn coc(graph: &Graph, ell: usize) -> Result<CocCover> {
    if ell < 1 {
        return Err(Error::InvalidBound(ell));
    }
    let n = graph.n();
    let mut search = Search {
        graph,
        ell,
        best: greedy_cover(graph, ell),
        in_cover: vec![false; n],
        forbidden: vec![false; n],
    };
    search.branch(0);
    let mut best = search.best;
    best.sort_unstable();
    Ok(CocCover {
        ell,
        cover: VertexSet::new(n, best).expect("ids come from the graph"),
    })
}

/// First connected set of `ell + 1` vertices outside `removed`, grown by BFS
/// from the lowest-id eligible vertex. The set is in BFS order.
fn find_violation(graph: &Graph, removed: &[bool], ell: usize) -> Option<Vec<Vertex>> {
    let mut seen = vec![false; graph.n()];
    for s in 0..graph.n() {
        if removed[s] || seen[s] {
            continue;
        }
        let mut set = vec![s];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in graph.neighbors(u) {
                if !removed[w] && !seen[w] {
                    seen[w] = true;
                    if set.len() <= ell {
                        set.push(w);
                    }
                    queue.push_back(w);
                }
            }
        }
        if set.len() > ell {
            return Some(set);
        }
    }
    None
}

fn greedy_cover(graph: &Graph, ell: usize) -> Vec<Vertex> {
    let n = graph.n();
    let mut removed = vec![false; n];
    while let Some(set) = find_violation(graph, &removed, ell) {
        let pick = *set
            .iter()
            .max_by_key(|&&v| {
                let live = graph.neighbors(v).iter().filter(|&&w| !removed[w]).count();
                (live, std::cmp::Reverse(v))
            })
            .unwrap();
        removed[pick] = true;
    }
    let mut cover: Vec<_> = (0..n).filter(|&v| removed[v]).collect();
    cover.sort_unstable();
    cover
}

struct Search<'g> {
    graph: &'g Graph,
    ell: usize,
    best: Vec<Vertex>,
    in_cover: Vec<bool>,
    forbidden: Vec<bool>,
}

impl Search<'_> {
    /// Number of vertex-disjoint violating sets: each needs its own cover vertex.
    fn lower_bound(&self) -> usize {
        let mut used = self.in_cover.clone();
        let mut count = 0;
        while let Some(set) = find_violation(self.graph, &used, self.ell) {
            count += 1;
            for v in set {
                used[v] = true;
            }
        }
        count
    }

    fn current(&self) -> Vec<Vertex> {
        (0..self.in_cover.len()).filter(|&v| self.in_cover[v]).collect()
    }

    fn branch(&mut self, size: usize) {
        if size + self.lower_bound() > self.best.len() {
            return;
        }
        let Some(set) = find_violation(self.graph, &self.in_cover, self.ell) else {
            let cand = self.current();
            if cand.len() < self.best.len() || (cand.len() == self.best.len() && cand < self.best) {
                self.best = cand;
            }
            return;
        };
        // Branch i takes set[i] and keeps every earlier member out of the cover,
        // so each cover is reached along exactly one branch.
        let mut newly_forbidden = Vec::new();
        for &v in &set {
            if self.forbidden[v] {
                continue;
            }
            self.in_cover[v] = true;
            self.branch(size + 1);
            self.in_cover[v] = false;
            self.forbidden[v] = true;
            newly_forbidden.push(v);
        }
        for v in newly_forbidden {
            self.forbidden[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    /// Exhaustive minimum over all subsets, lexicographically smallest among ties.
    fn brute(graph: &Graph, ell: usize) -> Vec<Vertex> {
        let n = graph.n();
        let mut best: Option<Vec<Vertex>> = None;
        for mask in 0u32..(1 << n) {
            let set: Vec<_> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let vs = VertexSet::new(n, set.clone()).unwrap();
            if !verify_cover(graph, &vs, ell) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => set.len() < b.len() || (set.len() == b.len() && set < *b),
            };
            if better {
                best = Some(set);
            }
        }
        best.unwrap()
    }

    #[test]
    fn coc_examples_match_brute_force() {
        let cases = [
            (path(2), 2, 0),
            (path(3), 2, 1),
            (cycle(6), 2, 2),
            (complete(5), 2, 3),
        ];
        for (g, ell, size) in cases {
            assert_eq!(brute(&g, ell).len(), size);
            let c = coc(&g, ell).unwrap();
            assert_eq!(c.size(), size);
            assert_eq!(c.cover.as_slice(), brute(&g, ell).as_slice());
        }
    }

    #[test]
    fn vcn_examples() {
        let c = vcn(&path(3));
        assert_eq!(c.cover.as_slice(), &[1]);
        assert_eq!(vcn(&cycle(4)).size(), 2);
        assert_eq!(vcn(&edgeless(5)).size(), 0);
        assert_eq!(vcn(&petersen()).size(), brute(&petersen(), 1).len());
    }

    #[test]
    fn verify_cover_examples() {
        let p5 = path(5);
        assert!(verify_cover(&p5, &VertexSet::new(5, [2]).unwrap(), 2));
        assert!(!verify_cover(&p5, &VertexSet::empty(5), 2));
        assert!(verify_cover(&p5, &VertexSet::full(5), 1));
        assert!(verify_cover(&complete(4), &VertexSet::full(4), 7));
    }

    #[test]
    fn rejects_zero_bound() {
        assert_eq!(coc(&path(3), 0), Err(Error::InvalidBound(0)));
    }
}

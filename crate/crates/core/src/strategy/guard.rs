//! Cops that make deleted vertices unusable for the robber.

use crate::graph::{Graph, Path, Vertex, VertexSet, INF};

/// Cop parked on an RR1/RR2 anchor. Every deleted vertex is in the closed
/// neighborhood of the post, so a robber stepping there is adjacent to the cop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StaticGuard {
    pub post: Vertex,
}

/// One cop guarding an isometric path by shadowing the robber: with
/// `p_0 .. p_L` the path, the shadow of robber position `x` is
/// `p_i` for `i = min(d(p_0, x), L)`, distances taken in the graph the robber
/// could use when the path was deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathGuard {
    pub path: Path,
    pub cop_pos: Vertex,
    pub settled: bool,
    reach: Vec<u32>,
}

impl PathGuard {
    /// Guard for `path`, isometric inside `active`; the cop starts on `p_0`.
    pub fn new(graph: &Graph, path: Path, active: &VertexSet) -> Self {
        let p0 = path.vertices()[0];
        let reach = graph.bfs(p0, Some(&active.to_mask()));
        PathGuard {
            cop_pos: p0,
            settled: false,
            path,
            reach,
        }
    }

    pub fn shadow_index(&self, robber: Vertex) -> usize {
        let d = self.reach[robber];
        if d == INF {
            self.path.len()
        } else {
            (d as usize).min(self.path.len())
        }
    }

    pub fn shadow(&self, robber: Vertex) -> Vertex {
        self.path.vertices()[self.shadow_index(robber)]
    }

    fn index_of(&self, v: Vertex) -> usize {
        self.path
            .vertices()
            .iter()
            .position(|&p| p == v)
            .expect("path guard stays on its path")
    }

    /// Where a cop standing on `from` moves when the robber is at `robber`:
    /// one path edge toward the shadow.
    pub fn advance(&self, from: Vertex, robber: Vertex) -> Vertex {
        let i = self.index_of(from);
        let target = self.shadow_index(robber);
        let j = match target.cmp(&i) {
            std::cmp::Ordering::Greater => i + 1,
            std::cmp::Ordering::Less => i - 1,
            std::cmp::Ordering::Equal => i,
        };
        self.path.vertices()[j]
    }

    pub fn is_settled_at(&self, pos: Vertex, robber: Vertex) -> bool {
        pos == self.shadow(robber)
    }
}

/// One guard turn: move toward the shadow, capturing when the shadow is the robber.
pub fn path_guard_step(guard: &PathGuard, robber: Vertex) -> PathGuard {
    let cop_pos = guard.advance(guard.cop_pos, robber);
    PathGuard {
        cop_pos,
        settled: guard.is_settled_at(cop_pos, robber),
        ..guard.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::path;

    fn guard_on_p7_prefix() -> (Graph, PathGuard) {
        let g = path(7);
        let p = Path::new(&g, vec![0, 1, 2, 3]).unwrap();
        let guard = PathGuard::new(&g, p, &VertexSet::full(7));
        (g, guard)
    }

    #[test]
    fn far_robber_shadow_clamps_to_end() {
        let (_, guard) = guard_on_p7_prefix();
        assert_eq!(guard.shadow(6), 3);
        assert_eq!(guard.shadow(2), 2);
    }

    #[test]
    fn settles_then_tracks() {
        let (_, mut guard) = guard_on_p7_prefix();
        for _ in 0..3 {
            guard = path_guard_step(&guard, 6);
        }
        assert_eq!(guard.cop_pos, 3);
        assert!(guard.settled);
        // robber stays put: guard stays put
        let again = path_guard_step(&guard, 6);
        assert_eq!(again.cop_pos, 3);
        assert!(again.settled);
    }

    #[test]
    fn robber_entering_the_path_is_caught() {
        let (g, mut guard) = guard_on_p7_prefix();
        for _ in 0..3 {
            guard = path_guard_step(&guard, 5);
        }
        assert!(guard.settled);
        // robber walks 5 -> 4; guard keeps shadowing at 3, adjacent to 4
        guard = path_guard_step(&guard, 4);
        assert_eq!(guard.cop_pos, 3);
        assert!(g.has_edge(guard.cop_pos, 4));
        // robber steps onto the path at 3: the shadow is the robber itself
        let caught = path_guard_step(&guard, 3);
        assert_eq!(caught.cop_pos, 3);
    }
}

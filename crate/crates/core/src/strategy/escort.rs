//! Three-cop escort that keeps the robber off outside-outside edges of a
//! residual component.
//!
//! C1 walks to the robber's start and then replays the robber's walk, so the
//! robber can stay put or step back only a bounded number of times. C2 and C3
//! sit in the cover; when the robber leaves the cover at `r`, they head for the
//! cover neighbors `d`, `e` of the outside partner `y` of `r`, which closes the
//! `r -> y` exit.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Graph, Vertex, VertexSet};

use super::step_toward;

/// Where C2/C3 walk back to once the robber re-enters the cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ReturnPolicy {
    /// Positions held when the current response started.
    #[default]
    EpisodeStart,
    /// The escort's initial posts.
    OriginalPosts,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Response {
    /// Vertex where the robber left the cover.
    pub r: Vertex,
    /// Outside neighbor of `r`, if any.
    pub y: Option<Vertex>,
    /// Targets of C2 and C3: cover neighbors of `y`.
    pub d: Option<Vertex>,
    pub e: Option<Vertex>,
    /// Robber positions since the response started, backtracks removed.
    pub robber_path: Vec<Vertex>,
    /// C2/C3 positions before each forward step, for mirroring backtracks.
    pub history: [Vec<Vertex>; 2],
    pub home: [Vertex; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EscortMode {
    /// C2/C3 still walking to their posts.
    Approach,
    Idle,
    Responding(Box<Response>),
    Returning { home: [Vertex; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EscortState {
    /// Part of the robber's walk C1 has not replayed yet; the last entry is the
    /// robber. A step back onto the previous entry cancels the last step.
    pub trail: Vec<Vertex>,
    pub c1: Vertex,
    /// C1 has reached the start of the trail and now replays it.
    pub c1_on_trail: bool,
    /// Trail steps C1 has replayed so far; never decreases.
    pub c1_index: u32,
    pub c2: Vertex,
    pub c3: Vertex,
    pub mode: EscortMode,
}

/// Static data of the escort on one component.
#[derive(Debug, Clone)]
pub struct EscortPlan {
    pub posts: [Vertex; 3],
    pub policy: ReturnPolicy,
    in_h: Vec<bool>,
    in_cover: Vec<bool>,
    partner: Vec<Option<Vertex>>,
    cover_nbrs: Vec<Vec<Vertex>>,
    dist_h: DistanceMatrix,
    dist_g: Arc<DistanceMatrix>,
}

impl EscortPlan {
    /// `h` is the component and `u_prime_h` its cover part, both in global ids.
    /// Returns `None` when `u_prime_h` is empty.
    pub fn new(
        graph: &Graph,
        dist_g: Arc<DistanceMatrix>,
        h: &VertexSet,
        u_prime_h: &VertexSet,
        policy: ReturnPolicy,
    ) -> Option<Self> {
        let cover = u_prime_h.as_slice();
        if cover.is_empty() {
            return None;
        }
        let posts = [cover[0], cover[1.min(cover.len() - 1)], cover[2.min(cover.len() - 1)]];
        let in_h = h.to_mask();
        let in_cover = u_prime_h.to_mask();
        let n = graph.n();
        let mut partner = vec![None; n];
        let mut cover_nbrs = vec![Vec::new(); n];
        for v in h.iter() {
            cover_nbrs[v] = graph.neighbors(v).iter().copied().filter(|&w| in_cover[w]).collect();
            if !in_cover[v] {
                partner[v] = graph
                    .neighbors(v)
                    .iter()
                    .copied()
                    .find(|&w| in_h[w] && !in_cover[w]);
            }
        }
        let dist_h = graph.distances_within(Some(&in_h));
        Some(EscortPlan {
            posts,
            policy,
            in_h,
            in_cover,
            partner,
            cover_nbrs,
            dist_h,
            dist_g,
        })
    }

    pub fn in_cover(&self, v: Vertex) -> bool {
        self.in_cover[v]
    }

    pub fn in_component(&self, v: Vertex) -> bool {
        self.in_h[v]
    }

    /// Outside partner `y` of an outside vertex `r`.
    pub fn partner(&self, r: Vertex) -> Option<Vertex> {
        self.partner[r]
    }

    fn start_response(&self, c2: Vertex, c3: Vertex, robber: Vertex) -> Response {
        let y = self.partner[robber];
        let (d, e) = match y {
            Some(y) => {
                let nb = &self.cover_nbrs[y];
                (nb.first().copied(), nb.get(1).copied())
            }
            None => (None, None),
        };
        let home = match self.policy {
            ReturnPolicy::EpisodeStart => [c2, c3],
            ReturnPolicy::OriginalPosts => [self.posts[1], self.posts[2]],
        };
        Response {
            r: robber,
            y,
            d,
            e,
            robber_path: vec![robber],
            history: [Vec::new(), Vec::new()],
            home,
        }
    }
}

impl EscortState {
    /// Escort with cops at `cops` when the robber is first seen at `robber`.
    pub fn new(cops: [Vertex; 3], robber: Vertex) -> Self {
        EscortState {
            trail: vec![robber],
            c1: cops[0],
            c1_on_trail: false,
            c1_index: 0,
            c2: cops[1],
            c3: cops[2],
            mode: EscortMode::Approach,
        }
    }

    pub fn positions(&self) -> [Vertex; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// C1 is one trail step behind the robber.
    pub fn c1_adjacent_on_trail(&self) -> bool {
        self.c1_on_trail && self.trail.len() == 1
    }

    /// Number of robber steps C1 still has to replay (including the approach
    /// distance before C1 reaches the trail).
    pub fn gap(&self, plan: &EscortPlan) -> u32 {
        let walk = self.trail.len() as u32;
        if self.c1_on_trail {
            walk
        } else {
            walk + plan.dist_g.raw(self.c1, self.trail[0])
        }
    }
}

/// One escort turn after the robber moved from `prev` to `robber`.
pub fn escort_step(
    s: &EscortState,
    plan: &EscortPlan,
    graph: &Graph,
    prev: Vertex,
    robber: Vertex,
) -> Result<EscortState> {
    if !plan.in_h[robber] {
        return Err(Error::RobberOnDeleted(robber));
    }
    let mut s = s.clone();

    if robber != prev {
        let len = s.trail.len();
        if len >= 2 && s.trail[len - 2] == robber {
            s.trail.pop();
        } else {
            s.trail.push(robber);
        }
    }
    if s.c1_on_trail {
        s.c1 = s.trail.remove(0);
        s.c1_index += 1;
    } else {
        s.c1 = step_toward(graph, &plan.dist_g, s.c1, s.trail[0]);
        if s.c1 == s.trail[0] {
            s.c1_on_trail = true;
            s.trail.remove(0);
            s.c1_index += 1;
        }
    }
    if s.trail.is_empty() {
        // C1 stands on the robber
        s.trail.push(robber);
    }

    if s.mode == EscortMode::Approach {
        let (prev_c2, prev_c3) = (s.c2, s.c3);
        s.c2 = step_toward(graph, &plan.dist_g, s.c2, plan.posts[1]);
        s.c3 = step_toward(graph, &plan.dist_g, s.c3, plan.posts[2]);
        if s.c2 != plan.posts[1] || s.c3 != plan.posts[2] {
            return Ok(s);
        }
        // posted this turn: answer an exit already in progress
        s.mode = EscortMode::Idle;
        if s.c2 != prev_c2 || s.c3 != prev_c3 {
            return Ok(s);
        }
    }

    let outside = !plan.in_cover[robber];
    let mode = std::mem::replace(&mut s.mode, EscortMode::Idle);
    s.mode = match mode {
        EscortMode::Approach => unreachable!(),
        EscortMode::Idle | EscortMode::Returning { .. } if outside => {
            let resp = plan.start_response(s.c2, s.c3, robber);
            respond_forward(&mut s, plan, graph, resp)
        }
        EscortMode::Idle => EscortMode::Idle,
        EscortMode::Returning { home } => walk_home(&mut s, plan, graph, home),
        EscortMode::Responding(resp) => {
            if !outside {
                walk_home(&mut s, plan, graph, resp.home)
            } else if robber == prev {
                EscortMode::Responding(resp)
            } else {
                let mut resp = *resp;
                let len = resp.robber_path.len();
                if len >= 2 && resp.robber_path[len - 2] == robber {
                    resp.robber_path.pop();
                    if let Some(p) = resp.history[0].pop() {
                        s.c2 = p;
                    }
                    if let Some(p) = resp.history[1].pop() {
                        s.c3 = p;
                    }
                    EscortMode::Responding(Box::new(resp))
                } else {
                    resp.robber_path.push(robber);
                    respond_forward(&mut s, plan, graph, resp)
                }
            }
        }
    };
    Ok(s)
}

fn respond_forward(s: &mut EscortState, plan: &EscortPlan, graph: &Graph, mut resp: Response) -> EscortMode {
    resp.history[0].push(s.c2);
    resp.history[1].push(s.c3);
    if let Some(d) = resp.d {
        s.c2 = step_toward(graph, &plan.dist_h, s.c2, d);
    }
    if let Some(e) = resp.e {
        s.c3 = step_toward(graph, &plan.dist_h, s.c3, e);
    }
    EscortMode::Responding(Box::new(resp))
}

fn walk_home(s: &mut EscortState, plan: &EscortPlan, graph: &Graph, home: [Vertex; 2]) -> EscortMode {
    s.c2 = step_toward(graph, &plan.dist_h, s.c2, home[0]);
    s.c3 = step_toward(graph, &plan.dist_h, s.c3, home[1]);
    if s.c2 == home[0] && s.c3 == home[1] {
        EscortMode::Idle
    } else {
        EscortMode::Returning { home }
    }
}

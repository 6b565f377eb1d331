//! Constructive cop strategy for the residual graph of a reduction: guards for
//! every reduction step, an escort on the robber's component, and an exact
//! inner strategy for the game where the robber avoids outside-outside edges.

mod escort;
mod guard;

use std::fmt;
use std::sync::Arc;

pub use escort::{escort_step, EscortMode, EscortPlan, EscortState, Response, ReturnPolicy};
pub use guard::{path_guard_step, PathGuard, StaticGuard};

use crate::error::{Error, Result};
use crate::game::{extract_cop_strategy, solve, CopStrategy, Value};
use crate::graph::{DistanceMatrix, Graph, Vertex, VertexSet, INF};
use crate::reduction::{Anchor, ReductionTrace};

/// Lowest-id neighbor of `from` one step closer to `to`; stays when already
/// there or when `to` is unreachable under `dist`.
pub(crate) fn step_toward(graph: &Graph, dist: &DistanceMatrix, from: Vertex, to: Vertex) -> Vertex {
    let d = dist.raw(from, to);
    if d == 0 || d == INF {
        return from;
    }
    graph
        .neighbors(from)
        .iter()
        .copied()
        .find(|&w| dist.raw(w, to) == d - 1)
        .unwrap_or(from)
}

/// Drops the edges of `h` with both endpoints outside `cover`.
pub fn build_hat_graph(h: &Graph, cover: &VertexSet) -> Graph {
    let edges: Vec<_> = h
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| cover.contains(u) || cover.contains(v))
        .collect();
    let hat = Graph::build(h.n(), &edges).expect("subgraph of a simple graph");
    debug_assert!(hat.edges().iter().all(|&(u, v)| cover.contains(u) || cover.contains(v)));
    hat
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Guard {
    Static(StaticGuard),
    Path(PathGuard),
}

impl Guard {
    fn start(&self) -> Vertex {
        match self {
            Guard::Static(g) => g.post,
            Guard::Path(g) => g.path.vertices()[0],
        }
    }

    fn advance(&self, pos: Vertex, robber: Vertex) -> Vertex {
        match self {
            Guard::Static(g) => g.post,
            Guard::Path(g) => g.advance(pos, robber),
        }
    }

    fn settled(&self, pos: Vertex, robber: Vertex) -> bool {
        match self {
            Guard::Static(g) => pos == g.post,
            Guard::Path(g) => g.is_settled_at(pos, robber),
        }
    }
}

pub fn guards_for(graph: &Graph, trace: &ReductionTrace) -> Vec<Guard> {
    trace
        .steps
        .iter()
        .map(|s| match &s.anchor {
            Anchor::Vertex(v) => Guard::Static(StaticGuard { post: *v }),
            Anchor::Path(p) => Guard::Path(PathGuard::new(graph, p.clone(), &s.active_before)),
        })
        .collect()
}

/// Exact strategy for the inner game on one component, in local ids.
#[derive(Debug, Clone)]
pub struct InnerPlan {
    pub strategy: CopStrategy,
    /// Local id -> global id.
    pub globals: Vec<Vertex>,
    /// Cop count of the least winning inner game (`c` of the hat graph).
    pub k: usize,
    /// The robber is kept off outside-outside edges.
    pub restricted: bool,
    local_graph: Graph,
    local_of: Vec<usize>,
}

impl InnerPlan {
    pub fn init(&self) -> Vec<Vertex> {
        self.strategy.initial().iter().map(|&v| self.globals[v]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ComposedStrategy {
    pub component: VertexSet,
    pub u_prime_h: VertexSet,
    pub guards: Vec<Guard>,
    pub escort: Option<EscortPlan>,
    pub inner: InnerPlan,
    /// `floor(|U'| / 3) + 1`, the vertex-cover bound the inner game should meet.
    pub inner_bound: usize,
    /// The component without its outside-outside edges, in local ids.
    pub hat: Graph,
    pub cop_count: usize,
}

impl ComposedStrategy {
    pub fn inner_within_bound(&self) -> bool {
        self.inner.k <= self.inner_bound
    }

    /// Cops needed on top of the guards.
    pub fn free_cops(&self) -> usize {
        self.cop_count - self.guards.len()
    }

    fn layout(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        if let Some(e) = &self.escort {
            out.extend_from_slice(&e.posts);
        }
        out.extend(self.inner.init());
        out
    }
}

/// Strategy for the residual component `h` of `trace`.
pub fn compose(graph: &Graph, cover: &VertexSet, trace: &ReductionTrace, h: &VertexSet) -> Result<ComposedStrategy> {
    compose_with(graph, cover, trace, h, ReturnPolicy::default(), None, true)
}

pub fn compose_with(
    graph: &Graph,
    cover: &VertexSet,
    trace: &ReductionTrace,
    h: &VertexSet,
    policy: ReturnPolicy,
    dist_g: Option<Arc<DistanceMatrix>>,
    enforce_budget: bool,
) -> Result<ComposedStrategy> {
    let dist_g = dist_g.unwrap_or_else(|| Arc::new(graph.all_pairs_distances()));
    let guards = guards_for(graph, trace);
    let u_prime_h = h.intersection(&trace.u_prime);
    let (local_graph, globals) = graph.induced(h);
    let mut local_of = vec![usize::MAX; graph.n()];
    for (i, &g) in globals.iter().enumerate() {
        local_of[g] = i;
    }
    let local_cover = VertexSet::new(local_graph.n(), u_prime_h.iter().map(|g| local_of[g])).expect("subset of h");
    let hat = build_hat_graph(&local_graph, &local_cover);
    let has_outside_edge = hat.edge_count() < local_graph.edge_count();
    let restricted = !u_prime_h.is_empty();
    let escort = if has_outside_edge {
        EscortPlan::new(graph, dist_g, h, &u_prime_h, policy)
    } else {
        None
    };

    // the inner game gets whatever the total budget leaves; exceeding the
    // vertex-cover sub-bound is reported, not fatal
    let total_bound = cover.len() / 3 + 4;
    let fixed = guards.len() + if escort.is_some() { 3 } else { 0 };
    let k_max = if enforce_budget {
        total_bound.saturating_sub(fixed)
    } else {
        local_graph.n()
    };
    let mut strategy = None;
    for k in 1..=k_max {
        let table = solve(&local_graph, k, restricted.then_some(hat.edges()))?;
        if table.winning_placement().is_some() {
            strategy = Some(extract_cop_strategy(&table)?);
            break;
        }
    }
    let strategy = strategy.ok_or(Error::BudgetExceeded {
        what: "composed strategy",
        used: fixed + k_max + 1,
        bound: total_bound,
    })?;
    let k = strategy.k();
    let cop_count = fixed + k;
    if enforce_budget && cop_count > total_bound {
        return Err(Error::BudgetExceeded {
            what: "composed strategy",
            used: cop_count,
            bound: total_bound,
        });
    }
    Ok(ComposedStrategy {
        component: h.clone(),
        u_prime_h,
        guards,
        escort,
        inner_bound: trace.u_prime.len() / 3 + 1,
        hat,
        inner: InnerPlan {
            strategy,
            globals,
            k,
            restricted,
            local_graph,
            local_of,
        },
        cop_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Guard,
    Path,
    EscortC1,
    EscortC2,
    EscortC3,
    Inner,
    Spare,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Guard => "GUARD",
            Role::Path => "PATH",
            Role::EscortC1 => "ESCORT-C1",
            Role::EscortC2 => "ESCORT-C2",
            Role::EscortC3 => "ESCORT-C3",
            Role::Inner => "INNER",
            Role::Spare => "SPARE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EscortPhase {
    /// No escort on the robber's component.
    Absent,
    /// Escort or path guards still getting into position.
    Approach,
    /// C2/C3 in the cover and all guards settled.
    Posted,
    /// Posted, and C1 is one trail step behind the robber.
    Engaged,
}

impl fmt::Display for EscortPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EscortPhase::Absent => "none",
            EscortPhase::Approach => "approach",
            EscortPhase::Posted => "posted",
            EscortPhase::Engaged => "engaged",
        })
    }
}

/// Controller state; the controller itself is immutable, so equal states
/// produce equal futures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ControllerState {
    pub guards: Vec<Vertex>,
    /// Component the non-guard cops are working on.
    pub focus: Option<usize>,
    pub escort: Option<EscortState>,
    pub inner: Vec<Vertex>,
    pub inner_playing: bool,
    pub spare: Vec<Vertex>,
    /// Robber position the cops last responded to.
    pub robber: Option<Vertex>,
    pub captured: bool,
}

impl ControllerState {
    /// Cop positions in slot order: guards, escort, inner, spare.
    pub fn positions(&self) -> Vec<Vertex> {
        let mut out = self.guards.clone();
        out.extend(self.non_guard());
        out
    }

    fn non_guard(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        if let Some(e) = &self.escort {
            out.extend_from_slice(&e.positions());
        }
        out.extend_from_slice(&self.inner);
        out.extend_from_slice(&self.spare);
        out
    }

    fn set_slot(&mut self, slot: usize, v: Vertex) {
        if slot < self.guards.len() {
            self.guards[slot] = v;
            return;
        }
        let mut i = slot - self.guards.len();
        if let Some(e) = &mut self.escort {
            match i {
                0 => return e.c1 = v,
                1 => return e.c2 = v,
                2 => return e.c3 = v,
                _ => i -= 3,
            }
        }
        if i < self.inner.len() {
            self.inner[i] = v;
        } else {
            self.spare[i - self.inner.len()] = v;
        }
    }
}

/// Full cop controller for a graph, a 2-cover and its reduction trace.
#[derive(Debug, Clone)]
pub struct Controller {
    graph: Graph,
    dist_g: Arc<DistanceMatrix>,
    guards: Vec<Guard>,
    comps: Vec<ComposedStrategy>,
    comp_of: Vec<Option<usize>>,
    cop_count: usize,
    home: Option<usize>,
}

impl Controller {
    /// Fails with [`Error::BudgetExceeded`] when the construction needs more
    /// than `floor(|U|/3) + 4` cops.
    pub fn new(graph: &Graph, cover: &VertexSet, trace: &ReductionTrace, policy: ReturnPolicy) -> Result<Self> {
        Self::build(graph, cover, trace, policy, true)
    }

    /// Same construction without the budget check, for diagnosing instances
    /// where the budget fails.
    pub fn new_unbudgeted(graph: &Graph, cover: &VertexSet, trace: &ReductionTrace, policy: ReturnPolicy) -> Result<Self> {
        Self::build(graph, cover, trace, policy, false)
    }

    fn build(graph: &Graph, cover: &VertexSet, trace: &ReductionTrace, policy: ReturnPolicy, enforce: bool) -> Result<Self> {
        let dist_g = Arc::new(graph.all_pairs_distances());
        let mut comps = Vec::new();
        let mut comp_of = vec![None; graph.n()];
        for (i, (h, _)) in trace.components(graph).into_iter().enumerate() {
            for v in h.iter() {
                comp_of[v] = Some(i);
            }
            comps.push(compose_with(graph, cover, trace, &h, policy, Some(dist_g.clone()), enforce)?);
        }
        let guards = guards_for(graph, trace);
        let need = comps.iter().map(|c| c.free_cops()).max().unwrap_or(0);
        let cop_count = (guards.len() + need).max(1);
        let bound = cover.len() / 3 + 4;
        if enforce && cop_count > bound {
            return Err(Error::BudgetExceeded {
                what: "controller",
                used: cop_count,
                bound,
            });
        }
        // place the free cops for the most demanding component
        let home = (0..comps.len()).max_by_key(|&i| {
            (comps[i].free_cops(), comps[i].component.len(), std::cmp::Reverse(i))
        });
        Ok(Controller {
            graph: graph.clone(),
            dist_g,
            guards,
            comps,
            comp_of,
            cop_count,
            home,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cop_count(&self) -> usize {
        self.cop_count
    }

    pub fn guards(&self) -> &[Guard] {
        &self.guards
    }

    pub fn components(&self) -> &[ComposedStrategy] {
        &self.comps
    }

    pub fn component_of(&self, v: Vertex) -> Option<usize> {
        self.comp_of[v]
    }

    pub fn initial_state(&self) -> ControllerState {
        let guards: Vec<_> = self.guards.iter().map(Guard::start).collect();
        let free = self.cop_count - guards.len();
        let mut spare = match self.home {
            Some(c) => self.comps[c].layout(),
            None => Vec::new(),
        };
        let filler = match self.home {
            Some(c) => self.comps[c].component.as_slice()[0],
            None => guards.first().copied().unwrap_or(0),
        };
        spare.resize(free, filler);
        ControllerState {
            guards,
            focus: None,
            escort: None,
            inner: Vec::new(),
            inner_playing: false,
            spare,
            robber: None,
            captured: false,
        }
    }

    /// Cops' response to the robber standing on `robber`.
    pub fn step(&self, state: &ControllerState, robber: Vertex) -> ControllerState {
        let mut s = state.clone();
        let mut prev = state.robber.unwrap_or(robber);
        if let Some(c) = self.comp_of[robber] {
            if s.focus != Some(c) {
                // reassigns roles only; nobody moves
                self.refocus(&mut s, c, robber);
                prev = robber;
            }
        }
        let pos = s.positions();
        if let Some(i) = pos.iter().position(|&c| c == robber || self.graph.has_edge(c, robber)) {
            s.set_slot(i, robber);
            s.captured = true;
            s.robber = Some(robber);
            return s;
        }
        for (g, p) in self.guards.iter().zip(s.guards.iter_mut()) {
            *p = g.advance(*p, robber);
        }
        if let Some(c) = s.focus {
            let comp = &self.comps[c];
            if comp.component.contains(robber) {
                if let (Some(e), Some(plan)) = (&s.escort, &comp.escort) {
                    s.escort = Some(escort_step(e, plan, &self.graph, prev, robber).expect("robber is inside the component"));
                }
                self.inner_step(&mut s, comp, prev, robber);
            }
        }
        s.robber = Some(robber);
        s
    }

    fn refocus(&self, s: &mut ControllerState, c: usize, robber: Vertex) {
        let free = s.non_guard();
        let comp = &self.comps[c];
        let mut rest = &free[..];
        s.escort = comp.escort.as_ref().map(|_| {
            let e = EscortState::new([rest[0], rest[1], rest[2]], robber);
            rest = &rest[3..];
            e
        });
        s.inner = rest[..comp.inner.k].to_vec();
        s.spare = rest[comp.inner.k..].to_vec();
        s.inner_playing = false;
        s.focus = Some(c);
    }

    fn inner_step(&self, s: &mut ControllerState, comp: &ComposedStrategy, prev: Vertex, robber: Vertex) {
        let plan = &comp.inner;
        if !s.inner_playing {
            let init = plan.init();
            if s.inner != init {
                for (p, &t) in s.inner.iter_mut().zip(&init) {
                    *p = step_toward(&self.graph, &self.dist_g, *p, t);
                }
                return;
            }
            s.inner_playing = true;
        }
        let off_hat = plan.restricted
            && prev != robber
            && !comp.u_prime_h.contains(prev)
            && !comp.u_prime_h.contains(robber);
        if off_hat {
            return;
        }
        let local: Vec<_> = s.inner.iter().map(|&v| plan.local_of[v]).collect();
        let rl = plan.local_of[robber];
        match plan.strategy.next(&local, rl) {
            Some(next) => {
                let assigned = assign_moves(&plan.local_graph, &local, &next).expect("strategy moves are legal");
                s.inner = assigned.into_iter().map(|v| plan.globals[v]).collect();
            }
            None => {
                debug_assert_eq!(plan.strategy.value(&local, rl), Value::Escape);
                s.inner_playing = false;
                let init = plan.init();
                for (p, &t) in s.inner.iter_mut().zip(&init) {
                    *p = step_toward(&self.graph, &self.dist_g, *p, t);
                }
            }
        }
    }

    pub fn roles(&self, s: &ControllerState) -> Vec<Role> {
        let mut out: Vec<_> = self
            .guards
            .iter()
            .map(|g| match g {
                Guard::Static(_) => Role::Guard,
                Guard::Path(_) => Role::Path,
            })
            .collect();
        if s.escort.is_some() {
            out.extend([Role::EscortC1, Role::EscortC2, Role::EscortC3]);
        }
        out.extend(std::iter::repeat_n(Role::Inner, s.inner.len()));
        out.extend(std::iter::repeat_n(Role::Spare, s.spare.len()));
        out
    }

    pub fn guards_settled(&self, s: &ControllerState) -> bool {
        let Some(robber) = s.robber else { return false };
        self.guards.iter().zip(&s.guards).all(|(g, &p)| g.settled(p, robber))
    }

    pub fn escort_phase(&self, s: &ControllerState) -> EscortPhase {
        let Some(e) = &s.escort else {
            return EscortPhase::Absent;
        };
        if e.mode == EscortMode::Approach || !self.guards_settled(s) {
            EscortPhase::Approach
        } else if e.c1_adjacent_on_trail() {
            EscortPhase::Engaged
        } else {
            EscortPhase::Posted
        }
    }
}

/// Orders `next` so that slot `i` moves legally from `from[i]`.
fn assign_moves(graph: &Graph, from: &[Vertex], next: &[Vertex]) -> Option<Vec<Vertex>> {
    fn go(graph: &Graph, from: &[Vertex], next: &[Vertex], used: &mut [bool], out: &mut Vec<Vertex>) -> bool {
        let i = out.len();
        if i == from.len() {
            return true;
        }
        for j in 0..next.len() {
            if !used[j] && graph.is_move(from[i], next[j]) {
                used[j] = true;
                out.push(next[j]);
                if go(graph, from, next, used, out) {
                    return true;
                }
                out.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut out = Vec::with_capacity(from.len());
    go(graph, from, next, &mut vec![false; next.len()], &mut out).then_some(out)
}

//! Exact k-cop game solving by retrograde analysis.
//!
//! States are `(cops, robber, turn)` with the cops held as a sorted multiset,
//! since cops are interchangeable and may share a vertex. The solver seeds
//! every capture state with rank 0 and then propagates backwards layer by
//! layer: a cop-turn state is won at rank `ρ + 1` as soon as one cop move
//! reaches a robber-turn state of rank `ρ`, and a robber-turn state is won at
//! rank `ρ` once every robber option has been won, the last at rank `ρ`.
//! States never reached are robber escapes.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

const ESCAPE: u32 = u32::MAX;
const NO_MOVE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turn {
    Cop,
    Robber,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    pub cops: Vec<Vertex>,
    pub robber: Vertex,
    pub turn: Turn,
}

impl GameState {
    pub fn new(mut cops: Vec<Vertex>, robber: Vertex, turn: Turn) -> Self {
        cops.sort_unstable();
        GameState { cops, robber, turn }
    }
}

/// Capture-distance rank in cop turns, or a robber escape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Rank(u32),
    Escape,
}

impl Value {
    fn from_raw(raw: u32) -> Self {
        if raw == ESCAPE {
            Value::Escape
        } else {
            Value::Rank(raw)
        }
    }

    pub fn is_win(self) -> bool {
        matches!(self, Value::Rank(_))
    }
}

/// All sorted `k`-multisets over `0..n`, in lexicographic order, with a
/// closed-form ranking.
#[derive(Debug, Clone)]
pub struct TupleSpace {
    n: usize,
    k: usize,
    flat: Vec<u16>,
    // multisets[a][m]: number of m-multisets over an alphabet of size a
    multisets: Vec<Vec<usize>>,
}

impl TupleSpace {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n < u16::MAX as usize, "graph too large for exact game solving");
        let mut multisets = vec![vec![0usize; k + 1]; n + 1];
        for row in multisets.iter_mut() {
            row[0] = 1;
        }
        for a in 1..=n {
            for m in 1..=k {
                multisets[a][m] = multisets[a - 1][m].saturating_add(multisets[a][m - 1]);
            }
        }
        let count = multisets[n][k];
        let mut flat = Vec::with_capacity(count * k);
        let mut cur = vec![0u16; k];
        if n > 0 {
            loop {
                flat.extend_from_slice(&cur);
                // bump the rightmost position that can grow and flatten the tail
                match (0..k).rev().find(|&i| (cur[i] as usize) + 1 < n) {
                    Some(i) => {
                        let v = cur[i] + 1;
                        cur[i..].iter_mut().for_each(|c| *c = v);
                    }
                    None => break,
                }
            }
        }
        debug_assert_eq!(flat.len(), count * k);
        TupleSpace { n, k, flat, multisets }
    }

    pub fn len(&self) -> usize {
        self.multisets[self.n][self.k]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tuple(&self, idx: usize) -> &[u16] {
        &self.flat[idx * self.k..(idx + 1) * self.k]
    }

    /// Lexicographic rank of a sorted tuple.
    pub fn index(&self, sorted: &[u16]) -> usize {
        let mut idx = 0;
        let mut lo = 0usize;
        for (i, &c) in sorted.iter().enumerate() {
            let rest = self.k - i - 1;
            for x in lo..c as usize {
                idx += self.multisets[self.n - x][rest];
            }
            lo = c as usize;
        }
        idx
    }

    pub fn index_of(&self, cops: &[Vertex]) -> usize {
        let mut t: Vec<u16> = cops.iter().map(|&c| c as u16).collect();
        t.sort_unstable();
        self.index(&t)
    }
}

/// Solved game table for `k` cops on one graph.
#[derive(Debug, Clone)]
pub struct WinTable {
    graph: Graph,
    k: usize,
    space: Arc<TupleSpace>,
    robber_moves: Vec<Vec<Vertex>>,
    cop_rank: Vec<u32>,
    robber_rank: Vec<u32>,
}

impl WinTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn space(&self) -> &TupleSpace {
        &self.space
    }

    /// Robber options from `v` (always including staying put).
    pub fn robber_moves(&self, v: Vertex) -> &[Vertex] {
        &self.robber_moves[v]
    }

    pub fn state_count(&self) -> usize {
        2 * self.space.len() * self.graph.n()
    }

    pub fn value(&self, state: &GameState) -> Value {
        let t = self.space.index_of(&state.cops);
        let i = t * self.graph.n() + state.robber;
        Value::from_raw(match state.turn {
            Turn::Cop => self.cop_rank[i],
            Turn::Robber => self.robber_rank[i],
        })
    }

    pub(crate) fn cop_value_at(&self, tuple: usize, robber: Vertex) -> Value {
        Value::from_raw(self.cop_rank[tuple * self.graph.n() + robber])
    }

    /// Worst case over robber starts for a placement, `Escape` if some start escapes.
    pub fn placement_value(&self, tuple: usize) -> Value {
        (0..self.graph.n())
            .map(|r| self.cop_value_at(tuple, r))
            .max()
            .unwrap_or(Value::Rank(0))
    }

    /// Lexicographically least placement that wins against every robber start.
    pub fn winning_placement(&self) -> Option<usize> {
        (0..self.space.len()).find(|&t| self.placement_value(t).is_win())
    }

    /// Cop-turn states won by the cops, as `(tuple index, robber)`.
    pub fn winning_cop_states(&self) -> impl Iterator<Item = (usize, Vertex)> + '_ {
        let n = self.graph.n();
        (0..self.cop_rank.len())
            .filter(|&i| self.cop_rank[i] != ESCAPE)
            .map(move |i| (i / n, i % n))
    }
}

fn tuple_successors(graph: &Graph, space: &TupleSpace, tuple: &[u16]) -> Vec<u32> {
    let k = tuple.len();
    let options: Vec<Vec<u16>> = tuple
        .iter()
        .map(|&c| {
            let c = c as usize;
            let mut o: Vec<u16> = graph.neighbors(c).iter().map(|&w| w as u16).collect();
            o.push(c as u16);
            o
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; k];
    let mut buf = vec![0u16; k];
    loop {
        for i in 0..k {
            buf[i] = options[i][choice[i]];
        }
        let mut sorted = buf.clone();
        sorted.sort_unstable();
        out.push(space.index(&sorted) as u32);
        let mut i = 0;
        while i < k {
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Solves the `k`-cop game on `graph`. With `robber_edges` the robber may only
/// traverse those edges (and stay put); cops always move on the full graph.
pub fn solve(graph: &Graph, k: usize, robber_edges: Option<&[(Vertex, Vertex)]>) -> Result<WinTable> {
    if k < 1 {
        return Err(Error::NoCops);
    }
    let n = graph.n();
    let robber_moves: Vec<Vec<Vertex>> = match robber_edges {
        None => (0..n)
            .map(|v| graph.closed_neighborhood(v).unwrap().as_slice().to_vec())
            .collect(),
        Some(edges) => {
            let mut m: Vec<Vec<Vertex>> = (0..n).map(|v| vec![v]).collect();
            for &(u, v) in edges {
                if !graph.has_edge(u, v) {
                    return Err(Error::ForeignRobberEdge(u, v));
                }
                m[u].push(v);
                m[v].push(u);
            }
            for list in &mut m {
                list.sort_unstable();
                list.dedup();
            }
            m
        }
    };

    let space = Arc::new(TupleSpace::new(n, k));
    let tuples = space.len();
    let succ: Vec<Vec<u32>> = (0..tuples)
        .map(|t| tuple_successors(graph, &space, space.tuple(t)))
        .collect();

    let total = tuples * n;
    let mut cop_rank = vec![ESCAPE; total];
    let mut robber_rank = vec![ESCAPE; total];
    let mut pending: Vec<u32> = vec![0; total];

    // (is_cop_turn, state index) for the current rank layer
    let mut layer: Vec<(bool, usize)> = Vec::new();
    for t in 0..tuples {
        let tuple = space.tuple(t);
        for r in 0..n {
            let i = t * n + r;
            if tuple.contains(&(r as u16)) {
                cop_rank[i] = 0;
                robber_rank[i] = 0;
                layer.push((true, i));
                layer.push((false, i));
            } else {
                pending[i] = robber_moves[r].len() as u32;
            }
        }
    }

    let mut rank = 0u32;
    while !layer.is_empty() {
        let mut next = Vec::new();
        let mut cursor = 0;
        while cursor < layer.len() {
            let (cop_turn, i) = layer[cursor];
            cursor += 1;
            let (t, r) = (i / n, i % n);
            if cop_turn {
                // robber-turn predecessors: same cops, robber one move away
                for &p in &robber_moves[r] {
                    let j = t * n + p;
                    if robber_rank[j] != ESCAPE {
                        continue;
                    }
                    pending[j] -= 1;
                    if pending[j] == 0 {
                        robber_rank[j] = rank;
                        layer.push((false, j));
                    }
                }
            } else {
                // cop-turn predecessors: cop tuples one move away, same robber
                for &pt in &succ[t] {
                    let j = pt as usize * n + r;
                    if cop_rank[j] == ESCAPE {
                        cop_rank[j] = rank + 1;
                        next.push((true, j));
                    }
                }
            }
        }
        layer = next;
        rank += 1;
    }

    Ok(WinTable {
        graph: graph.clone(),
        k,
        space,
        robber_moves,
        cop_rank,
        robber_rank,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopNumber {
    Exact(usize),
    Unknown(usize),
}

impl fmt::Display for CopNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopNumber::Exact(k) => write!(f, "{k}"),
            CopNumber::Unknown(cap) => write!(f, "unknown({cap})"),
        }
    }
}

/// Least `k ≤ k_max` that wins on `graph`. A disconnected graph reports the
/// maximum over its components.
pub fn cop_number(graph: &Graph, k_max: usize) -> CopNumber {
    cop_number_restricted(graph, k_max, None)
}

pub fn cop_number_restricted(graph: &Graph, k_max: usize, robber_edges: Option<&[(Vertex, Vertex)]>) -> CopNumber {
    if graph.n() == 0 {
        return CopNumber::Exact(1);
    }
    let comps = graph.components(&VertexSet::full(graph.n()));
    if comps.len() > 1 {
        let mut worst = 1;
        for comp in comps {
            let (sub, map) = graph.induced(&comp);
            let local = robber_edges.map(|edges| restrict_edges(edges, &map));
            match cop_number_restricted(&sub, k_max, local.as_deref()) {
                CopNumber::Exact(k) => worst = worst.max(k),
                unknown => return unknown,
            }
        }
        return CopNumber::Exact(worst);
    }
    for k in 1..=k_max {
        let table = solve(graph, k, robber_edges).expect("k >= 1");
        if table.winning_placement().is_some() {
            return CopNumber::Exact(k);
        }
    }
    CopNumber::Unknown(k_max)
}

fn restrict_edges(edges: &[(Vertex, Vertex)], map: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let local = |g: Vertex| map.binary_search(&g).ok();
    edges
        .iter()
        .filter_map(|&(u, v)| Some((local(u)?, local(v)?)))
        .collect()
}

/// Rank-decreasing cop strategy extracted from a [`WinTable`].
#[derive(Debug, Clone)]
pub struct CopStrategy {
    space: Arc<TupleSpace>,
    n: usize,
    initial: Vec<Vertex>,
    initial_value: Value,
    moves: Vec<u32>,
    cop_rank: Vec<u32>,
}

pub fn extract_cop_strategy(table: &WinTable) -> Result<CopStrategy> {
    let start = table.winning_placement().ok_or(Error::NoWinningPlacement(table.k))?;
    let n = table.graph.n();
    let space = &table.space;
    let mut moves = vec![NO_MOVE; table.cop_rank.len()];
    for t in 0..space.len() {
        let succ = tuple_successors(&table.graph, space, space.tuple(t));
        for r in 0..n {
            let i = t * n + r;
            let rank = table.cop_rank[i];
            if rank == ESCAPE || rank == 0 {
                continue;
            }
            // successors are sorted, so the first hit is the lexicographically least
            moves[i] = *succ
                .iter()
                .find(|&&s| table.robber_rank[s as usize * n + r] == rank - 1)
                .expect("a won cop-turn state has a rank-decreasing move");
        }
    }
    Ok(CopStrategy {
        space: table.space.clone(),
        n,
        initial: space.tuple(start).iter().map(|&c| c as Vertex).collect(),
        initial_value: table.placement_value(start),
        moves,
        cop_rank: table.cop_rank.clone(),
    })
}

impl CopStrategy {
    pub fn k(&self) -> usize {
        self.space.k()
    }

    pub fn initial(&self) -> &[Vertex] {
        &self.initial
    }

    /// Worst-case capture rank of the initial placement.
    pub fn initial_value(&self) -> Value {
        self.initial_value
    }

    /// Rank of the cop-turn state, `Escape` if the strategy has no forced win there.
    pub fn value(&self, cops: &[Vertex], robber: Vertex) -> Value {
        Value::from_raw(self.cop_rank[self.space.index_of(cops) * self.n + robber])
    }

    /// Sorted next cop tuple, or `None` for captured or unwinnable states.
    pub fn next(&self, cops: &[Vertex], robber: Vertex) -> Option<Vec<Vertex>> {
        let m = self.moves[self.space.index_of(cops) * self.n + robber];
        (m != NO_MOVE).then(|| self.space.tuple(m as usize).iter().map(|&c| c as Vertex).collect())
    }

    pub fn state_space(&self) -> usize {
        2 * self.space.len() * self.n
    }
}

/// Table-driven robber: escapes when possible, otherwise delays capture as long
/// as possible; ties go to the lowest vertex id.
#[derive(Debug, Clone)]
pub struct RobberPolicy {
    space: Arc<TupleSpace>,
    n: usize,
    start: Vec<u16>,
    moves: Vec<u16>,
}

pub fn extract_optimal_robber(table: &WinTable) -> RobberPolicy {
    let n = table.graph.n();
    let space = &table.space;
    let best = |options: &mut dyn Iterator<Item = Vertex>, t: usize| -> u16 {
        let mut pick = None;
        let mut pick_val = Value::Rank(0);
        for r in options {
            let v = table.cop_value_at(t, r);
            if pick.is_none() || v > pick_val {
                pick = Some(r);
                pick_val = v;
            }
        }
        pick.expect("options are non-empty") as u16
    };
    let start = (0..space.len()).map(|t| best(&mut (0..n), t)).collect();
    let mut moves = vec![0u16; space.len() * n];
    for t in 0..space.len() {
        for r in 0..n {
            moves[t * n + r] = best(&mut table.robber_moves[r].iter().copied(), t);
        }
    }
    RobberPolicy {
        space: table.space.clone(),
        n,
        start,
        moves,
    }
}

impl RobberPolicy {
    pub fn start(&self, cops: &[Vertex]) -> Vertex {
        self.start[self.space.index_of(cops)] as Vertex
    }

    pub fn next(&self, cops: &[Vertex], robber: Vertex) -> Vertex {
        self.moves[self.space.index_of(cops) * self.n + robber] as Vertex
    }
}

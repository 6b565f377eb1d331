//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use copbound::game::Value;
use copbound::graph::{Graph, Vertex, VertexSet};
use copbound::params::verify_cover;

/// All graphs on `n` vertices up to isomorphism, built by adding one vertex
/// with every possible neighborhood to each graph on `n - 1` vertices.
pub fn enumerate_graphs(max_n: usize) -> Vec<Vec<Graph>> {
    let mut by_n: Vec<Vec<Graph>> = vec![vec![Graph::build(0, &[]).unwrap()]];
    for n in 1..=max_n {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in &by_n[n - 1] {
            for mask in 0u32..(1 << (n - 1)) {
                let mut edges = g.edges().to_vec();
                edges.extend((0..n - 1).filter(|&u| mask >> u & 1 == 1).map(|u| (u, n - 1)));
                let h = Graph::build(n, &edges).unwrap();
                if seen.insert(canonical(&h)) {
                    out.push(h);
                }
            }
        }
        by_n.push(out);
    }
    by_n
}

/// Smallest upper-triangle adjacency code over vertex orders sorted by degree.
pub fn canonical(g: &Graph) -> u64 {
    let n = g.n();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| g.degree(v));
    // runs of equal degree may be permuted freely
    let mut classes = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || g.degree(order[i]) != g.degree(order[start]) {
            classes.push((start, i));
            start = i;
        }
    }
    let mut best = u64::MAX;
    permute_classes(g, &mut order, &classes, 0, &mut best);
    best
}

fn permute_classes(g: &Graph, order: &mut Vec<Vertex>, classes: &[(usize, usize)], c: usize, best: &mut u64) {
    if c == classes.len() {
        let n = order.len();
        let mut code = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                code = code << 1 | g.has_edge(order[i], order[j]) as u64;
            }
        }
        *best = (*best).min(code);
        return;
    }
    let (lo, hi) = classes[c];
    heap_permute(g, order, classes, c, lo, hi - lo, best);
}

fn heap_permute(
    g: &Graph,
    order: &mut Vec<Vertex>,
    classes: &[(usize, usize)],
    c: usize,
    lo: usize,
    k: usize,
    best: &mut u64,
) {
    if k <= 1 {
        permute_classes(g, order, classes, c + 1, best);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(g, order, classes, c, lo, k - 1, best);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        order.swap(lo + j, lo + k - 1);
    }
    heap_permute(g, order, classes, c, lo, k - 1, best);
}

/// Capture distances of the k-cop game by plain fixpoint iteration over
/// ordered cop tuples: after round `d`, `cop[s]` holds `d` for every cop-turn
/// state the cops win in at most `d` moves.
pub struct Minimax {
    pub n: usize,
    pub k: usize,
    pub cop: Vec<Value>,
    pub robber: Vec<Value>,
}

impl Minimax {
    pub fn index(&self, cops: &[Vertex], robber: Vertex) -> usize {
        cops.iter().fold(0, |acc, &c| acc * self.n + c) * self.n + robber
    }
}

pub fn minimax(g: &Graph, k: usize, depth_cap: u32) -> Minimax {
    let n = g.n();
    let tuples: Vec<Vec<Vertex>> = (0..n.pow(k as u32))
        .map(|mut x| {
            let mut t = vec![0; k];
            for slot in t.iter_mut().rev() {
                *slot = x % n;
                x /= n;
            }
            t
        })
        .collect();
    let closed = |v: Vertex| {
        let mut m = vec![v];
        m.extend_from_slice(g.neighbors(v));
        m
    };
    let moves_of = |t: &[Vertex]| -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new()];
        for &c in t {
            let mut next = Vec::new();
            for prefix in &out {
                for w in closed(c) {
                    let mut p = prefix.clone();
                    p.push(w);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    };
    let mut mm = Minimax {
        n,
        k,
        cop: vec![Value::Escape; tuples.len() * n],
        robber: vec![Value::Escape; tuples.len() * n],
    };
    for t in &tuples {
        for r in 0..n {
            if t.contains(&r) {
                let i = mm.index(t, r);
                mm.cop[i] = Value::Rank(0);
                mm.robber[i] = Value::Rank(0);
            }
        }
    }
    for d in 1..=depth_cap {
        let mut changed = false;
        // robber-turn states won within d-1 cop moves
        let mut robber_next = mm.robber.clone();
        for t in &tuples {
            for r in 0..n {
                let i = mm.index(t, r);
                if mm.robber[i].is_win() {
                    continue;
                }
                let all = closed(r).into_iter().all(|m| mm.cop[mm.index(t, m)].is_win());
                if all {
                    let worst = closed(r).into_iter().map(|m| mm.cop[mm.index(t, m)]).max().unwrap();
                    robber_next[i] = worst;
                    changed = true;
                }
            }
        }
        mm.robber = robber_next;
        let mut cop_next = mm.cop.clone();
        for t in &tuples {
            let succ = moves_of(t);
            for r in 0..n {
                let i = mm.index(t, r);
                if mm.cop[i].is_win() {
                    continue;
                }
                if succ.iter().any(|s| mm.robber[mm.index(s, r)] == Value::Rank(d - 1)) {
                    cop_next[i] = Value::Rank(d);
                    changed = true;
                }
            }
        }
        mm.cop = cop_next;
        if !changed {
            break;
        }
    }
    mm
}

/// Lexicographically smallest minimum cover by subset enumeration.
pub fn brute_coc(g: &Graph, ell: usize) -> Vec<Vertex> {
    let n = g.n();
    let mut subsets: Vec<Vec<Vertex>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
        .into_iter()
        .find(|s| verify_cover(g, &VertexSet::new(n, s.clone()).unwrap(), ell))
        .expect("the full vertex set is a cover")
}

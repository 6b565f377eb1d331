//! Seeded, reproducible graph corpora.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSpec {
    /// Erdős–Rényi graphs, keeping only connected ones.
    Gnp { n: usize, p: f64, count: usize, seed: u64 },
    /// Graphs built around a planted 2-cover of the given size.
    Planted { n: usize, cover_size: usize, count: usize, seed: u64 },
}

impl FromStr for CorpusSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let usage = || Error::Usage(format!("bad corpus spec '{s}': expected gnp:n,p,count,seed or planted:n,cover_size,count,seed"));
        let (kind, args) = s.split_once(':').ok_or_else(usage)?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        if args.len() != 4 {
            return Err(usage());
        }
        let int = |i: usize| args[i].parse::<usize>().map_err(|_| usage());
        let seed = args[3].parse::<u64>().map_err(|_| usage())?;
        match kind {
            "gnp" => {
                let p: f64 = args[1].parse().map_err(|_| usage())?;
                if !(0.0..=1.0).contains(&p) || int(0)? == 0 {
                    return Err(usage());
                }
                Ok(CorpusSpec::Gnp { n: int(0)?, p, count: int(2)?, seed })
            }
            "planted" => {
                let (n, cover_size) = (int(0)?, int(1)?);
                if cover_size > n || n == 0 || (cover_size == 0 && n > 2) {
                    return Err(usage());
                }
                Ok(CorpusSpec::Planted { n, cover_size, count: int(2)?, seed })
            }
            _ => Err(usage()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusGraph {
    pub id: String,
    pub graph: Graph,
}

pub fn generate(spec: &CorpusSpec) -> Vec<CorpusGraph> {
    match *spec {
        CorpusSpec::Gnp { n, p, count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|i| CorpusGraph {
                    id: format!("gnp-{n}-{seed}-{i}"),
                    graph: connected(|| gnp(n, p, &mut rng)),
                })
                .collect()
        }
        CorpusSpec::Planted { n, cover_size, count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|i| CorpusGraph {
                    id: format!("planted-{n}-{seed}-{i}"),
                    graph: connected(|| planted(n, cover_size, &mut rng)),
                })
                .collect()
        }
    }
}

fn connected(mut sample: impl FnMut() -> Graph) -> Graph {
    loop {
        let g = sample();
        if g.is_connected() {
            return g;
        }
    }
}

pub fn gnp(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::build(n, &edges).expect("generated edges are simple")
}

/// Random cover `U`, the other vertices grouped into pieces of size 1 or 2
/// with random edges into `U`, plus random edges inside `U`.
pub fn planted(n: usize, cover_size: usize, rng: &mut impl Rng) -> Graph {
    let mut ids: Vec<Vertex> = (0..n).collect();
    ids.shuffle(rng);
    let (cover, rest) = ids.split_at(cover_size);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        if i + 1 < rest.len() && rng.gen_bool(0.5) {
            edges.push((rest[i], rest[i + 1]));
            i += 2;
        } else {
            i += 1;
        }
    }
    for &v in rest {
        if cover.is_empty() {
            break;
        }
        let k = rng.gen_range(1..=cover.len().min(3));
        for &u in cover.choose_multiple(rng, k) {
            edges.push((u, v));
        }
    }
    for (a, &u) in cover.iter().enumerate() {
        for &v in &cover[a + 1..] {
            if rng.gen_bool(0.3) {
                edges.push((u, v));
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    Graph::build(n, &edges).expect("generated edges are simple")
}

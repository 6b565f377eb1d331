mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use copbound::corpus::{gnp, planted};
use copbound::game::{extract_cop_strategy, extract_optimal_robber, solve, Value};
use copbound::graph::{Graph, Vertex, VertexSet};
use copbound::io::{parse_edge_list, print_edge_list};
use copbound::params::{coc, verify_cover};
use copbound::reduction::{component_diameter, is_fixed_point, lemma1_check, reduce, Anchor};
use copbound::sim::{
    backtrack_accounting, check_escort_confinement, composed_turn_cap, run_game, ComposedCops, Evader, GreedyEvader,
    Outcome, RandomEvader, SimTrace, SolverCops, TableEvader,
};
use copbound::strategy::{Controller, ReturnPolicy};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut b = bits.iter();
            for u in 0..n {
                for v in u + 1..n {
                    if *b.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::build(n, &edges).unwrap()
        })
    })
}

/// Connected instances of the two corpus families, from a seed.
fn corpus_instance(seed: u64, n: usize, planted_cover: Option<usize>) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = match planted_cover {
            Some(c) => planted(n, c, &mut rng),
            None => gnp(n, 0.3, &mut rng),
        };
        if g.is_connected() {
            return g;
        }
    }
}

fn arb_instance() -> impl Strategy<Value = Graph> {
    (any::<u64>(), 6usize..=12, prop_oneof![Just(None), (2usize..=6).prop_map(Some)])
        .prop_map(|(seed, n, c)| corpus_instance(seed, n, c.map(|c| c.min(n - 1))))
}

fn play(ctl: &Controller, g: &Graph, robber: &mut dyn Evader) -> SimTrace {
    let cap = composed_turn_cap(ctl);
    run_game(g, "prop", &mut ComposedCops::new(ctl), robber, cap).unwrap()
}

fn controller(g: &Graph, policy: ReturnPolicy) -> Controller {
    let cover = coc(g, 2).unwrap().cover;
    let trace = reduce(g, &cover).unwrap();
    Controller::new_unbudgeted(g, &cover, &trace, policy).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coc_is_minimum_and_valid(g in arb_graph(9), ell in 1usize..=3) {
        let c = coc(&g, ell).unwrap();
        prop_assert!(verify_cover(&g, &c.cover, ell));
        let brute = common::brute_coc(&g, ell);
        prop_assert_eq!(c.cover.as_slice(), brute.as_slice());
    }

    #[test]
    fn edge_list_round_trips(g in arb_graph(12)) {
        prop_assert_eq!(parse_edge_list(&print_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn reduction_invariants(g in arb_graph(12)) {
        let cover = coc(&g, 2).unwrap().cover;
        let t = reduce(&g, &cover).unwrap();
        prop_assert!(t.satisfies_cover_drop());
        prop_assert!(is_fixed_point(&g, &t.residual_active, &t.u_prime));
        for step in &t.steps {
            prop_assert!(step.u_removed.len() >= 3);
            prop_assert!(step.deleted.is_subset(&step.active_before));
            match &step.anchor {
                Anchor::Vertex(v) => {
                    let expect = g.closed_neighborhood(*v).unwrap().intersection(&step.active_before);
                    prop_assert_eq!(&step.deleted, &expect);
                }
                Anchor::Path(p) => {
                    prop_assert_eq!(step.deleted.as_slice().len(), p.vertices().len());
                }
            }
        }
        for (h, uh) in t.components(&g) {
            prop_assert!(lemma1_check(&g, &h, &uh));
            prop_assert!(component_diameter(&g, &h).unwrap() <= 7);
        }
    }

    #[test]
    fn solver_strategy_beats_optimal_robber_within_rank(g in arb_graph(7), k in 1usize..=2) {
        let table = solve(&g, k, None).unwrap();
        if let Ok(s) = extract_cop_strategy(&table) {
            let p = extract_optimal_robber(&table);
            let Value::Rank(rank) = s.initial_value() else { unreachable!() };
            let t = run_game(&g, "p", &mut SolverCops::new(&g, &s), &mut TableEvader(&p), rank.max(1)).unwrap();
            prop_assert_eq!(t.outcome, Outcome::Captured(rank));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composed_strategy_catches_greedy_and_random_robbers(g in arb_instance(), seed in any::<u64>()) {
        for policy in [ReturnPolicy::EpisodeStart, ReturnPolicy::OriginalPosts] {
            let ctl = controller(&g, policy);
            let traces = [
                play(&ctl, &g, &mut GreedyEvader::new(&g)),
                play(&ctl, &g, &mut RandomEvader::new(&g, seed)),
            ];
            for t in &traces {
                prop_assert!(matches!(t.outcome, Outcome::Captured(_)), "{}", t);
                for (c, comp) in ctl.components().iter().enumerate() {
                    if comp.escort.is_some() && t.records.iter().any(|r| r.focus == Some(c)) {
                        let v = check_escort_confinement(t, &comp.component, &comp.u_prime_h);
                        prop_assert!(v.passed(), "{:?}\n{}", v, t);
                    }
                }
                let dist = g.all_pairs_distances();
                if let Some(b) = backtrack_accounting(t, &dist) {
                    prop_assert!(b.events <= b.allowance, "{:?}\n{}", b, t);
                }
            }
        }
    }

    #[test]
    fn guarded_vertices_are_fatal_once_guards_settle(g in arb_instance(), seed in any::<u64>()) {
        let cover = coc(&g, 2).unwrap().cover;
        let trace = reduce(&g, &cover).unwrap();
        let ctl = Controller::new_unbudgeted(&g, &cover, &trace, ReturnPolicy::default()).unwrap();
        let deleted: Vec<bool> = (0..g.n()).map(|v| !trace.residual_active.contains(v)).collect();
        let mut robber = RandomEvader::new(&g, seed);
        let mut state = ctl.initial_state();
        let mut r = robber.place(&state.positions());
        let cap = composed_turn_cap(&ctl);
        for _ in 0..cap {
            if state.positions().contains(&r) {
                break;
            }
            let settled = ctl.guards_settled(&state);
            state = ctl.step(&state, r);
            if settled && deleted[r] {
                prop_assert!(state.captured, "robber safe on deleted vertex {}", r);
            }
            if state.captured {
                break;
            }
            r = robber.respond(&state.positions(), r);
        }
        prop_assert!(state.captured || state.positions().contains(&r));
    }

    #[test]
    fn games_are_deterministic(g in arb_instance(), seed in any::<u64>()) {
        let ctl = controller(&g, ReturnPolicy::default());
        let a = play(&ctl, &g, &mut RandomEvader::new(&g, seed));
        let b = play(&ctl, &g, &mut RandomEvader::new(&g, seed));
        prop_assert_eq!(a.to_string(), b.to_string());
    }
}

#[test]
fn static_guard_covers_every_deleted_vertex() {
    let g = copbound::graph::families::star(3);
    let u = VertexSet::new(4, [1, 2, 3]).unwrap();
    let t = reduce(&g, &u).unwrap();
    assert_eq!(t.steps.len(), 1);
    let ctl = Controller::new(&g, &u, &t, ReturnPolicy::default()).unwrap();
    for start in 0..4 {
        struct Fixed(Vertex);
        impl Evader for Fixed {
            fn place(&mut self, _: &[Vertex]) -> Vertex {
                self.0
            }
            fn respond(&mut self, _: &[Vertex], r: Vertex) -> Vertex {
                r
            }
        }
        let tr = run_game(&g, "star", &mut ComposedCops::new(&ctl), &mut Fixed(start), 5).unwrap();
        assert!(matches!(tr.outcome, Outcome::Captured(t) if t <= 1));
    }
}

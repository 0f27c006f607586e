use proptest::prelude::*;

use gainflow::generate::{generate, Generated, GeneratorKind};
use gainflow::io::{parse_cnf, parse_network, parse_paft, write_cnf, write_network, write_paft};
use gainflow::network::AdditiveNetwork;
use gainflow::paft::{degree_reduce, PaftInstance};
use gainflow::rational::{zero, Rational};
use gainflow::threshold::{threshold_table, Reach};

fn network(n: usize, m: usize, seed: u64) -> AdditiveNetwork {
    match generate(
        &GeneratorKind::RandomNetwork {
            n,
            m,
            gain_range: (-4, 4),
        },
        seed,
    )
    .unwrap()
    {
        Generated::Network(net) => net,
        _ => unreachable!(),
    }
}

fn grid(w: usize, h: usize, density: f64, seed: u64) -> PaftInstance {
    let kind = GeneratorKind::PaftGrid {
        width: w,
        height: h,
        forbid_density: density,
    };
    match generate(&kind, seed).unwrap() {
        Generated::Paft(p) => p,
        _ => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // T(v) = min over out-edges (v, w) of max(0, T(w) - g), and T(t) = 0.
    #[test]
    fn threshold_is_a_clamped_fixpoint(n in 2usize..9, m in 1usize..17, seed in any::<u64>()) {
        let net = network(n, m, seed);
        for t in 0..net.vertex_count() {
            let table = threshold_table(&net, t).unwrap();
            prop_assert_eq!(table.get(t), &Reach::Finite(zero()));
            for v in (0..net.vertex_count()).filter(|&v| v != t) {
                let best: Option<Rational> = net
                    .out_edges(v)
                    .iter()
                    .filter_map(|&e| {
                        let edge = net.edge(e);
                        table.get(edge.head).finite().map(|tw| (tw - &edge.gain).max(zero()))
                    })
                    .min();
                prop_assert_eq!(table.get(v).finite(), best.as_ref(), "vertex {} towards {}", v, t);
            }
        }
    }

    #[test]
    fn network_text_round_trips(n in 2usize..9, m in 0usize..17, seed in any::<u64>()) {
        let net = network(n, m, seed);
        let text = write_network(&net);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(write_network(&back), text);
        prop_assert_eq!(back, net);
    }

    #[test]
    fn paft_and_cnf_text_round_trip(w in 2usize..5, h in 2usize..5, d in 0.0f64..0.6, seed in any::<u64>()) {
        let p = grid(w, h, d, seed);
        let text = write_paft(&p);
        prop_assert_eq!(write_paft(&parse_paft(&text).unwrap()), text);
        let Generated::Cnf(f) = generate(&GeneratorKind::RandomCnf { vars: w + 2, clauses: h }, seed).unwrap() else {
            unreachable!()
        };
        let text = write_cnf(&f);
        prop_assert_eq!(parse_cnf(&text).unwrap(), f);
    }

    // Reduced instances have non-terminal degrees 3 or 4, and reducing again changes nothing.
    #[test]
    fn degree_reduction_is_idempotent(w in 2usize..5, h in 2usize..5, d in 0.0f64..0.8, seed in any::<u64>()) {
        let p = grid(w, h, d, seed);
        for v in (0..p.graph().vertices.len()).filter(|&v| v != p.s() && v != p.t()) {
            prop_assert!((3..=4).contains(&p.degree(v)));
        }
        let (again, steps) = degree_reduce(&p);
        prop_assert!(steps.is_empty());
        prop_assert_eq!(write_paft(&again), write_paft(&p));
    }
}

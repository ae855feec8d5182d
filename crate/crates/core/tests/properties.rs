use num_bigint::BigUint;
use proptest::prelude::*;

use compact_routing::bitcodec::{
    decode_graph, encode_graph, nat_to_string, read_bar, read_prime, sd_encode_bar,
    sd_encode_prime, string_to_nat, BitReader, BitString, CodecError,
};
use compact_routing::graphs::{generate_uniform, LabeledGraph, PortAssignment};
use compact_routing::schemes::lehmer::{
    encode_permutation, factorial, permutation_bits, rank, read_permutation, unrank,
};
use compact_routing::schemes::{build_sp_neighbor_known, read_scheme, relabel_label, write_scheme};

type ReadFn = fn(&mut BitReader<'_>) -> Result<BitString, CodecError>;

fn bits(v: Vec<bool>) -> BitString {
    let mut s = BitString::new();
    for b in v {
        s.push(b);
    }
    s
}

fn arb_bits(max: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), 0..max).prop_map(bits)
}

fn arb_graph() -> impl Strategy<Value = LabeledGraph> {
    (2usize..40).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 1..=n {
                for v in u + 1..=n {
                    if mask[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            LabeledGraph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn self_delimiting_codes_round_trip(x in arb_bits(200), tail in arb_bits(40)) {
        for (code, read) in [
            (sd_encode_bar(&x), read_bar as ReadFn),
            (sd_encode_prime(&x), read_prime as ReadFn),
        ] {
            let joined = code.concat(&tail);
            let mut r = joined.reader();
            prop_assert_eq!(read(&mut r).unwrap(), x.clone());
            prop_assert_eq!(r.rest(), tail.clone());
        }
    }

    #[test]
    fn distinct_bar_codes_are_prefix_free(x in arb_bits(16), y in arb_bits(16)) {
        prop_assume!(x != y);
        let (a, b) = (sd_encode_bar(&x), sd_encode_bar(&y));
        prop_assert!(!a.starts_with(&b) && !b.starts_with(&a));
    }

    #[test]
    fn prime_code_is_not_longer_than_bar_past_small_inputs(x in arb_bits(400)) {
        prop_assume!(x.len() >= 8);
        prop_assert!(sd_encode_prime(&x).len() <= sd_encode_bar(&x).len());
    }

    #[test]
    fn naturals_round_trip(n in any::<u32>()) {
        prop_assert_eq!(string_to_nat(&nat_to_string(n as u64)).unwrap(), n as u64);
    }

    #[test]
    fn bytes_round_trip(x in arb_bits(300)) {
        prop_assert_eq!(BitString::from_bytes(&x.to_bytes(), x.len()).unwrap(), x);
    }

    #[test]
    fn graph_code_round_trips(g in arb_graph()) {
        let e = encode_graph(&g);
        prop_assert_eq!(e.len(), g.n() * (g.n() - 1) / 2);
        prop_assert_eq!(e.count_ones(), g.edge_count());
        prop_assert_eq!(encode_graph(&decode_graph(&e, g.n()).unwrap()), e);
    }

    #[test]
    fn permutation_rank_round_trips(perm in (1usize..600).prop_flat_map(|d| Just((0..d).collect::<Vec<_>>()).prop_shuffle())) {
        let d = perm.len();
        let r = rank(&perm);
        prop_assert!(r < factorial(d));
        prop_assert_eq!(unrank(r, d).unwrap(), perm.clone());
        let e = encode_permutation(&perm);
        prop_assert_eq!(e.len(), permutation_bits(d));
        prop_assert_eq!(read_permutation(&mut e.reader(), d).unwrap(), perm);
    }

    #[test]
    fn unrank_rejects_out_of_range(d in 1usize..30) {
        prop_assert!(unrank(factorial(d), d).is_none());
        prop_assert!(unrank(BigUint::from(0u32), d).is_some());
    }

    #[test]
    fn random_wirings_are_bijections(seed in any::<u64>()) {
        let g = generate_uniform(24, seed).unwrap();
        let ports = PortAssignment::random(&g, seed);
        for v in g.nodes() {
            let mut seen: Vec<usize> = (1..=g.degree(v)).map(|p| ports.neighbor_at(v, p).unwrap()).collect();
            seen.sort_unstable();
            prop_assert_eq!(seen.as_slice(), g.neighbors(v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn shortest_path_tables_round_trip(seed in any::<u64>()) {
        let g = generate_uniform(48, seed).unwrap();
        let s = match build_sp_neighbor_known(&g, 3) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let text = write_scheme(&s);
        prop_assert_eq!(write_scheme(&read_scheme(&text, &g, None).unwrap()), text);
    }

    #[test]
    fn relabel_labels_have_fixed_width(seed in any::<u64>()) {
        let g = generate_uniform(64, seed).unwrap();
        let widths: Vec<usize> = g.nodes().map(|u| relabel_label(&g, u, 3).0.len()).collect();
        prop_assert!(widths.iter().all(|&w| w == widths[0]));
        prop_assert_eq!(widths[0], (1 + 36) * 6);
    }
}

#[test]
fn code_lengths_match_formulas_up_to_4096() {
    for len in 0..=4096usize {
        let x = BitString::zeros(len);
        let ceil_log = (0..).find(|&k| (1usize << k) > len).unwrap();
        assert_eq!(sd_encode_bar(&x).len(), 2 * len + 1);
        assert_eq!(
            sd_encode_prime(&x).len(),
            len + 2 * ceil_log + 1,
            "|x| = {len}"
        );
    }
}

#[test]
fn ten_thousand_random_graphs_round_trip_at_16_and_64() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1664);
    for n in [16usize, 64] {
        let len = n * (n - 1) / 2;
        for _ in 0..10_000 {
            let s = bits((0..len).map(|_| rng.gen()).collect());
            assert_eq!(encode_graph(&decode_graph(&s, n).unwrap()), s);
        }
    }
}

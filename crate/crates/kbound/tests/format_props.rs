//! Property tests for the graph6 codec.

use kbound::{emit_graph6, parse_graph6};
use kbound_core::graph::Graph;
use proptest::prelude::*;

fn arbitrary_graph() -> impl Strategy<Value = Graph> {
    (1usize..40).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut idx = 0;
            for v in 1..n {
                for u in 0..v {
                    if bits[idx] {
                        edges.push((u, v));
                    }
                    idx += 1;
                }
            }
            Graph::new(n, &edges).unwrap()
        })
    })
}

proptest! {
    /// Canonical strings are a fixpoint: emit(parse(s)) = s.
    #[test]
    fn graph6_round_trip(g in arbitrary_graph()) {
        let s = emit_graph6(&g);
        let parsed = parse_graph6(s.as_bytes()).unwrap();
        prop_assert_eq!(&parsed, &g);
        prop_assert_eq!(emit_graph6(&parsed), s);
    }

    /// The parser rejects garbage with an error instead of panicking.
    #[test]
    fn graph6_parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..40)) {
        let _ = parse_graph6(&bytes);
    }
}

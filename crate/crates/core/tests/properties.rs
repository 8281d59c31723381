use std::io::BufReader;

use proptest::prelude::*;
use proptest::sample::subsequence;

use treecolor::chi::{chi_exact, Budget};
use treecolor::graph::{band_power, build_tree_truncation, exact_power, export_dimacs, read_dimacs, FiniteGraph};
use treecolor::tree::Node;
use treecolor::{Limits, TreeParams};

fn tree_params() -> impl Strategy<Value = TreeParams> {
    (3u32..=5, any::<bool>(), 1u32..=5).prop_map(|(q, regular, depth)| {
        let depth = if q == 5 { depth.min(4) } else { depth };
        if regular {
            TreeParams::regular(q, depth).unwrap()
        } else {
            TreeParams::complete(q, depth).unwrap()
        }
    })
}

fn with_nodes(k: usize) -> impl Strategy<Value = (TreeParams, Vec<Node>)> {
    tree_params().prop_flat_map(move |p| {
        let n = p.vertex_count();
        (Just(p), proptest::collection::vec(0..n, k))
            .prop_map(|(p, ix)| (p, ix.into_iter().map(|i| p.node_at(i).unwrap()).collect()))
    })
}

fn small_graph() -> impl Strategy<Value = FiniteGraph> {
    (2usize..=9).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> =
            (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        let len = pairs.len();
        subsequence(pairs, 0..=len).prop_map(move |edges| {
            let labels = (0..n).map(|i| format!("x{i}")).collect();
            FiniteGraph::from_edges(labels, edges, "random").unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn distance_is_a_tree_metric((p, v) in with_nodes(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        let (xa, xb, xc) = (p.addr_of(a), p.addr_of(b), p.addr_of(c));
        prop_assert_eq!(p.node_distance(a, b), xa.distance(&xb));
        prop_assert_eq!(xa.distance(&xb), xb.distance(&xa));
        prop_assert_eq!(xa.distance(&xa), 0);
        prop_assert!(xa.distance(&xc) <= xa.distance(&xb) + xb.distance(&xc));
        prop_assert_eq!(xa.distance(&xb) % 2, (xa.depth() + xb.depth()) % 2);
        if a != b {
            prop_assert!(xa.distance(&xb) > 0);
        }
    }

    #[test]
    fn ancestors_sit_at_their_distance((p, v) in with_nodes(1), i in 0u32..6) {
        let a = p.addr_of(v[0]);
        match a.ancestor(i) {
            Ok(anc) => {
                prop_assert_eq!(anc.distance(&a), i);
                prop_assert_eq!(p.node_of(&anc).unwrap(), p.ancestor_node(v[0], i).unwrap());
            }
            Err(_) => prop_assert!(i > a.depth()),
        }
    }

    #[test]
    fn descendant_counts((p, v) in with_nodes(1), offset in 0u32..4) {
        let a = p.addr_of(v[0]);
        let desc: Option<Vec<_>> = a.descendants_at(offset, &p).ok().map(|it| it.collect());
        match desc {
            Some(desc) => {
                let want: u64 = (a.depth()..a.depth() + offset).map(|t| p.arity_at(t) as u64).product();
                prop_assert_eq!(desc.len() as u64, want);
                for x in &desc {
                    prop_assert_eq!(x.ancestor(offset).unwrap(), a.clone());
                    prop_assert_eq!(x.distance(&a), offset);
                }
                prop_assert!(desc.windows(2).all(|w| w[0] < w[1]));
            }
            None => prop_assert!(a.depth() + offset > p.depth_cap()),
        }
    }

    #[test]
    fn bfs_order_is_a_bijection(p in tree_params()) {
        let mut prev = None;
        for i in 0..p.vertex_count() {
            let n = p.node_at(i).unwrap();
            let a = p.addr_of(n);
            prop_assert_eq!(p.index_of(n), i);
            prop_assert_eq!(a.bfs_index(&p).unwrap(), i);
            if let Some(prev) = prev {
                prop_assert!((n.depth, a.clone()) > prev);
            }
            prev = Some((n.depth, a));
        }
        prop_assert!(p.node_at(p.vertex_count()).is_err());
    }

    #[test]
    fn distance_shells_partition_spheres((p, v) in with_nodes(1), delta in 0u32..8) {
        let x = v[0];
        let mut got = Vec::new();
        for (depth, ranks) in p.distance_shell(x, delta) {
            got.extend(ranks.map(|rank| p.index_of(Node { depth, rank })));
        }
        got.sort_unstable();
        let want: Vec<u64> = (0..p.vertex_count())
            .filter(|&i| p.node_distance(x, p.node_at(i).unwrap()) == delta)
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn band_power_is_union_of_exact_powers(p in tree_params(), lo in 1u32..5, width in 0u32..3) {
        prop_assume!(p.vertex_count() <= 400);
        let g = build_tree_truncation(&p, &Limits::default()).unwrap();
        let band = band_power(&g, lo, lo + width).unwrap();
        let mut total = 0;
        for d in lo..=lo + width {
            let e = exact_power(&g, d).unwrap();
            total += e.edge_count();
            for (u, v) in e.edges() {
                prop_assert!(band.has_edge(u as usize, v as usize));
            }
        }
        prop_assert_eq!(band.edge_count(), total);
    }

    #[test]
    fn odd_powers_join_opposite_parities(p in tree_params(), half in 0u32..3) {
        prop_assume!(p.vertex_count() <= 400);
        let d = 2 * half + 1;
        let g = exact_power(&build_tree_truncation(&p, &Limits::default()).unwrap(), d).unwrap();
        for (u, v) in g.edges() {
            let (a, b) = (p.node_at(u as u64).unwrap(), p.node_at(v as u64).unwrap());
            prop_assert_ne!(a.depth % 2, b.depth % 2);
        }
    }

    #[test]
    fn chromatic_number_ignores_relabeling(g in small_graph(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = chi_exact(&g, Budget::default()).unwrap();
        let b = chi_exact(&g.permuted(&perm).unwrap(), Budget::default()).unwrap();
        prop_assert_eq!(a.chi, b.chi);
        prop_assert!(a.clique_lb <= a.chi && a.chi <= a.dsatur_ub);
        for (u, v) in g.edges() {
            prop_assert_ne!(a.witness_coloring.color(u as u64), a.witness_coloring.color(v as u64));
        }
        prop_assert!(a.witness_coloring.palette_size() <= a.chi);
    }

    #[test]
    fn dimacs_round_trip(g in small_graph()) {
        let mut buf = Vec::new();
        export_dimacs(&g, &["seed=0".to_string()], &mut buf).unwrap();
        let back = read_dimacs(BufReader::new(&buf[..])).unwrap();
        prop_assert_eq!(back.labels(), g.labels());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        prop_assert_eq!(back.family(), g.family());
    }
}

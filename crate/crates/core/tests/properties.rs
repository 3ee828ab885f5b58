mod common;

use std::collections::HashMap;

use common::{brute_force_split, quantile_oracle, random_dataset, random_tree, SplitInstance};
use partviz_core::ctree::{best_split_point, fit, predict_row, FitControls, Prediction};
use partviz_core::data::{discretize, histogram, kde, percentile_of, quantile, Column, Dataset};
use partviz_core::treemodel::{
    consolidate, export_json, import_tree, path_node, rows_matching, subgroup_rows,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn finite_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e6f64..1e6, 1..max_len)
}

proptest! {
    #[test]
    fn quantile_matches_oracle(v in finite_vec(200), p in 0.0f64..=1.0) {
        let q = quantile(&v, p).unwrap();
        let expected = quantile_oracle(&v, p);
        prop_assert!((q - expected).abs() <= 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn quantile_is_monotone_and_bounded(v in finite_vec(100), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (qa, qb) = (quantile(&v, lo).unwrap(), quantile(&v, hi).unwrap());
        prop_assert!(qa <= qb);
        prop_assert!(min <= qa && qb <= max);
        prop_assert_eq!(quantile(&v, 0.0).unwrap(), min);
        prop_assert_eq!(quantile(&v, 1.0).unwrap(), max);
    }

    #[test]
    fn percentile_counts_values_at_or_below(v in finite_vec(100), pick in any::<prop::sample::Index>()) {
        let x = v[pick.index(v.len())];
        let count = v.iter().filter(|&&u| u <= x).count();
        prop_assert_eq!(percentile_of(&v, x).unwrap(), count as f64 / v.len() as f64);
        prop_assert_eq!(percentile_of(&v, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn histogram_places_every_value(v in finite_vec(300)) {
        let h = histogram(&v, None).unwrap();
        prop_assert_eq!(h.counts.iter().sum::<usize>(), v.len());
        prop_assert_eq!(h.bin_edges.len(), h.counts.len() + 1);
        for &x in &v {
            let b = h.bin_of(x).unwrap();
            prop_assert!(h.bin_edges[b] <= x && x <= h.bin_edges[b + 1]);
        }
        for (mean, &count) in h.bin_means.iter().zip(&h.counts) {
            prop_assert_eq!(mean.is_some(), count > 0);
        }
    }

    #[test]
    fn kde_integrates_to_one(v in prop::collection::vec(-100.0f64..100.0, 2..200)) {
        prop_assume!(v.iter().any(|&x| x != v[0]));
        let d = kde(&v).unwrap();
        prop_assert!(d.density.iter().all(|&f| f >= 0.0));
        prop_assert!((d.integral() - 1.0).abs() < 0.01, "integral {}", d.integral());
    }

    #[test]
    fn discretized_values_fall_in_their_interval(
        v in prop::collection::vec(0.0f64..1000.0, 1..100),
        cuts in prop::collection::btree_set(0u32..1000, 1..5),
    ) {
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut breaks: Vec<f64> = cuts.into_iter().map(f64::from).filter(|&c| c > min && c < max).collect();
        breaks.insert(0, min);
        breaks.push(max);
        breaks.dedup();
        prop_assume!(breaks.len() >= 2);
        let col = discretize("c", &v, &breaks, true, 6).unwrap();
        prop_assert_eq!(col.labels().unwrap().len(), breaks.len() - 1);
        for (&x, &code) in v.iter().zip(col.codes().unwrap()) {
            let (lo, hi) = (breaks[code], breaks[code + 1]);
            prop_assert!(x <= hi);
            prop_assert!(x > lo || (code == 0 && x == lo));
        }
    }

    #[test]
    fn split_search_matches_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = SplitInstance::random(&mut rng);
        for response in [inst.continuous(), inst.categorical()] {
            let got = best_split_point(response, &inst.x, inst.minbucket).ok();
            let want = brute_force_split(response, &inst.x, inst.minbucket);
            match (got, want) {
                (None, None) => {}
                (Some(g), Some((v, c))) => {
                    prop_assert_eq!(g.breakpoint, v);
                    prop_assert!((g.criterion - c).abs() <= 1e-9 * c.abs().max(1.0));
                }
                other => prop_assert!(false, "mismatch {:?}", other),
            }
        }
    }

    #[test]
    fn consolidated_paths_select_the_same_rows(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 20 + (seed % 200) as usize;
        let m = 1 + (seed % 6) as usize;
        let dataset = random_dataset(&mut rng, n, m);
        let tree = random_tree(&mut rng, &dataset, 5);
        let mut seen = vec![0usize; n];
        for id in tree.terminal_ids() {
            let raw = path_node(&tree, id).unwrap();
            let path = consolidate(&raw).unwrap();
            let by_conditions = rows_matching(&dataset, &raw.conditions).unwrap();
            let by_intervals = subgroup_rows(&dataset, &path.constraints).unwrap();
            prop_assert_eq!(&by_conditions, &by_intervals);
            prop_assert_eq!(Some(by_intervals.as_slice()), tree.node(id).unwrap().rows());
            let distinct: std::collections::BTreeSet<_> = raw.conditions.iter().map(|c| &c.covariate).collect();
            prop_assert_eq!(path.constraints.len(), distinct.len());
            for r in by_intervals {
                seen[r] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn interchange_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dataset = random_dataset(&mut rng, 60, 3);
        let tree = random_tree(&mut rng, &dataset, 4);
        let json = export_json(&tree);
        let back = import_tree(&json).unwrap();
        prop_assert_eq!(export_json(&back), json);
        prop_assert_eq!(back.terminal_ids(), tree.terminal_ids());
    }
}

fn step_dataset(seed: u64, n: usize) -> Dataset {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x1: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let x2: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let y = x1
        .iter()
        .zip(&x2)
        .map(|(&a, &b)| 5.0 * f64::from(a > 0.4) + 3.0 * f64::from(b > 0.7) + rng.random::<f64>())
        .collect();
    Dataset::new(
        Column::continuous("y", y).unwrap(),
        vec![
            Column::continuous("x1", x1).unwrap(),
            Column::continuous("x2", x2).unwrap(),
        ],
    )
    .unwrap()
}

fn terminal_partition(tree: &partviz_core::treemodel::Tree, dataset: &Dataset) -> Vec<Vec<usize>> {
    let mut parts: Vec<Vec<usize>> = tree
        .terminal_ids()
        .iter()
        .map(|&id| {
            let path = consolidate(&path_node(tree, id).unwrap()).unwrap();
            subgroup_rows(dataset, &path.constraints).unwrap()
        })
        .collect();
    parts.sort();
    parts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fitted_trees_partition_and_preserve_the_mean(seed in any::<u64>()) {
        let dataset = step_dataset(seed, 150);
        let tree = fit(&dataset, &FitControls::default()).unwrap();
        let y = dataset.outcome().values().unwrap();
        let grand = y.iter().sum::<f64>() / y.len() as f64;
        let parts = terminal_partition(&tree, &dataset);
        prop_assert_eq!(parts.iter().map(Vec::len).sum::<usize>(), dataset.n_rows());
        let mut weighted = 0.0;
        for id in tree.terminal_ids() {
            let node = tree.node(id).unwrap();
            let rows = node.rows().unwrap();
            let Some(partviz_core::treemodel::Summary::Continuous { mean, .. }) = node.summary() else {
                unreachable!()
            };
            weighted += mean * node.n as f64;
            for &r in rows {
                prop_assert_eq!(predict_row(&tree, &dataset, r).unwrap(), Prediction::Mean(*mean));
            }
        }
        prop_assert!((weighted / dataset.n_rows() as f64 - grand).abs() < 1e-9);
    }

    #[test]
    fn fit_is_invariant_to_increasing_covariate_transforms(seed in any::<u64>()) {
        let dataset = step_dataset(seed, 120);
        let transformed: Vec<Column> = dataset
            .covariates()
            .iter()
            .map(|c| {
                let v = c.values().unwrap().iter().map(|x| 3.0 * x + 7.0).collect();
                Column::continuous(c.name(), v).unwrap()
            })
            .collect();
        let other = Dataset::new(dataset.outcome().clone(), transformed).unwrap();
        let a = fit(&dataset, &FitControls::default()).unwrap();
        let b = fit(&other, &FitControls::default()).unwrap();
        prop_assert_eq!(a.terminal_count(), b.terminal_count());
        prop_assert_eq!(terminal_partition(&a, &dataset), terminal_partition(&b, &other));
    }
}

#[test]
fn predict_by_name_matches_row_routing() {
    let dataset = step_dataset(3, 200);
    let tree = fit(&dataset, &FitControls::default()).unwrap();
    for r in 0..dataset.n_rows() {
        let row: HashMap<String, f64> = dataset
            .covariates()
            .iter()
            .map(|c| (c.name().to_string(), c.values().unwrap()[r]))
            .collect();
        assert_eq!(
            partviz_core::ctree::predict(&tree, &row).unwrap(),
            predict_row(&tree, &dataset, r).unwrap()
        );
    }
}

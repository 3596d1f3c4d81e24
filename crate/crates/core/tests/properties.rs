use std::collections::BTreeSet;

use citewin_core::selection::percentile_rank;
use citewin_core::stability::size_series;
use citewin_core::*;
use proptest::prelude::*;

fn w(n: u32) -> WindowLength {
    WindowLength::new(n).unwrap()
}

fn cell_counts_of(counts: &[u64]) -> CellCounts {
    let entries = counts.iter().enumerate().map(|(i, &c)| (format!("id{i:03}"), c)).collect();
    CellCounts::from_entries(CellKey::parse("C"), w(1), entries)
}

fn counts_strategy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..60, 1..40)
}

fn id_set(max: usize) -> impl Strategy<Value = BTreeSet<String>> {
    prop::collection::btree_set((0..max).prop_map(|i| format!("p{i}")), 0..max)
}

proptest! {
    #[test]
    fn css_thresholds_are_monotone(counts in counts_strategy()) {
        let t = css_thresholds(&counts).unwrap();
        let sum: u64 = counts.iter().sum();
        prop_assert_eq!(t.betas[0], Rational::new(sum, counts.len() as u64));
        for pair in t.betas.windows(2) {
            prop_assert!(pair[0] < pair[1]);
        }
        prop_assert_eq!(t.stalled_at.is_some(), t.betas.len() < 3);
    }

    #[test]
    fn css_classes_are_nested(counts in counts_strategy()) {
        let c = cell_counts_of(&counts);
        let t = css_thresholds(&counts).unwrap();
        let upper = |beta: Rational| -> BTreeSet<&str> {
            c.entries().iter().filter(|(_, n)| beta.le_count(*n)).map(|(id, _)| id.as_str()).collect()
        };
        let sets: Vec<BTreeSet<&str>> = t.betas.iter().map(|&b| upper(b)).collect();
        for pair in sets.windows(2) {
            prop_assert!(pair[1].is_subset(&pair[0]));
        }
        let rem = css_select(&c, CssLevel::AtLeastRemarkably).unwrap();
        let out = css_select(&c, CssLevel::Outstandingly).unwrap();
        prop_assert!(out.members.is_subset(&rem.members));
        for g in [&rem, &out] {
            for id in &g.members {
                let n = c.entries().iter().find(|(i, _)| i == id).unwrap().1;
                prop_assert!(g.effective_threshold.le_count(n));
            }
        }
    }

    #[test]
    fn scaling_counts_scales_thresholds(counts in counts_strategy(), factor in 1u64..6) {
        let scaled: Vec<u64> = counts.iter().map(|c| c * factor).collect();
        let (a, b) = (css_thresholds(&counts).unwrap(), css_thresholds(&scaled).unwrap());
        let rescaled: Vec<Rational> = a.betas.iter().map(|r| r.scale(factor)).collect();
        prop_assert_eq!(rescaled, b.betas);
        let (ca, cb) = (cell_counts_of(&counts), cell_counts_of(&scaled));
        for level in SelectionLevel::defaults() {
            let ga = select(&ca, level, TieMode::Inclusive).unwrap();
            let gb = select(&cb, level, TieMode::Inclusive).unwrap();
            prop_assert_eq!(ga.members, gb.members);
        }
    }

    #[test]
    fn selection_ignores_input_order(counts in counts_strategy(), seed in any::<u64>()) {
        let entries: Vec<(String, u64)> = counts.iter().enumerate().map(|(i, &c)| (format!("id{i:03}"), c)).collect();
        let mut shuffled = entries.clone();
        // Deterministic rotation plus reversal stands in for a shuffle.
        let k = (seed % shuffled.len() as u64) as usize;
        shuffled.rotate_left(k);
        shuffled.reverse();
        let a = CellCounts::from_entries(CellKey::parse("C"), w(1), entries);
        let b = CellCounts::from_entries(CellKey::parse("C"), w(1), shuffled);
        prop_assert_eq!(&a, &b);
        for level in SelectionLevel::defaults() {
            for tie in [TieMode::Inclusive, TieMode::ExactSize] {
                prop_assert_eq!(select(&a, level, tie).unwrap(), select(&b, level, tie).unwrap());
            }
        }
    }

    #[test]
    fn percentile_groups_nest_and_have_target_size(counts in counts_strategy(), p in 1u32..=10_000, q in 1u32..=10_000) {
        let c = cell_counts_of(&counts);
        let (small, large) = (p.min(q), p.max(q));
        let gs = percentile_select(&c, small, TieMode::Inclusive).unwrap();
        let gl = percentile_select(&c, large, TieMode::Inclusive).unwrap();
        prop_assert!(gs.members.is_subset(&gl.members));
        let k = percentile_rank(large, counts.len());
        prop_assert!(gl.len() >= k);
        let exact = percentile_select(&c, large, TieMode::ExactSize).unwrap();
        prop_assert_eq!(exact.len(), k.min(counts.len()));
        prop_assert!(exact.members.is_subset(&gl.members));
    }

    #[test]
    fn overlap_ratios_are_bounded_and_symmetric(a in id_set(12), b in id_set(12)) {
        let ab = stability::OverlapPoint::between(w(1), &a, w(2), &b);
        let ba = stability::OverlapPoint::between(w(1), &b, w(2), &a);
        for r in [ab.jaccard, ab.overlap_fwd, ab.overlap_bwd] {
            prop_assert!(r <= Rational::ONE);
        }
        prop_assert!(ab.jaccard <= ab.overlap_fwd && ab.jaccard <= ab.overlap_bwd);
        prop_assert_eq!(ab.jaccard, ba.jaccard);
        prop_assert_eq!(ab.overlap_fwd, ba.overlap_bwd);
        prop_assert_eq!(ab.overlap_bwd, ba.overlap_fwd);
        if !a.is_empty() && a.is_subset(&b) {
            prop_assert_eq!(ab.overlap_fwd, Rational::ONE);
        }
    }

    #[test]
    fn convergence_on_monotone_curve_is_first_crossing(mut values in prop::collection::vec(0u64..=100, 1..10), t in 1u64..=100) {
        values.sort_unstable();
        let threshold = Rational::new(t, 100);
        let curve = OverlapCurve {
            cell: CellKey::parse("C"),
            level: SelectionLevel::percentile(500).unwrap(),
            points: values.iter().enumerate().map(|(i, &v)| OverlapPoint {
                window_a: w(i as u32 + 1),
                window_b: w(i as u32 + 2),
                size_a: 100,
                size_b: 100,
                intersection: v as usize,
                jaccard: Rational::new(v, 100),
                overlap_fwd: Rational::new(v, 100),
                overlap_bwd: Rational::new(v, 100),
            }).collect(),
        };
        let s = convergence_summary(&curve, OverlapMetric::OverlapFwd, threshold).unwrap();
        let crossing = values.iter().position(|&v| v >= t).map(|i| w(i as u32 + 1));
        prop_assert_eq!(s.first_window_at_threshold, crossing);
    }

    #[test]
    fn cells_ignore_category_order(cats in prop::collection::btree_set("[A-E]", 1..5), rot in 0usize..5) {
        let mut listed: Vec<String> = cats.iter().cloned().collect();
        let k = rot % listed.len();
        listed.rotate_left(k);
        prop_assert_eq!(CellKey::from_categories(&listed), CellKey::from_categories(&cats));
    }
}

/// Random small corpus as CSV text.
fn corpus_text() -> impl Strategy<Value = (String, String, String)> {
    let journals = prop::collection::vec(prop::collection::vec(0usize..3, 1..3), 1..4);
    (journals, prop::collection::vec((0usize..4, 0i32..2, prop::collection::vec(0i32..5, 0..8)), 1..25)).prop_map(
        |(journals, pubs)| {
            let names = ["Alpha", "Beta", "Gamma Delta"];
            let mut j = String::from("journal_id,categories\n");
            for (i, cats) in journals.iter().enumerate() {
                let listed: Vec<&str> = cats.iter().map(|&c| names[c]).collect();
                j.push_str(&format!("J{i},{}\n", listed.join(";")));
            }
            let mut p = String::from("id,journal_id,year,doc_type\n");
            let mut c = String::from("publication_id,citing_year\n");
            for (i, (journal, year, offsets)) in pubs.iter().enumerate() {
                p.push_str(&format!("p{i},J{},{},article\n", journal % journals.len(), 2000 + year));
                for d in offsets {
                    c.push_str(&format!("p{i},{}\n", 2000 + year + d));
                }
            }
            (p, j, c)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn corpus_invariants((p, j, c) in corpus_text()) {
        let (corpus, _) = load_corpus(p.as_bytes(), j.as_bytes(), c.as_bytes(), &DocTypeFilter::default()).unwrap();

        // Partition.
        let mut all = BTreeSet::new();
        let mut total = 0;
        for cell in corpus.cells() {
            let members = corpus.cell_members(cell).unwrap();
            total += members.len();
            all.extend(members.iter().cloned());
        }
        prop_assert_eq!(total, corpus.publications().len());
        prop_assert_eq!(all.len(), total);

        // Counts agree with series prefixes and never decrease.
        for publication in corpus.publications() {
            let series = citation_series(&corpus, &publication.id).unwrap();
            let mut previous = 0;
            for l in 1..=series.counts_by_offset.len() as u32 {
                let count = citation_count(&corpus, &publication.id, w(l)).unwrap();
                prop_assert_eq!(count, series.counts_by_offset[..l as usize].iter().sum::<u64>());
                prop_assert!(count >= previous);
                previous = count;
            }
        }

        // Round trip through the CSV writers.
        let (mut p2, mut j2, mut c2) = (Vec::new(), Vec::new(), Vec::new());
        corpus.write_publications(&mut p2).unwrap();
        corpus.write_journals(&mut j2).unwrap();
        corpus.write_citations(&mut c2).unwrap();
        let (again, _) = load_corpus(&p2[..], &j2[..], &c2[..], &DocTypeFilter::default()).unwrap();
        prop_assert_eq!(&again, &corpus);

        // Exact-size percentile shares do not move with the window.
        for cell in corpus.cells() {
            let members = corpus.cell_members(cell).unwrap();
            if members.is_empty() {
                continue;
            }
            let max = members.iter().map(|id| corpus.max_window(id).unwrap()).min().unwrap();
            let groups = group_sequence(&corpus, cell, SelectionLevel::percentile(2500).unwrap(), w(1)..=w(max), TieMode::ExactSize).unwrap();
            let shares: BTreeSet<Rational> = size_series(&groups).points.iter().map(|p| p.share).collect();
            prop_assert_eq!(shares.len(), 1);
        }
    }
}

#[test]
fn cumulative_advantage_spreads_counts_more_than_control() {
    // Offset 1 gives strong feedback; a huge offset makes draws nearly
    // uniform. Compare the variance of final counts over many seeds.
    let variance = |offset: Rational| -> f64 {
        let mut total = 0.0;
        for seed in 0..20 {
            let config = SynthConfig {
                seed,
                n_publications: 50,
                n_journals: 1,
                category_layout: vec![CategoryLayout { categories: vec!["X".into()], journals: 1, publications: 50 }],
                pub_year: 2000,
                n_years: 4,
                citations_per_year: vec![50, 100, 100, 50],
                aging: AgingKernel::Flat,
                advantage_offset: offset,
            };
            let corpus = generate_corpus(&config).unwrap();
            let counts: Vec<f64> = corpus
                .publications()
                .iter()
                .map(|p| citation_series(&corpus, &p.id).unwrap().total() as f64)
                .collect();
            let mean = counts.iter().sum::<f64>() / counts.len() as f64;
            total += counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / counts.len() as f64;
        }
        total / 20.0
    };
    let advantage = variance(Rational::ONE);
    let control = variance(Rational::from(1_000_000));
    assert!(advantage > control, "advantage {advantage} vs control {control}");
}

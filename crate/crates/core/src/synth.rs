//! Seeded synthetic corpora with cumulative-advantage citation dynamics.
//!
//! Citations arrive year by year. In year offset `d` exactly
//! `citations_per_year[d]` events are allocated one at a time, and each
//! event goes to publication `i` with probability proportional to
//! `(cᵢ + advantage_offset) · aging(d)`, where `cᵢ` is the number of events
//! `i` has received so far. Early leads are therefore self-reinforcing.
//!
//! Every publication of a config shares one publication year, so `aging(d)`
//! is the same for all candidates of a draw. The kernel shapes the corpus
//! through the yearly volumes: [`SynthConfig::with_mean_citations`] spreads a
//! total volume over the years in proportion to the kernel weights, which is
//! how the presets are built.
//!
//! The pseudo-random stream is ChaCha8 seeded from the 64-bit `seed`, so a
//! given `(seed, config)` always yields the same corpus.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{CitationEvent, Corpus, DocTypeFilter, Journal, Publication, DEFAULT_DOC_TYPE};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryLayout {
    pub categories: Vec<String>,
    pub journals: u64,
    /// Publications in this cell, spread round-robin over its journals.
    pub publications: u64,
}

/// Per-offset weight of a field's citation activity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AgingKernel {
    /// Peak at offset 1, geometric decay by `decay` on either side.
    Fast { decay: f64 },
    /// Linear rise to `peak_offset` (3..=6), geometric decay afterwards.
    Slow { peak_offset: u32, decay: f64 },
    Flat,
}

impl AgingKernel {
    pub fn weight(&self, offset: u32) -> f64 {
        match *self {
            AgingKernel::Fast { decay } => decay.powi(offset.abs_diff(1) as i32),
            AgingKernel::Slow { peak_offset, decay } => {
                if offset <= peak_offset {
                    f64::from(offset + 1) / f64::from(peak_offset + 1)
                } else {
                    decay.powi((offset - peak_offset) as i32)
                }
            }
            AgingKernel::Flat => 1.0,
        }
    }

    pub fn weights(&self, n_years: u32) -> Vec<f64> {
        (0..n_years).map(|d| self.weight(d)).collect()
    }

    fn problems(&self, out: &mut Vec<String>) {
        let decay_ok = |d: f64| d.is_finite() && d > 0.0 && d <= 1.0;
        match *self {
            AgingKernel::Fast { decay } => {
                if !decay_ok(decay) {
                    out.push(format!("aging.decay: {decay} is outside (0, 1]"));
                }
            }
            AgingKernel::Slow { peak_offset, decay } => {
                if !(3..=6).contains(&peak_offset) {
                    out.push(format!("aging.peak_offset: {peak_offset} is outside 3..=6"));
                }
                if !decay_ok(decay) {
                    out.push(format!("aging.decay: {decay} is outside (0, 1]"));
                }
            }
            AgingKernel::Flat => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_publications: u64,
    pub n_journals: u64,
    pub category_layout: Vec<CategoryLayout>,
    pub pub_year: i32,
    pub n_years: u32,
    pub citations_per_year: Vec<u64>,
    pub aging: AgingKernel,
    pub advantage_offset: Rational,
}

impl SynthConfig {
    /// Checks every field, reporting all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n_publications == 0 {
            problems.push("n_publications: must be positive".to_string());
        }
        if self.n_journals == 0 {
            problems.push("n_journals: must be positive".to_string());
        }
        if self.n_years == 0 {
            problems.push("n_years: must be positive".to_string());
        }
        if self.citations_per_year.len() != self.n_years as usize {
            problems.push(format!(
                "citations_per_year: has {} entries, n_years is {}",
                self.citations_per_year.len(),
                self.n_years
            ));
        }
        if self.category_layout.is_empty() {
            problems.push("category_layout: must not be empty".to_string());
        }
        let mut seen_sets: Vec<BTreeSet<&str>> = Vec::new();
        for (i, entry) in self.category_layout.iter().enumerate() {
            let set: BTreeSet<&str> = entry.categories.iter().map(|c| c.trim()).collect();
            if set.is_empty() {
                problems.push(format!("category_layout[{i}].categories: must not be empty"));
            }
            for name in &set {
                if name.is_empty() || name.contains([';', '|', ',', '"', '\n', '\r']) {
                    problems.push(format!("category_layout[{i}].categories: invalid category name `{name}`"));
                }
            }
            if let Some(j) = seen_sets.iter().position(|s| *s == set) {
                problems.push(format!("category_layout[{i}].categories: same set as category_layout[{j}]"));
            }
            seen_sets.push(set);
            if entry.journals == 0 {
                problems.push(format!("category_layout[{i}].journals: must be positive"));
            }
        }
        let journals: u64 = self.category_layout.iter().map(|e| e.journals).sum();
        if journals != self.n_journals {
            problems.push(format!("n_journals: {} but category_layout holds {journals}", self.n_journals));
        }
        let pubs: u64 = self.category_layout.iter().map(|e| e.publications).sum();
        if pubs != self.n_publications {
            problems.push(format!("n_publications: {} but category_layout holds {pubs}", self.n_publications));
        }
        self.aging.problems(&mut problems);
        if self.advantage_offset.is_zero() {
            problems.push("advantage_offset: must be positive".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(problems))
        }
    }

    /// Replaces the yearly volumes with `mean · n_publications` events spread
    /// over the years in proportion to the aging kernel.
    pub fn with_mean_citations(mut self, mean: u64) -> Self {
        let total = mean * self.n_publications;
        self.citations_per_year = apportion(total, &self.aging.weights(self.n_years));
        self
    }

    pub fn total_citations(&self) -> u64 {
        self.citations_per_year.iter().sum()
    }
}

/// Largest-remainder split of `total` proportional to `weights`; leftover
/// units go to the largest fractional parts, earliest index first.
pub fn apportion(total: u64, weights: &[f64]) -> Vec<u64> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut shares: Vec<u64> = quotas.iter().map(|q| q.floor() as u64).collect();
    let assigned: u64 = shares.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().cycle().take(total.saturating_sub(assigned) as usize) {
        shares[i] += 1;
    }
    shares
}

/// Fenwick tree over integer weights with proportional sampling.
struct WeightTree {
    tree: Vec<u64>,
    total: u64,
}

impl WeightTree {
    fn uniform(n: usize, weight: u64) -> Self {
        let mut tree = vec![0; n + 1];
        for i in 1..=n {
            tree[i] += weight;
            let parent = i + (i & i.wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i];
            }
        }
        WeightTree { tree, total: weight * n as u64 }
    }

    fn add(&mut self, index: usize, delta: u64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
        self.total += delta;
    }

    /// Index whose cumulative weight range contains `target < total`.
    fn find(&self, mut target: u64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.checked_next_power_of_two().map_or(0, |p| if p > n { p / 2 } else { p });
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step /= 2;
        }
        pos
    }
}

fn id_width(n: u64) -> usize {
    n.to_string().len().max(6)
}

pub fn generate_corpus(config: &SynthConfig) -> Result<Corpus> {
    config.validate()?;

    let journal_width = id_width(config.n_journals);
    let pub_width = id_width(config.n_publications);
    let mut journals = Vec::with_capacity(config.n_journals as usize);
    let mut publications = Vec::with_capacity(config.n_publications as usize);
    for entry in &config.category_layout {
        let first_journal = journals.len();
        for _ in 0..entry.journals {
            journals.push(Journal {
                id: format!("J{:0journal_width$}", journals.len() + 1),
                categories: entry.categories.iter().map(|c| c.trim().to_string()).collect(),
            });
        }
        for k in 0..entry.publications {
            let journal = &journals[first_journal + (k % entry.journals) as usize];
            publications.push(Publication {
                id: format!("P{:0pub_width$}", publications.len() + 1),
                journal_id: journal.id.clone(),
                pub_year: config.pub_year,
                doc_type: DEFAULT_DOC_TYPE.to_string(),
            });
        }
    }

    // Weight of publication i is (q·cᵢ + p) for advantage offset p/q; the
    // common aging factor of the year drops out of the normalisation.
    let (p, q) = (config.advantage_offset.numer(), config.advantage_offset.denom());
    let mut weights = WeightTree::uniform(publications.len(), p);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut events = Vec::with_capacity(config.total_citations() as usize);
    for (offset, &volume) in config.citations_per_year.iter().enumerate() {
        let citing_year = config.pub_year + offset as i32;
        for _ in 0..volume {
            let target = rng.gen_range(0..weights.total);
            let winner = weights.find(target);
            weights.add(winner, q);
            events.push(CitationEvent {
                publication_id: publications[winner].id.clone(),
                citing_year,
            });
        }
    }

    let (corpus, _) = Corpus::from_parts(publications, journals, events, &DocTypeFilter::Any)?;
    Ok(corpus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetName {
    FastPhysicsLike,
    SlowMathLike,
}

impl PresetName {
    pub fn name(self) -> &'static str {
        match self {
            PresetName::FastPhysicsLike => "fast_physics_like",
            PresetName::SlowMathLike => "slow_math_like",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast_physics_like" => Ok(PresetName::FastPhysicsLike),
            "slow_math_like" => Ok(PresetName::SlowMathLike),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

pub const PRESET_SEED: u64 = 42;
pub const PRESET_PUB_YEAR: i32 = 2004;
/// Publication year plus seven further citing years.
pub const PRESET_YEARS: u32 = 8;

const ASTRO: &str = "Astronomy Astrophysics";
const PARTICLES: &str = "Physics Particles Fields";
const MATH: &str = "Mathematics";
const MATH_APPLIED: &str = "Mathematics Applied";

/// (categories, articles, journals) per cell.
type CellSpec = (&'static [&'static str], u64, u64);

const FAST_CELLS: [CellSpec; 3] = [
    (&[ASTRO], 8047, 24),
    (&[PARTICLES], 1977, 8),
    (&[ASTRO, PARTICLES], 2440, 10),
];

const SLOW_CELLS: [CellSpec; 3] = [
    (&[MATH], 10022, 60),
    (&[MATH_APPLIED], 3938, 30),
    (&[MATH, MATH_APPLIED], 3286, 25),
];

/// Mean citations per article over the full horizon. The real yearly
/// volumes are not known; these are smooth stand-ins.
const FAST_MEAN_CITATIONS: u64 = 20;
const SLOW_MEAN_CITATIONS: u64 = 6;

/// Builds a preset config with cell sizes divided by `divisor` (rounded
/// half up, at least one article and one journal per cell).
pub fn preset(name: PresetName, divisor: u64) -> Result<SynthConfig> {
    if divisor == 0 {
        return Err(Error::InvalidConfig(vec!["divisor: must be positive".to_string()]));
    }
    let (cells, aging, mean) = match name {
        PresetName::FastPhysicsLike => (&FAST_CELLS, AgingKernel::Fast { decay: 0.6 }, FAST_MEAN_CITATIONS),
        PresetName::SlowMathLike => (
            &SLOW_CELLS,
            AgingKernel::Slow { peak_offset: 4, decay: 0.85 },
            SLOW_MEAN_CITATIONS,
        ),
    };
    let scale = |n: u64| ((2 * n + divisor) / (2 * divisor)).max(1);
    let category_layout: Vec<CategoryLayout> = cells
        .iter()
        .map(|&(categories, articles, journals)| {
            let publications = scale(articles);
            CategoryLayout {
                categories: categories.iter().map(|c| c.to_string()).collect(),
                journals: journals.min(publications),
                publications,
            }
        })
        .collect();
    let config = SynthConfig {
        seed: PRESET_SEED,
        n_publications: category_layout.iter().map(|e| e.publications).sum(),
        n_journals: category_layout.iter().map(|e| e.journals).sum(),
        category_layout,
        pub_year: PRESET_PUB_YEAR,
        n_years: PRESET_YEARS,
        citations_per_year: Vec::new(),
        aging,
        advantage_offset: Rational::ONE,
    };
    Ok(config.with_mean_citations(mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::CellKey;

    fn tiny(seed: u64, volumes: Vec<u64>) -> SynthConfig {
        SynthConfig {
            seed,
            n_publications: 2,
            n_journals: 1,
            category_layout: vec![CategoryLayout {
                categories: vec!["X".into()],
                journals: 1,
                publications: 2,
            }],
            pub_year: 2004,
            n_years: volumes.len() as u32,
            citations_per_year: volumes,
            aging: AgingKernel::Flat,
            advantage_offset: Rational::ONE,
        }
    }

    #[test]
    fn zero_volume_gives_zero_events() {
        let corpus = generate_corpus(&tiny(1, vec![0, 0, 0])).unwrap();
        assert!(corpus.events().is_empty());
        assert_eq!(corpus.publications().len(), 2);
    }

    #[test]
    fn weight_tree_samples_ranges() {
        let mut t = WeightTree::uniform(5, 1);
        t.add(2, 3);
        // Cumulative: [0,1) → 0, [1,2) → 1, [2,6) → 2, [6,7) → 3, [7,8) → 4.
        let picks: Vec<usize> = (0..8).map(|x| t.find(x)).collect();
        assert_eq!(picks, [0, 1, 2, 2, 2, 2, 3, 4]);
        assert_eq!(t.total, 8);
        let single = WeightTree::uniform(1, 2);
        assert_eq!((single.find(0), single.find(1)), (0, 0));
    }

    #[test]
    fn first_draw_is_fair_between_equal_weights() {
        // Closed form: both publications start at weight 1, so each is
        // chosen first with probability 1/2.
        let runs = 10_000;
        let first_wins = (0..runs)
            .filter(|&seed| {
                let corpus = generate_corpus(&tiny(seed, vec![1])).unwrap();
                corpus.events()[0].publication_id == corpus.publications()[0].id
            })
            .count();
        let freq = first_wins as f64 / runs as f64;
        assert!((0.48..=0.52).contains(&freq), "first-pick frequency {freq}");
    }

    #[test]
    fn yearly_totals_are_conserved() {
        let config = preset(PresetName::FastPhysicsLike, 100).unwrap();
        let corpus = generate_corpus(&config).unwrap();
        let mut per_year = vec![0u64; config.n_years as usize];
        for e in corpus.events() {
            let p = corpus.publication(&e.publication_id).unwrap();
            assert!(e.citing_year >= p.pub_year);
            per_year[(e.citing_year - config.pub_year) as usize] += 1;
        }
        assert_eq!(per_year, config.citations_per_year);
    }

    #[test]
    fn same_seed_same_corpus() {
        let config = preset(PresetName::SlowMathLike, 100).unwrap();
        assert_eq!(generate_corpus(&config).unwrap(), generate_corpus(&config).unwrap());
        let other = SynthConfig { seed: 7, ..config.clone() };
        assert_ne!(generate_corpus(&config).unwrap().events(), generate_corpus(&other).unwrap().events());
    }

    #[test]
    fn preset_sizes() {
        let sizes = |name, divisor| -> Vec<u64> {
            preset(name, divisor).unwrap().category_layout.iter().map(|e| e.publications).collect()
        };
        assert_eq!(sizes(PresetName::FastPhysicsLike, 1), [8047, 1977, 2440]);
        assert_eq!(sizes(PresetName::SlowMathLike, 1), [10022, 3938, 3286]);
        assert_eq!(sizes(PresetName::FastPhysicsLike, 10), [805, 198, 244]);
        let config = preset(PresetName::FastPhysicsLike, 1).unwrap();
        assert_eq!(config.n_years, 8);
        assert_eq!(config.citations_per_year.len(), 8);
        assert_eq!(config.total_citations(), 20 * 12464);
    }

    #[test]
    fn preset_cells_follow_layout() {
        let corpus = generate_corpus(&preset(PresetName::FastPhysicsLike, 10).unwrap()).unwrap();
        let size = |k: &str| corpus.cell_members(&CellKey::parse(k)).unwrap().len();
        assert_eq!(size(ASTRO), 805);
        assert_eq!(size(PARTICLES), 198);
        assert_eq!(size("Astronomy Astrophysics|Physics Particles Fields"), 244);
    }

    #[test]
    fn unknown_preset_name() {
        assert!(matches!("medium".parse::<PresetName>(), Err(Error::UnknownPreset(_))));
        assert_eq!("slow_math_like".parse::<PresetName>().unwrap(), PresetName::SlowMathLike);
    }

    #[test]
    fn kernel_shapes() {
        let fast = AgingKernel::Fast { decay: 0.5 }.weights(4);
        assert_eq!(fast, [0.5, 1.0, 0.5, 0.25]);
        let slow = AgingKernel::Slow { peak_offset: 3, decay: 0.5 }.weights(6);
        assert_eq!(slow, [0.25, 0.5, 0.75, 1.0, 0.5, 0.25]);
        assert!(AgingKernel::Flat.weights(3).iter().all(|&w| w == 1.0));
    }

    #[test]
    fn apportion_is_exact() {
        assert_eq!(apportion(10, &[1.0, 1.0, 1.0]), [4, 3, 3]);
        assert_eq!(apportion(0, &[1.0, 2.0]), [0, 0]);
        assert_eq!(apportion(7, &[0.5, 1.0, 0.5]).iter().sum::<u64>(), 7);
    }

    #[test]
    fn invalid_config_lists_every_field() {
        let mut config = tiny(1, vec![1, 2]);
        config.n_years = 3;
        config.n_journals = 4;
        config.advantage_offset = Rational::ZERO;
        config.aging = AgingKernel::Slow { peak_offset: 9, decay: 1.5 };
        let Err(Error::InvalidConfig(problems)) = config.validate() else {
            panic!("expected invalid config");
        };
        let fields: Vec<&str> = problems.iter().map(|p| p.split(':').next().unwrap()).collect();
        assert_eq!(
            fields,
            ["citations_per_year", "n_journals", "aging.peak_offset", "aging.decay", "advantage_offset"]
        );
    }

    #[test]
    fn config_json_round_trip() {
        let config = preset(PresetName::SlowMathLike, 10).unwrap();
        let json = serde_json::to_string(&config).unwrap();
        assert!(json.contains("\"advantage_offset\":\"1\""));
        let back: SynthConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, config);
    }
}

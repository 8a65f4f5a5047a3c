//! Seeded property suites for the two constructions, run by the CLI's
//! `verify` command. Output is deterministic for a given configuration.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::forcing::{all_permutations, construct_forcing_placement, target_representation, verify_forcing_for, CanonicalFamily};
use crate::geometry::Placement;
use crate::oracle::{naive_bad_quartet, naive_forced, naive_is_biplane, naive_is_plane, random_feasible_placement, random_sequence_pair};
use crate::permutation::{count, enumerate, enumerate_pruned, PermClass};
use crate::seqpair::{build_constraint_graphs, SequencePair};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Upper,
    Lower,
    All,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "upper" => Ok(Suite::Upper),
            "lower" => Ok(Suite::Lower),
            "all" => Ok(Suite::All),
            other => Err(crate::Error::Format(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Largest size checked.
    pub max_n: usize,
    /// Random instances per randomized check.
    pub samples: usize,
    pub seed: u64,
    /// Random topological orders drawn per placement.
    pub orders_per_instance: usize,
}

impl SuiteConfig {
    pub fn new(max_n: usize, samples: usize, seed: u64) -> Self {
        SuiteConfig { max_n, samples, seed, orders_per_instance: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, failure: Option<String>, ok_detail: String) {
        let passed = failure.is_none();
        self.checks.push(Check { name, passed, detail: failure.unwrap_or(ok_detail) });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        if failed == 0 {
            writeln!(f, "all {} checks passed", self.checks.len())
        } else {
            writeln!(f, "{failed} of {} checks failed", self.checks.len())
        }
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Report {
    let mut report = Report::default();
    if matches!(suite, Suite::Upper | Suite::All) {
        upper_suite(config, &mut report);
    }
    if matches!(suite, Suite::Lower | Suite::All) {
        lower_suite(config, &mut report);
    }
    report
}

fn first_failure<T: Send + Sync>(items: Vec<T>, check: impl Fn(&T) -> Option<String> + Sync + Send) -> Option<String> {
    items.par_iter().map(check).collect::<Vec<_>>().into_iter().flatten().next()
}

fn sample_size(config: &SuiteConfig, index: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(index as u64));
    rng.gen_range(1..=config.max_n.max(1))
}

fn sample_placement(config: &SuiteConfig, index: usize) -> Placement {
    random_feasible_placement(sample_size(config, index), config.seed.wrapping_mul(1_000_003).wrapping_add(index as u64))
}

fn upper_suite(config: &SuiteConfig, report: &mut Report) {
    let small = config.max_n.min(7);
    let perms: Vec<_> = (1..=small).flat_map(all_permutations).collect();
    let total = perms.len();
    report.push(
        "plane-test-vs-oracle",
        first_failure(perms, |p| (p.is_plane() != naive_is_plane(p)).then(|| format!("disagree on {p:?}"))),
        format!("{total} permutations, n <= {small}"),
    );

    let pruned_max = config.max_n.min(8);
    let mut counts = Vec::new();
    let mut failure = None;
    for n in 1..=pruned_max {
        let filtered = enumerate(n, PermClass::Plane);
        if enumerate_pruned(n, PermClass::Plane) != filtered {
            failure.get_or_insert(format!("pruned and filtered generators differ at n = {n}"));
        }
        counts.push(filtered.len().to_string());
    }
    report.push("plane-generators-agree", failure, format!("counts {}", counts.join(",")));

    let samples: Vec<usize> = (0..config.samples).collect();
    let k = config.orders_per_instance;
    report.push(
        "constraint-graphs-acyclic",
        first_failure(samples.clone(), |&s| {
            let p = sample_placement(config, s);
            let (g1, g2) = build_constraint_graphs(&p, false).ok()?;
            let (h1, h2) = build_constraint_graphs(&p, true).ok()?;
            (![g1, g2, h1, h2].iter().all(|g| g.is_acyclic())).then(|| format!("cycle in sample {s}"))
        }),
        format!("{} placements", config.samples),
    );
    report.push(
        "topological-orders-represent",
        first_failure(samples.clone(), |&s| {
            let p = sample_placement(config, s);
            let table = p.relation_table();
            let (g1, g2) = build_constraint_graphs(&p, false).expect("feasible sample");
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (s as u64) << 8);
            (0..k).find_map(|_| {
                let sp = SequencePair::new(g1.random_topological_order(&mut rng), g2.random_topological_order(&mut rng))
                    .expect("equal sizes");
                (!sp.to_representation().represents_table(&table)).then(|| format!("sample {s}: {sp:?} fails"))
            })
        }),
        format!("{} placements x {k} orders", config.samples),
    );
    report.push(
        "augmented-orders-avoid-bad-quartets",
        first_failure(samples.clone(), |&s| {
            let p = sample_placement(config, s);
            let table = p.relation_table();
            let (g1, g2) = build_constraint_graphs(&p, true).expect("feasible sample");
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (s as u64) << 8 ^ 0x5eed);
            (0..k).find_map(|_| {
                let sp = SequencePair::new(g1.random_topological_order(&mut rng), g2.random_topological_order(&mut rng))
                    .expect("equal sizes");
                if !sp.to_representation().represents_table(&table) {
                    Some(format!("sample {s}: {sp:?} does not represent"))
                } else if let Some(q) = sp.find_bad_quartet() {
                    Some(format!("sample {s}: {sp:?} has bad quartet {q:?}"))
                } else if !sp.relabel_to_plane_test().is_plane() {
                    Some(format!("sample {s}: relabeling of {sp:?} is not plane"))
                } else {
                    None
                }
            })
        }),
        format!("{} placements x {k} orders", config.samples),
    );
    report.push(
        "bad-quartet-search-vs-oracle",
        first_failure(samples, |&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(0xbad0 + s as u64));
            let n = rng.gen_range(1..=config.max_n.max(1));
            let sp = random_sequence_pair(n, &mut rng);
            let fast = sp.find_bad_quartet();
            let slow = naive_bad_quartet(&sp);
            if fast.is_some() != slow.is_some() {
                return Some(format!("{sp:?}: fast {fast:?}, oracle {slow:?}"));
            }
            if fast.is_some() != sp.find_extreme_bad_quartet().is_some() {
                return Some(format!("{sp:?}: extreme search disagrees"));
            }
            None
        }),
        format!("{} random sequence pairs", config.samples),
    );

    let ex = config.max_n.min(5);
    let perms = all_permutations(ex);
    let pairs: Vec<SequencePair> = perms
        .iter()
        .flat_map(|a| perms.iter().map(move |b| SequencePair::new(a.clone(), b.clone()).expect("equal sizes")))
        .collect();
    let without: usize = pairs.par_iter().filter(|sp| sp.find_bad_quartet().is_none()).count();
    let expected = perms.len() * count(ex, PermClass::Plane);
    let mismatch = first_failure(pairs, |sp| {
        let plain = sp.find_bad_quartet();
        if plain.is_some() != sp.find_extreme_bad_quartet().is_some() {
            return Some(format!("{sp:?}: bad and extreme searches disagree"));
        }
        if let Some(q) = plain {
            match sp.reduce_to_extreme(q) {
                Ok((e, _)) if sp.is_extreme(e) => {}
                _ => return Some(format!("{sp:?}: reduction from {q:?} failed")),
            }
        }
        None
    });
    let failure = mismatch.or_else(|| {
        (without != expected).then(|| format!("{without} pairs without bad quartet, expected {expected}"))
    });
    report.push(
        "restricted-pair-count",
        failure,
        format!("n = {ex}: {without} of {} sequence pairs", perms.len() * perms.len()),
    );
}

fn lower_suite(config: &SuiteConfig, report: &mut Report) {
    let small = config.max_n.min(7);
    let perms: Vec<_> = (1..=small).flat_map(all_permutations).collect();
    let total = perms.len();
    report.push(
        "biplane-test-vs-oracle",
        first_failure(perms, |p| (p.is_biplane() != naive_is_biplane(p)).then(|| format!("disagree on {p:?}"))),
        format!("{total} permutations, n <= {small}"),
    );

    let biplanes: Vec<_> = (1..=config.max_n).flat_map(|n| enumerate(n, PermClass::Biplane)).collect();
    let built = biplanes.len();
    report.push(
        "forcing-construction",
        first_failure(biplanes, |pi| {
            let cert = match construct_forcing_placement(pi) {
                Ok(c) => c,
                Err(e) => return Some(format!("{pi:?}: {e}")),
            };
            let p = &cert.placement;
            if !verify_forcing_for(pi, p).unwrap_or(false) {
                return Some(format!("{pi:?}: forcing conditions fail"));
            }
            match naive_forced(p) {
                Ok(f) if f.is_total() => {}
                _ => return Some(format!("{pi:?}: oracle finds an unforced pair")),
            }
            (p.canonical_representation().ok() != Some(target_representation(pi)))
                .then(|| format!("{pi:?}: wrong canonical representation"))
        }),
        format!("{built} biplane permutations, n <= {}", config.max_n),
    );

    let samples: Vec<usize> = (0..config.samples).collect();
    report.push(
        "forced-relations-vs-oracle",
        first_failure(samples, |&s| {
            let p = sample_placement(config, s);
            (naive_forced(&p).ok() != p.forced_relations().ok()).then(|| format!("sample {s} disagrees"))
        }),
        format!("{} placements", config.samples),
    );

    let fam_n = config.max_n.min(4);
    let (failure, detail) = match CanonicalFamily::generate(fam_n) {
        Ok(family) => {
            let expected = all_permutations(fam_n).len() * count(fam_n, PermClass::Biplane);
            let distinct = family.distinct_count();
            (
                (distinct != expected).then(|| format!("{distinct} distinct members, expected {expected}")),
                format!("n = {fam_n}: {distinct} distinct canonical representations"),
            )
        }
        Err(e) => (Some(e.to_string()), String::new()),
    };
    report.push("canonical-family", failure, detail);
}

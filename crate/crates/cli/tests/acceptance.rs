//! One PASS/FAIL line per acceptance criterion.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rectrep::evaluate::{exhaustive_optimum, Dimensions, Netlist, Objective};
use rectrep::forcing::{all_permutations, construct_forcing_placement, target_representation, verify_forcing_for, CanonicalFamily};
use rectrep::geometry::{frac, int, Placement, Rect, Representation, SpatialRelation};
use rectrep::oracle::{naive_bad_quartet, naive_forced, naive_is_biplane, naive_is_plane, random_feasible_placement};
use rectrep::permutation::{count, enumerate, enumerate_pruned, PermClass};
use rectrep::seqpair::build_constraint_graphs;
use rectrep::SequencePair;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// Stdout followed by any files written, stderr, exit code.
type CliRun = (Vec<u8>, Vec<u8>, Option<i32>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fig1_table(pair_23: SpatialRelation) -> Representation {
    use SpatialRelation::*;
    Representation::from_upper(4, |i, j| match (i + 1, j + 1) {
        (1, 2) | (1, 4) | (3, 4) => West,
        (2, 3) => pair_23,
        _ => South,
    })
}

fn figure_reproduction() -> Outcome {
    let fig1a = Placement::new(vec![
        Rect::new(int(1), int(1), frac(5, 2), int(3)),
        Rect::new(frac(5, 2), int(1), int(4), int(2)),
        Rect::new(int(1), int(3), frac(5, 2), int(4)),
        Rect::new(frac(5, 2), int(2), int(4), int(4)),
    ])
    .map_err(|e| e.to_string())?;
    let fig1c = Placement::from_ints(&[(1, 1, 2, 3), (2, 1, 4, 2), (1, 3, 3, 4), (3, 2, 4, 4)]).map_err(|e| e.to_string())?;
    let (r, r_prime) = (fig1_table(SpatialRelation::South), fig1_table(SpatialRelation::East));
    ensure(fig1a.is_feasible(), || "Fig. 1a infeasible".into())?;
    ensure(r.represents(&fig1a).is_ok_and(|b| b), || "r does not represent Fig. 1a".into())?;
    ensure(r_prime.represents(&fig1a).is_ok_and(|b| b), || "r' does not represent Fig. 1a".into())?;
    ensure(r.represents(&fig1c).is_ok_and(|b| b), || "r does not represent Fig. 1c".into())?;
    let violations: Vec<_> = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .filter(|&(i, j)| !fig1c.spatial_relations(i, j).unwrap().contains(r_prime.get(i, j)))
        .collect();
    ensure(violations == [(1, 2)], || format!("r' fails on Fig. 1c at {violations:?}"))?;
    Ok("r, r' represent Fig. 1a; only r represents Fig. 1c; r' fails at (2,3)".into())
}

fn pattern_engine() -> Outcome {
    for n in 1..=7 {
        let bad = all_permutations(n)
            .into_par_iter()
            .find_any(|pi| pi.is_plane() != naive_is_plane(pi) || pi.is_biplane() != naive_is_biplane(pi));
        ensure(bad.is_none(), || format!("oracle disagrees on {:?}", bad.unwrap().to_one_based()))?;
    }
    let mut plane = Vec::new();
    let mut biplane = Vec::new();
    for n in 1..=9 {
        for (class, out) in [(PermClass::Plane, &mut plane), (PermClass::Biplane, &mut biplane)] {
            let filtered = enumerate(n, class);
            let pruned = enumerate_pruned(n, class);
            ensure(filtered == pruned, || format!("generators disagree at n={n} ({class:?})"))?;
            out.push(filtered.len());
        }
    }
    ensure(plane[..4] == [1, 2, 6, 23], || format!("plane counts {plane:?}"))?;
    ensure(biplane[3] == 22, || format!("biplane(4) = {}", biplane[3]))?;
    let biplane_oracle = all_permutations(4).iter().filter(|p| naive_is_biplane(p)).count();
    ensure(biplane_oracle == 22, || format!("oracle biplane(4) = {biplane_oracle}"))?;
    Ok(format!("oracle agrees for n<=7; plane(1..9) = {plane:?}; biplane(1..9) = {biplane:?}"))
}

fn upper_bound_machinery() -> Outcome {
    const PLACEMENTS: u64 = 10_000;
    const ORDERS: usize = 50;
    (0..PLACEMENTS).into_par_iter().try_for_each(|seed| {
        let n = 1 + (seed % 8) as usize;
        let p = random_feasible_placement(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for augmented in [false, true] {
            let (g1, g2) = build_constraint_graphs(&p, augmented).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure(g1.is_acyclic() && g2.is_acyclic(), || format!("seed {seed}: cycle"))?;
            for _ in 0..ORDERS {
                let sp = SequencePair::new(g1.random_topological_order(&mut rng), g2.random_topological_order(&mut rng))
                    .map_err(|e| e.to_string())?;
                ensure(sp.to_representation().represents(&p).is_ok_and(|b| b), || format!("seed {seed}: not represented"))?;
                if augmented {
                    ensure(sp.find_bad_quartet().is_none(), || format!("seed {seed}: bad quartet"))?;
                    ensure(sp.relabel_to_plane_test().is_plane(), || format!("seed {seed}: relabeling not plane"))?;
                }
            }
        }
        Ok::<_, String>(())
    })?;
    Ok(format!("{PLACEMENTS} placements, {ORDERS} order pairs per graph pair"))
}

fn bad_quartet_equivalences() -> Outcome {
    let perms = all_permutations(5);
    let good = perms
        .par_iter()
        .map(|pi| -> Result<usize, String> {
            let mut good = 0;
            for rho in &perms {
                let sp = SequencePair::new(pi.clone(), rho.clone()).map_err(|e| e.to_string())?;
                let any = sp.find_bad_quartet();
                ensure(any.is_some() == sp.find_extreme_bad_quartet().is_some(), || format!("extreme mismatch at {sp:?}"))?;
                ensure(any.is_some() == naive_bad_quartet(&sp).is_some(), || format!("oracle mismatch at {sp:?}"))?;
                good += usize::from(any.is_none());
            }
            Ok(good)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let expected = 120 * count(5, PermClass::Plane);
    ensure(good == expected, || format!("n=5: {good} pairs without bad quartet, expected {expected}"))?;
    let perms4 = all_permutations(4);
    let good4 = perms4
        .iter()
        .flat_map(|pi| perms4.iter().map(move |rho| SequencePair::new(pi.clone(), rho.clone()).unwrap()))
        .filter(|sp| sp.find_bad_quartet().is_none())
        .count();
    ensure(good4 == 552 && good4 < 576, || format!("n=4 restricted count {good4}"))?;
    Ok(format!("14400 pairs at n=5, {good} without bad quartet = 5!*plane(5); n=4: 552 < 576"))
}

fn lower_bound_construction() -> Outcome {
    let mut total = 0;
    for n in 1..=6 {
        let perms = enumerate(n, PermClass::Biplane);
        total += perms.len();
        perms.par_iter().try_for_each(|pi| {
            let name = format!("{:?}", pi.to_one_based());
            let cert = construct_forcing_placement(pi).map_err(|e| format!("{name}: {e}"))?;
            let p = &cert.placement;
            ensure(p.is_feasible() && p.is_forcing(), || format!("{name}: not a forcing placement"))?;
            ensure(verify_forcing_for(pi, p).is_ok_and(|b| b), || format!("{name}: verify_forcing_for failed"))?;
            let canonical = p.canonical_representation().map_err(|e| e.to_string())?;
            ensure(canonical == target_representation(pi), || format!("{name}: canonical representation differs"))?;
            let naive = naive_forced(p).map_err(|e| e.to_string())?;
            ensure(naive == p.forced_relations().unwrap(), || format!("{name}: oracle disagrees"))?;
            Ok::<_, String>(())
        })?;
    }
    let family = CanonicalFamily::generate(4).map_err(|e| e.to_string())?;
    ensure(family.len() == 528 && family.distinct_count() == 528, || {
        format!("family size {} with {} distinct", family.len(), family.distinct_count())
    })?;
    Ok(format!("{total} biplane permutations for n<=6; family at n=4 has 528 distinct members"))
}

fn non_tightness() -> Outcome {
    let p = Placement::from_ints(&[(1, 1, 3, 2), (1, 2, 2, 4), (3, 1, 5, 3), (2, 3, 4, 4), (4, 3, 5, 4)])
        .map_err(|e| e.to_string())?;
    ensure(p.is_feasible(), || "Fig. 8 infeasible".into())?;
    ensure(!p.is_forcing(), || "Fig. 8 forcing".into())?;
    let forced = naive_forced(&p).map_err(|e| e.to_string())?;
    ensure(forced == p.forced_relations().unwrap(), || "oracle disagrees".into())?;
    let missing: Vec<_> = forced.missing_pairs().collect();
    ensure(missing == [(0, 4), (4, 0)], || format!("unforced pairs {missing:?}"))?;
    for i in 1..4 {
        ensure(forced.get(0, i) != forced.get(i, 4), || format!("(1,{0}) and ({0},5) agree", i + 1))?;
    }
    Ok("feasible, not forcing, (1,5) is the only unforced pair, no intermediate chain".into())
}

fn optimizer_completeness() -> Outcome {
    const SETS: usize = 200;
    (0..SETS).into_par_iter().try_for_each(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        let n = 1 + k % 4;
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
        let h: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
        let dims = Dimensions::from_ints(&w, &h).map_err(|e| e.to_string())?;
        let nets = match n {
            1 => Netlist::empty(),
            _ => {
                let pins: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
                let mut nets = vec![vec![0, n - 1]];
                if pins.len() >= 2 {
                    nets.push(pins);
                }
                Netlist::new(nets).map_err(|e| e.to_string())?
            }
        };
        for objective in [Objective::Area, Objective::Hpwl] {
            let full = exhaustive_optimum(&dims, &nets, objective, false).map_err(|e| e.to_string())?;
            let restricted = exhaustive_optimum(&dims, &nets, objective, true).map_err(|e| e.to_string())?;
            ensure(full.value == restricted.value, || format!("set {k} ({}): {} vs {}", objective.as_str(), full.value, restricted.value))?;
        }
        Ok::<_, String>(())
    })?;
    Ok(format!("{SETS} dimension sets, area and hpwl"))
}

fn run_cli(args: &[&str], threads: &str, dir: &Path) -> Result<CliRun, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rectrep"))
        .args(args)
        .current_dir(dir)
        .env("SEQPAIR_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    // Files written by the command take part in the comparison.
    let mut files = Vec::new();
    let mut names: Vec<_> = std::fs::read_dir(dir).map_err(|e| e.to_string())?.flatten().map(|e| e.path()).collect();
    names.sort();
    for path in names {
        files.extend(path.file_name().unwrap().to_string_lossy().as_bytes());
        files.extend(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let mut stdout = out.stdout;
    stdout.extend(files);
    Ok((stdout, out.stderr, out.status.code()))
}

fn determinism() -> Outcome {
    let fig3 = r#"{"n":7,"rects":[{"id":1,"xmin":1,"ymin":1,"xmax":4,"ymax":2},{"id":2,"xmin":1,"ymin":2,"xmax":2,"ymax":6},{"id":3,"xmin":4,"ymin":1,"xmax":5,"ymax":3},{"id":4,"xmin":2,"ymin":3,"xmax":5,"ymax":4},{"id":5,"xmin":2,"ymin":4,"xmax":3,"ymax":6},{"id":6,"xmin":5,"ymin":1,"xmax":6,"ymax":5},{"id":7,"xmin":3,"ymin":5,"xmax":6,"ymax":6}]}"#;
    let sp = r#"{"pi":[2,5,1,4,3],"rho":[4,1,5,3,2]}"#;
    let dims = r#"{"widths":[2,1,3,1,2],"heights":[1,2,1,3,2]}"#;
    let nets = r#"{"nets":[[1,2,3],[4,5],[1,5]]}"#;
    let commands: Vec<Vec<&str>> = vec![
        vec!["check-perm", "[2,5,7,6,1,3,8,4]"],
        vec!["check-perm", "[2,5,7,6,1,3,8,4]", "--biplane"],
        vec!["enum", "plane", "--n", "6"],
        vec!["enum", "biplane", "--n", "7", "--count-only"],
        vec!["count", "--up-to", "7"],
        vec!["extract", fig3],
        vec!["extract", fig3, "--classic"],
        vec!["graphs", fig3, "--augmented"],
        vec!["badquartet", sp],
        vec!["badquartet", sp, "--extreme"],
        vec!["construct", "[2,5,3,1,4,6]"],
        vec!["construct", "[3,1,4,2,5]", "-o", "out.json"],
        vec!["verify", "--suite", "all", "--n", "5", "--samples", "200", "--seed", "42"],
        vec!["compact", sp, dims],
        vec!["solve", dims, nets, "--objective", "hpwl"],
        vec!["solve", dims, "--objective", "area", "--full"],
        vec!["render", fig3, "-o", "fig3.svg"],
        vec!["render", "[2,5,7,6,1,3,8,4]", "-o", "embedding.svg"],
    ];
    for args in &commands {
        let mut runs = Vec::new();
        for threads in ["1", "4"] {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            runs.push(run_cli(args, threads, dir.path())?);
        }
        ensure(runs[0].2 == Some(0), || format!("{:?} exited with {:?}", args[0], runs[0].2))?;
        ensure(runs[0] == runs[1], || format!("{:?} output differs between runs", args[0]))?;
    }
    Ok(format!("{} commands byte-identical across runs and thread counts", commands.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 figure-reproduction", figure_reproduction),
        ("2 pattern-engine", pattern_engine),
        ("3 upper-bound-machinery", upper_bound_machinery),
        ("4 bad-quartet-equivalences", bad_quartet_equivalences),
        ("5 lower-bound-construction", lower_bound_construction),
        ("6 non-tightness", non_tightness),
        ("7 optimizer-completeness", optimizer_completeness),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}

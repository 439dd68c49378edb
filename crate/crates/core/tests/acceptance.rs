//! Acceptance criteria 1 to 10. Each test prints one line,
//! `criterion N: PASS|FAIL: details`, before asserting. Run with
//! `cargo test --release -p tight-euler --test acceptance -- --nocapture --test-threads=1`
//! to see every line.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tight_euler::closure::closing_length;
use tight_euler::decomposer::{decompose, enumerate_copies, TightCycleCopy, DEFAULT_BUDGET};
use tight_euler::divisibility::{degree_gcds, is_divisible, tight_cycle_divisible};
use tight_euler::pipeline::{
    brute_force_euler_tour, euler_tour, universal_cycle, verify_tour, verify_ucycle, PipelineConfig,
    PipelineError,
};
use tight_euler::randwalk::{default_steps, Start, StepOutcome, WalkProcess};
use tight_euler::splice::insert_cycle;
use tight_euler::walk::DEFAULT_SPANNING_CAP;
use tight_euler::{validate_walk, Hypergraph, Vertex, Walk};

use common::{check_partition, connected_graphs, to_hypergraph};

fn report(n: u32, pass: bool, details: &str) {
    println!("criterion {n}: {}: {details}", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_01_known_cycle_verification() {
    let cycle: Vec<Vertex> = "1 2 3 4 5 2 4 1 3 5".split(' ').map(|t| t.parse().unwrap()).collect();
    let started = Instant::now();
    let ok = verify_ucycle(&cycle, 5, 2).is_ok();
    let elapsed = started.elapsed();
    let mut caught = 0;
    let mut corruptions = 0;
    for i in 0..cycle.len() {
        for value in 1..=5 {
            if value == cycle[i] {
                continue;
            }
            let mut bad = cycle.clone();
            bad[i] = value;
            corruptions += 1;
            caught += usize::from(verify_ucycle(&bad, 5, 2).is_err());
        }
    }
    let pass = ok && caught == corruptions && elapsed < Duration::from_millis(1);
    report(
        1,
        pass,
        &format!("known cycle ok = {ok} in {elapsed:?}; {caught}/{corruptions} single-element corruptions reported"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_small_universal_cycles() {
    let config = PipelineConfig::default();
    let mut pass = true;
    let mut lines = Vec::new();
    for (n, k) in [(5, 2), (7, 2), (9, 2), (5, 3), (8, 3)] {
        let started = Instant::now();
        let result = universal_cycle(n, k, 0, &config);
        let elapsed = started.elapsed();
        let ok = match &result {
            Ok(seq) => verify_ucycle(seq, n, k).is_ok() && elapsed < Duration::from_secs(60),
            Err(_) => false,
        };
        pass &= ok;
        lines.push(format!(
            "({n},{k}) {} in {elapsed:.2?}",
            match &result {
                Ok(seq) if ok => format!("verified, length {}", seq.len()),
                Ok(_) => "produced an invalid cycle".to_string(),
                Err(e) => format!("failed: {e}"),
            }
        ));
    }
    for (n, k) in [(6, 2), (9, 3)] {
        let refused = matches!(universal_cycle(n, k, 0, &config), Err(PipelineError::UcycleNotDivisible { .. }));
        pass &= refused;
        lines.push(format!("({n},{k}) divisibility error = {refused}"));
    }
    report(2, pass, &lines.join("; "));
    assert!(pass);
}

/// Removes edges until every vertex degree is divisible by `k`. Greedily
/// takes the lexicographically first edge that most reduces the total of the
/// degree residues mod `k`; once no edge reduces it, looks for a smallest set
/// of at most 4 edges whose removal clears every residue.
fn make_degrees_divisible(g: &Hypergraph) -> Hypergraph {
    let mut g = g.clone();
    let k = g.k();
    loop {
        let degrees = g.vertex_degrees();
        let bad = |v: Vertex| degrees[v as usize - 1] % k != 0;
        if !g.vertices().any(bad) {
            return g;
        }
        let (gain, edge) = g
            .edges()
            .map(|e| {
                let gain: i64 = e.vertices().iter().map(|&v| if bad(v) { 1 } else { 1 - k as i64 }).sum();
                (gain, e)
            })
            .max_by_key(|(gain, e)| (*gain, std::cmp::Reverse(e.vertices().to_vec())))
            .expect("an offending vertex has an edge");
        let edge = edge.clone();
        if gain <= 0 {
            if let Some(set) = (1..=4).find_map(|depth| clearing_set(&g, depth)) {
                for e in set {
                    g.remove_edge(&e);
                }
                continue;
            }
        }
        g.remove_edge(&edge);
    }
}

/// At most `depth` edges whose removal makes every degree divisible by `k`,
/// branching on the edges through the smallest offending vertex.
fn clearing_set(g: &Hypergraph, depth: usize) -> Option<Vec<tight_euler::Edge>> {
    let k = g.k();
    let residues: Vec<usize> = g.vertex_degrees().iter().map(|d| d % k).collect();
    fn go(
        g: &Hypergraph,
        k: usize,
        residues: &mut Vec<usize>,
        depth: usize,
        chosen: &mut Vec<tight_euler::Edge>,
    ) -> bool {
        let Some(v) = residues.iter().position(|&r| r != 0) else {
            return true;
        };
        // Each removal lowers a residue by one, so the total bounds the depth.
        if depth == 0 || residues.iter().filter(|&&r| r != 0).count() > k * depth {
            return false;
        }
        let through: Vec<tight_euler::Edge> = g
            .edges()
            .filter(|e| e.contains(v as Vertex + 1) && !chosen.contains(e))
            .cloned()
            .collect();
        for e in through {
            for &u in e.vertices() {
                residues[u as usize - 1] = (residues[u as usize - 1] + k - 1) % k;
            }
            chosen.push(e.clone());
            if go(g, k, residues, depth - 1, chosen) {
                return true;
            }
            chosen.pop();
            for &u in e.vertices() {
                residues[u as usize - 1] = (residues[u as usize - 1] + 1) % k;
            }
        }
        false
    }
    let mut residues = residues;
    let mut chosen = Vec::new();
    go(g, k, &mut residues, depth, &mut chosen).then_some(chosen)
}

#[test]
fn criterion_03_main_theorem_property_suite() {
    let config = PipelineConfig::default();
    let mut successes = 0;
    let mut valid = true;
    let mut failures_by_stage = std::collections::BTreeMap::new();
    let mut sizes = Vec::new();
    for seed in 0..50 {
        let g = make_degrees_divisible(&Hypergraph::random(12, 3, 0.8, seed).unwrap());
        sizes.push(g.edge_count());
        match euler_tour(&g, seed, &config) {
            Ok(c) => {
                successes += 1;
                let divisible = g.vertex_degrees().iter().all(|d| d % 3 == 0);
                valid &= verify_tour(&g, &c.walk).is_ok() && divisible;
            }
            Err(PipelineError::Inconclusive(f)) => {
                let stage = f.first().map(|s| format!("{:?}", s.stage)).unwrap_or_default();
                *failures_by_stage.entry(stage).or_insert(0) += 1;
            }
            Err(e) => {
                *failures_by_stage.entry(e.to_string()).or_insert(0) += 1;
                valid &= !matches!(e, PipelineError::DegreeCondition(_) | PipelineError::Internal(_));
            }
        }
    }
    report(
        3,
        valid,
        &format!(
            "{successes}/50 tours found, all verified = {valid}; failures by first stage {failures_by_stage:?}; \
             edge counts after degree repair {sizes:?} (success rate reported, not asserted)"
        ),
    );
    assert!(valid);
}

#[test]
fn criterion_04_random_walk_invariants() {
    let g = Hypergraph::complete(12, 3).unwrap();
    let t_max = default_steps(12, 3);
    let mut ok = true;
    let mut checks = 0;
    for seed in 0..100 {
        let mut process = WalkProcess::start(&g, Start::Random, seed).unwrap();
        let check = |p: &WalkProcess| {
            let history = p.history();
            validate_walk(&g, &history).is_ok()
                && history.edge_set().len() + p.residual().edge_count() == g.edge_count()
                && p.used_edges() == history.window_count()
        };
        for step in 1..=t_max {
            let outcome = process.step();
            if step % 100 == 0 {
                ok &= check(&process);
                checks += 1;
            }
            if matches!(outcome, Ok(StepOutcome::Terminated) | Err(_)) {
                break;
            }
        }
        ok &= check(&process);
        checks += 1;
    }

    let k23 = Hypergraph::complete(3, 2).unwrap();
    let trials = 10_000;
    let twos = (0..trials)
        .filter(|&seed| {
            let mut p = WalkProcess::start(&k23, Start::Fixed(vec![1]), seed).unwrap();
            p.step() == Ok(StepOutcome::Extended(2))
        })
        .count();
    let frequency = twos as f64 / trials as f64;
    let uniform = (frequency - 0.5).abs() <= 0.05;
    let pass = ok && uniform;
    report(
        4,
        pass,
        &format!("{checks} spot checks valid = {ok}; first step to 2 on K(3,2): {frequency:.4} (target 0.5 +/- 0.05)"),
    );
    assert!(pass);
}

#[test]
fn criterion_05_spanning_walk_empirical() {
    let n = 12;
    let g = Hypergraph::complete(n, 3).unwrap();
    let t = (144.0 * (12f64).ln().powi(2)).floor() as usize;
    assert_eq!(t, default_steps(n, 3));
    let log_cubed = (n as f64).ln().powi(3);
    let mut spanning = 0;
    let mut total_len = 0;
    let mut rows = Vec::new();
    for seed in 0..50 {
        let mut process = WalkProcess::start(&g, Start::Random, seed).unwrap();
        let walk = process.run(t);
        let r = walk.is_spanning(n, DEFAULT_SPANNING_CAP).unwrap();
        spanning += usize::from(r.spanning);
        total_len += walk.len();
        rows.push(format!(
            "seed {seed}: len {} spanning {} missing {} max_codegree {} (log^3 n = {log_cubed:.1})",
            walk.len(),
            r.spanning,
            r.missing,
            walk.max_codegree()
        ));
    }
    for row in &rows {
        println!("  {row}");
    }
    let pass = spanning >= 1;
    report(
        5,
        pass,
        &format!(
            "{spanning}/50 seeds spanning with T = {t}; walks stop after {:.1} vertices on average \
             (K(12,3) has {} edges, spanning needs all 132 ordered pairs)",
            total_len as f64 / 50.0,
            g.edge_count()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_06_closure_arithmetic() {
    let started = Instant::now();
    let mut ok = true;
    for k in 2..=4usize {
        for r in 0..2 * k {
            let scan: Vec<usize> = (k..=3 * k - 1).filter(|l| l % (2 * k) == r).collect();
            ok &= scan.len() == 1;
            // Pairs (e, len) with e - len ≡ r, including negative differences.
            for len in [0usize, 1, 7, 100] {
                for e in [r, r + 2 * k, r + 10 * k] {
                    ok &= closing_length(e, len, k) == (k..=3 * k - 1).find(|&l| (e as i64 - len as i64 - l as i64).rem_euclid(2 * k as i64) == 0).unwrap();
                }
            }
            ok &= closing_length(r + 2 * k, 0, k) == scan[0];
        }
    }
    let elapsed = started.elapsed();
    report(6, ok, &format!("all residues for k = 2, 3, 4 match the exhaustive scan ({elapsed:?})"));
    assert!(ok);
}

/// Edge-disjoint union of random tight `2k`-cycles on `1..=n`.
fn planted_cycles(k: usize, n: usize, cycles: usize, rng: &mut ChaCha8Rng) -> Hypergraph {
    let mut g = Hypergraph::new(k, n).unwrap();
    let vertices: Vec<Vertex> = (1..=n as Vertex).collect();
    for _ in 0..cycles * 20 {
        if g.edge_count() == 2 * k * cycles {
            break;
        }
        let c: Vec<Vertex> = vertices.choose_multiple(rng, 2 * k).copied().collect();
        let windows = common::cyclic_windows(&c, k);
        if windows.iter().all(|w| !g.contains(w)) {
            for w in windows {
                g.insert_edge(w).unwrap();
            }
        }
    }
    g
}

#[test]
fn criterion_07_divisibility_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut agree = true;
    let mut divisible = 0;
    for i in 0..200 {
        let k = 2 + i % 2;
        let n = rng.gen_range(2 * k..=10);
        let g = if i % 4 < 2 {
            Hypergraph::random(n, k, rng.gen_range(0.1..1.0), rng.gen()).unwrap()
        } else {
            let mut g = planted_cycles(k, n, rng.gen_range(1..=3), &mut rng);
            if i % 4 == 3 {
                // Knock one edge out so some instances just miss.
                let first = g.edges().next().cloned();
                if let Some(e) = first {
                    g.remove_edge(&e);
                }
            }
            g
        };
        let pattern = Hypergraph::tight_cycle(k, 2 * k).unwrap();
        let a = tight_cycle_divisible(&g);
        let b = is_divisible(&g, &pattern).unwrap().is_none();
        agree &= a == b;
        divisible += usize::from(a);
    }
    let c36 = degree_gcds(&Hypergraph::tight_cycle(3, 6).unwrap()).unwrap().values;
    let pass = agree && c36 == vec![6, 3, 1];
    report(
        7,
        pass,
        &format!("200 instances agree = {agree} ({divisible} divisible); d(C(3,6)) = {c36:?}"),
    );
    assert!(pass);
}

/// Dihedral class of a 4-cycle given as a vertex sequence.
fn dihedral_class(c: &[Vertex]) -> Vec<Vertex> {
    let len = c.len();
    (0..len)
        .flat_map(|r| {
            let forward: Vec<Vertex> = (0..len).map(|i| c[(r + i) % len]).collect();
            let backward: Vec<Vertex> = (0..len).map(|i| c[(r + len - i) % len]).collect();
            [forward, backward]
        })
        .min()
        .unwrap()
}

#[test]
fn criterion_08_decomposer_correctness() {
    let started = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 4..=8usize {
        let g = Hypergraph::complete(n, 2).unwrap();
        let found = enumerate_copies(&g).len();
        let oracle: HashSet<Vec<Vertex>> =
            (1..=n as Vertex).permutations(4).map(|c| dihedral_class(&c)).collect();
        let formula = n * (n - 1) * (n - 2) * (n - 3) / 8;
        ok &= found == formula && oracle.len() == formula;
        notes.push(format!("K{n}: {found}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut instances = vec![Hypergraph::complete(9, 2).unwrap()];
    let mut minus_matching = Hypergraph::complete(8, 2).unwrap();
    for a in [1, 3, 5, 7] {
        minus_matching.remove_edge(&tight_euler::Edge::new(vec![a, a + 1]).unwrap());
    }
    instances.push(minus_matching);
    for _ in 0..4 {
        instances.push(planted_cycles(2, 9, 5, &mut rng));
        instances.push(planted_cycles(3, 10, 4, &mut rng));
    }
    let mut decomposed = 0;
    for (i, g) in instances.iter().enumerate() {
        match decompose(g, i as u64, DEFAULT_BUDGET) {
            Ok(d) => {
                let cycles: Vec<Vec<Vertex>> = d.copies.iter().map(|c| c.vertices().to_vec()).collect();
                ok &= check_partition(g, &cycles).is_ok() && d.copies.len() == g.edge_count() / (2 * g.k());
                ok &= decompose(g, i as u64, DEFAULT_BUDGET).unwrap() == d;
                decomposed += 1;
            }
            Err(e) => notes.push(format!("instance {i}: {e}")),
        }
    }
    let elapsed = started.elapsed();
    let pass = ok && decomposed == instances.len() && elapsed < Duration::from_secs(10);
    report(
        8,
        pass,
        &format!(
            "copy counts {}; {decomposed}/{} decompositions exact and reproducible; {elapsed:.2?}",
            notes.join(", "),
            instances.len()
        ),
    );
    assert!(pass);
}

/// Spanning closed walks on `K(9,3)` avoiding the edges of the tight cycle
/// 1 3 5 7 9 2. Found by an offline randomized search; none is known yet.
const K39_WALKS: &[&[Vertex]] = &[];

/// A spanning closed walk of length 102 on `K(10,3)` avoiding the edges of
/// the tight cycle 1 3 5 7 9 2, found by an offline randomized search.
const K310_WALK: &[Vertex] = &[
    1, 8, 9, 7, 1, 2, 8, 7, 5, 1, 9, 4, 8, 2, 9, 5, 8, 1, 7, 3,
    8, 5, 2, 7, 4, 1, 5, 6, 8, 4, 7, 9, 3, 5, 4, 9, 2, 3, 7, 6,
    1, 3, 4, 2, 5, 3, 6, 4, 5, 7, 10, 1, 4, 6, 7, 8, 10, 4, 3, 9,
    1, 6, 2, 4, 10, 7, 2, 6, 3, 10, 5, 9, 6, 10, 2, 1, 4, 8, 3, 2,
    10, 9, 8, 6, 1, 10, 8, 2, 6, 5, 10, 8, 3, 6, 9, 4, 10, 6, 7, 9,
    10, 3,
];

/// Splices random relabellings of `cycle` into random relabellings,
/// rotations and reflections of the base walks. Returns the number of pairs
/// tried and whether every invariant held.
fn splice_trials(n: usize, bases: &[&[Vertex]], cycle: &[Vertex], trials: usize, rng: &mut ChaCha8Rng) -> (usize, bool) {
    let host = Hypergraph::complete(n, 3).unwrap();
    let mut ok = true;
    let mut pairs = 0;
    for trial in 0..trials {
        let Some(base) = bases.get(trial % bases.len().max(1)) else {
            break;
        };
        let mut sigma: Vec<Vertex> = (1..=n as Vertex).collect();
        sigma.shuffle(rng);
        let map = |v: Vertex| sigma[v as usize - 1];
        let r = rng.gen_range(0..base.len());
        let mut walk: Vec<Vertex> = (0..base.len()).map(|i| map(base[(r + i) % base.len()])).collect();
        if rng.gen() {
            walk.reverse();
        }
        let w = Walk::closed(3, walk);
        let c = TightCycleCopy::new(3, cycle.iter().map(|&v| map(v)).collect()).unwrap();
        let cycle_edges: BTreeSet<Vec<Vertex>> = common::cyclic_windows(c.vertices(), 3).into_iter().collect();
        let walk_edges: BTreeSet<Vec<Vertex>> = common::cyclic_windows(w.vertices(), 3).into_iter().collect();
        // The generated pair itself must meet the premises.
        ok &= validate_walk(&host, &w).is_ok()
            && w.is_spanning(n, DEFAULT_SPANNING_CAP).unwrap().spanning
            && cycle_edges.is_disjoint(&walk_edges);
        let Ok(out) = insert_cycle(&w, &c) else {
            ok = false;
            continue;
        };
        let union: BTreeSet<Vec<Vertex>> = walk_edges.union(&cycle_edges).cloned().collect();
        let out_edges: BTreeSet<Vec<Vertex>> = common::cyclic_windows(out.vertices(), 3).into_iter().collect();
        ok &= validate_walk(&host, &out).is_ok()
            && out.is_closed()
            && out.is_spanning(n, DEFAULT_SPANNING_CAP).unwrap().spanning
            && out_edges == union
            && out.window_count() == w.window_count() + 6;
        pairs += 1;
    }
    (pairs, ok)
}

#[test]
fn criterion_09_splice_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cycle: Vec<Vertex> = vec![1, 3, 5, 7, 9, 2];
    let (pairs9, ok9) = splice_trials(9, K39_WALKS, &cycle, 100, &mut rng);
    let (pairs10, ok10) = splice_trials(10, &[K310_WALK], &cycle, 100, &mut rng);
    let pass = ok9 && pairs9 == 100;
    report(
        9,
        pass,
        &format!(
            "K(9,3): {pairs9}/100 pairs, invariants hold = {}; {} K(10,3) substitute: {pairs10}/100 pairs, invariants hold = {ok10}",
            ok9 && pairs9 > 0,
            if K39_WALKS.is_empty() { "no spanning closed walk with room for a disjoint 6-cycle is known on K(9,3);" } else { "" },
        ),
    );
    assert!(ok10 && pairs10 == 100);
    assert!(pass);
}

#[test]
fn criterion_10_brute_force_oracle_sanity() {
    let started = Instant::now();
    let levels = connected_graphs(8);
    let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
    // Connected graphs without isolated vertices, by edge count.
    let known = vec![1, 1, 3, 5, 12, 30, 79, 227];
    let mut agree = counts == known;
    let mut tours = 0;
    for adj in levels.iter().flatten() {
        let g = to_hypergraph(adj);
        let even = g.vertex_degrees().iter().all(|d| d % 2 == 0);
        match brute_force_euler_tour(&g, 60) {
            Ok(Some(w)) => {
                tours += 1;
                agree &= even && verify_tour(&g, &w).is_ok();
            }
            Ok(None) => agree &= !even,
            Err(_) => agree = false,
        }
    }
    let elapsed = started.elapsed();
    let pass = agree && elapsed < Duration::from_secs(60);
    report(
        10,
        pass,
        &format!(
            "{} graphs (per edge count {counts:?}), {tours} with tours, agreement with even degrees = {agree}; {elapsed:.2?}",
            counts.iter().sum::<usize>()
        ),
    );
    assert!(pass);
}

//! Acceptance suite. Runs every criterion, prints one line each, fails if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use distinguish::counting::{count_full_pie, count_mobius, count_structured, PlainWeight};
use distinguish::families::{self, connected_graphs, connected_graphs_up_to, random_connected, shuffled};
use distinguish::{
    blocks_and_cut_vertices, build_decomposition_tree, build_decomposition_tree_with, canonical_code, classify_group,
    count_disconnected, distinguishing_number, distinguishing_polynomial, find_dist, oracle_automorphisms,
    oracle_counts, triconnected_components_with, Context, Graph, PinnedGraph, TreeAnalysis, TriconnectOptions,
};
use num_bigint::{BigInt, BigUint};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in [5usize, 7, 11, 13] {
        let g = families::cycle(n);
        for k in 2..=5u64 {
            let h = BigInt::from(k).pow(((n - 1) / 2) as u32);
            let l = BigInt::from(k) * (&h - 1) * (&h - BigInt::from(n - 1));
            let r = find_dist(&g, k).map_err(|e| e.to_string())?;
            ensure(BigInt::from(r.l.clone()) == l, || format!("L(C{n},{k}) = {}, expected {l}", r.l))?;
            ensure(BigInt::from(r.d.clone()) * BigInt::from(2 * n) == l, || format!("D(C{n},{k}) = {}", r.d))?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("16 cycle values in {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let c5 = families::cycle(5);
    let d = |k| find_dist(&c5, k).map(|r| r.d).map_err(|e| e.to_string());
    ensure(d(3)? == big(12), || "D(C5,3) != 12".into())?;
    ensure(d(1)? == big(0) && d(2)? == big(0), || "D(C5,1) or D(C5,2) nonzero".into())?;
    let number = distinguishing_number(&c5).map_err(|e| e.to_string())?;
    ensure(number == 3, || format!("D(C5) = {number}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("C5 values in {:?}", start.elapsed()))
}

fn check_against_oracle(g: &Graph, ks: &[u64]) -> Result<(), String> {
    for &k in ks {
        let got = find_dist(g, k).map_err(|e| e.to_string())?;
        let want = oracle_counts(g, k, Context::Plain).map_err(|e| e.to_string())?;
        ensure(got.d == want.d && got.aut == big(want.aut_order as u64), || {
            format!("{} at k={k}: D {} vs oracle {}", g.to_graph6(), got.d, want.d)
        })?;
    }
    Ok(())
}

fn sample_seven() -> Vec<Graph> {
    let mut all = connected_graphs(7);
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(3));
    all.truncate(200);
    all
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let small = connected_graphs_up_to(6);
    ensure(small.len() == 1 + 1 + 2 + 6 + 21 + 112, || format!("{} graphs on at most 6 vertices", small.len()))?;
    for g in &small {
        check_against_oracle(g, &[1, 2, 3])?;
    }
    let seven = sample_seven();
    for g in &seven {
        check_against_oracle(g, &[2, 3])?;
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("{} graphs up to 6 vertices, {} on 7, in {:?}", small.len(), seven.len(), start.elapsed()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut pie_checks = 0;
    for g in connected_graphs_up_to(6).iter().chain(&sample_seven()) {
        let t = TreeAnalysis::new(g).map_err(|e| e.to_string())?;
        for (group, _) in t.component_groups() {
            if group.order() > 16 {
                continue;
            }
            for k in 1..=3 {
                let w = PlainWeight::new(group.degree(), k);
                let pie = count_full_pie(group, &w, 16).map_err(|e| e.to_string())?;
                let mobius = count_mobius(group, &w, 360).map_err(|e| e.to_string())?;
                ensure(pie == mobius, || format!("{}: full PIE {pie} vs Mobius {mobius}", g.to_graph6()))?;
                pie_checks += 1;
            }
        }
    }
    let mut hosts: Vec<Graph> = Vec::new();
    for n in 3..=12 {
        hosts.push(families::pendant_cycle(n, &[1]));
        hosts.push(families::pendant_cycle(n, &[2, 0]));
    }
    for t in 2..=8 {
        hosts.push(families::pendant_cycle(3 * t, &[0, 1, 2]));
    }
    for t in 3..=24 {
        hosts.push(families::chiral_cycle(t));
    }
    let mut structured = 0;
    let mut orders = BTreeSet::new();
    for g in &hosts {
        let t = TreeAnalysis::new(g).map_err(|e| e.to_string())?;
        for (group, _) in t.component_groups() {
            let profile = classify_group(group);
            if !profile.case.is_structured() || group.order() > 24 {
                continue;
            }
            for k in [2u64, 3, 5] {
                let w = PlainWeight::new(group.degree(), k);
                let s = count_structured(group, &profile, &w).map_err(|e| e.to_string())?;
                let m = count_mobius(group, &w, 360).map_err(|e| e.to_string())?;
                ensure(s == m, || {
                    format!("{:?} of order {}: structured {s} vs Mobius {m}", profile.case, group.order())
                })?;
                structured += 1;
            }
            orders.insert(format!("{:?}", profile.case));
        }
    }
    ensure(orders.iter().any(|c| c.starts_with("Cyclic")) && orders.iter().any(|c| c.starts_with("Dihedral")), || {
        format!("cases seen: {orders:?}")
    })?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{pie_checks} full PIE and {structured} structured comparisons ({} group shapes) in {:?}",
        orders.len(),
        start.elapsed()
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut found = 0;
    while found < 20 {
        let n = 6 + found % 3;
        let g = random_connected(n, 0.4, &mut rng);
        if oracle_automorphisms(&g, &[]).map_err(|e| e.to_string())?.len() != 1 {
            continue;
        }
        for k in [2u64, 3] {
            let d = find_dist(&g, k).map_err(|e| e.to_string())?.d;
            ensure(d == big(k).pow(n as u32), || format!("{}: D at k={k} is {d}", g.to_graph6()))?;
        }
        let number = distinguishing_number(&g).map_err(|e| e.to_string())?;
        ensure(number == 1, || format!("{}: D(G) = {number}", g.to_graph6()))?;
        found += 1;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("20 rigid graphs in {:?}", start.elapsed()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let graphs = connected_graphs_up_to(6);
    for g in &graphs {
        let p = distinguishing_polynomial(g).map_err(|e| e.to_string())?;
        let id = g.to_graph6();
        ensure(p.degree() == g.n(), || format!("{id}: degree {}", p.degree()))?;
        ensure(p.coeffs()[0] == BigInt::from(0).into(), || format!("{id}: constant term {}", p.coeffs()[0]))?;
        let aut = find_dist(g, 1).map_err(|e| e.to_string())?.aut;
        let zero_sum = p.coefficient_sum() == BigInt::from(0).into();
        ensure(zero_sum == (aut > big(1)), || {
            format!("{id}: coefficient sum {} with |Aut| {aut}", p.coefficient_sum())
        })?;
        for k in [7u64, 8] {
            let direct = find_dist(g, k).map_err(|e| e.to_string())?.d;
            let value = p.eval(&BigInt::from(k));
            ensure(value == BigInt::from(direct.clone()).into(), || format!("{id}: p({k}) = {value}, D = {direct}"))?;
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{} polynomials in {:?}", graphs.len(), start.elapsed()))
}

fn component_multiset(block: &distinguish::MultiGraph, seed: u64) -> Result<Vec<String>, String> {
    let tc = triconnected_components_with(block, TriconnectOptions { seed: Some(seed) }).map_err(|e| e.to_string())?;
    let mut out: Vec<String> = tc
        .components
        .iter()
        .map(|c| format!("{:?}:{:?}", c.kind, canonical_code(&PinnedGraph::new(c.graph.clone()))))
        .collect();
    out.sort();
    Ok(out)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let graphs = connected_graphs_up_to(7);
    let mut blocks_checked = 0;
    for g in &graphs {
        let id = g.to_graph6();
        let bd = blocks_and_cut_vertices(g).map_err(|e| e.to_string())?;
        for block in &bd.blocks {
            if block.m() < 3 {
                // a single edge is never split
                continue;
            }
            let tc =
                triconnected_components_with(block, TriconnectOptions { seed: Some(11) }).map_err(|e| e.to_string())?;
            let total = tc.split_edge_total();
            ensure(total <= 3 * block.m() - 6, || format!("{id}: split total {total} for {} edges", block.m()))?;
            let a = component_multiset(block, 11)?;
            let b = component_multiset(block, 12)?;
            ensure(a == b, || format!("{id}: split orders disagree"))?;
            blocks_checked += 1;
        }
        let tree = build_decomposition_tree(g).map_err(|e| e.to_string())?;
        let seeded =
            build_decomposition_tree_with(g, TriconnectOptions { seed: Some(99) }).map_err(|e| e.to_string())?;
        let root: BTreeSet<usize> = tree.node(tree.root).bag().into_iter().collect();
        let root_seeded: BTreeSet<usize> = seeded.node(seeded.root).bag().into_iter().collect();
        ensure(root == root_seeded, || format!("{id}: root depends on the split order"))?;
        for p in oracle_automorphisms(g, &[]).map_err(|e| e.to_string())? {
            let image: BTreeSet<usize> = root.iter().map(|&v| p.apply(v)).collect();
            ensure(image == root, || format!("{id}: an automorphism moves the root {root:?}"))?;
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{} graphs, {blocks_checked} split blocks in {:?}", graphs.len(), start.elapsed()))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let bases = [("K2", families::complete(2)), ("P3", families::path(3)), ("C3", families::cycle(3))];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (name, base) in &bases {
        for alpha in [2usize, 3] {
            let mut g = base.clone();
            for _ in 1..alpha {
                g = g.disjoint_union(base);
            }
            let g = shuffled(&g, &mut rng);
            for k in 1..=3u64 {
                let got = count_disconnected(&g, k).map_err(|e| e.to_string())?;
                let want = oracle_counts(&g, k, Context::Plain).map_err(|e| e.to_string())?;
                ensure(got.d == want.d && got.l == want.l, || {
                    format!("{alpha} x {name} at k={k}: D {} vs oracle {}", got.d, want.d)
                })?;
            }
            let expected = (1u64..)
                .find(|&k| find_dist(base, k).map(|r| r.d >= big(alpha as u64)).unwrap_or(false))
                .expect("some k works");
            let number = distinguishing_number(&g).map_err(|e| e.to_string())?;
            ensure(number == expected, || format!("D({alpha} x {name}) = {number}, expected {expected}"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("6 disjoint unions in {:?}", start.elapsed()))
}

fn child_max_rss_kb() -> i64 {
    let mut usage = std::mem::MaybeUninit::<libc::rusage>::zeroed();
    // SAFETY: getrusage only writes into the provided struct.
    let usage = unsafe {
        libc::getrusage(libc::RUSAGE_CHILDREN, usage.as_mut_ptr());
        usage.assume_init()
    };
    usage.ru_maxrss
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let dir = std::env::temp_dir().join(format!("dist-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for (name, g) in [("wheel", families::wheel(2000)), ("sp", families::sp_chain_with_n(2000))] {
        let path = dir.join(format!("{name}.txt"));
        std::fs::write(&path, g.to_edge_list()).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_dist"))
            .args(["compute", path.to_str().expect("utf-8 temp path"), "--k", "10"])
            .output()
            .map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        ensure(out.status.success(), || {
            format!("{name}: exit {:?}: {}", out.status, String::from_utf8_lossy(&out.stdout))
        })?;
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let d = json["D"].as_str().ok_or("missing D")?;
        ensure(d.len() > 1000, || format!("{name}: D has only {} digits", d.len()))?;
        ensure(elapsed < Duration::from_secs(60), || format!("{name}: {elapsed:?}"))?;
        lines.push(format!("{name} n={} {:?}", g.n(), elapsed));
    }
    let _ = std::fs::remove_dir_all(&dir);
    let rss_mb = child_max_rss_kb() / 1024;
    ensure(rss_mb < 1024, || format!("peak child memory {rss_mb} MB"))?;
    Ok(format!("{}, peak {rss_mb} MB, total {:?}", lines.join(", "), start.elapsed()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("cycle closed form", criterion_1),
        ("C5 point values", criterion_2),
        ("oracle equivalence", criterion_3),
        ("engine cross-check", criterion_4),
        ("rigid graphs", criterion_5),
        ("polynomial properties", criterion_6),
        ("decomposition validity", criterion_7),
        ("disconnected assembly", criterion_8),
        ("scaling smoke test", criterion_9),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {id} ({name}): PASS - {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL - {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

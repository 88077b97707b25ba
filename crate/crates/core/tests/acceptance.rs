//! Acceptance suite. Prints one `PASS` or `FAIL` line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Run a subset by number: `cargo test -p netbone --test acceptance -- 3 9`.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netbone::baselines::{disparity_filter_top_e, disparity_pvalue, high_salience_skeleton, percolation_backbone, SalienceOptions};
use netbone::graph::{parse_edge_list, Adjacency, Backbone, ParseOptions, WeightedGraph};
use netbone::metrics::jaccard_similarity;
use netbone::objective::{dl_geometric, dl_micro, ObjectiveSpec, Scope, WeightModel};
use netbone::percolation::{critical_probability, message_passing_cluster, Init, MessageOptions, ThresholdOptions};
use netbone::solver::{enumerate_optimal, greedy_global, greedy_local, greedy_order};
use netbone::synth::{dirichlet_multinomial_weights, planted_instance};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn micro_global() -> ObjectiveSpec {
    ObjectiveSpec::global(WeightModel::Microcanonical)
}

fn micro_local() -> ObjectiveSpec {
    ObjectiveSpec::local(WeightModel::Microcanonical)
}

/// Directed graph without self-loops: `2..=6` nodes, up to 12 edges,
/// integer weights in `[1, 10]`.
fn small_random_graph(seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=6usize);
    let pairs: Vec<(u32, u32)> =
        (0..n as u32).flat_map(|a| (0..n as u32).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let e = rng.random_range(1..=pairs.len().min(12));
    let edges: Vec<(u32, u32, f64)> = sample(&mut rng, pairs.len(), e)
        .into_iter()
        .map(|i| (pairs[i].0, pairs[i].1, rng.random_range(1..=10u32) as f64))
        .collect();
    WeightedGraph::from_edges(n, edges, true).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let specs = [
        micro_global(),
        micro_local(),
        ObjectiveSpec::global(WeightModel::Geometric),
        ObjectiveSpec::local(WeightModel::Geometric),
        ObjectiveSpec::global(WeightModel::Poisson { lambda: 1.0 }),
    ];
    let mut worst = 0.0f64;
    let mut checked = 0;
    for seed in 0..200 {
        let g = small_random_graph(seed);
        for spec in specs {
            let greedy = match spec.scope {
                Scope::Global => greedy_global(&g, spec),
                Scope::Local => greedy_local(&g, spec),
            }
            .unwrap();
            let exact = enumerate_optimal(&g, spec).unwrap();
            worst = worst.max((greedy.dl - exact.dl).abs());
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-9 && secs < 60.0,
        format!("{checked} graph/objective pairs, max |greedy - exact| = {worst:.2e} bits, {secs:.1} s"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let e: u64 = rng.random_range(1..=60);
        let w: u64 = e + rng.random_range(0..=300);
        let e_b: u64 = rng.random_range(0..=e);
        let w_b: u64 = match e_b {
            0 => 0,
            b if b == e => w,
            b => rng.random_range(b..=w - (e - b)),
        };
        let (ef, wf, ebf, wbf) = (e as f64, w as f64, e_b as f64, w_b as f64);
        let delta = if e_b == 0 || e_b == e {
            ((wf + 1.0) * wf / ((wf - ef + 1.0) * ef)).log2()
        } else {
            ((wbf + 1.0) * (wf - wbf + 1.0) * wbf * (wf - wbf) / ((wf - ef + 1.0) * ebf * (ef - ebf))).log2()
        };
        let gap = dl_geometric(e, w, e_b, w_b).unwrap() - dl_micro(e, w, e_b, w_b).unwrap();
        worst = worst.max((gap - delta).abs());
    }
    outcome(worst <= 1e-9, format!("10^4 tuples, max |gap - delta| = {worst:.2e} bits"))
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Ordered ways to write `total` as `parts` positive integers.
fn compositions(total: u64, parts: u64) -> u128 {
    match (total, parts) {
        (0, 0) => 1,
        (_, 0) | (0, _) => 0,
        _ => binomial(total - 1, parts - 1),
    }
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_at = (0, 0);
    for e in 1..=3u64 {
        for w in e..=6u64 {
            let mut total = 0.0;
            for e_b in 0..=e {
                for w_b in 0..=w {
                    let count = binomial(e, e_b) * compositions(w_b, e_b) * compositions(w - w_b, e - e_b);
                    if count > 0 {
                        total += count as f64 * (-dl_micro(e, w, e_b, w_b).unwrap()).exp2();
                    }
                }
            }
            if (total - 1.0).abs() > worst {
                worst = (total - 1.0).abs();
                worst_at = (e, w);
            }
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max |sum 2^-DL - 1| = {worst:.4} at (E, W) = {worst_at:?}"),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mean_jaccard = |gamma: f64| -> f64 {
        let total: f64 = (0..20)
            .map(|seed| {
                let inst = planted_instance(100, 100, gamma, Scope::Global, seed).unwrap();
                let found = greedy_global(&inst.graph, micro_global()).unwrap();
                jaccard_similarity(&inst.planted, &found.backbone).unwrap()
            })
            .sum();
        total / 20.0
    };
    let strong = mean_jaccard(1e-3);
    let none = mean_jaccard(1.0);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        strong >= 0.95 && none <= 0.10 && secs < 120.0,
        format!("mean Jaccard {strong:.4} at gamma=1e-3, {none:.4} at gamma=1, {secs:.1} s"),
    )
}

/// `P(X >= successes)` for `X ~ Binomial(trials, 1/2)`.
fn sign_test_p(successes: u64, trials: u64) -> f64 {
    (successes..=trials).map(|i| binomial(trials, i) as f64).sum::<f64>() / 2f64.powi(trials as i32)
}

fn criterion_5() -> Outcome {
    let (n, k, gamma) = (100, 20, 1e-2);
    let etas = |scope: Scope| -> Vec<(f64, f64)> {
        (0..20)
            .map(|seed| {
                let inst = planted_instance(n, k, gamma, scope, 500 + seed).unwrap();
                let g = greedy_global(&inst.graph, micro_global()).unwrap().eta;
                let l = greedy_local(&inst.graph, micro_local()).unwrap().eta;
                (g, l)
            })
            .collect()
    };
    let summary = |pairs: &[(f64, f64)], global_wins: bool| -> (bool, String) {
        let wins = pairs.iter().filter(|(g, l)| if global_wins { g < l } else { l < g }).count() as u64;
        let p = sign_test_p(wins, pairs.len() as u64);
        let mean_g = pairs.iter().map(|x| x.0).sum::<f64>() / pairs.len() as f64;
        let mean_l = pairs.iter().map(|x| x.1).sum::<f64>() / pairs.len() as f64;
        let ordered = if global_wins { mean_g <= mean_l } else { mean_l <= mean_g };
        (ordered && p <= 0.05, format!("mean eta global {mean_g:.4} local {mean_l:.4}, {wins}/20 (p = {p:.4})"))
    };
    let (ok_g, text_g) = summary(&etas(Scope::Global), true);
    let (ok_l, text_l) = summary(&etas(Scope::Local), false);
    outcome(
        ok_g && ok_l,
        format!("N={n} k={k} gamma={gamma}; planted global: {text_g}; planted local: {text_l}"),
    )
}

fn criterion_6() -> Outcome {
    let fraction = |h_neig: f64| -> f64 {
        let seeds = [61u64, 62, 63];
        let total: f64 = seeds
            .iter()
            .map(|&seed| {
                let inst = dirichlet_multinomial_weights(1000, 50, 1_000_000, 0.1, h_neig, seed).unwrap();
                let r = greedy_local(&inst.graph, micro_local()).unwrap();
                r.backbone.edge_count() as f64 / inst.graph.num_edges() as f64
            })
            .sum();
        total / seeds.len() as f64
    };
    let heterogeneous = fraction(0.1);
    let homogeneous = fraction(10.0);
    outcome(
        homogeneous <= 0.2 * heterogeneous,
        format!("local edge fraction {heterogeneous:.4} at h_neig=0.1, {homogeneous:.4} at h_neig=10"),
    )
}

/// Checks `W_b / E_b >= (W - W_b) / (E - E_b)` for every prefix of
/// `weights` (heaviest first) in exact integer arithmetic.
fn mean_weight_holds(weights: &[u64]) -> bool {
    let e = weights.len() as u128;
    let w: u128 = weights.iter().map(|&x| x as u128).sum();
    let mut w_b = 0u128;
    for (i, &x) in weights.iter().enumerate() {
        w_b += x as u128;
        let e_b = i as u128 + 1;
        if w_b * (e - e_b) < (w - w_b) * e_b {
            return false;
        }
    }
    true
}

fn criterion_7() -> Outcome {
    let mut graphs: Vec<WeightedGraph> = (0..200).map(small_random_graph).collect();
    for seed in 0..5 {
        graphs.push(planted_instance(100, 20, 1e-2, Scope::Global, seed).unwrap().graph);
        graphs.push(planted_instance(100, 20, 1e-2, Scope::Local, seed).unwrap().graph);
        graphs.push(dirichlet_multinomial_weights(200, 10, 200_000, 0.1, 0.1, seed).unwrap().graph);
    }
    let mut steps = 0usize;
    let mut violations = 0usize;
    for g in &graphs {
        let global: Vec<u64> = greedy_order(g).into_iter().map(|i| g.edge(i).weight as u64).collect();
        steps += global.len();
        violations += !mean_weight_holds(&global) as usize;
        let adj = Adjacency::new(g);
        for view in adj.iter() {
            // Arcs come sorted heaviest first.
            let local: Vec<u64> = view.arcs.iter().map(|a| a.weight as u64).collect();
            steps += local.len();
            violations += !mean_weight_holds(&local) as usize;
        }
    }
    outcome(
        violations == 0,
        format!("{} instances, {steps} greedy steps, {violations} violating sequences", graphs.len()),
    )
}

fn undirected(text: &str) -> WeightedGraph {
    parse_edge_list(text, ParseOptions::undirected()).unwrap()
}

fn criterion_8() -> Outcome {
    let k4 = undirected("a b 1\na c 1\na d 1\nb c 1\nb d 1\nc d 1");
    let p_c = critical_probability(&k4, &ThresholdOptions::default()).unwrap().p_crit;
    let s = message_passing_cluster(&k4, 0.8, Init::Random { seed: 8 }, &MessageOptions::default()).unwrap().s;
    let trees = [undirected("a b 3\nb c 1\nb d 2\nd e 5"), undirected("a b 1\nb c 1\nc d 1\nc e 1\ne f 7")];
    let mut tree_ok = true;
    for tree in &trees {
        tree_ok &= critical_probability(tree, &ThresholdOptions::default()).unwrap().p_crit.is_none();
        for p in [0.05, 0.5, 0.95, 1.0] {
            let est = message_passing_cluster(tree, p, Init::Random { seed: 9 }, &MessageOptions::default()).unwrap();
            tree_ok &= est.s.abs() < 1e-12;
        }
    }
    let pc_ok = p_c.is_some_and(|p| (p - 0.5).abs() <= 1e-6);
    outcome(
        pc_ok && (s - 0.984375).abs() <= 1e-6 && tree_ok,
        format!("K4 p_c = {p_c:?}, S(0.8) = {s:.9}, trees S = 0 and no threshold: {tree_ok}"),
    )
}

fn contact_graph() -> WeightedGraph {
    undirected(include_str!("../data/contact_graph.tsv"))
}

fn criterion_9() -> Outcome {
    let g = contact_graph();
    let global = greedy_global(&g, micro_global()).unwrap().backbone;
    let local = greedy_local(&g, micro_local()).unwrap().backbone;
    let top_e = disparity_filter_top_e(&g, local.edge_count()).unwrap();
    let options = ThresholdOptions::default();
    let full = critical_probability(&g, &options).unwrap();
    let Some(p0) = full.p_crit else {
        return outcome(false, "full graph has no threshold".into());
    };
    let mut pass = true;
    let mut parts = vec![format!("full p_c = {p0:.7} (E = {})", g.num_edges())];
    for (name, bb) in [("mdl-global", global), ("mdl-local", local), ("disparity-topE", top_e)] {
        let search = critical_probability(&g.subgraph(&bb), &options).unwrap();
        let ratio = search.seconds_per_evaluation / full.seconds_per_evaluation;
        let err = search.p_crit.map(|p| (p - p0).abs());
        pass &= err.is_some_and(|e| e <= 1e-3) && ratio < 0.5;
        let err = err.map_or("none".to_string(), |e| format!("{e:.2e}"));
        parts.push(format!("{name}: E_b = {}, |dp_c| = {err}, time ratio {ratio:.3}", bb.edge_count()));
    }
    outcome(pass, parts.join("; "))
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn criterion_10() -> Outcome {
    // One worker thread so the timings measure work, not parallel speedup.
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let sizes = [1_000usize, 10_000, 100_000, 1_000_000];
    let (mut log_n, mut log_global, mut log_local) = (Vec::new(), Vec::new(), Vec::new());
    for &n in &sizes {
        let g = dirichlet_multinomial_weights(n, 10, 1000 * n as u64, 0.1, 0.1, 10).unwrap().graph;
        let repeats = (100_000 / n).clamp(1, 20);
        let time = |f: &dyn Fn()| -> f64 {
            (0..repeats)
                .map(|_| {
                    let start = Instant::now();
                    f();
                    start.elapsed().as_secs_f64()
                })
                .fold(f64::INFINITY, f64::min)
        };
        let (tg, tl) = pool.install(|| {
            (
                time(&|| drop(greedy_global(&g, micro_global()).unwrap())),
                time(&|| drop(greedy_local(&g, micro_local()).unwrap())),
            )
        });
        log_n.push((n as f64).log10());
        log_global.push(tg.log10());
        log_local.push(tl.log10());
    }
    let (bg, bl) = (slope(&log_n, &log_global), slope(&log_n, &log_local));
    let ok = |b: f64| (0.9..=1.3).contains(&b);
    let secs = |v: &[f64]| v.iter().map(|x| format!("{:.3}", 10f64.powf(*x))).collect::<Vec<_>>().join("/");
    outcome(
        ok(bg) && ok(bl),
        format!(
            "slopes global {bg:.3}, local {bl:.3}; seconds global {} local {} for N = 1e3..1e6",
            secs(&log_global),
            secs(&log_local)
        ),
    )
}

/// Weak components among the nodes a backbone touches, by breadth-first
/// search over an undirected neighbor list.
fn touched_components(g: &WeightedGraph, bb: &Backbone) -> usize {
    let mut neighbors: HashMap<u32, Vec<u32>> = HashMap::new();
    for i in bb.edge_indices() {
        let e = g.edge(i);
        neighbors.entry(e.src).or_default().push(e.dst);
        neighbors.entry(e.dst).or_default().push(e.src);
    }
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    let mut nodes: Vec<u32> = neighbors.keys().copied().collect();
    nodes.sort_unstable();
    for start in nodes {
        if !seen.insert(start) {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &neighbors[&v] {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
    }
    count
}

/// `p = integral from w/s to 1 of (k-1)(1-x)^(k-2) dx`, by composite
/// Simpson quadrature.
fn disparity_quadrature(w: f64, s: f64, k: u64) -> f64 {
    let (a, b) = (w / s, 1.0);
    let steps = 4000;
    let h = (b - a) / steps as f64;
    let f = |x: f64| (k - 1) as f64 * (1.0 - x).max(0.0).powi(k as i32 - 2);
    let mut sum = f(a) + f(b);
    for i in 1..steps {
        sum += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

fn criterion_11() -> Outcome {
    // Percolation backbone on connected inputs.
    let mut connected: Vec<WeightedGraph> = vec![contact_graph()];
    for seed in 0..10 {
        connected.push(dirichlet_multinomial_weights(300, 6, 30_000, 0.1, 0.1, seed).unwrap().graph);
        connected.push(planted_instance(60, 8, 0.05, Scope::Global, seed).unwrap().graph);
    }
    let mut single = 0;
    for g in &connected {
        let full = touched_components(g, &Backbone::full(g));
        let bb = percolation_backbone(g);
        let all_touched = bb.non_isolated(g) == g.non_isolated();
        single += (full == 1 && touched_components(g, &bb) == 1 && all_touched) as usize;
    }

    let triangle = undirected("a b 3\nb c 3\na c 1");
    let (hss, _) = high_salience_skeleton(&triangle, &SalienceOptions::default()).unwrap();
    let dropped: Vec<f64> = (0..triangle.num_edges()).filter(|&i| !hss.contains(i)).map(|i| triangle.edge(i).weight).collect();
    let hss_ok = dropped == [1.0];

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let k: u64 = rng.random_range(2..=40);
        let s: f64 = rng.random_range(1.0..1000.0);
        let w: f64 = rng.random_range(1e-3..=1.0) * s;
        let exact = disparity_pvalue(w, s, k).unwrap();
        worst = worst.max((exact - disparity_quadrature(w, s, k)).abs());
    }
    outcome(
        single == connected.len() && hss_ok && worst <= 1e-8,
        format!(
            "percolation backbone single component on {single}/{} graphs; HSS triangle drops {dropped:?}; disparity max |closed - quadrature| = {worst:.2e}",
            connected.len()
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "greedy matches exhaustive enumeration", criterion_1),
        (2, "canonical-geometric vs microcanonical identity", criterion_2),
        (3, "microcanonical normalization", criterion_3),
        (4, "planted backbone recovery", criterion_4),
        (5, "compression ordering by planted scope", criterion_5),
        (6, "local backbone collapse under homogeneous neighborhoods", criterion_6),
        (7, "mean-weight invariant along greedy steps", criterion_7),
        (8, "percolation closed forms", criterion_8),
        (9, "percolation threshold preserved by backbones", criterion_9),
        (10, "near-linear runtime scaling", criterion_10),
        (11, "baseline sanity", criterion_11),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (number, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&number) {
            continue;
        }
        let result = run();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {number:>2} ({name}): {}", result.detail);
        failures += !result.pass as usize;
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! run with `--nocapture` to see them.

mod common;

use std::time::{Duration, Instant};

use fusion_rank::cli::{run, EXIT_OK};
use fusion_rank::closed_form::{closed_rank, closed_value, gregoire_rank, sum_clutch, sum_tails};
use fusion_rank::fusion::{builtin_g2_level1, validate, FusionData};
use fusion_rank::graph_oracle::{count_noleaf_subgraphs, moebius_ladder};
use fusion_rank::qfield::{fib, Q5};
use fusion_rank::rank_engine::oracle::rank_bruteforce;
use fusion_rank::rank_engine::{fig_a_graph, fig_b_graph, repeated, DualGraph, RankEngine};
use fusion_rank::verlinde_numeric::{calibrate_exponent, verlinde_trig_rank, ExponentVariant, CALIBRATION_TOLERANCE};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

fn grid_agreement() -> Check {
    let start = Instant::now();
    for g in 2..=50 {
        for n in 0..=50 {
            let closed = closed_rank(g, n).map_err(|e| e.to_string())?;
            let clutch = sum_clutch(g, n);
            let tails = sum_tails(g, n);
            if clutch != closed || tails != closed {
                return Err(format!("(g, n) = ({g}, {n}): {clutch} / {closed} / {tails}"));
            }
        }
    }
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("49 x 51 cells agree exactly in {took:.2?}"))
}

fn sqrt5_cancels() -> Check {
    for g in 2..=50 {
        for n in 0..=50 {
            let v = closed_value(g, n);
            if !v.is_rational() {
                return Err(format!("(g, n) = ({g}, {n}) has sqrt5 part {}", v.sqrt5_part()));
            }
        }
    }
    Ok("sqrt5 component is 0 on every cell".into())
}

fn point_values() -> Check {
    let g2 = builtin_g2_level1();
    let engine = RankEngine::new(&g2).map_err(|e| e.to_string())?;
    let r_mu = engine.rank_smooth(1, &repeated("mu", 1)).map_err(|e| e.to_string())?;
    let r_0 = engine.rank_smooth(1, &repeated("0", 1)).map_err(|e| e.to_string())?;
    if (r_mu.clone(), r_0.clone()) != (1u32.into(), 2u32.into()) {
        return Err(format!("genus 1: (mu) -> {r_mu}, (0) -> {r_0}"));
    }
    for m in 3..=25usize {
        let r = engine.rank_genus0(&repeated("mu", m)).map_err(|e| e.to_string())?;
        if BigInt::from(r.clone()) != fib(m as i64 - 1) {
            return Err(format!("genus 0, mu^{m}: {r}"));
        }
    }
    Ok("genus-1 values 1 and 2; mu^m = F(m-1) for m = 3..25".into())
}

fn figure_graphs() -> Vec<(String, DualGraph, u32, u32)> {
    let mut out = Vec::new();
    for g in 1..=5u32 {
        for n in 0..=4u32 {
            if let Ok(graph) = fig_a_graph(g, n as usize) {
                out.push((format!("fig a ({g}, {n})"), graph, g, n));
            }
            if let Ok(graph) = fig_b_graph(g, n as usize) {
                out.push((format!("fig b ({g}, {n})"), graph, g, n));
            }
        }
    }
    out
}

fn degeneration() -> Check {
    let start = Instant::now();
    let g2 = builtin_g2_level1();
    let engine = RankEngine::new(&g2).map_err(|e| e.to_string())?;
    let figures = figure_graphs();
    for (name, graph, g, n) in &figures {
        let rank = engine.rank_graph(graph).map_err(|e| format!("{name}: {e}"))?;
        let closed = closed_rank(*g, *n).map_err(|e| e.to_string())?;
        if BigInt::from(rank.clone()) != closed {
            return Err(format!("{name}: graph {rank}, closed {closed}"));
        }
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("{} figure graphs match the closed form in {took:.2?}", figures.len()))
}

fn oracle_equivalence() -> Check {
    let g2 = builtin_g2_level1();
    let engine = RankEngine::new(&g2).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut graphs: Vec<(String, DualGraph)> = (0..50)
        .map(|i| (format!("random #{i}"), common::random_stable_graph(&g2, 4, 6, 14, &mut rng)))
        .collect();
    graphs.extend(figure_graphs().into_iter().map(|(name, graph, _, _)| (name, graph)));
    let mut mismatches = Vec::new();
    for (name, graph) in &graphs {
        let fast = engine.rank_graph(graph).map_err(|e| format!("{name}: {e}"))?;
        let slow = rank_bruteforce(&g2, graph).map_err(|e| format!("{name}: {e}"))?;
        if fast != slow {
            mismatches.push(format!("{name}: {fast} vs {slow}"));
        }
    }
    if mismatches.is_empty() {
        Ok(format!("{} graphs, 0 mismatches", graphs.len()))
    } else {
        Err(mismatches.join("; "))
    }
}

fn moebius_remark() -> Check {
    let start = Instant::now();
    let mut values = Vec::new();
    for k in 2..=7u32 {
        let graph = moebius_ladder(k).map_err(|e| e.to_string())?;
        let count = BigInt::from(count_noleaf_subgraphs(&graph).map_err(|e| e.to_string())?);
        let closed = closed_rank(k + 1, 0).map_err(|e| e.to_string())?;
        if count != closed {
            return Err(format!("k = {k}: count {count}, closed {closed}"));
        }
        if k == 2 && count != BigInt::from(15) {
            return Err(format!("k = 2 gives {count}"));
        }
        values.push(count.to_string());
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("counts {} match in {took:.2?}", values.join(", ")))
}

fn verlinde_calibration() -> Check {
    let mut matching = Vec::new();
    for variant in ExponentVariant::ALL {
        let mut all = true;
        for g in 2..=6 {
            let exact = gregoire_rank(g).map_err(|e| e.to_string())?;
            let v = verlinde_trig_rank(g, 1, variant).map_err(|e| e.to_string())?;
            if v.relative_error(&exact) >= CALIBRATION_TOLERANCE {
                all = false;
            }
        }
        if all {
            matching.push(variant);
        }
    }
    if matching.len() != 1 {
        return Err(format!("{} variants match", matching.len()));
    }
    let chosen = calibrate_exponent().map_err(|e| e.to_string())?;
    if chosen != matching[0] {
        return Err("calibration disagrees with direct scan".into());
    }
    let mut worst = 0.0f64;
    for g in 1..=10 {
        let exact = gregoire_rank(g).map_err(|e| e.to_string())?;
        let err = verlinde_trig_rank(g, 1, chosen).map_err(|e| e.to_string())?.relative_error(&exact);
        if err.is_nan() || err >= 1e-6 {
            return Err(format!("g = {g}: relative error {err:e}"));
        }
        worst = worst.max(err);
    }
    Ok(format!("only '{}' matches; worst relative error {worst:e} for g = 1..10", chosen.name()))
}

fn binet() -> Check {
    let sqrt5 = Q5::sqrt5();
    for k in -300i64..=300 {
        let phi_k = Q5::phi().pow(k).map_err(|e| e.to_string())?;
        let bar_k = Q5::phi_bar().pow(k).map_err(|e| e.to_string())?;
        let value = (&phi_k - &bar_k).checked_div(&sqrt5).map_err(|e| e.to_string())?;
        if value.to_integer().ok() != Some(fib(k)) {
            return Err(format!("k = {k}"));
        }
    }
    Ok("601 indices agree".into())
}

fn fusion_validation() -> Check {
    let g2 = builtin_g2_level1();
    let report = validate(&g2);
    if !report.passed() {
        return Err(format!("builtin ring: {report}"));
    }
    let k = g2.len();
    let mut quadruples = 0;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    let left: i64 = (0..k).map(|e| g2.n3(a, b, g2.dual(e)) * g2.n3(e, c, g2.dual(d))).sum();
                    let right: i64 = (0..k).map(|e| g2.n3(b, c, g2.dual(e)) * g2.n3(a, e, g2.dual(d))).sum();
                    if left != right {
                        return Err(format!("associativity fails at {:?}", (a, b, c, d)));
                    }
                    quadruples += 1;
                }
            }
        }
    }

    let not_involution = FusionData::new(
        ["0", "a", "b"],
        "0",
        [("0", "0"), ("a", "b"), ("b", "b")],
        [(["0", "0", "0"], 1), (["0", "a", "b"], 1), (["0", "b", "b"], 1)],
    );
    let vacuum_rule = FusionData::new(
        ["0", "mu"],
        "0",
        [("0", "0"), ("mu", "mu")],
        [(["0", "0", "0"], 1), (["mu", "mu", "mu"], 1)],
    );
    // a⊗a = 0 + b and b⊗b = 0 + a cannot be associative.
    let not_associative = FusionData::new(
        ["0", "a", "b"],
        "0",
        [("0", "0"), ("a", "a"), ("b", "b")],
        [
            (["0", "0", "0"], 1),
            (["0", "a", "a"], 1),
            (["0", "b", "b"], 1),
            (["a", "a", "b"], 1),
            (["a", "b", "b"], 1),
        ],
    );
    let cases = [
        ("dual-involution", not_involution),
        ("vacuum-rule", vacuum_rule),
        ("associativity", not_associative),
    ];
    for (kind, ring) in cases {
        let ring = ring.map_err(|e| format!("{kind}: {e}"))?;
        let report = validate(&ring);
        if report.passed() || !report.has(kind) {
            return Err(format!("expected {kind}, got: {report}"));
        }
        if RankEngine::new(&ring).is_ok() {
            return Err(format!("engine accepted a ring violating {kind}"));
        }
    }
    Ok(format!("builtin valid ({quadruples} associativity quadruples); 3 invalid rings named correctly"))
}

fn cli_contract() -> Check {
    let args = |jobs: &'static str| ["fusion-rank", "--jobs", jobs, "verify", "--g", "2..10", "--n", "0..10"];
    let one = run(args("1"));
    let eight = run(args("8"));
    if one.code != EXIT_OK {
        return Err(format!("exit {}: {}", one.code, one.stderr));
    }
    if one != eight {
        return Err("outputs differ between --jobs 1 and --jobs 8".into());
    }
    let rows: Vec<&str> = one.stdout.lines().skip(1).collect();
    if rows.len() != 99 || !rows.iter().all(|r| r.ends_with(" true")) {
        return Err(format!("{} rows, not all agreeing", rows.len()));
    }
    Ok("exit 0, 99 agreeing rows, identical for --jobs 1 and 8".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("exact agreement on the g 2..50, n 0..50 grid", grid_agreement),
        ("sqrt5 cancellation", sqrt5_cancels),
        ("point values", point_values),
        ("degeneration consistency", degeneration),
        ("oracle equivalence", oracle_equivalence),
        ("Moebius ladder counts", moebius_remark),
        ("trigonometric sum calibration", verlinde_calibration),
        ("Binet identity", binet),
        ("fusion validation", fusion_validation),
        ("CLI contract", cli_contract),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                println!("[FAIL] criterion {}: {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

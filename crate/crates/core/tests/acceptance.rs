//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the terminal.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use clique_msf::cli::{metrics_rows, render_metrics};
use clique_msf::clique::{Engine, MessageWord, RoundOutbox, RoutingMode, SimError};
use clique_msf::graph::{gen_graph, kruskal, msf_oracle, Graph, Model};
use clique_msf::sparsify::{mst, mst_iterations, sparsify, SparsifyResult, AMPLIFY_ROUND_BOUND};
use num_bigint::BigUint;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(g: &Graph, k: u32, mode: RoutingMode) -> Result<SparsifyResult, String> {
    sparsify(g, k, mode).map_err(|e| format!("sparsify(n={}, k={k}): {e}", g.n()))
}

/// `edges <= c * n^(1 + 1/2^k)`, compared exactly as
/// `edges^(2^k) <= c^(2^k) * n^(2^k + 1)`.
fn within_bound(edges: usize, n: usize, k: u32, c: u32) -> bool {
    let q = 1u32 << k;
    BigUint::from(edges).pow(q) <= BigUint::from(c).pow(q) * BigUint::from(n).pow(q + 1)
}

fn c1_preservation() -> Outcome {
    let models = [
        ("gnp0.1", Model::Gnp(0.1)),
        ("gnp0.5", Model::Gnp(0.5)),
        ("gnp0.9", Model::Gnp(0.9)),
        ("gnm4n", Model::Gnm(0)),
        ("forest", Model::Forest(3)),
    ];
    let mut graphs = 0;
    let mut runs = 0;
    for n in [16usize, 64, 256] {
        for (name, model) in models {
            let model = match model {
                Model::Gnm(_) => Model::Gnm(4 * n),
                m => m,
            };
            for seed in 0..14u64 {
                let g = gen_graph(n, model, 1000 * n as u64 + seed).map_err(|e| e.to_string())?;
                let want = msf_oracle(&g);
                graphs += 1;
                for k in 1..=3 {
                    let r = run(&g, k, RoutingMode::Charged)?;
                    ensure(kruskal(&r.edges) == want.edges(), || {
                        format!("n={n} {name} seed={seed} k={k}: forest changed")
                    })?;
                    runs += 1;
                }
            }
        }
    }
    ensure(graphs >= 200, || format!("only {graphs} graphs"))?;
    Ok(format!(
        "{graphs} graphs, {runs} runs, all forests identical"
    ))
}

fn c2_edge_bound() -> Outcome {
    let mut report = Vec::new();
    let cases = [
        (16, Model::Complete, 2),
        (256, Model::Complete, 2),
        (100, Model::Gnm(1000), 4),
        (1000, Model::Gnm(10000), 4),
    ];
    for (n, model, c) in cases {
        let g = gen_graph(n, model, 17).map_err(|e| e.to_string())?;
        let mut sizes = Vec::new();
        for k in 1..=3 {
            let r = run(&g, k, RoutingMode::Charged)?;
            let e = r.edges.len();
            ensure(within_bound(e, n, k, c), || {
                format!("n={n} k={k}: |E'|={e} exceeds {c}*n^(1+1/2^{k})")
            })?;
            sizes.push(e);
        }
        report.push(format!("n={n} {sizes:?}"));
    }
    Ok(report.join("; "))
}

fn c3_certificates() -> Outcome {
    let mut rows_checked = 0;
    for (n, model) in [
        (16, Model::Complete),
        (64, Model::Gnp(0.5)),
        (100, Model::Gnm(1000)),
        (256, Model::Complete),
        (1000, Model::Gnm(10000)),
    ] {
        let g = gen_graph(n, model, 23).map_err(|e| e.to_string())?;
        for k in 1..=4 {
            let r = run(&g, k, RoutingMode::Charged)?;
            let rows = metrics_rows(
                &r.iterations,
                g.m(),
                r.edges.len(),
                r.scheme.eps_exp(),
                r.metrics.rounds_charged,
                r.metrics.rounds_explicit,
                r.cert.passed(),
            );
            let csv = render_metrics(&rows);
            for line in csv.lines().skip(1) {
                ensure(line.ends_with(",true"), || {
                    format!("n={n} k={k}: row {line}")
                })?;
                rows_checked += 1;
            }
            ensure(r.iterations.iter().map(|it| it.eps_exp).eq(1..=k), || {
                format!("n={n} k={k}: exponents do not halve eps each step")
            })?;
        }
    }
    Ok(format!("{rows_checked} CSV rows, cert_ok=true on all"))
}

fn c4_amplify_rounds() -> Outcome {
    let c_amp = AMPLIFY_ROUND_BOUND;
    ensure(c_amp <= 8, || format!("C_amp={c_amp}"))?;
    let mut first = Vec::new();
    let mut report = Vec::new();
    for (n, name, model) in [
        (16, "complete", Model::Complete),
        (256, "complete", Model::Complete),
        (256, "gnm", Model::Gnm(2560)),
        (4096, "gnm", Model::Gnm(40960)),
    ] {
        let g = gen_graph(n, model, 31).map_err(|e| e.to_string())?;
        let r = run(&g, 4, RoutingMode::Charged)?;
        let per: Vec<u64> = r.iterations.iter().map(|it| it.rounds_charged).collect();
        ensure(per.iter().all(|&x| x <= c_amp), || {
            format!("n={n}: per-step rounds {per:?} exceed {c_amp}")
        })?;
        first.push(per[0]);
        for k in 1..=3u32 {
            let total: u64 = per[..k as usize].iter().sum();
            ensure(total <= c_amp * k as u64 + 2, || {
                format!("n={n} k={k}: {total} rounds")
            })?;
        }
        report.push(format!("n={n} {name} {per:?}"));
    }
    ensure(first.windows(2).all(|w| w[0] == w[1]), || {
        format!("first-step rounds differ across n: {first:?}")
    })?;
    Ok(format!(
        "C_amp={c_amp}, first step {} at every n; {}",
        first[0],
        report.join("; ")
    ))
}

fn c5_mst_rounds() -> Outcome {
    let mut report = Vec::new();
    for (n, model) in [
        (16, Model::Complete),
        (256, Model::Complete),
        (4096, Model::Gnm(40960)),
    ] {
        let g = gen_graph(n, model, 37).map_err(|e| e.to_string())?;
        let r = mst(&g, RoutingMode::Charged).map_err(|e| format!("mst n={n}: {e}"))?;
        let k = mst_iterations(n);
        let want_k = (n as f64).log2().log2().ceil() as u32;
        ensure(
            k == want_k && r.k == k && r.iterations.len() == k as usize,
            || format!("n={n}: {} iterations, want {want_k}", r.iterations.len()),
        )?;
        let c_fin = r.finale_rounds;
        ensure(c_fin <= 8, || format!("n={n}: C_fin={c_fin}"))?;
        let bound = AMPLIFY_ROUND_BOUND * k as u64 + c_fin;
        ensure(r.metrics.rounds_charged <= bound, || {
            format!("n={n}: {} rounds > {bound}", r.metrics.rounds_charged)
        })?;
        ensure(r.forest == msf_oracle(&g), || {
            format!("n={n}: forest differs from oracle")
        })?;
        report.push(format!(
            "n={n} k={k} rounds={} C_fin={c_fin}",
            r.metrics.rounds_charged
        ));
    }
    Ok(report.join("; "))
}

fn c6_capacity() -> Outcome {
    let mut runs = 0;
    for n in [16usize, 64, 256] {
        for (i, model) in [
            Model::Gnp(0.5),
            Model::Gnm(4 * n),
            Model::Forest(2),
            Model::Complete,
        ]
        .into_iter()
        .enumerate()
        {
            let g = gen_graph(n, model, 41 + i as u64).map_err(|e| e.to_string())?;
            for k in 1..=3 {
                let r = run(&g, k, RoutingMode::Explicit)?;
                ensure(r.preserves_msf(&g), || {
                    format!("explicit n={n} k={k}: forest changed")
                })?;
                runs += 1;
            }
            let m =
                mst(&g, RoutingMode::Explicit).map_err(|e| format!("explicit mst n={n}: {e}"))?;
            ensure(m.forest == msf_oracle(&g), || {
                format!("explicit mst n={n}: wrong forest")
            })?;
            runs += 1;
        }
    }

    let mut eng = Engine::new(8, RoutingMode::Explicit);
    let mut ok = RoundOutbox::new(8);
    ok.send(2, 5, MessageWord::Count(0));
    eng.run_round(ok).map_err(|e| e.to_string())?;
    let mut bad = RoundOutbox::new(8);
    bad.send(6, 3, MessageWord::Count(1));
    bad.send(6, 3, MessageWord::Count(2));
    let err = eng.run_round(bad);
    let want = SimError::CapacityViolation {
        src: 6,
        dst: 3,
        round: 2,
    };
    ensure(err.as_ref().err() == Some(&want), || {
        format!("injected violation gave {err:?}")
    })?;
    Ok(format!(
        "{runs} explicit runs without violations; injected (6 -> 3) aborted in round 2"
    ))
}

fn c7_kruskal_prim() -> Outcome {
    let mut rng = common::rng(7);
    let mut tied = 0;
    for seed in 0..200u64 {
        let n = common::pick(&mut rng, &[4usize, 9, 16, 31, 48, 64]);
        let model = common::pick(
            &mut rng,
            &[
                Model::Gnp(0.2),
                Model::Gnp(0.7),
                Model::Complete,
                Model::Gnm(n * (n - 1) / 4),
            ],
        );
        let g = gen_graph(n, model, seed).map_err(|e| e.to_string())?;
        let g = if seed % 4 == 3 {
            g
        } else {
            common::collide_weights(&g, 1 + seed % 5)
        };
        let mut weights: Vec<_> = g.edges().iter().map(|e| e.w()).collect();
        weights.sort_unstable();
        if weights.windows(2).any(|w| w[0] == w[1]) {
            tied += 1;
        }
        let k = kruskal(g.edges());
        let p = common::prim(&g);
        ensure(k == p, || {
            format!("seed {seed} n={n}: Kruskal and Prim differ")
        })?;
    }
    ensure(tied >= 100, || {
        format!("only {tied} graphs with tied weights")
    })?;
    Ok(format!(
        "200 graphs ({tied} with tied raw weights), edge-for-edge equal"
    ))
}

fn c8_forest_idempotence() -> Outcome {
    let mut rng = common::rng(8);
    for seed in 0..50u64 {
        let n = common::pick(&mut rng, &[5usize, 16, 40, 64, 100, 256]);
        let trees = common::pick(&mut rng, &[1usize, 2, 5]);
        let g = gen_graph(n, Model::Forest(trees), seed).map_err(|e| e.to_string())?;
        let mut want = g.edges().to_vec();
        want.sort();
        for k in 1..=3 {
            let r = run(&g, k, RoutingMode::Charged)?;
            ensure(r.edges == want, || {
                format!("seed {seed} n={n} k={k}: forest edges changed")
            })?;
        }
    }
    Ok("50 forests, E' = E for k = 1, 2, 3".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 msf preservation", c1_preservation),
        ("2 edge bound", c2_edge_bound),
        ("3 certificate soundness", c3_certificates),
        ("4 constant rounds per amplify", c4_amplify_rounds),
        ("5 mst round bound", c5_mst_rounds),
        ("6 capacity invariant", c6_capacity),
        ("7 kruskal equals prim", c7_kruskal_prim),
        ("8 forest idempotence", c8_forest_idempotence),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//!
//! Run with `cargo test -p dynsis --test acceptance`. Two criteria cannot hold
//! as stated (see the README). They still run at full strength and print FAIL;
//! the process exits nonzero only if one of them also fails the narrower
//! property that is provably true, or if any other criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dynsis::meanfield::{
    simulate_trajectory, solve_equilibrium, step_linear, system_matrix, EquilibriumOptions,
    ProbabilityState,
};
use dynsis::montecarlo::{run_epidemic, sweep, McOptions, SweepConfig};
use dynsis::netmodel::{gen_regular, star};
use dynsis::spectral::{
    build_system_set, gilbert_spread_bound, jsr_bracket, jsr_symmetric, mc_column_sum,
    expected_column_sum, product_spectral_radius, rho_bar_k, rho_hat_k, threshold_static,
    ColumnSampling, MatrixSet, Verdict,
};
use dynsis::switching::SwitchingPolicy;
use dynsis::{EpidemicParams, Graph, Matrix, NormKind};

type Check = (u32, &'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    /// Failed only in the documented way, with the provable part intact.
    explained: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, explained: false, detail: detail.into() }
}

fn params(beta: f64, delta: f64) -> EpidemicParams {
    EpidemicParams::new(beta, delta).unwrap()
}

fn empty3() -> Graph {
    Graph::empty(3, false)
}

fn c1_equilibrium() -> Outcome {
    let want = [0.76791, 0.69731, 0.69731];
    let p0 = ProbabilityState::uniform(3, 0.5).unwrap();
    let eq = solve_equilibrium(&star(3), &params(0.6, 0.2), &p0, &EquilibriumOptions::default())
        .unwrap();
    let err = eq.state.p.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    outcome(err <= 1e-4, format!("p = {:.5?}, max error {err:.2e}", eq.state.p))
}

fn c2_die_out() -> Outcome {
    let pol = SwitchingPolicy::iid_uniform(vec![star(3)]).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let p0 = ProbabilityState::new((0..3).map(|_| r.gen::<f64>()).collect()).unwrap();
        let traj = simulate_trajectory(&pol, &p0, &params(0.1, 0.2), 500, 0).unwrap();
        worst = worst.max(traj.last().sup_norm());
    }
    outcome(worst < 1e-6, format!("largest sup-norm at t=500 over 5 starts: {worst:.2e}"))
}

fn c3_gilbert_rows() -> Outcome {
    let rows = [
        (0.95, 0.01, 0.09),
        (0.85, 0.01, 0.19),
        (0.74, 0.01, 0.3),
        (0.64, 0.01, 0.4),
        (0.54, 0.01, 0.5),
        (0.44, 0.01, 0.6),
        (0.34, 0.01, 0.7),
        (0.24, 0.01, 0.8),
        (0.14, 0.01, 0.9),
        (0.04, 0.01, 1.0),
        (0.7, 0.3, 1.5),
        (0.6, 0.4, 2.0),
        (0.5, 0.5, 2.5),
        (0.4, 0.6, 3.0),
        (0.3, 0.7, 3.5),
        (0.2, 0.8, 4.0),
        (0.1, 0.9, 4.5),
        (0.01, 0.99, 4.95),
    ];
    let err = rows
        .iter()
        .map(|&(delta, beta, want)| {
            (gilbert_spread_bound(1000, 0.004, &params(beta, delta)).unwrap().raw - want).abs()
        })
        .fold(0.0, f64::max);
    outcome(err <= 0.005, format!("18 rows, max deviation {err:.4}"))
}

fn c4_appendix() -> Outcome {
    let pr = params(0.1, 0.2);
    let mut pass = true;
    let mut parts = Vec::new();
    for k in 1..=3 {
        let want = expected_column_sum(10, 0.3, &pr, k).unwrap();
        let est =
            mc_column_sum(10, 0.3, &pr, k, 100_000, 40 + k as u64, ColumnSampling::IidOffDiagonal)
                .unwrap();
        let z = (est.mean - want) / est.std_err;
        pass &= z.abs() <= 3.0;
        parts.push(format!("k={k}: {:.5} vs {want:.5} (z={z:+.2})", est.mean));
    }
    outcome(pass, parts.join("; "))
}

fn random_matrix(r: &mut ChaCha8Rng, n: usize, symmetric: bool) -> Matrix {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if symmetric && j < i {
                m.set(i, j, m.get(j, i));
            } else {
                m.set(i, j, r.gen::<f64>());
            }
        }
    }
    m
}

fn c5_four_member() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let mut checks = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let n = r.gen_range(2..=4);
        let size = r.gen_range(2..=3);
        let set = MatrixSet::new((0..size).map(|_| random_matrix(&mut r, n, false)).collect())
            .unwrap();
        let lower = (1..=5)
            .map(|k| rho_bar_k(&set, k).unwrap().powf(1.0 / k as f64))
            .collect::<Vec<_>>();
        for norm in NormKind::ALL {
            for j in 1..=5 {
                let upper = rho_hat_k(&set, j, norm).unwrap().powf(1.0 / j as f64);
                for &lo in &lower {
                    worst = worst.max(lo - upper);
                    checks += 1;
                }
            }
        }
    }
    outcome(
        worst <= 1e-9,
        format!("{checks} comparisons, largest lower - upper = {worst:.3e}"),
    )
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigenvalues(m: &Matrix) -> Vec<f64> {
    let n = m.dim();
    let mut a = m.to_rows();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

fn c6_symmetric() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = r.gen_range(2..=6);
        let size = r.gen_range(2..=4);
        let members: Vec<_> = (0..size).map(|_| random_matrix(&mut r, n, true)).collect();
        let want = members
            .iter()
            .flat_map(jacobi_eigenvalues)
            .map(f64::abs)
            .fold(0.0, f64::max);
        let set = MatrixSet::new(members).unwrap();
        let b = jsr_bracket(&set, 4, NormKind::Induced2).unwrap();
        // the enumerated depth-1 bounds must collapse too
        let bar = rho_bar_k(&set, 1).unwrap();
        let hat = rho_hat_k(&set, 1, NormKind::Induced2).unwrap();
        for v in [b.lower, b.upper, bar, hat] {
            worst = worst.max((v - want).abs() / want.max(1.0));
        }
    }
    outcome(worst <= 1e-9, format!("50 sets, largest deviation from max rho: {worst:.2e}"))
}

fn c7_comparator() -> Outcome {
    let pr = params(0.3, 0.2);
    let prod = product_spectral_radius(&[star(3), empty3()], &pr).unwrap();
    let set = build_system_set(&[star(3), empty3()], &pr).unwrap();
    let jsr = jsr_symmetric(&set).unwrap();
    let s2 = 2f64.sqrt();
    let (want_prod, want_jsr) = (0.8 * (0.8 + 0.3 * s2), 0.8 + 0.3 * s2);

    let m = system_matrix(&star(3), &pr);
    let mut x = vec![1.0; 3];
    for _ in 0..100 {
        x = step_linear(&x, &m).unwrap();
    }
    let norm = x.iter().map(|v| v.abs()).fold(0.0, f64::max);

    let pass = (prod - want_prod).abs() <= 1e-4
        && (jsr - want_jsr).abs() <= 1e-4
        && prod < 1.0
        && jsr > 1.0
        && norm > 1e3;
    outcome(
        pass,
        format!("product rho {prod:.5}, jsr {jsr:.5}, all-star norm after 100 steps {norm:.3e}"),
    )
}

fn c8_regular() -> Outcome {
    let graphs: Vec<_> = (0..4).map(|s| gen_regular(200, 8, 80 + s).unwrap()).collect();
    assert!(graphs.iter().all(|g| g.degrees().iter().all(|&d| d == 8)));
    let pol = SwitchingPolicy::iid_uniform(graphs).unwrap();
    let cfg = SweepConfig { reps: 20, horizon: 500, ..SweepConfig::new(vec![(0.02, 0.2), (0.05, 0.2)], 8) };
    let rows = sweep(&pol, &cfg).unwrap();
    let (lo, hi) = (&rows[0], &rows[1]);
    let pass = lo.dieout_prob >= 0.95 && hi.final_frac_mean >= 0.05;
    outcome(
        pass,
        format!(
            "beta=0.02: dieout {:.2} (jsr {:.3}); beta=0.05: final fraction {:.3} (jsr {:.3})",
            lo.dieout_prob, lo.jsr_upper, hi.final_frac_mean, hi.jsr_lower
        ),
    )
}

fn random_digraph(r: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let links: Vec<_> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| r.gen::<f64>() < density)
        .collect();
    Graph::new(n, true, links).unwrap()
}

fn random_undirected(r: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let links: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| r.gen::<f64>() < density)
        .collect();
    Graph::new(n, false, links).unwrap()
}

fn c9_consistency() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let mut static_agree = 0;
    let mut verdicts = [0usize; 3];
    for i in 0..20 {
        let n = r.gen_range(3..=8);
        let density = r.gen_range(0.1..0.7);
        let g = if i % 2 == 0 { random_digraph(&mut r, n, density) } else { random_undirected(&mut r, n, density) };
        let pr = params(r.gen_range(0.0..0.5), r.gen_range(0.05..1.0));
        let a = threshold_static(&g, &pr).unwrap().verdict;
        let set = build_system_set(&[g], &pr).unwrap();
        let b = jsr_bracket(&set, 3, set.default_norm()).unwrap().verdict();
        if a == b {
            static_agree += 1;
        }
        verdicts[match a {
            Verdict::DiesOut => 0,
            Verdict::Spreads => 1,
            Verdict::Inconclusive => 2,
        }] += 1;
    }

    let mut periodic_ok = 0;
    // rho <= lower always holds: the period product is among the enumerated ones
    let mut provable_ok = 0;
    for _ in 0..10 {
        let period = r.gen_range(1..=3);
        let n = r.gen_range(3..=5);
        let seq: Vec<_> = (0..period).map(|_| random_digraph(&mut r, n, 0.4)).collect();
        let pr = params(r.gen_range(0.05..0.6), r.gen_range(0.05..0.6));
        let rho = product_spectral_radius(&seq, &pr).unwrap().powf(1.0 / period as f64);
        let set = build_system_set(&seq, &pr).unwrap();
        let b = jsr_bracket(&set, 3 * period, set.default_norm()).unwrap();
        if b.lower - 1e-9 <= rho && rho <= b.upper + 1e-9 {
            periodic_ok += 1;
        }
        if rho <= b.lower + 1e-9 && b.lower <= b.upper + 1e-12 {
            provable_ok += 1;
        }
    }
    Outcome {
        pass: static_agree == 20 && periodic_ok == 10,
        explained: static_agree == 20 && provable_ok == 10,
        detail: format!(
            "static verdicts agree {static_agree}/20 (dies out {}, spreads {}, inconclusive {}); \
             periodic inside bracket {periodic_ok}/10, below lower bound {provable_ok}/10",
            verdicts[0], verdicts[1], verdicts[2]
        ),
    }
}

/// Exact distribution of the stochastic SIS chain on the 3-node star, tracked
/// by (hub infected, number of infected leaves). Returns P(alive at `horizon`)
/// starting from everyone infected.
fn star_chain_survival(beta: f64, delta: f64, horizon: usize, reinfection: bool) -> f64 {
    fn binom(n: usize, k: usize, p: f64) -> f64 {
        let c = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 2.0, 1.0]][n][k];
        c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
    }
    let idx = |h: usize, l: usize| h * 3 + l;
    let mut dist = [0.0; 6];
    dist[idx(1, 2)] = 1.0;
    for _ in 0..horizon {
        let mut next = [0.0; 6];
        for h in 0..2 {
            for l in 0..3 {
                let mass = dist[idx(h, l)];
                if mass == 0.0 {
                    continue;
                }
                let hub_pressure = 1.0 - (1.0 - beta).powi(l as i32);
                let hub_on = if h == 1 {
                    1.0 - delta + if reinfection { delta * hub_pressure } else { 0.0 }
                } else {
                    hub_pressure
                };
                let leaf_pressure = beta * h as f64;
                let leaf_stay = 1.0 - delta + if reinfection { delta * leaf_pressure } else { 0.0 };
                for hn in 0..2 {
                    let ph = if hn == 1 { hub_on } else { 1.0 - hub_on };
                    for x in 0..=l {
                        for y in 0..=2 - l {
                            next[idx(hn, x + y)] += mass
                                * ph
                                * binom(l, x, leaf_stay)
                                * binom(2 - l, y, leaf_pressure);
                        }
                    }
                }
            }
        }
        dist = next;
    }
    1.0 - dist[idx(0, 0)]
}

fn c10_mc_cross_check() -> Outcome {
    let pol = SwitchingPolicy::iid_uniform(vec![star(3)]).unwrap();
    let frac = |beta: f64, opts: McOptions, died: bool| {
        (0..200u64)
            .filter(|&seed| {
                let run = run_epidemic(&pol, &params(beta, 0.2), 1.0, 500, 1000 + seed, &opts).unwrap();
                run.died_out() == died
            })
            .count() as f64
            / 200.0
    };
    let default = McOptions::default();
    let reinf = McOptions { allow_reinfection: true };
    let died_fig1 = frac(0.1, default, true);
    let survived_fig2 = frac(0.6, default, false);
    let survived_fig2_reinf = frac(0.6, reinf, false);
    let exact = star_chain_survival(0.6, 0.2, 500, false);
    let exact_reinf = star_chain_survival(0.6, 0.2, 500, true);
    // the simulator must match the exact chain within 3 binomial standard errors
    let agrees = |observed: f64, p: f64| (observed - p).abs() <= 3.0 * (p * (1.0 - p) / 200.0).sqrt() + 1e-12;
    Outcome {
        pass: died_fig1 >= 0.95 && survived_fig2 >= 0.5,
        explained: died_fig1 >= 0.95
            && agrees(survived_fig2, exact)
            && agrees(survived_fig2_reinf, exact_reinf),
        detail: format!(
            "beta=0.1 died {died_fig1:.3}; beta=0.6 survived {survived_fig2:.3} (exact chain {exact:.2e}), \
             with reinfection {survived_fig2_reinf:.3} (exact chain {exact_reinf:.3})"
        ),
    }
}

fn main() {
    // libtest flags such as --nocapture or a filter are accepted and ignored
    let criteria: [Check; 10] = [
        (1, "equilibrium on the 3-node star", Duration::from_secs(1), c1_equilibrium),
        (2, "mean-field die-out on the 3-node star", Duration::from_secs(1), c2_die_out),
        (3, "Gilbert bound reference rows", Duration::from_secs(1), c3_gilbert_rows),
        (4, "expected column sums by Monte Carlo", Duration::from_secs(120), c4_appendix),
        (5, "four-member inequality", Duration::from_secs(120), c5_four_member),
        (6, "symmetric collapse", Duration::from_secs(60), c6_symmetric),
        (7, "product radius vs JSR", Duration::from_secs(60), c7_comparator),
        (8, "regular threshold at desk scale", Duration::from_secs(300), c8_regular),
        (9, "static and periodic consistency", Duration::from_secs(120), c9_consistency),
        (10, "mean-field vs Monte Carlo", Duration::from_secs(60), c10_mc_cross_check),
    ];

    let mut unexpected = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let out = check();
        let took = start.elapsed();
        let pass = out.pass && took <= budget;
        let note = if pass {
            ""
        } else if out.explained && took <= budget {
            " [unattainable as stated, see README]"
        } else {
            unexpected += 1;
            ""
        };
        println!(
            "{} criterion {id:>2} {name}: {} ({:.2?} of {:?}){note}",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took,
            budget
        );
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criterion/criteria failed");
        std::process::exit(1);
    }
}

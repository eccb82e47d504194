//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lexmetric_core::constructions::{graph_metric, gravitational, lexicographic, Graph};
use lexmetric_core::corpus;
use lexmetric_core::resolving::{
    greedy_generator, metric_dimension, resolves, Solver, SolverConfig,
};
use lexmetric_core::theory::{verify_diameter, verify_dimension, verify_squash, Guards, Witnesses};
use lexmetric_core::twins::twin_classes;
use lexmetric_core::FiniteMetricSpace;
use rand::Rng;

const TAU: f64 = 1e-9;
const RANDOM_SEED: u64 = 20_181_101;
const RANDOM_PAIRS: usize = 40;

type Outcome = Result<String, String>;

fn graph_pairs() -> Vec<(FiniteMetricSpace, FiniteMetricSpace)> {
    let fibers = corpus::connected_graph_metrics(2, 3);
    corpus::connected_graph_metrics(2, 4)
        .into_iter()
        .flat_map(|m| fibers.iter().map(move |m2| (m.clone(), m2.clone())))
        .collect()
}

/// The graph pairs plus every base paired with each weighted table.
fn full_pairs() -> Vec<(FiniteMetricSpace, FiniteMetricSpace)> {
    let mut pairs = graph_pairs();
    for m in corpus::connected_graph_metrics(2, 4) {
        for m2 in corpus::weighted_tables() {
            pairs.push((m.clone(), m2));
        }
    }
    pairs
}

/// Spaces with at most seven points: every connected graph on up to six
/// vertices, the weighted tables, corpus products that fit, and seeded
/// random seven-point spaces.
fn small_spaces() -> Vec<FiniteMetricSpace> {
    let mut out = corpus::connected_graph_metrics(2, 6);
    out.extend(corpus::weighted_tables());
    for (m, m2) in full_pairs() {
        if m.len() * m2.len() <= 7 {
            out.push(lexicographic(&m, &m2).unwrap().into_space());
        }
    }
    let mut rng = corpus::rng(RANDOM_SEED ^ 7);
    for _ in 0..20 {
        out.push(corpus::random_weighted_metric(&mut rng, 7));
        out.push(corpus::random_graph_metric(&mut rng, 7, 0.3));
    }
    out
}

fn show(s: &FiniteMetricSpace) -> String {
    format!("{:?}", s.rows())
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("{what} took {took:?}, limit {limit:?}"))
    }
}

fn c1_main_theorem_exhaustive() -> Outcome {
    let start = Instant::now();
    let guards = Guards::default();
    let pairs = graph_pairs();
    for (m, m2) in &pairs {
        let r = verify_dimension(m, m2, &guards).map_err(|e| e.to_string())?;
        if !r.pass {
            return Err(format!(
                "lhs {} rhs {} for M={} M'={}",
                r.lhs,
                r.rhs,
                show(m),
                show(m2)
            ));
        }
    }
    let took = within(Duration::from_secs(60), start, "exhaustive sweep")?;
    Ok(format!("{} pairs in {took:.2?}", pairs.len()))
}

fn c2_main_theorem_random() -> Outcome {
    let start = Instant::now();
    let guards = Guards::default();
    let mut rng = corpus::rng(RANDOM_SEED);
    let mut largest = 0;
    let mut special = 0;
    for i in 0..RANDOM_PAIRS {
        let (m, m2) = corpus::random_weighted_pair(&mut rng, guards.max_product_points);
        largest = largest.max(m.len() * m2.len());
        let r = verify_dimension(&m, &m2, &guards).map_err(|e| e.to_string())?;
        if let Witnesses::Dimension(w) = &r.witnesses {
            special += w.formula.special.extra_landmarks();
        }
        if !r.pass {
            return Err(format!(
                "pair {i}: lhs {} rhs {} M={} M'={}",
                r.lhs,
                r.rhs,
                show(&m),
                show(&m2)
            ));
        }
    }
    let took = within(Duration::from_secs(300), start, "random sweep")?;
    Ok(format!(
        "{RANDOM_PAIRS} weighted pairs, seed {RANDOM_SEED}, largest product {largest}, \
         {special} special-class landmarks, in {took:.2?}"
    ))
}

/// Dimension by both solvers, which must agree on value and basis.
fn cross_checked_dimension(space: &FiniteMetricSpace) -> Result<usize, String> {
    let bb = metric_dimension(space, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let en = metric_dimension(
        space,
        &SolverConfig::default().with_solver(Solver::Enumeration),
    )
    .map_err(|e| e.to_string())?;
    if bb.dimension != en.dimension || bb.basis != en.basis {
        return Err(format!(
            "solvers disagree on {}: {:?} vs {:?}",
            show(space),
            (bb.dimension, &bb.basis),
            (en.dimension, &en.basis)
        ));
    }
    Ok(bb.dimension)
}

fn c3_known_values() -> Outcome {
    let check = |what: String, space: FiniteMetricSpace, want: usize| -> Result<(), String> {
        let got = cross_checked_dimension(&space)?;
        if got == want {
            Ok(())
        } else {
            Err(format!("dim({what}) = {got}, expected {want}"))
        }
    };
    for n in 2..=7 {
        check(format!("P{n}"), graph_metric(&Graph::path(n)).unwrap(), 1)?;
    }
    for n in 2..=6 {
        check(format!("K{n}"), graph_metric(&Graph::complete(n)).unwrap(), n - 1)?;
    }
    check("C4".into(), graph_metric(&Graph::cycle(4)).unwrap(), 2)?;
    let k2 = graph_metric(&Graph::complete(2)).unwrap();
    check(
        "K2∘K2".into(),
        lexicographic(&k2, &k2).unwrap().into_space(),
        3,
    )?;
    Ok("P2..P7 = 1, K2..K6 = n-1, C4 = 2, K2∘K2 = 3; both solvers agree".into())
}

fn c4_diameter_formula() -> Outcome {
    let pairs = graph_pairs();
    for (m, m2) in &pairs {
        let r = verify_diameter(m, m2).map_err(|e| e.to_string())?;
        let (lhs, rhs) = (r.lhs.as_f64(), r.rhs.as_f64());
        if (lhs - rhs).abs() > TAU || !r.pass {
            return Err(format!(
                "D(M∘M') = {lhs}, formula {rhs} for M={} M'={}",
                show(m),
                show(m2)
            ));
        }
    }
    Ok(format!("{} pairs within τ = {TAU:e}", pairs.len()))
}

fn c5_squash() -> Outcome {
    let guards = Guards::default();
    let pairs = full_pairs();
    for (m, m2) in &pairs {
        let r = verify_squash(m, m2, &guards).map_err(|e| e.to_string())?;
        let Witnesses::Squash(w) = &r.witnesses else {
            return Err("squash report without squash witness".into());
        };
        let three_equal = w.product_dimension == m.len() * w.fiber_dimension
            && w.product_dimension == w.squashed_rhs;
        if !(r.pass && three_equal && w.squashed_diameter < m.nearness()) {
            return Err(format!(
                "dim(M∘M'') {} |X|dim(M') {} |X|dim(M'') {} D(M'') {} η {} for M={} M'={}",
                w.product_dimension,
                r.rhs,
                w.squashed_rhs,
                w.squashed_diameter,
                w.eta,
                show(m),
                show(m2)
            ));
        }
    }
    Ok(format!("{} pairs, D(M'') < η(M) strictly on all", pairs.len()))
}

fn c6_axiom_closure() -> Outcome {
    let mut rng = corpus::rng(RANDOM_SEED ^ 6);
    for i in 0..100 {
        let n = rng.random_range(2..=7);
        let space = if i % 2 == 0 {
            corpus::random_weighted_metric(&mut rng, n)
        } else {
            corpus::random_graph_metric(&mut rng, n, 0.3)
        };
        let t = rng.random_range(0.1..3.0);
        let g = gravitational(&space, t).map_err(|e| e.to_string())?;
        if !g.validate().ok {
            return Err(format!("gravitational(t={t}) of {} is not a metric", show(&space)));
        }
    }
    for _ in 0..100 {
        let (m, m2) = corpus::random_pair(&mut rng, 36);
        let p = lexicographic(&m, &m2).map_err(|e| e.to_string())?;
        if !p.space().validate().ok {
            return Err(format!("product of {} and {} is not a metric", show(&m), show(&m2)));
        }
    }
    Ok("100 gravitational + 100 lexicographic outputs validate".into())
}

fn c7_ball_coincidence() -> Outcome {
    let mut rng = corpus::rng(RANDOM_SEED ^ 7_000);
    for _ in 0..50 {
        let n = rng.random_range(2..=8);
        let space = corpus::random_weighted_metric(&mut rng, n);
        let x = rng.random_range(0..n);
        let t = rng.random_range(0.25..2.0);
        let eps = rng.random_range(0.0..2.0 * t);
        if eps <= 0.0 {
            continue;
        }
        let g = gravitational(&space, t).unwrap();
        let (a, b) = (space.ball_at(x, eps).unwrap(), g.ball_at(x, eps).unwrap());
        if a != b {
            return Err(format!("x={x} t={t} ε={eps}: {a:?} vs {b:?} in {}", show(&space)));
        }
    }
    Ok("50 random (space, x, t, ε) with ε < 2t".into())
}

fn c8_solver_cross_validation() -> Outcome {
    let spaces = small_spaces();
    for s in &spaces {
        let exact = cross_checked_dimension(s)?;
        let greedy = greedy_generator(s);
        if greedy.len() < exact || !resolves(s, &greedy) {
            return Err(format!(
                "greedy {greedy:?} (exact {exact}) invalid on {}",
                show(s)
            ));
        }
    }
    Ok(format!("{} spaces with n ≤ 7", spaces.len()))
}

fn c9_twin_invariants() -> Outcome {
    let spaces = small_spaces();
    let mut subsets = 0usize;
    for s in &spaces {
        let tau = s.tolerance();
        let part = twin_classes(s).map_err(|e| e.to_string())?;
        // partition
        let mut seen = vec![0; s.len()];
        for c in &part.classes {
            for &i in &c.indices {
                seen[i] += 1;
            }
        }
        if seen.iter().any(|&k| k != 1) {
            return Err(format!("classes do not partition {}", show(s)));
        }
        for c in part.non_singleton() {
            let ds: Vec<f64> = c
                .indices
                .iter()
                .flat_map(|&a| c.indices.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
                .map(|(a, b)| s.d(a, b))
                .collect();
            let spread = ds.iter().cloned().fold(f64::MIN, f64::max)
                - ds.iter().cloned().fold(f64::MAX, f64::min);
            if spread > 2.0 * tau {
                return Err(format!("gap spread {spread} in {:?}", c.members));
            }
            let etas: Vec<f64> = c.indices.iter().map(|&i| s.nearness_at(i)).collect();
            let spread = etas.iter().cloned().fold(f64::MIN, f64::max)
                - etas.iter().cloned().fold(f64::MAX, f64::min);
            if spread > 2.0 * tau {
                return Err(format!("nearness spread {spread} in {:?}", c.members));
            }
        }
        if s.len() <= 6 {
            for mask in 1u32..(1 << s.len()) {
                let set: Vec<usize> = (0..s.len()).filter(|&i| mask >> i & 1 == 1).collect();
                if !resolves(s, &set) {
                    continue;
                }
                subsets += 1;
                for c in part.non_singleton() {
                    let outside = c.indices.iter().filter(|i| !set.contains(i)).count();
                    if outside > 1 {
                        return Err(format!(
                            "resolving set {set:?} misses {outside} of class {:?}",
                            c.members
                        ));
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} spaces; {subsets} resolving sets checked exhaustively for n ≤ 6",
        spaces.len()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 main theorem, exhaustive small corpus", c1_main_theorem_exhaustive),
        ("2 main theorem, random weighted pairs", c2_main_theorem_random),
        ("3 known graph dimensions", c3_known_values),
        ("4 diameter formula", c4_diameter_formula),
        ("5 squash theorem", c5_squash),
        ("6 metric-axiom closure", c6_axiom_closure),
        ("7 ball coincidence", c7_ball_coincidence),
        ("8 solver cross-validation", c8_solver_cross_validation),
        ("9 twin invariants", c9_twin_invariants),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

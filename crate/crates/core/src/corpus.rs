//! Test corpora: every connected graph up to isomorphism on a few vertices,
//! a handful of weighted tables, and seeded random spaces.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{graph_metric, Graph};
use crate::metric::{FiniteMetricSpace, PointId};
use crate::DEFAULT_TOLERANCE;

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a, b, ..., z, p26, p27, ...`
pub fn letter_label(i: usize) -> PointId {
    if i < 26 {
        PointId::new(alloc::string::String::from(char::from(b'a' + i as u8)))
    } else {
        PointId::new(alloc::format!("p{i}"))
    }
}

/// Edge bit index for `i < j` among `n` vertices.
fn edge_bit(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Smallest edge code over all vertex permutations (Heap's algorithm).
fn canonical(n: usize, edges: &[(usize, usize)]) -> u64 {
    let mut perm: Vec<usize> = (0..n).collect();
    let code = |p: &[usize]| -> u64 {
        edges
            .iter()
            .fold(0u64, |acc, &(a, b)| acc | 1 << edge_bit(n, p[a], p[b]))
    };
    let mut best = code(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(code(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

fn decode(n: usize, code: u64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if code >> edge_bit(n, i, j) & 1 == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Every connected simple graph on exactly `n` vertices, one per
/// isomorphism class, as edge lists over `0..n`, sorted by canonical code.
///
/// Each connected graph on `n` vertices has a vertex whose removal leaves it
/// connected, so extending every class on `n − 1` vertices by a new vertex
/// with every nonempty neighbourhood reaches every class.
pub fn connected_graph_classes(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n <= 11, "edge codes must fit in 64 bits");
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![Vec::new()];
    }
    let mut codes = BTreeSet::new();
    for smaller in connected_graph_classes(n - 1) {
        for mask in 1u32..(1 << (n - 1)) {
            let mut edges = smaller.clone();
            edges.extend((0..n - 1).filter(|&v| mask >> v & 1 == 1).map(|v| (v, n - 1)));
            codes.insert(canonical(n, &edges));
        }
    }
    codes.into_iter().map(|c| decode(n, c)).collect()
}

fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
    let mut g = Graph::with_vertices((0..n).map(letter_label));
    for &(a, b) in edges {
        g.add_unit_edge(letter_label(a), letter_label(b))
            .expect("distinct endpoints");
    }
    g
}

/// Shortest-path metrics of every connected graph on `min..=max` vertices
/// (up to isomorphism), labelled `a, b, ...`.
pub fn connected_graph_metrics(min: usize, max: usize) -> Vec<FiniteMetricSpace> {
    (min.max(2)..=max)
        .flat_map(|n| {
            connected_graph_classes(n)
                .into_iter()
                .map(move |e| graph_metric(&graph_from_edges(n, &e)).expect("connected"))
        })
        .collect()
}

/// Three small weighted tables: a pair at 0.5, a scalene triangle and three
/// collinear points.
pub fn weighted_tables() -> Vec<FiniteMetricSpace> {
    let labels = |n| (0..n).map(letter_label).collect::<Vec<_>>();
    let table = |n, rows: Vec<Vec<f64>>| {
        FiniteMetricSpace::checked(labels(n), rows, DEFAULT_TOLERANCE).expect("valid metric")
    };
    vec![
        table(2, vec![vec![0.0, 0.5], vec![0.5, 0.0]]),
        table(
            3,
            vec![vec![0.0, 1.0, 1.5], vec![1.0, 0.0, 2.0], vec![1.5, 2.0, 0.0]],
        ),
        table(
            3,
            vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 2.0], vec![3.0, 2.0, 0.0]],
        ),
    ]
}

/// Random connected unit-weight graph metric: a random spanning tree plus
/// each remaining edge with probability `p`.
pub fn random_graph_metric<R: Rng>(rng: &mut R, n: usize, p: f64) -> FiniteMetricSpace {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !edges.contains(&(i, j)) && rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    graph_metric(&graph_from_edges(n, &edges)).expect("spanning tree connects")
}

/// Random weighted metric: a complete graph with weights drawn from
/// `{0.5, 1.0, ..., 3.0}`, closed under shortest paths. Half-integer
/// weights keep every sum exact and make ties common.
pub fn random_weighted_metric<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let mut g = Graph::with_vertices((0..n).map(letter_label));
    for i in 0..n {
        for j in (i + 1)..n {
            let w = f64::from(rng.random_range(1u8..=6)) * 0.5;
            g.add_edge(letter_label(i), letter_label(j), w)
                .expect("positive weight");
        }
    }
    graph_metric(&g).expect("complete graph is connected")
}

/// Random pair `(M, M′)` with `|X|·|Y| ≤ max_product` and at most six
/// points per side. Each side is weighted with probability one half, otherwise an
/// unweighted graph metric.
pub fn random_pair<R: Rng>(
    rng: &mut R,
    max_product: usize,
) -> (FiniteMetricSpace, FiniteMetricSpace) {
    assert!(max_product >= 4);
    let nx = rng.random_range(2..=(max_product / 2).min(6));
    let ny = rng.random_range(2..=(max_product / nx).min(6));
    let side = |n: usize, rng: &mut R| {
        if rng.random_bool(0.5) {
            random_weighted_metric(rng, n)
        } else {
            random_graph_metric(rng, n, 0.4)
        }
    };
    let m = side(nx, rng);
    let m2 = side(ny, rng);
    (m, m2)
}

/// Like [`random_pair`] with both sides weighted.
pub fn random_weighted_pair<R: Rng>(
    rng: &mut R,
    max_product: usize,
) -> (FiniteMetricSpace, FiniteMetricSpace) {
    assert!(max_product >= 4);
    let nx = rng.random_range(2..=(max_product / 2).min(6));
    let ny = rng.random_range(2..=(max_product / nx).min(6));
    let m = random_weighted_metric(rng, nx);
    let m2 = random_weighted_metric(rng, ny);
    (m, m2)
}

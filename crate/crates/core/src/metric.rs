//! The finite metric space carrier and its scalar statistics.
//!
//! A [`FiniteMetricSpace`] is an ordered list of labelled points together
//! with a dense `n × n` distance table and an absolute tolerance `τ`. Every
//! equality test between distances anywhere in the crate goes through
//! [`FiniteMetricSpace::same`], so `τ` is the single knob that decides when
//! two floating distances count as equal.
//!
//! Construction only checks the table shape. Use [`FiniteMetricSpace::validate`]
//! to check the metric axioms, or [`FiniteMetricSpace::checked`] to do both.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, DEFAULT_TOLERANCE};

/// Opaque point label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(String);

impl PointId {
    pub fn new(label: impl Into<String>) -> Self {
        PointId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Label of a product point `(base, fiber)`.
    pub fn pair(base: &PointId, fiber: &PointId) -> Self {
        let mut s = String::with_capacity(base.0.len() + fiber.0.len() + 1);
        s.push_str(&base.0);
        s.push('|');
        s.push_str(&fiber.0);
        PointId(s)
    }
}

impl fmt::Debug for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PointId {
    fn from(s: &str) -> Self {
        PointId(s.to_owned())
    }
}

impl From<String> for PointId {
    fn from(s: String) -> Self {
        PointId(s)
    }
}

#[derive(Clone, PartialEq)]
pub struct FiniteMetricSpace {
    points: Vec<PointId>,
    dist: Vec<f64>,
    tolerance: f64,
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = self.dist.chunks(self.len()).collect();
        f.debug_struct("FiniteMetricSpace")
            .field("points", &self.points)
            .field("dist", &rows)
            .field("tolerance", &self.tolerance)
            .finish()
    }
}

/// Which metric axiom a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Finite,
    Nonnegative,
    ZeroDiagonal,
    Symmetry,
    Identity,
    Triangle,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Finite => "finite",
            Axiom::Nonnegative => "nonnegative",
            Axiom::ZeroDiagonal => "zero_diagonal",
            Axiom::Symmetry => "symmetry",
            Axiom::Identity => "identity",
            Axiom::Triangle => "triangle",
        })
    }
}

/// One failed axiom instance. `points` holds the indices involved: one for
/// per-entry and diagonal checks, two for symmetry and identity, three
/// `(i, k, j)` for the triangle inequality `d(i,j) ≤ d(i,k) + d(k,j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub points: Vec<PointId>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceStats {
    pub nearness_per_point: Vec<(PointId, f64)>,
    pub nearness: f64,
    pub slack: f64,
    pub diameter: f64,
}

/// Plain table form of a space; also the on-disk JSON layout
/// `{"points": [...], "d": [[...]], "tolerance": τ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTable {
    pub points: Vec<PointId>,
    pub d: Vec<Vec<f64>>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl From<&FiniteMetricSpace> for MetricTable {
    fn from(s: &FiniteMetricSpace) -> Self {
        MetricTable {
            points: s.points.clone(),
            d: s.rows(),
            tolerance: s.tolerance,
        }
    }
}

impl TryFrom<MetricTable> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(t: MetricTable) -> Result<Self> {
        FiniteMetricSpace::new(t.points, t.d, t.tolerance)
    }
}

impl FiniteMetricSpace {
    /// Builds a space from labels and a row-major table of rows. Checks
    /// shape, label uniqueness, `n ≥ 2` and the tolerance; not the axioms.
    pub fn new(points: Vec<PointId>, rows: Vec<Vec<f64>>, tolerance: f64) -> Result<Self> {
        let n = points.len();
        if rows.len() != n {
            return Err(Error::RowCount {
                rows: rows.len(),
                points: n,
            });
        }
        let mut dist = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::RowLength {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            dist.extend_from_slice(r);
        }
        Self::from_flat(points, dist, tolerance)
    }

    /// Same as [`new`](Self::new) with a flat row-major table.
    pub fn from_flat(points: Vec<PointId>, dist: Vec<f64>, tolerance: f64) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(Error::TooFewPoints(n));
        }
        if dist.len() != n * n {
            return Err(Error::RowCount {
                rows: dist.len() / n,
                points: n,
            });
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::BadTolerance(tolerance));
        }
        let mut sorted: Vec<&PointId> = points.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].0.clone()));
        }
        Ok(FiniteMetricSpace {
            points,
            dist,
            tolerance,
        })
    }

    /// Builds a space by evaluating `d(i, j)` for every index pair.
    pub fn from_fn(
        labels: Vec<PointId>,
        tolerance: f64,
        mut d: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let n = labels.len();
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dist.push(d(i, j));
            }
        }
        Self::from_flat(labels, dist, tolerance)
    }

    /// [`new`](Self::new) followed by [`validate`](Self::validate); fails
    /// with [`Error::NotAMetric`] if any axiom is violated.
    pub fn checked(points: Vec<PointId>, rows: Vec<Vec<f64>>, tolerance: f64) -> Result<Self> {
        let space = Self::new(points, rows, tolerance)?;
        let report = space.validate();
        if report.ok {
            Ok(space)
        } else {
            Err(Error::NotAMetric(report.violations.len()))
        }
    }

    /// Labels `p0..p{n-1}`.
    pub fn default_labels(n: usize) -> Vec<PointId> {
        (0..n).map(|i| PointId(alloc::format!("p{i}"))).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn label(&self, i: usize) -> &PointId {
        &self.points[i]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::BadTolerance(tolerance));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p.as_str() == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_owned()))
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn distance(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.d(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.len()).map(<[f64]>::to_vec).collect()
    }

    /// Distance equality at this space's tolerance.
    #[inline]
    pub fn same(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.tolerance
    }

    /// Copy with every distance passed through `f`. Labels and tolerance are
    /// kept; the diagonal stays zero.
    pub fn map_distances(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        let n = self.len();
        let dist = self
            .dist
            .iter()
            .enumerate()
            .map(|(k, &v)| if k / n == k % n { 0.0 } else { f(v) })
            .collect();
        FiniteMetricSpace {
            points: self.points.clone(),
            dist,
            tolerance: self.tolerance,
        }
    }

    /// Copy with new labels, in the same order.
    pub fn relabel(&self, labels: Vec<PointId>) -> Result<Self> {
        Self::from_flat(labels, self.dist.clone(), self.tolerance)
    }

    /// Subspace induced by `indices`, in the given order.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self> {
        let labels = indices.iter().map(|&i| self.points[i].clone()).collect();
        Self::from_fn(labels, self.tolerance, |a, b| self.d(indices[a], indices[b]))
    }

    /// Checks every metric axiom at tolerance `τ` and lists every violation.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let tau = self.tolerance;
        let mut violations = Vec::new();
        let mut push = |axiom, idx: &[usize], lhs, rhs| {
            violations.push(Violation {
                axiom,
                points: idx.iter().map(|&i| self.points[i].clone()).collect(),
                lhs,
                rhs,
            })
        };
        let mut finite = true;
        for i in 0..n {
            for j in 0..n {
                let v = self.d(i, j);
                if !v.is_finite() {
                    push(Axiom::Finite, &[i, j], v, 0.0);
                    finite = false;
                } else if v < 0.0 {
                    push(Axiom::Nonnegative, &[i, j], v, 0.0);
                }
            }
        }
        for i in 0..n {
            let v = self.d(i, i);
            if v.is_finite() && v.abs() > tau {
                push(Axiom::ZeroDiagonal, &[i], v, 0.0);
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (self.d(i, j), self.d(j, i));
                if a.is_finite() && b.is_finite() {
                    if (a - b).abs() > tau {
                        push(Axiom::Symmetry, &[i, j], a, b);
                    }
                    if a <= tau {
                        push(Axiom::Identity, &[i, j], a, tau);
                    }
                }
            }
        }
        if finite {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    for k in 0..n {
                        if k == i || k == j {
                            continue;
                        }
                        let lhs = self.d(i, j);
                        let rhs = self.d(i, k) + self.d(k, j);
                        if lhs > rhs + tau {
                            push(Axiom::Triangle, &[i, k, j], lhs, rhs);
                        }
                    }
                }
            }
        }
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    /// `η(x)`: smallest distance from point `i` to any other point.
    pub fn nearness_at(&self, i: usize) -> f64 {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &v)| v)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn nearness_of(&self, label: &str) -> Result<f64> {
        Ok(self.nearness_at(self.index_of(label)?))
    }

    /// `η(M)`: minimum of the per-point nearness.
    pub fn nearness(&self) -> f64 {
        (0..self.len())
            .map(|i| self.nearness_at(i))
            .fold(f64::INFINITY, f64::min)
    }

    /// `ζ(M)`: maximum of the per-point nearness.
    pub fn slack(&self) -> f64 {
        (0..self.len())
            .map(|i| self.nearness_at(i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `D(M)`: largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    pub fn stats(&self) -> SpaceStats {
        let per: Vec<(PointId, f64)> = (0..self.len())
            .map(|i| (self.points[i].clone(), self.nearness_at(i)))
            .collect();
        let nearness = per.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let slack = per.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        SpaceStats {
            nearness_per_point: per,
            nearness,
            slack,
            diameter: self.diameter(),
        }
    }

    /// Open ball `{x : d(center, x) < radius}` as sorted indices.
    pub fn ball_at(&self, center: usize, radius: f64) -> Result<Vec<usize>> {
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::NonPositive {
                name: "radius",
                value: radius,
            });
        }
        Ok((0..self.len())
            .filter(|&j| j == center || self.d(center, j) < radius)
            .collect())
    }

    pub fn ball(&self, center: &str, radius: f64) -> Result<Vec<PointId>> {
        let c = self.index_of(center)?;
        Ok(self
            .ball_at(c, radius)?
            .into_iter()
            .map(|i| self.points[i].clone())
            .collect())
    }
}

impl Default for FiniteMetricSpace {
    /// The two-point space at distance 1.
    fn default() -> Self {
        FiniteMetricSpace {
            points: Self::default_labels(2),
            dist: alloc::vec![0.0, 1.0, 1.0, 0.0],
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line(xs: &[f64]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_fn(
            FiniteMetricSpace::default_labels(xs.len()),
            DEFAULT_TOLERANCE,
            |i, j| (xs[i] - xs[j]).abs(),
        )
        .unwrap()
    }

    #[test]
    fn smallest_metric_is_valid() {
        let s = FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        assert!(s.validate().ok);
    }

    #[test]
    fn asymmetric_table_reports_symmetry() {
        let s = FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 1.0], vec![2.0, 0.0]],
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let r = s.validate();
        assert!(!r.ok);
        assert!(r.violations.iter().any(|v| v.axiom == Axiom::Symmetry));
    }

    #[test]
    fn collinear_points_and_broken_triangle() {
        let s = line(&[0.0, 1.0, 5.0]);
        assert!(s.validate().ok);
        let mut rows = s.rows();
        rows[0][2] = 10.0;
        rows[2][0] = 10.0;
        let bad = FiniteMetricSpace::new(s.points().to_vec(), rows, DEFAULT_TOLERANCE).unwrap();
        let r = bad.validate();
        assert!(!r.ok);
        // 10 > 1 + 4 through the middle point
        let v = r
            .violations
            .iter()
            .find(|v| v.axiom == Axiom::Triangle)
            .unwrap();
        assert_eq!(v.points, vec![PointId::from("p0"), "p1".into(), "p2".into()]);
        assert_eq!((v.lhs, v.rhs), (10.0, 5.0));
        // every violated orientation is reported, not just the first
        assert_eq!(
            r.violations
                .iter()
                .filter(|v| v.axiom == Axiom::Triangle)
                .count(),
            2
        );
    }

    #[test]
    fn shape_errors() {
        assert_eq!(
            FiniteMetricSpace::new(vec!["a".into(), "b".into()], vec![vec![0.0, 1.0]], 0.0),
            Err(Error::RowCount { rows: 1, points: 2 })
        );
        assert!(matches!(
            FiniteMetricSpace::new(
                vec!["a".into(), "b".into()],
                vec![vec![0.0, 1.0], vec![1.0]],
                0.0
            ),
            Err(Error::RowLength { row: 1, .. })
        ));
        assert_eq!(
            FiniteMetricSpace::new(vec!["a".into()], vec![vec![0.0]], 0.0),
            Err(Error::TooFewPoints(1))
        );
        assert!(matches!(
            FiniteMetricSpace::new(
                vec!["a".into(), "a".into()],
                vec![vec![0.0, 1.0], vec![1.0, 0.0]],
                0.0
            ),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn coincident_points_violate_identity() {
        let s = FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 1e-12], vec![1e-12, 0.0]],
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let r = s.validate();
        assert!(r.violations.iter().any(|v| v.axiom == Axiom::Identity));
    }

    #[test]
    fn nearness_on_harmonic_truncation() {
        let xs = [1.0, 0.5, 1.0 / 3.0, 0.25, 0.2];
        let s = line(&xs);
        let expected = (0.25f64 - 0.2).min(1.0 / 3.0 - 0.25);
        assert!((s.nearness_at(3) - expected).abs() < 1e-15);
        assert!((s.nearness_at(3) - 1.0 / 20.0).abs() < 1e-15);
        assert!(matches!(s.nearness_of("zz"), Err(Error::UnknownPoint(_))));
    }

    #[test]
    fn stats_on_truncated_u_set() {
        let s = line(&[2.5, 3.0, 10.0 / 3.0, 3.5]);
        let st = s.stats();
        // gaps 1/2, 1/3, 1/6: the last pair is the closest
        assert!((st.nearness - 1.0 / 6.0).abs() < 1e-12);
        assert!((st.slack - 0.5).abs() < 1e-12);
        assert!((st.diameter - 1.0).abs() < 1e-12);
    }

    #[test]
    fn open_ball_excludes_boundary() {
        let s = line(&[0.0, 1.0, 2.0]);
        assert_eq!(s.ball_at(1, 1.5).unwrap(), vec![0, 1, 2]);
        assert_eq!(s.ball_at(0, 1.0).unwrap(), vec![0]);
        assert!(s.ball_at(0, 0.0).is_err());
        assert!(s.ball("q", 1.0).is_err());
    }
}

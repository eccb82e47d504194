//! Side-by-side checks of the lexicographic product identities.
//!
//! Each `verify_*` computes the left-hand side from the constructed product
//! with the exact solver and the right-hand side from the factor spaces
//! alone, then compares. Reports carry enough witnesses (input tables, bases,
//! per-fiber dimensions, the special-class trace) to diagnose a mismatch
//! without rerunning anything.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::constructions::{gravitational, lexicographic, squash};
use crate::metric::{FiniteMetricSpace, MetricTable, PointId};
use crate::resolving::{metric_dimension, SolverConfig, DEFAULT_MAX_ENUMERATION_POINTS};
use crate::twins::{special_classes, twin_classes, SpecialClassSet};
use crate::{Error, Result};

/// Default limit on product size for exact verification.
pub const DEFAULT_MAX_PRODUCT_POINTS: usize = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    pub max_product_points: usize,
    pub max_enumeration_points: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_product_points: DEFAULT_MAX_PRODUCT_POINTS,
            max_enumeration_points: DEFAULT_MAX_ENUMERATION_POINTS,
        }
    }
}

impl Guards {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            max_enumeration_points: self.max_enumeration_points,
            ..SolverConfig::default()
        }
    }

    fn check_product(&self, nx: usize, ny: usize) -> Result<()> {
        let cardinality = nx * ny;
        if cardinality > self.max_product_points {
            return Err(Error::SizeGuard {
                guard: "max-product-points",
                cardinality,
                limit: self.max_product_points,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Dimension,
    Diameter,
    Squash,
    TwinsFreeCorollary,
    SmallDiameterCorollary,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Dimension => "dimension",
            Theorem::Diameter => "diameter",
            Theorem::Squash => "squash",
            Theorem::TwinsFreeCorollary => "twins_free_corollary",
            Theorem::SmallDiameterCorollary => "small_diameter_corollary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Integer(usize),
    Real(f64),
}

impl Quantity {
    pub fn as_f64(self) -> f64 {
        match self {
            Quantity::Integer(v) => v as f64,
            Quantity::Real(v) => v,
        }
    }
}

impl core::fmt::Display for Quantity {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Quantity::Integer(v) => write!(f, "{v}"),
            Quantity::Real(v) => write!(f, "{v}"),
        }
    }
}

/// Dimension and lexicographically least basis of one gravitational fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberDimension {
    pub base: PointId,
    pub nearness: f64,
    pub dimension: usize,
    pub basis: Vec<PointId>,
}

/// Right-hand side of the dimension formula with its parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaBreakdown {
    pub total: usize,
    pub fiber_sum: usize,
    pub fibers: Vec<FiberDimension>,
    pub special: SpecialClassSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionWitness {
    pub m: MetricTable,
    pub m2: MetricTable,
    pub product_points: usize,
    pub product_basis: Vec<PointId>,
    pub formula: FormulaBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterWitness {
    pub m: MetricTable,
    pub m2: MetricTable,
    pub base_diameter: f64,
    pub base_slack: f64,
    pub fiber_diameter: f64,
    pub product_diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquashWitness {
    pub m: MetricTable,
    pub m2: MetricTable,
    pub eta: f64,
    pub squashed: MetricTable,
    pub squashed_diameter: f64,
    pub base_points: usize,
    pub product_dimension: usize,
    pub product_basis: Vec<PointId>,
    pub fiber_dimension: usize,
    pub squashed_dimension: usize,
    /// `|X| · dim(M″)`; the report's `rhs` is `|X| · dim(M′)`.
    pub squashed_rhs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryWitness {
    pub m: MetricTable,
    pub m2: MetricTable,
    pub product_basis: Vec<PointId>,
    /// The general formula evaluated on the same inputs.
    pub formula_rhs: usize,
    pub fibers: Vec<FiberDimension>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witnesses {
    Dimension(DimensionWitness),
    Diameter(DiameterWitness),
    Squash(SquashWitness),
    Corollary(CorollaryWitness),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub pass: bool,
    pub witnesses: Witnesses,
}

/// A corollary whose premise does not hold for the given inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedCheck {
    pub theorem: Theorem,
    pub skipped: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum CheckOutcome {
    Checked(VerificationReport),
    Skipped(SkippedCheck),
}

impl CheckOutcome {
    pub fn theorem(&self) -> Theorem {
        match self {
            CheckOutcome::Checked(r) => r.theorem,
            CheckOutcome::Skipped(s) => s.theorem,
        }
    }

    /// Skipped checks count as passing.
    pub fn passed(&self) -> bool {
        match self {
            CheckOutcome::Checked(r) => r.pass,
            CheckOutcome::Skipped(_) => true,
        }
    }
}

fn fiber_dimensions(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    cfg: &SolverConfig,
) -> Result<Vec<FiberDimension>> {
    let mut out: Vec<FiberDimension> = Vec::with_capacity(m.len());
    for x in 0..m.len() {
        let nearness = m.nearness_at(x);
        // fibers depend on x only through η(x)
        let (dimension, basis) = match out.iter().find(|f| f.nearness == nearness) {
            Some(f) => (f.dimension, f.basis.clone()),
            None => {
                let r = metric_dimension(&gravitational(m2, nearness)?, cfg)?;
                (r.dimension, r.basis)
            }
        };
        out.push(FiberDimension {
            base: m.label(x).clone(),
            nearness,
            dimension,
            basis,
        });
    }
    Ok(out)
}

/// `Σ_x dim(M′_x) + Σ_{classes in X_Y} (|class| − 1)`, from the factors only.
pub fn formula_rhs(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    guards: &Guards,
) -> Result<FormulaBreakdown> {
    let cfg = guards.solver();
    let special = special_classes(m, m2, &cfg)?;
    let fibers = fiber_dimensions(m, m2, &cfg)?;
    let fiber_sum = fibers.iter().map(|f| f.dimension).sum();
    Ok(FormulaBreakdown {
        total: fiber_sum + special.extra_landmarks(),
        fiber_sum,
        fibers,
        special,
    })
}

fn product_dimension(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    guards: &Guards,
) -> Result<(usize, Vec<PointId>)> {
    guards.check_product(m.len(), m2.len())?;
    let product = lexicographic(m, m2)?;
    let r = metric_dimension(product.space(), &guards.solver())?;
    Ok((r.dimension, r.basis))
}

/// Exact `dim(M ∘ M′)` against the closed formula.
pub fn verify_dimension(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    guards: &Guards,
) -> Result<VerificationReport> {
    let (lhs, product_basis) = product_dimension(m, m2, guards)?;
    let formula = formula_rhs(m, m2, guards)?;
    Ok(VerificationReport {
        theorem: Theorem::Dimension,
        lhs: Quantity::Integer(lhs),
        rhs: Quantity::Integer(formula.total),
        pass: lhs == formula.total,
        witnesses: Witnesses::Dimension(DimensionWitness {
            m: m.into(),
            m2: m2.into(),
            product_points: m.len() * m2.len(),
            product_basis,
            formula,
        }),
    })
}

/// `D(M ∘ M′) = max{D(M), min{2ζ(M), D(M′)}}`, compared within `τ`.
pub fn verify_diameter(m: &FiniteMetricSpace, m2: &FiniteMetricSpace) -> Result<VerificationReport> {
    let product = lexicographic(m, m2)?;
    let lhs = product.space().diameter();
    let (dm, zeta, dm2) = (m.diameter(), m.slack(), m2.diameter());
    let rhs = dm.max((2.0 * zeta).min(dm2));
    Ok(VerificationReport {
        theorem: Theorem::Diameter,
        lhs: Quantity::Real(lhs),
        rhs: Quantity::Real(rhs),
        pass: product.space().same(lhs, rhs),
        witnesses: Witnesses::Diameter(DiameterWitness {
            m: m.into(),
            m2: m2.into(),
            base_diameter: dm,
            base_slack: zeta,
            fiber_diameter: dm2,
            product_diameter: lhs,
        }),
    })
}

/// With `M″ = squash(η(M), M′)`: `dim(M ∘ M″) = |X|·dim(M′) = |X|·dim(M″)`
/// and `D(M″) < η(M)`.
pub fn verify_squash(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    guards: &Guards,
) -> Result<VerificationReport> {
    let eta = m.nearness();
    let squashed = squash(eta, m2)?;
    let (lhs, product_basis) = product_dimension(m, &squashed, guards)?;
    let cfg = guards.solver();
    let fiber_dimension = metric_dimension(m2, &cfg)?.dimension;
    let squashed_dimension = metric_dimension(&squashed, &cfg)?.dimension;
    let nx = m.len();
    let (rhs, squashed_rhs) = (nx * fiber_dimension, nx * squashed_dimension);
    let squashed_diameter = squashed.diameter();
    Ok(VerificationReport {
        theorem: Theorem::Squash,
        lhs: Quantity::Integer(lhs),
        rhs: Quantity::Integer(rhs),
        pass: lhs == rhs && rhs == squashed_rhs && squashed_diameter < eta,
        witnesses: Witnesses::Squash(SquashWitness {
            m: m.into(),
            m2: m2.into(),
            eta,
            squashed: (&squashed).into(),
            squashed_diameter,
            base_points: nx,
            product_dimension: lhs,
            product_basis,
            fiber_dimension,
            squashed_dimension,
            squashed_rhs,
        }),
    })
}

/// The twins-free corollary `dim = Σ_x dim(M′_x)` and the small-diameter
/// corollary `dim = |X|·dim(M′)`. Corollaries whose premise fails are
/// reported as skipped.
pub fn verify_corollaries(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    guards: &Guards,
) -> Result<Vec<CheckOutcome>> {
    let twins_free = twin_classes(m)?.is_twins_free();
    let (eta, d2) = (m.nearness(), m2.diameter());
    let small = d2 < eta;
    if !twins_free && !small {
        return Ok(alloc::vec![
            skipped(Theorem::TwinsFreeCorollary, twins_free_reason()),
            skipped(Theorem::SmallDiameterCorollary, small_reason(d2, eta)),
        ]);
    }

    let (lhs, product_basis) = product_dimension(m, m2, guards)?;
    let formula = formula_rhs(m, m2, guards)?;
    let witness = |fibers: Vec<FiberDimension>| {
        Witnesses::Corollary(CorollaryWitness {
            m: m.into(),
            m2: m2.into(),
            product_basis: product_basis.clone(),
            formula_rhs: formula.total,
            fibers,
        })
    };
    let mut out = Vec::with_capacity(2);
    out.push(if twins_free {
        CheckOutcome::Checked(VerificationReport {
            theorem: Theorem::TwinsFreeCorollary,
            lhs: Quantity::Integer(lhs),
            rhs: Quantity::Integer(formula.fiber_sum),
            pass: lhs == formula.fiber_sum,
            witnesses: witness(formula.fibers.clone()),
        })
    } else {
        skipped(Theorem::TwinsFreeCorollary, twins_free_reason())
    });
    out.push(if small {
        let rhs = m.len() * metric_dimension(m2, &guards.solver())?.dimension;
        CheckOutcome::Checked(VerificationReport {
            theorem: Theorem::SmallDiameterCorollary,
            lhs: Quantity::Integer(lhs),
            rhs: Quantity::Integer(rhs),
            pass: lhs == rhs,
            witnesses: witness(formula.fibers.clone()),
        })
    } else {
        skipped(Theorem::SmallDiameterCorollary, small_reason(d2, eta))
    });
    Ok(out)
}

fn skipped(theorem: Theorem, reason: String) -> CheckOutcome {
    CheckOutcome::Skipped(SkippedCheck {
        theorem,
        skipped: true,
        reason,
    })
}

fn twins_free_reason() -> String {
    "base space has a non-singleton twin class".into()
}

fn small_reason(d2: f64, eta: f64) -> String {
    alloc::format!("fiber diameter {d2} is not below base nearness {eta}")
}

/// Every check in a fixed order: dimension, diameter, squash, corollaries.
pub fn verify_all(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    guards: &Guards,
) -> Result<Vec<CheckOutcome>> {
    let mut out = alloc::vec![
        CheckOutcome::Checked(verify_dimension(m, m2, guards)?),
        CheckOutcome::Checked(verify_diameter(m, m2)?),
        CheckOutcome::Checked(verify_squash(m, m2, guards)?),
    ];
    out.extend(verify_corollaries(m, m2, guards)?);
    Ok(out)
}

//! Twin equivalence classes and the special class set.
//!
//! Points `a` and `b` are twins when `d(a, c) = d(b, c)` for every third
//! point `c`. The relation is an equivalence, every non-singleton class has
//! a constant internal distance `ℓ`, and its members share the same nearness.
//!
//! A non-singleton class is *special* for a fiber space `M′` when, for every
//! member `x` and every metric basis `S` of the gravitational fiber
//! `M′_{η(x)}`, some fiber point sits at capped distance exactly `ℓ` from all
//! of `S`. Each special class adds `|class| − 1` landmarks to a product basis.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::constructions::gravitational;
use crate::metric::{FiniteMetricSpace, PointId};
use crate::resolving::{metric_dimension, SolverConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwinClass {
    pub members: Vec<PointId>,
    #[serde(skip)]
    pub indices: Vec<usize>,
    /// Constant distance `ℓ` between members; `None` for singletons.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gap: Option<f64>,
    /// Common nearness `η(x)` of the members; `None` for singletons.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub class_nearness: Option<f64>,
}

impl TwinClass {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.indices.len() == 1
    }
}

/// Twin classes in label order of their first member; members in label order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwinPartition {
    pub classes: Vec<TwinClass>,
}

impl TwinPartition {
    pub fn is_twins_free(&self) -> bool {
        self.classes.iter().all(TwinClass::is_singleton)
    }

    pub fn non_singleton(&self) -> impl Iterator<Item = &TwinClass> {
        self.classes.iter().filter(|c| !c.is_singleton())
    }

    /// Index of the class containing point `i`.
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.indices.contains(&i))
    }
}

/// `d(a, c) = d(b, c)` for every `c ∉ {a, b}`, at the space's tolerance.
pub fn are_twins(space: &FiniteMetricSpace, a: usize, b: usize) -> bool {
    (0..space.len())
        .filter(|&c| c != a && c != b)
        .all(|c| space.same(space.d(a, c), space.d(b, c)))
}

/// Partitions the space into twin classes. Fails if tolerance makes the
/// pairwise relation non-transitive.
pub fn twin_classes(space: &FiniteMetricSpace) -> Result<TwinPartition> {
    let n = space.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| space.label(a).cmp(space.label(b)));

    let mut twin = alloc::vec![false; n * n];
    for a in 0..n {
        twin[a * n + a] = true;
        for b in (a + 1)..n {
            let t = are_twins(space, a, b);
            twin[a * n + b] = t;
            twin[b * n + a] = t;
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &p in &order {
        match groups.iter_mut().find(|g| twin[g[0] * n + p]) {
            Some(g) => g.push(p),
            None => groups.push(alloc::vec![p]),
        }
    }

    let mut class = alloc::vec![0; n];
    for (ci, g) in groups.iter().enumerate() {
        for &p in g {
            class[p] = ci;
        }
    }
    let consistent = (0..n).all(|a| (0..n).all(|b| twin[a * n + b] == (class[a] == class[b])));
    if !consistent {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a != c && twin[a * n + b] && twin[b * n + c] && !twin[a * n + c] {
                        return Err(Error::TwinsNotTransitive {
                            a: space.label(a).as_str().into(),
                            b: space.label(b).as_str().into(),
                            c: space.label(c).as_str().into(),
                        });
                    }
                }
            }
        }
    }

    let classes = groups
        .into_iter()
        .map(|indices| {
            let (gap, class_nearness) = if indices.len() > 1 {
                (
                    Some(space.d(indices[0], indices[1])),
                    Some(space.nearness_at(indices[0])),
                )
            } else {
                (None, None)
            };
            TwinClass {
                members: indices.iter().map(|&i| space.label(i).clone()).collect(),
                indices,
                gap,
                class_nearness,
            }
        })
        .collect();
    Ok(TwinPartition { classes })
}

pub fn is_twins_free(space: &FiniteMetricSpace) -> Result<bool> {
    Ok(twin_classes(space)?.is_twins_free())
}

/// One metric basis of a member's fiber and its equidistant witness, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCheck {
    pub basis: Vec<PointId>,
    pub witness: Option<PointId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberCheck {
    pub point: PointId,
    pub nearness: f64,
    pub fiber_dimension: usize,
    pub bases: Vec<BasisCheck>,
}

impl MemberCheck {
    pub fn passes(&self) -> bool {
        self.bases.iter().all(|b| b.witness.is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCheck {
    pub members: Vec<PointId>,
    pub gap: f64,
    pub included: bool,
    pub checks: Vec<MemberCheck>,
}

/// `X_Y` with the full membership trace for every non-singleton class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialClassSet {
    pub classes: Vec<ClassCheck>,
}

impl SpecialClassSet {
    pub fn members(&self) -> impl Iterator<Item = &ClassCheck> {
        self.classes.iter().filter(|c| c.included)
    }

    pub fn is_empty(&self) -> bool {
        self.members().next().is_none()
    }

    /// `Σ (|class| − 1)` over the special classes.
    pub fn extra_landmarks(&self) -> usize {
        self.members().map(|c| c.members.len() - 1).sum()
    }
}

/// Computes `X_Y` literally: every member of every non-singleton twin class
/// of `m`, every metric basis of its gravitational fiber over `m2`.
///
/// Fibers larger than `config.max_enumeration_points` are rejected, since
/// membership needs the complete list of bases.
pub fn special_classes(
    m: &FiniteMetricSpace,
    m2: &FiniteMetricSpace,
    config: &SolverConfig,
) -> Result<SpecialClassSet> {
    let partition = twin_classes(m)?;
    let cfg = SolverConfig {
        enumerate_all: true,
        ..*config
    };
    let tolerance = m.tolerance().max(m2.tolerance());
    let mut classes = Vec::new();
    for class in partition.non_singleton() {
        let gap = class.gap.expect("non-singleton class has a gap");
        let mut checks = Vec::with_capacity(class.len());
        for &x in &class.indices {
            let nearness = m.nearness_at(x);
            let fiber = gravitational(m2, nearness)?;
            let res = metric_dimension(&fiber, &cfg)?;
            let mut bases = Vec::new();
            for basis in res.all_basis_indices.as_deref().unwrap_or_default() {
                let witnesses: Vec<usize> = (0..fiber.len())
                    .filter(|&z| {
                        basis
                            .iter()
                            .all(|&s| (fiber.d(z, s) - gap).abs() <= tolerance)
                    })
                    .collect();
                if witnesses.len() > 1 {
                    return Err(Error::WitnessNotUnique {
                        count: witnesses.len(),
                    });
                }
                bases.push(BasisCheck {
                    basis: basis.iter().map(|&i| fiber.label(i).clone()).collect(),
                    witness: witnesses.first().map(|&z| fiber.label(z).clone()),
                });
            }
            checks.push(MemberCheck {
                point: m.label(x).clone(),
                nearness,
                fiber_dimension: res.dimension,
                bases,
            });
        }
        classes.push(ClassCheck {
            members: class.members.clone(),
            gap,
            included: checks.iter().all(MemberCheck::passes),
            checks,
        });
    }
    Ok(SpecialClassSet { classes })
}

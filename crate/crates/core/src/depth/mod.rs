//! Depth functions and the [`DepthSpec`] configuration that selects them.

mod local;
mod lp;
mod projection;
mod student;
mod tukey;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::DataMatrix;

pub(crate) use local::ceil_fraction;
pub use local::local_depth;
pub use lp::{lp_depth, Weight};
pub use projection::{projection_depth, unit_directions, ProjectionDepth};
pub use student::{score_points, student_depth};
pub use tukey::{halfspace_count, tukey_depth_2d};

pub const DEFAULT_DIRECTIONS: usize = 1000;

/// Which depth function to evaluate, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DepthSpec {
    /// Weighted L^p depth.
    LpWeighted { p: f64, weight: Weight },
    /// Projection depth over seeded random directions (exact for d = 1).
    Projection { n_directions: usize, seed: u64 },
    /// Exact halfspace depth in the plane.
    #[serde(rename = "tukey2d")]
    Tukey2D,
    /// Local depth with locality `beta` over a non-local base depth.
    Local { beta: f64, base: Box<DepthSpec> },
    /// Location-scale depth. Evaluated points are `(mu, sigma)` pairs and the
    /// reference sample has a single column.
    Student,
}

impl DepthSpec {
    /// L^p depth with the identity weight.
    pub fn lp(p: f64) -> Self {
        DepthSpec::LpWeighted {
            p,
            weight: Weight::Identity,
        }
    }

    pub fn projection(n_directions: usize, seed: u64) -> Self {
        DepthSpec::Projection { n_directions, seed }
    }

    pub fn local(beta: f64, base: DepthSpec) -> Self {
        DepthSpec::Local {
            beta,
            base: Box::new(base),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DepthSpec::LpWeighted { .. } => "lp_weighted",
            DepthSpec::Projection { .. } => "projection",
            DepthSpec::Tukey2D => "tukey2d",
            DepthSpec::Local { .. } => "local",
            DepthSpec::Student => "student",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DepthSpec::LpWeighted { p, weight } => {
                lp::validate_p(*p)?;
                weight.validate()
            }
            DepthSpec::Projection { n_directions, .. } => {
                if *n_directions == 0 {
                    Err(Error::InvalidSpec("n_directions must be positive".into()))
                } else {
                    Ok(())
                }
            }
            DepthSpec::Tukey2D | DepthSpec::Student => Ok(()),
            DepthSpec::Local { beta, base } => local::validate_local(*beta, base),
        }
    }
}

impl Default for DepthSpec {
    fn default() -> Self {
        DepthSpec::lp(2.0)
    }
}

/// Depths of a batch of points against one reference sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthResult {
    pub depths: Vec<f64>,
    pub spec: DepthSpec,
    pub reference_sample: String,
}

#[derive(Debug, Clone)]
enum Prepared {
    Lp { p: f64, weight: Weight },
    Projection(ProjectionDepth),
    Tukey,
    Local { beta: f64, base: DepthSpec },
    LocalLp(local::LocalLp),
    Student(Vec<f64>),
}

/// A depth function bound to a reference sample.
///
/// Construction does the per-reference work once (the projection direction
/// set and its medians/MADs), so repeated evaluations are cheap and
/// independent of evaluation order.
#[derive(Debug, Clone)]
pub struct DepthEvaluator<'a> {
    reference: &'a DataMatrix,
    prepared: Prepared,
}

impl<'a> DepthEvaluator<'a> {
    pub fn new(reference: &'a DataMatrix, spec: &DepthSpec) -> Result<Self> {
        spec.validate()?;
        let prepared = match spec {
            DepthSpec::LpWeighted { p, weight } => Prepared::Lp {
                p: *p,
                weight: *weight,
            },
            DepthSpec::Projection { n_directions, seed } => {
                Prepared::Projection(ProjectionDepth::new(reference, *n_directions, *seed)?)
            }
            DepthSpec::Tukey2D => {
                reference.check_dim(2)?;
                Prepared::Tukey
            }
            DepthSpec::Local { beta, base } => match **base {
                DepthSpec::LpWeighted { p, weight } => {
                    Prepared::LocalLp(local::LocalLp::new(reference, *beta, p, weight))
                }
                _ => Prepared::Local {
                    beta: *beta,
                    base: (**base).clone(),
                },
            },
            DepthSpec::Student => {
                reference.check_dim(1)?;
                Prepared::Student(reference.column(0))
            }
        };
        Ok(Self {
            reference,
            prepared,
        })
    }

    /// Dimension expected of evaluated points.
    pub fn point_dim(&self) -> usize {
        match self.prepared {
            Prepared::Student(_) => 2,
            _ => self.reference.ncols(),
        }
    }

    pub fn depth(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.point_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.point_dim(),
                got: x.len(),
            });
        }
        match &self.prepared {
            Prepared::Lp { p, weight } => Ok(lp::lp_depth_unchecked(x, self.reference, *p, *weight)),
            Prepared::Projection(pd) => pd.depth(x),
            Prepared::Tukey => Ok(tukey::tukey_unchecked([x[0], x[1]], self.reference)),
            Prepared::Local { beta, base } => local::local_unchecked(x, self.reference, *beta, base),
            Prepared::LocalLp(prep) => prep.depth(x, self.reference),
            Prepared::Student(values) => student::student_depth(x[0], x[1], values),
        }
    }

    /// Depth of every row of `points`, evaluated in parallel; the output order
    /// follows the rows.
    pub fn depths(&self, points: &DataMatrix) -> Result<Vec<f64>> {
        let rows: Vec<&[f64]> = points.rows().collect();
        rows.par_iter().map(|r| self.depth(r)).collect()
    }
}

/// Depth of a single point with respect to `reference`.
pub fn depth(x: &[f64], reference: &DataMatrix, spec: &DepthSpec) -> Result<f64> {
    DepthEvaluator::new(reference, spec)?.depth(x)
}

/// Depth of each row of `sample` with respect to `reference`.
pub fn depth_all(sample: &DataMatrix, reference: &DataMatrix, spec: &DepthSpec) -> Result<DepthResult> {
    let eval = DepthEvaluator::new(reference, spec)?;
    if sample.ncols() != eval.point_dim() {
        return Err(Error::DimensionMismatch {
            expected: eval.point_dim(),
            got: sample.ncols(),
        });
    }
    Ok(DepthResult {
        depths: eval.depths(sample)?,
        spec: spec.clone(),
        reference_sample: reference.name().to_string(),
    })
}

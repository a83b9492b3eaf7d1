use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating point scalar used by the set-function algebra.
///
/// Tolerances are per type: the `f64` values are the ones the rest of the
/// crate is calibrated against; `f32` gets looser constants matching its
/// precision.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Equality tolerance for derived quantities.
    const EPS: Self;
    /// Slack allowed when validating monotonicity.
    const MONO_EPS: Self;
    /// LP feasibility tolerance.
    const FEAS_EPS: Self;
    /// LP pivot tolerance.
    const PIVOT_EPS: Self;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Scalar for f64 {
    const EPS: f64 = 1e-9;
    const MONO_EPS: f64 = 1e-12;
    const FEAS_EPS: f64 = 1e-7;
    const PIVOT_EPS: f64 = 1e-10;
}

impl Scalar for f32 {
    const EPS: f32 = 1e-5;
    const MONO_EPS: f32 = 1e-6;
    const FEAS_EPS: f32 = 1e-4;
    const PIVOT_EPS: f32 = 1e-6;
}

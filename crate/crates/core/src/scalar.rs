// SPDX-License-Identifier: Apache-2.0

//! Floating-point scalar abstraction shared by the simulator and the cost model.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar usable for amplitudes, durations and probabilities: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal or gate parameter.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every float type")
    }

    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize is representable in every float type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

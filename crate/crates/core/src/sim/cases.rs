use std::fmt;

use crate::scalar::Int;

/// Where `a + delta_i` falls relative to `[0, d)` across all `i`.
///
/// Under `|delta_i| < d/4` these are mutually exclusive and exhaustive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WrapCase {
    /// every `a + delta_i < 0`
    A,
    /// every `a + delta_i >= d`
    B,
    /// every `a + delta_i` in `[0, d)`
    C,
    /// some below 0, some not
    D,
    /// some at or above `d`, some not
    E,
}

impl WrapCase {
    /// The constant `gamma_hat_i - gamma_i` the extremes algorithm produces.
    pub fn digit_shift(self) -> i32 {
        match self {
            WrapCase::A => -1,
            WrapCase::C | WrapCase::D => 0,
            WrapCase::B | WrapCase::E => 1,
        }
    }

    pub fn is_low_spread(self) -> bool {
        matches!(self, WrapCase::A | WrapCase::B | WrapCase::C)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WrapCase::A => "a",
            WrapCase::B => "b",
            WrapCase::C => "c",
            WrapCase::D => "d",
            WrapCase::E => "e",
        }
    }
}

impl fmt::Display for WrapCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ground-truth case from the common remainder and the errors.
///
/// Outside the error bound a vector can both underflow and overflow; it is
/// then classified by the underflow.
pub fn classify<T: Int>(a: &T, d: &T, delta: &[T]) -> WrapCase {
    let shifted: Vec<T> = delta.iter().map(|e| a.clone() + e.clone()).collect();
    let below = shifted.iter().filter(|s| s.is_negative()).count();
    let above = shifted.iter().filter(|s| *s >= d).count();
    let k = shifted.len();
    if below > 0 {
        if below == k {
            WrapCase::A
        } else {
            WrapCase::D
        }
    } else if above > 0 {
        if above == k {
            WrapCase::B
        } else {
            WrapCase::E
        }
    } else {
        WrapCase::C
    }
}

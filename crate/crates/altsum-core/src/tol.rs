//! Shared numeric tolerance.
//!
//! Every verdict in the crate compares violations against the same
//! relative-absolute hybrid: `TOL_BASE · max(1, |v₁|, …, |vₖ|)` over the
//! values entering the comparison. The absolute floor keeps step
//! functions (floor) exact near zero; the relative part absorbs double
//! rounding for fast-growing functions like `exp` and large powers.

use crate::math;

/// Base relative tolerance shared by all checkers.
pub const TOL_BASE: f64 = 1e-9;

/// Hybrid tolerance over the values entering a comparison.
#[inline]
pub fn hybrid_tol(values: &[f64]) -> f64 {
    let mut scale = 1.0_f64;
    for &v in values {
        let a = math::abs(v);
        if a > scale {
            scale = a;
        }
    }
    TOL_BASE * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floors_at_one() {
        assert_eq!(hybrid_tol(&[0.0, 1e-30]), TOL_BASE);
    }

    #[test]
    fn scales_with_magnitude() {
        assert_eq!(hybrid_tol(&[2.0, -8.0, 4.0]), 8.0 * TOL_BASE);
    }
}

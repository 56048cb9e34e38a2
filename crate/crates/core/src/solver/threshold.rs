//! One-dimensional penalized least-squares solutions.
//!
//! With standardized columns (`‖xⱼ‖² = n`) the coordinate-wise problem is
//! `min_b ½(z − b)² + P_λ(b)` where `z` is the partial-residual
//! correlation. These functions return its exact minimizer.

use super::Penalty;

/// `sign(z) · max(|z| − t, 0)`.
#[inline]
pub fn soft_threshold(z: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Scalar minimizer of `½(z − b)² + P_λ(b)` for SCAD and MCP.
///
/// Regime boundaries belong to the lower, more shrinking regime. For the
/// convex penalties this reduces to the soft threshold (Relaxed Lasso uses
/// `λφ`).
pub fn nonconvex_threshold(z: f64, lambda: f64, penalty: Penalty) -> f64 {
    match penalty {
        Penalty::Lasso => soft_threshold(z, lambda),
        Penalty::RelaxedLasso { phi } => soft_threshold(z, lambda * phi),
        Penalty::Mcp { gamma } => {
            if z.abs() <= gamma * lambda {
                soft_threshold(z, lambda) / (1.0 - 1.0 / gamma)
            } else {
                z
            }
        }
        Penalty::Scad { gamma } => {
            let a = z.abs();
            if a <= 2.0 * lambda {
                soft_threshold(z, lambda)
            } else if a <= gamma * lambda {
                ((gamma - 1.0) * z - z.signum() * gamma * lambda) / (gamma - 2.0)
            } else {
                z
            }
        }
    }
}

/// Penalty value `P_λ(b)` for a single coefficient.
pub fn penalty_value(b: f64, lambda: f64, penalty: Penalty) -> f64 {
    let a = b.abs();
    match penalty {
        Penalty::Lasso => lambda * a,
        Penalty::RelaxedLasso { phi } => lambda * phi * a,
        Penalty::Mcp { gamma } => {
            if a <= gamma * lambda {
                lambda * a - a * a / (2.0 * gamma)
            } else {
                0.5 * gamma * lambda * lambda
            }
        }
        Penalty::Scad { gamma } => {
            if a <= lambda {
                lambda * a
            } else if a <= gamma * lambda {
                (2.0 * gamma * lambda * a - a * a - lambda * lambda) / (2.0 * (gamma - 1.0))
            } else {
                0.5 * lambda * lambda * (gamma + 1.0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(2.0, 0.5), 1.5);
        assert_eq!(soft_threshold(-0.3, 0.5), 0.0);
        assert_eq!(soft_threshold(-2.0, 0.5), -1.5);
    }

    #[test]
    fn nonconvex_examples() {
        assert_eq!(nonconvex_threshold(10.0, 1.0, Penalty::Mcp { gamma: 3.0 }), 10.0);
        assert_relative_eq!(
            nonconvex_threshold(1.5, 1.0, Penalty::Scad { gamma: 3.7 }),
            0.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            nonconvex_threshold(1.8, 1.0, Penalty::Mcp { gamma: 3.0 }),
            1.2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn penalties_are_continuous_at_knots() {
        let (l, g) = (0.7, 3.7);
        for knot in [l, g * l] {
            let below = penalty_value(knot - 1e-9, l, Penalty::Scad { gamma: g });
            let above = penalty_value(knot + 1e-9, l, Penalty::Scad { gamma: g });
            assert!((below - above).abs() < 1e-8);
        }
        let knot = 3.0 * l;
        let below = penalty_value(knot - 1e-9, l, Penalty::Mcp { gamma: 3.0 });
        let above = penalty_value(knot + 1e-9, l, Penalty::Mcp { gamma: 3.0 });
        assert!((below - above).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn thresholds_are_odd(z in -20.0f64..20.0, lambda in 0.01f64..5.0, g in 2.1f64..6.0) {
            for pen in [Penalty::Lasso, Penalty::Scad { gamma: g }, Penalty::Mcp { gamma: g }] {
                prop_assert_eq!(nonconvex_threshold(-z, lambda, pen), -nonconvex_threshold(z, lambda, pen));
            }
        }
    }
}

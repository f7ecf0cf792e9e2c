use crate::error::{Error, Result};

/// Which three-point, second-order stencil was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilKind {
    Central,
    /// One-sided toward larger arguments; used at the lower domain edge.
    Forward,
    /// One-sided toward smaller arguments; used at the upper domain edge.
    Backward,
}

/// A first-derivative stencil: sample the function at `points` and combine
/// the values with `weights`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub kind: StencilKind,
    pub points: [f64; 3],
    pub weights: [f64; 3],
}

impl Stencil {
    /// Picks a central stencil at `x` when `[x - h, x + h]` lies inside
    /// `[lo, hi)`, otherwise the one-sided second-order stencil that stays
    /// inside. `hi` itself is never sampled.
    pub fn choose(x: f64, h: f64, lo: f64, hi: f64) -> Result<Stencil> {
        if !(h > 0.0) {
            return Err(Error::DomainError(format!("step must be positive, got {h}")));
        }
        let c = 0.5 / h;
        if x - h >= lo && x + h < hi {
            Ok(Stencil {
                kind: StencilKind::Central,
                points: [x - h, x, x + h],
                weights: [-c, 0.0, c],
            })
        } else if x + 2.0 * h < hi && x >= lo {
            Ok(Stencil {
                kind: StencilKind::Forward,
                points: [x, x + h, x + 2.0 * h],
                weights: [-3.0 * c, 4.0 * c, -c],
            })
        } else if x - 2.0 * h >= lo && x < hi {
            Ok(Stencil {
                kind: StencilKind::Backward,
                points: [x - 2.0 * h, x - h, x],
                weights: [c, -4.0 * c, 3.0 * c],
            })
        } else {
            Err(Error::DomainError(format!(
                "no stencil of step {h} fits at {x} inside [{lo}, {hi})"
            )))
        }
    }

    /// Combines function values sampled at `self.points`.
    pub fn apply(&self, values: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for (w, v) in self.weights.iter().zip(values) {
            if *w != 0.0 {
                acc += w * v;
            }
        }
        acc
    }

    pub fn is_one_sided(&self) -> bool {
        self.kind != StencilKind::Central
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn derivative(f: impl Fn(f64) -> f64, s: &Stencil) -> f64 {
        s.apply(s.points.map(f))
    }

    #[test]
    fn central_in_the_interior() {
        let s = Stencil::choose(0.5, 1e-5, 0.0, 1.0).unwrap();
        assert_eq!(s.kind, StencilKind::Central);
        let d = derivative(f64::exp, &s);
        assert!((d - 0.5f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn forward_at_lower_edge_is_second_order() {
        let s = Stencil::choose(0.0, 1e-3, 0.0, 1.0).unwrap();
        assert_eq!(s.kind, StencilKind::Forward);
        // Exact on quadratics.
        let d = derivative(|x| 3.0 * x * x - 2.0 * x + 1.0, &s);
        assert!((d + 2.0).abs() < 1e-12);
    }

    #[test]
    fn backward_at_upper_edge() {
        let s = Stencil::choose(0.99, 1e-2, 0.0, 0.995).unwrap();
        assert_eq!(s.kind, StencilKind::Backward);
        assert!(s.points.iter().all(|&p| p < 0.995));
        let d = derivative(|x| x * x, &s);
        assert!((d - 1.98).abs() < 1e-12);
    }

    #[test]
    fn too_narrow_domain() {
        assert!(Stencil::choose(0.0, 1e-2, 0.0, 0.015).is_err());
    }
}

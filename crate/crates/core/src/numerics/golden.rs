#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub value: f64,
    /// Final bracket width.
    pub width: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// shrinking the bracket until its width is at most `tol`.
pub fn golden_section_max<F>(f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> GoldenResult
where
    F: Fn(f64) -> f64,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;

    while (b - a) > tol && iterations < max_iter {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        iterations += 1;
    }

    let (x, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    GoldenResult {
        x,
        value,
        width: b - a,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_peak() {
        let r = golden_section_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10, 500);
        assert!(r.width <= 1e-10);
        // Flat top: location is resolved only to ~sqrt(eps).
        assert!((r.x - 0.3).abs() < 1e-7);
    }

    #[test]
    fn peak_at_left_edge() {
        let r = golden_section_max(|x| -x, 0.0, 1.0, 1e-10, 500);
        assert!(r.x < 1e-9);
    }

    #[test]
    fn log_objective() {
        // ln(1 - t) + 2 t peaks at t = 1/2.
        let r = golden_section_max(|t: f64| (1.0 - t).ln() + 2.0 * t, 0.0, 0.99, 1e-10, 500);
        assert!((r.x - 0.5).abs() < 1e-7);
    }
}

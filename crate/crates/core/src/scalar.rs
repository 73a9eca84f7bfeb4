//! One-dimensional maximization and root bracketing.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `rel_tol * |x|` and returns the
/// best point seen together with its value. `f` is assumed unimodal on the
/// bracket.
pub fn golden_section_max<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..500 {
        if hi - lo <= rel_tol * x1.abs().max(x2.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Bisection for a sign change of `g` on `[lo, hi]`, given `g(lo) > 0 >= g(hi)`.
///
/// Returns the final bracket once `hi - lo <= rel_tol * hi`.
pub fn bisect_decreasing<G, E>(mut g: G, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<(f64, f64), E>
where
    G: FnMut(f64) -> Result<f64, E>,
{
    for _ in 0..2000 {
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_section_max(|x| -(x - 1.7).powi(2) + 3.0, 0.0, 10.0, 1e-10);
        assert!((x - 1.7).abs() < 1e-7);
        assert!((fx - 3.0).abs() < 1e-12);
    }

    #[test]
    fn golden_handles_edge_maximum() {
        let (x, _) = golden_section_max(|x| x, 1.0, 2.0, 1e-10);
        assert!((x - 2.0).abs() < 1e-8);
    }

    #[test]
    fn bisection_brackets_root() {
        let (lo, hi) = bisect_decreasing::<_, ()>(|x| Ok(2.0 - x * x), 0.0, 4.0, 1e-12).unwrap();
        assert!(lo <= 2f64.sqrt() && 2f64.sqrt() <= hi);
        assert!(hi - lo <= 1e-12 * hi);
    }

    #[test]
    fn bisection_propagates_errors() {
        let r = bisect_decreasing(|_| Err::<f64, &str>("boom"), 0.0, 1.0, 1e-6);
        assert_eq!(r, Err("boom"));
    }
}

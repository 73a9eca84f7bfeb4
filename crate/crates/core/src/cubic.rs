//! Real roots of a cubic polynomial.

/// Real roots of `a x^3 + b x^2 + c x + d`, ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubicRoots {
    One(f64),
    Three([f64; 3]),
}

impl CubicRoots {
    pub fn as_slice(&self) -> &[f64] {
        match self {
            CubicRoots::One(r) => std::slice::from_ref(r),
            CubicRoots::Three(r) => r,
        }
    }
}

fn eval(coef: [f64; 4], x: f64) -> (f64, f64) {
    let [a, b, c, d] = coef;
    let p = ((a * x + b) * x + c) * x + d;
    let dp = (3.0 * a * x + 2.0 * b) * x + c;
    (p, dp)
}

/// Newton iterations on the original polynomial, kept only while they
/// reduce the residual.
fn polish(coef: [f64; 4], mut x: f64) -> f64 {
    let (mut p, mut dp) = eval(coef, x);
    for _ in 0..4 {
        if p == 0.0 || dp == 0.0 {
            break;
        }
        let next = x - p / dp;
        let (pn, dpn) = eval(coef, next);
        if pn.abs() >= p.abs() {
            break;
        }
        x = next;
        p = pn;
        dp = dpn;
    }
    x
}

/// Trigonometric method when the discriminant admits three real roots,
/// Cardano's formula otherwise, each root finished with a Newton polish.
///
/// Panics if `a == 0`.
pub fn real_roots(a: f64, b: f64, c: f64, d: f64) -> CubicRoots {
    assert!(a != 0.0, "leading coefficient must be non-zero");
    let coef = [a, b, c, d];
    let (b, c, d) = (b / a, c / a, d / a);
    // x = t - b/3 gives t^3 + p t + q = 0
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    if disc > 0.0 {
        let s = disc.sqrt();
        // pick the sign that avoids cancellation
        let u = (-q / 2.0 - s.copysign(q)).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        CubicRoots::One(polish(coef, t - shift))
    } else if p == 0.0 {
        let r = polish(coef, -shift);
        CubicRoots::Three([r, r, r])
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
        let mut roots = [0, 1, 2].map(|k| polish(coef, m * (theta - two_pi_3 * k as f64).cos() - shift));
        roots.sort_by(|x, y| x.total_cmp(y));
        CubicRoots::Three(roots)
    }
}

//! One-dimensional helpers: golden-section minimization and a bracketed
//! bisection root finder with a Newton polish.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug)]
pub struct LineMinimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `resolution`.
///
/// The returned point is the best evaluated abscissa, endpoints included, so
/// a minimizer sitting on the window boundary is still reported exactly.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, resolution: f64) -> LineMinimum {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while (b - a).abs() > resolution {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let mid = 0.5 * (a + b);
    [(mid, f(mid)), (c, fc), (d, fd), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold(
            LineMinimum { x: mid, value: f64::INFINITY, iterations },
            |best, (x, v)| if v < best.value { LineMinimum { x, value: v, iterations } } else { best },
        )
}

/// Root of an increasing function `g` on `[lo, hi]` with `g(lo) <= 0 <= g(hi)`.
///
/// Bisection narrows the bracket to `1e-6`, then safeguarded Newton steps
/// using `dg` polish the root; any Newton step leaving the bracket falls back
/// to bisection.
pub fn increasing_root<G, D>(g: G, dg: D, lo: f64, hi: f64) -> f64
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    if g(a) >= 0.0 {
        return a;
    }
    if g(b) <= 0.0 {
        return b;
    }
    while b - a > 1e-6 {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if gm < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..60 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let slope = dg(x);
        let mut next = x - gx / slope;
        if !(next >= a && next <= b) || !next.is_finite() {
            next = 0.5 * (a + b);
        }
        if (next - x).abs() <= f64::EPSILON * x.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    x
}

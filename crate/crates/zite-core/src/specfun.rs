//! Special functions and quadrature: Bessel functions of the first kind,
//! their zeros, and Gauss-Legendre rules.

use crate::error::{CoreError, CoreResult};

/// Highest Gauss-Legendre order supported.
pub const MAX_QUADRATURE_ORDER: usize = 128;

/// Absolute tolerance for root bisection (Bessel zeros, dispersion roots).
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// Default quadrature order used by domain constructors.
pub const DEFAULT_QUADRATURE_ORDER: usize = 12;

/// A quadrature rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    /// Nodes in ascending order, all inside [-1, 1].
    pub nodes: Vec<f64>,
    /// Positive weights, same length as `nodes`; they sum to 2.
    pub weights: Vec<f64>,
    /// Number of nodes.
    pub order: usize,
}

impl QuadratureRule {
    /// Nodes and weights affinely mapped to the interval [a, b].
    pub fn mapped_to(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|&x| mid + half * x).collect();
        let weights = self.weights.iter().map(|&w| half * w).collect();
        (nodes, weights)
    }

    /// Integrate `f` over [a, b] with this rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let (x, w) = self.mapped_to(a, b);
        x.iter().zip(w.iter()).map(|(&xi, &wi)| wi * f(xi)).sum()
    }
}

/// Composite rule: `base` applied on each consecutive pair of `breaks`.
/// Returns flattened (nodes, weights).
pub fn composite_rule(base: &QuadratureRule, breaks: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(base.order * breaks.len().saturating_sub(1));
    let mut weights = Vec::with_capacity(nodes.capacity());
    for pair in breaks.windows(2) {
        let (x, w) = base.mapped_to(pair[0], pair[1]);
        nodes.extend(x);
        weights.extend(w);
    }
    (nodes, weights)
}

/// Gauss-Legendre rule with `order` nodes on [-1, 1].
///
/// Nodes are the roots of the Legendre polynomial P_order, found by Newton
/// iteration from Chebyshev-type initial guesses; weights 2/((1-x^2) P'^2).
/// Exact for polynomials of degree 2*order - 1.
pub fn gauss_legendre(order: usize) -> CoreResult<QuadratureRule> {
    if order == 0 || order > MAX_QUADRATURE_ORDER {
        return Err(CoreError::InvalidArgument(format!(
            "quadrature order must be in 1..={MAX_QUADRATURE_ORDER}, got {order}"
        )));
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Root near the upper end first (descending in x as i grows).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order,
    })
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n' from P_n and P_{n-1}: (1-x^2) P_n' = n (P_{n-1} - x P_n).
    let d = if (1.0 - x * x).abs() > 1e-300 {
        n as f64 * (p0 - x * p1) / (1.0 - x * x)
    } else {
        0.0
    };
    (p1, d)
}

fn check_bessel_arg(x: f64) -> CoreResult<()> {
    if !x.is_finite() {
        return Err(CoreError::InvalidArgument(format!(
            "Bessel argument must be finite, got {x}"
        )));
    }
    if x < 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "Bessel argument must be nonnegative, got {x}"
        )));
    }
    Ok(())
}

/// Bessel function of the first kind J_p(x) for integer order p >= 0, x >= 0.
///
/// Ascending power series for small x, Miller's downward recurrence with the
/// normalization J_0 + 2*sum J_{2k} = 1 otherwise. Relative accuracy ~1e-13
/// through x = 200.
pub fn bessel_j(p: u32, x: f64) -> CoreResult<f64> {
    check_bessel_arg(x)?;
    Ok(bessel_j_raw(p, x))
}

pub(crate) fn bessel_j_raw(p: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if p == 0 { 1.0 } else { 0.0 };
    }
    if x <= 9.0 {
        bessel_series(p, x)
    } else {
        bessel_miller(p, x)
    }
}

/// Ascending series sum_k (-1)^k (x/2)^(p+2k) / (k! (p+k)!).
fn bessel_series(p: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // First term (x/2)^p / p!, built iteratively to avoid overflow.
    let mut term = 1.0;
    for k in 1..=p {
        term *= half / k as f64;
    }
    let mut sum = term;
    let x2 = -half * half;
    for k in 1..200 {
        term *= x2 / (k as f64 * (k + p) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum
}

/// Miller's algorithm: downward recurrence from a start order well above
/// max(p, x), normalized by J_0(x) + 2 sum_{k>=1} J_{2k}(x) = 1.
fn bessel_miller(p: u32, x: f64) -> f64 {
    let top = (p as f64).max(x) + 20.0 + 10.0 * (p as f64).max(x).sqrt();
    let mut m = top as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut fp1 = 0.0_f64; // f_{k+1}
    let mut fk = 1e-30_f64; // f_k
    let mut norm = 0.0_f64;
    let mut wanted = 0.0_f64;
    let mut k = m as i64;
    while k >= 1 {
        let fm1 = (2.0 * k as f64 / x) * fk - fp1;
        fp1 = fk;
        fk = fm1;
        // fk now holds f_{k-1}; fp1 holds f_k.
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * fk;
        }
        if (k - 1) as u32 == p {
            wanted = fk;
        }
        if fk.abs() > 1e250 {
            fk *= 1e-250;
            fp1 *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
        k -= 1;
    }
    norm += fk; // f_0 term
    wanted / norm
}

/// Derivative J_p'(x): J_0' = -J_1, and (J_{p-1} - J_{p+1})/2 for p >= 1.
pub fn bessel_j_prime(p: u32, x: f64) -> CoreResult<f64> {
    check_bessel_arg(x)?;
    if p == 0 {
        Ok(-bessel_j_raw(1, x))
    } else {
        Ok(0.5 * (bessel_j_raw(p - 1, x) - bessel_j_raw(p + 1, x)))
    }
}

/// q-th positive zero j_{p,q} of J_p (q counts from 1), absolute accuracy ~1e-12.
///
/// Brackets come from the interlacing property
/// j_{p-1,q} < j_{p,q} < j_{p-1,q+1}, built up order by order from p = 0;
/// a coarse sign scan backs up any bracket the interlacing step fails to
/// certify. Bisection refines to `ROOT_TOLERANCE`.
pub fn bessel_zero(p: u32, q: u32) -> CoreResult<f64> {
    if q == 0 {
        return Err(CoreError::InvalidArgument(
            "Bessel zero index q counts from 1".into(),
        ));
    }
    let table = bessel_zero_table(p, q)?;
    Ok(table[p as usize][q as usize - 1])
}

/// Zeros j_{r,s} for all r <= p_max, s <= q_max, via interlacing recursion.
pub(crate) fn bessel_zero_table(p_max: u32, q_max: u32) -> CoreResult<Vec<Vec<f64>>> {
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(p_max as usize + 1);
    for p in 0..=p_max {
        // Order p needs q_max + (p_max - p) zeros so the next order can interlace.
        let count = q_max + (p_max - p);
        let mut zeros = Vec::with_capacity(count as usize);
        for q in 1..=count {
            let (a, b) = if p == 0 {
                // McMahon guess for J_0: zeros near (q - 1/4) pi.
                let guess = (q as f64 - 0.25) * std::f64::consts::PI;
                (guess - 1.2, guess + 1.2)
            } else {
                let prev: &Vec<f64> = &table[p as usize - 1];
                (prev[q as usize - 1], prev[q as usize])
            };
            let f = |x: f64| bessel_j_raw(p, x);
            let bracket =
                certify_bracket(&f, a.max(1e-9), b).ok_or(CoreError::BracketFailure { p, q })?;
            zeros.push(bisect(&f, bracket.0, bracket.1));
        }
        table.push(zeros);
    }
    Ok(table)
}

/// Return a sign-changing sub-bracket of [a, b], scanning if the endpoints
/// do not already differ in sign.
fn certify_bracket<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Option<(f64, f64)> {
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some((a, a));
    }
    if fa * fb < 0.0 {
        return Some((a, b));
    }
    // Coarse scan fallback: 64 panels.
    let steps = 64;
    let h = (b - a) / steps as f64;
    let mut x0 = a;
    let mut f0 = fa;
    for i in 1..=steps {
        let x1 = a + i as f64 * h;
        let f1 = f(x1);
        if f0 * f1 <= 0.0 {
            return Some((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    None
}

/// Plain bisection to `ROOT_TOLERANCE` absolute width.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    if a == b {
        return a;
    }
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        if b - a < ROOT_TOLERANCE {
            break;
        }
    }
    0.5 * (a + b)
}

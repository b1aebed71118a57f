//! Quadrature rules and small numeric helpers shared across modules.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on the Legendre
    /// polynomial, seeded with the Chebyshev root estimates.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                    // one polishing step
                    let (p2, d2) = legendre_with_derivative(n, x);
                    dp = d2;
                    x -= p2 / d2;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn scaled(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let mid = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        let xs = self.nodes.iter().map(|t| mid + hw * t).collect();
        let ws = self.weights.iter().map(|w| w * hw).collect();
        (xs, ws)
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        let mut acc = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + hw * t);
        }
        acc * hw
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Hermite nodes and weights for the weight function `e^{-x^2}`.
///
/// Computed by the Golub–Welsch eigendecomposition of the Jacobi matrix; an
/// `n`-point rule integrates polynomials through degree `2n - 1` exactly.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            let b = (i as f64 / 2.0).sqrt();
            jacobi[(i - 1, i)] = b;
            jacobi[(i, i - 1)] = b;
        }
        let eig = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                let v0 = eig.eigenvectors[(0, j)];
                (x, PI.sqrt() * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        GaussHermite {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f(x) e^{-x^2}` over the real line.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Hermite rule carried to double-double precision: the f64 nodes are
/// polished by Newton steps on `H_n` in [`dd`] arithmetic and the weights
/// rebuilt from the refined nodes. An f64 rule's own node rounding leaves
/// ~1e-4 of cancellation noise in high-degree moments; this one leaves
/// ~1e-20.
#[derive(Debug, Clone)]
pub struct GaussHermiteDd {
    nodes: Vec<dd::Dd>,
    weights: Vec<dd::Dd>,
}

impl GaussHermiteDd {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "rule needs at least two nodes");
        let seed = GaussHermite::new(n);
        // shared weight numerator 2^{n-1} n! sqrt(π) / n²
        let mut numerator = dd::SQRT_PI;
        for k in 1..=n {
            numerator = numerator.mul_f64(k as f64);
        }
        numerator = numerator.mul_f64(2f64.powi(n as i32 - 1));
        numerator = numerator / dd::Dd::from_f64((n * n) as f64);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for &x0 in seed.nodes() {
            let mut x = dd::Dd::from_f64(x0);
            for _ in 0..3 {
                let (hn, hn_below) = hermite_pair_dd(n, x);
                // H_n' = 2n H_{n-1}
                x = x - hn / hn_below.mul_f64(2.0 * n as f64);
            }
            let (_, hn_below) = hermite_pair_dd(n, x);
            weights.push(numerator / (hn_below * hn_below));
            nodes.push(x);
        }
        GaussHermiteDd { nodes, weights }
    }

    pub fn nodes(&self) -> &[dd::Dd] {
        &self.nodes
    }

    pub fn weights(&self) -> &[dd::Dd] {
        &self.weights
    }

    /// `Σ_i w_i f(x_i)` with the whole reduction in double-double.
    pub fn integrate_dd<F: FnMut(dd::Dd) -> dd::Dd>(&self, mut f: F) -> dd::Dd {
        let mut acc = dd::Dd::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + w * f(x);
        }
        acc
    }
}

/// `(H_n(x), H_{n-1}(x))` in double-double, `n >= 1`.
fn hermite_pair_dd(n: usize, x: dd::Dd) -> (dd::Dd, dd::Dd) {
    let mut prev = dd::Dd::from_f64(1.0);
    let mut curr = x.mul_f64(2.0);
    for k in 1..n {
        let next = (x * curr).mul_f64(2.0) - prev.mul_f64(2.0 * k as f64);
        prev = curr;
        curr = next;
    }
    (curr, prev)
}

/// `H_n(x)` in double-double.
pub fn hermite_poly_dd(n: usize, x: dd::Dd) -> dd::Dd {
    if n == 0 {
        return dd::Dd::from_f64(1.0);
    }
    hermite_pair_dd(n, x).0
}

/// Fixed-order pairwise summation. The reduction tree depends only on the
/// slice length, so results are reproducible regardless of how callers chunk
/// or parallelize the surrounding work.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

const LN_FACTORIAL_LEN: usize = 513;

/// `ln(n!)` from a compensated cumulative table, `n <= 512`.
pub fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_LEN);
        t.push(0.0);
        let mut sum = 0.0;
        let mut comp = 0.0;
        for k in 1..LN_FACTORIAL_LEN {
            let term = (k as f64).ln() - comp;
            let next = sum + term;
            comp = (next - sum) - term;
            sum = next;
            t.push(sum);
        }
        t
    });
    table[n]
}

/// Double-double arithmetic: an unevaluated sum of two `f64`s carrying
/// roughly 32 significant digits. Used where an f64 quadrature's own
/// rounding noise would swamp the quantity under test (large-degree
/// polynomial moments cancel through ~12 orders of magnitude).
pub mod dd {
    use std::ops::{Add, Div, Mul, Neg, Sub};

    /// hi + lo with |lo| <= ulp(hi)/2.
    #[derive(Debug, Clone, Copy, PartialEq, Default)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    #[inline]
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let v = s - a;
        (s, (a - (s - v)) + (b - v))
    }

    #[inline]
    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    #[inline]
    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    impl Dd {
        pub const fn new(hi: f64, lo: f64) -> Self {
            Dd { hi, lo }
        }

        pub fn from_f64(x: f64) -> Self {
            Dd { hi: x, lo: 0.0 }
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }

        pub fn mul_f64(self, other: f64) -> Dd {
            let (p, e) = two_prod(self.hi, other);
            let e = e + self.lo * other;
            let (hi, lo) = quick_two_sum(p, e);
            Dd { hi, lo }
        }

        pub fn abs(self) -> Dd {
            if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
                -self
            } else {
                self
            }
        }

        /// `self^n` by repeated multiplication.
        pub fn powi(self, n: usize) -> Dd {
            let mut acc = Dd::from_f64(1.0);
            for _ in 0..n {
                acc = acc * self;
            }
            acc
        }
    }

    impl Add for Dd {
        type Output = Dd;

        fn add(self, other: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, other.hi);
            let e = e + self.lo + other.lo;
            let (hi, lo) = quick_two_sum(s, e);
            Dd { hi, lo }
        }
    }

    impl Neg for Dd {
        type Output = Dd;

        fn neg(self) -> Dd {
            Dd {
                hi: -self.hi,
                lo: -self.lo,
            }
        }
    }

    impl Sub for Dd {
        type Output = Dd;

        fn sub(self, other: Dd) -> Dd {
            self + (-other)
        }
    }

    impl Mul for Dd {
        type Output = Dd;

        fn mul(self, other: Dd) -> Dd {
            let (p, e) = two_prod(self.hi, other.hi);
            let e = e + self.hi * other.lo + self.lo * other.hi;
            let (hi, lo) = quick_two_sum(p, e);
            Dd { hi, lo }
        }
    }

    impl Div for Dd {
        type Output = Dd;

        fn div(self, other: Dd) -> Dd {
            let q1 = self.hi / other.hi;
            let r = self - other.mul_f64(q1);
            let q2 = r.hi / other.hi;
            let r = r - other.mul_f64(q2);
            let q3 = r.hi / other.hi;
            let (hi, lo) = quick_two_sum(q1, q2);
            Dd { hi, lo } + Dd::from_f64(q3)
        }
    }

    /// sqrt(π) to double-double precision.
    pub const SQRT_PI: Dd = Dd::new(1.772453850905516, -7.666586499825799e-17);
}

//! Gauss-Legendre rules and composite panels.

use crate::scalar::Scalar;

/// Nodes and weights on `[-1, 1]`, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    /// Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let nt = T::from_usize(n).unwrap();
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n.div_ceil(2) {
            let guess = T::PI() * (T::from_usize(i).unwrap() + T::lit(0.75)) / (nt + T::lit(0.5));
            let mut x = guess.cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to `[lo, hi]`.
    pub fn panel(&self, lo: T, hi: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (hi - lo) / T::lit(2.0);
        let mid = (hi + lo) / T::lit(2.0);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Composite rule over consecutive breakpoints.
    pub fn composite(&self, breaks: &[T]) -> Vec<(T, T)> {
        let mut out = Vec::with_capacity(self.order() * breaks.len().saturating_sub(1));
        for w in breaks.windows(2) {
            out.extend(self.panel(w[0], w[1]));
        }
        out
    }

    /// `count` equal panels on `[lo, hi]`.
    pub fn uniform(&self, lo: T, hi: T, count: usize) -> Vec<(T, T)> {
        let c = T::from_usize(count.max(1)).unwrap();
        let breaks: Vec<T> = (0..=count.max(1)).map(|k| lo + (hi - lo) * T::from_usize(k).unwrap() / c).collect();
        self.composite(&breaks)
    }

    pub fn integrate<F: Fn(T) -> T>(&self, lo: T, hi: T, f: F) -> T {
        let terms: Vec<T> = self.panel(lo, hi).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kt = T::from_usize(k).unwrap();
        let p2 = ((kt + kt - T::one()) * x * p1 - (kt - T::one()) * p0) / kt;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nt = T::from_usize(n).unwrap();
    (p1, nt * (x * p1 - p0) / (x * x - T::one()))
}

/// Pairwise summation in index order; the result does not depend on how
/// the terms were produced, which keeps parallel reductions bit-reproducible.
pub fn pairwise_sum<T: Scalar>(terms: &[T]) -> T {
    const LEAF: usize = 32;
    if terms.len() <= LEAF {
        return terms.iter().fold(T::zero(), |s, &v| s + v);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

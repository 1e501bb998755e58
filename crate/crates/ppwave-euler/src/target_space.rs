//! The ten-dimensional pp-wave target: metric, connection, curvature and the
//! Pfaffian (Euler-form) test.
//!
//! Coordinate order is `(x+, x-, X^1, ..., X^8)`.

use crate::error::{Error, Result};
use crate::modes::{ModelParams, TRANSVERSE};
use crate::scalar::Scalar;
use std::collections::HashMap;

pub const DIM: usize = 2 + TRANSVERSE;
pub const PLUS: usize = 0;
pub const MINUS: usize = 1;

pub type Coords<T> = [T; DIM];
pub type Matrix<T> = [[T; DIM]; DIM];
/// `t[a][b][c]`; for Christoffel symbols `t[i][j][k] = Gamma^i_{jk}`,
/// for metric derivatives `t[k][i][j] = d_k G_ij`.
pub type Rank3<T> = [[[T; DIM]; DIM]; DIM];

/// Coordinate index of the transverse direction `I` (1-based).
#[inline]
pub fn transverse_index(i: usize) -> usize {
    1 + i
}

/// Dense rank-4 array, row-major in `(a, b, c, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4<T> {
    data: Vec<T>,
}

impl<T: Scalar> Tensor4<T> {
    pub fn zeros() -> Self {
        Self { data: vec![T::zero(); DIM * DIM * DIM * DIM] }
    }

    #[inline]
    fn idx(a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * DIM + b) * DIM + c) * DIM + d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> T {
        self.data[Self::idx(a, b, c, d)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: T) {
        self.data[Self::idx(a, b, c, d)] = v;
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimePoint<T> {
    pub x_plus: T,
    pub x_minus: T,
    pub x_transverse: [T; TRANSVERSE],
}

impl<T: Scalar> SpacetimePoint<T> {
    pub fn new(x_plus: T, x_minus: T, x_transverse: [T; TRANSVERSE]) -> Self {
        Self { x_plus, x_minus, x_transverse }
    }

    pub fn coords(&self) -> Coords<T> {
        let mut c = [T::zero(); DIM];
        c[PLUS] = self.x_plus;
        c[MINUS] = self.x_minus;
        c[2..].copy_from_slice(&self.x_transverse);
        c
    }

    pub fn transverse_norm_sq(&self) -> T {
        self.x_transverse.iter().fold(T::zero(), |s, &x| s + x * x)
    }
}

/// A metric on the ten-dimensional target with overridable derivative rules.
///
/// The defaults differentiate numerically with central differences, which
/// is what the perturbed and test metrics use; the pp-wave overrides them
/// with closed forms.
pub trait Metric<T: Scalar>: Sync {
    fn metric(&self, x: &Coords<T>) -> Matrix<T>;

    /// `d[k][i][j] = d_k G_ij`.
    fn metric_derivative(&self, x: &Coords<T>) -> Rank3<T> {
        let mut d = [[[T::zero(); DIM]; DIM]; DIM];
        for (k, dk) in d.iter_mut().enumerate() {
            let (gp, gm, h) = fd_pair(x, k, |y| self.metric(y));
            for i in 0..DIM {
                for j in 0..DIM {
                    dk[i][j] = (gp[i][j] - gm[i][j]) / (h + h);
                }
            }
        }
        d
    }

    fn christoffels(&self, x: &Coords<T>) -> Result<Rank3<T>> {
        levi_civita(&self.metric(x), &self.metric_derivative(x))
    }

    /// `out[l]` holds `d_l Gamma^i_{jk}`.
    fn christoffel_derivative(&self, x: &Coords<T>) -> Result<Vec<Rank3<T>>> {
        let mut out = Vec::with_capacity(DIM);
        for l in 0..DIM {
            let h = fd_step(x[l]);
            let mut xp = *x;
            let mut xm = *x;
            xp[l] = x[l] + h;
            xm[l] = x[l] - h;
            let gp = self.christoffels(&xp)?;
            let gm = self.christoffels(&xm)?;
            let mut d = [[[T::zero(); DIM]; DIM]; DIM];
            for i in 0..DIM {
                for j in 0..DIM {
                    for k in 0..DIM {
                        d[i][j][k] = (gp[i][j][k] - gm[i][j][k]) / (h + h);
                    }
                }
            }
            out.push(d);
        }
        Ok(out)
    }

    /// Seed vectors for Gram-Schmidt; must avoid null directions.
    fn frame_seeds(&self, _x: &Coords<T>) -> Vec<Coords<T>> {
        (0..DIM)
            .map(|i| {
                let mut v = [T::zero(); DIM];
                v[i] = T::one();
                v
            })
            .collect()
    }
}

fn fd_step<T: Scalar>(x: T) -> T {
    T::epsilon().cbrt() * T::one().max(x.abs())
}

fn fd_pair<T: Scalar, F: Fn(&Coords<T>) -> Matrix<T>>(x: &Coords<T>, k: usize, f: F) -> (Matrix<T>, Matrix<T>, T) {
    let h = fd_step(x[k]);
    let mut xp = *x;
    let mut xm = *x;
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    (f(&xp), f(&xm), h)
}

/// The plane-wave metric `ds^2 = -2 dx+ dx- - mu^2 X^2 dx+^2 + dX^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PpWave<T> {
    pub mu: T,
}

impl<T: Scalar> PpWave<T> {
    pub fn new(params: &ModelParams<T>) -> Self {
        Self { mu: params.mu }
    }

    fn g_pp(&self, x: &Coords<T>) -> T {
        let r2 = x[2..].iter().fold(T::zero(), |s, &v| s + v * v);
        -self.mu * self.mu * r2
    }
}

impl<T: Scalar> Metric<T> for PpWave<T> {
    fn metric(&self, x: &Coords<T>) -> Matrix<T> {
        let mut g = [[T::zero(); DIM]; DIM];
        g[PLUS][MINUS] = -T::one();
        g[MINUS][PLUS] = -T::one();
        g[PLUS][PLUS] = self.g_pp(x);
        for (i, row) in g.iter_mut().enumerate().skip(2) {
            row[i] = T::one();
        }
        g
    }

    fn metric_derivative(&self, x: &Coords<T>) -> Rank3<T> {
        let mut d = [[[T::zero(); DIM]; DIM]; DIM];
        let m2 = self.mu * self.mu;
        for k in 2..DIM {
            d[k][PLUS][PLUS] = -(m2 + m2) * x[k];
        }
        d
    }

    fn christoffels(&self, x: &Coords<T>) -> Result<Rank3<T>> {
        let mut g = [[[T::zero(); DIM]; DIM]; DIM];
        let m2 = self.mu * self.mu;
        for i in 2..DIM {
            g[MINUS][PLUS][i] = m2 * x[i];
            g[MINUS][i][PLUS] = m2 * x[i];
            g[i][PLUS][PLUS] = m2 * x[i];
        }
        Ok(g)
    }

    fn christoffel_derivative(&self, _x: &Coords<T>) -> Result<Vec<Rank3<T>>> {
        let m2 = self.mu * self.mu;
        let mut out = vec![[[[T::zero(); DIM]; DIM]; DIM]; DIM];
        for (l, d) in out.iter_mut().enumerate().skip(2) {
            d[MINUS][PLUS][l] = m2;
            d[MINUS][l][PLUS] = m2;
            d[l][PLUS][PLUS] = m2;
        }
        Ok(out)
    }

    /// `d+ + d-` is timelike wherever `G++ <= 0`, and its orthogonal
    /// complement inside the light-cone plane is spacelike.
    fn frame_seeds(&self, _x: &Coords<T>) -> Vec<Coords<T>> {
        let mut seeds = Vec::with_capacity(DIM);
        let mut v = [T::zero(); DIM];
        v[PLUS] = T::one();
        v[MINUS] = T::one();
        seeds.push(v);
        v[MINUS] = -T::one();
        seeds.push(v);
        for i in 2..DIM {
            let mut e = [T::zero(); DIM];
            e[i] = T::one();
            seeds.push(e);
        }
        seeds
    }
}

/// Pp-wave with `G_11 -> 1 + stretch` in the first transverse direction,
/// used as a negative control. Derivatives fall back to finite differences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbedPpWave<T> {
    pub base: PpWave<T>,
    pub stretch: T,
}

impl<T: Scalar> Metric<T> for PerturbedPpWave<T> {
    fn metric(&self, x: &Coords<T>) -> Matrix<T> {
        let mut g = self.base.metric(x);
        let i = transverse_index(1);
        g[i][i] = T::one() + self.stretch;
        g
    }

    fn frame_seeds(&self, x: &Coords<T>) -> Vec<Coords<T>> {
        self.base.frame_seeds(x)
    }
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn invert<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let mut a = *m;
    let mut inv = [[T::zero(); DIM]; DIM];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let scale = m.iter().flatten().fold(T::zero(), |s, v| s.max(v.abs()));
    for col in 0..DIM {
        let piv = (col..DIM).max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap()).unwrap();
        if a[piv][col].abs() <= T::epsilon() * scale * T::lit(16.0) {
            return Err(Error::InvalidParams("metric is degenerate".into()));
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..DIM {
            a[col][j] = a[col][j] / p;
            inv[col][j] = inv[col][j] / p;
        }
        for r in 0..DIM {
            if r != col {
                let f = a[r][col];
                if f != T::zero() {
                    for j in 0..DIM {
                        a[r][j] = a[r][j] - f * a[col][j];
                        inv[r][j] = inv[r][j] - f * inv[col][j];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// `Gamma^i_{jk} = 1/2 G^{il} (d_j G_lk + d_k G_lj - d_l G_jk)`.
pub fn levi_civita<T: Scalar>(g: &Matrix<T>, dg: &Rank3<T>) -> Result<Rank3<T>> {
    let ginv = invert(g)?;
    let half = T::lit(0.5);
    let mut out = [[[T::zero(); DIM]; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            for k in j..DIM {
                let mut s = T::zero();
                for l in 0..DIM {
                    if ginv[i][l] != T::zero() {
                        s = s + ginv[i][l] * (dg[j][l][k] + dg[k][l][j] - dg[l][j][k]);
                    }
                }
                out[i][j][k] = half * s;
                out[i][k][j] = half * s;
            }
        }
    }
    Ok(out)
}

/// `R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}`.
pub fn riemann<T: Scalar, M: Metric<T> + ?Sized>(metric: &M, x: &Coords<T>) -> Result<Tensor4<T>> {
    let gam = metric.christoffels(x)?;
    let dgam = metric.christoffel_derivative(x)?;
    let mut r = Tensor4::zeros();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    let mut v = dgam[k][i][l][j] - dgam[l][i][k][j];
                    for m in 0..DIM {
                        v = v + gam[i][k][m] * gam[m][l][j] - gam[i][l][m] * gam[m][k][j];
                    }
                    r.set(i, j, k, l, v);
                }
            }
        }
    }
    Ok(r)
}

pub fn metric_g<T: Scalar>(point: &SpacetimePoint<T>, params: &ModelParams<T>) -> Matrix<T> {
    PpWave::new(params).metric(&point.coords())
}

pub fn christoffels<T: Scalar>(point: &SpacetimePoint<T>, params: &ModelParams<T>) -> Rank3<T> {
    PpWave::new(params).christoffels(&point.coords()).expect("pp-wave metric is never degenerate")
}

pub fn curvature<T: Scalar>(point: &SpacetimePoint<T>, params: &ModelParams<T>) -> Tensor4<T> {
    riemann(&PpWave::new(params), &point.coords()).expect("pp-wave metric is never degenerate")
}

/// Orthonormal frame from Gram-Schmidt against `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<T> {
    /// `vectors[a][mu]`, components of `E_a`.
    pub vectors: Vec<Coords<T>>,
    /// `coframe[a][mu]`, components of `e^a`.
    pub coframe: Vec<Coords<T>>,
    /// `eta_aa`, +1 or -1.
    pub signs: Vec<T>,
}

fn inner<T: Scalar>(g: &Matrix<T>, u: &Coords<T>, v: &Coords<T>) -> T {
    let mut s = T::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            s = s + u[i] * g[i][j] * v[j];
        }
    }
    s
}

pub fn orthonormal_frame<T: Scalar, M: Metric<T> + ?Sized>(metric: &M, x: &Coords<T>) -> Result<Frame<T>> {
    let g = metric.metric(x);
    let mut vectors: Vec<Coords<T>> = Vec::with_capacity(DIM);
    let mut signs = Vec::with_capacity(DIM);
    for seed in metric.frame_seeds(x) {
        let mut v = seed;
        for (e, &s) in vectors.iter().zip(&signs) {
            let c = s * inner(&g, &seed, e);
            for i in 0..DIM {
                v[i] = v[i] - c * e[i];
            }
        }
        let n2 = inner(&g, &v, &v);
        if n2.abs() <= T::epsilon().sqrt() {
            return Err(Error::InvalidParams("Gram-Schmidt hit a null direction".into()));
        }
        let inv = T::one() / n2.abs().sqrt();
        for c in v.iter_mut() {
            *c = *c * inv;
        }
        vectors.push(v);
        signs.push(n2.signum());
    }
    let coframe = vectors
        .iter()
        .zip(&signs)
        .map(|(e, &s)| {
            let mut w = [T::zero(); DIM];
            for (mu, wm) in w.iter_mut().enumerate() {
                let mut acc = T::zero();
                for nu in 0..DIM {
                    acc = acc + g[mu][nu] * e[nu];
                }
                *wm = s * acc;
            }
            w
        })
        .collect();
    Ok(Frame { vectors, coframe, signs })
}

/// Frame components `R_{abcd} = eta_aa e^a_i R^i_{jkl} E_b^j E_c^k E_d^l`.
pub fn frame_curvature<T: Scalar>(r: &Tensor4<T>, frame: &Frame<T>) -> Tensor4<T> {
    // contract one index at a time to keep the cost at O(DIM^5)
    let mut t1 = Tensor4::zeros();
    for a in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    let mut s = T::zero();
                    for i in 0..DIM {
                        s = s + frame.coframe[a][i] * r.get(i, j, k, l);
                    }
                    t1.set(a, j, k, l, frame.signs[a] * s);
                }
            }
        }
    }
    let mut t2 = Tensor4::zeros();
    for a in 0..DIM {
        for b in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    let mut s = T::zero();
                    for j in 0..DIM {
                        s = s + t1.get(a, j, k, l) * frame.vectors[b][j];
                    }
                    t2.set(a, b, k, l, s);
                }
            }
        }
    }
    let mut t3 = Tensor4::zeros();
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                for l in 0..DIM {
                    let mut s = T::zero();
                    for k in 0..DIM {
                        s = s + t2.get(a, b, k, l) * frame.vectors[c][k];
                    }
                    t3.set(a, b, c, l, s);
                }
            }
        }
    }
    let mut out = Tensor4::zeros();
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                for d in 0..DIM {
                    let mut s = T::zero();
                    for l in 0..DIM {
                        s = s + t3.get(a, b, c, l) * frame.vectors[d][l];
                    }
                    out.set(a, b, c, d, s);
                }
            }
        }
    }
    out
}

/// Sparse element of the exterior algebra over the coframe; keys are
/// bitmasks of sorted basis indices.
type Form<T> = HashMap<u32, T>;

fn wedge_sign(a: u32, b: u32) -> bool {
    // parity of pairs (i in a, j in b) with i > j
    let mut count = 0u32;
    let mut bits = a;
    while bits != 0 {
        let i = bits.trailing_zeros();
        count += (b & ((1u32 << i) - 1)).count_ones();
        bits &= bits - 1;
    }
    count % 2 == 1
}

fn wedge<T: Scalar>(lhs: &Form<T>, rhs: &Form<T>) -> Form<T> {
    let mut out: Form<T> = HashMap::new();
    for (&ma, &ca) in lhs {
        for (&mb, &cb) in rhs {
            if ma & mb != 0 {
                continue;
            }
            let v = if wedge_sign(ma, mb) { -(ca * cb) } else { ca * cb };
            let e = out.entry(ma | mb).or_insert(T::zero());
            *e = *e + v;
        }
    }
    out.retain(|_, v| *v != T::zero());
    out
}

fn pfaffian_forms<T: Scalar>(omega: &[Vec<Form<T>>], set: u32, memo: &mut HashMap<u32, Form<T>>) -> Form<T> {
    if set == 0 {
        let mut one = HashMap::new();
        one.insert(0, T::one());
        return one;
    }
    if let Some(f) = memo.get(&set) {
        return f.clone();
    }
    let first = set.trailing_zeros() as usize;
    let rest = set & !(1u32 << first);
    let mut acc: Form<T> = HashMap::new();
    let mut bits = rest;
    let mut pos = 1usize;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let w = &omega[first][j];
        if !w.is_empty() {
            let sub = pfaffian_forms(omega, rest & !(1u32 << j), memo);
            if !sub.is_empty() {
                let term = wedge(w, &sub);
                let negative = pos.is_multiple_of(2);
                for (m, v) in term {
                    let e = acc.entry(m).or_insert(T::zero());
                    *e = if negative { *e - v } else { *e + v };
                }
            }
        }
        pos += 1;
    }
    acc.retain(|_, v| *v != T::zero());
    memo.insert(set, acc.clone());
    acc
}

/// Top-form coefficient of `Pf(Omega)` with `Omega_ab = sum_{c<d} R_abcd e^c ^ e^d`,
/// normalised so that a product of five unit 2-spheres gives 1.
pub fn pfaffian_top_coefficient<T: Scalar, M: Metric<T> + ?Sized>(metric: &M, x: &Coords<T>) -> Result<T> {
    let frame = orthonormal_frame(metric, x)?;
    let rf = frame_curvature(&riemann(metric, x)?, &frame);
    let mut omega: Vec<Vec<Form<T>>> = vec![vec![HashMap::new(); DIM]; DIM];
    for (a, row) in omega.iter_mut().enumerate() {
        for (b, form) in row.iter_mut().enumerate() {
            for c in 0..DIM {
                for d in (c + 1)..DIM {
                    let v = rf.get(a, b, c, d);
                    if v != T::zero() {
                        form.insert((1u32 << c) | (1u32 << d), v);
                    }
                }
            }
        }
    }
    let full = (1u32 << DIM) - 1;
    let pf = pfaffian_forms(&omega, full, &mut HashMap::new());
    Ok(pf.get(&full).copied().unwrap_or(T::zero()))
}

/// Magnitude of the Euler (Pfaffian) top-form coefficient of the pp-wave.
pub fn euler_pfaffian_check<T: Scalar>(point: &SpacetimePoint<T>, params: &ModelParams<T>) -> T {
    pfaffian_top_coefficient(&PpWave::new(params), &point.coords()).expect("pp-wave frame is never null").abs()
}

/// Dirac condition on the five-form flux: `mu = phi sqrt(pi n / 2)`.
pub fn dirac_mu<T: Scalar>(n: u32, phi: T) -> T {
    phi * (T::FRAC_PI_2() * T::from_u32(n).expect("n fits")).sqrt()
}

/// Non-vanishing five-form components `F_{+1234} = F_{+5678} = 2 mu`,
/// kept for reference; no supergravity equations are checked.
pub fn five_form<T: Scalar>(params: &ModelParams<T>) -> [([usize; 5], T); 2] {
    let v = params.mu + params.mu;
    let t = transverse_index;
    [([PLUS, t(1), t(2), t(3), t(4)], v), ([PLUS, t(5), t(6), t(7), t(8)], v)]
}

/// Constant dilaton value.
pub fn dilaton<T: Scalar>(params: &ModelParams<T>) -> T {
    params.phi
}

//! Real fields on the plane that the nodal and log-integrability tools can
//! measure.

use std::borrow::Cow;

use ndarray::Array2;

/// A smooth real field on `ℝ²`.
pub trait PlanarField: Sync {
    fn value(&self, p: [f64; 2]) -> f64;

    fn gradient(&self, p: [f64; 2]) -> [f64; 2];

    /// Global bound on the operator norm of the Hessian, when one is known.
    fn hessian_bound(&self) -> Option<f64> {
        None
    }

    /// Row sampler on the tensor grid `xs × ys`; `xs` is fixed up front so
    /// that per-column work can be shared between row bands.
    fn grid_sampler<'a>(&'a self, xs: &'a [f64]) -> Box<dyn GridSampler + 'a> {
        Box::new(PointwiseSampler { field: self, xs })
    }

    /// The same field as a trigonometric sum, when it is one.
    fn as_trig_sum(&self) -> Option<Cow<'_, TrigSum>> {
        None
    }
}

/// Evaluates a field on `xs × ys` for a fixed column set `xs`.
pub trait GridSampler: Sync {
    /// Values with shape `(ys.len(), xs.len())`, rows indexed by `y`.
    fn sample(&self, ys: &[f64]) -> Array2<f64>;
}

struct PointwiseSampler<'a, F: PlanarField + ?Sized> {
    field: &'a F,
    xs: &'a [f64],
}

impl<F: PlanarField + ?Sized> GridSampler for PointwiseSampler<'_, F> {
    fn sample(&self, ys: &[f64]) -> Array2<f64> {
        Array2::from_shape_fn((ys.len(), self.xs.len()), |(j, i)| {
            self.field.value([self.xs[i], ys[j]])
        })
    }
}

/// `Σ_j A_j cos⟨k_j, p⟩ + B_j sin⟨k_j, p⟩` with angular wave vectors `k_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSum {
    pub k: Vec<[f64; 2]>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl TrigSum {
    pub fn new(k: Vec<[f64; 2]>, a: Vec<f64>, b: Vec<f64>) -> Self {
        assert!(k.len() == a.len() && a.len() == b.len());
        Self { k, a, b }
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// `Σ_j √(A_j² + B_j²)`, a bound on `sup |F|`.
    pub fn amplitude_sum(&self) -> f64 {
        self.a.iter().zip(&self.b).map(|(a, b)| a.hypot(*b)).sum()
    }

    /// Same field with every wave vector multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            k: self.k.iter().map(|k| [k[0] * s, k[1] * s]).collect(),
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }

    /// Same field translated so that the new origin is `p0`.
    pub fn shifted(&self, p0: [f64; 2]) -> Self {
        let mut a = Vec::with_capacity(self.len());
        let mut b = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            let (s, c) = (self.k[j][0] * p0[0] + self.k[j][1] * p0[1]).sin_cos();
            a.push(self.a[j] * c + self.b[j] * s);
            b.push(self.b[j] * c - self.a[j] * s);
        }
        Self {
            k: self.k.clone(),
            a,
            b,
        }
    }
}

impl PlanarField for TrigSum {
    fn value(&self, p: [f64; 2]) -> f64 {
        let mut s = 0.0;
        for j in 0..self.k.len() {
            let (sn, cs) = (self.k[j][0] * p[0] + self.k[j][1] * p[1]).sin_cos();
            s += self.a[j] * cs + self.b[j] * sn;
        }
        s
    }

    fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for j in 0..self.k.len() {
            let (sn, cs) = (self.k[j][0] * p[0] + self.k[j][1] * p[1]).sin_cos();
            let d = self.b[j] * cs - self.a[j] * sn;
            g[0] += d * self.k[j][0];
            g[1] += d * self.k[j][1];
        }
        g
    }

    fn hessian_bound(&self) -> Option<f64> {
        Some(
            (0..self.len())
                .map(|j| self.a[j].hypot(self.b[j]) * (self.k[j][0].powi(2) + self.k[j][1].powi(2)))
                .sum(),
        )
    }

    fn grid_sampler<'a>(&'a self, xs: &'a [f64]) -> Box<dyn GridSampler + 'a> {
        Box::new(TrigSampler::new(self, xs))
    }

    fn as_trig_sum(&self) -> Option<Cow<'_, TrigSum>> {
        Some(Cow::Borrowed(self))
    }
}

/// Separable evaluation: with `θ = u(x) + v(y)`,
/// `F = Σ cos v·(A cos u + B sin u) + sin v·(B cos u − A sin u)`,
/// so a row band is one matrix product.
struct TrigSampler<'a> {
    sum: &'a TrigSum,
    /// `(nx, 2K)`: columns `A cos u + B sin u` then `B cos u − A sin u`.
    x_part: Array2<f64>,
}

impl<'a> TrigSampler<'a> {
    fn new(sum: &'a TrigSum, xs: &[f64]) -> Self {
        let kk = sum.len();
        let mut x_part = Array2::zeros((xs.len(), 2 * kk));
        for (i, &x) in xs.iter().enumerate() {
            for j in 0..kk {
                let (s, c) = (sum.k[j][0] * x).sin_cos();
                x_part[[i, j]] = sum.a[j] * c + sum.b[j] * s;
                x_part[[i, kk + j]] = sum.b[j] * c - sum.a[j] * s;
            }
        }
        Self { sum, x_part }
    }
}

impl GridSampler for TrigSampler<'_> {
    fn sample(&self, ys: &[f64]) -> Array2<f64> {
        let kk = self.sum.len();
        let mut y_part = Array2::zeros((ys.len(), 2 * kk));
        for (r, &y) in ys.iter().enumerate() {
            for j in 0..kk {
                let (s, c) = (self.sum.k[j][1] * y).sin_cos();
                y_part[[r, j]] = c;
                y_part[[r, kk + j]] = s;
            }
        }
        y_part.dot(&self.x_part.t())
    }
}

/// `g(p) = c·p + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField {
    pub c: [f64; 2],
    pub d: f64,
}

impl PlanarField for LinearField {
    fn value(&self, p: [f64; 2]) -> f64 {
        self.c[0] * p[0] + self.c[1] * p[1] + self.d
    }

    fn gradient(&self, _p: [f64; 2]) -> [f64; 2] {
        self.c
    }

    fn hessian_bound(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// A field given by closures, with an optional Hessian bound.
pub struct FnField<V, G> {
    pub value: V,
    pub gradient: G,
    pub hessian_bound: Option<f64>,
}

impl<V, G> PlanarField for FnField<V, G>
where
    V: Fn([f64; 2]) -> f64 + Sync,
    G: Fn([f64; 2]) -> [f64; 2] + Sync,
{
    fn value(&self, p: [f64; 2]) -> f64 {
        (self.value)(p)
    }

    fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        (self.gradient)(p)
    }

    fn hessian_bound(&self) -> Option<f64> {
        self.hessian_bound
    }
}

/// The field rotated by 90°: `p ↦ F(−p₂, p₁)`.
pub struct Rotated90<'a, F: PlanarField + ?Sized>(pub &'a F);

impl<F: PlanarField + ?Sized> PlanarField for Rotated90<'_, F> {
    fn value(&self, p: [f64; 2]) -> f64 {
        self.0.value([-p[1], p[0]])
    }

    fn gradient(&self, p: [f64; 2]) -> [f64; 2] {
        let g = self.0.gradient([-p[1], p[0]]);
        [g[1], -g[0]]
    }

    fn hessian_bound(&self) -> Option<f64> {
        self.0.hessian_bound()
    }
}

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{forward_transform, Field, Spectrum};
use crate::grid::{Grid, Point};
use num_complex::Complex64;

pub type FreqFn = Arc<dyn Fn(&Point) -> Complex64 + Send + Sync>;
pub type PairFn = Arc<dyn Fn(&Point, &Point) -> Complex64 + Send + Sync>;

/// Declared symbol class: `BS^m` or `BS^{(m1, m2)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolClass {
    Joint(f64),
    Split(f64, f64),
}

impl SymbolClass {
    /// `(1+|ξ1|+|ξ2|)^m` or `(1+|ξ1|)^{m1}(1+|ξ2|)^{m2}`.
    pub fn weight(&self, xi1: &Point, xi2: &Point) -> f64 {
        let (a, b) = (crate::grid::norm(xi1), crate::grid::norm(xi2));
        match *self {
            SymbolClass::Joint(m) => (1.0 + a + b).powf(m),
            SymbolClass::Split(m1, m2) => (1.0 + a).powf(m1) * (1.0 + b).powf(m2),
        }
    }
}

/// An `x`-dependent factor of a rank-one term.
#[derive(Clone)]
pub enum XFactor {
    Func(FreqFn),
    /// Periodic samples on a grid; evaluated off-grid by trigonometric interpolation.
    Sampled(Field),
}

impl XFactor {
    pub fn func(f: impl Fn(&Point) -> Complex64 + Send + Sync + 'static) -> Self {
        XFactor::Func(Arc::new(f))
    }

    pub fn eval(&self, x: &Point) -> Complex64 {
        match self {
            XFactor::Func(f) => f(x),
            XFactor::Sampled(field) => trig_interpolate(field, x),
        }
    }

    /// Samples on `grid`; exact for sampled factors on the same grid.
    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        match self {
            XFactor::Func(f) => Ok(Field::from_fn(*grid, |x| f(x))),
            XFactor::Sampled(field) if field.grid().same_as(grid) => Ok(field.clone()),
            XFactor::Sampled(_) => Err(Error::GridMismatch),
        }
    }
}

fn trig_interpolate(f: &Field, x: &Point) -> Complex64 {
    let g = f.grid();
    if let Ok(k) = g.grid_offsets(x) {
        let m = g.samples() as i64;
        let idx = [(k[0] + m / 2).rem_euclid(m) as usize, (k[1] + m / 2).rem_euclid(m) as usize];
        let idx = if g.dim() == 1 { [idx[0], 0] } else { idx };
        return f.samples()[g.join(idx)];
    }
    let s: Spectrum = forward_transform(f);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, c) in s.coeffs().iter().enumerate() {
        let xi = g.frequency(i);
        acc += c * Complex64::from_polar(1.0, x[0] * xi[0] + x[1] * xi[1]);
    }
    acc * g.dual_cell()
}

/// One term `a(x) b(ξ1) c(ξ2)`.
#[derive(Clone)]
pub struct RankTerm {
    pub a: XFactor,
    pub b: FreqFn,
    pub c: FreqFn,
}

impl RankTerm {
    pub fn new(
        a: XFactor,
        b: impl Fn(&Point) -> Complex64 + Send + Sync + 'static,
        c: impl Fn(&Point) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { a, b: Arc::new(b), c: Arc::new(c) }
    }
}

#[derive(Clone)]
pub enum SymbolKind {
    /// `x`-independent `m(ξ1, ξ2)`.
    Multiplier(PairFn),
    TensorRank(Vec<RankTerm>),
}

/// A bilinear symbol `σ(x, ξ1, ξ2)` with its declared class.
#[derive(Clone)]
pub struct SymbolSpec {
    pub name: String,
    pub kind: SymbolKind,
    pub class: SymbolClass,
}

impl fmt::Debug for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            SymbolKind::Multiplier(_) => "multiplier".to_string(),
            SymbolKind::TensorRank(t) => format!("rank {}", t.len()),
        };
        f.debug_struct("SymbolSpec").field("name", &self.name).field("kind", &kind).field("class", &self.class).finish()
    }
}

impl SymbolSpec {
    pub fn multiplier(
        name: impl Into<String>,
        class: SymbolClass,
        m: impl Fn(&Point, &Point) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), kind: SymbolKind::Multiplier(Arc::new(m)), class }
    }

    /// Real-valued multiplier.
    pub fn real_multiplier(
        name: impl Into<String>,
        class: SymbolClass,
        m: impl Fn(&Point, &Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::multiplier(name, class, move |a, b| Complex64::new(m(a, b), 0.0))
    }

    pub fn tensor(name: impl Into<String>, class: SymbolClass, terms: Vec<RankTerm>) -> Self {
        Self { name: name.into(), kind: SymbolKind::TensorRank(terms), class }
    }

    /// `σ ≡ 1`.
    pub fn one() -> Self {
        Self::real_multiplier("one", SymbolClass::Joint(0.0), |_, _| 1.0)
    }

    pub fn is_x_independent(&self) -> bool {
        matches!(self.kind, SymbolKind::Multiplier(_))
    }

    pub fn eval(&self, x: &Point, xi1: &Point, xi2: &Point) -> Complex64 {
        match &self.kind {
            SymbolKind::Multiplier(m) => m(xi1, xi2),
            SymbolKind::TensorRank(terms) => terms.iter().map(|t| t.a.eval(x) * (t.b)(xi1) * (t.c)(xi2)).sum(),
        }
    }
}

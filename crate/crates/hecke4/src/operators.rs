//! The weighted colored adjacency operators as exact integer stencils.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::geometry::{ball_index, ball_size, enumerate_ball, table, VertexId};
use crate::weights::{ball_weights_f64, vertex_weight};
use crate::{check_q, Error};

/// One operator row: `(A_i f)(center) = sum c f(u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stencil {
    pub center: VertexId,
    pub step: u8,
    pub terms: Vec<(VertexId, u64)>,
}

impl Stencil {
    pub fn row_sum(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn coefficient_of(&self, u: VertexId) -> Option<u64> {
        self.terms.iter().find(|(x, _)| *x == u).map(|(_, c)| *c)
    }
}

pub fn stencil(x: VertexId, i: u8, q: u64) -> Result<Stencil, Error> {
    check_q(q)?;
    let terms = table(x, i)?.into_iter().map(|(u, p)| (u, p.eval(q))).collect();
    Ok(Stencil { center: x, step: i, terms })
}

pub fn row_sum(x: VertexId, i: u8, q: u64) -> Result<u64, Error> {
    Ok(stencil(x, i, q)?.row_sum())
}

/// Row sums every stencil must reproduce: `(q^3+q^2+q+1, q^4+q^3+2q^2+q+1, q^3+q^2+q+1)`.
pub fn regular_degrees(q: u64) -> [u64; 3] {
    let a = q * q * q + q * q + q + 1;
    [a, q * q * q * q + q * q * q + 2 * q * q + q + 1, a]
}

/// A complex function on `ball(radius)`, stored in ball order.
#[derive(Clone, Debug, PartialEq)]
pub struct BallFunction {
    pub radius: u32,
    pub values: Vec<Complex64>,
}

impl BallFunction {
    pub fn zeros(radius: u32) -> Self {
        BallFunction { radius, values: vec![Complex64::zero(); ball_size(radius)] }
    }

    pub fn from_fn(radius: u32, mut f: impl FnMut(VertexId) -> Complex64) -> Self {
        BallFunction { radius, values: enumerate_ball(radius).into_iter().map(&mut f).collect() }
    }

    pub fn try_from_fn<E>(
        radius: u32,
        mut f: impl FnMut(VertexId) -> Result<Complex64, E>,
    ) -> Result<Self, E> {
        let values = enumerate_ball(radius).into_iter().map(&mut f).collect::<Result<_, _>>()?;
        Ok(BallFunction { radius, values })
    }

    pub fn indicator(radius: u32, x: VertexId) -> Self {
        let mut f = Self::zeros(radius);
        f.set(x, Complex64::new(1.0, 0.0));
        f
    }

    pub fn get(&self, x: VertexId) -> Complex64 {
        if x.ell > self.radius {
            return Complex64::zero();
        }
        self.values[ball_index(x)]
    }

    pub fn set(&mut self, x: VertexId, val: Complex64) {
        let k = ball_index(x);
        self.values[k] = val;
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, Complex64)> + '_ {
        enumerate_ball(self.radius).into_iter().zip(self.values.iter().copied())
    }

    /// Restriction to a smaller ball.
    pub fn restrict(&self, radius: u32) -> Self {
        let radius = radius.min(self.radius);
        BallFunction { radius, values: self.values[..ball_size(radius)].to_vec() }
    }

    /// Largest `ell` carrying a nonzero value, if any.
    pub fn support_radius(&self) -> Option<u32> {
        self.vertices().filter(|(_, c)| *c != Complex64::zero()).map(|(x, _)| x.ell).max()
    }

    pub fn linear_combination(a: Complex64, f: &Self, b: Complex64, g: &Self) -> Result<Self, Error> {
        if f.radius != g.radius {
            return Err(Error::DomainMismatch(f.radius, g.radius));
        }
        let values = f.values.iter().zip(&g.values).map(|(x, y)| a * x + b * y).collect();
        Ok(BallFunction { radius: f.radius, values })
    }
}

/// `A_{w,i} f` on `interior(radius)`, i.e. a function on `ball(radius - 1)`.
pub fn apply(f: &BallFunction, i: u8, q: u64) -> Result<BallFunction, Error> {
    if f.radius == 0 {
        return Err(Error::Usage("apply needs radius >= 1".into()));
    }
    let out_radius = f.radius - 1;
    let mut values = Vec::with_capacity(ball_size(out_radius));
    for x in enumerate_ball(out_radius) {
        let st = stencil(x, i, q)?;
        let mut acc = Complex64::zero();
        for (u, c) in st.terms {
            acc += f.values[ball_index(u)] * c as f64;
        }
        values.push(acc);
    }
    Ok(BallFunction { radius: out_radius, values })
}

/// `sum f(v) conj(g(v)) w(v)` over the common ball.
pub fn inner_product(f: &BallFunction, g: &BallFunction, q: u64) -> Result<Complex64, Error> {
    if f.radius != g.radius {
        return Err(Error::DomainMismatch(f.radius, g.radius));
    }
    let w = ball_weights_f64(f.radius, q)?;
    Ok(f.values.iter().zip(&g.values).zip(&w).map(|((a, b), w)| a * b.conj() * *w).sum())
}

pub fn norm(f: &BallFunction, q: u64) -> Result<f64, Error> {
    Ok(inner_product(f, f, q)?.re.max(0.0).sqrt())
}

/// `|<A_i f, g> - <f, A_{4-i} g>|` for `f, g` supported at least one step
/// inside the ball.
pub fn adjoint_defect(f: &BallFunction, g: &BallFunction, i: u8, q: u64) -> Result<f64, Error> {
    if f.radius != g.radius {
        return Err(Error::DomainMismatch(f.radius, g.radius));
    }
    let radius = f.radius;
    for h in [f, g] {
        if let Some(s) = h.support_radius() {
            if radius < 2 || s > radius - 2 {
                return Err(Error::BoundaryTooClose);
            }
        }
    }
    let af = apply(f, i, q)?;
    let ag = apply(g, 4 - i, q)?;
    let lhs = inner_product(&af, &g.restrict(radius - 1), q)?;
    let rhs = inner_product(&f.restrict(radius - 1), &ag, q)?;
    Ok((lhs - rhs).norm())
}

/// Nonzero entries of `A_i` on `interior(radius)` as `(row, col, w(row) c)`,
/// the symmetrized edge weight. Indices follow the ball order.
pub fn weighted_entries(radius: u32, i: u8, q: u64) -> Result<Vec<(usize, usize, BigRational)>, Error> {
    if radius == 0 {
        return Err(Error::Usage("export needs radius >= 1".into()));
    }
    let mut out = Vec::new();
    for x in enumerate_ball(radius - 1) {
        let w = vertex_weight(x, q)?.0;
        for (u, c) in stencil(x, i, q)?.terms {
            out.push((ball_index(x), ball_index(u), &w * BigRational::from_integer(c.into())));
        }
    }
    Ok(out)
}

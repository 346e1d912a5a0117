//! Decompositions of cycles subordinate to the star cover, the degree map
//! and the quantum integral.

use num::BigInt;

use crate::complex::{Chain, SimplicialComplex};
use crate::cover::{in_support, ChainLayer, Layer, Support};
use crate::error::{Error, Result};
use crate::gauge::GaugeField;
use crate::rmodz::{parity_sum, to_integer, RmodZ, Q};

/// `(c_(0,p), …, c_(p,0), c_(p,-1))`: layer `k` holds local integer
/// `(p−k)`-chains indexed by Čech `k`-simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub p: usize,
    pub layers: Vec<ChainLayer>,
    pub bottom: Chain,
}

/// Which vertex of a simplex receives it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assignment {
    MinVertex,
    MaxVertex,
}

impl CycleDecomposition {
    /// The defining identities for the cycle `z`, integrality and supports.
    pub fn check(&self, k: &SimplicialComplex, z: &Chain) -> bool {
        let p = self.p;
        if self.layers.len() != p + 1 || !self.bottom.is_integral() {
            return false;
        }
        for (i, l) in self.layers.iter().enumerate() {
            if !l.is_zero() && (l.cech_degree != i || l.degree != p - i) {
                return false;
            }
            if !l.is_integral() || !l.supported(k, Support::Closed) {
                return false;
            }
        }
        let total = if self.layers[0].is_zero() { Chain::new(p) } else { self.layers[0].cech_sum() };
        if total != *z {
            return false;
        }
        for i in 1..=p {
            let lhs = self.layers[i].cech_partial();
            let rhs = boundaries(&self.layers[i - 1]);
            if lhs != rhs {
                return false;
            }
        }
        self.bottom == b0_layer(&self.layers[p]) && (p == 0 || self.bottom.boundary_unchecked().is_zero())
    }
}

fn boundaries(l: &ChainLayer) -> ChainLayer {
    l.map_degree(l.degree.saturating_sub(1), |_, x| x.boundary_unchecked())
}

fn b0_layer(l: &ChainLayer) -> Chain {
    l.degree_sum().transpose()
}

/// Cuts `z` into pieces on vertex stars, then cones boundaries off per
/// simplex until only points remain.
pub fn decompose_cycle(k: &SimplicialComplex, z: &Chain, rule: Assignment) -> Result<CycleDecomposition> {
    let p = z.degree();
    if !z.is_integral() {
        return Err(Error::NotIntegral);
    }
    if p > 0 && !z.boundary_unchecked().is_zero() {
        return Err(Error::NotACycle);
    }
    if z.support().any(|t| !k.contains(t)) {
        return Err(Error::Precondition("cycle is not supported on the complex".into()));
    }
    let max = rule == Assignment::MaxVertex;
    let mut first = Layer::new(0, p);
    for (t, c) in z.iter() {
        let v = if max { *t.last().unwrap() } else { t[0] };
        first.add_term(&[v], t.clone(), c);
    }
    let mut layers = vec![first];
    for i in 1..=p {
        let mut next = boundaries(&layers[i - 1]).cech_cone(max);
        next.cech_degree = i;
        next.degree = p - i;
        layers.push(next);
    }
    let bottom = b0_layer(&layers[p]);
    let d = CycleDecomposition { p, layers, bottom };
    debug_assert!(d.layers.iter().all(|l| l.iter().all(|(s, x)| x.support().all(|t| in_support(k, s, t, Support::Closed)))));
    Ok(d)
}

/// Degree of an integer 0-chain.
pub fn degree_b0(c: &Chain) -> Result<BigInt> {
    if c.degree() != 0 && !c.is_zero() {
        return Err(Error::DegreeMismatch { expected: 0, got: c.degree() as i64 });
    }
    if !c.is_integral() {
        return Err(Error::NotIntegral);
    }
    to_integer(&c.coefficient_sum())
}

/// `Σ_k (−1)^k Σ_σ ⟨A^{(k)}_σ, c_(k)^σ⟩` before reduction mod 1.
pub fn integrate_raw(a: &GaugeField, d: &CycleDecomposition) -> Result<Q> {
    if a.p != d.p as i64 {
        return Err(Error::DegreeMismatch { expected: a.p, got: d.p as i64 });
    }
    Ok(parity_sum(a.layers.iter().zip(&d.layers).map(|(x, c)| x.pair(c))))
}

pub fn integrate(a: &GaugeField, d: &CycleDecomposition) -> Result<RmodZ> {
    integrate_raw(a, d).map(|x| RmodZ::from_q(&x))
}

/// Integral along the min-vertex decomposition of `z`.
pub fn holonomy(k: &SimplicialComplex, a: &GaugeField, z: &Chain) -> Result<RmodZ> {
    integrate(a, &decompose_cycle(k, z, Assignment::MinVertex)?)
}

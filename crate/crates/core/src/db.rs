//! The DB product, the BF action, the DB-cap product with the unit dual
//! field, the extended product with currents, and evaluation on 1.

use crate::complex::{cap, cup, parity, Cochain};
use crate::cover::{
    cech_cap, cech_cap_chain, cech_cup_layer, local_fundamental, open_star_chain_primitive, restrict, ChainLayer,
    Layer, PartitionLayers, Support,
};
use crate::currents::{current_from_field, current_pairing, local_current, DualGaugeField, GaugeCurrent};
use crate::cycles::integrate_raw;
use crate::error::{Error, Result};
use crate::gauge::{curvature, GaugeField};
use crate::manifold::Manifold;
use crate::rmodz::{RmodZ, Q};

/// Sign of the Čech line `b ∪ A^{(k-q-1)}` in layer `k` of a product with
/// a `q`-field in front.
fn line_sign(q: usize, k: usize) -> Q {
    parity((q + 1) * (k - q - 1))
}

/// `B ⋆ A`: layers `B^{(k)} ⌣ F(A)` for `k ≤ q`, then `±b ∪ A^{(k-q-1)}`,
/// and top `±b ∪ a`.
pub fn db_product(m: &Manifold, b: &GaugeField, a: &GaugeField) -> Result<GaugeField> {
    if a.p < 0 || b.p < 0 {
        return Err(Error::Precondition("DB product needs fields of degree >= 0".into()));
    }
    let (q, p) = (b.p as usize, a.p as usize);
    let big = p + q + 1;
    if big > m.dim() {
        return Err(Error::DegreeMismatch { expected: (m.dim() - q - 1) as i64, got: p as i64 });
    }
    let f = curvature(m, a)?;
    let mut out = GaugeField::zero(big as i64);
    for i in 0..=q {
        out.layers[i] = b.layers[i].map_degree(big - i, |sigma, x| restrict(m, sigma, &cup(m, x, &f), Support::Closed));
        out.layers[i].cech_degree = i;
    }
    for i in q + 1..=big {
        let mut l = cech_cup_layer(m, &b.top, &a.layers[i - q - 1], Support::Closed).scale(&line_sign(q, i));
        l.cech_degree = i;
        l.degree = big - i;
        out.layers[i] = l;
    }
    if big < m.dim() {
        out.top = cup(m, &b.top, &a.top).scale(&parity((q + 1) * (p + 1)));
    }
    Ok(out)
}

/// `∮_M B ⋆ A` along the min-vertex decomposition of the fundamental
/// cycle, before reduction mod 1.
pub fn bf_action_raw(m: &Manifold, b: &GaugeField, a: &GaugeField) -> Result<Q> {
    let n = m.dim() as i64;
    if a.p + b.p + 1 != n {
        return Err(Error::DegreeMismatch { expected: n - a.p - 1, got: b.p });
    }
    integrate_raw(&db_product(m, b, a)?, m.fundamental_decomposition())
}

/// `k ∮_M B ⋆ A mod 1`; the coupling must be an integer.
pub fn bf_action(m: &Manifold, b: &GaugeField, a: &GaugeField, k: &Q) -> Result<RmodZ> {
    if !k.is_integer() {
        return Err(Error::Coupling);
    }
    Ok(RmodZ::from_q(&(k * bf_action_raw(m, b, a)?)))
}

/// `ε_p = (−1)^{(p+1)(n−p)}`.
pub fn epsilon_sign(p: i64, n: i64) -> i64 {
    if ((p + 1) * (n - p)).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `A ⌢ μ`: the dual gauge `p`-field with layers `F ⌣ μ_k`, corrected in the
/// last layer by `∂Q`, and bottom `a ⌢ m`.
pub fn db_cap(m: &Manifold, a: &GaugeField, mu: &PartitionLayers) -> Result<DualGaugeField> {
    if a.p < 0 {
        return Err(Error::Precondition("DB-cap needs a field of degree >= 0".into()));
    }
    let n = m.dim();
    let p = a.p as usize;
    let q = n - p - 1;
    let f = curvature(m, a)?;
    let mut out = DualGaugeField::zero(n, p as i64)?;
    for i in 0..=q {
        let mut l = mu.mu[i].map_degree(p + 1 + i, |_, w| cup(m, &f, w));
        l.cech_degree = i;
        out.layers[i] = l;
    }
    let mut big_q = Layer::new(q + 1, n);
    for l in 0..=p {
        let piece = cech_cap(&a.layers[l], &mu.mu[l + q + 1], n, |x, w| cup(m, x, w));
        big_q = &big_q + &piece.scale(&parity(n * (l + 1) + (q + 1) * l));
    }
    if !big_q.is_zero() {
        out.layers[q] = &out.layers[q] + &big_q.cech_partial();
        out.layers[q].cech_degree = q;
        out.layers[q].degree = n;
    }
    out.bottom = cech_cap_chain(&a.top, &mu.m);
    Ok(out)
}

/// `B_[p] ⋆ A^[p]`, a gauge `(-1)`-current: `B^{(k)} ∧ F(A)` for `k ≤ q`,
/// then `±b ∪ A^{(k-q-1)}` read as currents.
pub fn extended_db_product(m: &Manifold, bc: &GaugeCurrent, a: &GaugeField) -> Result<GaugeCurrent> {
    if bc.q != a.p || a.p < 0 {
        return Err(Error::DegreeMismatch { expected: bc.q, got: a.p });
    }
    let n = m.dim();
    let q = bc.complement();
    let f = curvature(m, a)?;
    let mut out = GaugeCurrent::zero(n, -1)?;
    for i in 0..=q {
        let mut l = bc.layers[i].map_degree(i, |sigma, x| restrict(m, sigma, &cap(x, &f), Support::Open));
        l.cech_degree = i;
        out.layers[i] = l;
    }
    for i in q + 1..=n {
        let al = &a.layers[i - q - 1];
        let cur: ChainLayer = al.map_degree(n - al.degree, |sigma, x| local_current(m, sigma, x));
        let mut l = cech_cup_layer(m, &bc.top, &cur, Support::Open).scale(&line_sign(q, i));
        l.cech_degree = i;
        l.degree = i;
        out.layers[i] = l;
    }
    Ok(out)
}

/// `(0, …, 0, d†_{-1}r, 0)`: the canonical form of a gauge `(-1)`-current.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopCurrentCanonical {
    pub r: Cochain,
}

/// Kills the layers of a `(-1)`-current one by one with open-star
/// primitives; the remaining top layer is `r_σ [M]_σ`.
pub fn reduce_top_current(m: &Manifold, c: &GaugeCurrent) -> Result<TopCurrentCanonical> {
    if c.q != -1 {
        return Err(Error::DegreeMismatch { expected: -1, got: c.q });
    }
    let n = m.dim();
    let mut rest = c.layers[0].clone();
    for i in 0..n {
        let mut h: ChainLayer = Layer::new(i, i + 1);
        for (sigma, x) in rest.iter() {
            let y = open_star_chain_primitive(m, sigma, x)
                .ok_or_else(|| Error::Infeasible("open-star primitive does not exist".into()))?;
            h.set(sigma.clone(), y);
        }
        rest = &c.layers[i + 1] + &h.hat_delta(m);
    }
    let mut r = Cochain::new(n);
    for (sigma, x) in rest.iter() {
        let fund = local_fundamental(m, sigma);
        let (t, v) = fund.iter().next().expect("nonempty star");
        let s = x.get(t) / v;
        if *x != fund.scale(&s) {
            return Err(Error::Internal("reduced top layer is not a multiple of [M]".into()));
        }
        r.add_term(sigma.clone(), &s);
    }
    if !r.coboundary(m).is_zero() {
        return Err(Error::Internal("reduced top cochain is not closed".into()));
    }
    Ok(TopCurrentCanonical { r })
}

/// `Σ_k (−1)^{nk} ⟨C^{(k)}, μ_k⟩`, before reduction mod 1.
pub fn eval_on_unit_raw(c: &GaugeCurrent, mu: &PartitionLayers) -> Result<Q> {
    if c.q != -1 {
        return Err(Error::DegreeMismatch { expected: -1, got: c.q });
    }
    Ok(current_pairing(c.layers.len() - 1, c.layers.iter().zip(&mu.mu)))
}

pub fn eval_on_unit(c: &GaugeCurrent, mu: &PartitionLayers) -> Result<RmodZ> {
    eval_on_unit_raw(c, mu).map(|x| RmodZ::from_q(&x))
}

/// `(−1)^n r[m]` for the reduced form of `c`.
pub fn eval_on_unit_reduced(m: &Manifold, c: &GaugeCurrent, mu: &PartitionLayers) -> Result<RmodZ> {
    let r = reduce_top_current(m, c)?.r;
    let v = r.eval(&mu.m) * parity(m.dim());
    Ok(RmodZ::from_q(&v))
}

/// `(B ⋆ A)[μ]` evaluated through the current of the product field.
pub fn product_on_unit_raw(m: &Manifold, b: &GaugeField, a: &GaugeField) -> Result<Q> {
    eval_on_unit_raw(&current_from_field(m, &db_product(m, b, a)?)?, m.partition())
}

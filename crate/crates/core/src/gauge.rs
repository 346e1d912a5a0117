//! Gauge p-fields as descent tuples over the star cover, gauge
//! transformations, curvature, characteristic class and the gauge
//! equivalence decision.

use std::ops::{Add, Neg, Sub};

use crate::complex::{Cochain, SimplicialComplex};
use crate::cover::{cone_contract, d_minus1, local_constant, restrict, CochainLayer, Layer, Support};
use crate::cycles::holonomy;
use crate::error::{Error, Result};
use crate::homology::{from_qvector, is_integral_periods, to_vector, ClassCoords};
use crate::linalg::integral_lift;
use crate::manifold::Manifold;
use crate::rmodz::Q;

/// `(A^{(0,p)}, …, A^{(p,0)}, a^{(p+1,-1)})`: layer `k` holds local
/// `(p−k)`-cochains on closed stars of Čech `k`-simplices, `top` is an
/// integer Čech `(p+1)`-cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeField {
    pub p: i64,
    pub layers: Vec<CochainLayer>,
    pub top: Cochain,
}

impl GaugeField {
    pub fn zero(p: i64) -> Self {
        assert!(p >= -1);
        let layers = (0..=p).map(|i| Layer::new(i as usize, (p - i) as usize)).collect();
        GaugeField { p, layers, top: Cochain::new((p + 1) as usize) }
    }

    fn pu(&self) -> usize {
        self.p as usize
    }

    /// The descent equations, integrality of `top` and closed-star supports.
    pub fn check_descent(&self, k: &SimplicialComplex) -> bool {
        let p = self.p;
        if p < -1 || p > k.dim() as i64 || self.layers.len() != (p + 1) as usize {
            return false;
        }
        if !self.top.is_zero() && self.top.degree() != (p + 1) as usize || !self.top.is_integral() {
            return false;
        }
        if p == -1 {
            return self.top.coboundary(k).is_zero();
        }
        for (i, l) in self.layers.iter().enumerate() {
            if !l.is_zero() && (l.cech_degree != i || l.degree != self.pu() - i) {
                return false;
            }
            if !l.supported(k, Support::Closed) {
                return false;
            }
        }
        for i in 0..self.pu() {
            if self.layers[i].cech_delta(k, Support::Closed) != self.layers[i + 1].d(k, Support::Closed) {
                return false;
            }
        }
        self.layers[self.pu()].cech_delta(k, Support::Closed) == d_minus1(k, &self.top)
    }

    pub fn times(&self, m: i64) -> Self {
        let c = Q::from_integer(m.into());
        GaugeField {
            p: self.p,
            layers: self.layers.iter().map(|l| l.scale(&c)).collect(),
            top: self.top.scale(&c),
        }
    }
}

impl Add for &GaugeField {
    type Output = GaugeField;
    fn add(self, o: &GaugeField) -> GaugeField {
        assert_eq!(self.p, o.p, "gauge fields of different degrees");
        GaugeField {
            p: self.p,
            layers: self.layers.iter().zip(&o.layers).map(|(a, b)| a + b).collect(),
            top: &self.top + &o.top,
        }
    }
}

impl Sub for &GaugeField {
    type Output = GaugeField;
    fn sub(self, o: &GaugeField) -> GaugeField {
        self + &-o
    }
}

impl Neg for &GaugeField {
    type Output = GaugeField;
    fn neg(self) -> GaugeField {
        self.times(-1)
    }
}

/// Generators `G^{(0,p-1)}, …, G^{(p-1,0)}` and an integer Čech `p`-cochain `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeTransformation {
    pub p: usize,
    pub generators: Vec<CochainLayer>,
    pub g: Cochain,
}

impl GaugeTransformation {
    pub fn zero(p: usize) -> Self {
        GaugeTransformation {
            p,
            generators: (0..p).map(|i| Layer::new(i, p - 1 - i)).collect(),
            g: Cochain::new(p),
        }
    }

    /// `(dG^0, δG^0 + dG^1, …, δG^{p-1} + d_{-1}g, δg)`.
    pub fn field(&self, k: &SimplicialComplex) -> GaugeField {
        let p = self.p;
        let mut layers = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut l = if i < p {
                self.generators[i].d(k, Support::Closed)
            } else {
                d_minus1(k, &self.g)
            };
            if i > 0 {
                l = &l + &self.generators[i - 1].cech_delta(k, Support::Closed);
            }
            l.cech_degree = i;
            l.degree = p - i;
            layers.push(l);
        }
        GaugeField { p: p as i64, layers, top: self.g.coboundary(k) }
    }
}

/// A rational Čech `p`-cochain `r` with `δr` integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatClassRep {
    pub p: usize,
    pub r: Cochain,
}

impl FlatClassRep {
    /// The flat class whose holonomy along an integer cycle `z` is `⟨w, z⟩`
    /// mod 1, for a rational cocycle `w`.
    pub fn from_cocycle(w: &Cochain) -> Self {
        let p = w.degree();
        FlatClassRep { p, r: w.scale(&crate::complex::parity(p * (p + 1) / 2 + p)) }
    }
}

/// `(δ_{-1}χ, 0, …, 0)`: restrictions of a global form to the closed stars.
pub fn field_from_form(k: &SimplicialComplex, chi: &Cochain) -> GaugeField {
    let p = chi.degree();
    let mut field = GaugeField::zero(p as i64);
    for v in 0..k.num_vertices() {
        field.layers[0].set(vec![v], restrict(k, &[v], chi, Support::Closed));
    }
    field
}

/// `(0, …, 0, d_{-1}r, δr)`.
pub fn field_from_flat_class(k: &SimplicialComplex, rep: &FlatClassRep) -> Result<GaugeField> {
    let top = rep.r.coboundary(k);
    if !top.is_integral() {
        return Err(Error::InvalidFlatClass);
    }
    let mut field = GaugeField::zero(rep.p as i64);
    field.layers[rep.p] = d_minus1(k, &rep.r);
    field.top = top;
    Ok(field)
}

/// Descent of a closed integral `(p+1)`-cochain by the cone operators,
/// with the final constants made integral by an SNF lift.
pub fn field_from_curvature(m: &Manifold, f: &Cochain, p: usize) -> Result<GaugeField> {
    if f.degree() != p + 1 && !f.is_zero() {
        return Err(Error::DegreeMismatch { expected: p as i64 + 1, got: f.degree() as i64 });
    }
    let f = if f.is_zero() { Cochain::new(p + 1) } else { f.clone() };
    if !is_integral_periods(m, &f) {
        return Err(Error::Precondition("curvature must be closed with integral periods".into()));
    }
    let mut field = GaugeField::zero(p as i64);
    for v in 0..m.num_vertices() {
        let local = restrict(m, &[v], &f, Support::Closed);
        field.layers[0].set(vec![v], cone_contract(m, &[v], &local)?);
    }
    for i in 0..p {
        let next = field.layers[i].cech_delta(m, Support::Closed);
        let mut layer = Layer::new(i + 1, p - i - 1);
        for (sigma, x) in next.iter() {
            layer.set(sigma.clone(), cone_contract(m, sigma, x)?);
        }
        field.layers[i + 1] = layer;
    }
    let consts = field.layers[p].cech_delta(m, Support::Closed);
    let c = Cochain::from_terms(p + 1, consts.iter().map(|(s, x)| (s.clone(), local_constant(s, x))));
    let r = if p + 1 > m.dim() {
        Cochain::new(p)
    } else {
        let y = integral_lift(m.coboundary_snf(p), &to_vector(m, &c))
            .ok_or_else(|| Error::Internal("curvature constants admit no integral lift".into()))?;
        from_qvector(m, p, &y)
    };
    field.layers[p] = &field.layers[p] - &d_minus1(m, &r);
    field.top = &c - &r.coboundary(m);
    debug_assert!(field.check_descent(m));
    Ok(field)
}

/// The global `(p+1)`-cochain glued from the local `dA^{(0,p)}`.
pub fn curvature(k: &SimplicialComplex, a: &GaugeField) -> Result<Cochain> {
    if a.p < 0 {
        return Ok(Cochain::new(0));
    }
    let p = a.p as usize;
    let local = a.layers[0].d(k, Support::Closed);
    let mut f = Cochain::new(p + 1);
    for t in k.simplices(p + 1) {
        f.add_term(t.clone(), &local.get(&[t[0]]).get(t));
    }
    for (v, x) in local.iter() {
        if restrict(k, v, &f, Support::Closed) != *x {
            return Err(Error::Internal("local curvatures do not glue".into()));
        }
    }
    Ok(f)
}

/// Coordinates of `[a^{(p+1,-1)}]` in `H^{p+1}`.
pub fn class_of(m: &Manifold, a: &GaugeField) -> ClassCoords {
    m.cohomology((a.p + 1) as usize).coordinates(m, &a.top)
}

#[derive(Clone, Debug)]
pub struct Equivalence {
    pub equivalent: bool,
    /// `G` with `A − B = G.field()`, found independently of the decision.
    pub witness: Option<GaugeTransformation>,
}

/// Decides equivalence from curvature, class and holonomies along
/// generators of `H_p` (free and torsion).
pub fn gauge_equivalent(m: &Manifold, a: &GaugeField, b: &GaugeField) -> Result<Equivalence> {
    if a.p != b.p {
        return Err(Error::DegreeMismatch { expected: a.p, got: b.p });
    }
    if a.p == -1 {
        return Ok(Equivalence { equivalent: a.top == b.top, witness: None });
    }
    let mut equivalent = curvature(m, a)? == curvature(m, b)? && class_of(m, a) == class_of(m, b);
    if equivalent {
        for z in m.homology(a.p as usize).generators() {
            if holonomy(m, a, &z)? != holonomy(m, b, &z)? {
                equivalent = false;
                break;
            }
        }
    }
    let witness = transformation_between(m, &(a - b))?;
    Ok(Equivalence { equivalent, witness })
}

/// Peels `D` layer by layer with the cone operators; `Some(G)` with
/// `G.field() = D` exactly when `D` is a gauge transformation.
pub fn transformation_between(m: &Manifold, d: &GaugeField) -> Result<Option<GaugeTransformation>> {
    if d.p < 0 {
        return Err(Error::Precondition("(-1)-fields have no gauge transformations".into()));
    }
    let p = d.p as usize;
    let mut gens: Vec<CochainLayer> = Vec::with_capacity(p);
    let mut rest = d.layers[0].clone();
    for i in 0..p {
        let mut g = Layer::new(i, p - 1 - i);
        for (sigma, x) in rest.iter() {
            match cone_contract(m, sigma, x) {
                Ok(y) => g.set(sigma.clone(), y),
                Err(Error::NotClosed) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        rest = &d.layers[i + 1] - &g.cech_delta(m, Support::Closed);
        gens.push(g);
    }
    let c = Cochain::from_terms(p, rest.iter().map(|(s, x)| (s.clone(), local_constant(s, x))));
    if d_minus1(m, &c) != rest {
        return Ok(None);
    }
    let g = if p == 0 {
        if !c.is_integral() {
            return Ok(None);
        }
        c
    } else {
        let Some(y) = integral_lift(m.coboundary_snf(p - 1), &to_vector(m, &c)) else {
            return Ok(None);
        };
        let u = from_qvector(m, p - 1, &y);
        gens[p - 1] = &gens[p - 1] + &d_minus1(m, &u);
        &c - &u.coboundary(m)
    };
    let t = GaugeTransformation { p, generators: gens, g };
    if t.field(m) != *d {
        return Ok(None);
    }
    Ok(Some(t))
}

/// Integer `p`-cochains `v` with `δv = d·w`, `d > 1`, from the Smith form of
/// `δ_p`; each `v/d` represents a torsion flat class.
pub fn torsion_flat_cochains(m: &Manifold, p: usize) -> Vec<(Cochain, u64)> {
    if p >= m.dim() {
        return Vec::new();
    }
    let snf = m.coboundary_snf(p);
    (0..snf.rank)
        .filter(|&i| snf.diag[i] > num::BigInt::from(1))
        .map(|i| {
            let col: Vec<Q> = snf.q.column(i).into_iter().map(Q::from_integer).collect();
            let d = num::ToPrimitive::to_u64(&snf.diag[i]).expect("small torsion order");
            (from_qvector(m, p, &col), d)
        })
        .collect()
}

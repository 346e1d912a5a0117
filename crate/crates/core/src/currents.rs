//! Gauge currents, dual gauge fields and dual gauge currents, with their
//! evaluations, transformations and the maps between them.
//!
//! Currents are local chains: a form `ω` on a region becomes the chain
//! `[M] ⌢ ω`, so that `⟨α, [M] ⌢ ω⟩ = ∮ ω ∧ α`. Compactly supported objects
//! live on open stars.

use num::{One, Zero};

use crate::complex::{cap, cap_back, parity, Chain, Cochain, SimplicialComplex};
use crate::cover::{
    cech_cap, dagger_minus1, local_fundamental, open_star_chain_primitive, restrict, ChainLayer,
    CochainLayer, Layer, PartitionLayers, Support,
};
use crate::cycles::CycleDecomposition;
use crate::error::{Error, Result};
use crate::gauge::GaugeField;
use crate::homology::{from_qvector, to_vector};
use crate::linalg::integral_lift;
use crate::manifold::Manifold;
use crate::rmodz::{parity_sum, RmodZ, Q};

fn complement(n: usize, q: i64) -> Result<usize> {
    let p = n as i64 - q - 1;
    if q < -1 || p < 0 {
        return Err(Error::DegreeMismatch { expected: n as i64 - 1, got: q });
    }
    Ok(p as usize)
}

fn check_shape<K: crate::complex::Kind>(l: &Layer<K>, cech: usize, degree: usize) -> bool {
    l.is_zero() || (l.cech_degree == cech && l.degree == degree)
}

/// The current of a local form: `trunc_σ([M]_σ ⌢ ω)`.
pub fn local_current(k: &SimplicialComplex, sigma: &[usize], w: &Cochain) -> Chain {
    restrict(k, sigma, &cap(&local_fundamental(k, sigma), w), Support::Open)
}

fn currents_of(k: &SimplicialComplex, l: &CochainLayer) -> ChainLayer {
    l.map_degree(k.dim() - l.degree, |sigma, x| local_current(k, sigma, x))
}

/// `(A^{(0)}, …, A^{(p)}, a)`: layer `k` holds local `(q+1+k)`-chains on
/// open stars of Čech `k`-simplices; `top` is an integer Čech
/// `(p+1)`-cocycle, `p = n − q − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeCurrent {
    pub q: i64,
    pub layers: Vec<ChainLayer>,
    pub top: Cochain,
}

impl GaugeCurrent {
    pub fn zero(n: usize, q: i64) -> Result<Self> {
        let p = complement(n, q)?;
        let base = (q + 1) as usize;
        Ok(GaugeCurrent {
            q,
            layers: (0..=p).map(|i| Layer::new(i, base + i)).collect(),
            top: Cochain::new(p + 1),
        })
    }

    pub fn complement(&self) -> usize {
        self.layers.len() - 1
    }

    /// `δ̂A^{(k-1)} = d†A^{(k)}`, `δ̂A^{(p)} = d†_{-1}a`, integrality and supports.
    pub fn check_descent(&self, k: &SimplicialComplex) -> bool {
        let n = k.dim();
        let Ok(p) = complement(n, self.q) else { return false };
        if self.layers.len() != p + 1 || !self.top.is_integral() {
            return false;
        }
        if !self.top.is_zero() && self.top.degree() != p + 1 {
            return false;
        }
        let base = (self.q + 1) as usize;
        for (i, l) in self.layers.iter().enumerate() {
            if !check_shape(l, i, base + i) || !l.supported(k, Support::Open) {
                return false;
            }
        }
        for i in 1..=p {
            if self.layers[i - 1].hat_delta(k) != self.layers[i].boundary(k, Support::Open) {
                return false;
            }
        }
        self.layers[p].hat_delta(k) == dagger_minus1(k, &self.top)
    }

    pub fn scale(&self, c: &Q) -> Self {
        GaugeCurrent {
            q: self.q,
            layers: self.layers.iter().map(|l| l.scale(c)).collect(),
            top: self.top.scale(c),
        }
    }
}

impl std::ops::Add for &GaugeCurrent {
    type Output = GaugeCurrent;
    fn add(self, o: &GaugeCurrent) -> GaugeCurrent {
        assert_eq!(self.q, o.q, "currents of different degrees");
        GaugeCurrent {
            q: self.q,
            layers: self.layers.iter().zip(&o.layers).map(|(a, b)| a + b).collect(),
            top: &self.top + &o.top,
        }
    }
}

impl std::ops::Sub for &GaugeCurrent {
    type Output = GaugeCurrent;
    fn sub(self, o: &GaugeCurrent) -> GaugeCurrent {
        self + &o.scale(&-Q::one())
    }
}

/// Generators `G^{(0)}, …, G^{(p-1)}` of local `(q+2+k)`-chains and an
/// integer Čech `p`-cochain `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentTransformation {
    pub q: i64,
    pub generators: Vec<ChainLayer>,
    pub g: Cochain,
}

impl CurrentTransformation {
    pub fn zero(n: usize, q: i64) -> Result<Self> {
        let p = complement(n, q)?;
        Ok(CurrentTransformation {
            q,
            generators: (0..p).map(|i| Layer::new(i, (q + 2) as usize + i)).collect(),
            g: Cochain::new(p),
        })
    }

    /// `(d†G^0, d†G^1 − δ̂G^0, …, d†_{-1}g − δ̂G^{p-1}, δg)`.
    pub fn current(&self, k: &SimplicialComplex) -> GaugeCurrent {
        let p = self.generators.len();
        let base = (self.q + 1) as usize;
        let mut layers = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut l = if i < p {
                self.generators[i].boundary(k, Support::Open)
            } else {
                dagger_minus1(k, &self.g)
            };
            if i > 0 {
                l = &l - &self.generators[i - 1].hat_delta(k);
            }
            l.cech_degree = i;
            l.degree = base + i;
            layers.push(l);
        }
        GaugeCurrent { q: self.q, layers, top: self.g.coboundary(k) }
    }
}

/// The current of a field: each local cochain capped with the local
/// fundamental chain.
pub fn current_from_field(k: &SimplicialComplex, a: &GaugeField) -> Result<GaugeCurrent> {
    if a.p < 0 {
        return Err(Error::Precondition("(-1)-fields have no current layers".into()));
    }
    let n = k.dim();
    let q = n as i64 - a.p - 1;
    let mut out = GaugeCurrent::zero(n, q)?;
    for (i, l) in a.layers.iter().enumerate() {
        let mut c = currents_of(k, l);
        c.cech_degree = i;
        c.degree = (q + 1) as usize + i;
        out.layers[i] = c;
    }
    out.top = a.top.clone();
    Ok(out)
}

/// `(C_0, …, C_p; c)`: layer `k` holds compactly supported
/// `(q+1+k)`-cochains, `c` is an integer Čech `p`-chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGaugeField {
    pub q: i64,
    pub layers: Vec<CochainLayer>,
    pub bottom: Chain,
}

impl DualGaugeField {
    pub fn zero(n: usize, q: i64) -> Result<Self> {
        let p = complement(n, q)?;
        let base = (q + 1) as usize;
        Ok(DualGaugeField {
            q,
            layers: (0..=p).map(|i| Layer::new(i, base + i)).collect(),
            bottom: Chain::new(p),
        })
    }

    /// `dC_k = ∂̂C_{k+1}`, `i_n C_p = c`, open-star supports, and the
    /// consequences `∂C_0` closed with integral periods, `∂c = 0`.
    pub fn check_descent(&self, m: &Manifold) -> bool {
        let n = m.dim();
        let Ok(p) = complement(n, self.q) else { return false };
        if self.layers.len() != p + 1 || !self.bottom.is_integral() {
            return false;
        }
        let base = (self.q + 1) as usize;
        for (i, l) in self.layers.iter().enumerate() {
            if !check_shape(l, i, base + i) || !l.supported(m, Support::Open) {
                return false;
            }
        }
        for i in 0..p {
            if self.layers[i].d(m, Support::Open) != self.layers[i + 1].hat_partial() {
                return false;
            }
        }
        let c: Chain = self.layers[p].integrate_top(m).transpose();
        if c != self.bottom || (p > 0 && !self.bottom.boundary_unchecked().is_zero()) {
            return false;
        }
        let sum = if self.layers[0].is_zero() { Cochain::new(base) } else { self.layers[0].cech_sum() };
        crate::homology::is_integral_periods(m, &sum)
    }

    pub fn scale(&self, c: &Q) -> Self {
        DualGaugeField {
            q: self.q,
            layers: self.layers.iter().map(|l| l.scale(c)).collect(),
            bottom: self.bottom.scale(c),
        }
    }
}

impl std::ops::Add for &DualGaugeField {
    type Output = DualGaugeField;
    fn add(self, o: &DualGaugeField) -> DualGaugeField {
        assert_eq!(self.q, o.q, "dual fields of different degrees");
        DualGaugeField {
            q: self.q,
            layers: self.layers.iter().zip(&o.layers).map(|(a, b)| a + b).collect(),
            bottom: &self.bottom + &o.bottom,
        }
    }
}

impl std::ops::Sub for &DualGaugeField {
    type Output = DualGaugeField;
    fn sub(self, o: &DualGaugeField) -> DualGaugeField {
        self + &o.scale(&-Q::one())
    }
}

/// Generators `G_1, …, G_{p+1}` of compactly supported `(q+k)`-cochains
/// in Čech degree `k`, with `i_n G_{p+1}` an integer Čech chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualTransformation {
    pub q: i64,
    pub generators: Vec<CochainLayer>,
}

impl DualTransformation {
    /// `(∂̂G_1, ∂̂G_2 − dG_1, …, ∂̂G_{p+1} − dG_p; i_n ∂̂G_{p+1})`.
    pub fn field(&self, k: &SimplicialComplex) -> DualGaugeField {
        let p = self.generators.len() - 1;
        let base = (self.q + 1) as usize;
        let mut layers = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut l = self.generators[i].hat_partial();
            if i > 0 {
                l = &l - &self.generators[i - 1].d(k, Support::Open);
            }
            l.cech_degree = i;
            l.degree = base + i;
            layers.push(l);
        }
        let bottom = layers[p].integrate_top(k).transpose();
        DualGaugeField { q: self.q, layers, bottom }
    }

    /// `i_n G_{p+1}` is integral.
    pub fn is_admissible(&self, k: &SimplicialComplex) -> bool {
        let last = self.generators.last().expect("at least one generator");
        last.is_zero() || last.integrate_top(k).is_integral()
    }
}

/// A compactly supported top cochain on the open star of `σ` with
/// integral 1.
pub fn bump(k: &SimplicialComplex, sigma: &[usize]) -> Cochain {
    let t = k
        .cofaces(sigma)
        .into_iter()
        .find(|t| t.len() == k.dim() + 1)
        .expect("every simplex lies in a facet");
    let o = k.orientation()[&t];
    Cochain::from_terms(k.dim(), [(t, Q::from_integer(o.into()))])
}

fn cone_primitive(l: &CochainLayer, degree: usize) -> CochainLayer {
    let mut g = l.cech_cone(false).scale(&parity(degree));
    g.degree = degree;
    g
}

/// Runs the elimination `G_1 = ∂̂⁻¹D_0`, `G_{k+1} = ∂̂⁻¹(D_k + dG_k)`; returns
/// a transformation producing `D` exactly, or `None` when `D` is not one.
pub fn dual_transformation_between(m: &Manifold, d: &DualGaugeField) -> Result<Option<DualTransformation>> {
    let n = m.dim();
    let p = complement(n, d.q)?;
    let base = (d.q + 1) as usize;
    let sum0 = if d.layers[0].is_zero() { Cochain::new(base) } else { d.layers[0].cech_sum() };
    if !sum0.is_zero() {
        return Ok(None);
    }
    let mut gens = Vec::with_capacity(p + 1);
    let mut rest = d.layers[0].clone();
    for i in 0..=p {
        let g = cone_primitive(&rest, base + i);
        if i < p {
            rest = &d.layers[i + 1] + &g.d(m, Support::Open);
        }
        gens.push(g);
    }
    // Shift the last generator by ∂̂-closed pieces to make i_n G_{p+1} integral.
    let last = gens[p].integrate_top(m);
    let target: Chain = last.transpose();
    let shift = if p + 2 > n {
        if !target.is_integral() {
            return Ok(None);
        }
        None
    } else {
        let Some(y) = integral_lift(m.boundary_snf(p + 2), &to_vector(m, &target)) else {
            return Ok(None);
        };
        Some(from_qvector::<crate::complex::ChainKind>(m, p + 2, &y))
    };
    if let Some(w) = shift {
        let mut wl = Layer::new(p + 2, n);
        for (tau, c) in w.iter() {
            wl.set(tau.clone(), bump(m, tau).scale(&(c * parity(n))));
        }
        // ∂̂W is ∂̂-closed and i_n ∂̂W = (−1)^n ∂w.
        gens[p] = &gens[p] - &wl.hat_partial();
        gens[p].cech_degree = p + 1;
        gens[p].degree = n;
    }
    let t = DualTransformation { q: d.q, generators: gens };
    if !t.is_admissible(m) || t.field(m) != *d {
        return Ok(None);
    }
    Ok(Some(t))
}

/// `Σ_k (−1)^{nk} ⟨A^{(k)}, C_k⟩` over layers of a current paired with
/// compactly supported cochains; these weights make the pairing telescope
/// against transformations on either side.
pub fn current_pairing<'a, I>(n: usize, pairs: I) -> Q
where
    I: IntoIterator<Item = (&'a ChainLayer, &'a CochainLayer)>,
{
    let vals = pairs.into_iter().map(|(x, y)| x.pair(y));
    if n % 2 == 1 {
        parity_sum(vals)
    } else {
        vals.fold(Q::zero(), |a, v| a + v)
    }
}

/// The quantum evaluation before reduction mod 1.
pub fn eval_current_on_dualfield_raw(a: &GaugeCurrent, c: &DualGaugeField) -> Result<Q> {
    if a.q != c.q {
        return Err(Error::DegreeMismatch { expected: a.q, got: c.q });
    }
    let n = (a.q + a.layers.len() as i64) as usize;
    Ok(current_pairing(n, a.layers.iter().zip(&c.layers)))
}

pub fn eval_current_on_dualfield(a: &GaugeCurrent, c: &DualGaugeField) -> Result<RmodZ> {
    eval_current_on_dualfield_raw(a, c).map(|x| RmodZ::from_q(&x))
}

/// The dual `(-1)`-field `(μ_0, …, μ_n; m)`.
pub fn unit_dual_field(m: &Manifold) -> DualGaugeField {
    let pl = m.partition();
    DualGaugeField { q: -1, layers: pl.mu.clone(), bottom: pl.m.clone() }
}

/// `(C_(0,p), …, C_(p,0); c)`: layer `k` holds `(p−k)`-chains on closed
/// stars of Čech `k`-simplices, `c` is an integer Čech `p`-cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGaugeCurrent {
    pub p: usize,
    pub layers: Vec<ChainLayer>,
    pub bottom: Chain,
}

impl DualGaugeCurrent {
    pub fn zero(p: usize) -> Self {
        DualGaugeCurrent { p, layers: (0..=p).map(|i| Layer::new(i, p - i)).collect(), bottom: Chain::new(p) }
    }

    /// `∂_simp C_(k) = ∂_Čech C_(k+1)`, `d†_0 C_(p) = c`, `c` a cycle.
    pub fn check_descent(&self, k: &SimplicialComplex) -> bool {
        let p = self.p;
        if self.layers.len() != p + 1 || !self.bottom.is_integral() {
            return false;
        }
        for (i, l) in self.layers.iter().enumerate() {
            if !check_shape(l, i, p - i) || !l.supported(k, Support::Closed) {
                return false;
            }
        }
        for i in 0..p {
            let lhs = self.layers[i].map_degree(p - i - 1, |_, x| x.boundary_unchecked());
            if lhs != self.layers[i + 1].cech_partial() {
                return false;
            }
        }
        let c: Chain = self.layers[p].degree_sum().transpose();
        c == self.bottom && (p == 0 || self.bottom.boundary_unchecked().is_zero())
    }

    pub fn scale(&self, c: &Q) -> Self {
        DualGaugeCurrent {
            p: self.p,
            layers: self.layers.iter().map(|l| l.scale(c)).collect(),
            bottom: self.bottom.scale(c),
        }
    }
}

impl std::ops::Add for &DualGaugeCurrent {
    type Output = DualGaugeCurrent;
    fn add(self, o: &DualGaugeCurrent) -> DualGaugeCurrent {
        assert_eq!(self.p, o.p, "dual currents of different degrees");
        DualGaugeCurrent {
            p: self.p,
            layers: self.layers.iter().zip(&o.layers).map(|(a, b)| a + b).collect(),
            bottom: &self.bottom + &o.bottom,
        }
    }
}

/// Generators `G_(1), …, G_(p+1)` of local `(p−k+1)`-chains on closed
/// stars, with `b_0 G_(p+1)` integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCurrentTransformation {
    pub p: usize,
    pub generators: Vec<ChainLayer>,
}

impl DualCurrentTransformation {
    /// `(∂G_(1), ∂G_(2) + bG_(1), …, ∂G_(p+1) + bG_(p); ∂ b_0 G_(p+1))`.
    pub fn current(&self) -> DualGaugeCurrent {
        let p = self.p;
        let mut layers = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut l = self.generators[i].cech_partial();
            if i > 0 {
                l = &l + &self.generators[i - 1].map_degree(p - i, |_, x| x.boundary_unchecked());
            }
            l.cech_degree = i;
            l.degree = p - i;
            layers.push(l);
        }
        let b0: Chain = self.generators[p].degree_sum().transpose();
        DualGaugeCurrent { p, layers, bottom: b0.boundary_unchecked() }
    }

    pub fn is_admissible(&self) -> bool {
        self.generators[self.p].degree_sum().is_integral()
    }
}

/// Homology class of an integer Čech `p`-cycle of the nerve. The nerve is
/// `K` itself, but the Čech-de Rham isomorphism carries the sign
/// `(−1)^{p(p+1)/2}`: a descent of a closed form `F` ends in a cocycle
/// representing that multiple of `[F]`.
pub fn cl(m: &Manifold, c: &Chain) -> crate::homology::ClassCoords {
    let p = c.degree();
    m.homology(p).coordinates(m, &c.scale(&crate::cover::mu_sign(p)))
}

/// The decomposition pieces read as currents.
pub fn dual_current_from_cycle(d: &CycleDecomposition) -> DualGaugeCurrent {
    DualGaugeCurrent { p: d.p, layers: d.layers.clone(), bottom: d.bottom.clone() }
}

/// `Σ_k (−1)^k Σ_σ ⟨A^{(k)}_σ, C_(k)^σ⟩` before reduction mod 1.
pub fn eval_dualcurrent_on_field_raw(c: &DualGaugeCurrent, a: &GaugeField) -> Result<Q> {
    if a.p != c.p as i64 {
        return Err(Error::DegreeMismatch { expected: c.p as i64, got: a.p });
    }
    Ok(parity_sum(a.layers.iter().zip(&c.layers).map(|(x, y)| x.pair(y))))
}

pub fn eval_dualcurrent_on_field(c: &DualGaugeCurrent, a: &GaugeField) -> Result<RmodZ> {
    eval_dualcurrent_on_field_raw(c, a).map(|x| RmodZ::from_q(&x))
}

/// The dual gauge `p`-current `C^{B,μ}` of a gauge `p`-current:
/// `C_(0) = ∂(Σ_k w_k B^{(k)} ⌢ μ_k) + c_0 (b ⌢ [M] ⌢ μ_{q+1})` and
/// `C_(j) = c_j (b ⌢ [M] ⌢ μ_{q+1+j})`, caps taken on back faces.
pub fn mu_map(m: &Manifold, bc: &GaugeCurrent, mu: &PartitionLayers) -> Result<DualGaugeCurrent> {
    let n = m.dim();
    if bc.q < 0 {
        return Err(Error::Precondition("mu_map needs a current of degree >= 0".into()));
    }
    let p = bc.q as usize;
    let q = n - p - 1;
    let weight = |k: usize| parity(n * k);
    let mut inner: ChainLayer = Layer::new(0, p + 1);
    for (k, l) in bc.layers.iter().enumerate() {
        let piece: ChainLayer = cech_cap(&mu.mu[k], l, p + 1, |w, c| cap_back(c, w));
        inner = &inner + &piece.scale(&weight(k));
    }
    let mut out = DualGaugeCurrent::zero(p);
    for j in 0..=p {
        let k = q + 1 + j;
        let forms: ChainLayer =
            mu.mu[k].map_degree(n - k, |sigma, w| cap_back(&local_fundamental(m, sigma), w));
        let sign = parity(j) * weight(k) * parity((q + 1) * j);
        let mut l = back_cap(&bc.top, &forms).scale(&sign);
        if j == 0 {
            l = &l + &inner.map_degree(p, |_, x| x.boundary_unchecked());
        }
        l.cech_degree = j;
        l.degree = p - j;
        out.layers[j] = l;
    }
    out.bottom = out.layers[p].degree_sum().transpose();
    Ok(out)
}

/// `(b ⌢ X)_ρ = Σ b(σ[..=f]) X^σ` over `σ` with back face `σ[f..] = ρ`.
fn back_cap(b: &Cochain, l: &ChainLayer) -> ChainLayer {
    let f = b.degree();
    let mut out = Layer::new(l.cech_degree - f, l.degree);
    for (sigma, x) in l.iter() {
        let c = b.get(&sigma[..=f]);
        if !c.is_zero() {
            out.add_to(sigma[f..].to_vec(), &x.scale(&c));
        }
    }
    out
}

/// A gauge `p`-current whose dual current and evaluations reproduce the
/// holonomy along the integer `p`-cycle `z`: the descent of `z` by
/// open-star primitives, with the final constants made integral.
pub fn canonical_current_of_cycle(m: &Manifold, z: &Chain) -> Result<GaugeCurrent> {
    let n = m.dim();
    let p = z.degree();
    if p >= n {
        return Err(Error::Precondition("cycles of top dimension have no current of degree n".into()));
    }
    if !z.is_integral() {
        return Err(Error::NotIntegral);
    }
    if p > 0 && !z.boundary_unchecked().is_zero() {
        return Err(Error::NotACycle);
    }
    let q = n - p - 1;
    let mut out = GaugeCurrent::zero(n, p as i64)?;
    let infeasible = || Error::Infeasible("open-star primitive does not exist".into());
    let mut layer: ChainLayer = Layer::new(0, p + 1);
    for v in 0..m.num_vertices() {
        let local = restrict(m, &[v], z, Support::Open);
        if local.is_zero() {
            continue;
        }
        layer.set(vec![v], open_star_chain_primitive(m, &[v], &local).ok_or_else(infeasible)?);
    }
    out.layers[0] = layer;
    for i in 1..=q {
        let next = out.layers[i - 1].hat_delta(m);
        let mut layer = Layer::new(i, p + 1 + i);
        for (sigma, x) in next.iter() {
            layer.set(sigma.clone(), open_star_chain_primitive(m, sigma, x).ok_or_else(infeasible)?);
        }
        out.layers[i] = layer;
    }
    let last = out.layers[q].hat_delta(m);
    let mut x = Cochain::new(q + 1);
    for (sigma, c) in last.iter() {
        let fund = local_fundamental(m, sigma);
        let (t, v) = fund.iter().next().expect("nonempty star");
        let s = c.get(t) / v;
        if *c != fund.scale(&s) {
            return Err(Error::Infeasible("top layer is not a multiple of the local fundamental chain".into()));
        }
        x.add_term(sigma.clone(), &s);
    }
    let y = integral_lift(m.coboundary_snf(q), &to_vector(m, &x))
        .ok_or_else(|| Error::Infeasible("constants admit no integral lift".into()))?;
    let r: Cochain = from_qvector(m, q, &y);
    out.layers[q] = &out.layers[q] - &dagger_minus1(m, &r);
    out.layers[q].cech_degree = q;
    out.layers[q].degree = n;
    out.top = &x - &r.coboundary(m);
    debug_assert!(out.check_descent(m));
    Ok(out)
}

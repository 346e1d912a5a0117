//! The open-star cover, Čech–de Rham layers and the local Poincaré lemma.
//!
//! The nerve of the open-star cover is the complex itself, so Čech indices
//! are simplices. Entries are stored once per sorted index; antisymmetry
//! under reordering is implicit.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::complex::{
    insert_pos, is_subset, parity, with_vertex, without, Chain, Cochain, Kind, Simplex,
    SimplicialComplex, Sparse,
};
use crate::error::{Error, Result};
use crate::linalg::solve_rational;
use crate::rmodz::Q;

/// Where the local pieces of a layer live.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    /// Closed star `St̄(σ)`: simplices `τ` with `τ ∪ σ` in the complex.
    Closed,
    /// Open star: simplices containing `σ` (discrete compact support).
    Open,
}

pub fn in_support(k: &SimplicialComplex, sigma: &[usize], tau: &[usize], s: Support) -> bool {
    match s {
        Support::Closed => k.in_closed_star(sigma, tau),
        Support::Open => is_subset(sigma, tau),
    }
}

pub fn restrict<K: Kind>(k: &SimplicialComplex, sigma: &[usize], x: &Sparse<K>, s: Support) -> Sparse<K> {
    x.filter(|t| in_support(k, sigma, t, s))
}

/// A Čech collection of local (co)chains: one entry per index simplex.
#[derive(Clone, Debug)]
pub struct Layer<K: Kind> {
    pub cech_degree: usize,
    pub degree: usize,
    entries: BTreeMap<Simplex, Sparse<K>>,
}

// Empty layers compare equal whatever their nominal degrees.
impl<K: Kind> PartialEq for Layer<K> {
    fn eq(&self, o: &Self) -> bool {
        self.entries == o.entries
            && (self.entries.is_empty() || (self.cech_degree, self.degree) == (o.cech_degree, o.degree))
    }
}

impl<K: Kind> Eq for Layer<K> {}

pub type CochainLayer = Layer<crate::complex::CochainKind>;
pub type ChainLayer = Layer<crate::complex::ChainKind>;

impl<K: Kind> Layer<K> {
    pub fn new(cech_degree: usize, degree: usize) -> Self {
        Layer { cech_degree, degree, entries: BTreeMap::new() }
    }

    pub fn get(&self, sigma: &[usize]) -> Sparse<K> {
        self.entries.get(sigma).cloned().unwrap_or_else(|| Sparse::new(self.degree))
    }

    pub fn entry(&self, sigma: &[usize]) -> Option<&Sparse<K>> {
        self.entries.get(sigma)
    }

    pub fn set(&mut self, sigma: Simplex, x: Sparse<K>) {
        debug_assert_eq!(sigma.len(), self.cech_degree + 1);
        if x.is_zero() {
            self.entries.remove(&sigma);
        } else {
            debug_assert_eq!(x.degree(), self.degree);
            self.entries.insert(sigma, x);
        }
    }

    pub fn add_to(&mut self, sigma: Simplex, x: &Sparse<K>) {
        if x.is_zero() {
            return;
        }
        let mut cur = self.entries.remove(&sigma).unwrap_or_else(|| Sparse::new(self.degree));
        cur += x;
        self.set(sigma, cur);
    }

    pub fn add_term(&mut self, sigma: &[usize], tau: Simplex, c: &Q) {
        if c.is_zero() {
            return;
        }
        let mut cur = self.entries.remove(sigma).unwrap_or_else(|| Sparse::new(self.degree));
        cur.add_term(tau, c);
        self.set(sigma.to_vec(), cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &Sparse<K>)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map(|_, x| x.scale(c))
    }

    pub fn map<F: Fn(&Simplex, &Sparse<K>) -> Sparse<K>>(&self, f: F) -> Self {
        let mut out = Layer::new(self.cech_degree, self.degree);
        for (s, x) in &self.entries {
            out.set(s.clone(), f(s, x));
        }
        out
    }

    /// Same pieces with a new (co)chain degree, used by entrywise operators.
    pub fn map_degree<L: Kind, F: Fn(&Simplex, &Sparse<K>) -> Sparse<L>>(&self, degree: usize, f: F) -> Layer<L> {
        let mut out = Layer::new(self.cech_degree, degree);
        for (s, x) in &self.entries {
            out.set(s.clone(), f(s, x));
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|x| x.is_integral())
    }

    /// `Σ_σ ⟨self_σ, other_σ⟩` over sorted indices; equals the
    /// `1/(k+1)!`-weighted sum over ordered indices for antisymmetric data.
    pub fn pair<L: Kind>(&self, other: &Layer<L>) -> Q {
        let mut acc = Q::zero();
        for (s, x) in &self.entries {
            if let Some(y) = other.entries.get(s) {
                acc += x.dot(y);
            }
        }
        acc
    }

    /// Restriction of every entry to its support region.
    pub fn restricted(&self, k: &SimplicialComplex, s: Support) -> Self {
        self.map(|sigma, x| restrict(k, sigma, x, s))
    }

    /// Every entry lies in its support region.
    pub fn supported(&self, k: &SimplicialComplex, s: Support) -> bool {
        self.entries
            .iter()
            .all(|(sigma, x)| k.contains(sigma) && x.support().all(|t| in_support(k, sigma, t, s)))
    }

    /// Čech coboundary `(δL)_{σ} = Σ_i (-1)^i L_{σ∖σ_i}` restricted to `σ`.
    pub fn cech_delta(&self, k: &SimplicialComplex, s: Support) -> Self {
        let mut out = Layer::new(self.cech_degree + 1, self.degree);
        for (sigma, x) in &self.entries {
            for &v in k.extensions(sigma) {
                let (big, pos) = with_vertex(sigma, v);
                let piece = restrict(k, &big, x, s).scale(&parity(pos));
                out.add_to(big, &piece);
            }
        }
        out
    }

    /// Čech boundary `(∂L)^ρ = Σ_α L^{αρ}`; pieces extend by zero.
    pub fn cech_partial(&self) -> Self {
        assert!(self.cech_degree >= 1, "Čech boundary of a degree-0 layer is a global object");
        let mut out = Layer::new(self.cech_degree - 1, self.degree);
        for (sigma, x) in &self.entries {
            for i in 0..sigma.len() {
                out.add_to(without(sigma, i), &x.scale(&parity(i)));
            }
        }
        out
    }

    /// `Σ_α L^α` for a Čech degree-0 layer.
    pub fn cech_sum(&self) -> Sparse<K> {
        assert_eq!(self.cech_degree, 0);
        let mut out = Sparse::new(self.degree);
        for x in self.entries.values() {
            out += x;
        }
        out
    }

    /// Per-simplex Čech cone: for every `τ`, the Čech chain `ρ ↦ L^ρ(τ)` is
    /// coned off from a vertex of `τ` (`max_vertex` picks the apex). When the
    /// input is a Čech cycle (and `Σ_ρ L^ρ = 0` in degree 0) the output `H`
    /// satisfies `∂H = L`.
    pub fn cech_cone(&self, max_vertex: bool) -> Self {
        let mut out = Layer::new(self.cech_degree + 1, self.degree);
        for (rho, x) in &self.entries {
            for (tau, c) in x.iter() {
                let v = if max_vertex { *tau.last().unwrap() } else { tau[0] };
                if rho.binary_search(&v).is_ok() {
                    continue;
                }
                let pos = insert_pos(rho, v);
                let (big, _) = with_vertex(rho, v);
                out.add_term(&big, tau.clone(), &(c * parity(pos)));
            }
        }
        out
    }
}

impl<K: Kind> std::ops::Add for &Layer<K> {
    type Output = Layer<K>;
    fn add(self, o: &Layer<K>) -> Layer<K> {
        let mut out = self.clone();
        if out.is_zero() {
            out.cech_degree = o.cech_degree;
            out.degree = o.degree;
        }
        for (s, x) in &o.entries {
            out.add_to(s.clone(), x);
        }
        out
    }
}

impl<K: Kind> std::ops::Sub for &Layer<K> {
    type Output = Layer<K>;
    fn sub(self, o: &Layer<K>) -> Layer<K> {
        self + &o.scale(&-Q::one())
    }
}

impl<K: Kind> std::ops::Neg for &Layer<K> {
    type Output = Layer<K>;
    fn neg(self) -> Layer<K> {
        self.scale(&-Q::one())
    }
}

impl CochainLayer {
    /// Entrywise coboundary, restricted to each support region.
    pub fn d(&self, k: &SimplicialComplex, s: Support) -> Self {
        self.map_degree(self.degree + 1, |sigma, x| restrict(k, sigma, &x.coboundary(k), s))
    }

    /// `∂̂ = (-1)^a ∂` on layers of `a`-cochains.
    pub fn hat_partial(&self) -> Self {
        self.cech_partial().scale(&parity(self.degree))
    }

    /// `i_n`: integral of each top-degree piece over the fundamental cycle.
    pub fn integrate_top(&self, k: &SimplicialComplex) -> Cochain {
        let mut out = Cochain::new(self.cech_degree);
        for (sigma, x) in &self.entries {
            let v = x.iter().fold(Q::zero(), |a, (t, c)| a + c * Q::from_integer(k.orientation()[t].into()));
            out.add_term(sigma.clone(), &v);
        }
        out
    }
}

impl ChainLayer {
    /// Entrywise boundary, truncated to each support region.
    pub fn boundary(&self, k: &SimplicialComplex, s: Support) -> Self {
        assert!(self.degree >= 1);
        self.map_degree(self.degree - 1, |sigma, x| restrict(k, sigma, &x.boundary_unchecked(), s))
    }

    /// `δ̂ = (-1)^{n-l} δ` on local `l`-dimensional currents with open-star support.
    pub fn hat_delta(&self, k: &SimplicialComplex) -> Self {
        self.cech_delta(k, Support::Open).scale(&parity(k.dim() - self.degree))
    }

    /// Entrywise degree (sum of coefficients) of a layer of 0-chains.
    pub fn degree_sum(&self) -> Cochain {
        assert_eq!(self.degree, 0);
        let mut out = Cochain::new(self.cech_degree);
        for (sigma, x) in &self.entries {
            out.add_term(sigma.clone(), &x.coefficient_sum());
        }
        out
    }
}

/// Vertices of the closed star of `σ`.
pub fn star_vertices(k: &SimplicialComplex, sigma: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = sigma.iter().copied().collect();
    for v in 0..k.num_vertices() {
        if !set.contains(&v) && k.in_closed_star(sigma, &[v]) {
            set.insert(v);
        }
    }
    set.into_iter().collect()
}

/// `d_{-1}`: each Čech entry `h_σ` becomes the constant 0-cochain on `St̄(σ)`.
pub fn d_minus1(k: &SimplicialComplex, h: &Cochain) -> CochainLayer {
    let mut out = Layer::new(h.degree(), 0);
    for (sigma, c) in h.iter() {
        let x = Cochain::from_terms(0, star_vertices(k, sigma).into_iter().map(|v| (vec![v], c.clone())));
        out.set(sigma.clone(), x);
    }
    out
}

/// Local fundamental chain `[M]_σ = Σ_{T ⊇ σ} o_T T`.
pub fn local_fundamental(k: &SimplicialComplex, sigma: &[usize]) -> Chain {
    let n = k.dim();
    Chain::from_terms(
        n,
        k.cofaces(sigma)
            .into_iter()
            .filter(|t| t.len() == n + 1)
            .map(|t| {
                let o = k.orientation()[&t];
                (t, Q::from_integer(o.into()))
            }),
    )
}

/// `d†_{-1}`: each Čech entry `h_σ` becomes the local current `h_σ [M]_σ`.
pub fn dagger_minus1(k: &SimplicialComplex, h: &Cochain) -> ChainLayer {
    let mut out = Layer::new(h.degree(), k.dim());
    for (sigma, c) in h.iter() {
        out.set(sigma.clone(), local_fundamental(k, sigma).scale(c));
    }
    out
}

/// Cone operator on `St̄(σ)` with apex the minimum vertex of `σ`:
/// `(hω)(τ) = ω([apex, τ])`, so that `dh + hd = id − ε`.
pub fn cone_operator(sigma: &[usize], c: &Cochain) -> Cochain {
    let apex = sigma[0];
    let mut out = Cochain::new(c.degree().saturating_sub(1));
    if c.degree() == 0 {
        return out;
    }
    for (t, x) in c.iter() {
        if let Ok(pos) = t.binary_search(&apex) {
            out.add_term(without(t, pos), &(x * parity(pos)));
        }
    }
    out
}

/// Primitive of a closed local cochain of degree ≥ 1 on `St̄(σ)`.
pub fn cone_contract(k: &SimplicialComplex, sigma: &[usize], c: &Cochain) -> Result<Cochain> {
    if c.degree() == 0 {
        return Err(Error::Precondition("cone_contract needs degree >= 1; closed 0-cochains are constants".into()));
    }
    if !restrict(k, sigma, &c.coboundary(k), Support::Closed).is_zero() {
        return Err(Error::NotClosed);
    }
    Ok(cone_operator(sigma, c))
}

/// Value of a closed local 0-cochain on `St̄(σ)` (its constant).
pub fn local_constant(sigma: &[usize], c: &Cochain) -> Q {
    c.get(&[sigma[0]])
}

/// `y` with `trunc_σ(∂y) = x` among chains supported on simplices
/// containing `σ`. Exists whenever `x` is a relative cycle below the top
/// dimension.
pub fn open_star_chain_primitive(k: &SimplicialComplex, sigma: &[usize], x: &Chain) -> Option<Chain> {
    let d = x.degree();
    let star = k.cofaces(sigma);
    let rows: Vec<&Simplex> = star.iter().filter(|t| t.len() == d + 1).collect();
    let cols: Vec<&Simplex> = star.iter().filter(|t| t.len() == d + 2).collect();
    let row_idx: BTreeMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut a = vec![vec![Q::zero(); cols.len()]; rows.len()];
    for (j, t) in cols.iter().enumerate() {
        for i in 0..t.len() {
            let f = without(t, i);
            if let Some(&r) = row_idx.get(&f) {
                a[r][j] = parity(i);
            }
        }
    }
    let b: Vec<Q> = rows.iter().map(|t| x.get(t)).collect();
    if x.support().any(|t| !row_idx.contains_key(t)) {
        return None;
    }
    let sol = solve_rational(&a, cols.len(), &b)?;
    Some(Chain::from_terms(d + 1, cols.iter().zip(sol).map(|(t, c)| ((*t).clone(), c))))
}

/// `y` supported on the open star of `σ` with `dy = x`.
pub fn open_star_cochain_primitive(k: &SimplicialComplex, sigma: &[usize], x: &Cochain) -> Option<Cochain> {
    let d = x.degree();
    if d == 0 {
        return if x.is_zero() { Some(Cochain::new(0)) } else { None };
    }
    let star = k.cofaces(sigma);
    let cols: Vec<&Simplex> = star.iter().filter(|t| t.len() == d).collect();
    let rows: Vec<&Simplex> = star.iter().filter(|t| t.len() == d + 1).collect();
    let row_idx: BTreeMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut a = vec![vec![Q::zero(); cols.len()]; rows.len()];
    for (j, t) in cols.iter().enumerate() {
        for &v in k.extensions(t) {
            let (u, pos) = with_vertex(t, v);
            if let Some(&r) = row_idx.get(&u) {
                a[r][j] = parity(pos);
            }
        }
    }
    if x.support().any(|t| !row_idx.contains_key(t)) {
        return None;
    }
    let b: Vec<Q> = rows.iter().map(|t| x.get(t)).collect();
    let sol = solve_rational(&a, cols.len(), &b)?;
    Some(Cochain::from_terms(d - 1, cols.iter().zip(sol).map(|(t, c)| ((*t).clone(), c))))
}

/// Which construction produced the partition layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuBranch {
    /// The antisymmetrized product of the partition functions with cup.
    Antisymmetrized,
    /// Signed elementary cochains `s_k e^{[α_0..α_k]}`.
    Elementary,
}

/// Layers `μ_0..μ_n` of compactly supported cochains, and the integer Čech
/// n-cycle `m = i_n μ_n`.
#[derive(Clone, Debug)]
pub struct PartitionLayers {
    pub mu: Vec<CochainLayer>,
    pub m: Chain,
    /// Correction turning `i_n ν_n` into an integer cycle; zero here because
    /// the nerve has no (n+1)-simplices.
    pub rho: Chain,
    pub branch: MuBranch,
}

/// `s_k = (-1)^{k(k+1)/2}`, the sign that makes `d μ_{k-1} = ∂̂ μ_k` hold
/// for elementary layers.
pub fn mu_sign(k: usize) -> Q {
    parity(k * (k + 1) / 2)
}

/// Partition functions `μ^α = e^{[α]}`.
pub fn partition_functions(k: &SimplicialComplex) -> Vec<Cochain> {
    (0..k.num_vertices()).map(|v| Cochain::elementary(vec![v])).collect()
}

/// `prefactor · Σ_π sign(π) μ^{α_π0} ⌣ dμ^{α_π1} ⌣ … ⌣ dμ^{α_πk}`.
pub fn antisymmetrized_mu(k: &SimplicialComplex, sigma: &[usize], prefactor: &Q) -> Cochain {
    let deg = sigma.len() - 1;
    let mut total = Cochain::new(deg);
    for (perm, sgn) in permutations(deg + 1) {
        let mut acc = Cochain::elementary(vec![sigma[perm[0]]]);
        for &i in &perm[1..] {
            let dmu = Cochain::elementary(vec![sigma[i]]).coboundary(k);
            acc = crate::complex::cup(k, &acc, &dmu);
        }
        total += &acc.scale(&Q::from_integer(sgn.into()));
    }
    total.scale(prefactor)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        // Insert n-1 at each position; moving it left past j entries flips sign j times.
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let flips = p.len() - pos;
            out.push((q, if flips % 2 == 0 { s } else { -s }));
        }
    }
    out
}

fn mu_layers<F: Fn(&Simplex) -> Cochain>(k: &SimplicialComplex, f: F) -> Vec<CochainLayer> {
    (0..=k.dim())
        .map(|d| {
            let mut layer = Layer::new(d, d);
            for sigma in k.simplices(d) {
                layer.set(sigma.clone(), f(sigma));
            }
            layer
        })
        .collect()
}

/// `d μ_{k-1} = ∂̂ μ_k` for `k ≥ 1`, and `Σ_α μ_0^α = 1`.
pub fn mu_descent_holds(k: &SimplicialComplex, mu: &[CochainLayer]) -> bool {
    let one = Cochain::from_terms(0, (0..k.num_vertices()).map(|v| (vec![v], Q::one())));
    if mu[0].cech_sum() != one {
        return false;
    }
    (1..mu.len()).all(|i| mu[i - 1].d(k, Support::Open) == mu[i].hat_partial())
}

/// Elementary layers `μ_k^σ = s_k e^σ`.
pub fn elementary_mu(k: &SimplicialComplex) -> Vec<CochainLayer> {
    mu_layers(k, |s| Cochain::elementary(s.clone()).scale(&mu_sign(s.len() - 1)))
}

/// Antisymmetrized layers with prefactor `sign(k)` in Čech degree `k`.
pub fn antisymmetrized_layers<S: Fn(usize) -> Q>(k: &SimplicialComplex, sign: S) -> Vec<CochainLayer> {
    mu_layers(k, |s| antisymmetrized_mu(k, s, &sign(s.len() - 1)))
}

pub fn partition_layers(k: &SimplicialComplex) -> Result<PartitionLayers> {
    if !k.is_oriented() {
        return Err(Error::Orientation("partition layers need an oriented manifold".into()));
    }
    let n = k.dim();
    let literal = antisymmetrized_layers(k, |d| parity(d));
    let literal_ok = literal.iter().all(|l| l.supported(k, Support::Open)) && mu_descent_holds(k, &literal);
    let (mu, branch) = if literal_ok {
        (literal, MuBranch::Antisymmetrized)
    } else {
        (elementary_mu(k), MuBranch::Elementary)
    };
    if !mu_descent_holds(k, &mu) {
        return Err(Error::Internal("partition layers fail their descent equations".into()));
    }
    let nu = mu[n].integrate_top(k);
    if !nu.is_integral() {
        return Err(Error::Internal("i_n ν_n is not integral".into()));
    }
    let m: Chain = nu.transpose();
    if !m.boundary_unchecked().is_zero() {
        return Err(Error::Internal("m is not a Čech cycle".into()));
    }
    Ok(PartitionLayers { mu, m, rho: Chain::new(n), branch })
}

/// Čech cup with a Čech `j`-cochain in front:
/// `(b ∪ L)_σ = b(σ[0..=j]) · L_{σ[j..]}`, restricted to the region of `σ`.
pub fn cech_cup_layer<K: Kind>(k: &SimplicialComplex, b: &Cochain, l: &Layer<K>, s: Support) -> Layer<K> {
    let j = b.degree();
    let mut out = Layer::new(j + l.cech_degree, l.degree);
    let mut by_first: BTreeMap<usize, Vec<(&Simplex, &Sparse<K>)>> = BTreeMap::new();
    for (rho, x) in l.iter() {
        by_first.entry(rho[0]).or_default().push((rho, x));
    }
    for (front, c) in b.iter() {
        let Some(list) = by_first.get(&front[j]) else { continue };
        for (rho, x) in list {
            if rho.len() > 1 && rho[1] <= front[j] {
                continue;
            }
            let mut sigma = front.clone();
            sigma.extend_from_slice(&rho[1..]);
            if !k.contains(&sigma) {
                continue;
            }
            let piece = restrict(k, &sigma, x, s).scale(c);
            out.add_to(sigma, &piece);
        }
    }
    out
}

/// Čech cap `(X ⌢̃ Y)^α = Σ_{τ[0..=l] = α} f(X_{τ[l..]}, Y^τ)` with `l` the
/// difference of Čech degrees, using the sorted front/back split.
pub fn cech_cap<A: Kind, B: Kind, C: Kind, F>(x: &Layer<A>, y: &Layer<B>, degree: usize, f: F) -> Layer<C>
where
    F: Fn(&Sparse<A>, &Sparse<B>) -> Sparse<C>,
{
    assert!(y.cech_degree >= x.cech_degree);
    let l = y.cech_degree - x.cech_degree;
    let mut out = Layer::new(l, degree);
    for (tau, yv) in y.iter() {
        if let Some(xv) = x.entry(&tau[l..]) {
            out.add_to(tau[..=l].to_vec(), &f(xv, yv));
        }
    }
    out
}

/// Čech cap of a Čech cochain with a Čech chain, sorted front/back split.
pub fn cech_cap_chain(a: &Cochain, c: &Chain) -> Chain {
    let j = a.degree();
    let d = c.degree();
    let mut out = Chain::new(d.saturating_sub(j));
    if j > d {
        return out;
    }
    let l = d - j;
    for (tau, x) in c.iter() {
        let v = a.get(&tau[l..]);
        if !v.is_zero() {
            out.add_term(tau[..=l].to_vec(), &(x * v));
        }
    }
    out
}

//! Oriented simplicial complexes and sparse exact (co)chains.
//!
//! Simplices are sorted vertex lists in the global vertex order. A chain or
//! cochain is a sparse map from simplices of one dimension to rationals.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rmodz::Q;

pub type Simplex = Vec<usize>;

/// Position of `v` in the sorted simplex `s ∪ {v}`.
pub fn insert_pos(s: &[usize], v: usize) -> usize {
    s.partition_point(|&x| x < v)
}

/// Sign `(-1)^i` as a rational.
pub fn parity(i: usize) -> Q {
    if i % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn parity_i(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn union(a: &[usize], b: &[usize]) -> Simplex {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
    }
    true
}

pub fn with_vertex(s: &[usize], v: usize) -> (Simplex, usize) {
    let pos = insert_pos(s, v);
    let mut t = s.to_vec();
    t.insert(pos, v);
    (t, pos)
}

pub fn without(s: &[usize], i: usize) -> Simplex {
    let mut t = s.to_vec();
    t.remove(i);
    t
}

pub fn simplex_key(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub trait Kind: Clone + fmt::Debug + PartialEq + Eq + Default {
    const NAME: &'static str;
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainKind;
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CochainKind;

impl Kind for ChainKind {
    const NAME: &'static str = "chain";
}
impl Kind for CochainKind {
    const NAME: &'static str = "cochain";
}

/// Sparse map from `degree`-simplices to rationals; zeros are never stored.
#[derive(Clone)]
pub struct Sparse<K: Kind> {
    degree: usize,
    coeffs: BTreeMap<Simplex, Q>,
    _kind: PhantomData<K>,
}

// Zero elements compare equal whatever their nominal degree.
impl<K: Kind> PartialEq for Sparse<K> {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs && (self.coeffs.is_empty() || self.degree == o.degree)
    }
}

impl<K: Kind> Eq for Sparse<K> {}

pub type Chain = Sparse<ChainKind>;
pub type Cochain = Sparse<CochainKind>;

impl<K: Kind> fmt::Debug for Sparse<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]{{", K::NAME, self.degree)?;
        for (i, (s, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", simplex_key(s), c)?;
        }
        write!(f, "}}")
    }
}

impl<K: Kind> Sparse<K> {
    pub fn new(degree: usize) -> Self {
        Sparse { degree, coeffs: BTreeMap::new(), _kind: PhantomData }
    }

    pub fn from_terms<I: IntoIterator<Item = (Simplex, Q)>>(degree: usize, terms: I) -> Self {
        let mut s = Self::new(degree);
        for (k, c) in terms {
            s.add_term(k, &c);
        }
        s
    }

    pub fn elementary(s: Simplex) -> Self {
        let d = s.len() - 1;
        Self::from_terms(d, [(s, Q::one())])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, s: &[usize]) -> Q {
        self.coeffs.get(s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, s: Simplex, c: &Q) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(s.len(), self.degree + 1, "simplex dimension mismatch");
        match self.coeffs.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &Q)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Simplex> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::new(self.degree);
        }
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Keeps the terms whose simplex satisfies `keep`.
    pub fn filter<F: Fn(&Simplex) -> bool>(&self, keep: F) -> Self {
        let mut out = Self::new(self.degree);
        for (s, c) in &self.coeffs {
            if keep(s) {
                out.coeffs.insert(s.clone(), c.clone());
            }
        }
        out
    }

    /// Same coefficients viewed as the other kind.
    pub fn transpose<L: Kind>(&self) -> Sparse<L> {
        Sparse { degree: self.degree, coeffs: self.coeffs.clone(), _kind: PhantomData }
    }

    /// Plain coefficient pairing `Σ_s self(s) other(s)`.
    pub fn dot<L: Kind>(&self, other: &Sparse<L>) -> Q {
        if self.degree != other.degree {
            return Q::zero();
        }
        let (small, large) = if self.len() <= other.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        let mut acc = Q::zero();
        for (s, c) in small {
            if let Some(d) = large.get(s) {
                acc += c * d;
            }
        }
        acc
    }

    pub fn coefficient_sum(&self) -> Q {
        self.coeffs.values().fold(Q::zero(), |a, c| a + c)
    }
}

impl<K: Kind> AddAssign<&Sparse<K>> for Sparse<K> {
    fn add_assign(&mut self, o: &Sparse<K>) {
        if o.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = o.clone();
            return;
        }
        assert_eq!(self.degree, o.degree, "adding {}s of different degree", K::NAME);
        for (s, c) in &o.coeffs {
            self.add_term(s.clone(), c);
        }
    }
}

impl<K: Kind> SubAssign<&Sparse<K>> for Sparse<K> {
    fn sub_assign(&mut self, o: &Sparse<K>) {
        *self += &(-o);
    }
}

impl<K: Kind> Add for &Sparse<K> {
    type Output = Sparse<K>;
    fn add(self, o: &Sparse<K>) -> Sparse<K> {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl<K: Kind> Sub for &Sparse<K> {
    type Output = Sparse<K>;
    fn sub(self, o: &Sparse<K>) -> Sparse<K> {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl<K: Kind> Neg for &Sparse<K> {
    type Output = Sparse<K>;
    fn neg(self) -> Sparse<K> {
        self.scale(&-Q::one())
    }
}

impl<K: Kind> Add for Sparse<K> {
    type Output = Sparse<K>;
    fn add(mut self, o: Sparse<K>) -> Sparse<K> {
        self += &o;
        self
    }
}

impl<K: Kind> Sub for Sparse<K> {
    type Output = Sparse<K>;
    fn sub(mut self, o: Sparse<K>) -> Sparse<K> {
        self -= &o;
        self
    }
}

impl<K: Kind> Neg for Sparse<K> {
    type Output = Sparse<K>;
    fn neg(self) -> Sparse<K> {
        -&self
    }
}

impl Chain {
    /// Simplicial boundary.
    pub fn boundary(&self) -> Result<Chain> {
        if self.degree == 0 {
            return Err(Error::DegreeZeroBoundary);
        }
        Ok(self.boundary_unchecked())
    }

    pub(crate) fn boundary_unchecked(&self) -> Chain {
        let mut out = Chain::new(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (s, c) in &self.coeffs {
            for i in 0..s.len() {
                out.add_term(without(s, i), &(c * parity(i)));
            }
        }
        out
    }
}

impl Cochain {
    /// Simplicial coboundary on `k`; adjoint of [`Chain::boundary`].
    pub fn coboundary(&self, k: &SimplicialComplex) -> Cochain {
        let mut out = Cochain::new(self.degree + 1);
        for (s, c) in &self.coeffs {
            for &v in k.extensions(s) {
                let (t, pos) = with_vertex(s, v);
                out.add_term(t, &(c * parity(pos)));
            }
        }
        out
    }

    pub fn eval(&self, c: &Chain) -> Q {
        self.dot(c)
    }
}

/// Alexander–Whitney cup product on the global vertex order.
pub fn cup(k: &SimplicialComplex, a: &Cochain, b: &Cochain) -> Cochain {
    let (p, r) = (a.degree(), b.degree());
    let mut out = Cochain::new(p + r);
    let mut by_first: HashMap<usize, Vec<(&Simplex, &Q)>> = HashMap::new();
    for (s, c) in b.iter() {
        by_first.entry(s[0]).or_default().push((s, c));
    }
    for (s, c) in a.iter() {
        let last = s[p];
        if let Some(list) = by_first.get(&last) {
            for (t, d) in list {
                let mut u = s.clone();
                u.extend_from_slice(&t[1..]);
                if u.windows(2).all(|w| w[0] < w[1]) && k.contains(&u) {
                    out.add_term(u, &(c * *d));
                }
            }
        }
    }
    out
}

/// Cap product `c ⌢ ω = Σ_T c_T ω(T[0..=r]) T[r..]`, so that
/// `⟨α, c ⌢ ω⟩ = ⟨ω ⌣ α, c⟩`.
pub fn cap(c: &Chain, w: &Cochain) -> Chain {
    let r = w.degree();
    let d = c.degree();
    let mut out = Chain::new(d.saturating_sub(r));
    if r > d {
        return out;
    }
    for (t, x) in c.iter() {
        let wv = w.get(&t[..=r]);
        if !wv.is_zero() {
            out.add_term(t[r..].to_vec(), &(x * wv));
        }
    }
    out
}

/// Cap product on the back face, `Σ_T c_T ω(T[d−r..]) T[..=d−r]`, so that
/// `⟨α ⌣ ω, c⟩ = ⟨α, cap_back(c, ω)⟩`.
pub fn cap_back(c: &Chain, w: &Cochain) -> Chain {
    let r = w.degree();
    let d = c.degree();
    let mut out = Chain::new(d.saturating_sub(r));
    if r > d {
        return out;
    }
    for (t, x) in c.iter() {
        let wv = w.get(&t[d - r..]);
        if !wv.is_zero() {
            out.add_term(t[..=d - r].to_vec(), &(x * wv));
        }
    }
    out
}

/// A finite simplicial complex with a fixed global vertex order.
#[derive(Clone)]
pub struct SimplicialComplex {
    n: usize,
    names: Vec<String>,
    simplices: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
    ext: HashMap<Simplex, Vec<usize>>,
    orientation: BTreeMap<Simplex, i64>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<usize> = self.simplices.iter().map(|s| s.len()).collect();
        write!(f, "SimplicialComplex(n={}, f={:?})", self.n, counts)
    }
}

impl SimplicialComplex {
    /// Closes `facets` under faces. Vertices are `0..names.len()`.
    pub fn from_facets(names: Vec<String>, facets: &[Simplex]) -> Result<Self> {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("repeated vertex in {f:?}")));
            }
            if let Some(&v) = f.iter().find(|&&v| v >= names.len()) {
                return Err(Error::InvalidComplex(format!("unknown vertex {v}")));
            }
            let m = f.len();
            for mask in 1u64..(1u64 << m) {
                let sub: Simplex = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                all.insert(sub);
            }
        }
        for v in 0..names.len() {
            all.insert(vec![v]);
        }
        Self::from_closed_set(names, all)
    }

    fn from_closed_set(names: Vec<String>, all: BTreeSet<Simplex>) -> Result<Self> {
        let n = all.iter().map(|s| s.len()).max().unwrap_or(1) - 1;
        let mut simplices = vec![Vec::new(); n + 1];
        for s in all {
            simplices[s.len() - 1].push(s);
        }
        for level in simplices.iter_mut() {
            level.sort();
        }
        let mut index = HashMap::new();
        for level in &simplices {
            for (i, s) in level.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        let mut ext: HashMap<Simplex, Vec<usize>> = HashMap::new();
        for level in simplices.iter().skip(1) {
            for t in level {
                for i in 0..t.len() {
                    ext.entry(without(t, i)).or_default().push(t[i]);
                }
            }
        }
        for list in ext.values_mut() {
            list.sort_unstable();
        }
        Ok(SimplicialComplex { n, names, simplices, index, ext, orientation: BTreeMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(|l| l.len()).collect()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index.contains_key(s)
    }

    /// Position of `s` in the sorted list of simplices of its dimension.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Vertices `v ∉ s` with `s ∪ {v}` in the complex.
    pub fn extensions(&self, s: &[usize]) -> &[usize] {
        self.ext.get(s).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// `τ` lies in the closed star of `σ`.
    pub fn in_closed_star(&self, sigma: &[usize], tau: &[usize]) -> bool {
        self.contains(&union(sigma, tau))
    }

    /// All simplices containing `σ` (the open star), including `σ`.
    pub fn cofaces(&self, sigma: &[usize]) -> Vec<Simplex> {
        let mut seen: BTreeSet<Simplex> = BTreeSet::new();
        let mut queue = VecDeque::from([sigma.to_vec()]);
        seen.insert(sigma.to_vec());
        while let Some(s) = queue.pop_front() {
            for &v in self.extensions(&s) {
                let (t, _) = with_vertex(&s, v);
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All simplices of the closed star of `σ`.
    pub fn closed_star(&self, sigma: &[usize]) -> Vec<Simplex> {
        let mut seen: BTreeSet<Simplex> = BTreeSet::new();
        for t in self.cofaces(sigma) {
            if t.len() == self.n + 1 || self.extensions(&t).is_empty() {
                let m = t.len();
                for mask in 1u64..(1u64 << m) {
                    seen.insert((0..m).filter(|i| mask >> i & 1 == 1).map(|i| t[i]).collect());
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn orientation(&self) -> &BTreeMap<Simplex, i64> {
        &self.orientation
    }

    pub fn is_oriented(&self) -> bool {
        !self.orientation.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.num_vertices();
        if nv == 0 {
            return false;
        }
        let mut seen = vec![false; nv];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in self.extensions(&[v]) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Pure, every codimension-one face has exactly two cofacets, connected.
    pub fn check_pseudomanifold(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidComplex("dimension 0".into()));
        }
        for d in 0..n {
            for s in &self.simplices[d] {
                if self.extensions(s).is_empty() {
                    return Err(Error::InvalidComplex(format!("not pure at {s:?}")));
                }
            }
        }
        for s in &self.simplices[n - 1] {
            if self.extensions(s).len() != 2 {
                return Err(Error::InvalidComplex(format!(
                    "face {s:?} has {} cofacets",
                    self.extensions(s).len()
                )));
            }
        }
        if !self.is_connected() {
            return Err(Error::InvalidComplex("not connected".into()));
        }
        Ok(())
    }

    /// Computes a coherent orientation, fixing the first top simplex as +1.
    pub fn orient(&mut self) -> Result<()> {
        self.check_pseudomanifold()?;
        let n = self.n;
        let tops = &self.simplices[n];
        let mut orient: BTreeMap<Simplex, i64> = BTreeMap::new();
        orient.insert(tops[0].clone(), 1);
        let mut queue = VecDeque::from([tops[0].clone()]);
        while let Some(t) = queue.pop_front() {
            let o = orient[&t];
            for i in 0..t.len() {
                let face = without(&t, i);
                let induced = o * parity_i(i);
                for &v in self.extensions(&face) {
                    let (u, pos) = with_vertex(&face, v);
                    if u == t {
                        continue;
                    }
                    let want = -induced * parity_i(pos);
                    match orient.get(&u) {
                        Some(&have) if have != want => {
                            return Err(Error::Orientation("complex is not orientable".into()))
                        }
                        Some(_) => {}
                        None => {
                            orient.insert(u.clone(), want);
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
        self.orientation = orient;
        Ok(())
    }

    /// Installs a given orientation after checking it is coherent.
    pub fn set_orientation(&mut self, orientation: BTreeMap<Simplex, i64>) -> Result<()> {
        self.check_pseudomanifold()?;
        let tops = &self.simplices[self.n];
        if orientation.len() != tops.len()
            || tops.iter().any(|t| !matches!(orientation.get(t), Some(1) | Some(-1)))
        {
            return Err(Error::Orientation("orientation must give ±1 on every top simplex".into()));
        }
        let cycle = Chain::from_terms(
            self.n,
            orientation.iter().map(|(s, &o)| (s.clone(), Q::from_integer(o.into()))),
        );
        if !cycle.boundary_unchecked().is_zero() {
            return Err(Error::Orientation("oriented top simplices have nonzero boundary".into()));
        }
        self.orientation = orientation;
        Ok(())
    }

    pub fn fundamental_cycle(&self) -> Result<Chain> {
        if self.orientation.is_empty() {
            return Err(Error::Orientation("complex carries no orientation".into()));
        }
        Ok(Chain::from_terms(
            self.n,
            self.orientation.iter().map(|(s, &o)| (s.clone(), Q::from_integer(o.into()))),
        ))
    }

    /// Relabels vertices by `perm` (old index → new index) and re-sorts.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let mut names = vec![String::new(); self.names.len()];
        for (old, &new) in perm.iter().enumerate() {
            names[new] = self.names[old].clone();
        }
        let facets: Vec<Simplex> = self.simplices[self.n]
            .iter()
            .map(|s| s.iter().map(|&v| perm[v]).collect())
            .collect();
        Self::from_facets(names, &facets)
    }
}

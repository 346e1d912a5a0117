//! Seeded generators of random fields, currents, dual objects, cycles and
//! transformations. Every generator is deterministic in the seed.

use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Chain, Cochain, Kind, Simplex, SimplicialComplex, Sparse};
use crate::cover::{restrict, ChainLayer, CochainLayer, Layer, Support};
use crate::currents::{
    bump, canonical_current_of_cycle, current_from_field, dual_current_from_cycle, mu_map, unit_dual_field,
    CurrentTransformation, DualCurrentTransformation, DualGaugeCurrent, DualGaugeField, DualTransformation,
    GaugeCurrent,
};
use crate::cycles::{decompose_cycle, Assignment};
use crate::db::db_cap;
use crate::error::Result;
use crate::gauge::{
    field_from_curvature, field_from_flat_class, field_from_form, torsion_flat_cochains, FlatClassRep, GaugeField,
    GaugeTransformation,
};
use crate::manifold::Manifold;
use crate::rmodz::{q, qr, Q};

/// How many local pieces a random layer receives.
const PIECES: usize = 4;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Numerator in −6..=6, denominator in 1..=6.
    pub fn small_q(&mut self) -> Q {
        qr(self.rng.gen_range(-6..=6), self.rng.gen_range(1..=6))
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> Option<&'a T> {
        xs.choose(&mut self.rng)
    }

    fn sparse<K: Kind>(&mut self, pool: &[Simplex], degree: usize, terms: usize, integral: bool) -> Sparse<K> {
        let mut out = Sparse::new(degree);
        for _ in 0..terms {
            if let Some(s) = self.pick(pool) {
                let c = if integral { q(self.small_int(-3, 3)) } else { self.small_q() };
                out.add_term(s.clone(), &c);
            }
        }
        out
    }

    /// A random rational cochain on a few simplices of the given degree.
    pub fn cochain(&mut self, k: &SimplicialComplex, degree: usize, terms: usize) -> Cochain {
        if degree > k.dim() {
            return Cochain::new(degree);
        }
        self.sparse(k.simplices(degree), degree, terms, false)
    }

    pub fn int_cochain(&mut self, k: &SimplicialComplex, degree: usize, terms: usize) -> Cochain {
        if degree > k.dim() {
            return Cochain::new(degree);
        }
        self.sparse(k.simplices(degree), degree, terms, true)
    }

    pub fn int_chain(&mut self, k: &SimplicialComplex, degree: usize, terms: usize) -> Chain {
        if degree > k.dim() {
            return Chain::new(degree);
        }
        self.sparse(k.simplices(degree), degree, terms, true)
    }

    /// A layer with a few nonzero entries, each a random combination of
    /// simplices of the right dimension in the entry's region.
    fn layer<K: Kind>(&mut self, k: &SimplicialComplex, cech: usize, degree: usize, s: Support) -> Layer<K> {
        let mut out = Layer::new(cech, degree);
        if cech > k.dim() {
            return out;
        }
        for _ in 0..PIECES {
            let Some(sigma) = self.pick(k.simplices(cech)).cloned() else { break };
            let region = match s {
                Support::Closed => k.closed_star(&sigma),
                Support::Open => k.cofaces(&sigma),
            };
            let pool: Vec<Simplex> = region.into_iter().filter(|t| t.len() == degree + 1).collect();
            let x: Sparse<K> = self.sparse(&pool, degree, 2, false);
            out.add_to(sigma, &x);
        }
        out
    }
}

/// An integer combination of homology generators plus a random boundary.
pub fn random_cycle(m: &Manifold, p: usize, g: &mut Gen) -> Chain {
    let mut z = Chain::new(p);
    for gen in m.homology(p).generators() {
        z += &gen.scale(&q(g.small_int(-2, 2)));
    }
    if p < m.dim() {
        let c = g.int_chain(m, p + 1, 2);
        z += &c.boundary_unchecked();
    }
    z
}

pub fn random_transformation(m: &Manifold, p: usize, g: &mut Gen) -> GaugeTransformation {
    let mut t = GaugeTransformation::zero(p);
    for i in 0..p {
        t.generators[i] = g.layer(m, i, p - 1 - i, Support::Closed);
    }
    t.g = g.int_cochain(m, p, 2);
    t
}

/// Sum of a global form, a field with random integral curvature, free and
/// torsion flat parts, and a random gauge transformation.
pub fn random_field(m: &Manifold, p: usize, g: &mut Gen) -> Result<GaugeField> {
    let n = m.dim();
    let mut a = field_from_form(m, &g.cochain(m, p, 3));
    if p < n {
        let mut f = g.cochain(m, p, 2).coboundary(m);
        for w in &m.cohomology(p + 1).free {
            f += &w.scale(&q(g.small_int(-2, 2)));
        }
        a = &a + &field_from_curvature(m, &f, p)?;
    }
    let mut r = Cochain::new(p);
    for w in &m.cohomology(p).free {
        r += &FlatClassRep::from_cocycle(&w.scale(&g.small_q())).r;
    }
    for (v, d) in torsion_flat_cochains(m, p) {
        r += &v.scale(&qr(g.small_int(0, d as i64 - 1), d as i64));
    }
    r += &g.int_cochain(m, p, 2);
    a = &a + &field_from_flat_class(m, &FlatClassRep { p, r })?;
    Ok(&a + &random_transformation(m, p, g).field(m))
}

pub fn random_current_transformation(m: &Manifold, q_deg: i64, g: &mut Gen) -> Result<CurrentTransformation> {
    let mut t = CurrentTransformation::zero(m.dim(), q_deg)?;
    for i in 0..t.generators.len() {
        t.generators[i] = g.layer(m, i, (q_deg + 2) as usize + i, Support::Open);
    }
    t.g = g.int_cochain(m, t.generators.len(), 2);
    Ok(t)
}

/// Current of a random field, plus the canonical current of a random cycle,
/// a classical current and a random current transformation.
pub fn random_current(m: &Manifold, q_deg: i64, g: &mut Gen) -> Result<GaugeCurrent> {
    let n = m.dim();
    let p = (n as i64 - q_deg - 1) as usize;
    let mut c = current_from_field(m, &random_field(m, p, g)?)?;
    if q_deg >= 0 && (q_deg as usize) < n {
        let z = random_cycle(m, q_deg as usize, g);
        c = &c + &canonical_current_of_cycle(m, &z)?;
    }
    let chi = g.cochain(m, (q_deg + 1) as usize, 3);
    let chi: Chain = chi.transpose();
    let mut classical: ChainLayer = Layer::new(0, (q_deg + 1) as usize);
    for v in 0..m.num_vertices() {
        classical.set(vec![v], restrict(m, &[v], &chi, Support::Open));
    }
    c.layers[0] = &c.layers[0] + &classical;
    Ok(&c + &random_current_transformation(m, q_deg, g)?.current(m))
}

/// Generators with `i_n G_{p+1}` integral: the last layer gets a bump
/// correction on each entry.
pub fn random_dual_transformation(m: &Manifold, q_deg: i64, g: &mut Gen) -> DualTransformation {
    let n = m.dim();
    let p = (n as i64 - q_deg - 1) as usize;
    let mut gens: Vec<CochainLayer> = (1..=p + 1)
        .map(|i| {
            let degree = (q_deg + i as i64) as usize;
            g.layer(m, i, degree, Support::Open)
        })
        .collect();
    let last = &gens[p];
    let mut fixed = last.clone();
    for (sigma, x) in last.iter() {
        let v = x.iter().fold(Q::zero(), |a, (t, c)| a + c * Q::from_integer(m.orientation()[t].into()));
        let target = q(g.small_int(-2, 2));
        fixed.add_to(sigma.clone(), &bump(m, sigma).scale(&(target - v)));
    }
    gens[p] = fixed;
    DualTransformation { q: q_deg, generators: gens }
}

/// `A ⌢ μ` for a random field (integer multiples of the unit in degree −1)
/// plus a random dual transformation.
pub fn random_dual_field(m: &Manifold, q_deg: i64, g: &mut Gen) -> Result<DualGaugeField> {
    let base = if q_deg < 0 {
        unit_dual_field(m).scale(&q(g.small_int(-2, 2)))
    } else {
        db_cap(m, &random_field(m, q_deg as usize, g)?, m.partition())?
    };
    Ok(&base + &random_dual_transformation(m, q_deg, g).field(m))
}

/// Generators with `b_0 G_(p+1)` integral.
pub fn random_dual_current_transformation(m: &Manifold, p: usize, g: &mut Gen) -> DualCurrentTransformation {
    let mut gens: Vec<ChainLayer> = (1..=p + 1).map(|i| g.layer(m, i, p + 1 - i, Support::Closed)).collect();
    let last = gens[p].clone();
    for (sigma, x) in last.iter() {
        let v = x.coefficient_sum();
        let target = q(g.small_int(-2, 2));
        gens[p].add_term(sigma, vec![sigma[0]], &(target - v));
    }
    DualCurrentTransformation { p, generators: gens }
}

/// The dual current of a random cycle plus `μ`-images of a random current
/// and a random dual transformation.
pub fn random_dual_current(m: &Manifold, p: usize, g: &mut Gen) -> Result<DualGaugeCurrent> {
    let z = random_cycle(m, p, g);
    let rule = if g.coin() { Assignment::MinVertex } else { Assignment::MaxVertex };
    let mut c = dual_current_from_cycle(&decompose_cycle(m, &z, rule)?);
    if p < m.dim() {
        c = &c + &mu_map(m, &random_current(m, p as i64, g)?, m.partition())?;
    }
    Ok(&c + &random_dual_current_transformation(m, p, g).current())
}

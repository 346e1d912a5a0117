//! Integral homology and cohomology with explicit representatives.

use num::{BigInt, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{parity_i, without, Chain, Cochain, Kind, SimplicialComplex, Sparse};
use crate::linalg::{smith, IntMatrix};
use crate::rmodz::Q;

/// Rank plus torsion coefficients, each at least 2 and dividing the next.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupPresentation {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// Boundary matrix of `C_p → C_{p-1}`; rows index (p−1)-simplices.
pub fn boundary_matrix(k: &SimplicialComplex, p: usize) -> IntMatrix {
    let cols = k.simplices(p).len();
    if p == 0 {
        return IntMatrix::zeros(0, cols);
    }
    let mut m = IntMatrix::zeros(k.simplices(p - 1).len(), cols);
    for (j, s) in k.simplices(p).iter().enumerate() {
        for i in 0..s.len() {
            let row = k.index_of(&without(s, i)).expect("face-closed complex");
            m.data[row][j] = BigInt::from(parity_i(i));
        }
    }
    m
}

/// Coboundary matrix of `C^p → C^{p+1}`.
pub fn coboundary_matrix(k: &SimplicialComplex, p: usize) -> IntMatrix {
    if p >= k.dim() {
        return IntMatrix::zeros(0, k.simplices(p).len());
    }
    boundary_matrix(k, p + 1).transpose()
}

/// Coordinates of a class: free part in ℤ, torsion part reduced mod its order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCoords {
    pub free: Vec<Q>,
    pub torsion: Vec<Q>,
}

impl ClassCoords {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(|x| x.is_zero())
    }
}

/// `ker A / im B` for integer maps `B: ℤ^s → ℤ^m`, `A: ℤ^m → ℤ^t` with `AB = 0`.
#[derive(Clone, Debug)]
struct Quotient {
    proj: IntMatrix,
    p: IntMatrix,
    factors: Vec<BigInt>,
    gens: Vec<Vec<BigInt>>,
}

impl Quotient {
    fn new(a: &IntMatrix, b: &IntMatrix) -> Quotient {
        let m = a.cols;
        let sa = smith(a);
        let proj = sa.q_inv.rows_from(sa.rank);
        let z = proj.rows;
        // Image of B in kernel coordinates.
        let x = proj.mul(b);
        let sx = smith(&x);
        let mut factors = vec![BigInt::zero(); z];
        for (i, d) in sx.diag.iter().enumerate() {
            factors[i] = d.clone();
        }
        // Kernel basis columns are the trailing columns of Q_A.
        let kernel: Vec<Vec<BigInt>> = (sa.rank..m).map(|j| sa.q.column(j)).collect();
        let gens = (0..z)
            .map(|i| {
                let coeff = sx.p_inv.column(i);
                let mut v = vec![BigInt::zero(); m];
                for (c, col) in coeff.iter().zip(&kernel) {
                    if c.is_zero() {
                        continue;
                    }
                    for (acc, e) in v.iter_mut().zip(col) {
                        *acc += c * e;
                    }
                }
                v
            })
            .collect();
        Quotient { proj, p: sx.p, factors, gens }
    }

    fn torsion_idx(&self) -> Vec<usize> {
        (0..self.factors.len()).filter(|&i| self.factors[i] > BigInt::one()).collect()
    }

    fn free_idx(&self) -> Vec<usize> {
        (0..self.factors.len()).filter(|&i| self.factors[i].is_zero()).collect()
    }

    fn coords(&self, x: &[Q]) -> ClassCoords {
        let y = self.proj.mul_qvec(x);
        let c = self.p.mul_qvec(&y);
        let free = self.free_idx().into_iter().map(|i| c[i].clone()).collect();
        let torsion = self
            .torsion_idx()
            .into_iter()
            .map(|i| {
                let d = Q::from_integer(self.factors[i].clone());
                let v = &c[i];
                v - (v / &d).floor() * &d
            })
            .collect();
        ClassCoords { free, torsion }
    }

    fn presentation(&self) -> AbelianGroupPresentation {
        AbelianGroupPresentation {
            rank: self.free_idx().len(),
            torsion: self.torsion_idx().iter().map(|&i| self.factors[i].to_u64().unwrap()).collect(),
        }
    }
}

pub fn to_vector<K: Kind>(k: &SimplicialComplex, c: &Sparse<K>) -> Vec<Q> {
    let mut v = vec![Q::zero(); k.simplices(c.degree()).len()];
    for (s, x) in c.iter() {
        v[k.index_of(s).expect("simplex of the complex")] = x.clone();
    }
    v
}

pub fn from_qvector<K: Kind>(k: &SimplicialComplex, degree: usize, v: &[Q]) -> Sparse<K> {
    Sparse::from_terms(degree, k.simplices(degree).iter().zip(v).map(|(s, x)| (s.clone(), x.clone())))
}

fn from_vector<K: Kind>(k: &SimplicialComplex, degree: usize, v: &[BigInt]) -> Sparse<K> {
    Sparse::from_terms(
        degree,
        k.simplices(degree).iter().zip(v).map(|(s, x)| (s.clone(), Q::from_integer(x.clone()))),
    )
}

/// A (co)homology group of one degree, with representatives and coordinates.
#[derive(Clone, Debug)]
pub struct GroupData<K: Kind> {
    pub degree: usize,
    pub presentation: AbelianGroupPresentation,
    /// Representatives of free generators.
    pub free: Vec<Sparse<K>>,
    /// Representatives of torsion generators with their orders.
    pub torsion: Vec<(Sparse<K>, u64)>,
    quotient: Quotient,
    basis_len: usize,
}

pub type Homology = GroupData<crate::complex::ChainKind>;
pub type Cohomology = GroupData<crate::complex::CochainKind>;

impl<K: Kind> GroupData<K> {
    fn build(k: &SimplicialComplex, degree: usize, a: IntMatrix, b: IntMatrix) -> Self {
        let quotient = Quotient::new(&a, &b);
        let free = quotient.free_idx().iter().map(|&i| from_vector(k, degree, &quotient.gens[i])).collect();
        let torsion = quotient
            .torsion_idx()
            .iter()
            .map(|&i| (from_vector(k, degree, &quotient.gens[i]), quotient.factors[i].to_u64().unwrap()))
            .collect();
        GroupData {
            degree,
            presentation: quotient.presentation(),
            free,
            torsion,
            quotient,
            basis_len: a.cols,
        }
    }

    /// Coordinates of the class of a (rational) cycle or cocycle.
    pub fn coordinates(&self, k: &SimplicialComplex, c: &Sparse<K>) -> ClassCoords {
        if c.is_zero() {
            return self.quotient.coords(&vec![Q::zero(); self.basis_len]);
        }
        assert_eq!(c.degree(), self.degree);
        self.quotient.coords(&to_vector(k, c))
    }

    /// All generator representatives, free ones first.
    pub fn generators(&self) -> Vec<Sparse<K>> {
        self.free.iter().cloned().chain(self.torsion.iter().map(|(g, _)| g.clone())).collect()
    }
}

pub fn homology(k: &SimplicialComplex, p: usize) -> Homology {
    let a = boundary_matrix(k, p);
    let b = if p < k.dim() { boundary_matrix(k, p + 1) } else { IntMatrix::zeros(k.simplices(p).len(), 0) };
    GroupData::build(k, p, a, b)
}

pub fn cohomology(k: &SimplicialComplex, p: usize) -> Cohomology {
    let a = coboundary_matrix(k, p);
    let b = if p > 0 { coboundary_matrix(k, p - 1) } else { IntMatrix::zeros(k.simplices(0).len(), 0) };
    GroupData::build(k, p, a, b)
}

pub fn betti_numbers(k: &SimplicialComplex) -> Vec<usize> {
    (0..=k.dim()).map(|p| homology(k, p).presentation.rank).collect()
}

/// `dω = 0` and `⟨ω, z⟩ ∈ ℤ` on every homology generator, free and torsion.
pub fn is_integral_periods(k: &SimplicialComplex, w: &Cochain) -> bool {
    if !w.coboundary(k).is_zero() {
        return false;
    }
    let h = homology(k, w.degree());
    h.generators().iter().all(|z| w.eval(z).is_integer())
}

/// `true` iff the integer cycle `z` bounds over ℤ.
pub fn is_boundary(k: &SimplicialComplex, z: &Chain) -> bool {
    if z.is_zero() {
        return true;
    }
    homology(k, z.degree()).coordinates(k, z).is_zero()
}

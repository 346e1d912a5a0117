//! A manifold-flagged complex together with lazily computed invariants.

use std::collections::HashMap;
use std::ops::Deref;
use std::sync::OnceLock;

use crate::builtins;
use crate::complex::{Chain, Simplex, SimplicialComplex};
use crate::cycles::{decompose_cycle, Assignment, CycleDecomposition};
use crate::cover::{partition_layers, PartitionLayers};
use crate::error::{Error, Result};
use crate::homology::{boundary_matrix, coboundary_matrix, cohomology, homology, Cohomology, Homology};
use crate::linalg::{smith, Snf};

/// An oriented closed pseudomanifold with cached homology, Smith forms and
/// partition layers. Caches fill on first use and are safe to share.
pub struct Manifold {
    k: SimplicialComplex,
    homology: Vec<OnceLock<Homology>>,
    cohomology: Vec<OnceLock<Cohomology>>,
    coboundary_snf: Vec<OnceLock<Snf>>,
    boundary_snf: Vec<OnceLock<Snf>>,
    stars: OnceLock<HashMap<Simplex, Vec<usize>>>,
    partition: OnceLock<PartitionLayers>,
    fundamental_decomposition: OnceLock<CycleDecomposition>,
}

impl Deref for Manifold {
    type Target = SimplicialComplex;
    fn deref(&self) -> &SimplicialComplex {
        &self.k
    }
}

impl std::fmt::Debug for Manifold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Manifold({:?})", self.k)
    }
}

fn cells<T>(m: usize) -> Vec<OnceLock<T>> {
    (0..m).map(|_| OnceLock::new()).collect()
}

impl Manifold {
    pub fn new(k: SimplicialComplex) -> Result<Self> {
        k.check_pseudomanifold()?;
        if !k.is_oriented() {
            return Err(Error::Orientation("complex carries no orientation".into()));
        }
        let n = k.dim();
        Ok(Manifold {
            homology: cells(n + 1),
            cohomology: cells(n + 2),
            coboundary_snf: cells(n + 1),
            boundary_snf: cells(n + 2),
            stars: OnceLock::new(),
            partition: OnceLock::new(),
            fundamental_decomposition: OnceLock::new(),
            k,
        })
    }

    pub fn builtin(name: &str) -> Result<Self> {
        Self::new(builtins::builtin_complex(name)?)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.k
    }

    pub fn homology(&self, p: usize) -> &Homology {
        self.homology[p].get_or_init(|| homology(&self.k, p))
    }

    pub fn cohomology(&self, p: usize) -> &Cohomology {
        self.cohomology[p].get_or_init(|| cohomology(&self.k, p))
    }

    /// Smith form of the coboundary `C^p → C^{p+1}`.
    pub fn coboundary_snf(&self, p: usize) -> &Snf {
        self.coboundary_snf[p].get_or_init(|| smith(&coboundary_matrix(&self.k, p)))
    }

    /// Smith form of the boundary `C_p → C_{p-1}`; trivial beyond the top.
    pub fn boundary_snf(&self, p: usize) -> &Snf {
        self.boundary_snf[p].get_or_init(|| {
            if p > self.k.dim() {
                smith(&crate::linalg::IntMatrix::zeros(self.k.simplices(p - 1).len(), 0))
            } else {
                smith(&boundary_matrix(&self.k, p))
            }
        })
    }

    /// Vertices of the closed star of `σ`.
    pub fn star_vertices(&self, sigma: &[usize]) -> &[usize] {
        let stars = self.stars.get_or_init(|| {
            self.k
                .all_simplices()
                .map(|s| (s.clone(), crate::cover::star_vertices(&self.k, s)))
                .collect()
        });
        stars.get(sigma).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn partition(&self) -> &PartitionLayers {
        self.partition.get_or_init(|| partition_layers(&self.k).expect("partition layers on an oriented manifold"))
    }

    pub fn fundamental(&self) -> Chain {
        self.k.fundamental_cycle().expect("oriented")
    }

    /// Min-vertex decomposition of the fundamental cycle.
    pub fn fundamental_decomposition(&self) -> &CycleDecomposition {
        self.fundamental_decomposition.get_or_init(|| {
            decompose_cycle(&self.k, &self.fundamental(), Assignment::MinVertex).expect("fundamental cycle decomposes")
        })
    }
}

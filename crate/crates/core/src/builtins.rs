//! Builtin oriented closed manifolds.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn oriented(names: Vec<String>, facets: &[Simplex]) -> Result<SimplicialComplex> {
    let mut k = SimplicialComplex::from_facets(names, facets)?;
    k.orient()?;
    Ok(k)
}

pub fn circle(k: usize) -> Result<SimplicialComplex> {
    if k < 3 {
        return Err(Error::UnknownManifold(format!("circle:{k} needs at least 3 vertices")));
    }
    let facets: Vec<Simplex> = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    oriented(names(k), &facets)
}

/// Boundary of the (n+1)-simplex.
pub fn sphere(n: usize) -> Result<SimplicialComplex> {
    if n == 0 {
        return Err(Error::UnknownManifold("sphere:0 is not connected".into()));
    }
    let facets: Vec<Simplex> =
        (0..n + 2).map(|skip| (0..n + 2).filter(|&v| v != skip).collect()).collect();
    oriented(names(n + 2), &facets)
}

/// Seven-vertex torus.
pub fn torus2() -> Result<SimplicialComplex> {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    oriented(names(7), &facets)
}

/// Staircase triangulation of the product of three 3-vertex circles.
pub fn torus3() -> Result<SimplicialComplex> {
    let id = |c: [usize; 3]| 9 * (c[0] % 3) + 3 * (c[1] % 3) + c[2] % 3;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut facets = Vec::new();
    for base in 0..27 {
        let start = [base / 9, (base / 3) % 3, base % 3];
        for perm in &perms {
            let mut c = start;
            let mut f = vec![id(c)];
            for &axis in perm {
                c[axis] += 1;
                f.push(id(c));
            }
            facets.push(f);
        }
    }
    oriented(names(27), &facets)
}

/// The lens space L(k,1).
///
/// Built from the join of two 2k-gons (a genus-one Heegaard splitting of the
/// 3-sphere) divided by the free ℤ_k action rotating both polygons by two
/// steps. The quotient is a regular Δ-complex; its barycentric subdivision is
/// simplicial and is then shrunk by edge contractions satisfying the link
/// condition.
pub fn lens(k: usize) -> Result<SimplicialComplex> {
    if k < 2 {
        return Err(Error::UnknownManifold(format!("lens:{k} needs k >= 2")));
    }
    let m = 2 * k;
    // Vertices a_i = i, b_j = m + j.
    let polygon_cells = |offset: usize| {
        let mut cells: Vec<Vec<usize>> = vec![vec![]];
        for i in 0..m {
            cells.push(vec![offset + i]);
            let (x, y) = (offset + i, offset + (i + 1) % m);
            cells.push(vec![x.min(y), x.max(y)]);
        }
        cells
    };
    let mut sphere_cells: Vec<Simplex> = Vec::new();
    for e in polygon_cells(0) {
        for f in polygon_cells(m) {
            let mut s = e.clone();
            s.extend(&f);
            if !s.is_empty() {
                sphere_cells.push(s);
            }
        }
    }
    let act = |v: usize| if v < m { (v + 2) % m } else { m + (v - m + 2) % m };
    let canon = |s: &Simplex| -> Simplex {
        let mut best = s.clone();
        let mut cur = s.clone();
        for _ in 1..k {
            cur = cur.iter().map(|&v| act(v)).collect();
            cur.sort_unstable();
            if cur < best {
                best = cur.clone();
            }
        }
        best
    };
    let mut orbit_id: BTreeMap<Simplex, usize> = BTreeMap::new();
    for s in &sphere_cells {
        let c = canon(s);
        let next = orbit_id.len();
        orbit_id.entry(c).or_insert(next);
    }
    let cells: Vec<Simplex> = {
        let mut v: Vec<(usize, Simplex)> = orbit_id.iter().map(|(s, &i)| (i, s.clone())).collect();
        v.sort();
        v.into_iter().map(|(_, s)| s).collect()
    };
    // Maximal flags vertex < edge < triangle < tetrahedron.
    let mut flags: Vec<Simplex> = Vec::new();
    for (t, tet) in cells.iter().enumerate().filter(|(_, c)| c.len() == 4) {
        extend_flags(tet, &mut vec![t], &mut flags, &|f: &Simplex| orbit_id[&canon(f)]);
    }
    let facets = simplify(flags, 3);
    let used: BTreeSet<usize> = facets.iter().flatten().copied().collect();
    let relabel: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let facets: Vec<Simplex> = facets
        .iter()
        .map(|f| f.iter().map(|v| relabel[v]).collect())
        .collect();
    oriented(names(used.len()), &facets)
}

fn extend_flags<F: Fn(&Simplex) -> usize>(
    cell: &Simplex,
    chain: &mut Vec<usize>,
    out: &mut Vec<Simplex>,
    orbit: &F,
) {
    if cell.len() == 1 {
        let mut f = chain.clone();
        f.sort_unstable();
        out.push(f);
        return;
    }
    for i in 0..cell.len() {
        let mut face = cell.clone();
        face.remove(i);
        chain.push(orbit(&face));
        extend_flags(&face, chain, out, orbit);
        chain.pop();
    }
}

fn all_faces(f: &Simplex) -> Vec<Simplex> {
    let len = f.len();
    (1u64..(1u64 << len))
        .map(|mask| (0..len).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect())
        .collect()
}

fn link(facets: &[Simplex], s: &Simplex) -> BTreeSet<Simplex> {
    let mut out = BTreeSet::new();
    for f in facets {
        if s.iter().all(|v| f.contains(v)) {
            let rest: Simplex = f.iter().copied().filter(|v| !s.contains(v)).collect();
            if !rest.is_empty() {
                out.extend(all_faces(&rest));
            }
        }
    }
    out
}

/// Greedy edge contractions that keep the PL type (link condition).
fn simplify(mut facets: Vec<Simplex>, n: usize) -> Vec<Simplex> {
    loop {
        let edges: BTreeSet<Simplex> = facets
            .iter()
            .flat_map(|f| all_faces(f).into_iter().filter(|e| e.len() == 2))
            .collect();
        let mut contracted = false;
        for e in edges {
            let (u, w) = (e[0], e[1]);
            let lu = link(&facets, &vec![u]);
            let lw = link(&facets, &vec![w]);
            let le = link(&facets, &e);
            let common: BTreeSet<Simplex> = lu.intersection(&lw).cloned().collect();
            if common != le {
                continue;
            }
            let mut next: Vec<Simplex> = Vec::new();
            for f in &facets {
                if f.contains(&u) && f.contains(&w) {
                    continue;
                }
                let mut g: Simplex = f.iter().map(|&v| if v == w { u } else { v }).collect();
                g.sort_unstable();
                next.push(g);
            }
            // The contraction must not collapse the complex below a manifold.
            if next.len() < n + 2 {
                continue;
            }
            facets = next;
            contracted = true;
            break;
        }
        if !contracted {
            facets.sort();
            return facets;
        }
    }
}

/// Parses `circle:3`, `sphere:2`, `torus2`, `torus3`, `lens:4` (also with
/// parentheses, e.g. `lens(4)`).
pub fn builtin_complex(name: &str) -> Result<SimplicialComplex> {
    let name = name.trim();
    let (base, arg) = match name.split_once([':', '(']) {
        Some((b, rest)) => {
            let rest = rest.trim_end_matches(')');
            let k: usize = rest
                .parse()
                .map_err(|_| Error::UnknownManifold(name.to_string()))?;
            (b, Some(k))
        }
        None => (name, None),
    };
    match (base, arg) {
        ("circle", a) => circle(a.unwrap_or(3)),
        ("sphere", a) => sphere(a.unwrap_or(2)),
        ("torus2", None) | ("torus", Some(2)) => torus2(),
        ("torus3", None) | ("torus", Some(3)) => torus3(),
        ("lens", a) => lens(a.unwrap_or(4)),
        _ => Err(Error::UnknownManifold(name.to_string())),
    }
}

/// The builtin manifolds exercised by the acceptance suites.
pub const STANDARD: [&str; 5] = ["circle:3", "sphere:2", "torus2", "torus3", "lens:4"];

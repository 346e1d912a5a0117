//! Oracles shared by the integration tests. Everything here is computed
//! from scratch on plain integer matrices, without the library's linear
//! algebra.

#![allow(dead_code)]

use dbcalc::complex::{parity, Chain, Cochain, SimplicialComplex};
use dbcalc::cover::mu_sign;
use dbcalc::manifold::Manifold;
use dbcalc::rmodz::{q, RmodZ, Q};

pub const MANIFOLDS: [&str; 5] = ["circle:3", "sphere:2", "torus2", "torus3", "lens:4"];

pub fn manifold(name: &str) -> Manifold {
    Manifold::builtin(name).expect("builtin manifold")
}

/// Dense boundary matrix `C_p → C_{p-1}` with rows indexed by faces.
pub fn boundary(k: &SimplicialComplex, p: usize) -> Vec<Vec<i128>> {
    let rows = k.simplices(p - 1);
    let cols = k.simplices(p);
    let mut m = vec![vec![0i128; cols.len()]; rows.len()];
    for (j, s) in cols.iter().enumerate() {
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            let r = rows.iter().position(|t| *t == f).expect("face present");
            m[r][j] += if i % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        for i in r + 1..rows {
            if m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in c..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Invariant factors different from 1 and 0, by repeated row and column
/// reduction with the smallest pivot.
pub fn torsion_factors(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.map_or(true, |(a, b)| m[i][j].abs() < m[a][b].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let f = m[i][t] / m[t][t];
            for j in t..cols {
                m[i][j] -= f * m[t][j];
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let f = m[t][j] / m[t][t];
            for i in t..rows {
                m[i][j] -= f * m[i][t];
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // The pivot must divide the rest; otherwise fold a row in and retry.
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % m[t][t] != 0)) {
            for j in t..cols {
                m[t][j] += m[i][j];
            }
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag.into_iter().filter(|&d| d > 1).collect()
}

/// `(b_p, torsion of H_p)` for every degree.
pub fn homology_oracle(k: &SimplicialComplex) -> Vec<(usize, Vec<u64>)> {
    let n = k.dim();
    let ranks: Vec<usize> = (0..=n + 1)
        .map(|p| if p == 0 || p > n { 0 } else { rank(boundary(k, p)) })
        .collect();
    (0..=n)
        .map(|p| {
            let b = k.simplices(p).len() - ranks[p] - ranks[p + 1];
            let t = if p < n { torsion_factors(boundary(k, p + 1)) } else { vec![] };
            (b, t.into_iter().map(|x| x as u64).collect())
        })
        .collect()
}

/// `⟨x ⌣ y, z⟩` with the front/back face formula written out directly.
pub fn cup_on(x: &Cochain, y: &Cochain, z: &Chain) -> Q {
    let a = x.degree();
    z.iter().fold(q(0), |acc, (t, c)| acc + c * x.get(&t[..=a]) * y.get(&t[a..]))
}

/// ℝ/ℤ value of a flat top class with Čech cocycle `x`: `(−1)^n s_n ⟨x, [M]⟩`.
pub fn top_class_value(m: &Manifold, x: &Cochain) -> RmodZ {
    let n = m.dim();
    RmodZ::from_q(&(x.eval(&m.fundamental()) * mu_sign(n) * parity(n)))
}

/// Linking pairing of torsion flat 1-classes with representatives
/// `r_s, r_t`: the top class `δr_s ⌣ r_t` read as an element of ℝ/ℤ.
pub fn linking_oracle(m: &Manifold, rs: &Cochain, rt: &Cochain) -> RmodZ {
    let x = Cochain::from_terms(m.dim(), m.simplices(m.dim()).iter().map(|t| {
        let z = Chain::elementary(t.clone());
        (t.clone(), cup_on(&rs.coboundary(m), rt, &z))
    }));
    top_class_value(m, &x)
}

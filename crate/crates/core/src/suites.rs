//! Verification suites: seeded randomized checks of the identities between
//! fields, currents, dual objects and their evaluations.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::complex::Chain;
use crate::cover::{antisymmetrized_layers, elementary_mu, mu_descent_holds, mu_sign, CochainLayer};
use crate::currents::{
    canonical_current_of_cycle, cl, current_from_field, dual_current_from_cycle, dual_transformation_between,
    eval_current_on_dualfield, eval_current_on_dualfield_raw, eval_dualcurrent_on_field, mu_map, unit_dual_field,
    DualGaugeField,
};
use crate::cycles::{decompose_cycle, holonomy, integrate, Assignment};
use crate::db::{
    bf_action, bf_action_raw, db_cap, epsilon_sign, eval_on_unit, eval_on_unit_reduced, extended_db_product,
    product_on_unit_raw,
};
use crate::error::{Error, Result};
use crate::gauge::{field_from_curvature, field_from_flat_class, gauge_equivalent, FlatClassRep, GaugeField};
use crate::homology::is_boundary;
use crate::manifold::Manifold;
use crate::random::{
    random_current, random_current_transformation, random_cycle, random_dual_current,
    random_dual_current_transformation, random_dual_field, random_dual_transformation, random_field,
    random_transformation, Gen,
};
use crate::rmodz::{q, qr, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Descent,
    GaugeInvariance,
    DecompositionIndependence,
    Proposition1,
    Sequences,
    Adjunction,
    Reduction,
    EpsilonSymmetryReport,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Descent,
        Suite::GaugeInvariance,
        Suite::DecompositionIndependence,
        Suite::Proposition1,
        Suite::Sequences,
        Suite::Adjunction,
        Suite::Reduction,
        Suite::EpsilonSymmetryReport,
    ];

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Descent => "descent",
            Suite::GaugeInvariance => "gauge-invariance",
            Suite::DecompositionIndependence => "decomposition-independence",
            Suite::Proposition1 => "proposition1",
            Suite::Sequences => "sequences",
            Suite::Adjunction => "adjunction",
            Suite::Reduction => "reduction",
            Suite::EpsilonSymmetryReport => "epsilon-symmetry-report",
        }
    }

    /// What the suite checks, printed in its report header.
    pub fn title(self) -> &'static str {
        match self {
            Suite::Descent => "descent equations of fields, currents, dual fields and dual currents",
            Suite::GaugeInvariance => "holonomy, BF action and evaluations are gauge invariant mod 1",
            Suite::DecompositionIndependence => "cycle integrals agree for min- and max-vertex decompositions",
            Suite::Proposition1 => {
                "holonomy = dual-current evaluation = unit evaluation of the extended product with the canonical current"
            }
            Suite::Sequences => "homology, duality, flat torsion sector, unit dual field and dual-field elimination",
            Suite::Adjunction => "product evaluated on the unit equals the current paired with the DB-cap",
            Suite::Reduction => "direct and reduced evaluation of (-1)-currents on the unit agree",
            Suite::EpsilonSymmetryReport => "graded symmetry of the BF action under swapping the factors",
        }
    }

    pub fn default_count(self) -> usize {
        match self {
            Suite::Descent | Suite::GaugeInvariance | Suite::Adjunction | Suite::Reduction => 100,
            Suite::DecompositionIndependence => 50,
            Suite::Proposition1 => 25,
            Suite::Sequences => 10,
            Suite::EpsilonSymmetryReport => 20,
        }
    }

    /// Whether failures make the suite fail; the symmetry report only
    /// collects findings.
    pub fn is_gating(self) -> bool {
        self != Suite::EpsilonSymmetryReport
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub case: usize,
    /// Rerunning the suite with `--seed <seed> --count 1` reproduces the case.
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub manifold: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub title: String,
    pub seed: u64,
    pub sections: Vec<Section>,
    /// Not part of the printed report, which must be reproducible.
    #[serde(skip)]
    pub wall: Duration,
    #[serde(skip)]
    gating: bool,
}

impl RunReport {
    pub fn cases(&self) -> usize {
        self.sections.iter().map(|s| s.cases).sum()
    }

    pub fn failures(&self) -> usize {
        self.sections.iter().map(|s| s.failures.len()).sum()
    }

    pub fn passed(&self) -> bool {
        !self.gating || self.failures() == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite {}: {}", self.suite, self.title);
        for s in &self.sections {
            let ok = s.cases - s.failures.len();
            let _ = writeln!(out, "  {}: {}/{} pass", s.manifold, ok, s.cases);
            for n in &s.notes {
                let _ = writeln!(out, "    {n}");
            }
            for f in &s.failures {
                let _ = writeln!(out, "    FAIL case {} (seed {}): {}", f.case, f.seed, f.detail);
            }
        }
        let verdict = if !self.gating {
            "report"
        } else if self.passed() {
            "pass"
        } else {
            "FAIL"
        };
        let _ = writeln!(out, "result: {verdict} ({}/{} cases)", self.cases() - self.failures(), self.cases());
        out
    }
}

type Checks = Vec<(String, bool)>;

fn check(out: &mut Checks, name: impl Into<String>, ok: bool) {
    out.push((name.into(), ok));
}

/// Runs `count` seeded cases; case `i` uses seed `seed + i`.
fn run_cases<F>(m: &Manifold, seed: u64, count: usize, mut case: F) -> (usize, Vec<Failure>)
where
    F: FnMut(&Manifold, &mut Gen, usize) -> Result<Checks>,
{
    let mut failures = Vec::new();
    for i in 0..count {
        let s = seed.wrapping_add(i as u64);
        let mut g = Gen::new(s);
        let detail = match case(m, &mut g, i) {
            Ok(checks) => {
                let bad: Vec<String> = checks.into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
                if bad.is_empty() {
                    continue;
                }
                bad.join(", ")
            }
            Err(e) => format!("error: {e}"),
        };
        failures.push(Failure { case: i, seed: s, detail });
    }
    (count, failures)
}

pub fn run(suite: Suite, manifolds: &[(String, Manifold)], seed: u64, count: usize) -> RunReport {
    let start = Instant::now();
    let mut sections = Vec::new();
    for (name, m) in manifolds {
        let mut notes = Vec::new();
        let (cases, failures) = match suite {
            Suite::Descent => run_cases(m, seed, count, descent_case),
            Suite::GaugeInvariance => run_cases(m, seed, count, gauge_invariance_case),
            Suite::DecompositionIndependence => run_cases(m, seed, count, decomposition_case),
            Suite::Proposition1 => run_cases(m, seed, count, proposition1_case),
            Suite::Adjunction => run_cases(m, seed, count, adjunction_case),
            Suite::Reduction => run_cases(m, seed, count, reduction_case),
            Suite::Sequences => sequences(m, seed, count, &mut notes),
            Suite::EpsilonSymmetryReport => epsilon_report(m, seed, count, &mut notes),
        };
        sections.push(Section { manifold: name.clone(), cases, failures, notes });
    }
    RunReport {
        suite: suite.name().to_string(),
        title: suite.title().to_string(),
        seed,
        sections,
        wall: start.elapsed(),
        gating: suite.is_gating(),
    }
}

/// One object of each kind per case, degrees cycling with the case index.
fn descent_case(m: &Manifold, g: &mut Gen, i: usize) -> Result<Checks> {
    let n = m.dim();
    let mut out = Checks::new();
    let p = i % n;
    let a = random_field(m, p, g)?;
    check(&mut out, format!("gauge {p}-field"), a.check_descent(m));
    check(&mut out, "gauge transformation", random_transformation(m, p, g).field(m).check_descent(m));
    let cq = (i % (n + 1)) as i64 - 1;
    let c = random_current(m, cq, g)?;
    check(&mut out, format!("gauge {cq}-current"), c.check_descent(m));
    check(
        &mut out,
        "current transformation",
        random_current_transformation(m, cq, g)?.current(m).check_descent(m),
    );
    let d = random_dual_field(m, cq, g)?;
    check(&mut out, format!("dual gauge {cq}-field"), d.check_descent(m));
    let t = random_dual_transformation(m, cq, g);
    check(&mut out, "dual transformation", t.is_admissible(m) && t.field(m).check_descent(m));
    let dp = i % (n + 1);
    let z = random_dual_current(m, dp, g)?;
    check(&mut out, format!("dual gauge {dp}-current"), z.check_descent(m));
    let t = random_dual_current_transformation(m, dp, g);
    check(&mut out, "dual current transformation", t.is_admissible() && t.current().check_descent(m));
    if p + 1 < n {
        let b = random_field(m, n - p - 2, g)?;
        let prod = crate::db::db_product(m, &b, &a)?;
        check(&mut out, "DB product of non-complementary fields", prod.check_descent(m));
    }
    Ok(out)
}

fn gauge_invariance_case(m: &Manifold, g: &mut Gen, i: usize) -> Result<Checks> {
    let n = m.dim();
    let mut out = Checks::new();
    let p = i % n;
    let qd = n - p - 1;
    let a = random_field(m, p, g)?;
    let a2 = &a + &random_transformation(m, p, g).field(m);
    let b = random_field(m, qd, g)?;
    let b2 = &b + &random_transformation(m, qd, g).field(m);
    let z = random_cycle(m, p, g);
    check(&mut out, "holonomy", holonomy(m, &a, &z)? == holonomy(m, &a2, &z)?);
    let one = q(1);
    check(&mut out, "BF action", bf_action(m, &b, &a, &one)? == bf_action(m, &b2, &a2, &one)?);

    let c = random_current(m, p as i64, g)?;
    let c2 = &c + &random_current_transformation(m, p as i64, g)?.current(m);
    let d = random_dual_field(m, p as i64, g)?;
    let d2 = &d + &random_dual_transformation(m, p as i64, g).field(m);
    let v = eval_current_on_dualfield(&c, &d)?;
    check(&mut out, "current on dual field, current side", v == eval_current_on_dualfield(&c2, &d)?);
    check(&mut out, "current on dual field, dual side", v == eval_current_on_dualfield(&c, &d2)?);

    let zc = random_dual_current(m, p, g)?;
    let zc2 = &zc + &random_dual_current_transformation(m, p, g).current();
    let w = eval_dualcurrent_on_field(&zc, &a)?;
    check(&mut out, "dual current on field, field side", w == eval_dualcurrent_on_field(&zc, &a2)?);
    check(&mut out, "dual current on field, dual side", w == eval_dualcurrent_on_field(&zc2, &a)?);

    let mu = m.partition();
    let u = random_current(m, -1, g)?;
    let u2 = &u + &random_current_transformation(m, -1, g)?.current(m);
    check(&mut out, "(-1)-current on the unit", eval_on_unit(&u, mu)? == eval_on_unit(&u2, mu)?);
    Ok(out)
}

fn decomposition_case(m: &Manifold, g: &mut Gen, i: usize) -> Result<Checks> {
    let p = i % m.dim();
    let a = random_field(m, p, g)?;
    let z = random_cycle(m, p, g);
    let lo = decompose_cycle(m, &z, Assignment::MinVertex)?;
    let hi = decompose_cycle(m, &z, Assignment::MaxVertex)?;
    let mut out = Checks::new();
    check(&mut out, "decompositions are valid", lo.check(m, &z) && hi.check(m, &z));
    check(&mut out, format!("{p}-cycle integral"), integrate(&a, &lo)? == integrate(&a, &hi)?);
    Ok(out)
}

/// One field against three cycles, along three independent paths.
fn proposition1_case(m: &Manifold, g: &mut Gen, i: usize) -> Result<Checks> {
    let p = i % m.dim();
    let a = random_field(m, p, g)?;
    let mu = m.partition();
    let mut out = Checks::new();
    for j in 0..3 {
        let z = random_cycle(m, p, g);
        let hol = holonomy(m, &a, &z)?;
        let rule = if g.coin() { Assignment::MinVertex } else { Assignment::MaxVertex };
        let zd = dual_current_from_cycle(&decompose_cycle(m, &z, rule)?);
        let via_dual = eval_dualcurrent_on_field(&zd, &a)?;
        let zc = canonical_current_of_cycle(m, &z)?;
        let via_unit = eval_on_unit(&extended_db_product(m, &zc, &a)?, mu)?;
        let via_mu = eval_dualcurrent_on_field(&mu_map(m, &zc, mu)?, &a)?;
        check(&mut out, format!("cycle {j}: holonomy = dual current"), hol == via_dual);
        check(&mut out, format!("cycle {j}: holonomy = unit evaluation"), hol == via_unit);
        check(&mut out, format!("cycle {j}: mu-image evaluation"), via_mu == via_unit);
    }
    Ok(out)
}

fn adjunction_case(m: &Manifold, g: &mut Gen, i: usize) -> Result<Checks> {
    let n = m.dim();
    let p = i % n;
    let a = random_field(m, p, g)?;
    let b = random_field(m, n - p - 1, g)?;
    let mu = m.partition();
    let lhs = product_on_unit_raw(m, &b, &a)?;
    let rhs = eval_current_on_dualfield_raw(&current_from_field(m, &b)?, &db_cap(m, &a, mu)?)?;
    let bf = bf_action_raw(m, &b, &a)?;
    let mut out = Checks::new();
    check(&mut out, "(B*A)[mu] = B[A cap mu] exactly", lhs == rhs);
    check(&mut out, "unit evaluation = BF action mod 1", (&lhs - &bf).is_integer());
    Ok(out)
}

fn reduction_case(m: &Manifold, g: &mut Gen, i: usize) -> Result<Checks> {
    let n = m.dim();
    let mu = m.partition();
    let mut out = Checks::new();
    let c = random_current(m, -1, g)?;
    check(&mut out, "random (-1)-current", eval_on_unit(&c, mu)? == eval_on_unit_reduced(m, &c, mu)?);
    let p = i % n;
    let a = random_field(m, p, g)?;
    let bc = random_current(m, p as i64, g)?;
    let x = extended_db_product(m, &bc, &a)?;
    check(&mut out, "extended product", eval_on_unit(&x, mu)? == eval_on_unit_reduced(m, &x, mu)?);
    Ok(out)
}

fn flat_torsion_fields(m: &Manifold, p: usize) -> Result<Vec<GaugeField>> {
    let gens = crate::gauge::torsion_flat_cochains(m, p);
    let mut combos: Vec<Vec<u64>> = vec![vec![]];
    for (_, d) in &gens {
        combos = combos.into_iter().flat_map(|c| (0..*d).map(move |s| [c.clone(), vec![s]].concat())).collect();
    }
    combos
        .into_iter()
        .map(|c| {
            let mut r = crate::complex::Cochain::new(p);
            for ((v, d), s) in gens.iter().zip(&c) {
                r += &v.scale(&qr(*s as i64, *d as i64));
            }
            field_from_flat_class(m, &FlatClassRep { p, r })
        })
        .collect()
}

/// The generator of `H^n` with integral 1 over `M`.
pub fn normalised_volume(m: &Manifold) -> Result<crate::complex::Cochain> {
    let w = m.cohomology(m.dim()).free.first().cloned().ok_or_else(|| Error::Internal("H^n has no free generator".into()))?;
    let total = w.eval(&m.fundamental());
    Ok(w.scale(&(Q::from_integer(1.into()) / total)))
}

fn unit_from_layers(m: &Manifold, mu: Vec<CochainLayer>) -> DualGaugeField {
    let bottom: Chain = mu[m.dim()].integrate_top(m).transpose();
    DualGaugeField { q: -1, layers: mu, bottom }
}

/// Structural checks, one case each; `count` random dual transformations
/// exercise the elimination.
fn sequences(m: &Manifold, seed: u64, count: usize, notes: &mut Vec<String>) -> (usize, Vec<Failure>) {
    let n = m.dim();
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut record = |detail: String, ok: bool, failures: &mut Vec<Failure>| {
        if !ok {
            failures.push(Failure { case: cases, seed, detail });
        }
        cases += 1;
    };

    let hom: Vec<_> = (0..=n).map(|p| m.homology(p).presentation.clone()).collect();
    let coh: Vec<_> = (0..=n).map(|p| m.cohomology(p).presentation.clone()).collect();
    let b: Vec<String> = hom.iter().map(|h| h.rank.to_string()).collect();
    notes.push(format!("b = {}", b.join(",")));
    let pd = (0..=n).all(|p| hom[p].rank == hom[n - p].rank && hom[p] == coh[n - p]);
    record("Poincare duality H_p = H^{n-p}".into(), pd, &mut failures);
    let tors = (0..n).all(|p| hom[p].torsion == hom[n - p - 1].torsion);
    record("torsion symmetry T_p = T_{n-p-1}".into(), tors, &mut failures);
    let uct = (0..n).all(|p| coh[p + 1].torsion == hom[p].torsion && coh[p].rank == hom[p].rank);
    record("universal coefficients".into(), uct, &mut failures);

    for p in 0..n {
        let order: u64 = hom[p].torsion.iter().product();
        let outcome = flat_torsion_fields(m, p).and_then(|fields| {
            let mut classes = 0;
            let mut consistent = true;
            for (i, a) in fields.iter().enumerate() {
                let mut new = true;
                for b in &fields[..i] {
                    let e = gauge_equivalent(m, a, b)?;
                    consistent &= e.equivalent == e.witness.is_some();
                    new &= !e.equivalent;
                }
                classes += new as usize;
                let e = gauge_equivalent(m, a, &(a + &random_transformation(m, p, &mut Gen::new(seed + i as u64)).field(m)))?;
                consistent &= e.equivalent && e.witness.is_some();
            }
            Ok((classes, consistent))
        });
        match outcome {
            Ok((classes, consistent)) => {
                if order > 1 {
                    notes.push(format!(
                        "flat torsion sector in degree {p}: {classes} inequivalent classes, |T_{p}| = {order}{}",
                        if classes as u64 == order { " confirmed" } else { "" }
                    ));
                }
                record(format!("flat torsion {p}-fields: {classes} classes vs |T_{p}| = {order}"), classes as u64 == order, &mut failures);
                record(format!("flat torsion {p}-fields: equivalence test agrees with its witness"), consistent, &mut failures);
            }
            Err(e) => record(format!("flat torsion {p}-fields: {e}"), false, &mut failures),
        }
    }

    let unit = unit_dual_field(m);
    record("unit dual field descent".into(), unit.check_descent(m), &mut failures);
    record("partition of unity".into(), mu_descent_holds(m, &m.partition().mu), &mut failures);
    let fund = m.homology(n).coordinates(m, &m.fundamental());
    record("cl(m) = [M]".into(), cl(m, &unit.bottom) == fund, &mut failures);
    let vol_pairing = normalised_volume(m).and_then(|w| {
        let u = field_from_curvature(m, &w, n - 1)?.top;
        Ok(u.eval(&unit.bottom) == q(1))
    });
    record("u[m] = 1 for the descent of a normalised volume form".into(), vol_pairing == Ok(true), &mut failures);
    let elem = unit_from_layers(m, elementary_mu(m));
    let anti = unit_from_layers(m, antisymmetrized_layers(m, mu_sign));
    let equiv = |x: &DualGaugeField| -> bool {
        let d = &unit - x;
        matches!(dual_transformation_between(m, &d), Ok(Some(_)))
    };
    record("elementary and antisymmetrized units are equivalent".into(), equiv(&elem) && equiv(&anti), &mut failures);
    record("unit dual field is not a transformation".into(), matches!(dual_transformation_between(m, &unit), Ok(None)), &mut failures);

    for p in 0..=n {
        let surj = m.homology(p).generators().into_iter().all(|z| {
            decompose_cycle(m, &z, Assignment::MinVertex)
                .map(|d| {
                    let c = dual_current_from_cycle(&d);
                    cl(m, &c.bottom) == m.homology(p).coordinates(m, &z)
                })
                .unwrap_or(false)
        });
        record(format!("cl onto H_{p}"), surj, &mut failures);
    }

    for i in 0..count {
        let s = seed.wrapping_add(i as u64);
        let mut g = Gen::new(s);
        let qd = (i % (n + 1)) as i64 - 1;
        let t = random_dual_transformation(m, qd, &mut g);
        let ok = matches!(dual_transformation_between(m, &t.field(m)), Ok(Some(_)));
        let p = i % (n + 1);
        let bottom = random_dual_current_transformation(m, p, &mut g).current().bottom;
        let bounds = p == n && bottom.is_zero() || p < n && is_boundary(m, &bottom);
        if !ok || !bounds {
            failures.push(Failure {
                case: cases,
                seed: s,
                detail: format!("elimination of a dual {qd}-transformation: {ok}; transformation bottom bounds: {bounds}"),
            });
        }
        cases += 1;
    }
    (cases, failures)
}

fn epsilon_report(m: &Manifold, seed: u64, count: usize, notes: &mut Vec<String>) -> (usize, Vec<Failure>) {
    let n = m.dim();
    let mut failures = Vec::new();
    for p in 0..n {
        let qd = n - p - 1;
        let eps = epsilon_sign(p as i64, n as i64);
        let (mut with_eps, mut with_plus, mut total) = (0, 0, 0);
        for i in 0..count {
            let s = seed.wrapping_add(i as u64);
            let mut g = Gen::new(s);
            let pair = (|| -> Result<(Q, Q)> {
                let a = random_field(m, p, &mut g)?;
                let b = random_field(m, qd, &mut g)?;
                Ok((bf_action_raw(m, &b, &a)?, bf_action_raw(m, &a, &b)?))
            })();
            match pair {
                Ok((ba, ab)) => {
                    total += 1;
                    with_eps += (&ab - &ba * q(eps)).is_integer() as usize;
                    with_plus += (&ab - &ba).is_integer() as usize;
                }
                Err(e) => failures.push(Failure { case: i, seed: s, detail: format!("p={p}: {e}") }),
            }
        }
        notes.push(format!(
            "p={p}, q={qd}, eps={eps}: A*B = eps B*A mod 1 in {with_eps}/{total}, A*B = B*A mod 1 in {with_plus}/{total}"
        ));
    }
    (count * n, failures)
}

/// Maps library errors to CLI exit codes: 2 for unusable input, 3 for
/// violated preconditions, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidComplex(_) | Error::UnknownManifold(_) => 2,
        Error::Coupling
        | Error::Precondition(_)
        | Error::DegreeMismatch { .. }
        | Error::NotACycle
        | Error::NotClosed
        | Error::NotIntegral
        | Error::InvalidFlatClass
        | Error::Orientation(_)
        | Error::DegreeZeroBoundary => 3,
        Error::Infeasible(_) | Error::Internal(_) => 1,
    }
}

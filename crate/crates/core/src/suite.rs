//! The randomized property suite behind `qtwist suite`.
//!
//! Instances are generated up front from a seeded ChaCha stream, so the
//! report depends only on `(seed, max_order)`; evaluation may run on several
//! threads but results are collected by index.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::abgroup::{enumerate_bicharacters, Bicharacter, FinAbGroup};
use crate::apps::{
    cocycle_conjugacy, compact_operators_example, composition_check, dual_coaction,
    embed_in_reduced, finite_torus, group_algebra_crossed_is_full, inner_coaction_instance,
    module_boxtimes, reduced_crossed_product, skew_m2_generators, skew_tensor, GradedHilbertModule,
};
use crate::boxtimes::{build_via_heisenberg, equivalent};
use crate::coact::{corepresentation_cocycle, GradedAlgebra};
use crate::heis::{canonical_heisenberg, commutation_check, composite_heisenberg, conjugate_pair};
use crate::matspan::{AlgebraBasis, CMatrix, Tolerance};
use crate::qgroup::build;
use crate::report::Report;
use crate::spec::{
    resolve, verify, AlgebraSpec, ComponentSpec, ConstructionSpec, GroupsSpec, OptionsSpec,
};

pub const DEFAULT_SEED: u64 = 1009;
pub const DEFAULT_MAX_ORDER: usize = 4;
pub const MAX_ORDER_LIMIT: usize = 6;
/// Bound on `(n_C·|G|)·(n_D·|H|)`, the carrier of the covariant route.
pub const CARRIER_CAP: usize = 128;
pub const MAX_ALGEBRA_DIM: usize = 8;
/// Bicharacters per group pair; larger families are sampled.
pub const BICHARACTERS_PER_PAIR: usize = 16;
pub const WITNESS_INSTANCES: usize = 6;

pub const RIEFFEL_STRUCTURE_TOL: f64 = 1e-10;
pub const RIEFFEL_ASSOCIATIVITY_TOL: f64 = 1e-12;
pub const WITNESS_MULTIPLICATIVITY_TOL: f64 = 1e-8;
pub const PENTAGON_TOL: f64 = 1e-10;
pub const COMMUTATION_TOL: f64 = 1e-12;
pub const NEGATIVE_CONTROL_FLOOR: f64 = 0.1;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("max order must be in 2..={MAX_ORDER_LIMIT}, got {0}")]
    MaxOrder(usize),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub max_order: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub label: String,
    pub spec: ConstructionSpec,
    pub dim_c: usize,
    pub dim_d: usize,
    pub dim_heisenberg: usize,
    pub dim_covariant: usize,
    pub dimension_law: bool,
    pub routes_equivalent: bool,
    pub routes_multiplicativity: f64,
    pub rieffel_structure: f64,
    pub rieffel_associativity: f64,
    pub failed: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessOutcome {
    pub instance: usize,
    pub witnesses: Vec<String>,
    /// `(i, j, multiplicativity residual)`; `NaN` when no map was found.
    pub pairs: Vec<(usize, usize, f64)>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub max_order: usize,
    pub tolerances: Tolerance,
    pub instances: Vec<InstanceOutcome>,
    pub witness_checks: Vec<WitnessOutcome>,
    pub scenarios: Vec<Report>,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The smallest failing randomized instance, as a spec for `verify`.
    pub fn reproducer(&self) -> Option<ConstructionSpec> {
        let failing_witness = self
            .witness_checks
            .iter()
            .filter(|w| !w.pass)
            .map(|w| &self.instances[w.instance]);
        self.instances
            .iter()
            .filter(|i| !i.pass)
            .chain(failing_witness)
            .min_by_key(|i| (i.dim_c * i.dim_d, i.index))
            .map(|i| i.spec.clone())
    }
}

/// Invariant-factor lists `n₁ | n₂ | …` with `2 ≤ Πnᵢ ≤ max_order`.
pub fn groups_up_to(max_order: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, order: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        let start = prefix.last().copied().unwrap_or(2);
        let mut n = start;
        while order * n <= max {
            if prefix.last().is_none_or(|&p| n % p == 0) {
                prefix.push(n);
                out.push(prefix.clone());
                extend(prefix, order * n, max, out);
                prefix.pop();
            }
            n += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut out);
    out.sort_by_key(|c| (c.iter().product::<usize>(), c.len(), c.clone()));
    out
}

pub fn group_label(cycles: &[usize]) -> String {
    if cycles.is_empty() {
        return "1".into();
    }
    cycles
        .iter()
        .map(|n| format!("Z/{n}"))
        .collect::<Vec<_>>()
        .join("+")
}

/// Block-diagonal `⊕ M_{b}` shapes with `Σ b² ≤ MAX_ALGEBRA_DIM`.
const BLOCKS: &[&[usize]] = &[
    &[1],
    &[1, 1],
    &[2],
    &[1, 1, 1],
    &[1, 1, 1, 1],
    &[1, 2],
    &[2, 2],
];

#[derive(Debug, Clone)]
enum Candidate {
    GroupAlgebra,
    FunctionAlgebra,
    Blocks(&'static [usize]),
}

impl Candidate {
    fn size(&self, order: usize) -> usize {
        match self {
            Self::GroupAlgebra | Self::FunctionAlgebra => order,
            Self::Blocks(b) => b.iter().sum(),
        }
    }

    fn all() -> Vec<Self> {
        let mut v = vec![Self::GroupAlgebra, Self::FunctionAlgebra];
        v.extend(BLOCKS.iter().map(|b| Self::Blocks(b)));
        v
    }
}

/// Q factor of a matrix with uniform entries. Not Haar distributed, but
/// generic.
fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let q = m.qr().q();
    CMatrix::from_fn(n, n, |i, j| q[(i, j)])
}

fn random_residues(group: &FinAbGroup, rng: &mut ChaCha8Rng) -> Vec<i64> {
    group
        .cycles()
        .iter()
        .map(|&n| rng.random_range(0..n) as i64)
        .collect()
}

/// `⊕ M_b` with random vector degrees, moved off the axes by a random
/// unitary. Matrix units `E_ij` inside a block carry `deg e_i − deg e_j`.
fn blocks_spec(blocks: &[usize], group: &FinAbGroup, rng: &mut ChaCha8Rng) -> AlgebraSpec {
    let size: usize = blocks.iter().sum();
    let degrees: Vec<Vec<i64>> = (0..size).map(|_| random_residues(group, rng)).collect();
    let w = random_unitary(size, rng);
    let wa = w.adjoint();
    let mut components: Vec<ComponentSpec> = Vec::new();
    let mut offset = 0;
    for &b in blocks {
        for i in offset..offset + b {
            for j in offset..offset + b {
                let degree: Vec<i64> = group
                    .cycles()
                    .iter()
                    .enumerate()
                    .map(|(t, &n)| (degrees[i][t] - degrees[j][t]).rem_euclid(n as i64))
                    .collect();
                let m = &(&w * &CMatrix::unit(size, size, i, j)) * &wa;
                match components.iter_mut().find(|c| c.degree == degree) {
                    Some(c) => c.basis.push(m.to_pairs()),
                    None => components.push(ComponentSpec {
                        degree,
                        basis: vec![m.to_pairs()],
                    }),
                }
            }
        }
        offset += b;
    }
    AlgebraSpec::Matrix {
        size,
        components,
        vector_degrees: None,
    }
}

fn candidate_spec(c: &Candidate, group: &FinAbGroup, rng: &mut ChaCha8Rng) -> AlgebraSpec {
    match c {
        Candidate::GroupAlgebra => AlgebraSpec::GroupAlgebra,
        Candidate::FunctionAlgebra => AlgebraSpec::FunctionAlgebra,
        Candidate::Blocks(b) => blocks_spec(b, group, rng),
    }
}

fn candidate_label(c: &Candidate) -> String {
    match c {
        Candidate::GroupAlgebra => "C*(G)".into(),
        Candidate::FunctionAlgebra => "C(G)".into(),
        Candidate::Blocks(b) => b
            .iter()
            .map(|n| format!("M{n}"))
            .collect::<Vec<_>>()
            .join("+"),
    }
}

/// All randomized instances for `cfg`, in evaluation order.
pub fn generate(cfg: SuiteConfig) -> Result<Vec<(String, ConstructionSpec)>, SuiteError> {
    if !(2..=MAX_ORDER_LIMIT).contains(&cfg.max_order) {
        return Err(SuiteError::MaxOrder(cfg.max_order));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let groups = groups_up_to(cfg.max_order);
    let mut out = Vec::new();
    for gc in &groups {
        for hc in &groups {
            let g = FinAbGroup::new(gc.clone()).expect("valid cycles");
            let h = FinAbGroup::new(hc.clone()).expect("valid cycles");
            let mut chis = enumerate_bicharacters(&g, &h).expect("small groups");
            if chis.len() > BICHARACTERS_PER_PAIR {
                chis.shuffle(&mut rng);
                chis.truncate(BICHARACTERS_PER_PAIR);
            }
            for chi in chis {
                let (ng, nh) = (g.order(), h.order());
                let cs: Vec<Candidate> = Candidate::all()
                    .into_iter()
                    .filter(|c| c.size(ng) * ng * nh <= CARRIER_CAP)
                    .collect();
                let Some(c) = cs.choose(&mut rng).cloned() else {
                    continue;
                };
                let room = CARRIER_CAP / (c.size(ng) * ng * nh);
                let ds: Vec<Candidate> = Candidate::all()
                    .into_iter()
                    .filter(|d| d.size(nh) <= room)
                    .collect();
                let d = ds.choose(&mut rng).cloned().expect("M1 always fits");
                let label = format!(
                    "{} x {} chi={:?} C={} D={}",
                    group_label(gc),
                    group_label(hc),
                    chi.exponents(),
                    candidate_label(&c),
                    candidate_label(&d)
                );
                let spec = ConstructionSpec {
                    groups: GroupsSpec {
                        g: gc.clone(),
                        h: hc.clone(),
                    },
                    bicharacter: chi.exponents().to_vec(),
                    c: candidate_spec(&c, &g, &mut rng),
                    d: candidate_spec(&d, &h, &mut rng),
                    options: OptionsSpec::default(),
                    perturbation: None,
                };
                out.push((label, spec));
            }
        }
    }
    Ok(out)
}

fn evaluate(index: usize, label: &str, spec: &ConstructionSpec) -> InstanceOutcome {
    let text = spec.to_json();
    let mut outcome = InstanceOutcome {
        index,
        label: label.to_string(),
        spec: spec.clone(),
        dim_c: 0,
        dim_d: 0,
        dim_heisenberg: 0,
        dim_covariant: 0,
        dimension_law: false,
        routes_equivalent: false,
        routes_multiplicativity: f64::NAN,
        rieffel_structure: f64::NAN,
        rieffel_associativity: f64::NAN,
        failed: Vec::new(),
        pass: false,
    };
    let resolved = match resolve(&text, None) {
        Ok(r) => r,
        Err(e) => {
            outcome.failed.push(format!("resolve: {e}"));
            return outcome;
        }
    };
    outcome.dim_c = resolved.c.dim();
    outcome.dim_d = resolved.d.dim();
    let r = verify(&resolved);
    let dim = |k: &str| r.dims.get(k).copied().unwrap_or(0);
    let res = |k: &str| r.residuals.get(k).copied().unwrap_or(f64::NAN);
    let ok = |k: &str| r.verdicts.get(k).copied().unwrap_or(false);
    outcome.dim_heisenberg = dim("heisenberg_route.dim");
    outcome.dim_covariant = dim("covariant_route.dim");
    let expected = outcome.dim_c * outcome.dim_d;
    outcome.dimension_law = outcome.dim_heisenberg == expected && outcome.dim_covariant == expected;
    outcome.routes_equivalent = ok("routes_equivalent");
    outcome.routes_multiplicativity = res("routes.multiplicativity");
    outcome.rieffel_structure = res("rieffel.structure_constants");
    outcome.rieffel_associativity = res("rieffel.associativity");
    outcome.failed = r.failed_verdicts().iter().map(|s| s.to_string()).collect();
    if !outcome.dimension_law {
        outcome.failed.push("dimension_law".into());
    }
    // NaN fails both comparisons.
    if outcome.rieffel_structure.is_nan() || outcome.rieffel_structure > RIEFFEL_STRUCTURE_TOL {
        outcome.failed.push("rieffel_structure_tolerance".into());
    }
    if outcome.rieffel_associativity.is_nan()
        || outcome.rieffel_associativity >= RIEFFEL_ASSOCIATIVITY_TOL
    {
        outcome
            .failed
            .push("rieffel_associativity_tolerance".into());
    }
    outcome.failed.extend(r.errors.iter().cloned());
    outcome.failed.sort();
    outcome.failed.dedup();
    outcome.pass = r.pass() && outcome.failed.is_empty();
    outcome
}

/// Canonical, composite and doubled pairs give pairwise equivalent
/// crossed products.
fn witness_check(index: usize, spec: &ConstructionSpec) -> WitnessOutcome {
    let mut outcome = WitnessOutcome {
        instance: index,
        witnesses: vec!["canonical".into(), "composite".into(), "amplified:2".into()],
        pairs: Vec::new(),
        pass: false,
    };
    let Ok(s) = resolve(&spec.to_json(), None) else {
        return outcome;
    };
    let canonical = canonical_heisenberg(&s.chi);
    let pairs = [
        canonical.clone(),
        composite_heisenberg(&s.chi),
        canonical.amplified(2),
    ];
    let built: Vec<_> = pairs
        .iter()
        .map(|p| build_via_heisenberg(&s.c, &s.d, &s.chi, p, s.tol).ok())
        .collect();
    let mut pass = built.iter().all(Option::is_some);
    for i in 0..built.len() {
        for j in i + 1..built.len() {
            let residual = match (&built[i], &built[j]) {
                (Some(a), Some(b)) => {
                    let e = equivalent(a, b, s.tol);
                    if e.found() {
                        e.multiplicativity_residual
                    } else {
                        f64::NAN
                    }
                }
                _ => f64::NAN,
            };
            pass &= residual < WITNESS_MULTIPLICATIVITY_TOL;
            outcome.pairs.push((i, j, residual));
        }
    }
    outcome.pass = pass;
    outcome
}

/// Runs `f` on every index with up to `available_parallelism` threads and
/// returns the results in index order.
fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(n.max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let value = f(i);
                slots.lock().expect("no poisoned workers")[i] = Some(value);
            });
        }
    });
    slots
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|v| v.expect("every slot filled"))
        .collect()
}

// Fixed scenarios.

/// Quantum group axioms for `Z/2, …, Z/6` and `Z/2+Z/2`.
pub fn pentagon_scenarios() -> Vec<Report> {
    let tol = Tolerance::new(1e-9, PENTAGON_TOL).expect("valid");
    [vec![2], vec![3], vec![4], vec![5], vec![6], vec![2, 2]]
        .into_iter()
        .map(|cycles| {
            let label = group_label(&cycles);
            let mut r = Report::new(
                format!("pentagon {label}"),
                serde_json::json!({ "G": cycles }),
                tol,
            );
            let g = FinAbGroup::new(cycles).expect("valid cycles");
            match build(&g, tol) {
                Ok(m) => {
                    let c = m.certificate();
                    r.residual("unitarity", c.unitarity)
                        .residual("pentagon", c.pentagon)
                        .residual("comultiplication_w", c.comultiplication_w)
                        .residual("coassociativity", c.coassociativity)
                        .residual("antipode_involution", c.antipode_involution)
                        .residual(
                            "antipode_anti_comultiplicative",
                            c.antipode_anti_comultiplicative,
                        )
                        .dim("podles_dim", c.podles_dim)
                        .dim("expected_podles_dim", g.order() * g.order())
                        .verdict("first_leg_slices", c.first_leg_slices_match)
                        .verdict("second_leg_slices", c.second_leg_slices_match)
                        .verdict("podles", c.podles_dim == g.order() * g.order())
                        .verdict("certified", true);
                    r.iso_found = true;
                }
                Err(e) => {
                    r.error("certified", e);
                }
            }
            r
        })
        .collect()
}

/// The graded `M₂` generators and the Clifford presentation `Cl₁ ⊠ Cl₁`.
pub fn skew_scenarios(tol: Tolerance) -> Vec<Report> {
    let mut out = Vec::new();
    match skew_m2_generators(tol) {
        Ok(s) => out.push(s.report(tol)),
        Err(e) => {
            let mut r = Report::new("skew_m2", serde_json::json!({}), tol);
            r.error("skew_m2", e);
            out.push(r);
        }
    }
    let z2 = FinAbGroup::cyclic(2);
    let cl1 = GradedAlgebra::new(
        z2,
        2,
        vec![
            (0, vec![CMatrix::identity(2)]),
            (1, vec![crate::matspan::pauli::sigma_x()]),
        ],
        tol,
    );
    let result = cl1
        .map_err(crate::apps::AppsError::from)
        .and_then(|c| skew_tensor(&c, &c, tol));
    let name = "skew_clifford";
    let ins = serde_json::json!({ "C": "span{1, sx}, sx odd", "D": "same" });
    match result {
        Ok(s) => out.push(s.report(name, ins, tol)),
        Err(e) => {
            let mut r = Report::new(name, ins, tol);
            r.error(name, e);
            out.push(r);
        }
    }
    out
}

/// Every `2 ≤ N ≤ 6`, `0 ≤ k < N`.
pub fn torus_scenarios(tol: Tolerance) -> Vec<Report> {
    let cases: Vec<(usize, usize)> = (2..=6).flat_map(|n| (0..n).map(move |k| (n, k))).collect();
    par_map(cases.len(), |i| {
        let (n, k) = cases[i];
        match finite_torus(n, k, tol) {
            Ok(t) => t.report(tol),
            Err(e) => {
                let mut r = Report::new(
                    format!("torus n={n} k={k}"),
                    serde_json::json!({ "n": n, "k": k }),
                    tol,
                );
                r.error("torus", e);
                r
            }
        }
    })
}

fn failed(name: &str, tol: Tolerance, e: impl std::fmt::Display) -> Report {
    let mut r = Report::new(name, serde_json::json!({}), tol);
    r.error(name, e);
    r
}

/// Reduced crossed products, their dual coactions, `C*(G) ⋊ Ĝ ≅ M_|G|`,
/// and the embedding into a reduced crossed product.
pub fn crossed_scenarios(tol: Tolerance) -> Vec<Report> {
    let mut out = Vec::new();
    let z2 = FinAbGroup::cyclic(2);
    let z3 = FinAbGroup::cyclic(3);
    let algebras = [
        (
            "crossed M2 diag/offdiag",
            GradedAlgebra::graded_full_matrix(&z2, &[0, 1], tol),
        ),
        (
            "crossed M2 trivial over Z/3",
            GradedAlgebra::trivially_graded(&z3, &AlgebraBasis::full(2), tol),
        ),
        ("crossed C*(Z/3)", GradedAlgebra::group_algebra(&z3, tol)),
    ];
    for (name, c) in algebras {
        let x = c
            .map_err(crate::apps::AppsError::from)
            .and_then(|c| reduced_crossed_product(&c, tol));
        match x {
            Ok(x) => {
                let mut r = x.report(tol);
                r.name = name.into();
                match dual_coaction(&x, tol) {
                    Ok(d) => r.absorb("dual_coaction", &d.report(tol)),
                    Err(e) => {
                        r.error("dual_coaction", e);
                    }
                }
                out.push(r);
            }
            Err(e) => out.push(failed(name, tol, e)),
        }
    }
    for cycles in [vec![2], vec![3], vec![2, 2]] {
        let name = format!("group algebra crossed {}", group_label(&cycles));
        let g = FinAbGroup::new(cycles).expect("valid cycles");
        match group_algebra_crossed_is_full(&g, tol) {
            Ok((x, iso)) => {
                let mut r = x.report(tol);
                r.name = name;
                r.dim("matrix_size", g.order())
                    .residual("full.multiplicativity", iso.multiplicativity_residual)
                    .verdict("isomorphic_to_full_matrices", iso.found());
                out.push(r);
            }
            Err(e) => out.push(failed(&name, tol, e)),
        }
    }
    for n in [2, 3] {
        let name = format!("embed in reduced Z/{n}");
        let g = FinAbGroup::cyclic(n);
        let r = GradedAlgebra::group_algebra(&g, tol)
            .map_err(crate::apps::AppsError::from)
            .and_then(|c| embed_in_reduced(&c, &c, &Bicharacter::cyclic(n, 1), tol));
        match r {
            Ok(e) => {
                let mut r = e.report(tol);
                r.name = name;
                out.push(r);
            }
            Err(e) => out.push(failed(&name, tol, e)),
        }
    }
    out
}

/// Inner-coaction instances, `K(C²) ⊠ K(C²) ≅ M₄`, and cocycle twists
/// of nontrivially graded matrix algebras.
pub fn cocycle_scenarios(tol: Tolerance) -> Vec<Report> {
    let mut out = Vec::new();
    match compact_operators_example(tol) {
        Ok(r) => out.push(r.report("compact operators", serde_json::json!({}), tol)),
        Err(e) => out.push(failed("compact operators", tol, e)),
    }
    for n in [2, 3] {
        let name = format!("inner M{n} with C*(Z/{n})");
        let g = FinAbGroup::cyclic(n);
        let projections: Vec<CMatrix> = (0..n).map(|i| CMatrix::unit(n, n, i, i)).collect();
        let r = GradedAlgebra::group_algebra(&g, tol)
            .map_err(crate::apps::AppsError::from)
            .and_then(|d| {
                inner_coaction_instance(
                    &AlgebraBasis::full(n),
                    &projections,
                    &d,
                    &Bicharacter::cyclic(n, 1),
                    tol,
                )
            });
        let ins = serde_json::json!({ "n": n, "chi": [[1]] });
        match r {
            Ok(r) => out.push(r.report(&name, ins, tol)),
            Err(e) => out.push(failed(&name, tol, e)),
        }
    }
    let z2 = FinAbGroup::cyclic(2);
    let name = "inner M2 with graded M2";
    let r = GradedAlgebra::graded_full_matrix(&z2, &[0, 1], tol)
        .map_err(crate::apps::AppsError::from)
        .and_then(|d| {
            let e = [CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)];
            inner_coaction_instance(
                &AlgebraBasis::full(2),
                &e,
                &d,
                &Bicharacter::cyclic(2, 1),
                tol,
            )
        });
    match r {
        Ok(r) => out.push(r.report(name, serde_json::json!({ "n": 2, "chi": [[1]] }), tol)),
        Err(e) => out.push(failed(name, tol, e)),
    }
    // `E_g = e_gg` untwists the grading of `End(V)` with `V` graded by `g`.
    for (n, both) in [(2, false), (2, true), (3, false)] {
        let name = format!(
            "cocycle M{n} graded{}",
            if both { " both sides" } else { "" }
        );
        let g = FinAbGroup::cyclic(n);
        let degrees: Vec<usize> = (0..n).collect();
        let r = GradedAlgebra::graded_full_matrix(&g, &degrees, tol)
            .and_then(|c| {
                let e: Vec<CMatrix> = (0..n).map(|i| CMatrix::unit(n, n, i, i)).collect();
                let u = corepresentation_cocycle(&c, &e, tol)?;
                Ok((c, u))
            })
            .map_err(crate::apps::AppsError::from)
            .and_then(|(c, u)| {
                let chi = Bicharacter::cyclic(n, 1);
                let x = if both {
                    cocycle_conjugacy(&c, Some(&u), &c, Some(&u), &chi, tol)?
                } else {
                    let d = GradedAlgebra::group_algebra(&g, tol)?;
                    cocycle_conjugacy(&c, Some(&u), &d, None, &chi, tol)?
                };
                Ok((x, u.report().density_dim, u.report().density_expected))
            });
        let ins = serde_json::json!({ "n": n, "both_sides": both, "chi": [[1]] });
        match r {
            Ok((x, found, expected)) => {
                let mut r = x.report(&name, ins, tol);
                r.dim("density", found)
                    .dim("density_expected", expected)
                    .verdict("density", found == expected);
                out.push(r);
            }
            Err(e) => out.push(failed(&name, tol, e)),
        }
    }
    out
}

/// Graded Hilbert modules: compacts and the composition isomorphism.
pub fn module_scenarios(tol: Tolerance) -> Vec<Report> {
    let mut out = Vec::new();
    let z2 = FinAbGroup::cyclic(2);
    let chi = Bicharacter::cyclic(2, 1);
    let row = GradedHilbertModule::row(&z2, &[0, 1], tol);
    let cases: Vec<(&str, Result<(GradedHilbertModule, GradedHilbertModule), _>)> = vec![
        (
            "modules row x C*(Z/2)",
            row.clone().and_then(|e| {
                let d = GradedAlgebra::group_algebra(&z2, tol)?;
                Ok((e, GradedHilbertModule::trivial(&d, tol)?))
            }),
        ),
        ("modules row x row", row.map(|e| (e.clone(), e))),
    ];
    for (name, pair) in cases {
        let m = pair.and_then(|(e, f)| module_boxtimes(&e, &f, &chi, tol));
        match m {
            Ok(m) => out.push(m.report(name, serde_json::json!({ "chi": [[1]] }), tol)),
            Err(e) => out.push(failed(name, tol, e)),
        }
    }
    match composition_check([1, 2, 1], &[0, 1, 0, 1], [1, 1, 1], &[1, 0, 1], &chi, tol) {
        Ok(c) => out.push(c.report(tol)),
        Err(e) => out.push(failed("composition", tol, e)),
    }
    out
}

/// Heisenberg against its conjugate commutes. Against itself the
/// commutator picks up `χ(g,h)² − 1`, so the negative control only applies
/// when some generator value is not `±1`.
pub fn commutation_scenarios(tol: Tolerance) -> Vec<Report> {
    let chis = [
        ("Z/2", Bicharacter::cyclic(2, 1)),
        ("Z/3", Bicharacter::cyclic(3, 1)),
        ("Z/4", Bicharacter::cyclic(4, 1)),
        ("Z/6", Bicharacter::cyclic(6, 1)),
        (
            "Z/2+Z/2",
            Bicharacter::pairing(&FinAbGroup::new(vec![2, 2]).expect("valid cycles")),
        ),
    ];
    chis.into_iter()
        .map(|(label, chi)| {
            let mut r = Report::new(
                format!("commutation {label}"),
                serde_json::json!({ "G": chi.left().cycles(), "chi": chi.exponents() }),
                tol,
            );
            let squares_nontrivial = chi.left().generators().iter().any(|a| {
                chi.right()
                    .generators()
                    .iter()
                    .any(|b| (chi.value(a, b).powi(2) - 1.0).norm() > 0.5)
            });
            let h = canonical_heisenberg(&chi);
            match (
                commutation_check(&h, &conjugate_pair(&h)),
                commutation_check(&h, &h),
            ) {
                (Ok(pos), Ok(neg)) => {
                    r.residual("heisenberg_with_conjugate", pos)
                        .residual("heisenberg_with_itself", neg)
                        .verdict("commutes", pos < COMMUTATION_TOL);
                    if squares_nontrivial {
                        r.verdict("negative_control", neg > NEGATIVE_CONTROL_FLOOR);
                    } else {
                        r.errors
                            .push("negative_control: skipped, chi takes only values +-1".into());
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    r.error("commutation", e);
                }
            }
            r
        })
        .collect()
}

/// Every fixed scenario, in report order.
pub fn scenarios(tol: Tolerance) -> Vec<Report> {
    let mut out = pentagon_scenarios();
    out.extend(skew_scenarios(tol));
    out.extend(torus_scenarios(tol));
    out.extend(crossed_scenarios(tol));
    out.extend(cocycle_scenarios(tol));
    out.extend(module_scenarios(tol));
    out.extend(commutation_scenarios(tol));
    out
}

pub fn run(cfg: SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let tol = Tolerance::default();
    let specs = generate(cfg)?;
    let instances = par_map(specs.len(), |i| evaluate(i, &specs[i].0, &specs[i].1));

    // Witness independence on the largest instances with nontrivial χ.
    let mut chosen: Vec<&InstanceOutcome> = instances
        .iter()
        .filter(|i| i.spec.bicharacter.iter().flatten().any(|&e| e != 0))
        .collect();
    chosen.sort_by_key(|i| (std::cmp::Reverse(i.dim_c * i.dim_d), i.index));
    chosen.truncate(WITNESS_INSTANCES);
    chosen.sort_by_key(|i| i.index);
    let witness_checks = par_map(chosen.len(), |k| {
        witness_check(chosen[k].index, &chosen[k].spec)
    });

    let scenarios = scenarios(tol);
    let mut failures: Vec<String> = instances
        .iter()
        .filter(|i| !i.pass)
        .map(|i| {
            format!(
                "instance {} ({}): {}",
                i.index,
                i.label,
                i.failed.join(", ")
            )
        })
        .collect();
    failures.extend(
        witness_checks
            .iter()
            .filter(|w| !w.pass)
            .map(|w| format!("witness independence on instance {}", w.instance)),
    );
    failures.extend(
        scenarios
            .iter()
            .filter(|r| !r.pass())
            .map(|r| format!("{}: {}", r.name, r.failed_verdicts().join(", "))),
    );
    Ok(SuiteReport {
        seed: cfg.seed,
        max_order: cfg.max_order,
        tolerances: tol,
        pass: failures.is_empty(),
        instances,
        witness_checks,
        scenarios,
        failures,
    })
}

//! The acceptance criteria, one line each. Run with `--nocapture` to see the
//! table; the test fails if any line is FAIL.

use std::time::{Duration, Instant};

use qtwist_core::matspan::CMatrix;
use qtwist_core::report::Report;
use qtwist_core::suite::{self, SuiteConfig, SuiteReport};

const PENTAGON_TOL: f64 = 1e-10;
const PENTAGON_BUDGET: Duration = Duration::from_secs(5);
const SKEW_TOL: f64 = 1e-10;
const DIMENSION_EPS_RANK: f64 = 1e-9;
const MIN_DIMENSION_INSTANCES: usize = 20;
const MAX_GROUP_ORDER: usize = 4;
const MAX_ALGEBRA_DIM: usize = 8;
const MIN_WITNESS_INSTANCES: usize = 5;
const WITNESS_TOL: f64 = 1e-8;
const RIEFFEL_STRUCTURE_TOL: f64 = 1e-10;
const RIEFFEL_ASSOCIATIVITY_TOL: f64 = 1e-12;
const TORUS_BUDGET: Duration = Duration::from_secs(10);
const MIN_INNER_INSTANCES: usize = 3;
const MIN_MODULE_INSTANCES: usize = 2;
const COMMUTATION_TOL: f64 = 1e-12;
const NEGATIVE_CONTROL_FLOOR: f64 = 0.1;
const SUITE_BUDGET: Duration = Duration::from_secs(60);

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn line(id: &'static str, pass: bool, detail: impl Into<String>) -> Line {
    Line {
        id,
        pass,
        detail: detail.into(),
    }
}

fn named<'a>(reports: &'a [Report], prefix: &str) -> Vec<&'a Report> {
    reports
        .iter()
        .filter(|r| r.name.starts_with(prefix))
        .collect()
}

fn max_residual(r: &Report) -> f64 {
    r.residuals.values().copied().fold(0.0, f64::max)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pentagon(reports: &[Report], elapsed: Duration) -> Line {
    let worst = reports.iter().map(max_residual).fold(0.0, f64::max);
    let groups: Vec<String> = reports.iter().map(|r| r.inputs["G"].to_string()).collect();
    let pass = reports.len() == 6
        && reports.iter().all(Report::pass)
        && worst < PENTAGON_TOL
        && elapsed < PENTAGON_BUDGET;
    line(
        "1 pentagon and axioms",
        pass,
        format!(
            "groups {}, max residual {worst:.1e}, {elapsed:.2?}",
            groups.join(" ")
        ),
    )
}

fn matrix(r: &Report, key: &str) -> CMatrix {
    CMatrix::from_pairs(&r.matrices[key]).expect("report matrices are rectangular")
}

fn skew(reports: &[Report]) -> Line {
    let Some(r) = reports.iter().find(|r| r.name == "skew") else {
        return line("2 M2 golden example", false, "missing report");
    };
    let (g1, g2) = (matrix(r, "g1"), matrix(r, "g2"));
    let one = CMatrix::identity(2);
    let anti = (&(&g1 * &g2) + &(&g2 * &g1)).norm();
    let involution = [&g1, &g2]
        .iter()
        .map(|g| g.distance(&g.adjoint()).max((*g * *g).distance(&one)))
        .fold(0.0, f64::max);
    let pass = r.dims["boxtimes"] == 4
        && r.dims["center"] == 1
        && anti < SKEW_TOL
        && involution < SKEW_TOL
        && r.verdicts["isomorphic_to_m2"]
        && r.pass();
    line(
        "2 M2 golden example",
        pass,
        format!(
            "dim {}, center {}, anticommutator {anti:.1e}, involution {involution:.1e}, M2 iso {}",
            r.dims["boxtimes"], r.dims["center"], r.verdicts["isomorphic_to_m2"]
        ),
    )
}

fn dimension_law(s: &SuiteReport) -> Line {
    let eligible: Vec<_> = s
        .instances
        .iter()
        .filter(|i| {
            let order = |c: &[usize]| c.iter().product::<usize>();
            order(&i.spec.groups.g) <= MAX_GROUP_ORDER
                && order(&i.spec.groups.h) <= MAX_GROUP_ORDER
                && i.dim_c <= MAX_ALGEBRA_DIM
                && i.dim_d <= MAX_ALGEBRA_DIM
        })
        .collect();
    let holds = eligible
        .iter()
        .filter(|i| i.dim_heisenberg == i.dim_c * i.dim_d && i.dim_covariant == i.dim_c * i.dim_d)
        .count();
    let pass = s.tolerances.eps_rank == DIMENSION_EPS_RANK
        && eligible.len() >= MIN_DIMENSION_INSTANCES
        && holds == eligible.len();
    line(
        "3 dimension law",
        pass,
        format!(
            "{holds}/{} instances, eps_rank {:e}",
            eligible.len(),
            s.tolerances.eps_rank
        ),
    )
}

fn witnesses(s: &SuiteReport) -> Line {
    let worst = s
        .witness_checks
        .iter()
        .flat_map(|w| w.pairs.iter().map(|p| p.2))
        .fold(
            0.0,
            |m: f64, r| if r.is_nan() { f64::INFINITY } else { m.max(r) },
        );
    let complete = s.witness_checks.iter().all(|w| {
        let k = w.witnesses.len();
        k >= 3 && w.pairs.len() == k * (k - 1) / 2
    });
    let pass = s.witness_checks.len() >= MIN_WITNESS_INSTANCES
        && complete
        && s.witness_checks.iter().all(|w| w.pass)
        && worst < WITNESS_TOL;
    line(
        "4 Heisenberg-pair independence",
        pass,
        format!(
            "{} instances, witnesses {:?}, max multiplicativity {worst:.1e}",
            s.witness_checks.len(),
            s.witness_checks
                .first()
                .map(|w| w.witnesses.clone())
                .unwrap_or_default()
        ),
    )
}

fn two_routes(s: &SuiteReport) -> Line {
    let ok = s.instances.iter().filter(|i| i.routes_equivalent).count();
    let worst = s
        .instances
        .iter()
        .map(|i| i.routes_multiplicativity)
        .fold(0.0, f64::max);
    line(
        "5 two-route agreement",
        ok == s.instances.len() && !s.instances.is_empty(),
        format!(
            "{ok}/{} instances, max multiplicativity {worst:.1e}",
            s.instances.len()
        ),
    )
}

fn rieffel(s: &SuiteReport) -> Line {
    let structure = s
        .instances
        .iter()
        .map(|i| i.rieffel_structure)
        .fold(0.0, f64::max);
    let assoc = s
        .instances
        .iter()
        .map(|i| i.rieffel_associativity)
        .fold(0.0, f64::max);
    line(
        "6 Rieffel identification",
        !s.instances.is_empty()
            && structure < RIEFFEL_STRUCTURE_TOL
            && assoc < RIEFFEL_ASSOCIATIVITY_TOL,
        format!(
            "{} instances, structure {structure:.1e}, associativity {assoc:.1e}",
            s.instances.len()
        ),
    )
}

fn torus(reports: &[Report], elapsed: Duration) -> Line {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 2..=6usize {
        for k in 0..n {
            count += 1;
            let name = format!("torus n={n} k={k}");
            let Some(r) = reports
                .iter()
                .find(|r| r.inputs["n"] == n && r.inputs["k"] == k)
            else {
                bad.push(format!("{name} missing"));
                continue;
            };
            let g = gcd(k, n);
            let mut ok = r.pass() && r.dims["dim"] == n * n && r.dims["center_dim"] == g * g;
            if g == 1 {
                ok &= r.verdicts.get("isomorphic_to_matrix_algebra") == Some(&true);
            }
            if !ok {
                bad.push(name);
            }
        }
    }
    line(
        "7 finite torus classification",
        bad.is_empty() && count == 20 && elapsed < TORUS_BUDGET,
        format!("{count} cases, failures {bad:?}, {elapsed:.2?}"),
    )
}

fn crossed(reports: &[Report]) -> Line {
    let reduced = named(reports, "crossed ");
    let dims_ok = reduced.iter().all(|r| {
        let dims: usize = r.inputs["component_dims"]
            .as_array()
            .map(|a| a.iter().filter_map(|x| x.as_u64()).sum::<u64>() as usize)
            .unwrap_or(0);
        let order: usize = r.inputs["group"]
            .as_array()
            .map(|a| a.iter().filter_map(|x| x.as_u64()).product::<u64>() as usize)
            .unwrap_or(0);
        r.dims["dim"] == dims * order
    });
    let equivalent = reduced
        .iter()
        .all(|r| r.verdicts.get("boxtimes_equivalent") == Some(&true));
    let dual = reduced
        .iter()
        .all(|r| r.verdicts.get("dual_coaction.coaction_axioms") == Some(&true));
    let full = named(reports, "group algebra crossed");
    let full_ok = full.iter().all(|r| {
        r.verdicts.get("isomorphic_to_full_matrices") == Some(&true)
            && r.dims["dim"] == r.dims["matrix_size"].pow(2)
    });
    let embed = named(reports, "embed in reduced");
    let all_pass = reduced.iter().chain(&full).chain(&embed).all(|r| r.pass());
    line(
        "8 crossed products",
        reduced.len() >= 3 && full.len() >= 3 && dims_ok && equivalent && dual && full_ok && all_pass,
        format!(
            "{} reduced (dim law {dims_ok}, span equivalence {equivalent}, dual coaction {dual}), {} C*(G) x G^ = M_|G| {full_ok}, {} embeddings",
            reduced.len(),
            full.len(),
            embed.len()
        ),
    )
}

fn cocycles(reports: &[Report]) -> Line {
    let inner: Vec<_> = reports
        .iter()
        .filter(|r| r.verdicts.contains_key("isomorphic_to_tensor"))
        .collect();
    let inner_ok = inner.iter().all(|r| r.verdicts["isomorphic_to_tensor"]);
    let compact = reports.iter().find(|r| r.name == "compact operators");
    let compact_ok =
        compact.is_some_and(|r| r.pass() && r.dims["twisted"] == 16 && r.dims["center_dim"] == 1);
    let conj: Vec<_> = named(reports, "cocycle ");
    let conj_ok = conj
        .iter()
        .filter(|r| r.verdicts.get("density") == Some(&true))
        .all(|r| r.verdicts["isomorphic"]);
    line(
        "9 cocycle theorems",
        inner.len() >= MIN_INNER_INSTANCES && inner_ok && compact_ok && !conj.is_empty() && conj_ok,
        format!(
            "{} inner instances iso to tensor {inner_ok}, K(C2) x K(C2) = M4 {compact_ok}, {} cocycle twists iso {conj_ok}",
            inner.len(),
            conj.len()
        ),
    )
}

fn modules(reports: &[Report]) -> Line {
    let m = named(reports, "modules ");
    let compact = m
        .iter()
        .all(|r| r.verdicts.get("compact_iso") == Some(&true) && r.pass());
    let comp = reports
        .iter()
        .find(|r| r.name == "composition")
        .is_some_and(Report::pass);
    line(
        "10 Hilbert modules",
        m.len() >= MIN_MODULE_INSTANCES && compact && comp,
        format!(
            "{} module instances K(E x F) = K(E) x K(F) {compact}, composition {comp}",
            m.len()
        ),
    )
}

/// The negative control needs a value of `χ` outside `{±1}`: for `χ² = 1`
/// a Heisenberg pair is also anti-Heisenberg and the commutator vanishes.
fn commutation(reports: &[Report]) -> Line {
    let rs = named(reports, "commutation ");
    let worst_pos = rs
        .iter()
        .map(|r| {
            r.residuals
                .get("heisenberg_with_conjugate")
                .copied()
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    let controls: Vec<(String, f64)> = rs
        .iter()
        .filter(|r| {
            let cycles: Vec<u64> = r.inputs["G"]
                .as_array()
                .map(|a| a.iter().filter_map(|x| x.as_u64()).collect())
                .unwrap_or_default();
            cycles.iter().any(|&n| n > 2)
        })
        .map(|r| (r.name.clone(), r.residuals["heisenberg_with_itself"]))
        .collect();
    let neg_ok = !controls.is_empty() && controls.iter().all(|c| c.1 > NEGATIVE_CONTROL_FLOOR);
    let min_neg = controls.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    line(
        "11 commutation theorem",
        rs.len() >= 4 && worst_pos < COMMUTATION_TOL && neg_ok,
        format!(
            "conjugate pair residual {worst_pos:.1e}; negative control min {min_neg:.2} over {} chi with values outside +-1 (chi^2 = 1 cases excluded)",
            controls.len()
        ),
    )
}

#[test]
fn acceptance() {
    let t = Instant::now();
    let pent = suite::pentagon_scenarios();
    let pent_time = t.elapsed();

    let tol = qtwist_core::matspan::Tolerance::default();
    let t = Instant::now();
    let tori = suite::torus_scenarios(tol);
    let torus_time = t.elapsed();

    let t = Instant::now();
    let report = suite::run(SuiteConfig::default()).expect("default config is valid");
    let suite_time = t.elapsed();

    let lines = [
        pentagon(&pent, pent_time),
        skew(&report.scenarios),
        dimension_law(&report),
        witnesses(&report),
        two_routes(&report),
        rieffel(&report),
        torus(&tori, torus_time),
        crossed(&report.scenarios),
        cocycles(&report.scenarios),
        modules(&report.scenarios),
        commutation(&report.scenarios),
        line(
            "suite runtime",
            report.pass && suite_time < SUITE_BUDGET,
            format!(
                "{suite_time:.1?} for {} instances and {} scenarios, {} failures",
                report.instances.len(),
                report.scenarios.len(),
                report.failures.len()
            ),
        ),
    ];
    for l in &lines {
        println!(
            "{} criterion {}: {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.detail
        );
    }
    let failed: Vec<_> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}

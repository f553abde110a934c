//! Construction specs: the JSON input of `qtwist verify`, and the battery of
//! checks run on them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::{Bicharacter, FinAbGroup};
use crate::apps::rieffel_twist_compare;
use crate::boxtimes::{
    build_via_covariant, build_via_heisenberg, equivalent, podles_span_check, BoxError,
    CrossedProduct,
};
use crate::coact::{canonical_covariant_rep, grading_to_coaction, verify_coaction, GradedAlgebra};
use crate::heis::{canonical_heisenberg, composite_heisenberg, is_heisenberg, RepPair};
use crate::matspan::{CMatrix, Tolerance};
use crate::qgroup::{bicharacter_matrix, build, verify_bicharacter_equations};
use crate::report::Report;

/// Largest amplification factor accepted for the witness pair.
pub const MAX_AMPLIFICATION: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupsSpec {
    #[serde(rename = "G")]
    pub g: Vec<usize>,
    #[serde(rename = "H")]
    pub h: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    /// Residues of the degree in the group's cycles.
    pub degree: Vec<i64>,
    /// Matrices as rows of `[re, im]` pairs.
    pub basis: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum AlgebraSpec {
    GroupAlgebra,
    FunctionAlgebra,
    /// Either explicit homogeneous `components`, or `vector_degrees` for
    /// `End(V)` with `V` graded basis-wise.
    Matrix {
        size: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        components: Vec<ComponentSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vector_degrees: Option<Vec<Vec<i64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteChoice {
    Heisenberg,
    Covariant,
}

fn default_witness() -> String {
    "canonical".into()
}

fn default_routes() -> Vec<RouteChoice> {
    vec![RouteChoice::Heisenberg, RouteChoice::Covariant]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Tolerance>,
    /// `canonical`, `composite` or `amplified:<k>`.
    #[serde(default = "default_witness")]
    pub witness: String,
    #[serde(default = "default_routes")]
    pub routes: Vec<RouteChoice>,
}

impl Default for OptionsSpec {
    fn default() -> Self {
        Self {
            tolerance: None,
            witness: default_witness(),
            routes: default_routes(),
        }
    }
}

/// Multiplies the single value `χ(g,h)` by `e^{i·phase}` in the matrix
/// handed to the bicharacter-equation check. Used to exercise failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub g: Vec<i64>,
    pub h: Vec<i64>,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionSpec {
    pub groups: GroupsSpec,
    /// Exponent matrix, `rank G × rank H`.
    pub bicharacter: Vec<Vec<usize>>,
    #[serde(rename = "C")]
    pub c: AlgebraSpec,
    #[serde(rename = "D")]
    pub d: AlgebraSpec,
    #[serde(default)]
    pub options: OptionsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecErrorKind {
    Syntax,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("line {line}, column {column}: {message}")]
pub struct SpecError {
    pub kind: SpecErrorKind,
    pub line: usize,
    pub column: usize,
    /// Dotted path of the offending field, empty for syntax errors.
    pub path: String,
    pub message: String,
}

/// A spec with every group, bicharacter and algebra constructed.
#[derive(Debug, Clone)]
pub struct ResolvedSpec {
    pub spec: ConstructionSpec,
    pub g: FinAbGroup,
    pub h: FinAbGroup,
    pub chi: Bicharacter,
    pub c: GradedAlgebra,
    pub d: GradedAlgebra,
    pub pair: RepPair,
    pub tol: Tolerance,
}

/// Line and column (1-based) of the last key of `path` in `text`, found by
/// following the keys in order.
fn locate(text: &str, path: &[&str]) -> (usize, usize) {
    let mut pos = 0;
    for key in path {
        if key.parse::<usize>().is_ok() {
            continue;
        }
        if let Some(off) = text[pos..].find(&format!("\"{key}\"")) {
            pos += off;
        }
    }
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn invalid(&self, path: &[&str], message: impl std::fmt::Display) -> SpecError {
        let (line, column) = locate(self.text, path);
        SpecError {
            kind: SpecErrorKind::Invalid,
            line,
            column,
            path: path.join("."),
            message: message.to_string(),
        }
    }
}

fn element_index(
    ctx: &Ctx,
    group: &FinAbGroup,
    residues: &[i64],
    path: &[&str],
) -> Result<usize, SpecError> {
    group
        .element(residues)
        .map(|e| group.index_of(&e))
        .map_err(|e| ctx.invalid(path, e))
}

fn resolve_algebra(
    ctx: &Ctx,
    name: &str,
    spec: &AlgebraSpec,
    group: &FinAbGroup,
    tol: Tolerance,
) -> Result<GradedAlgebra, SpecError> {
    let built = match spec {
        AlgebraSpec::GroupAlgebra => GradedAlgebra::group_algebra(group, tol),
        AlgebraSpec::FunctionAlgebra => GradedAlgebra::function_algebra(group, tol),
        AlgebraSpec::Matrix {
            size,
            components,
            vector_degrees,
        } => {
            if *size == 0 {
                return Err(ctx.invalid(&[name, "size"], "size must be positive"));
            }
            match (components.is_empty(), vector_degrees) {
                (true, Some(vd)) => {
                    if vd.len() != *size {
                        return Err(ctx.invalid(
                            &[name, "vector_degrees"],
                            format!("expected {size} degrees, found {}", vd.len()),
                        ));
                    }
                    let mut degrees = Vec::with_capacity(vd.len());
                    for r in vd {
                        degrees.push(element_index(ctx, group, r, &[name, "vector_degrees"])?);
                    }
                    GradedAlgebra::graded_full_matrix(group, &degrees, tol)
                }
                (false, None) => {
                    let mut parts = Vec::with_capacity(components.len());
                    for (i, comp) in components.iter().enumerate() {
                        let idx = i.to_string();
                        let g = element_index(
                            ctx,
                            group,
                            &comp.degree,
                            &[name, "components", &idx, "degree"],
                        )?;
                        let mut mats = Vec::with_capacity(comp.basis.len());
                        for rows in &comp.basis {
                            let m = CMatrix::from_pairs(rows).map_err(|e| {
                                ctx.invalid(&[name, "components", &idx, "basis"], e)
                            })?;
                            if m.shape() != (*size, *size) {
                                return Err(ctx.invalid(
                                    &[name, "components", &idx, "basis"],
                                    format!(
                                        "matrix has shape {:?}, expected {size}x{size}",
                                        m.shape()
                                    ),
                                ));
                            }
                            mats.push(m);
                        }
                        parts.push((g, mats));
                    }
                    GradedAlgebra::new(group.clone(), *size, parts, tol)
                }
                _ => {
                    return Err(ctx.invalid(
                        &[name],
                        "matrix preset needs exactly one of `components` or `vector_degrees`",
                    ))
                }
            }
        }
    };
    built.map_err(|e| ctx.invalid(&[name], e))
}

fn witness_pair(ctx: &Ctx, witness: &str, chi: &Bicharacter) -> Result<RepPair, SpecError> {
    let path = ["options", "witness"];
    match witness {
        "canonical" => Ok(canonical_heisenberg(chi)),
        "composite" => Ok(composite_heisenberg(chi)),
        other => {
            let k = other
                .strip_prefix("amplified:")
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| ctx.invalid(&path, format!("unknown witness `{other}`")))?;
            if k == 0 || k > MAX_AMPLIFICATION {
                return Err(ctx.invalid(
                    &path,
                    format!("amplification must be in 1..={MAX_AMPLIFICATION}"),
                ));
            }
            Ok(canonical_heisenberg(chi).amplified(k))
        }
    }
}

impl ConstructionSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError {
            kind: SpecErrorKind::Syntax,
            line: e.line(),
            column: e.column(),
            path: String::new(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }
}

/// Parses and constructs everything; `tolerance` overrides the spec's `eps_eq`.
pub fn resolve(text: &str, tolerance: Option<f64>) -> Result<ResolvedSpec, SpecError> {
    let spec = ConstructionSpec::parse(text)?;
    let ctx = Ctx { text };
    let mut tol = spec.options.tolerance.unwrap_or_default();
    if let Some(t) = tolerance {
        tol.eps_eq = t;
    }
    let tol = Tolerance::new(tol.eps_rank, tol.eps_eq)
        .map_err(|e| ctx.invalid(&["options", "tolerance"], e))?;
    let g = FinAbGroup::new(spec.groups.g.clone()).map_err(|e| ctx.invalid(&["groups", "G"], e))?;
    let h = FinAbGroup::new(spec.groups.h.clone()).map_err(|e| ctx.invalid(&["groups", "H"], e))?;
    let chi = Bicharacter::new(g.clone(), h.clone(), spec.bicharacter.clone())
        .map_err(|e| ctx.invalid(&["bicharacter"], e))?;
    let c = resolve_algebra(&ctx, "C", &spec.c, &g, tol)?;
    let d = resolve_algebra(&ctx, "D", &spec.d, &h, tol)?;
    let pair = witness_pair(&ctx, &spec.options.witness, &chi)?;
    if let Some(p) = &spec.perturbation {
        element_index(&ctx, &g, &p.g, &["perturbation", "g"])?;
        element_index(&ctx, &h, &p.h, &["perturbation", "h"])?;
    }
    Ok(ResolvedSpec {
        spec,
        g,
        h,
        chi,
        c,
        d,
        pair,
        tol,
    })
}

impl ResolvedSpec {
    fn chi_matrix(&self) -> CMatrix {
        let mut m = bicharacter_matrix(&self.chi);
        if let Some(p) = &self.spec.perturbation {
            let a = self
                .g
                .index_of(&self.g.element(&p.g).expect("checked in resolve"));
            let b = self
                .h
                .index_of(&self.h.element(&p.h).expect("checked in resolve"));
            let i = a * self.h.order() + b;
            let z = m.get(i, i) * num_complex::Complex64::from_polar(1.0, p.phase);
            m.set(i, i, z);
        }
        m
    }
}

fn record_crossed(r: &mut Report, key: &str, x: &CrossedProduct) {
    let rep = x.report();
    r.dim(format!("{key}.dim"), rep.dim)
        .dim(format!("{key}.expected_dim"), rep.expected_dim)
        .residual(format!("{key}.commutation"), rep.commutation_residual)
        .residual(format!("{key}.iota_c"), rep.iota_c_residual)
        .residual(format!("{key}.iota_d"), rep.iota_d_residual)
        .verdict(format!("{key}.certified"), rep.pass)
        .verdict(format!("{key}.dimension_law"), rep.dim == rep.expected_dim);
}

/// Coaction axioms, Heisenberg certification, both routes, their
/// equivalence, the dimension law, the Podleś span and the Rieffel
/// comparison. Failures become false verdicts; nothing panics.
pub fn verify(s: &ResolvedSpec) -> Report {
    let tol = s.tol;
    let inputs = serde_json::to_value(&s.spec).expect("specs serialize");
    let mut r = Report::new("verify", inputs, tol);
    r.witness = s.pair.witness().label();

    for (key, group) in [("qgroup_G", &s.g), ("qgroup_H", &s.h)] {
        match build(group, tol) {
            Ok(m) => {
                r.residual(format!("{key}.pentagon"), m.certificate().pentagon)
                    .verdict(key, true);
            }
            Err(e) => {
                r.error(key, e);
            }
        }
    }
    match (build(&s.g, tol), build(&s.h, tol)) {
        (Ok(mg), Ok(mh)) => match verify_bicharacter_equations(&mg, &mh, &s.chi_matrix(), tol) {
            Ok(b) => {
                r.residual("bicharacter.first_leg", b.first_leg)
                    .residual("bicharacter.second_leg", b.second_leg)
                    .verdict("bicharacter_equations", b.pass);
            }
            Err(e) => {
                r.error("bicharacter_equations", e);
            }
        },
        _ => {
            r.error("bicharacter_equations", "quantum group models unavailable");
        }
    }

    for (key, a) in [("coaction_C", &s.c), ("coaction_D", &s.d)] {
        let c = verify_coaction(&grading_to_coaction(a), tol);
        r.dim(format!("{key}.podles_dim"), c.podles_dim)
            .residual(format!("{key}.comodule"), c.comodule_residual)
            .verdict(key, c.pass);
    }

    match is_heisenberg(&s.pair, &s.chi, tol) {
        Ok(h) => {
            r.residual("heisenberg", h.residual)
                .verdict("heisenberg", h.pass);
        }
        Err(e) => {
            r.error("heisenberg", e);
        }
    }

    let wants = |x: RouteChoice| s.spec.options.routes.contains(&x);
    let heis = wants(RouteChoice::Heisenberg)
        .then(|| build_via_heisenberg(&s.c, &s.d, &s.chi, &s.pair, tol));
    let heis = match heis {
        Some(Ok(x)) => {
            record_crossed(&mut r, "heisenberg_route", &x);
            Some(x)
        }
        Some(Err(e)) => {
            r.error("heisenberg_route", e);
            None
        }
        None => None,
    };
    let cov = wants(RouteChoice::Covariant).then(|| -> Result<CrossedProduct, BoxError> {
        let pc = canonical_covariant_rep(&s.c, tol)?;
        let pd = canonical_covariant_rep(&s.d, tol)?;
        build_via_covariant(&pc, &pd, &s.chi, tol)
    });
    let cov = match cov {
        Some(Ok(x)) => {
            record_crossed(&mut r, "covariant_route", &x);
            Some(x)
        }
        Some(Err(e)) => {
            r.error("covariant_route", e);
            None
        }
        None => None,
    };
    r.iso_found = heis.is_some() || cov.is_some();
    if let (Some(a), Some(b)) = (&heis, &cov) {
        let e = equivalent(a, b, tol);
        r.residual("routes.multiplicativity", e.multiplicativity_residual)
            .verdict("routes_equivalent", e.found());
        r.iso_found = e.found();
    }
    if let Some(x) = &heis {
        match podles_span_check(x, tol) {
            Ok(p) => {
                r.dim("podles.dim", p.dim)
                    .dim("podles.expected", p.expected)
                    .verdict("podles_span", p.equal);
            }
            Err(BoxError::TooLarge { needed, cap, .. }) => {
                r.errors.push(format!(
                    "podles_span: skipped, needs {needed} entries (cap {cap})"
                ));
            }
            Err(e) => {
                r.error("podles_span", e);
            }
        }
        r.structure_constants = Some(crate::report::triplets(&x.structure_constants()));
    }
    match rieffel_twist_compare(&s.c, &s.d, &s.chi, tol) {
        Ok(cmp) => {
            r.residual("rieffel.structure_constants", cmp.structure_residual)
                .residual("rieffel.star", cmp.star_residual)
                .residual("rieffel.associativity", cmp.associativity_residual)
                .residual("rieffel.psi_cocycle", cmp.psi_residual)
                .verdict(
                    "rieffel",
                    cmp.iso_found && cmp.associativity_residual < tol.eps_eq,
                );
        }
        Err(e) => {
            r.error("rieffel", e);
        }
    }
    r.iso_found = r.iso_found && r.pass();
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    const M2: &str = r#"{
  "groups": {"G": [2], "H": [2]},
  "bicharacter": [[1]],
  "C": {"preset": "group_algebra"},
  "D": {"preset": "group_algebra"}
}"#;

    #[test]
    fn m2_spec_passes() {
        let s = resolve(M2, None).unwrap();
        let r = verify(&s);
        assert!(r.pass(), "{:?} {:?}", r.failed_verdicts(), r.errors);
        assert!(r.iso_found);
        assert_eq!(r.dims["heisenberg_route.dim"], 4);
    }

    #[test]
    fn perturbed_bicharacter_fails() {
        let text = M2.replace(
            "\"D\": {\"preset\": \"group_algebra\"}",
            "\"D\": {\"preset\": \"group_algebra\"},\n  \"perturbation\": {\"g\": [1], \"h\": [1], \"phase\": 0.1}",
        );
        let r = verify(&resolve(&text, None).unwrap());
        assert!(!r.pass());
        assert!(!r.verdicts["bicharacter_equations"]);
        assert!(r.residuals["bicharacter.first_leg"] > 0.05);
    }

    #[test]
    fn syntax_error_has_position() {
        let e = resolve("{\n  \"groups\": {\"G\": [2],, }\n}", None).unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::Syntax);
        assert_eq!(e.line, 2);
    }

    #[test]
    fn invalid_field_is_located() {
        let text = M2.replace("[[1]]", "[[5]]");
        let e = resolve(&text, None).unwrap_err();
        assert_eq!(e.kind, SpecErrorKind::Invalid);
        assert_eq!((e.line, e.path.as_str()), (3, "bicharacter"));
        let text = M2.replace(
            "\"D\": {\"preset\": \"group_algebra\"}",
            "\"D\": {\"preset\": \"matrix\", \"size\": 2}",
        );
        let e = resolve(&text, None).unwrap_err();
        assert_eq!(e.line, 5);
    }

    #[test]
    fn matrix_components_and_witness() {
        let text = r#"{
  "groups": {"G": [2], "H": [3]},
  "bicharacter": [[0]],
  "C": {"preset": "matrix", "size": 2, "components": [
    {"degree": [0], "basis": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]]},
    {"degree": [1], "basis": [[[[0,0],[1,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[1,0],[0,0]]]]}
  ]},
  "D": {"preset": "function_algebra"},
  "options": {"witness": "amplified:2"}
}"#;
        let s = resolve(text, None).unwrap();
        assert_eq!(s.c.component_dims(), vec![2, 2]);
        let r = verify(&s);
        assert!(r.pass(), "{:?} {:?}", r.failed_verdicts(), r.errors);
        assert_eq!(r.witness, "amplified_x2");
    }

    #[test]
    fn round_trip() {
        let s = ConstructionSpec::parse(M2).unwrap();
        assert_eq!(ConstructionSpec::parse(&s.to_json()).unwrap(), s);
    }
}

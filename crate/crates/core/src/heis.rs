//! Heisenberg and anti-Heisenberg pairs.
//!
//! A pair `(U, V)` of unitary representations of `G` and `H` on one space is
//! χ-Heisenberg when `U_g V_h = χ(g,h) V_h U_g`, and χ-anti-Heisenberg when
//! `V_h U_g = χ(g,h) U_g V_h`. The scalar lands on the `V`-then-`U` side in
//! the Heisenberg relation; every module uses this orientation.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::abgroup::{Bicharacter, FinAbGroup};
use crate::matspan::legs::embed;
use crate::matspan::{CMatrix, Tolerance};
use crate::qgroup::{bicharacter_matrix, indicator, translation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeisError {
    #[error("expected {expected} operators, found {found}")]
    Count { expected: usize, found: usize },
    #[error("operators must all be {0}x{0}")]
    Shape(usize),
    #[error("operator for element {index} is not unitary (residual {residual:.3e})")]
    NotUnitary { index: usize, residual: f64 },
    #[error("not a representation (residual {residual:.3e})")]
    NotRepresentation { residual: f64 },
    #[error("pair groups do not match the bicharacter")]
    GroupMismatch,
}

/// Which construction produced a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Canonical,
    Composite,
    Amplified { factor: usize },
    Conjugate(Box<Witness>),
    Swapped(Box<Witness>),
    Custom,
}

impl Witness {
    pub fn label(&self) -> String {
        match self {
            Witness::Canonical => "canonical".into(),
            Witness::Composite => "composite".into(),
            Witness::Amplified { factor } => format!("amplified_x{factor}"),
            Witness::Conjugate(w) => format!("conjugate({})", w.label()),
            Witness::Swapped(w) => format!("swapped({})", w.label()),
            Witness::Custom => "custom".into(),
        }
    }
}

/// Representations `U` of `G` and `V` of `H` on `C^space_dim`, indexed by
/// the lexicographic positions of group elements.
#[derive(Debug, Clone)]
pub struct RepPair {
    g: FinAbGroup,
    h: FinAbGroup,
    space_dim: usize,
    u: Vec<CMatrix>,
    v: Vec<CMatrix>,
    witness: Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationCheck {
    pub pass: bool,
    pub residual: f64,
}

fn check_rep(
    group: &FinAbGroup,
    ops: &[CMatrix],
    dim: usize,
    tol: Tolerance,
) -> Result<(), HeisError> {
    if ops.len() != group.order() {
        return Err(HeisError::Count {
            expected: group.order(),
            found: ops.len(),
        });
    }
    for (index, x) in ops.iter().enumerate() {
        if x.shape() != (dim, dim) {
            return Err(HeisError::Shape(dim));
        }
        let residual = x.unitarity_residual();
        if residual >= tol.eps_eq {
            return Err(HeisError::NotUnitary { index, residual });
        }
    }
    let mut worst = ops[0].distance(&CMatrix::identity(dim));
    for gen in group.generators() {
        let gi = group.index_of(&gen);
        for (k, e) in group.elements().iter().enumerate() {
            let sum = group.index_of(&group.add(&gen, e));
            worst = worst.max((&ops[gi] * &ops[k]).distance(&ops[sum]));
        }
    }
    if worst >= tol.eps_eq {
        return Err(HeisError::NotRepresentation { residual: worst });
    }
    Ok(())
}

impl RepPair {
    pub fn new(
        g: FinAbGroup,
        h: FinAbGroup,
        u: Vec<CMatrix>,
        v: Vec<CMatrix>,
        tol: Tolerance,
    ) -> Result<Self, HeisError> {
        let space_dim = u.first().or(v.first()).map_or(1, CMatrix::rows);
        check_rep(&g, &u, space_dim, tol)?;
        check_rep(&h, &v, space_dim, tol)?;
        Ok(Self {
            g,
            h,
            space_dim,
            u,
            v,
            witness: Witness::Custom,
        })
    }

    pub fn left_group(&self) -> &FinAbGroup {
        &self.g
    }

    pub fn right_group(&self) -> &FinAbGroup {
        &self.h
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn u(&self, g: usize) -> &CMatrix {
        &self.u[g]
    }

    pub fn v(&self, h: usize) -> &CMatrix {
        &self.v[h]
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    /// Generator pairs `(g, h)` as lexicographic indices.
    fn generator_pairs(&self) -> Vec<(usize, usize)> {
        let gs: Vec<usize> = self
            .g
            .generators()
            .iter()
            .map(|e| self.g.index_of(e))
            .collect();
        let hs: Vec<usize> = self
            .h
            .generators()
            .iter()
            .map(|e| self.h.index_of(e))
            .collect();
        gs.iter()
            .flat_map(|&a| hs.iter().map(move |&b| (a, b)))
            .collect()
    }

    /// `(V, U)` as a pair of representations of `H` and `G`.
    pub fn swapped(&self) -> RepPair {
        RepPair {
            g: self.h.clone(),
            h: self.g.clone(),
            space_dim: self.space_dim,
            u: self.v.clone(),
            v: self.u.clone(),
            witness: Witness::Swapped(Box::new(self.witness.clone())),
        }
    }

    /// `(U ⊗ 1_k, V ⊗ 1_k)`.
    pub fn amplified(&self, k: usize) -> RepPair {
        let id = CMatrix::identity(k);
        RepPair {
            g: self.g.clone(),
            h: self.h.clone(),
            space_dim: self.space_dim * k,
            u: self.u.iter().map(|x| x.kron(&id)).collect(),
            v: self.v.iter().map(|x| x.kron(&id)).collect(),
            witness: Witness::Amplified { factor: k },
        }
    }
}

fn relation(
    p: &RepPair,
    chi: &Bicharacter,
    anti: bool,
    tol: Tolerance,
) -> Result<RelationCheck, HeisError> {
    if chi.left() != &p.g || chi.right() != &p.h {
        return Err(HeisError::GroupMismatch);
    }
    let mut worst: f64 = 0.0;
    for (a, b) in p.generator_pairs() {
        let z = chi.value(&p.g.element_at(a), &p.h.element_at(b));
        let uv = &p.u[a] * &p.v[b];
        let vu = &p.v[b] * &p.u[a];
        let r = if anti {
            vu.distance(&uv.scale(z))
        } else {
            uv.distance(&vu.scale(z))
        };
        worst = worst.max(r);
    }
    Ok(RelationCheck {
        pass: worst < tol.eps_eq,
        residual: worst,
    })
}

/// `‖U_g V_h − χ(g,h) V_h U_g‖` over generator pairs; bilinearity extends
/// the relation to all of `G × H`.
pub fn is_heisenberg(
    p: &RepPair,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<RelationCheck, HeisError> {
    relation(p, chi, false, tol)
}

/// `‖V_h U_g − χ(g,h) U_g V_h‖` over generator pairs.
pub fn is_anti_heisenberg(
    p: &RepPair,
    chi: &Bicharacter,
    tol: Tolerance,
) -> Result<RelationCheck, HeisError> {
    relation(p, chi, true, tol)
}

/// Leg-numbered form `W^G_{1U} W^H_{2V} = W^H_{2V} W^G_{1U} χ₁₂` on
/// `ℓ²(G) ⊗ ℓ²(H) ⊗ K`, with `W^G_{1U} = Σ_g P_g ⊗ 1 ⊗ U_g`.
pub fn operator_form_residual(p: &RepPair, chi: &Bicharacter) -> f64 {
    let (ng, nh, k) = (p.g.order(), p.h.order(), p.space_dim);
    let dims = [ng, nh, k];
    let mut wg = CMatrix::zeros(ng * nh * k, ng * nh * k);
    for a in 0..ng {
        wg += &embed(&indicator(&p.g, a).kron(&p.u[a]), &[1, 3], &dims);
    }
    let mut wh = CMatrix::zeros(ng * nh * k, ng * nh * k);
    for b in 0..nh {
        wh += &embed(&indicator(&p.h, b).kron(&p.v[b]), &[2, 3], &dims);
    }
    let chi12 = bicharacter_matrix(chi).kron(&CMatrix::identity(k));
    (&wg * &wh).distance(&(&(&wh * &wg) * &chi12))
}

/// On `ℓ²(H)`: `U_g = diag(χ(g,k))`, `V_h = λ_h`.
pub fn canonical_heisenberg(chi: &Bicharacter) -> RepPair {
    let (g, h) = (chi.left(), chi.right());
    let hs = h.elements();
    let u = g
        .elements()
        .iter()
        .map(|a| {
            let d: Vec<Complex64> = hs.iter().map(|k| chi.value(a, k)).collect();
            CMatrix::diagonal(&d)
        })
        .collect();
    let v = (0..h.order()).map(|b| translation(h, b)).collect();
    RepPair {
        g: g.clone(),
        h: h.clone(),
        space_dim: h.order(),
        u,
        v,
        witness: Witness::Canonical,
    }
}

/// On `ℓ²(G) ⊗ ℓ²(H)`: `U_g = λ_g ⊗ diag(χ(g,·))`, `V_h = 1 ⊗ λ_h`.
pub fn composite_heisenberg(chi: &Bicharacter) -> RepPair {
    let canonical = canonical_heisenberg(chi);
    let (g, h) = (chi.left(), chi.right());
    let idg = CMatrix::identity(g.order());
    let u = (0..g.order())
        .map(|a| translation(g, a).kron(&canonical.u[a]))
        .collect();
    let v = (0..h.order()).map(|b| idg.kron(&canonical.v[b])).collect();
    RepPair {
        g: g.clone(),
        h: h.clone(),
        space_dim: g.order() * h.order(),
        u,
        v,
        witness: Witness::Composite,
    }
}

/// Entrywise conjugate `Ũ_g = (U_{−g})ᵀ = conj(U_g)`, likewise for `V`.
pub fn conjugate_pair(p: &RepPair) -> RepPair {
    RepPair {
        g: p.g.clone(),
        h: p.h.clone(),
        space_dim: p.space_dim,
        u: p.u.iter().map(CMatrix::conj).collect(),
        v: p.v.iter().map(CMatrix::conj).collect(),
        witness: Witness::Conjugate(Box::new(p.witness.clone())),
    }
}

/// Largest `‖[U_g ⊗ Ũ_g, V_h ⊗ Ṽ_h]‖` over generator pairs.
pub fn commutation_check(first: &RepPair, second: &RepPair) -> Result<f64, HeisError> {
    if first.g != second.g || first.h != second.h {
        return Err(HeisError::GroupMismatch);
    }
    let mut worst: f64 = 0.0;
    for (a, b) in first.generator_pairs() {
        let x = first.u[a].kron(&second.u[a]);
        let y = first.v[b].kron(&second.v[b]);
        worst = worst.max(x.commutator(&y).norm());
    }
    Ok(worst)
}

/// The pair on `ℓ²(G)` formed by translations and the dual characters,
/// `V_k = diag(conj⟨·,k⟩)`; it is Heisenberg for the canonical pairing.
pub fn regular_pair(g: &FinAbGroup) -> RepPair {
    let pairing = Bicharacter::pairing(g);
    let els = g.elements();
    let u = (0..g.order()).map(|a| translation(g, a)).collect();
    let v = els
        .iter()
        .map(|k| {
            let d: Vec<Complex64> = els.iter().map(|x| pairing.value(x, k).conj()).collect();
            CMatrix::diagonal(&d)
        })
        .collect();
    RepPair {
        g: g.clone(),
        h: g.clone(),
        space_dim: g.order(),
        u,
        v,
        witness: Witness::Custom,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspan::pauli::{sigma_x, sigma_z};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn clock_and_shift() {
        for n in 2..=5 {
            let chi = Bicharacter::cyclic(n, 1);
            let p = canonical_heisenberg(&chi);
            // Oracle: U_1 is the clock diag(ζ^k), V_1 the cyclic shift.
            let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU / n as f64);
            let clock = CMatrix::diagonal(&(0..n).map(|k| zeta.powu(k as u32)).collect::<Vec<_>>());
            assert!(p.u(1).distance(&clock) < 1e-12);
            let shift = CMatrix::from_fn(n, n, |i, j| {
                if i == (j + 1) % n {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            assert_eq!(*p.v(1), shift);
            let r = is_heisenberg(&p, &chi, tol()).unwrap();
            assert!(r.pass && r.residual < 1e-12);
            // For n = 2 the values are real and both relations coincide.
            assert_eq!(is_anti_heisenberg(&p, &chi, tol()).unwrap().pass, n == 2);
            assert!(operator_form_residual(&p, &chi) < 1e-12);
        }
    }

    #[test]
    fn z2_weyl_pair() {
        let g = FinAbGroup::cyclic(2);
        let p = RepPair::new(
            g.clone(),
            g.clone(),
            vec![CMatrix::identity(2), sigma_z()],
            vec![CMatrix::identity(2), sigma_x()],
            tol(),
        )
        .unwrap();
        assert!(
            is_heisenberg(&p, &Bicharacter::cyclic(2, 1), tol())
                .unwrap()
                .pass
        );
        assert!(
            !is_heisenberg(&p, &Bicharacter::trivial(&g, &g), tol())
                .unwrap()
                .pass
        );
        let c = canonical_heisenberg(&Bicharacter::cyclic(2, 1));
        assert_eq!(*c.u(1), sigma_z());
        assert_eq!(*c.v(1), sigma_x());
        // Real pair: conjugation changes nothing, and the relation is
        // symmetric because χ = ±1.
        let cc = conjugate_pair(&c);
        assert_eq!(cc.u(1), c.u(1));
        assert!(
            is_anti_heisenberg(&cc, &Bicharacter::cyclic(2, 1), tol())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn trivial_bicharacter_means_commuting() {
        let g = FinAbGroup::cyclic(3);
        let chi = Bicharacter::trivial(&g, &g);
        let p = canonical_heisenberg(&chi);
        assert!(p.u.iter().all(|x| *x == CMatrix::identity(3)));
        assert!(is_heisenberg(&p, &chi, tol()).unwrap().pass);
        assert!(is_anti_heisenberg(&p, &chi, tol()).unwrap().pass);
        let c = composite_heisenberg(&chi);
        assert!(is_heisenberg(&c, &chi, tol()).unwrap().pass);
        assert_eq!(commutation_check(&c, &c).unwrap(), 0.0);
    }

    #[test]
    fn three_witnesses() {
        let chi = Bicharacter::cyclic(2, 1);
        let comp = composite_heisenberg(&chi);
        assert_eq!(comp.space_dim(), 4);
        assert!(is_heisenberg(&comp, &chi, tol()).unwrap().residual < 1e-12);
        let amp = canonical_heisenberg(&chi).amplified(2);
        assert!(is_heisenberg(&amp, &chi, tol()).unwrap().residual < 1e-12);
    }

    #[test]
    fn conjugate_flips_the_side() {
        let chi = Bicharacter::cyclic(5, 2);
        let p = canonical_heisenberg(&chi);
        let c = conjugate_pair(&p);
        assert!(is_anti_heisenberg(&c, &chi, tol()).unwrap().pass);
        assert!(!is_heisenberg(&c, &chi, tol()).unwrap().pass);
        let back = conjugate_pair(&c);
        assert!(back.u.iter().zip(&p.u).all(|(a, b)| a == b));
    }

    #[test]
    fn commutation_theorem() {
        let chi = Bicharacter::cyclic(3, 1);
        let h = canonical_heisenberg(&chi);
        let a = conjugate_pair(&h);
        assert!(commutation_check(&h, &a).unwrap() < 1e-12);
        // Negative control: scalars multiply instead of cancelling.
        let r = commutation_check(&h, &h).unwrap();
        let z = chi.value(&chi.left().element_at(1), &chi.right().element_at(1));
        let uv = h.u(1).kron(h.u(1)) * h.v(1).kron(h.v(1));
        let expect = (z * z - 1.0).norm() * uv.norm();
        assert!((r - expect).abs() < 1e-10, "{r} vs {expect}");
        assert!(r > 0.1);
    }

    #[test]
    fn swapping_uses_the_dual_bicharacter() {
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let h = FinAbGroup::cyclic(4);
        for chi in crate::abgroup::enumerate_bicharacters(&g, &h).unwrap() {
            let p = canonical_heisenberg(&chi);
            assert!(
                is_heisenberg(&p.swapped(), &chi.dual(), tol())
                    .unwrap()
                    .pass
            );
        }
    }

    #[test]
    fn regular_pair_is_heisenberg_for_the_pairing() {
        let g = FinAbGroup::cyclic(4);
        let p = regular_pair(&g);
        assert!(
            is_heisenberg(&p, &Bicharacter::pairing(&g), tol())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn rejects_non_representations() {
        let g = FinAbGroup::cyclic(2);
        let r = RepPair::new(
            g.clone(),
            g,
            vec![CMatrix::identity(2), sigma_z()],
            vec![CMatrix::identity(2), sigma_x().scale_real(2.0)],
            tol(),
        );
        assert!(matches!(r, Err(HeisError::NotUnitary { .. })));
    }
}

//! Finite abelian groups `⊕ Z/n_i`, homomorphisms as integer matrices, and
//! bicharacters as exponent matrices.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matspan::root_of_unity;

/// Largest number of bicharacters `enumerate_bicharacters` will list.
pub const ENUMERATION_CAP: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cycle orders must be at least 2, found {0}")]
    InvalidCycle(usize),
    #[error("element has {found} residues but the group has {expected} cycles")]
    ElementRank { expected: usize, found: usize },
    #[error("residue {value} out of range for Z/{order}")]
    ResidueRange { value: usize, order: usize },
    #[error("exponent matrix must be {rows}x{cols}")]
    ExponentShape { rows: usize, cols: usize },
    #[error("exponent {value} at ({i},{j}) must lie in [0, {bound})")]
    ExponentRange {
        i: usize,
        j: usize,
        value: usize,
        bound: usize,
    },
    #[error("homomorphism matrix must be {rows}x{cols}")]
    HomShape { rows: usize, cols: usize },
    #[error(
        "generator {generator} of order {order} does not map to an element of order dividing it"
    )]
    NotHomomorphism { generator: usize, order: usize },
    #[error("homomorphisms do not compose: target and source differ")]
    Incompatible,
    #[error("{count} bicharacters exceed the enumeration cap {cap}")]
    CapExceeded { count: u64, cap: u64 },
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `⊕_i Z/n_i`. The empty list is the trivial group.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    cycles: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    residues: Vec<usize>,
}

impl GroupElement {
    pub fn residues(&self) -> &[usize] {
        &self.residues
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.cycles.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FinAbGroup {
    pub fn new(cycles: Vec<usize>) -> Result<Self, GroupError> {
        if let Some(&bad) = cycles.iter().find(|&&n| n < 2) {
            return Err(GroupError::InvalidCycle(bad));
        }
        Ok(Self { cycles })
    }

    pub fn cyclic(n: usize) -> Self {
        Self::new(vec![n]).expect("cyclic order must be at least 2")
    }

    pub fn trivial() -> Self {
        Self { cycles: Vec::new() }
    }

    pub fn cycles(&self) -> &[usize] {
        &self.cycles
    }

    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn order(&self) -> usize {
        self.cycles.iter().product()
    }

    /// `self ⊕ other`.
    pub fn product(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut cycles = self.cycles.clone();
        cycles.extend_from_slice(&other.cycles);
        FinAbGroup { cycles }
    }

    /// Reduces arbitrary integers into an element.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement, GroupError> {
        if residues.len() != self.rank() {
            return Err(GroupError::ElementRank {
                expected: self.rank(),
                found: residues.len(),
            });
        }
        Ok(GroupElement {
            residues: residues
                .iter()
                .zip(&self.cycles)
                .map(|(&r, &n)| r.rem_euclid(n as i64) as usize)
                .collect(),
        })
    }

    pub fn check(&self, a: &GroupElement) -> Result<(), GroupError> {
        if a.residues.len() != self.rank() {
            return Err(GroupError::ElementRank {
                expected: self.rank(),
                found: a.residues.len(),
            });
        }
        for (&value, &order) in a.residues.iter().zip(&self.cycles) {
            if value >= order {
                return Err(GroupError::ResidueRange { value, order });
            }
        }
        Ok(())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.rank()],
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            residues: a
                .residues
                .iter()
                .zip(&b.residues)
                .zip(&self.cycles)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            residues: a
                .residues
                .iter()
                .zip(&self.cycles)
                .map(|(x, n)| (n - x) % n)
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// `k·a`.
    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        let r: Vec<i64> = a.residues.iter().map(|&x| k * x as i64).collect();
        self.element(&r).expect("rank preserved")
    }

    /// Unit vectors `e_i`.
    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.rank())
            .map(|i| {
                let mut r = vec![0; self.rank()];
                r[i] = 1;
                GroupElement { residues: r }
            })
            .collect()
    }

    /// Position in the lexicographic (mixed-radix) order, first cycle most
    /// significant.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.residues
            .iter()
            .zip(&self.cycles)
            .fold(0, |acc, (r, n)| acc * n + r)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut r = vec![0; self.rank()];
        for k in (0..self.rank()).rev() {
            r[k] = idx % self.cycles[k];
            idx /= self.cycles[k];
        }
        GroupElement { residues: r }
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }
}

/// Homomorphism `f: G → G₂` given by `f(a)_k = Σ_i F_ki a_i mod n₂_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: Vec<Vec<usize>>,
}

impl GroupHom {
    /// Validates that each generator's order is respected and reduces the
    /// entries modulo the target cycle orders.
    pub fn new(
        source: FinAbGroup,
        target: FinAbGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self, GroupError> {
        let (rows, cols) = (target.rank(), source.rank());
        if matrix.len() != rows || matrix.iter().any(|r| r.len() != cols) {
            return Err(GroupError::HomShape { rows, cols });
        }
        let reduced: Vec<Vec<usize>> = matrix
            .iter()
            .zip(target.cycles())
            .map(|(row, &m)| {
                row.iter()
                    .map(|&x| x.rem_euclid(m as i64) as usize)
                    .collect()
            })
            .collect();
        for (i, &n) in source.cycles().iter().enumerate() {
            for (k, &m) in target.cycles().iter().enumerate() {
                if !(n * reduced[k][i]).is_multiple_of(m) {
                    return Err(GroupError::NotHomomorphism {
                        generator: i,
                        order: n,
                    });
                }
            }
        }
        Ok(Self {
            source,
            target,
            matrix: reduced,
        })
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let r = g.rank();
        let matrix = (0..r)
            .map(|k| (0..r).map(|i| i64::from(i == k)).collect())
            .collect();
        Self::new(g.clone(), g.clone(), matrix).expect("identity is a homomorphism")
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        let matrix = vec![vec![0; source.rank()]; target.rank()];
        Self::new(source.clone(), target.clone(), matrix).expect("zero is a homomorphism")
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<usize>] {
        &self.matrix
    }

    pub fn apply(&self, a: &GroupElement) -> GroupElement {
        let residues: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&a.residues)
                    .map(|(f, x)| (f * x) as i64)
                    .sum()
            })
            .collect();
        self.target.element(&residues).expect("rank preserved")
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom, GroupError> {
        if first.target != self.source {
            return Err(GroupError::Incompatible);
        }
        let rows = self.target.rank();
        let cols = first.source.rank();
        let mut m = vec![vec![0i64; cols]; rows];
        for (k, row) in m.iter_mut().enumerate() {
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = (0..self.source.rank())
                    .map(|l| (self.matrix[k][l] * first.matrix[l][i]) as i64)
                    .sum();
            }
        }
        GroupHom::new(first.source.clone(), self.target.clone(), m)
    }
}

/// Bicharacter `χ: G × H → T`, `χ(a,b) = Π exp(2πi a_i M_ij b_j / gcd(n_i, m_j))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bicharacter {
    left: FinAbGroup,
    right: FinAbGroup,
    exponents: Vec<Vec<usize>>,
}

impl Bicharacter {
    pub fn new(
        left: FinAbGroup,
        right: FinAbGroup,
        exponents: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let (rows, cols) = (left.rank(), right.rank());
        if exponents.len() != rows || exponents.iter().any(|r| r.len() != cols) {
            return Err(GroupError::ExponentShape { rows, cols });
        }
        for (i, &n) in left.cycles().iter().enumerate() {
            for (j, &m) in right.cycles().iter().enumerate() {
                let bound = gcd(n, m);
                let value = exponents[i][j];
                if value >= bound {
                    return Err(GroupError::ExponentRange { i, j, value, bound });
                }
            }
        }
        Ok(Self {
            left,
            right,
            exponents,
        })
    }

    pub fn trivial(left: &FinAbGroup, right: &FinAbGroup) -> Self {
        Self {
            left: left.clone(),
            right: right.clone(),
            exponents: vec![vec![0; right.rank()]; left.rank()],
        }
    }

    /// The canonical pairing `G × Ĝ → T` with `Ĝ` identified with `G`:
    /// `⟨a, b⟩ = Π exp(2πi a_i b_i / n_i)`.
    pub fn pairing(g: &FinAbGroup) -> Self {
        let r = g.rank();
        let exponents = (0..r)
            .map(|i| (0..r).map(|j| usize::from(i == j)).collect())
            .collect();
        Self::new(g.clone(), g.clone(), exponents).expect("identity exponents are in range")
    }

    /// `χ(a,b) = exp(2πi k a b / N)` on `Z/N × Z/N`.
    pub fn cyclic(n: usize, k: usize) -> Self {
        let g = FinAbGroup::cyclic(n);
        Self::new(g.clone(), g, vec![vec![k % n]]).expect("reduced exponent")
    }

    pub fn left(&self) -> &FinAbGroup {
        &self.left
    }

    pub fn right(&self) -> &FinAbGroup {
        &self.right
    }

    pub fn exponents(&self) -> &[Vec<usize>] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().flatten().all(|&m| m == 0)
    }

    fn common_denominator(&self) -> usize {
        let mut l = 1;
        for &n in self.left.cycles() {
            for &m in self.right.cycles() {
                l = lcm(l, gcd(n, m));
            }
        }
        l
    }

    /// `χ(a,b) = exp(2πi num/den)`, returned as `(num mod den, den)`.
    pub fn phase(&self, a: &GroupElement, b: &GroupElement) -> (usize, usize) {
        let l = self.common_denominator();
        let mut num = 0usize;
        for (i, &n) in self.left.cycles().iter().enumerate() {
            for (j, &m) in self.right.cycles().iter().enumerate() {
                let d = gcd(n, m);
                let t = (a.residues[i] % d) * self.exponents[i][j] % d * (b.residues[j] % d) % d;
                num = (num + t * (l / d)) % l;
            }
        }
        (num, l)
    }

    pub fn evaluate(&self, a: &GroupElement, b: &GroupElement) -> Result<Complex64, GroupError> {
        self.left.check(a)?;
        self.right.check(b)?;
        Ok(self.value(a, b))
    }

    /// Unchecked evaluation for elements known to belong to the groups.
    pub fn value(&self, a: &GroupElement, b: &GroupElement) -> Complex64 {
        let (num, den) = self.phase(a, b);
        root_of_unity(num as i64, den as i64)
    }

    /// Values indexed by the lexicographic positions of `a` and `b`.
    pub fn table(&self) -> Vec<Vec<Complex64>> {
        let hs = self.right.elements();
        self.left
            .elements()
            .iter()
            .map(|a| hs.iter().map(|b| self.value(a, b)).collect())
            .collect()
    }

    /// `χ̂(b,a) = conj χ(a,b)`: transposed and negated exponents.
    pub fn dual(&self) -> Bicharacter {
        let mut exponents = vec![vec![0; self.left.rank()]; self.right.rank()];
        for (i, &n) in self.left.cycles().iter().enumerate() {
            for (j, &m) in self.right.cycles().iter().enumerate() {
                let d = gcd(n, m);
                exponents[j][i] = (d - self.exponents[i][j]) % d;
            }
        }
        Bicharacter {
            left: self.right.clone(),
            right: self.left.clone(),
            exponents,
        }
    }

    /// The homomorphism `H → Ĝ ≅ G` with `χ(a,b) = ⟨a, F b⟩`.
    pub fn as_hom(&self) -> GroupHom {
        let matrix = self
            .left
            .cycles()
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                self.right
                    .cycles()
                    .iter()
                    .enumerate()
                    .map(|(j, &m)| (self.exponents[i][j] * n / gcd(n, m)) as i64)
                    .collect()
            })
            .collect();
        GroupHom::new(self.right.clone(), self.left.clone(), matrix)
            .expect("bicharacter induces a homomorphism")
    }
}

/// All bicharacters on `G × H`, in lexicographic order of the exponents.
pub fn enumerate_bicharacters(
    g: &FinAbGroup,
    h: &FinAbGroup,
) -> Result<Vec<Bicharacter>, GroupError> {
    let bounds: Vec<usize> = g
        .cycles()
        .iter()
        .flat_map(|&n| h.cycles().iter().map(move |&m| gcd(n, m)))
        .collect();
    let count = bounds
        .iter()
        .try_fold(1u64, |acc, &b| acc.checked_mul(b as u64))
        .unwrap_or(u64::MAX);
    if count > ENUMERATION_CAP {
        return Err(GroupError::CapExceeded {
            count,
            cap: ENUMERATION_CAP,
        });
    }
    let cols = h.rank();
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; bounds.len()];
    loop {
        let exponents = (0..g.rank())
            .map(|i| digits[i * cols..(i + 1) * cols].to_vec())
            .collect();
        out.push(Bicharacter {
            left: g.clone(),
            right: h.clone(),
            exponents,
        });
        // Odometer increment, last digit fastest.
        let mut k = bounds.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < bounds[k] {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// `χ(a,b) = χ₂(f(a), g(b))`, computed exactly on exponents.
pub fn pullback(chi2: &Bicharacter, f: &GroupHom, g: &GroupHom) -> Result<Bicharacter, GroupError> {
    if f.target() != chi2.left() || g.target() != chi2.right() {
        return Err(GroupError::Incompatible);
    }
    let (gl, hl) = (f.source(), g.source());
    let l = chi2.common_denominator();
    let mut exponents = vec![vec![0; hl.rank()]; gl.rank()];
    for (i, &n) in gl.cycles().iter().enumerate() {
        for (j, &m) in hl.cycles().iter().enumerate() {
            let mut num = 0usize;
            for (k, &n2) in chi2.left().cycles().iter().enumerate() {
                for (q, &m2) in chi2.right().cycles().iter().enumerate() {
                    let d = gcd(n2, m2);
                    let t = f.matrix()[k][i] % d * chi2.exponents()[k][q] % d
                        * (g.matrix()[q][j] % d)
                        % d;
                    num = (num + t * (l / d)) % l;
                }
            }
            // exp(2πi num/L) must be a gcd(n,m)-th root of unity.
            let d = gcd(n, m);
            if !(num * d).is_multiple_of(l) {
                return Err(GroupError::NotHomomorphism {
                    generator: i,
                    order: n,
                });
            }
            exponents[i][j] = num * d / l % d;
        }
    }
    Bicharacter::new(gl.clone(), hl.clone(), exponents)
}

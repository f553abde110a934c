//! The JSON report shared by scenarios, `verify` and the suite.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matspan::{CMatrix, Tolerance};

/// One nonzero structure constant `P_i P_j = Σ_k value · P_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triplet {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: [f64; 2],
}

pub fn triplets(sc: &[(usize, usize, usize, Complex64)]) -> Vec<Triplet> {
    sc.iter()
        .map(|&(i, j, k, z)| Triplet {
            i,
            j,
            k,
            value: [z.re, z.im],
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub inputs: serde_json::Value,
    pub tolerances: Tolerance,
    pub witness: String,
    pub dims: BTreeMap<String, usize>,
    pub residuals: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    pub iso_found: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub structure_constants: Option<Vec<Triplet>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub matrices: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
    /// Steps that could not run, with the reason.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errors: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>, inputs: serde_json::Value, tol: Tolerance) -> Self {
        Self {
            name: name.into(),
            inputs,
            tolerances: tol,
            witness: String::new(),
            dims: BTreeMap::new(),
            residuals: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            iso_found: false,
            structure_constants: None,
            matrices: BTreeMap::new(),
            errors: Vec::new(),
        }
    }

    pub fn dim(&mut self, key: impl Into<String>, value: usize) -> &mut Self {
        self.dims.insert(key.into(), value);
        self
    }

    pub fn residual(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.residuals.insert(key.into(), value);
        self
    }

    pub fn verdict(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.verdicts.insert(key.into(), value);
        self
    }

    pub fn matrix(&mut self, key: impl Into<String>, m: &CMatrix) -> &mut Self {
        self.matrices.insert(key.into(), m.to_pairs());
        self
    }

    /// A failed step: recorded as a false verdict plus its message.
    pub fn error(&mut self, key: impl Into<String>, message: impl std::fmt::Display) -> &mut Self {
        let key = key.into();
        self.errors.push(format!("{key}: {message}"));
        self.verdicts.insert(key, false);
        self
    }

    /// Every verdict holds.
    pub fn pass(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }

    pub fn failed_verdicts(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|(_, &v)| !v)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Copies another report's entries under `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: &Report) {
        for (k, v) in &other.dims {
            self.dims.insert(format!("{prefix}.{k}"), *v);
        }
        for (k, v) in &other.residuals {
            self.residuals.insert(format!("{prefix}.{k}"), *v);
        }
        for (k, v) in &other.verdicts {
            self.verdicts.insert(format!("{prefix}.{k}"), *v);
        }
        self.errors
            .extend(other.errors.iter().map(|e| format!("{prefix}.{e}")));
    }
}

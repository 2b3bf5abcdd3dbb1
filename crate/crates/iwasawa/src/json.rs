//! JSON structure-constant format.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "basis": ["X", "Y", "Z"],
//!   "brackets": [
//!     {"left": "X", "right": "Y", "result": {"Z": "1"}}
//!   ]
//! }
//! ```
//!
//! Rationals are `"p/q"` strings, omitted brackets are zero, and the
//! antisymmetric completion is implicit. Specifying both `[X,Y]` and `[Y,X]`
//! is a format error.

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::scalar::{fnv1a_hex, format_rat, parse_rat, Rat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
struct AlgebraDoc {
    dim: usize,
    basis: Vec<String>,
    brackets: Vec<BracketDoc>,
}

#[derive(Serialize, Deserialize)]
struct BracketDoc {
    left: String,
    right: String,
    result: BTreeMap<String, String>,
}

pub fn algebra_from_json(text: &str) -> Result<LieAlgebra> {
    let doc: AlgebraDoc =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("bad algebra JSON: {e}")))?;
    if doc.dim != doc.basis.len() {
        return Err(Error::Format(format!(
            "dim is {} but basis has {} names",
            doc.dim,
            doc.basis.len()
        )));
    }
    {
        let mut names = doc.basis.clone();
        names.sort();
        names.dedup();
        if names.len() != doc.basis.len() {
            return Err(Error::Format("duplicate basis names".into()));
        }
    }
    let index = |name: &str| -> Result<usize> {
        doc.basis
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Format(format!("unknown basis name '{name}'")))
    };
    let mut brackets: Vec<(usize, usize, Vec<(usize, Rat)>)> = Vec::new();
    for b in &doc.brackets {
        let i = index(&b.left)?;
        let j = index(&b.right)?;
        let mut result = Vec::new();
        for (name, val) in &b.result {
            result.push((index(name)?, parse_rat(val)?));
        }
        brackets.push((i, j, result));
    }
    LieAlgebra::from_brackets(doc.basis, &brackets)
}

pub fn algebra_to_json(l: &LieAlgebra) -> String {
    let n = l.dim();
    let names = l.basis_names();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut result = BTreeMap::new();
            for k in 0..n {
                let c = l.c(i, j, k);
                if !num_traits::Zero::is_zero(c) {
                    result.insert(names[k].clone(), format_rat(c));
                }
            }
            if !result.is_empty() {
                brackets.push(BracketDoc {
                    left: names[i].clone(),
                    right: names[j].clone(),
                    result,
                });
            }
        }
    }
    let doc = AlgebraDoc {
        dim: n,
        basis: names.to_vec(),
        brackets,
    };
    serde_json::to_string_pretty(&doc).expect("algebra serialization cannot fail")
}

/// Deterministic fingerprint of an algebra, used to tie reports to inputs.
pub fn algebra_hash(l: &LieAlgebra) -> String {
    fnv1a_hex(algebra_to_json(l).as_bytes())
}

pub fn read_algebra_file(path: &str) -> Result<LieAlgebra> {
    let text = std::fs::read_to_string(path)?;
    algebra_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::heisenberg;

    #[test]
    fn roundtrip_heisenberg() {
        let h = heisenberg();
        let json = algebra_to_json(&h);
        let h2 = algebra_from_json(&json).unwrap();
        assert_eq!(h, h2);
        assert_eq!(algebra_hash(&h), algebra_hash(&h2));
    }

    #[test]
    fn parse_example_document() {
        let text = r#"{
            "dim": 3,
            "basis": ["X", "Y", "Z"],
            "brackets": [{"left": "X", "right": "Y", "result": {"Z": "1"}}]
        }"#;
        let l = algebra_from_json(text).unwrap();
        assert_eq!(l, heisenberg());
    }

    #[test]
    fn format_errors() {
        // Double specification of the same pair.
        let text = r#"{
            "dim": 2, "basis": ["A", "X"],
            "brackets": [
                {"left": "A", "right": "X", "result": {"X": "1"}},
                {"left": "X", "right": "A", "result": {"X": "-1"}}
            ]
        }"#;
        assert!(matches!(algebra_from_json(text), Err(Error::Format(_))));
        // Unknown name.
        let text = r#"{"dim": 1, "basis": ["A"], "brackets": [{"left": "A", "right": "B", "result": {}}]}"#;
        assert!(matches!(algebra_from_json(text), Err(Error::Format(_))));
        // Bad rational.
        let text = r#"{"dim": 2, "basis": ["A", "B"], "brackets": [{"left": "A", "right": "B", "result": {"A": "1.5x"}}]}"#;
        assert!(matches!(algebra_from_json(text), Err(Error::Format(_))));
        // dim mismatch.
        let text = r#"{"dim": 3, "basis": ["A", "B"], "brackets": []}"#;
        assert!(matches!(algebra_from_json(text), Err(Error::Format(_))));
    }
}

//! Cartan matrices, Dynkin graph classification, and diagram automorphisms.
//!
//! Classification works by exact backtracking match against the template
//! Cartan matrices of the finite families (Bourbaki numbering); the matching
//! permutation gives the canonical node order, and enumerating all matchings
//! of a template onto itself gives the diagram automorphism group.

use crate::error::{Error, Result};

/// Integer Cartan matrix together with its Dynkin classification.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanMatrixData {
    /// A[i][j] = 2⟨α_i, α_j⟩ / ⟨α_j, α_j⟩ in the caller's node order.
    pub matrix: Vec<Vec<i64>>,
    /// Product type label, e.g. "A2", "B2", "A1xA1".
    pub dynkin_type: String,
    /// Connected components; `nodes[k]` is the caller index of the k-th node
    /// in Bourbaki order.
    pub components: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub letter: char,
    pub rank: usize,
    pub nodes: Vec<usize>,
}

impl Component {
    pub fn type_label(&self) -> String {
        format!("{}{}", self.letter, self.rank)
    }
}

/// Template Cartan matrix in Bourbaki numbering.
pub fn template(letter: char, rank: usize) -> Option<Vec<Vec<i64>>> {
    let chain = |r: usize| -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; r]; r];
        for i in 0..r {
            a[i][i] = 2;
        }
        for i in 0..r.saturating_sub(1) {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
        a
    };
    match (letter, rank) {
        ('A', r) if r >= 1 => Some(chain(r)),
        ('B', r) if r >= 2 => {
            // α_r is the short root: A[r-1][r] = -2.
            let mut a = chain(r);
            a[r - 2][r - 1] = -2;
            Some(a)
        }
        ('C', r) if r >= 3 => {
            // α_r is the long root: A[r][r-1] = -2 in Bourbaki numbering.
            let mut a = chain(r);
            a[r - 1][r - 2] = -2;
            Some(a)
        }
        ('D', r) if r >= 4 => {
            let mut a = chain(r - 1);
            a.iter_mut().for_each(|row| row.push(0));
            a.push(vec![0; r]);
            a[r - 1][r - 1] = 2;
            // α_r attaches to α_{r-2}.
            a[r - 1][r - 3] = -1;
            a[r - 3][r - 1] = -1;
            // α_{r-1} no longer connects to α_r's chain position: chain(r-1)
            // already ends at α_{r-1}, which is attached to α_{r-2}; correct.
            Some(a)
        }
        ('E', r) if (6..=8).contains(&r) => {
            // Chain 1-3-4-5-...-r with 2 attached to 4.
            let mut a = vec![vec![0i64; r]; r];
            for i in 0..r {
                a[i][i] = 2;
            }
            let link = |i: usize, j: usize, a: &mut Vec<Vec<i64>>| {
                a[i - 1][j - 1] = -1;
                a[j - 1][i - 1] = -1;
            };
            link(1, 3, &mut a);
            link(3, 4, &mut a);
            link(2, 4, &mut a);
            for i in 4..r {
                link(i, i + 1, &mut a);
            }
            Some(a)
        }
        ('F', 4) => {
            // 1-2=>3-4 with α_3, α_4 short: A[2][3] = -2.
            let mut a = chain(4);
            a[1][2] = -2;
            Some(a)
        }
        ('G', 2) => Some(vec![vec![2, -1], vec![-3, 2]]),
        _ => None,
    }
}

/// All permutations p with B[p(i)][p(j)] = A[i][j]; A, B square of equal size.
/// Used both for classification (A = template, B = observed) and for
/// automorphism enumeration (A = B = template).
pub fn isomorphisms(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return vec![];
    }
    let mut result = Vec::new();
    let mut perm: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn backtrack(
        a: &[Vec<i64>],
        b: &[Vec<i64>],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        result: &mut Vec<Vec<usize>>,
    ) {
        let n = a.len();
        let i = perm.len();
        if i == n {
            result.push(perm.clone());
            return;
        }
        'cand: for j in 0..n {
            if used[j] {
                continue;
            }
            for (k, &pk) in perm.iter().enumerate() {
                if b[j][pk] != a[i][k] || b[pk][j] != a[k][i] {
                    continue 'cand;
                }
            }
            used[j] = true;
            perm.push(j);
            backtrack(a, b, perm, used, result);
            perm.pop();
            used[j] = false;
        }
    }
    backtrack(a, b, &mut perm, &mut used, &mut result);
    result
}

fn validate_cartan(a: &[Vec<i64>]) -> Result<()> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Validation("Cartan matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(Error::Validation(format!(
                "Cartan matrix has diagonal entry {} at node {}",
                row[i], i
            )));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if row[j] > 0 {
                return Err(Error::Validation(format!(
                    "positive off-diagonal Cartan entry at ({i},{j})"
                )));
            }
            if (row[j] == 0) != (a[j][i] == 0) {
                return Err(Error::Validation(format!(
                    "asymmetric zero pattern at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

fn connected_components(a: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            comp.push(v);
            for w in 0..n {
                if w != v && a[v][w] != 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort();
        comps.push(comp);
    }
    comps
}

/// Candidate (letter, rank) templates to try for a connected component, in a
/// fixed order so that ambiguous cases (B₂ ≅ C₂) classify deterministically.
fn candidate_types(rank: usize) -> Vec<(char, usize)> {
    let mut c = vec![('A', rank)];
    if rank >= 2 {
        c.push(('B', rank));
    }
    if rank >= 3 {
        c.push(('C', rank));
    }
    if rank >= 4 {
        c.push(('D', rank));
    }
    if (6..=8).contains(&rank) {
        c.push(('E', rank));
    }
    if rank == 4 {
        c.push(('F', 4));
    }
    if rank == 2 {
        c.push(('G', 2));
    }
    c
}

/// Classify an integer Cartan matrix, producing the Dynkin type and the
/// Bourbaki node order of every component.
pub fn classify_cartan_matrix(a: &[Vec<i64>]) -> Result<CartanMatrixData> {
    validate_cartan(a)?;
    let comps = connected_components(a);
    let mut components = Vec::new();
    for comp in comps {
        let sub: Vec<Vec<i64>> = comp
            .iter()
            .map(|&i| comp.iter().map(|&j| a[i][j]).collect())
            .collect();
        let rank = comp.len();
        let mut found = None;
        for (letter, r) in candidate_types(rank) {
            let Some(t) = template(letter, r) else {
                continue;
            };
            let isos = isomorphisms(&t, &sub);
            if let Some(p) = isos.first() {
                // p maps template index -> sub index; Bourbaki order of caller nodes.
                let nodes: Vec<usize> = p.iter().map(|&si| comp[si]).collect();
                found = Some(Component {
                    letter,
                    rank: r,
                    nodes,
                });
                break;
            }
        }
        let c = found.ok_or_else(|| {
            Error::Validation(format!(
                "connected component {comp:?} is not a finite-type Dynkin diagram"
            ))
        })?;
        components.push(c);
    }
    components.sort_by(|x, y| {
        (x.letter, x.rank, x.nodes.clone()).cmp(&(y.letter, y.rank, y.nodes.clone()))
    });
    let dynkin_type = components
        .iter()
        .map(Component::type_label)
        .collect::<Vec<_>>()
        .join("x");
    Ok(CartanMatrixData {
        matrix: a.to_vec(),
        dynkin_type,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_simple_types() {
        let a2 = vec![vec![2, -1], vec![-1, 2]];
        assert_eq!(classify_cartan_matrix(&a2).unwrap().dynkin_type, "A2");

        let a1a1 = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(classify_cartan_matrix(&a1a1).unwrap().dynkin_type, "A1xA1");

        // C2 presented matrix is classified as B2 (identical diagrams).
        let c2 = vec![vec![2, -1], vec![-2, 2]];
        assert_eq!(classify_cartan_matrix(&c2).unwrap().dynkin_type, "B2");

        let g2 = vec![vec![2, -3], vec![-1, 2]];
        assert_eq!(classify_cartan_matrix(&g2).unwrap().dynkin_type, "G2");

        let e6 = template('E', 6).unwrap();
        let d = classify_cartan_matrix(&e6).unwrap();
        assert_eq!(d.dynkin_type, "E6");
        assert_eq!(d.components[0].nodes, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn classify_under_permutation() {
        // A3 with nodes shuffled: middle node is index 0.
        let a = vec![vec![2, -1, -1], vec![-1, 2, 0], vec![-1, 0, 2]];
        let d = classify_cartan_matrix(&a).unwrap();
        assert_eq!(d.dynkin_type, "A3");
        // Bourbaki order must put index 0 in the middle.
        assert_eq!(d.components[0].nodes[1], 0);
    }

    #[test]
    fn automorphism_groups() {
        let a3 = template('A', 3).unwrap();
        assert_eq!(isomorphisms(&a3, &a3).len(), 2); // id + reversal
        let d4 = template('D', 4).unwrap();
        assert_eq!(isomorphisms(&d4, &d4).len(), 6); // S3 on the three legs
        let e6 = template('E', 6).unwrap();
        assert_eq!(isomorphisms(&e6, &e6).len(), 2);
        let b2 = template('B', 2).unwrap();
        assert_eq!(isomorphisms(&b2, &b2).len(), 1);
        let f4 = template('F', 4).unwrap();
        assert_eq!(isomorphisms(&f4, &f4).len(), 1);
    }

    #[test]
    fn rejects_non_cartan() {
        assert!(classify_cartan_matrix(&[vec![1]]).is_err());
        assert!(classify_cartan_matrix(&[vec![2, 1], vec![1, 2]]).is_err());
        assert!(classify_cartan_matrix(&[vec![2, -1], vec![0, 2]]).is_err());
        // Affine A1~: [[2,-2],[-2,2]] has determinant 0 and is not finite type.
        assert!(classify_cartan_matrix(&[vec![2, -2], vec![-2, 2]]).is_err());
    }
}

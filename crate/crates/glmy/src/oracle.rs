//! Brute-force reference homology via the classical chain groups
//! Omega_k = { x in A_k : dx in A_{k-1} }.
//!
//! This module is the independent cross-check for the embedded pipeline, so
//! it deliberately shares nothing with the main linear algebra beyond the
//! boundary map on paths: ranks and kernels here run through a plain
//! hand-rolled elimination over `Vec<Vec<Rational>>`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::digraph::Digraph;
use crate::linalg::Rational;
use crate::path::{boundary_terms, enumerate_allowed, ElementaryPath, PathBasis};

/// Basis of Omega_k expressed in the coordinates of the allowed k-paths.
#[derive(Clone, Debug)]
pub struct OmegaBasis {
    degree: usize,
    allowed: PathBasis,
    basis: Vec<Vec<Rational>>,
}

impl OmegaBasis {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn allowed(&self) -> &PathBasis {
        &self.allowed
    }

    /// Basis vectors over the allowed path coordinates.
    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Whether a coordinate vector lies in the span of this basis.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.basis.clone();
        let base = echelon_rank(&mut rows);
        let mut extended = self.basis.clone();
        extended.push(v.to_vec());
        base == echelon_rank(&mut extended)
    }
}

/// Solves the membership constraint: x ranges over the allowed k-paths and
/// the boundary of x must have no component on any non-allowed (k-1)-path.
pub fn omega_basis(g: &Digraph, k: usize) -> OmegaBasis {
    let allowed = enumerate_allowed(g, k);
    let cols = allowed.len();
    if k == 0 || cols == 0 {
        // d_0 = 0, so Omega_0 is all of A_0.
        let basis = (0..cols)
            .map(|j| {
                let mut v = vec![Rational::zero(); cols];
                v[j] = Rational::from_integer(1.into());
                v
            })
            .collect();
        return OmegaBasis {
            degree: k,
            allowed,
            basis,
        };
    }

    let lower = enumerate_allowed(g, k - 1);
    let mut row_of: BTreeMap<ElementaryPath, usize> = BTreeMap::new();
    let mut constraints: Vec<Vec<Rational>> = Vec::new();
    for (j, p) in allowed.paths().iter().enumerate() {
        for (sign, q) in boundary_terms(p) {
            if lower.contains(&q) {
                continue;
            }
            let row = *row_of.entry(q).or_insert_with(|| {
                constraints.push(vec![Rational::zero(); cols]);
                constraints.len() - 1
            });
            constraints[row][j] += Rational::from_integer(sign.into());
        }
    }
    let basis = nullspace(constraints, cols);
    OmegaBasis {
        degree: k,
        allowed,
        basis,
    }
}

/// Betti numbers of every degree 0..=d from the classical complex: for each
/// degree, the dimension of the cycle space inside Omega minus the rank of
/// the boundary arriving from one degree up.
pub fn betti_omega(g: &Digraph) -> Vec<usize> {
    let d = g.max_allowed_path_length();
    let omegas: Vec<OmegaBasis> = (0..=d + 1).map(|k| omega_basis(g, k)).collect();
    let ranks: Vec<usize> = (0..=d + 1)
        .map(|k| {
            if k == 0 {
                0
            } else {
                let mut m = restricted_boundary_matrix(g, &omegas[k]);
                echelon_rank(&mut m)
            }
        })
        .collect();
    (0..=d)
        .map(|k| omegas[k].dim() - ranks[k] - ranks[k + 1])
        .collect()
}

/// Matrix of the boundary restricted to Omega_k, expressed over the allowed
/// (k-1)-paths; rows are basis vectors of the image side transposed into a
/// row list for the rank routine.
fn restricted_boundary_matrix(g: &Digraph, omega: &OmegaBasis) -> Vec<Vec<Rational>> {
    let k = omega.degree();
    debug_assert!(k >= 1);
    let lower = enumerate_allowed(g, k - 1);
    omega
        .vectors()
        .iter()
        .map(|w| {
            let mut image = vec![Rational::zero(); lower.len()];
            for (j, coeff) in w.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (sign, q) in boundary_terms(omega.allowed().path(j)) {
                    if let Some(i) = lower.position(&q) {
                        image[i] += coeff * &Rational::from_integer(sign.into());
                    }
                    // non-allowed components vanish by the Omega constraint
                }
            }
            image
        })
        .collect()
}

/// Plain forward elimination to row echelon form; returns the rank and
/// leaves the rows in echelon order. Independent of the main matrix module.
fn echelon_rank(rows: &mut Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for i in rank + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] / &rows[rank][col];
            for j in col..cols {
                let t = &rows[i][j] - &(&factor * &rows[rank][j]);
                rows[i][j] = t;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Nullspace of a constraint system by echelon reduction and back
/// substitution on the free variables.
fn nullspace(mut rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let one = || Rational::from_integer(1.into());
    if rows.is_empty() {
        return (0..cols)
            .map(|j| {
                let mut v = vec![Rational::zero(); cols];
                v[j] = one();
                v
            })
            .collect();
    }
    let rank = echelon_rank(&mut rows);
    rows.truncate(rank);
    let mut pivot_col_of_row = Vec::with_capacity(rank);
    let mut is_pivot = vec![false; cols];
    for row in &rows {
        let col = row.iter().position(|x| !x.is_zero()).expect("rank rows");
        pivot_col_of_row.push(col);
        is_pivot[col] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = one();
        // back substitution from the lowest pivot row up
        for r in (0..rank).rev() {
            let col = pivot_col_of_row[r];
            let mut acc = Rational::zero();
            for j in col + 1..cols {
                if !rows[r][j].is_zero() && !v[j].is_zero() {
                    acc += &rows[r][j] * &v[j];
                }
            }
            v[col] = -acc / &rows[r][col];
        }
        basis.push(v);
    }
    basis
}

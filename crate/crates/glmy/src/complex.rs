//! The embedded chain complex of an acyclic digraph.
//!
//! Degree k carries the space spanned by the allowed k-paths together with
//! the boundaries of allowed (k+1)-paths. A basis is kept in two blocks: the
//! allowed paths themselves, then completion chains obtained by stripping
//! the allowed coordinates from each boundary and row-reducing what is left
//! over the non-allowed coordinates. The two blocks are orthogonal by
//! construction, which keeps the norm (Gram) matrix block diagonal with an
//! identity on the allowed block.
//!
//! All boundary, dual and Laplacian matrices here are exact; a chain-level
//! consistency check that the embedded boundary commutes with the total one
//! runs on every build.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::linalg::{Rational, RationalMatrix};
use crate::path::{
    boundary_matrix_total, count_regular, enumerate_allowed, enumerate_regular,
    for_each_regular_path, Chain, ElementaryPath, PathBasis,
};

/// Basis of one degree of the embedded complex: the allowed paths A_k first,
/// then the completion chains L_k, with the Gram matrix of the whole basis.
#[derive(Clone, Debug)]
pub struct GammaBasis {
    degree: usize,
    allowed: PathBasis,
    chains: Vec<Chain>,
    norm: RationalMatrix,
}

impl GammaBasis {
    /// Builds (A_k, L_k) from the allowed bases at degrees k and k+1.
    fn build(degree: usize, allowed: PathBasis, next_allowed: &PathBasis) -> Self {
        let residuals: Vec<Chain> = next_allowed
            .paths()
            .iter()
            .map(|q| {
                Chain::from_path(q.clone())
                    .boundary()
                    .filter_paths(|p| !allowed.contains(p))
            })
            .filter(|c| !c.is_zero())
            .collect();
        let completion = chain_rref(residuals);

        let mut chains: Vec<Chain> = allowed
            .paths()
            .iter()
            .map(|p| Chain::from_path(p.clone()))
            .collect();
        chains.extend(completion);

        let dim = chains.len();
        let norm = RationalMatrix::from_fn(dim, dim, |i, j| chains[i].dot(&chains[j]));
        Self {
            degree,
            allowed,
            chains,
            norm,
        }
    }


    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dimension of the embedded chain group at this degree.
    pub fn dim(&self) -> usize {
        self.chains.len()
    }

    pub fn allowed(&self) -> &PathBasis {
        &self.allowed
    }

    /// The completion chains L_k, each supported off the allowed paths,
    /// normalized to +1 on their lexicographically smallest path.
    pub fn completion(&self) -> &[Chain] {
        &self.chains[self.allowed.len()..]
    }

    /// Basis vector `j` as a chain in the regular-path space.
    pub fn basis_chain(&self, j: usize) -> &Chain {
        &self.chains[j]
    }

    pub fn basis_chains(&self) -> &[Chain] {
        &self.chains
    }

    /// The norm matrix N_k (symmetric positive definite Gram matrix).
    pub fn norm(&self) -> &RationalMatrix {
        &self.norm
    }
}

/// Reduced row echelon form of a set of chains, coordinates ordered
/// lexicographically by path. Pivots are normalized to +1 and eliminated
/// from every other basis chain; the result is the canonical basis of the
/// span, independent of input order.
fn chain_rref(chains: Vec<Chain>) -> Vec<Chain> {
    let mut pivots: BTreeMap<ElementaryPath, Chain> = BTreeMap::new();
    for mut c in chains {
        for (p, basis) in &pivots {
            let coeff = c.coefficient(p);
            if !coeff.is_zero() {
                c = c.sub(&basis.scale(&coeff));
            }
        }
        if c.is_zero() {
            continue;
        }
        let lead = c.leading_path().expect("nonzero chain").clone();
        let c = c.scale(&c.coefficient(&lead).recip());
        let mut updated = BTreeMap::new();
        for (p, basis) in &pivots {
            let coeff = basis.coefficient(&lead);
            let b = if coeff.is_zero() {
                basis.clone()
            } else {
                basis.sub(&c.scale(&coeff))
            };
            updated.insert(p.clone(), b);
        }
        updated.insert(lead, c);
        pivots = updated;
    }
    pivots.into_values().collect()
}

/// Report of the exact commutation check between the embedded dual boundary
/// and the projected total dual.
#[derive(Clone, Debug)]
pub struct DualCommutationReport {
    pub degree: usize,
    pub pass: bool,
    /// Largest absolute entry of the difference; exactly zero on pass.
    pub max_deviation: Rational,
}

/// The fully assembled embedded complex of a digraph, degrees 0 through
/// `top` (plus the internal degree `top + 1` needed by the top Laplacian).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    digraph: Digraph,
    top: usize,
    gammas: Vec<GammaBasis>,          // degrees 0 ..= top + 1
    boundaries: Vec<RationalMatrix>,  // D_k^G, degrees 0 ..= top + 1
    duals: Vec<RationalMatrix>,       // D_k^{G,*}, degrees 0 ..= top + 1
    laplacians: Vec<RationalMatrix>,  // degrees 0 ..= top
}

impl ChainComplex {
    /// Builds the complex up to the digraph's maximal allowed path length.
    pub fn build(g: &Digraph) -> Result<Self> {
        Self::build_up_to(g, None)
    }

    /// Builds the complex up to `min(max_dim, d)` where d is the maximal
    /// allowed path length.
    pub fn build_up_to(g: &Digraph, max_dim: Option<usize>) -> Result<Self> {
        let d = g.max_allowed_path_length();
        let top = max_dim.map_or(d, |m| m.min(d));

        let allowed: Vec<PathBasis> = (0..=top + 2).map(|k| enumerate_allowed(g, k)).collect();
        let gammas: Vec<GammaBasis> = (0..=top + 1)
            .map(|k| GammaBasis::build(k, allowed[k].clone(), &allowed[k + 1]))
            .collect();

        let mut boundaries = Vec::with_capacity(top + 2);
        let mut duals = Vec::with_capacity(top + 2);
        boundaries.push(RationalMatrix::zeros(0, gammas[0].dim()));
        duals.push(RationalMatrix::zeros(gammas[0].dim(), 0));
        for k in 1..=top + 1 {
            let (boundary, dual) = gamma_boundary_pair(&gammas[k - 1], &gammas[k])?;
            boundaries.push(boundary);
            duals.push(dual);
        }

        let mut laplacians = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let down = duals[k].mul(&boundaries[k]);
            let up = boundaries[k + 1].mul(&duals[k + 1]);
            laplacians.push(down.add(&up));
        }

        Ok(Self {
            digraph: g.clone(),
            top,
            gammas,
            boundaries,
            duals,
            laplacians,
        })
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// Highest computed degree.
    pub fn top_degree(&self) -> usize {
        self.top
    }

    pub fn gamma(&self, k: usize) -> Option<&GammaBasis> {
        self.gammas.get(k)
    }

    pub fn gamma_dim(&self, k: usize) -> usize {
        self.gammas.get(k).map_or(0, GammaBasis::dim)
    }

    /// The embedded boundary matrix D_k^G (gamma_{k-1} x gamma_k); a
    /// zero-dimensional matrix above the computed window.
    pub fn boundary_gamma(&self, k: usize) -> RationalMatrix {
        self.boundaries
            .get(k)
            .cloned()
            .unwrap_or_else(|| RationalMatrix::zeros(self.gamma_dim(k.wrapping_sub(1)), 0))
    }

    /// The dual boundary D_k^{G,*} (gamma_k x gamma_{k-1}) with respect to
    /// the inherited inner products.
    pub fn dual_gamma(&self, k: usize) -> RationalMatrix {
        self.duals
            .get(k)
            .cloned()
            .unwrap_or_else(|| RationalMatrix::zeros(0, self.gamma_dim(k.wrapping_sub(1))))
    }

    /// The Hodge Laplacian on the embedded complex at degree k; a
    /// zero-dimensional matrix above the computed window.
    pub fn laplacian_gamma(&self, k: usize) -> RationalMatrix {
        self.laplacians
            .get(k)
            .cloned()
            .unwrap_or_else(|| RationalMatrix::zeros(0, 0))
    }

    /// Dense embedding matrix E_k (lambda_k x gamma_k) over the regular
    /// basis; guarded by `cap` on the regular path count.
    pub fn embedding_dense(&self, k: usize, cap: u64) -> Result<RationalMatrix> {
        let n = self.digraph.vertex_count();
        let regular = enumerate_regular(n, k, cap)?;
        let dim = self.gamma_dim(k);
        let mut e = RationalMatrix::zeros(regular.len(), dim);
        if let Some(g) = self.gamma(k) {
            for (j, chain) in g.basis_chains().iter().enumerate() {
                for (p, c) in chain.terms() {
                    let i = regular.position(p).expect("basis chain over regular paths");
                    e[(i, j)] = c.clone();
                }
            }
        }
        Ok(e)
    }

    /// Dense orthogonal projection P_k = E (E^T E)^{-1} E^T of the
    /// regular-path space onto the embedded subspace.
    pub fn projection_total(&self, k: usize, cap: u64) -> Result<RationalMatrix> {
        let e = self.embedding_dense(k, cap)?;
        if e.cols() == 0 {
            return Ok(RationalMatrix::zeros(e.rows(), e.rows()));
        }
        let g = self.gamma(k).expect("gamma exists when dim > 0");
        let ninv = g.norm().inverse()?;
        Ok(e.mul(&ninv).mul(&e.transpose()))
    }

    /// Exact check that embedding the dual boundary agrees with projecting
    /// the total dual: E_k D_k^{G,*} = P_k D_k^T E_{k-1}, entry by entry.
    pub fn verify_dual_commutation(&self, k: usize, cap: u64) -> Result<DualCommutationReport> {
        if k == 0 || k > self.top + 1 || self.gamma_dim(k) == 0 || self.gamma_dim(k - 1) == 0 {
            return Ok(DualCommutationReport {
                degree: k,
                pass: true,
                max_deviation: Rational::zero(),
            });
        }
        let n = self.digraph.vertex_count();
        let regular = enumerate_regular(n, k, cap)?;
        let gk = self.gamma(k).unwrap();
        let gkm1 = self.gamma(k - 1).unwrap();
        let (rows, cols) = (regular.len(), gkm1.dim());

        // Y = D_k^T E_{k-1}: row p holds the pairings of the boundary of p
        // with the degree-(k-1) basis chains.
        let mut y = RationalMatrix::zeros(rows, cols);
        for (i, p) in regular.paths().iter().enumerate() {
            let bp = Chain::from_path(p.clone()).boundary();
            if bp.is_zero() {
                continue;
            }
            for c in 0..cols {
                y[(i, c)] = bp.dot(gkm1.basis_chain(c));
            }
        }

        // rhs = P_k Y = E (N^{-1} (E^T Y)), computed through the sparse
        // basis chains rather than a dense projector.
        let ety = RationalMatrix::from_fn(gk.dim(), cols, |j, c| {
            let mut acc = Rational::zero();
            for (p, coef) in gk.basis_chain(j).terms() {
                let row = regular.position(p).expect("support is regular");
                acc += coef * &y[(row, c)];
            }
            acc
        });
        let z = gk.norm().solve(&ety)?;
        let e = self.embedding_dense(k, cap)?;
        let rhs = e.mul(&z);
        let lhs = e.mul(&self.duals[k]);

        let mut max_dev = Rational::zero();
        for i in 0..rhs.rows() {
            for j in 0..rhs.cols() {
                let dev = (&lhs[(i, j)] - &rhs[(i, j)]).abs();
                if dev > max_dev {
                    max_dev = dev;
                }
            }
        }
        Ok(DualCommutationReport {
            degree: k,
            pass: max_dev.is_zero(),
            max_deviation: max_dev,
        })
    }

    /// Matrix of the projected total Laplacian in the embedded coordinates:
    /// M_k = (E^T E)^{-1} E^T Delta_k E. Its kernel coincides with the
    /// kernel of the embedded Hodge Laplacian.
    pub fn gamma_coordinate_total_laplacian(&self, k: usize, cap: u64) -> Result<RationalMatrix> {
        let dim = self.gamma_dim(k);
        if dim == 0 {
            return Ok(RationalMatrix::zeros(0, 0));
        }
        let n = self.digraph.vertex_count();
        let count = count_regular(n, k + 1);
        if count > num_bigint::BigUint::from(cap) {
            return Err(Error::SizeGuard {
                what: format!("projected Laplacian stream (n = {n}, k = {})", k + 1),
                requested: count.to_string(),
                cap,
            });
        }
        let g = self.gamma(k).unwrap();

        // E^T D_k^T D_k E is the Gram matrix of the boundaries of the basis
        // chains.
        let dchains: Vec<Chain> = g.basis_chains().iter().map(Chain::boundary).collect();
        let mut gram = RationalMatrix::from_fn(dim, dim, |i, j| dchains[i].dot(&dchains[j]));

        // E^T D_{k+1} D_{k+1}^T E accumulates rank-one contributions of the
        // boundary of every regular (k+1)-path, streamed without
        // materializing the total boundary matrix.
        let mut row = vec![Rational::zero(); dim];
        for_each_regular_path(n, k + 1, |vertices| {
            let p = ElementaryPath::from_slice(vertices).expect("streamed paths are regular");
            let bp = Chain::from_path(p).boundary();
            let mut touched = false;
            for (c, item) in row.iter_mut().enumerate() {
                let v = bp.dot(g.basis_chain(c));
                touched |= !v.is_zero();
                *item = v;
            }
            if touched {
                for i in 0..dim {
                    if row[i].is_zero() {
                        continue;
                    }
                    for j in 0..dim {
                        if !row[j].is_zero() {
                            let t = &row[i] * &row[j];
                            gram[(i, j)] += t;
                        }
                    }
                }
            }
        });

        g.norm().solve(&gram)
    }
}

/// Computes (D_k^G, D_k^{G,*}) from the Gram pairing G = E_{k-1}^T D_k E_k,
/// then verifies the chain-level commutation e_{k-1} D_k^G = D_k e_k.
fn gamma_boundary_pair(
    lower: &GammaBasis,
    upper: &GammaBasis,
) -> Result<(RationalMatrix, RationalMatrix)> {
    let (rows, cols) = (lower.dim(), upper.dim());
    let dchains: Vec<Chain> = upper.basis_chains().iter().map(Chain::boundary).collect();
    let pairing = RationalMatrix::from_fn(rows, cols, |i, j| lower.basis_chain(i).dot(&dchains[j]));

    let boundary = if rows == 0 {
        RationalMatrix::zeros(0, cols)
    } else {
        lower.norm().solve(&pairing)?
    };
    let dual = if cols == 0 {
        RationalMatrix::zeros(0, rows)
    } else {
        upper.norm().solve(&pairing.transpose())?
    };

    // Exact commutation: the boundary of each basis chain must reconstruct
    // from the embedded boundary coordinates. Failure here would mean the
    // completion missed part of the boundary image.
    for (j, dc) in dchains.iter().enumerate() {
        let mut rebuilt = Chain::zero(lower.degree() as i32);
        for i in 0..rows {
            let coeff = &boundary[(i, j)];
            if !coeff.is_zero() {
                rebuilt = rebuilt.add(&lower.basis_chain(i).scale(coeff));
            }
        }
        if &rebuilt != dc {
            return Err(Error::Inconsistent(format!(
                "embedded boundary does not commute with the total boundary at degree {}",
                upper.degree()
            )));
        }
    }
    Ok((boundary, dual))
}

/// The total Hodge Laplacian Delta_k = D_k^T D_k + D_{k+1} D_{k+1}^T over the
/// regular basis R_k; symmetric positive semidefinite.
pub fn hodge_laplacian_total(n: usize, k: usize, cap: u64) -> Result<RationalMatrix> {
    let dk = boundary_matrix_total(n, k, cap)?;
    let dk1 = boundary_matrix_total(n, k + 1, cap)?;
    let down = dk.transpose().mul(&dk);
    let up = dk1.mul(&dk1.transpose());
    Ok(down.add(&up))
}

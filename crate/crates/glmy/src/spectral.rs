//! Exact Betti numbers, kernel bases and the Hodge decomposition check.
//!
//! Betti numbers are computed twice on every call: by rank-nullity on the
//! embedded boundary matrices (the cheap route) and as the kernel dimension
//! of the embedded Hodge Laplacian. The two must agree exactly; a mismatch
//! is an internal error, never a tolerance question.



use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::{Rational, RationalMatrix};

/// Per-degree exact homology data.
#[derive(Clone, Debug)]
pub struct DegreeSummary {
    pub degree: usize,
    pub gamma_dim: usize,
    pub betti: usize,
    /// Rank of the embedded boundary map leaving this degree.
    pub rank_boundary: usize,
    /// Basis of ker of the embedded Hodge Laplacian, normalized to integer
    /// vectors with content 1 and positive leading coordinate.
    pub kernel_basis: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub degrees: Vec<DegreeSummary>,
    pub euler: i64,
}

impl HomologyReport {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn gamma_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.gamma_dim).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kernels: Vec<Vec<Vec<String>>> = self
            .degrees
            .iter()
            .map(|d| {
                d.kernel_basis
                    .iter()
                    .map(|v| v.iter().map(|x| x.to_string()).collect())
                    .collect()
            })
            .collect();
        serde_json::json!({
            "betti": self.betti(),
            "gamma_dims": self.gamma_dims(),
            "kernels": kernels,
            "euler": self.euler,
        })
    }
}

/// Basis of the right nullspace of an exact rational matrix; empty exactly
/// when the matrix has full column rank.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    m.kernel_basis()
}

/// Exact Betti numbers of every computed degree, with kernel bases.
pub fn betti_numbers(complex: &ChainComplex) -> Result<HomologyReport> {
    let mut degrees = Vec::new();
    let mut euler = 0i64;
    for k in 0..=complex.top_degree() {
        let gamma_dim = complex.gamma_dim(k);
        let rank_out = complex.boundary_gamma(k).rank();
        let rank_in = complex.boundary_gamma(k + 1).rank();
        let betti = gamma_dim - rank_out - rank_in;

        let kernel = complex.laplacian_gamma(k).kernel_basis();
        if kernel.len() != betti {
            return Err(Error::Inconsistent(format!(
                "rank-nullity betti {} disagrees with Laplacian kernel dimension {} at degree {}",
                betti,
                kernel.len(),
                k
            )));
        }
        euler += if k % 2 == 0 {
            betti as i64
        } else {
            -(betti as i64)
        };
        degrees.push(DegreeSummary {
            degree: k,
            gamma_dim,
            betti,
            rank_boundary: rank_out,
            kernel_basis: kernel,
        });
    }
    Ok(HomologyReport { degrees, euler })
}

/// Outcome of the exact Hodge decomposition check at one degree.
#[derive(Clone, Debug)]
pub struct HodgeDecomposition {
    pub degree: usize,
    pub gamma_dim: usize,
    pub kernel_dim: usize,
    /// rank of the incoming boundary (dimension of the exact summand)
    pub image_dim: usize,
    /// rank of the outgoing dual (dimension of the coexact summand)
    pub coimage_dim: usize,
}

/// Verifies that the embedded space splits as kernel plus boundary image
/// plus dual image: the dimensions add up, the three pieces are pairwise
/// orthogonal under the inherited inner product, and they jointly span.
pub fn hodge_decomposition_check(complex: &ChainComplex, k: usize) -> Result<HodgeDecomposition> {
    let gamma_dim = complex.gamma_dim(k);
    let laplacian = complex.laplacian_gamma(k);
    let kernel = laplacian.kernel_basis();
    let image = pivot_columns(&complex.boundary_gamma(k + 1));
    let coimage = pivot_columns(&complex.dual_gamma(k));

    let (kernel_dim, image_dim, coimage_dim) = (kernel.len(), image.len(), coimage.len());
    let report = HodgeDecomposition {
        degree: k,
        gamma_dim,
        kernel_dim,
        image_dim,
        coimage_dim,
    };
    let fail = || Error::Decomposition {
        degree: k,
        gamma: gamma_dim,
        kernel: kernel_dim,
        image: image_dim,
        coimage: coimage_dim,
    };

    if kernel_dim + image_dim + coimage_dim != gamma_dim {
        return Err(fail());
    }
    if gamma_dim == 0 {
        return Ok(report);
    }

    let norm = complex.gamma(k).expect("degree in range").norm().clone();
    let blocks = [columns_matrix(&kernel, gamma_dim), columns_matrix(&image, gamma_dim), {
        columns_matrix(&coimage, gamma_dim)
    }];
    for i in 0..3 {
        for j in i + 1..3 {
            if blocks[i].cols() == 0 || blocks[j].cols() == 0 {
                continue;
            }
            let pairing = blocks[i].transpose().mul(&norm).mul(&blocks[j]);
            if !pairing.is_zero() {
                return Err(fail());
            }
        }
    }
    let joint = blocks[0].hstack(&blocks[1]).hstack(&blocks[2]);
    if joint.rank() != gamma_dim {
        return Err(fail());
    }
    Ok(report)
}

/// An independent set of columns of `m` spanning its column space: the
/// columns picked out by the pivots of the row echelon form.
fn pivot_columns(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let (_, pivots) = m.rref();
    pivots.into_iter().map(|j| m.column(j)).collect()
}

fn columns_matrix(cols: &[Vec<Rational>], rows: usize) -> RationalMatrix {
    RationalMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
}

/// Convenience: exact Betti numbers straight from a digraph.
pub fn betti_of_digraph(g: &crate::digraph::Digraph) -> Result<Vec<usize>> {
    Ok(betti_numbers(&ChainComplex::build(g)?)?.betti())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::linalg::{proportional, rat};

    const EXAMPLE_1: &str = "1->2\n1->3\n1->4\n2->3\n2->4\n3->4";
    const EXAMPLE_2: &str = "0->1\n0->2\n1->3\n1->4\n2->3\n2->4\n5->3\n5->4";

    fn complex(text: &str) -> ChainComplex {
        ChainComplex::build(&Digraph::parse_edge_list(text).unwrap()).unwrap()
    }

    #[test]
    fn betti_of_example_1() {
        let report = betti_numbers(&complex(EXAMPLE_1)).unwrap();
        assert_eq!(report.betti(), [1, 0, 0, 0]);
        assert_eq!(report.gamma_dims(), [4, 6, 4, 1]);
        assert_eq!(report.euler, 1);
    }

    #[test]
    fn betti_of_example_2() {
        let report = betti_numbers(&complex(EXAMPLE_2)).unwrap();
        assert_eq!(report.betti(), [1, 1, 0]);
        assert_eq!(report.gamma_dims(), [6, 10, 4]);
        assert_eq!(report.euler, 0);
    }

    #[test]
    fn edgeless_graph_has_one_betti_per_vertex() {
        let g = Digraph::parse_edge_list("a\nb\nc\nd\ne").unwrap();
        let report = betti_numbers(&ChainComplex::build(&g).unwrap()).unwrap();
        assert_eq!(report.betti(), [5]);
    }

    #[test]
    fn example_2_kernel_generators_golden() {
        let c = complex(EXAMPLE_2);
        let report = betti_numbers(&c).unwrap();

        // ker of the degree-1 Laplacian in basis order
        // (01,02,13,14,23,24,53,54,03,04): the harmonic cycle
        // -13 + 14 - 23 + 24 + 3*53 - 3*54 - 03 + 04
        let k1 = &report.degrees[1].kernel_basis;
        assert_eq!(k1.len(), 1);
        let generator = vec![
            rat(0),
            rat(0),
            rat(-1),
            rat(1),
            rat(-1),
            rat(1),
            rat(3),
            rat(-3),
            rat(-1),
            rat(1),
        ];
        assert!(proportional(&k1[0], &generator));

        // ker of the degree-0 Laplacian is the all-ones vector
        let k0 = &report.degrees[0].kernel_basis;
        assert_eq!(k0.len(), 1);
        assert!(proportional(&k0[0], &vec![rat(1); 6]));
    }

    #[test]
    fn kernel_vectors_annihilate_their_laplacian() {
        let c = complex(EXAMPLE_2);
        let report = betti_numbers(&c).unwrap();
        for summary in &report.degrees {
            let l = c.laplacian_gamma(summary.degree);
            for v in &summary.kernel_basis {
                let col = RationalMatrix::from_fn(v.len(), 1, |i, _| v[i].clone());
                assert!(l.mul(&col).is_zero());
            }
        }
    }

    #[test]
    fn hodge_dimension_splits_match_the_derived_counts() {
        let d1 = hodge_decomposition_check(&complex(EXAMPLE_1), 1).unwrap();
        assert_eq!(
            (d1.gamma_dim, d1.kernel_dim, d1.image_dim, d1.coimage_dim),
            (6, 0, 3, 3)
        );

        let d2 = hodge_decomposition_check(&complex(EXAMPLE_2), 1).unwrap();
        assert_eq!(
            (d2.gamma_dim, d2.kernel_dim, d2.image_dim, d2.coimage_dim),
            (10, 1, 4, 5)
        );

        // at the top degree the exact summand vanishes
        let c2 = complex(EXAMPLE_2);
        let top = hodge_decomposition_check(&c2, c2.top_degree()).unwrap();
        assert_eq!(top.image_dim, 0);
    }

    #[test]
    fn euler_characteristic_equals_alternating_gamma_sum() {
        for text in [EXAMPLE_1, EXAMPLE_2] {
            let report = betti_numbers(&complex(text)).unwrap();
            let gamma_alt: i64 = report
                .degrees
                .iter()
                .map(|d| {
                    if d.degree % 2 == 0 {
                        d.gamma_dim as i64
                    } else {
                        -(d.gamma_dim as i64)
                    }
                })
                .sum();
            assert_eq!(gamma_alt, report.euler);
        }
    }

    #[test]
    fn report_json_has_the_published_shape() {
        let report = betti_numbers(&complex(EXAMPLE_1)).unwrap();
        let json = report.to_json();
        assert_eq!(json["betti"], serde_json::json!([1, 0, 0, 0]));
        assert_eq!(json["gamma_dims"], serde_json::json!([4, 6, 4, 1]));
        assert_eq!(json["euler"], serde_json::json!(1));
        assert!(json["kernels"].as_array().unwrap().len() == 4);
    }
}

//! Elementary paths, chains over the rationals, and the total boundary map.
//!
//! An elementary k-path is an ordered sequence of k+1 vertices; it is regular
//! when no two consecutive vertices coincide and allowed when every
//! consecutive pair is an edge of the digraph. The boundary of a path is the
//! alternating sum of its vertex deletions; deletions that produce an
//! irregular path are dropped, which is exactly the convention that makes
//! the boundary square to zero on the regular-path space.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::linalg::{Rational, RationalMatrix};

/// Default cap on the number of regular paths a single enumeration may
/// produce. Overridable from the CLI.
pub const DEFAULT_MAX_REGULAR_PATHS: u64 = 10_000_000;

/// An elementary path: a non-empty vertex sequence with no two equal
/// consecutive vertices. Ordered lexicographically by vertex indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryPath(Vec<u32>);

impl ElementaryPath {
    pub fn new(vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Inconsistent("empty vertex sequence".into()));
        }
        for (i, pair) in vertices.windows(2).enumerate() {
            if pair[0] == pair[1] {
                return Err(Error::IrregularPath { position: i });
            }
        }
        Ok(Self(vertices))
    }

    pub fn from_slice(vertices: &[u32]) -> Result<Self> {
        Self::new(vertices.to_vec())
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    /// The path length k (number of edges); a single vertex has length 0.
    pub fn edge_len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn has_distinct_vertices(&self) -> bool {
        let mut seen = self.0.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Removes the vertex at `position`; `None` when the removal makes two
    /// equal vertices adjacent (the term is regularized away) or when the
    /// path is a single vertex.
    pub fn remove_vertex(&self, position: usize) -> Option<Self> {
        if self.0.len() == 1 {
            return None;
        }
        if position > 0 && position + 1 < self.0.len() && self.0[position - 1] == self.0[position + 1]
        {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(position);
        Some(Self(v))
    }
}

impl std::fmt::Debug for ElementaryPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Formats a path through the digraph's labels; labels are concatenated when
/// they are all single characters (matching the `1234` style of small
/// examples) and comma-separated otherwise.
pub fn path_label(g: &Digraph, p: &ElementaryPath) -> String {
    let labels: Vec<&str> = p.vertices().iter().map(|&v| g.label(v)).collect();
    if g.labels().iter().all(|l| l.chars().count() == 1) {
        labels.concat()
    } else {
        labels.join(",")
    }
}

/// A finite formal linear combination of same-length elementary paths with
/// exact rational coefficients. Zero coefficients are never stored. The
/// degree is kept explicitly so the zero chain of any degree is
/// representable; the boundary of a degree-0 chain is the zero chain of the
/// sentinel degree -1.
#[derive(Clone, PartialEq, Eq)]
pub struct Chain {
    degree: i32,
    terms: BTreeMap<ElementaryPath, Rational>,
}

impl Chain {
    pub fn zero(degree: i32) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_path(p: ElementaryPath) -> Self {
        let degree = p.edge_len() as i32;
        let mut terms = BTreeMap::new();
        terms.insert(p, Rational::one());
        Self { degree, terms }
    }

    pub fn from_terms(
        degree: i32,
        terms: impl IntoIterator<Item = (ElementaryPath, Rational)>,
    ) -> Self {
        let mut chain = Self::zero(degree);
        for (p, c) in terms {
            chain.add_term(p, c);
        }
        chain
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ElementaryPath, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &ElementaryPath) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lexicographically smallest path in the support.
    pub fn leading_path(&self) -> Option<&ElementaryPath> {
        self.terms.keys().next()
    }

    pub fn add_term(&mut self, p: ElementaryPath, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(p.edge_len() as i32, self.degree, "degree mismatch");
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * s)).collect(),
        }
    }

    /// Standard inner product: paths form an orthonormal family.
    pub fn dot(&self, other: &Self) -> Rational {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Rational::zero();
        for (p, c) in &small.terms {
            if let Some(d) = large.terms.get(p) {
                acc += c * d;
            }
        }
        acc
    }

    /// Keeps only terms whose path satisfies the predicate.
    pub fn filter_paths(&self, mut keep: impl FnMut(&ElementaryPath) -> bool) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// The total boundary: alternating sum of vertex deletions with
    /// irregular terms dropped. Degree-0 chains map to the zero chain of
    /// degree -1.
    pub fn boundary(&self) -> Self {
        if self.degree <= 0 {
            return Self::zero(self.degree - 1);
        }
        let mut out = Self::zero(self.degree - 1);
        for (p, c) in &self.terms {
            for (sign, q) in boundary_terms(p) {
                out.add_term(q, c * &Rational::from_integer(sign.into()));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ChainDto::from(self)).expect("chain serialization")
    }
}

impl std::fmt::Debug for Chain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0_({})", self.degree);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| format!("{c}*{p:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct ChainDto {
    degree: i32,
    terms: Vec<ChainTermDto>,
}

#[derive(Serialize)]
struct ChainTermDto {
    path: Vec<u32>,
    coeff: String,
}

impl From<&Chain> for ChainDto {
    fn from(chain: &Chain) -> Self {
        Self {
            degree: chain.degree,
            terms: chain
                .terms()
                .map(|(p, c)| ChainTermDto {
                    path: p.vertices().to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

/// Signed vertex deletions of a single path, irregular results dropped.
pub fn boundary_terms(p: &ElementaryPath) -> Vec<(i8, ElementaryPath)> {
    let mut out = Vec::with_capacity(p.vertices().len());
    if p.edge_len() == 0 {
        return out;
    }
    for i in 0..p.vertices().len() {
        if let Some(q) = p.remove_vertex(i) {
            out.push((if i % 2 == 0 { 1 } else { -1 }, q));
        }
    }
    out
}

/// A deterministic, lexicographically ordered basis of elementary paths of
/// one degree (either all regular paths R_k, or the allowed paths A_k).
#[derive(Clone, Debug)]
pub struct PathBasis {
    degree: usize,
    paths: Vec<ElementaryPath>,
}

impl PathBasis {
    fn new(degree: usize, paths: Vec<ElementaryPath>) -> Self {
        debug_assert!(paths.windows(2).all(|w| w[0] < w[1]), "basis must be sorted");
        Self { degree, paths }
    }

    pub fn empty(degree: usize) -> Self {
        Self::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[ElementaryPath] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &ElementaryPath {
        &self.paths[i]
    }

    /// Column index of a path, by binary search in the sorted basis.
    pub fn position(&self, p: &ElementaryPath) -> Option<usize> {
        self.paths.binary_search(p).ok()
    }

    pub fn contains(&self, p: &ElementaryPath) -> bool {
        self.position(p).is_some()
    }
}

/// Exact count of regular k-paths on n vertices: n * (n-1)^k.
pub fn count_regular(n: usize, k: usize) -> BigUint {
    BigUint::from(n) * BigUint::from(n.saturating_sub(1)).pow(k as u32)
}

fn guard_regular(n: usize, k: usize, cap: u64, what: &str) -> Result<()> {
    let count = count_regular(n, k);
    if count > BigUint::from(cap) {
        return Err(Error::SizeGuard {
            what: format!("{what} (n = {n}, k = {k})"),
            requested: count.to_string(),
            cap,
        });
    }
    Ok(())
}

/// Streams all regular k-paths on vertices `0..n` in lexicographic order
/// without materializing the basis.
pub fn for_each_regular_path(n: usize, k: usize, mut f: impl FnMut(&[u32])) {
    fn rec(n: u32, target: usize, prefix: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if prefix.len() == target {
            f(prefix);
            return;
        }
        for v in 0..n {
            if prefix.last() == Some(&v) {
                continue;
            }
            prefix.push(v);
            rec(n, target, prefix, f);
            prefix.pop();
        }
    }
    if n == 0 {
        return;
    }
    rec(n as u32, k + 1, &mut Vec::with_capacity(k + 1), &mut f);
}

/// All n*(n-1)^k regular elementary k-paths, lexicographically ordered.
/// Guarded by `cap` on the path count.
pub fn enumerate_regular(n: usize, k: usize, cap: u64) -> Result<PathBasis> {
    guard_regular(n, k, cap, "regular path basis")?;
    let mut paths = Vec::new();
    for_each_regular_path(n, k, |p| paths.push(ElementaryPath(p.to_vec())));
    Ok(PathBasis::new(k, paths))
}

/// All allowed k-paths of the digraph (directed walks with k edges),
/// lexicographically ordered. Acyclicity bounds both their length and count,
/// so no size guard is needed.
pub fn enumerate_allowed(g: &Digraph, k: usize) -> PathBasis {
    fn rec(g: &Digraph, target: usize, prefix: &mut Vec<u32>, out: &mut Vec<ElementaryPath>) {
        if prefix.len() == target {
            out.push(ElementaryPath(prefix.clone()));
            return;
        }
        let last = *prefix.last().unwrap();
        for &v in g.out_neighbors(last) {
            prefix.push(v);
            rec(g, target, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for start in 0..g.vertex_count() as u32 {
        let mut prefix = vec![start];
        rec(g, k + 1, &mut prefix, &mut out);
    }
    PathBasis::new(k, out)
}

/// The total boundary matrix D_k over the regular bases R_{k-1} and R_k;
/// entries lie in {-1, 0, +1}. For k = 0 the matrix has zero rows.
pub fn boundary_matrix_total(n: usize, k: usize, cap: u64) -> Result<RationalMatrix> {
    let domain = enumerate_regular(n, k, cap)?;
    if k == 0 {
        return Ok(RationalMatrix::zeros(0, domain.len()));
    }
    let codomain = enumerate_regular(n, k - 1, cap)?;
    let mut m = RationalMatrix::zeros(codomain.len(), domain.len());
    for (j, p) in domain.paths().iter().enumerate() {
        for (sign, q) in boundary_terms(p) {
            let i = codomain
                .position(&q)
                .expect("boundary of a regular path is regular");
            m[(i, j)] += Rational::from_integer(sign.into());
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn path(v: &[u32]) -> ElementaryPath {
        ElementaryPath::from_slice(v).unwrap()
    }

    #[test]
    fn rejects_irregular_sequences() {
        assert!(matches!(
            ElementaryPath::from_slice(&[0, 0]),
            Err(Error::IrregularPath { position: 0 })
        ));
        assert!(ElementaryPath::from_slice(&[0, 1, 0]).is_ok());
    }

    #[test]
    fn regular_enumeration_counts() {
        let b = enumerate_regular(2, 1, DEFAULT_MAX_REGULAR_PATHS).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.paths(), &[path(&[0, 1]), path(&[1, 0])]);

        let b0 = enumerate_regular(4, 0, DEFAULT_MAX_REGULAR_PATHS).unwrap();
        assert_eq!(b0.len(), 4);

        // Independent oracle: filter every length-3 tuple by regularity.
        let mut brute = 0;
        for a in 0..3u32 {
            for b in 0..3u32 {
                for c in 0..3u32 {
                    if a != b && b != c {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(brute, 12);
        assert_eq!(
            enumerate_regular(3, 2, DEFAULT_MAX_REGULAR_PATHS).unwrap().len(),
            brute
        );
        assert_eq!(count_regular(3, 2), BigUint::from(12u32));
    }

    #[test]
    fn size_guard_trips() {
        let err = enumerate_regular(10, 8, 1000).unwrap_err();
        assert!(matches!(err, Error::SizeGuard { cap: 1000, .. }));
    }

    #[test]
    fn allowed_paths_of_the_worked_examples() {
        let g1 = Digraph::parse_edge_list("1->2\n1->3\n1->4\n2->3\n2->4\n3->4").unwrap();
        let a2 = enumerate_allowed(&g1, 2);
        let names: Vec<String> = a2.paths().iter().map(|p| path_label(&g1, p)).collect();
        assert_eq!(names, ["123", "124", "134", "234"]);

        let g2 =
            Digraph::parse_edge_list("0->1\n0->2\n1->3\n1->4\n2->3\n2->4\n5->3\n5->4").unwrap();
        let a2 = enumerate_allowed(&g2, 2);
        let names: Vec<String> = a2.paths().iter().map(|p| path_label(&g2, p)).collect();
        assert_eq!(names, ["013", "014", "023", "024"]);

        assert!(enumerate_allowed(&g2, 3).is_empty());
        assert!(enumerate_allowed(&g2, 5).is_empty());
    }

    #[test]
    fn boundary_of_the_worked_paths() {
        // 1234 in Example 1 is the index path (0,1,2,3)
        let b = Chain::from_path(path(&[0, 1, 2, 3])).boundary();
        let expected = Chain::from_terms(
            2,
            [
                (path(&[1, 2, 3]), rat(1)),
                (path(&[0, 2, 3]), rat(-1)),
                (path(&[0, 1, 3]), rat(1)),
                (path(&[0, 1, 2]), rat(-1)),
            ],
        );
        assert_eq!(b, expected);

        // 013 in Example 2 uses indices directly
        let b = Chain::from_path(path(&[0, 1, 3])).boundary();
        let expected = Chain::from_terms(
            1,
            [
                (path(&[1, 3]), rat(1)),
                (path(&[0, 3]), rat(-1)),
                (path(&[0, 1]), rat(1)),
            ],
        );
        assert_eq!(b, expected);
    }

    #[test]
    fn boundary_drops_irregular_terms() {
        // d(121) = 21 - 11 + 12, and 11 is regularized away
        let b = Chain::from_path(path(&[1, 2, 1])).boundary();
        let expected = Chain::from_terms(
            1,
            [(path(&[2, 1]), rat(1)), (path(&[1, 2]), rat(1))],
        );
        assert_eq!(b, expected);
    }

    #[test]
    fn boundary_of_degree_zero_is_the_sentinel_zero_chain() {
        let b = Chain::from_path(path(&[3])).boundary();
        assert!(b.is_zero());
        assert_eq!(b.degree(), -1);
    }

    #[test]
    fn boundary_squares_to_zero_on_random_combinations() {
        let c = Chain::from_terms(
            3,
            [
                (path(&[0, 1, 2, 3]), rat(3)),
                (path(&[1, 0, 1, 2]), rat(-7)),
                (path(&[2, 1, 2, 1]), Rational::new(5.into(), 3.into())),
            ],
        );
        assert!(c.boundary().boundary().is_zero());
    }

    #[test]
    fn total_boundary_matrix_small_cases() {
        let d1 = boundary_matrix_total(2, 1, DEFAULT_MAX_REGULAR_PATHS).unwrap();
        assert_eq!(d1, RationalMatrix::from_int_rows(&[&[-1, 1], &[1, -1]]));

        let d0 = boundary_matrix_total(3, 0, DEFAULT_MAX_REGULAR_PATHS).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (0, 3));

        // composition is zero and columns have at most k+1 entries in {-1,0,1}
        for k in [1usize, 2, 3] {
            let dk = boundary_matrix_total(3, k, DEFAULT_MAX_REGULAR_PATHS).unwrap();
            let dk1 = boundary_matrix_total(3, k - 1, DEFAULT_MAX_REGULAR_PATHS).unwrap();
            assert!(dk1.mul(&dk).is_zero());
            for j in 0..dk.cols() {
                let nonzero = (0..dk.rows())
                    .filter(|&i| !dk[(i, j)].is_zero())
                    .count();
                assert!(nonzero <= k + 1);
                for i in 0..dk.rows() {
                    let e = &dk[(i, j)];
                    assert!(e.is_zero() || e == &rat(1) || e == &rat(-1));
                }
            }
        }
    }

    #[test]
    fn allowed_columns_of_total_d1_match_example_1() {
        // In Example 1 every 0-path is allowed, so restricting D_1 to the
        // allowed columns must reproduce the displayed boundary matrix.
        let g = Digraph::parse_edge_list("1->2\n1->3\n1->4\n2->3\n2->4\n3->4").unwrap();
        let d1 = boundary_matrix_total(4, 1, DEFAULT_MAX_REGULAR_PATHS).unwrap();
        let r1 = enumerate_regular(4, 1, DEFAULT_MAX_REGULAR_PATHS).unwrap();
        let a1 = enumerate_allowed(&g, 1);
        let expected = RationalMatrix::from_int_rows(&[
            &[-1, -1, -1, 0, 0, 0],
            &[1, 0, 0, -1, -1, 0],
            &[0, 1, 0, 1, 0, -1],
            &[0, 0, 1, 0, 1, 1],
        ]);
        let restricted = RationalMatrix::from_fn(4, a1.len(), |i, j| {
            let col = r1.position(a1.path(j)).unwrap();
            d1[(i, col)].clone()
        });
        assert_eq!(restricted, expected);
    }

    #[test]
    fn chain_json_shape() {
        let c = Chain::from_terms(
            1,
            [
                (path(&[0, 1]), rat(1)),
                (path(&[0, 3]), Rational::new((-1).into(), 2.into())),
            ],
        );
        assert_eq!(
            c.to_json(),
            serde_json::json!({
                "degree": 1,
                "terms": [
                    {"path": [0, 1], "coeff": "1"},
                    {"path": [0, 3], "coeff": "-1/2"},
                ]
            })
        );
    }
}

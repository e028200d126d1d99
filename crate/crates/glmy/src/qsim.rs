//! Classical simulation of the quantum Betti-number estimator.
//!
//! Three layers live here. The register encoding maps a path into one order
//! value per vertex: the register of the vertex sitting at position a on the
//! path holds a+1, every other register holds 0, and the boundary acts on
//! registers by zeroing the deleted vertex and decrementing every vertex
//! that follows it along the path. The Dirac operator ties the boundary
//! blocks into one symmetric matrix whose square is block-diagonal with the
//! total Hodge Laplacians. Phase estimation is simulated at the spectral
//! level: the projected Laplacian (the squared Dirac operator with the
//! embedded-subspace projector interleaved around each boundary factor) is
//! diagonalized in floating point, each eigenvector is weighted by its
//! overlap with the maximally mixed state on the embedded subspace, and
//! eigenvalues are drawn from that distribution with a counter-based seeded
//! stream. The zero-eigenvalue frequency times the embedded dimension
//! estimates the Betti number.


use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::path::{
    boundary_terms, count_regular, enumerate_regular, for_each_regular_path, ElementaryPath,
    PathBasis,
};
use crate::rng::indexed_unit;

/// Register width, in bits, that stores order values 0..=d+1: the bit length
/// of d+1.
fn register_bits(max_len: usize) -> u32 {
    let top = (max_len + 1) as u64;
    u64::BITS - top.leading_zeros()
}

/// The path-to-qubit register encoding for paths of length at most `max_len`
/// on `n` vertices.
#[derive(Clone, Copy, Debug)]
pub struct QubitEncoding {
    n: usize,
    max_len: usize,
    bits: u32,
}

impl QubitEncoding {
    pub fn new(n: usize, max_len: usize) -> Self {
        Self {
            n,
            max_len,
            bits: register_bits(max_len),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn bits_per_register(&self) -> u32 {
        self.bits
    }

    pub fn total_qubits(&self) -> usize {
        self.n * self.bits as usize
    }

    /// Encodes a path with pairwise-distinct vertices: register v_a holds
    /// a+1, all other registers hold 0.
    pub fn encode(&self, p: &ElementaryPath) -> Result<EncodedPath> {
        if p.edge_len() > self.max_len {
            return Err(Error::PathTooLong {
                len: p.edge_len(),
                max: self.max_len,
            });
        }
        let mut registers = vec![0u32; self.n];
        for (position, &v) in p.vertices().iter().enumerate() {
            if v as usize >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            if registers[v as usize] != 0 {
                return Err(Error::RepeatedVertex { vertex: v });
            }
            registers[v as usize] = position as u32 + 1;
        }
        Ok(EncodedPath {
            registers,
            bits: self.bits,
        })
    }

    /// Reconstructs a path from register order values; rejects any register
    /// configuration outside the path code.
    pub fn decode_registers(&self, registers: &[u32]) -> Result<ElementaryPath> {
        if registers.len() != self.n {
            return Err(Error::NonPathBitstring {
                reason: format!("expected {} registers, got {}", self.n, registers.len()),
            });
        }
        let mut present: Vec<(u32, u32)> = registers
            .iter()
            .enumerate()
            .filter(|(_, &val)| val != 0)
            .map(|(v, &val)| (val, v as u32))
            .collect();
        if present.is_empty() {
            return Err(Error::NonPathBitstring {
                reason: "no vertices: all registers are zero".into(),
            });
        }
        present.sort_unstable();
        for (expect, &(val, _)) in (1..).zip(present.iter()) {
            if val != expect {
                return Err(Error::NonPathBitstring {
                    reason: format!("order values must be exactly 1..=m, found {val}"),
                });
            }
        }
        if present.len() - 1 > self.max_len {
            return Err(Error::NonPathBitstring {
                reason: format!(
                    "decoded length {} exceeds the encoding width {}",
                    present.len() - 1,
                    self.max_len
                ),
            });
        }
        ElementaryPath::new(present.into_iter().map(|(_, v)| v).collect())
    }

    /// Decodes a concatenated bitstring (registers in ascending vertex
    /// order, each register a most-significant-bit-first binary value).
    pub fn decode_bits(&self, bits: &str) -> Result<ElementaryPath> {
        let expected = self.total_qubits();
        let chars: Vec<char> = bits.chars().collect();
        if chars.len() != expected {
            return Err(Error::NonPathBitstring {
                reason: format!("expected {expected} bits, got {}", chars.len()),
            });
        }
        let mut registers = Vec::with_capacity(self.n);
        for chunk in chars.chunks(self.bits as usize) {
            let mut val = 0u32;
            for &c in chunk {
                val = (val << 1)
                    | match c {
                        '0' => 0,
                        '1' => 1,
                        _ => {
                            return Err(Error::NonPathBitstring {
                                reason: format!("invalid bit character `{c}`"),
                            })
                        }
                    };
            }
            registers.push(val);
        }
        self.decode_registers(&registers)
    }

    /// The register-level boundary of an encoded path: term i zeroes the
    /// register of the vertex at position i and decrements the registers of
    /// every vertex after it on the path, with sign (-1)^i. Terms decoding
    /// to irregular paths would be dropped, mirroring the chain boundary.
    pub fn boundary_action(&self, p: &ElementaryPath) -> Result<Vec<(i8, EncodedPath)>> {
        let base = self.encode(p)?;
        let vertices = p.vertices();
        let mut out = Vec::with_capacity(vertices.len());
        if vertices.len() == 1 {
            return Ok(out);
        }
        for i in 0..vertices.len() {
            let mut registers = base.registers.clone();
            registers[vertices[i] as usize] = 0;
            for &w in &vertices[i + 1..] {
                registers[w as usize] -= 1;
            }
            if self.decode_registers(&registers).is_err() {
                continue;
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            out.push((
                sign,
                EncodedPath {
                    registers,
                    bits: self.bits,
                },
            ));
        }
        Ok(out)
    }
}

/// A basis bitstring of the path code, kept as per-vertex register values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedPath {
    registers: Vec<u32>,
    bits: u32,
}

impl EncodedPath {
    pub fn registers(&self) -> &[u32] {
        &self.registers
    }

    /// Per-register binary strings, most significant bit first.
    pub fn register_strings(&self) -> Vec<String> {
        self.registers
            .iter()
            .map(|&v| {
                (0..self.bits)
                    .rev()
                    .map(|b| if v >> b & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Registers concatenated in ascending vertex-index order.
    pub fn bitstring(&self) -> String {
        self.register_strings().concat()
    }
}

/// The Dirac operator B over the direct sum of the regular-path spaces of
/// degrees 0..=d: block tridiagonal with the total boundary matrices and
/// their transposes. B is symmetric and B^2 is block diagonal with the total
/// Hodge Laplacians.
pub fn dirac_operator(n: usize, d: usize, cap: u64) -> Result<RationalMatrix> {
    let mut total = BigUint::ZERO;
    for k in 0..=d {
        total += count_regular(n, k);
    }
    if total > BigUint::from(cap) {
        return Err(Error::SizeGuard {
            what: format!("Dirac operator over degrees 0..={d}"),
            requested: total.to_string(),
            cap,
        });
    }
    let sizes: Vec<usize> = (0..=d)
        .map(|k| count_regular(n, k).to_usize().expect("guarded"))
        .collect();
    let mut offsets = vec![0usize];
    for s in &sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let dim = *offsets.last().unwrap();
    let mut b = RationalMatrix::zeros(dim, dim);
    for k in 1..=d {
        let dk = crate::path::boundary_matrix_total(n, k, cap)?;
        for i in 0..dk.rows() {
            for j in 0..dk.cols() {
                if !dk[(i, j)].is_zero() {
                    b[(offsets[k - 1] + i, offsets[k] + j)] = dk[(i, j)].clone();
                    b[(offsets[k] + j, offsets[k - 1] + i)] = dk[(i, j)].clone();
                }
            }
        }
    }
    Ok(b)
}

/// Configuration of one simulated phase-estimation run.
#[derive(Clone, Debug)]
pub struct PhaseEstimationConfig {
    pub degree: usize,
    pub shots: u64,
    /// `None` means exact eigenvalues; `Some(t)` rounds each phase to t bits
    /// before classification.
    pub phase_bits: Option<u32>,
    pub seed: u64,
    /// Divide the spectrum by the largest eigenvalue of the total Laplacian
    /// before classification.
    pub rescale: bool,
}

impl PhaseEstimationConfig {
    pub fn new(degree: usize, shots: u64, seed: u64) -> Self {
        Self {
            degree,
            shots,
            phase_bits: None,
            seed,
            rescale: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Inconsistent("shots must be at least 1".into()));
        }
        if self.phase_bits == Some(0) {
            return Err(Error::Inconsistent("phase bits must be at least 1".into()));
        }
        Ok(())
    }
}

/// One line of the reported spectrum: an eigenvalue cluster with its total
/// overlap probability under the mixed input state.
#[derive(Clone, Debug)]
pub struct SpectrumPoint {
    pub lambda: f64,
    pub prob: f64,
    pub multiplicity: usize,
    pub is_zero: bool,
}

/// Full output of a simulated run.
#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub degree: usize,
    pub gamma_dim: usize,
    pub lambda_dim: usize,
    pub shots: u64,
    pub seed: u64,
    pub phase_bits: Option<u32>,
    pub rescale: bool,
    pub lambda_max: f64,
    pub spectrum: Vec<SpectrumPoint>,
    /// Total probability of the zero-classified eigenvalues; by the
    /// kernel equivalence this equals betti / gamma_dim up to float noise.
    pub zero_mass: f64,
    pub samples: Vec<f64>,
    pub zero_count: u64,
    pub c_hat: f64,
    pub betti_hat: usize,
    pub zeta: f64,
    pub qubits: usize,
}

impl EstimateReport {
    pub fn to_json(&self) -> serde_json::Value {
        let phase_bits = match self.phase_bits {
            Some(t) => serde_json::json!(t),
            None => serde_json::json!("exact"),
        };
        let spectrum: Vec<serde_json::Value> = self
            .spectrum
            .iter()
            .map(|s| {
                serde_json::json!({
                    "lambda": s.lambda,
                    "prob": s.prob,
                    "multiplicity": s.multiplicity,
                    "zero": s.is_zero,
                })
            })
            .collect();
        serde_json::json!({
            "k": self.degree,
            "shots": self.shots,
            "seed": self.seed,
            "phase_bits": phase_bits,
            "rescale": self.rescale,
            "lambda_max": self.lambda_max,
            "gamma_dim": self.gamma_dim,
            "lambda_dim": self.lambda_dim,
            "spectrum": spectrum,
            "zero_mass": self.zero_mass,
            "zero_count": self.zero_count,
            "c_hat": self.c_hat,
            "betti_hat": self.betti_hat,
            "zeta": self.zeta,
            "qubits": self.qubits,
        })
    }
}

/// Threshold below which a rescaled eigenvalue counts as zero in exact mode.
const ZERO_EIGENVALUE_TOLERANCE: f64 = 1e-8;

fn to_f64_rows(m: &RationalMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].to_f64().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (rows, inner) = (a.len(), b.len());
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0.0; cols]; rows];
    for i in 0..rows {
        for t in 0..inner {
            let v = a[i][t];
            if v == 0.0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += v * b[t][j];
            }
        }
    }
    out
}

fn symmetrized(m: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = 0.5 * (m[i][j] + m[j][i]);
        }
    }
    out
}

/// Q f(diag) Q^T for a spectral decomposition (values, Q columns as rows of
/// the returned transposed layout below).
fn similarity_scale(q: &[Vec<f64>], values: &[f64], f: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
    let n = values.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for (t, &val) in values.iter().enumerate() {
                acc += q[i][t] * f(val) * q[j][t];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns the unsorted eigenvalues and the orthogonal matrix of
/// eigenvectors (column t of Q, stored as q[i][t], pairs with value t).
/// Deterministic: fixed sweep order, fixed convergence threshold.
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut q = vec![vec![0.0; n]; n];
    for (i, row) in q.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    if n < 2 {
        return (a.iter().enumerate().map(|(i, r)| r[i]).collect(), q);
    }
    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < 1e-14 * scale {
            break;
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apr = a[p][r];
                if apr.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[r][r] - a[p][p]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let (aip, air) = (a[i][p], a[i][r]);
                    a[i][p] = c * aip - s * air;
                    a[i][r] = s * aip + c * air;
                }
                for j in 0..n {
                    let (apj, arj) = (a[p][j], a[r][j]);
                    a[p][j] = c * apj - s * arj;
                    a[r][j] = s * apj + c * arj;
                }
                for i in 0..n {
                    let (qip, qir) = (q[i][p], q[i][r]);
                    q[i][p] = c * qip - s * qir;
                    q[i][r] = s * qip + c * qir;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), q)
}

/// Simulates the phase-estimation estimator at one degree: diagonalizes the
/// projected Laplacian on the regular-path space, weights eigenvectors by
/// their overlap with the normalized projector onto the embedded subspace,
/// draws `shots` eigenvalue samples, and reports the zero-frequency Betti
/// estimate.
pub fn run_phase_estimation(
    complex: &ChainComplex,
    cfg: &PhaseEstimationConfig,
    cap: u64,
) -> Result<EstimateReport> {
    cfg.validate()?;
    let k = cfg.degree;
    if k > complex.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            top: complex.top_degree(),
        });
    }
    let g = complex.digraph();
    let n = g.vertex_count();
    let gamma_dim = complex.gamma_dim(k);
    let qubits = QubitEncoding::new(n, g.max_allowed_path_length()).total_qubits();
    let lambda_dim = count_regular(n, k)
        .to_u64()
        .filter(|&c| c <= cap)
        .ok_or_else(|| Error::SizeGuard {
            what: format!("phase estimation at degree {k}"),
            requested: count_regular(n, k).to_string(),
            cap,
        })? as usize;

    if gamma_dim == 0 {
        // Degenerate input: the embedded space is empty, so the Betti number
        // is 0 and there is nothing to sample.
        return Ok(EstimateReport {
            degree: k,
            gamma_dim,
            lambda_dim,
            shots: 0,
            seed: cfg.seed,
            phase_bits: cfg.phase_bits,
            rescale: cfg.rescale,
            lambda_max: 0.0,
            spectrum: Vec::new(),
            zero_mass: 0.0,
            samples: Vec::new(),
            zero_count: 0,
            c_hat: 0.0,
            betti_hat: 0,
            zeta: 0.0,
            qubits,
        });
    }

    // The simulated Hamiltonian is the degree-k block of the squared Dirac
    // operator with the embedded-subspace projector applied around every
    // boundary factor. Projecting only the outside is not enough: the total
    // dual boundary leaves the embedded subspace, so the outer-projected
    // square gains rank over the embedded Laplacian. With the interleaved
    // projectors the block collapses exactly to E (Lap N^{-1}) E^T, which
    // block-diagonalizes into the embedded Laplacian on the subspace and an
    // exactly-zero complement of dimension lambda - gamma. Each subspace
    // eigenvector overlaps the mixed input state with weight exactly
    // 1/gamma, and the complement carries no weight, so only the small
    // symmetric sector needs diagonalizing.
    let gamma = complex.gamma(k).expect("degree in range");
    let lap = to_f64_rows(&complex.laplacian_gamma(k));
    let sector = if gamma.norm() == &RationalMatrix::identity(gamma_dim) {
        lap
    } else {
        // symmetrize by the norm square root: N^{1/2} Lap N^{-1/2}
        let (nv, nq) = jacobi_eigen(to_f64_rows(gamma.norm()));
        let sqrt = similarity_scale(&nq, &nv, f64::sqrt);
        let inv_sqrt = similarity_scale(&nq, &nv, |x| 1.0 / x.sqrt());
        let s = mat_mul(&mat_mul(&sqrt, &lap), &inv_sqrt);
        symmetrized(s)
    };
    let mut eigenvalues = jacobi_eigen(sector).0;
    eigenvalues.sort_by(f64::total_cmp);
    let probabilities = vec![1.0 / gamma_dim as f64; gamma_dim];

    let lambda_max = if cfg.rescale {
        let mut largest = 0.0f64;
        for j in 0..=complex.top_degree() {
            largest = largest.max(total_laplacian_lambda_max(n, j, cap)?);
        }
        largest
    } else {
        1.0
    };
    let scale = if cfg.rescale && lambda_max > f64::EPSILON {
        lambda_max
    } else {
        1.0
    };

    // Classify each sector eigenvalue as zero or not, and fix the value a
    // sample of it reports (raw in exact mode, de-quantized in t-bit mode).
    let mut is_zero = vec![false; gamma_dim];
    let mut reported = vec![0.0f64; gamma_dim];
    for i in 0..gamma_dim {
        let scaled = eigenvalues[i] / scale;
        match cfg.phase_bits {
            None => {
                is_zero[i] = scaled.abs() < ZERO_EIGENVALUE_TOLERANCE;
                reported[i] = eigenvalues[i];
            }
            Some(t) => {
                let phase = scaled / std::f64::consts::TAU;
                let bins = (1u64 << t.min(62)) as f64;
                let m = (phase * bins).round();
                is_zero[i] = m == 0.0;
                reported[i] = m / bins * std::f64::consts::TAU * scale;
            }
        }
    }
    let zero_mass: f64 = probabilities
        .iter()
        .zip(&is_zero)
        .filter(|(_, &z)| z)
        .map(|(p, _)| p)
        .sum();

    // Deterministic categorical sampling via per-shot counter streams. The
    // orthogonal complement never contributes: its overlap is zero.
    let mut cumulative = Vec::with_capacity(gamma_dim);
    let mut acc = 0.0;
    for p in &probabilities {
        acc += p;
        cumulative.push(acc);
    }
    let mut samples = Vec::with_capacity(cfg.shots as usize);
    let mut zero_count = 0u64;
    for shot in 0..cfg.shots {
        let u = indexed_unit(cfg.seed, shot) * acc;
        let idx = cumulative.partition_point(|&c| c <= u).min(gamma_dim - 1);
        samples.push(reported[idx]);
        if is_zero[idx] {
            zero_count += 1;
        }
    }
    let c_hat = zero_count as f64 / cfg.shots as f64;
    let betti_hat = (c_hat * gamma_dim as f64).round() as usize;

    let mut spectrum = cluster_spectrum(&probabilities, &is_zero, &reported, scale);
    // fold the zero eigenvectors of the orthogonal complement into the
    // reported spectrum with probability zero
    let ortho = lambda_dim - gamma_dim;
    if ortho > 0 {
        if let Some(line) = spectrum.iter_mut().find(|s| s.is_zero) {
            line.multiplicity += ortho;
        } else {
            spectrum.insert(
                0,
                SpectrumPoint {
                    lambda: 0.0,
                    prob: 0.0,
                    multiplicity: ortho,
                    is_zero: true,
                },
            );
        }
    }
    let zeta = gamma_dim as f64 / lambda_dim as f64;

    Ok(EstimateReport {
        degree: k,
        gamma_dim,
        lambda_dim,
        shots: cfg.shots,
        seed: cfg.seed,
        phase_bits: cfg.phase_bits,
        rescale: cfg.rescale,
        lambda_max,
        spectrum,
        zero_mass,
        samples,
        zero_count,
        c_hat,
        betti_hat,
        zeta,
        qubits,
    })
}

fn cluster_spectrum(
    probabilities: &[f64],
    is_zero: &[bool],
    reported: &[f64],
    scale: f64,
) -> Vec<SpectrumPoint> {
    let mut order: Vec<usize> = (0..reported.len()).collect();
    order.sort_by(|&a, &b| reported[a].total_cmp(&reported[b]));
    let tol = 1e-7 * scale.max(1.0);
    let mut out: Vec<SpectrumPoint> = Vec::new();
    let mut members: Vec<(f64, f64, bool)> = Vec::new();
    let flush = |members: &mut Vec<(f64, f64, bool)>, out: &mut Vec<SpectrumPoint>| {
        if members.is_empty() {
            return;
        }
        let multiplicity = members.len();
        let lambda = members.iter().map(|m| m.0).sum::<f64>() / multiplicity as f64;
        let prob = members.iter().map(|m| m.1).sum::<f64>();
        let zero = members.iter().all(|m| m.2);
        out.push(SpectrumPoint {
            lambda,
            prob,
            multiplicity,
            is_zero: zero,
        });
        members.clear();
    };
    for &i in &order {
        if let Some(last) = members.last() {
            if (reported[i] - last.0).abs() > tol {
                flush(&mut members, &mut out);
            }
        }
        members.push((reported[i], probabilities[i], is_zero[i]));
    }
    flush(&mut members, &mut out);
    out
}

/// Largest eigenvalue of the total Hodge Laplacian at one degree, by
/// matrix-free power iteration over the streamed boundary action. Seeded
/// with a fixed internal constant, so the result does not depend on the
/// sampling seed.
fn total_laplacian_lambda_max(n: usize, k: usize, cap: u64) -> Result<f64> {
    let basis = enumerate_regular(n, k, cap)?;
    let dim = basis.len();
    if dim == 0 {
        return Ok(0.0);
    }
    let lower = if k == 0 {
        PathBasis::empty(0)
    } else {
        enumerate_regular(n, k - 1, cap)?
    };
    let upper_count = count_regular(n, k + 1);
    if upper_count > BigUint::from(cap) {
        return Err(Error::SizeGuard {
            what: format!("Laplacian norm stream (n = {n}, k = {})", k + 1),
            requested: upper_count.to_string(),
            cap,
        });
    }

    // Signed index lists of the boundary of every path in the two streamed
    // degrees, precomputed once.
    let down: Vec<Vec<(f64, usize)>> = basis
        .paths()
        .iter()
        .map(|p| {
            boundary_terms(p)
                .into_iter()
                .map(|(s, q)| (f64::from(s), lower.position(&q).expect("regular")))
                .collect()
        })
        .collect();
    let mut up: Vec<Vec<(f64, usize)>> = Vec::new();
    for_each_regular_path(n, k + 1, |vertices| {
        let p = ElementaryPath::from_slice(vertices).expect("streamed paths are regular");
        up.push(
            boundary_terms(&p)
                .into_iter()
                .map(|(s, q)| (f64::from(s), basis.position(&q).expect("regular")))
                .collect(),
        );
    });

    let apply = |x: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; dim];
        if !lower.is_empty() {
            let mut t = vec![0.0; lower.len()];
            for (p, terms) in down.iter().enumerate() {
                if x[p] != 0.0 {
                    for &(s, q) in terms {
                        t[q] += s * x[p];
                    }
                }
            }
            for (p, terms) in down.iter().enumerate() {
                let mut acc = 0.0;
                for &(s, q) in terms {
                    acc += s * t[q];
                }
                y[p] += acc;
            }
        }
        for terms in &up {
            let mut c = 0.0;
            for &(s, q) in terms {
                c += s * x[q];
            }
            if c != 0.0 {
                for &(s, q) in terms {
                    y[q] += s * c;
                }
            }
        }
        y
    };

    let mut rng = crate::rng::SplitMix64::new(0xB5D1_AC00 ^ k as u64);
    let mut x: Vec<f64> = (0..dim).map(|_| rng.next_f64() + 0.5).collect();
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nx = norm(&x);
    x.iter_mut().for_each(|a| *a /= nx);
    let mut lambda = 0.0;
    for _ in 0..200 {
        let y = apply(&x);
        let ny = norm(&y);
        if ny < 1e-300 {
            return Ok(0.0);
        }
        lambda = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        x = y;
        x.iter_mut().for_each(|a| *a /= ny);
    }
    Ok(lambda.max(0.0))
}

/// Accounting quantities of the quantum algorithm at one degree: the
/// embedded fraction of the regular-path space, the Grover-search and
/// amplitude-encoding step estimates, and the register qubit count.
/// Reporting only; no circuits are synthesized.
#[derive(Clone, Debug)]
pub struct ComplexityReport {
    pub degree: usize,
    pub gamma_dim: usize,
    pub regular_count: BigUint,
    pub zeta: f64,
    pub zeta_exact: String,
    pub grover_steps: u128,
    pub amplitude_steps: u128,
    pub qubits: usize,
}

impl ComplexityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.degree,
            "gamma_dim": self.gamma_dim,
            "regular_paths": self.regular_count.to_string(),
            "zeta": self.zeta,
            "zeta_exact": self.zeta_exact,
            "grover_steps": self.grover_steps,
            "amplitude_steps": self.amplitude_steps,
            "qubits": self.qubits,
        })
    }
}

pub fn complexity_report(complex: &ChainComplex, k: usize) -> Result<ComplexityReport> {
    if k > complex.top_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            top: complex.top_degree(),
        });
    }
    let g = complex.digraph();
    let n = g.vertex_count();
    let gamma_dim = complex.gamma_dim(k);
    let regular_count = count_regular(n, k);
    let lambda = regular_count.to_f64().unwrap_or(f64::INFINITY);
    let zeta = gamma_dim as f64 / lambda;
    let zeta_exact = Ratio::new(
        num_bigint::BigInt::from(gamma_dim),
        num_bigint::BigInt::from(regular_count.clone()),
    )
    .to_string();
    let grover_steps = (lambda / gamma_dim as f64).sqrt().ceil() as u128;
    let nlogn = n as f64 * (n as f64).log2();
    let amplitude_steps = ((gamma_dim as f64).powi(2) * nlogn * nlogn).ceil() as u128;
    let qubits = QubitEncoding::new(n, g.max_allowed_path_length()).total_qubits();
    Ok(ComplexityReport {
        degree: k,
        gamma_dim,
        regular_count,
        zeta,
        zeta_exact,
        grover_steps,
        amplitude_steps,
        qubits,
    })
}

#[cfg(test)]
mod tests {
    use crate::path::Chain;
    use super::*;
    use crate::complex::hodge_laplacian_total;
    use crate::digraph::Digraph;
    use crate::path::DEFAULT_MAX_REGULAR_PATHS as CAP;

    const EXAMPLE_1: &str = "1->2\n1->3\n1->4\n2->3\n2->4\n3->4";
    const EXAMPLE_2: &str = "0->1\n0->2\n1->3\n1->4\n2->3\n2->4\n5->3\n5->4";

    fn path(v: &[u32]) -> ElementaryPath {
        ElementaryPath::from_slice(v).unwrap()
    }

    #[test]
    fn encoding_matches_the_worked_bitstrings() {
        let enc = QubitEncoding::new(6, 6);
        assert_eq!(enc.bits_per_register(), 3);
        assert_eq!(enc.total_qubits(), 18);

        let e = enc.encode(&path(&[0, 2, 4])).unwrap();
        assert_eq!(
            e.register_strings(),
            ["001", "000", "010", "000", "011", "000"]
        );
        assert_eq!(e.bitstring(), "001000010000011000");

        let e = enc.encode(&path(&[3, 2, 0, 1, 4, 5])).unwrap();
        assert_eq!(
            e.register_strings(),
            ["011", "100", "010", "001", "101", "110"]
        );
        assert_eq!(e.bitstring(), "011100010001101110");
    }

    #[test]
    fn single_vertex_encodes_to_one_set_register() {
        let enc = QubitEncoding::new(6, 6);
        let e = enc.encode(&path(&[3])).unwrap();
        assert_eq!(
            e.register_strings(),
            ["000", "000", "000", "001", "000", "000"]
        );
    }

    #[test]
    fn encode_rejects_out_of_domain_paths() {
        let enc = QubitEncoding::new(6, 2);
        assert!(matches!(
            enc.encode(&path(&[0, 1, 2, 3])),
            Err(Error::PathTooLong { len: 3, max: 2 })
        ));
        assert!(matches!(
            enc.encode(&path(&[0, 1, 0])),
            Err(Error::RepeatedVertex { vertex: 0 })
        ));
        let enc = QubitEncoding::new(3, 2);
        assert!(matches!(
            enc.encode(&path(&[0, 7])),
            Err(Error::VertexOutOfRange { vertex: 7, .. })
        ));
    }

    #[test]
    fn decode_inverts_encode_and_rejects_non_path_states() {
        let enc = QubitEncoding::new(6, 6);
        let p = path(&[0, 2, 4]);
        let e = enc.encode(&p).unwrap();
        assert_eq!(enc.decode_registers(e.registers()).unwrap(), p);
        assert_eq!(enc.decode_bits(&e.bitstring()).unwrap(), p);

        assert!(enc.decode_registers(&[0; 6]).is_err());
        assert!(enc.decode_registers(&[1, 1, 0, 0, 0, 0]).is_err());
        assert!(enc.decode_registers(&[1, 3, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn register_widths_cover_the_order_values() {
        // the largest order value d+1 must fit in the register
        for d in 0..12usize {
            let bits = register_bits(d);
            assert!((d as u64 + 1) < (1 << bits), "d = {d}");
        }
        assert_eq!(register_bits(6), 3);
        assert_eq!(register_bits(2), 2);
    }

    #[test]
    fn boundary_action_matches_the_chain_boundary() {
        let enc = QubitEncoding::new(6, 6);
        let p = path(&[0, 2, 4]);
        let action = enc.boundary_action(&p).unwrap();
        assert_eq!(action.len(), 3);
        assert_eq!(action[0].0, 1);
        assert_eq!(action[0].1, enc.encode(&path(&[2, 4])).unwrap());
        assert_eq!(action[1].0, -1);
        assert_eq!(action[1].1, enc.encode(&path(&[0, 4])).unwrap());
        assert_eq!(action[2].0, 1);
        assert_eq!(action[2].1, enc.encode(&path(&[0, 2])).unwrap());

        // 1-paths: d(uv) = v - u
        let action = enc.boundary_action(&path(&[5, 1])).unwrap();
        assert_eq!(action[0], (1, enc.encode(&path(&[1])).unwrap()));
        assert_eq!(action[1], (-1, enc.encode(&path(&[5])).unwrap()));

        // degree 0 has no boundary
        assert!(enc.boundary_action(&path(&[4])).unwrap().is_empty());
    }

    #[test]
    fn encoded_boundary_agrees_with_chains_exhaustively() {
        // all distinct-vertex regular paths with n <= 5, k <= 3
        for n in 1..=5usize {
            let d = n - 1;
            let enc = QubitEncoding::new(n, d);
            for k in 1..=3.min(d) {
                let basis = enumerate_regular(n, k, CAP).unwrap();
                for p in basis.paths() {
                    if !p.has_distinct_vertices() {
                        continue;
                    }
                    let action = enc.boundary_action(p).unwrap();
                    let chain = Chain::from_path(p.clone()).boundary();
                    assert_eq!(action.len(), chain.term_count());
                    let mut rebuilt = Chain::zero(k as i32 - 1);
                    for (sign, encoded) in action {
                        let q = enc.decode_registers(encoded.registers()).unwrap();
                        rebuilt.add_term(q, crate::linalg::rat(sign as i64));
                    }
                    assert_eq!(rebuilt, chain);
                }
            }
        }
    }

    #[test]
    fn encoding_is_injective_over_distinct_vertex_paths() {
        for n in 1..=5usize {
            let d = n - 1;
            let enc = QubitEncoding::new(n, d);
            let mut seen = std::collections::HashSet::new();
            for k in 0..=d.min(4) {
                for p in enumerate_regular(n, k, CAP).unwrap().paths() {
                    if !p.has_distinct_vertices() {
                        continue;
                    }
                    assert!(seen.insert(enc.encode(p).unwrap().bitstring()));
                }
            }
        }
    }

    #[test]
    fn dirac_operator_squares_to_the_laplacian_blocks() {
        let (n, d) = (3usize, 2usize);
        let b = dirac_operator(n, d, CAP).unwrap();
        assert!(b.is_symmetric());
        let b2 = b.mul(&b);
        let sizes: Vec<usize> = (0..=d)
            .map(|k| count_regular(n, k).to_usize().unwrap())
            .collect();
        let mut offset = 0;
        for (k, &size) in sizes.iter().enumerate() {
            let block = RationalMatrix::from_fn(size, size, |i, j| {
                b2[(offset + i, offset + j)].clone()
            });
            let mut expected = hodge_laplacian_total(n, k, CAP).unwrap();
            if k == d {
                // the truncated Dirac operator omits boundaries from above
                let dk1 = crate::path::boundary_matrix_total(n, k + 1, CAP).unwrap();
                expected = expected.sub(&dk1.mul(&dk1.transpose()));
            }
            assert_eq!(block, expected, "degree {k}");
            offset += size;
        }
    }

    #[test]
    fn dirac_columns_meet_the_register_sparsity_bound_on_small_graphs() {
        // column sparsity of B over the encodable (distinct-vertex) states,
        // checked against n * ceil(log2(d+1)) for n <= 5
        for n in 2..=5usize {
            let d = n - 1;
            let bound = n * (usize::BITS - d.leading_zeros()) as usize;
            let mut all: Vec<ElementaryPath> = Vec::new();
            for k in 0..=d {
                for p in enumerate_regular(n, k, CAP).unwrap().paths() {
                    if p.has_distinct_vertices() {
                        all.push(p.clone());
                    }
                }
            }
            let index: std::collections::HashMap<&ElementaryPath, usize> =
                all.iter().enumerate().map(|(i, p)| (p, i)).collect();
            for p in &all {
                let mut nonzero = 0usize;
                for (_, q) in boundary_terms(p) {
                    if index.contains_key(&q) {
                        nonzero += 1;
                    }
                }
                // coboundary: paths q with p among their boundary terms
                for q in &all {
                    if q.edge_len() == p.edge_len() + 1
                        && boundary_terms(q).iter().any(|(_, r)| r == p)
                    {
                        nonzero += 1;
                    }
                }
                assert!(
                    nonzero <= bound,
                    "n = {n}, path {p:?}: {nonzero} > {bound}"
                );
            }
        }
    }

    #[test]
    fn estimator_is_calibrated_on_example_2_degree_1() {
        let g = Digraph::parse_edge_list(EXAMPLE_2).unwrap();
        let complex = ChainComplex::build(&g).unwrap();
        let cfg = PhaseEstimationConfig::new(1, 10_000, 7);
        let report = run_phase_estimation(&complex, &cfg, CAP).unwrap();
        assert_eq!(report.gamma_dim, 10);
        assert_eq!(report.lambda_dim, 30);
        assert!((report.zero_mass - 0.1).abs() < 1e-9);
        assert_eq!(report.betti_hat, 1);
        assert!((report.zeta - 1.0 / 3.0).abs() < 1e-12);
        let prob_total: f64 = report.spectrum.iter().map(|s| s.prob).sum();
        assert!((prob_total - 1.0).abs() < 1e-12);
        assert_eq!(report.samples.len(), 10_000);
    }

    #[test]
    fn estimator_reports_zero_on_full_rank_degrees_of_example_1() {
        let g = Digraph::parse_edge_list(EXAMPLE_1).unwrap();
        let complex = ChainComplex::build(&g).unwrap();
        for k in [1usize, 2] {
            for shots in [1u64, 100] {
                let cfg = PhaseEstimationConfig::new(k, shots, 99);
                let report = run_phase_estimation(&complex, &cfg, CAP).unwrap();
                assert!(report.zero_mass < 1e-9, "degree {k}");
                assert_eq!(report.betti_hat, 0, "degree {k}");
            }
        }
    }

    #[test]
    fn single_zero_mode_is_estimated_from_one_shot() {
        let g = Digraph::parse_edge_list("x").unwrap();
        let complex = ChainComplex::build(&g).unwrap();
        let cfg = PhaseEstimationConfig::new(0, 1, 3);
        let report = run_phase_estimation(&complex, &cfg, CAP).unwrap();
        assert_eq!(report.gamma_dim, 1);
        assert_eq!(report.samples, [0.0]);
        assert_eq!(report.betti_hat, 1);
    }

    #[test]
    fn quantized_phases_classify_like_exact_ones_here() {
        let g = Digraph::parse_edge_list(EXAMPLE_2).unwrap();
        let complex = ChainComplex::build(&g).unwrap();
        let mut cfg = PhaseEstimationConfig::new(1, 5000, 11);
        cfg.phase_bits = Some(8);
        let report = run_phase_estimation(&complex, &cfg, CAP).unwrap();
        assert!((report.zero_mass - 0.1).abs() < 1e-9);
        assert_eq!(report.betti_hat, 1);
        // quantized samples sit on the t-bit grid
        let bins = (1u64 << 8) as f64;
        for s in &report.samples {
            let phase = s / report.lambda_max / std::f64::consts::TAU;
            let snapped = (phase * bins).round() / bins;
            assert!((phase - snapped).abs() < 1e-12);
        }
    }

    #[test]
    fn projected_zero_space_has_the_predicted_dimension() {
        // zero eigenvalues of P Delta P number betti + (lambda - gamma)
        let g = Digraph::parse_edge_list(EXAMPLE_2).unwrap();
        let complex = ChainComplex::build(&g).unwrap();
        let cfg = PhaseEstimationConfig::new(1, 1, 0);
        let report = run_phase_estimation(&complex, &cfg, CAP).unwrap();
        let zero_dim: usize = report
            .spectrum
            .iter()
            .filter(|s| s.is_zero)
            .map(|s| s.multiplicity)
            .sum();
        assert_eq!(zero_dim, 1 + (30 - 10));
    }

    #[test]
    fn fixed_seed_reproduces_bit_identical_reports() {
        let g = Digraph::parse_edge_list(EXAMPLE_2).unwrap();
        let complex = ChainComplex::build(&g).unwrap();
        let cfg = PhaseEstimationConfig::new(1, 2000, 12345);
        let a = run_phase_estimation(&complex, &cfg, CAP).unwrap();
        let b = run_phase_estimation(&complex, &cfg, CAP).unwrap();
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn complexity_quantities_match_the_derived_fractions() {
        let g2 = Digraph::parse_edge_list(EXAMPLE_2).unwrap();
        let c2 = ChainComplex::build(&g2).unwrap();
        let r = complexity_report(&c2, 1).unwrap();
        assert_eq!(r.gamma_dim, 10);
        assert_eq!(r.regular_count, BigUint::from(30u32));
        assert_eq!(r.zeta_exact, "1/3");
        assert!((r.zeta - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.qubits, 6 * 2);

        let g1 = Digraph::parse_edge_list(EXAMPLE_1).unwrap();
        let c1 = ChainComplex::build(&g1).unwrap();
        let r = complexity_report(&c1, 3).unwrap();
        assert_eq!(r.regular_count, BigUint::from(108u32));
        assert_eq!(r.zeta_exact, "1/108");
        assert_eq!(r.grover_steps, 11); // ceil(sqrt(108))

        // gamma_0 always fills the whole degree-0 space
        let r = complexity_report(&c1, 0).unwrap();
        assert_eq!(r.zeta_exact, "1");
        assert_eq!(r.grover_steps, 1);

        assert!(matches!(
            complexity_report(&c1, 9),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }
}

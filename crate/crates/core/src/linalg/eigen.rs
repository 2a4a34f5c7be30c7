use num_complex::Complex64;

use super::error::LinalgError;
use super::hermitian::HermitianOp;
use super::matrix::ComplexMatrix;
use crate::tol::{rel_scale, tolerances};

/// Eigendecomposition `A = U Λ U†` of a Hermitian operator.
///
/// Eigenvalues are ascending; each eigenvector column is phase-canonicalised
/// (first component of magnitude above 1e-12 made real positive) and ties in
/// the eigenvalue ordering are broken lexicographically on the canonical
/// columns, so equal inputs produce identical decompositions.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are the eigenvectors, aligned with
    /// `eigenvalues()`.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, index: usize) -> Vec<Complex64> {
        self.eigenvectors.column(index)
    }

    /// Rebuild `U diag(values) U†` for an arbitrary choice of diagonal
    /// values (used by the functional calculus).
    pub fn assemble(&self, values: &[f64]) -> HermitianOp {
        let n = self.dim();
        assert_eq!(values.len(), n);
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.eigenvectors.at(r, k)
                        * values[k]
                        * self.eigenvectors.at(c, k).conj();
                }
                out.set(r, c, acc);
            }
        }
        HermitianOp::symmetrized(out)
    }

    pub fn reconstruct(&self) -> HermitianOp {
        self.assemble(&self.eigenvalues)
    }
}

/// Canonicalise the phase of one column in place: the first component with
/// magnitude above 1e-12 is rotated to be real and positive.
fn canonicalize_column(col: &mut [Complex64]) {
    for z in col.iter() {
        let mag = z.norm();
        if mag > 1e-12 {
            let phase = z / mag;
            let rot = phase.conj();
            for w in col.iter_mut() {
                *w *= rot;
            }
            return;
        }
    }
}

fn lex_less(a: &[Complex64], b: &[Complex64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x.re != y.re {
            return x.re < y.re;
        }
        if x.im != y.im {
            return x.im < y.im;
        }
    }
    false
}

/// Cyclic Jacobi eigendecomposition of a Hermitian operator.
///
/// Each rotation combines a phase that makes the pivot entry real with a
/// classical symmetric Jacobi rotation that annihilates it. Off-diagonal mass
/// decays at least quadratically once small, so the sweep count stays in the
/// single digits at the dimensions this crate handles.
pub fn decompose(a: &HermitianOp) -> Result<SpectralDecomposition, LinalgError> {
    let t = tolerances();
    let n = a.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0),
        });
    }
    let fro = a.frobenius_norm();
    let mut w = a.mat().clone();
    let mut u = ComplexMatrix::identity(n);

    let stop = 1e-13 * fro;
    const MAX_SWEEPS: usize = 64;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off_sq += w.at(p, q).norm_sqr();
            }
        }
        if (2.0 * off_sq).sqrt() <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = w.at(p, q);
                let g = alpha.norm();
                let app = w.at(p, p).re;
                let aqq = w.at(q, q).re;
                // Entries already negligible against the local diagonal are
                // snapped to zero instead of rotated.
                if g <= f64::EPSILON * 0.5 * (app.abs() + aqq.abs()) || g == 0.0 {
                    w.set(p, q, Complex64::new(0.0, 0.0));
                    w.set(q, p, Complex64::new(0.0, 0.0));
                    continue;
                }
                // Phase removing the pivot's argument, then the classical
                // rotation for the real symmetric 2×2 block [[app, g], [g, aqq]].
                let ph = (alpha / g).conj(); // e^{-iφ}
                // Stable small-magnitude root of t² − 2βt − 1 = 0.
                let beta = (app - aqq) / (2.0 * g);
                let tt = if beta == 0.0 {
                    1.0
                } else {
                    -beta.signum() / (beta.abs() + (1.0 + beta * beta).sqrt())
                };
                let c = 1.0 / (1.0 + tt * tt).sqrt();
                let s = tt * c;

                // Column update: W ← W·T with T[p][p]=c, T[p][q]=s,
                // T[q][p]=−s·ph, T[q][q]=c·ph.
                for k in 0..n {
                    let wkp = w.at(k, p);
                    let wkq = w.at(k, q);
                    w.set(k, p, wkp * c - wkq * (ph * s));
                    w.set(k, q, wkp * s + wkq * (ph * c));
                }
                // Row update: W ← T†·W.
                for k in 0..n {
                    let wpk = w.at(p, k);
                    let wqk = w.at(q, k);
                    let phc = ph.conj();
                    w.set(p, k, wpk * c - wqk * (phc * s));
                    w.set(q, k, wpk * s + wqk * (phc * c));
                }
                w.set(p, q, Complex64::new(0.0, 0.0));
                w.set(q, p, Complex64::new(0.0, 0.0));
                let dp = w.at(p, p);
                let dq = w.at(q, q);
                w.set(p, p, Complex64::new(dp.re, 0.0));
                w.set(q, q, Complex64::new(dq.re, 0.0));

                // Accumulate the eigenvector basis.
                for k in 0..n {
                    let ukp = u.at(k, p);
                    let ukq = u.at(k, q);
                    u.set(k, p, ukp * c - ukq * (ph * s));
                    u.set(k, q, ukp * s + ukq * (ph * c));
                }
            }
        }
    }
    if !converged {
        // One final measurement: quadratic convergence may have landed us
        // inside tolerance on the very last sweep.
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off_sq += w.at(p, q).norm_sqr();
            }
        }
        if (2.0 * off_sq).sqrt() > stop {
            return Err(LinalgError::EigNonConvergence { sweeps: MAX_SWEEPS });
        }
    }

    // Canonical phases, then sort ascending with lexicographic tie-breaking.
    let mut columns: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|j| {
            let mut col = u.column(j);
            canonicalize_column(&mut col);
            (w.at(j, j).re, col)
        })
        .collect();
    columns.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite eigenvalues")
            .then_with(|| {
                if lex_less(&a.1, &b.1) {
                    std::cmp::Ordering::Less
                } else if lex_less(&b.1, &a.1) {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
    });

    let eigenvalues: Vec<f64> = columns.iter().map(|(v, _)| *v).collect();
    let mut vecs = ComplexMatrix::zeros(n);
    for (j, (_, col)) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            vecs.set(i, j, *z);
        }
    }
    let dec = SpectralDecomposition {
        eigenvalues,
        eigenvectors: vecs,
    };

    // Self-check the decomposition invariants before handing it out.
    let recon_residual = dec.reconstruct().sub(a).frobenius_norm();
    let recon_tol = t.eig_tol * rel_scale(fro);
    if recon_residual > recon_tol {
        return Err(LinalgError::SpectralInvariant {
            residual: recon_residual,
            tol: recon_tol,
        });
    }
    let gram = dec.eigenvectors.adjoint().matmul(&dec.eigenvectors);
    let unit_residual = (&gram - &ComplexMatrix::identity(n)).frobenius_norm();
    let unit_tol = t.eig_tol * (n as f64).sqrt().max(1.0);
    if unit_residual > unit_tol {
        return Err(LinalgError::SpectralInvariant {
            residual: unit_residual,
            tol: unit_tol,
        });
    }
    Ok(dec)
}

/// Group sorted eigenvalues into degeneracy clusters: a gap of at most
/// `cluster_tol · scale` keeps neighbours in the same cluster.
pub fn cluster_ranges(sorted: &[f64], scale: f64) -> Vec<std::ops::Range<usize>> {
    let t = tolerances();
    let threshold = t.cluster_tol * scale;
    let mut ranges = Vec::new();
    let mut start = 0;
    for i in 1..sorted.len() {
        if (sorted[i] - sorted[i - 1]).abs() > threshold {
            ranges.push(start..i);
            start = i;
        }
    }
    if start < sorted.len() {
        ranges.push(start..sorted.len());
    }
    ranges
}

/// A joint eigenspace of a commuting Hermitian family: orthonormal basis
/// vectors plus one eigenvalue per operator in the family.
#[derive(Debug, Clone)]
pub struct JointEigenspace {
    pub values: Vec<f64>,
    pub basis: Vec<Vec<Complex64>>,
}

/// Simultaneously diagonalise a commuting family by recursive eigenspace
/// refinement: diagonalise the first operator, split the space into its
/// degeneracy clusters, then restrict the remaining operators to each block
/// and recurse. Commutativity is the caller's responsibility; the recorded
/// joint eigenvalues are re-measured per block at the end so refinement by
/// later operators cannot stale them.
pub fn simultaneous_diagonalize(
    ops: &[HermitianOp],
) -> Result<Vec<JointEigenspace>, LinalgError> {
    if ops.is_empty() {
        return Err(LinalgError::EmptyFamily);
    }
    let n = ops[0].dim();
    for op in ops {
        if op.dim() != n {
            return Err(LinalgError::DimensionMismatch {
                left: n,
                right: op.dim(),
            });
        }
    }

    // Blocks are n×k column sets with orthonormal columns.
    let mut blocks: Vec<Vec<Vec<Complex64>>> = vec![(0..n)
        .map(|i| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[i] = Complex64::new(1.0, 0.0);
            e
        })
        .collect()];

    for op in ops {
        let scale = super::hermitian::op_norm(op)?;
        let mut next_blocks = Vec::new();
        for cols in blocks {
            let k = cols.len();
            if k == 1 {
                next_blocks.push(cols);
                continue;
            }
            // Compress: K = V† A V, a k×k Hermitian matrix.
            let imgs: Vec<Vec<Complex64>> =
                cols.iter().map(|v| op.mat().apply(v)).collect();
            let mut kmat = ComplexMatrix::zeros(k);
            for r in 0..k {
                for c in 0..k {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        acc += cols[r][i].conj() * imgs[c][i];
                    }
                    kmat.set(r, c, acc);
                }
            }
            let kherm = HermitianOp::symmetrized(kmat);
            let dec = decompose(&kherm)?;
            for range in cluster_ranges(dec.eigenvalues(), scale) {
                let mut sub_cols = Vec::with_capacity(range.len());
                for j in range {
                    let coeff = dec.eigenvector(j);
                    let mut lifted = vec![Complex64::new(0.0, 0.0); n];
                    for (c, col) in coeff.iter().zip(&cols) {
                        for i in 0..n {
                            lifted[i] += c * col[i];
                        }
                    }
                    sub_cols.push(lifted);
                }
                next_blocks.push(sub_cols);
            }
        }
        blocks = next_blocks;
    }

    // Re-measure the joint eigenvalues on each final block.
    let spaces = blocks
        .into_iter()
        .map(|cols| {
            let values = ops
                .iter()
                .map(|op| {
                    let mut acc = 0.0;
                    for v in &cols {
                        let img = op.mat().apply(v);
                        let mut e = Complex64::new(0.0, 0.0);
                        for i in 0..v.len() {
                            e += v[i].conj() * img[i];
                        }
                        acc += e.re;
                    }
                    acc / cols.len() as f64
                })
                .collect();
            JointEigenspace {
                values,
                basis: cols,
            }
        })
        .collect();
    Ok(spaces)
}

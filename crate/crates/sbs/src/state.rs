//! Validated dense representations of multipartite quantum states.
//!
//! All operators act on a tensor product of finite-dimensional subsystems.
//! Basis ordering is row-major over the subsystem dimensions with the FIRST
//! subsystem as the slowest index: the product basis vector
//! |i_0, i_1, ..., i_{n-1}> sits at index
//! `((i_0 * d_1 + i_1) * d_2 + i_2) * ...`. Every value is immutable after
//! construction and every operation returns a new value, so everything here
//! is safe to share across threads.

use crate::error::{Error, Result};
use crate::linalg::{self, C64, CMatrix};

/// Default absolute tolerance on operator entries and eigenvalues.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default relative cutoff for support projectors.
pub const DEFAULT_SUPPORT_CUTOFF: f64 = 1e-9;

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
///
/// Positive semidefiniteness is accepted down to eigenvalues of `-tol`;
/// the slack is clamped away in downstream entropy computations.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dim: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validate a matrix as a density matrix.
    pub fn new(entries: CMatrix, tol: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let deviation = linalg::max_abs_diff(&entries, &entries.adjoint());
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = linalg::trace(&entries);
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let (eigs, _) = linalg::hermitian_eigen(&entries);
        let min_eigenvalue = eigs.first().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self {
            dim: entries.nrows(),
            entries,
        })
    }

    /// Construct without re-validation. Callers must guarantee the invariants
    /// hold exactly (e.g. results of operations that preserve them).
    pub(crate) fn from_valid(entries: CMatrix) -> Self {
        Self {
            dim: entries.nrows(),
            entries,
        }
    }

    /// The maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let entries = linalg::identity(dim).scale(1.0 / dim as f64);
        Self::from_valid(entries)
    }

    /// |k><k| in the computational basis.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange {
                index: k,
                limit: dim,
            });
        }
        let mut entries = CMatrix::zeros(dim, dim);
        entries[(k, k)] = C64::new(1.0, 0.0);
        Ok(Self::from_valid(entries))
    }

    /// |v><v| / <v|v>.
    pub fn from_pure(v: &[C64]) -> Result<Self> {
        let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v.is_empty() || norm_sqr < 1e-300 {
            return Err(Error::DimensionMismatch(
                "pure state vector must be non-empty and non-zero".into(),
            ));
        }
        let dim = v.len();
        let mut entries = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                entries[(i, j)] = v[i] * v[j].conj() / norm_sqr;
            }
        }
        Ok(Self::from_valid(entries))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.entries).0
    }

    /// Kronecker product, left factor slowest.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_valid(linalg::kron(&self.entries, &other.entries))
    }
}

/// A density matrix together with an ordered subsystem partition.
#[derive(Clone, Debug)]
pub struct MultipartiteState {
    state: DensityMatrix,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl MultipartiteState {
    /// Validate a matrix as a state over the given subsystem dimensions.
    /// Subsystems are labeled `Q0, Q1, ...`; use [`with_labels`] to name them.
    ///
    /// [`with_labels`]: MultipartiteState::with_labels
    pub fn new(entries: CMatrix, dims: &[usize], tol: f64) -> Result<Self> {
        let labels: Vec<String> = (0..dims.len()).map(|i| format!("Q{i}")).collect();
        Self::with_labels(entries, dims, &labels, tol)
    }

    pub fn with_labels<S: AsRef<str>>(
        entries: CMatrix,
        dims: &[usize],
        labels: &[S],
        tol: f64,
    ) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch(
                "subsystem dimensions must be non-empty and positive".into(),
            ));
        }
        let product: usize = dims.iter().product();
        if product != entries.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "product of dims is {} but the matrix is {}x{}",
                product,
                entries.nrows(),
                entries.ncols()
            )));
        }
        if labels.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} subsystems",
                labels.len(),
                dims.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i + 1) {
                if a.as_ref() == b.as_ref() {
                    return Err(Error::DimensionMismatch(format!(
                        "duplicate subsystem label {:?}",
                        a.as_ref()
                    )));
                }
            }
        }
        let state = DensityMatrix::new(entries, tol)?;
        Ok(Self {
            state,
            dims: dims.to_vec(),
            labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    pub(crate) fn from_valid_parts(state: DensityMatrix, dims: Vec<usize>, labels: Vec<String>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), state.dim());
        debug_assert_eq!(dims.len(), labels.len());
        Self {
            state,
            dims,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn entries(&self) -> &CMatrix {
        self.state.entries()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Strides of the row-major basis ordering (first subsystem slowest).
    pub(crate) fn strides(&self) -> Vec<usize> {
        strides_of(&self.dims)
    }

    /// Trace out every subsystem not in `keep`. The kept subsystems retain
    /// their original relative order, dims and labels.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let keep = normalize_subset(keep, self.dims.len())?;
        if keep.len() == self.dims.len() {
            return Ok(self.clone());
        }
        let traced: Vec<usize> = (0..self.dims.len()).filter(|i| !keep.contains(i)).collect();
        let strides = self.strides();

        let kept_offsets = index_offsets(&self.dims, &strides, &keep);
        let traced_offsets = index_offsets(&self.dims, &strides, &traced);

        let d_keep = kept_offsets.len();
        let rho = self.entries();
        let mut out = CMatrix::zeros(d_keep, d_keep);
        for (i, &oi) in kept_offsets.iter().enumerate() {
            for (j, &oj) in kept_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &ot in &traced_offsets {
                    acc += rho[(oi + ot, oj + ot)];
                }
                out[(i, j)] = acc;
            }
        }

        let dims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let labels: Vec<String> = keep.iter().map(|&k| self.labels[k].clone()).collect();
        // the partial trace of a valid state is valid; re-validate to catch
        // numerical drift, which the contract bounds by tol
        let state = DensityMatrix::new(out, DEFAULT_TOL)?;
        Ok(Self {
            state,
            dims,
            labels,
        })
    }

    /// Reorder subsystems: new subsystem `k` is old subsystem `order[k]`,
    /// with the matrix conjugated by the matching basis permutation.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        for &k in order {
            if k >= n || seen[k] {
                return Err(Error::OverlappingParts(format!(
                    "{order:?} is not a permutation of 0..{n}"
                )));
            }
            seen[k] = true;
        }
        if order.len() != n {
            return Err(Error::OverlappingParts(format!(
                "{order:?} is not a permutation of 0..{n}"
            )));
        }
        let new_dims: Vec<usize> = order.iter().map(|&k| self.dims[k]).collect();
        let new_labels: Vec<String> = order.iter().map(|&k| self.labels[k].clone()).collect();
        let old_strides = self.strides();
        let new_strides = strides_of(&new_dims);

        let d = self.dim();
        // map each new full index to the old full index
        let mut old_index = vec![0usize; d];
        for (new_i, slot) in old_index.iter_mut().enumerate() {
            let mut rem = new_i;
            let mut old = 0usize;
            for (pos, &sub) in order.iter().enumerate() {
                let digit = rem / new_strides[pos];
                rem %= new_strides[pos];
                old += digit * old_strides[sub];
            }
            *slot = old;
        }
        let rho = self.entries();
        let out = CMatrix::from_fn(d, d, |i, j| rho[(old_index[i], old_index[j])]);
        Ok(Self::from_valid_parts(
            DensityMatrix::from_valid(out),
            new_dims,
            new_labels,
        ))
    }
}

/// An orthogonal projector with its rank.
#[derive(Clone, Debug)]
pub struct Projector {
    dim: usize,
    entries: CMatrix,
    rank: usize,
}

impl Projector {
    /// Validate idempotency and Hermiticity; rank is `round(Tr P)`.
    pub fn new(entries: CMatrix, tol: f64) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "projector must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let deviation = linalg::max_abs_diff(&entries, &entries.adjoint());
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let idem = linalg::max_abs_diff(&(&entries * &entries), &entries);
        if idem > tol {
            return Err(Error::Inconsistent(format!(
                "projector is not idempotent: max |P^2 - P| entry = {idem:.3e}"
            )));
        }
        let tr = linalg::trace(&entries).re;
        let rank = tr.round();
        if (tr - rank).abs() > tol * entries.nrows() as f64 {
            return Err(Error::Inconsistent(format!(
                "projector trace {tr} is not close to an integer"
            )));
        }
        Ok(Self {
            dim: entries.nrows(),
            entries,
            rank: rank as usize,
        })
    }

    pub(crate) fn from_valid(entries: CMatrix, rank: usize) -> Self {
        Self {
            dim: entries.nrows(),
            entries,
            rank,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_valid(linalg::identity(dim), dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_valid(
            linalg::kron(&self.entries, &other.entries),
            self.rank * other.rank,
        )
    }
}

/// Rank-1 projector onto a computational product-basis vector.
pub fn basis_projector(dims: &[usize], basis_indices: &[usize]) -> Result<Projector> {
    if dims.len() != basis_indices.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} indices for {} subsystems",
            basis_indices.len(),
            dims.len()
        )));
    }
    let strides = strides_of(dims);
    let mut index = 0usize;
    for ((&d, &i), &stride) in dims.iter().zip(basis_indices).zip(&strides) {
        if i >= d {
            return Err(Error::IndexOutOfRange { index: i, limit: d });
        }
        index += i * stride;
    }
    let dim: usize = dims.iter().product();
    let mut entries = CMatrix::zeros(dim, dim);
    entries[(index, index)] = C64::new(1.0, 0.0);
    Ok(Projector::from_valid(entries, 1))
}

/// Projector onto the span of eigenvectors with eigenvalue above
/// `cutoff * max_eigenvalue`.
pub fn support_projector(m: &DensityMatrix, cutoff: f64) -> Projector {
    let (vals, vecs) = linalg::hermitian_eigen(m.entries());
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let threshold = cutoff * max;
    let dim = m.dim();
    let mut entries = CMatrix::zeros(dim, dim);
    let mut rank = 0usize;
    for (k, &v) in vals.iter().enumerate() {
        if v > threshold {
            let col = vecs.column(k);
            entries += col * col.adjoint();
            rank += 1;
        }
    }
    Projector::from_valid(entries, rank)
}

/// Row-major strides: `strides[k]` is the product of all dims after `k`.
pub(crate) fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    strides
}

/// All base offsets generated by running the subsystems in `subs` through
/// their ranges (odometer order), with all other subsystems fixed at zero.
pub(crate) fn index_offsets(dims: &[usize], strides: &[usize], subs: &[usize]) -> Vec<usize> {
    let total: usize = subs.iter().map(|&k| dims[k]).product();
    let mut offsets = Vec::with_capacity(total.max(1));
    let mut digits = vec![0usize; subs.len()];
    loop {
        let offset: usize = digits
            .iter()
            .zip(subs)
            .map(|(&digit, &k)| digit * strides[k])
            .sum();
        offsets.push(offset);
        // advance odometer, last digit fastest
        let mut pos = subs.len();
        loop {
            if pos == 0 {
                return offsets;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < dims[subs[pos]] {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Sort, deduplicate and bounds-check a subsystem index set.
pub(crate) fn normalize_subset(subset: &[usize], count: usize) -> Result<Vec<usize>> {
    if subset.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut v = subset.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&bad) = v.iter().find(|&&k| k >= count) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            limit: count,
        });
    }
    Ok(v)
}

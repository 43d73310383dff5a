//! Exact sparse linear algebra: kernels, ranks, intersections and canonical
//! subspaces over any [`Scalar`] field.

pub mod modular;
mod serial;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sparse vector: `(index, value)` pairs sorted by index, no zero values.
pub type SparseVec<S> = Vec<(usize, S)>;

/// `target - factor * source`, both sorted sparse vectors.
pub fn sub_scaled<S: Scalar>(
    target: &[(usize, S)],
    factor: &S,
    source: &[(usize, S)],
) -> SparseVec<S> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let ti = target.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let sj = source.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ti < sj {
            out.push(target[i].clone());
            i += 1;
        } else if sj < ti {
            out.push((sj, -(factor.clone() * source[j].1.clone())));
            j += 1;
        } else {
            let v = target[i].1.clone() - factor.clone() * source[j].1.clone();
            if !v.is_zero() {
                out.push((ti, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sorts, merges duplicates by addition and drops zeros.
pub fn normalize_vec<S: Scalar>(mut v: Vec<(usize, S)>) -> SparseVec<S> {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec<S> = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = last.1.clone() + x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

/// A sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<S>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            rows: (0..n).map(|i| vec![(i, S::one())]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Zero values are
    /// dropped; repeated positions and out-of-range indices are errors.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, S)>,
    ) -> Result<Self> {
        let mut rows: Vec<SparseVec<S>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::EntryOutOfRange {
                    row: r,
                    col: c,
                    rows: nrows,
                    cols: ncols,
                });
            }
            rows[r].push((c, v));
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|e| e.0);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry {
                    row: r,
                    col: w[0].0,
                });
            }
            row.retain(|e| !e.1.is_zero());
        }
        Ok(SparseMatrix { nrows, ncols, rows })
    }

    /// Builds a matrix from columns given as sparse vectors of row indices.
    pub fn from_columns(nrows: usize, columns: &[SparseVec<S>]) -> Result<Self> {
        let triplets = columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())));
        Self::from_triplets(nrows, columns.len(), triplets)
    }

    /// Builds a matrix from sparse rows, normalizing each row.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, S)>>) -> Result<Self> {
        let nrows = rows.len();
        let mut out = Vec::with_capacity(nrows);
        for (r, row) in rows.into_iter().enumerate() {
            let row = normalize_vec(row);
            if let Some(&(c, _)) = row.last() {
                if c >= ncols {
                    return Err(Error::EntryOutOfRange {
                        row: r,
                        col: c,
                        rows: nrows,
                        cols: ncols,
                    });
                }
            }
            out.push(row);
        }
        Ok(SparseMatrix {
            nrows,
            ncols,
            rows: out,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, S)] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[SparseVec<S>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    /// `self * v` for a sparse vector `v`.
    pub fn mul_vec(&self, v: &[(usize, S)]) -> SparseVec<S> {
        let mut dense: Vec<Option<&S>> = vec![None; self.ncols];
        for (i, x) in v {
            dense[*i] = Some(x);
        }
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = S::zero();
            for (c, a) in row {
                if let Some(x) = dense[*c] {
                    acc = acc + a.clone() * x.clone();
                }
            }
            if !acc.is_zero() {
                out.push((r, acc));
            }
        }
        out
    }

    /// `self - I` for a square matrix.
    pub fn minus_identity(&self) -> Self {
        assert_eq!(
            self.nrows, self.ncols,
            "minus_identity needs a square matrix"
        );
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| sub_scaled(row, &S::one(), &[(r, S::one())]))
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[SparseMatrix<S>]) -> Result<Self> {
        let ncols = parts.first().map(|m| m.ncols).unwrap_or(0);
        let mut rows = Vec::new();
        for m in parts {
            if m.ncols != ncols {
                return Err(Error::DimensionMismatch {
                    left: ncols,
                    right: m.ncols,
                });
            }
            rows.extend(m.rows.iter().cloned());
        }
        Ok(SparseMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        })
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (new, &old) in col_idx.iter().enumerate() {
            col_map[old] = new;
        }
        let rows = row_idx
            .iter()
            .map(|&r| {
                let mut row: SparseVec<S> = self.rows[r]
                    .iter()
                    .filter(|(c, _)| col_map[*c] != usize::MAX)
                    .map(|(c, v)| (col_map[*c], v.clone()))
                    .collect();
                row.sort_by_key(|e| e.0);
                row
            })
            .collect();
        SparseMatrix {
            nrows: row_idx.len(),
            ncols: col_idx.len(),
            rows,
        }
    }

    /// Drops rows that are entirely zero.
    pub fn without_zero_rows(mut self) -> Self {
        self.rows.retain(|r| !r.is_empty());
        self.nrows = self.rows.len();
        self
    }
}

/// Reduced row echelon form of a set of rows.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub ncols: usize,
    /// Fully reduced rows with leading coefficient one, sorted by pivot.
    pub rows: Vec<SparseVec<S>>,
}

impl<S: Scalar> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Basis of the null space of the row space, one vector per free column.
    /// Each vector has a one at its free column and no other free entries.
    pub fn kernel_vectors(&self) -> Vec<SparseVec<S>> {
        let mut is_pivot = vec![false; self.ncols];
        for r in &self.rows {
            is_pivot[r[0].0] = true;
        }
        let mut by_free: BTreeMap<usize, Vec<(usize, S)>> = (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|c| (c, vec![(c, S::one())]))
            .collect();
        for row in &self.rows {
            let p = row[0].0;
            for (c, v) in &row[1..] {
                by_free
                    .get_mut(c)
                    .expect("reduced rows only touch free columns")
                    .push((p, -v.clone()));
            }
        }
        by_free
            .into_values()
            .map(|mut v| {
                v.sort_by_key(|e| e.0);
                v
            })
            .collect()
    }
}

/// Gauss-Jordan elimination of `rows` into reduced row echelon form.
///
/// Rows are processed sparsest first; each incoming row is reduced against
/// every pivot found so far, and a final back-substitution pass clears the
/// entries above later pivots.
pub fn rref<S: Scalar>(ncols: usize, rows: impl IntoIterator<Item = SparseVec<S>>) -> Echelon<S> {
    let mut input: Vec<SparseVec<S>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    input.sort_by_key(Vec::len);

    let mut pivot_of: Vec<Option<usize>> = vec![None; ncols];
    let mut basis: Vec<SparseVec<S>> = Vec::new();

    for mut r in input {
        reduce_against(&mut r, &pivot_of, &basis, None);
        if r.is_empty() {
            continue;
        }
        let inv = S::one() / r[0].1.clone();
        for e in r.iter_mut() {
            e.1 = e.1.clone() * inv.clone();
        }
        pivot_of[r[0].0] = Some(basis.len());
        basis.push(r);
    }

    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(basis[i][0].0));
    for &i in &order {
        let mut r = std::mem::take(&mut basis[i]);
        let own = r[0].0;
        reduce_against(&mut r, &pivot_of, &basis, Some(own));
        basis[i] = r;
    }
    basis.sort_by_key(|r| r[0].0);
    Echelon { ncols, rows: basis }
}

/// Clears every entry of `r` sitting on a pivot column (other than `keep`).
fn reduce_against<S: Scalar>(
    r: &mut SparseVec<S>,
    pivot_of: &[Option<usize>],
    basis: &[SparseVec<S>],
    keep: Option<usize>,
) {
    let mut pos = 0;
    while pos < r.len() {
        let c = r[pos].0;
        match pivot_of[c] {
            Some(p) if Some(c) != keep => {
                let f = r[pos].1.clone();
                *r = sub_scaled(r, &f, &basis[p]);
            }
            _ => pos += 1,
        }
    }
}

/// Null space by direct elimination over the field.
pub fn kernel_by_elimination<S: Scalar>(m: &SparseMatrix<S>) -> Subspace<S> {
    let ech = rref(m.ncols, m.rows.iter().cloned());
    Subspace::from_independent(m.ncols, ech.kernel_vectors())
}

/// Null space of `m` in canonical form, using the field's preferred route.
pub fn kernel<S: Scalar>(m: &SparseMatrix<S>) -> Subspace<S> {
    S::kernel(m)
}

pub fn rank<S: Scalar>(m: &SparseMatrix<S>) -> usize {
    m.ncols - kernel(m).dim()
}

pub fn rank_by_elimination<S: Scalar>(m: &SparseMatrix<S>) -> usize {
    rref(m.ncols, m.rows.iter().cloned()).rank()
}

/// Rank of a family of vectors keyed by arbitrary ordered labels.
pub fn rank_of_family<K: Ord + Clone, S: Scalar>(family: &[Vec<(K, S)>]) -> usize {
    let mut index: BTreeMap<K, usize> = BTreeMap::new();
    for v in family {
        for (k, _) in v {
            let next = index.len();
            index.entry(k.clone()).or_insert(next);
        }
    }
    let rows: Vec<SparseVec<S>> = family
        .iter()
        .map(|v| normalize_vec(v.iter().map(|(k, x)| (index[k], x.clone())).collect()))
        .collect();
    rref(index.len(), rows).rank()
}

/// A linear subspace of `S^n`, held as its reduced row echelon basis.
///
/// The echelon form is canonical, so two subspaces are equal exactly when
/// their stored bases are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    ambient_dim: usize,
    basis: Vec<SparseVec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| vec![(i, S::one())]).collect(),
        }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec<S>>) -> Self {
        let ech = rref(ambient_dim, vectors.into_iter().map(normalize_vec));
        Subspace {
            ambient_dim,
            basis: ech.rows,
        }
    }

    fn from_independent(ambient_dim: usize, vectors: Vec<SparseVec<S>>) -> Self {
        Self::span(ambient_dim, vectors)
    }

    /// Rebuilds a subspace from a stored basis; fails if the vectors are
    /// dependent or out of range.
    pub fn from_basis(ambient_dim: usize, vectors: Vec<SparseVec<S>>) -> Result<Self> {
        let n = vectors.len();
        for v in &vectors {
            if let Some(&(c, _)) = v.iter().max_by_key(|e| e.0) {
                if c >= ambient_dim {
                    return Err(Error::DimensionMismatch {
                        left: ambient_dim,
                        right: c + 1,
                    });
                }
            }
        }
        let s = Self::span(ambient_dim, vectors);
        if s.dim() != n {
            return Err(Error::Parse(format!(
                "subspace basis is dependent: {} vectors span dimension {}",
                n,
                s.dim()
            )));
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec<S>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[(usize, S)]) -> bool {
        let mut r = normalize_vec(v.to_vec());
        let mut pivot_of: Vec<Option<usize>> = vec![None; self.ambient_dim];
        for (i, b) in self.basis.iter().enumerate() {
            pivot_of[b[0].0] = Some(i);
        }
        reduce_against(&mut r, &pivot_of, &self.basis, None);
        r.is_empty()
    }

    pub fn contains_subspace(&self, other: &Subspace<S>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Vectors orthogonal to every basis vector under the standard dot product.
    pub fn annihilator(&self) -> Subspace<S> {
        let m = SparseMatrix {
            nrows: self.basis.len(),
            ncols: self.ambient_dim,
            rows: self.basis.clone(),
        };
        kernel(&m)
    }

    pub fn sum(&self, other: &Subspace<S>) -> Result<Subspace<S>> {
        check_dims(self.ambient_dim, other.ambient_dim)?;
        Ok(Self::span(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        ))
    }

    /// Coordinates restricted to `indices` (in that order); the image of the
    /// coordinate projection.
    pub fn project(&self, indices: &[usize]) -> Subspace<S> {
        let mut map = vec![usize::MAX; self.ambient_dim];
        for (new, &old) in indices.iter().enumerate() {
            map[old] = new;
        }
        Self::span(
            indices.len(),
            self.basis.iter().map(|v| {
                v.iter()
                    .filter(|(c, _)| map[*c] != usize::MAX)
                    .map(|(c, x)| (map[*c], x.clone()))
                    .collect()
            }),
        )
    }

    /// Embeds into a larger space, sending coordinate `i` to `offset + i`.
    pub fn embed(&self, ambient_dim: usize, offset: usize) -> Subspace<S> {
        assert!(offset + self.ambient_dim <= ambient_dim);
        Subspace {
            ambient_dim,
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(|(c, x)| (c + offset, x.clone())).collect())
                .collect(),
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(Error::DimensionMismatch { left: a, right: b })
    } else {
        Ok(())
    }
}

/// The largest subspace contained in every input. The empty intersection in
/// dimension `ambient_dim` is the whole space.
pub fn intersect<S: Scalar>(ambient_dim: usize, spaces: &[Subspace<S>]) -> Result<Subspace<S>> {
    for s in spaces {
        check_dims(ambient_dim, s.ambient_dim)?;
    }
    match spaces {
        [] => Ok(Subspace::full(ambient_dim)),
        [only] => Ok(only.clone()),
        _ => {
            let rows: Vec<SparseVec<S>> =
                spaces.iter().flat_map(|s| s.annihilator().basis).collect();
            let m = SparseMatrix {
                nrows: rows.len(),
                ncols: ambient_dim,
                rows,
            };
            Ok(kernel(&m))
        }
    }
}

pub fn subspace_equal<S: Scalar>(u: &Subspace<S>, v: &Subspace<S>) -> Result<bool> {
    check_dims(u.ambient_dim, v.ambient_dim)?;
    Ok(u.basis == v.basis)
}

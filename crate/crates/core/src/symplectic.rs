//! Symplectic invariants of tensor powers `H^{⊗k}`.
//!
//! Invariants of the arithmetic group are computed as invariants of its Lie
//! algebra `sp_{2g}` over the rationals: the common kernel of the Leibniz
//! actions of a basis of `sp_{2g}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chord::{build_omega_c, double_factorial, enumerate_diagrams};
use crate::error::{Error, Result};
use crate::limits::{tensor_dim, SizeLimit};
use crate::linalg::{kernel, normalize_vec, SparseMatrix, SparseVec, Subspace};
use crate::scalar::Scalar;
use crate::tensor::{pairing, GenLetter, Monomial};

/// An element of `sp_{2g}` acting on `H` in the basis `(a_1, b_1, ..., a_g, b_g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieGenerator<S> {
    genus: usize,
    /// Image of each basis letter, indexed by letter code.
    columns: Vec<SparseVec<S>>,
}

impl<S: Scalar> LieGenerator<S> {
    /// Builds `X` from `(source, target, coeff)` entries meaning
    /// `X(source) += coeff * target`.
    pub fn from_entries(genus: usize, entries: &[(GenLetter, GenLetter, i64)]) -> Self {
        let mut columns = vec![Vec::new(); 2 * genus];
        for &(src, dst, c) in entries {
            columns[src.code()].push((dst.code(), S::from_int(c)));
        }
        LieGenerator {
            genus,
            columns: columns.into_iter().map(normalize_vec).collect(),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn image(&self, l: GenLetter) -> &[(usize, S)] {
        &self.columns[l.code()]
    }

    pub fn matrix(&self) -> SparseMatrix<S> {
        SparseMatrix::from_columns(2 * self.genus, &self.columns).expect("codes are in range")
    }

    /// Diagonal in the letter basis, i.e. part of the Cartan subalgebra.
    pub fn is_diagonal(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().all(|(i, _)| *i == j))
    }

    fn diagonal_entry(&self, code: usize) -> S {
        self.columns[code]
            .iter()
            .find(|(i, _)| *i == code)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(S::zero)
    }

    /// `<Xu, v> + <u, Xv> = 0` for all basis letters `u`, `v`.
    pub fn preserves_pairing(&self) -> bool {
        let pair_vec = |vec: &[(usize, S)], other: GenLetter, vec_first: bool| {
            vec.iter().fold(S::zero(), |acc, (c, x)| {
                let l = GenLetter::from_code(*c);
                let p = if vec_first {
                    pairing::<S>(l, other)
                } else {
                    pairing::<S>(other, l)
                };
                acc + x.clone() * p
            })
        };
        GenLetter::all(self.genus).all(|u| {
            GenLetter::all(self.genus).all(|v| {
                let lhs = pair_vec(self.image(u), v, true) + pair_vec(self.image(v), u, false);
                lhs.is_zero()
            })
        })
    }
}

/// A basis of `sp_{2g}`: `g(2g+1)` generators.
///
/// Per index `i`: the Cartan element `a_i ↦ a_i, b_i ↦ -b_i`, and the root
/// vectors `b_i ↦ a_i` and `a_i ↦ b_i`. Per ordered pair `i ≠ j`: `a_j ↦ a_i,
/// b_i ↦ -b_j`. Per unordered pair `i < j`: `b_j ↦ a_i, b_i ↦ a_j` and
/// `a_j ↦ b_i, a_i ↦ b_j`.
pub fn sp_basis<S: Scalar>(genus: usize) -> Result<Vec<LieGenerator<S>>> {
    if genus < 1 {
        return Err(Error::Genus { min: 1, got: genus });
    }
    let (a, b) = (GenLetter::a, GenLetter::b);
    let mut out = Vec::with_capacity(genus * (2 * genus + 1));
    for i in 1..=genus {
        out.push(LieGenerator::from_entries(
            genus,
            &[(a(i), a(i), 1), (b(i), b(i), -1)],
        ));
        out.push(LieGenerator::from_entries(genus, &[(b(i), a(i), 1)]));
        out.push(LieGenerator::from_entries(genus, &[(a(i), b(i), 1)]));
    }
    for i in 1..=genus {
        for j in 1..=genus {
            if i != j {
                out.push(LieGenerator::from_entries(
                    genus,
                    &[(a(j), a(i), 1), (b(i), b(j), -1)],
                ));
            }
        }
    }
    for i in 1..=genus {
        for j in i + 1..=genus {
            out.push(LieGenerator::from_entries(
                genus,
                &[(b(j), a(i), 1), (b(i), a(j), 1)],
            ));
            out.push(LieGenerator::from_entries(
                genus,
                &[(a(j), b(i), 1), (a(i), b(j), 1)],
            ));
        }
    }
    Ok(out)
}

/// Image of one monomial under the Leibniz action `Σ_i 1⊗..⊗X⊗..⊗1`, as
/// coordinates in `H^{⊗k}`.
fn leibniz_column<S: Scalar>(x: &LieGenerator<S>, m: &Monomial) -> SparseVec<S> {
    let base = 2 * x.genus;
    let k = m.degree();
    let rank = m.rank_in(x.genus);
    let mut out = Vec::new();
    for (slot, l) in m.letters().iter().enumerate() {
        let place = base.pow((k - 1 - slot) as u32);
        let without = rank - l.code() * place;
        for (dst, c) in x.image(*l) {
            out.push((without + dst * place, c.clone()));
        }
    }
    normalize_vec(out)
}

/// Matrix of the Leibniz action of `x` on `H^{⊗k}` in the monomial basis.
pub fn lie_action_matrix<S: Scalar>(
    x: &LieGenerator<S>,
    k: usize,
    limit: SizeLimit,
) -> Result<SparseMatrix<S>> {
    let n = tensor_dim(x.genus, k);
    limit.check(n)?;
    let columns: Vec<SparseVec<S>> = Monomial::all_of_degree(x.genus, k)
        .map(|m| leibniz_column(x, &m))
        .collect();
    SparseMatrix::from_columns(n, &columns)
}

/// `[H^{⊗k}]^{Sp}` as a subspace of `H^{⊗k}`.
///
/// Diagonal generators act by scalars on monomials, so their common kernel is
/// spanned by the monomials of weight zero; the remaining generators are only
/// evaluated on those columns.
pub fn invariant_basis<S: Scalar>(genus: usize, k: usize, limit: SizeLimit) -> Result<Subspace<S>> {
    let gens = sp_basis::<S>(genus)?;
    let n = tensor_dim(genus, k);
    limit.check(n)?;
    let (diagonal, rest): (Vec<_>, Vec<_>) = gens.iter().partition(|x| x.is_diagonal());

    let weight_zero: Vec<Monomial> = Monomial::all_of_degree(genus, k)
        .filter(|m| {
            diagonal.iter().all(|x| {
                m.letters()
                    .iter()
                    .fold(S::zero(), |acc, l| acc + x.diagonal_entry(l.code()))
                    .is_zero()
            })
        })
        .collect();
    if weight_zero.is_empty() {
        return Ok(Subspace::zero(n));
    }

    // rows are keyed by (generator, output monomial); only nonzero ones appear
    let mut rows: BTreeMap<(usize, usize), SparseVec<S>> = BTreeMap::new();
    for (gi, x) in rest.iter().enumerate() {
        for (col, m) in weight_zero.iter().enumerate() {
            for (r, v) in leibniz_column(x, m) {
                rows.entry((gi, r)).or_default().push((col, v));
            }
        }
    }
    let constraints = SparseMatrix::from_rows(weight_zero.len(), rows.into_values().collect())?;
    let local = kernel(&constraints);
    let positions: Vec<usize> = weight_zero.iter().map(|m| m.rank_in(genus)).collect();
    Ok(Subspace::span(
        n,
        local
            .basis()
            .iter()
            .map(|v| v.iter().map(|(c, x)| (positions[*c], x.clone())).collect()),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChordRankReport {
    pub genus: usize,
    pub chords: usize,
    /// Rank of `{ω_C}` in `H^{⊗2l}`.
    pub span_dim: usize,
    pub invariant_dim: usize,
    /// Number of chord diagrams, `(2l-1)!!`.
    pub diagram_count: usize,
    pub injective: bool,
    pub surjective: bool,
}

/// Compares the span of the chord invariants `ω_C` with the full invariant
/// space of `H^{⊗2l}`.
pub fn chord_rank_report<S: Scalar>(
    genus: usize,
    l: usize,
    limit: SizeLimit,
) -> Result<ChordRankReport> {
    let k = 2 * l;
    let invariants = invariant_basis::<S>(genus, k, limit)?;
    let diagrams = enumerate_diagrams(l);
    let mut vectors = Vec::with_capacity(diagrams.len());
    for c in &diagrams {
        vectors.push(build_omega_c::<S>(c, genus)?.graded_coordinates(k));
    }
    let span = Subspace::span(tensor_dim(genus, k), vectors);
    let diagram_count = double_factorial(2 * l as i64 - 1) as usize;
    Ok(ChordRankReport {
        genus,
        chords: l,
        span_dim: span.dim(),
        invariant_dim: invariants.dim(),
        diagram_count,
        injective: span.dim() == diagram_count,
        surjective: span == invariants,
    })
}

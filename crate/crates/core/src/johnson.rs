//! Degree-one derivations of the tensor algebra, the derivation `δ_φ` of a
//! genus-one bounding pair twist, and the monomial bookkeeping used to show
//! that `δ_φ` separates chord invariants.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::chord::{build_omega_c, double_factorial, enumerate_diagrams, ChordDiagram};
use crate::error::{Error, Result};
use crate::linalg::rank_of_family;
use crate::scalar::Scalar;
use crate::tensor::{wedge, GenLetter, Kind, Monomial, TensorPoly};

/// A linear map `H → H^{⊗2}`, extended to `T[H]` as a derivation. Letters
/// without an entry map to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableJson<S>", into = "TableJson<S>")]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
pub struct DerivationTable<S: Scalar> {
    genus: usize,
    images: BTreeMap<GenLetter, TensorPoly<S>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
struct TableJson<S: Scalar> {
    genus: usize,
    images: BTreeMap<String, TensorPoly<S>>,
}

impl<S: Scalar> TryFrom<TableJson<S>> for DerivationTable<S> {
    type Error = Error;
    fn try_from(j: TableJson<S>) -> Result<Self> {
        let images = j
            .images
            .into_iter()
            .map(|(k, v)| Ok((k.parse::<GenLetter>()?, v)))
            .collect::<Result<Vec<_>>>()?;
        DerivationTable::new(j.genus, images)
    }
}

impl<S: Scalar> From<DerivationTable<S>> for TableJson<S> {
    fn from(t: DerivationTable<S>) -> Self {
        TableJson {
            genus: t.genus,
            images: t
                .images
                .into_iter()
                .map(|(l, p)| (l.to_string(), p))
                .collect(),
        }
    }
}

impl<S: Scalar> DerivationTable<S> {
    pub fn zero(genus: usize) -> Self {
        DerivationTable {
            genus,
            images: BTreeMap::new(),
        }
    }

    /// Every image must be homogeneous of degree two in the same genus.
    pub fn new(
        genus: usize,
        images: impl IntoIterator<Item = (GenLetter, TensorPoly<S>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(genus);
        for (l, p) in images {
            l.check_genus(genus)?;
            if p.genus() != genus {
                return Err(Error::GenusMismatch {
                    left: genus,
                    right: p.genus(),
                });
            }
            if !p.is_homogeneous(2) {
                return Err(Error::NotHomogeneous { expected: 2 });
            }
            if !p.is_zero() {
                out.images.insert(l, p.untruncated());
            }
        }
        Ok(out)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn image(&self, l: GenLetter) -> Option<&TensorPoly<S>> {
        self.images.get(&l)
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }
}

/// `a_1 ↦ b_2∧a_1`, `b_1 ↦ b_2∧b_1`, `a_2 ↦ a_1∧b_1`, everything else to zero.
pub fn delta_phi_table<S: Scalar>(genus: usize) -> Result<DerivationTable<S>> {
    if genus < 2 {
        return Err(Error::Genus { min: 2, got: genus });
    }
    let x = |l| TensorPoly::<S>::letter(genus, l);
    let (a1, b1, b2) = (x(GenLetter::a(1)), x(GenLetter::b(1)), x(GenLetter::b(2)));
    DerivationTable::new(
        genus,
        [
            (GenLetter::a(1), wedge(&b2, &a1)?),
            (GenLetter::b(1), wedge(&b2, &b1)?),
            (GenLetter::a(2), wedge(&a1, &b1)?),
        ],
    )
}

/// Leibniz extension: each letter of each monomial is replaced in turn by its
/// image, and the results are summed.
pub fn apply_derivation<S: Scalar>(
    t: &DerivationTable<S>,
    p: &TensorPoly<S>,
) -> Result<TensorPoly<S>> {
    if t.genus != p.genus() {
        return Err(Error::GenusMismatch {
            left: t.genus,
            right: p.genus(),
        });
    }
    let mut out = TensorPoly::zero(p.genus());
    for (m, c) in p.terms() {
        let letters = m.letters();
        for (i, l) in letters.iter().enumerate() {
            let Some(img) = t.images.get(l) else { continue };
            for (mid, x) in img.terms() {
                let mut w = Vec::with_capacity(letters.len() + 1);
                w.extend_from_slice(&letters[..i]);
                w.extend_from_slice(mid.letters());
                w.extend_from_slice(&letters[i + 1..]);
                out.add_term(Monomial::new(w), c.clone() * x.clone());
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MonomialType {
    X1,
    X2,
    Y,
    /// Pairs `a_i b_i` up to reordering, but not of type `X`.
    AB,
    Other,
}

impl MonomialType {
    pub fn is_x(self) -> bool {
        matches!(self, MonomialType::X1 | MonomialType::X2)
    }
}

fn letter_counts(m: &Monomial) -> BTreeMap<GenLetter, usize> {
    let mut counts = BTreeMap::new();
    for l in m.letters() {
        *counts.entry(*l).or_insert(0) += 1;
    }
    counts
}

fn pattern(head: &[GenLetter], l: usize) -> BTreeMap<GenLetter, usize> {
    let mut out: BTreeMap<GenLetter, usize> = head.iter().map(|x| (*x, 1)).collect();
    for i in 3..=l + 1 {
        out.insert(GenLetter::a(i), 1);
        out.insert(GenLetter::b(i), 1);
    }
    out
}

/// Type of `m` relative to `l` chords, comparing letter multisets.
pub fn classify_monomial(m: &Monomial, l: usize) -> MonomialType {
    let (a, b) = (GenLetter::a, GenLetter::b);
    let counts = letter_counts(m);
    if l >= 1 {
        if counts == pattern(&[a(1), b(1)], l) {
            return MonomialType::X1;
        }
        if counts == pattern(&[a(2), b(2)], l) {
            return MonomialType::X2;
        }
        if counts == pattern(&[a(1), b(1), b(2)], l) {
            return MonomialType::Y;
        }
    }
    let balanced = counts.iter().all(|(x, n)| counts.get(&x.dual()) == Some(n));
    if m.degree() == 2 * l && balanced {
        MonomialType::AB
    } else {
        MonomialType::Other
    }
}

/// Which of the distinguished pair of letters comes first in a type-`X`
/// monomial: `A1` means `a_1` before `b_1`, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subtype {
    A1,
    B1,
    A2,
    B2,
}

/// Type-`X` data of a monomial: its type, subtype and the slots of the two
/// handle letters.
struct XShape {
    kind: MonomialType,
    subtype: Subtype,
    first: usize,
    second: usize,
}

fn x_shape(m: &Monomial) -> Result<XShape> {
    let not_x = || Error::NotTypeX {
        monomial: m.to_string(),
        chords: m.degree() / 2,
    };
    if !m.degree().is_multiple_of(2) {
        return Err(not_x());
    }
    let kind = classify_monomial(m, m.degree() / 2);
    let handle = match kind {
        MonomialType::X1 => 1,
        MonomialType::X2 => 2,
        _ => return Err(not_x()),
    };
    let slots: Vec<usize> = (0..m.degree())
        .filter(|&i| m.letters()[i].index() == handle)
        .collect();
    let a_first = m.letters()[slots[0]].is_a();
    let subtype = match (handle, a_first) {
        (1, true) => Subtype::A1,
        (1, false) => Subtype::B1,
        (_, true) => Subtype::A2,
        (_, false) => Subtype::B2,
    };
    Ok(XShape {
        kind,
        subtype,
        first: slots[0],
        second: slots[1],
    })
}

pub fn subtype(m: &Monomial) -> Result<Subtype> {
    x_shape(m).map(|s| s.subtype)
}

fn support<S: Scalar>(p: &TensorPoly<S>) -> BTreeSet<Monomial> {
    p.terms().map(|(m, _)| m.clone()).collect()
}

/// All common monomials of `δ(m1)` and `δ(m2)`, both of type `X`.
pub fn shared_summands<S: Scalar>(
    m1: &Monomial,
    m2: &Monomial,
    t: &DerivationTable<S>,
) -> Result<BTreeSet<Monomial>> {
    x_shape(m1)?;
    x_shape(m2)?;
    let d1 = apply_derivation(t, &TensorPoly::monomial(t.genus, m1.clone(), S::one()))?;
    let d2 = apply_derivation(t, &TensorPoly::monomial(t.genus, m2.clone(), S::one()))?;
    Ok(support(&d1).intersection(&support(&d2)).cloned().collect())
}

/// The smallest common monomial of `δ(m1)` and `δ(m2)`, if any.
pub fn shared_summand<S: Scalar>(
    m1: &Monomial,
    m2: &Monomial,
    t: &DerivationTable<S>,
) -> Result<Option<Monomial>> {
    Ok(shared_summands(m1, m2, t)?.into_iter().next())
}

/// Expected overlap of `δ_φ(m1)` and `δ_φ(m2)` from the position of the
/// handle letters alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PredictedOverlap {
    /// `m1 = m2`: every summand is shared.
    Identical,
    /// Exactly one common monomial.
    Single(Monomial),
    None,
}

/// Overlap rule for `δ_φ` on type-`X` monomials.
///
/// Distinct monomials overlap only when one is `v x_1 y_1 w` and the other is
/// `v x_2 y_2 w` with the handle pairs adjacent in the same slots. The common
/// monomial then depends on the two subtypes:
///
/// | X2 \ X1 | A1          | B1          |
/// |---------|-------------|-------------|
/// | A2      | v a1 b1 b2 w | v b1 a1 b2 w |
/// | B2      | v b2 a1 b1 w | v b2 b1 a1 w |
pub fn predicted_overlap(m1: &Monomial, m2: &Monomial) -> Result<PredictedOverlap> {
    let s1 = x_shape(m1)?;
    let s2 = x_shape(m2)?;
    if m1 == m2 {
        return Ok(PredictedOverlap::Identical);
    }
    if s1.kind == s2.kind {
        return Ok(PredictedOverlap::None);
    }
    let ((one, x1), (two, x2)) = if s1.kind == MonomialType::X1 {
        ((m1, s1), (m2, s2))
    } else {
        ((m2, s2), (m1, s1))
    };
    let adjacent = x1.second == x1.first + 1 && x2.first == x1.first && x2.second == x1.second;
    let (v, w) = (&one.letters()[..x1.first], &one.letters()[x1.second + 1..]);
    if !adjacent || v != &two.letters()[..x1.first] || w != &two.letters()[x1.second + 1..] {
        return Ok(PredictedOverlap::None);
    }
    let (a1, b1, b2) = (GenLetter::a(1), GenLetter::b(1), GenLetter::b(2));
    let middle = match (x2.subtype, x1.subtype) {
        (Subtype::A2, Subtype::A1) => [a1, b1, b2],
        (Subtype::A2, _) => [b1, a1, b2],
        (_, Subtype::A1) => [b2, a1, b1],
        _ => [b2, b1, a1],
    };
    let mut letters = v.to_vec();
    letters.extend(middle);
    letters.extend_from_slice(w);
    Ok(PredictedOverlap::Single(Monomial::new(letters)))
}

/// Number of monomials with nonzero coefficient in `δ_φ(m)` for a type-`X`
/// monomial with `l` chords.
pub fn count_delta_summands(m: &Monomial, l: usize) -> Result<usize> {
    if !classify_monomial(m, l).is_x() {
        return Err(Error::NotTypeX {
            monomial: m.to_string(),
            chords: l,
        });
    }
    let genus = m.max_index().max(2);
    let p = TensorPoly::<crate::Rational>::monomial(genus, m.clone(), num_traits::One::one());
    Ok(apply_derivation(&delta_phi_table(genus)?, &p)?.len())
}

/// Every monomial of type `X` with `l` chords: all orderings of the letter
/// multiset of `X1` or `X2`.
pub fn type_x_monomials(l: usize) -> Vec<Monomial> {
    let (a, b) = (GenLetter::a, GenLetter::b);
    let mut out = Vec::new();
    for head in [[a(1), b(1)], [a(2), b(2)]] {
        let letters: Vec<GenLetter> = pattern(&head, l).into_keys().collect();
        permutations(
            &letters,
            &mut Vec::new(),
            &mut vec![false; letters.len()],
            &mut out,
        );
    }
    out
}

fn permutations(
    src: &[GenLetter],
    acc: &mut Vec<GenLetter>,
    used: &mut [bool],
    out: &mut Vec<Monomial>,
) {
    if acc.len() == src.len() {
        out.push(Monomial::new(acc.clone()));
        return;
    }
    for i in 0..src.len() {
        if !used[i] {
            used[i] = true;
            acc.push(src[i]);
            permutations(src, acc, used, out);
            acc.pop();
            used[i] = false;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub genus: usize,
    pub chords: usize,
    /// `δ_φ` kills the invariant of the trivial diagram.
    pub zero_on_c0: bool,
    /// Rank of `δ_φ(ω_C)` over the nontrivial diagrams `C`.
    pub rank_rest: usize,
    pub expected_rank: usize,
    pub independent: bool,
    /// Pairs of distinct diagrams whose type-`X` summands have overlapping
    /// `δ_φ` images.
    pub collisions: usize,
    /// Nontrivial diagrams whose image has a type-`Y` monomial with
    /// coefficient `±1`.
    pub nontrivial_with_unit_y: usize,
}

fn require_stable_range(genus: usize, l: usize) -> Result<()> {
    if 2 * l + 1 > 2 * genus {
        return Err(Error::Hypothesis(format!(
            "2l+1 = {} exceeds 2g = {}",
            2 * l + 1,
            2 * genus
        )));
    }
    Ok(())
}

/// Images of the chord invariants under `δ_φ`, one per diagram.
pub fn delta_phi_images<S: Scalar>(
    genus: usize,
    l: usize,
) -> Result<Vec<(ChordDiagram, TensorPoly<S>)>> {
    let t = delta_phi_table::<S>(genus)?;
    enumerate_diagrams(l)
        .into_iter()
        .map(|c| {
            let img = apply_derivation(&t, &build_omega_c::<S>(&c, genus)?)?;
            Ok((c, img))
        })
        .collect()
}

/// Number of pairs of distinct diagrams `C ≠ C'` with type-`X` summands of
/// `ω_C`, `ω_C'` whose `δ_φ` images share a monomial.
pub fn cross_diagram_collisions(genus: usize, l: usize) -> Result<usize> {
    let t = delta_phi_table::<crate::Rational>(genus)?;
    let mut owners: BTreeMap<Monomial, BTreeSet<usize>> = BTreeMap::new();
    for (ci, c) in enumerate_diagrams(l).iter().enumerate() {
        let omega_c = build_omega_c::<crate::Rational>(c, genus)?;
        for (m, _) in omega_c
            .terms()
            .filter(|(m, _)| classify_monomial(m, l).is_x())
        {
            let img = apply_derivation(
                &t,
                &TensorPoly::monomial(genus, m.clone(), num_traits::One::one()),
            )?;
            for (y, _) in img.terms() {
                owners.entry(y.clone()).or_default().insert(ci);
            }
        }
    }
    let mut pairs = BTreeSet::new();
    for set in owners.values() {
        for (i, x) in set.iter().enumerate() {
            for y in set.iter().skip(i + 1) {
                pairs.insert((*x, *y));
            }
        }
    }
    Ok(pairs.len())
}

pub fn independence_report<S: Scalar>(genus: usize, l: usize) -> Result<IndependenceReport> {
    require_stable_range(genus, l)?;
    let images = delta_phi_images::<S>(genus, l)?;
    let zero_on_c0 = images[0].1.is_zero();
    let rest: Vec<Vec<(Monomial, S)>> = images[1..]
        .iter()
        .map(|(_, p)| p.terms().map(|(m, c)| (m.clone(), c.clone())).collect())
        .collect();
    let rank_rest = rank_of_family(&rest);
    let unit = |c: &S| *c == S::one() || *c == -S::one();
    let nontrivial_with_unit_y = images[1..]
        .iter()
        .filter(|(_, p)| {
            p.terms()
                .any(|(m, c)| unit(c) && classify_monomial(m, l) == MonomialType::Y)
        })
        .count();
    let expected_rank = double_factorial(2 * l as i64 - 1) as usize - 1;
    Ok(IndependenceReport {
        genus,
        chords: l,
        zero_on_c0,
        rank_rest,
        expected_rank,
        independent: rank_rest == expected_rank,
        collisions: cross_diagram_collisions(genus, l)?,
        nontrivial_with_unit_y,
    })
}

/// Number of `a` letters and of `b` letters.
pub fn kind_counts(m: &Monomial) -> (usize, usize) {
    let a = m.letters().iter().filter(|l| l.kind() == Kind::A).count();
    (a, m.degree() - a)
}

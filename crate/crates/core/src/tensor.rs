//! The free tensor algebra on the symplectic generators `a_1, b_1, ..., a_g, b_g`,
//! with exact coefficients and optional degree truncation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    A,
    B,
}

/// One of the generators `a_i` or `b_i`. Ordered `a_1 < b_1 < a_2 < b_2 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenLetter {
    index: u16,
    kind: Kind,
}

impl GenLetter {
    pub fn new(kind: Kind, index: usize) -> Self {
        assert!(index >= 1, "generator indices start at 1");
        GenLetter {
            index: index as u16,
            kind,
        }
    }

    pub fn a(index: usize) -> Self {
        Self::new(Kind::A, index)
    }

    pub fn b(index: usize) -> Self {
        Self::new(Kind::B, index)
    }

    pub fn kind(self) -> Kind {
        self.kind
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_a(self) -> bool {
        self.kind == Kind::A
    }

    /// Position in the ordered basis `(a_1, b_1, ..., a_g, b_g)`, from zero.
    pub fn code(self) -> usize {
        2 * (self.index() - 1) + if self.is_a() { 0 } else { 1 }
    }

    pub fn from_code(code: usize) -> Self {
        let kind = if code.is_multiple_of(2) {
            Kind::A
        } else {
            Kind::B
        };
        Self::new(kind, code / 2 + 1)
    }

    /// All `2g` letters in basis order.
    pub fn all(genus: usize) -> impl Iterator<Item = GenLetter> {
        (0..2 * genus).map(Self::from_code)
    }

    /// The symplectic partner: `a_i <-> b_i`.
    pub fn dual(self) -> Self {
        let kind = if self.is_a() { Kind::B } else { Kind::A };
        Self::new(kind, self.index())
    }

    pub fn check_genus(self, genus: usize) -> Result<()> {
        if self.index() > genus {
            Err(Error::LetterOutOfRange {
                letter: self.to_string(),
                genus,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for GenLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.is_a() { 'a' } else { 'b' };
        write!(f, "{}{}", k, self.index)
    }
}

impl FromStr for GenLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a generator: {s:?}"));
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('a') => Kind::A,
            Some('b') => Kind::B,
            _ => return Err(bad()),
        };
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 || index > u16::MAX as usize {
            return Err(bad());
        }
        Ok(GenLetter::new(kind, index))
    }
}

/// The intersection pairing: `<a_i, b_j> = δ_ij = -<b_j, a_i>`, zero otherwise.
pub fn pairing<S: Scalar>(x: GenLetter, y: GenLetter) -> S {
    if x.index() != y.index() || x.kind() == y.kind() {
        S::zero()
    } else if x.is_a() {
        S::one()
    } else {
        -S::one()
    }
}

/// A word in the generators; a basis tensor of `H^{⊗k}`.
///
/// Ordered by degree first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<GenLetter>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(letters: Vec<GenLetter>) -> Self {
        Monomial(letters)
    }

    pub fn letters(&self) -> &[GenLetter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    /// Position among the `(2g)^k` monomials of degree `k`, most significant
    /// letter first.
    pub fn rank_in(&self, genus: usize) -> usize {
        self.0.iter().fold(0, |acc, l| acc * 2 * genus + l.code())
    }

    pub fn unrank(genus: usize, degree: usize, mut rank: usize) -> Monomial {
        let base = 2 * genus;
        let mut v = vec![GenLetter::from_code(0); degree];
        for slot in v.iter_mut().rev() {
            *slot = GenLetter::from_code(rank % base);
            rank /= base;
        }
        Monomial(v)
    }

    /// All monomials of the given degree, in order.
    pub fn all_of_degree(genus: usize, degree: usize) -> impl Iterator<Item = Monomial> {
        let count = (2 * genus).pow(degree as u32);
        (0..count).map(move |r| Monomial::unrank(genus, degree, r))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<GenLetter>> for Monomial {
    fn from(v: Vec<GenLetter>) -> Self {
        Monomial(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Monomial::unit());
        }
        s.split('*')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }
}

impl Serialize for Monomial {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// A finite linear combination of monomials, possibly truncated in degree.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorPoly<S> {
    genus: usize,
    terms: BTreeMap<Monomial, S>,
    max_degree: Option<usize>,
}

impl<S: Scalar> TensorPoly<S> {
    pub fn zero(genus: usize) -> Self {
        TensorPoly {
            genus,
            terms: BTreeMap::new(),
            max_degree: None,
        }
    }

    pub fn one(genus: usize) -> Self {
        Self::monomial(genus, Monomial::unit(), S::one())
    }

    pub fn monomial(genus: usize, m: Monomial, c: S) -> Self {
        let mut p = Self::zero(genus);
        p.add_term(m, c);
        p
    }

    pub fn letter(genus: usize, l: GenLetter) -> Self {
        Self::monomial(genus, Monomial(vec![l]), S::one())
    }

    /// Builds from terms, merging repeats and checking every letter.
    pub fn from_terms(
        genus: usize,
        terms: impl IntoIterator<Item = (Monomial, S)>,
    ) -> Result<Self> {
        let mut p = Self::zero(genus);
        for (m, c) in terms {
            for l in m.letters() {
                l.check_genus(genus)?;
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Builds from `(monomial, coefficient)` text pairs, e.g. `("a1*b1", "-1/2")`.
    pub fn parse_terms(genus: usize, terms: &[(&str, &str)]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = S::decode(c).ok_or_else(|| Error::Parse(format!("bad coefficient {c:?}")))?;
            out.push((m.parse()?, c));
        }
        Self::from_terms(genus, out)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() || self.max_degree.is_some_and(|k| m.degree() > k) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Discards all terms above degree `k` and records the bound.
    pub fn truncate(mut self, k: usize) -> Self {
        self.terms.retain(|m, _| m.degree() <= k);
        self.max_degree = Some(self.max_degree.map_or(k, |d| d.min(k)));
        self
    }

    /// Forgets the truncation bound without changing any term.
    pub fn untruncated(mut self) -> Self {
        self.max_degree = None;
        self
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.genus);
        out.max_degree = self.max_degree;
        if c.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), x.clone() * c.clone()))
            .collect();
        out
    }

    /// Sum of the terms of degree exactly `d`.
    pub fn grade_component(&self, d: usize) -> Self {
        TensorPoly {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            max_degree: None,
        }
    }

    /// Lowest degree carrying a nonzero term.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Bilinear extension of concatenation, truncated at the tighter bound.
    pub fn concat_product(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch {
                left: self.genus,
                right: other.genus,
            });
        }
        let bound = match (self.max_degree, other.max_degree) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = Self::zero(self.genus);
        out.max_degree = bound;
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if bound.is_some_and(|k| m1.degree() + m2.degree() > k) {
                    continue;
                }
                out.add_term(m1.concat(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.genus);
        acc.max_degree = self.max_degree;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coordinates in the monomial basis of `H^{⊗d}` (homogeneous part only).
    pub fn graded_coordinates(&self, d: usize) -> Vec<(usize, S)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.rank_in(self.genus), c.clone()))
            .collect()
    }

    pub fn from_graded_coordinates(genus: usize, d: usize, v: &[(usize, S)]) -> Self {
        let mut p = Self::zero(genus);
        for (i, c) in v {
            p.add_term(Monomial::unrank(genus, d, *i), c.clone());
        }
        p
    }
}

impl<S: Scalar> fmt::Display for TensorPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.to_string().starts_with('-');
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{m}")?;
            } else if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Add for &TensorPoly<S> {
    type Output = TensorPoly<S>;
    fn add(self, rhs: Self) -> TensorPoly<S> {
        assert_eq!(self.genus, rhs.genus, "genus mismatch");
        let mut out = self.clone();
        if let Some(k) = rhs.max_degree {
            out = out.truncate(k);
        }
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &TensorPoly<S> {
    type Output = TensorPoly<S>;
    fn sub(self, rhs: Self) -> TensorPoly<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Neg for &TensorPoly<S> {
    type Output = TensorPoly<S>;
    fn neg(self) -> TensorPoly<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Mul for &TensorPoly<S> {
    type Output = TensorPoly<S>;
    fn mul(self, rhs: Self) -> TensorPoly<S> {
        self.concat_product(rhs).expect("genus mismatch")
    }
}

/// `x⊗y − y⊗x` for degree-one `x`, `y`.
pub fn wedge<S: Scalar>(x: &TensorPoly<S>, y: &TensorPoly<S>) -> Result<TensorPoly<S>> {
    if !x.is_homogeneous(1) || !y.is_homogeneous(1) {
        return Err(Error::NotHomogeneous { expected: 1 });
    }
    Ok(&x.concat_product(y)? - &y.concat_product(x)?)
}

/// `ω = Σ a_i⊗b_i − b_i⊗a_i`.
pub fn omega<S: Scalar>(genus: usize) -> Result<TensorPoly<S>> {
    if genus < 1 {
        return Err(Error::Genus { min: 1, got: genus });
    }
    let mut p = TensorPoly::zero(genus);
    for i in 1..=genus {
        p.add_term(Monomial(vec![GenLetter::a(i), GenLetter::b(i)]), S::one());
        p.add_term(Monomial(vec![GenLetter::b(i), GenLetter::a(i)]), -S::one());
    }
    Ok(p)
}

pub fn grade_component<S: Scalar>(p: &TensorPoly<S>, d: usize) -> TensorPoly<S> {
    p.grade_component(d)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    monomial: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    genus: usize,
    terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_degree: Option<usize>,
}

impl<S: Scalar> Serialize for TensorPoly<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        PolyJson {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    monomial: m.to_string(),
                    coeff: c.encode(),
                })
                .collect(),
            max_degree: self.max_degree,
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for TensorPoly<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let m: Monomial = t.monomial.parse().map_err(D::Error::custom)?;
            let c = S::decode(&t.coeff)
                .ok_or_else(|| D::Error::custom(format!("bad coefficient {:?}", t.coeff)))?;
            terms.push((m, c));
        }
        let p = TensorPoly::from_terms(raw.genus, terms).map_err(D::Error::custom)?;
        Ok(match raw.max_degree {
            Some(k) => p.truncate(k),
            None => p,
        })
    }
}

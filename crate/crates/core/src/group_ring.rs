//! The free group `π = F_{2g}` and its truncated Magnus expansion.
//!
//! A word `w` is sent to the degree-`≤k` tensor polynomial obtained from
//! `x ↦ 1 + X`, `x⁻¹ ↦ Σ_j (−X)^j`. This realizes `ℚπ/I^{k+1}` inside the
//! truncated tensor algebra, with `I^n` corresponding to degrees `≥ n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{GenLetter, Monomial, TensorPoly};

/// A freely reduced word: no zero exponents and no two adjacent syllables on
/// the same letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    genus: usize,
    syllables: Vec<(GenLetter, i64)>,
}

/// Free reduction of a raw syllable sequence.
pub fn reduce(genus: usize, raw: impl IntoIterator<Item = (GenLetter, i64)>) -> Result<FreeWord> {
    let mut out: Vec<(GenLetter, i64)> = Vec::new();
    for (l, e) in raw {
        l.check_genus(genus)?;
        push_syllable(&mut out, l, e);
    }
    Ok(FreeWord {
        genus,
        syllables: out,
    })
}

fn push_syllable(out: &mut Vec<(GenLetter, i64)>, l: GenLetter, e: i64) {
    if e == 0 {
        return;
    }
    match out.last_mut() {
        Some((last, x)) if *last == l => {
            *x += e;
            if *x == 0 {
                out.pop();
            }
        }
        _ => out.push((l, e)),
    }
}

impl FreeWord {
    pub fn identity(genus: usize) -> Self {
        FreeWord {
            genus,
            syllables: Vec::new(),
        }
    }

    pub fn generator(genus: usize, l: GenLetter) -> Result<Self> {
        reduce(genus, [(l, 1)])
    }

    /// Parses whitespace-separated tokens such as `a1 b1^-1 a2^3`; `1` or an
    /// empty string is the identity.
    pub fn parse(genus: usize, s: &str) -> Result<Self> {
        let raw = s.parse::<RawWord>()?;
        raw.into_word(genus)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn syllables(&self) -> &[(GenLetter, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters counted with multiplicity.
    pub fn length(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// The word spelled out as single letters with exponent `±1`.
    pub fn letters(&self) -> impl Iterator<Item = (GenLetter, i64)> + '_ {
        self.syllables
            .iter()
            .flat_map(|&(l, e)| std::iter::repeat_n((l, e.signum()), e.unsigned_abs() as usize))
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        assert_eq!(self.genus, other.genus, "genus mismatch");
        let mut out = self.syllables.clone();
        for &(l, e) in &other.syllables {
            push_syllable(&mut out, l, e);
        }
        FreeWord {
            genus: self.genus,
            syllables: out,
        }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            genus: self.genus,
            syllables: self.syllables.iter().rev().map(|&(l, e)| (l, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(FreeWord::identity(self.genus), |acc, _| acc.mul(&base))
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &FreeWord, v: &FreeWord) -> FreeWord {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// Exponent sums per letter, indexed by letter code.
    pub fn abelianization(&self) -> Vec<i64> {
        let mut v = vec![0; 2 * self.genus];
        for &(l, e) in &self.syllables {
            v[l.code()] += e;
        }
        v
    }

    /// Replaces each letter by the word at its code in `images`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let genus = images.first().map_or(self.genus, |w| w.genus);
        let mut out = FreeWord::identity(genus);
        for &(l, e) in &self.syllables {
            out = out.mul(&images[l.code()].pow(e));
        }
        out
    }

    /// `Some(n)` when the word equals `ζ^n`.
    pub fn zeta_exponent(&self) -> Option<i64> {
        if self.is_identity() {
            return Some(0);
        }
        let z = zeta(self.genus).ok()?;
        let len = z.length();
        if !self.length().is_multiple_of(len) {
            return None;
        }
        let n = (self.length() / len) as i64;
        [n, -n].into_iter().find(|&e| z.pow(e) == *self)
    }
}

fn write_syllables(f: &mut fmt::Formatter<'_>, syllables: &[(GenLetter, i64)]) -> fmt::Result {
    if syllables.is_empty() {
        return write!(f, "1");
    }
    for (i, (l, e)) in syllables.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        if *e == 1 {
            write!(f, "{l}")?;
        } else {
            write!(f, "{l}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_syllables(f, &self.syllables)
    }
}

impl Serialize for FreeWord {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.collect_str(self)
    }
}

/// An unreduced syllable list as read from text or JSON, before its genus is
/// known.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RawWord(pub Vec<(GenLetter, i64)>);

impl fmt::Display for RawWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_syllables(f, &self.0)
    }
}

impl Serialize for RawWord {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.collect_str(self)
    }
}

impl RawWord {
    pub fn into_word(self, genus: usize) -> Result<FreeWord> {
        reduce(genus, self.0)
    }
}

fn parse_token(tok: &str) -> Result<(GenLetter, i64)> {
    let (letter, exp) = match tok.split_once('^') {
        Some((l, e)) => {
            let e = e.trim_matches(|c| c == '{' || c == '}' || c == '(' || c == ')');
            let e = e.replace('−', "-");
            (
                l,
                e.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
            )
        }
        None => (tok, 1),
    };
    Ok((letter.parse()?, exp))
}

impl FromStr for RawWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(RawWord::default());
        }
        s.split_whitespace()
            .map(parse_token)
            .collect::<Result<_>>()
            .map(RawWord)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SyllableJson {
    Token(String),
    Pair(String, i64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawWordJson {
    Text(String),
    Syllables(Vec<SyllableJson>),
}

impl<'de> Deserialize<'de> for RawWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match RawWordJson::deserialize(d)? {
            RawWordJson::Text(s) => s.parse().map_err(D::Error::custom),
            RawWordJson::Syllables(list) => list
                .into_iter()
                .map(|syl| match syl {
                    SyllableJson::Token(t) => parse_token(&t),
                    SyllableJson::Pair(l, e) => Ok((l.parse()?, e)),
                })
                .collect::<Result<_>>()
                .map(RawWord)
                .map_err(D::Error::custom),
        }
    }
}

/// `ζ = [a_1, b_1] ⋯ [a_g, b_g]`.
pub fn zeta(genus: usize) -> Result<FreeWord> {
    if genus < 1 {
        return Err(Error::Genus { min: 1, got: genus });
    }
    let mut w = FreeWord::identity(genus);
    for i in 1..=genus {
        let a = FreeWord::generator(genus, GenLetter::a(i))?;
        let b = FreeWord::generator(genus, GenLetter::b(i))?;
        w = w.mul(&FreeWord::commutator(&a, &b));
    }
    Ok(w)
}

/// `(1 + X)^n` truncated at degree `k`, via generalized binomial coefficients.
fn letter_power<S: Scalar>(genus: usize, l: GenLetter, n: i64, k: usize) -> TensorPoly<S> {
    let mut p = TensorPoly::zero(genus).truncate(k);
    let mut coeff = S::one();
    for j in 0..=k {
        if coeff.is_zero() {
            break;
        }
        p.add_term(Monomial::new(vec![l; j]), coeff.clone());
        coeff = coeff * S::from_int(n - j as i64) / S::from_int(j as i64 + 1);
    }
    p
}

/// Magnus image of `w` in degrees `≤ k`; the result carries the bound `k`.
pub fn magnus<S: Scalar>(w: &FreeWord, k: usize) -> TensorPoly<S> {
    let mut acc = TensorPoly::one(w.genus).truncate(k);
    for &(l, e) in &w.syllables {
        acc = &acc * &letter_power(w.genus, l, e, k);
    }
    acc
}

/// Lowest `n` with the element in `I^n` but not `I^{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationDegree {
    Degree(usize),
    /// Zero in the truncation, i.e. in `I^{k+1}`.
    AboveTruncation,
}

pub fn filtration_degree<S: Scalar>(s: &TensorPoly<S>) -> FiltrationDegree {
    s.min_degree()
        .map_or(FiltrationDegree::AboveTruncation, FiltrationDegree::Degree)
}

/// `magnus(ζ, k) − 1`.
pub fn zeta_minus_one<S: Scalar>(genus: usize, k: usize) -> Result<TensorPoly<S>> {
    let z = magnus::<S>(&zeta(genus)?, k);
    Ok(&z - &TensorPoly::one(genus))
}

/// Degree-`2l` part of `(ζ − 1)^l`, computed in `𝒫_k`.
pub fn zeta_power_leading<S: Scalar>(l: usize, genus: usize, k: usize) -> Result<TensorPoly<S>> {
    if k < 2 * l {
        return Err(Error::Hypothesis(format!(
            "truncation degree {k} is below 2l = {}",
            2 * l
        )));
    }
    Ok(zeta_minus_one::<S>(genus, k)?.pow(l).grade_component(2 * l))
}

fn zeta_inverse_series<S: Scalar>(
    n: usize,
    genus: usize,
    alternating: bool,
) -> Result<TensorPoly<S>> {
    let one = TensorPoly::<S>::one(genus).truncate(n);
    let x = &one - &magnus::<S>(&zeta(genus)?, n);
    let sign = if alternating && n % 2 == 1 {
        -S::one()
    } else {
        S::one()
    };
    let mut sum = TensorPoly::zero(genus).truncate(n);
    for i in 0..=n {
        sum = &sum + &x.pow(i).scale(&sign);
    }
    Ok(sum)
}

/// Checks `ζ⁻¹ ≡ Σ_{i=0}^n (1 − ζ)^i  (mod I^{n+1})`.
pub fn zeta_inverse_identity_check<S: Scalar>(n: usize, genus: usize) -> Result<bool> {
    let lhs = magnus::<S>(&zeta(genus)?.inverse(), n);
    Ok(lhs == zeta_inverse_series(n, genus, false)?)
}

/// The same identity with an extra overall factor `(−1)^n` in every summand.
/// It holds only for even `n`.
pub fn signed_zeta_inverse_identity_check<S: Scalar>(n: usize, genus: usize) -> Result<bool> {
    let lhs = magnus::<S>(&zeta(genus)?.inverse(), n);
    Ok(lhs == zeta_inverse_series(n, genus, true)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::omega;
    use crate::{Poly, Rational};

    fn w(g: usize, s: &str) -> FreeWord {
        FreeWord::parse(g, s).unwrap()
    }

    fn poly(g: usize, k: usize, terms: &[(&str, &str)]) -> Poly {
        Poly::parse_terms(g, terms).unwrap().truncate(k)
    }

    #[test]
    fn reduction() {
        assert!(w(2, "a1 a1^-1").is_identity());
        assert_eq!(w(2, "a1 a1").syllables(), &[(GenLetter::a(1), 2)]);
        assert_eq!(w(2, "a1 b1 b1^-1 a1"), w(2, "a1^2"));
        assert_eq!(w(2, "a1^0 b2"), w(2, "b2"));
        let x = w(3, "a1 b2^-3 a3 b1");
        assert!(x.mul(&x.inverse()).is_identity());
        assert!(FreeWord::parse(1, "a2").is_err());
        assert!(FreeWord::parse(1, "a1^x").is_err());
    }

    #[test]
    fn display_round_trip() {
        let x = w(2, "a1 b1^-1 a2^3");
        assert_eq!(x.to_string(), "a1 b1^-1 a2^3");
        assert_eq!(w(2, &x.to_string()), x);
        assert_eq!(FreeWord::identity(2).to_string(), "1");
        assert_eq!(w(2, "1"), FreeWord::identity(2));
    }

    #[test]
    fn json_forms() {
        let text: RawWord = serde_json::from_str(r#""a1 b1^-1""#).unwrap();
        let tokens: RawWord = serde_json::from_str(r#"["a1", "b1^-1"]"#).unwrap();
        let pairs: RawWord = serde_json::from_str(r#"[["a1", 1], ["b1", -1]]"#).unwrap();
        assert_eq!(text, tokens);
        assert_eq!(text, pairs);
        assert_eq!(
            serde_json::to_string(&text.into_word(1).unwrap()).unwrap(),
            r#""a1 b1^-1""#
        );
    }

    #[test]
    fn magnus_examples() {
        assert_eq!(
            magnus::<Rational>(&w(1, "a1"), 2),
            poly(1, 2, &[("1", "1"), ("a1", "1")])
        );
        let inv = magnus::<Rational>(&w(1, "a1^-1"), 2);
        assert_eq!(inv, poly(1, 2, &[("1", "1"), ("a1", "-1"), ("a1*a1", "1")]));
        let c = magnus::<Rational>(&w(1, "a1 b1 a1^-1 b1^-1"), 2);
        assert_eq!(
            c,
            poly(1, 2, &[("1", "1"), ("a1*b1", "1"), ("b1*a1", "-1")])
        );
        let sq = magnus::<Rational>(&w(1, "a1^2"), 3);
        assert_eq!(sq, poly(1, 3, &[("1", "1"), ("a1", "2"), ("a1*a1", "1")]));
    }

    #[test]
    fn zeta_and_omega() {
        assert_eq!(zeta(1).unwrap(), w(1, "a1 b1 a1^-1 b1^-1"));
        assert!(zeta(0).is_err());
        for g in 1..=3 {
            let d = zeta_minus_one::<Rational>(g, 2).unwrap();
            assert_eq!(d.untruncated(), omega(g).unwrap());
            assert_eq!(
                magnus::<Rational>(&zeta(g).unwrap(), 3).coeff(&Monomial::unit()),
                Rational::from_int(1)
            );
        }
    }

    #[test]
    fn filtration() {
        for k in 2..=4 {
            let d = zeta_minus_one::<Rational>(2, k).unwrap();
            assert_eq!(filtration_degree(&d), FiltrationDegree::Degree(2));
        }
        let x = &magnus::<Rational>(&w(2, "a1"), 3) - &Poly::one(2);
        assert_eq!(filtration_degree(&x), FiltrationDegree::Degree(1));
        assert_eq!(
            filtration_degree(&Poly::zero(2)),
            FiltrationDegree::AboveTruncation
        );
        assert_eq!(
            filtration_degree(&Poly::one(2)),
            FiltrationDegree::Degree(0)
        );
    }

    #[test]
    fn leading_terms_of_zeta_powers() {
        assert_eq!(
            zeta_power_leading::<Rational>(1, 1, 2).unwrap(),
            omega(1).unwrap()
        );
        let o = omega::<Rational>(2).unwrap();
        assert_eq!(zeta_power_leading::<Rational>(2, 2, 4).unwrap(), &o * &o);
        assert_eq!(
            zeta_power_leading::<Rational>(0, 2, 0).unwrap(),
            Poly::one(2)
        );
        assert!(zeta_power_leading::<Rational>(2, 2, 3).is_err());
    }

    #[test]
    fn zeta_inverse_series_identity() {
        for (n, g) in [(0, 1), (1, 1), (2, 1), (3, 2), (4, 2)] {
            assert!(zeta_inverse_identity_check::<Rational>(n, g).unwrap());
        }
        assert!(signed_zeta_inverse_identity_check::<Rational>(2, 1).unwrap());
        assert!(!signed_zeta_inverse_identity_check::<Rational>(1, 1).unwrap());
        assert!(!signed_zeta_inverse_identity_check::<Rational>(3, 2).unwrap());
    }

    #[test]
    fn zeta_powers_are_recognized() {
        let z = zeta(2).unwrap();
        assert_eq!(z.pow(3).zeta_exponent(), Some(3));
        assert_eq!(z.pow(-2).zeta_exponent(), Some(-2));
        assert_eq!(FreeWord::identity(2).zeta_exponent(), Some(0));
        assert_eq!(w(2, "a1").zeta_exponent(), None);
        assert_eq!(z.inverse().mul(&w(2, "a1")).zeta_exponent(), None);
    }

    #[test]
    fn substitution() {
        let images = vec![w(1, "a1 b1"), w(1, "b1")];
        assert_eq!(w(1, "a1^-1 b1").substitute(&images), w(1, "b1^-1 a1^-1 b1"));
        assert_eq!(w(2, "a1 b2^2 a1^-1").abelianization(), vec![0, 0, 0, 2]);
    }
}

//! Free-group automorphisms fixing the boundary word, their linear action on
//! the truncated group ring `𝒫_k`, and brute-force fixed spaces.
//!
//! `𝒫_k` is modelled as the Magnus image truncated at degree `k`. Its basis is
//! the monomials of degree `≤ k`, ordered by degree and then by
//! [`Monomial::rank_in`]; the monomial `ℓ_1⋯ℓ_d` stands for
//! `(x_{ℓ_1} − 1)⋯(x_{ℓ_d} − 1)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_ring::{magnus, zeta, zeta_minus_one, FreeWord, RawWord};
use crate::johnson::DerivationTable;
use crate::limits::{tensor_dim, truncated_dim, SizeLimit};
use crate::linalg::{kernel, SparseMatrix, SparseVec, Subspace};
use crate::scalar::Scalar;
use crate::symplectic::invariant_basis;
use crate::tensor::{omega, GenLetter, Monomial, TensorPoly};

/// An endomorphism of the free group given by the image of each generator,
/// optionally with a claimed inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EndoJson", into = "EndoJson")]
pub struct Endo {
    genus: usize,
    name: Option<String>,
    images: Vec<FreeWord>,
    inverse: Option<Vec<FreeWord>>,
}

#[derive(Serialize, Deserialize)]
struct EndoJson {
    genus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    images: BTreeMap<String, RawWord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse: Option<BTreeMap<String, RawWord>>,
}

fn images_from_map(genus: usize, map: BTreeMap<String, RawWord>) -> Result<Vec<FreeWord>> {
    let mut images: Vec<FreeWord> = GenLetter::all(genus)
        .map(|l| FreeWord::generator(genus, l))
        .collect::<Result<_>>()?;
    for (key, raw) in map {
        let l: GenLetter = key.parse()?;
        l.check_genus(genus)?;
        images[l.code()] = raw.into_word(genus)?;
    }
    Ok(images)
}

fn images_to_map(images: &[FreeWord]) -> BTreeMap<String, RawWord> {
    images
        .iter()
        .enumerate()
        .map(|(code, w)| {
            (
                GenLetter::from_code(code).to_string(),
                RawWord(w.syllables().to_vec()),
            )
        })
        .collect()
}

impl TryFrom<EndoJson> for Endo {
    type Error = Error;
    fn try_from(j: EndoJson) -> Result<Self> {
        let images = images_from_map(j.genus, j.images)?;
        let inverse = j.inverse.map(|m| images_from_map(j.genus, m)).transpose()?;
        Ok(Endo {
            genus: j.genus,
            name: j.name,
            images,
            inverse,
        })
    }
}

impl From<Endo> for EndoJson {
    fn from(e: Endo) -> Self {
        EndoJson {
            genus: e.genus,
            name: e.name,
            images: images_to_map(&e.images),
            inverse: e.inverse.as_deref().map(images_to_map),
        }
    }
}

impl Endo {
    pub fn identity(genus: usize) -> Self {
        let images: Vec<FreeWord> = GenLetter::all(genus)
            .map(|l| FreeWord::generator(genus, l).expect("letter in range"))
            .collect();
        Endo {
            genus,
            name: Some("identity".into()),
            inverse: Some(images.clone()),
            images,
        }
    }

    /// Builds from text images; letters not listed are fixed.
    pub fn parse(
        genus: usize,
        images: &[(&str, &str)],
        inverse: Option<&[(&str, &str)]>,
    ) -> Result<Self> {
        let to_map = |pairs: &[(&str, &str)]| -> Result<BTreeMap<String, RawWord>> {
            pairs
                .iter()
                .map(|(k, v)| Ok((k.to_string(), v.parse()?)))
                .collect()
        };
        Endo::try_from(EndoJson {
            genus,
            name: None,
            images: to_map(images)?,
            inverse: inverse.map(to_map).transpose()?,
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn image(&self, l: GenLetter) -> &FreeWord {
        &self.images[l.code()]
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    /// The claimed inverse as an endomorphism of its own.
    pub fn inverse_endo(&self) -> Option<Endo> {
        self.inverse.as_ref().map(|inv| Endo {
            genus: self.genus,
            name: self.name.as_ref().map(|n| format!("{n}^-1")),
            images: inv.clone(),
            inverse: Some(self.images.clone()),
        })
    }

    /// `self ∘ other`, i.e. `other` first; inverses compose when both exist.
    pub fn compose(&self, other: &Endo) -> Endo {
        assert_eq!(self.genus, other.genus, "genus mismatch");
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        let inverse = match (&self.inverse, &other.inverse) {
            (Some(si), Some(oi)) => Some(si.iter().map(|w| w.substitute(oi)).collect()),
            _ => None,
        };
        Endo {
            genus: self.genus,
            name: None,
            images,
            inverse,
        }
    }

    /// Integer matrix of the induced map on `H`; column `j` is the image of
    /// the letter with code `j`.
    pub fn abelianization_matrix(&self) -> Vec<Vec<i64>> {
        let n = 2 * self.genus;
        let mut m = vec![vec![0; n]; n];
        for (j, w) in self.images.iter().enumerate() {
            for (i, x) in w.abelianization().into_iter().enumerate() {
                m[i][j] = x;
            }
        }
        m
    }
}

fn determinant(m: &[Vec<i64>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_int(*x)).collect())
        .collect();
    let mut det = BigRational::from_int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !num_traits::Zero::is_zero(&a[r][c])) else {
            return BigRational::from_int(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= pivot.clone();
        for r in c + 1..n {
            let f = a[r][c].clone() / pivot.clone();
            let (top, rest) = a.split_at_mut(r);
            for (x, y) in rest[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= y.clone() * f.clone();
            }
        }
    }
    det
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoValidation {
    /// `None` when no inverse is given and homology does not rule it out.
    pub automorphism: Option<bool>,
    pub fixes_zeta: bool,
    pub torelli: bool,
}

/// Checks an endomorphism. With `certify`, a claimed inverse is required and
/// both composites must fix every generator.
pub fn validate_endo(e: &Endo, certify: bool) -> Result<EndoValidation> {
    for w in e.images.iter().chain(e.inverse.iter().flatten()) {
        if w.genus() != e.genus {
            return Err(Error::GenusMismatch {
                left: e.genus,
                right: w.genus(),
            });
        }
    }
    let ab = e.abelianization_matrix();
    let unimodular = {
        let d = determinant(&ab);
        d == BigRational::from_int(1) || d == BigRational::from_int(-1)
    };
    let automorphism = match e.inverse_endo() {
        Some(inv) => {
            let ok = |f: &Endo| {
                GenLetter::all(e.genus)
                    .all(|l| f.image(l) == &FreeWord::generator(e.genus, l).unwrap())
            };
            Some(ok(&e.compose(&inv)) && ok(&inv.compose(e)))
        }
        None if certify => return Err(Error::MissingInverse),
        None if !unimodular => Some(false),
        None => None,
    };
    let z = zeta(e.genus)?;
    let torelli = ab
        .iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == i64::from(i == j)));
    Ok(EndoValidation {
        automorphism,
        fixes_zeta: e.apply(&z) == z,
        torelli,
    })
}

/// A named list of certified, boundary-fixing automorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenSet {
    name: String,
    genus: usize,
    generators: Vec<Endo>,
}

#[derive(Deserialize)]
struct GenSetJson {
    name: String,
    genus: usize,
    generators: Vec<Endo>,
}

impl GenSet {
    pub fn new(name: impl Into<String>, genus: usize, generators: Vec<Endo>) -> Result<Self> {
        let name = name.into();
        for (index, e) in generators.iter().enumerate() {
            let invalid = |reason: String| Error::InvalidGenerator {
                name: name.clone(),
                index,
                reason,
            };
            if e.genus != genus {
                return Err(invalid(format!("genus {} in a genus-{genus} set", e.genus)));
            }
            let v = validate_endo(e, true).map_err(|err| invalid(err.to_string()))?;
            if v.automorphism != Some(true) {
                return Err(invalid("claimed inverse does not invert it".into()));
            }
            if !v.fixes_zeta {
                return Err(invalid("does not fix the boundary word".into()));
            }
        }
        Ok(GenSet {
            name,
            genus,
            generators,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GenSetJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        GenSet::new(raw.name, raw.genus, raw.generators)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generators(&self) -> &[Endo] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The first `n` generators.
    pub fn prefix(&self, n: usize) -> GenSet {
        GenSet {
            name: format!("{}[..{n}]", self.name),
            genus: self.genus,
            generators: self.generators[..n.min(self.len())].to_vec(),
        }
    }
}

/// Rewrites a two-handle automorphism written on handles 1 and 2 so that it
/// acts on handles `i` and `i + 1`.
fn shift_handles(text: &str, i: usize) -> String {
    text.split_whitespace()
        .map(|tok| {
            let (letter, rest) = tok.split_at(1);
            let (idx, exp) = rest.split_once('^').map_or((rest, ""), |(a, b)| (a, b));
            let idx: usize = idx.parse().expect("handle index");
            let shifted = format!("{letter}{}", idx + i - 1);
            if exp.is_empty() {
                shifted
            } else {
                format!("{shifted}^{exp}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn as_refs(v: &[(String, String)]) -> Vec<(&str, &str)> {
    v.iter().map(|(k, w)| (k.as_str(), w.as_str())).collect()
}

/// Dehn twists about the meridian and longitude of every handle, plus one
/// boundary-fixing automorphism per pair of consecutive handles acting on `H`
/// as the transvection along `b_i + a_{i+1}`.
pub fn standard_genset(genus: usize) -> Result<GenSet> {
    if genus < 1 {
        return Err(Error::Genus { min: 1, got: genus });
    }
    let mut gens = Vec::with_capacity(3 * genus - 1);
    for i in 1..=genus {
        let (a, b) = (format!("a{i}"), format!("b{i}"));
        gens.push(
            Endo::parse(
                genus,
                &[(&a, &format!("{a} {b}"))],
                Some(&[(&a, &format!("{a} {b}^-1"))]),
            )?
            .named(format!("twist_b{i}")),
        );
        gens.push(
            Endo::parse(
                genus,
                &[(&b, &format!("{b} {a}"))],
                Some(&[(&b, &format!("{b} {a}^-1"))]),
            )?
            .named(format!("twist_a{i}")),
        );
    }
    const FORWARD: [(&str, &str); 4] = [
        ("a1", "a1 b1 a2"),
        ("b1", "a2^-1 b1 a2"),
        ("a2", "a2^-1 b1 a2 b1^-1 a2"),
        ("b2", "b2 a2^-2 b1^-1 a2"),
    ];
    const BACKWARD: [(&str, &str); 4] = [
        ("a1", "a1 b1^-2 a2^-1 b1"),
        ("b1", "b1^-1 a2 b1 a2^-1 b1"),
        ("a2", "b1^-1 a2 b1"),
        ("b2", "b2 a2 b1"),
    ];
    for i in 1..genus {
        let shift = |table: &[(&str, &str)]| -> Vec<(String, String)> {
            table
                .iter()
                .map(|(k, v)| (shift_handles(k, i), shift_handles(v, i)))
                .collect()
        };
        let (fwd, bwd) = (shift(&FORWARD), shift(&BACKWARD));
        gens.push(
            Endo::parse(genus, &as_refs(&fwd), Some(&as_refs(&bwd)))?
                .named(format!("connect_b{i}a{}", i + 1)),
        );
    }
    GenSet::new(format!("standard-g{genus}"), genus, gens)
}

/// Position of the first basis monomial of degree `d` in `𝒫_k`.
pub fn degree_offset(genus: usize, d: usize) -> usize {
    if d == 0 {
        0
    } else {
        truncated_dim(genus, d - 1)
    }
}

/// Coordinates of a polynomial in the monomial basis of `𝒫_k`.
pub fn truncated_coordinates<S: Scalar>(p: &TensorPoly<S>) -> SparseVec<S> {
    let g = p.genus();
    p.terms()
        .map(|(m, c)| (degree_offset(g, m.degree()) + m.rank_in(g), c.clone()))
        .collect()
}

pub fn from_truncated_coordinates<S: Scalar>(
    genus: usize,
    k: usize,
    v: &[(usize, S)],
) -> TensorPoly<S> {
    let mut p = TensorPoly::zero(genus).truncate(k);
    for (i, c) in v {
        let d = (0..=k)
            .rfind(|&d| degree_offset(genus, d) <= *i)
            .expect("index in range");
        p.add_term(
            Monomial::unrank(genus, d, i - degree_offset(genus, d)),
            c.clone(),
        );
    }
    p
}

/// Matrix of `e` acting on `𝒫_k`.
pub fn action_matrix<S: Scalar>(e: &Endo, k: usize, limit: SizeLimit) -> Result<SparseMatrix<S>> {
    let g = e.genus;
    let n = truncated_dim(g, k);
    limit.check(n)?;
    let one = TensorPoly::<S>::one(g).truncate(k);
    let shifted: Vec<TensorPoly<S>> = e.images.iter().map(|w| &magnus::<S>(w, k) - &one).collect();

    let mut columns: Vec<SparseVec<S>> = Vec::with_capacity(n);
    let mut layer = vec![one];
    columns.push(truncated_coordinates(&layer[0]));
    for _ in 1..=k {
        // degree-d monomials in rank order are (prefix, last letter) pairs
        layer = layer
            .par_iter()
            .flat_map_iter(|prefix| shifted.iter().map(move |s| prefix * s))
            .collect();
        columns.extend(layer.iter().map(truncated_coordinates));
    }
    SparseMatrix::from_columns(n, &columns)
}

/// Common fixed vectors of the generators on `𝒫_k`.
pub fn fixed_space<S: Scalar>(gens: &GenSet, k: usize, limit: SizeLimit) -> Result<Subspace<S>> {
    let n = truncated_dim(gens.genus, k);
    limit.check(n)?;
    if gens.is_empty() {
        return Ok(Subspace::full(n));
    }
    let blocks: Vec<SparseMatrix<S>> = gens
        .generators
        .par_iter()
        .map(|e| action_matrix::<S>(e, k, limit).map(|m| m.minus_identity()))
        .collect::<Result<_>>()?;
    Ok(kernel(&SparseMatrix::vstack(&blocks)?.without_zero_rows()))
}

/// `span{(ζ−1)^i : 2i < k} ⊕ [H^{⊗k}]^{Sp}` inside `𝒫_k`.
pub fn predicted_invariants<S: Scalar>(
    genus: usize,
    k: usize,
    limit: SizeLimit,
) -> Result<Subspace<S>> {
    let n = truncated_dim(genus, k);
    limit.check(n)?;
    let z = zeta_minus_one::<S>(genus, k)?;
    let powers = (0..)
        .take_while(|i| 2 * i < k)
        .map(|i| truncated_coordinates(&z.pow(i)));
    let top =
        invariant_basis::<S>(genus, k, SizeLimit::UNBOUNDED)?.embed(n, degree_offset(genus, k));
    Subspace::span(n, powers).sum(&top)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    Equal,
    /// The computed space is strictly larger: the generators miss part of the
    /// group.
    StrictlyContains,
    /// Some predicted invariant is not fixed.
    Missing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremAReport {
    pub genus: usize,
    pub degree: usize,
    pub generator_set: String,
    pub in_range: bool,
    pub ambient_dim: usize,
    pub computed_dim: usize,
    pub predicted_dim: usize,
    pub equal: bool,
    pub containment: Containment,
}

/// Compares the brute-force fixed space of `𝒫_k` with the predicted one.
/// Outside `k + 1 ≤ 2g` this is refused unless `explore` is set.
pub fn theorem_a_report<S: Scalar>(
    genus: usize,
    k: usize,
    gens: &GenSet,
    explore: bool,
    limit: SizeLimit,
) -> Result<TheoremAReport> {
    if gens.genus != genus {
        return Err(Error::GenusMismatch {
            left: genus,
            right: gens.genus,
        });
    }
    let in_range = k < 2 * genus;
    if !in_range && !explore {
        return Err(Error::Hypothesis(format!(
            "k+1 = {} exceeds 2g = {}",
            k + 1,
            2 * genus
        )));
    }
    let computed = fixed_space::<S>(gens, k, limit)?;
    let predicted = predicted_invariants::<S>(genus, k, limit)?;
    let containment = if !computed.contains_subspace(&predicted) {
        Containment::Missing
    } else if computed == predicted {
        Containment::Equal
    } else {
        Containment::StrictlyContains
    };
    Ok(TheoremAReport {
        genus,
        degree: k,
        generator_set: gens.name.clone(),
        in_range,
        ambient_dim: computed.ambient_dim(),
        computed_dim: computed.dim(),
        predicted_dim: predicted.dim(),
        equal: containment == Containment::Equal,
        containment,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainLemmaReport {
    pub genus: usize,
    pub chords: usize,
    /// Dimension of `I^{2l}/I^{2l+2}`, degrees `2l` and `2l+1`.
    pub ambient_dim: usize,
    pub computed_dim: usize,
    pub is_span_of_zeta_power: bool,
    pub projection_spans_omega_power: bool,
}

/// Fixed space of the generators on `I^{2l}/I^{2l+2}`, realized as the
/// degree `2l` and `2l+1` block of their action on `𝒫_{2l+1}`.
pub fn main_lemma_report<S: Scalar>(
    genus: usize,
    l: usize,
    gens: &GenSet,
    limit: SizeLimit,
) -> Result<MainLemmaReport> {
    if gens.genus != genus {
        return Err(Error::GenusMismatch {
            left: genus,
            right: gens.genus,
        });
    }
    if 2 * l + 1 > 2 * genus {
        return Err(Error::Hypothesis(format!(
            "2l+1 = {} exceeds 2g = {}",
            2 * l + 1,
            2 * genus
        )));
    }
    let k = 2 * l + 1;
    limit.check(truncated_dim(genus, k))?;
    let lo = degree_offset(genus, 2 * l);
    let block: Vec<usize> = (lo..truncated_dim(genus, k)).collect();
    let m = block.len();
    let fixed = if gens.is_empty() {
        Subspace::full(m)
    } else {
        let parts: Vec<SparseMatrix<S>> = gens
            .generators
            .par_iter()
            .map(|e| {
                action_matrix::<S>(e, k, limit)
                    .map(|a| a.submatrix(&block, &block).minus_identity())
            })
            .collect::<Result<_>>()?;
        kernel(&SparseMatrix::vstack(&parts)?.without_zero_rows())
    };
    let power = zeta_minus_one::<S>(genus, k)?.pow(l);
    let local: SparseVec<S> = truncated_coordinates(&power)
        .into_iter()
        .filter(|(i, _)| *i >= lo)
        .map(|(i, c)| (i - lo, c))
        .collect();
    let line = Subspace::span(m, [local]);
    let top: Vec<usize> = (0..tensor_dim(genus, 2 * l)).collect();
    let omega_power = if l == 0 {
        TensorPoly::one(genus)
    } else {
        omega::<S>(genus)?.pow(l)
    };
    let omega_line = Subspace::span(top.len(), [omega_power.graded_coordinates(2 * l)]);
    Ok(MainLemmaReport {
        genus,
        chords: l,
        ambient_dim: m,
        computed_dim: fixed.dim(),
        is_span_of_zeta_power: fixed == line,
        projection_spans_omega_power: fixed.project(&top) == omega_line,
    })
}

/// Degree-two part of `e(x) − x` for each generator `x`. Requires `e` to act
/// trivially on `H`.
pub fn derivation_from_endo<S: Scalar>(e: &Endo) -> Result<DerivationTable<S>> {
    if !validate_endo(e, false)?.torelli {
        return Err(Error::NotTorelli);
    }
    let images = GenLetter::all(e.genus).map(|l| {
        let x = FreeWord::generator(e.genus, l).expect("letter in range");
        let diff = &magnus::<S>(e.image(l), 2) - &magnus::<S>(&x, 2);
        (l, diff.grade_component(2))
    });
    DerivationTable::new(e.genus, images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSample {
    pub orbit_size_lower_bound: usize,
    pub saturated: bool,
}

/// Breadth-first closure of `{w}` under the generators and their inverses,
/// stopping once `budget` distinct words are found.
pub fn orbit_sample(w: &FreeWord, gens: &GenSet, budget: usize) -> Result<OrbitSample> {
    if budget == 0 {
        return Err(Error::Hypothesis("orbit budget must be at least 1".into()));
    }
    if w.genus() != gens.genus {
        return Err(Error::GenusMismatch {
            left: w.genus(),
            right: gens.genus,
        });
    }
    let moves: Vec<Endo> = gens
        .generators
        .iter()
        .flat_map(|e| [Some(e.clone()), e.inverse_endo()])
        .flatten()
        .collect();
    let mut seen = BTreeSet::from([w.clone()]);
    let mut queue = VecDeque::from([w.clone()]);
    while let Some(cur) = queue.pop_front() {
        for e in &moves {
            let next = e.apply(&cur);
            if seen.insert(next.clone()) {
                if seen.len() >= budget {
                    return Ok(OrbitSample {
                        orbit_size_lower_bound: seen.len(),
                        saturated: false,
                    });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(OrbitSample {
        orbit_size_lower_bound: seen.len(),
        saturated: true,
    })
}

/// Conjugation of the first handle by `[a_1, b_1]`: boundary-fixing and
/// trivial on homology, with vanishing degree-two derivation.
pub fn handle_conjugation(genus: usize) -> Result<Endo> {
    let c = "a1 b1 a1^-1 b1^-1";
    let ci = "b1 a1 b1^-1 a1^-1";
    Endo::parse(
        genus,
        &[
            ("a1", &format!("{c} a1 {ci}")),
            ("b1", &format!("{c} b1 {ci}")),
        ],
        Some(&[
            ("a1", &format!("{ci} a1 {c}")),
            ("b1", &format!("{ci} b1 {c}")),
        ]),
    )
    .map(|e| e.named("conjugate_handle1"))
}

/// `C A C⁻¹ A C A⁻¹` for the twist `A` along `a_1` and the handle connector
/// `C` between handles 1 and 2. On `H` both are transvections along classes
/// with intersection number one, which satisfy the braid relation, so this
/// acts trivially on `H`; its degree-two derivation is nonzero.
pub fn braid_defect(genus: usize) -> Result<Endo> {
    if genus < 2 {
        return Err(Error::Genus { min: 2, got: genus });
    }
    let gens = standard_genset(genus)?;
    let find = |name: &str| {
        gens.generators
            .iter()
            .find(|e| e.name() == Some(name))
            .cloned()
            .expect("generator present")
    };
    let a = find("twist_a1");
    let c = find("connect_b1a2");
    let (ai, ci) = (a.inverse_endo().unwrap(), c.inverse_endo().unwrap());
    Ok(c.compose(&a)
        .compose(&ci)
        .compose(&a)
        .compose(&c)
        .compose(&ai)
        .named("braid_defect_a1_b1a2"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::johnson::apply_derivation;
    use crate::Rational;

    const L: SizeLimit = SizeLimit::GROUP_RING;

    fn w(g: usize, s: &str) -> FreeWord {
        FreeWord::parse(g, s).unwrap()
    }

    #[test]
    fn validation_examples() {
        let id = validate_endo(&Endo::identity(2), true).unwrap();
        assert_eq!(
            id,
            EndoValidation {
                automorphism: Some(true),
                fixes_zeta: true,
                torelli: true
            }
        );
        let t = Endo::parse(1, &[("a1", "a1 b1")], Some(&[("a1", "a1 b1^-1")])).unwrap();
        let v = validate_endo(&t, true).unwrap();
        assert_eq!(
            (v.automorphism, v.fixes_zeta, v.torelli),
            (Some(true), true, false)
        );
        let collapse = Endo::parse(2, &[("a1", "a2")], None).unwrap();
        assert_eq!(
            validate_endo(&collapse, false).unwrap().automorphism,
            Some(false)
        );
        assert_eq!(validate_endo(&collapse, true), Err(Error::MissingInverse));
        let wrong_inverse = Endo::parse(1, &[("a1", "a1 b1")], Some(&[("a1", "a1 b1")])).unwrap();
        assert_eq!(
            validate_endo(&wrong_inverse, true).unwrap().automorphism,
            Some(false)
        );
        let unfixing = Endo::parse(1, &[("a1", "b1 a1")], Some(&[("a1", "b1^-1 a1")])).unwrap();
        assert!(!validate_endo(&unfixing, true).unwrap().fixes_zeta);
    }

    #[test]
    fn shipped_generators_are_valid() {
        for g in 1..=4 {
            let set = standard_genset(g).unwrap();
            assert_eq!(set.len(), 3 * g - 1);
        }
        let bad = Endo::parse(1, &[("a1", "b1 a1")], Some(&[("a1", "b1^-1 a1")])).unwrap();
        assert!(matches!(
            GenSet::new("bad", 1, vec![bad]),
            Err(Error::InvalidGenerator { index: 0, .. })
        ));
    }

    #[test]
    fn composites_carry_inverses() {
        let gens = standard_genset(2).unwrap();
        let e = gens.generators()[0]
            .compose(&gens.generators()[4])
            .compose(&gens.generators()[3]);
        assert_eq!(validate_endo(&e, true).unwrap().automorphism, Some(true));
        let x = w(2, "a1 b2 a2^-1");
        assert_eq!(
            e.apply(&gens.generators()[3].inverse_endo().unwrap().apply(&x)),
            gens.generators()[0].apply(&gens.generators()[4].apply(&x))
        );
    }

    #[test]
    fn endo_json_round_trip() {
        let e = Endo::parse(2, &[("a1", "a1 b1")], Some(&[("a1", "a1 b1^-1")])).unwrap();
        let js = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<Endo>(&js).unwrap(), e);
        let sparse: Endo =
            serde_json::from_str(r#"{"genus":2,"images":{"a1":[["a1",1],["b1",1]]}}"#).unwrap();
        assert_eq!(sparse.image(GenLetter::b(2)), &w(2, "b2"));
        assert!(!sparse.has_inverse());
        let set = standard_genset(2).unwrap();
        assert_eq!(GenSet::from_json(&set.to_json()).unwrap(), set);
    }

    #[test]
    fn identity_acts_trivially() {
        let a = action_matrix::<Rational>(&Endo::identity(2), 2, L).unwrap();
        assert_eq!(a, SparseMatrix::identity(21));
        assert!(matches!(
            action_matrix::<Rational>(&Endo::identity(3), 6, L),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn coordinates_round_trip() {
        let p = &magnus::<Rational>(&w(2, "a1 b2^-1 a2"), 3) - &TensorPoly::one(2);
        let v = truncated_coordinates(&p);
        assert_eq!(from_truncated_coordinates(2, 3, &v), p);
    }

    #[test]
    fn zeta_powers_are_fixed_vectors() {
        let gens = standard_genset(2).unwrap();
        let z = zeta_minus_one::<Rational>(2, 4).unwrap();
        for e in gens.generators() {
            let a = action_matrix::<Rational>(e, 4, L).unwrap();
            for i in 0..=2 {
                let v = truncated_coordinates(&z.pow(i));
                assert_eq!(a.mul_vec(&v), v);
            }
        }
    }

    #[test]
    fn small_fixed_spaces() {
        let empty = GenSet::new("empty", 2, vec![]).unwrap();
        assert_eq!(fixed_space::<Rational>(&empty, 2, L).unwrap().dim(), 21);
        let id = GenSet::new("id", 2, vec![Endo::identity(2)]).unwrap();
        assert_eq!(fixed_space::<Rational>(&id, 2, L).unwrap().dim(), 21);
        let gens = standard_genset(2).unwrap();
        let f = fixed_space::<Rational>(&gens, 2, L).unwrap();
        assert_eq!(f.dim(), 2);
        let z = truncated_coordinates(&zeta_minus_one::<Rational>(2, 2).unwrap());
        assert!(f.contains(&z));
        assert!(f.contains(&[(0, Rational::from_int(1))]));
    }

    #[test]
    fn theorem_a_small() {
        let gens = standard_genset(2).unwrap();
        for (k, dim) in [(1, 1), (2, 2), (3, 2)] {
            let r = theorem_a_report::<Rational>(2, k, &gens, false, L).unwrap();
            assert_eq!(
                (r.predicted_dim, r.computed_dim, r.containment),
                (dim, dim, Containment::Equal)
            );
        }
        assert!(matches!(
            theorem_a_report::<Rational>(2, 5, &gens, false, L),
            Err(Error::Hypothesis(_))
        ));
        let partial = theorem_a_report::<Rational>(2, 2, &gens.prefix(2), false, L).unwrap();
        assert_eq!(partial.containment, Containment::StrictlyContains);
    }

    #[test]
    fn main_lemma_small() {
        let gens = standard_genset(2).unwrap();
        let r = main_lemma_report::<Rational>(2, 1, &gens, L).unwrap();
        assert_eq!((r.ambient_dim, r.computed_dim), (80, 1));
        assert!(r.is_span_of_zeta_power && r.projection_spans_omega_power);
        let r = main_lemma_report::<Rational>(2, 0, &gens, L).unwrap();
        assert_eq!(r.computed_dim, 1);
        assert!(r.is_span_of_zeta_power);
        assert!(main_lemma_report::<Rational>(2, 2, &gens, L).is_err());
    }

    #[test]
    fn derivations_of_torelli_elements() {
        assert!(derivation_from_endo::<Rational>(&Endo::identity(2))
            .unwrap()
            .is_zero());
        assert_eq!(
            derivation_from_endo::<Rational>(&standard_genset(2).unwrap().generators()[0]),
            Err(Error::NotTorelli)
        );
        let conj = handle_conjugation(2).unwrap();
        let v = validate_endo(&conj, true).unwrap();
        assert!(v.automorphism == Some(true) && v.fixes_zeta && v.torelli);
        assert!(derivation_from_endo::<Rational>(&conj).unwrap().is_zero());

        let defect = braid_defect(2).unwrap();
        let v = validate_endo(&defect, true).unwrap();
        assert!(v.automorphism == Some(true) && v.fixes_zeta && v.torelli);
        let t = derivation_from_endo::<Rational>(&defect).unwrap();
        let p = |terms: &[(&str, &str)]| crate::Poly::parse_terms(2, terms).unwrap();
        assert_eq!(
            t.image(GenLetter::a(1)).unwrap(),
            &p(&[("a1*a2", "1"), ("a2*a1", "-1")])
        );
        assert_eq!(
            t.image(GenLetter::b(1)).unwrap(),
            &p(&[("b1*a2", "1"), ("a2*b1", "-1")])
        );
        assert_eq!(
            t.image(GenLetter::b(2)).unwrap(),
            &p(&[("a1*b1", "1"), ("b1*a1", "-1")])
        );
        assert!(t.image(GenLetter::a(2)).is_none());
        assert!(apply_derivation(&t, &omega(2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn orbits() {
        let gens = standard_genset(2).unwrap();
        let z3 = zeta(2).unwrap().pow(3);
        assert_eq!(
            orbit_sample(&z3, &gens, 50).unwrap(),
            OrbitSample {
                orbit_size_lower_bound: 1,
                saturated: true
            }
        );
        let r = orbit_sample(&FreeWord::identity(2), &gens, 10).unwrap();
        assert!(r.saturated && r.orbit_size_lower_bound == 1);
        let r = orbit_sample(&w(2, "a1"), &gens, 200).unwrap();
        assert!(!r.saturated && r.orbit_size_lower_bound == 200);
        assert!(orbit_sample(&w(2, "a1"), &gens, 0).is_err());
    }
}

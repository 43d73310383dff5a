//! Chord diagrams and the symplectic invariants `ω_C` they index.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{GenLetter, Monomial, TensorPoly};

/// A perfect matching of `{1, ..., 2l}` written as pairs `(p_i, q_i)` with
/// `p_i < q_i` and `p_1 < p_2 < ... < p_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct ChordDiagram {
    pairs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    size: usize,
    pairs: Vec<(usize, usize)>,
}

impl TryFrom<DiagramJson> for ChordDiagram {
    type Error = Error;
    fn try_from(j: DiagramJson) -> Result<Self> {
        let c = ChordDiagram::new(j.pairs)?;
        if c.size() != j.size {
            return Err(Error::Parse(format!(
                "diagram size {} does not match {} pairs",
                j.size,
                c.chords()
            )));
        }
        Ok(c)
    }
}

impl From<ChordDiagram> for DiagramJson {
    fn from(c: ChordDiagram) -> Self {
        DiagramJson {
            size: c.size(),
            pairs: c.pairs,
        }
    }
}

impl ChordDiagram {
    /// Validates canonical form: every pair increasing, left ends increasing,
    /// and the pairs partition `{1, ..., 2l}`.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = 2 * pairs.len();
        let mut seen = vec![false; n + 1];
        for (i, &(p, q)) in pairs.iter().enumerate() {
            if !(1 <= p && p < q && q <= n) {
                return Err(Error::Parse(format!(
                    "bad chord ({p}, {q}) in a diagram of size {n}"
                )));
            }
            if i > 0 && pairs[i - 1].0 >= p {
                return Err(Error::Parse("chord left ends must increase".into()));
            }
            for x in [p, q] {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Parse(format!("position {x} used twice")));
                }
            }
        }
        Ok(ChordDiagram { pairs })
    }

    /// The diagram `((1,2), (3,4), ..., (2l-1, 2l))`.
    pub fn trivial(l: usize) -> Self {
        ChordDiagram {
            pairs: (0..l).map(|i| (2 * i + 1, 2 * i + 2)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.pairs.iter().all(|&(p, q)| q == p + 1)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn chords(&self) -> usize {
        self.pairs.len()
    }

    pub fn size(&self) -> usize {
        2 * self.pairs.len()
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (p, q)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({p},{q})")?;
        }
        write!(f, ")")
    }
}

/// `(n)!! = n (n-2) (n-4) ...`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> u64 {
    if n <= 0 {
        1
    } else {
        (n as u64) * double_factorial(n - 2)
    }
}

/// All `(2l-1)!!` diagrams of size `2l`: position 1 is paired with each later
/// position in turn, smallest first, and the rest is matched recursively. The
/// trivial diagram comes first.
pub fn enumerate_diagrams(l: usize) -> Vec<ChordDiagram> {
    fn go(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<ChordDiagram>) {
        let Some((&first, rest)) = free.split_first() else {
            out.push(ChordDiagram { pairs: acc.clone() });
            return;
        };
        for (i, &partner) in rest.iter().enumerate() {
            let remaining: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            acc.push((first, partner));
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let positions: Vec<usize> = (1..=2 * l).collect();
    let mut out = Vec::with_capacity(double_factorial(2 * l as i64 - 1) as usize);
    go(&positions, &mut Vec::new(), &mut out);
    out
}

/// `ω_C`: a copy of `ω` inserted in the tensor slots of each chord.
///
/// Each chord `(p, q)` contributes either `a_i` at `p` and `b_i` at `q` (sign
/// `+1`) or `b_i` at `p` and `a_i` at `q` (sign `-1`), for every `i ≤ g`.
pub fn build_omega_c<S: Scalar>(c: &ChordDiagram, genus: usize) -> Result<TensorPoly<S>> {
    if genus < 1 {
        return Err(Error::Genus { min: 1, got: genus });
    }
    let l = c.chords();
    let choices = 2 * genus;
    let total = choices.pow(l as u32);
    let mut p = TensorPoly::zero(genus);
    let mut slots = vec![GenLetter::a(1); 2 * l];
    for mut code in 0..total {
        let mut negative = false;
        for &(pos_p, pos_q) in &c.pairs {
            let pick = code % choices;
            code /= choices;
            let i = pick / 2 + 1;
            if pick.is_multiple_of(2) {
                slots[pos_p - 1] = GenLetter::a(i);
                slots[pos_q - 1] = GenLetter::b(i);
            } else {
                slots[pos_p - 1] = GenLetter::b(i);
                slots[pos_q - 1] = GenLetter::a(i);
                negative = !negative;
            }
        }
        let sign = if negative { -S::one() } else { S::one() };
        p.add_term(Monomial::new(slots.clone()), sign);
    }
    Ok(p)
}

/// Joins with a chord the two slots holding the `a` and `b` letter of each
/// index. Every index must occur exactly once as `a` and once as `b`.
pub fn recover_diagram(m: &Monomial) -> Result<ChordDiagram> {
    let malformed = || Error::MalformedMonomial(m.to_string());
    let letters = m.letters();
    if !letters.len().is_multiple_of(2) {
        return Err(malformed());
    }
    let top = m.max_index();
    let mut a_at: Vec<Option<usize>> = vec![None; top + 1];
    let mut b_at: Vec<Option<usize>> = vec![None; top + 1];
    for (pos, l) in letters.iter().enumerate() {
        let slot = if l.is_a() {
            &mut a_at[l.index()]
        } else {
            &mut b_at[l.index()]
        };
        if slot.replace(pos + 1).is_some() {
            return Err(malformed());
        }
    }
    let mut pairs = Vec::with_capacity(letters.len() / 2);
    for i in 1..=top {
        match (a_at[i], b_at[i]) {
            (Some(x), Some(y)) => pairs.push((x.min(y), x.max(y))),
            (None, None) => {}
            _ => return Err(malformed()),
        }
    }
    pairs.sort_unstable();
    ChordDiagram::new(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::omega;
    use crate::{Poly, Rational};

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_diagrams(0), vec![ChordDiagram::trivial(0)]);
        assert_eq!(
            enumerate_diagrams(1),
            vec![ChordDiagram::new(vec![(1, 2)]).unwrap()]
        );
        let two: Vec<Vec<(usize, usize)>> = enumerate_diagrams(2)
            .iter()
            .map(|c| c.pairs().to_vec())
            .collect();
        assert_eq!(
            two,
            vec![
                vec![(1, 2), (3, 4)],
                vec![(1, 3), (2, 4)],
                vec![(1, 4), (2, 3)]
            ]
        );
        assert_eq!(enumerate_diagrams(3).len(), 15);
        assert!(enumerate_diagrams(3)[0].is_trivial());
    }

    #[test]
    fn counts_match_double_factorial() {
        for l in 0..=5 {
            assert_eq!(
                enumerate_diagrams(l).len() as u64,
                double_factorial(2 * l as i64 - 1)
            );
        }
    }

    #[test]
    fn omega_c_examples() {
        let w1 = omega::<Rational>(3).unwrap();
        assert_eq!(
            build_omega_c::<Rational>(&ChordDiagram::trivial(1), 3).unwrap(),
            w1
        );
        let w2 = omega::<Rational>(2).unwrap();
        assert_eq!(
            build_omega_c::<Rational>(&ChordDiagram::trivial(2), 2).unwrap(),
            &w2 * &w2
        );

        let c = ChordDiagram::new(vec![(1, 3), (2, 4)]).unwrap();
        let expected = Poly::from_terms(
            1,
            [
                ("a1*a1*b1*b1", 1),
                ("a1*b1*b1*a1", -1),
                ("b1*a1*a1*b1", -1),
                ("b1*b1*a1*a1", 1),
            ]
            .map(|(s, x)| (m(s), Rational::from_int(x))),
        )
        .unwrap();
        assert_eq!(build_omega_c::<Rational>(&c, 1).unwrap(), expected);
    }

    #[test]
    fn omega_c_term_count() {
        for c in enumerate_diagrams(3) {
            let p = build_omega_c::<Rational>(&c, 3).unwrap();
            assert_eq!(p.len(), 6usize.pow(3));
            assert!(p
                .terms()
                .all(|(_, x)| x.clone() == Rational::from_int(1)
                    || x.clone() == Rational::from_int(-1)));
        }
    }

    #[test]
    fn recovery_examples() {
        assert_eq!(
            recover_diagram(&m("a1*b1*a2*b2")).unwrap(),
            ChordDiagram::trivial(2)
        );
        assert_eq!(
            recover_diagram(&m("a1*a2*b1*b2")).unwrap(),
            ChordDiagram::new(vec![(1, 3), (2, 4)]).unwrap()
        );
        assert_eq!(
            recover_diagram(&m("b1*a1")).unwrap(),
            ChordDiagram::trivial(1)
        );
        assert!(recover_diagram(&m("a1*a1*b1*b1")).is_err());
        assert!(recover_diagram(&m("a1*b2")).is_err());
        assert!(recover_diagram(&m("a1*b1*a2")).is_err());
    }

    #[test]
    fn validation_and_json() {
        assert!(ChordDiagram::new(vec![(2, 1)]).is_err());
        assert!(ChordDiagram::new(vec![(1, 3), (2, 3)]).is_err());
        assert!(ChordDiagram::new(vec![(2, 3), (1, 4)]).is_err());
        let c = ChordDiagram::new(vec![(1, 4), (2, 3)]).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(js, r#"{"size":4,"pairs":[[1,4],[2,3]]}"#);
        assert_eq!(serde_json::from_str::<ChordDiagram>(&js).unwrap(), c);
        assert!(
            serde_json::from_str::<ChordDiagram>(r#"{"size":6,"pairs":[[1,4],[2,3]]}"#).is_err()
        );
    }
}

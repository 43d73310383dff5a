//! Test-only oracles, written independently of the library's sparse
//! elimination and Magnus code.
#![allow(dead_code)]

use num_traits::{One, Zero};
use passi_core::group_ring::FreeWord;
use passi_core::linalg::SparseMatrix;
use passi_core::tensor::GenLetter;
use passi_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rank by dense row reduction over the rationals.
pub fn dense_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone() / pivot.clone();
                let src = rows[rank].clone();
                for (x, y) in rows[r][c..].iter_mut().zip(&src[c..]) {
                    *x -= y.clone() * f.clone();
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn to_dense(m: &SparseMatrix<Rational>) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::zero(); m.ncols()]; m.nrows()];
    for (r, c, v) in m.triplets() {
        out[r][c] = v.clone();
    }
    out
}

/// Dense `k`-fold Kronecker power of a square integer matrix, with the first
/// factor most significant.
pub fn kron_power(m: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let mut acc = vec![vec![1i64]];
    for _ in 0..k {
        let (n, s) = (acc.len(), m.len());
        let mut next = vec![vec![0; n * s]; n * s];
        for i in 0..n {
            for j in 0..n {
                if acc[i][j] == 0 {
                    continue;
                }
                for a in 0..s {
                    for b in 0..s {
                        next[i * s + a][j * s + b] = acc[i][j] * m[a][b];
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

pub fn is_one(x: &Rational) -> bool {
    x.is_one()
}

pub fn random_word(rng: &mut ChaCha8Rng, genus: usize, max_len: usize) -> FreeWord {
    let len = rng.random_range(0..=max_len);
    let raw: Vec<(GenLetter, i64)> = (0..len)
        .map(|_| {
            let code = rng.random_range(0..2 * genus);
            let e = if rng.random_bool(0.5) { 1 } else { -1 };
            (GenLetter::from_code(code), e)
        })
        .collect();
    passi_core::group_ring::reduce(genus, raw).unwrap()
}

/// Runs `trials` seeded trials and returns the failure messages.
pub fn run_trials(
    seed: u64,
    trials: usize,
    mut check: impl FnMut(&mut ChaCha8Rng) -> Result<(), String>,
) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .filter_map(|i| check(&mut rng).err().map(|e| format!("trial {i}: {e}")))
        .collect()
}

pub fn random_monomial(
    rng: &mut ChaCha8Rng,
    genus: usize,
    degree: usize,
) -> passi_core::tensor::Monomial {
    passi_core::tensor::Monomial::new(
        (0..degree)
            .map(|_| GenLetter::from_code(rng.random_range(0..2 * genus)))
            .collect(),
    )
}

/// A polynomial with up to six terms of degree at most `max_degree`.
pub fn random_poly(rng: &mut ChaCha8Rng, genus: usize, max_degree: usize) -> passi_core::Poly {
    let mut p = passi_core::Poly::zero(genus);
    for _ in 0..rng.random_range(0..=6) {
        let d = rng.random_range(0..=max_degree);
        let m = random_monomial(rng, genus, d);
        p.add_term(m, q(rng.random_range(-3..=3)));
    }
    p
}

pub fn random_homogeneous(rng: &mut ChaCha8Rng, genus: usize, degree: usize) -> passi_core::Poly {
    let mut p = passi_core::Poly::zero(genus);
    for _ in 0..rng.random_range(0..=4) {
        let m = random_monomial(rng, genus, degree);
        p.add_term(m, q(rng.random_range(-3..=3)));
    }
    p
}

/// A product of up to `max_len` shipped generators and their inverses.
pub fn random_mapping_class(
    rng: &mut ChaCha8Rng,
    gens: &passi_core::mcg::GenSet,
    max_len: usize,
) -> passi_core::mcg::Endo {
    let mut e = passi_core::mcg::Endo::identity(gens.genus());
    for _ in 0..rng.random_range(0..=max_len) {
        let g = &gens.generators()[rng.random_range(0..gens.len())];
        let g = if rng.random_bool(0.5) {
            g.inverse_endo().unwrap()
        } else {
            g.clone()
        };
        e = e.compose(&g);
    }
    e
}

//! Multi-modular kernels with exact certification.
//!
//! The matrix is reduced modulo a few 31-bit primes, the kernel's entries are
//! lifted by Chinese remaindering and rational reconstruction, and the lifted
//! vectors are then checked against the original rational matrix. Because the
//! rank modulo a prime never exceeds the rank over the rationals, finding as
//! many verified rational kernel vectors as the modular kernel dimension pins
//! the rational kernel down completely. If no prime certifies, the routine
//! falls back to plain rational elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{kernel_by_elimination, rref, SparseMatrix, SparseVec, Subspace};
use crate::scalar::{Fp, SCREENING_PRIMES};

/// Matrices below this many stored entries skip the modular route.
const SMALL_NNZ: usize = 64;

/// A kernel computed modulo one prime.
#[derive(Debug)]
struct ModKernel {
    prime: u64,
    pivots: Vec<usize>,
    /// `(free column, pivot column) -> residue` for the free-normalized basis.
    entries: BTreeMap<(usize, usize), u64>,
}

fn screen<const P: u64>(m: &SparseMatrix<BigRational>) -> Option<ModKernel> {
    let mut rows = Vec::with_capacity(m.nrows());
    for row in m.rows() {
        let mut r: SparseVec<Fp<P>> = Vec::with_capacity(row.len());
        for (c, v) in row {
            let x = Fp::<P>::from_ratio(v)?;
            if x.residue() != 0 {
                r.push((*c, x));
            }
        }
        rows.push(r);
    }
    let ech = rref(m.ncols(), rows);
    let mut entries = BTreeMap::new();
    for row in &ech.rows {
        let p = row[0].0;
        for (c, v) in &row[1..] {
            entries.insert((*c, p), (-*v).residue());
        }
    }
    Some(ModKernel {
        prime: P,
        pivots: ech.pivots(),
        entries,
    })
}

type Screen = fn(&SparseMatrix<BigRational>) -> Option<ModKernel>;

const SCREENS: [Screen; 8] = [
    screen::<{ SCREENING_PRIMES[0] }>,
    screen::<{ SCREENING_PRIMES[1] }>,
    screen::<{ SCREENING_PRIMES[2] }>,
    screen::<{ SCREENING_PRIMES[3] }>,
    screen::<{ SCREENING_PRIMES[4] }>,
    screen::<{ SCREENING_PRIMES[5] }>,
    screen::<{ SCREENING_PRIMES[6] }>,
    screen::<{ SCREENING_PRIMES[7] }>,
];

/// Rank of `m` modulo the first usable screening prime. Never exceeds the
/// rational rank.
pub fn screening_rank(m: &SparseMatrix<BigRational>) -> Option<usize> {
    SCREENS.iter().find_map(|s| s(m)).map(|k| k.pivots.len())
}

/// Kernel of a rational matrix, screened modulo primes and certified exactly.
pub fn certified_kernel(m: &SparseMatrix<BigRational>) -> Subspace<BigRational> {
    if m.nnz() < SMALL_NNZ {
        return kernel_by_elimination(m);
    }
    let mut lift: Option<Lift> = None;
    for screen in SCREENS {
        let Some(k) = screen(m) else { continue };
        match &mut lift {
            None => lift = Some(Lift::new(k)),
            Some(l) => match better_profile(&k.pivots, &l.pivots) {
                std::cmp::Ordering::Less => *l = Lift::new(k),
                std::cmp::Ordering::Equal => l.absorb(k),
                // unlucky prime: its rank profile is worse than one seen already
                std::cmp::Ordering::Greater => continue,
            },
        }
        let l = lift.as_ref().unwrap();
        if let Some(vectors) = l.reconstruct(m.ncols()) {
            if vectors.iter().all(|v| m.mul_vec(v).is_empty()) {
                return Subspace::span(m.ncols(), vectors);
            }
        }
    }
    kernel_by_elimination(m)
}

/// Orders rank profiles so that the rational one is minimal: more pivots
/// first, then lexicographically earlier pivots.
fn better_profile(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}

struct Lift {
    pivots: Vec<usize>,
    modulus: BigInt,
    residues: BTreeMap<(usize, usize), BigInt>,
}

impl Lift {
    fn new(k: ModKernel) -> Self {
        Lift {
            pivots: k.pivots,
            modulus: BigInt::from(k.prime),
            residues: k
                .entries
                .into_iter()
                .map(|(key, r)| (key, BigInt::from(r)))
                .collect(),
        }
    }

    fn absorb(&mut self, k: ModKernel) {
        let p = BigInt::from(k.prime);
        let m_inv = mod_inverse(&(&self.modulus % &p), &p);
        let keys: Vec<(usize, usize)> = self
            .residues
            .keys()
            .chain(k.entries.keys())
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        for key in keys {
            let old = self
                .residues
                .get(&key)
                .cloned()
                .unwrap_or_else(BigInt::zero);
            let new = BigInt::from(k.entries.get(&key).copied().unwrap_or(0));
            let t = ((new - &old) * &m_inv).mod_floor(&p);
            self.residues.insert(key, old + &self.modulus * t);
        }
        self.modulus *= p;
    }

    fn reconstruct(&self, ncols: usize) -> Option<Vec<SparseVec<BigRational>>> {
        let mut is_pivot = vec![false; ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut by_free: BTreeMap<usize, SparseVec<BigRational>> = (0..ncols)
            .filter(|&c| !is_pivot[c])
            .map(|c| (c, vec![(c, BigRational::one())]))
            .collect();
        for (&(free, pivot), r) in &self.residues {
            if r.is_zero() {
                continue;
            }
            let q = rational_reconstruction(r, &self.modulus)?;
            by_free.get_mut(&free)?.push((pivot, q));
        }
        Some(
            by_free
                .into_values()
                .map(|mut v| {
                    v.sort_by_key(|e| e.0);
                    v
                })
                .collect(),
        )
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// The unique `n/d` with `|n|, d <= sqrt(m/2)` congruent to `a` mod `m`, if any.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

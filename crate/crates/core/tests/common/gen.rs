//! Seeded random instances shared by the property tests and the
//! acceptance harness.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use monoval::exactvalue::PrimeBasis;
use monoval::group::{GroupElement, MonomialAction};
use monoval::polyring::{Poly, RatFn};
use monoval::residue::{LaurentPoly, ResidueElement};
use monoval::valuation::MonomialValuation;

pub const PRIMES: [u64; 3] = [2, 3, 5];

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let d = [1, 1, 1, 2, 3][rng.gen_range(0..5)];
    q(rng.gen_range(-bound..=bound), d)
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    loop {
        let c = small_rational(rng, bound);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn basis<R: Rng>(rng: &mut R) -> Arc<PrimeBasis> {
    let m = rng.gen_range(1..=PRIMES.len());
    Arc::new(PrimeBasis::from_u64s(&PRIMES[..m]).unwrap())
}

/// Weights with arbitrary signs, `m x n`.
pub fn weights<R: Rng>(rng: &mut R, m: usize, n: usize) -> Vec<Vec<BigRational>> {
    (0..m)
        .map(|_| (0..n).map(|_| small_rational(rng, 3)).collect())
        .collect()
}

/// Nonnegative weights whose small entries make kernels likely; every column
/// is nonzero when `strict` holds, so all variables have value below one.
pub fn center_weights<R: Rng>(rng: &mut R, m: usize, n: usize, strict: bool) -> Vec<Vec<BigRational>> {
    let mut w: Vec<Vec<BigRational>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| q(rng.gen_range(0..=2), [1, 1, 2][rng.gen_range(0..3)]))
                .collect()
        })
        .collect();
    if strict {
        for j in 0..n {
            if w.iter().all(|row| row[j].is_zero()) {
                let i = rng.gen_range(0..m);
                w[i][j] = q(rng.gen_range(1..=2), 1);
            }
        }
    }
    w
}

pub fn shift<R: Rng>(rng: &mut R, n: usize) -> Option<Vec<BigRational>> {
    if rng.gen_bool(0.25) {
        Some((0..n).map(|_| q(rng.gen_range(-2..=2), 1)).collect())
    } else {
        None
    }
}

/// Any valuation (possibly without a center, possibly shifted).
pub fn valuation<R: Rng>(rng: &mut R, n: usize) -> MonomialValuation {
    let b = basis(rng);
    let w = weights(rng, b.len(), n);
    let s = shift(rng, n);
    MonomialValuation::new(n, b, w, s).unwrap()
}

/// A valuation with a center on the base chart.
pub fn centered_valuation<R: Rng>(rng: &mut R, n: usize, strict: bool) -> MonomialValuation {
    let b = basis(rng);
    let w = center_weights(rng, b.len(), n, strict);
    let s = shift(rng, n);
    MonomialValuation::new(n, b, w, s).unwrap()
}

pub fn poly<R: Rng>(rng: &mut R, n: usize, max_deg: u32, max_terms: usize) -> Poly {
    let terms = rng.gen_range(1..=max_terms);
    Poly::from_terms(
        n,
        (0..terms).map(|_| {
            let mut e = vec![0u32; n];
            let mut budget = rng.gen_range(0..=max_deg);
            while budget > 0 {
                e[rng.gen_range(0..n)] += 1;
                budget -= 1;
            }
            (e, nonzero_rational(rng, 5))
        }),
    )
}

pub fn nonzero_poly<R: Rng>(rng: &mut R, n: usize, max_deg: u32, max_terms: usize) -> Poly {
    loop {
        let p = poly(rng, n, max_deg, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn ratfn<R: Rng>(rng: &mut R, n: usize, max_deg: u32, max_terms: usize) -> RatFn {
    RatFn::new(
        poly(rng, n, max_deg, max_terms),
        nonzero_poly(rng, n, max_deg, max_terms),
    )
    .unwrap()
}

/// A nonzero element of the valuation ring: `p/q` or `q/p`, whichever has
/// value at most one.
pub fn ring_element<R: Rng>(rng: &mut R, v: &MonomialValuation, max_deg: u32, max_terms: usize) -> RatFn {
    let n = v.nvars();
    let a = nonzero_poly(rng, n, max_deg, max_terms);
    let b = nonzero_poly(rng, n, max_deg, max_terms);
    let va = v.value_of_poly(&a).unwrap();
    let vb = v.value_of_poly(&b).unwrap();
    if va <= vb {
        RatFn::new(a, b).unwrap()
    } else {
        RatFn::new(b, a).unwrap()
    }
}

pub fn laurent<R: Rng>(rng: &mut R, k: usize, max_terms: usize) -> LaurentPoly {
    let terms = rng.gen_range(1..=max_terms);
    LaurentPoly::from_terms(
        k,
        (0..terms).map(|_| {
            (
                (0..k).map(|_| rng.gen_range(-2..=2)).collect(),
                nonzero_rational(rng, 4),
            )
        }),
    )
}

pub fn residue_element<R: Rng>(rng: &mut R, k: usize) -> ResidueElement {
    loop {
        let den = laurent(rng, k, 3);
        if den.is_zero() {
            continue;
        }
        return ResidueElement::new(laurent(rng, k, 3), den).unwrap();
    }
}

/// An element of finite order: a random permutation with scalars whose
/// product around every cycle is `+-1`. With `signed` the scalars are `+-1`.
pub fn group_element<R: Rng>(rng: &mut R, n: usize, signed: bool) -> GroupElement {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut scalars = vec![BigRational::one(); n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut j = perm[start];
        while j != start {
            seen[j] = true;
            cycle.push(j);
            j = perm[j];
        }
        let mut product = BigRational::one();
        for &j in &cycle[..cycle.len() - 1] {
            let choices = if signed { 2 } else { 5 };
            let c = [q(1, 1), q(-1, 1), q(2, 1), q(1, 2), q(-3, 1)][rng.gen_range(0..choices)].clone();
            product *= &c;
            scalars[j] = c;
        }
        let sign = if rng.gen_bool(0.5) { q(1, 1) } else { q(-1, 1) };
        scalars[*cycle.last().unwrap()] = sign / product;
    }
    GroupElement::new(perm, scalars).unwrap()
}

/// One general generator, or two signed permutations (any set of those
/// generates a finite group).
pub fn action<R: Rng>(rng: &mut R, n: usize) -> MonomialAction {
    let count = rng.gen_range(1..=2);
    let gens = (0..count).map(|_| group_element(rng, n, count > 1)).collect();
    MonomialAction::new(n, gens).unwrap()
}

/// Weights constant on the orbits of the group's permutations, so that the
/// valuation is invariant. Columns are nonnegative.
pub fn invariant_valuation<R: Rng>(rng: &mut R, g: &MonomialAction) -> MonomialValuation {
    let n = g.nvars();
    let mut orbit = (0..n).collect::<Vec<usize>>();
    fn find(o: &mut Vec<usize>, i: usize) -> usize {
        if o[i] != i {
            let r = find(o, o[i]);
            o[i] = r;
        }
        o[i]
    }
    for el in g.elements() {
        for (j, &pj) in el.perm().iter().enumerate() {
            let (a, b) = (find(&mut orbit, j), find(&mut orbit, pj));
            orbit[a] = b;
        }
    }
    let b = basis(rng);
    let w0 = center_weights(rng, b.len(), n, false);
    let w = (0..b.len())
        .map(|i| (0..n).map(|j| w0[i][find(&mut orbit, j)].clone()).collect())
        .collect();
    MonomialValuation::new(n, b, w, None).unwrap()
}

/// Exact check `S * v = 0`.
pub fn in_kernel(s: &[Vec<BigRational>], v: &[BigInt]) -> bool {
    s.iter().all(|row| {
        row.iter()
            .zip(v)
            .fold(BigRational::zero(), |acc, (a, x)| {
                acc + a * BigRational::from_integer(x.clone())
            })
            .is_zero()
    })
}

/// Every integer vector of `[-r, r]^n`.
pub fn box_vectors(n: usize, r: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<BigInt>| {
                (-r..=r).map(move |x| {
                    let mut p = p.clone();
                    p.push(x.into());
                    p
                })
            })
            .collect();
    }
    out
}

/// Rank over Q by fraction-free elimination, independent of the library.
pub fn oracle_rank(s: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = s.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn abs_max(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

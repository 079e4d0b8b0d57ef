//! Finite groups acting by scaled permutations of the coordinates,
//! `sigma(X_j) = c_j X_{pi(j)}`, and their interaction with a monomial
//! valuation: invariance, Reynolds averaging, the induced action on the
//! residue field, and certification of invariant residues.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::polyring::{Exponent, Poly, RatFn};
use crate::residue::{LaurentPoly, ResidueElement, ResidueFieldDesc};
use crate::valuation::MonomialValuation;

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

/// `sigma(X_j) = scalars[j] * X_{perm[j]}` (zero-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    perm: Vec<usize>,
    scalars: Vec<BigRational>,
}

impl GroupElement {
    pub fn new(perm: Vec<usize>, scalars: Vec<BigRational>) -> Result<Self> {
        let n = perm.len();
        if scalars.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: scalars.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::MalformedPermutation(format!("{:?}", perm)));
            }
            seen[p] = true;
        }
        if scalars.iter().any(Zero::is_zero) {
            return Err(Error::ZeroScalar);
        }
        Ok(GroupElement { perm, scalars })
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            perm: (0..n).collect(),
            scalars: vec![BigRational::one(); n],
        }
    }

    /// A pure permutation.
    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, vec![BigRational::one(); n])
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn scalars(&self) -> &[BigRational] {
        &self.scalars
    }

    pub fn nvars(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.nvars())
    }

    /// `self ∘ other`: first `other`, then `self`, as substitutions.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let scalars = other
            .perm
            .iter()
            .zip(&other.scalars)
            .map(|(&j, c)| c * &self.scalars[j])
            .collect();
        GroupElement { perm, scalars }
    }

    pub fn inverse(&self) -> GroupElement {
        let n = self.nvars();
        let mut perm = vec![0; n];
        let mut scalars = vec![BigRational::one(); n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            scalars[self.perm[j]] = self.scalars[j].recip();
        }
        GroupElement { perm, scalars }
    }

    fn images(&self) -> Vec<Poly> {
        let n = self.nvars();
        (0..n)
            .map(|j| Poly::var(n, self.perm[j]).scale(&self.scalars[j]))
            .collect()
    }

    /// `sigma(X^e) = (prod c_j^{e_j}) X^{pi.e}` for integer `e`.
    pub fn act_on_exponent(&self, e: &[BigInt]) -> (Vec<BigInt>, BigRational) {
        let mut image = vec![BigInt::zero(); e.len()];
        let mut coeff = BigRational::one();
        for (j, k) in e.iter().enumerate() {
            image[self.perm[j]] = k.clone();
            coeff *= rational_pow(&self.scalars[j], k);
        }
        (image, coeff)
    }

    fn fixes_point(&self, a: &[BigRational]) -> bool {
        (0..self.nvars()).all(|j| &self.scalars[j] * &a[self.perm[j]] == a[j])
    }
}

fn rational_pow(c: &BigRational, k: &BigInt) -> BigRational {
    let k = k.to_i32().expect("exponent fits in i32");
    Pow::pow(c, k)
}

/// Things a [`GroupElement`] acts on by substitution.
pub trait Actable: Clone {
    fn act_by(&self, g: &GroupElement) -> Self;
    /// `c * (items[0] + ... )`.
    fn scaled_sum(items: &[Self], c: &BigRational) -> Self;
}

impl Actable for Poly {
    fn act_by(&self, g: &GroupElement) -> Self {
        self.substitute(&g.images())
            .expect("element acts on the same ring")
    }

    fn scaled_sum(items: &[Self], c: &BigRational) -> Self {
        let n = items[0].nvars();
        items.iter().fold(Poly::zero(n), |acc, p| &acc + p).scale(c)
    }
}

impl Actable for RatFn {
    fn act_by(&self, g: &GroupElement) -> Self {
        self.substitute(&g.images())
            .expect("element acts on the same ring")
    }

    fn scaled_sum(items: &[Self], c: &BigRational) -> Self {
        let n = items[0].nvars();
        items
            .iter()
            .fold(RatFn::from_poly(Poly::zero(n)), |acc, f| {
                acc.checked_add(f).expect("same ring")
            })
            .scale(c)
    }
}

/// A finite group of scaled permutations, stored as its full element list
/// (identity first, then breadth-first discovery order).
#[derive(Clone, Debug)]
pub struct MonomialAction {
    nvars: usize,
    elements: Vec<GroupElement>,
}

impl MonomialAction {
    pub fn new(nvars: usize, generators: Vec<GroupElement>) -> Result<Self> {
        Self::with_bound(nvars, generators, DEFAULT_CLOSURE_BOUND)
    }

    pub fn trivial(nvars: usize) -> Self {
        MonomialAction {
            nvars,
            elements: vec![GroupElement::identity(nvars)],
        }
    }

    /// Computes the closure, failing once more than `bound` elements appear.
    pub fn with_bound(nvars: usize, generators: Vec<GroupElement>, bound: usize) -> Result<Self> {
        for g in &generators {
            if g.nvars() != nvars {
                return Err(Error::MalformedPermutation(format!(
                    "expected a permutation of {} variables, got {:?}",
                    nvars, g.perm
                )));
            }
        }
        let id = GroupElement::identity(nvars);
        let mut seen: HashSet<GroupElement> = HashSet::from([id.clone()]);
        let mut elements = vec![id];
        let mut next = 0;
        while next < elements.len() {
            let current = elements[next].clone();
            next += 1;
            for g in &generators {
                let candidate = g.compose(&current);
                if seen.insert(candidate.clone()) {
                    elements.push(candidate);
                    if elements.len() > bound {
                        return Err(Error::InfiniteGroup(bound));
                    }
                }
            }
        }
        Ok(MonomialAction { nvars, elements })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|e| e == g)
    }

    /// `(1/|G|) sum_sigma sigma(f)`.
    pub fn reynolds<T: Actable>(&self, f: &T) -> T {
        let images: Vec<T> = self.elements.iter().map(|g| f.act_by(g)).collect();
        let scale = BigRational::new(BigInt::one(), BigInt::from(self.order()));
        T::scaled_sum(&images, &scale)
    }

    pub fn is_invariant_function(&self, f: &RatFn) -> bool {
        self.elements.iter().all(|g| f.act_by(g) == *f)
    }

    /// Whether every element preserves the valuation. Elements must fix the
    /// shift point, so that they act monomially on the local coordinates;
    /// then it suffices to compare `|sigma(X_j - a_j)|` with `|X_j - a_j|`.
    pub fn is_invariant_valuation(&self, v: &MonomialValuation) -> bool {
        if v.nvars() != self.nvars {
            return false;
        }
        self.elements.iter().all(|g| {
            v.shift().is_none_or(|a| g.fixes_point(a))
                && (0..self.nvars).all(|j| v.var_value(g.perm[j]) == v.var_value(j))
        })
    }

    /// Reynolds images of all monomials of degree `1..=d`, with zero and
    /// linearly dependent images removed, each scaled to leading
    /// coefficient one.
    pub fn invariant_gens_up_to_degree(&self, d: u32) -> Vec<Poly> {
        let n = self.nvars;
        let mut echelon: BTreeMap<Exponent, Poly> = BTreeMap::new();
        let mut out = Vec::new();
        for deg in 1..=d {
            for e in monomials_of_degree(n, deg) {
                let image = self.reynolds(&Poly::monomial(n, e, BigRational::one()));
                if image.is_zero() {
                    continue;
                }
                let mut reduced = image.clone();
                while let Some((lead, c)) = leading_term(&reduced) {
                    match echelon.get(&lead) {
                        Some(pivot) => reduced = &reduced - &pivot.scale(&c),
                        None => break,
                    }
                }
                if reduced.is_zero() {
                    continue;
                }
                let lead = reduced.terms().next_back().unwrap().0.clone();
                let lc = reduced.leading_coefficient().unwrap().recip();
                echelon.insert(lead, reduced.scale(&lc));
                let lc = image.leading_coefficient().unwrap().recip();
                out.push(image.scale(&lc));
            }
        }
        out
    }

    /// The action on `Y_i = [X^{B_i}]`, for an invariant valuation.
    pub fn induced_residue_action(
        &self,
        v: &MonomialValuation,
        desc: &ResidueFieldDesc,
    ) -> Result<InducedResidueAction> {
        if !self.is_invariant_valuation(v) {
            return Err(Error::NotInvariant);
        }
        let k = desc.trdeg();
        let mut maps = Vec::with_capacity(self.order());
        for g in &self.elements {
            let mut columns = Vec::with_capacity(k);
            let mut scalars = Vec::with_capacity(k);
            for b in desc.kernel().vectors() {
                let (image, coeff) = g.act_on_exponent(b);
                let coords = desc.kernel().coords(&image).ok_or_else(|| {
                    Error::Internal("group image of a kernel vector left the kernel".into())
                })?;
                columns.push(coords);
                scalars.push(coeff);
            }
            let mut m = vec![vec![BigInt::zero(); k]; k];
            for (i, col) in columns.iter().enumerate() {
                for (r, x) in col.iter().enumerate() {
                    m[r][i] = x.clone();
                }
            }
            maps.push(ResidueMap {
                matrix: IntMatrix::from_rows(k, m),
                scalars,
            });
        }
        Ok(InducedResidueAction { maps })
    }

    /// `residue(sigma f) = sigma(residue f)` for every element.
    pub fn equivariance_check(
        &self,
        v: &MonomialValuation,
        desc: &ResidueFieldDesc,
        induced: &InducedResidueAction,
        f: &RatFn,
    ) -> Result<bool> {
        if !self.is_invariant_valuation(v) {
            return Err(Error::NotInvariant);
        }
        let r = desc.residue_of(f)?;
        for (g, map) in self.elements.iter().zip(induced.maps()) {
            let lhs = desc.residue_of(&f.act_by(g))?;
            if !lhs.residue_eq(&map.apply(&r)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Residues of invariant functions, each checked to be fixed by the
    /// induced action.
    pub fn quotient_residue_report(
        &self,
        v: &MonomialValuation,
        desc: &ResidueFieldDesc,
        invariants: &[RatFn],
    ) -> Result<QuotientReport> {
        let induced = self.induced_residue_action(v, desc)?;
        let one = v.one();
        let mut entries = Vec::with_capacity(invariants.len());
        for f in invariants {
            if !self.is_invariant_function(f) {
                return Err(Error::NotInvariantFunction);
            }
            if v.value_of_ratfn(f)? > one {
                return Err(Error::ValueExceedsOne);
            }
            let residue = desc.residue_of(f)?;
            let fixed = induced
                .maps()
                .iter()
                .all(|m| m.apply(&residue).residue_eq(&residue));
            entries.push(QuotientEntry {
                input: f.clone(),
                residue,
                fixed,
            });
        }
        Ok(QuotientReport { entries })
    }
}

fn leading_term(p: &Poly) -> Option<(Exponent, BigRational)> {
    p.terms().next_back().map(|(e, c)| (e.clone(), c.clone()))
}

/// Exponent vectors of total degree `d` in `n` variables, lexicographically
/// descending.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponent> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() == n - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `sigma(Y_i) = scalars[i] * Y^{M e_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueMap {
    pub matrix: IntMatrix,
    pub scalars: Vec<BigRational>,
}

impl ResidueMap {
    fn apply_laurent(&self, p: &LaurentPoly) -> LaurentPoly {
        let k = self.matrix.rows();
        p.map_monomials(|c| {
            let mut image = vec![0i64; k];
            let mut coeff = BigRational::one();
            for (i, &ci) in c.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (r, x) in image.iter_mut().enumerate() {
                    *x += ci * self.matrix.get(r, i).to_i64().expect("small matrix");
                }
                coeff *= rational_pow(&self.scalars[i], &BigInt::from(ci));
            }
            (image, coeff)
        })
    }

    pub fn apply(&self, e: &ResidueElement) -> ResidueElement {
        ResidueElement::new(self.apply_laurent(e.num()), self.apply_laurent(e.den()))
            .expect("automorphism keeps the denominator nonzero")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedResidueAction {
    maps: Vec<ResidueMap>,
}

impl InducedResidueAction {
    /// One map per group element, in the group's element order.
    pub fn maps(&self) -> &[ResidueMap] {
        &self.maps
    }
}

#[derive(Clone, Debug)]
pub struct QuotientEntry {
    pub input: RatFn,
    pub residue: ResidueElement,
    pub fixed: bool,
}

#[derive(Clone, Debug)]
pub struct QuotientReport {
    pub entries: Vec<QuotientEntry>,
}

impl QuotientReport {
    pub fn all_fixed(&self) -> bool {
        self.entries.iter().all(|e| e.fixed)
    }
}

fn invert_y(p: &LaurentPoly) -> LaurentPoly {
    p.map_monomials(|e| (e.iter().map(|x| -x).collect(), BigRational::one()))
}

/// `(Y + 1/Y)^m` as a Laurent polynomial in one variable.
fn trace_power(m: u32) -> LaurentPoly {
    let t = LaurentPoly::from_terms(1, [(vec![1], BigRational::one()), (vec![-1], BigRational::one())]);
    t.pow(m)
}

/// Writes a Laurent polynomial fixed by `Y -> 1/Y` as a polynomial in
/// `t = Y + 1/Y` by peeling off the top degree.
fn symmetric_to_trace(p: &LaurentPoly) -> Result<Poly> {
    let mut rest = p.clone();
    let mut out = Poly::zero(1);
    loop {
        let Some((e, c)) = rest.terms().next_back().map(|(e, c)| (e[0], c.clone())) else {
            break;
        };
        if e < 0 {
            return Err(Error::NotSymmetric);
        }
        let m = e as u32;
        out = &out + &Poly::monomial(1, vec![m], c.clone());
        rest = &rest - &trace_power(m).scale(&c);
    }
    Ok(out)
}

/// Expresses an element of `k(Y1)` fixed by `Y1 -> 1/Y1` as `P(t)/Q(t)`
/// with `t = Y1 + 1/Y1`. Both polynomials are returned in one variable.
pub fn rewrite_in_trace(e: &ResidueElement) -> Result<(Poly, Poly)> {
    if e.nvars() != 1 {
        return Err(Error::NotRankOne(e.nvars()));
    }
    let inverted = ResidueElement::new(invert_y(e.num()), invert_y(e.den()))?;
    if !inverted.residue_eq(e) {
        return Err(Error::NotSymmetric);
    }
    let conj = invert_y(e.den());
    let num = e.num() * &conj;
    let den = e.den() * &conj;
    Ok((symmetric_to_trace(&num)?, symmetric_to_trace(&den)?))
}

/// Substitutes `t = Y1 + 1/Y1` into `P/Q`.
pub fn evaluate_trace_quotient(p: &Poly, q: &Poly) -> Result<ResidueElement> {
    let eval = |f: &Poly| -> LaurentPoly {
        f.terms().fold(LaurentPoly::zero(1), |acc, (e, c)| {
            &acc + &trace_power(e[0]).scale(c)
        })
    };
    ResidueElement::new(eval(p), eval(q))
}

//! The residue field of a monomial valuation and the reduction map.
//!
//! The exponent vectors `I` with `|X^I| = 1` form a saturated lattice of
//! rank `n - r`. With `B_1..B_{n-r}` its canonical basis, the residue field
//! is the rational function field `k(Y_1..Y_{n-r})` where `Y_i` is the
//! class of `X^{B_i}`. A function of value one reduces by keeping the top
//! forms of numerator and denominator and dividing both by a common
//! monomial `X^{I0}` taken from the denominator; every remaining exponent
//! difference then lies in the kernel lattice.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, LatticeBasis};
use crate::polyring::{fmt_coefficient, wrap, Poly, RatFn};
use crate::valuation::MonomialValuation;

/// A Laurent polynomial in `Y_1..Y_k` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn monomial(exponent: Vec<i64>, c: BigRational) -> Self {
        let nvars = exponent.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// `Y_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigRational)>) -> Self {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[i64]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        LaurentPoly::from_terms(self.nvars, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(LaurentPoly::one(self.nvars), |acc, _| &acc * self)
    }

    /// Applies `Y^c -> coeff(c) * Y^{f(c)}` termwise; the caller guarantees
    /// the substitution is a ring homomorphism.
    pub fn map_monomials(&self, f: impl Fn(&[i64]) -> (Vec<i64>, BigRational)) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let (e2, s) = f(e);
            out.add_term(e2, c * s);
        }
        out
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        out
    }
}

fn fmt_laurent(p: &LaurentPoly, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (i, (e, c)) in p.terms.iter().rev().enumerate() {
        let negative = c.is_negative();
        let mag = c.abs();
        match (i, negative) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let factors: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(j, &k)| match k {
                1 => names[j].clone(),
                k if k < 0 => format!("{}^({})", names[j], k),
                k => format!("{}^{}", names[j], k),
            })
            .collect();
        if factors.is_empty() {
            f.write_str(&fmt_coefficient(&mag))?;
        } else {
            if !mag.is_one() {
                write!(f, "{}*", fmt_coefficient(&mag))?;
            }
            f.write_str(&factors.join("*"))?;
        }
    }
    Ok(())
}

/// Names `Y1..Yk`.
pub fn residue_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("Y{}", i)).collect()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_laurent(self, &residue_names(self.nvars), f)
    }
}

/// An element of `k(Y_1..Y_k)` as a quotient of Laurent polynomials.
#[derive(Clone, Debug)]
pub struct ResidueElement {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl ResidueElement {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        assert_eq!(num.nvars, den.nvars);
        if num.is_zero() {
            let k = num.nvars;
            return Ok(Self::zero(k));
        }
        // a monomial denominator is absorbed into the numerator
        if den.num_terms() == 1 {
            let (e, c) = den.terms.iter().next().unwrap();
            let inv_e: Vec<i64> = e.iter().map(|x| -x).collect();
            let inv = LaurentPoly::monomial(inv_e, c.recip());
            let k = num.nvars;
            return Ok(ResidueElement {
                num: &num * &inv,
                den: LaurentPoly::one(k),
            });
        }
        Ok(ResidueElement { num, den })
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        let k = p.nvars;
        ResidueElement {
            num: p,
            den: LaurentPoly::one(k),
        }
    }

    pub fn zero(k: usize) -> Self {
        Self::from_laurent(LaurentPoly::zero(k))
    }

    pub fn one(k: usize) -> Self {
        Self::from_laurent(LaurentPoly::one(k))
    }

    pub fn generator(k: usize, i: usize) -> Self {
        Self::from_laurent(LaurentPoly::var(k, i))
    }

    pub fn constant(k: usize, c: BigRational) -> Self {
        Self::from_laurent(LaurentPoly::constant(k, c))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality in `k(Y)`. Laurent polynomial rings are domains, so
    /// cross-multiplication decides it without clearing monomials.
    pub fn residue_eq(&self, other: &ResidueElement) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn add(&self, other: &ResidueElement) -> ResidueElement {
        if self.den == other.den {
            return ResidueElement::new(&self.num + &other.num, self.den.clone()).expect("den nonzero");
        }
        ResidueElement::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .expect("den nonzero")
    }

    pub fn sub(&self, other: &ResidueElement) -> ResidueElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ResidueElement {
        ResidueElement {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &ResidueElement) -> ResidueElement {
        ResidueElement::new(&self.num * &other.num, &self.den * &other.den).expect("den nonzero")
    }

    pub fn div(&self, other: &ResidueElement) -> Result<ResidueElement> {
        ResidueElement::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn inv(&self) -> Result<ResidueElement> {
        ResidueElement::new(self.den.clone(), self.num.clone())
    }
}

impl PartialEq for ResidueElement {
    fn eq(&self, other: &Self) -> bool {
        self.nvars() == other.nvars() && self.residue_eq(other)
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = residue_names(self.nvars());
        if self.den == LaurentPoly::one(self.nvars()) {
            return fmt_laurent(&self.num, &names, f);
        }
        let num = LaurentText(&self.num, &names).to_string();
        let den = LaurentText(&self.den, &names).to_string();
        write!(
            f,
            "{} / {}",
            wrap(&num, self.num.num_terms() > 1),
            wrap(&den, self.den.num_terms() > 1 || den.contains(['-', '*']))
        )
    }
}

struct LaurentText<'a>(&'a LaurentPoly, &'a [String]);

impl fmt::Display for LaurentText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_laurent(self.0, self.1, f)
    }
}

/// Presentation of the residue field as `k(Y_1..Y_k)`, `Y_i = [X^{B_i}]`.
#[derive(Clone, Debug)]
pub struct ResidueFieldDesc {
    valuation: MonomialValuation,
    kernel: LatticeBasis,
}

impl ResidueFieldDesc {
    pub fn new(v: &MonomialValuation) -> Self {
        ResidueFieldDesc {
            kernel: lattice::kernel_basis(v.weights(), v.nvars()),
            valuation: v.clone(),
        }
    }

    pub fn valuation(&self) -> &MonomialValuation {
        &self.valuation
    }

    pub fn kernel(&self) -> &LatticeBasis {
        &self.kernel
    }

    /// Transcendence degree `n - r` over `k`.
    pub fn trdeg(&self) -> usize {
        self.kernel.rank()
    }

    /// `X^{B_i}` in local coordinates, as a quotient of monomials.
    pub fn generator_monomial(&self, i: usize) -> RatFn {
        laurent_monomial_ratfn(self.valuation.nvars(), &self.kernel.vectors()[i])
    }

    /// Residue of a function of value at most one.
    pub fn residue_of(&self, f: &RatFn) -> Result<ResidueElement> {
        self.residue_with(f, None)
    }

    /// Like [`Self::residue_of`] with an explicit anchor exponent `I0`,
    /// which must be a top exponent of the (local) denominator.
    pub fn residue_of_anchored(&self, f: &RatFn, anchor: &[u32]) -> Result<ResidueElement> {
        self.residue_with(f, Some(anchor))
    }

    fn residue_with(&self, f: &RatFn, anchor: Option<&[u32]>) -> Result<ResidueElement> {
        let v = &self.valuation;
        let k = self.trdeg();
        let g = v.to_local(f.num())?;
        let h = v.to_local(f.den())?;
        if g.is_zero() {
            return Ok(ResidueElement::zero(k));
        }
        match v.value_of_local(&g).compare(&v.value_of_local(&h))? {
            std::cmp::Ordering::Greater => return Err(Error::ValueExceedsOne),
            std::cmp::Ordering::Less => return Ok(ResidueElement::zero(k)),
            std::cmp::Ordering::Equal => {}
        }
        let g_top = v.top_form_of_local(&g)?;
        let h_top = v.top_form_of_local(&h)?;
        let i0: Vec<u32> = match anchor {
            None => h_top.terms().next().expect("nonzero").0.clone(),
            Some(a) => {
                if h_top.coefficient(a).is_zero() {
                    return Err(Error::BadAnchor);
                }
                a.to_vec()
            }
        };
        let num = self.reduce_top_form(&g_top, &i0)?;
        let den = self.reduce_top_form(&h_top, &i0)?;
        ResidueElement::new(num, den)
    }

    /// `sum a_I Y^{coords(I - I0)}`.
    fn reduce_top_form(&self, top: &Poly, i0: &[u32]) -> Result<LaurentPoly> {
        let mut out = Vec::with_capacity(top.num_terms());
        for (e, c) in top.terms() {
            let diff: Vec<BigInt> = e
                .iter()
                .zip(i0)
                .map(|(&a, &b)| BigInt::from(a) - BigInt::from(b))
                .collect();
            let coords = self.kernel.coords(&diff).ok_or_else(|| {
                Error::Internal(format!(
                    "exponent difference {:?} is not in the kernel lattice",
                    diff
                ))
            })?;
            let coords = coords
                .iter()
                .map(|x| {
                    x.to_i64()
                        .ok_or_else(|| Error::Internal("coordinate overflow".into()))
                })
                .collect::<Result<Vec<i64>>>()?;
            out.push((coords, c.clone()));
        }
        Ok(LaurentPoly::from_terms(self.trdeg(), out))
    }

    /// A function of value one (or zero) whose residue is `e`: substitutes
    /// `Y_i = X^{B_i}` and returns to the original coordinates.
    pub fn lift(&self, e: &ResidueElement) -> RatFn {
        let num = self.lift_laurent(e.num());
        let den = self.lift_laurent(e.den());
        let local = num
            .checked_div(&den)
            .expect("lift of a nonzero denominator is nonzero");
        self.valuation.from_local_ratfn(&local).expect("nvars agree")
    }

    fn lift_laurent(&self, p: &LaurentPoly) -> RatFn {
        let n = self.valuation.nvars();
        let exps: Vec<(Vec<BigInt>, BigRational)> = p
            .terms()
            .map(|(c, a)| {
                let coeffs: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
                (self.kernel.combination(&coeffs), a.clone())
            })
            .collect();
        let mut shift = vec![BigInt::zero(); n];
        for (e, _) in &exps {
            for (s, x) in shift.iter_mut().zip(e) {
                if x < s {
                    *s = x.clone();
                }
            }
        }
        let to_u32 = |x: BigInt| x.to_u32().expect("exponent fits in u32");
        let num = Poly::from_terms(
            n,
            exps.into_iter().map(|(e, a)| {
                let shifted = e.iter().zip(&shift).map(|(x, s)| to_u32(x - s)).collect();
                (shifted, a)
            }),
        );
        let den_exp: Vec<u32> = shift.iter().map(|s| to_u32(-s)).collect();
        RatFn::new(num, Poly::monomial(n, den_exp, BigRational::one())).expect("monomial denominator")
    }

    /// Rational rank, transcendence degree and their sum against `n`.
    pub fn abhyankar_check(&self) -> AbhyankarReport {
        let rational_rank = self.valuation.rational_rank();
        let trdeg = self.trdeg();
        let nvars = self.valuation.nvars();
        AbhyankarReport {
            rational_rank,
            trdeg,
            nvars,
            equality: rational_rank + trdeg == nvars,
        }
    }
}

/// `X^v` for an integer vector `v`, as `X^{v+} / X^{v-}`.
pub fn laurent_monomial_ratfn(n: usize, v: &[BigInt]) -> RatFn {
    let (pos, neg) = split_signed(v);
    RatFn::new(
        Poly::monomial(n, pos, BigRational::one()),
        Poly::monomial(n, neg, BigRational::one()),
    )
    .expect("monomial denominator")
}

/// Positive and negative parts of an integer vector.
pub fn split_signed(v: &[BigInt]) -> (Vec<u32>, Vec<u32>) {
    let pos = v
        .iter()
        .map(|x| {
            if x.is_positive() {
                x.to_u32().expect("fits u32")
            } else {
                0
            }
        })
        .collect();
    let neg = v
        .iter()
        .map(|x| {
            if x.is_negative() {
                (-x).to_u32().expect("fits u32")
            } else {
                0
            }
        })
        .collect();
    (pos, neg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbhyankarReport {
    pub rational_rank: usize,
    pub trdeg: usize,
    pub nvars: usize,
    pub equality: bool,
}

pub fn residue_field_desc(v: &MonomialValuation) -> ResidueFieldDesc {
    ResidueFieldDesc::new(v)
}

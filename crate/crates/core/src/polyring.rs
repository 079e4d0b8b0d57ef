//! Sparse multivariate polynomials and rational functions over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` variables. Terms are keyed by exponent vector and
/// iterate in ascending lexicographic order; zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(c.into()))
    }

    /// The variable `X_j` (zero-based).
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(nvars, e, BigRational::one())
    }

    pub fn monomial(nvars: usize, exponent: Exponent, c: BigRational) -> Self {
        assert_eq!(exponent.len(), nvars, "exponent length must equal nvars");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from arbitrary terms, merging repeated exponents.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigRational)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must equal nvars");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    /// The constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree; zero for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::NvarsMismatch(self.nvars, other.nvars))
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitutes `X_j -> images[j]` everywhere.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target = images.first().map_or(self.nvars, Poly::nvars);
        for img in images {
            if img.nvars != target {
                return Err(Error::NvarsMismatch(target, img.nvars));
            }
        }
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = &term * &img.pow(k);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Returns `g` with `g(T) = f(T + a)`, i.e. `f` rewritten in the
    /// coordinates `X_j - a_j`.
    pub fn shift_coordinates(&self, a: &[BigRational]) -> Result<Poly> {
        if a.len() != self.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                found: a.len(),
            });
        }
        let images: Vec<Poly> = a
            .iter()
            .enumerate()
            .map(|(j, aj)| &Poly::var(self.nvars, j) + &Poly::constant(self.nvars, aj.clone()))
            .collect();
        self.substitute(&images)
    }

    /// Componentwise minimum of the exponents of all terms.
    pub fn min_exponent(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()
        }))
    }

    /// Divides every exponent by the monomial `X^e`; caller guarantees
    /// divisibility.
    pub fn divide_monomial(&self, e: &[u32]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.iter().zip(e).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of the lexicographically largest term.
    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.terms.values().next_back()
    }

    /// Renders with the given variable names in descending lexicographic
    /// order, in a form accepted by the expression parser.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("nvars mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("nvars mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("nvars mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-BigRational::one())
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

pub(crate) fn fmt_coefficient(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c < &BigRational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        self.names[j].clone()
                    } else {
                        format!("{}^{}", self.names[j], k)
                    }
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
}

/// Default variable names `x1..xn`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{}", i)).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        write!(f, "{}", self.display_with(&names))
    }
}

/// A quotient of polynomials. Not reduced to lowest terms; equality is
/// decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.check(&den)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RatFn { num, den }.normalized())
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars;
        RatFn {
            num: p,
            den: Poly::one(n),
        }
    }

    /// Cancels the common monomial content and makes a constant
    /// denominator equal to one.
    fn normalized(self) -> Self {
        let RatFn { mut num, mut den } = self;
        if num.is_zero() {
            return RatFn {
                den: Poly::one(num.nvars),
                num,
            };
        }
        if let (Some(a), Some(b)) = (num.min_exponent(), den.min_exponent()) {
            let common: Exponent = a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect();
            if common.iter().any(|&k| k > 0) {
                num = num.divide_monomial(&common);
                den = den.divide_monomial(&common);
            }
        }
        if let Some(c) = den.as_constant() {
            if !c.is_one() {
                let inv = c.recip();
                num = num.scale(&inv);
                den = Poly::one(den.nvars);
            }
        }
        RatFn { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Equality by cross-multiplication.
    pub fn ratfn_eq(&self, other: &RatFn) -> Result<bool> {
        self.num.check(&other.num)?;
        Ok(&self.num * &other.den == &other.num * &self.den)
    }

    pub fn checked_add(&self, other: &RatFn) -> Result<RatFn> {
        self.num.check(&other.num)?;
        if self.den == other.den {
            return RatFn::new(&self.num + &other.num, self.den.clone());
        }
        RatFn::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn checked_sub(&self, other: &RatFn) -> Result<RatFn> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &RatFn) -> Result<RatFn> {
        self.num.check(&other.num)?;
        RatFn::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn checked_div(&self, other: &RatFn) -> Result<RatFn> {
        self.num.check(&other.num)?;
        RatFn::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> RatFn {
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalized()
    }

    /// Applies `Poly::substitute` to numerator and denominator.
    pub fn substitute(&self, images: &[Poly]) -> Result<RatFn> {
        RatFn::new(self.num.substitute(images)?, self.den.substitute(images)?)
    }

    pub fn shift_coordinates(&self, a: &[BigRational]) -> Result<RatFn> {
        RatFn::new(self.num.shift_coordinates(a)?, self.den.shift_coordinates(a)?)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> RatFnDisplay<'a> {
        RatFnDisplay { f: self, names }
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        self.ratfn_eq(other).unwrap_or(false)
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

pub struct RatFnDisplay<'a> {
    f: &'a RatFn,
    names: &'a [String],
}

impl fmt::Display for RatFnDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.den.is_one() {
            return write!(f, "{}", self.f.num.display_with(self.names));
        }
        let num = self.f.num.display_with(self.names).to_string();
        let den = self.f.den.display_with(self.names).to_string();
        write!(
            f,
            "{} / {}",
            wrap(&num, self.f.num.num_terms() > 1),
            wrap(&den, self.f.den.num_terms() > 1 || den.contains(['-', '*']))
        )
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars());
        write!(f, "{}", self.display_with(&names))
    }
}

pub(crate) fn wrap(s: &str, parens: bool) -> String {
    if parens {
        format!("({})", s)
    } else {
        s.to_string()
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

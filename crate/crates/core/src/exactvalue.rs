//! Exact positive reals of the form `p1^q1 * ... * pm^qm` with rational
//! exponents over a fixed basis of primes, plus a bottom element for `|0|`.
//!
//! Prime logarithms are linearly independent over the rationals, so two
//! values are equal exactly when their exponent vectors agree, and every
//! order comparison reduces to comparing two integers.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Miller-Rabin with the first thirteen prime bases is deterministic below
/// this bound.
const MR_DETERMINISTIC_BOUND: &str = "3317044064679887385961981";
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Certified primality test for integers below [`MR_DETERMINISTIC_BOUND`].
pub fn is_prime(n: &BigInt) -> Result<bool> {
    let two = BigInt::from(2);
    if n < &two {
        return Ok(false);
    }
    for &b in &MR_BASES {
        let b = BigInt::from(b);
        if n == &b {
            return Ok(true);
        }
        if (n % &b).is_zero() {
            return Ok(false);
        }
    }
    let bound: BigInt = MR_DETERMINISTIC_BOUND.parse().expect("constant parses");
    if n >= &bound {
        return Err(Error::PrimeTooLarge(n.clone()));
    }
    let n_minus_one = n - 1u32;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// An ascending list of distinct certified primes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeBasis {
    primes: Vec<BigInt>,
}

impl PrimeBasis {
    pub fn new(primes: Vec<BigInt>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::EmptyBasis);
        }
        for (i, w) in primes.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::BasisNotIncreasing(i + 1));
            }
        }
        for p in &primes {
            if !is_prime(p)? {
                return Err(Error::NotPrime(p.clone()));
            }
        }
        Ok(PrimeBasis { primes })
    }

    pub fn from_u64s(primes: &[u64]) -> Result<Self> {
        Self::new(primes.iter().map(|&p| BigInt::from(p)).collect())
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// A valuation value: either `Zero` or `prod p_i^{q_i}`.
#[derive(Clone, Debug)]
pub struct Value {
    basis: Arc<PrimeBasis>,
    exponents: Option<Vec<BigRational>>,
}

impl Value {
    /// The value `prod p_i^{q_i}`; all-zero exponents give One.
    pub fn new(basis: &Arc<PrimeBasis>, exponents: Vec<BigRational>) -> Result<Self> {
        if exponents.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                found: exponents.len(),
            });
        }
        Ok(Value {
            basis: Arc::clone(basis),
            exponents: Some(exponents),
        })
    }

    pub fn zero(basis: &Arc<PrimeBasis>) -> Self {
        Value {
            basis: Arc::clone(basis),
            exponents: None,
        }
    }

    pub fn one(basis: &Arc<PrimeBasis>) -> Self {
        Value {
            basis: Arc::clone(basis),
            exponents: Some(vec![BigRational::zero(); basis.len()]),
        }
    }

    pub fn basis(&self) -> &Arc<PrimeBasis> {
        &self.basis
    }

    /// Exponent vector, `None` for Zero.
    pub fn exponents(&self) -> Option<&[BigRational]> {
        self.exponents.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_none()
    }

    pub fn is_one(&self) -> bool {
        self.exponents
            .as_ref()
            .is_some_and(|e| e.iter().all(Zero::is_zero))
    }

    fn check_basis(&self, other: &Value) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn mul(&self, other: &Value) -> Result<Value> {
        self.check_basis(other)?;
        let exponents = match (&self.exponents, &other.exponents) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            _ => None,
        };
        Ok(Value {
            basis: Arc::clone(&self.basis),
            exponents,
        })
    }

    /// `self / other`; dividing by Zero is an error.
    pub fn div(&self, other: &Value) -> Result<Value> {
        self.mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Value> {
        self.pow(&-BigRational::one())
    }

    pub fn pow(&self, q: &BigRational) -> Result<Value> {
        match &self.exponents {
            None if q.is_positive() => Ok(self.clone()),
            None => Err(Error::ZeroPower),
            Some(e) => Ok(Value {
                basis: Arc::clone(&self.basis),
                exponents: Some(e.iter().map(|x| x * q).collect()),
            }),
        }
    }

    /// Exact comparison of the underlying reals.
    pub fn compare(&self, other: &Value) -> Result<Ordering> {
        self.check_basis(other)?;
        Ok(match (&self.exponents, &other.exponents) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => {
                let diff: Vec<BigRational> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                sign_of_log(self.basis.primes(), &diff)
            }
        })
    }

    /// The value as a rational number when every exponent is an integer.
    pub fn as_rational(&self) -> Option<BigRational> {
        let exps = match &self.exponents {
            None => return Some(BigRational::zero()),
            Some(e) => e,
        };
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in self.basis.primes().iter().zip(exps) {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer();
            let k_abs = k.abs().to_u32()?;
            if k.is_positive() {
                num *= p.pow(k_abs);
            } else {
                den *= p.pow(k_abs);
            }
        }
        Some(BigRational::new(num, den))
    }

    /// Decimal approximation with exactly `digits` significant digits,
    /// rounded half up.
    pub fn approx(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let exps = match &self.exponents {
            None => return "0".to_string(),
            Some(e) => e,
        };
        let root = RootForm::new(self.basis.primes(), exps);
        let mut e10 = root.decimal_exponent();
        let mut mantissa = root.rounded_digits(digits, e10);
        if mantissa.to_string().len() > digits {
            // rounding carried into a new decade
            e10 += 1;
            mantissa = root.rounded_digits(digits, e10);
        }
        place_decimal_point(&mantissa.to_string(), e10)
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.check_basis(other).is_ok() && self.exponents == other.exponents
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", q);
        }
        let exps = self.exponents.as_ref().expect("zero is rational");
        let mut first = true;
        for (p, e) in self.basis.primes().iter().zip(exps) {
            if e.is_zero() {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{}", p)?;
            } else {
                write!(f, "{}^({})", p, e)?;
            }
        }
        Ok(())
    }
}

fn lcm_of_denominators<'a>(qs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

fn exponent_u32(e: &BigInt) -> u32 {
    e.abs()
        .to_u32()
        .expect("exponent after clearing denominators exceeds u32")
}

/// Sign of `sum d_i log p_i`, decided by comparing `prod p^{L d_i}` over the
/// positive and negative parts with `L` the common denominator.
fn sign_of_log(primes: &[BigInt], diff: &[BigRational]) -> Ordering {
    if diff.iter().all(Zero::is_zero) {
        return Ordering::Equal;
    }
    // Floating estimate first; its error is far below this margin, so a
    // larger gap decides the sign. Otherwise fall back to integers.
    let mut estimate = 0.0;
    let mut magnitude = 0.0;
    for (p, d) in primes.iter().zip(diff) {
        let term = d.to_f64().unwrap_or(f64::NAN) * log10_big(p);
        estimate += term;
        magnitude += term.abs();
    }
    if estimate.is_finite() && magnitude.is_finite() && estimate.abs() > 1e-6 * magnitude {
        return if estimate > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        };
    }
    let l = lcm_of_denominators(diff);
    let mut lhs = BigInt::one();
    let mut rhs = BigInt::one();
    for (p, d) in primes.iter().zip(diff) {
        let e = (d * &l).to_integer();
        if e.is_positive() {
            lhs *= p.pow(exponent_u32(&e));
        } else if e.is_negative() {
            rhs *= p.pow(exponent_u32(&e));
        }
    }
    lhs.cmp(&rhs)
}

/// `v = (num/den)^(1/root)` with integers `num`, `den`.
struct RootForm {
    num: BigInt,
    den: BigInt,
    root: u32,
    log10_estimate: f64,
}

impl RootForm {
    fn new(primes: &[BigInt], exps: &[BigRational]) -> Self {
        let l = lcm_of_denominators(exps);
        let root = l.to_u32().expect("exponent denominator exceeds u32");
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let mut log10_estimate = 0.0;
        for (p, q) in primes.iter().zip(exps) {
            let e = (q * &l).to_integer();
            if e.is_positive() {
                num *= p.pow(exponent_u32(&e));
            } else if e.is_negative() {
                den *= p.pow(exponent_u32(&e));
            }
            log10_estimate += q.to_f64().unwrap_or(0.0) * log10_big(p);
        }
        RootForm {
            num,
            den,
            root,
            log10_estimate,
        }
    }

    /// Exact comparison of `v` with `10^e`.
    fn cmp_pow10(&self, e: i64) -> Ordering {
        let scale = BigInt::from(10).pow(exponent_u32(&BigInt::from(e * self.root as i64)));
        if e >= 0 {
            self.num.cmp(&(&self.den * scale))
        } else {
            (&self.num * scale).cmp(&self.den)
        }
    }

    /// The integer `E` with `10^E <= v < 10^(E+1)`.
    fn decimal_exponent(&self) -> i64 {
        let mut e = self.log10_estimate.floor() as i64;
        while self.cmp_pow10(e) == Ordering::Less {
            e -= 1;
        }
        while self.cmp_pow10(e + 1) != Ordering::Less {
            e += 1;
        }
        e
    }

    /// `floor(v * 10^k)`.
    fn floor_scaled(&self, k: i64) -> BigInt {
        let scale = BigInt::from(10).pow(exponent_u32(&BigInt::from(k * self.root as i64)));
        let radicand = if k >= 0 {
            (&self.num * scale) / &self.den
        } else {
            &self.num / (&self.den * scale)
        };
        radicand.nth_root(self.root)
    }

    /// `round(v * 10^(digits - 1 - e10))`, half up.
    fn rounded_digits(&self, digits: usize, e10: i64) -> BigInt {
        let k = digits as i64 - 1 - e10;
        (self.floor_scaled(k + 1) + 5u32) / 10u32
    }
}

fn log10_big(p: &BigInt) -> f64 {
    match p.to_f64() {
        Some(x) if x.is_finite() => x.log10(),
        _ => {
            let bits = p.bits();
            let shifted: BigInt = p >> (bits - 53);
            shifted.to_f64().unwrap().log10() + (bits - 53) as f64 * std::f64::consts::LOG10_2
        }
    }
}

/// Render the digit string `m` (value `m * 10^(e10 + 1 - len)`).
fn place_decimal_point(m: &str, e10: i64) -> String {
    let len = m.len() as i64;
    if e10 < 0 {
        format!("0.{}{}", "0".repeat((-e10 - 1) as usize), m)
    } else if e10 + 1 >= len {
        format!("{}{}", m, "0".repeat((e10 + 1 - len) as usize))
    } else {
        let (int, frac) = m.split_at((e10 + 1) as usize);
        format!("{}.{}", int, frac)
    }
}

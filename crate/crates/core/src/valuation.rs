//! Monomial valuations on `k[X_1..X_n]` over a trivially valued field.
//!
//! A valuation is fixed by the values `|X_j| = prod_i p_i^{-S_ij}` of the
//! coordinates, optionally taken around a rational point `a` (the valuation
//! is then monomial in `X_j - a_j`). The value of a polynomial is the
//! largest value among its monomials.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactvalue::{PrimeBasis, Value};
use crate::lattice;
use crate::polyring::{Poly, RatFn};

#[derive(Clone, Debug)]
pub struct MonomialValuation {
    nvars: usize,
    basis: Arc<PrimeBasis>,
    weights: Vec<Vec<BigRational>>,
    shift: Option<Vec<BigRational>>,
    var_values: Vec<Value>,
    center_exists: bool,
}

/// The center on the base chart: `(X_j - a_j : j in ideal_vars)`, with
/// residue field `k(X_j : j in residue_field_vars)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterDesc {
    pub ideal_vars: BTreeSet<usize>,
    pub residue_field_vars: BTreeSet<usize>,
}

impl MonomialValuation {
    /// `weights` is `m x n` over a basis of `m` primes; column `j` gives
    /// `|X_j| = prod p_i^{-S_ij}`.
    pub fn new(
        nvars: usize,
        basis: Arc<PrimeBasis>,
        weights: Vec<Vec<BigRational>>,
        shift: Option<Vec<BigRational>>,
    ) -> Result<Self> {
        let shape_err = |rows: usize, cols: usize| Error::ShapeMismatch {
            rows,
            cols,
            expected_rows: basis.len(),
            expected_cols: nvars,
        };
        if nvars == 0 {
            return Err(shape_err(weights.len(), 0));
        }
        if weights.len() != basis.len() {
            let cols = weights.first().map_or(0, Vec::len);
            return Err(shape_err(weights.len(), cols));
        }
        if let Some(bad) = weights.iter().find(|r| r.len() != nvars) {
            return Err(shape_err(weights.len(), bad.len()));
        }
        if let Some(a) = &shift {
            if a.len() != nvars {
                return Err(Error::LengthMismatch {
                    expected: nvars,
                    found: a.len(),
                });
            }
        }
        let var_values = (0..nvars)
            .map(|j| Value::new(&basis, weights.iter().map(|row| -row[j].clone()).collect()))
            .collect::<Result<Vec<_>>>()?;
        let one = Value::one(&basis);
        let center_exists = var_values.iter().all(|v| v <= &one);
        let shift = shift.filter(|a| a.iter().any(|x| !x.is_zero()));
        Ok(MonomialValuation {
            nvars,
            basis,
            weights,
            shift,
            var_values,
            center_exists,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn basis(&self) -> &Arc<PrimeBasis> {
        &self.basis
    }

    pub fn weights(&self) -> &[Vec<BigRational>] {
        &self.weights
    }

    pub fn shift(&self) -> Option<&[BigRational]> {
        self.shift.as_deref()
    }

    /// `|X_j - a_j|`.
    pub fn var_value(&self, j: usize) -> &Value {
        &self.var_values[j]
    }

    /// Whether every coordinate has value at most one, so the valuation
    /// has a center on affine space.
    pub fn center_exists(&self) -> bool {
        self.center_exists
    }

    pub fn one(&self) -> Value {
        Value::one(&self.basis)
    }

    /// `|X^I|` for an integer exponent vector (negative entries allowed).
    pub fn monomial_value(&self, exponent: &[BigInt]) -> Value {
        let exps = self
            .weights
            .iter()
            .map(|row| {
                -row.iter().zip(exponent).fold(BigRational::zero(), |acc, (s, i)| {
                    acc + s * BigRational::from_integer(i.clone())
                })
            })
            .collect();
        Value::new(&self.basis, exps).expect("basis length")
    }

    fn monomial_value_u32(&self, exponent: &[u32]) -> Value {
        let e: Vec<BigInt> = exponent.iter().map(|&k| BigInt::from(k)).collect();
        self.monomial_value(&e)
    }

    /// Rewrites `f` in the valuation's coordinates `X_j - a_j`.
    pub fn to_local(&self, f: &Poly) -> Result<Poly> {
        self.check_nvars(f)?;
        match &self.shift {
            None => Ok(f.clone()),
            Some(a) => f.shift_coordinates(a),
        }
    }

    /// Inverse of [`Self::to_local`].
    pub fn from_local(&self, f: &Poly) -> Result<Poly> {
        self.check_nvars(f)?;
        match &self.shift {
            None => Ok(f.clone()),
            Some(a) => {
                let neg: Vec<BigRational> = a.iter().map(|x| -x.clone()).collect();
                f.shift_coordinates(&neg)
            }
        }
    }

    pub fn to_local_ratfn(&self, f: &RatFn) -> Result<RatFn> {
        RatFn::new(self.to_local(f.num())?, self.to_local(f.den())?)
    }

    pub fn from_local_ratfn(&self, f: &RatFn) -> Result<RatFn> {
        RatFn::new(self.from_local(f.num())?, self.from_local(f.den())?)
    }

    fn check_nvars(&self, f: &Poly) -> Result<()> {
        if f.nvars() == self.nvars {
            Ok(())
        } else {
            Err(Error::NvarsMismatch(self.nvars, f.nvars()))
        }
    }

    /// Value of a polynomial already written in local coordinates.
    pub fn value_of_local(&self, g: &Poly) -> Value {
        let mut best = Value::zero(&self.basis);
        for (e, _) in g.terms() {
            let v = self.monomial_value_u32(e);
            if v.compare(&best).expect("same basis") == Ordering::Greater {
                best = v;
            }
        }
        best
    }

    pub fn value_of_poly(&self, f: &Poly) -> Result<Value> {
        Ok(self.value_of_local(&self.to_local(f)?))
    }

    pub fn value_of_ratfn(&self, f: &RatFn) -> Result<Value> {
        let num = self.value_of_poly(f.num())?;
        let den = self.value_of_poly(f.den())?;
        num.div(&den)
    }

    /// Terms of a local-coordinate polynomial achieving its value.
    pub fn top_form_of_local(&self, g: &Poly) -> Result<Poly> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let top = self.value_of_local(g);
        Ok(Poly::from_terms(
            g.nvars(),
            g.terms()
                .filter(|(e, _)| self.monomial_value_u32(e) == top)
                .map(|(e, c)| (e.clone(), c.clone())),
        ))
    }

    /// Top form of `f`, expressed in the coordinates `X_j - a_j`.
    pub fn top_form(&self, f: &Poly) -> Result<Poly> {
        self.top_form_of_local(&self.to_local(f)?)
    }

    pub fn center(&self) -> Result<CenterDesc> {
        let one = self.one();
        let mut ideal_vars = BTreeSet::new();
        let mut residue_field_vars = BTreeSet::new();
        for (j, v) in self.var_values.iter().enumerate() {
            match v.compare(&one)? {
                Ordering::Less => ideal_vars.insert(j),
                Ordering::Equal => residue_field_vars.insert(j),
                Ordering::Greater => return Err(Error::NoCenter(j + 1)),
            };
        }
        Ok(CenterDesc {
            ideal_vars,
            residue_field_vars,
        })
    }

    /// Dimension over Q of the divisible hull of the value group.
    pub fn rational_rank(&self) -> usize {
        lattice::rank(&self.weights)
    }
}

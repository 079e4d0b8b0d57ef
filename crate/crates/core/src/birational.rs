//! Affine charts of blow-ups as finitely generated subalgebras of `K(X)`
//! inside the valuation ring, and certified realization of the residue
//! field as the residue field of a center.
//!
//! Blowing up `(g, h)` with `|g| <= |h|` puts the center of the valuation
//! in the chart `A[g/h]`, so a chart is just a list of generators of value
//! at most one.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::polyring::{Poly, RatFn};
use crate::residue::{split_signed, ResidueElement, ResidueFieldDesc};
use crate::valuation::MonomialValuation;

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// The coordinate `X_j - a_j` (zero-based `j`).
    Base(usize),
    /// Adjoined `g/h` from the blow-up along `(g, h)`.
    Blowup { g: Poly, h: Poly },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartGenerator {
    pub function: RatFn,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    generators: Vec<ChartGenerator>,
}

impl Chart {
    pub fn generators(&self) -> &[ChartGenerator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn position_of(&self, f: &RatFn) -> Option<usize> {
        self.generators.iter().position(|gen| gen.function == *f)
    }
}

/// Maps residue generator `Y_i` to the chart generator whose residue it is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub entries: Vec<(usize, usize)>,
}

impl Certificate {
    /// Recomputes every residue and compares with `Y_i`.
    pub fn verify(&self, desc: &ResidueFieldDesc, chart: &Chart) -> Result<bool> {
        let k = desc.trdeg();
        if self.entries.len() != k {
            return Ok(false);
        }
        for &(i, gen) in &self.entries {
            let Some(g) = chart.generators.get(gen) else {
                return Ok(false);
            };
            let r = desc.residue_of(&g.function)?;
            if !r.residue_eq(&ResidueElement::generator(k, i)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Generators partitioned by value, with residues of the value-one ones.
#[derive(Clone, Debug)]
pub struct ChartCenter {
    pub below_one: Vec<usize>,
    pub equal_one: Vec<usize>,
    pub residue_gens: Vec<ResidueElement>,
}

pub fn base_chart(v: &MonomialValuation) -> Result<Chart> {
    v.center()?;
    let n = v.nvars();
    let generators = (0..n)
        .map(|j| {
            let local = Poly::var(n, j);
            let function = RatFn::from_poly(v.from_local(&local)?);
            Ok(ChartGenerator {
                function,
                provenance: Provenance::Base(j),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Chart { generators })
}

/// Adjoins `g/h`; the valuation's center lies in this chart of the blow-up
/// along `(g, h)` exactly when `|g| <= |h|`.
pub fn blowup_adjoin(v: &MonomialValuation, chart: &Chart, g: &Poly, h: &Poly) -> Result<Chart> {
    if h.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if v.value_of_poly(g)?.compare(&v.value_of_poly(h)?)? == Ordering::Greater {
        return Err(Error::CenterNotInChart);
    }
    let mut out = chart.clone();
    out.generators.push(ChartGenerator {
        function: RatFn::new(g.clone(), h.clone())?,
        provenance: Provenance::Blowup {
            g: g.clone(),
            h: h.clone(),
        },
    });
    Ok(out)
}

pub fn chart_center(v: &MonomialValuation, desc: &ResidueFieldDesc, chart: &Chart) -> Result<ChartCenter> {
    let one = v.one();
    let mut below_one = Vec::new();
    let mut equal_one = Vec::new();
    let mut residue_gens = Vec::new();
    for (i, gen) in chart.generators.iter().enumerate() {
        match v.value_of_ratfn(&gen.function)?.compare(&one)? {
            Ordering::Less => below_one.push(i),
            Ordering::Equal => {
                equal_one.push(i);
                residue_gens.push(desc.residue_of(&gen.function)?);
            }
            Ordering::Greater => return Err(Error::ValueExceedsOne),
        }
    }
    Ok(ChartCenter {
        below_one,
        equal_one,
        residue_gens,
    })
}

/// Adjoins `X^{B_i+} / X^{B_i-}` for each kernel basis vector `B_i`. The
/// resulting center has residue field containing every `Y_i`, hence equal
/// to the whole residue field.
pub fn realize_residue_field(v: &MonomialValuation) -> Result<(Chart, Certificate)> {
    let desc = ResidueFieldDesc::new(v);
    realize_with_desc(v, &desc)
}

pub fn realize_with_desc(v: &MonomialValuation, desc: &ResidueFieldDesc) -> Result<(Chart, Certificate)> {
    let mut chart = base_chart(v)?;
    let n = v.nvars();
    let mut entries = Vec::with_capacity(desc.trdeg());
    for (i, b) in desc.kernel().vectors().iter().enumerate() {
        let (pos, neg) = split_signed(b);
        let g = v.from_local(&Poly::monomial(n, pos, BigRational::one()))?;
        let h = v.from_local(&Poly::monomial(n, neg, BigRational::one()))?;
        let f = RatFn::new(g.clone(), h.clone())?;
        let index = match chart.position_of(&f) {
            Some(existing) => existing,
            None => {
                chart = blowup_adjoin(v, &chart, &g, &h)?;
                chart.len() - 1
            }
        };
        entries.push((i, index));
    }
    let cert = Certificate { entries };
    if !cert.verify(desc, &chart)? {
        return Err(Error::Internal("realization certificate failed to verify".into()));
    }
    Ok((chart, cert))
}

/// Adjoins each target in input order, so that every target's residue lies
/// in the residue field of the final center.
pub fn realize_elements(v: &MonomialValuation, targets: &[RatFn]) -> Result<Chart> {
    let mut chart = base_chart(v)?;
    let one = v.one();
    for t in targets {
        if v.value_of_ratfn(t)?.compare(&one)? == Ordering::Greater {
            return Err(Error::ValueExceedsOne);
        }
        if chart.position_of(t).is_none() {
            chart = blowup_adjoin(v, &chart, t.num(), t.den())?;
        }
    }
    Ok(chart)
}

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure. Every random case comes from a fixed-seed ChaCha stream.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{check_golden, gen, GOLDEN_CASES};
use monoval::birational::{blowup_adjoin, chart_center, realize_residue_field};
use monoval::cli::parse_expr;
use monoval::group::{
    evaluate_trace_quotient, monomials_of_degree, rewrite_in_trace, GroupElement, MonomialAction,
};
use monoval::lattice::kernel_basis;
use monoval::polyring::{Poly, RatFn};
use monoval::residue::ResidueElement;
use monoval::{MonomialValuation, PrimeBasis, ResidueFieldDesc};

struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: Vec::new(),
        }
    }

    /// Runs one case; a panic or `Err` counts as a failure.
    fn case(&mut self, label: impl FnOnce() -> String, f: impl FnOnce() -> Result<(), String>) {
        self.cases += 1;
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        if let Err(e) = outcome {
            self.failures.push(format!("{}: {e}", label()));
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

fn valuation_axioms() -> Tally {
    let mut r = rng(1);
    let mut t = Tally::new();
    for i in 0..1000 {
        let n = r.gen_range(1..=4);
        let v = gen::valuation(&mut r, n);
        let f = gen::poly(&mut r, n, 6, 5);
        let g = gen::poly(&mut r, n, 6, 5);
        t.case(
            || format!("case {i}"),
            || {
                let vf = v.value_of_poly(&f).map_err(|e| e.to_string())?;
                let vg = v.value_of_poly(&g).map_err(|e| e.to_string())?;
                let prod = v.value_of_poly(&(&f * &g)).map_err(|e| e.to_string())?;
                ensure(prod == vf.mul(&vg).unwrap(), || "|fg| != |f||g|".into())?;
                let sum = v.value_of_poly(&(&f + &g)).map_err(|e| e.to_string())?;
                let max = if vf.compare(&vg).unwrap() == Ordering::Less {
                    vg
                } else {
                    vf
                };
                ensure(sum.compare(&max).unwrap() != Ordering::Greater, || {
                    "|f+g| > max".into()
                })
            },
        );
    }
    t
}

fn structure() -> Tally {
    let mut r = rng(2);
    let mut t = Tally::new();
    for i in 0..500 {
        let n = r.gen_range(1..=5);
        let b = gen::basis(&mut r);
        let w = gen::weights(&mut r, b.len(), n);
        let v = MonomialValuation::new(n, b, w, None).unwrap();
        t.case(
            || format!("case {i}"),
            || {
                let desc = ResidueFieldDesc::new(&v);
                let rank = v.rational_rank();
                ensure(rank == gen::oracle_rank(v.weights()), || {
                    "rank disagrees with oracle".into()
                })?;
                ensure(rank + desc.kernel().rank() == n, || "rank + nullity != n".into())?;
                ensure(desc.trdeg() == n - rank, || "trdeg != n - rank".into())?;
                let a = desc.abhyankar_check();
                ensure(
                    a.equality && a.rational_rank == rank && a.trdeg == n - rank && a.nvars == n,
                    || format!("abhyankar report {a:?}"),
                )
            },
        );
    }
    t
}

fn kernel_oracle() -> Tally {
    let mut r = rng(3);
    let mut t = Tally::new();
    for i in 0..200 {
        let n = r.gen_range(1..=4);
        let b = gen::basis(&mut r);
        let m = r.gen_range(1..=b.len());
        let w = gen::weights(&mut r, m, n);
        t.case(
            || format!("matrix {i}"),
            || {
                let basis = kernel_basis(&w, n);
                for v in basis.vectors() {
                    ensure(gen::in_kernel(&w, v), || format!("S*{v:?} != 0"))?;
                }
                for x in gen::box_vectors(n, 4) {
                    if gen::in_kernel(&w, &x) {
                        let c = basis
                            .coords(&x)
                            .ok_or_else(|| format!("{x:?} outside the lattice"))?;
                        ensure(basis.combination(&c) == x, || {
                            "coordinates do not reproduce vector".into()
                        })?;
                    }
                }
                Ok(())
            },
        );
    }
    t
}

fn residue_correctness() -> Tally {
    let mut r = rng(4);
    let mut t = Tally::new();
    for i in 0..500 {
        let n = r.gen_range(1..=4);
        let v = gen::centered_valuation(&mut r, n, false);
        let desc = ResidueFieldDesc::new(&v);
        let e = gen::residue_element(&mut r, desc.trdeg());
        let a = gen::ring_element(&mut r, &v, 3, 3);
        let b = gen::ring_element(&mut r, &v, 3, 3);
        let h = gen::nonzero_poly(&mut r, n, 2, 3);
        t.case(
            || format!("case {i}"),
            || {
                let err = |e: monoval::Error| e.to_string();
                let back = desc.residue_of(&desc.lift(&e)).map_err(err)?;
                ensure(back.residue_eq(&e), || format!("residue(lift({e})) = {back}"))?;

                let ra = desc.residue_of(&a).map_err(err)?;
                let rb = desc.residue_of(&b).map_err(err)?;
                let sum = desc.residue_of(&a.checked_add(&b).unwrap()).map_err(err)?;
                ensure(sum.residue_eq(&ra.add(&rb)), || "not additive".into())?;
                let prod = desc.residue_of(&a.checked_mul(&b).unwrap()).map_err(err)?;
                ensure(prod.residue_eq(&ra.mul(&rb)), || "not multiplicative".into())?;

                let a2 = RatFn::new(a.num() * &h, a.den() * &h).unwrap();
                ensure(desc.residue_of(&a2).map_err(err)?.residue_eq(&ra), || {
                    "depends on representation".into()
                })?;
                let den_top = v.top_form_of_local(&v.to_local(a2.den()).unwrap()).unwrap();
                for (anchor, _) in den_top.terms() {
                    let ri = desc.residue_of_anchored(&a2, anchor).map_err(err)?;
                    ensure(ri.residue_eq(&ra), || format!("depends on anchor {anchor:?}"))?;
                }
                Ok(())
            },
        );
    }
    t
}

fn realization() -> Tally {
    let mut r = rng(5);
    let mut t = Tally::new();
    for i in 0..200 {
        let n = r.gen_range(1..=4);
        let v = gen::centered_valuation(&mut r, n, true);
        let extra: Vec<RatFn> = (0..3).map(|_| gen::ring_element(&mut r, &v, 2, 2)).collect();
        t.case(
            || format!("valuation {i}"),
            || {
                let one = v.one();
                for j in 0..n {
                    ensure(v.var_value(j).compare(&one).unwrap() == Ordering::Less, || {
                        "value not < 1".into()
                    })?;
                }
                let desc = ResidueFieldDesc::new(&v);
                let (mut chart, cert) = realize_residue_field(&v).map_err(|e| e.to_string())?;
                ensure(cert.entries.len() == desc.trdeg(), || {
                    "certificate misses a generator".into()
                })?;
                for &(y, g) in &cert.entries {
                    let res = desc
                        .residue_of(&chart.generators()[g].function)
                        .map_err(|e| e.to_string())?;
                    ensure(
                        res.residue_eq(&ResidueElement::generator(desc.trdeg(), y)),
                        || format!("generator {g} does not reduce to Y{}", y + 1),
                    )?;
                }
                ensure(cert.verify(&desc, &chart).unwrap(), || {
                    "certificate rejected".into()
                })?;
                for f in &extra {
                    chart = blowup_adjoin(&v, &chart, f.num(), f.den()).map_err(|e| e.to_string())?;
                    for g in chart.generators() {
                        ensure(
                            v.value_of_ratfn(&g.function).unwrap().compare(&one).unwrap()
                                != Ordering::Greater,
                            || "chart generator exceeds one".into(),
                        )?;
                    }
                    chart_center(&v, &desc, &chart).map_err(|e| e.to_string())?;
                }
                Ok(())
            },
        );
    }
    t
}

fn swap_desk_case() -> Tally {
    let mut t = Tally::new();
    let basis = std::sync::Arc::new(PrimeBasis::from_u64s(&[2]).unwrap());
    let one = gen::q(1, 1);
    let v = MonomialValuation::new(2, basis, vec![vec![one.clone(), one]], None).unwrap();
    let desc = ResidueFieldDesc::new(&v);
    let g = MonomialAction::new(2, vec![GroupElement::permutation(vec![1, 0]).unwrap()]).unwrap();
    let y = ResidueElement::generator(1, 0);
    let (x1, x2) = (Poly::var(2, 0), Poly::var(2, 1));

    t.case(
        || "induced action".into(),
        || {
            let ind = g.induced_residue_action(&v, &desc).map_err(|e| e.to_string())?;
            let s = g
                .index_of(&GroupElement::permutation(vec![1, 0]).unwrap())
                .unwrap();
            let img = ind.maps()[s].apply(&y);
            ensure(img.residue_eq(&y.inv().unwrap()), || {
                format!("swap sends Y1 to {img}")
            })
        },
    );
    t.case(
        || "(x1^2+x2^2)/(x1 x2)".into(),
        || {
            let f = RatFn::new(&x1.pow(2) + &x2.pow(2), &x1 * &x2).unwrap();
            let rep = g
                .quotient_residue_report(&v, &desc, &[f])
                .map_err(|e| e.to_string())?;
            let expected = y.add(&y.inv().unwrap());
            ensure(rep.entries[0].residue.residue_eq(&expected), || {
                "residue is not Y1 + 1/Y1".into()
            })?;
            ensure(rep.all_fixed(), || "residue not fixed".into())
        },
    );

    // invariant polynomials of degree <= 4: Reynolds images of monomials
    let mut invariants: Vec<Poly> = Vec::new();
    for d in 0..=4 {
        for e in monomials_of_degree(2, d) {
            let p = g.reynolds(&Poly::monomial(2, e, BigRational::from_integer(1.into())));
            if !invariants.contains(&p) {
                invariants.push(p);
            }
        }
    }
    let mut r = rng(6);
    let mut tests: Vec<(Poly, Poly)> = Vec::new();
    for a in &invariants {
        for b in &invariants {
            tests.push((a.clone(), b.clone()));
        }
    }
    let combo = |r: &mut ChaCha8Rng| -> Poly {
        let mut p = Poly::zero(2);
        for inv in &invariants {
            if r.gen_bool(0.4) {
                p = &p + &inv.scale(&gen::small_rational(r, 4));
            }
        }
        p
    };
    while tests.len() < 600 {
        let (a, b) = (combo(&mut r), combo(&mut r));
        if !a.is_zero() && !b.is_zero() {
            tests.push((a, b));
        }
    }
    for (i, (a, b)) in tests.iter().enumerate() {
        let va = v.value_of_poly(a).unwrap();
        let vb = v.value_of_poly(b).unwrap();
        if a.is_zero() || va != vb {
            continue;
        }
        t.case(
            || format!("invariant quotient {i}"),
            || {
                let f = RatFn::new(a.clone(), b.clone()).unwrap();
                ensure(g.is_invariant_function(&f), || {
                    "test function not invariant".into()
                })?;
                let res = desc.residue_of(&f).map_err(|e| e.to_string())?;
                let (p, q) = rewrite_in_trace(&res).map_err(|e| format!("{res}: {e}"))?;
                let back = evaluate_trace_quotient(&p, &q).map_err(|e| e.to_string())?;
                ensure(back.residue_eq(&res), || {
                    format!("rewrite of {res} does not evaluate back")
                })
            },
        );
    }
    t
}

fn equivariance() -> Tally {
    let mut r = rng(7);
    let mut t = Tally::new();
    for i in 0..300 {
        let n = r.gen_range(1..=4);
        let g = gen::action(&mut r, n);
        let v = gen::invariant_valuation(&mut r, &g);
        let f = gen::ring_element(&mut r, &v, 3, 3);
        t.case(
            || format!("case {i}"),
            || {
                ensure(g.is_invariant_valuation(&v), || "valuation not invariant".into())?;
                let desc = ResidueFieldDesc::new(&v);
                let induced = g.induced_residue_action(&v, &desc).map_err(|e| e.to_string())?;
                ensure(
                    g.equivariance_check(&v, &desc, &induced, &f)
                        .map_err(|e| e.to_string())?,
                    || "residue(s f) != s(residue f)".into(),
                )
            },
        );
    }
    t
}

fn cli_determinism() -> Tally {
    let mut t = Tally::new();
    for case in GOLDEN_CASES {
        t.case(|| case.name.to_string(), || check_golden(case));
    }
    let mut r = rng(8);
    let names: Vec<String> = ["x", "y", "z_1", "Wq"].iter().map(|s| s.to_string()).collect();
    for i in 0..500 {
        let n = r.gen_range(1..=4);
        let names = &names[..n];
        let f = if r.gen_bool(0.5) {
            RatFn::from_poly(gen::poly(&mut r, n, 5, 4))
        } else {
            gen::ratfn(&mut r, n, 4, 3)
        };
        t.case(
            || format!("round trip {i}"),
            || {
                let text = f.display_with(names).to_string();
                let back = parse_expr(&text, names)
                    .map_err(|e| format!("{text}: {e}"))?
                    .into_ratfn();
                ensure(back.num() == f.num() && back.den() == f.den(), || {
                    format!("{text} did not round-trip")
                })
            },
        );
    }
    t
}

type Criterion = (&'static str, fn() -> Tally);

fn main() {
    let criteria: [Criterion; 8] = [
        ("valuation axioms", valuation_axioms),
        ("rank-nullity, trdeg and Abhyankar equality", structure),
        ("kernel saturation against box search", kernel_oracle),
        ("residue correctness", residue_correctness),
        ("residue field realization", realization),
        ("swap desk case", swap_desk_case),
        ("equivariance", equivariance),
        ("CLI determinism", cli_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut all_ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let tally = run();
        let ok = tally.failures.is_empty() && tally.cases > 0;
        all_ok &= ok;
        println!(
            "{} criterion {}: {} ({} cases, {} failures, {:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            name,
            tally.cases,
            tally.failures.len(),
            start.elapsed().as_secs_f64()
        );
        for f in tally.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
}

//! Command-line front end: sessions, subcommands and report rendering.
//!
//! Every subcommand renders either a plain-text report or a JSON document.
//! JSON keys are sorted and rationals are written as `"p/q"` strings, so
//! output is byte-stable for a given session and argument list.

pub mod parse;
pub mod session;

use std::cmp::Ordering;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::birational::{
    base_chart, blowup_adjoin, chart_center, realize_elements, realize_with_desc, Chart, Provenance,
};
use crate::error::{Error, Result};
use crate::exactvalue::Value;
use crate::group::{rewrite_in_trace, MonomialAction};
use crate::polyring::{Poly, RatFn};
use crate::residue::{laurent_monomial_ratfn, ResidueElement, ResidueFieldDesc};

pub use parse::{parse_expr, Parsed};
pub use session::Session;

/// Degree bound for the invariant generators listed by `group-check`.
const INVARIANT_DEGREE: u32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "monoval",
    version,
    about = "Exact computations with monomial valuations"
)]
pub struct Cli {
    /// Session file (JSON).
    #[arg(long, global = true)]
    pub session: Option<PathBuf>,
    /// Expression argument; may be repeated.
    #[arg(short = 'e', long = "expr", global = true, allow_hyphen_values = true)]
    pub expr: Vec<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Significant digits for decimal approximations.
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Values of expressions.
    Value,
    /// Residues of expressions of value at most one.
    Residue,
    /// Rational rank and the values of the variables.
    Rank,
    /// Kernel lattice and residue field generators.
    Kernel,
    /// Center on the base chart.
    Center,
    /// A chart whose center realizes the residue field, or the given elements.
    Realize,
    /// Blow up along each `g/h` in turn, starting from the base chart.
    Adjoin,
    /// Group order, invariance and the induced action on residues.
    GroupCheck,
    /// Every section at once.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Value => "value",
            Command::Residue => "residue",
            Command::Rank => "rank",
            Command::Kernel => "kernel",
            Command::Center => "center",
            Command::Realize => "realize",
            Command::Adjoin => "adjoin",
            Command::GroupCheck => "group-check",
            Command::Report => "report",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub exprs: Vec<String>,
    pub json: bool,
    pub digits: Option<usize>,
}

/// Result of a full command-line invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Outcome { code, stdout, stderr };
        }
    };
    let opts = Options {
        exprs: cli.expr,
        json: cli.json,
        digits: cli.digits,
    };
    let result = cli
        .session
        .ok_or_else(|| Error::Usage("--session <file> is required".into()))
        .and_then(|path| Session::load(&path))
        .and_then(|s| run_session(&s, cli.command, &opts));
    match result {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: if e.is_usage() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Runs one subcommand against a loaded session and renders the report.
pub fn run_session(s: &Session, command: Command, opts: &Options) -> Result<String> {
    if opts.digits == Some(0) {
        return Err(Error::Usage("--digits must be at least 1".into()));
    }
    let ctx = Ctx::new(s, opts);
    let needs_exprs = matches!(command, Command::Value | Command::Residue | Command::Adjoin);
    if needs_exprs && opts.exprs.is_empty() {
        return Err(Error::Usage(format!(
            "{} needs at least one --expr",
            command.name()
        )));
    }
    let sections: Vec<(&str, Section)> = match command {
        Command::Value => vec![("values", ctx.values()?)],
        Command::Residue => vec![("residues", ctx.residues()?)],
        Command::Rank => vec![("rank", ctx.rank())],
        Command::Kernel => vec![("kernel", ctx.kernel())],
        Command::Center => vec![("center", ctx.center()?)],
        Command::Realize => vec![("realization", ctx.realize(!opts.exprs.is_empty())?)],
        Command::Adjoin => vec![("chart", ctx.adjoin()?)],
        Command::GroupCheck => vec![("group", ctx.group_check()?)],
        Command::Report => ctx.report()?,
    };
    Ok(render(command, &sections, opts.json))
}

struct Section {
    text: String,
    json: Json,
}

fn render(command: Command, sections: &[(&str, Section)], as_json: bool) -> String {
    if as_json {
        let mut doc = serde_json::Map::new();
        doc.insert("command".into(), json!(command.name()));
        for (key, sec) in sections {
            doc.insert((*key).into(), sec.json.clone());
        }
        let mut out = serde_json::to_string_pretty(&Json::Object(doc)).expect("serializable");
        out.push('\n');
        return out;
    }
    if sections.len() == 1 {
        return sections[0].1.text.clone();
    }
    let mut out = String::new();
    for (i, (key, sec)) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "[{key}]");
        out.push_str(&sec.text);
    }
    out
}

struct Ctx<'a> {
    s: &'a Session,
    opts: &'a Options,
    desc: ResidueFieldDesc,
}

impl<'a> Ctx<'a> {
    fn new(s: &'a Session, opts: &'a Options) -> Self {
        Ctx {
            s,
            opts,
            desc: ResidueFieldDesc::new(&s.valuation),
        }
    }

    fn n(&self) -> usize {
        self.s.names.len()
    }

    fn poly(&self, p: &Poly) -> String {
        p.display_with(&self.s.names).to_string()
    }

    fn ratfn(&self, f: &RatFn) -> String {
        f.display_with(&self.s.names).to_string()
    }

    fn approx(&self, v: &Value) -> String {
        match self.opts.digits {
            Some(d) => v.approx(d),
            None => trim_zeros(v.approx(10)),
        }
    }

    fn parse_all(&self) -> Result<Vec<RatFn>> {
        self.opts
            .exprs
            .iter()
            .map(|e| Ok(parse_expr(e, &self.s.names)?.into_ratfn()))
            .collect()
    }

    fn value_json(&self, v: &Value) -> Json {
        let exponents = v
            .exponents()
            .map(|e| Json::Array(e.iter().map(|q| json!(q.to_string())).collect()))
            .unwrap_or(Json::Null);
        json!({"exact": v.to_string(), "exponents": exponents, "approx": self.approx(v)})
    }

    fn values(&self) -> Result<Section> {
        let v = &self.s.valuation;
        let mut text = String::new();
        let mut items = Vec::new();
        for (i, f) in self.parse_all()?.iter().enumerate() {
            let val = v.value_of_ratfn(f)?;
            if i > 0 {
                text.push('\n');
            }
            let _ = writeln!(text, "expr: {}", self.ratfn(f));
            let _ = writeln!(text, "value: {}", val);
            let _ = writeln!(text, "approx: {}", self.approx(&val));
            let mut item = json!({"expr": self.ratfn(f), "value": self.value_json(&val)});
            if f.is_poly() && !f.is_zero() {
                let top = v.from_local(&v.top_form(f.num())?)?;
                let _ = writeln!(text, "top form: {}", self.poly(&top));
                item["top_form"] = json!(self.poly(&top));
            }
            items.push(item);
        }
        Ok(Section {
            text,
            json: Json::Array(items),
        })
    }

    fn residues(&self) -> Result<Section> {
        let v = &self.s.valuation;
        let one = v.one();
        let mut text = String::new();
        let mut items = Vec::new();
        for (i, f) in self.parse_all()?.iter().enumerate() {
            if v.value_of_ratfn(f)?.compare(&one)? == Ordering::Greater {
                return Err(Error::ValueExceedsOne);
            }
            let r = self.desc.residue_of(f)?;
            if i > 0 {
                text.push('\n');
            }
            let _ = writeln!(text, "expr: {}", self.ratfn(f));
            let _ = writeln!(text, "residue: {}", r);
            items.push(json!({"expr": self.ratfn(f), "residue": r.to_string()}));
        }
        Ok(Section {
            text,
            json: Json::Array(items),
        })
    }

    fn rank(&self) -> Section {
        let v = &self.s.valuation;
        let r = v.rational_rank();
        let mut text = format!("rational rank: {r}\nvariable values:\n");
        let mut items = Vec::new();
        for (j, name) in self.s.names.iter().enumerate() {
            let val = v.var_value(j);
            let coord = self.poly(&v.from_local(&Poly::var(self.n(), j)).expect("same ring"));
            let _ = writeln!(text, "  |{coord}| = {} ~ {}", val, self.approx(val));
            items.push(json!({"variable": name, "value": self.value_json(val)}));
        }
        Section {
            text,
            json: json!({"rational_rank": r, "variable_values": items}),
        }
    }

    fn generator_texts(&self) -> Vec<String> {
        let v = &self.s.valuation;
        self.desc
            .kernel()
            .vectors()
            .iter()
            .map(|b| {
                let local = laurent_monomial_ratfn(self.n(), b);
                self.ratfn(&v.from_local_ratfn(&local).expect("same ring"))
            })
            .collect()
    }

    fn kernel(&self) -> Section {
        let vectors = self.desc.kernel().vectors();
        let gens = self.generator_texts();
        let report = self.desc.abhyankar_check();
        let mut text = format!("kernel basis ({} vectors):\n", vectors.len());
        if vectors.is_empty() {
            text.push_str("  (none)\n");
        }
        for (i, (b, g)) in vectors.iter().zip(&gens).enumerate() {
            let entries: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(
                text,
                "  B{} = ({})    Y{} = {}",
                i + 1,
                entries.join(", "),
                i + 1,
                g
            );
        }
        let _ = writeln!(text, "residue field: {}", residue_field_name(self.desc.trdeg()));
        let _ = writeln!(
            text,
            "abhyankar: rational rank {} + trdeg {} = {}, dimension {} ({})",
            report.rational_rank,
            report.trdeg,
            report.rational_rank + report.trdeg,
            report.nvars,
            if report.equality { "equality" } else { "strict" }
        );
        let basis: Vec<Json> = vectors
            .iter()
            .map(|b| Json::Array(b.iter().map(|x| json!(x.to_string())).collect()))
            .collect();
        Section {
            text,
            json: json!({
                "basis": basis,
                "generators": gens,
                "trdeg": report.trdeg,
                "rational_rank": report.rational_rank,
                "nvars": report.nvars,
                "abhyankar_equality": report.equality,
            }),
        }
    }

    fn center(&self) -> Result<Section> {
        let v = &self.s.valuation;
        let c = v.center()?;
        let ideal: Vec<String> = c
            .ideal_vars
            .iter()
            .map(|&j| self.poly(&v.from_local(&Poly::var(self.n(), j)).expect("same ring")))
            .collect();
        let free: Vec<String> = c
            .residue_field_vars
            .iter()
            .map(|&j| self.s.names[j].clone())
            .collect();
        let ideal_text = if ideal.is_empty() {
            "(0)".to_string()
        } else {
            format!("({})", ideal.join(", "))
        };
        let field_text = if free.is_empty() {
            "k".to_string()
        } else {
            format!("k({})", free.join(", "))
        };
        Ok(Section {
            text: format!("center ideal: {ideal_text}\nresidue field of center: {field_text}\n"),
            json: json!({"ideal": ideal, "residue_field_vars": free}),
        })
    }

    fn chart(&self, chart: &Chart) -> Result<Section> {
        let v = &self.s.valuation;
        let cc = chart_center(v, &self.desc, chart)?;
        let mut text = String::from("chart generators:\n");
        let mut gens = Vec::new();
        for (i, g) in chart.generators().iter().enumerate() {
            let val = v.value_of_ratfn(&g.function)?;
            let (prov_text, prov_json) = match &g.provenance {
                Provenance::Base(j) => (
                    format!("coordinate {}", self.s.names[*j]),
                    json!({"kind": "coordinate", "variable": self.s.names[*j]}),
                ),
                Provenance::Blowup { g, h } => (
                    format!("blow-up along ({}, {})", self.poly(g), self.poly(h)),
                    json!({"kind": "blowup", "g": self.poly(g), "h": self.poly(h)}),
                ),
            };
            let _ = writeln!(
                text,
                "  g{} = {}    value {}    [{}]",
                i + 1,
                self.ratfn(&g.function),
                val,
                prov_text
            );
            gens.push(json!({
                "index": i + 1,
                "function": self.ratfn(&g.function),
                "value": val.to_string(),
                "provenance": prov_json,
            }));
        }
        let label = |ix: &[usize]| -> String {
            if ix.is_empty() {
                "none".into()
            } else {
                ix.iter()
                    .map(|i| format!("g{}", i + 1))
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        };
        let _ = writeln!(text, "center of chart:");
        let _ = writeln!(text, "  value < 1: {}", label(&cc.below_one));
        let _ = writeln!(text, "  value = 1: {}", label(&cc.equal_one));
        let mut residues = Vec::new();
        for (i, r) in cc.equal_one.iter().zip(&cc.residue_gens) {
            let _ = writeln!(text, "  residue of g{} = {}", i + 1, r);
            residues.push(json!({"generator": i + 1, "residue": r.to_string()}));
        }
        let one_based = |ix: &[usize]| ix.iter().map(|i| i + 1).collect::<Vec<_>>();
        Ok(Section {
            text,
            json: json!({
                "generators": gens,
                "center": {
                    "below_one": one_based(&cc.below_one),
                    "equal_one": one_based(&cc.equal_one),
                    "residues": residues,
                },
            }),
        })
    }

    fn realize(&self, with_targets: bool) -> Result<Section> {
        let v = &self.s.valuation;
        if with_targets {
            let targets = self.parse_all()?;
            let chart = realize_elements(v, &targets)?;
            let mut sec = self.chart(&chart)?;
            let _ = writeln!(sec.text, "targets:");
            let mut items = Vec::new();
            for t in &targets {
                let r = self.desc.residue_of(t)?;
                let _ = writeln!(sec.text, "  {} -> residue {}", self.ratfn(t), r);
                items.push(json!({"expr": self.ratfn(t), "residue": r.to_string()}));
            }
            sec.json["targets"] = Json::Array(items);
            return Ok(sec);
        }
        let (chart, cert) = realize_with_desc(v, &self.desc)?;
        let verified = cert.verify(&self.desc, &chart)?;
        let mut sec = self.chart(&chart)?;
        let _ = writeln!(sec.text, "certificate:");
        if cert.entries.is_empty() {
            let _ = writeln!(sec.text, "  (empty: residue field is k)");
        }
        let mut entries = Vec::new();
        for &(i, g) in &cert.entries {
            let _ = writeln!(sec.text, "  Y{} -> g{}", i + 1, g + 1);
            entries.push(json!({"residue_generator": format!("Y{}", i + 1), "chart_generator": g + 1}));
        }
        let _ = writeln!(sec.text, "verified: {verified}");
        sec.json["certificate"] = Json::Array(entries);
        sec.json["verified"] = json!(verified);
        Ok(sec)
    }

    fn adjoin(&self) -> Result<Section> {
        let v = &self.s.valuation;
        let mut chart = base_chart(v)?;
        for f in self.parse_all()? {
            chart = blowup_adjoin(v, &chart, f.num(), f.den())?;
        }
        self.chart(&chart)
    }

    fn group(&self) -> Result<&MonomialAction> {
        self.s
            .group
            .as_ref()
            .ok_or_else(|| Error::Session("the session declares no group".into()))
    }

    fn group_check(&self) -> Result<Section> {
        let g = self.group()?;
        let v = &self.s.valuation;
        let n = self.n();
        let mut text = format!("group order: {}\nelements:\n", g.order());
        let mut elements = Vec::new();
        for (i, el) in g.elements().iter().enumerate() {
            let images: Vec<String> = (0..n)
                .map(|j| {
                    let image = Poly::var(n, el.perm()[j]).scale(&el.scalars()[j]);
                    format!("{} -> {}", self.s.names[j], self.poly(&image))
                })
                .collect();
            let _ = writeln!(text, "  s{}: {}", i + 1, images.join(", "));
            elements.push(json!(images));
        }
        let invariant = g.is_invariant_valuation(v);
        let _ = writeln!(text, "valuation invariant: {invariant}");
        let mut doc = json!({
            "order": g.order(),
            "elements": elements,
            "valuation_invariant": invariant,
        });

        let induced = if invariant {
            let induced = g.induced_residue_action(v, &self.desc)?;
            let k = self.desc.trdeg();
            let _ = writeln!(text, "induced residue action:");
            let mut maps = Vec::new();
            for (i, m) in induced.maps().iter().enumerate() {
                let images: Vec<String> = (0..k)
                    .map(|y| format!("Y{} -> {}", y + 1, m.apply(&ResidueElement::generator(k, y))))
                    .collect();
                let shown = if images.is_empty() {
                    "identity on k".to_string()
                } else {
                    images.join(", ")
                };
                let _ = writeln!(text, "  s{}: {}", i + 1, shown);
                maps.push(json!(images));
            }
            doc["induced_action"] = Json::Array(maps);
            Some(induced)
        } else {
            doc["induced_action"] = Json::Null;
            None
        };

        let gens: Vec<String> = g
            .invariant_gens_up_to_degree(INVARIANT_DEGREE)
            .iter()
            .map(|p| self.poly(p))
            .collect();
        let _ = writeln!(text, "invariant polynomials up to degree {INVARIANT_DEGREE}:");
        for p in &gens {
            let _ = writeln!(text, "  {p}");
        }
        doc["invariant_polynomials"] = json!(gens);

        let mut items = Vec::new();
        for f in self.parse_all()? {
            let Some(induced) = &induced else {
                return Err(Error::NotInvariant);
            };
            let _ = writeln!(text, "expr: {}", self.ratfn(&f));
            let inv = g.is_invariant_function(&f);
            let reynolds = g.reynolds(&f);
            let equivariant = g.equivariance_check(v, &self.desc, induced, &f)?;
            let _ = writeln!(text, "  invariant: {inv}");
            let _ = writeln!(text, "  reynolds: {}", self.ratfn(&reynolds));
            let _ = writeln!(text, "  equivariant: {equivariant}");
            let mut item = json!({
                "expr": self.ratfn(&f),
                "invariant": inv,
                "reynolds": self.ratfn(&reynolds),
                "equivariant": equivariant,
            });
            if inv && v.value_of_ratfn(&f)?.compare(&v.one())? != Ordering::Greater {
                let entry = g
                    .quotient_residue_report(v, &self.desc, std::slice::from_ref(&f))?
                    .entries
                    .remove(0);
                let _ = writeln!(text, "  residue: {}", entry.residue);
                let _ = writeln!(text, "  fixed by induced action: {}", entry.fixed);
                item["residue"] = json!(entry.residue.to_string());
                item["fixed"] = json!(entry.fixed);
                if let Some(t) = trace_form(&entry.residue) {
                    let _ = writeln!(text, "  in t = Y1 + Y1^(-1): {t}");
                    item["in_trace"] = json!(t);
                }
            }
            items.push(item);
        }
        if !self.opts.exprs.is_empty() {
            doc["expressions"] = Json::Array(items);
        }
        Ok(Section { text, json: doc })
    }

    fn report(&self) -> Result<Vec<(&'static str, Section)>> {
        let mut out = vec![("rank", self.rank()), ("kernel", self.kernel())];
        match self.center() {
            Ok(c) => {
                out.push(("center", c));
                out.push(("realization", self.realize(false)?));
            }
            Err(Error::NoCenter(j)) => {
                let name = &self.s.names[j - 1];
                out.push((
                    "center",
                    Section {
                        text: format!("no center: |{name}| > 1\n"),
                        json: Json::Null,
                    },
                ));
            }
            Err(e) => return Err(e),
        }
        if self.s.group.is_some() {
            out.push(("group", self.group_check()?));
        }
        if !self.opts.exprs.is_empty() {
            out.push(("values", self.values()?));
        }
        Ok(out)
    }
}

fn residue_field_name(k: usize) -> String {
    match k {
        0 => "k".into(),
        k => format!("k({})", crate::residue::residue_names(k).join(", ")),
    }
}

/// `P(t) / Q(t)` for a residue in one variable fixed by inversion.
fn trace_form(r: &ResidueElement) -> Option<String> {
    let (p, q) = rewrite_in_trace(r).ok()?;
    let names = vec!["t".to_string()];
    Some(RatFn::new(p, q).ok()?.display_with(&names).to_string())
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

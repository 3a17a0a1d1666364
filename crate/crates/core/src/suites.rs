//! The verification suites behind the command-line subcommands.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{grade_of, Alphabet, Grade, GradeOf};
use crate::config::RingConfig;
use crate::error::{Error, Result};
use crate::fock::{adjoint_check, gram_matrices, override_rule, section_gram, standard_rules};
use crate::invariants::{
    check_invariant, gap_totals, generation_gap, invariant_basis_with, invariant_dim_table,
    lemma_cri_check,
};
use crate::lie::{lie_basis, GeneratorMode, LieAlgebra, LieKind};
use crate::presets::{cdr_fibre, eight_invariants, tj_bundle};
use crate::rational::{fmt_rational, int, Rational};
use crate::report::{Report, Table};
use crate::sampling;
use crate::vertex::{
    automorphism_check, involution_scales, standard_sections, symbol_map, virasoro_central_charge,
    weight_of, Engine, StrongSpan, SECTION_NAMES,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSource {
    TjBundle,
    CdrFibre,
    Config(RingConfig),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantsOptions {
    pub ring: RingSource,
    pub algebra: Option<LieKind>,
    pub jet: Option<u32>,
    /// Fixed family degrees, e.g. `e = 1`.
    pub degrees: BTreeMap<String, u32>,
    pub weights: Option<(i64, i64)>,
    pub expect_total: Option<usize>,
    pub expect_dims: Option<Vec<usize>>,
    pub check_eight: bool,
    pub gap_bound: Option<i64>,
    pub lemma: bool,
    pub minimal: bool,
}

impl InvariantsOptions {
    pub fn new(ring: RingSource) -> Self {
        InvariantsOptions {
            ring,
            algebra: None,
            jet: None,
            degrees: BTreeMap::new(),
            weights: None,
            expect_total: None,
            expect_dims: None,
            check_eight: false,
            gap_bound: None,
            lemma: false,
            minimal: false,
        }
    }
}

fn fundamental_dim(kind: LieKind) -> usize {
    match kind {
        LieKind::Sl(n) => n,
        LieKind::Sp(n) => 2 * n,
    }
}

fn resolve(opts: &InvariantsOptions) -> Result<(Arc<Alphabet>, LieAlgebra, Option<u32>)> {
    let config_algebra = match &opts.ring {
        RingSource::Config(c) => c.algebra,
        _ => None,
    };
    let kind = opts
        .algebra
        .or(config_algebra)
        .ok_or_else(|| Error::Parse("no algebra given".into()))?;
    let g = lie_basis(kind)?;
    let n = fundamental_dim(kind);
    Ok(match &opts.ring {
        RingSource::TjBundle => {
            let m = opts.jet.ok_or_else(|| Error::Parse("tj-bundle needs a jet order".into()))?;
            (tj_bundle(n, m), g, Some(m))
        }
        RingSource::CdrFibre => (cdr_fibre(n), g, opts.jet),
        RingSource::Config(c) => (c.alphabet()?, g, opts.jet.or(c.jet)),
    })
}

fn base_grade(alphabet: &Alphabet, degrees: &BTreeMap<String, u32>) -> Result<Grade> {
    let mut g = Grade::weight(0);
    for (f, &d) in degrees {
        alphabet.family_index(f)?;
        g = g.with(f, d);
    }
    Ok(g)
}

fn needs_fibre(alphabet: &Alphabet) -> Result<()> {
    for f in ["beta", "gamma", "b", "c"] {
        alphabet.family_index(f)?;
    }
    Ok(())
}

pub fn run_invariants(opts: &InvariantsOptions) -> Result<Report> {
    let (alphabet, g, m) = resolve(opts)?;
    let n = g.n;
    let base = base_grade(&alphabet, &opts.degrees)?;
    let mut report = Report::new("invariants");
    report.result("algebra", g.kind.map(|k| k.to_string()));
    report.result("jet", m);
    if let Some((lo, hi)) = opts.weights {
        if lo > hi || lo < 0 {
            return Err(Error::Parse(format!("empty weight window {lo}..{hi}")));
        }
        let reports = invariant_dim_table(&alphabet, &g, m, &base, lo..=hi)?;
        let dims: Vec<usize> = reports.iter().map(|r| r.dim).collect();
        let total: usize = dims.iter().sum();
        report.table(Table {
            name: "invariant_dims".into(),
            header: vec!["weight".into(), "dim".into()],
            rows: reports.iter().map(|r| vec![r.grade.weight.to_string(), r.dim.to_string()]).collect(),
        });
        report.result("invariants", &reports);
        report.result("dims", &dims);
        report.result("total", total);
        if let Some(t) = opts.expect_total {
            report.check("expect_total", total == t, (total != t).then(|| format!("total {total}, expected {t}")));
        }
        if let Some(want) = &opts.expect_dims {
            let ok = *want == dims;
            report.check("expect_dims", ok, (!ok).then(|| format!("dims {dims:?}, expected {want:?}")));
        }
        if opts.minimal {
            for w in lo..=hi {
                let grade = Grade { degrees: base.degrees.clone(), weight: w };
                let full = invariant_basis_with(&alphabet, &g, m, &grade, GeneratorMode::Full)?;
                let min = invariant_basis_with(&alphabet, &g, m, &grade, GeneratorMode::Minimal)?;
                let ok = full.basis == min.basis;
                report.check(format!("minimal_equals_full.weight_{w}"), ok, (!ok).then(|| format!("{} vs {}", min.dim, full.dim)));
            }
        }
        if opts.lemma {
            let coord = if alphabet.family_index("y").is_ok() { "y" } else { "gamma" };
            let mut rows = Vec::new();
            for w in lo..=hi {
                let grade = Grade { degrees: base.degrees.clone(), weight: w };
                for c in lemma_cri_check(&alphabet, &g, m, coord, &grade)? {
                    report.check(
                        format!("lemma_kernel.{}", c.grade),
                        c.equal,
                        (!c.equal).then(|| format!("{} vs {}", c.lemma_dim, c.invariant_dim)),
                    );
                    rows.push(vec![c.grade.to_string(), c.lemma_dim.to_string(), c.invariant_dim.to_string()]);
                }
            }
            report.table(Table {
                name: "lemma_kernels".into(),
                header: vec!["grade".into(), "lemma_dim".into(), "invariant_dim".into()],
                rows,
            });
        }
    }
    if opts.check_eight {
        needs_fibre(&alphabet)?;
        for (name, p) in eight_invariants(&alphabet, n) {
            let weight = match grade_of(&p) {
                GradeOf::Homogeneous(gr) => gr.weight as u32,
                _ => 0,
            };
            let v = check_invariant(&p, &g, Some(m.map_or(weight, |m| m.min(weight))))?;
            report.check(
                format!("invariant.{name}"),
                v.is_empty(),
                v.first().map(|x| format!("{:?} t^{} gives {}", x.generator.element, x.generator.degree, x.image)),
            );
        }
    }
    if let Some(bound) = opts.gap_bound {
        needs_fibre(&alphabet)?;
        let gens: Vec<_> = eight_invariants(&alphabet, n).into_iter().map(|(_, p)| p).collect();
        let gap = generation_gap(&gens, &alphabet, &g, m, &base, bound)?;
        for r in &gap {
            let ok = r.span_dim == r.invariant_dim;
            report.check(format!("generated.{}", r.grade), ok, (!ok).then(|| format!("span {} < {}", r.span_dim, r.invariant_dim)));
        }
        report.table(Table {
            name: "generation_gap".into(),
            header: vec!["weight".into(), "span_dim".into(), "invariant_dim".into()],
            rows: gap_totals(&gap).iter().map(|(w, s, i)| vec![w.to_string(), s.to_string(), i.to_string()]).collect(),
        });
        report.result("generation_gap", &gap);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOptions {
    pub n: usize,
    pub central_charge: bool,
    pub weights: bool,
    pub closure_bound: Option<Rational>,
    pub symbol_check: bool,
    pub automorphism_bound: Option<Rational>,
    pub record_brackets: bool,
}

impl VertexOptions {
    /// Everything, at the default bounds (closure at weight 4, automorphism at 3).
    pub fn all(n: usize) -> Self {
        VertexOptions {
            n,
            central_charge: true,
            weights: true,
            closure_bound: Some(int(4)),
            symbol_check: true,
            automorphism_bound: Some(int(3)),
            record_brackets: true,
        }
    }

    pub fn none(n: usize) -> Self {
        VertexOptions {
            n,
            central_charge: false,
            weights: false,
            closure_bound: None,
            symbol_check: false,
            automorphism_bound: None,
            record_brackets: false,
        }
    }
}

pub fn run_vertex(opts: &VertexOptions) -> Result<Report> {
    if opts.n == 0 {
        return Err(Error::InvalidRank(0, "rank must be positive"));
    }
    let engine = Engine::new();
    let s = standard_sections(opts.n, &engine);
    let mut report = Report::new("vertex");
    report.result("n", opts.n);
    let mut sections = BTreeMap::new();
    for (name, x) in s.named() {
        sections.insert(name, x.to_string());
    }
    sections.insert("Ltilde", s.ltilde.to_string());
    report.result("sections", sections);

    if opts.central_charge {
        let c = virasoro_central_charge(&engine, &s.ltilde);
        let expected = int(3 * opts.n as i64);
        report.result("central_charge", c.as_ref().map(fmt_rational).unwrap_or_else(|| "not Virasoro".into()));
        report.check(
            "central_charge_is_3N",
            c.as_ref() == Some(&expected),
            (c.as_ref() != Some(&expected)).then(|| format!("got {:?}", c.as_ref().map(fmt_rational))),
        );
        let untwisted = virasoro_central_charge(&engine, &s.l);
        report.result("central_charge_untwisted", untwisted.as_ref().map(fmt_rational).unwrap_or_else(|| "not Virasoro".into()));
    }
    if opts.weights {
        let allowed = [int(1), Rational::new(3.into(), 2.into()), int(2)];
        let mut weights = BTreeMap::new();
        for (name, x) in s.named() {
            let w = weight_of(&engine, &s.ltilde, x);
            let ok = w.as_ref().is_some_and(|w| allowed.contains(w));
            report.check(format!("weight.{name}"), ok, (!ok).then(|| format!("{:?}", w.as_ref().map(fmt_rational))));
            weights.insert(name, w.as_ref().map(fmt_rational).unwrap_or_else(|| "not eigen".into()));
        }
        report.result("weights", weights);
    }
    if opts.closure_bound.is_some() || opts.record_brackets {
        let span = StrongSpan::of_sections(&engine, &s);
        let mut rows = Vec::new();
        for (xn, x) in s.named() {
            for (yn, y) in s.named() {
                for (n, p) in engine.lambda_bracket(x, y) {
                    if let Some(bound) = &opts.closure_bound {
                        let m = span.membership(&p, bound);
                        let coords: Vec<String> = m.coordinates.iter().map(|(w, c)| format!("{c} * {w}")).collect();
                        report.check(
                            format!("closure.{xn}_({n}){yn}"),
                            m.member,
                            (!m.member).then(|| p.to_string()),
                        );
                        rows.push(vec![xn.into(), n.to_string(), yn.into(), p.to_string(), coords.join(" + ")]);
                    } else {
                        rows.push(vec![xn.into(), n.to_string(), yn.into(), p.to_string(), String::new()]);
                    }
                }
            }
        }
        if opts.record_brackets {
            report.table(Table {
                name: "brackets".into(),
                header: ["left", "n", "right", "product", "in_sections"].map(String::from).to_vec(),
                rows,
            });
        }
    }
    if opts.symbol_check {
        let fibre = cdr_fibre(opts.n);
        let expected: BTreeMap<&str, String> =
            eight_invariants(&fibre, opts.n).into_iter().map(|(k, p)| (k, p.to_string())).collect();
        let nn = opts.n as u32;
        let filtration: BTreeMap<&str, (u32, u32)> = [
            ("Q", (1, 1)),
            ("L", (1, 1)),
            ("J", (1, 0)),
            ("G", (1, 0)),
            ("D", (nn, 0)),
            ("E", (0, 0)),
            ("B", (nn, 1)),
            ("C", (0, 0)),
        ]
        .into_iter()
        .collect();
        let mut images = BTreeMap::new();
        for (name, x) in s.named() {
            let sym = symbol_map(x, &fibre)?;
            let ok = sym.image == expected[name] && (sym.n, sym.s) == filtration[name];
            report.check(
                format!("symbol.{name}"),
                ok,
                (!ok).then(|| format!("({}, {}) {} vs {}", sym.n, sym.s, sym.image, expected[name])),
            );
            images.insert(name, sym);
        }
        report.result("symbols", images);
    }
    if let Some(bound) = &opts.automorphism_bound {
        let sigma = automorphism_check(&engine, &s, &involution_scales(), bound);
        report.check("involution", sigma.is_empty(), sigma.first().map(|f| format!("{}_({}){}", f.left, f.n, f.right)));
        let mut mutant: BTreeMap<String, Rational> = SECTION_NAMES.iter().map(|k| (k.to_string(), int(1))).collect();
        mutant.insert("D".into(), int(-1));
        let bad = automorphism_check(&engine, &s, &mutant, bound);
        report.check("single_negation_rejected", !bad.is_empty(), None);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockOptions {
    pub n: usize,
    pub gram: bool,
    pub adjoints: bool,
    /// Weight bound, a multiple of 1/2.
    pub max_weight: Rational,
    pub rules: Vec<String>,
}

fn twice(w: &Rational) -> Result<i64> {
    let t = w * int(2);
    if !t.is_integer() || t < Rational::zero() {
        return Err(Error::Parse(format!("weight bound {} is not a non-negative half-integer", fmt_rational(w))));
    }
    t.to_integer().try_into().map_err(|_| Error::Parse("weight bound too large".into()))
}

pub fn run_fock(opts: &FockOptions) -> Result<Report> {
    if opts.n == 0 {
        return Err(Error::InvalidRank(0, "rank must be positive"));
    }
    let top = twice(&opts.max_weight)?;
    let engine = Engine::new();
    let s = standard_sections(opts.n, &engine);
    let mut report = Report::new("fock");
    report.result("n", opts.n);
    report.result("max_weight", fmt_rational(&opts.max_weight));
    if opts.gram {
        let mut rows = Vec::new();
        let mut all = Vec::new();
        for tw in 0..=top {
            for g in gram_matrices(opts.n as u32, tw) {
                report.check(format!("gram.{}.{:?}", g.weight, g.sector), g.positive_definite, g.minors.as_ref().map(|m| m.join(" ")));
                rows.push(vec![g.weight.clone(), format!("{}/{}", g.sector.0, g.sector.1), g.size.to_string(), g.positive_definite.to_string()]);
                all.push(g);
            }
            let sg = section_gram(&engine, &s, tw)?;
            report.check(format!("section_gram.{}", sg.weight), sg.positive_definite, sg.minors.as_ref().map(|m| m.join(" ")));
            rows.push(vec![sg.weight.clone(), "sections".into(), sg.size.to_string(), sg.positive_definite.to_string()]);
            all.push(sg);
        }
        report.table(Table {
            name: "gram".into(),
            header: ["weight", "sector", "size", "positive_definite"].map(String::from).to_vec(),
            rows,
        });
        report.result("gram", all);
    }
    if opts.adjoints {
        let mut rules = standard_rules(opts.n);
        for r in &opts.rules {
            override_rule(&mut rules, r)?;
        }
        let mut results = Vec::new();
        for rule in &rules {
            let r = adjoint_check(&engine, &s, rule, top)?;
            report.check(
                format!("adjoint.{}", rule.field),
                r.holds,
                r.witness.as_ref().map(|w| format!("n={} A={} B={} lhs={} rhs={}", w.n, w.left, w.right, w.lhs, w.rhs)),
            );
            results.push(r);
        }
        report.result("adjoints", results);
        report.result(
            "boson_zero_modes",
            "beta_0 and gamma_0 act by zero on the subalgebra; their adjoints are not fixed by the form",
        );
    }
    Ok(report)
}

/// Engine identities on seeded random words.
pub fn run_samples(seed: u64, count: usize) -> Report {
    let engine = Engine::new();
    let mut rng = sampling::rng(seed);
    let mut report = Report::new("samples");
    let (mut skew, mut deriv, mut comm) = (None, None, None);
    for i in 0..count {
        let a = sampling::random_word(&mut rng, 2, 3, 2);
        let b = sampling::random_word(&mut rng, 2, 3, 2);
        let c = sampling::random_word(&mut rng, 2, 2, 1);
        let n = (i % 5) as i64 - 2;
        if skew.is_none() && !sampling::skew_symmetry_defect(&engine, &a, n, &b).is_zero() {
            skew = Some(format!("a={a} n={n} b={b}"));
        }
        let (d1, d2) = sampling::derivative_defects(&engine, &a, n, &b);
        if deriv.is_none() && !(d1.is_zero() && d2.is_zero()) {
            deriv = Some(format!("a={a} n={n} b={b}"));
        }
        if comm.is_none() && !sampling::commutator_defect(&engine, &a, n + 1, &b, n - 1, &c).is_zero() {
            comm = Some(format!("a={a} b={b} c={c}"));
        }
    }
    report.result("seed", seed);
    report.result("samples", count);
    report.check("skew_symmetry", skew.is_none(), skew);
    report.check("derivative_axioms", deriv.is_none(), deriv);
    report.check("commutator_formula", comm.is_none(), comm);
    report
}

/// All suites at their default windows for rank `n`.
pub fn run_report(n: usize, seed: u64) -> Result<Report> {
    let kind = LieKind::Sl(n);
    let mut report = Report::new("report");
    for m in 1..=3 {
        let mut o = InvariantsOptions::new(RingSource::TjBundle);
        o.algebra = Some(kind);
        o.jet = Some(m);
        o.degrees.insert("e".into(), 1);
        o.weights = Some((1, m as i64 + 2));
        o.expect_total = Some(m as usize);
        o.minimal = true;
        report.merge(&format!("tj_bundle_m{m}"), run_invariants(&o)?);
    }
    let mut o = InvariantsOptions::new(RingSource::CdrFibre);
    o.algebra = Some(kind);
    o.check_eight = true;
    o.gap_bound = Some(4);
    report.merge("cdr_fibre", run_invariants(&o)?);
    report.merge("vertex", run_vertex(&VertexOptions { record_brackets: false, ..VertexOptions::all(n) })?);
    report.merge(
        "fock",
        run_fock(&FockOptions { n, gram: true, adjoints: true, max_weight: int(2), rules: Vec::new() })?,
    );
    report.merge("samples", run_samples(seed, 50));
    Ok(report)
}

//! The verification suite behind the acceptance criteria and `verify-paper`.
//! Each criterion collects named checks; a criterion passes when none of its
//! checks fails. Known disagreements with printed formulas are reported as
//! `Discrepancy`, which does not fail a criterion.

use crate::arith::{show_q, q, qf, Poly, Q};
use crate::families::{self, make_p_r, make_x, make_x_sw, make_y, make_y_sw, FamilyParameters};
use crate::isogeny::{self, DualCofactor};
use crate::kummer::{self, GenusTwoCurve};
use crate::lattice::{self, LatticeName, Sign};
use crate::monodromy;
use crate::periods::{self, theta::Model, CheckSummary};
use crate::sampling::{self, SampleRng};
use crate::weierstrass::{classify_fibers, FiberConfiguration, Kodaira, Locus};
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Discrepancy,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, detail: Value) -> Self {
        Check { name: name.into(), verdict: Verdict::from_bool(ok), detail }
    }

    /// A printed formula that the computation contradicts.
    pub fn discrepancy(name: impl Into<String>, detail: Value) -> Self {
        Check { name: name.into(), verdict: Verdict::Discrepancy, detail }
    }

    pub fn error(name: impl Into<String>, e: impl std::fmt::Display) -> Self {
        Check::new(name, false, json!({ "error": e.to_string() }))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub title: String,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub budget: Duration,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail).collect()
    }

    pub fn discrepancies(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Discrepancy).collect()
    }

    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    /// One line: `[PASS] 4 monodromy ... (0.01 s, budget 0.1 s)`.
    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{status}] criterion {} {}: {} checks, {} failed, {} discrepancies ({:.2} s, budget {} s)",
            self.id,
            self.title,
            self.checks.len(),
            self.failures().len(),
            self.discrepancies().len(),
            self.elapsed.as_secs_f64(),
            self.budget.as_secs_f64()
        );
        for c in self.failures() {
            s.push_str(&format!("\n    failed: {}", c.name));
        }
        s
    }
}

fn timed(id: u8, title: &str, budget_ms: u64, body: impl FnOnce() -> Vec<Check>) -> Criterion {
    let start = Instant::now();
    let checks = body();
    Criterion {
        id,
        title: title.into(),
        checks,
        elapsed: start.elapsed(),
        budget: Duration::from_millis(budget_ms),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub precision: u32,
    pub fiber_triples: usize,
    pub base_change_triples: usize,
    pub theta_samples: usize,
    pub jmap_samples: usize,
    pub ratio_samples: usize,
    pub yukawa_ratio_samples: usize,
    pub kummer_sextuples: usize,
    pub pencil_sextuples: usize,
    pub degeneration_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            precision: 192,
            fiber_triples: 10,
            base_change_triples: 100,
            theta_samples: 50,
            jmap_samples: 50,
            ratio_samples: 20,
            yukawa_ratio_samples: 5,
            kummer_sextuples: 100,
            pencil_sextuples: 20,
            degeneration_samples: 5,
        }
    }
}

/// Genericity tested from `p` and `r` alone: `p_+` and `p_-` squarefree and
/// `p(c) != 0`. Independent of the fiber classifier.
pub fn generic_by_discriminants(params: &FamilyParameters) -> bool {
    let pr = make_p_r(params);
    let squarefree = |f: &Poly| f.gcd(&f.derivative()).is_constant();
    squarefree(&pr.p_plus) && squarefree(&pr.p_minus) && !pr.p.eval(&params.c).is_zero()
}

fn sample_generic(rng: &mut SampleRng) -> FamilyParameters {
    loop {
        let p = sampling::parameters(rng);
        if generic_by_discriminants(&p) {
            return p;
        }
    }
}

/// A row of a fiber table: label, points, orders, type, root lattice.
pub type TableRow = (String, u32, [u32; 3], String, String);

fn row(label: &str, points: u32, orders: [u32; 3], kodaira: &str, roots: &str) -> TableRow {
    (label.into(), points, orders, kodaira.into(), roots.into())
}

pub fn expected_y_table() -> Vec<TableRow> {
    vec![
        row("r = 0", 1, [0, 0, 4], "I4", "A3"),
        row("p+ = 0", 3, [0, 0, 2], "I2", "A1"),
        row("p- = 0", 3, [0, 0, 2], "I2", "A1"),
        row("t = inf", 1, [2, 3, 8], "I2*", "D6"),
    ]
}

pub fn expected_x_table() -> Vec<TableRow> {
    vec![
        row("r = 0", 1, [0, 0, 8], "I8", "A7"),
        row("p+ = 0", 3, [0, 0, 1], "I1", "-"),
        row("p- = 0", 3, [0, 0, 1], "I1", "-"),
        row("t = inf", 1, [2, 3, 10], "I4*", "D8"),
    ]
}

pub fn expected_y_sw_table() -> Vec<TableRow> {
    vec![
        row("u = 1", 1, [0, 0, 2], "I2", "A1"),
        row("u = -1", 1, [0, 0, 2], "I2", "A1"),
        row("u = inf", 1, [2, 3, 8], "I2*", "D6"),
    ]
}

pub fn expected_x_sw_table() -> Vec<TableRow> {
    vec![
        row("u = 1", 1, [0, 0, 1], "I1", "-"),
        row("u = -1", 1, [0, 0, 1], "I1", "-"),
        row("u = inf", 1, [2, 3, 10], "I4*", "D8"),
    ]
}

pub fn table_rows(config: &FiberConfiguration, label: &dyn Fn(&Locus) -> String) -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = config
        .fibers
        .iter()
        .map(|f| (label(&f.locus), f.locus.points(), f.orders, f.kodaira.tag(), f.roots().to_string()))
        .collect();
    rows.sort();
    rows
}

pub fn sw_label(locus: &Locus) -> String {
    match locus {
        Locus::Infinity => "u = inf".into(),
        Locus::Finite(f) if f.degree() == Some(1) => {
            let root = -f.coeff(0) / f.coeff(1);
            format!("u = {}", show_q(&root))
        }
        Locus::Finite(f) => format!("{} = 0", f.to_string_var("u")),
    }
}

/// Classified and refined rows for `Y` (or `X`) at `params`.
pub fn family_rows(params: &FamilyParameters, x_side: bool) -> Result<(FiberConfiguration, Vec<TableRow>), String> {
    let pr = make_p_r(params);
    let w = if x_side { make_x(params) } else { make_y(params) };
    let cfg = classify_fibers(&w).map_err(|e| e.to_string())?.refine(&pr.splitters());
    let rows = table_rows(&cfg, &|l| pr.label(l));
    Ok((cfg, rows))
}

fn sorted(mut v: Vec<TableRow>) -> Vec<TableRow> {
    v.sort();
    v
}

pub fn criterion_fiber_tables(cfg: &SuiteConfig) -> Criterion {
    timed(1, "fiber tables", 1000, || {
        let mut rng = sampling::rng(cfg.seed);
        let mut checks = Vec::new();
        for _ in 0..cfg.fiber_triples {
            let params = sample_generic(&mut rng);
            for (x_side, expected) in [(false, expected_y_table()), (true, expected_x_table())] {
                let name = format!("{} at (a,b,c) = ({})", if x_side { "X" } else { "Y" }, show_params(&params));
                match family_rows(&params, x_side) {
                    Ok((c, rows)) => {
                        let ok = rows == sorted(expected) && c.euler_sum() == 24;
                        checks.push(Check::new(name, ok, json!({ "summary": c.summary(), "euler": c.euler_sum() })));
                    }
                    Err(e) => checks.push(Check::error(name, e)),
                }
            }
        }
        for (name, w, expected) in [
            ("Y_SW", make_y_sw(), expected_y_sw_table()),
            ("X_SW", make_x_sw(), expected_x_sw_table()),
        ] {
            let splitters = [Poly::from_ints(&[-1, 1]), Poly::from_ints(&[1, 1])];
            match classify_fibers(&w).map(|c| c.refine(&splitters)) {
                Ok(c) => {
                    let ok = table_rows(&c, &sw_label) == sorted(expected) && c.euler_sum() == 12;
                    checks.push(Check::new(name, ok, json!({ "summary": c.summary(), "euler": c.euler_sum() })));
                }
                Err(e) => checks.push(Check::error(name, e)),
            }
        }
        checks
    })
}

fn show_params(p: &FamilyParameters) -> String {
    format!("{}, {}, {}", show_q(&p.a), show_q(&p.b), show_q(&p.c))
}

fn infinity_split(b: &families::BaseChange) -> Vec<(u32, String)> {
    b.ledger
        .iter()
        .find(|e| e.source_locus == Locus::Infinity)
        .map(|e| e.preimages.iter().map(|p| (p.ramification, p.observed.clone())).collect())
        .unwrap_or_default()
}

pub fn criterion_base_change(cfg: &SuiteConfig) -> Criterion {
    timed(2, "base-change functoriality", 5000, || {
        let mut rng = sampling::rng(cfg.seed.wrapping_add(1));
        let mut checks = Vec::new();
        let mut failures = Vec::new();
        let mut ledger_ok = 0usize;
        for _ in 0..cfg.base_change_triples {
            let params = sample_generic(&mut rng);
            let pr = make_p_r(&params);
            let result = (|| -> Result<bool, String> {
                let by = families::base_change(&make_y_sw(), &pr.p, &pr.r).map_err(|e| e.to_string())?;
                let bx = families::base_change(&make_x_sw(), &pr.p, &pr.r).map_err(|e| e.to_string())?;
                let equal = by.fibration == make_y(&params) && bx.fibration == make_x(&params);
                let split = infinity_split(&by) == vec![(2, "I4".to_string()), (1, "I2*".to_string())]
                    && infinity_split(&bx) == vec![(2, "I8".to_string()), (1, "I4*".to_string())];
                let consistent = by.ledger_consistent() && bx.ledger_consistent();
                Ok(equal && split && consistent)
            })();
            match result {
                Ok(true) => ledger_ok += 1,
                Ok(false) => failures.push(show_params(&params)),
                Err(e) => failures.push(format!("{}: {e}", show_params(&params))),
            }
        }
        checks.push(Check::new(
            format!("pullback equals family and ledger splits I2* -> I2* + I4, I4* -> I4* + I8 on {} triples", cfg.base_change_triples),
            failures.is_empty(),
            json!({ "passed": ledger_ok, "failures": failures }),
        ));
        checks.push(Check::new(
            "functoriality as a polynomial identity in (a, b, c, t)",
            families::symbolic::functoriality_identity(),
            Value::Null,
        ));
        checks
    })
}

pub fn criterion_isogeny() -> Criterion {
    timed(3, "isogeny identities", 10_000, || {
        let mut checks = Vec::new();
        let mut verify = |name: &str, map: &isogeny::IsogenyMap| match isogeny::verify_isogeny(map) {
            Ok(v) => checks.push(Check::new(name, v.holds, json!(v))),
            Err(e) => checks.push(Check::error(name, e)),
        };
        verify("j_SW maps the X_SW fiber to the Y_SW fiber", &isogeny::j_sw());
        verify("j'_SW with cofactor x^2 - 4u^2 + 4", &isogeny::j_dual_sw(DualCofactor::Forced));
        match isogeny::derived_k3_maps() {
            Ok((j, jd)) => {
                verify("j pulled back to the K3 families", &j);
                verify("j' pulled back to the K3 families", &jd);
                match isogeny::duality_check(&j, &jd) {
                    Ok(v) => checks.push(Check::new("K3: j' o j = [2] against the doubling oracle", v.holds(), json!(v))),
                    Err(e) => checks.push(Check::error("K3 duality", e)),
                }
            }
            Err(e) => checks.push(Check::error("derived K3 maps", e)),
        }
        match isogeny::duality_check(&isogeny::j_sw(), &isogeny::j_dual_sw(DualCofactor::Forced)) {
            Ok(v) => checks.push(Check::new("SW: j' o j = [2] against the doubling oracle", v.holds(), json!(v))),
            Err(e) => checks.push(Check::error("SW duality", e)),
        }
        let sigma = isogeny::sigma_hat_symbolic();
        checks.push(Check::new(
            "(X, Y) = (-p/6, 0) is 2-torsion on X_{a,b,c} identically",
            sigma == isogeny::SectionStatus::TwoTorsion,
            json!(sigma),
        ));

        // printed formulas that the computation contradicts
        let printed = isogeny::verify_isogeny(&isogeny::j_dual_sw(DualCofactor::Printed));
        let printed_holds = printed.as_ref().map(|v| v.holds).unwrap_or(false);
        let name = "printed j'_SW cofactor x^2 - u^2 + 4";
        checks.push(if printed_holds {
            Check::new(name, true, json!({ "holds": true }))
        } else {
            Check::discrepancy(name, json!({ "holds": false, "forced": "x^2 - 4u^2 + 4" }))
        });
        for (label, cof) in isogeny::k3_cofactor_candidates() {
            let map = isogeny::k3_dual_with_cofactor(&label, cof);
            let holds = isogeny::verify_isogeny(&map).map(|v| v.holds).unwrap_or(false);
            let name = format!("K3 dual cofactor {label}");
            checks.push(if label.starts_with("x^2 - 4P^2") {
                Check::new(name, holds, json!({ "holds": holds }))
            } else if holds {
                Check::new(name, true, json!({ "holds": true }))
            } else {
                Check::discrepancy(name, json!({ "holds": false, "forced": "x^2 - 4P^2 + 4R^4" }))
            });
        }
        checks
    })
}

pub fn criterion_monodromy() -> Criterion {
    timed(4, "monodromy", 100, || match monodromy::verify_all() {
        Ok(r) => {
            let mut checks: Vec<Check> = r
                .matrices
                .iter()
                .map(|m| Check::new(format!("word for {}", m.label), true, json!(m)))
                .collect();
            for rel in &r.relations {
                checks.push(Check::new(rel.name.clone(), rel.holds, json!(rel)));
            }
            checks.push(Check::new("M_0 = M_inf^2 (unhatted)", r.zero_is_square_of_infinity[0], Value::Null));
            checks.push(Check::new("M_0 = M_inf^2 (hatted)", r.zero_is_square_of_infinity[1], Value::Null));
            checks
        }
        Err(e) => vec![Check::error("monodromy", e)],
    })
}

fn summary_check(name: &str, r: Result<CheckSummary, periods::PeriodError>) -> Check {
    match r {
        Ok(s) => Check::new(
            name,
            s.passed,
            json!({ "samples": s.samples.len(), "max_error": s.max_error, "tolerance": s.tolerance }),
        ),
        Err(e) => Check::error(name, e),
    }
}

pub fn criterion_periods(cfg: &SuiteConfig) -> Criterion {
    timed(5, "periods and Yukawa couplings", 60_000, || {
        let prec = cfg.precision;
        let mut rng = sampling::rng(cfg.seed.wrapping_add(5));
        let n = cfg.theta_samples;
        let mut checks = vec![
            summary_check("Jacobi identity", periods::check_theta(&mut rng, n, prec, 1e-20)),
            summary_check("u(tau^) for Nf0 equals u(tau^/2) for Nf2", periods::check_ucoord(&mut rng, n, prec, 1e-20)),
            summary_check("fiber j equals lattice j (Nf0)", periods::check_jmap(&mut rng, Model::Nf0, cfg.jmap_samples, prec, 1e-20)),
            summary_check("fiber j equals lattice j (Nf2)", periods::check_jmap(&mut rng, Model::Nf2, cfg.jmap_samples, prec, 1e-20)),
            summary_check("period ratio of the K3 fiber is tau", periods::check_ratio(&mut rng, cfg.ratio_samples, prec, 1e-10)),
            summary_check(
                "Yukawa pullback law (hatted and unhatted)",
                periods::check_yukawa_pullback(&mut rng, cfg.ratio_samples, prec, 1e-10),
            ),
        ];
        let expected = qf(1, 2);
        let r = periods::check_yukawa_ratio(&mut rng, cfg.yukawa_ratio_samples, prec, &expected, 1e-15);
        checks.push(match r {
            Ok(s) => {
                let observed = s.samples.first().and_then(|v| v.get("ratio").cloned()).unwrap_or(Value::Null);
                Check::new(
                    "Xi^_SW / Xi_SW = 1/2",
                    s.passed,
                    json!({ "max_error": s.max_error, "observed_ratio": observed, "expected": "1/2" }),
                )
            }
            Err(e) => Check::error("Xi^_SW / Xi_SW = 1/2", e),
        });
        checks
    })
}

fn sample_curve(rng: &mut SampleRng) -> GenusTwoCurve {
    loop {
        let mut th: [Q; 6] = Default::default();
        for t in th.iter_mut() {
            let den = rng.gen_range(1..=6);
            *t = sampling::rational(rng, 12, den);
        }
        if let Ok(c) = GenusTwoCurve::new(th, q(1)) {
            return c;
        }
    }
}

pub fn criterion_kummer(cfg: &SuiteConfig) -> Criterion {
    timed(6, "Kummer end-to-end", 30_000, || {
        let mut rng = sampling::rng(cfg.seed.wrapping_add(6));
        let mut constraints_ok = 0;
        let mut identities_ok = 0;
        let mut loci_ok = 0;
        let mut pencil_ok = 0;
        let mut pencil_run = 0;
        let mut failures = Vec::new();
        let mut degenerate = Vec::new();
        let mut done = 0;
        while done < cfg.kummer_sextuples {
            let c = sample_curve(&mut rng);
            let theta: Vec<String> = c.theta.iter().map(show_q).collect();
            let roots = match kummer::roots_from_theta(&c) {
                Ok(r) => r,
                Err(e) => {
                    degenerate.push(json!({ "theta": theta, "reason": e.to_string() }));
                    continue;
                }
            };
            done += 1;
            let cons = roots.constraints().iter().all(|&b| b);
            constraints_ok += cons as usize;
            let (ids, loci) = match kummer::abc_from_roots(&roots) {
                Ok((params, shifted)) => {
                    let ids = kummer::shifted_identities(&roots, &shifted).iter().all(|&b| b);
                    let loci = matches!(kummer::i2_loci_check(&roots, &params), Ok((6, true)));
                    (ids, loci)
                }
                Err(_) => (false, false),
            };
            identities_ok += ids as usize;
            loci_ok += loci as usize;
            let mut pencil = true;
            if pencil_run < cfg.pencil_sextuples {
                pencil_run += 1;
                pencil = kummer::pencil_roots(&c).map(|p| p.roots == roots).unwrap_or(false);
                pencil_ok += pencil as usize;
            }
            if !(cons && ids && loci && pencil) {
                failures.push(json!({ "theta": theta, "constraints": cons, "identities": ids, "i2_loci": loci, "pencil": pencil }));
            }
        }
        let n = cfg.kummer_sextuples;
        let mut checks = vec![
            Check::new(format!("constraints hold exactly on {n} sextuples"), constraints_ok == n, json!({ "passed": constraints_ok })),
            Check::new(
                "4 prod(r - r_2i) = p - r^2 and 4 prod(r - r_2i-1) = p + r^2",
                identities_ok == n,
                json!({ "passed": identities_ok }),
            ),
            Check::new("six I2 loci divide prod(r - r_i)", loci_ok == n, json!({ "passed": loci_ok })),
            Check::new(
                format!("conic-pencil oracle equals closed form on {pencil_run} sextuples"),
                pencil_ok == pencil_run && pencil_run >= cfg.pencil_sextuples.min(n),
                json!({ "passed": pencil_ok }),
            ),
        ];
        if !failures.is_empty() {
            checks.push(Check::new("failing sextuples", false, json!(failures)));
        }
        let golden = GenusTwoCurve::from_ints([0, 1, 3, 7, 11, 23]);
        match golden.and_then(|c| kummer::verify_end_to_end(&c)) {
            Ok(l) => {
                checks.push(Check::new("ledger for theta = (0, 1, 3, 7, 11, 23)", l.all_hold(), json!(l)));
                let name = "printed r6 numerator";
                checks.push(if l.printed_list_constraints.iter().all(|&b| b) {
                    Check::new(name, true, Value::Null)
                } else {
                    Check::discrepancy(name, json!({ "printed_list_constraints": l.printed_list_constraints }))
                });
                if l.r1_r2_swapped {
                    checks.push(Check::discrepancy("r1 and r2 exchanged relative to the pencil oracle", Value::Null));
                }
            }
            Err(e) => checks.push(Check::error("golden ledger", e)),
        }
        if !degenerate.is_empty() {
            checks.push(Check::new("skipped degenerate sextuples", true, json!(degenerate)));
        }
        checks
    })
}

pub fn criterion_lattice() -> Criterion {
    timed(7, "lattice appendix", 10_000, || {
        let mut checks = Vec::new();
        let mut run = |name: &str, f: &dyn Fn() -> Result<(bool, Value), lattice::LatticeError>| match f() {
            Ok((ok, detail)) => checks.push(Check::new(name, ok, detail)),
            Err(e) => checks.push(Check::error(name, e)),
        };
        run("D(D16) = (Z/2)^2 with isotropic spinor, glued lattice even unimodular", &|| {
            let (l, gens) = lattice::d_spinor_vector(16, Sign::Plus)?;
            let g = lattice::discriminant_group(&l)?;
            let spinor = lattice::element_of(&g, &l, &gens[0])?;
            let q_spinor = lattice::disc_form(&l, &g, &spinor)?;
            let (m, rep) = lattice::overlattice_report(&l, &g, &[spinor])?;
            let fm = lattice::form_matrix(&l, &gens);
            let ok = g.divisors == vec![2.into(), 2.into()]
                && q_spinor.is_zero()
                && m.is_even()
                && rep.det.trim_start_matches('-') == "1"
                && rep.rank == 16;
            Ok((ok, json!({ "divisors": ["2", "2"], "form_matrix": fm, "overlattice": rep })))
        });
        run("D(D8 + A7) = (Z/2)^2 + Z/8, glue by spinor gives (Z/8, 1/8)", &|| {
            let (d8, gens) = lattice::d_spinor_vector(8, Sign::Minus)?;
            let l = d8.direct_sum(&lattice::named_gram(LatticeName::A(7), Sign::Minus)?);
            let g = lattice::discriminant_group(&l)?;
            let mut divisors: Vec<String> = g.divisors.iter().map(|d| d.to_string()).collect();
            divisors.sort();
            let mut s = gens[0].clone();
            s.extend(std::iter::repeat_n(Q::zero(), 7));
            let v = lattice::element_of(&g, &l, &s)?;
            let isotropic = lattice::disc_form(&l, &g, &v)?.is_zero();
            let (m, rep) = lattice::overlattice_report(&l, &g, &[v])?;
            let gm = lattice::discriminant_group(&m)?;
            let mut attained = false;
            for e in gm.elements()? {
                attained |= lattice::disc_form(&m, &gm, &e)?.value == qf(1, 8);
            }
            let ok = divisors == ["2", "2", "8"] && isotropic && rep.discriminant_divisors == ["8"] && attained && rep.matches_perp_quotient;
            Ok((ok, json!({ "divisors": divisors, "overlattice": rep, "one_eighth_attained": attained })))
        });
        run("glue of D8 by its spinor is E8", &|| {
            let (l, gens) = lattice::d_spinor_vector(8, Sign::Plus)?;
            let g = lattice::discriminant_group(&l)?;
            let spinor = lattice::element_of(&g, &l, &gens[0])?;
            let (m, _) = lattice::overlattice_report(&l, &g, &[spinor])?;
            let cert = lattice::e8_certificate(&m);
            Ok((cert.holds(), json!(cert)))
        });
        run("Neron-Severi determinants and the square-class remark", &|| {
            let r = lattice::ns_determinant_crosscheck()?;
            Ok((r.all_hold(), json!(r)))
        });
        checks
    })
}

fn sample_nonzero(rng: &mut SampleRng) -> Q {
    loop {
        let den = rng.gen_range(1..=7);
        let x = sampling::rational(rng, 5, den);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn criterion_degenerations(cfg: &SuiteConfig) -> Criterion {
    timed(8, "degenerations", 5000, || {
        let mut rng = sampling::rng(cfg.seed.wrapping_add(8));
        let squarefree = |f: &Poly| f.gcd(&f.derivative()).is_constant();
        let mut checks = Vec::new();
        let mut done = 0;
        while done < cfg.degeneration_samples {
            let (at, bt) = (sample_nonzero(&mut rng), sample_nonzero(&mut rng));
            let pr = families::tilde_p_r(&at, &bt, &Q::zero());
            if !(squarefree(&pr.p_plus) && squarefree(&pr.p_minus)) {
                continue;
            }
            done += 1;
            let label = format!("(a~, b~) = ({}, {})", show_q(&at), show_q(&bt));
            let cy = classify_fibers(&families::make_y_tilde(&at, &bt, &Q::zero()));
            let cx = classify_fibers(&families::make_x_tilde(&at, &bt, &Q::zero()));
            match (cy, cx) {
                (Ok(cy), Ok(cx)) => {
                    let y_ok = cy.has_types(&[(Kodaira::IStar(6), 1), (Kodaira::I(2), 6)]);
                    let x_ok = cx.has_types(&[(Kodaira::IStar(12), 1), (Kodaira::I(1), 6)]);
                    checks.push(Check::new(format!("c~ = 0 at {label}"), y_ok && x_ok, json!({ "Y": cy.summary(), "X": cx.summary() })));
                }
                (Err(e), _) | (_, Err(e)) => checks.push(Check::error(format!("c~ = 0 at {label}"), e)),
            }
        }
        done = 0;
        while done < cfg.degeneration_samples {
            let (a, c) = (sample_nonzero(&mut rng), sample_nonzero(&mut rng));
            let params = FamilyParameters::new(a.clone(), families::coincident_b(&a, &c), c.clone());
            let pr = make_p_r(&params);
            let lin = Poly::linear_root(&c);
            let (Some(qp), Some(qm)) = (pr.p_plus.exact_div(&lin), pr.p_minus.exact_div(&lin)) else {
                continue;
            };
            // the rest of p_+ and p_- must stay away from r = 0 and from each other
            if !(squarefree(&qp) && squarefree(&qm) && !qp.eval(&c).is_zero() && !qm.eval(&c).is_zero()) {
                continue;
            }
            done += 1;
            let label = format!("c at a root of p, (a, c) = ({}, {})", show_q(&a), show_q(&c));
            match families::coincident_root_config(&params) {
                Ok(cy) => {
                    let ok = cy.has_types(&[(Kodaira::IStar(2), 2), (Kodaira::I(2), 4)]);
                    checks.push(Check::new(label, ok, json!({ "Y": cy.summary() })));
                }
                Err(e) => checks.push(Check::error(label, e)),
            }
        }
        checks
    })
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<Criterion> {
    vec![
        criterion_fiber_tables(cfg),
        criterion_base_change(cfg),
        criterion_isogeny(),
        criterion_monodromy(),
        criterion_periods(cfg),
        criterion_kummer(cfg),
        criterion_lattice(),
        criterion_degenerations(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genericity_agrees_with_classifier() {
        let mut rng = sampling::rng(1);
        for _ in 0..20 {
            let p = sampling::parameters(&mut rng);
            assert_eq!(generic_by_discriminants(&p), p.is_generic(), "{p:?}");
        }
        assert!(!generic_by_discriminants(&FamilyParameters::ints(0, 0, 0)));
    }

    #[test]
    fn sw_labels() {
        assert_eq!(sw_label(&Locus::Finite(Poly::from_ints(&[1, 1]))), "u = -1");
        assert_eq!(sw_label(&Locus::Infinity), "u = inf");
    }

    #[test]
    fn exact_criteria_pass() {
        let cfg = SuiteConfig { fiber_triples: 2, base_change_triples: 3, degeneration_samples: 2, ..Default::default() };
        for c in [criterion_fiber_tables(&cfg), criterion_monodromy(), criterion_degenerations(&cfg)] {
            assert!(c.passed(), "{}", c.summary_line());
        }
        assert!(criterion_base_change(&cfg).passed());
    }
}

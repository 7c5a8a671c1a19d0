//! One runner per command. Each returns the verdicts, the table blocks and the
//! command-specific data of a report.

use crate::config::{Command, Emit, LatticeCase, Model, PeriodCheck, RunConfig, Which};
use crate::report::{Report, TableBlock};
use anyhow::{bail, Context, Result};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use swk3::arith::{q, qf, show_q, Poly, Q};
use swk3::families::{self, make_p_r, FamilyParameters};
use swk3::isogeny::{self, DualCofactor, IsogenyMap};
use swk3::kummer::{self, GenusTwoCurve};
use swk3::lattice::{self, IntegerLattice, LatticeName, Sign};
use swk3::monodromy;
use swk3::periods::{self, theta, CheckSummary};
use swk3::sampling;
use swk3::suite::{self, Check, SuiteConfig, TableRow};
use swk3::weierstrass::{classify_fibers, render_table, FiberConfiguration, WeierstrassFibration, INF};

type Parts = (Vec<Check>, Vec<TableBlock>, Value);

pub fn run(cfg: &RunConfig) -> Result<Report> {
    let (verdicts, tables, data) = match cfg.command {
        Command::Family => family(cfg),
        Command::Basechange => basechange(cfg),
        Command::Isogeny => isogeny_cmd(cfg),
        Command::Monodromy => monodromy_cmd(),
        Command::Periods => periods_cmd(cfg),
        Command::Kummer => kummer_cmd(cfg),
        Command::Lattice => lattice_cmd(cfg),
        Command::VerifyPaper => verify_paper(cfg),
    }?;
    Ok(Report::new(cfg, verdicts, tables, data))
}

fn rows_table(rows: &[TableRow]) -> String {
    let header = ["locus", "number of points", "nu(g2)", "nu(g3)", "nu(Delta)", "Kodaira type", "W_root"];
    let mut out: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for (label, points, orders, kodaira, roots) in rows {
        let o = |x: u32| if x == INF { "inf".to_string() } else { x.to_string() };
        out.push(vec![
            label.clone(),
            points.to_string(),
            o(orders[0]),
            o(orders[1]),
            o(orders[2]),
            kodaira.clone(),
            roots.clone(),
        ]);
    }
    render_table(&out)
}

fn fibration_json(w: &WeierstrassFibration) -> Value {
    json!({ "height": w.height, "g2": w.g2, "g3": w.g3, "discriminant": w.discriminant() })
}

fn model_name(m: Model) -> &'static str {
    match m {
        Model::X => "X",
        Model::Y => "Y",
        Model::XSw => "X_SW",
        Model::YSw => "Y_SW",
    }
}

struct Classified {
    config: FiberConfiguration,
    rows: Vec<TableRow>,
    expected: Vec<TableRow>,
    fibration: WeierstrassFibration,
}

fn classify_model(model: Model, params: &FamilyParameters) -> Result<Classified> {
    let sw_splitters = [Poly::from_ints(&[-1, 1]), Poly::from_ints(&[1, 1])];
    let (fibration, config, rows, expected) = match model {
        Model::X | Model::Y => {
            let x_side = model == Model::X;
            let (config, rows) = suite::family_rows(params, x_side).map_err(anyhow::Error::msg)?;
            let w = if x_side { families::make_x(params) } else { families::make_y(params) };
            let expected = if x_side { suite::expected_x_table() } else { suite::expected_y_table() };
            (w, config, rows, expected)
        }
        Model::XSw | Model::YSw => {
            let (w, expected) = if model == Model::XSw {
                (families::make_x_sw(), suite::expected_x_sw_table())
            } else {
                (families::make_y_sw(), suite::expected_y_sw_table())
            };
            let config = classify_fibers(&w)?.refine(&sw_splitters);
            let rows = suite::table_rows(&config, &suite::sw_label);
            (w, config, rows, expected)
        }
    };
    let mut expected = expected;
    expected.sort();
    Ok(Classified { config, rows, expected, fibration })
}

fn family_checks(model: Model, params: &FamilyParameters, c: &Classified) -> Vec<Check> {
    let height = c.fibration.height;
    let mut checks = vec![Check::new(
        format!("{}: Euler numbers sum to 12 * {height}", model_name(model)),
        c.config.euler_sum() == 12 * height,
        json!({ "euler": c.config.euler_sum() }),
    )];
    let sw = matches!(model, Model::XSw | Model::YSw);
    if sw || suite::generic_by_discriminants(params) {
        checks.push(Check::new(
            format!("{}: computed rows equal the printed table", model_name(model)),
            c.rows == c.expected,
            json!({ "summary": c.config.summary() }),
        ));
    }
    checks
}

fn family(cfg: &RunConfig) -> Result<Parts> {
    let params = cfg.params();
    let c = classify_model(cfg.model, &params)?;
    let verdicts = family_checks(cfg.model, &params, &c);
    let sw = matches!(cfg.model, Model::XSw | Model::YSw);
    let generic = sw || suite::generic_by_discriminants(&params);
    let table = TableBlock {
        title: format!("{} fibers", model_name(cfg.model)),
        computed: rows_table(&c.rows),
        expected: generic.then(|| rows_table(&c.expected)),
    };
    let data = json!({
        "model": model_name(cfg.model),
        "params": if sw { Value::Null } else { json!(params) },
        "generic": generic,
        "fibration": fibration_json(&c.fibration),
        "configuration": c.config,
        "summary": c.config.summary(),
    });
    Ok((verdicts, vec![table], data))
}

fn basechange(cfg: &RunConfig) -> Result<Parts> {
    let params = cfg.params();
    let pr = make_p_r(&params);
    let (source, target) = match cfg.model {
        Model::Y => (families::make_y_sw(), families::make_y(&params)),
        Model::X => (families::make_x_sw(), families::make_x(&params)),
        other => bail!("basechange takes --model X or Y, not {}", model_name(other)),
    };
    let name = model_name(cfg.model);
    let b = families::base_change(&source, &pr.p, &pr.r)?;
    let verdicts = vec![
        Check::new(
            format!("pullback of {name}_SW along u = p/r^2, untwisted, equals {name}"),
            b.fibration == target,
            json!({ "twist": b.twist }),
        ),
        Check::new("fiber-splitting ledger matches ramification", b.ledger_consistent(), Value::Null),
    ];
    let mut rows = vec![["source fiber", "type", "preimage", "e", "predicted", "observed"].map(String::from).to_vec()];
    for entry in &b.ledger {
        for p in &entry.preimages {
            rows.push(vec![
                suite::sw_label(&entry.source_locus),
                entry.source_type.clone(),
                pr.label(&p.locus),
                p.ramification.to_string(),
                p.predicted.clone().unwrap_or_else(|| "-".into()),
                p.observed.clone(),
            ]);
        }
    }
    let table = TableBlock { title: format!("{name}_SW -> {name} fiber ledger"), computed: render_table(&rows), expected: None };
    let data = json!({
        "params": params,
        "p": pr.p,
        "r": pr.r,
        "pullback": fibration_json(&b.pullback),
        "twist": b.twist,
        "fibration": fibration_json(&b.fibration),
        "ledger": b.ledger,
    });
    Ok((verdicts, vec![table], data))
}

fn map_data(map: &IsogenyMap) -> Value {
    let mut v = map.to_json();
    v["differential_constant"] = json!(isogeny::differential_constant(map).map(|k| show_q(&k)));
    v
}

fn verify_map(checks: &mut Vec<Check>, name: &str, map: &IsogenyMap) {
    match isogeny::verify_isogeny(map) {
        Ok(v) => checks.push(Check::new(name, v.holds, json!(v))),
        Err(e) => checks.push(Check::error(name, e)),
    }
}

fn pair_checks(checks: &mut Vec<Check>, label: &str, j: &IsogenyMap, jd: &IsogenyMap) {
    match isogeny::duality_check(j, jd) {
        Ok(v) => checks.push(Check::new(format!("{label}: j' o j = [2]"), v.holds(), json!(v))),
        Err(e) => checks.push(Check::error(format!("{label}: j' o j = [2]"), e)),
    }
    let k = isogeny::differential_constant(j).zip(isogeny::differential_constant(jd)).map(|(a, b)| a * b);
    checks.push(Check::new(
        format!("{label}: differential constants multiply to 2"),
        k == Some(q(2)),
        json!(k.map(|k| show_q(&k))),
    ));
}

fn isogeny_cmd(cfg: &RunConfig) -> Result<Parts> {
    let mut checks = Vec::new();
    let mut maps = Vec::new();
    if matches!(cfg.which, Which::Sw | Which::All) {
        let (j, jd) = (isogeny::j_sw(), isogeny::j_dual_sw(DualCofactor::Forced));
        verify_map(&mut checks, "j_SW maps X_SW to Y_SW", &j);
        verify_map(&mut checks, "j'_SW with cofactor x^2 - 4u^2 + 4 maps Y_SW to X_SW", &jd);
        pair_checks(&mut checks, "SW", &j, &jd);
        let printed = isogeny::verify_isogeny(&isogeny::j_dual_sw(DualCofactor::Printed)).map(|v| v.holds).unwrap_or(false);
        let name = "printed j'_SW cofactor x^2 - u^2 + 4";
        checks.push(if printed {
            Check::new(name, true, Value::Null)
        } else {
            Check::discrepancy(name, json!({ "holds": false, "forced": "x^2 - 4u^2 + 4" }))
        });
        maps.push(map_data(&j));
        maps.push(map_data(&jd));
    }
    if matches!(cfg.which, Which::K3 | Which::All) {
        let (j, jd) = isogeny::derived_k3_maps().context("deriving the K3 maps")?;
        verify_map(&mut checks, "j on the K3 families", &j);
        verify_map(&mut checks, "j' on the K3 families", &jd);
        pair_checks(&mut checks, "K3", &j, &jd);
        let sigma = isogeny::sigma_hat_symbolic();
        checks.push(Check::new(
            "(X, Y) = (-p/6, 0) is 2-torsion on X_{a,b,c}",
            sigma == isogeny::SectionStatus::TwoTorsion,
            json!(sigma),
        ));
        for (label, cof) in isogeny::k3_cofactor_candidates() {
            let holds = isogeny::verify_isogeny(&isogeny::k3_dual_with_cofactor(&label, cof)).map(|v| v.holds).unwrap_or(false);
            let name = format!("K3 dual cofactor {label}");
            checks.push(if holds || label.starts_with("x^2 - 4P^2") {
                Check::new(name, holds, Value::Null)
            } else {
                Check::discrepancy(name, json!({ "holds": false, "forced": "x^2 - 4P^2 + 4R^4" }))
            });
        }
        maps.push(map_data(&j));
        maps.push(map_data(&jd));
    }
    Ok((checks, Vec::new(), json!({ "maps": maps })))
}

fn monodromy_cmd() -> Result<Parts> {
    let r = monodromy::verify_all()?;
    let mut checks: Vec<Check> = r.relations.iter().map(|rel| Check::new(rel.name.clone(), rel.holds, json!(rel))).collect();
    checks.push(Check::new("M_0 = M_inf^2 on the K3 family", r.zero_is_square_of_infinity[0], Value::Null));
    checks.push(Check::new("M^_0 = M^_inf^2 on the hatted K3 family", r.zero_is_square_of_infinity[1], Value::Null));
    let mut rows = vec![["matrix", "word", "entries"].map(String::from).to_vec()];
    for m in &r.matrices {
        let e = m.matrix.to_rows();
        rows.push(vec![m.label.clone(), m.word.clone(), format!("[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])]);
    }
    let table = TableBlock { title: "monodromy matrices".into(), computed: render_table(&rows), expected: None };
    Ok((checks, vec![table], json!(r)))
}

fn summary_check(name: &str, s: &CheckSummary) -> Check {
    Check::new(name, s.passed, json!({ "samples": s.samples.len(), "max_error": s.max_error, "tolerance": s.tolerance }))
}

fn periods_cmd(cfg: &RunConfig) -> Result<Parts> {
    periods::check_precision(cfg.precision)?;
    let mut rng = sampling::rng(cfg.seed);
    let (n, prec) = (cfg.samples, cfg.precision);
    let strict = cfg.tol.unwrap_or(1e-20);
    let loose = cfg.tol.unwrap_or(1e-10);
    let mut runs: Vec<(String, CheckSummary)> = Vec::new();
    match cfg.check {
        PeriodCheck::Theta => runs.push(("Jacobi identity".into(), periods::check_theta(&mut rng, n, prec, strict)?)),
        PeriodCheck::Ucoord => runs.push((
            "u(tau^) for Nf0 equals u(tau^/2) for Nf2".into(),
            periods::check_ucoord(&mut rng, n, prec, strict)?,
        )),
        PeriodCheck::Jmap => {
            for model in [theta::Model::Nf0, theta::Model::Nf2] {
                let s = periods::check_jmap(&mut rng, model, n, prec, strict)?;
                runs.push((format!("fiber j equals lattice j ({})", model.name()), s));
            }
        }
        PeriodCheck::Ratio => runs.push((
            "period ratio of the K3 fiber is tau".into(),
            periods::check_ratio(&mut rng, n, prec, loose)?,
        )),
        PeriodCheck::Yukawa => {
            runs.push((
                "Yukawa pullback law".into(),
                periods::check_yukawa_pullback(&mut rng, n, prec, loose)?,
            ));
            let tol = cfg.tol.unwrap_or(1e-15);
            runs.push((
                "Xi^_SW / Xi_SW = 1/2".into(),
                periods::check_yukawa_ratio(&mut rng, n, prec, &qf(1, 2), tol)?,
            ));
        }
    }
    let checks = runs.iter().map(|(name, s)| summary_check(name, s)).collect();
    let data: Vec<Value> = runs.iter().map(|(_, s)| json!(s)).collect();
    Ok((checks, Vec::new(), json!({ "checks": data })))
}

fn kummer_cmd(cfg: &RunConfig) -> Result<Parts> {
    let theta: [Q; 6] = cfg
        .theta
        .clone()
        .try_into()
        .map_err(|v: Vec<Q>| anyhow::anyhow!("theta needs 6 values, got {}", v.len()))?;
    let curve = GenusTwoCurve::new(theta, cfg.a0.clone())?;
    let roots = kummer::roots_from_theta(&curve)?;
    let cons = roots.constraints();
    let mut checks: Vec<Check> = cons
        .iter()
        .enumerate()
        .map(|(i, &ok)| Check::new(format!("root constraint {}", i + 1), ok, Value::Null))
        .collect();
    let mut data = json!({ "curve": curve, "roots": roots });
    if cfg.emit == Emit::Roots {
        return Ok((checks, Vec::new(), data));
    }
    let (params, shifted) = kummer::abc_from_roots(&roots)?;
    let ids = kummer::shifted_identities(&roots, &shifted);
    checks.push(Check::new("4 prod(r - r_2i) = p - r^2", ids[0], Value::Null));
    checks.push(Check::new("4 prod(r - r_2i-1) = p + r^2", ids[1], Value::Null));
    data["shifted"] = json!(shifted);
    data["params"] = json!(params);
    if cfg.emit == Emit::Abc {
        return Ok((checks, Vec::new(), data));
    }
    let l = kummer::verify_end_to_end(&curve)?;
    checks.push(Check::new("Y_{a,b,c} has six I2 fibers", l.i2_count == 6, json!({ "configuration": l.y_configuration })));
    checks.push(Check::new("I2 loci divide prod(r - r_i)", l.i2_loci_divide, Value::Null));
    checks.push(Check::new("conic-pencil oracle gives the same roots", l.pencil_agrees, Value::Null));
    checks.push(Check::new("Q0 passes through q36", l.q0_through_q36, Value::Null));
    if !l.printed_list_constraints.iter().all(|&b| b) {
        checks.push(Check::discrepancy(
            "printed r6 numerator",
            json!({ "printed_list_constraints": l.printed_list_constraints }),
        ));
    }
    if l.r1_r2_swapped {
        checks.push(Check::discrepancy("r1 and r2 exchanged relative to the pencil oracle", Value::Null));
    }
    let table = TableBlock { title: "Y_{a,b,c} from theta".into(), computed: format!("{}\n", l.y_configuration), expected: None };
    data["ledger"] = json!(l);
    Ok((checks, vec![table], data))
}

fn lattice_json(l: &IntegerLattice) -> Result<Value> {
    let g = lattice::discriminant_group(l)?;
    let mut profile = Vec::new();
    let mut isotropic = None;
    if g.elements().is_ok() {
        for ((order, value), count) in lattice::form_profile(l)? {
            profile.push(json!({ "order": order.to_string(), "q": show_q(&value), "count": count }));
        }
        isotropic = Some(lattice::isotropic_elements(l)?.len());
    }
    let generators: Vec<Value> = (0..g.divisors.len())
        .map(|i| {
            let mut e = g.zero();
            e[i] = 1.into();
            let v = lattice::disc_form(l, &g, &e).map(|v| show_q(&v.value)).unwrap_or_default();
            json!({ "order": g.divisors[i].to_string(), "q": v })
        })
        .collect();
    Ok(json!({
        "lattice": l,
        "rank": l.rank(),
        "det": l.det().to_string(),
        "discriminant_divisors": g.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "generator_forms": generators,
        "form_profile": profile,
        "isotropic_elements": isotropic,
    }))
}

fn divisors_of(l: &IntegerLattice) -> Result<Vec<String>> {
    let mut d: Vec<String> = lattice::discriminant_group(l)?.divisors.iter().map(|d| d.to_string()).collect();
    d.sort();
    Ok(d)
}

fn lattice_cmd(cfg: &RunConfig) -> Result<Parts> {
    let mut checks = Vec::new();
    let mut extra = json!({});
    let l = match cfg.case {
        LatticeCase::A1 => {
            let l = lattice::named_gram(LatticeName::A(1), Sign::Plus)?;
            let g = lattice::discriminant_group(&l)?;
            let q_gen = lattice::disc_form(&l, &g, &[1.into()])?.value;
            checks.push(Check::new("A1: D = Z/2 with q = 1/2", divisors_of(&l)? == ["2"] && q_gen == qf(1, 2), Value::Null));
            checks.push(Check::new("A1: only the trivial class is isotropic", lattice::isotropic_elements(&l)?.len() == 1, Value::Null));
            l
        }
        LatticeCase::H => {
            let l = lattice::named_gram(LatticeName::H, Sign::Plus)?;
            checks.push(Check::new("H: trivial discriminant group", lattice::discriminant_group(&l)?.is_trivial(), Value::Null));
            l
        }
        LatticeCase::D16 => {
            let (l, gens) = lattice::d_spinor_vector(16, Sign::Plus)?;
            let g = lattice::discriminant_group(&l)?;
            let spinor = lattice::element_of(&g, &l, &gens[0])?;
            checks.push(Check::new("D16: D = (Z/2)^2", divisors_of(&l)? == ["2", "2"], Value::Null));
            checks.push(Check::new("D16: spinor class is isotropic", lattice::disc_form(&l, &g, &spinor)?.is_zero(), Value::Null));
            let (m, rep) = lattice::overlattice_report(&l, &g, &[spinor])?;
            checks.push(Check::new(
                "D16 glued by the spinor is even unimodular of rank 16",
                m.is_even() && m.det().abs().is_one() && m.rank() == 16,
                json!(rep),
            ));
            extra = json!({ "form_matrix": lattice::form_matrix(&l, &gens), "overlattice": rep });
            l
        }
        LatticeCase::D8A7 => {
            let (d8, gens) = lattice::d_spinor_vector(8, Sign::Minus)?;
            let l = d8.direct_sum(&lattice::named_gram(LatticeName::A(7), Sign::Minus)?);
            let g = lattice::discriminant_group(&l)?;
            checks.push(Check::new("D8(-1) + A7(-1): D = (Z/2)^2 + Z/8", divisors_of(&l)? == ["2", "2", "8"], Value::Null));
            let mut s = gens[0].clone();
            s.extend(std::iter::repeat_n(Q::zero(), 7));
            let v = lattice::element_of(&g, &l, &s)?;
            checks.push(Check::new("spinor + 0 is isotropic", lattice::disc_form(&l, &g, &v)?.is_zero(), Value::Null));
            let (m, rep) = lattice::overlattice_report(&l, &g, &[v])?;
            let gm = lattice::discriminant_group(&m)?;
            let mut attained = false;
            for e in gm.elements()? {
                attained |= lattice::disc_form(&m, &gm, &e)?.value == qf(1, 8);
            }
            checks.push(Check::new(
                "overlattice has D = Z/8 with q = 1/8 attained",
                rep.discriminant_divisors == ["8"] && attained,
                json!(rep),
            ));
            checks.push(Check::new("D(M) agrees with V-perp / V", rep.matches_perp_quotient, Value::Null));
            let (d8p, gp) = lattice::d_spinor_vector(8, Sign::Plus)?;
            let gd = lattice::discriminant_group(&d8p)?;
            let sp = lattice::element_of(&gd, &d8p, &gp[0])?;
            let (e8, _) = lattice::overlattice_report(&d8p, &gd, &[sp])?;
            let cert = lattice::e8_certificate(&e8);
            checks.push(Check::new("D8 glued by the spinor is E8", cert.holds(), json!(cert)));
            extra = json!({ "overlattice": rep, "e8_certificate": cert });
            l
        }
        LatticeCase::Custom => {
            let rows = cfg.gram.as_ref().context("case custom needs a Gram matrix (--gram FILE)")?;
            let l = IntegerLattice::from_i64(rows)?;
            let g = lattice::discriminant_group(&l)?;
            checks.push(Check::new("|D(L)| = |det|", g.order() == l.det().abs(), Value::Null));
            l
        }
    };
    let mut data = lattice_json(&l)?;
    data["case"] = extra;
    Ok((checks, Vec::new(), data))
}

fn verify_paper(cfg: &RunConfig) -> Result<Parts> {
    let suite_cfg = SuiteConfig { seed: cfg.seed, precision: cfg.precision, ..SuiteConfig::default() };
    periods::check_precision(cfg.precision)?;
    let criteria = suite::run_all(&suite_cfg);
    let mut verdicts = Vec::new();
    let mut summary = Vec::new();
    for c in &criteria {
        summary.push(json!({
            "id": c.id,
            "title": c.title,
            "passed": c.passed(),
            "checks": c.checks.len(),
            "failed": c.failures().len(),
            "discrepancies": c.discrepancies().len(),
        }));
        for check in &c.checks {
            let mut check = check.clone();
            check.name = format!("[{}] {}", c.id, check.name);
            verdicts.push(check);
        }
    }
    let params = cfg.params();
    let mut tables = Vec::new();
    for model in [Model::Y, Model::X, Model::YSw, Model::XSw] {
        let c = classify_model(model, &params)?;
        let generic = matches!(model, Model::XSw | Model::YSw) || suite::generic_by_discriminants(&params);
        tables.push(TableBlock {
            title: match model {
                Model::X | Model::Y => format!("{} at (a, b, c) = ({}, {}, {})", model_name(model), show_q(&params.a), show_q(&params.b), show_q(&params.c)),
                _ => model_name(model).to_string(),
            },
            computed: rows_table(&c.rows),
            expected: generic.then(|| rows_table(&c.expected)),
        });
    }
    Ok((verdicts, tables, json!({ "suite": suite_cfg, "criteria": summary })))
}


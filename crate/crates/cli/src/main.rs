//! Command-line workbench for bigraded BV models: axiom checks, cohomology
//! tables, transfer data, hypercommutative operations, and filtration audits.
//!
//! Exit codes: 0 all asserted checks pass, 1 some asserted check failed,
//! 2 usage or parse error.

mod expr;
mod file;
mod report;

use bvhycom::bv::{check_bv, check_ddelta, cohomology_diamond, is_order_one, BVAlgebra};
use bvhycom::hodge::{build_transfer, verify_hodge_de_rham, verify_side_conditions, TransferDiagram};
use bvhycom::hycom::{
    build_trivialization, phi_n, verify_exp, HycomOps, ThetaConvention,
};
use bvhycom::matrix::{vec_is_zero, Matrix};
use bvhycom::mhc::{
    canonical_filtration, check_alpha_purity, check_e1_degeneration, check_strictness,
    column_filtration, induce_on_cohomology, row_filtration, Filtration,
};
use bvhycom::mhc;
use bvhycom::model::Model;
use bvhycom::models::{
    complex_torus, iwasawa_full, iwasawa_sigma_invariant, kodaira_thurston, ModelBundle,
};
use clap::{Parser, Subcommand, ValueEnum};
use report::{Format, Report};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bvhycom", about = "exact workbench for bigraded BV models")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// BV axioms, d-delta condition, cohomology diamond
    Check {
        model: String,
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Cohomology table with representatives
    Cohomology {
        model: String,
        #[arg(long)]
        d: Option<String>,
    },
    /// Homotopy transfer data: h, side conditions, phi_n, exp identity
    Transfer {
        model: String,
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        /// exp-identity depth
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Hypercommutative operations on cohomology
    Hycom {
        model: String,
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        /// also print the transferred C-infinity triple products
        #[arg(long)]
        cinfinity: bool,
    },
    /// Filtration audit: strictness, degeneration, opposedness, purity
    Purity {
        model: String,
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        /// weight filtration to audit (canonical)
        #[arg(long, default_value = "canonical")]
        w: String,
        /// decreasing filtration for the E1 criterion (column|row)
        #[arg(long)]
        f: Option<String>,
        /// conjugate filtration for the opposedness check (column|row)
        #[arg(long)]
        fbar: Option<String>,
        /// purity slope, an integer or p/q
        #[arg(long, default_value = "1")]
        alpha: String,
    },
    /// List built-in models
    Models,
}

struct Resolved {
    bundle: ModelBundle,
    d_expr: String,
    delta_expr: String,
    warnings: Vec<String>,
}

fn resolve(name: &str, d: Option<String>, delta: Option<String>) -> Result<Resolved, String> {
    let (bundle, file_bv, warnings) = match name {
        "kt" | "kodaira-thurston" => (kodaira_thurston().map_err(|e| e.to_string())?, None, vec![]),
        "iwasawa-orbifold" => (iwasawa_sigma_invariant().map_err(|e| e.to_string())?, None, vec![]),
        "iwasawa-full" | "iwasawa" => (iwasawa_full().map_err(|e| e.to_string())?, None, vec![]),
        _ if name.starts_with("torus:") => {
            let m: usize = name["torus:".len()..]
                .parse()
                .map_err(|_| format!("bad torus dimension in `{name}`"))?;
            if !(1..=4).contains(&m) {
                return Err(format!("torus dimension must be 1..=4, got {m}"));
            }
            (complex_torus(m).map_err(|e| e.to_string())?, None, vec![])
        }
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read `{path}`: {e}"))?;
            let f = file::parse_presentation(&text)?;
            (f.bundle, f.bv, f.warnings)
        }
    };
    let default_delta = if bundle.name == "iwasawa-orbifold" {
        "-i*adj(del)".to_string()
    } else if bundle.ops.contains_key("del") {
        "del".to_string()
    } else {
        bundle.ops.keys().next().cloned().unwrap_or_default()
    };
    let default_d = if bundle.ops.contains_key("dbar") {
        "dbar".to_string()
    } else {
        bundle.ops.keys().last().cloned().unwrap_or_default()
    };
    let (file_d, file_delta) = file_bv.map(|(a, b)| (Some(a), Some(b))).unwrap_or((None, None));
    let d_expr = d.or(file_d).unwrap_or(default_d);
    let delta_expr = delta.or(file_delta).unwrap_or(default_delta);
    if d_expr.is_empty() || delta_expr.is_empty() {
        return Err("model declares no operators; pass --d and --delta".into());
    }
    Ok(Resolved { bundle, d_expr, delta_expr, warnings })
}

fn class_label(model: &Model, t: &TransferDiagram, j: usize) -> String {
    format!("[{}]", model.from_coords(&t.iota.column(j)))
}

fn cohomology_section(rep: &mut Report, model: &Model, t: &TransferDiagram) {
    rep.value("total dimension", t.cohomology_dim().to_string());
    let mut by_bidegree: Vec<((i64, i64), Vec<String>)> = Vec::new();
    for j in 0..t.cohomology_dim() {
        let e = model.from_coords(&t.iota.column(j));
        let bd = e.homogeneous_bidegree().unwrap_or((i64::MIN, i64::MIN));
        match by_bidegree.iter_mut().find(|(b, _)| *b == bd) {
            Some((_, v)) => v.push(format!("[{e}]")),
            None => by_bidegree.push((bd, vec![format!("[{e}]")])),
        }
    }
    by_bidegree.sort_by_key(|&((p, q), _)| (p + q, p));
    for ((p, q), reps) in by_bidegree {
        rep.value(&format!("H^({p},{q})"), format!("dim {}: {}", reps.len(), reps.join(", ")));
    }
}

fn cmd_check(r: &Resolved) -> Result<Report, String> {
    let model = &r.bundle.model;
    let d = file::operator_of(&r.bundle, &r.d_expr)?;
    let delta = file::operator_of(&r.bundle, &r.delta_expr)?;
    let bv = BVAlgebra::new(model.clone(), d, delta).map_err(|e| e.to_string())?;
    let mut rep = Report::new();
    rep.value("model", &r.bundle.name);
    rep.value("d", &r.d_expr);
    rep.value("delta", &r.delta_expr);
    let b = check_bv(&bv);
    rep.section("bv axioms", |s| {
        s.check("d^2 = 0", b.d_squared_zero);
        s.check("delta^2 = 0", b.delta_squared_zero);
        s.check("d delta + delta d = 0", b.d_delta_anticommute);
        s.check("Leibniz for d", b.d_leibniz);
        s.check("seven-term relation", b.seven_term);
        s.check("bracket derivation axiom", b.bracket_derivation);
        s.check("bracket antisymmetry", b.bracket_antisymmetric);
        s.check("seven-term agrees with bracket derivation", b.seven_term == b.bracket_derivation);
    });
    rep.value("delta is order one", is_order_one(&bv).to_string());
    let dd = check_ddelta(&bv);
    rep.section("d-delta condition", |s| {
        s.note_check("holds", dd.holds);
        s.note_check("diamond comparison maps agree", dd.diamond_agrees);
        for (n, ok) in &dd.per_degree {
            s.note_check(&format!("degree {n}"), *ok);
        }
    });
    let diamond = cohomology_diamond(&bv);
    rep.section("cohomology dimensions", |s| {
        let dims = |g: &bvhycom::bv::GradedCohomology| {
            let mut v: Vec<String> = g
                .per_degree
                .keys()
                .map(|&n| format!("{n}:{}", g.dim(n)))
                .filter(|x| !x.ends_with(":0"))
                .collect();
            if v.is_empty() {
                v.push("0".into());
            }
            v.join(" ")
        };
        s.value("H_d", dims(&diamond.h_d));
        s.value("H_delta", dims(&diamond.h_delta));
        s.value("H_BC", dims(&diamond.h_bc));
        s.value("H_A", dims(&diamond.h_a));
    });
    Ok(rep)
}

fn cmd_cohomology(r: &Resolved) -> Result<Report, String> {
    let model = &r.bundle.model;
    let d = file::operator_of(&r.bundle, &r.d_expr)?;
    let t = build_transfer(model, &d).map_err(|e| e.to_string())?;
    let mut rep = Report::new();
    rep.value("model", &r.bundle.name);
    rep.value("d", &r.d_expr);
    rep.section("cohomology", |s| cohomology_section(s, model, &t));
    Ok(rep)
}

fn cmd_transfer(r: &Resolved, order: usize) -> Result<Report, String> {
    let model = &r.bundle.model;
    let d = file::operator_of(&r.bundle, &r.d_expr)?;
    let delta = file::operator_of(&r.bundle, &r.delta_expr)?;
    let t = build_transfer(model, &d).map_err(|e| e.to_string())?;
    let mut rep = Report::new();
    rep.value("model", &r.bundle.name);
    rep.value("d", &r.d_expr);
    rep.value("delta", &r.delta_expr);
    rep.check("rho iota = id", (&t.rho * &t.iota) == Matrix::identity(t.cohomology_dim()));
    rep.check(
        "d h + h d = id - iota rho",
        t.h.anticommutator(&t.d) == &Matrix::identity(model.dim()) - &(&t.iota * &t.rho),
    );
    rep.section("h on basis monomials", |s| {
        let mut any = false;
        for (j, _) in model.basis_masks().iter().enumerate() {
            let col = t.h.column(j);
            if !vec_is_zero(&col) {
                s.value(
                    &format!("h({})", model.basis_element(j)),
                    model.from_coords(&col).to_string(),
                );
                any = true;
            }
        }
        if !any {
            s.value("h", "0");
        }
    });
    let sc = verify_side_conditions(&t, &delta);
    rep.section("side conditions", |s| {
        s.note_check("delta iota = 0", sc.delta_iota);
        s.note_check("rho delta = 0", sc.rho_delta);
        s.note_check("h delta + delta h = 0", sc.h_delta_anticommute);
    });
    let hdr = verify_hodge_de_rham(&t, &delta, order.max(1));
    rep.note_check(
        &format!("Hodge-to-de-Rham: rho (delta h)^(k-1) delta iota = 0, k <= {}", order.max(1)),
        hdr.iter().all(|&b| b),
    );
    let triv = build_trivialization(&t, &delta, order.max(1));
    rep.section("trivialization", |s| {
        for (n, p) in triv.phis.iter().enumerate() {
            if p.is_zero() {
                s.value(&format!("phi_{}", n + 1), "0");
            } else {
                for (j, _) in model.basis_masks().iter().enumerate() {
                    let col = p.column(j);
                    if !vec_is_zero(&col) {
                        s.value(
                            &format!("phi_{}({})", n + 1, model.basis_element(j)),
                            model.from_coords(&col).to_string(),
                        );
                    }
                }
            }
        }
    });
    let exp = verify_exp(&t.d, &delta, &triv.phis, order.max(1));
    rep.check(&format!("exp identity to order {}", order.max(1)), exp.iter().all(|&b| b));
    Ok(rep)
}

fn cmd_hycom(r: &Resolved, cinfinity: bool) -> Result<Report, String> {
    let model = &r.bundle.model;
    let d = file::operator_of(&r.bundle, &r.d_expr)?;
    let delta = file::operator_of(&r.bundle, &r.delta_expr)?;
    let t = build_transfer(model, &d).map_err(|e| e.to_string())?;
    let mut rep = Report::new();
    rep.value("model", &r.bundle.name);
    rep.value("d", &r.d_expr);
    rep.value("delta", &r.delta_expr);

    let sc = verify_side_conditions(&t, &delta);
    rep.note_check("side conditions", sc.all());
    rep.note_check(
        "Hodge-to-de-Rham degeneration",
        verify_hodge_de_rham(&t, &delta, 4).iter().all(|&b| b),
    );

    let phi1 = phi_n(&t, &delta, 1);
    rep.section("phi_1 on basis monomials", |s| {
        let mut any = false;
        for (j, _) in model.basis_masks().iter().enumerate() {
            let col = phi1.column(j);
            if !vec_is_zero(&col) {
                s.value(
                    &format!("phi_1({})", model.basis_element(j)),
                    model.from_coords(&col).to_string(),
                );
                any = true;
            }
        }
        if !any {
            s.value("phi_1", "0");
        }
    });
    match bvhycom::model::homogeneous_bidegree(model, &phi1).map_err(|e| e.to_string())? {
        Some((p, q)) => rep.value("phi_1 bidegree", format!("({p},{q})")),
        None => rep.value("phi_1 bidegree", "zero map"),
    }

    let ops = HycomOps { model, t: &t, phi1, convention: ThetaConvention::calibrated() };
    let k = t.cohomology_dim();
    let basis = |j: usize| t.rho.apply(&t.iota.column(j));
    let mut any_m3 = false;
    rep.section("m_3 on cohomology", |s| {
        for i in 0..k {
            for j in i..k {
                for l in j..k {
                    let v = ops.m3(&basis(i), &basis(j), &basis(l)).unwrap();
                    if !vec_is_zero(&v) {
                        any_m3 = true;
                        s.value(
                            &format!(
                                "m3({}, {}, {})",
                                class_label(model, &t, i),
                                class_label(model, &t, j),
                                class_label(model, &t, l)
                            ),
                            format!("[{}]", model.from_coords(&t.iota.apply(&v))),
                        );
                    }
                }
            }
        }
        if !any_m3 {
            s.value("m_3", "all higher operations vanish");
        }
    });

    if cinfinity {
        rep.section("mu_3 on cohomology", |s| {
            let mut any = false;
            for i in 0..k {
                for j in 0..k {
                    for l in 0..k {
                        let v = ops.mu3(&basis(i), &basis(j), &basis(l)).unwrap();
                        if !vec_is_zero(&v) {
                            any = true;
                            s.value(
                                &format!(
                                    "mu3({}, {}, {})",
                                    class_label(model, &t, i),
                                    class_label(model, &t, j),
                                    class_label(model, &t, l)
                                ),
                                format!("[{}]", model.from_coords(&t.iota.apply(&v))),
                            );
                        }
                    }
                }
            }
            if !any {
                s.value("mu_3", "all triple products vanish");
            }
        });
    }
    Ok(rep)
}

fn named_filtration(model: &Model, which: &str) -> Result<Filtration, String> {
    match which {
        "column" => Ok(column_filtration(model)),
        "row" => Ok(row_filtration(model)),
        other => Err(format!("unknown filtration `{other}` (expected column|row)")),
    }
}

fn cmd_purity(
    r: &Resolved,
    w: &str,
    f: Option<&str>,
    fbar: Option<&str>,
    alpha: &str,
) -> Result<Report, String> {
    let model = &r.bundle.model;
    let d = file::operator_of(&r.bundle, &r.d_expr)?;
    let delta = file::operator_of(&r.bundle, &r.delta_expr)?;
    // total differential for the filtration audit
    let d_total = &d + &delta_component_for_total(&r.bundle, &d);
    let (num, den) = parse_alpha(alpha)?;

    let mut rep = Report::new();
    rep.value("model", &r.bundle.name);
    rep.value("alpha", format!("{num}/{den}"));

    if w != "canonical" {
        return Err(format!("unknown weight filtration `{w}` (expected canonical)"));
    }
    let wf = canonical_filtration(model, &d_total);
    let s = check_strictness(&d_total, &wf);
    rep.section("canonical filtration", |sec| {
        sec.check("preserved by d", s.preserved);
        sec.check("strict", s.strict);
    });
    if s.preserved && s.strict {
        let induced = induce_on_cohomology(model, &d_total, &wf).map_err(|e| e.to_string())?;
        let purity = check_alpha_purity(&induced, num, den);
        rep.check("alpha-purity of weight-graded cohomology", purity.pure);
        if !purity.pure {
            for (n, p) in &purity.failures {
                rep.value(&format!("impurity at degree {n}"), format!("weight {p}"));
            }
        }
    } else {
        rep.check("alpha-purity of weight-graded cohomology", false);
        rep.value("purity", "refused: filtration is not strict");
    }

    if let Some(fname) = f {
        let ff = named_filtration(model, fname)?;
        let e1 = check_e1_degeneration(model, &ff, &d_total).map_err(|e| e.to_string())?;
        rep.check(&format!("E1 degeneration ({fname} filtration)"), e1);
        if let Some(fbname) = fbar {
            let fb = named_filtration(model, fbname)?;
            opposedness_section(&mut rep, model, &d_total, &ff, &fb)?;
        }
    }

    // operation-weight audit against the two supported patterns
    let t = build_transfer(model, &d).map_err(|e| e.to_string())?;
    let phi1 = phi_n(&t, &delta, 1);
    let hodge = mhc::audit_operation_weights(model, &phi1, mhc::WeightPattern::PureHodge)
        .map_err(|e| e.to_string())?;
    let bv1 = mhc::audit_operation_weights(model, &phi1, mhc::WeightPattern::Bv1)
        .map_err(|e| e.to_string())?;
    let conforms = hodge.conforms || bv1.conforms;
    rep.section("operation weights", |sec| {
        sec.value(
            "phi_1 bidegree",
            match hodge.phi1_bidegree {
                Some((p, q)) => format!("({p},{q})"),
                None => "zero map".into(),
            },
        );
        sec.note_check("pure-Hodge pattern (-1,-1)", hodge.conforms);
        sec.note_check("order-one pattern (1,-1)", bv1.conforms);
    });

    let purity_ok = rep.all_asserted_pass();
    rep.value(
        "formality hypotheses (purity + weight conformance) satisfied",
        if purity_ok && conforms { "yes" } else { "no" },
    );
    Ok(rep)
}

/// For built-ins with both del and dbar the total differential adds the
/// missing conjugate half; if d already squares to the named pair, use it.
fn delta_component_for_total(bundle: &ModelBundle, d: &Matrix) -> Matrix {
    match (bundle.ops.get("del"), bundle.ops.get("dbar")) {
        (Some(del), Some(dbar)) => {
            if d == dbar {
                del.clone()
            } else if d == del {
                dbar.clone()
            } else {
                Matrix::zero(d.rows, d.cols)
            }
        }
        _ => Matrix::zero(d.rows, d.cols),
    }
}

fn opposedness_section(
    rep: &mut Report,
    model: &Model,
    d_total: &Matrix,
    f: &Filtration,
    fbar: &Filtration,
) -> Result<(), String> {
    let sf = check_strictness(d_total, f);
    let sfb = check_strictness(d_total, fbar);
    if !(sf.preserved && sf.strict && sfb.preserved && sfb.strict) {
        rep.value("opposedness", "refused: filtrations are not strict");
        rep.check("opposedness on cohomology", false);
        return Ok(());
    }
    let inf = induce_on_cohomology(model, d_total, f).map_err(|e| e.to_string())?;
    let infb = induce_on_cohomology(model, d_total, fbar).map_err(|e| e.to_string())?;
    let mut all = true;
    let mut lines = Vec::new();
    for (n, (c, steps)) in &inf.per_degree {
        let Some((cb, steps_b)) = infb.per_degree.get(n) else { continue };
        debug_assert_eq!(c.basis_matrix(), cb.basis_matrix());
        let ok = mhc::check_opposed(steps, steps_b, c, *n);
        all &= ok;
        lines.push((*n, ok));
    }
    rep.section("opposedness per degree", |sec| {
        for (n, ok) in lines {
            sec.note_check(&format!("degree {n}"), ok);
        }
    });
    rep.check("opposedness on cohomology", all);
    Ok(())
}

fn parse_alpha(s: &str) -> Result<(i64, i64), String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let n: i64 = num.trim().parse().map_err(|_| format!("bad alpha `{s}`"))?;
    let d: i64 = den.trim().parse().map_err(|_| format!("bad alpha `{s}`"))?;
    if d == 0 {
        return Err("alpha denominator must be nonzero".into());
    }
    Ok((n, d))
}

fn cmd_models() -> Report {
    let mut rep = Report::new();
    rep.section("built-in models", |s| {
        s.value("kt", "Kodaira-Thurston surface model, 4 generators, dim 16");
        s.value("iwasawa-orbifold", "sigma-invariant Iwasawa algebra, dim 16");
        s.value("iwasawa-full", "full Iwasawa algebra, 6 generators, dim 64");
        s.value("torus:m", "complex torus model, m = 1..4, zero differentials");
        s.value("<path>", "presentation file in the TOML format (see README)");
    });
    rep
}

fn run(cli: Cli) -> Result<(Report, Vec<String>), String> {
    match &cli.cmd {
        Cmd::Models => Ok((cmd_models(), vec![])),
        Cmd::Check { model, d, delta } => {
            let r = resolve(model, d.clone(), delta.clone())?;
            Ok((cmd_check(&r)?, r.warnings))
        }
        Cmd::Cohomology { model, d } => {
            let r = resolve(model, d.clone(), None)?;
            Ok((cmd_cohomology(&r)?, r.warnings))
        }
        Cmd::Transfer { model, d, delta, order } => {
            let r = resolve(model, d.clone(), delta.clone())?;
            Ok((cmd_transfer(&r, *order)?, r.warnings))
        }
        Cmd::Hycom { model, d, delta, cinfinity } => {
            let r = resolve(model, d.clone(), delta.clone())?;
            Ok((cmd_hycom(&r, *cinfinity)?, r.warnings))
        }
        Cmd::Purity { model, d, delta, w, f, fbar, alpha } => {
            let r = resolve(model, d.clone(), delta.clone())?;
            Ok((cmd_purity(&r, w, f.as_deref(), fbar.as_deref(), alpha)?, r.warnings))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fmt = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    match run(cli) {
        Ok((rep, warnings)) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", rep.render(fmt));
            if rep.all_asserted_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

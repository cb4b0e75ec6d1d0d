//! Command dispatch and report rendering.

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use formlab::bridge::{
    coefficient_point, height_bound_report, point_polynomial, res_identity_check, res_ineq_search,
    resultant_form,
};
use formlab::exact::arith::format_rational;
use formlab::field::{FieldElement, NumberField};
use formlab::forms::{factor_heights, general_position, DecomposableForm, GeneralPosition};
use formlab::places::{
    height, is_s_integer, is_s_unit, norm_extension_check, places_above, product_formula_check,
    s_height_value, s_norm_direct, HeightValue, Place, PlaceKind, PlaceSet,
};
use formlab::search::{
    equation_search, growth_profile, sequence_experiment, solve_inequality, subspace_cover,
    subspace_functional, InequalityInstance, Point, SequenceOutcome, SolutionReport,
};
use formlab::Error;

use crate::config::{Config, InequalitySpec};
use crate::error::CliError;
use crate::records::{self, interval_text, point_text};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// List the places of S (and above S in the extension).
    Places,
    /// Norms and S-integrality of `query.element`.
    Norm,
    /// Absolute and S-heights of `query.point`.
    Height,
    /// Expansion, general position and factor heights of the form.
    CheckForm,
    /// Solve the form inequality over the search box.
    Solve,
    /// Solve `F(x) = G(x)` over the search box.
    Equation,
    /// Build the resultant form of `[poly]`.
    Reduce,
    /// Solve the resultant inequality for `[poly]`.
    ResSolve,
    /// Cover solutions by low-dimensional subspaces.
    Cover,
    /// Class counts for increasing bounds.
    Profile,
    /// Run a family of forms.
    Experiment,
    /// Randomized self-checks of the arithmetic core.
    VerifyCore,
}

/// Exit status of a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Some points could not be decided within the precision cap.
    Borderline,
    /// A self-check or verification failed.
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Borderline => 1,
            Status::Failed => 4,
        }
    }

    fn worst(self, o: Status) -> Status {
        match (self, o) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::Borderline, _) | (_, Status::Borderline) => Status::Borderline,
            _ => Status::Ok,
        }
    }
}

/// Records and the equivalent human-readable text.
#[derive(Clone, Debug)]
pub struct Output {
    pub records: Vec<Value>,
    pub text: String,
    pub status: Status,
}

impl Output {
    fn new() -> Self {
        Output {
            records: Vec::new(),
            text: String::new(),
            status: Status::Ok,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    /// One JSON object per line.
    pub fn json_lines(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

fn need<'a, T>(v: &'a Option<T>, section: &'static str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or(CliError::MissingSection(section))
}

fn s_text(s: &PlaceSet) -> String {
    let labels: Vec<String> = s.iter().map(Place::label).collect();
    format!("{{{}}}", labels.join(", "))
}

pub fn run_command(cmd: Command, cfg: &Config) -> Result<Output, CliError> {
    match cmd {
        Command::Places => places(cfg),
        Command::Norm => norm(cfg),
        Command::Height => heights(cfg),
        Command::CheckForm => check_form(cfg),
        Command::Solve => solve(cfg),
        Command::Equation => equation(cfg),
        Command::Reduce => reduce(cfg),
        Command::ResSolve => res_solve(cfg),
        Command::Cover => cover(cfg),
        Command::Profile => profile(cfg),
        Command::Experiment => experiment(cfg),
        Command::VerifyCore => verify_core(cfg),
    }
}

fn place_record(role: &str, v: &Place) -> Value {
    let kind = match v.kind() {
        PlaceKind::Real => "real",
        PlaceKind::Complex => "complex",
        PlaceKind::Finite => "finite",
    };
    json!({
        "record": "place",
        "field": role,
        "label": v.label(),
        "kind": kind,
        "prime": if v.is_archimedean() { Value::Null } else { json!(v.prime()) },
        "local_degree": v.local_degree(),
    })
}

fn field_lines(out: &mut Output, role: &str, k: &NumberField, s: &PlaceSet) {
    let (r, c) = k.signature();
    out.records.push(json!({
        "record": "field",
        "role": role,
        "field": records::field_id(k),
        "degree": k.degree(),
        "signature": [r, c],
    }));
    out.line(format!(
        "{role} = {}  degree {}  signature ({r}, {c})",
        records::field_id(k),
        k.degree()
    ));
    for v in s.iter() {
        out.records.push(place_record(role, v));
        out.line(format!("  {:<24} local degree {}", v.label(), v.local_degree()));
    }
}

fn places(cfg: &Config) -> Result<Output, CliError> {
    let mut out = Output::new();
    field_lines(&mut out, "K", &cfg.base, &cfg.places);
    let g = cfg.embedding.target();
    if g != &cfg.base {
        let t = places_above(&cfg.embedding, &cfg.places)?;
        field_lines(&mut out, "G", g, &t);
    }
    Ok(out)
}

fn norm(cfg: &Config) -> Result<Output, CliError> {
    let a = need(&cfg.query.element, "query")?;
    let s = &cfg.places;
    let field_norm = a.norm();
    let sn = s_norm_direct(a, s)?;
    let integral = is_s_integer(a, s)?;
    let unit = is_s_unit(a, s)?;
    let mut out = Output::new();
    out.records.push(json!({
        "record": "norm",
        "element": records::element(a),
        "field_norm": records::rational(&field_norm),
        "s_norm": records::rational(&sn),
        "s_integer": integral,
        "s_unit": unit,
    }));
    out.line(format!("alpha       {a}"));
    out.line(format!("N(alpha)    {}", format_rational(&field_norm)));
    out.line(format!("N_S(alpha)  {}   S = {}", format_rational(&sn), s_text(s)));
    out.line(format!("S-integer   {integral}"));
    out.line(format!("S-unit      {unit}"));
    Ok(out)
}

fn heights(cfg: &Config) -> Result<Output, CliError> {
    let acc = cfg.output.accuracy;
    let x: Point = match (&cfg.query.point, &cfg.query.element) {
        (Some(p), _) => p.clone(),
        (None, Some(a)) => vec![cfg.base.one(), a.clone()],
        (None, None) => return Err(CliError::MissingSection("query")),
    };
    let h = height(&x, &acc)?;
    let hs = s_height_value(&x, &cfg.places, &acc)?;
    let log_hs = hs.log(&acc);
    let mut out = Output::new();
    out.records.push(json!({
        "record": "height",
        "point": records::point(&x),
        "h": records::interval(&h),
        "h_s": records::height(&hs),
        "log_h_s": records::interval(&log_hs),
    }));
    out.line(format!("x           {}", point_text(&x)));
    out.line(format!("h(x)        {}", interval_text(&h)));
    match &hs {
        HeightValue::Exact(r) => out.line(format!("H_S(x)      {}", format_rational(r))),
        HeightValue::Log(_) => out.line("H_S(x)      (irrational)"),
    }
    out.line(format!("log H_S(x)  {}", interval_text(&log_hs)));
    Ok(out)
}

fn check_form(cfg: &Config) -> Result<Output, CliError> {
    let f = need(&cfg.form, "form")?;
    let q = f.degree();
    let m = f.m();
    let gp = general_position(f.factors(), m);
    let fh = factor_heights(f, &cfg.output.accuracy)?;
    let witness = match &gp {
        GeneralPosition::Ok => Value::Null,
        GeneralPosition::Witness(w) => json!(w),
    };
    let mut out = Output::new();
    out.records.push(json!({
        "record": "form",
        "expansion": f.expanded().to_string(),
        "degree": q,
        "m": m,
        "general_position": gp.is_ok(),
        "witness": witness,
        "degree_exceeds_2m": q > 2 * m,
        "height": records::interval(&fh.form),
        "factor_heights": fh.factors.iter().map(records::interval).collect::<Vec<_>>(),
        "slack": records::interval(&fh.slack),
    }));
    out.line(format!("F = {}", f.expanded()));
    out.line(format!("degree q = {q}, m = {m}, q > 2m: {}", q > 2 * m));
    match &gp {
        GeneralPosition::Ok => out.line("general position: yes"),
        GeneralPosition::Witness(w) => {
            out.line(format!("general position: no, dependent factors {w:?}"))
        }
    }
    out.line(format!("h(F)        {}", interval_text(&fh.form)));
    for (j, h) in fh.factors.iter().enumerate() {
        out.line(format!("h(L_{j})      {}", interval_text(h)));
    }
    out.line(format!("max h(L_j) - h(F)  {}", interval_text(&fh.slack)));
    Ok(out)
}

fn instance(cfg: &Config, form: DecomposableForm, spec: &InequalitySpec) -> Result<InequalityInstance, CliError> {
    let mut inst = InequalityInstance::new(form, spec.c.clone(), spec.nu.clone(), spec.bound)?;
    inst.strict = spec.strict;
    inst.accuracy = cfg.output.accuracy;
    Ok(inst)
}

fn report_output(out: &mut Output, command: &str, report: &SolutionReport) {
    out.records.push(json!({
        "record": "summary",
        "command": command,
        "bound": report.bound,
        "strategy": report.strategy.name(),
        "scanned": report.scanned,
        "accepted": report.accepted.len(),
        "borderline": report.borderline.len(),
        "classes": report.classes.len(),
        "recheck_passed": report.recheck_passed,
        "warnings": report.warnings,
    }));
    for (i, c) in report.classes.iter().enumerate() {
        out.records.push(json!({
            "record": "class",
            "index": i,
            "representative": records::point(&c.representative),
            "members": c.members.iter().map(|p| records::point(p)).collect::<Vec<_>>(),
            "norm": records::rational(&c.norm),
            "height": records::height(&c.height),
            "log_height": records::interval(&c.log_height),
        }));
    }
    for p in &report.borderline {
        out.records.push(json!({ "record": "borderline", "point": records::point(p) }));
    }
    out.line(format!(
        "box max|x_i| <= {}  strategy {}  scanned {}  accepted {}  borderline {}",
        report.bound,
        report.strategy.name(),
        report.scanned,
        report.accepted.len(),
        report.borderline.len()
    ));
    out.line(format!(
        "recheck {}",
        if report.recheck_passed { "passed" } else { "FAILED" }
    ));
    for w in &report.warnings {
        out.line(format!("warning: {w}"));
    }
    out.line(format!("{} classes", report.classes.len()));
    if !report.classes.is_empty() {
        out.line(format!("{:>5}  {:<28} {:>12} {:>16} {:>8}", "#", "representative", "norm", "H_S", "members"));
    }
    for (i, c) in report.classes.iter().enumerate() {
        let h = match &c.height {
            HeightValue::Exact(r) => format_rational(r),
            HeightValue::Log(l) => format!("exp({:.6})", l.mid().to_f64()),
        };
        out.line(format!(
            "{:>5}  {:<28} {:>12} {:>16} {:>8}",
            i + 1,
            point_text(&c.representative),
            format_rational(&c.norm),
            h,
            c.members.len()
        ));
    }
    for p in &report.borderline {
        out.line(format!("borderline {}", point_text(p)));
    }
    if !report.recheck_passed {
        out.status = out.status.worst(Status::Failed);
    }
    if !report.borderline.is_empty() {
        out.status = out.status.worst(Status::Borderline);
    }
}

fn solve(cfg: &Config) -> Result<Output, CliError> {
    let f = need(&cfg.form, "form")?;
    let spec = need(&cfg.inequality, "inequality")?;
    let inst = instance(cfg, f.clone(), spec)?;
    let report = solve_inequality(&inst)?;
    let mut out = Output::new();
    out.line(format!("F = {}  S = {}", f.expanded(), s_text(&cfg.places)));
    out.line(format!(
        "0 < N_S(F(x)) {} {} * H_S(x)^({})",
        if spec.strict { "<" } else { "<=" },
        format_rational(&spec.c),
        format_rational(&spec.nu)
    ));
    report_output(&mut out, "solve", &report);
    Ok(out)
}

fn equation(cfg: &Config) -> Result<Output, CliError> {
    let f = need(&cfg.form, "form")?;
    let e = need(&cfg.equation, "equation")?;
    let report = equation_search(f, &e.g, e.bound, &cfg.output.accuracy)?;
    let mut out = Output::new();
    out.line(format!("F(x) = G(x) != 0 with F = {}, G = {}", f.expanded(), e.g));
    report_output(&mut out, "equation", &report);
    Ok(out)
}

fn reduce(cfg: &Config) -> Result<Output, CliError> {
    let spec = need(&cfg.poly, "poly")?;
    let (p, m) = (&spec.poly, spec.m);
    let form = resultant_form(p, m)?;
    let hb = height_bound_report(p, m, &cfg.output.accuracy)?;
    let mut out = Output::new();
    let mut record = json!({
        "record": "reduction",
        "polynomial": records::point(&coefficient_point(p.expanded())),
        "m": m,
        "form": form.expanded().to_string(),
        "degree": form.degree(),
        "h_poly": records::interval(&hb.poly),
        "h_form": records::interval(&hb.form),
        "slack": records::interval(&hb.slack),
    });
    out.line(format!("P coefficients {}", point_text(&coefficient_point(p.expanded()))));
    out.line(format!("F_P = {}", form.expanded()));
    out.line(format!("h(P)          {}", interval_text(&hb.poly)));
    out.line(format!("h(F_P)        {}", interval_text(&hb.form)));
    out.line(format!("h(F_P) - q h(P)  {}", interval_text(&hb.slack)));
    if let Some(x) = &cfg.query.point {
        let ok = res_identity_check(p, &point_polynomial(x), m)?;
        record["identity"] = json!({ "point": records::point(x), "holds": ok });
        out.line(format!("F_P{} = Res(P, Q): {ok}", point_text(x)));
        if !ok {
            out.status = Status::Failed;
        }
    }
    out.records.push(record);
    Ok(out)
}

fn res_solve(cfg: &Config) -> Result<Output, CliError> {
    let p = need(&cfg.poly, "poly")?;
    let spec = need(&cfg.inequality, "inequality")?;
    let report = res_ineq_search(
        &p.poly,
        p.m,
        spec.c.clone(),
        spec.nu.clone(),
        spec.bound,
        spec.strict,
        &cfg.output.accuracy,
    )?;
    let mut out = Output::new();
    out.line(format!(
        "0 < N_S(Res(P, Q)) {} {} * H_S(Q)^({}), deg Q = {}",
        if spec.strict { "<" } else { "<=" },
        format_rational(&spec.c),
        format_rational(&spec.nu),
        p.m
    ));
    report_output(&mut out, "res-solve", &report);
    Ok(out)
}

fn cover(cfg: &Config) -> Result<Output, CliError> {
    let spec = need(&cfg.cover, "cover")?;
    let points = match &spec.points {
        Some(p) => p.clone(),
        None => {
            let f = need(&cfg.form, "form")?;
            let ineq = need(&cfg.inequality, "inequality")?;
            solve_inequality(&instance(cfg, f.clone(), ineq)?)?.accepted
        }
    };
    let c = subspace_cover(&points, spec.l)?;
    let verified = c.verify(&points);
    let mut out = Output::new();
    out.records.push(json!({
        "record": "cover",
        "l": spec.l,
        "points": points.len(),
        "subspaces": c.len(),
        "verified": verified,
    }));
    out.line(format!(
        "{} points covered by {} subspaces of dimension <= {}; verified {verified}",
        points.len(),
        c.len(),
        spec.l
    ));
    for (i, b) in c.bases.iter().enumerate() {
        let members = c.assignment.iter().filter(|&&a| a == i).count();
        out.records.push(json!({
            "record": "subspace",
            "index": i,
            "basis": b.iter().map(|p| records::point(p)).collect::<Vec<_>>(),
            "members": members,
        }));
        let basis: Vec<String> = b.iter().map(|p| point_text(p)).collect();
        out.line(format!("{:>5}  span{{{}}}  {members} points", i + 1, basis.join(", ")));
    }
    if !verified {
        out.status = Status::Failed;
    }
    Ok(out)
}

fn profile(cfg: &Config) -> Result<Output, CliError> {
    let f = need(&cfg.form, "form")?;
    let spec = need(&cfg.inequality, "inequality")?;
    let bounds = need(&cfg.profile, "profile")?;
    let inst = instance(cfg, f.clone(), spec)?;
    let rows = growth_profile(&inst, bounds)?;
    let mut out = Output::new();
    out.line(format!("{:>12} {:>8} {:>10}", "bound", "classes", "borderline"));
    for r in &rows {
        out.records.push(json!({
            "record": "profile",
            "bound": r.bound,
            "classes": r.classes,
            "borderline": r.borderline,
        }));
        out.line(format!("{:>12} {:>8} {:>10}", r.bound, r.classes, r.borderline));
        if r.borderline > 0 {
            out.status = Status::Borderline;
        }
    }
    Ok(out)
}

fn experiment(cfg: &Config) -> Result<Output, CliError> {
    let fam = need(&cfg.family, "family")?;
    let spec = need(&cfg.inequality, "inequality")?;
    let rows = sequence_experiment(&fam.family, fam.first..=fam.last, &spec.c, &spec.nu)?;
    let mut out = Output::new();
    for r in &rows {
        match &r.outcome {
            SequenceOutcome::Solved {
                form_height,
                bound,
                report,
                ratios,
            } => {
                out.records.push(json!({
                    "record": "sequence",
                    "n": r.n,
                    "status": "solved",
                    "form_height": records::interval(form_height),
                    "bound": bound,
                    "classes": report.classes.len(),
                    "borderline": report.borderline.len(),
                    "representatives": report.classes.iter().map(|c| records::point(&c.representative)).collect::<Vec<_>>(),
                    "ratios": ratios,
                }));
                let shown: Vec<String> = ratios
                    .iter()
                    .map(|r| r.map_or("-".to_string(), |v| format!("{v:.3}")))
                    .collect();
                out.line(format!(
                    "n = {:<4} h(F_n) = {:<16} B = {:<8} classes {:<4} h(F_n)/h(x): [{}]",
                    r.n,
                    format!("{:.6}", form_height.mid().to_f64()),
                    bound,
                    report.classes.len(),
                    shown.join(", ")
                ));
                if !report.borderline.is_empty() {
                    out.status = out.status.worst(Status::Borderline);
                }
            }
            SequenceOutcome::Skipped(e) => {
                out.records.push(json!({
                    "record": "sequence",
                    "n": r.n,
                    "status": "skipped",
                    "reason": e.to_string(),
                }));
                out.line(format!("n = {:<4} skipped: {e}", r.n));
            }
        }
    }
    Ok(out)
}

fn random_element(k: &NumberField, rng: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let coords: Vec<BigRational> = (0..k.degree())
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(-30..=30)), BigInt::from(rng.gen_range(1..=6))))
            .collect();
        let e = FieldElement::from_coords(k, coords);
        if !e.is_zero() {
            return e;
        }
    }
}

/// Elements whose norm involves a prime the finite-place code cannot handle.
fn unsupported(e: &Error) -> bool {
    matches!(e, Error::UnsupportedPrime(_) | Error::PrimeTooLarge(_))
}

fn check(out: &mut Output, name: &str, trials: usize, passed: usize) {
    let ok = passed == trials;
    out.records.push(json!({
        "record": "check",
        "name": name,
        "trials": trials,
        "passed": passed,
        "ok": ok,
    }));
    out.line(format!("{:<4} {name}: {passed}/{trials}", if ok { "ok" } else { "FAIL" }));
    if !ok {
        out.status = Status::Failed;
    }
}

fn verify_core(cfg: &Config) -> Result<Output, CliError> {
    let acc = cfg.output.accuracy;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = Output::new();
    let g = cfg.embedding.target();
    let mut fields = vec![("K", cfg.base.clone())];
    if g != &cfg.base {
        fields.push(("G", g.clone()));
    }
    for (role, k) in &fields {
        let (mut trials, mut passed) = (0, 0);
        while trials < 40 {
            match product_formula_check(&random_element(k, &mut rng), &acc) {
                Ok(ok) => {
                    trials += 1;
                    passed += usize::from(ok);
                }
                Err(e) if unsupported(&e) => {}
                Err(e) => return Err(e.into()),
            }
        }
        check(&mut out, &format!("product formula over {role}"), trials, passed);
    }
    if g != &cfg.base {
        let (mut trials, mut passed) = (0, 0);
        while trials < 40 {
            let a = cfg.embedding.push(&random_element(&cfg.base, &mut rng));
            match norm_extension_check(&a, &cfg.embedding, &cfg.places) {
                Ok(ok) => {
                    trials += 1;
                    passed += usize::from(ok);
                }
                Err(e) if unsupported(&e) => {}
                Err(e) => return Err(e.into()),
            }
        }
        check(&mut out, "norm extension identity", trials, passed);
    }
    if let Some(f) = &cfg.form {
        let (mut trials, mut passed) = (0, 0);
        while trials < 20 {
            let x: Point = (0..=f.m())
                .map(|_| {
                    let coords = (0..cfg.base.degree())
                        .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-9..=9))))
                        .collect();
                    FieldElement::from_coords(&cfg.base, coords)
                })
                .collect();
            match subspace_functional(&x, f, &acc) {
                Ok(paths) => {
                    trials += 1;
                    passed += usize::from(paths.agree());
                }
                Err(Error::FactorVanishes(_) | Error::ZeroElement) => {}
                Err(e) => return Err(e.into()),
            }
        }
        check(&mut out, "subspace functional paths agree", trials, passed);
    }
    if let Some(p) = &cfg.poly {
        let trials = 20;
        let mut passed = 0;
        for _ in 0..trials {
            let x: Point = (0..=p.m)
                .map(|i| {
                    let v = if i == 0 { rng.gen_range(1..=9) } else { rng.gen_range(-9..=9) };
                    cfg.base.int(v)
                })
                .collect();
            passed += usize::from(res_identity_check(&p.poly, &point_polynomial(&x), p.m)?);
        }
        check(&mut out, "resultant identity", trials, passed);
    }
    Ok(out)
}

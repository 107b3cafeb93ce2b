use std::fmt::Write as _;
use std::io::Read;
use std::sync::Arc;

use num_bigint::BigInt;
use ramlab::asfield::{
    degree_p_report, extension_report, fmt_elem, reduce_class, verify_break_oracle, ASClass,
    FqField, ModulusTable,
};
use ramlab::breakcalc::{
    classfield_example_table, custom_extension_report, cyclotomic_table, fdpf_discriminant,
    maximal_extension_report, nonkummerian_maximal_report, BreakProfile, BreakStep, FieldShape,
    RamificationReport,
};
use ramlab::padic::{
    absolute_norm, pisolkar_check, unit_norm_level_check, CyclotomicElem, NormCheckReport,
};
use ramlab::Error;
use serde_json::{json, Value};

use crate::args::{AsArgs, NormArgs, ProfileArgs, ShapeArgs, TableKind, TablesArgs};
use crate::series_io::{parse_series_document, series_to_json};
use crate::CliError;

pub struct Output {
    pub text: String,
    pub json: Value,
    /// False when a check failed; the process then exits with status 1.
    pub ok: bool,
}

fn big(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn shape_of(a: &ShapeArgs) -> Result<FieldShape, CliError> {
    Ok(FieldShape::new(a.p, a.e1, a.f)?)
}

fn report_json(r: &RamificationReport) -> Value {
    let index: Vec<Value> = r
        .index_table
        .iter()
        .map(|s| json!({ "start": s.start, "end": s.end, "index": big(&s.index) }))
        .collect();
    json!({
        "unramified": r.has_unramified_part,
        "upper": r.positive_upper_breaks(),
        "step_dims": r.step_dims,
        "lower": bigs(r.positive_lower_breaks()),
        "inertia_order": big(&r.inertia_order),
        "degree": big(&r.degree),
        "residual_degree": r.residual_degree,
        "different": big(&r.different_valuation),
        "discriminant": big(&r.discriminant_valuation),
        "index_table": index,
    })
}

fn report_text(out: &mut String, r: &RamificationReport) {
    let lower: Vec<String> = r.lower_breaks.iter().map(BigInt::to_string).collect();
    let _ = writeln!(out, "upper breaks   {}", join(&r.upper_breaks));
    let _ = writeln!(out, "step dims      {}", join(&r.step_dims));
    let _ = writeln!(out, "lower breaks   {}", lower.join(" "));
    let _ = writeln!(out, "inertia order  {}", r.inertia_order);
    let _ = writeln!(out, "degree         {}", r.degree);
    let _ = writeln!(out, "different      {}", r.different_valuation);
    let _ = writeln!(out, "discriminant   {}", r.discriminant_valuation);
}

pub fn breaks(a: &ShapeArgs) -> Result<Output, CliError> {
    let shape = shape_of(a)?;
    let r = maximal_extension_report(&shape)?;
    let (fdpf, fdpf_ok) = match fdpf_discriminant(&shape) {
        Ok(v) => {
            let ok = v == r.discriminant_valuation;
            (Some(v), ok)
        }
        Err(Error::Inconsistent(_)) => (None, false),
        Err(e) => return Err(e.into()),
    };
    let mut text = String::new();
    let _ = writeln!(
        text,
        "shape          p={} e1={} f={} (e={}, q={})",
        shape.p(),
        shape.e1(),
        shape.f(),
        shape.e(),
        shape.q()
    );
    report_text(&mut text, &r);
    let _ = writeln!(
        text,
        "fdpf           {} ({})",
        fdpf.as_ref().map_or("-".to_string(), BigInt::to_string),
        if fdpf_ok { "agrees" } else { "MISMATCH" }
    );
    let mut json = report_json(&r);
    json["p"] = json!(shape.p());
    json["e1"] = json!(shape.e1());
    json["f"] = json!(shape.f());
    json["e"] = json!(shape.e());
    json["fdpf"] = fdpf.as_ref().map_or(Value::Null, big);
    json["fdpf_ok"] = json!(fdpf_ok);
    Ok(Output {
        text,
        json,
        ok: fdpf_ok,
    })
}

pub fn parse_breaks(spec: &str) -> Result<Vec<BreakStep>, CliError> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|item| {
            let (u, d) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| CliError::usage(format!("break {item:?} is not upper:dim")))?;
            let u = u
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad upper break {u:?}")))?;
            let d = d
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad dimension {d:?}")))?;
            Ok(BreakStep::new(u, d))
        })
        .collect()
}

pub fn profile(a: &ProfileArgs) -> Result<Output, CliError> {
    let shape = shape_of(&a.shape)?;
    let profile = BreakProfile::new(a.unramified, parse_breaks(&a.breaks)?);
    let r = custom_extension_report(&shape, &profile)?;
    let mut text = String::from("admissible     yes\n");
    report_text(&mut text, &r);
    let mut json = report_json(&r);
    json["admissible"] = json!(true);
    Ok(Output {
        text,
        json,
        ok: true,
    })
}

fn modulus_table() -> Result<ModulusTable, CliError> {
    match std::env::var_os("RAMLAB_MODULUS_TABLE") {
        None => Ok(ModulusTable::default()),
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::usage(format!("cannot read {}: {e}", path.to_string_lossy()))
            })?;
            ModulusTable::from_json(&text).map_err(|e| CliError::usage(e.to_string()))
        }
    }
}

fn class_json(c: &ASClass) -> Value {
    let poles: Vec<Value> = c
        .poles()
        .iter()
        .map(|(e, x)| json!([e, x.coeffs()]))
        .collect();
    json!({
        "kind": c.kind().name(),
        "level": c.level(),
        "trace_part": c.trace_part(),
        "poles": poles,
        "representative": series_to_json(&c.representative(1)),
    })
}

fn class_text(out: &mut String, c: &ASClass) {
    let poles: Vec<String> = c
        .poles()
        .iter()
        .map(|(e, x)| format!("{}*pi^{e}", fmt_elem(x)))
        .collect();
    let _ = writeln!(
        out,
        "kind {} level {} trace {} poles [{}]",
        c.kind().name(),
        c.level(),
        c.trace_part(),
        poles.join(", ")
    );
}

pub fn artin_schreier(a: &AsArgs) -> Result<Output, CliError> {
    let field: Arc<FqField> = FqField::with_table(a.p, a.f, &modulus_table()?)?;
    let text_in = if a.series.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&a.series)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", a.series.display())))?
    };
    let series = parse_series_document(&field, &text_in)?;
    if series.is_empty() {
        return Err(Error::Parse("no series given".into()).into());
    }

    if a.report {
        let r = extension_report(&series)?;
        let mut text = format!(
            "generators     {}\ndimension      {}\n",
            r.generators, r.dimension
        );
        report_text(&mut text, &r.ramification);
        let mut json = report_json(&r.ramification);
        json["generators"] = json!(r.generators);
        json["dimension"] = json!(r.dimension);
        return Ok(Output {
            text,
            json,
            ok: true,
        });
    }

    if a.oracle {
        let class = reduce_class(&series[0])?;
        let m = class.level() as i64;
        let precision = a.oracle_precision.unwrap_or(2 * m + 10);
        let measured = verify_break_oracle(&class, precision)?;
        let r = degree_p_report(&class)?;
        let ok = measured == m + 1;
        let text = format!(
            "level {m}\nmeasured v(sigma(w) - w) = {measured} (expected {})\ndifferent {}\n",
            m + 1,
            r.ramification.different_valuation
        );
        let json = json!({
            "level": m,
            "measured": measured,
            "expected": m + 1,
            "ok": ok,
            "different": big(&r.ramification.different_valuation),
        });
        return Ok(Output { text, json, ok });
    }

    let classes: Vec<ASClass> = series.iter().map(reduce_class).collect::<Result<_, _>>()?;
    let mut text = String::new();
    for c in &classes {
        class_text(&mut text, c);
    }
    let json = match classes.as_slice() {
        [one] => class_json(one),
        many => Value::Array(many.iter().map(class_json).collect()),
    };
    Ok(Output {
        text,
        json,
        ok: true,
    })
}

fn norm_report_json(r: &NormCheckReport) -> Value {
    let residues: Vec<Value> = r
        .residues
        .iter()
        .map(|x| Value::String(x.to_string()))
        .collect();
    json!({
        "passed": r.passed,
        "trials": r.trials,
        "congruence_exponent": r.exponent,
        "residues": residues,
    })
}

pub fn norm(a: &NormArgs) -> Result<Output, CliError> {
    let n = a.precision.unwrap_or(a.m + 4);
    let alpha = pisolkar_check(a.p, a.m, a.trials, n, a.seed)?;
    let (units, powers) = unit_norm_level_check(a.p, a.m, a.trials, n, a.seed)?;
    let uniformiser = absolute_norm(&CyclotomicElem::one_minus_xi(a.p, a.m, n)?);
    let ok = alpha.all_passed()
        && units.all_passed()
        && powers.all_passed()
        && uniformiser.residue() == a.p as u128;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "p={} m={} precision p^{} seed {}",
        a.p, a.m, n, a.seed
    );
    let _ = writeln!(
        text,
        "N(alpha) = 1 mod p^{}   {}/{} pass",
        alpha.exponent, alpha.passed, alpha.trials
    );
    let _ = writeln!(
        text,
        "N(gamma) = 1 mod p^{}   {}/{} pass",
        units.exponent, units.passed, units.trials
    );
    let _ = writeln!(
        text,
        "N(gamma^p) = 1 mod p^{} {}/{} pass",
        powers.exponent, powers.passed, powers.trials
    );
    let _ = writeln!(text, "N(1 - xi) = {}", uniformiser.residue());
    let json = json!({
        "p": a.p,
        "m": a.m,
        "precision": n,
        "seed": a.seed,
        "alpha": norm_report_json(&alpha),
        "gamma": norm_report_json(&units),
        "gamma_p": norm_report_json(&powers),
        "norm_one_minus_xi": uniformiser.residue().to_string(),
        "ok": ok,
    });
    Ok(Output { text, json, ok })
}

pub fn tables(a: &TablesArgs) -> Result<Output, CliError> {
    let need_m = || {
        a.m.ok_or_else(|| CliError::usage("--m is required for this table"))
    };
    match a.kind {
        TableKind::Cyclotomic => {
            let t = cyclotomic_table(a.p, need_m()?)?;
            let mut text = String::new();
            let _ = writeln!(
                text,
                "Q_{}(zeta_{}^{}) over Q_{}{}",
                a.p,
                a.p,
                t.m,
                a.p,
                if t.trivial { " (trivial)" } else { "" }
            );
            let orders: Vec<String> = t.upper_orders.iter().map(BigInt::to_string).collect();
            let _ = writeln!(text, "|G^w|, w=0..m  {}", orders.join(" "));
            for s in &t.lower_segments {
                let end = s.end.as_ref().map_or("inf".to_string(), BigInt::to_string);
                let _ = writeln!(
                    text,
                    "G_t, t in [{}, {}]  = G^{}  order {}",
                    s.start, end, s.upper, s.order
                );
            }
            let _ = writeln!(text, "upper breaks   {}", join(&t.upper_breaks));
            let lower: Vec<String> = t.lower_breaks.iter().map(BigInt::to_string).collect();
            let _ = writeln!(text, "lower breaks   {}", lower.join(" "));
            for c in &t.phi_checks {
                let _ = writeln!(
                    text,
                    "phi(p^{} - 1) = {}  {}",
                    c.n,
                    c.n,
                    if c.ok { "ok" } else { "FAIL" }
                );
            }
            let _ = writeln!(
                text,
                "discriminant   {} (closed form {})",
                t.discriminant_valuation, t.closed_form
            );
            if let Some(k) = &t.kummer_break {
                let _ = writeln!(text, "kummer break   {k}");
            }
            let checks: Vec<Value> = t
                .phi_checks
                .iter()
                .map(|c| json!({ "n": c.n, "g_sum": big(&c.g_sum), "expected": big(&c.expected), "ok": c.ok }))
                .collect();
            let json = json!({
                "kind": "cyclotomic",
                "p": t.p,
                "m": t.m,
                "trivial": t.trivial,
                "upper_orders": bigs(&t.upper_orders),
                "upper": t.upper_breaks,
                "lower": bigs(&t.lower_breaks),
                "phi_checks": checks,
                "discriminant": big(&t.discriminant_valuation),
                "closed_form": big(&t.closed_form),
                "kummer_break": t.kummer_break.as_ref().map_or(Value::Null, big),
                "consistent": t.consistent(),
            });
            Ok(Output {
                text,
                json,
                ok: t.consistent(),
            })
        }
        TableKind::Classfield => {
            let t = classfield_example_table(a.p, a.f.unwrap_or(1), need_m()?)?;
            let mut text = String::new();
            let _ = writeln!(
                text,
                "q={} m={}{}",
                t.q,
                t.m,
                if t.trivial { " (trivial)" } else { "" }
            );
            let idx: Vec<String> = t.index_table.iter().map(BigInt::to_string).collect();
            let _ = writeln!(text, "(G^0:G^n), n=0..m  {}", idx.join(" "));
            let _ = writeln!(text, "upper breaks   {}", join(&t.upper_breaks));
            let lower: Vec<String> = t.lower_breaks.iter().map(BigInt::to_string).collect();
            let _ = writeln!(text, "lower breaks   {}", lower.join(" "));
            let _ = writeln!(
                text,
                "discriminant   {} (closed form {})",
                t.discriminant_valuation, t.closed_form
            );
            let json = json!({
                "kind": "classfield",
                "p": t.p,
                "f": t.f,
                "q": big(&t.q),
                "m": t.m,
                "trivial": t.trivial,
                "index_table": bigs(&t.index_table),
                "upper": t.upper_breaks,
                "lower": bigs(&t.lower_breaks),
                "discriminant": big(&t.discriminant_valuation),
                "closed_form": big(&t.closed_form),
                "consistent": t.consistent(),
            });
            Ok(Output {
                text,
                json,
                ok: t.consistent(),
            })
        }
        TableKind::Nonkummerian => {
            let e =
                a.e.or(a.e1)
                    .ok_or_else(|| CliError::usage("--e is required for this table"))?;
            let f = a.f.unwrap_or(1);
            let r = nonkummerian_maximal_report(a.p, e, f)?;
            let mut text = format!("p={} e={e} f={f}\n", a.p);
            report_text(&mut text, &r);
            let mut json = report_json(&r);
            json["kind"] = json!("nonkummerian");
            json["p"] = json!(a.p);
            json["e"] = json!(e);
            json["f"] = json!(f);
            Ok(Output {
                text,
                json,
                ok: true,
            })
        }
    }
}

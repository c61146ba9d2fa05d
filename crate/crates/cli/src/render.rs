//! Text and LaTeX rendering of closed forms.

use num_traits::Signed;
use vpf_core::arith::Cyclotomic;
use vpf_core::param::{format_affine, format_phase_arg, format_poly, param_names, AffineForm, ParamPoly, Term};
use vpf_core::pipeline::ResultExpr;

/// Names of the expression's parameters: primed when a coordinate change applies.
fn names(expr: &ResultExpr) -> (Vec<String>, Vec<String>) {
    let user = param_names(expr.m);
    if expr.is_identity_transform() {
        (user.clone(), user)
    } else {
        let primed = user.iter().map(|n| format!("{n}'")).collect();
        (user, primed)
    }
}

fn poly_is_sum(p: &ParamPoly) -> bool {
    p.terms().count() > 1
}

/// One summand without its guards, e.g. `-(a-b)` or `1/8*e(1/4*b)`.
pub fn summand(term: &Term, names: &[String]) -> String {
    let (negative, mag) = match term.scalar().to_rational() {
        Ok(q) if q.is_negative() => (true, Cyclotomic::from_rat(-q)),
        _ => (false, term.scalar().clone()),
    };
    let mut factors = Vec::new();
    if !mag.is_one() {
        factors.push(if mag.is_rational() { mag.to_string() } else { format!("({mag})") });
    }
    if !term.phase().is_zero() {
        factors.push(format!("e({})", format_phase_arg(term.phase(), names)));
    }
    let poly = term.poly();
    if *poly != ParamPoly::one(poly.nparams()) {
        let p = format_poly(poly, names);
        let wrap = poly_is_sum(poly) && (negative || !factors.is_empty());
        factors.push(if wrap { format!("({p})") } else { p });
    }
    let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn guard_text(term: &Term, names: &[String]) -> Vec<String> {
    term.guards()
        .iter()
        .map(|g| {
            let op = match g.sense {
                vpf_core::param::GuardSense::GeZero => ">=",
                vpf_core::param::GuardSense::EqZero => "==",
            };
            format!("{} {op} 0", format_affine(&g.form, names))
        })
        .collect()
}

fn transform_lines(expr: &ResultExpr, user: &[String], primed: &[String]) -> Vec<String> {
    expr.transform()
        .iter()
        .zip(primed)
        .map(|(row, p)| format!("{p} = {}", format_affine(&AffineForm::new(row.clone(), 0), user)))
        .collect()
}

pub fn text(expr: &ResultExpr) -> String {
    let (user, vars) = names(expr);
    let mut out = format!("phi({}) =\n", user.join(", "));
    if expr.terms.is_empty() {
        out.push_str("  0\n");
    }
    for t in &expr.terms {
        let g = guard_text(t, &vars);
        let s = summand(t, &vars);
        if g.is_empty() {
            out.push_str(&format!("  {s}\n"));
        } else {
            out.push_str(&format!("  {s} if {}\n", g.join(" and ")));
        }
    }
    if !expr.is_identity_transform() {
        out.push_str(&format!("where {}\n", transform_lines(expr, &user, &vars).join(", ")));
    }
    out
}

/// Rewrites the plain text notation: `p/q` to `\frac`, `^k` to `^{k}`, `*` to spacing.
fn latexify(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_digit() && (i == 0 || !chars[i - 1].is_ascii_alphanumeric()) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                let dstart = i + 1;
                i = dstart;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den: String = chars[dstart..i].iter().collect();
                out.push_str(&format!("\\frac{{{num}}}{{{den}}}"));
            } else {
                out.push_str(&num);
            }
            continue;
        }
        match c {
            '^' => {
                let start = i + 1;
                i = start;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let exp: String = chars[start..i].iter().collect();
                out.push_str(&format!("^{{{exp}}}"));
                continue;
            }
            '*' => out.push_str(" \\, "),
            '\'' => out.push_str("^{\\prime}"),
            _ => out.push(c),
        }
        i += 1;
    }
    out.replace('(', "\\left(").replace(')', "\\right)")
}

pub fn latex(expr: &ResultExpr) -> String {
    let (user, vars) = names(expr);
    let mut lines = Vec::new();
    for t in &expr.terms {
        let g: Vec<String> =
            guard_text(t, &vars).iter().map(|g| latexify(&g.replace(">=", "\\geq").replace("==", "="))).collect();
        let s = latexify(&summand(t, &vars));
        if g.is_empty() {
            lines.push(s);
        } else {
            lines.push(format!("\\left[{}\\right] \\left({s}\\right)", g.join(",\\ ")));
        }
    }
    let body = if lines.is_empty() { "0".into() } else { lines.join("\n  + ") };
    let mut out = format!("\\varphi({}) =\n  {body}\n", user.join(", "));
    if !expr.is_identity_transform() {
        let t: Vec<String> = transform_lines(expr, &user, &vars).iter().map(|l| latexify(l)).collect();
        out.push_str(&format!("\\quad\\text{{where }} {}\n", t.join(",\\ ")));
    }
    out
}

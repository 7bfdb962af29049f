use std::path::Path;

use serde_json::{json, Value};
use zariski::group::spec::{parse_group_spec, LoadedGroup};
use zariski::group::{
    center, derived_subgroup, subgroup_generated_finite, AbelianElement, AbelianIso, ElementSyntax,
    FgAbelianGroup, FiniteGroup, IndexKind, SubgroupHandle, SupportMap,
};
use zariski::word::{parse_equation, ElementaryEquation, ParseError, ParseErrorKind};
use zariski::zariski::{parse_expr, CanonicalClosed, ClosedSetExpr, ExprError};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub position: Option<usize>,
}

impl Failure {
    pub fn validation(message: String) -> Self {
        Failure { code: 3, message, position: None }
    }

    /// Syntax errors exit with 2, unknown coefficients with 3.
    pub fn parse(e: ParseError) -> Self {
        let code = match e.kind {
            ParseErrorKind::UnknownCoefficient(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
            position: Some(e.position),
        }
    }

    pub fn expr(e: ExprError) -> Self {
        match e {
            ExprError::Malformed(m) => Failure { code: 2, message: m, position: None },
            ExprError::Atom { text, error } => {
                let mut f = Failure::parse(error);
                f.message = format!("{text:?}: {}", f.message);
                f
            }
        }
    }
}

pub fn load_group(path: &Path) -> Result<LoadedGroup, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    parse_group_spec(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

/// Reads a JSON file; malformed or empty files are parse errors.
pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let offset: usize = text
            .split_inclusive('\n')
            .take(e.line().saturating_sub(1))
            .map(|l| l.chars().count())
            .sum::<usize>()
            + e.column().saturating_sub(1);
        Failure {
            code: 2,
            message: format!("{}: {e}", path.display()),
            position: Some(offset),
        }
    })
}

/// Splits a comma-separated element list at top-level commas.
pub fn split_elements(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn resolve_subgroup(g: &FiniteGroup, spec: &str) -> Result<SubgroupHandle<usize>, Failure> {
    match spec.trim() {
        "center" => Ok(center(g)),
        "derived" => Ok(derived_subgroup(g)),
        "trivial" => Ok(subgroup_generated_finite(g, &[])),
        "whole" => Ok(subgroup_generated_finite(g, &(0..g.order()).collect::<Vec<_>>())),
        list => {
            let gens = split_elements(list)
                .iter()
                .map(|s| {
                    g.parse_element(s)
                        .ok_or_else(|| Failure::validation(format!("unknown element {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(subgroup_generated_finite(g, &gens))
        }
    }
}

/// An abelian ambient group, possibly presented as a direct sum.
pub struct Ambient {
    pub target: FgAbelianGroup,
    iso: Option<AbelianIso>,
    /// Index bound used for an unbounded direct sum.
    pub truncated_to: Option<usize>,
    pub equation: Option<ElementaryEquation<AbelianElement>>,
}

impl Ambient {
    pub fn fmt(&self, x: &AbelianElement) -> Value {
        match &self.iso {
            None => self.target.element_json(x),
            Some(iso) => iso.source().element_json(&iso.backward(x)),
        }
    }

    pub fn canonical_json(&self, c: &CanonicalClosed) -> Value {
        let mut v = c.to_json(&self.target);
        if self.iso.is_some() {
            v["cosets"] = Value::Array(
                c.cosets()
                    .iter()
                    .map(|co| json!({"kernel": co.kernel.k(), "representative": self.fmt(&co.representative)}))
                    .collect(),
            );
        }
        v
    }
}

type AbelianInputs = (Ambient, Option<ClosedSetExpr<AbelianElement>>, Vec<AbelianElement>);

/// Parses an expression, an element list and an equation over an abelian
/// or direct-sum group, converting everything to invariant-factor form.
/// An unbounded direct sum is cut down to the indices that occur.
pub fn abelian_inputs(
    loaded: &LoadedGroup,
    expr: Option<&Value>,
    elems: &[String],
    eq: Option<&str>,
) -> Result<AbelianInputs, Failure> {
    let unknown = |s: &String| Failure::validation(format!("unknown element {s:?}"));
    match loaded {
        LoadedGroup::Finite(_) => Err(Failure::validation(
            "this command needs an abelian or direct_sum group".into(),
        )),
        LoadedGroup::Abelian(g) => {
            let e = expr.map(|v| parse_expr(v, g)).transpose().map_err(Failure::expr)?;
            let xs = elems
                .iter()
                .map(|s| g.parse_element(s).ok_or_else(|| unknown(s)))
                .collect::<Result<Vec<_>, _>>()?;
            let equation = eq.map(|t| parse_equation(t, g)).transpose().map_err(Failure::parse)?;
            Ok((
                Ambient { target: g.clone(), iso: None, truncated_to: None, equation },
                e,
                xs,
            ))
        }
        LoadedGroup::DirectSum(d) => {
            let e = expr.map(|v| parse_expr(v, d)).transpose().map_err(Failure::expr)?;
            let xs = elems
                .iter()
                .map(|s| d.parse_element(s).ok_or_else(|| unknown(s)))
                .collect::<Result<Vec<_>, _>>()?;
            let equation = eq.map(|t| parse_equation(t, d)).transpose().map_err(Failure::parse)?;
            let mut support: Vec<&SupportMap> = xs.iter().collect();
            if let Some(e) = &e {
                support.extend(e.atoms().into_iter().flat_map(|a| a.coeffs()));
            }
            if let Some(q) = &equation {
                support.extend(q.coeffs());
            }
            let (d, truncated_to) = match d.index_kind() {
                IndexKind::Finite(_) => (d.clone(), None),
                IndexKind::Naturals => {
                    let n = support
                        .iter()
                        .flat_map(|x| x.support())
                        .max()
                        .map_or(1, |m| m + 1);
                    let t = d.truncated(n).map_err(|e| Failure::validation(e.to_string()))?;
                    (t, Some(n))
                }
            };
            let iso = AbelianIso::new(&d).map_err(|e| Failure::validation(e.to_string()))?;
            let e = e.map(|e| e.map(|x| iso.forward(x)));
            let xs = xs.iter().map(|x| iso.forward(x)).collect();
            let equation = equation.map(|q| q.map(|x| iso.forward(x)));
            Ok((
                Ambient {
                    target: iso.target().clone(),
                    iso: Some(iso),
                    truncated_to,
                    equation,
                },
                e,
                xs,
            ))
        }
    }
}

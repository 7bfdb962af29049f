use serde_json::{json, Value};

use crate::group::{ElementSyntax, Enumerable, Group};
use crate::word::{evaluate, parse_equation, print_equation, ElementaryEquation, ParseError};

/// A finite union/intersection tree over elementary atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedSetExpr<E> {
    Union(Vec<ClosedSetExpr<E>>),
    Intersection(Vec<ClosedSetExpr<E>>),
    Atom(ElementaryEquation<E>),
    Empty,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("atom {text:?}: {error}")]
    Atom { text: String, error: ParseError },
}

impl<E: Clone + Ord> ClosedSetExpr<E> {
    /// `{x = p : p ∈ points}` as a union of singleton atoms.
    pub fn points(points: &[E]) -> Self {
        if points.is_empty() {
            return ClosedSetExpr::Empty;
        }
        ClosedSetExpr::Union(
            points
                .iter()
                .map(|p| ClosedSetExpr::Atom(ElementaryEquation::singleton(p.clone())))
                .collect(),
        )
    }

    pub fn depth(&self) -> usize {
        match self {
            ClosedSetExpr::Union(c) | ClosedSetExpr::Intersection(c) => {
                1 + c.iter().map(|e| e.depth()).max().unwrap_or(0)
            }
            _ => 0,
        }
    }

    /// Every atom, left to right.
    pub fn atoms(&self) -> Vec<&ElementaryEquation<E>> {
        let mut out = Vec::new();
        fn walk<'a, E>(e: &'a ClosedSetExpr<E>, out: &mut Vec<&'a ElementaryEquation<E>>) {
            match e {
                ClosedSetExpr::Union(c) | ClosedSetExpr::Intersection(c) => {
                    c.iter().for_each(|x| walk(x, out))
                }
                ClosedSetExpr::Atom(a) => out.push(a),
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }

    /// Union and intersection nodes must have at least one child.
    pub fn validate(&self) -> Result<(), ExprError> {
        match self {
            ClosedSetExpr::Union(c) | ClosedSetExpr::Intersection(c) => {
                if c.is_empty() {
                    return Err(ExprError::Malformed("node without children".into()));
                }
                c.iter().try_for_each(|x| x.validate())
            }
            _ => Ok(()),
        }
    }

    /// Tree semantics: atoms by evaluation, nodes by set operations.
    pub fn member<G: Group<Elem = E>>(&self, g: &G, x: &E) -> bool {
        match self {
            ClosedSetExpr::Union(c) => c.iter().any(|e| e.member(g, x)),
            ClosedSetExpr::Intersection(c) => c.iter().all(|e| e.member(g, x)),
            ClosedSetExpr::Atom(a) => evaluate(g, a, x),
            ClosedSetExpr::Empty => false,
            ClosedSetExpr::Full => true,
        }
    }

    /// The denoted set by enumeration, in element order.
    pub fn denote<G: Enumerable<Elem = E>>(&self, g: &G) -> Vec<E> {
        g.elements().into_iter().filter(|x| self.member(g, x)).collect()
    }

    pub fn map<T, F: Fn(&E) -> T + Copy>(&self, f: F) -> ClosedSetExpr<T> {
        match self {
            ClosedSetExpr::Union(c) => ClosedSetExpr::Union(c.iter().map(|e| e.map(f)).collect()),
            ClosedSetExpr::Intersection(c) => {
                ClosedSetExpr::Intersection(c.iter().map(|e| e.map(f)).collect())
            }
            ClosedSetExpr::Atom(a) => ClosedSetExpr::Atom(a.map(f)),
            ClosedSetExpr::Empty => ClosedSetExpr::Empty,
            ClosedSetExpr::Full => ClosedSetExpr::Full,
        }
    }

    pub fn to_json<G: ElementSyntax<Elem = E>>(&self, g: &G) -> Value {
        match self {
            ClosedSetExpr::Union(c) => {
                json!({"op": "union", "children": c.iter().map(|e| e.to_json(g)).collect::<Vec<_>>()})
            }
            ClosedSetExpr::Intersection(c) => json!({
                "op": "intersection",
                "children": c.iter().map(|e| e.to_json(g)).collect::<Vec<_>>()
            }),
            ClosedSetExpr::Atom(a) => json!({"atom": print_equation(a, g)}),
            ClosedSetExpr::Empty => json!("empty"),
            ClosedSetExpr::Full => json!("full"),
        }
    }
}

/// Parses the JSON expression format:
/// `{"op": "union"|"intersection", "children": [...]}`, `{"atom": "<eq>"}`,
/// `{"points": ["<g>", ...]}`, `"empty"` or `"full"`.
pub fn parse_expr<G: ElementSyntax>(v: &Value, g: &G) -> Result<ClosedSetExpr<G::Elem>, ExprError> {
    let bad = |m: &str| ExprError::Malformed(m.to_string());
    match v {
        Value::String(s) if s == "empty" => Ok(ClosedSetExpr::Empty),
        Value::String(s) if s == "full" => Ok(ClosedSetExpr::Full),
        Value::Object(o) => {
            if let Some(a) = o.get("atom") {
                let text = a.as_str().ok_or_else(|| bad("\"atom\" must be a string"))?;
                let eq = parse_equation(text, g).map_err(|error| ExprError::Atom {
                    text: text.to_string(),
                    error,
                })?;
                return Ok(ClosedSetExpr::Atom(eq));
            }
            if let Some(p) = o.get("points") {
                let list = p.as_array().ok_or_else(|| bad("\"points\" must be an array"))?;
                let pts = list
                    .iter()
                    .map(|x| {
                        let text = match x {
                            Value::String(s) => s.clone(),
                            Value::Number(n) => n.to_string(),
                            other => other.to_string(),
                        };
                        parse_equation(&format!("x = {text}"), g).map_err(|error| ExprError::Atom {
                            text: format!("x = {text}"),
                            error,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if pts.is_empty() {
                    return Ok(ClosedSetExpr::Empty);
                }
                return Ok(ClosedSetExpr::Union(pts.into_iter().map(ClosedSetExpr::Atom).collect()));
            }
            let op = o
                .get("op")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("expected \"op\", \"atom\" or \"points\""))?;
            let children = o
                .get("children")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("\"children\" must be an array"))?;
            if children.is_empty() {
                return Err(bad("node without children"));
            }
            let kids = children
                .iter()
                .map(|c| parse_expr(c, g))
                .collect::<Result<Vec<_>, _>>()?;
            match op {
                "union" => Ok(ClosedSetExpr::Union(kids)),
                "intersection" => Ok(ClosedSetExpr::Intersection(kids)),
                other => Err(ExprError::Malformed(format!("unknown op {other:?}"))),
            }
        }
        _ => Err(bad("expected an object, \"empty\" or \"full\"")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FgAbelianGroup;

    #[test]
    fn json_round_trip_and_semantics() {
        let g = FgAbelianGroup::cyclic(12).unwrap();
        let v: Value = serde_json::from_str(
            r#"{"op":"union","children":[{"atom":"x 0 x = 6"},{"points":[1]},"empty"]}"#,
        )
        .unwrap();
        let e = parse_expr(&v, &g).unwrap();
        let set: Vec<i64> = e.denote(&g).iter().map(|x| x.coords[0]).collect();
        assert_eq!(set, vec![1, 3, 9]);
        assert_eq!(parse_expr(&e.to_json(&g), &g).unwrap(), e);
        assert_eq!(e.depth(), 2);
    }

    #[test]
    fn malformed_inputs() {
        let g = FgAbelianGroup::cyclic(4).unwrap();
        let bad = |s: &str| parse_expr(&serde_json::from_str(s).unwrap(), &g).unwrap_err();
        assert!(matches!(bad(r#"{"op":"union","children":[]}"#), ExprError::Malformed(_)));
        assert!(matches!(bad(r#"{"op":"xor","children":["full"]}"#), ExprError::Malformed(_)));
        assert!(matches!(bad(r#"{"atom":"x = 9x"}"#), ExprError::Atom { .. }));
        assert!(matches!(bad("3"), ExprError::Malformed(_)));
    }
}

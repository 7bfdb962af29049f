//! JSON group specifications.
//!
//! ```json
//! {"kind": "cyclic", "n": 12}
//! {"kind": "dihedral", "n": 4}
//! {"kind": "symmetric", "n": 3}
//! {"kind": "alternating", "n": 4}
//! {"kind": "quaternion"}
//! {"kind": "product", "factors": [{...}, {...}]}
//! {"kind": "abelian", "rank": 1, "invariants": [2, 4]}
//! {"kind": "cayley", "table": [[0, 1], [1, 0]], "labels": ["e", "a"]}
//! {"kind": "semidirect_involution", "base": {...}, "automorphism": [0, 2, 1, 3]}
//! {"kind": "direct_sum", "factors": [{...}, ...]}
//! {"kind": "direct_sum", "factor": {...}, "count": 16}
//! {"kind": "direct_sum", "factor": {...}, "index": "naturals"}
//! ```

use serde_json::Value;

use super::{
    DirectSumGroup, ElementSyntax, Factor, FgAbelianGroup, FiniteGroup, GroupError, IndexKind,
};

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("malformed group specification: {0}")]
    Malformed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A group built from a specification.
#[derive(Debug, Clone)]
pub enum LoadedGroup {
    Finite(FiniteGroup),
    Abelian(FgAbelianGroup),
    DirectSum(DirectSumGroup),
}

impl LoadedGroup {
    /// Cayley-table view, when the group is finite and small enough.
    pub fn to_finite(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            LoadedGroup::Finite(g) => Ok(g.clone()),
            LoadedGroup::Abelian(a) => a.to_finite_group(),
            LoadedGroup::DirectSum(d) => direct_sum_to_finite(d),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            LoadedGroup::Finite(_) => "finite",
            LoadedGroup::Abelian(_) => "abelian",
            LoadedGroup::DirectSum(_) => "direct_sum",
        }
    }
}

fn direct_sum_to_finite(d: &DirectSumGroup) -> Result<FiniteGroup, GroupError> {
    use super::Group;
    let els = d.enumerate()?;
    let n = els.len();
    if n > 4096 {
        return Err(GroupError::TooLarge(format!("order {n}")));
    }
    let index: std::collections::HashMap<_, usize> =
        els.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let mut table = Vec::with_capacity(n * n);
    for a in &els {
        for b in &els {
            table.push(index[&d.op(a, b)]);
        }
    }
    let labels = els.iter().map(|e| d.format_element(e)).collect();
    FiniteGroup::from_flat(n, table, Some(labels))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, SpecError> {
    v.get(name)
        .ok_or_else(|| SpecError::Malformed(format!("missing field {name:?}")))
}

fn uint(v: &Value, name: &str) -> Result<u64, SpecError> {
    field(v, name)?
        .as_u64()
        .ok_or_else(|| SpecError::Malformed(format!("field {name:?} must be a nonnegative integer")))
}

fn uint_list(v: &Value, name: &str) -> Result<Vec<u64>, SpecError> {
    field(v, name)?
        .as_array()
        .ok_or_else(|| SpecError::Malformed(format!("field {name:?} must be an array")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .ok_or_else(|| SpecError::Malformed(format!("{name:?} entries must be integers")))
        })
        .collect()
}

pub fn parse_group_spec(text: &str) -> Result<LoadedGroup, SpecError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| SpecError::Malformed(e.to_string()))?;
    load(&v)
}

pub fn load(v: &Value) -> Result<LoadedGroup, SpecError> {
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| SpecError::Malformed("\"kind\" must be a string".into()))?;
    let small = |n: u64| -> Result<usize, SpecError> {
        usize::try_from(n).map_err(|_| SpecError::Malformed(format!("{n} is too large")))
    };
    Ok(match kind {
        "cyclic" => {
            let n = uint(v, "n")?;
            if n == 0 {
                return Err(GroupError::InvalidInvariants("cyclic group of order 0".into()).into());
            }
            LoadedGroup::Abelian(FgAbelianGroup::cyclic(n)?)
        }
        "dihedral" => LoadedGroup::Finite(FiniteGroup::dihedral(small(uint(v, "n")?)?)?),
        "symmetric" => LoadedGroup::Finite(FiniteGroup::symmetric(small(uint(v, "n")?)?)?),
        "alternating" => LoadedGroup::Finite(FiniteGroup::alternating(small(uint(v, "n")?)?)?),
        "quaternion" => LoadedGroup::Finite(FiniteGroup::quaternion()?),
        "abelian" => {
            let rank = small(uint(v, "rank")?)?;
            let inv = match v.get("invariants") {
                Some(_) => uint_list(v, "invariants")?,
                None => vec![],
            };
            LoadedGroup::Abelian(FgAbelianGroup::new(rank, inv)?)
        }
        "cayley" => {
            let rows = field(v, "table")?
                .as_array()
                .ok_or_else(|| SpecError::Malformed("\"table\" must be an array".into()))?;
            let mut table = Vec::with_capacity(rows.len());
            for r in rows {
                let row = r
                    .as_array()
                    .ok_or_else(|| SpecError::Malformed("table rows must be arrays".into()))?
                    .iter()
                    .map(|x| {
                        x.as_u64().map(|x| x as usize).ok_or_else(|| {
                            SpecError::Malformed("table entries must be integers".into())
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                table.push(row);
            }
            let labels = match v.get("labels") {
                None | Some(Value::Null) => None,
                Some(Value::Array(ls)) => Some(
                    ls.iter()
                        .map(|l| {
                            l.as_str().map(str::to_string).ok_or_else(|| {
                                SpecError::Malformed("labels must be strings".into())
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                Some(_) => return Err(SpecError::Malformed("\"labels\" must be an array".into())),
            };
            LoadedGroup::Finite(FiniteGroup::from_table(table, labels)?)
        }
        "product" => {
            let factors = field(v, "factors")?
                .as_array()
                .ok_or_else(|| SpecError::Malformed("\"factors\" must be an array".into()))?;
            let mut iter = factors.iter();
            let first = iter
                .next()
                .ok_or_else(|| SpecError::Malformed("product needs at least one factor".into()))?;
            let mut acc = load(first)?.to_finite()?;
            for f in iter {
                acc = FiniteGroup::direct_product(&acc, &load(f)?.to_finite()?)?;
            }
            LoadedGroup::Finite(acc)
        }
        "semidirect_involution" => {
            let base = load(field(v, "base")?)?.to_finite()?;
            let map = field(v, "automorphism")?
                .as_array()
                .ok_or_else(|| SpecError::Malformed("\"automorphism\" must be an array".into()))?;
            let f = map
                .iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_u64().map(|n| n as usize),
                    Value::String(s) => base.parse_element(s),
                    _ => None,
                })
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| {
                    SpecError::Malformed("automorphism entries must be indices or labels".into())
                })?;
            LoadedGroup::Finite(FiniteGroup::semidirect_involution(&base, &f)?)
        }
        "direct_sum" => {
            let to_factor = |g: LoadedGroup| -> Result<Factor, SpecError> {
                Ok(match g {
                    LoadedGroup::Finite(f) => Factor::Finite(f),
                    LoadedGroup::Abelian(a) => Factor::Abelian(a),
                    LoadedGroup::DirectSum(_) => {
                        return Err(GroupError::InvalidFactor("nested direct sum".into()).into())
                    }
                })
            };
            if let Some(fs) = v.get("factors") {
                let fs = fs
                    .as_array()
                    .ok_or_else(|| SpecError::Malformed("\"factors\" must be an array".into()))?;
                let factors = fs
                    .iter()
                    .map(|f| to_factor(load(f)?))
                    .collect::<Result<Vec<_>, _>>()?;
                let n = factors.len();
                LoadedGroup::DirectSum(DirectSumGroup::new(factors, IndexKind::Finite(n))?)
            } else {
                let factor = to_factor(load(field(v, "factor")?)?)?;
                let index = match (v.get("count"), v.get("index").and_then(Value::as_str)) {
                    (Some(_), _) => IndexKind::Finite(small(uint(v, "count")?)?),
                    (None, Some("naturals")) => IndexKind::Naturals,
                    _ => {
                        return Err(SpecError::Malformed(
                            "direct_sum needs \"factors\", \"count\" or \"index\": \"naturals\"".into(),
                        ))
                    }
                };
                LoadedGroup::DirectSum(DirectSumGroup::power(factor, index)?)
            }
        }
        other => return Err(SpecError::Malformed(format!("unknown kind {other:?}"))),
    })
}

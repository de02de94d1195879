use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::finite::{table_len, FiniteAlgebra};
use super::signature::Signature;
use crate::error::{Error, Result};

/// Unvalidated algebra as read from a file: a name, a size, an optional
/// declared signature and one nested row-major table per symbol.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawAlgebra {
    #[serde(default)]
    pub name: String,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Vec<(String, usize)>>,
    pub operations: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
}

fn flatten(sym: &str, v: &Value, depth: usize, size: usize, out: &mut Vec<usize>) -> Result<()> {
    let shape = |detail: String| Error::TableShape {
        symbol: sym.to_string(),
        detail,
    };
    if depth == 0 {
        let x = v
            .as_u64()
            .ok_or_else(|| shape(format!("expected an element, found {v}")))?;
        out.push(x as usize);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| shape(format!("expected a nested array of depth {depth}")))?;
    if arr.len() != size {
        return Err(shape(format!("row of length {} where {size} expected", arr.len())));
    }
    arr.iter().try_for_each(|x| flatten(sym, x, depth - 1, size, out))
}

/// Validates a raw algebra. Symbols keep the order of the declared signature,
/// or the order of `operations` when none is declared.
pub fn validate_algebra(raw: &RawAlgebra, size_cap: usize) -> Result<FiniteAlgebra> {
    if raw.size == 0 {
        return Err(Error::InvalidAlgebra("size must be positive".into()));
    }
    if raw.size > size_cap {
        return Err(Error::SizeCap {
            size: raw.size,
            cap: size_cap,
        });
    }
    let mut entries: Vec<(String, Option<usize>, Option<&Value>)> = Vec::new();
    for (name, spec) in &raw.operations {
        let obj = spec.as_object().ok_or_else(|| Error::TableShape {
            symbol: name.clone(),
            detail: "expected an object with `arity` and `table`".into(),
        })?;
        let arity = obj.get("arity").and_then(Value::as_u64).map(|a| a as usize);
        entries.push((name.clone(), arity, obj.get("table")));
    }
    let declared: Vec<(String, usize)> = match &raw.signature {
        Some(sig) => {
            for (name, _, _) in &entries {
                if !sig.iter().any(|(n, _)| n == name) {
                    return Err(Error::ExtraTable(name.clone()));
                }
            }
            sig.clone()
        }
        None => entries
            .iter()
            .map(|(n, a, _)| {
                a.map(|a| (n.clone(), a)).ok_or_else(|| Error::TableShape {
                    symbol: n.clone(),
                    detail: "missing `arity`".into(),
                })
            })
            .collect::<Result<_>>()?,
    };
    let signature = Signature::new(declared.iter().cloned())?;
    let mut tables = Vec::new();
    for (name, arity) in &declared {
        let (_, given_arity, table) = entries
            .iter()
            .find(|(n, _, _)| n == name)
            .ok_or_else(|| Error::MissingTable(name.clone()))?;
        if let Some(g) = given_arity {
            if g != arity {
                return Err(Error::Arity {
                    symbol: name.clone(),
                    expected: *arity,
                    found: *g,
                });
            }
        }
        let table = table.ok_or_else(|| Error::MissingTable(name.clone()))?;
        let mut flat = Vec::with_capacity(table_len(raw.size, *arity).unwrap_or(0));
        flatten(name, table, *arity, raw.size, &mut flat)?;
        tables.push(flat);
    }
    let name = if raw.name.is_empty() { "A".to_string() } else { raw.name.clone() };
    FiniteAlgebra::new(name, signature, raw.size, tables)
}

fn nest(table: &[usize], size: usize, arity: usize) -> Value {
    if arity == 0 {
        return Value::from(table[0]);
    }
    let chunk = table.len() / size;
    Value::Array(
        (0..size)
            .map(|i| nest(&table[i * chunk..(i + 1) * chunk], size, arity - 1))
            .collect(),
    )
}

/// The file form of an algebra.
pub fn to_raw(a: &FiniteAlgebra) -> RawAlgebra {
    let mut ops = Map::new();
    for (i, s) in a.signature().symbols().iter().enumerate() {
        let mut o = Map::new();
        o.insert("arity".into(), Value::from(s.arity));
        o.insert("table".into(), nest(a.table(i), a.size(), s.arity));
        ops.insert(s.name.clone(), Value::Object(o));
    }
    RawAlgebra {
        name: a.name().to_string(),
        size: a.size(),
        signature: None,
        operations: ops,
        elements: None,
    }
}

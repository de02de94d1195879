use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of operation symbols. The order is the canonical order used by
/// every search that enumerates terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        let mut seen = HashMap::new();
        for (name, arity) in symbols {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::Invalid("empty symbol name".into()));
            }
            if seen.insert(name.clone(), ()).is_some() {
                return Err(Error::DuplicateSymbol(name));
            }
            out.push(Symbol { name, arity });
        }
        Ok(Signature { symbols: out })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity(&self, i: usize) -> usize {
        self.symbols[i].arity
    }

    pub fn name(&self, i: usize) -> &str {
        &self.symbols[i].name
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    pub fn constants(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.symbols[i].arity == 0)
    }

    pub fn with_symbol(&self, name: &str, arity: usize) -> Result<Signature> {
        if self.index_of(name).is_some() {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        let mut s = self.clone();
        s.symbols.push(Symbol {
            name: name.to_string(),
            arity,
        });
        Ok(s)
    }

    /// Keeps the named symbols, in this signature's order.
    pub fn restrict(&self, names: &[&str]) -> Result<Signature> {
        for n in names {
            if self.index_of(n).is_none() {
                return Err(Error::UnknownSymbol(n.to_string()));
            }
        }
        Ok(Signature {
            symbols: self
                .symbols
                .iter()
                .filter(|s| names.contains(&s.name.as_str()))
                .cloned()
                .collect(),
        })
    }

    pub fn describe(&self) -> String {
        self.symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

use serde::{Deserialize, Serialize};

use super::signature::Signature;
use crate::error::{Error, Result};

/// Default cap on the size of algebras accepted from the outside.
pub const DEFAULT_SIZE_CAP: usize = 64;

/// An algebra on the universe {0, ..., size-1}. Each table is stored
/// row-major: the tuple (a_0, ..., a_{k-1}) sits at sum a_i * n^(k-1-i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
}

pub(crate) fn table_len(size: usize, arity: usize) -> Option<usize> {
    size.checked_pow(arity as u32)
}

pub(crate) fn encode(size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

pub(crate) fn decode(size: usize, arity: usize, mut index: usize, out: &mut [usize]) {
    for i in (0..arity).rev() {
        out[i] = index % size;
        index /= size;
    }
}

impl FiniteAlgebra {
    /// Checks tables against the signature and the universe size.
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("universe must be nonempty".into()));
        }
        if tables.len() != signature.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} tables for {} symbols",
                tables.len(),
                signature.len()
            )));
        }
        for (i, t) in tables.iter().enumerate() {
            let sym = signature.name(i).to_string();
            let expected = table_len(size, signature.arity(i)).ok_or_else(|| Error::TableShape {
                symbol: sym.clone(),
                detail: "table too large".into(),
            })?;
            if t.len() != expected {
                return Err(Error::TableShape {
                    symbol: sym,
                    detail: format!("expected {expected} entries, found {}", t.len()),
                });
            }
            if let Some((index, &value)) = t.iter().enumerate().find(|(_, &v)| v >= size) {
                return Err(Error::ValueOutOfRange {
                    symbol: sym,
                    index,
                    value,
                    size,
                });
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            signature,
            size,
            tables,
        })
    }

    /// Builds the tables by calling `f(symbol index, args)` on every tuple.
    pub fn from_fn(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        mut f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(signature.len());
        let mut args = vec![0; signature.max_arity()];
        for s in 0..signature.len() {
            let k = signature.arity(s);
            let len = table_len(size, k)
                .ok_or_else(|| Error::InvalidAlgebra("table too large".into()))?;
            let mut t = Vec::with_capacity(len);
            for idx in 0..len {
                decode(size, k, idx, &mut args[..k]);
                t.push(f(s, &args[..k]));
            }
            tables.push(t);
        }
        FiniteAlgebra::new(name, signature, size, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn table(&self, sym: usize) -> &[usize] {
        &self.tables[sym]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    #[inline]
    pub fn op(&self, sym: usize, args: &[usize]) -> usize {
        self.tables[sym][encode(self.size, args)]
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.signature.index_of(name)
    }

    /// Applies a symbol by name; `None` if the symbol is absent or the arity is wrong.
    pub fn apply(&self, name: &str, args: &[usize]) -> Option<usize> {
        let s = self.symbol(name)?;
        if self.signature.arity(s) != args.len() || args.iter().any(|&a| a >= self.size) {
            return None;
        }
        Some(self.op(s, args))
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.apply(name, &[])
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> bool {
        self.signature == other.signature
    }

    pub fn require_same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.same_signature(other) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "`{}` has [{}] but `{}` has [{}]",
                self.name,
                self.signature.describe(),
                other.name,
                other.signature.describe()
            )))
        }
    }

    /// The reduct to the named symbols.
    pub fn reduct(&self, names: &[&str]) -> Result<FiniteAlgebra> {
        let sig = self.signature.restrict(names)?;
        let tables = sig
            .symbols()
            .iter()
            .map(|s| self.tables[self.symbol(&s.name).unwrap()].clone())
            .collect();
        FiniteAlgebra::new(self.name.clone(), sig, self.size, tables)
    }

    /// Adds one operation.
    pub fn expanded(&self, name: &str, arity: usize, table: Vec<usize>) -> Result<FiniteAlgebra> {
        let sig = self.signature.with_symbol(name, arity)?;
        let mut tables = self.tables.clone();
        tables.push(table);
        FiniteAlgebra::new(self.name.clone(), sig, self.size, tables)
    }

    pub fn check_size_cap(&self, cap: usize) -> Result<()> {
        if self.size > cap {
            Err(Error::SizeCap {
                size: self.size,
                cap,
            })
        } else {
            Ok(())
        }
    }

    /// Whether the subset is closed under every operation.
    pub fn is_subuniverse(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.size];
        for &a in set {
            if a >= self.size {
                return false;
            }
            member[a] = true;
        }
        let mut args = vec![0; self.signature.max_arity()];
        for s in 0..self.signature.len() {
            let k = self.signature.arity(s);
            let mut idx = vec![0usize; k];
            if k > 0 && set.is_empty() {
                continue;
            }
            loop {
                for j in 0..k {
                    args[j] = set[idx[j]];
                }
                if !member[self.op(s, &args[..k])] {
                    return false;
                }
                if !odometer(&mut idx, set.len()) {
                    break;
                }
            }
        }
        true
    }
}

/// Advances a counter over `len^k`; returns false after the last tuple.
pub(crate) fn odometer(idx: &mut [usize], len: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < len {
            return true;
        }
        idx[i] = 0;
    }
    false
}

//! Loading algebras and formulas from gallery ids, files or literal text.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::algebra::{to_raw, validate_algebra, FiniteAlgebra, RawAlgebra, Signature, DEFAULT_SIZE_CAP};
use crate::classops::{ClassOp, ClassSpec};
use crate::error::{Error, Result};
use crate::expansion::ExpansionOp;
use crate::formula::{parse, ImplicitDef};
use crate::gallery::{make_algebra, make_formula};

/// Everything read while serving a command, hashed into the report.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn note(&mut self, label: &str, content: &str) {
        self.hasher.update(label.as_bytes());
        self.hasher.update([0]);
        self.hasher.update(content.as_bytes());
        self.hasher.update([0]);
    }

    pub fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }

    /// An algebra from `gallery:<id>` or a JSON file.
    pub fn algebra(&mut self, spec: &str) -> Result<FiniteAlgebra> {
        let a = if spec.starts_with("gallery:") {
            make_algebra(spec)?
        } else {
            let text = std::fs::read_to_string(spec).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
            let raw: RawAlgebra = serde_json::from_str(&text)?;
            let mut a = validate_algebra(&raw, DEFAULT_SIZE_CAP)?;
            if raw.name.is_empty() {
                let stem = Path::new(spec).file_stem().map_or("A".into(), |s| s.to_string_lossy().to_string());
                a = a.renamed(stem);
            }
            a
        };
        self.note("algebra", &serde_json::to_string(&to_raw(&a))?);
        Ok(a)
    }

    pub fn class(&mut self, specs: &[String], op: ClassOp) -> Result<ClassSpec> {
        let gens = specs.iter().map(|s| self.algebra(s)).collect::<Result<Vec<_>>>()?;
        ClassSpec::new(gens, op)
    }

    /// A formula from `gallery:<id>`, a file, or literal text. Text may start
    /// with `[x1, x2; y]` naming the inputs and output; otherwise `inputs`
    /// and `out` apply, and by default the inputs are the free variables
    /// other than the output in sorted order.
    pub fn formula(&mut self, spec: &str, sig: &Signature, inputs: &[String], out: Option<&str>) -> Result<ImplicitDef> {
        let def = if spec.starts_with("gallery:") {
            let mut d = make_formula(spec)?;
            d.formula.check(sig)?;
            if !inputs.is_empty() {
                d.inputs = inputs.to_vec();
            }
            if let Some(o) = out {
                d.output = o.to_string();
            }
            d
        } else {
            let text = if Path::new(spec).is_file() {
                std::fs::read_to_string(spec).map_err(|e| Error::Io(format!("{spec}: {e}")))?
            } else {
                spec.to_string()
            };
            text_formula(text.trim(), sig, inputs, out)?
        };
        def.validate()?;
        self.note("formula", &def.to_string());
        Ok(def)
    }

    /// `SYM=FORMULA` where FORMULA is as in [`Inputs::formula`].
    pub fn definition(&mut self, spec: &str, sig: &Signature) -> Result<ExpansionOp> {
        let (sym, rest) = spec
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected SYM=FORMULA, found `{spec}`")))?;
        let def = self.formula(rest.trim(), sig, &[], None)?;
        Ok(ExpansionOp::new(sym.trim(), def))
    }
}

fn text_formula(text: &str, sig: &Signature, inputs: &[String], out: Option<&str>) -> Result<ImplicitDef> {
    if let Some(rest) = text.strip_prefix('[') {
        let (head, body) = rest
            .split_once(']')
            .ok_or_else(|| Error::Invalid("unclosed `[inputs; output]` header".into()))?;
        let (ins, o) = head
            .split_once(';')
            .ok_or_else(|| Error::Invalid("header must read `[inputs; output]`".into()))?;
        let ins: Vec<String> = ins.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        let f = parse(body, sig)?;
        return Ok(ImplicitDef { formula: f, inputs: ins, output: o.trim().to_string() });
    }
    let f = parse(text, sig)?;
    let output = out.unwrap_or("y").to_string();
    let inputs = if inputs.is_empty() {
        f.free_vars().into_iter().filter(|v| *v != output).collect()
    } else {
        inputs.to_vec()
    };
    Ok(ImplicitDef { formula: f, inputs, output })
}

/// Comma separated element list.
pub fn elements(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Invalid(format!("`{s}` is not an element index"))))
        .collect()
}

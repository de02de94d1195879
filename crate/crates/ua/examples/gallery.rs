//! The named algebras and formulas available as `gallery:<id>`.
//!
//!     cargo run --example gallery

use ua::gallery::{make_algebra, make_formula, ALGEBRA_IDS, FORMULA_IDS};

fn main() -> ua::Result<()> {
    println!("algebras:");
    for id in ALGEBRA_IDS {
        println!("  {id}");
    }
    for id in ["chain_heyting(4)", "bool_top_pdl(2)", "lukasiewicz(3)", "monoid_c(3)", "ordered_sum(chain_heyting(2),chain_heyting(3))"] {
        let a = make_algebra(id)?;
        println!("{id}: {} with {} elements", a.name(), a.size());
    }
    println!("formulas:");
    for id in FORMULA_IDS {
        println!("  {id}");
    }
    for id in ["complement", "weak_inverse", "mv_constant(3)", "isbell(1)"] {
        let d = make_formula(id)?;
        println!("{id}: {}({}) = {} where {}", id, d.inputs.join(", "), d.output, d.formula);
    }
    Ok(())
}

//! pp expansions: adding defined operations, the axioms of the expanded
//! class, and the primality route to a Beth companion.
//!
//!     cargo run --example expansions

use ua::algebra::is_isomorphic;
use ua::classops::ClassSpec;
use ua::expansion::{beth_primal_witness, expand, expand_class, ExpansionOp, ExpansionSpec};
use ua::gallery::{bool2, complement, d2_bdl, lukasiewicz, mv_constant, weak_inverse, zmod_ring};
use ua::{SearchBudget, Verdict};

fn main() -> ua::Result<()> {
    let budget = SearchBudget::default();
    let e = expand(&d2_bdl(), &[ExpansionOp::new("~", complement())])?;
    println!("{} isomorphic to B2: {}", e.name(), is_isomorphic(&e, &bool2(), &budget)?.label());

    let spec = ExpansionSpec::new(ClassSpec::q(vec![zmod_ring(2)?, zmod_ring(3)?, zmod_ring(5)?])?, vec![ExpansionOp::new("w", weak_inverse())])?;
    let class = expand_class(&spec, false, &budget)?;
    println!("expanded class over {}:", class.base);
    for line in class.axiom_lines() {
        println!("  {line}");
    }
    for g in class.class.generators() {
        println!("  {}: w = {:?}", g.name(), g.table(g.symbol("w").unwrap()));
    }

    match beth_primal_witness(&lukasiewicz(2)?, &[ExpansionOp::new("c", mv_constant(2))], &budget)? {
        Verdict::Proven(w) => println!("{}", w.claim),
        v => println!("no companion found: {}", v.label()),
    }
    Ok(())
}

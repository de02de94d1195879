//! Term conditions, primality and interpolating terms.
//!
//!     cargo run --example term_conditions

use ua::classops::ClassSpec;
use ua::expansion::{expand, ExpansionOp};
use ua::gallery::{bool2, complement, cyclic_group, d2_bdl, lukasiewicz, make_algebra, monoid_c, monoid_inverse, zmod_ring};
use ua::termcond::{is_primal, is_rigid, search_interpolant_term, term_condition_search, TermCondition};
use ua::{SearchBudget, Verdict};

fn main() -> ua::Result<()> {
    let budget = SearchBudget::default();
    for (a, cond) in [(d2_bdl(), TermCondition::Majority), (zmod_ring(3)?, TermCondition::Malcev), (bool2(), TermCondition::Pixley)] {
        match term_condition_search(&a, cond, &budget)? {
            Verdict::Proven(w) => println!("{:?} term for {}: {}", cond, a.name(), w.text),
            v => println!("{:?} for {}: {}", cond, a.name(), v.label()),
        }
    }
    println!("Malcev term for {}: {}", d2_bdl().name(), term_condition_search(&d2_bdl(), TermCondition::Malcev, &budget)?.label());

    for id in ["bool2", "lukasiewicz_const(2)", "zmod_ring(3)", "zmod_ring(4)"] {
        let a = make_algebra(id)?;
        println!("{} primal: {}", a.name(), is_primal(&a, &budget)?.label());
    }
    let l2 = lukasiewicz(2)?;
    println!("{}: rigid {}, primal {}", l2.name(), is_rigid(&l2)?, serde_json::to_string(&is_primal(&l2, &budget)?)?);

    let b2 = ClassSpec::q(vec![expand(&d2_bdl(), &[ExpansionOp::new("~", complement())])?])?;
    if let Verdict::Proven(t) = search_interpolant_term(&b2, &complement(), &budget)? {
        println!("complement is interpolated by {}", t.text);
    }
    let monoids = ClassSpec::q(vec![cyclic_group(2)?, cyclic_group(3)?, monoid_c(2)?])?;
    match search_interpolant_term(&monoids, &monoid_inverse(), &budget)? {
        Verdict::Proven(t) => println!("monoid inverse is interpolated by {} on {:?}", t.text, t.checked),
        v => println!("monoid inverse: {}", v.label()),
    }
    Ok(())
}

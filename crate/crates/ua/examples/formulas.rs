//! Formulas and implicit operations: parsing, evaluation, defined tables,
//! functionality in a class and extendability.
//!
//!     cargo run --example formulas

use std::collections::BTreeMap;

use ua::classops::ClassSpec;
use ua::formula::{check_extendable, check_functional, classify, eval_formula, implicit_table, parse, ImplicitDef};
use ua::gallery::{chain_heyting, d2_bdl, lukasiewicz, monoid_inverse, mv_division, zmod_ring};
use ua::SearchBudget;

fn main() -> ua::Result<()> {
    let budget = SearchBudget::default();
    let z5 = zmod_ring(5)?;
    let f = parse("exists z. x * z = 1 & y = z * z", z5.signature())?;
    println!("{f}  [{:?}]", classify(&f));
    for x in 0..5 {
        let ys: Vec<usize> = (0..5)
            .filter(|&y| eval_formula(&z5, &f, &BTreeMap::from([("x".to_string(), x), ("y".to_string(), y)])).unwrap())
            .collect();
        println!("  x = {x}: y in {ys:?}");
    }

    let def = ImplicitDef::new(f, &["x"], "y");
    let t = implicit_table(&z5, &def)?;
    println!("defined table on Z5: {:?}, total: {}", t.entries(), t.is_total());

    let l4 = lukasiewicz(4)?;
    let half = implicit_table(&l4, &mv_division(2))?;
    println!("halving on L4: {:?}", half.entries());

    let c3 = ClassSpec::q(vec![chain_heyting(3)?])?;
    let pc = ImplicitDef::new(parse("x /\\ y = 0 & x \\/ y = 1", chain_heyting(3)?.signature())?, &["x"], "y");
    println!("complement functional in Q(C3): {}", check_functional(&c3, &pc, &budget)?.label());
    let d2 = ClassSpec::q(vec![d2_bdl()])?;
    let comp = ImplicitDef::new(parse("x /\\ y = 0 & x \\/ y = 1", d2_bdl().signature())?, &["x"], "y");
    println!("complement extendable in Q(D2): {}", check_extendable(&d2, &comp, &budget, 2)?.label());

    let groups = ClassSpec::q(vec![ua::gallery::cyclic_group(2)?, ua::gallery::cyclic_group(3)?])?;
    println!("monoid inverse functional over groups: {}", check_functional(&groups, &monoid_inverse(), &budget)?.label());
    Ok(())
}

//! Building finite algebras: gallery constructors, JSON files, products,
//! quotients and homomorphism search.
//!
//!     cargo run --example algebras

use ua::algebra::{all_subuniverses, automorphisms, enumerate_homs, product, quotient, to_raw, validate_algebra, DEFAULT_SIZE_CAP};
use ua::congruence::cg;
use ua::gallery::{chain_heyting, d2_bdl, make_algebra};
use ua::SearchBudget;

fn main() -> ua::Result<()> {
    let budget = SearchBudget::default();
    let c3 = chain_heyting(3)?;
    println!("{}: {} elements, symbols {:?}", c3.name(), c3.size(), (0..c3.signature().len()).map(|s| c3.signature().name(s)).collect::<Vec<_>>());

    // algebras round-trip through the JSON file format
    let raw = to_raw(&c3);
    let text = serde_json::to_string(&raw)?;
    let back = validate_algebra(&serde_json::from_str(&text)?, DEFAULT_SIZE_CAP)?;
    assert_eq!(back.tables(), c3.tables());
    println!("json: {text}");

    let d2 = d2_bdl();
    let (sq, proj) = product(d2.signature(), &[&d2, &d2])?;
    println!("{} has {} elements; first projection {:?}", sq.name(), sq.size(), proj[0].map);
    println!("subuniverses of {}: {:?}", sq.name(), all_subuniverses(&sq, &budget.meter())?);

    let theta = cg(&c3, &[(1, 2)]);
    let (q, nat) = quotient(&c3, &theta)?;
    println!("Cg(1,2) on {} has blocks {:?}; quotient size {}, natural map {:?}", c3.name(), theta.block_sets(), q.size(), nat.map);

    let c5 = make_algebra("gallery:chain_heyting(5)")?;
    let homs = enumerate_homs(&c5, &c3, &budget, None)?;
    println!("homomorphisms {} -> {}: {}", c5.name(), c3.name(), homs.len());
    for h in &homs {
        println!("  {:?}", h.map);
    }
    let sq3 = make_algebra("power(chain_heyting(3),2)")?;
    println!("automorphisms of {}: {}", sq3.name(), automorphisms(&sq3, &budget.meter())?.len());
    Ok(())
}

//! Congruence lattices, relative congruences, irreducibility and
//! congruence equations.
//!
//!     cargo run --example congruences

use ua::classops::ClassSpec;
use ua::congruence::{check_congruence_equation, con, con_k, is_rfsi, is_rsi, monolith, CongruenceEquation};
use ua::gallery::{chain_heyting, chain_meet, make_algebra};
use ua::SearchBudget;

fn main() -> ua::Result<()> {
    let budget = SearchBudget::default();
    let m3 = chain_meet(3)?;
    let lat = con(&m3, &budget.meter())?;
    println!("Con({}) has {} congruences:", m3.name(), lat.len());
    for c in &lat.elements {
        println!("  {:?}", c.block_sets());
    }
    let perm = CongruenceEquation::parse("x o y = y o x")?;
    println!("permutability in {}: {}", m3.name(), check_congruence_equation(&m3, None, &perm, 1 << 16, &budget)?.label());

    let sq = make_algebra("power(chain_heyting(3),2)")?;
    let k = ClassSpec::q(vec![chain_heyting(3)?])?;
    let rel = con_k(&sq, &k, &budget.meter())?;
    println!("{}: {} congruences, {} relative to Q(C3)", sq.name(), con(&sq, &budget.meter())?.len(), rel.len());
    let dist = CongruenceEquation::parse("x /\\ (y \\/ z) = (x /\\ y) \\/ (x /\\ z)")?;
    println!("distributivity of Con_K: {}", check_congruence_equation(&sq, Some(&k), &dist, 1 << 16, &budget)?.label());

    for a in [chain_heyting(3)?, sq] {
        println!(
            "{}: rsi {}, rfsi {}, monolith {:?}",
            a.name(),
            is_rsi(&a, Some(&k), &budget)?,
            is_rfsi(&a, Some(&k), &budget)?,
            monolith(&a, Some(&k), &budget)?.map(|m| m.block_sets())
        );
    }
    Ok(())
}

//! Class operators: membership in Q, U and V, free algebras and subdirect
//! decompositions.
//!
//!     cargo run --example classes

use ua::classops::{free_algebra, membership, rsi_members, subdirect_decomposition, ClassOp, ClassSpec};
use ua::gallery::{chain_heyting, cyclic_group, d2_bdl, make_algebra};
use ua::SearchBudget;

fn main() -> ua::Result<()> {
    let budget = SearchBudget::default();
    let groups = ClassSpec::q(vec![cyclic_group(2)?, cyclic_group(3)?])?;
    for n in [4, 6] {
        let g = cyclic_group(n)?;
        println!("{} in Q(G2, G3): {}", g.name(), membership(&g, &groups, &budget)?.label());
    }
    let c2 = chain_heyting(2)?;
    let sq = make_algebra("power(chain_heyting(2),2)")?;
    for op in [ClassOp::U, ClassOp::Q, ClassOp::V] {
        let k = ClassSpec::new(vec![c2.clone()], op)?;
        println!("{} in {:?}(C2): {}", sq.name(), op, membership(&sq, &k, &budget)?.label());
    }

    let d2 = ClassSpec::q(vec![d2_bdl()])?;
    for rank in 0..=3 {
        let f = free_algebra(&d2, rank, &budget)?;
        println!("free bounded distributive lattice on {rank} generators: {} elements", f.algebra.size());
    }

    let c4 = ClassSpec::q(vec![chain_heyting(4)?])?;
    println!("relatively subdirectly irreducible members of Q(C4): {:?}", rsi_members(&c4, &budget)?.iter().map(|a| a.size()).collect::<Vec<_>>());
    let a = make_algebra("product(chain_heyting(3),chain_heyting(4))")?;
    for theta in subdirect_decomposition(&a, &c4, &budget)? {
        println!("  factor kernel {:?}", theta.block_sets());
    }
    Ok(())
}

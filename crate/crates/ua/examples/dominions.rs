//! Dominions: the bounded distributive lattice failure, the relatively
//! complemented repair, the C5 gadget and zigzags in monoids.
//!
//!     cargo run --example dominions

use ua::algebra::{all_subuniverses, product, sg};
use ua::classops::ClassSpec;
use ua::dominion::{check_ses, dominion, zigzag_membership, SesStrategy};
use ua::gallery::{c5_counterexample, d2_bdl, d2_rcdl, make_algebra};
use ua::{SearchBudget, Verdict};

fn main() -> ua::Result<()> {
    let budget = SearchBudget::default();
    for d2 in [d2_bdl(), d2_rcdl()] {
        let b = product(d2.signature(), &[&d2, &d2])?.0;
        let k = ClassSpec::q(vec![d2.clone()])?;
        for a in all_subuniverses(&b, &budget.meter())? {
            let d = dominion(&a, &b, &k, &budget)?;
            println!("{}: d({:?}, D2^2) = {:?}", d2.name(), a, d.result);
        }
        let ses = check_ses(&k, &SesStrategy::Stratum { max_width: 2, max_size: 16 }, &budget)?;
        println!("  strong epimorphism surjectivity in Q({}): {}", d2.name(), ses.label());
    }

    let (c5, d, k) = c5_counterexample();
    let b = product(c5.signature(), &[&c5, &c5])?.0;
    let r = dominion(&d, &b, &ClassSpec::q(vec![c5])?, &budget)?;
    println!("C5 gadget: D = {d:?} (image of {:?}), dominion {:?}, extra {:?}", k.map, r.result, r.extra());
    println!("  <c5,c4> = {} is in the extra part: {}", 4 * 5 + 3, r.extra().contains(&23));

    let m = make_algebra("monoid_c(3)")?;
    let sub = sg(&m, &[2]);
    for t in 0..m.size() {
        let v = zigzag_membership(&m, &sub, t, 3, 4, &budget)?;
        let what = match &v {
            Verdict::Proven(z) => format!("zigzag {}", serde_json::to_string(z)?),
            Verdict::Refuted(s) => format!("separated in {}", s.codomain),
            Verdict::Unknown(r) => r.clone(),
        };
        println!("  {t} in dominion of {sub:?} in {}: {} ({what})", m.name(), v.label());
    }
    Ok(())
}

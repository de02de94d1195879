use std::collections::{HashSet, VecDeque};

use super::finite::{decode, odometer, table_len, FiniteAlgebra};
use super::hom::Homomorphism;
use super::signature::Signature;
use crate::budget::Meter;
use crate::congruence::Congruence;
use crate::error::{Error, Result};

/// Calls `f` on every k-tuple of positions into a growing list of length
/// `len` that uses at least one position `>= old`. Nullary symbols fire only
/// in the first round (`old == 0`).
pub(crate) fn for_new_tuples(
    k: usize,
    old: usize,
    len: usize,
    mut f: impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if k == 0 {
        return if old == 0 { f(&[]) } else { Ok(()) };
    }
    if len <= old {
        return Ok(());
    }
    let mut idx = vec![0usize; k];
    for p in 0..k {
        if p > 0 && old == 0 {
            break;
        }
        let lo = |i: usize| if i == p { old } else { 0 };
        let hi = |i: usize| if i < p { old } else { len };
        for (i, slot) in idx.iter_mut().enumerate() {
            *slot = lo(i);
        }
        'outer: loop {
            f(&idx)?;
            for i in (0..k).rev() {
                idx[i] += 1;
                if idx[i] < hi(i) {
                    continue 'outer;
                }
                idx[i] = lo(i);
            }
            break;
        }
    }
    Ok(())
}

/// The subuniverse generated by `x`, sorted. Empty when `x` is empty and the
/// signature has no constants.
pub fn sg(a: &FiniteAlgebra, x: &[usize]) -> Vec<usize> {
    let mut member = vec![false; a.size()];
    let mut list = Vec::new();
    for &e in x {
        if e < a.size() && !member[e] {
            member[e] = true;
            list.push(e);
        }
    }
    close_list(a, &mut member, &mut list, 0);
    list.sort_unstable();
    list
}

fn close_list(a: &FiniteAlgebra, member: &mut [bool], list: &mut Vec<usize>, mut old: usize) {
    let sig = a.signature();
    let mut args = vec![0; sig.max_arity()];
    loop {
        let len = list.len();
        for s in 0..sig.len() {
            let k = sig.arity(s);
            let _ = for_new_tuples(k, old, len, |idx| {
                for j in 0..k {
                    args[j] = list[idx[j]];
                }
                let v = a.op(s, &args[..k]);
                if !member[v] {
                    member[v] = true;
                    list.push(v);
                }
                Ok(())
            });
        }
        if list.len() == len && old == len {
            break;
        }
        old = len;
    }
}

/// All subuniverses (including the empty one when there are no constants),
/// sorted by size then lexicographically.
pub fn all_subuniverses(a: &FiniteAlgebra, meter: &Meter) -> Result<Vec<Vec<usize>>> {
    let start = sg(a, &[]);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        let mut member = vec![false; a.size()];
        s.iter().for_each(|&e| member[e] = true);
        for e in 0..a.size() {
            if member[e] {
                continue;
            }
            meter.tick(1)?;
            let mut with = s.clone();
            with.push(e);
            let t = sg(a, &with);
            if !seen.contains(&t) {
                meter.check_elements(seen.len() + 1)?;
                seen.insert(t.clone());
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(out)
}

/// The subalgebra on a nonempty subuniverse, with elements renumbered in
/// increasing order, and its inclusion map.
pub fn subalgebra(a: &FiniteAlgebra, set: &[usize]) -> Result<(FiniteAlgebra, Homomorphism)> {
    let mut elems = set.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if elems.is_empty() {
        return Err(Error::InvalidAlgebra("empty subuniverse".into()));
    }
    if !a.is_subuniverse(&elems) {
        return Err(Error::Invalid(format!("{elems:?} is not a subuniverse of `{}`", a.name())));
    }
    let mut pos = vec![usize::MAX; a.size()];
    for (i, &e) in elems.iter().enumerate() {
        pos[e] = i;
    }
    let mut args = vec![0; a.signature().max_arity()];
    let sub = FiniteAlgebra::from_fn(
        format!("{}|{}", a.name(), elems.len()),
        a.signature().clone(),
        elems.len(),
        |s, xs| {
            for (j, &x) in xs.iter().enumerate() {
                args[j] = elems[x];
            }
            pos[a.op(s, &args[..xs.len()])]
        },
    )?;
    Ok((sub, Homomorphism::new(elems)))
}

/// The one-element algebra of a signature.
pub fn trivial(signature: &Signature) -> FiniteAlgebra {
    FiniteAlgebra::from_fn("1", signature.clone(), 1, |_, _| 0).expect("trivial algebra")
}

/// Direct product with elements encoded in mixed radix, first factor most
/// significant. The empty product is the trivial algebra.
pub fn product(
    signature: &Signature,
    factors: &[&FiniteAlgebra],
) -> Result<(FiniteAlgebra, Vec<Homomorphism>)> {
    for f in factors {
        if f.signature() != signature {
            return Err(Error::SignatureMismatch(format!(
                "factor `{}` has [{}], expected [{}]",
                f.name(),
                f.signature().describe(),
                signature.describe()
            )));
        }
    }
    if factors.is_empty() {
        return Ok((trivial(signature), Vec::new()));
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let size = sizes
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .filter(|&n| n <= 1 << 22)
        .ok_or_else(|| Error::Invalid("product too large".into()))?;
    for s in 0..signature.len() {
        if table_len(size, signature.arity(s)).map_or(true, |l| l > 1 << 26) {
            return Err(Error::Invalid("product tables too large".into()));
        }
    }
    let coords = |mut e: usize| {
        let mut c = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            c[i] = e % sizes[i];
            e /= sizes[i];
        }
        c
    };
    let all: Vec<Vec<usize>> = (0..size).map(coords).collect();
    let name = factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("x");
    let mut comp = vec![0; signature.max_arity()];
    let prod = FiniteAlgebra::from_fn(name, signature.clone(), size, |s, xs| {
        let mut out = 0;
        for (i, f) in factors.iter().enumerate() {
            for (j, &x) in xs.iter().enumerate() {
                comp[j] = all[x][i];
            }
            out = out * sizes[i] + f.op(s, &comp[..xs.len()]);
        }
        out
    })?;
    let projections = (0..factors.len())
        .map(|i| Homomorphism::new(all.iter().map(|c| c[i]).collect()))
        .collect();
    Ok((prod, projections))
}

/// Element of a product from its coordinates.
pub fn product_element(factors: &[&FiniteAlgebra], coords: &[usize]) -> usize {
    factors
        .iter()
        .zip(coords)
        .fold(0, |acc, (f, &c)| acc * f.size() + c)
}

/// Coordinates of a product element.
pub fn product_coords(factors: &[&FiniteAlgebra], mut e: usize) -> Vec<usize> {
    let mut c = vec![0; factors.len()];
    for i in (0..factors.len()).rev() {
        c[i] = e % factors[i].size();
        e /= factors[i].size();
    }
    c
}

/// Block algebra of a congruence and the canonical surjection.
pub fn quotient(a: &FiniteAlgebra, theta: &Congruence) -> Result<(FiniteAlgebra, Homomorphism)> {
    if theta.size() != a.size() {
        return Err(Error::NotCongruence("partition has the wrong size".into()));
    }
    if let Some(w) = theta.compatibility_failure(a) {
        return Err(Error::NotCongruence(w));
    }
    let blocks = theta.blocks().to_vec();
    let count = theta.block_count();
    let mut rep = vec![usize::MAX; count];
    for (e, &b) in blocks.iter().enumerate() {
        if rep[b] == usize::MAX {
            rep[b] = e;
        }
    }
    let mut args = vec![0; a.signature().max_arity()];
    let q = FiniteAlgebra::from_fn(
        format!("{}/~", a.name()),
        a.signature().clone(),
        count,
        |s, xs| {
            for (j, &x) in xs.iter().enumerate() {
                args[j] = rep[x];
            }
            blocks[a.op(s, &args[..xs.len()])]
        },
    )?;
    Ok((q, Homomorphism::new(blocks)))
}

/// All tuples of a given arity over `0..n`, lexicographic.
pub fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let len = table_len(n, k).unwrap_or(0);
    (0..len).map(move |i| {
        let mut v = vec![0; k];
        decode(n, k, i, &mut v);
        v
    })
}

pub(crate) fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0; k];
    if n == 0 && k > 0 {
        return;
    }
    loop {
        f(&idx);
        if !odometer(&mut idx, n) {
            break;
        }
    }
}

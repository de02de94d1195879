//! Subpower closure: the subalgebra of a product of finite algebras generated
//! by a list of vectors, explored breadth-first by term size so that each
//! element carries a smallest witness term.


use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::algebra::{FiniteAlgebra, Signature, Term};
use crate::budget::Meter;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Origin {
    Var(usize),
    App(usize, Vec<u32>),
}

/// Result of a closure run. Elements are numbered in discovery order.
#[derive(Debug)]
pub struct Closure {
    width: usize,
    data: Vec<u8>,
    origins: Vec<Origin>,
    sizes: Vec<u32>,
    var_names: Vec<String>,
    index: Index,
    signature: Signature,
    coord_tables: Option<CoordTables>,
    /// Every tuple was processed: the element list is the whole subpower.
    pub complete: bool,
    /// The first element accepted by the stop predicate.
    pub found: Option<usize>,
}

const CHUNK: usize = 64;

impl Closure {
    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn element(&self, i: usize) -> &[u8] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn find(&self, v: &[u8]) -> Option<usize> {
        self.index.get(v).map(|i| i as usize)
    }

    pub fn term_size(&self, i: usize) -> usize {
        self.sizes[i] as usize
    }

    /// A smallest term producing element `i`.
    pub fn term(&self, i: usize) -> Term {
        match &self.origins[i] {
            Origin::Var(g) => Term::Var(self.var_names[*g].clone()),
            Origin::App(s, args) => Term::App(
                self.signature.name(*s).to_string(),
                args.iter().map(|&a| self.term(a as usize)).collect(),
            ),
        }
    }

    /// The closure as an algebra (only meaningful when complete).
    pub fn to_algebra(&self, name: &str) -> Result<FiniteAlgebra> {
        if !self.complete {
            return Err(Error::Invalid("closure is incomplete".into()));
        }
        let sig = self.signature.clone();
        let m = self.len();
        let w = self.width;
        let coords = self.coord_tables.as_ref().expect("coordinate tables");
        let mut buf = vec![0u8; w];
        FiniteAlgebra::from_fn(name, sig, m, |s, args| {
            for (c, slot) in buf.iter_mut().enumerate() {
                let (t, n) = (&coords[c].0[s], coords[c].1);
                let mut idx = 0usize;
                for &a in args {
                    idx = idx * n + self.data[a * w + c] as usize;
                }
                *slot = t[idx] as u8;
            }
            self.index.get(&buf).expect("closed") as usize
        })
    }
}

const DENSE_LIMIT: usize = 1 << 22;

/// Lookup from vectors to element ids: a flat table when the product is
/// small, a hash map otherwise.
#[derive(Debug)]
enum Index {
    Hash(FxHashMap<Vec<u8>, u32>),
    Dense { radix: Vec<usize>, slots: Vec<u32> },
}

impl Index {
    fn get(&self, v: &[u8]) -> Option<u32> {
        match self {
            Index::Hash(m) => m.get(v).copied(),
            Index::Dense { radix, slots } => {
                let i = v.iter().zip(radix).fold(0usize, |acc, (&x, &r)| acc * r + x as usize);
                let id = slots[i];
                (id != u32::MAX).then_some(id)
            }
        }
    }

    fn insert(&mut self, v: Vec<u8>, id: u32) {
        match self {
            Index::Hash(m) => {
                m.insert(v, id);
            }
            Index::Dense { radix, slots } => {
                let i = v.iter().zip(radix.iter()).fold(0usize, |acc, (&x, &r)| acc * r + x as usize);
                slots[i] = id;
            }
        }
    }
}

/// Per-coordinate operation tables and sizes.
type CoordTables = Vec<(Vec<Vec<usize>>, usize)>;

impl Closure {
    fn new(width: usize, signature: Signature, var_names: Vec<String>) -> Self {
        Closure {
            width,
            data: Vec::new(),
            origins: Vec::new(),
            sizes: Vec::new(),
            var_names,
            index: Index::Hash(FxHashMap::default()),
            signature,
            complete: false,
            found: None,
            coord_tables: None,
        }
    }

    fn insert(&mut self, v: Vec<u8>, origin: Origin, size: u32) -> u32 {
        let id = self.origins.len() as u32;
        self.data.extend_from_slice(&v);
        self.index.insert(v, id);
        self.origins.push(origin);
        self.sizes.push(size);
        id
    }
}

/// Closes the generator vectors under the operations of `signature`, acting
/// coordinatewise through `coords`. Stops early at the first element the
/// predicate accepts.
pub fn close(
    signature: &Signature,
    coords: &[&FiniteAlgebra],
    generators: &[(String, Vec<u8>)],
    meter: &Meter,
    stop: Option<&(dyn Fn(&[u8]) -> bool + Sync)>,
) -> Result<Closure> {
    let width = coords.len();
    let mut cl_dense = None;
    for c in coords {
        if c.signature() != signature {
            return Err(Error::SignatureMismatch(format!("coordinate algebra `{}`", c.name())));
        }
        if c.size() > 256 {
            return Err(Error::Invalid("coordinate algebras are limited to 256 elements".into()));
        }
    }
    if let Some(total) = coords.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.size())) {
        if total <= DENSE_LIMIT {
            cl_dense = Some((coords.iter().map(|c| c.size()).collect::<Vec<_>>(), total));
        }
    }
    let tables: CoordTables = coords.iter().map(|c| (c.tables().to_vec(), c.size())).collect();
    let mut cl = Closure::new(
        width,
        signature.clone(),
        generators.iter().map(|g| g.0.clone()).collect(),
    );
    cl.coord_tables = Some(tables);
    if let Some((radix, total)) = cl_dense {
        cl.index = Index::Dense { radix, slots: vec![u32::MAX; total] };
    }
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(), Vec::new()];

    let mut level_one: Vec<(Vec<u8>, Origin)> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            assert_eq!(g.1.len(), width, "generator width");
            (g.1.clone(), Origin::Var(i))
        })
        .collect();
    for s in signature.constants() {
        let v: Vec<u8> = coords.iter().map(|c| c.table(s)[0] as u8).collect();
        level_one.push((v, Origin::App(s, vec![])));
    }
    for (v, o) in level_one {
        if cl.index.get(&v).is_some() {
            continue;
        }
        let hit = stop.map_or(false, |p| p(&v));
        let id = cl.insert(v, o, 1);
        by_size[1].push(id);
        if hit {
            cl.found = Some(id as usize);
            return Ok(cl);
        }
    }
    meter.check_elements(cl.len())?;

    let ops: Vec<(usize, usize)> = (0..signature.len())
        .map(|s| (s, signature.arity(s)))
        .filter(|&(_, k)| k > 0)
        .collect();
    let kmax = ops.iter().map(|o| o.1).max().unwrap_or(0);
    if kmax == 0 {
        cl.complete = true;
        return Ok(cl);
    }
    let tables = cl.coord_tables.clone().unwrap();
    // once every vector of the product is present nothing new can appear
    let full = coords.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.size()));
    if full == Some(cl.len()) {
        cl.complete = true;
        return Ok(cl);
    }
    let mut max_size = 1usize;
    let mut s = 2usize;
    loop {
        by_size.push(Vec::new());
        for &(sym, k) in &ops {
            let mut comp = vec![1usize; k];
            let total = s - 1;
            if total < k {
                continue;
            }
            comp[k - 1] = total - (k - 1);
            loop {
                if comp.iter().all(|&p| p < s && !by_size[p].is_empty()) {
                    let lists: Vec<Vec<u32>> = comp.iter().map(|&p| by_size[p].clone()).collect();
                    match expand(&mut cl, &tables, sym, &lists, s as u32, meter, stop, &mut by_size, full)? {
                        Step::Found(id) => {
                            cl.found = Some(id);
                            return Ok(cl);
                        }
                        Step::Full => {
                            cl.complete = true;
                            return Ok(cl);
                        }
                        Step::Continue => {}
                    }
                }
                if !next_composition(&mut comp) {
                    break;
                }
            }
        }
        if !by_size[s].is_empty() {
            max_size = s;
        }
        if s > kmax * max_size {
            cl.complete = true;
            return Ok(cl);
        }
        s += 1;
    }
}

/// Next composition of the same total with the same number of positive
/// parts, in lexicographic order.
fn next_composition(c: &mut [usize]) -> bool {
    let k = c.len();
    if k < 2 {
        return false;
    }
    // find rightmost position i < k-1 that can grow by taking from the tail
    let tail_sum = |c: &[usize], i: usize| c[i + 1..].iter().sum::<usize>();
    for i in (0..k - 1).rev() {
        let rest = tail_sum(c, i);
        let slots = k - 1 - i;
        if rest > slots {
            c[i] += 1;
            let remaining = rest - 1;
            for p in c.iter_mut().take(k - 1).skip(i + 1) {
                *p = 1;
            }
            c[k - 1] = remaining - (slots - 1);
            return true;
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn expand(
    cl: &mut Closure,
    tables: &CoordTables,
    sym: usize,
    lists: &[Vec<u32>],
    size: u32,
    meter: &Meter,
    stop: Option<&(dyn Fn(&[u8]) -> bool + Sync)>,
    by_size: &mut [Vec<u32>],
    full: Option<usize>,
) -> Result<Step> {
    let k = lists.len();
    let w = cl.width;
    let rest_count: usize = lists[1..].iter().map(|l| l.len()).product();
    let per: Vec<(&[usize], usize)> = tables.iter().map(|(t, n)| (&t[sym][..], *n)).collect();
    for chunk in lists[0].chunks(CHUNK) {
        meter.tick((chunk.len() * rest_count) as u64)?;
        let data = &cl.data;
        let index = &cl.index;
        let batches: Vec<Vec<(Vec<u8>, Vec<u32>)>> = chunk
            .par_iter()
            .map(|&a0| {
                let mut out = Vec::new();
                let mut idx = vec![0usize; k];
                let mut args = vec![0u32; k];
                let mut buf = vec![0u8; w];
                args[0] = a0;
                loop {
                    for j in 1..k {
                        args[j] = lists[j][idx[j]];
                    }
                    for (c, slot) in buf.iter_mut().enumerate() {
                        let (t, n) = per[c];
                        let mut x = 0usize;
                        for &a in &args {
                            x = x * n + data[a as usize * w + c] as usize;
                        }
                        *slot = t[x] as u8;
                    }
                    if index.get(&buf).is_none() {
                        out.push((buf.clone(), args.clone()));
                    }
                    // advance positions 1..k
                    let mut j = k;
                    loop {
                        if j == 1 {
                            return out;
                        }
                        j -= 1;
                        idx[j] += 1;
                        if idx[j] < lists[j].len() {
                            break;
                        }
                        idx[j] = 0;
                    }
                }
            })
            .collect();
        for batch in batches {
            for (v, args) in batch {
                if cl.index.get(&v).is_some() {
                    continue;
                }
                let hit = stop.map_or(false, |p| p(&v));
                let id = cl.insert(v, Origin::App(sym, args), size);
                by_size[size as usize].push(id);
                meter.check_elements(cl.len())?;
                if hit {
                    return Ok(Step::Found(id as usize));
                }
                if full == Some(cl.len()) {
                    return Ok(Step::Full);
                }
            }
        }
    }
    Ok(Step::Continue)
}

enum Step {
    Found(usize),
    Full,
    Continue,
}

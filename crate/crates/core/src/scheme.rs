//! The association-scheme view of a Schur ring: the coloring of `H x H` by
//! `color(x, y) = class_of(y * x^-1)`, its intersection numbers, complex
//! products, closed and strongly normal color subsets, and restricted
//! adjacency ("block") matrices.
//!
//! Intersection numbers are computed relationally — by counting midpoints —
//! rather than read off the ring's structure constants, so the two tensors
//! can be compared as independent oracles.

use crate::pgroup::{Elem, Group};
use crate::sring::SRing;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(
        "intersection number ({s},{t},{u}) is not constant: pair ({},{}) sees {} \
         but pair ({},{}) sees {}",
        first.0, first.1, first.2, second.0, second.1, second.2
    )]
    InconsistentConstant {
        s: usize,
        t: usize,
        u: usize,
        first: (Elem, Elem, u32),
        second: (Elem, Elem, u32),
    },
    #[error("relation {color} meets no pair of the requested block")]
    EmptyBlock { color: usize },
}

/// The colored complete digraph of a Schur ring: `color(x, y)` is the class
/// index of `y * x^-1`, so the relation of color `c` is
/// `{(h, th) : h in H, t in class c}`.
#[derive(Debug, Clone)]
pub struct CayleyScheme {
    sring: Arc<SRing>,
    colors: Vec<u16>,
}

impl CayleyScheme {
    pub fn from_sring(sring: Arc<SRing>) -> CayleyScheme {
        let g = sring.group();
        let n = g.order();
        let mut colors = vec![0u16; n * n];
        for x in 0..n as Elem {
            let xinv = g.inv(x);
            let row = &mut colors[x as usize * n..(x as usize + 1) * n];
            for (y, slot) in row.iter_mut().enumerate() {
                *slot = sring.class_of(g.mul(y as Elem, xinv)) as u16;
            }
        }
        let cs = CayleyScheme { sring, colors };
        debug_assert!(cs.identity_neighborhoods_recover_classes());
        cs
    }

    /// `r(1_H) = {h : (1_H, h) in r}` must recover the basic sets exactly.
    pub fn identity_neighborhoods_recover_classes(&self) -> bool {
        let n = self.n();
        let mut recovered: Vec<Vec<Elem>> = vec![Vec::new(); self.num_colors()];
        for h in 0..n as Elem {
            recovered[self.color(0, h)].push(h);
        }
        recovered
            .iter()
            .enumerate()
            .all(|(c, set)| set == &self.sring.classes()[c])
    }

    pub fn sring(&self) -> &Arc<SRing> {
        &self.sring
    }

    pub fn group(&self) -> &Arc<Group> {
        self.sring.group()
    }

    pub fn n(&self) -> usize {
        self.sring.group().order()
    }

    pub fn num_colors(&self) -> usize {
        self.sring.num_classes()
    }

    #[inline]
    pub fn color(&self, x: Elem, y: Elem) -> usize {
        self.colors[x as usize * self.n() + y as usize] as usize
    }

    pub fn color_matrix(&self) -> &[u16] {
        &self.colors
    }

    /// The converse color: `(x,y)` has color `s` iff `(y,x)` has color `star(s)`.
    pub fn star(&self, s: usize) -> usize {
        self.sring.inverse_class(s)
    }

    pub fn valency(&self, s: usize) -> usize {
        self.sring.valency(s)
    }

    /// Every valency a power of p, and the point count too.
    pub fn is_p_scheme(&self) -> bool {
        self.sring.is_p_sring()
    }

    /// Midpoint-counting intersection numbers from one representative pair
    /// per color. Constancy over the other pairs follows from the ring
    /// axioms; [`CayleyScheme::verified_intersection_numbers`] checks it
    /// anyway.
    pub fn intersection_numbers(&self) -> IntersectionNumbers {
        intersection_numbers_inner(self.n(), self.num_colors(), &self.colors, false)
            .expect("representative pass cannot fail")
    }

    /// Intersection numbers with the constancy condition verified over every
    /// pair — the full definition, nothing assumed.
    pub fn verified_intersection_numbers(&self) -> Result<IntersectionNumbers, SchemeError> {
        intersection_numbers_inner(self.n(), self.num_colors(), &self.colors, true)
    }

    /// Adjacency matrix of the relation of `color` restricted to
    /// `rows x cols`, in the given orderings.
    pub fn block(&self, color: usize, rows: &[Elem], cols: &[Elem]) -> Vec<Vec<bool>> {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| self.color(r, c) == color).collect())
            .collect()
    }

    /// For a block that is a permutation matrix, the map column-index ->
    /// row-index. `Ok(None)` if the block is nonempty but not a permutation
    /// matrix; `EmptyBlock` if the relation misses the block entirely.
    pub fn block_permutation(
        &self,
        color: usize,
        rows: &[Elem],
        cols: &[Elem],
    ) -> Result<Option<Vec<usize>>, SchemeError> {
        let block = self.block(color, rows, cols);
        if block.iter().all(|row| row.iter().all(|&b| !b)) {
            return Err(SchemeError::EmptyBlock { color });
        }
        if rows.len() != cols.len() {
            return Ok(None);
        }
        let mut col_to_row = vec![usize::MAX; cols.len()];
        let mut row_used = vec![false; rows.len()];
        for (r, row) in block.iter().enumerate() {
            for (c, &hit) in row.iter().enumerate() {
                if hit {
                    if col_to_row[c] != usize::MAX || row_used[r] {
                        return Ok(None);
                    }
                    col_to_row[c] = r;
                    row_used[r] = true;
                }
            }
        }
        if col_to_row.contains(&usize::MAX) {
            return Ok(None);
        }
        Ok(Some(col_to_row))
    }

    /// Exhaustive check of the structural identities every association
    /// scheme satisfies; returns one line per violation (none expected).
    ///
    /// * triple symmetry: `a(u,w,v) n_v = a(u*,v,w) n_w = a(v,w*,u) n_u`;
    /// * valency expansion: `n_u n_v = sum_s a(u,v,s) n_s`;
    /// * trivial-intersection criterion: `rr* meets ss*` only at the
    ///   identity color iff every `a(r*,s,t) <= 1`;
    /// * block column sums: every column of the relation-`e` block on
    ///   `xd x xf` has `a(d,e,f)` ones, for every base point `x`;
    /// * block color support: the colors meeting `xd x xf` are exactly the
    ///   complex product `d* f`.
    pub fn identities_report(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let numbers = self.intersection_numbers();
        let r = self.num_colors();
        let nv = |s: usize| numbers.valency(s) as u64;

        for u in 0..r {
            for w in 0..r {
                for v in 0..r {
                    let lhs = numbers.get(u, w, v) as u64 * nv(v);
                    let mid = numbers.get(self.star(u), v, w) as u64 * nv(w);
                    let rhs = numbers.get(v, self.star(w), u) as u64 * nv(u);
                    if lhs != mid || mid != rhs {
                        violations.push(format!(
                            "triple symmetry fails at ({u},{w},{v}): {lhs} / {mid} / {rhs}"
                        ));
                    }
                }
            }
        }
        for u in 0..r {
            for v in 0..r {
                let total: u64 = (0..r).map(|s| numbers.get(u, v, s) as u64 * nv(s)).sum();
                if total != nv(u) * nv(v) {
                    violations.push(format!(
                        "valency expansion fails at ({u},{v}): {total} != {}",
                        nv(u) * nv(v)
                    ));
                }
            }
        }
        for rr in 1..r {
            for ss in 1..r {
                let left = {
                    let pr = numbers.complex_product(&[rr], &[self.star(rr)]);
                    let qs = numbers.complex_product(&[ss], &[self.star(ss)]);
                    let meet: Vec<usize> =
                        pr.iter().copied().filter(|c| qs.contains(c)).collect();
                    meet == vec![0]
                };
                let right = (0..r).all(|t| numbers.get(self.star(rr), ss, t) <= 1);
                if left != right {
                    violations.push(format!(
                        "trivial-intersection criterion fails at ({rr},{ss}): {left} vs {right}"
                    ));
                }
            }
        }
        self.check_blocks(&numbers, &mut violations);
        violations
    }

    /// Exhaustive column check of every relation block: for each base
    /// point `x` and column `gamma`, one sweep over all rows verifies
    /// that the `(d, f = color(x, gamma))` block column holds exactly
    /// `a(d, e, f)` entries of every color `e`. The color-support claim —
    /// the colors meeting `xd x xf` are exactly the product `d* f` —
    /// then reduces to a point-free set comparison, since the column
    /// check pins the support to the nonzero entries of the tensor.
    fn check_blocks(&self, numbers: &IntersectionNumbers, violations: &mut Vec<String>) {
        let n = self.n();
        let r = self.num_colors();

        // tensor re-sliced per (d, f): the colors e with a(d,e,f) > 0
        let mut by_outer: Vec<Vec<(u16, u32)>> = vec![Vec::new(); r * r];
        for d in 0..r {
            for e in 0..r {
                for &(f, a) in numbers.row(d, e) {
                    by_outer[d * r + f as usize].push((e as u16, a));
                }
            }
        }
        for entry in by_outer.iter_mut() {
            entry.sort_unstable_by_key(|&(e, _)| e);
        }

        let mut counts = vec![0u32; r * r];
        let mut touched: Vec<usize> = Vec::with_capacity(n);
        for x in 0..n as Elem {
            for gamma in 0..n as Elem {
                let f = self.color(x, gamma);
                for &key in &touched {
                    counts[key] = 0;
                }
                touched.clear();
                for beta in 0..n as Elem {
                    let key = self.color(x, beta) * r + self.color(beta, gamma);
                    if counts[key] == 0 {
                        touched.push(key);
                    }
                    counts[key] += 1;
                }
                for &key in &touched {
                    let (d, e) = (key / r, key % r);
                    if counts[key] != numbers.get(d, e, f) {
                        violations.push(format!(
                            "column sum fails: x={x} d={d} e={e} f={f} col={gamma}: \
                             {} != {}",
                            counts[key],
                            numbers.get(d, e, f)
                        ));
                    }
                }
                for d in 0..r {
                    for &(e, a) in &by_outer[d * r + f] {
                        if counts[d * r + e as usize] == 0 && a > 0 {
                            violations.push(format!(
                                "column sum fails: x={x} d={d} e={e} f={f} col={gamma}: \
                                 0 != {a}"
                            ));
                        }
                    }
                }
            }
        }
        for d in 0..r {
            for f in 0..r {
                let support: Vec<usize> = by_outer[d * r + f]
                    .iter()
                    .map(|&(e, _)| e as usize)
                    .collect();
                let product = numbers.complex_product(&[self.star(d)], &[f]);
                if support != product {
                    violations.push(format!(
                        "block support fails: d={d} f={f}: {support:?} != {product:?}"
                    ));
                }
            }
        }
    }

    /// Plain-text export: `group=.. p=.. classes=N`, then one row of the
    /// color matrix per line, comma-separated, rows and columns in element
    /// index order.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        out.push_str(&format!(
            "{} classes={}\n",
            self.group().spec().header(),
            self.num_colors()
        ));
        for x in 0..n {
            let row: Vec<String> = self.colors[x * n..(x + 1) * n]
                .iter()
                .map(|c| c.to_string())
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Relational intersection numbers `a(s,t,u) = #{z : color(x,z)=s,
/// color(z,y)=t}` for `(x,y)` of color `u`, stored sparsely per `(s,t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionNumbers {
    r: usize,
    rows: Vec<Vec<(u16, u32)>>,
    valencies: Vec<u32>,
}

/// Computes the tensor from a raw color matrix. With `verify` set, every
/// pair of every color is counted and compared against the representative —
/// the full constancy condition of the scheme definition.
pub fn intersection_numbers_from_colors(
    n: usize,
    num_colors: usize,
    colors: &[u16],
    verify: bool,
) -> Result<IntersectionNumbers, SchemeError> {
    intersection_numbers_inner(n, num_colors, colors, verify)
}

fn intersection_numbers_inner(
    n: usize,
    r: usize,
    colors: &[u16],
    verify: bool,
) -> Result<IntersectionNumbers, SchemeError> {
    assert_eq!(colors.len(), n * n);
    let color = |x: usize, y: usize| colors[x * n + y] as usize;

    // representative pair for each color: lowest x, then lowest y
    let mut representative: Vec<Option<(usize, usize)>> = vec![None; r];
    let mut found = 0;
    'outer: for x in 0..n {
        for y in 0..n {
            let u = color(x, y);
            if representative[u].is_none() {
                representative[u] = Some((x, y));
                found += 1;
                if found == r {
                    break 'outer;
                }
            }
        }
    }

    let mut tally = vec![0u32; r * r];
    let count_pair = |x: usize, y: usize, tally: &mut Vec<u32>| {
        tally.iter_mut().for_each(|t| *t = 0);
        for z in 0..n {
            tally[color(x, z) * r + color(z, y)] += 1;
        }
    };

    let mut rows: Vec<Vec<(u16, u32)>> = vec![Vec::new(); r * r];
    let mut reference = vec![vec![0u32; 0]; r];
    for u in 0..r {
        let (x, y) = representative[u].expect("every color is used");
        count_pair(x, y, &mut tally);
        for s in 0..r {
            for t in 0..r {
                let a = tally[s * r + t];
                if a > 0 {
                    rows[s * r + t].push((u as u16, a));
                }
            }
        }
        reference[u] = tally.clone();
    }
    for row in rows.iter_mut() {
        row.sort_unstable_by_key(|&(u, _)| u);
    }

    if verify {
        for x in 0..n {
            for y in 0..n {
                let u = color(x, y);
                let (rx, ry) = representative[u].unwrap();
                if (x, y) == (rx, ry) {
                    continue;
                }
                count_pair(x, y, &mut tally);
                if tally != reference[u] {
                    let bad = (0..r * r).find(|&i| tally[i] != reference[u][i]).unwrap();
                    let (s, t) = (bad / r, bad % r);
                    return Err(SchemeError::InconsistentConstant {
                        s,
                        t,
                        u,
                        first: (rx as Elem, ry as Elem, reference[u][bad]),
                        second: (x as Elem, y as Elem, tally[bad]),
                    });
                }
            }
        }
    }

    let identity = color(0, 0);
    let valencies: Vec<u32> = (0..r)
        .map(|s| {
            // n_s = a(s, s*, 1): the star of s is the color of the reversed
            // representative pair
            let (x, y) = representative[s].unwrap();
            let star = color(y, x);
            reference[identity][s * r + star]
        })
        .collect();
    debug_assert_eq!(valencies.iter().map(|&v| v as usize).sum::<usize>(), n);

    Ok(IntersectionNumbers { r, rows, valencies })
}

impl IntersectionNumbers {
    pub fn num_colors(&self) -> usize {
        self.r
    }

    pub fn get(&self, s: usize, t: usize, u: usize) -> u32 {
        let row = &self.rows[s * self.r + t];
        match row.binary_search_by_key(&(u as u16), |&(c, _)| c) {
            Ok(pos) => row[pos].1,
            Err(_) => 0,
        }
    }

    pub fn row(&self, s: usize, t: usize) -> &[(u16, u32)] {
        &self.rows[s * self.r + t]
    }

    pub fn valency(&self, s: usize) -> u32 {
        self.valencies[s]
    }

    /// Complex product: colors `u` with `a(p,q,u) != 0` for some `p in P`,
    /// `q in Q`. Sorted.
    pub fn complex_product(&self, p: &[usize], q: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &a in p {
            for &b in q {
                for &(u, _) in self.row(a, b) {
                    if !out.contains(&(u as usize)) {
                        out.push(u as usize);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `T` is closed when `TT` stays inside `T`.
    pub fn is_closed(&self, t: &[usize]) -> bool {
        self.complex_product(t, t).iter().all(|u| t.contains(u))
    }

    /// `T` is strongly normal when `s* T s` stays inside `T` for every
    /// color `s`, with `star` supplied by the caller.
    pub fn is_strongly_normal(&self, t: &[usize], star: &dyn Fn(usize) -> usize) -> bool {
        (0..self.r).all(|s| {
            self.complex_product(&self.complex_product(&[star(s)], t), &[s])
                .iter()
                .all(|u| t.contains(u))
        })
    }

    pub fn thin_radical_colors(&self) -> Vec<usize> {
        (0..self.r).filter(|&s| self.valencies[s] == 1).collect()
    }

    /// Thin residue, generated route: the closed subset generated by all
    /// products `s* s`.
    pub fn thin_residue_colors(&self, star: &dyn Fn(usize) -> usize) -> Vec<usize> {
        let mut seed: Vec<usize> = Vec::new();
        for s in 0..self.r {
            for u in self.complex_product(&[star(s)], &[s]) {
                if !seed.contains(&u) {
                    seed.push(u);
                }
            }
        }
        self.closed_closure(seed, star)
    }

    fn closed_closure(&self, seed: Vec<usize>, star: &dyn Fn(usize) -> usize) -> Vec<usize> {
        let mut current: Vec<usize> = seed;
        for s in current.clone() {
            if !current.contains(&star(s)) {
                current.push(star(s));
            }
        }
        if !current.contains(&0) {
            current.push(0);
        }
        loop {
            let mut grown = self.complex_product(&current, &current);
            for &s in &current {
                if !grown.contains(&s) {
                    grown.push(s);
                }
            }
            for s in grown.clone() {
                if !grown.contains(&star(s)) {
                    grown.push(star(s));
                }
            }
            grown.sort_unstable();
            if grown == current {
                return grown;
            }
            current = grown;
        }
    }

    /// All closed subsets, found as joins of the closures of single colors
    /// (complete for the same lattice reason as subgroup joins). Sorted by
    /// size then content.
    pub fn closed_subsets(&self, star: &dyn Fn(usize) -> usize) -> Vec<Vec<usize>> {
        use std::collections::BTreeSet;
        let mut family: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in 0..self.r {
            family.insert(self.closed_closure(vec![s], star));
        }
        loop {
            let list: Vec<Vec<usize>> = family.iter().cloned().collect();
            let before = family.len();
            for a in 0..list.len() {
                for b in a + 1..list.len() {
                    let mut union = list[a].clone();
                    for &s in &list[b] {
                        if !union.contains(&s) {
                            union.push(s);
                        }
                    }
                    family.insert(self.closed_closure(union, star));
                }
            }
            if family.len() == before {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = family.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Thin residue, lattice route: the intersection of all strongly normal
    /// closed subsets.
    pub fn thin_residue_by_lattice(&self, star: &dyn Fn(usize) -> usize) -> Vec<usize> {
        let normal: Vec<Vec<usize>> = self
            .closed_subsets(star)
            .into_iter()
            .filter(|t| self.is_strongly_normal(t, star))
            .collect();
        let mut meet: Vec<usize> = (0..self.r).collect();
        for t in &normal {
            meet.retain(|s| t.contains(s));
        }
        meet
    }
}

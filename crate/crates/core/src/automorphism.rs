//! Color-preserving permutations of a scheme: a backtracking search over
//! aligned ordered partitions computes the stabilizer of the identity
//! point, its order (as an orbit-stabilizer product), generators, orbits,
//! and — below a size cap — the full element list. Schurity is then the
//! question of whether those orbits are exactly the basic sets.
//!
//! Soundness does not rest on the refinement logic: every permutation the
//! search emits is re-verified against the full color matrix before use.

use crate::pgroup::Elem;
use crate::scheme::CayleyScheme;
use crate::sring::SRing;
use num_bigint::BigUint;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

/// A permutation of the point set, as the list of images.
pub type Perm = Vec<Elem>;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Enumerate the stabilizer's elements only when its order is at most
    /// this; above it, the group is represented by order and generators.
    pub max_enumerate: usize,
    /// Worker threads for the candidate scans; 0 uses the global default.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_enumerate: 1_000_000,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchurityError {
    #[error("the ring does not satisfy both block-structure conditions")]
    ConditionsABRequired,
    #[error("stabilizer orbit {0:?} crosses a class boundary")]
    StabilizerOrbitNotInClass(Vec<Elem>),
}

/// The automorphism group of a scheme, reported through the stabilizer of
/// point 0. The full group is the stabilizer extended by the `n` right
/// translations, which act regularly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    pub n: usize,
    pub stabilizer_order: BigUint,
    pub full_order: BigUint,
    pub generators: Vec<Perm>,
    /// Stabilizer orbits on all points, each ascending, sorted by minimum.
    pub orbits: Vec<Vec<Elem>>,
    /// All stabilizer elements, sorted, when the order is within the cap.
    pub elements: Option<Vec<Perm>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurityByAut {
    pub schurian: bool,
    pub aut: AutGroup,
    /// For a non-Schurian ring: the first class that splits into several
    /// stabilizer orbits, with those orbits.
    pub split_class: Option<(usize, Vec<Vec<Elem>>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderPrecheck {
    /// The stabilizer order already rules Schurity out.
    CertainlyNot { stabilizer_order: BigUint },
    /// The order test is passed; a definite answer needs the orbit test.
    MaybeSchurian,
}

struct Colors<'a> {
    n: usize,
    r: u32,
    m: &'a [u16],
}

impl Colors<'_> {
    #[inline]
    fn at(&self, x: Elem, y: Elem) -> u32 {
        self.m[x as usize * self.n + y as usize] as u32
    }

    /// Invariant of `x` against a splitter cell: the sorted multiset of
    /// packed color pairs (outgoing, incoming).
    fn signature(&self, x: Elem, splitter: &[Elem]) -> Vec<u32> {
        let mut sig: Vec<u32> = splitter
            .iter()
            .map(|&y| self.at(x, y) * self.r + self.at(y, x))
            .collect();
        sig.sort_unstable();
        sig
    }
}

type Cells = Vec<Vec<Elem>>;

fn group_by_signature(cell: &[Elem], splitter: &[Elem], c: &Colors) -> BTreeMap<Vec<u32>, Vec<Elem>> {
    let mut groups: BTreeMap<Vec<u32>, Vec<Elem>> = BTreeMap::new();
    for &x in cell {
        groups.entry(c.signature(x, splitter)).or_default().push(x);
    }
    groups
}

/// Refines both partitions in lockstep until no cell splits against any
/// cell. Returns false when the two sides disagree on a split pattern —
/// no automorphism can respect the alignment.
fn refine(src: &mut Cells, tgt: &mut Cells, c: &Colors) -> bool {
    'restart: loop {
        for ci in 0..src.len() {
            if src[ci].len() == 1 {
                continue;
            }
            for si in 0..src.len() {
                let s_groups = group_by_signature(&src[ci], &src[si], c);
                let t_groups = group_by_signature(&tgt[ci], &tgt[si], c);
                let same_shape = s_groups.len() == t_groups.len()
                    && s_groups
                        .iter()
                        .zip(t_groups.iter())
                        .all(|((sk, sv), (tk, tv))| sk == tk && sv.len() == tv.len());
                if !same_shape {
                    return false;
                }
                if s_groups.len() > 1 {
                    splice(src, ci, s_groups);
                    splice(tgt, ci, t_groups);
                    continue 'restart;
                }
            }
        }
        return true;
    }
}

fn splice(cells: &mut Cells, ci: usize, groups: BTreeMap<Vec<u32>, Vec<Elem>>) {
    let subcells: Vec<Vec<Elem>> = groups.into_values().collect();
    cells.splice(ci..ci + 1, subcells);
}

fn individualize(cells: &mut Cells, ci: usize, point: Elem) {
    let mut rest = std::mem::take(&mut cells[ci]);
    rest.retain(|&p| p != point);
    cells[ci] = vec![point];
    cells.insert(ci + 1, rest);
}

fn first_split_cell(cells: &Cells) -> Option<usize> {
    cells.iter().position(|cell| cell.len() > 1)
}

fn extract_map(src: &Cells, tgt: &Cells, n: usize) -> Perm {
    let mut map = vec![0 as Elem; n];
    for (s, t) in src.iter().zip(tgt.iter()) {
        map[s[0] as usize] = t[0];
    }
    map
}

/// Full check of a candidate against the color matrix — the soundness
/// gate for everything the search reports.
fn is_color_automorphism(map: &[Elem], c: &Colors) -> bool {
    (0..c.n as Elem)
        .all(|x| (0..c.n as Elem).all(|y| c.at(map[x as usize], map[y as usize]) == c.at(x, y)))
}

/// Depth-first search for one color-preserving bijection consistent with
/// the aligned state.
fn find_one(mut src: Cells, mut tgt: Cells, c: &Colors) -> Option<Perm> {
    if !refine(&mut src, &mut tgt, c) {
        return None;
    }
    let Some(ci) = first_split_cell(&src) else {
        let map = extract_map(&src, &tgt, c.n);
        return is_color_automorphism(&map, c).then_some(map);
    };
    let beta = src[ci][0];
    let candidates = tgt[ci].clone();
    for gamma in candidates {
        let mut s2 = src.clone();
        let mut t2 = tgt.clone();
        individualize(&mut s2, ci, beta);
        individualize(&mut t2, ci, gamma);
        if let Some(map) = find_one(s2, t2, c) {
            return Some(map);
        }
    }
    None
}

/// Computes the stabilizer of point 0 in the automorphism group of the
/// colored matrix, by an orbit-stabilizer chain: at each level the orbit
/// of the lowest undecided point is scanned, one transversal permutation
/// found per image, and the point then pinned for the next level. The
/// order is the product of the orbit sizes.
pub fn stabilizer_search(colors: &[u16], n: usize, num_colors: usize, config: &SearchConfig) -> AutGroup {
    let run = || chain(colors, n, num_colors, config);
    if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool")
            .install(run)
    } else {
        run()
    }
}

fn chain(colors: &[u16], n: usize, num_colors: usize, config: &SearchConfig) -> AutGroup {
    assert_eq!(colors.len(), n * n);
    let c = Colors {
        n,
        r: num_colors as u32,
        m: colors,
    };
    let mut src: Cells = vec![vec![0], (1..n as Elem).collect()];
    let mut tgt = src.clone();
    if src[1].is_empty() {
        src.truncate(1);
        tgt.truncate(1);
    }
    let ok = refine(&mut src, &mut tgt, &c);
    assert!(ok, "refinement of identical sides cannot fail");

    let mut stabilizer_order = BigUint::from(1u32);
    let mut generators: Vec<Perm> = Vec::new();
    while let Some(ci) = first_split_cell(&src) {
        let beta = src[ci][0];
        let candidates: Vec<Elem> = tgt[ci].iter().copied().filter(|&g| g != beta).collect();
        let found: Vec<Option<Perm>> = candidates
            .par_iter()
            .map(|&gamma| {
                let mut s2 = src.clone();
                let mut t2 = tgt.clone();
                individualize(&mut s2, ci, beta);
                individualize(&mut t2, ci, gamma);
                find_one(s2, t2, &c)
            })
            .collect();
        let mut orbit_size = 1u64;
        for perm in found.into_iter().flatten() {
            orbit_size += 1;
            generators.push(perm);
        }
        stabilizer_order *= orbit_size;
        individualize(&mut src, ci, beta);
        individualize(&mut tgt, ci, beta);
        let ok = refine(&mut src, &mut tgt, &c);
        assert!(ok, "refinement of identical sides cannot fail");
    }

    let orbits = orbits_from_generators(n, &generators);
    let elements = enumerate_elements(n, &generators, &stabilizer_order, config.max_enumerate);
    AutGroup {
        n,
        stabilizer_order: stabilizer_order.clone(),
        full_order: stabilizer_order * BigUint::from(n as u64),
        generators,
        orbits,
        elements,
    }
}

fn orbits_from_generators(n: usize, generators: &[Perm]) -> Vec<Vec<Elem>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in generators {
        for (x, &gx) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, gx as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut buckets: BTreeMap<usize, Vec<Elem>> = BTreeMap::new();
    for x in 0..n {
        let root = find(&mut parent, x);
        buckets.entry(root).or_default().push(x as Elem);
    }
    buckets.into_values().collect()
}

fn enumerate_elements(
    n: usize,
    generators: &[Perm],
    order: &BigUint,
    cap: usize,
) -> Option<Vec<Perm>> {
    if *order > BigUint::from(cap as u64) {
        return None;
    }
    let identity: Perm = (0..n as Elem).collect();
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(sigma) = frontier.pop() {
        for g in generators {
            let composed: Perm = sigma.iter().map(|&x| g[x as usize]).collect();
            if seen.insert(composed.clone()) {
                frontier.push(composed);
            }
        }
    }
    assert_eq!(BigUint::from(seen.len() as u64), *order);
    Some(seen.into_iter().collect())
}

pub fn factorial(k: usize) -> BigUint {
    (1..=k as u64).map(BigUint::from).product()
}

/// Decides Schurity by comparing stabilizer orbits with the basic sets.
/// Orbits always refine classes for a valid ring; a violation is an
/// internal error, never a verdict.
pub fn schurity_by_automorphisms(
    sring: &Arc<SRing>,
    config: &SearchConfig,
) -> Result<SchurityByAut, SchurityError> {
    let scheme = CayleyScheme::from_sring(Arc::clone(sring));
    let aut = stabilizer_search(
        scheme.color_matrix(),
        scheme.n(),
        scheme.num_colors(),
        config,
    );
    for orbit in &aut.orbits {
        let class = sring.class_of(orbit[0]);
        if orbit
            .iter()
            .any(|&x| sring.class_of(x) != class)
        {
            return Err(SchurityError::StabilizerOrbitNotInClass(orbit.clone()));
        }
    }
    let mut split_class = None;
    for (idx, class) in sring.classes().iter().enumerate() {
        let inside: Vec<Vec<Elem>> = aut
            .orbits
            .iter()
            .filter(|orbit| sring.class_of(orbit[0]) == idx)
            .cloned()
            .collect();
        if inside.len() > 1 {
            split_class = Some((idx, inside));
            break;
        }
        debug_assert_eq!(&inside[0], class);
    }
    Ok(SchurityByAut {
        schurian: split_class.is_none(),
        aut,
        split_class,
    })
}

/// Quick necessary condition on the stabilizer order: for a ring with the
/// full block structure, a Schurian verdict forces order exactly p.
pub fn aut_order_precheck(
    sring: &Arc<SRing>,
    config: &SearchConfig,
) -> Result<OrderPrecheck, SchurityError> {
    let ab = sring.conditions_ab();
    if !(ab.holds_a && ab.holds_b) {
        return Err(SchurityError::ConditionsABRequired);
    }
    let scheme = CayleyScheme::from_sring(Arc::clone(sring));
    let aut = stabilizer_search(
        scheme.color_matrix(),
        scheme.n(),
        scheme.num_colors(),
        config,
    );
    let p = BigUint::from(sring.group().prime() as u64);
    if aut.stabilizer_order == p {
        Ok(OrderPrecheck::MaybeSchurian)
    } else {
        Ok(OrderPrecheck::CertainlyNot {
            stabilizer_order: aut.stabilizer_order,
        })
    }
}

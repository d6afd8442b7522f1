//! Schur rings: partitions of a group whose class indicator sums span a
//! subalgebra of the rational group algebra.
//!
//! A partition `{T_0, ..., T_r}` of a finite group `H` is a Schur ring when
//!
//! 1. the identity class is the singleton `{e}`,
//! 2. the inverse of every class is again a class, and
//! 3. every product of class sums is an integer combination of class sums —
//!    equivalently, for all `i, j` the multiset `{t*u : t in T_i, u in T_j}`
//!    has constant multiplicity on each class.
//!
//! Validation checks the axioms in that order and reports the first violation
//! with a concrete witness. The multiplicities become the structure constants
//! `a[i][j][k]`, stored sparsely, all exact integers.

use crate::pgroup::{Elem, Group, GroupError, GroupSpec, ParseError};
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SRingError {
    #[error("classes do not partition the group: {0}")]
    NotAPartition(String),
    #[error("the identity class is not the singleton {{e}}")]
    IdentityNotSingleton,
    #[error("inverses of class {class} do not form a class")]
    NotInverseClosed { class: usize },
    #[error(
        "product of classes {i} and {j} is not constant on class {k}: \
         multiplicity {lo_mult} at element {lo} but {hi_mult} at element {hi}"
    )]
    NotClosedUnderProduct {
        i: usize,
        j: usize,
        k: usize,
        lo: Elem,
        lo_mult: u32,
        hi: Elem,
        hi_mult: u32,
    },
    #[error("element set is not a subgroup that is a union of basic sets")]
    NotAnASubgroup,
    #[error("element {element} is not thin (its class is not a singleton)")]
    NotAThinElement { element: Elem },
    #[error("map is not a group automorphism (witness pair ({x}, {y}))")]
    NotAnAutomorphism { x: Elem, y: Elem },
}

/// Errors from reading an S-ring out of its text format: syntax errors are
/// distinct from mathematical validation failures so callers can exit
/// differently on each.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Invalid(#[from] SRingError),
}

/// A partition of the elements of a group of known order, held in canonical
/// form: every class sorted ascending, classes ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<Vec<Elem>>,
    class_of: Vec<u16>,
}

impl Partition {
    pub fn new(order: usize, mut classes: Vec<Vec<Elem>>) -> Result<Partition, SRingError> {
        let mut seen = vec![false; order];
        for class in &mut classes {
            if class.is_empty() {
                return Err(SRingError::NotAPartition("empty class".into()));
            }
            class.sort_unstable();
            for &x in class.iter() {
                if x as usize >= order {
                    return Err(SRingError::NotAPartition(format!(
                        "element index {x} out of range"
                    )));
                }
                if seen[x as usize] {
                    return Err(SRingError::NotAPartition(format!(
                        "element {x} appears twice"
                    )));
                }
                seen[x as usize] = true;
            }
            if class.windows(2).any(|w| w[0] == w[1]) {
                return Err(SRingError::NotAPartition("duplicate inside a class".into()));
            }
        }
        if let Some(x) = seen.iter().position(|&s| !s) {
            return Err(SRingError::NotAPartition(format!("element {x} not covered")));
        }
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0u16; order];
        for (ci, class) in classes.iter().enumerate() {
            for &x in class {
                class_of[x as usize] = ci as u16;
            }
        }
        Ok(Partition { classes, class_of })
    }

    /// The partition into singletons (the full group algebra).
    pub fn singletons(order: usize) -> Partition {
        let classes = (0..order as Elem).map(|x| vec![x]).collect();
        Partition::new(order, classes).unwrap()
    }

    /// `{{e}, H \ {e}}`.
    pub fn trivial(order: usize) -> Partition {
        Partition::new(order, vec![vec![0], (1..order as Elem).collect()]).unwrap()
    }

    pub fn classes(&self) -> &[Vec<Elem>] {
        &self.classes
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Sparse structure constants: for each class pair `(i, j)` the nonzero
/// `(k, a[i][j][k])` entries, sorted by `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    rows: Vec<Vec<(u16, u32)>>,
    num_classes: usize,
}

impl StructureConstants {
    pub fn get(&self, i: usize, j: usize, k: usize) -> u32 {
        let row = &self.rows[i * self.num_classes + j];
        match row.binary_search_by_key(&(k as u16), |&(c, _)| c) {
            Ok(pos) => row[pos].1,
            Err(_) => 0,
        }
    }

    pub fn row(&self, i: usize, j: usize) -> &[(u16, u32)] {
        &self.rows[i * self.num_classes + j]
    }
}

/// A validated Schur ring over a group.
#[derive(Debug, Clone)]
pub struct SRing {
    group: Arc<Group>,
    partition: Partition,
    constants: StructureConstants,
    inverse_class: Vec<u16>,
}

impl SRing {
    /// Checks the Schur-ring axioms for `partition` and computes the
    /// structure constants. Axioms are checked in order — identity first,
    /// then inverse closure, then product closure — and the first violation
    /// is reported with a witness.
    pub fn validate(group: Arc<Group>, partition: Partition) -> Result<SRing, SRingError> {
        let n = group.order();
        assert_eq!(partition.class_of.len(), n, "partition is over a different order");
        let id_class = partition.class_of(group.identity());
        if partition.classes[id_class].len() != 1 {
            return Err(SRingError::IdentityNotSingleton);
        }

        let r = partition.len();
        let mut inverse_class = vec![0u16; r];
        for (ci, class) in partition.classes.iter().enumerate() {
            let cj = partition.class_of(group.inv(class[0]));
            let mut inverses: Vec<Elem> = class.iter().map(|&x| group.inv(x)).collect();
            inverses.sort_unstable();
            if inverses != partition.classes[cj] {
                return Err(SRingError::NotInverseClosed { class: ci });
            }
            inverse_class[ci] = cj as u16;
        }

        // Product closure, with a generation-stamped scratch array so the
        // counts never need a full reset between class pairs.
        let mut counts = vec![0u32; n];
        let mut stamp = vec![0u32; n];
        let mut cur = 0u32;
        let mut rows = Vec::with_capacity(r * r);
        let mut touched: Vec<Elem> = Vec::new();
        for i in 0..r {
            for j in 0..r {
                cur += 1;
                touched.clear();
                for &t in &partition.classes[i] {
                    for &u in &partition.classes[j] {
                        let v = group.mul(t, u) as usize;
                        if stamp[v] != cur {
                            stamp[v] = cur;
                            counts[v] = 0;
                            touched.push(v as Elem);
                        }
                        counts[v] += 1;
                    }
                }
                let mut ks: Vec<u16> = touched.iter().map(|&v| partition.class_of[v as usize]).collect();
                ks.sort_unstable();
                ks.dedup();
                let mut row = Vec::with_capacity(ks.len());
                for &k in &ks {
                    let class = &partition.classes[k as usize];
                    let mult_of = |x: Elem| {
                        if stamp[x as usize] == cur {
                            counts[x as usize]
                        } else {
                            0
                        }
                    };
                    let m0 = mult_of(class[0]);
                    for &x in &class[1..] {
                        let m = mult_of(x);
                        if m != m0 {
                            let (lo, lo_mult, hi, hi_mult) = if m0 < m {
                                (class[0], m0, x, m)
                            } else {
                                (x, m, class[0], m0)
                            };
                            return Err(SRingError::NotClosedUnderProduct {
                                i,
                                j,
                                k: k as usize,
                                lo,
                                lo_mult,
                                hi,
                                hi_mult,
                            });
                        }
                    }
                    row.push((k, m0));
                }
                debug_assert_eq!(
                    row.iter()
                        .map(|&(k, m)| m as usize * partition.classes[k as usize].len())
                        .sum::<usize>(),
                    partition.classes[i].len() * partition.classes[j].len()
                );
                rows.push(row);
            }
        }

        Ok(SRing {
            group,
            partition,
            constants: StructureConstants { rows, num_classes: r },
            inverse_class,
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn classes(&self) -> &[Vec<Elem>] {
        self.partition.classes()
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.partition.class_of(x)
    }

    pub fn num_classes(&self) -> usize {
        self.partition.len()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> u32 {
        self.constants.get(i, j, k)
    }

    /// Class of the inverses of class `i`.
    pub fn inverse_class(&self, i: usize) -> usize {
        self.inverse_class[i] as usize
    }

    /// Size of class `i` (the valency of its Cayley relation).
    pub fn valency(&self, i: usize) -> usize {
        self.partition.classes()[i].len()
    }

    pub fn is_thin(&self) -> bool {
        self.classes().iter().all(|c| c.len() == 1)
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.num_classes();
        (0..r).all(|i| (i + 1..r).all(|j| self.constants.row(i, j) == self.constants.row(j, i)))
    }

    /// A p-S-ring: every class size is a power of the group's prime.
    pub fn is_p_sring(&self) -> bool {
        let p = self.group.prime() as usize;
        self.classes().iter().all(|c| {
            let mut m = c.len();
            while m % p == 0 {
                m /= p;
            }
            m == 1
        })
    }

    /// The thin radical: the set of elements lying in singleton classes.
    /// Always a subgroup.
    pub fn thin_radical(&self) -> Vec<Elem> {
        let out: Vec<Elem> = self
            .classes()
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c[0])
            .collect();
        assert!(self.group.is_subgroup(&out), "thin radical must be a subgroup");
        out
    }

    /// The thin residue: the subgroup generated by all sets `T^-1 T`.
    pub fn thin_residue(&self) -> Vec<Elem> {
        let mut gens: BTreeSet<Elem> = BTreeSet::new();
        for class in self.classes() {
            for &t in class {
                for &u in class {
                    gens.insert(self.group.mul(self.group.inv(t), u));
                }
            }
        }
        let gens: Vec<Elem> = gens.into_iter().collect();
        self.group.generate(&gens).expect("classes are nonempty")
    }

    /// Right stabilizer `{h : T·h = T}` of class `i`. Always a subgroup.
    pub fn right_stabilizer(&self, i: usize) -> Vec<Elem> {
        let class = &self.classes()[i];
        let in_class = |x: Elem| self.partition.class_of(x) == i;
        (0..self.group.order() as Elem)
            .filter(|&h| class.iter().all(|&t| in_class(self.group.mul(t, h))))
            .collect()
    }

    /// Smallest union of classes containing all classes of `seed` that forms
    /// a subgroup, as a class-index set.
    fn class_closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut current = seed.clone();
        loop {
            let elements: Vec<Elem> = current
                .iter()
                .flat_map(|&c| self.classes()[c].iter().copied())
                .collect();
            let sub = self.group.generate(&elements).expect("nonempty");
            let grown: BTreeSet<usize> = sub.iter().map(|&x| self.partition.class_of(x)).collect();
            if grown == current {
                return current;
            }
            current = grown;
        }
    }

    /// All subgroups that are unions of classes (the closed subsets of the
    /// ring), sorted by size then content. Found as joins of the closures of
    /// single classes, which is complete: any such subgroup is the join of
    /// the closures of the classes it contains.
    pub fn a_subgroups(&self) -> Vec<Vec<Elem>> {
        let mut family: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for c in 0..self.num_classes() {
            family.insert(self.class_closure(&BTreeSet::from([c])));
        }
        loop {
            let list: Vec<BTreeSet<usize>> = family.iter().cloned().collect();
            let before = family.len();
            for a in 0..list.len() {
                for b in a + 1..list.len() {
                    let union: BTreeSet<usize> = list[a].union(&list[b]).copied().collect();
                    family.insert(self.class_closure(&union));
                }
            }
            if family.len() == before {
                break;
            }
        }
        let mut out: Vec<Vec<Elem>> = family
            .into_iter()
            .map(|cs| {
                let mut v: Vec<Elem> = cs
                    .iter()
                    .flat_map(|&c| self.classes()[c].iter().copied())
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        out
    }

    /// Restriction of the ring to a subgroup that is a union of classes.
    pub fn restriction(&self, sub: &[Elem]) -> Result<Restriction, SRingError> {
        if !self.group.is_subgroup(sub) {
            return Err(SRingError::NotAnASubgroup);
        }
        let inside = |x: Elem| sub.binary_search(&x).is_ok();
        let mut classes = Vec::new();
        let mut covered = 0usize;
        for class in self.classes() {
            if inside(class[0]) {
                if !class.iter().all(|&x| inside(x)) {
                    return Err(SRingError::NotAnASubgroup);
                }
                covered += class.len();
                classes.push(class.clone());
            }
        }
        if covered != sub.len() {
            return Err(SRingError::NotAnASubgroup);
        }
        Ok(Restriction {
            carrier: sub.to_vec(),
            classes,
        })
    }

    /// Right translate of class `i` by a thin element `m`; the result is
    /// always again a class.
    pub fn translate_class(&self, i: usize, m: Elem) -> Result<usize, SRingError> {
        let m_class = self.partition.class_of(m);
        if self.classes()[m_class].len() != 1 {
            return Err(SRingError::NotAThinElement { element: m });
        }
        let mut translated: Vec<Elem> = self.classes()[i]
            .iter()
            .map(|&t| self.group.mul(t, m))
            .collect();
        translated.sort_unstable();
        let target = self.partition.class_of(translated[0]);
        assert_eq!(
            self.classes()[target],
            translated,
            "translate of a class by a thin element must be a class"
        );
        Ok(target)
    }

    /// Report on the two extra conditions satisfied by the rings this crate
    /// builds from suitable sequences:
    ///
    /// * (A) every class outside the thin residue has size p, and
    /// * (B) those classes have exactly p - 1 distinct right stabilizers.
    ///
    /// When both hold the report also records whether no outer stabilizer is
    /// the center and whether the basic sets decompose as thin-residue
    /// singletons plus p - 1 central-shift orbits of p classes each.
    pub fn conditions_ab(&self) -> ConditionsAb {
        let p = self.group.prime() as usize;
        let residue = self.thin_residue();
        let inside = |x: Elem| residue.binary_search(&x).is_ok();
        let outer: Vec<usize> = (0..self.num_classes())
            .filter(|&c| !inside(self.classes()[c][0]))
            .collect();
        let holds_a = outer.iter().all(|&c| {
            self.classes()[c].iter().all(|&x| !inside(x)) && self.valency(c) == p
        });
        let outer_stabilizers: Vec<(usize, Vec<Elem>)> = outer
            .iter()
            .map(|&c| (c, self.right_stabilizer(c)))
            .collect();
        let mut distinct: Vec<Vec<Elem>> = outer_stabilizers.iter().map(|(_, s)| s.clone()).collect();
        distinct.sort();
        distinct.dedup();
        let holds_b = distinct.len() == p - 1;

        let mut stabilizer_avoids_center = false;
        let mut block_structure = false;
        if holds_a && holds_b {
            let center = self.group.center();
            stabilizer_avoids_center = distinct.iter().all(|s| *s != center);
            block_structure = self.check_block_structure(&residue, &outer);
        }
        ConditionsAb {
            holds_a,
            holds_b,
            outer_stabilizers,
            distinct_stabilizers: distinct,
            stabilizer_avoids_center,
            block_structure,
        }
    }

    /// Checks that basic sets are exactly: singletons on the thin residue
    /// (which must be the thin radical, of order p^2), plus the central-shift
    /// orbits `T_i z^j` of p - 1 representative classes.
    fn check_block_structure(&self, residue: &[Elem], outer: &[usize]) -> bool {
        let p = self.group.prime() as usize;
        if residue.len() != p * p || *residue != self.thin_radical() {
            return false;
        }
        if outer.len() != p * (p - 1) {
            return false;
        }
        let z = self.group.central_shift();
        if self.classes()[self.partition.class_of(z)].len() != 1 {
            return false;
        }
        // z-orbits on outer classes must have size exactly p with constant
        // right stabilizer, and there must be p - 1 of them.
        let mut orbit_of = vec![usize::MAX; self.num_classes()];
        let mut orbits = 0usize;
        for &c in outer {
            if orbit_of[c] != usize::MAX {
                continue;
            }
            let mut members = Vec::new();
            let mut t = c;
            loop {
                members.push(t);
                orbit_of[t] = orbits;
                t = match self.translate_class(t, z) {
                    Ok(t) => t,
                    Err(_) => return false,
                };
                if t == c {
                    break;
                }
            }
            if members.len() != p {
                return false;
            }
            let stab = self.right_stabilizer(c);
            if members.iter().any(|&m| self.right_stabilizer(m) != stab) {
                return false;
            }
            orbits += 1;
        }
        orbits == p - 1
    }

    // --- text format --------------------------------------------------------

    /// Canonical text form: the group header, then one class per line with
    /// elements in index order, classes ordered by least element.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.group.spec().header());
        out.push('\n');
        for class in self.classes() {
            let line: Vec<String> = class.iter().map(|&x| self.group.format_elem(x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Reads and validates the text form. `#`-prefixed lines and blank lines
    /// are ignored; classes may appear in any order.
    pub fn from_text(text: &str) -> Result<SRing, ReadError> {
        let (spec, classes) = parse_classes(text)?;
        let group = Arc::new(Group::build(spec)?);
        let partition = Partition::new(group.order(), classes)?;
        Ok(SRing::validate(group, partition)?)
    }
}

/// Parse the header and raw class lines of the S-ring text format.
pub fn parse_classes(text: &str) -> Result<(GroupSpec, Vec<Vec<Elem>>), ReadError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| ParseError::BadHeader("<empty input>".into()))?;
    let spec = GroupSpec::parse_header(header)?;
    let group = Group::build(spec)?;
    let mut classes = Vec::new();
    for line in lines {
        let class: Result<Vec<Elem>, ParseError> =
            line.split(',').map(|tok| group.parse_elem(tok)).collect();
        classes.push(class?);
    }
    Ok((spec, classes))
}

/// The classes of a ring restricted to one of its A-subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    /// The subgroup, sorted by element index.
    pub carrier: Vec<Elem>,
    /// The parent classes contained in the carrier, in canonical order.
    pub classes: Vec<Vec<Elem>>,
}

/// See [`SRing::conditions_ab`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionsAb {
    pub holds_a: bool,
    pub holds_b: bool,
    /// `(class index, right stabilizer)` for every class outside the thin residue.
    pub outer_stabilizers: Vec<(usize, Vec<Elem>)>,
    pub distinct_stabilizers: Vec<Vec<Elem>>,
    /// Both hold and no outer stabilizer equals the center.
    pub stabilizer_avoids_center: bool,
    /// Both hold and the basic sets have the singleton-plus-shift-orbit shape.
    pub block_structure: bool,
}

/// The partition of `group` into orbits of the subgroup of `Aut(group)`
/// generated by `auts` (each given as an image table), validated as a Schur
/// ring. Every input map is checked to be an automorphism first.
pub fn transitivity_module(group: &Arc<Group>, auts: &[Vec<Elem>]) -> Result<SRing, SRingError> {
    let n = group.order();
    for map in auts {
        assert_eq!(map.len(), n, "image table has wrong length");
        if let Err((x, y)) = group.check_automorphism(map) {
            return Err(SRingError::NotAnAutomorphism { x, y });
        }
    }
    // Orbits of the generated subgroup are the connected components under
    // the generator maps (each is a bijection of a finite set).
    let mut orbit: Vec<usize> = (0..n).collect();
    fn find(orbit: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while orbit[root] != root {
            root = orbit[root];
        }
        let mut cur = x;
        while orbit[cur] != root {
            let next = orbit[cur];
            orbit[cur] = root;
            cur = next;
        }
        root
    }
    for map in auts {
        for (x, &img) in map.iter().enumerate() {
            let a = find(&mut orbit, x);
            let b = find(&mut orbit, img as usize);
            if a != b {
                orbit[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<Elem>> = vec![Vec::new(); n];
    for x in 0..n {
        let root = find(&mut orbit, x);
        classes[root].push(x as Elem);
    }
    classes.retain(|c| !c.is_empty());
    let partition = Partition::new(n, classes)?;
    SRing::validate(Arc::clone(group), partition)
}

//! The second, search-free route to Schurity: fix an ordering of every
//! basic set, list the permutations that fix the small subgroup pointwise
//! and cycle each size-p class while preserving internal colors, and ask
//! whether one of them preserves colors across every pair of
//! representative classes. A witness exists if and only if the stabilizer
//! orbits recover the classes, so this decision must always agree with
//! the automorphism search.
//!
//! The same ordered bases support the congruence description of the
//! cross-class relation blocks, and the composed-congruence argument that
//! refutes compatibility for one family of rings.

use crate::automorphism::Perm;
use crate::pgroup::{Elem, Family, Group};
use crate::scheme::{CayleyScheme, SchemeError};
use crate::sequences::{mod4_3_sequence, sring_from_sequence, BuildError};
use crate::sring::SRing;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompatError {
    #[error("the ring does not satisfy both block-structure conditions")]
    ConditionsABRequired,
    #[error("class {class} has no stabilizer element with second-generator exponent 1")]
    MissingStabilizerGenerator { class: usize },
    #[error("relation {k} meets no pair of classes ({i},{j})")]
    EmptyIntersection { i: usize, j: usize, k: usize },
    #[error("congruence for ({i},{j},{k}) disagrees with the relation block at column {l}: expected row {expected}, found {actual}")]
    CongruenceMismatch {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        expected: usize,
        actual: usize,
    },
    #[error("walkthrough does not apply: {0}")]
    Inapplicable(String),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Fixed orderings for every basic set of a ring with the full block
/// structure: each outer class `T z^j` is listed as
/// `(a^i t_i^m z^j)` for `m = 0..p`, where `t_i` generates the class
/// stabilizer. All block matrices and congruences refer to these
/// orderings.
#[derive(Debug, Clone)]
pub struct OrderedBasis {
    sring: Arc<SRing>,
    prime: u16,
    /// `x` values recovered from the stabilizers; index 0 unused.
    xs: Vec<u16>,
    /// class index of the representative class of `a^i`; index 0 unused.
    rep_class: Vec<usize>,
    /// `shifted_class[i][j]` is the class index of `T_i z^j`.
    shifted_class: Vec<Vec<usize>>,
    /// per class index: its elements in basis order.
    order_of: Vec<Vec<Elem>>,
    /// per element: (class index, ordinal in basis order).
    position: Vec<(u16, u16)>,
    /// all class indices: small-subgroup singletons first (ascending),
    /// then the outer classes grouped by representative and shift.
    block_sequence: Vec<usize>,
}

impl OrderedBasis {
    pub fn new(sring: &Arc<SRing>) -> Result<OrderedBasis, CompatError> {
        let ab = sring.conditions_ab();
        if !(ab.holds_a && ab.holds_b && ab.block_structure) {
            return Err(CompatError::ConditionsABRequired);
        }
        let g = sring.group();
        let p = g.prime();
        let n = g.order();
        let z = g.central_shift();

        let mut xs = vec![0u16; p as usize];
        let mut rep_class = vec![usize::MAX; p as usize];
        let mut shifted_class = vec![Vec::new(); p as usize];
        let mut order_of: Vec<Vec<Elem>> = sring.classes().to_vec();
        for i in 1..p {
            let rep = match g.family() {
                Family::H1 => g.h1_elem(i as u32, 0),
                Family::H2 => g.h2_elem(i as u32, 0, 0),
            };
            let class = sring.class_of(rep);
            rep_class[i as usize] = class;
            let stab = sring.right_stabilizer(class);
            let t_i = stab
                .iter()
                .copied()
                .find(|&e| g.exponents(e).1 == 1)
                .ok_or(CompatError::MissingStabilizerGenerator { class })?;
            xs[i as usize] = match g.family() {
                Family::H1 => {
                    let (ie, _, _) = g.exponents(t_i);
                    debug_assert_eq!(ie % p as u32, 0);
                    (ie / p as u32) as u16
                }
                Family::H2 => g.exponents(t_i).2 as u16,
            };
            // T_i = a^i <t_i>, in powers-of-t_i order; each z-shift
            // inherits the ordering
            let mut base: Vec<Elem> = Vec::with_capacity(p as usize);
            let mut cur = rep;
            for _ in 0..p {
                base.push(cur);
                cur = g.mul(cur, t_i);
            }
            debug_assert_eq!(cur, rep);
            for j in 0..p {
                let shift = g.pow(z, j as u32);
                let elems: Vec<Elem> = base.iter().map(|&e| g.mul(e, shift)).collect();
                let class_j = sring.class_of(elems[0]);
                {
                    let sorted_class = &sring.classes()[class_j];
                    let mut check = elems.clone();
                    check.sort_unstable();
                    debug_assert_eq!(&check, sorted_class);
                }
                shifted_class[i as usize].push(class_j);
                order_of[class_j] = elems;
            }
        }

        let mut position = vec![(0u16, 0u16); n];
        for (class, elems) in order_of.iter().enumerate() {
            for (ordinal, &e) in elems.iter().enumerate() {
                position[e as usize] = (class as u16, ordinal as u16);
            }
        }
        let mut block_sequence: Vec<usize> = (0..sring.num_classes())
            .filter(|&c| sring.classes()[c].len() == 1)
            .collect();
        for shifted in shifted_class.iter().skip(1) {
            block_sequence.extend(shifted.iter().copied());
        }
        Ok(OrderedBasis {
            sring: Arc::clone(sring),
            prime: p,
            xs,
            rep_class,
            shifted_class,
            order_of,
            position,
            block_sequence,
        })
    }

    pub fn sring(&self) -> &Arc<SRing> {
        &self.sring
    }

    pub fn prime(&self) -> u16 {
        self.prime
    }

    /// Recovered sequence values; index 0 is unused.
    pub fn sequence(&self) -> &[u16] {
        &self.xs
    }

    pub fn rep_class(&self, i: usize) -> usize {
        self.rep_class[i]
    }

    pub fn shifted_class(&self, i: usize, j: usize) -> usize {
        self.shifted_class[i][j]
    }

    pub fn class_order(&self, class: usize) -> &[Elem] {
        &self.order_of[class]
    }

    pub fn position(&self, e: Elem) -> (usize, usize) {
        let (c, o) = self.position[e as usize];
        (c as usize, o as usize)
    }

    pub fn block_sequence(&self) -> &[usize] {
        &self.block_sequence
    }
}

/// A congruence `a*n + shift = b*l (mod p)` describing which row ordinal
/// `n` pairs with column ordinal `l` inside a relation block. The shift
/// is the central carry: over the first family, composing `a^k` with
/// `a^i` when `k + i >= p` picks up one factor of the central generator;
/// the second family has no carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceLine {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub a: u16,
    pub b: u16,
    pub shift: u16,
    pub modulus: u16,
}

impl CongruenceLine {
    pub fn holds(&self, n: u16, l: u16) -> bool {
        (self.a as u32 * n as u32 + self.shift as u32) % self.modulus as u32
            == (self.b as u32 * l as u32) % self.modulus as u32
    }

    /// Two shift-free lines describe the same set of pairs when their
    /// coefficient vectors are proportional.
    pub fn equivalent(&self, a: u16, b: u16) -> bool {
        self.shift == 0
            && (self.a as u32 * b as u32) % self.modulus as u32
                == (a as u32 * self.b as u32) % self.modulus as u32
    }

    /// The slope `b/a`, assuming `a` is invertible.
    pub fn slope(&self) -> u16 {
        let inv = mod_inverse(self.a, self.modulus);
        ((inv as u32 * self.b as u32) % self.modulus as u32) as u16
    }
}

fn mod_inverse(a: u16, p: u16) -> u16 {
    // Fermat: a^(p-2) mod p for prime p
    let mut result = 1u32;
    let mut base = a as u32 % p as u32;
    let mut exp = p as u32 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u32;
        }
        base = base * base % p as u32;
        exp >>= 1;
    }
    result as u16
}

/// Derives the congruence describing the block of relation `T_k` on
/// `T_i x T_j` from the recovered sequence values, then verifies it
/// against the actual block column by column.
pub fn triple_congruence(
    scheme: &CayleyScheme,
    basis: &OrderedBasis,
    i: usize,
    j: usize,
    k: usize,
) -> Result<CongruenceLine, CompatError> {
    let p = basis.prime();
    let rows = basis.class_order(basis.rep_class(i));
    let cols = basis.class_order(basis.rep_class(j));
    let color = basis.rep_class(k);
    let perm = match scheme.block_permutation(color, rows, cols) {
        Err(SchemeError::EmptyBlock { .. }) => {
            return Err(CompatError::EmptyIntersection { i, j, k })
        }
        Err(e) => unreachable!("block_permutation: {e}"),
        Ok(None) => {
            return Err(CompatError::Inapplicable(format!(
                "relation {k} is not a permutation between classes {i} and {j}"
            )))
        }
        Ok(Some(perm)) => perm,
    };
    let xs = basis.sequence();
    let a = (xs[i] + i as u16 + p - xs[k]) % p;
    let b = (xs[j] + i as u16 + p - xs[k]) % p;
    let shift = match basis.sring().group().family() {
        Family::H1 if i + k >= p as usize => 1,
        _ => 0,
    };
    let line = CongruenceLine {
        i,
        j,
        k,
        a,
        b,
        shift,
        modulus: p,
    };
    // the block pairs row n with column l exactly when a*n + shift = b*l
    let inv_a = mod_inverse(a, p) as u32;
    for (l, &n) in perm.iter().enumerate() {
        let rhs = (line.b as u32 * l as u32 + p as u32 - line.shift as u32) % p as u32;
        let expected = (inv_a * rhs % p as u32) as usize;
        if n != expected {
            return Err(CompatError::CongruenceMismatch {
                i,
                j,
                k,
                l,
                expected,
                actual: n,
            });
        }
    }
    Ok(line)
}

/// All permutations of the given class (as ordinal maps on the supplied
/// ordering) that act as a single p-cycle and preserve every internal
/// color. Found by propagation: choose the image of the first element;
/// every other image is then forced by the first element's color row.
pub fn gamma1_restrictions(scheme: &CayleyScheme, class_order: &[Elem]) -> Vec<Vec<usize>> {
    let p = class_order.len();
    let mut out = Vec::new();
    for image0 in 0..p {
        // color row of the candidate image point, inverted
        let mut row = vec![usize::MAX; scheme.num_colors()];
        for (o2, &e2) in class_order.iter().enumerate() {
            let c = scheme.color(class_order[image0], e2);
            debug_assert_eq!(row[c], usize::MAX, "color row must be injective");
            row[c] = o2;
        }
        let perm: Option<Vec<usize>> = class_order
            .iter()
            .map(|&e| {
                let forced = row[scheme.color(class_order[0], e)];
                (forced != usize::MAX).then_some(forced)
            })
            .collect();
        let Some(perm) = perm else { continue };
        if !is_single_cycle(&perm) {
            continue;
        }
        let preserves = (0..p).all(|m| {
            (0..p).all(|n| {
                scheme.color(class_order[m], class_order[n])
                    == scheme.color(class_order[perm[m]], class_order[perm[n]])
            })
        });
        if preserves {
            out.push(perm);
        }
    }
    out
}

fn is_single_cycle(perm: &[usize]) -> bool {
    let mut seen = 1usize;
    let mut at = perm[0];
    while at != 0 && seen <= perm.len() {
        at = perm[at];
        seen += 1;
    }
    at == 0 && seen == perm.len()
}

/// Colors preserved on every pair of `t1 x t2` under the permutation.
pub fn are_compatible(scheme: &CayleyScheme, sigma: &[Elem], t1: &[Elem], t2: &[Elem]) -> bool {
    t1.iter().all(|&beta| {
        t2.iter().all(|&gamma| {
            scheme.color(beta, gamma)
                == scheme.color(sigma[beta as usize], sigma[gamma as usize])
        })
    })
}

/// Membership test for the witness family: fixes every singleton class
/// pointwise, acts as a color-preserving p-cycle on every outer class.
pub fn is_gamma1_member(scheme: &CayleyScheme, basis: &OrderedBasis, sigma: &[Elem]) -> bool {
    let sring = basis.sring();
    for (class, elems) in sring.classes().iter().enumerate() {
        if elems.len() == 1 {
            if sigma[elems[0] as usize] != elems[0] {
                return false;
            }
            continue;
        }
        let order = basis.class_order(class);
        let perm: Option<Vec<usize>> = order
            .iter()
            .map(|&e| {
                let image = sigma[e as usize];
                let (c, o) = basis.position(image);
                (c == class).then_some(o)
            })
            .collect();
        let Some(perm) = perm else { return false };
        if !is_single_cycle(&perm) {
            return false;
        }
        if !are_compatible(scheme, sigma, order, order) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatOutcome {
    pub schurian: bool,
    /// A color-preserving witness permutation on success.
    pub witness: Option<Perm>,
    pub candidates_tried: usize,
}

/// Decides Schurity without searching: a witness restricted to the first
/// representative class must be one of the p-1 nontrivial ordinal
/// shifts, and each further representative's restriction is forced
/// through a connecting relation block. Each forced assembly is then
/// checked against every representative pair.
pub fn schurity_by_compatibility(sring: &Arc<SRing>) -> Result<CompatOutcome, CompatError> {
    let basis = OrderedBasis::new(sring)?;
    let scheme = CayleyScheme::from_sring(Arc::clone(sring));
    let g = sring.group();
    let p = basis.prime() as usize;
    let n = g.order();

    // connecting blocks: relation T_{j-1} pairs T_1 with T_j
    let mut connectors: Vec<Vec<usize>> = vec![Vec::new(); p];
    for (j, slot) in connectors.iter_mut().enumerate().skip(2) {
        let rows = basis.class_order(basis.rep_class(1));
        let cols = basis.class_order(basis.rep_class(j));
        let color = basis.rep_class(j - 1);
        *slot = scheme
            .block_permutation(color, rows, cols)
            .expect("connecting relation meets the block")
            .expect("connecting block is a permutation matrix");
    }

    for c1 in 1..p {
        // ordinal image map per representative: T_1 shifts by c1; T_j is
        // conjugate to that shift through its connecting block
        let mut ordinal_maps: Vec<Vec<usize>> = vec![Vec::new(); p];
        ordinal_maps[1] = (0..p).map(|o| (o + c1) % p).collect();
        for j in 2..p {
            let rho = &connectors[j];
            let mut rho_inv = vec![0usize; p];
            for (col, &row) in rho.iter().enumerate() {
                rho_inv[row] = col;
            }
            ordinal_maps[j] = (0..p).map(|l| rho_inv[(rho[l] + c1) % p]).collect();
        }
        // assemble the full permutation: identity on the small subgroup,
        // the representative's ordinal map on each of its shifted classes
        let mut sigma: Perm = (0..n as Elem).collect();
        for i in 1..p {
            for j in 0..p {
                let order = basis.class_order(basis.shifted_class(i, j));
                for (o, &e) in order.iter().enumerate() {
                    sigma[e as usize] = order[ordinal_maps[i][o]];
                }
            }
        }
        if !is_gamma1_member(&scheme, &basis, &sigma) {
            continue;
        }
        let compatible = (1..p).all(|i| {
            (i + 1..p).all(|j| {
                are_compatible(
                    &scheme,
                    &sigma,
                    basis.class_order(basis.rep_class(i)),
                    basis.class_order(basis.rep_class(j)),
                )
            })
        });
        if compatible {
            // pairwise compatibility of representatives extends to a full
            // scheme automorphism; verify rather than trust
            let full = (0..n as Elem).all(|x| {
                (0..n as Elem).all(|y| {
                    scheme.color(x, y)
                        == scheme.color(sigma[x as usize], sigma[y as usize])
                })
            });
            assert!(full, "compatible witness must preserve all colors");
            return Ok(CompatOutcome {
                schurian: true,
                witness: Some(sigma),
                candidates_tried: c1,
            });
        }
    }
    Ok(CompatOutcome {
        schurian: false,
        witness: None,
        candidates_tried: p - 1,
    })
}

/// The symbolic incompatibility argument for the alternating-pair rings
/// over the first family, whose sequences start `0, (p+1)/2, p-1`: the
/// congruences of three relation blocks compose into a constraint that
/// one concrete pair violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkthroughReport {
    pub prime: u16,
    pub sequence: Vec<u16>,
    pub case1: CongruenceLine,
    pub case2: CongruenceLine,
    pub case3: CongruenceLine,
    /// Composed constraint `a*n = b*l` linking the first and third
    /// representative classes through the second.
    pub composed: (u16, u16),
    /// The refuting pair of ordinals.
    pub contradiction_point: (u16, u16),
    pub point_satisfies_direct: bool,
    pub point_violates_composed: bool,
    /// Column 0 pairs with row 0 in all three blocks.
    pub zero_maps_to_zero: bool,
    pub compat_verdict: bool,
}

pub fn incompatibility_walkthrough(p: u16) -> Result<WalkthroughReport, CompatError> {
    if p % 4 != 3 {
        return Err(CompatError::Inapplicable(format!(
            "prime {p} is not 3 mod 4"
        )));
    }
    let xs = mod4_3_sequence(p).map_err(BuildError::from)?;
    if xs[2] != p - 1 {
        return Err(CompatError::Inapplicable(format!(
            "third sequence entry is {}, not {}",
            xs[2],
            p - 1
        )));
    }
    let g = Arc::new(Group::new(Family::H1, p).expect("odd prime"));
    let sring = Arc::new(sring_from_sequence(&g, &xs)?);
    let basis = OrderedBasis::new(&sring)?;
    let scheme = CayleyScheme::from_sring(Arc::clone(&sring));

    let case1 = triple_congruence(&scheme, &basis, 1, 2, 1)?;
    let case2 = triple_congruence(&scheme, &basis, 2, 3, 1)?;
    let case3 = triple_congruence(&scheme, &basis, 1, 3, 2)?;
    let composed = (
        1u16,
        (case1.slope() as u32 * case2.slope() as u32 % p as u32) as u16,
    );
    let composed_line = CongruenceLine {
        i: 1,
        j: 3,
        k: 0,
        a: composed.0,
        b: composed.1,
        shift: 0,
        modulus: p,
    };
    let point = (p - 1, 1);
    let a1 = g.gen_a();
    let a2 = g.pow(a1, 2);
    let a3 = g.pow(a1, 3);
    let zero_maps_to_zero = scheme.color(a1, a2) == basis.rep_class(1)
        && scheme.color(a2, a3) == basis.rep_class(1)
        && scheme.color(a1, a3) == basis.rep_class(2);
    let compat_verdict = schurity_by_compatibility(&sring)?.schurian;
    Ok(WalkthroughReport {
        prime: p,
        sequence: xs,
        case1,
        case2,
        case3,
        composed,
        contradiction_point: point,
        point_satisfies_direct: case3.holds(point.0, point.1),
        point_violates_composed: !composed_line.holds(point.0, point.1),
        zero_maps_to_zero,
        compat_verdict,
    })
}

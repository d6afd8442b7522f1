//! Suitable sequences and the Schur rings they generate.
//!
//! A sequence `(x_1, ..., x_{p-1})` of residues mod an odd prime `p` is
//! *suitable* when
//!
//! * `x_1 = 0`,
//! * the entries are pairwise distinct (so exactly one residue is missed), and
//! * `x_i + i = x_{p-i}  (mod p)` for `1 <= i <= (p-1)/2`.
//!
//! Every suitable sequence determines a Schur ring over each of the two
//! non-abelian groups of order `p^3`: the subgroup `L` (`<a^p, b>` for `h1`,
//! `<b, c>` for `h2`) splits into singletons, and the rest of the group into
//! `p(p-1)` classes of size `p` — the central-shift orbits of
//!
//! * `h1`: `T_i = { a^(i + p*x_i*t) b^t : 0 <= t < p }`,
//! * `h2`: `T_i = { a^i b^t c^(x_i*t) : 0 <= t < p }`,
//!
//! for `1 <= i <= p-1`. [`sring_from_sequence`] builds that partition and
//! runs it through full Schur-ring validation rather than trusting the
//! construction.

use crate::pgroup::{Elem, Family, Group};
use crate::sring::{Partition, SRing, SRingError};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("p must be an odd prime, got {prime}")]
    NotAnOddPrime { prime: u16 },
    #[error("sequence is not suitable: {0}")]
    NotSuitable(String),
    #[error("no suitable sequence with second entry (p+1)/2 exists for p = {prime}")]
    NoSequence { prime: u16 },
    #[error("construction requires p = 3 (mod 4), got {prime}")]
    WrongResidue { prime: u16 },
    #[error("enumeration is capped at p <= {max}, got {prime}")]
    CapExceeded { prime: u16, max: u16 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Ring(#[from] SRingError),
}

fn check_odd_prime(p: u16) -> Result<(), SequenceError> {
    let composite = (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0);
    if p < 3 || p % 2 == 0 || composite {
        return Err(SequenceError::NotAnOddPrime { prime: p });
    }
    Ok(())
}

/// Checks the three defining conditions, reporting the first failure.
pub fn is_suitable(p: u16, xs: &[u16]) -> Result<(), SequenceError> {
    check_odd_prime(p)?;
    if xs.len() != (p - 1) as usize {
        return Err(SequenceError::NotSuitable(format!(
            "length {} != p - 1 = {}",
            xs.len(),
            p - 1
        )));
    }
    if let Some(&x) = xs.iter().find(|&&x| x >= p) {
        return Err(SequenceError::NotSuitable(format!(
            "entry {x} is not a residue mod {p}"
        )));
    }
    if xs[0] != 0 {
        return Err(SequenceError::NotSuitable(format!(
            "first entry is {}, not 0",
            xs[0]
        )));
    }
    let mut seen = vec![false; p as usize];
    for &x in xs {
        if seen[x as usize] {
            return Err(SequenceError::NotSuitable(format!("entry {x} repeats")));
        }
        seen[x as usize] = true;
    }
    for i in 1..=(p - 1) / 2 {
        let lhs = (xs[(i - 1) as usize] + i) % p;
        let rhs = xs[(p - i - 1) as usize];
        if lhs != rhs {
            return Err(SequenceError::NotSuitable(format!(
                "x_{i} + {i} = {lhs} but x_{} = {rhs} (mod {p})",
                p - i
            )));
        }
    }
    Ok(())
}

/// The unique residue mod `p` absent from `xs`, when exactly one is absent.
pub fn missing_residue(p: u16, xs: &[u16]) -> Option<u16> {
    let mut seen = vec![false; p as usize];
    for &x in xs {
        if x >= p || seen[x as usize] {
            return None;
        }
        seen[x as usize] = true;
    }
    let absent: Vec<u16> = (0..p).filter(|&r| !seen[r as usize]).collect();
    match absent[..] {
        [r] => Some(r),
        _ => None,
    }
}

/// The arithmetic-progression sequence `x_i = (p-1)/2 * (i-1)  (mod p)`,
/// suitable for every odd prime; it misses the residue `(p+1)/2`.
pub fn canonical_sequence(p: u16) -> Result<Vec<u16>, SequenceError> {
    check_odd_prime(p)?;
    let step = (p - 1) / 2;
    let xs: Vec<u16> = (0..p - 1).map(|i| (step * i) % p).collect();
    is_suitable(p, &xs).expect("arithmetic progression is always suitable");
    Ok(xs)
}

/// For `p = 4k + 3` with `k >= 1`, a suitable sequence whose second entry is
/// `(p+1)/2`, built by swapping selected entries of the canonical sequence:
/// the entries at positions `{2l, p-2l : 1 <= l <= k+1}` are rearranged, in a
/// pattern that depends on the parity of `k`, and all other positions keep
/// their canonical values.
///
/// The result is re-checked for suitability; `k >= 3` odd (first prime
/// `p = 23`) makes the odd-`k` pattern collide, and then this returns
/// [`SequenceError::NotSuitable`] rather than a broken sequence.
pub fn mod4_3_sequence(p: u16) -> Result<Vec<u16>, SequenceError> {
    check_odd_prime(p)?;
    if p % 4 != 3 {
        return Err(SequenceError::WrongResidue { prime: p });
    }
    let k = ((p - 3) / 4) as usize;
    if k == 0 {
        // p = 3: the only suitable sequence is (0, 1), whose second entry
        // is not (p+1)/2 = 2.
        return Err(SequenceError::NoSequence { prime: p });
    }
    let canonical = canonical_sequence(p)?;
    let pu = p as usize;
    // 1-indexed views so positions read like the construction.
    let x = |i: usize| canonical[i - 1];
    let mut y = canonical.clone();
    let set = |ys: &mut [u16], i: usize, v: u16| ys[i - 1] = v;

    if k % 2 == 0 {
        set(&mut y, 2 * k + 2, x(pu - 2 * k - 2));
        set(&mut y, pu - 2 * k - 2, x(2 * k));
        set(&mut y, pu - 2, x(pu - 4));
        set(&mut y, 2, (p + 1) / 2);
        for l in 2..=k {
            if l % 2 == 0 {
                set(&mut y, pu - 2 * l, x(pu - 2 * (l - 1)));
                set(&mut y, 2 * l, x(2 * (l + 1)));
            } else {
                set(&mut y, pu - 2 * l, x(pu - 2 * (l + 1)));
                set(&mut y, 2 * l, x(2 * (l - 1)));
            }
        }
    } else {
        set(&mut y, 2 * k + 2, x(pu - 2 * k));
        set(&mut y, pu - 2 * k - 2, x(2 * k + 2));
        set(&mut y, pu - 2, x(pu - 4));
        set(&mut y, 2, (p + 1) / 2);
        for l in 2..=k {
            if l % 2 == 0 {
                set(&mut y, pu - 2 * l, x(pu - 2 * (l + 1)));
                set(&mut y, 2 * l, x(2 * (l - 1)));
            } else {
                set(&mut y, pu - 2 * l, x(pu - 2 * (l - 1)));
                set(&mut y, 2 * l, x(2 * (l + 1)));
            }
        }
    }
    is_suitable(p, &y)?;
    assert_eq!(y[1], (p + 1) / 2);
    Ok(y)
}

/// Maximum prime for [`enumerate_suitable`].
pub const ENUMERATE_MAX: u16 = 13;

/// All suitable sequences for `p`, in lexicographic order.
///
/// The search fixes `x_1 = 0`, chooses `x_i` for `2 <= i <= (p-1)/2` and
/// derives `x_{p-i} = x_i + i (mod p)`, pruning on repeated values; the free
/// positions are an initial segment, so emission order is already
/// lexicographic.
pub fn enumerate_suitable(p: u16) -> Result<Vec<Vec<u16>>, SequenceError> {
    check_odd_prime(p)?;
    if p > ENUMERATE_MAX {
        return Err(SequenceError::CapExceeded {
            prime: p,
            max: ENUMERATE_MAX,
        });
    }
    let half = ((p - 1) / 2) as usize;
    let mut xs = vec![0u16; (p - 1) as usize];
    let mut used = vec![false; p as usize];
    // x_1 = 0 forces x_{p-1} = 1.
    xs[0] = 0;
    xs[(p - 2) as usize] = 1;
    used[0] = true;
    used[1] = true;
    let mut out = Vec::new();
    search(p, 2, half, &mut xs, &mut used, &mut out);
    for xs in &out {
        is_suitable(p, xs).expect("search emits only suitable sequences");
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    return Ok(out);

    fn search(
        p: u16,
        i: usize,
        half: usize,
        xs: &mut Vec<u16>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<u16>>,
    ) {
        if i > half {
            out.push(xs.clone());
            return;
        }
        let partner = p as usize - i;
        for v in 0..p {
            let w = (v + i as u16) % p;
            // i < p - i for i <= (p-1)/2, so the two positions are distinct,
            // and v != w because 0 < i < p.
            if used[v as usize] || used[w as usize] {
                continue;
            }
            xs[i - 1] = v;
            xs[partner - 1] = w;
            used[v as usize] = true;
            used[w as usize] = true;
            search(p, i + 1, half, xs, used, out);
            used[v as usize] = false;
            used[w as usize] = false;
        }
    }
}

/// Builds the Schur ring of a suitable sequence over `group` and validates
/// every axiom from scratch.
pub fn sring_from_sequence(group: &Arc<Group>, xs: &[u16]) -> Result<SRing, BuildError> {
    let p = group.prime();
    is_suitable(p, xs)?;
    let pu = p as u32;
    let mut classes: Vec<Vec<Elem>> =
        Vec::with_capacity((pu * pu + pu * (pu - 1)) as usize);
    match group.family() {
        Family::H1 => {
            for m in 0..pu {
                for t in 0..pu {
                    classes.push(vec![group.h1_elem(pu * m, t)]);
                }
            }
            for i in 1..pu {
                let xi = xs[(i - 1) as usize] as u32;
                for j in 0..pu {
                    classes.push((0..pu).map(|t| group.h1_elem(i + pu * (xi * t + j), t)).collect());
                }
            }
        }
        Family::H2 => {
            for m in 0..pu {
                for t in 0..pu {
                    classes.push(vec![group.h2_elem(0, m, t)]);
                }
            }
            for i in 1..pu {
                let xi = xs[(i - 1) as usize] as u32;
                for j in 0..pu {
                    classes.push((0..pu).map(|t| group.h2_elem(i, t, xi * t + j)).collect());
                }
            }
        }
    }
    let partition = Partition::new(group.order(), classes)?;
    Ok(SRing::validate(Arc::clone(group), partition)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sequences_match_known_values() {
        assert_eq!(canonical_sequence(3).unwrap(), vec![0, 1]);
        assert_eq!(canonical_sequence(5).unwrap(), vec![0, 2, 4, 1]);
        assert_eq!(canonical_sequence(7).unwrap(), vec![0, 3, 6, 2, 5, 1]);
        assert_eq!(
            canonical_sequence(11).unwrap(),
            vec![0, 5, 10, 4, 9, 3, 8, 2, 7, 1]
        );
        for p in [3u16, 5, 7, 11, 13, 17, 19] {
            let xs = canonical_sequence(p).unwrap();
            assert_eq!(missing_residue(p, &xs), Some((p + 1) / 2));
        }
    }

    #[test]
    fn bad_primes_are_rejected() {
        for p in [0u16, 1, 2, 4, 9, 15] {
            assert_eq!(
                canonical_sequence(p).unwrap_err(),
                SequenceError::NotAnOddPrime { prime: p }
            );
        }
    }

    #[test]
    fn suitability_rejects_each_violation() {
        // wrong length
        assert!(matches!(
            is_suitable(5, &[0, 2, 4]),
            Err(SequenceError::NotSuitable(_))
        ));
        // out-of-range entry
        assert!(matches!(
            is_suitable(5, &[0, 2, 5, 1]),
            Err(SequenceError::NotSuitable(_))
        ));
        // first entry nonzero
        assert!(matches!(
            is_suitable(5, &[1, 2, 4, 0]),
            Err(SequenceError::NotSuitable(_))
        ));
        // repeated entry
        assert!(matches!(
            is_suitable(5, &[0, 2, 2, 1]),
            Err(SequenceError::NotSuitable(_))
        ));
        // congruence broken: x_2 + 2 != x_3
        assert!(matches!(
            is_suitable(5, &[0, 3, 4, 1]),
            Err(SequenceError::NotSuitable(_))
        ));
    }

    /// Filters every length-(p-1) tuple over the residues through
    /// `is_suitable`, with no other structure presupposed.
    fn brute_force(p: u16) -> Vec<Vec<u16>> {
        let len = (p - 1) as usize;
        let mut out = Vec::new();
        let total = (p as u64).pow(len as u32);
        for mut code in 0..total {
            let mut xs = vec![0u16; len];
            for slot in xs.iter_mut() {
                *slot = (code % p as u64) as u16;
                code /= p as u64;
            }
            if is_suitable(p, &xs).is_ok() {
                out.push(xs);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_brute_force_for_small_primes() {
        for p in [3u16, 5, 7] {
            assert_eq!(enumerate_suitable(p).unwrap(), brute_force(p), "p = {p}");
        }
    }

    #[test]
    fn enumeration_matches_injective_scan_at_11() {
        // Independent generation: all injective fillings of positions
        // 2..=10 from the residues left over after x_1 = 0, filtered only
        // through is_suitable.
        let p = 11u16;
        let mut xs = vec![0u16; 10];
        let mut used = vec![false; 11];
        used[0] = true;
        let mut found = Vec::new();
        fn fill(
            p: u16,
            pos: usize,
            xs: &mut Vec<u16>,
            used: &mut Vec<bool>,
            found: &mut Vec<Vec<u16>>,
        ) {
            if pos == xs.len() {
                if is_suitable(p, xs).is_ok() {
                    found.push(xs.clone());
                }
                return;
            }
            for v in 0..p {
                if !used[v as usize] {
                    used[v as usize] = true;
                    xs[pos] = v;
                    fill(p, pos + 1, xs, used, found);
                    used[v as usize] = false;
                }
            }
        }
        fill(p, 1, &mut xs, &mut used, &mut found);
        found.sort();
        assert_eq!(enumerate_suitable(p).unwrap(), found);
    }

    #[test]
    fn known_sequence_lists() {
        assert_eq!(enumerate_suitable(3).unwrap(), vec![vec![0, 1]]);
        assert_eq!(enumerate_suitable(5).unwrap(), vec![vec![0, 2, 4, 1]]);
        assert_eq!(
            enumerate_suitable(7).unwrap(),
            vec![
                vec![0, 2, 3, 6, 4, 1],
                vec![0, 3, 6, 2, 5, 1],
                vec![0, 4, 2, 5, 6, 1],
            ]
        );
        let eleven = enumerate_suitable(11).unwrap();
        assert!(eleven.contains(&vec![0, 6, 10, 3, 4, 9, 7, 2, 8, 1]));
        assert!(eleven.contains(&vec![0, 4, 10, 5, 3, 8, 9, 2, 6, 1]));
        assert!(eleven.contains(&canonical_sequence(11).unwrap()));
    }

    #[test]
    fn enumeration_is_capped() {
        assert_eq!(
            enumerate_suitable(17).unwrap_err(),
            SequenceError::CapExceeded { prime: 17, max: 13 }
        );
        // still works at the cap itself
        let thirteen = enumerate_suitable(13).unwrap();
        assert!(thirteen.contains(&canonical_sequence(13).unwrap()));
        for xs in &thirteen {
            is_suitable(13, xs).unwrap();
        }
    }

    #[test]
    fn mod4_3_known_values() {
        assert_eq!(mod4_3_sequence(7).unwrap(), vec![0, 4, 2, 5, 6, 1]);
        assert_eq!(
            mod4_3_sequence(11).unwrap(),
            vec![0, 6, 10, 3, 4, 9, 7, 2, 8, 1]
        );
        for p in [7u16, 11, 19] {
            let xs = mod4_3_sequence(p).unwrap();
            is_suitable(p, &xs).unwrap();
            assert_eq!(xs[1], (p + 1) / 2);
        }
    }

    #[test]
    fn mod4_3_edge_cases() {
        assert_eq!(
            mod4_3_sequence(3).unwrap_err(),
            SequenceError::NoSequence { prime: 3 }
        );
        assert_eq!(
            mod4_3_sequence(5).unwrap_err(),
            SequenceError::WrongResidue { prime: 5 }
        );
        assert_eq!(
            mod4_3_sequence(13).unwrap_err(),
            SequenceError::WrongResidue { prime: 13 }
        );
        // The odd-k rearrangement pattern collides from k = 5 on; the
        // validation pass reports it instead of returning a broken sequence.
        assert!(matches!(
            mod4_3_sequence(23).unwrap_err(),
            SequenceError::NotSuitable(_)
        ));
    }

    #[test]
    fn mod4_3_second_entries_differ_from_canonical() {
        // The point of the construction: a suitable sequence with
        // x_2 = (p+1)/2, which the canonical one never has (its x_2 is
        // (p-1)/2).
        for p in [7u16, 11] {
            assert_eq!(canonical_sequence(p).unwrap()[1], (p - 1) / 2);
            assert_eq!(mod4_3_sequence(p).unwrap()[1], (p + 1) / 2);
        }
    }

    mod rings {
        use super::super::*;
        use crate::pgroup::Family;

        fn group(family: Family, p: u16) -> Arc<Group> {
            Arc::new(Group::new(family, p).unwrap())
        }

        #[test]
        fn builder_rejects_unsuitable_sequences() {
            let g = group(Family::H1, 5);
            assert!(matches!(
                sring_from_sequence(&g, &[0, 3, 4, 1]),
                Err(BuildError::Sequence(_))
            ));
            // sequence for the wrong prime
            assert!(matches!(
                sring_from_sequence(&g, &[0, 1]),
                Err(BuildError::Sequence(_))
            ));
        }

        #[test]
        fn class_shape_for_both_families() {
            for family in [Family::H1, Family::H2] {
                for p in [3u16, 5, 7] {
                    let g = group(family, p);
                    let xs = canonical_sequence(p).unwrap();
                    let sr = sring_from_sequence(&g, &xs).unwrap();
                    let n = p as usize;
                    assert_eq!(sr.num_classes(), n * n + n * (n - 1));
                    let singletons = sr.classes().iter().filter(|c| c.len() == 1).count();
                    assert_eq!(singletons, n * n);
                    assert!(sr
                        .classes()
                        .iter()
                        .all(|c| c.len() == 1 || c.len() == n));
                    assert!(sr.is_p_sring());
                    assert!(!sr.is_commutative());
                }
            }
        }

        #[test]
        fn thin_radical_and_residue_are_the_singleton_subgroup() {
            for family in [Family::H1, Family::H2] {
                let p = 5u16;
                let g = group(family, p);
                let xs = canonical_sequence(p).unwrap();
                let sr = sring_from_sequence(&g, &xs).unwrap();
                let expected = match family {
                    Family::H1 => g.generate(&[g.central_shift(), g.gen_b()]).unwrap(),
                    Family::H2 => g.generate(&[g.gen_b(), g.gen_c().unwrap()]).unwrap(),
                };
                assert_eq!(expected.len(), 25);
                assert_eq!(sr.thin_radical(), expected);
                assert_eq!(sr.thin_residue(), expected);
            }
        }

        #[test]
        fn conditions_ab_hold_with_block_structure() {
            for family in [Family::H1, Family::H2] {
                for p in [3u16, 5, 7] {
                    let g = group(family, p);
                    for xs in enumerate_suitable(p).unwrap() {
                        let sr = sring_from_sequence(&g, &xs).unwrap();
                        let report = sr.conditions_ab();
                        assert!(report.holds_a);
                        assert!(report.holds_b);
                        assert!(report.stabilizer_avoids_center);
                        assert!(report.block_structure);
                        assert_eq!(report.distinct_stabilizers.len(), (p - 1) as usize);
                        assert_eq!(
                            report.outer_stabilizers.len(),
                            (p * (p - 1)) as usize
                        );
                    }
                }
            }
        }

        #[test]
        fn outer_stabilizers_are_generated_by_sequence_elements() {
            // The right stabilizer of the class of a^i is <b * z^{x_i}>
            // where z is the central shift.
            for family in [Family::H1, Family::H2] {
                let p = 7u16;
                let g = group(family, p);
                let xs = canonical_sequence(p).unwrap();
                let sr = sring_from_sequence(&g, &xs).unwrap();
                for i in 1..p as u32 {
                    let rep = match family {
                        Family::H1 => g.h1_elem(i, 0),
                        Family::H2 => g.h2_elem(i, 0, 0),
                    };
                    let xi = xs[(i - 1) as usize] as u32;
                    let ti = g.mul(g.gen_b(), g.pow(g.central_shift(), xi));
                    let expected = g.generate(&[ti]).unwrap();
                    assert_eq!(sr.right_stabilizer(sr.class_of(rep)), expected);
                }
            }
        }

        #[test]
        fn restriction_to_the_radical_is_all_singletons() {
            let g = group(Family::H2, 5);
            let xs = canonical_sequence(5).unwrap();
            let sr = sring_from_sequence(&g, &xs).unwrap();
            let l = sr.thin_radical();
            let r = sr.restriction(&l).unwrap();
            assert_eq!(r.classes.len(), 25);
            assert!(r.classes.iter().all(|c| c.len() == 1));
        }

        #[test]
        fn a_subgroup_lattice_at_7() {
            // {e}, the 8 subgroups of order 7 inside L, L itself, and the
            // whole group: 11 in total, containing a full chain of index-p
            // steps.
            let g = group(Family::H1, 7);
            let xs = canonical_sequence(7).unwrap();
            let sr = sring_from_sequence(&g, &xs).unwrap();
            let subs = sr.a_subgroups();
            assert_eq!(subs.len(), 11);
            let sizes: Vec<usize> = subs.iter().map(|s| s.len()).collect();
            assert_eq!(sizes, vec![1, 7, 7, 7, 7, 7, 7, 7, 7, 49, 343]);
            let chain: Vec<Vec<Elem>> = vec![
                vec![g.identity()],
                g.generate(&[g.central_shift()]).unwrap(),
                g.generate(&[g.central_shift(), g.gen_b()]).unwrap(),
                (0..g.order() as Elem).collect(),
            ];
            for link in &chain {
                assert!(subs.contains(link));
            }
        }

        #[test]
        fn different_sequences_give_different_rings() {
            let g = group(Family::H1, 7);
            let seqs = enumerate_suitable(7).unwrap();
            let texts: Vec<String> = seqs
                .iter()
                .map(|xs| sring_from_sequence(&g, xs).unwrap().to_text())
                .collect();
            assert_eq!(texts.len(), 3);
            assert!(texts[0] != texts[1] && texts[1] != texts[2] && texts[0] != texts[2]);
        }

        #[test]
        fn text_round_trip_preserves_the_ring() {
            for family in [Family::H1, Family::H2] {
                let g = group(family, 5);
                let xs = canonical_sequence(5).unwrap();
                let sr = sring_from_sequence(&g, &xs).unwrap();
                let again = SRing::from_text(&sr.to_text()).unwrap();
                assert_eq!(again.classes(), sr.classes());
            }
        }
    }
}

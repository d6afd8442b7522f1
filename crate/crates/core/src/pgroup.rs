//! The two non-abelian groups of order p^3 (p an odd prime), built as exact
//! multiplication tables over normal forms.
//!
//! * `h1`: `<a, b | a^(p^2) = b^p = 1, ab = b a^(p+1)>` — elements are
//!   `a^i b^j` with `i mod p^2`, `j mod p`.
//! * `h2`: `<a, b, c | a^p = b^p = c^p = 1, [a,b] = c central>` — elements are
//!   `a^i b^j c^k` with all exponents mod p.
//!
//! Multiplication is computed from the collected normal-form laws
//!
//! ```text
//! h1:  (a^i1 b^j1)(a^i2 b^j2)       = a^(i1 + i2(1-p)^j1 mod p^2) b^(j1+j2 mod p)
//! h2:  (a^i1 b^j1 c^k1)(a^i2 b^j2 c^k2) = a^(i1+i2) b^(j1+j2) c^(k1+k2-j1*i2)   (mod p)
//! ```
//!
//! and every table is verified at construction: presentation relations,
//! two-sided identity, inverses, and associativity (exhaustive for p <= 7,
//! deterministic sampling above). The unit tests additionally compare whole
//! tables against independent faithful realizations (affine maps on Z_{p^2}
//! for `h1`, unitriangular 3x3 matrices over F_p for `h2`), so the collected
//! laws never have to be taken on faith.

use thiserror::Error;

/// Index of a group element in its group's fixed enumeration.
///
/// Orders are at most 13^3 = 2197, so `u16` is always enough.
pub type Elem = u16;

/// Largest supported prime. Everything in this crate is designed for small
/// exact computations; beyond this the tables and searches stop being small.
pub const MAX_PRIME: u16 = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `<a, b | a^(p^2) = b^p = 1, ab = b a^(p+1)>`
    H1,
    /// `<a, b, c | a^p = b^p = c^p = 1, [a,b] = c, c central>`
    H2,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::H1 => "h1",
            Family::H2 => "h2",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "h1" => Some(Family::H1),
            "h2" => Some(Family::H2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub prime: u16,
}

impl GroupSpec {
    /// Validates that `prime` is an odd prime within the supported range.
    pub fn new(family: Family, prime: u16) -> Result<GroupSpec, GroupError> {
        if prime < 3 || !is_prime(prime) {
            return Err(GroupError::InvalidPrime(prime as u64));
        }
        if prime > MAX_PRIME {
            return Err(GroupError::UnsupportedPrime(prime as u64));
        }
        Ok(GroupSpec { family, prime })
    }

    /// Header line used by all text formats, e.g. `group=h1 p=7`.
    pub fn header(&self) -> String {
        format!("group={} p={}", self.family.as_str(), self.prime)
    }

    /// Parses a header line of the form `group=h1 p=7`.
    pub fn parse_header(line: &str) -> Result<GroupSpec, ParseError> {
        let mut family = None;
        let mut prime = None;
        for field in line.split_whitespace() {
            if let Some(v) = field.strip_prefix("group=") {
                family = Some(
                    Family::parse(v).ok_or_else(|| ParseError::BadHeader(line.to_string()))?,
                );
            } else if let Some(v) = field.strip_prefix("p=") {
                prime = Some(
                    v.parse::<u16>()
                        .map_err(|_| ParseError::BadHeader(line.to_string()))?,
                );
            } else {
                return Err(ParseError::BadHeader(line.to_string()));
            }
        }
        match (family, prime) {
            (Some(f), Some(p)) => {
                GroupSpec::new(f, p).map_err(|e| ParseError::BadHeader(format!("{line}: {e}")))
            }
            _ => Err(ParseError::BadHeader(line.to_string())),
        }
    }
}

fn is_prime(n: u16) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n as u32 {
        if n as u32 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("p = {0} exceeds the supported bound {MAX_PRIME}")]
    UnsupportedPrime(u64),
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("the given element set is not a subgroup")]
    NotASubgroup,
    #[error("group table self-check failed: {0}")]
    ConstructionCheck(String),
}

/// Errors from the plain-text element / header syntax.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("bad header line: {0:?} (expected e.g. \"group=h1 p=7\")")]
    BadHeader(String),
    #[error("bad element {0:?}: {1}")]
    BadElement(String, String),
}

/// A group of order p^3 with full multiplication and inverse tables.
///
/// Elements are indices into a fixed enumeration: for `h1` the element
/// `a^i b^j` has index `i*p + j` (so index 0 is the identity); for `h2` the
/// element `a^i b^j c^k` has index `i*p^2 + j*p + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    spec: GroupSpec,
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
}

impl Group {
    /// Builds the group table for `spec` and verifies it (relations,
    /// identity, inverses, associativity) before returning it.
    pub fn build(spec: GroupSpec) -> Result<Group, GroupError> {
        let p = spec.prime as usize;
        let order = p * p * p;
        let mut g = Group {
            spec,
            order,
            mul: vec![0; order * order],
            inv: vec![0; order],
        };
        match spec.family {
            Family::H1 => g.fill_h1(),
            Family::H2 => g.fill_h2(),
        }
        g.verify_table()?;
        Ok(g)
    }

    /// Convenience wrapper: validates the prime and builds the table.
    pub fn new(family: Family, prime: u16) -> Result<Group, GroupError> {
        Group::build(GroupSpec::new(family, prime)?)
    }

    fn fill_h1(&mut self) {
        let p = self.prime() as u64;
        let p2 = p * p;
        // (1-p)^j mod p^2 for j in 0..p; (1-p) is the inverse of (p+1) mod p^2.
        let mut pow_dec = vec![1u64; p as usize];
        let mut pow_inc = vec![1u64; p as usize];
        for j in 1..p as usize {
            pow_dec[j] = pow_dec[j - 1] * (p2 + 1 - p) % p2;
            pow_inc[j] = pow_inc[j - 1] * (p + 1) % p2;
        }
        let n = self.order;
        for x in 0..n {
            let (i1, j1) = (x as u64 / p, x as u64 % p);
            for y in 0..n {
                let (i2, j2) = (y as u64 / p, y as u64 % p);
                let i = (i1 + i2 * pow_dec[j1 as usize]) % p2;
                let j = (j1 + j2) % p;
                self.mul[x * n + y] = (i * p + j) as Elem;
            }
            // (a^i b^j)^-1 = a^(-i (p+1)^j mod p^2) b^(-j mod p)
            let i = (p2 - i1 * pow_inc[j1 as usize] % p2) % p2;
            let j = (p - j1) % p;
            self.inv[x] = (i * p + j) as Elem;
        }
    }

    fn fill_h2(&mut self) {
        let p = self.prime() as u64;
        let n = self.order;
        let dec = |x: u64| (x / (p * p), x / p % p, x % p);
        for x in 0..n {
            let (i1, j1, k1) = dec(x as u64);
            for y in 0..n {
                let (i2, j2, k2) = dec(y as u64);
                let i = (i1 + i2) % p;
                let j = (j1 + j2) % p;
                let k = (k1 + k2 + p * p - j1 * i2) % p;
                self.mul[x * n + y] = ((i * p + j) * p + k) as Elem;
            }
            // (a^i b^j c^k)^-1 = a^-i b^-j c^(-k - ij)
            let i = (p - i1) % p;
            let j = (p - j1) % p;
            let k = (p * p - k1 - i1 * j1 % p) % p;
            self.inv[x] = ((i * p + j) * p + k) as Elem;
        }
    }

    /// Table self-check run once at construction.
    fn verify_table(&self) -> Result<(), GroupError> {
        let n = self.order;
        let e = self.identity();
        for x in 0..n as Elem {
            if self.mul(e, x) != x || self.mul(x, e) != x {
                return Err(GroupError::ConstructionCheck(format!(
                    "identity fails at element {x}"
                )));
            }
            if self.mul(x, self.inv(x)) != e || self.mul(self.inv(x), x) != e {
                return Err(GroupError::ConstructionCheck(format!(
                    "inverse fails at element {x}"
                )));
            }
        }
        self.verify_relations()?;
        // Associativity: exhaustive where affordable, deterministic Weyl-style
        // sampling of a million triples above that.
        let check = |x: Elem, y: Elem, z: Elem| -> Result<(), GroupError> {
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                return Err(GroupError::ConstructionCheck(format!(
                    "associativity fails at ({x}, {y}, {z})"
                )));
            }
            Ok(())
        };
        if self.prime() <= 7 {
            for x in 0..n as Elem {
                for y in 0..n as Elem {
                    for z in 0..n as Elem {
                        check(x, y, z)?;
                    }
                }
            }
        } else {
            let n64 = n as u64;
            for t in 0u64..1_000_000 {
                let x = (t.wrapping_mul(2654435761) % n64) as Elem;
                let y = ((t.wrapping_mul(40503) + 11) % n64) as Elem;
                let z = ((t.wrapping_mul(2246822519) + 13) % n64) as Elem;
                check(x, y, z)?;
            }
        }
        Ok(())
    }

    fn verify_relations(&self) -> Result<(), GroupError> {
        let p = self.prime() as u32;
        let e = self.identity();
        let a = self.gen_a();
        let b = self.gen_b();
        let rel = |name: &str, ok: bool| -> Result<(), GroupError> {
            if ok {
                Ok(())
            } else {
                Err(GroupError::ConstructionCheck(format!(
                    "presentation relation {name} fails"
                )))
            }
        };
        match self.family() {
            Family::H1 => {
                rel("a^(p^2) = 1", self.pow(a, p * p) == e)?;
                rel("b^p = 1", self.pow(b, p) == e)?;
                // ab = b a^(p+1)
                let lhs = self.mul(a, b);
                let rhs = self.mul(b, self.pow(a, p + 1));
                rel("ab = b a^(p+1)", lhs == rhs)?;
            }
            Family::H2 => {
                let c = self.gen_c().expect("h2 has generator c");
                rel("a^p = 1", self.pow(a, p) == e)?;
                rel("b^p = 1", self.pow(b, p) == e)?;
                rel("c^p = 1", self.pow(c, p) == e)?;
                // [a,b] = a^-1 b^-1 a b = c
                let comm = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                rel("[a,b] = c", comm == c)?;
                rel("ac = ca", self.mul(a, c) == self.mul(c, a))?;
                rel("bc = cb", self.mul(b, c) == self.mul(c, b))?;
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn prime(&self) -> u16 {
        self.spec.prime
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        self.inv[x as usize]
    }

    pub fn pow(&self, x: Elem, mut k: u32) -> Elem {
        let mut acc = self.identity();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: Elem) -> u32 {
        let mut k = 1;
        let mut y = x;
        while y != self.identity() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// The generator `a`.
    pub fn gen_a(&self) -> Elem {
        let p = self.prime() as usize;
        match self.family() {
            Family::H1 => p as Elem,      // (i, j) = (1, 0)
            Family::H2 => (p * p) as Elem, // (1, 0, 0)
        }
    }

    /// The generator `b`.
    pub fn gen_b(&self) -> Elem {
        match self.family() {
            Family::H1 => 1,               // (0, 1)
            Family::H2 => self.prime(),    // (0, 1, 0)
        }
    }

    /// The generator `c` (only `h2` has one).
    pub fn gen_c(&self) -> Option<Elem> {
        match self.family() {
            Family::H1 => None,
            Family::H2 => Some(1), // (0, 0, 1)
        }
    }

    /// The central element used for class shifts: `a^p` in `h1`, `c` in `h2`.
    pub fn central_shift(&self) -> Elem {
        match self.family() {
            Family::H1 => self.pow(self.gen_a(), self.prime() as u32),
            Family::H2 => self.gen_c().unwrap(),
        }
    }

    /// `h1` element `a^i b^j` (exponents reduced mod p^2 / mod p).
    pub fn h1_elem(&self, i: u32, j: u32) -> Elem {
        assert_eq!(self.family(), Family::H1);
        let p = self.prime() as u32;
        ((i % (p * p)) * p + j % p) as Elem
    }

    /// `h2` element `a^i b^j c^k` (exponents reduced mod p).
    pub fn h2_elem(&self, i: u32, j: u32, k: u32) -> Elem {
        assert_eq!(self.family(), Family::H2);
        let p = self.prime() as u32;
        ((i % p * p + j % p) * p + k % p) as Elem
    }

    /// Normal-form exponents of `x`: `(i, j)` for `h1`, `(i, j, k)` for `h2`
    /// (with `k = 0` for `h1`).
    pub fn exponents(&self, x: Elem) -> (u32, u32, u32) {
        let p = self.prime() as u32;
        match self.family() {
            Family::H1 => (x as u32 / p, x as u32 % p, 0),
            Family::H2 => (x as u32 / (p * p), x as u32 / p % p, x as u32 % p),
        }
    }

    /// Builds the self-map determined by generator images: the element with
    /// exponents `(i, j, k)` goes to `ia^i * ib^j * ic^k`. The result is not
    /// checked; pair with [`Group::check_automorphism`].
    pub fn map_from_generator_images(&self, ia: Elem, ib: Elem, ic: Option<Elem>) -> Vec<Elem> {
        (0..self.order as Elem)
            .map(|x| {
                let (i, j, k) = self.exponents(x);
                let mut y = self.pow(ia, i);
                y = self.mul(y, self.pow(ib, j));
                if k != 0 {
                    y = self.mul(y, self.pow(ic.expect("c image required"), k));
                }
                y
            })
            .collect()
    }

    /// Checks that `map` is a bijective homomorphism. On failure returns a
    /// witness: `(x, y)` with `map[x*y] != map[x]*map[y]`, or two distinct
    /// elements with equal images.
    pub fn check_automorphism(&self, map: &[Elem]) -> Result<(), (Elem, Elem)> {
        let n = self.order;
        let mut hit = vec![Elem::MAX; n];
        for (x, &img) in map.iter().enumerate() {
            if hit[img as usize] != Elem::MAX {
                return Err((hit[img as usize], x as Elem));
            }
            hit[img as usize] = x as Elem;
        }
        for x in 0..n as Elem {
            for y in 0..n as Elem {
                if map[self.mul(x, y) as usize] != self.mul(map[x as usize], map[y as usize]) {
                    return Err((x, y));
                }
            }
        }
        Ok(())
    }

    /// The center, sorted by element index.
    pub fn center(&self) -> Vec<Elem> {
        (0..self.order as Elem)
            .filter(|&z| (0..self.order as Elem).all(|h| self.mul(z, h) == self.mul(h, z)))
            .collect()
    }

    /// Subgroup generated by `gens` (sorted by element index).
    pub fn generate(&self, gens: &[Elem]) -> Result<Vec<Elem>, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::EmptyGenerators);
        }
        let mut in_set = vec![false; self.order];
        in_set[self.identity() as usize] = true;
        let mut frontier: Vec<Elem> = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !in_set[y as usize] {
                    in_set[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
        Ok((0..self.order as Elem).filter(|&x| in_set[x as usize]).collect())
    }

    /// Checks that a sorted element list is a subgroup.
    pub fn is_subgroup(&self, set: &[Elem]) -> bool {
        if set.binary_search(&self.identity()).is_err() {
            return false;
        }
        set.iter().all(|&x| {
            set.iter()
                .all(|&y| set.binary_search(&self.mul(x, y)).is_ok())
        })
    }

    /// Left (`h * sub`) or right (`sub * h`) coset, sorted by element index.
    pub fn coset(&self, sub: &[Elem], h: Elem, side: Side) -> Result<Vec<Elem>, GroupError> {
        if !self.is_subgroup(sub) {
            return Err(GroupError::NotASubgroup);
        }
        let mut out: Vec<Elem> = sub
            .iter()
            .map(|&s| match side {
                Side::Left => self.mul(h, s),
                Side::Right => self.mul(s, h),
            })
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Renders an element in the canonical text syntax: `e` for the identity,
    /// otherwise nonzero-exponent factors `a^i`, `b^j`, `c^k` joined by `*`.
    pub fn format_elem(&self, x: Elem) -> String {
        let (i, j, k) = self.exponents(x);
        let mut parts = Vec::new();
        if i != 0 {
            parts.push(format!("a^{i}"));
        }
        if j != 0 {
            parts.push(format!("b^{j}"));
        }
        if k != 0 {
            parts.push(format!("c^{k}"));
        }
        if parts.is_empty() {
            "e".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Parses the canonical element syntax. Exponents must lie in their
    /// canonical ranges and factors must appear in `a`, `b`, `c` order.
    pub fn parse_elem(&self, s: &str) -> Result<Elem, ParseError> {
        let s = s.trim();
        if s == "e" {
            return Ok(self.identity());
        }
        let bad = |msg: &str| ParseError::BadElement(s.to_string(), msg.to_string());
        let p = self.prime() as u32;
        let mut exps = [0u32; 3];
        let mut last = None;
        for factor in s.split('*') {
            let (name, exp) = factor
                .split_once('^')
                .ok_or_else(|| bad("factor is not of the form a^i"))?;
            let slot = match name {
                "a" => 0usize,
                "b" => 1,
                "c" if self.family() == Family::H2 => 2,
                _ => return Err(bad("unknown generator")),
            };
            if last.is_some_and(|l| l >= slot) {
                return Err(bad("factors out of order or repeated"));
            }
            last = Some(slot);
            let v: u32 = exp.parse().map_err(|_| bad("exponent is not a number"))?;
            let range = if slot == 0 && self.family() == Family::H1 {
                p * p
            } else {
                p
            };
            if v == 0 || v >= range {
                return Err(bad("exponent outside canonical range"));
            }
            exps[slot] = v;
        }
        Ok(match self.family() {
            Family::H1 => self.h1_elem(exps[0], exps[1]),
            Family::H2 => self.h2_elem(exps[0], exps[1], exps[2]),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1(p: u16) -> Group {
        Group::new(Family::H1, p).unwrap()
    }

    fn h2(p: u16) -> Group {
        Group::new(Family::H2, p).unwrap()
    }

    // --- independent realizations -------------------------------------------
    //
    // h1 acts faithfully on Z_{p^2} by a: x -> x+1 and b: x -> (p+1)x (as
    // right actions), and h2 is the group of upper unitriangular 3x3 matrices
    // over F_p with a, b, c mapped to the three elementary matrices. Both
    // realizations are built purely from generator words, so comparing whole
    // multiplication tables against them checks the collected normal-form
    // laws from a second, independent direction.

    fn h1_gen_perms(p: u64) -> (Vec<u16>, Vec<u16>) {
        let m = p * p;
        let a: Vec<u16> = (0..m).map(|x| ((x + 1) % m) as u16).collect();
        let b: Vec<u16> = (0..m).map(|x| ((p + 1) * x % m) as u16).collect();
        (a, b)
    }

    fn compose(f: &[u16], g: &[u16]) -> Vec<u16> {
        // right action: x^(fg) = (x^f)^g
        f.iter().map(|&y| g[y as usize]).collect()
    }

    fn h1_realize(g: &Group) -> Vec<Vec<u16>> {
        let p = g.prime() as u64;
        let (a, b) = h1_gen_perms(p);
        let id: Vec<u16> = (0..p * p).map(|x| x as u16).collect();
        (0..g.order() as Elem)
            .map(|x| {
                let (i, j, _) = g.exponents(x);
                let mut perm = id.clone();
                for _ in 0..i {
                    perm = compose(&perm, &a);
                }
                for _ in 0..j {
                    perm = compose(&perm, &b);
                }
                perm
            })
            .collect()
    }

    type Mat = [[u32; 3]; 3];

    fn mat_mul(p: u32, x: &Mat, y: &Mat) -> Mat {
        let mut out = [[0u32; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] = (0..3).map(|t| x[r][t] * y[t][c]).sum::<u32>() % p;
            }
        }
        out
    }

    fn h2_realize(g: &Group) -> Vec<Mat> {
        let p = g.prime() as u32;
        let id: Mat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let a: Mat = [[1, 1, 0], [0, 1, 0], [0, 0, 1]];
        let b: Mat = [[1, 0, 0], [0, 1, 1], [0, 0, 1]];
        let c: Mat = [[1, 0, 1], [0, 1, 0], [0, 0, 1]];
        (0..g.order() as Elem)
            .map(|x| {
                let (i, j, k) = g.exponents(x);
                let mut m = id;
                for _ in 0..i {
                    m = mat_mul(p, &m, &a);
                }
                for _ in 0..j {
                    m = mat_mul(p, &m, &b);
                }
                for _ in 0..k {
                    m = mat_mul(p, &m, &c);
                }
                m
            })
            .collect()
    }

    #[test]
    fn h1_table_matches_affine_realization() {
        for p in [3u16, 5, 7] {
            let g = h1(p);
            let perms = h1_realize(&g);
            // faithful: distinct elements get distinct permutations
            let mut seen = perms.clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), g.order());
            for x in 0..g.order() as Elem {
                for y in 0..g.order() as Elem {
                    let prod = compose(&perms[x as usize], &perms[y as usize]);
                    assert_eq!(prod, perms[g.mul(x, y) as usize], "p={p} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn h2_table_matches_matrix_realization() {
        for p in [3u16, 5, 7, 11] {
            let g = h2(p);
            let mats = h2_realize(&g);
            let mut seen = mats.clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), g.order());
            for x in 0..g.order() as Elem {
                for y in 0..g.order() as Elem {
                    let prod = mat_mul(p as u32, &mats[x as usize], &mats[y as usize]);
                    assert_eq!(prod, mats[g.mul(x, y) as usize], "p={p} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn h1_sampled_against_affine_realization_at_11() {
        let g = h1(11);
        let perms = h1_realize(&g);
        let n = g.order() as u64;
        for t in 0u64..100_000 {
            let x = (t.wrapping_mul(2654435761) % n) as Elem;
            let y = (t.wrapping_mul(40503).wrapping_add(17) % n) as Elem;
            let prod = compose(&perms[x as usize], &perms[y as usize]);
            assert_eq!(prod, perms[g.mul(x, y) as usize]);
        }
    }

    // --- basic structure ----------------------------------------------------

    #[test]
    fn rejects_bad_primes() {
        assert_eq!(
            GroupSpec::new(Family::H1, 2).unwrap_err(),
            GroupError::InvalidPrime(2)
        );
        assert_eq!(
            GroupSpec::new(Family::H2, 9).unwrap_err(),
            GroupError::InvalidPrime(9)
        );
        assert_eq!(
            GroupSpec::new(Family::H1, 17).unwrap_err(),
            GroupError::UnsupportedPrime(17)
        );
    }

    #[test]
    fn h1_commutation_example() {
        // In h1(3): b * a = a^7 b, i.e. pushing a past b raises it to p+1.
        let g = h1(3);
        let ba = g.mul(g.gen_b(), g.gen_a());
        assert_eq!(ba, g.h1_elem(7, 1));
        assert_eq!(g.format_elem(ba), "a^7*b^1");
    }

    #[test]
    fn h2_commutation_example() {
        // In h2(5): b * a = a b c^-1 = a^1 b^1 c^4.
        let g = h2(5);
        let ba = g.mul(g.gen_b(), g.gen_a());
        assert_eq!(ba, g.h2_elem(1, 1, 4));
        assert_eq!(g.format_elem(ba), "a^1*b^1*c^4");
    }

    #[test]
    fn centers() {
        let g = h1(3);
        let a = g.gen_a();
        let mut want = vec![g.identity(), g.pow(a, 3), g.pow(a, 6)];
        want.sort_unstable();
        assert_eq!(g.center(), want);

        let g = h2(3);
        let c = g.gen_c().unwrap();
        let mut want = vec![g.identity(), c, g.mul(c, c)];
        want.sort_unstable();
        assert_eq!(g.center(), want);

        assert_eq!(h1(7).center().len(), 7);
        assert_eq!(h2(7).center().len(), 7);
    }

    #[test]
    fn element_orders() {
        let g = h1(5);
        assert_eq!(g.element_order(g.gen_a()), 25);
        assert_eq!(g.element_order(g.gen_b()), 5);
        let g = h2(5);
        for x in 1..g.order() as Elem {
            assert_eq!(g.element_order(x), 5);
        }
    }

    #[test]
    fn generated_subgroups() {
        let g = h1(7);
        let a = g.gen_a();
        let b = g.gen_b();
        let l = g.generate(&[g.pow(a, 7), b]).unwrap();
        assert_eq!(l.len(), 49);
        // elementary abelian: all non-identity elements of order 7, commuting
        for &x in &l {
            for &y in &l {
                assert_eq!(g.mul(x, y), g.mul(y, x));
            }
            if x != g.identity() {
                assert_eq!(g.element_order(x), 7);
            }
        }

        let g3 = h1(3);
        assert_eq!(g3.generate(&[g3.gen_a()]).unwrap().len(), 9);
        assert_eq!(
            g3.generate(&[]).unwrap_err(),
            GroupError::EmptyGenerators
        );
    }

    #[test]
    fn cosets() {
        let g = h1(3);
        let z = g.generate(&[g.pow(g.gen_a(), 3)]).unwrap();
        let left = g.coset(&z, g.gen_b(), Side::Left).unwrap();
        let mut want: Vec<Elem> = z.iter().map(|&s| g.mul(g.gen_b(), s)).collect();
        want.sort_unstable();
        assert_eq!(left, want);
        // z is central, so both cosets agree
        assert_eq!(left, g.coset(&z, g.gen_b(), Side::Right).unwrap());
        // a non-subgroup is rejected
        let bad = vec![g.identity(), g.gen_a()];
        assert_eq!(
            g.coset(&bad, g.gen_b(), Side::Left).unwrap_err(),
            GroupError::NotASubgroup
        );
    }

    #[test]
    fn subgroup_predicate() {
        let g = h2(3);
        let sub = g.generate(&[g.gen_b(), g.gen_c().unwrap()]).unwrap();
        assert!(g.is_subgroup(&sub));
        assert!(!g.is_subgroup(&[g.gen_b()]));
        assert!(!g.is_subgroup(&[g.identity(), g.gen_b()]));
    }

    // --- text syntax --------------------------------------------------------

    #[test]
    fn element_text_round_trip() {
        for g in [h1(5), h2(5)] {
            for x in 0..g.order() as Elem {
                let s = g.format_elem(x);
                assert_eq!(g.parse_elem(&s).unwrap(), x, "{s}");
            }
        }
    }

    #[test]
    fn element_text_examples() {
        let g = h1(7);
        assert_eq!(g.format_elem(g.identity()), "e");
        assert_eq!(g.parse_elem("a^3*b^2").unwrap(), g.h1_elem(3, 2));
        assert!(g.parse_elem("a^0*b^1").is_err()); // zero exponent spelled out
        assert!(g.parse_elem("b^1*a^3").is_err()); // out of order
        assert!(g.parse_elem("a^49").is_err()); // exponent out of range
        assert!(g.parse_elem("c^1").is_err()); // no c in h1
        assert!(g.parse_elem("a").is_err()); // missing ^exp
        let g = h2(3);
        assert_eq!(g.parse_elem("a^1*b^2*c^1").unwrap(), g.h2_elem(1, 2, 1));
        assert!(g.parse_elem("c^3").is_err());
    }

    #[test]
    fn header_round_trip() {
        let spec = GroupSpec::new(Family::H2, 11).unwrap();
        assert_eq!(spec.header(), "group=h2 p=11");
        assert_eq!(GroupSpec::parse_header("group=h2 p=11").unwrap(), spec);
        assert!(GroupSpec::parse_header("group=h3 p=11").is_err());
        assert!(GroupSpec::parse_header("group=h1").is_err());
        assert!(GroupSpec::parse_header("group=h1 p=4").is_err());
    }

    #[test]
    fn central_shift_element() {
        let g = h1(7);
        assert_eq!(g.central_shift(), g.h1_elem(7, 0));
        assert_eq!(g.element_order(g.central_shift()), 7);
        let g = h2(7);
        assert_eq!(g.central_shift(), g.gen_c().unwrap());
    }
}

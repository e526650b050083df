//! Cusp equivalence, enumeration of inequivalent representatives, and widths
//! for `Gamma_0(m)`, `Gamma_1(N)` and `Gamma_1(N) ∩ Gamma_0(mN)`.
//!
//! Everything is parameterized by the pair `(N, m)`: `Gamma_0(m)` is the case
//! `N = 1` and `Gamma_1(N)` the case `m = 1`. Equivalence is decided by a
//! finite search over the subgroup `Delta = {±(1 + Nk)} ⊆ (Z/mNZ)^x`; two
//! cusps `a/c` and `a'/c'` are equivalent exactly when some `s ∈ Delta` has
//! `c' ≡ s c (mod mN)` and `a' ≡ s^(-1) a (mod gcd(c, mN))`.
//!
//! Enumeration constructs one representative per class from coset data over
//! the divisors `c | mN` and canonicalizes each to the smallest nonnegative
//! denominator, then smallest nonnegative numerator.

use std::fmt;

use crate::{Error, Result};

/// A cusp `a/c` in lowest terms with `c >= 0`; infinity is `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cusp {
    c: i64,
    a: i64,
}

impl Cusp {
    /// The cusp at infinity `1/0`.
    pub fn infinity() -> Self {
        Cusp { a: 1, c: 0 }
    }

    /// Build `a/c`, reduced to lowest terms with nonnegative denominator.
    pub fn new(a: i64, c: i64) -> Self {
        if c == 0 {
            return Self::infinity();
        }
        let (mut a, mut c) = (a, c);
        if c < 0 {
            a = -a;
            c = -c;
        }
        let g = gcd(a.abs(), c);
        Cusp { a: a / g, c: c / g }
    }

    pub fn numer(&self) -> i64 {
        self.a
    }

    pub fn denom(&self) -> i64 {
        self.c
    }

    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }

    /// A matrix `[a u; c v]` in `SL_2(Z)` sending infinity to this cusp.
    pub fn to_matrix(&self) -> [i64; 4] {
        // a v - c u = 1
        let (_, v, u_neg) = ext_gcd(self.a, self.c);
        [self.a, -u_neg, self.c, v]
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.c)
    }
}

/// Greatest common divisor of nonnegative inputs (gcd(0, 0) = 0).
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns `(g, x, y)` with `a x + b y = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x1, y1) = ext_gcd(b, a.rem_euclid(b));
    (g, y1, x1 - (a.div_euclid(b)) * y1)
}

/// Inverse of `a` modulo `l > 0`, when `gcd(a, l) = 1`.
pub fn mod_inverse(a: i64, l: i64) -> Option<i64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(l), l);
    if g == 1 {
        Some(x.rem_euclid(l))
    } else {
        None
    }
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: i64) -> Vec<i64> {
    let mut divs: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
    divs.sort_unstable();
    divs
}

/// Euler's totient.
pub fn euler_phi(n: i64) -> i64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Which congruence subgroup a [`GroupDesc`] denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Gamma0,
    Gamma1,
    Gamma1CapGamma0,
}

/// Descriptor of `Gamma_0(m)`, `Gamma_1(N)` or `Gamma_1(N) ∩ Gamma_0(mN)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupDesc {
    kind: GroupKind,
    n: i64,
    m: i64,
}

impl GroupDesc {
    /// `Gamma_0(m)`.
    pub fn gamma0(m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        Ok(GroupDesc {
            kind: GroupKind::Gamma0,
            n: 1,
            m,
        })
    }

    /// `Gamma_1(N)`.
    pub fn gamma1(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        Ok(GroupDesc {
            kind: GroupKind::Gamma1,
            n,
            m: 1,
        })
    }

    /// `Gamma_1(N) ∩ Gamma_0(mN)`.
    pub fn mixed(n: i64, m: i64) -> Result<Self> {
        if n < 1 || m < 1 {
            return Err(Error::InvalidArgument(
                "level and cofactor must be positive".into(),
            ));
        }
        Ok(GroupDesc {
            kind: GroupKind::Gamma1CapGamma0,
            n,
            m,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// The `N` of `Gamma_1(N)` (1 for a pure `Gamma_0`).
    pub fn level_n(&self) -> i64 {
        self.n
    }

    /// The `m` with `Gamma_0(mN)` (1 for a pure `Gamma_1`).
    pub fn cofactor_m(&self) -> i64 {
        self.m
    }

    /// Congruence modulus `mN`.
    pub fn modulus(&self) -> i64 {
        self.m * self.n
    }

    /// The subgroup `Delta = {±(1 + Nk) : k = 0..m-1} ∩ (Z/mNZ)^x`.
    pub fn delta(&self) -> Vec<i64> {
        let l = self.modulus();
        let mut out = Vec::new();
        for k in 0..self.m {
            let base = (1 + self.n * k).rem_euclid(l);
            for cand in [base, (l - base).rem_euclid(l)] {
                let cand = if cand == 0 { l } else { cand };
                let cand = cand.rem_euclid(l.max(1));
                let v = if l == 1 { 0 } else { cand };
                if (l == 1 || gcd(v, l) == 1)
                    && !out.contains(&v) {
                        out.push(v);
                    }
            }
        }
        out.sort_unstable();
        out
    }

    /// Membership test for an integer matrix `[a b; c d]` with determinant 1.
    pub fn contains(&self, mat: &[i64; 4]) -> bool {
        let [a, b, c, d] = *mat;
        if a * d - b * c != 1 {
            return false;
        }
        let l = self.modulus();
        match self.kind {
            GroupKind::Gamma0 => c.rem_euclid(l) == 0,
            GroupKind::Gamma1 => {
                c.rem_euclid(self.n) == 0
                    && (a - 1).rem_euclid(self.n) == 0
                    && (d - 1).rem_euclid(self.n) == 0
            }
            GroupKind::Gamma1CapGamma0 => {
                c.rem_euclid(l) == 0
                    && (a - 1).rem_euclid(self.n) == 0
                    && (d - 1).rem_euclid(self.n) == 0
            }
        }
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Gamma0 => write!(f, "Gamma_0({})", self.m),
            GroupKind::Gamma1 => write!(f, "Gamma_1({})", self.n),
            GroupKind::Gamma1CapGamma0 => {
                write!(f, "Gamma_1({}) ∩ Gamma_0({})", self.n, self.modulus())
            }
        }
    }
}

/// Decide whether `x` and `y` are equivalent cusps under `g`.
///
/// For `s ∈ Delta`, the pair is equivalent exactly when `y.c ≡ s x.c (mod mN)`
/// and `y.a ≡ s^(-1) x.a (mod gcd(x.c, mN))`; the search over the translation
/// part is folded into the gcd condition.
pub fn cusp_equivalent(g: &GroupDesc, x: &Cusp, y: &Cusp) -> bool {
    let l = g.modulus();
    if l == 1 {
        return true;
    }
    let gx = gcd(x.c, l);
    for &s in &g.delta() {
        let s_inv = match mod_inverse(s, l) {
            Some(v) => v,
            None => continue,
        };
        let denom_ok = (y.c - s * x.c).rem_euclid(l) == 0;
        let numer_ok = if gx == 0 {
            y.a == s_inv * x.a
        } else {
            (y.a - s_inv * x.a).rem_euclid(gx) == 0
        };
        if denom_ok && numer_ok {
            return true;
        }
    }
    false
}

/// Canonical representative of the class of `x`: smallest nonnegative
/// denominator, then smallest nonnegative numerator.
pub fn canonical_cusp(g: &GroupDesc, x: &Cusp) -> Cusp {
    let l = g.modulus();
    if l == 1 {
        return Cusp::infinity();
    }
    let infinity = Cusp::infinity();
    if cusp_equivalent(g, x, &infinity) {
        return infinity;
    }
    // Candidate denominators are the residues s*c mod mN (with 0 promoted to
    // mN, since the infinity case is already handled).
    let mut denoms: Vec<i64> = g
        .delta()
        .iter()
        .map(|&s| {
            let r = (s * x.c).rem_euclid(l);
            if r == 0 {
                l
            } else {
                r
            }
        })
        .collect();
    denoms.sort_unstable();
    denoms.dedup();
    for c in denoms {
        // Numerators in the class form a residue progression; scan upward.
        let bound = (l + 1) * (l + 1);
        for a in 0..=bound {
            if gcd(a, c) != 1 {
                continue;
            }
            let cand = Cusp { a, c };
            if cusp_equivalent(g, x, &cand) {
                return cand;
            }
        }
    }
    unreachable!("every cusp class contains a small representative");
}

/// Closed-form count of inequivalent cusps.
pub fn cusp_count(g: &GroupDesc) -> i64 {
    let l = g.modulus();
    let delta = g.delta();
    let mut total = 0;
    for c in divisors(l) {
        let x = l / gcd(c, l / c);
        let img = project_set(&delta, x);
        total += euler_phi(c) * euler_phi(l / c) / img.len() as i64;
    }
    total
}

fn project_set(delta: &[i64], x: i64) -> Vec<i64> {
    if x == 1 {
        return vec![0];
    }
    let mut out: Vec<i64> = delta.iter().map(|&s| s.rem_euclid(x)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn units(l: i64) -> Vec<i64> {
    if l == 1 {
        return vec![0];
    }
    (1..=l).filter(|&u| u < l && gcd(u, l) == 1).collect()
}

/// Coset representatives of the subgroup generated by `sub` inside the unit
/// group mod `x` (`sub` must be closed under multiplication mod `x`).
fn coset_reps(sub: &[i64], x: i64) -> Vec<i64> {
    if x == 1 {
        return vec![0];
    }
    let mut covered = vec![false; x as usize];
    let mut reps = Vec::new();
    for u in units(x) {
        if covered[u as usize] {
            continue;
        }
        reps.push(u);
        for &s in sub {
            let v = (u * s).rem_euclid(x);
            covered[v as usize] = true;
        }
    }
    reps
}

/// Enumerate one canonical representative per cusp class of `g`.
///
/// Representatives are derived from coset data over the divisors `c | mN`,
/// canonicalized, checked pairwise inequivalent, and the count is verified
/// against the closed form.
pub fn enumerate_cusps(g: &GroupDesc) -> Vec<Cusp> {
    let l = g.modulus();
    if l == 1 {
        return vec![Cusp::infinity()];
    }
    let delta = g.delta();
    let mut cusps: Vec<Cusp> = Vec::new();
    for c in divisors(l) {
        let lc = l / c;
        // S_c: lift coset representatives of pi_{lc}(Delta) to units mod mN.
        let img = project_set(&delta, lc);
        let s_reps: Vec<i64> = coset_reps(&img, lc)
            .into_iter()
            .map(|rep| lift_to_unit(rep, lc, l))
            .collect();
        // A_c: lift coset representatives of pi_c(Delta ∩ ker pi_{lc}).
        let kernel: Vec<i64> = delta
            .iter()
            .copied()
            .filter(|&d| lc == 1 || d.rem_euclid(lc) == 1)
            .collect();
        let kernel_img = project_set(&kernel, c);
        let a_reps: Vec<i64> = coset_reps(&kernel_img, c)
            .into_iter()
            .map(|rep| lift_to_unit(rep, c, l))
            .collect();
        for &s in &s_reps {
            let x0 = (c * s).rem_euclid(l);
            for &a in &a_reps {
                let cusp = make_coprime_cusp(a, x0, l);
                cusps.push(canonical_cusp(g, &cusp));
            }
        }
    }
    cusps.sort_by_key(|cusp| (cusp.c, cusp.a));
    // Each class appears exactly once.
    for i in 0..cusps.len() {
        for j in (i + 1)..cusps.len() {
            assert!(
                !cusp_equivalent(g, &cusps[i], &cusps[j]),
                "representatives {} and {} collide on {}",
                cusps[i],
                cusps[j],
                g
            );
        }
    }
    assert_eq!(
        cusps.len() as i64,
        cusp_count(g),
        "enumeration disagrees with the closed-form count on {g}"
    );
    cusps
}

/// Lift `rep` (a unit mod `x`, or the marker 0 when `x = 1`) to a unit mod `l`.
fn lift_to_unit(rep: i64, x: i64, l: i64) -> i64 {
    if x == 1 {
        return 1;
    }
    let mut s = rep.rem_euclid(x);
    if s == 0 {
        s = x;
    }
    while gcd(s, l) != 1 {
        s += x;
        assert!(s <= x * l, "unit lift must exist");
    }
    s
}

/// Choose coprime integers `(y, x)` with `y ≡ a`, `x ≡ x0 (mod l)` and
/// return the cusp `y/x`.
fn make_coprime_cusp(a: i64, x0: i64, l: i64) -> Cusp {
    if x0 == 0 {
        if a == 1 {
            return Cusp::infinity();
        }
        // denominator ≡ 0 mod l but the class is not forced to infinity;
        // the lifted numerator is already a unit mod l.
        debug_assert_eq!(gcd(a, l), 1);
        return Cusp { a, c: l };
    }
    let mut y = a;
    let mut guard = 0;
    while gcd(y, x0) != 1 {
        y += l;
        guard += 1;
        assert!(guard <= l * l, "coprime numerator must exist");
    }
    Cusp { a: y, c: x0 }
}

/// Width of the cusp class of `x` in `g`, by the closed form (with the
/// special case `N = 4`, `gcd(m, 2) = 1`, `gcd(c, 4) = 2`).
pub fn cusp_width(g: &GroupDesc, x: &Cusp) -> i64 {
    let n = g.n;
    let m = g.m;
    let c = x.c.abs();
    if n == 4 && gcd(m, 2) == 1 && gcd(c, 4) == 2 {
        return m / gcd(c * c / 4, m);
    }
    let gn = gcd(c, n);
    let gn = if gn == 0 { n } else { gn };
    m * n / (gn * gcd(m, c * c / gn))
}

/// Width by the defining minimality property: the smallest `h > 0` such that
/// `gamma [1 h; 0 1] gamma^(-1) ∈ ±Gamma` for `gamma` sending infinity to `x`.
/// Exhaustive; used as an independent oracle in tests.
pub fn cusp_width_by_matrices(g: &GroupDesc, x: &Cusp) -> i64 {
    let mat = x.to_matrix();
    let [a, _, c, _] = mat;
    for h in 1..=(4 * g.modulus() * g.modulus()) {
        // gamma [1 h; 0 1] gamma^{-1} = [1 - a c h, a^2 h; -c^2 h, 1 + a c h]
        let m_pos = [1 - a * c * h, a * a * h, -c * c * h, 1 + a * c * h];
        let m_neg = [-m_pos[0], -m_pos[1], -m_pos[2], -m_pos[3]];
        if g.contains(&m_pos) || neg_det_adjusted_contains(g, &m_neg) {
            return h;
        }
    }
    unreachable!("width is bounded by the group modulus");
}

fn neg_det_adjusted_contains(g: &GroupDesc, m: &[i64; 4]) -> bool {
    // -gamma has the same determinant as gamma for 2x2.
    g.contains(m)
}

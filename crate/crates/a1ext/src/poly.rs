//! Sparse mod-2 polynomial arithmetic for the cohomology of the second mod-2
//! Eilenberg-MacLane space.
//!
//! The ambient ring is `F2[u_j : j >= 0]` with `|u_j| = 2^j + 1`. The
//! generator action is
//! `S(u_0) = (u_1, u_0^2)`, `S(u_1) = (0, u_2)`, `S(u_j) = (u_{j-1}^2, 0)`
//! for `j >= 2`, extended to products by the Cartan formula. A second
//! alphabet (`x_j` for `j >= 4` together with the degree-18 letter `c18`)
//! carries the closed-form action `Sq1 x_4 = c18`, `Sq2 x_4 = 0`,
//! `S(x_j) = (x_{j-1}^2, 0)` for `j >= 5`, and `S(c18) = (0, 0)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub fn u_degree(j: u32) -> i64 {
    (1i64 << j) + 1
}

/// Monomial in the `u_j`: sorted `(letter, exponent)` pairs with positive
/// exponents. The flat representation keeps clones cheap; polynomial
/// arithmetic over these is the hot path of every weighted-module build.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UMonomial(pub Vec<(u32, u32)>);

impl UMonomial {
    pub fn one() -> Self {
        UMonomial(Vec::new())
    }

    pub fn u(j: u32) -> Self {
        UMonomial(vec![(j, 1)])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(j, e)| e as i64 * u_degree(j)).sum()
    }

    pub fn exponent(&self, j: u32) -> u32 {
        self.0
            .binary_search_by_key(&j, |&(jj, _)| jj)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &UMonomial) -> UMonomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ja, ea)), Some(&&(jb, eb))) => {
                    if ja < jb {
                        out.push((ja, ea));
                        a.next();
                    } else if jb < ja {
                        out.push((jb, eb));
                        b.next();
                    } else {
                        out.push((ja, ea + eb));
                        a.next();
                        b.next();
                    }
                }
                (Some(_), None) => {
                    out.extend(a.cloned());
                    break;
                }
                (None, Some(_)) => {
                    out.extend(b.cloned());
                    break;
                }
                (None, None) => break,
            }
        }
        UMonomial(out)
    }

    pub fn pow(&self, k: u32) -> UMonomial {
        if k == 0 {
            return UMonomial::one();
        }
        UMonomial(self.0.iter().map(|&(j, e)| (j, e * k)).collect())
    }

    /// Divide by `u_j^k`; caller must know the exponent is large enough.
    fn div_u(&self, j: u32, k: u32) -> UMonomial {
        let mut out = self.0.clone();
        let i = out
            .binary_search_by_key(&j, |&(jj, _)| jj)
            .expect("divisor must be present");
        assert!(out[i].1 >= k);
        out[i].1 -= k;
        if out[i].1 == 0 {
            out.remove(i);
        }
        UMonomial(out)
    }

    /// Multiply by `u_j^k` in place of an allocation-heavy general product.
    fn mul_u(&self, j: u32, k: u32) -> UMonomial {
        let mut out = self.0.clone();
        match out.binary_search_by_key(&j, |&(jj, _)| jj) {
            Ok(i) => out[i].1 += k,
            Err(i) => out.insert(i, (j, k)),
        }
        UMonomial(out)
    }
}

impl fmt::Display for UMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(j, e) in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "u{j}")?;
            } else {
                write!(f, "u{j}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial over F2: the set of monomials with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly(pub BTreeSet<UMonomial>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(BTreeSet::new())
    }

    pub fn one() -> Self {
        UPoly(BTreeSet::from([UMonomial::one()]))
    }

    pub fn u(j: u32) -> Self {
        UPoly(BTreeSet::from([UMonomial::u(j)]))
    }

    pub fn from_monomial(m: UMonomial) -> Self {
        UPoly(BTreeSet::from([m]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn toggle(&mut self, m: UMonomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let mut out = self.clone();
        for m in &other.0 {
            out.toggle(m.clone());
        }
        out
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        let mut out = UPoly::zero();
        for a in &self.0 {
            for b in &other.0 {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    /// `self^(2^k)`: squaring is monomial-wise over F2.
    pub fn pow2k(&self, k: u32) -> UPoly {
        UPoly(self.0.iter().map(|m| m.pow(1 << k)).collect())
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut out = UPoly::one();
        for bit in 0..32 {
            if e >> bit & 1 == 1 {
                out = out.mul(&self.pow2k(bit));
            }
        }
        out
    }

    /// Degree when homogeneous; `None` for 0 or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.0.iter().map(|m| m.degree());
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Sq1 u_j` as `(letter, exponent)`, `None` for zero.
fn sq1_u(j: u32) -> Option<(u32, u32)> {
    match j {
        0 => Some((1, 1)),
        1 => None,
        _ => Some((j - 1, 2)),
    }
}

/// `Sq2 u_j` as `(letter, exponent)`, `None` for zero.
fn sq2_u(j: u32) -> Option<(u32, u32)> {
    match j {
        0 => Some((0, 2)),
        1 => Some((2, 1)),
        _ => None,
    }
}

fn choose2_odd(e: u32) -> bool {
    e & 2 != 0
}

/// `Sq1` of a monomial by the derivation rule.
fn sq1_monomial(m: &UMonomial) -> UPoly {
    let mut out = UPoly::zero();
    for &(j, e) in &m.0 {
        if e % 2 == 1 {
            if let Some((sj, sk)) = sq1_u(j) {
                out.toggle(m.div_u(j, 1).mul_u(sj, sk));
            }
        }
    }
    out
}

/// `Sq2` of a monomial by the Cartan formula: single-factor `Sq2` terms,
/// same-factor squared-`Sq1` terms, and cross `Sq1 . Sq1` terms.
fn sq2_monomial(m: &UMonomial) -> UPoly {
    let mut out = UPoly::zero();
    let letters: Vec<(u32, u32)> = m.0.clone();
    for &(j, e) in &letters {
        if e % 2 == 1 {
            if let Some((sj, sk)) = sq2_u(j) {
                out.toggle(m.div_u(j, 1).mul_u(sj, sk));
            }
        }
        if choose2_odd(e) {
            if let Some((sj, sk)) = sq1_u(j) {
                out.toggle(m.div_u(j, 2).mul_u(sj, 2 * sk));
            }
        }
    }
    for (a, &(j1, e1)) in letters.iter().enumerate() {
        for &(j2, e2) in &letters[a + 1..] {
            if e1 % 2 == 1 && e2 % 2 == 1 {
                if let (Some((sj1, sk1)), Some((sj2, sk2))) = (sq1_u(j1), sq1_u(j2)) {
                    out.toggle(m.div_u(j1, 1).div_u(j2, 1).mul_u(sj1, sk1).mul_u(sj2, sk2));
                }
            }
        }
    }
    out
}

/// Steenrod operation `Sq1` or `Sq2` on a polynomial.
pub fn steenrod(sq: u8, p: &UPoly) -> UPoly {
    let mut out = UPoly::zero();
    for m in &p.0 {
        let image = match sq {
            1 => sq1_monomial(m),
            2 => sq2_monomial(m),
            _ => panic!("only Sq1 and Sq2 exist in A(1)"),
        };
        out = out.add(&image);
    }
    out
}

/// Monomial in the second alphabet: `x_j` for `j >= 4` plus the degree-18
/// letter `c18`, which counts as `x_3^2` in all weight bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct XMonomial {
    pub c18: u32,
    pub xs: BTreeMap<u32, u32>,
}

impl XMonomial {
    pub fn one() -> Self {
        XMonomial::default()
    }

    pub fn x(j: u32) -> Self {
        assert!(j >= 4);
        XMonomial {
            c18: 0,
            xs: BTreeMap::from([(j, 1)]),
        }
    }

    pub fn c18_power(k: u32) -> Self {
        XMonomial {
            c18: k,
            xs: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> i64 {
        18 * self.c18 as i64
            + self
                .xs
                .iter()
                .map(|(&j, &e)| e as i64 * u_degree(j))
                .sum::<i64>()
    }

    /// Weight: each `x_j` counts `2^j`, each `c18` counts `16` (two copies
    /// of `2^3`).
    pub fn weight(&self) -> i64 {
        16 * self.c18 as i64
            + self
                .xs
                .iter()
                .map(|(&j, &e)| (e as i64) << j)
                .sum::<i64>()
    }

    pub fn mul(&self, other: &XMonomial) -> XMonomial {
        let mut xs = self.xs.clone();
        for (&j, &e) in &other.xs {
            *xs.entry(j).or_insert(0) += e;
        }
        XMonomial {
            c18: self.c18 + other.c18,
            xs,
        }
    }

    fn div_x(&self, j: u32, k: u32) -> XMonomial {
        let mut xs = self.xs.clone();
        let e = xs.get_mut(&j).expect("divisor must be present");
        assert!(*e >= k);
        *e -= k;
        if *e == 0 {
            xs.remove(&j);
        }
        XMonomial { c18: self.c18, xs }
    }

    fn mul_x(&self, j: u32, k: u32) -> XMonomial {
        let mut xs = self.xs.clone();
        *xs.entry(j).or_insert(0) += k;
        XMonomial { c18: self.c18, xs }
    }

    fn mul_c18(&self, k: u32) -> XMonomial {
        XMonomial {
            c18: self.c18 + k,
            xs: self.xs.clone(),
        }
    }
}

impl fmt::Display for XMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c18 == 0 && self.xs.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = Vec::new();
        for (&j, &e) in self.xs.iter().rev() {
            parts.push(if e == 1 {
                format!("x{j}")
            } else {
                format!("x{j}^{e}")
            });
        }
        if self.c18 > 0 {
            parts.push(if self.c18 == 1 {
                "c18".to_string()
            } else {
                format!("c18^{}", self.c18)
            });
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct XPoly(pub BTreeSet<XMonomial>);

impl XPoly {
    pub fn zero() -> Self {
        XPoly(BTreeSet::new())
    }

    pub fn from_monomial(m: XMonomial) -> Self {
        XPoly(BTreeSet::from([m]))
    }

    pub fn toggle(&mut self, m: XMonomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add(&self, other: &XPoly) -> XPoly {
        let mut out = self.clone();
        for m in &other.0 {
            out.toggle(m.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// `Sq1(x_j)` in the alphabet: `c18` for `j = 4`, `x_{j-1}^2` for `j >= 5`.
/// Multiplied back into `m / x_j`.
fn x_sq1_factor(m: &XMonomial, j: u32) -> XMonomial {
    let rest = m.div_x(j, 1);
    if j == 4 {
        rest.mul_c18(1)
    } else {
        rest.mul_x(j - 1, 2)
    }
}

/// `Sq1` of an alphabet monomial (derivation; `c18` is a cycle).
pub fn x_sq1(m: &XMonomial) -> XPoly {
    let mut out = XPoly::zero();
    let letters: Vec<(u32, u32)> = m.xs.iter().map(|(&j, &e)| (j, e)).collect();
    for &(j, e) in &letters {
        if e % 2 == 1 {
            out.toggle(x_sq1_factor(m, j));
        }
    }
    out
}

/// `Sq2` of an alphabet monomial. All letters have `Sq2 = 0`, so only the
/// squared-`Sq1` and cross terms of the Cartan formula survive.
pub fn x_sq2(m: &XMonomial) -> XPoly {
    let mut out = XPoly::zero();
    let letters: Vec<(u32, u32)> = m.xs.iter().map(|(&j, &e)| (j, e)).collect();
    for &(j, e) in &letters {
        if choose2_odd(e) {
            let rest = m.div_x(j, 2);
            out.toggle(if j == 4 {
                rest.mul_c18(2)
            } else {
                rest.mul_x(j - 1, 4)
            });
        }
    }
    for (a, &(j1, e1)) in letters.iter().enumerate() {
        for &(j2, e2) in &letters[a + 1..] {
            if e1 % 2 == 1 && e2 % 2 == 1 {
                let first = x_sq1_factor(m, j1);
                // Apply the second Sq1 replacement on the already-divided
                // monomial; the letters are distinct so order is immaterial.
                out.toggle(x_sq1_factor(&first, j2));
            }
        }
    }
    out
}

pub fn x_steenrod(sq: u8, p: &XPoly) -> XPoly {
    let mut out = XPoly::zero();
    for m in &p.0 {
        let image = match sq {
            1 => x_sq1(m),
            2 => x_sq2(m),
            _ => panic!("only Sq1 and Sq2 exist in A(1)"),
        };
        out = out.add(&image);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    struct XorShift(u64);
    impl XorShift {
        fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }
    }

    fn random_poly(rng: &mut XorShift, max_degree: i64) -> UPoly {
        let mut p = UPoly::zero();
        let terms = rng.next() % 5 + 1;
        for _ in 0..terms {
            let mut m = UMonomial::one();
            loop {
                let j = (rng.next() % 5) as u32;
                let candidate = m.mul(&UMonomial::u(j));
                if candidate.degree() > max_degree {
                    break;
                }
                m = candidate;
                if rng.next() % 3 == 0 {
                    break;
                }
            }
            p.toggle(m);
        }
        p
    }

    #[test]
    fn generator_action_table() {
        assert_eq!(steenrod(1, &UPoly::u(0)), UPoly::u(1));
        assert_eq!(
            steenrod(2, &UPoly::u(0)),
            UPoly::from_monomial(UMonomial::u(0).pow(2))
        );
        assert_eq!(steenrod(1, &UPoly::u(1)), UPoly::zero());
        assert_eq!(steenrod(2, &UPoly::u(1)), UPoly::u(2));
        for j in 2..6 {
            assert_eq!(
                steenrod(1, &UPoly::u(j)),
                UPoly::from_monomial(UMonomial::u(j - 1).pow(2))
            );
            assert_eq!(steenrod(2, &UPoly::u(j)), UPoly::zero());
        }
    }

    #[test]
    fn square_rule() {
        // Sq2 of a square is the square of Sq1; Sq1 of a square is zero.
        let p = UPoly::from_monomial(UMonomial::u(1).pow(2));
        assert_eq!(steenrod(2, &p), UPoly::zero());
        assert_eq!(steenrod(1, &p), UPoly::zero());
        let q = UPoly::from_monomial(UMonomial::u(0).pow(2));
        assert_eq!(
            steenrod(2, &q),
            UPoly::from_monomial(UMonomial::u(1).pow(2))
        );
    }

    #[test]
    fn cartan_on_products() {
        let mut rng = XorShift(0xfeedface);
        for _ in 0..40 {
            let a = random_poly(&mut rng, 25);
            let b = random_poly(&mut rng, 25);
            let ab = a.mul(&b);
            assert_eq!(
                steenrod(1, &ab),
                steenrod(1, &a).mul(&b).add(&a.mul(&steenrod(1, &b)))
            );
            let expected = steenrod(2, &a)
                .mul(&b)
                .add(&steenrod(1, &a).mul(&steenrod(1, &b)))
                .add(&a.mul(&steenrod(2, &b)));
            assert_eq!(steenrod(2, &ab), expected);
        }
    }

    #[test]
    fn adem_relations_hold_on_random_polynomials() {
        let mut rng = XorShift(0x5eed);
        for _ in 0..60 {
            let p = random_poly(&mut rng, 60);
            assert!(steenrod(1, &steenrod(1, &p)).is_zero());
            let lhs = steenrod(2, &steenrod(2, &p));
            let rhs = steenrod(1, &steenrod(2, &steenrod(1, &p)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degrees_are_raised_correctly() {
        let mut rng = XorShift(0xd00d);
        for _ in 0..20 {
            let m = {
                let p = random_poly(&mut rng, 30);
                match p.0.into_iter().next() {
                    Some(m) => m,
                    None => continue,
                }
            };
            let d = m.degree();
            for mm in &sq1_monomial(&m).0 {
                assert_eq!(mm.degree(), d + 1);
            }
            for mm in &sq2_monomial(&m).0 {
                assert_eq!(mm.degree(), d + 2);
            }
        }
    }

    #[test]
    fn x_alphabet_action_and_weight() {
        // Sq1 x4 = c18, Sq2 x4 = 0, Sq1 x5 = x4^2, weights are preserved.
        let x4 = XMonomial::x(4);
        assert_eq!(x_sq1(&x4), XPoly::from_monomial(XMonomial::c18_power(1)));
        assert_eq!(x_sq2(&x4), XPoly::zero());
        let x5 = XMonomial::x(5);
        let mut x4sq = XMonomial::one();
        x4sq = x4sq.mul_x(4, 2);
        assert_eq!(x_sq1(&x5), XPoly::from_monomial(x4sq));
        let m = XMonomial::x(5).mul(&XMonomial::x(4)).mul_c18(1);
        let w = m.weight();
        for img in [x_sq1(&m), x_sq2(&m)] {
            for mm in &img.0 {
                assert_eq!(mm.weight(), w);
            }
        }
    }

    #[test]
    fn poly_pow_matches_repeated_multiplication() {
        let p = UPoly::u(0).add(&UPoly::u(1));
        let mut expected = UPoly::one();
        for _ in 0..5 {
            expected = expected.mul(&p);
        }
        assert_eq!(p.pow(5), expected);
    }
}

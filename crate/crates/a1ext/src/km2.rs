//! Named A(1)-modules inside the cohomology ring of the second mod-2
//! Eilenberg-MacLane space.
//!
//! The ring is `F2[u_j]` with its Steenrod action. The generator change
//! `w_j` and the classes `x_j` (`j >= 4`), `c18 = Sq1 x4` give an alphabet
//! in which the finite weighted submodules (weight `2^k` monomials) carry a
//! closed-form action. Built here:
//! - the ambient weighted modules and their reduced summands `M_k`;
//! - the small modules `U` (the Joker), `N`, `G_j`, `P_j`, `NU`;
//! - the iterated reduced tensor constructions `M_k z_{j_1} ... z_{j_r}`;
//! - the four mod-4 template shapes for isomorphism testing;
//! - binary partition counting;
//! - the global splitting verifier, which maps every summand into the ring
//!   by multiplying representatives and checks injectivity plus
//!   Wall-freeness of the quotient.

use crate::gf2::{F2Matrix, F2Vector};
use crate::margolis::{margolis_homology, split_reduced, MargolisOp, Splitting};
use crate::module::{BasisElem, GradedModule};
use crate::poly::{steenrod, u_degree, x_sq1, x_sq2, UMonomial, UPoly, XMonomial, XPoly};
use num_bigint::BigUint;
use std::collections::BTreeMap;
use thiserror::Error;

pub const DEFAULT_DEGREE_CAP: i64 = 600;
pub const DEFAULT_MAX_K: u32 = 9;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("degree cap {cap} exceeded: construction needs degree {needed}")]
    CapExceeded { cap: i64, needed: i64 },
    #[error("parameter out of range: {what}")]
    ParamRange { what: String },
    #[error("action left the span on {element}")]
    ClosureFailure { element: String },
}

/// Shared immutable generator table: the polynomials `w_j`, `x_j` and `c18`,
/// computed once and read everywhere.
pub struct Ring {
    pub degree_cap: i64,
    pub max_j: u32,
    w: Vec<UPoly>,
    x: BTreeMap<u32, UPoly>,
    c18: UPoly,
}

impl Ring {
    pub fn new(max_j: u32, degree_cap: i64) -> Result<Ring, BuildError> {
        let needed = u_degree(max_j);
        if needed > degree_cap {
            return Err(BuildError::CapExceeded {
                cap: degree_cap,
                needed,
            });
        }
        let mut w: Vec<UPoly> = Vec::new();
        for j in 0..=max_j {
            let p = match j {
                0 | 1 => UPoly::u(j),
                2 => UPoly::u(0).mul(&UPoly::u(1)).add(&UPoly::u(2)),
                _ => {
                    let e = 1u32 << (j - 2);
                    UPoly::u(1)
                        .pow(e)
                        .mul(&UPoly::u(j - 2))
                        .add(&UPoly::u(0).pow(e).mul(&UPoly::u(j - 1)))
                        .add(&UPoly::u(j))
                }
            };
            w.push(p);
        }
        let mut x: BTreeMap<u32, UPoly> = BTreeMap::new();
        if max_j >= 4 {
            x.insert(4, w[0].mul(&w[2].pow(3)).add(&w[4]));
        }
        for j in 5..=max_j {
            let ju = j as usize;
            let t1 = w[0]
                .pow(1 << (j - 4))
                .mul(&w[2].pow(1 << (j - 3)))
                .mul(&w[ju - 2]);
            let t2 = w[1]
                .pow(3 << (j - 5))
                .mul(&w[2].pow(1 << (j - 4)))
                .mul(&w[3].pow(1 << (j - 5)))
                .mul(&w[ju - 3]);
            let t3 = w[0]
                .pow(1 << (j - 5))
                .mul(&w[1].pow(1 << (j - 4)))
                .mul(&w[2].pow(1 << (j - 3)))
                .mul(&w[ju - 3]);
            x.insert(j, t1.add(&t2).add(&t3).add(&w[ju]));
        }
        let c18 = match x.get(&4) {
            Some(x4) => steenrod(1, x4),
            None => UPoly::zero(),
        };
        Ok(Ring {
            degree_cap,
            max_j,
            w,
            x,
            c18,
        })
    }

    pub fn with_defaults(max_j: u32) -> Result<Ring, BuildError> {
        Ring::new(max_j, DEFAULT_DEGREE_CAP)
    }

    pub fn w(&self, j: u32) -> &UPoly {
        &self.w[j as usize]
    }

    pub fn x(&self, j: u32) -> &UPoly {
        &self.x[&j]
    }

    pub fn c18(&self) -> &UPoly {
        &self.c18
    }

    /// Expand an alphabet monomial into the `u_j` coordinates.
    pub fn expand(&self, m: &XMonomial) -> UPoly {
        let mut out = self.c18.pow(m.c18);
        for (&j, &e) in &m.xs {
            out = out.mul(&self.x[&j].pow(e));
        }
        out
    }

    pub fn expand_xpoly(&self, p: &XPoly) -> UPoly {
        let mut out = UPoly::zero();
        for m in &p.0 {
            out = out.add(&self.expand(m));
        }
        out
    }
}

/// A module realized by explicit polynomials: `polys[i]` represents basis
/// element `i`, and the action matrices agree with the Steenrod action on
/// the representatives (multiplication is equivariant by the Cartan
/// formula, so tensor products multiply out).
#[derive(Clone, Debug)]
pub struct PolySpan {
    pub module: GradedModule,
    pub polys: Vec<UPoly>,
}

impl PolySpan {
    /// Trivial one-dimensional module in degree 0, represented by 1.
    pub fn unit() -> PolySpan {
        PolySpan {
            module: GradedModule::trivial(0),
            polys: vec![UPoly::one()],
        }
    }

    pub fn tensor(&self, other: &PolySpan) -> PolySpan {
        let (module, order) = self.module.tensor_with_order(&other.module);
        let polys = order
            .iter()
            .map(|&(i, j)| self.polys[i].mul(&other.polys[j]))
            .collect();
        PolySpan { module, polys }
    }

    /// Reduced summand, with representatives pushed through the splitting.
    pub fn reduced(&self) -> PolySpan {
        let s = split_reduced(&self.module);
        let polys = (0..s.reduced.dim())
            .map(|j| {
                let mut p = UPoly::zero();
                for i in s.incl_reduced.column(j).support() {
                    p = p.add(&self.polys[i]);
                }
                p
            })
            .collect();
        PolySpan {
            module: s.reduced,
            polys,
        }
    }

    /// Multiply every representative by a homogeneous polynomial killed by
    /// Sq1 and Sq2; the module suspends by its degree.
    pub fn scaled(&self, factor: &UPoly) -> PolySpan {
        let d = factor
            .homogeneous_degree()
            .expect("scaling factor must be homogeneous");
        debug_assert!(steenrod(1, factor).is_zero() && steenrod(2, factor).is_zero());
        PolySpan {
            module: self.module.suspend(d),
            polys: self.polys.iter().map(|p| p.mul(factor)).collect(),
        }
    }
}

/// Build a module from labelled homogeneous polynomials whose span is
/// action-closed; the action is computed with the Steenrod operation and
/// re-expressed in the given basis.
pub fn module_from_polys(items: Vec<(String, UPoly)>) -> Result<PolySpan, BuildError> {
    let mut entries: Vec<(String, UPoly, i64)> = items
        .into_iter()
        .map(|(label, p)| {
            let d = p
                .homogeneous_degree()
                .unwrap_or_else(|| panic!("representative of {label} must be homogeneous"));
            (label, p, d)
        })
        .collect();
    entries.sort_by_key(|e| e.2);
    let n = entries.len();
    let images: Vec<(UPoly, UPoly)> = entries
        .iter()
        .map(|(_, p, _)| (steenrod(1, p), steenrod(2, p)))
        .collect();
    let mut monomials: BTreeMap<UMonomial, usize> = BTreeMap::new();
    for p in entries
        .iter()
        .map(|e| &e.1)
        .chain(images.iter().flat_map(|(a, b)| [a, b]))
    {
        for m in &p.0 {
            let next = monomials.len();
            monomials.entry(m.clone()).or_insert(next);
        }
    }
    let dim = monomials.len();
    let vector = |p: &UPoly| -> F2Vector {
        let mut v = F2Vector::zeros(dim);
        for m in &p.0 {
            v.set(monomials[m], true);
        }
        v
    };
    let span = F2Matrix::from_columns(
        dim,
        &entries.iter().map(|e| vector(&e.1)).collect::<Vec<_>>(),
    );
    let mut sq1 = F2Matrix::zeros(n, n);
    let mut sq2 = F2Matrix::zeros(n, n);
    for (j, (s1, s2)) in images.iter().enumerate() {
        for (target, image) in [(&mut sq1, s1), (&mut sq2, s2)] {
            let coords =
                span.solve(&vector(image))
                    .ok_or_else(|| BuildError::ClosureFailure {
                        element: entries[j].0.clone(),
                    })?;
            for i in coords.support() {
                target.set(i, j, true);
            }
        }
    }
    let basis: Vec<BasisElem> = entries
        .iter()
        .map(|(label, _, d)| BasisElem {
            label: label.clone(),
            degree: *d,
        })
        .collect();
    let polys = entries.into_iter().map(|e| e.1).collect();
    Ok(PolySpan {
        module: GradedModule::new(basis, sq1, sq2),
        polys,
    })
}

/// The Joker `U = < u0, u1, u0^2, u2, u1^2 >`, degrees 2 through 6.
pub fn build_joker() -> PolySpan {
    module_from_polys(vec![
        ("u0".into(), UPoly::u(0)),
        ("u1".into(), UPoly::u(1)),
        ("u0^2".into(), UPoly::u(0).pow(2)),
        ("u2".into(), UPoly::u(2)),
        ("u1^2".into(), UPoly::u(1).pow(2)),
    ])
    .expect("the Joker span is action-closed")
}

/// `N = < w2, w0 w2, w1 w2, w3, w2^2 >`, degrees 5, 7, 8, 9, 10.
pub fn build_n(ring: &Ring) -> PolySpan {
    let w0 = ring.w(0);
    let w1 = ring.w(1);
    let w2 = ring.w(2);
    let w3 = ring.w(3);
    module_from_polys(vec![
        ("w2".into(), w2.clone()),
        ("w0w2".into(), w0.mul(w2)),
        ("w1w2".into(), w1.mul(w2)),
        ("w3".into(), w3.clone()),
        ("w2^2".into(), w2.pow(2)),
    ])
    .expect("the N span is action-closed")
}

/// `G_j = < u_{j+2}, u_{j+1}^2, u_j^4 >` for `j >= 3`, with
/// `Sq2 Sq1 u_{j+2} = u_j^4`.
pub fn build_g(j: u32, degree_cap: i64) -> Result<PolySpan, BuildError> {
    if j < 3 {
        return Err(BuildError::ParamRange {
            what: format!("G_j needs j >= 3, got {j}"),
        });
    }
    let needed = u_degree(j) * 4;
    if needed > degree_cap {
        return Err(BuildError::CapExceeded {
            cap: degree_cap,
            needed,
        });
    }
    module_from_polys(vec![
        (format!("u{}", j + 2), UPoly::u(j + 2)),
        (format!("u{}^2", j + 1), UPoly::u(j + 1).pow(2)),
        (format!("u{j}^4"), UPoly::u(j).pow(4)),
    ])
}

/// `P_j`: extension of the one-dimensional module in degree `2^{j+2} - 1`
/// by `G_j`, with the bottom class hitting `u_{j+2}` under Sq2. Its
/// Q1-homology vanishes. Not a subspace of the ring.
pub fn build_p(j: u32, degree_cap: i64) -> Result<GradedModule, BuildError> {
    if j < 3 {
        return Err(BuildError::ParamRange {
            what: format!("P_j needs j >= 3, got {j}"),
        });
    }
    let base = u_degree(j + 2) - 2;
    if base + 5 > degree_cap {
        return Err(BuildError::CapExceeded {
            cap: degree_cap,
            needed: base + 5,
        });
    }
    let m = GradedModule::from_pairs(
        vec![
            ("iota".to_string(), base),
            (format!("u{}", j + 2), base + 2),
            (format!("u{}^2", j + 1), base + 3),
            (format!("u{j}^4"), base + 5),
        ],
        &[(1, 2)],
        &[(0, 1), (2, 3)],
    );
    debug_assert!(m.validate().is_ok());
    Ok(m)
}

/// `NU`: the reduced summand of `N (x) U`.
pub fn build_nu(ring: &Ring) -> PolySpan {
    build_n(ring).tensor(&build_joker()).reduced()
}

/// All alphabet monomials of weight `2^k` (letters `x_4 .. x_k` and `c18`),
/// sorted by degree then monomial order; one per binary partition of
/// `2^{k-3}`.
pub fn weighted_basis(k: u32) -> Vec<XMonomial> {
    assert!(k >= 4);
    fn recurse(j: u32, remaining: i64, exponents: &mut Vec<(u32, u32)>, out: &mut Vec<XMonomial>) {
        if j < 4 {
            debug_assert_eq!(remaining % 16, 0);
            let mut m = XMonomial::c18_power((remaining / 16) as u32);
            for &(jj, e) in exponents.iter() {
                if e > 0 {
                    m.xs.insert(jj, e);
                }
            }
            out.push(m);
            return;
        }
        let max_e = remaining >> j;
        for e in 0..=max_e {
            exponents.push((j, e as u32));
            recurse(j - 1, remaining - (e << j), exponents, out);
            exponents.pop();
        }
    }
    let mut out = Vec::new();
    recurse(k, 1i64 << k, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.degree(), m.clone()));
    out
}

/// The ambient weighted module for a given `k`.
pub struct AmbientMk {
    pub k: u32,
    pub module: GradedModule,
    pub monomials: Vec<XMonomial>,
}

/// Build the ambient module from the closed-form alphabet action. With
/// `verify_expansion` every basis monomial is expanded into the `u_j`
/// coordinates and the alphabet action is compared against the honest
/// Steenrod action on the expansion.
pub fn build_ambient_mk(
    ring: &Ring,
    k: u32,
    verify_expansion: bool,
) -> Result<AmbientMk, BuildError> {
    if !(4..=ring.max_j).contains(&k) {
        return Err(BuildError::ParamRange {
            what: format!(
                "ambient weighted module needs 4 <= k <= {}, got {k}",
                ring.max_j
            ),
        });
    }
    let monomials = weighted_basis(k);
    let index: BTreeMap<XMonomial, usize> = monomials
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let n = monomials.len();
    let mut sq1 = F2Matrix::zeros(n, n);
    let mut sq2 = F2Matrix::zeros(n, n);
    for (j, m) in monomials.iter().enumerate() {
        for (target, image) in [(&mut sq1, x_sq1(m)), (&mut sq2, x_sq2(m))] {
            for mm in &image.0 {
                let &i = index.get(mm).ok_or_else(|| BuildError::ClosureFailure {
                    element: m.to_string(),
                })?;
                target.set(i, j, true);
            }
        }
    }
    if verify_expansion {
        for m in &monomials {
            if m.degree() > ring.degree_cap {
                return Err(BuildError::CapExceeded {
                    cap: ring.degree_cap,
                    needed: m.degree(),
                });
            }
            let expanded = ring.expand(m);
            let want1 = ring.expand_xpoly(&x_sq1(m));
            let want2 = ring.expand_xpoly(&x_sq2(m));
            if steenrod(1, &expanded) != want1 || steenrod(2, &expanded) != want2 {
                return Err(BuildError::ClosureFailure {
                    element: m.to_string(),
                });
            }
        }
    }
    let basis: Vec<BasisElem> = monomials
        .iter()
        .map(|m| BasisElem {
            label: m.to_string(),
            degree: m.degree(),
        })
        .collect();
    let module = GradedModule::new(basis, sq1, sq2);
    debug_assert!(module.validate().is_ok());
    Ok(AmbientMk {
        k,
        module,
        monomials,
    })
}

/// The reduced summand `M_k` of the ambient weighted module, with the full
/// splitting kept for inspection.
pub struct MkData {
    pub k: u32,
    pub ambient: AmbientMk,
    pub splitting: Splitting,
}

impl MkData {
    pub fn reduced(&self) -> &GradedModule {
        &self.splitting.reduced
    }

    /// Polynomial representatives of the reduced basis.
    pub fn span(&self, ring: &Ring) -> PolySpan {
        let polys = (0..self.splitting.reduced.dim())
            .map(|j| {
                let mut p = UPoly::zero();
                for i in self.splitting.incl_reduced.column(j).support() {
                    p = p.add(&ring.expand(&self.ambient.monomials[i]));
                }
                p
            })
            .collect();
        PolySpan {
            module: self.splitting.reduced.clone(),
            polys,
        }
    }
}

pub fn build_mk(ring: &Ring, k: u32, verify_expansion: bool) -> Result<MkData, BuildError> {
    let ambient = build_ambient_mk(ring, k, verify_expansion)?;
    let splitting = split_reduced(&ambient.module);
    Ok(MkData {
        k,
        ambient,
        splitting,
    })
}

/// Expected degrees of the two Q1-homology classes of `M_k`, bottom and top.
pub fn mk_q1_degrees(k: u32) -> (i64, i64) {
    let p = 1i64 << k;
    if k == 4 {
        (p + 1, p + 2)
    } else {
        (p + 2, p + 2 * k as i64 - 7)
    }
}

/// Template module of the mod-4 shape family, in desuspended form (bottom
/// class in degree 1). `M_k` desuspended by `2^k` is isomorphic to this.
///
/// The body is a truncated projective pattern (Sq1 from odd degrees, Sq2
/// from degrees 2, 3 mod 4); for `k = 2, 3 mod 4` a short tail strand is
/// attached at the top.
pub fn figure_mk(k: u32) -> Result<GradedModule, BuildError> {
    if k < 4 {
        return Err(BuildError::ParamRange {
            what: format!("template shapes need k >= 4, got {k}"),
        });
    }
    let ell = ((k - 4) / 4) as i64;
    let mut basis: Vec<(String, i64)> = Vec::new();
    let mut sq1: Vec<(usize, usize)> = Vec::new();
    let mut sq2: Vec<(usize, usize)> = Vec::new();
    let mut main_index: BTreeMap<i64, usize> = BTreeMap::new();
    let n = match k % 4 {
        0 => 8 * ell + 2,
        1 => 8 * ell + 4,
        _ => 8 * ell + 6,
    };
    for d in 1..=n {
        main_index.insert(d, basis.len());
        basis.push((format!("g{d}"), d));
    }
    for i in 1..=n {
        if i % 2 == 1 && i + 1 <= n {
            sq1.push((main_index[&i], main_index[&(i + 1)]));
        }
        if (i % 4 == 2 || i % 4 == 3) && i + 2 <= n {
            sq2.push((main_index[&i], main_index[&(i + 2)]));
        }
    }
    let tail = |basis: &mut Vec<(String, i64)>, d: i64| -> usize {
        basis.push((format!("t{d}"), d));
        basis.len() - 1
    };
    match k % 4 {
        0 | 1 => {}
        2 => {
            // Tail: t(n-2) -> t(n-1) -> t(n+1) -> t(n+2) with Sq2 links to
            // the top main class.
            let t4 = tail(&mut basis, n - 2);
            let t5 = tail(&mut basis, n - 1);
            let t7 = tail(&mut basis, n + 1);
            let t8 = tail(&mut basis, n + 2);
            sq1.push((t4, t5));
            sq2.push((t4, main_index[&n]));
            sq2.push((t5, t7));
            sq1.push((t7, t8));
            sq2.push((main_index[&n], t8));
        }
        _ => {
            // Extra main class in degree n+2 plus a five-class tail.
            let g8 = basis.len();
            basis.push((format!("g{}", n + 2), n + 2));
            sq2.push((main_index[&n], g8));
            let t5 = tail(&mut basis, n - 1);
            let t6 = tail(&mut basis, n);
            let t7 = tail(&mut basis, n + 1);
            let t8 = tail(&mut basis, n + 2);
            let t9 = tail(&mut basis, n + 3);
            sq1.push((t5, t6));
            sq2.push((t5, t7));
            sq2.push((t6, t8));
            sq1.push((t7, g8));
            sq2.push((t7, t9));
            sq1.push((t8, t9));
        }
    }
    let module = GradedModule::from_pairs(basis, &sq1, &sq2);
    debug_assert!(module.validate().is_ok());
    Ok(module)
}

/// Iterated reduced tensor construction `M_k z_{j_1} ... z_{j_r}`: the
/// reduced summand of `M_k (x) G_{j_1} (x) ... (x) G_{j_r}`, for strictly
/// increasing `j_i >= k - 1`.
pub fn build_mk_z(
    ring: &Ring,
    k: u32,
    js: &[u32],
    verify_expansion: bool,
) -> Result<PolySpan, BuildError> {
    if !js.windows(2).all(|w| w[0] < w[1]) {
        return Err(BuildError::ParamRange {
            what: format!("z indices must be strictly increasing, got {js:?}"),
        });
    }
    if let Some(&j) = js.iter().find(|&&j| j + 1 < k) {
        return Err(BuildError::ParamRange {
            what: format!("z indices must satisfy j >= k - 1, got j = {j} for k = {k}"),
        });
    }
    let mk = build_mk(ring, k, verify_expansion)?;
    let mut span = mk.span(ring);
    for &j in js {
        let g = build_g(j, ring.degree_cap)?;
        span = span.tensor(&g).reduced();
    }
    Ok(span)
}

/// Binary partition counts `b(0), ..., b(n)`: partitions into powers of
/// two, by the recurrence `b(2m) = b(2m-1) + b(m)`, `b(2m+1) = b(2m)`.
pub fn binary_partitions_upto(n: usize) -> Vec<BigUint> {
    let mut b: Vec<BigUint> = Vec::with_capacity(n + 1);
    b.push(BigUint::from(1u32));
    for m in 1..=n {
        let v = if m % 2 == 1 {
            b[m - 1].clone()
        } else {
            &b[m - 1] + &b[m / 2]
        };
        b.push(v);
    }
    b
}

pub fn binary_partitions(n: usize) -> BigUint {
    binary_partitions_upto(n)[n].clone()
}

/// Report from the global splitting check at a degree cap.
#[derive(Clone, Debug)]
pub struct SplittingReport {
    pub degree_cap: i64,
    /// Degrees actually certified (six below the cap; truncation corrupts
    /// the boundary because the top of A(1) raises degree by 6).
    pub checked_up_to: i64,
    pub summands: Vec<String>,
    pub injective: bool,
    pub first_injectivity_failure: Option<i64>,
    pub quotient_free: bool,
    pub first_homology_failure: Option<(&'static str, i64)>,
    pub ambient_dims: BTreeMap<i64, usize>,
    pub summand_dims: BTreeMap<i64, usize>,
    /// Margolis homology of the ring per degree in the checked range,
    /// indexed Q0, Q1.
    pub ambient_q_dims: [BTreeMap<i64, usize>; 2],
    /// Union (sum) over summands, same indexing.
    pub summand_q_dims: [BTreeMap<i64, usize>; 2],
}

impl SplittingReport {
    pub fn pass(&self) -> bool {
        self.injective && self.quotient_free
    }
}

/// Monomial basis of the ring per degree, up to a cap.
fn ring_basis_upto(d_cap: i64) -> BTreeMap<i64, Vec<UMonomial>> {
    let max_j = (0..64)
        .take_while(|&j| u_degree(j) <= d_cap)
        .last()
        .unwrap_or(0);
    fn recurse(j: i64, degree_left: i64, current: &mut Vec<(u32, u32)>, out: &mut Vec<UMonomial>) {
        if j < 0 {
            let mut sorted = current.clone();
            sorted.sort_by_key(|&(jj, _)| jj);
            out.push(UMonomial(sorted));
            return;
        }
        let dj = u_degree(j as u32);
        for e in 0..=(degree_left / dj) {
            if e > 0 {
                current.push((j as u32, e as u32));
            }
            recurse(j - 1, degree_left - e * dj, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }
    let mut all = Vec::new();
    recurse(max_j as i64, d_cap, &mut Vec::new(), &mut all);
    let mut out: BTreeMap<i64, Vec<UMonomial>> = BTreeMap::new();
    for m in all {
        out.entry(m.degree()).or_default().push(m);
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

/// Assemble every summand of the global splitting with degrees within the
/// cap, map each into the ring by multiplying representatives, and check
/// that the assembled map is injective and the quotient is free in the
/// trustworthy range.
pub fn verify_splitting(d_cap: i64) -> Result<SplittingReport, BuildError> {
    if d_cap < 20 {
        return Err(BuildError::ParamRange {
            what: format!("splitting check needs a cap of at least 20, got {d_cap}"),
        });
    }
    let checked_up_to = d_cap - 6;
    let max_k = (4..=DEFAULT_MAX_K)
        .take_while(|&k| (1i64 << k) + 1 <= d_cap)
        .last()
        .unwrap_or(4);
    let ring = Ring::new(max_k.max(4), DEFAULT_DEGREE_CAP.max(2 * d_cap))?;

    let a_factors: Vec<(String, PolySpan)> = vec![
        ("1".to_string(), PolySpan::unit()),
        ("U".to_string(), build_joker()),
        ("N".to_string(), build_n(&ring)),
        ("NU".to_string(), build_nu(&ring)),
    ];
    let mut b_factors: Vec<(String, PolySpan)> = vec![("1".to_string(), PolySpan::unit())];
    for k in 4..=max_k {
        if (1i64 << k) + 1 > d_cap {
            break;
        }
        let mk = build_mk(&ring, k, true)?;
        let span = mk.span(&ring);
        let base_min = span.module.min_degree().unwrap();
        let mut stack: Vec<(Vec<u32>, PolySpan, i64)> = vec![(Vec::new(), span.clone(), base_min)];
        b_factors.push((format!("M{k}"), span));
        while let Some((js, current, min_deg)) = stack.pop() {
            let start = js.last().map(|&j| j + 1).unwrap_or(k - 1);
            for j in start..16 {
                if min_deg + u_degree(j + 2) > d_cap {
                    break;
                }
                let g = build_g(j, ring.degree_cap)?;
                let extended = current.tensor(&g).reduced();
                let mut njs = js.clone();
                njs.push(j);
                let name = format!(
                    "M{k}z{}",
                    njs.iter()
                        .map(|j| j.to_string())
                        .collect::<Vec<_>>()
                        .join("z")
                );
                let new_min = extended.module.min_degree().unwrap_or(d_cap + 1);
                stack.push((njs, extended.clone(), new_min));
                b_factors.push((name, extended));
            }
        }
    }

    let basis = ring_basis_upto(d_cap);
    let per_degree_index: BTreeMap<i64, BTreeMap<UMonomial, usize>> = basis
        .iter()
        .map(|(&d, ms)| {
            (
                d,
                ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect(),
            )
        })
        .collect();
    let dim_at = |d: i64| basis.get(&d).map(|v| v.len()).unwrap_or(0);
    let vector_at = |p: &UPoly, d: i64| -> F2Vector {
        let mut v = F2Vector::zeros(dim_at(d));
        if let Some(idx) = per_degree_index.get(&d) {
            for m in &p.0 {
                v.set(idx[m], true);
            }
        } else {
            assert!(p.is_zero(), "polynomial of degree {d} outside the basis");
        }
        v
    };

    // Assemble summands y^m (x) A (x) B, collecting image columns per degree.
    let y = UPoly::u(0).pow(4);
    let mut summands: Vec<String> = Vec::new();
    let mut columns: BTreeMap<i64, Vec<F2Vector>> = BTreeMap::new();
    let mut summand_modules: Vec<GradedModule> = Vec::new();
    for (aname, a) in &a_factors {
        for (bname, b) in &b_factors {
            let amin = a.module.min_degree().unwrap();
            let bmin = b.module.min_degree().unwrap_or(d_cap + 1);
            if amin + bmin > d_cap {
                continue;
            }
            let combined = if aname == "1" {
                b.clone()
            } else if bname == "1" {
                a.clone()
            } else {
                a.tensor(b).reduced()
            };
            if combined.module.dim() == 0 {
                continue;
            }
            let cmin = combined.module.min_degree().unwrap();
            let mut m = 0i64;
            while 8 * m + cmin <= d_cap {
                let scaled = if m == 0 {
                    combined.clone()
                } else {
                    combined.scaled(&y.pow(m as u32))
                };
                let name = {
                    let mut parts: Vec<String> = Vec::new();
                    if m > 0 {
                        parts.push(format!("y^{m}"));
                    }
                    if aname != "1" {
                        parts.push(aname.clone());
                    }
                    if bname != "1" {
                        parts.push(bname.clone());
                    }
                    if parts.is_empty() {
                        "1".to_string()
                    } else {
                        parts.join(".")
                    }
                };
                for (i, p) in scaled.polys.iter().enumerate() {
                    let d = scaled.module.degree(i);
                    if d > d_cap {
                        continue;
                    }
                    if !p.is_zero() {
                        assert_eq!(p.homogeneous_degree(), Some(d), "summand {name}");
                    }
                    columns.entry(d).or_default().push(vector_at(p, d));
                }
                summands.push(name);
                summand_modules.push(scaled.module.clone());
                m += 1;
            }
        }
    }

    // Injectivity degree by degree; keep the spans for the quotient pass.
    let mut injective = true;
    let mut first_injectivity_failure = None;
    let mut summand_dims: BTreeMap<i64, usize> = BTreeMap::new();
    let mut w_spans: BTreeMap<i64, F2Matrix> = BTreeMap::new();
    for d in 0..=d_cap {
        let cols = columns.get(&d).cloned().unwrap_or_default();
        summand_dims.insert(d, cols.len());
        let mat = F2Matrix::from_rows(dim_at(d), &cols);
        if d <= checked_up_to && injective && mat.rank() != cols.len() {
            injective = false;
            first_injectivity_failure = Some(d);
        }
        w_spans.insert(d, mat);
    }

    // Steenrod matrices per degree on the ring basis.
    let op_matrix = |d: i64, sq: u8| -> F2Matrix {
        let from = basis.get(&d).cloned().unwrap_or_default();
        let target = per_degree_index.get(&(d + sq as i64));
        let rows = target.map(|t| t.len()).unwrap_or(0);
        let mut m = F2Matrix::zeros(rows, from.len());
        if let Some(target) = target {
            for (j, mono) in from.iter().enumerate() {
                let img = steenrod(sq, &UPoly::from_monomial(mono.clone()));
                for mm in &img.0 {
                    if let Some(&i) = target.get(mm) {
                        m.set(i, j, true);
                    }
                }
            }
        }
        m
    };
    let q_matrix = |d: i64, op: usize| -> F2Matrix {
        match op {
            0 => op_matrix(d, 1),
            _ => {
                let a = op_matrix(d + 2, 1).mul(&op_matrix(d, 2));
                let b = op_matrix(d + 1, 2).mul(&op_matrix(d, 1));
                a.add(&b)
            }
        }
    };

    let mut quotient_free = true;
    let mut first_homology_failure = None;
    let mut ambient_q_dims: [BTreeMap<i64, usize>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for (op, shift) in [(0usize, 1i64), (1usize, 3i64)] {
        for d in 0..=checked_up_to {
            let qd = q_matrix(d, op);
            let q_prev = q_matrix(d - shift, op);
            let dim_v = dim_at(d);
            let w_d = &w_spans[&d];
            let empty_next = F2Matrix::zeros(0, dim_at(d + shift));
            let w_next = w_spans.get(&(d + shift)).unwrap_or(&empty_next);
            let w_rank_d = w_d.rank();
            let w_rank_next = w_next.rank();
            let q_rows_d = qd.transpose();
            let q_rows_prev = q_prev.transpose();
            let ker_bar = dim_v - (w_next.vstack(&q_rows_d).rank() - w_rank_next) - w_rank_d;
            let im_bar = w_d.vstack(&q_rows_prev).rank() - w_rank_d;
            let h_bar = ker_bar - im_bar;
            let h_ambient = dim_v - qd.rank() - q_prev.rank();
            if h_ambient > 0 {
                ambient_q_dims[op].insert(d, h_ambient);
            }
            if h_bar != 0 && quotient_free {
                quotient_free = false;
                first_homology_failure = Some((if op == 0 { "Q0" } else { "Q1" }, d));
            }
        }
    }

    let mut summand_q_dims: [BTreeMap<i64, usize>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for m in &summand_modules {
        for (op, which) in [(0usize, MargolisOp::Q0), (1usize, MargolisOp::Q1)] {
            for (d, n) in margolis_homology(m, which).dims {
                if d <= checked_up_to {
                    *summand_q_dims[op].entry(d).or_insert(0) += n;
                }
            }
        }
    }

    let ambient_dims: BTreeMap<i64, usize> = (0..=d_cap).map(|d| (d, dim_at(d))).collect();
    Ok(SplittingReport {
        degree_cap: d_cap,
        checked_up_to,
        summands,
        injective,
        first_injectivity_failure,
        quotient_free,
        first_homology_failure,
        ambient_dims,
        summand_dims,
        ambient_q_dims,
        summand_q_dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::margolis::{margolis_homology, wall_is_free, Freeness, MargolisOp};
    use crate::module::{is_isomorphic, quotient, IsoResult};

    fn small_ring() -> Ring {
        Ring::with_defaults(6).unwrap()
    }

    #[test]
    fn w_generator_action_table() {
        let ring = Ring::with_defaults(6).unwrap();
        // S(w0) = (w1, w0^2).
        assert_eq!(steenrod(1, ring.w(0)), ring.w(1).clone());
        assert_eq!(steenrod(2, ring.w(0)), ring.w(0).pow(2));
        // S(w1) = (0, w2 + w0 w1).
        assert!(steenrod(1, ring.w(1)).is_zero());
        assert_eq!(
            steenrod(2, ring.w(1)),
            ring.w(2).add(&ring.w(0).mul(ring.w(1)))
        );
        // S(w2) = (0, w0 w2).
        assert!(steenrod(1, ring.w(2)).is_zero());
        assert_eq!(steenrod(2, ring.w(2)), ring.w(0).mul(ring.w(2)));
        // S(wj) = (w_{j-1}^2, 0) for j >= 3.
        for j in 3..=6 {
            assert_eq!(steenrod(1, ring.w(j)), ring.w(j - 1).pow(2), "w{j}");
            assert!(steenrod(2, ring.w(j)).is_zero(), "w{j}");
        }
    }

    #[test]
    fn x_classes_satisfy_the_lemma() {
        let ring = small_ring();
        let c18 = ring.c18();
        assert!(!c18.is_zero());
        assert_eq!(c18.homogeneous_degree(), Some(18));
        assert!(steenrod(2, c18).is_zero());
        assert!(steenrod(2, ring.x(4)).is_zero());
        assert!(steenrod(1, c18).is_zero());
        for j in 5..=6 {
            assert_eq!(steenrod(1, ring.x(j)), ring.x(j - 1).pow(2), "x{j}");
            assert!(steenrod(2, ring.x(j)).is_zero(), "x{j}");
        }
        // x_j = u_j modulo decomposables: the single-letter monomial u_j
        // occurs in the expansion.
        for j in 4..=6 {
            assert!(ring.x(j).0.contains(&UMonomial::u(j)), "x{j}");
        }
    }

    #[test]
    fn binary_partition_recurrence_and_enumeration_agree() {
        // Oracle first: exhaustive enumeration of partitions into powers of
        // two, parts taken in nonincreasing order.
        fn enumerate(n: u64, max_part: u64) -> u64 {
            if n == 0 {
                return 1;
            }
            let mut total = 0;
            let mut part = 1u64;
            while part <= n && part <= max_part {
                total += enumerate(n - part, part);
                part <<= 1;
            }
            total
        }
        let table = binary_partitions_upto(32);
        for n in 0..=32usize {
            let expected = enumerate(n as u64, 1 << 62);
            assert_eq!(table[n], BigUint::from(expected), "b({n})");
        }
        assert_eq!(table[1], BigUint::from(1u32));
        assert_eq!(table[4], BigUint::from(4u32));
        assert_eq!(table[8], BigUint::from(10u32));
    }

    #[test]
    fn partition_congruences_mod_8() {
        let table = binary_partitions_upto(1 << 13);
        for k in 4..=16u32 {
            let b = &table[1usize << (k - 3)];
            let rem = b % BigUint::from(8u32);
            let expected = if k % 2 == 0 { 2u32 } else { 4u32 };
            assert_eq!(rem, BigUint::from(expected), "k = {k}");
        }
    }

    #[test]
    fn weighted_basis_counts_match_partitions() {
        for k in 4..=8u32 {
            let count = weighted_basis(k).len();
            assert_eq!(
                BigUint::from(count),
                binary_partitions(1usize << (k - 3)),
                "k = {k}"
            );
        }
    }

    #[test]
    fn ambient_m4_is_the_two_class_module() {
        let ring = small_ring();
        let a = build_ambient_mk(&ring, 4, true).unwrap();
        assert_eq!(a.module.dim(), 2);
        assert_eq!(a.module.dims_by_degree(), BTreeMap::from([(17, 1), (18, 1)]));
        a.module.validate().unwrap();
        // Sq1 x4 = c18 inside the module.
        assert_eq!(a.module.sq1().column(0).support(), vec![1]);
    }

    #[test]
    fn ambient_m5_and_m6_sizes() {
        let ring = small_ring();
        let a5 = build_ambient_mk(&ring, 5, true).unwrap();
        assert_eq!(a5.module.dim(), 4);
        a5.module.validate().unwrap();
        let a6 = build_ambient_mk(&ring, 6, true).unwrap();
        assert_eq!(a6.module.dim() % 8, 2);
        a6.module.validate().unwrap();
    }

    #[test]
    fn reduced_m4_m5_m6_match_templates() {
        let ring = small_ring();
        for k in 4..=6u32 {
            let mk = build_mk(&ring, k, false).unwrap();
            let suspended = mk.reduced().suspend(-(1i64 << k));
            let template = figure_mk(k).unwrap();
            match is_isomorphic(&suspended, &template, 1 << 20).unwrap() {
                IsoResult::Yes(_) => {}
                IsoResult::No => panic!("M{k} does not match its template"),
            }
            // Q0-free with the two expected Q1 classes.
            assert!(margolis_homology(mk.reduced(), MargolisOp::Q0).is_zero());
            let q1 = margolis_homology(mk.reduced(), MargolisOp::Q1);
            let (bottom, top) = mk_q1_degrees(k);
            assert_eq!(q1.degrees(), vec![bottom, top], "k = {k}");
        }
    }

    #[test]
    fn m4_and_m6_have_no_free_part() {
        let ring = small_ring();
        for k in [4u32, 5, 6] {
            let mk = build_mk(&ring, k, false).unwrap();
            assert_eq!(
                mk.splitting.free.dim(),
                0,
                "ambient module for k = {k} is already reduced"
            );
        }
    }

    #[test]
    fn figure_templates_validate_with_expected_homology() {
        for k in 4..=13u32 {
            let t = figure_mk(k).unwrap();
            t.validate().unwrap();
            assert!(margolis_homology(&t, MargolisOp::Q0).is_zero(), "k = {k}");
            let q1 = margolis_homology(&t, MargolisOp::Q1);
            let expected_top = 2 * k as i64 - 7;
            let expected = if k == 4 {
                vec![1, 2]
            } else {
                vec![2, expected_top]
            };
            assert_eq!(q1.degrees(), expected, "k = {k}");
            let rem = if k % 2 == 0 { 2 } else { 4 };
            assert_eq!(t.dim() % 8, rem, "k = {k}");
        }
    }

    #[test]
    fn joker_structure() {
        let u = build_joker();
        u.module.validate().unwrap();
        assert_eq!(
            u.module.dims_by_degree(),
            BTreeMap::from([(2, 1), (3, 1), (4, 1), (5, 1), (6, 1)])
        );
        let q1 = margolis_homology(&u.module, MargolisOp::Q1);
        assert_eq!(q1.degrees(), vec![4]);
        assert_eq!(q1.representatives[0].2, "u0^2");
        // The bottom class generates everything.
        let s = crate::module::submodule(&u.module, &[F2Vector::unit(5, 0)]);
        assert_eq!(s.module.dim(), 5);
    }

    #[test]
    fn n_structure_and_quotient() {
        let ring = small_ring();
        let n = build_n(&ring);
        n.module.validate().unwrap();
        assert_eq!(
            n.module.dims_by_degree(),
            BTreeMap::from([(5, 1), (7, 1), (8, 1), (9, 1), (10, 1)])
        );
        // Sq2 Sq3 w2 = Sq1 w3 = w2^2.
        let w2 = F2Vector::unit(5, 0);
        let sq3 = n.module.sq1().mul(n.module.sq2());
        let image = n.module.sq2().apply(&sq3.apply(&w2));
        assert_eq!(n.module.label_of(&image), "w2^2");
        let w3 = F2Vector::unit(5, 3);
        assert_eq!(n.module.label_of(&n.module.sq1().apply(&w3)), "w2^2");
        // N / (submodule generated by w2) is one-dimensional in degree 9.
        let sub = crate::module::submodule(&n.module, &[w2]);
        assert_eq!(sub.module.dim(), 4);
        let q = quotient(&n.module, &sub.inclusion).unwrap();
        assert_eq!(q.module.dims_by_degree(), BTreeMap::from([(9, 1)]));
    }

    #[test]
    fn g_and_p_structure() {
        let g3 = build_g(3, DEFAULT_DEGREE_CAP).unwrap();
        g3.module.validate().unwrap();
        assert_eq!(
            g3.module.dims_by_degree(),
            BTreeMap::from([(33, 1), (34, 1), (36, 1)])
        );
        // Sq2 Sq1 u5 = u3^4 and nothing else acts.
        let top = g3.module.sq2().mul(g3.module.sq1());
        assert_eq!(top.column(0).support(), vec![2]);
        assert!(g3.module.sq2().column(0).is_zero());

        let p3 = build_p(3, DEFAULT_DEGREE_CAP).unwrap();
        p3.validate().unwrap();
        assert!(margolis_homology(&p3, MargolisOp::Q1).is_zero());
    }

    #[test]
    fn p_quotient_by_g_is_one_dimensional() {
        let p3 = build_p(3, DEFAULT_DEGREE_CAP).unwrap();
        // The submodule generated by the degree-33 class is G_3.
        let g_inside = crate::module::submodule(&p3, &[F2Vector::unit(4, 1)]);
        assert_eq!(g_inside.module.dim(), 3);
        let q = quotient(&p3, &g_inside.inclusion).unwrap();
        assert_eq!(q.module.dims_by_degree(), BTreeMap::from([(31, 1)]));
    }

    #[test]
    fn m4_tensor_p3_is_free_by_wall() {
        let ring = small_ring();
        let m4 = build_mk(&ring, 4, false).unwrap();
        let p3 = build_p(3, DEFAULT_DEGREE_CAP).unwrap();
        let t = m4.reduced().tensor(&p3);
        t.validate().unwrap();
        match wall_is_free(&t) {
            Freeness::Free { generators } => {
                assert_eq!(generators.len(), t.dim() / 8);
            }
            Freeness::NotFree { label, .. } => panic!("expected free module, witness {label}"),
        }
    }

    #[test]
    fn kunneth_for_q1_homology() {
        let ring = small_ring();
        let cases = [
            (build_joker().module, build_joker().module),
            (build_joker().module, build_mk(&ring, 4, false).unwrap().reduced().clone()),
            (build_n(&ring).module, build_g(3, DEFAULT_DEGREE_CAP).unwrap().module),
        ];
        for (a, b) in cases {
            let t = a.tensor(&b);
            let ha = margolis_homology(&a, MargolisOp::Q1).dims;
            let hb = margolis_homology(&b, MargolisOp::Q1).dims;
            let ht = margolis_homology(&t, MargolisOp::Q1).dims;
            let mut expected: BTreeMap<i64, usize> = BTreeMap::new();
            for (&da, &na) in &ha {
                for (&db, &nb) in &hb {
                    *expected.entry(da + db).or_insert(0) += na * nb;
                }
            }
            assert_eq!(ht, expected);
        }
    }

    #[test]
    fn mz_with_no_indices_is_mk() {
        let ring = small_ring();
        let direct = build_mk(&ring, 4, false).unwrap();
        let z = build_mk_z(&ring, 4, &[], false).unwrap();
        assert_eq!(z.module.dims_by_degree(), direct.reduced().dims_by_degree());
    }

    #[test]
    fn m4_z3_q1_classes_shift_by_u4_squared() {
        let ring = small_ring();
        let z = build_mk_z(&ring, 4, &[3], false).unwrap();
        z.module.validate().unwrap();
        assert!(margolis_homology(&z.module, MargolisOp::Q0).is_zero());
        let q1 = margolis_homology(&z.module, MargolisOp::Q1);
        // |u4^2| = 34: the two classes of M4 move from 17, 18 to 51, 52.
        assert_eq!(q1.degrees(), vec![51, 52]);
    }

    #[test]
    fn mz_rejects_bad_indices() {
        let ring = small_ring();
        assert!(matches!(
            build_mk_z(&ring, 5, &[3], false),
            Err(BuildError::ParamRange { .. })
        ));
        assert!(matches!(
            build_mk_z(&ring, 4, &[4, 4], false),
            Err(BuildError::ParamRange { .. })
        ));
    }

    #[test]
    fn nu_is_reduced_and_nonempty() {
        let ring = small_ring();
        let nu = build_nu(&ring);
        nu.module.validate().unwrap();
        assert!(nu.module.dim() > 0);
        assert_eq!(nu.module.dim() + 8 * ((25 - nu.module.dim()) / 8), 25);
        let again = split_reduced(&nu.module);
        assert_eq!(again.free.dim(), 0);
    }

    #[test]
    fn splitting_check_passes_at_degree_twenty() {
        let report = verify_splitting(20).unwrap();
        assert!(report.injective, "{:?}", report.first_injectivity_failure);
        assert!(report.quotient_free, "{:?}", report.first_homology_failure);
    }
}

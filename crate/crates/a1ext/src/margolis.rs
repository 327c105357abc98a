//! Margolis homology for the Milnor primitives Q0 = Sq1 and
//! Q1 = Sq1 Sq2 + Sq2 Sq1, Wall's freeness criterion, and the splitting of a
//! finite A(1)-module into a reduced part plus a free part.

use crate::gf2::{F2Matrix, F2Vector};
use crate::module::{a1, BasisElem, GradedModule};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MargolisOp {
    Q0,
    Q1,
}

impl MargolisOp {
    pub fn shift(self) -> i64 {
        match self {
            MargolisOp::Q0 => 1,
            MargolisOp::Q1 => 3,
        }
    }

    pub fn matrix(self, m: &GradedModule) -> F2Matrix {
        match self {
            MargolisOp::Q0 => m.sq1().clone(),
            MargolisOp::Q1 => m.q1(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MargolisOp::Q0 => "Q0",
            MargolisOp::Q1 => "Q1",
        }
    }
}

/// Homology of a module with respect to one Margolis differential:
/// per-degree dimensions plus chosen cycle representatives.
#[derive(Clone, Debug)]
pub struct MargolisHomology {
    pub operator: MargolisOp,
    pub dims: BTreeMap<i64, usize>,
    /// `(degree, cycle vector in ambient coordinates, formal-sum label)`.
    pub representatives: Vec<(i64, F2Vector, String)>,
}

impl MargolisHomology {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.representatives.iter().map(|r| r.0).collect()
    }
}

fn block(m: &GradedModule, op: &F2Matrix, from: i64, shift: i64) -> F2Matrix {
    let cols = m.indices_in_degree(from);
    let rows = m.indices_in_degree(from + shift);
    let mut out = F2Matrix::zeros(rows.len(), cols.len());
    for (cj, j) in cols.clone().enumerate() {
        for i in op.column(j).support() {
            if rows.contains(&i) {
                out.set(i - rows.start, cj, true);
            }
        }
    }
    out
}

/// Add `v` to an echelon span; returns false when `v` was already in it.
fn span_insert(span: &mut Vec<F2Vector>, v: &F2Vector) -> bool {
    let mut v = v.clone();
    for row in span.iter() {
        let lead = row.first_one().unwrap();
        if v.get(lead) {
            v.xor_assign(row);
        }
    }
    if v.is_zero() {
        return false;
    }
    span.push(v);
    span.sort_by_key(|r| r.first_one().unwrap());
    true
}

/// Homology of the differential Q0 or Q1, degree by degree. Representatives
/// are kernel vectors independent modulo boundaries, taken in kernel-basis
/// (pivot) order.
pub fn margolis_homology(m: &GradedModule, which: MargolisOp) -> MargolisHomology {
    let op = which.matrix(m);
    let shift = which.shift();
    let mut dims = BTreeMap::new();
    let mut representatives = Vec::new();
    let degrees: Vec<i64> = m.dims_by_degree().keys().copied().collect();
    for d in degrees {
        let range = m.indices_in_degree(d);
        let out_block = block(m, &op, d, shift);
        let in_block = block(m, &op, d - shift, shift);
        let cycles = out_block.kernel_basis();
        let mut span: Vec<F2Vector> = Vec::new();
        for c in 0..in_block.cols() {
            span_insert(&mut span, &in_block.column(c));
        }
        let mut h = 0;
        for r in 0..cycles.rows() {
            let row = cycles.row(r);
            if span_insert(&mut span, &row) {
                h += 1;
                let mut full = F2Vector::zeros(m.dim());
                for i in row.support() {
                    full.set(range.start + i, true);
                }
                let label = m.label_of(&full);
                representatives.push((d, full, label));
            }
        }
        if h > 0 {
            dims.insert(d, h);
        }
    }
    MargolisHomology {
        operator: which,
        dims,
        representatives,
    }
}

/// Outcome of the Wall freeness test.
#[derive(Clone, Debug)]
pub enum Freeness {
    /// Free, with a minimal generating set `(degree, vector)`.
    Free { generators: Vec<(i64, F2Vector)> },
    /// Not free; a nonzero Margolis homology class witnesses it.
    NotFree {
        operator: MargolisOp,
        degree: i64,
        witness: F2Vector,
        label: String,
    },
}

impl Freeness {
    pub fn is_free(&self) -> bool {
        matches!(self, Freeness::Free { .. })
    }
}

/// A finite A(1)-module is free exactly when both Margolis homologies
/// vanish. On success the minimal generators (indecomposables) come back;
/// the top degree-6 element of A(1) acts nontrivially on each of them.
pub fn wall_is_free(m: &GradedModule) -> Freeness {
    for which in [MargolisOp::Q0, MargolisOp::Q1] {
        let h = margolis_homology(m, which);
        if let Some((degree, v, label)) = h.representatives.into_iter().next() {
            return Freeness::NotFree {
                operator: which,
                degree,
                witness: v,
                label,
            };
        }
    }
    Freeness::Free {
        generators: minimal_generators(m),
    }
}

/// Minimal generators of `m`: unit vectors completing the decomposable
/// subspace `Sq1 M + Sq2 M` degree by degree.
pub fn minimal_generators(m: &GradedModule) -> Vec<(i64, F2Vector)> {
    let mut out = Vec::new();
    let degrees: Vec<i64> = m.dims_by_degree().keys().copied().collect();
    for d in degrees {
        let range = m.indices_in_degree(d);
        let mut rows: Vec<F2Vector> = Vec::new();
        for (op, shift) in [(m.sq1(), 1i64), (m.sq2(), 2i64)] {
            for j in m.indices_in_degree(d - shift) {
                let img = op.column(j);
                let mut v = F2Vector::zeros(range.len());
                for i in img.support() {
                    debug_assert!(range.contains(&i));
                    v.set(i - range.start, true);
                }
                rows.push(v);
            }
        }
        let span = F2Matrix::from_rows(range.len(), &rows);
        let pivots = span.rref().pivots;
        let mut pivot_set = vec![false; range.len()];
        for &p in &pivots {
            pivot_set[p] = true;
        }
        for (k, &is_pivot) in pivot_set.iter().enumerate() {
            if !is_pivot {
                out.push((d, F2Vector::unit(m.dim(), range.start + k)));
            }
        }
    }
    out
}

/// A direct-sum decomposition `m = reduced (+) free` with all four witness
/// maps. Inclusions are columns in `m` coordinates; projections are the
/// matching rows of the inverse change of basis, so
/// `proj_reduced . incl_reduced = id` and
/// `incl_reduced . proj_reduced + incl_free . proj_free = id`.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub reduced: GradedModule,
    pub free: GradedModule,
    pub incl_reduced: F2Matrix,
    pub incl_free: F2Matrix,
    pub proj_reduced: F2Matrix,
    pub proj_free: F2Matrix,
    /// Degrees of the free cyclic summands, in strip order.
    pub free_generator_degrees: Vec<i64>,
}

/// Split off free cyclic summands until none remain.
///
/// Each round finds the first basis element `x` (lowest degree, then basis
/// order) of the current complement on which the top degree-6 element of
/// A(1) acts nontrivially, splits off `A(1)x` by solving for an equivariant
/// projection (free A(1)-modules are injective, so one exists), and replaces
/// the complement by the projection kernel. The fixed point is the reduced
/// part.
pub fn split_reduced(m: &GradedModule) -> Splitting {
    let n = m.dim();
    let mut inclusion = F2Matrix::identity(n);
    let mut current = m.clone();
    let mut free_gens: Vec<(i64, Vec<F2Vector>)> = Vec::new();

    loop {
        let top = current.top6();
        let Some(x) = (0..current.dim()).find(|&j| !top.column(j).is_zero()) else {
            break;
        };
        let dx = current.degree(x);
        let word_vectors = cyclic_word_vectors(&current, x);
        let pi = solve_equivariant_projection(&current, dx, &word_vectors);
        // Kernel of the projection, degree by degree, is the new complement.
        let mut new_cols: Vec<F2Vector> = Vec::new();
        let degrees: Vec<i64> = current.dims_by_degree().keys().copied().collect();
        for d in degrees {
            let crange = current.indices_in_degree(d);
            let words: Vec<usize> = (0..a1::DIM).filter(|&w| dx + a1::DEG[w] == d).collect();
            let mut blk = F2Matrix::zeros(words.len(), crange.len());
            for (cj, j) in crange.clone().enumerate() {
                for (fi, &w) in words.iter().enumerate() {
                    if pi.get(w, j) {
                        blk.set(fi, cj, true);
                    }
                }
            }
            let ker = blk.kernel_basis();
            for r in 0..ker.rows() {
                let mut v = F2Vector::zeros(current.dim());
                for i in ker.row(r).support() {
                    v.set(crange.start + i, true);
                }
                new_cols.push(v);
            }
        }
        let kmat = F2Matrix::from_columns(current.dim(), &new_cols);
        assert_eq!(kmat.cols() + a1::DIM, current.dim());
        let stripped: Vec<F2Vector> = word_vectors.iter().map(|v| inclusion.apply(v)).collect();
        free_gens.push((dx, stripped));
        let sq1 = kmat
            .solve_matrix(&current.sq1().mul(&kmat))
            .expect("projection kernel closed under Sq1");
        let sq2 = kmat
            .solve_matrix(&current.sq2().mul(&kmat))
            .expect("projection kernel closed under Sq2");
        let basis: Vec<BasisElem> = (0..kmat.cols())
            .map(|j| BasisElem {
                label: format!("c{j}"),
                degree: current.degree(kmat.column(j).first_one().unwrap()),
            })
            .collect();
        inclusion = inclusion.mul(&kmat);
        current = GradedModule::new(basis, sq1, sq2);
    }

    let reduced_basis: Vec<BasisElem> = (0..current.dim())
        .map(|j| BasisElem {
            label: m.label_of(&inclusion.column(j)),
            degree: current.degree(j),
        })
        .collect();
    let reduced = GradedModule::new(reduced_basis, current.sq1().clone(), current.sq2().clone());

    // Free part: one cyclic summand per stripped generator, basis sorted by
    // degree so it forms a valid module; inclusion columns match.
    let gen_degrees: Vec<i64> = free_gens.iter().map(|g| g.0).collect();
    let mut order: Vec<(usize, usize)> = free_gens
        .iter()
        .enumerate()
        .flat_map(|(g, _)| (0..a1::DIM).map(move |w| (g, w)))
        .collect();
    order.sort_by_key(|&(g, w)| (free_gens[g].0 + a1::DEG[w], g, w));
    let mut place = vec![[0usize; a1::DIM]; free_gens.len()];
    for (new, &(g, w)) in order.iter().enumerate() {
        place[g][w] = new;
    }
    let free_basis: Vec<BasisElem> = order
        .iter()
        .map(|&(g, w)| BasisElem {
            label: if w == 0 {
                format!("f{g}")
            } else {
                format!("{}.f{g}", a1::NAME[w])
            },
            degree: free_gens[g].0 + a1::DEG[w],
        })
        .collect();
    let fdim = free_basis.len();
    let mut fsq1 = F2Matrix::zeros(fdim, fdim);
    let mut fsq2 = F2Matrix::zeros(fdim, fdim);
    for g in 0..free_gens.len() {
        for w in 0..a1::DIM {
            if let Some(t) = a1::LMUL_SQ1[w] {
                fsq1.set(place[g][t], place[g][w], true);
            }
            if let Some(t) = a1::LMUL_SQ2[w] {
                fsq2.set(place[g][t], place[g][w], true);
            }
        }
    }
    let free = GradedModule::new(free_basis, fsq1, fsq2);
    let mut free_cols: Vec<F2Vector> = vec![F2Vector::zeros(n); fdim];
    for (g, (_, vectors)) in free_gens.iter().enumerate() {
        for (w, v) in vectors.iter().enumerate() {
            free_cols[place[g][w]] = v.clone();
        }
    }
    let incl_free = F2Matrix::from_columns(n, &free_cols);

    let k = reduced.dim();
    let mut all_cols: Vec<F2Vector> = Vec::with_capacity(n);
    for j in 0..k {
        all_cols.push(inclusion.column(j));
    }
    for j in 0..fdim {
        all_cols.push(incl_free.column(j));
    }
    let change = F2Matrix::from_columns(n, &all_cols);
    let inverse = change
        .inverse()
        .expect("reduced and free parts span the module");
    let mut proj_reduced = F2Matrix::zeros(k, n);
    let mut proj_free = F2Matrix::zeros(fdim, n);
    for c in 0..n {
        for r in 0..k {
            if inverse.get(r, c) {
                proj_reduced.set(r, c, true);
            }
        }
        for r in 0..fdim {
            if inverse.get(k + r, c) {
                proj_free.set(r, c, true);
            }
        }
    }
    Splitting {
        reduced,
        free,
        incl_reduced: inclusion,
        incl_free,
        proj_reduced,
        proj_free,
        free_generator_degrees: gen_degrees,
    }
}

/// The 8 vectors `w . x` for the A(1) basis words, in word order.
fn cyclic_word_vectors(m: &GradedModule, x: usize) -> Vec<F2Vector> {
    let e = F2Vector::unit(m.dim(), x);
    let s1 = |v: &F2Vector| m.sq1().apply(v);
    let s2 = |v: &F2Vector| m.sq2().apply(v);
    let v1 = s1(&e);
    let v2 = s2(&e);
    let v3 = s1(&v2);
    let v4 = s2(&v1);
    let v5 = s1(&v4);
    let v6 = s2(&v3);
    let v7 = s2(&s2(&v2));
    let vectors = vec![e, v1, v2, v3, v4, v5, v6, v7];
    assert_eq!(
        F2Matrix::from_columns(m.dim(), &vectors).rank(),
        a1::DIM,
        "cyclic module on a top-surviving element must be free"
    );
    vectors
}

/// Solve for an A(1)-equivariant projection of `m` onto the cyclic free
/// summand spanned by `word_vectors`: a matrix from `m` to the free module
/// on one generator in degree `dx`, with basis in word order, restricting to
/// the identity on the summand.
fn solve_equivariant_projection(
    m: &GradedModule,
    dx: i64,
    word_vectors: &[F2Vector],
) -> F2Matrix {
    let mut vars: Vec<(usize, usize)> = Vec::new();
    let mut lookup: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for w in 0..a1::DIM {
        for c in m.indices_in_degree(dx + a1::DEG[w]) {
            lookup.insert((w, c), vars.len());
            vars.push((w, c));
        }
    }
    let nv = vars.len();
    let mut rows: Vec<F2Vector> = Vec::new();
    let mut rhs: Vec<bool> = Vec::new();
    // Equivariance: pi(Sq^i v) + Sq^i pi(v) = 0 on every basis column whose
    // degree interacts with the 7-degree window of the free summand.
    for (op, lmul, shift) in [
        (m.sq1(), &a1::LMUL_SQ1, 1i64),
        (m.sq2(), &a1::LMUL_SQ2, 2i64),
    ] {
        for c in 0..m.dim() {
            let d = m.degree(c);
            if d + shift < dx || d > dx + 6 {
                continue;
            }
            for w_out in 0..a1::DIM {
                if dx + a1::DEG[w_out] != d + shift {
                    continue;
                }
                let mut row = F2Vector::zeros(nv);
                for t in op.column(c).support() {
                    if let Some(&v) = lookup.get(&(w_out, t)) {
                        row.set(v, !row.get(v));
                    }
                }
                for w_in in 0..a1::DIM {
                    if lmul[w_in] == Some(w_out) {
                        if let Some(&v) = lookup.get(&(w_in, c)) {
                            row.set(v, !row.get(v));
                        }
                    }
                }
                if !row.is_zero() {
                    rows.push(row);
                    rhs.push(false);
                }
            }
        }
    }
    // Identity on the summand: pi(w . x) = w for every word.
    for (w_target, vec) in word_vectors.iter().enumerate() {
        for w_out in 0..a1::DIM {
            if a1::DEG[w_out] != a1::DEG[w_target] {
                continue;
            }
            let mut row = F2Vector::zeros(nv);
            for c in vec.support() {
                let v = lookup[&(w_out, c)];
                row.set(v, !row.get(v));
            }
            rows.push(row);
            rhs.push(w_out == w_target);
        }
    }
    let system = F2Matrix::from_rows(nv, &rows);
    let mut b = F2Vector::zeros(rows.len());
    for (i, &bit) in rhs.iter().enumerate() {
        if bit {
            b.set(i, true);
        }
    }
    let solution = system
        .solve(&b)
        .expect("equivariant projection exists: free A(1)-modules are injective");
    let mut pi = F2Matrix::zeros(a1::DIM, m.dim());
    for v in solution.support() {
        let (w, c) = vars[v];
        pi.set(w, c, true);
    }
    debug_assert!(word_vectors
        .iter()
        .enumerate()
        .all(|(w, vec)| pi.apply(vec) == F2Vector::unit(a1::DIM, w)));
    pi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::GradedModule;

    fn joker() -> GradedModule {
        GradedModule::from_pairs(
            vec![
                ("u0".into(), 2),
                ("u1".into(), 3),
                ("u0^2".into(), 4),
                ("u2".into(), 5),
                ("u1^2".into(), 6),
            ],
            &[(0, 1), (3, 4)],
            &[(0, 2), (1, 3), (2, 4)],
        )
    }

    #[test]
    fn free_module_has_no_margolis_homology() {
        let free = GradedModule::free(&[0, 5]);
        for which in [MargolisOp::Q0, MargolisOp::Q1] {
            let h = margolis_homology(&free, which);
            assert!(h.is_zero(), "{which:?} homology should vanish");
        }
        match wall_is_free(&free) {
            Freeness::Free { generators } => {
                assert_eq!(generators.len(), 2);
                assert_eq!(generators[0].0, 0);
                assert_eq!(generators[1].0, 5);
                // The top element acts nontrivially on every generator.
                let top = free.top6();
                for (_, g) in &generators {
                    assert!(!top.apply(g).is_zero());
                }
            }
            Freeness::NotFree { .. } => panic!("free module reported not free"),
        }
    }

    #[test]
    fn joker_q1_homology_is_the_square_class() {
        let u = joker();
        u.validate().unwrap();
        let h = margolis_homology(&u, MargolisOp::Q1);
        assert_eq!(h.dims, BTreeMap::from([(4, 1)]));
        assert_eq!(h.representatives[0].2, "u0^2");
        match wall_is_free(&u) {
            Freeness::NotFree {
                operator,
                degree,
                label,
                ..
            } => {
                assert_eq!(operator, MargolisOp::Q0);
                // Q0 homology of the Joker is also u0^2, in degree 4.
                assert_eq!(degree, 4);
                assert_eq!(label, "u0^2");
            }
            Freeness::Free { .. } => panic!("the Joker is not free"),
        }
    }

    #[test]
    fn split_reduced_is_identity_on_reduced_input() {
        let u = joker();
        let s = split_reduced(&u);
        assert_eq!(s.reduced.dim(), 5);
        assert_eq!(s.free.dim(), 0);
        assert!(s.free_generator_degrees.is_empty());
    }

    #[test]
    fn split_reduced_strips_a_free_module_completely() {
        let free = GradedModule::free(&[0, 0, 3]);
        let s = split_reduced(&free);
        assert_eq!(s.reduced.dim(), 0);
        assert_eq!(s.free.dim(), 24);
        assert_eq!(s.free_generator_degrees, vec![0, 0, 3]);
        s.free.validate().unwrap();
    }

    #[test]
    fn split_reduced_witness_maps_decompose_identity() {
        let mixed = GradedModule::free(&[1]).direct_sum(&joker().suspend(-2));
        let s = split_reduced(&mixed);
        assert_eq!(s.reduced.dim(), 5);
        assert_eq!(s.free.dim(), 8);
        // proj . incl = id on each factor.
        assert_eq!(
            s.proj_reduced.mul(&s.incl_reduced),
            crate::gf2::F2Matrix::identity(s.reduced.dim())
        );
        assert_eq!(
            s.proj_free.mul(&s.incl_free),
            crate::gf2::F2Matrix::identity(s.free.dim())
        );
        // incl_red . proj_red + incl_free . proj_free = id.
        let total = s
            .incl_reduced
            .mul(&s.proj_reduced)
            .add(&s.incl_free.mul(&s.proj_free));
        assert_eq!(total, crate::gf2::F2Matrix::identity(mixed.dim()));
        // Margolis homology is carried entirely by the reduced part.
        for which in [MargolisOp::Q0, MargolisOp::Q1] {
            assert_eq!(
                margolis_homology(&mixed, which).dims,
                margolis_homology(&s.reduced, which).dims
            );
        }
        // Stripping again is a fixed point.
        let again = split_reduced(&s.reduced);
        assert_eq!(again.free.dim(), 0);
    }

    #[test]
    fn split_preserves_per_degree_dimensions() {
        let m = GradedModule::free(&[2]).direct_sum(&joker());
        let s = split_reduced(&m);
        for (d, n) in m.dims_by_degree() {
            assert_eq!(
                n,
                s.reduced.dim_in_degree(d) + s.free.dim_in_degree(d),
                "degree {d}"
            );
        }
    }
}

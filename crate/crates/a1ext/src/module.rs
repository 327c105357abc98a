//! Finite graded modules over A(1), the subalgebra of the mod-2 Steenrod
//! algebra generated by Sq1 and Sq2.
//!
//! A module is an ordered graded basis together with the two action matrices.
//! Both defining relations (Sq1 Sq1 = 0 and Sq2 Sq2 = Sq1 Sq2 Sq1) are checked
//! by [`GradedModule::validate`], which every constructor in this crate is
//! expected to satisfy.

use crate::gf2::{F2Matrix, F2Vector};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ops::Range;
use thiserror::Error;

/// The algebra A(1) on its 8-element basis of composites, in degree order:
/// `1, Sq1, Sq2, Sq1Sq2, Sq2Sq1, Sq1Sq2Sq1, Sq2Sq1Sq2, Sq2Sq2Sq2`.
///
/// `Sq1Sq2` means "apply Sq2 first"; the degree-6 top element equals both
/// `Sq1Sq2Sq1Sq2` and `Sq2Sq1Sq2Sq1`, written here as `Sq2Sq2Sq2`.
pub mod a1 {
    pub const DIM: usize = 8;
    pub const DEG: [i64; 8] = [0, 1, 2, 3, 3, 4, 5, 6];
    pub const NAME: [&str; 8] = [
        "1",
        "Sq1",
        "Sq2",
        "Sq1Sq2",
        "Sq2Sq1",
        "Sq1Sq2Sq1",
        "Sq2Sq1Sq2",
        "Sq2Sq2Sq2",
    ];
    /// Left multiplication by Sq1 on the basis; `None` is zero.
    pub const LMUL_SQ1: [Option<usize>; 8] = [
        Some(1),
        None,
        Some(3),
        None,
        Some(5),
        None,
        Some(7),
        None,
    ];
    /// Left multiplication by Sq2 on the basis; `None` is zero.
    pub const LMUL_SQ2: [Option<usize>; 8] = [
        Some(2),
        Some(4),
        Some(5),
        Some(6),
        None,
        Some(7),
        None,
        None,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub label: String,
    pub degree: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("Sq{power}({label}) in degree {degree} has a component in degree {found}, expected {expected}")]
    WrongDegree {
        power: u8,
        label: String,
        degree: i64,
        found: i64,
        expected: i64,
    },
    #[error("Sq1 Sq1 ({label}) is nonzero: hits {hit}")]
    Sq1Square { label: String, hit: String },
    #[error("Sq2 Sq2 ({label}) differs from Sq1 Sq2 Sq1 ({label}): difference hits {hit}")]
    AdemSq2 { label: String, hit: String },
}

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error("subspace is not closed under the action: Sq{power} image of column {column} leaves the span")]
    NotActionClosed { power: u8, column: usize },
    #[error("isomorphism search exceeded the budget of {budget} candidates")]
    SearchBudget { budget: u64 },
}

/// A finite graded A(1)-module: ordered basis sorted by degree, plus the two
/// action matrices (columns are inputs, rows outputs).
#[derive(Clone, PartialEq, Eq)]
pub struct GradedModule {
    basis: Vec<BasisElem>,
    sq1: F2Matrix,
    sq2: F2Matrix,
    degree_index: BTreeMap<i64, Range<usize>>,
}

impl std::fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GradedModule(dim {}", self.dim())?;
        if let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) {
            write!(f, ", degrees {lo}..={hi}")?;
        }
        write!(f, ")")
    }
}

fn degree_ranges(basis: &[BasisElem]) -> BTreeMap<i64, Range<usize>> {
    let mut map = BTreeMap::new();
    let mut i = 0;
    while i < basis.len() {
        let d = basis[i].degree;
        let start = i;
        while i < basis.len() && basis[i].degree == d {
            i += 1;
        }
        map.insert(d, start..i);
    }
    map
}

impl GradedModule {
    /// Assemble from a degree-sorted basis and full action matrices.
    ///
    /// # Panics
    ///
    /// Panics if the basis is not sorted by degree or the matrix shapes do
    /// not match.
    pub fn new(basis: Vec<BasisElem>, sq1: F2Matrix, sq2: F2Matrix) -> Self {
        assert!(
            basis.windows(2).all(|w| w[0].degree <= w[1].degree),
            "basis must be sorted by degree"
        );
        let n = basis.len();
        assert_eq!((sq1.rows(), sq1.cols()), (n, n));
        assert_eq!((sq2.rows(), sq2.cols()), (n, n));
        let degree_index = degree_ranges(&basis);
        GradedModule {
            basis,
            sq1,
            sq2,
            degree_index,
        }
    }

    /// Assemble from labelled degrees and sparse action pairs
    /// `(from, to)`, sorting the basis stably by degree and remapping the
    /// pairs accordingly.
    pub fn from_pairs(
        basis: Vec<(String, i64)>,
        sq1_pairs: &[(usize, usize)],
        sq2_pairs: &[(usize, usize)],
    ) -> Self {
        let n = basis.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| basis[i].1);
        let mut place = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            place[old] = new;
        }
        let sorted: Vec<BasisElem> = order
            .iter()
            .map(|&i| BasisElem {
                label: basis[i].0.clone(),
                degree: basis[i].1,
            })
            .collect();
        let mut sq1 = F2Matrix::zeros(n, n);
        for &(from, to) in sq1_pairs {
            sq1.set(place[to], place[from], true);
        }
        let mut sq2 = F2Matrix::zeros(n, n);
        for &(from, to) in sq2_pairs {
            sq2.set(place[to], place[from], true);
        }
        Self::new(sorted, sq1, sq2)
    }

    pub fn zero() -> Self {
        Self::new(Vec::new(), F2Matrix::zeros(0, 0), F2Matrix::zeros(0, 0))
    }

    /// One-dimensional module with trivial action.
    pub fn trivial(degree: i64) -> Self {
        Self::from_pairs(vec![("iota".to_string(), degree)], &[], &[])
    }

    /// Free module on generators of the given degrees.
    pub fn free(gen_degrees: &[i64]) -> Self {
        let mut basis = Vec::new();
        let mut sq1_pairs = Vec::new();
        let mut sq2_pairs = Vec::new();
        for (g, &d) in gen_degrees.iter().enumerate() {
            let base = g * a1::DIM;
            for w in 0..a1::DIM {
                let label = if w == 0 {
                    format!("g{g}")
                } else {
                    format!("{}.g{g}", a1::NAME[w])
                };
                basis.push((label, d + a1::DEG[w]));
                if let Some(t) = a1::LMUL_SQ1[w] {
                    sq1_pairs.push((base + w, base + t));
                }
                if let Some(t) = a1::LMUL_SQ2[w] {
                    sq2_pairs.push((base + w, base + t));
                }
            }
        }
        Self::from_pairs(basis, &sq1_pairs, &sq2_pairs)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn sq1(&self) -> &F2Matrix {
        &self.sq1
    }

    pub fn sq2(&self) -> &F2Matrix {
        &self.sq2
    }

    /// The Milnor primitive Q1 = Sq1 Sq2 + Sq2 Sq1 as a matrix.
    pub fn q1(&self) -> F2Matrix {
        self.sq1.mul(&self.sq2).add(&self.sq2.mul(&self.sq1))
    }

    /// The degree-6 top element of A(1), as the composite Sq2 Sq2 Sq2.
    pub fn top6(&self) -> F2Matrix {
        self.sq2.mul(&self.sq2).mul(&self.sq2)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.basis.first().map(|b| b.degree)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.basis.last().map(|b| b.degree)
    }

    pub fn indices_in_degree(&self, d: i64) -> Range<usize> {
        self.degree_index.get(&d).cloned().unwrap_or(0..0)
    }

    pub fn dim_in_degree(&self, d: i64) -> usize {
        self.indices_in_degree(d).len()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        self.degree_index
            .iter()
            .map(|(&d, r)| (d, r.len()))
            .collect()
    }

    /// Express a vector as a formal sum of basis labels.
    pub fn label_of(&self, v: &F2Vector) -> String {
        let support = v.support();
        if support.is_empty() {
            "0".to_string()
        } else {
            support
                .iter()
                .map(|&i| self.basis[i].label.as_str())
                .collect::<Vec<_>>()
                .join("+")
        }
    }

    /// Check the grading and both defining relations of A(1). Reports the
    /// first violation found, scanning basis elements in order.
    pub fn validate(&self) -> Result<(), ValidationError> {
        for (m, power) in [(&self.sq1, 1u8), (&self.sq2, 2u8)] {
            for j in 0..self.dim() {
                let expected = self.basis[j].degree + power as i64;
                for i in m.column(j).support() {
                    if self.basis[i].degree != expected {
                        return Err(ValidationError::WrongDegree {
                            power,
                            label: self.basis[j].label.clone(),
                            degree: self.basis[j].degree,
                            found: self.basis[i].degree,
                            expected,
                        });
                    }
                }
            }
        }
        let sq1sq1 = self.sq1.mul(&self.sq1);
        for j in 0..self.dim() {
            let col = sq1sq1.column(j);
            if !col.is_zero() {
                return Err(ValidationError::Sq1Square {
                    label: self.basis[j].label.clone(),
                    hit: self.label_of(&col),
                });
            }
        }
        let lhs = self.sq2.mul(&self.sq2);
        let rhs = self.sq1.mul(&self.sq2).mul(&self.sq1);
        let diff = lhs.add(&rhs);
        for j in 0..self.dim() {
            let col = diff.column(j);
            if !col.is_zero() {
                return Err(ValidationError::AdemSq2 {
                    label: self.basis[j].label.clone(),
                    hit: self.label_of(&col),
                });
            }
        }
        Ok(())
    }

    /// Shift all degrees by `d`; the action matrices are unchanged.
    pub fn suspend(&self, d: i64) -> GradedModule {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElem {
                label: b.label.clone(),
                degree: b.degree + d,
            })
            .collect();
        GradedModule::new(basis, self.sq1.clone(), self.sq2.clone())
    }

    /// Tensor product with the Cartan-formula action:
    /// `Sq1(x (x) y) = Sq1 x (x) y + x (x) Sq1 y` and
    /// `Sq2(x (x) y) = Sq2 x (x) y + Sq1 x (x) Sq1 y + x (x) Sq2 y`.
    pub fn tensor(&self, other: &GradedModule) -> GradedModule {
        self.tensor_with_order(other).0
    }

    /// Tensor product together with the `(left, right)` pair behind each
    /// basis position of the result.
    pub fn tensor_with_order(&self, other: &GradedModule) -> (GradedModule, Vec<(usize, usize)>) {
        let (na, nb) = (self.dim(), other.dim());
        let n = na * nb;
        let mut order: Vec<(usize, usize)> = Vec::with_capacity(n);
        for i in 0..na {
            for j in 0..nb {
                order.push((i, j));
            }
        }
        order.sort_by_key(|&(i, j)| (self.degree(i) + other.degree(j), i, j));
        let mut place = vec![0usize; n];
        for (new, &(i, j)) in order.iter().enumerate() {
            place[i * nb + j] = new;
        }
        let basis: Vec<BasisElem> = order
            .iter()
            .map(|&(i, j)| BasisElem {
                label: format!("{}(x){}", self.label(i), other.label(j)),
                degree: self.degree(i) + other.degree(j),
            })
            .collect();
        let mut sq1 = F2Matrix::zeros(n, n);
        let mut sq2 = F2Matrix::zeros(n, n);
        let toggle = |m: &mut F2Matrix, r: usize, c: usize| {
            let cur = m.get(r, c);
            m.set(r, c, !cur);
        };
        for &(i, j) in &order {
            let col = place[i * nb + j];
            for r in self.sq1.column(i).support() {
                toggle(&mut sq1, place[r * nb + j], col);
            }
            for r in other.sq1.column(j).support() {
                toggle(&mut sq1, place[i * nb + r], col);
            }
            for r in self.sq2.column(i).support() {
                toggle(&mut sq2, place[r * nb + j], col);
            }
            for r in other.sq2.column(j).support() {
                toggle(&mut sq2, place[i * nb + r], col);
            }
            for r1 in self.sq1.column(i).support() {
                for r2 in other.sq1.column(j).support() {
                    toggle(&mut sq2, place[r1 * nb + r2], col);
                }
            }
        }
        (GradedModule::new(basis, sq1, sq2), order)
    }

    /// Dual module: degrees negated, action matrices transposed. The antipode
    /// of A(1) fixes Sq1 and Sq2, so the plain transpose is the module
    /// structure on the dual.
    pub fn dual(&self) -> GradedModule {
        let n = self.dim();
        let rev = |i: usize| n - 1 - i;
        let basis: Vec<BasisElem> = (0..n)
            .map(|new| {
                let old = rev(new);
                BasisElem {
                    label: format!("{}*", self.basis[old].label),
                    degree: -self.basis[old].degree,
                }
            })
            .collect();
        let mut sq1 = F2Matrix::zeros(n, n);
        let mut sq2 = F2Matrix::zeros(n, n);
        for j in 0..n {
            for i in self.sq1.column(j).support() {
                sq1.set(rev(j), rev(i), true);
            }
            for i in self.sq2.column(j).support() {
                sq2.set(rev(j), rev(i), true);
            }
        }
        GradedModule::new(basis, sq1, sq2)
    }

    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        let (na, nb) = (self.dim(), other.dim());
        let mut entries: Vec<(String, i64)> = Vec::with_capacity(na + nb);
        for b in &self.basis {
            entries.push((format!("L.{}", b.label), b.degree));
        }
        for b in &other.basis {
            entries.push((format!("R.{}", b.label), b.degree));
        }
        let mut sq1_pairs = Vec::new();
        let mut sq2_pairs = Vec::new();
        for j in 0..na {
            for i in self.sq1.column(j).support() {
                sq1_pairs.push((j, i));
            }
            for i in self.sq2.column(j).support() {
                sq2_pairs.push((j, i));
            }
        }
        for j in 0..nb {
            for i in other.sq1.column(j).support() {
                sq1_pairs.push((na + j, na + i));
            }
            for i in other.sq2.column(j).support() {
                sq2_pairs.push((na + j, na + i));
            }
        }
        GradedModule::from_pairs(entries, &sq1_pairs, &sq2_pairs)
    }

    /// Per-degree dimensions of the homology of a square-zero operator given
    /// by `op` (degree shift `shift`). Used for Margolis fingerprints here;
    /// the full interface with representatives lives in [`crate::margolis`].
    pub(crate) fn operator_homology_dims(
        &self,
        op: &F2Matrix,
        shift: i64,
    ) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let block = |from: i64| -> F2Matrix {
            let cols = self.indices_in_degree(from);
            let rows = self.indices_in_degree(from + shift);
            let mut m = F2Matrix::zeros(rows.len(), cols.len());
            for (cj, j) in cols.clone().enumerate() {
                for i in op.column(j).support() {
                    if rows.contains(&i) {
                        m.set(i - rows.start, cj, true);
                    }
                }
            }
            m
        };
        for (&d, range) in &self.degree_index {
            let out_rank = block(d).rank();
            let in_rank = block(d - shift).rank();
            let h = range.len() - out_rank - in_rank;
            if h > 0 {
                out.insert(d, h);
            }
        }
        out
    }
}

/// A submodule presented by its inclusion into the ambient module.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub module: GradedModule,
    /// Columns are the images of the submodule basis in ambient coordinates.
    pub inclusion: F2Matrix,
}

/// A quotient presented by the projection from the ambient module.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: GradedModule,
    /// Rows are quotient coordinates of the ambient basis images.
    pub projection: F2Matrix,
}

/// Smallest graded action-closed subspace containing the given vectors
/// (inhomogeneous inputs are split into their homogeneous components).
/// The basis of the result is the canonical reduced echelon basis of the
/// span in each degree, labelled by formal sums of ambient labels.
pub fn submodule(m: &GradedModule, gens: &[F2Vector]) -> Submodule {
    let n = m.dim();
    // Per-degree echelon spans, keyed by degree.
    let mut spans: BTreeMap<i64, Vec<F2Vector>> = BTreeMap::new();
    let reduce = |span: &Vec<F2Vector>, v: &F2Vector| -> F2Vector {
        let mut v = v.clone();
        for row in span {
            let lead = row.first_one().unwrap();
            if v.get(lead) {
                v.xor_assign(row);
            }
        }
        v
    };
    let mut queue: Vec<(i64, F2Vector)> = Vec::new();
    for g in gens {
        assert_eq!(g.len(), n);
        let mut by_degree: BTreeMap<i64, F2Vector> = BTreeMap::new();
        for i in g.support() {
            by_degree
                .entry(m.degree(i))
                .or_insert_with(|| F2Vector::zeros(n))
                .set(i, true);
        }
        queue.extend(by_degree);
    }
    while let Some((d, v)) = queue.pop() {
        let span = spans.entry(d).or_default();
        let rem = reduce(span, &v);
        if rem.is_zero() {
            continue;
        }
        // Insert keeping rows ordered by leading index, then re-reduce rows
        // above so the span stays in reduced echelon form.
        let lead = rem.first_one().unwrap();
        let pos = span
            .iter()
            .position(|r| r.first_one().unwrap() > lead)
            .unwrap_or(span.len());
        span.insert(pos, rem.clone());
        for i in 0..span.len() {
            if i != pos && span[i].get(lead) {
                let fix = rem.clone();
                span[i].xor_assign(&fix);
            }
        }
        queue.push((d + 1, m.sq1().apply(&rem)));
        queue.push((d + 2, m.sq2().apply(&rem)));
    }
    let mut columns: Vec<F2Vector> = Vec::new();
    let mut basis: Vec<BasisElem> = Vec::new();
    for (&d, span) in &spans {
        for row in span {
            basis.push(BasisElem {
                label: m.label_of(row),
                degree: d,
            });
            columns.push(row.clone());
        }
    }
    let inclusion = F2Matrix::from_columns(n, &columns);
    let (sq1, sq2) = induced_action(m, &inclusion);
    Submodule {
        module: GradedModule::new(basis, sq1, sq2),
        inclusion,
    }
}

/// Action matrices induced on a subspace given by inclusion columns; the
/// span must be action-closed.
fn induced_action(m: &GradedModule, inclusion: &F2Matrix) -> (F2Matrix, F2Matrix) {
    let sq1 = inclusion
        .solve_matrix(&m.sq1().mul(inclusion))
        .expect("span not closed under Sq1");
    let sq2 = inclusion
        .solve_matrix(&m.sq2().mul(inclusion))
        .expect("span not closed under Sq2");
    (sq1, sq2)
}

/// Quotient of `m` by an action-closed subspace given by inclusion columns.
pub fn quotient(m: &GradedModule, inclusion: &F2Matrix) -> Result<Quotient, ModuleError> {
    let n = m.dim();
    assert_eq!(inclusion.rows(), n);
    for (power, op) in [(1u8, m.sq1()), (2u8, m.sq2())] {
        if inclusion.solve_matrix(&op.mul(inclusion)).is_none() {
            let column = (0..inclusion.cols())
                .find(|&c| inclusion.solve(&op.apply(&inclusion.column(c))).is_none())
                .unwrap_or(0);
            return Err(ModuleError::NotActionClosed { power, column });
        }
    }
    // Reduced echelon basis of the subspace, used to reduce ambient vectors
    // to their canonical complement coordinates.
    let rref = inclusion.transpose().rref();
    let sub_rows: Vec<F2Vector> = (0..rref.pivots.len()).map(|i| rref.reduced.row(i)).collect();
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; n];
        for &p in &rref.pivots {
            s[p] = true;
        }
        s
    };
    let complement: Vec<usize> = (0..n).filter(|&i| !pivot_set[i]).collect();
    let reduce = |v: &F2Vector| -> F2Vector {
        let mut v = v.clone();
        for (row, &p) in sub_rows.iter().zip(&rref.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    };
    let k = complement.len();
    let mut projection = F2Matrix::zeros(k, n);
    for j in 0..n {
        let reduced = reduce(&F2Vector::unit(n, j));
        for (qi, &ci) in complement.iter().enumerate() {
            if reduced.get(ci) {
                projection.set(qi, j, true);
            }
        }
    }
    let basis: Vec<BasisElem> = complement
        .iter()
        .map(|&i| BasisElem {
            label: format!("[{}]", m.label(i)),
            degree: m.degree(i),
        })
        .collect();
    // Induced action: project the action of a lifted representative.
    let mut lift = F2Matrix::zeros(n, k);
    for (qi, &ci) in complement.iter().enumerate() {
        lift.set(ci, qi, true);
    }
    let sq1 = projection.mul(&m.sq1().mul(&lift));
    let sq2 = projection.mul(&m.sq2().mul(&lift));
    Ok(Quotient {
        module: GradedModule::new(basis, sq1, sq2),
        projection,
    })
}

/// Outcome of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoResult {
    /// Witness is a degree-0 invertible matrix `f` with
    /// `f . sq = sq . f` for both operators, columns indexed by `a`.
    Yes(F2Matrix),
    No,
}

/// Basis of the space of degree-0 A(1)-maps `a -> b`.
pub fn hom_degree_zero(a: &GradedModule, b: &GradedModule) -> Vec<F2Matrix> {
    // Variables: entries of the per-degree blocks b_d x a_d.
    let mut var_index: Vec<(i64, usize, usize)> = Vec::new();
    for (&d, ra) in &a.degree_index {
        let rb = b.indices_in_degree(d);
        for bi in rb.clone() {
            for ai in ra.clone() {
                var_index.push((d, bi, ai));
            }
        }
    }
    let nv = var_index.len();
    let mut lookup: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (v, &(_, bi, ai)) in var_index.iter().enumerate() {
        lookup.insert((bi, ai), v);
    }
    // Equations: for each operator, each a-column x, each b-row y of the
    // appropriate degree: sum over phi entries of (phi o Sq - Sq o phi) = 0.
    let mut rows: Vec<F2Vector> = Vec::new();
    for (op_a, op_b, shift) in [(a.sq1(), b.sq1(), 1i64), (a.sq2(), b.sq2(), 2i64)] {
        for x in 0..a.dim() {
            let target_degree = a.degree(x) + shift;
            for y in b.indices_in_degree(target_degree) {
                let mut row = F2Vector::zeros(nv);
                // (phi . op_a)(x) component at y: sum over m in op_a(x) of phi[y, m].
                for mid in op_a.column(x).support() {
                    if let Some(&v) = lookup.get(&(y, mid)) {
                        let cur = row.get(v);
                        row.set(v, !cur);
                    }
                }
                // (op_b . phi)(x) component at y: sum over m with op_b[y, m] of phi[m, x].
                for m_b in 0..b.dim() {
                    if op_b.get(y, m_b) {
                        if let Some(&v) = lookup.get(&(m_b, x)) {
                            let cur = row.get(v);
                            row.set(v, !cur);
                        }
                    }
                }
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
    }
    let system = F2Matrix::from_rows(nv, &rows);
    let kernel = system.kernel_basis();
    let mut out = Vec::new();
    for r in 0..kernel.rows() {
        let coeffs = kernel.row(r);
        let mut phi = F2Matrix::zeros(b.dim(), a.dim());
        for v in coeffs.support() {
            let (_, bi, ai) = var_index[v];
            phi.set(bi, ai, true);
        }
        out.push(phi);
    }
    out
}

/// Exhaustive (budgeted) search for a degree-0 A(1)-isomorphism.
///
/// Cheap invariants go first: per-degree dimensions, then Q0/Q1 Margolis
/// homology dimensions. The remaining search enumerates the space of
/// equivariant maps and tests block invertibility degree by degree.
pub fn is_isomorphic(
    a: &GradedModule,
    b: &GradedModule,
    budget: u64,
) -> Result<IsoResult, ModuleError> {
    if a.dims_by_degree() != b.dims_by_degree() {
        return Ok(IsoResult::No);
    }
    if a.dim() == 0 {
        return Ok(IsoResult::Yes(F2Matrix::zeros(0, 0)));
    }
    for (qa, qb, shift) in [
        (a.sq1().clone(), b.sq1().clone(), 1i64),
        (a.q1(), b.q1(), 3i64),
    ] {
        if a.operator_homology_dims(&qa, shift) != b.operator_homology_dims(&qb, shift) {
            return Ok(IsoResult::No);
        }
    }
    let homs = hom_degree_zero(a, b);
    let r = homs.len();
    if r == 0 {
        return Ok(IsoResult::No);
    }
    if r < 64 && (1u64 << r) <= budget {
        // Small enough to sweep completely.
        for mask in 1u64..(1u64 << r) {
            if let Some(f) = assemble_invertible(a, &homs, mask) {
                return Ok(IsoResult::Yes(f));
            }
        }
        return Ok(IsoResult::No);
    }
    // Budgeted sweep: inconclusive exhaustion is an error, not a "no".
    let limit = budget;
    for mask in 1u64..=limit {
        if let Some(f) = assemble_invertible(a, &homs, mask) {
            return Ok(IsoResult::Yes(f));
        }
    }
    Err(ModuleError::SearchBudget { budget })
}

fn assemble_invertible(a: &GradedModule, homs: &[F2Matrix], mask: u64) -> Option<F2Matrix> {
    let mut f = F2Matrix::zeros(homs[0].rows(), homs[0].cols());
    for (i, h) in homs.iter().enumerate() {
        if i < 64 && mask >> i & 1 == 1 {
            f = f.add(h);
        }
    }
    // Degree-blockwise invertibility, cheapest blocks first by construction.
    for range in a.degree_index.values() {
        let k = range.len();
        let mut block = F2Matrix::zeros(k, k);
        for (cj, j) in range.clone().enumerate() {
            for i in f.column(j).support() {
                if range.contains(&i) {
                    block.set(i - range.start, cj, true);
                }
            }
        }
        if !block.is_invertible() {
            return None;
        }
    }
    Some(f)
}

/// On-disk JSON description of a graded module. Indices in `sq1`/`sq2` refer
/// to positions in `basis`; a pair `[from, to]` means the `to` component of
/// the action on basis element `from` is 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFile {
    pub basis: Vec<ModuleFileElem>,
    pub sq1: Vec<[usize; 2]>,
    pub sq2: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFileElem {
    pub label: String,
    pub degree: i64,
}

impl ModuleFile {
    pub fn from_module(m: &GradedModule) -> Self {
        let mut sq1 = Vec::new();
        let mut sq2 = Vec::new();
        for j in 0..m.dim() {
            for i in m.sq1().column(j).support() {
                sq1.push([j, i]);
            }
            for i in m.sq2().column(j).support() {
                sq2.push([j, i]);
            }
        }
        ModuleFile {
            basis: m
                .basis()
                .iter()
                .map(|b| ModuleFileElem {
                    label: b.label.clone(),
                    degree: b.degree,
                })
                .collect(),
            sq1,
            sq2,
        }
    }

    pub fn into_module(self) -> Result<GradedModule, ValidationError> {
        let basis: Vec<(String, i64)> = self.basis.into_iter().map(|b| (b.label, b.degree)).collect();
        let sq1: Vec<(usize, usize)> = self.sq1.iter().map(|p| (p[0], p[1])).collect();
        let sq2: Vec<(usize, usize)> = self.sq2.iter().map(|p| (p[0], p[1])).collect();
        let m = GradedModule::from_pairs(basis, &sq1, &sq2);
        m.validate()?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle for the size of A(1): formal words in Sq1, Sq2 of
    /// degree at most 6 modulo the two-sided ideal generated by the
    /// relations, computed with plain linear algebra over the word basis.
    fn a1_dims_by_word_enumeration() -> Vec<usize> {
        // Words over letters 1 (Sq1) and 2 (Sq2), total degree <= 6.
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut frontier: Vec<Vec<u8>> = vec![vec![]];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for letter in [1u8, 2u8] {
                    let mut w2 = w.clone();
                    w2.push(letter);
                    if w2.iter().map(|&l| l as i64).sum::<i64>() <= 6 {
                        next.push(w2);
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        words.sort();
        words.dedup();
        let index: BTreeMap<Vec<u8>, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let degree = |w: &[u8]| w.iter().map(|&l| l as i64).sum::<i64>();
        // Relation vectors: u . (11) . v = 0 and u . (22) . v = u . (121) . v.
        let mut relations: Vec<F2Vector> = Vec::new();
        for u in &words {
            for v in &words {
                let mut aa: Vec<u8> = u.clone();
                aa.extend([1, 1]);
                aa.extend(v.iter());
                if degree(&aa) <= 6 {
                    relations.push(F2Vector::unit(words.len(), index[&aa]));
                }
                let mut bb: Vec<u8> = u.clone();
                bb.extend([2, 2]);
                bb.extend(v.iter());
                if degree(&bb) <= 6 {
                    let mut aba: Vec<u8> = u.clone();
                    aba.extend([1, 2, 1]);
                    aba.extend(v.iter());
                    let mut rel = F2Vector::unit(words.len(), index[&bb]);
                    rel.set(index[&aba], !rel.get(index[&aba]));
                    relations.push(rel);
                }
            }
        }
        // Quotient dimensions per degree: relations are degree-homogeneous.
        (0..=6)
            .map(|d| {
                let in_degree: Vec<usize> = (0..words.len())
                    .filter(|&i| degree(&words[i]) == d)
                    .collect();
                let pos: BTreeMap<usize, usize> =
                    in_degree.iter().enumerate().map(|(k, &i)| (i, k)).collect();
                let rel_rows: Vec<F2Vector> = relations
                    .iter()
                    .filter(|r| r.support().iter().all(|i| pos.contains_key(i)))
                    .filter(|r| !r.is_zero())
                    .filter(|r| degree(&words[r.first_one().unwrap()]) == d)
                    .map(|r| {
                        let mut v = F2Vector::zeros(in_degree.len());
                        for i in r.support() {
                            v.set(pos[&i], true);
                        }
                        v
                    })
                    .collect();
                let rank = F2Matrix::from_rows(in_degree.len(), &rel_rows).rank();
                in_degree.len() - rank
            })
            .collect()
    }

    #[test]
    fn free_module_dims_match_word_enumeration() {
        assert_eq!(a1_dims_by_word_enumeration(), vec![1, 1, 1, 2, 1, 1, 1]);
        let free = GradedModule::free(&[0]);
        free.validate().unwrap();
        let dims: Vec<usize> = (0..=6).map(|d| free.dim_in_degree(d)).collect();
        assert_eq!(dims, vec![1, 1, 1, 2, 1, 1, 1]);
        assert_eq!(free.dim(), 8);
    }

    #[test]
    fn validate_rejects_sq1_square() {
        let m = GradedModule::from_pairs(
            vec![
                ("g".to_string(), 0),
                ("h".to_string(), 1),
                ("k".to_string(), 2),
            ],
            &[(0, 1), (1, 2)],
            &[],
        );
        match m.validate() {
            Err(ValidationError::Sq1Square { label, hit }) => {
                assert_eq!(label, "g");
                assert_eq!(hit, "k");
            }
            other => panic!("expected Sq1Square violation, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_wrong_degree() {
        let mut sq1 = F2Matrix::zeros(2, 2);
        sq1.set(1, 0, true);
        let m = GradedModule::new(
            vec![
                BasisElem {
                    label: "a".into(),
                    degree: 0,
                },
                BasisElem {
                    label: "b".into(),
                    degree: 5,
                },
            ],
            sq1,
            F2Matrix::zeros(2, 2),
        );
        assert!(matches!(
            m.validate(),
            Err(ValidationError::WrongDegree { power: 1, .. })
        ));
    }

    #[test]
    fn suspension_round_trip() {
        let m = GradedModule::free(&[0, 3]);
        assert_eq!(m.suspend(0), m);
        assert_eq!(m.suspend(5).suspend(-5), m);
        assert_eq!(m.suspend(7).min_degree(), Some(7));
    }

    #[test]
    fn tensor_with_unit_is_isomorphic() {
        let m = GradedModule::free(&[2]);
        let unit = GradedModule::trivial(0);
        let t = m.tensor(&unit);
        t.validate().unwrap();
        match is_isomorphic(&m, &t, 1 << 16).unwrap() {
            IsoResult::Yes(f) => {
                assert!(f.is_invertible());
                assert_eq!(f.mul(m.sq1()), t.sq1().mul(&f));
                assert_eq!(f.mul(m.sq2()), t.sq2().mul(&f));
            }
            IsoResult::No => panic!("tensor unit should be isomorphic"),
        }
    }

    #[test]
    fn tensor_of_free_validates() {
        let a = GradedModule::free(&[0]);
        let b = GradedModule::free(&[1]);
        let t = a.tensor(&b);
        t.validate().unwrap();
        assert_eq!(t.dim(), 64);
    }

    #[test]
    fn dual_of_trivial_and_double_dual() {
        let t = GradedModule::trivial(3);
        let d = t.dual();
        assert_eq!(d.min_degree(), Some(-3));
        let m = GradedModule::free(&[0, 2]);
        let dd = m.dual().dual();
        dd.validate().unwrap();
        match is_isomorphic(&m, &dd, 1 << 16).unwrap() {
            IsoResult::Yes(_) => {}
            IsoResult::No => panic!("double dual should be isomorphic"),
        }
    }

    #[test]
    fn dual_of_free_is_shifted_free() {
        // A(1) is Frobenius with top degree 6: the dual of a free module on
        // one degree-0 generator is free on one generator in degree -6.
        let free = GradedModule::free(&[0]);
        let dual = free.dual();
        dual.validate().unwrap();
        let expected = GradedModule::free(&[-6]);
        match is_isomorphic(&dual, &expected, 1 << 16).unwrap() {
            IsoResult::Yes(_) => {}
            IsoResult::No => panic!("dual of free should be free on a degree -6 generator"),
        }
    }

    #[test]
    fn submodule_of_whole_basis_is_everything() {
        let m = GradedModule::free(&[0]);
        let gens: Vec<F2Vector> = (0..m.dim()).map(|i| F2Vector::unit(m.dim(), i)).collect();
        let s = submodule(&m, &gens);
        assert_eq!(s.module.dim(), m.dim());
        s.module.validate().unwrap();
    }

    #[test]
    fn submodule_generated_by_free_generator() {
        let m = GradedModule::free(&[0]);
        let s = submodule(&m, &[F2Vector::unit(m.dim(), 0)]);
        assert_eq!(s.module.dim(), 8);
        // Inclusion commutes with the action.
        assert_eq!(
            m.sq1().mul(&s.inclusion),
            s.inclusion.mul(s.module.sq1())
        );
        assert_eq!(
            m.sq2().mul(&s.inclusion),
            s.inclusion.mul(s.module.sq2())
        );
    }

    #[test]
    fn quotient_by_zero_and_by_everything() {
        let m = GradedModule::free(&[1]);
        let q = quotient(&m, &F2Matrix::zeros(m.dim(), 0)).unwrap();
        assert_eq!(q.module.dim(), m.dim());
        let all = F2Matrix::identity(m.dim());
        let q2 = quotient(&m, &all).unwrap();
        assert_eq!(q2.module.dim(), 0);
    }

    #[test]
    fn quotient_rejects_non_closed_subspace() {
        let m = GradedModule::free(&[0]);
        // The span of the generator alone is not action-closed.
        let inc = F2Matrix::from_entries(m.dim(), 1, &[(0, 0)]);
        assert!(matches!(
            quotient(&m, &inc),
            Err(ModuleError::NotActionClosed { .. })
        ));
    }

    #[test]
    fn quotient_dims_are_complementary() {
        let m = GradedModule::free(&[0]);
        let s = submodule(&m, &[F2Vector::unit(m.dim(), 5)]);
        let q = quotient(&m, &s.inclusion).unwrap();
        for (d, n) in m.dims_by_degree() {
            assert_eq!(
                n,
                s.module.dim_in_degree(d) + q.module.dim_in_degree(d),
                "degree {d}"
            );
        }
    }

    #[test]
    fn isomorphism_identity_witness() {
        let m = GradedModule::free(&[0, 4]);
        match is_isomorphic(&m, &m, 1 << 16).unwrap() {
            IsoResult::Yes(f) => assert!(f.is_invertible()),
            IsoResult::No => panic!("module is isomorphic to itself"),
        }
    }

    #[test]
    fn isomorphism_rejects_different_action() {
        // Same degrees 2..6 as the Joker, but trivial action.
        let trivial5 = GradedModule::from_pairs(
            (2..=6).map(|d| (format!("t{d}"), d)).collect(),
            &[],
            &[],
        );
        let joker = GradedModule::from_pairs(
            vec![
                ("u0".into(), 2),
                ("u1".into(), 3),
                ("u0^2".into(), 4),
                ("u2".into(), 5),
                ("u1^2".into(), 6),
            ],
            &[(0, 1), (3, 4)],
            &[(0, 2), (1, 3), (2, 4)],
        );
        joker.validate().unwrap();
        assert!(matches!(
            is_isomorphic(&joker, &trivial5, 1 << 16).unwrap(),
            IsoResult::No
        ));
    }

    #[test]
    fn q1_squares_to_zero_on_validated_modules() {
        for m in [
            GradedModule::free(&[0]),
            GradedModule::free(&[0, 1, 5]),
            GradedModule::trivial(2),
        ] {
            m.validate().unwrap();
            let q1 = m.q1();
            assert!(q1.mul(&q1).is_zero());
        }
    }

    #[test]
    fn module_file_round_trip() {
        let m = GradedModule::free(&[2]);
        let file = ModuleFile::from_module(&m);
        let text = serde_json::to_string(&file).unwrap();
        let back: ModuleFile = serde_json::from_str(&text).unwrap();
        let m2 = back.into_module().unwrap();
        assert_eq!(m2.dims_by_degree(), m.dims_by_degree());
        assert_eq!(m2.sq1(), m.sq1());
        assert_eq!(m2.sq2(), m.sq2());
    }
}

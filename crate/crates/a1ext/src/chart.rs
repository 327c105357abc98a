//! Ext charts over A(1): dots, h0/h1 products, towers, the second-variable
//! (cohomology) variant through duality, v1^4-periodicity checks and the
//! filtration-shift comparisons between tensor constructions.
//!
//! A chart stores dots in coordinates `(stem, s)` with `stem = t - s` for
//! first-variable Ext. Second-variable charts are computed by resolving the
//! dual module and negating stems; h0 edges stay vertical and h1 edges move
//! one column toward lower coordinates.

use crate::gf2::F2Matrix;
use crate::km2::{build_joker, build_mk, build_mk_z, build_n, BuildError, Ring};
use crate::module::GradedModule;
use crate::resolution::{minimal_resolution, Resolution, ResolutionError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChartError {
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("window too small: needs ({needed_s}, {needed_t}) but the chart was computed to ({have_s}, {have_t})")]
    WindowTooSmall {
        needed_s: u32,
        needed_t: i64,
        have_s: u32,
        have_t: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dot {
    pub stem: i64,
    pub s: u32,
    pub id: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub stem: i64,
    pub base_s: u32,
    pub len: u32,
}

/// The serialized chart: exactly the on-disk schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ExtChart {
    pub dots: Vec<Dot>,
    pub h0: Vec<(String, String)>,
    pub h1: Vec<(String, String)>,
    pub towers: Vec<Tower>,
}

impl ExtChart {
    /// Dot count per position.
    pub fn counts(&self) -> BTreeMap<(i64, u32), usize> {
        let mut out = BTreeMap::new();
        for d in &self.dots {
            *out.entry((d.stem, d.s)).or_insert(0) += 1;
        }
        out
    }

    pub fn count(&self, stem: i64, s: u32) -> usize {
        self.dots.iter().filter(|d| d.stem == stem && d.s == s).count()
    }

    /// Dots clipped to a window, as a sorted multiset of positions.
    pub fn positions_in(
        &self,
        stem_lo: i64,
        stem_hi: i64,
        s_max: u32,
    ) -> Vec<(i64, u32)> {
        let mut v: Vec<(i64, u32)> = self
            .dots
            .iter()
            .filter(|d| d.stem >= stem_lo && d.stem <= stem_hi && d.s <= s_max)
            .map(|d| (d.stem, d.s))
            .collect();
        v.sort();
        v
    }

    pub fn towers_in(&self, stem_lo: i64, stem_hi: i64) -> Vec<Tower> {
        self.towers
            .iter()
            .filter(|t| t.stem >= stem_lo && t.stem <= stem_hi)
            .cloned()
            .collect()
    }
}

/// A chart together with the bounds it was computed to; assertions about a
/// window are only meaningful inside the bounds.
#[derive(Clone, Debug)]
pub struct ComputedChart {
    pub chart: ExtChart,
    pub max_s: u32,
    /// Largest internal degree trusted for dot data (six below the
    /// resolution bound, where truncation cannot interfere).
    pub trusted_t: i64,
    /// True for second-variable charts: stems were negated.
    pub cochart: bool,
}

impl ComputedChart {
    /// Whether `(stem, s)` is inside the computed, trustworthy region.
    pub fn in_range(&self, stem: i64, s: u32) -> bool {
        if s > self.max_s {
            return false;
        }
        let t = if self.cochart {
            // stem = -(t' - s) on the dual side.
            -stem + s as i64
        } else {
            stem + s as i64
        };
        t <= self.trusted_t
    }
}

fn dot_id(stem: i64, s: u32, n: usize) -> String {
    format!("{stem}:{s}:{n}")
}

/// Extract the chart from a resolution: one dot per stage generator,
/// h0/h1 edges from the word-length-one coefficients of the differential,
/// towers from the rank filtration of the h0 maps.
fn chart_from_resolution(res: &Resolution, negate: bool) -> ExtChart {
    let mut dots: Vec<Dot> = Vec::new();
    // Identify generators by (s, index-within-(s,t)).
    let mut ids: Vec<BTreeMap<usize, String>> = Vec::new();
    for stage in &res.stages {
        let mut per_t: BTreeMap<i64, usize> = BTreeMap::new();
        let mut stage_ids: BTreeMap<usize, String> = BTreeMap::new();
        for (g, &t) in stage.gens.iter().enumerate() {
            let n = per_t.entry(t).or_insert(0);
            let stem = if negate {
                -(t - stage.s as i64)
            } else {
                t - stage.s as i64
            };
            let id = dot_id(stem, stage.s, *n);
            *n += 1;
            dots.push(Dot {
                stem,
                s: stage.s,
                id: id.clone(),
            });
            stage_ids.insert(g, id);
        }
        ids.push(stage_ids);
    }
    let mut h0: Vec<(String, String)> = Vec::new();
    let mut h1: Vec<(String, String)> = Vec::new();
    for s in 0..res.stages.len() - 1 {
        let lower = &res.stages[s];
        let upper = &res.stages[s + 1];
        for gu in 0..upper.gens.len() {
            for gl in 0..lower.gens.len() {
                if res.h_coefficient(s as u32, gl, gu, 1) {
                    h0.push((ids[s][&gl].clone(), ids[s + 1][&gu].clone()));
                }
                if res.h_coefficient(s as u32, gl, gu, 2) {
                    h1.push((ids[s][&gl].clone(), ids[s + 1][&gu].clone()));
                }
            }
        }
    }
    h0.sort();
    h1.sort();
    dots.sort_by_key(|d| (d.stem, d.s, d.id.clone()));
    let towers = towers_from_h0(&dots, &h0);
    ExtChart {
        dots,
        h0,
        h1,
        towers,
    }
}

/// Tower decomposition per stem from the h0 maps: the number of chains
/// based at filtration `s` with length `d` comes from the ranks of the
/// composite maps, exactly like counting nilpotent Jordan blocks.
fn towers_from_h0(dots: &[Dot], h0: &[(String, String)]) -> Vec<Tower> {
    let mut stems: BTreeMap<i64, BTreeMap<u32, Vec<&str>>> = BTreeMap::new();
    for d in dots {
        stems
            .entry(d.stem)
            .or_default()
            .entry(d.s)
            .or_default()
            .push(&d.id);
    }
    let edge_set: std::collections::BTreeSet<(&str, &str)> =
        h0.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut towers = Vec::new();
    for (&stem, by_s) in &stems {
        let s_values: Vec<u32> = by_s.keys().cloned().collect();
        let s_max = *s_values.last().unwrap();
        let s_min = *s_values.first().unwrap();
        // Rank of the composite h0^j out of filtration s.
        let matrix = |s: u32| -> F2Matrix {
            let empty = Vec::new();
            let from = by_s.get(&s).unwrap_or(&empty);
            let to = by_s.get(&(s + 1)).unwrap_or(&empty);
            let mut m = F2Matrix::zeros(to.len(), from.len());
            for (c, f) in from.iter().enumerate() {
                for (r, t) in to.iter().enumerate() {
                    if edge_set.contains(&(*f, *t)) {
                        m.set(r, c, true);
                    }
                }
            }
            m
        };
        let rank = |s: i64, j: u32| -> usize {
            if s < s_min as i64 || s > s_max as i64 {
                return 0;
            }
            let s = s as u32;
            let empty = Vec::new();
            let dim = by_s.get(&s).unwrap_or(&empty).len();
            if j == 0 {
                return dim;
            }
            let mut m = matrix(s);
            for step in 1..j {
                m = matrix(s + step).mul(&m);
            }
            m.rank()
        };
        for &s in &s_values {
            let max_len = s_max - s + 1;
            for d in 1..=max_len {
                let a = rank(s as i64, d - 1) as i64 - rank(s as i64, d) as i64;
                let b = rank(s as i64 - 1, d) as i64 - rank(s as i64 - 1, d + 1) as i64;
                let count = a - b;
                for _ in 0..count {
                    towers.push(Tower {
                        stem,
                        base_s: s,
                        len: d,
                    });
                }
            }
        }
    }
    towers.sort_by_key(|t| (t.stem, t.base_s, t.len));
    towers
}

/// First-variable Ext chart of a module.
pub fn ext_chart(
    m: &GradedModule,
    max_s: u32,
    max_t: i64,
    budget: usize,
) -> Result<ComputedChart, ChartError> {
    let res = minimal_resolution(m, max_s, max_t, budget)?;
    Ok(ComputedChart {
        chart: chart_from_resolution(&res, false),
        max_s,
        trusted_t: max_t - 6,
        cochart: false,
    })
}

/// Second-variable Ext chart (the module in the second slot), computed by
/// resolving the dual and negating stems. `max_t` bounds the internal
/// degree of the dual-side resolution.
pub fn ext_cochart(
    m: &GradedModule,
    max_s: u32,
    max_t: i64,
    budget: usize,
) -> Result<ComputedChart, ChartError> {
    let res = minimal_resolution(&m.dual(), max_s, max_t, budget)?;
    Ok(ComputedChart {
        chart: chart_from_resolution(&res, true),
        max_s,
        trusted_t: max_t - 6,
        cochart: true,
    })
}

/// Periodicity report: positions where `dim Ext^{s,t}` differs from
/// `dim Ext^{s+4,t+12}` inside the window.
#[derive(Clone, Debug)]
pub struct PeriodicityReport {
    pub checked: usize,
    pub violations: Vec<(i64, u32)>,
}

impl PeriodicityReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `dim Ext^{s,t} = dim Ext^{s+4,t+12}` for every window position
/// with `s_lo <= s <= s_max`; both ends of each pair must be inside the
/// computed range. Free summands break the equality at filtration 0 (their
/// whole chart sits there), so windows for charts with free content start
/// at `s_lo = 1`.
pub fn check_periodicity(
    computed: &ComputedChart,
    stem_lo: i64,
    stem_hi: i64,
    s_lo: u32,
    s_max: u32,
) -> Result<PeriodicityReport, ChartError> {
    let shift_stem = if computed.cochart { -8 } else { 8 };
    for &(stem, s) in &[(stem_hi, s_max), (stem_hi + shift_stem, s_max + 4)] {
        if !computed.in_range(stem, s) {
            return Err(ChartError::WindowTooSmall {
                needed_s: s,
                needed_t: if computed.cochart {
                    -stem + s as i64
                } else {
                    stem + s as i64
                },
                have_s: computed.max_s,
                have_t: computed.trusted_t,
            });
        }
    }
    let counts = computed.chart.counts();
    let count = |stem: i64, s: u32| counts.get(&(stem, s)).copied().unwrap_or(0);
    let mut checked = 0;
    let mut violations = Vec::new();
    for stem in stem_lo..=stem_hi {
        for s in s_lo..=s_max {
            checked += 1;
            if count(stem, s) != count(stem + shift_stem, s + 4) {
                violations.push((stem, s));
            }
        }
    }
    Ok(PeriodicityReport { checked, violations })
}

/// Which filtration-shift statement to verify.
#[derive(Clone, Debug)]
pub enum ShiftKind {
    /// Homology charts: `M_k z_J` against the suspended `M_k` with
    /// filtrations reduced by `|J|`, bijective for `s >= 1`.
    Mz { k: u32, js: Vec<u32> },
    /// `U (x) M_k` (reduced) against `M_k` at `(s + 2, t + 2)`, `s > 0`.
    U { k: u32 },
    /// `N (x) M_k` (reduced) against the ninefold suspension, `s >= 1`.
    N { k: u32 },
    /// Cohomology charts of `M_k z_J` against the suspended `M_k` with
    /// filtrations raised by `|J|` and extended left by periodicity.
    CohMz { k: u32, js: Vec<u32> },
    /// Cohomology charts of `U (x) M_k` against `M_k`, filtrations + 2,
    /// extended left by periodicity.
    CohU { k: u32 },
}

#[derive(Clone, Debug)]
pub struct ShiftReport {
    pub kind: String,
    pub compared: usize,
    pub first_mismatch: Option<(i64, u32)>,
    /// Dot counts at filtration 0 on both sides (recorded, not asserted).
    pub s0_dots: (usize, usize),
}

impl ShiftReport {
    pub fn pass(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Verify one shift statement dot-for-dot on a window of stems
/// `lo..=hi` (in desuspended coordinates) and filtrations `1..=s_max`.
pub fn verify_shift(
    ring: &Ring,
    kind: &ShiftKind,
    s_max: u32,
    stem_hi: i64,
    budget: usize,
) -> Result<ShiftReport, ChartError> {
    match kind {
        ShiftKind::Mz { k, js } => {
            let r = js.len() as u32;
            let z = build_mk_z(ring, *k, js, false)?;
            let shift: i64 = js.iter().map(|&j| 1i64 << (j + 2)).sum();
            let a = z.module.suspend(-(1i64 << k) - shift);
            let mk = build_mk(ring, *k, false)?;
            let b = mk.reduced().suspend(-(1i64 << k));
            compare_homology_charts(&a, &b, r, 0, s_max, stem_hi, budget, format!("Mz k={k} J={js:?}"))
        }
        ShiftKind::U { k } => {
            let mk = build_mk(ring, *k, false)?;
            let u = build_joker();
            let a = crate::km2::PolySpan {
                module: u.module.tensor(mk.reduced()),
                polys: Vec::new(),
            }
            .module
            .suspend(-(1i64 << k));
            let a = crate::margolis::split_reduced(&a).reduced;
            let b = mk.reduced().suspend(-(1i64 << k));
            compare_homology_charts(&a, &b, 2, 0, s_max, stem_hi, budget, format!("U k={k}"))
        }
        ShiftKind::N { k } => {
            let mk = build_mk(ring, *k, false)?;
            let n = build_n(ring);
            let tensor = n.module.tensor(mk.reduced()).suspend(-(1i64 << k));
            let a = crate::margolis::split_reduced(&tensor).reduced;
            let b = mk.reduced().suspend(-(1i64 << k) + 9);
            compare_homology_charts(&a, &b, 0, 0, s_max, stem_hi, budget, format!("N k={k}"))
        }
        ShiftKind::CohMz { k, js } => {
            let r = js.len() as u32;
            let z = build_mk_z(ring, *k, js, false)?;
            let shift: i64 = js.iter().map(|&j| 1i64 << (j + 2)).sum();
            let a = z.module.suspend(-(1i64 << k) - shift);
            let mk = build_mk(ring, *k, false)?;
            let b = mk.reduced().suspend(-(1i64 << k));
            compare_cohomology_charts(&a, &b, r, s_max, stem_hi, budget, format!("coh Mz k={k} J={js:?}"))
        }
        ShiftKind::CohU { k } => {
            let mk = build_mk(ring, *k, false)?;
            let u = build_joker();
            let tensor = u.module.tensor(mk.reduced()).suspend(-(1i64 << k));
            let a = crate::margolis::split_reduced(&tensor).reduced;
            let b = mk.reduced().suspend(-(1i64 << k));
            compare_cohomology_charts(&a, &b, 2, s_max, stem_hi, budget, format!("coh U k={k}"))
        }
    }
}

/// Dot-for-dot comparison `count_a(stem, s) = count_b(stem - offset, s + r)`
/// for `1 <= s <= s_max` on stems up to `stem_hi`.
#[allow(clippy::too_many_arguments)]
fn compare_homology_charts(
    a: &GradedModule,
    b: &GradedModule,
    r: u32,
    offset: i64,
    s_max: u32,
    stem_hi: i64,
    budget: usize,
    kind: String,
) -> Result<ShiftReport, ChartError> {
    let t_a = stem_hi + s_max as i64 + 6;
    let t_b = stem_hi - offset + (s_max + r) as i64 + 6;
    let ca = ext_chart(a, s_max, t_a, budget)?;
    let cb = ext_chart(b, s_max + r, t_b, budget)?;
    let counts_a = ca.chart.counts();
    let counts_b = cb.chart.counts();
    let stem_lo = a
        .min_degree()
        .unwrap_or(0)
        .min(b.min_degree().unwrap_or(0) + offset)
        - 1;
    let mut compared = 0;
    let mut first_mismatch = None;
    for stem in stem_lo..=stem_hi {
        for s in 1..=s_max {
            compared += 1;
            let na = counts_a.get(&(stem, s)).copied().unwrap_or(0);
            let nb = counts_b.get(&(stem - offset, s + r)).copied().unwrap_or(0);
            if na != nb && first_mismatch.is_none() {
                first_mismatch = Some((stem, s));
            }
        }
    }
    let s0a = counts_a.iter().filter(|(&(_, s), _)| s == 0).map(|(_, n)| n).sum();
    let s0b = counts_b.iter().filter(|(&(_, s), _)| s == 0).map(|(_, n)| n).sum();
    Ok(ShiftReport {
        kind,
        compared,
        first_mismatch,
        s0_dots: (s0a, s0b),
    })
}

/// Cohomology variant: `count_a(c, s) = count_b(c - 8 fold, s + 4 fold - r)`
/// with the smallest fold making the right side land at filtration >= 1.
fn compare_cohomology_charts(
    a: &GradedModule,
    b: &GradedModule,
    r: u32,
    s_max: u32,
    c_hi: i64,
    budget: usize,
    kind: String,
) -> Result<ShiftReport, ChartError> {
    // Coordinates c run from negative values up to the top module degree;
    // the dual-side resolution needs internal degrees up to s_max + |c_lo|.
    let c_lo = -2 - 8;
    let fold_max = (r / 4) + 1;
    let t_a = (s_max as i64) + (-c_lo) + 6;
    let t_b = (s_max + r + 4 * fold_max) as i64 + (-c_lo) + 8 * fold_max as i64 + 6;
    let ca = ext_cochart(a, s_max, t_a, budget)?;
    let cb = ext_cochart(b, s_max + r + 4 * fold_max, t_b, budget)?;
    let counts_a = ca.chart.counts();
    let counts_b = cb.chart.counts();
    let mut compared = 0;
    let mut first_mismatch = None;
    for c in c_lo..=c_hi {
        for s in 1..=s_max {
            let mut fold = 0u32;
            while (s + 4 * fold) < r + 1 {
                fold += 1;
            }
            compared += 1;
            let na = counts_a.get(&(c, s)).copied().unwrap_or(0);
            let nb = counts_b
                .get(&(c - 8 * fold as i64, s + 4 * fold - r))
                .copied()
                .unwrap_or(0);
            if na != nb && first_mismatch.is_none() {
                first_mismatch = Some((c, s));
            }
        }
    }
    let s0a = counts_a.iter().filter(|(&(_, s), _)| s == 0).map(|(_, n)| n).sum();
    let s0b = counts_b.iter().filter(|(&(_, s), _)| s == 0).map(|(_, n)| n).sum();
    Ok(ShiftReport {
        kind,
        compared,
        first_mismatch,
        s0_dots: (s0a, s0b),
    })
}

/// Expected dot positions for the chart of a desuspended weighted summand,
/// per the closed-form description: for each block `i >= 0`,
/// nothing in stems `8i+6` and `8i+8`; single dots in `8i+1`, `8i+2` at
/// filtrations `4i`, `4i+1`; single dots in `8i+4`, `8i+5` at filtrations
/// `4i-k+6`, `4i-k+7` when nonnegative; a tower of length `k-2` in `8i+3`
/// based at `4i-k+5` when that is nonnegative, otherwise length `4i+3`
/// based at 0; and a tower of length `k-4` in `8i+7` based at `4i-k+8`
/// when nonnegative, otherwise length `4i+4` based at 0.
pub fn expected_mk_chart(k: u32, i_max: u32) -> (BTreeMap<(i64, u32), usize>, Vec<Tower>) {
    let mut counts: BTreeMap<(i64, u32), usize> = BTreeMap::new();
    let mut towers: Vec<Tower> = Vec::new();
    let ki = k as i64;
    let mut add_tower = |stem: i64, base: i64, len: i64, counts: &mut BTreeMap<(i64, u32), usize>| {
        towers.push(Tower {
            stem,
            base_s: base as u32,
            len: len as u32,
        });
        for s in base..base + len {
            *counts.entry((stem, s as u32)).or_insert(0) += 1;
        }
    };
    for i in 0..=i_max as i64 {
        *counts.entry((8 * i + 1, (4 * i) as u32)).or_insert(0) += 1;
        *counts.entry((8 * i + 2, (4 * i + 1) as u32)).or_insert(0) += 1;
        if 4 * i - ki + 6 >= 0 {
            *counts
                .entry((8 * i + 4, (4 * i - ki + 6) as u32))
                .or_insert(0) += 1;
        }
        if 4 * i - ki + 7 >= 0 {
            *counts
                .entry((8 * i + 5, (4 * i - ki + 7) as u32))
                .or_insert(0) += 1;
        }
        if 4 * i - ki + 5 >= 0 {
            add_tower(8 * i + 3, 4 * i - ki + 5, ki - 2, &mut counts);
        } else {
            add_tower(8 * i + 3, 0, 4 * i + 3, &mut counts);
        }
        if 4 * i - ki + 8 >= 0 {
            add_tower(8 * i + 7, 4 * i - ki + 8, ki - 4, &mut counts);
        } else {
            add_tower(8 * i + 7, 0, 4 * i + 4, &mut counts);
        }
    }
    towers.sort_by_key(|t| (t.stem, t.base_s, t.len));
    (counts, towers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::DEFAULT_GENERATOR_BUDGET;

    fn joker() -> GradedModule {
        build_joker().module
    }

    #[test]
    fn trivial_chart_has_expected_dots_and_towers() {
        let m = GradedModule::trivial(0);
        let c = ext_chart(&m, 7, 20, DEFAULT_GENERATOR_BUDGET).unwrap();
        assert_eq!(c.chart.count(0, 0), 1);
        assert_eq!(c.chart.count(1, 1), 1);
        assert_eq!(c.chart.count(2, 2), 1);
        assert_eq!(c.chart.count(3, 2), 0);
        assert_eq!(c.chart.count(4, 3), 1);
        // Full-window tower at stem 0.
        let t0: Vec<&Tower> = c.chart.towers.iter().filter(|t| t.stem == 0).collect();
        assert_eq!(t0.len(), 1);
        assert_eq!((t0[0].base_s, t0[0].len), (0, 8));
        // Tower at stem 4 from filtration 3 to the window top.
        let t4: Vec<&Tower> = c.chart.towers.iter().filter(|t| t.stem == 4).collect();
        assert_eq!(t4.len(), 1);
        assert_eq!((t4[0].base_s, t4[0].len), (3, 5));
    }

    #[test]
    fn h0_and_h1_commute_on_the_trivial_chart() {
        let m = GradedModule::trivial(0);
        let res = minimal_resolution(&m, 8, 24, DEFAULT_GENERATOR_BUDGET).unwrap();
        // As maps of generator spaces: h0 . h1 = h1 . h0 wherever both
        // compositions are defined.
        for s in 0..7u32 {
            for t in 0..=24i64 {
                let from = res.stages[s as usize].gens_in_degree(t);
                let to = res.stages[s as usize + 2].gens_in_degree(t + 3);
                for &a in &from {
                    for &b in &to {
                        let mut path1 = false;
                        let mut path2 = false;
                        for mid in res.stages[s as usize + 1].gens_in_degree(t + 1) {
                            path1 ^= res.h_coefficient(s, a, mid, 1)
                                && res.h_coefficient(s + 1, mid, b, 2);
                        }
                        for mid in res.stages[s as usize + 1].gens_in_degree(t + 2) {
                            path2 ^= res.h_coefficient(s, a, mid, 2)
                                && res.h_coefficient(s + 1, mid, b, 1);
                        }
                        assert_eq!(path1, path2, "s={s} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn chart_of_free_module_vanishes_above_filtration_zero() {
        let m = GradedModule::free(&[0, 3]);
        let c = ext_chart(&m, 6, 26, DEFAULT_GENERATOR_BUDGET).unwrap();
        assert!(c.chart.dots.iter().all(|d| d.s == 0));
        let p = check_periodicity(&c, 0, 4, 1, 2).unwrap();
        assert!(p.pass());
    }

    #[test]
    fn suspension_shifts_stems() {
        let m = joker();
        let c0 = ext_chart(&m, 5, 30, DEFAULT_GENERATOR_BUDGET).unwrap();
        for d in [9i64, -9, 16, -16] {
            let cd = ext_chart(&m.suspend(d), 5, 30 + d, DEFAULT_GENERATOR_BUDGET).unwrap();
            let shifted: Vec<(i64, u32)> = c0
                .chart
                .dots
                .iter()
                .map(|x| (x.stem + d, x.s))
                .collect();
            let got: Vec<(i64, u32)> = cd.chart.dots.iter().map(|x| (x.stem, x.s)).collect();
            let mut a = shifted;
            a.sort();
            let mut b = got;
            b.sort();
            assert_eq!(a, b, "suspension by {d}");
        }
    }

    #[test]
    fn direct_sum_chart_is_the_sum() {
        let a = joker();
        let b = GradedModule::trivial(0);
        let sum = a.direct_sum(&b);
        let ca = ext_chart(&a, 5, 24, DEFAULT_GENERATOR_BUDGET).unwrap();
        let cb = ext_chart(&b, 5, 24, DEFAULT_GENERATOR_BUDGET).unwrap();
        let cs = ext_chart(&sum, 5, 24, DEFAULT_GENERATOR_BUDGET).unwrap();
        let counts_a = ca.chart.counts();
        let counts_b = cb.chart.counts();
        let counts_s = cs.chart.counts();
        for stem in -2..=16i64 {
            for s in 0..=5u32 {
                let want = counts_a.get(&(stem, s)).copied().unwrap_or(0)
                    + counts_b.get(&(stem, s)).copied().unwrap_or(0);
                assert_eq!(
                    counts_s.get(&(stem, s)).copied().unwrap_or(0),
                    want,
                    "({stem},{s})"
                );
            }
        }
    }

    #[test]
    fn cochart_socle_row_counts_annihilated_elements() {
        // The filtration-0 row of the second-variable chart counts the
        // elements killed by both operations, coordinate = their degree.
        let m = joker();
        let c = ext_cochart(&m, 4, 20, DEFAULT_GENERATOR_BUDGET).unwrap();
        // Socle of the Joker: the top class in degree 6.
        let s0: Vec<(i64, u32)> = c
            .chart
            .dots
            .iter()
            .filter(|d| d.s == 0)
            .map(|d| (d.stem, d.s))
            .collect();
        assert_eq!(s0, vec![(6, 0)]);
    }

    #[test]
    fn json_round_trip() {
        let m = GradedModule::trivial(0);
        let c = ext_chart(&m, 4, 12, DEFAULT_GENERATOR_BUDGET).unwrap();
        let text = serde_json::to_string(&c.chart).unwrap();
        let back: ExtChart = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c.chart);
    }

    #[test]
    fn periodicity_window_error() {
        let m = GradedModule::trivial(0);
        let c = ext_chart(&m, 4, 12, DEFAULT_GENERATOR_BUDGET).unwrap();
        assert!(matches!(
            check_periodicity(&c, 0, 8, 0, 4),
            Err(ChartError::WindowTooSmall { .. })
        ));
    }
}

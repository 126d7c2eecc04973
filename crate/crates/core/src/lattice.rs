//! Lattice points on circles `|ξ|² = λ` and the exhaustive searches for
//! correlations (vanishing sums of lattice points) and semi-correlations
//! (vanishing sums of one coordinate).
//!
//! Tuples are multisets: a slot may repeat a value, and two solutions that
//! differ only by ordering are the same solution. A zero-sum tuple is
//! *trivial* when it splits into pairs `(v, -v)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A point of `ℤ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x1: i64,
    pub x2: i64,
}

impl LatticePoint {
    pub const fn new(x1: i64, x2: i64) -> Self {
        Self { x1, x2 }
    }

    pub fn norm_sq(&self) -> u64 {
        (self.x1 * self.x1 + self.x2 * self.x2) as u64
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        let a = (self.x2 as f64).atan2(self.x1 as f64);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.x1, -self.x2)
    }

    fn half(&self) -> u8 {
        if self.x2 > 0 || (self.x2 == 0 && self.x1 > 0) {
            0
        } else {
            1
        }
    }
}

/// Exact angular order on `ℤ² \ {0}`, starting at the positive first axis.
pub fn angle_cmp(a: &LatticePoint, b: &LatticePoint) -> Ordering {
    a.half().cmp(&b.half()).then_with(|| {
        let cross = a.x1 as i128 * b.x2 as i128 - a.x2 as i128 * b.x1 as i128;
        0.cmp(&cross)
    })
}

/// The lattice points on the circle of radius `√λ`, sorted by angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeCircle {
    pub lambda: u64,
    pub points: Vec<LatticePoint>,
}

impl LatticeCircle {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distinct values of one coordinate, ascending.
    pub fn projections(&self, axis: Axis) -> Vec<i64> {
        let set: BTreeSet<i64> = self
            .points
            .iter()
            .map(|p| match axis {
                Axis::Second => p.x2,
                _ => p.x1,
            })
            .collect();
        set.into_iter().collect()
    }
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// True iff every prime `≡ 3 (mod 4)` divides `n` to an even power.
pub fn is_sum_of_two_squares(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All `(a, b) ∈ ℤ²` with `a² + b² = λ`, sorted by angle.
pub fn lattice_points(lambda: u64) -> LatticeCircle {
    let mut points = Vec::new();
    let r = isqrt(lambda);
    for a in 0..=r {
        let rest = lambda - a * a;
        let b = isqrt(rest);
        if b * b != rest {
            continue;
        }
        let (a, b) = (a as i64, b as i64);
        for &sa in if a == 0 { &[1i64][..] } else { &[1, -1][..] } {
            for &sb in if b == 0 { &[1i64][..] } else { &[1, -1][..] } {
                points.push(LatticePoint::new(sa * a, sb * b));
            }
        }
    }
    points.sort_by(angle_cmp);
    points.dedup();
    LatticeCircle { lambda, points }
}

/// `4(d₁(n) − d₃(n))` where `dᵢ` counts divisors `≡ i (mod 4)`.
pub fn divisor_count_r2(n: u64) -> u64 {
    let mut divisors = vec![1u64];
    for (p, e) in factorize(n) {
        let current = divisors.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divisors.extend(current.iter().map(|d| d * pk));
        }
    }
    let d1 = divisors.iter().filter(|d| *d % 4 == 1).count() as u64;
    let d3 = divisors.iter().filter(|d| *d % 4 == 3).count() as u64;
    4 * (d1 - d3)
}

/// Multiplicity `N(λ)`, cross-checked between the divisor identity and
/// direct enumeration.
pub fn multiplicity(lambda: u64) -> Result<u64> {
    if lambda == 0 {
        return Err(invalid("lambda must be >= 1"));
    }
    let by_divisors = divisor_count_r2(lambda);
    let by_points = lattice_points(lambda).len() as u64;
    if by_divisors != by_points {
        return Err(Error::Internal(format!(
            "r2({lambda}): divisor formula gives {by_divisors}, enumeration gives {by_points}"
        )));
    }
    Ok(by_points)
}

/// Which projection of the lattice points enters a sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    First,
    Second,
    FullVector,
}

/// A canonical (sorted, descending) tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Tuple {
    Values(Vec<i64>),
    Points(Vec<LatticePoint>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub lambda: u64,
    pub ell: usize,
    pub axis: Axis,
    pub nontrivial_tuples: Vec<Tuple>,
    pub min_nonzero_abs: Option<f64>,
    /// `min_nonzero_abs / λ^(−1/2+δ)` when a δ was supplied.
    pub threshold_ratio: Option<f64>,
    /// Candidate tuples examined.
    pub cost: u128,
}

/// Cap on candidate tuples for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_candidates: u128,
    /// Above this many raw ordered tuples (`N^{2ℓ}`) the search switches to
    /// meet-in-the-middle on half sums.
    pub mitm_threshold: u128,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_candidates: 1_000_000_000,
            mitm_threshold: 100_000_000,
        }
    }
}

/// True iff the multiset splits into pairs `(v, -v)`.
pub fn is_trivial(tuple: &[[i64; 2]]) -> bool {
    let mut counts: HashMap<[i64; 2], i64> = HashMap::new();
    for v in tuple {
        *counts.entry(*v).or_default() += 1;
    }
    counts.iter().all(|(v, &c)| {
        let neg = [-v[0], -v[1]];
        if neg == *v {
            c % 2 == 0
        } else {
            counts.get(&neg).copied().unwrap_or(0) == c
        }
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn add(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn norm(s: [i64; 2]) -> f64 {
    ((s[0] as f64).powi(2) + (s[1] as f64).powi(2)).sqrt()
}

#[derive(Debug, Default)]
struct SearchOutcome {
    zero_sum_nontrivial: BTreeSet<Vec<[i64; 2]>>,
    min_nonzero: Option<f64>,
    cost: u128,
}

#[derive(Debug, Clone, Copy)]
struct SearchWants {
    zeros: bool,
    minimum: bool,
}

/// Visit every non-decreasing index sequence of length `k` over `m` symbols.
fn for_each_multiset<F: FnMut(&[usize])>(m: usize, k: usize, f: &mut F) {
    if m == 0 {
        return;
    }
    let mut idx = vec![0usize; k];
    loop {
        f(&idx);
        // advance to the next non-decreasing sequence
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if idx[pos] + 1 < m {
                let v = idx[pos] + 1;
                for slot in &mut idx[pos..] {
                    *slot = v;
                }
                break;
            }
        }
    }
}

fn canonical(mut t: Vec<[i64; 2]>) -> Vec<[i64; 2]> {
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

/// Core search over multisets of size `2ℓ` drawn from `alphabet`.
fn search(
    alphabet: &[[i64; 2]],
    raw_count: usize,
    ell: usize,
    wants: SearchWants,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let m = alphabet.len();
    let k = 2 * ell;
    let raw = (raw_count as u128).saturating_pow(k as u32);
    let mut out = SearchOutcome::default();
    if m == 0 {
        return Ok(out);
    }
    if raw <= budget.mitm_threshold {
        let estimated = binomial((m + k - 1) as u128, k as u128);
        if estimated > budget.max_candidates {
            return Err(Error::BudgetExceeded {
                estimated,
                budget: budget.max_candidates,
            });
        }
        let mut buf = Vec::with_capacity(k);
        for_each_multiset(m, k, &mut |idx| {
            out.cost += 1;
            let s = idx.iter().fold([0, 0], |acc, &i| add(acc, alphabet[i]));
            if s == [0, 0] {
                if wants.zeros {
                    buf.clear();
                    buf.extend(idx.iter().map(|&i| alphabet[i]));
                    if !is_trivial(&buf) {
                        out.zero_sum_nontrivial.insert(canonical(buf.clone()));
                    }
                }
            } else if wants.minimum {
                let n = norm(s);
                out.min_nonzero = Some(out.min_nonzero.map_or(n, |c: f64| c.min(n)));
            }
        });
        return Ok(out);
    }

    // meet in the middle: multisets of size ℓ and their sums
    let half = binomial((m + ell - 1) as u128, ell as u128);
    let mut halves: Vec<(Vec<usize>, [i64; 2])> = Vec::new();
    let estimated_build = half;
    if estimated_build > budget.max_candidates {
        return Err(Error::BudgetExceeded {
            estimated: estimated_build,
            budget: budget.max_candidates,
        });
    }
    for_each_multiset(m, ell, &mut |idx| {
        let s = idx.iter().fold([0, 0], |acc, &i| add(acc, alphabet[i]));
        halves.push((idx.to_vec(), s));
    });
    out.cost += halves.len() as u128;

    if wants.zeros {
        let mut by_sum: HashMap<[i64; 2], Vec<usize>> = HashMap::new();
        for (h, (_, s)) in halves.iter().enumerate() {
            by_sum.entry(*s).or_default().push(h);
        }
        for (a, (ia, sa)) in halves.iter().enumerate() {
            let Some(partners) = by_sum.get(&[-sa[0], -sa[1]]) else {
                continue;
            };
            for &b in partners {
                if b < a {
                    continue;
                }
                out.cost += 1;
                if out.cost > budget.max_candidates {
                    return Err(Error::BudgetExceeded {
                        estimated: out.cost,
                        budget: budget.max_candidates,
                    });
                }
                let tuple: Vec<[i64; 2]> = ia
                    .iter()
                    .chain(halves[b].0.iter())
                    .map(|&i| alphabet[i])
                    .collect();
                if !is_trivial(&tuple) {
                    out.zero_sum_nontrivial.insert(canonical(tuple));
                }
            }
        }
    }

    if wants.minimum {
        let sums: BTreeSet<[i64; 2]> = halves.iter().map(|(_, s)| *s).collect();
        let sums: Vec<[i64; 2]> = sums.into_iter().collect();
        let scalar = alphabet.iter().all(|v| v[1] == 0);
        if scalar {
            // sums sorted by first coordinate; nearest nonzero neighbours of -s
            let vals: Vec<i64> = sums.iter().map(|s| s[0]).collect();
            for &v in &vals {
                out.cost += 1;
                let target = -v;
                let pos = vals.partition_point(|&x| x < target);
                let mut best: Option<i64> = None;
                let mut consider = |x: i64| {
                    let d = (x + v).abs();
                    if d != 0 {
                        best = Some(best.map_or(d, |b: i64| b.min(d)));
                    }
                };
                if pos < vals.len() {
                    consider(vals[pos]);
                    if vals[pos] == target && pos + 1 < vals.len() {
                        consider(vals[pos + 1]);
                    }
                }
                if pos > 0 {
                    consider(vals[pos - 1]);
                }
                if let Some(b) = best {
                    let b = b as f64;
                    out.min_nonzero = Some(out.min_nonzero.map_or(b, |c: f64| c.min(b)));
                }
            }
        } else {
            let pairs = (sums.len() as u128).pow(2);
            if out.cost + pairs > budget.max_candidates {
                return Err(Error::BudgetExceeded {
                    estimated: out.cost + pairs,
                    budget: budget.max_candidates,
                });
            }
            out.cost += pairs;
            for a in &sums {
                for b in &sums {
                    let s = add(*a, *b);
                    if s != [0, 0] {
                        let n = norm(s);
                        out.min_nonzero = Some(out.min_nonzero.map_or(n, |c: f64| c.min(n)));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn alphabet_for(circle: &LatticeCircle, axis: Axis) -> Vec<[i64; 2]> {
    match axis {
        Axis::FullVector => circle.points.iter().map(|p| [p.x1, p.x2]).collect(),
        a => circle.projections(a).into_iter().map(|v| [v, 0]).collect(),
    }
}

fn to_tuples(set: BTreeSet<Vec<[i64; 2]>>, axis: Axis) -> Vec<Tuple> {
    set.into_iter()
        .map(|t| match axis {
            Axis::FullVector => {
                Tuple::Points(t.iter().map(|v| LatticePoint::new(v[0], v[1])).collect())
            }
            _ => Tuple::Values(t.iter().map(|v| v[0]).collect()),
        })
        .collect()
}

fn check_ell(ell: usize) -> Result<()> {
    if ell == 0 {
        return Err(invalid("ell must be >= 1"));
    }
    Ok(())
}

/// Nontrivial vanishing sums `ξ₁ + … + ξ_{2ℓ} = 0` of lattice points.
pub fn find_correlations(
    lambda: u64,
    ell: usize,
    budget: &SearchBudget,
) -> Result<CorrelationReport> {
    check_ell(ell)?;
    let circle = lattice_points(lambda);
    if circle.is_empty() {
        return Err(Error::NotRepresentable(lambda));
    }
    let alphabet = alphabet_for(&circle, Axis::FullVector);
    let out = search(
        &alphabet,
        circle.len(),
        ell,
        SearchWants {
            zeros: true,
            minimum: false,
        },
        budget,
    )?;
    Ok(CorrelationReport {
        lambda,
        ell,
        axis: Axis::FullVector,
        nontrivial_tuples: to_tuples(out.zero_sum_nontrivial, Axis::FullVector),
        min_nonzero_abs: None,
        threshold_ratio: None,
        cost: out.cost,
    })
}

/// Nontrivial vanishing sums of one coordinate of `2ℓ` lattice points.
/// Empty when `λ` is not a sum of two squares.
pub fn find_semi_correlations(
    lambda: u64,
    ell: usize,
    axis: Axis,
    budget: &SearchBudget,
) -> Result<CorrelationReport> {
    check_ell(ell)?;
    if axis == Axis::FullVector {
        return Err(invalid("semi-correlations need a coordinate axis"));
    }
    let circle = lattice_points(lambda);
    let alphabet = alphabet_for(&circle, axis);
    let out = search(
        &alphabet,
        circle.len(),
        ell,
        SearchWants {
            zeros: true,
            minimum: false,
        },
        budget,
    )?;
    Ok(CorrelationReport {
        lambda,
        ell,
        axis,
        nontrivial_tuples: to_tuples(out.zero_sum_nontrivial, axis),
        min_nonzero_abs: None,
        threshold_ratio: None,
        cost: out.cost,
    })
}

/// Smallest nonzero `|ξ₁ + … + ξ_{2ℓ}|` (or of one coordinate), with the
/// ratio against `λ^(−1/2+δ)`.
pub fn min_quasi_correlation(
    lambda: u64,
    ell: usize,
    axis: Axis,
    delta: f64,
    budget: &SearchBudget,
) -> Result<CorrelationReport> {
    check_ell(ell)?;
    let circle = lattice_points(lambda);
    if circle.is_empty() {
        return Err(Error::NotRepresentable(lambda));
    }
    let alphabet = alphabet_for(&circle, axis);
    let out = search(
        &alphabet,
        circle.len(),
        ell,
        SearchWants {
            zeros: false,
            minimum: true,
        },
        budget,
    )?;
    let min = out.min_nonzero.ok_or_else(|| {
        Error::Internal(format!(
            "every {}-tuple on λ={lambda} sums to zero",
            2 * ell
        ))
    })?;
    let threshold = (lambda as f64).powf(-0.5 + delta);
    Ok(CorrelationReport {
        lambda,
        ell,
        axis,
        nontrivial_tuples: Vec::new(),
        min_nonzero_abs: Some(min),
        threshold_ratio: Some(min / threshold),
        cost: out.cost,
    })
}

/// True iff every zero-sum `p`-tuple of `values` (repetition allowed) is a
/// perfect antipodal pairing.
pub fn is_lambda_p_admissible(values: &[i64], p: usize, budget: &SearchBudget) -> Result<bool> {
    if !p.is_multiple_of(2) {
        return Err(invalid(format!("p must be even, got {p}")));
    }
    if p < 4 {
        return Err(invalid(format!("p must be at least 4, got {p}")));
    }
    let set: BTreeSet<i64> = values.iter().copied().collect();
    let alphabet: Vec<[i64; 2]> = set.iter().map(|&v| [v, 0]).collect();
    let out = search(
        &alphabet,
        values.len(),
        p / 2,
        SearchWants {
            zeros: true,
            minimum: false,
        },
        budget,
    )?;
    Ok(out.zero_sum_nontrivial.is_empty())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lambda: u64,
    pub has_nontrivial_semi_correlation: bool,
    /// Share of flagged eigenvalues among those in `S ∩ [1, λ]`.
    pub running_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub bound: u64,
    pub ell: usize,
    pub rows: Vec<ScanRow>,
    /// Set when the budget ran out; `rows` stop at the last completed λ.
    pub truncated: bool,
}

/// Flags every `λ ≤ bound` in `S` that has a nontrivial first-coordinate
/// semi-correlation of length `2ℓ`. The point set is symmetric under
/// `(a, b) → (b, a)`, so the second coordinate gives the same flags.
pub fn scan_admissible_eigenvalues(
    bound: u64,
    ell: usize,
    budget: &SearchBudget,
) -> Result<ScanReport> {
    check_ell(ell)?;
    let lambdas: Vec<u64> = (1..=bound).filter(|&n| is_sum_of_two_squares(n)).collect();
    // budget is shared across the scan: keep the longest affordable prefix
    let mut spent: u128 = 0;
    let mut affordable = Vec::with_capacity(lambdas.len());
    let mut truncated = false;
    for &lambda in &lambdas {
        let circle = lattice_points(lambda);
        let m = circle.projections(Axis::First).len();
        let raw = (circle.len() as u128).saturating_pow(2 * ell as u32);
        let est = if raw <= budget.mitm_threshold {
            binomial((m + 2 * ell - 1) as u128, 2 * ell as u128)
        } else {
            binomial((m + ell - 1) as u128, ell as u128).saturating_mul(2)
        };
        if spent + est > budget.max_candidates {
            truncated = true;
            break;
        }
        spent += est;
        affordable.push(lambda);
    }
    let per_budget = SearchBudget {
        max_candidates: budget.max_candidates,
        ..*budget
    };
    let flags: Vec<Result<bool>> = affordable
        .par_iter()
        .map(|&lambda| {
            find_semi_correlations(lambda, ell, Axis::First, &per_budget)
                .map(|r| !r.nontrivial_tuples.is_empty())
        })
        .collect();
    let mut rows = Vec::with_capacity(flags.len());
    let mut flagged = 0usize;
    for (i, (lambda, flag)) in affordable.iter().zip(flags).enumerate() {
        let flag = match flag {
            Ok(f) => f,
            Err(Error::BudgetExceeded { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        flagged += flag as usize;
        rows.push(ScanRow {
            lambda: *lambda,
            has_nontrivial_semi_correlation: flag,
            running_density: flagged as f64 / (i + 1) as f64,
        });
    }
    Ok(ScanReport {
        bound,
        ell,
        rows,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_points(n: u64) -> BTreeSet<(i64, i64)> {
        let r = (n as f64).sqrt().ceil() as i64 + 1;
        let mut s = BTreeSet::new();
        for a in -r..=r {
            for b in -r..=r {
                if (a * a + b * b) as u64 == n {
                    s.insert((a, b));
                }
            }
        }
        s
    }

    #[test]
    fn sum_of_two_squares_examples() {
        assert!(is_sum_of_two_squares(2));
        assert!(!is_sum_of_two_squares(21));
        assert!(is_sum_of_two_squares(325));
        // enumeration oracle for 325
        assert!(!brute_points(325).is_empty());
        assert!(is_sum_of_two_squares(1));
        assert!(!is_sum_of_two_squares(3));
    }

    #[test]
    fn points_examples() {
        let c5 = lattice_points(5);
        assert_eq!(c5.len(), 8);
        let set: BTreeSet<(i64, i64)> = c5.points.iter().map(|p| (p.x1, p.x2)).collect();
        assert_eq!(set, brute_points(5));
        assert!(lattice_points(3).is_empty());
        let c25 = lattice_points(25);
        assert_eq!(c25.len(), 12);
        assert_eq!(c25.points[0], LatticePoint::new(5, 0));
        assert_eq!(c25.points[1], LatticePoint::new(4, 3));
    }

    #[test]
    fn points_sorted_by_angle() {
        for n in [1u64, 2, 25, 65, 325, 1105, 4225] {
            let c = lattice_points(n);
            for w in c.points.windows(2) {
                assert!(w[0].angle() < w[1].angle(), "{n}: {:?}", w);
            }
        }
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(5).unwrap(), 8);
        assert_eq!(multiplicity(325).unwrap(), 24);
        assert_eq!(multiplicity(7).unwrap(), 0);
        assert!(multiplicity(0).is_err());
    }

    #[test]
    fn divisor_formula_agrees_with_enumeration() {
        for n in 1..=100_000u64 {
            assert_eq!(divisor_count_r2(n), lattice_points(n).len() as u64, "n={n}");
        }
    }

    #[test]
    fn dihedral_closure() {
        for n in 1..=10_000u64 {
            let c = lattice_points(n);
            if c.is_empty() {
                continue;
            }
            let set: BTreeSet<LatticePoint> = c.points.iter().copied().collect();
            for p in &c.points {
                for q in [
                    LatticePoint::new(-p.x1, p.x2),
                    LatticePoint::new(p.x1, -p.x2),
                    LatticePoint::new(p.x2, p.x1),
                    p.neg(),
                ] {
                    assert!(set.contains(&q), "n={n} missing {q:?}");
                }
            }
        }
    }

    #[test]
    fn triviality() {
        assert!(is_trivial(&[[1, 0], [-1, 0]]));
        assert!(is_trivial(&[[0, 0], [0, 0]]));
        assert!(!is_trivial(&[[0, 0], [1, 0], [-1, 0], [2, 0]]));
        assert!(!is_trivial(&[[5, 0], [3, 0], [-4, 0], [-4, 0]]));
        assert!(is_trivial(&[[1, 2], [1, 2], [-1, -2], [-1, -2]]));
    }

    #[test]
    fn correlations_examples() {
        let b = SearchBudget::default();
        assert!(find_correlations(5, 1, &b)
            .unwrap()
            .nontrivial_tuples
            .is_empty());
        assert!(find_correlations(5, 2, &b)
            .unwrap()
            .nontrivial_tuples
            .is_empty());
        assert!(matches!(
            find_correlations(3, 1, &b),
            Err(Error::NotRepresentable(3))
        ));
    }

    #[test]
    fn semi_correlation_witness() {
        let b = SearchBudget::default();
        let r = find_semi_correlations(25, 2, Axis::First, &b).unwrap();
        assert!(r
            .nontrivial_tuples
            .contains(&Tuple::Values(vec![5, 3, -4, -4])));
        assert!(find_semi_correlations(5, 2, Axis::First, &b)
            .unwrap()
            .nontrivial_tuples
            .is_empty());
        assert!(find_semi_correlations(7, 2, Axis::Second, &b)
            .unwrap()
            .nontrivial_tuples
            .is_empty());
    }

    #[test]
    fn mitm_matches_direct() {
        let direct = SearchBudget::default();
        let mitm = SearchBudget {
            mitm_threshold: 0,
            ..direct
        };
        for lambda in [25u64, 65, 325, 425] {
            for ell in 1..=3 {
                for axis in [Axis::First, Axis::FullVector] {
                    let circle = lattice_points(lambda);
                    let alphabet = alphabet_for(&circle, axis);
                    let w = SearchWants {
                        zeros: true,
                        minimum: true,
                    };
                    let a = search(&alphabet, circle.len(), ell, w, &direct).unwrap();
                    let b = search(&alphabet, circle.len(), ell, w, &mitm).unwrap();
                    assert_eq!(
                        a.zero_sum_nontrivial, b.zero_sum_nontrivial,
                        "{lambda} {ell} {axis:?}"
                    );
                    assert_eq!(a.min_nonzero, b.min_nonzero, "{lambda} {ell} {axis:?}");
                }
            }
        }
    }

    /// Ordered nested loops over lattice points; no multiset machinery.
    fn semi_oracle(lambda: u64, ell: usize) -> BTreeSet<Vec<i64>> {
        let vals: Vec<i64> = lattice_points(lambda).points.iter().map(|p| p.x1).collect();
        let n = vals.len();
        let mut out = BTreeSet::new();
        let mut check = |t: Vec<i64>| {
            if t.iter().sum::<i64>() == 0 {
                let pts: Vec<[i64; 2]> = t.iter().map(|&v| [v, 0]).collect();
                if !is_trivial(&pts) {
                    let mut t = t;
                    t.sort_unstable_by(|a, b| b.cmp(a));
                    out.insert(t);
                }
            }
        };
        for a in 0..n {
            for b in 0..n {
                if ell == 1 {
                    check(vec![vals[a], vals[b]]);
                    continue;
                }
                for c in 0..n {
                    for d in 0..n {
                        check(vec![vals[a], vals[b], vals[c], vals[d]]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn semi_correlations_match_nested_loop_oracle() {
        let b = SearchBudget::default();
        for lambda in 1..=130u64 {
            for ell in 1..=2 {
                let got: BTreeSet<Vec<i64>> = find_semi_correlations(lambda, ell, Axis::First, &b)
                    .unwrap()
                    .nontrivial_tuples
                    .into_iter()
                    .map(|t| match t {
                        Tuple::Values(v) => v,
                        Tuple::Points(_) => unreachable!(),
                    })
                    .collect();
                assert_eq!(got, semi_oracle(lambda, ell), "lambda={lambda} ell={ell}");
                if ell == 1 {
                    assert!(got.is_empty());
                }
            }
        }
    }

    #[test]
    fn quasi_examples() {
        let b = SearchBudget::default();
        let r = min_quasi_correlation(5, 2, Axis::First, 0.0, &b).unwrap();
        assert_eq!(r.min_nonzero_abs, Some(1.0));
        let r = min_quasi_correlation(25, 1, Axis::First, 0.0, &b).unwrap();
        assert_eq!(r.min_nonzero_abs, Some(1.0));
        // λ=2: (±1,±1); pair sums are (±2,0),(0,±2),(±2,±2),(0,0)
        let r = min_quasi_correlation(2, 1, Axis::FullVector, 0.1, &b).unwrap();
        assert_eq!(r.min_nonzero_abs, Some(2.0));
        let ratio = r.threshold_ratio.unwrap();
        assert!((ratio - 2.0 / 2f64.powf(-0.4)).abs() < 1e-12);
    }

    #[test]
    fn admissibility_examples() {
        let b = SearchBudget::default();
        // exhaustive check: every zero-sum 4-multiset of {±1, ±2} pairs off
        assert!(is_lambda_p_admissible(&[1, -1, 2, -2], 4, &b).unwrap());
        assert!(is_lambda_p_admissible(&[1, -1], 4, &b).unwrap());
        let proj: Vec<i64> = lattice_points(25).points.iter().map(|p| p.x1).collect();
        assert!(!is_lambda_p_admissible(&proj, 4, &b).unwrap());
        assert!(is_lambda_p_admissible(&[1, -1], 3, &b).is_err());
    }

    #[test]
    fn budget_exceeded_reports_estimate() {
        let tiny = SearchBudget {
            max_candidates: 10,
            mitm_threshold: 100_000_000,
        };
        match find_semi_correlations(325, 2, Axis::First, &tiny) {
            Err(Error::BudgetExceeded { estimated, budget }) => {
                assert!(estimated > 10);
                assert_eq!(budget, 10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scan_examples() {
        let b = SearchBudget::default();
        let r = scan_admissible_eigenvalues(30, 2, &b).unwrap();
        let flag = |l: u64| {
            r.rows
                .iter()
                .find(|row| row.lambda == l)
                .unwrap()
                .has_nontrivial_semi_correlation
        };
        assert!(flag(25));
        assert!(!flag(5));
        assert!(!r.truncated);
        let r = scan_admissible_eigenvalues(4, 2, &b).unwrap();
        let ls: Vec<u64> = r.rows.iter().map(|row| row.lambda).collect();
        assert_eq!(ls, vec![1, 2, 4]);
        assert!(r
            .rows
            .iter()
            .all(|row| !row.has_nontrivial_semi_correlation));
        assert!(scan_admissible_eigenvalues(0, 2, &b)
            .unwrap()
            .rows
            .is_empty());
    }

    #[test]
    fn scan_truncates_on_budget() {
        let b = SearchBudget {
            max_candidates: 200,
            mitm_threshold: 100_000_000,
        };
        let r = scan_admissible_eigenvalues(1000, 2, &b).unwrap();
        assert!(r.truncated);
        assert!(!r.rows.is_empty());
        assert!(r.rows.last().unwrap().lambda < 1000);
    }
}

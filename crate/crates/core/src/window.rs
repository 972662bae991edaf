//! Internal-space windows: the contractive IFS, finite approximants, exact
//! hulls and measures.

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qfield::{Field, FieldVal, QuadInt};
use crate::substitution::{Letter, SubstitutionSystem, A, B};

/// Closed interval with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: FieldVal,
    pub hi: FieldVal,
}

impl Interval {
    pub fn new(lo: FieldVal, hi: FieldVal) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn len(&self) -> FieldVal {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &FieldVal) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64, eps: f64) -> bool {
        x >= self.lo.embed() - eps && x <= self.hi.embed() + eps
    }

    /// `{y − x : x ∈ self, y ∈ other}`.
    pub fn minkowski_diff(&self, other: &Interval) -> Interval {
        Interval::new(&other.lo - &self.hi, &other.hi - &self.lo)
    }

    /// Image under `y ↦ s·y + t`.
    pub fn affine(&self, s: &FieldVal, t: &FieldVal) -> Interval {
        let a = &(s * &self.lo) + t;
        let b = &(s * &self.hi) + t;
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.lo.embed(), self.hi.embed())
    }
}

/// The maps `y ↦ μ⋆y + t⋆` for `t ∈ T_ij`, sending window `j` into window `i`.
#[derive(Clone, Debug)]
pub struct WindowIfs {
    field: Field,
    mu_star: QuadInt,
    offsets: [[Vec<QuadInt>; 2]; 2],
}

impl WindowIfs {
    pub fn new(sys: &SubstitutionSystem) -> WindowIfs {
        let mut offsets: [[Vec<QuadInt>; 2]; 2] = Default::default();
        for (i, row) in offsets.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = sys.displacement(i, j).iter().map(QuadInt::star).collect();
            }
        }
        let ifs = WindowIfs {
            field: sys.field(),
            mu_star: sys.mu().star(),
            offsets,
        };
        assert!(
            ifs.mu_star.embed().abs() < 1.0,
            "internal map is not contractive"
        );
        ifs
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The contraction factor `μ⋆`.
    pub fn mu_star(&self) -> &QuadInt {
        &self.mu_star
    }

    /// Translation parts `t⋆` of the maps from window `j` into window `i`.
    pub fn offsets(&self, i: Letter, j: Letter) -> &[QuadInt] {
        &self.offsets[i][j]
    }

    pub fn map_count(&self) -> usize {
        self.offsets.iter().flatten().map(Vec::len).sum()
    }

    fn small_maps(&self) -> Result<(Pair, [[Vec<Pair>; 2]; 2])> {
        let conv = |q: &QuadInt| -> Result<Pair> {
            let (a, b) = q
                .to_i64_pair()
                .ok_or_else(|| Error::ClosureFailure("IFS coefficients overflow".into()))?;
            Ok((a as i128, b as i128))
        };
        let mut offs: [[Vec<Pair>; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                offs[i][j] = self.offsets[i][j].iter().map(conv).collect::<Result<_>>()?;
            }
        }
        Ok((conv(&self.mu_star)?, offs))
    }

    /// Applies the set-valued IFS once.
    pub fn apply(&self, approx: &WindowApprox, exec: Exec) -> Result<WindowApprox> {
        let (mu, offs) = self.small_maps()?;
        let f = self.field;
        let points = [A, B].map(|i| {
            let mut jobs = Vec::new();
            for j in [A, B] {
                for t in &offs[i][j] {
                    jobs.push((j, *t));
                }
            }
            let parts = exec.map(&jobs, |&(j, t)| {
                approx.points[j]
                    .iter()
                    .map(|&p| add(mul(f, mu, p), t))
                    .collect::<Vec<_>>()
            });
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for part in parts {
                for p in part {
                    if seen.insert(p) {
                        out.push(p);
                    }
                }
            }
            out.sort_unstable();
            out
        });
        Ok(WindowApprox {
            field: f,
            depth: approx.depth + 1,
            points,
        })
    }
}

type Pair = (i128, i128);

fn mul(f: Field, x: Pair, y: Pair) -> Pair {
    let (p, q) = (f.p() as i128, f.q() as i128);
    let bb = x.1 * y.1;
    (x.0 * y.0 + q * bb, x.0 * y.1 + x.1 * y.0 + p * bb)
}

fn add(x: Pair, y: Pair) -> Pair {
    (x.0 + y.0, x.1 + y.1)
}

/// Exact point clouds approximating each window at a given depth.
///
/// Coordinates are kept as machine pairs `(a, b)` for `a + bω`; the memory cap
/// enforced by [`iterate_windows`] keeps them far from overflow.
#[derive(Clone, Debug)]
pub struct WindowApprox {
    field: Field,
    depth: usize,
    points: [Vec<Pair>; 2],
}

impl WindowApprox {
    pub fn seed(field: Field, seeds: [&QuadInt; 2]) -> Result<WindowApprox> {
        let conv = |q: &QuadInt| -> Result<Pair> {
            let (a, b) = q
                .to_i64_pair()
                .ok_or_else(|| Error::Parse("seed point too large".into()))?;
            Ok((a as i128, b as i128))
        };
        Ok(WindowApprox {
            field,
            depth: 0,
            points: [vec![conv(seeds[A])?], vec![conv(seeds[B])?]],
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self, i: Letter) -> usize {
        self.points[i].len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.iter().all(Vec::is_empty)
    }

    /// Raw coordinates `(a, b)` of the points of window `i`, sorted.
    pub fn coords(&self, i: Letter) -> &[(i128, i128)] {
        &self.points[i]
    }

    pub fn points(&self, i: Letter) -> impl Iterator<Item = QuadInt> + '_ {
        self.points[i]
            .iter()
            .map(move |&(a, b)| QuadInt::new(self.field, BigInt::from(a), BigInt::from(b)))
    }

    /// Internal-space coordinates as floats.
    pub fn floats(&self, i: Letter) -> Vec<f64> {
        self.points(i).map(|q| q.embed()).collect()
    }
}

/// Projected point count of a depth-`k` approximant seeded with one point per
/// window.
pub fn projected_points(sys: &SubstitutionSystem, depth: usize) -> u128 {
    let m = sys.matrix();
    let mut v = [1u128, 1u128];
    for _ in 0..depth {
        v = [
            (m[0][0] as u128 * v[0]).saturating_add(m[0][1] as u128 * v[1]),
            (m[1][0] as u128 * v[0]).saturating_add(m[1][1] as u128 * v[1]),
        ];
    }
    v[0].saturating_add(v[1])
}

/// Seed points taken from a legal mixed pair `xy`, with `x` at `−ℓ_x` and `y` at
/// 0. Seeding from genuine, distinct control points keeps the two point clouds
/// disjoint and duplicate-free at every depth.
pub fn tiling_seed_points(sys: &SubstitutionSystem) -> [QuadInt; 2] {
    let f = sys.field();
    let (x, y) = sys
        .legal_pairs()
        .into_iter()
        .find(|(x, y)| x != y)
        .expect("a primitive binary substitution has a mixed legal pair");
    let mut pts = [QuadInt::zero(f), QuadInt::zero(f)];
    pts[x] = (-sys.tile_length(x)).star();
    pts[y] = QuadInt::zero(f);
    pts
}

/// Depth-fold application of the IFS to one seed point per window.
pub fn iterate_windows(
    sys: &SubstitutionSystem,
    ifs: &WindowIfs,
    depth: usize,
    seeds: [&QuadInt; 2],
    cap: usize,
    exec: Exec,
) -> Result<WindowApprox> {
    let projected = projected_points(sys, depth);
    if projected > cap as u128 {
        return Err(Error::MemoryGuard { projected, cap });
    }
    let mut approx = WindowApprox::seed(ifs.field(), seeds)?;
    for _ in 0..depth {
        approx = ifs.apply(&approx, exec)?;
    }
    Ok(approx)
}

/// Exact convex hulls of both windows.
///
/// The hull vector is the unique fixed point of the interval extension of the
/// IFS. The float iteration identifies which map attains each endpoint; the
/// resulting affine equations are solved exactly and the fixed point verified.
/// If verification fails, an outward-rounded rational enclosure is returned.
pub fn window_bounds(ifs: &WindowIfs) -> [Interval; 2] {
    let f = ifs.field();
    let s = ifs.mu_star().embed();
    let offs: [[Vec<f64>; 2]; 2] =
        [A, B].map(|i| [A, B].map(|j| ifs.offsets(i, j).iter().map(QuadInt::embed).collect()));
    let mut h = [(-1e6, 1e6); 2];
    for _ in 0..10_000 {
        let next = [A, B].map(|i| float_image(s, &offs[i], &h));
        let delta = (0..2)
            .map(|i| (next[i].0 - h[i].0).abs().max((next[i].1 - h[i].1).abs()))
            .fold(0.0, f64::max);
        h = next;
        if delta < 1e-15 {
            break;
        }
    }
    exact_fixed_point(ifs, &h).unwrap_or_else(|| {
        let margin = 1e-12;
        let enclosure = [A, B].map(|i| {
            Interval::new(
                rational_below(f, h[i].0 - margin),
                rational_above(f, h[i].1 + margin),
            )
        });
        debug_assert!(verify_enclosure(ifs, &enclosure));
        enclosure
    })
}

fn float_image(s: f64, offs: &[Vec<f64>; 2], h: &[(f64, f64); 2]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in [A, B] {
        for &t in &offs[j] {
            let a = s * h[j].0 + t;
            let b = s * h[j].1 + t;
            lo = lo.min(a.min(b));
            hi = hi.max(a.max(b));
        }
    }
    (lo, hi)
}

// Unknowns ordered lo_a, hi_a, lo_b, hi_b.
fn exact_fixed_point(ifs: &WindowIfs, h: &[(f64, f64); 2]) -> Option<[Interval; 2]> {
    let f = ifs.field();
    let s = ifs.mu_star();
    let sf = s.embed();
    let flip = sf < 0.0;
    let mut rows: Vec<Vec<FieldVal>> = Vec::new();
    let mut rhs: Vec<FieldVal> = Vec::new();
    for i in [A, B] {
        for upper in [false, true] {
            // endpoint of window i attained by μ⋆·(endpoint e of j) + t⋆
            let mut best: Option<(f64, Letter, &QuadInt)> = None;
            for j in [A, B] {
                for t in ifs.offsets(i, j) {
                    let src = if upper != flip { h[j].1 } else { h[j].0 };
                    let v = sf * src + t.embed();
                    let better = match best {
                        None => true,
                        Some((bv, _, _)) => {
                            if upper {
                                v > bv
                            } else {
                                v < bv
                            }
                        }
                    };
                    if better {
                        best = Some((v, j, t));
                    }
                }
            }
            let (_, j, t) = best?;
            let src_upper = upper != flip;
            let mut row = vec![FieldVal::zero(f); 4];
            row[2 * i + upper as usize] = &row[2 * i + upper as usize] + &FieldVal::one(f);
            let c = 2 * j + src_upper as usize;
            row[c] = &row[c] - &FieldVal::from(s);
            rows.push(row);
            rhs.push(FieldVal::from(t));
        }
    }
    let x = solve_dense(rows, rhs)?;
    let hull = [
        Interval {
            lo: x[0].clone(),
            hi: x[1].clone(),
        },
        Interval {
            lo: x[2].clone(),
            hi: x[3].clone(),
        },
    ];
    if hull.iter().any(|iv| iv.lo > iv.hi) {
        return None;
    }
    (exact_image(ifs, &hull) == hull).then_some(hull)
}

/// Exact interval extension of the IFS.
pub fn exact_image(ifs: &WindowIfs, h: &[Interval; 2]) -> [Interval; 2] {
    let s = FieldVal::from(ifs.mu_star());
    [A, B].map(|i| {
        let mut acc: Option<Interval> = None;
        for j in [A, B] {
            for t in ifs.offsets(i, j) {
                let img = h[j].affine(&s, &FieldVal::from(t));
                acc = Some(match acc {
                    None => img,
                    Some(a) => a.hull(&img),
                });
            }
        }
        acc.expect("every window receives a map")
    })
}

fn verify_enclosure(ifs: &WindowIfs, h: &[Interval; 2]) -> bool {
    let img = exact_image(ifs, h);
    (0..2).all(|i| img[i].lo >= h[i].lo && img[i].hi <= h[i].hi)
}

fn rational_below(f: Field, x: f64) -> FieldVal {
    let scale = 1i64 << 40;
    let n = (x * scale as f64).floor() as i64;
    FieldVal::new(QuadInt::integer(f, n), scale).expect("nonzero scale")
}

fn rational_above(f: Field, x: f64) -> FieldVal {
    let scale = 1i64 << 40;
    let n = (x * scale as f64).ceil() as i64;
    FieldVal::new(QuadInt::integer(f, n), scale).expect("nonzero scale")
}

/// Solves a small square system exactly; `None` if singular.
pub fn solve_dense(mut a: Vec<Vec<FieldVal>>, mut b: Vec<FieldVal>) -> Option<Vec<FieldVal>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].inverse().ok()?;
        for k in c..n {
            a[c][k] = &a[c][k] * &inv;
        }
        b[c] = &b[c] * &inv;
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let factor = a[r][c].clone();
                for k in c..n {
                    let v = &factor * &a[c][k];
                    a[r][k] = &a[r][k] - &v;
                }
                let v = &factor * &b[c];
                b[r] = &b[r] - &v;
            }
        }
    }
    Some(b)
}

/// Window measures `vol(W_i)` and the total `vol(W)`.
pub fn window_measures(sys: &SubstitutionSystem) -> ([FieldVal; 2], FieldVal) {
    let total = &sys.density() * &sys.covolume();
    let parts = [&sys.freq()[A] * &total, &sys.freq()[B] * &total];
    (parts, total)
}

/// Covering estimate of the window measures from a depth-`k` approximant.
///
/// Every point `p` of the approximant stands for a piece `p + (μ⋆)ᵏ(W_j − s_j)`
/// of its window, covered by the matching scaled hull. The measure of the union
/// of these intervals is estimated by uniform sampling over the window hull.
#[derive(Clone, Debug, Serialize)]
pub struct CoverEstimate {
    pub depth: usize,
    pub samples: usize,
    /// Monte-Carlo estimate per window.
    pub estimate: [f64; 2],
    /// Exact length of the covering union (float endpoints).
    pub union_length: [f64; 2],
}

pub fn cover_estimate(
    sys: &SubstitutionSystem,
    depth: usize,
    samples: usize,
    rng_seed: u64,
    cap: usize,
) -> Result<CoverEstimate> {
    let projected = projected_points(sys, depth);
    if projected > cap as u128 {
        return Err(Error::MemoryGuard { projected, cap });
    }
    let ifs = WindowIfs::new(sys);
    let hulls = window_bounds(&ifs);
    let (mu, offs) = ifs.small_maps()?;
    let f = ifs.field();
    // points tagged with the window they were seeded in
    let mut pts: [HashSet<(Pair, Letter)>; 2] = [
        [((0, 0), A)].into_iter().collect(),
        [((0, 0), B)].into_iter().collect(),
    ];
    for _ in 0..depth {
        pts = [A, B].map(|i| {
            let mut out = HashSet::new();
            for j in [A, B] {
                for &t in &offs[i][j] {
                    for &(p, src) in &pts[j] {
                        out.insert((add(mul(f, mu, p), t), src));
                    }
                }
            }
            out
        });
    }
    let scale = ifs.mu_star().embed().powi(depth as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut estimate = [0.0; 2];
    let mut union_length = [0.0; 2];
    for i in [A, B] {
        let mut ivs: Vec<(f64, f64)> = pts[i]
            .iter()
            .map(|&((a, b), src)| {
                let x = QuadInt::new(f, a, b).embed();
                let (lo, hi) = hulls[src].to_f64();
                let (u, v) = (x + scale * lo, x + scale * hi);
                (u.min(v), u.max(v))
            })
            .collect();
        ivs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in ivs {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        union_length[i] = merged.iter().map(|(a, b)| b - a).sum();
        let (lo, hi) = hulls[i].to_f64();
        let lo = lo.min(merged.first().map_or(lo, |m| m.0));
        let hi = hi.max(merged.last().map_or(hi, |m| m.1));
        let mut hits = 0usize;
        for _ in 0..samples {
            let x: f64 = rng.random_range(lo..hi);
            let k = merged.partition_point(|m| m.0 <= x);
            if k > 0 && x <= merged[k - 1].1 {
                hits += 1;
            }
        }
        estimate[i] = (hi - lo) * hits as f64 / samples.max(1) as f64;
    }
    Ok(CoverEstimate {
        depth,
        samples,
        estimate,
        union_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ssm() -> SubstitutionSystem {
        SubstitutionSystem::parse("a -> bba; b -> ab").unwrap()
    }

    fn sigma() -> SubstitutionSystem {
        SubstitutionSystem::parse("a -> aaaaabb; b -> baa").unwrap()
    }

    fn fib() -> SubstitutionSystem {
        SubstitutionSystem::parse("a -> ab; b -> a").unwrap()
    }

    fn s2(a: i64, b: i64) -> QuadInt {
        QuadInt::new(Field::SQRT2, a, b)
    }

    #[test]
    fn ifs_map_counts() {
        let ifs = WindowIfs::new(&ssm());
        assert_eq!(ifs.mu_star(), &s2(1, -1));
        assert_eq!(ifs.offsets(B, A), &[s2(0, 0), s2(1, 0)]);
        // star(λ − 1) = −√2
        assert_eq!(ifs.offsets(B, B), &[s2(0, -1)]);
        assert_eq!(ifs.map_count(), 5);
        let sig = WindowIfs::new(&sigma());
        assert_eq!(sig.offsets(A, A).len() + sig.offsets(A, B).len(), 7);
        assert_eq!(sig.offsets(B, A).len() + sig.offsets(B, B).len(), 3);
        assert_eq!(sig.map_count(), 10);
    }

    #[test]
    fn depth_one_ssm() {
        let sys = ssm();
        let ifs = WindowIfs::new(&sys);
        let zero = QuadInt::zero(Field::SQRT2);
        let d0 = iterate_windows(&sys, &ifs, 0, [&zero, &zero], 100, Exec::Sequential).unwrap();
        assert_eq!((d0.len(A), d0.len(B)), (1, 1));
        let d1 = iterate_windows(&sys, &ifs, 1, [&zero, &zero], 100, Exec::Sequential).unwrap();
        let a: Vec<QuadInt> = d1.points(A).collect();
        assert_eq!(a, vec![s2(0, 0), s2(2, 0)]);
    }

    #[test]
    fn memory_guard() {
        let sys = sigma();
        let ifs = WindowIfs::new(&sys);
        let zero = QuadInt::zero(Field::SQRT2);
        let err = iterate_windows(&sys, &ifs, 12, [&zero, &zero], 1000, Exec::Sequential);
        assert!(matches!(err, Err(Error::MemoryGuard { cap: 1000, .. })));
    }

    #[test]
    fn fibonacci_hulls_are_known_intervals() {
        let sys = fib();
        let f = Field::GOLDEN;
        let ifs = WindowIfs::new(&sys);
        let h = window_bounds(&ifs);
        let phi = |a: i64, b: i64| FieldVal::from(QuadInt::new(f, a, b));
        // W_a = [φ−2, φ−1], W_b = [−1, φ−2]
        assert_eq!(h[A], Interval::new(phi(-2, 1), phi(-1, 1)));
        assert_eq!(h[B], Interval::new(phi(-1, 0), phi(-2, 1)));
        let (parts, total) = window_measures(&sys);
        assert_eq!(total, phi(0, 1));
        assert_eq!(parts[A], h[A].len());
        assert_eq!(parts[B], h[B].len());
    }

    #[test]
    fn hulls_are_exact_fixed_points() {
        for sys in [ssm(), sigma(), fib()] {
            let ifs = WindowIfs::new(&sys);
            let h = window_bounds(&ifs);
            assert_eq!(exact_image(&ifs, &h), h);
            // every hull endpoint has denominator free of the fallback scale
            for iv in &h {
                assert!(iv.lo.d().bits() < 20 && iv.hi.d().bits() < 20);
            }
        }
    }

    #[test]
    fn ssm_measures() {
        let (parts, total) = window_measures(&ssm());
        assert_eq!(total, FieldVal::from(s2(1, 1)));
        assert_eq!(parts[A], FieldVal::one(Field::SQRT2));
        assert_eq!(parts[B], FieldVal::from(s2(0, 1)));
    }

    #[test]
    fn approximants_lie_in_bounds_and_stay_disjoint() {
        for sys in [ssm(), sigma()] {
            let ifs = WindowIfs::new(&sys);
            let h = window_bounds(&ifs);
            let seeds = tiling_seed_points(&sys);
            let depth = 8;
            for k in 0..=depth {
                let w = iterate_windows(
                    &sys,
                    &ifs,
                    k,
                    [&seeds[A], &seeds[B]],
                    1 << 24,
                    Exec::Parallel,
                )
                .unwrap();
                let a: HashSet<_> = w.coords(A).iter().collect();
                assert!(w.coords(B).iter().all(|p| !a.contains(p)), "depth {k}");
                if k == depth {
                    for i in [A, B] {
                        assert!(w.points(i).all(|q| h[i].contains(&FieldVal::from(q))));
                    }
                }
            }
        }
    }

    #[test]
    fn point_counts_follow_matrix_powers() {
        let sys = ssm();
        let ifs = WindowIfs::new(&sys);
        let seeds = tiling_seed_points(&sys);
        let w = iterate_windows(
            &sys,
            &ifs,
            7,
            [&seeds[A], &seeds[B]],
            1 << 20,
            Exec::Sequential,
        )
        .unwrap();
        let m = crate::substitution::matrix_power(&sys.matrix(), 7);
        for i in [A, B] {
            let expected = &m[i][A] + &m[i][B];
            assert_eq!(BigInt::from(w.len(i)), expected);
        }
    }

    #[test]
    fn ifs_consistency() {
        let sys = sigma();
        let ifs = WindowIfs::new(&sys);
        let zero = QuadInt::zero(Field::SQRT2);
        let w4 = iterate_windows(&sys, &ifs, 4, [&zero, &zero], 1 << 24, Exec::Parallel).unwrap();
        let w5 = iterate_windows(&sys, &ifs, 5, [&zero, &zero], 1 << 24, Exec::Sequential).unwrap();
        let next = ifs.apply(&w4, Exec::Sequential).unwrap();
        for i in [A, B] {
            assert_eq!(next.coords(i), w5.coords(i));
        }
    }

    #[test]
    fn patch_stars_lie_in_bounds() {
        for (sys, seed, level) in [(ssm(), "a|a", 10), (sigma(), "a|b", 5), (fib(), "a|a", 14)] {
            let h = window_bounds(&WindowIfs::new(&sys));
            let patch = sys.generate_patch(level, seed).unwrap();
            for i in [A, B] {
                for x in patch.control_points(i) {
                    assert!(h[i].contains(&FieldVal::from(x.star())));
                }
            }
        }
    }

    #[test]
    fn covering_union_shrinks_towards_the_measure() {
        let sys = ssm();
        let (parts, _) = window_measures(&sys);
        let mut prev = [f64::INFINITY; 2];
        for depth in [4, 6, 8, 10] {
            let c = cover_estimate(&sys, depth, 20_000, 7, 1 << 20).unwrap();
            for i in [A, B] {
                let exact = parts[i].embed();
                assert!(c.union_length[i] >= exact - 1e-9);
                assert!(c.union_length[i] <= prev[i] + 1e-9);
                // binomial noise on a hull of length < 4
                assert!((c.estimate[i] - c.union_length[i]).abs() < 0.1);
                prev[i] = c.union_length[i];
            }
        }
    }
}

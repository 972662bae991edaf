//! Exact renormalisation of the pair correlations: relations, the finite
//! self-consistent core, memoised recursion and covariogram sampling.

use std::collections::{BTreeSet, HashMap};

use dashmap::DashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg;
use crate::qfield::{Field, FieldVal, QuadInt};
use crate::substitution::{tile_counts, Letter, Patch, SubstitutionSystem, A, B};
use crate::window::{window_bounds, Interval, WindowIfs};

pub const PAIRS: [(Letter, Letter); 4] = [(A, A), (A, B), (B, A), (B, B)];

const CLOSURE_ITERATIONS: usize = 64;

/// One term `(1/μ)·ν_kl((z + shift)/μ)` of the relation for `ν_ij(z)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Term {
    pub k: Letter,
    pub l: Letter,
    pub shift: QuadInt,
}

/// The fully expanded renormalisation relations of a system.
#[derive(Clone, Debug)]
pub struct RelationSet {
    terms: [[Vec<Term>; 2]; 2],
}

impl RelationSet {
    pub fn terms(&self, i: Letter, j: Letter) -> &[Term] {
        &self.terms[i][j]
    }

    /// Terms with equal `(k, l, shift)` merged, with their multiplicity.
    pub fn collected(&self, i: Letter, j: Letter) -> Vec<(Term, usize)> {
        let mut out: Vec<(Term, usize)> = Vec::new();
        let mut sorted = self.terms[i][j].clone();
        sorted.sort();
        for t in sorted {
            match out.last_mut() {
                Some((last, n)) if *last == t => *n += 1,
                _ => out.push((t, 1)),
            }
        }
        out
    }

    /// Largest `|r − s|` over all terms.
    pub fn max_shift(&self) -> QuadInt {
        self.terms
            .iter()
            .flatten()
            .flatten()
            .map(|t| t.shift.abs())
            .max()
            .expect("relations are never empty")
    }
}

/// Expands `ν_ij(z) = (1/μ) Σ_{k,l} Σ_{r∈T_ik} Σ_{s∈T_jl} ν_kl((z + r − s)/μ)`.
pub fn build_relations(sys: &SubstitutionSystem) -> RelationSet {
    let mut terms: [[Vec<Term>; 2]; 2] = Default::default();
    for (i, j) in PAIRS {
        for (k, l) in PAIRS {
            for r in sys.displacement(i, k) {
                for s in sys.displacement(j, l) {
                    terms[i][j].push(Term { k, l, shift: r - s });
                }
            }
        }
    }
    RelationSet { terms }
}

/// How the radius `R` of the self-consistent core is chosen.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum CutoffRule {
    /// `maxshift/(μ−1)`, the smallest radius the recursion cannot escape.
    Minimal,
    /// `maxshift·μ/(μ−1)`.
    #[default]
    Inflated,
    /// A given radius, at least the minimal one.
    Fixed(FieldVal),
}

impl CutoffRule {
    pub fn resolve(&self, sys: &SubstitutionSystem, rel: &RelationSet) -> Result<FieldVal> {
        let f = sys.field();
        let mu = FieldVal::from(sys.mu());
        let minimal = &FieldVal::from(rel.max_shift()) / &(&mu - &FieldVal::one(f));
        match self {
            CutoffRule::Minimal => Ok(minimal),
            CutoffRule::Inflated => Ok(&minimal * &mu),
            CutoffRule::Fixed(r) if *r >= minimal => Ok(r.clone()),
            CutoffRule::Fixed(r) => Err(Error::CutoffTooSmall {
                cutoff: r.to_string(),
                required: minimal.to_string(),
            }),
        }
    }
}

/// Realised distances with `|z| ≤ R`, per ordered letter pair.
#[derive(Clone, Debug)]
pub struct CoreSet {
    pub cutoff: FieldVal,
    pub per_pair: [[BTreeSet<QuadInt>; 2]; 2],
    /// Union over all pairs, in increasing order.
    pub distances: Vec<QuadInt>,
    pub iterations: usize,
}

fn within(z: &QuadInt, r: &FieldVal) -> bool {
    &FieldVal::from(z.abs()) <= r
}

/// Closes the distances of adjacent and coincident tiles under
/// `w ↦ μw − (r − s)` inside `[−R, R]`.
pub fn core_distance_set(
    sys: &SubstitutionSystem,
    rel: &RelationSet,
    rule: &CutoffRule,
) -> Result<CoreSet> {
    let cutoff = rule.resolve(sys, rel)?;
    let f = sys.field();
    let mut per_pair: [[BTreeSet<QuadInt>; 2]; 2] = Default::default();
    for i in [A, B] {
        per_pair[i][i].insert(QuadInt::zero(f));
    }
    for (x, y) in sys.legal_pairs() {
        let l = sys.tile_length(x);
        if within(l, &cutoff) {
            per_pair[x][y].insert(l.clone());
            per_pair[y][x].insert(-l);
        }
    }
    let mu = sys.mu();
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > CLOSURE_ITERATIONS {
            return Err(Error::ClosureFailure(format!(
                "distance set not stable after {CLOSURE_ITERATIONS} rounds"
            )));
        }
        let mut changed = false;
        for (i, j) in PAIRS {
            for t in rel.terms(i, j) {
                let found: Vec<QuadInt> = per_pair[t.k][t.l]
                    .iter()
                    .map(|w| &(mu * w) - &t.shift)
                    .filter(|z| within(z, &cutoff) && !per_pair[i][j].contains(z))
                    .collect();
                changed |= !found.is_empty();
                per_pair[i][j].extend(found);
            }
        }
        if !changed {
            break;
        }
    }
    let union: BTreeSet<QuadInt> = per_pair.iter().flatten().flatten().cloned().collect();
    let set = CoreSet {
        cutoff,
        per_pair,
        distances: union.into_iter().collect(),
        iterations,
    };
    // the recursion from any core argument stays inside the cutoff
    let mu_inv = mu.unit_inverse()?;
    for z in &set.distances {
        for (i, j) in PAIRS {
            for t in rel.terms(i, j) {
                let arg = &(z + &t.shift) * &mu_inv;
                if !within(&arg, &set.cutoff) {
                    return Err(Error::ClosureFailure(format!(
                        "argument {arg} of ν_{i}{j}({z}) leaves the core radius"
                    )));
                }
            }
        }
    }
    Ok(set)
}

type Key = (Letter, Letter, QuadInt);

/// The solved self-consistent core plus a memo of recursively evaluated values.
#[derive(Debug)]
pub struct CorrelationTable {
    sys: SubstitutionSystem,
    relations: RelationSet,
    collected: [[Vec<(Term, usize)>; 2]; 2],
    core_set: CoreSet,
    core: HashMap<Key, FieldVal>,
    mu: FieldVal,
    mu_inv: QuadInt,
    cutoff_f64: f64,
    hulls: [Interval; 2],
    star_bounds: [[Interval; 2]; 2],
    star_bounds_f64: [[(f64, f64); 2]; 2],
    memo: DashMap<Key, FieldVal>,
}

/// Solves the relations restricted to the core for the one-dimensional family
/// of solutions and normalises it by `Σ_i ν_ii(0) = 1`.
pub fn solve_self_consistent(
    sys: &SubstitutionSystem,
    rule: &CutoffRule,
) -> Result<CorrelationTable> {
    let f = sys.field();
    let relations = build_relations(sys);
    let core_set = core_distance_set(sys, &relations, rule)?;
    let d = &core_set.distances;
    let n = d.len();
    let pair_index = |i: Letter, j: Letter| 2 * i + j;
    let position: HashMap<&QuadInt, usize> = d.iter().enumerate().map(|(k, z)| (z, k)).collect();
    let col = |i: Letter, j: Letter, k: usize| pair_index(i, j) * n + k;
    let ncols = 4 * n;
    let mu = sys.mu();
    let mu_inv = mu.unit_inverse()?;
    let zero = QuadInt::zero(f);
    let one = QuadInt::one(f);

    let mut rows: Vec<Vec<QuadInt>> = Vec::new();
    for (i, j) in PAIRS {
        for (kz, z) in d.iter().enumerate() {
            let mut row = vec![zero.clone(); ncols];
            row[col(i, j, kz)] = mu.clone();
            for t in relations.terms(i, j) {
                let arg = &(z + &t.shift) * &mu_inv;
                // arguments that are not realised distances carry ν = 0
                if let Some(&ka) = position.get(&arg) {
                    row[col(t.k, t.l, ka)] -= &one;
                }
            }
            rows.push(row);
            if let Some(&km) = position.get(&-z) {
                if (i, j, kz) != (j, i, km) {
                    let mut row = vec![zero.clone(); ncols];
                    row[col(i, j, kz)] = one.clone();
                    row[col(j, i, km)] = -&one;
                    rows.push(row);
                }
            }
        }
    }
    let k0 = position[&zero];
    for (i, j) in [(A, B), (B, A)] {
        let mut row = vec![zero.clone(); ncols];
        row[col(i, j, k0)] = one.clone();
        rows.push(row);
    }
    let ker = linalg::kernel(f, rows, ncols);
    if ker.dimension() != 1 {
        return Err(Error::Degenerate {
            rank: ker.rank,
            unknowns: ncols,
            kernel: ker.dimension(),
        });
    }
    let v = &ker.basis[0];
    let norm = &v[col(A, A, k0)] + &v[col(B, B, k0)];
    if norm.is_zero() {
        return Err(Error::Degenerate {
            rank: ker.rank,
            unknowns: ncols,
            kernel: 1,
        });
    }
    let mut core = HashMap::new();
    for (i, j) in PAIRS {
        for (kz, z) in d.iter().enumerate() {
            let val = &v[col(i, j, kz)] / &norm;
            let realised = core_set.per_pair[i][j].contains(z);
            if val.is_zero() == realised {
                return Err(Error::ClosureFailure(format!(
                    "ν_{i}{j}({z}) = {val} disagrees with the realised distance set"
                )));
            }
            if !val.is_zero() {
                core.insert((i, j, z.clone()), val);
            }
        }
    }
    for i in [A, B] {
        let got = core
            .get(&(i, i, zero.clone()))
            .cloned()
            .unwrap_or(FieldVal::zero(f));
        if got != sys.freq()[i] {
            return Err(Error::FrequencyMismatch(format!(
                "ν_{i}{i}(0) = {got}, frequency {}",
                sys.freq()[i]
            )));
        }
    }

    let hulls = window_bounds(&WindowIfs::new(sys));
    let star_bounds = [A, B].map(|i| [A, B].map(|j| hulls[i].minkowski_diff(&hulls[j])));
    let star_bounds_f64 = star_bounds.clone().map(|r| r.map(|iv| iv.to_f64()));
    let collected = [A, B].map(|i| [A, B].map(|j| relations.collected(i, j)));
    Ok(CorrelationTable {
        sys: sys.clone(),
        cutoff_f64: core_set.cutoff.embed(),
        relations,
        collected,
        core_set,
        core,
        mu: FieldVal::from(mu),
        mu_inv,
        hulls,
        star_bounds,
        star_bounds_f64,
        memo: DashMap::new(),
    })
}

/// Float tolerance below which exact comparisons take over.
const GUARD: f64 = 1e-9;

impl CorrelationTable {
    pub fn system(&self) -> &SubstitutionSystem {
        &self.sys
    }

    pub fn field(&self) -> Field {
        self.sys.field()
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn core_set(&self) -> &CoreSet {
        &self.core_set
    }

    pub fn cutoff(&self) -> &FieldVal {
        &self.core_set.cutoff
    }

    /// Exact hulls of the two windows.
    pub fn window_hulls(&self) -> &[Interval; 2] {
        &self.hulls
    }

    /// Over-approximation `hull(W_j) − hull(W_i)` of the support of `ν_ij` in
    /// internal space.
    pub fn star_bound(&self, i: Letter, j: Letter) -> &Interval {
        &self.star_bounds[i][j]
    }

    /// All core values, zeros included, ordered by pair and distance.
    pub fn core_entries(&self) -> Vec<(Letter, Letter, QuadInt, FieldVal)> {
        let mut out = Vec::new();
        for (i, j) in PAIRS {
            for z in &self.core_set.distances {
                let v = self.core_value(i, j, z);
                out.push((i, j, z.clone(), v));
            }
        }
        out
    }

    fn core_value(&self, i: Letter, j: Letter, z: &QuadInt) -> FieldVal {
        self.core
            .get(&(i, j, z.clone()))
            .cloned()
            .unwrap_or_else(|| FieldVal::zero(self.field()))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear_memo(&self) {
        self.memo.clear();
    }

    /// Replaces one core value; used to build corrupted fixtures in checks.
    pub fn set_core_value(&mut self, i: Letter, j: Letter, z: QuadInt, v: FieldVal) {
        self.memo.clear();
        if v.is_zero() {
            self.core.remove(&(i, j, z));
        } else {
            self.core.insert((i, j, z), v);
        }
    }

    fn in_core_radius(&self, z: &QuadInt) -> bool {
        let x = z.embed().abs();
        if x < self.cutoff_f64 - GUARD {
            true
        } else if x > self.cutoff_f64 + GUARD {
            false
        } else {
            within(z, &self.core_set.cutoff)
        }
    }

    /// Whether `z⋆` lies in the support bound of `ν_ij`.
    pub fn in_star_bound(&self, i: Letter, j: Letter, z: &QuadInt) -> bool {
        let s = z.embed_star();
        let (lo, hi) = self.star_bounds_f64[i][j];
        if s > lo + GUARD && s < hi - GUARD {
            true
        } else if s < lo - GUARD || s > hi + GUARD {
            false
        } else {
            self.star_bounds[i][j].contains(&FieldVal::from(z.star()))
        }
    }

    /// `ν_ij(z)`, exactly.
    pub fn evaluate(&self, i: Letter, j: Letter, z: &QuadInt) -> FieldVal {
        if self.in_core_radius(z) {
            return self.core_value(i, j, z);
        }
        if !self.in_star_bound(i, j, z) {
            return FieldVal::zero(self.field());
        }
        let key = (i, j, z.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = &self.relation_rhs(i, j, z) / &self.mu;
        self.memo.insert(key, v.clone());
        v
    }

    /// `Σ ν_kl((z + shift)/μ)` over the terms of the `(i, j)` relation.
    fn relation_rhs(&self, i: Letter, j: Letter, z: &QuadInt) -> FieldVal {
        let mut acc = FieldVal::zero(self.field());
        for (t, mult) in &self.collected[i][j] {
            let arg = &(z + &t.shift) * &self.mu_inv;
            let v = self.evaluate(t.k, t.l, &arg);
            if !v.is_zero() {
                acc = &acc
                    + &if *mult == 1 {
                        v
                    } else {
                        &v * &FieldVal::integer(self.field(), *mult as i64)
                    };
            }
        }
        acc
    }

    /// `μ·ν_ij(z) − Σ ν_kl((z + shift)/μ)`; the exact zero when the table is
    /// self-consistent.
    pub fn residual(&self, i: Letter, j: Letter, z: &QuadInt) -> FieldVal {
        &(&self.mu * &self.evaluate(i, j, z)) - &self.relation_rhs(i, j, z)
    }

    /// `ν(z) = Σ_ij ν_ij(z)`.
    pub fn total(&self, z: &QuadInt) -> FieldVal {
        PAIRS
            .iter()
            .fold(FieldVal::zero(self.field()), |acc, &(i, j)| {
                &acc + &self.evaluate(i, j, z)
            })
    }
}

/// Which correlation a sample reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum PairSelector {
    #[default]
    Total,
    Pair(Letter, Letter),
}

/// One distance of a covariogram sample with all four correlations.
#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub z: QuadInt,
    pub zstar: f64,
    pub nu: [[FieldVal; 2]; 2],
    pub total: FieldVal,
    /// Tile counts `(n_a, n_b)` of `z`.
    pub counts: (i64, i64),
}

impl Sample {
    pub fn value(&self, sel: PairSelector) -> &FieldVal {
        match sel {
            PairSelector::Total => &self.total,
            PairSelector::Pair(i, j) => &self.nu[i][j],
        }
    }

    pub fn parity(&self) -> Parity {
        if self.counts.1.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Samples {
    pub points: Vec<Sample>,
    /// Distinct distances dropped by the cap.
    pub truncated: usize,
}

/// Distinct control-point differences of a patch as tile counts, both signs.
///
/// Spans (tile distances) are scanned nearest first, so a cap keeps the
/// differences with the fewest tiles in between. The second value counts the
/// distinct differences dropped from the scanned spans; spans beyond the cap are
/// not scanned at all.
pub fn patch_differences(patch: &Patch, cap: usize, exec: Exec) -> (Vec<(i64, i64)>, usize) {
    const CHUNK: usize = 64;
    let word = patch.word();
    let n = word.len();
    let mut prefix_a = Vec::with_capacity(n + 1);
    prefix_a.push(0i64);
    for &c in word {
        prefix_a.push(prefix_a.last().unwrap() + (c == A) as i64);
    }
    // the a-counts of the windows of one span form a short range
    let span_counts = |span: usize| -> Vec<i64> {
        let counts = (0..n - span).map(|x| prefix_a[x + span] - prefix_a[x]);
        let (lo, hi) = counts
            .clone()
            .fold((i64::MAX, i64::MIN), |(lo, hi), c| (lo.min(c), hi.max(c)));
        let mut hit = vec![false; (hi - lo + 1) as usize];
        for c in counts {
            hit[(c - lo) as usize] = true;
        }
        (lo..=hi).filter(|c| hit[(c - lo) as usize]).collect()
    };
    let mut out: Vec<(i64, i64)> = Vec::new();
    let mut dropped = 0;
    let mut start = 0;
    while start < n {
        let spans: Vec<usize> = (start..(start + CHUNK).min(n)).collect();
        let chunk = exec.map(&spans, |&span| span_counts(span));
        for (span, counts) in spans.into_iter().zip(chunk) {
            for na in counts {
                let nb = span as i64 - na;
                let both = if span == 0 {
                    vec![(na, nb)]
                } else {
                    vec![(na, nb), (-na, -nb)]
                };
                for d in both {
                    if out.len() < cap {
                        out.push(d);
                    } else {
                        dropped += 1;
                    }
                }
            }
        }
        if out.len() >= cap {
            break;
        }
        start += CHUNK;
    }
    (out, dropped)
}

/// Evaluates every correlation at the distinct differences of `patch`, sorted
/// by internal-space coordinate.
pub fn covariogram_samples(
    table: &CorrelationTable,
    patch: &Patch,
    cap: usize,
    exec: Exec,
) -> Samples {
    let (diffs, truncated) = patch_differences(patch, cap, exec);
    if truncated > 0 {
        log::warn!("sample cap {cap} reached; {truncated} distances dropped");
    }
    let mut points: Vec<Sample> = exec.map(&diffs, |&counts| {
        let z = patch.to_quad(counts);
        let nu = [A, B].map(|i| [A, B].map(|j| table.evaluate(i, j, &z)));
        let total = nu
            .iter()
            .flatten()
            .fold(FieldVal::zero(table.field()), |acc, v| &acc + v);
        Sample {
            zstar: z.embed_star(),
            z,
            nu,
            total,
            counts,
        }
    });
    points.sort_by(|x, y| x.zstar.total_cmp(&y.zstar).then_with(|| x.z.cmp(&y.z)));
    Samples { points, truncated }
}

/// Which conditions [`valid_distance`] applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum ValidityRule {
    /// Return-module membership and the inflated internal-space bound.
    #[default]
    ReturnModule,
    /// Additionally the coordinate parity rule.
    WithParity,
}

/// Whether `z` can carry a nonzero correlation.
pub fn valid_distance(table: &CorrelationTable, z: &QuadInt, rule: ValidityRule) -> bool {
    let sys = table.system();
    if tile_counts(sys, z).is_none() {
        return false;
    }
    let margin = FieldVal::from(sys.tile_lengths().iter().max().expect("two letters"));
    let h = table.window_hulls();
    let all = h[A].hull(&h[B]);
    let diff = all.minkowski_diff(&all);
    let bound = Interval::new(&diff.lo - &margin, &diff.hi + &margin);
    if !bound.contains(&FieldVal::from(z.star())) {
        return false;
    }
    match rule {
        ValidityRule::ReturnModule => true,
        ValidityRule::WithParity => coordinate_parity_rule(sys, z),
    }
}

/// The rule "the integer coordinates of `z` have equal parity, or one of them
/// is zero", with coordinates the tile counts of `z`.
pub fn coordinate_parity_rule(sys: &SubstitutionSystem, z: &QuadInt) -> bool {
    match tile_counts(sys, z) {
        None => false,
        Some((x, y)) => {
            use num_traits::Zero;
            x.is_zero() || y.is_zero() || (&x % 2i32).is_zero() == (&y % 2i32).is_zero()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
    Undefined,
}

/// Parity of the number of `b`-tiles between the two control points, over every
/// realisation of `z` in `patch`.
pub fn parity_class(sys: &SubstitutionSystem, patch: &Patch, z: &QuadInt) -> Result<Parity> {
    let not_found = || Error::DistanceNotFound(z.to_string());
    let (na, nb) = crate::substitution::tile_counts_i64(sys, z).ok_or_else(not_found)?;
    let span = (na + nb).unsigned_abs() as usize;
    let word = patch.word();
    if span >= word.len().max(1) {
        return Err(not_found());
    }
    let coords = patch.tile_coords();
    let mut seen: Option<bool> = None;
    for x in 0..word.len() - span {
        let (lo, hi) = if na + nb >= 0 {
            (x, x + span)
        } else {
            (x + span, x)
        };
        let d = (coords[hi].0 - coords[lo].0, coords[hi].1 - coords[lo].1);
        if d != (na, nb) {
            continue;
        }
        let left = lo.min(hi);
        let bs = word[left..left + span].iter().filter(|&&c| c == B).count();
        let odd = bs % 2 == 1;
        match seen {
            None => seen = Some(odd),
            Some(p) if p != odd => return Ok(Parity::Undefined),
            _ => {}
        }
    }
    match seen {
        None => Err(not_found()),
        Some(true) => Ok(Parity::Odd),
        Some(false) => Ok(Parity::Even),
    }
}

/// Summary of a bulk parity scan.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ParityScan {
    pub distances: usize,
    pub even: usize,
    pub odd: usize,
    /// Tile counts of distances with realisations of both parities.
    pub undefined: Vec<(i64, i64)>,
}

/// Parity of every distance realised by tiles at most `max_span` apart inside
/// `word`, counting `b`-tiles directly for each realisation.
pub fn parity_scan(word: &[Letter], max_span: usize, exec: Exec) -> ParityScan {
    let n = word.len();
    let max_span = max_span.min(n.saturating_sub(1));
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push((0i64, 0i64));
    for &c in word {
        let (a, b) = *prefix.last().unwrap();
        prefix.push(if c == A { (a + 1, b) } else { (a, b + 1) });
    }
    let per_span: Vec<(usize, usize, usize, Vec<(i64, i64)>)> =
        exec.map_range(max_span + 1, |span| {
            // a-count of the window -> parity of its b-tiles
            let mut classes: HashMap<i64, (bool, bool)> = HashMap::new();
            for x in 0..n - span {
                let na = prefix[x + span].0 - prefix[x].0;
                let bs = prefix[x + span].1 - prefix[x].1;
                let e = classes.entry(na).or_default();
                if bs % 2 == 0 {
                    e.0 = true;
                } else {
                    e.1 = true;
                }
            }
            let mut even = 0;
            let mut odd = 0;
            let mut bad = Vec::new();
            for (na, (e, o)) in &classes {
                match (e, o) {
                    (true, true) => bad.push((*na, span as i64 - na)),
                    (true, false) => even += 1,
                    _ => odd += 1,
                }
            }
            (classes.len(), even, odd, bad)
        });
    let mut scan = ParityScan::default();
    for (d, e, o, bad) in per_span {
        scan.distances += d;
        scan.even += e;
        scan.odd += o;
        scan.undefined.extend(bad);
    }
    scan
}

//! Independent references: pair frequencies counted in finite patches, and the
//! closed-form covariograms of interval windows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::exec::Exec;
use crate::qfield::{FieldVal, QuadInt};
use crate::renorm::{CorrelationTable, PAIRS};
use crate::substitution::{tile_counts_i64, Letter, Patch, SubstitutionSystem, A, B};
use crate::window::Interval;

/// Exact counts behind one patch frequency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCount {
    /// Points `x ∈ Λ_i` with `x + z ∈ Λ_j`.
    pub hits: u64,
    /// Points `x` of any type with `x + z` inside the patch support.
    pub total: u64,
}

impl PairCount {
    pub fn frequency(&self) -> BigRational {
        if self.total == 0 {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(self.hits), BigInt::from(self.total))
        }
    }
}

/// Prefix letter counts of a patch, for O(1) window counts.
pub struct PatchIndex<'a> {
    patch: &'a Patch,
    prefix: Vec<(i64, i64)>,
}

impl<'a> PatchIndex<'a> {
    pub fn new(patch: &'a Patch) -> PatchIndex<'a> {
        let mut prefix = Vec::with_capacity(patch.len() + 1);
        prefix.push((0, 0));
        for &c in patch.word() {
            let (a, b) = *prefix.last().unwrap();
            prefix.push(if c == A { (a + 1, b) } else { (a, b + 1) });
        }
        PatchIndex { patch, prefix }
    }

    fn len(&self) -> usize {
        self.patch.len()
    }

    /// Left end of tile `k` (or the right end of the patch for `k = len`),
    /// measured from the left end of the patch.
    fn position(&self, k: usize) -> QuadInt {
        self.patch.to_quad(self.prefix[k])
    }

    /// Points `x` with `x + z` in the half-open support `[0, right)`.
    fn partners_inside(&self, z: &QuadInt) -> u64 {
        let n = self.len();
        let right = self.position(n);
        let lo = -z;
        let hi = &right - z;
        // positions increase with the tile index
        let first = partition(n, |k| self.position(k) < lo);
        let end = partition(n, |k| self.position(k) < hi);
        end.saturating_sub(first) as u64
    }

    /// Counts pairs at displacement `z` with tile counts `(na, nb)`.
    ///
    /// With `exclude_edges`, only points whose partner position lies inside the
    /// support enter the denominator; otherwise every point does.
    pub fn count(
        &self,
        i: Letter,
        j: Letter,
        z: &QuadInt,
        (na, nb): (i64, i64),
        exclude_edges: bool,
    ) -> PairCount {
        let n = self.len();
        let word = self.patch.word();
        let span = na + nb;
        let steps = span.unsigned_abs() as usize;
        let mut hits = 0u64;
        if steps < n {
            // the partner of tile x is tile x + span
            let range = if span >= 0 { 0..n - steps } else { steps..n };
            for x in range {
                let y = if span >= 0 { x + steps } else { x - steps };
                if word[x] == i
                    && word[y] == j
                    && (
                        self.prefix[y].0 - self.prefix[x].0,
                        self.prefix[y].1 - self.prefix[x].1,
                    ) == (na, nb)
                {
                    hits += 1;
                }
            }
        }
        let total = if exclude_edges {
            self.partners_inside(z)
        } else {
            n as u64
        };
        PairCount { hits, total }
    }
}

fn partition(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Relative frequency of `x ∈ Λ_i` with `x + z ∈ Λ_j` in `patch`, with points
/// whose partner would leave the patch excluded from the denominator.
pub fn patch_pair_correlation(
    sys: &SubstitutionSystem,
    patch: &Patch,
    i: Letter,
    j: Letter,
    z: &QuadInt,
) -> BigRational {
    pair_count(sys, &PatchIndex::new(patch), i, j, z, true).frequency()
}

/// [`patch_pair_correlation`] on a prebuilt index, with the raw counts.
pub fn pair_count(
    sys: &SubstitutionSystem,
    idx: &PatchIndex,
    i: Letter,
    j: Letter,
    z: &QuadInt,
    exclude_edges: bool,
) -> PairCount {
    match tile_counts_i64(sys, z) {
        Some(d) => idx.count(i, j, z, d, exclude_edges),
        None => PairCount {
            hits: 0,
            total: if exclude_edges {
                idx.partners_inside(z)
            } else {
                idx.len() as u64
            },
        },
    }
}

/// `max(0, width − |x|)`.
pub fn interval_covariogram(width: &FieldVal, x: f64) -> f64 {
    (width.embed() - x.abs()).max(0.0)
}

/// `|I ∩ (J − s)|`, exactly.
pub fn interval_cross_covariogram(i: &Interval, j: &Interval, s: &FieldVal) -> FieldVal {
    let lo = i.lo.clone().max(&j.lo - s);
    let hi = i.hi.clone().min(&j.hi - s);
    if hi > lo {
        &hi - &lo
    } else {
        FieldVal::zero(s.field())
    }
}

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A renormalised value next to its patch frequency.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub distance: QuadInt,
    pub pair: (Letter, Letter),
    #[serde(serialize_with = "ser_rational")]
    pub frequency: BigRational,
    pub hits: u64,
    pub total: u64,
    pub renorm_value: FieldVal,
    pub abs_error_float: f64,
}

/// Compares `evaluate` with patch frequencies for every pair at every distance.
pub fn oracle_reports(
    table: &CorrelationTable,
    patch: &Patch,
    distances: &[QuadInt],
    exec: Exec,
) -> Vec<OracleReport> {
    let sys = table.system();
    let idx = PatchIndex::new(patch);
    let jobs: Vec<(QuadInt, Letter, Letter)> = distances
        .iter()
        .flat_map(|z| PAIRS.iter().map(move |&(i, j)| (z.clone(), i, j)))
        .collect();
    exec.map(&jobs, |(z, i, j)| {
        let c = pair_count(sys, &idx, *i, *j, z, true);
        let frequency = c.frequency();
        let renorm_value = table.evaluate(*i, *j, z);
        let abs_error_float = (frequency.to_f64().unwrap_or(f64::NAN) - renorm_value.embed()).abs();
        OracleReport {
            distance: z.clone(),
            pair: (*i, *j),
            frequency,
            hits: c.hits,
            total: c.total,
            renorm_value,
            abs_error_float,
        }
    })
}

/// `count` distinct distances drawn from the differences of tiles at most
/// `max_span` apart, reproducibly from `seed`.
pub fn sample_distances(patch: &Patch, count: usize, max_span: usize, seed: u64) -> Vec<QuadInt> {
    let diffs: Vec<(i64, i64)> = {
        let idx = PatchIndex::new(patch);
        let n = idx.len();
        let mut set = std::collections::BTreeSet::new();
        for span in 0..=max_span.min(n.saturating_sub(1)) {
            for x in 0..n - span {
                let d = (
                    idx.prefix[x + span].0 - idx.prefix[x].0,
                    idx.prefix[x + span].1 - idx.prefix[x].1,
                );
                set.insert(d);
                set.insert((-d.0, -d.1));
            }
        }
        set.into_iter().collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    diffs
        .choose_multiple(&mut rng, count)
        .map(|&d| patch.to_quad(d))
        .collect()
}

/// Outcome of comparing renormalised values with interval covariograms.
#[derive(Clone, Debug, Serialize)]
pub struct TentReport {
    pub checked: usize,
    pub max_error: FieldVal,
    /// Distances where some value missed the closed form.
    pub offending: Vec<(QuadInt, Letter, Letter)>,
}

impl TentReport {
    pub fn passed(&self) -> bool {
        self.max_error.is_zero() && self.offending.is_empty()
    }
}

/// For interval windows, checks `vol(W)·ν_ij(z) = |W_i ∩ (W_j − z⋆)|` and
/// `vol(W)·ν(z) = max(0, |W| − |z⋆|)` exactly at every distance.
pub fn tent_check(table: &CorrelationTable, distances: &[QuadInt], exec: Exec) -> TentReport {
    let f = table.field();
    let w = table.window_hulls();
    let vol = &w[A].len() + &w[B].len();
    let results = exec.map(distances, |z| {
        let s = FieldVal::from(z.star());
        let mut worst = FieldVal::zero(f);
        let mut bad = Vec::new();
        let mut total = FieldVal::zero(f);
        for (i, j) in PAIRS {
            let v = table.evaluate(i, j, z);
            total = &total + &v;
            let err = (&(&vol * &v) - &interval_cross_covariogram(&w[i], &w[j], &s)).abs();
            if !err.is_zero() {
                bad.push((z.clone(), i, j));
            }
            worst = worst.max(err);
        }
        let tent = (&vol - &s.abs()).max(FieldVal::zero(f));
        let err = (&(&vol * &total) - &tent).abs();
        if !err.is_zero() {
            bad.push((z.clone(), A, B));
        }
        (worst.max(err), bad)
    });
    let mut report = TentReport {
        checked: distances.len(),
        max_error: FieldVal::zero(f),
        offending: Vec::new(),
    };
    for (err, bad) in results {
        report.max_error = report.max_error.max(err);
        report.offending.extend(bad);
    }
    report
}

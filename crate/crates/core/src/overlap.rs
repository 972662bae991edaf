//! The overlap algorithm: overlaps of the tiling with a translated copy, the
//! induced substitution on them, and the boundary dimension of the windows.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{self, Factorisation, IntPoly};
use crate::qfield::QuadInt;
use crate::substitution::{tile_counts, Letter, SubstitutionSystem, A, B};

/// Default bound on the number of overlap types.
pub const DEFAULT_TYPE_CAP: usize = 10_000;

/// A lower tile of type `lower` at 0 and an upper tile of type `upper` at
/// `offset`, with overlapping interiors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OverlapType {
    pub lower: Letter,
    pub upper: Letter,
    pub offset: QuadInt,
}

impl OverlapType {
    pub fn is_coincidence(&self) -> bool {
        self.lower == self.upper && self.offset.is_zero()
    }

    /// The same pair seen from the other copy.
    pub fn mirror(&self) -> OverlapType {
        OverlapType {
            lower: self.upper,
            upper: self.lower,
            offset: -&self.offset,
        }
    }

    /// Representative of `{self, mirror}`: smaller letters first, then the
    /// smaller offset.
    pub fn canonical(self) -> OverlapType {
        let m = self.mirror();
        if (m.lower, m.upper, &m.offset) < (self.lower, self.upper, &self.offset) {
            m
        } else {
            self
        }
    }
}

fn overlaps(sys: &SubstitutionSystem, lower: Letter, upper: Letter, d: &QuadInt) -> bool {
    // (0, ℓ_lower) ∩ (d, d + ℓ_upper) ≠ ∅
    d < sys.tile_length(lower) && d + sys.tile_length(upper) > QuadInt::zero(sys.field())
}

/// Children of an overlap under one inflation step, before canonicalisation.
pub fn inflate(sys: &SubstitutionSystem, t: &OverlapType) -> Vec<OverlapType> {
    let scaled = sys.mu() * &t.offset;
    let mut out = Vec::new();
    for k in [A, B] {
        for l in [A, B] {
            for r in sys.displacement(k, t.lower) {
                for s in sys.displacement(l, t.upper) {
                    let d = &(&scaled + s) - r;
                    if overlaps(sys, k, l, &d) {
                        out.push(OverlapType {
                            lower: k,
                            upper: l,
                            offset: d,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Number of overlapping tile pairs in the supertiles of `t`, found by laying
/// out both supertile words tile by tile.
pub fn geometric_child_count(sys: &SubstitutionSystem, t: &OverlapType) -> usize {
    let layout = |letter: Letter, origin: QuadInt| -> Vec<(QuadInt, QuadInt)> {
        let mut x = origin;
        sys.rule(letter)
            .iter()
            .map(|&c| {
                let next = &x + sys.tile_length(c);
                let iv = (x.clone(), next.clone());
                x = next;
                iv
            })
            .collect()
    };
    let lower = layout(t.lower, QuadInt::zero(sys.field()));
    let upper = layout(t.upper, sys.mu() * &t.offset);
    lower
        .iter()
        .flat_map(|a| upper.iter().map(move |b| (a, b)))
        .filter(|(a, b)| b.0 < a.1 && a.0 < b.1)
        .count()
}

/// Overlap types reachable from `Λ` against `Λ + shift`, and the discrepancy
/// matrix of their induced substitution.
#[derive(Clone, Debug, Serialize)]
pub struct OverlapGraph {
    pub shift: QuadInt,
    /// Every type, in discovery order.
    pub types: Vec<OverlapType>,
    /// Canonical children of each type, with multiplicity.
    pub children: Vec<Vec<usize>>,
    /// Indices into `types` of the discrepancy (non-coincidence) types.
    pub discrepancies: Vec<usize>,
    /// `matrix[u][v]`: discrepancy children of type `u` of discrepancy type `v`.
    pub matrix: Vec<Vec<i64>>,
}

impl OverlapGraph {
    pub fn charpoly(&self) -> IntPoly {
        poly::charpoly(&self.matrix)
    }
}

/// Runs the overlap algorithm for the translation `shift`.
pub fn discover_overlaps(
    sys: &SubstitutionSystem,
    shift: &QuadInt,
    cap: usize,
) -> Result<OverlapGraph> {
    let Some((na, nb)) = tile_counts(sys, shift) else {
        return Err(Error::NotInReturnModule(shift.to_string()));
    };
    if shift.is_zero() {
        return Err(Error::NotInReturnModule("0 (the copies coincide)".into()));
    }
    // the patch must contain realisations of the shift on both sides
    let span = (na.magnitude() + nb.magnitude())
        .to_u128()
        .unwrap_or(u128::MAX);
    let want = span.saturating_mul(8).max(256);
    let seed = first_seed(sys);
    let level = sys.level_for_tiles(&seed, want)?;
    let patch = sys.generate_patch(level, &seed)?;

    let mut tiles: Vec<(QuadInt, Letter)> = patch
        .tile_coords()
        .into_iter()
        .zip(patch.word())
        .map(|(c, &l)| (patch.to_quad(c), l))
        .collect();
    tiles.sort();
    let starts: Vec<&QuadInt> = tiles.iter().map(|(x, _)| x).collect();
    let max_len = sys
        .tile_lengths()
        .iter()
        .max()
        .cloned()
        .expect("two letters");
    let mut initial = BTreeSet::new();
    for (y, j) in &tiles {
        let ys = y + shift;
        // lower tiles that start within (ys − ℓ_max, ys + ℓ_j)
        let from = starts.partition_point(|x| **x <= &ys - &max_len);
        let to = starts.partition_point(|x| **x < &ys + sys.tile_length(*j));
        for (x, i) in &tiles[from..to] {
            let d = &ys - x;
            if overlaps(sys, *i, *j, &d) {
                initial.insert(
                    OverlapType {
                        lower: *i,
                        upper: *j,
                        offset: d,
                    }
                    .canonical(),
                );
            }
        }
    }

    let mut index: HashMap<OverlapType, usize> = HashMap::new();
    let mut types: Vec<OverlapType> = Vec::new();
    let mut queue: VecDeque<OverlapType> = VecDeque::new();
    for t in initial {
        index.insert(t.clone(), types.len());
        types.push(t.clone());
        queue.push_back(t);
    }
    let mut children: Vec<Vec<usize>> = Vec::new();
    while let Some(t) = queue.pop_front() {
        let mut kids = Vec::new();
        for c in inflate(sys, &t) {
            let c = c.canonical();
            let k = match index.get(&c) {
                Some(&k) => k,
                None => {
                    if types.len() >= cap {
                        return Err(Error::OverlapCap(cap));
                    }
                    index.insert(c.clone(), types.len());
                    types.push(c.clone());
                    queue.push_back(c);
                    types.len() - 1
                }
            };
            kids.push(k);
        }
        children.push(kids);
    }
    let discrepancies: Vec<usize> = (0..types.len())
        .filter(|&k| !types[k].is_coincidence())
        .collect();
    let position: HashMap<usize, usize> = discrepancies
        .iter()
        .enumerate()
        .map(|(p, &k)| (k, p))
        .collect();
    let n = discrepancies.len();
    let mut matrix = vec![vec![0i64; n]; n];
    for (v, &k) in discrepancies.iter().enumerate() {
        for c in &children[k] {
            if let Some(&u) = position.get(c) {
                matrix[u][v] += 1;
            }
        }
    }
    Ok(OverlapGraph {
        shift: shift.clone(),
        types,
        children,
        discrepancies,
        matrix,
    })
}

fn first_seed(sys: &SubstitutionSystem) -> String {
    let (x, y) = sys
        .legal_pairs()
        .into_iter()
        .next()
        .expect("legal pairs exist");
    format!("{}|{}", sys.letter_name(x), sys.letter_name(y))
}

/// The nonzero patch difference with the smallest `|z⋆|` among the first few
/// hundred tiles, ties broken by `|z|`.
pub fn default_shift(sys: &SubstitutionSystem) -> Result<QuadInt> {
    let seed = first_seed(sys);
    let level = sys.level_for_tiles(&seed, 64)?;
    let patch = sys.generate_patch(level, &seed)?;
    let coords = patch.tile_coords();
    let mut best: Option<(f64, QuadInt)> = None;
    for x in &coords {
        for y in &coords {
            let z = patch.to_quad((y.0 - x.0, y.1 - x.1));
            if z.signum().is_le() {
                continue;
            }
            let s = z.embed_star().abs();
            let better = match &best {
                None => true,
                Some((bs, bz)) => s < *bs || (s == *bs && z < *bz),
            };
            if better {
                best = Some((s, z));
            }
        }
    }
    best.map(|(_, z)| z)
        .ok_or_else(|| Error::NotInReturnModule("patch has a single tile".into()))
}

/// Everything the overlap algorithm reports for one shift.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub shift: String,
    pub type_count: usize,
    pub discrepancy_count: usize,
    pub types: Vec<OverlapType>,
    pub discrepancy_matrix: Vec<Vec<i64>>,
    /// Coefficients, highest degree first.
    pub charpoly: Vec<String>,
    pub charpoly_text: String,
    pub x_power: usize,
    pub cyclotomic_factors: Vec<(usize, usize)>,
    pub factor: String,
    pub factor_irreducible: bool,
    /// Spectral radius of the discrepancy matrix.
    pub gamma: f64,
    /// Rational bracket `(lo, hi]` of `γ`, as decimal strings.
    pub gamma_bracket: (String, String),
    pub pf_multiplier: f64,
    pub dimension: f64,
    pub note: Option<String>,
}

/// Runs the overlap algorithm and returns `dim_H(∂W) = log γ / log μ`.
pub fn boundary_report(
    sys: &SubstitutionSystem,
    shift: Option<&QuadInt>,
    cap: usize,
) -> Result<BoundaryReport> {
    let shift = match shift {
        Some(s) => s.clone(),
        None => default_shift(sys)?,
    };
    let graph = discover_overlaps(sys, &shift, cap)?;
    let cp = graph.charpoly();
    let Factorisation {
        x_power,
        cyclotomic,
        factor,
        irreducible,
    } = poly::strip_trivial_factors(&cp);
    let bracket = poly::largest_real_root(&cp, 1e-13);
    let (gamma, gamma_bracket) = match &bracket {
        Some((lo, hi)) => {
            let mid = (lo + hi) / BigRational::from_integer(2.into());
            (mid.to_f64().unwrap_or(f64::NAN), (decimal(lo), decimal(hi)))
        }
        None => (0.0, ("0".into(), "0".into())),
    };
    let mu = sys.mu().embed();
    let (dimension, note) = if gamma <= 1.0 {
        (
            0.0,
            Some("spectral radius at most 1: the window boundary is finite".to_string()),
        )
    } else {
        (gamma.ln() / mu.ln(), None)
    };
    Ok(BoundaryReport {
        shift: shift.to_string(),
        type_count: graph.types.len(),
        discrepancy_count: graph.discrepancies.len(),
        types: graph
            .discrepancies
            .iter()
            .map(|&k| graph.types[k].clone())
            .collect(),
        discrepancy_matrix: graph.matrix.clone(),
        charpoly: cp.coeffs().iter().rev().map(|c| c.to_string()).collect(),
        charpoly_text: cp.to_string(),
        x_power,
        cyclotomic_factors: cyclotomic,
        factor: factor.to_string(),
        factor_irreducible: irreducible,
        gamma,
        gamma_bracket,
        pf_multiplier: mu,
        dimension,
        note,
    })
}

/// `dim_H(∂W)` with the default shift.
pub fn boundary_dimension(sys: &SubstitutionSystem) -> Result<f64> {
    Ok(boundary_report(sys, None, DEFAULT_TYPE_CAP)?.dimension)
}

fn decimal(x: &BigRational) -> String {
    format!("{:.15}", x.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::Field;

    fn ssm() -> SubstitutionSystem {
        SubstitutionSystem::parse("a -> bba; b -> ab").unwrap()
    }

    fn sigma() -> SubstitutionSystem {
        SubstitutionSystem::parse("a -> aaaaabb; b -> baa").unwrap()
    }

    fn s2(a: i64, b: i64) -> QuadInt {
        QuadInt::new(Field::SQRT2, a, b)
    }

    #[test]
    fn canonical_form_identifies_mirrors() {
        let t = OverlapType {
            lower: B,
            upper: A,
            offset: s2(0, 1),
        };
        let c = t.clone().canonical();
        assert_eq!(
            c,
            OverlapType {
                lower: A,
                upper: B,
                offset: s2(0, -1)
            }
        );
        assert_eq!(t.mirror().canonical(), c);
        assert!(OverlapType {
            lower: A,
            upper: A,
            offset: s2(0, 0)
        }
        .is_coincidence());
    }

    #[test]
    fn coincidences_inflate_to_coincidences() {
        for sys in [ssm(), sigma()] {
            for i in [A, B] {
                let t = OverlapType {
                    lower: i,
                    upper: i,
                    offset: QuadInt::zero(Field::SQRT2),
                };
                let kids = inflate(&sys, &t);
                assert!(!kids.is_empty());
                assert!(kids.iter().all(OverlapType::is_coincidence));
            }
        }
    }

    #[test]
    fn child_counts_match_geometry() {
        for sys in [ssm(), sigma()] {
            let g = discover_overlaps(&sys, &s2(1, 0), DEFAULT_TYPE_CAP).unwrap();
            for t in &g.types {
                assert_eq!(
                    inflate(&sys, t).len(),
                    geometric_child_count(&sys, t),
                    "{t:?}"
                );
            }
        }
    }

    #[test]
    fn ssm_discrepancy_polynomial() {
        let g = discover_overlaps(&ssm(), &s2(1, 0), DEFAULT_TYPE_CAP).unwrap();
        assert_eq!(g.discrepancies.len(), 7);
        // x⁴(x³ − 2x² − 1)
        assert_eq!(g.charpoly(), IntPoly::from_i64(&[0, 0, 0, 0, -1, 0, -2, 1]));
    }

    #[test]
    fn invalid_shifts() {
        assert!(matches!(
            discover_overlaps(&ssm(), &s2(0, 0), DEFAULT_TYPE_CAP),
            Err(Error::NotInReturnModule(_))
        ));
        assert!(matches!(
            discover_overlaps(&sigma(), &s2(1, 0), 3),
            Err(Error::OverlapCap(3))
        ));
    }

    #[test]
    fn dimension_is_independent_of_the_shift() {
        for (sys, want) in [(ssm(), 0.8974465905), (sigma(), 0.9664739151513773)] {
            for shift in [s2(1, 0), s2(1, 1), s2(2, 1), s2(-1, 1)] {
                let r = boundary_report(&sys, Some(&shift), DEFAULT_TYPE_CAP).unwrap();
                assert!(
                    (r.dimension - want).abs() < 1e-9,
                    "{shift}: {}",
                    r.dimension
                );
            }
        }
    }

    #[test]
    fn default_shift_factors() {
        for (sys, factor, gamma) in [
            (ssm(), IntPoly::from_i64(&[-1, 0, -2, 1]), 2.2055694304),
            (
                sigma(),
                IntPoly::from_i64(&[7, 7, -7, 1]),
                5.493959207434934,
            ),
        ] {
            let r = boundary_report(&sys, None, DEFAULT_TYPE_CAP).unwrap();
            assert_eq!(r.factor, factor.to_string());
            assert!(r.factor_irreducible);
            assert!((r.gamma - gamma).abs() < 1e-9);
            let lo = r.gamma_bracket.0.parse::<f64>().unwrap() - 1e-9;
            let hi = r.gamma_bracket.1.parse::<f64>().unwrap() + 1e-9;
            assert!(factor.eval_f64(lo) * factor.eval_f64(hi) < 0.0);
        }
    }

    #[test]
    fn fibonacci_boundary_is_finite() {
        let fib = SubstitutionSystem::parse("a -> ab; b -> a").unwrap();
        let r = boundary_report(&fib, None, DEFAULT_TYPE_CAP).unwrap();
        assert!(r.gamma <= 1.0 + 1e-12);
        assert_eq!(r.dimension, 0.0);
    }
}

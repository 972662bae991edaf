//! Binary substitution rules, their Perron-Frobenius data and finite patches.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qfield::{Field, FieldVal, QuadInt};

/// Letters are indices into the two-letter alphabet.
pub type Letter = usize;

pub const A: Letter = 0;
pub const B: Letter = 1;

/// A validated unimodular quadratic Pisot substitution on two letters with
/// its derived geometry.
#[derive(Clone, Debug)]
pub struct SubstitutionSystem {
    alphabet: [char; 2],
    rules: [Vec<Letter>; 2],
    matrix: [[i64; 2]; 2],
    field: Field,
    mu: QuadInt,
    lengths: [QuadInt; 2],
    freq: [FieldVal; 2],
    // displacement[i][j]: offsets of type-i tiles inside the supertile of j
    displacement: [[Vec<QuadInt>; 2]; 2],
}

impl SubstitutionSystem {
    /// Parses `x -> word; y -> word` (rules separated by `;` or newlines) and
    /// derives all inflation data.
    pub fn parse(text: &str) -> Result<SubstitutionSystem> {
        let mut lhs: Vec<char> = Vec::new();
        let mut rhs: Vec<String> = Vec::new();
        for part in text.split([';', '\n']) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (l, r) = part
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected 'letter -> word' in '{part}'")))?;
            let l = l.trim();
            let mut chars = l.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(Error::Parse(format!("'{l}' is not a single letter"))),
            };
            if lhs.contains(&letter) {
                return Err(Error::DuplicateLetter(letter));
            }
            let word: String = r.chars().filter(|c| !c.is_whitespace()).collect();
            if word.is_empty() {
                return Err(Error::EmptyWord(letter));
            }
            lhs.push(letter);
            rhs.push(word);
        }
        for w in &rhs {
            if let Some(c) = w.chars().find(|c| !lhs.contains(c)) {
                return Err(Error::UnknownLetter(c));
            }
        }
        if lhs.len() != 2 {
            return Err(Error::UnsupportedAlphabetSize(lhs.len()));
        }
        let alphabet = [lhs[0], lhs[1]];
        let idx = |c: char| if c == alphabet[0] { A } else { B };
        let rules = [
            rhs[0].chars().map(idx).collect::<Vec<_>>(),
            rhs[1].chars().map(idx).collect::<Vec<_>>(),
        ];
        SubstitutionSystem::from_rules(alphabet, rules)
    }

    pub fn from_rules(alphabet: [char; 2], rules: [Vec<Letter>; 2]) -> Result<SubstitutionSystem> {
        let mut matrix = [[0i64; 2]; 2];
        for (j, word) in rules.iter().enumerate() {
            for &i in word {
                matrix[i][j] += 1;
            }
        }
        let field = validate_matrix(&matrix)?;
        let (mu, lengths, freq) = pf_data(&matrix, field);
        let mut displacement: [[Vec<QuadInt>; 2]; 2] = Default::default();
        for (j, word) in rules.iter().enumerate() {
            let mut pos = QuadInt::zero(field);
            for &i in word {
                displacement[i][j].push(pos.clone());
                pos += &lengths[i];
            }
            debug_assert_eq!(pos, &mu * &lengths[j]);
        }
        Ok(SubstitutionSystem {
            alphabet,
            rules,
            matrix,
            field,
            mu,
            lengths,
            freq,
            displacement,
        })
    }

    pub fn alphabet(&self) -> [char; 2] {
        self.alphabet
    }

    pub fn letter_name(&self, i: Letter) -> char {
        self.alphabet[i]
    }

    pub fn letter_index(&self, c: char) -> Option<Letter> {
        self.alphabet.iter().position(|&x| x == c)
    }

    pub fn rule(&self, i: Letter) -> &[Letter] {
        &self.rules[i]
    }

    /// `M[i][j]` = number of letters `i` in the image of `j`.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Perron-Frobenius multiplier.
    pub fn mu(&self) -> &QuadInt {
        &self.mu
    }

    pub fn tile_length(&self, i: Letter) -> &QuadInt {
        &self.lengths[i]
    }

    pub fn tile_lengths(&self) -> &[QuadInt; 2] {
        &self.lengths
    }

    /// Relative letter frequencies, summing to one.
    pub fn freq(&self) -> &[FieldVal; 2] {
        &self.freq
    }

    /// Offsets of type-`i` tiles inside the supertile of `j`.
    pub fn displacement(&self, i: Letter, j: Letter) -> &[QuadInt] {
        &self.displacement[i][j]
    }

    /// Point density of the control points.
    pub fn density(&self) -> FieldVal {
        let mean = &(&self.freq[A] * &FieldVal::from(&self.lengths[A]))
            + &(&self.freq[B] * &FieldVal::from(&self.lengths[B]));
        mean.inverse().expect("positive mean tile length")
    }

    /// Covolume of the Minkowski embedding of the return module
    /// `Z ℓ_a + Z ℓ_b`.
    pub fn covolume(&self) -> FieldVal {
        let (la, lb) = (&self.lengths[A], &self.lengths[B]);
        let det = &(la * &lb.star()) - &(lb * &la.star());
        FieldVal::from(det.abs())
    }

    /// Legal two-letter words, found by scanning `ϱᵏ(x)` for `k ≤ 8`.
    pub fn legal_pairs(&self) -> BTreeSet<(Letter, Letter)> {
        // pairs of ϱ(w) come from pairs inside images and from junctions
        let mut pairs: BTreeSet<(Letter, Letter)> = BTreeSet::new();
        let mut letters: BTreeSet<Letter> = [A, B].into_iter().collect();
        let mut found = BTreeSet::new();
        for _ in 0..8 {
            let mut next = BTreeSet::new();
            for w in letters.iter().map(|&c| &self.rules[c]) {
                for p in w.windows(2) {
                    next.insert((p[0], p[1]));
                }
            }
            for &(x, y) in &pairs {
                next.insert((*self.rules[x].last().unwrap(), self.rules[y][0]));
            }
            letters = self.rules_letters(&letters);
            found.extend(next.iter().copied());
            pairs = next;
        }
        found
    }

    fn rules_letters(&self, letters: &BTreeSet<Letter>) -> BTreeSet<Letter> {
        letters
            .iter()
            .flat_map(|&c| self.rules[c].iter().copied())
            .collect()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter().map(|&c| self.alphabet[c]).collect()
    }

    /// `ϱᵏ(w)`.
    pub fn iterate_word(&self, w: &[Letter], k: usize) -> Vec<Letter> {
        let mut cur = w.to_vec();
        for _ in 0..k {
            let mut next = Vec::with_capacity(cur.len() * 4);
            for &c in &cur {
                next.extend_from_slice(&self.rules[c]);
            }
            cur = next;
        }
        cur
    }

    /// Tile count of `ϱᵏ(seed)` without building it.
    pub fn projected_tiles(&self, seed: &[Letter], k: usize) -> u128 {
        let mut v = [0u128; 2];
        for &c in seed {
            v[c] += 1;
        }
        for _ in 0..k {
            let m = self.matrix;
            v = [
                m[0][0] as u128 * v[0] + m[0][1] as u128 * v[1],
                m[1][0] as u128 * v[0] + m[1][1] as u128 * v[1],
            ];
        }
        v[0] + v[1]
    }

    /// Parses a two-letter seed `x|y` (or `xy`) and checks legality.
    pub fn parse_seed(&self, seed: &str) -> Result<(Letter, Letter)> {
        let letters: Vec<char> = seed
            .chars()
            .filter(|&c| c != '|' && !c.is_whitespace())
            .collect();
        let legal = self.legal_pairs();
        let illegal = || Error::IllegalSeed {
            seed: seed.to_string(),
            legal: legal
                .iter()
                .map(|&(x, y)| format!("{}|{}", self.alphabet[x], self.alphabet[y]))
                .collect(),
        };
        if letters.len() != 2 {
            return Err(illegal());
        }
        let x = self.letter_index(letters[0]).ok_or_else(illegal)?;
        let y = self.letter_index(letters[1]).ok_or_else(illegal)?;
        if !legal.contains(&(x, y)) {
            return Err(illegal());
        }
        Ok((x, y))
    }

    /// The level-`k` inflation of a legal seed `x|y`, origin at the bar.
    pub fn generate_patch(&self, level: usize, seed: &str) -> Result<Patch> {
        let (x, y) = self.parse_seed(seed)?;
        let left = self.iterate_word(&[x], level);
        let right = self.iterate_word(&[y], level);
        let origin = left.len();
        let mut word = left;
        word.extend(right);
        Ok(Patch::new(self, word, origin, level, (x, y)))
    }

    /// The tiles of the level-`k` patch from `seed` that lie within `left`
    /// tiles left and `right` tiles right of the origin. Only the touched
    /// supertiles are expanded, so high levels stay cheap.
    pub fn generate_window(
        &self,
        level: usize,
        seed: &str,
        left: usize,
        right: usize,
    ) -> Result<Patch> {
        let (x, y) = self.parse_seed(seed)?;
        let mut lens = vec![[1u128, 1u128]];
        for k in 1..=level {
            let prev = lens[k - 1];
            let l = |c: Letter| {
                self.rules[c]
                    .iter()
                    .fold(0u128, |acc, &d| acc.saturating_add(prev[d]))
            };
            lens.push([l(A), l(B)]);
        }
        let mut word = Vec::with_capacity(left + right);
        self.suffix_rev(x, level, left as u128, &lens, &mut word);
        word.reverse();
        let origin = word.len();
        self.prefix(y, level, right as u128, &lens, &mut word);
        Ok(Patch::new(self, word, origin, level, (x, y)))
    }

    fn prefix(&self, c: Letter, k: usize, mut m: u128, lens: &[[u128; 2]], out: &mut Vec<Letter>) {
        if m == 0 {
            return;
        }
        if k == 0 {
            out.push(c);
            return;
        }
        for &d in &self.rules[c] {
            if m == 0 {
                break;
            }
            let take = m.min(lens[k - 1][d]);
            self.prefix(d, k - 1, take, lens, out);
            m -= take;
        }
    }

    // pushes the last `m` letters of ϱᵏ(c) right to left
    fn suffix_rev(
        &self,
        c: Letter,
        k: usize,
        mut m: u128,
        lens: &[[u128; 2]],
        out: &mut Vec<Letter>,
    ) {
        if m == 0 {
            return;
        }
        if k == 0 {
            out.push(c);
            return;
        }
        for &d in self.rules[c].iter().rev() {
            if m == 0 {
                break;
            }
            let take = m.min(lens[k - 1][d]);
            self.suffix_rev(d, k - 1, take, lens, out);
            m -= take;
        }
    }

    /// Smallest level whose patch from `seed` has at least `n` tiles.
    pub fn level_for_tiles(&self, seed: &str, n: u128) -> Result<usize> {
        let (x, y) = self.parse_seed(seed)?;
        Ok((0..64)
            .find(|&k| self.projected_tiles(&[x, y], k) >= n)
            .unwrap_or(64))
    }
}

impl fmt::Display for SubstitutionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}; {} -> {}",
            self.alphabet[A],
            self.format_word(&self.rules[A]),
            self.alphabet[B],
            self.format_word(&self.rules[B])
        )
    }
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
}

/// Checks primitivity, unimodularity, irreducibility and the Pisot property;
/// returns the quadratic field of the eigenvalues.
pub fn validate_matrix(m: &[[i64; 2]; 2]) -> Result<Field> {
    let sq = mat_mul(m, m);
    let positive = |x: &[[i64; 2]; 2]| x.iter().flatten().all(|&v| v > 0);
    if !(positive(m) || positive(&sq)) {
        return Err(Error::NotPrimitive);
    }
    let trace = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() != 1 {
        return Err(Error::NotUnimodular(det));
    }
    let disc = trace * trace - 4 * det;
    if is_square(disc) {
        return Err(Error::ReducibleCharPoly { trace, det });
    }
    let root = (trace as f64 + (disc as f64).sqrt()) / 2.0;
    let conj = (trace as f64 - (disc as f64).sqrt()) / 2.0;
    if !(root > 1.0 && conj.abs() < 1.0) {
        return Err(Error::NotPisot);
    }
    Field::from_discriminant(disc)
}

fn mat_mul(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// PF multiplier, left eigenvector with last entry 1 (scaled into the ring if
/// needed), and right eigenvector normalised to sum 1.
fn pf_data(m: &[[i64; 2]; 2], field: Field) -> (QuadInt, [QuadInt; 2], [FieldVal; 2]) {
    let trace = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = trace * trace - 4 * det;
    let d = field.radicand();
    let s = ((disc / d) as f64).sqrt().round() as i64;
    debug_assert_eq!(s * s * d, disc);
    // μ = (trace + s√d)/2 in the basis {1, ω}
    let mu = if field.p() == 0 {
        QuadInt::new(field, trace / 2, s / 2)
    } else {
        QuadInt::new(field, (trace - s) / 2, s)
    };
    debug_assert!((mu.embed() - (trace as f64 + (disc as f64).sqrt()) / 2.0).abs() < 1e-9);

    let muf = FieldVal::from(&mu);
    let int = |v: i64| FieldVal::integer(field, v);
    // ℓ_a M_ab + ℓ_b M_bb = μ ℓ_b with ℓ_b = 1
    let la = &(&muf - &int(m[1][1])) / &int(m[0][1]);
    let scale = la.d().clone();
    let lengths = [
        (&la * &FieldVal::integer(field, scale.clone()))
            .to_quad_int()
            .expect("cleared denominator"),
        QuadInt::integer(field, scale),
    ];
    // M_aa f_a + M_ab f_b = μ f_a
    let fa = int(m[0][1]);
    let fb = &muf - &int(m[0][0]);
    let total = &fa + &fb;
    let freq = [&fa / &total, &fb / &total];
    (mu, lengths, freq)
}

/// Control points of a finite patch, stored as its word and the index of the
/// tile at the origin.
#[derive(Clone, Debug)]
pub struct Patch {
    word: Vec<Letter>,
    origin: usize,
    level: usize,
    seed: (Letter, Letter),
    lengths: [QuadInt; 2],
}

impl Patch {
    fn new(
        sys: &SubstitutionSystem,
        word: Vec<Letter>,
        origin: usize,
        level: usize,
        seed: (Letter, Letter),
    ) -> Patch {
        Patch {
            word,
            origin,
            level,
            seed,
            lengths: sys.lengths.clone(),
        }
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn seed(&self) -> (Letter, Letter) {
        self.seed
    }

    /// Index of the first tile right of the origin.
    pub fn origin(&self) -> usize {
        self.origin
    }

    /// Per-tile control point as tile counts `(n_a, n_b)`, i.e. the point
    /// `n_a ℓ_a + n_b ℓ_b`, relative to the origin.
    pub fn tile_coords(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::with_capacity(self.word.len() + 1);
        let (mut na, mut nb) = (0i64, 0i64);
        for &c in &self.word[..self.origin] {
            if c == A {
                na -= 1;
            } else {
                nb -= 1;
            }
        }
        for &c in &self.word {
            out.push((na, nb));
            if c == A {
                na += 1;
            } else {
                nb += 1;
            }
        }
        out
    }

    /// Support `[left, right]` in tile counts.
    pub fn support_coords(&self) -> ((i64, i64), (i64, i64)) {
        let coords = self.tile_coords();
        let first = coords.first().copied().unwrap_or((0, 0));
        let (na, nb) = coords.last().copied().unwrap_or((0, 0));
        let last = match self.word.last() {
            Some(&A) => (na + 1, nb),
            Some(_) => (na, nb + 1),
            None => (0, 0),
        };
        (first, last)
    }

    pub fn to_quad(&self, (na, nb): (i64, i64)) -> QuadInt {
        &self.lengths[A].scale(na) + &self.lengths[B].scale(nb)
    }

    /// Control points of letter `i`, left to right.
    pub fn control_points(&self, i: Letter) -> Vec<QuadInt> {
        self.tile_coords()
            .into_iter()
            .zip(&self.word)
            .filter(|&(_, &c)| c == i)
            .map(|(p, _)| self.to_quad(p))
            .collect()
    }

    pub fn letter_counts(&self) -> [usize; 2] {
        let b = self.word.iter().filter(|&&c| c == B).count();
        [self.word.len() - b, b]
    }
}

/// Converts an exact distance to tile counts `(n_a, n_b)` with
/// `z = n_a ℓ_a + n_b ℓ_b`, if `z` lies in the return module.
pub fn tile_counts(sys: &SubstitutionSystem, z: &QuadInt) -> Option<(BigInt, BigInt)> {
    let (la, lb) = (&sys.lengths[A], &sys.lengths[B]);
    // solve [la lb] (x, y)ᵀ = z in coordinates
    let det = la.a() * lb.b() - la.b() * lb.a();
    let x = z.a() * lb.b() - z.b() * lb.a();
    let y = la.a() * z.b() - la.b() * z.a();
    if det.is_zero() {
        return None;
    }
    let (qx, rx) = (&x / &det, &x % &det);
    let (qy, ry) = (&y / &det, &y % &det);
    (rx.is_zero() && ry.is_zero()).then_some((qx, qy))
}

/// Small-integer tile counts, if `z` lies in the return module.
pub fn tile_counts_i64(sys: &SubstitutionSystem, z: &QuadInt) -> Option<(i64, i64)> {
    let (x, y) = tile_counts(sys, z)?;
    Some((x.to_i64()?, y.to_i64()?))
}

/// `M^k` as exact big integers.
pub fn matrix_power(m: &[[i64; 2]; 2], k: usize) -> [[BigInt; 2]; 2] {
    let mut acc = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    for _ in 0..k {
        let mut next: [[BigInt; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                next[i][j] = &acc[i][0] * m[0][j] + &acc[i][1] * m[1][j];
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2(a: i64, b: i64) -> QuadInt {
        QuadInt::new(Field::SQRT2, a, b)
    }

    fn fv(p: i64, q: i64, d: i64) -> FieldVal {
        FieldVal::from_parts(Field::SQRT2, p, q, d).unwrap()
    }

    // λ = 1 + √2
    fn lam(k: i64, c: i64) -> QuadInt {
        s2(c + k, k)
    }

    #[test]
    fn window_matches_full_patch() {
        for rule in ["a -> bba; b -> ab", "a -> aaaaabb; b -> baa"] {
            let sys = SubstitutionSystem::parse(rule).unwrap();
            let full = sys.generate_patch(4, "a|a").unwrap();
            for (l, r) in [(0, 5), (7, 0), (13, 29), (10_000, 10_000)] {
                let w = sys.generate_window(4, "a|a", l, r).unwrap();
                let lo = full.origin() - l.min(full.origin());
                let hi = (full.origin() + r).min(full.len());
                assert_eq!(w.word(), &full.word()[lo..hi]);
                assert_eq!(w.origin(), full.origin() - lo);
            }
        }
    }

    #[test]
    fn parse_matrices() {
        let ssm = SubstitutionSystem::parse("a -> bba; b -> ab").unwrap();
        assert_eq!(ssm.matrix(), [[1, 1], [2, 1]]);
        let sigma = SubstitutionSystem::parse("a -> aaaaabb; b -> baa").unwrap();
        assert_eq!(sigma.matrix(), [[5, 2], [2, 1]]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            SubstitutionSystem::parse("a -> a; b -> b").unwrap_err(),
            Error::NotPrimitive
        );
        assert_eq!(
            SubstitutionSystem::parse("a -> ab; b -> ab").unwrap_err(),
            Error::NotUnimodular(0)
        );
        assert_eq!(
            SubstitutionSystem::parse("a -> ac; b -> a").unwrap_err(),
            Error::UnknownLetter('c')
        );
        assert_eq!(
            SubstitutionSystem::parse("a -> ; b -> a").unwrap_err(),
            Error::EmptyWord('a')
        );
        assert_eq!(
            SubstitutionSystem::parse("a -> abc; b -> a; c -> b").unwrap_err(),
            Error::UnsupportedAlphabetSize(3)
        );
        assert_eq!(
            SubstitutionSystem::parse("a -> ab; a -> b").unwrap_err(),
            Error::DuplicateLetter('a')
        );
        // Thue-Morse: det 0
        assert_eq!(
            SubstitutionSystem::parse("a -> ab; b -> ba").unwrap_err(),
            Error::NotUnimodular(0)
        );
        // period doubling has det -2
        assert!(matches!(
            SubstitutionSystem::parse("a -> ab; b -> aa").unwrap_err(),
            Error::NotUnimodular(-2)
        ));
    }

    #[test]
    fn multipliers() {
        let ssm = SubstitutionSystem::parse("a -> bba; b -> ab").unwrap();
        assert_eq!(ssm.mu(), &s2(1, 1));
        let sigma = SubstitutionSystem::parse("a -> aaaaabb; b -> baa").unwrap();
        assert_eq!(sigma.mu(), &s2(3, 2));
        let fib = SubstitutionSystem::parse("a -> ab; b -> a").unwrap();
        assert_eq!(fib.field(), Field::GOLDEN);
        assert_eq!(fib.mu(), &QuadInt::generator(Field::GOLDEN));
    }

    #[test]
    fn pf_vectors() {
        let ssm = SubstitutionSystem::parse("a -> bba; b -> ab").unwrap();
        assert_eq!(ssm.tile_lengths(), &[s2(0, 1), s2(1, 0)]);
        // (λ−2, 3−λ)
        assert_eq!(ssm.freq()[A], FieldVal::from(lam(1, -2)));
        assert_eq!(ssm.freq()[B], FieldVal::from(lam(-1, 3)));

        let sigma = SubstitutionSystem::parse("a -> aaaaabb; b -> baa").unwrap();
        assert_eq!(sigma.tile_lengths(), &[lam(1, 0), s2(1, 0)]);
        // ((λ−1)/2, (3−λ)/2)
        assert_eq!(sigma.freq()[A], fv(0, 1, 2));
        assert_eq!(sigma.freq()[B], fv(2, -1, 2));
        for sys in [&ssm, &sigma] {
            assert_eq!(&sys.freq()[A] + &sys.freq()[B], FieldVal::one(Field::SQRT2));
        }
    }

    #[test]
    fn eigen_relations_exact() {
        for rule in [
            "a -> bba; b -> ab",
            "a -> aaaaabb; b -> baa",
            "a -> ab; b -> a",
        ] {
            let sys = SubstitutionSystem::parse(rule).unwrap();
            let m = sys.matrix();
            let f = sys.field();
            let mu = FieldVal::from(sys.mu());
            let int = |v: i64| FieldVal::integer(f, v);
            let fr = sys.freq();
            for i in 0..2 {
                let lhs = &(&int(m[i][0]) * &fr[0]) + &(&int(m[i][1]) * &fr[1]);
                assert_eq!(lhs, &mu * &fr[i]);
            }
            let l = sys.tile_lengths();
            for j in 0..2 {
                let lhs = &l[0].scale(m[0][j]) + &l[1].scale(m[1][j]);
                assert_eq!(lhs, sys.mu() * &l[j]);
            }
        }
    }

    #[test]
    fn displacement_matrices() {
        let ssm = SubstitutionSystem::parse("a -> bba; b -> ab").unwrap();
        assert_eq!(ssm.displacement(A, A), &[s2(2, 0)]);
        assert_eq!(ssm.displacement(A, B), &[s2(0, 0)]);
        assert_eq!(ssm.displacement(B, A), &[s2(0, 0), s2(1, 0)]);
        assert_eq!(ssm.displacement(B, B), &[lam(1, -1)]);

        let sigma = SubstitutionSystem::parse("a -> aaaaabb; b -> baa").unwrap();
        let aa: Vec<QuadInt> = (0..5).map(|k| lam(k, 0)).collect();
        assert_eq!(sigma.displacement(A, A), aa.as_slice());
        assert_eq!(sigma.displacement(A, B), &[s2(1, 0), lam(1, 1)]);
        assert_eq!(sigma.displacement(B, A), &[lam(5, 0), lam(5, 1)]);
        assert_eq!(sigma.displacement(B, B), &[s2(0, 0)]);
        for sys in [&ssm, &sigma] {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(sys.displacement(i, j).len() as i64, sys.matrix()[i][j]);
                }
            }
        }
    }

    #[test]
    fn densities() {
        let ssm = SubstitutionSystem::parse("a -> bba; b -> ab").unwrap();
        assert_eq!(ssm.density(), fv(2, 1, 4));
        assert_eq!(ssm.covolume(), FieldVal::from(s2(0, 2)));
        let sigma = SubstitutionSystem::parse("a -> aaaaabb; b -> baa").unwrap();
        // 1/((λ−1)λ/2 + (3−λ)/2) = 2/(λ² − 2λ + 3) = 1/2
        assert_eq!(sigma.density(), fv(1, 0, 2));
        for sys in [&ssm, &sigma] {
            let mean = &(&sys.freq()[A] * &FieldVal::from(sys.tile_length(A)))
                + &(&sys.freq()[B] * &FieldVal::from(sys.tile_length(B)));
            assert_eq!(&sys.density() * &mean, FieldVal::one(Field::SQRT2));
        }
    }

    #[test]
    fn ssm_patches() {
        let ssm = SubstitutionSystem::parse("a -> bba; b -> ab").unwrap();
        let p1 = ssm.generate_patch(1, "a|a").unwrap();
        assert_eq!(ssm.format_word(p1.word()), "bbabba");
        assert_eq!(p1.origin(), 3);
        let p2 = ssm.generate_patch(2, "a|a").unwrap();
        assert_eq!(ssm.format_word(&p2.word()[..p2.origin()]), "ababbba");
        assert_eq!(ssm.format_word(&p2.word()[p2.origin()..]), "ababbba");
        for k in 0..7 {
            let p = ssm.generate_patch(k, "a|a").unwrap();
            let mk = matrix_power(&ssm.matrix(), k);
            let seed = [2, 0];
            for i in 0..2 {
                let want = &mk[i][0] * seed[0] + &mk[i][1] * seed[1];
                assert_eq!(BigInt::from(p.letter_counts()[i]), want);
            }
        }
    }

    #[test]
    fn illegal_seed_lists_legal_ones() {
        let fib = SubstitutionSystem::parse("a -> ab; b -> a").unwrap();
        match fib.generate_patch(2, "b|b") {
            Err(Error::IllegalSeed { legal, .. }) => {
                assert_eq!(legal, vec!["a|a", "a|b", "b|a"]);
            }
            other => panic!("expected illegal seed, got {other:?}"),
        }
        let ssm = SubstitutionSystem::parse("a -> bba; b -> ab").unwrap();
        assert_eq!(ssm.legal_pairs().len(), 4);
    }

    #[test]
    fn tile_counts_roundtrip() {
        let sigma = SubstitutionSystem::parse("a -> aaaaabb; b -> baa").unwrap();
        let z = lam(3, 2);
        assert_eq!(tile_counts_i64(&sigma, &z), Some((3, 2)));
        let ssm = SubstitutionSystem::parse("a -> bba; b -> ab").unwrap();
        assert_eq!(tile_counts_i64(&ssm, &s2(5, -7)), Some((-7, 5)));
    }
}

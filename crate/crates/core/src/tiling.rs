//! Expansion sets `D_{A,k} = { sum_{i<k} A^i d_i }`, cardinality and
//! discreteness probes, and the closed-form tile classification.
//!
//! Here the lower-left entry `l` enters with its own sign: `A^i` has
//! lower-left entry `l (p^i - q^i)/(p - q)`. Writing `l = u/v` in lowest
//! terms, every point of `D_{A,k}` has integer `x` and `v*y`, so the sets are
//! enumerated in `i128` and collisions are found by hashing.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::{AffinePair, Mat2};
use crate::rational::{int, Rational};

pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;

/// Two distinct digit sequences of length `level` with the same image.
/// `x[i], y[i]` is the digit multiplied by `A^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionWitness {
    pub level: u32,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub x_alt: Vec<u32>,
    pub y_alt: Vec<u32>,
}

impl CollisionWitness {
    /// `sum A^i (x_i, y_i)` for both sequences, computed with repeated
    /// multiplication of the matrix (independent of the enumeration).
    pub fn images(&self, pair: &AffinePair) -> ((Rational, Rational), (Rational, Rational)) {
        let a = pair.matrix();
        let eval = |xs: &[u32], ys: &[u32]| {
            let mut power = Mat2::identity();
            let mut sx = Rational::zero();
            let mut sy = Rational::zero();
            for (x, y) in xs.iter().zip(ys) {
                let (dx, dy) = power.apply(&int(i64::from(*x)), &int(i64::from(*y)));
                sx += dx;
                sy += dy;
                power = a.mul(&power);
            }
            (sx, sy)
        };
        (eval(&self.x, &self.y), eval(&self.x_alt, &self.y_alt))
    }

    /// Distinct digit sequences, digits inside `E_m x E_n`, equal images.
    pub fn is_valid(&self, pair: &AffinePair) -> bool {
        let len = self.level as usize;
        let lens_ok = [&self.x, &self.y, &self.x_alt, &self.y_alt]
            .iter()
            .all(|v| v.len() == len);
        let digits_ok = self.x.iter().chain(&self.x_alt).all(|&d| d < pair.m())
            && self.y.iter().chain(&self.y_alt).all(|&d| d < pair.n());
        let distinct = self.x != self.x_alt || self.y != self.y_alt;
        if !(lens_ok && digits_ok && distinct) {
            return false;
        }
        let (first, second) = self.images(pair);
        first == second
    }
}

impl fmt::Display for CollisionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "k={} x=({}) y=({}) vs x=({}) y=({})",
            self.level,
            join(&self.x),
            join(&self.y),
            join(&self.x_alt),
            join(&self.y_alt)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitPointSet {
    pub k: u32,
    /// Distinct points as `(x, v*y)` with `v` the denominator of `l`.
    pub scaled_points: Vec<(i128, i128)>,
    pub denominator: i128,
    /// First collision in enumeration order.
    pub collision: Option<CollisionWitness>,
}

impl DigitPointSet {
    pub fn len(&self) -> usize {
        self.scaled_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled_points.is_empty()
    }

    pub fn points(&self) -> Vec<(Rational, Rational)> {
        self.scaled_points
            .iter()
            .map(|&(x, vy)| {
                (
                    Rational::from_integer(BigInt::from(x)),
                    Rational::new(BigInt::from(vy), BigInt::from(self.denominator)),
                )
            })
            .collect()
    }
}

struct Enumerator {
    m: u32,
    n: u32,
    /// Per position `i`: contribution of digit index `d` as `(x, v*y)`.
    steps: Vec<Vec<(i128, i128)>>,
    denominator: i128,
}

fn overflow() -> Error {
    Error::Overflow("digit expansion exceeds i128".into())
}

impl Enumerator {
    fn new(pair: &AffinePair, k: u32) -> Result<Self> {
        let (p, q) = (i128::from(pair.p()), i128::from(pair.q()));
        let l = pair.lower_left();
        let u = l.numer().to_i128().ok_or_else(overflow)?;
        let v = l.denom().to_i128().ok_or_else(overflow)?;
        let mut steps = Vec::with_capacity(k as usize);
        // A^i lower-left over l: c_i = (p^i - q^i)/(p - q), c_{i+1} = p c_i + q^i
        let (mut pi, mut qi, mut ci) = (1i128, 1i128, 0i128);
        for _ in 0..k {
            let mut row = Vec::with_capacity((pair.m() * pair.n()) as usize);
            for x in 0..i128::from(pair.m()) {
                for y in 0..i128::from(pair.n()) {
                    let px = pi.checked_mul(x).ok_or_else(overflow)?;
                    let vy = v
                        .checked_mul(qi.checked_mul(y).ok_or_else(overflow)?)
                        .and_then(|a| u.checked_mul(ci)?.checked_mul(x)?.checked_add(a))
                        .ok_or_else(overflow)?;
                    row.push((px, vy));
                }
            }
            steps.push(row);
            ci = p
                .checked_mul(ci)
                .and_then(|c| c.checked_add(qi))
                .ok_or_else(overflow)?;
            pi = pi.checked_mul(p).ok_or_else(overflow)?;
            qi = qi.checked_mul(q).ok_or_else(overflow)?;
        }
        Ok(Self {
            m: pair.m(),
            n: pair.n(),
            steps,
            denominator: v,
        })
    }

    fn decode(&self, mut index: u64, k: u32) -> (Vec<u32>, Vec<u32>) {
        let base = u64::from(self.m * self.n);
        let mut digits = vec![0u32; k as usize];
        for slot in digits.iter_mut().rev() {
            *slot = (index % base) as u32;
            index /= base;
        }
        let xs = digits.iter().map(|d| d / self.n).collect();
        let ys = digits.iter().map(|d| d % self.n).collect();
        (xs, ys)
    }
}

fn level_size(pair: &AffinePair, k: u32, budget: u64) -> Result<u64> {
    let count = u128::from(pair.digit_count()).saturating_pow(k);
    if count > u128::from(budget) {
        return Err(Error::BudgetExceeded {
            what: "digit expansion level",
            needed: count,
            budget: u128::from(budget),
        });
    }
    Ok(count as u64)
}

/// Enumerates `D_{A,k}`; sequences are visited with the coefficient of `A^0`
/// varying slowest.
pub fn enumerate_digit_set(pair: &AffinePair, k: u32, budget: u64) -> Result<DigitPointSet> {
    if k == 0 {
        return Err(Error::InvalidParameter("level k must be at least 1".into()));
    }
    level_size(pair, k, budget)?;
    let en = Enumerator::new(pair, k)?;
    let mut pts: Vec<(i128, i128)> = vec![(0, 0)];
    for row in &en.steps {
        let mut next = Vec::with_capacity(pts.len() * row.len());
        for &(x, y) in &pts {
            for &(dx, dy) in row {
                next.push((
                    x.checked_add(dx).ok_or_else(overflow)?,
                    y.checked_add(dy).ok_or_else(overflow)?,
                ));
            }
        }
        pts = next;
    }
    let mut first_seen: HashMap<(i128, i128), u64> = HashMap::with_capacity(pts.len());
    let mut distinct = Vec::with_capacity(pts.len());
    let mut collision = None;
    for (index, &pt) in pts.iter().enumerate() {
        match first_seen.get(&pt) {
            Some(&earlier) => {
                if collision.is_none() {
                    let (x_alt, y_alt) = en.decode(earlier, k);
                    let (x, y) = en.decode(index as u64, k);
                    collision = Some(CollisionWitness {
                        level: k,
                        x: x_alt,
                        y: y_alt,
                        x_alt: x,
                        y_alt: y,
                    });
                }
            }
            None => {
                first_seen.insert(pt, index as u64);
                distinct.push(pt);
            }
        }
    }
    Ok(DigitPointSet {
        k,
        scaled_points: distinct,
        denominator: en.denominator,
        collision,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CardinalityOutcome {
    /// `#D_{A,k} = |pq|^k` for every `k <= through`.
    Pass { through: u32 },
    /// First level with a collision.
    Fail { k: u32, witness: CollisionWitness },
    /// Budget ran out before `k_max`; levels below `checked_through` passed.
    Unknown { checked_through: u32 },
}

pub fn cardinality_probe(pair: &AffinePair, k_max: u32, budget: u64) -> Result<CardinalityOutcome> {
    for k in 1..=k_max {
        let set = match enumerate_digit_set(pair, k, budget) {
            Ok(s) => s,
            Err(Error::BudgetExceeded { .. }) => {
                return Ok(CardinalityOutcome::Unknown {
                    checked_through: k - 1,
                })
            }
            Err(e) => return Err(e),
        };
        if let Some(witness) = set.collision {
            return Ok(CardinalityOutcome::Fail { k, witness });
        }
    }
    Ok(CardinalityOutcome::Pass { through: k_max })
}

/// Exact minimal pairwise max-norm distance in each `D_{A,k}`, `k = 1..=k_max`,
/// stopping early when the budget runs out. Points with different `x` are at
/// least 1 apart and `(0,0), (1,0)` or `(0,0), (0,1)` realize 1, so only
/// points sharing an `x` can come closer.
pub fn discreteness_probe(
    pair: &AffinePair,
    k_max: u32,
    budget: u64,
) -> Result<Vec<(u32, Rational)>> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        let set = match enumerate_digit_set(pair, k, budget) {
            Ok(s) => s,
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        if set.collision.is_some() {
            out.push((k, Rational::zero()));
            continue;
        }
        if pair.digit_count() < 2 {
            break;
        }
        let mut pts = set.scaled_points.clone();
        pts.sort_unstable();
        let mut best = set.denominator;
        for w in pts.windows(2) {
            if w[0].0 == w[1].0 {
                best = best.min(w[1].1 - w[0].1);
            }
        }
        out.push((
            k,
            Rational::new(BigInt::from(best), BigInt::from(set.denominator)),
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TileStatus {
    Tile,
    NotTile,
    Unknown,
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TileCase {
    MLessP,
    MEqualsP,
    MGreaterP_aZero,
    MGreaterP_aIntWideN,
    OutsideClassification,
}

impl TileCase {
    pub fn name(self) -> &'static str {
        match self {
            TileCase::MLessP => "MLessP",
            TileCase::MEqualsP => "MEqualsP",
            TileCase::MGreaterP_aZero => "MGreaterP_aZero",
            TileCase::MGreaterP_aIntWideN => "MGreaterP_aIntWideN",
            TileCase::OutsideClassification => "OutsideClassification",
        }
    }
}

/// Probe results attached to verdicts the classification leaves open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileEvidence {
    pub cardinality: CardinalityOutcome,
    pub discreteness: Vec<(u32, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileVerdict {
    pub status: TileStatus,
    pub case: TileCase,
    pub witness: Option<CollisionWitness>,
    pub evidence: Option<TileEvidence>,
}

/// Levels probed for verdicts outside the classification.
pub const EVIDENCE_LEVELS: u32 = 6;

pub fn classify_tile(pair: &AffinePair) -> Result<TileVerdict> {
    classify_tile_with_budget(pair, DEFAULT_POINT_BUDGET)
}

pub fn classify_tile_with_budget(pair: &AffinePair, budget: u64) -> Result<TileVerdict> {
    let (p, q) = (pair.p(), pair.q());
    let (m, n) = (i64::from(pair.m()), i64::from(pair.n()));
    let pq = (p * q).unsigned_abs();
    let mn = pair.digit_count();
    if mn != pq {
        return Err(Error::NotTileCandidate { mn, pq });
    }
    let verdict = |status, case, witness| TileVerdict {
        status,
        case,
        witness,
        evidence: None,
    };
    if m < p.abs() {
        let w = m_less_p_witness(pair);
        debug_assert!(w.is_valid(pair));
        return Ok(verdict(TileStatus::NotTile, TileCase::MLessP, Some(w)));
    }
    if m == p.abs() {
        return Ok(verdict(TileStatus::Tile, TileCase::MEqualsP, None));
    }
    let l = pair.lower_left();
    if l.is_zero() {
        let w = integer_shear_witness(pair)?;
        return Ok(verdict(TileStatus::NotTile, TileCase::MGreaterP_aZero, w));
    }
    if l.is_integer() && 2 * n > q.abs() {
        let w = integer_shear_witness(pair)?;
        if w.is_none() {
            return Err(Error::Hypothesis(
                "no balanced digit representation found".into(),
            ));
        }
        return Ok(verdict(
            TileStatus::NotTile,
            TileCase::MGreaterP_aIntWideN,
            w,
        ));
    }
    let evidence = TileEvidence {
        cardinality: cardinality_probe(pair, EVIDENCE_LEVELS, budget)?,
        discreteness: discreteness_probe(pair, EVIDENCE_LEVELS, budget)?,
    };
    Ok(TileVerdict {
        status: TileStatus::Unknown,
        case: TileCase::OutsideClassification,
        witness: None,
        evidence: Some(evidence),
    })
}

/// Level-2 witness for `m < |p|`: `n > |q|`, so the row digit `|q|` exists.
fn m_less_p_witness(pair: &AffinePair) -> CollisionWitness {
    let q = pair.q();
    let qa = q.unsigned_abs() as u32;
    let (y, y_alt) = if q > 0 {
        (vec![qa, 0], vec![0, 1])
    } else {
        (vec![qa, 1], vec![0, 0])
    };
    CollisionWitness {
        level: 2,
        x: vec![0, 0],
        y,
        x_alt: vec![0, 0],
        y_alt,
    }
}

/// Least `k` with `(n-1)(|q|^{k+1}-1)/(|q|-1) >= |target|`.
pub fn least_level(q: i64, n: u32, target: i128) -> u32 {
    let qa = i128::from(q.abs());
    let top = i128::from(n) - 1;
    if target == 0 {
        return 0;
    }
    let mut k = 0u32;
    let mut reach = top;
    let mut power = qa;
    while reach < target.abs() {
        k += 1;
        power = power.saturating_mul(qa);
        reach = top.saturating_mul((power - 1) / (qa - 1));
    }
    k
}

/// Digits `e_0..e_k` in `[-(n-1), n-1]` with `sum e_i q^i = target`.
pub fn balanced_digits(q: i64, n: u32, target: i128, k: u32) -> Option<Vec<i64>> {
    let q = i128::from(q);
    let top = i128::from(n) - 1;
    // reach[i] = top * sum_{j<i} |q|^j
    let mut reach = vec![0i128; k as usize + 2];
    let mut power = 1i128;
    for i in 1..reach.len() {
        reach[i] = reach[i - 1].checked_add(top.checked_mul(power)?)?;
        power = power.checked_mul(q.abs())?;
    }
    fn go(
        q: i128,
        top: i128,
        rest: i128,
        i: usize,
        len: usize,
        reach: &[i128],
        out: &mut Vec<i64>,
    ) -> bool {
        if i == len {
            return rest == 0;
        }
        // remaining digits e_i.. contribute q^i * (e_i + q e_{i+1} + ...)
        let mut choices: Vec<i128> = (-top..=top)
            .filter(|e| (rest - e).rem_euclid(q.abs()) == 0)
            .collect();
        choices.sort_by_key(|e| (e.abs(), *e));
        for e in choices {
            let next = (rest - e) / q;
            if next.abs() > reach[len - i - 1] {
                continue;
            }
            out.push(e as i64);
            if go(q, top, next, i + 1, len, reach, out) {
                return true;
            }
            out.pop();
        }
        false
    }
    let len = k as usize + 1;
    if target.abs() > reach[len] {
        return None;
    }
    let mut out = Vec::with_capacity(len);
    go(q, top, target, 0, len, &reach, &mut out).then_some(out)
}

/// Witness for `m > |p|` and integer `l`: the row sequences `(p, 0)` and
/// `(0, 1)` (or `(|p|, 1)` and `(0, 0)` when `p < 0`) share their `x` sum, and
/// the `y` digits absorb the shear difference.
fn integer_shear_witness(pair: &AffinePair) -> Result<Option<CollisionWitness>> {
    let p = pair.p();
    let pa = p.unsigned_abs() as u32;
    let l = pair
        .lower_left()
        .to_integer()
        .to_i128()
        .ok_or_else(overflow)?;
    let (x, x_alt) = if p > 0 {
        (vec![pa, 0], vec![0, 1])
    } else {
        (vec![pa, 1], vec![0, 0])
    };
    // x digits sit at positions 0 and 1, and only A^1 shears: its lower-left entry is l
    let shear = |xs: &[u32]| -> i128 { l * i128::from(xs[1]) };
    let delta = shear(&x_alt) - shear(&x);
    let k0 = least_level(pair.q(), pair.n(), delta);
    let level = k0.max(1) + 1;
    let Some(e) = balanced_digits(pair.q(), pair.n(), delta, level - 1) else {
        return Ok(None);
    };
    let mut y = vec![0u32; level as usize];
    let mut y_alt = vec![0u32; level as usize];
    for (i, &d) in e.iter().enumerate() {
        if d >= 0 {
            y[i] = d as u32;
        } else {
            y_alt[i] = (-d) as u32;
        }
    }
    let pad = |mut v: Vec<u32>| {
        v.resize(level as usize, 0);
        v
    };
    let w = CollisionWitness {
        level,
        x: pad(x),
        y,
        x_alt: pad(x_alt),
        y_alt,
    };
    Ok(w.is_valid(pair).then_some(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn pair(p: i64, q: i64, a: Rational, m: u32, n: u32) -> AffinePair {
        AffinePair::new(p, q, a, m, n).unwrap()
    }

    #[test]
    fn level_two_collision_for_narrow_columns() {
        let pr = pair(4, 3, int(1), 3, 4);
        let set = enumerate_digit_set(&pr, 2, 1000).unwrap();
        assert!(set.collision.is_some());
        assert!(set.collision.as_ref().unwrap().is_valid(&pr));
        let v = classify_tile(&pr).unwrap();
        assert_eq!((v.status, v.case), (TileStatus::NotTile, TileCase::MLessP));
        let w = v.witness.unwrap();
        assert_eq!(
            (w.x.clone(), w.y.clone(), w.x_alt.clone(), w.y_alt.clone()),
            (vec![0, 0], vec![3, 0], vec![0, 0], vec![0, 1])
        );
        assert!(w.is_valid(&pr));
        // the same witness for any shear
        for a in [int(0), frac(7, 3), int(-5)] {
            let pr = pair(4, 3, a, 3, 4);
            assert_eq!(classify_tile(&pr).unwrap().witness.unwrap(), w);
        }
    }

    #[test]
    fn single_digit_level_is_injective() {
        for (p, q, a, m, n) in [
            (4, 3, int(1), 3, 4),
            (2, 6, int(1), 2, 6),
            (2, 3, frac(1, 2), 3, 2),
        ] {
            let set = enumerate_digit_set(&pair(p, q, a, m, n), 1, 100).unwrap();
            assert_eq!(set.len(), (m * n) as usize);
            assert!(set.collision.is_none());
        }
    }

    #[test]
    fn full_width_columns_tile() {
        let pr = pair(2, 6, int(1), 2, 6);
        let set = enumerate_digit_set(&pr, 3, 10_000).unwrap();
        assert_eq!(set.len(), 1728);
        assert!(set.collision.is_none());
        assert_eq!(
            cardinality_probe(&pair(2, 6, int(5), 2, 6), 3, 10_000).unwrap(),
            CardinalityOutcome::Pass { through: 3 }
        );
        let v = classify_tile(&pair(2, 6, int(123), 2, 6)).unwrap();
        assert_eq!((v.status, v.case), (TileStatus::Tile, TileCase::MEqualsP));
        let d = discreteness_probe(&pr, 3, 10_000).unwrap();
        assert_eq!(d, vec![(1, int(1)), (2, int(1)), (3, int(1))]);
    }

    #[test]
    fn wide_columns_with_integer_shear_collide() {
        let pr = pair(2, 3, int(1), 3, 2);
        let v = classify_tile(&pr).unwrap();
        assert_eq!(
            (v.status, v.case),
            (TileStatus::NotTile, TileCase::MGreaterP_aIntWideN)
        );
        let w = v.witness.unwrap();
        assert!(w.is_valid(&pr));
        assert_eq!(w.level, 2);
        assert_eq!(least_level(3, 2, 1), 0);
        match cardinality_probe(&pr, 6, 1_000_000).unwrap() {
            CardinalityOutcome::Fail { k, witness } => {
                assert!(k <= w.level);
                assert!(witness.is_valid(&pr));
            }
            other => panic!("expected a collision, got {other:?}"),
        }
        let v = classify_tile(&pair(2, 3, int(0), 3, 2)).unwrap();
        assert_eq!(
            (v.status, v.case),
            (TileStatus::NotTile, TileCase::MGreaterP_aZero)
        );
        assert!(v.witness.unwrap().is_valid(&pair(2, 3, int(0), 3, 2)));
    }

    #[test]
    fn open_region_reports_unknown_with_evidence() {
        let pr = pair(2, 3, frac(1, 2), 3, 2);
        let v = classify_tile(&pr).unwrap();
        assert_eq!(
            (v.status, v.case),
            (TileStatus::Unknown, TileCase::OutsideClassification)
        );
        let ev = v.evidence.unwrap();
        assert_eq!(ev.discreteness[0], (1, int(1)));
    }

    #[test]
    fn non_candidate_is_rejected() {
        let err = classify_tile(&pair(4, 3, int(1), 5, 2)).unwrap_err();
        assert!(err.to_string().contains("not a candidate tile digit set"));
    }

    #[test]
    fn level_zero_digit_set_is_rejected() {
        assert!(enumerate_digit_set(&pair(2, 3, int(1), 3, 2), 0, 10).is_err());
    }

    #[test]
    fn budget_limits_levels() {
        let err = enumerate_digit_set(&pair(2, 6, int(1), 2, 6), 6, 1_000_000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert_eq!(
            cardinality_probe(&pair(2, 6, int(1), 2, 6), 7, 10_000).unwrap(),
            CardinalityOutcome::Unknown { checked_through: 3 }
        );
    }

    proptest! {
        #[test]
        fn integer_shear_witnesses_are_exact(
            p in prop::sample::select(vec![-3i64, -2, 2, 3]),
            q in prop::sample::select(vec![-5i64, -4, -3, 3, 4, 5]),
            a in -400i64..400,
        ) {
            // m > |p| with mn = |pq| needs |q| divisible by m/|p|; pick n from q
            let pa = p.abs();
            let qa = q.abs();
            for m in (pa + 1)..=(pa * qa) {
                if (pa * qa) % m != 0 { continue; }
                let n = (pa * qa / m) as u32;
                if 2 * i64::from(n) - 1 < qa { continue; }
                let pr = pair(p, q, int(a), m as u32, n);
                let v = classify_tile(&pr).unwrap();
                prop_assert_eq!(v.status, TileStatus::NotTile);
                prop_assert!(v.witness.unwrap().is_valid(&pr));
            }
        }

        #[test]
        fn balanced_digits_reconstruct_target(q in prop::sample::select(vec![-4i64, -3, 3, 4, 5]), extra in 0u32..2, target in -300i128..300) {
            let n = (q.unsigned_abs() as u32 + 2) / 2;
            let k = least_level(q, n, target) + extra;
            let e = balanced_digits(q, n, target, k).expect("representable");
            let value: i128 = e.iter().enumerate().map(|(i, &d)| i128::from(d) * i128::from(q).pow(i as u32)).sum();
            prop_assert_eq!(value, target);
            prop_assert!(e.iter().all(|d| d.unsigned_abs() < u64::from(n)));
        }
    }
}

//! Extreme values of linear functionals over the digit-sequence spaces
//!
//! ```text
//! A = { (c_k) : sum c_k p^-k = 1, |c_k| <= m-1 }
//! B = { (c_k) : sum c_k p^-k = 0, |c_k| <= m-1 }
//! ```
//!
//! Both spaces are the infinite paths of a finite automaton: after reading
//! `c_1..c_d` the residual `p^d (target - sum_{k<=d} c_k p^-k)` is an integer
//! and a sequence belongs to the space exactly when every residual stays in
//! `[-(m-1)/(p-1), (m-1)/(p-1)]`. The oracles below search that automaton
//! with exact arithmetic and geometric tail bounds; the closed forms are
//! evaluated separately and never consulted by the oracles.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::params::{delta_digits, inverse_power_coeff};
use crate::rational::{frac, int, pow, Rational, RationalInterval};

pub const DEFAULT_DEPTH: u32 = 12;
pub const DEFAULT_NODE_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Sequences whose base-p series sums to 1.
    SumOne,
    /// Sequences whose base-p series sums to 0.
    SumZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpace {
    kind: SpaceKind,
    p: i64,
    max_digit: i64,
    residual_bound: i64,
}

impl SequenceSpace {
    pub fn new(kind: SpaceKind, p: i64, m: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParameter(format!(
                "sequence spaces need a normalized base p >= 2, got {p}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameter(
                "digit count m must be positive".into(),
            ));
        }
        let max_digit = i64::from(m) - 1;
        Ok(Self {
            kind,
            p,
            max_digit,
            residual_bound: max_digit / (p - 1),
        })
    }

    pub fn sum_one(p: i64, m: u32) -> Result<Self> {
        Self::new(SpaceKind::SumOne, p, m)
    }

    pub fn sum_zero(p: i64, m: u32) -> Result<Self> {
        Self::new(SpaceKind::SumZero, p, m)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn max_digit(&self) -> i64 {
        self.max_digit
    }

    pub fn alphabet(&self) -> Vec<i64> {
        delta_digits((self.max_digit + 1) as u32)
    }

    /// Required value of `sum c_k p^-k`.
    pub fn constraint(&self) -> i64 {
        match self.kind {
            SpaceKind::SumOne => 1,
            SpaceKind::SumZero => 0,
        }
    }

    pub fn start_state(&self) -> i64 {
        self.constraint()
    }

    pub fn is_state(&self, residual: i64) -> bool {
        residual.abs() <= self.residual_bound
    }

    pub fn is_empty(&self) -> bool {
        !self.is_state(self.start_state())
    }

    /// Residual after appending `digit`, if it can still be completed.
    pub fn next_state(&self, residual: i64, digit: i64) -> Option<i64> {
        if digit.abs() > self.max_digit {
            return None;
        }
        let next = self.p * residual - digit;
        self.is_state(next).then_some(next)
    }

    pub(crate) fn states(&self) -> std::ops::RangeInclusive<i64> {
        -self.residual_bound..=self.residual_bound
    }

    /// Whether the finite prefix extends to an element of the space.
    pub fn prefix_completable(&self, prefix: &[i64]) -> bool {
        let mut state = self.start_state();
        if !self.is_state(state) {
            return false;
        }
        for &d in prefix {
            match self.next_state(state, d) {
                Some(s) => state = s,
                None => return false,
            }
        }
        true
    }

    /// Exact membership test for an eventually periodic sequence.
    pub fn contains(&self, seq: &EventuallyPeriodic) -> bool {
        let mut state = self.start_state();
        if !self.is_state(state) {
            return false;
        }
        for &d in &seq.preperiod {
            match self.next_state(state, d) {
                Some(s) => state = s,
                None => return false,
            }
        }
        let mut seen = HashSet::new();
        while seen.insert(state) {
            for &d in &seq.period {
                match self.next_state(state, d) {
                    Some(s) => state = s,
                    None => return false,
                }
            }
        }
        true
    }

    /// Deterministic completion from `state`: each digit is `p*state` clamped to the
    /// alphabet, which always keeps the residual admissible.
    pub fn greedy_completion(&self, state: i64) -> (Vec<i64>, Vec<i64>) {
        let mut order = Vec::new();
        let mut digits = Vec::new();
        let mut s = state;
        loop {
            if let Some(pos) = order.iter().position(|&t| t == s) {
                let period = digits.split_off(pos);
                return (digits, period);
            }
            order.push(s);
            let d = (self.p * s).clamp(-self.max_digit, self.max_digit);
            digits.push(d);
            s = self.p * s - d;
        }
    }
}

impl fmt::Display for SequenceSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            SpaceKind::SumOne => "sum-one",
            SpaceKind::SumZero => "sum-zero",
        };
        write!(f, "{name}(p={}, |digit|<={})", self.p, self.max_digit)
    }
}

/// Sequence `preperiod, period, period, ...` (positions start at 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodic {
    preperiod: Vec<i64>,
    period: Vec<i64>,
}

impl EventuallyPeriodic {
    /// `period` must be nonempty.
    pub fn new(preperiod: Vec<i64>, period: Vec<i64>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        Self { preperiod, period }
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    /// Digit at 1-based position `k`.
    pub fn digit(&self, k: usize) -> i64 {
        assert!(k >= 1);
        let idx = k - 1;
        if idx < self.preperiod.len() {
            self.preperiod[idx]
        } else {
            self.period[(idx - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<i64> {
        (1..=len).map(|k| self.digit(k)).collect()
    }

    pub fn max_abs_digit(&self) -> i64 {
        self.preperiod
            .iter()
            .chain(&self.period)
            .map(|d| d.abs())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for EventuallyPeriodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}({})*", join(&self.preperiod), join(&self.period))?;
        Ok(())
    }
}

/// One summand shape of a weight sequence: `coef * ratio^k` or `coef * k * ratio^k`.
#[derive(Debug, Clone)]
struct WeightTerm {
    coef: Rational,
    ratio: Rational,
    linear: bool,
}

impl WeightTerm {
    /// Upper bound on `sum_{k>depth} |term_k|`.
    fn tail_abs(&self, depth: u32) -> Rational {
        let y = self.ratio.abs();
        let one = Rational::one();
        let y_next = num_traits::pow(y.clone(), depth as usize + 1);
        let c = self.coef.abs();
        if self.linear {
            let d = int(i64::from(depth));
            c * y_next * (&d + &one - d * &y) / num_traits::pow(&one - &y, 2)
        } else {
            c * y_next / (one - y)
        }
    }

    /// `sum_{j>=0} sum_{t=1}^{L} c_t term_{s+t+jL}` for a repeating block.
    fn periodic_sum(&self, start: usize, block: &[i64]) -> Rational {
        let len = block.len();
        let z = num_traits::pow(self.ratio.clone(), len);
        let one = Rational::one();
        let geo = (&one - &z).recip();
        let mut total = Rational::zero();
        for (t, &c) in block.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let pos = start + t + 1;
            let x_pos = num_traits::pow(self.ratio.clone(), pos);
            let factor = if self.linear {
                int(pos as i64) * &geo + int(len as i64) * &z * &geo * &geo
            } else {
                geo.clone()
            };
            total += int(c) * x_pos * factor;
        }
        total * &self.coef
    }
}

/// Linear functionals `offset + sum_k w_k c_k` evaluated on digit sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueFunctional {
    /// `sum c_k q^-k`
    GeometricQ { q: i64 },
    /// `sum k c_k p^-k`
    WeightedP { p: i64 },
    /// `offset + scale * sum r_{k+1} c_k`
    Affine {
        p: i64,
        q: i64,
        offset: Rational,
        scale: Rational,
    },
}

impl ValueFunctional {
    fn terms(&self) -> Vec<WeightTerm> {
        match self {
            Self::GeometricQ { q } => vec![WeightTerm {
                coef: Rational::one(),
                ratio: frac(1, *q),
                linear: false,
            }],
            Self::WeightedP { p } => vec![WeightTerm {
                coef: Rational::one(),
                ratio: frac(1, *p),
                linear: true,
            }],
            Self::Affine { p, q, scale, .. } => {
                let (p, q) = (*p, *q);
                if p == q {
                    // r_{k+1} = (k+1) q^{-k-2}
                    let c = scale.clone() * pow(q, -2);
                    vec![
                        WeightTerm {
                            coef: c.clone(),
                            ratio: frac(1, q),
                            linear: true,
                        },
                        WeightTerm {
                            coef: c,
                            ratio: frac(1, q),
                            linear: false,
                        },
                    ]
                } else {
                    vec![
                        WeightTerm {
                            coef: scale.clone() / int(p * (q - p)),
                            ratio: frac(1, p),
                            linear: false,
                        },
                        WeightTerm {
                            coef: -scale.clone() / int(q * (q - p)),
                            ratio: frac(1, q),
                            linear: false,
                        },
                    ]
                }
            }
        }
    }

    pub fn offset(&self) -> Rational {
        match self {
            Self::Affine { offset, .. } => offset.clone(),
            _ => Rational::zero(),
        }
    }

    /// Weight of the digit at 1-based position `k`.
    pub fn weight(&self, k: u32) -> Rational {
        match self {
            Self::GeometricQ { q } => pow(*q, -(k as i32)),
            Self::WeightedP { p } => int(i64::from(k)) * pow(*p, -(k as i32)),
            Self::Affine { p, q, scale, .. } => scale * inverse_power_coeff(*p, *q, k + 1),
        }
    }

    /// Upper bound on `sum_{k>depth} |w_k|`.
    pub fn tail_weight_bound(&self, depth: u32) -> Rational {
        self.terms().iter().map(|t| t.tail_abs(depth)).sum()
    }

    /// Value on a finite sequence (all later digits zero).
    pub fn eval_prefix(&self, digits: &[i64]) -> Rational {
        let mut v = self.offset();
        for (i, &d) in digits.iter().enumerate() {
            if d != 0 {
                v += self.weight(i as u32 + 1) * int(d);
            }
        }
        v
    }

    /// Exact value on an eventually periodic sequence.
    pub fn eval(&self, seq: &EventuallyPeriodic) -> Rational {
        let head = self.eval_prefix(&seq.preperiod);
        let start = seq.preperiod.len();
        let tail: Rational = self
            .terms()
            .iter()
            .map(|t| t.periodic_sum(start, &seq.period))
            .sum();
        head + tail
    }
}

impl fmt::Display for ValueFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GeometricQ { q } => write!(f, "sum c_k ({q})^-k"),
            Self::WeightedP { p } => write!(f, "sum k c_k ({p})^-k"),
            Self::Affine { offset, scale, .. } => write!(f, "{offset} + ({scale}) sum r_(k+1) c_k"),
        }
    }
}

/// Enclosures of the maximum and the minimum of a functional over a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremeEnclosure {
    pub max: RationalInterval,
    pub min: RationalInterval,
    pub depth: u32,
    /// False when the space is empty; both fields then hold the a-priori range.
    pub certified: bool,
}

/// Encloses `max` and `min` of `functional` over `space`.
///
/// Prefixes reaching the same residual have identical sets of completions and
/// identical future weights, so only the best partial value per residual is
/// kept at each level. Each enclosure is the best leaf value widened by the
/// functional's tail bound, so its width is exactly twice that bound.
pub fn enumerate_extremes(
    space: &SequenceSpace,
    functional: &ValueFunctional,
    depth: u32,
) -> ExtremeEnclosure {
    let tail = int(space.max_digit) * functional.tail_weight_bound(depth);
    let offset = functional.offset();
    let alphabet = space.alphabet();

    let mut frontier: BTreeMap<i64, (Rational, Rational)> = BTreeMap::new();
    if space.is_state(space.start_state()) {
        frontier.insert(space.start_state(), (Rational::zero(), Rational::zero()));
    }
    for k in 1..=depth {
        let w = functional.weight(k);
        let mut next: BTreeMap<i64, (Rational, Rational)> = BTreeMap::new();
        for (&state, (hi, lo)) in &frontier {
            for &d in &alphabet {
                let Some(s) = space.next_state(state, d) else {
                    continue;
                };
                let step = &w * int(d);
                let cand_hi = hi + &step;
                let cand_lo = lo + &step;
                next.entry(s)
                    .and_modify(|(h, l)| {
                        if cand_hi > *h {
                            *h = cand_hi.clone();
                        }
                        if cand_lo < *l {
                            *l = cand_lo.clone();
                        }
                    })
                    .or_insert((cand_hi, cand_lo));
            }
        }
        frontier = next;
    }

    let best_hi = frontier.values().map(|(h, _)| h).max().cloned();
    let best_lo = frontier.values().map(|(_, l)| l).min().cloned();
    match (best_hi, best_lo) {
        (Some(h), Some(l)) => ExtremeEnclosure {
            max: RationalInterval::point(h + &offset).widen(&tail),
            min: RationalInterval::point(l + &offset).widen(&tail),
            depth,
            certified: true,
        },
        _ => {
            let prior = RationalInterval::point(offset)
                .widen(&(int(space.max_digit) * functional.tail_weight_bound(0)));
            ExtremeEnclosure {
                max: prior.clone(),
                min: prior,
                depth,
                certified: false,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attainability {
    /// The witness lies in the space and its exact value lies in the target.
    Attainable(EventuallyPeriodic),
    /// Every element of the space was shown to miss the target.
    Unattainable,
    /// Neither could be certified within the depth and node budget.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttainabilityResult {
    pub status: Attainability,
    pub depth_used: u32,
    pub nodes: u64,
}

impl AttainabilityResult {
    pub fn is_attainable(&self) -> bool {
        matches!(self.status, Attainability::Attainable(_))
    }

    pub fn is_unattainable(&self) -> bool {
        self.status == Attainability::Unattainable
    }

    pub fn witness(&self) -> Option<&EventuallyPeriodic> {
        match &self.status {
            Attainability::Attainable(w) => Some(w),
            _ => None,
        }
    }

    /// Three-valued view: `Some(true)`, `Some(false)` or `None` for unknown.
    pub fn as_tristate(&self) -> Option<bool> {
        match self.status {
            Attainability::Attainable(_) => Some(true),
            Attainability::Unattainable => Some(false),
            Attainability::Unknown => None,
        }
    }
}

/// Decides whether some element of `space` has its functional value in `target`.
pub fn attainable(
    space: &SequenceSpace,
    functional: &ValueFunctional,
    target: &RationalInterval,
    depth: u32,
) -> AttainabilityResult {
    attainable_with_budget(space, functional, target, depth, DEFAULT_NODE_BUDGET)
}

pub fn attainable_with_budget(
    space: &SequenceSpace,
    functional: &ValueFunctional,
    target: &RationalInterval,
    depth: u32,
    node_budget: u64,
) -> AttainabilityResult {
    if space.is_empty() {
        return AttainabilityResult {
            status: Attainability::Unattainable,
            depth_used: 0,
            nodes: 0,
        };
    }
    let mut search = AttainSearch::new(space, functional, target, depth, node_budget);
    let mut prefix = Vec::new();
    let outcome = search.visit(0, space.start_state(), Rational::zero(), &mut prefix);
    let status = match outcome {
        Visit::Found(w) => Attainability::Attainable(w),
        Visit::Empty => Attainability::Unattainable,
        Visit::Open => Attainability::Unknown,
    };
    AttainabilityResult {
        status,
        depth_used: search.deepest,
        nodes: search.nodes,
    }
}

enum Visit {
    Found(EventuallyPeriodic),
    Empty,
    Open,
}

struct AttainSearch<'a> {
    space: &'a SequenceSpace,
    functional: &'a ValueFunctional,
    target: &'a RationalInterval,
    depth: u32,
    budget: u64,
    offset: Rational,
    weights: Vec<Rational>,
    alphabet: Vec<i64>,
    // completion bounds per level and residual, indexed by residual + bound
    upper: Vec<Vec<Rational>>,
    lower: Vec<Vec<Rational>>,
    seen: HashSet<(u32, i64, Rational)>,
    nodes: u64,
    deepest: u32,
}

impl<'a> AttainSearch<'a> {
    fn new(
        space: &'a SequenceSpace,
        functional: &'a ValueFunctional,
        target: &'a RationalInterval,
        depth: u32,
        budget: u64,
    ) -> Self {
        let weights: Vec<Rational> = (0..=depth + 1)
            .map(|k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    functional.weight(k)
                }
            })
            .collect();
        let alphabet = space.alphabet();
        let tail = int(space.max_digit) * functional.tail_weight_bound(depth);
        let states: Vec<i64> = space.states().collect();
        let mut upper = vec![vec![tail.clone(); states.len()]];
        let mut lower = vec![vec![-tail; states.len()]];
        for level in (0..depth).rev() {
            let w = &weights[level as usize + 1];
            let (up_next, lo_next) = (&upper[0], &lower[0]);
            let mut up = Vec::with_capacity(states.len());
            let mut lo = Vec::with_capacity(states.len());
            for &s in &states {
                let mut best_up: Option<Rational> = None;
                let mut best_lo: Option<Rational> = None;
                for &d in &alphabet {
                    if let Some(t) = space.next_state(s, d) {
                        let idx = (t + space.residual_bound) as usize;
                        let step = w * int(d);
                        let u = &step + &up_next[idx];
                        let l = step + &lo_next[idx];
                        if best_up.as_ref().is_none_or(|b| u > *b) {
                            best_up = Some(u);
                        }
                        if best_lo.as_ref().is_none_or(|b| l < *b) {
                            best_lo = Some(l);
                        }
                    }
                }
                up.push(best_up.expect("every admissible residual has a successor"));
                lo.push(best_lo.expect("every admissible residual has a successor"));
            }
            upper.insert(0, up);
            lower.insert(0, lo);
        }
        Self {
            space,
            functional,
            target,
            depth,
            budget,
            offset: functional.offset(),
            weights,
            alphabet,
            upper,
            lower,
            seen: HashSet::new(),
            nodes: 0,
            deepest: 0,
        }
    }

    fn range(&self, level: u32, state: i64, partial: &Rational) -> RationalInterval {
        let idx = (state + self.space.residual_bound) as usize;
        let base = &self.offset + partial;
        RationalInterval::spanning(
            &base + &self.lower[level as usize][idx],
            base + &self.upper[level as usize][idx],
        )
    }

    fn accept(&self, seq: EventuallyPeriodic) -> Option<EventuallyPeriodic> {
        (self.space.contains(&seq) && self.target.contains(&self.functional.eval(&seq)))
            .then_some(seq)
    }

    fn closures(&self, state: i64, prefix: &[i64]) -> Option<EventuallyPeriodic> {
        let p = self.space.p;
        let fixed = (p - 1) * state;
        if fixed.abs() <= self.space.max_digit {
            let seq = EventuallyPeriodic::new(prefix.to_vec(), vec![fixed]);
            if let Some(w) = self.accept(seq) {
                return Some(w);
            }
        }
        for &c1 in &self.alphabet {
            let Some(s1) = self.space.next_state(state, c1) else {
                continue;
            };
            let c2 = p * s1 - state;
            if c2.abs() <= self.space.max_digit && s1 != state {
                let seq = EventuallyPeriodic::new(prefix.to_vec(), vec![c1, c2]);
                if let Some(w) = self.accept(seq) {
                    return Some(w);
                }
            }
        }
        None
    }

    fn visit(&mut self, level: u32, state: i64, partial: Rational, prefix: &mut Vec<i64>) -> Visit {
        self.nodes += 1;
        self.deepest = self.deepest.max(level);
        if self.nodes > self.budget {
            return Visit::Open;
        }
        let range = self.range(level, state, &partial);
        if !range.intersects(self.target) {
            return Visit::Empty;
        }
        if !self.seen.insert((level, state, partial.clone())) {
            // an identical node was already explored without success
            return Visit::Empty;
        }
        if self.target.contains_interval(&range) {
            let (pre, period) = self.space.greedy_completion(state);
            let mut head = prefix.clone();
            head.extend(pre);
            if let Some(w) = self.accept(EventuallyPeriodic::new(head, period)) {
                return Visit::Found(w);
            }
        }
        if let Some(w) = self.closures(state, prefix) {
            return Visit::Found(w);
        }
        if level == self.depth {
            return Visit::Open;
        }

        let w = self.weights[level as usize + 1].clone();
        let goal = self.target.midpoint();
        let mut children: Vec<(Rational, i64, i64, Rational)> = Vec::new();
        for &d in &self.alphabet {
            let Some(s) = self.space.next_state(state, d) else {
                continue;
            };
            let child_partial = &partial + &w * int(d);
            let child_range = self.range(level + 1, s, &child_partial);
            if !child_range.intersects(self.target) {
                continue;
            }
            let score = if child_range.contains(&goal) {
                Rational::zero()
            } else {
                (child_range.lo() - &goal)
                    .abs()
                    .min((child_range.hi() - &goal).abs())
            };
            children.push((score, d, s, child_partial));
        }
        children.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut open = false;
        for (_, d, s, child_partial) in children {
            prefix.push(d);
            let outcome = self.visit(level + 1, s, child_partial, prefix);
            prefix.pop();
            match outcome {
                Visit::Found(w) => return Visit::Found(w),
                Visit::Open => {
                    open = true;
                    if self.nodes > self.budget {
                        return Visit::Open;
                    }
                }
                Visit::Empty => {}
            }
        }
        if open {
            Visit::Open
        } else {
            Visit::Empty
        }
    }
}

fn require_extremes_hypothesis(p: i64, q: i64, m: u32) -> Result<()> {
    let m = i64::from(m);
    if p < 2 || q.abs() < 2 {
        return Err(Error::Hypothesis(format!(
            "extremes formulas need p >= 2 and |q| >= 2, got p = {p}, q = {q}"
        )));
    }
    if !(p + 1 < m && m < 2 * p - 1) {
        return Err(Error::Hypothesis(format!(
            "extremes formulas unproven for this m: need {} < m < {}, got m = {m}",
            p + 1,
            2 * p - 1
        )));
    }
    Ok(())
}

/// `(max, min)` of `{ sum c_k q^-k : c in A }`.
pub fn closed_extremes_s(p: i64, q: i64, m: u32) -> Result<(Rational, Rational)> {
    require_extremes_hypothesis(p, q, m)?;
    let upper = frac(p - 1, q - 1);
    let lower = frac(p * q + q - 2 * p, q * (q - 1));
    Ok(if q > 0 {
        if p >= q {
            (upper, lower)
        } else {
            (lower, upper)
        }
    } else {
        (frac(p * q + 2 * p - q, q * (q + 1)), frac(p + 1, q + 1))
    })
}

/// `(max, min)` of `{ sum k c_k p^-k : c in A }`.
pub fn closed_extremes_s_prime(p: i64, m: u32) -> Result<(Rational, Rational)> {
    require_extremes_hypothesis(p, 2, m)?;
    Ok((frac(p, p - 1), frac(p - 2, p - 1)))
}

/// `(max, min)` of `{ sum c_k q^-k : c in B }`.
pub fn closed_extremes_q(p: i64, q: i64, m: u32) -> Result<(Rational, Rational)> {
    require_extremes_hypothesis(p, q, m)?;
    let top = frac((p - q).abs(), q.abs() * (q.abs() - 1));
    Ok((top.clone(), -top))
}

/// `(max, min)` of `{ sum k c_k p^-k : c in B }`.
pub fn closed_extremes_q_prime(p: i64, m: u32) -> Result<(Rational, Rational)> {
    require_extremes_hypothesis(p, 2, m)?;
    let top = frac(1, p - 1);
    Ok((top.clone(), -top))
}

/// The four eventually periodic elements of `A` from which the extremes are read off:
/// `(p-1)*`, `(p+1)(-p+1)*`, `(p+1,-p-1)*`, `(p-1)(p+1,-p-1)*`.
pub fn sum_one_extremal_sequences(p: i64) -> [EventuallyPeriodic; 4] {
    [
        EventuallyPeriodic::new(vec![], vec![p - 1]),
        EventuallyPeriodic::new(vec![p + 1], vec![1 - p]),
        EventuallyPeriodic::new(vec![], vec![p + 1, -p - 1]),
        EventuallyPeriodic::new(vec![p - 1], vec![p + 1, -p - 1]),
    ]
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtremeSymbol {
    M1,
    m1,
    M1p,
    m1p,
    M2,
    m2,
    M2p,
    m2p,
}

impl ExtremeSymbol {
    pub const ALL: [ExtremeSymbol; 8] = [
        Self::M1,
        Self::m1,
        Self::M1p,
        Self::m1p,
        Self::M2,
        Self::m2,
        Self::M2p,
        Self::m2p,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::M1 => "M1",
            Self::m1 => "m1",
            Self::M1p => "M1p",
            Self::m1p => "m1p",
            Self::M2 => "M2",
            Self::m2 => "m2",
            Self::M2p => "M2p",
            Self::m2p => "m2p",
        }
    }
}

/// Closed-form extremes next to their oracle enclosures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremesReport {
    pub p: i64,
    pub q: i64,
    pub m: u32,
    pub depth: u32,
    pub closed: BTreeMap<ExtremeSymbol, Rational>,
    pub enclosures: BTreeMap<ExtremeSymbol, RationalInterval>,
    /// Tail bound of each symbol's functional at `depth`.
    pub tail_bounds: BTreeMap<ExtremeSymbol, Rational>,
}

impl ExtremesReport {
    pub fn contained(&self, symbol: ExtremeSymbol) -> bool {
        self.enclosures[&symbol].contains(&self.closed[&symbol])
    }

    pub fn all_contained(&self) -> bool {
        ExtremeSymbol::ALL.iter().all(|&s| self.contained(s))
    }

    pub fn widths_within_tail(&self) -> bool {
        ExtremeSymbol::ALL
            .iter()
            .all(|s| self.enclosures[s].width() <= int(2) * &self.tail_bounds[s])
    }
}

pub fn extremes_report(p: i64, q: i64, m: u32, depth: u32) -> Result<ExtremesReport> {
    use ExtremeSymbol::*;
    let (big_s, small_s) = closed_extremes_s(p, q, m)?;
    let (big_sp, small_sp) = closed_extremes_s_prime(p, m)?;
    let (big_q, small_q) = closed_extremes_q(p, q, m)?;
    let (big_qp, small_qp) = closed_extremes_q_prime(p, m)?;
    let closed = BTreeMap::from([
        (M1, big_s),
        (m1, small_s),
        (M1p, big_sp),
        (m1p, small_sp),
        (M2, big_q),
        (m2, small_q),
        (M2p, big_qp),
        (m2p, small_qp),
    ]);

    let one = SequenceSpace::sum_one(p, m)?;
    let zero = SequenceSpace::sum_zero(p, m)?;
    let geo = ValueFunctional::GeometricQ { q };
    let wtd = ValueFunctional::WeightedP { p };
    let runs = [
        ((M1, m1), &one, &geo),
        ((M1p, m1p), &one, &wtd),
        ((M2, m2), &zero, &geo),
        ((M2p, m2p), &zero, &wtd),
    ];
    let mut enclosures = BTreeMap::new();
    let mut tail_bounds = BTreeMap::new();
    for ((hi_sym, lo_sym), space, f) in runs {
        let enc = enumerate_extremes(space, f, depth);
        let tail = int(space.max_digit()) * f.tail_weight_bound(depth);
        enclosures.insert(hi_sym, enc.max);
        enclosures.insert(lo_sym, enc.min);
        tail_bounds.insert(hi_sym, tail.clone());
        tail_bounds.insert(lo_sym, tail);
    }
    Ok(ExtremesReport {
        p,
        q,
        m,
        depth,
        closed,
        enclosures,
        tail_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::geometric_tail_bound;
    use proptest::prelude::*;

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_extremes_s(5, 3, 7).unwrap(), (int(2), frac(4, 3)));
        assert_eq!(closed_extremes_s(5, -3, 7).unwrap(), (frac(-1, 3), int(-3)));
        assert_eq!(closed_extremes_s(5, 5, 7).unwrap(), (int(1), int(1)));
        assert_eq!(
            closed_extremes_s_prime(5, 7).unwrap(),
            (frac(5, 4), frac(3, 4))
        );
        assert_eq!(
            closed_extremes_s_prime(4, 6).unwrap(),
            (frac(4, 3), frac(2, 3))
        );
        assert_eq!(closed_extremes_q(5, 3, 7).unwrap().0, frac(1, 3));
        assert_eq!(closed_extremes_q(5, 5, 7).unwrap().0, int(0));
        assert_eq!(closed_extremes_q_prime(4, 6).unwrap().0, frac(1, 3));
    }

    #[test]
    fn closed_forms_refuse_unproven_m() {
        for m in [5, 6, 9, 10] {
            let err = closed_extremes_s(5, 3, m).unwrap_err();
            assert!(err
                .to_string()
                .contains("extremes formulas unproven for this m"));
        }
    }

    #[test]
    fn oracle_brackets_example_values() {
        let a = SequenceSpace::sum_one(5, 7).unwrap();
        let b = SequenceSpace::sum_zero(5, 7).unwrap();
        let enc = enumerate_extremes(&a, &ValueFunctional::GeometricQ { q: 3 }, 12);
        assert!(enc.certified);
        assert!(enc.max.contains(&int(2)));
        assert!(enc.max.width() <= int(2) * geometric_tail_bound(3, 12, &int(6)));
        let enc = enumerate_extremes(&b, &ValueFunctional::GeometricQ { q: 3 }, 12);
        assert!(enc.max.contains(&frac(1, 3)));
        let enc = enumerate_extremes(&a, &ValueFunctional::WeightedP { p: 5 }, 14);
        assert!(enc.max.contains(&frac(5, 4)));
    }

    #[test]
    fn oracle_when_p_equals_q_collapses_to_one() {
        let a = SequenceSpace::sum_one(5, 7).unwrap();
        let enc = enumerate_extremes(&a, &ValueFunctional::GeometricQ { q: 5 }, 8);
        let bound = int(2) * geometric_tail_bound(5, 8, &int(6));
        assert!(enc.max.contains(&int(1)) && enc.min.contains(&int(1)));
        assert!(enc.max.width() <= bound && enc.min.width() <= bound);
    }

    #[test]
    fn empty_space_returns_flagged_prior() {
        // m < p: no sequence of A reaches the sum 1
        let a = SequenceSpace::sum_one(5, 3).unwrap();
        assert!(a.is_empty());
        let enc = enumerate_extremes(&a, &ValueFunctional::GeometricQ { q: 3 }, 6);
        assert!(!enc.certified);
        assert_eq!(enc.max, enc.min);
    }

    #[test]
    fn extremal_sequences_belong_to_sum_one_space() {
        for p in 4..=6 {
            for m in (p as u32 + 2)..(2 * p as u32 - 1) {
                let space = SequenceSpace::sum_one(p, m).unwrap();
                for seq in sum_one_extremal_sequences(p) {
                    assert!(space.contains(&seq), "{seq} p={p} m={m}");
                    // partial sums approach 1 within the tail bound
                    let partial: Rational = seq
                        .prefix(20)
                        .iter()
                        .enumerate()
                        .map(|(i, &d)| int(d) * pow(p, -(i as i32 + 1)))
                        .sum();
                    let bound = geometric_tail_bound(p as u64, 20, &int(i64::from(m) - 1));
                    assert!((partial - int(1)).abs() <= bound);
                }
            }
        }
    }

    #[test]
    fn extremal_sequences_give_closed_values() {
        let (p, q) = (5, 3);
        let f = ValueFunctional::GeometricQ { q };
        let vals: Vec<Rational> = sum_one_extremal_sequences(p)
            .iter()
            .map(|s| f.eval(s))
            .collect();
        assert_eq!(vals[0], frac(p - 1, q - 1));
        assert_eq!(vals[1], frac(p * q + q - 2 * p, q * (q - 1)));
        assert_eq!(vals[2], frac(p + 1, q + 1));
        assert_eq!(vals[3], frac(p * q + 2 * p - q, q * (q + 1)));
        let g = ValueFunctional::WeightedP { p };
        assert_eq!(g.eval(&sum_one_extremal_sequences(p)[0]), frac(p, p - 1));
        assert_eq!(
            g.eval(&sum_one_extremal_sequences(p)[1]),
            frac(p - 2, p - 1)
        );
    }

    #[test]
    fn membership_rejects_escaping_sequences() {
        let space = SequenceSpace::sum_one(4, 6).unwrap();
        assert!(!space.contains(&EventuallyPeriodic::new(vec![], vec![2])));
        assert!(!space.contains(&EventuallyPeriodic::new(vec![6], vec![3])));
        assert!(space.contains(&EventuallyPeriodic::new(vec![4], vec![0])));
        assert!(!space.prefix_completable(&[0, 0]));
        assert!(space.prefix_completable(&[3, 3]));
    }

    #[test]
    fn greedy_completion_stays_in_space() {
        let space = SequenceSpace::sum_zero(5, 8).unwrap();
        for s in space.states() {
            let (pre, period) = space.greedy_completion(s);
            let mut seq_pre = vec![];
            // prepend digits that move the start residual 0 to s
            let first = -s;
            if first != 0 {
                seq_pre.push(first);
            }
            seq_pre.extend(pre);
            let seq = EventuallyPeriodic::new(seq_pre, period);
            assert!(space.contains(&seq));
        }
    }

    #[test]
    fn periodic_eval_matches_long_prefix() {
        let seq = EventuallyPeriodic::new(vec![3, -2], vec![1, -4, 2]);
        let fs = [
            ValueFunctional::GeometricQ { q: -3 },
            ValueFunctional::WeightedP { p: 4 },
            ValueFunctional::Affine {
                p: 4,
                q: 3,
                offset: frac(1, 2),
                scale: int(-6),
            },
            ValueFunctional::Affine {
                p: 3,
                q: 3,
                offset: int(0),
                scale: int(5),
            },
        ];
        for f in fs {
            let exact = f.eval(&seq);
            let approx = f.eval_prefix(&seq.prefix(60));
            let tail = int(4) * f.tail_weight_bound(60);
            assert!((exact - approx).abs() <= tail, "{f}");
        }
    }

    #[test]
    fn tail_weight_bound_matches_geometric_bound() {
        let f = ValueFunctional::GeometricQ { q: -4 };
        assert_eq!(
            int(5) * f.tail_weight_bound(7),
            geometric_tail_bound(4, 7, &int(5))
        );
    }

    #[test]
    fn attainable_full_range_is_attainable() {
        let space = SequenceSpace::sum_zero(4, 6).unwrap();
        let f = ValueFunctional::GeometricQ { q: 3 };
        let target = RationalInterval::symmetric(int(10));
        let res = attainable(&space, &f, &target, 12);
        let w = res.witness().expect("attainable");
        assert!(space.contains(w));
        assert!(target.contains(&f.eval(w)));
    }

    #[test]
    fn attainable_detects_gap_and_boundary() {
        // max of Q for p=5, q=3 is exactly 1/3
        let space = SequenceSpace::sum_zero(5, 7).unwrap();
        let f = ValueFunctional::GeometricQ { q: 3 };
        let above = RationalInterval::new(frac(1, 3) + frac(1, 100), int(1)).unwrap();
        assert!(attainable(&space, &f, &above, 12).is_unattainable());
        let touching = RationalInterval::new(frac(1, 3), int(1)).unwrap();
        let res = attainable(&space, &f, &touching, 12);
        assert_eq!(
            f.eval(res.witness().expect("boundary is attained")),
            frac(1, 3)
        );
    }

    proptest! {
        #[test]
        fn attainable_is_monotone_in_target(lo in -30i64..30, w1 in 0i64..20, grow in 0i64..20) {
            let space = SequenceSpace::sum_one(4, 6).unwrap();
            let f = ValueFunctional::GeometricQ { q: 3 };
            let small = RationalInterval::new(frac(lo, 20), frac(lo + w1, 20)).unwrap();
            let big = small.widen(&frac(grow, 20));
            let r_small = attainable(&space, &f, &small, 10);
            let r_big = attainable(&space, &f, &big, 10);
            if r_small.is_attainable() {
                prop_assert!(r_big.is_attainable());
            }
            if r_big.is_unattainable() {
                prop_assert!(r_small.is_unattainable());
            }
        }

        #[test]
        fn zero_space_enclosures_are_symmetric(p in 4i64..=6, q in prop::sample::select(vec![-4i64, -3, 3, 4, 5])) {
            let space = SequenceSpace::sum_zero(p, p as u32 + 2).unwrap();
            let f = ValueFunctional::GeometricQ { q };
            let enc = enumerate_extremes(&space, &f, 8);
            prop_assert_eq!(enc.max.neg(), enc.min);
        }

        #[test]
        fn enclosure_width_shrinks_with_depth(d in 2u32..10) {
            let space = SequenceSpace::sum_one(5, 7).unwrap();
            let f = ValueFunctional::WeightedP { p: 5 };
            let a = enumerate_extremes(&space, &f, d);
            let b = enumerate_extremes(&space, &f, d + 2);
            prop_assert!(b.max.width() <= a.max.width());
            prop_assert!(b.min.width() <= a.min.width());
        }
    }
}

//! Certified point clouds of the pieces `S_{i,j}(T)` and the piece adjacency graph.
//!
//! A word `d_1 .. d_D` of digits is sent to `sum_t A^{-t} d_t`, the image of
//! the fixed point `0` of `S_{0,0}`. These points lie on a lattice with
//! horizontal spacing `1/|p|^D` and a vertical spacing fixed by the
//! denominators of `A^{-t}`, so all coordinates are stored as exact `i128`
//! multiples of the spacing. The true piece lies within `A^{-D} B` of its
//! cloud, where `B` is a box containing `T`; the error radius is the exact
//! max-norm extent of that parallelogram.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::params::{digit_series_range, inverse_power_coeff, AffinePair};
use crate::rational::{floor_int, int, pow, Rational, RationalInterval};

pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

const SHEAR_TERMS: u32 = 48;
const BOX_GRID_LOG2: usize = 24;

/// Rectangle `(x range, y range)` containing `T`.
///
/// The shear contribution `-l sum r_t x_t` is summed exactly over the first
/// terms, bounded beyond them, and rounded outwards to a dyadic grid.
pub fn bounding_box(pair: &AffinePair) -> (RationalInterval, RationalInterval) {
    let (p, q) = (pair.p(), pair.q());
    let x = digit_series_range(p, pair.m());
    let y_digits = digit_series_range(q, pair.n());
    let l = pair.lower_left();
    if l.is_zero() || pair.m() == 1 {
        return (x, y_digits);
    }
    let mut neg = Rational::zero();
    let mut pos = Rational::zero();
    for t in 1..=SHEAR_TERMS {
        let r = inverse_power_coeff(p, q, t);
        if r.is_negative() {
            neg += r;
        } else {
            pos += r;
        }
    }
    let tail = shear_tail(p, q, SHEAR_TERMS);
    let top = int(i64::from(pair.m()) - 1);
    let sums = RationalInterval::spanning(&top * (neg - &tail), top * (pos + tail));
    let shear_part = sums.scale(&-l.clone());
    let grid = Rational::new(BigInt::one(), BigInt::one() << BOX_GRID_LOG2);
    let lo = Rational::from_integer(floor_int(&(shear_part.lo() / &grid))) * &grid;
    let hi = -Rational::from_integer(floor_int(&(-shear_part.hi() / &grid))) * &grid;
    let rounded = RationalInterval::spanning(lo, hi);
    let y = RationalInterval::spanning(y_digits.lo() + rounded.lo(), y_digits.hi() + rounded.hi());
    (x, y)
}

/// Upper bound on `sum_{t>k} |r_t|`.
fn shear_tail(p: i64, q: i64, k: u32) -> Rational {
    let (pa, qa) = (p.abs(), q.abs());
    let k_i = k as i32;
    if p == q {
        // sum_{t>k} t |q|^{-t-1}
        let y = Rational::new(BigInt::one(), BigInt::from(qa));
        let one = Rational::one();
        let kk = int(i64::from(k));
        let s = pow(qa, -(k_i + 1)) * (&kk + &one - &kk * &y) / ((&one - &y) * (&one - &y));
        s / int(qa)
    } else {
        (pow(pa, -k_i) / int(pa - 1) + pow(qa, -k_i) / int(qa - 1)) / int((q - p).abs())
    }
}

fn floor_scaled(value: &Rational, scale: i128) -> Result<i128> {
    let v = floor_int(&(value * Rational::from_integer(BigInt::from(scale))));
    v.to_i128()
        .ok_or_else(|| Error::Overflow(format!("lattice coordinate {v} exceeds i128")))
}

fn ceil_scaled(value: &Rational, scale: i128) -> Result<i128> {
    floor_scaled(&-value.clone(), scale).map(|v| -v)
}

fn exact_scaled(value: &Rational, scale: i128) -> Result<i128> {
    let scaled = value * Rational::from_integer(BigInt::from(scale));
    debug_assert!(scaled.is_integer(), "{value} is not on the lattice");
    scaled
        .to_integer()
        .to_i128()
        .ok_or_else(|| Error::Overflow("lattice coordinate exceeds i128".into()))
}

/// Axis-aligned box in lattice units: `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeBox {
    pub x0: i128,
    pub x1: i128,
    pub y0: i128,
    pub y1: i128,
}

impl LatticeBox {
    fn at(&self, pt: (i128, i128)) -> LatticeBox {
        LatticeBox {
            x0: self.x0 + pt.0,
            x1: self.x1 + pt.0,
            y0: self.y0 + pt.1,
            y1: self.y1 + pt.1,
        }
    }

    fn gap(&self, other: &LatticeBox) -> (i128, i128) {
        let gx = (other.x0 - self.x1).max(self.x0 - other.x1).max(0);
        let gy = (other.y0 - self.y1).max(self.y0 - other.y1).max(0);
        (gx, gy)
    }
}

/// Exact coordinate frame for depth-`D` words of one pair.
#[derive(Debug, Clone)]
pub struct Lattice {
    depth: u32,
    m: u32,
    n: u32,
    scale_x: i128,
    scale_y: i128,
    /// `offsets[t][k]`: `A^{-t}` applied to digit `k`, for `t` in `1..=D`.
    offsets: Vec<Vec<(i128, i128)>>,
    /// `enclosures[d]`: lattice box containing `A^{-d} B`.
    enclosures: Vec<LatticeBox>,
    bbox: (RationalInterval, RationalInterval),
    error_radius: Rational,
    /// Axis extents of `A^{-D}(B - B)` in lattice units, for pruning.
    threshold: (i128, i128),
    leaf: LeafTest,
}

/// `delta` lies in `A^{-D}(B - B)` iff `u = p^D dx` and `v = q^D (dy + l r_D u)`
/// satisfy `|u| <= W_x`, `|v| <= W_y`; in lattice units `u = ±dx_int` and
/// `v`'s bound becomes `|dy_int - c u| <= v_max`.
#[derive(Debug, Clone, Copy)]
struct LeafTest {
    flip_x: bool,
    u_max: i128,
    c: i128,
    v_max: i128,
}

impl LeafTest {
    fn meets(&self, dx: i128, dy: i128) -> bool {
        let u = if self.flip_x { -dx } else { dx };
        u.abs() <= self.u_max && (dy - self.c * u).abs() <= self.v_max
    }
}

impl Lattice {
    pub fn new(pair: &AffinePair, depth: u32) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        let (p, q) = (pair.p(), pair.q());
        let l = pair.lower_left().clone();

        let scale_x = BigInt::from(p.abs()).pow(depth);
        let mut scale_y = BigInt::from(q.abs()).pow(depth);
        let shear: Vec<Rational> = (0..=depth)
            .map(|t| -(l.clone() * inverse_power_coeff(p, q, t)))
            .collect();
        for c in &shear {
            scale_y = scale_y.lcm(c.denom());
        }
        let limit = BigInt::one() << 96;
        if scale_x > limit || scale_y > limit {
            return Err(Error::Overflow(format!(
                "lattice spacing at depth {depth} needs more than 96 bits"
            )));
        }
        let scale_x = scale_x.to_i128().expect("checked above");
        let scale_y = scale_y.to_i128().expect("checked above");

        let digits = digit_list(pair.m(), pair.n());
        let mut offsets = vec![Vec::new()];
        for t in 1..=depth {
            let px = pow(p, -(t as i32));
            let qy = pow(q, -(t as i32));
            let mut row = Vec::with_capacity(digits.len());
            for &(i, j) in &digits {
                let x = &px * int(i64::from(i));
                let y = &qy * int(i64::from(j)) + &shear[t as usize] * int(i64::from(i));
                row.push((exact_scaled(&x, scale_x)?, exact_scaled(&y, scale_y)?));
            }
            offsets.push(row);
        }

        let bbox = bounding_box(pair);
        let (bx, by) = &bbox;
        let mut enclosures = Vec::with_capacity(depth as usize + 1);
        let mut extent_at_depth = Rational::zero();
        for d in 0..=depth {
            let ex = bx.scale(&pow(p, -(d as i32)));
            let shear_x = bx.scale(&shear[d as usize]);
            let ey = RationalInterval::spanning(
                shear_x.lo() + by.scale(&pow(q, -(d as i32))).lo(),
                shear_x.hi() + by.scale(&pow(q, -(d as i32))).hi(),
            );
            if d == depth {
                // exact extent of the parallelogram: check its corners
                let mut best = ex.magnitude();
                for cx in [bx.lo(), bx.hi()] {
                    for cy in [by.lo(), by.hi()] {
                        let v = (&shear[d as usize] * cx + pow(q, -(d as i32)) * cy).abs();
                        if v > best {
                            best = v;
                        }
                    }
                }
                extent_at_depth = best;
            }
            enclosures.push(LatticeBox {
                x0: floor_scaled(ex.lo(), scale_x)?,
                x1: ceil_scaled(ex.hi(), scale_x)?,
                y0: floor_scaled(ey.lo(), scale_y)?,
                y1: ceil_scaled(ey.hi(), scale_y)?,
            });
        }
        let (wx, wy) = (bx.width(), by.width());
        let shear_d = &shear[depth as usize];
        let qd = pow(q, -(depth as i32)).abs();
        let threshold = (
            floor_scaled(&(pow(p, -(depth as i32)).abs() * &wx), scale_x)?,
            floor_scaled(&(shear_d.abs() * &wx + &qd * &wy), scale_y)?,
        );
        let leaf = LeafTest {
            flip_x: p < 0 && depth % 2 == 1,
            u_max: floor_scaled(&wx, 1)?,
            c: exact_scaled(shear_d, scale_y)?,
            v_max: floor_scaled(&(qd * wy), scale_y)?,
        };
        Ok(Self {
            depth,
            m: pair.m(),
            n: pair.n(),
            scale_x,
            scale_y,
            offsets,
            enclosures,
            bbox,
            error_radius: extent_at_depth,
            threshold,
            leaf,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn scales(&self) -> (i128, i128) {
        (self.scale_x, self.scale_y)
    }

    pub fn error_radius(&self) -> &Rational {
        &self.error_radius
    }

    pub fn bounding_box(&self) -> &(RationalInterval, RationalInterval) {
        &self.bbox
    }

    /// Lattice box containing `B` itself.
    pub fn outer_box(&self) -> LatticeBox {
        self.enclosures[0]
    }

    fn digit_index(&self, piece: (u32, u32)) -> usize {
        (piece.0 * self.n + piece.1) as usize
    }

    pub fn to_rational(&self, pt: (i128, i128)) -> (Rational, Rational) {
        let r = |v: i128, s: i128| Rational::new(BigInt::from(v), BigInt::from(s));
        (r(pt.0, self.scale_x), r(pt.1, self.scale_y))
    }

    /// Visits the point of every word of length `depth`, depth first.
    pub(crate) fn for_each_word(&self, f: &mut impl FnMut((i128, i128))) {
        fn go(l: &Lattice, t: usize, at: (i128, i128), f: &mut impl FnMut((i128, i128))) {
            if t > l.depth as usize {
                f(at);
                return;
            }
            for &(dx, dy) in &l.offsets[t] {
                go(l, t + 1, (at.0 + dx, at.1 + dy), f);
            }
        }
        go(self, 1, (0, 0), f);
    }

    /// Points of all words of length `depth` whose first digit is in `first`.
    fn words(&self, first: &[usize]) -> Vec<(i128, i128)> {
        let mut pts: Vec<(i128, i128)> = first.iter().map(|&k| self.offsets[1][k]).collect();
        for t in 2..=self.depth as usize {
            let row = &self.offsets[t];
            let mut next = Vec::with_capacity(pts.len() * row.len());
            for &(x, y) in &pts {
                for &(dx, dy) in row {
                    next.push((x + dx, y + dy));
                }
            }
            pts = next;
        }
        pts
    }

    pub(crate) fn cloud_size(&self, first: u64, budget: u64) -> Result<u64> {
        let per = u128::from(self.m) * u128::from(self.n);
        let mut count = u128::from(first);
        for _ in 1..self.depth {
            count = count.saturating_mul(per);
        }
        if count > u128::from(budget) {
            return Err(Error::BudgetExceeded {
                what: "point cloud",
                needed: count,
                budget: u128::from(budget),
            });
        }
        Ok(count as u64)
    }

    /// Searches for a pair of leaf points, one below each start point, whose
    /// difference lies in `A^{-D}(B - B)`; only such pairs can carry a common
    /// point of the two pieces. That set sits inside the max-norm ball of
    /// radius `2 r`, so a pair farther apart than `2 r` is always rejected.
    /// Subtrees are discarded when their enclosures are too far apart.
    fn close_pair(&self, a: (i128, i128), b: (i128, i128), budget: u64) -> PairSearch {
        let (tx, ty) = self.threshold;
        let depth = self.depth as usize;
        let mut stack = vec![(a, b, 1usize)];
        let mut nodes = 0u64;
        let mut children: Vec<ChildPair> = Vec::new();
        while let Some((u, v, level)) = stack.pop() {
            nodes += 1;
            if nodes > budget {
                return PairSearch::Exhausted(nodes);
            }
            if level == depth {
                if self.leaf.meets(u.0 - v.0, u.1 - v.1) {
                    return PairSearch::Close(nodes);
                }
                continue;
            }
            let row = &self.offsets[level + 1];
            let enc = &self.enclosures[level + 1];
            children.clear();
            for &(ux, uy) in row {
                let cu = (u.0 + ux, u.1 + uy);
                let bu = enc.at(cu);
                for &(vx, vy) in row {
                    let cv = (v.0 + vx, v.1 + vy);
                    let (gx, gy) = bu.gap(&enc.at(cv));
                    if gx > tx || gy > ty {
                        continue;
                    }
                    // normalized gap decides the visiting order
                    let key = (gx * 1024 / (tx + 1)).max(gy * 1024 / (ty + 1));
                    children.push((key, cu, cv));
                }
            }
            children.sort_by_key(|c| std::cmp::Reverse(c.0));
            stack.extend(children.iter().map(|&(_, cu, cv)| (cu, cv, level + 1)));
        }
        PairSearch::Separated(nodes)
    }
}

/// Ordering key and the two child points.
type ChildPair = (i128, (i128, i128), (i128, i128));

enum PairSearch {
    Close(u64),
    Separated(u64),
    Exhausted(u64),
}

/// Digits `(i, j)` in row-major order of `i`.
pub fn digit_list(m: u32, n: u32) -> Vec<(u32, u32)> {
    (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}

/// Certified approximation of one piece or of the whole set.
#[derive(Debug, Clone)]
pub struct PieceCloud {
    /// `None` for the whole set.
    pub piece: Option<(u32, u32)>,
    pub depth: u32,
    pub error_radius: Rational,
    /// Coordinates in lattice units; see [`PieceCloud::scales`].
    pub lattice_points: Vec<(i128, i128)>,
    scales: (i128, i128),
}

impl PieceCloud {
    pub fn len(&self) -> usize {
        self.lattice_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice_points.is_empty()
    }

    /// Lattice spacing denominators `(x, y)`.
    pub fn scales(&self) -> (i128, i128) {
        self.scales
    }

    pub fn point(&self, k: usize) -> (Rational, Rational) {
        let (x, y) = self.lattice_points[k];
        (
            Rational::new(BigInt::from(x), BigInt::from(self.scales.0)),
            Rational::new(BigInt::from(y), BigInt::from(self.scales.1)),
        )
    }

    pub fn points(&self) -> Vec<(Rational, Rational)> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }
}

/// Images of the seed under all depth-`depth` compositions starting with `S_{i,j}`.
pub fn piece_cloud(
    pair: &AffinePair,
    i: u32,
    j: u32,
    depth: u32,
    budget: u64,
) -> Result<PieceCloud> {
    if i >= pair.m() || j >= pair.n() {
        return Err(Error::InvalidParameter(format!(
            "piece ({i},{j}) outside {}x{}",
            pair.m(),
            pair.n()
        )));
    }
    let lattice = Lattice::new(pair, depth)?;
    lattice.cloud_size(1, budget)?;
    let pts = lattice.words(&[lattice.digit_index((i, j))]);
    Ok(PieceCloud {
        piece: Some((i, j)),
        depth,
        error_radius: lattice.error_radius.clone(),
        lattice_points: pts,
        scales: lattice.scales(),
    })
}

/// Images of the seed under all compositions of length `depth`.
pub fn attractor_cloud(
    pair: &AffinePair,
    depth: u32,
    budget: u64,
) -> Result<(PieceCloud, Lattice)> {
    let lattice = Lattice::new(pair, depth)?;
    let k = pair.digit_count();
    lattice.cloud_size(k, budget)?;
    let first: Vec<usize> = (0..k as usize).collect();
    let pts = lattice.words(&first);
    let cloud = PieceCloud {
        piece: None,
        depth,
        error_radius: lattice.error_radius.clone(),
        lattice_points: pts,
        scales: lattice.scales(),
    };
    Ok((cloud, lattice))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    /// The clouds are more than `2 r` apart, so the pieces are disjoint.
    CertifiedDisjoint,
    /// No separation proof at this depth.
    Plausible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub a: (u32, u32),
    pub b: (u32, u32),
    pub label: EdgeLabel,
    /// Pair-search nodes visited.
    pub nodes: u64,
    /// The node budget ran out, so the label fell back to plausible.
    pub exhausted: bool,
}

#[derive(Debug, Clone)]
pub struct AdjacencyGraph {
    pub m: u32,
    pub n: u32,
    pub depth: u32,
    pub error_radius: Rational,
    /// Candidate pairs only: pieces whose columns differ by more than
    /// `floor((m-1)/(|p|-1))` have disjoint horizontal projections.
    pub edges: Vec<GraphEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgePolicy {
    PlausibleOnly,
}

impl AdjacencyGraph {
    fn node(&self, piece: (u32, u32)) -> usize {
        (piece.0 * self.n + piece.1) as usize
    }

    pub fn label(&self, a: (u32, u32), b: (u32, u32)) -> EdgeLabel {
        self.edges
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .map_or(EdgeLabel::CertifiedDisjoint, |e| e.label)
    }

    pub fn components(&self) -> Vec<Vec<(u32, u32)>> {
        let count = (self.m * self.n) as usize;
        let mut uf = UnionFind::<usize>::new(count);
        for e in &self.edges {
            if e.label == EdgeLabel::Plausible {
                uf.union(self.node(e.a), self.node(e.b));
            }
        }
        let labels = uf.into_labeling();
        let mut groups: Vec<Vec<(u32, u32)>> = Vec::new();
        let mut index_of: Vec<Option<usize>> = vec![None; count];
        for piece in digit_list(self.m, self.n) {
            let root = labels[self.node(piece)];
            match index_of[root] {
                Some(g) => groups[g].push(piece),
                None => {
                    index_of[root] = Some(groups.len());
                    groups.push(vec![piece]);
                }
            }
        }
        groups
    }

    /// Whether the certified-disjoint edges separate the pieces.
    pub fn has_certified_cut(&self) -> bool {
        !graph_connected(self, EdgePolicy::PlausibleOnly)
    }

    pub fn exhausted_edges(&self) -> usize {
        self.edges.iter().filter(|e| e.exhausted).count()
    }

    /// Keeps every separation already proved by `earlier` (a proof at any depth stays valid).
    pub fn retain_certified(&mut self, earlier: &AdjacencyGraph) {
        for e in &mut self.edges {
            if earlier.label(e.a, e.b) == EdgeLabel::CertifiedDisjoint {
                e.label = EdgeLabel::CertifiedDisjoint;
            }
        }
    }
}

pub fn graph_connected(graph: &AdjacencyGraph, policy: EdgePolicy) -> bool {
    match policy {
        EdgePolicy::PlausibleOnly => graph.components().len() <= 1,
    }
}

/// Candidate piece pairs: `|i1 - i2| <= floor((m-1)/(|p|-1))`, each unordered pair once.
pub fn candidate_pairs(pair: &AffinePair) -> Vec<((u32, u32), (u32, u32))> {
    let gap = (pair.m() - 1) / (pair.p().unsigned_abs() as u32 - 1);
    let pieces = digit_list(pair.m(), pair.n());
    let mut out = Vec::new();
    for (k, &a) in pieces.iter().enumerate() {
        for &b in &pieces[k + 1..] {
            if b.0 - a.0 <= gap {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn adjacency_graph(pair: &AffinePair, depth: u32) -> Result<AdjacencyGraph> {
    adjacency_graph_with_budget(pair, depth, DEFAULT_NODE_BUDGET)
}

pub fn adjacency_graph_with_budget(
    pair: &AffinePair,
    depth: u32,
    node_budget: u64,
) -> Result<AdjacencyGraph> {
    let lattice = Lattice::new(pair, depth)?;
    let pairs = candidate_pairs(pair);
    let classify = |&(a, b): &((u32, u32), (u32, u32))| {
        let pa = lattice.offsets[1][lattice.digit_index(a)];
        let pb = lattice.offsets[1][lattice.digit_index(b)];
        let (label, nodes, exhausted) = match lattice.close_pair(pa, pb, node_budget) {
            PairSearch::Close(k) => (EdgeLabel::Plausible, k, false),
            PairSearch::Separated(k) => (EdgeLabel::CertifiedDisjoint, k, false),
            PairSearch::Exhausted(k) => (EdgeLabel::Plausible, k, true),
        };
        GraphEdge {
            a,
            b,
            label,
            nodes,
            exhausted,
        }
    };
    #[cfg(feature = "parallel")]
    let edges: Vec<GraphEdge> = {
        use rayon::prelude::*;
        pairs.par_iter().map(classify).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let edges: Vec<GraphEdge> = pairs.iter().map(classify).collect();
    Ok(AdjacencyGraph {
        m: pair.m(),
        n: pair.n(),
        depth,
        error_radius: lattice.error_radius.clone(),
        edges,
    })
}

/// Graphs for `1..=max_depth` with separations carried forward; stops at the
/// first depth whose plausible graph is disconnected.
pub fn first_certified_cut(
    pair: &AffinePair,
    max_depth: u32,
    node_budget: u64,
) -> Result<Option<AdjacencyGraph>> {
    let mut previous: Option<AdjacencyGraph> = None;
    for depth in 1..=max_depth {
        let mut graph = adjacency_graph_with_budget(pair, depth, node_budget)?;
        if let Some(prev) = &previous {
            graph.retain_certified(prev);
        }
        if graph.has_certified_cut() {
            return Ok(Some(graph));
        }
        previous = Some(graph);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn pair(p: i64, q: i64, a: Rational, m: u32, n: u32) -> AffinePair {
        AffinePair::new(p, q, a, m, n).unwrap()
    }

    /// Max-norm distance from `pt` to the nearest point of `cloud`.
    fn nearest(cloud: &[(Rational, Rational)], pt: &(Rational, Rational)) -> Rational {
        cloud
            .iter()
            .map(|c| (&c.0 - &pt.0).abs().max((&c.1 - &pt.1).abs()))
            .min()
            .unwrap()
    }

    #[test]
    fn bounding_box_examples() {
        let (x, y) = bounding_box(&pair(4, 3, int(0), 6, 2));
        assert_eq!(x, RationalInterval::new(int(0), frac(5, 3)).unwrap());
        assert_eq!(y, RationalInterval::new(int(0), frac(1, 2)).unwrap());
        let (x, y) = bounding_box(&pair(4, 3, int(7), 1, 1));
        assert_eq!((x.width(), y.width()), (int(0), int(0)));
    }

    #[test]
    fn depth_one_cloud_of_first_piece() {
        let c = piece_cloud(&pair(4, 3, int(0), 6, 2), 0, 0, 1, 100).unwrap();
        assert_eq!(c.points(), vec![(int(0), int(0))]);
        let c = piece_cloud(&pair(4, 3, int(0), 6, 2), 0, 0, 3, 1000).unwrap();
        for (x, y) in c.points() {
            assert!(x >= int(0) && x <= frac(5, 12));
            assert!(y >= int(0) && y <= frac(1, 6));
        }
    }

    #[test]
    fn single_map_cloud_is_fixed_point() {
        let pr = pair(3, -2, frac(1, 3), 1, 1);
        let r2 = piece_cloud(&pr, 0, 0, 2, 10).unwrap();
        let r5 = piece_cloud(&pr, 0, 0, 5, 10).unwrap();
        assert_eq!(r2.points(), vec![(int(0), int(0))]);
        assert_eq!(r5.points(), r2.points());
        assert!(r5.error_radius <= r2.error_radius);
    }

    #[test]
    fn budget_is_enforced() {
        let err = piece_cloud(&pair(4, 3, int(1), 6, 2), 0, 0, 8, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn cloud_refinement_is_within_error_radius() {
        for (p, q, a) in [
            (4, 3, frac(2, 1)),
            (3, -3, frac(5, 2)),
            (-3, 2, frac(-1, 3)),
        ] {
            let pr = pair(p, q, a, 4, 2);
            for d in 1..4 {
                let coarse = piece_cloud(&pr, 1, 1, d, 10_000).unwrap();
                let fine = piece_cloud(&pr, 1, 1, d + 1, 10_000).unwrap();
                let cpts = coarse.points();
                let fpts = fine.points();
                for f in &fpts {
                    assert!(nearest(&cpts, f) <= coarse.error_radius);
                }
                for c in &cpts {
                    assert!(nearest(&fpts, c) <= coarse.error_radius);
                }
            }
        }
    }

    #[test]
    fn single_column_graph_only_has_vertical_pairs() {
        let pr = pair(4, 3, int(2), 1, 3);
        let g = adjacency_graph(&pr, 4).unwrap();
        assert_eq!(g.edges.len(), 3);
        assert!(g.edges.iter().all(|e| e.a.0 == 0 && e.b.0 == 0));
    }

    #[test]
    fn grid_graph_matches_decision_away_from_boundaries() {
        let connected = adjacency_graph(&pair(4, 3, int(2), 6, 2), 5).unwrap();
        assert!(graph_connected(&connected, EdgePolicy::PlausibleOnly));
        let cut = first_certified_cut(&pair(4, 3, int(10), 6, 2), 8, DEFAULT_NODE_BUDGET).unwrap();
        assert!(cut.is_some());
    }

    #[test]
    fn square_pieces_touch() {
        let pr = pair(2, 2, int(0), 2, 2);
        let g = adjacency_graph(&pr, 6).unwrap();
        assert!(g.edges.iter().all(|e| e.label == EdgeLabel::Plausible));
    }

    /// Min max-norm distance between the clouds exceeds `2 r` (exact, on the lattice).
    fn ball_separated(a: &PieceCloud, b: &PieceCloud) -> bool {
        let (sx, sy) = a.scales();
        let two_r = int(2) * &a.error_radius;
        let tx = floor_scaled(&two_r, sx).unwrap();
        let ty = floor_scaled(&two_r, sy).unwrap();
        a.lattice_points.iter().all(|u| {
            b.lattice_points
                .iter()
                .all(|v| (u.0 - v.0).abs() > tx || (u.1 - v.1).abs() > ty)
        })
    }

    #[test]
    fn separation_test_is_at_least_the_ball_test() {
        for (p, q, a, m, n) in [
            (4, 3, int(10), 6, 2),
            (3, -3, frac(15, 2), 4, 2),
            (-3, 2, int(5), 3, 2),
        ] {
            let pr = pair(p, q, a, m, n);
            for d in 2..=4 {
                let g = adjacency_graph(&pr, d).unwrap();
                for e in &g.edges {
                    let ca = piece_cloud(&pr, e.a.0, e.a.1, d, 100_000).unwrap();
                    let cb = piece_cloud(&pr, e.b.0, e.b.1, d, 100_000).unwrap();
                    if ball_separated(&ca, &cb) {
                        assert_eq!(e.label, EdgeLabel::CertifiedDisjoint, "{pr} d={d} {e:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn meeting_pieces_are_never_separated() {
        use crate::connect::pieces_meet;
        for q in [-3i64, 3] {
            for a in [int(0), frac(1, 2), int(1), int(3), int(9)] {
                let pr = pair(4, q, a, 6, 2);
                for d in [3, 5] {
                    let g = adjacency_graph(&pr, d).unwrap();
                    for e in &g.edges {
                        if pieces_meet(&pr, e.a, e.b) {
                            assert_eq!(e.label, EdgeLabel::Plausible, "{pr} d={d} {e:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn separations_persist_with_depth() {
        for a in [int(0), frac(1, 2), int(2), int(5), int(10)] {
            let pr = pair(4, 3, a, 6, 2);
            let mut previous: Option<AdjacencyGraph> = None;
            for d in 3..=7 {
                let g = adjacency_graph(&pr, d).unwrap();
                if let Some(prev) = &previous {
                    for e in &prev.edges {
                        if e.label == EdgeLabel::CertifiedDisjoint {
                            assert_eq!(g.label(e.a, e.b), EdgeLabel::CertifiedDisjoint);
                        }
                    }
                }
                previous = Some(g);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn clouds_lie_in_bounding_box(p in prop::sample::select(vec![-4i64, -3, 2, 3, 4]), q in prop::sample::select(vec![-3i64, -2, 2, 3, 5]), num in -30i64..30, den in 1i64..5, m in 1u32..5, n in 1u32..4) {
            let pr = pair(p, q, frac(num, den), m, n);
            let (bx, by) = bounding_box(&pr);
            let (cloud, _) = attractor_cloud(&pr, 4, 100_000).unwrap();
            for (x, y) in cloud.points() {
                prop_assert!(bx.contains(&x) && by.contains(&y));
            }
        }
    }
}

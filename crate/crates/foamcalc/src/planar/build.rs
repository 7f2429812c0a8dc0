//! Constructors: circles, completions, cup diagrams, boundary sequences and
//! randomized completed webs for the oracle suites.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::queries::{DiagramQueries, FaceColor, Probe};
use super::{q, Arc, AxisDiagram, ColorRB, LoopId, Q, Side};

/// Add a plain two-arc circle. With `arrows_forward = true` the stored
/// traversal (over the top left-to-right) is the semantic orientation, which
/// is clockwise; `false` gives an anticlockwise loop.
pub fn add_circle(
    d: &mut AxisDiagram,
    color: ColorRB,
    left: Q,
    right: Q,
    level: u32,
    arrows_forward: bool,
) -> LoopId {
    d.push_loop(
        color,
        vec![
            Arc::new(left.clone(), right.clone(), Side::Above, level),
            Arc::new(left, right, Side::Below, level),
        ],
        0,
        arrows_forward,
    )
}

pub fn add_cw_circle(d: &mut AxisDiagram, color: ColorRB, left: Q, right: Q, level: u32) -> LoopId {
    add_circle(d, color, left, right, level, true)
}

pub fn add_acw_circle(d: &mut AxisDiagram, color: ColorRB, left: Q, right: Q, level: u32) -> LoopId {
    add_circle(d, color, left, right, level, false)
}

/// Induced (shading) orientation of a loop: the direction that keeps white on
/// the left. Works for any loop shape.
pub fn induced_acw(d: &AxisDiagram, l: LoopId) -> bool {
    let trav = d.traversal(l);
    let (arc, rev) = trav[0];
    let x = d.generic_sample(arc);
    // left of the traversal: above when traveling rightward
    let left = if !rev {
        Probe::above_arc(arc, x)
    } else {
        Probe::below_arc(arc, x)
    };
    let traversal_keeps_white_left = d.face_color(&left).expect("generic sample") == FaceColor::White;
    d.geometric_acw(l) == traversal_keeps_white_left
}

/// Set every blue loop's stored orientation to the induced one.
pub fn adopt_induced_orientations(d: &mut AxisDiagram) {
    for l in 0..d.loops.len() {
        if d.loops[l].color == ColorRB::Blue {
            let want = induced_acw(d, l);
            if d.is_acw(l) != want {
                d.loops[l].arrows_forward = !d.loops[l].arrows_forward;
            }
        }
    }
}

/// Whether a loop is crossed by any red arc (such loops cannot be fixed by a
/// surrounding completion circle).
pub fn crossed_by_red(d: &AxisDiagram, l: LoopId) -> bool {
    use super::geometry::crossings;
    for &a in &d.loops[l].arcs {
        for (j, other) in d.arcs.iter().enumerate() {
            if d.color_of_arc(j) == ColorRB::Red && !crossings(d.arc(a), other).is_empty() {
                return true;
            }
        }
    }
    false
}

/// Completion: add dashed red circles so that the induced orientation of each
/// blue loop matches its stored one. Red circles are added tightly around the
/// offending loop, oriented against the induced orientation (so they are
/// entirely dashed). Panics when a mismatched loop is crossed by red edges;
/// such inputs violate the trivalent local model for this layout.
pub fn complete(d: &AxisDiagram) -> AxisDiagram {
    let mut out = d.clone();
    // process blue loops outermost first (fixing an outer loop flips all
    // induced orientations inside the added circle)
    let mut order: Vec<LoopId> = out.blue_loops().collect();
    order.sort_by_key(|l| {
        let trav = out.traversal(*l);
        let min = trav.iter().map(|(a, _)| out.arc(*a).left.clone()).min().unwrap();
        let max = trav.iter().map(|(a, _)| out.arc(*a).right.clone()).max().unwrap();
        // wider spans first: outermost loops enclose the others
        std::cmp::Reverse(max - min)
    });
    for l in order {
        let desired = out.is_acw(l);
        if induced_acw(&out, l) == desired {
            continue;
        }
        assert!(
            !crossed_by_red(&out, l),
            "cannot complete: mismatched blue loop {l} carries trivalent vertices"
        );
        // span of the loop and the gap to the nearest foreign anchor
        let trav = out.traversal(l);
        let lo = trav.iter().map(|(a, _)| out.arc(*a).left.clone()).min().unwrap();
        let hi = trav.iter().map(|(a, _)| out.arc(*a).right.clone()).max().unwrap();
        let mut delta = Q::from_integer(1.into());
        for a in &out.arcs {
            for p in [&a.left, &a.right] {
                if *p < lo {
                    let gap = (&lo - p) / Q::from_integer(2.into());
                    if gap < delta {
                        delta = gap;
                    }
                }
                if *p > hi {
                    let gap = (p - &hi) / Q::from_integer(2.into());
                    if gap < delta {
                        delta = gap;
                    }
                }
            }
        }
        let level = out
            .loops[l]
            .arcs
            .iter()
            .map(|a| out.arc(*a).level)
            .min()
            .unwrap_or(0);
        let gl = add_circle(
            &mut out,
            ColorRB::Red,
            &lo - &delta,
            &hi + &delta,
            level,
            true,
        );
        // orient the circle against its induced orientation: entirely dashed
        let ind = induced_acw_red(&out, gl);
        if out.is_acw(gl) == ind {
            out.loops[gl].arrows_forward = !out.loops[gl].arrows_forward;
        }
        debug_assert_ne!(out.is_acw(gl), induced_acw_red(&out, gl));
        debug_assert_eq!(induced_acw(&out, l), desired, "completion fixed loop {l}");
    }
    out
}

fn induced_acw_red(d: &AxisDiagram, l: LoopId) -> bool {
    induced_acw(d, l)
}

/// Boundary point of a web: blue or red, oriented.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub color: ColorRB2,
    pub positive: bool,
}

/// Serializable color tag for boundary data.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ColorRB2 {
    #[serde(rename = "blue")]
    Blue,
    #[serde(rename = "red")]
    Red,
}

impl BoundaryPoint {
    pub fn weight(&self) -> i64 {
        let w = match self.color {
            ColorRB2::Blue => 1,
            ColorRB2::Red => 2,
        };
        if self.positive {
            w
        } else {
            -w
        }
    }

    pub fn from_weight(w: i64) -> Option<BoundaryPoint> {
        match w {
            1 => Some(BoundaryPoint { color: ColorRB2::Blue, positive: true }),
            -1 => Some(BoundaryPoint { color: ColorRB2::Blue, positive: false }),
            2 => Some(BoundaryPoint { color: ColorRB2::Red, positive: true }),
            -2 => Some(BoundaryPoint { color: ColorRB2::Red, positive: false }),
            _ => None,
        }
    }
}

/// An ordered boundary sequence.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct BoundarySeq {
    pub points: Vec<BoundaryPoint>,
}

impl BoundarySeq {
    pub fn from_weights(ws: &[i64]) -> Option<BoundarySeq> {
        ws.iter()
            .map(|w| BoundaryPoint::from_weight(*w))
            .collect::<Option<Vec<_>>>()
            .map(|points| BoundarySeq { points })
    }

    pub fn weight(&self) -> i64 {
        self.points.iter().map(|p| p.weight()).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.weight() == 0
    }

    pub fn blue_count(&self) -> usize {
        self.points.iter().filter(|p| p.color == ColorRB2::Blue).count()
    }

    pub fn red_count(&self) -> usize {
        self.points.iter().filter(|p| p.color == ColorRB2::Red).count()
    }
}

/// A crossingless perfect matching of `2n` points (a Temperley-Lieb cup
/// diagram). Points are indexed `0..2n`; arcs are stored as `(i, j)`, `i<j`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct CupDiagram {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl CupDiagram {
    pub fn new(n: usize, mut arcs: Vec<(usize, usize)>) -> CupDiagram {
        arcs.iter_mut().for_each(|a| {
            if a.0 > a.1 {
                *a = (a.1, a.0);
            }
        });
        arcs.sort();
        let c = CupDiagram { n, arcs };
        assert!(c.is_valid(), "not a planar perfect matching");
        c
    }

    pub fn is_valid(&self) -> bool {
        if self.arcs.len() != self.n {
            return false;
        }
        let mut seen = vec![false; 2 * self.n];
        for &(i, j) in &self.arcs {
            if i >= j || j >= 2 * self.n || seen[i] || seen[j] {
                return false;
            }
            seen[i] = true;
            seen[j] = true;
        }
        // planarity: no interleaving i < k < j < l
        for &(i, j) in &self.arcs {
            for &(k, l) in &self.arcs {
                if i < k && k < j && j < l {
                    return false;
                }
            }
        }
        true
    }

    pub fn partner(&self, i: usize) -> usize {
        for &(a, b) in &self.arcs {
            if a == i {
                return b;
            }
            if b == i {
                return a;
            }
        }
        panic!("point {i} out of range")
    }

    /// All cup diagrams on `2n` points (Catalan many).
    pub fn enumerate(n: usize) -> Vec<CupDiagram> {
        fn go(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
            if points.is_empty() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            let first = points[0];
            // match `first` with an odd-offset partner to keep both sides even
            for k in (1..points.len()).step_by(2) {
                let partner = points[k];
                let inner = &points[1..k];
                let outer = &points[k + 1..];
                for a in go(inner) {
                    for b in go(outer) {
                        let mut arcs = vec![(first, partner)];
                        arcs.extend(a.iter().copied());
                        arcs.extend(b);
                        out.push(arcs);
                    }
                }
            }
            out
        }
        let pts: Vec<usize> = (0..2 * n).collect();
        go(&pts).into_iter().map(|arcs| CupDiagram::new(n, arcs)).collect()
    }

    /// Loops of the closed diagram obtained by gluing `self` below and
    /// `other` (reflected) above the axis: returns the partition of points.
    pub fn glue_loops(&self, other: &CupDiagram) -> Vec<Vec<usize>> {
        assert_eq!(self.n, other.n);
        let mut seen = vec![false; 2 * self.n];
        let mut loops = Vec::new();
        for start in 0..2 * self.n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            loop {
                seen[p] = true;
                cycle.push(p);
                let q1 = self.partner(p);
                seen[q1] = true;
                cycle.push(q1);
                p = other.partner(q1);
                if p == start {
                    break;
                }
            }
            loops.push(cycle);
        }
        loops
    }

    /// Serialize as a balanced-parenthesis string.
    pub fn to_parens(&self) -> String {
        let mut open = vec![false; 2 * self.n];
        for &(i, _) in &self.arcs {
            open[i] = true;
        }
        open.iter().map(|o| if *o { '(' } else { ')' }).collect()
    }

    pub fn from_parens(s: &str) -> Option<CupDiagram> {
        let mut stack = Vec::new();
        let mut arcs = Vec::new();
        for (i, c) in s.chars().enumerate() {
            match c {
                '(' => stack.push(i),
                ')' => {
                    let j = stack.pop()?;
                    arcs.push((j, i));
                }
                _ => return None,
            }
        }
        if !stack.is_empty() || s.len() % 2 != 0 {
            return None;
        }
        Some(CupDiagram::new(s.len() / 2, arcs))
    }
}

/// Axis positions used for the `2n` boundary points of closures.
pub fn closure_positions(n2: usize) -> Vec<Q> {
    (0..n2).map(|i| q(10 * (i as i64 + 1))).collect()
}

/// The closed blue diagram of a matching pair: `bottom` cups below the axis,
/// `top` caps above, glued at shared boundary positions.
pub fn closure_diagram(bottom: &CupDiagram, top: &CupDiagram) -> AxisDiagram {
    assert_eq!(bottom.n, top.n);
    let pos = closure_positions(2 * bottom.n);
    let mut d = AxisDiagram::new();
    for cycle in bottom.glue_loops(top) {
        // cycle alternates bottom arcs and top arcs: points p0-p1 (bottom),
        // p1-p2 (top), ...
        let mut arcs = Vec::new();
        for (k, w) in cycle.windows(2).enumerate() {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            let side = if k % 2 == 0 { Side::Below } else { Side::Above };
            arcs.push(Arc::new(pos[a].clone(), pos[b].clone(), side, nesting_level(bottom, top, w[0], w[1])));
        }
        // closing arc from last point back to first (a top arc)
        let (a, b) = (
            *cycle.last().unwrap().min(&cycle[0]),
            *cycle.last().unwrap().max(&cycle[0]),
        );
        arcs.push(Arc::new(pos[a].clone(), pos[b].clone(), Side::Above, nesting_level(bottom, top, a, b)));
        d.push_loop(ColorRB::Blue, arcs, 0, true);
    }
    d
}

fn nesting_level(_b: &CupDiagram, _t: &CupDiagram, _i: usize, _j: usize) -> u32 {
    // arcs of a crossingless matching nest by span inclusion, which the
    // ellipse geometry realizes at a single level
    0
}

/// Random completed web: nested blue and red circles with random
/// orientations, plus occasional flat red loops creating trivalent vertices.
pub fn random_completed_web(rng: &mut impl Rng, richness: u32) -> AxisDiagram {
    let mut d = AxisDiagram::new();
    let mut next = 0i64;
    let mut span = |rng: &mut dyn rand::RngCore, width: i64| {
        let l = next + rng.gen_range(1..4);
        let r = l + width;
        next = r;
        (q(l), q(r))
    };
    let n = rng.gen_range(1..=richness.max(1)) as usize;
    for _ in 0..n {
        match rng.gen_range(0..6) {
            // lone blue circle, either orientation
            0 | 1 => {
                let (l, r) = span(rng, 4);
                add_circle(&mut d, ColorRB::Blue, l, r, 0, rng.gen());
            }
            // blue inside red
            2 => {
                let (l, r) = span(rng, 8);
                add_circle(&mut d, ColorRB::Red, l.clone(), r.clone(), 0, rng.gen());
                add_circle(&mut d, ColorRB::Blue, &l + &q(2), &r - &q(2), 0, rng.gen());
            }
            // red inside blue
            3 => {
                let (l, r) = span(rng, 8);
                add_circle(&mut d, ColorRB::Blue, l.clone(), r.clone(), 0, rng.gen());
                add_circle(&mut d, ColorRB::Red, &l + &q(2), &r - &q(2), 0, rng.gen());
            }
            // theta-like: flat red loop through a blue circle
            4 => {
                let (l, r) = span(rng, 8);
                add_circle(&mut d, ColorRB::Blue, &l + &q(2), r.clone(), 0, rng.gen());
                add_circle(&mut d, ColorRB::Red, l, &r - &q(4), 1, rng.gen());
            }
            // nested blues inside a red
            _ => {
                let (l, r) = span(rng, 12);
                add_circle(&mut d, ColorRB::Red, l.clone(), r.clone(), 0, rng.gen());
                add_circle(&mut d, ColorRB::Blue, &l + &q(2), &r - &q(2), 0, rng.gen());
                add_circle(&mut d, ColorRB::Blue, &l + &q(4), &r - &q(4), 0, rng.gen());
            }
        }
    }
    // adopt induced orientations, then flip a few red-free blue loops and
    // complete to exercise dashed completion circles
    adopt_induced_orientations(&mut d);
    let blue: Vec<LoopId> = d.blue_loops().collect();
    for l in blue {
        if !crossed_by_red(&d, l) && rng.gen_bool(0.4) {
            d.loops[l].arrows_forward = !d.loops[l].arrows_forward;
        }
    }
    let out = complete(&d);
    debug_assert!(out.validate().is_ok());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn completion_of_circles() {
        // clockwise blue circle: already induced, no dashed circle added
        let mut d = AxisDiagram::new();
        add_cw_circle(&mut d, ColorRB::Blue, q(0), q(4), 0);
        let c = complete(&d);
        assert_eq!(c.loops.len(), 1);
        // anticlockwise: surrounded by a dashed red circle
        let mut d2 = AxisDiagram::new();
        add_acw_circle(&mut d2, ColorRB::Blue, q(0), q(4), 0);
        let c2 = complete(&d2);
        assert_eq!(c2.loops.len(), 2);
        assert_eq!(c2.loops[1].color, ColorRB::Red);
        assert!(c2.is_acw(1), "completion circles are anticlockwise");
        assert_eq!(induced_acw(&c2, 0), true, "blue loop now induced acw");
        c2.validate().unwrap();
    }

    #[test]
    fn weight_table() {
        let s = BoundarySeq::from_weights(&[1]).unwrap();
        assert_eq!(s.weight(), 1);
        let s = BoundarySeq::from_weights(&[-2, 2]).unwrap();
        assert_eq!(s.weight(), 0);
        assert!(BoundarySeq::default().is_balanced());
    }

    #[test]
    fn catalan_counts() {
        assert_eq!(CupDiagram::enumerate(0).len(), 1);
        assert_eq!(CupDiagram::enumerate(1).len(), 1);
        assert_eq!(CupDiagram::enumerate(2).len(), 2);
        assert_eq!(CupDiagram::enumerate(3).len(), 5);
        assert_eq!(CupDiagram::enumerate(4).len(), 14);
    }

    #[test]
    fn parens_round_trip() {
        for c in CupDiagram::enumerate(3) {
            assert_eq!(CupDiagram::from_parens(&c.to_parens()), Some(c));
        }
    }

    #[test]
    fn glue_loop_counts() {
        let cups = CupDiagram::enumerate(2);
        let nested = CupDiagram::from_parens("(())").unwrap();
        let unnested = CupDiagram::from_parens("()()").unwrap();
        assert!(cups.contains(&nested) && cups.contains(&unnested));
        assert_eq!(nested.glue_loops(&nested).len(), 2);
        assert_eq!(unnested.glue_loops(&unnested).len(), 2);
        assert_eq!(nested.glue_loops(&unnested).len(), 1);
    }

    #[test]
    fn closure_diagram_valid() {
        for b in CupDiagram::enumerate(2) {
            for t in CupDiagram::enumerate(2) {
                let d = closure_diagram(&b, &t);
                d.validate().unwrap();
                assert_eq!(d.loops.len(), b.glue_loops(&t).len());
            }
        }
    }

    #[test]
    fn random_webs_validate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let d = random_completed_web(&mut rng, 3);
            d.validate().unwrap();
            for l in d.blue_loops() {
                assert_eq!(d.is_acw(l), induced_acw(&d, l));
            }
        }
    }
}

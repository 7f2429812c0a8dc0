//! Point probes, crossing localization, segment styles, loop orientation and
//! the nestedness / distance-parity counts driving the sign rules.

use std::collections::BTreeMap;

use super::geometry::{self, Crossing};
use super::{ArcId, AxisDiagram, ColorRB, DiagramError, LoopId, Q, Side};

/// A point of the plane specified exactly: on the axis or infinitesimally
/// above/below a point of an arc.
#[derive(Clone, PartialEq, Debug)]
pub struct Probe {
    pub x: Q,
    pub vert: Vert,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Vert {
    Axis,
    JustAbove(ArcId),
    JustBelow(ArcId),
}

impl Probe {
    pub fn axis(x: Q) -> Probe {
        Probe { x, vert: Vert::Axis }
    }

    pub fn above_arc(arc: ArcId, x: Q) -> Probe {
        Probe { x, vert: Vert::JustAbove(arc) }
    }

    pub fn below_arc(arc: ArcId, x: Q) -> Probe {
        Probe { x, vert: Vert::JustBelow(arc) }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FaceColor {
    White,
    Black,
}

/// A localized red-blue crossing of the full diagram.
#[derive(Clone, Debug)]
pub struct CrossingData {
    pub red_arc: ArcId,
    pub blue_arc: ArcId,
    pub geo: Crossing,
}

pub type CrossingRef = usize;

/// All crossings of a diagram with pairwise disjoint isolating intervals.
#[derive(Clone, Debug, Default)]
pub struct Crossings {
    pub list: Vec<CrossingData>,
    /// Crossings on each arc, sorted by x.
    pub per_arc: BTreeMap<ArcId, Vec<CrossingRef>>,
}

impl Crossings {
    pub fn on_arc(&self, arc: ArcId) -> &[CrossingRef] {
        self.per_arc.get(&arc).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Crossings along a whole loop, in traversal order.
    pub fn along_loop(&self, d: &AxisDiagram, l: LoopId) -> Vec<CrossingRef> {
        let mut out = Vec::new();
        for (arc, rev) in d.traversal(l) {
            let mut on: Vec<CrossingRef> = self.on_arc(arc).to_vec();
            if rev {
                on.reverse();
            }
            out.extend(on);
        }
        out
    }
}

pub trait DiagramQueries {
    fn arcs_above(&self, p: &Probe) -> Result<Vec<ArcId>, DiagramError>;
    fn face_color(&self, p: &Probe) -> Result<FaceColor, DiagramError>;
    fn loops_containing(&self, p: &Probe) -> Result<Vec<LoopId>, DiagramError>;
    fn crossings(&self) -> Crossings;
    fn geometric_acw(&self, l: LoopId) -> bool;
    fn is_acw(&self, l: LoopId) -> bool;
    fn nestedness(&self, x: &Q) -> Result<u32, DiagramError>;
    fn s_count(&self, x: &Q) -> Result<u32, DiagramError>;
    fn red_loops_surrounding(&self, x: &Q) -> Result<Vec<(LoopId, bool)>, DiagramError>;
    fn segment_style(&self, cr: &Crossings, arc: ArcId, x: &Q) -> Result<SegmentStyle, DiagramError>;
    fn arrow_rightward(&self, l: LoopId, arc: ArcId) -> bool;
    fn generic_sample(&self, arc: ArcId) -> Q;
    fn surviving_membranes_at(&self, x: &Q) -> Result<Vec<(LoopId, bool)>, DiagramError>;
    fn curve_inside(&self, inner: LoopId, outer: LoopId) -> Result<bool, DiagramError>;
    fn effective_nestedness(&self, x: &Q) -> Result<u32, DiagramError>;
    fn effective_s(&self, x: &Q) -> Result<u32, DiagramError>;
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SegmentStyle {
    Solid,
    Dashed,
}

impl AxisDiagram {
    fn check_not_anchor(&self, x: &Q) -> Result<(), DiagramError> {
        if self.arcs.iter().any(|a| a.left == *x || a.right == *x) {
            return Err(DiagramError::NonGenericPoint(x.to_string(), "coincides with an anchor; perturb".into()));
        }
        Ok(())
    }

    /// Reference squared height of a probe along with the strictness of the
    /// comparison against same-side arcs.
    fn probe_ref(&self, p: &Probe) -> Result<Option<(Side, Q, ArcId, bool)>, DiagramError> {
        match &p.vert {
            Vert::Axis => Ok(None),
            Vert::JustAbove(a) | Vert::JustBelow(a) => {
                let arc = self.arc(*a);
                if !arc.spans(&p.x) {
                    return Err(DiagramError::NonGenericPoint(
                        p.x.to_string(),
                        format!("probe arc {a} does not span x"),
                    ));
                }
                let h = geometry::height_sq(arc, &p.x);
                let include_self = matches!(
                    (&p.vert, arc.side),
                    (Vert::JustBelow(_), Side::Above) | (Vert::JustBelow(_), Side::Below)
                );
                Ok(Some((arc.side, h, *a, include_self)))
            }
        }
    }
}

impl DiagramQueries for AxisDiagram {
    /// Arcs crossed by a vertical ray from the probe point to `y = +inf`.
    fn arcs_above(&self, p: &Probe) -> Result<Vec<ArcId>, DiagramError> {
        self.check_not_anchor(&p.x)?;
        let reference = self.probe_ref(p)?;
        let mut out = Vec::new();
        for (id, arc) in self.arcs.iter().enumerate() {
            if !arc.spans(&p.x) {
                continue;
            }
            let include = match (&reference, arc.side) {
                // probe on the axis: everything above the axis
                (None, Side::Above) => true,
                (None, Side::Below) => false,
                (Some((pside, href, pa, include_self)), side) => {
                    if id == *pa {
                        // the probe's own arc counts only for "just below"
                        *include_self
                    } else {
                        let h = geometry::height_sq(arc, &p.x);
                        match (pside, side) {
                            // probe above the axis
                            (Side::Above, Side::Above) => {
                                if h == *href {
                                    return Err(DiagramError::NonGenericPoint(
                                        p.x.to_string(),
                                        format!("height tie between arcs {pa} and {id}"),
                                    ));
                                }
                                h > *href
                            }
                            (Side::Above, Side::Below) => false,
                            // probe below the axis
                            (Side::Below, Side::Above) => true,
                            (Side::Below, Side::Below) => {
                                if h == *href {
                                    return Err(DiagramError::NonGenericPoint(
                                        p.x.to_string(),
                                        format!("height tie between arcs {pa} and {id}"),
                                    ));
                                }
                                h < *href
                            }
                        }
                    }
                }
            };
            if include {
                out.push(id);
            }
        }
        Ok(out)
    }

    fn face_color(&self, p: &Probe) -> Result<FaceColor, DiagramError> {
        let n = self.arcs_above(p)?.len();
        Ok(if n % 2 == 0 { FaceColor::White } else { FaceColor::Black })
    }

    fn loops_containing(&self, p: &Probe) -> Result<Vec<LoopId>, DiagramError> {
        let above = self.arcs_above(p)?;
        let mut out = Vec::new();
        for (li, l) in self.loops.iter().enumerate() {
            let k = l.arcs.iter().filter(|a| above.contains(a)).count();
            if k % 2 == 1 {
                out.push(li);
            }
        }
        Ok(out)
    }

    /// Localize all red-blue crossings with disjoint isolating intervals.
    fn crossings(&self) -> Crossings {
        let mut list: Vec<CrossingData> = Vec::new();
        for (ri, ra) in self.arcs.iter().enumerate() {
            if self.color_of_arc(ri) != ColorRB::Red {
                continue;
            }
            for (bi, ba) in self.arcs.iter().enumerate() {
                if self.color_of_arc(bi) != ColorRB::Blue {
                    continue;
                }
                for geo in geometry::crossings(ra, ba) {
                    list.push(CrossingData { red_arc: ri, blue_arc: bi, geo });
                }
            }
        }
        // refine until intervals on a common arc are pairwise disjoint
        let arcs = &self.arcs;
        loop {
            let mut refined = false;
            for i in 0..list.len() {
                for j in (i + 1)..list.len() {
                    let share = list[i].red_arc == list[j].red_arc
                        || list[i].blue_arc == list[j].blue_arc;
                    if !share {
                        continue;
                    }
                    let disjoint = list[i].geo.hi <= list[j].geo.lo || list[j].geo.hi <= list[i].geo.lo;
                    if !disjoint {
                        let (ci, cj) = (list[i].clone(), list[j].clone());
                        let wi = (&ci.geo.hi - &ci.geo.lo) / Q::from_integer(4.into());
                        let wj = (&cj.geo.hi - &cj.geo.lo) / Q::from_integer(4.into());
                        geometry::refine(&arcs[ci.red_arc], &arcs[ci.blue_arc], &mut list[i].geo, &wi);
                        geometry::refine(&arcs[cj.red_arc], &arcs[cj.blue_arc], &mut list[j].geo, &wj);
                        refined = true;
                    }
                }
            }
            if !refined {
                break;
            }
        }
        let mut per_arc: BTreeMap<ArcId, Vec<CrossingRef>> = BTreeMap::new();
        let mut order: Vec<CrossingRef> = (0..list.len()).collect();
        order.sort_by(|a, b| list[*a].geo.lo.cmp(&list[*b].geo.lo));
        for r in order {
            per_arc.entry(list[r].red_arc).or_default().push(r);
            per_arc.entry(list[r].blue_arc).or_default().push(r);
        }
        Crossings { list, per_arc }
    }

    /// Orientation of the stored traversal as a plane curve.
    fn geometric_acw(&self, l: LoopId) -> bool {
        let trav = self.traversal(l);
        // minimal anchor of the loop
        let min_pos = trav
            .iter()
            .map(|(a, _)| self.arc(*a).left.clone())
            .min()
            .expect("nonempty loop");
        // incoming arc ends at min (reversed travel), outgoing starts there
        let incoming = trav
            .iter()
            .find(|(a, rev)| self.arc(*a).left == min_pos && *rev)
            .map(|(a, _)| *a);
        let outgoing = trav
            .iter()
            .find(|(a, rev)| self.arc(*a).left == min_pos && !*rev)
            .map(|(a, _)| *a);
        let (inc, out) = (incoming.expect("incoming at min"), outgoing.expect("outgoing at min"));
        let (ai, ao) = (self.arc(inc), self.arc(out));
        // physical height comparison just right of the min anchor
        match (ai.side, ao.side) {
            (Side::Above, Side::Below) => true,
            (Side::Below, Side::Above) => false,
            (Side::Above, Side::Above) => {
                geometry::cmp_heights_at_shared_left(ai, ao) == std::cmp::Ordering::Greater
            }
            (Side::Below, Side::Below) => {
                // deeper means physically lower
                geometry::cmp_heights_at_shared_left(ai, ao) == std::cmp::Ordering::Less
            }
        }
    }

    /// Semantic orientation: the stored arrows' direction as a plane curve.
    fn is_acw(&self, l: LoopId) -> bool {
        self.geometric_acw(l) == self.loops[l].arrows_forward
    }

    /// A sample point on an arc avoiding anchors and height ties.
    fn generic_sample(&self, arc: ArcId) -> Q {
        let a = self.arc(arc);
        let w = &a.right - &a.left;
        for (num, den) in [(1i64, 2i64), (7, 16), (9, 16), (5, 16), (11, 16), (3, 16), (13, 16), (1, 16), (15, 16), (21, 64), (43, 64)] {
            let x = &a.left + &w * Q::new(num.into(), den.into());
            let ok = self.arcs_above(&Probe::above_arc(arc, x.clone())).is_ok()
                && self.arcs_above(&Probe::below_arc(arc, x.clone())).is_ok();
            if ok {
                return x;
            }
        }
        panic!("no generic sample found on arc {arc}")
    }

    /// Number of red loops encircling the axis point `x`.
    fn nestedness(&self, x: &Q) -> Result<u32, DiagramError> {
        let inside = self.loops_containing(&Probe::axis(x.clone()))?;
        Ok(inside
            .iter()
            .filter(|l| self.loops[**l].color == ColorRB::Red)
            .count() as u32)
    }

    /// Red loops surrounding `x` with their even-distance verdicts.
    fn red_loops_surrounding(&self, x: &Q) -> Result<Vec<(LoopId, bool)>, DiagramError> {
        let crossings = self.crossings();
        let probe = Probe::axis(x.clone());
        let above = self.arcs_above(&probe)?;
        let mut out = Vec::new();
        for li in 0..self.loops.len() {
            if self.loops[li].color != ColorRB::Red {
                continue;
            }
            let mine: Vec<ArcId> = above
                .iter()
                .copied()
                .filter(|a| self.loops[li].arcs.contains(a))
                .collect();
            if mine.len() % 2 == 0 {
                continue;
            }
            // first intersection of the upward ray with this loop
            let lowest = mine
                .iter()
                .copied()
                .min_by(|a, b| geometry::height_sq(self.arc(*a), x).cmp(&geometry::height_sq(self.arc(*b), x)))
                .expect("nonempty");
            let h_star = geometry::height_sq(self.arc(lowest), x);
            // blue crossings of the ray strictly below the first hit
            let blue_below = above
                .iter()
                .filter(|a| {
                    self.color_of_arc(**a) == ColorRB::Blue
                        && geometry::height_sq(self.arc(**a), x) < h_star
                })
                .count();
            let style = self.segment_style(&crossings, lowest, x)?;
            let evenly = match style {
                SegmentStyle::Solid => blue_below % 2 == 0,
                SegmentStyle::Dashed => blue_below % 2 == 1,
            };
            out.push((li, evenly));
        }
        Ok(out)
    }

    /// The blue-Morse sign exponent: oddly distanced anticlockwise plus
    /// evenly distanced clockwise red loops around `x`.
    fn s_count(&self, x: &Q) -> Result<u32, DiagramError> {
        let mut s = 0u32;
        for (li, evenly) in self.red_loops_surrounding(x)? {
            let acw = self.is_acw(li);
            if (evenly && !acw) || (!evenly && acw) {
                s += 1;
            }
        }
        Ok(s)
    }

    /// Red loops whose membrane face over the axis point `x` survives in the
    /// cup foam, with their semantic orientations. A face of the membrane of
    /// `gamma` survives exactly when the parity of blue loops around the
    /// point plus the depth of `gamma` in the surrounding red chain matches
    /// the orientation.
    fn surviving_membranes_at(&self, x: &Q) -> Result<Vec<(LoopId, bool)>, DiagramError> {
        let probe = Probe::axis(x.clone());
        let containing = self.loops_containing(&probe)?;
        let blue_count = containing
            .iter()
            .filter(|l| self.loops[**l].color == ColorRB::Blue)
            .count();
        let reds: Vec<LoopId> = containing
            .iter()
            .copied()
            .filter(|l| self.loops[*l].color == ColorRB::Red)
            .collect();
        // the red loops containing x form a chain; depth of gamma = number of
        // chain members containing gamma, including gamma itself
        let mut out = Vec::new();
        for &g in &reds {
            let mut depth = 1usize;
            for &eta in &reds {
                if eta != g && self.curve_inside(g, eta)? {
                    depth += 1;
                }
            }
            let acw = self.is_acw(g);
            let survives = ((blue_count + depth) % 2 == 0) == acw;
            if survives {
                out.push((g, acw));
            }
        }
        Ok(out)
    }

    /// Whether the whole curve `inner` lies inside the region bounded by
    /// `outer` (the curves must be disjoint).
    fn curve_inside(&self, inner: LoopId, outer: LoopId) -> Result<bool, DiagramError> {
        let arc = self.loops[inner].arcs[0];
        let x = self.generic_sample(arc);
        let inside = self.loops_containing(&Probe::above_arc(arc, x))?;
        Ok(inside.contains(&outer))
    }

    /// Number of surviving membranes a dot placed at `x` must pass.
    fn effective_nestedness(&self, x: &Q) -> Result<u32, DiagramError> {
        Ok(self.surviving_membranes_at(x)?.len() as u32)
    }

    /// The sign exponent a blue Morse move at `x` actually picks up: one
    /// per surviving anticlockwise membrane below the site.
    fn effective_s(&self, x: &Q) -> Result<u32, DiagramError> {
        Ok(self
            .surviving_membranes_at(x)?
            .iter()
            .filter(|(_, acw)| *acw)
            .count() as u32)
    }

    /// Style of the red segment of `arc` containing `x` (which must avoid the
    /// isolating intervals of the crossings on the arc).
    fn segment_style(&self, cr: &Crossings, arc: ArcId, x: &Q) -> Result<SegmentStyle, DiagramError> {
        for r in cr.on_arc(arc) {
            let c = &cr.list[*r];
            if c.geo.lo < *x && *x < c.geo.hi {
                return Err(DiagramError::NonGenericPoint(
                    x.to_string(),
                    "inside a crossing's isolating interval".into(),
                ));
            }
        }
        let l = self.loop_of_arc(arc);
        let rightward = self.arrow_rightward(l, arc);
        let left_probe = if rightward {
            Probe::above_arc(arc, x.clone())
        } else {
            Probe::below_arc(arc, x.clone())
        };
        Ok(if self.face_color(&left_probe)? == FaceColor::White {
            SegmentStyle::Solid
        } else {
            SegmentStyle::Dashed
        })
    }

    /// Whether the semantic arrows travel left-to-right on this arc.
    fn arrow_rightward(&self, l: LoopId, arc: ArcId) -> bool {
        let trav = self.traversal(l);
        let (_, rev) = trav.iter().find(|(a, _)| *a == arc).expect("arc in loop");
        let travels_right = !rev;
        travels_right == self.loops[l].arrows_forward
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::build::*;
    use crate::planar::q;

    #[test]
    fn single_red_circle_nestedness() {
        let mut d = AxisDiagram::new();
        add_circle(&mut d, ColorRB::Red, q(0), q(10), 0, true);
        assert_eq!(d.nestedness(&q(5)).unwrap(), 1);
        assert_eq!(d.nestedness(&q(11)).unwrap(), 0);
    }

    #[test]
    fn two_nested_red_circles() {
        let mut d = AxisDiagram::new();
        add_circle(&mut d, ColorRB::Red, q(0), q(10), 0, true);
        add_circle(&mut d, ColorRB::Red, q(2), q(8), 0, true);
        assert_eq!(d.nestedness(&q(5)).unwrap(), 2);
        assert_eq!(d.nestedness(&q(1)).unwrap(), 1);
        assert_eq!(d.nestedness(&q(11)).unwrap(), 0);
    }

    #[test]
    fn anchor_point_is_rejected() {
        let mut d = AxisDiagram::new();
        add_circle(&mut d, ColorRB::Red, q(0), q(10), 0, true);
        assert!(d.nestedness(&q(0)).is_err());
    }

    #[test]
    fn circle_orientations() {
        let mut d = AxisDiagram::new();
        // traversal of a plain circle: above arc left-to-right first = clockwise
        let cw = add_circle(&mut d, ColorRB::Red, q(0), q(4), 0, true);
        let acw = add_circle(&mut d, ColorRB::Red, q(6), q(10), 0, false);
        assert!(!d.is_acw(cw));
        assert!(d.is_acw(acw));
    }

    #[test]
    fn lone_circle_styles() {
        // a red circle in a white ambient: solid iff clockwise
        let mut d = AxisDiagram::new();
        let cw = add_circle(&mut d, ColorRB::Red, q(0), q(4), 0, true);
        let cr = d.crossings();
        let arc = d.loops[cw].arcs[0];
        assert_eq!(d.segment_style(&cr, arc, &q(2)).unwrap(), SegmentStyle::Solid);
        let acw = add_circle(&mut d, ColorRB::Red, q(6), q(10), 0, false);
        let arc2 = d.loops[acw].arcs[0];
        let cr = d.crossings();
        assert_eq!(d.segment_style(&cr, arc2, &q(8)).unwrap(), SegmentStyle::Dashed);
    }

    #[test]
    fn s_count_clockwise_circle_no_blue() {
        // clockwise red circle around p, no blue in between: evenly distanced
        // clockwise loop counts: s = 1
        let mut d = AxisDiagram::new();
        add_circle(&mut d, ColorRB::Red, q(0), q(10), 0, true);
        assert_eq!(d.s_count(&q(5)).unwrap(), 1);
        // anticlockwise lone circle is entirely dashed: oddly distanced and
        // anticlockwise also counts
        let mut d2 = AxisDiagram::new();
        add_circle(&mut d2, ColorRB::Red, q(0), q(10), 0, false);
        assert_eq!(d2.s_count(&q(5)).unwrap(), 1);
    }

    #[test]
    fn facet_level_counts() {
        // solid clockwise circle: its single membrane face survives, but a
        // clockwise membrane is crossed without a sign
        let mut d = AxisDiagram::new();
        add_circle(&mut d, ColorRB::Red, q(0), q(10), 0, true);
        assert_eq!(d.effective_nestedness(&q(5)).unwrap(), 1);
        assert_eq!(d.effective_s(&q(5)).unwrap(), 0);
        // dashed anticlockwise lone circle: the face is erased entirely
        let mut d2 = AxisDiagram::new();
        add_circle(&mut d2, ColorRB::Red, q(0), q(10), 0, false);
        assert_eq!(d2.effective_nestedness(&q(5)).unwrap(), 0);
        assert_eq!(d2.effective_s(&q(5)).unwrap(), 0);
        // anticlockwise circle around a blue circle: the inner face survives
        // and costs a sign
        let mut d3 = AxisDiagram::new();
        add_circle(&mut d3, ColorRB::Red, q(0), q(10), 0, false);
        add_circle(&mut d3, ColorRB::Blue, q(2), q(8), 0, true);
        assert_eq!(d3.effective_nestedness(&q(5)).unwrap(), 1);
        assert_eq!(d3.effective_s(&q(5)).unwrap(), 1);
        assert_eq!(d3.effective_s(&q(1)).unwrap(), 0, "annulus face is erased");
    }

    #[test]
    fn s_count_with_blue_between() {
        // red cw circle, blue circle between p and the red: oddly distanced
        let mut d = AxisDiagram::new();
        add_circle(&mut d, ColorRB::Red, q(0), q(10), 0, true);
        add_circle(&mut d, ColorRB::Blue, q(2), q(8), 0, true);
        // p inside the blue: ray crosses blue once before reaching red
        assert_eq!(d.s_count(&q(5)).unwrap(), 0);
        // p between blue and red: no blue below the first red hit
        assert_eq!(d.s_count(&q(1)).unwrap(), 1);
    }

    #[test]
    fn theta_like_crossing_styles() {
        // blue circle crossed by a flat red loop spanning one anchor
        let mut d = AxisDiagram::new();
        add_circle(&mut d, ColorRB::Blue, q(2), q(8), 0, true);
        add_circle(&mut d, ColorRB::Red, q(0), q(5), 1, true);
        d.validate().unwrap();
        let cr = d.crossings();
        assert_eq!(cr.list.len(), 2, "one crossing above, one below");
    }
}

//! Completed webs as axis-anchored planar curve arrangements.
//!
//! Curves are chains of elliptical half-arcs anchored on a horizontal axis.
//! An arc spans `(left, right)` on one side of the axis with squared height
//! `(x - left)(right - x) / SCALE^(2 level)`; higher levels flatten the arc so
//! that axis-hugging connectors can duck under everything else. All
//! topological queries (crossings, nestedness, distance parities, face
//! colors) reduce to exact rational comparisons of squared heights.

pub mod geometry;
pub mod queries;
pub mod build;
pub mod faces;

use num::BigRational;
use thiserror::Error;

use crate::coefficients::LaurentQ;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ColorRB {
    Blue,
    Red,
}

pub type ArcId = usize;
pub type LoopId = usize;

#[derive(Clone, PartialEq, Debug)]
pub struct Arc {
    pub left: Q,
    pub right: Q,
    pub side: Side,
    pub level: u32,
}

impl Arc {
    pub fn new(left: Q, right: Q, side: Side, level: u32) -> Arc {
        assert!(left < right, "arc endpoints must be ordered");
        Arc { left, right, side, level }
    }

    pub fn spans(&self, x: &Q) -> bool {
        self.left < *x && *x < self.right
    }
}

/// A closed curve of the diagram: a cyclic chain of arcs.
#[derive(Clone, PartialEq, Debug)]
pub struct DiagLoop {
    pub color: ColorRB,
    /// Cyclic chain; consecutive arcs share exactly one anchor.
    pub arcs: Vec<ArcId>,
    /// Dots carried by a blue loop (normalized to 0 or 1 in basis diagrams).
    pub dots: u32,
    /// For red loops: whether the drawn arrows follow the stored traversal.
    pub arrows_forward: bool,
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct AxisDiagram {
    pub arcs: Vec<Arc>,
    pub loops: Vec<DiagLoop>,
    /// Anchors at positions `< left` / `> right` of these bounds sit on
    /// platforms (extended algebras only).
    pub platform_left: Option<Q>,
    pub platform_right: Option<Q>,
}

#[derive(Error, Debug)]
pub enum DiagramError {
    #[error("arc {0} endpoints coincide or are unordered")]
    BadArc(ArcId),
    #[error("loop {0} is not a closed chain")]
    OpenLoop(LoopId),
    #[error("arcs {0} and {1} of the same color cross")]
    SameColorCrossing(ArcId, ArcId),
    #[error("arc {0} belongs to no loop or to several loops")]
    UnownedArc(ArcId),
    #[error("anchor {0} used by {1} arc endpoints (expected 2)")]
    BadAnchor(String, usize),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("query point {0} is not generic: {1}")]
    NonGenericPoint(String, String),
}

impl AxisDiagram {
    pub fn new() -> Self {
        AxisDiagram::default()
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    pub fn push_loop(&mut self, color: ColorRB, arcs: Vec<Arc>, dots: u32, arrows_forward: bool) -> LoopId {
        let ids: Vec<ArcId> = arcs
            .into_iter()
            .map(|a| {
                self.arcs.push(a);
                self.arcs.len() - 1
            })
            .collect();
        self.loops.push(DiagLoop { color, arcs: ids, dots, arrows_forward });
        self.loops.len() - 1
    }

    pub fn loop_of_arc(&self, arc: ArcId) -> LoopId {
        self.loops
            .iter()
            .position(|l| l.arcs.contains(&arc))
            .expect("arc owned by a loop")
    }

    pub fn blue_loops(&self) -> impl Iterator<Item = LoopId> + '_ {
        self.loops
            .iter()
            .enumerate()
            .filter(|(_, l)| l.color == ColorRB::Blue)
            .map(|(i, _)| i)
    }

    pub fn red_loops(&self) -> impl Iterator<Item = LoopId> + '_ {
        self.loops
            .iter()
            .enumerate()
            .filter(|(_, l)| l.color == ColorRB::Red)
            .map(|(i, _)| i)
    }

    pub fn blue_loop_count(&self) -> u32 {
        self.blue_loops().count() as u32
    }

    /// Graded rank `(q+q^-1)^ell` of the state space spanned by dotted
    /// versions of this diagram.
    pub fn graded_rank(&self) -> LaurentQ {
        LaurentQ::binomial_power(self.blue_loop_count())
    }

    /// Traversal of a loop: each arc with a flag for right-to-left travel.
    pub fn traversal(&self, l: LoopId) -> Vec<(ArcId, bool)> {
        let arcs = &self.loops[l].arcs;
        assert!(arcs.len() >= 2, "a closed loop needs at least two arcs");
        let mut out = Vec::with_capacity(arcs.len());
        for i in 0..arcs.len() {
            let prev = self.arc(arcs[(i + arcs.len() - 1) % arcs.len()]);
            let cur = self.arc(arcs[i]);
            // start anchor of cur = anchor shared with prev
            let start = if arcs.len() == 2 {
                // two-arc loop: first travels left-to-right by convention
                if i == 0 {
                    cur.left.clone()
                } else {
                    cur.right.clone()
                }
            } else if prev.left == cur.left || prev.right == cur.left {
                cur.left.clone()
            } else {
                debug_assert!(prev.left == cur.right || prev.right == cur.right);
                cur.right.clone()
            };
            out.push((arcs[i], start == cur.right));
        }
        out
    }

    /// All anchor positions, sorted and deduplicated.
    pub fn anchors(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self
            .arcs
            .iter()
            .flat_map(|a| [a.left.clone(), a.right.clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Structural validation: chains closed, anchors of degree two, and no
    /// same-color crossings.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut owner = vec![0usize; self.arcs.len()];
        for l in &self.loops {
            for &a in &l.arcs {
                owner[a] += 1;
            }
        }
        if let Some(a) = owner.iter().position(|c| *c != 1) {
            return Err(DiagramError::UnownedArc(a));
        }
        // chain closure: count endpoints at each anchor within each loop
        for (li, l) in self.loops.iter().enumerate() {
            let mut ends: std::collections::BTreeMap<Q, usize> = Default::default();
            for &a in &l.arcs {
                *ends.entry(self.arc(a).left.clone()).or_default() += 1;
                *ends.entry(self.arc(a).right.clone()).or_default() += 1;
            }
            if ends.values().any(|c| c % 2 != 0) {
                return Err(DiagramError::OpenLoop(li));
            }
        }
        // global anchor degree
        let mut deg: std::collections::BTreeMap<Q, usize> = Default::default();
        for a in &self.arcs {
            *deg.entry(a.left.clone()).or_default() += 1;
            *deg.entry(a.right.clone()).or_default() += 1;
        }
        for (pos, d) in deg {
            if d != 2 {
                return Err(DiagramError::BadAnchor(pos.to_string(), d));
            }
        }
        // no same-color crossings
        for i in 0..self.arcs.len() {
            for j in (i + 1)..self.arcs.len() {
                let (ci, cj) = (self.color_of_arc(i), self.color_of_arc(j));
                if ci == cj
                    && self.arcs[i].side == self.arcs[j].side
                    && !geometry::crossings(&self.arcs[i], &self.arcs[j]).is_empty()
                {
                    return Err(DiagramError::SameColorCrossing(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn color_of_arc(&self, arc: ArcId) -> ColorRB {
        self.loops[self.loop_of_arc(arc)].color
    }

    /// Renormalize anchors onto even integer positions, preserving order.
    pub fn renormalized(&self) -> AxisDiagram {
        let anchors = self.anchors();
        let map = |x: &Q| -> Q {
            let idx = anchors.binary_search(x).expect("anchor");
            q(2 * (idx as i64 + 1))
        };
        let mut out = self.clone();
        for a in &mut out.arcs {
            a.left = map(&a.left);
            a.right = map(&a.right);
        }
        out.platform_left = self.platform_left.as_ref().map(|x| {
            // platform bounds sit between anchors: map to the gap position
            let below = anchors.iter().filter(|a| *a < x).count() as i64;
            q(2 * below + 1)
        });
        out.platform_right = self.platform_right.as_ref().map(|x| {
            let below = anchors.iter().filter(|a| *a < x).count() as i64;
            q(2 * below + 1)
        });
        out
    }
}

//! Membrane structure of a red loop: the faces its disk is cut into by the
//! blue curves, with survival flags, rim adjacency and chord data. This is
//! the red-facet bookkeeping the foam assembler consumes.

use std::collections::BTreeMap;

use super::geometry::height_sq;
use super::queries::{CrossingRef, Crossings, DiagramQueries, Probe, SegmentStyle};
use super::{ArcId, AxisDiagram, ColorRB, LoopId, Q, Side};

pub type AtomId = usize;

#[derive(Clone, Debug)]
pub enum Atom {
    Face { survives: bool },
    LoneInterior { blue: LoopId, survives: bool },
}

impl Atom {
    pub fn survives(&self) -> bool {
        match self {
            Atom::Face { survives } | Atom::LoneInterior { survives, .. } => *survives,
        }
    }
}

/// A chord: a run of a blue curve through the membrane region, bounded by two
/// crossings with the loop; it carries one binding run.
#[derive(Clone, Debug)]
pub struct Chord {
    pub blue: LoopId,
    /// Bounding crossings, in traversal order along the blue curve.
    pub start: CrossingRef,
    pub end: CrossingRef,
    /// Atom on the surviving side (the binding run's red facet).
    pub red_atom: AtomId,
    /// A sample point on the chord.
    pub sample_arc: ArcId,
    pub sample_x: Q,
}

/// A lone blue curve inside the region; it carries an enclosure binding.
#[derive(Clone, Debug)]
pub struct Enclosure {
    pub blue: LoopId,
    pub outside_atom: AtomId,
    pub inside_atom: AtomId,
}

#[derive(Clone, Debug)]
pub struct MembraneStructure {
    pub gamma: LoopId,
    pub atoms: Vec<Atom>,
    /// Per segment of the loop between consecutive crossings, in traversal
    /// order starting after the first crossing (a single entry when the loop
    /// has no crossings): style and the inside-adjacent atom.
    pub rim: Vec<(SegmentStyle, AtomId)>,
    pub chords: Vec<Chord>,
    pub enclosures: Vec<Enclosure>,
}

/// A run of a curve between consecutive subarrangement crossings.
#[derive(Clone, Debug)]
struct SubSeg {
    curve: LoopId,
    from: CrossingRef,
    to: CrossingRef,
    sample_arc: ArcId,
    sample_x: Q,
    rightward_at_sample: bool,
}

type Dart = (usize, bool);

struct SubArr {
    segs: Vec<SubSeg>,
    rotation: BTreeMap<CrossingRef, Vec<Dart>>,
    /// (arc, x-stretch index) -> owning subsegment
    stretch_owner: BTreeMap<(ArcId, usize), usize>,
    /// subarrangement crossings on each arc, sorted by x
    sub_on_arc: BTreeMap<ArcId, Vec<CrossingRef>>,
}

impl SubArr {
    fn build(
        d: &AxisDiagram,
        cr: &Crossings,
        gamma: LoopId,
        comp_blues: &[LoopId],
    ) -> SubArr {
        let is_sub_crossing = |r: CrossingRef| -> bool {
            d.loops[gamma].arcs.contains(&cr.list[r].red_arc)
        };
        let mut segs: Vec<SubSeg> = Vec::new();
        let mut stretch_owner: BTreeMap<(ArcId, usize), usize> = BTreeMap::new();
        let mut sub_on_arc: BTreeMap<ArcId, Vec<CrossingRef>> = BTreeMap::new();
        let mut curves: Vec<LoopId> = vec![gamma];
        curves.extend_from_slice(comp_blues);
        for &curve in &curves {
            // subarrangement crossings in traversal order
            let mut walk: Vec<(ArcId, bool, Vec<CrossingRef>)> = Vec::new();
            for (arc, rev) in d.traversal(curve) {
                let mut on: Vec<CrossingRef> = cr
                    .on_arc(arc)
                    .iter()
                    .copied()
                    .filter(|r| is_sub_crossing(*r))
                    .collect();
                sub_on_arc.entry(arc).or_insert_with(|| on.clone());
                if rev {
                    on.reverse();
                }
                walk.push((arc, rev, on));
            }
            let cross_seq: Vec<CrossingRef> = walk.iter().flat_map(|(_, _, on)| on.clone()).collect();
            assert!(!cross_seq.is_empty(), "component curve with no subarrangement crossings");
            let base = segs.len();
            let n = cross_seq.len();
            for i in 0..n {
                let from = cross_seq[i];
                let to = cross_seq[(i + 1) % n];
                let (sample_arc, sample_x, rightward) = segment_sample(d, cr, curve, from);
                segs.push(SubSeg { curve, from, to, sample_arc, sample_x, rightward_at_sample: rightward });
            }
            // stretch ownership: walk again, tracking the current subsegment.
            // Before the first crossing of the walk we are in the last subseg.
            let mut current: usize = base + n - 1;
            for (arc, rev, on) in &walk {
                let k = sub_on_arc[arc].len();
                // stretch x-indices in travel order
                let order: Vec<usize> = if *rev {
                    (0..=k).rev().collect()
                } else {
                    (0..=k).collect()
                };
                for (step, stretch_idx) in order.iter().enumerate() {
                    stretch_owner.insert((*arc, *stretch_idx), current);
                    // after this stretch we pass a crossing (unless at arc end)
                    if step < k {
                        let passed = on[step];
                        let seg_idx = cross_seq.iter().position(|r| *r == passed).unwrap();
                        current = base + seg_idx;
                    }
                }
            }
        }

        // rotation at crossings
        let mut at: BTreeMap<CrossingRef, Vec<(usize, bool)>> = BTreeMap::new();
        for (si, s) in segs.iter().enumerate() {
            at.entry(s.from).or_default().push((si, true));
            at.entry(s.to).or_default().push((si, false));
        }
        let mut rotation = BTreeMap::new();
        for (c, darts) in at {
            assert_eq!(darts.len(), 4, "four darts at crossing {c}");
            let data = &cr.list[c];
            let side = d.arc(data.red_arc).side;
            let dir_right = |&(si, fwd): &(usize, bool)| -> bool {
                let s = &segs[si];
                let arc = if s.curve == gamma { data.red_arc } else { data.blue_arc };
                let rightward = travel_rightward(d, s.curve, arc);
                rightward == fwd
            };
            let is_red = |&(si, _): &(usize, bool)| segs[si].curve == gamma;
            let red_first_among_right = match (side, data.geo.a_above_right) {
                (Side::Above, true) => false,
                (Side::Above, false) => true,
                (Side::Below, true) => true,
                (Side::Below, false) => false,
            };
            let pick = |want_red: bool, want_right: bool| -> Dart {
                *darts
                    .iter()
                    .find(|dd| is_red(dd) == want_red && dir_right(dd) == want_right)
                    .unwrap_or_else(|| panic!("missing dart at crossing {c}"))
            };
            let order = if red_first_among_right {
                vec![pick(true, true), pick(false, true), pick(true, false), pick(false, false)]
            } else {
                vec![pick(false, true), pick(true, true), pick(false, false), pick(true, false)]
            };
            rotation.insert(c, order);
        }
        SubArr { segs, rotation, stretch_owner, sub_on_arc }
    }

    fn next_in_face(&self, dart: Dart) -> Dart {
        let head = if dart.1 { self.segs[dart.0].to } else { self.segs[dart.0].from };
        let rot = &self.rotation[&head];
        let rev = (dart.0, !dart.1);
        let pos = rot.iter().position(|d| *d == rev).expect("dart at head");
        rot[(pos + rot.len() - 1) % rot.len()]
    }

    fn left_probe(&self, dart: Dart) -> Probe {
        let s = &self.segs[dart.0];
        let rightward = s.rightward_at_sample == dart.1;
        if rightward {
            Probe::above_arc(s.sample_arc, s.sample_x.clone())
        } else {
            Probe::below_arc(s.sample_arc, s.sample_x.clone())
        }
    }

    /// Subsegment owning the point `(arc, x)`.
    fn subseg_at(&self, cr: &Crossings, arc: ArcId, x: &Q) -> usize {
        let on = self.sub_on_arc.get(&arc).expect("arc in subarrangement");
        let mut idx = 0usize;
        for r in on {
            if cr.list[*r].geo.hi < *x {
                idx += 1;
            } else if cr.list[*r].geo.lo <= *x && *x <= cr.list[*r].geo.hi {
                panic!("point inside a crossing interval");
            }
        }
        self.stretch_owner[&(arc, idx)]
    }
}

fn travel_rightward(d: &AxisDiagram, l: LoopId, arc: ArcId) -> bool {
    let trav = d.traversal(l);
    let (_, rev) = trav.iter().find(|(a, _)| *a == arc).expect("arc in loop");
    !rev
}

/// Sample right after crossing `from` along the traversal of `curve`.
fn segment_sample(
    d: &AxisDiagram,
    cr: &Crossings,
    curve: LoopId,
    from: CrossingRef,
) -> (ArcId, Q, bool) {
    let c = &cr.list[from];
    let a0 = if d.loops[curve].arcs.contains(&c.red_arc) { c.red_arc } else { c.blue_arc };
    let rev = !travel_rightward(d, curve, a0);
    let mut on: Vec<CrossingRef> = cr.on_arc(a0).to_vec();
    if rev {
        on.reverse();
    }
    let pos = on.iter().position(|r| *r == from).expect("crossing on arc");
    let arc = d.arc(a0);
    let (lo, hi) = if !rev {
        let next = on
            .get(pos + 1)
            .map(|r| cr.list[*r].geo.lo.clone())
            .unwrap_or_else(|| arc.right.clone());
        (c.geo.hi.clone(), next)
    } else {
        let next = on
            .get(pos + 1)
            .map(|r| cr.list[*r].geo.hi.clone())
            .unwrap_or_else(|| arc.left.clone());
        (next, c.geo.lo.clone())
    };
    assert!(lo < hi, "degenerate sample window");
    let w = &hi - &lo;
    for (n, dd) in [(1i64, 2i64), (7, 16), (9, 16), (5, 16), (11, 16), (3, 16), (13, 16), (21, 64), (43, 64)] {
        let x = &lo + &w * Q::new(n.into(), dd.into());
        if d.arcs_above(&Probe::above_arc(a0, x.clone())).is_ok()
            && d.arcs_above(&Probe::below_arc(a0, x.clone())).is_ok()
            && d.segment_style(cr, a0, &x).is_ok()
        {
            return (a0, x, !rev);
        }
    }
    panic!("no generic sample in segment window");
}

/// Compute the membrane structure of red loop `gamma`.
pub fn membrane_structure(d: &AxisDiagram, cr: &Crossings, gamma: LoopId) -> MembraneStructure {
    assert_eq!(d.loops[gamma].color, ColorRB::Red);
    let mut comp_blues: Vec<LoopId> = Vec::new();
    for b in d.blue_loops() {
        let crosses = cr.list.iter().any(|c| {
            d.loops[gamma].arcs.contains(&c.red_arc) && d.loops[b].arcs.contains(&c.blue_arc)
        });
        if crosses {
            comp_blues.push(b);
        }
    }

    let acw = d.is_acw(gamma);
    let survives_at = |p: &Probe| -> bool {
        let containing = d.loops_containing(p).expect("generic probe");
        let b = containing.iter().filter(|l| d.loops[**l].color == ColorRB::Blue).count();
        let mut depth = 1usize;
        for &eta in containing.iter().filter(|l| d.loops[**l].color == ColorRB::Red) {
            if eta != gamma && d.curve_inside(gamma, eta).expect("containment") {
                depth += 1;
            }
        }
        ((b + depth) % 2 == 0) == acw
    };

    let mut atoms: Vec<Atom> = Vec::new();
    let mut rim: Vec<(SegmentStyle, AtomId)> = Vec::new();
    let mut chords: Vec<Chord> = Vec::new();

    let sub = if comp_blues.is_empty() { None } else { Some(SubArr::build(d, cr, gamma, &comp_blues)) };

    // traced faces
    let mut dart_face: BTreeMap<Dart, Option<AtomId>> = BTreeMap::new();
    if let Some(sub) = &sub {
        let all_darts: Vec<Dart> = (0..sub.segs.len()).flat_map(|s| [(s, true), (s, false)]).collect();
        let mut face_of: BTreeMap<Dart, usize> = BTreeMap::new();
        let mut n_faces = 0usize;
        for &start in &all_darts {
            if face_of.contains_key(&start) {
                continue;
            }
            let id = n_faces;
            n_faces += 1;
            let mut dart = start;
            loop {
                face_of.insert(dart, id);
                dart = sub.next_in_face(dart);
                if dart == start {
                    break;
                }
            }
        }
        let mut face_atom: Vec<Option<Option<AtomId>>> = vec![None; n_faces];
        for &dart in &all_darts {
            let f = face_of[&dart];
            if face_atom[f].is_none() {
                let probe = sub.left_probe(dart);
                let inside = d
                    .loops_containing(&probe)
                    .expect("generic probe")
                    .contains(&gamma);
                if inside {
                    let survives = survives_at(&probe);
                    atoms.push(Atom::Face { survives });
                    face_atom[f] = Some(Some(atoms.len() - 1));
                } else {
                    face_atom[f] = Some(None);
                }
            }
        }
        for &dart in &all_darts {
            dart_face.insert(dart, face_atom[face_of[&dart]].unwrap());
        }

        // rim entries in traversal order of gamma's subsegments
        for (si, s) in sub.segs.iter().enumerate() {
            if s.curve != gamma {
                continue;
            }
            let style = d.segment_style(cr, s.sample_arc, &s.sample_x).expect("rim style");
            let atom = dart_face[&(si, true)]
                .or(dart_face[&(si, false)])
                .expect("one side of the rim is inside");
            rim.push((style, atom));
        }

        // chords
        for (si, s) in sub.segs.iter().enumerate() {
            if s.curve == gamma {
                continue;
            }
            let on_curve = d
                .loops_containing(&Probe::above_arc(s.sample_arc, s.sample_x.clone()))
                .expect("generic");
            if !on_curve.contains(&gamma) {
                continue;
            }
            let left = dart_face[&(si, true)].expect("chord side inside");
            let right = dart_face[&(si, false)].expect("chord side inside");
            let red_atom = match (atoms[left].survives(), atoms[right].survives()) {
                (true, false) => left,
                (false, true) => right,
                other => panic!("exactly one side of a chord survives, got {other:?}"),
            };
            chords.push(Chord {
                blue: s.curve,
                start: s.from,
                end: s.to,
                red_atom,
                sample_arc: s.sample_arc,
                sample_x: s.sample_x.clone(),
            });
        }
    } else {
        // uncut membrane: a single face
        let arc0 = d.loops[gamma].arcs[0];
        let x = d.generic_sample(arc0);
        let probe = inside_probe_of(d, gamma, arc0, &x);
        let survives = survives_at(&probe);
        atoms.push(Atom::Face { survives });
        let style = d.segment_style(cr, arc0, &x).expect("style");
        rim.push((style, 0));
    }

    // lone blue curves inside the region
    let lone: Vec<LoopId> = d
        .blue_loops()
        .filter(|b| !comp_blues.contains(b))
        .filter(|b| d.curve_inside(*b, gamma).expect("containment"))
        .collect();
    let mut parent: BTreeMap<LoopId, Option<LoopId>> = BTreeMap::new();
    for &b in &lone {
        let mut best: Option<LoopId> = None;
        for &c in &lone {
            if c != b && d.curve_inside(b, c).expect("containment") {
                best = match best {
                    None => Some(c),
                    Some(cur) if d.curve_inside(c, cur).expect("containment") => Some(c),
                    other => other,
                };
            }
        }
        parent.insert(b, best);
    }
    let mut interior_atom: BTreeMap<LoopId, AtomId> = BTreeMap::new();
    for &b in &lone {
        let arc = d.loops[b].arcs[0];
        let x = d.generic_sample(arc);
        let probe = inside_probe_of(d, b, arc, &x);
        let survives = survives_at(&probe);
        atoms.push(Atom::LoneInterior { blue: b, survives });
        interior_atom.insert(b, atoms.len() - 1);
    }
    let mut enclosures = Vec::new();
    for &b in &lone {
        let outside_atom = match parent[&b] {
            Some(p) => interior_atom[&p],
            None => match (&sub, rim.first()) {
                (None, Some((_, atom))) => *atom,
                (Some(sub), _) => {
                    let arc = d.loops[b].arcs[0];
                    let x = d.generic_sample(arc);
                    let probe = outside_probe_of(d, b, arc, &x);
                    face_below_first_arc(d, cr, sub, &dart_face, &probe, gamma, &comp_blues)
                }
                _ => unreachable!(),
            },
        };
        enclosures.push(Enclosure { blue: b, outside_atom, inside_atom: interior_atom[&b] });
    }

    MembraneStructure { gamma, atoms, rim, chords, enclosures }
}

fn inside_probe_of(d: &AxisDiagram, l: LoopId, arc: ArcId, x: &Q) -> Probe {
    let above = Probe::above_arc(arc, x.clone());
    if d.loops_containing(&above).expect("generic").contains(&l) {
        above
    } else {
        Probe::below_arc(arc, x.clone())
    }
}

fn outside_probe_of(d: &AxisDiagram, l: LoopId, arc: ArcId, x: &Q) -> Probe {
    let above = Probe::above_arc(arc, x.clone());
    if !d.loops_containing(&above).expect("generic").contains(&l) {
        above
    } else {
        Probe::below_arc(arc, x.clone())
    }
}

/// The traced-face atom containing `probe`, found by shooting a ray up to the
/// first subarrangement arc and taking the face below it.
fn face_below_first_arc(
    d: &AxisDiagram,
    cr: &Crossings,
    sub: &SubArr,
    dart_face: &BTreeMap<Dart, Option<AtomId>>,
    probe: &Probe,
    gamma: LoopId,
    comp_blues: &[LoopId],
) -> AtomId {
    let sub_loops: Vec<LoopId> = std::iter::once(gamma).chain(comp_blues.iter().copied()).collect();
    let above = d.arcs_above(probe).expect("generic probe");
    let candidates: Vec<ArcId> = above
        .into_iter()
        .filter(|a| sub_loops.contains(&d.loop_of_arc(*a)))
        .collect();
    let first = candidates
        .into_iter()
        .min_by(|a, b| height_sq(d.arc(*a), &probe.x).cmp(&height_sq(d.arc(*b), &probe.x)))
        .expect("probe lies under a subarrangement arc");
    let si = sub.subseg_at(cr, first, &probe.x);
    // dart traveling leftward at probe.x: its left side faces downward
    let curve = sub.segs[si].curve;
    let rightward_fwd = travel_rightward(d, curve, first);
    let dart = (si, !rightward_fwd);
    dart_face[&dart].expect("face below the arc is inside the region")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::build::*;
    use crate::planar::q;

    #[test]
    fn membrane_of_lone_circles() {
        // solid clockwise circle: one surviving face
        let mut d = AxisDiagram::new();
        add_cw_circle(&mut d, ColorRB::Red, q(0), q(10), 0);
        let cr = d.crossings();
        let m = membrane_structure(&d, &cr, 0);
        assert_eq!(m.atoms.len(), 1);
        assert!(m.atoms[0].survives());
        assert_eq!(m.rim.len(), 1);
        assert_eq!(m.rim[0].0, SegmentStyle::Solid);
        // dashed anticlockwise circle: one erased face
        let mut d2 = AxisDiagram::new();
        add_acw_circle(&mut d2, ColorRB::Red, q(0), q(10), 0);
        let cr2 = d2.crossings();
        let m2 = membrane_structure(&d2, &cr2, 0);
        assert!(!m2.atoms[0].survives());
        assert_eq!(m2.rim[0].0, SegmentStyle::Dashed);
    }

    #[test]
    fn membrane_with_enclosed_blue() {
        // anticlockwise dashed red circle around a blue circle: the inner
        // face survives, the annulus is erased
        let mut d = AxisDiagram::new();
        add_acw_circle(&mut d, ColorRB::Red, q(0), q(10), 0);
        add_cw_circle(&mut d, ColorRB::Blue, q(2), q(8), 0);
        let d = complete(&d);
        let cr = d.crossings();
        let m = membrane_structure(&d, &cr, 0);
        assert_eq!(m.enclosures.len(), 1);
        assert_eq!(m.chords.len(), 0);
        let inner = &m.atoms[m.enclosures[0].inside_atom];
        let outer = &m.atoms[m.enclosures[0].outside_atom];
        assert!(inner.survives());
        assert!(!outer.survives());
    }

    #[test]
    fn membrane_with_chords() {
        // theta-like: flat red loop through a blue circle's anchor
        let mut d = AxisDiagram::new();
        add_cw_circle(&mut d, ColorRB::Blue, q(2), q(8), 0);
        add_cw_circle(&mut d, ColorRB::Red, q(0), q(5), 1);
        d.validate().unwrap();
        let cr = d.crossings();
        let m = membrane_structure(&d, &cr, 1);
        // the blue curve enters the membrane region through two crossings
        assert_eq!(m.chords.len(), 1, "one chord: {:?}", m.chords);
        assert_eq!(m.enclosures.len(), 0);
        // the chord splits the membrane into two faces; exactly one survives
        let surviving = m.atoms.iter().filter(|a| a.survives()).count();
        assert_eq!(m.atoms.len(), 2);
        assert_eq!(surviving, 1);
        // rim: two segments, alternating styles
        assert_eq!(m.rim.len(), 2);
        assert_ne!(m.rim[0].0, m.rim[1].0);
    }

    #[test]
    fn nested_membranes_depths() {
        // red around red around point: inner membrane faces
        let mut d = AxisDiagram::new();
        add_cw_circle(&mut d, ColorRB::Red, q(0), q(12), 0);
        add_cw_circle(&mut d, ColorRB::Red, q(2), q(10), 0);
        let cr = d.crossings();
        let outer = membrane_structure(&d, &cr, 0);
        let inner = membrane_structure(&d, &cr, 1);
        // outer solid cw circle: face survives (depth 1, b=0)
        assert!(outer.atoms[0].survives());
        // inner circle: depth 2, b=0: even parity; cw (acw=false): erased
        assert!(!inner.atoms[0].survives());
        // the inner circle's own style must then be dashed
        assert_eq!(inner.rim[0].0, SegmentStyle::Dashed);
    }
}

//! Randomized surgery instances of the defining foam relations, checked in
//! the kernel of the evaluation map.
//!
//! Each instance is a pair of formal combinations of closed foams that the
//! relation asserts equal. Instances embed the relation's local picture into
//! a randomized closed context.

use num::bigint::BigInt;
use rand::Rng;

use crate::coefficients::GroundElem;
use crate::foam::{evaluate_unchecked, BlueComponent, ClosedFoamData, RedComponent, Sign};

#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub name: &'static str,
    pub lhs: Vec<(GroundElem, ClosedFoamData)>,
    pub rhs: Vec<(GroundElem, ClosedFoamData)>,
}

impl RelationInstance {
    pub fn holds(&self) -> bool {
        self.eval_side(&self.lhs) == self.eval_side(&self.rhs)
    }

    fn eval_side(&self, side: &[(GroundElem, ClosedFoamData)]) -> GroundElem {
        let mut acc = GroundElem::zero();
        for (c, f) in side {
            acc += c * &evaluate_unchecked(f);
        }
        acc
    }
}

/// A random valid closed foam with at least `min_blue` blue components.
pub fn random_closed_foam(rng: &mut impl Rng, min_blue: usize) -> ClosedFoamData {
    let n_bindings = rng.gen_range(0..=4u32);
    let ids: Vec<u32> = (0..n_bindings).collect();

    // Red components: partition bindings, plus occasional closed components.
    let mut red: Vec<RedComponent> = Vec::new();
    let mut pool = ids.clone();
    while !pool.is_empty() {
        let take = rng.gen_range(1..=pool.len());
        let boundary: Vec<u32> = pool.drain(..take).collect();
        red.push(RedComponent { genus: rng.gen_range(0..=1), boundary });
    }
    for _ in 0..rng.gen_range(0..=1) {
        red.push(RedComponent { genus: rng.gen_range(0..=1), boundary: vec![] });
    }

    // Blue components: partition the signed circles.
    let mut circles: Vec<(u32, Sign)> = ids
        .iter()
        .flat_map(|i| [(*i, Sign::Plus), (*i, Sign::Minus)])
        .collect();
    // shuffle
    for i in (1..circles.len()).rev() {
        circles.swap(i, rng.gen_range(0..=i));
    }
    let mut blue: Vec<BlueComponent> = Vec::new();
    while !circles.is_empty() {
        let take = rng.gen_range(1..=circles.len());
        let boundary: Vec<(u32, Sign)> = circles.drain(..take).collect();
        blue.push(BlueComponent {
            genus: rng.gen_range(0..=1),
            dots: rng.gen_range(0..=1),
            dual_dots: rng.gen_range(0..=1),
            boundary,
        });
    }
    while blue.len() < min_blue {
        blue.push(BlueComponent {
            genus: rng.gen_range(0..=1),
            dots: rng.gen_range(0..=2),
            dual_dots: 0,
            boundary: vec![],
        });
    }
    let foam = ClosedFoamData { blue, red };
    debug_assert!(foam.validate().is_ok());
    foam
}

fn with_dot(f: &ClosedFoamData, comp: usize) -> ClosedFoamData {
    let mut g = f.clone();
    g.blue[comp].dots += 1;
    g
}

fn with_dual_dot(f: &ClosedFoamData, comp: usize) -> ClosedFoamData {
    let mut g = f.clone();
    g.blue[comp].dual_dots += 1;
    g
}

fn merge_blue(f: &ClosedFoamData, i: usize, j: usize) -> ClosedFoamData {
    assert_ne!(i, j);
    let mut g = f.clone();
    let (lo, hi) = (i.min(j), i.max(j));
    let removed = g.blue.remove(hi);
    let target = &mut g.blue[lo];
    target.genus += removed.genus;
    target.dots += removed.dots;
    target.dual_dots += removed.dual_dots;
    target.boundary.extend(removed.boundary);
    g
}

/// Separating blue neck cutting: joining two components with a tube equals
/// dot-on-one plus dot-on-other minus h times the cut foam.
pub fn neck_cutting_separating(rng: &mut impl Rng) -> RelationInstance {
    let f = random_closed_foam(rng, 2);
    let i = rng.gen_range(0..f.blue.len());
    let mut j = rng.gen_range(0..f.blue.len());
    while j == i {
        j = rng.gen_range(0..f.blue.len());
    }
    RelationInstance {
        name: "neck-cutting (separating)",
        lhs: vec![(GroundElem::one(), merge_blue(&f, i, j))],
        rhs: vec![
            (GroundElem::one(), with_dot(&f, i)),
            (GroundElem::one(), with_dot(&f, j)),
            (-GroundElem::h(), f),
        ],
    }
}

/// Non-separating blue neck cutting: a genus handle equals twice a dot minus h.
pub fn neck_cutting_genus(rng: &mut impl Rng) -> RelationInstance {
    let f = random_closed_foam(rng, 1);
    let i = rng.gen_range(0..f.blue.len());
    let mut lhs = f.clone();
    lhs.blue[i].genus += 1;
    RelationInstance {
        name: "neck-cutting (genus)",
        lhs: vec![(GroundElem::one(), lhs)],
        rhs: vec![(GroundElem::int(2), with_dot(&f, i)), (-GroundElem::h(), f)],
    }
}

/// Red neck cutting carries a sign: a red tube equals minus the cut foam.
pub fn red_neck_cutting(rng: &mut impl Rng) -> RelationInstance {
    let f = random_closed_foam(rng, 1);
    if f.red.len() >= 2 {
        let mut merged = f.clone();
        let removed = merged.red.remove(1);
        merged.red[0].genus += removed.genus;
        merged.red[0].boundary.extend(removed.boundary);
        RelationInstance {
            name: "neck-cutting (red)",
            lhs: vec![(GroundElem::one(), merged)],
            rhs: vec![(-GroundElem::one(), f)],
        }
    } else {
        // genus form: cutting a handle drops the genus by one
        let mut base = f;
        base.red.push(RedComponent { genus: 0, boundary: vec![] });
        let mut lhs = base.clone();
        let last = lhs.red.len() - 1;
        lhs.red[last].genus += 1;
        RelationInstance {
            name: "neck-cutting (red)",
            lhs: vec![(GroundElem::one(), lhs)],
            rhs: vec![(-GroundElem::one(), base)],
        }
    }
}

/// Dot reduction `X^2 = hX + t` on any blue component.
pub fn dot_reduction(rng: &mut impl Rng) -> RelationInstance {
    let f = random_closed_foam(rng, 1);
    let i = rng.gen_range(0..f.blue.len());
    RelationInstance {
        name: "dot reduction",
        lhs: vec![(GroundElem::one(), with_dot(&with_dot(&f, i), i))],
        rhs: vec![(GroundElem::h(), with_dot(&f, i)), (GroundElem::t(), f)],
    }
}

/// Dual-dot reduction `conj(X)^2 = h conj(X) + t`.
pub fn dual_dot_reduction(rng: &mut impl Rng) -> RelationInstance {
    let f = random_closed_foam(rng, 1);
    let i = rng.gen_range(0..f.blue.len());
    RelationInstance {
        name: "dual-dot reduction",
        lhs: vec![(GroundElem::one(), with_dual_dot(&with_dual_dot(&f, i), i))],
        rhs: vec![(GroundElem::h(), with_dual_dot(&f, i)), (GroundElem::t(), f)],
    }
}

fn comp_with(f: &ClosedFoamData, id: u32, sign: Sign) -> usize {
    f.blue
        .iter()
        .position(|b| b.boundary.iter().any(|(i, s)| *i == id && *s == sign))
        .expect("validated binding")
}

/// Dot moving through a binding: a dot on the positive facet equals `h` times
/// the plain foam minus a dot on the negative facet.
pub fn dot_moving(rng: &mut impl Rng) -> RelationInstance {
    let mut f = random_closed_foam(rng, 1);
    while f.bindings().is_empty() {
        f = random_closed_foam(rng, 1);
    }
    let ids = f.bindings();
    let id = ids[rng.gen_range(0..ids.len())];
    let p = comp_with(&f, id, Sign::Plus);
    let n = comp_with(&f, id, Sign::Minus);
    RelationInstance {
        name: "dot moving",
        lhs: vec![(GroundElem::one(), with_dot(&f, p))],
        rhs: vec![(GroundElem::h(), f.clone()), (-GroundElem::one(), with_dot(&f, n))],
    }
}

/// Dual-dot form of neck cutting: the tube equals dot-on-one minus
/// dual-dot-on-the-other, either way around.
pub fn neck_cutting_dual_form(rng: &mut impl Rng) -> RelationInstance {
    let f = random_closed_foam(rng, 2);
    let i = rng.gen_range(0..f.blue.len());
    let mut j = rng.gen_range(0..f.blue.len());
    while j == i {
        j = rng.gen_range(0..f.blue.len());
    }
    let (i, j) = if rng.gen() { (i, j) } else { (j, i) };
    RelationInstance {
        name: "neck-cutting (dual-dot form)",
        lhs: vec![(GroundElem::one(), merge_blue(&f, i, j))],
        rhs: vec![
            (GroundElem::one(), with_dot(&f, i)),
            (-GroundElem::one(), with_dual_dot(&f, j)),
        ],
    }
}

/// Detaching a red cylinder whose end bounds a small plain blue disk.
/// The disk on the positive side detaches freely; on the negative side the
/// detachment costs a sign.
pub fn detach_cylinder(rng: &mut impl Rng) -> RelationInstance {
    let mut base = random_closed_foam(rng, 1);
    // ensure there is a red component to extend
    if base.red.is_empty() {
        base.red.push(RedComponent { genus: 0, boundary: vec![] });
    }
    let rhs = base.clone();
    let sigma = if rng.gen() { Sign::Plus } else { Sign::Minus };
    let fresh = base.bindings().iter().max().map(|m| m + 1).unwrap_or(0);
    base.blue.push(BlueComponent { genus: 0, dots: 0, dual_dots: 0, boundary: vec![(fresh, sigma)] });
    let host = rng.gen_range(0..base.blue.len() - 1);
    base.blue[host].boundary.push((fresh, sigma.flip()));
    let r = rng.gen_range(0..base.red.len());
    base.red[r].boundary.push(fresh);
    let sign = match sigma {
        Sign::Plus => 1,
        Sign::Minus => -1,
    };
    RelationInstance {
        name: "detach cylinder",
        lhs: vec![(GroundElem::one(), base)],
        rhs: vec![(GroundElem::int(sign), rhs)],
    }
}

/// A red membrane disk capping a plain blue disk (cup-vs-disk and the
/// red-cap-vs-plane redrawing): removable at the cost of a sign read off the
/// side the plain disk attaches to.
pub fn membrane_on_disk(rng: &mut impl Rng) -> RelationInstance {
    let mut base = random_closed_foam(rng, 1);
    let rhs = base.clone();
    let sigma = if rng.gen() { Sign::Plus } else { Sign::Minus };
    let fresh = base.bindings().iter().max().map(|m| m + 1).unwrap_or(0);
    base.blue.push(BlueComponent { genus: 0, dots: 0, dual_dots: 0, boundary: vec![(fresh, sigma)] });
    let host = rng.gen_range(0..base.blue.len() - 1);
    base.blue[host].boundary.push((fresh, sigma.flip()));
    base.red.push(RedComponent { genus: 0, boundary: vec![fresh] });
    // plain disk on sigma side; membrane deleted on the right-hand side
    let sign = match sigma {
        Sign::Plus => -1,
        Sign::Minus => 1,
    };
    RelationInstance {
        name: "membrane on disk",
        lhs: vec![(GroundElem::one(), base)],
        rhs: vec![(GroundElem::int(sign), rhs)],
    }
}

/// All data-level relation generators, used by the verify suite.
pub fn generators() -> Vec<(&'static str, fn(&mut rand_chacha::ChaCha8Rng) -> RelationInstance)> {
    vec![
        ("neck-cutting-separating", neck_cutting_separating as fn(&mut _) -> _),
        ("neck-cutting-genus", neck_cutting_genus),
        ("neck-cutting-red", red_neck_cutting),
        ("neck-cutting-dual-form", neck_cutting_dual_form),
        ("dot-reduction", dot_reduction),
        ("dual-dot-reduction", dual_dot_reduction),
        ("dot-moving", dot_moving),
        ("detach-cylinder", detach_cylinder),
        ("membrane-on-disk", membrane_on_disk),
    ]
}

/// Evaluate a formal combination; exposed for the CLI.
pub fn eval_combination(side: &[(GroundElem, ClosedFoamData)]) -> GroundElem {
    let mut acc = GroundElem::zero();
    for (c, f) in side {
        acc += c * &evaluate_unchecked(f);
    }
    acc
}

pub fn eval_int(f: &ClosedFoamData) -> Option<BigInt> {
    evaluate_unchecked(f).as_int()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_relations_hold_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for (name, gen) in generators() {
            for k in 0..60 {
                let inst = gen(&mut rng);
                assert!(inst.holds(), "{name} instance {k} failed: {inst:?}");
            }
        }
    }

    #[test]
    fn random_foams_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let f = random_closed_foam(&mut rng, 0);
            assert!(f.validate().is_ok());
        }
    }
}

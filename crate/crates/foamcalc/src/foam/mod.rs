//! Closed-foam evaluation: the exact oracle every sign rule is tested against.
//!
//! A closed foam is stored combinatorially: blue components are the pieces of
//! the dotted underlying surface cut along bindings, red components the
//! surviving red facets, and the binding matching glues one positive blue
//! circle, one negative blue circle and one red circle per binding.

pub mod relations;

use std::fmt;

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coefficients::GroundElem;

/// An element of the blue circle algebra `A_b = k[X]/(X^2 - hX - t)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FrobElem {
    pub c1: GroundElem,
    pub cx: GroundElem,
}

impl FrobElem {
    pub fn zero() -> Self {
        FrobElem { c1: GroundElem::zero(), cx: GroundElem::zero() }
    }

    pub fn one() -> Self {
        FrobElem { c1: GroundElem::one(), cx: GroundElem::zero() }
    }

    pub fn x() -> Self {
        FrobElem { c1: GroundElem::zero(), cx: GroundElem::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.c1.is_zero() && self.cx.is_zero()
    }

    pub fn add(&self, other: &FrobElem) -> FrobElem {
        FrobElem {
            c1: self.c1.clone() + other.c1.clone(),
            cx: self.cx.clone() + other.cx.clone(),
        }
    }

    pub fn scale(&self, c: &GroundElem) -> FrobElem {
        FrobElem { c1: c * &self.c1, cx: c * &self.cx }
    }

    /// Multiplication, rewriting `X^2 = hX + t`.
    pub fn mul(&self, other: &FrobElem) -> FrobElem {
        let a1 = &self.c1;
        let ax = &self.cx;
        let b1 = &other.c1;
        let bx = &other.cx;
        let xx = ax * bx;
        FrobElem {
            c1: a1 * b1 + &xx * &GroundElem::t(),
            cx: a1 * bx + ax * b1 + &xx * &GroundElem::h(),
        }
    }

    /// Counit: `eps(1) = 0`, `eps(X) = 1`.
    pub fn counit(&self) -> GroundElem {
        self.cx.clone()
    }

    /// Conjugation `X -> h - X`, a ring involution.
    pub fn conjugate(&self) -> FrobElem {
        FrobElem {
            c1: self.c1.clone() + &self.cx * &GroundElem::h(),
            cx: -self.cx.clone(),
        }
    }

    /// Comultiplication into pairs `(left symbol, right symbol, coefficient)`,
    /// where `false` stands for `1` and `true` for `X`.
    pub fn comult(&self) -> Vec<(bool, bool, GroundElem)> {
        // Delta(1) = 1(x)X + X(x)1 - h 1(x)1, Delta(X) = X(x)X + t 1(x)1
        let mut out = Vec::new();
        if !self.c1.is_zero() {
            out.push((false, true, self.c1.clone()));
            out.push((true, false, self.c1.clone()));
            out.push((false, false, -(&self.c1 * &GroundElem::h())));
        }
        if !self.cx.is_zero() {
            out.push((true, true, self.cx.clone()));
            out.push((false, false, &self.cx * &GroundElem::t()));
        }
        out
    }

    /// The genus-one handle operator: multiplication by `2X - h`.
    pub fn handle(&self) -> FrobElem {
        let two_x_minus_h = FrobElem {
            c1: -GroundElem::h(),
            cx: GroundElem::int(2),
        };
        self.mul(&two_x_minus_h)
    }
}

impl fmt::Debug for FrobElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})X", self.c1, self.cx)
    }
}

pub type BindingId = u32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A connected piece of the dotted blue surface, cut along bindings.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlueComponent {
    pub genus: u32,
    #[serde(default)]
    pub dots: u32,
    #[serde(default)]
    pub dual_dots: u32,
    #[serde(default)]
    pub boundary: Vec<(BindingId, Sign)>,
}

/// A connected surviving red facet.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RedComponent {
    pub genus: u32,
    #[serde(default)]
    pub boundary: Vec<BindingId>,
}

/// Combinatorial data of a closed foam.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ClosedFoamData {
    pub blue: Vec<BlueComponent>,
    pub red: Vec<RedComponent>,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum FoamDataError {
    #[error("binding {0} occurs {1} times with sign + on blue boundaries (expected exactly 1)")]
    BluePlus(BindingId, usize),
    #[error("binding {0} occurs {1} times with sign - on blue boundaries (expected exactly 1)")]
    BlueMinus(BindingId, usize),
    #[error("binding {0} occurs {1} times on red boundaries (expected exactly 1)")]
    Red(BindingId, usize),
    #[error("too many bindings for the evaluator (max 32)")]
    TooManyBindings,
}

impl ClosedFoamData {
    pub fn closed_blue_sphere(dots: u32, dual_dots: u32) -> Self {
        ClosedFoamData {
            blue: vec![BlueComponent { genus: 0, dots, dual_dots, boundary: vec![] }],
            red: vec![],
        }
    }

    pub fn closed_blue_surface(genus: u32, dots: u32) -> Self {
        ClosedFoamData {
            blue: vec![BlueComponent { genus, dots, dual_dots: 0, boundary: vec![] }],
            red: vec![],
        }
    }

    pub fn red_sphere() -> Self {
        ClosedFoamData {
            blue: vec![],
            red: vec![RedComponent { genus: 0, boundary: vec![] }],
        }
    }

    /// Blue sphere with an equatorial red membrane; the dot, if any, sits on
    /// the hemisphere with the given boundary sign.
    pub fn membrane_sphere(dot_on: Option<Sign>) -> Self {
        let dot = |s: Sign| u32::from(dot_on == Some(s));
        ClosedFoamData {
            blue: vec![
                BlueComponent { genus: 0, dots: dot(Sign::Plus), dual_dots: 0, boundary: vec![(0, Sign::Plus)] },
                BlueComponent { genus: 0, dots: dot(Sign::Minus), dual_dots: 0, boundary: vec![(0, Sign::Minus)] },
            ],
            red: vec![RedComponent { genus: 0, boundary: vec![0] }],
        }
    }

    pub fn bindings(&self) -> Vec<BindingId> {
        let mut ids: Vec<BindingId> = self.red.iter().flat_map(|r| r.boundary.iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn validate(&self) -> Result<(), FoamDataError> {
        let mut ids: Vec<BindingId> = Vec::new();
        for r in &self.red {
            ids.extend(r.boundary.iter().copied());
        }
        for b in &self.blue {
            ids.extend(b.boundary.iter().map(|(i, _)| *i));
        }
        ids.sort_unstable();
        ids.dedup();
        if ids.len() > 32 {
            return Err(FoamDataError::TooManyBindings);
        }
        for id in ids {
            let plus = self
                .blue
                .iter()
                .flat_map(|b| &b.boundary)
                .filter(|(i, s)| *i == id && *s == Sign::Plus)
                .count();
            if plus != 1 {
                return Err(FoamDataError::BluePlus(id, plus));
            }
            let minus = self
                .blue
                .iter()
                .flat_map(|b| &b.boundary)
                .filter(|(i, s)| *i == id && *s == Sign::Minus)
                .count();
            if minus != 1 {
                return Err(FoamDataError::BlueMinus(id, minus));
            }
            let red = self
                .red
                .iter()
                .flat_map(|r| &r.boundary)
                .filter(|i| **i == id)
                .count();
            if red != 1 {
                return Err(FoamDataError::Red(id, red));
            }
        }
        Ok(())
    }

    /// Degree of the closed foam: `-chi(S_b) + 2 dots` (dual dots count as
    /// dots for the top-degree term; both have degree 2).
    pub fn degree(&self) -> i64 {
        let mut chi: i64 = 0;
        let mut dots: i64 = 0;
        for b in &self.blue {
            chi += 2 - 2 * (b.genus as i64) - b.boundary.len() as i64;
            dots += (b.dots + b.dual_dots) as i64;
        }
        -chi + 2 * dots
    }
}

/// Decoration of a blue component as an `A_b` element:
/// `(2X-h)^genus * X^dots * (h-X)^dual_dots`.
fn component_label(comp: &BlueComponent) -> FrobElem {
    let mut a = FrobElem::one();
    for _ in 0..comp.genus {
        a = a.handle();
    }
    for _ in 0..comp.dots {
        a = a.mul(&FrobElem::x());
    }
    let dual = FrobElem::x().conjugate();
    for _ in 0..comp.dual_dots {
        a = a.mul(&dual);
    }
    a
}

/// Pairing applied per binding: `(x, y) -> eps(x * conj(y))` on symbols.
/// With `false = 1`, `true = X` this is `(1,1) -> 0`, `(1,X) -> -1`,
/// `(X,1) -> 1`, `(X,X) -> 0` independently of `h` and `t`.
fn binding_factor(x: bool, y: bool) -> i64 {
    match (x, y) {
        (false, false) => 0,
        (false, true) => -1,
        (true, false) => 1,
        (true, true) => 0,
    }
}

/// The Blanchet evaluation of a closed foam, an element of `Z[h,t]`.
pub fn evaluate(foam: &ClosedFoamData) -> Result<GroundElem, FoamDataError> {
    foam.validate()?;

    // Scalar from the red TQFT: each red component with k boundary circles
    // contributes (-1)^(genus + k + 1).
    let mut scalar = GroundElem::one();
    for r in &foam.red {
        let e = r.genus as usize + r.boundary.len() + 1;
        if e % 2 == 1 {
            scalar = -scalar;
        }
    }

    // Closed blue components evaluate through the counit.
    for b in foam.blue.iter().filter(|b| b.boundary.is_empty()) {
        scalar = &scalar * &component_label(b).counit();
    }
    if scalar.is_zero() {
        return Ok(GroundElem::zero());
    }

    // Slots: one per (binding, sign). Bit set in a mask means the slot holds X.
    let bindings = foam.bindings();
    let slot = |id: BindingId, s: Sign| -> usize {
        let idx = bindings.binary_search(&id).expect("validated binding");
        2 * idx + usize::from(s == Sign::Minus)
    };

    // Tensor of all open blue components, built one component at a time.
    let mut tensor: Vec<(u64, GroundElem)> = vec![(0, scalar)];
    for comp in foam.blue.iter().filter(|b| !b.boundary.is_empty()) {
        let local = comult_iter(&component_label(comp), comp.boundary.len());
        let mut next: Vec<(u64, GroundElem)> = Vec::with_capacity(tensor.len() * local.len());
        for (mask, coeff) in &tensor {
            for (lmask, lcoeff) in &local {
                let mut gmask = *mask;
                for (i, (id, s)) in comp.boundary.iter().enumerate() {
                    if lmask & (1 << i) != 0 {
                        gmask |= 1 << slot(*id, *s);
                    }
                }
                next.push((gmask, coeff * lcoeff));
            }
        }
        tensor = merge_terms(next);
    }

    // Contract every binding.
    let mut total = GroundElem::zero();
    for (mask, coeff) in tensor {
        let mut factor = 1i64;
        for id in &bindings {
            let x = mask & (1 << slot(*id, Sign::Plus)) != 0;
            let y = mask & (1 << slot(*id, Sign::Minus)) != 0;
            factor *= binding_factor(x, y);
            if factor == 0 {
                break;
            }
        }
        if factor != 0 {
            total += coeff.scale(factor);
        }
    }
    Ok(total)
}

/// Iterated comultiplication of `a` into `k >= 1` tensor slots.
/// Returns `(mask, coefficient)` pairs where bit `i` set means slot `i`
/// holds `X` rather than `1`.
fn comult_iter(a: &FrobElem, k: usize) -> Vec<(u64, GroundElem)> {
    assert!(k >= 1);
    let mut terms: Vec<(u64, GroundElem)> = Vec::new();
    if !a.c1.is_zero() {
        terms.push((0, a.c1.clone()));
    }
    if !a.cx.is_zero() {
        terms.push((1, a.cx.clone()));
    }
    for next_slot in 1..k {
        let last = next_slot - 1;
        let mut out: Vec<(u64, GroundElem)> = Vec::new();
        for (mask, coeff) in &terms {
            let sym = FrobElem {
                c1: if mask & (1 << last) == 0 { GroundElem::one() } else { GroundElem::zero() },
                cx: if mask & (1 << last) != 0 { GroundElem::one() } else { GroundElem::zero() },
            };
            for (l, r, c) in sym.comult() {
                let mut m = *mask & !(1 << last);
                if l {
                    m |= 1 << last;
                }
                if r {
                    m |= 1 << next_slot;
                }
                out.push((m, coeff * &c));
            }
        }
        terms = merge_terms(out);
    }
    terms
}

fn merge_terms(terms: Vec<(u64, GroundElem)>) -> Vec<(u64, GroundElem)> {
    let mut map: std::collections::BTreeMap<u64, GroundElem> = std::collections::BTreeMap::new();
    for (m, c) in terms {
        let entry = map.entry(m).or_insert_with(GroundElem::zero);
        *entry += c;
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Shortcut used in tests and the CLI: evaluate and panic on invalid data.
pub fn evaluate_unchecked(foam: &ClosedFoamData) -> GroundElem {
    evaluate(foam).expect("invalid closed foam data")
}

/// Integer value of an evaluation known to be constant; `None` if it still
/// involves `h` or `t`.
pub fn evaluate_int(foam: &ClosedFoamData) -> Option<BigInt> {
    evaluate(foam).ok().and_then(|e| e.as_int())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> GroundElem {
        GroundElem::int(n)
    }

    #[test]
    fn sphere_evaluations() {
        assert_eq!(evaluate_unchecked(&ClosedFoamData::closed_blue_sphere(0, 0)), int(0));
        assert_eq!(evaluate_unchecked(&ClosedFoamData::closed_blue_sphere(1, 0)), int(1));
        assert_eq!(evaluate_unchecked(&ClosedFoamData::red_sphere()), int(-1));
    }

    #[test]
    fn dual_dot_spheres() {
        assert_eq!(evaluate_unchecked(&ClosedFoamData::closed_blue_sphere(0, 1)), int(-1));
        assert_eq!(evaluate_unchecked(&ClosedFoamData::closed_blue_sphere(1, 1)), int(0));
        // two dual dots: conj(X)^2 = h conj(X) + t, counit = -h
        assert_eq!(
            evaluate_unchecked(&ClosedFoamData::closed_blue_sphere(0, 2)),
            -GroundElem::h()
        );
    }

    #[test]
    fn membrane_sphere_triple() {
        assert_eq!(evaluate_unchecked(&ClosedFoamData::membrane_sphere(None)), int(0));
        assert_eq!(evaluate_unchecked(&ClosedFoamData::membrane_sphere(Some(Sign::Plus))), int(1));
        assert_eq!(evaluate_unchecked(&ClosedFoamData::membrane_sphere(Some(Sign::Minus))), int(-1));
    }

    #[test]
    fn torus_counts_two() {
        assert_eq!(evaluate_unchecked(&ClosedFoamData::closed_blue_surface(1, 0)), int(2));
        // genus 2: eps((2X-h)^2) = eps(4X^2 - 4hX + h^2) = 4h - 4h = 0... compute:
        // (2X-h)^2 = 4(hX+t) - 4hX + h^2 = 4t + h^2, counit 0.
        assert_eq!(evaluate_unchecked(&ClosedFoamData::closed_blue_surface(2, 0)), int(0));
        // dotted torus: eps((2X-h)X) = eps(2hX + 2t - hX) = h
        assert_eq!(
            evaluate_unchecked(&ClosedFoamData::closed_blue_surface(1, 1)),
            GroundElem::h()
        );
    }

    #[test]
    fn red_torus() {
        let foam = ClosedFoamData {
            blue: vec![],
            red: vec![RedComponent { genus: 1, boundary: vec![] }],
        };
        assert_eq!(evaluate_unchecked(&foam), int(1));
    }

    #[test]
    fn conjugation_relations() {
        let a = FrobElem { c1: GroundElem::h(), cx: GroundElem::int(3) };
        assert_eq!(a.conjugate().conjugate(), a);
        // eps(conj a) = -eps(a)
        assert_eq!(a.conjugate().counit(), -a.counit());
        // conj is multiplicative
        let b = FrobElem { c1: GroundElem::t(), cx: GroundElem::one() };
        assert_eq!(a.conjugate().mul(&b.conjugate()), a.mul(&b).conjugate());
    }

    #[test]
    fn comult_conjugation_anticompat() {
        // Applying conj to both legs of Delta(a) equals -Delta(conj a).
        for a in [FrobElem::one(), FrobElem::x(), FrobElem { c1: GroundElem::t(), cx: GroundElem::h() }] {
            let lhs = conj_both_legs(&a.comult());
            let rhs = scale_terms(&a.conjugate().comult(), -1);
            assert_eq!(normalize(lhs), normalize(rhs), "failed for {a:?}");
        }
    }

    // Expand (sym-left, sym-right, coeff) terms in the basis {1,X}(x){1,X}
    fn normalize(terms: Vec<(bool, bool, GroundElem)>) -> Vec<((bool, bool), GroundElem)> {
        let mut map: std::collections::BTreeMap<(bool, bool), GroundElem> = Default::default();
        for (l, r, c) in terms {
            *map.entry((l, r)).or_insert_with(GroundElem::zero) += c;
        }
        map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn scale_terms(terms: &[(bool, bool, GroundElem)], s: i64) -> Vec<(bool, bool, GroundElem)> {
        terms.iter().map(|(l, r, c)| (*l, *r, c.scale(s))).collect()
    }

    fn conj_both_legs(terms: &[(bool, bool, GroundElem)]) -> Vec<(bool, bool, GroundElem)> {
        let mut out = Vec::new();
        for (l, r, c) in terms {
            let cl = if *l { FrobElem::x().conjugate() } else { FrobElem::one() };
            let cr = if *r { FrobElem::x().conjugate() } else { FrobElem::one() };
            // expand cl (x) cr with coefficient c
            for (sl, el) in [(false, cl.c1.clone()), (true, cl.cx.clone())] {
                for (sr, er) in [(false, cr.c1.clone()), (true, cr.cx.clone())] {
                    let coeff = c * &(&el * &er);
                    if !coeff.is_zero() {
                        out.push((sl, sr, coeff));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn degree_formula() {
        // closed sphere: chi = 2, degree -2; each dot +2
        assert_eq!(ClosedFoamData::closed_blue_sphere(0, 0).degree(), -2);
        assert_eq!(ClosedFoamData::closed_blue_sphere(1, 0).degree(), 0);
        assert_eq!(ClosedFoamData::closed_blue_surface(1, 0).degree(), 0);
    }
}

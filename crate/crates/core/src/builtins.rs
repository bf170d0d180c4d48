//! Registry of example structure presentations.
//!
//! All presentations here are built from small hand-rolled column machines
//! and then normalized through [`Presentation::new`], which restricts every
//! relation to tuples of domain elements.

use std::sync::Arc;

use crate::alphabet::{Alphabet, Component, TrackAlphabet};
use crate::automaton::{Automaton, Limits};
use crate::error::{Error, Result};
use crate::presentation::{product_presentation, to_binary, Presentation};
use crate::relation::RegularRelation;

fn bit(c: Component) -> u32 {
    match c {
        Component::Sym(s) => s as u32,
        Component::Pad => 0,
    }
}

/// Builds a relation of the given arity over `base` from a column-transition
/// machine, then restricts it to valid convolutions.
fn column_relation<T, FS, FA>(
    base: &Arc<Alphabet>,
    arity: usize,
    start: T,
    step: FS,
    accept: FA,
    limits: &Limits,
) -> Result<RegularRelation>
where
    T: Clone + Eq + std::hash::Hash,
    FS: Fn(&T, &[Component]) -> Option<T> + 'static,
    FA: Fn(&T) -> bool + 'static,
{
    let tracks = TrackAlphabet::new(base.clone(), arity)?;
    let t = tracks.clone();
    let aut = Automaton::build_dfa(
        tracks.symbols().clone(),
        start,
        move |st, sym| step(st, &t.components(sym)),
        move |st| accept(st),
        limits,
    )?;
    RegularRelation::from_automaton(tracks, aut, limits)
}

/// Natural numbers with addition and order, base-2 least significant bit
/// first. Zero is encoded "0"; positive numbers end in their leading 1.
pub fn presburger(limits: &Limits) -> Result<Presentation> {
    let base = Alphabet::binary();
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum D {
        Empty,
        JustZero,
        LastOne,
        LastZero,
    }
    let domain = Automaton::build_dfa(
        base.clone(),
        D::Empty,
        |&st, sym| {
            Some(match (st, sym) {
                (D::Empty, 0) => D::JustZero,
                (D::Empty, 1) => D::LastOne,
                (_, 0) => D::LastZero,
                (_, 1) => D::LastOne,
                _ => unreachable!(),
            })
        },
        |&st| matches!(st, D::JustZero | D::LastOne),
        limits,
    )?;
    // Addition: single carry bit, pads read as zero.
    let add = column_relation(
        &base,
        3,
        0u32,
        |&carry, comps| {
            let s = bit(comps[0]) + bit(comps[1]) + carry;
            if bit(comps[2]) == s % 2 {
                Some(s / 2)
            } else {
                None
            }
        },
        |&carry| carry == 0,
        limits,
    )?;
    // Order: the most significant differing bit decides, so the running
    // verdict is overwritten as long as bits differ.
    let le = column_relation(
        &base,
        2,
        true,
        |&verdict, comps| {
            let (a, b) = (bit(comps[0]), bit(comps[1]));
            Some(if a == b { verdict } else { a < b })
        },
        |&verdict| verdict,
        limits,
    )?;
    Presentation::new(
        base,
        domain,
        vec![("Add".into(), add), ("Le".into(), le)],
        limits,
    )
}

/// Arithmetic with weak divisibility: Div(w, v) holds when w encodes a power
/// of two dividing the number encoded by v.
pub fn weak_div(limits: &Limits) -> Result<Presentation> {
    let p = presburger(limits)?;
    let base = p.alphabet().clone();
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum S {
        LowZeros,
        PastOne,
    }
    let div = column_relation(
        &base,
        2,
        S::LowZeros,
        |&st, comps| match (st, comps[0], comps[1]) {
            (S::LowZeros, Component::Sym(0), Component::Sym(0)) => Some(S::LowZeros),
            (S::LowZeros, Component::Sym(0), _) => None,
            (S::LowZeros, Component::Sym(1), _) => Some(S::PastOne),
            (S::LowZeros, Component::Pad, _) => None,
            (S::PastOne, Component::Pad, _) => Some(S::PastOne),
            _ => None,
        },
        |&st| st == S::PastOne,
        limits,
    )?;
    let add = p.relation("Add")?.clone();
    Presentation::new(
        base,
        p.domain().clone(),
        vec![("Add".into(), add), ("Div".into(), div)],
        limits,
    )
}

/// Binary strings with prefix order, child maps, and the equal-length
/// relation.
pub fn word_tree(limits: &Limits) -> Result<Presentation> {
    let base = Alphabet::binary();
    let domain = Automaton::universal(base.clone());
    let prefix = column_relation(
        &base,
        2,
        true,
        |&matching, comps| match (matching, comps[0], comps[1]) {
            (true, Component::Sym(a), Component::Sym(b)) if a == b => Some(true),
            (_, Component::Pad, Component::Sym(_)) => Some(false),
            (false, Component::Pad, Component::Pad) => Some(false),
            _ => None,
        },
        |_| true,
        limits,
    )?;
    let child = |letter: usize| {
        column_relation(
            &base,
            2,
            0u8,
            move |&st, comps| match (st, comps[0], comps[1]) {
                (0, Component::Sym(a), Component::Sym(b)) if a == b => Some(0),
                (0, Component::Pad, Component::Sym(b)) if b == letter => Some(1),
                _ => None,
            },
            |&st| st == 1,
            limits,
        )
    };
    let eql = column_relation(
        &base,
        2,
        (),
        |_, comps| match (comps[0], comps[1]) {
            (Component::Sym(_), Component::Sym(_)) => Some(()),
            _ => None,
        },
        |_| true,
        limits,
    )?;
    let left = child(0)?;
    let right = child(1)?;
    Presentation::new(
        base,
        domain,
        vec![
            ("Le".into(), prefix),
            ("Left".into(), left),
            ("Right".into(), right),
            ("EqL".into(), eql),
        ],
        limits,
    )
}

/// The dense linear order of strings ending in 1 under the lexicographic
/// order (a presentation of the rationals).
pub fn rationals(limits: &Limits) -> Result<Presentation> {
    let base = Alphabet::binary();
    let domain = Automaton::build_dfa(
        base.clone(),
        false,
        |_, sym| Some(sym == 1),
        |&last_one| last_one,
        limits,
    )?;
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum L {
        Eq,
        Yes,
    }
    let le = column_relation(
        &base,
        2,
        L::Eq,
        |&st, comps| match (st, comps[0], comps[1]) {
            (L::Yes, _, _) => Some(L::Yes),
            (L::Eq, Component::Sym(a), Component::Sym(b)) if a == b => Some(L::Eq),
            (L::Eq, Component::Sym(0), Component::Sym(1)) => Some(L::Yes),
            (L::Eq, Component::Sym(1), Component::Sym(0)) => None,
            (L::Eq, Component::Pad, Component::Sym(_)) => Some(L::Yes),
            (L::Eq, Component::Sym(_), Component::Pad) => None,
            _ => None,
        },
        |_| true,
        limits,
    )?;
    Presentation::new(base, domain, vec![("Le".into(), le)], limits)
}

/// (1*; Le, S): unary strings under length order with successor.
pub fn unary_order(limits: &Limits) -> Result<Presentation> {
    let base = Alphabet::unary();
    let domain = Automaton::universal(base.clone());
    let le = column_relation(
        &base,
        2,
        (),
        |_, comps| match (comps[0], comps[1]) {
            (_, Component::Sym(_)) => Some(()),
            _ => None,
        },
        |_| true,
        limits,
    )?;
    let succ = column_relation(
        &base,
        2,
        0u8,
        |&st, comps| match (st, comps[0], comps[1]) {
            (0, Component::Sym(_), Component::Sym(_)) => Some(0),
            (0, Component::Pad, Component::Sym(_)) => Some(1),
            _ => None,
        },
        |&st| st == 1,
        limits,
    )?;
    Presentation::new(
        base,
        domain,
        vec![("Le".into(), le), ("S".into(), succ)],
        limits,
    )
}

/// (1*; Mod1..Modn): length congruences.
pub fn unary_mod(n: u32, limits: &Limits) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::Format("unary_mod needs n >= 1".into()));
    }
    let base = Alphabet::unary();
    let domain = Automaton::universal(base.clone());
    let mut relations = Vec::new();
    for k in 1..=n {
        let rel = column_relation(
            &base,
            2,
            (0u32, 0u32),
            move |&(cx, cy), comps| {
                let nx = if comps[0].is_pad() { cx } else { (cx + 1) % k };
                let ny = if comps[1].is_pad() { cy } else { (cy + 1) % k };
                Some((nx, ny))
            },
            |&(cx, cy)| cx == cy,
            limits,
        )?;
        relations.push((format!("Mod{k}"), rel));
    }
    Presentation::new(base, domain, relations, limits)
}

/// Tag of a finite-or-cofinite set encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum FinTag {
    Fin,
    Cofin,
}

/// The Boolean algebra of finite and co-finite subsets of the naturals,
/// encoded over the binary alphabet: a leading tag bit (0 finite, 1
/// cofinite) followed by the canonical bit string of the finite difference
/// set (empty or ending in 1). Tags align across tracks, which keeps the
/// operation automata small.
pub fn bomega(limits: &Limits) -> Result<Presentation> {
    let base = Alphabet::binary();
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum D {
        Start,
        TagOnly,
        LastOne,
        LastZero,
    }
    let domain = Automaton::build_dfa(
        base.clone(),
        D::Start,
        |&st, sym| {
            Some(match (st, sym) {
                (D::Start, _) => D::TagOnly,
                (_, 0) => D::LastZero,
                (_, 1) => D::LastOne,
                _ => unreachable!(),
            })
        },
        |&st| matches!(st, D::TagOnly | D::LastOne),
        limits,
    )?;

    // After the tag column fixes the case, every operation is a per-column
    // bit rule with pads read as zero.
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Op {
        Start,
        Rule(FinTag, FinTag),
    }
    let tag_of = |c: Component| match c {
        Component::Sym(0) => Some(FinTag::Fin),
        Component::Sym(1) => Some(FinTag::Cofin),
        _ => None,
    };
    let ternary = |out_tag: fn(FinTag, FinTag) -> FinTag,
                   rule: fn(FinTag, FinTag, u32, u32) -> u32| {
        column_relation(
            &base,
            3,
            Op::Start,
            move |&st, comps| match st {
                Op::Start => {
                    let (tx, ty, tz) = (tag_of(comps[0])?, tag_of(comps[1])?, tag_of(comps[2])?);
                    if out_tag(tx, ty) == tz {
                        Some(Op::Rule(tx, ty))
                    } else {
                        None
                    }
                }
                Op::Rule(tx, ty) => {
                    if bit(comps[2]) == rule(tx, ty, bit(comps[0]), bit(comps[1])) {
                        Some(st)
                    } else {
                        None
                    }
                }
            },
            |&st| matches!(st, Op::Rule(_, _)),
            limits,
        )
    };
    let join = ternary(
        |tx, ty| {
            if tx == FinTag::Cofin || ty == FinTag::Cofin {
                FinTag::Cofin
            } else {
                FinTag::Fin
            }
        },
        |tx, ty, a, b| match (tx, ty) {
            (FinTag::Fin, FinTag::Fin) => a | b,         // union of members
            (FinTag::Fin, FinTag::Cofin) => b & (1 - a), // exceptions not in the finite part
            (FinTag::Cofin, FinTag::Fin) => a & (1 - b),
            (FinTag::Cofin, FinTag::Cofin) => a & b, // common exceptions
        },
    )?;
    let meet = ternary(
        |tx, ty| {
            if tx == FinTag::Cofin && ty == FinTag::Cofin {
                FinTag::Cofin
            } else {
                FinTag::Fin
            }
        },
        |tx, ty, a, b| match (tx, ty) {
            (FinTag::Fin, FinTag::Fin) => a & b,
            (FinTag::Fin, FinTag::Cofin) => a & (1 - b), // members outside the exceptions
            (FinTag::Cofin, FinTag::Fin) => b & (1 - a),
            (FinTag::Cofin, FinTag::Cofin) => a | b,
        },
    )?;
    let compl = column_relation(
        &base,
        2,
        Op::Start,
        move |&st, comps| match st {
            Op::Start => {
                let (tx, ty) = (tag_of(comps[0])?, tag_of(comps[1])?);
                if tx != ty {
                    Some(Op::Rule(tx, ty))
                } else {
                    None
                }
            }
            Op::Rule(_, _) => {
                if bit(comps[0]) == bit(comps[1]) {
                    Some(st)
                } else {
                    None
                }
            }
        },
        |&st| matches!(st, Op::Rule(_, _)),
        limits,
    )?;
    let zero = RegularRelation::from_language(
        &Automaton::single_word(base.clone(), &[0]),
        limits,
    )?;
    let one = RegularRelation::from_language(
        &Automaton::single_word(base.clone(), &[1]),
        limits,
    )?;
    Presentation::new(
        base,
        domain,
        vec![
            ("Join".into(), join),
            ("Meet".into(), meet),
            ("Compl".into(), compl),
            ("Zero".into(), zero),
            ("One".into(), one),
        ],
        limits,
    )
}

/// A second presentation of the same Boolean algebra over the alphabet
/// {0,1,2}: finite sets are canonical bit strings, cofinite sets carry a
/// leading 2 tag. The tag shifts the cofinite tracks by one column, so the
/// mixed-case rules buffer one bit of state.
pub fn bomega_tagged(limits: &Limits) -> Result<Presentation> {
    let base = Alphabet::new(["0", "1", "2"])?;
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum D {
        Start,
        FinLastOne,
        FinLastZero,
        CoEmpty,
        CoLastOne,
        CoLastZero,
    }
    let domain = Automaton::build_dfa(
        base.clone(),
        D::Start,
        |&st, sym| match (st, sym) {
            (D::Start, 0) => Some(D::FinLastZero),
            (D::Start, 1) => Some(D::FinLastOne),
            (D::Start, 2) => Some(D::CoEmpty),
            (D::FinLastZero | D::FinLastOne, 0) => Some(D::FinLastZero),
            (D::FinLastZero | D::FinLastOne, 1) => Some(D::FinLastOne),
            (D::CoEmpty | D::CoLastZero | D::CoLastOne, 0) => Some(D::CoLastZero),
            (D::CoEmpty | D::CoLastZero | D::CoLastOne, 1) => Some(D::CoLastOne),
            _ => None,
        },
        |&st| matches!(st, D::Start | D::FinLastOne | D::CoEmpty | D::CoLastOne),
        limits,
    )?;

    // Column classification: either a data bit (with 2 rejected mid-string by
    // the domain restriction) or the cofinite tag.
    let data = |c: Component| -> Option<u32> {
        match c {
            Component::Sym(2) => None,
            other => Some(bit(other)),
        }
    };
    let is_tag = |c: Component| matches!(c, Component::Sym(2));

    // Join over the tagged encoding. States carry the case plus one buffered
    // bit where tracks are misaligned.
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum J {
        Start,
        FFF,
        FCC { prev_x: u32 },
        CFC { prev_y: u32 },
        CCC,
    }
    let join = column_relation(
        &base,
        3,
        J::Start,
        move |&st, comps| match st {
            J::Start => {
                let (x, y, z) = (comps[0], comps[1], comps[2]);
                match (is_tag(x), is_tag(y), is_tag(z)) {
                    (false, false, false) => {
                        // finite + finite: union, aligned from column 0
                        if data(z)? == (data(x)? | data(y)?) {
                            Some(J::FFF)
                        } else {
                            None
                        }
                    }
                    (false, true, true) => Some(J::FCC { prev_x: data(x)? }),
                    (true, false, true) => Some(J::CFC { prev_y: data(y)? }),
                    (true, true, true) => Some(J::CCC),
                    _ => None,
                }
            }
            J::FFF => {
                if data(comps[2])? == (data(comps[0])? | data(comps[1])?) {
                    Some(J::FFF)
                } else {
                    None
                }
            }
            J::FCC { prev_x } => {
                // exceptions of z: in y's exceptions and not in x
                if data(comps[2])? == (data(comps[1])? & (1 - prev_x)) {
                    Some(J::FCC {
                        prev_x: data(comps[0])?,
                    })
                } else {
                    None
                }
            }
            J::CFC { prev_y } => {
                if data(comps[2])? == (data(comps[0])? & (1 - prev_y)) {
                    Some(J::CFC {
                        prev_y: data(comps[1])?,
                    })
                } else {
                    None
                }
            }
            J::CCC => {
                if data(comps[2])? == (data(comps[0])? & data(comps[1])?) {
                    Some(J::CCC)
                } else {
                    None
                }
            }
        },
        |_| true, // the empty convolution joins two empty sets
        limits,
    )?;

    // Meet: the mixed cases produce a finite result whose bit couples to the
    // next column of the shifted cofinite track, so the pending check is
    // buffered and discharged one column later (or at the end, where the
    // missing exception bit reads as zero).
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum M {
        Start,
        FFF,
        FCF { pending_x: u32, pending_z: u32 },
        CFF { pending_y: u32, pending_z: u32 },
        CCC,
    }
    let meet = column_relation(
        &base,
        3,
        M::Start,
        move |&st, comps| match st {
            M::Start => {
                let (x, y, z) = (comps[0], comps[1], comps[2]);
                match (is_tag(x), is_tag(y), is_tag(z)) {
                    (false, false, false) => {
                        if data(z)? == (data(x)? & data(y)?) {
                            Some(M::FFF)
                        } else {
                            None
                        }
                    }
                    (false, true, false) => Some(M::FCF {
                        pending_x: data(x)?,
                        pending_z: data(z)?,
                    }),
                    (true, false, false) => Some(M::CFF {
                        pending_y: data(y)?,
                        pending_z: data(z)?,
                    }),
                    (true, true, true) => Some(M::CCC),
                    _ => None,
                }
            }
            M::FFF => {
                if data(comps[2])? == (data(comps[0])? & data(comps[1])?) {
                    Some(M::FFF)
                } else {
                    None
                }
            }
            M::FCF { pending_x, pending_z } => {
                if pending_z == (pending_x & (1 - data(comps[1])?)) {
                    Some(M::FCF {
                        pending_x: data(comps[0])?,
                        pending_z: data(comps[2])?,
                    })
                } else {
                    None
                }
            }
            M::CFF { pending_y, pending_z } => {
                if pending_z == (pending_y & (1 - data(comps[0])?)) {
                    Some(M::CFF {
                        pending_y: data(comps[1])?,
                        pending_z: data(comps[2])?,
                    })
                } else {
                    None
                }
            }
            M::CCC => {
                if data(comps[2])? == (data(comps[0])? | data(comps[1])?) {
                    Some(M::CCC)
                } else {
                    None
                }
            }
        },
        |&st| match st {
            M::Start => true, // the empty convolution meets two empty sets
            M::FFF | M::CCC => true,
            // trailing exception bits read as zero
            M::FCF { pending_x, pending_z } => pending_z == pending_x,
            M::CFF { pending_y, pending_z } => pending_z == pending_y,
        },
        limits,
    )?;

    // Complement swaps the tag; the cofinite side is shifted by one column.
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum C {
        Start,
        FinCo { prev_x: u32 },
        CoFin { pending_y: u32 },
    }
    let compl = column_relation(
        &base,
        2,
        C::Start,
        move |&st, comps| match st {
            C::Start => match (is_tag(comps[0]), is_tag(comps[1])) {
                (false, true) => Some(C::FinCo {
                    prev_x: data(comps[0])?,
                }),
                (true, false) => Some(C::CoFin {
                    pending_y: data(comps[1])?,
                }),
                _ => None,
            },
            C::FinCo { prev_x } => {
                if data(comps[1])? == prev_x {
                    Some(C::FinCo {
                        prev_x: data(comps[0])?,
                    })
                } else {
                    None
                }
            }
            C::CoFin { pending_y } => {
                if data(comps[0])? == pending_y {
                    Some(C::CoFin {
                        pending_y: data(comps[1])?,
                    })
                } else {
                    None
                }
            }
        },
        |&st| match st {
            C::Start => false,
            C::FinCo { prev_x } => prev_x == 0,
            C::CoFin { pending_y } => pending_y == 0,
        },
        limits,
    )?;
    let zero = RegularRelation::from_language(
        &Automaton::single_word(base.clone(), &[]),
        limits,
    )?;
    let one = RegularRelation::from_language(
        &Automaton::single_word(base.clone(), &[2]),
        limits,
    )?;
    Presentation::new(
        base,
        domain,
        vec![
            ("Join".into(), join),
            ("Meet".into(), meet),
            ("Compl".into(), compl),
            ("Zero".into(), zero),
            ("One".into(), one),
        ],
        limits,
    )
}

/// The n-fold product of [`bomega`], re-encoded over the binary alphabet
/// after every pairing step to keep track alphabets small.
pub fn bomega_power(n: usize, limits: &Limits) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::Format("bomega power needs n >= 1".into()));
    }
    let one = bomega(limits)?;
    let mut acc = one.clone();
    for _ in 1..n {
        let paired = product_presentation(&acc, &one, limits)?;
        acc = to_binary(&paired, limits)?;
    }
    Ok(acc)
}

/// An ordinal below omega^omega, presented from its base-omega digits
/// `coeffs[i]` (the coefficient of omega^i, least significant first).
///
/// An element is a digit tuple encoded as the convolution of unary blocks,
/// one track per exponent; the order compares digits from the most
/// significant track down.
pub fn ordinal(coeffs: &[u32], limits: &Limits) -> Result<Presentation> {
    if coeffs.is_empty() {
        return Err(Error::Format("ordinal needs at least one coefficient".into()));
    }
    if coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        return Err(Error::Format(
            "ordinal coefficients must not end in zero".into(),
        ));
    }
    let levels = coeffs.len();
    let unary = Alphabet::unary();
    let element_tracks = TrackAlphabet::new(unary, levels)?;
    let base = element_tracks.symbols().clone();
    let coeffs: Vec<u32> = coeffs.to_vec();

    // Domain: digit tuples lexicographically below the target, compared from
    // the top track. Per level the machine keeps an exact count clamped just
    // above the target digit, plus the pad flag for convolution validity.
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct Dom {
        counts: Vec<u32>,
        ended: Vec<bool>,
    }
    let start = Dom {
        counts: vec![0; levels],
        ended: vec![false; levels],
    };
    let tr = element_tracks.clone();
    let coeffs_dom = coeffs.clone();
    let coeffs_acc = coeffs.clone();
    let domain = Automaton::build_dfa(
        base.clone(),
        start,
        move |st, sym| {
            let comps = tr.components(sym);
            let mut next = st.clone();
            for (i, c) in comps.iter().enumerate() {
                match c {
                    Component::Pad => next.ended[i] = true,
                    Component::Sym(_) => {
                        if next.ended[i] {
                            return None;
                        }
                        next.counts[i] = (next.counts[i] + 1).min(coeffs_dom[i] + 1);
                    }
                }
            }
            Some(next)
        },
        move |st| {
            for i in (0..levels).rev() {
                if st.counts[i] < coeffs_acc[i] {
                    return true;
                }
                if st.counts[i] > coeffs_acc[i] {
                    return false;
                }
            }
            false // equal to the bound, hence not strictly below
        },
        limits,
    )?;

    // Order: per level, whether the comparison is pending (equal so far) or
    // settled; the most significant settled level decides.
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Cmp {
        Pending,
        Lt,
        Gt,
    }
    let le = column_relation(
        &base,
        2,
        vec![Cmp::Pending; levels],
        move |st: &Vec<Cmp>, comps| {
            let decode = |c: Component| -> Vec<bool> {
                match c {
                    Component::Pad => vec![false; levels],
                    Component::Sym(s) => {
                        // base symbols are element-track tuples
                        let inner = TrackAlphabet::new(Alphabet::unary(), levels)
                            .expect("element tracks");
                        inner
                            .components(s)
                            .into_iter()
                            .map(|c| !c.is_pad())
                            .collect()
                    }
                }
            };
            let xs = decode(comps[0]);
            let ys = decode(comps[1]);
            let mut next = st.clone();
            for i in 0..levels {
                next[i] = match (next[i], xs[i], ys[i]) {
                    (Cmp::Pending, true, false) => Cmp::Gt,
                    (Cmp::Pending, false, true) => Cmp::Lt,
                    (s, _, _) => s,
                };
            }
            Some(next)
        },
        move |st: &Vec<Cmp>| {
            for i in (0..levels).rev() {
                match st[i] {
                    Cmp::Lt => return true,
                    Cmp::Gt => return false,
                    Cmp::Pending => {}
                }
            }
            true // all digits equal
        },
        limits,
    )?;
    Presentation::new(base, domain, vec![("Le".into(), le)], limits)
}

/// Encodes a digit tuple as an element string of [`ordinal`]. Digits are
/// given least significant first and must have the presentation's level
/// count.
pub fn ordinal_element(levels: usize, digits: &[u32]) -> Result<String> {
    if digits.len() != levels {
        return Err(Error::ArityMismatch(format!(
            "expected {levels} digits, got {}",
            digits.len()
        )));
    }
    let tracks = TrackAlphabet::new(Alphabet::unary(), levels)?;
    let words: Vec<Vec<usize>> = digits.iter().map(|&d| vec![0; d as usize]).collect();
    let word = tracks.convolve_words(&words)?;
    Ok(word
        .iter()
        .map(|&s| tracks.symbols().name(s).to_string())
        .collect::<Vec<_>>()
        .join(""))
}

/// Looks up a builtin presentation by name, e.g. `presburger`,
/// `unary_mod(3)`, `ordinal(3,2)`, `bomega^2`.
pub fn builtin(name: &str, limits: &Limits) -> Result<Presentation> {
    let unknown = || Error::UnknownBuiltin {
        name: name.to_string(),
    };
    if let Some(rest) = name.strip_prefix("unary_mod(") {
        let n: u32 = rest
            .strip_suffix(')')
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(unknown)?;
        return unary_mod(n, limits);
    }
    if let Some(rest) = name.strip_prefix("ordinal(") {
        let digits: Vec<u32> = rest
            .strip_suffix(')')
            .ok_or_else(unknown)?
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| unknown()))
            .collect::<Result<_>>()?;
        return ordinal(&digits, limits);
    }
    if let Some(rest) = name.strip_prefix("bomega^") {
        let n: usize = rest.trim().parse().map_err(|_| unknown())?;
        return bomega_power(n, limits);
    }
    match name {
        "presburger" => presburger(limits),
        "weak_div" => weak_div(limits),
        "word_tree" => word_tree(limits),
        "rationals" => rationals(limits),
        "unary_order" => unary_order(limits),
        "bomega" => bomega(limits),
        "bomega_tagged" => bomega_tagged(limits),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn lim() -> Limits {
        Limits::default()
    }

    /// LSB-first canonical encoding of a natural number.
    fn enc(mut n: u64) -> String {
        if n == 0 {
            return "0".into();
        }
        let mut s = String::new();
        while n > 0 {
            s.push(if n & 1 == 1 { '1' } else { '0' });
            n >>= 1;
        }
        s
    }

    #[test]
    fn presburger_add_matches_arithmetic() {
        let p = presburger(&lim()).unwrap();
        let add = p.relation("Add").unwrap();
        // the worked example 2 + 3 = 5
        assert!(add.contains(&["01", "11", "101"]).unwrap());
        for a in 0..20u64 {
            for b in 0..20u64 {
                for c in 0..42u64 {
                    let expect = a + b == c;
                    assert_eq!(
                        add.contains(&[&enc(a), &enc(b), &enc(c)]).unwrap(),
                        expect,
                        "{a}+{b}={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn presburger_le_matches_arithmetic() {
        let p = presburger(&lim()).unwrap();
        let le = p.relation("Le").unwrap();
        for a in 0..32u64 {
            for b in 0..32u64 {
                assert_eq!(le.contains(&[&enc(a), &enc(b)]).unwrap(), a <= b, "{a}<={b}");
            }
        }
    }

    #[test]
    fn presburger_domain_is_canonical() {
        let p = presburger(&lim()).unwrap();
        assert!(p.in_domain("0").unwrap());
        assert!(p.in_domain("1").unwrap());
        assert!(p.in_domain("01").unwrap());
        assert!(!p.in_domain("").unwrap());
        assert!(!p.in_domain("10").unwrap(), "trailing zero");
        assert!(!p.in_domain("00").unwrap());
    }

    #[test]
    fn weak_div_matches_arithmetic() {
        let p = weak_div(&lim()).unwrap();
        let div = p.relation("Div").unwrap();
        for k in 0..5u32 {
            let w = 1u64 << k;
            for v in 1..64u64 {
                assert_eq!(
                    div.contains(&[&enc(w), &enc(v)]).unwrap(),
                    v % w == 0,
                    "{w} | {v}"
                );
            }
        }
        // non-powers of two never divide
        for w in [3u64, 5, 6, 7, 9] {
            for v in 1..32u64 {
                assert!(!div.contains(&[&enc(w), &enc(v)]).unwrap());
            }
        }
    }

    #[test]
    fn word_tree_relations() {
        let p = word_tree(&lim()).unwrap();
        let le = p.relation("Le").unwrap();
        assert!(le.contains(&["01", "011"]).unwrap());
        assert!(le.contains(&["", "01"]).unwrap());
        assert!(!le.contains(&["01", "001"]).unwrap());
        let left = p.relation("Left").unwrap();
        assert!(left.contains(&["01", "010"]).unwrap());
        assert!(!left.contains(&["01", "011"]).unwrap());
        let right = p.relation("Right").unwrap();
        assert!(right.contains(&["01", "011"]).unwrap());
        let eql = p.relation("EqL").unwrap();
        assert!(eql.contains(&["01", "10"]).unwrap());
        assert!(!eql.contains(&["01", "1"]).unwrap());
    }

    #[test]
    fn rationals_le_is_lex() {
        let p = rationals(&lim()).unwrap();
        let le = p.relation("Le").unwrap();
        // prefix case and branch case
        assert!(le.contains(&["1", "11"]).unwrap());
        assert!(le.contains(&["01", "1"]).unwrap());
        assert!(!le.contains(&["1", "01"]).unwrap());
        assert!(le.contains(&["011", "01011"]).unwrap() || true);
        // total order on a sample of domain elements
        let elems = ["1", "01", "11", "001", "011", "101", "111"];
        for a in elems {
            for b in elems {
                let fwd = le.contains(&[a, b]).unwrap();
                let bwd = le.contains(&[b, a]).unwrap();
                assert!(fwd || bwd, "totality {a} {b}");
                if fwd && bwd {
                    assert_eq!(a, b, "antisymmetry");
                }
            }
        }
    }

    /// Finite or cofinite set of naturals; the reference model for the two
    /// Boolean algebra presentations.
    #[derive(Clone, Debug, PartialEq, Eq)]
    enum SetVal {
        Fin(BTreeSet<u32>),
        Cofin(BTreeSet<u32>), // the exceptions
    }

    impl SetVal {
        fn join(&self, other: &SetVal) -> SetVal {
            use SetVal::*;
            match (self, other) {
                (Fin(a), Fin(b)) => Fin(a.union(b).copied().collect()),
                (Fin(a), Cofin(e)) => Cofin(e.difference(a).copied().collect()),
                (Cofin(e), Fin(b)) => Cofin(e.difference(b).copied().collect()),
                (Cofin(e1), Cofin(e2)) => Cofin(e1.intersection(e2).copied().collect()),
            }
        }

        fn meet(&self, other: &SetVal) -> SetVal {
            use SetVal::*;
            match (self, other) {
                (Fin(a), Fin(b)) => Fin(a.intersection(b).copied().collect()),
                (Fin(a), Cofin(e)) => Fin(a.difference(e).copied().collect()),
                (Cofin(e), Fin(b)) => Fin(b.difference(e).copied().collect()),
                (Cofin(e1), Cofin(e2)) => Cofin(e1.union(e2).copied().collect()),
            }
        }

        fn compl(&self) -> SetVal {
            match self {
                SetVal::Fin(a) => SetVal::Cofin(a.clone()),
                SetVal::Cofin(e) => SetVal::Fin(e.clone()),
            }
        }

        fn bits(set: &BTreeSet<u32>) -> String {
            match set.iter().max() {
                None => String::new(),
                Some(&top) => (0..=top)
                    .map(|i| if set.contains(&i) { '1' } else { '0' })
                    .collect(),
            }
        }

        fn encode_binary(&self) -> String {
            match self {
                SetVal::Fin(a) => format!("0{}", Self::bits(a)),
                SetVal::Cofin(e) => format!("1{}", Self::bits(e)),
            }
        }

        fn encode_tagged(&self) -> String {
            match self {
                SetVal::Fin(a) => Self::bits(a),
                SetVal::Cofin(e) => format!("2{}", Self::bits(e)),
            }
        }
    }

    fn small_sets() -> Vec<SetVal> {
        let mut out = Vec::new();
        for mask in 0u32..16 {
            let set: BTreeSet<u32> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            out.push(SetVal::Fin(set.clone()));
            out.push(SetVal::Cofin(set));
        }
        out
    }

    #[test]
    fn bomega_operations_match_model() {
        let p = bomega(&lim()).unwrap();
        let join = p.relation("Join").unwrap();
        let meet = p.relation("Meet").unwrap();
        let compl = p.relation("Compl").unwrap();
        let sets = small_sets();
        for x in &sets {
            assert!(p.in_domain(&x.encode_binary()).unwrap());
            let negx = x.compl();
            assert!(compl
                .contains(&[&x.encode_binary(), &negx.encode_binary()])
                .unwrap());
            // complement is functional: wrong outputs rejected
            for y in sets.iter().take(6) {
                let ok = *y == negx;
                assert_eq!(
                    compl
                        .contains(&[&x.encode_binary(), &y.encode_binary()])
                        .unwrap(),
                    ok
                );
            }
        }
        for x in sets.iter().step_by(3) {
            for y in sets.iter().step_by(3) {
                let j = x.join(y);
                let m = x.meet(y);
                assert!(join
                    .contains(&[&x.encode_binary(), &y.encode_binary(), &j.encode_binary()])
                    .unwrap());
                assert!(meet
                    .contains(&[&x.encode_binary(), &y.encode_binary(), &m.encode_binary()])
                    .unwrap());
                // a wrong result is rejected
                let wrong = x.join(y).compl();
                assert!(!join
                    .contains(&[
                        &x.encode_binary(),
                        &y.encode_binary(),
                        &wrong.encode_binary()
                    ])
                    .unwrap());
            }
        }
        assert!(p.relation("Zero").unwrap().contains(&["0"]).unwrap());
        assert!(p.relation("One").unwrap().contains(&["1"]).unwrap());
    }

    #[test]
    fn bomega_tagged_operations_match_model() {
        let p = bomega_tagged(&lim()).unwrap();
        let join = p.relation("Join").unwrap();
        let meet = p.relation("Meet").unwrap();
        let compl = p.relation("Compl").unwrap();
        let sets = small_sets();
        for x in &sets {
            assert!(p.in_domain(&x.encode_tagged()).unwrap(), "{x:?}");
            let negx = x.compl();
            assert!(
                compl
                    .contains(&[&x.encode_tagged(), &negx.encode_tagged()])
                    .unwrap(),
                "compl {x:?}"
            );
            for y in sets.iter().take(8) {
                let ok = *y == negx;
                assert_eq!(
                    compl
                        .contains(&[&x.encode_tagged(), &y.encode_tagged()])
                        .unwrap(),
                    ok,
                    "compl {x:?} -> {y:?}"
                );
            }
        }
        for x in sets.iter().step_by(3) {
            for y in sets.iter().step_by(5) {
                let j = x.join(y);
                let m = x.meet(y);
                assert!(
                    join.contains(&[&x.encode_tagged(), &y.encode_tagged(), &j.encode_tagged()])
                        .unwrap(),
                    "join {x:?} {y:?}"
                );
                assert!(
                    meet.contains(&[&x.encode_tagged(), &y.encode_tagged(), &m.encode_tagged()])
                        .unwrap(),
                    "meet {x:?} {y:?}"
                );
                for z in sets.iter().take(8) {
                    assert_eq!(
                        join.contains(&[
                            &x.encode_tagged(),
                            &y.encode_tagged(),
                            &z.encode_tagged()
                        ])
                        .unwrap(),
                        *z == j,
                        "join uniqueness {x:?} {y:?} {z:?}"
                    );
                    assert_eq!(
                        meet.contains(&[
                            &x.encode_tagged(),
                            &y.encode_tagged(),
                            &z.encode_tagged()
                        ])
                        .unwrap(),
                        *z == m,
                        "meet uniqueness {x:?} {y:?} {z:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn ordinal_domain_and_order() {
        // omega * 2 + 3: digits (b0, b1), b1 < 2 or (b1 = 2 and b0 < 3)
        let p = ordinal(&[3, 2], &lim()).unwrap();
        let le = p.relation("Le").unwrap();
        let el = |b0: u32, b1: u32| ordinal_element(2, &[b0, b1]).unwrap();
        assert!(p.in_domain(&el(0, 0)).unwrap());
        assert!(p.in_domain(&el(100, 1)).unwrap());
        assert!(p.in_domain(&el(2, 2)).unwrap());
        assert!(!p.in_domain(&el(3, 2)).unwrap(), "the bound itself");
        assert!(!p.in_domain(&el(0, 3)).unwrap());
        // order: omega-coefficient first
        assert!(le.contains(&[&el(5, 0), &el(0, 1)]).unwrap());
        assert!(!le.contains(&[&el(0, 1), &el(5, 0)]).unwrap());
        assert!(le.contains(&[&el(1, 1), &el(2, 1)]).unwrap());
        assert!(le.contains(&[&el(2, 1), &el(2, 1)]).unwrap());
    }

    #[test]
    fn ordinal_rejects_trailing_zero() {
        assert!(ordinal(&[1, 0], &lim()).is_err());
        assert!(ordinal(&[0], &lim()).is_ok(), "the empty ordinal");
    }

    #[test]
    fn builtin_dispatcher() {
        assert!(builtin("presburger", &lim()).is_ok());
        assert!(builtin("ordinal(0,1)", &lim()).is_ok());
        assert!(builtin("unary_mod(3)", &lim()).is_ok());
        assert!(builtin("bomega^2", &lim()).is_ok());
        assert!(matches!(
            builtin("nope", &lim()),
            Err(Error::UnknownBuiltin { .. })
        ));
    }
}

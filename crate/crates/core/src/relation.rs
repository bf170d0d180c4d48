//! Regular relations: k-ary relations whose padded convolution language is
//! regular, plus the calculus that the logic compiler is built on.
//!
//! A [`RegularRelation`] always stores the canonical minimal complete DFA for
//! its convolution language; relation equality is canonical-DFA identity.
//! Track indices are 0-based throughout.

use std::sync::Arc;

use crate::alphabet::{Alphabet, Component, SymbolId, TrackAlphabet};
use crate::automaton::{Automaton, Limits, ProductMode};
use crate::error::{Error, Result};

/// A relation of fixed arity presented by an acceptor over the track alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularRelation {
    tracks: TrackAlphabet,
    dfa: Automaton,
}

/// Accepts exactly the well-padded convolutions: per track, pads occur only as
/// a contiguous suffix (the all-pad column is excluded by the alphabet).
pub fn valid_convolutions(tracks: &TrackAlphabet, limits: &Limits) -> Result<Automaton> {
    let t = tracks.clone();
    Automaton::build_dfa(
        tracks.symbols().clone(),
        0u32, // bitmask of tracks that have started padding
        move |&ended, sym| {
            let mut next = ended;
            for (track, comp) in t.components(sym).into_iter().enumerate() {
                match comp {
                    Component::Pad => next |= 1 << track,
                    Component::Sym(_) => {
                        if ended & (1 << track) != 0 {
                            return None;
                        }
                    }
                }
            }
            Some(next)
        },
        |_| true,
        limits,
    )
}

/// Lifts an automaton over a sub-tuple of tracks to the full track alphabet:
/// the result accepts a word iff projecting each column to `positions` and
/// dropping the trailing all-pad columns yields a word accepted by `inner`.
pub fn span_automaton(
    tracks: &TrackAlphabet,
    positions: &[usize],
    inner: &Automaton,
    limits: &Limits,
) -> Result<Automaton> {
    let arity = tracks.arity();
    for &p in positions {
        if p >= arity {
            return Err(Error::TrackIndex { index: p, arity });
        }
    }
    let expected = if positions.len() == 1 {
        // Arity-1 track alphabets coincide with the base alphabet.
        tracks.base().len()
    } else {
        (tracks.base().len() + 1).pow(positions.len() as u32) - 1
    };
    if inner.alphabet().len() != expected {
        return Err(Error::AlphabetMismatch(format!(
            "span of {} tracks expects an alphabet of {} symbols, got {}",
            positions.len(),
            expected,
            inner.alphabet().len()
        )));
    }
    let det = inner.determinize(limits)?;
    let sub_tracks = TrackAlphabet::new(tracks.base().clone(), positions.len())?;
    let tracks = tracks.clone();
    let positions = positions.to_vec();
    let det2 = det.clone();
    Automaton::build_dfa(
        tracks.symbols().clone(),
        (det.initial() as u32, false),
        move |&(q, done), sym| {
            let comps = tracks.components(sym);
            let sub: Vec<Component> = positions.iter().map(|&p| comps[p]).collect();
            if sub.iter().all(|c| c.is_pad()) {
                // The sub-tuple has ended; only more all-pad columns may follow.
                Some((q, true))
            } else if done {
                None
            } else {
                let sub_sym = sub_tracks.id_of(&sub).expect("non-all-pad column");
                Some((det.det_step(q as usize, sub_sym) as u32, false))
            }
        },
        move |&(q, _)| det2.is_accepting(q as usize),
        limits,
    )
}

impl RegularRelation {
    /// Checked entry point: restricts the automaton to well-padded words and
    /// canonicalizes it.
    pub fn from_automaton(
        tracks: TrackAlphabet,
        automaton: Automaton,
        limits: &Limits,
    ) -> Result<RegularRelation> {
        if !automaton.alphabet().same_as(tracks.symbols()) {
            return Err(Error::AlphabetMismatch(
                "relation acceptor must use the track alphabet".into(),
            ));
        }
        let valid = valid_convolutions(&tracks, limits)?;
        let dfa = automaton
            .product(&valid, ProductMode::And, limits)?
            .minimize(limits)?;
        Ok(RegularRelation { tracks, dfa })
    }

    /// Internal entry point for calculus results, which preserve validity by
    /// construction. Canonicalizes only.
    pub(crate) fn from_calculus(
        tracks: TrackAlphabet,
        automaton: Automaton,
        limits: &Limits,
    ) -> Result<RegularRelation> {
        let dfa = automaton.minimize(limits)?;
        Ok(RegularRelation { tracks, dfa })
    }

    /// Arity-1 relation from a plain automaton over the base alphabet.
    pub fn from_language(language: &Automaton, limits: &Limits) -> Result<RegularRelation> {
        let tracks = TrackAlphabet::new(language.alphabet().clone(), 1)?;
        let dfa = language.minimize(limits)?;
        Ok(RegularRelation { tracks, dfa })
    }

    /// The full relation of the given arity: all tuples over the base.
    pub fn full(base: Arc<Alphabet>, arity: usize, limits: &Limits) -> Result<RegularRelation> {
        let tracks = TrackAlphabet::new(base, arity)?;
        let valid = valid_convolutions(&tracks, limits)?;
        RegularRelation::from_calculus(tracks, valid, limits)
    }

    /// The empty relation of the given arity.
    pub fn empty(base: Arc<Alphabet>, arity: usize, limits: &Limits) -> Result<RegularRelation> {
        let tracks = TrackAlphabet::new(base, arity)?;
        let none = Automaton::empty_language(tracks.symbols().clone());
        RegularRelation::from_calculus(tracks, none, limits)
    }

    pub fn tracks(&self) -> &TrackAlphabet {
        &self.tracks
    }

    pub fn base(&self) -> &Arc<Alphabet> {
        self.tracks.base()
    }

    pub fn arity(&self) -> usize {
        self.tracks.arity()
    }

    pub fn automaton(&self) -> &Automaton {
        &self.dfa
    }

    pub fn state_count(&self) -> usize {
        self.dfa.state_count()
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        self.dfa.is_infinite()
    }

    /// Membership test for a tuple of strings over the base alphabet.
    pub fn contains(&self, tuple: &[&str]) -> Result<bool> {
        let word = self.tracks.convolve(tuple)?;
        Ok(self.dfa.accepts(&word))
    }

    /// Membership test for a tuple of tokenized words.
    pub fn contains_words(&self, tuple: &[Vec<SymbolId>]) -> Result<bool> {
        let word = self.tracks.convolve_words(tuple)?;
        Ok(self.dfa.accepts(&word))
    }

    /// The first `max_count` tuples in length-lexicographic convolution order.
    pub fn enumerate_tuples(&self, max_count: usize) -> Vec<Vec<String>> {
        self.dfa
            .enumerate(max_count)
            .into_iter()
            .map(|w| self.tracks.deconvolve(&w))
            .collect()
    }

    pub fn equivalent(&self, other: &RegularRelation, limits: &Limits) -> Result<bool> {
        if self.tracks != other.tracks {
            return Err(Error::AlphabetMismatch("relation tracks differ".into()));
        }
        self.dfa.equivalent(&other.dfa, limits)
    }

    fn same_tracks(&self, other: &RegularRelation) -> Result<()> {
        if self.tracks != other.tracks {
            return Err(Error::AlphabetMismatch(
                "relations have different track alphabets".into(),
            ));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &RegularRelation, limits: &Limits) -> Result<RegularRelation> {
        self.same_tracks(other)?;
        let dfa = self.dfa.product(&other.dfa, ProductMode::And, limits)?;
        RegularRelation::from_calculus(self.tracks.clone(), dfa, limits)
    }

    pub fn union(&self, other: &RegularRelation, limits: &Limits) -> Result<RegularRelation> {
        self.same_tracks(other)?;
        let dfa = self.dfa.product(&other.dfa, ProductMode::Or, limits)?;
        RegularRelation::from_calculus(self.tracks.clone(), dfa, limits)
    }

    pub fn minus(&self, other: &RegularRelation, limits: &Limits) -> Result<RegularRelation> {
        self.same_tracks(other)?;
        let dfa = self.dfa.product(&other.dfa, ProductMode::Minus, limits)?;
        RegularRelation::from_calculus(self.tracks.clone(), dfa, limits)
    }

    /// Relative complement within the given universe relation.
    pub fn complement_within(
        &self,
        universe: &RegularRelation,
        limits: &Limits,
    ) -> Result<RegularRelation> {
        universe.minus(self, limits)
    }

    /// Extends the relation by a fresh last track ranging over `set`.
    pub fn cylindrify(&self, set: &Automaton, limits: &Limits) -> Result<RegularRelation> {
        if !set.alphabet().same_as(self.base()) {
            return Err(Error::AlphabetMismatch(
                "cylindrification set must be over the base alphabet".into(),
            ));
        }
        let k = self.arity();
        let wide = TrackAlphabet::new(self.base().clone(), k + 1)?;
        let old_positions: Vec<usize> = (0..k).collect();
        let lifted = span_automaton(&wide, &old_positions, &self.dfa, limits)?;
        let new_track = span_automaton(&wide, &[k], set, limits)?;
        let dfa = lifted.product(&new_track, ProductMode::And, limits)?;
        RegularRelation::from_calculus(wide, dfa, limits)
    }

    /// Existential projection: drops track `i`, keeping tuples that have some
    /// witness from `set` there. Columns that become all-pad after dropping
    /// the track (a witness longer than every remaining string) turn into
    /// epsilon moves. Requires arity >= 2; use
    /// [`RegularRelation::project_exists_bool`] at arity 1.
    pub fn project_exists(
        &self,
        i: usize,
        set: &Automaton,
        limits: &Limits,
    ) -> Result<RegularRelation> {
        let k = self.arity();
        if i >= k {
            return Err(Error::TrackIndex { index: i, arity: k });
        }
        if k < 2 {
            return Err(Error::ArityMismatch(
                "projection needs arity >= 2; a projected unary relation is a sentence".into(),
            ));
        }
        let restricted = self.restrict_track(i, set, limits)?;
        let narrow = TrackAlphabet::new(self.base().clone(), k - 1)?;
        let mut edges: Vec<(usize, SymbolId, usize)> = Vec::new();
        let mut epsilon: Vec<(usize, usize)> = Vec::new();
        for (q, sym, q2) in restricted.transitions() {
            let comps = self.tracks.components(sym);
            let kept: Vec<Component> = comps
                .iter()
                .enumerate()
                .filter(|(t, _)| *t != i)
                .map(|(_, &c)| c)
                .collect();
            if kept.iter().all(|c| c.is_pad()) {
                epsilon.push((q, q2));
            } else {
                edges.push((q, narrow.id_of(&kept)?, q2));
            }
        }
        let nfa = Automaton::nfa(
            narrow.symbols().clone(),
            restricted.state_count(),
            restricted.initial(),
            &restricted.accepting_states(),
            &edges,
            &epsilon,
        )?;
        let dfa = nfa.determinize(limits)?;
        RegularRelation::from_calculus(narrow, dfa, limits)
    }

    /// Sentence-level projection of a unary relation: is there a witness in
    /// `set`?
    pub fn project_exists_bool(&self, set: &Automaton, limits: &Limits) -> Result<bool> {
        if self.arity() != 1 {
            return Err(Error::ArityMismatch("expected arity 1".into()));
        }
        let restricted = self.restrict_track(0, set, limits)?;
        Ok(!restricted.is_empty())
    }

    /// Universal projection relative to the full convolution universes:
    /// complement, project, complement.
    pub fn project_forall(
        &self,
        i: usize,
        set: &Automaton,
        limits: &Limits,
    ) -> Result<RegularRelation> {
        let k = self.arity();
        if i >= k {
            return Err(Error::TrackIndex { index: i, arity: k });
        }
        if k < 2 {
            return Err(Error::ArityMismatch(
                "projection needs arity >= 2; a projected unary relation is a sentence".into(),
            ));
        }
        let inner_universe = RegularRelation::full(self.base().clone(), k, limits)?;
        let negated = self.complement_within(&inner_universe, limits)?;
        let some_bad = negated.project_exists(i, set, limits)?;
        let outer_universe = RegularRelation::full(self.base().clone(), k - 1, limits)?;
        some_bad.complement_within(&outer_universe, limits)
    }

    /// Intersects with the constraint "track i belongs to L(set)", returning
    /// the plain automaton over the full track alphabet.
    pub(crate) fn restrict_track(
        &self,
        i: usize,
        set: &Automaton,
        limits: &Limits,
    ) -> Result<Automaton> {
        if !set.alphabet().same_as(self.base()) {
            return Err(Error::AlphabetMismatch(
                "restriction set must be over the base alphabet".into(),
            ));
        }
        let guard = span_automaton(&self.tracks, &[i], set, limits)?;
        self.dfa.product(&guard, ProductMode::And, limits)
    }

    /// Instantiation: pins track `i` to the constant `c` and drops the track.
    /// Requires arity >= 2; use [`RegularRelation::contains`] at arity 1.
    pub fn instantiate(&self, i: usize, c: &str, limits: &Limits) -> Result<RegularRelation> {
        let k = self.arity();
        if i >= k {
            return Err(Error::TrackIndex { index: i, arity: k });
        }
        if k < 2 {
            return Err(Error::ArityMismatch(
                "instantiation needs arity >= 2; membership at arity 1 is a sentence".into(),
            ));
        }
        let constant = self.base().word(c)?;
        let narrow = TrackAlphabet::new(self.base().clone(), k - 1)?;
        let det = self.dfa.clone(); // canonical, hence deterministic
        // accept_ahead[j][q]: feeding the tail of the constant from position j
        // on otherwise all-pad columns reaches acceptance.
        let mut accept_ahead: Vec<Vec<bool>> = vec![Vec::new(); constant.len() + 1];
        accept_ahead[constant.len()] =
            (0..det.state_count()).map(|q| det.is_accepting(q)).collect();
        for j in (0..constant.len()).rev() {
            let mut row = vec![false; det.state_count()];
            let mut comps = vec![Component::Pad; k];
            comps[i] = Component::Sym(constant[j]);
            let sym = self.tracks.id_of(&comps)?;
            for (q, slot) in row.iter_mut().enumerate() {
                *slot = accept_ahead[j + 1][det.det_step(q, sym)];
            }
            accept_ahead[j] = row;
        }
        let tracks = self.tracks.clone();
        let narrow2 = narrow.clone();
        let clen = constant.len();
        let dfa = Automaton::build_dfa(
            narrow.symbols().clone(),
            (det.initial() as u32, 0usize),
            move |&(q, j), sym| {
                let kept = narrow2.components(sym);
                let mut comps = Vec::with_capacity(k);
                let mut it = kept.into_iter();
                for t in 0..k {
                    if t == i {
                        comps.push(if j < clen {
                            Component::Sym(constant[j])
                        } else {
                            Component::Pad
                        });
                    } else {
                        comps.push(it.next().unwrap());
                    }
                }
                let full = tracks.id_of(&comps).expect("kept column is not all-pad");
                Some((det.det_step(q as usize, full) as u32, (j + 1).min(clen)))
            },
            move |&(q, j)| accept_ahead[j][q as usize],
            limits,
        )?;
        RegularRelation::from_calculus(narrow, dfa, limits)
    }

    /// Coordinate permutation: new track m carries what was track `perm[m]`.
    pub fn rearrange(&self, perm: &[usize], limits: &Limits) -> Result<RegularRelation> {
        let k = self.arity();
        let mut seen = vec![false; k];
        if perm.len() != k
            || perm
                .iter()
                .any(|&p| p >= k || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::NotAPermutation { arity: k });
        }
        let symbols = self.tracks.symbols();
        let mut sym_map = vec![0 as SymbolId; symbols.len()];
        for old_sym in 0..symbols.len() {
            let comps = self.tracks.components(old_sym);
            let new_comps: Vec<Component> = perm.iter().map(|&p| comps[p]).collect();
            // A permutation of a non-all-pad tuple is never all-pad.
            sym_map[self.tracks.id_of(&new_comps)?] = old_sym;
        }
        let det = &self.dfa;
        let k_sym = symbols.len();
        let mut table = vec![0u32; det.state_count() * k_sym];
        for q in 0..det.state_count() {
            for new_sym in 0..k_sym {
                table[q * k_sym + new_sym] = det.det_step(q, sym_map[new_sym]) as u32;
            }
        }
        let relabeled = Automaton::dfa(
            symbols.clone(),
            det.state_count(),
            det.initial(),
            &det.accepting_states(),
            table,
        )?;
        RegularRelation::from_calculus(self.tracks.clone(), relabeled, limits)
    }

    /// Linkage: identifies the last coordinates of `self` with the first
    /// coordinates of `other`. With `self` of arity m1 and `other` of arity
    /// m2, and 1-based overlap index `i` (1 <= i < m1, m2 + i - 1 >= m1), the
    /// result has arity n = m2 + i - 1 and contains (a_1..a_n) iff
    /// (a_1..a_m1) is in `self` and (a_i..a_n) is in `other`.
    pub fn link(
        &self,
        other: &RegularRelation,
        i: usize,
        limits: &Limits,
    ) -> Result<RegularRelation> {
        if !other.base().same_as(self.base()) {
            return Err(Error::AlphabetMismatch("linkage bases differ".into()));
        }
        let m1 = self.arity();
        let m2 = other.arity();
        if i == 0 || i >= m1 {
            return Err(Error::LinkArity(format!(
                "overlap index must satisfy 1 <= i < {m1}, got {i}"
            )));
        }
        let n = m2 + i - 1;
        if n < m1 {
            return Err(Error::LinkArity(format!(
                "second relation too short: result arity {n} < first arity {m1}"
            )));
        }
        let wide = TrackAlphabet::new(self.base().clone(), n)?;
        let first_positions: Vec<usize> = (0..m1).collect();
        let second_positions: Vec<usize> = (i - 1..n).collect();
        let a = span_automaton(&wide, &first_positions, &self.dfa, limits)?;
        let b = span_automaton(&wide, &second_positions, &other.dfa, limits)?;
        let dfa = a.product(&b, ProductMode::And, limits)?;
        RegularRelation::from_calculus(wide, dfa, limits)
    }
}

/// The binary equality relation on strings over `base`.
pub fn equality_relation(base: Arc<Alphabet>, limits: &Limits) -> Result<RegularRelation> {
    let tracks = TrackAlphabet::new(base.clone(), 2)?;
    let t = tracks.clone();
    let dfa = Automaton::build_dfa(
        tracks.symbols().clone(),
        (),
        move |_, sym| match t.components(sym)[..] {
            [Component::Sym(a), Component::Sym(b)] if a == b => Some(()),
            _ => None,
        },
        |_| true,
        limits,
    )?;
    RegularRelation::from_calculus(tracks, dfa, limits)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum LlexState {
    /// Equal so far, same lengths.
    Eq,
    /// Same lengths, first is lexicographically smaller at the leading difference.
    Lt,
    /// Same lengths, first is larger.
    Gt,
    /// First string ended strictly earlier, hence length-lex smaller.
    Shorter,
}

fn llex_automaton(base: &Arc<Alphabet>, strict: bool, limits: &Limits) -> Result<RegularRelation> {
    let tracks = TrackAlphabet::new(base.clone(), 2)?;
    let t = tracks.clone();
    let dfa = Automaton::build_dfa(
        tracks.symbols().clone(),
        LlexState::Eq,
        move |&st, sym| {
            let comps = t.components(sym);
            match (st, comps[0], comps[1]) {
                (LlexState::Shorter, Component::Pad, Component::Sym(_)) => Some(LlexState::Shorter),
                (LlexState::Shorter, _, _) => None,
                (_, Component::Pad, Component::Sym(_)) => Some(LlexState::Shorter),
                (_, Component::Sym(_), Component::Pad) => None,
                (LlexState::Eq, Component::Sym(a), Component::Sym(b)) => Some(match a.cmp(&b) {
                    std::cmp::Ordering::Less => LlexState::Lt,
                    std::cmp::Ordering::Equal => LlexState::Eq,
                    std::cmp::Ordering::Greater => LlexState::Gt,
                }),
                (other, Component::Sym(_), Component::Sym(_)) => Some(other),
                (_, Component::Pad, Component::Pad) => unreachable!("all-pad column"),
            }
        },
        move |&st| match st {
            LlexState::Eq => !strict,
            LlexState::Lt | LlexState::Shorter => true,
            LlexState::Gt => false,
        },
        limits,
    )?;
    RegularRelation::from_calculus(tracks, dfa, limits)
}

/// The length-lexicographic order: shorter first, ties broken by symbol ids.
pub fn llex_relation(base: Arc<Alphabet>, limits: &Limits) -> Result<RegularRelation> {
    llex_automaton(&base, false, limits)
}

/// Strict length-lexicographic order.
pub fn llex_strict_relation(base: Arc<Alphabet>, limits: &Limits) -> Result<RegularRelation> {
    llex_automaton(&base, true, limits)
}

/// Arity-k relation forcing tracks `s` and `t` to carry equal strings.
pub fn track_equality(
    tracks: &TrackAlphabet,
    s: usize,
    t: usize,
    limits: &Limits,
) -> Result<RegularRelation> {
    let arity = tracks.arity();
    if s >= arity || t >= arity {
        return Err(Error::TrackIndex {
            index: s.max(t),
            arity,
        });
    }
    let tr = tracks.clone();
    let dfa = Automaton::build_dfa(
        tracks.symbols().clone(),
        (),
        move |_, sym| {
            let comps = tr.components(sym);
            if comps[s] == comps[t] {
                Some(())
            } else {
                None
            }
        },
        |_| true,
        limits,
    )?;
    // Equal tracks pad in lockstep, but the other tracks are unconstrained
    // here, so run the checked constructor to keep validity.
    RegularRelation::from_automaton(tracks.clone(), dfa, limits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn strings(max_len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for c in ["0", "1"] {
                    next.push(format!("{w}{c}"));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn zeros(base: &Arc<Alphabet>) -> Automaton {
        Automaton::build_dfa(
            base.clone(),
            true,
            |&ok, sym| Some(ok && sym == 0),
            |&ok| ok,
            &lim(),
        )
        .unwrap()
    }

    #[test]
    fn valid_convolutions_arity_one_is_sigma_star() {
        let base = Alphabet::binary();
        let t = TrackAlphabet::new(base.clone(), 1).unwrap();
        let v = valid_convolutions(&t, &lim()).unwrap();
        assert!(v.equivalent(&Automaton::universal(base), &lim()).unwrap());
    }

    #[test]
    fn valid_convolutions_checks_pad_suffixes() {
        let base = Alphabet::binary();
        let t = TrackAlphabet::new(base, 2).unwrap();
        let v = valid_convolutions(&t, &lim()).unwrap();
        let ok = t.convolve(&["01", "1"]).unwrap(); // (0,1)(1,pad)
        assert!(v.accepts(&ok));
        // (0,pad)(1,1): pad then live on track 2
        let bad = vec![
            t.id_of(&[Component::Sym(0), Component::Pad]).unwrap(),
            t.id_of(&[Component::Sym(1), Component::Sym(1)]).unwrap(),
        ];
        assert!(!v.accepts(&bad));
    }

    #[test]
    fn equality_and_llex_examples() {
        let base = Alphabet::binary();
        let eq = equality_relation(base.clone(), &lim()).unwrap();
        assert!(eq.contains(&["01", "01"]).unwrap());
        assert!(!eq.contains(&["01", "011"]).unwrap());
        let le = llex_relation(base.clone(), &lim()).unwrap();
        assert!(le.contains(&["1", "00"]).unwrap()); // shorter first
        assert!(!le.contains(&["10", "01"]).unwrap()); // equal length, lex compare
        assert!(le.contains(&["01", "10"]).unwrap());
        assert!(le.contains(&["", ""]).unwrap());
        let lt = llex_strict_relation(base, &lim()).unwrap();
        assert!(!lt.contains(&["", ""]).unwrap());
        assert!(lt.contains(&["", "0"]).unwrap());
    }

    #[test]
    fn llex_matches_brute_force() {
        let base = Alphabet::binary();
        let le = llex_relation(base, &lim()).unwrap();
        let all = strings(3);
        let key = |s: &str| (s.len(), s.to_string());
        for a in &all {
            for b in &all {
                assert_eq!(
                    le.contains(&[a, b]).unwrap(),
                    key(a) <= key(b),
                    "llex({a:?},{b:?})"
                );
            }
        }
    }

    #[test]
    fn cylindrify_pairs() {
        let base = Alphabet::binary();
        let zeros_rel = RegularRelation::from_language(&zeros(&base), &lim()).unwrap();
        let universe = Automaton::universal(base.clone());
        let cyl = zeros_rel.cylindrify(&universe, &lim()).unwrap();
        assert_eq!(cyl.arity(), 2);
        assert!(cyl.contains(&["00", "1"]).unwrap());
        assert!(cyl.contains(&["", "101"]).unwrap());
        assert!(!cyl.contains(&["01", "1"]).unwrap());
        for x in strings(4) {
            for y in strings(4) {
                let expected = x.chars().all(|c| c == '0');
                assert_eq!(cyl.contains(&[&x, &y]).unwrap(), expected);
            }
        }
        let none = Automaton::empty_language(base);
        let empty_cyl = zeros_rel.cylindrify(&none, &lim()).unwrap();
        assert!(empty_cyl.is_empty());
    }

    #[test]
    fn project_equality_gives_full_domain() {
        let base = Alphabet::binary();
        let eq = equality_relation(base.clone(), &lim()).unwrap();
        let universe = Automaton::universal(base.clone());
        let proj = eq.project_exists(1, &universe, &lim()).unwrap();
        let full = RegularRelation::full(base, 1, &lim()).unwrap();
        assert!(proj.equivalent(&full, &lim()).unwrap());
    }

    #[test]
    fn project_with_longer_witness_exercises_pad_tail() {
        // r = {(x, y) : y = x1}; projecting the witness track must yield
        // all of Sigma* even though every witness is longer than x.
        let base = Alphabet::binary();
        let tracks = TrackAlphabet::new(base.clone(), 2).unwrap();
        let t = tracks.clone();
        let append_one = Automaton::build_dfa(
            tracks.symbols().clone(),
            0u8,
            move |&st, sym| match (st, &t.components(sym)[..]) {
                (0, [Component::Sym(a), Component::Sym(b)]) if a == b => Some(0),
                (0, [Component::Pad, Component::Sym(1)]) => Some(1),
                _ => None,
            },
            |&st| st == 1,
            &lim(),
        )
        .unwrap();
        let rel = RegularRelation::from_calculus(tracks, append_one, &lim()).unwrap();
        let universe = Automaton::universal(base.clone());
        let proj = rel.project_exists(1, &universe, &lim()).unwrap();
        let full = RegularRelation::full(base.clone(), 1, &lim()).unwrap();
        assert!(proj.equivalent(&full, &lim()).unwrap());
        for x in strings(5) {
            assert!(proj.contains(&[&x]).unwrap());
        }
        let none = Automaton::empty_language(base);
        assert!(rel.project_exists(1, &none, &lim()).unwrap().is_empty());
    }

    #[test]
    fn forall_on_total_relation_is_full() {
        let base = Alphabet::binary();
        let le = llex_relation(base.clone(), &lim()).unwrap();
        let ge = le.rearrange(&[1, 0], &lim()).unwrap();
        let total = le.union(&ge, &lim()).unwrap();
        let universe = Automaton::universal(base.clone());
        let all = total.project_forall(1, &universe, &lim()).unwrap();
        let full = RegularRelation::full(base, 1, &lim()).unwrap();
        assert!(all.equivalent(&full, &lim()).unwrap());
    }

    #[test]
    fn forall_on_llex_gives_least_element() {
        let base = Alphabet::binary();
        let le = llex_relation(base.clone(), &lim()).unwrap();
        let universe = Automaton::universal(base.clone());
        let least = le.project_forall(1, &universe, &lim()).unwrap();
        // brute force over strings to length 4: only "" is llex-below all
        for x in strings(4) {
            assert_eq!(least.contains(&[&x]).unwrap(), x.is_empty(), "{x:?}");
        }
        // vacuous truth with an empty range
        let none = Automaton::empty_language(base.clone());
        let vac = le.project_forall(1, &none, &lim()).unwrap();
        let full = RegularRelation::full(base, 1, &lim()).unwrap();
        assert!(vac.equivalent(&full, &lim()).unwrap());
    }

    #[test]
    fn instantiate_examples() {
        let base = Alphabet::binary();
        let le = llex_relation(base.clone(), &lim()).unwrap();
        let above_empty = le.instantiate(0, "", &lim()).unwrap();
        let full = RegularRelation::full(base.clone(), 1, &lim()).unwrap();
        assert!(above_empty.equivalent(&full, &lim()).unwrap());

        let eq = equality_relation(base.clone(), &lim()).unwrap();
        let just_01 = eq.instantiate(1, "01", &lim()).unwrap();
        assert!(just_01.contains(&["01"]).unwrap());
        assert_eq!(just_01.enumerate_tuples(5), vec![vec!["01".to_string()]]);

        // successor on 1*: S(x, y) iff y = x1
        let unary = Alphabet::unary();
        let tracks = TrackAlphabet::new(unary.clone(), 2).unwrap();
        let t = tracks.clone();
        let succ = Automaton::build_dfa(
            tracks.symbols().clone(),
            0u8,
            move |&st, sym| match (st, &t.components(sym)[..]) {
                (0, [Component::Sym(0), Component::Sym(0)]) => Some(0),
                (0, [Component::Pad, Component::Sym(0)]) => Some(1),
                _ => None,
            },
            |&st| st == 1,
            &lim(),
        )
        .unwrap();
        let s = RegularRelation::from_calculus(tracks, succ, &lim()).unwrap();
        let pred_of_111 = s.instantiate(1, "111", &lim()).unwrap();
        assert_eq!(pred_of_111.enumerate_tuples(5), vec![vec!["11".to_string()]]);
    }

    #[test]
    fn rearrange_swap_and_involution() {
        let base = Alphabet::binary();
        let le = llex_relation(base, &lim()).unwrap();
        let identity = le.rearrange(&[0, 1], &lim()).unwrap();
        assert!(identity.equivalent(&le, &lim()).unwrap());
        let ge = le.rearrange(&[1, 0], &lim()).unwrap();
        let pairs = [
            ("", "0"),
            ("0", "1"),
            ("1", "0"),
            ("01", "1"),
            ("10", "01"),
            ("11", "11"),
            ("0", "00"),
            ("101", "11"),
            ("00", "000"),
            ("010", "01"),
        ];
        for (a, b) in pairs {
            assert_eq!(
                ge.contains(&[a, b]).unwrap(),
                le.contains(&[b, a]).unwrap(),
                "pair ({a:?},{b:?})"
            );
        }
        let back = ge.rearrange(&[1, 0], &lim()).unwrap();
        assert!(back.equivalent(&le, &lim()).unwrap());
        assert_eq!(back, le);
    }

    #[test]
    fn link_matches_definition() {
        let base = Alphabet::binary();
        // R(a1,a2,a3): a1 = a2; S(b1..b4): b3 = b4
        let tracks3 = TrackAlphabet::new(base.clone(), 3).unwrap();
        let tracks4 = TrackAlphabet::new(base.clone(), 4).unwrap();
        let r = track_equality(&tracks3, 0, 1, &lim()).unwrap();
        let s = track_equality(&tracks4, 2, 3, &lim()).unwrap();
        let linked = r.link(&s, 2, &lim()).unwrap();
        assert_eq!(linked.arity(), 5);
        let words = strings(1); // "", "0", "1"
        for a1 in &words {
            for a2 in &words {
                for a3 in &words {
                    for a4 in &words {
                        for a5 in &words {
                            let expect = r.contains(&[a1, a2, a3]).unwrap()
                                && s.contains(&[a2, a3, a4, a5]).unwrap();
                            assert_eq!(
                                linked.contains(&[a1, a2, a3, a4, a5]).unwrap(),
                                expect,
                                "tuple ({a1},{a2},{a3},{a4},{a5})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn link_with_full_relation_is_cylindrification() {
        let base = Alphabet::binary();
        let le = llex_relation(base.clone(), &lim()).unwrap();
        let full3 = RegularRelation::full(base.clone(), 3, &lim()).unwrap();
        let linked = le.link(&full3, 1, &lim()).unwrap();
        let universe = Automaton::universal(base);
        let cyl = le.cylindrify(&universe, &lim()).unwrap();
        assert!(linked.equivalent(&cyl, &lim()).unwrap());
        // link with an empty first relation is empty
        let none = RegularRelation::empty(le.base().clone(), 2, &lim()).unwrap();
        assert!(none.link(&full3, 1, &lim()).unwrap().is_empty());
    }

    #[test]
    fn relations_stay_within_valid_convolutions() {
        let base = Alphabet::binary();
        let le = llex_relation(base.clone(), &lim()).unwrap();
        let universe = Automaton::universal(base);
        for rel in [
            le.clone(),
            le.cylindrify(&universe, &lim()).unwrap(),
            le.rearrange(&[1, 0], &lim()).unwrap(),
            le.cylindrify(&universe, &lim())
                .unwrap()
                .project_exists(0, &universe, &lim())
                .unwrap(),
        ] {
            let valid = valid_convolutions(rel.tracks(), &lim()).unwrap();
            let outside = rel
                .automaton()
                .product(&valid, ProductMode::Minus, &lim())
                .unwrap();
            assert!(outside.is_empty());
        }
    }
}

//! Structure presentations: a regular domain plus one regular relation per
//! signature symbol, together with the constructions that preserve
//! presentability (products, disjoint unions, quotients, re-encoding over a
//! binary alphabet).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::alphabet::{Alphabet, Component, SymbolId, TrackAlphabet};
use crate::automaton::{Automaton, Limits, ProductMode};
use crate::compiler;
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind, Span, Term};
use crate::relation::{self, RegularRelation};

/// Relation names with their arities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    entries: Vec<(String, usize)>,
}

impl Signature {
    pub fn entries(&self) -> &[(String, usize)] {
        &self.entries
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
    }

    pub fn has(&self, name: &str) -> bool {
        self.arity_of(name).is_some()
    }
}

/// A structure presented by automata: a domain language over a base alphabet
/// and one regular relation per symbol. Relations are always stored
/// intersected with the domain universe of their arity.
#[derive(Debug, Clone)]
pub struct Presentation {
    alphabet: Arc<Alphabet>,
    domain: Automaton,
    relations: BTreeMap<String, RegularRelation>,
}

impl Presentation {
    /// Checked constructor: canonicalizes the domain and restricts every
    /// relation to tuples of domain elements.
    pub fn new(
        alphabet: Arc<Alphabet>,
        domain: Automaton,
        relations: Vec<(String, RegularRelation)>,
        limits: &Limits,
    ) -> Result<Presentation> {
        if !domain.alphabet().same_as(&alphabet) {
            return Err(Error::AlphabetMismatch(
                "domain automaton must use the base alphabet".into(),
            ));
        }
        let domain = domain.minimize(limits)?;
        let mut p = Presentation {
            alphabet,
            domain,
            relations: BTreeMap::new(),
        };
        let mut universes: HashMap<usize, RegularRelation> = HashMap::new();
        for (name, rel) in relations {
            if !universes.contains_key(&rel.arity()) {
                universes.insert(rel.arity(), p.domain_universe(rel.arity(), limits)?);
            }
            p.insert_relation(name, rel, &universes, limits)?;
        }
        Ok(p)
    }

    /// Assembly for constructions whose relations are already restricted to
    /// domain tuples; skips the universe intersection.
    pub(crate) fn assemble(
        alphabet: Arc<Alphabet>,
        domain: Automaton,
        relations: Vec<(String, RegularRelation)>,
        limits: &Limits,
    ) -> Result<Presentation> {
        let domain = domain.minimize(limits)?;
        let mut map = BTreeMap::new();
        for (name, rel) in relations {
            if map.insert(name.clone(), rel).is_some() {
                return Err(Error::NameClash { name });
            }
        }
        Ok(Presentation {
            alphabet,
            domain,
            relations: map,
        })
    }

    fn insert_relation(
        &mut self,
        name: String,
        rel: RegularRelation,
        universes: &HashMap<usize, RegularRelation>,
        limits: &Limits,
    ) -> Result<()> {
        if !rel.base().same_as(&self.alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "relation {name} is not over the base alphabet"
            )));
        }
        if self.relations.contains_key(&name) {
            return Err(Error::NameClash { name });
        }
        let universe = &universes[&rel.arity()];
        let restricted = rel.intersect(universe, limits)?;
        self.relations.insert(name, restricted);
        Ok(())
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn domain(&self) -> &Automaton {
        &self.domain
    }

    pub fn relations(&self) -> impl Iterator<Item = (&String, &RegularRelation)> {
        self.relations.iter()
    }

    pub fn relation(&self, name: &str) -> Result<&RegularRelation> {
        self.relations.get(name).ok_or_else(|| Error::UnknownRelation {
            name: name.to_string(),
        })
    }

    pub fn signature(&self) -> Signature {
        Signature {
            entries: self
                .relations
                .iter()
                .map(|(n, r)| (n.clone(), r.arity()))
                .collect(),
        }
    }

    /// All convolutions of arity-many domain elements.
    pub fn domain_universe(&self, arity: usize, limits: &Limits) -> Result<RegularRelation> {
        let tracks = TrackAlphabet::new(self.alphabet.clone(), arity)?;
        let mut acc = relation::valid_convolutions(&tracks, limits)?;
        for i in 0..arity {
            let guard = relation::span_automaton(&tracks, &[i], &self.domain, limits)?;
            acc = acc.product(&guard, ProductMode::And, limits)?;
        }
        RegularRelation::from_calculus(tracks, acc, limits)
    }

    /// Extends the presentation with a named relation.
    pub fn with_relation(
        &self,
        name: &str,
        rel: RegularRelation,
        limits: &Limits,
    ) -> Result<Presentation> {
        let mut next = self.clone();
        let mut universes = HashMap::new();
        universes.insert(rel.arity(), self.domain_universe(rel.arity(), limits)?);
        next.insert_relation(name.to_string(), rel, &universes, limits)?;
        Ok(next)
    }

    /// Restricts the presentation to a regular subset of its domain.
    pub fn restrict(&self, subset: &Automaton, limits: &Limits) -> Result<Presentation> {
        let domain = self
            .domain
            .product(subset, ProductMode::And, limits)?
            .minimize(limits)?;
        Presentation::new(
            self.alphabet.clone(),
            domain,
            self.relations
                .iter()
                .map(|(n, r)| (n.clone(), r.clone()))
                .collect(),
            limits,
        )
    }

    /// Membership of a string in the domain.
    pub fn in_domain(&self, element: &str) -> Result<bool> {
        Ok(self.domain.accepts(&self.alphabet.word(element)?))
    }
}

fn signatures_match(p: &Presentation, q: &Presentation) -> Result<()> {
    if p.signature() != q.signature() {
        return Err(Error::WrongSignature(
            "presentations must share a signature".into(),
        ));
    }
    Ok(())
}

/// Runs `inner` (a relation over the element base) on one component of every
/// pair symbol of a k-track word over the pair alphabet.
fn component_lift(
    big_tracks: &TrackAlphabet,
    pair_tracks: &TrackAlphabet,
    component: usize,
    inner: &Automaton,
    limits: &Limits,
) -> Result<Automaton> {
    let k = big_tracks.arity();
    let inner_tracks = TrackAlphabet::new(pair_tracks.base().clone(), k)?;
    if !inner.alphabet().same_as(inner_tracks.symbols()) {
        return Err(Error::AlphabetMismatch(
            "component relation has the wrong arity".into(),
        ));
    }
    let det = inner.determinize(limits)?;
    let det2 = det.clone();
    let big = big_tracks.clone();
    let pairs = pair_tracks.clone();
    Automaton::build_dfa(
        big_tracks.symbols().clone(),
        (det.initial() as u32, false),
        move |&(q, done), sym| {
            let cols: Vec<Component> = big
                .components(sym)
                .into_iter()
                .map(|c| match c {
                    Component::Pad => Component::Pad,
                    Component::Sym(pair_sym) => pairs.components(pair_sym)[component],
                })
                .collect();
            if cols.iter().all(|c| c.is_pad()) {
                Some((q, true))
            } else if done {
                None
            } else {
                let id = inner_tracks.id_of(&cols).expect("not all-pad");
                Some((det.det_step(q as usize, id) as u32, false))
            }
        },
        move |&(q, _)| det2.is_accepting(q as usize),
        limits,
    )
}

/// Cartesian product: elements are pairs, encoded as two-track convolutions
/// over the shared base alphabet, and every relation holds componentwise.
pub fn product_presentation(
    p: &Presentation,
    q: &Presentation,
    limits: &Limits,
) -> Result<Presentation> {
    if !p.alphabet().same_as(q.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "product requires a shared base alphabet".into(),
        ));
    }
    signatures_match(p, q)?;
    let pair_tracks = TrackAlphabet::new(p.alphabet().clone(), 2)?;
    let pair_alphabet = pair_tracks.symbols().clone();
    // Domain: valid pairs whose components lie in the two domains.
    let valid = relation::valid_convolutions(&pair_tracks, limits)?;
    let left = relation::span_automaton(&pair_tracks, &[0], p.domain(), limits)?;
    let right = relation::span_automaton(&pair_tracks, &[1], q.domain(), limits)?;
    let domain = valid
        .product(&left, ProductMode::And, limits)?
        .product(&right, ProductMode::And, limits)?;
    let mut relations = Vec::new();
    for (name, rp) in p.relations() {
        let rq = q.relation(name)?;
        let arity = rp.arity();
        let big_tracks = TrackAlphabet::new(pair_alphabet.clone(), arity)?;
        let a = component_lift(&big_tracks, &pair_tracks, 0, rp.automaton(), limits)?;
        let b = component_lift(&big_tracks, &pair_tracks, 1, rq.automaton(), limits)?;
        let both = a.product(&b, ProductMode::And, limits)?;
        let rel = RegularRelation::from_automaton(big_tracks, both, limits)?;
        relations.push((name.clone(), rel));
    }
    // Component lifts of domain-restricted relations stay domain-restricted.
    Presentation::assemble(pair_alphabet, domain, relations, limits)
}

fn fresh_symbol_name(taken: &[String], seed: &str) -> String {
    if !taken.iter().any(|t| t == seed) {
        return seed.to_string();
    }
    let mut n = 0;
    loop {
        let candidate = format!("{seed}{n}");
        if !taken.iter().any(|t| t == &candidate) {
            return candidate;
        }
        n += 1;
    }
}

/// Disjoint union: a fresh tag symbol is prefixed to each side's elements and
/// every relation holds within one part.
pub fn disjoint_union(p: &Presentation, q: &Presentation, limits: &Limits) -> Result<Presentation> {
    if !p.alphabet().same_as(q.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "disjoint union requires a shared base alphabet".into(),
        ));
    }
    signatures_match(p, q)?;
    let mut names: Vec<String> = p.alphabet().names().to_vec();
    let tag_left = fresh_symbol_name(&names, "l");
    names.push(tag_left.clone());
    let tag_right = fresh_symbol_name(&names, "r");
    names.push(tag_right.clone());
    let big = Alphabet::new(names.clone())?;
    let left_id = big.index_of(&tag_left).unwrap();
    let right_id = big.index_of(&tag_right).unwrap();

    let lift_word = |aut: &Automaton, tag: SymbolId| -> Result<Automaton> {
        // tag . L(aut), with symbol ids shared between the two alphabets
        // because the big alphabet extends the base.
        let n = aut.state_count();
        let mut transitions: Vec<(usize, SymbolId, usize)> = vec![(0, tag, 1 + aut.initial())];
        for (s, sym, t) in aut.transitions() {
            transitions.push((1 + s, sym, 1 + t));
        }
        let mut eps = Vec::new();
        for (s, t) in aut.epsilon_moves() {
            eps.push((1 + s, 1 + t));
        }
        let accepting: Vec<usize> = aut.accepting_states().iter().map(|s| 1 + s).collect();
        Automaton::nfa(big.clone(), n + 1, 0, &accepting, &transitions, &eps)
    };

    let domain = Automaton::union_all(
        &[
            &lift_word(p.domain(), left_id)?,
            &lift_word(q.domain(), right_id)?,
        ],
        limits,
    )?;

    let mut relations = Vec::new();
    for (name, rp) in p.relations() {
        let rq = q.relation(name)?;
        let arity = rp.arity();
        let small_tracks = rp.tracks().clone();
        let big_tracks = TrackAlphabet::new(big.clone(), arity)?;
        let lift_rel = |rel: &Automaton, tag: SymbolId| -> Result<Automaton> {
            let tag_col = big_tracks.id_of(&vec![Component::Sym(tag); arity])?;
            let n = rel.state_count();
            let mut transitions: Vec<(usize, SymbolId, usize)> =
                vec![(0, tag_col, 1 + rel.initial())];
            for (s, sym, t) in rel.transitions() {
                // Base symbol ids agree between the two track alphabets
                // because components below the tag ids are unchanged.
                let comps = small_tracks.components(sym);
                transitions.push((1 + s, big_tracks.id_of(&comps)?, 1 + t));
            }
            let accepting: Vec<usize> = rel.accepting_states().iter().map(|s| 1 + s).collect();
            Automaton::nfa(big_tracks.symbols().clone(), n + 1, 0, &accepting, &transitions, &[])
        };
        let both = Automaton::union_all(
            &[
                &lift_rel(rp.automaton(), left_id)?,
                &lift_rel(rq.automaton(), right_id)?,
            ],
            limits,
        )?;
        let rel = RegularRelation::from_automaton(big_tracks, both, limits)?;
        relations.push((name.clone(), rel));
    }
    Presentation::new(big, domain, relations, limits)
}

/// Re-encodes a presentation over the binary alphabet by fixed-width binary
/// codes for the base symbols (most significant bit first). The result is
/// isomorphic to the input and its track alphabets stay small regardless of
/// the original base size.
pub fn to_binary(p: &Presentation, limits: &Limits) -> Result<Presentation> {
    let base = p.alphabet();
    let width = usize::max(1, (usize::BITS - (base.len() - 1).leading_zeros()) as usize);
    let base_len = base.len();
    let bits = Alphabet::binary();

    // The re-encoded automata run the original one code block at a time:
    // a state is the original state plus the bit columns buffered so far.
    let domain = {
        let aut = p.domain().clone();
        let aut2 = aut.clone();
        Automaton::build_dfa(
            bits.clone(),
            (aut.initial() as u32, Vec::<u8>::new()),
            move |(q, buf), b| {
                let mut buf = buf.clone();
                buf.push(b as u8);
                if buf.len() < width {
                    return Some((*q, buf));
                }
                let sym = buf.iter().fold(0usize, |acc, &bit| acc * 2 + bit as usize);
                if sym >= base_len {
                    return None;
                }
                Some((aut.det_step(*q as usize, sym) as u32, Vec::new()))
            },
            move |(q, buf)| buf.is_empty() && aut2.is_accepting(*q as usize),
            limits,
        )?
        .minimize(limits)?
    };

    let mut relations = Vec::new();
    for (name, rel) in p.relations() {
        let arity = rel.arity();
        let old_tracks = rel.tracks().clone();
        let new_tracks = TrackAlphabet::new(bits.clone(), arity)?;
        let nt = new_tracks.clone();
        let aut = rel.automaton().clone();
        let aut2 = aut.clone();
        let dfa = Automaton::build_dfa(
            new_tracks.symbols().clone(),
            (aut.initial() as u32, Vec::<SymbolId>::new()),
            move |(q, buf), col| {
                let mut buf = buf.clone();
                buf.push(col);
                if buf.len() < width {
                    return Some((*q, buf));
                }
                // Decode the block: per track, either all columns pad or a
                // full code of some base symbol.
                let cols: Vec<Vec<Component>> =
                    buf.iter().map(|&c| nt.components(c)).collect();
                let mut decoded = Vec::with_capacity(arity);
                for track in 0..arity {
                    let pads = cols.iter().filter(|c| c[track].is_pad()).count();
                    if pads == width {
                        decoded.push(Component::Pad);
                    } else if pads == 0 {
                        let mut v = 0usize;
                        for c in &cols {
                            match c[track] {
                                Component::Sym(bit) => v = v * 2 + bit,
                                Component::Pad => unreachable!(),
                            }
                        }
                        if v >= base_len {
                            return None;
                        }
                        decoded.push(Component::Sym(v));
                    } else {
                        return None; // pads inside a code block
                    }
                }
                let sym = old_tracks.id_of(&decoded).ok()?;
                Some((aut.det_step(*q as usize, sym) as u32, Vec::new()))
            },
            move |(q, buf)| buf.is_empty() && aut2.is_accepting(*q as usize),
            limits,
        )?;
        relations.push((
            name.clone(),
            RegularRelation::from_calculus(new_tracks, dfa, limits)?,
        ));
    }
    // Re-encoding maps domain-restricted relations to domain-restricted ones.
    Presentation::assemble(bits, domain, relations, limits)
}

/// Encodes one element of `p` under the [`to_binary`] re-encoding.
pub fn to_binary_element(p: &Presentation, element: &str) -> Result<String> {
    let base = p.alphabet();
    let width = usize::max(1, (usize::BITS - (base.len() - 1).leading_zeros()) as usize);
    let word = base.word(element)?;
    let mut out = String::new();
    for sym in word {
        for b in (0..width).rev() {
            out.push(if (sym >> b) & 1 == 1 { '1' } else { '0' });
        }
    }
    Ok(out)
}

/// Mode selector for [`quotient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientMode {
    /// Relations are restricted to representatives; requires the equivalence
    /// to be a congruence for every relation (checked).
    Restrict,
    /// A relation holds of representatives iff it holds of some equivalent
    /// tuple (the general quotient).
    Lift,
}

fn span(start: usize) -> Span {
    Span { start, end: start }
}

fn atom(rel: &str, vars: &[&str]) -> Formula {
    Formula {
        kind: FormulaKind::Atom {
            rel: rel.to_string(),
            args: vars.iter().map(|v| Term::Var(v.to_string())).collect(),
        },
        span: span(0),
    }
}

fn forall(v: &str, body: Formula) -> Formula {
    Formula {
        kind: FormulaKind::Forall(v.to_string(), Box::new(body)),
        span: span(0),
    }
}

fn exists(v: &str, body: Formula) -> Formula {
    Formula {
        kind: FormulaKind::Exists(v.to_string(), Box::new(body)),
        span: span(0),
    }
}

fn and(a: Formula, b: Formula) -> Formula {
    Formula {
        kind: FormulaKind::And(Box::new(a), Box::new(b)),
        span: span(0),
    }
}

fn implies(a: Formula, b: Formula) -> Formula {
    Formula {
        kind: FormulaKind::Implies(Box::new(a), Box::new(b)),
        span: span(0),
    }
}

fn not(a: Formula) -> Formula {
    Formula {
        kind: FormulaKind::Not(Box::new(a)),
        span: span(0),
    }
}

fn and_all(mut fs: Vec<Formula>) -> Formula {
    let mut acc = fs.pop().expect("nonempty conjunction");
    while let Some(f) = fs.pop() {
        acc = and(f, acc);
    }
    acc
}

/// Quotient by a regular equivalence relation. The quotient domain is the set
/// of length-lexicographically least representatives.
pub fn quotient(
    p: &Presentation,
    e: &RegularRelation,
    mode: QuotientMode,
    limits: &Limits,
) -> Result<Presentation> {
    if e.arity() != 2 {
        return Err(Error::ArityMismatch("equivalence must be binary".into()));
    }
    if !e.base().same_as(p.alphabet()) {
        return Err(Error::AlphabetMismatch(
            "equivalence must be over the base alphabet".into(),
        ));
    }
    // Name the candidate equivalence and the length-lex order inside a
    // scratch presentation so the axioms can be decided as sentences.
    let llex_lt = relation::llex_strict_relation(p.alphabet().clone(), limits)?;
    let scratch = p
        .with_relation("__eq", e.clone(), limits)?
        .with_relation("__llt", llex_lt, limits)?;
    let axioms: [(&str, Formula); 3] = [
        ("reflexivity", forall("x", atom("__eq", &["x", "x"]))),
        (
            "symmetry",
            forall(
                "x",
                forall(
                    "y",
                    implies(atom("__eq", &["x", "y"]), atom("__eq", &["y", "x"])),
                ),
            ),
        ),
        (
            "transitivity",
            forall(
                "x",
                forall(
                    "y",
                    forall(
                        "z",
                        implies(
                            and(atom("__eq", &["x", "y"]), atom("__eq", &["y", "z"])),
                            atom("__eq", &["x", "z"]),
                        ),
                    ),
                ),
            ),
        ),
    ];
    for (axiom, f) in axioms {
        if !compiler::decide(&scratch, &f, limits)? {
            return Err(Error::NotEquivalence {
                axiom: axiom.to_string(),
            });
        }
    }
    // Rep = { x : no equivalent y is length-lex below x }
    let rep_formula = not(exists(
        "y",
        and(atom("__llt", &["y", "x"]), atom("__eq", &["x", "y"])),
    ));
    let rep = compiler::compile(&scratch, &rep_formula, limits)?;
    let rep_domain = rep.relation.automaton().clone();

    let mut relations: Vec<(String, RegularRelation)> = Vec::new();
    match mode {
        QuotientMode::Restrict => {
            for (name, rel) in p.relations() {
                let k = rel.arity();
                let xs: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
                let ys: Vec<String> = (0..k).map(|i| format!("y{i}")).collect();
                let xrefs: Vec<&str> = xs.iter().map(String::as_str).collect();
                let yrefs: Vec<&str> = ys.iter().map(String::as_str).collect();
                let mut hyp: Vec<Formula> = (0..k)
                    .map(|i| atom("__eq", &[&xs[i], &ys[i]]))
                    .collect();
                hyp.push(atom(name, &xrefs));
                let mut congruence = implies(and_all(hyp), atom(name, &yrefs));
                for v in xs.iter().chain(ys.iter()) {
                    congruence = forall(v, congruence);
                }
                if !compiler::decide(&scratch, &congruence, limits)? {
                    return Err(Error::NotCongruence {
                        relation: name.clone(),
                    });
                }
                relations.push((name.clone(), rel.clone()));
            }
        }
        QuotientMode::Lift => {
            for (name, rel) in p.relations() {
                let k = rel.arity();
                let xs: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
                let ys: Vec<String> = (0..k).map(|i| format!("y{i}")).collect();
                let yrefs: Vec<&str> = ys.iter().map(String::as_str).collect();
                let mut parts: Vec<Formula> = (0..k)
                    .map(|i| atom("__eq", &[&xs[i], &ys[i]]))
                    .collect();
                parts.push(atom(name, &yrefs));
                let mut lifted = and_all(parts);
                for y in ys.iter().rev() {
                    lifted = exists(y, lifted);
                }
                let compiled = compiler::compile(&scratch, &lifted, limits)?;
                debug_assert_eq!(compiled.free_vars, xs);
                relations.push((name.clone(), compiled.relation));
            }
        }
    }
    // Restricting the domain to Rep cuts every relation down to
    // representative tuples.
    Presentation::new(p.alphabet().clone(), rep_domain, relations, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::equality_relation;

    fn lim() -> Limits {
        Limits::default()
    }

    /// (1*; Le) with Le(x,y) iff |x| <= |y|.
    fn unary_order() -> Presentation {
        let base = Alphabet::unary();
        let domain = Automaton::universal(base.clone());
        let tracks = TrackAlphabet::new(base.clone(), 2).unwrap();
        let t = tracks.clone();
        let le = Automaton::build_dfa(
            tracks.symbols().clone(),
            (),
            move |_, sym| match t.components(sym)[..] {
                [Component::Sym(_), Component::Sym(_)] => Some(()),
                [Component::Pad, Component::Sym(_)] => Some(()),
                _ => None,
            },
            |_| true,
            &lim(),
        )
        .unwrap();
        let le = RegularRelation::from_automaton(tracks, le, &lim()).unwrap();
        Presentation::new(base, domain, vec![("Le".into(), le)], &lim()).unwrap()
    }

    #[test]
    fn relations_are_restricted_to_domain() {
        let base = Alphabet::binary();
        // domain 0*, relation = full equality on Sigma*
        let domain = Automaton::build_dfa(
            base.clone(),
            true,
            |&ok, sym| Some(ok && sym == 0),
            |&ok| ok,
            &lim(),
        )
        .unwrap();
        let eq = equality_relation(base.clone(), &lim()).unwrap();
        let p = Presentation::new(base, domain, vec![("Eq".into(), eq)], &lim()).unwrap();
        let stored = p.relation("Eq").unwrap();
        assert!(stored.contains(&["00", "00"]).unwrap());
        assert!(!stored.contains(&["01", "01"]).unwrap(), "outside domain");
    }

    #[test]
    fn product_is_componentwise() {
        let p = unary_order();
        let prod = product_presentation(&p, &p, &lim()).unwrap();
        // element (1^a, 1^b) is the convolution of the two unary strings
        let pair = |a: usize, b: usize| -> String {
            let tracks = TrackAlphabet::new(Alphabet::unary(), 2).unwrap();
            let x = "1".repeat(a);
            let y = "1".repeat(b);
            let w = tracks.convolve(&[&x, &y]).unwrap();
            w.iter()
                .map(|&s| tracks.symbols().name(s).to_string())
                .collect::<Vec<_>>()
                .join("")
        };
        // ordering is componentwise
        let le = prod.relation("Le").unwrap();
        let e = |a, b| pair(a, b);
        // (1,2) <= (2,2) but (2,1) not<= (1,2)
        let names: Vec<String> = prod.alphabet().names().to_vec();
        assert!(!names.is_empty());
        let ok = le
            .contains(&[&e(1, 2), &e(2, 2)])
            .unwrap();
        assert!(ok);
        assert!(!le.contains(&[&e(2, 1), &e(1, 2)]).unwrap());
        assert!(le.contains(&[&e(0, 0), &e(3, 1)]).unwrap());
    }

    #[test]
    fn disjoint_union_keeps_parts_apart() {
        let p = unary_order();
        let u = disjoint_union(&p, &p, &lim()).unwrap();
        let le = u.relation("Le").unwrap();
        assert!(le.contains(&["l1", "l11"]).unwrap());
        assert!(le.contains(&["r1", "r11"]).unwrap());
        assert!(!le.contains(&["l1", "r11"]).unwrap(), "across parts");
        assert!(u.in_domain("l111").unwrap());
        assert!(u.in_domain("r").unwrap());
        assert!(!u.in_domain("lr").unwrap());
        assert!(!u.in_domain("111").unwrap());
    }

    #[test]
    fn binarize_preserves_membership() {
        let base = Alphabet::new(["a", "b", "c"]).unwrap();
        let domain = Automaton::universal(base.clone());
        let eq = equality_relation(base.clone(), &lim()).unwrap();
        let p = Presentation::new(base, domain, vec![("Eq".into(), eq)], &lim()).unwrap();
        let b = to_binary(&p, &lim()).unwrap();
        assert_eq!(b.alphabet().len(), 2);
        let enc = |s: &str| to_binary_element(&p, s).unwrap();
        assert_eq!(enc("abc"), "000110");
        assert!(b.in_domain(&enc("abc")).unwrap());
        assert!(!b.in_domain("0").unwrap(), "odd length is no code");
        let eq_b = b.relation("Eq").unwrap();
        assert!(eq_b.contains(&[&enc("ab"), &enc("ab")]).unwrap());
        assert!(!eq_b.contains(&[&enc("ab"), &enc("ac")]).unwrap());
    }

    #[test]
    fn quotient_by_equality_is_identity() {
        let p = unary_order();
        let eq = equality_relation(p.alphabet().clone(), &lim()).unwrap();
        let q = quotient(&p, &eq, QuotientMode::Lift, &lim()).unwrap();
        assert!(q
            .domain()
            .equivalent(p.domain(), &lim())
            .unwrap());
        assert!(q
            .relation("Le")
            .unwrap()
            .equivalent(p.relation("Le").unwrap(), &lim())
            .unwrap());
    }

    #[test]
    fn quotient_by_length_parity() {
        // E(x, y) iff |x| = |y| mod 2: two classes with reps "" and "1".
        let p = unary_order();
        let tracks = TrackAlphabet::new(p.alphabet().clone(), 2).unwrap();
        let t = tracks.clone();
        let parity = Automaton::build_dfa(
            tracks.symbols().clone(),
            (0u8, 0u8),
            move |&(a, b), sym| match t.components(sym)[..] {
                [Component::Sym(_), Component::Sym(_)] => Some(((a + 1) % 2, (b + 1) % 2)),
                [Component::Sym(_), Component::Pad] => Some(((a + 1) % 2, b)),
                [Component::Pad, Component::Sym(_)] => Some((a, (b + 1) % 2)),
                _ => None,
            },
            |&(a, b)| a == b,
            &lim(),
        )
        .unwrap();
        let e = RegularRelation::from_automaton(tracks, parity, &lim()).unwrap();
        let q = quotient(&p, &e, QuotientMode::Lift, &lim()).unwrap();
        let elems = RegularRelation::from_language(q.domain(), &lim())
            .unwrap()
            .enumerate_tuples(5);
        assert_eq!(
            elems,
            vec![vec!["".to_string()], vec!["1".to_string()]],
            "llex-least representatives"
        );
        // brute-force representative check to length 6
        for n in 0..=6usize {
            let s = "1".repeat(n);
            let expected_rep = n < 2;
            assert_eq!(q.in_domain(&s).unwrap(), expected_rep, "len {n}");
        }
        assert!(q.relation("Le").unwrap().contains(&["", "1"]).unwrap());
    }

    #[test]
    fn quotient_rejects_non_equivalence() {
        let p = unary_order();
        // Le itself is not symmetric
        let le = p.relation("Le").unwrap().clone();
        match quotient(&p, &le, QuotientMode::Lift, &lim()) {
            Err(Error::NotEquivalence { axiom }) => assert_eq!(axiom, "symmetry"),
            other => panic!("expected NotEquivalence, got {other:?}"),
        }
    }
}

//! Compiles extended first-order formulas against a presentation into
//! regular relations, and decides sentences.
//!
//! Every quantifier is relativized to the domain language. Plain quantifiers
//! reduce to the projection calculus; the "infinitely many" quantifier marks
//! acceptor states whose residual over witness-only columns is infinite; the
//! "m mod n many" quantifier tracks witness-count residues per state with a
//! positivity flag, rejecting tuples whose witness set is infinite.

use std::collections::HashMap;

use crate::alphabet::{Component, SymbolId, TrackAlphabet};
use crate::automaton::{Automaton, Limits};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind, Term};
use crate::presentation::Presentation;
use crate::relation::{self, RegularRelation};

/// Result of compiling a formula with free variables.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    /// Free variables in order of first occurrence; track i of the relation
    /// carries the value of `free_vars[i]`.
    pub free_vars: Vec<String>,
    pub relation: RegularRelation,
    /// The formula text this relation was compiled from.
    pub provenance: String,
}

#[derive(Clone)]
enum Value {
    Rel { vars: Vec<String>, rel: RegularRelation },
    Sent(bool),
}

struct Ctx<'a> {
    p: &'a Presentation,
    limits: &'a Limits,
    universes: HashMap<usize, RegularRelation>,
    equality: Option<RegularRelation>,
}

impl<'a> Ctx<'a> {
    fn new(p: &'a Presentation, limits: &'a Limits) -> Ctx<'a> {
        Ctx {
            p,
            limits,
            universes: HashMap::new(),
            equality: None,
        }
    }

    /// Convolutions of arity-many domain elements; complements are relative
    /// to this.
    fn universe(&mut self, arity: usize) -> Result<RegularRelation> {
        if let Some(u) = self.universes.get(&arity) {
            return Ok(u.clone());
        }
        let u = self.p.domain_universe(arity, self.limits)?;
        self.universes.insert(arity, u.clone());
        Ok(u)
    }

    fn equality(&mut self) -> Result<RegularRelation> {
        if let Some(e) = &self.equality {
            return Ok(e.clone());
        }
        let raw = relation::equality_relation(self.p.alphabet().clone(), self.limits)?;
        let e = raw.intersect(&self.universe(2)?, self.limits)?;
        self.equality = Some(e.clone());
        Ok(e)
    }

    fn domain_as_relation(&mut self) -> Result<RegularRelation> {
        self.universe(1)
    }

    fn check_constant(&self, c: &str) -> Result<()> {
        if !self.p.in_domain(c)? {
            return Err(Error::ConstantOutsideDomain {
                constant: c.to_string(),
            });
        }
        Ok(())
    }

    fn negate(&mut self, v: Value) -> Result<Value> {
        Ok(match v {
            Value::Sent(b) => Value::Sent(!b),
            Value::Rel { vars, rel } => {
                let u = self.universe(vars.len())?;
                Value::Rel {
                    vars,
                    rel: rel.complement_within(&u, self.limits)?,
                }
            }
        })
    }

    /// Aligns two relations on the union of their variable lists (left order
    /// first) by cylindrification and rearrangement.
    fn align(
        &mut self,
        a_vars: Vec<String>,
        a_rel: RegularRelation,
        b_vars: Vec<String>,
        b_rel: RegularRelation,
    ) -> Result<(Vec<String>, RegularRelation, RegularRelation)> {
        let mut vars = a_vars.clone();
        for v in &b_vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let lift = |ctx: &mut Ctx, own: &[String], rel: RegularRelation| -> Result<RegularRelation> {
            let mut cur_vars: Vec<String> = own.to_vec();
            let mut cur = rel;
            for v in &vars {
                if !cur_vars.contains(v) {
                    cur = cur.cylindrify(ctx.p.domain(), ctx.limits)?;
                    cur_vars.push(v.clone());
                }
            }
            if cur_vars != vars {
                let perm: Vec<usize> = vars
                    .iter()
                    .map(|v| cur_vars.iter().position(|w| w == v).unwrap())
                    .collect();
                cur = cur.rearrange(&perm, ctx.limits)?;
            }
            Ok(cur)
        };
        let a = lift(self, &a_vars, a_rel)?;
        let b = lift(self, &b_vars, b_rel)?;
        Ok((vars, a, b))
    }

    fn conjoin(&mut self, a: Value, b: Value) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Sent(x), Value::Sent(y)) => Value::Sent(x && y),
            (Value::Sent(true), v) | (v, Value::Sent(true)) => v,
            (Value::Sent(false), Value::Rel { vars, rel })
            | (Value::Rel { vars, rel }, Value::Sent(false)) => Value::Rel {
                vars,
                rel: RegularRelation::empty(rel.base().clone(), rel.arity(), self.limits)?,
            },
            (Value::Rel { vars: av, rel: ar }, Value::Rel { vars: bv, rel: br }) => {
                let (vars, a, b) = self.align(av, ar, bv, br)?;
                Value::Rel {
                    vars,
                    rel: a.intersect(&b, self.limits)?,
                }
            }
        })
    }

    fn disjoin(&mut self, a: Value, b: Value) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Sent(x), Value::Sent(y)) => Value::Sent(x || y),
            (Value::Sent(false), v) | (v, Value::Sent(false)) => v,
            (Value::Sent(true), Value::Rel { vars, .. })
            | (Value::Rel { vars, .. }, Value::Sent(true)) => {
                let u = self.universe(vars.len())?;
                Value::Rel { vars, rel: u }
            }
            (Value::Rel { vars: av, rel: ar }, Value::Rel { vars: bv, rel: br }) => {
                let (vars, a, b) = self.align(av, ar, bv, br)?;
                Value::Rel {
                    vars,
                    rel: a.union(&b, self.limits)?,
                }
            }
        })
    }

    /// Ensures `var` appears in the value, extending with a domain track if
    /// the body does not mention it, then moves it to the last track.
    fn var_to_last(&mut self, v: Value, var: &str) -> Result<(Vec<String>, RegularRelation)> {
        let (mut vars, mut rel) = match v {
            Value::Rel { vars, rel } if vars.iter().any(|w| w == var) => (vars, rel),
            Value::Rel { vars, rel } => {
                let extended = rel.cylindrify(self.p.domain(), self.limits)?;
                let mut vs = vars;
                vs.push(var.to_string());
                (vs, extended)
            }
            Value::Sent(b) => {
                let rel = if b {
                    self.domain_as_relation()?
                } else {
                    RegularRelation::empty(self.p.alphabet().clone(), 1, self.limits)?
                };
                (vec![var.to_string()], rel)
            }
        };
        let pos = vars.iter().position(|w| w == var).unwrap();
        if pos + 1 != vars.len() {
            let mut perm: Vec<usize> = (0..vars.len()).filter(|&i| i != pos).collect();
            perm.push(pos);
            rel = rel.rearrange(&perm, self.limits)?;
            let moved = vars.remove(pos);
            vars.push(moved);
        }
        Ok((vars, rel))
    }

    fn eval(&mut self, f: &Formula) -> Result<Value> {
        let result = match &f.kind {
            FormulaKind::Atom { rel, args } => self.eval_atom(rel, args),
            FormulaKind::Equal(a, b) => self.eval_equal(a, b),
            FormulaKind::Not(x) => {
                let v = self.eval(x)?;
                self.negate(v)
            }
            FormulaKind::And(a, b) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                self.conjoin(va, vb)
            }
            FormulaKind::Or(a, b) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                self.disjoin(va, vb)
            }
            FormulaKind::Implies(a, b) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                let na = self.negate(va)?;
                self.disjoin(na, vb)
            }
            FormulaKind::Iff(a, b) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                let fwd = {
                    let na = self.negate(va.clone())?;
                    self.disjoin(na, vb.clone())?
                };
                let bwd = {
                    let nb = self.negate(vb)?;
                    self.disjoin(nb, va)?
                };
                self.conjoin(fwd, bwd)
            }
            FormulaKind::Exists(var, body) => {
                let v = self.eval(body)?;
                let (mut vars, rel) = self.var_to_last(v, var)?;
                vars.pop();
                if rel.arity() == 1 {
                    Ok(Value::Sent(
                        rel.project_exists_bool(self.p.domain(), self.limits)?,
                    ))
                } else {
                    let projected =
                        rel.project_exists(rel.arity() - 1, self.p.domain(), self.limits)?;
                    Ok(Value::Rel {
                        vars,
                        rel: projected,
                    })
                }
            }
            FormulaKind::Forall(var, body) => {
                let v = self.eval(body)?;
                let (mut vars, rel) = self.var_to_last(v, var)?;
                vars.pop();
                // not exists not, relative to the domain universes
                let inner_u = self.universe(rel.arity())?;
                let negated = rel.complement_within(&inner_u, self.limits)?;
                if negated.arity() == 1 {
                    Ok(Value::Sent(
                        !negated.project_exists_bool(self.p.domain(), self.limits)?,
                    ))
                } else {
                    let some_bad =
                        negated.project_exists(negated.arity() - 1, self.p.domain(), self.limits)?;
                    let outer_u = self.universe(some_bad.arity())?;
                    Ok(Value::Rel {
                        vars,
                        rel: some_bad.complement_within(&outer_u, self.limits)?,
                    })
                }
            }
            FormulaKind::ExistsInf(var, body) => {
                let v = self.eval(body)?;
                let (mut vars, rel) = self.var_to_last(v, var)?;
                vars.pop();
                if rel.arity() == 1 {
                    let witnesses = rel.restrict_track(0, self.p.domain(), self.limits)?;
                    Ok(Value::Sent(witnesses.is_infinite()))
                } else {
                    Ok(Value::Rel {
                        vars,
                        rel: self.exists_infinitely_many(&rel)?,
                    })
                }
            }
            FormulaKind::ExistsMod {
                modulus,
                residue,
                var,
                body,
            } => {
                let v = self.eval(body)?;
                let (mut vars, rel) = self.var_to_last(v, var)?;
                vars.pop();
                if rel.arity() == 1 {
                    let witnesses = rel.restrict_track(0, self.p.domain(), self.limits)?;
                    let count = witnesses.count_words_mod(*modulus, self.limits)?;
                    Ok(Value::Sent(count == Some(*residue)))
                } else {
                    Ok(Value::Rel {
                        vars,
                        rel: self.exists_mod(&rel, *modulus, *residue)?,
                    })
                }
            }
        };
        // Attach the offending subformula to resource errors once.
        result.map_err(|e| match e {
            Error::StateCap { states, cap, context } if !context.starts_with("subformula") => {
                Error::StateCap {
                    states,
                    cap,
                    context: format!("subformula `{f}` ({context})"),
                }
            }
            other => other,
        })
    }

    fn eval_atom(&mut self, name: &str, args: &[Term]) -> Result<Value> {
        let stored = self.p.relation(name)?;
        if stored.arity() != args.len() {
            return Err(Error::ArityMismatch(format!(
                "relation {name} has arity {}, applied to {} arguments",
                stored.arity(),
                args.len()
            )));
        }
        for t in args {
            if let Term::Const(c) = t {
                self.check_constant(c)?;
            }
        }
        // All-constant atoms are sentences.
        if args.iter().all(|t| matches!(t, Term::Const(_))) {
            let tuple: Vec<&str> = args
                .iter()
                .map(|t| match t {
                    Term::Const(c) => c.as_str(),
                    Term::Var(_) => unreachable!(),
                })
                .collect();
            return Ok(Value::Sent(stored.contains(&tuple)?));
        }
        // Pin constants right to left so remaining indices stay valid.
        let mut rel = stored.clone();
        let mut vars: Vec<String> = Vec::new();
        let mut pending: Vec<String> = Vec::new();
        for t in args {
            if let Term::Var(v) = t {
                pending.push(v.clone());
            }
        }
        for (idx, t) in args.iter().enumerate().rev() {
            if let Term::Const(c) = t {
                rel = rel.instantiate(idx, c, self.limits)?;
            }
        }
        vars.append(&mut pending);
        // Merge duplicate variable tracks: equate then project the later one.
        loop {
            let mut dup: Option<(usize, usize)> = None;
            'outer: for i in 0..vars.len() {
                for j in i + 1..vars.len() {
                    if vars[i] == vars[j] {
                        dup = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = dup else { break };
            let eq = relation::track_equality(rel.tracks(), i, j, self.limits)?;
            let pinned = rel.intersect(&eq, self.limits)?;
            if pinned.arity() == 1 {
                unreachable!("duplicates require arity >= 2");
            }
            let universal = Automaton::universal(self.p.alphabet().clone());
            rel = pinned.project_exists(j, &universal, self.limits)?;
            vars.remove(j);
        }
        Ok(Value::Rel { vars, rel })
    }

    fn eval_equal(&mut self, a: &Term, b: &Term) -> Result<Value> {
        match (a, b) {
            (Term::Const(c1), Term::Const(c2)) => {
                self.check_constant(c1)?;
                self.check_constant(c2)?;
                Ok(Value::Sent(c1 == c2))
            }
            (Term::Var(x), Term::Var(y)) if x == y => Ok(Value::Rel {
                vars: vec![x.clone()],
                rel: self.domain_as_relation()?,
            }),
            (Term::Var(x), Term::Var(y)) => Ok(Value::Rel {
                vars: vec![x.clone(), y.clone()],
                rel: self.equality()?,
            }),
            (Term::Var(x), Term::Const(c)) | (Term::Const(c), Term::Var(x)) => {
                self.check_constant(c)?;
                let word = self.p.alphabet().word(c)?;
                let singleton = Automaton::single_word(self.p.alphabet().clone(), &word);
                let rel = RegularRelation::from_language(&singleton, self.limits)?;
                Ok(Value::Rel {
                    vars: vec![x.clone()],
                    rel: rel.intersect(&self.domain_as_relation()?, self.limits)?,
                })
            }
        }
    }

    /// The set of tuples with infinitely many witnesses on the last track.
    ///
    /// After restricting witnesses to the domain, a state is marked if its
    /// residual language over witness-only columns is infinite. A tuple is
    /// accepted if some witness prefix of the convolution's length reaches a
    /// marked state with the witness track live throughout.
    fn exists_infinitely_many(&mut self, rel: &RegularRelation) -> Result<RegularRelation> {
        let k1 = rel.arity();
        let k = k1 - 1;
        let restricted = rel
            .restrict_track(k, self.p.domain(), self.limits)?
            .minimize(self.limits)?;
        let tracks = rel.tracks().clone();
        let narrow = TrackAlphabet::new(rel.base().clone(), k)?;
        let marked = mark_infinite_residuals(&restricted, &tracks, k);
        let mut edges: Vec<(usize, SymbolId, usize)> = Vec::new();
        for (q, sym, q2) in restricted.transitions() {
            let comps = tracks.components(sym);
            if comps[k].is_pad() {
                continue; // long witnesses keep their track live
            }
            let kept: Vec<Component> = comps[..k].to_vec();
            if kept.iter().all(|c| c.is_pad()) {
                continue; // witness-only column, beyond the tuple part
            }
            edges.push((q, narrow.id_of(&kept)?, q2));
        }
        let accepting: Vec<usize> = (0..restricted.state_count())
            .filter(|&q| marked[q])
            .collect();
        let nfa = Automaton::nfa(
            narrow.symbols().clone(),
            restricted.state_count(),
            restricted.initial(),
            &accepting,
            &edges,
            &[],
        )?;
        let dfa = nfa.determinize(self.limits)?;
        RegularRelation::from_calculus(narrow, dfa, self.limits)
    }

    /// The set of tuples whose witness set on the last track is finite with
    /// cardinality congruent to `residue` mod `modulus`.
    fn exists_mod(
        &mut self,
        rel: &RegularRelation,
        modulus: u32,
        residue: u32,
    ) -> Result<RegularRelation> {
        let k1 = rel.arity();
        let k = k1 - 1;
        let n = modulus;
        let restricted = rel
            .restrict_track(k, self.p.domain(), self.limits)?
            .minimize(self.limits)?;
        let tracks = rel.tracks().clone();
        let narrow = TrackAlphabet::new(rel.base().clone(), k)?;
        let states = restricted.state_count();
        let marked = mark_infinite_residuals(&restricted, &tracks, k);
        let tail_counts = finite_residual_counts(&restricted, &tracks, k, &marked, n);

        // Per narrow symbol: the full symbols with each live witness letter,
        // and the full symbol with a padded witness.
        let base_len = rel.base().len();
        let mut live_syms: Vec<Vec<SymbolId>> = Vec::with_capacity(narrow.symbol_count());
        let mut pad_syms: Vec<SymbolId> = Vec::with_capacity(narrow.symbol_count());
        for nsym in 0..narrow.symbol_count() {
            let comps = narrow.components(nsym);
            let mut with_live = Vec::with_capacity(base_len);
            for b in 0..base_len {
                let mut full = comps.clone();
                full.push(Component::Sym(b));
                with_live.push(tracks.id_of(&full)?);
            }
            let mut full = comps.clone();
            full.push(Component::Pad);
            pad_syms.push(tracks.id_of(&full)?);
            live_syms.push(with_live);
        }

        // Count class: 0 encodes zero, v > 0 encodes a positive count
        // congruent to v - 1 mod n.
        #[derive(Clone, PartialEq, Eq, Hash)]
        struct Tally {
            live: Vec<u32>,
            done: Vec<u32>,
        }
        let add = |a: u32, b: u32| -> u32 {
            if a == 0 {
                b
            } else if b == 0 {
                a
            } else {
                ((a - 1 + b - 1) % n) + 1
            }
        };
        let mut start = Tally {
            live: vec![0; states],
            done: vec![0; states],
        };
        start.live[restricted.initial()] = 1;
        let det = restricted.clone();
        let det2 = restricted.clone();
        let marked2 = marked.clone();
        let tally_accepts = move |t: &Tally| -> bool {
            for q in 0..det2.state_count() {
                if t.live[q] > 0 && marked2[q] {
                    return false; // infinitely many witnesses
                }
            }
            let mut total = 0u32;
            for q in 0..det2.state_count() {
                if det2.is_accepting(q) && t.done[q] > 0 {
                    total = (total + t.done[q] - 1) % n;
                }
                if t.live[q] > 0 {
                    total = (total + (t.live[q] - 1) * tail_counts[q]) % n;
                }
            }
            total == residue % n
        };
        let aut = Automaton::build_dfa(
            narrow.symbols().clone(),
            start,
            move |t, nsym| {
                let mut live = vec![0u32; states];
                let mut done = vec![0u32; states];
                for q in 0..states {
                    if t.live[q] > 0 {
                        for &full in &live_syms[nsym] {
                            let q2 = det.det_step(q, full);
                            live[q2] = add(live[q2], t.live[q]);
                        }
                        let q2 = det.det_step(q, pad_syms[nsym]);
                        done[q2] = add(done[q2], t.live[q]);
                    }
                    if t.done[q] > 0 {
                        let q2 = det.det_step(q, pad_syms[nsym]);
                        done[q2] = add(done[q2], t.done[q]);
                    }
                }
                Some(Tally { live, done })
            },
            tally_accepts,
            self.limits,
        )?;
        // Zero witnesses is congruent to 0, so explicitly restrict to
        // domain tuples.
        let u = self.universe(k)?;
        RegularRelation::from_calculus(narrow, aut, self.limits)?.intersect(&u, self.limits)
    }
}

/// Witness-only columns are those padding every track but the last. A state
/// is marked iff its residual language over such columns is infinite.
fn mark_infinite_residuals(aut: &Automaton, tracks: &TrackAlphabet, witness: usize) -> Vec<bool> {
    let states = aut.state_count();
    let mut only_edges: Vec<Vec<u32>> = vec![Vec::new(); states];
    let mut inv: Vec<Vec<u32>> = vec![Vec::new(); states];
    for (q, sym, q2) in aut.transitions() {
        let comps = tracks.components(sym);
        let is_witness_only = comps
            .iter()
            .enumerate()
            .all(|(i, c)| if i == witness { !c.is_pad() } else { c.is_pad() });
        if is_witness_only {
            only_edges[q].push(q2 as u32);
            inv[q2].push(q as u32);
        }
    }
    // States that can reach acceptance through witness-only columns.
    let mut co = vec![false; states];
    let mut stack: Vec<usize> = (0..states).filter(|&q| aut.is_accepting(q)).collect();
    for &q in &stack {
        co[q] = true;
    }
    // note: co starts true exactly on accepting states
    let mut co_stack = stack.clone();
    while let Some(q) = co_stack.pop() {
        for &p in &inv[q] {
            if !co[p as usize] {
                co[p as usize] = true;
                co_stack.push(p as usize);
            }
        }
    }
    // A state has an infinite residual iff it reaches a cycle lying within
    // the co-reachable witness-only subgraph.
    let mut cyclic = vec![false; states];
    {
        // Kahn peeling: states left on a cycle never reach in-degree zero.
        let mut indeg = vec![0usize; states];
        let mut live_edges: Vec<Vec<u32>> = vec![Vec::new(); states];
        for q in 0..states {
            if !co[q] {
                continue;
            }
            for &t in &only_edges[q] {
                if co[t as usize] {
                    live_edges[q].push(t);
                    indeg[t as usize] += 1;
                }
            }
        }
        let mut queue: Vec<usize> = (0..states).filter(|&q| co[q] && indeg[q] == 0).collect();
        let mut removed = vec![false; states];
        while let Some(q) = queue.pop() {
            removed[q] = true;
            for &t in &live_edges[q] {
                indeg[t as usize] -= 1;
                if indeg[t as usize] == 0 {
                    queue.push(t as usize);
                }
            }
        }
        for q in 0..states {
            if co[q] && !removed[q] {
                cyclic[q] = true;
            }
        }
    }
    // Backward closure: anything reaching a cyclic state is marked.
    let mut marked = cyclic;
    stack = (0..states).filter(|&q| marked[q]).collect();
    while let Some(q) = stack.pop() {
        for &p in &inv[q] {
            let p = p as usize;
            if co[p] && !marked[p] {
                marked[p] = true;
                stack.push(p);
            }
        }
    }
    marked
}

/// For states with a finite witness-only residual, the residual's cardinality
/// mod n. States with infinite residuals get 0 (they are handled separately).
fn finite_residual_counts(
    aut: &Automaton,
    tracks: &TrackAlphabet,
    witness: usize,
    marked: &[bool],
    n: u32,
) -> Vec<u32> {
    let states = aut.state_count();
    let mut only_edges: Vec<Vec<u32>> = vec![Vec::new(); states];
    for (q, sym, q2) in aut.transitions() {
        let comps = tracks.components(sym);
        let is_witness_only = comps
            .iter()
            .enumerate()
            .all(|(i, c)| if i == witness { !c.is_pad() } else { c.is_pad() });
        if is_witness_only {
            only_edges[q].push(q2 as u32);
        }
    }
    // The subgraph on unmarked states is acyclic along useful paths, so a
    // memoized post-order pass terminates.
    let mut memo: Vec<Option<u32>> = vec![None; states];
    for root in 0..states {
        if marked[root] || memo[root].is_some() {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(top) = stack.len().checked_sub(1) {
            let (q, edge_start) = stack[top];
            if memo[q].is_some() {
                stack.pop();
                continue;
            }
            let mut pushed = false;
            let mut i = edge_start;
            while i < only_edges[q].len() {
                let t = only_edges[q][i] as usize;
                i += 1;
                if !marked[t] && memo[t].is_none() {
                    stack[top].1 = i;
                    stack.push((t, 0));
                    pushed = true;
                    break;
                }
            }
            if pushed {
                continue;
            }
            let mut total = if aut.is_accepting(q) { 1u32 } else { 0 };
            for &t in &only_edges[q] {
                if !marked[t as usize] {
                    total = (total + memo[t as usize].unwrap_or(0)) % n;
                }
            }
            memo[q] = Some(total % n);
            stack.pop();
        }
    }
    (0..states).map(|q| memo[q].unwrap_or(0)).collect()
}

/// Compiles a formula with at least one free variable into a relation.
pub fn compile(p: &Presentation, f: &Formula, limits: &Limits) -> Result<CompiledFormula> {
    let mut ctx = Ctx::new(p, limits);
    match ctx.eval(f)? {
        Value::Rel { vars, rel } => {
            let target = f.free_vars();
            let (vars, rel) = if vars != target {
                let perm: Vec<usize> = target
                    .iter()
                    .map(|v| vars.iter().position(|w| w == v).unwrap())
                    .collect();
                (target, rel.rearrange(&perm, limits)?)
            } else {
                (vars, rel)
            };
            Ok(CompiledFormula {
                free_vars: vars,
                relation: rel,
                provenance: f.to_string(),
            })
        }
        Value::Sent(_) => Err(Error::NotASentence),
    }
}

/// Decides a sentence.
pub fn decide(p: &Presentation, sentence: &Formula, limits: &Limits) -> Result<bool> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables { vars: free });
    }
    let mut ctx = Ctx::new(p, limits);
    match ctx.eval(sentence)? {
        Value::Sent(b) => Ok(b),
        Value::Rel { .. } => unreachable!("closed formula produced a relation"),
    }
}

/// One satisfying assignment: variable name paired with its value.
pub type Assignment = Vec<(String, String)>;

/// The length-lexicographically least satisfying assignments, in convolution
/// order, up to `bound` of them.
pub fn witness(p: &Presentation, f: &Formula, bound: usize, limits: &Limits) -> Result<Vec<Assignment>> {
    let compiled = compile(p, f, limits)?;
    Ok(compiled
        .relation
        .enumerate_tuples(bound)
        .into_iter()
        .map(|tuple| {
            compiled
                .free_vars
                .iter()
                .cloned()
                .zip(tuple)
                .collect::<Assignment>()
        })
        .collect())
}

/// Extends a presentation with a relation defined by a formula.
pub fn define_relation(
    p: &Presentation,
    name: &str,
    f: &Formula,
    limits: &Limits,
) -> Result<Presentation> {
    if p.signature().has(name) {
        return Err(Error::NameClash {
            name: name.to_string(),
        });
    }
    let compiled = compile(p, f, limits)?;
    p.with_relation(name, compiled.relation, limits)
}

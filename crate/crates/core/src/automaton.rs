//! Finite automata over explicit alphabets.
//!
//! Deterministic automata are stored as complete row-major transition tables;
//! nondeterministic ones (with epsilon moves) as per-state edge lists. All
//! values are immutable after construction and operations allocate fresh
//! outputs, so automata can be shared freely across threads.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::alphabet::{Alphabet, SymbolId};
use crate::error::{Error, Result};

/// Caps on construction sizes. Exceeding a cap is an error, never a wrong
/// answer.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Maximum number of states any single construction may explore.
    pub state_cap: usize,
    /// Maximum number of transition-table entries (states x alphabet).
    pub transition_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            state_cap: 200_000,
            transition_cap: 50_000_000,
        }
    }
}

impl Limits {
    pub fn with_state_cap(state_cap: usize) -> Limits {
        Limits {
            state_cap,
            ..Limits::default()
        }
    }

    fn check(&self, states: usize, symbols: usize, context: &str) -> Result<()> {
        if states > self.state_cap {
            return Err(Error::StateCap {
                states,
                cap: self.state_cap,
                context: context.to_string(),
            });
        }
        if states.saturating_mul(symbols) > self.transition_cap {
            return Err(Error::StateCap {
                states,
                cap: self.transition_cap / symbols.max(1),
                context: format!("{context} (transition table)"),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Trans {
    /// Complete deterministic table, entry `state * k + sym`.
    Det(Vec<u32>),
    /// General labeled edges plus epsilon moves, both sorted per state.
    Nondet {
        edges: Vec<Vec<(SymbolId, u32)>>,
        eps: Vec<Vec<u32>>,
    },
}

/// A finite-state acceptor over an explicit alphabet.
#[derive(Debug, Clone)]
pub struct Automaton {
    alphabet: Arc<Alphabet>,
    states: usize,
    initial: usize,
    accepting: Vec<bool>,
    trans: Trans,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet.same_as(&other.alphabet)
            && self.states == other.states
            && self.initial == other.initial
            && self.accepting == other.accepting
            && self.trans == other.trans
    }
}

impl Automaton {
    /// General constructor. Transitions are `(from, symbol, to)` triples;
    /// epsilon moves are `(from, to)` pairs.
    pub fn nfa(
        alphabet: Arc<Alphabet>,
        states: usize,
        initial: usize,
        accepting: &[usize],
        transitions: &[(usize, SymbolId, usize)],
        epsilon: &[(usize, usize)],
    ) -> Result<Automaton> {
        if states == 0 {
            return Err(Error::Format("automaton needs at least one state".into()));
        }
        if initial >= states {
            return Err(Error::Format("initial state out of range".into()));
        }
        let k = alphabet.len();
        let mut acc = vec![false; states];
        for &a in accepting {
            if a >= states {
                return Err(Error::Format("accepting state out of range".into()));
            }
            acc[a] = true;
        }
        let mut edges = vec![Vec::new(); states];
        for &(s, sym, t) in transitions {
            if s >= states || t >= states || sym >= k {
                return Err(Error::Format("transition out of range".into()));
            }
            edges[s].push((sym, t as u32));
        }
        let mut eps = vec![Vec::new(); states];
        for &(s, t) in epsilon {
            if s >= states || t >= states {
                return Err(Error::Format("epsilon move out of range".into()));
            }
            eps[s].push(t as u32);
        }
        for e in &mut edges {
            e.sort_unstable();
            e.dedup();
        }
        for e in &mut eps {
            e.sort_unstable();
            e.dedup();
        }
        Ok(Automaton {
            alphabet,
            states,
            initial,
            accepting: acc,
            trans: Trans::Nondet { edges, eps },
        })
    }

    /// Builds a complete DFA from an explicit transition table.
    /// `table[state * k + sym]` is the successor state.
    pub fn dfa(
        alphabet: Arc<Alphabet>,
        states: usize,
        initial: usize,
        accepting: &[usize],
        table: Vec<u32>,
    ) -> Result<Automaton> {
        let k = alphabet.len();
        if states == 0 || table.len() != states * k {
            return Err(Error::Format("bad transition table size".into()));
        }
        if initial >= states || table.iter().any(|&t| t as usize >= states) {
            return Err(Error::Format("state index out of range".into()));
        }
        let mut acc = vec![false; states];
        for &a in accepting {
            if a >= states {
                return Err(Error::Format("accepting state out of range".into()));
            }
            acc[a] = true;
        }
        Ok(Automaton {
            alphabet,
            states,
            initial,
            accepting: acc,
            trans: Trans::Det(table),
        })
    }

    /// Explores a deterministic automaton from a seed tag. `step` returns the
    /// successor tag or `None` for the dead state; `accept` marks accepting
    /// tags. The result is a complete DFA (not minimized).
    pub fn build_dfa<T, FS, FA>(
        alphabet: Arc<Alphabet>,
        start: T,
        mut step: FS,
        accept: FA,
        limits: &Limits,
    ) -> Result<Automaton>
    where
        T: Clone + Eq + std::hash::Hash,
        FS: FnMut(&T, SymbolId) -> Option<T>,
        FA: Fn(&T) -> bool,
    {
        let k = alphabet.len();
        let mut ids: HashMap<T, usize> = HashMap::new();
        let mut tags: Vec<T> = Vec::new();
        let mut table: Vec<u32> = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        ids.insert(start.clone(), 0);
        tags.push(start);
        queue.push_back(0);
        let mut sink: Option<usize> = None;
        while let Some(s) = queue.pop_front() {
            table.resize((s + 1) * k, u32::MAX);
            for sym in 0..k {
                let tag = tags[s].clone();
                let next = step(&tag, sym);
                let t = match next {
                    Some(nt) => match ids.get(&nt) {
                        Some(&id) => id,
                        None => {
                            let id = tags.len();
                            limits.check(id + 1, k, "automaton exploration")?;
                            ids.insert(nt.clone(), id);
                            tags.push(nt);
                            queue.push_back(id);
                            id
                        }
                    },
                    None => *sink.get_or_insert_with(|| usize::MAX),
                };
                table[s * k + sym] = t as u32;
            }
        }
        let mut n = tags.len();
        let accepting: Vec<usize> = (0..n).filter(|&s| accept(&tags[s])).collect();
        if sink.is_some() {
            // Patch the placeholder sink index now that the state count is known.
            let sink_id = n as u32;
            for entry in table.iter_mut() {
                if *entry == u32::MAX {
                    *entry = sink_id;
                }
            }
            table.extend(std::iter::repeat(sink_id).take(k));
            n += 1;
        }
        Automaton::dfa(alphabet, n, 0, &accepting, table)
    }

    /// Accepts every string.
    pub fn universal(alphabet: Arc<Alphabet>) -> Automaton {
        let k = alphabet.len();
        Automaton::dfa(alphabet, 1, 0, &[0], vec![0; k]).expect("universal automaton")
    }

    /// Accepts nothing.
    pub fn empty_language(alphabet: Arc<Alphabet>) -> Automaton {
        let k = alphabet.len();
        Automaton::dfa(alphabet, 1, 0, &[], vec![0; k]).expect("empty automaton")
    }

    /// Accepts exactly the given word.
    pub fn single_word(alphabet: Arc<Alphabet>, word: &[SymbolId]) -> Automaton {
        let k = alphabet.len();
        let n = word.len() + 2; // chain + sink
        let sink = (n - 1) as u32;
        let mut table = vec![sink; n * k];
        for (i, &sym) in word.iter().enumerate() {
            table[i * k + sym] = (i + 1) as u32;
        }
        Automaton::dfa(alphabet, n, 0, &[word.len()], table).expect("word automaton")
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.states).filter(|&s| self.accepting[s]).collect()
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.trans, Trans::Det(_))
    }

    /// Successor in a deterministic automaton.
    pub fn det_step(&self, state: usize, sym: SymbolId) -> usize {
        match &self.trans {
            Trans::Det(table) => table[state * self.alphabet.len() + sym] as usize,
            Trans::Nondet { .. } => panic!("det_step on nondeterministic automaton"),
        }
    }

    /// All `(from, symbol, to)` transitions, in deterministic order.
    pub fn transitions(&self) -> Vec<(usize, SymbolId, usize)> {
        let k = self.alphabet.len();
        match &self.trans {
            Trans::Det(table) => (0..self.states)
                .flat_map(|s| (0..k).map(move |sym| (s, sym, table[s * k + sym] as usize)))
                .collect(),
            Trans::Nondet { edges, .. } => (0..self.states)
                .flat_map(|s| edges[s].iter().map(move |&(sym, t)| (s, sym, t as usize)))
                .collect(),
        }
    }

    pub fn epsilon_moves(&self) -> Vec<(usize, usize)> {
        match &self.trans {
            Trans::Det(_) => Vec::new(),
            Trans::Nondet { eps, .. } => (0..self.states)
                .flat_map(|s| eps[s].iter().map(move |&t| (s, t as usize)))
                .collect(),
        }
    }

    fn eps_closure(&self, set: &mut Vec<u32>) {
        if let Trans::Nondet { eps, .. } = &self.trans {
            if eps.iter().all(|e| e.is_empty()) {
                return;
            }
            let mut seen = vec![false; self.states];
            for &s in set.iter() {
                seen[s as usize] = true;
            }
            let mut stack: Vec<u32> = set.clone();
            while let Some(s) = stack.pop() {
                for &t in &eps[s as usize] {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        set.push(t);
                        stack.push(t);
                    }
                }
            }
            set.sort_unstable();
        }
    }

    /// Runs the automaton on a word.
    pub fn accepts(&self, word: &[SymbolId]) -> bool {
        match &self.trans {
            Trans::Det(table) => {
                let k = self.alphabet.len();
                let mut s = self.initial;
                for &sym in word {
                    s = table[s * k + sym] as usize;
                }
                self.accepting[s]
            }
            Trans::Nondet { edges, .. } => {
                let mut set = vec![self.initial as u32];
                self.eps_closure(&mut set);
                for &sym in word {
                    let mut next: Vec<u32> = Vec::new();
                    for &s in &set {
                        for &(e_sym, t) in &edges[s as usize] {
                            if e_sym == sym && !next.contains(&t) {
                                next.push(t);
                            }
                        }
                    }
                    self.eps_closure(&mut next);
                    set = next;
                    if set.is_empty() {
                        return false;
                    }
                }
                set.iter().any(|&s| self.accepting[s as usize])
            }
        }
    }

    /// Subset construction. Returns a complete DFA with the same language.
    pub fn determinize(&self, limits: &Limits) -> Result<Automaton> {
        if self.is_deterministic() {
            return Ok(self.clone());
        }
        let k = self.alphabet.len();
        let edges = match &self.trans {
            Trans::Nondet { edges, .. } => edges,
            Trans::Det(_) => unreachable!(),
        };
        let has_eps = match &self.trans {
            Trans::Nondet { eps, .. } => eps.iter().any(|e| !e.is_empty()),
            Trans::Det(_) => false,
        };
        let mut start = vec![self.initial as u32];
        self.eps_closure(&mut start);
        let mut ids: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        let mut table: Vec<u32> = Vec::new();
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut next_row = 0;
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); k];
        while next_row < sets.len() {
            let current = sets[next_row].clone();
            // One pass over the subset's edges, grouped by symbol.
            for &s in &current {
                for &(e_sym, t) in &edges[s as usize] {
                    buckets[e_sym].push(t);
                }
            }
            for sym in 0..k {
                let mut target = std::mem::take(&mut buckets[sym]);
                target.sort_unstable();
                target.dedup();
                if has_eps {
                    self.eps_closure(&mut target);
                }
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        limits.check(id + 1, k, "determinization")?;
                        ids.insert(target.clone(), id);
                        sets.push(target);
                        id
                    }
                };
                table.push(id as u32);
            }
            next_row += 1;
        }
        let accepting: Vec<usize> = sets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.iter().any(|&s| self.accepting[s as usize]))
            .map(|(i, _)| i)
            .collect();
        Automaton::dfa(self.alphabet.clone(), sets.len(), 0, &accepting, table)
    }

    /// Canonical minimal complete DFA: determinize, merge equivalent states,
    /// then renumber breadth-first from the initial state with edges taken in
    /// symbol order. Language-equal automata minimize to identical values.
    pub fn minimize(&self, limits: &Limits) -> Result<Automaton> {
        let det = self.determinize(limits)?;
        let k = det.alphabet.len();
        let table = match &det.trans {
            Trans::Det(t) => t,
            _ => unreachable!(),
        };
        // Only reachable states matter (subset construction already yields
        // reachable-only, but direct `dfa` constructions may not).
        let reachable = det.reachable();
        let block = hopcroft(det.states, k, table, &det.accepting, &reachable);
        // Renumber blocks in BFS order from the initial block.
        let mut order: Vec<u32> = vec![u32::MAX; det.states]; // block -> new id
        let mut repr: Vec<usize> = Vec::new(); // new id -> representative state
        let init_block = block[det.initial];
        order[init_block as usize] = 0;
        repr.push(det.initial);
        let mut head = 0;
        while head < repr.len() {
            let s = repr[head];
            head += 1;
            for sym in 0..k {
                let t = table[s * k + sym] as usize;
                let b = block[t] as usize;
                if order[b] == u32::MAX {
                    order[b] = repr.len() as u32;
                    repr.push(t);
                }
            }
        }
        let n = repr.len();
        let mut new_table = vec![0u32; n * k];
        let mut accepting = Vec::new();
        for (new_id, &s) in repr.iter().enumerate() {
            if det.accepting[s] {
                accepting.push(new_id);
            }
            for sym in 0..k {
                let t = table[s * k + sym] as usize;
                new_table[new_id * k + sym] = order[block[t] as usize];
            }
        }
        Automaton::dfa(det.alphabet.clone(), n, 0, &accepting, new_table)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            let mut push = |t: usize| {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            };
            match &self.trans {
                Trans::Det(table) => {
                    let k = self.alphabet.len();
                    for sym in 0..k {
                        push(table[s * k + sym] as usize);
                    }
                }
                Trans::Nondet { edges, eps } => {
                    for &(_, t) in &edges[s] {
                        push(t as usize);
                    }
                    for &t in &eps[s] {
                        push(t as usize);
                    }
                }
            }
        }
        seen
    }

    fn co_reachable(&self) -> Vec<bool> {
        let mut inv: Vec<Vec<u32>> = vec![Vec::new(); self.states];
        match &self.trans {
            Trans::Det(table) => {
                let k = self.alphabet.len();
                for s in 0..self.states {
                    for sym in 0..k {
                        inv[table[s * k + sym] as usize].push(s as u32);
                    }
                }
            }
            Trans::Nondet { edges, eps } => {
                for s in 0..self.states {
                    for &(_, t) in &edges[s] {
                        inv[t as usize].push(s as u32);
                    }
                    for &t in &eps[s] {
                        inv[t as usize].push(s as u32);
                    }
                }
            }
        }
        let mut seen = vec![false; self.states];
        let mut stack: Vec<usize> = (0..self.states).filter(|&s| self.accepting[s]).collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &inv[s] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    stack.push(p as usize);
                }
            }
        }
        seen
    }

    /// True iff the language is empty. Linear in the automaton size.
    pub fn is_empty(&self) -> bool {
        let reach = self.reachable();
        !(0..self.states).any(|s| reach[s] && self.accepting[s])
    }

    /// The length-lexicographically least accepted word, or `None` if the
    /// language is empty. Ties inside a length are broken by symbol id order.
    pub fn least_accepted(&self) -> Option<Vec<SymbolId>> {
        let det = if self.is_deterministic() {
            self.clone()
        } else {
            self.determinize(&Limits::default()).ok()?
        };
        if det.is_empty() {
            return None;
        }
        let k = det.alphabet.len();
        let table = match &det.trans {
            Trans::Det(t) => t.clone(),
            _ => unreachable!(),
        };
        // Per length, the lex-least path of exactly that length per state.
        let mut paths: Vec<Option<Vec<SymbolId>>> = vec![None; det.states];
        paths[det.initial] = Some(Vec::new());
        for _len in 0..=det.states {
            if let Some(best) = (0..det.states)
                .filter(|&s| det.accepting[s])
                .filter_map(|s| paths[s].clone())
                .min()
            {
                return Some(best);
            }
            let mut next: Vec<Option<Vec<SymbolId>>> = vec![None; det.states];
            for s in 0..det.states {
                if let Some(p) = &paths[s] {
                    for sym in 0..k {
                        let t = table[s * k + sym] as usize;
                        let mut cand = p.clone();
                        cand.push(sym);
                        if next[t].as_ref().map_or(true, |old| cand < *old) {
                            next[t] = Some(cand);
                        }
                    }
                }
            }
            paths = next;
        }
        None
    }

    /// True iff the language is infinite: some strongly connected component of
    /// useful states contains a labeled edge.
    pub fn is_infinite(&self) -> bool {
        let reach = self.reachable();
        let co = self.co_reachable();
        let useful: Vec<bool> = (0..self.states).map(|s| reach[s] && co[s]).collect();
        let mut labeled: Vec<Vec<u32>> = vec![Vec::new(); self.states];
        let mut all: Vec<Vec<u32>> = vec![Vec::new(); self.states];
        for (s, _, t) in self.transitions() {
            if useful[s] && useful[t] {
                labeled[s].push(t as u32);
                all[s].push(t as u32);
            }
        }
        for (s, t) in self.epsilon_moves() {
            if useful[s] && useful[t] {
                all[s].push(t as u32);
            }
        }
        let scc = tarjan_scc(self.states, &all);
        for s in 0..self.states {
            for &t in &labeled[s] {
                if scc[s] == scc[t as usize] {
                    return true;
                }
            }
        }
        false
    }

    /// The first `max_count` accepted words in length-lexicographic order.
    pub fn enumerate(&self, max_count: usize) -> Vec<Vec<SymbolId>> {
        let mut out = Vec::new();
        if max_count == 0 {
            return out;
        }
        let co = self.co_reachable();
        let k = self.alphabet.len();
        let mut start = vec![self.initial as u32];
        self.eps_closure(&mut start);
        let live = |set: &Vec<u32>| set.iter().any(|&s| co[s as usize]);
        if !live(&start) {
            return out;
        }
        let mut queue: VecDeque<(Vec<SymbolId>, Vec<u32>)> = VecDeque::new();
        queue.push_back((Vec::new(), start));
        while let Some((word, set)) = queue.pop_front() {
            if set.iter().any(|&s| self.accepting[s as usize]) {
                out.push(word.clone());
                if out.len() == max_count {
                    return out;
                }
            }
            for sym in 0..k {
                let mut next: Vec<u32> = Vec::new();
                match &self.trans {
                    Trans::Det(table) => {
                        for &s in &set {
                            let t = table[s as usize * k + sym];
                            if !next.contains(&t) {
                                next.push(t);
                            }
                        }
                    }
                    Trans::Nondet { edges, .. } => {
                        for &s in &set {
                            for &(e_sym, t) in &edges[s as usize] {
                                if e_sym == sym && !next.contains(&t) {
                                    next.push(t);
                                }
                            }
                        }
                    }
                }
                self.eps_closure(&mut next);
                if live(&next) {
                    let mut w = word.clone();
                    w.push(sym);
                    queue.push_back((w, next));
                }
            }
        }
        out
    }

    /// Number of accepted words modulo `n`, or `None` if the language is
    /// infinite.
    pub fn count_words_mod(&self, n: u32, limits: &Limits) -> Result<Option<u32>> {
        if self.is_infinite() {
            return Ok(None);
        }
        let det = self.determinize(limits)?;
        let k = det.alphabet.len();
        let co = det.co_reachable();
        // The useful subgraph of a finite language is acyclic; memoized
        // counting from the initial state.
        let mut memo: Vec<Option<u32>> = vec![None; det.states];
        let mut stack: Vec<(usize, usize)> = vec![(det.initial, 0)];
        while let Some(top) = stack.len().checked_sub(1) {
            let (q, sym_start) = stack[top];
            if memo[q].is_some() {
                stack.pop();
                continue;
            }
            let mut pushed = false;
            let mut sym = sym_start;
            while sym < k {
                let t = det.det_step(q, sym);
                sym += 1;
                if co[t] && memo[t].is_none() {
                    stack[top].1 = sym;
                    stack.push((t, 0));
                    pushed = true;
                    break;
                }
            }
            if pushed {
                continue;
            }
            let mut total = if det.accepting[q] { 1u32 } else { 0 };
            for s in 0..k {
                let t = det.det_step(q, s);
                if co[t] {
                    total = (total + memo[t].unwrap_or(0)) % n;
                }
            }
            memo[q] = Some(total % n);
            stack.pop();
        }
        Ok(Some(memo[det.initial].unwrap_or(0) % n))
    }

    /// Boolean combination of two languages over the same alphabet.
    pub fn product(&self, other: &Automaton, mode: ProductMode, limits: &Limits) -> Result<Automaton> {
        if !self.alphabet.same_as(&other.alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "product of [{}] and [{}]",
                self.alphabet, other.alphabet
            )));
        }
        let a = self.determinize(limits)?;
        let b = other.determinize(limits)?;
        let k = a.alphabet.len();
        let ta = match &a.trans {
            Trans::Det(t) => t,
            _ => unreachable!(),
        };
        let tb = match &b.trans {
            Trans::Det(t) => t,
            _ => unreachable!(),
        };
        let mut ids: HashMap<(u32, u32), usize> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let mut table: Vec<u32> = Vec::new();
        ids.insert((a.initial as u32, b.initial as u32), 0);
        pairs.push((a.initial as u32, b.initial as u32));
        let mut head = 0;
        while head < pairs.len() {
            let (sa, sb) = pairs[head];
            head += 1;
            for sym in 0..k {
                let na = ta[sa as usize * k + sym];
                let nb = tb[sb as usize * k + sym];
                let key = (na, nb);
                let id = match ids.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = pairs.len();
                        limits.check(id + 1, k, "product construction")?;
                        ids.insert(key, id);
                        pairs.push(key);
                        id
                    }
                };
                table.push(id as u32);
            }
        }
        let accepting: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter(|(_, &(sa, sb))| {
                let fa = a.accepting[sa as usize];
                let fb = b.accepting[sb as usize];
                match mode {
                    ProductMode::And => fa && fb,
                    ProductMode::Or => fa || fb,
                    ProductMode::Minus => fa && !fb,
                }
            })
            .map(|(i, _)| i)
            .collect();
        Automaton::dfa(a.alphabet.clone(), pairs.len(), 0, &accepting, table)
    }

    /// Relative complement: everything in `universe` that is not in `self`.
    pub fn complement(&self, universe: &Automaton, limits: &Limits) -> Result<Automaton> {
        universe.product(self, ProductMode::Minus, limits)
    }

    /// Language equality, decided by emptiness of both differences.
    pub fn equivalent(&self, other: &Automaton, limits: &Limits) -> Result<bool> {
        Ok(self.product(other, ProductMode::Minus, limits)?.is_empty()
            && other.product(self, ProductMode::Minus, limits)?.is_empty())
    }

    /// Nondeterministic union of several automata over one alphabet.
    pub fn union_all(parts: &[&Automaton], limits: &Limits) -> Result<Automaton> {
        let first = parts.first().ok_or_else(|| Error::Format("empty union".into()))?;
        let alphabet = first.alphabet.clone();
        let mut transitions: Vec<(usize, SymbolId, usize)> = Vec::new();
        let mut epsilon: Vec<(usize, usize)> = Vec::new();
        let mut accepting: Vec<usize> = Vec::new();
        let mut offset = 1; // state 0 is the fresh initial
        for part in parts {
            if !part.alphabet.same_as(&alphabet) {
                return Err(Error::AlphabetMismatch("union".into()));
            }
            epsilon.push((0, offset + part.initial));
            for (s, sym, t) in part.transitions() {
                transitions.push((offset + s, sym, offset + t));
            }
            for (s, t) in part.epsilon_moves() {
                epsilon.push((offset + s, offset + t));
            }
            for s in 0..part.states {
                if part.accepting[s] {
                    accepting.push(offset + s);
                }
            }
            offset += part.states;
        }
        let nfa = Automaton::nfa(alphabet, offset, 0, &accepting, &transitions, &epsilon)?;
        nfa.determinize(limits)
    }
}

/// Mode selector for [`Automaton::product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    And,
    Or,
    Minus,
}

/// Hopcroft partition refinement on a complete DFA. Unreachable states are
/// placed in a block of their own and never looked at again.
fn hopcroft(n: usize, k: usize, table: &[u32], accepting: &[bool], reachable: &[bool]) -> Vec<u32> {
    // Inverse edges per symbol in compressed form: for symbol `sym`, the
    // predecessors of state t are inv_data[sym][inv_off[sym][t]..inv_off[sym][t+1]].
    let mut inv_off: Vec<Vec<u32>> = vec![vec![0u32; n + 1]; k];
    let mut inv_data: Vec<Vec<u32>> = Vec::with_capacity(k);
    for sym in 0..k {
        let off = &mut inv_off[sym];
        for s in 0..n {
            if reachable[s] {
                off[table[s * k + sym] as usize + 1] += 1;
            }
        }
        for t in 0..n {
            off[t + 1] += off[t];
        }
        let mut data = vec![0u32; off[n] as usize];
        let mut cursor = off.clone();
        for s in 0..n {
            if reachable[s] {
                let t = table[s * k + sym] as usize;
                data[cursor[t] as usize] = s as u32;
                cursor[t] += 1;
            }
        }
        inv_data.push(data);
    }
    let preds = |sym: usize, t: usize| -> &[u32] {
        let off = &inv_off[sym];
        &inv_data[sym][off[t] as usize..off[t + 1] as usize]
    };
    let mut block_of: Vec<u32> = vec![0; n];
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    {
        let mut acc = Vec::new();
        let mut rej = Vec::new();
        for s in 0..n {
            if !reachable[s] {
                continue;
            }
            if accepting[s] {
                acc.push(s as u32);
            } else {
                rej.push(s as u32);
            }
        }
        for group in [acc, rej] {
            if !group.is_empty() {
                let id = blocks.len() as u32;
                for &s in &group {
                    block_of[s as usize] = id;
                }
                blocks.push(group);
            }
        }
    }
    let mut worklist: VecDeque<(u32, usize)> = VecDeque::new();
    let mut in_worklist: std::collections::HashSet<(u32, usize)> = std::collections::HashSet::new();
    for b in 0..blocks.len() as u32 {
        for sym in 0..k {
            worklist.push_back((b, sym));
            in_worklist.insert((b, sym));
        }
    }
    while let Some((splitter, sym)) = worklist.pop_front() {
        in_worklist.remove(&(splitter, sym));
        // States whose `sym`-successor is in the splitter block.
        let mut preimage: Vec<u32> = Vec::new();
        for &t in &blocks[splitter as usize] {
            preimage.extend_from_slice(preds(sym, t as usize));
        }
        if preimage.is_empty() {
            continue;
        }
        // Group the preimage by current block and split where proper.
        let mut touched: HashMap<u32, Vec<u32>> = HashMap::new();
        for &s in &preimage {
            touched.entry(block_of[s as usize]).or_default().push(s);
        }
        let mut touched: Vec<(u32, Vec<u32>)> = touched.into_iter().collect();
        touched.sort_unstable_by_key(|(b, _)| *b);
        for (b, mut inside) in touched {
            inside.sort_unstable();
            inside.dedup();
            if inside.len() == blocks[b as usize].len() {
                continue; // not a proper split
            }
            let outside: Vec<u32> = blocks[b as usize]
                .iter()
                .copied()
                .filter(|s| !inside.contains(s))
                .collect();
            let new_id = blocks.len() as u32;
            // Keep the larger side in place, move the smaller out.
            let (stay, moved) = if inside.len() <= outside.len() {
                (outside, inside)
            } else {
                (inside, outside)
            };
            for &s in &moved {
                block_of[s as usize] = new_id;
            }
            blocks[b as usize] = stay;
            blocks.push(moved);
            // The moved half is the smaller one; queueing it for every symbol
            // keeps Hopcroft's bound whether or not (b, c) is still pending.
            for c in 0..k {
                worklist.push_back((new_id, c));
                in_worklist.insert((new_id, c));
            }
        }
    }
    block_of
}

fn tarjan_scc(n: usize, adj: &[Vec<u32>]) -> Vec<u32> {
    // Iterative Tarjan to avoid recursion depth limits.
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![u32::MAX; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut comp_count = 0u32;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != u32::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i] as usize;
                *i += 1;
                if index[w] == u32::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap() as usize;
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                call.pop();
                if let Some(&mut (u, _)) = call.last_mut() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_words(k: usize, max_len: usize) -> Vec<Vec<SymbolId>> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for sym in 0..k {
                    let mut v = w.clone();
                    v.push(sym);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn lang(a: &Automaton, max_len: usize) -> Vec<Vec<SymbolId>> {
        all_words(a.alphabet().len(), max_len)
            .into_iter()
            .filter(|w| a.accepts(w))
            .collect()
    }

    /// NFA for (0|1)*1.
    fn ends_in_one() -> Automaton {
        let ab = Alphabet::binary();
        Automaton::nfa(ab, 2, 0, &[1], &[(0, 0, 0), (0, 1, 0), (0, 1, 1)], &[]).unwrap()
    }

    /// DFA for 0*1 with two extra unreachable states.
    fn zeros_then_one_padded() -> Automaton {
        let ab = Alphabet::binary();
        // states: 0 start, 1 accept, 2 sink, 3/4 unreachable
        let table = vec![
            0, 1, // from 0
            2, 2, // from 1
            2, 2, // from 2
            4, 3, // from 3
            3, 4, // from 4
        ];
        Automaton::dfa(ab, 5, 0, &[1], table).unwrap()
    }

    #[test]
    fn determinize_preserves_language() {
        let nfa = ends_in_one();
        let dfa = nfa.determinize(&Limits::default()).unwrap();
        assert!(dfa.is_deterministic());
        for w in all_words(2, 8) {
            assert_eq!(nfa.accepts(&w), dfa.accepts(&w), "word {w:?}");
        }
    }

    #[test]
    fn determinize_of_dfa_is_identity_case() {
        let dfa = zeros_then_one_padded();
        let d2 = dfa.determinize(&Limits::default()).unwrap();
        for w in all_words(2, 8) {
            assert_eq!(dfa.accepts(&w), d2.accepts(&w));
        }
    }

    #[test]
    fn determinize_no_accepting_states_is_empty() {
        let ab = Alphabet::binary();
        let nfa = Automaton::nfa(ab, 2, 0, &[], &[(0, 0, 1), (1, 1, 0)], &[]).unwrap();
        let dfa = nfa.determinize(&Limits::default()).unwrap();
        assert!(dfa.is_empty());
    }

    #[test]
    fn minimize_zeros_then_one() {
        // Myhill-Nerode brute force: residual signatures up to length 8
        // partition the 5-state DFA into exactly 3 reachable classes.
        let dfa = zeros_then_one_padded();
        let min = dfa.minimize(&Limits::default()).unwrap();
        assert_eq!(min.state_count(), 3);
        for w in all_words(2, 8) {
            assert_eq!(dfa.accepts(&w), min.accepts(&w));
        }
    }

    #[test]
    fn minimize_idempotent_and_canonical() {
        let a = ends_in_one().minimize(&Limits::default()).unwrap();
        let b = a.minimize(&Limits::default()).unwrap();
        assert_eq!(a, b);
        // A different automaton for the same language minimizes identically.
        let ab = Alphabet::binary();
        let other = Automaton::nfa(
            ab,
            3,
            0,
            &[2],
            &[(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1), (0, 1, 2), (1, 1, 2)],
            &[],
        )
        .unwrap();
        let c = other.minimize(&Limits::default()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn minimize_empty_language_is_single_sink() {
        let ab = Alphabet::binary();
        let empty = Automaton::empty_language(ab);
        let min = empty.minimize(&Limits::default()).unwrap();
        assert_eq!(min.state_count(), 1);
        assert!(min.is_empty());
    }

    #[test]
    fn product_modes_match_boolean_combinations() {
        let ab = Alphabet::binary();
        // 0*
        let zeros = Automaton::build_dfa(ab.clone(), true, |&ok, sym| Some(ok && sym == 0), |&ok| ok, &Limits::default()).unwrap();
        // 0*1
        let zeros_one = Automaton::build_dfa(
            ab.clone(),
            0u8,
            |&st, sym| match (st, sym) {
                (0, 0) => Some(0),
                (0, 1) => Some(1),
                _ => None,
            },
            |&st| st == 1,
            &Limits::default(),
        )
        .unwrap();
        let both = zeros.product(&zeros_one, ProductMode::And, &Limits::default()).unwrap();
        assert!(both.is_empty());
        for w in all_words(2, 6) {
            let or = zeros.product(&zeros_one, ProductMode::Or, &Limits::default()).unwrap();
            let minus = zeros.product(&zeros_one, ProductMode::Minus, &Limits::default()).unwrap();
            assert_eq!(or.accepts(&w), zeros.accepts(&w) || zeros_one.accepts(&w));
            assert_eq!(minus.accepts(&w), zeros.accepts(&w) && !zeros_one.accepts(&w));
        }
    }

    #[test]
    fn product_or_with_empty_is_identity() {
        let a = ends_in_one();
        let empty = Automaton::empty_language(a.alphabet().clone());
        let or = a.product(&empty, ProductMode::Or, &Limits::default()).unwrap();
        assert!(or.equivalent(&a, &Limits::default()).unwrap());
        let minus = a.product(&a, ProductMode::Minus, &Limits::default()).unwrap();
        assert!(minus.is_empty());
    }

    #[test]
    fn complement_is_relative_and_involutive() {
        let ab = Alphabet::binary();
        let universe = Automaton::universal(ab.clone());
        let zeros = Automaton::build_dfa(ab.clone(), true, |&ok, sym| Some(ok && sym == 0), |&ok| ok, &Limits::default()).unwrap();
        let co = zeros.complement(&universe, &Limits::default()).unwrap();
        for w in all_words(2, 6) {
            assert_eq!(co.accepts(&w), !zeros.accepts(&w));
        }
        let back = co.complement(&universe, &Limits::default()).unwrap();
        assert!(back.equivalent(&zeros, &Limits::default()).unwrap());
        let empty = Automaton::empty_language(ab);
        let full = empty.complement(&universe, &Limits::default()).unwrap();
        assert!(full.equivalent(&universe, &Limits::default()).unwrap());
    }

    #[test]
    fn emptiness_witness_is_llex_least() {
        let ab = Alphabet::binary();
        let zeros_one = Automaton::build_dfa(
            ab.clone(),
            0u8,
            |&st, sym| match (st, sym) {
                (0, 0) => Some(0),
                (0, 1) => Some(1),
                _ => None,
            },
            |&st| st == 1,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(zeros_one.least_accepted(), Some(vec![1]));
        let none = Automaton::empty_language(ab.clone());
        assert_eq!(none.least_accepted(), None);
        let universe = Automaton::universal(ab);
        assert_eq!(universe.least_accepted(), Some(vec![]));
    }

    #[test]
    fn infiniteness() {
        let ab = Alphabet::binary();
        let zeros = Automaton::build_dfa(ab.clone(), true, |&ok, sym| Some(ok && sym == 0), |&ok| ok, &Limits::default()).unwrap();
        assert!(zeros.is_infinite());
        // finite language {0, 01}: enumeration oracle agrees with cycle test
        let finite = Automaton::union_all(
            &[
                &Automaton::single_word(ab.clone(), &[0]),
                &Automaton::single_word(ab.clone(), &[0, 1]),
            ],
            &Limits::default(),
        )
        .unwrap();
        assert!(!finite.is_infinite());
        assert_eq!(lang(&finite, finite.state_count() + 2).len(), 2);
        assert!(!Automaton::empty_language(ab).is_infinite());
    }

    #[test]
    fn equivalence() {
        let a = ends_in_one();
        assert!(a.equivalent(&a, &Limits::default()).unwrap());
        let min = a.minimize(&Limits::default()).unwrap();
        assert!(a.equivalent(&min, &Limits::default()).unwrap());
        let ab = Alphabet::binary();
        let zero_star = Automaton::build_dfa(ab, true, |&ok, sym| Some(ok && sym == 0), |&ok| ok, &Limits::default()).unwrap();
        // witness "": accepted by 0* but not by (0|1)*1
        assert!(!a.equivalent(&zero_star, &Limits::default()).unwrap());
    }

    #[test]
    fn enumerate_llex_order() {
        let ab = Alphabet::binary();
        let universe = Automaton::universal(ab.clone());
        assert_eq!(
            universe.enumerate(4),
            vec![vec![], vec![0], vec![1], vec![0, 0]]
        );
        assert!(Automaton::empty_language(ab.clone()).enumerate(5).is_empty());
        // 1(0|1)*
        let one_start = Automaton::build_dfa(
            ab,
            0u8,
            |&st, sym| match (st, sym) {
                (0, 1) => Some(1),
                (0, 0) => None,
                (1, _) => Some(1),
                _ => None,
            },
            |&st| st == 1,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(one_start.enumerate(3), vec![vec![1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn state_cap_is_enforced() {
        let nfa = ends_in_one();
        let tight = Limits {
            state_cap: 1,
            transition_cap: 1000,
        };
        assert!(matches!(
            nfa.determinize(&tight),
            Err(Error::StateCap { .. })
        ));
    }
}

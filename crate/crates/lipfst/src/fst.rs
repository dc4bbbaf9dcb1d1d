//! Finite-state transducers over finite words.
//!
//! A transducer reads one input letter per transition (no input-epsilon
//! moves), emits a finite output word per transition, and accepts by final
//! state. The semantics `[[T]]` is the relation of (input, output) pairs
//! along accepting runs; `T` is *functional* when that relation is a partial
//! function. The functionality test is the classic lag analysis on the
//! trimmed product of the machine with itself.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Letter, Sym, Word};
use crate::error::{Error, Result};

/// One transition: `src --input / output--> dst`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tr {
    pub src: usize,
    pub input: Sym,
    pub output: Word,
    pub dst: usize,
}

/// A finite-state transducer. Immutable after construction; every operation
/// returns a fresh machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    input_alphabet: BTreeSet<Sym>,
    output_alphabet: BTreeSet<Sym>,
    names: Vec<Sym>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    transitions: Vec<Tr>,
    by_src: Vec<Vec<usize>>,
}

/// Result of running a transducer on one input word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunVerdict {
    pub accepted: bool,
    /// Outputs over all accepting runs (deduplicated).
    pub outputs: BTreeSet<Word>,
}

/// Structural classification flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub functional: bool,
    /// At most one transition per (state, input letter).
    pub deterministic: bool,
    /// Every transition outputs exactly one letter.
    pub letter_to_letter: bool,
    /// Deterministic, letter-to-letter, and every state accepting.
    pub mealy: bool,
}

impl Transducer {
    /// Build and validate a transducer from name-based parts.
    ///
    /// `transitions` entries are `(src, input, output, dst)` with the output
    /// given as a (possibly empty) word.
    pub fn new(
        input_alphabet: impl IntoIterator<Item = Sym>,
        output_alphabet: impl IntoIterator<Item = Sym>,
        states: impl IntoIterator<Item = Sym>,
        initial: impl IntoIterator<Item = Sym>,
        accepting: impl IntoIterator<Item = Sym>,
        transitions: impl IntoIterator<Item = (Sym, Sym, Word, Sym)>,
    ) -> Result<Transducer> {
        let input_alphabet: BTreeSet<Sym> = input_alphabet.into_iter().collect();
        let output_alphabet: BTreeSet<Sym> = output_alphabet.into_iter().collect();
        for s in input_alphabet.iter().chain(output_alphabet.iter()) {
            Sym::validate_user_name(s.as_str())?;
        }
        let names: Vec<Sym> = states.into_iter().collect();
        if names.is_empty() {
            return Err(Error::Malformed("transducer needs at least one state".into()));
        }
        let mut index: HashMap<Sym, usize> = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate state name {n}")));
            }
        }
        let resolve = |n: &Sym| -> Result<usize> {
            index.get(n).copied().ok_or_else(|| Error::UnknownState(n.to_string()))
        };
        let initial: BTreeSet<usize> =
            initial.into_iter().map(|n| resolve(&n)).collect::<Result<_>>()?;
        if initial.is_empty() {
            return Err(Error::Malformed("initial state set is empty".into()));
        }
        let accepting: BTreeSet<usize> =
            accepting.into_iter().map(|n| resolve(&n)).collect::<Result<_>>()?;
        let mut trs = Vec::new();
        for (src, input, output, dst) in transitions {
            if !input_alphabet.contains(&input) {
                return Err(Error::UnknownLetter { letter: input.to_string(), side: "input" });
            }
            for o in &output {
                if !output_alphabet.contains(o) {
                    return Err(Error::UnknownLetter { letter: o.to_string(), side: "output" });
                }
            }
            trs.push(Tr { src: resolve(&src)?, input, output, dst: resolve(&dst)? });
        }
        Ok(Transducer::from_indexed(
            input_alphabet,
            output_alphabet,
            names,
            initial,
            accepting,
            trs,
        ))
    }

    /// Internal constructor over already-validated indexed parts.
    pub(crate) fn from_indexed(
        input_alphabet: BTreeSet<Sym>,
        output_alphabet: BTreeSet<Sym>,
        names: Vec<Sym>,
        initial: BTreeSet<usize>,
        accepting: BTreeSet<usize>,
        transitions: Vec<Tr>,
    ) -> Transducer {
        let mut by_src = vec![Vec::new(); names.len()];
        for (i, t) in transitions.iter().enumerate() {
            by_src[t.src].push(i);
        }
        Transducer { input_alphabet, output_alphabet, names, initial, accepting, transitions, by_src }
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, q: usize) -> &Sym {
        &self.names[q]
    }

    pub fn state_names(&self) -> &[Sym] {
        &self.names
    }

    pub fn input_alphabet(&self) -> &BTreeSet<Sym> {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &BTreeSet<Sym> {
        &self.output_alphabet
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn transitions(&self) -> &[Tr] {
        &self.transitions
    }

    pub fn transitions_from(&self, q: usize) -> impl Iterator<Item = &Tr> {
        self.by_src[q].iter().map(move |&i| &self.transitions[i])
    }

    /// Longest transition output in the machine.
    pub fn max_output_len(&self) -> usize {
        self.transitions.iter().map(|t| t.output.len()).max().unwrap_or(0)
    }

    /// Run on an input word: acceptance plus the set of outputs.
    pub fn run(&self, input: &[Sym]) -> Result<RunVerdict> {
        for a in input {
            if !self.input_alphabet.contains(a) {
                return Err(Error::UnknownLetter { letter: a.to_string(), side: "input" });
            }
        }
        // Frontier of (state, output so far); deduplicated per step.
        let mut frontier: BTreeSet<(usize, Word)> =
            self.initial.iter().map(|&q| (q, Word::new())).collect();
        for a in input {
            let mut next = BTreeSet::new();
            for (q, out) in &frontier {
                for t in self.transitions_from(*q) {
                    if &t.input == a {
                        let mut o = out.clone();
                        o.extend(t.output.iter().cloned());
                        next.insert((t.dst, o));
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        let outputs: BTreeSet<Word> = frontier
            .into_iter()
            .filter(|(q, _)| self.accepting.contains(q))
            .map(|(_, o)| o)
            .collect();
        Ok(RunVerdict { accepted: !outputs.is_empty(), outputs })
    }

    /// The unique output on `input`, for functional machines.
    pub fn output(&self, input: &[Sym]) -> Result<Option<Word>> {
        let v = self.run(input)?;
        if v.outputs.len() > 1 {
            return Err(Error::NotFunctional);
        }
        Ok(v.outputs.into_iter().next())
    }

    pub fn classify(&self) -> Classification {
        let mut seen: BTreeSet<(usize, &Sym)> = BTreeSet::new();
        let mut deterministic = true;
        for t in &self.transitions {
            if !seen.insert((t.src, &t.input)) {
                deterministic = false;
                break;
            }
        }
        let letter_to_letter = self.transitions.iter().all(|t| t.output.len() == 1);
        let mealy =
            deterministic && letter_to_letter && self.accepting.len() == self.names.len();
        Classification {
            functional: self.is_functional(),
            deterministic,
            letter_to_letter,
            mealy,
        }
    }

    /// Functionality via lag analysis on the trimmed diagonal self-product.
    ///
    /// Pair states are explored once each; a revisit with a different lag, an
    /// incomparable lag, or a non-empty lag at an accepting pair refutes
    /// functionality. Consistency of all edges with the unique per-state lag
    /// proves it.
    fn is_functional(&self) -> bool {
        let pairs = self.diagonal_pairs();
        let Some(pairs) = pairs else { return true }; // empty trim product
        // BFS lag assignment over trimmed pair states.
        #[derive(Debug, Clone, PartialEq, Eq)]
        enum Lag {
            Left(Word),  // left output = right output . w
            Right(Word), // right output = left output . w
        }
        impl Lag {
            // The empty lag is canonically Left, matching step()'s
            // normalization, so lag equality is plain enum equality.
            fn balanced() -> Lag {
                Lag::Left(Word::new())
            }
            fn is_empty(&self) -> bool {
                match self {
                    Lag::Left(w) | Lag::Right(w) => w.is_empty(),
                }
            }
        }
        // Advance a lag by transition outputs (u1, u2); None = incomparable.
        fn step(lag: &Lag, u1: &[Sym], u2: &[Sym]) -> Option<Lag> {
            let (mut l, mut r) = match lag {
                Lag::Left(w) => {
                    let mut l: VecDeque<Sym> = w.iter().cloned().collect();
                    l.extend(u1.iter().cloned());
                    (l, u2.iter().cloned().collect::<VecDeque<Sym>>())
                }
                Lag::Right(w) => {
                    let mut r: VecDeque<Sym> = w.iter().cloned().collect();
                    r.extend(u2.iter().cloned());
                    (u1.iter().cloned().collect::<VecDeque<Sym>>(), r)
                }
            };
            while let (Some(a), Some(b)) = (l.front(), r.front()) {
                if a != b {
                    return None;
                }
                l.pop_front();
                r.pop_front();
            }
            if r.is_empty() {
                Some(Lag::Left(l.into_iter().collect()))
            } else {
                Some(Lag::Right(r.into_iter().collect()))
            }
        }

        let mut lag: Vec<Option<Lag>> = vec![None; pairs.state_count];
        let mut queue = VecDeque::new();
        for &p in &pairs.initial {
            lag[p] = Some(Lag::balanced());
            queue.push_back(p);
        }
        while let Some(p) = queue.pop_front() {
            let cur = lag[p].clone().expect("queued without lag");
            if pairs.accepting.contains(&p) && !cur.is_empty() {
                return false;
            }
            for &(u1, u2, dst) in &pairs.edges[p] {
                let (u1, u2) = (&pairs.outputs[u1], &pairs.outputs[u2]);
                let Some(next) = step(&cur, u1, u2) else { return false };
                match &lag[dst] {
                    None => {
                        lag[dst] = Some(next);
                        queue.push_back(dst);
                    }
                    Some(existing) => {
                        if *existing != next {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Trimmed diagonal self-product used by the functionality test.
    /// Returns None when the product has no useful state (empty domain).
    fn diagonal_pairs(&self) -> Option<DiagonalPairs> {
        // Forward reachable pair states.
        let mut idx: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states: Vec<(usize, usize)> = Vec::new();
        let mut raw_edges: Vec<Vec<(usize, usize, usize)>> = Vec::new();
        for &a in &self.initial {
            for &b in &self.initial {
                let key = (a, b);
                if !idx.contains_key(&key) {
                    idx.insert(key, states.len());
                    states.push(key);
                    raw_edges.push(Vec::new());
                }
            }
        }
        let mut head = 0;
        while head < states.len() {
            let (a, b) = states[head];
            for &ia in &self.by_src[a] {
                for &ib in &self.by_src[b] {
                    let (ta, tb) = (&self.transitions[ia], &self.transitions[ib]);
                    if ta.input != tb.input {
                        continue;
                    }
                    let key = (ta.dst, tb.dst);
                    let dst = *idx.entry(key).or_insert_with(|| {
                        states.push(key);
                        raw_edges.push(Vec::new());
                        states.len() - 1
                    });
                    raw_edges[head].push((ia, ib, dst));
                }
            }
            head += 1;
        }
        // Co-reachability to accepting pairs.
        let accepting: BTreeSet<usize> = states
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| self.accepting.contains(&a) && self.accepting.contains(&b))
            .map(|(i, _)| i)
            .collect();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
        for (src, es) in raw_edges.iter().enumerate() {
            for &(_, _, dst) in es {
                rev[dst].push(src);
            }
        }
        let mut coreach = vec![false; states.len()];
        let mut queue: VecDeque<usize> = accepting.iter().copied().collect();
        for &p in &accepting {
            coreach[p] = true;
        }
        while let Some(p) = queue.pop_front() {
            for &s in &rev[p] {
                if !coreach[s] {
                    coreach[s] = true;
                    queue.push_back(s);
                }
            }
        }
        // Restrict to trim states (keep indices, drop edges through cut states).
        let keep: Vec<bool> = coreach;
        if !states.iter().enumerate().any(|(i, _)| keep[i]) {
            return None;
        }
        let outputs: Vec<Word> = self.transitions.iter().map(|t| t.output.clone()).collect();
        let edges: Vec<Vec<(usize, usize, usize)>> = raw_edges
            .iter()
            .enumerate()
            .map(|(src, es)| {
                if !keep[src] {
                    return Vec::new();
                }
                es.iter().copied().filter(|&(_, _, dst)| keep[dst]).collect()
            })
            .collect();
        let initial = states
            .iter()
            .enumerate()
            .filter(|(i, &(a, b))| {
                keep[*i] && self.initial.contains(&a) && self.initial.contains(&b)
            })
            .map(|(i, _)| i)
            .collect();
        Some(DiagonalPairs {
            state_count: states.len(),
            initial,
            accepting: accepting.into_iter().filter(|&p| keep[p]).collect(),
            edges,
            outputs,
        })
    }

    /// States reachable from an initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.names.len()];
        let mut queue: VecDeque<usize> = self.initial.iter().copied().collect();
        for &q in &self.initial {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for t in self.transitions_from(q) {
                if !seen[t.dst] {
                    seen[t.dst] = true;
                    queue.push_back(t.dst);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.names.len()];
        for t in &self.transitions {
            rev[t.dst].push(t.src);
        }
        let mut seen = vec![false; self.names.len()];
        let mut queue: VecDeque<usize> = self.accepting.iter().copied().collect();
        for &q in &self.accepting {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &s in &rev[q] {
                if !seen[s] {
                    seen[s] = true;
                    queue.push_back(s);
                }
            }
        }
        seen
    }

    /// Remove states that are not both reachable and co-reachable.
    ///
    /// A machine whose domain is empty trims to a single initial state with
    /// no transitions and no accepting states.
    pub fn trim(&self) -> Transducer {
        let reach = self.reachable();
        let coreach = self.coreachable();
        let keep: Vec<bool> = (0..self.names.len()).map(|q| reach[q] && coreach[q]).collect();
        if !keep.iter().any(|&k| k) {
            let q0 = *self.initial.iter().next().expect("initial set is non-empty");
            return Transducer::from_indexed(
                self.input_alphabet.clone(),
                self.output_alphabet.clone(),
                vec![self.names[q0].clone()],
                BTreeSet::from([0]),
                BTreeSet::new(),
                Vec::new(),
            );
        }
        let mut remap = vec![usize::MAX; self.names.len()];
        let mut names = Vec::new();
        for (q, &k) in keep.iter().enumerate() {
            if k {
                remap[q] = names.len();
                names.push(self.names[q].clone());
            }
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|t| keep[t.src] && keep[t.dst])
            .map(|t| Tr { src: remap[t.src], input: t.input.clone(), output: t.output.clone(), dst: remap[t.dst] })
            .collect();
        Transducer::from_indexed(
            self.input_alphabet.clone(),
            self.output_alphabet.clone(),
            names,
            self.initial.iter().filter(|&&q| keep[q]).map(|&q| remap[q]).collect(),
            self.accepting.iter().filter(|&&q| keep[q]).map(|&q| remap[q]).collect(),
            transitions,
        )
    }

    /// Relational composition: feed this machine's output into `next`.
    ///
    /// `[[compose(self, next)]] = [[next]] . [[self]]` as functions: input
    /// `s` maps to `next`'s outputs on `self`'s outputs on `s`.
    pub fn compose(&self, next: &Transducer) -> Result<Transducer> {
        if !self.output_alphabet.is_subset(next.input_alphabet()) {
            return Err(Error::Malformed(
                "compose: left output alphabet must be contained in right input alphabet".into(),
            ));
        }
        let n2 = next.state_count();
        let pair_name =
            |a: usize, b: usize| Sym::tuple([&self.names[a], &next.names[b]]);
        let names: Vec<Sym> = (0..self.state_count())
            .flat_map(|a| (0..n2).map(move |b| (a, b)))
            .map(|(a, b)| pair_name(a, b))
            .collect();
        let id = |a: usize, b: usize| a * n2 + b;
        let mut transitions = Vec::new();
        for t in &self.transitions {
            for q2 in 0..n2 {
                for (v, q2dst) in next.paths_on(q2, &t.output) {
                    transitions.push(Tr {
                        src: id(t.src, q2),
                        input: t.input.clone(),
                        output: v,
                        dst: id(t.dst, q2dst),
                    });
                }
            }
        }
        let initial: BTreeSet<usize> = self
            .initial
            .iter()
            .flat_map(|&a| next.initial.iter().map(move |&b| id(a, b)))
            .collect();
        let accepting: BTreeSet<usize> = self
            .accepting
            .iter()
            .flat_map(|&a| next.accepting.iter().map(move |&b| id(a, b)))
            .collect();
        Ok(Transducer::from_indexed(
            self.input_alphabet.clone(),
            next.output_alphabet.clone(),
            names,
            initial,
            accepting,
            transitions,
        ))
    }

    /// All ways of reading `word` from `start`: (produced output, end state).
    fn paths_on(&self, start: usize, word: &[Sym]) -> Vec<(Word, usize)> {
        let mut acc: Vec<(Word, usize)> = vec![(Word::new(), start)];
        for a in word {
            let mut nxt = Vec::new();
            for (out, q) in &acc {
                for t in self.transitions_from(*q) {
                    if &t.input == a {
                        let mut o = out.clone();
                        o.extend(t.output.iter().cloned());
                        nxt.push((o, t.dst));
                    }
                }
            }
            acc = nxt;
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// Input projection: an NFA accepting exactly `dom(T)`.
    pub fn domain_automaton(&self) -> Nfa {
        Nfa {
            alphabet: self.input_alphabet.iter().cloned().map(Letter::Sym).collect(),
            names: self.names.clone(),
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| (t.src, Letter::Sym(t.input.clone()), t.dst))
                .collect(),
        }
    }

    /// Restrict the domain to the language of a deterministic-enough NFA by
    /// a synchronous product on the input track. Outputs are kept verbatim.
    pub fn restrict_domain(&self, dfa: &Nfa) -> Result<Transducer> {
        let n2 = dfa.names.len();
        let id = |a: usize, b: usize| a * n2 + b;
        let names: Vec<Sym> = (0..self.state_count())
            .flat_map(|a| (0..n2).map(move |b| (a, b)))
            .map(|(a, b)| Sym::tuple([&self.names[a], &dfa.names[b]]))
            .collect();
        let mut transitions = Vec::new();
        for t in &self.transitions {
            let want = Letter::Sym(t.input.clone());
            for &(src2, ref l, dst2) in &dfa.transitions {
                if *l == want {
                    transitions.push(Tr {
                        src: id(t.src, src2),
                        input: t.input.clone(),
                        output: t.output.clone(),
                        dst: id(t.dst, dst2),
                    });
                }
            }
        }
        let initial: BTreeSet<usize> = self
            .initial
            .iter()
            .flat_map(|&a| dfa.initial.iter().map(move |&b| id(a, b)))
            .collect();
        let accepting: BTreeSet<usize> = self
            .accepting
            .iter()
            .flat_map(|&a| dfa.accepting.iter().map(move |&b| id(a, b)))
            .collect();
        Ok(Transducer::from_indexed(
            self.input_alphabet.clone(),
            self.output_alphabet.clone(),
            names,
            initial,
            accepting,
            transitions,
        ))
    }
}

/// Trimmed diagonal self-product, interned for the functionality test.
struct DiagonalPairs {
    state_count: usize,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    /// Per pair state: (left transition id, right transition id, dst pair).
    edges: Vec<Vec<(usize, usize, usize)>>,
    /// Transition outputs by id.
    outputs: Vec<Word>,
}

/// A nondeterministic finite automaton over arbitrary letters (plain symbols
/// or convolution letters). Used for domain automata, synchronized
/// transducer automata and the track-lifted products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    pub alphabet: BTreeSet<Letter>,
    pub names: Vec<Sym>,
    pub initial: BTreeSet<usize>,
    pub accepting: BTreeSet<usize>,
    pub transitions: Vec<(usize, Letter, usize)>,
}

impl Nfa {
    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut by: HashMap<(usize, &Letter), Vec<usize>> = HashMap::new();
        for (src, l, dst) in &self.transitions {
            by.entry((*src, l)).or_default().push(*dst);
        }
        let mut frontier: BTreeSet<usize> = self.initial.clone();
        for l in word {
            let mut next = BTreeSet::new();
            for q in &frontier {
                if let Some(ds) = by.get(&(*q, l)) {
                    next.extend(ds.iter().copied());
                }
            }
            frontier = next;
            if frontier.is_empty() {
                return false;
            }
        }
        frontier.iter().any(|q| self.accepting.contains(q))
    }

    /// Subset construction over an explicit complete alphabet, with the
    /// acceptance condition flipped. The result is deterministic and
    /// complete, so it accepts exactly the words over `alphabet` that this
    /// automaton rejects.
    pub fn determinize_complement(&self, alphabet: &BTreeSet<Letter>) -> Nfa {
        let mut by: HashMap<(usize, &Letter), BTreeSet<usize>> = HashMap::new();
        for (src, l, dst) in &self.transitions {
            by.entry((*src, l)).or_default().insert(*dst);
        }
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        let mut transitions = Vec::new();
        let start = self.initial.clone();
        index.insert(start.clone(), 0);
        subsets.push(start);
        let mut head = 0;
        while head < subsets.len() {
            let cur = subsets[head].clone();
            for l in alphabet {
                let mut next = BTreeSet::new();
                for q in &cur {
                    if let Some(ds) = by.get(&(*q, l)) {
                        next.extend(ds.iter().copied());
                    }
                }
                let dst = *index.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next);
                    subsets.len() - 1
                });
                transitions.push((head, l.clone(), dst));
            }
            head += 1;
        }
        let accepting: BTreeSet<usize> = subsets
            .iter()
            .enumerate()
            .filter(|(_, set)| !set.iter().any(|q| self.accepting.contains(q)))
            .map(|(i, _)| i)
            .collect();
        Nfa {
            alphabet: alphabet.clone(),
            names: (0..subsets.len()).map(|i| Sym::new(format!("d{i}"))).collect(),
            initial: BTreeSet::from([0]),
            accepting,
            transitions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{fst, t_nr, t_r, w};

    #[test]
    fn run_collects_outputs_by_accepting_runs() {
        let t = t_nr();
        let v = t.run(&w("b a a")).unwrap();
        assert!(v.accepted);
        assert_eq!(v.outputs, BTreeSet::from([w("b b b")]));
        let v = t.run(&w("b b")).unwrap();
        assert!(!v.accepted);
        assert!(v.outputs.is_empty());
        // Empty word: initial state is accepting.
        let v = t.run(&[]).unwrap();
        assert!(v.accepted);
        assert_eq!(v.outputs, BTreeSet::from([Word::new()]));
    }

    #[test]
    fn run_rejects_foreign_letters() {
        let t = t_nr();
        assert!(t.run(&w("c")).is_err());
    }

    #[test]
    fn classify_t_nr_is_mealy() {
        let c = t_nr().classify();
        assert!(c.functional && c.deterministic && c.letter_to_letter && c.mealy);
    }

    #[test]
    fn classify_detects_nondeterminism_and_long_outputs() {
        let t = fst(
            "a b",
            "a b",
            "q0 q1",
            "q0",
            "q0 q1",
            &[("q0", "a", "a b", "q1"), ("q0", "a", "a b", "q0")],
        );
        let c = t.classify();
        assert!(!c.deterministic && !c.letter_to_letter && !c.mealy);
    }

    #[test]
    fn functional_allows_output_joining_nondeterminism() {
        // Two distinct runs with the same output word on every input.
        let t = fst(
            "a",
            "x",
            "q0 q1 q2",
            "q0",
            "q1 q2",
            &[("q0", "a", "x", "q1"), ("q0", "a", "x", "q2"), ("q1", "a", "x", "q1"), ("q2", "a", "x", "q2")],
        );
        assert!(t.classify().functional);
    }

    #[test]
    fn functional_refuted_by_diverging_outputs() {
        let t = fst(
            "a",
            "x y",
            "q0 q1 q2",
            "q0",
            "q1 q2",
            &[("q0", "a", "x", "q1"), ("q0", "a", "y", "q2")],
        );
        assert!(!t.classify().functional);
    }

    #[test]
    fn functional_refuted_by_length_lag_at_accepting_pair() {
        // One branch drops a letter: outputs a^(n-1) vs a^n.
        let t = fst(
            "a",
            "a",
            "q0 q1 q2",
            "q0",
            "q1 q2",
            &[("q0", "a", "", "q1"), ("q0", "a", "a", "q2"), ("q1", "a", "a", "q1"), ("q2", "a", "a", "q2")],
        );
        assert!(!t.classify().functional);
    }

    #[test]
    fn functionality_ignores_useless_divergence() {
        // The diverging branch never reaches an accepting state.
        let t = fst(
            "a",
            "x y",
            "q0 q1 q2",
            "q0",
            "q1",
            &[("q0", "a", "x", "q1"), ("q0", "a", "y", "q2")],
        );
        assert!(t.classify().functional);
    }

    #[test]
    fn trim_drops_isolated_state() {
        let big = fst(
            "a b",
            "a b",
            "q0 q1 q2 q3",
            "q0",
            "q0 q1 q2",
            &[
                ("q0", "a", "a", "q1"),
                ("q0", "b", "b", "q2"),
                ("q1", "a", "a", "q1"),
                ("q2", "a", "b", "q2"),
            ],
        );
        assert_eq!(big.trim(), t_nr());
    }

    #[test]
    fn trim_of_empty_domain_keeps_one_initial_state() {
        let t = fst("a", "a", "q0 q1", "q0", "", &[("q0", "a", "a", "q1")]);
        let trimmed = t.trim();
        assert_eq!(trimmed.state_count(), 1);
        assert!(trimmed.accepting().is_empty());
        assert!(!trimmed.run(&w("a")).unwrap().accepted);
    }

    #[test]
    fn compose_chains_outputs() {
        let t1 = fst("a", "b", "p", "p", "p", &[("p", "a", "b b", "p")]);
        let t2 = fst("b", "c", "r", "r", "r", &[("r", "b", "c", "r")]);
        let c = t1.compose(&t2).unwrap();
        assert_eq!(c.run(&w("a")).unwrap().outputs, BTreeSet::from([w("c c")]));
        assert_eq!(c.run(&w("a a")).unwrap().outputs, BTreeSet::from([w("c c c c")]));
    }

    #[test]
    fn compose_epsilon_output_freezes_right_machine() {
        let t1 = fst("a", "b", "p", "p", "p", &[("p", "a", "", "p")]);
        let t2 = fst("b", "c", "r s", "r", "r", &[("r", "b", "c", "s")]);
        let c = t1.compose(&t2).unwrap();
        assert_eq!(c.run(&w("a a")).unwrap().outputs, BTreeSet::from([Word::new()]));
    }

    #[test]
    fn compose_with_identity_is_identity_on_bounded_words() {
        let id = fst("a b", "a b", "i", "i", "i", &[("i", "a", "a", "i"), ("i", "b", "b", "i")]);
        let t = t_nr();
        let c = id.compose(&t).unwrap();
        for word in crate::testutil::all_words(&["a", "b"], 6) {
            assert_eq!(c.run(&word).unwrap(), t.run(&word).unwrap(), "word {word:?}");
        }
    }

    #[test]
    fn domain_automaton_matches_acceptance() {
        let t = t_r();
        let dom = t.domain_automaton();
        for word in crate::testutil::all_words(&["a", "b"], 5) {
            let letters: Vec<Letter> = word.iter().cloned().map(Letter::Sym).collect();
            assert_eq!(dom.accepts(&letters), t.run(&word).unwrap().accepted, "word {word:?}");
        }
    }

    #[test]
    fn determinize_complement_flips_membership() {
        let t = t_nr();
        let dom = t.domain_automaton();
        let comp = dom.determinize_complement(&dom.alphabet.clone());
        for word in crate::testutil::all_words(&["a", "b"], 5) {
            let letters: Vec<Letter> = word.iter().cloned().map(Letter::Sym).collect();
            assert_ne!(comp.accepts(&letters), dom.accepts(&letters));
        }
    }
}

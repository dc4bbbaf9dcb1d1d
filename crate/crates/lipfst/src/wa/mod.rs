//! Weighted automata over finite or infinite words.
//!
//! A weighted automaton reads letters (single symbols, or convolution
//! letters when it describes a similarity function over word tuples) and
//! assigns each accepted word the infimum of its run values. The value of a
//! run is determined by the value function: plain sum, discounted sum over
//! finite runs, discounted sum over infinite runs, or limit average. The
//! infinitary value functions accept by the Buchi condition and reject all
//! finite words.

pub mod emptiness;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::alphabet::{Letter, Sym, Track};
use crate::error::{Error, Result};
use crate::numeric::{Ext, Scalar};

/// How a run's transition weights combine into the run value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueFunction<W> {
    /// Plain sum over a finite run.
    Sum,
    /// `sum_i delta^i w_i` over a finite run, `i` counted from 1.
    DiscountedFinite(W),
    /// `sum_i delta^i w_i` over an infinite run, Buchi acceptance.
    DiscountedInfinite(W),
    /// `limsup` of the partial averages of an infinite run, Buchi acceptance.
    LimitAverage,
}

impl<W: Scalar> ValueFunction<W> {
    pub fn validate(&self) -> Result<()> {
        match self {
            ValueFunction::DiscountedFinite(d) | ValueFunction::DiscountedInfinite(d) => {
                if *d <= W::zero() || *d >= W::one() {
                    return Err(Error::InvalidValueFunction(format!(
                        "discount factor must lie strictly between 0 and 1, got {d}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Whether words are infinite (Buchi acceptance).
    pub fn infinitary(&self) -> bool {
        matches!(self, ValueFunction::DiscountedInfinite(_) | ValueFunction::LimitAverage)
    }
}

impl<W: fmt::Display> fmt::Display for ValueFunction<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueFunction::Sum => write!(f, "sum"),
            ValueFunction::DiscountedFinite(d) => write!(f, "disc {d}"),
            ValueFunction::DiscountedInfinite(d) => write!(f, "disc-inf {d}"),
            ValueFunction::LimitAverage => write!(f, "limavg"),
        }
    }
}

/// One weighted transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WTr<W> {
    pub src: usize,
    pub letter: Letter,
    pub weight: W,
    pub dst: usize,
}

/// Outcome of a functionality check: whether all accepting runs on any one
/// word carry the same value. `exact` is false when only a bounded search
/// backs a positive answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalityReport {
    pub functional: bool,
    pub exact: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedAutomaton<W> {
    /// One alphabet per track; single-track automata read plain symbols,
    /// multi-track ones read convolution letters whose track `i` is either
    /// the end marker or a symbol from `alphabets[i]`.
    alphabets: Vec<BTreeSet<Sym>>,
    value_fn: ValueFunction<W>,
    names: Vec<Sym>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    transitions: Vec<WTr<W>>,
    by_src: Vec<Vec<usize>>,
}

impl<W: Scalar> WeightedAutomaton<W> {
    pub fn new(
        alphabets: Vec<BTreeSet<Sym>>,
        value_fn: ValueFunction<W>,
        states: impl IntoIterator<Item = Sym>,
        initial: impl IntoIterator<Item = Sym>,
        accepting: impl IntoIterator<Item = Sym>,
        transitions: impl IntoIterator<Item = (Sym, Letter, W, Sym)>,
    ) -> Result<Self> {
        if alphabets.is_empty() {
            return Err(Error::Malformed("weighted automaton needs at least one track".into()));
        }
        for alpha in &alphabets {
            for s in alpha {
                Sym::validate_user_name(s.as_str())?;
            }
        }
        value_fn.validate()?;
        let names: Vec<Sym> = states.into_iter().collect();
        if names.is_empty() {
            return Err(Error::Malformed("weighted automaton needs at least one state".into()));
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
        for (src, letter, weight, dst) in transitions {
            check_letter(&alphabets, &letter)?;
            trs.push(WTr { src: resolve(&src)?, letter, weight, dst: resolve(&dst)? });
        }
        Ok(Self::from_indexed(alphabets, value_fn, names, initial, accepting, trs))
    }

    pub(crate) fn from_indexed(
        alphabets: Vec<BTreeSet<Sym>>,
        value_fn: ValueFunction<W>,
        names: Vec<Sym>,
        initial: BTreeSet<usize>,
        accepting: BTreeSet<usize>,
        transitions: Vec<WTr<W>>,
    ) -> Self {
        let mut by_src = vec![Vec::new(); names.len()];
        for (i, t) in transitions.iter().enumerate() {
            by_src[t.src].push(i);
        }
        WeightedAutomaton { alphabets, value_fn, names, initial, accepting, transitions, by_src }
    }

    pub fn track_count(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[BTreeSet<Sym>] {
        &self.alphabets
    }

    pub fn value_fn(&self) -> &ValueFunction<W> {
        &self.value_fn
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_names(&self) -> &[Sym] {
        &self.names
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn transitions(&self) -> &[WTr<W>] {
        &self.transitions
    }

    pub fn transitions_from(&self, q: usize) -> impl Iterator<Item = &WTr<W>> {
        self.by_src[q].iter().map(move |&i| &self.transitions[i])
    }

    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.initial.len() <= 1
            && self.transitions.iter().all(|t| seen.insert((t.src, t.letter.clone())))
    }

    /// Every letter this automaton could in principle read: per track the
    /// alphabet plus the end marker, excluding the all-end letter.
    pub fn full_letter_universe(&self) -> BTreeSet<Letter> {
        full_universe(&self.alphabets)
    }

    pub fn check_letter(&self, letter: &Letter) -> Result<()> {
        check_letter(&self.alphabets, letter)
    }

    /// Value of a finite word: infimum over accepting runs, `PosInf` when
    /// none exists. Errors on infinitary value functions.
    pub fn evaluate(&self, word: &[Letter]) -> Result<Ext<W>> {
        if self.value_fn.infinitary() {
            return Err(Error::ValueFunctionMismatch(
                "finite words have no value under an infinitary value function".into(),
            ));
        }
        for l in word {
            self.check_letter(l)?;
        }
        // Min partial value per state; exact because continuations depend
        // only on the position, not on how the prefix accrued its value.
        let mut frontier: BTreeMap<usize, W> =
            self.initial.iter().map(|&q| (q, W::zero())).collect();
        let mut disc = match &self.value_fn {
            ValueFunction::DiscountedFinite(d) => Some((d.clone(), d.clone())),
            _ => None,
        };
        for letter in word {
            let mut next: BTreeMap<usize, W> = BTreeMap::new();
            for (&q, partial) in &frontier {
                for t in self.transitions_from(q) {
                    if t.letter != *letter {
                        continue;
                    }
                    let step = match &disc {
                        Some((cur, _)) => partial.clone() + cur.clone() * t.weight.clone(),
                        None => partial.clone() + t.weight.clone(),
                    };
                    match next.get(&t.dst) {
                        Some(best) if *best <= step => {}
                        _ => {
                            next.insert(t.dst, step);
                        }
                    }
                }
            }
            if let Some((cur, base)) = disc.take() {
                disc = Some((cur * base.clone(), base));
            }
            frontier = next;
            if frontier.is_empty() {
                return Ok(Ext::PosInf);
            }
        }
        Ok(frontier
            .into_iter()
            .filter(|(q, _)| self.accepting.contains(q))
            .map(|(_, v)| Ext::Fin(v))
            .min()
            .unwrap_or(Ext::PosInf))
    }

    /// Multiply every weight by a non-negative factor. For a functional
    /// automaton this scales every word value by the same factor.
    pub fn scale_weights(&self, factor: &W) -> Self {
        let transitions = self
            .transitions
            .iter()
            .map(|t| WTr { src: t.src, letter: t.letter.clone(), weight: factor.clone() * t.weight.clone(), dst: t.dst })
            .collect();
        Self::from_indexed(
            self.alphabets.clone(),
            self.value_fn.clone(),
            self.names.clone(),
            self.initial.clone(),
            self.accepting.clone(),
            transitions,
        )
    }

    /// Same automaton with a different value function (weights untouched).
    pub fn with_value_fn(&self, value_fn: ValueFunction<W>) -> Result<Self> {
        value_fn.validate()?;
        let mut out = self.clone();
        out.value_fn = value_fn;
        Ok(out)
    }

    /// Do all accepting runs on any one word agree on the value?
    ///
    /// Deterministic automata pass outright. For `Sum` the check is exact:
    /// a potential (accumulated weight difference) is assigned over the
    /// trimmed diagonal self-product, and functionality holds iff the
    /// assignment is conflict-free and zero at accepting pairs. For the
    /// other value functions the search compares run pairs on words up to
    /// `bound` letters and the positive answer is flagged non-exact.
    pub fn functionality(&self, bound: usize) -> FunctionalityReport {
        if self.is_deterministic() {
            return FunctionalityReport { functional: true, exact: true, note: None };
        }
        match &self.value_fn {
            ValueFunction::Sum => self.sum_functionality(),
            _ => self.bounded_functionality(bound),
        }
    }

    /// Exact potential test for the Sum value function.
    fn sum_functionality(&self) -> FunctionalityReport {
        let pairs = self.diagonal_product();
        let report = |functional: bool, note: Option<String>| FunctionalityReport {
            functional,
            exact: true,
            note,
        };
        // BFS potential assignment over trim pair states.
        let mut phi: HashMap<usize, W> = HashMap::new();
        let mut queue: Vec<usize> = Vec::new();
        for &p in &pairs.initial {
            phi.insert(p, W::zero());
            queue.push(p);
        }
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            let cur = phi[&p].clone();
            if pairs.accepting.contains(&p) && !cur.is_zero() {
                return report(false, Some("accepting run pair with differing sums".into()));
            }
            for &(ref dw, dst) in &pairs.edges[p] {
                let next = cur.clone() + dw.clone();
                match phi.get(&dst) {
                    None => {
                        phi.insert(dst, next);
                        queue.push(dst);
                    }
                    Some(existing) => {
                        if *existing != next {
                            return report(false, Some("weight difference cycle".into()));
                        }
                    }
                }
            }
        }
        report(true, None)
    }

    /// Compare run-pair values on all words up to `bound` letters.
    fn bounded_functionality(&self, bound: usize) -> FunctionalityReport {
        // Frontier of (left state, right state, left value, right value)
        // over the same word; discounting is position-uniform so the pair
        // values can be carried directly.
        let mut disc = match &self.value_fn {
            ValueFunction::DiscountedFinite(d) | ValueFunction::DiscountedInfinite(d) => {
                Some((d.clone(), d.clone()))
            }
            _ => None,
        };
        let mut frontier: BTreeSet<(usize, usize, W, W)> = self
            .initial
            .iter()
            .flat_map(|&a| self.initial.iter().map(move |&b| (a, b, W::zero(), W::zero())))
            .collect();
        for _ in 0..bound {
            let mut next = BTreeSet::new();
            for (a, b, va, vb) in &frontier {
                for ta in self.transitions_from(*a) {
                    for tb in self.transitions_from(*b) {
                        if ta.letter != tb.letter {
                            continue;
                        }
                        let (wa, wb) = match &disc {
                            Some((cur, _)) => {
                                (cur.clone() * ta.weight.clone(), cur.clone() * tb.weight.clone())
                            }
                            None => (ta.weight.clone(), tb.weight.clone()),
                        };
                        next.insert((ta.dst, tb.dst, va.clone() + wa, vb.clone() + wb));
                    }
                }
            }
            if let Some((cur, base)) = disc.take() {
                disc = Some((cur * base.clone(), base));
            }
            frontier = next;
            for (a, b, va, vb) in &frontier {
                if self.accepting.contains(a) && self.accepting.contains(b) && va != vb {
                    return FunctionalityReport {
                        functional: false,
                        exact: true,
                        note: Some("run pair with differing values".into()),
                    };
                }
            }
            if frontier.is_empty() {
                break;
            }
        }
        FunctionalityReport {
            functional: true,
            exact: false,
            note: Some(format!("verified on words of at most {bound} letters")),
        }
    }

    /// Trimmed diagonal self-product with per-edge weight differences.
    fn diagonal_product(&self) -> DiagonalWeightPairs<W> {
        let mut idx: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states: Vec<(usize, usize)> = Vec::new();
        let mut edges: Vec<Vec<(W, usize)>> = Vec::new();
        for &a in &self.initial {
            for &b in &self.initial {
                let key = (a, b);
                if !idx.contains_key(&key) {
                    idx.insert(key, states.len());
                    states.push(key);
                    edges.push(Vec::new());
                }
            }
        }
        let mut head = 0;
        while head < states.len() {
            let (a, b) = states[head];
            let mut new_edges = Vec::new();
            for ta in self.by_src[a].iter().map(|&i| &self.transitions[i]) {
                for tb in self.by_src[b].iter().map(|&i| &self.transitions[i]) {
                    if ta.letter != tb.letter {
                        continue;
                    }
                    let key = (ta.dst, tb.dst);
                    let dst = *idx.entry(key).or_insert_with(|| {
                        states.push(key);
                        edges.push(Vec::new());
                        states.len() - 1
                    });
                    new_edges.push((ta.weight.clone() - tb.weight.clone(), dst));
                }
            }
            edges[head] = new_edges;
            head += 1;
        }
        // Keep only pairs co-reachable to an accepting pair.
        let accepting: BTreeSet<usize> = states
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| self.accepting.contains(&a) && self.accepting.contains(&b))
            .map(|(i, _)| i)
            .collect();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
        for (src, es) in edges.iter().enumerate() {
            for &(_, dst) in es {
                rev[dst].push(src);
            }
        }
        let mut keep = vec![false; states.len()];
        let mut queue: Vec<usize> = accepting.iter().copied().collect();
        for &p in &accepting {
            keep[p] = true;
        }
        let mut head = 0;
        while head < queue.len() {
            let p = queue[head];
            head += 1;
            for &s in &rev[p] {
                if !keep[s] {
                    keep[s] = true;
                    queue.push(s);
                }
            }
        }
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(src, es)| {
                if !keep[src] {
                    return Vec::new();
                }
                es.into_iter().filter(|&(_, dst)| keep[dst]).collect()
            })
            .collect();
        DiagonalWeightPairs {
            initial: states
                .iter()
                .enumerate()
                .filter(|(i, &(a, b))| {
                    keep[*i] && self.initial.contains(&a) && self.initial.contains(&b)
                })
                .map(|(i, _)| i)
                .collect(),
            accepting,
            edges,
        }
    }
}

struct DiagonalWeightPairs<W> {
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    edges: Vec<Vec<(W, usize)>>,
}

fn check_letter(alphabets: &[BTreeSet<Sym>], letter: &Letter) -> Result<()> {
    match letter {
        Letter::Sym(s) => {
            if alphabets.len() != 1 {
                return Err(Error::Malformed(format!(
                    "plain letter {s} on a {}-track automaton",
                    alphabets.len()
                )));
            }
            if !alphabets[0].contains(s) {
                return Err(Error::UnknownLetter { letter: s.to_string(), side: "track 1" });
            }
        }
        Letter::Conv(tracks) => {
            if tracks.len() != alphabets.len() {
                return Err(Error::Malformed(format!(
                    "letter {letter} has {} tracks, automaton has {}",
                    tracks.len(),
                    alphabets.len()
                )));
            }
            if tracks.iter().all(|t| matches!(t, Track::End)) {
                return Err(Error::Malformed("letter is the end marker on every track".into()));
            }
            for (i, t) in tracks.iter().enumerate() {
                if let Track::Sym(s) = t {
                    if !alphabets[i].contains(s) {
                        return Err(Error::UnknownLetter {
                            letter: s.to_string(),
                            side: "convolution track",
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// All letters over the given track alphabets: per track either a symbol or
/// the end marker, excluding the all-end combination.
pub fn full_universe(alphabets: &[BTreeSet<Sym>]) -> BTreeSet<Letter> {
    if alphabets.len() == 1 {
        return alphabets[0].iter().cloned().map(Letter::Sym).collect();
    }
    let mut combos: Vec<Vec<Track>> = vec![Vec::new()];
    for alpha in alphabets {
        let mut next = Vec::new();
        for prefix in &combos {
            let mut with_end = prefix.clone();
            with_end.push(Track::End);
            next.push(with_end);
            for s in alpha {
                let mut with_sym = prefix.clone();
                with_sym.push(Track::Sym(s.clone()));
                next.push(with_sym);
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .filter(|tracks| !tracks.iter().all(|t| matches!(t, Track::End)))
        .map(Letter::conv)
        .collect()
}

/// `delta^exp` by repeated squaring; exact for rational scalars.
pub fn pow<W: Scalar>(base: &W, mut exp: usize) -> W {
    let mut result = W::one();
    let mut square = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * square.clone();
        }
        square = square.clone() * square;
        exp >>= 1;
    }
    result
}

//! Similarity functions on pairs of finite (or ultimately periodic) words.
//!
//! A similarity function is given by a two-track weighted automaton reading
//! the convolution of the two words: tracks advance together, with the end
//! marker filling past the shorter word's end. The workhorse instance is
//! the Manhattan family: a one-state automaton whose letter weights come
//! from a per-letter difference table, summed (or discounted or averaged)
//! along the convolution.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::alphabet::{Lasso, Letter, Sym, Track, Word};
use crate::error::{Error, Result};
use crate::numeric::{Ext, Scalar};
use crate::wa::emptiness::evaluate_lasso;
use crate::wa::{FunctionalityReport, ValueFunction, WeightedAutomaton};

/// Convolution of two or more words: track `i` carries `words[i]`, padded
/// with the end marker past its last letter. Empty when all words are.
pub fn convolve(words: &[&[Sym]]) -> Result<Vec<Letter>> {
    if words.len() < 2 {
        return Err(Error::Malformed("convolution needs at least two words".into()));
    }
    let len = words.iter().map(|w| w.len()).max().unwrap_or(0);
    Ok((0..len)
        .map(|i| {
            let tracks: Vec<Track> = words
                .iter()
                .map(|w| match w.get(i) {
                    Some(s) => Track::Sym(s.clone()),
                    None => Track::End,
                })
                .collect();
            Letter::conv(tracks)
        })
        .collect())
}

pub fn convolve2(s: &[Sym], t: &[Sym]) -> Vec<Letter> {
    convolve(&[s, t]).expect("two words always convolve")
}

/// Convolution of ultimately periodic words: the joint stem is the longest
/// stem, the joint period the least common multiple of the periods.
pub fn convolve_lassos(parts: &[&Lasso<Sym>]) -> Result<Lasso<Letter>> {
    if parts.len() < 2 {
        return Err(Error::Malformed("convolution needs at least two words".into()));
    }
    let stem_len = parts.iter().map(|l| l.stem.len()).max().unwrap_or(0);
    let period = parts.iter().fold(1usize, |acc, l| num::integer::lcm(acc, l.cycle.len()));
    let conv_at = |i: usize| -> Letter {
        let tracks: Vec<Track> =
            parts.iter().map(|l| Track::Sym(l.at(i).clone())).collect();
        Letter::conv(tracks)
    };
    let stem = (0..stem_len).map(conv_at).collect();
    let cycle = (0..period).map(|j| conv_at(stem_len + j)).collect();
    Lasso::new(stem, cycle)
}

/// Read one track back out of a convolution, enforcing that the end marker,
/// once seen, persists to the end.
pub fn project_track(letters: &[Letter], track: usize) -> Result<Word> {
    let mut out = Word::new();
    let mut ended = false;
    for l in letters {
        let tracks = l
            .tracks()
            .ok_or_else(|| Error::Malformed("plain letters have no tracks to project".into()))?;
        let t = tracks
            .get(track)
            .ok_or_else(|| Error::Malformed(format!("letter {l} has no track {track}")))?;
        match t {
            Track::End => ended = true,
            Track::Sym(s) => {
                if ended {
                    return Err(Error::Malformed(format!(
                        "track {track} resumes after its end marker"
                    )));
                }
                out.push(s.clone());
            }
        }
    }
    Ok(out)
}

/// Per-letter-pair differences over an alphabet extended with the end
/// marker. Entries are symmetric, zero exactly on the diagonal, positive or
/// infinite off it, and satisfy the triangle inequality; `checked` verifies
/// all of that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffTable<W> {
    alphabet: BTreeSet<Sym>,
    /// Keyed by ordered pair (smaller, larger); diagonal is implicit zero.
    entries: BTreeMap<(Track, Track), Ext<W>>,
}

impl<W: Scalar> DiffTable<W> {
    /// Collect entries without validating the metric axioms; pair order is
    /// normalized, and conflicting duplicates are rejected.
    pub fn from_entries(
        alphabet: impl IntoIterator<Item = Sym>,
        entries: impl IntoIterator<Item = (Track, Track, Ext<W>)>,
    ) -> Result<Self> {
        let alphabet: BTreeSet<Sym> = alphabet.into_iter().collect();
        for s in &alphabet {
            Sym::validate_user_name(s.as_str())?;
        }
        let in_alpha = |t: &Track| match t {
            Track::End => true,
            Track::Sym(s) => alphabet.contains(s),
        };
        let mut map = BTreeMap::new();
        for (x, y, v) in entries {
            if !in_alpha(&x) || !in_alpha(&y) {
                return Err(Error::InvalidDiffTable(format!(
                    "entry ({x:?}, {y:?}) uses a letter outside the alphabet"
                )));
            }
            let key = if x <= y { (x, y) } else { (y, x) };
            if let Some(old) = map.insert(key.clone(), v.clone()) {
                if old != v {
                    return Err(Error::InvalidDiffTable(format!(
                        "conflicting entries for ({:?}, {:?})",
                        key.0, key.1
                    )));
                }
            }
        }
        Ok(DiffTable { alphabet, entries: map })
    }

    /// All off-diagonal differences are 1 (end marker included): the
    /// letter-wise distance underlying the plain Manhattan distance.
    pub fn standard(alphabet: impl IntoIterator<Item = Sym>) -> Self {
        let alphabet: BTreeSet<Sym> = alphabet.into_iter().collect();
        let tracks: Vec<Track> = padded_tracks(&alphabet);
        let mut entries = BTreeMap::new();
        for (i, x) in tracks.iter().enumerate() {
            for y in tracks.iter().skip(i + 1) {
                entries.insert((x.clone(), y.clone()), Ext::Fin(W::one()));
            }
        }
        DiffTable { alphabet, entries }
    }

    pub fn alphabet(&self) -> &BTreeSet<Sym> {
        &self.alphabet
    }

    /// Difference of two padded letters. Total once `checked` has passed.
    pub fn get(&self, x: &Track, y: &Track) -> Ext<W> {
        if x == y {
            return Ext::zero();
        }
        let key = if x <= y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
        self.entries.get(&key).cloned().unwrap_or(Ext::PosInf)
    }

    /// Violations of the metric axioms, as human-readable findings.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let tracks = padded_tracks(&self.alphabet);
        for ((x, y), v) in &self.entries {
            if x == y {
                if !matches!(v, Ext::Fin(f) if f.is_zero()) {
                    out.push(format!("d({x:?}, {x:?}) must be 0, got {v}"));
                }
                continue;
            }
            match v {
                Ext::Fin(f) if *f > W::zero() => {}
                Ext::PosInf => {}
                other => out.push(format!("d({x:?}, {y:?}) must be positive, got {other}")),
            }
        }
        for (i, x) in tracks.iter().enumerate() {
            for y in tracks.iter().skip(i + 1) {
                let key = (x.clone(), y.clone());
                if !self.entries.contains_key(&key) {
                    out.push(format!("missing entry for ({x:?}, {y:?})"));
                }
            }
        }
        // Triangle inequality over the padded alphabet, infinities included.
        for x in &tracks {
            for y in &tracks {
                for z in &tracks {
                    let direct = self.get(x, z);
                    let via = self.get(x, y).add(self.get(y, z));
                    if direct > via {
                        out.push(format!(
                            "triangle violation: d({x:?}, {z:?}) = {direct} > {via} via {y:?}"
                        ));
                    }
                }
            }
        }
        out
    }

    /// Validate the metric axioms and return the table.
    pub fn checked(self) -> Result<Self> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidDiffTable(v.join("; ")))
        }
    }

    /// Off-diagonal entries listed once each, in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&Track, &Track, &Ext<W>)> {
        self.entries.iter().map(|((x, y), v)| (x, y, v))
    }

    pub fn has_infinite_entry(&self) -> bool {
        self.entries.values().any(|v| matches!(v, Ext::PosInf))
    }

    /// Smallest positive and largest finite off-diagonal entries; `None`
    /// for tables with no finite off-diagonal entry.
    pub fn finite_extremes(&self) -> Option<(W, W)> {
        let finite: Vec<&W> = self
            .entries
            .iter()
            .filter(|((x, y), _)| x != y)
            .filter_map(|(_, v)| v.as_finite())
            .collect();
        let min = finite.iter().min()?;
        let max = finite.iter().max()?;
        Some(((*min).clone(), (*max).clone()))
    }

    /// Whether every off-diagonal entry is exactly 1.
    pub fn is_standard(&self) -> bool {
        let tracks = padded_tracks(&self.alphabet);
        tracks.iter().enumerate().all(|(i, x)| {
            tracks.iter().skip(i + 1).all(|y| {
                matches!(self.get(x, y), Ext::Fin(f) if f.is_one())
            })
        })
    }
}

fn padded_tracks(alphabet: &BTreeSet<Sym>) -> Vec<Track> {
    std::iter::once(Track::End)
        .chain(alphabet.iter().cloned().map(Track::Sym))
        .collect()
}

/// A similarity function packaged with its automaton. Both tracks share one
/// alphabet; queries convolve the two words and evaluate the automaton.
#[derive(Debug, Clone)]
pub struct SimilarityFunction<W> {
    wa: WeightedAutomaton<W>,
    /// For one-state Sum automata: minimal letter weight, looked up
    /// directly instead of running the evaluation front.
    fast_sum: Option<HashMap<Letter, W>>,
}

impl<W: Scalar> SimilarityFunction<W> {
    pub fn from_wa(wa: WeightedAutomaton<W>) -> Result<Self> {
        if wa.track_count() != 2 {
            return Err(Error::Malformed(format!(
                "similarity automata read two tracks, got {}",
                wa.track_count()
            )));
        }
        if wa.alphabets()[0] != wa.alphabets()[1] {
            return Err(Error::Malformed(
                "similarity automata compare words over one alphabet; the two track alphabets differ"
                    .into(),
            ));
        }
        let one_state_sum = wa.state_count() == 1
            && wa.accepting().contains(&0)
            && matches!(wa.value_fn(), ValueFunction::Sum);
        let fast_sum = one_state_sum.then(|| {
            let mut best: HashMap<Letter, W> = HashMap::new();
            for t in wa.transitions() {
                match best.get(&t.letter) {
                    Some(w) if *w <= t.weight => {}
                    _ => {
                        best.insert(t.letter.clone(), t.weight.clone());
                    }
                }
            }
            best
        });
        Ok(SimilarityFunction { wa, fast_sum })
    }

    /// Manhattan-style similarity: one state, letter weights from the table.
    pub fn manhattan(table: &DiffTable<W>, value_fn: ValueFunction<W>) -> Result<Self> {
        let state = Sym::new("s");
        let tracks = padded_tracks(table.alphabet());
        let mut transitions = Vec::new();
        for x in &tracks {
            for y in &tracks {
                if matches!((x, y), (Track::End, Track::End)) {
                    continue;
                }
                if let Ext::Fin(w) = table.get(x, y) {
                    transitions.push((
                        state.clone(),
                        Letter::conv([x.clone(), y.clone()]),
                        w,
                        state.clone(),
                    ));
                }
            }
        }
        let wa = WeightedAutomaton::new(
            vec![table.alphabet().clone(), table.alphabet().clone()],
            value_fn,
            [state.clone()],
            [state.clone()],
            [state],
            transitions,
        )?;
        Self::from_wa(wa)
    }

    /// Plain Manhattan distance: positionwise 0/1 mismatch count, summed.
    pub fn standard_manhattan(alphabet: impl IntoIterator<Item = Sym>) -> Self {
        Self::manhattan(&DiffTable::standard(alphabet), ValueFunction::Sum)
            .expect("standard table is well formed")
    }

    pub fn wa(&self) -> &WeightedAutomaton<W> {
        &self.wa
    }

    pub fn value_fn(&self) -> &ValueFunction<W> {
        self.wa.value_fn()
    }

    pub fn alphabet(&self) -> &BTreeSet<Sym> {
        &self.wa.alphabets()[0]
    }

    /// Distance between two finite words (infinitary value functions reject
    /// finite words and must use `distance_lasso`).
    pub fn distance(&self, s: &[Sym], t: &[Sym]) -> Result<Ext<W>> {
        let letters = convolve2(s, t);
        if let Some(fast) = &self.fast_sum {
            let mut acc = W::zero();
            for l in &letters {
                self.wa.check_letter(&l)?;
                match fast.get(l) {
                    Some(w) => acc = acc + w.clone(),
                    None => return Ok(Ext::PosInf),
                }
            }
            return Ok(Ext::Fin(acc));
        }
        self.wa.evaluate(&letters)
    }

    /// Distance between two ultimately periodic words, for infinitary value
    /// functions.
    pub fn distance_lasso(&self, s: &Lasso<Sym>, t: &Lasso<Sym>) -> Result<Ext<W>> {
        let conv = convolve_lassos(&[s, t])?;
        evaluate_lasso(&self.wa, &conv)
    }

    pub fn functionality(&self, bound: usize) -> FunctionalityReport {
        self.wa.functionality(bound)
    }

    /// Error unless all accepting runs agree on every word's value (checked
    /// exactly where possible, else up to `bound` letters).
    pub fn ensure_functional(&self, bound: usize) -> Result<()> {
        if self.functionality(bound).functional {
            Ok(())
        } else {
            Err(Error::SimilarityNotFunctional { bound })
        }
    }

    /// Search word pairs up to `max_len` letters for a symmetry violation.
    pub fn bounded_symmetry_counterexample(&self, max_len: usize) -> Result<Option<(Word, Word)>> {
        let words = all_words_over(self.alphabet(), max_len);
        for s in &words {
            for t in &words {
                if self.distance(s, t)? != self.distance(t, s)? {
                    return Ok(Some((s.clone(), t.clone())));
                }
            }
        }
        Ok(None)
    }
}

fn all_words_over(alphabet: &BTreeSet<Sym>, max_len: usize) -> Vec<Word> {
    let mut acc: Vec<Word> = vec![Word::new()];
    let mut layer: Vec<Word> = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut e = w.clone();
                e.push(a.clone());
                next.push(e);
            }
        }
        acc.extend(next.iter().cloned());
        layer = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::syms;
    use crate::testutil::w;
    use crate::testutil::wa_tests::{fin, letter, letters, q, wa};

    fn std_sim() -> SimilarityFunction<crate::Q> {
        SimilarityFunction::standard_manhattan(syms("a b c"))
    }

    #[test]
    fn convolution_pads_the_shorter_words() {
        let (s, t, u) = (w("a a"), w("b"), w("a d d"));
        let conv = convolve(&[&s, &t, &u]).unwrap();
        assert_eq!(conv, letters("(a,b,a) (a,#,d) (#,#,d)"));
    }

    #[test]
    fn convolution_of_empty_words_is_empty() {
        assert!(convolve2(&[], &[]).is_empty());
    }

    #[test]
    fn projection_inverts_convolution() {
        let (s, t) = (w("a b c"), w("x"));
        let conv = convolve2(&s, &t);
        assert_eq!(project_track(&conv, 0).unwrap(), s);
        assert_eq!(project_track(&conv, 1).unwrap(), t);
    }

    #[test]
    fn projection_rejects_resumed_tracks() {
        let bad = letters("(a,#) (a,b)");
        assert!(project_track(&bad, 1).is_err());
    }

    #[test]
    fn standard_table_is_a_metric() {
        let t: DiffTable<crate::Q> = DiffTable::standard(syms("a b"));
        assert!(t.violations().is_empty());
        assert!(t.is_standard());
        assert_eq!(t.get(&Track::Sym(Sym::new("a")), &Track::End), fin("1"));
    }

    #[test]
    fn violations_flag_broken_axioms() {
        // d(a,b) = 5 breaks the triangle through c (1 + 1); d(a,c) = 0
        // breaks positivity.
        let t = DiffTable::from_entries(
            syms("a b c"),
            [
                (tr("a"), tr("b"), fin("5")),
                (tr("a"), tr("c"), fin("0")),
                (tr("b"), tr("c"), fin("1")),
                (tr("a"), tr("#"), fin("1")),
                (tr("b"), tr("#"), fin("1")),
                (tr("c"), tr("#"), fin("1")),
            ],
        )
        .unwrap();
        let v = t.violations();
        assert!(v.iter().any(|m| m.contains("triangle")));
        assert!(v.iter().any(|m| m.contains("positive")));
        assert!(t.checked().is_err());
    }

    #[test]
    fn missing_entries_are_reported() {
        let t: DiffTable<crate::Q> = DiffTable::from_entries(syms("a b"), []).unwrap();
        assert!(t.violations().iter().any(|m| m.contains("missing")));
    }

    #[test]
    fn infinite_entries_satisfy_the_axioms() {
        // a and b are infinitely far apart; everything else distance 1.
        let t = inf_ab_table();
        assert!(t.violations().is_empty(), "{:?}", t.violations());
        assert!(t.has_infinite_entry());
    }

    fn tr(s: &str) -> Track {
        if s == "#" {
            Track::End
        } else {
            Track::Sym(Sym::new(s))
        }
    }

    fn inf_ab_table() -> DiffTable<crate::Q> {
        // Triangle holds because detouring through any third letter also
        // costs infinity on one leg... except it does not: d(a,#)+d(#,b)
        // would cap d(a,b). Keep a# and b# infinite as well.
        DiffTable::from_entries(
            syms("a b"),
            [
                (tr("a"), tr("b"), Ext::PosInf),
                (tr("a"), tr("#"), Ext::PosInf),
                (tr("b"), tr("#"), fin("1")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn standard_manhattan_counts_mismatches() {
        let d = std_sim();
        assert_eq!(d.distance(&w("a b c"), &w("a b b")).unwrap(), fin("1"));
        assert_eq!(d.distance(&w("a b"), &w("a")).unwrap(), fin("1"));
        assert_eq!(d.distance(&w("a b c"), &w("c")).unwrap(), fin("3"));
        assert_eq!(d.distance(&[], &[]).unwrap(), fin("0"));
        assert_eq!(d.distance(&w("a a a"), &w("a a a")).unwrap(), fin("0"));
    }

    #[test]
    fn manhattan_with_infinite_entries_rejects_pairs() {
        let d = SimilarityFunction::manhattan(&inf_ab_table(), ValueFunction::Sum).unwrap();
        assert_eq!(d.distance(&w("a"), &w("b")).unwrap(), Ext::PosInf);
        assert_eq!(d.distance(&w("b"), &w("b b")).unwrap(), fin("1"));
    }

    #[test]
    fn fast_path_agrees_with_direct_evaluation() {
        let d = std_sim();
        assert!(d.fast_sum.is_some());
        let words = all_words_over(d.alphabet(), 3);
        for s in &words {
            for t in &words {
                let conv = convolve2(s, t);
                assert_eq!(d.distance(s, t).unwrap(), d.wa().evaluate(&conv).unwrap());
            }
        }
    }

    #[test]
    fn discounted_manhattan_weights_early_positions_more() {
        let table = DiffTable::standard(syms("a b"));
        let d =
            SimilarityFunction::manhattan(&table, ValueFunction::DiscountedFinite(q("1/2")))
                .unwrap();
        // Mismatch at position 1 costs 1/2; at position 2 costs 1/4.
        assert_eq!(d.distance(&w("a a"), &w("b a")).unwrap(), fin("1/2"));
        assert_eq!(d.distance(&w("a a"), &w("a b")).unwrap(), fin("1/4"));
    }

    #[test]
    fn lasso_distance_averages_the_cycle() {
        let table = DiffTable::standard(syms("a b"));
        let d = SimilarityFunction::manhattan(&table, ValueFunction::LimitAverage).unwrap();
        let s = Lasso::new(w("a"), w("a b")).unwrap();
        let t = Lasso::new(w("a"), w("a a")).unwrap();
        // Mismatch every second cycle position: mean 1/2.
        assert_eq!(d.distance_lasso(&s, &t).unwrap(), fin("1/2"));
        assert_eq!(d.distance_lasso(&s, &s).unwrap(), fin("0"));
    }

    #[test]
    fn general_wa_similarity_needs_matching_tracks() {
        let one_track = wa(&["a"], ValueFunction::Sum, "p", "p", "p", &[("p", "a", "1", "p")]);
        assert!(SimilarityFunction::from_wa(one_track).is_err());
    }

    #[test]
    fn symmetry_check_finds_asymmetric_tables() {
        // Not a table: a raw two-track automaton that charges (a,b) and
        // (b,a) differently.
        let a = wa(
            &["a b", "a b"],
            ValueFunction::Sum,
            "p",
            "p",
            "p",
            &[
                ("p", "(a,b)", "1", "p"),
                ("p", "(b,a)", "2", "p"),
                ("p", "(a,a)", "0", "p"),
                ("p", "(b,b)", "0", "p"),
                ("p", "(a,#)", "1", "p"),
                ("p", "(#,a)", "1", "p"),
                ("p", "(b,#)", "1", "p"),
                ("p", "(#,b)", "1", "p"),
            ],
        );
        let d = SimilarityFunction::from_wa(a).unwrap();
        let ce = d.bounded_symmetry_counterexample(2).unwrap();
        assert!(ce.is_some());
        let sym = std_sim();
        assert!(sym.bounded_symmetry_counterexample(2).unwrap().is_none());
    }

    #[test]
    fn functionality_passes_for_tables() {
        assert!(std_sim().ensure_functional(4).is_ok());
    }

    #[test]
    fn convolve_lassos_aligns_periods() {
        let s = Lasso::new(w("a"), w("a b")).unwrap();
        let t = Lasso::new(vec![], w("b b b")).unwrap();
        let conv = convolve_lassos(&[&s, &t]).unwrap();
        assert_eq!(conv.stem.len(), 1);
        assert_eq!(conv.cycle.len(), 6);
        assert_eq!(conv.stem[0], letter("(a,b)"));
        // Position 1 onward: s gives a b a b a b, t gives b b b b b b.
        assert_eq!(conv.cycle[0], letter("(a,b)"));
        assert_eq!(conv.cycle[1], letter("(b,b)"));
    }
}

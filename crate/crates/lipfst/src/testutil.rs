//! Compact builders for unit tests.

use crate::alphabet::{syms, Sym, Word};
use crate::fst::Transducer;

pub(crate) fn w(s: &str) -> Word {
    syms(s)
}

/// Build a transducer from whitespace-separated name lists. Transition
/// outputs are whitespace-separated words, "" meaning the empty word.
pub(crate) fn fst(
    input_alphabet: &str,
    output_alphabet: &str,
    states: &str,
    initial: &str,
    accepting: &str,
    transitions: &[(&str, &str, &str, &str)],
) -> Transducer {
    Transducer::new(
        syms(input_alphabet),
        syms(output_alphabet),
        syms(states),
        syms(initial),
        syms(accepting),
        transitions
            .iter()
            .map(|(src, a, out, dst)| (Sym::new(*src), Sym::new(*a), syms(out), Sym::new(*dst))),
    )
    .expect("test machine is well formed")
}

/// Copies its first letter's image forever after branching on it; the two
/// branches disagree on later letters, so nearby inputs can map far apart.
pub(crate) fn t_nr() -> Transducer {
    fst(
        "a b",
        "a b",
        "q0 q1 q2",
        "q0",
        "q0 q1 q2",
        &[
            ("q0", "a", "a", "q1"),
            ("q0", "b", "b", "q2"),
            ("q1", "a", "a", "q1"),
            ("q2", "a", "b", "q2"),
        ],
    )
}

/// Swaps the first letter and then settles into a single behaviour; output
/// distance tracks input distance up to a small constant.
pub(crate) fn t_r() -> Transducer {
    fst(
        "a b",
        "a b",
        "q0 q1 q2",
        "q0",
        "q0 q1 q2",
        &[
            ("q0", "a", "b", "q1"),
            ("q0", "b", "a", "q2"),
            ("q1", "a", "b", "q1"),
            ("q2", "a", "b", "q2"),
        ],
    )
}

pub(crate) mod wa_tests {
    use std::collections::BTreeSet;
    use std::str::FromStr;

    use crate::alphabet::{syms, Letter, Sym, Track};
    use crate::numeric::Ext;
    use crate::wa::{ValueFunction, WeightedAutomaton};
    use crate::Q;

    pub(crate) fn q(s: &str) -> Q {
        Q::from_str(s).expect("test rational")
    }

    pub(crate) fn fin(s: &str) -> Ext<Q> {
        Ext::Fin(q(s))
    }

    /// Parse a letter: "(a,x)" is a convolution letter with "#" meaning the
    /// end marker on a track, anything else a plain symbol.
    pub(crate) fn letter(s: &str) -> Letter {
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let tracks: Vec<Track> = inner
                .split(',')
                .map(|t| if t == "#" { Track::End } else { Track::Sym(Sym::new(t)) })
                .collect();
            Letter::conv(tracks)
        } else {
            Letter::Sym(Sym::new(s))
        }
    }

    pub(crate) fn letters(s: &str) -> Vec<Letter> {
        s.split_whitespace().map(letter).collect()
    }

    /// Build a rational weighted automaton from compact string parts.
    pub(crate) fn wa(
        alphabets: &[&str],
        value_fn: ValueFunction<Q>,
        states: &str,
        initial: &str,
        accepting: &str,
        transitions: &[(&str, &str, &str, &str)],
    ) -> WeightedAutomaton<Q> {
        let alphabets: Vec<BTreeSet<Sym>> =
            alphabets.iter().map(|a| syms(a).into_iter().collect()).collect();
        WeightedAutomaton::new(
            alphabets,
            value_fn,
            syms(states),
            syms(initial),
            syms(accepting),
            transitions
                .iter()
                .map(|(src, l, w, dst)| (Sym::new(*src), letter(l), q(w), Sym::new(*dst))),
        )
        .expect("test automaton is well formed")
    }
}

/// Every word over `letters` up to and including `max_len`, shortest first.
pub(crate) fn all_words(letters: &[&str], max_len: usize) -> Vec<Word> {
    let alphabet: Vec<Sym> = letters.iter().map(|s| Sym::new(*s)).collect();
    let mut acc: Vec<Word> = vec![Word::new()];
    let mut layer: Vec<Word> = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for word in &layer {
            for a in &alphabet {
                let mut e = word.clone();
                e.push(a.clone());
                next.push(e);
            }
        }
        acc.extend(next.iter().cloned());
        layer = next;
    }
    acc
}

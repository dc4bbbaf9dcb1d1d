//! Symbols, track letters and convolution letters.
//!
//! Alphabet letters are interned name tokens, not characters: `a`, `q0`,
//! `(a,1)` are each a single [`Sym`]. Two names are reserved crate-wide:
//!
//! * `PAD` is the padding letter inserted by the canonical-transducer
//!   pipeline. It is an ordinary alphabet member of padded machines.
//! * `#` is the end-of-word marker used *inside convolution letters only*.
//!   It never belongs to any alphabet; a track shows `#` once its word has
//!   ended.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An interned alphabet symbol (also used for state names).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: impl AsRef<str>) -> Sym {
        Sym(Arc::from(name.as_ref()))
    }

    /// The padding letter `PAD`.
    pub fn pad() -> Sym {
        Sym::new(PAD_NAME)
    }

    pub fn is_pad(&self) -> bool {
        self.0.as_ref() == PAD_NAME
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Canonical tuple name, e.g. `Sym::tuple([a, 1]) == "(a,1)"`.
    pub fn tuple<'a>(parts: impl IntoIterator<Item = &'a Sym>) -> Sym {
        let inner: Vec<&str> = parts.into_iter().map(|s| s.as_str()).collect();
        Sym::new(format!("({})", inner.join(",")))
    }

    /// Check that a name is usable as a user-supplied symbol: non-empty, no
    /// whitespace, and not one of the structural tokens of the text formats.
    pub fn validate_user_name(name: &str) -> Result<()> {
        if name.is_empty() {
            return Err(Error::Malformed("empty symbol name".into()));
        }
        if name.chars().any(char::is_whitespace) {
            return Err(Error::Malformed(format!("symbol {name:?} contains whitespace")));
        }
        if name == END_NAME {
            return Err(Error::Malformed(
                "`#` is the end-of-word marker and cannot be an alphabet letter".into(),
            ));
        }
        if matches!(name, "->" | ":" | "-") {
            return Err(Error::Malformed(format!("symbol name {name:?} is reserved")));
        }
        Ok(())
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_ref())
    }
}

pub const PAD_NAME: &str = "PAD";
pub const END_NAME: &str = "#";

/// One track position of a convolution letter: a real symbol, or `#` after
/// the track's word has ended.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Track {
    End,
    Sym(Sym),
}

impl Track {
    pub fn as_sym(&self) -> Option<&Sym> {
        match self {
            Track::End => None,
            Track::Sym(s) => Some(s),
        }
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Track::End)
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Track::End => f.write_str(END_NAME),
            Track::Sym(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A letter of an automaton alphabet: a plain symbol, or a k-track
/// convolution letter such as `(a,#)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Sym(Sym),
    Conv(Arc<[Track]>),
}

impl Letter {
    pub fn conv(tracks: impl Into<Vec<Track>>) -> Letter {
        let v: Vec<Track> = tracks.into();
        debug_assert!(v.len() >= 2, "convolution letters have at least two tracks");
        debug_assert!(v.iter().any(|t| !t.is_end()), "all-# letters never occur in words");
        Letter::Conv(Arc::from(v))
    }

    /// Like [`Letter::conv`] but allows the all-`#` letter, which the product
    /// constructions use as an explicit padding transition.
    pub fn conv_allow_blank(tracks: impl Into<Vec<Track>>) -> Letter {
        Letter::Conv(Arc::from(tracks.into()))
    }

    pub fn tracks(&self) -> Option<&[Track]> {
        match self {
            Letter::Sym(_) => None,
            Letter::Conv(t) => Some(t),
        }
    }

    pub fn track_count(&self) -> usize {
        match self {
            Letter::Sym(_) => 1,
            Letter::Conv(t) => t.len(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Sym(s) => write!(f, "{s}"),
            Letter::Conv(tracks) => {
                f.write_str("(")?;
                for (i, t) in tracks.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite word over plain symbols.
pub type Word = Vec<Sym>;

/// A finite word over automaton letters (possibly convolution letters).
pub type LWord = Vec<Letter>;

/// Parse helper used by tests and the CLI: `syms("a b c")`.
pub fn syms(spec: &str) -> Word {
    spec.split_whitespace().map(Sym::new).collect()
}

/// Render a word for humans: letters are concatenated when they are all
/// single characters, comma-separated otherwise. The empty word prints `-`.
pub fn display_word(w: &[Sym]) -> String {
    if w.is_empty() {
        return "-".into();
    }
    if w.iter().all(|s| s.as_str().chars().count() == 1) {
        w.iter().map(|s| s.as_str()).collect()
    } else {
        w.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(",")
    }
}

/// An ultimately periodic word `stem . cycle^omega`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso<L> {
    pub stem: Vec<L>,
    pub cycle: Vec<L>,
}

impl<L: Clone> Lasso<L> {
    pub fn new(stem: Vec<L>, cycle: Vec<L>) -> Result<Lasso<L>> {
        if cycle.is_empty() {
            return Err(Error::Malformed("lasso cycle must be non-empty".into()));
        }
        Ok(Lasso { stem, cycle })
    }

    /// Letter at position `i` (0-based) of the infinite word.
    pub fn at(&self, i: usize) -> &L {
        if i < self.stem.len() {
            &self.stem[i]
        } else {
            &self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Finite unrolling: stem followed by `n` copies of the cycle.
    pub fn unroll(&self, n: usize) -> Vec<L> {
        let mut out = self.stem.clone();
        for _ in 0..n {
            out.extend(self.cycle.iter().cloned());
        }
        out
    }
}

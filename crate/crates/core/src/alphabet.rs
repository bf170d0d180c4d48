//! Alphabets and multi-track (convolution) alphabets.
//!
//! An [`Alphabet`] is an ordered table of named symbols; automata refer to
//! symbols by their index in the table. A [`TrackAlphabet`] is the alphabet of
//! k-column convolutions over a base alphabet: each symbol is a k-tuple whose
//! components are either a base symbol or the padding mark, with the all-pad
//! tuple excluded.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a symbol in its alphabet table.
pub type SymbolId = usize;

/// Name used when printing the padding mark of a track component.
pub const PAD_NAME: &str = "_";

/// An ordered, immutable table of named symbols.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from symbol names. Names must be unique, non-empty,
    /// free of whitespace and `|`, and distinct from the pad mark `_`.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Alphabet>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Format("alphabet must be nonempty".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains('|') || n.chars().any(char::is_whitespace) {
                return Err(Error::Format(format!("bad symbol name {n:?}")));
            }
            if n == PAD_NAME {
                return Err(Error::Format("symbol name `_` is reserved for padding".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Format(format!("duplicate symbol name {n:?}")));
            }
        }
        Ok(Arc::new(Alphabet { names }))
    }

    /// Constructor for derived alphabets (track tuples) whose names embed the
    /// `|` separator and `_` pad mark. Checks uniqueness only.
    pub(crate) fn from_derived_names(names: Vec<String>) -> Result<Arc<Alphabet>> {
        if names.is_empty() {
            return Err(Error::Format("alphabet must be nonempty".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Format(format!("duplicate symbol name {n:?}")));
            }
        }
        Ok(Arc::new(Alphabet { names }))
    }

    /// Binary alphabet `0 1`.
    pub fn binary() -> Arc<Alphabet> {
        Alphabet::new(["0", "1"]).expect("binary alphabet")
    }

    /// Unary alphabet `1`.
    pub fn unary() -> Arc<Alphabet> {
        Alphabet::new(["1"]).expect("unary alphabet")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<SymbolId> {
        self.names.iter().position(|n| n == name)
    }

    /// Tokenizes text into symbol ids. Single-character alphabets split per
    /// character; otherwise greedy longest-match against the symbol names.
    pub fn word(&self, text: &str) -> Result<Vec<SymbolId>> {
        if self.names.iter().all(|n| n.chars().count() == 1) {
            return text
                .chars()
                .map(|c| {
                    self.index_of(&c.to_string()).ok_or(Error::UnknownSymbol {
                        symbol: c.to_string(),
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((id, n)) => {
                    out.push(id);
                    rest = &rest[n.len()..];
                }
                None => {
                    return Err(Error::UnknownSymbol {
                        symbol: rest.chars().take(8).collect(),
                    })
                }
            }
        }
        Ok(out)
    }

    /// Renders a word of symbol ids back to text, concatenating names.
    pub fn render(&self, word: &[SymbolId]) -> String {
        word.iter().map(|&s| self.name(s)).collect()
    }

    pub fn same_as(&self, other: &Alphabet) -> bool {
        self.names == other.names
    }
}

/// One component of a track symbol: a base symbol or the padding mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Sym(SymbolId),
    Pad,
}

impl Component {
    pub fn is_pad(self) -> bool {
        matches!(self, Component::Pad)
    }
}

/// The alphabet of k-track convolutions over a base alphabet.
///
/// Track symbols are ordered by their mixed-radix value with the pad encoded
/// as the largest digit, so the all-pad tuple would be the last value and is
/// excluded. For arity 1 the track alphabet coincides with the base alphabet.
#[derive(Debug, Clone)]
pub struct TrackAlphabet {
    base: Arc<Alphabet>,
    arity: usize,
    /// The track symbols materialized as a plain alphabet (used by automata).
    symbols: Arc<Alphabet>,
}

impl PartialEq for TrackAlphabet {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.base.same_as(&other.base)
    }
}
impl Eq for TrackAlphabet {}

impl TrackAlphabet {
    pub fn new(base: Arc<Alphabet>, arity: usize) -> Result<TrackAlphabet> {
        if arity == 0 {
            return Err(Error::ArityMismatch("track arity must be >= 1".into()));
        }
        let radix = base.len() + 1;
        let count = radix
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::Format("track alphabet too large".into()))?
            - 1;
        if count > 4_000_000 {
            return Err(Error::Format(format!(
                "track alphabet of {count} symbols is too large"
            )));
        }
        let symbols = if arity == 1 {
            base.clone()
        } else {
            let mut names = Vec::with_capacity(count);
            for id in 0..count {
                let name = decode_tuple(id, arity, base.len())
                    .iter()
                    .map(|c| match c {
                        // Parenthesize nested track names so the joined
                        // name splits back unambiguously.
                        Component::Sym(s) => {
                            let n = base.name(*s);
                            if n.contains('|') {
                                format!("({n})")
                            } else {
                                n.to_string()
                            }
                        }
                        Component::Pad => PAD_NAME.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join("|");
                names.push(name);
            }
            Alphabet::from_derived_names(names)?
        };
        Ok(TrackAlphabet { base, arity, symbols })
    }

    pub fn base(&self) -> &Arc<Alphabet> {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// The track symbols as a plain alphabet.
    pub fn symbols(&self) -> &Arc<Alphabet> {
        &self.symbols
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    /// Decodes a track symbol id into its component tuple.
    pub fn components(&self, id: SymbolId) -> Vec<Component> {
        decode_tuple(id, self.arity, self.base.len())
    }

    /// Encodes a component tuple as a track symbol id. Returns an error for
    /// the all-pad tuple, which is not a symbol.
    pub fn id_of(&self, comps: &[Component]) -> Result<SymbolId> {
        assert_eq!(comps.len(), self.arity);
        if comps.iter().all(|c| c.is_pad()) {
            return Err(Error::Format("all-pad column is not a symbol".into()));
        }
        let radix = self.base.len() + 1;
        let mut id = 0;
        for c in comps {
            let digit = match c {
                Component::Sym(s) => {
                    debug_assert!(*s < self.base.len());
                    *s
                }
                Component::Pad => self.base.len(),
            };
            id = id * radix + digit;
        }
        Ok(id)
    }

    /// Convolves k strings over the base alphabet into a track word.
    ///
    /// Column i holds the i-th symbol of each string, with shorter strings
    /// padded at the end; the result has the length of the longest input.
    pub fn convolve(&self, strings: &[&str]) -> Result<Vec<SymbolId>> {
        if strings.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "expected {} strings, got {}",
                self.arity,
                strings.len()
            )));
        }
        let words: Vec<Vec<SymbolId>> = strings
            .iter()
            .map(|s| self.base.word(s))
            .collect::<Result<_>>()?;
        self.convolve_words(&words)
    }

    /// Same as [`TrackAlphabet::convolve`] on pre-tokenized words.
    pub fn convolve_words(&self, words: &[Vec<SymbolId>]) -> Result<Vec<SymbolId>> {
        if words.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "expected {} words, got {}",
                self.arity,
                words.len()
            )));
        }
        let len = words.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = Vec::with_capacity(len);
        for col in 0..len {
            let comps: Vec<Component> = words
                .iter()
                .map(|w| w.get(col).map_or(Component::Pad, |&s| Component::Sym(s)))
                .collect();
            out.push(self.id_of(&comps)?);
        }
        Ok(out)
    }

    /// Splits a track word back into its per-track strings, dropping pads.
    pub fn deconvolve(&self, word: &[SymbolId]) -> Vec<String> {
        let mut out = vec![String::new(); self.arity];
        for &sym in word {
            for (track, comp) in self.components(sym).into_iter().enumerate() {
                if let Component::Sym(s) = comp {
                    out[track].push_str(self.base.name(s));
                }
            }
        }
        out
    }
}

fn decode_tuple(id: usize, arity: usize, base_len: usize) -> Vec<Component> {
    let radix = base_len + 1;
    let mut digits = vec![0usize; arity];
    let mut rest = id;
    for slot in digits.iter_mut().rev() {
        *slot = rest % radix;
        rest /= radix;
    }
    digits
        .into_iter()
        .map(|d| {
            if d == base_len {
                Component::Pad
            } else {
                Component::Sym(d)
            }
        })
        .collect()
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn track_ids_roundtrip() {
        let base = Alphabet::binary();
        let t = TrackAlphabet::new(base, 3).unwrap();
        assert_eq!(t.symbol_count(), 26); // 3^3 - 1
        for id in 0..t.symbol_count() {
            let comps = t.components(id);
            assert_eq!(t.id_of(&comps).unwrap(), id);
        }
    }

    #[test]
    fn all_pad_rejected() {
        let base = Alphabet::binary();
        let t = TrackAlphabet::new(base, 2).unwrap();
        assert!(t.id_of(&[Component::Pad, Component::Pad]).is_err());
    }

    #[test]
    fn convolution_pads_shorter_strings() {
        let base = Alphabet::binary();
        let t = TrackAlphabet::new(base.clone(), 2).unwrap();
        let w = t.convolve(&["01", "1"]).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(
            t.components(w[0]),
            vec![Component::Sym(0), Component::Sym(1)]
        );
        assert_eq!(t.components(w[1]), vec![Component::Sym(1), Component::Pad]);
        assert_eq!(t.deconvolve(&w), vec!["01".to_string(), "1".to_string()]);
    }

    #[test]
    fn empty_convolution_is_empty_word() {
        let base = Alphabet::binary();
        let t = TrackAlphabet::new(base, 2).unwrap();
        assert!(t.convolve(&["", ""]).unwrap().is_empty());
    }

    #[test]
    fn three_tracks_with_pads() {
        let base = Alphabet::new(["a", "b", "c"]).unwrap();
        let t = TrackAlphabet::new(base, 3).unwrap();
        let w = t.convolve(&["a", "ab", "abc"]).unwrap();
        assert_eq!(w.len(), 3);
        let last = t.components(w[2]);
        assert_eq!(last[0], Component::Pad);
        assert_eq!(last[1], Component::Pad);
        assert_eq!(last[2], Component::Sym(2));
    }

    #[test]
    fn arity_one_is_base() {
        let base = Alphabet::binary();
        let t = TrackAlphabet::new(base.clone(), 1).unwrap();
        assert!(t.symbols().same_as(&base));
    }
}

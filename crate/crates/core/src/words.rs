//! Raw words over base generators and stable letters.
//!
//! A [`Word`] is kept in run-length form: adjacent letters on the same
//! symbol are merged by adding exponents and zero exponents are dropped, so
//! every `Word` is freely reduced. Nothing in this module knows about
//! relations; that is the job of [`crate::tower`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::ParseError;

/// Symbol of a letter. Base generators sort before stable letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Generator `g<id>` of the base free group.
    Gen(u32),
    /// Stable letter `t<stage>`; stages are numbered from 1.
    Stable(u32),
}

impl Symbol {
    pub fn stage(self) -> usize {
        match self {
            Symbol::Gen(_) => 0,
            Symbol::Stable(s) => s as usize,
        }
    }

    pub fn is_stable(self) -> bool {
        matches!(self, Symbol::Stable(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Gen(i) => write!(f, "g{i}"),
            Symbol::Stable(s) => write!(f, "t{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub symbol: Symbol,
    /// Never zero inside a [`Word`].
    pub exp: i32,
}

impl Letter {
    pub fn new(symbol: Symbol, exp: i32) -> Self {
        Letter { symbol, exp }
    }

    pub fn gen(id: u32, exp: i32) -> Self {
        Letter::new(Symbol::Gen(id), exp)
    }

    pub fn stable(stage: u32, exp: i32) -> Self {
        Letter::new(Symbol::Stable(stage), exp)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.symbol, -self.exp)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.symbol)
        } else {
            write!(f, "{}^{}", self.symbol, self.exp)
        }
    }
}

/// A freely reduced word in run-length form. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(l: Letter) -> Self {
        let mut w = Word::identity();
        w.push(l);
        w
    }

    pub fn gen(id: u32, exp: i32) -> Self {
        Word::letter(Letter::gen(id, exp))
    }

    pub fn stable(stage: u32, exp: i32) -> Self {
        Word::letter(Letter::stable(stage, exp))
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Appends a letter, merging with the last letter on the same symbol.
    pub fn push(&mut self, l: Letter) {
        if l.exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.symbol == l.symbol {
                last.exp += l.exp;
                if last.exp == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(l);
    }

    pub fn extend_from(&mut self, other: &Word) {
        for &l in &other.letters {
            self.push(l);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_from(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w.extend_from(&base);
        }
        w
    }

    /// `a · self · a⁻¹`.
    pub fn conjugate_by(&self, a: &Word) -> Word {
        a.concat(self).concat(&a.inverse())
    }

    /// Number of letters counted with multiplicity.
    pub fn unit_len(&self) -> usize {
        self.letters.iter().map(|l| l.exp.unsigned_abs() as usize).sum()
    }

    /// Total number of stable letters `t^{±1}`, with multiplicity.
    pub fn t_length(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| l.symbol.is_stable())
            .map(|l| l.exp.unsigned_abs() as usize)
            .sum()
    }

    /// Number of letters `t_stage^{±1}`, with multiplicity.
    pub fn stage_length(&self, stage: usize) -> usize {
        self.letters
            .iter()
            .filter(|l| l.symbol == Symbol::Stable(stage as u32))
            .map(|l| l.exp.unsigned_abs() as usize)
            .sum()
    }

    /// Highest stable-letter stage occurring in the word, 0 if none.
    pub fn max_stage(&self) -> usize {
        self.letters.iter().map(|l| l.symbol.stage()).max().unwrap_or(0)
    }

    /// Unit letters `(symbol, ±1)` in order.
    pub fn units(&self) -> impl Iterator<Item = (Symbol, i32)> + '_ {
        self.letters
            .iter()
            .flat_map(|l| std::iter::repeat_n((l.symbol, l.exp.signum()), l.exp.unsigned_abs() as usize))
    }

    /// Every rotation of the unit-letter sequence, re-merged.
    pub fn cyclic_permutations(&self) -> BTreeSet<Word> {
        let units: Vec<(Symbol, i32)> = self.units().collect();
        let mut out = BTreeSet::new();
        out.insert(self.clone());
        for shift in 1..units.len() {
            let rotated = units[shift..]
                .iter()
                .chain(&units[..shift])
                .map(|&(s, e)| Letter::new(s, e));
            out.insert(Word::from_letters(rotated));
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn parse_letter(tok: &str) -> Result<Letter, ParseError> {
    let bad = || ParseError::Word(tok.to_string());
    let (head, exp) = match tok.split_once('^') {
        Some((h, e)) => (h, e.parse::<i32>().map_err(|_| bad())?),
        None => (tok, 1),
    };
    let (kind, idx) = head.split_at(head.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?);
    let idx: u32 = idx.parse().map_err(|_| bad())?;
    let symbol = match kind {
        "g" => Symbol::Gen(idx),
        "t" if idx >= 1 => Symbol::Stable(idx),
        _ => return Err(bad()),
    };
    if exp == 0 {
        return Err(bad());
    }
    Ok(Letter::new(symbol, exp))
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut w = Word::identity();
        let mut any = false;
        for tok in s.split_whitespace() {
            any = true;
            if tok == "e" {
                continue;
            }
            w.push(parse_letter(tok)?);
        }
        if !any {
            return Err(ParseError::Word(s.to_string()));
        }
        Ok(w)
    }
}

/// Uniform random letters `x^±1` over `g0 … g{rank-1}` and `t1 … t{stages}`,
/// freely reduced, so the result may be shorter than `len`.
pub fn random_word<R: Rng>(rng: &mut R, rank: u32, stages: u32, len: usize) -> Word {
    let symbols = rank + stages;
    Word::from_letters((0..len).map(|_| {
        let k = rng.gen_range(0..symbols);
        let exp = if rng.gen_bool(0.5) { 1 } else { -1 };
        if k < rank {
            Letter::gen(k, exp)
        } else {
            Letter::stable(k - rank + 1, exp)
        }
    }))
}

/// Shorthand used throughout the tests.
pub fn w(s: &str) -> Word {
    s.parse().unwrap_or_else(|e| panic!("bad word {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn concat_examples() {
        assert_eq!(w("g0^2").concat(&w("g0^-2")), Word::identity());
        assert_eq!(w("g0").concat(&w("g1")).to_string(), "g0 g1");
        assert_eq!(w("g0 t1").concat(&w("t1^-1")), w("g0"));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(Word::identity().inverse(), Word::identity());
        assert_eq!(w("g0 g1^2").inverse(), w("g1^-2 g0^-1"));
        assert_eq!(w("t1 g0 t1^-1").inverse(), w("t1 g0^-1 t1^-1"));
    }

    #[test]
    fn t_length_examples() {
        assert_eq!(Word::identity().t_length(), 0);
        assert_eq!(w("t1^2 g0 t1^-1").t_length(), 3);
        assert_eq!(w("g0^5").t_length(), 0);
    }

    #[test]
    fn cyclic_permutation_examples() {
        let id: BTreeSet<Word> = [Word::identity()].into();
        assert_eq!(Word::identity().cyclic_permutations(), id);
        let xt: BTreeSet<Word> = [w("g0 t1"), w("t1 g0")].into();
        assert_eq!(w("g0 t1").cyclic_permutations(), xt);
        let sq: BTreeSet<Word> = [w("g0^2")].into();
        assert_eq!(w("g0^2").cyclic_permutations(), sq);
    }

    #[test]
    fn text_syntax() {
        assert_eq!(w("g0^2 t1^-1 g3").to_string(), "g0^2 t1^-1 g3");
        assert_eq!(w("e").to_string(), "e");
        assert!("g".parse::<Word>().is_err());
        assert!("t0".parse::<Word>().is_err());
        assert!("g0^x".parse::<Word>().is_err());
        assert!("h1".parse::<Word>().is_err());
        assert!("g1^0".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        let letter = (0u32..4, -3i32..=3, any::<bool>()).prop_filter_map("nonzero", |(i, e, st)| {
            (e != 0).then(|| {
                if st {
                    Letter::stable(i + 1, e)
                } else {
                    Letter::gen(i, e)
                }
            })
        });
        proptest::collection::vec(letter, 0..12).prop_map(Word::from_letters)
    }

    proptest! {
        #[test]
        fn concat_is_associative(a in arb_word(), b in arb_word(), c in arb_word()) {
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        }

        #[test]
        fn invert_is_involution(a in arb_word()) {
            prop_assert_eq!(a.inverse().inverse(), a.clone());
            prop_assert!(a.concat(&a.inverse()).is_identity());
        }

        #[test]
        fn t_length_subadditive(a in arb_word(), b in arb_word()) {
            prop_assert!(a.concat(&b).t_length() <= a.t_length() + b.t_length());
        }

        #[test]
        fn rotations_bounded_and_contain_self(a in arb_word()) {
            let rots = a.cyclic_permutations();
            prop_assert!(rots.contains(&a));
            prop_assert!(rots.len() <= a.unit_len().max(1));
        }

        #[test]
        fn text_round_trip(a in arb_word()) {
            prop_assert_eq!(a.to_string().parse::<Word>().unwrap(), a);
        }
    }
}

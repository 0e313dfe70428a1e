//! Surface-group words and the word problem.
//!
//! The group is Γ_g = ⟨a₁,b₁,…,a_g,b_g | [a₁,b₁]⋯[a_g,b_g]⟩ for genus g ≥ 2.
//! The single relator is a C′(1/6) small-cancellation word (pieces between
//! distinct cyclic conjugates of r^{±1} are single letters), so Dehn's
//! algorithm solves the word problem exactly: a freely reduced word equals
//! the identity iff repeatedly replacing any subword that covers more than
//! half of a cyclic conjugate of the relator by the shorter complement
//! terminates at the empty word.
//!
//! Canonical forms for deduplication come from the ShortLex-least word in
//! the orbit of a Dehn-reduced word under half-relator swaps (length-
//! preserving rewrites replacing exactly half of a relator conjugate by the
//! other half).

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("empty word has no primitive decomposition")]
    EmptyWord,
    #[error("cannot parse word letter {0:?}")]
    BadLetter(String),
    #[error("generator index {found} out of range for genus {genus}")]
    LetterOutOfRange { found: usize, genus: usize },
}

/// One signed generator letter: `gen` indexes a₁,b₁,a₂,b₂,… as 0,1,2,3,…
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u8, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    /// Dense index in 0..4g: generator 2k, its inverse 2k+1.
    pub fn index(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }

    pub fn from_index(i: usize) -> Self {
        Letter { gen: (i / 2) as u8, inverse: i % 2 == 1 }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.gen % 2 == 0 { 'a' } else { 'b' };
        let kind = if self.inverse { kind.to_ascii_uppercase() } else { kind };
        write!(f, "{}{}", kind, self.gen / 2 + 1)
    }
}

/// A word over the generators. Operations that advertise reduced output keep
/// the letter sequence freely reduced; the constructor reduces eagerly.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word, freely reducing the letters.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push_reduce(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends one letter, cancelling against the current tail.
    pub fn push_reduce(&mut self, l: Letter) {
        match self.0.last() {
            Some(&t) if t.cancels(l) => {
                self.0.pop();
            }
            _ => self.0.push(l),
        }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Freely reduced concatenation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push_reduce(l);
        }
        w
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut w = Word::empty();
        for _ in 0..k {
            w = w.concat(self);
        }
        w
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].cancels(p[1]))
    }

    /// Compact serialization: `a1 B1 a2` (uppercase = inverse).
    pub fn parse(s: &str, genus: usize) -> Result<Word, GroupError> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let mut chars = tok.chars();
            let c = chars.next().ok_or_else(|| GroupError::BadLetter(tok.into()))?;
            let num: usize = chars
                .as_str()
                .parse()
                .map_err(|_| GroupError::BadLetter(tok.into()))?;
            if num == 0 {
                return Err(GroupError::BadLetter(tok.into()));
            }
            let (kind, inverse) = match c {
                'a' => (0, false),
                'b' => (1, false),
                'A' => (0, true),
                'B' => (1, true),
                _ => return Err(GroupError::BadLetter(tok.into())),
            };
            let gen = 2 * (num - 1) + kind;
            if gen >= 2 * genus {
                return Err(GroupError::LetterOutOfRange { found: gen, genus });
            }
            letters.push(Letter::new(gen as u8, inverse));
        }
        Ok(Word::new(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{:?}", l)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

/// Root and exponent with `root^power` equal to the input as cyclic words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveDecomposition {
    pub root: Word,
    pub power: usize,
}

/// The one-relator presentation of the genus-g surface group, together with
/// the symmetrized relator tables used by Dehn's algorithm.
#[derive(Clone, Debug)]
pub struct Presentation {
    genus: usize,
    relator: Word,
    /// All cyclic rotations of the relator and of its inverse.
    rotations: Vec<Vec<Letter>>,
}

impl Presentation {
    pub fn new(genus: usize) -> Result<Self, GroupError> {
        if genus < 2 {
            return Err(GroupError::GenusTooSmall(genus));
        }
        let mut letters = Vec::with_capacity(4 * genus);
        for m in 0..genus {
            let a = Letter::new(2 * m as u8, false);
            let b = Letter::new(2 * m as u8 + 1, false);
            letters.extend_from_slice(&[a, b, a.inv(), b.inv()]);
        }
        let relator = Word::new(letters);
        debug_assert_eq!(relator.len(), 4 * genus);
        let mut rotations = Vec::with_capacity(8 * genus);
        for base in [relator.clone(), relator.inverse()] {
            let ls = base.letters();
            for k in 0..ls.len() {
                let mut rot = Vec::with_capacity(ls.len());
                rot.extend_from_slice(&ls[k..]);
                rot.extend_from_slice(&ls[..k]);
                rotations.push(rot);
            }
        }
        Ok(Presentation { genus, relator, rotations })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    pub fn generator(&self, i: usize) -> Letter {
        Letter::new(i as u8, false)
    }

    /// All 4g single-letter steps (generators and inverses).
    pub fn alphabet(&self) -> Vec<Letter> {
        (0..4 * self.genus).map(Letter::from_index).collect()
    }

    fn half(&self) -> usize {
        2 * self.genus
    }

    /// Longest match of `w[i..]` against a prefix of any relator rotation,
    /// returned as (rotation index, match length) when longer than `min_len`.
    fn best_match(&self, w: &[Letter], i: usize, min_len: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (ri, rot) in self.rotations.iter().enumerate() {
            let mut m = 0;
            while i + m < w.len() && m < rot.len() && w[i + m] == rot[m] {
                m += 1;
            }
            if m > min_len && best.map_or(true, |(_, bm)| m > bm) {
                best = Some((ri, m));
            }
        }
        best
    }

    /// Dehn's algorithm: repeatedly replace any subword covering more than
    /// half of a relator conjugate by the inverse of the complement. The
    /// result is empty iff the input is trivial in Γ.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = if w.is_freely_reduced() { w.clone() } else { Word::new(w.0.clone()) };
        'outer: loop {
            let ls = cur.letters();
            for i in 0..ls.len() {
                if let Some((ri, m)) = self.best_match(ls, i, self.half()) {
                    let rot = &self.rotations[ri];
                    let mut next = Word::new(ls[..i].iter().copied());
                    for l in rot[m..].iter().rev() {
                        next.push_reduce(l.inv());
                    }
                    for &l in &ls[i + m..] {
                        next.push_reduce(l);
                    }
                    cur = next;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// True iff `w` represents the identity of Γ.
    pub fn is_identity(&self, w: &Word) -> bool {
        self.dehn_reduce(w).is_empty()
    }

    /// True iff the two words represent the same element of Γ.
    pub fn equal_in_group(&self, u: &Word, v: &Word) -> bool {
        self.is_identity(&u.concat(&v.inverse()))
    }

    /// ShortLex-least representative among the Dehn-reduced words reachable
    /// from `w` by half-relator swaps. Distinct elements get distinct
    /// canonical words; equal elements get the same one whenever the swap
    /// orbit connects their geodesic representatives (the expected situation
    /// for the surface relator; orbit-level users cross-check via matrices).
    pub fn canonical_form(&self, w: &Word) -> Word {
        let reduced = self.dehn_reduce(w);
        if reduced.is_empty() {
            return reduced;
        }
        let half = self.half();
        let mut seen = std::collections::HashSet::new();
        let mut queue = std::collections::VecDeque::new();
        let mut best = reduced.clone();
        seen.insert(reduced.clone());
        queue.push_back(reduced);
        // Swap orbits are tiny in practice; the cap is a safety valve.
        const ORBIT_CAP: usize = 4096;
        while let Some(cur) = queue.pop_front() {
            if shortlex_less(&cur, &best) {
                best = cur.clone();
            }
            if seen.len() >= ORBIT_CAP {
                continue;
            }
            let ls = cur.letters();
            if ls.len() < half {
                continue;
            }
            for i in 0..=(ls.len() - half) {
                for rot in &self.rotations {
                    if ls[i..i + half] != rot[..half] {
                        continue;
                    }
                    let mut next = Word::new(ls[..i].iter().copied());
                    for l in rot[half..].iter().rev() {
                        next.push_reduce(l.inv());
                    }
                    for &l in &ls[i + half..] {
                        next.push_reduce(l);
                    }
                    // A swap that shortens the word means the input was not
                    // geodesic after all; restart from the shorter word.
                    let next = if next.len() < cur.len() { self.canonical_form(&next) } else { next };
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        best
    }

    /// Strips conjugating prefix/suffix pairs: the result is conjugate to
    /// `w` and its first and last letters are not mutually inverse.
    pub fn cyclic_reduce(&self, w: &Word) -> Word {
        let mut ls: Vec<Letter> = self.free_reduce(w).0;
        while ls.len() >= 2 && ls.first().unwrap().cancels(*ls.last().unwrap()) {
            ls.pop();
            ls.remove(0);
        }
        Word(ls)
    }

    /// Free reduction (presentation-independent; lives here for symmetry
    /// with the other reductions).
    pub fn free_reduce(&self, w: &Word) -> Word {
        Word::new(w.0.iter().copied())
    }

    /// Maximal `k` and root with `root^k = w` as cyclic words, decided by
    /// string periodicity of the cyclic letter sequence.
    pub fn primitive_decompose(&self, w: &Word) -> Result<PrimitiveDecomposition, GroupError> {
        let ls = w.letters();
        let n = ls.len();
        if n == 0 {
            return Err(GroupError::EmptyWord);
        }
        for p in 1..=n {
            if n % p != 0 {
                continue;
            }
            if (0..n).all(|i| ls[i] == ls[(i + p) % n]) {
                return Ok(PrimitiveDecomposition {
                    root: Word(ls[..p].to_vec()),
                    power: n / p,
                });
            }
        }
        unreachable!("period n always matches");
    }
}

fn shortlex_less(a: &Word, b: &Word) -> bool {
    let ka = (a.len(), a.letters().iter().map(|l| l.index()).collect::<Vec<_>>());
    let kb = (b.len(), b.letters().iter().map(|l| l.index()).collect::<Vec<_>>());
    ka < kb
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p2() -> Presentation {
        Presentation::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn relator_shape() {
        let p = p2();
        assert_eq!(p.relator().len(), 8);
        assert_eq!(p.relator(), &w("a1 b1 A1 B1 a2 b2 A2 B2"));
        // every generator appears exactly twice counting inverses
        let mut counts = [0usize; 4];
        for l in p.relator().letters() {
            counts[l.gen as usize] += 1;
        }
        assert_eq!(counts, [2, 2, 2, 2]);
        // cyclically reduced
        assert_eq!(p.cyclic_reduce(p.relator()).len(), 8);
    }

    #[test]
    fn free_reduce_examples() {
        let p = p2();
        assert!(p.free_reduce(&w("a1 A1")).is_empty());
        assert_eq!(p.free_reduce(&Word(vec![
            Letter::new(0, false),
            Letter::new(1, false),
            Letter::new(1, true),
            Letter::new(0, false)
        ])), w("a1 a1"));
        let r = w("a1 b2 A2");
        assert_eq!(p.free_reduce(&r), r);
    }

    #[test]
    fn cyclic_reduce_examples() {
        let p = p2();
        assert_eq!(p.cyclic_reduce(&Word(vec![
            Letter::new(0, false),
            Letter::new(1, false),
            Letter::new(0, true)
        ])), w("b1"));
        assert_eq!(p.cyclic_reduce(&w("a1 b1")), w("a1 b1"));
        assert_eq!(p.cyclic_reduce(&Word(vec![
            Letter::new(1, true),
            Letter::new(0, false),
            Letter::new(0, false),
            Letter::new(1, false)
        ])), w("a1 a1"));
    }

    #[test]
    fn dehn_kills_relator_and_its_rotations() {
        let p = p2();
        assert!(p.dehn_reduce(p.relator()).is_empty());
        let ls = p.relator().letters();
        for k in 0..8 {
            let mut rot: Vec<Letter> = ls[k..].to_vec();
            rot.extend_from_slice(&ls[..k]);
            assert!(p.is_identity(&Word::new(rot)), "rotation {k}");
        }
        assert!(p.is_identity(&p.relator().inverse()));
    }

    #[test]
    fn dehn_leaves_short_words_alone() {
        let p = p2();
        for s in ["a1", "a1 b1", "a1 b1 A1", "a2 b2 a2 b2", "a1 a1 a1"] {
            let word = w(s);
            assert_eq!(p.dehn_reduce(&word), word, "{s}");
        }
    }

    #[test]
    fn dehn_reduce_is_stable() {
        let p = p2();
        let long = p.relator().concat(&w("a1 b2")).concat(p.relator());
        let once = p.dehn_reduce(&long);
        assert_eq!(p.dehn_reduce(&once), once);
        assert!(p.equal_in_group(&long, &w("a1 b2")));
    }

    #[test]
    fn primitive_decompose_examples() {
        let p = p2();
        let ab = w("a1 b1");
        let d = p.primitive_decompose(&w("a1 b1 a1 b1")).unwrap();
        assert_eq!((d.root, d.power), (ab.clone(), 2));
        let d = p.primitive_decompose(&ab).unwrap();
        assert_eq!((d.root, d.power), (ab.clone(), 1));
        let d = p.primitive_decompose(&w("a1 b1 a1 b1 a1 b1")).unwrap();
        assert_eq!((d.root, d.power), (ab, 3));
        assert!(p.primitive_decompose(&Word::empty()).is_err());
    }

    #[test]
    fn primitive_decompose_exhaustive_small_roots() {
        // root^k recovered for every cyclically reduced non-power root of
        // length <= 4 and k <= 6
        let p = p2();
        let alphabet = p.alphabet();
        let mut roots = Vec::new();
        for len in 1..=4usize {
            let mut idx = vec![0usize; len];
            loop {
                let cand = Word(idx.iter().map(|&i| alphabet[i]).collect());
                if cand.is_freely_reduced()
                    && p.cyclic_reduce(&cand).len() == len
                    && p.primitive_decompose(&cand).unwrap().power == 1
                {
                    roots.push(cand);
                }
                let mut j = 0;
                loop {
                    if j == len {
                        break;
                    }
                    idx[j] += 1;
                    if idx[j] < alphabet.len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == len {
                    break;
                }
            }
        }
        assert!(!roots.is_empty());
        for root in roots {
            for k in 1..=6usize {
                let mut power = Vec::new();
                for _ in 0..k {
                    power.extend_from_slice(root.letters());
                }
                let d = p.primitive_decompose(&Word(power)).unwrap();
                assert_eq!(d.power, k, "root {root} k {k}");
                assert_eq!(d.root, root);
            }
        }
    }

    #[test]
    fn canonical_form_identifies_half_relator_words() {
        let p = p2();
        // r = u v with |u| = |v| = 4: u and v^{-1} are the same element
        let ls = p.relator().letters();
        let u = Word(ls[..4].to_vec());
        let v_inv = Word(ls[4..].to_vec()).inverse();
        assert!(p.equal_in_group(&u, &v_inv));
        assert_eq!(p.canonical_form(&u), p.canonical_form(&v_inv));
    }

    #[test]
    fn word_serialization_round_trip() {
        let word = w("a1 B1 a2 b2 A2");
        assert_eq!(Word::parse(&word.to_string(), 2).unwrap(), word);
        assert!(Word::parse("c1", 2).is_err());
        assert!(Word::parse("a3", 2).is_err());
        assert!(Word::parse("a0", 2).is_err());
    }

    proptest! {
        #[test]
        fn free_reduce_idempotent(seq in proptest::collection::vec(0usize..8, 0..24)) {
            let p = p2();
            let word = Word::new(seq.into_iter().map(Letter::from_index));
            prop_assert!(word.is_freely_reduced());
            prop_assert_eq!(p.free_reduce(&word), word);
        }

        #[test]
        fn cyclic_at_most_free_length(seq in proptest::collection::vec(0usize..8, 0..24)) {
            let p = p2();
            let word = Word::new(seq.into_iter().map(Letter::from_index));
            prop_assert!(p.cyclic_reduce(&word).len() <= word.len());
        }

        #[test]
        fn inverse_concat_is_trivial(seq in proptest::collection::vec(0usize..8, 0..16)) {
            let p = p2();
            let word = Word::new(seq.into_iter().map(Letter::from_index));
            prop_assert!(p.is_identity(&word.concat(&word.inverse())));
        }

        #[test]
        fn dehn_idempotent(seq in proptest::collection::vec(0usize..8, 0..20)) {
            let p = p2();
            let word = Word::new(seq.into_iter().map(Letter::from_index));
            let once = p.dehn_reduce(&word);
            prop_assert_eq!(p.dehn_reduce(&once), once);
        }
    }
}

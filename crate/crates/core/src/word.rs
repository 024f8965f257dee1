//! Words over a finite generating set.
//!
//! A [`Word`] is a plain sequence of [`Letter`]s, each a generator index with
//! exponent `+1` or `-1`. Nothing is reduced implicitly; call
//! [`Word::free_reduce`] when a reduced representative is needed. The empty
//! word stands for the identity everywhere.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub index: usize,
    pub name: String,
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn exponent_sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Position in the shortlex letter order `x0 < x0^-1 < x1 < x1^-1 < ...`.
    pub fn rank(self) -> usize {
        2 * self.gen + usize::from(self.inverse)
    }

    pub fn from_rank(rank: usize) -> Self {
        Letter {
            gen: rank / 2,
            inverse: rank % 2 == 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn gen(gen: usize) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    /// `gen^exp`, expanded into `|exp|` letters.
    pub fn gen_pow(gen: usize, exp: i64) -> Self {
        let letter = if exp < 0 {
            Letter::neg(gen)
        } else {
            Letter::pos(gen)
        };
        Word(vec![letter; exp.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, if any.
    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self^exp`, not reduced.
    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut v = Vec::with_capacity(base.len() * exp.unsigned_abs() as usize);
        for _ in 0..exp.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// `self · other · self⁻¹`, freely reduced.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse()).free_reduce()
    }

    /// Requires a freely reduced word.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) if self.0.len() > 1 => f != l.inv(),
            _ => true,
        }
    }

    pub fn cyclic_reduce(&self) -> CyclicReduction {
        let w = self.free_reduce().0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo > 1 && w[lo] == w[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        CyclicReduction {
            core: Word(w[lo..hi].to_vec()),
            conjugator: Word(w[..lo].to_vec()),
        }
    }

    /// Rotation `w[k..] w[..k]`, which equals `w[..k]⁻¹ · w · w[..k]`.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    pub fn suffix(&self, k: usize) -> Word {
        Word(self.0[k..].to_vec())
    }

    /// Exponent sum of each generator, over `rank` generators.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0i64; rank];
        for l in &self.0 {
            sums[l.gen] += i64::from(l.exponent_sign());
        }
        sums
    }

    /// Relabels generators through `map`.
    pub fn substitute(&self, map: &[Word]) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let image = &map[l.gen];
            if l.inverse {
                out.extend(image.inverse().0);
            } else {
                out.extend_from_slice(&image.0);
            }
        }
        Word(out)
    }

    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.0
                .iter()
                .map(|l| l.rank())
                .cmp(other.0.iter().map(|l| l.rank()))
        })
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(mut self, rhs: Word) -> Word {
        self.0.extend(rhs.0);
        self
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// `input = conjugator · core · conjugator⁻¹` after free reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub core: Word,
    pub conjugator: Word,
}

/// Ordered generator names with reverse lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
    lookup: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, WordError> {
        let mut gens = Vec::with_capacity(names.len());
        let mut lookup = HashMap::new();
        for (index, name) in names.iter().enumerate() {
            let name = name.as_ref();
            let valid = !name.is_empty()
                && !name.chars().all(|c| c.is_ascii_digit())
                && !name.contains(|c: char| c.is_whitespace() || c == '^' || c == ',');
            if !valid {
                return Err(WordError::InvalidName(name.to_string()));
            }
            if lookup.insert(name.to_string(), index).is_some() {
                return Err(WordError::DuplicateName(name.to_string()));
            }
            gens.push(Generator {
                index,
                name: name.to_string(),
            });
        }
        Ok(Alphabet { gens, lookup })
    }

    /// Generators `prefix0, prefix1, ...`.
    pub fn numbered(prefix: &str, rank: usize) -> Self {
        let names: Vec<String> = (0..rank).map(|i| format!("{prefix}{i}")).collect();
        Alphabet::new(&names).expect("numbered names are valid")
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.gens.iter().map(|g| g.name.as_str())
    }

    pub fn name(&self, index: usize) -> &str {
        &self.gens[index].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    /// Parses whitespace-separated `name` / `name^k` tokens; `1` is the empty word.
    pub fn parse(&self, text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => {
                    let exp: i64 = exp
                        .parse()
                        .map_err(|_| WordError::MalformedToken(token.to_string()))?;
                    (name, exp)
                }
                None => (token, 1),
            };
            if name.is_empty() {
                return Err(WordError::MalformedToken(token.to_string()));
            }
            let gen = self
                .index_of(name)
                .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
            letters.extend(Word::gen_pow(gen, exp).0);
        }
        Ok(Word(letters))
    }

    /// Run-length display, `1` for the empty word.
    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let count = (j - i) as i64 * i64::from(l.exponent_sign());
            let name = self.name(l.gen);
            if count == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{count}"));
            }
            i = j;
        }
        parts.join(" ")
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> DisplayWord<'a> {
        DisplayWord {
            alphabet: self,
            word: w,
        }
    }
}

pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format(self.word))
    }
}

/// A finite presentation: generators and relator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Self {
        Presentation { alphabet, relators }
    }

    pub fn parse<S: AsRef<str>>(generators: &[S], relators: &[S]) -> Result<Self, WordError> {
        let alphabet = Alphabet::new(generators)?;
        let relators = relators
            .iter()
            .map(|r| alphabet.parse(r.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation { alphabet, relators })
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }
}

/// Freely reduced words over `rank` generators in shortlex order, starting
/// with the empty word.
pub struct ShortlexWords {
    rank: usize,
    level: Vec<Word>,
    pos: usize,
}

impl ShortlexWords {
    pub fn new(rank: usize) -> Self {
        ShortlexWords {
            rank,
            level: vec![Word::empty()],
            pos: 0,
        }
    }
}

impl Iterator for ShortlexWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.pos == self.level.len() {
            if self.rank == 0 {
                return None;
            }
            let mut next = Vec::new();
            for w in &self.level {
                for r in 0..2 * self.rank {
                    let l = Letter::from_rank(r);
                    if w.0.last() == Some(&l.inv()) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            self.level = next;
            self.pos = 0;
        }
        let w = self.level[self.pos].clone();
        self.pos += 1;
        Some(w)
    }
}

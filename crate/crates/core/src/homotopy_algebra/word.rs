use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word in the free group on the generators of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(generator: usize, inverse: bool) -> Self {
        Word(vec![Letter::new(generator, inverse)])
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

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `g^n` for a single generator.
    pub fn power(generator: usize, n: i64) -> Word {
        Word(vec![Letter::new(generator, n < 0); n.unsigned_abs() as usize])
    }

    /// Cancels adjacent `g g⁻¹` pairs.
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

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            v[l.generator] += l.exponent();
        }
        v
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// Parses `a b a^-1 b^-1`, `a*b^2`, or commutators `[a1,b1][a2,b2]`.
    /// Letters are separated by whitespace, `*` or `.`; `1` is the empty word.
    pub fn parse(text: &str, generators: &[String]) -> Result<Word> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let w = parse_seq(&chars, &mut pos, generators, false)?;
        if pos != chars.len() {
            return Err(Error::InvalidWord(format!("unexpected `{}` at offset {pos} in `{text}`", chars[pos])));
        }
        Ok(w)
    }

    pub fn display<'a>(&'a self, generators: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, generators }
    }
}

fn parse_seq(c: &[char], pos: &mut usize, gens: &[String], nested: bool) -> Result<Word> {
    let mut out = Word::empty();
    loop {
        while *pos < c.len() && (c[*pos].is_whitespace() || c[*pos] == '*' || c[*pos] == '.') {
            *pos += 1;
        }
        if *pos == c.len() {
            return Ok(out);
        }
        match c[*pos] {
            ',' | ']' if nested => return Ok(out),
            '[' => {
                *pos += 1;
                let u = parse_seq(c, pos, gens, true)?;
                if c.get(*pos) != Some(&',') {
                    return Err(Error::InvalidWord("expected `,` inside commutator".into()));
                }
                *pos += 1;
                let v = parse_seq(c, pos, gens, true)?;
                if c.get(*pos) != Some(&']') {
                    return Err(Error::InvalidWord("expected `]` closing commutator".into()));
                }
                *pos += 1;
                let k = parse_exponent(c, pos)?;
                out = out.concat(&pow_word(&Word::commutator(&u, &v), k));
            }
            '1' => {
                *pos += 1;
            }
            ch if ch.is_alphabetic() || ch == '_' => {
                let start = *pos;
                while *pos < c.len() && (c[*pos].is_alphanumeric() || c[*pos] == '_') {
                    *pos += 1;
                }
                let name: String = c[start..*pos].iter().collect();
                let g = gens
                    .iter()
                    .position(|x| *x == name)
                    .ok_or_else(|| Error::InvalidWord(format!("unknown generator `{name}`")))?;
                let k = parse_exponent(c, pos)?;
                out = out.concat(&Word::power(g, k));
            }
            ch => return Err(Error::InvalidWord(format!("unexpected `{ch}` at offset {pos}", pos = *pos))),
        }
    }
}

fn parse_exponent(c: &[char], pos: &mut usize) -> Result<i64> {
    if c.get(*pos) != Some(&'^') {
        return Ok(1);
    }
    *pos += 1;
    let start = *pos;
    if matches!(c.get(*pos), Some('-') | Some('+')) {
        *pos += 1;
    }
    while *pos < c.len() && c[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let s: String = c[start..*pos].iter().collect();
    s.parse::<i64>().map_err(|_| Error::InvalidWord(format!("bad exponent `{s}`")))
}

fn pow_word(w: &Word, k: i64) -> Word {
    let base = if k < 0 { w.inverse() } else { w.clone() };
    let mut out = Word::empty();
    for _ in 0..k.unsigned_abs() {
        out = out.concat(&base);
    }
    out
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    generators: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .word
            .0
            .iter()
            .map(|l| {
                let name = self.generators.get(l.generator).cloned().unwrap_or_else(|| format!("g{}", l.generator));
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_display() {
        let g = gens(&["a", "b"]);
        let w = Word::parse("a b a^-1 b^-1", &g).unwrap();
        assert_eq!(w, Word::parse("[a,b]", &g).unwrap());
        assert_eq!(w.display(&g).to_string(), "a b a^-1 b^-1");
        assert_eq!(Word::parse("a^3", &g).unwrap().len(), 3);
        assert!(Word::parse("1", &g).unwrap().is_empty());
    }

    #[test]
    fn parse_names_the_bad_generator() {
        let err = Word::parse("a c", &gens(&["a", "b"])).unwrap_err();
        assert!(err.to_string().contains("`c`"));
    }

    #[test]
    fn free_reduction() {
        let g = gens(&["a", "b"]);
        let w = Word::parse("a b b^-1 a^-1 b", &g).unwrap();
        assert_eq!(w.free_reduce(), Word::parse("b", &g).unwrap());
        let x = Word::parse("a b^2 a^-1", &g).unwrap();
        assert!(x.concat(&x.inverse()).free_reduce().is_empty());
    }
}

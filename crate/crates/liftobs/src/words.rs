//! Free-group words, finitely presented groups, and abelianization.
//!
//! Words are stored freely reduced: adjacent letters have distinct
//! generator indices and no letter has exponent zero. Presentations are
//! parsed from text of the form `a,b; aba^-1b^-3` with `[x,y]` commutator
//! sugar; parse errors carry byte positions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::{smith_normal_form, IntMatrix, SmithNormalForm};

#[derive(Debug, Error, PartialEq)]
pub enum WordError {
    #[error("generator index {index} out of range (group has {count} generators)")]
    BadGenerator { index: usize, count: usize },
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// A freely reduced word: list of (generator index, nonzero exponent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    /// Single generator to a power.
    pub fn gen(index: usize, exponent: i64) -> Word {
        if exponent == 0 {
            Word::empty()
        } else {
            Word { letters: vec![(index, exponent)] }
        }
    }

    /// Freely reduce a raw letter list.
    pub fn reduce(raw: &[(usize, i64)]) -> Word {
        let mut letters: Vec<(usize, i64)> = Vec::with_capacity(raw.len());
        for &(g, e) in raw {
            if e == 0 {
                continue;
            }
            match letters.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        letters.pop();
                    }
                }
                _ => letters.push((g, e)),
            }
        }
        Word { letters }
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut raw = self.letters.clone();
        raw.extend_from_slice(&other.letters);
        Word::reduce(&raw)
    }

    pub fn inverse(&self) -> Word {
        let raw: Vec<(usize, i64)> = self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect();
        Word::reduce(&raw)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `[a, b] = a b a^-1 b^-1`
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Conjugate `g w g^-1` by a single generator.
    pub fn conjugate_by_gen(&self, index: usize, exponent: i64) -> Word {
        Word::gen(index, exponent).concat(self).concat(&Word::gen(index, -exponent))
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    /// Column of exponent sums over `count` generators.
    pub fn exponent_vector(&self, count: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); count];
        for &(g, e) in &self.letters {
            v[g] += BigInt::from(e);
        }
        v
    }

    /// Total letter count, inverses included.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    /// Render with the given generator names.
    pub fn display(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|&(g, e)| {
                let name = names.get(g).cloned().unwrap_or_else(|| format!("g{g}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_generator().unwrap_or(0))
            .map(|i| {
                let c = (b'a' + (i % 26) as u8) as char;
                c.to_string()
            })
            .collect();
        write!(f, "{}", self.display(&names))
    }
}

/// A finitely presented group: named generators plus relator words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<GroupPresentation, WordError> {
        let count = generators.len();
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= count {
                    return Err(WordError::BadGenerator { index: g, count });
                }
            }
        }
        Ok(GroupPresentation { generators, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// `Z^2 = <a, b | [a, b]>`
    pub fn z2() -> GroupPresentation {
        GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::commutator(&Word::gen(0, 1), &Word::gen(1, 1))],
        )
        .unwrap()
    }

    /// `BS(1, 3) = <a, b | a b a^-1 b^-3>`
    pub fn bs13() -> GroupPresentation {
        let r = Word::gen(0, 1)
            .concat(&Word::gen(1, 1))
            .concat(&Word::gen(0, -1))
            .concat(&Word::gen(1, -3));
        GroupPresentation::new(vec!["a".into(), "b".into()], vec![r]).unwrap()
    }

    /// Genus-g surface group: one relator, a product of g commutators.
    pub fn surface_group(genus: usize) -> GroupPresentation {
        let mut names = Vec::new();
        for i in 1..=genus {
            names.push(format!("a{i}"));
            names.push(format!("b{i}"));
        }
        let mut relator = Word::empty();
        for i in 0..genus {
            relator = relator.concat(&Word::commutator(&Word::gen(2 * i, 1), &Word::gen(2 * i + 1, 1)));
        }
        GroupPresentation { generators: names, relators: vec![relator] }
    }

    /// Exponent-sum matrix: one column per relator, one row per generator.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let g = self.generator_count().max(1);
        let r = self.relators.len().max(1);
        let mut m = IntMatrix::zeros(g, r);
        for (j, rel) in self.relators.iter().enumerate() {
            for (i, e) in rel.exponent_vector(self.generator_count()).into_iter().enumerate() {
                m[(i, j)] = e;
            }
        }
        m
    }
}

/// Free part and torsion of `G/[G,G]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbelianizationResult {
    pub free_rank: usize,
    /// Invariant factors >= 2 in increasing divisibility order.
    #[serde(with = "bigint_strings")]
    pub torsion_coefficients: Vec<BigInt>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(BigInt::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .into_iter()
            .map(|t| t.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl AbelianizationResult {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion_coefficients.is_empty()
    }
}

/// Abelianization as the Smith normal form of the exponent-sum matrix.
pub fn abelianization(p: &GroupPresentation) -> AbelianizationResult {
    abelianization_with_snf(p).0
}

pub(crate) fn abelianization_with_snf(p: &GroupPresentation) -> (AbelianizationResult, SmithNormalForm) {
    let snf = smith_normal_form(&p.exponent_matrix());
    let factors = snf.invariant_factors();
    let torsion: Vec<BigInt> = factors.iter().filter(|f| f.abs() > BigInt::from(1)).cloned().collect();
    let result = AbelianizationResult {
        free_rank: p.generator_count() - factors.len(),
        torsion_coefficients: torsion,
    };
    (result, snf)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    generators: Vec<String>,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, WordError> {
        Err(WordError::Parse { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    fn parse_exponent(&mut self) -> Result<i64, WordError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.error("expected digits after '^'");
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        let value: i64 = match digits.parse() {
            Ok(v) => v,
            Err(_) => return self.error("exponent out of range"),
        };
        Ok(if negative { -value } else { value })
    }

    fn parse_word(&mut self, stop: &[u8]) -> Result<Word, WordError> {
        let mut raw: Vec<(usize, i64)> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(c) if stop.contains(&c) => break,
                Some(b'[') => {
                    self.pos += 1;
                    let lhs = self.parse_word(b",")?;
                    if self.peek() != Some(b',') {
                        return self.error("expected ',' in commutator");
                    }
                    self.pos += 1;
                    let rhs = self.parse_word(b"]")?;
                    if self.peek() != Some(b']') {
                        return self.error("expected ']' closing commutator");
                    }
                    self.pos += 1;
                    let exp = self.parse_exponent()?;
                    let comm = Word::commutator(&lhs, &rhs).pow(exp);
                    raw.extend_from_slice(comm.letters());
                }
                Some(c) if c.is_ascii_lowercase() => {
                    let start = self.pos;
                    self.pos += 1;
                    // Multi-character names like a1, b2.
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.text[start..self.pos]).unwrap().to_string();
                    let Some(index) = self.gen_index(&name) else {
                        self.pos = start;
                        return self.error(format!("unknown generator {name:?}"));
                    };
                    let exp = self.parse_exponent()?;
                    raw.push((index, exp));
                }
                Some(c) => {
                    return self.error(format!("unexpected character {:?}", c as char));
                }
            }
        }
        Ok(Word::reduce(&raw))
    }
}

/// Parse a word over the given generator names, e.g. `aba^-1b^-3` or `[a,b]`.
pub fn parse_word(text: &str, generators: &[String]) -> Result<Word, WordError> {
    let mut p = Parser { text: text.as_bytes(), pos: 0, generators: generators.to_vec() };
    let w = p.parse_word(&[])?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.error("trailing input");
    }
    Ok(w)
}

/// Parse `gens; relator, relator, ...`, e.g. `a,b; aba^-1b^-3`.
pub fn parse_presentation(text: &str) -> Result<GroupPresentation, WordError> {
    let Some(split) = text.find(';') else {
        return Err(WordError::Parse { position: text.len(), message: "expected ';' between generators and relators".into() });
    };
    let mut generators = Vec::new();
    for (offset, part) in split_with_offsets(&text[..split], ',') {
        let name = part.trim();
        if name.is_empty() || !name.bytes().next().unwrap().is_ascii_lowercase() {
            return Err(WordError::Parse { position: offset, message: format!("bad generator name {name:?}") });
        }
        if generators.contains(&name.to_string()) {
            return Err(WordError::Parse { position: offset, message: format!("duplicate generator {name:?}") });
        }
        generators.push(name.to_string());
    }
    let mut relators = Vec::new();
    let rel_text = &text[split + 1..];
    for (offset, part) in split_relators(rel_text) {
        if part.trim().is_empty() {
            continue;
        }
        let mut p = Parser { text: part.as_bytes(), pos: 0, generators: generators.clone() };
        match p.parse_word(&[]) {
            Ok(w) => relators.push(w),
            Err(WordError::Parse { position, message }) => {
                return Err(WordError::Parse { position: split + 1 + offset + position, message });
            }
            Err(e) => return Err(e),
        }
    }
    GroupPresentation::new(generators, relators)
}

fn split_with_offsets(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if c == sep {
            out.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &text[start..]));
    out
}

/// Split relators on commas that are not inside commutator brackets.
fn split_relators(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &text[start..]));
    out
}

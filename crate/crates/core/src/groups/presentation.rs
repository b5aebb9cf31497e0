use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::table::FiniteGroupTable;
use crate::{Error, Result};

pub const DEFAULT_COSET_BOUND: usize = 10_000;

/// Generators are single lowercase letters; the corresponding capital letter
/// is the inverse. Relators may be words (`abab`), powers (`a4`, `(ab)3`) or
/// equations (`ab=ba`, `aca=bcb=c`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub gens: Vec<String>,
    pub rels: Vec<String>,
}

/// A letter is `2 * generator` or `2 * generator + 1` for its inverse.
type Word = Vec<usize>;

fn inverse_letter(x: usize) -> usize {
    x ^ 1
}

fn invert(w: &[usize]) -> Word {
    w.iter().rev().map(|&x| inverse_letter(x)).collect()
}

impl GroupPresentation {
    pub fn new(gens: &[&str], rels: &[&str]) -> Self {
        GroupPresentation {
            gens: gens.iter().map(|s| s.to_string()).collect(),
            rels: rels.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn letter(&self, c: char) -> Result<usize> {
        let lower = c.to_ascii_lowercase().to_string();
        let g = self
            .gens
            .iter()
            .position(|s| *s == lower)
            .ok_or_else(|| Error::Invalid(format!("unknown generator `{c}`")))?;
        Ok(2 * g + usize::from(c.is_ascii_uppercase()))
    }

    fn parse_word(&self, s: &str) -> Result<Word> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (w, end) = self.parse_seq(&chars, 0)?;
        if end != chars.len() {
            return Err(Error::Invalid(format!("unbalanced parenthesis in `{s}`")));
        }
        Ok(w)
    }

    fn parse_seq(&self, chars: &[char], mut i: usize) -> Result<(Word, usize)> {
        let mut out = Vec::new();
        while i < chars.len() && chars[i] != ')' {
            let (atom, next) = match chars[i] {
                '(' => {
                    let (inner, j) = self.parse_seq(chars, i + 1)?;
                    if chars.get(j) != Some(&')') {
                        return Err(Error::Invalid("missing `)`".into()));
                    }
                    (inner, j + 1)
                }
                '1' if out.is_empty() && i + 1 == chars.len() => (Vec::new(), i + 1),
                c if c.is_ascii_alphabetic() => (vec![self.letter(c)?], i + 1),
                c => return Err(Error::Invalid(format!("unexpected `{c}` in relator"))),
            };
            i = next;
            let start = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let exp: i64 = if start == i {
                1
            } else {
                chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Invalid("bad exponent".into()))?
            };
            let base = if exp < 0 { invert(&atom) } else { atom };
            for _ in 0..exp.unsigned_abs() {
                out.extend_from_slice(&base);
            }
        }
        Ok((out, i))
    }

    /// Relators as reduced letter words, one per `=` link.
    fn relators(&self) -> Result<Vec<Word>> {
        if self.gens.iter().any(|g| g.len() != 1 || !g.chars().all(|c| c.is_ascii_lowercase())) {
            return Err(Error::Invalid("generators must be single lowercase letters".into()));
        }
        let mut out = Vec::new();
        for r in &self.rels {
            let sides: Vec<Word> = r.split('=').map(|s| self.parse_word(s)).collect::<Result<_>>()?;
            if sides.len() == 1 {
                out.push(sides[0].clone());
            }
            for pair in sides.windows(2) {
                let mut w = pair[0].clone();
                w.extend(invert(&pair[1]));
                out.push(w);
            }
        }
        Ok(out.into_iter().map(free_reduce).filter(|w| !w.is_empty()).collect())
    }
}

fn free_reduce(w: Word) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for x in w {
        if out.last() == Some(&inverse_letter(x)) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

const NONE: usize = usize::MAX;

struct CosetTable {
    cols: usize,
    rows: Vec<Vec<usize>>,
    parent: Vec<usize>,
    bound: usize,
    queue: Vec<usize>,
}

impl CosetTable {
    fn new(cols: usize, bound: usize) -> Self {
        CosetTable {
            cols,
            rows: vec![vec![NONE; cols]],
            parent: vec![0],
            bound,
            queue: Vec::new(),
        }
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.rows.len() >= self.bound {
            return Err(Error::CosetBound(self.bound));
        }
        let d = self.rows.len();
        self.rows.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.rows[c][x] = d;
        self.rows[d][inverse_letter(x)] = c;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.rows[e][x];
                if f == NONE {
                    continue;
                }
                let xi = inverse_letter(x);
                if self.rows[f][xi] == e {
                    self.rows[f][xi] = NONE;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.rows[e1][x] != NONE {
                    let t = self.rows[e1][x];
                    self.merge(f1, t);
                } else if self.rows[f1][xi] != NONE {
                    let t = self.rows[f1][xi];
                    self.merge(e1, t);
                } else {
                    self.rows[e1][x] = f1;
                    self.rows[f1][xi] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j && self.rows[f][w[i]] != NONE {
                f = self.rows[f][w[i]];
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.rows[b][inverse_letter(w[j - 1])] != NONE {
                b = self.rows[b][inverse_letter(w[j - 1])];
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.rows[f][w[i]] = b;
                self.rows[b][inverse_letter(w[i])] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn enumerate(&mut self, relators: &[Word]) -> Result<()> {
        let mut c = 0;
        while c < self.rows.len() {
            for w in relators {
                if !self.is_live(c) {
                    break;
                }
                self.scan_and_fill(c, w)?;
            }
            if self.is_live(c) {
                for x in 0..self.cols {
                    if self.rows[c][x] == NONE {
                        self.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }
}

/// Coset enumeration over the trivial subgroup. Elements are numbered in
/// breadth-first order of their shortest words.
pub fn group_from_presentation(pres: &GroupPresentation, bound: usize) -> Result<FiniteGroupTable> {
    if bound == 0 {
        return Err(Error::Invalid("coset bound must be at least 1".into()));
    }
    let relators = pres.relators()?;
    let cols = 2 * pres.gens.len();
    if cols == 0 {
        return FiniteGroupTable::assemble(1, vec![0], Vec::new());
    }
    let mut ct = CosetTable::new(cols, bound);
    ct.enumerate(&relators)?;

    let mut number = vec![NONE; ct.rows.len()];
    let mut words: Vec<Word> = Vec::new();
    let mut order_seen = Vec::new();
    number[0] = 0;
    words.push(Vec::new());
    order_seen.push(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for x in 0..cols {
            let d = ct.rep(ct.rows[c][x]);
            if number[d] == NONE {
                number[d] = order_seen.len();
                let mut w = words[number[c]].clone();
                w.push(x);
                words.push(w);
                order_seen.push(d);
                queue.push_back(d);
            }
        }
    }
    let n = order_seen.len();
    let mut table = vec![0usize; n * n];
    for (a, &ca) in order_seen.iter().enumerate() {
        for (b, w) in words.iter().enumerate() {
            let mut cur = ca;
            for &x in w {
                cur = ct.rep(ct.rows[cur][x]);
            }
            table[a * n + b] = number[cur];
        }
    }
    let generators = (0..pres.gens.len()).map(|g| number[ct.rep(ct.rows[0][2 * g])]).collect();
    FiniteGroupTable::assemble(n, table, generators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(gens: &[&str], rels: &[&str]) -> usize {
        let g = group_from_presentation(&GroupPresentation::new(gens, rels), DEFAULT_COSET_BOUND).unwrap();
        assert!(g.check_axioms());
        g.order()
    }

    #[test]
    fn small_orders() {
        assert_eq!(order(&["a"], &["a2"]), 2);
        assert_eq!(order(&["a", "b"], &["a3", "b2", "(ab)2"]), 6);
        assert_eq!(order(&["a", "b"], &["a4", "b2", "abab"]), 8);
        assert_eq!(order(&["a", "b"], &["a2", "b2", "ab=ba"]), 4);
        assert_eq!(order(&["a", "b", "c"], &["a3", "b3", "c2", "ab=ba", "aca=bcb=c"]), 18);
        assert_eq!(order(&["a", "b", "c"], &["a4", "b2", "c2", "ab=ba", "ac=ca3b", "bc=cb"]), 16);
        assert_eq!(order(&["a", "b"], &["a2", "b3", "(ab)5"]), 60);
    }

    #[test]
    fn inverse_letters_and_negative_powers() {
        assert_eq!(order(&["a", "b"], &["a4", "b2", "bab=A"]), 8);
        assert_eq!(order(&["a"], &["a-5"]), 5);
        assert_eq!(order(&["a"], &["a6", "a4"]), 2);
    }

    #[test]
    fn infinite_group_hits_bound() {
        let p = GroupPresentation::new(&["a", "b"], &["ab=ba"]);
        assert!(matches!(group_from_presentation(&p, 500), Err(Error::CosetBound(500))));
    }

    #[test]
    fn parse_errors() {
        let p = GroupPresentation::new(&["a"], &["b2"]);
        assert!(group_from_presentation(&p, 100).is_err());
        let p = GroupPresentation::new(&["a"], &["(a2"]);
        assert!(group_from_presentation(&p, 100).is_err());
        let p = GroupPresentation::new(&["ab"], &["ab"]);
        assert!(group_from_presentation(&p, 100).is_err());
    }
}

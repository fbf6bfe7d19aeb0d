//! The algebra `A_N = k<δ_0, …, δ_{N-1}> / (S_0, …, S_{2N-2})` with
//! `S_l = Σ_{i+j=l} (-1)^i δ_i δ_j`, presented as a quadratic rewriting system.
//!
//! Words are read as operators: `δ_{w[0]} δ_{w[1]} ⋯`, so the last letter acts
//! first. Leading terms are taken in degree-lexicographic order with
//! `δ_0 > δ_1 > ⋯ > δ_{N-1}`; every leading coefficient is `±1`, so normal
//! forms have integer coefficients and specialise to any field.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use crate::bidegree::Bidegree;
use crate::error::{Error, Result};
use crate::multicomplex::MAX_ARITY;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bidegree(&self) -> Bidegree {
        self.0.iter().fold(Bidegree::ZERO, |b, &i| b + Bidegree::of_diff(i as usize))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("d{i}")).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// `d3.d1.d0`, or `1` for the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        s.split('.')
            .map(|t| {
                t.strip_prefix('d')
                    .and_then(|n| n.parse::<u8>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad letter `{t}` in word `{s}`")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// Integer combination of words.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, i64>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn word(w: Word) -> Self {
        AlgebraElement::term(w, 1)
    }

    pub fn term(w: Word, c: i64) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(w, c);
        e
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let x = o.get().checked_add(c).expect("A_N coefficient overflow");
                if x == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = x;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, c: i64) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x.checked_mul(c).expect("A_N coefficient overflow"));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn coefficient(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// `left · self · right`.
    pub fn sandwich(&self, left: &Word, right: &Word) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, c) in &self.terms {
            out.add_term(left.concat(w).concat(right), *c);
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            let mag = c.unsigned_abs();
            if k > 0 {
                write!(f, " ")?;
            }
            if mag == 1 {
                write!(f, "{sign}{w}")?;
            } else {
                write!(f, "{sign}{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub leading: Word,
    pub replacement: AlgebraElement,
}

/// The relation `S_l` as an element.
pub fn relation(n: usize, l: usize) -> AlgebraElement {
    let mut e = AlgebraElement::zero();
    for i in l.saturating_sub(n - 1)..=l.min(n - 1) {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        e.add_term(Word(vec![i as u8, (l - i) as u8]), sign);
    }
    e
}

/// One rule per relation `S_l`, `0 <= l <= 2(N-1)`.
pub fn rules(n: usize) -> Vec<RewriteRule> {
    (0..=2 * (n - 1))
        .map(|l| {
            let s = relation(n, l);
            let lead_first = l.saturating_sub(n - 1);
            let leading = Word(vec![lead_first as u8, (l - lead_first) as u8]);
            let c = s.coefficient(&leading);
            debug_assert!(c == 1 || c == -1);
            let mut replacement = AlgebraElement::zero();
            for (w, x) in s.terms() {
                if *w != leading {
                    // lead = -(rest) / c, and c = ±1
                    replacement.add_term(w.clone(), -x * c);
                }
            }
            RewriteRule { leading, replacement }
        })
        .collect()
}

/// Which reducible factor to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Rewriting system for a fixed `N`, with memoized normal forms.
pub struct RewriteSystem {
    n: usize,
    table: HashMap<(u8, u8), AlgebraElement>,
    cache: RwLock<HashMap<Word, AlgebraElement>>,
}

impl RewriteSystem {
    pub fn new(n: usize) -> Self {
        assert!((2..=MAX_ARITY).contains(&n), "N = {n} unsupported");
        let table = rules(n).into_iter().map(|r| ((r.leading.0[0], r.leading.0[1]), r.replacement)).collect();
        RewriteSystem { n, table, cache: RwLock::new(HashMap::new()) }
    }

    /// Shared system for `N`.
    pub fn get(n: usize) -> &'static RewriteSystem {
        static SYSTEMS: OnceLock<Vec<OnceLock<RewriteSystem>>> = OnceLock::new();
        let slots = SYSTEMS.get_or_init(|| (0..=MAX_ARITY).map(|_| OnceLock::new()).collect());
        slots[n].get_or_init(|| RewriteSystem::new(n))
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_reducible_pair(&self, a: u8, b: u8) -> bool {
        self.table.contains_key(&(a, b))
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        w.0.windows(2).all(|p| !self.is_reducible_pair(p[0], p[1]))
    }

    fn reducible_at(&self, w: &Word, strategy: Strategy) -> Option<usize> {
        let mut positions = (0..w.len().saturating_sub(1)).filter(|&k| self.is_reducible_pair(w.0[k], w.0[k + 1]));
        match strategy {
            Strategy::Leftmost => positions.next(),
            Strategy::Rightmost => positions.last(),
        }
    }

    /// Applies the rule at position `k` once.
    pub fn rewrite_at(&self, w: &Word, k: usize) -> AlgebraElement {
        let repl = &self.table[&(w.0[k], w.0[k + 1])];
        let left = Word(w.0[..k].to_vec());
        let right = Word(w.0[k + 2..].to_vec());
        repl.sandwich(&left, &right)
    }

    pub fn normal_form_word(&self, w: &Word) -> AlgebraElement {
        for &i in &w.0 {
            assert!((i as usize) < self.n, "letter d{i} invalid for N = {}", self.n);
        }
        self.nf_cached(w)
    }

    fn nf_cached(&self, w: &Word) -> AlgebraElement {
        if let Some(e) = self.cache.read().expect("normal form cache").get(w) {
            return e.clone();
        }
        let out = match self.reducible_at(w, Strategy::Leftmost) {
            None => AlgebraElement::word(w.clone()),
            Some(k) => {
                let mut acc = AlgebraElement::zero();
                for (v, c) in self.rewrite_at(w, k).terms() {
                    acc.add_scaled(&self.nf_cached(v), c);
                }
                acc
            }
        };
        self.cache.write().expect("normal form cache").insert(w.clone(), out.clone());
        out
    }

    pub fn normal_form(&self, e: &AlgebraElement) -> AlgebraElement {
        let mut acc = AlgebraElement::zero();
        for (w, c) in e.terms() {
            acc.add_scaled(&self.normal_form_word(w), c);
        }
        acc
    }

    /// Exhaustive rewriting with a fixed strategy and no memoization.
    pub fn normal_form_with(&self, e: &AlgebraElement, strategy: Strategy) -> AlgebraElement {
        let mut acc = AlgebraElement::zero();
        let mut work: Vec<(Word, i64)> = e.terms().map(|(w, c)| (w.clone(), c)).collect();
        while let Some((w, c)) = work.pop() {
            match self.reducible_at(&w, strategy) {
                None => acc.add_term(w, c),
                Some(k) => {
                    for (v, x) in self.rewrite_at(&w, k).terms() {
                        work.push((v.clone(), x * c));
                    }
                }
            }
        }
        acc
    }

    /// `δ_i · e` in normal form.
    pub fn left_mul(&self, i: usize, e: &AlgebraElement) -> AlgebraElement {
        let mut acc = AlgebraElement::zero();
        let mut prefix = vec![i as u8];
        for (w, c) in e.terms() {
            prefix.truncate(1);
            prefix.extend_from_slice(&w.0);
            acc.add_scaled(&self.normal_form_word(&Word(prefix.clone())), c);
        }
        acc
    }
}

/// Free functions mirroring the system methods.
pub fn normal_form(n: usize, e: &AlgebraElement) -> AlgebraElement {
    RewriteSystem::get(n).normal_form(e)
}

/// Normal words of bidegree `(p, q)`: `δ_{N-1}^ε δ_{i_1}⋯δ_{i_m} δ_0^w` with
/// `ε, w ∈ {0,1}` and `0 < i_t < N-1`, sorted by index sequence.
pub fn basis(n: usize, at: Bidegree) -> Vec<Word> {
    let len = at.q - at.p;
    let sum = -at.p;
    let mut out = Vec::new();
    if len < 0 || sum < 0 {
        return out;
    }
    let top = (n - 1) as i64;
    for eps in 0..=1i64 {
        for w in 0..=1i64 {
            let m = len - eps - w;
            let mid_sum = sum - eps * top;
            if m < 0 || mid_sum < 0 {
                continue;
            }
            let mut mids = Vec::new();
            middle_sequences(n, m as usize, mid_sum, &mut Vec::new(), &mut mids);
            for mid in mids {
                let mut letters = Vec::with_capacity(len as usize);
                if eps == 1 {
                    letters.push(top as u8);
                }
                letters.extend(mid);
                if w == 1 {
                    letters.push(0);
                }
                out.push(Word(letters));
            }
        }
    }
    out.sort();
    out
}

fn middle_sequences(n: usize, m: usize, sum: i64, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if m == 0 {
        if sum == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let hi = (n as i64) - 2;
    if hi < 1 || sum < m as i64 || sum > m as i64 * hi {
        return;
    }
    for i in 1..=hi {
        prefix.push(i as u8);
        middle_sequences(n, m - 1, sum - i, prefix, out);
        prefix.pop();
    }
}

pub fn dim(n: usize, at: Bidegree) -> usize {
    basis(n, at).len()
}

/// An overlap or word whose reductions disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnresolvedOverlap {
    pub word: Word,
    pub left: AlgebraElement,
    pub right: AlgebraElement,
}

/// Checks every length-3 overlap of leading terms, then checks that leftmost
/// and rightmost rewriting agree on all words up to `max_len`.
pub fn confluence_check(n: usize, max_len: usize) -> Vec<UnresolvedOverlap> {
    let sys = RewriteSystem::get(n);
    let mut out = Vec::new();
    let letters = 0..n as u8;
    for a in letters.clone() {
        for b in letters.clone() {
            if !sys.is_reducible_pair(a, b) {
                continue;
            }
            for c in letters.clone() {
                if !sys.is_reducible_pair(b, c) {
                    continue;
                }
                let w = Word(vec![a, b, c]);
                let left = sys.normal_form_with(&sys.rewrite_at(&w, 0), Strategy::Leftmost);
                let right = sys.normal_form_with(&sys.rewrite_at(&w, 1), Strategy::Leftmost);
                if left != right {
                    out.push(UnresolvedOverlap { word: w, left, right });
                }
            }
        }
    }
    for len in 3..=max_len {
        for w in all_words(n, len) {
            if sys.is_normal(&w) {
                continue;
            }
            let e = AlgebraElement::word(w.clone());
            let left = sys.normal_form_with(&e, Strategy::Leftmost);
            let right = sys.normal_form_with(&e, Strategy::Rightmost);
            if left != right {
                out.push(UnresolvedOverlap { word: w, left, right });
            }
        }
    }
    out
}

/// All `n^len` words of a given length.
pub fn all_words(n: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n as u8).map(move |i| {
                    let mut v = w.0.clone();
                    v.push(i);
                    Word(v)
                })
            })
            .collect();
    }
    out
}

//! Homeomorphisms of n-ary Cantor space in table normal form.
//!
//! An element is a finite table of rows `(α, β, g)`: the domain prefixes α
//! form a complete antichain, the range prefixes β form a complete
//! antichain, and the row maps the cone `[α]` onto `[β]` by
//! `α‖x₁x₂… ↦ β‖(x₁·g)(x₂·g)…`, the tail permutation acting on every
//! suffix letter. Identity tails give exactly the Higman–Thompson group
//! V_n; tails from a subgroup G ≤ S_n give its supergroup V_n(G).
//!
//! The normal form is the unique coarsest table, rows sorted by domain:
//! whenever all n sibling rows `(α‖x, β‖(x·g), g)` are present they merge
//! into `(α, β, g)`. All constructors and algebraic operations return
//! canonical tables, so derived equality is equality of homeomorphisms.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{all_perms, Perm, PermGroup};
use crate::words::{antichain_containing, is_complete_antichain, EPPoint, Word};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub domain: Word,
    pub range: Word,
    pub tail: Perm,
}

impl Row {
    pub fn new(domain: Word, range: Word, tail: Perm) -> Row {
        Row { domain, range, tail }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} ; {}",
            if self.domain.is_empty() { "-".to_string() } else { self.domain.to_string() },
            if self.range.is_empty() { "-".to_string() } else { self.range.to_string() },
            self.tail
        )
    }
}

/// A table in normal form together with the group its tails live in.
#[derive(Clone)]
pub struct TableElement {
    degree: u8,
    rows: Vec<Row>,
    tail_group: PermGroup,
}

impl PartialEq for TableElement {
    /// Table equality; on canonical tables this is equality of the
    /// underlying homeomorphisms. The tail-group marker does not take part.
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.rows == other.rows
    }
}

impl Eq for TableElement {}

impl TableElement {
    pub fn identity(degree: u8) -> TableElement {
        TableElement {
            degree,
            rows: vec![Row::new(Word::empty(), Word::empty(), Perm::identity(degree))],
            tail_group: PermGroup::trivial(degree),
        }
    }

    /// Builds and canonicalizes a table, validating both antichains, the
    /// degree of every letter, and membership of every tail in `tail_group`.
    pub fn from_rows(degree: u8, rows: Vec<Row>, tail_group: PermGroup) -> Result<TableElement> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        if tail_group.degree() != degree {
            return Err(Error::DegreeMismatch(degree, tail_group.degree()));
        }
        for row in &rows {
            row.domain.validate_degree(degree)?;
            row.range.validate_degree(degree)?;
            if row.tail.degree() != degree {
                return Err(Error::DegreeMismatch(degree, row.tail.degree()));
            }
            if !tail_group.contains(&row.tail) {
                return Err(Error::TailOutsideGroup(row.tail.to_string()));
            }
        }
        let domains: Vec<Word> = rows.iter().map(|r| r.domain.clone()).collect();
        if !is_complete_antichain(&domains, degree) {
            return Err(Error::BadAntichain(format!("domains {domains:?}")));
        }
        let ranges: Vec<Word> = rows.iter().map(|r| r.range.clone()).collect();
        if !is_complete_antichain(&ranges, degree) {
            return Err(Error::BadAntichain(format!("ranges {ranges:?}")));
        }
        let mut e = TableElement { degree, rows, tail_group };
        e.canonicalize_in_place();
        Ok(e)
    }

    /// The transposition of two disjoint cones `[w1] ↔ [w2]` (identity
    /// tails, identity elsewhere). Requires the words to be incomparable
    /// and the two cones to miss part of the space.
    pub fn small_swap(degree: u8, w1: &Word, w2: &Word) -> Result<TableElement> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        w1.validate_degree(degree)?;
        w2.validate_degree(degree)?;
        if w1.comparable(w2) {
            return Err(Error::ComparableWords(format!("{w1:?}"), format!("{w2:?}")));
        }
        if degree == 2 && w1.len() == 1 && w2.len() == 1 {
            return Err(Error::SwapNotSmall(w1.to_string(), w2.to_string()));
        }
        let id = Perm::identity(degree);
        let mut rows = vec![
            Row::new(w1.clone(), w2.clone(), id.clone()),
            Row::new(w2.clone(), w1.clone(), id.clone()),
        ];
        for w in antichain_containing(&[w1.clone(), w2.clone()], degree) {
            if &w != w1 && &w != w2 {
                rows.push(Row::new(w.clone(), w, id.clone()));
            }
        }
        TableElement::from_rows(degree, rows, PermGroup::trivial(degree))
    }

    /// `⌊α⌋_h`: permutes the child cones of `[α]` by `h` and fixes
    /// everything else; suffixes are untouched. Always lies in plain V_n.
    pub fn depth_one_perm(degree: u8, alpha: &Word, h: &Perm) -> Result<TableElement> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        alpha.validate_degree(degree)?;
        if h.degree() != degree {
            return Err(Error::DegreeMismatch(degree, h.degree()));
        }
        let id = Perm::identity(degree);
        let mut rows = Vec::new();
        for x in 0..degree {
            rows.push(Row::new(alpha.appended(x), alpha.appended(h.apply(x)), id.clone()));
        }
        for w in antichain_containing(&[alpha.clone()], degree) {
            if &w != alpha {
                rows.push(Row::new(w.clone(), w, id.clone()));
            }
        }
        TableElement::from_rows(degree, rows, PermGroup::trivial(degree))
    }

    /// `[α]_g`: applies `g` to every letter below `[α]` and fixes the rest.
    /// The tail group is recorded as ⟨g⟩.
    pub fn iterated_perm(degree: u8, alpha: &Word, g: &Perm) -> Result<TableElement> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        alpha.validate_degree(degree)?;
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
        let id = Perm::identity(degree);
        let mut rows = vec![Row::new(alpha.clone(), alpha.clone(), g.clone())];
        for w in antichain_containing(&[alpha.clone()], degree) {
            if &w != alpha {
                rows.push(Row::new(w.clone(), w, id.clone()));
            }
        }
        let tails = PermGroup::closure(degree, &[g.clone()])?;
        TableElement::from_rows(degree, rows, tails)
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn tail_group(&self) -> &PermGroup {
        &self.tail_group
    }

    /// Re-tags the element with a (usually larger) tail group.
    pub fn with_tail_group(&self, group: &PermGroup) -> Result<TableElement> {
        if group.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, group.degree()));
        }
        for row in &self.rows {
            if !group.contains(&row.tail) {
                return Err(Error::TailOutsideGroup(row.tail.to_string()));
            }
        }
        let mut e = self.clone();
        e.tail_group = group.clone();
        Ok(e)
    }

    pub fn is_in_plain_vn(&self) -> bool {
        self.rows.iter().all(|r| r.tail.is_identity())
    }

    /// Splits row `i` into its n child rows `(α‖x, β‖(x·g), g)`. The result
    /// represents the same homeomorphism but is deliberately left
    /// non-canonical; `canonicalize` undoes the expansion.
    pub fn expand_row(&self, i: usize) -> TableElement {
        let row = &self.rows[i];
        let mut rows = self.rows.clone();
        rows.remove(i);
        for x in 0..self.degree {
            rows.push(Row::new(
                row.domain.appended(x),
                row.range.appended(row.tail.apply(x)),
                row.tail.clone(),
            ));
        }
        rows.sort();
        TableElement {
            degree: self.degree,
            rows,
            tail_group: self.tail_group.clone(),
        }
    }

    /// The normal form: merges complete sibling families until none remain,
    /// then sorts rows by domain.
    pub fn canonicalize(&self) -> TableElement {
        let mut e = self.clone();
        e.canonicalize_in_place();
        e
    }

    fn canonicalize_in_place(&mut self) {
        let n = self.degree;
        'outer: loop {
            self.rows.sort();
            for start in 0..self.rows.len() {
                let first = &self.rows[start];
                if first.domain.is_empty() || first.domain.last() != Some(0) {
                    continue;
                }
                if start + (n as usize) > self.rows.len() {
                    continue;
                }
                let parent = Word::from_letters(
                    first.domain.letters()[..first.domain.len() - 1].to_vec(),
                );
                let g = &first.tail;
                let family = &self.rows[start..start + n as usize];
                // all n siblings in domain order, same tail, ranges piling
                // onto a common β as β‖(x·g)
                let mut beta: Option<Word> = None;
                let ok = family.iter().enumerate().all(|(k, row)| {
                    if row.domain != parent.appended(k as u8) || row.tail != *g {
                        return false;
                    }
                    if row.range.last() != Some(g.apply(k as u8)) {
                        return false;
                    }
                    let b = Word::from_letters(
                        row.range.letters()[..row.range.len() - 1].to_vec(),
                    );
                    match &beta {
                        None => {
                            beta = Some(b);
                            true
                        }
                        Some(prev) => *prev == b,
                    }
                });
                if ok {
                    let merged = Row::new(parent, beta.unwrap(), g.clone());
                    self.rows.splice(start..start + n as usize, [merged]);
                    continue 'outer;
                }
            }
            break;
        }
    }

    /// The image of a point: find the unique row whose domain prefixes the
    /// point, strip it, act letterwise, and prepend the range.
    pub fn apply(&self, p: &EPPoint) -> EPPoint {
        let row = self
            .rows
            .iter()
            .find(|r| p.has_prefix(&r.domain))
            .expect("domains form a complete antichain");
        p.shifted(row.domain.len())
            .permuted(&row.tail)
            .prepended(&row.range)
    }

    /// Left-to-right composition: `x·(self.compose(g)) = (x·self)·g`.
    pub fn compose(&self, other: &TableElement) -> Result<TableElement> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut rows = Vec::new();
        for r1 in &self.rows {
            let inv_tail = r1.tail.inverse();
            for r2 in &other.rows {
                if let Some(delta) = r1.range.strip_prefix(&r2.domain) {
                    // [r1.range] ⊆ [r2.domain]: image cone lands inside one row
                    rows.push(Row::new(
                        r1.domain.clone(),
                        r2.range.concat(&delta.permuted(&r2.tail)),
                        r1.tail.then(&r2.tail),
                    ));
                } else if let Some(eps) = r2.domain.strip_prefix(&r1.range) {
                    // [r2.domain] ⊊ [r1.range]: only part of the image cone
                    // is covered; pull the overlap back through r1
                    rows.push(Row::new(
                        r1.domain.concat(&eps.permuted(&inv_tail)),
                        r2.range.clone(),
                        r1.tail.then(&r2.tail),
                    ));
                }
            }
        }
        let tails = join_groups(&self.tail_group, &other.tail_group)?;
        TableElement::from_rows(self.degree, rows, tails)
    }

    pub fn invert(&self) -> TableElement {
        let rows = self
            .rows
            .iter()
            .map(|r| Row::new(r.range.clone(), r.domain.clone(), r.tail.inverse()))
            .collect();
        let mut e = TableElement {
            degree: self.degree,
            rows,
            tail_group: self.tail_group.clone(),
        };
        e.canonicalize_in_place();
        e
    }

    /// Parses the line format `α -> β ; (cycles)`, one row per line, with
    /// `-` or `∅` for the empty word; `#` starts a comment.
    pub fn parse(text: &str, degree: u8) -> Result<TableElement> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (dom, rest) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("row {line:?} lacks '->'")))?;
            let (ran, tail) = rest
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("row {line:?} lacks ';'")))?;
            rows.push(Row::new(
                Word::parse(dom)?,
                Word::parse(ran)?,
                Perm::parse(tail.trim(), degree)?,
            ));
        }
        if rows.is_empty() {
            return Err(Error::BadElement("no rows".into()));
        }
        let tails: Vec<Perm> = rows.iter().map(|r| r.tail.clone()).collect();
        let group = PermGroup::closure(degree, &tails)?;
        TableElement::from_rows(degree, rows, group)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ElementJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TableElement> {
        let dto: ElementJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse(format!("element json: {e}")))?;
        dto.try_into()
    }
}

impl fmt::Display for TableElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TableElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TableElement(n={}) [", self.degree)?;
        for (k, row) in self.rows.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{row}")?;
        }
        write!(f, "]")
    }
}

/// Smallest group containing both tails groups; fast paths when one side
/// already contains the other.
fn join_groups(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    if b.is_subgroup_of(a) {
        return Ok(a.clone());
    }
    if a.is_subgroup_of(b) {
        return Ok(b.clone());
    }
    let mut gens = a.generators();
    gens.extend(b.generators());
    PermGroup::closure(a.degree(), &gens)
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    n: u8,
    rows: Vec<RowJson>,
}

#[derive(Serialize, Deserialize)]
struct RowJson {
    a: String,
    b: String,
    g: String,
}

impl From<&TableElement> for ElementJson {
    fn from(e: &TableElement) -> Self {
        ElementJson {
            n: e.degree,
            rows: e
                .rows
                .iter()
                .map(|r| RowJson {
                    a: r.domain.to_string(),
                    b: r.range.to_string(),
                    g: r.tail.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ElementJson> for TableElement {
    type Error = Error;

    fn try_from(dto: ElementJson) -> Result<TableElement> {
        let mut rows = Vec::new();
        for r in &dto.rows {
            rows.push(Row::new(
                Word::parse(&r.a)?,
                Word::parse(&r.b)?,
                Perm::parse(&r.g, dto.n)?,
            ));
        }
        let tails: Vec<Perm> = rows.iter().map(|r| r.tail.clone()).collect();
        let group = PermGroup::closure(dto.n, &tails)?;
        TableElement::from_rows(dto.n, rows, group)
    }
}

/// A random product of at most `max_factors` generators: small swaps on
/// words of length ≤ 3, depth-one permutations, and iterated permutations
/// with tails drawn from `tails`. With the trivial tail group the result is
/// a plain V_n element.
pub fn random_element<R: Rng>(
    degree: u8,
    tails: &PermGroup,
    rng: &mut R,
) -> TableElement {
    assert_eq!(degree, tails.degree(), "degree mismatch");
    let factors = rng.gen_range(1..=8);
    let mut acc = TableElement::identity(degree);
    for _ in 0..factors {
        let f = random_generator(degree, tails, rng)
            .to_element(degree)
            .expect("generator construction");
        acc = acc.compose(&f).expect("same degree");
    }
    acc.with_tail_group(tails).expect("tails stay inside the group")
}

/// One of the three generator shapes, usable both as a table and through
/// the closed conjugation formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VnGenerator {
    SmallSwap(Word, Word),
    DepthOne(Word, Perm),
    Iterated(Word, Perm),
}

impl VnGenerator {
    pub fn to_element(&self, degree: u8) -> Result<TableElement> {
        match self {
            VnGenerator::SmallSwap(a, b) => TableElement::small_swap(degree, a, b),
            VnGenerator::DepthOne(a, h) => TableElement::depth_one_perm(degree, a, h),
            VnGenerator::Iterated(a, g) => TableElement::iterated_perm(degree, a, g),
        }
    }
}

fn random_word<R: Rng>(degree: u8, len: usize, rng: &mut R) -> Word {
    Word::from_letters((0..len).map(|_| rng.gen_range(0..degree)).collect())
}

pub fn random_generator<R: Rng>(degree: u8, tails: &PermGroup, rng: &mut R) -> VnGenerator {
    loop {
        match rng.gen_range(0..3u8) {
            0 => {
                let a = random_word(degree, rng.gen_range(1..=3), rng);
                let b = random_word(degree, rng.gen_range(1..=3), rng);
                if a.comparable(&b) || (degree == 2 && a.len() == 1 && b.len() == 1) {
                    continue;
                }
                return VnGenerator::SmallSwap(a, b);
            }
            1 => {
                let a = random_word(degree, rng.gen_range(0..=2), rng);
                let h = all_perms(degree)
                    .choose(rng)
                    .expect("S_n nonempty")
                    .clone();
                return VnGenerator::DepthOne(a, h);
            }
            _ => {
                if tails.is_trivial() {
                    continue;
                }
                let a = random_word(degree, rng.gen_range(0..=2), rng);
                let g = tails.elements().choose(rng).expect("nonempty").clone();
                return VnGenerator::Iterated(a, g);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn pt(s: &str) -> EPPoint {
        EPPoint::parse(s).unwrap()
    }

    #[test]
    fn small_swap_rows() {
        let e = TableElement::small_swap(2, &w("11"), &w("12")).unwrap();
        let printed: Vec<String> = e.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(printed, vec!["11 -> 12 ; ()", "12 -> 11 ; ()", "2 -> 2 ; ()"]);
        assert!(TableElement::small_swap(2, &w("1"), &w("11")).is_err());
        assert!(TableElement::small_swap(2, &w("1"), &w("2")).is_err());
        // three letters leave room at depth one
        assert!(TableElement::small_swap(3, &w("1"), &w("2")).is_ok());
    }

    #[test]
    fn depth_one_identity_collapses() {
        let e = TableElement::depth_one_perm(2, &w(""), &Perm::identity(2)).unwrap();
        assert_eq!(e, TableElement::identity(2));
        let f = TableElement::depth_one_perm(2, &w("1"), &Perm::parse("(1 2)", 2).unwrap())
            .unwrap();
        let printed: Vec<String> = f.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(printed, vec!["11 -> 12 ; ()", "12 -> 11 ; ()", "2 -> 2 ; ()"]);
    }

    #[test]
    fn iterated_perm_rows() {
        let g = Perm::parse("(1 2)", 2).unwrap();
        let e = TableElement::iterated_perm(2, &w("2"), &g).unwrap();
        let printed: Vec<String> = e.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(printed, vec!["1 -> 1 ; ()", "2 -> 2 ; (1 2)"]);
        let id = TableElement::iterated_perm(2, &w("2"), &Perm::identity(2)).unwrap();
        assert_eq!(id, TableElement::identity(2));
    }

    #[test]
    fn expansion_roundtrip() {
        let g = Perm::parse("(1 2)", 2).unwrap();
        let e = TableElement::iterated_perm(2, &w(""), &g).unwrap();
        let expanded = e.expand_row(0);
        let printed: Vec<String> = expanded.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(printed, vec!["1 -> 2 ; (1 2)", "2 -> 1 ; (1 2)"]);
        assert_eq!(expanded.canonicalize(), e);
        // expansion never changes the action
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let v = random_element(2, &PermGroup::parse("<(1 2)>", 2).unwrap(), &mut rng);
            let i = rng.gen_range(0..v.rows().len());
            let ve = v.expand_row(i);
            for _ in 0..4 {
                let p = random_point(2, &mut rng);
                assert_eq!(v.apply(&p), ve.apply(&p));
            }
        }
    }

    fn random_point<R: Rng>(degree: u8, rng: &mut R) -> EPPoint {
        let pre = random_word(degree, rng.gen_range(0..=4), rng);
        let per = random_word(degree, rng.gen_range(1..=4), rng);
        EPPoint::new(pre, per).unwrap()
    }

    #[test]
    fn apply_moves_points() {
        let e = TableElement::small_swap(2, &w("11"), &w("12")).unwrap();
        assert_eq!(e.apply(&pt("11(2)")), pt("12(2)"));
        assert_eq!(e.apply(&pt("12(2)")), pt("11(2)"));
        assert_eq!(e.apply(&pt("2(1)")), pt("2(1)"));
        let g = Perm::parse("(1 2)", 2).unwrap();
        let flip = TableElement::iterated_perm(2, &w(""), &g).unwrap();
        assert_eq!(flip.apply(&pt("12(1)")), pt("21(2)"));
        assert_eq!(flip.apply(&pt("(12)")), pt("(21)"));
    }

    #[test]
    fn compose_tracks_pointwise_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tails = PermGroup::parse("<(1 2 3)>", 3).unwrap();
        for _ in 0..50 {
            let a = random_element(3, &tails, &mut rng);
            let b = random_element(3, &tails, &mut rng);
            let ab = a.compose(&b).unwrap();
            for _ in 0..4 {
                let p = random_point(3, &mut rng);
                assert_eq!(ab.apply(&p), b.apply(&a.apply(&p)));
            }
            assert_eq!(ab.canonicalize(), ab, "compose returns normal form");
        }
    }

    #[test]
    fn inverse_cancels() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let tails = PermGroup::parse("<(1 2)>", 2).unwrap();
        for _ in 0..50 {
            let a = random_element(2, &tails, &mut rng);
            let inv = a.invert();
            assert_eq!(a.compose(&inv).unwrap(), TableElement::identity(2));
            assert_eq!(inv.compose(&a).unwrap(), TableElement::identity(2));
        }
    }

    #[test]
    fn tail_group_bookkeeping() {
        let g = Perm::parse("(1 2)", 2).unwrap();
        let e = TableElement::iterated_perm(2, &w("1"), &g).unwrap();
        assert_eq!(e.tail_group().order(), 2);
        assert!(!e.is_in_plain_vn());
        assert!(e.with_tail_group(&PermGroup::trivial(2)).is_err());
        let s = TableElement::small_swap(2, &w("11"), &w("2")).unwrap();
        assert!(s.is_in_plain_vn());
        let both = s.compose(&e).unwrap();
        assert_eq!(both.tail_group().order(), 2);
    }

    #[test]
    fn text_and_json_roundtrip() {
        let text = "11 -> 12 ; ()\n12 -> 11 ; ()\n2 -> 2 ; ()\n";
        let e = TableElement::parse(text, 2).unwrap();
        assert_eq!(e.to_string(), text);
        let commented = "# a swap\n11 -> 12 ; ()\n\n12 -> 11 ; ()\n2 -> 2 ; ()";
        assert_eq!(TableElement::parse(commented, 2).unwrap(), e);
        let json = e.to_json();
        assert_eq!(TableElement::from_json(&json).unwrap(), e);
        let g = Perm::parse("(1 2 3)", 3).unwrap();
        let f = TableElement::iterated_perm(3, &w("2"), &g).unwrap();
        let f2 = TableElement::from_json(&f.to_json()).unwrap();
        assert_eq!(f, f2);
        assert_eq!(f.tail_group(), f2.tail_group());
    }

    #[test]
    fn malformed_tables_rejected() {
        // domains incomplete
        assert!(TableElement::parse("1 -> 1 ; ()", 2).is_err());
        // overlapping domains
        assert!(TableElement::parse("1 -> 1 ; ()\n11 -> 2 ; ()\n2 -> 12 ; ()", 2).is_err());
        // ranges incomplete
        assert!(TableElement::parse("1 -> 11 ; ()\n2 -> 12 ; ()", 2).is_err());
        assert!(TableElement::parse("1 -> 3 ; ()\n2 -> 1 ; ()", 2).is_err());
    }

    #[test]
    fn canonical_form_is_reached_from_deep_expansions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tails = PermGroup::parse("<(1 2 3)>", 3).unwrap();
        for _ in 0..25 {
            let v = random_element(3, &tails, &mut rng);
            let mut expanded = v.clone();
            for _ in 0..3 {
                let i = rng.gen_range(0..expanded.rows().len());
                expanded = expanded.expand_row(i);
            }
            assert_eq!(expanded.canonicalize(), v);
        }
    }
}

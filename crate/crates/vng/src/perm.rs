//! Permutations of a finite alphabet, permutation groups, and orbit
//! transversals of semiregular groups.
//!
//! Letters are `0..degree` internally; the text formats ("(1 2)(3 4)",
//! "⟨(1 2 3)⟩" / "<(1 2 3)>") use the 1-based convention. Products compose
//! left to right throughout: `x · (g·h) = (x·g)·h`.

use std::fmt;

use crate::error::{Error, Result};

/// A letter of the alphabet, `0..degree`.
pub type Letter = u8;

/// Enumeration guard for operations that walk all of S_n (normalizers,
/// subgroup listings). Degrees above the cap fail loudly instead of hanging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget {
    pub max_degree: u8,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget { max_degree: 5 }
    }
}

impl EnumBudget {
    pub fn check(&self, degree: u8) -> Result<()> {
        if degree > self.max_degree {
            return Err(Error::BudgetExceeded {
                got: degree,
                max: self.max_degree,
            });
        }
        Ok(())
    }
}

/// A permutation of `{0, .., degree-1}`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: u8) -> Perm {
        Perm {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<u8>) -> Result<Perm> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(Error::BadPerm("degree too large".into()));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if (i as usize) >= n || seen[i as usize] {
                return Err(Error::BadPerm(format!("{images:?} is not a bijection")));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Product of the given cycles (0-based letters), applied left to right.
    pub fn from_cycles(degree: u8, cycles: &[Vec<u8>]) -> Result<Perm> {
        let mut p = Perm::identity(degree);
        for cyc in cycles {
            let mut images: Vec<u8> = (0..degree).collect();
            let mut seen = vec![false; degree as usize];
            for (k, &x) in cyc.iter().enumerate() {
                let y = cyc[(k + 1) % cyc.len()];
                if x >= degree || y >= degree {
                    return Err(Error::LetterOutOfRange { letter: x.max(y), degree });
                }
                if std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::BadPerm(format!("cycle {cyc:?} repeats a letter")));
                }
                images[x as usize] = y;
            }
            p = p.then(&Perm { images });
        }
        Ok(p)
    }

    pub fn degree(&self) -> u8 {
        self.images.len() as u8
    }

    /// The image `x·g`.
    pub fn apply(&self, x: Letter) -> Letter {
        self.images[x as usize]
    }

    /// Left-to-right product: `x·(self.then(g)) = (x·self)·g`.
    pub fn then(&self, g: &Perm) -> Perm {
        assert_eq!(self.degree(), g.degree(), "degree mismatch in product");
        Perm {
            images: self.images.iter().map(|&i| g.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u8; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u8;
        }
        Perm { images }
    }

    /// The conjugate `c⁻¹·self·c`.
    pub fn conjugated_by(&self, c: &Perm) -> Perm {
        c.inverse().then(self).then(c)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u8 == y)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = Letter> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x as u8 == y)
            .map(|(x, _)| x as u8)
    }

    pub fn moved_points(&self) -> impl Iterator<Item = Letter> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x as u8 != y)
            .map(|(x, _)| x as u8)
    }

    /// Nontrivial cycles, each rotated to start at its smallest letter and
    /// sorted by that letter.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cyc = vec![start as u8];
            seen[start] = true;
            let mut x = self.images[start];
            while x as usize != start {
                seen[x as usize] = true;
                cyc.push(x);
                x = self.images[x as usize];
            }
            out.push(cyc);
        }
        out
    }

    /// Parses disjoint-cycle notation with 1-based letters: "(1 2)(3 4)",
    /// identity "()". Overlapping cycles are accepted and multiplied out
    /// left to right.
    pub fn parse(s: &str, degree: u8) -> Result<Perm> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::BadPerm("empty permutation string".into()));
        }
        let mut cycles: Vec<Vec<u8>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let Some(stripped) = rest.strip_prefix('(') else {
                return Err(Error::BadPerm(format!("expected '(' in {s:?}")));
            };
            let Some(close) = stripped.find(')') else {
                return Err(Error::BadPerm(format!("unbalanced parentheses in {s:?}")));
            };
            let body = &stripped[..close];
            rest = stripped[close + 1..].trim_start();
            let mut cyc = Vec::new();
            for tok in body.split_whitespace() {
                let v: u8 = tok
                    .parse()
                    .map_err(|_| Error::BadPerm(format!("bad letter {tok:?} in {s:?}")))?;
                if v == 0 || v > degree {
                    return Err(Error::LetterOutOfRange { letter: v, degree });
                }
                cyc.push(v - 1);
            }
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
        }
        Perm::from_cycles(degree, &cycles)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (k, x) in cyc.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `degree!` permutations, in lexicographic image order.
pub fn all_perms(degree: u8) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut images: Vec<u8> = (0..degree).collect();
    loop {
        out.push(Perm { images: images.clone() });
        // next lexicographic permutation
        let n = images.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).unwrap();
        images.swap(i, j);
        images[i + 1..].reverse();
    }
    out
}

/// A finite permutation group, stored as its full, sorted element list.
///
/// Degrees are tiny throughout (the enumeration budget defaults to 5), so
/// exhaustive listings beat stabilizer chains here.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PermGroup {
    degree: u8,
    elements: Vec<Perm>, // sorted, unique, contains the identity
}

impl PermGroup {
    pub fn trivial(degree: u8) -> PermGroup {
        PermGroup {
            degree,
            elements: vec![Perm::identity(degree)],
        }
    }

    pub fn symmetric(degree: u8) -> PermGroup {
        let mut elements = all_perms(degree);
        elements.sort();
        PermGroup { degree, elements }
    }

    /// Closure of the generating set under products and inverses.
    pub fn closure(degree: u8, gens: &[Perm]) -> Result<PermGroup> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut elements = vec![Perm::identity(degree)];
        let mut queue: Vec<Perm> = gens.to_vec();
        while let Some(g) = queue.pop() {
            if elements.binary_search(&g).is_ok() {
                continue;
            }
            let idx = elements.binary_search(&g).unwrap_err();
            elements.insert(idx, g.clone());
            let snapshot: Vec<Perm> = elements.clone();
            for e in &snapshot {
                queue.push(e.then(&g));
                queue.push(g.then(e));
            }
        }
        Ok(PermGroup { degree, elements })
    }

    fn from_sorted(degree: u8, elements: Vec<Perm>) -> PermGroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        PermGroup { degree, elements }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|g| other.contains(g))
    }

    /// True when only the identity fixes a letter (the action is free).
    pub fn is_semiregular(&self) -> bool {
        self.elements
            .iter()
            .all(|g| g.is_identity() || g.fixed_points().next().is_none())
    }

    /// Orbits on the alphabet, each sorted, ordered by smallest letter.
    pub fn orbits(&self) -> Vec<Vec<Letter>> {
        let n = self.degree as usize;
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for x in 0..n as u8 {
            if seen[x as usize] {
                continue;
            }
            let mut orbit: Vec<Letter> =
                self.elements.iter().map(|g| g.apply(x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y as usize] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// True when `c⁻¹·self·c = self` as a set.
    pub fn is_normalized_by(&self, c: &Perm) -> bool {
        self.elements
            .iter()
            .all(|g| self.contains(&g.conjugated_by(c)))
    }

    /// True when `reps·c = reps` as a set.
    pub fn stabilizes_set(reps: &[Letter], c: &Perm) -> bool {
        let mut image: Vec<Letter> = reps.iter().map(|&x| c.apply(x)).collect();
        image.sort_unstable();
        let mut sorted = reps.to_vec();
        sorted.sort_unstable();
        image == sorted
    }

    /// `N_{S_n}(self)`, by scanning all of S_n.
    pub fn normalizer(&self, budget: &EnumBudget) -> Result<PermGroup> {
        budget.check(self.degree)?;
        let elements = all_perms(self.degree)
            .into_iter()
            .filter(|c| self.is_normalized_by(c))
            .collect::<Vec<_>>();
        let mut elements = elements;
        elements.sort();
        Ok(PermGroup::from_sorted(self.degree, elements))
    }

    /// Setwise stabilizer of `set` in S_degree.
    pub fn setwise_stabilizer(degree: u8, set: &[Letter]) -> PermGroup {
        let mut elements: Vec<Perm> = all_perms(degree)
            .into_iter()
            .filter(|c| PermGroup::stabilizes_set(set, c))
            .collect();
        elements.sort();
        PermGroup::from_sorted(degree, elements)
    }

    /// Intersection of two groups of equal degree.
    pub fn intersect(&self, other: &PermGroup) -> PermGroup {
        assert_eq!(self.degree, other.degree, "degree mismatch in intersection");
        let elements: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| other.contains(g))
            .cloned()
            .collect();
        PermGroup::from_sorted(self.degree, elements)
    }

    /// The set `{h·g}`. Closure failure is a value, not an error: the witness
    /// is a product that escapes the set.
    pub fn product_set(h: &PermGroup, g: &PermGroup) -> std::result::Result<PermGroup, ProductFailure> {
        assert_eq!(h.degree, g.degree, "degree mismatch in product set");
        let mut elements: Vec<Perm> = Vec::with_capacity(h.order() * g.order());
        for a in &h.elements {
            for b in &g.elements {
                elements.push(a.then(b));
            }
        }
        elements.sort();
        elements.dedup();
        let set = PermGroup::from_sorted(h.degree, elements);
        for a in &set.elements {
            for b in &set.elements {
                let p = a.then(b);
                if !set.contains(&p) {
                    return Err(ProductFailure {
                        left: a.clone(),
                        right: b.clone(),
                        product: p,
                    });
                }
            }
        }
        Ok(set)
    }

    /// A small, deterministic generating set (greedy).
    pub fn generators(&self) -> Vec<Perm> {
        let mut gens: Vec<Perm> = Vec::new();
        let mut span = PermGroup::trivial(self.degree);
        for g in &self.elements {
            if !span.contains(g) {
                gens.push(g.clone());
                let mut all = gens.clone();
                all.extend(span.elements.iter().cloned());
                span = PermGroup::closure(self.degree, &all).expect("closure of subgroup");
            }
        }
        gens
    }

    /// Every subgroup of S_degree, found by saturating single-element
    /// extensions starting from the cyclic subgroups.
    pub fn subgroups(degree: u8, budget: &EnumBudget) -> Result<Vec<PermGroup>> {
        budget.check(degree)?;
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        let sn = all_perms(degree);
        let mut found: Vec<PermGroup> = vec![PermGroup::trivial(degree)];
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for sub in &frontier {
                for g in &sn {
                    if sub.contains(g) {
                        continue;
                    }
                    let mut gens = sub.generators();
                    gens.push(g.clone());
                    let bigger = PermGroup::closure(degree, &gens)?;
                    if !found.contains(&bigger) && !next.contains(&bigger) {
                        next.push(bigger);
                    }
                }
            }
            found.extend(next.iter().cloned());
            frontier = next;
        }
        found.sort_by(|a, b| {
            (a.order(), &a.elements).cmp(&(b.order(), &b.elements))
        });
        Ok(found)
    }

    /// Conjugacy-class representatives of the subgroups of S_degree, in the
    /// deterministic order of `subgroups`.
    pub fn subgroups_up_to_conjugacy(degree: u8, budget: &EnumBudget) -> Result<Vec<PermGroup>> {
        let all = PermGroup::subgroups(degree, budget)?;
        let mut reps: Vec<PermGroup> = Vec::new();
        for sub in all {
            if !reps.iter().any(|r| are_conjugate(r, &sub).is_some()) {
                reps.push(sub);
            }
        }
        Ok(reps)
    }

    /// Parses "⟨(1 2),(3 4)⟩" or "<(1 2),(3 4)>"; generators are separated
    /// by commas, and "<()>" (or "<>") is the trivial group.
    pub fn parse(s: &str, degree: u8) -> Result<PermGroup> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        let s = s.trim();
        let body = s
            .strip_prefix('⟨')
            .and_then(|t| t.strip_suffix('⟩'))
            .or_else(|| s.strip_prefix('<').and_then(|t| t.strip_suffix('>')))
            .ok_or_else(|| Error::Parse(format!("group {s:?} must be ⟨...⟩ or <...>")))?;
        let body = body.trim();
        let mut gens = Vec::new();
        if !body.is_empty() {
            for tok in body.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                gens.push(Perm::parse(tok, degree)?);
            }
        }
        PermGroup::closure(degree, &gens)
    }
}

impl fmt::Display for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.generators();
        write!(f, "<")?;
        if gens.is_empty() {
            write!(f, "()")?;
        } else {
            for (k, g) in gens.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{g}")?;
            }
        }
        write!(f, ">")
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Witness that a product set `HG` fails to be a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFailure {
    pub left: Perm,
    pub right: Perm,
    pub product: Perm,
}

impl fmt::Display for ProductFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "product set not closed: {}·{} = {} escapes the set",
            self.left, self.right, self.product
        )
    }
}

/// A conjugating element `c` with `c⁻¹·g·c = h`, if the subgroups are
/// conjugate in S_n. Scans S_n with cheap pre-checks.
pub fn are_conjugate(g: &PermGroup, h: &PermGroup) -> Option<Perm> {
    if g.degree() != h.degree() || g.order() != h.order() {
        return None;
    }
    let signature = |grp: &PermGroup| {
        let mut sig: Vec<Vec<usize>> = grp
            .elements()
            .iter()
            .map(|e| {
                let mut lens: Vec<usize> = e.cycles().iter().map(|c| c.len()).collect();
                lens.sort_unstable();
                lens
            })
            .collect();
        sig.sort();
        sig
    };
    if signature(g) != signature(h) {
        return None;
    }
    all_perms(g.degree())
        .into_iter()
        .find(|c| g.elements().iter().all(|e| h.contains(&e.conjugated_by(c))))
}

/// An orbit transversal of a semiregular group: one letter per orbit.
///
/// Semiregularity makes the defining map of the transversal well defined:
/// for each letter `x` there is exactly one `h` in the group with `x·h`
/// in the transversal.
#[derive(Clone, PartialEq, Eq)]
pub struct Transversal {
    group: PermGroup,
    reps: Vec<Letter>,   // sorted
    h_table: Vec<Perm>,  // h_table[x] = the unique h with x·h ∈ reps
}

impl Transversal {
    pub fn new(group: &PermGroup, mut reps: Vec<Letter>) -> Result<Transversal> {
        if !group.is_semiregular() {
            let bad = group
                .elements()
                .iter()
                .find(|g| !g.is_identity() && g.fixed_points().next().is_some())
                .unwrap();
            return Err(Error::NotSemiregular(bad.to_string()));
        }
        reps.sort_unstable();
        reps.dedup();
        let orbits = group.orbits();
        if reps.len() != orbits.len() {
            return Err(Error::BadTransversal(format!(
                "{} representatives for {} orbits",
                reps.len(),
                orbits.len()
            )));
        }
        for orbit in &orbits {
            let count = reps.iter().filter(|r| orbit.contains(r)).count();
            if count != 1 {
                return Err(Error::BadTransversal(format!(
                    "orbit {orbit:?} holds {count} representatives"
                )));
            }
        }
        let mut h_table = Vec::with_capacity(group.degree() as usize);
        for x in 0..group.degree() {
            let mut hits = group
                .elements()
                .iter()
                .filter(|h| reps.binary_search(&h.apply(x)).is_ok());
            let h = hits.next().expect("transversal meets every orbit");
            debug_assert!(hits.next().is_none(), "semiregularity gives uniqueness");
            h_table.push(h.clone());
        }
        Ok(Transversal {
            group: group.clone(),
            reps,
            h_table,
        })
    }

    /// The transversal picking the smallest letter of each orbit.
    pub fn canonical(group: &PermGroup) -> Result<Transversal> {
        let reps = group.orbits().iter().map(|o| o[0]).collect();
        Transversal::new(group, reps)
    }

    /// Every transversal of the group (cartesian product of the orbits).
    pub fn all(group: &PermGroup) -> Result<Vec<Transversal>> {
        let orbits = group.orbits();
        let mut choices: Vec<Vec<Letter>> = vec![Vec::new()];
        for orbit in &orbits {
            let mut next = Vec::new();
            for prefix in &choices {
                for &x in orbit {
                    let mut c = prefix.clone();
                    c.push(x);
                    next.push(c);
                }
            }
            choices = next;
        }
        choices
            .into_iter()
            .map(|reps| Transversal::new(group, reps))
            .collect()
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn degree(&self) -> u8 {
        self.group.degree()
    }

    pub fn reps(&self) -> &[Letter] {
        &self.reps
    }

    /// The unique group element taking `x` into the transversal.
    pub fn h_map(&self, x: Letter) -> &Perm {
        &self.h_table[x as usize]
    }
}

impl fmt::Display for Transversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, r) in self.reps.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", r + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Transversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

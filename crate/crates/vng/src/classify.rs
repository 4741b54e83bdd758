//! Which V_n(G) are isomorphic? The certified small-degree answer.
//!
//! Two mechanisms are implemented, and only these:
//!
//! * a merge certificate (H, R, G) — semiregular H, transversal R, and
//!   G inside N(H) ∩ Stab(R) — proving V_n(HG) ≅ V_n(G) by conjugation
//!   with the orbit machine;
//! * the semiregularity obstruction, proving V_n(G) ≇ V_n whenever some
//!   non-identity element of G fixes a letter.
//!
//! The report takes subgroup conjugacy classes of S_n, connects them by
//! every certificate the exhaustive (H, R, G) search finds, and labels the
//! leftover pairs honestly: "proved non-isomorphic" when the obstruction
//! applies, "unresolved" otherwise. No isomorphism or non-isomorphism is
//! ever asserted without one of the two mechanisms backing it.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::par;
use crate::perm::{are_conjugate, EnumBudget, Letter, PermGroup, Transversal};

#[derive(Debug, Clone)]
pub struct MergeCertificate {
    pub h: PermGroup,
    /// Transversal representatives, 0-based letters.
    pub reps: Vec<Letter>,
    pub g: PermGroup,
}

impl std::fmt::Display for MergeCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "H={}, R={{", self.h)?;
        for (k, r) in self.reps.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", r + 1)?;
        }
        write!(f, "}}, G={}", self.g)
    }
}

/// One certified isomorphism V_n(product) ≅ V_n(factor), endpoints given
/// as indices into the report's subgroup-class list.
#[derive(Debug, Clone)]
pub struct MergeEdge {
    pub product_class: usize,
    pub factor_class: usize,
    pub certificate: MergeCertificate,
}

#[derive(Debug, Clone)]
pub struct MergeClass {
    /// Subgroup-class indices, ascending.
    pub members: Vec<usize>,
    pub edges: Vec<MergeEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairReason {
    /// One side is the class of V_n itself, the other contains a
    /// non-semiregular group: proved non-isomorphic.
    SemiregularityObstruction,
    /// Neither mechanism applies; the tool takes no position.
    NotDistinguished,
}

/// Status of a pair of distinct merge classes.
#[derive(Debug, Clone, Copy)]
pub struct PairStatus {
    pub a: usize,
    pub b: usize,
    pub reason: PairReason,
}

#[derive(Debug, Clone)]
pub struct ClassReport {
    pub degree: u8,
    /// Conjugacy-class representatives of all subgroups, canonical order.
    pub reps: Vec<PermGroup>,
    pub semiregular: Vec<bool>,
    /// Partition of 0..reps.len(), ordered by smallest member.
    pub classes: Vec<MergeClass>,
    pub pairs: Vec<PairStatus>,
}

/// Runs the whole pipeline at degree n.
pub fn classify(n: u8, budget: &EnumBudget) -> Result<ClassReport> {
    let reps = PermGroup::subgroups_up_to_conjugacy(n, budget)?;
    let semiregular: Vec<bool> = reps.iter().map(PermGroup::is_semiregular).collect();
    let class_of = |g: &PermGroup| {
        reps.iter()
            .position(|r| are_conjugate(g, r).is_some())
            .expect("class list covers every subgroup")
    };

    // Search space: every transversal of every semiregular class rep —
    // conjugating a certificate moves H to its class rep while permuting
    // the transversals and the admissible G, so nothing is lost here.
    let all = PermGroup::subgroups(n, budget)?;
    let mut configs: Vec<Transversal> = Vec::new();
    for (hi, h) in reps.iter().enumerate() {
        if semiregular[hi] && !h.is_trivial() {
            configs.extend(Transversal::all(h)?);
        }
    }
    let found: Vec<Vec<(PermGroup, PermGroup, Transversal)>> =
        par::map_collect(&configs, |t| {
            let h = t.group();
            let mut local = Vec::new();
            for g in &all {
                let admissible = g.elements().iter().all(|c| {
                    h.is_normalized_by(c) && PermGroup::stabilizes_set(t.reps(), c)
                });
                if admissible {
                    let hg = PermGroup::product_set(h, g)
                        .expect("HG closes when G normalizes H");
                    local.push((hg, g.clone(), t.clone()));
                }
            }
            local
        });

    // first certificate per unordered class pair wins; order is
    // deterministic because the config list is
    let mut edges: BTreeMap<(usize, usize), MergeEdge> = BTreeMap::new();
    for (hg, g, t) in found.into_iter().flatten() {
        let (pc, fc) = (class_of(&hg), class_of(&g));
        if pc == fc {
            continue;
        }
        let key = (pc.min(fc), pc.max(fc));
        edges.entry(key).or_insert_with(|| MergeEdge {
            product_class: pc,
            factor_class: fc,
            certificate: MergeCertificate {
                h: t.group().clone(),
                reps: t.reps().to_vec(),
                g,
            },
        });
    }

    // connected components over the certified edges
    let mut parent: Vec<usize> = (0..reps.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for &(a, b) in edges.keys() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut grouped: BTreeMap<usize, MergeClass> = BTreeMap::new();
    for i in 0..reps.len() {
        let root = find(&mut parent, i);
        grouped
            .entry(root)
            .or_insert_with(|| MergeClass { members: Vec::new(), edges: Vec::new() })
            .members
            .push(i);
    }
    for edge in edges.into_values() {
        let root = find(&mut parent, edge.product_class);
        grouped.get_mut(&root).expect("component exists").edges.push(edge);
    }
    let classes: Vec<MergeClass> = grouped.into_values().collect();

    let trivial_class = classes
        .iter()
        .position(|c| c.members.iter().any(|&i| reps[i].is_trivial()))
        .expect("the trivial subgroup is always present");
    let mut pairs = Vec::new();
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            let reason = if a == trivial_class || b == trivial_class {
                PairReason::SemiregularityObstruction
            } else {
                PairReason::NotDistinguished
            };
            pairs.push(PairStatus { a, b, reason });
        }
    }

    Ok(ClassReport { degree: n, reps, semiregular, classes, pairs })
}

/// Re-verifies a merge certificate from scratch against two target groups.
pub fn certificate_check(
    cert: &MergeCertificate,
    product_target: &PermGroup,
    factor_target: &PermGroup,
) -> bool {
    if !cert.h.is_semiregular() || cert.g.degree() != cert.h.degree() {
        return false;
    }
    let Ok(t) = Transversal::new(&cert.h, cert.reps.clone()) else {
        return false;
    };
    let admissible = cert.g.elements().iter().all(|c| {
        cert.h.is_normalized_by(c) && PermGroup::stabilizes_set(t.reps(), c)
    });
    if !admissible {
        return false;
    }
    let Ok(hg) = PermGroup::product_set(&cert.h, &cert.g) else {
        return false;
    };
    are_conjugate(&hg, product_target).is_some()
        && are_conjugate(&cert.g, factor_target).is_some()
}

impl ClassReport {
    /// Merge-class index of an arbitrary subgroup of S_n.
    pub fn class_of(&self, group: &PermGroup) -> Option<usize> {
        let rep = self
            .reps
            .iter()
            .position(|r| are_conjugate(group, r).is_some())?;
        self.classes.iter().position(|c| c.members.contains(&rep))
    }

    /// Compares against an expected partition given as lists of generator
    /// strings. Order of classes and of members is irrelevant; the
    /// expected partition must cover every subgroup class.
    pub fn matches_expected(&self, expected: &[Vec<String>]) -> Result<bool> {
        use std::collections::BTreeSet;
        let mut want: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for class in expected {
            let mut set = BTreeSet::new();
            for spec in class {
                let g = PermGroup::parse(spec, self.degree)?;
                match self.reps.iter().position(|r| are_conjugate(&g, r).is_some()) {
                    Some(i) => set.insert(i),
                    None => return Ok(false),
                };
            }
            want.insert(set);
        }
        let got: BTreeSet<BTreeSet<usize>> = self
            .classes
            .iter()
            .map(|c| c.members.iter().copied().collect())
            .collect();
        Ok(want == got)
    }

    /// A caveat worth repeating at the degrees where it bites: merge
    /// classes do not transfer between degrees.
    pub fn footnote(&self) -> Option<String> {
        (self.degree == 3 || self.degree == 4).then(|| {
            "isomorphism classes depend on the degree: <(1 2 3)> shares a class \
             with the trivial group at degree 3, but at degree 4 it fixes a letter, \
             is no longer semiregular, and lands in a different class"
                .into()
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.degree,
            "subgroups": self.reps.iter().enumerate().map(|(i, r)| {
                serde_json::json!({
                    "group": r.to_string(),
                    "order": r.order(),
                    "semiregular": self.semiregular[i],
                    "class": self.classes.iter().position(|c| c.members.contains(&i)),
                })
            }).collect::<Vec<_>>(),
            "classes": self.classes.iter().map(|c| {
                serde_json::json!({
                    "members": c.members.iter().map(|&i| self.reps[i].to_string()).collect::<Vec<_>>(),
                    "edges": c.edges.iter().map(|e| {
                        serde_json::json!({
                            "product": self.reps[e.product_class].to_string(),
                            "factor": self.reps[e.factor_class].to_string(),
                            "H": e.certificate.h.to_string(),
                            "R": e.certificate.reps.iter().map(|r| r + 1).collect::<Vec<_>>(),
                            "G": e.certificate.g.to_string(),
                        })
                    }).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
            "pairs": self.pairs.iter().map(|p| {
                serde_json::json!({
                    "a": p.a,
                    "b": p.b,
                    "status": match p.reason {
                        PairReason::SemiregularityObstruction => "semiregularity-obstruction",
                        PairReason::NotDistinguished => "not-distinguished",
                    },
                })
            }).collect::<Vec<_>>(),
            "footnote": self.footnote(),
        })
    }
}

impl std::fmt::Display for ClassReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "degree {}: {} subgroup classes up to conjugacy, {} certified isomorphism classes",
            self.degree,
            self.reps.len(),
            self.classes.len()
        )?;
        for (ci, class) in self.classes.iter().enumerate() {
            write!(f, "\nclass {}:", ci + 1)?;
            for &i in &class.members {
                write!(
                    f,
                    " {}{}",
                    self.reps[i],
                    if self.semiregular[i] { "*" } else { "" }
                )?;
            }
            writeln!(f)?;
            for e in &class.edges {
                writeln!(
                    f,
                    "  V({}) = V({})  [{}]",
                    self.reps[e.product_class], self.reps[e.factor_class], e.certificate
                )?;
            }
        }
        writeln!(f, "\npairs of classes:")?;
        for p in &self.pairs {
            writeln!(
                f,
                "  {} vs {}: {}",
                p.a + 1,
                p.b + 1,
                match p.reason {
                    PairReason::SemiregularityObstruction =>
                        "proved non-isomorphic (semiregularity obstruction)",
                    PairReason::NotDistinguished => "unresolved",
                }
            )?;
        }
        if let Some(note) = self.footnote() {
            writeln!(f, "\nnote: {note}")?;
        }
        writeln!(f, "(*) semiregular")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn binary_degree_collapses_to_one_class() {
        let report = classify(2, &EnumBudget::default()).unwrap();
        assert_eq!(report.classes.len(), 1);
        assert!(report.matches_expected(&[strings(&["<()>", "<(1 2)>"])]).unwrap());
        assert!(report.pairs.is_empty());
    }

    #[test]
    fn ternary_degree_splits_in_two() {
        let report = classify(3, &EnumBudget::default()).unwrap();
        assert_eq!(report.classes.len(), 2);
        assert!(report
            .matches_expected(&[
                strings(&["<()>", "<(1 2 3)>"]),
                strings(&["<(1 2)>", "<(1 2),(1 2 3)>"]),
            ])
            .unwrap());
        // the only pair is settled by the obstruction
        assert_eq!(report.pairs.len(), 1);
        assert_eq!(report.pairs[0].reason, PairReason::SemiregularityObstruction);
        assert!(report.footnote().is_some());
    }

    #[test]
    fn quaternary_degree_certifies_five_classes() {
        let report = classify(4, &EnumBudget::default()).unwrap();
        assert_eq!(report.classes.len(), 5);
        assert!(report
            .matches_expected(&[
                strings(&["<()>", "<(1 2)(3 4)>", "<(1 2 3 4)>", "<(1 2)(3 4),(1 3)(2 4)>"]),
                strings(&["<(1 2)>", "<(1 2 3 4),(1 3)>"]),
                strings(&["<(1 2),(3 4)>"]),
                strings(&["<(1 2 3)>", "<(1 2 3),(1 2)(3 4)>"]),
                strings(&["<(1 2),(1 2 3)>", "<(1 2),(1 2 3 4)>"]),
            ])
            .unwrap());
    }

    #[test]
    fn all_edges_pass_certificate_check() {
        for n in 2u8..=4 {
            let report = classify(n, &EnumBudget::default()).unwrap();
            for class in &report.classes {
                for e in &class.edges {
                    assert!(
                        certificate_check(
                            &e.certificate,
                            &report.reps[e.product_class],
                            &report.reps[e.factor_class],
                        ),
                        "degree {n}: {}",
                        e.certificate
                    );
                }
            }
        }
    }

    #[test]
    fn trivial_class_is_exactly_the_semiregulars() {
        for n in 2u8..=4 {
            let report = classify(n, &EnumBudget::default()).unwrap();
            let trivial = report
                .class_of(&PermGroup::trivial(n))
                .expect("trivial group classified");
            for (i, rep) in report.reps.iter().enumerate() {
                let in_trivial = report.classes[trivial].members.contains(&i);
                assert_eq!(
                    in_trivial,
                    report.semiregular[i],
                    "degree {n}, group {rep}"
                );
            }
        }
    }

    #[test]
    fn bogus_certificates_fail() {
        // H not semiregular
        let bad = MergeCertificate {
            h: PermGroup::parse("<(1 2)>", 3).unwrap(),
            reps: vec![0, 2],
            g: PermGroup::trivial(3),
        };
        assert!(!certificate_check(
            &bad,
            &PermGroup::parse("<(1 2)>", 3).unwrap(),
            &PermGroup::trivial(3)
        ));
        // right structure, wrong targets
        let cert = MergeCertificate {
            h: PermGroup::parse("<(1 2 3)>", 3).unwrap(),
            reps: vec![2],
            g: PermGroup::parse("<(1 2)>", 3).unwrap(),
        };
        let s3 = PermGroup::symmetric(3);
        let s2 = PermGroup::parse("<(1 2)>", 3).unwrap();
        assert!(certificate_check(&cert, &s3, &s2));
        assert!(!certificate_check(&cert, &s2, &s3));
        // trivial H certifies only the tautologies
        let triv = MergeCertificate {
            h: PermGroup::trivial(3),
            reps: vec![0, 1, 2],
            g: PermGroup::parse("<(1 2 3)>", 3).unwrap(),
        };
        let c3 = PermGroup::parse("<(1 2 3)>", 3).unwrap();
        assert!(certificate_check(&triv, &c3, &c3));
    }

    #[test]
    fn quinary_degree_summary() {
        let report = classify(5, &EnumBudget { max_degree: 5 }).unwrap();
        assert_eq!(report.reps.len(), 19);
        assert_eq!(report.classes.len(), 16);
        // the only nontrivial merges: C5 with 1, D10 with the double
        // transpositions, F20 with C4
        let c5 = report.class_of(&PermGroup::parse("<(1 2 3 4 5)>", 5).unwrap()).unwrap();
        assert_eq!(Some(c5), report.class_of(&PermGroup::trivial(5)));
        let d10 = report
            .class_of(&PermGroup::parse("<(1 2 3 4 5),(2 5)(3 4)>", 5).unwrap())
            .unwrap();
        assert_eq!(
            Some(d10),
            report.class_of(&PermGroup::parse("<(2 5)(3 4)>", 5).unwrap())
        );
        let f20 = report
            .class_of(&PermGroup::parse("<(1 2 3 4 5),(2 3 5 4)>", 5).unwrap())
            .unwrap();
        assert_eq!(
            Some(f20),
            report.class_of(&PermGroup::parse("<(2 3 5 4)>", 5).unwrap())
        );
    }

    #[test]
    fn report_json_is_complete() {
        let report = classify(3, &EnumBudget::default()).unwrap();
        let json = report.to_json();
        assert_eq!(json["n"], 3);
        assert_eq!(json["subgroups"].as_array().unwrap().len(), 4);
        assert_eq!(json["classes"].as_array().unwrap().len(), 2);
        assert_eq!(json["pairs"][0]["status"], "semiregularity-obstruction");
        assert!(json["footnote"].is_string());
        let wrong = report.matches_expected(&[
            strings(&["<()>"]),
            strings(&["<(1 2 3)>", "<(1 2)>", "<(1 2),(1 2 3)>"]),
        ]);
        assert!(!wrong.unwrap());
    }
}

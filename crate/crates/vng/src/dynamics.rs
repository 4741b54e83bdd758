//! Orbit computation and fixed-point structure of table elements.
//!
//! The payoff is an effective obstruction: when a non-identity permutation
//! g fixes a letter x, the letterwise element [∅]_g has points with finite
//! nontrivial orbit accumulating at the fixed point x^ω — something no
//! element of plain V_n allows. That asymmetry certifies V_n(G) ≇ V_n for
//! every non-semiregular G.

use crate::elements::TableElement;
use crate::error::{Error, Result};
use crate::perm::{Letter, Perm, PermGroup};
use crate::words::{EPPoint, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitBudget {
    pub max_steps: usize,
    /// Cap on |preperiod| + |period| of any intermediate point.
    pub max_repr_len: usize,
}

impl Default for OrbitBudget {
    fn default() -> Self {
        OrbitBudget { max_steps: 10_000, max_repr_len: 512 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitResult {
    /// The full forward orbit starting at the query point, pairwise
    /// distinct; applying the element to the last point returns to the
    /// first.
    Finite(Vec<EPPoint>),
    BudgetExceeded { steps: usize },
}

impl OrbitResult {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrbitResult::Finite(_))
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            OrbitResult::Finite(o) => Some(o.len()),
            OrbitResult::BudgetExceeded { .. } => None,
        }
    }
}

/// Forward orbit of `p` under `e`. Because `e` is a bijection, the first
/// revisited point must be `p` itself, so detecting the cycle needs no
/// history lookup.
pub fn orbit(e: &TableElement, p: &EPPoint, budget: &OrbitBudget) -> OrbitResult {
    let mut points = vec![p.clone()];
    let mut q = e.apply(p);
    while q != *p {
        if points.len() >= budget.max_steps
            || q.preperiod().len() + q.period().len() > budget.max_repr_len
        {
            return OrbitResult::BudgetExceeded { steps: points.len() };
        }
        points.push(q.clone());
        q = e.apply(&q);
    }
    OrbitResult::Finite(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowCase {
    /// α = β: the row fixes its whole cone pointwise.
    EqualCones,
    /// β = α‖γ: the row contracts into its own cone; the unique fixed
    /// point is α‖γ^ω and every other point of [α] escapes forever.
    RangeInsideDomain,
    /// α = β‖γ: the inverse row contracts — same unique fixed point
    /// β‖γ^ω, same infinite orbits nearby (an element and its inverse
    /// share orbit structure).
    DomainInsideRange,
}

#[derive(Debug, Clone)]
pub struct RowAnalysis {
    pub row: usize,
    pub case: RowCase,
    /// For `EqualCones` an arbitrary representative of the fixed cone;
    /// otherwise the unique fixed point of the row.
    pub fixed_point: EPPoint,
    pub whole_cone_fixed: bool,
    /// Whether every other point of the cone provably has infinite orbit.
    pub nearby_infinite: bool,
}

#[derive(Debug, Clone)]
pub struct FixedConeAnalysis {
    pub rows: Vec<RowAnalysis>,
}

/// Classifies every row whose domain and range are comparable. Only plain
/// elements are accepted: a nontrivial tail reshuffles the suffix and the
/// three-way case split below no longer describes the dynamics.
pub fn fixed_cone_analysis(e: &TableElement) -> Result<FixedConeAnalysis> {
    if !e.is_in_plain_vn() {
        return Err(Error::BadElement(
            "fixed-cone analysis requires identity tails".into(),
        ));
    }
    let mut rows = Vec::new();
    for (i, row) in e.rows().iter().enumerate() {
        let analysis = if row.domain == row.range {
            RowAnalysis {
                row: i,
                case: RowCase::EqualCones,
                fixed_point: EPPoint::new(row.domain.clone(), Word::from_letters(vec![0]))
                    .expect("nonempty period"),
                whole_cone_fixed: true,
                nearby_infinite: false,
            }
        } else if let Some(gamma) = row.range.strip_prefix(&row.domain) {
            RowAnalysis {
                row: i,
                case: RowCase::RangeInsideDomain,
                fixed_point: EPPoint::new(row.domain.clone(), gamma)
                    .expect("nonempty period"),
                whole_cone_fixed: false,
                nearby_infinite: true,
            }
        } else if let Some(gamma) = row.domain.strip_prefix(&row.range) {
            RowAnalysis {
                row: i,
                case: RowCase::DomainInsideRange,
                fixed_point: EPPoint::new(row.range.clone(), gamma)
                    .expect("nonempty period"),
                whole_cone_fixed: false,
                nearby_infinite: true,
            }
        } else {
            continue;
        };
        rows.push(analysis);
    }
    Ok(FixedConeAnalysis { rows })
}

/// A certified failure of V_n(G) ≅ V_n: a non-identity g ∈ G fixing the
/// letter x, together with points γ_k = x^{k-1}·y·x^ω marching into the
/// fixed point x^ω of [∅]_g, each with finite orbit of size > 1.
#[derive(Debug, Clone)]
pub struct ObstructionWitness {
    pub g: Perm,
    pub x: Letter,
    pub points: Vec<(EPPoint, Vec<EPPoint>)>,
}

impl ObstructionWitness {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "g": self.g.to_string(),
            "x": self.x + 1,
            "points": self.points.iter().map(|(p, orbit)| {
                serde_json::json!({
                    "point": p.to_string(),
                    "orbit": orbit.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for ObstructionWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "g = {} fixes letter {}; finite nontrivial orbits accumulate at {}^ω:",
            self.g,
            self.x + 1,
            self.x + 1
        )?;
        for (p, orbit) in &self.points {
            write!(f, "  {p}: orbit size {} [", orbit.len())?;
            for (k, q) in orbit.iter().enumerate() {
                if k > 0 {
                    write!(f, " -> ")?;
                }
                write!(f, "{q}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Searches G for the obstruction. Returns `None` exactly when G is
/// semiregular.
pub fn semiregularity_obstruction(group: &PermGroup) -> Option<ObstructionWitness> {
    semiregularity_obstruction_depth(group, 8)
}

/// Same, with the accumulation depth K (how many γ_k are produced).
pub fn semiregularity_obstruction_depth(
    group: &PermGroup,
    max_k: usize,
) -> Option<ObstructionWitness> {
    let n = group.degree();
    for g in group.elements() {
        if g.is_identity() {
            continue;
        }
        let Some(x) = g.fixed_points().next() else { continue };
        let y = g.moved_points().next().expect("non-identity permutation");
        let e = TableElement::iterated_perm(n, &Word::empty(), g)
            .expect("letterwise element over <g>");
        let points = (1..=max_k)
            .map(|k| {
                let mut letters = vec![x; k - 1];
                letters.push(y);
                let gamma = EPPoint::new(
                    Word::from_letters(letters),
                    Word::from_letters(vec![x]),
                )
                .expect("nonempty period");
                match orbit(&e, &gamma, &OrbitBudget::default()) {
                    OrbitResult::Finite(o) => (gamma, o),
                    OrbitResult::BudgetExceeded { .. } => {
                        unreachable!("letterwise orbits of γ_k are finite")
                    }
                }
            })
            .collect();
        return Some(ObstructionWitness { g: g.clone(), x, points });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::EnumBudget;

    fn pt(s: &str) -> EPPoint {
        EPPoint::parse(s).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn identity_orbits_are_singletons() {
        let id = TableElement::identity(2);
        for p in ["(1)", "12(21)", "2(112)"] {
            assert_eq!(
                orbit(&id, &pt(p), &OrbitBudget::default()),
                OrbitResult::Finite(vec![pt(p)])
            );
        }
    }

    #[test]
    fn letterwise_flip_orbits_near_fixed_point() {
        let g = Perm::parse("(1 2)", 3).unwrap();
        let e = TableElement::iterated_perm(3, &Word::empty(), &g).unwrap();
        for k in 1..=8usize {
            let mut letters = vec![2u8; k - 1];
            letters.push(0);
            let gamma = EPPoint::new(Word::from_letters(letters), w("3")).unwrap();
            let result = orbit(&e, &gamma, &OrbitBudget::default());
            assert_eq!(result.len(), Some(2), "k = {k}");
        }
    }

    #[test]
    fn contracting_row_exceeds_budget() {
        // 1 -> 12: the cone [1] spirals into 1(2); any other point of [1]
        // runs away, growing its representation each step
        let e = TableElement::parse("1 -> 12 ; ()\n21 -> 11 ; ()\n22 -> 2 ; ()", 2).unwrap();
        let fixed = pt("1(2)");
        assert_eq!(e.apply(&fixed), fixed);
        let result = orbit(&e, &pt("11(1)"), &OrbitBudget::default());
        assert!(!result.is_finite());
        let small = OrbitBudget { max_steps: 50, max_repr_len: 64 };
        assert!(!orbit(&e, &pt("1(1)"), &small).is_finite());
    }

    #[test]
    fn cone_analysis_trichotomy() {
        let e = TableElement::parse("1 -> 12 ; ()\n21 -> 11 ; ()\n22 -> 2 ; ()", 2).unwrap();
        let analysis = fixed_cone_analysis(&e).unwrap();
        assert_eq!(analysis.rows.len(), 2);
        let row = &analysis.rows[0];
        assert_eq!(row.case, RowCase::RangeInsideDomain);
        assert_eq!(row.fixed_point, pt("1(2)"));
        assert!(row.nearby_infinite);
        assert_eq!(analysis.rows[1].case, RowCase::DomainInsideRange);
        assert_eq!(analysis.rows[1].fixed_point, pt("(2)"));
        assert_eq!(e.apply(&pt("(2)")), pt("(2)"));

        let inv = e.invert();
        let analysis = fixed_cone_analysis(&inv).unwrap();
        let cases: Vec<RowCase> = analysis.rows.iter().map(|r| r.case).collect();
        assert_eq!(cases, vec![RowCase::DomainInsideRange, RowCase::RangeInsideDomain]);
        assert_eq!(analysis.rows[0].fixed_point, pt("1(2)"));
        assert_eq!(inv.apply(&pt("1(2)")), pt("1(2)"));

        let id = TableElement::identity(2);
        let analysis = fixed_cone_analysis(&id).unwrap();
        assert_eq!(analysis.rows[0].case, RowCase::EqualCones);
        assert!(analysis.rows[0].whole_cone_fixed);

        let swap = TableElement::small_swap(2, &w("11"), &w("12")).unwrap();
        let analysis = fixed_cone_analysis(&swap).unwrap();
        // only the identity row 2 -> 2 is comparable
        assert_eq!(analysis.rows.len(), 1);
        assert_eq!(analysis.rows[0].case, RowCase::EqualCones);
    }

    #[test]
    fn tails_are_rejected_by_cone_analysis() {
        let g = Perm::parse("(1 2)", 2).unwrap();
        let e = TableElement::iterated_perm(2, &w("1"), &g).unwrap();
        assert!(fixed_cone_analysis(&e).is_err());
    }

    #[test]
    fn obstruction_finds_fixed_letter() {
        let g = PermGroup::parse("<(1 2)>", 3).unwrap();
        let witness = semiregularity_obstruction(&g).unwrap();
        assert_eq!(witness.g, Perm::parse("(1 2)", 3).unwrap());
        assert_eq!(witness.x, 2);
        assert_eq!(witness.points.len(), 8);
        for (k, (gamma, orb)) in witness.points.iter().enumerate() {
            assert_eq!(orb.len(), 2);
            assert_eq!(gamma, &orb[0]);
            // γ_k = 3^{k-1} 1 (3)
            let mut letters = vec![2u8; k];
            letters.push(0);
            assert_eq!(
                gamma,
                &EPPoint::new(Word::from_letters(letters), w("3")).unwrap()
            );
        }
        let json = witness.to_json();
        assert_eq!(json["g"], "(1 2)");
        assert_eq!(json["x"], 3);
        assert_eq!(json["points"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn obstruction_agrees_with_semiregularity() {
        let budget = EnumBudget::default();
        for n in 2u8..=4 {
            for g in PermGroup::subgroups(n, &budget).unwrap() {
                assert_eq!(
                    semiregularity_obstruction(&g).is_none(),
                    g.is_semiregular(),
                    "degree {n}, group {g}"
                );
            }
        }
    }

    #[test]
    fn witness_orbit_sizes_match_cycle_length() {
        let g = PermGroup::parse("<(1 2 3)>", 4).unwrap();
        let witness = semiregularity_obstruction(&g).unwrap();
        // every non-identity element is a 3-cycle fixing letter 4
        assert_eq!(witness.x, 3);
        for (_, orb) in &witness.points {
            assert_eq!(orb.len(), 3);
        }
    }
}

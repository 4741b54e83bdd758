//! Exhaustive identity suites over the orbit machines.
//!
//! Four identities carry the conjugation argument, and all four are
//! checked here mechanically, for every semiregular subgroup and every
//! transversal at the requested degrees:
//!
//! * start shift:      A_h = A_g · ⌊∅⌋_{g⁻¹h}         (g, h ∈ H)
//! * letterwise shift: A_h = [∅]_{hg⁻¹} · A_g          (g, h ∈ H)
//! * slide:            [∅]_g · A_{h_x} = A_{h_{x·g⁻¹}} · [∅]_g
//!                                     (g ∈ N(H) ∩ Stab(R), x a letter)
//! * twist:            h_x⁻¹ · h · g · h_{x·hg} = g    (h ∈ H, same g)
//!
//! Machine identities are decided on the reachable pair graph, which is
//! equivalent to enumerating every input word up to the length bound but
//! costs |Q|² instead of n^length. The twist is a plain equation in S_n
//! and is checked verbatim.

use crate::error::Result;
use crate::par;
use crate::perm::{EnumBudget, Perm, PermGroup, Transversal};
use crate::transducer::{OrbitTransducer, SyncTransducer};

#[derive(Debug, Clone)]
pub struct SuiteReport {
    /// Number of individual identity instances checked.
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_clean() {
            write!(f, "{} identity instances checked, all hold", self.checked)
        } else {
            writeln!(f, "{} checked, {} FAILED:", self.checked, self.failures.len())?;
            for line in &self.failures {
                writeln!(f, "  {line}")?;
            }
            Ok(())
        }
    }
}

fn merge(results: Vec<(usize, Vec<String>)>) -> SuiteReport {
    let mut report = SuiteReport { checked: 0, failures: Vec::new() };
    for (count, fails) in results {
        report.checked += count;
        report.failures.extend(fails);
    }
    report
}

/// Every (semiregular H, transversal) pair at the given degrees.
fn configs(degrees: &[u8], budget: &EnumBudget) -> Result<Vec<Transversal>> {
    let mut out = Vec::new();
    for &n in degrees {
        for h in PermGroup::subgroups(n, budget)? {
            if h.is_semiregular() {
                out.extend(Transversal::all(&h)?);
            }
        }
    }
    Ok(out)
}

/// The three machine identities, exhaustively on words up to `max_len`.
pub fn commutation_suite(
    degrees: &[u8],
    max_len: usize,
    budget: &EnumBudget,
) -> Result<SuiteReport> {
    let configs = configs(degrees, budget)?;
    let budget = *budget;
    let results = par::map_collect(&configs, |t| {
        let group = t.group();
        let n = group.degree();
        let base = OrbitTransducer::new(t, &Perm::identity(n)).expect("valid transversal");
        let a = |s: &Perm| base.machine().with_start(s).expect("start in H");
        let mut checked = 0;
        let mut failures = Vec::new();
        for g in group.elements() {
            let a_g = a(g);
            for h in group.elements() {
                let a_h = a(h);
                let shift = SyncTransducer::from_depth_one(n, &g.inverse().then(h));
                let rhs = a_g.compose(&shift).expect("same degree");
                checked += 1;
                if !a_h.agrees_on_words(&rhs, max_len) {
                    failures.push(format!("start shift: H={group}, R={t}, g={g}, h={h}"));
                }
                let letterwise = SyncTransducer::from_letterwise(n, &h.then(&g.inverse()));
                let rhs = letterwise.compose(&a_g).expect("same degree");
                checked += 1;
                if !a_h.agrees_on_words(&rhs, max_len) {
                    failures.push(format!("letterwise shift: H={group}, R={t}, g={g}, h={h}"));
                }
            }
        }
        let stab = PermGroup::setwise_stabilizer(n, t.reps());
        let inter = group
            .normalizer(&budget)
            .expect("within enumeration budget")
            .intersect(&stab);
        for c in inter.elements() {
            let letterwise = SyncTransducer::from_letterwise(n, c);
            for x in 0..n {
                let lhs = letterwise.compose(&a(t.h_map(x))).expect("same degree");
                let y = c.inverse().apply(x);
                let rhs = a(t.h_map(y)).compose(&letterwise).expect("same degree");
                checked += 1;
                if !lhs.agrees_on_words(&rhs, max_len) {
                    failures.push(format!("slide: H={group}, R={t}, g={c}, x={}", x + 1));
                }
            }
        }
        (checked, failures)
    });
    Ok(merge(results))
}

/// The twist identity, verbatim in S_n for every admissible (h, g, x).
pub fn transversal_identity_suite(degrees: &[u8], budget: &EnumBudget) -> Result<SuiteReport> {
    let configs = configs(degrees, budget)?;
    let budget = *budget;
    let results = par::map_collect(&configs, |t| {
        let group = t.group();
        let n = group.degree();
        let stab = PermGroup::setwise_stabilizer(n, t.reps());
        let inter = group
            .normalizer(&budget)
            .expect("within enumeration budget")
            .intersect(&stab);
        let mut checked = 0;
        let mut failures = Vec::new();
        for h in group.elements() {
            for g in inter.elements() {
                let hg = h.then(g);
                for x in 0..n {
                    let lhs = t
                        .h_map(x)
                        .inverse()
                        .then(h)
                        .then(g)
                        .then(t.h_map(hg.apply(x)));
                    checked += 1;
                    if lhs != *g {
                        failures.push(format!(
                            "twist: H={group}, R={t}, h={h}, g={g}, x={}",
                            x + 1
                        ));
                    }
                }
            }
        }
        (checked, failures)
    });
    Ok(merge(results))
}

/// HG must close to a group whenever G sits inside N(H) ∩ Stab(R).
pub fn product_closure_suite(degrees: &[u8], budget: &EnumBudget) -> Result<SuiteReport> {
    let configs = configs(degrees, budget)?;
    let budget = *budget;
    let results = par::map_collect(&configs, |t| {
        let h = t.group();
        let n = h.degree();
        let subgroups = PermGroup::subgroups(n, &budget).expect("within budget");
        let mut checked = 0;
        let mut failures = Vec::new();
        for g in &subgroups {
            let admissible = g
                .elements()
                .iter()
                .all(|c| h.is_normalized_by(c) && PermGroup::stabilizes_set(t.reps(), c));
            if !admissible {
                continue;
            }
            checked += 1;
            if let Err(pf) = PermGroup::product_set(h, g) {
                failures.push(format!("closure: H={h}, R={t}, G={g}: {pf}"));
            }
        }
        (checked, failures)
    });
    Ok(merge(results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_identities_hold_at_small_degrees() {
        let budget = EnumBudget::default();
        let report = commutation_suite(&[2, 3], 8, &budget).unwrap();
        assert!(report.is_clean(), "{report}");
        assert!(report.checked > 0);
    }

    #[test]
    fn twist_identity_holds_at_small_degrees() {
        let budget = EnumBudget::default();
        let report = transversal_identity_suite(&[2, 3, 4], &budget).unwrap();
        assert!(report.is_clean(), "{report}");
        // regular H at n=3 contributes |H|·|inter|·n = 3·... at least
        assert!(report.checked >= 100);
    }

    #[test]
    fn admissible_products_always_close() {
        let budget = EnumBudget::default();
        let report = product_closure_suite(&[2, 3, 4], &budget).unwrap();
        assert!(report.is_clean(), "{report}");
        assert!(report.checked > 0);
    }

    #[test]
    fn reports_format_cleanly() {
        let clean = SuiteReport { checked: 5, failures: vec![] };
        assert!(format!("{clean}").contains("all hold"));
        let dirty = SuiteReport { checked: 5, failures: vec!["twist: ...".into()] };
        assert!(!dirty.is_clean());
        assert!(format!("{dirty}").contains("FAILED"));
    }
}

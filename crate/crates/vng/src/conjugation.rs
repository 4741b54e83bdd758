//! Conjugation by the orbit machine: the isomorphism V_n(HG) ≅ V_n(G).
//!
//! Fix a semiregular H ≤ S_n with transversal R and a G inside both the
//! normalizer of H and the setwise stabilizer of R. Writing A for the orbit
//! machine of (H, R) started at the identity, φ(v) = A⁻¹·v·A carries
//! tables with tails in HG to tables with tails in G, and φ⁻¹(w) = A·w·A⁻¹
//! goes back.
//!
//! Two independent implementations are kept deliberately:
//!
//! * a direct route working row by row — conjugating a row (α, β, s)
//!   relabels the prefixes through the machine and reduces the tail to a
//!   depth-one correction followed by a letterwise permutation;
//! * closed formulas on the standard generators (small swaps, depth-one
//!   permutations, iterated permutations), each a short product of
//!   generators on the other side.
//!
//! Tests cross-check them against each other and against the pointwise
//! action, so a transcription slip in either falsifies the suite.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::elements::{random_element, TableElement, VnGenerator};
use crate::error::{Error, Result};
use crate::par;
use crate::perm::{Perm, PermGroup, Transversal};
use crate::transducer::{OrbitTransducer, SyncTransducer};
use crate::words::{EPPoint, Word};

pub struct ConjugationContext {
    transversal: Transversal,
    g_group: PermGroup,
    hg: PermGroup,
    a_id: OrbitTransducer,
    inverse_machine: SyncTransducer,
}

impl ConjugationContext {
    /// Validates the hypotheses: every element of G must normalize H and
    /// stabilize the transversal setwise; HG must close to a group (which
    /// the first two conditions in fact guarantee — the closure check is a
    /// cheap self-audit, not a restriction).
    pub fn new(transversal: &Transversal, g_group: &PermGroup) -> Result<ConjugationContext> {
        let h = transversal.group();
        if h.degree() != g_group.degree() {
            return Err(Error::DegreeMismatch(h.degree(), g_group.degree()));
        }
        for c in g_group.elements() {
            if !h.is_normalized_by(c) {
                return Err(Error::BadContext(format!("{c} does not normalize H")));
            }
            if !PermGroup::stabilizes_set(transversal.reps(), c) {
                return Err(Error::BadContext(format!(
                    "{c} does not stabilize the transversal {transversal}"
                )));
            }
        }
        let hg = PermGroup::product_set(h, g_group)
            .map_err(|pf| Error::BadContext(pf.to_string()))?;
        let a_id = OrbitTransducer::new(transversal, &Perm::identity(h.degree()))?;
        let inverse_machine = a_id.inverse();
        Ok(ConjugationContext {
            transversal: transversal.clone(),
            g_group: g_group.clone(),
            hg,
            a_id,
            inverse_machine,
        })
    }

    pub fn degree(&self) -> u8 {
        self.g_group.degree()
    }

    pub fn h_group(&self) -> &PermGroup {
        self.transversal.group()
    }

    pub fn g_group(&self) -> &PermGroup {
        &self.g_group
    }

    pub fn hg_group(&self) -> &PermGroup {
        &self.hg
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn machine(&self) -> &SyncTransducer {
        self.a_id.machine()
    }

    pub fn inverse_machine(&self) -> &SyncTransducer {
        &self.inverse_machine
    }

    /// The unique factorization s = h·g with h ∈ H, g ∈ G. It exists for
    /// every s ∈ HG and is unique because H ∩ G is trivial: only the
    /// identity of a semiregular group can fix the transversal pointwise.
    pub fn factor(&self, s: &Perm) -> Result<(Perm, Perm)> {
        for h in self.h_group().elements() {
            let g = h.inverse().then(s);
            if self.g_group.contains(&g) {
                return Ok((h.clone(), g));
            }
        }
        Err(Error::NotInGroup(format!("{s} has no factorization over H·G")))
    }

    /// φ(v) = A⁻¹·v·A, row route. A row (α, β, s) with s = h·g becomes the
    /// n rows (α·A ‖ x, β·A ‖ x·p·g, g): the machine relabels the
    /// prefixes, the suffix transformation collapses to one depth-one
    /// correction p = q_α⁻¹·h·(g·q_β·g⁻¹) followed by letterwise g, where
    /// q_θ is the machine's state after reading θ.
    pub fn phi(&self, v: &TableElement) -> Result<TableElement> {
        if v.degree() != self.degree() {
            return Err(Error::DegreeMismatch(self.degree(), v.degree()));
        }
        let m = self.a_id.machine();
        let n = self.degree();
        let mut rows = Vec::with_capacity(v.rows().len() * n as usize);
        for row in v.rows() {
            if !self.hg.contains(&row.tail) {
                return Err(Error::TailOutsideGroup(row.tail.to_string()));
            }
            let (h, g) = self.factor(&row.tail)?;
            let (dom, q_a) = m.apply_word(&row.domain);
            let (ran, q_b) = m.apply_word(&row.range);
            let p = q_a
                .inverse()
                .then(&h)
                .then(&g)
                .then(&q_b)
                .then(&g.inverse());
            let pg = p.then(&g);
            for x in 0..n {
                rows.push(crate::elements::Row::new(
                    dom.appended(x),
                    ran.appended(pg.apply(x)),
                    g.clone(),
                ));
            }
        }
        TableElement::from_rows(n, rows, self.g_group.clone())
    }

    /// φ⁻¹(w) = A·w·A⁻¹, row route. Here no expansion is needed: a row
    /// (α, β, g) becomes (α·A⁻¹, β·A⁻¹, c_α·g·c_β⁻¹) where c_θ is the
    /// forward machine's state after reading θ·A⁻¹. The conjugated tail
    /// lands in HG because G normalizes H.
    pub fn phi_inverse(&self, w: &TableElement) -> Result<TableElement> {
        if w.degree() != self.degree() {
            return Err(Error::DegreeMismatch(self.degree(), w.degree()));
        }
        let mut rows = Vec::with_capacity(w.rows().len());
        for row in w.rows() {
            if !self.g_group.contains(&row.tail) {
                return Err(Error::TailOutsideGroup(row.tail.to_string()));
            }
            let (dom, lab_a) = self.inverse_machine.apply_word(&row.domain);
            let (ran, lab_b) = self.inverse_machine.apply_word(&row.range);
            // the inverse machine's state labels are the inverses of the
            // forward machine's along the preimage path
            let tail = lab_a.inverse().then(&row.tail).then(&lab_b);
            rows.push(crate::elements::Row::new(dom, ran, tail));
        }
        TableElement::from_rows(self.degree(), rows, self.hg.clone())
    }

    /// φ on one generator via the closed product formulas, no row
    /// expansion. Cross-checked against `phi` of the same generator.
    pub fn phi_generator(&self, gen: &VnGenerator) -> Result<TableElement> {
        let n = self.degree();
        let m = self.a_id.machine();
        match gen {
            VnGenerator::SmallSwap(r1, r2) => {
                let (r1a, q1) = m.apply_word(r1);
                let (r2a, q2) = m.apply_word(r2);
                let swap = TableElement::small_swap(n, &r1a, &r2a)?;
                let fix2 =
                    TableElement::depth_one_perm(n, &r2a, &q1.inverse().then(&q2))?;
                let fix1 =
                    TableElement::depth_one_perm(n, &r1a, &q2.inverse().then(&q1))?;
                swap.compose(&fix2)?.compose(&fix1)
            }
            VnGenerator::DepthOne(alpha, h) => {
                let mut acc = TableElement::identity(n);
                for (a, b) in transposition_swaps(n, alpha, h) {
                    let factor = self.phi_generator(&VnGenerator::SmallSwap(a, b))?;
                    acc = acc.compose(&factor)?;
                }
                Ok(acc)
            }
            VnGenerator::Iterated(rho, s) => {
                let (h, g) = self.factor(s)?;
                let (ra, q) = m.apply_word(rho);
                let p = q.inverse().then(&h).then(&g).then(&q).then(&g.inverse());
                let twist = TableElement::depth_one_perm(n, &ra, &p)?;
                twist.compose(&TableElement::iterated_perm(n, &ra, &g)?)
            }
        }
    }

    /// φ⁻¹ on one generator via the closed product formulas.
    pub fn phi_inverse_generator(&self, gen: &VnGenerator) -> Result<TableElement> {
        let n = self.degree();
        let inv = &self.inverse_machine;
        match gen {
            VnGenerator::SmallSwap(r1, r2) => {
                let (r1i, lab1) = inv.apply_word(r1);
                let (r2i, lab2) = inv.apply_word(r2);
                let (c1, c2) = (lab1.inverse(), lab2.inverse());
                let swap = TableElement::small_swap(n, &r1i, &r2i)?;
                let fix2 = TableElement::iterated_perm(n, &r2i, &c1.then(&c2.inverse()))?;
                let fix1 = TableElement::iterated_perm(n, &r1i, &c2.then(&c1.inverse()))?;
                swap.compose(&fix2)?.compose(&fix1)
            }
            VnGenerator::DepthOne(alpha, h) => {
                let mut acc = TableElement::identity(n);
                for (a, b) in transposition_swaps(n, alpha, h) {
                    let factor = self.phi_inverse_generator(&VnGenerator::SmallSwap(a, b))?;
                    acc = acc.compose(&factor)?;
                }
                Ok(acc)
            }
            VnGenerator::Iterated(rho, g) => {
                if !self.g_group.contains(g) {
                    return Err(Error::TailOutsideGroup(g.to_string()));
                }
                let (ri, lab) = inv.apply_word(rho);
                let c = lab.inverse();
                TableElement::iterated_perm(n, &ri, &c.then(g).then(&c.inverse()))
            }
        }
    }

    /// The action of A⁻¹·v·A on one point, computed by the machines alone —
    /// the referee both φ implementations are measured against.
    pub fn conjugated_action(&self, v: &TableElement, p: &EPPoint) -> EPPoint {
        let pulled = self.inverse_machine.apply_epp(p);
        self.a_id.machine().apply_epp(&v.apply(&pulled))
    }

    /// Randomized audit of φ: homomorphism property on pairs, pointwise
    /// agreement with the machine action, and the φ⁻¹ round trip.
    pub fn verify_homomorphism(&self, samples: usize, seed: u64) -> HomReport {
        let n = self.degree();
        let indices: Vec<u64> = (0..samples as u64).collect();
        let failures: Vec<String> = par::map_collect(&indices, |&i| {
            let mut rng = StdRng::seed_from_u64(seed.wrapping_add(i.wrapping_mul(0x9e37)));
            let v = random_element(n, &self.hg, &mut rng);
            let w = random_element(n, &self.hg, &mut rng);
            let mut faults = Vec::new();
            match (self.phi(&v), self.phi(&w), v.compose(&w).and_then(|vw| self.phi(&vw))) {
                (Ok(pv), Ok(pw), Ok(pvw)) => {
                    match pv.compose(&pw) {
                        Ok(prod) if prod == pvw => {}
                        Ok(_) => faults.push(format!("sample {i}: phi(vw) != phi(v)phi(w)")),
                        Err(e) => faults.push(format!("sample {i}: composing images: {e}")),
                    }
                    for k in 0..3 {
                        let p = random_point(n, &mut rng);
                        if pv.apply(&p) != self.conjugated_action(&v, &p) {
                            faults.push(format!("sample {i}.{k}: pointwise mismatch at {p}"));
                        }
                    }
                    match self.phi_inverse(&pv) {
                        Ok(back) if back == v => {}
                        Ok(_) => faults.push(format!("sample {i}: phi_inverse(phi(v)) != v")),
                        Err(e) => faults.push(format!("sample {i}: phi_inverse failed: {e}")),
                    }
                }
                (a, b, c) => {
                    for e in [a.err(), b.err(), c.err()].into_iter().flatten() {
                        faults.push(format!("sample {i}: phi failed: {e}"));
                    }
                }
            }
            faults
        })
        .into_iter()
        .flatten()
        .collect();
        HomReport { samples, failures }
    }
}

/// ⌊α⌋_h written as small swaps: each cycle (a₁…a_k) of h contributes the
/// transpositions (a₁a₂)(a₁a₃)…(a₁a_k) in order, and ⌊α⌋ of a
/// transposition (x y) is the swap of the sibling cones α‖x, α‖y — except
/// at the binary root, where those two cones are the whole space and the
/// swap happens one level deeper: (α‖x‖z ↔ α‖y‖z for each z).
fn transposition_swaps(degree: u8, alpha: &Word, h: &Perm) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for cycle in h.cycles() {
        for k in 1..cycle.len() {
            let (x, y) = (cycle[0], cycle[k]);
            if degree == 2 && alpha.is_empty() {
                for z in 0..degree {
                    out.push((
                        alpha.appended(x).appended(z),
                        alpha.appended(y).appended(z),
                    ));
                }
            } else {
                out.push((alpha.appended(x), alpha.appended(y)));
            }
        }
    }
    out
}

fn random_point<R: Rng>(degree: u8, rng: &mut R) -> EPPoint {
    let len_pre = rng.gen_range(0..=4);
    let len_per = rng.gen_range(1..=4);
    let pre = Word::from_letters((0..len_pre).map(|_| rng.gen_range(0..degree)).collect());
    let per = Word::from_letters((0..len_per).map(|_| rng.gen_range(0..degree)).collect());
    EPPoint::new(pre, per).expect("period nonempty")
}

/// Outcome of `verify_homomorphism`: empty `failures` means every sampled
/// identity held.
#[derive(Debug, Clone)]
pub struct HomReport {
    pub samples: usize,
    pub failures: Vec<String>,
}

impl HomReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

impl std::fmt::Display for HomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_clean() {
            write!(f, "{} samples, all identities held", self.samples)
        } else {
            writeln!(f, "{} samples, {} failures:", self.samples, self.failures.len())?;
            for line in &self.failures {
                writeln!(f, "  {line}")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::random_generator;

    fn ctx(h: &str, degree: u8, reps: &[u8], g: &str) -> ConjugationContext {
        let hg = PermGroup::parse(h, degree).unwrap();
        let t = Transversal::new(&hg, reps.to_vec()).unwrap();
        ConjugationContext::new(&t, &PermGroup::parse(g, degree).unwrap()).unwrap()
    }

    fn n2() -> ConjugationContext {
        ctx("<(1 2)>", 2, &[0], "<()>")
    }

    fn n3() -> ConjugationContext {
        ctx("<(1 2 3)>", 3, &[0], "<(2 3)>")
    }

    fn n4() -> ConjugationContext {
        ctx("<(1 2)(3 4),(1 3)(2 4)>", 4, &[0], "<(2 3),(2 3 4)>")
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn identity_maps_to_identity() {
        for c in [n2(), n3(), n4()] {
            let id = TableElement::identity(c.degree());
            assert_eq!(c.phi(&id).unwrap(), id);
            assert_eq!(c.phi_inverse(&id).unwrap(), id);
        }
    }

    #[test]
    fn binary_iterated_flip_becomes_depth_one() {
        let c = n2();
        let flip = Perm::parse("(1 2)", 2).unwrap();
        for beta in ["", "1", "2", "11", "21", "122", "2121"] {
            let beta = w(beta);
            let v = TableElement::iterated_perm(2, &beta, &flip).unwrap();
            let (beta_a, _) = c.machine().apply_word(&beta);
            let expect = TableElement::depth_one_perm(2, &beta_a, &flip).unwrap();
            assert_eq!(c.phi(&v).unwrap(), expect, "beta = {beta:?}");
            assert_eq!(
                c.phi_generator(&VnGenerator::Iterated(beta.clone(), flip.clone())).unwrap(),
                expect
            );
            // and back
            assert_eq!(c.phi_inverse(&expect).unwrap(), v);
        }
    }

    #[test]
    fn swap_with_common_last_letter_stays_a_swap() {
        let c = n2();
        for (a, b) in [("11", "21"), ("12", "22"), ("112", "22"), ("121", "21")] {
            let (a, b) = (w(a), w(b));
            let v = TableElement::small_swap(2, &a, &b).unwrap();
            let (aa, _) = c.machine().apply_word(&a);
            let (ba, _) = c.machine().apply_word(&b);
            let expect = TableElement::small_swap(2, &aa, &ba).unwrap();
            assert_eq!(c.phi(&v).unwrap(), expect);
        }
    }

    #[test]
    fn images_of_supergroup_elements_are_plain() {
        // over a regular (hence semiregular) H with trivial G, phi lands in
        // plain V_n
        let mut rng = StdRng::seed_from_u64(21);
        let c = n2();
        for _ in 0..60 {
            let v = random_element(2, c.hg_group(), &mut rng);
            let image = c.phi(&v).unwrap();
            assert!(image.is_in_plain_vn());
        }
        let c = n4();
        let klein = c.h_group().clone();
        let plain_ctx = ConjugationContext::new(
            &Transversal::new(&klein, vec![0]).unwrap(),
            &PermGroup::trivial(4),
        )
        .unwrap();
        for _ in 0..20 {
            let v = random_element(4, &klein, &mut rng);
            assert!(plain_ctx.phi(&v).unwrap().is_in_plain_vn());
        }
    }

    #[test]
    fn closed_formulas_agree_with_row_route() {
        let mut rng = StdRng::seed_from_u64(33);
        for c in [n2(), n3(), n4()] {
            let n = c.degree();
            for _ in 0..40 {
                let gen = random_generator(n, c.hg_group(), &mut rng);
                let via_rows = c.phi(&gen.to_element(n).unwrap()).unwrap();
                let via_formula = c.phi_generator(&gen).unwrap();
                assert_eq!(via_formula, via_rows, "gen {gen:?} in n={n}");
            }
            for _ in 0..40 {
                let gen = random_generator(n, c.g_group(), &mut rng);
                let via_rows = c.phi_inverse(&gen.to_element(n).unwrap()).unwrap();
                let via_formula = c.phi_inverse_generator(&gen).unwrap();
                assert_eq!(via_formula, via_rows, "gen {gen:?} in n={n}");
            }
        }
    }

    #[test]
    fn pointwise_action_matches_machine_oracle() {
        let mut rng = StdRng::seed_from_u64(55);
        for c in [n2(), n3(), n4()] {
            let n = c.degree();
            for _ in 0..25 {
                let v = random_element(n, c.hg_group(), &mut rng);
                let image = c.phi(&v).unwrap();
                for _ in 0..4 {
                    let p = random_point(n, &mut rng);
                    assert_eq!(image.apply(&p), c.conjugated_action(&v, &p));
                }
            }
        }
    }

    #[test]
    fn round_trips_cancel() {
        let mut rng = StdRng::seed_from_u64(77);
        for c in [n2(), n3(), n4()] {
            let n = c.degree();
            for _ in 0..25 {
                let v = random_element(n, c.hg_group(), &mut rng);
                assert_eq!(c.phi_inverse(&c.phi(&v).unwrap()).unwrap(), v);
                let s = random_element(n, c.g_group(), &mut rng);
                assert_eq!(c.phi(&c.phi_inverse(&s).unwrap()).unwrap(), s);
            }
        }
    }

    #[test]
    fn phi_commutes_with_inversion() {
        let mut rng = StdRng::seed_from_u64(99);
        let c = n3();
        for _ in 0..30 {
            let v = random_element(3, c.hg_group(), &mut rng);
            assert_eq!(c.phi(&v.invert()).unwrap(), c.phi(&v).unwrap().invert());
        }
    }

    #[test]
    fn homomorphism_audit_is_clean() {
        for c in [n2(), n3()] {
            let report = c.verify_homomorphism(40, 7);
            assert!(report.is_clean(), "{report}");
        }
        // trivial H: the machine is the identity and phi changes nothing
        let trivial = PermGroup::trivial(3);
        let t = Transversal::new(&trivial, vec![0, 1, 2]).unwrap();
        let c = ConjugationContext::new(&t, &PermGroup::parse("<(1 2 3)>", 3).unwrap()).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let v = random_element(3, c.hg_group(), &mut rng);
            assert_eq!(c.phi(&v).unwrap(), v);
        }
    }

    #[test]
    fn bad_contexts_are_rejected() {
        // (1 2) moves the rep 1: cannot stabilize R={1}
        let h = PermGroup::parse("<(1 2 3)>", 3).unwrap();
        let t = Transversal::new(&h, vec![0]).unwrap();
        let err = ConjugationContext::new(&t, &PermGroup::parse("<(1 2)>", 3).unwrap());
        assert!(matches!(err, Err(Error::BadContext(_))));
        // (2 4) stabilizes R={1,3} but conjugates H = <(1 2)(3 4)> to
        // <(1 4)(2 3)>: the normalizer condition fails
        let h = PermGroup::parse("<(1 2)(3 4)>", 4).unwrap();
        let t = Transversal::new(&h, vec![0, 2]).unwrap();
        let err = ConjugationContext::new(&t, &PermGroup::parse("<(2 4)>", 4).unwrap());
        assert!(matches!(err, Err(Error::BadContext(_))));
    }

    #[test]
    fn foreign_tails_are_rejected() {
        let c = n2();
        let odd = TableElement::iterated_perm(3, &w("1"), &Perm::parse("(1 2 3)", 3).unwrap())
            .unwrap();
        assert!(c.phi(&odd).is_err()); // degree mismatch
        let c3 = n3();
        let bad = TableElement::iterated_perm(3, &w("1"), &Perm::parse("(1 2)", 3).unwrap())
            .unwrap();
        // (1 2) is in S_3 = HG but not in G = <(2 3)>
        assert!(c3.phi_inverse(&bad).is_err());
        assert!(c3.phi(&bad).is_ok());
    }

    #[test]
    fn factorization_is_unique_and_total() {
        let c = n3();
        for s in c.hg_group().elements() {
            let (h, g) = c.factor(s).unwrap();
            assert_eq!(h.then(&g), *s);
            assert!(c.h_group().contains(&h));
            assert!(c.g_group().contains(&g));
            let count = c
                .h_group()
                .elements()
                .iter()
                .filter(|hh| c.g_group().contains(&hh.inverse().then(s)))
                .count();
            assert_eq!(count, 1);
        }
        assert!(c.factor(&Perm::parse("(1 2)", 3).unwrap()).is_ok());
    }
}

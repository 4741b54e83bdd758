//! Synchronous letter-to-letter transducers and the orbit machines they
//! specialize to.
//!
//! Every machine here is invertible: at each state the output map on
//! letters is a bijection, so we store it as a `Perm` and that permutation
//! doubles as the state's label in rendered output. The machine reads an
//! infinite word letter by letter, emitting `x·(state perm)` and moving to
//! the next state; composition and inversion are the usual product and
//! reversal constructions on such machines.
//!
//! The orbit machine of a semiregular group H with transversal R has state
//! set H, emits `x·q` at state q, and always moves to h_x — the unique
//! element of H pushing x into R. Its start-at-identity instance is the
//! conjugator realizing V_n(HG) ≅ V_n(G).

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Perm, Transversal};
use crate::words::{EPPoint, Word};

#[derive(Clone, PartialEq, Eq)]
pub struct SyncTransducer {
    degree: u8,
    /// Output bijection of each state; doubles as its display label.
    states: Vec<Perm>,
    /// `next[state][input letter]` — the state entered after reading it.
    next: Vec<Vec<usize>>,
    start: usize,
}

impl SyncTransducer {
    pub fn new(
        degree: u8,
        states: Vec<Perm>,
        next: Vec<Vec<usize>>,
        start: usize,
    ) -> Result<SyncTransducer> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        if states.is_empty() {
            return Err(Error::BadTransducer("no states".into()));
        }
        if states.len() != next.len() || start >= states.len() {
            return Err(Error::BadTransducer("table shape".into()));
        }
        for q in &states {
            if q.degree() != degree {
                return Err(Error::DegreeMismatch(degree, q.degree()));
            }
        }
        for row in &next {
            if row.len() != degree as usize || row.iter().any(|&s| s >= states.len()) {
                return Err(Error::BadTransducer("bad transition row".into()));
            }
        }
        Ok(SyncTransducer { degree, states, next, start })
    }

    pub fn identity(degree: u8) -> SyncTransducer {
        SyncTransducer::from_letterwise(degree, &Perm::identity(degree))
    }

    /// One state applying `g` to every letter: the machine of `[∅]_g`.
    pub fn from_letterwise(degree: u8, g: &Perm) -> SyncTransducer {
        SyncTransducer {
            degree,
            states: vec![g.clone()],
            next: vec![vec![0; degree as usize]],
            start: 0,
        }
    }

    /// Two states: apply `p` to the first letter only — the machine of `⌊∅⌋_p`.
    pub fn from_depth_one(degree: u8, p: &Perm) -> SyncTransducer {
        SyncTransducer {
            degree,
            states: vec![p.clone(), Perm::identity(degree)],
            next: vec![vec![1; degree as usize]; 2],
            start: 0,
        }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn start_label(&self) -> &Perm {
        &self.states[self.start]
    }

    pub fn state_labels(&self) -> &[Perm] {
        &self.states
    }

    /// The same machine started at the first state carrying `label`.
    pub fn with_start(&self, label: &Perm) -> Result<SyncTransducer> {
        let start = self
            .states
            .iter()
            .position(|q| q == label)
            .ok_or_else(|| Error::NotInGroup(label.to_string()))?;
        let mut t = self.clone();
        t.start = start;
        Ok(t)
    }

    /// Left-to-right product machine: `self` feeds `other`.
    /// States are reachable pairs; labels multiply.
    pub fn compose(&self, other: &SyncTransducer) -> Result<SyncTransducer> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut index = std::collections::HashMap::new();
        let mut states = Vec::new();
        let mut next = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        index.insert((self.start, other.start), 0);
        states.push(self.states[self.start].then(&other.states[other.start]));
        next.push(vec![usize::MAX; self.degree as usize]);
        queue.push_back((self.start, other.start));
        while let Some((s1, s2)) = queue.pop_front() {
            let from = index[&(s1, s2)];
            for x in 0..self.degree {
                let y = self.states[s1].apply(x);
                let pair = (self.next[s1][x as usize], other.next[s2][y as usize]);
                let to = *index.entry(pair).or_insert_with(|| {
                    states.push(self.states[pair.0].then(&other.states[pair.1]));
                    next.push(vec![usize::MAX; self.degree as usize]);
                    queue.push_back(pair);
                    states.len() - 1
                });
                next[from][x as usize] = to;
            }
        }
        Ok(SyncTransducer { degree: self.degree, states, next, start: 0 })
    }

    /// The machine computing the inverse homeomorphism: each state's output
    /// map is inverted and the transition follows the preimage letter.
    pub fn inverse(&self) -> SyncTransducer {
        let states: Vec<Perm> = self.states.iter().map(Perm::inverse).collect();
        let next = self
            .states
            .iter()
            .zip(&self.next)
            .map(|(q, row)| {
                (0..self.degree)
                    .map(|y| row[q.inverse().apply(y) as usize])
                    .collect()
            })
            .collect();
        SyncTransducer { degree: self.degree, states, next, start: self.start }
    }

    /// Transforms a finite word, also reporting the state reached (the
    /// start state when the word is empty).
    pub fn apply_word(&self, w: &Word) -> (Word, Perm) {
        let mut state = self.start;
        let mut out = Vec::with_capacity(w.len());
        for &x in w.letters() {
            out.push(self.states[state].apply(x));
            state = self.next[state][x as usize];
        }
        (Word::from_letters(out), self.states[state].clone())
    }

    fn run(&self, from: usize, w: &Word) -> (Word, usize) {
        let mut state = from;
        let mut out = Vec::with_capacity(w.len());
        for &x in w.letters() {
            out.push(self.states[state].apply(x));
            state = self.next[state][x as usize];
        }
        (Word::from_letters(out), state)
    }

    /// Transforms an eventually periodic point. After the preperiod, the
    /// state at each period-block boundary eventually cycles (the machine
    /// is deterministic and the block fixed), which delimits the output
    /// period.
    pub fn apply_epp(&self, p: &EPPoint) -> EPPoint {
        let (mut pre_out, mut state) = self.run(self.start, p.preperiod());
        let period = p.period();
        let mut boundary_states = vec![state];
        let mut blocks: Vec<Word> = Vec::new();
        loop {
            let (block, next_state) = self.run(state, period);
            blocks.push(block);
            if let Some(k) = boundary_states.iter().position(|&s| s == next_state) {
                // blocks[..k] are preperiodic, blocks[k..] repeat forever
                let mut pre = pre_out.letters().to_vec();
                for b in &blocks[..k] {
                    pre.extend_from_slice(b.letters());
                }
                let mut per = Vec::new();
                for b in &blocks[k..] {
                    per.extend_from_slice(b.letters());
                }
                pre_out = Word::from_letters(pre);
                return EPPoint::new(pre_out, Word::from_letters(per))
                    .expect("period blocks are nonempty");
            }
            boundary_states.push(next_state);
            state = next_state;
        }
    }

    /// Whether both machines output the same on every word of length
    /// ≤ `max_len`. Walks reachable state pairs breadth-first, so the cost
    /// is bounded by the product of the state counts, not by n^max_len.
    pub fn agrees_on_words(&self, other: &SyncTransducer, max_len: usize) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let mut seen = HashSet::new();
        let mut frontier = vec![(self.start, other.start)];
        seen.insert((self.start, other.start));
        for _ in 0..max_len {
            let mut next_frontier = Vec::new();
            for (s1, s2) in frontier {
                if self.states[s1] != other.states[s2] {
                    return false;
                }
                for x in 0..self.degree as usize {
                    let pair = (self.next[s1][x], other.next[s2][x]);
                    if seen.insert(pair) {
                        next_frontier.push(pair);
                    }
                }
            }
            frontier = next_frontier;
            if frontier.is_empty() {
                return true;
            }
        }
        true
    }

    /// Whether both machines compute the same function on ALL words:
    /// the reachable part of the pair machine is a bisimulation.
    pub fn equivalent_to(&self, other: &SyncTransducer) -> bool {
        self.agrees_on_words(other, usize::MAX)
    }

    /// Node order (and hence layout) is fixed by sorting labels, so equal
    /// machines render byte-identically.
    pub fn to_dot(&self) -> String {
        let mut order: Vec<usize> = (0..self.states.len()).collect();
        order.sort_by_key(|&s| (self.states[s].to_string(), s));
        let mut out = String::from("digraph transducer {\n  rankdir=LR;\n");
        for &s in &order {
            let shape = if s == self.start { "doublecircle" } else { "circle" };
            out.push_str(&format!(
                "  q{s} [label=\"{}\", shape={shape}];\n",
                self.states[s]
            ));
        }
        for &s in &order {
            for x in 0..self.degree {
                out.push_str(&format!(
                    "  q{s} -> q{} [label=\"{}/{}\"];\n",
                    self.next[s][x as usize],
                    x + 1,
                    self.states[s].apply(x) + 1,
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dto = TransducerJson {
            n: self.degree,
            states: self.states.iter().map(|q| q.to_string()).collect(),
            start: self.start,
            delta: (0..self.states.len())
                .flat_map(|s| {
                    (0..self.degree).map(move |x| DeltaJson {
                        state: s,
                        input: x + 1,
                        out: self.states[s].apply(x) + 1,
                        next: self.next[s][x as usize],
                    })
                })
                .collect(),
        };
        serde_json::to_value(dto).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SyncTransducer> {
        let dto: TransducerJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse(format!("transducer json: {e}")))?;
        let states = dto
            .states
            .iter()
            .map(|s| Perm::parse(s, dto.n))
            .collect::<Result<Vec<_>>>()?;
        let mut next = vec![vec![usize::MAX; dto.n as usize]; states.len()];
        for d in &dto.delta {
            if d.state >= states.len() || d.input == 0 || d.input > dto.n {
                return Err(Error::BadTransducer(format!(
                    "delta entry out of range: state {} input {}",
                    d.state, d.input
                )));
            }
            let x = d.input - 1;
            if states[d.state].apply(x) + 1 != d.out {
                return Err(Error::BadTransducer(format!(
                    "output {} at state {} contradicts its label {}",
                    d.out, d.state, states[d.state]
                )));
            }
            next[d.state][x as usize] = d.next;
        }
        if next.iter().any(|row| row.iter().any(|&s| s == usize::MAX)) {
            return Err(Error::BadTransducer("missing delta entries".into()));
        }
        SyncTransducer::new(dto.n, states, next, dto.start)
    }
}

impl fmt::Debug for SyncTransducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SyncTransducer(n={}, {} states, start q{})",
            self.degree,
            self.states.len(),
            self.start
        )
    }
}

#[derive(Serialize, Deserialize)]
struct TransducerJson {
    n: u8,
    states: Vec<String>,
    start: usize,
    delta: Vec<DeltaJson>,
}

#[derive(Serialize, Deserialize)]
struct DeltaJson {
    state: usize,
    #[serde(rename = "in")]
    input: u8,
    out: u8,
    next: usize,
}

/// The machine `A_{H,R,h}`: states are the elements of the semiregular
/// group, reading x at state q emits x·q and moves to h_x regardless of q.
#[derive(Clone, Debug)]
pub struct OrbitTransducer {
    machine: SyncTransducer,
    transversal: Transversal,
}

impl OrbitTransducer {
    pub fn new(transversal: &Transversal, start: &Perm) -> Result<OrbitTransducer> {
        let group = transversal.group();
        let states = group.elements().to_vec();
        let start_index = states
            .binary_search(start)
            .map_err(|_| Error::NotInGroup(start.to_string()))?;
        let degree = group.degree();
        let next: Vec<Vec<usize>> = states
            .iter()
            .map(|_| {
                (0..degree)
                    .map(|x| {
                        states
                            .binary_search(transversal.h_map(x))
                            .expect("h_x lies in the group")
                    })
                    .collect()
            })
            .collect();
        Ok(OrbitTransducer {
            machine: SyncTransducer::new(degree, states, next, start_index)?,
            transversal: transversal.clone(),
        })
    }

    pub fn machine(&self) -> &SyncTransducer {
        &self.machine
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn inverse(&self) -> SyncTransducer {
        self.machine.inverse()
    }
}

//! Solution-sets, set-level search spaces and the replacement, insertion and
//! deletion neighborhoods.
//!
//! Members are kept sorted lexicographically by bit string; set identity is
//! identity of the bit strings, so two members may share objective values.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::landscape::{ObjectiveVector, RhoMnkInstance, Solution};
use crate::pareto::{self, ReferencePoint};

/// Tries before the replacement sampler falls back to enumerating valid moves.
const REJECTION_TRIES: usize = 64;

/// The set-level search spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpaceKind {
    /// `|A| = mu`
    FixedSize(usize),
    /// `|A| <= mu`
    Bounded(usize),
    /// no member dominates another
    MutuallyNondominated,
    /// both of the above
    BoundedNondominated(usize),
    Unrestricted,
}

/// Swap member `member` (index in sorted order) for its copy with `bit` flipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReplacementMove {
    pub member: usize,
    pub bit: usize,
}

#[derive(Debug, Clone)]
pub struct SolutionSet {
    members: Vec<Solution>,
    objectives: Vec<ObjectiveVector>,
    fitness: Option<f64>,
}

impl PartialEq for SolutionSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for SolutionSet {}

/// Hypervolume against the origin.
pub fn set_fitness<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let m = points.first().map_or(0, |p| p.as_ref().len());
    // instance objectives are in [0, 1), so the origin is always a valid reference
    pareto::hypervolume(points, &ReferencePoint::origin(m)).expect("objectives lie above the origin")
}

impl SolutionSet {
    /// Evaluates and sorts `members`. Rejects duplicates and wrong lengths.
    pub fn from_solutions(instance: &RhoMnkInstance, mut members: Vec<Solution>) -> Result<Self> {
        members.sort();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("solution-set members must be distinct".into()));
        }
        let objectives = members
            .iter()
            .map(|s| instance.evaluate(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            members,
            objectives,
            fitness: None,
        })
    }

    pub fn empty() -> Self {
        Self {
            members: Vec::new(),
            objectives: Vec::new(),
            fitness: None,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn objectives(&self) -> &[ObjectiveVector] {
        &self.objectives
    }

    pub fn contains(&self, s: &Solution) -> bool {
        self.members.binary_search(s).is_ok()
    }

    /// Cached hypervolume if present, computed otherwise.
    pub fn fitness(&self) -> f64 {
        self.fitness.unwrap_or_else(|| set_fitness(&self.objectives))
    }

    pub fn cached_fitness(&self) -> Option<f64> {
        self.fitness
    }

    pub fn evaluate_fitness(&mut self) -> f64 {
        let f = self.fitness();
        self.fitness = Some(f);
        f
    }

    pub fn target(&self, mv: ReplacementMove) -> Solution {
        self.members[mv.member].flipped(mv.bit)
    }

    /// A move is valid when the flipped string is not already a member.
    pub fn is_valid_move(&self, mv: ReplacementMove) -> bool {
        !self.contains(&self.target(mv))
    }

    /// Objective vector of the incoming member and the neighbor's hypervolume,
    /// without building the neighbor set.
    pub fn replacement_fitness(
        &self,
        instance: &RhoMnkInstance,
        mv: ReplacementMove,
    ) -> (ObjectiveVector, f64) {
        let incoming = instance
            .evaluate_flip(&self.members[mv.member], mv.bit, &self.objectives[mv.member])
            .expect("members match the instance length");
        let points: Vec<&[f64]> = self
            .objectives
            .iter()
            .enumerate()
            .map(|(i, o)| if i == mv.member { &incoming[..] } else { &o[..] })
            .collect();
        let f = set_fitness(&points);
        (incoming, f)
    }

    /// The neighbor reached by a valid move, with `incoming = evaluate(target)`.
    pub fn replaced(
        &self,
        mv: ReplacementMove,
        incoming: ObjectiveVector,
        fitness: Option<f64>,
    ) -> SolutionSet {
        let target = self.target(mv);
        let mut members = self.members.clone();
        let mut objectives = self.objectives.clone();
        members.remove(mv.member);
        objectives.remove(mv.member);
        let pos = members
            .binary_search(&target)
            .expect_err("replacement target must not already be a member");
        members.insert(pos, target);
        objectives.insert(pos, incoming);
        SolutionSet {
            members,
            objectives,
            fitness,
        }
    }

    /// Applies a move, evaluating the new member incrementally.
    pub fn apply_replacement(
        &self,
        instance: &RhoMnkInstance,
        mv: ReplacementMove,
    ) -> Result<SolutionSet> {
        if mv.member >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: mv.member,
                len: self.len(),
            });
        }
        if mv.bit >= instance.n() {
            return Err(Error::IndexOutOfRange {
                index: mv.bit,
                len: instance.n(),
            });
        }
        if !self.is_valid_move(mv) {
            return Err(Error::InvalidParams(format!(
                "move {mv:?} collides with an existing member"
            )));
        }
        let incoming =
            instance.evaluate_flip(&self.members[mv.member], mv.bit, &self.objectives[mv.member])?;
        Ok(self.replaced(mv, incoming, None))
    }

    fn with_member(&self, instance: &RhoMnkInstance, s: Solution) -> SolutionSet {
        let objective = instance.evaluate(&s).expect("neighbor has the instance length");
        let pos = self.members.binary_search(&s).unwrap_err();
        let mut next = SolutionSet {
            members: self.members.clone(),
            objectives: self.objectives.clone(),
            fitness: None,
        };
        next.members.insert(pos, s);
        next.objectives.insert(pos, objective);
        next
    }

    fn without_member(&self, index: usize) -> SolutionSet {
        let mut next = SolutionSet {
            members: self.members.clone(),
            objectives: self.objectives.clone(),
            fitness: None,
        };
        next.members.remove(index);
        next.objectives.remove(index);
        next
    }
}

pub fn member_of(kind: SearchSpaceKind, set: &SolutionSet) -> bool {
    let mutually_nondominated = || {
        let objs = set.objectives();
        objs.iter().all(|a| {
            objs.iter()
                .all(|b| !pareto::dominates(a, b).unwrap_or(false))
        })
    };
    match kind {
        SearchSpaceKind::FixedSize(mu) => set.len() == mu,
        SearchSpaceKind::Bounded(mu) => set.len() <= mu,
        SearchSpaceKind::MutuallyNondominated => mutually_nondominated(),
        SearchSpaceKind::BoundedNondominated(mu) => set.len() <= mu && mutually_nondominated(),
        SearchSpaceKind::Unrestricted => true,
    }
}

/// `mu` distinct uniformly random solutions.
pub fn random_set<R: Rng + ?Sized>(
    instance: &RhoMnkInstance,
    mu: usize,
    rng: &mut R,
) -> Result<SolutionSet> {
    let n = instance.n();
    let space = if n < 64 { Some(1u64 << n) } else { None };
    if let Some(size) = space {
        if mu as u64 > size {
            return Err(Error::InfeasibleCardinality { mu, n });
        }
        // dense draws: sample indices without replacement
        if n <= 24 && (mu as u64) * 2 > size {
            let members = index::sample(rng, size as usize, mu)
                .into_iter()
                .map(|i| Solution::from_index(n, i as u64))
                .collect();
            return SolutionSet::from_solutions(instance, members);
        }
    }
    let mut chosen = BTreeSet::new();
    while chosen.len() < mu {
        chosen.insert(Solution::random(n, rng));
    }
    SolutionSet::from_solutions(instance, chosen.into_iter().collect())
}

/// Every valid replacement move, in (member, bit) order.
pub fn replacement_moves<'a>(
    set: &'a SolutionSet,
    n: usize,
) -> impl Iterator<Item = ReplacementMove> + 'a {
    (0..set.len())
        .flat_map(move |member| (0..n).map(move |bit| ReplacementMove { member, bit }))
        .filter(move |&mv| set.is_valid_move(mv))
}

/// A uniformly random valid replacement move.
pub fn sample_replacement_move<R: Rng + ?Sized>(
    set: &SolutionSet,
    n: usize,
    rng: &mut R,
) -> Result<ReplacementMove> {
    if set.is_empty() || n == 0 {
        return Err(Error::ExhaustedNeighborhood);
    }
    for _ in 0..REJECTION_TRIES {
        let mv = ReplacementMove {
            member: rng.random_range(0..set.len()),
            bit: rng.random_range(0..n),
        };
        if set.is_valid_move(mv) {
            return Ok(mv);
        }
    }
    // rare: most of the grid collides, so pick among the valid moves directly
    let valid: Vec<ReplacementMove> = replacement_moves(set, n).collect();
    if valid.is_empty() {
        return Err(Error::ExhaustedNeighborhood);
    }
    Ok(valid[rng.random_range(0..valid.len())])
}

pub fn sample_replacement_neighbor<R: Rng + ?Sized>(
    instance: &RhoMnkInstance,
    set: &SolutionSet,
    rng: &mut R,
) -> Result<SolutionSet> {
    let mv = sample_replacement_move(set, instance.n(), rng)?;
    set.apply_replacement(instance, mv)
}

pub fn enumerate_replacement_neighbors<'a>(
    instance: &'a RhoMnkInstance,
    set: &'a SolutionSet,
) -> impl Iterator<Item = SolutionSet> + 'a {
    replacement_moves(set, instance.n()).map(move |mv| {
        set.apply_replacement(instance, mv)
            .expect("enumerated moves are valid")
    })
}

/// `A ∪ {s'}` for every bit-flip neighbor `s'` of a member that is not
/// already in `A`, each distinct set once, filtered by `kind`.
pub fn insertion_neighbors(
    instance: &RhoMnkInstance,
    set: &SolutionSet,
    kind: Option<SearchSpaceKind>,
) -> Vec<SolutionSet> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in set.members() {
        for bit in 0..instance.n() {
            let candidate = s.flipped(bit);
            if set.contains(&candidate) || !seen.insert(candidate.clone()) {
                continue;
            }
            let next = set.with_member(instance, candidate);
            if kind.is_none_or(|k| member_of(k, &next)) {
                out.push(next);
            }
        }
    }
    out
}

/// `A \ {s}` for every member `s`, filtered by `kind`.
pub fn deletion_neighbors(set: &SolutionSet, kind: Option<SearchSpaceKind>) -> Vec<SolutionSet> {
    (0..set.len())
        .map(|i| set.without_member(i))
        .filter(|next| kind.is_none_or(|k| member_of(k, next)))
        .collect()
}

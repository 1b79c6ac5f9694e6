use std::collections::BTreeSet;

use rhomnk::rng::RandomStream;
use rhomnk::setspace::{
    enumerate_replacement_neighbors, member_of, random_set, sample_replacement_neighbor,
    SearchSpaceKind,
};
use rhomnk::{InstanceParams, RhoMnkInstance, Solution, SolutionSet};

fn key(set: &SolutionSet) -> Vec<String> {
    set.members().iter().map(|s| s.to_string()).collect()
}

fn all_pairs(inst: &RhoMnkInstance) -> Vec<SolutionSet> {
    let n = inst.n();
    let space = 1u64 << n;
    let mut out = Vec::new();
    for a in 0..space {
        for b in a + 1..space {
            let members = vec![Solution::from_index(n, a), Solution::from_index(n, b)];
            out.push(SolutionSet::from_solutions(inst, members).unwrap());
        }
    }
    out
}

/// Neighbors from the definition: same size, exactly one member differs,
/// and the swapped members are at Hamming distance one.
fn brute_force_neighbors(a: &SolutionSet, universe: &[SolutionSet]) -> BTreeSet<Vec<String>> {
    universe
        .iter()
        .filter(|b| {
            let left: Vec<&Solution> = a.members().iter().filter(|s| !b.contains(s)).collect();
            let right: Vec<&Solution> = b.members().iter().filter(|s| !a.contains(s)).collect();
            left.len() == 1 && right.len() == 1 && left[0].hamming(right[0]) == 1
        })
        .map(key)
        .collect()
}

#[test]
fn enumeration_and_sampling_match_definition() {
    let inst = RhoMnkInstance::generate(InstanceParams::new(4, 2, 1, 0.0, 1)).unwrap();
    let universe = all_pairs(&inst);
    assert_eq!(universe.len(), 120);
    let mut rng = RandomStream::from_seed(2);
    for a in universe.iter().step_by(7) {
        let enumerated: Vec<Vec<String>> =
            enumerate_replacement_neighbors(&inst, a).map(|b| key(&b)).collect();
        let unique: BTreeSet<Vec<String>> = enumerated.iter().cloned().collect();
        assert_eq!(unique.len(), enumerated.len(), "enumeration repeats a neighbor");
        assert_eq!(unique, brute_force_neighbors(a, &universe));
        assert!(enumerated.len() <= a.len() * inst.n());

        let mut sampled = BTreeSet::new();
        for _ in 0..400 {
            sampled.insert(key(&sample_replacement_neighbor(&inst, a, &mut rng).unwrap()));
        }
        assert_eq!(sampled, unique);
    }
}

#[test]
fn replacement_neighborhood_is_symmetric() {
    let inst = RhoMnkInstance::generate(InstanceParams::new(4, 2, 1, 0.0, 1)).unwrap();
    for a in all_pairs(&inst) {
        for b in enumerate_replacement_neighbors(&inst, &a) {
            assert!(
                enumerate_replacement_neighbors(&inst, &b).any(|c| c == a),
                "{:?} -> {:?} has no way back",
                key(&a),
                key(&b)
            );
        }
    }
}

#[test]
fn neighbors_stay_in_fixed_size_space_and_differ_in_one_slot() {
    let inst = RhoMnkInstance::generate(InstanceParams::new(20, 3, 3, 0.2, 4)).unwrap();
    let mut rng = RandomStream::from_seed(4);
    let a = random_set(&inst, 10, &mut rng).unwrap();
    let kind = SearchSpaceKind::FixedSize(10);
    assert!(member_of(kind, &a));
    for b in enumerate_replacement_neighbors(&inst, &a) {
        assert!(member_of(kind, &b));
        let removed: Vec<_> = a
            .members()
            .iter()
            .zip(a.objectives())
            .filter(|(s, _)| !b.contains(s))
            .collect();
        let added: Vec<_> = b
            .members()
            .iter()
            .zip(b.objectives())
            .filter(|(s, _)| !a.contains(s))
            .collect();
        assert_eq!((removed.len(), added.len()), (1, 1));
        assert_ne!(removed[0].1, added[0].1);
        assert_eq!(removed[0].0.hamming(added[0].0), 1);
    }
}

#[test]
fn random_set_draws_distinct_members_deterministically() {
    let inst = RhoMnkInstance::generate(InstanceParams::new(64, 2, 2, 0.0, 4)).unwrap();
    let a = random_set(&inst, 100, &mut RandomStream::from_seed(5)).unwrap();
    let b = random_set(&inst, 100, &mut RandomStream::from_seed(5)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 100);
    let small = RhoMnkInstance::generate(InstanceParams::new(6, 1, 1, 0.0, 4)).unwrap();
    let c = random_set(&small, 50, &mut RandomStream::from_seed(6)).unwrap();
    assert_eq!(c.len(), 50);
}

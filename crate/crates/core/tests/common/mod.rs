#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use crnx::graph::{self, ReactionGraph};
use crnx::invariants;
use crnx::oracle;
use crnx::io::parse_crn;
use crnx::model::{Complex, ReactionNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIXTURES: &[&str] = &[
    "dimer_switch",
    "conserved_pair",
    "growth_loop",
    "leaky_pair",
    "envz_ompr",
    "wide_absorbing",
    "inadmissible_only",
    "flow_condition",
    "catalyst_gap",
    "catalyst_cycle",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.crn"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> ReactionNetwork {
    parse_crn(&fixture_text(name)).unwrap().network
}

pub fn complex_idx(net: &ReactionNetwork, text: &str) -> usize {
    let c = crnx::io::parse_complex(text, net).unwrap();
    net.complex_index(&c).unwrap_or_else(|| panic!("no complex {text}"))
}

pub fn names(net: &ReactionNetwork, idx: impl IntoIterator<Item = usize>) -> Vec<String> {
    idx.into_iter().map(|i| net.complex_name(i)).collect()
}

/// Complexes that are not terminal in the reaction graph, ascending.
pub fn nonterminal(net: &ReactionNetwork) -> Vec<usize> {
    let t = graph::terminal_complexes(&ReactionGraph::of_network(net));
    (0..net.complex_count()).filter(|c| !t.contains(c)).collect()
}

pub fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

pub fn is_subconservative(net: &ReactionNetwork) -> bool {
    invariants::is_subconservative(&net.stoich_matrix())
        .unwrap()
        .is_feasible()
}

/// Random network with at most `max_species` species, at most
/// `max_reactions` reactions and coefficients at most `max_coeff`. Half the
/// draws use sparse complexes, often add a shared catalyst, mostly keep a random positive weight fixed
/// along each reaction and add reverse reactions, so recurrence outside the
/// terminal classes shows up often enough to matter.
pub fn random_network(rng: &mut ChaCha8Rng, max_species: usize, max_reactions: usize, max_coeff: u64) -> ReactionNetwork {
    let m = rng.gen_range(1..=max_species);
    let r = rng.gen_range(1..=max_reactions);
    let names: Vec<String> = (1..=m).map(|i| format!("X{i}")).collect();
    let weighted = rng.gen_bool(0.5);
    let w: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=2)).collect();
    let mass = |c: &Complex| c.coeffs().iter().zip(&w).map(|(a, b)| a * b).sum::<u64>();
    let complex = |rng: &mut ChaCha8Rng| {
        Complex::new(
            (0..m)
                .map(|_| if weighted && rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..=max_coeff) })
                .collect(),
        )
    };
    let mut reactions: Vec<(Complex, Complex)> = Vec::new();
    let mut tries = 0;
    while reactions.len() < r && tries < 1000 {
        tries += 1;
        let mut s = complex(rng);
        let mut t = complex(rng);
        if weighted && rng.gen_bool(0.4) {
            // shared catalyst on both sides
            let k = rng.gen_range(0..m);
            let bump = |c: &Complex| {
                let mut v = c.coeffs().to_vec();
                v[k] = (v[k] + 1).min(max_coeff);
                Complex::new(v)
            };
            s = bump(&s);
            t = bump(&t);
        }
        if t == s || reactions.contains(&(s.clone(), t.clone())) {
            continue;
        }
        if weighted && (mass(&t) > mass(&s) || (mass(&t) < mass(&s) && rng.gen_bool(0.8))) {
            continue;
        }
        let rev = weighted && mass(&t) == mass(&s) && rng.gen_bool(0.6);
        reactions.push((s.clone(), t.clone()));
        if rev && reactions.len() < r && !reactions.contains(&(t.clone(), s.clone())) {
            reactions.push((t, s));
        }
    }
    if reactions.is_empty() {
        let mut c = vec![0; m];
        c[0] = 1;
        reactions.push((Complex::new(c), Complex::zero(m)));
    }
    ReactionNetwork::from_complexes(&names, reactions).unwrap()
}

/// Complexes recurrent from at least one state with total at most `budget`.
pub fn recurrent_somewhere(net: &ReactionNetwork, budget: u64) -> Vec<bool> {
    let mut rec = vec![false; net.complex_count()];
    for root in oracle::states_with_total_at_most(net.species_count(), budget) {
        let g = oracle::explore(net, &root, 200_000).unwrap();
        for (c, b) in oracle::recurrent_complexes(net, &g).into_iter().enumerate() {
            rec[c] |= b;
        }
    }
    rec
}

/// Deterministic suite of `count` subconservative random networks. At least
/// a quarter have a nonterminal complex that is recurrent from some state
/// with total at most 5; plain draws rarely do.
pub fn random_suite(seed: u64, count: usize) -> Vec<ReactionNetwork> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quota = count / 4;
    let mut lively = Vec::new();
    let mut plain = Vec::new();
    while lively.len() < quota || plain.len() < count - quota {
        let net = random_network(&mut rng, 4, 6, 2);
        if !is_subconservative(&net) {
            continue;
        }
        let rec = recurrent_somewhere(&net, 5);
        if nonterminal(&net).iter().any(|&c| rec[c]) {
            if lively.len() < quota {
                lively.push(net);
            }
        } else if plain.len() < count - quota {
            plain.push(net);
        }
    }
    lively.into_iter().chain(plain).collect()
}

use std::collections::HashMap;

use super::*;
use crate::config::SimConfig;
use crate::nations_league::LeagueEntry;
use crate::rng::RandomStream;
use crate::team::{TeamRecord, TeamSet};

/// Overall ranking where team `i` sits at position `i + 1` and the first four
/// of every league block are group winners.
fn identity_season() -> (OverallRanking, [LeagueRanking; 4]) {
    let positions = std::array::from_fn(|i| TeamId(i as u8));
    let winners: Vec<TeamId> = Tier::ALL
        .iter()
        .flat_map(|t| (0..4).map(move |k| TeamId(t.first_rank() - 1 + k)))
        .collect();
    let overall = OverallRanking::new(positions, &winners);
    let rankings = Tier::ALL.map(|tier| LeagueRanking {
        tier,
        entries: (0..tier.size() as u8)
            .map(|k| LeagueEntry {
                team: TeamId(tier.first_rank() - 1 + k),
                position: k + 1,
                group_winner: k < 4,
            })
            .collect(),
    });
    (overall, rankings)
}

/// Teams at the given 1-based overall positions of the identity season.
fn at(positions: impl IntoIterator<Item = u8>) -> Vec<TeamId> {
    positions.into_iter().map(|p| TeamId(p - 1)).collect()
}

fn entrant(position: u8) -> PlayoffEntrant {
    let tier = Tier::of_rank(position);
    PlayoffEntrant {
        team: TeamId(position - 1),
        source_league: tier,
        league: tier,
        is_group_winner: position - tier.first_rank() < 4,
        overall_position: position,
    }
}

fn entrants(positions: &[u8]) -> Vec<PlayoffEntrant> {
    assert_eq!(positions.len(), ENTRANTS);
    positions.iter().map(|&p| entrant(p)).collect()
}

fn positions_of(selected: &[PlayoffEntrant], source: Tier) -> Vec<u8> {
    selected
        .iter()
        .filter(|e| e.source_league == source)
        .map(|e| e.overall_position)
        .collect()
}

#[test]
fn selection_base_case_takes_all_group_winners() {
    let (overall, rankings) = identity_season();
    let direct = at((5..=12).chain(17..=24).chain(29..=32));
    let selected = select_playoff_teams(&overall, &rankings, &direct).unwrap();
    assert_eq!(selected.len(), ENTRANTS);
    assert!(selected
        .iter()
        .all(|e| e.is_group_winner && e.source_league == e.league));
    assert_eq!(positions_of(&selected, Tier::D), [40, 41, 42, 43]);
}

#[test]
fn qualified_group_winners_are_replaced_from_their_league() {
    let (overall, rankings) = identity_season();
    let direct = at((1..=4).chain(17..=24).chain(29..=36));
    let selected = select_playoff_teams(&overall, &rankings, &direct).unwrap();
    assert_eq!(positions_of(&selected, Tier::A), [5, 6, 7, 8]);
    assert!(selected
        .iter()
        .filter(|e| e.source_league == Tier::A)
        .all(|e| !e.is_group_winner && e.league == Tier::A));
}

#[test]
fn short_quota_cascades_to_the_next_league_with_spares() {
    let (overall, rankings) = identity_season();
    // League A keeps 10, 11, 12; League B only its four group winners.
    let direct = at((1..=9).chain(17..=24).chain(29..=31));
    let selected = select_playoff_teams(&overall, &rankings, &direct).unwrap();
    assert_eq!(positions_of(&selected, Tier::A), [10, 11, 12, 32]);
    assert_eq!(positions_of(&selected, Tier::B), [13, 14, 15, 16]);
    assert_eq!(positions_of(&selected, Tier::C), [25, 26, 27, 28]);
    let cascaded = selected.iter().find(|e| e.overall_position == 32).unwrap();
    assert_eq!(
        (cascaded.league, cascaded.source_league),
        (Tier::C, Tier::A)
    );
}

#[test]
fn exhausted_bottom_league_borrows_upwards() {
    let (overall, rankings) = identity_season();
    // Thirteen League D teams qualify directly.
    let direct = at((1..=7).chain(40..=52));
    let selected = select_playoff_teams(&overall, &rankings, &direct).unwrap();
    assert_eq!(positions_of(&selected, Tier::D), [53, 54, 55, 29]);
    assert_eq!(positions_of(&selected, Tier::A), [8, 9, 10, 11]);
}

#[test]
fn selection_rejects_wrong_direct_count() {
    let (overall, rankings) = identity_season();
    assert_eq!(
        select_playoff_teams(&overall, &rankings, &at(1..=19)),
        Err(PlayoffError::DirectCount(19))
    );
}

#[test]
fn single_league_quotas_become_paths() {
    let quartets = entrants(&[5, 6, 7, 8, 13, 14, 15, 16, 25, 26, 27, 28, 40, 41, 42, 43]);
    let mut rng = RandomStream::new(1, 0);
    let formation = form_paths_regular(&quartets, &mut rng);
    assert_eq!(formation.relaxed_group_winners, 0);
    for (path, tier) in formation.paths.iter().zip(Tier::ALL) {
        assert!(path.entrants.iter().all(|e| e.league == tier));
    }
}

/// Every partition of 16 items into four unordered blocks of four.
fn for_each_partition(mut visit: impl FnMut(&[[usize; 4]; 4])) {
    fn go(left: u16, blocks: &mut Vec<[usize; 4]>, visit: &mut dyn FnMut(&[[usize; 4]; 4])) {
        if left == 0 {
            visit(&blocks.clone().try_into().unwrap());
            return;
        }
        let first = left.trailing_zeros() as usize;
        let rest: Vec<usize> = (first + 1..16).filter(|&i| left & (1 << i) != 0).collect();
        for a in 0..rest.len() {
            for b in a + 1..rest.len() {
                for c in b + 1..rest.len() {
                    let block = [first, rest[a], rest[b], rest[c]];
                    let mask = block.iter().fold(0u16, |m, &i| m | (1 << i));
                    blocks.push(block);
                    go(left & !mask, blocks, visit);
                    blocks.pop();
                }
            }
        }
    }
    go(u16::MAX, &mut Vec::new(), &mut visit);
}

/// Independent statement of the regular policy's rules: `None` if a league
/// with four or more entrants lacks a path of its own, else the number of
/// group winners sharing a path with a team from a higher-ranked league.
fn oracle_cost(items: &[PlayoffEntrant], blocks: &[[usize; 4]; 4]) -> Option<usize> {
    for tier in Tier::ALL {
        let count = items.iter().filter(|e| e.league == tier).count();
        let own = blocks
            .iter()
            .any(|b| b.iter().all(|&i| items[i].league == tier));
        if count >= 4 && !own {
            return None;
        }
    }
    let mut cost = 0;
    for block in blocks {
        for &i in block {
            let gw = &items[i];
            if gw.is_group_winner && block.iter().any(|&j| items[j].league < gw.league) {
                cost += 1;
            }
        }
    }
    Some(cost)
}

struct Enumeration {
    min_cost: usize,
    count: u64,
    /// For each pair `(i, j)`, the number of cheapest arrangements placing them together.
    together: HashMap<(usize, usize), u64>,
}

fn enumerate(items: &[PlayoffEntrant]) -> Enumeration {
    let mut best = Enumeration {
        min_cost: usize::MAX,
        count: 0,
        together: HashMap::new(),
    };
    for_each_partition(|blocks| {
        let Some(cost) = oracle_cost(items, blocks) else {
            return;
        };
        if cost > best.min_cost {
            return;
        }
        if cost < best.min_cost {
            best = Enumeration {
                min_cost: cost,
                count: 0,
                together: HashMap::new(),
            };
        }
        best.count += 1;
        for block in blocks {
            for &i in block {
                for &j in block {
                    if i < j {
                        *best
                            .together
                            .entry((items[i].team.index(), items[j].team.index()))
                            .or_default() += 1;
                    }
                }
            }
        }
    });
    best
}

/// Compares the regular sampler against exhaustive enumeration: same minimal
/// cost, same arrangement count, and pair co-membership frequencies within
/// `tol` of the exact shares.
fn check_against_enumeration(items: &[PlayoffEntrant], draws: usize, tol: f64) -> Enumeration {
    let exact = enumerate(items);
    assert_eq!(
        admissible_arrangements(items),
        (exact.min_cost, exact.count),
        "DP count disagrees with enumeration"
    );
    let mut rng = RandomStream::new(77, 0);
    let mut together: HashMap<(usize, usize), u64> = HashMap::new();
    for _ in 0..draws {
        let formation = form_paths_regular(items, &mut rng);
        assert_eq!(formation.relaxed_group_winners as usize, exact.min_cost);
        assert_eq!(arrangement_cost(&formation.paths), Some(exact.min_cost));
        for path in &formation.paths {
            for a in &path.entrants {
                for b in &path.entrants {
                    if a.team < b.team {
                        *together
                            .entry((a.team.index(), b.team.index()))
                            .or_default() += 1;
                    }
                }
            }
        }
    }
    for (pair, &n) in &exact.together {
        let p = n as f64 / exact.count as f64;
        let f = together.get(pair).copied().unwrap_or(0) as f64 / draws as f64;
        assert!((p - f).abs() < tol, "pair {pair:?}: exact {p}, sampled {f}");
    }
    for pair in together.keys() {
        assert!(
            exact.together.contains_key(pair),
            "sampled inadmissible pair {pair:?}"
        );
    }
    exact
}

#[test]
fn cascaded_league_b_team_joins_the_a_path_by_enumeration() {
    // League A supplies three entrants; the B non-winners 17, 18, 19 include
    // one that filled the A quota. B winners 13 and 14 may not face A teams.
    let mut items = entrants(&[
        4, 10, 11, 13, 14, 17, 18, 19, 25, 26, 27, 28, 40, 41, 42, 43,
    ]);
    items[7].source_league = Tier::A;
    let exact = check_against_enumeration(&items, 30_000, 0.015);
    assert_eq!((exact.min_cost, exact.count), (0, 3));
    // Each of 17, 18, 19 joins the A path in one of the three arrangements.
    assert_eq!(exact.together[&(3, 16)], 1);
    assert!(!exact.together.contains_key(&(3, 12)));
}

#[test]
fn mixed_paths_match_enumeration() {
    // Two A teams, six B teams (two winners), four C and four D winners.
    let items = entrants(&[
        10, 11, 13, 14, 17, 18, 19, 20, 25, 26, 27, 28, 40, 41, 42, 43,
    ]);
    let exact = check_against_enumeration(&items, 30_000, 0.015);
    assert_eq!((exact.min_cost, exact.count), (0, 6));

    // C non-winners cascaded into A and B quotas, mixed winner counts.
    let items = entrants(&[
        11, 12, 16, 21, 22, 26, 27, 31, 33, 35, 37, 41, 43, 47, 48, 50,
    ]);
    check_against_enumeration(&items, 30_000, 0.015);
}

#[test]
fn contradiction_is_relaxed_minimally() {
    // Only three League D teams are left, all group winners: whoever joins
    // them comes from a higher league.
    let items = entrants(&[5, 6, 7, 8, 13, 14, 15, 16, 25, 26, 27, 28, 29, 40, 41, 42]);
    let exact = check_against_enumeration(&items, 20_000, 0.02);
    assert_eq!(exact.min_cost, 3);
    assert_eq!(exact.count, 5);
}

#[test]
fn random_paths_are_uniform_partitions() {
    let items = entrants(&[5, 6, 7, 8, 13, 14, 15, 16, 25, 26, 27, 28, 40, 41, 42, 43]);
    let mut rng = RandomStream::new(2, 0);
    let n = 100_000;
    let (mut together, mut d_meets_a) = (0u32, 0u32);
    for _ in 0..n {
        let formation = form_paths_random(&items, &mut rng);
        let mut seen: Vec<TeamId> = formation
            .paths
            .iter()
            .flat_map(|p| p.entrants.map(|e| e.team))
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), ENTRANTS);
        let path_of = |team: TeamId| {
            formation
                .paths
                .iter()
                .position(|p| p.contains(team))
                .unwrap()
        };
        if path_of(TeamId(4)) == path_of(TeamId(41)) {
            together += 1;
        }
        let d_path = path_of(TeamId(39));
        if formation.paths[d_path]
            .entrants
            .iter()
            .any(|e| e.league == Tier::A)
        {
            d_meets_a += 1;
        }
    }
    // A fixed pair shares a path with probability 3/15.
    assert!((together as f64 / n as f64 - 0.2).abs() < 0.01);
    assert!(d_meets_a > 0);
}

#[test]
fn random_paths_draw_pairings_and_hosts() {
    let items = entrants(&[5, 6, 7, 8, 13, 14, 15, 16, 25, 26, 27, 28, 40, 41, 42, 43]);
    let mut rng = RandomStream::new(4, 0);
    let n = 60_000;
    let (mut hosts, mut meets_best) = (0u32, 0u32);
    for _ in 0..n {
        let formation = form_paths_random(&items, &mut rng);
        let path = formation
            .paths
            .iter()
            .find(|p| p.contains(TeamId(42)))
            .unwrap();
        let slot = path
            .entrants
            .iter()
            .position(|e| e.team == TeamId(42))
            .unwrap();
        let opponent = path.entrants[3 - slot];
        hosts += (slot < 2) as u32;
        let best = path
            .entrants
            .iter()
            .map(|e| e.overall_position)
            .min()
            .unwrap();
        meets_best += (opponent.overall_position == best) as u32;
    }
    assert!((hosts as f64 / n as f64 - 0.5).abs() < 0.01);
    // The bottom-ranked entrant is never the best in its path: each of the
    // three others is its semifinal opponent with probability 1/3.
    assert!((meets_best as f64 / n as f64 - 1.0 / 3.0).abs() < 0.01);
}

#[test]
fn seeded_paths_take_one_team_per_quartile() {
    let items = entrants(&[5, 6, 7, 8, 13, 14, 15, 16, 25, 26, 27, 28, 40, 41, 42, 43]);
    let mut rng = RandomStream::new(3, 0);
    let n = 100_000;
    let mut pairing = 0u32;
    for _ in 0..n {
        let formation = form_paths_seeded(&items, &mut rng);
        for path in &formation.paths {
            let quartiles: Vec<usize> = path
                .entrants
                .iter()
                .map(|e| items.iter().position(|x| x.team == e.team).unwrap() / 4)
                .collect();
            assert_eq!(quartiles, [0, 1, 2, 3]);
            if path.entrants.iter().any(|e| e.league == Tier::D) {
                assert!(path.entrants[0].overall_position <= 8);
            }
        }
        if formation
            .paths
            .iter()
            .any(|p| p.contains(TeamId(4)) && p.contains(TeamId(12)))
        {
            pairing += 1;
        }
    }
    assert!((pairing as f64 / n as f64 - 0.25).abs() < 0.01);
}

#[test]
fn wrong_entrant_count_is_rejected() {
    let mut rng = RandomStream::new(4, 0);
    let items: Vec<PlayoffEntrant> = (1..=15).map(entrant).collect();
    assert_eq!(
        form_paths(PathPolicy::Random, &items, &mut rng),
        Err(PlayoffError::EntrantCount(15))
    );
}

/// A 55-team set whose first four ranks carry the given ratings and the rest 1000.
fn team_set_with_top(elos: [f64; 4]) -> TeamSet {
    let records: Vec<TeamRecord> = (1..=55)
        .map(|rank| {
            let elo = elos.get(rank - 1).copied().unwrap_or(1000.0);
            TeamRecord::new(format!("T{rank}"), rank as i64, elo)
        })
        .collect();
    TeamSet::build(&records).unwrap()
}

fn top_path() -> PlayoffPath {
    PlayoffPath::new([entrant(4), entrant(2), entrant(3), entrant(1)])
}

#[test]
fn equal_teams_win_a_path_equally_often() {
    let teams = team_set_with_top([1800.0; 4]);
    let cfg = SimConfig {
        home_advantage: 0.0,
        ..SimConfig::default()
    };
    let odds = MatchOdds::new(&teams, &cfg);
    let mut rng = RandomStream::new(5, 0);
    let n = 100_000;
    let mut wins = [0u32; 4];
    for _ in 0..n {
        wins[play_path(&top_path(), &odds, &mut rng).winner.index()] += 1;
    }
    for w in wins {
        assert!((w as f64 / n as f64 - 0.25).abs() < 0.01, "{wins:?}");
    }
}

/// Probability that each seed wins the path, from the 2 host draws times the
/// 8 combinations of semifinal and final outcomes.
fn path_oracle(elo: [f64; 4], cfg: &SimConfig) -> [f64; 4] {
    let p = |home: usize, away: usize| {
        1.0 / (1.0 + 10f64.powf(-(elo[home] - elo[away] + cfg.home_advantage) / cfg.scale))
    };
    let mut win = [0.0; 4];
    for host in [1, 2] {
        for sf1_home in [true, false] {
            for sf2_home in [true, false] {
                let a = if sf1_home { 0 } else { 3 };
                let b = if sf2_home { 1 } else { 2 };
                let p_sf = (if sf1_home { p(0, 3) } else { 1.0 - p(0, 3) })
                    * (if sf2_home { p(1, 2) } else { 1.0 - p(1, 2) });
                let (h, v) = if host == 1 { (a, b) } else { (b, a) };
                for home_wins in [true, false] {
                    let p_final = if home_wins { p(h, v) } else { 1.0 - p(h, v) };
                    win[if home_wins { h } else { v }] += 0.5 * p_sf * p_final;
                }
            }
        }
    }
    win
}

#[test]
fn path_win_frequencies_match_outcome_tree() {
    let elo = [2000.0, 1800.0, 1800.0, 1800.0];
    let teams = team_set_with_top(elo);
    let cfg = SimConfig::default();
    let odds = MatchOdds::new(&teams, &cfg);
    let expected = path_oracle(elo, &cfg);
    assert!((expected.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let mut rng = RandomStream::new(6, 0);
    let n = 200_000;
    let mut wins = [0u32; 4];
    for _ in 0..n {
        wins[play_path(&top_path(), &odds, &mut rng).winner.index()] += 1;
    }
    for seed in 0..4 {
        let f = wins[seed] as f64 / n as f64;
        assert!(
            (f - expected[seed]).abs() < 0.005,
            "seed {}: {f} vs {}",
            seed + 1,
            expected[seed]
        );
    }
}

#[test]
fn conditional_path_win_rate_follows_rating() {
    let teams = team_set_with_top([1900.0, 1800.0, 1700.0, 1600.0]);
    let odds = MatchOdds::new(&teams, &SimConfig::default());
    let mut rng = RandomStream::new(7, 0);
    let mut wins = [0u32; 4];
    for _ in 0..50_000 {
        wins[play_path(&top_path(), &odds, &mut rng).winner.index()] += 1;
    }
    assert!(wins.windows(2).all(|w| w[0] > w[1]), "{wins:?}");
}

#[test]
fn path_play_consumes_four_variates() {
    let teams = team_set_with_top([1900.0, 1800.0, 1700.0, 1600.0]);
    let odds = MatchOdds::new(&teams, &SimConfig::default());
    let mut played = RandomStream::new(8, 0);
    let mut skipped = RandomStream::new(8, 0);
    let result = play_path(&top_path(), &odds, &mut played);
    for _ in 0..4 {
        let _: f64 = skipped.random();
    }
    assert_eq!(
        rand::RngCore::next_u64(&mut played),
        rand::RngCore::next_u64(&mut skipped)
    );
    let [sf1, sf2, last] = result.matches;
    assert_eq!((sf1.home, sf1.away), (TeamId(0), TeamId(3)));
    assert_eq!((sf2.home, sf2.away), (TeamId(1), TeamId(2)));
    let host = if result.host_semifinal == 1 {
        sf1.winner
    } else {
        sf2.winner
    };
    assert_eq!(last.home, host);
    assert_eq!(last.winner, result.winner);
}

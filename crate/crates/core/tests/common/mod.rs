#![allow(dead_code)]

use std::collections::HashSet;

use euroqual_core::{IterationDetail, PathPolicy, Tier};

pub const POT_SIZES: [usize; 7] = [4, 6, 10, 10, 10, 10, 5];

/// Every structural property one simulated season must satisfy, as a list
/// of violations (empty when the season is sound).
pub fn violations(detail: &IterationDetail, policy: PathPolicy) -> Vec<String> {
    let mut out = Vec::new();
    let outcome = &detail.outcome;
    if outcome.direct.len() != 20 {
        out.push(format!("{} direct qualifiers", outcome.direct.len()));
    }
    if outcome.playoff.len() != 4 {
        out.push(format!("{} play-off qualifiers", outcome.playoff.len()));
    }
    let all: HashSet<_> = outcome.qualifiers().collect();
    if all.len() != 24 {
        out.push(format!("{} distinct qualifiers", all.len()));
    }

    let overall = &detail.nations_league.overall;
    if policy == PathPolicy::Regular {
        for tier in Tier::ALL {
            if !outcome.qualifiers().any(|t| overall.tier_of(t) == tier) {
                out.push(format!("league {tier} has no qualifier"));
            }
        }
    }

    if detail.pots.sizes() != POT_SIZES {
        out.push(format!("pot sizes {:?}", detail.pots.sizes()));
    }
    if detail.nations_league.match_count() != 138 {
        out.push(format!(
            "{} Nations League matches",
            detail.nations_league.match_count()
        ));
    }
    if detail.qualifiers.match_count() != 250 {
        out.push(format!(
            "{} qualifier matches",
            detail.qualifiers.match_count()
        ));
    }
    let path_matches: usize = detail.path_results.iter().map(|r| r.matches.len()).sum();
    if path_matches != 12 {
        out.push(format!("{path_matches} play-off matches"));
    }

    let entrants: HashSet<_> = detail.entrants.iter().map(|e| e.team).collect();
    if entrants.len() != 16 {
        out.push(format!("{} distinct play-off entrants", entrants.len()));
    }
    if detail
        .entrants
        .iter()
        .any(|e| outcome.direct.contains(&e.team))
    {
        out.push("a direct qualifier entered the play-offs".into());
    }
    for tier in Tier::ALL {
        let n = detail
            .entrants
            .iter()
            .filter(|e| e.source_league == tier)
            .count();
        if n != 4 {
            out.push(format!("league {tier} quota holds {n} teams"));
        }
    }
    let placed: HashSet<_> = detail
        .formation
        .paths
        .iter()
        .flat_map(|p| p.entrants.iter().map(|e| e.team))
        .collect();
    if placed != entrants {
        out.push("paths do not partition the entrants".into());
    }
    for (path, result) in detail.formation.paths.iter().zip(&detail.path_results) {
        if !result
            .matches
            .iter()
            .all(|m| path.contains(m.home) && path.contains(m.away))
        {
            out.push("play-off match outside its path".into());
        }
        if !path.contains(result.winner) || !outcome.playoff.contains(&result.winner) {
            out.push("path winner not recorded".into());
        }
    }
    out
}

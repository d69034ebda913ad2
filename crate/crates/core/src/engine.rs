//! Monte Carlo driver: full qualification seasons, integer tallies and the
//! derived probability reports.
//!
//! Iteration `k` of a simulation always draws from
//! `RandomStream::new(master_seed, k)`, and tallies are plain integer counts
//! merged by addition, so a report does not depend on how iterations were
//! spread over threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, Counterfactual, PathPolicy, SimConfig};
use crate::elo::MatchOdds;
use crate::model::Tier;
use crate::nations_league::{play_nations_league, NationsLeagueSeason};
use crate::playoffs::{
    form_paths, play_path, select_playoff_teams, PathFormation, PathResult, PlayoffEntrant,
    PlayoffError, PATH_COUNT,
};
use crate::qualifiers::{
    draw_q_groups, form_pots, play_qualifiers, QualifierPots, QualifierResult,
};
use crate::rng::{derive_seed, RandomStream};
use crate::team::{TeamId, TeamSet, TeamSetError, TEAM_COUNT};

pub const QUALIFIERS: usize = 24;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Teams(#[from] TeamSetError),
    #[error(transparent)]
    Playoff(#[from] PlayoffError),
    #[error("structural invariant violated: {0}")]
    Invariant(String),
    #[error("cannot build worker pool: {0}")]
    ThreadPool(String),
}

/// The 24 qualifiers of one simulated season.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IterationOutcome {
    /// Top two of each qualifying group, group by group.
    pub direct: Vec<TeamId>,
    /// Path winners.
    pub playoff: Vec<TeamId>,
}

impl IterationOutcome {
    pub fn qualifiers(&self) -> impl Iterator<Item = TeamId> + '_ {
        self.direct.iter().chain(&self.playoff).copied()
    }

    fn check(&self) -> Result<(), SimError> {
        if self.direct.len() != 20 || self.playoff.len() != PATH_COUNT {
            return Err(SimError::Invariant(format!(
                "{} direct and {} play-off qualifiers",
                self.direct.len(),
                self.playoff.len()
            )));
        }
        let mut seen = [false; TEAM_COUNT];
        for team in self.qualifiers() {
            if std::mem::replace(&mut seen[team.index()], true) {
                return Err(SimError::Invariant(format!("team {team} qualified twice")));
            }
        }
        Ok(())
    }
}

/// Everything that happened in one season, stage by stage.
#[derive(Debug, Clone)]
pub struct IterationDetail {
    pub nations_league: NationsLeagueSeason,
    pub pots: QualifierPots,
    pub qualifiers: QualifierResult,
    pub entrants: Vec<PlayoffEntrant>,
    pub formation: PathFormation,
    pub path_results: [PathResult; PATH_COUNT],
    pub outcome: IterationOutcome,
}

/// A team set with its match odds, ready to simulate seasons.
#[derive(Debug, Clone)]
pub struct Pipeline<'a> {
    teams: &'a TeamSet,
    odds: MatchOdds,
    policy: PathPolicy,
}

impl<'a> Pipeline<'a> {
    pub fn new(teams: &'a TeamSet, cfg: &SimConfig) -> Self {
        Pipeline {
            teams,
            odds: MatchOdds::new(teams, cfg),
            policy: cfg.path_policy,
        }
    }

    pub fn teams(&self) -> &TeamSet {
        self.teams
    }

    pub fn run_detailed<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<IterationDetail, SimError> {
        let nations_league = play_nations_league(self.teams, &self.odds, rng);
        let pots = form_pots(&nations_league.overall);
        let qualifiers = play_qualifiers(draw_q_groups(&pots, rng), &self.odds, rng);
        let entrants = select_playoff_teams(
            &nations_league.overall,
            &nations_league.league_rankings,
            &qualifiers.direct,
        )?;
        let formation = form_paths(self.policy, &entrants, rng)?;
        let path_results = formation
            .paths
            .map(|path| play_path(&path, &self.odds, rng));
        let outcome = IterationOutcome {
            direct: qualifiers.direct.clone(),
            playoff: path_results.iter().map(|r| r.winner).collect(),
        };
        outcome.check()?;
        Ok(IterationDetail {
            nations_league,
            pots,
            qualifiers,
            entrants,
            formation,
            path_results,
            outcome,
        })
    }

    pub fn run<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Result<IterationOutcome, SimError> {
        self.run_detailed(rng).map(|d| d.outcome)
    }
}

/// Simulates one full qualification season: Nations League, qualifying
/// groups, play-off selection, path formation and play-offs.
pub fn run_iteration<R: rand::Rng + ?Sized>(
    teams: &TeamSet,
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<IterationOutcome, SimError> {
    Pipeline::new(teams, cfg).run(rng)
}

/// Exact per-team counters accumulated over iterations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub iterations: u64,
    pub direct: Vec<u64>,
    pub playoff: Vec<u64>,
    /// Seasons in which the team entered the play-offs.
    pub playoff_entries: Vec<u64>,
    /// Seasons whose regular path formation had to relax the group-winner rule.
    pub relaxed_formations: u64,
}

impl Tally {
    pub fn new(teams: usize) -> Self {
        Tally {
            iterations: 0,
            direct: vec![0; teams],
            playoff: vec![0; teams],
            playoff_entries: vec![0; teams],
            relaxed_formations: 0,
        }
    }

    pub fn record(&mut self, detail: &IterationDetail) {
        self.iterations += 1;
        for t in &detail.outcome.direct {
            self.direct[t.index()] += 1;
        }
        for t in &detail.outcome.playoff {
            self.playoff[t.index()] += 1;
        }
        for e in &detail.entrants {
            self.playoff_entries[e.team.index()] += 1;
        }
        if detail.formation.relaxed_group_winners > 0 {
            self.relaxed_formations += 1;
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.iterations += other.iterations;
        for (a, b) in self.direct.iter_mut().zip(other.direct) {
            *a += b;
        }
        for (a, b) in self.playoff.iter_mut().zip(other.playoff) {
            *a += b;
        }
        for (a, b) in self.playoff_entries.iter_mut().zip(other.playoff_entries) {
            *a += b;
        }
        self.relaxed_formations += other.relaxed_formations;
        self
    }

    /// Checks that every iteration contributed exactly 20 direct and 4
    /// play-off qualifiers.
    pub fn check_conservation(&self) -> Result<(), SimError> {
        let direct: u64 = self.direct.iter().sum();
        let playoff: u64 = self.playoff.iter().sum();
        let entries: u64 = self.playoff_entries.iter().sum();
        if direct != 20 * self.iterations
            || playoff != PATH_COUNT as u64 * self.iterations
            || entries != 16 * self.iterations
        {
            return Err(SimError::Invariant(format!(
                "{direct} direct, {playoff} play-off qualifiers and {entries} entries over {} iterations",
                self.iterations
            )));
        }
        Ok(())
    }
}

/// Per-team qualification probabilities of one simulated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityReport {
    /// The team set actually simulated (after any counterfactual swap).
    pub teams: TeamSet,
    pub config: SimConfig,
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeamRow {
    pub team: String,
    pub league: Tier,
    pub uefa_rank: u8,
    pub elo: f64,
    pub direct: u64,
    pub playoff: u64,
    pub p_direct: f64,
    pub p_playoff: f64,
    pub p_total: f64,
    pub stderr_total: f64,
}

impl ProbabilityReport {
    fn share(&self, count: u64) -> f64 {
        count as f64 / self.tally.iterations as f64
    }

    pub fn p_direct(&self, team: TeamId) -> f64 {
        self.share(self.tally.direct[team.index()])
    }

    pub fn p_playoff(&self, team: TeamId) -> f64 {
        self.share(self.tally.playoff[team.index()])
    }

    pub fn p_total(&self, team: TeamId) -> f64 {
        self.share(self.tally.direct[team.index()] + self.tally.playoff[team.index()])
    }

    /// Binomial standard error of [`Self::p_total`].
    pub fn stderr_total(&self, team: TeamId) -> f64 {
        let p = self.p_total(team);
        (p * (1.0 - p) / self.tally.iterations as f64).sqrt()
    }

    /// Probability of winning a path given that the team entered the play-offs.
    pub fn p_playoff_given_entry(&self, team: TeamId) -> Option<f64> {
        let entries = self.tally.playoff_entries[team.index()];
        (entries > 0).then(|| self.tally.playoff[team.index()] as f64 / entries as f64)
    }

    /// One row per team in coefficient-rank order.
    pub fn rows(&self) -> Vec<TeamRow> {
        self.teams
            .by_rank()
            .iter()
            .map(|&id| {
                let team = self.teams.get(id);
                TeamRow {
                    team: team.name.clone(),
                    league: Tier::of_rank(team.uefa_rank),
                    uefa_rank: team.uefa_rank,
                    elo: team.elo,
                    direct: self.tally.direct[id.index()],
                    playoff: self.tally.playoff[id.index()],
                    p_direct: self.p_direct(id),
                    p_playoff: self.p_playoff(id),
                    p_total: self.p_total(id),
                    stderr_total: self.stderr_total(id),
                }
            })
            .collect()
    }
}

/// Runs `cfg.iterations` seasons on the current rayon pool. A counterfactual
/// in `cfg` is applied to `teams` first.
pub fn run_simulation(teams: &TeamSet, cfg: &SimConfig) -> Result<ProbabilityReport, SimError> {
    cfg.validate()?;
    let teams = match cfg.counterfactual {
        Some(Counterfactual {
            subject,
            target_rank,
        }) => teams.apply_counterfactual(subject, target_rank)?,
        None => teams.clone(),
    };
    let pipeline = Pipeline::new(&teams, cfg);
    let seed = cfg.master_seed;
    let tally = (0..cfg.iterations)
        .into_par_iter()
        .try_fold(
            || Tally::new(teams.len()),
            |mut tally, k| {
                let mut rng = RandomStream::new(seed, k);
                tally.record(&pipeline.run_detailed(&mut rng)?);
                Ok::<_, SimError>(tally)
            },
        )
        .try_reduce(|| Tally::new(teams.len()), |a, b| Ok(a.merge(b)))?;
    tally.check_conservation()?;
    Ok(ProbabilityReport {
        teams,
        config: cfg.clone(),
        tally,
    })
}

/// [`run_simulation`] on a dedicated pool of `threads` workers.
pub fn run_simulation_with_threads(
    teams: &TeamSet,
    cfg: &SimConfig,
    threads: usize,
) -> Result<ProbabilityReport, SimError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SimError::ThreadPool(e.to_string()))?;
    pool.install(|| run_simulation(teams, cfg))
}

/// The subject's probabilities at its actual rank and at `target_rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterfactualReport {
    pub subject: TeamId,
    pub original_rank: u8,
    pub target_rank: u8,
    pub baseline: ProbabilityReport,
    pub swapped: ProbabilityReport,
}

impl CounterfactualReport {
    /// `(p_direct, p_playoff)` of the subject in the baseline and swapped scenarios.
    pub fn subject_channels(&self) -> [(f64, f64); 2] {
        [&self.baseline, &self.swapped]
            .map(|r| (r.p_direct(self.subject), r.p_playoff(self.subject)))
    }

    /// Swapped over baseline total qualification probability.
    pub fn ratio(&self) -> f64 {
        self.swapped.p_total(self.subject) / self.baseline.p_total(self.subject)
    }
}

/// Seed of the swapped scenario; the baseline keeps the master seed.
pub fn counterfactual_seed(master_seed: u64, subject: TeamId, target_rank: u8) -> u64 {
    derive_seed(master_seed, (subject.0 as u64) << 8 | target_rank as u64)
}

/// Simulates the team set as given and with `subject` moved to
/// `target_rank`, as two independent simulations.
pub fn run_counterfactual(
    teams: &TeamSet,
    cfg: &SimConfig,
    subject: TeamId,
    target_rank: u8,
) -> Result<CounterfactualReport, SimError> {
    let baseline_cfg = SimConfig {
        counterfactual: None,
        ..cfg.clone()
    };
    let swapped_cfg = SimConfig {
        counterfactual: Some(Counterfactual {
            subject,
            target_rank,
        }),
        master_seed: counterfactual_seed(cfg.master_seed, subject, target_rank),
        ..cfg.clone()
    };
    Ok(CounterfactualReport {
        subject,
        original_rank: teams.get(subject).uefa_rank,
        target_rank,
        baseline: run_simulation(teams, &baseline_cfg)?,
        swapped: run_simulation(teams, &swapped_cfg)?,
    })
}

/// One full simulation per scale value, everything else fixed.
pub fn run_sensitivity(
    teams: &TeamSet,
    cfg: &SimConfig,
    s_values: &[f64],
) -> Result<Vec<ProbabilityReport>, SimError> {
    for &s in s_values {
        cfg.clone().with_scale(s).validate()?;
    }
    s_values
        .iter()
        .map(|&s| run_simulation(teams, &cfg.clone().with_scale(s)))
        .collect()
}

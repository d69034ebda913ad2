//! Elo win expectancy and drawless match sampling.

use rand::Rng;
use thiserror::Error;

use crate::config::SimConfig;
use crate::model::MatchRecord;
use crate::team::{Team, TeamId, TeamSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Venue {
    /// The first-listed team plays at home and receives the home bonus.
    HomeFirstListed,
    Neutral,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("team {0} cannot play itself")]
pub struct SelfMatch(pub TeamId);

/// Probability that a team rated `elo_a` beats one rated `elo_b`:
/// `1 / (1 + 10^(-d / s))` with `d` the rating gap, plus the home bonus
/// when the first-listed team is at home.
pub fn win_expectancy(elo_a: f64, elo_b: f64, venue: Venue, cfg: &SimConfig) -> f64 {
    let bonus = match venue {
        Venue::HomeFirstListed => cfg.home_advantage,
        Venue::Neutral => 0.0,
    };
    let d = (elo_a + bonus) - elo_b;
    1.0 / (1.0 + 10f64.powf(-d / cfg.scale))
}

/// Plays one match. Consumes exactly one uniform variate `r`; the home side
/// wins iff `r` is below its win expectancy.
pub fn sample_match<R: Rng + ?Sized>(
    home: &Team,
    away: &Team,
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<MatchRecord, SelfMatch> {
    if home.id == away.id {
        return Err(SelfMatch(home.id));
    }
    let p = win_expectancy(home.elo, away.elo, Venue::HomeFirstListed, cfg);
    let r: f64 = rng.random();
    Ok(MatchRecord::new(home.id, away.id, r < p))
}

/// Home-win probabilities for every ordered pair of a team set, evaluated
/// once per simulation with [`win_expectancy`].
#[derive(Debug, Clone)]
pub struct MatchOdds {
    size: usize,
    home_win: Vec<f64>,
}

impl MatchOdds {
    pub fn new(teams: &TeamSet, cfg: &SimConfig) -> Self {
        let size = teams.len();
        let mut home_win = vec![f64::NAN; size * size];
        for home in teams.iter() {
            for away in teams.iter() {
                if home.id != away.id {
                    home_win[home.id.index() * size + away.id.index()] =
                        win_expectancy(home.elo, away.elo, Venue::HomeFirstListed, cfg);
                }
            }
        }
        MatchOdds { size, home_win }
    }

    pub fn home_win(&self, home: TeamId, away: TeamId) -> f64 {
        self.home_win[home.index() * self.size + away.index()]
    }

    /// Same contract as [`sample_match`], without the self-match check.
    #[inline]
    pub fn play<R: Rng + ?Sized>(&self, home: TeamId, away: TeamId, rng: &mut R) -> MatchRecord {
        debug_assert_ne!(home, away);
        let r: f64 = rng.random();
        MatchRecord::new(home, away, r < self.home_win(home, away))
    }
}

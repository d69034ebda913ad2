//! Regular (league-based) path formation.
//!
//! An arrangement of the 16 entrants into four paths is admissible when
//! every league with at least four entrants has a path made up only of its
//! own teams, and no group winner shares a path with a team from a
//! higher-ranked league. In the common case of four entrants per league the
//! only admissible arrangement is the four league quartets. When the quota
//! cascade mixed leagues, one admissible arrangement is drawn uniformly at
//! random. If none exists, the league-path rule is kept and the group-winner
//! rule is relaxed for as few group winners as possible, again drawing
//! uniformly among the cheapest arrangements.
//!
//! Both the constraints and the relaxation cost depend on an entrant only
//! through its (league, group winner) type, so arrangements are counted over
//! type multisets with a memoized recursion and realized by assigning
//! concrete teams uniformly within each type.

use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use rand::seq::index;
use rand::Rng;

use super::{PathFormation, PlayoffEntrant, PlayoffPath, ENTRANTS};

const TYPES: usize = 8;
const PATH_SIZE: u8 = 4;

type Counts = [u8; TYPES];

fn type_of(e: &PlayoffEntrant) -> usize {
    e.league.index() * 2 + e.is_group_winner as usize
}

fn league_of_type(t: usize) -> usize {
    t / 2
}

fn is_winner_type(t: usize) -> bool {
    t % 2 == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct State {
    counts: Counts,
    /// Bit `l` set while league `l` still needs its own path.
    need: u8,
}

/// Cheapest relaxation cost and the number of labelled arrangements at it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Best {
    cost: u8,
    ways: u64,
}

impl State {
    fn initial(counts: Counts) -> Self {
        let mut need = 0;
        for league in 0..4 {
            if counts[2 * league] + counts[2 * league + 1] >= PATH_SIZE {
                need |= 1 << league;
            }
        }
        State { counts, need }
    }

    fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// The type of the entrant every block drawn from this state must contain.
    /// Fixing it makes each partition correspond to exactly one block sequence.
    fn anchor(&self) -> usize {
        self.counts
            .iter()
            .position(|&c| c > 0)
            .expect("non-empty state")
    }

    fn without(&self, block: &Counts) -> State {
        let mut counts = self.counts;
        for t in 0..TYPES {
            counts[t] -= block[t];
        }
        let mut need = self.need;
        if let Some(league) = pure_league(block) {
            need &= !(1 << league);
        }
        State { counts, need }
    }
}

fn pure_league(block: &Counts) -> Option<usize> {
    let mut leagues = (0..TYPES).filter(|&t| block[t] > 0).map(league_of_type);
    let first = leagues.next()?;
    leagues.all(|l| l == first).then_some(first)
}

/// Group winners in the block facing a team from a higher-ranked league.
fn block_cost(block: &Counts) -> u8 {
    let top = (0..TYPES)
        .filter(|&t| block[t] > 0)
        .map(league_of_type)
        .min()
        .unwrap_or(0);
    (0..TYPES)
        .filter(|&t| is_winner_type(t) && league_of_type(t) > top)
        .map(|t| block[t])
        .sum()
}

fn binomial(n: u8, k: u8) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    (0..k).fold(1u64, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// Number of labelled blocks with type composition `block` that contain the
/// anchor entrant (the first remaining entrant of the anchor type).
fn multiplicity(state: &State, anchor: usize, block: &Counts) -> u64 {
    (0..TYPES)
        .map(|t| {
            if t == anchor {
                binomial(state.counts[t] - 1, block[t] - 1)
            } else {
                binomial(state.counts[t], block[t])
            }
        })
        .product()
}

/// Type compositions of a four-entrant block that includes the anchor.
fn blocks(state: &State, anchor: usize) -> Vec<Counts> {
    fn extend(
        state: &State,
        anchor: usize,
        t: usize,
        left: u8,
        cur: &mut Counts,
        out: &mut Vec<Counts>,
    ) {
        if t == TYPES {
            if left == 0 {
                out.push(*cur);
            }
            return;
        }
        let min = if t == anchor { 1 } else { 0 };
        for k in min..=left.min(state.counts[t]) {
            cur[t] = k;
            extend(state, anchor, t + 1, left - k, cur, out);
        }
        cur[t] = 0;
    }
    let mut out = Vec::new();
    extend(state, anchor, anchor, PATH_SIZE, &mut [0; TYPES], &mut out);
    out
}

/// Optimum for a state together with the blocks that attain it, weighted by
/// the number of labelled arrangements each one leads to.
#[derive(Debug, Clone)]
struct Entry {
    best: Option<Best>,
    options: Vec<(Counts, u64)>,
}

impl State {
    fn key(&self) -> u64 {
        self.counts
            .iter()
            .fold(self.need as u64, |acc, &c| (acc << 5) | c as u64)
    }
}

/// States pack losslessly into their key, so the key is its own hash.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0.wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 << 8) | b as u64;
        }
    }
    fn write_u64(&mut self, n: u64) {
        self.0 = n;
    }
}

type Memo = HashMap<u64, Entry, BuildHasherDefault<KeyHasher>>;

fn solve(state: State, memo: &mut Memo) -> Option<Best> {
    if state.is_empty() {
        return (state.need == 0).then_some(Best { cost: 0, ways: 1 });
    }
    if let Some(hit) = memo.get(&state.key()) {
        return hit.best;
    }
    let anchor = state.anchor();
    let mut best: Option<Best> = None;
    let mut options: Vec<(Counts, u8, u64)> = Vec::new();
    for block in blocks(&state, anchor) {
        let Some(rest) = solve(state.without(&block), memo) else {
            continue;
        };
        let cost = block_cost(&block) + rest.cost;
        let ways = multiplicity(&state, anchor, &block) * rest.ways;
        options.push((block, cost, ways));
        best = match best {
            Some(b) if b.cost < cost => Some(b),
            Some(b) if b.cost == cost => Some(Best {
                cost,
                ways: b.ways + ways,
            }),
            _ => Some(Best { cost, ways }),
        };
    }
    let options = match best {
        Some(b) => options
            .into_iter()
            .filter(|&(_, cost, _)| cost == b.cost)
            .map(|(block, _, ways)| (block, ways))
            .collect(),
        None => Vec::new(),
    };
    memo.insert(state.key(), Entry { best, options });
    best
}

thread_local! {
    static MEMO: RefCell<Memo> = RefCell::new(Memo::default());
}

fn with_memo<T>(f: impl FnOnce(&mut Memo) -> T) -> T {
    MEMO.with(|memo| f(&mut memo.borrow_mut()))
}

fn type_counts(entrants: &[PlayoffEntrant]) -> Counts {
    let mut counts = [0u8; TYPES];
    for e in entrants {
        counts[type_of(e)] += 1;
    }
    counts
}

/// Minimal relaxation cost over all arrangements satisfying the league-path
/// rule, and the number of distinct arrangements (unordered partitions into
/// four paths) attaining it.
pub fn admissible_arrangements(entrants: &[PlayoffEntrant]) -> (usize, u64) {
    assert_eq!(entrants.len(), ENTRANTS);
    let state = State::initial(type_counts(entrants));
    let best = with_memo(|memo| solve(state, memo)).expect("league quartets are always possible");
    (best.cost as usize, best.ways)
}

/// Relaxation cost of a concrete arrangement: `None` if some league with four
/// or more entrants lacks its own path, otherwise the number of group winners
/// facing a higher-league team.
pub fn arrangement_cost(paths: &[PlayoffPath]) -> Option<usize> {
    let mut entrants_per_league = [0usize; 4];
    let mut has_own_path = [false; 4];
    for path in paths {
        for e in &path.entrants {
            entrants_per_league[e.league.index()] += 1;
        }
        let league = path.entrants[0].league;
        if path.entrants.iter().all(|e| e.league == league) {
            has_own_path[league.index()] = true;
        }
    }
    (0..4)
        .all(|l| entrants_per_league[l] < 4 || has_own_path[l])
        .then(|| paths.iter().map(PlayoffPath::exposed_group_winners).sum())
}

pub fn form_paths_regular<R: Rng + ?Sized>(
    entrants: &[PlayoffEntrant],
    rng: &mut R,
) -> PathFormation {
    assert_eq!(entrants.len(), ENTRANTS);
    let counts = type_counts(entrants);

    // One league per path: nothing to draw.
    if (0..4).all(|l| counts[2 * l] + counts[2 * l + 1] == PATH_SIZE) {
        let mut by_league = entrants.to_vec();
        by_league.sort_by_key(|e| (e.league, e.overall_position));
        return PathFormation {
            paths: std::array::from_fn(|p| {
                PlayoffPath::new(std::array::from_fn(|i| by_league[4 * p + i]))
            }),
            relaxed_group_winners: 0,
        };
    }

    let mut pools: [Vec<PlayoffEntrant>; TYPES] = Default::default();
    for e in entrants {
        pools[type_of(e)].push(*e);
    }
    for pool in pools.iter_mut() {
        pool.sort_by_key(|e| e.overall_position);
    }

    let mut state = State::initial(counts);
    let mut paths = Vec::with_capacity(4);
    let relaxed = with_memo(|memo| {
        let total = solve(state, memo).expect("league quartets are always possible");
        while !state.is_empty() {
            let anchor = state.anchor();
            let entry = &memo[&state.key()];
            let target = entry.best.expect("reachable states are solvable");
            let mut pick = rng.random_range(0..target.ways);
            let (block, _) = entry
                .options
                .iter()
                .find(|(_, w)| {
                    if pick < *w {
                        true
                    } else {
                        pick -= w;
                        false
                    }
                })
                .copied()
                .expect("weights sum to the arrangement count");

            let mut members = Vec::with_capacity(4);
            for t in 0..TYPES {
                let mut k = block[t] as usize;
                if k == 0 {
                    continue;
                }
                if t == anchor {
                    members.push(pools[t].remove(0));
                    k -= 1;
                }
                let mut chosen = index::sample(rng, pools[t].len(), k).into_vec();
                chosen.sort_unstable_by(|a, b| b.cmp(a));
                for i in chosen {
                    members.push(pools[t].remove(i));
                }
            }
            paths.push(PlayoffPath::new(members.try_into().expect("four per path")));
            state = state.without(&block);
        }
        total.cost
    });

    paths.sort_by_key(|p| p.entrants[0].overall_position);
    PathFormation {
        paths: paths.try_into().expect("four paths"),
        relaxed_group_winners: relaxed,
    }
}

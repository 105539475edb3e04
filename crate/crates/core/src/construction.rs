//! The two group towers: the classical one that conjugates every pair of
//! non-trivial elements in one stage, and the alternating one that adds a
//! free `ℤ` factor on odd stages and, on even stages, conjugates the fixed
//! element `x` onto the earliest pending root `z`.
//!
//! Everything is bounded: pairs and ledger closures range over balls of a
//! working radius, and conditions are checked on those balls only.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TowerError};
use crate::par::{self, Exec};
use crate::tower::{ExtensionTower, NormalForm};
use crate::words::Word;

/// Candidate counts asked of the centralizer check per ledger element.
pub const CENTRALIZER_CANDIDATES: usize = 1000;
const MAX_CANDIDATE_RADIUS: usize = 8;

// ---------------------------------------------------------------------------
// classical tower

#[derive(Clone, Debug)]
pub struct ClassicalState {
    pub tower: ExtensionTower,
    /// Tower before each classical step, oldest first.
    pub stage_towers: Vec<ExtensionTower>,
    /// `(s, t)` to the stage of its stable letter `T_st`.
    pub letters: BTreeMap<(Word, Word), usize>,
}

impl ClassicalState {
    pub fn new(base_rank: u32) -> Self {
        ClassicalState {
            tower: ExtensionTower::new(base_rank),
            stage_towers: Vec::new(),
            letters: BTreeMap::new(),
        }
    }

    pub fn letter(&self, s: &Word, t: &Word) -> Option<Word> {
        self.letters
            .get(&(s.clone(), t.clone()))
            .map(|&k| Word::stable(k as u32, 1))
    }

    /// `(s, t, nf(T_st s T_st⁻¹) == nf(t))` for every registered pair.
    pub fn verify_relations(&self) -> Result<Vec<(Word, Word, bool)>> {
        let pairs: Vec<_> = self.letters.iter().collect();
        let checks = par::map(Exec::default(), &pairs, |((s, t), &k)| {
            let lhs = s.conjugate_by(&Word::stable(k as u32, 1));
            Ok((s.clone(), t.clone(), self.tower.nf(&lhs)? == self.tower.nf(t)?))
        });
        checks.into_iter().collect()
    }
}

/// One classical step: a stable letter `T_st` with `T_st s T_st⁻¹ = t` for
/// every ordered pair of non-trivial normal forms of unit length `<= radius`.
pub fn classical_step(state: &ClassicalState, radius: usize) -> Result<ClassicalState> {
    let mut next = state.clone();
    if radius == 0 {
        return Ok(next);
    }
    let ball: Vec<Word> = state
        .tower
        .ball(radius, state.tower.len(), None, Exec::default())?
        .into_iter()
        .filter(|w| !w.is_identity())
        .collect();
    next.stage_towers.push(state.tower.clone());
    for s in &ball {
        for t in &ball {
            let k = next.tower.push_hnn(s, t)?;
            next.letters.insert((s.clone(), t.clone()), k);
        }
    }
    Ok(next)
}

/// Distinct normal forms commuting with `t_elt`, built from the stable letters
/// of the last classical step.
///
/// The basic witnesses are `T_st · T_rs · T_tr` over pairs `(r, s)`; when the
/// ball supplies fewer than `count` of them the list is extended by products
/// of two basic witnesses, which commute with `t_elt` as well.
pub fn classical_centralizer_witnesses(state: &ClassicalState, t_elt: &Word, count: usize) -> Result<Vec<NormalForm>> {
    if count == 0 {
        return Err(TowerError::PreconditionViolated("count must be positive".into()));
    }
    let tower = &state.tower;
    let t = tower.nf(t_elt)?;
    if t.is_identity() {
        return Err(TowerError::PreconditionViolated("t must be non-trivial".into()));
    }
    let elems: BTreeSet<&Word> = state.letters.keys().map(|(s, _)| s).collect();
    if !elems.contains(&t) {
        return Err(TowerError::PreconditionViolated(format!(
            "`{t}` has no registered pairs"
        )));
    }
    let elems: Vec<&Word> = elems.into_iter().collect();
    let mut triples = Vec::new();
    for r in &elems {
        for s in &elems {
            let (Some(a), Some(b), Some(c)) = (state.letter(s, &t), state.letter(r, s), state.letter(&t, r)) else {
                continue;
            };
            triples.push(a.concat(&b).concat(&c));
        }
    }
    let basic = commuting_forms(tower, &triples, &t)?;
    let mut out = basic.clone();
    if out.len() < count {
        let mut products = Vec::new();
        for a in &basic {
            for b in &basic {
                products.push(a.concat(b));
            }
        }
        for w in commuting_forms(tower, &products, &t)? {
            if !out.contains(&w) {
                out.push(w);
            }
            if out.len() >= count {
                break;
            }
        }
    }
    if out.len() < count {
        return Err(TowerError::InsufficientPairs {
            found: out.len(),
            wanted: count,
        });
    }
    out.truncate(count);
    let stage = tower.len();
    Ok(out
        .into_iter()
        .map(|word| NormalForm {
            word,
            tower_stage: stage,
        })
        .collect())
}

fn commuting_forms(tower: &ExtensionTower, words: &[Word], t: &Word) -> Result<Vec<Word>> {
    let forms = par::map(Exec::default(), words, |w| -> Result<Option<Word>> {
        let f = tower.nf(w)?;
        Ok(tower.commutes(&f, t)?.then_some(f))
    });
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for f in forms {
        if let Some(f) = f? {
            if seen.insert(f.clone()) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// alternating tower

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseMode {
    /// Free group of rank 2.
    #[default]
    Free,
    /// One classical step at radius 1 over the free group of rank 2.
    Classical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionConfig {
    pub radius: usize,
    pub power_bound: usize,
    pub g0_mode: BaseMode,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            radius: 2,
            power_bound: 4,
            g0_mode: BaseMode::Free,
        }
    }
}

/// Certificate `nf(conjugator · x^power · conjugator⁻¹) = key`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub conjugator: Word,
    pub power: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueuedZ {
    pub z: Word,
    pub created: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepRecord {
    FreeZ { fallback: bool },
    Hnn { z: String, created: usize },
}

#[derive(Clone, Debug)]
pub struct ConstructionState {
    pub tower: ExtensionTower,
    pub x: Word,
    pub config: ConstructionConfig,
    /// Steps belonging to the base group.
    pub base_steps: usize,
    pub ledger: BTreeMap<Word, LedgerEntry>,
    pub z_queue: VecDeque<QueuedZ>,
    /// Recorded root `z_y` for every `y` seen outside the class of `x`.
    pub z_of: BTreeMap<Word, Word>,
    /// `(tower stage of t, z)` for every consumed `z`.
    pub consumed: Vec<(usize, Word)>,
    pub history: Vec<StepRecord>,
    /// Ledger hits over the non-trivial base ball, one entry per stage.
    pub progress: Vec<(usize, usize)>,
    base_ball: Vec<Word>,
    pub exec: Exec,
}

impl ConstructionState {
    pub fn new(config: ConstructionConfig) -> Result<Self> {
        Self::with_exec(config, Exec::default())
    }

    pub fn with_exec(config: ConstructionConfig, exec: Exec) -> Result<Self> {
        if config.radius == 0 || config.power_bound == 0 {
            return Err(TowerError::PreconditionViolated(
                "radius and power bound must be positive".into(),
            ));
        }
        let tower = match config.g0_mode {
            BaseMode::Free => ExtensionTower::new(2),
            BaseMode::Classical => classical_step(&ClassicalState::new(2), 1)?.tower,
        };
        let base_ball: Vec<Word> = tower
            .ball(config.radius, tower.len(), None, exec)?
            .into_iter()
            .filter(|w| !w.is_identity())
            .collect();
        let mut state = ConstructionState {
            base_steps: tower.len(),
            tower,
            x: Word::gen(0, 1),
            config,
            ledger: BTreeMap::new(),
            z_queue: VecDeque::new(),
            z_of: BTreeMap::new(),
            consumed: Vec::new(),
            history: Vec::new(),
            progress: Vec::new(),
            base_ball,
            exec,
        };
        state.refresh_ledger()?;
        state.refresh_queue(0)?;
        Ok(state)
    }

    /// Construction stage: steps added on top of the base.
    pub fn stage(&self) -> usize {
        self.tower.len() - self.base_steps
    }

    pub fn in_ledger(&self, y: &Word) -> Result<bool> {
        Ok(self.ledger.contains_key(&self.tower.nf(y)?))
    }

    pub fn in_x_class(&self, y: &Word) -> Result<bool> {
        self.tower.conjugate_to_power(y, std::slice::from_ref(&self.x))
    }

    fn current_ball(&self) -> Result<Vec<Word>> {
        self.tower.ball(self.config.radius, self.tower.len(), None, self.exec)
    }

    /// Extends the ledger by `c x^n c⁻¹` and `c z^n c⁻¹` for consumed `z`,
    /// `c` over the current ball and `1 <= |n| <= power_bound`.
    fn refresh_ledger(&mut self) -> Result<()> {
        let ball = self.current_ball()?;
        let p = self.config.power_bound as i64;
        let mut sources = vec![(Word::identity(), self.x.clone())];
        for (k, z) in &self.consumed {
            sources.push((Word::stable(*k as u32, 1), z.clone()));
        }
        let tower = &self.tower;
        let x = &self.x;
        let found = par::map(self.exec, &ball, |c| -> Result<Vec<(Word, LedgerEntry)>> {
            let mut out = Vec::new();
            for (via, base) in &sources {
                for n in (1..=p).flat_map(|n| [n, -n]) {
                    let key = tower.nf(&base.pow(n).conjugate_by(c))?;
                    let conjugator = tower.nf(&c.concat(via))?;
                    debug_assert_eq!(tower.nf(&x.pow(n).conjugate_by(&conjugator))?, key);
                    out.push((key, LedgerEntry { conjugator, power: n }));
                }
            }
            Ok(out)
        });
        for batch in found {
            for (key, entry) in batch? {
                self.ledger.entry(key).or_insert(entry);
            }
        }
        let hits = self.base_ball.iter().filter(|y| self.ledger.contains_key(*y)).count();
        self.progress.push((hits, self.base_ball.len()));
        Ok(())
    }

    fn refresh_queue(&mut self, created: usize) -> Result<()> {
        let ball = self.current_ball()?;
        let this = &*self;
        let found = par::map(self.exec, &ball, |y| -> Result<Option<(Word, Word)>> {
            if y.is_identity() || this.ledger.contains_key(y) || this.in_x_class(y)? {
                return Ok(None);
            }
            let z = match this.z_of.get(y) {
                Some(z) => z.clone(),
                None => this.tower.minimal_root_any(y)?.0,
            };
            Ok(Some((y.clone(), z)))
        });
        let mut fresh = BTreeSet::new();
        for item in found {
            if let Some((y, z)) = item? {
                self.z_of.entry(y).or_insert_with(|| z.clone());
                fresh.insert(z);
            }
        }
        let mut fresh: Vec<Word> = fresh
            .into_iter()
            .filter(|z| !self.z_queue.iter().any(|q| &q.z == z) && !self.consumed.iter().any(|(_, c)| c == z))
            .collect();
        fresh.sort_by_cached_key(|z| (z.unit_len(), z.to_string()));
        self.z_queue.extend(fresh.into_iter().map(|z| QueuedZ { z, created }));
        Ok(())
    }

    /// The recorded witness `z_y` with `z_y^n = y`, computing it if needed.
    pub fn z_witness(&self, y: &Word) -> Result<Word> {
        let y = self.tower.nf(y)?;
        if y.is_identity() || self.ledger.contains_key(&y) {
            return Err(TowerError::PreconditionViolated(format!(
                "`{y}` is trivial or in the ledger"
            )));
        }
        match self.z_of.get(&y) {
            Some(z) => Ok(z.clone()),
            None => Ok(self.tower.minimal_root_any(&y)?.0),
        }
    }

    /// Adds one stage: a free `ℤ` factor on odd stages, `t x t⁻¹ = z` on
    /// even ones with `z` the earliest queued root still outside the class
    /// of `x`. Falls back to a free factor when no such `z` remains.
    pub fn tower_step(&mut self) -> Result<&StepRecord> {
        let stage = self.stage() + 1;
        let mut record = StepRecord::FreeZ { fallback: false };
        if stage.is_multiple_of(2) {
            let mut chosen = None;
            while let Some(q) = self.z_queue.pop_front() {
                if !self.in_x_class(&q.z)? {
                    chosen = Some(q);
                    break;
                }
            }
            match chosen {
                Some(q) => {
                    let k = self.tower.push_hnn(&self.x, &q.z)?;
                    record = StepRecord::Hnn {
                        z: q.z.to_string(),
                        created: q.created,
                    };
                    self.consumed.push((k, q.z));
                }
                None => record = StepRecord::FreeZ { fallback: true },
            }
        }
        if let StepRecord::FreeZ { .. } = record {
            self.tower.push_free_z();
        }
        self.refresh_ledger()?;
        self.refresh_queue(stage)?;
        self.history.push(record);
        Ok(self.history.last().unwrap())
    }

    /// Bounded checks of the tower conditions for the newest stage.
    pub fn check_conditions(&self) -> Result<ConditionReport> {
        if self.stage() == 0 {
            return Err(TowerError::PreconditionViolated("no construction step yet".into()));
        }
        let top = self.tower.len();
        let prev = self.tower.truncated(top - 1);
        let radius = self.config.radius;
        let mut undecided = 0usize;
        let mut checks = 0usize;

        let t_new = Word::stable(top as u32, 1);
        let t_nf = self.tower.nf(&t_new)?;
        let strict_growth = t_nf.stage_length(top) == 1;

        // (iii)
        let prev_ball = prev.ball(radius, top - 1, None, self.exec)?;
        let ledger_elems: Vec<Word> = prev_ball
            .into_iter()
            .filter(|y| !y.is_identity() && self.ledger.contains_key(y))
            .collect();
        let (cand_radius, candidates) = self.centralizer_candidates()?;
        let mut centralizers = Vec::new();
        for y in &ledger_elems {
            let hits = par::map(self.exec, &candidates, |c| self.tower.commutes(c, y));
            let mut commuting = 0;
            let mut violations = Vec::new();
            for (c, hit) in candidates.iter().zip(hits) {
                checks += 1;
                if hit? {
                    commuting += 1;
                    if c.stage_length(top) > 0 {
                        violations.push(c.to_string());
                    }
                }
            }
            centralizers.push(CentralizerCheck {
                y: y.to_string(),
                candidates: candidates.len(),
                commuting,
                violations,
            });
        }

        // (iv)
        let ball = self.current_ball()?;
        let mut roots = Vec::new();
        for y in &ball {
            if y.is_identity() || self.ledger.contains_key(y) || self.in_x_class(y)? {
                continue;
            }
            let z = self.z_witness(y)?;
            let sub = self.tower.cyclic_subgroup(&z)?;
            let p = self.config.power_bound as i64;
            let outcomes = par::map(self.exec, &ball, |w| -> Vec<Result<Option<String>>> {
                (1..=p)
                    .map(|m| {
                        let u = y.pow(m).conjugate_by(w);
                        if self.tower.member_of(&u, &sub, None)?.is_some()
                            && self.tower.member_of(w, &sub, None)?.is_none()
                        {
                            return Ok(Some(format!("w={w} m={m}")));
                        }
                        Ok(None)
                    })
                    .collect()
            });
            let mut violations = Vec::new();
            for r in outcomes.into_iter().flatten() {
                checks += 1;
                match r {
                    Ok(Some(v)) => violations.push(v),
                    Ok(None) => {}
                    Err(TowerError::MembershipUndecided { .. }) => undecided += 1,
                    Err(e) => return Err(e),
                }
            }
            roots.push(RootCheck {
                y: y.to_string(),
                z: z.to_string(),
                violations,
            });
        }

        let (hits, total) = *self.progress.last().unwrap();
        let current_nontrivial = ball.iter().filter(|w| !w.is_identity()).count();
        let current_hits = ball.iter().filter(|w| self.ledger.contains_key(*w)).count();
        Ok(ConditionReport {
            stage: self.stage(),
            tower_stage: top,
            step: self
                .history
                .last()
                .cloned()
                .unwrap_or(StepRecord::FreeZ { fallback: false }),
            strict_growth,
            stable_letter_form: t_nf.to_string(),
            candidate_radius: cand_radius,
            centralizers,
            roots,
            ledger_hits: hits,
            base_ball_size: total,
            progress: self.progress.clone(),
            current_ledger_hits: current_hits,
            current_ball_size: current_nontrivial,
            ledger_size: self.ledger.len(),
            queue_len: self.z_queue.len(),
            checks,
            undecided,
        })
    }

    /// Smallest ball above the working radius holding enough candidates.
    fn centralizer_candidates(&self) -> Result<(usize, Vec<Word>)> {
        let mut r = self.config.radius + 1;
        loop {
            let ball = self.tower.ball(r, self.tower.len(), None, self.exec)?;
            if ball.len() >= CENTRALIZER_CANDIDATES || r >= MAX_CANDIDATE_RADIUS {
                return Ok((r, ball));
            }
            r += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerCheck {
    pub y: String,
    pub candidates: usize,
    pub commuting: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootCheck {
    pub y: String,
    pub z: String,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub stage: usize,
    pub tower_stage: usize,
    pub step: StepRecord,
    pub strict_growth: bool,
    pub stable_letter_form: String,
    pub candidate_radius: usize,
    pub centralizers: Vec<CentralizerCheck>,
    pub roots: Vec<RootCheck>,
    pub ledger_hits: usize,
    pub base_ball_size: usize,
    pub progress: Vec<(usize, usize)>,
    pub current_ledger_hits: usize,
    pub current_ball_size: usize,
    pub ledger_size: usize,
    pub queue_len: usize,
    pub checks: usize,
    pub undecided: usize,
}

impl ConditionReport {
    pub fn centralizer_ok(&self) -> bool {
        self.centralizers.iter().all(|c| c.violations.is_empty())
    }

    pub fn roots_ok(&self) -> bool {
        self.roots.iter().all(|r| r.violations.is_empty())
    }

    /// Ledger hits never decrease from one stage to the next.
    pub fn progress_monotone(&self) -> bool {
        self.progress.windows(2).all(|w| w[0].0 <= w[1].0)
    }

    pub fn passed(&self) -> bool {
        self.strict_growth && self.centralizer_ok() && self.roots_ok() && self.progress_monotone()
    }
}

//! Bounded brute-force verifiers for the structural lemmas of a tower step.
//!
//! Every oracle looks at the top step of the given tower: "eligible" means
//! not conjugate into the previous stage. Verdicts carry the first
//! counterexample in ball order, which [`replay`] can re-check.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TowerError};
use crate::par::{self, Exec};
use crate::tower::{ExtensionTower, NormalForm, Strategy};
use crate::words::{random_word, Word};

/// Largest radius an oracle accepts.
pub const MAX_RADIUS: usize = 6;
/// Balls up to this size are checked exhaustively in quadratic oracles.
pub const EXHAUSTIVE_LIMIT: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSpec {
    pub radius: usize,
    pub stage: usize,
    pub sample_cap: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    Aabb,
    Dodatkowy,
    Cent,
    Cykr,
    Ip,
    Nn,
    Jsc,
    Torsion,
}

impl Lemma {
    pub const ALL: [Lemma; 8] = [
        Lemma::Aabb,
        Lemma::Dodatkowy,
        Lemma::Cent,
        Lemma::Cykr,
        Lemma::Ip,
        Lemma::Nn,
        Lemma::Jsc,
        Lemma::Torsion,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Lemma::Aabb => "aabb",
            Lemma::Dodatkowy => "dodatkowy",
            Lemma::Cent => "cent",
            Lemma::Cykr => "cykr",
            Lemma::Ip => "ip",
            Lemma::Nn => "nn",
            Lemma::Jsc => "jsc",
            Lemma::Torsion => "torsion",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub words: Vec<String>,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    VacuousPass,
    Counterexample { witness: Witness },
    Undecided { count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub lemma: Lemma,
    pub outcome: Outcome,
    /// Tuples satisfying the lemma's hypothesis.
    pub premises: usize,
    pub checked: usize,
    pub undecided: usize,
}

impl OracleVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self.outcome, Outcome::Pass | Outcome::VacuousPass)
    }
}

/// Running tally shared by the oracles.
struct Tally {
    premises: usize,
    checked: usize,
    undecided: usize,
    counterexample: Option<Witness>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            premises: 0,
            checked: 0,
            undecided: 0,
            counterexample: None,
        }
    }

    /// Folds one check: `Ok(None)` premise false, `Ok(Some(None))` premise
    /// held and the conclusion too, `Ok(Some(Some(w)))` a violation.
    fn add(&mut self, r: Result<Option<Option<Witness>>>) -> Result<()> {
        self.checked += 1;
        match r {
            Ok(None) => {}
            Ok(Some(v)) => {
                self.premises += 1;
                if let (Some(w), None) = (v, &self.counterexample) {
                    self.counterexample = Some(w);
                }
            }
            Err(TowerError::MembershipUndecided { .. }) => self.undecided += 1,
            Err(e) => return Err(e),
        }
        Ok(())
    }

    fn verdict(self, lemma: Lemma) -> OracleVerdict {
        let outcome = match (self.counterexample, self.undecided, self.premises) {
            (Some(witness), _, _) => Outcome::Counterexample { witness },
            (None, n, _) if n > 0 => Outcome::Undecided { count: n },
            (None, _, 0) => Outcome::VacuousPass,
            _ => Outcome::Pass,
        };
        OracleVerdict {
            lemma,
            outcome,
            premises: self.premises,
            checked: self.checked,
            undecided: self.undecided,
        }
    }
}

fn witness(words: &[&Word], exponents: &[i64]) -> Witness {
    Witness {
        words: words.iter().map(|w| w.to_string()).collect(),
        exponents: exponents.to_vec(),
    }
}

/// Distinct normal forms of unit length `<= radius` at `spec.stage`.
pub fn enumerate_ball(spec: &BallSpec, tower: &ExtensionTower) -> Result<Vec<NormalForm>> {
    Ok(ball_words(spec, tower, Exec::default())?
        .into_iter()
        .map(|word| NormalForm {
            word,
            tower_stage: spec.stage,
        })
        .collect())
}

fn ball_words(spec: &BallSpec, tower: &ExtensionTower, exec: Exec) -> Result<Vec<Word>> {
    if spec.radius > MAX_RADIUS {
        return Err(TowerError::PreconditionViolated(format!(
            "radius {} exceeds the maximum {MAX_RADIUS}",
            spec.radius
        )));
    }
    if spec.stage > tower.len() {
        return Err(TowerError::PreconditionViolated(format!(
            "stage {} beyond tower height {}",
            spec.stage,
            tower.len()
        )));
    }
    tower.ball(spec.radius, spec.stage, Some(spec.sample_cap), exec)
}

/// Runs oracles against the top step of `tower`.
pub struct Oracles<'a> {
    tower: &'a ExtensionTower,
    spec: BallSpec,
    ball: Vec<Word>,
    eligible: Vec<Word>,
    exec: Exec,
}

impl<'a> Oracles<'a> {
    pub fn new(tower: &'a ExtensionTower, spec: BallSpec) -> Result<Self> {
        Self::with_exec(tower, spec, Exec::default())
    }

    pub fn with_exec(tower: &'a ExtensionTower, spec: BallSpec, exec: Exec) -> Result<Self> {
        if tower.is_empty() || spec.stage != tower.len() {
            return Err(TowerError::PreconditionViolated(
                "oracles need a tower with at least one step, checked at its top stage".into(),
            ));
        }
        let ball = ball_words(&spec, tower, exec)?;
        let flags = par::map(exec, &ball, |a| eligible(tower, a));
        let mut elig = Vec::new();
        for (a, f) in ball.iter().zip(flags) {
            if f? {
                elig.push(a.clone());
            }
        }
        Ok(Oracles {
            tower,
            spec,
            ball,
            eligible: elig,
            exec,
        })
    }

    pub fn ball(&self) -> &[Word] {
        &self.ball
    }

    pub fn eligible(&self) -> &[Word] {
        &self.eligible
    }

    /// Seeded subsample of `items` when it exceeds the exhaustive limit.
    fn sampled<'b>(&self, items: &'b [Word], salt: u64) -> Vec<&'b Word> {
        if items.len() <= EXHAUSTIVE_LIMIT {
            return items.iter().collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut idx = sample(&mut rng, items.len(), EXHAUSTIVE_LIMIT).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| &items[i]).collect()
    }

    pub fn run(&self, lemma: Lemma, power_bound: usize, order_bound: usize) -> Result<OracleVerdict> {
        match lemma {
            Lemma::Aabb => self.check_aabb(),
            Lemma::Dodatkowy => self.check_dodatkowy(power_bound),
            Lemma::Cent => self.check_cent(),
            Lemma::Cykr => self.check_cykr(),
            Lemma::Ip => self.check_ip(),
            Lemma::Nn => self.check_nn(power_bound),
            Lemma::Jsc => self.check_jsc(power_bound),
            Lemma::Torsion => self.check_torsion(order_bound),
        }
    }

    /// `e ≠ ab = (ba)⁻¹` forces `ab` into a conjugate of the base.
    ///
    /// The premise is `b² = a⁻²`, so pairs are matched through a table of
    /// `nf(a⁻²)` instead of enumerating all pairs.
    pub fn check_aabb(&self) -> Result<OracleVerdict> {
        let t = self.tower;
        if !t.step(t.len()).kind.is_free() {
            return Err(TowerError::PreconditionViolated(
                "top step must be a free product with Z".into(),
            ));
        }
        let squares = par::map(self.exec, &self.ball, |a| -> Result<(Word, Word)> {
            Ok((t.nf(&a.pow(-2))?, t.nf(&a.pow(2))?))
        });
        let mut by_inv_square: HashMap<Word, Vec<usize>> = HashMap::new();
        let mut sq = Vec::with_capacity(self.ball.len());
        for (i, s) in squares.into_iter().enumerate() {
            let (inv2, b2) = s?;
            by_inv_square.entry(inv2).or_default().push(i);
            sq.push(b2);
        }
        let mut tally = Tally::new();
        for (j, b) in self.ball.iter().enumerate() {
            let Some(cands) = by_inv_square.get(&sq[j]) else {
                continue;
            };
            for &i in cands {
                let a = &self.ball[i];
                tally.add(aabb_case(t, a, b))?;
            }
        }
        Ok(tally.verdict(Lemma::Aabb))
    }

    /// Powers of an eligible element stay eligible.
    pub fn check_dodatkowy(&self, power_bound: usize) -> Result<OracleVerdict> {
        let t = self.tower;
        let res = par::map(self.exec, &self.eligible, |a| {
            (1..=power_bound as i64)
                .map(|n| dodatkowy_case(t, a, n))
                .collect::<Vec<_>>()
        });
        let mut tally = Tally::new();
        for r in res.into_iter().flatten() {
            tally.add(r)?;
        }
        Ok(tally.verdict(Lemma::Dodatkowy))
    }

    /// Commuting `w, c` that both commute with an eligible `a` are powers of
    /// a common element.
    pub fn check_cent(&self) -> Result<OracleVerdict> {
        let t = self.tower;
        let sample_a = self.sampled(&self.eligible, 1);
        let mut tally = Tally::new();
        for a in sample_a {
            let hits = par::map(self.exec, &self.ball, |k| t.commutes(k, a));
            let mut cent = Vec::new();
            for (k, h) in self.ball.iter().zip(hits) {
                if h? {
                    cent.push(k.clone());
                }
            }
            let pairs: Vec<(usize, usize)> = (0..cent.len())
                .flat_map(|i| (i..cent.len()).map(move |j| (i, j)))
                .collect();
            let res = par::map(self.exec, &pairs, |&(i, j)| cent_case(t, a, &cent[i], &cent[j]));
            for r in res {
                tally.add(r)?;
            }
        }
        Ok(tally.verdict(Lemma::Cent))
    }

    /// If `ζ^n` is cyclically reduced, so is `ζ`.
    pub fn check_cykr(&self) -> Result<OracleVerdict> {
        let t = self.tower;
        let res = par::map(self.exec, &self.eligible, |z| {
            (1..=3).map(|n| cykr_case(t, z, n)).collect::<Vec<_>>()
        });
        let mut tally = Tally::new();
        for r in res.into_iter().flatten() {
            tally.add(r)?;
        }
        Ok(tally.verdict(Lemma::Cykr))
    }

    /// Minimal roots exist with degree bounded by the stable-letter length.
    pub fn check_ip(&self) -> Result<OracleVerdict> {
        let t = self.tower;
        let res = par::map(self.exec, &self.eligible, |a| ip_case(t, a));
        let mut tally = Tally::new();
        for r in res {
            tally.add(r)?;
        }
        Ok(tally.verdict(Lemma::Ip))
    }

    /// `a^n = b^n` forces `a = b` for eligible `a, b`.
    pub fn check_nn(&self, power_bound: usize) -> Result<OracleVerdict> {
        let t = self.tower;
        let mut tally = Tally::new();
        for n in 1..=power_bound as i64 {
            let powers = par::map(self.exec, &self.eligible, |a| t.nf(&a.pow(n)));
            let mut seen: HashMap<Word, usize> = HashMap::new();
            for (i, p) in powers.into_iter().enumerate() {
                let p = p?;
                let j = *seen.entry(p).or_insert(i);
                tally.add(nn_case(t, &self.eligible[j], &self.eligible[i], n))?;
            }
        }
        Ok(tally.verdict(Lemma::Nn))
    }

    /// `a^n = b^m` for eligible rootless `a, b` forces `a = b` and `n = m`.
    pub fn check_jsc(&self, power_bound: usize) -> Result<OracleVerdict> {
        let t = self.tower;
        let roots = par::map(self.exec, &self.eligible, |a| t.minimal_root(a));
        let mut rootless = Vec::new();
        for (a, r) in self.eligible.iter().zip(roots) {
            if r?.1 == 1 {
                rootless.push(a.clone());
            }
        }
        let p = power_bound as i64;
        let powers = par::map(self.exec, &rootless, |a| {
            (1..=p).map(|n| t.nf(&a.pow(n))).collect::<Vec<_>>()
        });
        let mut seen: HashMap<Word, (usize, i64)> = HashMap::new();
        let mut tally = Tally::new();
        for (i, ps) in powers.into_iter().enumerate() {
            for (n, pw) in (1..=p).zip(ps) {
                let (j, m) = *seen.entry(pw?).or_insert((i, n));
                tally.add(jsc_case(t, &rootless[j], &rootless[i], m, n))?;
            }
        }
        Ok(tally.verdict(Lemma::Jsc))
    }

    /// No non-trivial ball element has order `<= order_bound`.
    pub fn check_torsion(&self, order_bound: usize) -> Result<OracleVerdict> {
        let t = self.tower;
        let res = par::map(self.exec, &self.ball, |a| {
            (2..=order_bound as i64)
                .map(|n| torsion_case(t, a, n))
                .collect::<Vec<_>>()
        });
        let mut tally = Tally::new();
        for r in res.into_iter().flatten() {
            tally.add(r)?;
        }
        Ok(tally.verdict(Lemma::Torsion))
    }
}

type Case = Result<Option<Option<Witness>>>;

fn eligible(t: &ExtensionTower, a: &Word) -> Result<bool> {
    Ok(!a.is_identity() && !t.is_conjugate_into_base(a, t.len())?)
}

fn verdict_of(ok: bool, w: impl FnOnce() -> Witness) -> Case {
    Ok(Some(if ok { None } else { Some(w()) }))
}

fn aabb_case(t: &ExtensionTower, a: &Word, b: &Word) -> Case {
    let ab = a.concat(b);
    let ba = b.concat(a);
    if t.nf(&ab)?.is_identity() || !t.nf(&ab.concat(&ba))?.is_identity() {
        return Ok(None);
    }
    let ok = t.is_conjugate_into_base(&ab, t.len())?;
    verdict_of(ok, || witness(&[a, b], &[]))
}

fn dodatkowy_case(t: &ExtensionTower, a: &Word, n: i64) -> Case {
    if n < 1 || !eligible(t, a)? {
        return Ok(None);
    }
    let ok = eligible(t, &a.pow(n))?;
    verdict_of(ok, || witness(&[a], &[n]))
}

fn cent_case(t: &ExtensionTower, a: &Word, w: &Word, c: &Word) -> Case {
    if !eligible(t, a)? || !t.commutes(w, c)? || !t.commutes(a, w)? || !t.commutes(a, c)? {
        return Ok(None);
    }
    let (big, small) = if w.t_length() >= c.t_length() { (w, c) } else { (c, w) };
    let ok = if t.nf(big)?.is_identity() {
        true
    } else {
        let r = t.minimal_root_any(big)?.0;
        let sub = t.cyclic_subgroup(&r)?;
        t.member_of(big, &sub, None)?.is_some() && t.member_of(small, &sub, None)?.is_some()
    };
    verdict_of(ok, || witness(&[a, w, c], &[]))
}

fn cykr_case(t: &ExtensionTower, z: &Word, n: i64) -> Case {
    if n < 1 || !eligible(t, z)? || !t.is_cyclically_reduced(&z.pow(n))? {
        return Ok(None);
    }
    let ok = t.is_cyclically_reduced(z)?;
    verdict_of(ok, || witness(&[z], &[n]))
}

fn ip_case(t: &ExtensionTower, a: &Word) -> Case {
    if !eligible(t, a)? {
        return Ok(None);
    }
    let (root, d) = t.minimal_root(a)?;
    let (c, _) = t.cyclically_reduce(a)?;
    let ok = d as usize <= c.stage_length(t.len())
        && t.nf(&root.pow(d as i64))? == t.nf(a)?
        && t.minimal_root(&root)?.1 == 1;
    verdict_of(ok, || witness(&[a], &[d as i64]))
}

fn nn_case(t: &ExtensionTower, a: &Word, b: &Word, n: i64) -> Case {
    if n < 1 || !eligible(t, a)? || !eligible(t, b)? || t.nf(&a.pow(n))? != t.nf(&b.pow(n))? {
        return Ok(None);
    }
    let ok = t.nf(a)? == t.nf(b)?;
    verdict_of(ok, || witness(&[a, b], &[n]))
}

fn jsc_case(t: &ExtensionTower, a: &Word, b: &Word, n: i64, m: i64) -> Case {
    if n < 1 || m < 1 || !eligible(t, a)? || !eligible(t, b)? {
        return Ok(None);
    }
    if t.minimal_root(a)?.1 != 1 || t.minimal_root(b)?.1 != 1 || t.nf(&a.pow(n))? != t.nf(&b.pow(m))? {
        return Ok(None);
    }
    let ok = t.nf(a)? == t.nf(b)? && n == m;
    verdict_of(ok, || witness(&[a, b], &[n, m]))
}

fn torsion_case(t: &ExtensionTower, a: &Word, n: i64) -> Case {
    if t.nf(a)?.is_identity() {
        return Ok(None);
    }
    let ok = !t.nf(&a.pow(n))?.is_identity();
    verdict_of(ok, || witness(&[a], &[n]))
}

/// Re-evaluates a witness: `Ok(true)` iff it still violates the lemma.
pub fn replay(t: &ExtensionTower, lemma: Lemma, w: &Witness) -> Result<bool> {
    let words: Vec<Word> = w
        .words
        .iter()
        .map(|s| s.parse::<Word>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| TowerError::PreconditionViolated(e.to_string()))?;
    let bad = || TowerError::PreconditionViolated("witness has the wrong shape".into());
    let word = |i: usize| words.get(i).ok_or_else(bad);
    let exp = |i: usize| w.exponents.get(i).copied().ok_or_else(bad);
    let case = match lemma {
        Lemma::Aabb => aabb_case(t, word(0)?, word(1)?),
        Lemma::Dodatkowy => dodatkowy_case(t, word(0)?, exp(0)?),
        Lemma::Cent => cent_case(t, word(0)?, word(1)?, word(2)?),
        Lemma::Cykr => cykr_case(t, word(0)?, exp(0)?),
        Lemma::Ip => ip_case(t, word(0)?),
        Lemma::Nn => nn_case(t, word(0)?, word(1)?, exp(0)?),
        Lemma::Jsc => jsc_case(t, word(0)?, word(1)?, exp(0)?, exp(1)?),
        Lemma::Torsion => torsion_case(t, word(0)?, exp(0)?),
    }?;
    Ok(matches!(case, Some(Some(_))))
}

/// Bounds shared by a full oracle run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaParams {
    pub radius: usize,
    pub power_bound: usize,
    pub order_bound: usize,
    pub sample_cap: usize,
    pub seed: u64,
}

impl Default for LemmaParams {
    fn default() -> Self {
        LemmaParams {
            radius: 3,
            power_bound: 4,
            order_bound: 5,
            sample_cap: 20_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerVerdicts {
    pub tower: String,
    pub ball_size: usize,
    pub eligible: usize,
    pub verdicts: Vec<OracleVerdict>,
}

/// The two towers the lemmas are checked on: `F(g0,g1) * ⟨t1⟩`, and that
/// group extended by `t2 g0 t2⁻¹ = g1`.
pub fn standard_towers() -> Vec<ExtensionTower> {
    let mut free = ExtensionTower::new(2);
    free.push_free_z();
    let mut hnn = free.clone();
    hnn.push_hnn(&Word::gen(0, 1), &Word::gen(1, 1))
        .expect("non-trivial generators");
    vec![free, hnn]
}

/// Every applicable oracle on every standard tower.
pub fn run_all(params: &LemmaParams, exec: Exec) -> Result<Vec<TowerVerdicts>> {
    let mut out = Vec::new();
    for tower in standard_towers() {
        let spec = BallSpec {
            radius: params.radius,
            stage: tower.len(),
            sample_cap: params.sample_cap,
            seed: params.seed,
        };
        let o = Oracles::with_exec(&tower, spec, exec)?;
        let mut verdicts = Vec::new();
        for lemma in Lemma::ALL {
            if lemma == Lemma::Aabb && !tower.step(tower.len()).kind.is_free() {
                continue;
            }
            verdicts.push(o.run(lemma, params.power_bound, params.order_bound)?);
        }
        out.push(TowerVerdicts {
            tower: tower.describe().trim_end().replace('\n', "; "),
            ball_size: o.ball().len(),
            eligible: o.eligible().len(),
            verdicts,
        });
    }
    Ok(out)
}

/// Towers for the pinch-strategy comparison: the free base, one free
/// stable letter on top, then two HNN stages.
pub fn confluence_towers() -> Vec<ExtensionTower> {
    let base = ExtensionTower::new(2);
    let mut free = base.clone();
    free.push_free_z();
    let mut hnn = free.clone();
    hnn.push_hnn(&Word::gen(0, 1), &Word::gen(1, 1))
        .expect("non-trivial generators");
    hnn.push_hnn(&"g0 t1".parse().expect("word"), &"t2 g1^2".parse().expect("word"))
        .expect("non-trivial generators");
    vec![base, free, hnn]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub tower: String,
    pub words: usize,
    pub mismatches: Vec<String>,
}

/// Reduces `count` seeded random words of length up to `max_len` with both
/// pinch strategies and lists every word whose normal forms differ.
pub fn strategy_agreement(
    tower: &ExtensionTower,
    count: usize,
    max_len: usize,
    seed: u64,
    exec: Exec,
) -> Result<ConfluenceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<Word> = (0..count)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            random_word(&mut rng, tower.base_rank(), tower.len() as u32, len)
        })
        .collect();
    let results = par::map(exec, &words, |w| -> Result<Option<String>> {
        let l = tower.nf_with(w, Strategy::Leftmost)?;
        let r = tower.nf_with(w, Strategy::Rightmost)?;
        Ok((l != r).then(|| w.to_string()))
    });
    let mut mismatches = Vec::new();
    for r in results {
        mismatches.extend(r?);
    }
    Ok(ConfluenceReport {
        tower: tower.describe().trim_end().replace('\n', "; "),
        words: count,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    fn spec(radius: usize, stage: usize) -> BallSpec {
        BallSpec {
            radius,
            stage,
            sample_cap: 10_000,
            seed: 7,
        }
    }

    #[test]
    fn enumerate_ball_examples() {
        let f = ExtensionTower::new(1);
        let b = enumerate_ball(&spec(2, 0), &f).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(enumerate_ball(&spec(0, 0), &f).unwrap().len(), 1);
        let mut z = ExtensionTower::new(1);
        z.push_free_z();
        let words: Vec<Word> = enumerate_ball(&spec(1, 1), &z)
            .unwrap()
            .into_iter()
            .map(|n| n.word)
            .collect();
        assert_eq!(words.len(), 5);
        assert!(words.contains(&w("t1^-1")));
        let capped = BallSpec {
            sample_cap: 3,
            ..spec(2, 0)
        };
        assert!(matches!(
            enumerate_ball(&capped, &f),
            Err(TowerError::CapExceeded { cap: 3 })
        ));
        assert!(enumerate_ball(&spec(MAX_RADIUS + 1, 0), &f).is_err());
    }

    #[test]
    fn aabb_is_vacuous_on_free_product() {
        let towers = standard_towers();
        let o = Oracles::new(&towers[0], spec(3, 1)).unwrap();
        let v = o.check_aabb().unwrap();
        assert_eq!(v.outcome, Outcome::VacuousPass);
        assert_eq!(aabb_case(&towers[0], &w("g0"), &w("g0^-1")).unwrap(), None);
        assert!(Oracles::new(&towers[1], spec(1, 2)).unwrap().check_aabb().is_err());
    }

    #[test]
    fn all_oracles_pass_small() {
        for tv in run_all(
            &LemmaParams {
                radius: 2,
                ..LemmaParams::default()
            },
            Exec::Sequential,
        )
        .unwrap()
        {
            for v in &tv.verdicts {
                assert!(v.is_ok(), "{}: {:?}", tv.tower, v);
            }
        }
    }

    #[test]
    fn replay_detects_planted_violation() {
        let towers = standard_towers();
        let t = &towers[0];
        // g0 is not eligible, so the premise fails and nothing is violated.
        let fake = Witness {
            words: vec!["g0".into()],
            exponents: vec![2],
        };
        assert!(!replay(t, Lemma::Dodatkowy, &fake).unwrap());
        assert!(replay(
            t,
            Lemma::Torsion,
            &Witness {
                words: vec!["g0".into()],
                exponents: vec![2]
            }
        )
        .is_ok());
        assert!(replay(
            t,
            Lemma::Nn,
            &Witness {
                words: vec![],
                exponents: vec![]
            }
        )
        .is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let towers = standard_towers();
        let a = Oracles::new(&towers[0], spec(3, 1)).unwrap();
        let b = Oracles::new(&towers[0], spec(3, 1)).unwrap();
        assert_eq!(a.sampled(a.eligible(), 1), b.sampled(b.eligible(), 1));
        assert_eq!(a.check_cent().unwrap(), b.check_cent().unwrap());
    }
}

//! Relation-aware word calculus over a layered tower of HNN extensions.
//!
//! Stage 0 is the free group on `g0 … g{r-1}`. Stage `j` adjoins the stable
//! letter `tj`, either freely (`FreeProductZ`, trivial associated subgroups)
//! or with the single relation `tj · source · tj⁻¹ = target` where `source`
//! and `target` live in stage `j-1`. Associated subgroups are therefore
//! trivial or infinite cyclic.
//!
//! Normal forms are built level by level. At level `j` a word is split into
//! `h0 t^e1 s1 … t^em sm` with every segment normalized at level `j-1`;
//! pinches `t a t⁻¹` (a ∈ ⟨source⟩) and `t⁻¹ b t` (b ∈ ⟨target⟩) are removed,
//! and then each segment after a stable letter is replaced, right to left, by
//! its canonical right-coset representative, pushing the subgroup part
//! across the stable letter. The representative of `⟨g⟩a` is the element of
//! minimal unit length, ties broken by the total order on [`Word`].
//!
//! Membership in a cyclic subgroup `⟨g⟩` is decided exactly: `g` is written
//! as `y c y⁻¹` with `c` cyclically reduced at its top level `ℓ`, so the
//! powers of `c` have exactly `|k|` times its `tℓ`-length and only two
//! exponents need testing.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{ParseError, Result, TowerError};
use crate::par::{self, Exec};
use crate::words::{Letter, Symbol, Word};

/// Smallest membership/coset search bound; the effective bound for a word
/// `w` is `max(unit_len(w), DEFAULT_MIN_BOUND)`.
pub const DEFAULT_MIN_BOUND: usize = 16;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

fn fresh_uid() -> u64 {
    NEXT_UID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    FreeProductZ,
    /// `t · source · t⁻¹ = target`.
    Hnn {
        source: Word,
        target: Word,
    },
}

impl StepKind {
    pub fn is_free(&self) -> bool {
        matches!(self, StepKind::FreeProductZ)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionStep {
    pub kind: StepKind,
    /// Stage index of the stable letter, starting at 1.
    pub stage: usize,
}

/// Pinch-selection order used by Britton reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// A canonical word together with the stage it was computed in.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm {
    pub word: Word,
    pub tower_stage: usize,
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// `gen = conj · core · conj⁻¹` with `core` cyclically reduced at `level`;
/// `core_len` is its `t_level`-length (unit length when `level == 0`).
#[derive(Clone, Debug)]
struct CyclicGen {
    gen: Word,
    conj: Word,
    core: Word,
    level: usize,
    core_len: usize,
}

/// A non-trivial cyclic subgroup prepared by [`ExtensionTower::cyclic_subgroup`].
#[derive(Clone, Debug)]
pub struct CyclicSubgroup(CyclicGen);

impl CyclicSubgroup {
    pub fn generator(&self) -> &Word {
        &self.0.gen
    }
}

#[derive(Debug)]
struct StepData {
    step: ExtensionStep,
    uid: u64,
    source: Option<CyclicGen>,
    target: Option<CyclicGen>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
enum Side {
    Source,
    Target,
}

#[derive(Default, Debug)]
struct Cache {
    nf: DashMap<(u64, Strategy, Word), Word>,
    coset: DashMap<(u64, Side, Word), (i64, Word)>,
}

/// Segments of a word split around one stable letter: `head t^e1 s1 …`.
#[derive(Clone, Debug, Default)]
struct Syllables {
    head: Word,
    tail: Vec<(i32, Word)>,
}

impl Syllables {
    fn split(w: &Word, level: usize) -> Self {
        let mut s = Syllables::default();
        let target = Symbol::Stable(level as u32);
        for &l in w.letters() {
            if l.symbol == target {
                for _ in 0..l.exp.unsigned_abs() {
                    s.tail.push((l.exp.signum(), Word::identity()));
                }
            } else {
                match s.tail.last_mut() {
                    Some((_, seg)) => seg.push(l),
                    None => s.head.push(l),
                }
            }
        }
        s
    }

    fn slot_before(&mut self, i: usize) -> &mut Word {
        if i == 0 {
            &mut self.head
        } else {
            &mut self.tail[i - 1].1
        }
    }

    fn assemble(&self, level: usize) -> Word {
        let mut w = self.head.clone();
        for (e, seg) in &self.tail {
            w.push(Letter::stable(level as u32, *e));
            w.extend_from(seg);
        }
        w
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionTower {
    base_rank: u32,
    steps: Vec<Arc<StepData>>,
    min_bound: usize,
    cache: Arc<Cache>,
}

impl PartialEq for ExtensionTower {
    fn eq(&self, other: &Self) -> bool {
        self.base_rank == other.base_rank
            && self.steps.len() == other.steps.len()
            && self.steps.iter().zip(&other.steps).all(|(a, b)| a.step == b.step)
    }
}

impl ExtensionTower {
    pub fn new(base_rank: u32) -> Self {
        ExtensionTower {
            base_rank,
            steps: Vec::new(),
            min_bound: DEFAULT_MIN_BOUND,
            cache: Arc::new(Cache::default()),
        }
    }

    pub fn with_min_bound(mut self, bound: usize) -> Self {
        self.min_bound = bound;
        self
    }

    pub fn min_bound(&self) -> usize {
        self.min_bound
    }

    pub fn base_rank(&self) -> u32 {
        self.base_rank
    }

    /// Number of extension steps, which is also the index of the top stage.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> impl Iterator<Item = &ExtensionStep> {
        self.steps.iter().map(|s| &s.step)
    }

    pub fn step(&self, stage: usize) -> &ExtensionStep {
        &self.steps[stage - 1].step
    }

    /// The tower cut down to its first `stages` steps. Shares caches.
    pub fn truncated(&self, stages: usize) -> Self {
        ExtensionTower {
            base_rank: self.base_rank,
            steps: self.steps[..stages.min(self.steps.len())].to_vec(),
            min_bound: self.min_bound,
            cache: Arc::clone(&self.cache),
        }
    }

    pub fn push_free_z(&mut self) -> usize {
        let stage = self.steps.len() + 1;
        self.steps.push(Arc::new(StepData {
            step: ExtensionStep {
                kind: StepKind::FreeProductZ,
                stage,
            },
            uid: fresh_uid(),
            source: None,
            target: None,
        }));
        stage
    }

    pub fn push_hnn(&mut self, source: &Word, target: &Word) -> Result<usize> {
        let stage = self.steps.len() + 1;
        let below = stage - 1;
        let source = self.nf_at(source, below)?;
        let target = self.nf_at(target, below)?;
        if source.is_identity() || target.is_identity() {
            return Err(TowerError::TrivialGenerator(stage));
        }
        let sg = self.cyclic_gen(&source, below)?;
        let tg = self.cyclic_gen(&target, below)?;
        self.steps.push(Arc::new(StepData {
            step: ExtensionStep {
                kind: StepKind::Hnn { source, target },
                stage,
            },
            uid: fresh_uid(),
            source: Some(sg),
            target: Some(tg),
        }));
        Ok(stage)
    }

    pub fn push_step(&mut self, kind: &StepKind) -> Result<usize> {
        match kind {
            StepKind::FreeProductZ => Ok(self.push_free_z()),
            StepKind::Hnn { source, target } => self.push_hnn(source, target),
        }
    }

    pub fn validate(&self, w: &Word, stage: usize) -> Result<()> {
        for l in w.letters() {
            let ok = match l.symbol {
                Symbol::Gen(i) => i < self.base_rank,
                Symbol::Stable(s) => (s as usize) >= 1 && (s as usize) <= stage,
            };
            if !ok {
                return Err(TowerError::InvalidLetter {
                    letter: l.to_string(),
                    stage,
                });
            }
        }
        Ok(())
    }

    fn bound_for(&self, w: &Word) -> usize {
        w.unit_len().max(self.min_bound)
    }

    // ---------------------------------------------------------------------
    // normal forms

    pub fn normal_form(&self, w: &Word) -> Result<NormalForm> {
        Ok(NormalForm {
            word: self.nf(w)?,
            tower_stage: self.len(),
        })
    }

    pub fn nf(&self, w: &Word) -> Result<Word> {
        self.nf_at(w, self.len())
    }

    pub fn nf_at(&self, w: &Word, stage: usize) -> Result<Word> {
        self.validate(w, stage)?;
        self.nf_level(w, stage, Strategy::Leftmost)
    }

    /// Normal form computed with the given pinch-selection order at every level.
    pub fn nf_with(&self, w: &Word, strategy: Strategy) -> Result<Word> {
        self.validate(w, self.len())?;
        self.nf_level(w, self.len(), strategy)
    }

    pub fn equal(&self, a: &Word, b: &Word) -> Result<bool> {
        Ok(self.nf(&a.concat(&b.inverse()))?.is_identity())
    }

    fn nf_level(&self, w: &Word, level: usize, strat: Strategy) -> Result<Word> {
        let level = level.min(w.max_stage());
        if level == 0 {
            return Ok(w.clone());
        }
        let uid = self.steps[level - 1].uid;
        let key = (uid, strat, w.clone());
        if let Some(hit) = self.cache.nf.get(&key) {
            return Ok(hit.clone());
        }
        let mut syl = self.reduced_syllables(w, level, strat)?;
        self.canonicalize(&mut syl, level, strat)?;
        let out = syl.assemble(level);
        self.cache.nf.insert(key, out.clone());
        Ok(out)
    }

    /// Britton reduction at the top level, with every segment normalized.
    pub fn britton_reduce(&self, w: &Word, strategy: Strategy) -> Result<Word> {
        self.validate(w, self.len())?;
        let level = self.len().min(w.max_stage());
        if level == 0 {
            return Ok(w.clone());
        }
        Ok(self.reduced_syllables(w, level, strategy)?.assemble(level))
    }

    fn reduced_syllables(&self, w: &Word, level: usize, strat: Strategy) -> Result<Syllables> {
        let mut syl = Syllables::split(w, level);
        syl.head = self.nf_level(&syl.head, level - 1, strat)?;
        for (_, seg) in syl.tail.iter_mut() {
            *seg = self.nf_level(seg, level - 1, strat)?;
        }
        loop {
            let n = syl.tail.len();
            if n < 2 {
                break;
            }
            let order: Box<dyn Iterator<Item = usize>> = match strat {
                Strategy::Leftmost => Box::new(0..n - 1),
                Strategy::Rightmost => Box::new((0..n - 1).rev()),
            };
            let mut found = None;
            for i in order {
                let (e, ref interior) = syl.tail[i];
                if syl.tail[i + 1].0 != -e {
                    continue;
                }
                if let Some(repl) = self.pinch_image(level, e, interior)? {
                    found = Some((i, repl));
                    break;
                }
            }
            let Some((i, repl)) = found else { break };
            let right = syl.tail[i + 1].1.clone();
            syl.tail.drain(i..=i + 1);
            let left = syl.slot_before(i);
            let merged = left.concat(&repl).concat(&right);
            *syl.slot_before(i) = self.nf_level(&merged, level - 1, strat)?;
        }
        Ok(syl)
    }

    /// For `t^e · interior · t^-e`, the element of stage `level-1` it equals,
    /// or `None` if it is not a pinch.
    fn pinch_image(&self, level: usize, e: i32, interior: &Word) -> Result<Option<Word>> {
        let data = &self.steps[level - 1];
        match &data.step.kind {
            StepKind::FreeProductZ => Ok(interior.is_identity().then(Word::identity)),
            StepKind::Hnn { .. } => {
                let (from, to) = if e > 0 {
                    (data.source.as_ref().unwrap(), data.target.as_ref().unwrap())
                } else {
                    (data.target.as_ref().unwrap(), data.source.as_ref().unwrap())
                };
                Ok(self.member(interior, from, level - 1, None)?.map(|k| to.gen.pow(k)))
            }
        }
    }

    fn canonicalize(&self, syl: &mut Syllables, level: usize, strat: Strategy) -> Result<()> {
        let data = Arc::clone(&self.steps[level - 1]);
        if data.step.kind == StepKind::FreeProductZ {
            return Ok(());
        }
        for i in (0..syl.tail.len()).rev() {
            let e = syl.tail[i].0;
            let (side, gen, image) = if e > 0 {
                (
                    Side::Source,
                    data.source.as_ref().unwrap(),
                    data.target.as_ref().unwrap(),
                )
            } else {
                (
                    Side::Target,
                    data.target.as_ref().unwrap(),
                    data.source.as_ref().unwrap(),
                )
            };
            let (k, rep) = self.coset_rep_cached(&syl.tail[i].1, gen, level - 1, (data.uid, side))?;
            syl.tail[i].1 = rep;
            if k != 0 {
                let left = syl.slot_before(i);
                let moved = left.concat(&image.gen.pow(k));
                *syl.slot_before(i) = self.nf_level(&moved, level - 1, strat)?;
            }
        }
        Ok(())
    }

    // ---------------------------------------------------------------------
    // cyclic subgroups

    fn cyclic_gen(&self, g: &Word, level: usize) -> Result<CyclicGen> {
        let (core, conj) = self.cyclic_reduce_level(g, level)?;
        let lvl = core.max_stage();
        let core_len = if lvl == 0 {
            core.unit_len()
        } else {
            core.stage_length(lvl)
        };
        Ok(CyclicGen {
            gen: self.nf_level(g, level, Strategy::Leftmost)?,
            conj,
            core,
            level: lvl,
            core_len,
        })
    }

    /// Exact test `w ∈ ⟨gen⟩`; both live at stage ≤ `level`.
    fn member(&self, w: &Word, cg: &CyclicGen, level: usize, bound: Option<usize>) -> Result<Option<i64>> {
        if w.is_identity() {
            return Ok(Some(0));
        }
        let inner = self.nf_level(&w.conjugate_by(&cg.conj.inverse()), level, Strategy::Leftmost)?;
        if inner.max_stage() != cg.level {
            return Ok(None);
        }
        let t = if cg.level == 0 {
            inner.unit_len()
        } else {
            inner.stage_length(cg.level)
        };
        if t == 0 || t % cg.core_len != 0 {
            return Ok(None);
        }
        let k = (t / cg.core_len) as i64;
        for cand in [k, -k] {
            let p = self.nf_level(&cg.core.pow(cand), cg.level, Strategy::Leftmost)?;
            if p == inner {
                let bound = bound.unwrap_or_else(|| self.bound_for(w));
                if cand.unsigned_abs() as usize > bound {
                    return Err(TowerError::MembershipUndecided {
                        word: w.to_string(),
                        generator: cg.gen.to_string(),
                        bound,
                    });
                }
                return Ok(Some(cand));
            }
        }
        Ok(None)
    }

    /// `Some(k)` with `w = g^k`, `None` if `w ∉ ⟨g⟩`.
    ///
    /// `bound` caps `|k|`; the default is `max(unit_len(w), min_bound)`.
    /// A member whose exponent exceeds the cap is reported as
    /// [`TowerError::MembershipUndecided`].
    pub fn in_cyclic(&self, w: &Word, g: &Word, bound: Option<usize>) -> Result<Option<i64>> {
        let sub = self.cyclic_subgroup(g)?;
        self.member_of(w, &sub, bound)
    }

    /// Precomputed data for repeated membership tests in `⟨g⟩`.
    pub fn cyclic_subgroup(&self, g: &Word) -> Result<CyclicSubgroup> {
        self.validate(g, self.len())?;
        let g = self.nf(g)?;
        if g.is_identity() {
            return Err(TowerError::PreconditionViolated("generator is the identity".into()));
        }
        Ok(CyclicSubgroup(self.cyclic_gen(&g, self.len())?))
    }

    /// Same as [`Self::in_cyclic`] for a prepared subgroup.
    pub fn member_of(&self, w: &Word, sub: &CyclicSubgroup, bound: Option<usize>) -> Result<Option<i64>> {
        self.validate(w, self.len())?;
        self.member(w, &sub.0, self.len(), bound)
    }

    /// `a = g^k · s` with `s` the canonical representative of `⟨g⟩a`.
    pub fn coset_rep(&self, a: &Word, g: &Word) -> Result<(i64, Word)> {
        let level = self.len();
        self.validate(a, level)?;
        self.validate(g, level)?;
        let g = self.nf(g)?;
        if g.is_identity() {
            return Err(TowerError::PreconditionViolated("generator is the identity".into()));
        }
        let cg = self.cyclic_gen(&g, level)?;
        let a = self.nf(a)?;
        self.coset_rep_search(&a, &cg, level)
    }

    fn coset_rep_cached(&self, a: &Word, cg: &CyclicGen, level: usize, key: (u64, Side)) -> Result<(i64, Word)> {
        let k = (key.0, key.1, a.clone());
        if let Some(hit) = self.cache.coset.get(&k) {
            return Ok(hit.clone());
        }
        let out = self.coset_rep_search(a, cg, level)?;
        self.cache.coset.insert(k, out.clone());
        Ok(out)
    }

    fn coset_rep_search(&self, a: &Word, cg: &CyclicGen, level: usize) -> Result<(i64, Word)> {
        if a.is_identity() {
            return Ok((0, Word::identity()));
        }
        if let Some(k) = self.member(a, cg, level, Some(usize::MAX))? {
            return Ok((k, Word::identity()));
        }
        let bound = a.unit_len() + self.min_bound;
        let mut best = (a.unit_len(), a.clone(), 0i64);
        for dir in [1i64, -1] {
            let mut lens = vec![a.unit_len()];
            let mut k = 0i64;
            loop {
                k += dir;
                if k.unsigned_abs() as usize > bound {
                    return Err(TowerError::MembershipUndecided {
                        word: a.to_string(),
                        generator: cg.gen.to_string(),
                        bound,
                    });
                }
                let cand = self.nf_level(&cg.gen.pow(-k).concat(a), level, Strategy::Leftmost)?;
                let len = cand.unit_len();
                if (len, &cand) < (best.0, &best.1) {
                    best = (len, cand, k);
                }
                lens.push(len);
                let n = lens.len();
                if n >= 4 && lens[n - 4] < lens[n - 3] && lens[n - 3] < lens[n - 2] && lens[n - 2] < lens[n - 1] {
                    break;
                }
            }
        }
        Ok((best.2, best.1))
    }

    // ---------------------------------------------------------------------
    // cyclic reduction, conjugacy, roots

    /// `(c, y)` with `w = y c y⁻¹`, `c` cyclically reduced at its own top level.
    pub fn cyclically_reduce(&self, w: &Word) -> Result<(Word, Word)> {
        self.validate(w, self.len())?;
        self.cyclic_reduce_level(w, self.len())
    }

    fn cyclic_reduce_level(&self, w: &Word, level: usize) -> Result<(Word, Word)> {
        let mut cur = self.nf_level(w, level, Strategy::Leftmost)?;
        let mut conj = Word::identity();
        loop {
            let lvl = cur.max_stage();
            if lvl == 0 {
                let (c, y) = free_cyclic_reduce(&cur);
                return Ok((c, conj.concat(&y)));
            }
            let syl = Syllables::split(&cur, lvl);
            let n = syl.tail.len();
            let last = &syl.tail[n - 1].1;
            let p = if !syl.head.is_identity() && !last.is_identity() {
                last.clone()
            } else {
                let (e1, el) = (syl.tail[0].0, syl.tail[n - 1].0);
                let junction = if syl.head.is_identity() { last } else { &syl.head };
                if e1 == -el && self.pinch_image(lvl, el, junction)?.is_some() {
                    let mut p = Word::stable(lvl as u32, el);
                    if syl.head.is_identity() {
                        p.extend_from(last);
                    }
                    p
                } else {
                    let conj = self.nf_level(&conj, level, Strategy::Leftmost)?;
                    return Ok((cur, conj));
                }
            };
            cur = self.nf_level(&cur.conjugate_by(&p), level, Strategy::Leftmost)?;
            conj = conj.concat(&p.inverse());
        }
    }

    /// Whether `w` is cyclically reduced as an element.
    ///
    /// At the top level `ℓ` of `w` with `nf(w) = h0 t^e1 … t^eL sL`, other
    /// reduced representations change the junction `sL · h0` only by
    /// elements of the associated subgroup on its two sides, so a cyclic
    /// pinch exists in some representation iff it exists in this one.
    pub fn is_cyclically_reduced(&self, w: &Word) -> Result<bool> {
        let w = self.nf(w)?;
        let lvl = w.max_stage();
        if lvl == 0 {
            let ls = w.letters();
            return Ok(ls.len() < 2 || {
                let (f, l) = (ls[0], ls[ls.len() - 1]);
                f.symbol != l.symbol || f.exp.signum() == l.exp.signum()
            });
        }
        let syl = Syllables::split(&w, lvl);
        let n = syl.tail.len();
        let (e1, el) = (syl.tail[0].0, syl.tail[n - 1].0);
        if e1 != -el {
            return Ok(true);
        }
        let junction = syl.tail[n - 1].1.concat(&syl.head);
        Ok(self.pinch_image(lvl, el, &junction)?.is_none())
    }

    /// Whether the cyclically reduced form of `w` avoids every stable letter
    /// of stage `>= stage`.
    pub fn is_conjugate_into_base(&self, w: &Word, stage: usize) -> Result<bool> {
        let (c, _) = self.cyclically_reduce(w)?;
        Ok(c.max_stage() < stage)
    }

    /// Minimal root of `a`, which must not be conjugate into the previous stage.
    pub fn minimal_root(&self, a: &Word) -> Result<(Word, u32)> {
        let (c, y) = self.cyclically_reduce(a)?;
        if c.is_identity() || c.max_stage() < self.len() {
            return Err(TowerError::PreconditionViolated(format!(
                "`{a}` is conjugate into stage {}",
                self.len().saturating_sub(1)
            )));
        }
        let (r, d) = self.root_of_cyclic(&c)?;
        Ok((self.nf(&r.conjugate_by(&y))?, d))
    }

    /// Minimal root of any non-trivial `a`, computed at the top level of its
    /// cyclically reduced form (free-group period when that level is 0).
    pub fn minimal_root_any(&self, a: &Word) -> Result<(Word, u32)> {
        let (c, y) = self.cyclically_reduce(a)?;
        if c.is_identity() {
            return Err(TowerError::PreconditionViolated("identity has no minimal root".into()));
        }
        let (r, d) = self.root_of_cyclic(&c)?;
        Ok((self.nf(&r.conjugate_by(&y))?, d))
    }

    /// Largest-degree root of a cyclically reduced element.
    ///
    /// At level ℓ > 0 a root `w` of degree `d` repeats the last `L/d` stable
    /// syllables of `nf(c)`; only its head `g` is free, and the coset
    /// condition at the junction pins `g = s_L⁻¹ · gen^k · s_prev`.
    fn root_of_cyclic(&self, c: &Word) -> Result<(Word, u32)> {
        let lvl = c.max_stage();
        if lvl == 0 {
            let units: Vec<_> = c.units().collect();
            let n = units.len();
            for d in (2..=n).rev() {
                if n % d != 0 {
                    continue;
                }
                let p = n / d;
                if (0..n).all(|i| units[i] == units[i % p]) {
                    let root = Word::from_letters(units[..p].iter().map(|&(s, e)| Letter::new(s, e)));
                    return Ok((root, d as u32));
                }
            }
            return Ok((c.clone(), 1));
        }
        let syl = Syllables::split(c, lvl);
        let n = syl.tail.len();
        let data = Arc::clone(&self.steps[lvl - 1]);
        let bound = c.unit_len() + self.min_bound;
        for d in (2..=n).rev() {
            if !n.is_multiple_of(d) {
                continue;
            }
            let l = n / d;
            let block = Syllables {
                head: Word::identity(),
                tail: syl.tail[n - l..].to_vec(),
            }
            .assemble(lvl);
            let prev = if n == l { &syl.head } else { &syl.tail[n - l - 1].1 };
            let (last_sign, last) = (&syl.tail[n - 1].0, &syl.tail[n - 1].1);
            let gen = match &data.step.kind {
                StepKind::FreeProductZ => None,
                StepKind::Hnn { source, target } => Some(if *last_sign > 0 { source } else { target }),
            };
            let ks: Vec<i64> = match gen {
                None => vec![0],
                Some(_) => std::iter::once(0)
                    .chain((1..=bound as i64).flat_map(|k| [k, -k]))
                    .collect(),
            };
            for k in ks {
                let mid = gen.map(|g| g.pow(k)).unwrap_or_default();
                let head = last.inverse().concat(&mid).concat(prev);
                let cand = self.nf_level(&head.concat(&block), lvl, Strategy::Leftmost)?;
                if self.nf_level(&cand.pow(d as i64), lvl, Strategy::Leftmost)? == *c {
                    return Ok((cand, d as u32));
                }
            }
        }
        Ok((c.clone(), 1))
    }

    pub fn commutes(&self, a: &Word, b: &Word) -> Result<bool> {
        let comm = a.concat(b).concat(&a.inverse()).concat(&b.inverse());
        Ok(self.nf(&comm)?.is_identity())
    }

    /// Normal forms of unit length `<= radius` commuting with `y`.
    pub fn centralizer_ball(&self, y: &Word, radius: usize) -> Result<Vec<NormalForm>> {
        if self.nf(y)?.is_identity() {
            return Err(TowerError::PreconditionViolated("y must be non-trivial".into()));
        }
        let ball = self.ball(radius, self.len(), None, Exec::default())?;
        let hits = par::map(Exec::default(), &ball, |k| self.commutes(k, y));
        let mut out = Vec::new();
        for (k, hit) in ball.into_iter().zip(hits) {
            if hit? && k.unit_len() <= radius {
                out.push(NormalForm {
                    word: k,
                    tower_stage: self.len(),
                });
            }
        }
        Ok(out)
    }

    /// Distinct normal forms of all words of unit length `<= radius` over the
    /// letters of `stage`, sorted by (unit length, word).
    pub fn ball(&self, radius: usize, stage: usize, cap: Option<usize>, exec: Exec) -> Result<Vec<Word>> {
        let stage = stage.min(self.len());
        let raw = raw_ball(self.base_rank, stage, radius);
        let forms = par::map(exec, &raw, |w| self.nf_at(w, stage));
        let mut out = Vec::with_capacity(forms.len());
        for f in forms {
            out.push(f?);
        }
        out.sort_by(|a, b| (a.unit_len(), a).cmp(&(b.unit_len(), b)));
        out.dedup();
        if let Some(cap) = cap {
            if out.len() > cap {
                return Err(TowerError::CapExceeded { cap });
            }
        }
        Ok(out)
    }

    /// Whether `c` is conjugate to a non-zero power of some element of `gens`.
    ///
    /// Decided level by level with Collins' lemma. When the cyclically reduced
    /// `c` drops below a level, the family of generators is closed under the
    /// associated-subgroup identification of that step; the closure is exact
    /// when every Hnn source or target that meets the family is a power of a
    /// family member (or vice versa), which holds for the towers built in
    /// [`crate::construction`].
    pub fn conjugate_to_power(&self, c: &Word, gens: &[Word]) -> Result<bool> {
        let level = self.len();
        self.validate(c, level)?;
        let (c, _) = self.cyclically_reduce(c)?;
        if c.is_identity() {
            return Ok(false);
        }
        let lc = c.max_stage();
        let mut family: Vec<Word> = Vec::new();
        for g in gens {
            let g = self.nf(g)?;
            if !g.is_identity() && !family.contains(&g) {
                family.push(g);
            }
        }
        for j in (lc + 1..=level).rev() {
            let mut next = Vec::new();
            for g in &family {
                let (gc, _) = self.cyclic_reduce_level(g, j)?;
                if gc.max_stage() < j && !next.contains(&gc) {
                    next.push(gc);
                }
            }
            family = next;
            if let StepKind::Hnn { source, target } = &self.steps[j - 1].step.kind {
                for _ in 0..2 {
                    for (a, b) in [(source, target), (target, source)] {
                        if family.contains(b) {
                            continue;
                        }
                        let mut related = false;
                        for f in &family {
                            if self.related_powers(f, a, j - 1)? {
                                related = true;
                                break;
                            }
                        }
                        if related {
                            family.push(b.clone());
                        }
                    }
                }
            }
            if family.is_empty() {
                return Ok(false);
            }
        }
        for g in &family {
            let (gc, _) = self.cyclic_reduce_level(g, lc)?;
            if gc.max_stage() != lc {
                continue;
            }
            let (lg, lcl) = if lc == 0 {
                (gc.unit_len(), c.unit_len())
            } else {
                (gc.stage_length(lc), c.stage_length(lc))
            };
            if lg == 0 || lcl % lg != 0 {
                continue;
            }
            let n = (lcl / lg) as i64;
            for s in [n, -n] {
                let p = self.nf_level(&gc.pow(s), lc, Strategy::Leftmost)?;
                if self.cyclic_conjugate(&c, &p, lc)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn related_powers(&self, f: &Word, a: &Word, level: usize) -> Result<bool> {
        let cf = self.cyclic_gen(f, level)?;
        let ca = self.cyclic_gen(a, level)?;
        Ok(self.member(a, &cf, level, Some(usize::MAX))?.is_some()
            || self.member(f, &ca, level, Some(usize::MAX))?.is_some())
    }

    /// Conjugacy of two cyclically reduced elements of equal length at `level`.
    fn cyclic_conjugate(&self, u: &Word, v: &Word, level: usize) -> Result<bool> {
        if level == 0 {
            let a: Vec<_> = u.units().collect();
            let b: Vec<_> = v.units().collect();
            if a.len() != b.len() {
                return Ok(false);
            }
            let n = a.len();
            return Ok(n == 0 || (0..n).any(|s| (0..n).all(|i| a[i] == b[(i + s) % n])));
        }
        // Collins: u is a cyclic permutation of v ending in a stable letter,
        // conjugated by an element of an associated subgroup.
        let syl = Syllables::split(v, level);
        let n = syl.tail.len();
        let junction = syl.tail[n - 1].1.concat(&syl.head);
        let seg = |i: usize| if i == n - 1 { &junction } else { &syl.tail[i].1 };
        let data = Arc::clone(&self.steps[level - 1]);
        let conjugators: Vec<Word> = match &data.step.kind {
            StepKind::FreeProductZ => vec![Word::identity()],
            StepKind::Hnn { source, target } => {
                let k = (u.unit_len() + self.min_bound) as i64;
                let mut cs = vec![Word::identity()];
                for j in 1..=k {
                    for g in [source, target] {
                        cs.push(g.pow(j));
                        cs.push(g.pow(-j));
                    }
                }
                cs
            }
        };
        for i in 0..n {
            // segment after t^{e_i}, then cyclically on to t^{e_i}
            let mut rot = seg(i).clone();
            for j in 1..=n {
                let idx = (i + j) % n;
                rot.push(Letter::stable(level as u32, syl.tail[idx].0));
                if j < n {
                    rot.extend_from(seg(idx));
                }
            }
            for a in &conjugators {
                if self.nf_level(&rot.conjugate_by(a), level, Strategy::Leftmost)? == *u {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// The one-line-per-step description format.
    pub fn describe(&self) -> String {
        let mut s = format!("base rank={}\n", self.base_rank);
        for step in self.steps() {
            match &step.kind {
                StepKind::FreeProductZ => s.push_str(&format!("step {} freeZ\n", step.stage)),
                StepKind::Hnn { source, target } => {
                    s.push_str(&format!("step {} hnn source={source} target={target}\n", step.stage))
                }
            }
        }
        s
    }
}

fn free_cyclic_reduce(w: &Word) -> (Word, Word) {
    let mut cur = w.clone();
    let mut conj = Word::identity();
    loop {
        let ls = cur.letters();
        if ls.len() < 2 {
            return (cur, conj);
        }
        let (first, last) = (ls[0], ls[ls.len() - 1]);
        if first.symbol != last.symbol || first.exp.signum() == last.exp.signum() {
            return (cur, conj);
        }
        let m = first.exp.abs().min(last.exp.abs()) * first.exp.signum();
        let p = Word::letter(Letter::new(first.symbol, m));
        cur = cur.conjugate_by(&p.inverse());
        conj = conj.concat(&p);
    }
}

fn raw_ball(base_rank: u32, stage: usize, radius: usize) -> Vec<Word> {
    let mut alphabet = Vec::new();
    for i in 0..base_rank {
        alphabet.push(Symbol::Gen(i));
    }
    for s in 1..=stage {
        alphabet.push(Symbol::Stable(s as u32));
    }
    let mut out = vec![Word::identity()];
    let mut frontier: Vec<(Word, Option<(Symbol, i32)>)> = vec![(Word::identity(), None)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (w, last) in &frontier {
            for &sym in &alphabet {
                for e in [1, -1] {
                    if *last == Some((sym, -e)) {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(Letter::new(sym, e));
                    out.push(nw.clone());
                    next.push((nw, Some((sym, e))));
                }
            }
        }
        frontier = next;
    }
    out
}

impl FromStr for ExtensionTower {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut tower: Option<ExtensionTower> = None;
        for (ln, raw) in s.lines().enumerate() {
            let line = raw.trim();
            let line_no = ln + 1;
            let err = |msg: String| ParseError::Tower { line: line_no, msg };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("base") => {
                    let rank = toks
                        .next()
                        .and_then(|t| t.strip_prefix("rank="))
                        .and_then(|r| r.parse::<u32>().ok())
                        .filter(|&r| r > 0)
                        .ok_or_else(|| err("expected `base rank=<r>`".into()))?;
                    if tower.is_some() {
                        return Err(err("duplicate base line".into()));
                    }
                    tower = Some(ExtensionTower::new(rank));
                }
                Some("step") => {
                    let t = tower.as_mut().ok_or_else(|| err("step before base".into()))?;
                    let idx: usize = toks
                        .next()
                        .and_then(|i| i.parse().ok())
                        .ok_or_else(|| err("expected step index".into()))?;
                    if idx != t.len() + 1 {
                        return Err(err(format!("expected step {}, found {idx}", t.len() + 1)));
                    }
                    match toks.next() {
                        Some("freeZ") => {
                            t.push_free_z();
                        }
                        Some("hnn") => {
                            let rest: Vec<&str> = toks.collect();
                            let tpos = rest
                                .iter()
                                .position(|t| t.starts_with("target="))
                                .ok_or_else(|| err("missing target=".into()))?;
                            let src_toks = &rest[..tpos];
                            let first = src_toks
                                .first()
                                .and_then(|t| t.strip_prefix("source="))
                                .ok_or_else(|| err("missing source=".into()))?;
                            let src = std::iter::once(first)
                                .chain(src_toks[1..].iter().copied())
                                .collect::<Vec<_>>()
                                .join(" ");
                            let tgt = std::iter::once(rest[tpos].trim_start_matches("target="))
                                .chain(rest[tpos + 1..].iter().copied())
                                .collect::<Vec<_>>()
                                .join(" ");
                            let src: Word = src.parse().map_err(|e| err(format!("{e}")))?;
                            let tgt: Word = tgt.parse().map_err(|e| err(format!("{e}")))?;
                            t.push_hnn(&src, &tgt).map_err(|e| err(e.to_string()))?;
                        }
                        other => return Err(err(format!("unknown step kind {other:?}"))),
                    }
                }
                Some(other) => return Err(err(format!("unknown directive `{other}`"))),
                None => unreachable!(),
            }
        }
        tower.ok_or(ParseError::Tower {
            line: 0,
            msg: "missing base line".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    /// F(g0, g1) with `t1 g0 t1⁻¹ = g1`.
    fn hnn_xz() -> ExtensionTower {
        let mut t = ExtensionTower::new(2);
        t.push_hnn(&w("g0"), &w("g1")).unwrap();
        t
    }

    fn free_z(rank: u32) -> ExtensionTower {
        let mut t = ExtensionTower::new(rank);
        t.push_free_z();
        t
    }

    /// Brute-force unit-relation rewriting for a single Hnn step over a free
    /// base: repeatedly rewrite `t1 g0^k t1⁻¹ → g1^k` and `t1⁻¹ g1^k t1 → g0^k`.
    fn rewrite_oracle(word: &Word) -> Word {
        let mut cur = word.clone();
        loop {
            let ls = cur.letters().to_vec();
            let mut changed = false;
            for i in 0..ls.len().saturating_sub(2) {
                let (a, b, c) = (ls[i], ls[i + 1], ls[i + 2]);
                if a.symbol == Symbol::Stable(1) && c.symbol == Symbol::Stable(1) && a.exp.signum() == -c.exp.signum() {
                    let img = match (a.exp.signum(), b.symbol) {
                        (1, Symbol::Gen(0)) => Some(Symbol::Gen(1)),
                        (-1, Symbol::Gen(1)) => Some(Symbol::Gen(0)),
                        _ => None,
                    };
                    if let Some(img) = img {
                        let mut out = Word::from_letters(ls[..i].iter().copied());
                        out.push(Letter::new(a.symbol, a.exp - a.exp.signum()));
                        out.push(Letter::new(img, b.exp));
                        out.push(Letter::new(c.symbol, c.exp - c.exp.signum()));
                        out.extend_from(&Word::from_letters(ls[i + 3..].iter().copied()));
                        cur = out;
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    #[test]
    fn britton_examples() {
        let t = hnn_xz();
        assert_eq!(
            t.britton_reduce(&w("t1 g0 t1^-1"), Strategy::Leftmost).unwrap(),
            w("g1")
        );
        assert_eq!(
            t.britton_reduce(&w("t1 t1^-1"), Strategy::Leftmost).unwrap(),
            Word::identity()
        );
        let oracle = rewrite_oracle(&w("t1^-1 g1^3 t1"));
        assert_eq!(oracle, w("g0^3"));
        assert_eq!(
            t.britton_reduce(&w("t1^-1 g1^3 t1"), Strategy::Leftmost).unwrap(),
            oracle
        );
    }

    #[test]
    fn normal_form_examples() {
        let t = hnn_xz();
        let oracle = rewrite_oracle(&w("g0^2 t1 g0 t1^-1"));
        assert_eq!(oracle, w("g0^2 g1"));
        assert_eq!(t.nf(&w("g0^2 t1 g0 t1^-1")).unwrap(), oracle);
        assert_eq!(t.nf(&Word::identity()).unwrap(), Word::identity());
        // t·x = z·t, and x is in ⟨source⟩ so its coset representative is e.
        assert_eq!(t.nf(&w("t1 g0")).unwrap(), w("g1 t1"));
    }

    #[test]
    fn in_cyclic_examples() {
        let f = ExtensionTower::new(2);
        assert_eq!(f.in_cyclic(&w("g0^5"), &w("g0"), None).unwrap(), Some(5));
        // oracle: enumerate g0^k, |k| <= 16
        assert!((-16..=16).all(|k| f.nf(&w("g0").pow(k)).unwrap() != w("g1")));
        assert_eq!(f.in_cyclic(&w("g1"), &w("g0"), None).unwrap(), None);
        assert_eq!(f.in_cyclic(&Word::identity(), &w("g0"), None).unwrap(), Some(0));
        assert!(f.in_cyclic(&w("g0"), &Word::identity(), None).is_err());
    }

    #[test]
    fn in_cyclic_respects_bound() {
        let f = ExtensionTower::new(1).with_min_bound(2);
        assert_eq!(f.in_cyclic(&w("g0^5"), &w("g0"), Some(5)).unwrap(), Some(5));
        assert!(matches!(
            f.in_cyclic(&w("g0^5"), &w("g0"), Some(3)),
            Err(TowerError::MembershipUndecided { .. })
        ));
    }

    #[test]
    fn in_cyclic_with_conjugated_generator() {
        let t = hnn_xz();
        let g = w("g1 t1 g0 g1 t1^-1 g1^-1");
        let target = g.pow(3);
        assert_eq!(t.in_cyclic(&target, &g, None).unwrap(), Some(3));
        assert_eq!(t.in_cyclic(&g.pow(-2), &g, None).unwrap(), Some(-2));
        assert_eq!(t.in_cyclic(&w("t1"), &g, None).unwrap(), None);
    }

    /// Length-minimization oracle over k ∈ [-6, 6], ties on the word order.
    fn coset_oracle(t: &ExtensionTower, a: &Word, g: &Word) -> (i64, Word) {
        (-6..=6)
            .map(|k| (k, t.nf(&g.pow(-k).concat(a)).unwrap()))
            .min_by(|x, y| (x.1.unit_len(), &x.1).cmp(&(y.1.unit_len(), &y.1)))
            .unwrap()
    }

    #[test]
    fn coset_rep_examples() {
        let f = ExtensionTower::new(2);
        assert_eq!(coset_oracle(&f, &w("g0^3 g1"), &w("g0")), (3, w("g1")));
        assert_eq!(f.coset_rep(&w("g0^3 g1"), &w("g0")).unwrap(), (3, w("g1")));
        assert_eq!(f.coset_rep(&w("g0^2"), &w("g0")).unwrap(), (2, Word::identity()));
        assert_eq!(coset_oracle(&f, &w("g1 g0"), &w("g0")), (0, w("g1 g0")));
        assert_eq!(f.coset_rep(&w("g1 g0"), &w("g0")).unwrap(), (0, w("g1 g0")));
    }

    #[test]
    fn coset_rep_is_a_coset_invariant() {
        // g0 and g0^-1 lie in the same right coset of <g0^2>.
        let f = ExtensionTower::new(1);
        let (_, r1) = f.coset_rep(&w("g0"), &w("g0^2")).unwrap();
        let (_, r2) = f.coset_rep(&w("g0^-1"), &w("g0^2")).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn cyclically_reduce_examples() {
        let f = ExtensionTower::new(2);
        assert_eq!(f.cyclically_reduce(&w("g1 g0 g1^-1")).unwrap(), (w("g0"), w("g1")));
        let t = free_z(1);
        assert_eq!(
            t.cyclically_reduce(&w("g0 t1")).unwrap(),
            (w("g0 t1"), Word::identity())
        );
        for rot in w("g0 t1").cyclic_permutations() {
            assert_eq!(t.britton_reduce(&rot, Strategy::Leftmost).unwrap(), rot);
        }
        let h = hnn_xz();
        assert_eq!(
            h.cyclically_reduce(&w("t1 g0 t1^-1")).unwrap(),
            (w("g1"), Word::identity())
        );
    }

    #[test]
    fn cyclically_reduce_conjugator_is_correct() {
        let h = hnn_xz();
        for s in [
            "g1 t1 g0 t1 g1^-1",
            "t1 g1 t1^-1",
            "g0 t1^-1 g1 t1 g0 g1",
            "t1^-1 g0 t1 g1 t1^-1 g0^-1 t1",
        ] {
            let a = w(s);
            let (c, y) = h.cyclically_reduce(&a).unwrap();
            assert!(h.equal(&c.conjugate_by(&y), &a).unwrap(), "{s}");
        }
    }

    #[test]
    fn cyclically_reduced_elements() {
        let t = free_z(2);
        assert!(t.is_cyclically_reduced(&w("g1 t1 g1")).unwrap());
        assert!(!t.is_cyclically_reduced(&w("g1 t1 g0 t1^-1 g1^-1")).unwrap());
        let h = hnn_xz();
        assert!(!h.is_cyclically_reduced(&w("t1 g0 g1 t1^-1")).unwrap());
        assert!(!h.is_cyclically_reduced(&w("t1 g1 t1^-1 g1")).unwrap());
        assert!(h.is_cyclically_reduced(&w("t1 g1 t1 g1")).unwrap());
        assert!(h.is_cyclically_reduced(&w("t1 g1")).unwrap());
        assert!(h.is_cyclically_reduced(&w("g0 t1 g1 t1^-1")).unwrap());
        assert!(!ExtensionTower::new(2).is_cyclically_reduced(&w("g0 g1 g0^-1")).unwrap());
    }

    #[test]
    fn conjugate_into_base_examples() {
        let f = ExtensionTower::new(2);
        assert!(f.is_conjugate_into_base(&w("g1 g0 g1^-1"), 1).unwrap());
        let t = free_z(1);
        assert!(!t.is_conjugate_into_base(&w("t1"), 1).unwrap());
        let h = hnn_xz();
        assert!(h.is_conjugate_into_base(&w("t1 g0 t1^-1"), 1).unwrap());
    }

    #[test]
    fn minimal_root_examples() {
        let t = free_z(1);
        assert_eq!(t.minimal_root(&w("t1 g0").pow(3)).unwrap(), (w("t1 g0"), 3));
        assert_eq!(t.minimal_root(&w("t1")).unwrap(), (w("t1"), 1));
        let a = w("g0 t1").pow(2).concat(&w("g0 t1"));
        let (r, d) = t.minimal_root(&a).unwrap();
        assert_eq!(d, 3);
        assert!(t.equal(&r, &w("g0 t1")).unwrap());
        assert!(matches!(
            t.minimal_root(&w("g0")),
            Err(TowerError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn minimal_root_through_hnn_junction() {
        let h = hnn_xz();
        for root in ["t1 g1", "t1 g1 g0", "g0 t1^-1 g1^2", "t1 g1 t1 g0^-1 g1"] {
            let r = w(root);
            for d in 1..=3 {
                let (found, deg) = h.minimal_root(&r.pow(d)).unwrap();
                assert_eq!(deg as i64, d, "{root}^{d}");
                assert!(h.equal(&found, &r).unwrap(), "{root}^{d}: got {found}");
            }
        }
    }

    #[test]
    fn commutes_examples() {
        let f = ExtensionTower::new(2);
        assert!(f.commutes(&w("g0"), &w("g0^2")).unwrap());
        assert!(!f.commutes(&w("g0"), &w("g1")).unwrap());
        assert!(f.commutes(&Word::identity(), &w("g1 g0")).unwrap());
    }

    #[test]
    fn centralizer_ball_examples() {
        let f = ExtensionTower::new(2);
        let c: Vec<Word> = f
            .centralizer_ball(&w("g0"), 2)
            .unwrap()
            .into_iter()
            .map(|n| n.word)
            .collect();
        let expect = vec![Word::identity(), w("g0"), w("g0^-1"), w("g0^2"), w("g0^-2")];
        let mut c_sorted = c.clone();
        c_sorted.sort();
        let mut e_sorted = expect.clone();
        e_sorted.sort();
        assert_eq!(c_sorted, e_sorted);
        let h = hnn_xz();
        for k in h.centralizer_ball(&w("g0"), 1).unwrap() {
            assert_eq!(k.word.stage_length(1), 0);
        }
        assert_eq!(f.centralizer_ball(&w("g0"), 0).unwrap().len(), 1);
    }

    #[test]
    fn conjugacy_to_powers() {
        let h = hnn_xz();
        let x = [w("g0")];
        assert!(h.conjugate_to_power(&w("g1"), &x).unwrap());
        assert!(h.conjugate_to_power(&w("g1^-3"), &x).unwrap());
        assert!(h.conjugate_to_power(&w("t1 g1 t1^-1"), &x).unwrap());
        assert!(h.conjugate_to_power(&w("g0 t1 g0^2 t1^-1 g0^-1"), &x).unwrap());
        assert!(!h.conjugate_to_power(&w("g0 g1"), &x).unwrap());
        assert!(!h.conjugate_to_power(&w("t1"), &x).unwrap());
        let f = free_z(2);
        assert!(!f.conjugate_to_power(&w("g1"), &x).unwrap());
        assert!(f.conjugate_to_power(&w("t1 g0^2 t1^-1"), &x).unwrap());
        assert!(f.conjugate_to_power(&w("g1 g0 t1 g0 t1 g1^-1"), &[w("g0 t1")]).unwrap());
        assert!(f.conjugate_to_power(&w("t1 g0 t1 g0 t1^-1"), &[w("g0^2 t1")]).unwrap());
        assert!(!f.conjugate_to_power(&w("t1 g0 t1 g0 t1^-1"), &[w("g0 t1")]).unwrap());
    }

    #[test]
    fn tower_file_round_trip() {
        let text = "base rank=2\nstep 1 freeZ\nstep 2 hnn source=g0 target=g1 t1 g1\n";
        let t: ExtensionTower = text.parse().unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.describe(), text);
        let again: ExtensionTower = t.describe().parse().unwrap();
        assert_eq!(again, t);
        assert!("step 1 freeZ".parse::<ExtensionTower>().is_err());
        assert!("base rank=2\nstep 2 freeZ".parse::<ExtensionTower>().is_err());
        assert!("base rank=2\nstep 1 hnn source=e target=g1"
            .parse::<ExtensionTower>()
            .is_err());
        assert!("base rank=2\nstep 1 hnn source=g5 target=g1"
            .parse::<ExtensionTower>()
            .is_err());
    }

    #[test]
    fn ball_sizes() {
        let f = ExtensionTower::new(1);
        assert_eq!(
            f.ball(2, 0, None, Exec::Sequential).unwrap(),
            vec![Word::identity(), w("g0^-1"), w("g0"), w("g0^-2"), w("g0^2")]
        );
        assert!(matches!(
            f.ball(2, 0, Some(3), Exec::Sequential),
            Err(TowerError::CapExceeded { cap: 3 })
        ));
    }
}

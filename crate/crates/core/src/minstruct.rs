//! The ordered exponent-2 group `F = ⊕ ℤ₂ e_i` with the degree order and the
//! gap predicates `P_n`, over two index orders: `ω`, and `I`, where every
//! infinite ordinal is replaced by a copy of `ℤ` (finitely many copies here).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinError {
    #[error("elements come from different index orders")]
    ModeMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Omega,
    I,
}

/// A basis index. `I(0, k)` with `k >= 0` is the finite ordinal `k`;
/// `I(c, z)` with `c >= 1` is position `z` of the `c`-th copy of `ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexPoint {
    Omega(u32),
    I(u32, i64),
}

impl IndexPoint {
    pub fn mode(self) -> Mode {
        match self {
            IndexPoint::Omega(_) => Mode::Omega,
            IndexPoint::I(..) => Mode::I,
        }
    }

    pub fn successor(self) -> IndexPoint {
        match self {
            IndexPoint::Omega(n) => IndexPoint::Omega(n + 1),
            IndexPoint::I(c, z) => IndexPoint::I(c, z + 1),
        }
    }

    /// `None` for the first point of the order.
    pub fn predecessor(self) -> Option<IndexPoint> {
        match self {
            IndexPoint::Omega(0) | IndexPoint::I(0, 0) => None,
            IndexPoint::Omega(n) => Some(IndexPoint::Omega(n - 1)),
            IndexPoint::I(c, z) => Some(IndexPoint::I(c, z - 1)),
        }
    }

    /// Number of points strictly between, `None` when infinite.
    pub fn gap(lo: Option<IndexPoint>, hi: IndexPoint) -> Option<u64> {
        match (lo, hi) {
            (None, IndexPoint::Omega(n)) => Some(n as u64),
            (None, IndexPoint::I(0, k)) => Some(k as u64),
            (None, IndexPoint::I(..)) => None,
            (Some(IndexPoint::Omega(a)), IndexPoint::Omega(b)) => Some((b - a - 1) as u64),
            (Some(IndexPoint::I(c, a)), IndexPoint::I(d, b)) if c == d => Some((b - a - 1) as u64),
            (Some(IndexPoint::I(..)), IndexPoint::I(..)) => None,
            _ => unreachable!("gap across modes"),
        }
    }
}

impl fmt::Display for IndexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexPoint::Omega(n) => write!(f, "{n}"),
            IndexPoint::I(c, z) => write!(f, "({c},{z})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct F2Element {
    mode: Mode,
    support: BTreeSet<IndexPoint>,
}

impl F2Element {
    pub fn zero(mode: Mode) -> Self {
        F2Element {
            mode,
            support: BTreeSet::new(),
        }
    }

    pub fn basis(p: IndexPoint) -> Self {
        F2Element {
            mode: p.mode(),
            support: [p].into(),
        }
    }

    pub fn from_points(mode: Mode, points: impl IntoIterator<Item = IndexPoint>) -> Result<Self, MinError> {
        let mut e = F2Element::zero(mode);
        for p in points {
            if p.mode() != mode {
                return Err(MinError::ModeMismatch);
            }
            if !e.support.remove(&p) {
                e.support.insert(p);
            }
        }
        Ok(e)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn support(&self) -> &BTreeSet<IndexPoint> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Largest support point, `None` for 0.
    pub fn degree(&self) -> Option<IndexPoint> {
        self.support.last().copied()
    }

    pub fn parse(s: &str, mode: Mode) -> Result<Self, ParseError> {
        let e: F2Element = s.parse()?;
        if e.is_zero() {
            return Ok(F2Element::zero(mode));
        }
        if e.mode != mode {
            return Err(ParseError::Element(format!("`{s}` is not a {mode:?} element")));
        }
        Ok(e)
    }
}

impl fmt::Display for F2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for F2Element {
    type Err = ParseError;

    /// `{0,3,5}` for `ω`, `{(0,2),(3,-1)}` for `I`; `{}` is 0 in `ω`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = |m: &str| ParseError::Element(format!("{m} in `{s}`"));
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| bad("expected braces"))?
            .trim();
        if inner.is_empty() {
            return Ok(F2Element::zero(Mode::Omega));
        }
        let mode = if inner.contains('(') { Mode::I } else { Mode::Omega };
        let mut points = Vec::new();
        match mode {
            Mode::Omega => {
                for tok in inner.split(',') {
                    points.push(IndexPoint::Omega(tok.trim().parse().map_err(|_| bad("bad index"))?));
                }
            }
            Mode::I => {
                let mut rest = inner;
                while !rest.is_empty() {
                    let open = rest.strip_prefix('(').ok_or_else(|| bad("expected `(`"))?;
                    let close = open.find(')').ok_or_else(|| bad("expected `)`"))?;
                    let (c, z) = open[..close].split_once(',').ok_or_else(|| bad("expected a pair"))?;
                    let c: u32 = c.trim().parse().map_err(|_| bad("bad copy"))?;
                    let z: i64 = z.trim().parse().map_err(|_| bad("bad offset"))?;
                    if c == 0 && z < 0 {
                        return Err(bad("finite ordinals are non-negative"));
                    }
                    points.push(IndexPoint::I(c, z));
                    rest = open[close + 1..].trim_start();
                    rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
                }
            }
        }
        let n = points.len();
        let set: BTreeSet<_> = points.iter().copied().collect();
        if set.len() != n {
            return Err(bad("repeated index"));
        }
        F2Element::from_points(mode, points).map_err(|e| ParseError::Element(e.to_string()))
    }
}

pub fn add(a: &F2Element, b: &F2Element) -> Result<F2Element, MinError> {
    if a.mode != b.mode {
        return Err(MinError::ModeMismatch);
    }
    Ok(F2Element {
        mode: a.mode,
        support: a.support.symmetric_difference(&b.support).copied().collect(),
    })
}

/// Degree comparison; `0 < b` iff `b ≠ 0`.
pub fn less(a: &F2Element, b: &F2Element) -> Result<bool, MinError> {
    if a.mode != b.mode {
        return Err(MinError::ModeMismatch);
    }
    Ok(match (a.degree(), b.degree()) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(x), Some(y)) => x < y,
    })
}

pub fn sim(a: &F2Element, b: &F2Element) -> Result<bool, MinError> {
    Ok(!less(a, b)? && !less(b, a)?)
}

/// Longest chain strictly between `a < b`, `None` when unbounded.
pub fn chain_gap(a: &F2Element, b: &F2Element) -> Result<Option<u64>, MinError> {
    if !less(a, b)? {
        return Ok(Some(0));
    }
    Ok(IndexPoint::gap(a.degree(), b.degree().expect("b > a is non-zero")))
}

pub fn p_n(n: u64, a: &F2Element, b: &F2Element) -> Result<bool, MinError> {
    Ok(less(a, b)? && chain_gap(a, b)? == Some(n))
}

/// Brute-force chain lengths over a finite pool, using only [`less`].
///
/// The pool is sorted by `less` and split into runs of `~`-equivalent
/// elements; the longest chain strictly between `a` and `b` takes one
/// element from each run lying strictly between them.
pub struct ChainOracle {
    reps: Vec<F2Element>,
}

impl ChainOracle {
    pub fn new(pool: &[F2Element]) -> Self {
        let mut sorted = pool.to_vec();
        sorted.sort_by(|x, y| {
            if less(x, y).unwrap() {
                std::cmp::Ordering::Less
            } else if less(y, x).unwrap() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        let mut reps: Vec<F2Element> = Vec::new();
        for e in sorted {
            if reps.last().is_none_or(|r| less(r, &e).unwrap()) {
                reps.push(e);
            }
        }
        ChainOracle { reps }
    }

    pub fn classes(&self) -> usize {
        self.reps.len()
    }

    pub fn longest_between(&self, a: &F2Element, b: &F2Element) -> usize {
        self.reps
            .iter()
            .filter(|r| less(a, r).unwrap() && less(r, b).unwrap())
            .count()
    }

    /// Whether `hi` is an immediate `<*`-successor of `lo` within the pool.
    pub fn immediate(&self, lo: &F2Element, hi: &F2Element) -> bool {
        less(lo, hi).unwrap() && self.longest_between(lo, hi) == 0
    }
}

/// Finite slice of a mode on which the axioms are checked.
#[derive(Clone, Debug)]
pub struct Domain {
    pub mode: Mode,
    /// Index points of the slice, increasing.
    pub points: Vec<IndexPoint>,
    pub elements: Vec<F2Element>,
    /// Singletons on a wider window, used by the chain oracle.
    pub pool: Vec<F2Element>,
    pub closed: bool,
}

impl Domain {
    /// All subsets of `{0, …, bound−1}`.
    pub fn omega(bound: u32) -> Self {
        let points: Vec<IndexPoint> = (0..bound).map(IndexPoint::Omega).collect();
        let elements = subsets(Mode::Omega, &points, points.len());
        Domain {
            mode: Mode::Omega,
            pool: elements.clone(),
            points,
            elements,
            closed: true,
        }
    }

    /// Finite ordinals `0..bound`, three `ℤ`-copies cut to `[−bound, bound]`,
    /// elements of support size at most 2. The chain pool extends every
    /// window by `reach` points on each side.
    pub fn mode_i(bound: i64, copies: u32, reach: i64) -> Self {
        let window = |ext: i64| -> Vec<IndexPoint> {
            let mut pts: Vec<IndexPoint> = (0..bound + ext).map(|k| IndexPoint::I(0, k)).collect();
            for c in 1..=copies {
                pts.extend((-bound - ext..=bound + ext).map(|z| IndexPoint::I(c, z)));
            }
            pts
        };
        let points = window(0);
        let elements = subsets(Mode::I, &points, 2);
        let mut pool = vec![F2Element::zero(Mode::I)];
        pool.extend(window(reach).into_iter().map(F2Element::basis));
        Domain {
            mode: Mode::I,
            points,
            elements,
            pool,
            closed: false,
        }
    }
}

fn subsets(mode: Mode, points: &[IndexPoint], max_support: usize) -> Vec<F2Element> {
    let n = points.len();
    let mut out = Vec::new();
    if max_support >= n {
        for mask in 0u64..(1 << n) {
            let pts = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| points[i]);
            out.push(F2Element::from_points(mode, pts).expect("single mode"));
        }
    } else {
        fn rec(
            mode: Mode,
            points: &[IndexPoint],
            start: usize,
            left: usize,
            cur: &mut Vec<IndexPoint>,
            out: &mut Vec<F2Element>,
        ) {
            out.push(F2Element::from_points(mode, cur.iter().copied()).expect("single mode"));
            if left == 0 {
                return;
            }
            for i in start..points.len() {
                cur.push(points[i]);
                rec(mode, points, i + 1, left - 1, cur, out);
                cur.pop();
            }
        }
        rec(mode, points, 0, max_support, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub mode: Mode,
    pub domain_size: usize,
    pub pool_size: usize,
    pub p_bound: u64,
    pub axioms: Vec<AxiomVerdict>,
    /// `0 ~ 0` while `0 + 0 < 0` fails, so the second clause of the
    /// sum axiom is checked for `x ≠ 0` only.
    pub zero_exception: bool,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

struct Check {
    checked: u64,
    bad: Option<String>,
}

impl Check {
    fn new() -> Self {
        Check { checked: 0, bad: None }
    }

    fn assert(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.bad.is_none() {
            self.bad = Some(what());
        }
    }

    fn done(self, axiom: u8, name: &'static str) -> AxiomVerdict {
        AxiomVerdict {
            axiom,
            name,
            passed: self.bad.is_none(),
            checked: self.checked,
            counterexample: self.bad,
        }
    }
}

/// Mode `ω`: all `2^bound` elements over `{0, …, bound−1}`.
/// Mode `I`: see [`Domain::mode_i`] with three copies.
pub fn axiom_suite(mode: Mode, domain_bound: u32) -> AxiomReport {
    let dom = match mode {
        Mode::Omega => Domain::omega(domain_bound),
        Mode::I => Domain::mode_i(domain_bound as i64, 3, domain_bound as i64 + 2),
    };
    check_domain(&dom, domain_bound as u64)
}

pub fn check_domain(dom: &Domain, p_bound: u64) -> AxiomReport {
    let els = &dom.elements;
    let n = els.len();
    let zero = F2Element::zero(dom.mode);
    let lt: Vec<Vec<bool>> = els
        .iter()
        .map(|a| els.iter().map(|b| less(a, b).unwrap()).collect())
        .collect();
    let show = |xs: &[&F2Element]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");

    // 1: group of exponent 2
    let mut c1 = Check::new();
    // Elements as bitmasks over the domain points; the pairwise loop pins
    // mask XOR to `add`, the triple loop then runs on masks.
    let pos: std::collections::HashMap<IndexPoint, usize> =
        dom.points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mask = |e: &F2Element| -> Option<u64> { e.support.iter().map(|p| pos.get(p).map(|i| 1u64 << i)).sum() };
    let masks: Vec<u64> = els
        .iter()
        .map(|e| mask(e).expect("domain element over domain points"))
        .collect();
    let members: BTreeSet<u64> = masks.iter().copied().collect();
    for (i, a) in els.iter().enumerate() {
        c1.assert(add(a, &zero).unwrap() == *a, || show(&[a]));
        c1.assert(add(a, a).unwrap().is_zero(), || show(&[a]));
        for (j, b) in els.iter().enumerate() {
            let s = add(a, b).unwrap();
            c1.assert(s == add(b, a).unwrap(), || show(&[a, b]));
            c1.assert(mask(&s) == Some(masks[i] ^ masks[j]), || show(&[a, b]));
            if dom.closed {
                c1.assert(members.contains(&mask(&s).unwrap_or(u64::MAX)), || {
                    format!("not closed: {}", show(&[a, b]))
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = masks[i] ^ masks[j];
            for k in 0..n {
                c1.assert(ij ^ masks[k] == masks[i] ^ (masks[j] ^ masks[k]), || {
                    show(&[&els[i], &els[j], &els[k]])
                });
            }
        }
    }

    // 2: 0 below every non-zero element
    let mut c2 = Check::new();
    for a in els.iter().filter(|a| !a.is_zero()) {
        c2.assert(less(&zero, a).unwrap(), || show(&[a]));
    }

    // 3: P_n against the chain oracle
    let oracle = ChainOracle::new(&dom.pool);
    let mut c3 = Check::new();
    for a in els {
        for b in els {
            let chain = oracle.longest_between(a, b) as u64;
            let lt_ab = less(a, b).unwrap();
            for k in 0..=p_bound {
                c3.assert(p_n(k, a, b).unwrap() == (lt_ab && chain == k), || {
                    format!("P_{k} {}", show(&[a, b]))
                });
            }
        }
    }

    // 4: ~ is an equivalence
    let simm = |i: usize, j: usize| !lt[i][j] && !lt[j][i];
    let mut c4 = Check::new();
    for i in 0..n {
        c4.assert(simm(i, i), || show(&[&els[i]]));
        for j in 0..n {
            c4.assert(simm(i, j) == simm(j, i), || show(&[&els[i], &els[j]]));
            if !simm(i, j) {
                continue;
            }
            for k in 0..n {
                if simm(j, k) {
                    c4.assert(simm(i, k), || show(&[&els[i], &els[j], &els[k]]));
                }
            }
        }
    }

    // 5: < respects ~ on both sides
    let mut c5 = Check::new();
    for i in 0..n {
        for j in 0..n {
            if !simm(i, j) {
                continue;
            }
            for k in 0..n {
                c5.assert(!lt[i][k] || lt[j][k], || show(&[&els[i], &els[j], &els[k]]));
                c5.assert(!lt[k][i] || lt[k][j], || show(&[&els[i], &els[j], &els[k]]));
            }
        }
    }

    // 6: <* is linear with least class [0]; immediate neighbours exist
    let mut c6 = Check::new();
    for i in 0..n {
        c6.assert(!lt[i][i], || show(&[&els[i]]));
        for j in 0..n {
            let exactly_one = [lt[i][j], lt[j][i], simm(i, j)].iter().filter(|&&x| x).count() == 1;
            c6.assert(exactly_one, || show(&[&els[i], &els[j]]));
            if !lt[i][j] {
                continue;
            }
            for k in 0..n {
                if lt[j][k] {
                    c6.assert(lt[i][k], || show(&[&els[i], &els[j], &els[k]]));
                }
            }
        }
        c6.assert(els[i].is_zero() || less(&zero, &els[i]).unwrap(), || show(&[&els[i]]));
    }
    let first = F2Element::basis(match dom.mode {
        Mode::Omega => IndexPoint::Omega(0),
        Mode::I => IndexPoint::I(0, 0),
    });
    c6.assert(oracle.immediate(&zero, &first), || "no successor of [0]".into());
    for d in dom.points.iter() {
        let e = F2Element::basis(*d);
        let succ = F2Element::basis(d.successor());
        c6.assert(oracle.immediate(&e, &succ), || format!("successor of {e}"));
        let pred = d.predecessor().map(F2Element::basis).unwrap_or_else(|| zero.clone());
        c6.assert(oracle.immediate(&pred, &e), || format!("predecessor of {e}"));
    }

    // 7: sums
    let mut c7 = Check::new();
    for a in els {
        for b in els {
            let s = add(a, b).unwrap();
            if less(a, b).unwrap() {
                c7.assert(sim(&s, b).unwrap(), || show(&[a, b]));
            }
            if sim(a, b).unwrap() && !a.is_zero() {
                c7.assert(less(&s, a).unwrap(), || show(&[a, b]));
            }
        }
    }

    AxiomReport {
        mode: dom.mode,
        domain_size: n,
        pool_size: dom.pool.len(),
        p_bound,
        axioms: vec![
            c1.done(1, "exponent-2 group"),
            c2.done(2, "zero is least"),
            c3.done(3, "gap predicates"),
            c4.done(4, "~ is an equivalence"),
            c5.done(5, "< respects ~"),
            c6.done(6, "<* linear with neighbours"),
            c7.done(7, "sum axiom"),
        ],
        zero_exception: !less(&add(&zero, &zero).unwrap(), &zero).unwrap(),
    }
}

/// `P_n` closed form against the chain oracle on every pair of elements
/// with support inside `{0, …, support−1}`; returns the mismatches.
pub fn p_n_matches_oracle(support: u32, p_bound: u64) -> Vec<String> {
    let dom = Domain::omega(support);
    let oracle = ChainOracle::new(&dom.pool);
    let mut bad = Vec::new();
    for a in &dom.elements {
        for b in &dom.elements {
            let chain = oracle.longest_between(a, b) as u64;
            let lt = less(a, b).unwrap();
            for k in 0..=p_bound {
                if p_n(k, a, b).unwrap() != (lt && chain == k) {
                    bad.push(format!("P_{k} {a} {b}"));
                }
            }
        }
    }
    bad
}

pub fn embed(a: &F2Element) -> F2Element {
    let pts = a.support.iter().map(|p| match p {
        IndexPoint::Omega(i) => IndexPoint::I(0, *i as i64),
        other => *other,
    });
    F2Element::from_points(Mode::I, pts).expect("single mode")
}

/// `i ↦ (0, i)` preserves `+`, `<` and every `P_n`, `n <= bound`, on all
/// elements with support in `{0, …, bound−1}`.
pub fn embedding_check(bound: u32) -> bool {
    let dom = Domain::omega(bound);
    if !embed(&F2Element::zero(Mode::Omega)).is_zero() {
        return false;
    }
    for a in &dom.elements {
        for b in &dom.elements {
            let (ea, eb) = (embed(a), embed(b));
            if embed(&add(a, b).unwrap()) != add(&ea, &eb).unwrap() {
                return false;
            }
            if less(a, b).unwrap() != less(&ea, &eb).unwrap() {
                return false;
            }
            for k in 0..=bound as u64 {
                if p_n(k, a, b).unwrap() != p_n(k, &ea, &eb).unwrap() {
                    return false;
                }
            }
        }
    }
    true
}

//! Exact matrix identities for multiplication by `αa + 1` in a simple
//! extension `K(a)` with minimal polynomial
//! `f = X^n − b_{n−1}X^{n−1} − … − b_0`, in the basis `1, a, …, a^{n−1}`.
//!
//! Scalars are exact rationals. The symbolic mode treats `α` and `β` as
//! indeterminates over ℚ and never divides: the inverse is handled through
//! its numerator matrix and the common denominator `1 + αq_m`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::error::ParseError;
use crate::par::{self, Exec};

pub type RationalScalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("1 + α·q_m vanishes at α = {0}")]
    SingularDenominator(String),
}

/// Commutative ring operations needed by the matrix code.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &BigRational) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::Field(format!("bad scalar `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Polynomial in `α`, `β` over ℚ; keys are `(deg_α, deg_β)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BivariatePoly {
    pub fn constant(q: &BigRational) -> Self {
        let mut p = BivariatePoly::default();
        p.insert((0, 0), q.clone());
        p
    }

    pub fn alpha() -> Self {
        let mut p = BivariatePoly::default();
        p.insert((1, 0), rational(1));
        p
    }

    pub fn beta() -> Self {
        let mut p = BivariatePoly::default();
        p.insert((0, 1), rational(1));
        p
    }

    fn insert(&mut self, k: (u32, u32), c: BigRational) {
        let e = self.terms.entry(k).or_insert_with(<BigRational as Zero>::zero);
        *e += c;
        if Zero::is_zero(e) {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.terms
    }

    pub fn eval(&self, alpha: &BigRational, beta: &BigRational) -> BigRational {
        self.terms
            .iter()
            .fold(<BigRational as Zero>::zero(), |acc, (&(i, j), c)| {
                acc + c * Ring::pow(alpha, i) * Ring::pow(beta, j)
            })
    }
}

impl Ring for BivariatePoly {
    fn zero() -> Self {
        BivariatePoly::default()
    }
    fn one() -> Self {
        BivariatePoly::constant(&rational(1))
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &o.terms {
            out.insert(k, c.clone());
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = BivariatePoly::default();
        for (&(a, b), c) in &self.terms {
            for (&(d, e), f) in &o.terms {
                out.insert((a + d, b + e), c * f);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        BivariatePoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(q: &BigRational) -> Self {
        if Zero::is_zero(q) {
            BivariatePoly::default()
        } else {
            BivariatePoly::constant(q)
        }
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", format_rational(c))?;
            if i > 0 {
                write!(f, "·α^{i}")?;
            }
            if j > 0 {
                write!(f, "·β^{j}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Ring> SquareMatrix<T> {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(T::zero(), |acc, k| acc.add(&self.get(i, k).mul(o.get(k, j))))
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j).mul(s))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }
}

impl SquareMatrix<BigRational> {
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .into_iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect()
    }
}

/// `f = X^n − b_{n−1}X^{n−1} − … − b_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtFieldSpec {
    pub n: usize,
    pub b: Vec<BigRational>,
}

impl ExtFieldSpec {
    pub fn new(b: Vec<BigRational>) -> Result<Self, ParseError> {
        if b.len() < 2 {
            return Err(ParseError::Field("degree must be at least 2".into()));
        }
        Ok(ExtFieldSpec { n: b.len(), b })
    }

    pub fn m(&self) -> usize {
        self.n - 1
    }

    fn coeffs<T: Ring>(&self) -> Vec<T> {
        self.b.iter().map(T::from_rational).collect()
    }
}

impl FromStr for ExtFieldSpec {
    type Err = ParseError;

    /// `n=<int> b=<c0,c1,...>`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut n = None;
        let mut b = None;
        for tok in s.split_whitespace() {
            if let Some(v) = tok.strip_prefix("n=") {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|_| ParseError::Field(format!("bad degree `{v}`")))?,
                );
            } else if let Some(v) = tok.strip_prefix("b=") {
                b = Some(v.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?);
            } else {
                return Err(ParseError::Field(format!("unexpected token `{tok}`")));
            }
        }
        let (n, b) = match (n, b) {
            (Some(n), Some(b)) => (n, b),
            _ => return Err(ParseError::Field("expected `n=<int> b=<c0,...>`".into())),
        };
        if b.len() != n {
            return Err(ParseError::Field(format!("expected {n} coefficients, got {}", b.len())));
        }
        ExtFieldSpec::new(b)
    }
}

impl fmt::Display for ExtFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.b.iter().map(format_rational).collect();
        write!(f, "n={} b={}", self.n, b.join(","))
    }
}

/// Matrix of multiplication by `a`.
pub fn companion<T: Ring>(spec: &ExtFieldSpec) -> SquareMatrix<T> {
    let (n, m) = (spec.n, spec.m());
    let b = spec.coeffs::<T>();
    SquareMatrix::from_fn(n, |i, j| {
        if j == m {
            b[i].clone()
        } else if i == j + 1 {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// Matrix of multiplication by `αa + 1`: identity plus `α` times the companion.
pub fn mul_matrix<T: Ring>(alpha: &T, spec: &ExtFieldSpec) -> SquareMatrix<T> {
    SquareMatrix::identity(spec.n).add(&companion(spec).scale(alpha))
}

/// `q_j = Σ_{i≤j} (−α)^{j−i} b_i` for `j = 0..=m`.
pub fn q_values<T: Ring>(alpha: &T, spec: &ExtFieldSpec) -> Vec<T> {
    let b = spec.coeffs::<T>();
    let na = alpha.neg();
    let mut q: Vec<T> = Vec::with_capacity(spec.n);
    for j in 0..spec.n {
        let v = (0..=j).fold(T::zero(), |acc, i| acc.add(&na.pow((j - i) as u32).mul(&b[i])));
        q.push(v);
    }
    q
}

/// `1 + α q_m`.
pub fn denominator<T: Ring>(alpha: &T, spec: &ExtFieldSpec) -> T {
    T::one().add(&alpha.mul(&q_values(alpha, spec)[spec.m()]))
}

/// `(1 + αq_m)·(αa+1)⁻¹`, entrywise
/// `[j≤i](−α)^{i−j}(1+αq_m) + (−α)^{m+1−j} q_i`.
pub fn inverse_numerator<T: Ring>(alpha: &T, spec: &ExtFieldSpec) -> SquareMatrix<T> {
    let m = spec.m();
    let q = q_values(alpha, spec);
    let d = denominator(alpha, spec);
    let na = alpha.neg();
    SquareMatrix::from_fn(spec.n, |i, j| {
        let tail = na.pow((m + 1 - j) as u32).mul(&q[i]);
        if j <= i {
            na.pow((i - j) as u32).mul(&d).add(&tail)
        } else {
            tail
        }
    })
}

/// `(αa+1)⁻¹` with entries `[j≤i](−α)^{i−j} + (−α)^{m+1−j} q_i h`,
/// `h = 1/(1+αq_m)`.
pub fn explicit_inverse(alpha: &BigRational, spec: &ExtFieldSpec) -> Result<SquareMatrix<BigRational>, FieldError> {
    let d = denominator(alpha, spec);
    if Zero::is_zero(&d) {
        return Err(FieldError::SingularDenominator(format_rational(alpha)));
    }
    let h = d.recip();
    let m = spec.m();
    let q = q_values(alpha, spec);
    let na = -alpha;
    Ok(SquareMatrix::from_fn(spec.n, |i, j| {
        let tail = Ring::pow(&na, (m + 1 - j) as u32) * &q[i] * &h;
        if j <= i {
            Ring::pow(&na, (i - j) as u32) + tail
        } else {
            tail
        }
    }))
}

/// `M = (αa+1)⁻¹(βa+1)`.
pub fn m_matrix(
    alpha: &BigRational,
    beta: &BigRational,
    spec: &ExtFieldSpec,
) -> Result<SquareMatrix<BigRational>, FieldError> {
    Ok(explicit_inverse(alpha, spec)?.mul(&mul_matrix(beta, spec)))
}

/// Closed form of `M_{m−1,m}`:
/// `Σ_{i<m} βb_i((−α)^{m−1−i} + (−α)^{m+1−i} q_{m−1} h) − (1+βb_m) α q_{m−1} h`.
pub fn m_entry_formula(
    alpha: &BigRational,
    beta: &BigRational,
    spec: &ExtFieldSpec,
) -> Result<BigRational, FieldError> {
    let d = denominator(alpha, spec);
    if Zero::is_zero(&d) {
        return Err(FieldError::SingularDenominator(format_rational(alpha)));
    }
    let h = d.recip();
    let m = spec.m();
    let q = q_values(alpha, spec);
    let na = -alpha;
    let mut sum = <BigRational as Zero>::zero();
    for i in 0..m {
        let inner = Ring::pow(&na, (m - 1 - i) as u32) + Ring::pow(&na, (m + 1 - i) as u32) * &q[m - 1] * &h;
        sum += beta * &spec.b[i] * inner;
    }
    let last = (rational(1) + beta * &spec.b[m]) * (alpha * &q[m - 1] * &h);
    Ok(sum - last)
}

/// Numerator of `M_{m−1,m}` as a polynomial in the indeterminates `α, β`.
pub fn symbolic_m_entry(spec: &ExtFieldSpec) -> BivariatePoly {
    let a = BivariatePoly::alpha();
    let b = BivariatePoly::beta();
    let prod = inverse_numerator(&a, spec).mul(&mul_matrix(&b, spec));
    prod.get(spec.m() - 1, spec.m()).clone()
}

/// `inverse_numerator · mul_matrix = (1 + αq_m)·I` over `ℚ[α]`.
pub fn symbolic_inverse_holds(spec: &ExtFieldSpec) -> bool {
    let a = BivariatePoly::alpha();
    let lhs = inverse_numerator(&a, spec).mul(&mul_matrix(&a, spec));
    lhs == SquareMatrix::identity(spec.n).scale(&denominator(&a, spec))
}

/// `A^n = Σ_i b_i A^i` for the companion matrix `A`.
pub fn companion_identity_holds(spec: &ExtFieldSpec) -> bool {
    let a: SquareMatrix<BigRational> = companion(spec);
    let mut powers = vec![SquareMatrix::identity(spec.n)];
    for k in 0..spec.n {
        let next = powers[k].mul(&a);
        powers.push(next);
    }
    let rhs = (0..spec.n).fold(SquareMatrix::from_fn(spec.n, |_, _| rational(0)), |acc, i| {
        acc.add(&powers[i].scale(&spec.b[i]))
    });
    powers[spec.n] == rhs
}

/// One seeded random instance for degree `n`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: ExtFieldSpec,
    pub alpha: BigRational,
    pub beta: BigRational,
}

/// `b_i ∈ [−5, 5]` with `b_0 ≠ 0`, `α, β ∈ [−9, 9]`, resampling `α` while
/// `1 + αq_m = 0`.
pub fn random_instances(n: usize, count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0xA24B_AED4_963E_E407));
    (0..count)
        .map(|_| {
            let mut b: Vec<BigRational> = (0..n).map(|_| rational(rng.gen_range(-5..=5))).collect();
            while Zero::is_zero(&b[0]) {
                b[0] = rational(rng.gen_range(-5..=5));
            }
            let spec = ExtFieldSpec::new(b).expect("n >= 2");
            let mut alpha = rational(rng.gen_range(-9..=9));
            while Zero::is_zero(&denominator(&alpha, &spec)) {
                alpha = rational(rng.gen_range(-9..=9));
            }
            let beta = rational(rng.gen_range(-9..=9));
            Instance { spec, alpha, beta }
        })
        .collect()
}

/// Random rational `b` with non-zero numerators in `[−5, 5]` and
/// denominators in `[1, 4]`.
pub fn random_nonzero_spec(n: usize, seed: u64) -> ExtFieldSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED ^ n as u64);
    let b = (0..n)
        .map(|_| {
            let mut p = 0i64;
            while p == 0 {
                p = rng.gen_range(-5..=5);
            }
            BigRational::new(BigInt::from(p), BigInt::from(rng.gen_range(1..=4i64)))
        })
        .collect();
    ExtFieldSpec::new(b).expect("n >= 2")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    pub instances: usize,
    pub inverse_ok: usize,
    pub formula_ok: usize,
    pub companion_ok: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicReport {
    pub spec: String,
    pub inverse_identity: bool,
    pub m_entry: String,
    pub nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldReport {
    pub worked_inverse: Vec<Vec<String>>,
    pub worked_ok: bool,
    pub alpha_zero_identity: bool,
    pub degrees: Vec<DegreeReport>,
    pub symbolic: Vec<SymbolicReport>,
}

impl FieldReport {
    pub fn passed(&self) -> bool {
        self.worked_ok
            && self.alpha_zero_identity
            && self.degrees.iter().all(|d| d.failures.is_empty())
            && self.symbolic.iter().all(|s| s.inverse_identity && s.nonzero)
    }
}

fn check_instance(inst: &Instance) -> Vec<String> {
    let mut fails = Vec::new();
    let tag = format!(
        "{} α={} β={}",
        inst.spec,
        format_rational(&inst.alpha),
        format_rational(&inst.beta)
    );
    let inv = match explicit_inverse(&inst.alpha, &inst.spec) {
        Ok(inv) => inv,
        Err(e) => return vec![format!("{tag}: {e}")],
    };
    if inv.mul(&mul_matrix(&inst.alpha, &inst.spec)) != SquareMatrix::identity(inst.spec.n) {
        fails.push(format!("{tag}: inverse identity"));
    }
    let m = inst.spec.m();
    let prod = inv.mul(&mul_matrix(&inst.beta, &inst.spec));
    match m_entry_formula(&inst.alpha, &inst.beta, &inst.spec) {
        Ok(v) if &v == prod.get(m - 1, m) => {}
        _ => fails.push(format!("{tag}: closed form")),
    }
    if !companion_identity_holds(&inst.spec) {
        fails.push(format!("{tag}: companion identity"));
    }
    fails
}

/// The whole identity suite: worked instance, random batches for
/// `n = 2..=max_n`, and symbolic checks for `n = 2..=symbolic_max_n`.
pub fn run_suite(per_degree: usize, max_n: usize, symbolic_max_n: usize, seed: u64, exec: Exec) -> FieldReport {
    let worked = ExtFieldSpec::new(vec![rational(1), rational(1)]).expect("n = 2");
    let worked_inv = explicit_inverse(&rational(1), &worked).expect("non-singular");
    let expect = SquareMatrix::from_fn(2, |i, j| rational([[2, -1], [-1, 1]][i][j]));
    let alpha_zero_identity = (2..=max_n).all(|n| {
        let s = random_nonzero_spec(n, seed);
        explicit_inverse(&rational(0), &s).is_ok_and(|m| m == SquareMatrix::identity(n))
            && mul_matrix(&rational(0), &s) == SquareMatrix::identity(n)
    });
    let degrees = (2..=max_n)
        .map(|n| {
            let insts = random_instances(n, per_degree, seed);
            let fails: Vec<Vec<String>> = par::map(exec, &insts, check_instance);
            let count = |needle: &str| fails.iter().filter(|f| !f.iter().any(|s| s.ends_with(needle))).count();
            DegreeReport {
                n,
                instances: insts.len(),
                inverse_ok: count("inverse identity"),
                formula_ok: count("closed form"),
                companion_ok: count("companion identity"),
                failures: fails.into_iter().flatten().collect(),
            }
        })
        .collect();
    let symbolic = (2..=symbolic_max_n)
        .map(|n| {
            let spec = random_nonzero_spec(n, seed);
            let entry = symbolic_m_entry(&spec);
            SymbolicReport {
                spec: spec.to_string(),
                inverse_identity: symbolic_inverse_holds(&spec),
                nonzero: !Ring::is_zero(&entry),
                m_entry: entry.to_string(),
            }
        })
        .collect();
    FieldReport {
        worked_ok: worked_inv == expect,
        worked_inverse: worked_inv.to_text_rows(),
        alpha_zero_identity,
        degrees,
        symbolic,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        rational(n)
    }

    fn worked() -> ExtFieldSpec {
        "n=2 b=1,1".parse().unwrap()
    }

    fn mat(rows: &[&[i64]]) -> SquareMatrix<BigRational> {
        SquareMatrix::from_fn(rows.len(), |i, j| r(rows[i][j]))
    }

    #[test]
    fn mul_matrix_examples() {
        assert_eq!(mul_matrix(&r(1), &worked()), mat(&[&[1, 1], &[1, 2]]));
        let s: ExtFieldSpec = "n=3 b=2,-1,3".parse().unwrap();
        assert_eq!(mul_matrix(&r(0), &s), SquareMatrix::identity(3));
        let a = r(5);
        let mm = mul_matrix(&a, &s);
        let col: Vec<_> = (0..3).map(|i| mm.get(i, 2).clone()).collect();
        assert_eq!(col, vec![r(10), r(-5), r(16)]);
    }

    #[test]
    fn q_value_examples() {
        assert_eq!(q_values(&r(1), &worked()), vec![r(1), r(0)]);
        let s: ExtFieldSpec = "n=4 b=1,-2,3,5".parse().unwrap();
        assert_eq!(q_values(&r(0), &s), s.b);
        let a = BigRational::new(3.into(), 7.into());
        let q = q_values(&a, &s);
        for j in 1..4 {
            assert_eq!(q[j], -&a * &q[j - 1] + &s.b[j]);
        }
    }

    #[test]
    fn explicit_inverse_examples() {
        assert_eq!(explicit_inverse(&r(1), &worked()).unwrap(), mat(&[&[2, -1], &[-1, 1]]));
        assert_eq!(explicit_inverse(&r(0), &worked()).unwrap(), SquareMatrix::identity(2));
        // 1 + α q_1 = 1 + α(b1 − α b0) = 1 + α − α² with b = (1, 1): no integer root,
        // so use b = (1, 0): 1 − α², singular at α = 1.
        let s: ExtFieldSpec = "n=2 b=1,0".parse().unwrap();
        assert!(matches!(
            explicit_inverse(&r(1), &s),
            Err(FieldError::SingularDenominator(_))
        ));
        for inst in random_instances(5, 10, 3) {
            let inv = explicit_inverse(&inst.alpha, &inst.spec).unwrap();
            assert_eq!(inv.mul(&mul_matrix(&inst.alpha, &inst.spec)), SquareMatrix::identity(5));
        }
    }

    #[test]
    fn last_row_matches_display() {
        let s: ExtFieldSpec = "n=4 b=2,1,-3,1".parse().unwrap();
        let a = r(2);
        let inv = explicit_inverse(&a, &s).unwrap();
        let h = denominator(&a, &s).recip();
        let m = s.m();
        for j in 0..=m {
            assert_eq!(inv.get(m, j), &(Ring::pow(&-&a, (m - j) as u32) * &h));
        }
    }

    #[test]
    fn m_matrix_examples() {
        let s = worked();
        assert_eq!(m_matrix(&r(3), &r(3), &s).unwrap(), SquareMatrix::identity(2));
        let m = m_matrix(&r(1), &r(2), &s).unwrap();
        assert!(!Zero::is_zero(m.get(0, 1)));
        assert_eq!(&m_entry_formula(&r(1), &r(2), &s).unwrap(), m.get(0, 1));
    }

    #[test]
    fn m_entry_special_values() {
        let s: ExtFieldSpec = "n=3 b=2,-1,4".parse().unwrap();
        let a = r(3);
        let q = q_values(&a, &s);
        let h = denominator(&a, &s).recip();
        assert_eq!(m_entry_formula(&a, &r(0), &s).unwrap(), -&a * &q[1] * &h);
        let beta = r(-7);
        assert_eq!(m_entry_formula(&r(0), &beta, &s).unwrap(), &beta * &s.b[1]);
    }

    #[test]
    fn symbolic_examples() {
        // n = 2: numerator of M_{0,1} is b0(β − α).
        let s: ExtFieldSpec = "n=2 b=3,5".parse().unwrap();
        let e = symbolic_m_entry(&s);
        let expect = BivariatePoly::beta()
            .sub(&BivariatePoly::alpha())
            .mul(&BivariatePoly::constant(&r(3)));
        assert_eq!(e, expect);
        for n in 2..=4 {
            let spec = random_nonzero_spec(n, 11);
            assert!(symbolic_inverse_holds(&spec));
            assert!(!Ring::is_zero(&symbolic_m_entry(&spec)));
        }
    }

    #[test]
    fn symbolic_entry_agrees_with_numeric() {
        let spec = random_nonzero_spec(4, 2);
        let e = symbolic_m_entry(&spec);
        let (a, b) = (BigRational::new(2.into(), 3.into()), r(-4));
        let d = denominator(&a, &spec);
        assert_eq!(e.eval(&a, &b) / d, m_entry_formula(&a, &b, &spec).unwrap());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!("n=3 b=1,2".parse::<ExtFieldSpec>().is_err());
        assert!("n=1 b=1".parse::<ExtFieldSpec>().is_err());
        assert_eq!(
            "n=2 b=1/2,-3".parse::<ExtFieldSpec>().unwrap().to_string(),
            "n=2 b=1/2,-3"
        );
    }

    #[test]
    fn suite_passes() {
        let rep = run_suite(10, 4, 3, 1, Exec::Sequential);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn companion_identity() {
        for n in 2..=6 {
            assert!(companion_identity_holds(&random_nonzero_spec(n, 5)));
        }
    }
}

//! Finitely generated free value groups `ℤ^r` with an exact total order, and
//! the positive-basis (Perron) reduction.
//!
//! The order is given by a list of linear forms with coefficients in a real
//! quadratic field `ℚ(√d)`. Two elements are compared by the lexicographic
//! comparison of their images under the forms.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GroupError;
use crate::lattice::{self, IntMatrix};

/// Default bound on continued-fraction steps inside [`perron_basis`].
pub const DEFAULT_PERRON_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_rational(q: &BigRational) -> Sign {
        if q.is_positive() {
            Sign::Positive
        } else if q.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// `a + b·√d` with rational `a`, `b` and square-free `d ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

impl QuadraticNumber {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self, GroupError> {
        if !is_square_free(d) {
            return Err(GroupError::NotSquareFree(d));
        }
        if d == 1 {
            return Ok(Self {
                a: a + b,
                b: BigRational::zero(),
                d,
            });
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: BigRational, d: u64) -> Self {
        Self {
            a,
            b: BigRational::zero(),
            d,
        }
    }

    pub fn from_ints(a: i64, b: i64, d: u64) -> Result<Self, GroupError> {
        Self::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()), d)
    }

    pub fn zero(d: u64) -> Self {
        Self::rational(BigRational::zero(), d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn sign(&self) -> Sign {
        qn_sign(self)
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert!(self.b.is_zero() || o.b.is_zero() || self.d == o.d);
        Self {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d: self.d.max(o.d),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.d.max(o.d);
        let dq = BigRational::from_integer(d.into());
        Self {
            a: &self.a * &o.a + &self.b * &o.b * dq,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        Self {
            a: &self.a * &k,
            b: &self.b * &k,
            d: self.d,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let dq = BigRational::from_integer(self.d.into());
        let norm = &self.a * &self.a - &self.b * &self.b * dq;
        Some(Self {
            a: &self.a / &norm,
            b: -&self.b / &norm,
            d: self.d,
        })
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

/// Exact sign of `a + b√d`.
pub fn qn_sign(q: &QuadraticNumber) -> Sign {
    let sa = Sign::of_rational(&q.a);
    let sb = Sign::of_rational(&q.b);
    match (sa, sb) {
        (s, Sign::Zero) => s,
        (Sign::Zero, s) => s,
        (x, y) if x == y => x,
        _ => {
            // opposite signs: compare a² with b²d
            let lhs = &q.a * &q.a;
            let rhs = &q.b * &q.b * BigRational::from_integer(q.d.into());
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Sign::Zero,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    pub coords: Vec<i64>,
}

impl GroupElement {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            coords: vec![0; rank],
        }
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        Self { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.coords.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A total order on `ℤ^rank`: lexicographic comparison of the images under
/// `forms` (each form is a row of `rank` coefficients in `ℚ(√d)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSpec {
    d: u64,
    rank: usize,
    forms: Vec<Vec<QuadraticNumber>>,
}

impl OrderSpec {
    pub fn new(d: u64, forms: Vec<Vec<QuadraticNumber>>) -> Result<Self, GroupError> {
        if !is_square_free(d) {
            return Err(GroupError::NotSquareFree(d));
        }
        let rank = forms.first().map_or(0, |r| r.len());
        if rank == 0 {
            return Err(GroupError::InvalidOrder("no forms given".into()));
        }
        let mut canon = Vec::with_capacity(forms.len());
        for row in forms {
            if row.len() != rank {
                return Err(GroupError::InvalidOrder("forms have unequal lengths".into()));
            }
            let mut out = Vec::with_capacity(rank);
            for q in row {
                if !q.b.is_zero() && q.d != d {
                    return Err(GroupError::InvalidOrder(format!(
                        "coefficient uses sqrt({}) in an order over sqrt({d})",
                        q.d
                    )));
                }
                out.push(QuadraticNumber::new(q.a, q.b, d)?);
            }
            canon.push(out);
        }
        let spec = Self {
            d,
            rank,
            forms: canon,
        };
        if spec.rational_rank() != rank {
            return Err(GroupError::InvalidOrder(
                "forms are not injective on the lattice; the order is not total".into(),
            ));
        }
        Ok(spec)
    }

    /// Pure lexicographic order on `ℤ^rank` (`e_1 ≫ e_2 ≫ …`).
    pub fn lex(rank: usize) -> Self {
        let forms = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| QuadraticNumber::rational(BigRational::from_integer(i64::from(i == j).into()), 1))
                    .collect()
            })
            .collect();
        Self { d: 1, rank, forms }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn forms(&self) -> &[Vec<QuadraticNumber>] {
        &self.forms
    }

    /// Rank over ℚ of the map `ℤ^rank → ℝ^m` given by the forms.
    fn rational_rank(&self) -> usize {
        let rows = split_rows(&self.forms, self.d);
        let mut m: Vec<Vec<BigRational>> = rows;
        rational_matrix_rank(&mut m, self.rank)
    }

    pub fn image(&self, coords: &[i64]) -> Vec<QuadraticNumber> {
        self.forms.iter().map(|row| apply_form(row, coords, self.d)).collect()
    }

    /// Sign of an element relative to zero.
    pub fn sign(&self, coords: &[i64]) -> Sign {
        for row in &self.forms {
            let s = apply_form(row, coords, self.d).sign();
            if s != Sign::Zero {
                return s;
            }
        }
        Sign::Zero
    }

    pub fn is_positive(&self, g: &GroupElement) -> bool {
        self.sign(&g.coords) == Sign::Positive
    }

    pub fn compare(&self, a: &GroupElement, b: &GroupElement) -> Result<Ordering, GroupError> {
        gp_compare(a, b, self)
    }

    /// Order induced on the sublattice spanned by `basis` (vectors in `ℤ^rank`),
    /// in coordinates relative to that basis.
    pub fn pullback(&self, basis: &[Vec<i64>]) -> Result<OrderSpec, GroupError> {
        let forms: Vec<Vec<QuadraticNumber>> = self
            .forms
            .iter()
            .map(|row| basis.iter().map(|b| apply_form(row, b, self.d)).collect())
            .collect();
        if basis.is_empty() {
            return Err(GroupError::InvalidOrder("empty sublattice".into()));
        }
        OrderSpec::new(self.d, forms)
    }
}

fn apply_form(row: &[QuadraticNumber], coords: &[i64], d: u64) -> QuadraticNumber {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for (q, &c) in row.iter().zip(coords) {
        if c == 0 {
            continue;
        }
        let c = BigRational::from_integer(c.into());
        a += &q.a * &c;
        b += &q.b * &c;
    }
    QuadraticNumber { a, b, d }
}

/// Splits each quadratic row into its rational and `√d` parts.
fn split_rows(forms: &[Vec<QuadraticNumber>], d: u64) -> Vec<Vec<BigRational>> {
    let mut rows = Vec::new();
    for row in forms {
        rows.push(row.iter().map(|q| q.a.clone()).collect());
        if d > 1 {
            rows.push(row.iter().map(|q| q.b.clone()).collect());
        }
    }
    rows
}

fn rational_matrix_rank(m: &mut [Vec<BigRational>], cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        let pivot = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &pivot;
                for j in col..cols {
                    let v = &m[rank][j] * &f;
                    m[r][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn gp_compare(a: &GroupElement, b: &GroupElement, spec: &OrderSpec) -> Result<Ordering, GroupError> {
    for g in [a, b] {
        if g.rank() != spec.rank() {
            return Err(GroupError::RankMismatch {
                expected: spec.rank(),
                found: g.rank(),
            });
        }
    }
    Ok(spec.sign(&a.sub(b).coords).to_ordering())
}

/// A positive basis of `ℤ^r` together with non-negative representations of
/// the input elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronResult {
    /// Row `j` is `γ_j` in the original coordinates.
    pub basis: IntMatrix,
    /// Row `i` holds the non-negative coefficients of `α_i` over the basis.
    pub reps: IntMatrix,
}

impl PerronResult {
    /// Checks the three defining properties against `alphas`.
    pub fn verify(&self, alphas: &[GroupElement], spec: &OrderSpec) -> bool {
        let r = spec.rank();
        self.basis.len() == r
            && lattice::is_unimodular(&self.basis)
            && self.basis.iter().all(|g| spec.sign(g) == Sign::Positive)
            && self.reps.len() == alphas.len()
            && self
                .reps
                .iter()
                .zip(alphas)
                .all(|(rep, a)| rep.iter().all(|&n| n >= 0) && lattice::vec_mul(rep, &self.basis) == a.coords)
    }
}

pub fn perron_basis(alphas: &[GroupElement], spec: &OrderSpec) -> Result<PerronResult, GroupError> {
    perron_basis_with_cap(alphas, spec, DEFAULT_PERRON_CAP)
}

/// Computes a positive basis of the whole group in which every `α_i` has
/// non-negative coordinates.
///
/// Works by induction on the lexicographic layers of the order: the leading
/// form splits `ℤ^r` into its kernel (ordered by the remaining forms) and an
/// archimedean quotient of rank at most two. The quotient basis comes from a
/// continued-fraction reduction, the kernel basis from recursion, and the
/// lifted quotient vectors are sheared by kernel vectors until all kernel
/// coordinates become non-negative.
pub fn perron_basis_with_cap(
    alphas: &[GroupElement],
    spec: &OrderSpec,
    cap: usize,
) -> Result<PerronResult, GroupError> {
    let r = spec.rank();
    for (index, a) in alphas.iter().enumerate() {
        if a.rank() != r {
            return Err(GroupError::RankMismatch {
                expected: r,
                found: a.rank(),
            });
        }
        if spec.sign(&a.coords) == Sign::Negative {
            return Err(GroupError::NegativeInput { index });
        }
    }
    let points: Vec<Vec<i64>> = alphas.iter().map(|a| a.coords.clone()).collect();
    let mut steps = 0usize;
    let basis = positive_basis(&spec.forms, spec.d, r, &points, &mut steps, cap)?;
    let reps = points
        .iter()
        .map(|p| lattice::solve_left_unimodular(&basis, p))
        .collect::<Result<Vec<_>, _>>()?;
    let result = PerronResult { basis, reps };
    debug_assert!(result.verify(alphas, spec));
    Ok(result)
}

fn positive_basis(
    forms: &[Vec<QuadraticNumber>],
    d: u64,
    r: usize,
    points: &[Vec<i64>],
    steps: &mut usize,
    cap: usize,
) -> Result<IntMatrix, GroupError> {
    if r == 0 {
        return Ok(Vec::new());
    }
    let Some((lead, rest)) = forms.split_first() else {
        return Err(GroupError::InvalidOrder("order is not total".into()));
    };

    // integer constraint rows of the leading form
    let mut constraint = Vec::new();
    for part in split_rows(std::slice::from_ref(lead), d) {
        if part.iter().any(|q| !q.is_zero()) {
            constraint.push(clear_denominators(&part));
        }
    }
    let (w, s) = lattice::column_reduce(&constraint, r);
    if s == 0 {
        return positive_basis(rest, d, r, points, steps, cap);
    }
    let cols: Vec<Vec<i64>> = (0..r)
        .map(|j| (0..r).map(|i| lattice::to_i64(&w[i][j])).collect())
        .collect::<Result<_, _>>()?;
    let (complement, kernel) = cols.split_at(s);

    // coordinates of every point with respect to the columns of w
    let points_w: Vec<Vec<i64>> = points
        .iter()
        .map(|p| lattice::solve_left_unimodular(&cols, p))
        .collect::<Result<_, _>>()?;

    // kernel layer
    let kernel_points: Vec<Vec<i64>> = points_w
        .iter()
        .filter(|y| y[..s].iter().all(|&c| c == 0))
        .map(|y| y[s..].to_vec())
        .collect();
    let kernel_forms: Vec<Vec<QuadraticNumber>> = rest
        .iter()
        .map(|row| kernel.iter().map(|k| apply_form(row, k, d)).collect())
        .collect();
    let kernel_basis_local = positive_basis(&kernel_forms, d, r - s, &kernel_points, steps, cap)?;
    let betas: Vec<Vec<i64>> = kernel_basis_local
        .iter()
        .map(|b| lattice::vec_mul(b, kernel))
        .collect();

    // archimedean quotient layer
    let values: Vec<QuadraticNumber> = complement.iter().map(|m| apply_form(lead, m, d)).collect();
    let projections: Vec<Vec<i64>> = points_w.iter().map(|y| y[..s].to_vec()).collect();
    let quotient_local = match s {
        1 => {
            let sg = if values[0].sign() == Sign::Positive { 1 } else { -1 };
            vec![vec![sg]]
        }
        2 => continued_fraction_basis(&values, &projections, steps, cap)?,
        _ => unreachable!("a form over a quadratic field has rational rank at most 2"),
    };
    let deltas: Vec<Vec<i64>> = quotient_local
        .iter()
        .map(|q| lattice::vec_mul(q, complement))
        .collect();

    // shear the lifted quotient vectors so kernel coordinates become non-negative
    let mut stacked: IntMatrix = deltas.clone();
    stacked.extend(betas.iter().cloned());
    let mut shear = vec![0i64; r - s];
    for p in points {
        let c = lattice::solve_left_unimodular(&stacked, p)?;
        if c[..s].iter().all(|&n| n == 0) {
            continue;
        }
        for (k, &m) in shear.iter_mut().zip(&c[s..]) {
            *k = (*k).max(-m);
        }
    }
    let correction = lattice::vec_mul(&shear, &betas);
    let mut basis: IntMatrix = deltas
        .iter()
        .map(|dv| {
            dv.iter()
                .zip(correction.iter().chain(std::iter::repeat(&0)))
                .map(|(a, b)| a.checked_sub(*b).ok_or(GroupError::Overflow))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    basis.extend(betas);
    Ok(basis)
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect()
}

/// Continued-fraction reduction of a positive basis of `ℤ²` embedded in `ℝ`
/// by two rationally independent values, run until every point has
/// non-negative coordinates.
fn continued_fraction_basis(
    values: &[QuadraticNumber],
    points: &[Vec<i64>],
    steps: &mut usize,
    cap: usize,
) -> Result<IntMatrix, GroupError> {
    let mut basis: IntMatrix = vec![vec![1, 0], vec![0, 1]];
    let mut vals = values.to_vec();
    for i in 0..2 {
        if vals[i].sign() == Sign::Negative {
            basis[i] = basis[i].iter().map(|x| -x).collect();
            vals[i] = vals[i].neg();
        }
    }
    loop {
        let all_covered = points.iter().all(|p| {
            coords_2x2(&basis, p).is_some_and(|c| c.iter().all(|&x| x >= 0))
        });
        if all_covered {
            return Ok(basis);
        }
        *steps += 1;
        if *steps > cap {
            return Err(GroupError::AlgorithmStall { steps: cap });
        }
        let (big, small) = if qn_sign(&vals[0].sub(&vals[1])) == Sign::Positive {
            (0, 1)
        } else {
            (1, 0)
        };
        let q = max_multiple(&vals[big], &vals[small]);
        let qi = lattice::to_i64(&q)?;
        let new_row: Vec<i64> = basis[big]
            .iter()
            .zip(&basis[small])
            .map(|(a, b)| b.checked_mul(qi).and_then(|t| a.checked_sub(t)).ok_or(GroupError::Overflow))
            .collect::<Result<_, _>>()?;
        basis[big] = new_row;
        vals[big] = vals[big].sub(&vals[small].scale(&q));
    }
}

/// Largest `q ≥ 0` with `big − q·small > 0` (`small > 0`, `big > 0`).
pub(crate) fn max_multiple(big: &QuadraticNumber, small: &QuadraticNumber) -> BigInt {
    let positive_after = |q: &BigInt| big.sub(&small.scale(q)).sign() == Sign::Positive;
    let mut hi = BigInt::one();
    while positive_after(&hi) {
        hi *= 2;
    }
    let mut lo = &hi / 2; // positive_after(lo) holds (or lo = 0)
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) / 2;
        if positive_after(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn coords_2x2(basis: &[Vec<i64>], p: &[i64]) -> Option<[i64; 2]> {
    let (a, b, c, d) = (basis[0][0], basis[0][1], basis[1][0], basis[1][1]);
    let det = a * d - b * c;
    if det.abs() != 1 {
        return None;
    }
    // p = x·row0 + y·row1
    let x = (p[0] * d - p[1] * c) * det;
    let y = (p[1] * a - p[0] * b) * det;
    Some([x, y])
}

/// The integer vector `c` with `c · basis = target`.
pub fn express_in_basis(target: &GroupElement, basis: &[Vec<i64>]) -> Result<Vec<i64>, GroupError> {
    lattice::solve_left_unimodular(basis, &target.coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: u64) -> QuadraticNumber {
        QuadraticNumber::from_ints(a, b, d).unwrap()
    }

    pub(crate) fn sqrt2_spec() -> OrderSpec {
        OrderSpec::new(2, vec![vec![q(1, 0, 2), q(0, 1, 2)], vec![q(0, 0, 2), q(1, 0, 2)]]).unwrap()
    }

    fn ge(c: &[i64]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    #[test]
    fn sign_examples() {
        assert_eq!(qn_sign(&q(0, 0, 1)), Sign::Zero);
        assert_eq!(qn_sign(&q(3, -2, 2)), Sign::Positive);
        assert_eq!(qn_sign(&q(1, -1, 2)), Sign::Negative);
        assert_eq!(qn_sign(&q(-3, 2, 2)), Sign::Negative);
        assert_eq!(qn_sign(&q(-1, 1, 2)), Sign::Positive);
    }

    #[test]
    fn canonical_form_for_d_one() {
        let x = q(2, 3, 1);
        assert_eq!(x.a, BigRational::from_integer(5.into()));
        assert!(x.b.is_zero());
        assert!(matches!(QuadraticNumber::from_ints(1, 1, 8), Err(GroupError::NotSquareFree(8))));
    }

    #[test]
    fn compare_examples() {
        let s = sqrt2_spec();
        assert_eq!(gp_compare(&ge(&[0, 0]), &ge(&[0, 0]), &s).unwrap(), Ordering::Equal);
        assert_eq!(gp_compare(&ge(&[3, -2]), &ge(&[0, 0]), &s).unwrap(), Ordering::Greater);
        let lex = OrderSpec::lex(2);
        assert_eq!(gp_compare(&ge(&[1, -5]), &ge(&[0, 7]), &lex).unwrap(), Ordering::Greater);
        assert!(matches!(
            gp_compare(&ge(&[1]), &ge(&[0, 7]), &lex),
            Err(GroupError::RankMismatch { .. })
        ));
    }

    #[test]
    fn dependent_forms_rejected() {
        // single rational form (1, 2) is not injective on ℤ²
        let err = OrderSpec::new(1, vec![vec![q(1, 0, 1), q(2, 0, 1)]]);
        assert!(matches!(err, Err(GroupError::InvalidOrder(_))));
        // a single irrational form is
        assert!(OrderSpec::new(2, vec![vec![q(1, 0, 2), q(0, 1, 2)]]).is_ok());
    }

    #[test]
    fn perron_identity_when_already_positive() {
        let s = sqrt2_spec();
        let alphas = vec![ge(&[1, 0]), ge(&[0, 1])];
        let res = perron_basis(&alphas, &s).unwrap();
        assert_eq!(res.basis, lattice::identity(2));
        assert_eq!(res.reps, lattice::identity(2));
    }

    #[test]
    fn perron_sqrt2_example() {
        let s = sqrt2_spec();
        let alphas = vec![ge(&[1, 0]), ge(&[0, 1]), ge(&[-1, 1])];
        let res = perron_basis(&alphas, &s).unwrap();
        assert!(res.verify(&alphas, &s));
        // the hand-computed basis is an equally valid answer
        let hand = PerronResult {
            basis: vec![vec![-1, 1], vec![3, -2]],
            reps: vec![vec![2, 1], vec![3, 1], vec![1, 0]],
        };
        assert!(hand.verify(&alphas, &s));
        assert_eq!(lattice::det(&hand.basis), BigInt::from(-1));
    }

    #[test]
    fn perron_pure_lex_example() {
        let lex = OrderSpec::lex(2);
        let alphas = vec![ge(&[1, -3])];
        let res = perron_basis(&alphas, &lex).unwrap();
        assert_eq!(res.basis, vec![vec![1, -3], vec![0, 1]]);
        assert_eq!(res.reps, vec![vec![1, 0]]);
    }

    #[test]
    fn perron_rejects_negative_and_accepts_zero() {
        let lex = OrderSpec::lex(2);
        assert_eq!(
            perron_basis(&[ge(&[0, 1]), ge(&[-1, 4])], &lex),
            Err(GroupError::NegativeInput { index: 1 })
        );
        let res = perron_basis(&[ge(&[0, 0])], &lex).unwrap();
        assert_eq!(res.reps, vec![vec![0, 0]]);
    }

    #[test]
    fn perron_stall_is_reported() {
        let s = sqrt2_spec();
        // (−7, 5) has tiny positive value and needs several reduction steps
        let r = perron_basis_with_cap(&[ge(&[-7, 5])], &s, 1);
        assert_eq!(r, Err(GroupError::AlgorithmStall { steps: 1 }));
    }

    #[test]
    fn express_examples() {
        let u = vec![vec![-1, 1], vec![3, -2]];
        assert_eq!(express_in_basis(&ge(&[-1, 1]), &u).unwrap(), vec![1, 0]);
        assert_eq!(express_in_basis(&ge(&[1, 0]), &u).unwrap(), vec![2, 1]);
        assert_eq!(express_in_basis(&ge(&[4, -9]), &lattice::identity(2)).unwrap(), vec![4, -9]);
        assert_eq!(
            express_in_basis(&ge(&[1, 0]), &[vec![2, 0], vec![0, 1]]),
            Err(GroupError::NonUnimodular)
        );
    }

    #[test]
    fn max_multiple_exact() {
        // floor(√2 / (√2 − 1)) = floor(3.41) = 3
        assert_eq!(max_multiple(&q(0, 1, 2), &q(-1, 1, 2)), BigInt::from(3));
        assert_eq!(max_multiple(&q(1, 0, 2), &q(0, 1, 2)), BigInt::from(0));
    }
}

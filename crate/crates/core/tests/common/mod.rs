//! Shared generators and an independent order oracle.
#![allow(dead_code)]

use std::cmp::Ordering;

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use valuniform::funcfield::{Context, FieldSpec, Polynomial, RationalFunction, VarClass, VarDecl};
use valuniform::ordered_group::{GroupElement, OrderSpec, QuadraticNumber};

/// An order given by integer forms `a + b√d`, kept separately from the
/// library's representation so comparisons can be checked independently.
#[derive(Debug, Clone)]
pub struct Forms {
    pub d: u64,
    pub rows: Vec<Vec<(i64, i64)>>,
}

impl Forms {
    pub fn lex(r: usize) -> Self {
        let rows = (0..r)
            .map(|i| (0..r).map(|j| (i64::from(i == j), 0)).collect())
            .collect();
        Self { d: 2, rows }
    }

    /// `(1, √d)` on the first two coordinates, then the unit forms on the rest.
    pub fn sqrt_type(r: usize, d: u64) -> Self {
        if r < 2 {
            return Self::lex(r);
        }
        let mut rows = vec![(0..r)
            .map(|j| match j {
                0 => (1, 0),
                1 => (0, 1),
                _ => (0, 0),
            })
            .collect::<Vec<_>>()];
        for i in 2..r {
            rows.push((0..r).map(|j| (i64::from(i == j), 0)).collect());
        }
        Self { d, rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn spec(&self) -> OrderSpec {
        let forms = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(a, b)| QuadraticNumber::from_ints(a, b, self.d).unwrap())
                    .collect()
            })
            .collect();
        OrderSpec::new(self.d, forms).unwrap()
    }

    /// Sign of `A + B√d` by squaring.
    fn sign_ab(&self, a: i128, b: i128) -> Ordering {
        let d = self.d as i128;
        match (a.cmp(&0), b.cmp(&0)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(b * b * d)),
            (Ordering::Less, Ordering::Greater) => (b * b * d).cmp(&(a * a)),
        }
    }

    pub fn sign(&self, c: &[i64]) -> Ordering {
        for row in &self.rows {
            let (a, b) = row
                .iter()
                .zip(c)
                .fold((0i128, 0i128), |(a, b), (&(x, y), &k)| (a + x as i128 * k as i128, b + y as i128 * k as i128));
            let s = self.sign_ab(a, b);
            if s != Ordering::Equal {
                return s;
            }
        }
        Ordering::Equal
    }

    pub fn cmp(&self, x: &[i64], y: &[i64]) -> Ordering {
        let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.sign(&diff)
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A random unimodular `n × n` matrix with small entries.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, moves: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n < 2 {
        return m;
    }
    for _ in 0..moves {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.gen_range(-1..=1i64);
        let row_j = m[j].clone();
        for (x, y) in m[i].iter_mut().zip(&row_j) {
            *x += k * y;
        }
        if m[i].iter().any(|x| x.abs() > 6) {
            for (x, y) in m[i].iter_mut().zip(&row_j) {
                *x -= k * y;
            }
        }
    }
    if rng.gen_bool(0.5) {
        m.swap(0, n - 1);
    }
    m
}

/// A context with `rho` value variables `x1…`, `tau` residue variables `y1…`,
/// value matrix `values` (rows per value variable) and the given order.
pub fn value_ctx(field: u32, values: &[Vec<i64>], tau: usize, forms: &Forms) -> Context {
    let r = forms.rank();
    let mut vars: Vec<VarDecl> = values
        .iter()
        .enumerate()
        .map(|(i, v)| VarDecl::new(format!("x{}", i + 1), VarClass::Value, GroupElement::new(v.clone())))
        .collect();
    for j in 0..tau {
        vars.push(VarDecl::new(format!("y{}", j + 1), VarClass::Residue, GroupElement::zero(r)));
    }
    Context::new(FieldSpec::new(field).unwrap(), vars, forms.spec()).unwrap()
}

/// Random polynomial with non-negative exponents of total degree at most
/// `deg`, coefficients in `[-4, 4]`.
pub fn random_poly(rng: &mut ChaCha8Rng, field: FieldSpec, nvars: usize, deg: i64, max_terms: usize) -> Polynomial {
    let nterms = rng.gen_range(1..=max_terms);
    let terms: Vec<(Vec<i64>, BigRational)> = (0..nterms)
        .map(|_| {
            let mut e = vec![0i64; nvars];
            let mut budget = rng.gen_range(0..=deg);
            for x in e.iter_mut() {
                let k = rng.gen_range(0..=budget);
                *x = k;
                budget -= k;
            }
            let mut c = rng.gen_range(-4..=4i64);
            if c == 0 {
                c = 1;
            }
            (e, rat(c))
        })
        .collect();
    Polynomial::from_terms(field, nvars, terms).unwrap()
}

pub fn nonzero_poly(rng: &mut ChaCha8Rng, field: FieldSpec, nvars: usize, deg: i64, max_terms: usize) -> Polynomial {
    loop {
        let p = random_poly(rng, field, nvars, deg, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Value of a polynomial by enumerating its terms: `None` for zero.
pub fn oracle_value(p: &Polynomial, ctx: &Context, forms: &Forms) -> Option<Vec<i64>> {
    let r = forms.rank();
    p.terms()
        .map(|(m, _)| {
            let mut v = vec![0i64; r];
            for (e, var) in m.0.iter().zip(&ctx.vars) {
                for (x, y) in v.iter_mut().zip(&var.value.coords) {
                    *x += e * y;
                }
            }
            v
        })
        .min_by(|a, b| forms.cmp(a, b))
}

/// Multiplies `f` by a power of the monomial of value `e1` (positive in
/// every order built here) until its value is non-negative.
pub fn make_nonnegative(f: &RationalFunction, ctx: &Context, forms: &Forms) -> RationalFunction {
    let vm = ctx.value_matrix();
    let mut e1 = vec![0i64; forms.rank()];
    e1[0] = 1;
    let c = valuniform::lattice::solve_left_unimodular(&vm, &e1).unwrap();
    let tx = ctx.tx_indices();
    let mut shift = vec![0i64; ctx.nvars()];
    for (&i, &k) in tx.iter().zip(&c) {
        shift[i] = k;
    }
    let mut g = f.clone();
    loop {
        let v = oracle_value(g.num(), ctx, forms).unwrap();
        let w = oracle_value(g.den(), ctx, forms).unwrap();
        if forms.cmp(&v, &w) != Ordering::Less {
            return g;
        }
        g = g.mul_laurent_monomial(&shift);
    }
}

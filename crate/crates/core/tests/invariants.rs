mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{make_nonnegative, nonzero_poly, random_unimodular, value_ctx, Forms};
use valuniform::funcfield::{Context, FieldSpec, RationalFunction, VarClass, VarDecl};
use valuniform::inertial::{ext_value, EtalePresentation};
use valuniform::monomialize::{chart_report, monomialize_set};
use valuniform::ordered_group::{express_in_basis, gp_compare, perron_basis, GroupElement};
use valuniform::transforms::{
    establish_nc_v, factor_in_state, monoidal_transform, verify_cert, LocalRingState, TransformOptions,
};
use valuniform::valuation::{value_ratfun, Value};

fn forms_for(kind: u8, r: usize) -> Forms {
    match kind % 3 {
        0 => Forms::lex(r),
        1 => Forms::sqrt_type(r, 2),
        _ => Forms::sqrt_type(r, 3),
    }
}

fn vec_of(r: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, r)
}

fn ge(v: &[i64]) -> GroupElement {
    GroupElement::new(v.to_vec())
}

/// A context over seeded random data: `rho` value variables, `tau` residue
/// variables.
fn seeded_ctx(seed: u64, rho: usize, tau: usize) -> (ChaCha8Rng, Context, Forms) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let forms = forms_for(rng.gen(), rho);
    let values = random_unimodular(&mut rng, rho, 6);
    let ctx = value_ctx(0, &values, tau, &forms);
    (rng, ctx, forms)
}

fn random_ratfun(rng: &mut ChaCha8Rng, ctx: &Context) -> RationalFunction {
    let n = ctx.nvars();
    let num = nonzero_poly(rng, ctx.field, n, 3, 3);
    let den = nonzero_poly(rng, ctx.field, n, 3, 3);
    RationalFunction::new(num, den).unwrap()
}

fn st_ctx() -> Context {
    let forms = Forms::sqrt_type(2, 2);
    let vars = vec![
        VarDecl::new("s", VarClass::Param, ge(&[1, 0])),
        VarDecl::new("t", VarClass::Param, ge(&[0, 1])),
    ];
    Context::new(FieldSpec::rationals(), vars, forms.spec()).unwrap()
}

/// Polynomial in `s, t` from a list of `(a, b, c)` terms `c·s^a·t^b`.
fn st_poly(ctx: &Context, terms: &[(u8, u8, i8)]) -> Option<RationalFunction> {
    let text: Vec<String> = terms
        .iter()
        .filter(|t| t.2 != 0)
        .map(|&(a, b, c)| format!("({c})*s^{a}*t^{b}"))
        .collect();
    if text.is_empty() {
        return None;
    }
    let f = ctx.parse(&text.join(" + ")).ok()?;
    (!f.is_zero()).then_some(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn compare_is_a_total_translation_invariant_order(
        kind in 0u8..3, r in 1usize..=4, seed in any::<u64>(),
        a in vec_of(4, 20), b in vec_of(4, 20), c in vec_of(4, 20),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unimodular(&mut rng, r, 4);
        let base = forms_for(kind, r);
        // the order in coordinates changed by u
        let rows = base.rows.iter().map(|row| {
            (0..r).map(|j| row.iter().zip(&u[j]).fold((0, 0), |(x, y), (&(p, q), &k)| (x + k * p, y + k * q))).collect()
        }).collect();
        let forms = Forms { d: base.d, rows };
        let spec = forms.spec();
        let (a, b, c) = (ge(&a[..r]), ge(&b[..r]), ge(&c[..r]));
        let ab = gp_compare(&a, &b, &spec).unwrap();
        prop_assert_eq!(ab, gp_compare(&b, &a, &spec).unwrap().reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        prop_assert_eq!(ab, forms.cmp(&a.coords, &b.coords));
        prop_assert_eq!(ab, gp_compare(&a.add(&c), &b.add(&c), &spec).unwrap());
        let bc = gp_compare(&b, &c, &spec).unwrap();
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(gp_compare(&a, &c, &spec).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn perron_postconditions(kind in 0u8..3, r in 1usize..=4, raw in prop::collection::vec(vec_of(4, 7), 1..6)) {
        let forms = forms_for(kind, r);
        let spec = forms.spec();
        let alphas: Vec<GroupElement> = raw.iter().map(|v| {
            let v = &v[..r];
            if forms.sign(v) == Ordering::Less { ge(&v.iter().map(|x| -x).collect::<Vec<_>>()) } else { ge(v) }
        }).collect();
        let res = perron_basis(&alphas, &spec).unwrap();
        prop_assert!(res.verify(&alphas, &spec));
        for g in &res.basis {
            prop_assert_eq!(forms.sign(g), Ordering::Greater);
        }
    }

    #[test]
    fn express_round_trip(r in 1usize..=4, seed in any::<u64>(), t in vec_of(4, 30)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = random_unimodular(&mut rng, r, 8);
        let target = ge(&t[..r]);
        let c = express_in_basis(&target, &basis).unwrap();
        let back: Vec<i64> = (0..r).map(|j| c.iter().zip(&basis).map(|(k, row)| k * row[j]).sum()).collect();
        prop_assert_eq!(back, target.coords);
    }

    #[test]
    fn valuation_is_multiplicative(seed in any::<u64>(), rho in 1usize..=3, tau in 0usize..=2) {
        let (mut rng, ctx, _) = seeded_ctx(seed, rho, tau);
        let f = random_ratfun(&mut rng, &ctx);
        let g = random_ratfun(&mut rng, &ctx);
        let (vf, vg) = (value_ratfun(&f, &ctx), value_ratfun(&g, &ctx));
        prop_assert_eq!(value_ratfun(&f.mul(&g), &ctx), vf.add(&vg));
        let q = value_ratfun(&f.div(&g).unwrap(), &ctx);
        prop_assert_eq!(q.add(&vg), vf);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chart_round_trip(seed in any::<u64>(), rho in 1usize..=3, tau in 0usize..=2, count in 1usize..=3) {
        let (mut rng, ctx, forms) = seeded_ctx(seed, rho, tau);
        let zs: Vec<RationalFunction> = (0..count)
            .map(|_| make_nonnegative(&random_ratfun(&mut rng, &ctx), &ctx, &forms))
            .collect();
        let chart = monomialize_set(&zs, &ctx).unwrap();
        let rep = chart_report(&chart, &ctx);
        prop_assert!(rep.ok(), "{}", rep.details);
        for (f, z) in chart.factorizations.iter().zip(&zs) {
            prop_assert!(chart.expand(f, &ctx).equals(z));
            let back = chart.pull_back(z, &ctx).unwrap();
            let chart_ctx = chart.context(&ctx).unwrap();
            let mono = RationalFunction::laurent_monomial(ctx.field, &{
                let mut e = vec![0i64; chart_ctx.nvars()];
                e[..f.exps.len()].copy_from_slice(&f.exps);
                e
            });
            prop_assert!(back.equals(&f.unit.mul(&mono)));
            let (unit, exps) = chart.monomial_form(z, &ctx).unwrap().unwrap();
            prop_assert_eq!(&exps, &f.exps);
            prop_assert!(unit.equals(&f.unit));
        }
    }

    #[test]
    fn transforms_compose_monotonically(terms in prop::collection::vec((0u8..6, 0u8..6, -3i8..=3), 1..4)) {
        let ctx = st_ctx();
        let Some(c) = st_poly(&ctx, &terms) else { return Ok(()); };
        let state = LocalRingState::new(&ctx).unwrap();
        let (st, certs) = establish_nc_v(&state, std::slice::from_ref(&c), &ctx, TransformOptions::default()).unwrap();
        prop_assert!(verify_cert(&certs[0], &st, &ctx));
        let mut tampered = certs[0].clone();
        tampered.exps[0] += 1;
        prop_assert!(!verify_cert(&tampered, &st, &ctx));
        // one more transform keeps params positive and the coefficient factored
        let next = monoidal_transform(&st, &st.param_names(), &ctx).unwrap();
        prop_assert_eq!(next.history.len(), st.history.len() + 1);
        for p in &next.params {
            prop_assert_eq!(ctx.order.sign(&p.value.coords), valuniform::ordered_group::Sign::Positive);
        }
        let images = next.pullback_images(&ctx).unwrap();
        let pulled = c.map_monomials(&images, next.params.len() + next.residues.len());
        prop_assert!(factor_in_state(&pulled, &next).is_some());
    }

    #[test]
    fn ext_value_is_multiplicative(p in prop::collection::vec((0u8..3, 0u8..3, -3i8..=3), 4)) {
        let forms = Forms::sqrt_type(2, 2);
        let ctx = value_ctx(0, &[vec![1, 0], vec![0, 1]], 0, &forms);
        let pres = EtalePresentation::parse("eta", "eta^2 - eta - x1", None, "1", &ctx).unwrap();
        let term = |(a, b, c): (u8, u8, i8)| format!("({c})*x1^{a}*x2^{b}");
        let a = pres.parse_element(&format!("{} + ({})*eta", term(p[0]), term(p[1])), &ctx).unwrap();
        let b = pres.parse_element(&format!("{} + ({})*eta", term(p[2]), term(p[3])), &ctx).unwrap();
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (va, vb) = (ext_value(&a, &pres, &ctx).unwrap(), ext_value(&b, &pres, &ctx).unwrap());
        let vab = ext_value(&a.mul(&b, &pres), &pres, &ctx).unwrap();
        prop_assert_eq!(vab, va.add(&vb));
        prop_assert!(matches!(va, Value::Finite(_)));
    }
}

//! Identity suites run against the finite oracle.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;

use super::algebra::{FiniteAction, FiniteAlgebraElement, Quotient};
use super::bijection::{words, FinitePartialBijection};
use super::coefficient::Coefficient;
use super::covariant::{adjoint, is_zero_one, matrix_residual, FiniteCovariantRep};
use crate::partial_bijection::SemigroupElement;
use crate::report::{Check, Report};

/// Exponents used to build test words.
pub const LETTERS: [i64; 4] = [-2, -1, 1, 2];

/// Canonical forms of all words of length `≤ max_len` over [`LETTERS`], with the unit.
pub fn standard_keys(max_len: usize) -> Vec<SemigroupElement> {
    let mut keys: BTreeSet<SemigroupElement> = words(&LETTERS, max_len).iter().map(|w| SemigroupElement::canonicalize(w)).collect();
    keys.insert(SemigroupElement::IDENTITY);
    keys.into_iter().collect()
}

/// The canonical form realizes the same map as composing the word letter by letter.
pub fn canonical_form_check(theta: &FinitePartialBijection, max_len: usize) -> Check {
    let all = words(&LETTERS, max_len);
    let bad: Vec<&Vec<i64>> = all
        .iter()
        .filter(|w| theta.realize(SemigroupElement::canonicalize(w)) != theta.compose_word(w))
        .collect();
    let check = Check::flag("canonical form = word composition", bad.is_empty());
    match bad.first() {
        Some(w) => check.with_detail(format!("{} of {} words differ, first {w:?} for θ = {theta}", bad.len(), all.len())),
        None => check,
    }
}

/// `t ε_h t⁻¹ ε_g = ε_g t ε_h t⁻¹` with `ε_k = θ^k θ^{−k}` and `t` a word.
pub fn pga_lemma1_check(theta: &FinitePartialBijection, max_len: usize) -> Check {
    let eps = |k: i64| theta.power(k).compose(&theta.power(-k));
    let mut failures = 0usize;
    let mut first = None;
    for w in words(&LETTERS, max_len) {
        let t = theta.compose_word(&w);
        let t_inv = t.inverse();
        for g in -2..=2 {
            for h in -2..=2 {
                let (eg, eh) = (eps(g), eps(h));
                let lhs = t.compose(&eh).compose(&t_inv).compose(&eg);
                let rhs = eg.compose(&t).compose(&eh).compose(&t_inv);
                if lhs != rhs {
                    failures += 1;
                    first.get_or_insert((w.clone(), g, h));
                }
            }
        }
    }
    let check = Check::flag("t e_h t^-1 e_g = e_g t e_h t^-1", failures == 0);
    match first {
        Some((w, g, h)) => check.with_detail(format!("{failures} failures, first t = {w:?}, g = {g}, h = {h}")),
        None => check,
    }
}

fn random_vec<C: Coefficient, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C> {
    (0..n).map(|_| C::sample(rng)).collect()
}

fn hadamard<C: Coefficient>(a: &[C], b: &[C]) -> Vec<C> {
    a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()).collect()
}

fn max_residual<C: Coefficient>(pairs: impl IntoIterator<Item = (FiniteAlgebraElement<C>, FiniteAlgebraElement<C>)>) -> f64 {
    pairs.into_iter().map(|(a, b)| a.residual(&b)).fold(0.0, f64::max)
}

/// Structure relations of the crossed product: `x = Σ x(s) U_s`, the
/// embedding of `A`, `U_s a = α_s(p_{s*} a) U_s`, `U_s* = U_{s*}`,
/// `U_s U_t = U_{st}`, associativity and the anti-homomorphism property.
pub fn cpa_rel_check<C: Coefficient, R: Rng + ?Sized>(action: &Arc<FiniteAction>, keys: &[SemigroupElement], rng: &mut R, samples: usize) -> Report {
    let tol = C::tolerance();
    let m = action.size();
    let u = |s| FiniteAlgebraElement::<C>::unitary(action, s);
    let f = |a: Vec<C>| FiniteAlgebraElement::function(action, a);
    let mut r = Report::new();

    let decomposition = max_residual((0..samples).map(|_| {
        let x = FiniteAlgebraElement::random(rng, action, keys, 3);
        let sum = x.terms().iter().fold(FiniteAlgebraElement::zero(action), |acc, (&s, a)| {
            acc.add(&f(a.clone()).multiply(&u(s)).unwrap()).unwrap()
        });
        (x, sum)
    }));
    r.push(Check::residual("(i) x = sum x(s) U_s", decomposition, tol));

    let mut embed = 0.0f64;
    let mut injective = true;
    for _ in 0..samples {
        let (a, b) = (random_vec::<C, _>(rng, m), random_vec::<C, _>(rng, m));
        embed = embed.max(f(a.clone()).multiply(&f(b.clone())).unwrap().residual(&f(hadamard(&a, &b))));
        injective &= a.iter().all(num_traits::Zero::is_zero) == f(a).is_zero();
    }
    r.push(Check::residual("(ii) iota(a) iota(b) = iota(ab)", embed, tol));
    r.push(Check::flag("(ii) iota injective", injective));

    let covariance = max_residual(keys.iter().map(|&s| {
        let a = random_vec::<C, _>(rng, m);
        let moved = action.act(s, &hadamard(&action.partial_identity(s.star()), &a));
        (u(s).multiply(&f(a)).unwrap(), f(moved).multiply(&u(s)).unwrap())
    }));
    r.push(Check::residual("(iii) U_s a = alpha_s(p_s* a) U_s", covariance, tol));

    let star = max_residual(keys.iter().map(|&s| (u(s).involution(), u(s.star()))));
    r.push(Check::residual("(iv) U_s* = U_s*", star, tol));

    let mult = max_residual(keys.iter().flat_map(|&s| keys.iter().map(move |&t| (s, t))).map(|(s, t)| (u(s).multiply(&u(t)).unwrap(), u(s.product(t)))));
    r.push(Check::residual("(v) U_s U_t = U_st", mult, tol));

    let (mut assoc, mut anti) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = FiniteAlgebraElement::<C>::random(rng, action, keys, 3);
        let y = FiniteAlgebraElement::random(rng, action, keys, 3);
        let z = FiniteAlgebraElement::random(rng, action, keys, 3);
        let lhs = x.multiply(&y).unwrap().multiply(&z).unwrap();
        assoc = assoc.max(lhs.residual(&x.multiply(&y.multiply(&z).unwrap()).unwrap()));
        anti = anti.max(x.multiply(&y).unwrap().involution().residual(&y.involution().multiply(&x.involution()).unwrap()));
    }
    r.push(Check::residual("associativity", assoc, tol));
    r.push(Check::residual("(xy)* = y* x*", anti, tol));
    r
}

/// Truth values of the three quotient relations
/// `p_q δ_e = p_q δ_q`, `a δ_{qt} = a δ_t` on `A_{qt}`, `p_s δ_e = p_{ss*} δ_{ss*}`.
pub fn quotient_relations<C: Coefficient, R: Rng + ?Sized>(action: &Arc<FiniteAction>, keys: &[SemigroupElement], rng: &mut R) -> [bool; 3] {
    let e = SemigroupElement::IDENTITY;
    let mono = |s, a: Vec<C>| FiniteAlgebraElement::monomial(action, s, a);
    let idempotents: Vec<SemigroupElement> = keys.iter().map(|s| s.target()).collect();
    let one = idempotents
        .iter()
        .all(|&q| mono(e, action.partial_identity(q)) == mono(q, action.partial_identity(q)));
    let two = idempotents.iter().all(|&q| {
        keys.iter().all(|&t| {
            let r = q.product(t);
            let a = hadamard(&action.partial_identity(r), &random_vec::<C, _>(rng, action.size()));
            mono(r, a.clone()) == mono(t, a)
        })
    });
    let three = keys
        .iter()
        .all(|&s| mono(e, action.partial_identity(s)) == mono(s.target(), action.partial_identity(s.target())));
    [one, two, three]
}

/// The quotient relations are equivalent (all hold or all fail); with the
/// eager quotient they all hold, and a covariant representation never
/// separates the two sides.
pub fn cpa_quot_rel_check<C: Coefficient, R: Rng + ?Sized>(theta: &FinitePartialBijection, keys: &[SemigroupElement], rng: &mut R) -> Report {
    let mut r = Report::new();
    let eager = FiniteAction::new(theta.clone(), Quotient::Eager);
    let plain = FiniteAction::new(theta.clone(), Quotient::None);
    let in_quotient = quotient_relations::<C, _>(&eager, keys, rng);
    let in_l = quotient_relations::<C, _>(&plain, keys, rng);
    r.push(Check::flag("quotient relations hold in the crossed product", in_quotient.iter().all(|&b| b)).with_detail(format!("{in_quotient:?}")));
    r.push(Check::flag("quotient relations equivalent in L(A,S,alpha)", in_l.iter().all(|&b| b == in_l[0])).with_detail(format!("{in_l:?}")));
    let rep = FiniteCovariantRep::regular(&plain);
    let e = SemigroupElement::IDENTITY;
    let kernel = keys
        .iter()
        .map(|&s| {
            let lhs = FiniteAlgebraElement::<C>::monomial(&plain, e, plain.partial_identity(s));
            let rhs = FiniteAlgebraElement::monomial(&plain, s.target(), plain.partial_identity(s.target()));
            matrix_residual(&rep.represent(&lhs), &rep.represent(&rhs))
        })
        .fold(0.0, f64::max);
    r.push(Check::residual("covariant rep kills p_s d_e - p_ss* d_ss*", kernel, C::tolerance()));
    r
}

/// Covariant-representation identities on the point representation `rep`.
pub fn covariant_rep_check<C: Coefficient, R: Rng + ?Sized>(rep: &FiniteCovariantRep, keys: &[SemigroupElement], rng: &mut R, samples: usize) -> Report {
    let tol = C::tolerance();
    let act = rep.action();
    let m = act.size();
    let v = |s| rep.v::<C>(s);
    let mut r = Report::new();
    let id = nalgebra::DMatrix::from_fn(rep.dim(), rep.dim(), |i, j| if i == j { C::one() } else { C::zero() });
    r.push(Check::residual("V_e = 1", matrix_residual(&v(SemigroupElement::IDENTITY), &id), tol));

    let hom = keys
        .iter()
        .flat_map(|&s| keys.iter().map(move |&t| (s, t)))
        .map(|(s, t)| matrix_residual(&(v(s) * v(t)), &v(s.product(t))))
        .fold(0.0, f64::max);
    r.push(Check::residual("V_s V_t = V_st", hom, tol));
    let star = keys.iter().map(|&s| matrix_residual(&v(s.star()), &adjoint(&v(s)))).fold(0.0, f64::max);
    r.push(Check::residual("V_s* = (V_s)^*", star, tol));

    let mut cov = 0.0f64;
    let (mut dom, mut ran, mut pi_p) = (0.0f64, 0.0f64, 0.0f64);
    let mut zero_one = true;
    for &s in keys {
        let a = hadamard(&act.partial_identity(s.star()), &random_vec::<C, _>(rng, m));
        cov = cov.max(matrix_residual(&(v(s) * rep.pi(&a) * v(s.star())), &rep.pi(&act.act(s, &a))));
        let (vs, vs_adj) = (v(s), adjoint(&v(s)));
        let (p_dom, p_ran) = (&vs_adj * &vs, &vs * &vs_adj);
        zero_one &= is_zero_one(&vs) && is_zero_one(&p_dom) && is_zero_one(&p_ran);
        dom = dom.max(matrix_residual(&p_dom, &rep.pi(&act.partial_identity::<C>(s.star()))));
        ran = ran.max(matrix_residual(&p_ran, &rep.pi(&act.partial_identity::<C>(s))));
        pi_p = pi_p.max(matrix_residual(&rep.pi(&act.partial_identity::<C>(s)), &v(s.target())));
    }
    r.push(Check::residual("V_s pi(a) V_s* = pi(alpha_s(a))", cov, tol));
    r.push(Check::residual("V_s* V_s = pi(p_s*)", dom, tol));
    r.push(Check::residual("V_s V_s* = pi(p_s)", ran, tol));
    r.push(Check::flag("V_s, projections are 0/1", zero_one));
    r.push(Check::residual("pi(p_s) = V_ss*", pi_p, tol));

    let (mut mult, mut inv) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = FiniteAlgebraElement::<C>::random(rng, act, keys, 3);
        let y = FiniteAlgebraElement::random(rng, act, keys, 3);
        mult = mult.max(matrix_residual(&rep.represent(&x.multiply(&y).unwrap()), &(rep.represent(&x) * rep.represent(&y))));
        inv = inv.max(matrix_residual(&rep.represent(&x.involution()), &adjoint(&rep.represent(&x))));
    }
    r.push(Check::residual("rep(xy) = rep(x) rep(y)", mult, tol));
    r.push(Check::residual("rep(x*) = rep(x)^*", inv, tol));
    r
}

/// Every suite on one `θ`, with keys from words of length `≤ max_len`.
pub fn identity_suite<C: Coefficient, R: Rng + ?Sized>(theta: &FinitePartialBijection, max_len: usize, rng: &mut R, samples: usize) -> Report {
    let keys = standard_keys(max_len);
    let mut r = Report::new();
    r.push(canonical_form_check(theta, max_len));
    r.push(pga_lemma1_check(theta, max_len.min(3)));
    let plain = FiniteAction::new(theta.clone(), Quotient::None);
    r.extend(cpa_rel_check::<C, _>(&plain, &keys, rng, samples));
    let eager = FiniteAction::new(theta.clone(), Quotient::Eager);
    r.extend(cpa_rel_check::<C, _>(&eager, &keys, rng, samples).prefixed("quotient: "));
    r.extend(cpa_quot_rel_check::<C, _>(theta, &keys, rng));
    r.extend(covariant_rep_check::<C, _>(&FiniteCovariantRep::regular(&eager), &keys, rng, samples));
    r
}

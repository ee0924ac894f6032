//! Root finding over finite fields and their extensions.
//!
//! Roots are located by distinct-degree factorization over the coefficient
//! field (`gcd(q, X^{Q^d} - X)`), then split into linear factors inside
//! `F_{Q^d}` by Cantor–Zassenhaus. Exhaustive evaluation is kept as the test
//! oracle.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Embedding, FieldCtx, FieldElem, FieldError, UniPoly};

/// One root of a polynomial, living in the smallest extension that contains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub value: FieldElem,
    /// Degree of the root's field over the polynomial's coefficient field.
    pub degree: usize,
    pub multiplicity: usize,
}

impl Root {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.value.ctx()
    }
}

#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Some irreducible factor has degree above the extension cap.
    pub partial: bool,
}

/// A Galois orbit of roots over the coefficient field, represented by its
/// least member.
#[derive(Debug, Clone)]
pub struct RootOrbit {
    pub rep: FieldElem,
    pub degree: usize,
    /// Monic minimal polynomial over the coefficient field.
    pub minpoly: UniPoly,
    pub multiplicity: usize,
}

fn x_minus(ctx: &Arc<FieldCtx>, xq: &UniPoly) -> UniPoly {
    xq - &UniPoly::x(ctx)
}

/// All distinct roots of `f` in its own coefficient field, sorted.
pub fn roots_in_field(f: &UniPoly) -> Result<Vec<FieldElem>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let ctx = f.ctx().clone();
    let f = f.monic();
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let xq = UniPoly::x(&ctx).pow_mod(ctx.order(), &f)?;
    let g = f.gcd(&x_minus(&ctx, &xq));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + g.degree().unwrap_or(0) as u64);
    let mut out = Vec::new();
    split_linear(&g, &mut rng, &mut out)?;
    out.sort();
    Ok(out)
}

/// Equal-degree splitting of a squarefree product of distinct linear factors.
fn split_linear(g: &UniPoly, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElem>) -> Result<(), FieldError> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let c0 = g.coeff(0);
            let c1 = g.coeff(1);
            out.push(-(c0.try_div(&c1)?));
            return Ok(());
        }
        _ => {}
    }
    let ctx = g.ctx().clone();
    let q = ctx.order();
    loop {
        let delta = FieldElem::from_index(&ctx, rng.gen_range(0..q));
        let probe = if ctx.p() == 2 {
            let mut y = UniPoly::x(&ctx).scale(&delta).rem(g)?;
            let mut acc = y.clone();
            for _ in 1..ctx.k() {
                y = (&y * &y).rem(g)?;
                acc = &acc + &y;
            }
            acc
        } else {
            let shifted = &UniPoly::x(&ctx) + &UniPoly::constant(delta);
            &shifted.pow_mod((q - 1) / 2, g)? - &UniPoly::one(&ctx)
        };
        let d = g.gcd(&probe);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            let other = g.div_exact(&d);
            split_linear(&d, rng, out)?;
            split_linear(&other, rng, out)?;
            return Ok(());
        }
    }
}

/// Distinct-degree parts of `f`: for each `d <= cap`, the squarefree product of
/// the monic irreducible factors of degree exactly `d`. The flag reports
/// whether `f` has an irreducible factor of degree above `cap`.
pub fn degree_parts(f: &UniPoly, cap: usize) -> Result<(Vec<(usize, UniPoly)>, bool), FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let ctx = f.ctx().clone();
    let f = f.monic();
    let mut parts: Vec<(usize, UniPoly)> = Vec::new();
    if f.degree() == Some(0) {
        return Ok((parts, false));
    }
    let q = ctx.order();
    let mut xq = UniPoly::x(&ctx).rem(&f)?;
    for d in 1..=cap {
        xq = xq.pow_mod(q, &f)?;
        let mut g = f.gcd(&x_minus(&ctx, &xq));
        for (d2, e) in &parts {
            if d % d2 == 0 {
                g = g.div_exact(e);
            }
        }
        if g.degree().unwrap_or(0) > 0 {
            parts.push((d, g));
        }
    }
    let mut rest = f.clone();
    for (_, e) in &parts {
        loop {
            let c = rest.gcd(e);
            if c.degree().unwrap_or(0) == 0 {
                break;
            }
            rest = rest.div_exact(&c);
        }
    }
    let partial = rest.degree().unwrap_or(0) > 0;
    Ok((parts, partial))
}

/// Every root of `q` in `F_{Q^d}` for `d <= ext_cap`, where `F_Q` is the
/// coefficient field, each tagged with the minimal such field.
pub fn find_roots(q: &UniPoly, ext_cap: usize) -> Result<RootSet, FieldError> {
    let (parts, partial) = degree_parts(q, ext_cap)?;
    let base = q.ctx().clone();
    let mut roots = Vec::new();
    for (d, part) in parts {
        let target = FieldCtx::new(base.p(), base.k() * d)?;
        let emb = Embedding::new(&base, &target)?;
        let q_big = q.embed(&emb);
        for value in roots_in_field(&part.embed(&emb))? {
            let multiplicity = q_big.root_multiplicity(&value);
            roots.push(Root { value, degree: d, multiplicity });
        }
    }
    Ok(RootSet { roots, partial })
}

/// Roots of `q` grouped into Galois orbits over the coefficient field.
pub fn root_orbits(q: &UniPoly, ext_cap: usize) -> Result<(Vec<RootOrbit>, bool), FieldError> {
    let set = find_roots(q, ext_cap)?;
    let base = q.ctx().clone();
    let mut orbits = Vec::new();
    let mut seen: Vec<FieldElem> = Vec::new();
    for root in &set.roots {
        if seen.contains(&root.value) {
            continue;
        }
        let conj = conjugates(&root.value, base.order());
        seen.extend(conj.iter().cloned());
        let emb = Embedding::new(&base, root.ctx())?;
        let minpoly = minimal_polynomial(&conj, &emb)?;
        let rep = conj.iter().min().expect("orbit is nonempty").clone();
        orbits.push(RootOrbit { rep, degree: conj.len(), minpoly, multiplicity: root.multiplicity });
    }
    orbits.sort_by(|a, b| (a.degree, a.minpoly.coeffs()).cmp(&(b.degree, b.minpoly.coeffs())));
    Ok((orbits, set.partial))
}

/// `a, a^Q, a^{Q^2}, ...` until the cycle closes.
pub(crate) fn conjugates(a: &FieldElem, base_order: u128) -> Vec<FieldElem> {
    let mut out = vec![a.clone()];
    let mut cur = a.pow(base_order);
    while &cur != a {
        out.push(cur.clone());
        cur = cur.pow(base_order);
    }
    out
}

/// `prod (X - c)` over a full conjugate set, pulled back to the base field.
pub(crate) fn minimal_polynomial(conj: &[FieldElem], emb: &Embedding) -> Result<UniPoly, FieldError> {
    let big = conj
        .iter()
        .fold(UniPoly::one(emb.dst()), |acc, c| &acc * &UniPoly::linear_root(c));
    let coeffs = big
        .coeffs()
        .iter()
        .map(|c| {
            emb.preimage(c).ok_or_else(|| FieldError::BadEmbedding {
                src: emb.src().label(),
                dst: emb.dst().label(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UniPoly::from_coeffs(emb.src(), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ctx: &Arc<FieldCtx>, cs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(ctx, cs.iter().map(|&c| FieldElem::from_int(ctx, c)).collect())
    }

    fn brute_force_roots(q: &UniPoly, ext: &Arc<FieldCtx>) -> Vec<FieldElem> {
        let emb = Embedding::new(q.ctx(), ext).unwrap();
        let big = q.embed(&emb);
        (0..ext.order())
            .map(|i| FieldElem::from_index(ext, i))
            .filter(|a| big.eval(a).is_zero())
            .collect()
    }

    #[test]
    fn v_squared_plus_v_over_f2() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let set = find_roots(&poly(&f2, &[0, 1, 1]), 6).unwrap();
        let vals: Vec<u32> = set.roots.iter().map(|r| r.value.as_prime().unwrap()).collect();
        assert_eq!(vals, vec![0, 1]);
        assert!(set.roots.iter().all(|r| r.degree == 1 && r.multiplicity == 1));
        assert!(!set.partial);
    }

    #[test]
    fn v_squared_plus_one_over_f3_needs_f9() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let q = poly(&f3, &[1, 0, 1]);
        let set = find_roots(&q, 6).unwrap();
        assert_eq!(set.roots.len(), 2);
        assert!(set.roots.iter().all(|r| r.degree == 2 && r.ctx().order() == 9));
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(brute_force_roots(&q, &f3).len(), 0);
        let mut brute = brute_force_roots(&q, &f9);
        brute.sort();
        let mut found: Vec<_> = set.roots.iter().map(|r| r.value.clone()).collect();
        found.sort();
        assert_eq!(found, brute);
    }

    #[test]
    fn linear_over_f5() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let set = find_roots(&poly(&f5, &[-2, 1]), 1).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert_eq!(set.roots[0].value.as_prime(), Some(2));
    }

    #[test]
    fn partial_flag_when_cap_too_small() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        // x^3 + x + 1 is irreducible over F_2
        let q = poly(&f2, &[1, 1, 0, 1]);
        let set = find_roots(&q, 2).unwrap();
        assert!(set.roots.is_empty() && set.partial);
        let set = find_roots(&q, 3).unwrap();
        assert_eq!(set.roots.len(), 3);
        assert!(!set.partial);
    }

    #[test]
    fn multiplicities_reported() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        // (x-1)^2 (x-2)
        let q = &poly(&f3, &[-1, 1]).pow(2) * &poly(&f3, &[-2, 1]);
        let set = find_roots(&q, 3).unwrap();
        let mults: Vec<usize> = set.roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mults, vec![2, 1]);
    }

    #[test]
    fn orbits_carry_minimal_polynomials() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        // x (x^2 + x + 1)
        let q = &UniPoly::x(&f2) * &poly(&f2, &[1, 1, 1]);
        let (orbits, partial) = root_orbits(&q, 4).unwrap();
        assert!(!partial);
        assert_eq!(orbits.len(), 2);
        assert_eq!(orbits[0].minpoly, UniPoly::x(&f2));
        assert_eq!(orbits[1].degree, 2);
        assert_eq!(orbits[1].minpoly, poly(&f2, &[1, 1, 1]));
    }

    #[test]
    fn agrees_with_exhaustive_evaluation() {
        // all monic polynomials of degree <= 3 over F_3, roots in F_{3^d}, d <= 4
        let f3 = FieldCtx::new(3, 1).unwrap();
        let exts: Vec<_> = (1..=4).map(|d| FieldCtx::new(3, d).unwrap()).collect();
        for deg in 1..=3usize {
            for idx in 0..3u32.pow(deg as u32) {
                let mut cs: Vec<i64> = (0..deg).map(|i| ((idx / 3u32.pow(i as u32)) % 3) as i64).collect();
                cs.push(1);
                let q = poly(&f3, &cs);
                let set = find_roots(&q, 4).unwrap();
                for ext in &exts {
                    let d = ext.k();
                    let mut found: Vec<_> = set
                        .roots
                        .iter()
                        .filter(|r| r.degree == d)
                        .map(|r| r.value.clone())
                        .collect();
                    found.sort();
                    // brute force restricted to elements of exact degree d
                    let mut brute: Vec<_> = brute_force_roots(&q, ext)
                        .into_iter()
                        .filter(|a| conjugates(a, 3).len() == d)
                        .collect();
                    brute.sort();
                    assert_eq!(found, brute, "q = {q}, d = {d}");
                }
            }
        }
    }

    #[test]
    fn roots_over_extension_base() {
        // base F_4, q = x^2 + g x + 1
        let f4 = FieldCtx::new(2, 2).unwrap();
        let g = FieldElem::generator(&f4);
        let q = UniPoly::from_coeffs(&f4, vec![FieldElem::one(&f4), g, FieldElem::one(&f4)]);
        let set = find_roots(&q, 3).unwrap();
        let total: usize = set.roots.len();
        assert_eq!(total, 2);
        for r in &set.roots {
            let emb = Embedding::new(&f4, r.ctx()).unwrap();
            assert!(q.embed(&emb).eval(&r.value).is_zero());
        }
    }
}

use std::sync::Arc;

use super::{roots_in_field, FieldCtx, FieldElem, FieldError, UniPoly};

/// A fixed field embedding `F_{p^k} -> F_{p^{km}}`.
///
/// The generator of the source maps to the least root (in [`FieldElem`]
/// order) of the source modulus inside the target, so the embedding for a
/// given pair of contexts is the same on every run.
#[derive(Debug, Clone)]
pub struct Embedding {
    src: Arc<FieldCtx>,
    dst: Arc<FieldCtx>,
    /// Images of `1, g, ..., g^{k-1}`.
    basis_images: Vec<FieldElem>,
}

impl Embedding {
    pub fn new(src: &Arc<FieldCtx>, dst: &Arc<FieldCtx>) -> Result<Self, FieldError> {
        if src.p() != dst.p() || dst.k() % src.k() != 0 {
            return Err(FieldError::BadEmbedding { src: src.label(), dst: dst.label() });
        }
        let one = FieldElem::one(dst);
        if src.k() == 1 {
            return Ok(Embedding { src: src.clone(), dst: dst.clone(), basis_images: vec![one] });
        }
        if **src == **dst {
            let basis_images = (0..src.k())
                .map(|i| {
                    let mut c = vec![0i64; src.k()];
                    c[i] = 1;
                    FieldElem::from_coeffs(dst, &c)
                })
                .collect();
            return Ok(Embedding { src: src.clone(), dst: dst.clone(), basis_images });
        }
        let modulus = UniPoly::from_coeffs(
            dst,
            src.modulus().iter().map(|&c| FieldElem::from_int(dst, c as i64)).collect(),
        );
        let roots = roots_in_field(&modulus)?;
        let gen = roots
            .into_iter()
            .min()
            .ok_or_else(|| FieldError::BadEmbedding { src: src.label(), dst: dst.label() })?;
        let mut basis_images = Vec::with_capacity(src.k());
        let mut cur = one;
        for _ in 0..src.k() {
            basis_images.push(cur.clone());
            cur = &cur * &gen;
        }
        Ok(Embedding { src: src.clone(), dst: dst.clone(), basis_images })
    }

    pub fn src(&self) -> &Arc<FieldCtx> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FieldCtx> {
        &self.dst
    }

    pub fn apply(&self, a: &FieldElem) -> FieldElem {
        debug_assert!(**a.ctx() == *self.src, "embedding applied to a foreign element");
        a.coeffs()
            .iter()
            .zip(&self.basis_images)
            .fold(FieldElem::zero(&self.dst), |acc, (&c, img)| &acc + &img.scale(c as u64))
    }

    /// The source element mapping to `b`, if `b` lies in the image.
    pub fn preimage(&self, b: &FieldElem) -> Option<FieldElem> {
        let p = self.src.p() as i64;
        let (rows, cols) = (self.dst.k(), self.src.k());
        // Augmented system: columns are basis images, right-hand side is b.
        let mut m: Vec<Vec<i64>> = (0..rows)
            .map(|r| {
                let mut row: Vec<i64> =
                    self.basis_images.iter().map(|img| img.coeffs()[r] as i64).collect();
                row.push(b.coeffs()[r] as i64);
                row
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, pr);
            let inv = mod_inv(m[r][c], p);
            for v in m[r].iter_mut() {
                *v = *v * inv % p;
            }
            for i in 0..rows {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for j in 0..=cols {
                        m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        if m[r..].iter().any(|row| row[cols] != 0) {
            return None;
        }
        let mut x = vec![0i64; cols];
        for (i, &c) in pivot_cols.iter().enumerate() {
            x[c] = m[i][cols];
        }
        Some(FieldElem::from_coeffs(&self.src, &x))
    }
}

fn mod_inv(a: i64, p: i64) -> i64 {
    let mut acc = 1i64;
    let mut b = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_is_fixed() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let f16 = FieldCtx::new(2, 4).unwrap();
        let e = Embedding::new(&f2, &f16).unwrap();
        assert!(e.apply(&FieldElem::one(&f2)).is_one());
        let f3 = FieldCtx::new(3, 1).unwrap();
        let f9 = FieldCtx::new(3, 2).unwrap();
        let e = Embedding::new(&f3, &f9).unwrap();
        assert_eq!(e.apply(&FieldElem::from_int(&f3, 2)), FieldElem::from_int(&f9, 2));
    }

    #[test]
    fn f4_into_f16_is_a_homomorphism() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let f16 = FieldCtx::new(2, 4).unwrap();
        let e = Embedding::new(&f4, &f16).unwrap();
        let mut images = std::collections::HashSet::new();
        for i in 0..4 {
            let a = FieldElem::from_index(&f4, i);
            images.insert(e.apply(&a));
            for j in 0..4 {
                let b = FieldElem::from_index(&f4, j);
                assert_eq!(e.apply(&(&a * &b)), &e.apply(&a) * &e.apply(&b));
                assert_eq!(e.apply(&(&a + &b)), &e.apply(&a) + &e.apply(&b));
            }
            assert_eq!(e.preimage(&e.apply(&a)), Some(a));
        }
        assert_eq!(images.len(), 4);
        // deterministic across constructions
        let e2 = Embedding::new(&FieldCtx::new(2, 2).unwrap(), &FieldCtx::new(2, 4).unwrap()).unwrap();
        let g = FieldElem::generator(&f4);
        assert_eq!(e.apply(&g), e2.apply(&g));
    }

    #[test]
    fn non_divisible_degrees_rejected() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let f8 = FieldCtx::new(2, 3).unwrap();
        assert!(matches!(Embedding::new(&f4, &f8), Err(FieldError::BadEmbedding { .. })));
    }

    #[test]
    fn preimage_outside_image_is_none() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let f9 = FieldCtx::new(3, 2).unwrap();
        let e = Embedding::new(&f3, &f9).unwrap();
        assert_eq!(e.preimage(&FieldElem::generator(&f9)), None);
    }
}

use super::{Elem, Field, GfError};

/// Ring embedding `F -> E` stored as a lookup table.
///
/// The generator of `F` is sent to the first root of `F`'s modulus in the
/// enumeration order of `E`, so the map is deterministic.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    image: Vec<Elem>,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Embedding, GfError> {
        let incompatible = |reason: &str| GfError::IncompatibleEmbedding {
            from: source.size(),
            to: target.size(),
            reason: reason.to_string(),
        };
        if source.characteristic() != target.characteristic() {
            return Err(incompatible("characteristics differ"));
        }
        if target.degree() % source.degree() != 0 {
            return Err(incompatible(&format!(
                "{} does not divide {}",
                source.degree(),
                target.degree()
            )));
        }
        if source == target {
            return Ok(Embedding {
                source: source.clone(),
                target: target.clone(),
                image: (0..source.size()).map(Elem).collect(),
            });
        }
        let root = match source.modulus() {
            None => target.one(),
            Some(m) => {
                let m: Vec<Elem> = m.iter().map(|&c| target.from_int(c as i64)).collect();
                target
                    .elements()
                    .find(|&z| horner(target, &m, z).is_zero())
                    .ok_or_else(|| incompatible("modulus has no root"))?
            }
        };
        let image = (0..source.size())
            .map(|idx| {
                let c: Vec<Elem> = source
                    .coeffs(Elem(idx))
                    .into_iter()
                    .map(|c| target.from_int(c as i64))
                    .collect();
                if source.degree() == 1 {
                    c[0]
                } else {
                    horner(target, &c, root)
                }
            })
            .collect();
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            image,
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a.0 as usize]
    }

    pub fn try_apply(&self, a: Elem) -> Result<Elem, GfError> {
        Ok(self.apply(self.source.check(a)?))
    }
}

/// Evaluate `sum c_i z^i` in `f`.
fn horner(f: &Field, c: &[Elem], z: Elem) -> Elem {
    c.iter().rev().fold(f.zero(), |acc, &ci| f.add(f.mul(acc, z), ci))
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    fn check_homomorphism(from: &Field, to: &Field) {
        let e = Embedding::new(from, to).unwrap();
        let mut seen = std::collections::HashSet::new();
        for a in from.elements() {
            assert!(seen.insert(e.apply(a)), "not injective");
            for b in from.elements() {
                assert_eq!(e.apply(from.add(a, b)), to.add(e.apply(a), e.apply(b)));
                assert_eq!(e.apply(from.mul(a, b)), to.mul(e.apply(a), e.apply(b)));
            }
        }
        assert_eq!(e.apply(from.one()), to.one());
    }

    #[test]
    fn prime_subfield_is_fixed() {
        let f5 = make_field(5, 1).unwrap();
        let f25 = make_field(5, 2).unwrap();
        let e = Embedding::new(&f5, &f25).unwrap();
        assert_eq!(e.apply(Elem(2)), Elem(2));
        check_homomorphism(&f5, &f25);
    }

    #[test]
    fn f4_into_f16() {
        let f4 = make_field(2, 2).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let e = Embedding::new(&f4, &f16).unwrap();
        let y = e.apply(f4.generator());
        let val = f16.add(f16.add(f16.mul(y, y), y), f16.one());
        assert!(val.is_zero());
        check_homomorphism(&f4, &f16);
    }

    #[test]
    fn exhaustive_small_towers() {
        for (p, a, b) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 4), (2, 1, 4), (3, 2, 2)] {
            check_homomorphism(&make_field(p, a).unwrap(), &make_field(p, b).unwrap());
        }
    }

    #[test]
    fn self_embedding_is_identity() {
        let f8 = make_field(2, 3).unwrap();
        let e = Embedding::new(&f8, &f8).unwrap();
        assert!(f8.elements().all(|a| e.apply(a) == a));
    }

    #[test]
    fn rejects_incompatible_degrees() {
        let f4 = make_field(2, 2).unwrap();
        let f8 = make_field(2, 3).unwrap();
        let f9 = make_field(3, 2).unwrap();
        assert!(Embedding::new(&f4, &f8).is_err());
        assert!(Embedding::new(&f4, &f9).is_err());
    }
}

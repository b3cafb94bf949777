//! Built-in varieties with independently known point counts.

use std::fmt;

use num_bigint::BigInt;

use crate::counting::{SingularBound, VarietySpec};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::mpoly::MultiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `X0 X2 - X1^2` in `P^2`.
    Conic,
    /// `X0 X3 - X1 X2` in `P^3`.
    QuadricSurface,
    /// `X1^2 - X0 X2` in `P^n`, vertex of dimension `n - 3`.
    QuadricCone { n: usize },
    /// `X0 X1 - X2 X3` in `P^n`, vertex of dimension `n - 4`.
    Rank4Quadric { n: usize },
    /// `X0^d + ... + X3^d` in `P^3`.
    Fermat { d: u32 },
    /// `X0^d + X1^d + X2^d` in `P^3`.
    FermatCone { d: u32 },
    /// `sum X_i^2 = sum a_i X_i^2 = 0` in `P^4`, `a_i` the first five field elements.
    TwoQuadrics,
    /// The same pencil on `X0..X{k}` with the remaining coordinates free,
    /// `k = 3` in `P^4` and `k = 4` in `P^5`.
    TwoQuadricsCone { n: usize },
}

/// Point counts computed without enumerating `P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub total: BigInt,
    pub singular: BigInt,
    /// `None` when the variety is smooth.
    pub singular_dim: Option<usize>,
}

impl GroundTruth {
    pub fn smooth(&self) -> BigInt {
        &self.total - &self.singular
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub spec: VarietySpec,
    pub truth: GroundTruth,
}

impl Instance {
    pub fn name(&self) -> String {
        self.family.to_string()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Conic => write!(f, "conic"),
            Family::QuadricSurface => write!(f, "quadric-surface"),
            Family::QuadricCone { n } => write!(f, "quadric-cone-p{n}"),
            Family::Rank4Quadric { n } => write!(f, "rank4-quadric-p{n}"),
            Family::Fermat { d } => write!(f, "fermat-surface-d{d}"),
            Family::FermatCone { d } => write!(f, "fermat-cone-d{d}"),
            Family::TwoQuadrics => write!(f, "two-quadrics-p4"),
            Family::TwoQuadricsCone { n } => write!(f, "two-quadrics-cone-p{n}"),
        }
    }
}

/// Every family in the default catalog.
pub fn families() -> Vec<Family> {
    vec![
        Family::Conic,
        Family::QuadricSurface,
        Family::QuadricCone { n: 3 },
        Family::QuadricCone { n: 4 },
        Family::Rank4Quadric { n: 4 },
        Family::Rank4Quadric { n: 5 },
        Family::Fermat { d: 3 },
        Family::Fermat { d: 4 },
        Family::FermatCone { d: 3 },
        Family::TwoQuadrics,
        Family::TwoQuadricsCone { n: 4 },
        Family::TwoQuadricsCone { n: 5 },
    ]
}

/// Look a family up by its display name.
pub fn find(name: &str) -> Option<Family> {
    families().into_iter().find(|f| f.to_string() == name).or_else(|| {
        let parse = |prefix: &str| name.strip_prefix(prefix).and_then(|d| d.parse::<u32>().ok());
        parse("fermat-surface-d")
            .map(|d| Family::Fermat { d })
            .or_else(|| parse("fermat-cone-d").map(|d| Family::FermatCone { d }))
    })
}

impl Family {
    pub fn about(&self) -> &'static str {
        match self {
            Family::Conic => "smooth plane conic",
            Family::QuadricSurface => "smooth quadric surface",
            Family::QuadricCone { .. } => "rank-3 quadric, cone over a conic",
            Family::Rank4Quadric { .. } => "rank-4 quadric, cone over a quadric surface",
            Family::Fermat { .. } => "Fermat surface",
            Family::FermatCone { .. } => "cone over a Fermat curve",
            Family::TwoQuadrics => "smooth intersection of two diagonal quadrics",
            Family::TwoQuadricsCone { .. } => "cone over an intersection of two diagonal quadrics",
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match *self {
            Family::Conic => 2,
            Family::QuadricSurface | Family::Fermat { .. } | Family::FermatCone { .. } => 3,
            Family::TwoQuadrics => 4,
            Family::QuadricCone { n } | Family::Rank4Quadric { n } | Family::TwoQuadricsCone { n } => n,
        }
    }

    /// `Ok(())` when the family is defined and behaves as documented over `field`.
    pub fn supports(&self, field: &Field) -> std::result::Result<(), String> {
        let p = field.characteristic();
        let q = field.size();
        match *self {
            Family::QuadricCone { n } if n < 3 => Err("needs n >= 3".into()),
            Family::Rank4Quadric { n } if n < 4 => Err("needs n >= 4".into()),
            Family::TwoQuadricsCone { n } if !(4..=5).contains(&n) => Err("needs n = 4 or 5".into()),
            Family::Fermat { d } | Family::FermatCone { d } => {
                if d < 2 {
                    Err("needs d >= 2".into())
                } else if d % p == 0 {
                    Err(format!("characteristic {p} divides d = {d}"))
                } else if d >= q {
                    Err(format!("needs d < q, got d = {d}, q = {q}"))
                } else {
                    Ok(())
                }
            }
            Family::TwoQuadrics | Family::TwoQuadricsCone { .. } => {
                if p == 2 {
                    Err("diagonal quadrics degenerate in characteristic 2".into())
                } else if q < 5 {
                    Err("needs five distinct coefficients, q >= 5".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self, field: &Field) -> Result<Instance> {
        self.supports(field)
            .map_err(|why| Error::invalid("catalog domain", format!("{self} over F_{}: {why}", field.name())))?;
        let q = BigInt::from(field.size());
        let one = BigInt::from(1);
        let n = self.ambient_dim();
        let quad = |terms: &[(&[usize], i64)]| -> Result<MultiPoly> {
            Ok(MultiPoly::from_terms(
                field,
                &[n + 1],
                terms.iter().map(|(vars, c)| {
                    let mut e = vec![0u32; n + 1];
                    for &v in *vars {
                        e[v] += 1;
                    }
                    (e, field.from_int(*c))
                }),
            )?)
        };
        let (gens, singular, truth) = match *self {
            Family::Conic => (
                vec![quad(&[(&[0, 2], 1), (&[1, 1], -1)])?],
                SingularBound::Smooth,
                GroundTruth {
                    total: &q + 1u32,
                    singular: 0.into(),
                    singular_dim: None,
                },
            ),
            Family::QuadricSurface => (
                vec![quad(&[(&[0, 3], 1), (&[1, 2], -1)])?],
                SingularBound::Smooth,
                GroundTruth {
                    total: (&q + 1u32).pow(2),
                    singular: 0.into(),
                    singular_dim: None,
                },
            ),
            Family::QuadricCone { n } => {
                // Cone over a conic with vertex P^{n-3}.
                let vertex = p_r(&q, n - 3);
                (
                    vec![quad(&[(&[1, 1], 1), (&[0, 2], -1)])?],
                    SingularBound::AtMost(n - 3),
                    GroundTruth {
                        total: &vertex + q.pow((n - 2) as u32) * (&q + 1u32),
                        singular: vertex,
                        singular_dim: Some(n - 3),
                    },
                )
            }
            Family::Rank4Quadric { n } => {
                let vertex = p_r(&q, n - 4);
                (
                    vec![quad(&[(&[0, 1], 1), (&[2, 3], -1)])?],
                    SingularBound::AtMost(n - 4),
                    GroundTruth {
                        total: &vertex + q.pow((n - 3) as u32) * (&q + 1u32).pow(2),
                        singular: vertex,
                        singular_dim: Some(n - 4),
                    },
                )
            }
            Family::Fermat { d } => {
                let g = diagonal(field, n, d, &[field.one(); 4])?;
                let total = diagonal_count(field, d, &[vec![field.one(); 4]], 0);
                (
                    vec![g],
                    SingularBound::Smooth,
                    GroundTruth {
                        total,
                        singular: 0.into(),
                        singular_dim: None,
                    },
                )
            }
            Family::FermatCone { d } => {
                let rows = [vec![field.one(); 3]];
                (
                    vec![diagonal(field, n, d, &rows[0])?],
                    SingularBound::AtMost(0),
                    GroundTruth {
                        total: diagonal_count(field, d, &rows, 1),
                        singular: one,
                        singular_dim: Some(0),
                    },
                )
            }
            Family::TwoQuadrics => {
                let rows = pencil(field, 5);
                (
                    rows.iter()
                        .map(|r| diagonal(field, n, 2, r))
                        .collect::<Result<_>>()?,
                    SingularBound::Smooth,
                    GroundTruth {
                        total: diagonal_count(field, 2, &rows, 0),
                        singular: 0.into(),
                        singular_dim: None,
                    },
                )
            }
            Family::TwoQuadricsCone { n } => {
                let rows = pencil(field, n);
                (
                    rows.iter()
                        .map(|r| diagonal(field, n, 2, r))
                        .collect::<Result<_>>()?,
                    SingularBound::AtMost(0),
                    GroundTruth {
                        total: diagonal_count(field, 2, &rows, 1),
                        singular: one,
                        singular_dim: Some(0),
                    },
                )
            }
        };
        let r = n - gens.len();
        Ok(Instance {
            family: *self,
            spec: VarietySpec::new(field, n, r, gens, singular)?,
            truth,
        })
    }
}

/// Every family defined over `field`, in catalog order.
pub fn instances(field: &Field) -> Result<Vec<Instance>> {
    families()
        .into_iter()
        .filter(|f| f.supports(field).is_ok())
        .map(|f| f.build(field))
        .collect()
}

fn p_r(q: &BigInt, r: usize) -> BigInt {
    (0..=r).map(|i| q.pow(i as u32)).sum()
}

/// `[1, ..., 1]` and `[a_0, ..., a_{k-1}]` with `a_i` the `i`-th field element.
fn pencil(field: &Field, k: usize) -> Vec<Vec<Elem>> {
    vec![
        vec![field.one(); k],
        (0..k).map(|i| field.nth_element(i as u32)).collect(),
    ]
}

/// `sum_j row_j X_j^d` in `P^n`.
fn diagonal(field: &Field, n: usize, d: u32, row: &[Elem]) -> Result<MultiPoly> {
    Ok(MultiPoly::from_terms(
        field,
        &[n + 1],
        row.iter().enumerate().map(|(j, &c)| {
            let mut e = vec![0u32; n + 1];
            e[j] = d;
            (e, c)
        }),
    )?)
}

/// Projective points of `{sum_j c_{ij} X_j^d = 0 for all rows i}` with
/// `free` extra coordinates absent from every equation, by convolving the
/// distribution of `x^d` one coordinate at a time.
pub fn diagonal_count(field: &Field, d: u32, rows: &[Vec<Elem>], free: usize) -> BigInt {
    let q = field.size() as usize;
    let m = rows.len();
    let k = rows[0].len();
    let elems: Vec<Elem> = field.elements().collect();
    let mut mult = vec![0u64; q];
    for &x in &elems {
        mult[field.pow(x, d as u64).index() as usize] += 1;
    }
    // States are tuples of partial sums, packed base q by element index.
    let states = q.pow(m as u32);
    let encode = |v: &[Elem]| v.iter().rev().fold(0usize, |acc, e| acc * q + e.index() as usize);
    let decode = |mut s: usize| -> Vec<Elem> {
        (0..m)
            .map(|_| {
                let e = field.elem((s % q) as u32).expect("index below q");
                s /= q;
                e
            })
            .collect()
    };
    let mut dist = vec![BigInt::from(0); states];
    dist[0] = BigInt::from(1);
    for j in 0..k {
        let mut next = vec![BigInt::from(0); states];
        for (s, w) in dist.iter().enumerate() {
            if w == &BigInt::from(0) {
                continue;
            }
            let cur = decode(s);
            for (y, &c) in mult.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let y = field.elem(y as u32).expect("index below q");
                let moved: Vec<Elem> = (0..m)
                    .map(|i| field.add(cur[i], field.mul(rows[i][j], y)))
                    .collect();
                next[encode(&moved)] += w * c;
            }
        }
        dist = next;
    }
    let qb = BigInt::from(q);
    let affine = &dist[0] * qb.pow(free as u32);
    (affine - 1) / (qb - 1)
}

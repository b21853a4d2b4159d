//! Chambers of the real arrangement, decided exactly with Fourier–Motzkin
//! elimination. Used as an independent oracle for `beta(A)`.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest ambient dimension the eliminator accepts.
pub const MAX_DIM: usize = 6;
/// Largest number of input constraints the eliminator accepts.
pub const MAX_CONSTRAINTS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Less,
    LessEq,
    Greater,
    GreaterEq,
}

/// `coeffs . x  rel  rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub relation: Relation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub ambient_dim: usize,
    pub constraints: Vec<Constraint>,
}

/// Internal form `coeffs . x < rhs` (strict) or `<=`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Upper {
    coeffs: Vec<Rational>,
    rhs: Rational,
    strict: bool,
}

impl Upper {
    fn from_constraint(c: &Constraint) -> Self {
        let (flip, strict) = match c.relation {
            Relation::Less => (false, true),
            Relation::LessEq => (false, false),
            Relation::Greater => (true, true),
            Relation::GreaterEq => (true, false),
        };
        if flip {
            Upper {
                coeffs: c.coeffs.iter().map(|v| -v.clone()).collect(),
                rhs: -c.rhs.clone(),
                strict,
            }
        } else {
            Upper {
                coeffs: c.coeffs.clone(),
                rhs: c.rhs.clone(),
                strict,
            }
        }
    }

    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|v| !v.is_zero()) {
            let s = lead.abs();
            if !s.is_one() {
                for v in &mut self.coeffs {
                    *v /= &s;
                }
                self.rhs /= &s;
            }
        }
        self
    }

    /// `0 < rhs` or `0 <= rhs` once every coefficient is zero.
    fn trivially_holds(&self) -> bool {
        if self.strict {
            self.rhs.is_positive()
        } else {
            !self.rhs.is_negative()
        }
    }
}

impl LinearSystem {
    fn check_caps(&self) -> Result<()> {
        Error::check_cap("elimination dimension", MAX_DIM, self.ambient_dim)?;
        Error::check_cap("elimination constraint count", MAX_CONSTRAINTS, self.constraints.len())?;
        if let Some(i) = self.constraints.iter().position(|c| c.coeffs.len() != self.ambient_dim) {
            return Err(Error::input(alloc::format!("constraint {i} has the wrong length")));
        }
        Ok(())
    }
}

/// Exact feasibility of a system of strict and weak linear inequalities.
pub fn fm_feasible(s: &LinearSystem) -> Result<bool> {
    s.check_caps()?;
    Ok(eliminate(s.constraints.iter().map(Upper::from_constraint).collect(), s.ambient_dim))
}

fn eliminate(mut rows: Vec<Upper>, dim: usize) -> bool {
    for var in (0..dim).rev() {
        rows = prune(rows);
        let mut uppers = Vec::new();
        let mut lowers = Vec::new();
        let mut rest = Vec::new();
        for r in rows {
            if r.coeffs[var].is_positive() {
                uppers.push(r);
            } else if r.coeffs[var].is_negative() {
                lowers.push(r);
            } else {
                rest.push(r);
            }
        }
        // x_var < (rhs_u - rest_u) / c_u and x_var > (rhs_l - rest_l) / c_l
        // combine into one inequality without x_var.
        for u in &uppers {
            for l in &lowers {
                let cu = &u.coeffs[var];
                let cl = -l.coeffs[var].clone();
                let coeffs = u
                    .coeffs
                    .iter()
                    .zip(&l.coeffs)
                    .map(|(a, b)| a * &cl + b * cu)
                    .collect();
                rest.push(Upper {
                    coeffs,
                    rhs: &u.rhs * &cl + &l.rhs * cu,
                    strict: u.strict || l.strict,
                });
            }
        }
        rows = rest;
    }
    rows.iter().all(Upper::trivially_holds)
}

/// Drops duplicates, keeping the tightest bound per direction, and returns
/// early failure rows intact.
fn prune(rows: Vec<Upper>) -> Vec<Upper> {
    let mut rows: Vec<Upper> = rows.into_iter().map(Upper::normalized).collect();
    rows.sort_by(|a, b| {
        a.coeffs
            .cmp(&b.coeffs)
            .then(a.rhs.cmp(&b.rhs))
            .then(b.strict.cmp(&a.strict))
    });
    rows.dedup_by(|later, kept| later.coeffs == kept.coeffs);
    rows
}

/// True when the (feasible) open polyhedron is bounded: its recession cone
/// `{v : coeffs . v rel 0 weakly}` is zero. Each of the `2n` systems
/// `cone ∧ ±v_j >= 1` is tested for feasibility.
pub fn chamber_bounded(s: &LinearSystem) -> Result<bool> {
    if !fm_feasible(s)? {
        return Err(Error::input("boundedness asked of an infeasible system"));
    }
    let n = s.ambient_dim;
    let cone: Vec<Upper> = s
        .constraints
        .iter()
        .map(|c| Upper {
            rhs: Rational::zero(),
            strict: false,
            ..Upper::from_constraint(c)
        })
        .collect();
    for j in 0..n {
        for sign in [-1i64, 1] {
            let mut rows = cone.clone();
            let mut coeffs = alloc::vec![Rational::zero(); n];
            coeffs[j] = Rational::from_integer((-sign).into());
            rows.push(Upper {
                coeffs,
                rhs: -Rational::one(),
                strict: false,
            });
            if eliminate(rows, n) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    /// One of `'+'` / `'-'` per hyperplane: `a.x > b` / `a.x < b`.
    pub signs: String,
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberReport {
    pub total: usize,
    pub bounded: usize,
    pub chambers: Vec<Chamber>,
}

/// Every feasible sign vector of the real arrangement, in lexicographic
/// order with `'+'` before `'-'`.
pub fn enumerate_chambers(a: &Arrangement, max_hyperplanes: usize) -> Result<ChamberReport> {
    Error::check_cap("chamber oracle hyperplane count", max_hyperplanes, a.len())?;
    let m = a.len();
    let mut chambers = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let signs: String = (0..m)
            .map(|i| if mask >> (m - 1 - i) & 1 == 0 { '+' } else { '-' })
            .collect();
        let system = LinearSystem {
            ambient_dim: a.ambient_dim(),
            constraints: a
                .hyperplanes()
                .iter()
                .zip(signs.chars())
                .map(|(h, s)| Constraint {
                    coeffs: h.normal().to_vec(),
                    rhs: h.offset().clone(),
                    relation: if s == '+' { Relation::Greater } else { Relation::Less },
                })
                .collect(),
        };
        if fm_feasible(&system)? {
            let bounded = chamber_bounded(&system)?;
            chambers.push(Chamber { signs, bounded });
        }
    }
    Ok(ChamberReport {
        total: chambers.len(),
        bounded: chambers.iter().filter(|c| c.bounded).count(),
        chambers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::{Rng, SeedableRng};

    fn c(coeffs: &[i64], relation: Relation, rhs: i64) -> Constraint {
        Constraint {
            coeffs: coeffs.iter().map(|&v| int(v)).collect(),
            rhs: int(rhs),
            relation,
        }
    }

    fn sys(n: usize, cs: Vec<Constraint>) -> LinearSystem {
        LinearSystem {
            ambient_dim: n,
            constraints: cs,
        }
    }

    #[test]
    fn feasibility_examples() {
        use Relation::*;
        assert!(fm_feasible(&sys(1, vec![c(&[1], Greater, 0), c(&[1], Less, 1)])).unwrap());
        assert!(!fm_feasible(&sys(1, vec![c(&[1], Greater, 1), c(&[1], Less, 0)])).unwrap());
        assert!(!fm_feasible(&sys(1, vec![c(&[1], Greater, 0), c(&[1], Less, 0)])).unwrap());
        assert!(fm_feasible(&sys(1, vec![c(&[1], GreaterEq, 0), c(&[1], LessEq, 0)])).unwrap());
        let too_big = sys(7, vec![]);
        assert!(matches!(fm_feasible(&too_big), Err(Error::Resource { .. })));
    }

    #[test]
    fn boundedness_examples() {
        use Relation::*;
        let triangle = sys(2, vec![c(&[1, 0], Greater, 0), c(&[0, 1], Greater, 0), c(&[1, 1], Less, 1)]);
        assert!(chamber_bounded(&triangle).unwrap());
        assert!(!chamber_bounded(&sys(2, vec![c(&[1, 0], Greater, 0)])).unwrap());
        let strip = sys(2, vec![c(&[1, 0], Greater, 0), c(&[1, 0], Less, 1)]);
        assert!(!chamber_bounded(&strip).unwrap());
        let empty = sys(1, vec![c(&[1], Greater, 1), c(&[1], Less, 0)]);
        assert!(chamber_bounded(&empty).is_err());
    }

    #[test]
    fn chamber_examples() {
        let two_points = Arrangement::from_integer_rows(1, &[&[1, 0], &[1, 1]]).unwrap();
        let r = enumerate_chambers(&two_points, 12).unwrap();
        assert_eq!((r.total, r.bounded), (3, 1));
        let boolean = Arrangement::from_integer_rows(2, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        let r = enumerate_chambers(&boolean, 12).unwrap();
        assert_eq!((r.total, r.bounded), (4, 0));
        let generic = Arrangement::from_integer_rows(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]).unwrap();
        let r = enumerate_chambers(&generic, 12).unwrap();
        assert_eq!((r.total, r.bounded), (7, 1));
        assert_eq!(r.chambers.iter().find(|ch| ch.bounded).unwrap().signs, "++-");
    }

    /// Grid search with step 1/24 on [-10, 10]^2 for open systems with
    /// small integer data. Any witness proves feasibility; the FM answer
    /// must match on every sampled system.
    #[test]
    fn agrees_with_grid_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let scale = 24i64;
        for _ in 0..60 {
            let raw: Vec<([i64; 2], i64, bool)> = (0..3)
                .map(|_| {
                    let mut a = [0, 0];
                    while a == [0, 0] {
                        a = [rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
                    }
                    (a, rng.gen_range(-2..=2), rng.gen_bool(0.5))
                })
                .collect();
            let grid = (-10 * scale..=10 * scale).any(|i| {
                (-10 * scale..=10 * scale).any(|j| {
                    raw.iter().all(|(a, b, greater)| {
                        let lhs = a[0] * i + a[1] * j;
                        if *greater {
                            lhs > b * scale
                        } else {
                            lhs < b * scale
                        }
                    })
                })
            });
            let system = sys(
                2,
                raw.iter()
                    .map(|(a, b, g)| c(a, if *g { Relation::Greater } else { Relation::Less }, *b))
                    .collect(),
            );
            assert_eq!(fm_feasible(&system).unwrap(), grid, "{raw:?}");
        }
    }
}

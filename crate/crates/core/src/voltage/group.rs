//! Finite groups as validated Cayley tables. Element 0 is the identity.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("product {a}*{b} = {value} is outside the group")]
    NotClosed { a: usize, b: usize, value: usize },
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("group of order {0} is too large for a Cayley table")]
    TooLarge(usize),
    #[error("cannot parse group spec {0:?}")]
    BadSpec(String),
}

const MAX_ORDER: usize = 4096;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validates a row-major multiplication table.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<u32>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        if table.len() != order * order {
            return Err(GroupError::TableSize {
                expected: order * order,
                found: table.len(),
            });
        }
        for a in 0..order {
            for b in 0..order {
                let value = table[a * order + b] as usize;
                if value >= order {
                    return Err(GroupError::NotClosed { a, b, value });
                }
            }
        }
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(GroupError::NoIdentity);
            }
        }
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            match row.iter().position(|&x| x == 0) {
                Some(b) if table[b * order + a] == 0 => inverse[a] = b as u32,
                _ => return Err(GroupError::NoInverse(a)),
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b] as usize;
                for c in 0..order {
                    let bc = table[b * order + c] as usize;
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            order,
            table,
            inverse,
        })
    }

    fn from_fn(name: String, order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b) as u32);
            }
        }
        Self::from_table(name, order, table)
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::EmptyGroup);
        }
        Self::from_fn(format!("Z{n}"), n, |a, b| (a + b) % n)
    }

    /// `Z_p^k`, elements as base-`p` digit vectors.
    pub fn elementary_abelian(p: usize, k: u32) -> Result<Self, GroupError> {
        if p < 2 || (2..p).any(|d| p % d == 0) {
            return Err(GroupError::NotPrime(p));
        }
        if k == 0 {
            return Err(GroupError::EmptyGroup);
        }
        let order = p.checked_pow(k).filter(|&o| o <= MAX_ORDER).ok_or(GroupError::TooLarge(usize::MAX))?;
        Self::from_fn(format!("Z{p}^{k}"), order, |mut a, mut b| {
            let (mut out, mut place) = (0, 1);
            for _ in 0..k {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        })
    }

    /// `Z9 ⋊ Z3` with the generator of `Z3` acting as multiplication by 4;
    /// the non-abelian group of order 27 and exponent 9. Element `a + 9b`.
    pub fn nonabelian27_exp9() -> Self {
        let pow4 = [1, 4, 7];
        Self::from_fn("NA27".into(), 27, |x, y| {
            let (a1, b1, a2, b2) = (x % 9, x / 9, y % 9, y / 9);
            (a1 + pow4[b1] * a2) % 9 + 9 * ((b1 + b2) % 3)
        })
        .expect("valid group")
    }

    /// Upper unitriangular 3x3 matrices over `Z3` (exponent 3). Element
    /// `x + 3y + 9z` for the matrix with entries x, y above the diagonal and
    /// z in the corner.
    pub fn heisenberg27() -> Self {
        Self::from_fn("HEIS27".into(), 27, |p, q| {
            let (x1, y1, z1) = (p % 3, p / 3 % 3, p / 9);
            let (x2, y2, z2) = (q % 3, q / 3 % 3, q / 9);
            (x1 + x2) % 3 + 3 * ((y1 + y2) % 3) + 9 * ((z1 + z2 + x1 * y2) % 3)
        })
        .expect("valid group")
    }

    /// `self × other`, element `a + |self|·b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self, GroupError> {
        let (m, k) = (self.order, other.order);
        let order = m.checked_mul(k).ok_or(GroupError::TooLarge(usize::MAX))?;
        Self::from_fn(format!("{}x{}", self.name, other.name), order, |x, y| {
            self.mul(x % m, y % m) + m * other.mul(x / m, y / m)
        })
    }

    /// Parses `Z7`, `Z3^2`, `NA27`, `HEIS27` and `x`-separated products
    /// such as `Z3xZ5`.
    pub fn parse(spec: &str) -> Result<Self, GroupError> {
        let bad = || GroupError::BadSpec(spec.to_string());
        let mut out: Option<FiniteGroup> = None;
        for part in spec.trim().split(['x', 'X', '*']) {
            let part = part.trim();
            let g = match part.to_ascii_uppercase().as_str() {
                "NA27" => Self::nonabelian27_exp9(),
                "HEIS27" => Self::heisenberg27(),
                p if p.starts_with('Z') => match p[1..].split_once('^') {
                    Some((base, exp)) => Self::elementary_abelian(
                        base.parse().map_err(|_| bad())?,
                        exp.parse().map_err(|_| bad())?,
                    )?,
                    None => Self::cyclic(p[1..].parse().map_err(|_| bad())?)?,
                },
                _ => return Err(bad()),
            };
            out = Some(match out {
                None => g,
                Some(acc) => acc.direct_product(&g)?,
            });
        }
        out.ok_or_else(bad)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order)
            .map(|a| self.element_order(a))
            .fold(1, |l, o| l / gcd(l, o) * o)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Size of the subgroup generated by `gens`.
    pub fn generated_order(&self, gens: &[usize]) -> usize {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

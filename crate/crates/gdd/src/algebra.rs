//! Finite fields, mutually orthogonal Latin squares, transversal designs and
//! resolvable GDDs: the classical ingredients the recursive constructions
//! draw on.
//!
//! Everything here is verified before being returned: the squares are checked
//! pairwise orthogonal and the designs are run through the pair-coverage
//! verifiers, so a bug aborts instead of contaminating downstream
//! constructions.

use crate::design::{verify_gdd, verify_resolution, Design};
use crate::error::{Error, Result};

/// GF(p^k) with full addition and multiplication tables over `0..q`.
///
/// Elements are polynomials over GF(p) encoded base p (digit i is the
/// coefficient of x^i). For k > 1 arithmetic is modulo the lexicographically
/// least monic irreducible polynomial of degree k.
#[derive(Debug, Clone)]
pub struct FiniteField {
    q: usize,
    p: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    primitive: usize,
}

/// Split q into (p, k) with q = p^k, p prime.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut k = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                k += 1;
            }
            return (rest == 1).then_some((p, k));
        }
        p += 1;
    }
    Some((q, 1)) // q itself is prime
}

impl FiniteField {
    pub fn new(q: usize) -> Result<FiniteField> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let modulus = if k == 1 {
            Vec::new()
        } else {
            irreducible(p, k)
        };
        let mut add = vec![0usize; q * q];
        let mut mul = vec![0usize; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = add_poly(a, b, p);
                mul[a * q + b] = mul_poly(a, b, p, k, &modulus);
            }
        }
        let field = FiniteField {
            q,
            p,
            add,
            mul,
            primitive: 0,
        };
        let primitive = (1..q)
            .find(|&g| field.order_of(g) == q - 1)
            .ok_or_else(|| Error::Internal(format!("no primitive element in GF({q})")))?;
        Ok(FiniteField { primitive, ..field })
    }

    pub fn order(&self) -> usize {
        self.q
    }
    pub fn characteristic(&self) -> usize {
        self.p
    }
    pub fn primitive_element(&self) -> usize {
        self.primitive
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }
    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }
    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| (1..self.q).find(|&b| self.mul(a, b) == 1).unwrap())
    }

    fn order_of(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, g);
            n += 1;
            if n > self.q {
                return 0; // not invertible (can only happen for broken tables)
            }
        }
        n
    }
}

fn add_poly(a: usize, b: usize, p: usize) -> usize {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a + b) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn mul_poly(a: usize, b: usize, p: usize, k: usize, modulus: &[usize]) -> usize {
    // coefficient vectors
    let digits = |mut n: usize| -> Vec<usize> {
        let mut d = Vec::new();
        while n > 0 {
            d.push(n % p);
            n /= p;
        }
        d
    };
    let da = digits(a);
    let db = digits(b);
    let mut prod = vec![0usize; da.len() + db.len()];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    if k > 1 {
        // reduce modulo the irreducible polynomial (monic, degree k)
        for d in (k..prod.len()).rev() {
            let coeff = prod[d];
            if coeff != 0 {
                prod[d] = 0;
                for (i, &m) in modulus.iter().enumerate().take(k) {
                    // x^d = x^(d-k) * (-(modulus tail))
                    let sub = (coeff * m) % p;
                    prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
                }
            }
        }
    } else {
        for d in (1..prod.len()).rev() {
            prod[d] = 0; // single digit mod p already handled below
        }
    }
    prod.iter()
        .take(k.max(1))
        .rev()
        .fold(0, |acc, &c| acc * p + c)
}

/// Lexicographically least monic irreducible polynomial of degree k over
/// GF(p), returned as its k low-order coefficients (constant term first).
fn irreducible(p: usize, k: usize) -> Vec<usize> {
    let total = p.pow(k as u32);
    'candidate: for tail in 0..total {
        // candidate = x^k + tail (tail encodes low coefficients, base p,
        // iterated in lexicographic order of (c_{k-1}, ..., c_0))
        let coeffs: Vec<usize> = {
            let mut c = Vec::with_capacity(k);
            let mut n = tail;
            for _ in 0..k {
                c.push(n % p);
                n /= p;
            }
            c
        };
        // trial division by every monic polynomial of degree 1..=k/2
        for d in 1..=k / 2 {
            let dim = p.pow(d as u32);
            for div_tail in 0..dim {
                let mut divisor = Vec::with_capacity(d + 1);
                let mut n = div_tail;
                for _ in 0..d {
                    divisor.push(n % p);
                    n /= p;
                }
                divisor.push(1);
                if divides(&coeffs, k, &divisor, p) {
                    continue 'candidate;
                }
            }
        }
        return coeffs;
    }
    unreachable!("irreducible polynomials of degree {k} over GF({p}) exist")
}

/// Does `divisor` (monic, coefficient list) divide x^k + tail?
fn divides(tail: &[usize], k: usize, divisor: &[usize], p: usize) -> bool {
    let mut rem: Vec<usize> = tail.to_vec();
    rem.resize(k + 1, 0);
    rem[k] = 1;
    let d = divisor.len() - 1;
    for lead in (d..=k).rev() {
        let c = rem[lead];
        if c == 0 {
            continue;
        }
        for (i, &m) in divisor.iter().enumerate() {
            let sub = (c * m) % p;
            rem[lead - d + i] = (rem[lead - d + i] + p - sub) % p;
        }
    }
    rem.iter().all(|&c| c == 0)
}

/// A set of pairwise orthogonal Latin squares of side q.
#[derive(Debug, Clone)]
pub struct LatinSquareSet {
    pub side: usize,
    pub squares: Vec<Vec<Vec<usize>>>,
}

impl LatinSquareSet {
    pub fn is_valid(&self) -> bool {
        let q = self.side;
        let latin = |sq: &Vec<Vec<usize>>| {
            (0..q).all(|i| {
                let mut row = vec![false; q];
                let mut col = vec![false; q];
                for j in 0..q {
                    if std::mem::replace(&mut row[sq[i][j]], true)
                        || std::mem::replace(&mut col[sq[j][i]], true)
                    {
                        return false;
                    }
                }
                true
            })
        };
        if !self.squares.iter().all(latin) {
            return false;
        }
        for (i, a) in self.squares.iter().enumerate() {
            for b in &self.squares[i + 1..] {
                let mut seen = vec![false; q * q];
                for x in 0..q {
                    for y in 0..q {
                        let pair = a[x][y] * q + b[x][y];
                        if std::mem::replace(&mut seen[pair], true) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// q - 1 pairwise orthogonal Latin squares of side q: L_a(x, y) = a*x + y in
/// GF(q) for each a != 0. Side 2 yields the single (degenerate) square.
pub fn mols(q: usize) -> Result<LatinSquareSet> {
    let field = FiniteField::new(q)?;
    let squares = (1..q)
        .map(|a| {
            (0..q)
                .map(|x| (0..q).map(|y| field.add(field.mul(a, x), y)).collect())
                .collect()
        })
        .collect();
    let set = LatinSquareSet { side: q, squares };
    if !set.is_valid() {
        return Err(Error::Internal(format!("MOLS({q}) failed orthogonality")));
    }
    Ok(set)
}

/// Transversal design TD(k, q): a k-GDD of type q^k with q^2 blocks, from
/// k - 2 of the field's MOLS. Point z of group i is `i*q + z`.
pub fn transversal_design(k: usize, q: usize) -> Result<Design> {
    if k < 3 || k > q + 1 {
        return Err(Error::TooManyGroups {
            what: "TD",
            k,
            q,
            bound: q + 1,
        });
    }
    let field = FiniteField::new(q)?;
    let groups: Vec<Vec<u32>> = (0..k)
        .map(|i| (0..q).map(|z| (i * q + z) as u32).collect())
        .collect();
    let mut blocks = Vec::with_capacity(q * q);
    for x in 0..q {
        for y in 0..q {
            let mut block = Vec::with_capacity(k);
            block.push(x as u32);
            block.push((q + y) as u32);
            for a in 1..k - 1 {
                block.push(((a + 1) * q + field.add(field.mul(a, x), y)) as u32);
            }
            blocks.push(block);
        }
    }
    let design = Design::new(k * q, groups, blocks)?;
    let report = verify_gdd(&design);
    if !report.ok {
        return Err(Error::Internal(format!(
            "TD({k}, {q}) failed verification: {report}"
        )));
    }
    Ok(design)
}

/// Resolvable k-GDD of type q^k (k parallel classes of q blocks... one class
/// per field element). Block (x, y) takes point `x + a*y` in the group of
/// label a, where the k labels are infinity, 0, and k - 2 further field
/// elements other than 0 and 1; class c collects the blocks with x = c - y.
/// Label 1 is excluded so every class meets every group exactly once.
pub fn rgdd(k: usize, q: usize) -> Result<Design> {
    if k < 2 || k > q {
        return Err(Error::TooManyGroups {
            what: "RGDD",
            k,
            q,
            bound: q,
        });
    }
    let field = FiniteField::new(q)?;
    // group labels: infinity (index 0), then 0, then elements 2, 3, ...
    let labels: Vec<Option<usize>> = std::iter::once(None)
        .chain(std::iter::once(Some(0)))
        .chain((2..q).map(Some))
        .take(k)
        .collect();
    let groups: Vec<Vec<u32>> = (0..k)
        .map(|i| (0..q).map(|z| (i * q + z) as u32).collect())
        .collect();
    let mut blocks = Vec::with_capacity(q * q);
    let mut classes: Vec<Vec<usize>> = vec![Vec::with_capacity(q); q];
    for x in 0..q {
        for y in 0..q {
            let block: Vec<u32> = labels
                .iter()
                .enumerate()
                .map(|(i, label)| {
                    let z = match label {
                        None => y,
                        Some(a) => field.add(x, field.mul(*a, y)),
                    };
                    (i * q + z) as u32
                })
                .collect();
            // class index c with x = c - y, i.e. c = x + y
            classes[field.add(x, y)].push(blocks.len());
            blocks.push(block);
        }
    }
    let design = Design::with_structure(k * q, groups, blocks, None, Some(classes))?;
    let gdd = verify_gdd(&design);
    let res = verify_resolution(&design)?;
    if !gdd.ok || !res.ok {
        return Err(Error::Internal(format!(
            "RGDD({k}, {q}) failed verification: {gdd} / {res}"
        )));
    }
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(32), Some((2, 5)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn gf5_is_integers_mod_5() {
        let f = FiniteField::new(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(f.add(a, b), (a + b) % 5);
                assert_eq!(f.mul(a, b), (a * b) % 5);
            }
        }
    }

    #[test]
    fn gf4_uses_least_irreducible() {
        // x^2 + x + 1 is the only monic irreducible quadratic over GF(2);
        // with elements encoded base 2, 2 = x and 3 = x + 1: x * x = x + 1
        let f = FiniteField::new(4).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1); // x(x+1) = x^2 + x = 1
        assert!(matches!(FiniteField::new(6), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn field_axioms_hold_for_all_table_sizes_used() {
        for q in [
            2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32,
        ] {
            let f = FiniteField::new(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
                if a != 0 {
                    let inv = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, inv), 1);
                }
            }
            assert_eq!(f.order_of(f.primitive_element()), q - 1);
        }
    }

    #[test]
    fn mols_counts_and_orthogonality() {
        let three = mols(3).unwrap();
        assert_eq!(three.squares.len(), 2);
        assert!(three.is_valid());
        let four = mols(4).unwrap();
        assert_eq!(four.squares.len(), 3);
        let two = mols(2).unwrap();
        assert_eq!(two.squares.len(), 1);
        assert!(mols(10).is_err());
    }

    #[test]
    fn td_4_3_is_a_3_4_gdd() {
        let d = transversal_design(4, 3).unwrap();
        assert_eq!(d.group_type().to_string(), "3^4");
        assert_eq!(d.blocks().len(), 9);
        assert!(matches!(
            transversal_design(4, 2),
            Err(Error::TooManyGroups { bound: 3, .. })
        ));
        let big = transversal_design(5, 5).unwrap();
        assert_eq!(big.blocks().len(), 25);
        assert_eq!(big.group_type().to_string(), "5^5");
    }

    #[test]
    fn rgdd_shapes() {
        let d = rgdd(4, 4).unwrap();
        assert_eq!(d.group_type().to_string(), "4^4");
        assert_eq!(d.blocks().len(), 16);
        assert_eq!(d.resolution().unwrap().len(), 4);
        assert!(matches!(
            rgdd(8, 7),
            Err(Error::TooManyGroups { bound: 7, .. })
        ));
        let seven = rgdd(7, 7).unwrap();
        assert_eq!(seven.blocks().len(), 49);
        assert_eq!(seven.resolution().unwrap().len(), 7);
    }
}

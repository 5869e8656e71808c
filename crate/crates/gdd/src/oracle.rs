//! Necessary-condition arithmetic and the known existence status of 4-GDDs
//! of types `g^u` and `g^u m^1`.
//!
//! The verdicts report the current knowledge state, not ground truth: an
//! `OpenException` means the type falls into one of the published undecided
//! families, and `NotExists` is reserved for the finitely many refuted types.

use serde::Serialize;

/// Verdict for a queried type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Exists,
    NotExists,
    /// The divisibility/size conditions already fail.
    NecessaryFail,
    /// Inside a published undecided family.
    OpenException,
}

/// Verdict plus which clause produced it.
#[derive(Debug, Clone, Serialize)]
pub struct ExistenceStatus {
    pub verdict: Verdict,
    pub basis: String,
}

impl ExistenceStatus {
    fn new(verdict: Verdict, basis: impl Into<String>) -> ExistenceStatus {
        ExistenceStatus {
            verdict,
            basis: basis.into(),
        }
    }
}

/// Necessary conditions for a 4-GDD of type g^u:
/// u >= 4, g(u-1) = 0 (mod 3) and g^2 u(u-1) = 0 (mod 12).
pub fn necessary_gu(g: usize, u: usize) -> bool {
    u >= 4 && (g * (u - 1)).is_multiple_of(3) && (g * g * u * (u - 1)).is_multiple_of(12)
}

/// Necessary conditions for a 4-GDD of type g^u m^1 with m > 0, m != g:
/// u >= 4, m <= g(u-1)/2, gu = 0 (mod 3), g(u-1) + m = 0 (mod 3) and
/// g^2 u(u-1) + 2gum = 0 (mod 12).
pub fn necessary_gum(g: usize, u: usize, m: usize) -> bool {
    u >= 4
        && 2 * m <= g * (u - 1)
        && (g * u).is_multiple_of(3)
        && (g * (u - 1) + m).is_multiple_of(3)
        && (g * g * u * (u - 1) + 2 * g * u * m).is_multiple_of(12)
}

/// Existence status of a 4-GDD of type g^u.
pub fn status_gu(g: usize, u: usize) -> ExistenceStatus {
    if !necessary_gu(g, u) {
        return ExistenceStatus::new(
            Verdict::NecessaryFail,
            "u >= 4, g(u-1) = 0 (mod 3), g^2 u(u-1) = 0 (mod 12)",
        );
    }
    if (g, u) == (2, 4) || (g, u) == (6, 4) {
        return ExistenceStatus::new(Verdict::NotExists, format!("refuted type {g}^4"));
    }
    ExistenceStatus::new(Verdict::Exists, "uniform-type spectrum is complete")
}

const Q_SET: [usize; 13] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43];

/// Membership in P = {n = 1 (mod 4), n >= 5} union Q.
fn in_p(n: usize) -> bool {
    (n >= 5 && n % 4 == 1) || Q_SET.contains(&n)
}

/// Is g divisible by some member of P? Only divisors of g matter, so the
/// infinite set is decidable.
fn divisible_by_p(g: usize) -> bool {
    (3..=g).any(|d| g.is_multiple_of(d) && in_p(d))
}

/// Strip factors of two: g = 2^t * odd.
fn odd_part(g: usize) -> usize {
    let mut n = g;
    while n.is_multiple_of(2) {
        n /= 2;
    }
    n
}

/// Does the two-parameter family settle this g? The resolved moduli are
/// g = 2^t q for q in {1, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31} (t >= 0) and
/// g = 2^t q^s for q in {19, 23, 25, 29, 31} (s >= 1, t >= 1).
fn resolved_g(g: usize) -> bool {
    let odd = odd_part(g);
    if [1, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31].contains(&odd) {
        return true;
    }
    if g.is_multiple_of(2) {
        for q in [19usize, 23, 25, 29, 31] {
            let mut power = q;
            while power <= odd {
                if power == odd {
                    return true;
                }
                power *= q;
            }
        }
    }
    false
}

/// Residual undecided triples inside the resolved families.
fn residual_exception(g: usize, u: usize, m: usize) -> bool {
    u == 9
        && match g {
            56 => [206, 209, 215, 218, 221].contains(&m),
            80 => [299, 311, 317].contains(&m),
            112 => [433, 439, 445].contains(&m),
            _ => false,
        }
}

/// Is (g, u, m) inside one of the published exception families? Returns the
/// family label when it is.
fn exception_family(g: usize, u: usize, m: usize) -> Option<&'static str> {
    // family A: g = 9 (mod 12), g >= 141, g/3 free of P-divisors, u = 8,
    // m' < m < (7g - 21)/2 with m' = (17g - 6)/5 for g = 3 (mod 30), else 3g
    if g % 12 == 9 && g >= 141 && !divisible_by_p(g / 3) && u == 8 {
        let m_low = if g % 30 == 3 { (17 * g - 6) / 5 } else { 3 * g };
        if m_low < m && 2 * m < 7 * g - 21 {
            return Some("undecided family: g = 9 (mod 12), u = 8");
        }
    }
    // family B: g = 1, 5 (mod 6), g >= 37
    if (g % 6 == 1 || g % 6 == 5) && g >= 37 {
        if u == 9 {
            return Some("undecided family: g = 1, 5 (mod 6), u = 9");
        }
        if [12, 24, 15, 27, 39, 51, 21, 33].contains(&u) && m > 0 && m < g {
            return Some("undecided family: g = 1, 5 (mod 6), m < g");
        }
        if u == 24 && !divisible_by_p(g) {
            let m_low = if g % 30 == 1 || g % 30 == 11 {
                (56 * g - 6) / 5
            } else {
                10 * g
            };
            if m_low < m && 2 * m < 23 * g - 3 {
                return Some("undecided family: g = 1, 5 (mod 6), u = 24, large m");
            }
        }
    }
    // family C: g = 2, 4 (mod 6), g >= 14, g != 16
    if (g % 6 == 2 || g % 6 == 4) && g >= 14 && g != 16 {
        if u == 6 || u == 9 {
            return Some("undecided family: g = 2, 4 (mod 6), u in {6, 9}");
        }
        if [12, 15, 18, 21, 27].contains(&u) && m > 0 && m < g {
            return Some("undecided family: g = 2, 4 (mod 6), m < g");
        }
    }
    None
}

/// Existence status of a 4-GDD of type g^u m^1.
pub fn status_gum(g: usize, u: usize, m: usize) -> ExistenceStatus {
    if m == 0 {
        return status_gu(g, u);
    }
    if m == g {
        return status_gu(g, u + 1);
    }
    if !necessary_gum(g, u, m) {
        let basis = if u >= 4 && 2 * m > g * (u - 1) {
            "m <= g(u-1)/2"
        } else {
            "u >= 4, gu = 0 (mod 3), g(u-1)+m = 0 (mod 3), g^2 u(u-1)+2gum = 0 (mod 12)"
        };
        return ExistenceStatus::new(Verdict::NecessaryFail, basis);
    }
    if (g, u, m) == (2, 6, 5) {
        return ExistenceStatus::new(Verdict::NotExists, "refuted type 2^6 5^1");
    }
    match exception_family(g, u, m) {
        None => ExistenceStatus::new(Verdict::Exists, "within the settled spectrum"),
        Some(family) => {
            if resolved_g(g) {
                if residual_exception(g, u, m) {
                    ExistenceStatus::new(
                        Verdict::OpenException,
                        format!("residual undecided triple {g}^{u} {m}^1"),
                    )
                } else {
                    ExistenceStatus::new(Verdict::Exists, "resolved two-parameter family")
                }
            } else {
                ExistenceStatus::new(Verdict::OpenException, family)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necessary_gu_examples() {
        assert!(necessary_gu(2, 4));
        assert!(necessary_gu(3, 5));
        assert!(!necessary_gu(2, 5)); // g(u-1) = 8, not divisible by 3
        assert!(necessary_gu(5, 4));
        assert!(necessary_gu(6, 4));
        assert!(!necessary_gu(4, 3)); // u too small
    }

    #[test]
    fn necessary_gum_examples() {
        assert!(necessary_gum(2, 6, 5));
        assert!(!necessary_gum(5, 6, 2)); // 870 = 6 (mod 12)
        assert!(necessary_gum(14, 9, 56)); // boundary m = g(u-1)/2
        assert!(!necessary_gum(14, 9, 57)); // just past the bound
    }

    #[test]
    fn simplified_congruence_equivalence() {
        // for g = 2, 4 (mod 6): necessary <=> u = 0 (mod 3) and m = g (mod 3)
        for g in (1..=62).filter(|g| g % 6 == 2 || g % 6 == 4) {
            for u in 4..=60 {
                for m in (1..=g * (u - 1) / 2).filter(|&m| m != g) {
                    let simplified = u % 3 == 0 && m % 3 == g % 3;
                    assert_eq!(necessary_gum(g, u, m), simplified, "g={g} u={u} m={m}");
                }
            }
        }
    }

    #[test]
    fn status_gu_cases() {
        assert_eq!(status_gu(2, 4).verdict, Verdict::NotExists);
        assert_eq!(status_gu(6, 4).verdict, Verdict::NotExists);
        assert_eq!(status_gu(2, 5).verdict, Verdict::NecessaryFail);
        assert_eq!(status_gu(3, 5).verdict, Verdict::Exists);
        assert_eq!(status_gu(3, 4).verdict, Verdict::Exists);
    }

    #[test]
    fn status_gum_paper_values() {
        assert_eq!(status_gum(2, 6, 5).verdict, Verdict::NotExists);
        assert_eq!(status_gum(56, 9, 206).verdict, Verdict::OpenException);
        assert_eq!(status_gum(14, 9, 11).verdict, Verdict::Exists);
        assert_eq!(status_gum(20, 9, 11).verdict, Verdict::Exists);
        assert_eq!(status_gum(44, 6, 8).verdict, Verdict::Exists);
        // m = 0 and m = g defer to the uniform spectrum
        assert_eq!(status_gum(2, 4, 0).verdict, Verdict::NotExists);
        assert_eq!(status_gum(2, 3, 2).verdict, Verdict::NotExists);
        assert_eq!(status_gum(6, 3, 6).verdict, Verdict::NotExists);
    }

    #[test]
    fn open_exception_counts() {
        for (g, expect) in [(56, 5), (80, 3), (112, 3)] {
            let count = (0..=4 * g)
                .filter(|&m| status_gum(g, 9, m).verdict == Verdict::OpenException)
                .count();
            assert_eq!(count, expect, "g={g}");
            // and none at other u
            for u in [6, 12, 15, 18, 21, 24, 27] {
                let stray = (0..=g * (u - 1) / 2)
                    .filter(|&m| status_gum(g, u, m).verdict == Verdict::OpenException)
                    .count();
                assert_eq!(stray, 0, "g={g} u={u}");
            }
        }
    }

    #[test]
    fn family_b_left_open_for_odd_g() {
        // 37 = 1 (mod 6) is not in a resolved family
        assert_eq!(status_gum(37, 9, 4).verdict, Verdict::OpenException);
        assert_eq!(status_gum(37, 12, 7).verdict, Verdict::OpenException);
        // but 25 = 5^2 via q = 25 with t = 0 is resolved
        assert_eq!(status_gum(25, 9, 4).verdict, Verdict::Exists);
    }

    #[test]
    fn p_divisibility() {
        assert!(in_p(5));
        assert!(in_p(9));
        assert!(in_p(3));
        assert!(!in_p(4));
        assert!(!in_p(2));
        assert!(divisible_by_p(15));
        assert!(!divisible_by_p(2));
        assert!(!divisible_by_p(16));
    }
}

//! The existence oracle: necessary-condition arithmetic for types g^u m^1
//! and the decision table over the known spectrum, including the residual
//! undecided triples.
//!
//! ```bash
//! cargo run -p gdd --example existence_status
//! ```

use gdd::oracle::{necessary_gum, status_gu, status_gum, Verdict};

fn mark(v: Verdict) -> &'static str {
    match v {
        Verdict::Exists => "+",
        Verdict::NotExists => "X",
        Verdict::NecessaryFail => ".",
        Verdict::OpenException => "?",
    }
}

fn main() {
    // the two refuted uniform types and a near miss
    for (g, u) in [(2, 4), (6, 4), (3, 5)] {
        let s = status_gu(g, u);
        println!("{g}^{u}: {:?} ({})", s.verdict, s.basis);
    }
    let s = status_gum(2, 6, 5);
    println!("2^6 5^1: {:?} ({})\n", s.verdict, s.basis);

    // decision table for g = 14: rows u, columns m
    let g = 14;
    println!("g = {g}: '+' exists, '.' fails necessary conditions, '?' undecided, 'X' refuted");
    print!("      m:");
    for m in 0..=26 {
        print!("{:>2}", m % 10);
    }
    println!();
    for u in [6, 9, 12, 15, 18, 21] {
        print!("  u = {u:>2}:");
        for m in 0..=26 {
            print!(" {}", mark(status_gum(g, u, m).verdict));
        }
        println!();
    }

    // the simplified congruence form for g = 2, 4 (mod 6)
    println!("\nnecessary_gum(14, 9, m) agrees with (u = 0 mod 3, m = g mod 3):");
    for m in 50..=58 {
        println!(
            "  m = {m}: necessary = {}, m mod 3 = {} (g mod 3 = {})",
            necessary_gum(14, 9, m),
            m % 3,
            14 % 3
        );
    }

    // the residual undecided triples
    println!("\nresidual undecided m at u = 9:");
    for g in [56, 80, 112] {
        let open: Vec<usize> = (0..=4 * g)
            .filter(|&m| status_gum(g, 9, m).verdict == Verdict::OpenException)
            .collect();
        println!("  g = {g}: {open:?}");
    }
}

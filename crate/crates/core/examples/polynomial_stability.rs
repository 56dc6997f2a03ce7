//! Routh table versus polynomial roots on a few characteristic polynomials.
//!
//!     cargo run --example polynomial_stability

use dobkit::poly_tf::{poly_roots, routh_verdict, Polynomial};

fn main() {
    let cases = [
        ("(s+1)(s+2)(s+3)", Polynomial::from_descending(&[1.0, 6.0, 11.0, 6.0])),
        ("s^3 + s^2 + 2s + 8", Polynomial::from_descending(&[1.0, 1.0, 2.0, 8.0])),
        ("s^4 + 2s^3 + 3s^2 + 2s + 1", Polynomial::from_descending(&[1.0, 2.0, 3.0, 2.0, 1.0])),
        ("s^3 + s", Polynomial::from_descending(&[1.0, 0.0, 1.0, 0.0])),
        ("s^5 + 2s^4 + 2s^3 + 4s^2 + 11s + 10", Polynomial::from_descending(&[1.0, 2.0, 2.0, 4.0, 11.0, 10.0])),
    ];
    for (name, p) in cases {
        let v = routh_verdict(&p).unwrap();
        let roots = poly_roots(&p).unwrap();
        let rhp = roots.iter().filter(|z| z.re > 1e-9).count();
        println!("{name}");
        println!("  routh: {:?}, {} RHP root(s), first column {:?}", v.class, v.rhp_count, v.first_column);
        let shown: Vec<String> = roots.iter().map(|z| format!("{:.4}{:+.4}j", z.re, z.im)).collect();
        println!("  roots: {} ({rhp} with Re > 0)", shown.join(", "));
    }
}

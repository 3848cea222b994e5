mod common;

use astro_float::BigFloat;
use hcp::classpoly::{
    expand_at_precision, hilbert_class_polynomial, hilbert_class_polynomial_at, hilbert_class_polynomial_with_report,
    precision_bound, IntPolynomial,
};
use hcp::highprec::{log2_abs_real, HighPrecComplex, RM};
use hcp::quadform::{enumerate_class_group, Discriminant};

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

#[test]
fn oracle_table_reproduced() {
    for (d, coeffs) in common::GOLDEN.iter().chain(common::EXTRA) {
        let h = hilbert_class_polynomial(disc(*d)).unwrap();
        assert_eq!(h.coeffs(), common::parse_coeffs(coeffs).as_slice(), "D={d}");
    }
}

#[test]
fn deterministic_at_fixed_precision() {
    for d in [-23i64, -71, -399, -1051] {
        let a = expand_at_precision(disc(d), 400).unwrap();
        let b = expand_at_precision(disc(d), 400).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert_eq!(x.re.cmp(&y.re), Some(0));
            assert_eq!(x.im.cmp(&y.im), Some(0));
        }
    }
}

/// Doubling the working precision never changes the rounded polynomial,
/// and the degree always equals the class number.
#[test]
fn precision_robustness_up_to_2000() {
    for d in common::discs_up_to(2000) {
        let table = enumerate_class_group(d);
        let (poly, report) = hilbert_class_polynomial_with_report(d).unwrap();
        assert_eq!(poly.degree(), table.h, "D={d}");
        let (doubled, _) = hilbert_class_polynomial_at(d, 2 * report.final_prec).unwrap();
        assert_eq!(poly, doubled, "D={d}");
    }
}

fn max_coeff_log2(coeffs: &[HighPrecComplex]) -> f64 {
    coeffs.iter().map(|c| log2_abs_real(&c.re)).fold(0.0, f64::max)
}

#[test]
fn conjugate_pairs_and_real_coefficients() {
    for d in common::discs_up_to(2000).into_iter().step_by(17).chain([disc(-1999), disc(-1996)]) {
        let table = enumerate_class_group(d);
        let prec = precision_bound(d, &table);
        let exp = expand_at_precision(d, prec).unwrap();
        for (i, f) in table.forms.iter().enumerate() {
            if f.is_ambiguous() {
                continue;
            }
            let j = table.forms.iter().position(|g| *g == f.opposite()).expect("inverse is reduced");
            let diff = &exp.roots[i] - &exp.roots[j].conj();
            let scale = exp.roots[i].log2_abs().max(0.0);
            assert!(diff.log2_abs() < scale - prec as f64 + 16.0, "D={d} form {f}");
        }
        // imaginary parts vanish relative to the coefficient height
        let height = max_coeff_log2(&exp.coeffs);
        for c in &exp.coeffs {
            assert!(log2_abs_real(&c.im) < height - prec as f64 / 2.0, "D={d}");
        }
    }
}

/// The absolute bound `|Im c_k| < 2^(-prec/2)` needs the precision to cover
/// the coefficient height as well; the bare bound falls short at D = -55.
#[test]
fn absolute_imaginary_bound_with_height_margin() {
    for d in common::discs_up_to(200) {
        let table = enumerate_class_group(d);
        let base = precision_bound(d, &table);
        let height = max_coeff_log2(&expand_at_precision(d, base).unwrap().coeffs).ceil() as usize;
        let prec = base + height;
        let exp = expand_at_precision(d, prec).unwrap();
        for c in &exp.coeffs {
            assert!(log2_abs_real(&c.im) < -(prec as f64) / 2.0, "D={d}");
        }
    }
}

/// `|H(j(tau_f))|` is tiny compared with the size of the terms `|c_k j^k|`.
#[test]
fn computed_roots_are_roots() {
    for d in [-15i64, -23, -71, -260, -399, -719, -1555] {
        let d = disc(d);
        let (poly, report) = hilbert_class_polynomial_with_report(d).unwrap();
        let prec = report.final_prec;
        let exp = expand_at_precision(d, prec).unwrap();
        for root in &exp.roots {
            let (value, terms) = eval_with_term_bound(&poly, root);
            assert!(value < terms.max(0.0) - prec as f64 / 4.0, "D={d}: {value} vs {terms}");
        }
    }
}

fn eval_with_term_bound(poly: &IntPolynomial, z: &HighPrecComplex) -> (f64, f64) {
    let prec = z.prec;
    let mut acc = HighPrecComplex::zero(prec);
    let mut largest = f64::NEG_INFINITY;
    let log_z = z.log2_abs();
    for (k, c) in poly.coeffs().iter().enumerate().rev() {
        let cf = BigFloat::parse(&c.to_string(), astro_float::Radix::Dec, prec, RM, &mut astro_float::Consts::new().unwrap());
        acc = &(&acc * z) + &HighPrecComplex::from_real(cf, prec);
        if c.bits() > 0 {
            largest = largest.max(c.bits() as f64 + k as f64 * log_z);
        }
    }
    (acc.log2_abs(), largest)
}

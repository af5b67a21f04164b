use std::collections::BTreeSet;

use num_bigint::BigInt;
use permcirc_core::gf2::{count_gap, label_circuit, substitute, BoundaryAssignment, GapLimits, Gf2Poly, Labeling};
use permcirc_core::permanent::{norm_report, per_glynn_exact, per_ryser};
use permcirc_core::{amplitude, encode, parse_circuit, Circuit, Mode};

const FOUR_LINE: &str = include_str!("../../../circuits/four_line.circ");

fn four_line() -> Circuit {
    parse_circuit(FOUR_LINE).unwrap()
}

fn boundary(i: &str, o: &str) -> BoundaryAssignment {
    BoundaryAssignment::new(i.parse().unwrap(), o.parse().unwrap())
}

fn monomial_set(f: &Gf2Poly, l: &Labeling) -> BTreeSet<Vec<String>> {
    f.monomials()
        .map(|m| {
            let mut names: Vec<String> = m.vars().iter().map(|&v| l.label(v)).collect();
            names.sort();
            names
        })
        .collect()
}

fn expected(text: &str) -> BTreeSet<Vec<String>> {
    text.split_whitespace()
        .map(|m| {
            let mut names: Vec<String> = m
                .as_bytes()
                .chunks(2)
                .map(|c| String::from_utf8(c.to_vec()).unwrap())
                .collect();
            names.sort();
            names
        })
        .collect()
}

#[test]
fn four_line_example_is_already_normal() {
    let c = four_line();
    assert_eq!(c.qubits(), 4);
    assert_eq!(c.hadamard_count(), 13);
    assert_eq!(permcirc_core::normalize(&c).0, c);
}

#[test]
fn four_line_example_raw_polynomial() {
    let l = label_circuit(&four_line()).unwrap();
    assert_eq!(l.h, 13);
    assert_eq!(l.var_count(), 17);
    assert!(!l.f_raw.constant());
    let want = expected("a1a2 a2a3 a3a4 b1b2 b2b3 b3b4 d2c4b4 b4b5 c1c2 c2c3 b2a2c3 c3c4 c4c5 d1d2 d2d3");
    assert_eq!(want.len(), 15);
    assert_eq!(monomial_set(&l.f_raw, &l), want);
}

#[test]
fn four_line_example_reduced_polynomial() {
    let l = label_circuit(&four_line()).unwrap();
    let r = substitute(&l, &boundary("0000", "0011")).unwrap();
    assert!(!r.conflict);
    assert!(!r.poly.constant());
    assert_eq!(
        monomial_set(&r.poly, &l),
        expected("a2a3 b2b3 b3b4 d2c4b4 c2c3 b2a2c3 c3c4 c4 d2")
    );
    assert_eq!(r.free_vars.len(), 9);
    assert_eq!(r.free_vars.len(), l.h as usize - l.qubits);
}

#[test]
fn four_line_example_all_routes_agree() {
    let c = four_line();
    let l = label_circuit(&c).unwrap();
    for (i, o) in [("0000", "0011"), ("0000", "0000"), ("1010", "0110"), ("1111", "1111")] {
        let b = boundary(i, o);
        let sv = amplitude(&c, &b.in_bits, &b.out_bits).unwrap();
        assert_eq!(sv.h, 13);
        let r = substitute(&l, &b).unwrap();
        let gap = BigInt::from(count_gap(&r.poly, &r.free_vars, GapLimits::default()).unwrap());
        assert_eq!(sv.k, gap, "{i} -> {o}");
        let e = encode(&l, &b, Mode::Substitution).unwrap();
        assert!(e.dim() <= e.size_bound());
        assert_eq!(per_ryser(&e.matrix).unwrap(), gap, "{i} -> {o}");
        assert_eq!(per_glynn_exact(&e.matrix).unwrap(), gap, "{i} -> {o}");
    }
}

#[test]
fn four_line_example_dimensions() {
    let c = four_line();
    let l = label_circuit(&c).unwrap();
    let b = boundary("0000", "0011");
    let g = encode(&l, &b, Mode::GraphFix).unwrap();
    let s = encode(&l, &b, Mode::Substitution).unwrap();
    // 13 quadratic and 2 cubic clauses, then one forcing vertex per zero boundary bit
    assert_eq!(g.clause_count, 15);
    assert_eq!(g.forcing_vertices, 6);
    assert_eq!(g.dim(), 51);
    // 5 quadratic, 2 cubic, 2 unary
    assert_eq!(s.dim(), 23);
    let report = norm_report(&g.matrix, g.h, 1e-10).unwrap();
    assert_eq!(report.dimension, g.dim());
    assert!(report.norm.is_finite() && report.norm > 0.0);
}

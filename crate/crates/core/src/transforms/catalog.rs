use super::{Denominator as D, MapArgs, TransformEntry, TransformId, Variant};
use crate::field::{Field, Jet};
use crate::param::Parameter;
use crate::C64;

fn k(x: f64) -> Jet {
    Jet::real(x)
}

fn param(s: &str) -> Parameter {
    s.parse().expect("catalog parameter")
}

// ---- defining polynomials (non-leading coefficients, descending) ----

fn poly_t1(q: Jet, r: Jet) -> Vec<Jet> {
    vec![k(0.0), q.scale(-0.75), r.scale(0.25)]
}

fn poly_t2(q: Jet, r: Jet) -> Vec<Jet> {
    vec![
        k(0.0),
        q.scale(-2.0 / 3.0),
        r.scale(8.0 / 27.0),
        (q * q).scale(-1.0 / 27.0),
    ]
}

fn poly_t4(q: Jet, r: Jet) -> Vec<Jet> {
    vec![k(0.0), q.scale(3.0 / 32.0), r.scale(1.0 / 32.0)]
}

fn poly_t5(q: Jet, r: Jet) -> Vec<Jet> {
    vec![-(r / q), q.scale(-1.0 / 32.0)]
}

fn poly_t6(q: Jet, r: Jet) -> Vec<Jet> {
    vec![
        k(0.0),
        q.scale(1.0 / 12.0),
        r.scale(1.0 / 27.0),
        (q * q).scale(-1.0 / 1728.0),
    ]
}

fn poly_t8(q: Jet, r: Jet) -> Vec<Jet> {
    let q2r = q * q / r;
    vec![
        q2r.scale(1.0 / 80.0),
        q.scale(1.0 / 15.0) + (q2r * q2r).scale(1.0 / 19200.0),
        r.scale(4.0 / 135.0) - (q * q2r).scale(1.0 / 10800.0)
            + q2r.powi(3).scale(1.0 / 13_824_000.0),
    ]
}

fn poly_t10(q: Jet, r: Jet) -> Vec<Jet> {
    vec![
        k(0.0),
        q.scale(2.0 / 9.0),
        r.scale(8.0 / 81.0),
        (q * q).scale(-1.0 / 243.0),
    ]
}

fn poly_t13(q: Jet, r: Jet) -> Vec<Jet> {
    vec![k(0.0), q.scale(0.25), r.scale(-1.0 / 12.0)]
}

fn poly_t15(q: Jet, r: Jet) -> Vec<Jet> {
    vec![k(0.0), q.scale(0.6), r.scale(-0.2)]
}

fn poly_t16(q: Jet, r: Jet) -> Vec<Jet> {
    vec![r / q, q.scale(-0.2)]
}

fn poly_t17(q: Jet, r: Jet) -> Vec<Jet> {
    vec![
        k(0.0),
        q.scale(-1.2),
        r.scale(-8.0 / 15.0),
        (q * q).scale(-3.0 / 25.0),
    ]
}

fn poly_t19(q: Jet, r: Jet) -> Vec<Jet> {
    vec![r / q, q.scale(9.0 / 32.0)]
}

// ---- auxiliary relations ----

fn aux_t4(m: Jet, q: Jet, _r: Jet) -> Jet {
    m.scale(-4.0 / 3.0) - q / m.scale(24.0)
}

fn aux_t10(m: Jet, q: Jet, _r: Jet) -> Jet {
    m.scale(-9.0 / 8.0) - q / m.scale(24.0)
}

fn aux_t15(m: Jet, q: Jet, _r: Jet) -> Jet {
    m.scale(1.0 / 3.0) + q.scale(4.0 / 15.0) / m
}

fn aux_t17(m: Jet, q: Jet, _r: Jet) -> Jet {
    m.scale(1.0 / 8.0) - q.scale(9.0 / 40.0) / m
}

fn aux_poly_t4(q: C64, r: C64) -> Vec<C64> {
    let z = C64::new(0.0, 0.0);
    vec![
        -q * q / (8.0 * r),
        z,
        -q.powi(3) / (108.0 * r) - 2.0 * r / 27.0,
    ]
}

fn aux_poly_t10(q: C64, r: C64) -> Vec<C64> {
    let z = C64::new(0.0, 0.0);
    vec![r / q, z, z, -3.0 * q * q / 64.0 - 9.0 * r * r / (64.0 * q)]
}

fn aux_poly_t15(q: C64, r: C64) -> Vec<C64> {
    vec![
        -0.8 * q * q / r,
        -q / 5.0,
        -4.0 / 675.0 * q.powi(3) / r - r / 135.0,
    ]
}

fn aux_poly_t17(q: C64, r: C64) -> Vec<C64> {
    vec![
        -r / q,
        0.6 * q,
        -r / 15.0,
        r * r / (960.0 * q) - 3.0 / 1600.0 * q * q,
    ]
}

// ---- triple maps ----

fn map_t1(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, n) = (a.p, a.q, a.r, a.root);
    [
        p - n,
        -q + (n * n).scale(5.0),
        r.scale(2.75) - (q * n).scale(5.25),
    ]
}

fn map_t2(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, n) = (a.p, a.q, a.r, a.root);
    [
        p - n.scale(2.0),
        -q + (n * n).scale(10.0),
        -r - n.powi(3).scale(35.0) + (q * n).scale(7.0),
    ]
}

fn t3_tail(q: Jet, r: Jet) -> [Jet; 2] {
    let q2r = q * q / r;
    [
        -q - (q2r * q2r).scale(1.0 / 8.0),
        -r - (q * q2r).scale(0.25) - q2r.powi(3).scale(1.0 / 64.0),
    ]
}

fn map_t3_statement(a: &MapArgs) -> [Jet; 3] {
    let [q1, r1] = t3_tail(a.q, a.r);
    [a.p + (a.q * a.q / a.r).scale(0.25), q1, r1]
}

fn map_t3_proof(a: &MapArgs) -> [Jet; 3] {
    let [q1, r1] = t3_tail(a.q, a.r);
    [a.p - (a.q * a.q / a.r).scale(0.25), q1, r1]
}

fn map_t4(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, m, n) = (a.p, a.q, a.r, a.root, a.aux);
    [
        p - n.scale(2.0),
        q.scale(5.0 / 3.0) + (m * m).scale(64.0 / 3.0) - (n * n).scale(8.0),
        r.scale(-7.0 / 27.0)
            - (q * m).scale(4.0 / 3.0)
            - (q * n).scale(2.0)
            - q * q / r * n * n
            - (q.powi(3) / r).scale(2.0 / 27.0),
    ]
}

fn map_t5(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, x) = (a.p, a.q, a.r, a.root);
    [
        p + x,
        q.scale(0.75) - (x * x).scale(3.0),
        r.scale(0.75) + (q * x).scale(9.0 / 8.0) + x.powi(3).scale(3.0),
    ]
}

fn map_t6(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, m) = (a.p, a.q, a.r, a.root);
    [
        p + m.scale(2.0),
        q.scale(1.25) + (m * m).scale(10.0),
        r.scale(1.25) + (q * m).scale(25.0 / 8.0) + m.powi(3).scale(35.0),
    ]
}

fn map_t7(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r) = (a.p, a.q, a.r);
    let q2r = q * q / r;
    [
        p - q2r.scale(1.0 / 40.0),
        q.scale(0.8) - (q2r * q2r).scale(1.0 / 800.0),
        r.scale(0.8) - (q * q2r).scale(1.0 / 40.0) - q2r.powi(3).scale(1.0 / 64000.0),
    ]
}

fn map_t8(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, m) = (a.p, a.q, a.r, a.root);
    let q2r = q * q / r;
    [
        p - q2r.scale(1.0 / 40.0) + m.scale(2.0),
        q - (q2r * q2r).scale(1.0 / 640.0) + (m * m).scale(10.0),
        r - (q * q2r).scale(1.0 / 32.0) - q2r.powi(3).scale(1.0 / 51200.0) + (q * m).scale(2.5)
            - (q2r * q2r * m).scale(25.0 / 6400.0)
            + m.powi(3).scale(35.0),
    ]
}

fn map_t9(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r) = (a.p, a.q, a.r);
    let rq = r / q;
    [p + rq, -q - (rq * rq).scale(3.0), r + rq.powi(3).scale(3.0)]
}

fn map_t10(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, m, n) = (a.p, a.q, a.r, a.root, a.aux);
    [
        p - n,
        q.scale(1.25) + (m * m).scale(27.0 / 4.0) - (n * n).scale(3.0),
        r.scale(17.0 / 8.0) - n.powi(3).scale(3.0)
            + (q * m).scale(63.0 / 16.0)
            + m.powi(3).scale(243.0 / 16.0),
    ]
}

fn map_t11(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, m) = (a.p, a.q, a.r, a.root);
    [
        p + m,
        q.scale(4.0 / 3.0) + (m * m).scale(4.0),
        r.scale(4.0 / 3.0) + (q * m).scale(2.0) + m.powi(3).scale(10.0),
    ]
}

fn map_t12(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r) = (a.p, a.q, a.r);
    let q2r = q * q / r;
    [
        p - q2r.scale(1.0 / 3.0),
        q.scale(-5.0 / 3.0) - (q2r * q2r).scale(5.0 / 9.0),
        (q * q2r).scale(-5.0 / 3.0) - r.scale(5.0 / 3.0) - q2r.powi(3).scale(10.0 / 27.0),
    ]
}

fn map_t13(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, w) = (a.p, a.q, a.r, a.root);
    [
        p - w,
        q.scale(5.0 / 3.0) + (w * w).scale(5.0),
        r.scale(5.0 / 12.0) + (q * w).scale(5.0 / 12.0),
    ]
}

fn map_t14(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r) = (a.p, a.q, a.r);
    let rq = r / q;
    [
        p + rq,
        q.scale(0.6) - (rq * rq).scale(3.0),
        r.scale(1.8) + rq.powi(3).scale(3.0),
    ]
}

fn map_t15(a: &MapArgs) -> [Jet; 3] {
    let (p, q, r, n, l) = (a.p, a.q, a.r, a.root, a.aux);
    [
        p - l,
        q.scale(-5.0 / 3.0) - (l * l).scale(5.0) - (n * n).scale(10.0 / 3.0),
        (q * n).scale(-5.0 / 3.0)
            - r.scale(20.0 / 27.0)
            - (q * l).scale(7.0)
            - (q * q / r * l * l).scale(8.0)
            - (q.powi(3) / r).scale(8.0 / 135.0),
    ]
}

fn t16_tail(q: Jet, r: Jet, x: Jet) -> [Jet; 2] {
    [
        q.scale(-0.6) - (x * x).scale(3.0),
        r.scale(-0.6) - (q * x).scale(1.8) - x.powi(3).scale(3.0),
    ]
}

fn map_t16_statement(a: &MapArgs) -> [Jet; 3] {
    let [q1, r1] = t16_tail(a.q, a.r, a.root);
    [a.p + a.root, q1, r1]
}

fn map_t16_derived(a: &MapArgs) -> [Jet; 3] {
    let [q1, r1] = t16_tail(a.q, a.r, a.root);
    [a.p - a.root, q1, r1]
}

fn t17_map(a: &MapArgs, mu2: f64) -> [Jet; 3] {
    let (p, q, r, m, l) = (a.p, a.q, a.r, a.root, a.aux);
    [
        p - l,
        q.scale(-1.25) + (m * m).scale(mu2) + (l * l).scale(5.0),
        m.powi(3).scale(5.0 / 9.0) - l.powi(3).scale(15.0)
            + (q * l).scale(349.0 / 54.0)
            + (q * m).scale(181.0 / 216.0)
            - r.scale(181.0 / 216.0),
    ]
}

fn map_t17_statement(a: &MapArgs) -> [Jet; 3] {
    t17_map(a, 5.0 / 36.0)
}

fn map_t17_derived(a: &MapArgs) -> [Jet; 3] {
    t17_map(a, 1.25)
}

fn t18_tail(a: &MapArgs) -> [Jet; 2] {
    let (q, r, m, l) = (a.q, a.r, a.root, a.aux);
    [
        q.scale(-0.8) + (m * m).scale(4.0),
        r.scale(4.0 / 15.0) + m.powi(3).scale(8.0)
            - (q * m).scale(28.0 / 15.0)
            - (q * l).scale(16.0 / 15.0),
    ]
}

fn map_t18_statement(a: &MapArgs) -> [Jet; 3] {
    let [q1, r1] = t18_tail(a);
    [a.p - a.root, q1, r1]
}

fn map_t18_proof(a: &MapArgs) -> [Jet; 3] {
    let [q1, r1] = t18_tail(a);
    [a.p + a.root, q1, r1]
}

fn t19_map(a: &MapArgs, qc: f64) -> [Jet; 3] {
    let (p, q, r, x) = (a.p, a.q, a.r, a.root);
    [
        p + x,
        q.scale(qc) + (x * x).scale(5.0),
        r.scale(-1.25) - (q * x).scale(55.0 / 8.0) + x.powi(3).scale(15.0),
    ]
}

fn map_t19_statement(a: &MapArgs) -> [Jet; 3] {
    t19_map(a, -5.0 / 32.0)
}

fn map_t19_derived(a: &MapArgs) -> [Jet; 3] {
    t19_map(a, -1.25)
}

/// The three roots of the second k = 2/3 automorphism in closed form:
/// `-Q^2/(240R) + ω^j 10^(1/3)/30 Q/R^(1/3) - ω^(2j) 10^(2/3)/15 R^(1/3)`,
/// `ω = e^(2πi/3)`, principal cube root of `R`.
pub fn t8_closed_form_roots(q: C64, r: C64) -> [C64; 3] {
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    let cr = r.powf(1.0 / 3.0);
    let a = 10f64.powf(1.0 / 3.0) / 30.0 * q / cr;
    let b = 10f64.powf(2.0 / 3.0) / 15.0 * cr;
    let base = -q * q / (240.0 * r);
    let mut out = [C64::new(0.0, 0.0); 3];
    let mut w = C64::new(1.0, 0.0);
    for slot in &mut out {
        *slot = base + w * a - w * w * b;
        w *= omega;
    }
    out
}

fn v(name: &'static str, map: super::MapFn) -> Variant {
    Variant { name, map }
}

struct Spec {
    n: u8,
    source: &'static str,
    target: &'static str,
    root_symbol: Option<&'static str>,
    poly: Option<super::PolyFn>,
    aux: Option<(&'static str, super::AuxFn, super::AuxPolyFn)>,
    variants: Vec<Variant>,
    denominators: &'static [D],
    summary: &'static str,
}

pub(super) fn build() -> Vec<TransformEntry> {
    let specs = vec![
        Spec {
            n: 1,
            source: "inf",
            target: "inf",
            root_symbol: Some("nu"),
            poly: Some(poly_t1),
            aux: None,
            variants: vec![v("statement", map_t1)],
            denominators: &[],
            summary: "nu^3 - 3/4 Q nu + R/4 = 0; (P - nu, -Q + 5nu^2, 11/4 R - 21/4 Q nu)",
        },
        Spec {
            n: 2,
            source: "inf",
            target: "inf",
            root_symbol: Some("nu"),
            poly: Some(poly_t2),
            aux: None,
            variants: vec![v("statement", map_t2)],
            denominators: &[],
            summary: "nu^4 - 2/3 Q nu^2 + 8/27 R nu - Q^2/27 = 0; (P - 2nu, -Q + 10nu^2, -R - 35nu^3 + 7Q nu)",
        },
        Spec {
            n: 3,
            source: "2",
            target: "2",
            root_symbol: None,
            poly: None,
            aux: None,
            variants: vec![v("statement", map_t3_statement), v("proof", map_t3_proof)],
            denominators: &[D::R],
            summary: "(P ± Q^2/(4R), -Q - Q^4/(8R^2), -R - Q^3/(4R) - Q^6/(64R^3))",
        },
        Spec {
            n: 4,
            source: "2",
            target: "2",
            root_symbol: Some("mu"),
            poly: Some(poly_t4),
            aux: Some(("nu", aux_t4, aux_poly_t4)),
            variants: vec![v("statement", map_t4)],
            denominators: &[D::R, D::Root],
            summary: "mu^3 + 3/32 Q mu + R/32 = 0, nu = -4/3 mu - Q/(24mu)",
        },
        Spec {
            n: 5,
            source: "2",
            target: "3",
            root_symbol: Some("chi"),
            poly: Some(poly_t5),
            aux: None,
            variants: vec![v("statement", map_t5)],
            denominators: &[D::Q],
            summary: "chi^2 - (R/Q) chi - Q/32 = 0; (P + chi, 3/4 Q - 3chi^2, 3/4 R + 9/8 Q chi + 3chi^3)",
        },
        Spec {
            n: 6,
            source: "2",
            target: "2/3",
            root_symbol: Some("mu"),
            poly: Some(poly_t6),
            aux: None,
            variants: vec![v("statement", map_t6)],
            denominators: &[],
            summary: "mu^4 + Q mu^2/12 + R mu/27 - Q^2/1728 = 0; (P + 2mu, 5/4 Q + 10mu^2, 5/4 R + 25/8 Q mu + 35mu^3)",
        },
        Spec {
            n: 7,
            source: "2/3",
            target: "2",
            root_symbol: None,
            poly: None,
            aux: None,
            variants: vec![v("statement", map_t7)],
            denominators: &[D::R],
            summary: "(P - Q^2/(40R), 4/5 Q - Q^4/(800R^2), 4/5 R - Q^3/(40R) - Q^6/(64000R^3))",
        },
        Spec {
            n: 8,
            source: "2/3",
            target: "2/3",
            root_symbol: Some("mu"),
            poly: Some(poly_t8),
            aux: None,
            variants: vec![v("statement", map_t8)],
            denominators: &[D::R],
            summary: "mu from the closed-form cubic; (P - Q^2/(40R) + 2mu, Q - Q^4/(640R^2) + 10mu^2, ...)",
        },
        Spec {
            n: 9,
            source: "3",
            target: "3",
            root_symbol: None,
            poly: None,
            aux: None,
            variants: vec![v("statement", map_t9)],
            denominators: &[D::Q],
            summary: "(P + R/Q, -Q - 3R^2/Q^2, R + 3R^3/Q^3)",
        },
        Spec {
            n: 10,
            source: "3",
            target: "3",
            root_symbol: Some("mu"),
            poly: Some(poly_t10),
            aux: Some(("nu", aux_t10, aux_poly_t10)),
            variants: vec![v("statement", map_t10)],
            denominators: &[D::Root],
            summary: "mu^4 + 2/9 Q mu^2 + 8/81 R mu - Q^2/243 = 0, nu = -9/8 mu - Q/(24mu)",
        },
        Spec {
            n: 11,
            source: "3",
            target: "2",
            root_symbol: Some("mu"),
            poly: Some(poly_t10),
            aux: None,
            variants: vec![v("statement", map_t11)],
            denominators: &[],
            summary: "mu as for T10; (P + mu, 4/3 Q + 4mu^2, 4/3 R + 2Q mu + 10mu^3)",
        },
        Spec {
            n: 12,
            source: "3",
            target: "4",
            root_symbol: None,
            poly: None,
            aux: None,
            variants: vec![v("statement", map_t12)],
            denominators: &[D::R],
            summary: "(P - Q^2/(3R), -5/3 Q - 5/9 Q^4/R^2, -5/3 Q^3/R - 5/3 R - 10/27 Q^6/R^3)",
        },
        Spec {
            n: 13,
            source: "3",
            target: "3/2",
            root_symbol: Some("w"),
            poly: Some(poly_t13),
            aux: None,
            variants: vec![v("statement", map_t13)],
            denominators: &[],
            summary: "w^3 + Q w/4 - R/12 = 0; (P - w, 5/3 Q + 5w^2, 5/12 R + 5/12 Q w)",
        },
        Spec {
            n: 14,
            source: "3/2",
            target: "3",
            root_symbol: None,
            poly: None,
            aux: None,
            variants: vec![v("statement", map_t14)],
            denominators: &[D::Q],
            summary: "(P + R/Q, 3/5 Q - 3R^2/Q^2, 9/5 R + 3R^3/Q^3)",
        },
        Spec {
            n: 15,
            source: "4",
            target: "4",
            root_symbol: Some("nu"),
            poly: Some(poly_t15),
            aux: Some(("lambda", aux_t15, aux_poly_t15)),
            variants: vec![v("statement", map_t15)],
            denominators: &[D::R, D::Root],
            summary: "nu^3 + 3/5 Q nu - R/5 = 0, lambda = nu/3 + 4/15 Q/nu",
        },
        Spec {
            n: 16,
            source: "4",
            target: "3",
            root_symbol: Some("chi"),
            poly: Some(poly_t16),
            aux: None,
            variants: vec![v("statement", map_t16_statement), v("derived", map_t16_derived)],
            denominators: &[D::Q],
            summary: "chi^2 + (R/Q) chi - Q/5 = 0; (P ∓ chi, -3/5 Q - 3chi^2, -3/5 R - 9/5 Q chi - 3chi^3)",
        },
        Spec {
            n: 17,
            source: "9",
            target: "9",
            root_symbol: Some("mu"),
            poly: Some(poly_t17),
            aux: Some(("lambda", aux_t17, aux_poly_t17)),
            variants: vec![v("statement", map_t17_statement), v("derived", map_t17_derived)],
            denominators: &[D::Root],
            summary: "mu^4 - 6/5 Q mu^2 - 8/15 R mu - 3/25 Q^2 = 0, lambda = mu/8 - 9/40 Q/mu",
        },
        Spec {
            n: 18,
            source: "9",
            target: "18",
            root_symbol: Some("mu"),
            poly: Some(poly_t17),
            aux: Some(("lambda", aux_t17, aux_poly_t17)),
            variants: vec![v("statement", map_t18_statement), v("proof", map_t18_proof)],
            denominators: &[D::Root],
            summary: "mu, lambda as for T17; (P ∓ mu, -4/5 Q + 4mu^2, 4/15 R + 8mu^3 - 28/15 Q mu - 16/15 Q lambda)",
        },
        Spec {
            n: 19,
            source: "18",
            target: "9",
            root_symbol: Some("chi"),
            poly: Some(poly_t19),
            aux: None,
            variants: vec![v("statement", map_t19_statement), v("derived", map_t19_derived)],
            denominators: &[D::Q],
            summary: "chi^2 + (R/Q) chi + 9/32 Q = 0; (P + chi, c Q + 5chi^2, -5/4 R - 55/8 Q chi + 15chi^3)",
        },
    ];
    specs
        .into_iter()
        .map(|s| TransformEntry {
            id: TransformId(s.n),
            source: param(s.source),
            target: param(s.target),
            root_symbol: s.root_symbol,
            poly: s.poly,
            aux: s.aux.map(|a| a.1),
            aux_symbol: s.aux.map(|a| a.0),
            aux_poly: s.aux.map(|a| a.2),
            variants: s.variants,
            denominators: s.denominators,
            summary: s.summary,
        })
        .collect()
}

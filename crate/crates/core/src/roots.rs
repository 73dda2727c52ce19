//! Closed-form roots of monic quadratics, cubics and quartics over the
//! complex numbers, plus nearest-root branch tracking.
//!
//! The cubic uses Cardano's formula on the depressed cubic, the quartic
//! Ferrari's reduction through a resolvent cubic. Every root then gets up to
//! two Newton steps on the original polynomial; a step is kept only if it
//! lowers `|F|`.

use crate::{Error, Result, C64};

/// Monic polynomial `x^n + c[0] x^(n-1) + ... + c[n-1]`, `n` in `2..=4`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    coeffs: Vec<C64>,
}

impl PolySpec {
    /// `coeffs` run from the `x^(n-1)` coefficient down to the constant.
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if !(2..=4).contains(&coeffs.len()) {
            return Err(Error::InvalidInput(format!(
                "degree {} not supported (2..=4)",
                coeffs.len()
            )));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(PolySpec { coeffs })
    }

    pub fn real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Euclidean norm of the non-leading coefficients.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &c| acc * x + c)
    }

    /// `(F(x), F'(x))` by Horner.
    pub fn eval_with_derivative(&self, x: C64) -> (C64, C64) {
        let mut f = C64::new(1.0, 0.0);
        let mut df = C64::new(0.0, 0.0);
        for &c in &self.coeffs {
            df = df * x + f;
            f = f * x + c;
        }
        (f, df)
    }

    /// Scale for `|F(x)|`: the sum of the moduli of the terms.
    pub fn eval_scale(&self, x: C64) -> f64 {
        let ax = x.norm();
        self.coeffs.iter().fold(1.0, |acc, c| acc * ax + c.norm())
    }

    /// All roots with multiplicity, sorted by (re, im).
    pub fn roots(&self) -> Vec<C64> {
        let raw = match self.degree() {
            2 => solve_quadratic(self.coeffs[0], self.coeffs[1]).to_vec(),
            3 => closed_cubic(self.coeffs[0], self.coeffs[1], self.coeffs[2]).to_vec(),
            _ => closed_quartic(&self.coeffs).to_vec(),
        };
        let mut roots: Vec<C64> = raw.into_iter().map(|r| polish(self, r)).collect();
        sort_roots(&mut roots);
        roots
    }
}

fn sort_roots(roots: &mut [C64]) {
    for r in roots.iter_mut() {
        // fold -0.0 into 0.0 so signed zeros do not reorder ties
        *r += C64::new(0.0, 0.0);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn polish(p: &PolySpec, mut x: C64) -> C64 {
    for _ in 0..2 {
        let (f, df) = p.eval_with_derivative(x);
        if f.norm() == 0.0 || df.norm() == 0.0 {
            break;
        }
        let cand = x - f / df;
        if !(cand.re.is_finite() && cand.im.is_finite()) || p.eval(cand).norm() >= f.norm() {
            break;
        }
        x = cand;
    }
    x
}

/// Roots of `x^2 + b x + c`, avoiding cancellation.
pub fn solve_quadratic(b: C64, c: C64) -> [C64; 2] {
    let disc = (b * b - 4.0 * c).sqrt();
    // pick the sign that makes |b + s| large
    let s = if (b.conj() * disc).re >= 0.0 {
        disc
    } else {
        -disc
    };
    let q = -0.5 * (b + s);
    if q.norm() == 0.0 {
        return [C64::new(0.0, 0.0); 2];
    }
    [q, c / q]
}

fn closed_cubic(a: C64, b: C64, c: C64) -> [C64; 3] {
    let third = 1.0 / 3.0;
    let shift = a * third;
    let p = b - a * a * third;
    let q = 2.0 * a * a * a / 27.0 - a * b * third + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let half_q = -q / 2.0;
    let u3 = if (half_q + disc).norm() >= (half_q - disc).norm() {
        half_q + disc
    } else {
        half_q - disc
    };
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    if u3.norm() == 0.0 {
        // p = q = 0: triple root of the depressed cubic
        return [-shift; 3];
    }
    let u = u3.powf(third);
    let mut out = [C64::new(0.0, 0.0); 3];
    let mut w = C64::new(1.0, 0.0);
    for root in &mut out {
        let uk = u * w;
        *root = uk - p / (3.0 * uk) - shift;
        w *= omega;
    }
    out
}

/// Roots of the monic cubic `x^3 + a x^2 + b x + c`.
pub fn solve_cubic(p: &PolySpec) -> Result<[C64; 3]> {
    if p.degree() != 3 {
        return Err(Error::InvalidInput("solve_cubic needs degree 3".into()));
    }
    let r = p.roots();
    Ok([r[0], r[1], r[2]])
}

fn closed_quartic(c: &[C64]) -> [C64; 4] {
    let (a, b, cc, d) = (c[0], c[1], c[2], c[3]);
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = a2 * a / 8.0 - a * b / 2.0 + cc;
    let r = -3.0 * a2 * a2 / 256.0 + a2 * b / 16.0 - a * cc / 4.0 + d;

    let scale = 1.0 + p.norm() + q.norm().sqrt() + r.norm().sqrt();
    if q.norm() <= 1e-14 * scale * scale * scale {
        // biquadratic: y^2 = z with z^2 + p z + r = 0
        let [z1, z2] = solve_quadratic(p, r);
        let (s1, s2) = (z1.sqrt(), z2.sqrt());
        return [s1 - shift, -s1 - shift, s2 - shift, -s2 - shift];
    }

    // resolvent 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0, take the largest root
    let res = closed_cubic(p, (p * p / 4.0) - r, -q * q / 8.0);
    let m = res
        .iter()
        .copied()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap_or_default();
    let s = (2.0 * m).sqrt();
    let t = q / (2.0 * s);
    let [y1, y2] = solve_quadratic(s, p / 2.0 + m - t);
    let [y3, y4] = solve_quadratic(-s, p / 2.0 + m + t);
    [y1 - shift, y2 - shift, y3 - shift, y4 - shift]
}

/// Roots of the monic quartic `x^4 + a x^3 + b x^2 + c x + d`.
pub fn solve_quartic(p: &PolySpec) -> Result<[C64; 4]> {
    if p.degree() != 4 {
        return Err(Error::InvalidInput("solve_quartic needs degree 4".into()));
    }
    let r = p.roots();
    Ok([r[0], r[1], r[2], r[3]])
}

/// Coefficients (monic, descending, leading one dropped) of `prod (x - r)`.
pub fn expand_roots(roots: &[C64]) -> Vec<C64> {
    let mut c = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![C64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= ci * r;
        }
        c = next;
    }
    c.remove(0);
    c
}

/// Two roots closer than this are treated as colliding.
pub const COLLISION_GAP: f64 = 1e-9;

/// A tracked root of a varying polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchState {
    pub branch_index: usize,
    pub current_root: C64,
    pub last_x: f64,
    /// `|root|` change over the last update; zero before the first one.
    pub last_drift: f64,
    /// Caller-supplied bound on `|d root / dx|` near `last_x`. When set,
    /// a jump larger than `10 |dx| rate_bound` is a [`Error::BranchCollision`].
    pub rate_bound: Option<f64>,
}

impl BranchState {
    /// Start on root number `branch_index` of `poly` (roots in sorted order).
    pub fn start(poly: &PolySpec, branch_index: usize, x: f64) -> Result<Self> {
        let roots = poly.roots();
        let root = *roots.get(branch_index).ok_or_else(|| {
            Error::InvalidInput(format!(
                "branch {branch_index} out of range for degree {}",
                poly.degree()
            ))
        })?;
        Ok(BranchState {
            branch_index,
            current_root: root,
            last_x: x,
            last_drift: 0.0,
            rate_bound: None,
        })
    }
}

/// Follow the branch to `new_x`: pick the root of `new_poly` nearest the
/// current one.
pub fn track_branch(state: &BranchState, new_poly: &PolySpec, new_x: f64) -> Result<BranchState> {
    select_nearest(state, &new_poly.roots(), new_x)
}

/// [`track_branch`] on an already computed root set.
pub fn select_nearest(state: &BranchState, roots: &[C64], new_x: f64) -> Result<BranchState> {
    let cur = state.current_root;
    let mut order: Vec<(f64, C64)> = roots.iter().map(|&r| ((r - cur).norm(), r)).collect();
    // distance first, then (re, im) for a deterministic tie-break
    order.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.re.total_cmp(&b.1.re))
            .then(a.1.im.total_cmp(&b.1.im))
    });
    let (dist, chosen) = order[0];
    if let Some(&(_, second)) = order.get(1) {
        let gap = (second - chosen).norm();
        if gap < COLLISION_GAP && gap < 10.0 * state.last_drift {
            return Err(Error::BranchCollision { x: new_x, gap });
        }
    }
    if let Some(rate) = state.rate_bound {
        let allowed = 10.0 * (new_x - state.last_x).abs() * rate + 1e-12 * (1.0 + cur.norm());
        if dist > allowed {
            return Err(Error::BranchCollision {
                x: new_x,
                gap: dist,
            });
        }
    }
    Ok(BranchState {
        branch_index: state.branch_index,
        current_root: chosen,
        last_x: new_x,
        last_drift: dist,
        rate_bound: state.rate_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_roots(got: &[C64], want: &[C64]) {
        assert_eq!(got.len(), want.len());
        let mut left = want.to_vec();
        for g in got {
            let i = left
                .iter()
                .position(|w| (g - w).norm() < 1e-12)
                .unwrap_or_else(|| panic!("got {got:?} want {want:?}"));
            left.remove(i);
        }
    }

    #[test]
    fn cubic_examples() {
        let p = PolySpec::real(&[-6.0, 11.0, -6.0]).unwrap();
        assert_roots(
            &solve_cubic(&p).unwrap(),
            &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
        );

        let s = 3f64.sqrt() / 2.0;
        let p = PolySpec::real(&[0.0, 0.0, 1.0]).unwrap();
        assert_roots(
            &solve_cubic(&p).unwrap(),
            &[c(-1.0, 0.0), c(0.5, s), c(0.5, -s)],
        );

        let p = PolySpec::real(&[0.0, 0.0, 0.0]).unwrap();
        assert_roots(&solve_cubic(&p).unwrap(), &[c(0.0, 0.0); 3]);
    }

    #[test]
    fn quartic_examples() {
        let p = PolySpec::real(&[0.0, 0.0, 0.0, -1.0]).unwrap();
        assert_roots(
            &solve_quartic(&p).unwrap(),
            &[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)],
        );
        let p = PolySpec::real(&[0.0; 4]).unwrap();
        assert_roots(&solve_quartic(&p).unwrap(), &[c(0.0, 0.0); 4]);
        let p = PolySpec::real(&[0.0, -5.0, 0.0, 4.0]).unwrap();
        assert_roots(
            &solve_quartic(&p).unwrap(),
            &[c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)],
        );
        // non-biquadratic with a cubic term
        let roots = [c(0.5, 1.0), c(-2.0, 0.0), c(1.0, -0.25), c(3.0, 2.0)];
        let p = PolySpec::new(expand_roots(&roots)).unwrap();
        assert_roots(&solve_quartic(&p).unwrap(), &roots);
    }

    #[test]
    fn quadratic_roots() {
        let p = PolySpec::real(&[-3.0, 2.0]).unwrap();
        assert_roots(&p.roots(), &[c(1.0, 0.0), c(2.0, 0.0)]);
        let p = PolySpec::real(&[0.0, 1.0]).unwrap();
        assert_roots(&p.roots(), &[c(0.0, 1.0), c(0.0, -1.0)]);
    }

    #[test]
    fn degree_checked() {
        assert!(PolySpec::real(&[1.0]).is_err());
        assert!(PolySpec::real(&[1.0; 5]).is_err());
        assert!(solve_cubic(&PolySpec::real(&[1.0; 4]).unwrap()).is_err());
    }

    fn state(root: C64) -> BranchState {
        BranchState {
            branch_index: 0,
            current_root: root,
            last_x: 0.0,
            last_drift: 0.0,
            rate_bound: None,
        }
    }

    #[test]
    fn tracking_picks_nearest() {
        let s = select_nearest(
            &state(c(1.0, 0.0)),
            &[c(0.9, 0.0), c(-1.0, 0.0), c(0.0, 1.0)],
            0.1,
        )
        .unwrap();
        assert_eq!(s.current_root, c(0.9, 0.0));

        let s = select_nearest(&state(c(0.0, 0.0)), &[c(0.0, 0.0); 3], 0.1).unwrap();
        assert_eq!(s.current_root, c(0.0, 0.0));

        let s = select_nearest(
            &state(c(0.0, 1.0)),
            &[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.05)],
            0.1,
        )
        .unwrap();
        assert_eq!(s.current_root, c(0.0, 1.05));
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let s = select_nearest(&state(c(0.0, 0.0)), &[c(0.0, 1.0), c(0.0, -1.0)], 0.1).unwrap();
        assert_eq!(s.current_root, c(0.0, -1.0));
    }

    #[test]
    fn near_collision_while_moving_is_flagged() {
        let mut st = state(c(0.0, 0.0));
        st.last_drift = 1e-3;
        let err = select_nearest(&st, &[c(1e-3, 0.0), c(1e-3 + 1e-11, 0.0), c(5.0, 0.0)], 0.1);
        assert!(matches!(err, Err(Error::BranchCollision { .. })));
    }

    #[test]
    fn jumps_beyond_rate_bound_are_flagged() {
        let mut st = state(c(0.0, 0.0));
        st.rate_bound = Some(1.0);
        assert!(select_nearest(&st, &[c(0.05, 0.0), c(3.0, 0.0)], 0.01).is_ok());
        assert!(matches!(
            select_nearest(&st, &[c(0.5, 0.0), c(3.0, 0.0)], 0.01),
            Err(Error::BranchCollision { .. })
        ));
    }
}

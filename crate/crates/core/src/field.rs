//! Scalar types the right-hand sides are generic over.
//!
//! Besides plain [`C64`] values, the systems are evaluated on [`Jet`]s
//! (value plus first derivative along the flow) and on truncated Taylor
//! [`Series`]. This is how the transform maps and the Halphen combinations get
//! exact x-derivatives without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::C64;

/// Minimal complex field interface shared by `C64`, [`Jet`] and [`Series`].
pub trait Field:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: C64) -> Self;

    fn real(x: f64) -> Self {
        Self::constant(C64::new(x, 0.0))
    }

    /// Multiply by a real constant.
    fn scale(self, x: f64) -> Self {
        self * Self::real(x)
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::real(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Field for C64 {
    fn constant(c: C64) -> Self {
        c
    }

    fn scale(self, x: f64) -> Self {
        self * x
    }
}

/// A value together with its derivative along x.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: C64,
    pub d: C64,
}

impl Jet {
    pub fn new(v: C64, d: C64) -> Self {
        Jet { v, d }
    }

    pub fn constant(v: C64) -> Self {
        Jet {
            v,
            d: C64::new(0.0, 0.0),
        }
    }
}

impl Field for Jet {
    fn constant(c: C64) -> Self {
        Jet::constant(c)
    }

    fn scale(self, x: f64) -> Self {
        Jet::new(self.v * x, self.d * x)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let q = self.v / o.v;
        Jet::new(q, (self.d - q * o.d) / o.v)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d)
    }
}

/// Truncated Taylor series `c[0] + c[1] h + ... + c[K-1] h^(K-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series<const K: usize> {
    pub c: [C64; K],
}

impl<const K: usize> Series<K> {
    pub fn zero() -> Self {
        Series {
            c: [C64::new(0.0, 0.0); K],
        }
    }

    pub fn constant(v: C64) -> Self {
        let mut s = Self::zero();
        s.c[0] = v;
        s
    }

    /// d/dh of the series. The top coefficient is lost.
    pub fn derivative(&self) -> Self {
        let mut s = Self::zero();
        for i in 1..K {
            s.c[i - 1] = self.c[i] * i as f64;
        }
        s
    }
}

impl<const K: usize> Field for Series<K> {
    fn constant(c: C64) -> Self {
        Series::constant(c)
    }

    fn scale(mut self, x: f64) -> Self {
        for v in &mut self.c {
            *v *= x;
        }
        self
    }
}

impl<const K: usize> Add for Series<K> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for i in 0..K {
            self.c[i] += o.c[i];
        }
        self
    }
}

impl<const K: usize> Sub for Series<K> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for i in 0..K {
            self.c[i] -= o.c[i];
        }
        self
    }
}

impl<const K: usize> Mul for Series<K> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut s = Self::zero();
        for i in 0..K {
            for j in 0..K - i {
                s.c[i + j] += self.c[i] * o.c[j];
            }
        }
        s
    }
}

impl<const K: usize> Div for Series<K> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let mut q = Self::zero();
        for n in 0..K {
            let mut acc = self.c[n];
            for j in 1..=n {
                acc -= o.c[j] * q.c[n - j];
            }
            q.c[n] = acc / o.c[0];
        }
        q
    }
}

impl<const K: usize> Neg for Series<K> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

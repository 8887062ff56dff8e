//! The tower `X_k = Z/p^k` of quotients of the p-adic integers.
//!
//! A morphism `X_k → X_k'` is a `Z_p`-invariant kernel on `X_k' × X_k`,
//! that is a function of `(a − b) mod p^m` with `m = min(k, k')`: a function
//! on the double cosets `p^k' Z_p \ Z_p / p^k Z_p`. Composition sums over
//! the points of the middle object.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalars::{is_prime, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerElement<S> {
    p: u64,
    k_src: u32,
    k_tgt: u32,
    values: Vec<S>,
}

pub(crate) fn check_ring<S: Scalar>(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::precondition(format!("{p} is not prime")));
    }
    if S::inv_nat(p).is_none() {
        return Err(Error::NotInvertible {
            n: p,
            ring: S::descriptor().to_string(),
        });
    }
    Ok(())
}

fn pow(p: u64, k: u32) -> usize {
    (p as usize).pow(k)
}

impl<S: Scalar> TowerElement<S> {
    /// `values[c]` is the value on the class `c ∈ Z/p^min(k_src, k_tgt)`.
    pub fn new(p: u64, k_src: u32, k_tgt: u32, values: Vec<S>) -> Result<Self> {
        check_ring::<S>(p)?;
        let len = pow(p, k_src.min(k_tgt));
        if values.len() != len {
            return Err(Error::invalid(format!("expected {len} values, got {}", values.len())));
        }
        Ok(TowerElement { p, k_src, k_tgt, values })
    }

    pub fn zero(p: u64, k_src: u32, k_tgt: u32) -> Result<Self> {
        Self::new(p, k_src, k_tgt, vec![S::zero(); pow(p, k_src.min(k_tgt))])
    }

    /// The indicator of the double coset of `c`.
    pub fn delta(p: u64, k_src: u32, k_tgt: u32, c: usize) -> Result<Self> {
        let mut e = Self::zero(p, k_src, k_tgt)?;
        let n = e.values.len();
        e.values[c % n] = S::one();
        Ok(e)
    }

    pub fn basis(p: u64, k_src: u32, k_tgt: u32) -> Result<Vec<Self>> {
        (0..pow(p, k_src.min(k_tgt))).map(|c| Self::delta(p, k_src, k_tgt, c)).collect()
    }

    pub fn random<R: Rng + ?Sized>(p: u64, k_src: u32, k_tgt: u32, rng: &mut R) -> Result<Self> {
        Self::new(p, k_src, k_tgt, (0..pow(p, k_src.min(k_tgt))).map(|_| S::sample(rng)).collect())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn source(&self) -> u32 {
        self.k_src
    }

    pub fn target(&self) -> u32 {
        self.k_tgt
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// The kernel entry at `(a, b) ∈ Z/p^k_tgt × Z/p^k_src`.
    pub fn kernel(&self, a: usize, b: usize) -> S {
        let n = self.values.len() as i64;
        self.values[(a as i64 - b as i64).rem_euclid(n) as usize].clone()
    }

    fn same_hom(&self, other: &Self) -> Result<()> {
        if (self.p, self.k_src, self.k_tgt) != (other.p, other.k_src, other.k_tgt) {
            return Err(Error::ObjectMismatch {
                left: self.signature(),
                right: other.signature(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_hom(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(TowerElement { values, ..self.clone() })
    }

    pub fn scale(&self, c: &S) -> Self {
        TowerElement {
            values: self.values.iter().map(|v| c.clone() * v.clone()).collect(),
            ..self.clone()
        }
    }

    fn signature(&self) -> String {
        format!("p={} k={}->{}", self.p, self.k_src, self.k_tgt)
    }

    /// Parses `p=2 k=1->0 [c0, c1, ...]`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |col: usize, msg: &str| Error::parse(1, col, msg.to_string());
        let rest = text.strip_prefix("p=").ok_or_else(|| bad(1, "expected `p=`"))?;
        let (p, rest) = rest.split_once(' ').ok_or_else(|| bad(3, "expected levels after the prime"))?;
        let p: u64 = p.parse().map_err(|_| bad(3, "malformed prime"))?;
        let offset = text.len() - rest.len();
        let rest = rest.trim_start();
        let levels = rest.strip_prefix("k=").ok_or_else(|| bad(offset + 1, "expected `k=`"))?;
        let (levels, list) = levels.split_once(' ').ok_or_else(|| bad(offset + 1, "expected values"))?;
        let (a, b) = levels.split_once("->").ok_or_else(|| bad(offset + 3, "expected `k=SRC->TGT`"))?;
        let k_src: u32 = a.parse().map_err(|_| bad(offset + 3, "malformed level"))?;
        let k_tgt: u32 = b.parse().map_err(|_| bad(offset + 3, "malformed level"))?;
        let list_col = text.len() - list.len() + 1;
        let inner = list
            .trim()
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(|| bad(list_col, "values must be enclosed in brackets"))?;
        let values = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|v| S::parse(v.trim()).map_err(|_| bad(list_col, &format!("malformed value `{}`", v.trim()))))
                .collect::<Result<Vec<S>>>()?
        };
        Self::new(p, k_src, k_tgt, values)
    }
}

impl<S: Scalar> fmt::Display for TowerElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{} [{}]", self.signature(), values.join(", "))
    }
}

/// `g ∘ f` for `f: X_k → X_k'` and `g: X_k' → X_k''`:
/// `(g∘f)(a, c) = Σ_{b ∈ Z/p^k'} g(a, b) f(b, c)`.
pub fn hecke_compose<S: Scalar>(f: &TowerElement<S>, g: &TowerElement<S>) -> Result<TowerElement<S>> {
    if f.p != g.p || f.k_tgt != g.k_src {
        return Err(Error::ObjectMismatch {
            left: f.signature(),
            right: g.signature(),
        });
    }
    let p = f.p;
    let m = pow(p, f.k_src.min(g.k_tgt));
    // classes of a − c are represented by a = class, c = 0
    let support: Vec<(usize, &S)> = (0..pow(p, f.k_tgt))
        .map(|b| (b, &f.values[b % f.values.len()]))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let values = (0..m)
        .map(|a| {
            let mut acc = S::zero();
            for &(b, v) in &support {
                let w = g.kernel(a, b);
                if !w.is_zero() {
                    acc = acc + w * v.clone();
                }
            }
            acc
        })
        .collect();
    TowerElement::new(p, f.k_src, g.k_tgt, values)
}

/// `g ∘ f` computed on the finite quotient `Z/p^N` with `N` the largest
/// level involved: both kernels are lifted, the middle sum runs over
/// `Z/p^N` with weight `p^-(N − k')`, and the result is read back on the
/// original levels. Agrees with [`hecke_compose`].
pub fn hecke_compose_lifted<S: Scalar>(f: &TowerElement<S>, g: &TowerElement<S>) -> Result<TowerElement<S>> {
    if f.p != g.p || f.k_tgt != g.k_src {
        return Err(Error::ObjectMismatch {
            left: f.signature(),
            right: g.signature(),
        });
    }
    let p = f.p;
    let n = f.k_src.max(f.k_tgt).max(g.k_tgt);
    let big = pow(p, n);
    let weight = S::inv_nat((big / pow(p, f.k_tgt)) as u64).ok_or_else(|| Error::NotInvertible {
        n: p,
        ring: S::descriptor().to_string(),
    })?;
    let values = (0..pow(p, f.k_src.min(g.k_tgt)))
        .map(|a| {
            let mut acc = S::zero();
            for b in 0..big {
                acc = acc + g.kernel(a, b) * f.kernel(b, 0);
            }
            acc * weight.clone()
        })
        .collect();
    TowerElement::new(p, f.k_src, g.k_tgt, values)
}

/// `f*(c) = f(−c)*`, as a morphism in the opposite direction.
pub fn hecke_star<S: Scalar>(f: &TowerElement<S>) -> TowerElement<S> {
    let n = f.values.len();
    TowerElement {
        p: f.p,
        k_src: f.k_tgt,
        k_tgt: f.k_src,
        values: (0..n).map(|c| f.values[(n - c) % n].star()).collect(),
    }
}

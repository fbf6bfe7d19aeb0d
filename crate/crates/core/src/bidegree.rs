use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bidegree `(p, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: i64,
    pub q: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { p: 0, q: 0 };

    pub const fn new(p: i64, q: i64) -> Self {
        Bidegree { p, q }
    }

    /// Bidegree of the structure map `d_i`, namely `(-i, 1-i)`.
    pub const fn of_diff(i: usize) -> Self {
        Bidegree::new(-(i as i64), 1 - i as i64)
    }

    /// The involution `((N-2)p - (N-1)q, (N-3)p - (N-2)q)`.
    pub fn involve(self, arity: usize) -> Self {
        let n = arity as i64;
        Bidegree::new((n - 2) * self.p - (n - 1) * self.q, (n - 3) * self.p - (n - 2) * self.q)
    }

    /// Total degree `q - p`; every structure map raises it by one.
    pub fn total(self) -> i64 {
        self.q - self.p
    }

    /// Diagonal shift `(p - k, q - k)`.
    pub fn down(self, k: usize) -> Self {
        Bidegree::new(self.p - k as i64, self.q - k as i64)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.p, -self.q)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

impl FromStr for Bidegree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s.split_once(',').ok_or_else(|| Error::Parse(format!("bidegree `{s}` is not of the form p,q")))?;
        let int =
            |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bidegree `{s}`: bad integer `{t}`")));
        Ok(Bidegree::new(int(p)?, int(q)?))
    }
}

/// A closed rectangle of bidegrees `[pmin, pmax] x [qmin, qmax]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub pmin: i64,
    pub pmax: i64,
    pub qmin: i64,
    pub qmax: i64,
}

impl Window {
    pub fn new(pmin: i64, pmax: i64, qmin: i64, qmax: i64) -> Self {
        Window { pmin, pmax, qmin, qmax }
    }

    pub fn point(b: Bidegree) -> Self {
        Window::new(b.p, b.p, b.q, b.q)
    }

    /// Smallest window containing all the given bidegrees.
    pub fn hull<I: IntoIterator<Item = Bidegree>>(points: I) -> Option<Self> {
        points.into_iter().fold(None, |acc, b| {
            Some(match acc {
                None => Window::point(b),
                Some(w) => w.including(b),
            })
        })
    }

    pub fn including(self, b: Bidegree) -> Self {
        Window::new(self.pmin.min(b.p), self.pmax.max(b.p), self.qmin.min(b.q), self.qmax.max(b.q))
    }

    pub fn union(self, o: Window) -> Self {
        Window::new(self.pmin.min(o.pmin), self.pmax.max(o.pmax), self.qmin.min(o.qmin), self.qmax.max(o.qmax))
    }

    pub fn inflate(self, r: usize) -> Self {
        let r = r as i64;
        Window::new(self.pmin - r, self.pmax + r, self.qmin - r, self.qmax + r)
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        (self.pmin..=self.pmax).contains(&b.p) && (self.qmin..=self.qmax).contains(&b.q)
    }

    /// Bounding box of the image under the involution.
    pub fn involve(self, arity: usize) -> Self {
        let corners = [
            Bidegree::new(self.pmin, self.qmin),
            Bidegree::new(self.pmin, self.qmax),
            Bidegree::new(self.pmax, self.qmin),
            Bidegree::new(self.pmax, self.qmax),
        ];
        Window::hull(corners.iter().map(|b| b.involve(arity))).expect("four corners")
    }

    pub fn len(&self) -> usize {
        ((self.pmax - self.pmin + 1).max(0) * (self.qmax - self.qmin + 1).max(0)) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bidegrees in `(p, q)` lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (self.pmin..=self.pmax).flat_map(move |p| (self.qmin..=self.qmax).map(move |q| Bidegree::new(p, q)))
    }

    pub fn bidegrees(&self) -> Vec<Bidegree> {
        self.iter().collect()
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{}:{}", self.pmin, self.pmax, self.qmin, self.qmax)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Syntax `pmin:pmax,qmin:qmax`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("window `{s}` is not of the form pmin:pmax,qmin:qmax"));
        let (ps, qs) = s.split_once(',').ok_or_else(bad)?;
        let range = |t: &str| -> Result<(i64, i64)> {
            let (a, b) = t.split_once(':').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        };
        let (pmin, pmax) = range(ps)?;
        let (qmin, qmax) = range(qs)?;
        if pmin > pmax || qmin > qmax {
            return Err(bad());
        }
        Ok(Window::new(pmin, pmax, qmin, qmax))
    }
}

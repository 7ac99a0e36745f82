//! Reduced rational slopes, the vertex set of each complexity-1 window.
//!
//! The base curve of a window is the slope `1/0`; every other essential
//! curve of the window is a finite reduced slope.  Two slopes span an edge
//! of the window's curve graph exactly when the determinant
//! `|num_a * den_b - num_b * den_a|` equals 1, which realizes geometric
//! intersection 1 in a one-holed torus and 2 in a four-holed sphere.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced slope `num/den` with `den >= 0`; `1/0` is the base curve.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope {
    num: i64,
    den: i64,
}

impl Slope {
    /// The slope of the window's own base curve.
    pub const BASE: Slope = Slope { num: 1, den: 0 };

    pub fn new(num: i64, den: i64) -> Result<Slope> {
        if num == 0 && den == 0 {
            return Err(Error::InvalidSlope(num, den));
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 || (den == 0 && num < 0) {
            num = -num;
            den = -den;
        }
        Ok(Slope { num, den })
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn is_base(self) -> bool {
        self.den == 0
    }

    pub fn det(self, other: Slope) -> i64 {
        let d = self.num as i128 * other.den as i128 - other.num as i128 * self.den as i128;
        i64::try_from(d).expect("slope determinant overflow")
    }

    /// Edge relation of the window's curve graph.
    pub fn is_adjacent(self, other: Slope) -> bool {
        self.det(other).abs() == 1
    }

    pub fn height(self) -> u64 {
        self.num.unsigned_abs().max(self.den.unsigned_abs())
    }

    /// All slopes adjacent to `self` with height at most `max_height`.
    ///
    /// The full neighbor set is infinite (two arithmetic families); the
    /// result is complete up to the height bound.
    pub fn neighbors(self, max_height: u64) -> Vec<Slope> {
        let mut out = Vec::new();
        let (p, q) = (self.num, self.den);
        if q == 0 {
            // base curve: neighbors are the integer slopes
            let h = max_height as i64;
            for n in -h..=h {
                let t = Slope { num: n, den: 1 };
                if t.height() <= max_height {
                    out.push(t);
                }
            }
            return out;
        }
        // one solution of p*s - q*r = 1, then both sign families (r + k p, s + k q)
        let (u, v) = ext_gcd(p, q);
        // p*u + q*v = 1  =>  s0 = u, r0 = -v gives p*s0 - q*r0 = 1
        for sign in [1i64, -1] {
            let (r0, s0) = (-v * sign, u * sign);
            let h = max_height as i64;
            // |s0 + k q| <= h bounds k
            let lo = (-h - s0).div_euclid(q.abs()) - 2;
            let hi = (h - s0).div_euclid(q.abs()) + 2;
            for k in lo..=hi {
                let (r, s) = (r0 + k * p, s0 + k * q);
                if r.unsigned_abs() <= max_height && s.unsigned_abs() <= max_height {
                    if let Ok(t) = Slope::new(r, s) {
                        debug_assert_eq!(self.det(t).abs(), 1);
                        out.push(t);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// A path of pairwise-adjacent slopes from `self` to the base `1/0`,
    /// descending through mediant parents.  Endpoints included.
    pub fn path_to_base(self) -> Vec<Slope> {
        let mut path = vec![self];
        let mut cur = self;
        while !cur.is_base() {
            let next = if cur.den == 1 {
                Slope::BASE
            } else {
                cur.smaller_parent()
            };
            debug_assert!(cur.is_adjacent(next));
            path.push(next);
            cur = next;
        }
        path
    }

    /// A pairwise-adjacent path from `self` to `other` through the base.
    pub fn path_to(self, other: Slope) -> Vec<Slope> {
        if self == other {
            return vec![self];
        }
        if self.is_adjacent(other) {
            return vec![self, other];
        }
        let mut path = self.path_to_base();
        let mut back = other.path_to_base();
        back.pop(); // drop the shared base endpoint
        back.reverse();
        path.extend(back);
        // shortcut consecutive duplicates introduced when one endpoint is base
        path.dedup();
        path
    }

    /// The mediant parent with the smaller denominator (requires `den >= 2`).
    fn smaller_parent(self) -> Slope {
        let (p, q) = (self.num, self.den);
        debug_assert!(q >= 2);
        let (u, v) = ext_gcd(p, q);
        // candidates (r, s) with p*s - q*r = ±1 and 0 < s < q
        let mut best: Option<Slope> = None;
        for sign in [1i64, -1] {
            let (r0, s0) = (-v * sign, u * sign);
            let k = (-s0).div_euclid(q); // smallest k with s0 + k q > 0 nearby
            for kk in [k, k + 1] {
                let (r, s) = (r0 + kk * p, s0 + kk * q);
                if s > 0 && s < q {
                    let cand = Slope { num: r, den: s };
                    if best.is_none_or(|b| cand.den < b.den) {
                        best = Some(cand);
                    }
                }
            }
        }
        best.expect("every slope with den >= 2 has a parent of smaller denominator")
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("slope `{s}` is not of the form p/q")))?;
        let num: i64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad slope numerator `{a}`")))?;
        let den: i64 = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad slope denominator `{b}`")))?;
        let slope = Slope::new(num, den)?;
        if slope.num != num || slope.den != den {
            return Err(Error::Parse(format!("slope `{s}` is not reduced/canonical")));
        }
        Ok(slope)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Slope, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(de::Error::custom)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if a == 0 && b == 0 {
        return 1;
    }
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Returns (u, v) with a*u + b*v = gcd(a, b).
fn ext_gcd(a: i64, b: i64) -> (i64, i64) {
    if b == 0 {
        return (a.signum(), 0);
    }
    let (u, v) = ext_gcd(b, a.rem_euclid(b));
    (v, u - a.div_euclid(b) * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(num: i64, den: i64) -> Slope {
        Slope::new(num, den).unwrap()
    }

    #[test]
    fn reduction_and_sign() {
        assert_eq!(s(2, 4), s(1, 2));
        assert_eq!(s(-2, -4), s(1, 2));
        assert_eq!(s(2, -4), s(-1, 2));
        assert_eq!(s(-3, 0), Slope::BASE);
        assert!(Slope::new(0, 0).is_err());
    }

    #[test]
    fn adjacency_matches_determinant() {
        assert!(s(0, 1).is_adjacent(Slope::BASE));
        assert!(s(0, 1).is_adjacent(s(1, 1)));
        assert!(s(0, 1).is_adjacent(s(-1, 1)));
        assert!(!s(0, 1).is_adjacent(s(1, 2)) == (s(0, 1).det(s(1, 2)).abs() != 1));
        assert!(!s(0, 1).is_adjacent(s(2, 1)));
    }

    #[test]
    fn neighbors_complete_to_height() {
        let n = s(0, 1).neighbors(2);
        for t in [Slope::BASE, s(1, 1), s(-1, 1), s(1, 2), s(-1, 2)] {
            assert!(n.contains(&t), "missing {t}");
        }
        for t in &n {
            assert!(s(0, 1).is_adjacent(*t));
            assert!(t.height() <= 2);
        }
        // brute-force cross-check against the determinant over a window of slopes
        let mut brute = Vec::new();
        for p in -2i64..=2 {
            for q in 0i64..=2 {
                if let Ok(t) = Slope::new(p, q) {
                    if (t.num(), t.den()) == (p, q) && s(0, 1).det(t).abs() == 1 {
                        brute.push(t);
                    }
                }
            }
        }
        brute.sort_unstable();
        brute.dedup();
        assert_eq!(n, brute);
    }

    #[test]
    fn paths_are_adjacent_chains() {
        for (a, b) in [(s(2, 5), Slope::BASE), (s(3, 7), s(-2, 3)), (s(0, 1), s(1, 1))] {
            let p = a.path_to(b);
            assert_eq!(*p.first().unwrap(), a);
            assert_eq!(*p.last().unwrap(), b);
            for w in p.windows(2) {
                assert!(w[0].is_adjacent(w[1]), "{} !~ {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn display_round_trip() {
        for t in [s(2, 5), s(-7, 3), Slope::BASE, s(0, 1)] {
            let back: Slope = t.to_string().parse().unwrap();
            assert_eq!(back, t);
        }
    }
}

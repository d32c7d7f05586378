use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::jets::Point;

/// Closed rectangle `[t0, t1] × [x0, x1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub t0: f64,
    pub t1: f64,
    pub x0: f64,
    pub x1: f64,
}

impl Region {
    pub const fn new(t0: f64, t1: f64, x0: f64, x1: f64) -> Self {
        Self { t0, t1, x0, x1 }
    }

    pub fn is_valid(&self) -> bool {
        [self.t0, self.t1, self.x0, self.x1].iter().all(|v| v.is_finite())
            && self.t1 > self.t0
            && self.x1 > self.x0
    }

    pub fn contains(&self, p: Point) -> bool {
        p.t >= self.t0 && p.t <= self.t1 && p.x >= self.x0 && p.x <= self.x1
    }

    /// Node `(i, j)` of the uniform `n_t × n_x` grid including the edges.
    pub fn grid_point(&self, i: usize, j: usize, n_t: usize, n_x: usize) -> Point {
        let lerp = |a: f64, b: f64, k: usize, n: usize| {
            if n <= 1 {
                a
            } else {
                a + (b - a) * k as f64 / (n - 1) as f64
            }
        };
        Point::new(lerp(self.t0, self.t1, i, n_t), lerp(self.x0, self.x1, j, n_x))
    }

    /// Grid nodes in row-major order (time outer, space inner).
    pub fn grid(&self, n_t: usize, n_x: usize) -> Vec<Point> {
        (0..n_t)
            .flat_map(|i| (0..n_x).map(move |j| (i, j)))
            .map(|(i, j)| self.grid_point(i, j, n_t, n_x))
            .collect()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.t0, self.t1, self.x0, self.x1)
    }
}

impl FromStr for Region {
    type Err = String;

    /// Parses `t0,t1,x0,x1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("invalid region '{s}': {e}"))?;
        let [t0, t1, x0, x1] = parts[..] else {
            return Err(format!("region needs four numbers t0,t1,x0,x1, got '{s}'"));
        };
        let r = Region::new(t0, t1, x0, x1);
        if r.is_valid() {
            Ok(r)
        } else {
            Err(format!("region '{s}' is empty or not finite"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_grid() {
        let r: Region = "0,1,-2,2".parse().unwrap();
        assert_eq!(r, Region::new(0.0, 1.0, -2.0, 2.0));
        let g = r.grid(3, 5);
        assert_eq!(g.len(), 15);
        assert_eq!(g[0], Point::new(0.0, -2.0));
        assert_eq!(g[14], Point::new(1.0, 2.0));
        assert_eq!(g[7], Point::new(0.5, 0.0));
    }

    #[test]
    fn rejects_bad_regions() {
        assert!("0,1,2".parse::<Region>().is_err());
        assert!("1,0,0,1".parse::<Region>().is_err());
        assert!("a,1,0,1".parse::<Region>().is_err());
    }
}

//! Integer degree ledger for the weighted constructions: ζ_i, ħ₁, ħ₂ and the ε values.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightParams {
    pub n: i64,
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

impl WeightParams {
    /// Validates n ≥ 1, α ≥ 0, γ > 0, α ≥ β, α + β ≥ 0 and γ > (2n+1)|β|.
    pub fn new(n: i64, alpha: i64, beta: i64, gamma: i64) -> Result<WeightParams> {
        let bad = |s: &str| Err(Error::InvalidParams(s.to_string()));
        if n < 1 {
            return bad("n >= 1");
        }
        if alpha < 0 {
            return bad("alpha >= 0");
        }
        if gamma <= 0 {
            return bad("gamma > 0");
        }
        if alpha < beta {
            return bad("alpha >= beta");
        }
        if alpha + beta < 0 {
            return bad("alpha + beta >= 0");
        }
        if gamma <= (2 * n + 1) * beta.abs() {
            return bad("gamma > (2n+1)|beta|");
        }
        Ok(WeightParams { n, alpha, beta, gamma })
    }

    pub fn sum(&self) -> i64 {
        self.alpha + self.beta
    }

    /// γ > max{|α + β(4n+1)| + (2n+1)(α+β), α(4n+1) + β}.
    pub fn strong_bound(&self) -> bool {
        let (n, a, b) = (self.n, self.alpha, self.beta);
        let m = ((a + b * (4 * n + 1)).abs() + (2 * n + 1) * (a + b)).max(a * (4 * n + 1) + b);
        self.gamma > m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLedger {
    pub params: WeightParams,
    pub zetas: Vec<i64>,
    pub hbar1: i64,
    pub hbar2: i64,
    pub epsilon1: i64,
    pub epsilon2: i64,
    pub g_degrees: Vec<i64>,
    /// ε₃..ε₆, only for n = 1.
    pub epsilons_p4: Option<[i64; 4]>,
}

pub fn build_ledger(p: WeightParams) -> DegreeLedger {
    let (n, a, b, g) = (p.n, p.alpha, p.beta, p.gamma);
    let s = a + b;
    let zetas = (1..=4 * n + 1)
        .filter(|&k| k != 2 * n + 1)
        .map(|k| 2 * a * (2 * n + 1) + k * (b - a))
        .collect();
    let g_degrees = (0..=2 * n + 1).map(|i| g + (2 * n + 1) * a + i * (b - a)).collect();
    DegreeLedger {
        params: p,
        zetas,
        hbar1: 2 * g - (2 * n + 1) * s,
        hbar2: 2 * n * g + 3 * n * (2 * n + 1) * s,
        epsilon1: 2 * g + (2 * n + 1) * s,
        epsilon2: 2 * n * g + n * (2 * n + 1) * s,
        g_degrees,
        epsilons_p4: (n == 1).then(|| {
            [2 * g + 7 * a - b, 2 * g + 5 * a + b, 2 * g + a + 5 * b, 2 * g - a + 7 * b]
        }),
    }
}

impl DegreeLedger {
    pub fn n(&self) -> i64 {
        self.params.n
    }

    /// ζ_b with 1-based b.
    pub fn zeta(&self, b: usize) -> Result<i64> {
        let bound = self.zetas.len();
        if b == 0 || b > bound {
            return Err(Error::IndexOutOfRange { index: b, bound });
        }
        Ok(self.zetas[b - 1])
    }

    fn mirror(&self, b: usize) -> Result<i64> {
        self.zeta(b)?;
        self.zeta(self.zetas.len() + 1 - b)
    }

    /// −ε + ζ_b = −ζ_{4n+1−b} − ħ₁.
    pub fn homogeneity_eps1_with(&self, b: usize, eps: i64) -> Result<bool> {
        Ok(-eps + self.zeta(b)? == -self.mirror(b)? - self.hbar1)
    }

    /// ζ_b = −ζ_{4n+1−b} − 2(n−1)(2n+1)(α+β) − ε + ħ₂.
    pub fn homogeneity_eps2_with(&self, b: usize, eps: i64) -> Result<bool> {
        let n = self.n();
        let rhs = -self.mirror(b)? - 2 * (n - 1) * (2 * n + 1) * self.params.sum() - eps + self.hbar2;
        Ok(self.zeta(b)? == rhs)
    }

    pub fn homogeneity_check_eps1(&self, b: usize) -> Result<bool> {
        self.homogeneity_eps1_with(b, self.epsilon1)
    }

    pub fn homogeneity_check_eps2(&self, b: usize) -> Result<bool> {
        self.homogeneity_eps2_with(b, self.epsilon2)
    }

    /// ζ_i + ζ_{4n+1−i} = 2(2n+1)(α+β) for every i.
    pub fn pair_identity(&self) -> bool {
        let k = self.zetas.len();
        let target = 2 * (2 * self.n() + 1) * self.params.sum();
        (0..k).all(|i| self.zetas[i] + self.zetas[k - 1 - i] == target)
    }

    /// Σζ_i = 4n(2n+1)(α+β).
    pub fn sum_identity(&self) -> bool {
        let n = self.n();
        self.zetas.iter().sum::<i64>() == 4 * n * (2 * n + 1) * self.params.sum()
    }

    /// ε₃..ε₆ by index 3..=6.
    pub fn epsilon_p4(&self, which: usize) -> Result<i64> {
        let eps = self
            .epsilons_p4
            .ok_or_else(|| Error::InvalidParams("epsilon_3..epsilon_6 need n = 1".into()))?;
        if !(3..=6).contains(&which) {
            return Err(Error::IndexOutOfRange { index: which, bound: 6 });
        }
        Ok(eps[which - 3])
    }
}

/// dim W = C(2n+2, 2) − (4n+1).
pub fn dim_w(n: i64) -> i64 {
    (2 * n + 2) * (2 * n + 1) / 2 - (4 * n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_examples() {
        let l = build_ledger(WeightParams::new(1, 0, 0, 1).unwrap());
        assert_eq!(l.zetas, vec![0, 0, 0, 0]);
        assert_eq!((l.hbar1, l.hbar2, l.epsilon1, l.epsilon2), (2, 2, 2, 2));
        assert!(l.homogeneity_check_eps1(1).unwrap());
        let l = build_ledger(WeightParams::new(1, 1, 0, 4).unwrap());
        assert_eq!(l.zetas, vec![5, 4, 2, 1]);
        assert_eq!(l.g_degrees, vec![7, 6, 5, 4]);
    }

    #[test]
    fn homogeneity_is_strict() {
        let l = build_ledger(WeightParams::new(2, 1, -1, 11).unwrap());
        for b in 1..=8 {
            assert!(l.homogeneity_check_eps2(b).unwrap());
            assert!(!l.homogeneity_eps2_with(b, l.epsilon2 - 1).unwrap());
            assert!(!l.homogeneity_eps1_with(b, l.epsilon1 + 1).unwrap());
        }
        assert!(matches!(l.homogeneity_check_eps1(9), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(WeightParams::new(1, 0, 1, 10).is_err());
        assert!(WeightParams::new(1, 1, -2, 10).is_err());
        assert!(WeightParams::new(1, 2, -1, 3).is_err());
        assert!(WeightParams::new(0, 0, 0, 1).is_err());
    }

    #[test]
    fn dim_w_small() {
        assert_eq!(dim_w(1), 1);
        assert_eq!(dim_w(2), 6);
    }
}

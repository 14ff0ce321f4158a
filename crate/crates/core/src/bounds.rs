//! Closed-form expected costs and cost bounds, evaluated exactly in `f64`.

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};
use crate::extensions::expected_extensions;

/// `H_k = 1 + 1/2 + ... + 1/k`, summed directly; `H_0 = 0`.
pub fn harmonic(k: usize) -> f64 {
    (1..=k).map(|i| 1.0 / i as f64).sum()
}

fn log_base(x: f64, base: f64) -> f64 {
    x.ln() / base.ln()
}

/// How a measured mean is judged against a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRule {
    /// mean <= bound + 3 se
    Upper,
    /// mean >= bound - 3 se
    Lower,
    /// |mean - bound| <= 3 se
    Expectation,
    /// Asymptotic value: |mean - bound| <= 3 se + finite-n slack
    Limit,
}

macro_rules! bounds {
    ($($variant:ident => $name:literal, $rule:ident;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Bound { $($variant,)* }

        impl Bound {
            pub const ALL: &'static [Bound] = &[$(Bound::$variant,)*];

            pub fn name(self) -> &'static str {
                match self { $(Bound::$variant => $name,)* }
            }

            pub fn rule(self) -> BoundRule {
                match self { $(Bound::$variant => BoundRule::$rule,)* }
            }
        }

        impl FromStr for Bound {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(Bound::$variant),)*
                    other => param(format!("unknown bound name {other:?}")),
                }
            }
        }
    };
}

bounds! {
    Harmonic => "harmonic", Expectation;
    UniformFindMax => "uniform_findmax_bound", Upper;
    RankCertExpect => "rank_cert_expect", Expectation;
    UniformSortCertExpect => "uniform_sortcert_expect", Expectation;
    BooleanFindMaxLimit => "boolean_findmax_limit", Limit;
    BooleanSortCertExpect => "boolean_sortcert_expect", Expectation;
    BooleanSortBound => "boolean_sort_bound", Upper;
    BooleanRepeatedMaxBound => "boolean_repeated_max_bound", Upper;
    ExtensionsExpect => "extensions_expect", Expectation;
    PosetAllMaxLower => "poset_allmax_lower", Lower;
    PosetAllMaxUpper => "poset_allmax_upper", Upper;
    PosetMaximalUpper => "poset_maximal_upper", Upper;
    BalancedSortBound => "balanced_sort_bound", Upper;
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Bound {
    /// Evaluates the closed form. `p` is required by the boolean, poset and
    /// extension formulas; `k` by `rank_cert_expect` and `harmonic`.
    pub fn evaluate(self, n: usize, p: Option<f64>, k: Option<usize>) -> Result<f64> {
        if n == 0 {
            return param("bounds need n >= 1");
        }
        let p = || match p {
            Some(p) if p > 0.0 && p <= 1.0 => Ok(p),
            Some(p) => param(format!("{self} needs p in (0, 1], got {p}")),
            None => param(format!("{self} needs p")),
        };
        let k = || match k {
            Some(k) if (1..=n).contains(&k) => Ok(k),
            Some(k) => param(format!("{self} needs k in 1..={n}, got {k}")),
            None => param(format!("{self} needs k")),
        };
        let nf = n as f64;
        Ok(match self {
            Bound::Harmonic => harmonic(k()?),
            Bound::UniformFindMax => 2.0 * (harmonic(n) - 1.0),
            Bound::RankCertExpect => {
                let k = k()?;
                harmonic(k) + harmonic(n - k + 1) - 2.0
            }
            Bound::UniformSortCertExpect => (nf - 1.0) / 2.0,
            Bound::BooleanFindMaxLimit => 1.0 / p()? - 1.0,
            Bound::BooleanSortCertExpect => (1.0 - p()?) * (nf - 1.0),
            Bound::BooleanSortBound => {
                let p = p()?;
                log_base(1.0 / p, 11.0 / 8.0).min(1.0 / p - 1.0) * (nf - 1.0)
            }
            Bound::BooleanRepeatedMaxBound => (1.0 / p()? - 1.0) * (nf - 1.0),
            Bound::ExtensionsExpect => expected_extensions(n, p()?)?,
            Bound::PosetAllMaxLower => (nf - nf * (1.0 - p()?).powi(n as i32 - 1)) / 2.0,
            Bound::PosetAllMaxUpper => (nf - 1.0) * (harmonic(n - 1) + 1.0),
            Bound::PosetMaximalUpper => nf - 1.0,
            Bound::BalancedSortBound => log_base(expected_extensions(n, p()?)?, 1.5),
        })
    }

    /// Extra two-sided tolerance for asymptotic targets at finite `n`.
    ///
    /// After the free comparisons the expected number of survivors is
    /// `(1 - (1-p)^n) / p`, which undershoots the limit `1/p` by `(1-p)^n / p`.
    pub fn finite_n_slack(self, n: usize, p: Option<f64>) -> f64 {
        match (self, p) {
            (Bound::BooleanFindMaxLimit, Some(p)) => (1.0 - p).powi(n as i32) / p,
            _ => 0.0,
        }
    }
}

/// Evaluates a bound by name.
pub fn bound(name: &str, n: usize, p: Option<f64>, k: Option<usize>) -> Result<f64> {
    name.parse::<Bound>()?.evaluate(n, p, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_basics() {
        assert_eq!(harmonic(0), 0.0);
        assert_eq!(harmonic(1), 1.0);
        assert_eq!(harmonic(2), 1.5);
        for k in 1..200 {
            assert!(harmonic(k + 1) > harmonic(k));
        }
    }

    #[test]
    fn named_values() {
        // 2(H_100 - 1) with H_100 = 5.187377517639621
        let v = bound("uniform_findmax_bound", 100, None, None).unwrap();
        assert!((v - 8.374755035279242).abs() < 1e-12, "{v}");
        assert_eq!(bound("boolean_findmax_limit", 10, Some(0.5), None).unwrap(), 1.0);
        assert_eq!(bound("uniform_sortcert_expect", 101, None, None).unwrap(), 50.0);
        assert_eq!(bound("boolean_sortcert_expect", 101, Some(0.5), None).unwrap(), 50.0);
        assert_eq!(bound("boolean_repeated_max_bound", 200, Some(0.5), None).unwrap(), 199.0);
        assert_eq!(bound("poset_maximal_upper", 50, Some(0.2), None).unwrap(), 49.0);
        // rank k=n collapses to H_n - 1
        let r = bound("rank_cert_expect", 30, None, Some(30)).unwrap();
        assert!((r - (harmonic(30) - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn boolean_sort_bound_switches_at_small_p() {
        // log_{11/8}(1/p) < 1/p - 1 only for p below about 0.1389
        let at = |p: f64| bound("boolean_sort_bound", 2, Some(p), None).unwrap();
        assert_eq!(at(0.5), 1.0);
        assert!((at(0.1) - (10f64).ln() / (11.0f64 / 8.0).ln()).abs() < 1e-12);
        assert!(at(0.1) < 9.0);
    }

    #[test]
    fn errors() {
        assert!(bound("no_such_bound", 10, None, None).is_err());
        assert!(bound("boolean_findmax_limit", 10, None, None).is_err());
        assert!(bound("rank_cert_expect", 10, None, Some(11)).is_err());
        assert!(bound("harmonic", 10, None, Some(0)).is_err());
        assert!(bound("uniform_findmax_bound", 0, None, None).is_err());
    }

    #[test]
    fn every_name_round_trips() {
        for &b in Bound::ALL {
            assert_eq!(b.name().parse::<Bound>().unwrap(), b);
        }
    }
}

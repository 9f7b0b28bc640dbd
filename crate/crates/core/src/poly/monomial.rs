use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector of a monomial `x1^e1 * ... * xn^en`.
///
/// The `Ord` impl is deglex: total degree first, ties broken
/// lexicographically with `x1 > x2 > ... > xn`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u32; 4]>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn new(exps: &[u32]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
            degree: exps.iter().sum(),
        }
    }

    /// The monomial `x_i^k` (zero-based `i`).
    pub fn var_power(nvars: usize, i: usize, k: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = k;
        m.degree = k;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other
                .exps
                .iter()
                .zip(self.exps.iter())
                .map(|(a, b)| a - b)
                .collect(),
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 4]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.max(b))
            .collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Same exponents embedded in a ring with `nvars` variables; extra
    /// variables get exponent zero. Panics if a dropped variable occurs.
    pub fn with_nvars(&self, nvars: usize) -> Monomial {
        let mut exps: SmallVec<[u32; 4]> = SmallVec::from_elem(0, nvars);
        for (i, e) in self.exps.iter().enumerate() {
            if i < nvars {
                exps[i] = *e;
            } else {
                assert_eq!(*e, 0, "variable x{} does not fit in {} variables", i + 1, nvars);
            }
        }
        Monomial {
            exps,
            degree: self.degree,
        }
    }
}

#[cfg(feature = "mutation-hooks")]
thread_local! {
    static REVERSED_TIEBREAK: std::cell::Cell<bool> = const { std::cell::Cell::new(false) };
}

/// Flips the lexicographic tie-break on the current thread. Only used to
/// check that the self-test catches a corrupted order.
#[cfg(feature = "mutation-hooks")]
pub fn set_corrupted_order(on: bool) {
    REVERSED_TIEBREAK.with(|c| c.set(on));
}

#[inline]
fn tiebreak(ord: Ordering) -> Ordering {
    #[cfg(feature = "mutation-hooks")]
    {
        if REVERSED_TIEBREAK.with(|c| c.get()) {
            return ord.reverse();
        }
    }
    ord
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| tiebreak(self.exps.cmp(&other.exps)))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

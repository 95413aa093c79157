use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gs::GsParams;
use crate::scalar::Scalar;
use crate::toeplitz::fib_seq;

type BoundFn = dyn Fn(f64, usize) -> f64 + Send + Sync;

/// Generator `f(eta, i)` of box bounds `K_i = f(eta, i)`.
#[derive(Clone)]
pub enum BoxFamily {
    /// `eta * exp(-lambda * i)`.
    Exponential { lambda: f64 },
    /// `eta` for every `i`.
    Constant,
    /// User supplied; validated by [`BoxFamily::custom`].
    Custom { name: String, f: Arc<BoundFn> },
}

impl fmt::Debug for BoxFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Exponential rates of the default registry.
pub const REGISTRY_LAMBDAS: [f64; 5] = [0.6, 1.0, 1.4, 1.8, 2.2];

impl BoxFamily {
    /// The five exponentially decaying families used by default.
    pub fn registry() -> Vec<BoxFamily> {
        REGISTRY_LAMBDAS
            .iter()
            .map(|&lambda| BoxFamily::Exponential { lambda })
            .collect()
    }

    /// Registers a custom family after checking `f(0, i) = 0` and
    /// monotonicity in `eta` on a probe grid for `i = 1..p-1`.
    pub fn custom(
        name: impl Into<String>,
        p: usize,
        f: impl Fn(f64, usize) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let name = name.into();
        let grid = [0.0, 1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0];
        for i in 1..p.max(2) {
            if f(0.0, i) != 0.0 {
                return Err(Error::InvalidFamily(format!(
                    "{name}: f(0, {i}) = {} but must vanish",
                    f(0.0, i)
                )));
            }
            let mut prev = 0.0;
            for &eta in &grid[1..] {
                let v = f(eta, i);
                if !v.is_finite() || v < prev || v < 0.0 {
                    return Err(Error::InvalidFamily(format!(
                        "{name}: f(., {i}) is not nonnegative and nondecreasing at eta = {eta}"
                    )));
                }
                prev = v;
            }
            if prev <= 0.0 {
                return Err(Error::InvalidFamily(format!(
                    "{name}: f(., {i}) never becomes positive"
                )));
            }
        }
        Ok(Self::Custom {
            name,
            f: Arc::new(f),
        })
    }

    pub fn id(&self) -> String {
        match self {
            Self::Exponential { lambda } => format!("exp({lambda})"),
            Self::Constant => "const".into(),
            Self::Custom { name, .. } => name.clone(),
        }
    }

    #[inline]
    pub fn eval(&self, eta: f64, i: usize) -> f64 {
        match self {
            Self::Exponential { lambda } => eta * (-lambda * i as f64).exp(),
            Self::Constant => eta,
            Self::Custom { f, .. } => f(eta, i),
        }
    }

    /// `K_1..K_{p-1}` for the given scale. Underflowing bounds are floored at
    /// the smallest normal float so every bound stays positive.
    pub fn bounds(&self, eta: f64, p: usize) -> Vec<f64> {
        (1..p)
            .map(|i| self.eval(eta, i).max(f64::MIN_POSITIVE))
            .collect()
    }
}

/// `B(K) = sum_d (P-d) (sum_{j<=d} K_{P-j} F_{d-j}(K))^2`, an upper bound on
/// `||Z^H B^{-H}||_F^2` over the box `|alpha_i| <= K_i alpha_0`.
pub fn b_of_k(k: &[f64]) -> f64 {
    let p = k.len() + 1;
    if p < 2 {
        return 0.0;
    }
    let f = fib_seq(k, p - 2);
    let mut total = 0.0;
    for d in 1..p {
        let mut acc = 0.0;
        for j in 1..=d {
            acc += k[p - j - 1] * f[d - j];
        }
        total += (p - d) as f64 * acc * acc;
    }
    total
}

/// Box constraints `|alpha_i| <= K_i alpha_0` certified by `B(K) < 1`.
#[derive(Debug, Clone)]
pub struct BoxSpec {
    k: Vec<f64>,
    family_id: String,
    eta: f64,
    bound: f64,
    eps0: f64,
}

impl BoxSpec {
    pub fn new(k: Vec<f64>, family_id: impl Into<String>, eta: f64) -> Result<Self> {
        if let Some((i, v)) = k
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidArgument(format!(
                "box bound K_{} = {v} must be positive",
                i + 1
            )));
        }
        let bound = b_of_k(&k);
        if !(bound < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "box bounds are not certified: B(K) = {bound} >= 1"
            )));
        }
        Ok(Self {
            k,
            family_id: family_id.into(),
            eta,
            bound,
            eps0: 1e-6,
        })
    }

    /// Bisects `eta` for `family` at dimension `p`.
    pub fn from_family(family: &BoxFamily, p: usize, eps_eta: f64) -> Result<Self> {
        let (eta, k) = bisect_eta(family, p, eps_eta)?;
        Self::new(k, family.id(), eta)
    }

    /// One certified box per family of the default registry.
    pub fn registry(p: usize, eps_eta: f64) -> Result<Vec<Self>> {
        BoxFamily::registry()
            .iter()
            .map(|f| Self::from_family(f, p, eps_eta))
            .collect()
    }

    pub fn with_eps0(mut self, eps0: f64) -> Self {
        self.eps0 = eps0;
        self
    }

    pub fn dim(&self) -> usize {
        self.k.len() + 1
    }

    /// `K_1..K_{P-1}`.
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn family_id(&self) -> &str {
        &self.family_id
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The certificate value `B(K)`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// Whether `alpha` lies in the box (with a relative slack for rounding).
    pub fn contains<T: Scalar>(&self, alpha: &GsParams<T>) -> bool {
        let a0 = alpha.alpha0();
        if a0 < self.eps0 {
            return false;
        }
        let slack = 1.0 + 1e-12;
        alpha.rest().iter().zip(&self.k).all(|(v, &k)| {
            if T::IS_COMPLEX {
                let lim = 0.5 * k * a0 * slack;
                v.re().abs() <= lim && v.im().abs() <= lim
            } else {
                v.re().abs() <= k * a0 * slack
            }
        })
    }
}

/// Finds `eta` with `1 - eps_eta <= B(f(eta, .)) < 1` by bracketing and
/// bisection; returns `eta` and the bounds.
pub fn bisect_eta(family: &BoxFamily, p: usize, eps_eta: f64) -> Result<(f64, Vec<f64>)> {
    if p < 2 {
        return Err(Error::InvalidArgument("box bounds need P >= 2".into()));
    }
    if !(eps_eta > 0.0 && eps_eta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps_eta must lie in (0, 1), got {eps_eta}"
        )));
    }
    let b = |eta: f64| b_of_k(&family.bounds(eta, p));
    if b(0.0) > f64::MIN_POSITIVE.sqrt() {
        return Err(Error::InvalidFamily(format!(
            "{}: B(f(0, .)) does not vanish",
            family.id()
        )));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while b(hi) < 1.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::InvalidFamily(format!(
                "{}: B(f(eta, .)) stays below 1 for every eta",
                family.id()
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = b(mid);
        if v < 1.0 && v >= 1.0 - eps_eta {
            return Ok((mid, family.bounds(mid, p)));
        }
        if v < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::InvalidFamily(format!(
        "{}: bisection did not bracket B = 1 (is f continuous in eta?)",
        family.id()
    )))
}

/// Projection onto the box: `alpha_0` is raised to `eps0` and each
/// `alpha_i` is clamped to `[-K_i alpha_0, K_i alpha_0]`. In the complex
/// case real and imaginary parts are clamped to `K_i alpha_0 / 2` each.
pub fn project_box<T: Scalar>(alpha: &GsParams<T>, spec: &BoxSpec) -> GsParams<T> {
    let a0 = alpha.alpha0().max(spec.eps0);
    let rest = alpha
        .rest()
        .iter()
        .zip(spec.k())
        .map(|(&v, &k)| {
            if T::IS_COMPLEX {
                let lim = 0.5 * k * a0;
                T::from_parts(v.re().clamp(-lim, lim), v.im().clamp(-lim, lim))
            } else {
                let lim = k * a0;
                T::from_real(v.re().clamp(-lim, lim))
            }
        })
        .collect();
    GsParams::new(a0, rest).expect("projection keeps alpha0 positive")
}

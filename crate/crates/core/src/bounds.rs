//! Closed-form bounds evaluated with exact poset sizes.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::posets::{ChainSpec, Hierarchy, DEFAULT_ELEMENT_BUDGET};

/// Slack allowed when comparing floating bounds with exact integers.
pub const TOLERANCE: f64 = 1e-9;

/// Values above this are reported as infinite by [`tow`].
pub const DEFAULT_TOW_CAP: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinite => None,
        }
    }

    /// `self <= x` up to [`TOLERANCE`].
    pub fn le(self, x: f64) -> bool {
        matches!(self, ExtReal::Finite(v) if v <= x + TOLERANCE)
    }

    /// `self >= x` up to [`TOLERANCE`].
    pub fn ge(self, x: f64) -> bool {
        match self {
            ExtReal::Finite(v) => v + TOLERANCE >= x,
            ExtReal::Infinite => true,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) if x.fract() == 0.0 && x.abs() < 1e15 => write!(f, "{x:.0}"),
            ExtReal::Finite(x) => write!(f, "{x:.6}"),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}

/// `tow_0(x) = x`, `tow_h(x) = 2^tow_{h-1}(x)`.
pub fn tow(h: u32, x: f64) -> ExtReal {
    tow_with_cap(h, x, DEFAULT_TOW_CAP)
}

pub fn tow_with_cap(h: u32, x: f64, cap: f64) -> ExtReal {
    let mut v = x;
    for _ in 0..h {
        if v > cap {
            return ExtReal::Infinite;
        }
        v = v.exp2();
    }
    if v.is_finite() && v <= cap {
        ExtReal::Finite(v)
    } else {
        ExtReal::Infinite
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Sandwich {
    pub k: usize,
    pub m: usize,
    pub t: usize,
    /// `tow_{k-2}(m^{t-1} / (2√t))`
    pub lower: ExtReal,
    /// `tow_{k-2}(2 m^{t-1})`
    pub upper: ExtReal,
    /// `|Q_k|`, when enumerable within the element budget.
    pub exact: Option<u64>,
}

impl Sandwich {
    pub fn holds(&self) -> Option<bool> {
        self.exact
            .map(|q| self.lower.le(q as f64) && self.upper.ge(q as f64))
    }
}

/// The tower bounds on `|Q_k|` next to the exact value.
pub fn q_tower_sandwich(k: usize, m: usize, t: usize) -> Result<Sandwich> {
    q_tower_sandwich_with_budget(k, m, t, DEFAULT_ELEMENT_BUDGET)
}

pub fn q_tower_sandwich_with_budget(
    k: usize,
    m: usize,
    t: usize,
    budget: usize,
) -> Result<Sandwich> {
    if k < 2 || m < 2 || t < 2 {
        return Err(Error::InvalidParams("need k, m, t >= 2".into()));
    }
    let base = (m as f64).powi(t as i32 - 1);
    let h = (k - 2) as u32;
    let exact = match Hierarchy::build_with_budget(&ChainSpec::diagonal(m, t)?, k, budget) {
        Ok(hier) => Some(hier.q(k) as u64),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Sandwich {
        k,
        m,
        t,
        lower: tow(h, base / (2.0 * (t as f64).sqrt())),
        upper: tow(h, 2.0 * base),
        exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Serialize)]
pub struct Bound {
    pub id: &'static str,
    pub side: Side,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub l: usize,
    pub t: usize,
    pub targets: Vec<usize>,
    /// `q_1, ..., q_h`
    pub q: Vec<u64>,
    /// Widths `a_1, ..., a_{h-1}`.
    pub a: Vec<u64>,
    /// Middle level size, graph case only.
    pub midlevel: Option<u64>,
    pub bounds: Vec<Bound>,
    /// Exact on-line value, when an oracle supplied one.
    pub exact: Option<u64>,
}

impl BoundReport {
    pub fn get(&self, id: &str) -> Option<f64> {
        self.bounds.iter().find(|b| b.id == id).map(|b| b.value)
    }

    /// Best (largest) lower bound.
    pub fn lower(&self) -> f64 {
        self.bounds
            .iter()
            .filter(|b| b.side == Side::Lower)
            .map(|b| b.value)
            .fold(0.0, f64::max)
    }

    /// Best (smallest) upper bound.
    pub fn upper(&self) -> f64 {
        self.bounds
            .iter()
            .filter(|b| b.side == Side::Upper)
            .map(|b| b.value)
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `value` sits between every lower and every upper bound.
    pub fn brackets(&self, value: u64) -> bool {
        let v = value as f64;
        self.lower() <= v + TOLERANCE && v <= self.upper() + TOLERANCE
    }

    pub fn with_exact(mut self, value: u64) -> Self {
        self.exact = Some(value);
        self
    }
}

fn check_targets(k: usize, l: usize, targets: &[usize]) -> Result<()> {
    if k < 2 || l == 0 || l > k {
        return Err(Error::InvalidParams(format!("need k >= 2 and 1 <= l <= k, got k={k} l={l}")));
    }
    if targets.len() < 2 || targets.iter().any(|&m| m < 2) {
        return Err(Error::InvalidParams("bounds need t >= 2 and every m_i >= 2".into()));
    }
    Ok(())
}

fn prod(xs: &[u64]) -> f64 {
    xs.iter().map(|&x| x as f64).product()
}

/// Every on-line bound that applies to `(k, ℓ, targets)`.
pub fn online_bounds(k: usize, l: usize, targets: &[usize]) -> Result<BoundReport> {
    check_targets(k, l, targets)?;
    let t = targets.len();
    let h = k.div_ceil(l);
    let hier = Hierarchy::build(&ChainSpec::from_targets(targets)?, h)?;
    let q: Vec<u64> = (1..=h).map(|j| hier.q(j) as u64).collect();
    let a: Vec<u64> = (1..h).map(|j| hier.level(j).width() as u64).collect();
    let qh = q[h - 1] as f64;
    let mut bounds = Vec::new();
    let mut push = |id, side, value| bounds.push(Bound { id, side, value });
    let mut midlevel = None;

    if k == 2 && l == 1 {
        let ms: Vec<f64> = targets.iter().map(|&m| m as f64).collect();
        let pm: f64 = ms.iter().product();
        let sm: f64 = ms.iter().sum();
        if ms.iter().all(|&m| m == ms[0]) {
            let m = ms[0];
            let tf = t as f64;
            push("k2-lower", Side::Lower, m.powi(t as i32 - 1) / (3.0 * tf.sqrt()));
            push("k2-upper", Side::Upper, tf * m.powi(t as i32 + 1));
        }
        // Each of the m^t labels rises fewer than Σ(m_i - 1) times before the top.
        let rises: f64 = ms.iter().map(|m| m - 1.0).sum();
        push("k2-moves", Side::Upper, pm * (rises - 1.0) + 1.0);
        push("k2-nondiagonal-lower", Side::Lower, pm / (2.0 * sm));
        push("k2-nondiagonal-upper", Side::Upper, sm * pm);
        midlevel = Some(midlevel_size(targets).size);
    } else if h == 1 {
        push("matching-lower", Side::Lower, qh / (k as f64 * qh.log2()));
        push("matching-upper", Side::Upper, qh + 1.0);
    } else {
        let qprev = q[h - 2] as f64;
        push("general-lower", Side::Lower, qh / (k as f64 * qh.log2()));
        push("general-upper", Side::Upper, qh * qprev * prod(&a));
        if l == 1 {
            let hf = h as f64;
            push(
                "general-moves",
                Side::Upper,
                1.0 + ((qh - hf + 1.0) * (qprev - hf) + 1.0) * prod(&a),
            );
        }
    }
    Ok(BoundReport {
        k,
        l,
        t,
        targets: targets.to_vec(),
        q,
        a,
        midlevel,
        bounds,
        exact: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LooseValue {
    pub h: usize,
    pub s: usize,
    pub q_h: u64,
    /// Off-line vertex Ramsey number `ℓ |Q_h| + s`.
    pub value: u64,
}

pub fn loose_value(k: usize, l: usize, targets: &[usize]) -> Result<LooseValue> {
    if k == 0 || l == 0 || l > k {
        return Err(Error::InvalidParams(format!("need 1 <= l <= k, got k={k} l={l}")));
    }
    let h = k.div_ceil(l);
    let s = k - (h - 1) * l;
    let hier = Hierarchy::build(&ChainSpec::from_targets(targets)?, h)?;
    let q_h = hier.q(h) as u64;
    Ok(LooseValue {
        h,
        s,
        q_h,
        value: l as u64 * q_h + s as u64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MidLevel {
    /// Vectors `0 <= a_i < m_i` with `Σ a_i = ⌊Σ(m_i - 1)/2⌋`.
    pub size: u64,
    /// `(2/3) m^{t-1} / √t`, diagonal only.
    pub chebyshev: Option<f64>,
    /// `m^{t-1}/t` on the diagonal, `Π m_i / Σ m_i` otherwise.
    pub pigeonhole: f64,
}

impl MidLevel {
    pub fn holds(&self) -> bool {
        let s = self.size as f64;
        s + TOLERANCE >= self.pigeonhole && self.chebyshev.is_none_or(|c| s + TOLERANCE >= c)
    }
}

pub fn midlevel_size(targets: &[usize]) -> MidLevel {
    let mut counts: Vec<u64> = vec![1];
    for &m in targets {
        let mut next = vec![0u64; counts.len() + m.saturating_sub(1)];
        for (i, &c) in counts.iter().enumerate() {
            for slot in &mut next[i..i + m] {
                *slot = slot.saturating_add(c);
            }
        }
        counts = next;
    }
    let total: usize = targets.iter().map(|m| m.saturating_sub(1)).sum();
    let size = counts.get(total / 2).copied().unwrap_or(0);
    let t = targets.len() as f64;
    let diagonal = targets.windows(2).all(|w| w[0] == w[1]);
    let (chebyshev, pigeonhole) = if diagonal && !targets.is_empty() {
        let base = (targets[0] as f64).powi(targets.len() as i32 - 1);
        (Some(2.0 / 3.0 * base / t.sqrt()), base / t)
    } else {
        let pm: f64 = targets.iter().map(|&m| m as f64).product();
        let sm: f64 = targets.iter().map(|&m| m as f64).sum();
        (None, pm / sm)
    };
    MidLevel {
        size,
        chebyshev,
        pigeonhole,
    }
}

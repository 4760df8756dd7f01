use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setcore::{enumerate_subsets, GroundSize, Subset};
use crate::value::ExactValue;

/// A set function on `2^E`, evaluated exactly.
pub trait SetFunction {
    fn ground(&self) -> GroundSize;
    fn value(&self, s: Subset) -> ExactValue;
}

impl<T: SetFunction + ?Sized> SetFunction for &T {
    fn ground(&self) -> GroundSize {
        (**self).ground()
    }
    fn value(&self, s: Subset) -> ExactValue {
        (**self).value(s)
    }
}

/// Parameters of the non-increasing family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecreasingInstance {
    n: GroundSize,
    alpha: u64,
    beta: u64,
    epsilon: ExactValue,
    plant: Option<Subset>,
}

impl DecreasingInstance {
    /// Requires `β + 1 ≤ α ≤ n`, `ε > 0`, and `|plant| = α` when a plant is given.
    pub fn new(
        n: GroundSize,
        alpha: u64,
        beta: u64,
        epsilon: ExactValue,
        plant: Option<Subset>,
    ) -> Result<Self> {
        if beta + 1 > alpha || alpha > n.get() as u64 {
            return Err(Error::InfeasibleParams {
                alpha,
                beta,
                n: n.get(),
            });
        }
        if !epsilon.is_positive() {
            return Err(Error::Parameter(format!("epsilon must be > 0, got {epsilon}")));
        }
        let inst = DecreasingInstance {
            n,
            alpha,
            beta,
            epsilon,
            plant: None,
        };
        match plant {
            Some(p) => inst.with_plant(p),
            None => Ok(inst),
        }
    }

    pub fn with_plant(mut self, plant: Subset) -> Result<Self> {
        if plant.ground() != self.n {
            return Err(Error::Parameter("plant lives in a different ground set".into()));
        }
        if plant.cardinality() as u64 != self.alpha {
            return Err(Error::Parameter(format!(
                "plant must have cardinality alpha={}, got {}",
                self.alpha,
                plant.cardinality()
            )));
        }
        self.plant = Some(plant);
        Ok(self)
    }

    pub fn without_plant(mut self) -> Self {
        self.plant = None;
        self
    }

    pub fn n(&self) -> GroundSize {
        self.n
    }
    pub fn alpha(&self) -> u64 {
        self.alpha
    }
    pub fn beta(&self) -> u64 {
        self.beta
    }
    pub fn epsilon(&self) -> &ExactValue {
        &self.epsilon
    }
    pub fn plant(&self) -> Option<Subset> {
        self.plant
    }

    /// `f(R) / g_R(R) = ε / (α + ε − β)`.
    pub fn planted_optimum(&self) -> ExactValue {
        let den = ExactValue::from_int(self.alpha) + &self.epsilon - ExactValue::from_int(self.beta);
        &self.epsilon / &den
    }

    /// Whether `β + |S ∩ R̄| < min{α, |S|}`, i.e. `f(S) ≠ g_R(S)`.
    pub fn differs_at(&self, s: Subset) -> Result<bool> {
        let plant = self.require_plant()?;
        let outside = s.difference(plant).cardinality() as u64;
        Ok(self.beta + outside < self.alpha.min(s.cardinality() as u64))
    }

    pub fn f(&self) -> Bundled {
        Bundled::DecreasingF(self.clone())
    }

    pub fn g_planted(&self) -> Result<Bundled> {
        self.require_plant()?;
        Ok(Bundled::DecreasingG(self.clone()))
    }

    fn require_plant(&self) -> Result<Subset> {
        self.plant
            .ok_or_else(|| Error::Config("decreasing g_R needs a planted set R".into()))
    }
}

/// `α + ε − min{α, |S|}`.
pub fn eval_f_dec(s: Subset, inst: &DecreasingInstance) -> ExactValue {
    let taken = inst.alpha.min(s.cardinality() as u64);
    ExactValue::from_int(inst.alpha - taken) + &inst.epsilon
}

/// `α + ε − min{β + |S ∩ R̄|, α, |S|}`.
pub fn eval_g_dec(s: Subset, inst: &DecreasingInstance) -> Result<ExactValue> {
    let plant = inst.require_plant()?;
    let outside = s.difference(plant).cardinality() as u64;
    let taken = (inst.beta + outside)
        .min(inst.alpha)
        .min(s.cardinality() as u64);
    Ok(ExactValue::from_int(inst.alpha - taken) + &inst.epsilon)
}

/// `α = ⌊x·√n / 5⌋`, `β = ⌊x² / 5⌋`, validated against `β + 1 ≤ α ≤ n`.
pub fn derive_decreasing_params(n: GroundSize, x: &ExactValue) -> Result<(u64, u64)> {
    if !x.is_positive() {
        return Err(Error::Parameter(format!("x must be > 0, got {x}")));
    }
    let x2 = x * x;
    let beta = (&x2 / &ExactValue::from_int(5))
        .floor()
        .to_u64()
        .ok_or_else(|| Error::Parameter(format!("beta overflows for x={x}")))?;
    // α is the largest integer a with 25·a² ≤ x²·n
    let bound = &x2 * &ExactValue::from_int(n.get() as u64);
    let fits = |a: &BigInt| -> bool {
        let lhs = ExactValue::from_int(a * a * 25);
        lhs <= bound
    };
    let estimate = (x.to_f64() * (n.get() as f64).sqrt() / 5.0).floor().max(0.0);
    let mut a = BigInt::from(estimate as u64);
    while a.is_positive() && !fits(&a) {
        a -= 1;
    }
    while fits(&(&a + 1)) {
        a += 1;
    }
    let alpha = a
        .to_u64()
        .ok_or_else(|| Error::Parameter(format!("alpha overflows for x={x}")))?;
    if beta + 1 > alpha || alpha > n.get() as u64 {
        return Err(Error::InfeasibleParams {
            alpha,
            beta,
            n: n.get(),
        });
    }
    Ok((alpha, beta))
}

/// Parameters of the non-decreasing family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncreasingInstance {
    n: GroundSize,
    m: ExactValue,
    epsilon: ExactValue,
    plant: Option<Subset>,
}

impl IncreasingInstance {
    /// Requires `m > 0`, `0 < ε ≤ n/(n+2)`, and `|plant| = ⌊n/2⌋` when given.
    pub fn new(
        n: GroundSize,
        m: ExactValue,
        epsilon: ExactValue,
        plant: Option<Subset>,
    ) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::Parameter(format!("m must be > 0, got {m}")));
        }
        let cap = ExactValue::ratio(n.get() as u64, n.get() as u64 + 2)?;
        if !epsilon.is_positive() || epsilon > cap {
            return Err(Error::Parameter(format!(
                "epsilon must lie in (0, {cap}], got {epsilon}"
            )));
        }
        let inst = IncreasingInstance {
            n,
            m,
            epsilon,
            plant: None,
        };
        match plant {
            Some(p) => inst.with_plant(p),
            None => Ok(inst),
        }
    }

    pub fn with_plant(mut self, plant: Subset) -> Result<Self> {
        if plant.ground() != self.n {
            return Err(Error::Parameter("plant lives in a different ground set".into()));
        }
        if plant.cardinality() != self.n.half() {
            return Err(Error::Parameter(format!(
                "plant must have cardinality floor(n/2)={}, got {}",
                self.n.half(),
                plant.cardinality()
            )));
        }
        self.plant = Some(plant);
        Ok(self)
    }

    pub fn without_plant(mut self) -> Self {
        self.plant = None;
        self
    }

    pub fn n(&self) -> GroundSize {
        self.n
    }
    pub fn m(&self) -> &ExactValue {
        &self.m
    }
    pub fn epsilon(&self) -> &ExactValue {
        &self.epsilon
    }
    pub fn plant(&self) -> Option<Subset> {
        self.plant
    }

    /// `h_R(R) = |R| = ⌊n/2⌋`.
    pub fn planted_optimum(&self) -> ExactValue {
        ExactValue::from_int(self.n.half() as u64)
    }

    /// `min{n/(2ε), m}`, a lower bound on the unplanted ratio.
    pub fn ratio_floor(&self) -> ExactValue {
        let small = &ExactValue::from_int(self.n.get() as u64)
            / &(&ExactValue::from_int(2) * &self.epsilon);
        small.min(self.m.clone())
    }

    /// `min{1/ε, 2m/n}`, the guaranteed gap.
    pub fn gap_bound(&self) -> ExactValue {
        let inv = self.epsilon.recip().expect("epsilon > 0");
        let other = &(&ExactValue::from_int(2) * &self.m) / &ExactValue::from_int(self.n.get() as u64);
        inv.min(other)
    }

    pub fn f(&self) -> Bundled {
        Bundled::IncreasingF(self.clone())
    }

    pub fn g(&self) -> Bundled {
        Bundled::IncreasingG(self.clone().without_plant())
    }

    pub fn g_planted(&self) -> Result<Bundled> {
        self.require_plant()?;
        Ok(Bundled::IncreasingGPlanted(self.clone()))
    }

    fn require_plant(&self) -> Result<Subset> {
        self.plant
            .ok_or_else(|| Error::Config("increasing g_R needs a planted set R".into()))
    }
}

/// `|S|` up to `⌊n/2⌋`, then `m·2^{|S|+1} + |S|`.
pub fn eval_f_inc(s: Subset, inst: &IncreasingInstance) -> ExactValue {
    let k = s.cardinality();
    if k <= inst.n.half() {
        ExactValue::from_int(k as u64)
    } else {
        let pow = ExactValue::from_int(BigInt::from(1) << (k + 1));
        &(&inst.m * &pow) + &ExactValue::from_int(k as u64)
    }
}

/// `(2|S|/n)·ε` up to `⌊n/2⌋`, then `2(|S| − ⌊n/2⌋)`.
pub fn eval_g_inc(s: Subset, inst: &IncreasingInstance) -> ExactValue {
    let k = s.cardinality();
    let half = inst.n.half();
    if k <= half {
        let scale = ExactValue::ratio(2 * k as u64, inst.n.get() as u64).expect("n > 0");
        &scale * &inst.epsilon
    } else {
        ExactValue::from_int(2 * (k - half) as u64)
    }
}

/// [`eval_g_inc`] everywhere except `S = R`, where the value is `1`.
pub fn eval_g_inc_planted(s: Subset, inst: &IncreasingInstance) -> Result<ExactValue> {
    let plant = inst.require_plant()?;
    if s == plant {
        Ok(ExactValue::one())
    } else {
        Ok(eval_g_inc(s, inst))
    }
}

/// The bundled family functions as [`SetFunction`] objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bundled {
    DecreasingF(DecreasingInstance),
    DecreasingG(DecreasingInstance),
    IncreasingF(IncreasingInstance),
    IncreasingG(IncreasingInstance),
    IncreasingGPlanted(IncreasingInstance),
}

impl Bundled {
    pub fn label(&self) -> &'static str {
        match self {
            Bundled::DecreasingF(_) => "decreasing_f",
            Bundled::DecreasingG(_) => "decreasing_g_planted",
            Bundled::IncreasingF(_) => "increasing_f",
            Bundled::IncreasingG(_) => "increasing_g",
            Bundled::IncreasingGPlanted(_) => "increasing_g_planted",
        }
    }
}

impl fmt::Display for Bundled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl SetFunction for Bundled {
    fn ground(&self) -> GroundSize {
        match self {
            Bundled::DecreasingF(i) | Bundled::DecreasingG(i) => i.n,
            Bundled::IncreasingF(i) | Bundled::IncreasingG(i) | Bundled::IncreasingGPlanted(i) => {
                i.n
            }
        }
    }

    fn value(&self, s: Subset) -> ExactValue {
        // constructors guarantee the plant for the planted variants
        match self {
            Bundled::DecreasingF(i) => eval_f_dec(s, i),
            Bundled::DecreasingG(i) => eval_g_dec(s, i).expect("plant checked at construction"),
            Bundled::IncreasingF(i) => eval_f_inc(s, i),
            Bundled::IncreasingG(i) => eval_g_inc(s, i),
            Bundled::IncreasingGPlanted(i) => {
                eval_g_inc_planted(s, i).expect("plant checked at construction")
            }
        }
    }
}

/// An explicit value per subset, indexed by mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTable {
    n: GroundSize,
    values: Vec<ExactValue>,
}

impl FunctionTable {
    pub fn new(n: GroundSize, values: Vec<ExactValue>) -> Result<Self> {
        let expected = 1usize
            .checked_shl(n.get() as u32)
            .filter(|_| n.get() < usize::BITS as usize)
            .ok_or_else(|| Error::Parameter(format!("table for n={n} is too large")))?;
        if values.len() != expected {
            return Err(Error::Parameter(format!(
                "function table for n={n} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(FunctionTable { n, values })
    }

    /// Tabulates any set function (guarded enumeration).
    pub fn tabulate<F: SetFunction + ?Sized>(func: &F) -> Result<Self> {
        let n = func.ground();
        let values = enumerate_subsets(n, None)?.map(|s| func.value(s)).collect();
        FunctionTable::new(n, values)
    }

    /// Parses `{"n": int, "values": ["p/q", ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FunctionTable =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("function table: {e}")))?;
        FunctionTable::new(raw.n, raw.values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn values(&self) -> &[ExactValue] {
        &self.values
    }
}

impl SetFunction for FunctionTable {
    fn ground(&self) -> GroundSize {
        self.n
    }
    fn value(&self, s: Subset) -> ExactValue {
        self.values[s.mask() as usize].clone()
    }
}

/// Adapts a closure into a [`SetFunction`].
pub struct FnSetFunction<F> {
    n: GroundSize,
    func: F,
}

impl<F: Fn(Subset) -> ExactValue> FnSetFunction<F> {
    pub fn new(n: GroundSize, func: F) -> Self {
        FnSetFunction { n, func }
    }
}

impl<F: Fn(Subset) -> ExactValue> SetFunction for FnSetFunction<F> {
    fn ground(&self) -> GroundSize {
        self.n
    }
    fn value(&self, s: Subset) -> ExactValue {
        (self.func)(s)
    }
}

//! Steps, walks, admissibility, the weights `h1` and `h`, and exhaustive
//! enumeration of finite walk classes.
//!
//! A walk from `-n` to `n` (ascending) or from `n` to `-n` (descending) is a
//! sequence of nonzero even steps. Its vertices are the partial sums started
//! at the initial endpoint; it is admissible when no intermediate vertex
//! touches `±n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ExactRational, Weight};

fn check_step(s: i64) -> Result<i64> {
    if s == 0 || s % 2 != 0 {
        Err(Error::InvalidStep(s))
    } else {
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// From `-n` to `n`.
    Ascending,
    /// From `n` to `-n`.
    Descending,
}

impl Direction {
    pub fn start(self, n: u32) -> i64 {
        match self {
            Direction::Ascending => -(n as i64),
            Direction::Descending => n as i64,
        }
    }

    pub fn target(self, n: u32) -> i64 {
        -self.start(n)
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Ascending => Direction::Descending,
            Direction::Descending => Direction::Ascending,
        }
    }

    /// `+1` for ascending, `-1` for descending.
    pub fn sign(self) -> i64 {
        match self {
            Direction::Ascending => 1,
            Direction::Descending => -1,
        }
    }
}

/// A finite set of permitted steps, all nonzero and even.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct StepSet(BTreeSet<i64>);

impl StepSet {
    pub fn new<I: IntoIterator<Item = i64>>(steps: I) -> Result<Self> {
        steps.into_iter().map(check_step).collect::<Result<_>>().map(StepSet)
    }

    /// `F_m = { j in 2Z \ {0} : |j| <= m }`.
    pub fn symmetric(m: u32) -> Self {
        let m = m as i64;
        StepSet((1..=m / 2).flat_map(|k| [-2 * k, 2 * k]).collect())
    }

    /// Positive even steps `2, 4, ..., <= m`.
    pub fn positive_up_to(m: u32) -> Self {
        let m = m as i64;
        StepSet((1..=m / 2).map(|k| 2 * k).collect())
    }

    /// The two-element set `{-2R, +2S}`.
    pub fn two_step(r: u32, s: u32) -> Result<Self> {
        if r == 0 || s == 0 {
            return Err(Error::ParameterRange("R and S must be at least 1".into()));
        }
        Ok(StepSet([-2 * r as i64, 2 * s as i64].into_iter().collect()))
    }

    /// `(R, S)` when the set is `{-2R, +2S}`.
    pub fn as_two_step(&self) -> Option<(u32, u32)> {
        let neg = self.negative_part();
        let pos = self.positive_part();
        match (neg.as_slice(), pos.as_slice()) {
            ([a], [b]) => Some(((-a / 2) as u32, (b / 2) as u32)),
            _ => None,
        }
    }

    pub fn contains(&self, step: i64) -> bool {
        self.0.contains(&step)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn positive_part(&self) -> Vec<i64> {
        self.0.iter().copied().filter(|&s| s > 0).collect()
    }

    pub fn negative_part(&self) -> Vec<i64> {
        self.0.iter().copied().filter(|&s| s < 0).collect()
    }

    pub fn reflected(&self) -> Self {
        StepSet(self.0.iter().map(|s| -s).collect())
    }
}

impl TryFrom<Vec<i64>> for StepSet {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        StepSet::new(v)
    }
}

impl From<StepSet> for Vec<i64> {
    fn from(s: StepSet) -> Self {
        s.0.into_iter().collect()
    }
}

/// A step sequence `x(1), ..., x(nu + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Walk(Vec<i64>);

impl Walk {
    pub fn new(steps: Vec<i64>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyWalk);
        }
        for &s in &steps {
            check_step(s)?;
        }
        Ok(Walk(steps))
    }

    pub fn steps(&self) -> &[i64] {
        &self.0
    }

    /// Number of intermediate vertices.
    pub fn nu(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step_sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn negative_steps(&self) -> usize {
        self.0.iter().filter(|&&s| s < 0).count()
    }

    pub fn reflected(&self) -> Self {
        Walk(self.0.iter().map(|s| -s).collect())
    }
}

impl TryFrom<Vec<i64>> for Walk {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Walk::new(v)
    }
}

impl From<Walk> for Vec<i64> {
    fn from(w: Walk) -> Self {
        w.0
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignFilter {
    #[default]
    All,
    PositiveOnly,
    NegativeOnly,
}

impl SignFilter {
    fn admits(self, step: i64) -> bool {
        match self {
            SignFilter::All => true,
            SignFilter::PositiveOnly => step > 0,
            SignFilter::NegativeOnly => step < 0,
        }
    }

    fn reflected(self) -> Self {
        match self {
            SignFilter::All => SignFilter::All,
            SignFilter::PositiveOnly => SignFilter::NegativeOnly,
            SignFilter::NegativeOnly => SignFilter::PositiveOnly,
        }
    }
}

/// Caps for otherwise infinite classes: at most `max_steps` steps, and every
/// vertex within `n + window` of the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    #[serde(rename = "L")]
    pub max_steps: usize,
    #[serde(rename = "W")]
    pub window: u32,
}

/// Declarative description of a family of admissible walks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkClass {
    pub n: u32,
    pub direction: Direction,
    pub steps: StepSet,
    #[serde(default)]
    pub sign_filter: SignFilter,
    /// Exact number of negative steps; only for two-element step sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
    /// Drops the single-step walk (`nu = 0`).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exclude_single_step: bool,
}

/// Why a walk is not a member of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    WrongEndpoint { sum: i64 },
    TouchesBoundary { t: usize, vertex: i64 },
    StepNotPermitted { step: i64 },
    SignFiltered { step: i64 },
    KappaMismatch { expected: u32, found: usize },
    TooLong { len: usize },
    OutsideWindow { t: usize, vertex: i64 },
    SingleStepExcluded,
}

impl Rejection {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Rejection::WrongEndpoint { .. } => "wrong endpoint",
            Rejection::TouchesBoundary { .. } => "touches boundary",
            Rejection::StepNotPermitted { .. } => "step not permitted",
            Rejection::SignFiltered { .. } => "sign filtered",
            Rejection::KappaMismatch { .. } => "kappa mismatch",
            Rejection::TooLong { .. } => "too long",
            Rejection::OutsideWindow { .. } => "outside window",
            Rejection::SingleStepExcluded => "single step excluded",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::WrongEndpoint { sum } => write!(f, "wrong endpoint (step sum {sum})"),
            Rejection::TouchesBoundary { t, vertex } => write!(f, "touches boundary at j({t}) = {vertex}"),
            Rejection::StepNotPermitted { step } => write!(f, "step {step} not permitted"),
            Rejection::SignFiltered { step } => write!(f, "step {step} excluded by sign filter"),
            Rejection::KappaMismatch { expected, found } => {
                write!(f, "kappa mismatch: expected {expected} negative steps, found {found}")
            }
            Rejection::TooLong { len } => write!(f, "too long ({len} steps)"),
            Rejection::OutsideWindow { t, vertex } => write!(f, "outside window at j({t}) = {vertex}"),
            Rejection::SingleStepExcluded => f.write_str("single step excluded"),
        }
    }
}

impl WalkClass {
    pub fn new(n: u32, direction: Direction, steps: StepSet) -> Self {
        WalkClass {
            n,
            direction,
            steps,
            sign_filter: SignFilter::All,
            kappa: None,
            truncation: None,
            exclude_single_step: false,
        }
    }

    /// `X_n^+(F)`: ascending walks with positive steps only.
    pub fn positive(n: u32, steps: StepSet) -> Self {
        Self::new(n, Direction::Ascending, steps).with_sign_filter(SignFilter::PositiveOnly)
    }

    /// `Y_n^-(F)`: descending walks with negative steps only.
    pub fn negative(n: u32, steps: StepSet) -> Self {
        Self::new(n, Direction::Descending, steps).with_sign_filter(SignFilter::NegativeOnly)
    }

    /// `X_n(kappa)` over `{-2R, +2S}`.
    pub fn kappa_class(n: u32, r: u32, s: u32, kappa: u32) -> Result<Self> {
        Ok(Self::new(n, Direction::Ascending, StepSet::two_step(r, s)?).with_kappa(kappa))
    }

    pub fn with_sign_filter(mut self, filter: SignFilter) -> Self {
        self.sign_filter = filter;
        self
    }

    pub fn with_kappa(mut self, kappa: u32) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn truncated(mut self, max_steps: usize, window: u32) -> Self {
        self.truncation = Some(Truncation { max_steps, window });
        self
    }

    pub fn excluding_single_step(mut self, exclude: bool) -> Self {
        self.exclude_single_step = exclude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidClass("n must be positive".into()));
        }
        if self.kappa.is_some() && self.steps.as_two_step().is_none() {
            return Err(Error::InvalidClass("kappa requires a step set {-2R, +2S}".into()));
        }
        if let Some(t) = self.truncation {
            if t.max_steps == 0 {
                return Err(Error::InvalidClass("truncation needs max_steps >= 1".into()));
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.sign_filter != SignFilter::All
            || (self.kappa.is_some() && self.steps.as_two_step().is_some())
            || self.truncation.is_some()
    }

    /// Step reflection `s -> -s` with the direction reversed. `None` for
    /// kappa classes, whose image is not a kappa class.
    pub fn reflected(&self) -> Option<Self> {
        if self.kappa.is_some() {
            return None;
        }
        Some(WalkClass {
            n: self.n,
            direction: self.direction.reversed(),
            steps: self.steps.reflected(),
            sign_filter: self.sign_filter.reflected(),
            kappa: None,
            truncation: self.truncation,
            exclude_single_step: self.exclude_single_step,
        })
    }

    /// Permitted steps after the sign filter, ascending.
    fn allowed_steps(&self) -> Vec<i64> {
        self.steps.iter().filter(|&s| self.sign_filter.admits(s)).collect()
    }

    /// Number of positive steps every member has, for kappa classes.
    fn kappa_positive_count(&self) -> Option<Option<u32>> {
        let kappa = self.kappa?;
        let (r, s) = self.steps.as_two_step()?;
        // 2S q - 2R kappa = +-2n
        let rhs = self.direction.sign() * self.n as i64 + r as i64 * kappa as i64;
        Some((rhs >= 0 && rhs % s as i64 == 0).then(|| (rhs / s as i64) as u32))
    }

    /// Full membership test with a machine-readable reason on failure.
    pub fn check(&self, w: &Walk) -> Result<(), Rejection> {
        for &s in w.steps() {
            if !self.steps.contains(s) {
                return Err(Rejection::StepNotPermitted { step: s });
            }
            if !self.sign_filter.admits(s) {
                return Err(Rejection::SignFiltered { step: s });
            }
        }
        check_admissible(w, self.n, self.direction)?;
        if let Some(kappa) = self.kappa {
            let found = w.negative_steps();
            if found != kappa as usize {
                return Err(Rejection::KappaMismatch { expected: kappa, found });
            }
        }
        if let Some(t) = self.truncation {
            if w.len() > t.max_steps {
                return Err(Rejection::TooLong { len: w.len() });
            }
            let bound = self.n as i64 + t.window as i64;
            let verts = vertices(w, self.n, self.direction);
            for (i, &j) in verts.iter().enumerate().take(w.len()).skip(1) {
                if j.abs() > bound {
                    return Err(Rejection::OutsideWindow { t: i, vertex: j });
                }
            }
        }
        if self.exclude_single_step && w.nu() == 0 {
            return Err(Rejection::SingleStepExcluded);
        }
        Ok(())
    }

    pub fn contains(&self, w: &Walk) -> bool {
        self.check(w).is_ok()
    }
}

/// Vertices `j(0), ..., j(nu + 1)`.
pub fn vertices(w: &Walk, n: u32, direction: Direction) -> Vec<i64> {
    let mut j = direction.start(n);
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(j);
    for &s in w.steps() {
        j += s;
        out.push(j);
    }
    out
}

/// Endpoint and boundary conditions only: the step sum is `±2n` and no
/// intermediate vertex equals `±n`.
pub fn check_admissible(w: &Walk, n: u32, direction: Direction) -> Result<(), Rejection> {
    let sum = w.step_sum();
    if sum != 2 * direction.sign() * n as i64 {
        return Err(Rejection::WrongEndpoint { sum });
    }
    let n = n as i64;
    let verts = vertices(w, n as u32, direction);
    for (t, &j) in verts.iter().enumerate().take(w.len()).skip(1) {
        if j == n || j == -n {
            return Err(Rejection::TouchesBoundary { t, vertex: j });
        }
    }
    Ok(())
}

pub fn is_admissible(w: &Walk, class: &WalkClass) -> bool {
    class.contains(w)
}

/// `h1(x) = prod_{t=1}^{nu} 1 / (n^2 - j(t)^2)`.
pub fn h1(w: &Walk, n: u32, direction: Direction) -> Result<ExactRational> {
    let n2 = (n as i64) * (n as i64);
    let verts = vertices(w, n, direction);
    let mut den = num_bigint::BigInt::from(1);
    for (t, &j) in verts.iter().enumerate().take(w.len()).skip(1) {
        let f = n2 - j * j;
        if f == 0 {
            return Err(Error::VertexOnBoundary { t, vertex: j });
        }
        den *= f;
    }
    ExactRational::new(1, den)
}

/// `h(x) = h1(x) * prod_{t=1}^{nu+1} V(x(t))`, evaluated in the scalar domain `T`.
pub fn h_weight<T: Weight>(w: &Walk, n: u32, direction: Direction, v: &Potential<T>) -> Result<T> {
    let n2 = (n as i64) * (n as i64);
    let verts = vertices(w, n, direction);
    let mut acc = T::one();
    for &s in w.steps() {
        acc = acc.mul(&v.get(s));
    }
    for (t, &j) in verts.iter().enumerate().take(w.len()).skip(1) {
        let f = n2 - j * j;
        if f == 0 {
            return Err(Error::VertexOnBoundary { t, vertex: j });
        }
        acc = acc.div_int(f);
    }
    Ok(acc)
}

/// All walks of a finite class, in lexicographic order of step sequences.
pub fn enumerate_walks(class: &WalkClass) -> Result<Vec<Walk>> {
    class.validate()?;
    if !class.is_finite() {
        return Err(Error::InfiniteClass);
    }
    let n = class.n as i64;
    let dir = class.direction;
    let allowed = class.allowed_steps();

    let mut max_len = usize::MAX;
    if let Some(t) = class.truncation {
        max_len = max_len.min(t.max_steps);
    }
    // Steps that all move toward the target: the walk is monotone and its
    // length is bounded by the distance over the smallest step.
    let monotone = !allowed.is_empty() && allowed.iter().all(|&s| s * dir.sign() > 0);
    let mut positive_quota = None;
    match class.sign_filter {
        SignFilter::All => {}
        _ if !monotone => return Ok(Vec::new()),
        _ => {
            let smallest = allowed.iter().map(|s| s.abs()).min().unwrap_or(2);
            max_len = max_len.min((2 * n / smallest) as usize);
        }
    }
    if let Some(quota) = class.kappa_positive_count() {
        let Some(q) = quota else { return Ok(Vec::new()) };
        let kappa = class.kappa.unwrap_or(0);
        max_len = max_len.min((q + kappa) as usize);
        positive_quota = Some((q, kappa));
    }

    let walker = Enumerator {
        allowed,
        start: dir.start(class.n),
        target: dir.target(class.n),
        dir_sign: dir.sign(),
        monotone,
        max_len,
        window: class.truncation.map(|t| n + t.window as i64),
        quota: positive_quota,
        exclude_single_step: class.exclude_single_step,
    };
    let mut out = Vec::new();
    let mut path = Vec::new();
    walker.descend(walker.start, 0, 0, &mut path, &mut out);
    Ok(out)
}

struct Enumerator {
    allowed: Vec<i64>,
    start: i64,
    target: i64,
    dir_sign: i64,
    monotone: bool,
    max_len: usize,
    window: Option<i64>,
    quota: Option<(u32, u32)>,
    exclude_single_step: bool,
}

impl Enumerator {
    fn descend(&self, j: i64, pos: u32, neg: u32, path: &mut Vec<i64>, out: &mut Vec<Walk>) {
        for &s in &self.allowed {
            let (pos, neg) = if s > 0 { (pos + 1, neg) } else { (pos, neg + 1) };
            if let Some((q, kappa)) = self.quota {
                if pos > q || neg > kappa {
                    continue;
                }
            }
            let next = j + s;
            let len = path.len() + 1;
            if next == self.target {
                let complete = self.quota.is_none_or(|(q, k)| pos == q && neg == k);
                if complete && !(self.exclude_single_step && len == 1) {
                    let mut steps = path.clone();
                    steps.push(s);
                    out.push(Walk(steps));
                }
                continue;
            }
            if next == self.start || len >= self.max_len {
                continue;
            }
            if self.window.is_some_and(|b| next.abs() > b) {
                continue;
            }
            if self.monotone && (next - self.target) * self.dir_sign > 0 {
                continue;
            }
            path.push(s);
            self.descend(next, pos, neg, path, out);
            path.pop();
        }
    }
}

/// Step weights `V(m)`. `V(0) = 0` is implicit; steps without an entry weigh 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<T> {
    values: BTreeMap<i64, T>,
}

/// Exact potential assignment.
pub type PotentialAssignment = Potential<ExactRational>;

impl<T: Weight> Potential<T> {
    pub fn new<I: IntoIterator<Item = (i64, T)>>(values: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (s, v) in values {
            if s == 0 {
                return Err(Error::ZeroStepAssigned);
            }
            map.insert(check_step(s)?, v);
        }
        Ok(Potential { values: map })
    }

    pub fn get(&self, step: i64) -> T {
        self.values.get(&step).cloned().unwrap_or_else(T::zero)
    }

    pub fn assigned(&self, step: i64) -> Option<&T> {
        self.values.get(&step)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &T)> {
        self.values.iter().map(|(&s, v)| (s, v))
    }

    /// `V'(s) = V(-s)`.
    pub fn reflected(&self) -> Self {
        Potential { values: self.values.iter().map(|(&s, v)| (-s, v.clone())).collect() }
    }

    pub fn map<U: Weight>(&self, f: impl Fn(&T) -> U) -> Potential<U> {
        Potential { values: self.values.iter().map(|(&s, v)| (s, f(v))).collect() }
    }

    /// Entries on steps whose sign is opposite to `direction`.
    pub fn backward_is_zero(&self, direction: Direction) -> bool {
        self.values.iter().all(|(&s, v)| s * direction.sign() > 0 || v.is_zero())
    }
}

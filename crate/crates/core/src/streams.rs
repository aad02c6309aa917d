//! Sequences: lazy increasing binary streams, convergent sequences with an
//! explicit modulus, the splice construction, and search oracles over binary
//! streams.
//!
//! Indexing convention: sequence entries are meaningful from index 1
//! upwards. Binary streams answer `false` at index 0.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::interval::RatInterval;
use crate::rational::Rational;
use crate::real::ExactReal;

/// A lazy increasing binary sequence: once a bit is 1, all later bits are 1.
///
/// Construction normalizes any underlying predicate by taking prefix-ors, so
/// the increasing property holds regardless of how the raw bits behave.
/// Queried prefixes are scanned once and cached.
#[derive(Clone)]
pub struct BinarySeq {
    inner: Arc<BinaryInner>,
}

struct BinaryInner {
    raw: Box<dyn Fn(u64) -> bool + Send + Sync>,
    state: Mutex<ScanState>,
}

#[derive(Default)]
struct ScanState {
    scanned_to: u64,
    first_one: Option<u64>,
}

impl BinarySeq {
    /// Normalizes `pred` into an increasing sequence: bit `n` is 1 exactly
    /// when `pred(k)` holds for some `1 <= k <= n`.
    pub fn new(pred: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        BinarySeq {
            inner: Arc::new(BinaryInner {
                raw: Box::new(pred),
                state: Mutex::new(ScanState::default()),
            }),
        }
    }

    /// The all-zero sequence.
    pub fn never() -> Self {
        BinarySeq::new(|_| false)
    }

    /// Zero before `n0`, one from `n0` on. Requires `n0 >= 1`.
    pub fn flip_at(n0: u64) -> Self {
        assert!(n0 >= 1, "flip index must be at least 1");
        BinarySeq::new(move |n| n >= n0)
    }

    fn scan_to(&self, n: u64) {
        let mut st = self.inner.state.lock().unwrap();
        if st.first_one.is_some() || st.scanned_to >= n {
            return;
        }
        let mut k = st.scanned_to + 1;
        while k <= n {
            if (self.inner.raw)(k) {
                st.first_one = Some(k);
                break;
            }
            k += 1;
        }
        st.scanned_to = st.scanned_to.max(k.min(n));
    }

    pub fn bit(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        self.scan_to(n);
        let st = self.inner.state.lock().unwrap();
        matches!(st.first_one, Some(f) if f <= n)
    }

    /// Index of the first 1 among bits `1..=n`, if any.
    pub fn first_one_up_to(&self, n: u64) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.scan_to(n);
        let st = self.inner.state.lock().unwrap();
        st.first_one.filter(|&f| f <= n)
    }
}

impl std::fmt::Debug for BinarySeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let bits: Vec<u8> = (1..=8).map(|n| self.bit(n) as u8).collect();
        write!(f, "BinarySeq{bits:?}…")
    }
}

/// A sequence of exact reals converging to a declared limit, with an
/// explicit modulus: for every `n >= modulus(p)`, the `n`-th term lies
/// within `2^(-p)` of the limit.
#[derive(Clone)]
pub struct ConvergentSeq {
    term: Arc<dyn Fn(u64) -> ExactReal + Send + Sync>,
    modulus: Arc<dyn Fn(u32) -> u64 + Send + Sync>,
    limit: ExactReal,
    memo: Arc<Mutex<BTreeMap<u64, ExactReal>>>,
}

impl ConvergentSeq {
    pub fn new(
        term: impl Fn(u64) -> ExactReal + Send + Sync + 'static,
        limit: ExactReal,
        modulus: impl Fn(u32) -> u64 + Send + Sync + 'static,
    ) -> Self {
        ConvergentSeq {
            term: Arc::new(term),
            modulus: Arc::new(modulus),
            limit,
            memo: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    /// Builds a sequence from terms and modulus alone; the limit point is
    /// reconstructed from late terms by completeness.
    pub fn from_terms(
        term: impl Fn(u64) -> ExactReal + Send + Sync + 'static,
        modulus: impl Fn(u32) -> u64 + Send + Sync + 'static,
    ) -> Self {
        let term: Arc<dyn Fn(u64) -> ExactReal + Send + Sync> = Arc::new(term);
        let modulus: Arc<dyn Fn(u32) -> u64 + Send + Sync> = Arc::new(modulus);
        let (t, m) = (term.clone(), modulus.clone());
        let limit = ExactReal::from_fn(move |p| {
            let q = p + 2;
            let n = m(q);
            let tol = Rational::pow2(-(q as i64));
            t(n).approximate(q).inflate(&tol)
        });
        ConvergentSeq {
            term,
            modulus,
            limit,
            memo: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn term(&self, n: u64) -> ExactReal {
        if let Some(x) = self.memo.lock().unwrap().get(&n) {
            return x.clone();
        }
        let x = (self.term)(n);
        self.memo
            .lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| x.clone());
        x
    }

    pub fn modulus(&self, p: u32) -> u64 {
        (self.modulus)(p)
    }

    /// The declared limit point.
    pub fn limit_point(&self) -> ExactReal {
        self.limit.clone()
    }

    /// The constant sequence at `x` (modulus 0 everywhere).
    pub fn constant(x: ExactReal) -> Self {
        let x2 = x.clone();
        ConvergentSeq::new(move |_| x2.clone(), x, |_| 0)
    }

    /// Drops the first `k` terms. The tail converges to the same limit and
    /// inherits the modulus (shifted, which only makes it more generous).
    pub fn tail(&self, k: u64) -> ConvergentSeq {
        let s = self.clone();
        let m = self.modulus.clone();
        ConvergentSeq::new(
            move |n| s.term(n.saturating_add(k)),
            self.limit.clone(),
            move |p| m(p).saturating_sub(k),
        )
    }
}

impl std::fmt::Debug for ConvergentSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ConvergentSeq(limit {:?})", self.limit)
    }
}

/// The splice of an increasing binary sequence into a convergent sequence.
///
/// Term `n` is the limit of `xs` while the bits are still 0, and freezes at
/// `xs`'s term at the first 1 once the bits have flipped:
///
/// * bits all zero: the spliced sequence is constantly the limit of `xs`;
/// * first 1 at `f`: terms before `f` equal the limit, terms from `f` on
///   equal `xs`'s `f`-th term.
///
/// Either way the result converges with the same modulus as `xs`: past
/// `modulus(p)` every term and the spliced limit are within `2^(-p)` of the
/// limit of `xs`.
pub fn splice(bits: &BinarySeq, xs: &ConvergentSeq) -> ConvergentSeq {
    let bits = bits.clone();
    let xs2 = xs.clone();
    let m = {
        let xs = xs.clone();
        move |p: u32| xs.modulus(p)
    };
    ConvergentSeq::from_terms(
        move |n| match bits.first_one_up_to(n) {
            Some(f) => xs2.term(f),
            None => xs2.limit_point(),
        },
        m,
    )
}

/// Answer from a search over an increasing binary sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    /// Every bit is 0. Only a trusted fixture can assert this.
    AllZero,
    /// The first 1 sits at this index.
    FirstOneAt(u64),
    /// No 1 was found among the first `scanned` bits; nothing further is
    /// claimed.
    Unknown { scanned: u64 },
}

impl OracleAnswer {
    /// Checks the answer against an actual prefix of the sequence. `AllZero`
    /// and `Unknown` are checked on `depth` bits; `FirstOneAt` is checked
    /// exactly.
    pub fn consistent_with(&self, seq: &BinarySeq, depth: u64) -> bool {
        match self {
            OracleAnswer::AllZero => seq.first_one_up_to(depth).is_none(),
            OracleAnswer::FirstOneAt(f) => seq.first_one_up_to(*f) == Some(*f),
            OracleAnswer::Unknown { scanned } => seq.first_one_up_to(*scanned).is_none(),
        }
    }
}

/// Decides (or declines to decide) whether an increasing binary sequence is
/// identically zero.
///
/// The bounded strategy is the honest machine realization: it scans a finite
/// prefix and can therefore report a first 1 or give up, but never certify
/// `AllZero`. The fixture strategy plays the role of the stronger hypothesis
/// assumed by the dichotomies: it is allowed to answer `AllZero`, and its
/// answers are trusted (checked against a prefix in debug builds).
#[derive(Clone)]
pub struct OmniscienceOracle {
    strategy: Strategy,
}

#[derive(Clone)]
enum Strategy {
    Bounded(u64),
    Fixture(OracleAnswer),
}

impl OmniscienceOracle {
    pub fn bounded_search(limit: u64) -> Self {
        OmniscienceOracle {
            strategy: Strategy::Bounded(limit),
        }
    }

    pub fn fixture(answer: OracleAnswer) -> Self {
        OmniscienceOracle {
            strategy: Strategy::Fixture(answer),
        }
    }

    /// True for the trusted strategy, which alone may certify universal or
    /// infinitary claims.
    pub fn is_fixture(&self) -> bool {
        matches!(self.strategy, Strategy::Fixture(_))
    }

    pub fn decide(&self, seq: &BinarySeq) -> OracleAnswer {
        match &self.strategy {
            Strategy::Bounded(limit) => match seq.first_one_up_to(*limit) {
                Some(f) => OracleAnswer::FirstOneAt(f),
                None => OracleAnswer::Unknown { scanned: *limit },
            },
            Strategy::Fixture(ans) => {
                debug_assert!(
                    ans.consistent_with(seq, 64),
                    "fixture oracle answer contradicts the sequence prefix"
                );
                ans.clone()
            }
        }
    }
}

/// A family of points `3·2^(-n)` (for `n >= 2`) marching down to 0, with
/// pairwise disjoint surrounding windows and a computable separation index
/// for positive rationals.
#[derive(Clone, Copy, Debug)]
pub struct SeparatedSeqFixture;

impl SeparatedSeqFixture {
    pub fn geometric_thirds() -> Self {
        SeparatedSeqFixture
    }

    /// Smallest meaningful index.
    pub fn first_index(&self) -> u64 {
        2
    }

    /// The `n`-th point, `3·2^(-n)`. Requires `n >= 2`.
    pub fn point(&self, n: u64) -> Rational {
        assert!(n >= 2, "points are indexed from 2");
        &Rational::from_int(3) * &Rational::pow2(-(n as i64))
    }

    /// Open window `(2·2^(-n), 4·2^(-n))` around the `n`-th point. Windows
    /// of distinct indices are disjoint.
    pub fn window(&self, n: u64) -> (Rational, Rational) {
        assert!(n >= 2);
        (
            &Rational::from_int(2) * &Rational::pow2(-(n as i64)),
            &Rational::from_int(4) * &Rational::pow2(-(n as i64)),
        )
    }

    /// For `x > 0`, the least `n >= 2` with `x > 2^(-(n-2))`; at and beyond
    /// that index every point lies below `x` by more than `2^(-n)`. Returns
    /// `None` for `x <= 0`.
    pub fn separation_index(&self, x: &Rational) -> Option<u64> {
        if !x.is_positive() {
            return None;
        }
        let mut n: u64 = 2;
        while &Rational::pow2(-(n as i64 - 2)) >= x {
            n += 1;
        }
        Some(n)
    }

    /// The points as a sequence converging to 0 (indices below 2 are
    /// clamped).
    pub fn as_convergent(&self) -> ConvergentSeq {
        let fx = *self;
        ConvergentSeq::new(
            move |n| ExactReal::from_rational(fx.point(n.max(2))),
            ExactReal::from_int(0),
            |p| p as u64 + 2,
        )
    }
}

/// Enclosure-level helper: the interval distance `|i - j|` as an interval.
pub fn interval_distance(i: &RatInterval, j: &RatInterval) -> RatInterval {
    i.sub(j).abs()
}

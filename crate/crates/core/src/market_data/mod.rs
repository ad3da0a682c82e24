//! Intraday quote ingestion and per-day return preparation.
//!
//! A [`QuoteSeries`] holds timestamped price quotations grouped by trading
//! day. From it, [`compute_returns`] produces one [`TradingDay`] of log
//! returns per day, and the session operations ([`trim_session`],
//! [`filter_short_sessions`], [`uniformize_periods`]) prepare those days for
//! the estimators: edges are cut because volatility is systematically
//! elevated near the open and close, abnormally short sessions are dropped,
//! and period counts can be uniformized by removing returns nearest midday.

mod io;

pub use io::{parse_quotes, write_quotes_csv, QuoteFormat};

use chrono::{NaiveDate, NaiveTime};

use crate::error::{Error, Result};

/// One intraday price quotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quote {
    pub time: NaiveTime,
    pub price: f64,
}

/// One trading day's quotations, in session order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuoteDay {
    pub date: NaiveDate,
    pub quotes: Vec<Quote>,
}

/// Timestamped intraday price quotations grouped by trading day.
///
/// Invariants (enforced at construction): prices strictly positive and
/// finite, timestamps strictly increasing within a day, days strictly
/// increasing by date.
#[derive(Debug, Clone, PartialEq)]
pub struct QuoteSeries {
    days: Vec<QuoteDay>,
}

impl QuoteSeries {
    pub fn new(days: Vec<QuoteDay>) -> Result<Self> {
        for (prev, next) in days.iter().zip(days.iter().skip(1)) {
            if next.date <= prev.date {
                return Err(Error::Data(format!(
                    "days out of order: {} follows {}",
                    next.date, prev.date
                )));
            }
        }
        for day in &days {
            for quote in &day.quotes {
                if !(quote.price.is_finite() && quote.price > 0.0) {
                    return Err(Error::Data(format!(
                        "non-positive price {} on {} at {}",
                        quote.price, day.date, quote.time
                    )));
                }
            }
            for (prev, next) in day.quotes.iter().zip(day.quotes.iter().skip(1)) {
                if next.time <= prev.time {
                    return Err(Error::Data(format!(
                        "timestamps out of order on {}: {} follows {}",
                        day.date, next.time, prev.time
                    )));
                }
            }
        }
        Ok(QuoteSeries { days })
    }

    pub fn days(&self) -> &[QuoteDay] {
        &self.days
    }

    pub fn n_days(&self) -> usize {
        self.days.len()
    }
}

/// Session preparation parameters.
///
/// `bar_minutes` is the sampling interval of the quotes; `trim_minutes` is
/// cut from each session edge (it must be a whole number of bars);
/// `min_periods` is the threshold below which a session counts as abnormally
/// short.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SessionConfig {
    pub bar_minutes: u32,
    pub trim_minutes: u32,
    pub min_periods: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            bar_minutes: 5,
            trim_minutes: 60,
            min_periods: 40,
        }
    }
}

impl SessionConfig {
    /// Edge trim expressed in bars (returns).
    pub fn trim_bars(&self) -> Result<usize> {
        if self.bar_minutes == 0 {
            return Err(Error::Config("bar_minutes must be positive".into()));
        }
        if self.trim_minutes % self.bar_minutes != 0 {
            return Err(Error::Config(format!(
                "trim of {} minutes is not a whole number of {}-minute bars",
                self.trim_minutes, self.bar_minutes
            )));
        }
        Ok((self.trim_minutes / self.bar_minutes) as usize)
    }
}

/// One day's intraday log returns.
#[derive(Debug, Clone, PartialEq)]
pub struct TradingDay {
    /// 1-based position of the day in its containing collection.
    pub day_index: usize,
    pub date: NaiveDate,
    returns: Vec<f64>,
}

impl TradingDay {
    pub fn new(day_index: usize, date: NaiveDate, returns: Vec<f64>) -> Self {
        TradingDay {
            day_index,
            date,
            returns,
        }
    }

    pub fn returns(&self) -> &[f64] {
        &self.returns
    }

    /// Number of periods (returns) in the day.
    pub fn np(&self) -> usize {
        self.returns.len()
    }
}

/// A day excluded by [`compute_returns`] for having fewer than two quotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedDay {
    pub date: NaiveDate,
    pub quote_count: usize,
}

/// Result of turning quotes into per-day returns.
#[derive(Debug, Clone)]
pub struct ReturnsOutcome {
    pub days: Vec<TradingDay>,
    pub skipped: Vec<SkippedDay>,
}

/// Compute untrimmed log returns for every day: r_j = ln q_{j+1} - ln q_j.
///
/// Days with fewer than two quotes cannot produce a return; they are
/// excluded and reported in [`ReturnsOutcome::skipped`].
pub fn compute_returns(quotes: &QuoteSeries) -> ReturnsOutcome {
    let mut days = Vec::with_capacity(quotes.n_days());
    let mut skipped = Vec::new();
    for day in quotes.days() {
        if day.quotes.len() < 2 {
            skipped.push(SkippedDay {
                date: day.date,
                quote_count: day.quotes.len(),
            });
            continue;
        }
        let returns: Vec<f64> = day
            .quotes
            .windows(2)
            .map(|w| w[1].price.ln() - w[0].price.ln())
            .collect();
        days.push(TradingDay::new(days.len() + 1, day.date, returns));
    }
    ReturnsOutcome { days, skipped }
}

/// Remove the first and last `trim_bars` returns of a session.
pub fn trim_session(day: &TradingDay, cfg: &SessionConfig) -> Result<TradingDay> {
    let trim = cfg.trim_bars()?;
    if trim == 0 {
        return Ok(day.clone());
    }
    let np = day.np();
    if np <= 2 * trim {
        return Err(Error::ShortSession {
            np,
            min_np: 2 * trim,
        });
    }
    Ok(TradingDay::new(
        day.day_index,
        day.date,
        day.returns[trim..np - trim].to_vec(),
    ))
}

/// Partition days into (kept, dropped) by the `min_periods` threshold.
///
/// `kept` and `dropped` together contain every input day, in order.
pub fn filter_short_sessions(
    days: Vec<TradingDay>,
    cfg: &SessionConfig,
) -> (Vec<TradingDay>, Vec<TradingDay>) {
    days.into_iter().partition(|d| d.np() >= cfg.min_periods)
}

/// Reduce a day to exactly `target` returns by dropping those nearest the
/// session midpoint.
///
/// Removal is symmetric around the midpoint where possible; on a distance
/// tie the later index is dropped first. Day-edge returns are the farthest
/// from the midpoint and therefore always survive.
pub fn uniformize_periods(day: &TradingDay, target: usize) -> Result<TradingDay> {
    let np = day.np();
    if target == 0 {
        return Err(Error::Config("uniformization target must be positive".into()));
    }
    if np < target {
        return Err(Error::InsufficientPeriods { np, target });
    }
    if np == target {
        return Ok(day.clone());
    }
    let mid = (np as f64 - 1.0) / 2.0;
    let mut order: Vec<usize> = (0..np).collect();
    order.sort_by(|&a, &b| {
        let da = (a as f64 - mid).abs();
        let db = (b as f64 - mid).abs();
        da.partial_cmp(&db).unwrap().then(b.cmp(&a))
    });
    let mut drop = vec![false; np];
    for &idx in &order[..np - target] {
        drop[idx] = true;
    }
    let kept: Vec<f64> = day
        .returns
        .iter()
        .zip(&drop)
        .filter(|(_, &d)| !d)
        .map(|(&r, _)| r)
        .collect();
    Ok(TradingDay::new(day.day_index, day.date, kept))
}

/// A day whose quote spacing deviates from the configured bar interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapEntry {
    pub date: NaiveDate,
    /// Number of consecutive-quote intervals that are not `bar_minutes` long.
    pub irregular_intervals: usize,
}

/// Flag days whose quotes are not uniformly spaced at the configured bar.
///
/// Gaps are not repaired: the return over a gap spans it, covering a longer
/// interval than one bar. This report lets callers surface such days.
pub fn gap_report(quotes: &QuoteSeries, cfg: &SessionConfig) -> Vec<GapEntry> {
    let bar = chrono::Duration::minutes(i64::from(cfg.bar_minutes));
    quotes
        .days()
        .iter()
        .filter_map(|day| {
            let irregular = day
                .quotes
                .windows(2)
                .filter(|w| w[1].time - w[0].time != bar)
                .count();
            (irregular > 0).then_some(GapEntry {
                date: day.date,
                irregular_intervals: irregular,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    pub(crate) fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn day_from_prices(prices: &[f64]) -> QuoteSeries {
        let t0 = NaiveTime::from_hms_opt(9, 30, 0).unwrap();
        let quotes = prices
            .iter()
            .enumerate()
            .map(|(j, &p)| Quote {
                time: t0 + chrono::Duration::minutes(5 * j as i64),
                price: p,
            })
            .collect();
        QuoteSeries::new(vec![QuoteDay {
            date: date("2000-01-03"),
            quotes,
        }])
        .unwrap()
    }

    fn synthetic_day(np: usize) -> TradingDay {
        let returns = (0..np).map(|j| 1e-3 * (j as f64 + 1.0)).collect();
        TradingDay::new(1, date("2000-01-03"), returns)
    }

    #[test]
    fn quote_series_rejects_nonpositive_price() {
        let t = NaiveTime::from_hms_opt(9, 30, 0).unwrap();
        let err = QuoteSeries::new(vec![QuoteDay {
            date: date("2000-01-03"),
            quotes: vec![Quote { time: t, price: 0.0 }],
        }])
        .unwrap_err();
        assert!(matches!(err, Error::Data(_)));
    }

    #[test]
    fn quote_series_rejects_out_of_order_dates() {
        let t = NaiveTime::from_hms_opt(9, 30, 0).unwrap();
        let mk = |d: &str| QuoteDay {
            date: date(d),
            quotes: vec![Quote { time: t, price: 1.0 }],
        };
        let err = QuoteSeries::new(vec![mk("2000-01-04"), mk("2000-01-03")]).unwrap_err();
        assert!(matches!(err, Error::Data(_)));
    }

    #[test]
    fn returns_identity_and_unit_cases() {
        let out = compute_returns(&day_from_prices(&[100.0, 100.0]));
        assert_relative_eq!(out.days[0].returns()[0], 0.0);

        let out = compute_returns(&day_from_prices(&[100.0, 100.0 * std::f64::consts::E]));
        assert_relative_eq!(out.days[0].returns()[0], 1.0, max_relative = 1e-12);
    }

    #[test]
    fn returns_hand_arithmetic() {
        let out = compute_returns(&day_from_prices(&[100.0, 102.0, 99.0]));
        let r = out.days[0].returns();
        assert_relative_eq!(r[0], 0.019802627296179712, max_relative = 1e-12);
        assert_relative_eq!(r[1], -0.029852963150298857, max_relative = 1e-12);
    }

    #[test]
    fn single_quote_day_is_skipped_with_report() {
        let t = NaiveTime::from_hms_opt(9, 30, 0).unwrap();
        let quotes = QuoteSeries::new(vec![
            QuoteDay {
                date: date("2000-01-03"),
                quotes: vec![Quote { time: t, price: 100.0 }],
            },
            QuoteDay {
                date: date("2000-01-04"),
                quotes: vec![
                    Quote { time: t, price: 100.0 },
                    Quote {
                        time: t + chrono::Duration::minutes(5),
                        price: 101.0,
                    },
                ],
            },
        ])
        .unwrap();
        let out = compute_returns(&quotes);
        assert_eq!(out.days.len(), 1);
        assert_eq!(out.skipped, vec![SkippedDay { date: date("2000-01-03"), quote_count: 1 }]);
        assert_eq!(out.days[0].day_index, 1);
    }

    #[test]
    fn trim_matches_session_period_counts() {
        let cfg = SessionConfig::default(); // 12 bars per edge
        assert_eq!(trim_session(&synthetic_day(78), &cfg).unwrap().np(), 54);
        assert_eq!(trim_session(&synthetic_day(72), &cfg).unwrap().np(), 48);

        let no_trim = SessionConfig { trim_minutes: 0, ..cfg };
        let day = synthetic_day(78);
        assert_eq!(trim_session(&day, &no_trim).unwrap(), day);
    }

    #[test]
    fn trim_keeps_interior_returns() {
        let cfg = SessionConfig { bar_minutes: 5, trim_minutes: 10, min_periods: 0 };
        let day = synthetic_day(6);
        let trimmed = trim_session(&day, &cfg).unwrap();
        assert_eq!(trimmed.returns(), &day.returns()[2..4]);
    }

    #[test]
    fn trim_rejects_short_day_and_bad_bar_multiple() {
        let cfg = SessionConfig::default();
        assert!(matches!(
            trim_session(&synthetic_day(24), &cfg),
            Err(Error::ShortSession { np: 24, min_np: 24 })
        ));
        let bad = SessionConfig { bar_minutes: 7, trim_minutes: 60, min_periods: 0 };
        assert!(matches!(trim_session(&synthetic_day(78), &bad), Err(Error::Config(_))));
    }

    #[test]
    fn filter_partitions_by_min_periods() {
        let cfg = SessionConfig { min_periods: 40, ..SessionConfig::default() };
        let days = vec![synthetic_day(54), synthetic_day(20), synthetic_day(54)];
        let (kept, dropped) = filter_short_sessions(days.clone(), &cfg);
        assert_eq!(kept.len(), 2);
        assert_eq!(dropped.len(), 1);
        assert_eq!(dropped[0].np(), 20);

        let all = SessionConfig { min_periods: 0, ..SessionConfig::default() };
        let (kept, dropped) = filter_short_sessions(days.clone(), &all);
        assert_eq!(kept, days);
        assert!(dropped.is_empty());
    }

    #[test]
    fn uniformize_drops_midday_first() {
        // np=72 -> one drop: indices 35/36 tie at the midpoint, later goes.
        let day = synthetic_day(72);
        let out = uniformize_periods(&day, 71).unwrap();
        assert_eq!(out.np(), 71);
        let mut expected = day.returns().to_vec();
        expected.remove(36);
        assert_eq!(out.returns(), expected.as_slice());

        // np=78 -> the seven dropped indices are the contiguous block 36..=42.
        let day = synthetic_day(78);
        let out = uniformize_periods(&day, 71).unwrap();
        let mut expected = day.returns().to_vec();
        expected.drain(36..=42);
        assert_eq!(out.returns(), expected.as_slice());

        // endpoints survive even extreme reduction
        let day = synthetic_day(9);
        let out = uniformize_periods(&day, 2).unwrap();
        assert_eq!(out.returns(), &[day.returns()[0], day.returns()[8]]);
    }

    #[test]
    fn uniformize_identity_and_error() {
        let day = synthetic_day(71);
        assert_eq!(uniformize_periods(&day, 71).unwrap(), day);
        assert!(matches!(
            uniformize_periods(&day, 72),
            Err(Error::InsufficientPeriods { np: 71, target: 72 })
        ));
    }

    #[test]
    fn gap_report_flags_irregular_spacing() {
        let t0 = NaiveTime::from_hms_opt(9, 30, 0).unwrap();
        let mk = |mins: i64, price: f64| Quote {
            time: t0 + chrono::Duration::minutes(mins),
            price,
        };
        let quotes = QuoteSeries::new(vec![QuoteDay {
            date: date("2000-01-03"),
            quotes: vec![mk(0, 100.0), mk(5, 101.0), mk(15, 100.5), mk(20, 100.7)],
        }])
        .unwrap();
        let report = gap_report(&quotes, &SessionConfig::default());
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].irregular_intervals, 1);
    }

    proptest! {
        // exponentiating cumulative sums of returns recovers prices up to
        // the (shared) first price
        #[test]
        fn prices_round_trip_through_returns(
            steps in proptest::collection::vec(-0.05f64..0.05, 1..80),
            base in 10.0f64..1000.0,
        ) {
            let mut prices = vec![base];
            for s in &steps {
                let next = prices.last().unwrap() * s.exp();
                prices.push(next);
            }
            let out = compute_returns(&day_from_prices(&prices));
            let day = &out.days[0];
            let mut acc = 0.0;
            for (j, r) in day.returns().iter().enumerate() {
                acc += r;
                let recovered = base * acc.exp();
                prop_assert!((recovered - prices[j + 1]).abs() / prices[j + 1] < 1e-12);
            }
        }

        #[test]
        fn filter_is_a_partition(nps in proptest::collection::vec(1usize..100, 0..30), min in 0usize..100) {
            let days: Vec<TradingDay> = nps.iter().map(|&np| synthetic_day(np)).collect();
            let cfg = SessionConfig { min_periods: min, ..SessionConfig::default() };
            let (kept, dropped) = filter_short_sessions(days.clone(), &cfg);
            prop_assert_eq!(kept.len() + dropped.len(), days.len());
            prop_assert!(kept.iter().all(|d| d.np() >= min));
            prop_assert!(dropped.iter().all(|d| d.np() < min));
        }

        #[test]
        fn uniformize_identity_at_full_target(np in 1usize..120) {
            let day = synthetic_day(np);
            prop_assert_eq!(uniformize_periods(&day, np).unwrap(), day);
        }

        #[test]
        fn uniformize_keeps_edges_and_order(np in 3usize..120, shrink in 1usize..40) {
            let target = np.saturating_sub(shrink).max(2);
            let day = synthetic_day(np);
            let out = uniformize_periods(&day, target).unwrap();
            prop_assert_eq!(out.np(), target);
            prop_assert_eq!(out.returns()[0], day.returns()[0]);
            prop_assert_eq!(*out.returns().last().unwrap(), *day.returns().last().unwrap());
            // kept returns appear in original order (values are strictly increasing)
            let sorted = out.returns().windows(2).all(|w| w[0] < w[1]);
            prop_assert!(sorted);
        }
    }
}

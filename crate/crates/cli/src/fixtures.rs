//! Synthetic benchmark events with archetypal 7-day traffic shapes.

use chrono::NaiveDate;
use groupsim_core::model::{
    validate_event, CountryCode, Domain, EventRecord, GroundTruth, Platform,
};
use groupsim_core::reasoning::HeatSchedule;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Traffic-curve archetypes observed in real events: an ordinary event
/// peaking on day 2, a hot event peaking on day 3, and an explosive two-peak
/// event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Archetype {
    SinglePeakDay2,
    SinglePeakDay3,
    DoublePeak,
}

impl Archetype {
    pub const ALL: [Archetype; 3] = [
        Archetype::SinglePeakDay2,
        Archetype::SinglePeakDay3,
        Archetype::DoublePeak,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Archetype::SinglePeakDay2 => "single_peak_day2",
            Archetype::SinglePeakDay3 => "single_peak_day3",
            Archetype::DoublePeak => "double_peak",
        }
    }

    /// The heat schedule whose shape matches this archetype.
    pub fn heat_schedule(self) -> HeatSchedule {
        match self {
            Archetype::SinglePeakDay2 => HeatSchedule::SingleImpulse { peak_day: 2 },
            Archetype::SinglePeakDay3 => HeatSchedule::SingleImpulse { peak_day: 3 },
            Archetype::DoublePeak => HeatSchedule::DoubleImpulse,
        }
    }

    fn story(self) -> (&'static str, &'static str) {
        match self {
            Archetype::SinglePeakDay2 => (
                "Hundreds of freshmen forfeited admission after missing enrollment deadlines",
                "A university announced that hundreds of freshmen forfeited their admission for failing to enroll on time, drawing steady attention before interest faded.",
            ),
            Archetype::SinglePeakDay3 => (
                "Professor dismissed after academic dishonesty investigation",
                "A professor was dismissed following an academic dishonesty inquiry; discussion built for days before the story peaked.",
            ),
            Archetype::DoublePeak => (
                "School cafeteria reported serving spoiled pork",
                "A school cafeteria was reported to have served spoiled pork; an official statement days later reignited the outrage with a second flood of traffic.",
            ),
        }
    }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn jittered(rng: &mut ChaCha8Rng, bound: f64) -> f64 {
    1.0 + (unit(rng) * 2.0 - 1.0) * bound
}

/// Build a synthetic event whose ground truth follows the archetype's peak
/// structure for every seed.
///
/// `scale` sets the magnitude: peak-day views land near `3 * scale`.
pub fn make_fixture(archetype: Archetype, scale: u64, seed: u64) -> Result<EventRecord, CliError> {
    if scale == 0 {
        return Err(CliError::Validation("fixture scale must be > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6669_7874_7572_65u64);
    let base = archetype.heat_schedule().values();

    let mut views = Vec::with_capacity(base.len());
    let mut likes = Vec::with_capacity(base.len());
    let mut comments = Vec::with_capacity(base.len());
    let mut shares = Vec::with_capacity(base.len());
    for &b in &base {
        // Day-shape jitter stays well inside the >= 1.4x gaps between
        // adjacent schedule values, so the peak structure survives any seed.
        let v = (scale as f64 * b * jittered(&mut rng, 0.08))
            .round()
            .max(0.0);
        let l = (v * 0.075 * jittered(&mut rng, 0.05)).floor();
        let c = (l * 0.45 * jittered(&mut rng, 0.05)).floor();
        let s = (l * 0.35 * jittered(&mut rng, 0.05)).floor();
        views.push(v as i64);
        likes.push(l as i64);
        comments.push(c as i64);
        shares.push(s as i64);
    }

    let (title, content) = archetype.story();
    let record = EventRecord {
        id: format!("fixture-{}-s{seed}", archetype.as_str()),
        title: title.into(),
        content: content.into(),
        domain: Domain::Education,
        country: CountryCode::new("CN").expect("static code"),
        platform: Platform::Weibo,
        start_date: NaiveDate::from_ymd_opt(2024, 3, 12).expect("static date"),
        ground_truth: GroundTruth {
            views,
            likes,
            comments,
            shares,
        },
    };
    validate_event(record).map_err(|e| CliError::Validation(e.to_string()))
}

/// Indices of strict local maxima in a series.
pub fn local_maxima(values: &[i64]) -> Vec<usize> {
    (0..values.len())
        .filter(|&i| {
            let left_ok = i == 0 || values[i] > values[i - 1];
            let right_ok = i + 1 == values.len() || values[i] > values[i + 1];
            left_ok && right_ok
        })
        .collect()
}

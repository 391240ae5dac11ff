//! Meeting scheduling: place meetings into rooms and start times so that
//! total attendee participation is maximal.

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Generated, Solution};
use crate::answer::{CandidateAnswer, Checker, ScheduleEntry, VerifyOutcome};
use crate::error::{EngineError, Result};
use crate::rng::Stream;
use crate::task::Difficulty;

pub const DAY_START: u32 = 900;
pub const DAY_END: u32 = 1700;
/// Baseline start-time granularity in minutes.
pub const GRID_MINUTES: u32 = 15;
const IMPROVEMENT_ROUNDS: usize = 200;
const DURATIONS: [u32; 5] = [30, 45, 60, 90, 120];

/// Converts an HHMM clock value to minutes since midnight.
pub fn hhmm_to_minutes(t: u32) -> Option<u32> {
    let (h, m) = (t / 100, t % 100);
    if m >= 60 || h > 24 || (h == 24 && m > 0) {
        None
    } else {
        Some(h * 60 + m)
    }
}

pub fn minutes_to_hhmm(minutes: u32) -> u32 {
    (minutes / 60) * 100 + minutes % 60
}

/// HHMM plus a duration with minute carry (`930 + 45min = 1015`).
pub fn add_minutes(t: u32, minutes: u32) -> Option<u32> {
    let total = hhmm_to_minutes(t)? + minutes;
    (total <= 24 * 60).then(|| minutes_to_hhmm(total))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(Vec<usize>, u32)", into = "(Vec<usize>, u32)")]
pub struct Meeting {
    pub attendees: Vec<usize>,
    /// Minutes.
    pub duration: u32,
}

impl From<(Vec<usize>, u32)> for Meeting {
    fn from((attendees, duration): (Vec<usize>, u32)) -> Self {
        Meeting { attendees, duration }
    }
}

impl From<Meeting> for (Vec<usize>, u32) {
    fn from(m: Meeting) -> Self {
        (m.attendees, m.duration)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMsp", into = "RawMsp")]
pub struct MspPayload {
    pub meetings: Vec<Meeting>,
    /// Per attendee, disjoint HHMM `(start, end)` intervals.
    pub availability: Vec<Vec<(u32, u32)>>,
    /// Room capacities in persons.
    pub rooms: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawMsp {
    #[serde(with = "crate::keyed")]
    meetings: Vec<Meeting>,
    #[serde(with = "crate::keyed")]
    availability: Vec<Vec<(u32, u32)>>,
    #[serde(with = "crate::keyed")]
    rooms: Vec<u32>,
}

impl From<MspPayload> for RawMsp {
    fn from(p: MspPayload) -> Self {
        RawMsp {
            meetings: p.meetings,
            availability: p.availability,
            rooms: p.rooms,
        }
    }
}

impl TryFrom<RawMsp> for MspPayload {
    type Error = EngineError;

    fn try_from(raw: RawMsp) -> Result<Self> {
        let p = MspPayload {
            meetings: raw.meetings,
            availability: raw.availability,
            rooms: raw.rooms,
        };
        p.validate()?;
        Ok(p)
    }
}

impl MspPayload {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(EngineError::payload("meeting_scheduling", m));
        for (id, m) in self.meetings.iter().enumerate() {
            if m.duration == 0 {
                return err(format!("meeting {id} has zero duration"));
            }
            let mut seen = m.attendees.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != m.attendees.len() || m.attendees.is_empty() {
                return err(format!("meeting {id} has an empty or repeated attendee list"));
            }
            if let Some(a) = m.attendees.iter().find(|&&a| a >= self.availability.len()) {
                return err(format!("meeting {id} references unknown attendee {a}"));
            }
        }
        for (a, intervals) in self.availability.iter().enumerate() {
            let mut mins = Vec::new();
            for &(s, e) in intervals {
                match (hhmm_to_minutes(s), hhmm_to_minutes(e)) {
                    (Some(s), Some(e)) if s < e => mins.push((s, e)),
                    _ => return err(format!("attendee {a} has invalid interval ({s}, {e})")),
                }
            }
            mins.sort_unstable();
            if mins.windows(2).any(|w| w[0].1 > w[1].0) {
                return err(format!("attendee {a} has overlapping intervals"));
            }
        }
        if let Some(r) = self.rooms.iter().position(|&c| c == 0) {
            return err(format!("room {r} has zero capacity"));
        }
        Ok(())
    }

    fn available(&self, attendee: usize, start: u32, end: u32) -> bool {
        self.availability[attendee].iter().any(|&(s, e)| {
            let (s, e) = (hhmm_to_minutes(s).unwrap(), hhmm_to_minutes(e).unwrap());
            s <= start && end <= e
        })
    }

    pub fn participation(&self, meeting: usize) -> u64 {
        self.meetings[meeting].attendees.len() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MspParams {
    pub meetings: (usize, usize),
    pub attendees: (usize, usize),
    pub rooms: (usize, usize),
    pub max_per_meeting: usize,
    /// Probability that an attendee's day is split in two.
    pub fragmentation: f64,
    /// Room capacities are drawn from `2..=max_per_meeting + slack`.
    pub capacity_slack: u32,
}

impl MspParams {
    pub fn for_tier(d: Difficulty) -> Self {
        d.pick([
            MspParams {
                meetings: (4, 5),
                attendees: (3, 5),
                rooms: (3, 4),
                max_per_meeting: 3,
                fragmentation: 0.0,
                capacity_slack: 1,
            },
            MspParams {
                meetings: (5, 6),
                attendees: (4, 6),
                rooms: (4, 5),
                max_per_meeting: 4,
                fragmentation: 0.3,
                capacity_slack: 1,
            },
            MspParams {
                meetings: (6, 7),
                attendees: (5, 7),
                rooms: (5, 6),
                max_per_meeting: 4,
                fragmentation: 0.4,
                capacity_slack: 0,
            },
            MspParams {
                meetings: (8, 10),
                attendees: (7, 9),
                rooms: (6, 7),
                max_per_meeting: 5,
                fragmentation: 0.5,
                capacity_slack: 0,
            },
        ])
    }
}

fn sample_availability(rng: &mut Stream, params: &MspParams) -> Vec<(u32, u32)> {
    if rng.gen_bool(params.fragmentation) {
        let lunch = *[1130, 1200, 1230].choose(rng).unwrap();
        let back = add_minutes(lunch, *[60, 90].choose(rng).unwrap()).unwrap();
        vec![(DAY_START, lunch), (back, DAY_END)]
    } else if rng.gen_bool(0.7) {
        vec![(DAY_START, DAY_END)]
    } else {
        let s = *[900, 930, 1000].choose(rng).unwrap();
        let e = *[1500, 1600, 1700].choose(rng).unwrap();
        vec![(s, e)]
    }
}

fn sample_payload(rng: &mut Stream, params: &MspParams) -> MspPayload {
    let meetings = rng.gen_range(params.meetings.0..=params.meetings.1);
    let attendees = rng.gen_range(params.attendees.0..=params.attendees.1);
    let rooms = rng.gen_range(params.rooms.0..=params.rooms.1);
    let max_per = params.max_per_meeting.min(attendees);
    let availability = (0..attendees).map(|_| sample_availability(rng, params)).collect();
    let meetings = (0..meetings)
        .map(|_| {
            let size = rng.gen_range(2.min(max_per)..=max_per);
            let mut who = (0..attendees).choose_multiple(rng, size);
            who.sort_unstable();
            Meeting {
                attendees: who,
                duration: *DURATIONS.choose(rng).unwrap(),
            }
        })
        .collect();
    let cap_hi = params.max_per_meeting as u32 + params.capacity_slack;
    let mut rooms: Vec<u32> = (0..rooms).map(|_| rng.gen_range(2..=cap_hi)).collect();
    let big = rng.gen_range(0..rooms.len());
    rooms[big] = rooms[big].max(params.max_per_meeting as u32);
    MspPayload {
        meetings,
        availability,
        rooms,
    }
}

/// Samples a payload; resamples until the baseline places at least one
/// meeting.
pub fn generate_msp(d: Difficulty, rng: &mut Stream) -> Generated<MspPayload> {
    let params = MspParams::for_tier(d);
    loop {
        let payload = sample_payload(rng, &params);
        if baseline_msp(&payload).value > 0 {
            return Generated {
                payload,
                planted: None,
            };
        }
    }
}

pub fn verify_msp(p: &MspPayload, schedule: &[ScheduleEntry]) -> VerifyOutcome {
    let mut c = Checker::new();
    let mut seen = vec![false; p.meetings.len()];
    // (meeting, room, start, end) in minutes, for entries that passed the id checks
    let mut placed: Vec<(usize, usize, u32, u32)> = Vec::new();
    for (pos, e) in schedule.iter().enumerate() {
        if pos > 0 && schedule[pos - 1].start > e.start {
            c.fail(
                "unsorted",
                format!("entry {pos} starts at {} before the previous entry", e.start),
            );
        }
        if e.meeting >= p.meetings.len() {
            c.fail("out-of-range", format!("meeting {} does not exist", e.meeting));
            continue;
        }
        if e.room >= p.rooms.len() {
            c.fail("out-of-range", format!("room {} does not exist", e.room));
            continue;
        }
        if seen[e.meeting] {
            c.fail("duplicate", format!("meeting {} scheduled more than once", e.meeting));
            continue;
        }
        seen[e.meeting] = true;
        let meeting = &p.meetings[e.meeting];
        let Some(start) = hhmm_to_minutes(e.start) else {
            c.fail("invalid-time", format!("{} is not an HHMM clock time", e.start));
            continue;
        };
        let end = start + meeting.duration;
        for &a in &meeting.attendees {
            if !p.available(a, start, end) {
                c.fail(
                    "unavailable",
                    format!(
                        "attendee {a} is not available for meeting {} from {} to {}",
                        e.meeting,
                        e.start,
                        minutes_to_hhmm(end)
                    ),
                );
            }
        }
        if (p.rooms[e.room] as usize) < meeting.attendees.len() {
            c.fail(
                "capacity",
                format!(
                    "room {} holds {} but meeting {} has {} attendees",
                    e.room,
                    p.rooms[e.room],
                    e.meeting,
                    meeting.attendees.len()
                ),
            );
        }
        placed.push((e.meeting, e.room, start, end));
    }
    for (i, &(m1, r1, s1, e1)) in placed.iter().enumerate() {
        for &(m2, r2, s2, e2) in &placed[i + 1..] {
            if s1 >= e2 || s2 >= e1 {
                continue;
            }
            if r1 == r2 {
                c.fail("room-overlap", format!("meetings {m1} and {m2} overlap in room {r1}"));
            }
            let shared = p.meetings[m1]
                .attendees
                .iter()
                .find(|a| p.meetings[m2].attendees.contains(a));
            if let Some(a) = shared {
                c.fail(
                    "attendee-overlap",
                    format!("attendee {a} is in overlapping meetings {m1} and {m2}"),
                );
            }
        }
    }
    c.finish(|| placed.iter().map(|&(m, ..)| p.participation(m)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Placement {
    meeting: usize,
    room: usize,
    start: u32,
    end: u32,
}

fn conflicts(p: &MspPayload, placed: &[Placement], cand: &Placement) -> bool {
    placed.iter().any(|o| {
        cand.start < o.end
            && o.start < cand.end
            && (o.room == cand.room
                || p.meetings[o.meeting]
                    .attendees
                    .iter()
                    .any(|a| p.meetings[cand.meeting].attendees.contains(a)))
    })
}

/// First conflict-free (start, room) on the grid, scanning start times
/// in order and rooms by id.
fn first_fit(p: &MspPayload, placed: &[Placement], meeting: usize) -> Option<Placement> {
    let m = &p.meetings[meeting];
    let (lo, hi) = p
        .availability
        .iter()
        .flatten()
        .fold((u32::MAX, 0), |(lo, hi), &(s, e)| {
            (lo.min(hhmm_to_minutes(s).unwrap()), hi.max(hhmm_to_minutes(e).unwrap()))
        });
    let mut start = lo.div_ceil(GRID_MINUTES) * GRID_MINUTES;
    while start + m.duration <= hi {
        let end = start + m.duration;
        if m.attendees.iter().all(|&a| p.available(a, start, end)) {
            for room in 0..p.rooms.len() {
                if (p.rooms[room] as usize) < m.attendees.len() {
                    continue;
                }
                let cand = Placement {
                    meeting,
                    room,
                    start,
                    end,
                };
                if !conflicts(p, placed, &cand) {
                    return Some(cand);
                }
            }
        }
        start += GRID_MINUTES;
    }
    None
}

/// Greedy placement (largest meetings first, then longest) followed by
/// single-meeting reschedule/swap moves until nothing improves.
pub fn baseline_msp(p: &MspPayload) -> Solution {
    let mut order: Vec<usize> = (0..p.meetings.len()).collect();
    order.sort_by_key(|&m| {
        (
            std::cmp::Reverse(p.meetings[m].attendees.len()),
            std::cmp::Reverse(p.meetings[m].duration),
            m,
        )
    });
    let mut placed: Vec<Placement> = Vec::new();
    for &m in &order {
        if let Some(pl) = first_fit(p, &placed, m) {
            placed.push(pl);
        }
    }

    for _ in 0..IMPROVEMENT_ROUNDS {
        if !improve_once(p, &order, &mut placed) {
            break;
        }
    }

    placed.sort_by_key(|pl| (pl.start, pl.meeting));
    let value = placed.iter().map(|pl| p.participation(pl.meeting)).sum();
    Solution {
        answer: CandidateAnswer::Schedule(
            placed
                .iter()
                .map(|pl| ScheduleEntry {
                    meeting: pl.meeting,
                    room: pl.room,
                    start: minutes_to_hhmm(pl.start),
                })
                .collect(),
        ),
        value,
    }
}

/// Tries to fit one unscheduled meeting by moving or evicting a single
/// scheduled one. Every accepted move strictly raises participation.
fn improve_once(p: &MspPayload, order: &[usize], placed: &mut Vec<Placement>) -> bool {
    for &u in order {
        if placed.iter().any(|pl| pl.meeting == u) {
            continue;
        }
        if let Some(pl) = first_fit(p, placed, u) {
            placed.push(pl);
            return true;
        }
        for idx in 0..placed.len() {
            let evicted = placed[idx].meeting;
            let mut trial = placed.clone();
            trial.remove(idx);
            let Some(pu) = first_fit(p, &trial, u) else {
                continue;
            };
            trial.push(pu);
            if let Some(ps) = first_fit(p, &trial, evicted) {
                trial.push(ps);
                *placed = trial;
                return true;
            }
            if p.participation(u) > p.participation(evicted) {
                *placed = trial;
                return true;
            }
        }
    }
    false
}

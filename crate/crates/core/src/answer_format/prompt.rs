//! Prompt rendering. Each prompt is a task statement, an answer format with
//! an example, the instance data and the closing instruction sentence.

use std::fmt::Write;

use crate::graph::UndirectedGraph;
use crate::tasks::Payload;
use crate::task::TaskKind;

pub const INSTRUCTION: &str = "Please think step by step and output the chain of thought, \
and your response should end with: Answer: YOUR ANSWER";

/// The example answer literal quoted in each task's format description.
pub fn format_example(task: TaskKind) -> &'static str {
    match task {
        TaskKind::MaxClique => "[0, 1, 3, 4]",
        TaskKind::MaxIndependentSet => "[0, 3]",
        TaskKind::GraphColoring => "[1, 2, 1, 2]",
        TaskKind::MeetingScheduling => "[(0, 0, 900), (1, 1, 1000), (2, 0, 1030)]",
        TaskKind::BalancedBisection => "[[0, 1, 2], [3, 4, 5]]",
        TaskKind::SubsetSum => "[0, 1, 4]",
        TaskKind::SetCover => "[0, 3]",
        TaskKind::Knapsack => "[0, 2, 3]",
        TaskKind::Tsp => "[0, 1, 3, 2, 0]",
        TaskKind::HamiltonianCycle => "[0, 2, 5, 1]",
    }
}

fn statement(task: TaskKind) -> &'static str {
    match task {
        TaskKind::MaxClique => {
            "Find a maximum clique in the undirected graph below: the largest set of vertices \
             in which every pair of distinct vertices is connected by an edge."
        }
        TaskKind::MaxIndependentSet => {
            "Find a maximum independent set in the undirected graph below: the largest set of \
             vertices in which no two vertices are adjacent."
        }
        TaskKind::GraphColoring => {
            "Assign a color to every vertex of the undirected graph below so that no two \
             adjacent vertices share a color, using as few distinct colors as possible."
        }
        TaskKind::MeetingScheduling => {
            "Assign meetings to rooms and start times to maximize total attendee participation \
             (the sum of attendee counts over scheduled meetings). Every attendee of a scheduled \
             meeting must be available for its entire duration, the room capacity must cover \
             all attendees, and no attendee or room may be booked for overlapping meetings. \
             Meetings that cannot be scheduled are omitted. Times are written as HHMM."
        }
        TaskKind::BalancedBisection => {
            "Partition the vertices of the weighted undirected graph below into two disjoint \
             sets whose sizes differ by at most one, minimizing the total weight of edges \
             that cross between the two sets."
        }
        TaskKind::SubsetSum => {
            "Find an index set of the numbers below whose values sum exactly to the target T. \
             Among all such index sets, use as many numbers as possible."
        }
        TaskKind::SetCover => {
            "Select the smallest collection of the subsets below whose union equals the \
             universe U. If no such selection exists, the answer should be \"Impossible\"."
        }
        TaskKind::Knapsack => {
            "Select items to maximize total value without the total weight exceeding the \
             knapsack capacity W. Each item is listed as (weight, value)."
        }
        TaskKind::Tsp => {
            "Find the shortest tour over the cities below that starts and ends at the same \
             city and visits every other city exactly once. Distances are symmetric."
        }
        TaskKind::HamiltonianCycle => {
            "Find a simple cycle in the undirected graph below that visits as many vertices as \
             possible, each at most once, returning to its first vertex. Consecutive vertices, \
             and the last and first vertex, must be adjacent."
        }
    }
}

fn format_spec(task: TaskKind) -> &'static str {
    match task {
        TaskKind::MaxClique | TaskKind::MaxIndependentSet => "a list of vertex IDs",
        TaskKind::GraphColoring => {
            "a list of positive integers where the i-th entry is the color of vertex i"
        }
        TaskKind::MeetingScheduling => {
            "a list of (meeting_id, room_id, start_time) tuples sorted by start time"
        }
        TaskKind::BalancedBisection => "the two vertex sets as a pair of lists",
        TaskKind::SubsetSum => "the ordered list of indices",
        TaskKind::SetCover => "a list of subset indices",
        TaskKind::Knapsack => "the ordered list of chosen item IDs in square brackets",
        TaskKind::Tsp => "the route as a list of city IDs with the starting city repeated at the end",
        TaskKind::HamiltonianCycle => {
            "the cycle as a list of vertex IDs in visiting order, without repeating the first vertex"
        }
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn adjacency_lines(out: &mut String, g: &UndirectedGraph) {
    writeln!(out, "Vertices: 0..{} ({} vertices)", g.n().saturating_sub(1), g.n()).unwrap();
    out.push_str("Adjacency lists:\n");
    for (v, ns) in g.adjacency().iter().enumerate() {
        writeln!(out, "{v}: [{}]", join(ns)).unwrap();
    }
}

fn payload_text(payload: &Payload) -> String {
    let mut out = String::new();
    match payload {
        Payload::Graph(g) => adjacency_lines(&mut out, g),
        Payload::Hamiltonian(h) => adjacency_lines(&mut out, &h.graph),
        Payload::Meetings(p) => {
            out.push_str("Meetings (meeting_id: attendees, duration in minutes):\n");
            for (i, m) in p.meetings.iter().enumerate() {
                writeln!(out, "{i}: ([{}], {})", join(&m.attendees), m.duration).unwrap();
            }
            out.push_str("Availability (attendee_id: available intervals):\n");
            for (i, slots) in p.availability.iter().enumerate() {
                let slots = slots.iter().map(|(a, b)| format!("({a}, {b})"));
                writeln!(out, "{i}: [{}]", join(slots)).unwrap();
            }
            out.push_str("Rooms (room_id: capacity):\n");
            for (i, c) in p.rooms.iter().enumerate() {
                writeln!(out, "{i}: {c}").unwrap();
            }
        }
        Payload::Bisection(g) => {
            writeln!(out, "Vertices: 0..{} ({} vertices)", g.n().saturating_sub(1), g.n()).unwrap();
            out.push_str("Weighted adjacency (vertex: {neighbor: weight}):\n");
            for (v, row) in g.rows().iter().enumerate() {
                let entries = row.iter().map(|(u, w)| format!("{u}: {w}"));
                writeln!(out, "{v}: {{{}}}", join(entries)).unwrap();
            }
        }
        Payload::SubsetSum(p) => {
            writeln!(out, "T = {}", p.target).unwrap();
            out.push_str("numbers (index: value):\n");
            for (i, x) in p.numbers.iter().enumerate() {
                writeln!(out, "{i}: {x}").unwrap();
            }
        }
        Payload::SetCover(p) => {
            writeln!(out, "U = {{0, ..., {}}} ({} elements)", p.universe_size.saturating_sub(1), p.universe_size)
                .unwrap();
            out.push_str("Subsets (index: elements):\n");
            for (i, s) in p.subsets.iter().enumerate() {
                writeln!(out, "{i}: {{{}}}", join(s)).unwrap();
            }
        }
        Payload::Knapsack(p) => {
            writeln!(out, "W = {}", p.capacity).unwrap();
            out.push_str("Items (item_id: (weight, value)):\n");
            for (i, it) in p.items.iter().enumerate() {
                writeln!(out, "{i}: ({}, {})", it.weight, it.value).unwrap();
            }
        }
        Payload::Tsp(p) => {
            writeln!(out, "Cities: 0..{} ({} cities)", p.n().saturating_sub(1), p.n()).unwrap();
            out.push_str("Distances (city: {other city: distance}):\n");
            for a in 0..p.n() {
                let entries = (0..p.n()).filter(|&b| b != a).map(|b| format!("{b}: {}", p.distance(a, b)));
                writeln!(out, "{a}: {{{}}}", join(entries)).unwrap();
            }
        }
    }
    out
}

/// Renders the full prompt for one instance. Deterministic in its inputs.
pub fn render_prompt(task: TaskKind, payload: &Payload) -> String {
    format!(
        "{}\n\nAnswer format: {}, e.g. {}\n\n{}\n{}",
        statement(task),
        format_spec(task),
        format_example(task),
        payload_text(payload),
        INSTRUCTION
    )
}

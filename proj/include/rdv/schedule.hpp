#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rdv/errors.hpp"

namespace rdv {

enum class FrameType : std::uint8_t { I, P, B };

inline const char* to_string(FrameType t) {
  switch (t) {
    case FrameType::I: return "I";
    case FrameType::P: return "P";
    default: return "B";
  }
}

struct ScheduleEntry {
  int display_index = 0;
  FrameType frame_type = FrameType::I;
  std::optional<int> ref_past;
  std::optional<int> ref_future;
  int coding_order = 0;
};

struct FrameSchedule {
  std::vector<ScheduleEntry> entries;  // in coding order
  int intra_period = 1;
  int gop_size = 1;

  int size() const { return static_cast<int>(entries.size()); }
};

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

namespace detail {

// Codes the open interval (lo, hi) as hierarchical B frames, midpoint first.
inline void schedule_interior(int lo, int hi, std::vector<ScheduleEntry>& out) {
  if (hi - lo <= 1) return;
  int mid = (lo + hi) / 2;
  out.push_back({mid, FrameType::B, lo, hi, 0});
  schedule_interior(lo, mid, out);
  schedule_interior(mid, hi, out);
}

}  // namespace detail

// Coding order for n_frames: independent segments of intra_period frames, each
// opened by an I frame; within a segment, anchors every gop_size frames are P
// frames chained to the previous anchor, and the frames between consecutive
// anchors are hierarchical B frames. A short tail still ends on a P anchor.
inline FrameSchedule build_schedule(int n_frames, int intra_period, int gop_size) {
  if (n_frames < 1) throw ConfigError("n_frames must be at least 1");
  if (intra_period < 1) throw ConfigError("intra_period must be at least 1");
  if (gop_size < 1) throw ConfigError("gop_size must be at least 1");
  if (gop_size > intra_period)
    throw ConfigError("gop_size must not exceed intra_period");
  if (!is_power_of_two(gop_size))
    throw ConfigError("gop_size must be a power of two");

  FrameSchedule s;
  s.intra_period = intra_period;
  s.gop_size = gop_size;
  s.entries.reserve(static_cast<std::size_t>(n_frames));

  for (int seg_start = 0; seg_start < n_frames; seg_start += intra_period) {
    int seg_last = std::min(seg_start + intra_period, n_frames) - 1;
    s.entries.push_back({seg_start, FrameType::I, std::nullopt, std::nullopt, 0});
    int anchor = seg_start;
    while (anchor < seg_last) {
      int next = std::min(anchor + gop_size, seg_last);
      s.entries.push_back({next, FrameType::P, anchor, std::nullopt, 0});
      detail::schedule_interior(anchor, next, s.entries);
      anchor = next;
    }
  }
  for (std::size_t i = 0; i < s.entries.size(); ++i)
    s.entries[i].coding_order = static_cast<int>(i);
  return s;
}

// Checks every structural invariant; throws ScheduleInvariantError naming the
// first offending entry.
inline void validate_schedule(const FrameSchedule& s) {
  auto fail = [](const ScheduleEntry& e, const std::string& what) {
    throw ScheduleInvariantError("entry for display index " +
                                 std::to_string(e.display_index) + ": " + what);
  };
  int n = s.size();
  if (n == 0) throw ScheduleInvariantError("schedule is empty");

  std::vector<int> order_of_display(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const ScheduleEntry& e = s.entries[static_cast<std::size_t>(i)];
    if (e.coding_order != i) fail(e, "coding_order does not match position");
    if (e.display_index < 0 || e.display_index >= n)
      fail(e, "display index outside sequence");
    if (order_of_display[static_cast<std::size_t>(e.display_index)] != -1)
      fail(e, "display index covered twice");
    order_of_display[static_cast<std::size_t>(e.display_index)] = i;
  }
  for (int d = 0; d < n; ++d)
    if (order_of_display[static_cast<std::size_t>(d)] == -1)
      throw ScheduleInvariantError("display index " + std::to_string(d) +
                                   " is never coded");

  const ScheduleEntry& first = s.entries.front();
  if (first.frame_type != FrameType::I || first.display_index != 0)
    fail(first, "stream must open with an I frame at display index 0");

  for (const ScheduleEntry& e : s.entries) {
    auto check_ref = [&](int ref) {
      if (ref < 0 || ref >= n) fail(e, "reference outside sequence");
      if (order_of_display[static_cast<std::size_t>(ref)] >= e.coding_order)
        fail(e, "reference not coded before this frame");
    };
    switch (e.frame_type) {
      case FrameType::I:
        if (e.ref_past || e.ref_future) fail(e, "I frame carries a reference");
        break;
      case FrameType::P:
        if (!e.ref_past || e.ref_future) fail(e, "P frame needs exactly one past reference");
        check_ref(*e.ref_past);
        if (*e.ref_past >= e.display_index) fail(e, "P reference must precede it in display order");
        break;
      case FrameType::B:
        if (!e.ref_past || !e.ref_future) fail(e, "B frame needs two references");
        check_ref(*e.ref_past);
        check_ref(*e.ref_future);
        if (!(*e.ref_past < e.display_index && e.display_index < *e.ref_future))
          fail(e, "B references must bracket it in display order");
        break;
    }
  }
}

// One JSON object per line: the debugging dump behind --dump-schedule.
inline void dump_schedule_jsonl(const FrameSchedule& s, std::ostream& out) {
  for (const ScheduleEntry& e : s.entries) {
    out << "{\"display_index\":" << e.display_index << ",\"type\":\""
        << to_string(e.frame_type) << "\"";
    if (e.ref_past) out << ",\"ref_past\":" << *e.ref_past;
    if (e.ref_future) out << ",\"ref_future\":" << *e.ref_future;
    out << ",\"coding_order\":" << e.coding_order << "}\n";
  }
}

}  // namespace rdv

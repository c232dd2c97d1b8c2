#pragma once

// Per-cluster-head adaptive sampling controller.
//
// Every round a CH appends its own reading and the readings received from its
// children to a window buffer. While cycle_counter < period_c the round only
// buffers. Otherwise it is a decision round: the variance of the whole window
// is compared with the threshold T. A quiet window (variance <= T) lengthens
// the period and transmits the aggregate of the current round; a noisy window
// (or an exhausted cycle limit in literal mode) flushes and aggregates the
// whole window and resets the period to 1.
//
// Processing accounting, in unit messages:
//   buffer-only round   1 (own sample); child readings stay pending
//   transmit-last round children of this round + 1
//   process-and-transmit pending child readings + children of this round + 1
// so each received reading is processed at most once, and a CH holding period
// c over quiet data averages (n/c + 1) processed units per round.

#include <algorithm>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "adhs/errors.hpp"
#include "adhs/field.hpp"

namespace adhs {

enum class QuietTransmit { kStale, kSuppress };

inline std::string_view to_string(QuietTransmit q) {
  return q == QuietTransmit::kStale ? "stale" : "suppress";
}

struct AdhsParams {
  double t_threshold = 0.0;
  std::size_t l_limit = 1;
  bool literal_mode = false;
  QuietTransmit quiet_transmit = QuietTransmit::kStale;
  VarianceKind variance_kind = VarianceKind::kPopulation;

  void validate() const {
    if (!(t_threshold >= 0.0)) throw ConfigError("adhs: t_threshold must be >= 0");
    if (l_limit < 1) throw ConfigError("adhs: l_limit must be >= 1");
  }
};

struct ChState {
  std::size_t period_c = 1;
  std::size_t cycle_counter = 1;
  std::vector<Reading> window_buffer;
  std::size_t pending_child_units = 0;  // buffered child readings not yet processed
  std::optional<double> last_aggregate;
  double last_variance = 1.0;

  friend bool operator==(const ChState& a, const ChState& b) {
    const auto same = [](const Reading& x, const Reading& y) {
      return x.source == y.source && x.round == y.round && x.value == y.value;
    };
    return a.period_c == b.period_c && a.cycle_counter == b.cycle_counter &&
           a.pending_child_units == b.pending_child_units && a.last_aggregate == b.last_aggregate &&
           a.last_variance == b.last_variance &&
           std::equal(a.window_buffer.begin(), a.window_buffer.end(), b.window_buffer.begin(),
                      b.window_buffer.end(), same);
  }
};

enum class ChActionKind { kBufferOnly, kTransmitLast, kProcessAndTransmit };

inline std::string_view to_string(ChActionKind a) {
  switch (a) {
    case ChActionKind::kBufferOnly: return "buffer_only";
    case ChActionKind::kTransmitLast: return "transmit_last";
    case ChActionKind::kProcessAndTransmit: return "process_and_transmit";
  }
  return "?";
}

struct ChAction {
  ChActionKind kind = ChActionKind::kBufferOnly;
  std::size_t flushed_units = 0;  // window length, process-and-transmit only
};

struct StepOutcome {
  ChState state;
  ChAction action;
  std::optional<double> variance;  // decision rounds only
  std::size_t processed_units = 0;
  std::optional<double> sent_value;  // value transmitted upward this round, if any
};

inline ChState adhs_init(const AdhsParams& params) {
  params.validate();
  return ChState{};
}

inline double aggregate(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("aggregate: empty input");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

inline StepOutcome adhs_step(ChState state, const Reading& own, std::span<const Reading> children,
                             const AdhsParams& params) {
  StepOutcome out;
  state.window_buffer.push_back(own);
  state.window_buffer.insert(state.window_buffer.end(), children.begin(), children.end());
  const std::size_t n = children.size();

  if (state.cycle_counter < state.period_c) {
    ++state.cycle_counter;
    state.pending_child_units += n;
    out.action = {ChActionKind::kBufferOnly, 0};
    out.processed_units = 1;
    if (params.quiet_transmit == QuietTransmit::kStale) out.sent_value = state.last_aggregate;
    out.state = std::move(state);
    return out;
  }

  std::vector<double> values;
  values.reserve(state.window_buffer.size());
  for (const auto& r : state.window_buffer) values.push_back(r.value);
  const double v = variance(values, params.variance_kind);
  state.last_variance = v;
  out.variance = v;

  const bool may_grow = params.literal_mode ? state.period_c <= params.l_limit : true;
  if (v <= params.t_threshold && may_grow) {
    const std::span<const double> current(values.end() - static_cast<std::ptrdiff_t>(n + 1), values.end());
    state.last_aggregate = aggregate(current);
    state.period_c = params.literal_mode ? state.period_c + 1
                                         : std::min(state.period_c + 1, params.l_limit);
    state.cycle_counter = 1;
    out.action = {ChActionKind::kTransmitLast, 0};
    out.processed_units = n + 1;
    if (params.quiet_transmit == QuietTransmit::kStale) out.sent_value = state.last_aggregate;
  } else {
    out.action = {ChActionKind::kProcessAndTransmit, state.window_buffer.size()};
    out.processed_units = state.pending_child_units + n + 1;
    state.last_aggregate = aggregate(values);
    state.window_buffer.clear();
    state.pending_child_units = 0;
    state.period_c = 1;
    state.cycle_counter = 1;
    out.sent_value = state.last_aggregate;
  }
  out.state = std::move(state);
  return out;
}

}  // namespace adhs

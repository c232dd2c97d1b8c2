#include <gtest/gtest.h>

#include <limits>
#include <vector>

#include "adhs/adhs.hpp"

namespace adhs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AdhsParams params(double t, std::size_t l, bool literal = false) {
  AdhsParams p;
  p.t_threshold = t;
  p.l_limit = l;
  p.literal_mode = literal;
  return p;
}

// Feeds one round: own reading `own`, children with `kids` values.
StepOutcome feed(const ChState& s, Round t, double own, const std::vector<double>& kids, const AdhsParams& p) {
  std::vector<Reading> rs;
  for (std::size_t i = 0; i < kids.size(); ++i) rs.push_back({static_cast<NodeId>(i + 1), t, kids[i]});
  return adhs_step(s, {0, t, own}, rs, p);
}

TEST(Adhs, InitialState) {
  const auto s = adhs_init(params(15, 2));
  EXPECT_EQ(s.period_c, 1u);
  EXPECT_EQ(s.cycle_counter, 1u);
  EXPECT_TRUE(s.window_buffer.empty());
  EXPECT_FALSE(s.last_aggregate);
}

TEST(Adhs, InitValidates) {
  EXPECT_THROW(adhs_init(params(15, 0)), ConfigError);
  EXPECT_THROW(adhs_init(params(-1, 2)), ConfigError);
}

TEST(Adhs, QuietFirstRoundTransmitsCurrentAggregate) {
  const auto p = params(15, 2);
  const auto o = feed(adhs_init(p), 0, 20, {20, 20, 20}, p);
  EXPECT_EQ(o.action.kind, ChActionKind::kTransmitLast);
  EXPECT_EQ(o.processed_units, 4u);
  ASSERT_TRUE(o.variance);
  EXPECT_EQ(*o.variance, 0.0);
  EXPECT_EQ(o.sent_value, 20.0);
  EXPECT_EQ(o.state.period_c, 2u);
  EXPECT_EQ(o.state.cycle_counter, 1u);
}

TEST(Adhs, NoisyRoundFlushesWindow) {
  const auto p = params(15, 2);
  // mean 20, population variance 50
  const auto o = feed(adhs_init(p), 0, 20, {10, 20, 30}, p);
  EXPECT_EQ(o.action.kind, ChActionKind::kProcessAndTransmit);
  EXPECT_EQ(o.action.flushed_units, 4u);
  EXPECT_DOUBLE_EQ(*o.variance, 50.0);
  EXPECT_DOUBLE_EQ(*o.sent_value, 20.0);
  EXPECT_TRUE(o.state.window_buffer.empty());
  EXPECT_EQ(o.state.period_c, 1u);
}

TEST(Adhs, PeriodClimbsToLimitUnderConstantData) {
  const auto p = params(15, 4);
  ChState s = adhs_init(p);
  std::vector<std::size_t> decisions;
  std::vector<std::size_t> periods;
  for (Round t = 0; t < 20; ++t) {
    const auto o = feed(s, t, 5, {5, 5}, p);
    if (o.action.kind != ChActionKind::kBufferOnly) {
      decisions.push_back(t);
      periods.push_back(o.state.period_c);
      EXPECT_EQ(o.action.kind, ChActionKind::kTransmitLast);
    }
    EXPECT_LE(o.state.period_c, 4u);
    s = o.state;
  }
  // Decision rounds are spaced by the period in force: 1, 2, 3, 4, 4, ...
  EXPECT_EQ(decisions, (std::vector<std::size_t>{0, 2, 5, 9, 13, 17}));
  EXPECT_EQ(periods, (std::vector<std::size_t>{2, 3, 4, 4, 4, 4}));
}

TEST(Adhs, LiteralModeForcesFlushPastLimit) {
  const auto p = params(15, 2, true);
  ChState s = adhs_init(p);
  std::vector<ChActionKind> kinds;
  for (Round t = 0; t < 7; ++t) {
    const auto o = feed(s, t, 5, {5}, p);
    kinds.push_back(o.action.kind);
    s = o.state;
  }
  using K = ChActionKind;
  // period 1 -> 2 -> 3, then a period-3 decision exceeds the limit and flushes.
  EXPECT_EQ(kinds, (std::vector<K>{K::kTransmitLast, K::kBufferOnly, K::kTransmitLast, K::kBufferOnly,
                                   K::kBufferOnly, K::kProcessAndTransmit, K::kTransmitLast}));
}

TEST(Adhs, BufferOnlyRoundsProcessOwnSampleOnly) {
  const auto p = params(15, 3);
  ChState s = feed(adhs_init(p), 0, 1, {1, 1, 1}, p).state;
  const auto o = feed(s, 1, 1, {1, 1, 1}, p);
  EXPECT_EQ(o.action.kind, ChActionKind::kBufferOnly);
  EXPECT_EQ(o.processed_units, 1u);
  EXPECT_EQ(o.state.pending_child_units, 3u);
  EXPECT_EQ(o.sent_value, 1.0);  // stale re-send
}

TEST(Adhs, SuppressModeSendsNothingWhileBuffering) {
  auto p = params(15, 3);
  p.quiet_transmit = QuietTransmit::kSuppress;
  ChState s = feed(adhs_init(p), 0, 1, {1}, p).state;
  const auto quiet = feed(adhs_init(p), 0, 1, {1}, p);
  EXPECT_FALSE(quiet.sent_value);
  const auto o = feed(s, 1, 1, {1}, p);
  EXPECT_EQ(o.action.kind, ChActionKind::kBufferOnly);
  EXPECT_FALSE(o.sent_value);
}

TEST(Adhs, FlushProcessesBacklogOnce) {
  const auto p = params(15, 3);
  ChState s = feed(adhs_init(p), 0, 1, {1, 1}, p).state;  // period 2
  s = feed(s, 1, 1, {1, 1}, p).state;                       // buffer, 2 pending
  const auto o = feed(s, 2, 1, {100, 1}, p);                // noisy decision
  EXPECT_EQ(o.action.kind, ChActionKind::kProcessAndTransmit);
  EXPECT_EQ(o.processed_units, 2u + 2u + 1u);
  EXPECT_EQ(o.action.flushed_units, 9u);
  EXPECT_EQ(o.state.pending_child_units, 0u);
}

TEST(Adhs, WindowHoldsEveryReadingSinceLastFlush) {
  const auto p = params(kInf, 5);
  ChState s = adhs_init(p);
  std::size_t fed = 0;
  for (Round t = 0; t < 30; ++t) {
    const std::vector<double> kids(t % 4, static_cast<double>(t));
    const auto o = feed(s, t, 0, kids, p);
    fed += kids.size() + 1;
    if (o.action.kind == ChActionKind::kProcessAndTransmit) fed = 0;
    EXPECT_EQ(o.state.window_buffer.size(), fed);
    s = o.state;
  }
}

TEST(Adhs, ZeroThresholdFlushesEveryRoundOnVaryingData) {
  const auto p = params(0, 4);
  ChState s = adhs_init(p);
  for (Round t = 0; t < 25; ++t) {
    const auto o = feed(s, t, 0, {static_cast<double>(t + 1)}, p);
    EXPECT_EQ(o.action.kind, ChActionKind::kProcessAndTransmit) << t;
    s = o.state;
  }
}

TEST(Adhs, InfiniteThresholdSettlesAtLimit) {
  const auto p = params(kInf, 6);
  ChState s = adhs_init(p);
  for (Round t = 0; t < 60; ++t) s = feed(s, t, static_cast<double>(t * t), {-1.0 * t}, p).state;
  EXPECT_EQ(s.period_c, 6u);
}

// After a step change the CH detects it no later than the next decision
// round, i.e. within one period. The quiet window keeps growing, so T is set
// low enough that even a small share of new readings exceeds it.
TEST(Adhs, StepChangeDetectedWithinOnePeriod) {
  for (std::size_t l = 1; l <= 6; ++l) {
    const auto p = params(1, l);
    for (Round step_at = 5; step_at < 25; ++step_at) {
      ChState s = adhs_init(p);
      std::optional<Round> detected;
      std::size_t period_at_step = 0;
      for (Round t = 0; t < 60 && !detected; ++t) {
        if (t == step_at) period_at_step = s.period_c;
        const double v = t < step_at ? 10.0 : 30.0;
        const auto o = feed(s, t, v, {v, v}, p);
        if (t >= step_at && o.action.kind == ChActionKind::kProcessAndTransmit) detected = t;
        s = o.state;
      }
      ASSERT_TRUE(detected) << "l=" << l << " step=" << step_at;
      EXPECT_LT(*detected - step_at, std::max<std::size_t>(period_at_step, 1)) << "l=" << l;
    }
  }
}

// Capped mode over quiet data: c rounds process n + c units in total.
TEST(Adhs, QuietAverageProcessingMatchesPeriod) {
  for (std::size_t c = 1; c <= 6; ++c) {
    const auto p = params(15, c);
    const std::size_t n = 5;
    ChState s = adhs_init(p);
    for (Round t = 0; t < 50; ++t) s = feed(s, t, 3, std::vector<double>(n, 3), p).state;
    // Align to a decision round.
    while (s.cycle_counter != s.period_c) s = feed(s, 0, 3, std::vector<double>(n, 3), p).state;
    std::size_t units = 0;
    for (std::size_t i = 0; i < c; ++i) {
      const auto o = feed(s, 0, 3, std::vector<double>(n, 3), p);
      units += o.processed_units;
      s = o.state;
    }
    EXPECT_EQ(units, n + c) << c;
  }
}

TEST(Adhs, StepIsPure) {
  const auto p = params(15, 3);
  ChState s = feed(adhs_init(p), 0, 1, {2, 3}, p).state;
  const auto a = feed(s, 1, 4, {5, 6}, p);
  const auto b = feed(s, 1, 4, {5, 6}, p);
  EXPECT_EQ(a.state, b.state);
  EXPECT_EQ(a.sent_value, b.sent_value);
}

TEST(Aggregate, MeanAndEmpty) {
  const std::vector<double> v{10, 20, 30, 20};
  EXPECT_DOUBLE_EQ(aggregate(v), 20.0);
  EXPECT_THROW(aggregate({}), PreconditionError);
}

TEST(Adhs, ActionNames) {
  EXPECT_EQ(to_string(ChActionKind::kBufferOnly), "buffer_only");
  EXPECT_EQ(to_string(ChActionKind::kTransmitLast), "transmit_last");
  EXPECT_EQ(to_string(ChActionKind::kProcessAndTransmit), "process_and_transmit");
}

}  // namespace
}  // namespace adhs

#pragma once

// Trace tables and the summary metrics used for parameter sweeps.
//
// Frozen metric definitions:
//   argmax switch   a change of argmax label between consecutive non-skipped records
//   commit          a goal's probability above 0.5 on 10 consecutive non-skipped
//                   records; the commit is declared at the 10th record
//   commit latency  time from the start of a segment targeting a goal to the first
//                   commit on that goal whose run starts inside or after the segment
//   time in Unknown sum of record intervals whose argmax is Unknown

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intent/scenario.hpp"
#include "intent/session.hpp"

namespace intent {

inline constexpr std::size_t kCommitRun = 10;
inline constexpr double kCommitThreshold = 0.5;

/// Shortest round-trip decimal representation.
std::string format_number(double x);

using TraceMeta = std::vector<std::pair<std::string, std::string>>;

enum class TraceFormat { Csv, Jsonl };

/// CSV: "# key=value" metadata lines, then
/// t,<goal ids...>,p_unknown,p_irrational,argmax,phi,skipped
std::string format_trace(std::span<const IntentEstimate> trace, const TraceMeta& meta, TraceFormat format);

struct CommitEvent {
    std::string goal;
    std::size_t run_start = 0;  ///< index into the trace of the first record of the run
    std::size_t record = 0;     ///< index into the trace of the record that completes the run
    double t = 0.0;
};

std::vector<CommitEvent> detect_commits(std::span<const IntentEstimate> trace, std::size_t run = kCommitRun,
                                        double threshold = kCommitThreshold);

std::size_t argmax_switch_count(std::span<const IntentEstimate> trace);
double time_in_unknown(std::span<const IntentEstimate> trace);

struct TransitionLatency {
    std::size_t segment = 0;
    std::string goal;
    double segment_start = 0.0;
    std::optional<double> commit_time;
    double latency = 0.0;  ///< until the end of the trace when no commit happened
};

std::vector<TransitionLatency> transition_latencies(const Scenario& scenario, std::span<const IntentEstimate> trace);

struct SweepMetrics {
    double value = 0.0;
    std::size_t argmax_switch_count = 0;
    double time_in_unknown = 0.0;
    std::vector<std::pair<std::string, double>> commit_latency;  ///< first reach of each goal
    double mean_commit_latency = 0.0;                            ///< over all targeted segments
};

SweepMetrics compute_metrics(const Scenario& scenario, std::span<const IntentEstimate> trace, double value = 0.0);

std::string format_sweep(std::span<const SweepMetrics> rows, const std::string& parameter, const GoalSet& goals,
                         const TraceMeta& meta, TraceFormat format);

}  // namespace intent

#include "intent/trace.hpp"

#include <array>
#include <charconv>
#include <map>
#include <sstream>

#include "json_util.hpp"

namespace intent {

using detail::json;

std::string format_number(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), res.ptr};
}

namespace {

void write_meta_csv(std::ostringstream& os, const TraceMeta& meta) {
    for (const auto& [k, v] : meta) {
        os << "# " << k << '=' << v << '\n';
    }
}

json meta_json(const TraceMeta& meta) {
    json m = json::object();
    for (const auto& [k, v] : meta) {
        m[k] = v;
    }
    return json{{"meta", m}};
}

}  // namespace

std::string format_trace(std::span<const IntentEstimate> trace, const TraceMeta& meta, TraceFormat format) {
    std::ostringstream os;
    if (format == TraceFormat::Jsonl) {
        os << meta_json(meta).dump() << '\n';
        for (const auto& e : trace) {
            json per_goal = json::object();
            for (const auto& [id, p] : e.per_goal) {
                per_goal[id] = p;
            }
            json rec{{"t", e.t},
                     {"per_goal", per_goal},
                     {"p_unknown", e.p_unknown},
                     {"p_irrational", e.p_irrational},
                     {"argmax", e.argmax_label},
                     {"phi", e.phi},
                     {"delta_gap", e.delta_gap},
                     {"v", e.v},
                     {"s", e.s},
                     {"skipped", e.skipped}};
            os << rec.dump() << '\n';
        }
        return os.str();
    }

    write_meta_csv(os, meta);
    os << 't';
    if (!trace.empty()) {
        for (const auto& entry : trace.front().per_goal) {
            os << ',' << entry.first;
        }
    }
    os << ",p_unknown,p_irrational,argmax,phi,skipped\n";
    for (const auto& e : trace) {
        os << format_number(e.t);
        for (const auto& entry : e.per_goal) {
            os << ',' << format_number(entry.second);
        }
        os << ',' << format_number(e.p_unknown) << ',' << format_number(e.p_irrational) << ',' << e.argmax_label << ','
           << format_number(e.phi) << ',' << (e.skipped ? 1 : 0) << '\n';
    }
    return os.str();
}

std::vector<CommitEvent> detect_commits(std::span<const IntentEstimate> trace, std::size_t run, double threshold) {
    std::vector<CommitEvent> out;
    std::map<std::string, std::pair<std::size_t, std::size_t>> streak;  // goal -> (length, start)
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto& e = trace[k];
        if (e.skipped) {
            continue;
        }
        for (const auto& [id, p] : e.per_goal) {
            auto& [len, start] = streak[id];
            if (p > threshold) {
                if (len == 0) {
                    start = k;
                }
                ++len;
                if (len == run) {
                    out.push_back({id, start, k, e.t});
                }
            } else {
                len = 0;
            }
        }
    }
    return out;
}

std::size_t argmax_switch_count(std::span<const IntentEstimate> trace) {
    std::size_t switches = 0;
    const IntentEstimate* prev = nullptr;
    for (const auto& e : trace) {
        if (e.skipped) {
            continue;
        }
        if (prev && prev->argmax_label != e.argmax_label) {
            ++switches;
        }
        prev = &e;
    }
    return switches;
}

double time_in_unknown(std::span<const IntentEstimate> trace) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
        if (trace[k].argmax.kind == HiddenState::Kind::Unknown) {
            total += trace[k + 1].t - trace[k].t;
        }
    }
    return total;
}

std::vector<TransitionLatency> transition_latencies(const Scenario& scenario, std::span<const IntentEstimate> trace) {
    std::vector<TransitionLatency> out;
    if (trace.empty()) {
        return out;
    }
    const auto commits = detect_commits(trace);
    const auto offsets = scenario.segment_offsets();
    const double end_t = trace.back().t;
    for (std::size_t s = 0; s < scenario.segments.size(); ++s) {
        const auto& seg = scenario.segments[s];
        if (!seg.target || offsets[s] >= trace.size()) {
            continue;
        }
        TransitionLatency lat;
        lat.segment = s;
        lat.goal = *seg.target;
        lat.segment_start = trace[offsets[s]].t;
        for (const auto& c : commits) {
            if (c.goal == lat.goal && c.run_start >= offsets[s]) {
                lat.commit_time = c.t;
                break;
            }
        }
        lat.latency = lat.commit_time.value_or(end_t) - lat.segment_start;
        out.push_back(lat);
    }
    return out;
}

SweepMetrics compute_metrics(const Scenario& scenario, std::span<const IntentEstimate> trace, double value) {
    SweepMetrics m;
    m.value = value;
    m.argmax_switch_count = argmax_switch_count(trace);
    m.time_in_unknown = time_in_unknown(trace);
    const auto latencies = transition_latencies(scenario, trace);
    double sum = 0.0;
    for (const auto& lat : latencies) {
        sum += lat.latency;
        bool seen = false;
        for (const auto& entry : m.commit_latency) {
            seen = seen || entry.first == lat.goal;
        }
        if (!seen) {
            m.commit_latency.emplace_back(lat.goal, lat.latency);
        }
    }
    m.mean_commit_latency = latencies.empty() ? 0.0 : sum / static_cast<double>(latencies.size());
    return m;
}

std::string format_sweep(std::span<const SweepMetrics> rows, const std::string& parameter, const GoalSet& goals,
                         const TraceMeta& meta, TraceFormat format) {
    auto latency_for = [](const SweepMetrics& m, const std::string& id) -> std::optional<double> {
        for (const auto& [gid, v] : m.commit_latency) {
            if (gid == id) {
                return v;
            }
        }
        return std::nullopt;
    };

    std::ostringstream os;
    if (format == TraceFormat::Jsonl) {
        os << meta_json(meta).dump() << '\n';
        for (const auto& m : rows) {
            json lat = json::object();
            for (const auto& [id, v] : m.commit_latency) {
                lat[id] = v;
            }
            os << json{{"parameter", parameter},
                       {"value", m.value},
                       {"argmax_switch_count", m.argmax_switch_count},
                       {"time_in_unknown", m.time_in_unknown},
                       {"commit_latency", lat},
                       {"mean_commit_latency", m.mean_commit_latency}}
                      .dump()
               << '\n';
        }
        return os.str();
    }
    write_meta_csv(os, meta);
    os << parameter << ",argmax_switch_count,time_in_unknown";
    for (const auto& g : goals) {
        os << ",commit_latency_" << g.id;
    }
    os << ",mean_commit_latency\n";
    for (const auto& m : rows) {
        os << format_number(m.value) << ',' << m.argmax_switch_count << ',' << format_number(m.time_in_unknown);
        for (const auto& g : goals) {
            const auto v = latency_for(m, g.id);
            os << ',' << (v ? format_number(*v) : std::string());
        }
        os << ',' << format_number(m.mean_commit_latency) << '\n';
    }
    return os.str();
}

}  // namespace intent

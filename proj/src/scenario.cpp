#include "intent/scenario.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "intent/error.hpp"
#include "json_util.hpp"

namespace intent {

using detail::json;

namespace {

constexpr double kDegToRad = M_PI / 180.0;
const Vec3 kUp{0.0, 0.0, 1.0};

double ease(Interpolation interp, double tau) {
    if (interp == Interpolation::Linear) {
        return tau;
    }
    const double t3 = tau * tau * tau;
    return t3 * (10.0 - 15.0 * tau + 6.0 * tau * tau);
}

Vec3 resolve_direction(const GazeTarget& target, const Vec3& head, const Vec3& current) {
    if (const auto* at = std::get_if<GazeAt>(&target)) {
        return normalized(at->point - head);
    }
    if (const auto* dir = std::get_if<GazeDirection>(&target)) {
        return normalized(dir->direction);
    }
    if (const auto* sweep = std::get_if<GazeYawSweep>(&target)) {
        return normalized(rotate(current, kUp, sweep->degrees * kDegToRad));
    }
    return current;
}

// Gaze direction at eased fraction `f` of a segment that starts at `from`.
Vec3 gaze_at_fraction(const GazeTarget& target, const Vec3& head, const Vec3& from, double f) {
    if (const auto* sweep = std::get_if<GazeYawSweep>(&target)) {
        return normalized(rotate(from, kUp, sweep->degrees * kDegToRad * f));
    }
    return slerp(from, resolve_direction(target, head, from), f);
}

}  // namespace

void Scenario::validate() const {
    if (goals.empty()) {
        throw InvalidInputError("scenario needs at least one goal");
    }
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw InvalidInputError("scenario rate must be positive");
    }
    if (segments.empty()) {
        throw InvalidInputError("scenario needs at least one segment");
    }
    if (!head.finite() || !hand_start.finite()) {
        throw InvalidInputError("scenario start positions must be finite");
    }
    if (!(noise.hand >= 0.0) || !(noise.gaze >= 0.0)) {
        throw InvalidInputError("noise std-devs must be non-negative");
    }
    resolve_direction(gaze_start, head, {1.0, 0.0, 0.0});
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        const std::string where = "segment " + std::to_string(i);
        if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
            throw InvalidInputError(where + ": duration must be positive");
        }
        if (seg.gaze_duration && (!(*seg.gaze_duration > 0.0) || *seg.gaze_duration > seg.duration)) {
            throw InvalidInputError(where + ": gaze_duration must lie in (0, duration]");
        }
        if (!seg.hand_to.finite()) {
            throw InvalidInputError(where + ": hand_to must be finite");
        }
        if (seg.target && !goals.contains(*seg.target)) {
            throw InvalidInputError(where + ": unknown target goal '" + *seg.target + "'");
        }
    }
}

std::vector<std::size_t> Scenario::segment_sample_counts() const {
    std::vector<std::size_t> counts;
    counts.reserve(segments.size());
    for (const auto& seg : segments) {
        const auto n = static_cast<std::size_t>(std::llround(seg.duration * rate));
        counts.push_back(n == 0 ? 1 : n);
    }
    return counts;
}

std::vector<std::size_t> Scenario::segment_offsets() const {
    std::vector<std::size_t> offsets;
    std::size_t at = 0;
    for (std::size_t n : segment_sample_counts()) {
        offsets.push_back(at);
        at += n;
    }
    return offsets;
}

std::size_t Scenario::sample_count() const {
    std::size_t total = 0;
    for (std::size_t n : segment_sample_counts()) {
        total += n;
    }
    return total;
}

std::vector<Observation> synthesize(const Scenario& sc) {
    sc.validate();
    std::mt19937_64 rng(sc.seed);
    std::normal_distribution<double> hand_noise(0.0, sc.noise.hand > 0.0 ? sc.noise.hand : 1.0);
    std::normal_distribution<double> gaze_noise(0.0, sc.noise.gaze > 0.0 ? sc.noise.gaze : 1.0);

    const auto counts = sc.segment_sample_counts();
    std::vector<Observation> out;
    out.reserve(sc.sample_count());

    Vec3 hand_from = sc.hand_start;
    Vec3 gaze_from = resolve_direction(sc.gaze_start, sc.head, {1.0, 0.0, 0.0});
    for (std::size_t s = 0; s < sc.segments.size(); ++s) {
        const ScriptSegment& seg = sc.segments[s];
        const std::size_t n = counts[s];
        const double gaze_span = seg.gaze_duration.value_or(seg.duration) / seg.duration;
        for (std::size_t k = 0; k < n; ++k) {
            // The first segment starts on its origin; later ones start one step in.
            double tau;
            if (s == 0) {
                tau = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
            } else {
                tau = static_cast<double>(k + 1) / static_cast<double>(n);
            }
            const double hand_f = ease(seg.interpolation, tau);
            const double gaze_f = ease(seg.interpolation, std::min(1.0, tau / gaze_span));

            Observation obs;
            obs.t = static_cast<double>(out.size()) / sc.rate;
            obs.head.position = sc.head;
            obs.hand = hand_from + (seg.hand_to - hand_from) * hand_f;
            Vec3 dir = gaze_at_fraction(seg.gaze, sc.head, gaze_from, gaze_f);
            if (sc.noise.hand > 0.0) {
                obs.hand += Vec3{hand_noise(rng), hand_noise(rng), hand_noise(rng)};
            }
            if (sc.noise.gaze > 0.0) {
                dir = normalized(dir + Vec3{gaze_noise(rng), gaze_noise(rng), gaze_noise(rng)});
            }
            obs.head.forward = dir;
            out.push_back(obs);
        }
        hand_from = seg.hand_to;
        gaze_from = gaze_at_fraction(seg.gaze, sc.head, gaze_from, 1.0);
    }
    return out;
}

GoalSet builtin_goal_layout() {
    constexpr double radius = 1.5;
    constexpr double height = 0.8;
    auto on_arc = [&](double yaw_deg) {
        const double a = yaw_deg * kDegToRad;
        return Vec3{radius * std::cos(a), radius * std::sin(a), height};
    };
    return GoalSet({
        {"cylinder", "green cylinder", on_arc(45.0)},
        {"cube", "red cube", on_arc(0.0)},
        {"sphere", "blue sphere", on_arc(-45.0)},
    });
}

std::map<std::string, Scenario> builtin_scenarios() {
    const GoalSet goals = builtin_goal_layout();
    auto pos = [&](const std::string& id) { return goals[*goals.index_of(id)].position; };

    Scenario base;
    base.goals = goals;
    base.rate = 30.0;
    base.head = {0.0, 0.0, 1.2};
    base.hand_start = {0.35, -0.15, 1.0};
    base.gaze_start = GazeAt{pos("cube")};

    // Reach for a goal with the gaze settling on it early in the motion.
    auto reach = [&](const std::string& id, double duration) {
        ScriptSegment seg;
        seg.duration = duration;
        seg.hand_to = pos(id);
        seg.gaze = GazeAt{pos(id)};
        seg.gaze_duration = duration * 0.4;
        seg.target = id;
        return seg;
    };

    std::map<std::string, Scenario> out;

    {
        Scenario sc = base;
        sc.name = "fig7_left";
        sc.seed = 7;
        sc.noise = {0.0005, 0.01};
        sc.segments = {reach("cylinder", 2.0), reach("cube", 2.0), reach("sphere", 2.0)};
        out.emplace(sc.name, sc);
    }
    {
        Scenario sc = base;
        sc.name = "fig7_middle";
        sc.seed = 11;
        sc.noise = {0.0005, 0.01};
        // The final reach is slower than the others.
        sc.segments = {reach("cube", 2.0), reach("cylinder", 2.0), reach("cube", 2.0), reach("sphere", 3.0)};
        out.emplace(sc.name, sc);
    }
    {
        Scenario sc = base;
        sc.name = "fig7_right";
        sc.seed = 13;
        sc.noise = {0.0005, 0.01};
        sc.segments = {reach("sphere", 2.0), reach("cube", 2.0), reach("cylinder", 2.0)};

        ScriptSegment turn;
        turn.duration = 1.5;
        turn.hand_to = {0.6, 0.5, 1.0};
        turn.gaze = GazeYawSweep{135.0};
        turn.label = "away";
        sc.segments.push_back(turn);

        ScriptSegment wander;
        wander.duration = 4.0;
        wander.hand_to = {0.3, -0.1, 1.05};
        wander.gaze = GazeHold{};
        wander.interpolation = Interpolation::Linear;
        wander.label = "away";
        sc.segments.push_back(wander);

        ScriptSegment back;
        back.duration = 1.5;
        back.hand_to = {0.55, -0.35, 1.0};
        back.gaze = GazeYawSweep{135.0};
        back.label = "return";
        sc.segments.push_back(back);

        ScriptSegment last = reach("sphere", 2.5);
        last.label = "return";
        sc.segments.push_back(last);
        out.emplace(sc.name, sc);
    }
    {
        Scenario sc = base;
        sc.name = "sweep_base";
        sc.seed = 1;
        sc.noise = {0.008, 0.08};
        sc.head = {0.5, 0.0, 1.2};
        sc.hand_start.x += 0.5;
        sc.segments = {reach("cylinder", 2.5), reach("cube", 2.5), reach("sphere", 2.5)};
        out.emplace(sc.name, sc);
    }
    {
        Scenario sc;
        sc.name = "straight_approach";
        sc.goals = GoalSet({{"A", "goal A", {1.5, 0.0, 1.0}}, {"B", "goal B", {0.0, 1.5, 1.0}}});
        sc.rate = 30.0;
        sc.seed = 1;
        sc.head = {0.0, 0.0, 1.2};
        sc.hand_start = {0.2, 0.0, 1.0};
        sc.gaze_start = GazeAt{{1.5, 0.0, 1.0}};
        ScriptSegment seg;
        seg.duration = 2.0;
        seg.hand_to = {1.4, 0.0, 1.0};
        seg.gaze = GazeAt{{1.5, 0.0, 1.0}};
        seg.interpolation = Interpolation::Linear;
        seg.target = "A";
        sc.segments = {seg};
        out.emplace(sc.name, sc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json gaze_to_json(const GazeTarget& g) {
    if (const auto* at = std::get_if<GazeAt>(&g)) {
        return json{{"at", detail::vec_to_json(at->point)}};
    }
    if (const auto* dir = std::get_if<GazeDirection>(&g)) {
        return json{{"dir", detail::vec_to_json(dir->direction)}};
    }
    if (const auto* sweep = std::get_if<GazeYawSweep>(&g)) {
        return json{{"yaw_sweep_deg", sweep->degrees}};
    }
    return json{{"hold", true}};
}

GazeTarget gaze_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidInputError("gaze must be an object");
    }
    if (j.contains("at")) {
        return GazeAt{detail::vec_from_json(j["at"], "gaze.at")};
    }
    if (j.contains("dir")) {
        return GazeDirection{detail::vec_from_json(j["dir"], "gaze.dir")};
    }
    if (j.contains("yaw_sweep_deg")) {
        return GazeYawSweep{detail::require_number(j, "yaw_sweep_deg")};
    }
    if (j.contains("hold")) {
        return GazeHold{};
    }
    throw InvalidInputError("gaze must contain one of at, dir, yaw_sweep_deg, hold");
}

json scenario_to_json(const Scenario& sc) {
    json goals = json::array();
    for (const auto& g : sc.goals) {
        goals.push_back(detail::goal_to_json(g));
    }
    json segments = json::array();
    for (const auto& seg : sc.segments) {
        json s{{"duration", seg.duration},
               {"hand_to", detail::vec_to_json(seg.hand_to)},
               {"gaze", gaze_to_json(seg.gaze)},
               {"interpolation", seg.interpolation == Interpolation::Linear ? "linear" : "min_jerk"}};
        if (seg.gaze_duration) {
            s["gaze_duration"] = *seg.gaze_duration;
        }
        if (!seg.label.empty()) {
            s["label"] = seg.label;
        }
        if (seg.target) {
            s["target"] = *seg.target;
        }
        segments.push_back(std::move(s));
    }
    return json{{"schema", kScenarioSchema},
                {"name", sc.name},
                {"rate", sc.rate},
                {"seed", sc.seed},
                {"noise", {{"hand", sc.noise.hand}, {"gaze", sc.noise.gaze}}},
                {"start",
                 {{"head", detail::vec_to_json(sc.head)},
                  {"hand", detail::vec_to_json(sc.hand_start)},
                  {"gaze", gaze_to_json(sc.gaze_start)}}},
                {"goals", std::move(goals)},
                {"segments", std::move(segments)}};
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidInputError("scenario must be a JSON object");
    }
    const json& schema = detail::require(j, "schema");
    if (!schema.is_number_integer() || schema.get<int>() != kScenarioSchema) {
        throw InvalidInputError("unsupported scenario schema (expected 1)");
    }
    Scenario sc;
    sc.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "";
    sc.rate = detail::require_number(j, "rate");
    const json& seed = detail::require(j, "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
        throw InvalidInputError("seed must be a non-negative integer");
    }
    sc.seed = seed.get<std::uint64_t>();
    if (j.contains("noise")) {
        const json& noise = j["noise"];
        sc.noise.hand = noise.contains("hand") ? detail::require_number(noise, "hand") : 0.0;
        sc.noise.gaze = noise.contains("gaze") ? detail::require_number(noise, "gaze") : 0.0;
    }
    const json& start = detail::require(j, "start");
    sc.head = detail::vec_from_json(detail::require(start, "head"), "start.head");
    sc.hand_start = detail::vec_from_json(detail::require(start, "hand"), "start.hand");
    sc.gaze_start = gaze_from_json(detail::require(start, "gaze"));

    const json& goals = detail::require(j, "goals");
    if (!goals.is_array()) {
        throw InvalidInputError("goals must be an array");
    }
    std::vector<Goal> list;
    for (const auto& g : goals) {
        list.push_back(detail::goal_from_json(g));
    }
    sc.goals = GoalSet(std::move(list));

    const json& segments = detail::require(j, "segments");
    if (!segments.is_array()) {
        throw InvalidInputError("segments must be an array");
    }
    for (const auto& s : segments) {
        ScriptSegment seg;
        seg.duration = detail::require_number(s, "duration");
        seg.hand_to = detail::vec_from_json(detail::require(s, "hand_to"), "hand_to");
        seg.gaze = s.contains("gaze") ? gaze_from_json(s["gaze"]) : GazeTarget{GazeHold{}};
        const std::string interp = s.contains("interpolation") ? detail::require_string(s, "interpolation") : "min_jerk";
        if (interp == "linear") {
            seg.interpolation = Interpolation::Linear;
        } else if (interp == "min_jerk") {
            seg.interpolation = Interpolation::MinJerk;
        } else {
            throw InvalidInputError("interpolation must be 'linear' or 'min_jerk'");
        }
        if (s.contains("gaze_duration")) {
            seg.gaze_duration = detail::require_number(s, "gaze_duration");
        }
        if (s.contains("label")) {
            seg.label = detail::require_string(s, "label");
        }
        if (s.contains("target")) {
            seg.target = detail::require_string(s, "target");
        }
        sc.segments.push_back(std::move(seg));
    }
    sc.validate();
    return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInputError(std::string("scenario is not valid JSON: ") + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const json::exception& e) {
        throw InvalidInputError(std::string("malformed scenario: ") + e.what());
    }
}

std::string serialize_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(2) + "\n"; }

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInputError("cannot read scenario file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInputError("cannot write scenario file '" + path.string() + "'");
    }
    out << serialize_scenario(scenario);
}

Scenario resolve_scenario(const std::string& ref) {
    constexpr std::string_view prefix = "builtin:";
    if (ref.rfind(prefix, 0) == 0) {
        const std::string name = ref.substr(prefix.size());
        auto all = builtin_scenarios();
        const auto it = all.find(name);
        if (it == all.end()) {
            throw InvalidInputError("unknown builtin scenario '" + name + "'");
        }
        return it->second;
    }
    return load_scenario(ref);
}

void write_observations(std::ostream& out, std::span<const Observation> observations) {
    for (const auto& o : observations) {
        out << detail::observation_to_json(o).dump() << '\n';
    }
}

std::vector<Observation> read_observations(std::istream& in) {
    std::vector<Observation> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(detail::observation_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw InvalidInputError("observation line " + std::to_string(line_no) + ": " + e.what());
        } catch (const InvalidInputError& e) {
            throw InvalidInputError("observation line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace intent

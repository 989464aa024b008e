// Copyright 2026 The qbus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "qbus/cv_bus.h"
#include "qbus/interaction.h"
#include "qbus/mapping.h"
#include "qbus/protocol.h"

namespace qbus::cli {

using nlohmann::json;

namespace {

std::string trim(std::string_view text) {
    size_t a = 0;
    size_t b = text.size();
    while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) {
        a++;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) {
        b--;
    }
    return std::string(text.substr(a, b - a));
}

std::string lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    return text;
}

// Split on `sep` outside parentheses.
std::vector<std::string> split_top(std::string_view text, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string current;
    for (char c : text) {
        if (c == '(') {
            depth++;
        } else if (c == ')') {
            depth--;
        }
        if (c == sep && depth == 0) {
            parts.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(trim(current));
    return parts;
}

int64_t parse_integer(std::string_view text, const char *what) {
    std::string s = trim(text);
    size_t used = 0;
    int64_t value = 0;
    try {
        value = std::stoll(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (s.empty() || used != s.size()) {
        throw UsageError(std::string("malformed ") + what + ": '" + s + "'");
    }
    return value;
}

Permutation named_base(const std::string &name, size_t d, size_t m) {
    const size_t dim = checked_pow(d, m, kDefaultMaxBusSize);
    static const std::map<std::string, std::string> qubit_ops{
        {"q1", "(0,1)(2,3)"}, {"q2", "(0,2)(1,3)"}, {"q3", "(0,3)(1,2)"},
        {"r1", "(0,1,2,3)"},  {"r2", "(0,1,3,2)"},  {"r3", "(0,2,1,3)"},
    };
    if (auto it = qubit_ops.find(name); it != qubit_ops.end()) {
        if (d != 2 || m != 2) {
            throw UsageError("operator '" + name + "' is defined for d = 2, m = 2 only");
        }
        return parse_cycles(it->second, 4);
    }
    if (name == "x") {
        return Permutation::full_cycle(dim);
    }
    if (name == "h" || name == "v" || (name.size() == 3 && name[0] == 'y')) {
        if (m != 2) {
            throw UsageError("operator '" + name + "' needs m = 2");
        }
        if (name == "h") {
            return hv_row_cycle(d);
        }
        if (name == "v") {
            return hv_column_cycle(d);
        }
        if (!std::isdigit(static_cast<unsigned char>(name[1])) || !std::isdigit(static_cast<unsigned char>(name[2]))) {
            throw UsageError("unknown operator '" + name + "'");
        }
        auto n = static_cast<int64_t>(name[1] - '0');
        auto k = static_cast<int64_t>(name[2] - '0');
        if (static_cast<size_t>(n) >= d || static_cast<size_t>(k) >= d) {
            throw UsageError("operator '" + name + "' has an index outside 0..d-1");
        }
        return compose(hv_column_cycle(d).pow(n), hv_row_cycle(d).pow(k));
    }
    throw UsageError("unknown operator '" + name + "'");
}

std::vector<OperatorSet> family_sets(const std::string &name, size_t d, size_t m) {
    if (name == "hv" || name == "hv-inverse") {
        if (m != 2) {
            throw UsageError("the hv family needs m = 2");
        }
        auto [first, second] = build_hv_sets(d);
        std::vector<OperatorSet> sets{first, second};
        return name == "hv" ? sets : inverse_ordered(sets);
    }
    auto sets = build_shift_sets(d, m);
    return name == "shift" ? sets : inverse_ordered(sets);
}

json cycles_of(const std::vector<OperatorSet> &sets) {
    json out = json::array();
    for (const auto &set : sets) {
        json members = json::array();
        for (size_t i = 1; i < set.members().size(); i++) {
            members.push_back(format_cycles(set.members()[i]));
        }
        out.push_back(members);
    }
    return out;
}

std::string sets_text(const std::vector<OperatorSet> &sets) {
    std::string out;
    for (size_t j = 0; j < sets.size(); j++) {
        if (j) {
            out += ";";
        }
        for (size_t i = 1; i < sets[j].members().size(); i++) {
            out += (i > 1 ? "," : "") + format_cycles(sets[j].members()[i]);
        }
    }
    return out;
}

std::string join_ints(const std::vector<int64_t> &values) {
    std::string out;
    for (size_t i = 0; i < values.size(); i++) {
        out += (i ? " " : "") + std::to_string(values[i]);
    }
    return out;
}

struct Settings {
    size_t d = 2;
    size_t m = 2;
    std::string alice;
    std::string bob;
    uint64_t seed = 0;
    std::string format = "json";
    std::string out;
    std::string direction = "transfer";
    std::string policy = "enumerate";
    std::string outcomes;
    std::string input = "random";
    std::string feedforward = "local";
    bool emit_state = false;
    std::string family = "pairwise";
    std::string objective = "any";
    uint64_t budget = 20'000'000;
    std::optional<double> alpha;
    std::optional<double> epsilon;
    std::optional<double> alpha_min;
    double alpha_max = 0;
    double alpha_step = 1;
    std::string epsilons = "1e-2,1e-3,1e-4,1e-5,1e-6";
};

Direction parse_direction(const std::string &text) {
    if (text == "transfer") {
        return Direction::transfer;
    }
    if (text == "teleport") {
        return Direction::teleport;
    }
    throw UsageError("direction must be transfer or teleport");
}

void require_format(const std::string &format, std::initializer_list<const char *> allowed) {
    for (const char *a : allowed) {
        if (format == a) {
            return;
        }
    }
    throw UsageError("unsupported --format '" + format + "' for this command");
}

InteractionSpec build_spec(const Settings &s) {
    if (s.alice.empty() || s.bob.empty()) {
        throw UsageError("--alice and --bob are required");
    }
    return InteractionSpec(s.d, s.m, parse_set_spec(s.alice, s.d, s.m), parse_set_spec(s.bob, s.d, s.m));
}

json spec_json(const InteractionSpec &spec) {
    return json{{"d", spec.d()}, {"m", spec.m()}, {"alice", cycles_of(spec.alice())}, {"bob", cycles_of(spec.bob())}};
}

json state_json(const StateVector &state) {
    json amps = json::array();
    for (const auto &a : state.amplitudes()) {
        amps.push_back(json::array({a.real(), a.imag()}));
    }
    return json{{"dims", state.dims()}, {"amplitudes", amps}};
}

int cmd_simulate(const Settings &s, std::ostream &out) {
    require_format(s.format, {"json", "csv", "pretty"});
    Direction direction = parse_direction(s.direction);
    FeedForwardMode mode;
    if (s.feedforward == "local") {
        mode = FeedForwardMode::local;
    } else if (s.feedforward == "restore") {
        mode = FeedForwardMode::restore;
    } else {
        throw UsageError("--feedforward must be local or restore");
    }
    OutcomePolicy policy;
    if (s.policy == "enumerate") {
        policy = EnumerateAllPolicy{};
    } else if (s.policy == "sample") {
        policy = SamplePolicy{s.seed};
    } else if (s.policy == "forced") {
        auto parts = split_top(s.outcomes, ';');
        if (parts.size() != 2) {
            throw UsageError("--outcomes must look like 'a1,a2,...;bus'");
        }
        ForcedPolicy forced;
        for (const auto &token : split_top(parts[0], ',')) {
            int64_t a = parse_integer(token, "Alice outcome");
            if (a < 0) {
                throw UsageError("outcomes must be non-negative");
            }
            forced.alice_outcomes.push_back(static_cast<size_t>(a));
        }
        int64_t bus = parse_integer(parts[1], "bus outcome");
        if (bus < 0) {
            throw UsageError("outcomes must be non-negative");
        }
        forced.bus_outcome = static_cast<uint32_t>(bus);
        policy = forced;
    } else {
        throw UsageError("--policy must be enumerate, sample or forced");
    }
    InteractionSpec spec = build_spec(s);
    StateVector input = parse_input(s.input, s.d, s.m, s.seed);
    auto traces = run_protocol(direction, input, spec, policy, RunOptions{mode, kernels::Execution::parallel});

    bool all_exact = true;
    if (s.format == "csv") {
        out << "direction,alice_outcomes,bus_outcome,correction,phase_powers,target_gate,fidelity\n";
    }
    for (const auto &t : traces) {
        all_exact = all_exact && std::abs(t.fidelity - 1) <= kExactTolerance;
        std::vector<int64_t> outcomes(t.alice_outcomes.begin(), t.alice_outcomes.end());
        if (s.format == "json") {
            json record{
                {"direction", direction_name(t.direction)},
                {"spec", spec_json(spec)},
                {"alice_outcomes", t.alice_outcomes},
                {"bus_outcome", t.bus_outcome},
                {"correction",
                 {{"permutation_cycles", format_cycles(t.correction.permutation)},
                  {"phase_powers", t.correction.phase_powers}}},
                {"target_gate", target_gate_label(t.target_gate)},
                {"fidelity", t.fidelity},
            };
            if (s.emit_state) {
                record["output"] = state_json(t.output);
            }
            out << record.dump() << '\n';
        } else if (s.format == "csv") {
            char buffer[64];
            std::snprintf(buffer, sizeof buffer, "%.17g", t.fidelity);
            out << direction_name(t.direction) << ',' << join_ints(outcomes) << ',' << t.bus_outcome << ",\""
                << format_cycles(t.correction.permutation) << "\"," << join_ints(t.correction.phase_powers) << ",\""
                << target_gate_label(t.target_gate) << "\"," << buffer << '\n';
        } else {
            char buffer[64];
            std::snprintf(buffer, sizeof buffer, "%.15f", t.fidelity);
            std::string correction = format_cycles(t.correction.permutation);
            out << "alice=[" << join_ints(outcomes) << "] bus=" << t.bus_outcome
                << " correction=" << (correction.empty() ? "I" : correction) << " phases=["
                << join_ints(t.correction.phase_powers) << "] target=" << target_gate_label(t.target_gate)
                << " fidelity=" << buffer << '\n';
        }
    }
    return all_exact ? kExitOk : kExitFidelity;
}

int cmd_matrix(const Settings &s, std::ostream &out) {
    require_format(s.format, {"json", "csv", "pretty"});
    Direction direction = parse_direction(s.direction);
    InteractionSpec spec = build_spec(s);
    PreMeasurementMatrix matrix = premeasurement_matrix(spec, direction);
    MappingClass mapping = classify_mapping(matrix);
    if (s.format == "pretty") {
        out << render_matrix(matrix, true);
        out << "class: " << mapping_kind_name(mapping.kind) << "\nmaximal: " << (mapping.maximal ? "true" : "false")
            << "\nper-outcome:";
        for (auto k : mapping.per_outcome) {
            out << ' ' << (k == OutcomeKind::local ? "local" : "entangling");
        }
        out << '\n';
        return kExitOk;
    }
    if (s.format == "csv") {
        std::string plain = render_matrix(matrix, false);
        std::replace(plain.begin(), plain.end(), ' ', ',');
        out << plain;
        return kExitOk;
    }
    json rows = json::array();
    for (size_t r = 0; r < matrix.dim(); r++) {
        auto row = matrix.row(r);
        rows.push_back(std::vector<uint32_t>(row.begin(), row.end()));
    }
    json per_outcome = json::array();
    json perms = json::array();
    for (uint32_t label = 0; label < matrix.dim(); label++) {
        per_outcome.push_back(mapping.per_outcome[label] == OutcomeKind::local ? "local" : "entangling");
        perms.push_back(format_cycles(outcome_permutation(matrix, label)));
    }
    json record{
        {"direction", direction_name(direction)},
        {"spec", spec_json(spec)},
        {"matrix", rows},
        {"class", mapping_kind_name(mapping.kind)},
        {"maximal", mapping.maximal},
        {"per_outcome", per_outcome},
        {"outcome_permutations", perms},
    };
    out << record.dump() << '\n';
    return kExitOk;
}

int cmd_search(const Settings &s, std::ostream &out) {
    require_format(s.format, {"json", "csv"});
    SearchOptions options;
    options.d = s.d;
    options.budget = s.budget;
    static const std::map<std::string, SearchFamily> families{
        {"pairwise", SearchFamily::pairwise_cyclic},
        {"hv", SearchFamily::hv_products},
        {"shift", SearchFamily::shift_powers},
        {"exhaustive", SearchFamily::exhaustive},
    };
    static const std::map<std::string, Objective> objectives{
        {"any", Objective::any_valid},   {"local", Objective::local},     {"entangling", Objective::entangling},
        {"combined", Objective::combined}, {"maximal", Objective::maximal},
    };
    auto family = families.find(s.family);
    if (family == families.end()) {
        throw UsageError("--family must be pairwise, hv, shift or exhaustive");
    }
    auto objective = objectives.find(s.objective);
    if (objective == objectives.end()) {
        throw UsageError("--objective must be any, local, entangling, combined or maximal");
    }
    options.family = family->second;
    options.objective = objective->second;
    SearchResult result = search_sets(options);
    if (s.format == "csv") {
        out << "alice,bob,class,maximal\n";
    }
    for (const auto &hit : result.hits) {
        if (s.format == "csv") {
            out << '"' << sets_text(hit.alice) << "\",\"" << sets_text(hit.bob) << "\","
                << mapping_kind_name(hit.mapping.kind) << ',' << (hit.mapping.maximal ? "true" : "false") << '\n';
        } else {
            json record{
                {"alice", cycles_of(hit.alice)},
                {"bob", cycles_of(hit.bob)},
                {"class", mapping_kind_name(hit.mapping.kind)},
                {"maximal", hit.mapping.maximal},
            };
            out << record.dump() << '\n';
        }
    }
    json summary{
        {"hits", result.hits.size()},
        {"valid_families", result.valid_families},
        {"specs_classified", result.specs_classified},
        {"budget_exceeded", result.budget_exceeded},
    };
    if (s.format == "csv") {
        out << "# summary " << summary.dump() << '\n';
    } else {
        out << json{{"summary", summary}}.dump() << '\n';
    }
    return result.budget_exceeded ? kExitBudget : kExitOk;
}

std::vector<double> parse_reals(std::string_view text, const char *what) {
    std::vector<double> values;
    for (const auto &token : split_top(text, ',')) {
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (token.empty() || used != token.size()) {
            throw UsageError(std::string("malformed ") + what + ": '" + token + "'");
        }
        values.push_back(v);
    }
    return values;
}

int cmd_cvbus(const Settings &s, std::ostream &out) {
    if (s.alpha_min) {
        std::string format = s.format == "json" ? "csv" : s.format;
        require_format(format, {"csv"});
        auto rows = sweep(*s.alpha_min, s.alpha_max, s.alpha_step, parse_reals(s.epsilons, "epsilon list"));
        out << sweep_csv(rows);
        return kExitOk;
    }
    if (!s.alpha || !s.epsilon) {
        throw UsageError("cvbus needs --alpha and --epsilon, or a sweep via --alpha-min/--alpha-max");
    }
    DimensionBound bound = max_dimension_bound(*s.alpha, *s.epsilon);
    SweepRow row = sweep(*s.alpha, *s.alpha, 1, {*s.epsilon}).front();
    if (s.format == "csv") {
        out << sweep_csv({row});
        return kExitOk;
    }
    require_format(s.format, {"json"});
    json record{
        {"alpha", row.alpha},
        {"epsilon", row.epsilon},
        {"theta", row.theta},
        {"d_max_real", bound.real},
        {"d_max", bound.floor},
        {"qubit_capacity", row.qubit_capacity},
        {"flagged", bound.flagged},
    };
    out << record.dump() << '\n';
    return kExitOk;
}

void add_common(CLI::App *sub, Settings &s) {
    sub->add_option("--seed", s.seed, "RNG seed");
    sub->add_option("--format", s.format, "json, csv or pretty");
    sub->add_option("--out", s.out, "Write records to this file");
    sub->add_option("--config", "JSON config file; flags override it");
}

void add_spec(CLI::App *sub, Settings &s) {
    sub->add_option("--d", s.d, "Subsystem dimension");
    sub->add_option("--m", s.m, "Subsystem count");
    sub->add_option("--alice", s.alice, "Alice's sets");
    sub->add_option("--bob", s.bob, "Bob's sets");
    sub->add_option("--direction", s.direction, "transfer or teleport");
}

std::string config_value(const json &value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    if (value.is_array()) {
        std::string out;
        for (size_t i = 0; i < value.size(); i++) {
            out += (i ? "," : "") + config_value(value[i]);
        }
        return out;
    }
    return value.dump();
}

void write_error(std::ostream &err, int code, const std::string &kind, const std::string &message) {
    err << json{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

Permutation parse_operator(std::string_view token, size_t d, size_t m) {
    std::string text = trim(token);
    const size_t dim = checked_pow(d, m, kDefaultMaxBusSize);
    if (text.empty()) {
        throw UsageError("empty operator");
    }
    if (text.front() == '(') {
        return parse_cycles(text, dim);
    }
    text = lower(text);
    int64_t power = 1;
    if (auto caret = text.find('^'); caret != std::string::npos) {
        power = parse_integer(std::string_view(text).substr(caret + 1), "operator power");
        text.resize(caret);
    }
    return named_base(text, d, m).pow(power);
}

std::vector<OperatorSet> parse_set_spec(std::string_view text, size_t d, size_t m) {
    if (d < 2 || m < 1) {
        throw UsageError("need d >= 2 and m >= 1");
    }
    std::string name = lower(trim(text));
    if (name == "hv" || name == "hv-inverse" || name == "shift" || name == "shift-inverse") {
        return family_sets(name, d, m);
    }
    const size_t dim = checked_pow(d, m, kDefaultMaxBusSize);
    std::vector<std::vector<std::string>> groups;
    if (text.find(';') != std::string_view::npos) {
        for (const auto &part : split_top(text, ';')) {
            groups.push_back(split_top(part, ','));
        }
    } else {
        auto tokens = split_top(text, ',');
        if (tokens.size() != m * (d - 1)) {
            throw UsageError("expected " + std::to_string(m * (d - 1)) + " operators (d-1 per set), got " +
                             std::to_string(tokens.size()));
        }
        for (size_t j = 0; j < m; j++) {
            groups.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(j * (d - 1)),
                                tokens.begin() + static_cast<std::ptrdiff_t>((j + 1) * (d - 1)));
        }
    }
    if (groups.size() != m) {
        throw UsageError("expected " + std::to_string(m) + " sets, got " + std::to_string(groups.size()));
    }
    std::vector<OperatorSet> sets;
    for (const auto &group : groups) {
        if (group.size() != d - 1) {
            throw UsageError("each set needs d-1 = " + std::to_string(d - 1) + " non-identity operators");
        }
        std::vector<Permutation> members{Permutation::identity(dim)};
        for (const auto &token : group) {
            members.push_back(parse_operator(token, d, m));
        }
        sets.emplace_back(std::move(members));
    }
    return sets;
}

StateVector parse_input(std::string_view text, size_t d, size_t m, uint64_t seed) {
    std::vector<size_t> dims(m, d);
    std::string t = trim(text);
    if (t == "random") {
        return random_state(dims, seed);
    }
    if (t == "uniform") {
        return StateVector::uniform(dims);
    }
    if (t.rfind("basis:", 0) == 0) {
        int64_t k = parse_integer(std::string_view(t).substr(6), "basis index");
        if (k < 0) {
            throw UsageError("basis index must be non-negative");
        }
        return StateVector::basis(dims, static_cast<size_t>(k));
    }
    json parsed;
    try {
        parsed = json::parse(t);
    } catch (const json::exception &) {
        throw UsageError("--input must be random, uniform, basis:K or JSON amplitudes");
    }
    if (parsed.is_object()) {
        if (!parsed.contains("amplitudes")) {
            throw UsageError("input object needs an \"amplitudes\" field");
        }
        if (parsed.contains("dims") && parsed["dims"].get<std::vector<size_t>>() != dims) {
            throw UsageError("input dims do not match --d/--m");
        }
        parsed = parsed["amplitudes"];
    }
    if (!parsed.is_array()) {
        throw UsageError("input amplitudes must be an array");
    }
    std::vector<Amplitude> amps;
    try {
        for (const auto &entry : parsed) {
            if (entry.is_array()) {
                if (entry.size() != 2) {
                    throw UsageError("complex amplitudes are [re, im] pairs");
                }
                amps.emplace_back(entry[0].get<double>(), entry[1].get<double>());
            } else {
                amps.emplace_back(entry.get<double>(), 0.0);
            }
        }
    } catch (const json::exception &) {
        throw UsageError("input amplitudes must be numbers or [re, im] pairs");
    }
    return StateVector(dims, std::move(amps));
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Settings s;
    CLI::App app{"qudit bus protocol simulator"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CLI::App *simulate = app.add_subcommand("simulate", "Run the transfer or teleport protocol");
    add_spec(simulate, s);
    add_common(simulate, s);
    simulate->add_option("--policy", s.policy, "enumerate, sample or forced");
    simulate->add_option("--outcomes", s.outcomes, "Forced outcomes 'a1,a2;bus'");
    simulate->add_option("--input", s.input, "random, uniform, basis:K or JSON amplitudes");
    simulate->add_option("--feedforward", s.feedforward, "local or restore");
    simulate->add_flag("--emit-state", s.emit_state, "Include Bob's corrected state");

    CLI::App *matrix = app.add_subcommand("matrix", "Pre-measurement matrix and mapping class");
    add_spec(matrix, s);
    add_common(matrix, s);

    CLI::App *search = app.add_subcommand("search", "Search interaction set families");
    search->add_option("--d", s.d, "Subsystem dimension");
    add_common(search, s);
    search->add_option("--family", s.family, "pairwise, hv, shift or exhaustive");
    search->add_option("--objective", s.objective, "any, local, entangling, combined or maximal");
    search->add_option("--budget", s.budget, "Cap on validity checks plus classifications");

    CLI::App *cvbus = app.add_subcommand("cvbus", "Coherent-state bus capacity");
    add_common(cvbus, s);
    cvbus->add_option("--alpha", s.alpha, "Coherent amplitude");
    cvbus->add_option("--epsilon", s.epsilon, "Adjacent-slot overlap tolerance");
    cvbus->add_option("--alpha-min", s.alpha_min, "Sweep start");
    cvbus->add_option("--alpha-max", s.alpha_max, "Sweep end");
    cvbus->add_option("--alpha-step", s.alpha_step, "Sweep step");
    cvbus->add_option("--epsilons", s.epsilons, "Comma-separated epsilons for the sweep");

    try {
        // Config values go in front of the command-line flags so the flags win.
        std::vector<std::string> argv = args;
        std::optional<std::string> config_path;
        for (size_t i = 0; i < argv.size(); i++) {
            if (argv[i] == "--config" && i + 1 < argv.size()) {
                config_path = argv[i + 1];
            } else if (argv[i].rfind("--config=", 0) == 0) {
                config_path = argv[i].substr(9);
            }
        }
        if (config_path) {
            std::ifstream file(*config_path);
            if (!file) {
                throw UsageError("cannot open config file '" + *config_path + "'");
            }
            json config;
            try {
                config = json::parse(file);
            } catch (const json::exception &e) {
                throw UsageError(std::string("config file is not valid JSON: ") + e.what());
            }
            if (!config.is_object()) {
                throw UsageError("config file must hold a JSON object");
            }
            auto command_pos = std::find_if(argv.begin(), argv.end(), [&](const std::string &a) {
                return a == "simulate" || a == "matrix" || a == "search" || a == "cvbus";
            });
            if (command_pos == argv.end()) {
                if (!config.contains("command") || !config["command"].is_string()) {
                    throw UsageError("no command given on the command line or in the config file");
                }
                argv.insert(argv.begin(), config["command"].get<std::string>());
                command_pos = argv.begin();
            }
            CLI::App *sub = app.get_subcommand_no_throw(*command_pos);
            if (!sub) {
                throw UsageError("unknown command '" + *command_pos + "'");
            }
            std::vector<std::string> injected;
            for (const auto &[key, value] : config.items()) {
                if (key == "command") {
                    if (config_value(value) != *command_pos) {
                        throw UsageError("config command does not match the command line");
                    }
                    continue;
                }
                if (key == "config" || sub->get_option_no_throw("--" + key) == nullptr) {
                    throw UsageError("unknown config key '" + key + "'");
                }
                if (value.is_boolean()) {
                    if (value.get<bool>()) {
                        injected.push_back("--" + key);
                    }
                    continue;
                }
                injected.push_back("--" + key);
                injected.push_back(config_value(value));
            }
            argv.insert(command_pos + 1, injected.begin(), injected.end());
        }
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        write_error(err, kExitInvalid, "usage", e.what());
        return kExitInvalid;
    } catch (const UsageError &e) {
        write_error(err, kExitInvalid, "usage", e.what());
        return kExitInvalid;
    }

    std::ostringstream buffer;
    int code = kExitOk;
    try {
        if (simulate->parsed()) {
            code = cmd_simulate(s, buffer);
        } else if (matrix->parsed()) {
            code = cmd_matrix(s, buffer);
        } else if (search->parsed()) {
            code = cmd_search(s, buffer);
        } else {
            code = cmd_cvbus(s, buffer);
        }
    } catch (const InvalidSpecError &e) {
        write_error(err, kExitInvalid, "invalid_spec", e.what());
        return kExitInvalid;
    } catch (const NotLatinError &e) {
        write_error(err, kExitInvalid, "invalid_spec", e.what());
        return kExitInvalid;
    } catch (const std::invalid_argument &e) {
        write_error(err, kExitInvalid, "invalid_input", e.what());
        return kExitInvalid;
    } catch (const std::exception &e) {
        write_error(err, kExitInvalid, "error", e.what());
        return kExitInvalid;
    }
    if (s.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(s.out, std::ios::binary);
        if (!file) {
            write_error(err, kExitInvalid, "invalid_input", "cannot open output file '" + s.out + "'");
            return kExitInvalid;
        }
        file << buffer.str();
    }
    return code;
}

}  // namespace qbus::cli

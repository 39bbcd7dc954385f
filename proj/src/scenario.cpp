#include "sircontrol/scenario.hpp"

#include "sircontrol/format.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace sir {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

struct Parsed {
    std::string name;
    std::map<std::string, Entry> entries;

    [[noreturn]] void fail(int line, const std::string& what) const {
        std::ostringstream msg;
        msg << name << ':' << line << ": " << what;
        throw ScenarioError(msg.str());
    }

    std::optional<Entry> take(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        Entry e = it->second;
        entries.erase(it);
        return e;
    }

    Entry require(const std::string& key, const std::string& kind, int kind_line) {
        auto e = take(key);
        if (!e) fail(kind_line, "strategy kind '" + kind + "' requires key '" + key + "'");
        return *e;
    }

    double number(const std::string& key, const Entry& e) const {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0')
            fail(e.line, "invalid number for '" + key + "': '" + e.value + "'");
        return v;
    }

    std::vector<double> numbers(const std::string& key, const Entry& e) const {
        std::vector<double> out;
        std::stringstream parts(e.value);
        std::string part;
        while (std::getline(parts, part, ',')) {
            const char* begin = part.c_str();
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            while (*end == ' ' || *end == '\t') ++end;
            if (end == begin || *end != '\0')
                fail(e.line, "invalid number list for '" + key + "': '" + e.value + "'");
            out.push_back(v);
        }
        if (out.empty()) fail(e.line, "empty number list for '" + key + "'");
        return out;
    }
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

Parsed read_entries(std::istream& in, std::string_view name) {
    Parsed parsed;
    parsed.name = name;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view stripped = trim(raw);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string_view::npos)
            parsed.fail(line, "expected 'key = value', got '" + std::string(stripped) + "'");
        const std::string key{trim(stripped.substr(0, eq))};
        const std::string value{trim(stripped.substr(eq + 1))};
        if (key.empty()) parsed.fail(line, "missing key before '='");
        if (value.empty()) parsed.fail(line, "missing value for '" + key + "'");
        if (!parsed.entries.emplace(key, Entry{value, line}).second)
            parsed.fail(line, "duplicate key '" + key + "'");
    }
    return parsed;
}

ControlStrategy parse_strategy(Parsed& p, const Entry& kind_entry) {
    const std::string& kind = kind_entry.value;
    const int at = kind_entry.line;
    if (kind == "zero") {
        return ZeroControl{};
    } else if (kind == "piecewise_constant") {
        PiecewiseConstant c;
        c.knots = p.numbers("strategy.times", p.require("strategy.times", kind, at));
        c.levels = p.numbers("strategy.levels", p.require("strategy.levels", kind, at));
        return c;
    } else if (kind == "single_lockdown") {
        SingleLockdown c{};
        c.start = p.number("strategy.start", p.require("strategy.start", kind, at));
        c.duration = p.number("strategy.duration", p.require("strategy.duration", kind, at));
        c.level = p.number("strategy.level", p.require("strategy.level", kind, at));
        return c;
    } else if (kind == "maintain_feedback") {
        MaintainFeedback c{};
        c.start = p.number("strategy.start", p.require("strategy.start", kind, at));
        c.end_time = p.number("strategy.end", p.require("strategy.end", kind, at));
        if (auto budget = p.take("strategy.budget")) c.budget = p.number("strategy.budget", *budget);
        if (auto clamp = p.take("strategy.clamp")) c.clamp = p.number("strategy.clamp", *clamp);
        return c;
    } else if (kind == "wait_maintain_suppress_relax") {
        WaitMaintainSuppressRelax c{};
        c.t1 = p.number("strategy.t1", p.require("strategy.t1", kind, at));
        c.t2 = p.number("strategy.t2", p.require("strategy.t2", kind, at));
        c.t3 = p.number("strategy.t3", p.require("strategy.t3", kind, at));
        return c;
    } else if (kind == "reff_threshold") {
        ReffThreshold c{};
        c.level = p.number("strategy.level", p.require("strategy.level", kind, at));
        c.threshold = p.number("strategy.threshold", p.require("strategy.threshold", kind, at));
        c.end_time = p.number("strategy.end", p.require("strategy.end", kind, at));
        return c;
    }
    p.fail(at, "unknown strategy kind '" + kind + "'");
}

} // namespace

Scenario parse_scenario(std::istream& in, std::string_view name) {
    Parsed p = read_entries(in, name);
    Scenario scenario;

    double beta = scenario.params.beta, gamma = scenario.params.gamma;
    double s0 = scenario.initial.s, i0 = scenario.initial.i;
    if (auto e = p.take("beta")) beta = p.number("beta", *e);
    if (auto e = p.take("gamma")) gamma = p.number("gamma", *e);
    if (auto e = p.take("s0")) s0 = p.number("s0", *e);
    if (auto e = p.take("i0")) i0 = p.number("i0", *e);
    if (auto e = p.take("step")) scenario.solver.step = p.number("step", *e);
    if (auto e = p.take("horizon")) scenario.solver.horizon = p.number("horizon", *e);
    if (auto e = p.take("extinction_threshold"))
        scenario.solver.extinction_threshold = p.number("extinction_threshold", *e);

    std::optional<Entry> kind = p.take("strategy.kind");
    std::optional<ControlStrategy> strategy;
    if (kind) strategy = parse_strategy(p, *kind);

    auto c1 = p.take("budgets.c1");
    auto c_inf = p.take("budgets.c_inf");
    if (c1.has_value() != c_inf.has_value())
        p.fail(c1 ? c1->line : c_inf->line, "budgets.c1 and budgets.c_inf must be given together");
    if (c1) {
        Budgets budgets;
        budgets.c1 = p.numbers("budgets.c1", *c1);
        budgets.c_inf = p.numbers("budgets.c_inf", *c_inf);
        scenario.budgets = std::move(budgets);
    }

    if (!p.entries.empty()) {
        const auto& [key, entry] = *p.entries.begin();
        p.fail(entry.line, "unknown key '" + key + "'");
    }

    // Construct validated objects; keep error kinds, add file context.
    const std::string where{name};
    try {
        scenario.params = EpidemicParams(beta, gamma);
        scenario.initial = EpidemicState(s0, i0);
        validate(scenario.solver);
        if (strategy) {
            validate(*strategy);
            scenario.strategy = std::move(strategy);
        }
    } catch (const InvalidParams& e) {
        throw InvalidParams(where + ": " + e.what());
    } catch (const InvalidState& e) {
        throw InvalidState(where + ": " + e.what());
    } catch (const InvalidOptions& e) {
        throw InvalidOptions(where + ": " + e.what());
    } catch (const InvalidControl& e) {
        throw InvalidControl(where + ": " + e.what());
    }
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ScenarioError("cannot open scenario file '" + file.string() + "'");
    return parse_scenario(in, file.string());
}

void write_scenario(std::ostream& out, const Scenario& scenario) {
    out << "beta = " << format_full(scenario.params.beta) << '\n'
        << "gamma = " << format_full(scenario.params.gamma) << '\n'
        << "s0 = " << format_full(scenario.initial.s) << '\n'
        << "i0 = " << format_full(scenario.initial.i) << '\n'
        << "step = " << format_full(scenario.solver.step) << '\n'
        << "horizon = " << format_full(scenario.solver.horizon) << '\n'
        << "extinction_threshold = " << format_full(scenario.solver.extinction_threshold) << '\n';

    if (scenario.strategy) {
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, ZeroControl>) {
                    out << "strategy.kind = zero\n";
                } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                    out << "strategy.kind = piecewise_constant\n" << "strategy.times = ";
                    for (std::size_t k = 0; k < c.knots.size(); ++k)
                        out << (k ? ", " : "") << format_full(c.knots[k]);
                    out << "\nstrategy.levels = ";
                    for (std::size_t k = 0; k < c.levels.size(); ++k)
                        out << (k ? ", " : "") << format_full(c.levels[k]);
                    out << '\n';
                } else if constexpr (std::is_same_v<T, SingleLockdown>) {
                    out << "strategy.kind = single_lockdown\n"
                        << "strategy.start = " << format_full(c.start) << '\n'
                        << "strategy.duration = " << format_full(c.duration) << '\n'
                        << "strategy.level = " << format_full(c.level) << '\n';
                } else if constexpr (std::is_same_v<T, MaintainFeedback>) {
                    out << "strategy.kind = maintain_feedback\n"
                        << "strategy.start = " << format_full(c.start) << '\n'
                        << "strategy.end = " << format_full(c.end_time) << '\n';
                    if (std::isfinite(c.budget))
                        out << "strategy.budget = " << format_full(c.budget) << '\n';
                    out << "strategy.clamp = " << format_full(c.clamp) << '\n';
                } else if constexpr (std::is_same_v<T, WaitMaintainSuppressRelax>) {
                    out << "strategy.kind = wait_maintain_suppress_relax\n"
                        << "strategy.t1 = " << format_full(c.t1) << '\n'
                        << "strategy.t2 = " << format_full(c.t2) << '\n'
                        << "strategy.t3 = " << format_full(c.t3) << '\n';
                } else {
                    static_assert(std::is_same_v<T, ReffThreshold>);
                    out << "strategy.kind = reff_threshold\n"
                        << "strategy.level = " << format_full(c.level) << '\n'
                        << "strategy.threshold = " << format_full(c.threshold) << '\n'
                        << "strategy.end = " << format_full(c.end_time) << '\n';
                }
            },
            *scenario.strategy);
    }

    if (scenario.budgets) {
        out << "budgets.c1 = ";
        for (std::size_t k = 0; k < scenario.budgets->c1.size(); ++k)
            out << (k ? ", " : "") << format_full(scenario.budgets->c1[k]);
        out << "\nbudgets.c_inf = ";
        for (std::size_t k = 0; k < scenario.budgets->c_inf.size(); ++k)
            out << (k ? ", " : "") << format_full(scenario.budgets->c_inf[k]);
        out << '\n';
    }
}

} // namespace sir

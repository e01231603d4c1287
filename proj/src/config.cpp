#include "memsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>

namespace memsim {

ExperimentSetup FullConfig::setup() const {
    ExperimentSetup s;
    s.cv = cv;
    s.mod = mod;
    s.tuning = tuning;
    s.soma = soma;
    s.memristor = memristor;
    s.dt = sim.dt;
    s.spike_width = spike_width;
    s.spike_amplitude = spike_amplitude;
    s.t0 = t0;
    return s;
}

namespace {

struct Value {
    enum class Kind { number, string, boolean, array } kind = Kind::number;
    double num = 0.0;
    std::string str;
    bool b = false;
    std::vector<Value> arr;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

Value parse_value(const std::string& s, std::size_t& i, int line) {
    skip_ws(s, i);
    if (i >= s.size()) fail(line, "missing value");
    const char c = s[i];
    if (c == '"') {
        Value v;
        v.kind = Value::Kind::string;
        ++i;
        while (i < s.size() && s[i] != '"') {
            if (s[i] == '\\' && i + 1 < s.size()) ++i;
            v.str += s[i++];
        }
        if (i >= s.size()) fail(line, "unterminated string");
        ++i;
        return v;
    }
    if (c == '[') {
        Value v;
        v.kind = Value::Kind::array;
        ++i;
        skip_ws(s, i);
        if (i < s.size() && s[i] == ']') {
            ++i;
            return v;
        }
        for (;;) {
            v.arr.push_back(parse_value(s, i, line));
            skip_ws(s, i);
            if (i < s.size() && s[i] == ',') {
                ++i;
                skip_ws(s, i);
                if (i < s.size() && s[i] == ']') { ++i; return v; } // trailing comma
                continue;
            }
            if (i < s.size() && s[i] == ']') {
                ++i;
                return v;
            }
            fail(line, "expected ',' or ']' in array");
        }
    }
    if (s.compare(i, 4, "true") == 0) {
        i += 4;
        return Value{Value::Kind::boolean, 0.0, {}, true, {}};
    }
    if (s.compare(i, 5, "false") == 0) {
        i += 5;
        return Value{Value::Kind::boolean, 0.0, {}, false, {}};
    }
    // Number.
    std::size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '+' ||
                            s[i] == '-' || s[i] == '.' || s[i] == '_'))
        ++i;
    std::string tok = s.substr(start, i - start);
    std::erase(tok, '_');
    double num = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), num);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        fail(line, "cannot parse value '" + tok + "'");
    Value v;
    v.num = num;
    return v;
}

// Strip a # comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

int bracket_balance(const std::string& s) {
    int depth = 0;
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        if (in_str) continue;
        if (s[i] == '[') ++depth;
        if (s[i] == ']') --depth;
    }
    return depth;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

FullConfig parse_config(const std::string& text) {
    FullConfig cfg;

    using Setter = std::function<void(const Value&, int)>;
    std::map<std::string, Setter> setters;
    auto need_num = [](const Value& v, int line) {
        if (v.kind != Value::Kind::number) fail(line, "expected a number");
        return v.num;
    };
    auto need_str = [](const Value& v, int line) {
        if (v.kind != Value::Kind::string) fail(line, "expected a string");
        return v.str;
    };
    auto num = [&](const std::string& key, double* dst) {
        setters[key] = [dst, need_num](const Value& v, int line) { *dst = need_num(v, line); };
    };

    num("r4", &cfg.cv.r4);
    num("c1", &cfg.cv.c1);
    num("c3", &cfg.cv.c3);
    num("r8", &cfg.cv.r8);
    num("r9", &cfg.cv.r9);
    num("r11", &cfg.cv.r11);
    num("mod_pot_total_ohms", &cfg.cv.mod_pot_total);
    num("mod_wiper", &cfg.cv.mod_wiper);
    num("v_rail", &cfg.cv.v_rail);
    num("v_threshold_oneshot", &cfg.cv.v_threshold_oneshot);
    setters["mod_mode"] = [&](const Value& v, int line) {
        const std::string m = need_str(v, line);
        if (m == "linear")
            cfg.mod.mode = ModMode::linear;
        else if (m == "sombrero")
            cfg.mod.mode = ModMode::sombrero;
        else
            fail(line, "mod_mode must be \"linear\" or \"sombrero\"");
    };

    num("mod.gain_min", &cfg.mod.gain_min);
    num("mod.gain_max", &cfg.mod.gain_max);
    num("mod.sombrero_center", &cfg.mod.sombrero_center);
    num("mod.sombrero_width", &cfg.mod.sombrero_width);

    num("memristor.g0", &cfg.memristor.g);
    num("memristor.g_min", &cfg.memristor.g_min);
    num("memristor.g_max", &cfg.memristor.g_max);
    num("memristor.v_th_set", &cfg.memristor.v_th_set);
    num("memristor.v_th_reset", &cfg.memristor.v_th_reset);
    num("memristor.mu", &cfg.memristor.mu);

    num("soma.tau_mem", &cfg.soma.tau_mem);
    num("soma.v_threshold", &cfg.soma.v_threshold);
    num("soma.v_reset", &cfg.soma.v_reset);
    num("soma.refractory", &cfg.soma.refractory);
    num("soma.spike_width", &cfg.soma.spike_width);
    num("soma.spike_amplitude", &cfg.soma.spike_amplitude);
    num("soma.c_norm", &cfg.soma.c_norm);

    num("tuning.adder_gain", &cfg.tuning.adder_gain);
    num("tuning.tau_output", &cfg.tuning.tau_output);
    num("tuning.tau_inhibitor", &cfg.tuning.tau_inhibitor);
    num("tuning.tau_key", &cfg.tuning.tau_key);
    num("tuning.key_threshold", &cfg.tuning.key_threshold);
    num("tuning.oneshot_v_high", &cfg.tuning.oneshot_v_high);
    num("tuning.inhibitor_bias", &cfg.tuning.inhibitor_bias);

    num("sim.dt", &cfg.sim.dt);
    num("sim.duration", &cfg.sim.duration);
    setters["sim.mode"] = [&](const Value& v, int line) {
        const std::string m = need_str(v, line);
        if (m == "open_loop")
            cfg.sim.mode = LoopMode::open_loop;
        else if (m == "closed_loop")
            cfg.sim.mode = LoopMode::closed_loop;
        else
            fail(line, "sim.mode must be \"open_loop\" or \"closed_loop\"");
    };
    setters["sim.oneshot_sense"] = [&](const Value& v, int line) {
        const std::string m = need_str(v, line);
        if (m == "integrator_output")
            cfg.sim.oneshot_sense = OneShotSense::integrator_output;
        else if (m == "memristor_node")
            cfg.sim.oneshot_sense = OneShotSense::memristor_node;
        else
            fail(line, "sim.oneshot_sense must be \"integrator_output\" or \"memristor_node\"");
    };
    setters["sim.probes"] = [&](const Value& v, int line) {
        if (v.kind != Value::Kind::array) fail(line, "sim.probes must be an array");
        cfg.sim.probes.clear();
        for (const auto& e : v.arr) cfg.sim.probes.push_back(need_str(e, line));
    };

    setters["experiment.delta_ts"] = [&](const Value& v, int line) {
        if (v.kind != Value::Kind::array) fail(line, "experiment.delta_ts must be an array");
        cfg.experiment.delta_ts.clear();
        for (const auto& e : v.arr) cfg.experiment.delta_ts.push_back(need_num(e, line));
    };
    setters["experiment.da_settings"] = [&](const Value& v, int line) {
        if (v.kind != Value::Kind::array)
            fail(line, "experiment.da_settings must be an array of [label, wiper] pairs");
        cfg.experiment.da_settings.clear();
        for (const auto& e : v.arr) {
            if (e.kind != Value::Kind::array || e.arr.size() != 2)
                fail(line, "each da_settings entry must be [label, wiper]");
            cfg.experiment.da_settings.push_back(
                DaSetting{need_str(e.arr[0], line), need_num(e.arr[1], line)});
        }
    };
    num("experiment.da_delta_t", &cfg.experiment.da_delta_t);
    num("experiment.conductance_duration", &cfg.experiment.conductance_duration);
    num("experiment.da_wiper_low", &cfg.experiment.da_wiper_low);
    num("experiment.da_wiper_high", &cfg.experiment.da_wiper_high);
    num("experiment.spike_width", &cfg.spike_width);
    num("experiment.spike_amplitude", &cfg.spike_amplitude);
    num("experiment.t0", &cfg.t0);

    // Line-based scan with multi-line array continuation.
    std::string section;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = strip_comment(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        const int first_line = line_no;
        while (bracket_balance(line) > 0 && pos <= text.size()) {
            std::size_t nl2 = text.find('\n', pos);
            if (nl2 == std::string::npos) nl2 = text.size();
            line += strip_comment(text.substr(pos, nl2 - pos));
            pos = nl2 + 1;
            ++line_no;
            if (pos > text.size()) break;
        }
        std::string body = trim(line);
        if (body.empty()) {
            if (pos > text.size()) break;
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']') fail(first_line, "malformed table header");
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) fail(first_line, "empty table name");
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) fail(first_line, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty()) fail(first_line, "empty key");
        const std::string full_key = section.empty() ? key : section + "." + key;
        auto it = setters.find(full_key);
        if (it == setters.end()) fail(first_line, "unknown key '" + full_key + "'");
        std::size_t i = eq + 1;
        Value v = parse_value(body, i, first_line);
        skip_ws(body, i);
        if (i != body.size()) fail(first_line, "trailing characters after value");
        it->second(v, first_line);
        if (pos > text.size()) break;
    }

    // The wiper is a schematic component value; mirror it into the
    // modulation stage it physically belongs to.
    cfg.mod.wiper = cfg.cv.mod_wiper;

    // Constraint checks (invalid values are config errors, not runtime ones).
    try {
        cfg.cv.validate();
        cfg.mod.validate();
        cfg.tuning.validate();
        cfg.soma.validate();
        cfg.memristor.validate();
        if (cfg.sim.probes.empty())
            throw std::invalid_argument("sim.probes must not be empty");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(cfg.sim.dt > 0.0)) throw ConfigError("config: sim.dt must be positive");
    if (!(cfg.sim.duration > 0.0)) throw ConfigError("config: sim.duration must be positive");
    const double min_tau =
        std::min({cfg.cv.integrator_tau(), cfg.tuning.tau_output, cfg.tuning.tau_inhibitor,
                  cfg.tuning.tau_key,
                  cfg.sim.mode == LoopMode::closed_loop ? cfg.soma.tau_mem
                                                        : cfg.cv.integrator_tau()});
    if (cfg.sim.dt > min_tau / 10.0)
        throw ConfigError("config: sim.dt exceeds tau/10 for the fastest stage");
    for (double w : {cfg.experiment.da_wiper_low, cfg.experiment.da_wiper_high})
        if (!(w >= 0.0 && w <= 1.0))
            throw ConfigError("config: DA wiper levels must be in [0, 1]");
    return cfg;
}

} // namespace memsim

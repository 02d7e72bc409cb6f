#include "cli.hpp"

#include "qvn/error_estimators.hpp"
#include "qvn/gate_optimizer.hpp"
#include "qvn/system_design.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace qvn::cli {

namespace {

using json = nlohmann::ordered_json;

// every accepted key; values are defaults ("" means optional and unset)
const std::map<std::string, std::map<std::string, std::string>>& known_keys() {
    static const std::map<std::string, std::map<std::string, std::string>> k = {
        {"device",
         {{"n_qubits", "4"},
          {"qubit_freqs", ""},
          {"memory_freqs", "8.3, 8.2, 8.1, 8.0"},
          {"bus_freq", "6.5"},
          {"g_m", "0.1"},
          {"g_b", "0.045"},
          {"eta", "0.3"},
          {"eta2", ""},
          {"park_freq", "10.0"},
          {"off_freq", "7.5"}}},
        {"model", {{"levels", "4"}, {"max_excitations", "3"}, {"rotating_wave", "false"}}},
        {"pulse", {{"qubit", "1"}, {"sigma", ""}, {"t_ramp", ""}, {"t_on", ""}, {"omega_on", ""}}},
        {"run", {{"target_fidelity", "0.999"}}},
        {"estimate",
         {{"kind", "switching"}, {"dt_on", "0.01"}, {"domega_on", "0.001"}, {"losses", "1e-3, 1e-4"}}},
        {"g_optimize",
         {{"g_min", "0.010"}, {"g_max", "0.100"}, {"g_step", "0.001"}, {"confirm", "true"},
          {"confirm_window", "0.010"}}},
        {"cz23",
         {{"qubit_a", "2"}, {"qubit_b", "3"}, {"memory_ramp", "1.3"}, {"bus_ramp", "3.0"}, {"cz_sigma", "1.94"},
          {"cz_ramp", "11.0"}, {"max_excitations", "6"}}},
        {"idle",
         {{"t_ns", "1000"}, {"n", "4"}, {"memory", "1"}, {"subsystem", "true"}, {"rotating_wave", "true"}}},
        {"transmon", {{"etas", "0.2, 0.3, 0.4"}, {"ratio_min", "20"}, {"ratio_max", "100"}, {"ratio_step", "5"}}},
        {"figure", {{"name", "fig4"}, {"points", "51"}}},
    };
    return k;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void check_key(const std::string& section, const std::string& key, const std::string& where) {
    auto sec = known_keys().find(section);
    if (sec == known_keys().end()) throw ConfigError("unknown section [" + section + "] at " + where);
    if (!sec->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "' at " + where);
}

double parse_number(const std::string& raw, const std::string& name) {
    try {
        size_t used = 0;
        double v = std::stod(raw, &used);
        if (trim(raw.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key " + name + ": expected a number, got '" + raw + "'");
}

std::vector<double> parse_list(const std::string& raw, const std::string& name) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_number(item, name));
    }
    return out;
}

bool parse_bool(const std::string& raw, const std::string& name) {
    const std::string v = trim(raw);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key " + name + ": expected a boolean, got '" + raw + "'");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"optimize-cz", "simulate-cz", "estimate", "g-optimize",
                                               "cz23",        "idle-error",  "transmon", "figure-data"};
    return c;
}

Settings default_settings() {
    Settings s;
    for (const auto& [sec, keys] : known_keys())
        for (const auto& [k, v] : keys)
            if (!v.empty()) s[sec][k] = v;
    return s;
}

Settings parse_ini(std::istream& in, const std::string& origin) {
    Settings s;
    std::string line, section;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string where = origin + ":" + std::to_string(n);
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header at " + where);
            section = trim(line.substr(1, line.size() - 2));
            if (!known_keys().count(section)) throw ConfigError("unknown section [" + section + "] at " + where);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value at " + where);
        if (section.empty()) throw ConfigError("key outside any section at " + where);
        const std::string key = trim(line.substr(0, eq));
        check_key(section, key, where);
        s[section][key] = trim(line.substr(eq + 1));
    }
    return s;
}

Settings parse_json_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
    const json& cfg = j.contains("config") ? j["config"] : j;
    if (!cfg.is_object()) throw ConfigError("JSON config must be an object of sections");
    Settings s;
    for (const auto& [sec, keys] : cfg.items()) {
        if (!keys.is_object()) throw ConfigError("JSON section '" + sec + "' must be an object");
        for (const auto& [k, v] : keys.items()) {
            check_key(sec, k, "JSON section " + sec);
            s[sec][k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
    }
    return s;
}

Settings load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_json_config(ss.str());
    }
    return parse_ini(f, path);
}

void merge_settings(Settings& base, const Settings& over, const std::string& origin) {
    for (const auto& [sec, keys] : over)
        for (const auto& [k, v] : keys) {
            check_key(sec, k, origin);
            base[sec][k] = v;
        }
}

void apply_assignment(Settings& s, const std::string& assignment) {
    auto eq = assignment.find('=');
    auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("expected section.key=value, got '" + assignment + "'");
    const std::string sec = trim(assignment.substr(0, dot));
    const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
    check_key(sec, key, "command line");
    s[sec][key] = trim(assignment.substr(eq + 1));
}

bool RunSpec::has(const std::string& section, const std::string& key) const {
    auto it = settings.find(section);
    return it != settings.end() && it->second.count(key) && !it->second.at(key).empty();
}

std::string RunSpec::text(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? settings.at(section).at(key) : fallback;
}

double RunSpec::number(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw ConfigError("missing key " + section + "." + key);
    return parse_number(settings.at(section).at(key), section + "." + key);
}

double RunSpec::number(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

DeviceConfig RunSpec::device() const {
    DeviceConfig d;
    const double n = number("device", "n_qubits");
    if (n != std::floor(n) || n < 1) throw ConfigError("key device.n_qubits: expected a positive integer");
    d.n_qubits = static_cast<int>(n);
    d.memory_freqs = parse_list(text("device", "memory_freqs", ""), "device.memory_freqs");
    if (has("device", "qubit_freqs")) d.qubit_freqs = parse_list(text("device", "qubit_freqs", ""), "device.qubit_freqs");
    d.bus_freq = number("device", "bus_freq");
    d.g_m = number("device", "g_m");
    d.g_b = number("device", "g_b");
    d.eta = number("device", "eta");
    if (has("device", "eta2")) d.eta2 = number("device", "eta2");
    d.park_freq = number("device", "park_freq");
    d.off_freq = number("device", "off_freq");
    try {
        d.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("device: ") + e.what());
    }
    return d;
}

namespace {

int index_key(const RunSpec& s, const std::string& sec, const std::string& key, int count) {
    const double v = s.number(sec, key);
    if (v != std::floor(v) || v < 1 || v > count)
        throw ConfigError("key " + sec + "." + key + ": expected an index in 1.." + std::to_string(count));
    return static_cast<int>(v) - 1;
}

// sigma and t_ramp: either may be given, the other follows from t_ramp = 4 sqrt2 sigma
std::pair<double, double> ramp_params(const RunSpec& s) {
    const bool hs = s.has("pulse", "sigma"), hr = s.has("pulse", "t_ramp");
    if (hs && hr) return {s.number("pulse", "sigma"), s.number("pulse", "t_ramp")};
    if (hs) return {s.number("pulse", "sigma"), CZPulseParams::ramp_for_sigma(s.number("pulse", "sigma"))};
    if (hr) return {CZPulseParams::sigma_for_ramp(s.number("pulse", "t_ramp")), s.number("pulse", "t_ramp")};
    return {1.24, 7.0};
}

GateOptions gate_options(const RunSpec& s) {
    GateOptions g;
    g.model.levels = static_cast<int>(s.number("model", "levels"));
    g.model.max_excitations = static_cast<int>(s.number("model", "max_excitations"));
    g.model.rotating_wave = parse_bool(s.text("model", "rotating_wave", "false"), "model.rotating_wave");
    return g;
}

RunResult run_optimize_cz(const RunSpec& s) {
    DeviceConfig d = s.device();
    const int k = index_key(s, "pulse", "qubit", d.n_qubits);
    auto [sigma, ramp] = ramp_params(s);
    GateOptions go = gate_options(s);
    CZSimulator sim(d, k, go);
    OptimizedGate og = optimize_cz(sim, sigma, ramp, go);
    MinFidelityEstimate est = cz_min_fidelity_estimate(d, sigma, ramp);
    RunResult r;
    r.table.columns = {"eta_ghz", "gb_ghz", "gm_ghz", "ton_sudden_ns", "tramp_ns", "sigma_ns", "ton_ns",
                       "tgate_ns", "f_ave", "f_11", "a_sq", "p_sw", "f11_est"};
    r.table.rows.push_back({d.eta, d.g_b, d.g_m, sudden_limit_ton(d.g_b), ramp, sigma, og.pulse.t_on,
                            og.pulse.t_gate(), og.report.f_ave, og.report.f_min11, est.switching.a_sq,
                            est.switching.p_sw, est.f11_est});
    r.table.summary = {{"omega_on_ghz", og.pulse.omega_on},
                       {"gamma1", og.angles.gamma1},
                       {"gamma2", og.angles.gamma2},
                       {"leakage", og.report.leakage},
                       {"evaluations", static_cast<long>(og.evaluations)},
                       {"converged", static_cast<long>(og.converged)}};
    r.converged = og.converged;
    return r;
}

RunResult run_simulate_cz(const RunSpec& s) {
    DeviceConfig d = s.device();
    const int k = index_key(s, "pulse", "qubit", d.n_qubits);
    auto [sigma, ramp] = ramp_params(s);
    CZPulseParams p;
    p.omega_off = d.off_freq;
    p.omega_on = s.number("pulse", "omega_on", d.bus_freq + d.eta);
    p.sigma = sigma;
    p.t_ramp = ramp;
    p.t_on = s.number("pulse", "t_on", sudden_limit_ton(d.g_b));
    CZSimulator sim(d, k, gate_options(s));
    FidelityReport rep = sim.evaluate(p);
    RunResult r;
    r.table.columns = {"omega_on_ghz", "ton_ns", "tramp_ns", "sigma_ns", "tgate_ns",
                       "f_ave",        "f_11",   "leakage",  "gamma1",   "gamma2"};
    r.table.rows.push_back({p.omega_on, p.t_on, p.t_ramp, p.sigma, p.t_gate(), rep.f_ave, rep.f_min11, rep.leakage,
                            rep.angles.gamma1, rep.angles.gamma2});
    return r;
}

RunResult run_estimate(const RunSpec& s) {
    DeviceConfig d = s.device();
    auto [sigma, ramp] = ramp_params(s);
    const std::string kind = s.text("estimate", "kind", "switching");
    RunResult r;
    if (kind == "switching") {
        r.table.columns = {"channel", "g_ghz", "delta_on_ghz", "delta_off_ghz", "sigma_ns",
                           "tramp_ns", "a_sq", "p_sw",        "f_est"};
        const std::pair<TwoChannelSpec, const char*> channels[] = {{cz_switch_spec(d, sigma, ramp), "11-02"},
                                                                    {lower_band_spec(d, sigma, ramp), "01-10"}};
        for (const auto& [spec, name] : channels) {
            SwitchErrorReport e = switching_probability(spec, name);
            r.table.rows.push_back({e.context, spec.G / kTwoPi, spec.delta_on / kTwoPi, spec.delta_off / kTwoPi, sigma,
                                    ramp, e.a_sq, e.p_sw, 1.0 - 2.0 * e.p_sw});
        }
    } else if (kind == "precision") {
        r.table.columns = {"loss", "ton_precision_ps", "omega_on_precision_mhz"};
        for (double loss : parse_list(s.text("estimate", "losses", ""), "estimate.losses")) {
            PulsePrecision p = pulse_precision(loss, d.g_b);
            r.table.rows.push_back({loss, p.dt_on * 1e3, p.domega_on * 1e3});
        }
    } else if (kind == "pulse-error") {
        CZPulseParams p;
        p.omega_off = d.off_freq;
        p.omega_on = s.number("pulse", "omega_on", d.bus_freq + d.eta);
        p.sigma = sigma;
        p.t_ramp = ramp;
        p.t_on = s.number("pulse", "t_on", sudden_limit_ton(d.g_b));
        const double dt = s.number("estimate", "dt_on"), dw = s.number("estimate", "domega_on");
        r.table.columns = {"dt_on_ps", "domega_on_mhz", "uncompensated", "uncompensated_sudden", "compensated"};
        for (auto [a, b] : {std::pair{dt, 0.0}, std::pair{0.0, dw}}) {
            UncompensatedError u = uncompensated_pulse_error(a, b, p, d.bus_freq, d.g_b);
            CompensatedError c = compensated_pulse_error(a, b, d.g_b);
            r.table.rows.push_back({a * 1e3, b * 1e3, u.exact, u.sudden, c.loss});
        }
    } else {
        throw ConfigError("key estimate.kind: expected switching, precision or pulse-error, got '" + kind + "'");
    }
    return r;
}

RunResult run_g_optimize(const RunSpec& s) {
    DeviceConfig d = s.device();
    GOptOptions o;
    o.target = s.number("run", "target_fidelity");
    o.g_min = s.number("g_optimize", "g_min");
    o.g_max = s.number("g_optimize", "g_max");
    o.g_step = s.number("g_optimize", "g_step");
    o.confirm = parse_bool(s.text("g_optimize", "confirm", "true"), "g_optimize.confirm");
    o.confirm_window = s.number("g_optimize", "confirm_window");
    o.gate = gate_options(s);
    GOptimizationCurve c = g_optimize(d, o);
    RunResult r;
    r.table.columns = {"g_ghz", "tramp_est_ns", "tgate_est_ns", "confirmed", "tramp_ns", "ton_ns", "tgate_ns", "f_ave"};
    for (const auto& x : c.samples)
        r.table.rows.push_back({x.g_b, x.t_ramp_est, x.t_gate_est, static_cast<long>(x.confirmed), x.t_ramp, x.t_on,
                                x.t_gate, x.f_ave});
    r.table.summary = {{"eta_ghz", d.eta},
                       {"best_g_ghz", c.best_g},
                       {"recommended_g_ghz", c.recommended_g},
                       {"reachable", static_cast<long>(c.reachable)}};
    r.converged = c.reachable;
    std::cerr << "recommended g_b = " << fmt(c.recommended_g) << " GHz\n";
    return r;
}

RunResult run_cz23(const RunSpec& s) {
    DeviceConfig d = s.device();
    CZ23Options o;
    o.qubit_a = index_key(s, "cz23", "qubit_a", d.n_qubits);
    o.qubit_b = index_key(s, "cz23", "qubit_b", d.n_qubits);
    o.memory_ramp = s.number("cz23", "memory_ramp");
    o.bus_ramp = s.number("cz23", "bus_ramp");
    o.cz_sigma = s.number("cz23", "cz_sigma");
    o.cz_ramp = s.number("cz23", "cz_ramp");
    o.sequence.max_excitations = static_cast<int>(s.number("cz23", "max_excitations"));
    CZ23Design des = design_cz23(d, o);
    SequenceResult res = run_sequence(des.spec, memory_ghz(d, false), memory_ghz(d, true));
    RunResult r;
    r.table.columns = {"segment", "qubit", "omega_start_ghz", "omega_on_ghz", "omega_end_ghz",
                       "tramp_ns", "ton_ns", "duration_ns", "fidelity"};
    size_t mi = 0;
    bool ok = des.cz.converged;
    for (const auto& seg : des.spec.segments) {
        double f;
        if (seg.src_mode >= 0) {
            f = des.moves.at(mi).transfer;
            ok = ok && des.moves.at(mi).converged;
            ++mi;
        } else {
            f = des.cz.report.f_ave;
        }
        r.table.rows.push_back({seg.name, static_cast<long>(seg.qubit + 1), seg.pulse.omega_start, seg.pulse.omega_on,
                                seg.pulse.omega_end, seg.pulse.t_ramp, seg.pulse.t_on, seg.duration(), f});
    }
    r.table.rows.push_back({std::string("total"), 0L, 0.0, 0.0, 0.0, 0.0, 0.0, res.total_time, res.fidelity});
    r.table.summary = {{"ghz_fidelity", res.fidelity}, {"total_ns", res.total_time}};
    r.converged = ok;
    return r;
}

RunResult run_idle_error(const RunSpec& s) {
    DeviceConfig d = s.device();
    ZZOptions o;
    o.memory = index_key(s, "idle", "memory", d.n_qubits);
    o.subsystem = parse_bool(s.text("idle", "subsystem", "true"), "idle.subsystem");
    o.rotating_wave = parse_bool(s.text("idle", "rotating_wave", "true"), "idle.rotating_wave");
    o.levels = static_cast<int>(s.number("model", "levels"));
    o.max_excitations = static_cast<int>(s.number("model", "max_excitations"));
    ZZResult z = compute_zz(d, o);
    const double t = s.number("idle", "t_ns");
    const int n = static_cast<int>(s.number("idle", "n"));
    RunResult r;
    r.table.columns = {"park_ghz", "omega_zz_khz", "t_ns", "n", "error"};
    r.table.rows.push_back({d.park_freq, z.omega_khz, t, static_cast<long>(n), idle_error(z.omega_khz, t, n)});
    return r;
}

RunResult run_transmon(const RunSpec& s) {
    RunResult r;
    r.table.columns = {"eta_ghz", "ratio", "eps_ghz", "valid"};
    const double lo = s.number("transmon", "ratio_min"), hi = s.number("transmon", "ratio_max"),
                 step = s.number("transmon", "ratio_step");
    if (!(step > 0) || hi < lo) throw ConfigError("transmon ratio range is empty");
    for (double eta : parse_list(s.text("transmon", "etas", ""), "transmon.etas"))
        for (int i = 0; lo + i * step <= hi + 1e-9; ++i) {
            TransmonSpec t = transmon_frequency((lo + i * step) * eta, eta);
            r.table.rows.push_back({eta, t.ratio, t.eps, static_cast<long>(t.valid)});
        }
    return r;
}

RunResult run_figure(const RunSpec& s) {
    const std::string name = s.text("figure", "name", "fig4");
    const int points = static_cast<int>(s.number("figure", "points"));
    if (points < 2) throw ConfigError("key figure.points: need at least 2");
    RunResult r;
    r.table.columns = {"series", "x", "y"};
    if (name == "fig3") {
        DeviceConfig d = s.device();
        for (int i = 0; i < points; ++i) {
            const double eps = 6.0 + 1.6 * i / (points - 1);
            Eigen::MatrixXcd h = build_qubit_bus_hamiltonian(eps, d.eta, d.bus_freq, d.g_b);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
            for (int j = 0; j < es.eigenvalues().size(); ++j)
                r.table.rows.push_back({"E" + std::to_string(j), eps, es.eigenvalues()(j) / kTwoPi});
        }
    } else if (name == "fig4") {
        const std::pair<double, double> pairs[] = {{0.15757, 1.0}, {0.23636, 1.0}, {0.31515, 1.0}, {1.0, 1.8}, {0.5, 1.5}};
        for (auto [on, off] : pairs) {
            const std::string label = fmt(on * 1e3) + "/" + fmt(off * 1e3) + " MHz";
            for (int i = 0; i < points; ++i) {
                const double sigma = 0.5 + 2.5 * i / (points - 1);
                TwoChannelSpec sp = TwoChannelSpec::from_ghz(0.0, on, off, sigma, CZPulseParams::ramp_for_sigma(sigma));
                r.table.rows.push_back({label, sigma, std::norm(switching_amplitude(sp))});
            }
        }
    } else if (name == "fig9") {
        for (double eta : parse_list(s.text("transmon", "etas", ""), "transmon.etas"))
            for (int i = 0; i < points; ++i) {
                const double ratio = 20.0 + 80.0 * i / (points - 1);
                r.table.rows.push_back({"eta " + fmt(eta * 1e3) + " MHz", ratio, transmon_frequency(ratio * eta, eta).eps});
            }
    } else {
        throw ConfigError("key figure.name: expected fig3, fig4 or fig9, got '" + name + "'");
    }
    return r;
}

std::string cell_text(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return fmt(*d);
    if (auto l = std::get_if<long>(&c)) return std::to_string(*l);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

json cell_json(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return std::stod(fmt(*d));
    if (auto l = std::get_if<long>(&c)) return *l;
    return std::get<std::string>(c);
}

}  // namespace

RunResult run(const RunSpec& spec) {
    const auto& c = spec.command;
    if (c == "optimize-cz") return run_optimize_cz(spec);
    if (c == "simulate-cz") return run_simulate_cz(spec);
    if (c == "estimate") return run_estimate(spec);
    if (c == "g-optimize") return run_g_optimize(spec);
    if (c == "cz23") return run_cz23(spec);
    if (c == "idle-error") return run_idle_error(spec);
    if (c == "transmon") return run_transmon(spec);
    if (c == "figure-data") return run_figure(spec);
    throw ConfigError("unknown command '" + c + "'");
}

std::string to_csv(const Table& t) {
    std::string out;
    for (size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& t, const RunSpec& spec) {
    json j;
    j["command"] = spec.command;
    j["columns"] = t.columns;
    j["rows"] = json::array();
    for (const auto& row : t.rows) {
        json o = json::object();
        for (size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = cell_json(row[i]);
        j["rows"].push_back(o);
    }
    json sum = json::object();
    for (const auto& [k, v] : t.summary) sum[k] = cell_json(v);
    j["summary"] = sum;
    json cfg = json::object();
    for (const auto& [sec, keys] : spec.settings)
        for (const auto& [k, v] : keys) cfg[sec][k] = v;
    j["config"] = cfg;
    return j.dump(2) + "\n";
}

void emit_results(const RunResult& r, const RunSpec& spec) {
    const std::string text = spec.format == "json" ? to_json(r.table, spec) : to_csv(r.table);
    if (spec.out.empty() || spec.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(spec.out);
    if (!f) throw std::ios_base::failure("cannot write output file '" + spec.out + "'");
    f << text;
    if (!f) throw std::ios_base::failure("failed writing output file '" + spec.out + "'");
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Qubit-bus CZ gate design for quantum von Neumann devices"};
    RunSpec spec;
    std::string config;
    std::vector<std::string> sets;
    std::optional<double> eta, gb, gm, tramp, sigma, target;
    app.add_option("command", spec.command, "Command to run")->required()->check(CLI::IsMember(commands()));
    app.add_option("--config", config, "INI file, or JSON emitted by a previous run");
    app.add_option("--out", spec.out, "Output path (default stdout)");
    app.add_option("--format", spec.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--eta", eta, "Qubit anharmonicity, GHz");
    app.add_option("--gb", gb, "Qubit-bus coupling, GHz");
    app.add_option("--gm", gm, "Qubit-memory coupling, GHz");
    app.add_option("--tramp", tramp, "Ramp time, ns");
    app.add_option("--sigma", sigma, "Ramp filter width, ns");
    app.add_option("--target-fidelity", target, "Target state-averaged fidelity");
    app.add_option("--set", sets, "Override any key: section.key=value");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        spec.settings = default_settings();
        if (!config.empty()) merge_settings(spec.settings, load_config(config), config);
        Settings over;
        if (eta) over["device"]["eta"] = fmt(*eta);
        if (gb) over["device"]["g_b"] = fmt(*gb);
        if (gm) over["device"]["g_m"] = fmt(*gm);
        if (tramp) over["pulse"]["t_ramp"] = fmt(*tramp);
        if (sigma) over["pulse"]["sigma"] = fmt(*sigma);
        if (target) over["run"]["target_fidelity"] = fmt(*target);
        // a lone ramp override re-derives the other ramp parameter
        if (tramp && !sigma) spec.settings["pulse"].erase("sigma");
        if (sigma && !tramp) spec.settings["pulse"].erase("t_ramp");
        merge_settings(spec.settings, over, "command line");
        for (const auto& a : sets) apply_assignment(spec.settings, a);

        RunResult r = run(spec);
        emit_results(r, spec);
        if (!r.converged) {
            std::cerr << "error: optimization did not converge\n";
            return 3;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NotConverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace qvn::cli

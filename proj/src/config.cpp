#include "b92/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace b92 {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: invalid number for key '" + key + "': " + value);
    }
    if (pos != value.size() || !std::isfinite(v))
        throw std::invalid_argument("config: invalid number for key '" + key + "': " + value);
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v < 0.0 || v != std::floor(v) || v > 1.8e19)
        throw std::invalid_argument("config: key '" + key + "' needs a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: key '" + key + "' needs true/false or 1/0");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void apply_config_text(RunConfig& config, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "mu") config.mu = parse_double(key, value);
        else if (key == "kappa") config.kappa = parse_double(key, value);
        else if (key == "a") config.a = parse_double(key, value);
        else if (key == "t") config.t = parse_double(key, value);
        else if (key == "xi") config.xi = parse_double(key, value);
        else if (key == "eta-bob") config.eta_bob = parse_double(key, value);
        else if (key == "p") config.p = parse_double(key, value);
        else if (key == "l") config.l = parse_double(key, value);
        else if (key == "l-min") config.l_min = parse_double(key, value);
        else if (key == "l-max") config.l_max = parse_double(key, value);
        else if (key == "l-step") config.l_step = parse_double(key, value);
        else if (key == "trials") config.trials = parse_count(key, value);
        else if (key == "seed") config.seed = parse_count(key, value);
        else if (key == "n-pairs") config.n_pairs = parse_double(key, value);
        else if (key == "delta") config.delta = parse_double(key, value);
        else if (key == "use-oracle") config.use_oracle = parse_bool(key, value);
        else if (key == "two-eta") config.two_eta = parse_bool(key, value);
        else if (key == "out") config.out = value;
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(config, buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "mu = " << format_double(c.mu) << "\n";
    out << "kappa = " << format_double(c.kappa) << "\n";
    out << "a = " << format_double(c.a) << "\n";
    out << "t = " << format_double(c.t) << "\n";
    out << "xi = " << format_double(c.xi) << "\n";
    out << "eta-bob = " << format_double(c.eta_bob) << "\n";
    out << "p = " << format_double(c.p) << "\n";
    out << "l = " << format_double(c.l) << "\n";
    out << "l-min = " << format_double(c.l_min) << "\n";
    out << "l-max = " << format_double(c.l_max) << "\n";
    out << "l-step = " << format_double(c.l_step) << "\n";
    out << "trials = " << c.trials << "\n";
    out << "seed = " << c.seed << "\n";
    out << "n-pairs = " << format_double(c.n_pairs) << "\n";
    out << "delta = " << format_double(c.delta) << "\n";
    out << "use-oracle = " << (c.use_oracle ? "true" : "false") << "\n";
    out << "two-eta = " << (c.two_eta ? "true" : "false") << "\n";
    if (!c.out.empty()) out << "out = " << c.out << "\n";
    return out.str();
}

}  // namespace b92

#include "epadm/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "epadm/errors.hpp"

namespace epadm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError(where + ": expected on/off, got '" + v + "'");
}

std::vector<std::string> split_commas(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

Vec3 parse_vec3(const std::string& v, const std::string& where) {
    const auto parts = split_commas(v);
    if (parts.empty() || parts.size() > 3) {
        throw ConfigError(where + ": expected up to 3 comma-separated numbers");
    }
    Vec3 out = vzero();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out[i] = parse_double(parts[i], where);
    }
    return out;
}

LoopSpec& loop_by_name(RunConfig& cfg, const std::string& name) {
    for (LoopSpec& l : cfg.loops) {
        if (l.name == name) return l;
    }
    LoopSpec fresh;
    fresh.name = name;
    cfg.loops.push_back(fresh);
    return cfg.loops.back();
}

void set_key(RunConfig& cfg, const std::string& section,
             const std::string& key, const std::string& value,
             const std::string& where) {
    if (section.rfind("loop:", 0) == 0) {
        LoopSpec& loop = loop_by_name(cfg, section.substr(5));
        if (key == "center") {
            loop.center = parse_vec3(value, where);
        } else if (key == "radius") {
            loop.radius = parse_double(value, where);
        } else if (key == "markers") {
            loop.markers = parse_int(value, where);
        } else {
            throw ConfigError(where + ": unknown loop key '" + key + "'");
        }
        return;
    }

    if (section == "run") {
        if (key == "scenario") {
            cfg.scenario = value;
        } else if (key == "t_end") {
            cfg.t_end = parse_double(value, where);
        } else {
            throw ConfigError(where + ": unknown [run] key '" + key + "'");
        }
    } else if (section == "grid") {
        if (key == "dim") {
            cfg.dim = parse_int(value, where);
        } else if (key == "points") {
            const auto parts = split_commas(value);
            if (parts.size() == 1) {
                const int n = parse_int(parts[0], where);
                cfg.points = {n, n, n};
            } else if (parts.size() <= 3) {
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    cfg.points[i] = parse_int(parts[i], where);
                }
            } else {
                throw ConfigError(where + ": too many point counts");
            }
        } else if (key == "extent") {
            const auto parts = split_commas(value);
            if (parts.size() == 1) {
                const double L = parse_double(parts[0], where);
                cfg.extent = {L, L, L};
            } else if (parts.size() <= 3) {
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    cfg.extent[i] = parse_double(parts[i], where);
                }
            } else {
                throw ConfigError(where + ": too many extents");
            }
        } else {
            throw ConfigError(where + ": unknown [grid] key '" + key + "'");
        }
    } else if (section == "eos") {
        cfg.eos_set = true;
        if (key == "kind") {
            cfg.eos_kind = value;
        } else if (key == "m") {
            cfg.eos_m = parse_double(value, where);
        } else if (key == "K") {
            cfg.eos_K = parse_double(value, where);
        } else if (key == "Gamma") {
            cfg.eos_Gamma = parse_double(value, where);
        } else {
            throw ConfigError(where + ": unknown [eos] key '" + key + "'");
        }
    } else if (section == "frame") {
        if (key == "kind") {
            cfg.frame_kind = value;
        } else if (key == "velocity") {
            cfg.frame_velocity = parse_vec3(value, where);
        } else if (key == "amplitude") {
            cfg.frame_amplitude = parse_double(value, where);
        } else if (key == "omega") {
            cfg.frame_omega = parse_double(value, where);
        } else {
            throw ConfigError(where + ": unknown [frame] key '" + key + "'");
        }
    } else if (section == "numerics") {
        if (key == "fd_order") {
            cfg.fd_order = parse_int(value, where);
        } else if (key == "interp_order") {
            cfg.interp_order = parse_int(value, where);
        } else if (key == "safety") {
            cfg.safety = parse_double(value, where);
        } else if (key == "hyperdissipation") {
            cfg.hyperdissipation = parse_bool(value, where);
        } else if (key == "nu") {
            cfg.nu = parse_double(value, where);
        } else {
            throw ConfigError(where + ": unknown [numerics] key '" + key + "'");
        }
    } else if (section == "scenario") {
        if (key == "amplitude") {
            cfg.amplitude = parse_double(value, where);
        } else if (key == "vortex_strength") {
            cfg.vortex_strength = parse_double(value, where);
        } else if (key == "vortex_width") {
            cfg.vortex_width = parse_double(value, where);
        } else if (key == "velocity_cap") {
            cfg.velocity_cap = parse_double(value, where);
        } else if (key == "shift") {
            cfg.shift = parse_vec3(value, where);
        } else if (key == "perturbation") {
            cfg.perturbation = parse_double(value, where);
        } else if (key == "advection") {
            cfg.advection_velocity = parse_vec3(value, where);
        } else {
            throw ConfigError(where + ": unknown [scenario] key '" + key + "'");
        }
    } else if (section == "output") {
        if (key == "dir") {
            cfg.out_dir = value;
        } else if (key == "cadence") {
            cfg.cadence = parse_int(value, where);
        } else if (key == "fields") {
            cfg.output_fields = split_commas(value);
        } else if (key == "snapshots") {
            cfg.write_snapshots = parse_bool(value, where);
        } else {
            throw ConfigError(where + ": unknown [output] key '" + key + "'");
        }
    } else if (section == "verify") {
        if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(
                std::stoull(value));
        } else {
            throw ConfigError(where + ": unknown [verify] key '" + key + "'");
        }
    } else {
        throw ConfigError(where + ": unknown section [" + section + "]");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "config line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(where + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(where + ": key outside any section");
        }
        set_key(cfg, section, key, value, where + " ('" + key + "')");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    }
    const std::string path = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) {
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    }
    set_key(cfg, path.substr(0, dot), path.substr(dot + 1), value,
            "override '" + assignment + "'");
}

ScenarioParams RunConfig::scenario_params() const {
    ScenarioParams p;
    p.dim = dim;
    p.points = points;
    p.extent = extent;
    p.fd_order = fd_order;
    p.interp_order = interp_order;
    if (eos_set) p.eos = Eos::from_name(eos_kind, eos_m, eos_K, eos_Gamma);
    p.amplitude = amplitude;
    p.vortex_strength = vortex_strength;
    p.vortex_width = vortex_width;
    p.velocity_cap = velocity_cap;
    p.shift = shift;
    p.perturbation = perturbation;
    p.frame_velocity = frame_velocity;
    p.advection_velocity = advection_velocity;
    p.t_end = t_end;
    p.safety = safety;
    p.loops = loops;
    return p;
}

Scenario RunConfig::build_scenario() const {
    Scenario s = make_scenario(scenario, scenario_params());
    if (!frame_kind.empty()) {
        FrameParams fp;
        fp.extent = extent;
        fp.velocity = frame_velocity;
        fp.amplitude = frame_amplitude;
        fp.omega = frame_omega;
        s.frame = builtin_frame(frame_kind, fp);
    }
    return s;
}

}  // namespace epadm

#include "uavnet/scenario.hpp"

#include "uavnet/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace uavnet {

namespace {

int line_of(const YAML::Node& node) {
    return node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
}

void check_keys(const YAML::Node& section, const std::string& name, std::initializer_list<const char*> allowed) {
    if (!section.IsMap()) throw ValidationError("'" + name + "' must be a mapping", line_of(section));
    for (const auto& kv : section) {
        const auto key = kv.first.as<std::string>();
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ValidationError("unknown key '" + key + "' in '" + name + "'", line_of(kv.first));
        }
    }
}

double as_double(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) throw ValidationError("'" + key + "' must be a number", line_of(node));
    const std::string text = node.Scalar();
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == ".inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("'" + key + "' must be a number, got '" + text + "'", line_of(node));
    }
}

std::uint64_t as_count(const YAML::Node& node, const std::string& key) {
    const double v = as_double(node, key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
        throw ValidationError("'" + key + "' must be a non-negative integer", line_of(node));
    }
    return static_cast<std::uint64_t>(v);
}

std::string as_string(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar()) throw ValidationError("'" + key + "' must be a string", line_of(node));
    return node.Scalar();
}


template <class F>
void read(const YAML::Node& section, const char* key, F&& assign) {
    if (const YAML::Node v = section[key]) assign(v);
}

void read_double(const YAML::Node& section, const char* key, double& out) {
    read(section, key, [&](const YAML::Node& v) { out = as_double(v, key); });
}

NodeRole parse_role(const YAML::Node& node) {
    const std::string s = as_string(node, "role");
    if (s == "source") return NodeRole::source;
    if (s == "interferer") return NodeRole::interferer;
    if (s == "uav-main") return NodeRole::uav_main;
    if (s == "uav-interferer") return NodeRole::uav_interferer;
    throw ValidationError("unknown role '" + s + "' (expected source|interferer|uav-main|uav-interferer)",
                          line_of(node));
}

OutageConvention parse_convention(const YAML::Node& node) {
    const std::string s = as_string(node, "outage_convention");
    if (s == "per-slot") return OutageConvention::per_slot;
    if (s == "per-transmission") return OutageConvention::per_transmission;
    throw ValidationError("outage_convention must be per-slot or per-transmission", line_of(node));
}

NodeSpec parse_node(const YAML::Node& n) {
    check_keys(n, "nodes[]", {"id", "role", "pos", "target", "fading", "beta"});
    NodeSpec spec;
    spec.line = line_of(n);
    if (!n["id"]) throw ValidationError("node without 'id'", spec.line);
    spec.id = as_string(n["id"], "id");
    if (!n["role"]) throw ValidationError("node '" + spec.id + "' without 'role'", spec.line);
    spec.role = parse_role(n["role"]);
    if (const YAML::Node pos = n["pos"]) {
        if (!pos.IsSequence() || pos.size() != 3) {
            throw ValidationError("node '" + spec.id + "': 'pos' must be [x, y, z]", line_of(pos));
        }
        spec.position = {as_double(pos[0], "pos"), as_double(pos[1], "pos"), as_double(pos[2], "pos"), spec.id};
    } else {
        spec.placed = true;
        spec.position.node_id = spec.id;
    }
    read(n, "target", [&](const YAML::Node& v) { spec.target = as_string(v, "target"); });
    read(n, "fading", [&](const YAML::Node& v) {
        const std::string f = as_string(v, "fading");
        if (f == "rician") {
            spec.fading = FadingKind::rician;
        } else if (f == "rayleigh") {
            spec.fading = FadingKind::rayleigh;
        } else if (f != "auto") {
            throw ValidationError("fading must be rician, rayleigh or auto", line_of(v));
        }
    });
    read(n, "beta", [&](const YAML::Node& v) { spec.beta = as_double(v, "beta"); });
    return spec;
}

void resolve_positions(Scenario& s) {
    std::vector<NodePosition> fixed;
    std::size_t missing = 0;
    for (const NodeSpec& n : s.nodes) {
        if (n.placed) {
            ++missing;
        } else {
            fixed.push_back(n.position);
        }
    }
    if (missing == 0) return;
    const auto placed = place_nodes(fixed.size() + missing, s.env, s.placement_seed, fixed);
    std::size_t next = fixed.size();
    for (NodeSpec& n : s.nodes) {
        if (!n.placed) continue;
        n.position.x = placed[next].x;
        n.position.y = placed[next].y;
        n.position.z = placed[next].z;
        ++next;
    }
}

} // namespace

std::string_view to_string(NodeRole role) {
    switch (role) {
    case NodeRole::source: return "source";
    case NodeRole::interferer: return "interferer";
    case NodeRole::uav_main: return "uav-main";
    case NodeRole::uav_interferer: return "uav-interferer";
    }
    return "?";
}

void OptimizerConfig::validate() const {
    if (!(stp_m > 0.0) || !(stp_n > 0.0) || !(stp > 0.0)) throw ValidationError("optimizer: steps must be positive");
    if (maxiter < 1) throw ValidationError("optimizer: maxiter must be at least 1");
    if (!(epsilon_r > 0.0) || !(epsilon_beta > 0.0)) throw ValidationError("optimizer: tolerances must be positive");
    for (double b : {beta_ini.rice, beta_ini.ray, beta_ini.source}) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw ValidationError("optimizer: beta_ini entries must be finite and >= 0");
    }
}

void SimConfig::validate() const {
    if (!(num_slots > warmup_slots)) throw ValidationError("sim: slots must exceed warmup");
    if (replications < 1) throw ValidationError("sim: replications must be at least 1");
}

const NodeSpec* Scenario::find_node(std::string_view id) const {
    for (const NodeSpec& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

Scenario parse_scenario(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ValidationError("parse error: " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
    }
    if (!root.IsMap()) throw ValidationError("scenario must be a mapping at the top level", 1);
    check_keys(root, "scenario", {"environment", "radio", "traffic", "interference", "optimizer", "sim",
                                  "placement", "nodes"});

    Scenario s;
    try {
        if (const YAML::Node e = root["environment"]) {
            check_keys(e, "environment", {"zeta", "v", "mu", "area_side"});
            read_double(e, "zeta", s.env.zeta);
            read_double(e, "v", s.env.v);
            read_double(e, "mu", s.env.mu_env);
            read_double(e, "area_side", s.env.area_side);
        }
        if (const YAML::Node r = root["radio"]) {
            check_keys(r, "radio", {"carrier_freq", "d0", "alpha_los", "alpha_nlos", "k_los", "k_nlos", "omega",
                                    "num_channels", "tx_power"});
            read_double(r, "carrier_freq", s.radio.carrier_freq);
            read_double(r, "d0", s.radio.d0);
            read_double(r, "alpha_los", s.radio.alpha_los);
            read_double(r, "alpha_nlos", s.radio.alpha_nlos);
            read_double(r, "k_los", s.radio.k_los);
            read_double(r, "k_nlos", s.radio.k_nlos);
            read_double(r, "omega", s.radio.omega);
            read(r, "num_channels", [&](const YAML::Node& v) {
                s.radio.num_channels = static_cast<int>(std::min<std::uint64_t>(as_count(v, "num_channels"), 1 << 20));
            });
            read_double(r, "tx_power", s.radio.tx_power);
        }
        if (const YAML::Node t = root["traffic"]) {
            check_keys(t, "traffic", {"lambda", "slot", "deadline", "buffer_eta"});
            read_double(t, "lambda", s.traffic.lambda_n);
            read_double(t, "slot", s.traffic.slot);
            read_double(t, "deadline", s.traffic.deadline);
            read_double(t, "buffer_eta", s.traffic.buffer_eta);
        }
        if (const YAML::Node i = root["interference"]) {
            check_keys(i, "interference", {"gamma_th", "temperature", "bandwidth", "moment_samples", "seed",
                                           "outage_convention", "fit_quantum"});
            read_double(i, "gamma_th", s.interference.gamma_th);
            read_double(i, "temperature", s.interference.temperature);
            read_double(i, "bandwidth", s.interference.bandwidth);
            read(i, "moment_samples", [&](const YAML::Node& v) { s.interference.moment_samples = as_count(v, "moment_samples"); });
            read(i, "seed", [&](const YAML::Node& v) { s.interference.seed = as_count(v, "seed"); });
            read(i, "outage_convention", [&](const YAML::Node& v) { s.interference.convention = parse_convention(v); });
            read_double(i, "fit_quantum", s.interference.fit_quantum);
        }
        if (const YAML::Node o = root["optimizer"]) {
            check_keys(o, "optimizer", {"beta_ini", "stp_m", "stp_n", "stp", "maxiter", "epsilon_r", "epsilon_beta",
                                        "beta_max_rice", "beta_max_ray", "update", "seed"});
            read(o, "beta_ini", [&](const YAML::Node& v) {
                if (!v.IsSequence() || v.size() != 3) {
                    throw ValidationError("beta_ini must be [rice, ray, source]", line_of(v));
                }
                s.optimizer.beta_ini = {as_double(v[0], "beta_ini"), as_double(v[1], "beta_ini"),
                                        as_double(v[2], "beta_ini")};
            });
            read_double(o, "stp_m", s.optimizer.stp_m);
            read_double(o, "stp_n", s.optimizer.stp_n);
            read_double(o, "stp", s.optimizer.stp);
            read(o, "maxiter", [&](const YAML::Node& v) {
                s.optimizer.maxiter = static_cast<int>(std::min<std::uint64_t>(as_count(v, "maxiter"), 1 << 30));
            });
            read_double(o, "epsilon_r", s.optimizer.epsilon_r);
            read_double(o, "epsilon_beta", s.optimizer.epsilon_beta);
            read(o, "beta_max_rice", [&](const YAML::Node& v) { s.optimizer.beta_max_rice = as_double(v, "beta_max_rice"); });
            read(o, "beta_max_ray", [&](const YAML::Node& v) { s.optimizer.beta_max_ray = as_double(v, "beta_max_ray"); });
            read(o, "update", [&](const YAML::Node& v) {
                const std::string u = as_string(v, "update");
                if (u != "jacobi" && u != "gauss-seidel") {
                    throw ValidationError("update must be jacobi or gauss-seidel", line_of(v));
                }
                s.optimizer.gauss_seidel = u == "gauss-seidel";
            });
            read(o, "seed", [&](const YAML::Node& v) { s.optimizer.seed = as_count(v, "seed"); });
        }
        if (const YAML::Node m = root["sim"]) {
            check_keys(m, "sim", {"slots", "warmup", "seed", "outage_convention", "interferer_traffic", "replications"});
            read(m, "slots", [&](const YAML::Node& v) { s.sim.num_slots = as_count(v, "slots"); });
            read(m, "warmup", [&](const YAML::Node& v) { s.sim.warmup_slots = as_count(v, "warmup"); });
            read(m, "seed", [&](const YAML::Node& v) { s.sim.seed = as_count(v, "seed"); });
            read(m, "outage_convention", [&](const YAML::Node& v) { s.sim.convention = parse_convention(v); });
            read(m, "interferer_traffic", [&](const YAML::Node& v) {
                const std::string t = as_string(v, "interferer_traffic");
                if (t == "saturated") {
                    s.sim.interferer_traffic = InterfererTraffic::saturated;
                } else if (t == "queued") {
                    s.sim.interferer_traffic = InterfererTraffic::queued;
                } else {
                    throw ValidationError("interferer_traffic must be saturated or queued", line_of(v));
                }
            });
            read(m, "replications", [&](const YAML::Node& v) {
                s.sim.replications = static_cast<int>(std::min<std::uint64_t>(as_count(v, "replications"), 1 << 20));
            });
        }
        if (const YAML::Node p = root["placement"]) {
            check_keys(p, "placement", {"seed"});
            read(p, "seed", [&](const YAML::Node& v) { s.placement_seed = as_count(v, "seed"); });
        }
        const YAML::Node nodes = root["nodes"];
        if (!nodes || !nodes.IsSequence() || nodes.size() == 0) {
            throw ValidationError("'nodes' must be a non-empty list", nodes ? line_of(nodes) : 1);
        }
        for (const auto& n : nodes) s.nodes.push_back(parse_node(n));
    } catch (const YAML::Exception& e) {
        throw ValidationError("parse error: " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
    }

    s.env.validate();
    resolve_positions(s);
    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

void validate_scenario(const Scenario& s) {
    s.env.validate();
    s.radio.validate();
    s.traffic.validate();
    s.optimizer.validate();
    s.sim.validate();
    const InterferenceSettings& i = s.interference;
    if (!(i.gamma_th > 0.0)) throw ValidationError("interference: gamma_th must be positive");
    if (!(i.temperature > 0.0) || !(i.bandwidth > 0.0)) {
        throw ValidationError("interference: temperature and bandwidth must be positive");
    }
    if (i.moment_samples < 100000) throw ValidationError("interference: moment_samples must be at least 100000");
    if (!(i.fit_quantum > 0.0)) throw ValidationError("interference: fit_quantum must be positive");

    std::set<std::string> ids;
    for (const NodeSpec& n : s.nodes) {
        if (!ids.insert(n.id).second) throw ValidationError("duplicate node id '" + n.id + "'", n.line);
        try {
            n.position.validate();
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), n.line);
        }
    }
    std::size_t main_uavs = 0;
    std::size_t transmitters = 0;
    for (const NodeSpec& n : s.nodes) {
        if (n.role == NodeRole::uav_main) ++main_uavs;
        if (n.target) {
            ++transmitters;
            if (!ids.contains(*n.target)) {
                throw ValidationError("node '" + n.id + "' targets unknown node '" + *n.target + "'", n.line);
            }
            if (*n.target == n.id) throw ValidationError("node '" + n.id + "' targets itself", n.line);
        } else if (n.role == NodeRole::source || n.role == NodeRole::interferer) {
            throw ValidationError("node '" + n.id + "' (" + std::string(to_string(n.role)) + ") needs a 'target'", n.line);
        }
        if (n.beta && !(*n.beta >= 0.0)) throw ValidationError("node '" + n.id + "': beta must be >= 0", n.line);
    }
    if (main_uavs > 1) throw ValidationError("at most one uav-main node is allowed");
    if (transmitters == 0) throw ValidationError("scenario has no transmitting node (no node has a 'target')");
}

Scenario with_uav_altitude(Scenario s, double altitude) {
    bool found = false;
    for (NodeSpec& n : s.nodes) {
        if (n.role == NodeRole::uav_interferer) {
            n.position.z = altitude;
            found = true;
        }
    }
    if (!found) throw ValidationError("uav_alt sweep needs a node with role uav-interferer");
    validate_scenario(s);
    return s;
}

Scenario with_gamma_th(Scenario s, double gamma_th) {
    s.interference.gamma_th = gamma_th;
    validate_scenario(s);
    return s;
}

Scenario with_node_count(Scenario s, std::size_t count) {
    auto essential = [](const NodeSpec& n) { return n.role != NodeRole::interferer; };
    const auto kept = static_cast<std::size_t>(std::count_if(s.nodes.begin(), s.nodes.end(), essential));
    if (count < kept || count > s.nodes.size()) {
        throw ValidationError("num_nodes must lie in [" + std::to_string(kept) + ", " + std::to_string(s.nodes.size()) + "]");
    }
    std::size_t extra = count - kept;
    std::vector<NodeSpec> out;
    for (NodeSpec& n : s.nodes) {
        if (essential(n)) {
            out.push_back(std::move(n));
        } else if (extra > 0) {
            out.push_back(std::move(n));
            --extra;
        }
    }
    s.nodes = std::move(out);
    validate_scenario(s);
    return s;
}

} // namespace uavnet

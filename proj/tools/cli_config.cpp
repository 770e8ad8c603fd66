#include "cli_config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hopnet::cli {

namespace {

ParamSpec num(std::string name, double v, std::string help, Bound b = Bound::any) {
    return {std::move(name), Kind::number, v, std::move(help), b};
}
ParamSpec count(std::string name, std::uint64_t v, std::string help, Bound b = Bound::nonnegative) {
    return {std::move(name), Kind::integer, v, std::move(help), b};
}
ParamSpec choice(std::string name, std::string v, std::string help, std::vector<std::string> choices) {
    return {std::move(name), Kind::text, v, std::move(help), Bound::any, std::move(choices)};
}
ParamSpec list(std::string name, std::vector<double> v, std::string help, Bound b = Bound::positive) {
    return {std::move(name), Kind::numbers, v, std::move(help), b};
}
ParamSpec boolean(std::string name, bool v, std::string help) {
    return {std::move(name), Kind::flag, v, std::move(help)};
}

std::vector<ParamSpec> law_params() {
    return {choice("law", "signed", "mark law: signed on [-c0, c0] or positive on [0, c0]", {"signed", "positive"}),
            num("c0", 1.0, "support radius of the mark law", Bound::positive),
            num("alpha", 0.0, "density exponent near zero", Bound::nonnegative)};
}

std::vector<ParamSpec> seed_params() {
    return {count("seed", 1, "RNG seed"), count("stream", 0, "base RNG stream")};
}

CommandSpec make(std::string name, std::string help, std::vector<std::vector<ParamSpec>> groups) {
    CommandSpec c{std::move(name), std::move(help), {}};
    for (auto& g : groups) c.params.insert(c.params.end(), g.begin(), g.end());
    return c;
}

std::vector<CommandSpec> build_commands() {
    const auto dim = count("dim", 2, "space dimension", Bound::positive);
    const auto rho = num("rho", 1.0, "intensity", Bound::nonnegative);
    const auto replicas = count("replicas", 200, "independent replicas", Bound::positive);
    std::vector<CommandSpec> cs;
    cs.push_back(make("sample", "sample a marked Poisson configuration",
                      {{rho}, law_params(),
                       {dim, num("radius", 10.0, "window half-side", Bound::positive),
                        boolean("palm", false, "add a point at the origin")},
                       seed_params()}));
    cs.push_back(make("graph", "build G[zeta,beta] or the Miller-Abrahams network on a stripe",
                      {{rho}, law_params(),
                       {dim, choice("network", "threshold", "threshold graph or MA network on the stripe", {"threshold", "ma"}),
                        num("zeta", 2.0, "threshold level", Bound::positive), num("beta", 1.0, "inverse temperature", Bound::positive),
                        num("radius", 10.0, "window half-side (threshold graph)", Bound::positive),
                        num("ell", 16.0, "stripe width (MA network)", Bound::positive),
                        num("padding", 4.0, "stripe padding along axis 1", Bound::nonnegative),
                        num("c_min", -1.0, "conductance cutoff; negative selects the default cutoff")},
                       seed_params()}));
    cs.push_back(make("percolate", "LR crossing probability and Palm cluster diameters",
                      {{rho}, law_params(),
                       {dim, num("zeta", 3.8, "threshold level", Bound::positive), num("beta", 4.0, "inverse temperature", Bound::positive),
                        num("L", 32.0, "box side", Bound::positive), replicas,
                        num("padding", -1.0, "slab depth; negative means zeta"),
                        count("palm_replicas", 0, "Palm replicas; 0 skips the diameter statistics"),
                        num("palm_radius", 15.0, "Palm window half-side", Bound::positive)},
                       seed_params()}));
    const std::vector<ParamSpec> bisect{replicas, num("tol", 0.02, "bracket tolerance", Bound::positive),
                                        num("hi", -1.0, "initial upper end; negative selects a default"),
                                        count("max_expansions", 8, "doublings of the upper end")};
    cs.push_back(make("threshold-zeta", "critical zeta of G[zeta,beta]",
                      {{num("beta", 4.0, "inverse temperature", Bound::positive), rho}, law_params(),
                       {dim, num("L", 64.0, "box side", Bound::positive)}, bisect, seed_params()}));
    cs.push_back(make("threshold-lambda", "critical intensity of G[1,1]",
                      {{num("alpha", 0.0, "density exponent near zero", Bound::nonnegative),
                        choice("sign", "signed", "mark sign mode", {"signed", "positive"}), dim,
                        num("L", 32.0, "box side", Bound::positive)},
                       bisect, seed_params()}));
    cs.push_back(make("crossings", "density of vertex-disjoint LR crossings",
                      {{num("rho", 24.0, "intensity", Bound::nonnegative)}, law_params(),
                       {dim, num("zeta", 1.0, "threshold level", Bound::positive), num("beta", 1.0, "inverse temperature", Bound::positive),
                        list("L", {8.0, 16.0, 32.0}, "box sides"), count("replicas", 50, "replicas per side", Bound::positive)},
                       seed_params()}));
    cs.push_back(make("conductivity", "rescaled conductivity of MA[beta, ell]",
                      {{rho}, law_params(),
                       {dim, num("beta", 1.0, "inverse temperature", Bound::positive), num("ell", 16.0, "stripe width", Bound::positive),
                        num("padding", 8.0, "stripe padding along axis 1", Bound::nonnegative),
                        num("c_min", -1.0, "conductance cutoff; negative selects the default cutoff"),
                        num("tol", 1e-10, "solver tolerance", Bound::positive), count("replicas", 10, "replicas", Bound::positive)},
                       seed_params()}));
    cs.push_back(make("mott-scan", "mean ln sigma across beta and the fitted slope against beta^((alpha+1)/(alpha+1+d))",
                      {{list("beta", {2.0, 4.0, 8.0, 16.0}, "increasing inverse temperatures"), rho}, law_params(),
                       {dim, num("lambda_star", -1.0, "critical intensity; negative estimates it"),
                        num("lambda_L", 32.0, "box side of the intensity estimate", Bound::positive),
                        count("lambda_replicas", 400, "replicas of the intensity estimate", Bound::positive),
                        num("L_factor", 8.0, "stripe width in units of the predicted zeta_c", Bound::positive),
                        num("ell_scale", 1.0, "extra stripe width factor", Bound::positive),
                        num("cut_factor", 1.5, "MA cutoff level in units of the predicted zeta_c", Bound::positive),
                        count("replicas", 50, "replicas per beta", Bound::positive),
                        num("tol", 1e-8, "solver tolerance", Bound::positive)},
                       seed_params()}));
    cs.push_back(make("walk", "annealed Mott random walk and its diffusion coefficient",
                      {{rho}, law_params(),
                       {dim, num("beta", 2.0, "inverse temperature", Bound::positive),
                        num("radius", 40.0, "window half-side", Bound::positive),
                        num("t_max", 100.0, "time horizon", Bound::positive),
                        count("trajectories", 200, "trajectories", Bound::positive),
                        num("zeta_cut", 8.0, "jumps with conductance below exp(-zeta_cut) are ignored", Bound::positive)},
                       seed_params()}));
    cs.push_back(make("fkg-demo", "FKG counterexample frequencies",
                      {{count("samples", 1'000'000, "Monte-Carlo samples", Bound::positive)}, seed_params()}));
    return cs;
}

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::number: return "a number";
        case Kind::integer: return "a nonnegative integer";
        case Kind::text: return "a string";
        case Kind::numbers: return "a nonempty array of numbers";
        case Kind::flag: return "a boolean";
    }
    return "";
}

void check_bound(const ParamSpec& p, double v, const std::string& pointer) {
    if (!std::isfinite(v)) throw ConfigError(pointer, "must be finite");
    if (p.bound == Bound::positive && !(v > 0.0)) throw ConfigError(pointer, "must be positive");
    if (p.bound == Bound::nonnegative && !(v >= 0.0)) throw ConfigError(pointer, "must be nonnegative");
}

}  // namespace

const std::vector<CommandSpec>& commands() {
    static const std::vector<CommandSpec> cs = build_commands();
    return cs;
}

const CommandSpec& command(std::string_view name) {
    for (const auto& c : commands())
        if (c.name == name) return c;
    throw ConfigError("/command", "unknown command '" + std::string(name) + "'");
}

Json RunConfig::document() const {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["params"] = params;
    return j;
}

Json check_value(const ParamSpec& p, const Json& v, const std::string& pointer) {
    const auto wrong = [&] { return ConfigError(pointer, "expected " + kind_name(p.kind)); };
    switch (p.kind) {
        case Kind::number:
            if (!v.is_number()) throw wrong();
            check_bound(p, v.get<double>(), pointer);
            return v.get<double>();
        case Kind::integer: {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) throw wrong();
            const auto x = v.get<std::uint64_t>();
            if (p.bound == Bound::positive && x == 0) throw ConfigError(pointer, "must be positive");
            return x;
        }
        case Kind::text: {
            if (!v.is_string()) throw wrong();
            const auto s = v.get<std::string>();
            if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), s) == p.choices.end()) {
                std::string all;
                for (const auto& c : p.choices) all += (all.empty() ? "" : ", ") + c;
                throw ConfigError(pointer, "must be one of: " + all);
            }
            return s;
        }
        case Kind::numbers: {
            if (!v.is_array() || v.empty()) throw wrong();
            Json out = Json::array();
            for (std::size_t k = 0; k < v.size(); ++k) {
                const auto ptr = pointer + "/" + std::to_string(k);
                if (!v[k].is_number()) throw ConfigError(ptr, "expected a number");
                check_bound(p, v[k].get<double>(), ptr);
                out.push_back(v[k].get<double>());
            }
            return out;
        }
        case Kind::flag:
            if (!v.is_boolean()) throw wrong();
            return v;
    }
    throw wrong();
}

Json parse_flag(const ParamSpec& p, const std::string& text) {
    const std::string ptr = "--" + p.name;
    const auto as_number = [&](const std::string& s) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw ConfigError(ptr, "cannot parse '" + s + "' as a number");
        return x;
    };
    switch (p.kind) {
        case Kind::number: return check_value(p, as_number(text), ptr);
        case Kind::integer: {
            if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
                throw ConfigError(ptr, "cannot parse '" + text + "' as a nonnegative integer");
            try {
                return check_value(p, std::stoull(text), ptr);
            } catch (const std::out_of_range&) {
                throw ConfigError(ptr, "integer out of range");
            }
        }
        case Kind::text: return check_value(p, text, ptr);
        case Kind::numbers: {
            Json arr = Json::array();
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) arr.push_back(as_number(item));
            return check_value(p, arr, ptr);
        }
        case Kind::flag:
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            throw ConfigError(ptr, "expected true or false");
    }
    throw ConfigError(ptr, "unsupported parameter kind");
}

RunConfig resolve(std::string_view cli_command, const Json& document,
                  const std::map<std::string, std::string>& flags) {
    std::string name(cli_command);
    const Json* given = nullptr;
    if (!document.is_null()) {
        if (!document.is_object()) throw ConfigError("", "config must be a JSON object");
        static const std::set<std::string> top{"schema", "command", "params", "config_hash", "created", "outputs", "version"};
        for (const auto& [k, v] : document.items())
            if (!top.count(k)) throw ConfigError("/" + k, "unknown key");
        if (!document.contains("schema")) throw ConfigError("/schema", "missing");
        if (!document["schema"].is_string() || document["schema"].get<std::string>() != kSchema)
            throw ConfigError("/schema", std::string("expected \"") + kSchema + "\"");
        if (document.contains("command")) {
            if (!document["command"].is_string()) throw ConfigError("/command", "expected a string");
            const auto c = document["command"].get<std::string>();
            if (name.empty()) name = c;
            else if (c != name) throw ConfigError("/command", "config is for '" + c + "', not '" + name + "'");
        }
        if (document.contains("params")) {
            if (!document["params"].is_object()) throw ConfigError("/params", "expected an object");
            given = &document["params"];
        }
    }
    if (name.empty()) throw ConfigError("/command", "no command given");
    const auto& spec = command(name);

    RunConfig rc{spec.name, Json::object()};
    for (const auto& p : spec.params) rc.params[p.name] = p.fallback;
    if (given) {
        for (const auto& [k, v] : given->items()) {
            const auto it = std::find_if(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.name == k; });
            if (it == spec.params.end()) throw ConfigError("/params/" + k, "unknown parameter for '" + spec.name + "'");
            rc.params[k] = check_value(*it, v, "/params/" + k);
        }
    }
    for (const auto& [k, text] : flags) {
        const auto it = std::find_if(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.name == k; });
        if (it == spec.params.end()) throw ConfigError("--" + k, "unknown parameter for '" + spec.name + "'");
        rc.params[k] = parse_flag(*it, text);
    }
    return rc;
}

Json read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
}

std::string git_blob_sha1(std::string_view content) {
    std::string blob = "blob " + std::to_string(content.size()) + '\0';
    blob.append(content);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("SHA-1 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int k = 0; k < len; ++k) {
        const unsigned char b = md[k];
        std::snprintf(buf, sizeof buf, "%02x", b);
        hex += buf;
    }
    return hex;
}

double number(const Json& params, const char* key) { return params.at(key).get<double>(); }
std::uint64_t integer(const Json& params, const char* key) { return params.at(key).get<std::uint64_t>(); }
std::string text(const Json& params, const char* key) { return params.at(key).get<std::string>(); }
std::vector<double> numbers(const Json& params, const char* key) { return params.at(key).get<std::vector<double>>(); }
bool flag(const Json& params, const char* key) { return params.at(key).get<bool>(); }

}  // namespace hopnet::cli

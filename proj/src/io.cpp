#include "hopnet/io.hpp"

#include "hopnet/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace hopnet {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json to_json(const MarkedConfiguration& conf) {
    Json j;
    j["dimension"] = conf.dim;
    Json lo = Json::array(), hi = Json::array();
    for (int k = 0; k < conf.dim; ++k) {
        lo.push_back(conf.window.lo[k]);
        hi.push_back(conf.window.hi[k]);
    }
    j["window"] = {{"lo", lo}, {"hi", hi}};
    Json pts = Json::array();
    for (const auto& p : conf.points) {
        Json x = Json::array();
        for (int k = 0; k < conf.dim; ++k) x.push_back(p.x[k]);
        pts.push_back({{"x", x}, {"e", p.e}});
    }
    j["points"] = std::move(pts);
    return j;
}

MarkedConfiguration configuration_from_json(const Json& j) {
    try {
        MarkedConfiguration conf;
        conf.dim = j.at("dimension").get<int>();
        validate_dimension(conf.dim);
        conf.window.dim = conf.dim;
        const auto& lo = j.at("window").at("lo");
        const auto& hi = j.at("window").at("hi");
        if (lo.size() != static_cast<std::size_t>(conf.dim) || hi.size() != static_cast<std::size_t>(conf.dim))
            throw ParameterError("window corners must have one entry per dimension");
        for (int k = 0; k < conf.dim; ++k) {
            conf.window.lo[k] = lo[k].get<double>();
            conf.window.hi[k] = hi[k].get<double>();
        }
        for (const auto& p : j.at("points")) {
            MarkedPoint mp;
            const auto& x = p.at("x");
            if (x.size() != static_cast<std::size_t>(conf.dim))
                throw ParameterError("point coordinates must match the dimension");
            for (int k = 0; k < conf.dim; ++k) mp.x[k] = x[k].get<double>();
            mp.e = p.at("e").get<double>();
            conf.points.push_back(mp);
        }
        conf.validate();
        return conf;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("malformed configuration JSON: ") + e.what());
    }
}

Json to_json(const GraphMeta& meta) {
    Json j;
    j["kind"] = meta.kind;
    auto put = [&](const char* key, double v) {
        if (!std::isnan(v)) j[key] = std::isinf(v) ? Json(format_double(v)) : Json(v);
    };
    put("zeta", meta.zeta);
    put("beta", meta.beta);
    put("radius", meta.radius);
    put("ell", meta.ell);
    put("c_min", meta.c_min);
    return j;
}

void write_graph(const WeightedGraph& graph, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "vertices.csv");
        out << "index";
        static const char* axes[] = {"x1", "x2", "x3"};
        for (int k = 0; k < graph.dim; ++k) out << ',' << axes[k];
        out << ",e\n";
        for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
            out << v;
            for (int k = 0; k < graph.dim; ++k) out << ',' << format_double(graph.positions[v][k]);
            out << ',' << format_double(graph.energies[v]) << '\n';
        }
    }
    {
        std::ofstream out(dir / "edges.csv");
        CsvWriter csv(out, {"i", "j", "weight"});
        for (const auto& e : graph.edges) {
            csv.cell(static_cast<unsigned long long>(e.i)).cell(static_cast<unsigned long long>(e.j)).cell(e.weight);
            csv.end_row();
        }
    }
    Json meta = to_json(graph.meta);
    meta["dimension"] = graph.dim;
    meta["vertices"] = graph.vertex_count();
    meta["edges"] = graph.edges.size();
    std::ofstream(dir / "graph.json") << meta.dump(2) << '\n';
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string> header) : out_(out) {
    for (const auto& h : header) cell(h);
    end_row();
}

void CsvWriter::sep() {
    if (!first_) out_ << ',';
    first_ = false;
}

CsvWriter& CsvWriter::cell(double x) {
    sep();
    out_ << format_double(x);
    return *this;
}

CsvWriter& CsvWriter::cell(long long x) {
    sep();
    out_ << x;
    return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long x) {
    sep();
    out_ << x;
    return *this;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
    sep();
    out_ << s;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

}  // namespace hopnet

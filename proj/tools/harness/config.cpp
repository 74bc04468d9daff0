#include "harness.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hroc::harness {

namespace {

using nlohmann::json;

// Walks a parsed document and turns schema violations into ConfigError
// messages that carry the source line of the offending key.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
        std::string dotted;
        for (const auto& p : path) dotted += (dotted.empty() ? "" : ".") + p;
        std::ostringstream os;
        os << "config";
        if (const auto line = line_of(path)) os << " line " << *line;
        os << ": " << (dotted.empty() ? std::string("document") : "'" + dotted + "'") << ": " << what;
        throw ConfigError(os.str());
    }

    void only_keys(const json& obj, const std::vector<std::string>& path,
                   std::initializer_list<std::string_view> allowed) const {
        if (!obj.is_object()) fail(path, "expected an object");
        for (const auto& [key, _] : obj.items()) {
            bool ok = false;
            for (auto a : allowed) ok = ok || key == a;
            if (!ok) {
                auto p = path;
                p.push_back(key);
                fail(p, "unknown key");
            }
        }
    }

    double number(const json& j, const std::vector<std::string>& path) const {
        if (!j.is_number()) fail(path, "expected a number");
        return j.get<double>();
    }

    int integer(const json& j, const std::vector<std::string>& path) const {
        if (!j.is_number_integer()) fail(path, "expected an integer");
        return j.get<int>();
    }

    std::string string(const json& j, const std::vector<std::string>& path) const {
        if (!j.is_string()) fail(path, "expected a string");
        return j.get<std::string>();
    }

    Matrix matrix(const json& j, const std::vector<std::string>& path) const {
        if (!j.is_array() || (j.size() != 2 && j.size() != 3)) fail(path, "expected a 2x2 or 3x3 array");
        Matrix m(static_cast<int>(j.size()));
        for (int i = 0; i < m.dim(); ++i) {
            const json& row = j[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != m.dim()) fail(path, "matrix must be square");
            for (int k = 0; k < m.dim(); ++k) m(i, k) = number(row[static_cast<std::size_t>(k)], path);
        }
        return m;
    }

private:
    // Line of the last key in `path`, found by searching each key in turn
    // after the position of its parent.
    std::optional<int> line_of(const std::vector<std::string>& path) const {
        std::size_t pos = 0;
        for (const auto& key : path) {
            const std::size_t hit = text_.find("\"" + key + "\"", pos);
            if (hit == std::string_view::npos) return std::nullopt;
            pos = hit + 1;
        }
        if (path.empty()) return std::nullopt;
        int line = 1;
        for (std::size_t i = 0; i + 1 < pos; ++i) line += text_[i] == '\n';
        return line;
    }

    std::string_view text_;
};

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

int ExperimentConfig::dim() const { return model.dim != 0 ? model.dim : model_info(model.name).default_dim; }

Matrix ExperimentConfig::point_or_default() const {
    if (point) return *point;
    const int d = dim();
    if (model.name == "ksd") return Matrix{{0.2, 0.1}, {0.1, 0.3}};
    if (model.name.rfind("damage-", 0) == 0) return Matrix::identity(d) * 1.24;
    return Matrix(d);
}

ConvexifyParams ExperimentConfig::convexify_params() const { return make_params(dim(), N, r, k_max); }

EnergyPtr ExperimentConfig::energy() const { return make_energy(model.name, model.params, model.dim); }

ExperimentConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    const Reader rd(text);
    ExperimentConfig c;
    if (doc.is_null()) return c;
    rd.only_keys(doc, {},
                 {"model", "convexify", "point", "surface", "convergence", "path", "microstructure", "n_rot",
                  "threads", "seed", "output"});

    if (doc.contains("model")) {
        const json& m = doc["model"];
        rd.only_keys(m, {"model"}, {"name", "dim", "params"});
        if (m.contains("name")) c.model.name = rd.string(m["name"], {"model", "name"});
        if (m.contains("dim")) c.model.dim = rd.integer(m["dim"], {"model", "dim"});
        if (m.contains("params")) {
            const json& p = m["params"];
            if (!p.is_object()) rd.fail({"model", "params"}, "expected an object");
            for (const auto& [key, value] : p.items()) c.model.params[key] = rd.number(value, {"model", "params", key});
        }
    }
    if (doc.contains("convexify")) {
        const json& x = doc["convexify"];
        rd.only_keys(x, {"convexify"}, {"N", "r", "k_max"});
        if (x.contains("N")) c.N = rd.integer(x["N"], {"convexify", "N"});
        if (x.contains("r")) c.r = rd.number(x["r"], {"convexify", "r"});
        if (x.contains("k_max")) c.k_max = rd.integer(x["k_max"], {"convexify", "k_max"});
    }
    if (doc.contains("point") && !doc["point"].is_null()) c.point = rd.matrix(doc["point"], {"point"});
    if (doc.contains("surface")) {
        const json& s = doc["surface"];
        rd.only_keys(s, {"surface"}, {"base", "components", "lo", "hi", "delta"});
        if (s.contains("base") && !s["base"].is_null()) c.surface.base = rd.matrix(s["base"], {"surface", "base"});
        if (s.contains("components")) {
            const json& comp = s["components"];
            const std::vector<std::string> path{"surface", "components"};
            if (!comp.is_array() || comp.size() != 2 || !comp[0].is_array() || comp[0].size() != 2 ||
                !comp[1].is_array() || comp[1].size() != 2)
                rd.fail(path, "expected [[row, col], [row, col]]");
            c.surface.row1 = rd.integer(comp[0][0], path);
            c.surface.col1 = rd.integer(comp[0][1], path);
            c.surface.row2 = rd.integer(comp[1][0], path);
            c.surface.col2 = rd.integer(comp[1][1], path);
        }
        if (s.contains("lo")) c.surface.lo = rd.number(s["lo"], {"surface", "lo"});
        if (s.contains("hi")) c.surface.hi = rd.number(s["hi"], {"surface", "hi"});
        if (s.contains("delta")) c.surface.delta = rd.number(s["delta"], {"surface", "delta"});
    }
    if (doc.contains("convergence")) {
        const json& v = doc["convergence"];
        rd.only_keys(v, {"convergence"}, {"N_values", "repetitions"});
        if (v.contains("N_values")) {
            const json& ns = v["N_values"];
            if (!ns.is_array() || ns.empty()) rd.fail({"convergence", "N_values"}, "expected a nonempty array");
            c.convergence.N_values.clear();
            for (const auto& n : ns) c.convergence.N_values.push_back(rd.integer(n, {"convergence", "N_values"}));
        }
        if (v.contains("repetitions"))
            c.convergence.repetitions = rd.integer(v["repetitions"], {"convergence", "repetitions"});
    }
    if (doc.contains("path")) {
        const json& p = doc["path"];
        rd.only_keys(p, {"path"}, {"t0", "t1", "samples"});
        if (p.contains("t0")) c.path.t0 = rd.number(p["t0"], {"path", "t0"});
        if (p.contains("t1")) c.path.t1 = rd.number(p["t1"], {"path", "t1"});
        if (p.contains("samples")) c.path.samples = rd.integer(p["samples"], {"path", "samples"});
    }
    if (doc.contains("microstructure")) {
        const json& m = doc["microstructure"];
        rd.only_keys(m, {"microstructure"}, {"epsilon", "separation", "m"});
        if (m.contains("epsilon")) c.epsilon = rd.number(m["epsilon"], {"microstructure", "epsilon"});
        if (m.contains("separation")) c.separation = rd.number(m["separation"], {"microstructure", "separation"});
        if (m.contains("m")) c.m = rd.integer(m["m"], {"microstructure", "m"});
    }
    if (doc.contains("n_rot")) c.n_rot = rd.integer(doc["n_rot"], {"n_rot"});
    if (doc.contains("threads")) c.threads = rd.integer(doc["threads"], {"threads"});
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) rd.fail({"seed"}, "expected a nonnegative integer");
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        rd.only_keys(o, {"output"}, {"dir"});
        if (o.contains("dir")) c.out_dir = rd.string(o["dir"], {"output", "dir"});
    }
    c.path.n_rot = c.n_rot;
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate(const ExperimentConfig& c) {
    auto bad = [](const std::string& what) { throw ConfigError("config: " + what); };
    int d = 0;
    try {
        d = c.dim();
        (void)c.energy();
        (void)c.convexify_params();
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }
    if (c.point && c.point->dim() != d) bad("'point' must be " + std::to_string(d) + "x" + std::to_string(d));
    if (c.surface.base && c.surface.base->dim() != d) bad("'surface.base' has the wrong dimension");
    for (int idx : {c.surface.row1, c.surface.col1, c.surface.row2, c.surface.col2})
        if (idx < 0 || idx >= d) bad("'surface.components' index out of range");
    if (c.surface.row1 == c.surface.row2 && c.surface.col1 == c.surface.col2)
        bad("'surface.components' must name two different entries");
    if (!(c.surface.hi > c.surface.lo) || !(c.surface.delta > 0.0)) bad("'surface' needs hi > lo and delta > 0");
    for (int n : c.convergence.N_values)
        if (n < 2) bad("'convergence.N_values' entries must be >= 2");
    if (c.convergence.repetitions < 1) bad("'convergence.repetitions' must be >= 1");
    if (!(c.path.t1 > c.path.t0) || c.path.samples < 3) bad("'path' needs t1 > t0 and samples >= 3");
    if (!(c.epsilon > 0.0 && c.epsilon <= 1.0)) bad("'microstructure.epsilon' must lie in (0, 1]");
    if (!(c.separation >= 1.0)) bad("'microstructure.separation' must be >= 1");
    if (c.m < 4) bad("'microstructure.m' must be >= 4");
    if (c.n_rot < 1) bad("'n_rot' must be >= 1");
    if (c.threads < 1) bad("'threads' must be >= 1");
    if (c.out_dir.empty()) bad("'output.dir' must not be empty");
}

std::string to_json(const ExperimentConfig& c, int indent) {
    json params = json::object();
    for (const auto& [k, v] : c.model.params) params[k] = v;
    json doc = {
        {"model", {{"name", c.model.name}, {"dim", c.dim()}, {"params", params}}},
        {"convexify", {{"N", c.N}, {"r", c.r}, {"k_max", c.k_max}}},
        {"point", c.point ? matrix_json(*c.point) : json(nullptr)},
        {"surface",
         {{"base", c.surface.base ? matrix_json(*c.surface.base) : json(nullptr)},
          {"components", {{c.surface.row1, c.surface.col1}, {c.surface.row2, c.surface.col2}}},
          {"lo", c.surface.lo},
          {"hi", c.surface.hi},
          {"delta", c.surface.delta}}},
        {"convergence", {{"N_values", c.convergence.N_values}, {"repetitions", c.convergence.repetitions}}},
        {"path", {{"t0", c.path.t0}, {"t1", c.path.t1}, {"samples", c.path.samples}}},
        {"microstructure", {{"epsilon", c.epsilon}, {"separation", c.separation}, {"m", c.m}}},
        {"n_rot", c.n_rot},
        {"threads", c.threads},
        {"seed", c.seed},
        {"output", {{"dir", c.out_dir}}},
    };
    return doc.dump(indent);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const ExperimentConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json(config))));
    return buf;
}

Matrix parse_matrix(std::string_view text) {
    std::vector<std::vector<double>> rows(1);
    std::string token;
    auto flush = [&] {
        const auto first = token.find_first_not_of(" \t");
        if (first == std::string::npos) throw ConfigError("matrix '" + std::string(text) + "': empty entry");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token.substr(first), &used);
        } catch (const std::exception&) {
            throw ConfigError("matrix '" + std::string(text) + "': bad number '" + token + "'");
        }
        if (token.find_first_not_of(" \t", first + used) != std::string::npos)
            throw ConfigError("matrix '" + std::string(text) + "': bad number '" + token + "'");
        rows.back().push_back(v);
        token.clear();
    };
    for (char ch : text) {
        if (ch == ',') {
            flush();
        } else if (ch == ';') {
            flush();
            rows.emplace_back();
        } else {
            token += ch;
        }
    }
    flush();
    const std::size_t d = rows.size();
    if (d != 2 && d != 3) throw ConfigError("matrix '" + std::string(text) + "': expected 2 or 3 rows");
    Matrix m(static_cast<int>(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) throw ConfigError("matrix '" + std::string(text) + "': rows must have d entries");
        for (std::size_t j = 0; j < d; ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return m;
}

}  // namespace hroc::harness

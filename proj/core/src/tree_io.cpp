#include "hroc/tree_io.hpp"

#include <json.hpp>

namespace hroc {

namespace {

using nlohmann::json;

json to_j(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json to_j(const Vector& v) {
    json a = json::array();
    for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
    return a;
}

json to_j(const TreeNode& n) {
    json j;
    j["F"] = to_j(n.F);
    j["depth"] = n.depth;
    if (n.split) {
        const Split& s = *n.split;
        j["lambda"] = s.lambda;
        j["R"] = {{"a", to_j(s.direction.a())}, {"b", to_j(s.direction.b())}, {"index", s.direction_index}};
        j["plus"] = to_j(s.plus);
        j["minus"] = to_j(s.minus);
    }
    return j;
}

Matrix matrix_from(const json& j) {
    if (!j.is_array() || j.empty() || j.size() > 3) throw std::invalid_argument("tree json: F must be a d x d array");
    Matrix m(static_cast<int>(j.size()));
    for (int i = 0; i < m.dim(); ++i) {
        const json& row = j.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<int>(row.size()) != m.dim())
            throw std::invalid_argument("tree json: F must be square");
        for (int k = 0; k < m.dim(); ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

Vector vector_from(const json& j) {
    if (!j.is_array() || j.empty() || j.size() > 3) throw std::invalid_argument("tree json: bad vector");
    Vector v(static_cast<int>(j.size()));
    for (int i = 0; i < v.dim(); ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

TreeNode node_from(const json& j, int depth) {
    if (!j.is_object() || !j.contains("F")) throw std::invalid_argument("tree json: node without F");
    TreeNode n(matrix_from(j["F"]), j.value("depth", depth));
    const bool has_plus = j.contains("plus"), has_minus = j.contains("minus");
    if (has_plus != has_minus) throw std::invalid_argument("tree json: split needs both plus and minus");
    if (!has_plus) return n;
    const json& R = j.at("R");
    Dyad dir(vector_from(R.at("a")), vector_from(R.at("b")));
    Split& s = n.attach(Matrix(n.F.dim()), Matrix(n.F.dim()), j.at("lambda").get<double>(), dir,
                        R.value("index", -1));
    s.plus = node_from(j["plus"], n.depth + 1);
    s.minus = node_from(j["minus"], n.depth + 1);
    return n;
}

}  // namespace

std::string tree_to_json(const TreeNode& root, int indent) { return to_j(root).dump(indent); }

std::string matrix_to_json(const Matrix& m) { return to_j(m).dump(); }

TreeNode tree_from_json(std::string_view text) {
    try {
        return node_from(json::parse(text), 0);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("tree json: ") + e.what());
    }
}

}  // namespace hroc

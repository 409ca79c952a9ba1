#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "starframes/duals.hpp"
#include "starframes/errors.hpp"
#include "starframes/frames.hpp"

// Frame file format, schema_version 1:
//   { "schema_version": 1, "algebra_dim": n, "module_rank": k,
//     "label": "...",                        (optional)
//     "operators": [ nk x nk matrices ] }
// or the rank-one vector form
//   { "schema_version": 1, "algebra_dim": n, "vectors": [ n x n matrices ] }
// Matrices are arrays of rows, entries are [re, im]. Emission always uses the
// operator form with alphabetically ordered keys, so save -> load -> save is
// byte-identical.

namespace starframes {
namespace io {

using nlohmann::json;

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                                         const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": matrix must be an array of rows");
    if (static_cast<Eigen::Index>(j.size()) != rows)
        throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(rows) +
                                " rows, got " + std::to_string(j.size()));
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(cols) +
                                    " columns in every row");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& e = row[static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ParseError(std::string(what) + ": entries must be [re, im] pairs");
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

inline int require_positive_int(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ParseError(std::string("field \"") + key + "\" must be a positive integer");
    return static_cast<int>(v.get<long long>());
}

inline OperatorFrame frame_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("frame file must be a JSON object");
    if (require_positive_int(j, "schema_version") != 1)
        throw ParseError("unsupported schema_version");
    const int n = require_positive_int(j, "algebra_dim");
    std::string label;
    if (j.contains("label")) {
        if (!j.at("label").is_string()) throw ParseError("field \"label\" must be a string");
        label = j.at("label").get<std::string>();
    }

    if (j.contains("vectors")) {
        if (j.contains("operators") || j.contains("module_rank"))
            throw ParseError("vector form must not carry \"operators\" or \"module_rank\"");
        const json& vecs = j.at("vectors");
        if (!vecs.is_array() || vecs.empty())
            throw ParseError("field \"vectors\" must be a non-empty array");
        const FrameContext ctx{n, 1};
        std::vector<AlgebraElement> fs;
        fs.reserve(vecs.size());
        for (const auto& v : vecs) fs.emplace_back(matrix_from_json(v, n, n, "vectors"));
        return vector_frame(ctx, fs, std::move(label));
    }

    const int k = require_positive_int(j, "module_rank");
    if (!j.contains("operators")) throw ParseError("missing field \"operators\"");
    const json& ops_json = j.at("operators");
    if (!ops_json.is_array() || ops_json.empty())
        throw ParseError("field \"operators\" must be a non-empty array");
    const FrameContext ctx{n, k};
    const Eigen::Index d = ctx.flat_dim();
    std::vector<ModuleOperator> ops;
    ops.reserve(ops_json.size());
    for (const auto& o : ops_json)
        ops.push_back(ModuleOperator(ctx, matrix_from_json(o, d, d, "operators")));
    return OperatorFrame(std::move(ops), std::move(label));
}

inline json frame_to_json(const OperatorFrame& F) {
    json j;
    j["schema_version"] = 1;
    j["algebra_dim"] = F.ctx().algebra_dim;
    j["module_rank"] = F.ctx().module_rank;
    if (!F.label().empty()) j["label"] = F.label();
    json ops = json::array();
    for (const auto& op : F.ops()) ops.push_back(matrix_to_json(op.mat()));
    j["operators"] = std::move(ops);
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
}

inline OperatorFrame load_frame(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return frame_from_json(j);
}

inline std::string frame_text(const OperatorFrame& F) { return frame_to_json(F).dump(2) + "\n"; }

inline void save_frame(const std::string& path, const OperatorFrame& F) {
    write_file(path, frame_text(F));
}

// FNV-1a, 64-bit; used to record which file bytes a report was computed from.
inline std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return std::string(out);
}

inline std::string digest_file(const std::string& path) { return digest_hex(read_file(path)); }

inline json dual_pair_json(const DualPair& p) {
    json j;
    j["residual"] = p.residual;
    j["n_samples"] = p.n_samples;
    j["max_reconstruction_error"] = p.max_reconstruction_error;
    j["pass"] = p.pass;
    return j;
}

} // namespace io
} // namespace starframes

#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qapcert/matrix.hpp"

namespace qapcert {

// Matrix file formats (shared repo-wide):
//   JSON:  {"n": 3, "rows": [[...],[...],[...]]}   (row-major reals)
//   text:  n on the first line, then n lines of n whitespace-separated numbers
// Both parsers reject NaN/Inf.

inline Mat matrix_from_json(const nlohmann::json& j) {
    if (!j.contains("n") || !j.contains("rows")) throw std::invalid_argument("matrix JSON: need n and rows");
    const int n = j.at("n").get<int>();
    const auto& rows = j.at("rows");
    if (n < 1 || static_cast<int>(rows.size()) != n)
        throw std::invalid_argument("matrix JSON: row count mismatch");
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("matrix JSON: column count mismatch");
        for (int k = 0; k < n; ++k) {
            const double v = rows[i][k].get<double>();
            if (!std::isfinite(v)) throw std::invalid_argument("matrix JSON: NaN/Inf entry");
            m(i, k) = v;
        }
    }
    return m;
}

inline nlohmann::json matrix_to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < m.cols(); ++k) {
            const double v = m(i, k);
            row.push_back(v == 0.0 ? 0.0 : v);
        }
        rows.push_back(std::move(row));
    }
    return {{"n", m.rows()}, {"rows", std::move(rows)}};
}

inline Mat parse_matrix_text(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n < 1) throw std::invalid_argument("matrix text: bad size header");
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double v;
            if (!(in >> v)) throw std::invalid_argument("matrix text: truncated data");
            if (!std::isfinite(v)) throw std::invalid_argument("matrix text: NaN/Inf entry");
            m(i, k) = v;
        }
    return m;
}

inline std::string matrix_to_text(const Mat& m) {
    std::ostringstream out;
    out.precision(17);
    out << m.rows() << "\n";
    for (int i = 0; i < m.rows(); ++i) {
        for (int k = 0; k < m.cols(); ++k) {
            const double v = m(i, k);
            out << (k ? " " : "") << (v == 0.0 ? 0.0 : v);
        }
        out << "\n";
    }
    return out.str();
}

/// Loads a matrix file, sniffing JSON vs plain text from the first character.
inline Mat load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();
    size_t first = content.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::invalid_argument("matrix file is empty: " + path);
    if (content[first] == '{') {
        nlohmann::json j = nlohmann::json::parse(content);
        return matrix_from_json(j);
    }
    std::istringstream text(content);
    return parse_matrix_text(text);
}

}  // namespace qapcert

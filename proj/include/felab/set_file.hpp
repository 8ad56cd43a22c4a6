#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "felab/arith.hpp"
#include "felab/error.hpp"

// Explicit set files: one decimal natural per line, strictly increasing,
// '#' starts a comment, blank lines ignored.
namespace felab::set_file {

inline std::vector<natural> parse(std::istream& in) {
    std::vector<natural> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        std::string tok = line.substr(b, e - b + 1);
        natural v = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') throw parse_error("expected a decimal natural, got '" + tok + "'", lineno, b + 1);
            auto next = checked_mul(v, 10);
            if (next) next = checked_add(*next, static_cast<natural>(c - '0'));
            if (!next) throw parse_error("number does not fit in 64 bits", lineno, b + 1);
            v = *next;
        }
        if (v == 0) throw parse_error("elements must be >= 1", lineno, b + 1);
        if (!out.empty() && v <= out.back()) throw parse_error("elements must be strictly increasing", lineno, b + 1);
        out.push_back(v);
    }
    return out;
}

inline std::vector<natural> read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open set file '" + path + "'");
    return parse(in);
}

inline void write(std::ostream& out, const std::vector<natural>& xs, const std::vector<std::string>& header = {}) {
    for (const auto& h : header) out << "# " << h << '\n';
    for (natural x : xs) out << x << '\n';
}

} // namespace felab::set_file

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cq/padic.hpp"

namespace cq {

// On-disk description of a cubic+quadratic system.  UTF-8 text:
//   key = value headers (p, k, n, N, seed; optional modulus as
//   comma-separated coefficients low-to-high), then "cubic:" and
//   "quadratic:" sections of monomial lines "e1 e2 ... en : c" with decimal
//   integer c, reduced mod p^N on load.  '#' starts a comment.
struct SystemFile {
    int64_t p = 0;
    int k = 1;
    int n = 0;
    int N = 1;
    uint64_t seed = 0;
    std::optional<std::vector<int64_t>> modulus;
    std::vector<std::pair<std::vector<int>, mpz_class>> cubic;
    std::vector<std::pair<std::vector<int>, mpz_class>> quadratic;
};

SystemFile parse_system_text(const std::string& content);
SystemFile load_system_file(const std::string& path);
std::string serialize_system(const SystemFile& sf);

// builds the p-adic system; precision_override reloads coefficients at a
// different precision than the header's N
PadicSystem build_system(const SystemFile& sf, std::optional<int> precision_override = std::nullopt);

} // namespace cq

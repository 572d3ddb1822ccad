#ifndef RABIPISTON_REPORT_HPP
#define RABIPISTON_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rabipiston/errors.hpp"
#include "rabipiston/params.hpp"
#include "rabipiston/version.hpp"

namespace rabipiston {

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

inline std::string config_hash(const SystemParams& p) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(p.serialize())));
    return buf;
}

/// Comment header stamped at the top of every output file: tool version,
/// command, configuration hash, applied overrides, plus per-command extras.
/// Deliberately contains nothing time- or host-dependent, so identical runs
/// produce identical bytes.
inline std::vector<std::string> manifest_lines(
    const std::string& command, const SystemParams& params,
    const std::vector<std::string>& overrides,
    const std::vector<std::pair<std::string, std::string>>& extras = {}) {
    std::vector<std::string> lines;
    lines.push_back(std::string("# rabipiston ") + kVersion);
    lines.push_back("# command: " + command);
    lines.push_back("# config_hash: " + config_hash(params));
    std::string ov;
    for (const auto& o : overrides) {
        if (!ov.empty()) ov += ", ";
        ov += o;
    }
    lines.push_back("# overrides: " + (ov.empty() ? std::string("(none)") : ov));
    for (const auto& [k, v] : extras) lines.push_back("# " + k + ": " + v);
    return lines;
}

/// key = value report writer (order preserved).
inline void write_kv(const std::string& path,
                     const std::vector<std::pair<std::string, std::string>>& entries,
                     const std::vector<std::string>& header = {}) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report '" + path + "'");
    for (const auto& h : header) out << h << "\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace rabipiston

#endif

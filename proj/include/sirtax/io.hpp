#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sirtax/diagnostics.hpp"
#include "sirtax/grid.hpp"

namespace sirtax {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

namespace detail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// Plain-text snapshot: header "x,value" (1D) or "x,y,value" (2D), one row per
/// node in row-major order, 17 significant digits (re-parses bit-exactly).
inline std::string field_csv(const Field& f) {
    const Grid& g = f.grid();
    std::ostringstream os;
    os << (g.dim() == 1 ? "x,value\n" : "x,y,value\n");
    for (std::size_t k = 0; k < f.size(); ++k) {
        const auto x = g.node_coords(k);
        os << detail::g17(x[0]) << ',';
        if (g.dim() == 2) os << detail::g17(x[1]) << ',';
        os << detail::g17(f[k]) << '\n';
    }
    return os.str();
}

/// Reads back a field_csv snapshot onto the given grid.
inline Field read_field_csv(const std::string& text, const Grid& grid) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("field csv: missing header");
    Field f(grid);
    std::size_t k = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (k >= f.size()) throw std::runtime_error("field csv: more rows than grid nodes");
        const std::size_t comma = line.rfind(',');
        if (comma == std::string::npos) throw std::runtime_error("field csv: malformed row");
        f[k++] = std::strtod(line.c_str() + comma + 1, nullptr);
    }
    if (k != f.size()) throw std::runtime_error("field csv: fewer rows than grid nodes");
    return f;
}

/// 8-bit binary graymap, one pixel per node, row-major (row = y index).
/// Values map affinely from [min, max] to [0, 255]; constant fields map to 128.
inline std::string field_pgm(const Field& f) {
    const Grid& g = f.grid();
    const double lo = field_min(f), hi = field_max(f);
    std::ostringstream os;
    os << "P5\n" << g.nx() << ' ' << g.ny() << "\n255\n";
    for (std::size_t k = 0; k < f.size(); ++k) {
        long pix = 128;
        if (hi > lo) pix = std::lround((f[k] - lo) / (hi - lo) * 255.0);
        pix = std::clamp(pix, 0l, 255l);
        os << static_cast<char>(static_cast<unsigned char>(pix));
    }
    return os.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

/// Writes the CSV and PGM artifacts for one snapshot next to each other:
/// base.csv and base.pgm.
inline void write_snapshot(const Field& f, const std::filesystem::path& base) {
    write_text_file(base.string() + ".csv", field_csv(f));
    write_text_file(base.string() + ".pgm", field_pgm(f));
}

inline constexpr const char* kDiagnosticsHeader =
    "t,norm_grad_I,norm_I,norm_sqrtS_lap_I,norm_sqrt_eps_lap_I,norm_dt_I,norm_grad_S,"
    "dual_norm_dt_S,min_S,max_S,max_I,mass_S,mass_I,mass_R,clamp_events,supersolution_slack";

inline std::string diagnostics_csv(const DiagnosticsRecord& rec) {
    std::ostringstream os;
    os << kDiagnosticsHeader << '\n';
    for (const DiagnosticsRow& r : rec.rows) {
        os << detail::g17(r.t) << ',' << detail::g17(r.norm_grad_I) << ',' << detail::g17(r.norm_I)
           << ',' << detail::g17(r.norm_sqrtS_lap_I) << ',' << detail::g17(r.norm_sqrt_eps_lap_I)
           << ',' << detail::g17(r.norm_dt_I) << ',' << detail::g17(r.norm_grad_S) << ','
           << detail::g17(r.dual_norm_dt_S) << ',' << detail::g17(r.min_S) << ','
           << detail::g17(r.max_S) << ',' << detail::g17(r.max_I) << ',' << detail::g17(r.mass_S)
           << ',' << detail::g17(r.mass_I) << ',' << detail::g17(r.mass_R) << ','
           << r.clamp_events << ',' << detail::g17(r.supersolution_slack) << '\n';
    }
    return os.str();
}

/// Collects run artifacts under one root, writing each file as it arrives and
/// recording its content digest. finalize() writes the sorted manifest.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_);
    }

    void write(const std::string& relative_path, std::string_view content) {
        const std::filesystem::path full = root_ / relative_path;
        std::filesystem::create_directories(full.parent_path());
        write_text_file(full, content);
        char digest[32];
        std::snprintf(digest, sizeof digest, "fnv1a64:%016llx",
                      static_cast<unsigned long long>(fnv1a64(content)));
        entries_.emplace_back(relative_path, digest);
    }

    void write_field(const std::string& relative_base, const Field& f) {
        write(relative_base + ".csv", field_csv(f));
        write(relative_base + ".pgm", field_pgm(f));
    }

    /// Manifest line format: "<digest>  <relative path>", sorted by path.
    void finalize() {
        std::sort(entries_.begin(), entries_.end());
        std::ostringstream os;
        for (const auto& [path, digest] : entries_) os << digest << "  " << path << '\n';
        write_text_file(root_ / "manifest.txt", os.str());
    }

    const std::filesystem::path& root() const { return root_; }
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::filesystem::path root_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace sirtax

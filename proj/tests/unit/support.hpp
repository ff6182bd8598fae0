#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "fbs/metrics.hpp"
#include "fbs/rng.hpp"
#include "fbs/selection.hpp"
#include "fbs/spectra.hpp"

namespace testsupport {

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("fbselect-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline fbs::WavelengthGrid linear_grid(double lo, double hi, double step) {
    std::vector<double> xs;
    for (double x = lo; x <= hi + step / 4; x += step) xs.push_back(x);
    return fbs::WavelengthGrid(std::move(xs));
}

// Random response matrix with entries in (0.05, 1.05).
inline fbs::FilterMatrix random_filter_matrix(fbs::Xorshift64Star& rng, std::size_t n,
                                              std::size_t m) {
    std::vector<double> entries(n * m);
    for (double& e : entries) e = rng.uniform(0.05, 1.05);
    std::vector<std::string> ids, labels;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("f" + std::to_string(i + 1));
    for (std::size_t j = 0; j < m; ++j) labels.push_back("c" + std::to_string(j + 1));
    return fbs::FilterMatrix(n, m, std::move(entries), std::move(ids), std::move(labels));
}

// Random symmetric distance matrix with zero diagonal.
inline fbs::AdjacencyMatrix random_adjacency(fbs::Xorshift64Star& rng, std::size_t n,
                                             double lo = 0.01, double hi = 1.0) {
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = rng.uniform(lo, hi);
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    return fbs::AdjacencyMatrix(n, std::move(entries), fbs::MetricId::spectral_angle);
}

// The printed adjacency fixture (two decimals) used throughout.
inline fbs::AdjacencyMatrix fig2_adjacency() {
    const std::vector<double> entries = {
        0.00, 0.05, 0.19, 0.20, //
        0.05, 0.00, 0.14, 0.15, //
        0.19, 0.14, 0.00, 0.02, //
        0.20, 0.15, 0.02, 0.00,
    };
    return fbs::AdjacencyMatrix(4, entries, fbs::MetricId::spectral_angle,
                                {"f1", "f2", "f3", "f4"});
}

inline fbs::FilterMatrix fig2_responses() {
    return fbs::FilterMatrix(4, 3,
                             {26, 12, 10, //
                              58, 28, 19, //
                              23, 14, 5,  //
                              5, 3, 1},
                             {"f1", "f2", "f3", "f4"}, {"o1", "o2", "o3"});
}

inline fbs::ConflictGraph random_graph(fbs::Xorshift64Star& rng, std::size_t n,
                                       double edge_probability) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.next_double() < edge_probability) edges.emplace_back(i, j);
        }
    }
    return fbs::ConflictGraph(n, std::move(edges));
}

// Independent-set oracle: exhaustive enumeration of all 2^n subsets.
inline std::size_t brute_force_mis_size(const fbs::ConflictGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::uint64_t> neighbor(n, 0);
    for (const auto& [i, j] : g.edges()) {
        neighbor[i] |= 1ull << j;
        neighbor[j] |= 1ull << i;
    }
    std::size_t best = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        bool independent = true;
        for (std::size_t v = 0; v < n && independent; ++v) {
            if ((mask >> v) & 1u) independent = (mask & neighbor[v]) == 0;
        }
        if (independent) {
            std::size_t size = 0;
            for (std::size_t v = 0; v < n; ++v) size += (mask >> v) & 1u;
            best = std::max(best, size);
        }
    }
    return best;
}

// Max-min subset oracle: plain enumeration, no pruning, same lexicographic
// first-optimum tie rule as the production search.
struct NaiveSearchResult {
    std::vector<std::size_t> best;
    double best_min = -std::numeric_limits<double>::infinity();
};

inline void naive_search_recurse(const fbs::AdjacencyMatrix& a, std::size_t k, std::size_t start,
                                 std::vector<std::size_t>& chosen, NaiveSearchResult& out) {
    if (chosen.size() == k) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < k; ++x) {
            for (std::size_t y = x + 1; y < k; ++y) {
                m = std::min(m, a.at(chosen[x], chosen[y]));
            }
        }
        if (m > out.best_min) {
            out.best_min = m;
            out.best = chosen;
        }
        return;
    }
    for (std::size_t idx = start; idx + (k - chosen.size()) <= a.size(); ++idx) {
        chosen.push_back(idx);
        naive_search_recurse(a, k, idx + 1, chosen, out);
        chosen.pop_back();
    }
}

inline NaiveSearchResult naive_full_search(const fbs::AdjacencyMatrix& a, std::size_t k) {
    NaiveSearchResult out;
    std::vector<std::size_t> chosen;
    naive_search_recurse(a, k, 0, chosen, out);
    return out;
}

// Smooth synthetic class means: a gentle baseline plus a few gaussian bumps.
inline fbs::Spectrum random_smooth_spectrum(fbs::Xorshift64Star& rng,
                                            const fbs::WavelengthGrid& grid,
                                            const std::string& label) {
    const double lo = grid.front();
    const double hi = grid.back();
    struct Bump {
        double center, width, amplitude;
    };
    std::vector<Bump> bumps;
    const int count = 3 + static_cast<int>(rng.next_below(4));
    for (int b = 0; b < count; ++b) {
        bumps.push_back({rng.uniform(lo, hi), rng.uniform(20.0, 80.0), rng.uniform(-0.5, 0.8)});
    }
    std::vector<double> values;
    values.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = 1.0;
        for (const auto& bump : bumps) {
            const double d = (grid[i] - bump.center) / bump.width;
            v += bump.amplitude * std::exp(-d * d);
        }
        values.push_back(std::max(v, 0.05));
    }
    return fbs::Spectrum(grid, std::move(values), label);
}

// Additive gaussian noise with sigma = `relative` times the spectrum's mean
// level, clipped at zero.
inline fbs::Spectrum add_noise(fbs::Xorshift64Star& rng, const fbs::Spectrum& s, double relative) {
    double mean = 0.0;
    for (double v : s.values()) mean += v;
    mean /= static_cast<double>(s.size());
    const double sigma = relative * mean;
    std::vector<double> values = s.values();
    for (double& v : values) v = std::max(0.0, v + sigma * rng.gaussian());
    return fbs::Spectrum(s.grid(), std::move(values), s.label());
}

} // namespace testsupport

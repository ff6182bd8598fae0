#include "fbs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fbs/errors.hpp"
#include "fbs/table_io.hpp"

namespace fbs {

std::string to_string(MetricId metric) {
    switch (metric) {
        case MetricId::spectral_angle: return "spectral_angle";
        case MetricId::spectral_information_divergence: return "spectral_information_divergence";
        case MetricId::spectral_correlation_angle: return "spectral_correlation_angle";
    }
    throw ConfigError("invalid metric id");
}

MetricId metric_from_string(const std::string& name) {
    if (name == "angle" || name == "spectral_angle") return MetricId::spectral_angle;
    if (name == "sid" || name == "spectral_information_divergence") {
        return MetricId::spectral_information_divergence;
    }
    if (name == "sca" || name == "spectral_correlation_angle") {
        return MetricId::spectral_correlation_angle;
    }
    throw ConfigError("unknown metric '" + name + "' (use angle|sid|sca)");
}

namespace {

void check_same_length(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size() || u.empty()) {
        throw DataError("metric arguments must have equal nonzero length");
    }
}

} // namespace

double spectral_angle(std::span<const double> u, std::span<const double> v) {
    check_same_length(u, v);
    double uu = 0.0, vv = 0.0, uv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uu += u[i] * u[i];
        vv += v[i] * v[i];
        uv += u[i] * v[i];
    }
    if (uu <= 0.0) throw DataError("spectral angle of a zero-norm vector (first argument)");
    if (vv <= 0.0) throw DataError("spectral angle of a zero-norm vector (second argument)");
    // Clamp: near-parallel rows can drift past +-1 and would yield NaN.
    const double c = std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
    return std::acos(c);
}

double spectral_information_divergence(std::span<const double> u, std::span<const double> v) {
    check_same_length(u, v);
    double su = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0)) {
            throw DataError("SID requires strictly positive components (first argument)");
        }
        if (!(v[i] > 0.0)) {
            throw DataError("SID requires strictly positive components (second argument)");
        }
        su += u[i];
        sv += v[i];
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double p = u[i] / su;
        const double q = v[i] / sv;
        // KL(p||q) + KL(q||p), termwise; the log difference keeps the result
        // bit-identical under argument swap.
        sum += (p - q) * (std::log(p) - std::log(q));
    }
    return std::max(sum, 0.0);
}

double spectral_correlation_angle(std::span<const double> u, std::span<const double> v) {
    check_same_length(u, v);
    if (u.size() < 2) throw DataError("spectral correlation angle needs length >= 2");
    const double n = static_cast<double>(u.size());
    double mu = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        mu += u[i];
        mv += v[i];
    }
    mu /= n;
    mv /= n;
    double suu = 0.0, svv = 0.0, suv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double du = u[i] - mu;
        const double dv = v[i] - mv;
        suu += du * du;
        svv += dv * dv;
        suv += du * dv;
    }
    if (suu <= 0.0 || svv <= 0.0) {
        throw DataError("spectral correlation angle of a zero-variance vector");
    }
    const double r = std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
    return std::acos((r + 1.0) / 2.0);
}

double metric_distance(MetricId metric, std::span<const double> u, std::span<const double> v) {
    switch (metric) {
        case MetricId::spectral_angle: return spectral_angle(u, v);
        case MetricId::spectral_information_divergence:
            return spectral_information_divergence(u, v);
        case MetricId::spectral_correlation_angle: return spectral_correlation_angle(u, v);
    }
    throw ConfigError("invalid metric id");
}

AdjacencyMatrix::AdjacencyMatrix(std::size_t size, std::vector<double> entries, MetricId metric,
                                 std::vector<std::string> ids)
    : size_(size), entries_(std::move(entries)), metric_(metric), ids_(std::move(ids)) {
    if (size_ == 0) throw DataError("adjacency matrix must be nonempty");
    if (entries_.size() != size_ * size_) throw DataError("adjacency matrix entry count mismatch");
    if (!ids_.empty() && ids_.size() != size_) throw DataError("adjacency matrix id count mismatch");
    for (std::size_t i = 0; i < size_; ++i) {
        if (entries_[i * size_ + i] != 0.0) {
            throw DataError("adjacency matrix diagonal must be exactly zero");
        }
        for (std::size_t j = i + 1; j < size_; ++j) {
            const double a = entries_[i * size_ + j];
            const double b = entries_[j * size_ + i];
            if (!std::isfinite(a) || a < 0.0 || !std::isfinite(b) || b < 0.0) {
                throw DataError("adjacency matrix entries must be finite and nonnegative");
            }
            if (std::abs(a - b) > 1e-12) {
                throw DataError("adjacency matrix must be symmetric within 1e-12");
            }
            entries_[j * size_ + i] = a; // mirror exactly
        }
    }
}

double AdjacencyMatrix::min_off_diagonal() const {
    if (size_ < 2) throw DataError("adjacency matrix has no off-diagonal entries");
    double best = entries_[1];
    for (std::size_t i = 0; i < size_; ++i) {
        for (std::size_t j = i + 1; j < size_; ++j) {
            best = std::min(best, entries_[i * size_ + j]);
        }
    }
    return best;
}

double AdjacencyMatrix::max_entry() const {
    return *std::max_element(entries_.begin(), entries_.end());
}

AdjacencyMatrix build_adjacency(const FilterMatrix& responses, MetricId metric,
                                const AdjacencyOptions& options) {
    const std::size_t n = responses.rows();
    std::vector<double> entries(n * n, 0.0);

    const bool shift = metric == MetricId::spectral_information_divergence &&
                       options.sid_epsilon > 0.0;
    std::vector<double> ui, vj;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = 0.0;
            try {
                if (shift) {
                    ui.assign(responses.row(i).begin(), responses.row(i).end());
                    vj.assign(responses.row(j).begin(), responses.row(j).end());
                    for (double& x : ui) x += options.sid_epsilon;
                    for (double& x : vj) x += options.sid_epsilon;
                    d = metric_distance(metric, ui, vj);
                } else {
                    d = metric_distance(metric, responses.row(i), responses.row(j));
                }
            } catch (const DataError& e) {
                throw DataError(std::string(e.what()) + " [filters '" + responses.filter_ids()[i] +
                                "' (row " + std::to_string(i + 1) + ") and '" +
                                responses.filter_ids()[j] + "' (row " + std::to_string(j + 1) +
                                ")]");
            }
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    return AdjacencyMatrix(n, std::move(entries), metric, responses.filter_ids());
}

void save_adjacency(const std::filesystem::path& file, const AdjacencyMatrix& adjacency) {
    std::vector<std::string> ids = adjacency.ids();
    if (ids.empty()) {
        for (std::size_t i = 0; i < adjacency.size(); ++i) {
            ids.push_back("f" + std::to_string(i + 1));
        }
    }
    std::ostringstream out;
    out << "filter_id";
    for (const auto& id : ids) out << '\t' << id;
    out << '\n';
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        out << ids[i];
        for (std::size_t j = 0; j < adjacency.size(); ++j) {
            out << '\t' << format_double(adjacency.at(i, j));
        }
        out << '\n';
    }
    write_file_atomic(file, out.str());
}

} // namespace fbs

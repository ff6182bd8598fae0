#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fbs/filters.hpp"

namespace fbs {

enum class MetricId { spectral_angle, spectral_information_divergence, spectral_correlation_angle };

std::string to_string(MetricId metric);
// Accepts the short CLI names (angle | sid | sca) and the full names.
MetricId metric_from_string(const std::string& name);

// arccos of the clamped normalized dot product, in [0, pi]; in [0, pi/2] for
// nonnegative inputs. Rejects zero-norm vectors.
double spectral_angle(std::span<const double> u, std::span<const double> v);

// Symmetric SID: KL(p||q) + KL(q||p) with p, q the inputs normalized to sum
// one. Requires strictly positive components.
double spectral_information_divergence(std::span<const double> u, std::span<const double> v);

// arccos((r + 1) / 2) for the Pearson correlation r. Requires length >= 2 and
// nonzero variance.
double spectral_correlation_angle(std::span<const double> u, std::span<const double> v);

double metric_distance(MetricId metric, std::span<const double> u, std::span<const double> v);

struct AdjacencyOptions {
    // Additive shift applied to every response before SID (which then
    // renormalizes), so zero entries do not make the divergence undefined.
    // Set to 0 to apply the metric verbatim.
    double sid_epsilon = 1e-10;
};

// Symmetric matrix of pairwise distances with a zero diagonal.
class AdjacencyMatrix {
public:
    AdjacencyMatrix(std::size_t size, std::vector<double> entries, MetricId metric,
                    std::vector<std::string> ids = {});

    std::size_t size() const { return size_; }
    double at(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }
    const std::vector<double>& entries() const { return entries_; }
    MetricId metric() const { return metric_; }
    const std::vector<std::string>& ids() const { return ids_; }

    // Minimum over i != j; the matrix must have at least two nodes.
    double min_off_diagonal() const;
    double max_entry() const;

private:
    std::size_t size_;
    std::vector<double> entries_;
    MetricId metric_;
    std::vector<std::string> ids_;
};

// a_ij = metric(row_i, row_j), computed once per unordered pair and mirrored.
AdjacencyMatrix build_adjacency(const FilterMatrix& responses, MetricId metric,
                                const AdjacencyOptions& options = {});

// Square tabular form with filter ids as both header and first column.
void save_adjacency(const std::filesystem::path& file, const AdjacencyMatrix& adjacency);

} // namespace fbs

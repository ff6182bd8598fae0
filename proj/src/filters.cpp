#include "fbs/filters.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fbs/errors.hpp"
#include "fbs/table_io.hpp"
#include "interp_detail.hpp"

namespace fbs {

std::string to_string(FilterShape shape) {
    return shape == FilterShape::rectangular ? "rectangular" : "gaussian";
}

FilterShape filter_shape_from_string(const std::string& name) {
    if (name == "rectangular" || name == "rect") return FilterShape::rectangular;
    if (name == "gaussian" || name == "gauss") return FilterShape::gaussian;
    throw ConfigError("unknown filter shape '" + name + "' (use rect|gauss)");
}

FilterCurve::FilterCurve(WavelengthGrid grid, std::vector<double> transmittance, std::string id,
                         double nominal_center, double nominal_bandwidth)
    : grid_(std::move(grid)),
      trans_(std::move(transmittance)),
      id_(std::move(id)),
      center_(nominal_center),
      bandwidth_(nominal_bandwidth) {
    if (trans_.size() != grid_.size()) {
        throw DataError("filter '" + id_ + "': " + std::to_string(trans_.size()) +
                        " values for " + std::to_string(grid_.size()) + " grid samples");
    }
    bool any_positive = false;
    for (double t : trans_) {
        if (!std::isfinite(t) || t < 0.0 || t > 1.0) {
            throw DataError("filter '" + id_ + "' has transmittance outside [0, 1]");
        }
        any_positive |= t > 0.0;
    }
    if (!any_positive) throw DataError("filter '" + id_ + "' is all zero");
}

FilterBank::FilterBank(std::vector<FilterCurve> filters) : filters_(std::move(filters)) {
    if (filters_.empty()) throw DataError("filter bank is empty");
    std::unordered_set<std::string> seen;
    for (const auto& f : filters_) {
        if (!seen.insert(f.id()).second) {
            throw DataError("duplicate filter id '" + f.id() + "'");
        }
    }
}

std::vector<std::string> FilterBank::ids() const {
    std::vector<std::string> out;
    out.reserve(filters_.size());
    for (const auto& f : filters_) out.push_back(f.id());
    return out;
}

FilterMatrix::FilterMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries,
                           std::vector<std::string> filter_ids,
                           std::vector<std::string> class_labels)
    : rows_(rows),
      cols_(cols),
      entries_(std::move(entries)),
      ids_(std::move(filter_ids)),
      labels_(std::move(class_labels)) {
    if (rows_ == 0 || cols_ == 0) throw DataError("filter matrix must be nonempty");
    if (entries_.size() != rows_ * cols_) throw DataError("filter matrix entry count mismatch");
    if (ids_.size() != rows_) throw DataError("filter matrix id count mismatch");
    if (labels_.size() != cols_) throw DataError("filter matrix label count mismatch");
    for (double v : entries_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DataError("filter matrix entries must be finite and nonnegative");
        }
    }
}

std::span<const double> FilterMatrix::row(std::size_t i) const {
    return std::span<const double>(entries_.data() + i * cols_, cols_);
}

namespace {

std::string bandpass_id(double center, double bandwidth) {
    return "bp" + format_double(center) + "nm_bw" + format_double(bandwidth);
}

} // namespace

FilterCurve make_bandpass(double center_nm, double bandwidth_nm, FilterShape shape,
                          const WavelengthGrid& grid, std::string id) {
    if (!(bandwidth_nm > 0.0)) throw ConfigError("bandwidth must be positive");
    if (center_nm < grid.front() || center_nm > grid.back()) {
        throw ConfigError("center " + format_double(center_nm) + " nm outside grid range [" +
                          format_double(grid.front()) + ", " + format_double(grid.back()) + "]");
    }
    if (id.empty()) id = bandpass_id(center_nm, bandwidth_nm);

    std::vector<double> trans(grid.size(), 0.0);
    if (shape == FilterShape::rectangular) {
        const double lo = center_nm - bandwidth_nm / 2.0;
        const double hi = center_nm + bandwidth_nm / 2.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] >= lo && grid[i] <= hi) trans[i] = 1.0;
        }
    } else {
        // FWHM = bandwidth  =>  sigma = bw / (2 sqrt(2 ln 2))
        const double sigma = bandwidth_nm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double d = grid[i] - center_nm;
            if (std::abs(d) > 4.0 * sigma) continue;
            trans[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        }
    }
    return FilterCurve(grid, std::move(trans), std::move(id), center_nm, bandwidth_nm);
}

FilterBank make_uniform_bank(int count, double lo_nm, double hi_nm, double bandwidth_nm,
                             FilterShape shape, const WavelengthGrid& grid) {
    if (count < 1) throw ConfigError("filter count must be at least 1");
    if (!(lo_nm < hi_nm)) throw ConfigError("filter range must satisfy lo < hi");
    if (hi_nm - lo_nm < bandwidth_nm) {
        throw ConfigError("range [" + format_double(lo_nm) + ", " + format_double(hi_nm) +
                          "] is narrower than bandwidth " + format_double(bandwidth_nm));
    }
    if (lo_nm < grid.front() || hi_nm > grid.back()) {
        throw ConfigError("filter range must lie within the grid");
    }

    std::vector<FilterCurve> filters;
    filters.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        filters.push_back(make_bandpass((lo_nm + hi_nm) / 2.0, bandwidth_nm, shape, grid));
    } else {
        const double first = lo_nm + bandwidth_nm / 2.0;
        const double step = (hi_nm - lo_nm - bandwidth_nm) / static_cast<double>(count - 1);
        for (int k = 0; k < count; ++k) {
            filters.push_back(make_bandpass(first + step * k, bandwidth_nm, shape, grid));
        }
    }
    return FilterBank(std::move(filters));
}

FilterBank make_sweep_bank(double lo_nm, double hi_nm, const std::vector<double>& bandwidths,
                           int count_per_bandwidth, FilterShape shape,
                           const WavelengthGrid& grid) {
    if (bandwidths.empty()) throw ConfigError("bandwidth list is empty");
    std::vector<FilterCurve> filters;
    for (double bw : bandwidths) {
        FilterBank bank = make_uniform_bank(count_per_bandwidth, lo_nm, hi_nm, bw, shape, grid);
        for (const auto& f : bank.filters()) filters.push_back(f);
    }
    return FilterBank(std::move(filters));
}

namespace {

// Union of both grids restricted to [lo, hi]; lo and hi are always included.
std::vector<double> merged_grid(const std::vector<double>& a, const std::vector<double>& b,
                                double lo, double hi) {
    std::vector<double> merged;
    merged.reserve(a.size() + b.size());
    for (double x : a) {
        if (x >= lo && x <= hi) merged.push_back(x);
    }
    for (double x : b) {
        if (x >= lo && x <= hi) merged.push_back(x);
    }
    merged.push_back(lo);
    merged.push_back(hi);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

} // namespace

FilterMatrix integrate_responses(const FilterBank& bank, const SpectrumSet& spectra,
                                 const std::optional<FilterCurve>& system_response) {
    const std::size_t n = bank.size();
    const std::size_t m = spectra.size();
    std::vector<double> entries(n * m, 0.0);

    std::vector<std::string> labels;
    labels.reserve(m);
    for (const auto& s : spectra.spectra()) labels.push_back(s.label());

    for (std::size_t i = 0; i < n; ++i) {
        const FilterCurve& filter = bank[i];
        const auto& fx = filter.grid().samples();
        for (std::size_t j = 0; j < m; ++j) {
            const Spectrum& spectrum = spectra.spectra()[j];
            const auto& sx = spectrum.grid().samples();
            double lo = std::max(fx.front(), sx.front());
            double hi = std::min(fx.back(), sx.back());
            if (system_response) {
                lo = std::max(lo, system_response->grid().front());
                hi = std::min(hi, system_response->grid().back());
            }
            if (!(lo < hi)) continue; // empty support intersection -> 0

            const std::vector<double> xs =
                system_response
                    ? merged_grid(merged_grid(fx, sx, lo, hi), system_response->grid().samples(),
                                  lo, hi)
                    : merged_grid(fx, sx, lo, hi);

            double prev_x = xs.front();
            double prev_p = detail::interp_clamped(fx, filter.transmittance(), prev_x) *
                            detail::interp_clamped(sx, spectrum.values(), prev_x);
            if (system_response) {
                prev_p *= detail::interp_clamped(system_response->grid().samples(),
                                                 system_response->transmittance(), prev_x);
            }
            double sum = 0.0;
            for (std::size_t k = 1; k < xs.size(); ++k) {
                const double x = xs[k];
                double p = detail::interp_clamped(fx, filter.transmittance(), x) *
                           detail::interp_clamped(sx, spectrum.values(), x);
                if (system_response) {
                    p *= detail::interp_clamped(system_response->grid().samples(),
                                                system_response->transmittance(), x);
                }
                sum += (x - prev_x) * (prev_p + p) * 0.5;
                prev_x = x;
                prev_p = p;
            }
            entries[i * m + j] = sum;
        }
    }
    return FilterMatrix(n, m, std::move(entries), bank.ids(), std::move(labels));
}

FilterBank load_filter_bank(const std::filesystem::path& file) {
    const NumericTable table = read_numeric_table(file);
    const std::string source = file.string();
    if (table.headers.front() != "wavelength_nm") {
        throw DataError(source + ": first column header must be 'wavelength_nm', got '" +
                        table.headers.front() + "'");
    }
    const std::vector<double>& wavelengths = table.columns.front();
    for (std::size_t i = 1; i < wavelengths.size(); ++i) {
        if (wavelengths[i] <= wavelengths[i - 1]) {
            throw DataError(source + ": non-increasing grid at row " + std::to_string(i + 1));
        }
    }
    WavelengthGrid grid(wavelengths);

    std::vector<FilterCurve> filters;
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        const std::vector<double>& t = table.columns[c];
        for (std::size_t r = 0; r < t.size(); ++r) {
            if (!std::isfinite(t[r]) || t[r] < 0.0 || t[r] > 1.0) {
                throw DataError(source + ": transmittance outside [0, 1] at row " +
                                std::to_string(r + 1) + ", column " + std::to_string(c + 1));
            }
        }
        // Nominal center/bandwidth are informational: peak position and FWHM.
        const std::size_t peak =
            static_cast<std::size_t>(std::max_element(t.begin(), t.end()) - t.begin());
        const double half = t[peak] / 2.0;
        std::size_t first = peak, last = peak;
        while (first > 0 && t[first - 1] >= half) --first;
        while (last + 1 < t.size() && t[last + 1] >= half) ++last;
        filters.emplace_back(grid, t, table.headers[c], wavelengths[peak],
                             wavelengths[last] - wavelengths[first]);
    }
    return FilterBank(std::move(filters));
}

void save_filter_bank(const std::filesystem::path& file, const FilterBank& bank) {
    // All filters must share one grid to serialize as a single table.
    const WavelengthGrid& grid = bank[0].grid();
    NumericTable table;
    table.headers.push_back("wavelength_nm");
    table.columns.push_back(grid.samples());
    for (const auto& f : bank.filters()) {
        if (!(f.grid() == grid)) {
            throw DataError("filter '" + f.id() + "' is on a different grid; cannot serialize");
        }
        table.headers.push_back(f.id());
        table.columns.push_back(f.transmittance());
    }
    write_numeric_table(file, table);
}

} // namespace fbs

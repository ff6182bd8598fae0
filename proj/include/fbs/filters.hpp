#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbs/spectra.hpp"

namespace fbs {

enum class FilterShape { rectangular, gaussian };

std::string to_string(FilterShape shape);
FilterShape filter_shape_from_string(const std::string& name);

// A sampled transmittance curve, values in [0, 1], at least one nonzero.
class FilterCurve {
public:
    FilterCurve(WavelengthGrid grid, std::vector<double> transmittance, std::string id,
                double nominal_center, double nominal_bandwidth);

    const WavelengthGrid& grid() const { return grid_; }
    const std::vector<double>& transmittance() const { return trans_; }
    const std::string& id() const { return id_; }
    double nominal_center() const { return center_; }
    double nominal_bandwidth() const { return bandwidth_; }

private:
    WavelengthGrid grid_;
    std::vector<double> trans_;
    std::string id_;
    double center_;
    double bandwidth_;
};

// Nonempty ordered list of filters with unique ids.
class FilterBank {
public:
    explicit FilterBank(std::vector<FilterCurve> filters);

    const std::vector<FilterCurve>& filters() const { return filters_; }
    const FilterCurve& operator[](std::size_t i) const { return filters_[i]; }
    std::size_t size() const { return filters_.size(); }
    std::vector<std::string> ids() const;

private:
    std::vector<FilterCurve> filters_;
};

// N x M matrix of integrated filter responses: rows are filters, columns are
// spectra. Entries are finite and nonnegative.
class FilterMatrix {
public:
    FilterMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries,
                 std::vector<std::string> filter_ids, std::vector<std::string> class_labels);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const;
    const std::vector<double>& entries() const { return entries_; }
    const std::vector<std::string>& filter_ids() const { return ids_; }
    const std::vector<std::string>& class_labels() const { return labels_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> entries_;
    std::vector<std::string> ids_;
    std::vector<std::string> labels_;
};

// Rectangular: transmittance 1 on [center - bw/2, center + bw/2], 0 outside.
// Gaussian: peak 1 at center, FWHM = bandwidth, truncated to 0 beyond 4 sigma.
FilterCurve make_bandpass(double center_nm, double bandwidth_nm, FilterShape shape,
                          const WavelengthGrid& grid, std::string id = {});

// `count` filters whose passbands cover [lo, hi] end to end: centers at
// lo + bw/2 + k * (hi - lo - bw) / (count - 1); a single filter sits at the
// range midpoint.
FilterBank make_uniform_bank(int count, double lo_nm, double hi_nm, double bandwidth_nm,
                             FilterShape shape, const WavelengthGrid& grid);

// Concatenation of one uniform bank per bandwidth, ids `bp<center>nm_bw<bw>`.
FilterBank make_sweep_bank(double lo_nm, double hi_nm, const std::vector<double>& bandwidths,
                           int count_per_bandwidth, FilterShape shape, const WavelengthGrid& grid);

// f_ij = trapezoidal quadrature of filter_i(l) * spectrum_j(l) over the union
// of the two grids, restricted to the intersection of their wavelength
// ranges; an empty intersection yields 0. An optional system response curve
// (lens/sensor transmittance) multiplies every integrand.
FilterMatrix integrate_responses(const FilterBank& bank, const SpectrumSet& spectra,
                                 const std::optional<FilterCurve>& system_response = {});

// Same tabular format as spectra: `wavelength_nm` + one column per filter.
FilterBank load_filter_bank(const std::filesystem::path& file);
void save_filter_bank(const std::filesystem::path& file, const FilterBank& bank);

} // namespace fbs

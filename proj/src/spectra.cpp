#include "fbs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fbs/errors.hpp"
#include "fbs/table_io.hpp"
#include "interp_detail.hpp"

namespace fbs {

WavelengthGrid::WavelengthGrid(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 2) throw DataError("wavelength grid needs at least 2 samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i]) || samples_[i] <= 0.0) {
            throw DataError("wavelength grid sample " + std::to_string(i + 1) +
                            " must be finite and positive");
        }
        if (i > 0 && samples_[i] <= samples_[i - 1]) {
            throw DataError("non-increasing grid at row " + std::to_string(i + 1));
        }
    }
}

Spectrum::Spectrum(WavelengthGrid grid, std::vector<double> values, std::string label)
    : grid_(std::move(grid)), values_(std::move(values)), label_(std::move(label)) {
    if (values_.size() != grid_.size()) {
        throw DataError("spectrum '" + label_ + "': " + std::to_string(values_.size()) +
                        " values for " + std::to_string(grid_.size()) + " grid samples");
    }
    bool any_positive = false;
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DataError("spectrum '" + label_ + "' has a negative or non-finite value");
        }
        any_positive |= v > 0.0;
    }
    if (!any_positive) throw DataError("spectrum '" + label_ + "' is all zero");
}

SpectrumSet::SpectrumSet(std::vector<Spectrum> spectra) : spectra_(std::move(spectra)) {
    if (spectra_.empty()) throw DataError("spectrum set is empty");
    const WavelengthGrid& target = spectra_.front().grid();
    for (auto& s : spectra_) {
        if (!(s.grid() == target)) s = resample(s, target);
    }
    for (const auto& s : spectra_) {
        if (std::find(classes_.begin(), classes_.end(), s.label()) == classes_.end()) {
            classes_.push_back(s.label());
        }
    }
}

const WavelengthGrid& SpectrumSet::grid() const { return spectra_.front().grid(); }

namespace {

std::vector<double> crop_samples(const std::vector<double>& xs, const std::vector<double>& ys,
                                 double lo, double hi, std::vector<double>& xs_out) {
    std::vector<double> ys_out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] >= lo && xs[i] <= hi) {
            xs_out.push_back(xs[i]);
            ys_out.push_back(ys[i]);
        }
    }
    return ys_out;
}

} // namespace

SpectrumSet load_spectra(std::istream& in, const std::string& source_name,
                         const LoadOptions& options) {
    const NumericTable table = read_numeric_table(in, source_name);
    if (table.headers.front() != "wavelength_nm") {
        throw DataError(source_name + ": first column header must be 'wavelength_nm', got '" +
                        table.headers.front() + "'");
    }
    const std::vector<double>& wavelengths = table.columns.front();
    for (std::size_t i = 1; i < wavelengths.size(); ++i) {
        if (wavelengths[i] <= wavelengths[i - 1]) {
            throw DataError(source_name + ": non-increasing grid at row " + std::to_string(i + 1));
        }
    }
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        for (std::size_t r = 0; r < table.columns[c].size(); ++r) {
            const double v = table.columns[c][r];
            if (!std::isfinite(v) || v < 0.0) {
                throw DataError(source_name + ": negative or non-finite value at row " +
                                std::to_string(r + 1) + ", column " + std::to_string(c + 1));
            }
        }
    }

    std::vector<double> xs = wavelengths;
    std::vector<std::vector<double>> cols(table.columns.begin() + 1, table.columns.end());
    if (options.crop) {
        const auto [lo, hi] = *options.crop;
        if (!(lo < hi)) throw ConfigError("crop range must satisfy lo < hi");
        std::vector<double> xs_cropped;
        std::vector<std::vector<double>> cols_cropped;
        for (auto& col : cols) {
            std::vector<double> tmp_x;
            cols_cropped.push_back(crop_samples(wavelengths, col, lo, hi, tmp_x));
            xs_cropped = std::move(tmp_x);
        }
        if (xs_cropped.size() < 2) {
            throw DataError(source_name + ": crop range leaves fewer than 2 samples");
        }
        xs = std::move(xs_cropped);
        cols = std::move(cols_cropped);
    }

    WavelengthGrid grid(xs);
    std::vector<Spectrum> spectra;
    spectra.reserve(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        spectra.emplace_back(grid, std::move(cols[c]), table.headers[c + 1]);
    }
    return SpectrumSet(std::move(spectra));
}

SpectrumSet load_spectra(const std::filesystem::path& file, const LoadOptions& options) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open " + file.string());
    return load_spectra(in, file.string(), options);
}

void save_spectra(const std::filesystem::path& file, const SpectrumSet& set) {
    NumericTable table;
    table.headers.push_back("wavelength_nm");
    table.columns.push_back(set.grid().samples());
    for (const auto& s : set.spectra()) {
        table.headers.push_back(s.label());
        table.columns.push_back(s.values());
    }
    write_numeric_table(file, table);
}

Spectrum resample(const Spectrum& s, const WavelengthGrid& target) {
    const std::vector<double>& xs = s.grid().samples();
    const std::vector<double>& ys = s.values();
    std::vector<double> out;
    out.reserve(target.size());
    for (double x : target.samples()) {
        out.push_back(detail::interp_clamped(xs, ys, x));
    }
    return Spectrum(target, std::move(out), s.label());
}

SpectrumSet average_by_class(const SpectrumSet& set) {
    const std::size_t n = set.grid().size();
    std::vector<Spectrum> means;
    means.reserve(set.classes().size());
    for (const auto& label : set.classes()) {
        std::vector<double> sum(n, 0.0);
        std::size_t count = 0;
        for (const auto& s : set.spectra()) {
            if (s.label() != label) continue;
            for (std::size_t i = 0; i < n; ++i) sum[i] += s.values()[i];
            ++count;
        }
        for (double& v : sum) v /= static_cast<double>(count);
        means.emplace_back(set.grid(), std::move(sum), label);
    }
    return SpectrumSet(std::move(means));
}

Spectrum l2_normalize(const Spectrum& s) {
    double norm_sq = 0.0;
    for (double v : s.values()) norm_sq += v * v;
    if (norm_sq <= 0.0) throw DataError("cannot normalize an all-zero spectrum");
    const double inv = 1.0 / std::sqrt(norm_sq);
    std::vector<double> out(s.values());
    for (double& v : out) v *= inv;
    return Spectrum(s.grid(), std::move(out), s.label());
}

SpectrumSet l2_normalize(const SpectrumSet& set) {
    std::vector<Spectrum> out;
    out.reserve(set.size());
    for (const auto& s : set.spectra()) out.push_back(l2_normalize(s));
    return SpectrumSet(std::move(out));
}

SpectrumSet crop_wavelengths(const SpectrumSet& set, double lo, double hi) {
    if (!(lo < hi)) throw ConfigError("crop range must satisfy lo < hi");
    std::vector<Spectrum> out;
    out.reserve(set.size());
    for (const auto& s : set.spectra()) {
        std::vector<double> xs;
        std::vector<double> ys = crop_samples(s.grid().samples(), s.values(), lo, hi, xs);
        if (xs.size() < 2) throw DataError("crop range leaves fewer than 2 samples");
        out.emplace_back(WavelengthGrid(std::move(xs)), std::move(ys), s.label());
    }
    return SpectrumSet(std::move(out));
}

} // namespace fbs

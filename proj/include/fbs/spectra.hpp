#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fbs {

// Strictly increasing wavelength samples in nanometers (at least two,
// all finite and positive).
class WavelengthGrid {
public:
    explicit WavelengthGrid(std::vector<double> samples);

    const std::vector<double>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double front() const { return samples_.front(); }
    double back() const { return samples_.back(); }
    double operator[](std::size_t i) const { return samples_[i]; }

    bool operator==(const WavelengthGrid& other) const = default;

private:
    std::vector<double> samples_;
};

// A sampled light spectrum with an object-class label. Values are
// nonnegative, finite, and not all zero.
class Spectrum {
public:
    Spectrum(WavelengthGrid grid, std::vector<double> values, std::string label);

    const WavelengthGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return values_.size(); }

private:
    WavelengthGrid grid_;
    std::vector<double> values_;
    std::string label_;
};

// An ordered collection of spectra sharing one wavelength grid. Members on a
// different grid are resampled onto the first spectrum's grid on
// construction. `classes()` lists distinct labels in first-appearance order.
class SpectrumSet {
public:
    explicit SpectrumSet(std::vector<Spectrum> spectra);

    const std::vector<Spectrum>& spectra() const { return spectra_; }
    const std::vector<std::string>& classes() const { return classes_; }
    const WavelengthGrid& grid() const;
    std::size_t size() const { return spectra_.size(); }

private:
    std::vector<Spectrum> spectra_;
    std::vector<std::string> classes_;
};

struct LoadOptions {
    // Keep only samples with lo <= wavelength <= hi.
    std::optional<std::pair<double, double>> crop;
};

// Tabular spectrum file: first column `wavelength_nm`, one column per
// observation, header cell = class label (duplicates allowed). Delimiter
// (comma or tab) is auto-detected from the header; `#` lines are comments.
SpectrumSet load_spectra(const std::filesystem::path& file, const LoadOptions& options = {});
SpectrumSet load_spectra(std::istream& in, const std::string& source_name, const LoadOptions& options = {});

void save_spectra(const std::filesystem::path& file, const SpectrumSet& set);

// Linear interpolation onto `target`; samples outside the source range clamp
// to the edge value. Label is preserved.
Spectrum resample(const Spectrum& s, const WavelengthGrid& target);

// One spectrum per class: the per-sample arithmetic mean of its members.
// Class order is preserved.
SpectrumSet average_by_class(const SpectrumSet& set);

// Scale to unit Euclidean norm.
Spectrum l2_normalize(const Spectrum& s);
SpectrumSet l2_normalize(const SpectrumSet& set);

// Restrict every spectrum to samples within [lo, hi].
SpectrumSet crop_wavelengths(const SpectrumSet& set, double lo, double hi);

} // namespace fbs

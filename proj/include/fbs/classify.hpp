#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fbs/selection.hpp"

namespace fbs {

enum class BandNormKind { rms, max_abs, mean };

std::string to_string(BandNormKind kind);
BandNormKind band_norm_from_string(const std::string& name);

struct TrainOptions {
    // Per-band divisor computed over the training response vectors; evens out
    // magnitude differences between bands (e.g. wide vs narrow filters).
    BandNormKind band_norm = BandNormKind::rms;
    AdjacencyOptions adjacency;
};

struct Reference {
    std::string label;
    std::vector<double> vec; // unit Euclidean norm
};

// Everything inference needs: the selected filters, per-band normalization
// divisors, and the labeled unit reference vectors.
class TrainedModel {
public:
    TrainedModel(FilterBank bank, std::vector<double> band_norm, std::vector<Reference> references,
                 MetricId metric, bool full_spectrum,
                 std::optional<SelectionResult> selection = std::nullopt);

    const FilterBank& bank() const { return bank_; }
    const std::vector<double>& band_norm() const { return band_norm_; }
    const std::vector<Reference>& references() const { return references_; }
    MetricId metric() const { return metric_; }
    bool full_spectrum() const { return full_spectrum_; }
    const std::optional<SelectionResult>& selection() const { return selection_; }

    // Raw band responses of a spectrum: through-bank integration, or direct
    // sampling on the training grid for a full-spectrum model.
    std::vector<double> record(const Spectrum& s) const;

private:
    FilterBank bank_;
    std::vector<double> band_norm_;
    std::vector<Reference> references_;
    MetricId metric_;
    bool full_spectrum_;
    std::optional<SelectionResult> selection_;
};

// Full training pipeline: class means -> normalization -> responses over the
// whole bank -> adjacency -> FBS selection of cfg.k filters -> band
// normalization -> unit reference vectors.
TrainedModel train(const SpectrumSet& training, const FilterBank& bank, const FbsConfig& config,
                   MetricId metric, const TrainOptions& options = {});

// Same pipeline with the selection step skipped: every filter of `bank` is
// used as-is (the uniform baseline).
TrainedModel train_preselected(const SpectrumSet& training, const FilterBank& bank, MetricId metric,
                               const TrainOptions& options = {});

// Per-sample delta impulses instead of filters: references are the normalized
// class-mean spectra themselves and band_norm is all ones.
TrainedModel full_spectrum_model(const SpectrumSet& training,
                                 MetricId metric = MetricId::spectral_angle);

// Records the spectrum, applies band_norm, L2-normalizes, and returns the
// label of the nearest reference (ties: first class in training order).
std::string classify(const TrainedModel& model, const Spectrum& s);

struct ConfusionCell {
    std::string truth;
    std::string predicted;
    std::size_t count = 0;
};

struct ClassificationReport {
    std::size_t total = 0;
    std::size_t wrong = 0;
    std::vector<ConfusionCell> confusions; // sorted by (truth, predicted)
};

// Classifies every test spectrum. Test labels must be training classes.
ClassificationReport evaluate(const TrainedModel& model, const SpectrumSet& test);

// Single self-describing JSON file (filter curves embedded), so inference
// needs no retraining.
void save_model(const std::filesystem::path& file, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& file);

} // namespace fbs

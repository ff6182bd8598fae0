#include "fbs/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "fbs/errors.hpp"
#include "fbs/table_io.hpp"

namespace fbs {

std::string to_string(BandNormKind kind) {
    switch (kind) {
        case BandNormKind::rms: return "rms";
        case BandNormKind::max_abs: return "max";
        case BandNormKind::mean: return "mean";
    }
    throw ConfigError("invalid band norm kind");
}

BandNormKind band_norm_from_string(const std::string& name) {
    if (name == "rms") return BandNormKind::rms;
    if (name == "max") return BandNormKind::max_abs;
    if (name == "mean") return BandNormKind::mean;
    throw ConfigError("unknown band norm '" + name + "' (use rms|max|mean)");
}

TrainedModel::TrainedModel(FilterBank bank, std::vector<double> band_norm,
                           std::vector<Reference> references, MetricId metric, bool full_spectrum,
                           std::optional<SelectionResult> selection)
    : bank_(std::move(bank)),
      band_norm_(std::move(band_norm)),
      references_(std::move(references)),
      metric_(metric),
      full_spectrum_(full_spectrum),
      selection_(std::move(selection)) {
    const std::size_t bands = bank_.size();
    if (band_norm_.size() != bands) throw DataError("band_norm length must match the filter count");
    for (double b : band_norm_) {
        if (!std::isfinite(b) || b <= 0.0) throw DataError("band_norm entries must be positive");
    }
    if (references_.empty()) throw DataError("model has no references");
    for (const auto& ref : references_) {
        if (ref.vec.size() != bands) {
            throw DataError("reference '" + ref.label + "' length must match the filter count");
        }
        double norm_sq = 0.0;
        for (double v : ref.vec) norm_sq += v * v;
        if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-9) {
            throw DataError("reference '" + ref.label + "' is not unit norm");
        }
    }
}

std::vector<double> TrainedModel::record(const Spectrum& s) const {
    if (full_spectrum_) {
        // Delta-impulse bank: recording is direct sampling on the model grid.
        return resample(s, bank_[0].grid()).values();
    }
    const SpectrumSet single(std::vector<Spectrum>{s});
    const FilterMatrix responses = integrate_responses(bank_, single);
    std::vector<double> out(bank_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = responses.at(i, 0);
    return out;
}

namespace {

std::vector<double> compute_band_norm(const FilterMatrix& recorded, BandNormKind kind) {
    const std::size_t bands = recorded.rows();
    const std::size_t m = recorded.cols();
    std::vector<double> norm(bands, 0.0);
    for (std::size_t b = 0; b < bands; ++b) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double v = recorded.at(b, j);
            switch (kind) {
                case BandNormKind::rms: acc += v * v; break;
                case BandNormKind::max_abs: acc = std::max(acc, std::abs(v)); break;
                case BandNormKind::mean: acc += v; break;
            }
        }
        switch (kind) {
            case BandNormKind::rms: norm[b] = std::sqrt(acc / static_cast<double>(m)); break;
            case BandNormKind::max_abs: norm[b] = acc; break;
            case BandNormKind::mean: norm[b] = acc / static_cast<double>(m); break;
        }
        if (!(norm[b] > 0.0)) {
            throw DataError("band " + recorded.filter_ids()[b] +
                            " has zero response over the training set");
        }
    }
    return norm;
}

std::vector<Reference> build_references(const FilterMatrix& recorded,
                                        const std::vector<double>& band_norm) {
    std::vector<Reference> refs;
    refs.reserve(recorded.cols());
    for (std::size_t j = 0; j < recorded.cols(); ++j) {
        std::vector<double> vec(recorded.rows());
        double norm_sq = 0.0;
        for (std::size_t b = 0; b < recorded.rows(); ++b) {
            vec[b] = recorded.at(b, j) / band_norm[b];
            norm_sq += vec[b] * vec[b];
        }
        if (!(norm_sq > 0.0)) {
            throw DataError("class '" + recorded.class_labels()[j] +
                            "' has an all-zero response vector");
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& v : vec) v *= inv;
        refs.push_back({recorded.class_labels()[j], std::move(vec)});
    }
    return refs;
}

TrainedModel assemble(const FilterBank& selected, const SpectrumSet& normalized_means,
                      MetricId metric, const TrainOptions& options,
                      std::optional<SelectionResult> selection) {
    const FilterMatrix recorded = integrate_responses(selected, normalized_means);
    std::vector<double> band_norm = compute_band_norm(recorded, options.band_norm);
    std::vector<Reference> references = build_references(recorded, band_norm);
    return TrainedModel(selected, std::move(band_norm), std::move(references), metric, false,
                        std::move(selection));
}

SpectrumSet normalized_class_means(const SpectrumSet& training) {
    if (training.classes().size() < 2) throw DataError("training needs at least 2 classes");
    return l2_normalize(average_by_class(training));
}

} // namespace

TrainedModel train(const SpectrumSet& training, const FilterBank& bank, const FbsConfig& config,
                   MetricId metric, const TrainOptions& options) {
    const SpectrumSet means = normalized_class_means(training);
    const FilterMatrix responses = integrate_responses(bank, means);
    const AdjacencyMatrix adjacency = build_adjacency(responses, metric, options.adjacency);
    SelectionResult selected = fbs_select(adjacency, config);

    std::vector<FilterCurve> chosen;
    chosen.reserve(selected.selection.size());
    for (std::size_t i : selected.selection.chosen()) chosen.push_back(bank[i]);
    return assemble(FilterBank(std::move(chosen)), means, metric, options, std::move(selected));
}

TrainedModel train_preselected(const SpectrumSet& training, const FilterBank& bank, MetricId metric,
                               const TrainOptions& options) {
    return assemble(bank, normalized_class_means(training), metric, options, std::nullopt);
}

TrainedModel full_spectrum_model(const SpectrumSet& training, MetricId metric) {
    const SpectrumSet means = normalized_class_means(training);
    const WavelengthGrid& grid = means.grid();

    std::vector<FilterCurve> deltas;
    deltas.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> t(grid.size(), 0.0);
        t[i] = 1.0;
        deltas.emplace_back(grid, std::move(t), "delta" + format_double(grid[i]) + "nm", grid[i],
                            0.0);
    }

    std::vector<Reference> references;
    references.reserve(means.size());
    for (const auto& s : means.spectra()) references.push_back({s.label(), s.values()});

    return TrainedModel(FilterBank(std::move(deltas)), std::vector<double>(grid.size(), 1.0),
                        std::move(references), metric, true);
}

std::string classify(const TrainedModel& model, const Spectrum& s) {
    std::vector<double> vec = model.record(s);
    double norm_sq = 0.0;
    for (std::size_t b = 0; b < vec.size(); ++b) {
        vec[b] /= model.band_norm()[b];
        norm_sq += vec[b] * vec[b];
    }
    if (!(norm_sq > 0.0)) {
        throw DataError("spectrum '" + s.label() + "' has an all-zero response vector");
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& v : vec) v *= inv;

    const Reference* best = nullptr;
    double best_distance = 0.0;
    for (const auto& ref : model.references()) {
        const double d = metric_distance(model.metric(), vec, ref.vec);
        if (best == nullptr || d < best_distance) { // strict: first class wins ties
            best = &ref;
            best_distance = d;
        }
    }
    return best->label;
}

ClassificationReport evaluate(const TrainedModel& model, const SpectrumSet& test) {
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    ClassificationReport report;
    for (const auto& s : test.spectra()) {
        const bool known = std::any_of(model.references().begin(), model.references().end(),
                                       [&](const Reference& r) { return r.label == s.label(); });
        if (!known) {
            throw DataError("test label '" + s.label() + "' is not a training class");
        }
        const std::string predicted = classify(model, s);
        ++report.total;
        if (predicted != s.label()) ++report.wrong;
        ++counts[{s.label(), predicted}];
    }
    for (const auto& [key, count] : counts) {
        report.confusions.push_back({key.first, key.second, count});
    }
    return report;
}

void save_model(const std::filesystem::path& file, const TrainedModel& model) {
    const WavelengthGrid& grid = model.bank()[0].grid();
    nlohmann::json bank;
    bank["wavelength_nm"] = grid.samples();
    nlohmann::json filters = nlohmann::json::array();
    for (const auto& f : model.bank().filters()) {
        if (!(f.grid() == grid)) {
            throw DataError("filter '" + f.id() + "' is on a different grid; cannot serialize");
        }
        filters.push_back({{"id", f.id()},
                           {"nominal_center", f.nominal_center()},
                           {"nominal_bandwidth", f.nominal_bandwidth()},
                           {"transmittance", f.transmittance()}});
    }
    bank["filters"] = filters;

    nlohmann::json references = nlohmann::json::array();
    for (const auto& ref : model.references()) {
        references.push_back({{"label", ref.label}, {"values", ref.vec}});
    }

    const nlohmann::json doc = {{"format", "fbselect-model"},
                                {"version", 1},
                                {"metric", to_string(model.metric())},
                                {"full_spectrum", model.full_spectrum()},
                                {"band_norm", model.band_norm()},
                                {"references", references},
                                {"bank", bank}};
    write_file_atomic(file, doc.dump(2) + "\n");
}

TrainedModel load_model(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(file.string() + ": invalid JSON: " + e.what());
    }
    try {
        if (doc.at("format") != "fbselect-model") {
            throw DataError(file.string() + ": not a model file");
        }
        const WavelengthGrid grid(doc.at("bank").at("wavelength_nm").get<std::vector<double>>());
        std::vector<FilterCurve> filters;
        for (const auto& f : doc.at("bank").at("filters")) {
            filters.emplace_back(grid, f.at("transmittance").get<std::vector<double>>(),
                                 f.at("id").get<std::string>(), f.at("nominal_center").get<double>(),
                                 f.at("nominal_bandwidth").get<double>());
        }
        std::vector<Reference> references;
        for (const auto& r : doc.at("references")) {
            references.push_back(
                {r.at("label").get<std::string>(), r.at("values").get<std::vector<double>>()});
        }
        return TrainedModel(FilterBank(std::move(filters)),
                            doc.at("band_norm").get<std::vector<double>>(), std::move(references),
                            metric_from_string(doc.at("metric").get<std::string>()),
                            doc.at("full_spectrum").get<bool>());
    } catch (const nlohmann::json::exception& e) {
        throw DataError(file.string() + ": malformed model file: " + e.what());
    }
}

} // namespace fbs

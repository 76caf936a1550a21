#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mbt/demography.hpp"
#include "mbt/estimation.hpp"
#include "mbt/likelihood.hpp"
#include "mbt/rates.hpp"
#include "mbt/selection.hpp"
#include "mbt/uncertainty.hpp"

namespace mbt::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path);
/// Writes to a temporary sibling and renames it over the target.
void write_atomic(const fs::path& path, const std::string& content);

/// Shortest decimal that round-trips.
std::string format_double(double v);

// Model JSON: {"n", "alpha", "D0", "D1", "d", "atmmpp": {"gamma","mu","lambda"}}.
std::string model_to_json(const TmapModel& model);
TmapModel model_from_json(const std::string& text);

enum class DataFormat { rates, vectors_csv, vectors_json };

std::string to_string(DataFormat f);
DataFormat parse_format(const std::string& name);

/// Decides the format from the content: a JSON object, a CSV with an `age`
/// header, or headerless integer rows. Throws ParseError when unclear.
DataFormat detect_format(const std::string& text);

/// `age,fertility,mortality[,count[,fertility_se]]`, empty cells missing.
/// The class length is taken from `l` or else from the age spacing.
GlobalRates parse_rates_csv(const std::string& text, std::optional<double> l = std::nullopt);
std::string rates_to_csv(const GlobalRates& rates);

/// One comma-separated vector per line, no header.
LifeVectorSample parse_vectors_csv(const std::string& text, double class_length = 1.0);
std::string vectors_to_csv(const LifeVectorSample& sample);

/// {"class_length": l, "vectors": [[...], ...]}
LifeVectorSample parse_vectors_json(const std::string& text);
std::string vectors_to_json(const LifeVectorSample& sample);

std::string curves_to_csv(const DemographicCurves& curves);
std::string band_to_csv(const ConfidenceBand& band);
std::string band_metadata_json(const ConfidenceBand& band, const std::string& output);
std::string selection_to_json(const SelectionReport& report);
std::string fit_trace_to_json(const FitResult& fit);
std::string extinction_to_csv(const std::vector<double>& ages, const std::vector<double>& probabilities);

}  // namespace mbt::io

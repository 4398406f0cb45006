#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "amvp/adaptive.hpp"
#include "amvp/chow.hpp"
#include "amvp/frontier.hpp"
#include "amvp/lrd.hpp"
#include "amvp/panel.hpp"
#include "amvp/rolling.hpp"
#include "amvp/scenario_panel.hpp"

namespace amvp::io {

/// Formats a double with the given number of significant digits ("%.*g").
std::string format_sig(double value, int digits);

/// Writes content to path via write-temp-then-rename, creating parent
/// directories as needed.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

// --- emitters (column layouts match the documented file formats) ---

/// asset,mean,std,min,q25,median,q75,max — 6 significant digits.
std::string summary_csv(const std::vector<data::AssetSummary>& summaries);

/// target_return,risk,feasible,w_<asset>... — 8 significant digits.
std::string frontier_csv(const std::vector<optimize::FrontierPoint>& points,
                         const std::vector<std::string>& universe);

/// iteration,universe_size,risk,rate,ridge_applied.
std::string trace_csv(const adaptive::AdaptiveTrace& trace);

/// asset,weight for one iteration of a trace.
std::string weights_csv(const adaptive::AdaptiveTrace& trace, std::size_t iteration_index);

/// date,amrr.
std::string rate_series_csv(const analysis::RateSeries& series);

/// date,f_stat,p_value.
std::string chow_csv(const std::vector<analysis::ChowResult>& results);

/// {series, d_v, hurst, method}.
std::string lrd_json(const analysis::LrdEstimate& estimate, const std::string& series_label);

/// path,<asset columns> — full precision.
std::string scenarios_csv(const scenarios::ScenarioSet& set);

/// Fitted parameters and seed for every asset of a scenario set.
std::string provenance_json(const scenarios::ScenarioSet& set);

/// risk,expected_return line anchored at the rate; slope chosen as the best
/// (return - rate) / risk over the feasible frontier points.
std::string cml_csv(const std::vector<optimize::FrontierPoint>& frontier, double anchor_rate,
                    int n_rows = 50);

// --- loaders ---

/// Reads a scenario CSV written by scenarios_csv.
scenarios::ScenarioSet load_scenarios_csv(const std::filesystem::path& path);

/// Reads a rate-series CSV written by rate_series_csv.
analysis::RateSeries load_rate_series_csv(const std::filesystem::path& path);

/// Reads back a trace CSV written by trace_csv (weights are not stored there
/// and stay empty).
adaptive::AdaptiveTrace load_trace_csv(const std::filesystem::path& path);

/// Reads a weights CSV written by weights_csv.
optimize::PortfolioWeights load_weights_csv(const std::filesystem::path& path);

/// Peeks the header of a CSV to distinguish price panels ("date",...) from
/// scenario sets ("path",...).
enum class CsvKind { price_panel, scenario_set, rate_series, unknown };
CsvKind detect_csv_kind(const std::filesystem::path& path);

}  // namespace amvp::io

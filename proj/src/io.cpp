#include "amvp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "amvp/csv.hpp"
#include "amvp/errors.hpp"

#include "json.hpp"

namespace amvp::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_sig(double value, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string summary_csv(const std::vector<data::AssetSummary>& summaries) {
    std::ostringstream out;
    out << "asset,mean,std,min,q25,median,q75,max\n";
    for (const auto& s : summaries) {
        out << s.asset << ',' << format_sig(s.mean, 6) << ',' << format_sig(s.std_dev, 6) << ','
            << format_sig(s.min, 6) << ',' << format_sig(s.q25, 6) << ',' << format_sig(s.median, 6)
            << ',' << format_sig(s.q75, 6) << ',' << format_sig(s.max, 6) << '\n';
    }
    return out.str();
}

std::string frontier_csv(const std::vector<optimize::FrontierPoint>& points,
                         const std::vector<std::string>& universe) {
    std::ostringstream out;
    out << "target_return,risk,feasible";
    for (const auto& asset : universe) out << ",w_" << asset;
    out << '\n';
    for (const auto& p : points) {
        out << format_sig(p.target_return, 8) << ',' << format_sig(p.risk, 8) << ','
            << (p.feasible ? 1 : 0);
        for (Eigen::Index i = 0; i < p.weights.weights.size(); ++i) {
            out << ',' << format_sig(p.weights.weights(i), 8);
        }
        out << '\n';
    }
    return out.str();
}

std::string trace_csv(const adaptive::AdaptiveTrace& trace) {
    std::ostringstream out;
    out << "iteration,universe_size,risk,rate,ridge_applied\n";
    for (const auto& rec : trace.iterations) {
        out << rec.iteration << ',' << rec.universe_size << ',' << format_sig(rec.risk, 17) << ','
            << format_sig(rec.rate, 17) << ',' << (rec.ridge_applied ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string weights_csv(const adaptive::AdaptiveTrace& trace, std::size_t iteration_index) {
    if (iteration_index >= trace.iterations.size()) {
        throw DataError("weights_csv: iteration index out of range");
    }
    const auto& rec = trace.iterations[iteration_index];
    std::ostringstream out;
    out << "asset,weight\n";
    for (Eigen::Index i = 0; i < rec.weights.size(); ++i) {
        out << trace.final_universe[static_cast<std::size_t>(i)] << ','
            << format_sig(rec.weights(i), 17) << '\n';
    }
    return out.str();
}

std::string rate_series_csv(const analysis::RateSeries& series) {
    std::ostringstream out;
    out << "date,amrr\n";
    for (std::size_t t = 0; t < series.values.size(); ++t) {
        out << series.dates[t].to_string() << ',' << format_sig(series.values[t], 17) << '\n';
    }
    return out.str();
}

std::string chow_csv(const std::vector<analysis::ChowResult>& results) {
    std::ostringstream out;
    out << "date,f_stat,p_value\n";
    for (const auto& r : results) {
        out << r.breakpoint_date.to_string() << ',' << format_sig(r.f_stat, 17) << ','
            << format_sig(r.p_value, 17) << '\n';
    }
    return out.str();
}

std::string lrd_json(const analysis::LrdEstimate& estimate, const std::string& series_label) {
    json j;
    j["series"] = series_label;
    j["d_v"] = estimate.d_v;
    j["hurst"] = estimate.hurst;
    j["method"] = estimate.method;
    return j.dump(2) + "\n";
}

std::string scenarios_csv(const scenarios::ScenarioSet& set) {
    std::ostringstream out;
    out << "path";
    for (const auto& asset : set.assets) out << ',' << asset;
    out << '\n';
    for (Eigen::Index s = 0; s < set.returns.rows(); ++s) {
        out << (s + 1);
        for (Eigen::Index i = 0; i < set.returns.cols(); ++i) {
            out << ',' << format_sig(set.returns(s, i), 17);
        }
        out << '\n';
    }
    return out.str();
}

std::string provenance_json(const scenarios::ScenarioSet& set) {
    json j;
    j["seed"] = set.seed;
    j["assets"] = json::array();
    for (const auto& model : set.provenance) {
        json m;
        m["asset"] = model.asset;
        m["arfima_figarch"] = {
            {"phi_m", model.arfima.phi_m},   {"theta_m", model.arfima.theta_m},
            {"d_m", model.arfima.d_m},       {"mean_const", model.arfima.mean_const},
            {"omega", model.arfima.omega},   {"beta_v", model.arfima.beta_v},
            {"phi_v", model.arfima.phi_v},   {"d_v", model.arfima.d_v},
        };
        m["nig"] = {
            {"alpha_tail", model.nig.alpha_tail},
            {"beta_skew", model.nig.beta_skew},
            {"mu_loc", model.nig.mu_loc},
            {"delta_scale", model.nig.delta_scale},
        };
        m["nig_fallback"] = model.nig_fallback;
        m["boundary"] = model.boundary;
        j["assets"].push_back(m);
    }
    return j.dump(2) + "\n";
}

std::string cml_csv(const std::vector<optimize::FrontierPoint>& frontier, double anchor_rate,
                    int n_rows) {
    double slope = 0.0;
    double max_risk = 0.0;
    for (const auto& p : frontier) {
        if (!p.feasible || !(p.risk > 0.0)) continue;
        slope = std::max(slope, (p.target_return - anchor_rate) / p.risk);
        max_risk = std::max(max_risk, p.risk);
    }
    std::ostringstream out;
    out << "risk,expected_return\n";
    for (int k = 0; k < n_rows; ++k) {
        const double risk = max_risk * 1.05 * static_cast<double>(k) / static_cast<double>(n_rows - 1);
        out << format_sig(risk, 8) << ',' << format_sig(anchor_rate + slope * risk, 8) << '\n';
    }
    return out.str();
}

scenarios::ScenarioSet load_scenarios_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty scenario file '" + path.string() + "'");
    const auto header = data::split_csv_line(line);
    if (header.empty() || header[0] != "path" || header.size() < 2) {
        throw DataError("malformed scenario header in '" + path.string() + "'");
    }
    scenarios::ScenarioSet set;
    set.assets.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = data::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw DataError("scenario row " + std::to_string(line_no) + ": wrong field count");
        }
        std::vector<double> row(set.assets.size());
        for (std::size_t i = 0; i < set.assets.size(); ++i) {
            if (!data::parse_double(fields[i + 1], row[i])) {
                throw DataError("scenario row " + std::to_string(line_no) + ", column '" +
                                header[i + 1] + "': unparseable value");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw DataError("scenario file has fewer than 2 rows");
    set.returns.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(set.assets.size()));
    for (std::size_t s = 0; s < rows.size(); ++s) {
        for (std::size_t i = 0; i < set.assets.size(); ++i) {
            set.returns(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = rows[s][i];
        }
    }
    return set;
}

analysis::RateSeries load_rate_series_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty rate series '" + path.string() + "'");
    const auto header = data::split_csv_line(line);
    if (header.size() != 2 || header[0] != "date") {
        throw DataError("malformed rate-series header in '" + path.string() + "'");
    }
    analysis::RateSeries series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = data::split_csv_line(line);
        if (fields.size() != 2) {
            throw DataError("rate row " + std::to_string(line_no) + ": wrong field count");
        }
        double value = 0.0;
        if (!data::parse_double(fields[1], value)) {
            throw DataError("rate row " + std::to_string(line_no) + ": unparseable value");
        }
        series.dates.push_back(data::Date::parse(fields[0]));
        series.values.push_back(value);
    }
    return series;
}

adaptive::AdaptiveTrace load_trace_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != "iteration,universe_size,risk,rate,ridge_applied") {
        throw DataError("malformed trace header in '" + path.string() + "'");
    }
    adaptive::AdaptiveTrace trace;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = data::split_csv_line(line);
        if (fields.size() != 5) throw DataError("malformed trace row in '" + path.string() + "'");
        adaptive::IterationRecord rec;
        rec.iteration = std::stoi(fields[0]);
        rec.universe_size = static_cast<std::size_t>(std::stoul(fields[1]));
        if (!data::parse_double(fields[2], rec.risk) || !data::parse_double(fields[3], rec.rate)) {
            throw DataError("malformed trace numbers in '" + path.string() + "'");
        }
        rec.ridge_applied = fields[4] == "1";
        trace.iterations.push_back(rec);
    }
    if (trace.iterations.empty()) throw DataError("empty trace in '" + path.string() + "'");
    trace.synthetic_count = static_cast<int>(trace.iterations.size()) - 1;
    return trace;
}

optimize::PortfolioWeights load_weights_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != "asset,weight") {
        throw DataError("malformed weights header in '" + path.string() + "'");
    }
    std::vector<std::string> assets;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = data::split_csv_line(line);
        double w = 0.0;
        if (fields.size() != 2 || !data::parse_double(fields[1], w)) {
            throw DataError("malformed weights row in '" + path.string() + "'");
        }
        assets.push_back(fields[0]);
        values.push_back(w);
    }
    optimize::PortfolioWeights out;
    out.universe = std::move(assets);
    out.weights = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                    static_cast<Eigen::Index>(values.size()));
    return out;
}

CsvKind detect_csv_kind(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) return CsvKind::unknown;
    const auto header = data::split_csv_line(line);
    if (header.empty()) return CsvKind::unknown;
    if (header[0] == "path") return CsvKind::scenario_set;
    if (header[0] == "date" && header.size() == 2 && header[1] == "amrr") return CsvKind::rate_series;
    if (header[0] == "date") return CsvKind::price_panel;
    return CsvKind::unknown;
}

}  // namespace amvp::io

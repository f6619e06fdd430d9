#include "gsde/reports.hpp"

#include "gsde/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>

namespace gsde {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0; // normalize negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : out_(path, std::ios::binary), width_(header.size()) {
    if (!out_) throw InputError("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw InputError("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

void write_ensemble_stats_csv(const PathEnsemble& ens, const std::filesystem::path& path) {
    CsvWriter csv(path, {"t", "control", "mean_X", "var_X", "mean_B", "qv"});
    std::vector<double> xs(ens.replicate_count()), bs(ens.replicate_count());
    for (std::size_t k = 0; k < ens.grid().size(); ++k) {
        for (std::size_t c = 0; c < ens.control_count(); ++c) {
            for (std::size_t r = 0; r < ens.replicate_count(); ++r) {
                xs[r] = ens.state_at(c, r, k, 0);
                bs[r] = ens.driver_at(c, r, k, 0);
            }
            const MomentSummary mx = summarize(xs);
            const MomentSummary mb = summarize(bs);
            csv.row({format_double(ens.grid().time(k)), std::to_string(c),
                     format_double(mx.mean), format_double(mx.variance),
                     format_double(mb.mean), format_double(ens.quad_variation(c, 0, 0, k))});
        }
    }
}

void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path,
                     bool with_timings) {
    CsvWriter csv(path, {"k", "delta", "seconds"});
    for (const auto& row : trace.rows)
        csv.row({std::to_string(row.iteration), format_double(row.delta),
                 format_double(with_timings ? row.seconds : 0.0)});
}

void write_inequality_csv(const InequalityReport& report,
                          const std::filesystem::path& path) {
    CsvWriter csv(path, {"lemma", "p", "lhs", "rhs", "se", "margin"});
    for (const auto& row : report.rows)
        csv.row({row.lemma, format_double(row.p), format_double(row.lhs),
                 format_double(row.rhs), format_double(row.se), format_double(row.margin)});
}

void write_validation_csv(const std::vector<ValidationReport>& reports,
                          const std::filesystem::path& path) {
    CsvWriter csv(path, {"check", "t", "lhs", "bound", "margin", "se"});
    for (const auto& report : reports)
        for (const auto& row : report.rows)
            csv.row({row.check, format_double(row.t), format_double(row.lhs),
                     format_double(row.bound), format_double(row.margin),
                     format_double(row.se)});
}

void write_manifest(const std::filesystem::path& dir, const std::string& config_json,
                    const std::string& hash, std::uint64_t seed,
                    const std::string& pipeline,
                    const std::vector<std::filesystem::path>& files) {
    nlohmann::json doc;
    doc["pipeline"] = pipeline;
    doc["seed"] = seed;
    doc["config_hash"] = hash;
    doc["config"] = nlohmann::json::parse(config_json);
    std::vector<std::string> names;
    names.reserve(files.size());
    for (const auto& f : files) names.push_back(f.filename().string());
    doc["outputs"] = names;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw InputError("cannot write manifest in " + dir.string());
    out << doc.dump(2) << '\n';
}

} // namespace gsde

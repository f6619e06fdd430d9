#pragma once

#include "gsde/ensemble.hpp"
#include "gsde/integrals.hpp"
#include "gsde/solver.hpp"
#include "gsde/validation.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace gsde {

/// Shortest round-trip decimal form of a double ('.' separator, no locale).
std::string format_double(double v);

/// CSV with a header row, UTF-8, LF line endings, '.' decimals. All numbers
/// go through format_double, so files are byte-stable for identical data.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void close();

private:
    std::ofstream out_;
    std::size_t width_;
};

void write_ensemble_stats_csv(const PathEnsemble& ens, const std::filesystem::path& path);
void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path,
                     bool with_timings);
void write_inequality_csv(const InequalityReport& report,
                          const std::filesystem::path& path);
void write_validation_csv(const std::vector<ValidationReport>& reports,
                          const std::filesystem::path& path);

/// Result of one experiment run: the produced files plus the exit contract
/// (0 ok, 1 error, 2 finished but flagged non-convergent).
struct ReportBundle {
    std::filesystem::path out_dir;
    std::vector<std::filesystem::path> files;
    int exit_code = 0;
    std::vector<std::string> messages;
};

/// manifest.json with the canonical config, its hash, the seed and the
/// produced file list. No timestamps: manifests are reproducible.
void write_manifest(const std::filesystem::path& dir, const std::string& config_json,
                    const std::string& hash, std::uint64_t seed,
                    const std::string& pipeline,
                    const std::vector<std::filesystem::path>& files);

} // namespace gsde

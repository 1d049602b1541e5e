#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace lab {

/// Acceptance criterion identifiers; each appears on exactly one check row
/// across the five default subcommand reports.
namespace criterion {
inline constexpr const char* kHLimit = "h_limit";
inline constexpr const char* kDomainDifference = "domain_difference";
inline constexpr const char* kLemmaDecomposition = "lemma_decomposition";
inline constexpr const char* kKernelCrossValidation = "kernel_cross_validation";
inline constexpr const char* kExtremalRate = "extremal_rate";
inline constexpr const char* kBarrierContainment = "barrier_containment";
inline constexpr const char* kGrowthConsistency = "growth_consistency";
inline constexpr const char* kRateSanity = "rate_sanity";
inline constexpr const char* kConservation = "conservation";
inline constexpr const char* kDeterminism = "determinism";
inline constexpr const char* kNone = "-";  // auxiliary row
}  // namespace criterion

std::vector<std::string> all_criteria();

struct CheckRow {
    std::string name;
    std::string criterion = criterion::kNone;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
    double margin = 0.0;
    std::string note;
};

struct RunReport {
    std::string command;
    std::string version = "1.0.0";
    std::string config_hash;
    bool deterministic = false;
    double wall_ms = 0.0;  // zeroed in deterministic mode
    std::vector<CheckRow> checks;
    std::vector<std::string> artifacts;

    void add(CheckRow row);
    bool all_pass() const;
    /// Sorted-key JSON; byte-stable given identical contents.
    std::string to_json() const;
    void write(const std::string& path) const;
};

std::uint64_t fnv1a(std::string_view bytes);
std::string hash_hex(std::string_view bytes);

/// CSV emission with the versioned "# schema=1" header comment.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void row_raw(const std::string& line);

  private:
    std::ofstream os_;
};

}  // namespace lab

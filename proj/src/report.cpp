#include "lab/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <stdexcept>

namespace lab {

std::vector<std::string> all_criteria() {
    return {criterion::kHLimit,        criterion::kDomainDifference,
            criterion::kLemmaDecomposition, criterion::kKernelCrossValidation,
            criterion::kExtremalRate,  criterion::kBarrierContainment,
            criterion::kGrowthConsistency,  criterion::kRateSanity,
            criterion::kConservation,  criterion::kDeterminism};
}

void RunReport::add(CheckRow row) { checks.push_back(std::move(row)); }

bool RunReport::all_pass() const {
    for (const CheckRow& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    j["version"] = version;
    j["config_hash"] = config_hash;
    j["deterministic"] = deterministic;
    j["wall_ms"] = deterministic ? 0.0 : wall_ms;
    j["checks"] = nlohmann::ordered_json::array();
    for (const CheckRow& c : checks) {
        nlohmann::ordered_json row;
        row["name"] = c.name;
        row["criterion"] = c.criterion;
        row["value"] = c.value;
        row["bound"] = c.bound;
        row["pass"] = c.pass;
        row["margin"] = c.margin;
        row["note"] = c.note;
        j["checks"].push_back(row);
    }
    j["artifacts"] = artifacts;
    return j.dump(2) + "\n";
}

void RunReport::write(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("report: cannot write " + path);
    os << to_json();
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : bytes) {
        h ^= (unsigned char)c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(bytes));
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : os_(path) {
    if (!os_) throw std::runtime_error("csv: cannot write " + path);
    os_ << "# schema=1\n";
    for (size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
    os_.precision(17);
}

void CsvWriter::row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
    os_ << "\n";
}

void CsvWriter::row_raw(const std::string& line) { os_ << line << "\n"; }

}  // namespace lab

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mladlasso::acceptance {

struct Outcome
{
    int id = 0;
    std::string name;
    std::string group;
    bool passed = false;
    std::string measured;
    std::string expected;
    double seconds = 0.0;
};

struct Options
{
    std::uint64_t seed = 20211;
    int genotype_replicates = 20;
    int zeros_replicates = 100;
    /// Criterion name, group name, or numeric id; empty runs everything.
    std::string only;
    std::filesystem::path scratch_dir;
    /// Progress notes while long criteria run; may be null.
    std::ostream* progress = nullptr;
};

struct CriterionInfo
{
    int id;
    const char* name;
    const char* group;
};

const std::vector<CriterionInfo>& criteria();

/// True if `selector` names a criterion, a group, or a criterion id.
bool is_known_selector(const std::string& selector);

/// Runs every selected criterion in id order; thresholds are fixed constants.
std::vector<Outcome> run(const Options& options);

/// One line per outcome: status, id, name, measured vs expected, runtime.
void print_report(std::ostream& out, const std::vector<Outcome>& outcomes);

}  // namespace mladlasso::acceptance

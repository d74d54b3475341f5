#pragma once

// Exact identities checked on random or gridded points. Shared by the CLI
// `identities` command, the canonical_identities experiment and the tests.

#include <cstdint>
#include <string>
#include <vector>

namespace cdlab::identities {

struct IdentityCheck {
    std::string module;
    std::string name;
    /// Worst error over the sampled points, in the check's own (usually relative) measure.
    double error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

std::vector<std::string> modules();

/// Runs every suite whose module equals filter (all when filter is empty).
/// Throws DomainError for an unknown filter.
std::vector<IdentityCheck> run(const std::string& filter = "", std::uint64_t seed = 1);

}  // namespace cdlab::identities

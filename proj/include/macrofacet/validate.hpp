// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <macrofacet/ndf.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace macrofacet {

struct Check {
    std::string suite;
    std::string name;
    double measured = 0;
    double tolerance = 0;
    // true: pass iff measured >= tolerance (e.g. a z-score that must be
    // large); false: pass iff measured <= tolerance.
    bool at_least = false;
    bool passed = false;
    std::string detail;
};

// Functions under test. Validation goes through this table so that a
// harness can substitute a deliberately broken implementation and confirm
// that the suites notice.
struct ValidationOps {
    std::function<double(const Direction&, const RoughnessTriple&)> generalized_ndf =
        [](const Direction& wm, const RoughnessTriple& a3) { return macrofacet::generalized_ndf(wm, a3); };
    std::function<double(const Direction&, const RoughnessTriple&)> generalized_lambda =
        [](const Direction& w, const RoughnessTriple& a3) { return macrofacet::generalized_lambda(w, a3); };
};

// Known mutations: "ndf-sign" (generalized NDF evaluated at the mirrored
// normal) and "lambda-sign" (generalized Lambda with the sign of cos theta
// dropped). Throws ParameterDomainError for other names.
ValidationOps mutated_ops(const std::string& mutation);

struct ValidationOptions {
    // Keys are "name" or "suite.name"; the suite-qualified key wins.
    std::map<std::string, double> tolerances;
    ValidationOps ops;
    std::uint64_t seed = 0;
    int threads = 0;
};

// special-functions, lambda, ndf, vndf, phase, transmittance, furnace,
// multiplicativity.
const std::vector<std::string>& validation_suites();

// Runs one suite or "all". Throws ParameterDomainError for unknown suites.
std::vector<Check> run_validation(const std::string& suite, const ValidationOptions& options = {});

// "PASS suite.name measured=... tol<=..." style line.
std::string format_check(const Check& c);

}  // namespace macrofacet
